//! Exit codes and the error JSON printed on failure.

use serde::Serialize;
use thermoshift::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Schema,
    CapExhausted,
    Uncertifiable,
    Io,
}

impl Kind {
    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Schema | Kind::Io => 1,
            Kind::CapExhausted => 2,
            Kind::Uncertifiable => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub kind: Kind,
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(kind: Kind, message: impl Into<String>) -> Self {
        Failure { kind, code: kind.exit_code(), message: message.into() }
    }

    pub fn schema(message: impl Into<String>) -> Self {
        Self::new(Kind::Schema, message)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::CapExceeded { .. } => Kind::CapExhausted,
            Error::Uncertifiable { .. } | Error::FarWordNotFound { .. } => Kind::Uncertifiable,
            _ => Kind::Schema,
        };
        Failure::new(kind, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(Kind::Io, e.to_string())
    }
}
