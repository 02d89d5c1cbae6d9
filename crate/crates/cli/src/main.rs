//! `thermoshift --spec job.json --out dir`
//!
//! Reads a JSON job, runs one command and writes `report.json` (and
//! `report.csv` for row output) to the output directory. Without `--out`
//! the JSON report goes to stdout.

mod commands;
mod failure;
mod job;
mod table;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use commands::{Context, Outcome};
use failure::{Failure, Kind};
use job::*;

const AFTER_HELP: &str = "\
Job file: {\"model\": {...}, \"potential\": {...}, \"command\": \"...\", \"params\": {...}, \"cap\": n}

CSV columns by command:
  enumerate      n, class, count, logLambda
  pressure       t, n, logLambda, lower, upper, lower_method, upper_method
  hyperbolicity  t, n, logLambda, lower, upper, sup_i_lower, sup_i_upper, verdict, certified
  approach       n, worst_distance, budget, witness, pass, in_scope
  series         n_terms, f_n, h_n, cp_n, cs_n, tail_f, residual
  decompose      word, prefix, core, suffix, decompositions, in_g_star, greedy
  gap-lab (toy)  instance, w, parts, psi, phi_w, phi_psi, phi_bound, ru_lhs, ru_mid, ru_rhs, markers, r_u, pass
  factor         n, source_count, image_count, g, g_tilde
bowen-root, decipher and gap-lab (formula) write JSON only.

Exit codes: 0 success, 1 invalid job, 2 enumeration cap exhausted, 3 certificate not reached.";

#[derive(Parser, Debug)]
#[command(name = "thermoshift", version, about = "Pressure, hyperbolicity and coded-shift reports for shift spaces", after_help = AFTER_HELP)]
struct Args {
    /// Job file (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Output directory; created if missing.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Largest number of words held by one enumeration; overrides the job file.
    #[arg(long)]
    cap: Option<usize>,
}

fn load(path: &Path, flag_cap: Option<usize>) -> Result<(RawJob, usize), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(Kind::Io, format!("{}: {e}", path.display())))?;
    let raw: RawJob = serde_json::from_str(&text).map_err(|e| Failure::schema(format!("job: {e}")))?;
    let cap = resolve_cap(raw.cap, flag_cap)?;
    Ok((raw, cap))
}

fn dispatch(raw: &RawJob, cap: usize) -> Result<(ResolvedJob, Outcome), Failure> {
    let model = raw.model.as_ref().map(|m| m.build()).transpose()?;
    let potential = match &model {
        Some(m) => Some(raw.potential.build(m.alphabet().size())?),
        None => None,
    };
    let ctx = Context { model: model.as_ref(), potential: potential.as_ref(), cap };
    let (params, outcome) = match raw.command {
        CommandName::Enumerate => run(&raw.params, |p| commands::enumerate(&ctx, p))?,
        CommandName::Pressure => run(&raw.params, |p| commands::pressure(&ctx, p))?,
        CommandName::Hyperbolicity => run(&raw.params, |p| commands::hyperbolicity(&ctx, p))?,
        CommandName::Approach => run(&raw.params, |p| commands::approach(&ctx, p))?,
        CommandName::Series => run(&raw.params, |p| commands::series(&ctx, p))?,
        CommandName::BowenRoot => run(&raw.params, |p| commands::bowen(&ctx, p))?,
        CommandName::Decipher => run(&raw.params, |p| commands::decipher(&ctx, p))?,
        CommandName::Decompose => run(&raw.params, |p| commands::decompose(&ctx, p))?,
        CommandName::GapLab => run(&raw.params, |p| commands::gap_lab(&ctx, p))?,
        CommandName::Factor => run(&raw.params, |p| commands::factor(&ctx, p))?,
    };
    let resolved =
        ResolvedJob { model: raw.model.clone(), potential: raw.potential.clone(), command: raw.command, params, cap };
    Ok((resolved, outcome))
}

fn run<T, F>(raw: &Option<Value>, f: F) -> Result<(Value, Outcome), Failure>
where
    T: serde::de::DeserializeOwned + serde::Serialize,
    F: FnOnce(&T) -> Result<Outcome, Failure>,
{
    let (typed, resolved) = decode_params::<T>(raw)?;
    Ok((resolved, f(&typed)?))
}

fn report(resolved: &ResolvedJob, outcome: &Outcome) -> Value {
    // serde_json's default map is ordered, so keys come out sorted.
    let spec = serde_json::to_value(resolved).expect("job serializes");
    json!({
        "versions": { "thermoshift": thermoshift::VERSION, "cli": env!("CARGO_PKG_VERSION") },
        "spec": spec,
        "result": outcome.result,
        "table": outcome.table.as_ref().map(table::Table::to_json),
        "uncertified": outcome.uncertified,
    })
}

fn write(out: Option<&Path>, report: &Value, outcome: &Outcome) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("report.json"), text + "\n")?;
            if let Some(t) = &outcome.table {
                t.write_csv(&dir.join("report.csv"))?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn main_inner(args: &Args) -> Result<(), Failure> {
    if let Some(k) = args.threads {
        if k == 0 {
            return Err(Failure::schema("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Failure::new(Kind::Io, e.to_string()))?;
    }
    let (raw, cap) = load(&args.spec, args.cap)?;
    let (resolved, outcome) = dispatch(&raw, cap)?;
    write(args.out.as_deref(), &report(&resolved, &outcome), &outcome)?;
    match &outcome.uncertified {
        Some(msg) => Err(Failure::new(Kind::Uncertifiable, msg.clone())),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match main_inner(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let text = f.to_json();
            if let Some(dir) = &args.out {
                let _ = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(dir.join("error.json"), &text));
            }
            eprintln!("{text}");
            ExitCode::from(f.code as u8)
        }
    }
}
