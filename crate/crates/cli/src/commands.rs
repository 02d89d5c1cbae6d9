//! One function per command. Each returns the structured result and, for
//! row-shaped output, the table written to CSV.

use rayon::prelude::*;
use serde_json::{json, Value};
use thermoshift::approach::approachability_report;
use thermoshift::gaplab::{bound_report, derive_params, sum_g_check, toy_instances, GapInputs, GapParams};
use thermoshift::series::{bowen_root, pressure_from_series, series_eval, RootKind};
use thermoshift::shift::{apply_factor_code, Family, Staircase};
use thermoshift::structure::{decompositions, greedy_decode, sardinas_patterson, staircase_decompose};
use thermoshift::thermo::{enumerate_sum, hyperbolicity_check, pressure_bracket_capped, Potential};
use thermoshift::{ClassSelector, IntSeq, ShiftModel, Word};

use crate::failure::Failure;
use crate::job::*;
use crate::table::Table;

pub struct Outcome {
    pub result: Value,
    pub table: Option<Table>,
    /// Set when the report is written but a requested certificate failed.
    pub uncertified: Option<String>,
}

impl Outcome {
    fn new(result: Value, table: Option<Table>) -> Self {
        Outcome { result, table, uncertified: None }
    }
}

pub struct Context<'a> {
    pub model: Option<&'a ShiftModel>,
    pub potential: Option<&'a Potential>,
    pub cap: usize,
}

impl Context<'_> {
    fn model(&self) -> Result<&ShiftModel, Failure> {
        self.model.ok_or_else(|| Failure::schema("this command needs a `model`"))
    }

    fn potential(&self) -> Result<&Potential, Failure> {
        self.potential.ok_or_else(|| Failure::schema("this command needs a `model`"))
    }

    fn staircase(&self) -> Result<&Staircase, Failure> {
        self.model()?.as_staircase().ok_or_else(|| Failure::schema("this command needs a staircase model"))
    }

    /// `f` from the params, else from the staircase model.
    fn profile(&self, f: &Option<IntSeq>) -> Result<IntSeq, Failure> {
        match (f, self.model.and_then(ShiftModel::as_staircase)) {
            (Some(f), _) => Ok(f.clone()),
            (None, Some(s)) => Ok(s.f().clone()),
            (None, None) => Err(Failure::schema("give `f` or a staircase model")),
        }
    }
}

fn check_range(n_min: usize, n_max: usize) -> Result<(), Failure> {
    if n_min == 0 || n_min > n_max {
        return Err(Failure::schema(format!("need 1 <= n_min <= n_max, got {n_min}..{n_max}")));
    }
    Ok(())
}

pub fn enumerate(ctx: &Context, p: &EnumerateParams) -> Result<Outcome, Failure> {
    check_range(p.n_min, p.n_max)?;
    let model = ctx.model()?;
    let pot = ctx.potential()?;
    let mut table = Table::new(&["n", "class", "count", "logLambda"]);
    let mut lists = Vec::new();
    for n in p.n_min..=p.n_max {
        let slice = model.enumerate_class(p.class, n, ctx.cap)?;
        if !slice.complete {
            return Err(thermoshift::Error::CapExceeded { cap: ctx.cap, n }.into());
        }
        let sum = enumerate_sum(model, pot, p.class, n, ctx.cap)?;
        table.push(vec![n.into(), p.class.to_string().into(), slice.len().into(), sum.log_value.into()]);
        if p.words {
            lists.push(json!({ "n": n, "words": slice.words }));
        }
    }
    let result = json!({ "model": model.describe(), "words": p.words.then_some(lists) });
    Ok(Outcome::new(result, Some(table)))
}

fn grid(p: &GridParams, pot: &Potential) -> Result<Vec<(Option<f64>, Potential)>, Failure> {
    check_range(p.n_min, p.n_max)?;
    Ok(match &p.t_grid {
        None => vec![(None, pot.clone())],
        Some(ts) if ts.is_empty() => return Err(Failure::schema("t_grid is empty")),
        Some(ts) => {
            if ts.iter().any(|t| !t.is_finite()) {
                return Err(Failure::schema("t_grid values must be finite"));
            }
            ts.iter().map(|&t| (Some(t), pot.scaled(t))).collect()
        }
    })
}

pub fn pressure(ctx: &Context, p: &GridParams) -> Result<Outcome, Failure> {
    let model = ctx.model()?;
    let jobs: Vec<(Option<f64>, Potential, usize)> = grid(p, ctx.potential()?)?
        .into_iter()
        .flat_map(|(t, pot)| (p.n_min..=p.n_max).map(move |n| (t, pot.clone(), n)))
        .collect();
    let brackets = jobs
        .par_iter()
        .map(|(_, pot, n)| {
            let b = pressure_bracket_capped(model, pot, *n, ctx.cap)?;
            if b.n < *n {
                return Err(thermoshift::Error::CapExceeded { cap: ctx.cap, n: b.n + 1 }.into());
            }
            Ok(b)
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut table = Table::new(&["t", "n", "logLambda", "lower", "upper", "lower_method", "upper_method"]);
    let mut last = Vec::new();
    for ((t, _, n), b) in jobs.iter().zip(&brackets) {
        let log_lambda = b.rows.last().map(|r| r.log_lambda);
        table.push(vec![
            (*t).into(),
            (*n).into(),
            log_lambda.into(),
            b.lower.into(),
            b.upper.into(),
            b.lower_method.as_str().into(),
            b.upper_method.as_str().into(),
        ]);
        if *n == p.n_max {
            last.push(json!({ "t": t, "bracket": b }));
        }
    }
    Ok(Outcome::new(json!({ "model": model.describe(), "brackets": last }), Some(table)))
}

pub fn hyperbolicity(ctx: &Context, p: &GridParams) -> Result<Outcome, Failure> {
    let model = ctx.model()?;
    let points = grid(p, ctx.potential()?)?;
    let reports = points
        .par_iter()
        .map(|(_, pot)| hyperbolicity_check(model, pot, p.n_max).map_err(Failure::from))
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut table = Table::new(&[
        "t",
        "n",
        "logLambda",
        "lower",
        "upper",
        "sup_i_lower",
        "sup_i_upper",
        "verdict",
        "certified",
    ]);
    let mut full = Vec::new();
    for ((t, _), r) in points.iter().zip(&reports) {
        table.push(vec![
            (*t).into(),
            r.pressure.n.into(),
            r.pressure.rows.last().map(|x| x.log_lambda).into(),
            r.pressure.lower.into(),
            r.pressure.upper.into(),
            r.sup_i.lower.into(),
            r.sup_i.upper.into(),
            r.verdict.to_string().into(),
            r.certified.into(),
        ]);
        full.push(json!({ "t": t, "report": r }));
    }
    Ok(Outcome::new(json!({ "model": model.describe(), "reports": full }), Some(table)))
}

pub fn approach(ctx: &Context, p: &ApproachParams) -> Result<Outcome, Failure> {
    check_range(p.n_min, p.n_max)?;
    let model = ctx.model()?;
    let stair = model.as_staircase();
    let g = match (&p.g, stair) {
        (Some(g), _) => g.clone(),
        (None, Some(s)) => IntSeq::staircase_budget(s.f(), s.n1()),
        (None, None) => return Err(Failure::schema("`g` is required for non-staircase models")),
    };
    let n0 = p.n0.unwrap_or(1);
    let rows = approachability_report(model, p.class, &g, p.n_min..=p.n_max, n0, ctx.cap)?;
    if rows.len() < p.n_max + 1 - p.n_min {
        let n = p.n_min + rows.len();
        return Err(thermoshift::Error::CapExceeded { cap: ctx.cap, n }.into());
    }
    let mut table = Table::new(&["n", "worst_distance", "budget", "witness", "pass", "in_scope"]);
    for r in &rows {
        table.push(vec![
            r.n.into(),
            r.worst_distance.into(),
            r.budget.into(),
            r.witness.as_ref().map(Word::to_string).into(),
            r.pass.into(),
            r.in_scope.into(),
        ]);
    }
    let pass = rows.iter().filter(|r| r.in_scope).all(|r| r.pass);
    Ok(Outcome::new(json!({ "model": model.describe(), "g": g, "n0": n0, "pass": pass }), Some(table)))
}

pub fn series(ctx: &Context, p: &SeriesParams) -> Result<Outcome, Failure> {
    let f = ctx.profile(&p.f)?;
    let mut table = Table::new(&["n_terms", "f_n", "h_n", "cp_n", "cs_n", "tail_f", "residual"]);
    for &n in &p.n_terms {
        let s = series_eval(&f, p.t, p.x, n)?;
        table.push(vec![
            n.into(),
            s.f_n.into(),
            s.h_n.into(),
            s.cp_n.into(),
            s.cs_n.into(),
            s.tail_f.into(),
            s.residual.into(),
        ]);
    }
    let pressure = match p.pressure_tol {
        Some(tol) => Some(pressure_from_series(&f, p.t, tol)?),
        None => None,
    };
    Ok(Outcome::new(json!({ "f": f, "t": p.t, "x": p.x, "pressure": pressure }), Some(table)))
}

pub fn bowen(ctx: &Context, p: &BowenParams) -> Result<Outcome, Failure> {
    let f = ctx.profile(&p.f)?;
    if !(p.tol > 0.0) {
        return Err(Failure::schema("tol must be positive"));
    }
    let r = bowen_root(&f, p.gamma, p.tol);
    let verdict = match r.kind {
        RootKind::Finite { .. } => "finite",
        RootKind::Infinite => "infinite",
        RootKind::Unknown => "unknown",
    };
    let uncertified = match (&r.kind, r.tol_met) {
        (RootKind::Unknown, _) => Some(format!("no certificate for the Bowen root: {}", r.note)),
        (RootKind::Finite { .. }, false) => Some(format!("bisection stalled before tolerance {}", p.tol)),
        _ => None,
    };
    Ok(Outcome { result: json!({ "f": f, "verdict": verdict, "root": r }), table: None, uncertified })
}

pub fn decipher(ctx: &Context, p: &DecipherParams) -> Result<Outcome, Failure> {
    let (code, truncation) = match (&p.code, p.truncate) {
        (Some(c), None) => (c.clone(), None),
        (None, Some(l)) => {
            let s = ctx.staircase()?;
            ((1..=l).flat_map(|n| s.generators(n)).collect::<Vec<_>>(), Some(l))
        }
        _ => return Err(Failure::schema("give exactly one of `code` and `truncate`")),
    };
    let v = sardinas_patterson(&code)?;
    let verdict = if v.unique { "unique" } else { "not-unique" };
    Ok(Outcome::new(
        json!({ "verdict": verdict, "truncation": truncation, "code_size": code.len(), "detail": v }),
        None,
    ))
}

pub fn decompose(ctx: &Context, p: &DecomposeParams) -> Result<Outcome, Failure> {
    let s = ctx.staircase()?;
    let words = match (&p.words, p.n) {
        (Some(ws), None) => ws.clone(),
        (None, Some(n)) => {
            let slice = ctx.model()?.enumerate_language(n, ctx.cap)?;
            if !slice.complete {
                return Err(thermoshift::Error::CapExceeded { cap: ctx.cap, n }.into());
            }
            slice.words.clone()
        }
        _ => return Err(Failure::schema("give exactly one of `words` and `n`")),
    };
    let mut table = Table::new(&["word", "prefix", "core", "suffix", "decompositions", "in_g_star", "greedy"]);
    let mut unique = 0;
    for w in &words {
        let d = staircase_decompose(s, w)?;
        let count = decompositions(s, w).len();
        unique += usize::from(count == 1);
        let core: Vec<String> = d.core.iter().map(Word::to_string).collect();
        let greedy = greedy_decode(s, w).map(|g| g.iter().map(Word::to_string).collect::<Vec<_>>().join("."));
        table.push(vec![
            w.to_string().into(),
            d.prefix.to_string().into(),
            core.join(".").into(),
            d.suffix.to_string().into(),
            count.into(),
            s.in_gstar(w).into(),
            greedy.into(),
        ]);
    }
    Ok(Outcome::new(json!({ "words": words.len(), "unique": unique }), Some(table)))
}

fn free_class(model: &ShiftModel) -> Result<ClassSelector, Failure> {
    match model.family() {
        Family::Full => Ok(ClassSelector::Language),
        Family::Staircase(_) => Ok(ClassSelector::GStar),
        _ => Err(Failure::schema(format!("gap-lab has no free class for the {}", model.describe()))),
    }
}

pub fn gap_lab(ctx: &Context, p: &GapLabParams) -> Result<Outcome, Failure> {
    let model = ctx.model()?;
    match p.mode {
        GapMode::Formula => {
            if p.toy.is_some() {
                return Err(Failure::schema("`toy` parameters are only read in toy mode"));
            }
            let inputs = GapInputs::for_model(model, p.g.clone(), p.holder, p.margin)?;
            let params = derive_params(&inputs)?;
            let report = bound_report(&params);
            let flipped = bound_report(&params.with_delta_exp(params.delta_exp - 1));
            let ln_k = params.ln_k;
            let sum_g = sum_g_check(&p.g, params.gamma, params.l, p.sum_g_trials, p.sum_g_n_max, p.seed);
            Ok(Outcome::new(
                json!({
                    "mode": "formula",
                    "inputs": inputs,
                    "params": params,
                    "ln_k": ln_k,
                    "bounds": report,
                    "delta_doubled": flipped,
                    "sum_g": sum_g,
                    "deviations": [
                        "corridor segments are repaired by a nearest word of F instead of the corridor construction",
                        "delta is carried as |log delta| in double precision",
                    ],
                }),
                None,
            ))
        }
        GapMode::Toy => {
            let t = p.toy.as_ref().ok_or_else(|| Failure::schema("toy mode needs `toy` parameters"))?;
            let pot = ctx.potential()?;
            let v = t.v.unwrap_or_else(|| pot.spread());
            let params = GapParams::toy(v, t.beta, t.m, t.gamma, t.l, t.delta_exp, t.corridor, model.alphabet().size());
            let class = free_class(model)?;
            let records = toy_instances(model, class, &params, pot, &p.g, t.n, t.instances, t.max_parts, p.seed)?;
            let mut table = Table::new(&[
                "instance", "w", "parts", "psi", "phi_w", "phi_psi", "phi_bound", "ru_lhs", "ru_mid", "ru_rhs", "markers",
                "r_u", "pass",
            ]);
            let join = |xs: &[usize]| xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
            for (i, r) in records.iter().enumerate() {
                table.push(vec![
                    i.into(),
                    r.w.to_string().into(),
                    join(&r.parts).into(),
                    r.psi.to_string().into(),
                    r.phi_w.into(),
                    r.phi_psi.into(),
                    r.phi_bound.into(),
                    r.ru_lhs.into(),
                    r.ru_mid.into(),
                    r.ru_rhs.into(),
                    join(&r.markers).into(),
                    join(&r.r_u).into(),
                    r.checks.all().into(),
                ]);
            }
            let all = records.iter().all(|r| r.checks.all());
            Ok(Outcome::new(
                json!({
                    "mode": "toy",
                    "params": params,
                    "bounds": bound_report(&params),
                    "all_checks_pass": all,
                    "instances": records,
                }),
                Some(table),
            ))
        }
    }
}

pub fn factor(ctx: &Context, p: &FactorParams) -> Result<Outcome, Failure> {
    check_range(p.n_min, p.n_max)?;
    let model = ctx.model()?;
    let code = p.code.build(model.alphabet())?;
    let r = code.radius() as u64;
    let mut table = Table::new(&["n", "source_count", "image_count", "g", "g_tilde"]);
    let mut g_tilde = None;
    for n in p.n_min..=p.n_max {
        let img = apply_factor_code(model, &code, &p.g, n, ctx.cap)?;
        let src = model.enumerate_language(n, ctx.cap)?;
        let nu = n as u64;
        table.push(vec![n.into(), src.len().into(), img.slice.len().into(), p.g.eval(nu).into(), img.g_tilde.eval(nu).into()]);
        g_tilde = Some(img.g_tilde);
    }
    Ok(Outcome::new(
        json!({ "radius": r, "formula": "(4r+3)g(n+2r)+4r", "g_tilde": g_tilde }),
        Some(table),
    ))
}
