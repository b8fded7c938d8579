use qensemble::asymptotics::{expansion_residual, ScalingParams};
use qensemble::combinat::{moment_component_via_matching_with, moment_via_motzkin_with, EnumerationCaps};
use qensemble::density::{fold_parameter, regime, LimitingDensity, PieceKind};
use qensemble::error::Error;
use qensemble::moments::{moment_closed, EnsembleParams};
use qensemble::orthopoly::{jackson_moment, zeros};
use qensemble::qcore::{ExactScalar, Scalar};
use qensemble::verify::{run_all, CheckReport, Scope};
use serde_json::{json, Value};

use crate::number::Number;
use crate::table::{format_float, Cell, Table};

/// Failure of a subcommand, mapped to the process exit code.
#[derive(Debug)]
pub enum Failure {
    BadParams(String),
    Verification(String),
    ResourceCap(String),
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::BadParams(_) => 2,
            Failure::Verification(_) => 3,
            Failure::ResourceCap(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::BadParams(m) | Failure::Verification(m) | Failure::ResourceCap(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Domain(_) | Error::InvalidParams(_) | Error::DivisionByZero => Failure::BadParams(msg),
            Error::ResourceCap { .. } => Failure::ResourceCap(msg),
            _ => Failure::Runtime(msg),
        }
    }
}

pub type Outcome<T> = Result<T, Failure>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Closed,
    Motzkin,
    Matching,
    Qintegral,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Motzkin => "motzkin",
            Method::Matching => "matching",
            Method::Qintegral => "qintegral",
        }
    }
}

pub struct MomentsConfig {
    pub n: usize,
    pub p_min: usize,
    pub p_max: usize,
    pub q: Number,
    pub a: Number,
    pub methods: Vec<Method>,
    pub mode: Mode,
    pub verify: bool,
    pub caps: EnumerationCaps,
    pub tol: f64,
}

/// A moment value from one route, kept exact when the route is exact.
#[derive(Debug, Clone)]
enum RouteValue {
    Exact(String, ExactScalar),
    Float(f64),
}

fn combinatorial<S: Scalar>(method: Method, p: usize, params: &EnsembleParams<S>, caps: &EnumerationCaps) -> Outcome<S> {
    let qp = params.qparams();
    let mut total = S::zero();
    for j in 0..params.n() {
        total = total
            + match method {
                Method::Motzkin => moment_via_motzkin_with(p, j, qp, caps)?,
                Method::Matching => moment_component_via_matching_with(p, j, qp, caps)?,
                _ => unreachable!("only enumeration routes are summed here"),
            };
    }
    Ok(total)
}

fn float_route(method: Method, p: usize, params: &EnsembleParams<f64>, cfg: &MomentsConfig) -> Outcome<f64> {
    Ok(match method {
        Method::Closed => moment_closed(params, p),
        Method::Qintegral => jackson_moment(params, p, cfg.tol)?,
        m => combinatorial(m, p, params, &cfg.caps)?,
    })
}

pub fn moments(cfg: &MomentsConfig) -> Outcome<Table> {
    if cfg.n == 0 {
        return Err(Failure::BadParams("N must be at least 1".into()));
    }
    if cfg.p_min > cfg.p_max {
        return Err(Failure::BadParams(format!("p-min {} exceeds p-max {}", cfg.p_min, cfg.p_max)));
    }
    let float = EnsembleParams::new(cfg.q.to_f64(), cfg.a.to_f64(), cfg.n)?;
    let exact = match cfg.mode {
        Mode::Exact => {
            let (Some(q), Some(a)) = (cfg.q.exact(), cfg.a.exact()) else {
                return Err(Failure::BadParams(format!(
                    "exact mode needs rational q and a (p/q syntax), got q = {}, a = {}; pass --mode float for decimals",
                    cfg.q, cfg.a
                )));
            };
            Some(EnsembleParams::new(q.clone(), a.clone(), cfg.n)?)
        }
        Mode::Float => None,
    };

    let mut table = Table::new(vec!["p", "method", "value"]);
    let mut disagreements = Vec::new();
    for p in cfg.p_min..=cfg.p_max {
        let mut values = Vec::new();
        for &method in &cfg.methods {
            let value = match (&exact, method) {
                (Some(params), Method::Closed) => {
                    let v = moment_closed(params, p);
                    RouteValue::Exact(v.to_string(), v)
                }
                (Some(params), Method::Motzkin | Method::Matching) => {
                    let v = combinatorial(method, p, params, &cfg.caps)?;
                    RouteValue::Exact(v.to_string(), v)
                }
                _ => RouteValue::Float(float_route(method, p, &float, cfg)?),
            };
            let cell = match &value {
                RouteValue::Exact(s, _) => Cell::Text(s.clone()),
                RouteValue::Float(x) => Cell::Float(*x),
            };
            table.push(vec![Cell::Int(p as i64), Cell::Text(method.name().into()), cell]);
            values.push((method, value));
        }
        if cfg.verify {
            if let Some(msg) = disagreement(p, &values) {
                disagreements.push(msg);
            }
        }
    }
    table.meta("command", "moments");
    table.meta("mode", if exact.is_some() { "exact" } else { "float" });
    table.meta("params", json!({ "N": cfg.n, "q": cfg.q.to_string(), "a": cfg.a.to_string() }));
    if cfg.verify {
        table.meta("verified", disagreements.is_empty());
    }
    if let Some(first) = disagreements.first() {
        return Err(Failure::Verification(format!("routes disagree: {first}")));
    }
    Ok(table)
}

/// First pair of routes that differ at this `p`.
fn disagreement(p: usize, values: &[(Method, RouteValue)]) -> Option<String> {
    let (m0, v0) = values.first()?;
    for (m, v) in &values[1..] {
        let same = match (v0, v) {
            (RouteValue::Exact(_, x), RouteValue::Exact(_, y)) => x == y,
            (x, y) => {
                let (x, y) = (as_f64(x), as_f64(y));
                (x - y).abs() <= 1e-8 * x.abs().max(1.0)
            }
        };
        if !same {
            return Some(format!("p = {p}: {} gives {}, {} gives {}", m0.name(), show(v0), m.name(), show(v)));
        }
    }
    None
}

fn as_f64(v: &RouteValue) -> f64 {
    match v {
        RouteValue::Exact(_, x) => x.to_f64(),
        RouteValue::Float(x) => *x,
    }
}

fn show(v: &RouteValue) -> String {
    match v {
        RouteValue::Exact(s, _) => s.clone(),
        RouteValue::Float(x) => format_float(*x),
    }
}

fn thresholds(a: f64, lambda: f64) -> Outcome<Value> {
    let (base, mirrored) = fold_parameter(a)?;
    let reg = regime(base, lambda)?;
    Ok(json!({
        "folded_a": base,
        "mirrored": mirrored,
        "lambda1": reg.lambda1,
        "lambda2": reg.lambda2,
        "regime": format!("{:?}", reg.kind),
    }))
}

fn scaling_meta(table: &mut Table, command: &str, a: f64, lambda: f64) -> Outcome<()> {
    table.meta("command", command);
    table.meta("mode", "float");
    table.meta("params", json!({ "a": a, "lambda": lambda }));
    table.meta("regime_thresholds", thresholds(a, lambda)?);
    Ok(())
}

pub fn density(a: f64, lambda: f64, grid: usize) -> Outcome<Table> {
    if grid < 2 {
        return Err(Failure::BadParams(format!("grid needs at least 2 points, got {grid}")));
    }
    let rho = LimitingDensity::new(a, lambda)?;
    let kind = format!("{:?}", rho.regime().kind);
    let (lo, hi) = rho.support();
    let mut table = Table::new(vec!["x", "rho", "regime", "in_support"]);
    let last = (grid - 1) as f64;
    for i in 0..grid {
        let x = if i + 1 == grid { 1.0 } else { a + (1.0 - a) * i as f64 / last };
        table.push(vec![
            Cell::Float(x),
            Cell::Float(rho.value(x)),
            Cell::Text(kind.clone()),
            Cell::Bool(x >= lo && x <= hi),
        ]);
    }
    scaling_meta(&mut table, "density", a, lambda)?;
    let pieces: Vec<Value> = rho
        .pieces()
        .iter()
        .map(|p| json!({ "lo": p.lo, "hi": p.hi, "plateau": p.kind == PieceKind::Plateau }))
        .collect();
    table.meta("support", json!([lo, hi]));
    table.meta("pieces", pieces);
    table.meta(
        "hard_edges",
        json!({ "points": rho.hard_edges(), "value": "one-sided limit 1/(lambda |x|)" }),
    );
    Ok(table)
}

pub fn zeros_table(a: f64, lambda: f64, n: usize) -> Outcome<Table> {
    if n == 0 {
        return Err(Failure::BadParams("N must be at least 1".into()));
    }
    let rho = LimitingDensity::new(a, lambda)?;
    let z = zeros(&EnsembleParams::from_scaling(a, lambda, n)?);
    let limit = rho.cdf_sorted(&z, 1e-12)?;
    let mut table = Table::new(vec!["index", "zero", "empirical_cdf", "limit_cdf"]);
    let nf = n as f64;
    let mut ks: f64 = 0.0;
    for (i, (&x, &f)) in z.iter().zip(&limit).enumerate() {
        ks = ks.max((f - i as f64 / nf).abs()).max(((i + 1) as f64 / nf - f).abs());
        table.push(vec![
            Cell::Int(i as i64 + 1),
            Cell::Float(x),
            Cell::Float((i + 1) as f64 / nf),
            Cell::Float(f),
        ]);
    }
    scaling_meta(&mut table, "zeros", a, lambda)?;
    table.meta("N", n);
    table.meta("ks_distance", ks);
    Ok(table)
}

pub fn converge(p: usize, a: f64, lambda: f64, ns: &[usize]) -> Outcome<Table> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(Failure::BadParams("N list must be nonempty and positive".into()));
    }
    let sp = ScalingParams::new(a, lambda)?;
    let mut table = Table::new(vec!["N", "residual", "residual_n3"]);
    for &n in ns {
        let r = expansion_residual(p, &sp, n)?;
        table.push(vec![Cell::Int(n as i64), Cell::Float(r), Cell::Float(r * (n as f64).powi(3))]);
    }
    table.meta("command", "converge");
    table.meta("mode", "float");
    table.meta("params", json!({ "p": p, "a": a, "lambda": lambda }));
    if a < 0.0 {
        table.meta("regime_thresholds", thresholds(a, lambda)?);
    }
    Ok(table)
}

pub fn verify(scope: Scope) -> (Vec<CheckReport>, Outcome<()>) {
    let reports = run_all(scope);
    let outcome = match reports.iter().find(|r| !r.passed) {
        Some(r) => Err(Failure::Verification(format!("{} failed: {}", r.id, r.detail))),
        None => Ok(()),
    };
    (reports, outcome)
}

pub fn manifest_line(r: &CheckReport) -> String {
    let status = if r.passed { "PASS" } else { "FAIL" };
    format!("{status} {:<4} {}: {}", r.id, r.title, r.detail)
}
