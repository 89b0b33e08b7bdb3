use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use qsl2r::reps::{
    build_family1, build_family2, build_family2_exact, parse_q_power, rep_from_json, Family1Params, Family2Exact,
    Family2Params, Representation, Sign,
};
use qsl2r::scalar::{RootContext, Tolerance};
use serde::Serialize;

use crate::args::{OutArgs, RepArgs};

/// Why a command did not produce a verdict.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, bad input files, unwritable output: exit code 2.
    Usage(String),
    /// A computation raised an error: exit code 1.
    Compute(qsl2r::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<qsl2r::Error> for Failure {
    fn from(e: qsl2r::Error) -> Self {
        Failure::Compute(e)
    }
}

pub type CmdResult<T> = Result<T, Failure>;

pub fn usage<T>(msg: impl Into<String>) -> CmdResult<T> {
    Err(Failure::Usage(msg.into()))
}

/// A finished command: the JSON report, the lines for standard output and
/// the overall verdict.
pub struct Outcome {
    pub json: String,
    pub summary: Vec<String>,
    pub passed: bool,
}

impl Outcome {
    pub fn new(report: &impl Serialize, summary: Vec<String>, passed: bool) -> Self {
        Outcome {
            json: to_json(report),
            summary,
            passed,
        }
    }
}

pub fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

pub fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// `residual 0 exact` or `residual 1.234e-15 approx`.
pub fn residual_text(residual: f64, backend: &str) -> String {
    if residual == 0.0 {
        format!("residual 0 {backend}")
    } else {
        format!("residual {residual:.3e} {backend}")
    }
}

/// Writes the report and prints the summary; returns the exit code.
pub fn emit(outcome: &Outcome, out: Option<&Path>) -> CmdResult<i32> {
    match out {
        Some(path) => {
            let mut text = outcome.json.clone();
            text.push('\n');
            fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
        }
        None => println!("{}", outcome.json),
    }
    for line in &outcome.summary {
        println!("{line}");
    }
    Ok(if outcome.passed { 0 } else { 1 })
}

/// `--tol`, then `QSL2R_TOL`, then the library default.
pub fn tolerance(out: &OutArgs) -> CmdResult<Tolerance> {
    let default = Tolerance::default();
    let rel = match out.tol {
        Some(t) => t,
        None => match std::env::var("QSL2R_TOL") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("QSL2R_TOL must be a number, got {s:?}")))?,
            Err(_) => return Ok(default),
        },
    };
    if !(rel.is_finite() && rel > 0.0) {
        return usage(format!("tolerance must be a positive number, got {rel}"));
    }
    Ok(Tolerance::new(rel, default.abs))
}

pub fn context(p: Option<u32>, q: Option<u32>) -> CmdResult<RootContext> {
    match (p, q) {
        (Some(p), Some(q)) => RootContext::new(p, q).map_err(|e| Failure::Usage(e.to_string())),
        _ => usage("--P and --Q are required"),
    }
}

/// `re,im` or a bare real number.
pub fn parse_complex(flag: &str, s: &str) -> CmdResult<Complex64> {
    let bad = || Failure::Usage(format!("--{flag} expects re,im, got {s:?}"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

/// `n`, `n/d`, or `n/d,0`.
fn parse_rational(flag: &str, s: &str) -> CmdResult<BigRational> {
    let bad = || Failure::Usage(format!("--{flag} must be a rational number on the exact path, got {s:?}"));
    let (re, im) = match s.split_once(',') {
        Some((re, im)) => (re.trim(), Some(im.trim())),
        None => (s.trim(), None),
    };
    if let Some(im) = im {
        if im.parse::<f64>().ok() != Some(0.0) {
            return Err(bad());
        }
    }
    BigRational::from_str(re).map_err(|_| bad())
}

fn parse_sign(s: &str) -> CmdResult<Sign> {
    s.parse().map_err(|e: qsl2r::Error| Failure::Usage(e.to_string()))
}

pub fn sign_list(s: Option<&str>) -> CmdResult<Vec<Sign>> {
    match s {
        Some(s) => Ok(vec![parse_sign(s)?]),
        None => Ok(vec![Sign::Plus, Sign::Minus]),
    }
}

fn family1(ctx: &RootContext, a: &RepArgs) -> CmdResult<Representation> {
    if a.lambda.is_some() || a.a.is_some() || a.b.is_some() {
        return usage("--lambda, --a and --b belong to family 2");
    }
    let Some(r) = a.r else {
        return usage("family 1 needs --r");
    };
    if r >= ctx.q() {
        return usage(format!("--r must lie in 0..Q-1 (got r={r}, Q={})", ctx.q()));
    }
    let sign = parse_sign(a.sign.as_deref().unwrap_or("+"))?;
    let rep = build_family1(ctx, Family1Params { r, sign })?;
    Ok(if a.approx { rep.to_approx() } else { rep })
}

fn family2(ctx: &RootContext, a: &RepArgs) -> CmdResult<Representation> {
    if a.r.is_some() || a.sign.is_some() {
        return usage("--r and --sign belong to family 1");
    }
    let Some(lambda) = a.lambda.as_deref() else {
        return usage("family 2 needs --lambda");
    };
    let q_power = parse_q_power(lambda);
    if a.exact && q_power.is_none() {
        return usage("--exact needs --lambda given as q^k or -q^k");
    }
    if let (Some((lambda_sign, lambda_exp)), false) = (q_power, a.approx) {
        let rat = |flag: &str, v: &Option<String>| match v {
            Some(s) => parse_rational(flag, s),
            None => Ok(BigRational::from_integer(0.into())),
        };
        let p = Family2Exact {
            lambda_sign,
            lambda_exp,
            a: rat("a", &a.a)?,
            b: rat("b", &a.b)?,
        };
        return Ok(build_family2_exact(ctx, p)?);
    }
    let lambda = match q_power {
        Some((sign, k)) => ctx.approx_env().q_pow_complex(Complex64::new(k as f64, 0.0)) * sign.value() as f64,
        None => parse_complex("lambda", lambda)?,
    };
    if lambda.norm() == 0.0 {
        return usage("--lambda must be nonzero");
    }
    let cplx = |flag: &str, v: &Option<String>| match v {
        Some(s) => parse_complex(flag, s),
        None => Ok(Complex64::new(0.0, 0.0)),
    };
    let p = Family2Params {
        lambda,
        a: cplx("a", &a.a)?,
        b: cplx("b", &a.b)?,
    };
    Ok(build_family2(ctx, p)?)
}

fn load(path: &Path, a: &RepArgs) -> CmdResult<Representation> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let rep = rep_from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if let (Some(p), Some(q)) = (a.p, a.q) {
        if (p, q) != (rep.ctx().p(), rep.ctx().q()) {
            return usage(format!(
                "{} holds a representation for P={}, Q={}",
                path.display(),
                rep.ctx().p(),
                rep.ctx().q()
            ));
        }
    }
    if a.exact && !rep.is_exact() {
        return usage(format!("{} holds an approximate representation", path.display()));
    }
    Ok(if a.approx { rep.to_approx() } else { rep })
}

/// Builds the representation described by the flags.
pub fn build_rep(a: &RepArgs) -> CmdResult<Representation> {
    if let Some(path) = &a.input {
        if a.p.is_some() || a.q.is_some() {
            context(a.p, a.q)?;
        }
        return load(path, a);
    }
    let ctx = context(a.p, a.q)?;
    match a.family {
        Some(1) => family1(&ctx, a),
        Some(2) => family2(&ctx, a),
        _ => usage("--family 1 or --family 2 is required (or --input)"),
    }
}
