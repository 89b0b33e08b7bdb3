use num_complex::Complex64;
use qsl2r::ncpoly::{
    hopf_symbolic_check, identity_coefficients, lemma_check_with, parse_expr, pbw_normal_form, substitute_j,
    HopfCheck, HopfKind,
};
use qsl2r::ncpoly::proof::lemma_v;
use qsl2r::reps::{intersection_check, verify_relations, Provenance, RelationKind, Representation};
use qsl2r::scalar::RootContext;
use qsl2r::spectral::{
    eigen_solve, image_vanishes, label_of, label_roots, ladder_apply, spectrum_chain, tridiagonality_check,
    unitarize_search, verify_identity, Direction, LADDER_RESIDUAL_TOL,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Check, Dir, IntersectCmd, LadderCmd, Proof, RepCmd, SymbolicCmd, VerifyCmd};
use crate::common::{
    build_rep, context, parse_complex, residual_text, sign_list, tolerance, usage, verdict, CmdResult, Failure,
    Outcome,
};

fn family_label(p: &Provenance) -> String {
    match p {
        Provenance::Family1(f) => format!("family 1 (r={}, sign {})", f.r, f.sign),
        Provenance::Family2(_) | Provenance::Family2Exact(_) => "family 2".into(),
        Provenance::Tensor(..) => "tensor product".into(),
    }
}

pub fn rep(cmd: &RepCmd) -> CmdResult<Outcome> {
    tolerance(&cmd.out)?;
    let rep = build_rep(&cmd.rep)?;
    let line = format!(
        "rep: PASS ({}, dim {}, {} backend, defining relations hold)",
        family_label(rep.provenance()),
        rep.dim(),
        rep.backend_name()
    );
    Ok(Outcome {
        json: qsl2r::reps::rep_to_json(&rep),
        summary: vec![line],
        passed: true,
    })
}

fn hopf_all() -> CmdResult<(Vec<HopfCheck>, Vec<String>, bool)> {
    let mut checks = Vec::new();
    let mut lines = Vec::new();
    for kind in HopfKind::ALL {
        let c = hopf_symbolic_check(kind)?;
        let all_zero = c.residuals.iter().all(|r| r.zero);
        let detail = if all_zero {
            "residual 0 exact".to_string()
        } else {
            let bad: Vec<&str> = c.residuals.iter().filter(|r| !r.zero).map(|r| r.residual.as_str()).collect();
            format!("residual {}", bad.join("; "))
        };
        lines.push(format!("hopf.{}: {} ({detail})", kind.name(), verdict(c.passed)));
        if let Some(note) = &c.note {
            lines.push(format!("note: {note}"));
        }
        checks.push(c);
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok((checks, lines, passed))
}

fn lemma(v: Option<&str>) -> CmdResult<Outcome> {
    let v = match v {
        Some(src) => parse_expr(src).map_err(|e| Failure::Usage(format!("--v: {e}")))?,
        None => lemma_v(),
    };
    let cert = lemma_check_with(&v)?;
    let passed = cert.passed();
    let detail = if cert.residual.is_zero() {
        "residual 0 exact".to_string()
    } else {
        format!("residual {}", cert.residual)
    };
    Ok(Outcome::new(&cert, vec![format!("lemma: {} ({detail})", verdict(passed))], passed))
}

fn identity_x(x: Option<&str>) -> CmdResult<Complex64> {
    match x {
        Some(s) => parse_complex("x", s),
        None => usage("--check identity needs --x"),
    }
}

pub fn verify(cmd: &VerifyCmd) -> CmdResult<Outcome> {
    let tol = tolerance(&cmd.out)?;
    match cmd.check {
        Check::Lemma => return lemma(cmd.v.as_deref()),
        Check::Hopf => {
            let (checks, mut lines, passed) = hopf_all()?;
            lines.push(format!("hopf: {}", verdict(passed)));
            return Ok(Outcome::new(&checks, lines, passed));
        }
        _ => {}
    }
    if cmd.v.is_some() {
        return usage("--v only applies to --check lemma");
    }
    let rep = build_rep(&cmd.rep)?;
    if cmd.check == Check::Identity {
        let x = identity_x(cmd.x.as_deref())?;
        let r = verify_identity(&rep, x, &tol);
        let line = format!("identity: {} ({})", verdict(r.passed), residual_text(r.residual, r.backend));
        return Ok(Outcome::new(&r, vec![line], r.passed));
    }
    if cmd.x.is_some() {
        return usage("--x only applies to --check identity");
    }
    let (kind, name) = match cmd.check {
        Check::Defining => (RelationKind::Defining, "defining"),
        Check::Zj => (RelationKind::Zj, "zj"),
        Check::Central => (RelationKind::Central, "central"),
        Check::Star => (RelationKind::StarOriginal, "star"),
        Check::Identity | Check::Lemma | Check::Hopf => unreachable!("handled above"),
    };
    let r = verify_relations(&rep, kind, &tol)?;
    let mut detail = residual_text(r.max_residual, r.backend);
    if let Some(c) = &r.central_scalar {
        let z = c.to_complex();
        detail.push_str(&format!(", Z^Q = ({:.6}, {:.6})·I", z.re, z.im));
    }
    if let Some(s) = &r.star {
        detail = if s.self_adjoint {
            format!("X, Y, Z self-adjoint, dim {}", s.dim)
        } else {
            format!("original involution not realized, dim {}", s.dim)
        };
    }
    let line = format!("{name}: {} ({detail})", verdict(r.passed));
    Ok(Outcome::new(&r, vec![line], r.passed))
}

pub fn symbolic(cmd: &SymbolicCmd) -> CmdResult<Outcome> {
    tolerance(&cmd.out)?;
    if let Some(src) = &cmd.expr {
        let p = parse_expr(src).map_err(|e| Failure::Usage(format!("--expr: {e}")))?;
        let sub = substitute_j(&p);
        let nf = pbw_normal_form(&sub)?;
        let report = json!({"input": p, "j_substituted": sub, "normal_form": nf});
        return Ok(Outcome::new(&report, vec![format!("normal form: {nf}")], true));
    }
    let mut report = serde_json::Map::new();
    let mut lines = Vec::new();
    let mut passed = true;
    if matches!(cmd.proof, Proof::Identity | Proof::All) {
        let e = identity_coefficients();
        let n = e.contracts.len() + e.modulo_relations.len();
        let detail = if e.passed() { "residual 0 exact" } else { "nonzero residual" };
        lines.push(format!("symbolic.identity: {} ({n} coefficient checks, {detail})", verdict(e.passed())));
        passed &= e.passed();
        report.insert("identity_coefficients".into(), to_value(&e));
    }
    if matches!(cmd.proof, Proof::Lemma | Proof::All) {
        let o = lemma(None)?;
        lines.push(format!("symbolic.{}", o.summary[0]));
        passed &= o.passed;
        report.insert("lemma".into(), serde_json::from_str(&o.json).expect("valid JSON"));
    }
    if matches!(cmd.proof, Proof::Hopf | Proof::All) {
        let (checks, hl, ok) = hopf_all()?;
        lines.extend(hl.into_iter().map(|l| if l.starts_with("note") { l } else { format!("symbolic.{l}") }));
        passed &= ok;
        report.insert("hopf".into(), to_value(&checks));
    }
    lines.push(format!("symbolic: {}", verdict(passed)));
    Ok(Outcome::new(&report, lines, passed))
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn spectrum(cmd: &RepCmd) -> CmdResult<Outcome> {
    tolerance(&cmd.out)?;
    let rep = build_rep(&cmd.rep)?;
    let chain = spectrum_chain(&rep)?;
    let band = tridiagonality_check(&rep)?;
    let mut report = to_value(&chain);
    let obj = report.as_object_mut().expect("chain is an object");
    obj.insert("dim".into(), json!(rep.dim()));
    obj.insert("band_residual".into(), json!(band.band_residual));
    obj.insert("band_cyclic".into(), json!(band.cyclic));
    obj.insert("band_passed".into(), json!(band.passed));
    let complete = chain.len() == rep.dim();
    let passed = complete && band.passed && chain.start_matches != Some(false);
    let start = match (chain.integer_labels, chain.x_labels.first()) {
        (true, Some(x)) => format!("x0 = {}", x.re.round() as i64),
        (false, Some(x)) => format!("x0 = ({:.6}, {:.6})", x.re, x.im),
        _ => "empty".into(),
    };
    let shape = if chain.is_cyclic() { "closes cyclically" } else { "open" };
    let line = format!(
        "spectrum: {} ({} of {} eigenvalues linked, {start}, chain {shape}, band residual {:.3e})",
        verdict(passed),
        chain.len(),
        rep.dim(),
        band.band_residual
    );
    Ok(Outcome::new(&report, vec![line], passed))
}

#[derive(Serialize)]
struct LadderStep {
    eigenvalue: [f64; 2],
    x: [f64; 2],
    direction: Direction,
    image: Vec<[f64; 2]>,
    vanished: bool,
    target_eigenvalue: [f64; 2],
    eigen_residual: f64,
    passed: bool,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn ladder_step(rep: &Representation, v: &[Complex64], x: Complex64, dir: Direction) -> CmdResult<LadderStep> {
    let env = rep.ctx().approx_env();
    let j = rep.j_complex();
    let image = ladder_apply(rep, v, x, dir)?;
    let vanished = image_vanishes(rep, v, &image, x, dir);
    let shift = match dir {
        Direction::Raise => 2.0,
        Direction::Lower => -2.0,
    };
    let target = env.q_num_complex(x + shift);
    let jw = j.apply(&image);
    let res = jw
        .iter()
        .zip(&image)
        .map(|(a, b)| (a - target * b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let size = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let passed = vanished || res <= LADDER_RESIDUAL_TOL * size * j.max_abs().max(1.0);
    Ok(LadderStep {
        eigenvalue: pair(env.q_num_complex(x)),
        x: pair(x),
        direction: dir,
        image: image.into_iter().map(pair).collect(),
        vanished,
        target_eigenvalue: pair(target),
        eigen_residual: if vanished { 0.0 } else { res },
        passed,
    })
}

fn parse_vector(s: &str) -> CmdResult<Vec<Complex64>> {
    s.split(';').map(|e| parse_complex("vector", e)).collect()
}

pub fn ladder(cmd: &LadderCmd) -> CmdResult<Outcome> {
    tolerance(&cmd.out)?;
    let rep = build_rep(&cmd.rep)?;
    let dirs = match cmd.dir {
        Some(Dir::Raise) => vec![Direction::Raise],
        Some(Dir::Lower) => vec![Direction::Lower],
        None => vec![Direction::Raise, Direction::Lower],
    };
    let x_flag = cmd.x.as_deref().map(|s| parse_complex("x", s)).transpose()?;
    let mut steps = Vec::new();
    if let Some(vs) = &cmd.vector {
        let v = parse_vector(vs)?;
        if v.len() != rep.dim() {
            return usage(format!("--vector has {} entries, the representation has dimension {}", v.len(), rep.dim()));
        }
        let x = x_flag.expect("clap enforces --x with --vector");
        for &d in &dirs {
            steps.push(ladder_step(&rep, &v, x, d)?);
        }
    } else {
        let env = rep.ctx().approx_env();
        let j = rep.j_complex();
        for p in eigen_solve(&j)? {
            let labels: Vec<Complex64> = match x_flag {
                Some(x) => {
                    let close = (env.q_num_complex(x) - p.value).norm() <= 1e-8 * j.max_abs().max(1.0);
                    if close {
                        vec![x]
                    } else {
                        vec![]
                    }
                }
                None => label_roots(&env, p.value).iter().map(|&y| label_of(&env, y).0).collect(),
            };
            for x in labels {
                for &d in &dirs {
                    steps.push(ladder_step(&rep, &p.vector, x, d)?);
                }
            }
        }
        if steps.is_empty() {
            return usage("no eigenvalue of J equals [x]_q");
        }
    }
    let passed = steps.iter().all(|s| s.passed);
    let vanished = steps.iter().filter(|s| s.vanished).count();
    let line = format!(
        "ladder: {} ({} images: {} vanish, {} are eigenvectors for [x±2])",
        verdict(passed),
        steps.len(),
        vanished,
        steps.iter().filter(|s| s.passed && !s.vanished).count()
    );
    Ok(Outcome::new(&steps, vec![line], passed))
}

pub fn unitarize(cmd: &RepCmd) -> CmdResult<Outcome> {
    tolerance(&cmd.out)?;
    let rep = build_rep(&cmd.rep)?;
    let u = unitarize_search(&rep)?;
    let report = json!({
        "passed": u.passed,
        "patterns_tried": u.patterns_tried,
        "j_spectrum_real": u.j_spectrum_real,
        "unitarizing": u.candidate,
    });
    let line = match (&u.candidate, u.passed) {
        (Some(c), true) => format!("unitarize: PASS (T = {:?}, G = {:?})", c.t, c.g),
        (Some(c), false) => format!(
            "unitarize: FAIL (none of {} sign patterns within tolerance; best residual {:.3e})",
            u.patterns_tried, c.max_residual
        ),
        (None, _) => "unitarize: FAIL (no candidate)".into(),
    };
    Ok(Outcome::new(&report, vec![line], u.passed))
}

pub fn intersect(cmd: &IntersectCmd) -> CmdResult<Outcome> {
    tolerance(&cmd.out)?;
    let ctx: RootContext = context(Some(cmd.p), Some(cmd.q))?;
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for sign in sign_list(cmd.sign.as_deref())? {
        let r = intersection_check(&ctx, sign)?;
        lines.push(format!(
            "intersect {sign}: {} (Z spectra {}, J spectra {}, {} word traces, max residual {:.3e})",
            verdict(r.passed),
            if r.z_spectra_match { "match" } else { "differ" },
            if r.j_spectra_match { "match" } else { "differ" },
            r.words_checked,
            r.max_trace_residual
        ));
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(Outcome::new(&reports, lines, passed))
}
