//! The full verification grid for one root of unity, as a scoreboard.

use num_complex::Complex64;
use qsl2r::ncpoly::{hopf_symbolic_check, identity_coefficients, lemma_check, lemma_check_with, parse_expr, HopfKind};
use qsl2r::reps::{
    build_family1, build_family2, coassociativity_check, delta_j_check, intersection_check, j_matrix, recover_xy,
    tensor_rep, verify_relations, Family1Params, Family2Params, RelationKind, Representation, Sign,
};
use qsl2r::scalar::{q_number, RootContext, Tolerance};
use qsl2r::spectral::{
    eigen_solve, eigenvalues, image_vanishes, label_of, label_roots, ladder_apply, match_multisets, spectrum_chain,
    tridiagonality_check, unitarize_search, verify_identity, Direction, LADDER_RESIDUAL_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::SuiteCmd;
use crate::common::{context, tolerance, verdict, CmdResult, Outcome};

/// Random cyclic-family parameter sets per root of unity.
const FAMILY2_SETS: usize = 20;
/// Random complex labels per parameter set for the identity.
const IDENTITY_LABELS: usize = 100;
/// Parameter sets that also go through the eigen-based checks.
const FAMILY2_SPECTRAL_SETS: usize = 5;
const SPECTRUM_TOL: f64 = 1e-8;

/// V with one term's sign flipped.
const LEMMA_MUTANTS: [&str; 4] = [
    "Z*J*J*J*Z - (q + q^-1)^2*Z*J*Z - (q + q^-1)^2*J - J*Z*J*Z*J",
    "Z*J*J*J*Z + (q + q^-1)^2*Z*J*Z + (q + q^-1)^2*J - J*Z*J*Z*J",
    "Z*J*J*J*Z - (q + q^-1)^2*Z*J*Z + (q + q^-1)^2*J + J*Z*J*Z*J",
    "-Z*J*J*J*Z - (q + q^-1)^2*Z*J*Z + (q + q^-1)^2*J - J*Z*J*Z*J",
];

#[derive(Serialize, Debug)]
pub struct Section {
    pub name: String,
    pub backend: &'static str,
    pub checks: usize,
    pub passed_checks: usize,
    pub passed: bool,
    pub max_residual: f64,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Accumulates individual results of one section.
struct Tally {
    name: &'static str,
    backend: &'static str,
    checks: usize,
    passed: usize,
    max_residual: f64,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str, backend: &'static str) -> Self {
        Tally {
            name,
            backend,
            checks: 0,
            passed: 0,
            max_residual: 0.0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, residual: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if residual.is_finite() {
            self.max_residual = self.max_residual.max(residual);
        } else {
            self.max_residual = f64::INFINITY;
        }
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.passed += other.passed;
        self.max_residual = self.max_residual.max(other.max_residual);
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }

    fn finish(self) -> Section {
        Section {
            name: self.name.into(),
            backend: self.backend,
            checks: self.checks,
            passed_checks: self.passed,
            passed: self.checks > 0 && self.passed == self.checks,
            max_residual: self.max_residual,
            failures: self.failures,
            notes: self.notes,
        }
    }
}

/// Runs `f` on every cell in parallel and merges the tallies in cell order.
fn sweep<C: Sync>(name: &'static str, backend: &'static str, cells: &[C], f: impl Fn(&C, &mut Tally) + Sync) -> Section {
    let parts: Vec<Tally> = cells
        .par_iter()
        .map(|c| {
            let mut t = Tally::new(name, backend);
            f(c, &mut t);
            t
        })
        .collect();
    let mut total = Tally::new(name, backend);
    for p in parts {
        total.merge(p);
    }
    total.finish()
}

struct F1 {
    r: u32,
    sign: Sign,
    rep: Representation,
}

impl F1 {
    fn tag(&self) -> String {
        format!("r={} sign {}", self.r, self.sign)
    }
}

struct F2 {
    index: usize,
    params: Family2Params,
    rep: Representation,
    labels: Vec<Complex64>,
}

impl F2 {
    fn tag(&self) -> String {
        let p = &self.params;
        format!(
            "set {} (lambda {:.4}{:+.4}i, a {:.4}{:+.4}i, b {:.4}{:+.4}i)",
            self.index, p.lambda.re, p.lambda.im, p.a.re, p.a.im, p.b.re, p.b.im
        )
    }
}

fn family2_cells(ctx: &RootContext, seed: u64) -> Vec<F2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((ctx.p() as u64) << 32 | ctx.q() as u64));
    let mut out = Vec::new();
    while out.len() < FAMILY2_SETS {
        let mut c = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (lambda, a, b) = (c(), c(), c());
        let labels = (0..IDENTITY_LABELS)
            .map(|_| Complex64::new(rng.gen_range(-10.0..10.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if lambda.norm() < 0.3 {
            continue;
        }
        let params = Family2Params { lambda, a, b };
        let rep = build_family2(ctx, params).expect("random parameters with lambda away from 0");
        out.push(F2 {
            index: out.len(),
            params,
            rep,
            labels,
        });
    }
    out
}

fn symbolic_sections() -> Vec<Section> {
    let mut out = Vec::new();

    let mut t = Tally::new("symbolic.identity_coefficients", "exact");
    let e = identity_coefficients();
    for c in e.contracts.iter().chain(&e.modulo_relations) {
        t.record(c.passed, 0.0, || format!("{}: residual {}", c.name, c.residual));
    }
    out.push(t.finish());

    let mut t = Tally::new("symbolic.lemma", "exact");
    match lemma_check() {
        Ok(cert) => {
            t.record(cert.residual.is_zero(), 0.0, || format!("ZV+VZ decomposition residual {}", cert.residual));
            t.record(cert.factors_vanish, 0.0, || "factors do not reduce to 0".into());
            t.record(cert.anticommutator_vanishes, 0.0, || "ZV+VZ does not reduce to 0".into());
            for z in &cert.z_powers {
                t.record(z.holds, 0.0, || format!("Z^{} V = (-1)^{} V Z^{} fails", z.k, z.k, z.k));
            }
        }
        Err(e) => t.record(false, 0.0, || e.to_string()),
    }
    out.push(t.finish());

    // Single sign flips in V must break the certificate.
    let mut t = Tally::new("symbolic.lemma_mutations", "exact");
    for (i, src) in LEMMA_MUTANTS.iter().enumerate() {
        let detected = parse_expr(src)
            .and_then(|v| lemma_check_with(&v))
            .map(|c| !c.passed())
            .unwrap_or(false);
        t.record(detected, 0.0, || format!("sign flip {i} of V not detected"));
    }
    out.push(t.finish());

    let mut t = Tally::new("symbolic.hopf", "exact");
    for kind in HopfKind::ALL {
        match hopf_symbolic_check(kind) {
            Ok(c) => {
                for r in &c.residuals {
                    t.record(r.zero, 0.0, || format!("{}: {} = {}", kind.name(), r.name, r.residual));
                }
                if let Some(n) = c.note {
                    t.notes.push(format!("{}: {n}", kind.name()));
                }
            }
            Err(e) => t.record(false, 0.0, || format!("{}: {e}", kind.name())),
        }
    }
    out.push(t.finish());

    let mut t = Tally::new("symbolic.parse_round_trip", "exact");
    for src in ["q^-1*X*Y - q*Y*X - (Z*Z - 1)/(q - q^-1)", "Z*J*J*J*Z - (q + q^-1)^2*Z*J*Z", "3/4*Zi*J - q^3*X"] {
        let ok = parse_expr(src)
            .and_then(|p| parse_expr(&p.to_string()).map(|back| back == p))
            .unwrap_or(false);
        t.record(ok, 0.0, || format!("{src:?} does not survive print/parse"));
    }
    out.push(t.finish());
    out
}

fn family1_exact_sections(cells: &[F1], tol: &Tolerance) -> Vec<Section> {
    let relations = sweep("family1.relations", "exact", cells, |c, t| {
        for kind in [RelationKind::Defining, RelationKind::Zj, RelationKind::Central] {
            match verify_relations(&c.rep, kind, tol) {
                Ok(r) => {
                    let scalar_ok = match (&r.central_scalar, kind) {
                        (Some(s), RelationKind::Central) => {
                            s.to_complex() == Complex64::new(c.sign.value() as f64, 0.0)
                        }
                        _ => true,
                    };
                    t.record(r.passed && scalar_ok, r.max_residual, || format!("{} {}", c.tag(), kind.name()));
                }
                Err(e) => t.record(false, f64::INFINITY, || format!("{}: {e}", c.tag())),
            }
        }
    });
    let identity = sweep("family1.identity", "exact", cells, |c, t| {
        for x in -10i64..=10 {
            let r = verify_identity(&c.rep, x, tol);
            t.record(r.passed && r.backend == "exact", r.residual, || format!("{} x={x}", c.tag()));
        }
    });
    let recovery = sweep("family1.j_and_recovery", "exact", cells, |c, t| {
        let j_ok = j_matrix(&c.rep).map(|j| j.is_exact()).unwrap_or(false);
        t.record(j_ok, 0.0, || format!("{}: the two expressions for J differ", c.tag()));
        let r = recover_xy(&c.rep, tol);
        t.record(r.passed, r.residual_x.max(r.residual_y), || format!("{}: X, Y not recovered", c.tag()));
    });
    let star = sweep("family1.star_original", "exact", cells, |c, t| match verify_relations(&c.rep, RelationKind::StarOriginal, tol) {
        Ok(r) => {
            let realized = r.star.map(|s| s.self_adjoint).unwrap_or(true);
            t.record(r.passed && realized == (c.rep.dim() == 1), 0.0, || {
                format!("{}: original involution realized = {realized}", c.tag())
            });
        }
        Err(e) => t.record(false, 0.0, || format!("{}: {e}", c.tag())),
    });
    let small: Vec<&F1> = cells.iter().filter(|c| c.r <= 2 && c.sign == Sign::Plus).collect();
    let pairs: Vec<(&F1, &F1)> = small.iter().flat_map(|a| small.iter().map(move |b| (*a, *b))).collect();
    let tensor = sweep("family1.tensor", "exact", &pairs, |(a, b), t| {
        let tag = || format!("({})⊗({})", a.tag(), b.tag());
        match tensor_rep(&a.rep, &b.rep) {
            Ok(rep) => {
                let r = verify_relations(&rep, RelationKind::Defining, tol);
                t.record(r.map(|r| r.passed).unwrap_or(false), 0.0, || format!("{}: relations", tag()));
            }
            Err(e) => t.record(false, 0.0, || format!("{}: {e}", tag())),
        }
        let dj = delta_j_check(&a.rep, &b.rep, tol).map(|r| r.passed).unwrap_or(false);
        t.record(dj, 0.0, || format!("{}: ΔJ", tag()));
        let co = coassociativity_check(&a.rep, &b.rep, &a.rep, tol).map(|r| r.passed).unwrap_or(false);
        t.record(co, 0.0, || format!("{}: coassociativity", tag()));
    });
    vec![relations, identity, recovery, star, tensor]
}

/// Raising and lowering from every eigenpair on both label branches.
fn ladder_tally(rep: &Representation, tag: &str, t: &mut Tally) {
    let env = rep.ctx().approx_env();
    let j = rep.j_complex();
    let scale = j.max_abs().max(1.0);
    let pairs = match eigen_solve(&j) {
        Ok(p) => p,
        Err(e) => return t.record(false, f64::INFINITY, || format!("{tag}: {e}")),
    };
    for p in pairs {
        for y in label_roots(&env, p.value) {
            let (x, _) = label_of(&env, y);
            for (dir, shift) in [(Direction::Raise, 2.0), (Direction::Lower, -2.0)] {
                let img = match ladder_apply(rep, &p.vector, x, dir) {
                    Ok(v) => v,
                    Err(e) => {
                        t.record(false, f64::INFINITY, || format!("{tag}: {e}"));
                        continue;
                    }
                };
                if image_vanishes(rep, &p.vector, &img, x, dir) {
                    t.record(true, 0.0, String::new);
                    continue;
                }
                let mu = env.q_num_complex(x + shift);
                let jw = j.apply(&img);
                let size = img.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let res = jw
                    .iter()
                    .zip(&img)
                    .map(|(a, b)| (a - mu * b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
                    / (size * scale);
                t.record(res <= LADDER_RESIDUAL_TOL, res, || {
                    format!("{tag}: {dir:?} image from x=({:.4},{:.4}) is not an eigenvector", x.re, x.im)
                });
            }
        }
    }
}

fn family1_spectral_sections(ctx: &RootContext, cells: &[F1]) -> Vec<Section> {
    let q = ctx.q() as i64;
    let spectrum = sweep("family1.spectrum", "approx", cells, |c, t| {
        let d = c.rep.dim() as i64;
        let predicted: Vec<Complex64> = (0..d).map(|k| q_number(ctx, q - d + 1 + 2 * k).to_complex()).collect();
        match eigenvalues(&c.rep.j_complex()) {
            Ok(vals) => {
                let real = vals.iter().all(|v| v.im.abs() <= SPECTRUM_TOL);
                let distinct = (0..vals.len())
                    .all(|i| (i + 1..vals.len()).all(|k| (vals[i] - vals[k]).norm() > 1e-6));
                let m = match_multisets(&vals, &predicted, SPECTRUM_TOL);
                t.record(real && distinct && m.is_some(), m.unwrap_or(f64::INFINITY), || {
                    format!("{}: spectrum {vals:?} differs from prediction", c.tag())
                });
            }
            Err(e) => t.record(false, f64::INFINITY, || format!("{}: {e}", c.tag())),
        }
        match spectrum_chain(&c.rep) {
            Ok(ch) => {
                let ok = ch.len() == c.rep.dim()
                    && ch.start_matches == Some(true)
                    && ch.top_raise_vanishes()
                    && ch.bottom_lower_vanishes;
                t.record(ok, 0.0, || format!("{}: chain start or ends wrong", c.tag()));
            }
            Err(e) => t.record(false, f64::INFINITY, || format!("{}: {e}", c.tag())),
        }
    });
    let ladder = sweep("family1.ladder", "approx", cells, |c, t| ladder_tally(&c.rep, &c.tag(), t));
    let band = sweep("family1.band", "approx", cells, |c, t| match tridiagonality_check(&c.rep) {
        Ok(b) => t.record(b.passed && !b.cyclic, b.band_residual / b.scale, || format!("{}: off-band entries", c.tag())),
        Err(e) => t.record(false, f64::INFINITY, || format!("{}: {e}", c.tag())),
    });
    let unitarize = sweep("family1.unitarize", "approx", cells, |c, t| match unitarize_search(&c.rep) {
        Ok(u) => {
            let (res, g_ok) = u
                .candidate
                .as_ref()
                .map(|s| (s.max_residual, s.g_positive))
                .unwrap_or((f64::INFINITY, false));
            t.record(u.passed && g_ok && u.j_spectrum_real, res, || format!("{}: no unitarizing structure", c.tag()));
        }
        Err(e) => t.record(false, f64::INFINITY, || format!("{}: {e}", c.tag())),
    });
    vec![spectrum, ladder, band, unitarize]
}

fn family2_sections(ctx: &RootContext, cells: &[F2], tol: &Tolerance) -> Vec<Section> {
    let q = ctx.q() as i32;
    let relations = sweep("family2.relations", "approx", cells, |c, t| {
        for kind in [RelationKind::Defining, RelationKind::Zj, RelationKind::Central] {
            match verify_relations(&c.rep, kind, tol) {
                Ok(r) => t.record(r.passed, r.max_residual, || format!("{} {}", c.tag(), kind.name())),
                Err(e) => t.record(false, f64::INFINITY, || format!("{}: {e}", c.tag())),
            }
        }
        let central = verify_relations(&c.rep, RelationKind::Central, tol)
            .ok()
            .and_then(|r| r.central_scalar)
            .map(|s| s.to_complex());
        let expected = c.params.lambda.powi(q);
        let err = central.map(|z| (z - expected).norm() / expected.norm().max(1.0)).unwrap_or(f64::INFINITY);
        t.record(err <= tol.rel, err, || format!("{}: Z^Q is not lambda^Q", c.tag()));
        let r = recover_xy(&c.rep, tol);
        t.record(r.passed, r.residual_x.max(r.residual_y), || format!("{}: X, Y not recovered", c.tag()));
    });
    let identity = sweep("family2.identity", "approx", cells, |c, t| {
        for &x in &c.labels {
            let r = verify_identity(&c.rep, x, tol);
            t.record(r.passed, r.residual / r.scale, || format!("{} x=({:.4},{:.4})", c.tag(), x.re, x.im));
        }
    });
    let spectral = &cells[..FAMILY2_SPECTRAL_SETS.min(cells.len())];
    let ladder = sweep("family2.ladder", "approx", spectral, |c, t| ladder_tally(&c.rep, &c.tag(), t));
    let band = sweep("family2.band", "approx", spectral, |c, t| match tridiagonality_check(&c.rep) {
        Ok(b) => t.record(b.passed && b.cyclic, b.band_residual / b.scale, || format!("{}: off-band entries", c.tag())),
        Err(e) => t.record(false, f64::INFINITY, || format!("{}: {e}", c.tag())),
    });
    vec![relations, identity, ladder, band]
}

fn intersection_section(ctx: &RootContext) -> Section {
    sweep("intersection", "approx", &[Sign::Plus, Sign::Minus], |&sign, t| match intersection_check(ctx, sign) {
        Ok(r) => t.record(r.passed, r.max_trace_residual, || {
            format!("sign {sign}: Z match {}, J match {}, words {:?}", r.z_spectra_match, r.j_spectra_match, r.mismatched_words)
        }),
        Err(e) => t.record(false, f64::INFINITY, || format!("sign {sign}: {e}")),
    })
}

#[derive(Serialize)]
struct SuiteReport {
    #[serde(rename = "P")]
    p: u32,
    #[serde(rename = "Q")]
    q: u32,
    seed: u64,
    tolerance: Tolerance,
    passed: bool,
    exact: Vec<Section>,
    approx: Vec<Section>,
}

pub fn run_suite(ctx: &RootContext, seed: u64, tol: &Tolerance) -> (Vec<Section>, Vec<Section>) {
    let f1: Vec<F1> = (0..ctx.q())
        .flat_map(|r| [Sign::Plus, Sign::Minus].map(|sign| (r, sign)))
        .map(|(r, sign)| F1 {
            r,
            sign,
            rep: build_family1(ctx, Family1Params { r, sign }).expect("r < Q"),
        })
        .collect();
    let f2 = family2_cells(ctx, seed);
    let mut exact = symbolic_sections();
    exact.extend(family1_exact_sections(&f1, tol));
    let mut approx = family1_spectral_sections(ctx, &f1);
    approx.extend(family2_sections(ctx, &f2, tol));
    approx.push(intersection_section(ctx));
    (exact, approx)
}

pub fn suite(cmd: &SuiteCmd) -> CmdResult<Outcome> {
    let tol = tolerance(&cmd.out)?;
    let ctx = context(Some(cmd.p), Some(cmd.q))?;
    let (exact, approx) = run_suite(&ctx, cmd.seed, &tol);
    let mut lines = Vec::new();
    let width = exact.iter().chain(&approx).map(|s| s.name.len()).max().unwrap_or(0);
    for s in exact.iter().chain(&approx) {
        lines.push(format!(
            "{}  {:<width$}  {:>5}/{:<5}  {:<6}  max residual {:.3e}",
            verdict(s.passed),
            s.name,
            s.passed_checks,
            s.checks,
            s.backend,
            s.max_residual
        ));
        for f in s.failures.iter().take(5) {
            lines.push(format!("      failure: {f}"));
        }
        for n in &s.notes {
            lines.push(format!("      note: {n}"));
        }
    }
    let total = exact.len() + approx.len();
    let ok = exact.iter().chain(&approx).filter(|s| s.passed).count();
    let passed = ok == total;
    lines.push(format!("suite: {} ({ok}/{total} sections, P={}, Q={})", verdict(passed), cmd.p, cmd.q));
    let report = SuiteReport {
        p: cmd.p,
        q: cmd.q,
        seed: cmd.seed,
        tolerance: tol,
        passed,
        exact,
        approx,
    };
    Ok(Outcome::new(&report, lines, passed))
}
