use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::eigen::{eigen_solve, norm, residual, EigenPair};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::reps::{Provenance, Representation};
use crate::scalar::ApproxEnv;

type C = Complex64;

/// Relative size below which a ladder image counts as zero.
pub const VANISH_TOL: f64 = 1e-8;
/// Relative eigen-residual accepted for ladder inputs and outputs.
pub const LADDER_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Raise,
    Lower,
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

fn q_num(env: &ApproxEnv, x: C) -> C {
    env.q_num_complex(x)
}

/// The operator `(J-[x])(J-[x∓2]) Z`.
fn ladder_operator(env: &ApproxEnv, j: &Matrix<C>, z: &Matrix<C>, x: C, dir: Direction) -> Matrix<C> {
    let other = match dir {
        Direction::Raise => x - re(2.0),
        Direction::Lower => x + re(2.0),
    };
    j.sub_scalar(&q_num(env, x)).mul(&j.sub_scalar(&q_num(env, other))).mul(z)
}

fn eigen_scale(j: &Matrix<C>) -> f64 {
    j.max_abs().max(1.0)
}

/// Applies the raising (`(J-[x])(J-[x-2]) Z`) or lowering
/// (`(J-[x])(J-[x+2]) Z`) operator to an eigenvector of J for `[x]_q`.
pub fn ladder_apply(rep: &Representation, v: &[C], x: C, dir: Direction) -> Result<Vec<C>> {
    let env = rep.ctx().approx_env();
    let m = rep.complex_mats();
    let j = m.j(&env);
    if v.len() != rep.dim() {
        return Err(Error::OutOfRange(format!("vector has length {}, expected {}", v.len(), rep.dim())));
    }
    let res = residual(&j, q_num(&env, x), v);
    if res > LADDER_RESIDUAL_TOL * norm(v).max(f64::MIN_POSITIVE) * eigen_scale(&j) {
        return Err(Error::NotEigenvector(res));
    }
    Ok(ladder_operator(&env, &j, &m.z, x, dir).apply(v))
}

/// Whether a ladder image of `v` is zero, judged against the size of the
/// operator that produced it.
pub fn image_vanishes(rep: &Representation, v: &[C], image: &[C], x: C, dir: Direction) -> bool {
    let env = rep.ctx().approx_env();
    let m = rep.complex_mats();
    let op = ladder_operator(&env, &m.j(&env), &m.z, x, dir);
    norm(image) <= VANISH_TOL * norm(v) * op.max_abs().max(1.0) * (rep.dim() as f64).sqrt()
}

/// The two solutions `y` of `y - 1/y = mu (q - q^-1)`; `y = q^x` labels
/// the eigenvalue `mu = [x]_q`.
pub fn label_roots(env: &ApproxEnv, mu: C) -> [C; 2] {
    let s = env.q_pow_complex(re(1.0)) - env.q_pow_complex(re(-1.0));
    let b = mu * s;
    let disc = (b * b + re(4.0)).sqrt();
    let y1 = (b + disc) / 2.0;
    [y1, -y1.inv()]
}

/// `x` with `q^x = y`: an integer in `0..Q` when `y` is a power of q,
/// otherwise the principal logarithm.
pub fn label_of(env: &ApproxEnv, y: C) -> (C, bool) {
    for n in 0..env.q_order as i64 {
        if (env.q_pow_complex(re(n as f64)) - y).norm() <= 1e-8 * y.norm().max(1.0) {
            return (re(n as f64), true);
        }
    }
    let factor = C::new(0.0, 2.0 * std::f64::consts::PI * env.p as f64 / env.q_order as f64);
    (y.ln() / factor, false)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Link {
    /// Raising maps node k to `coefficient` times node k+1.
    Raised(C),
    /// Raising annihilates the node.
    Vanished,
    /// Raising maps the last node back onto the first.
    Closed(C),
    /// Raising gives a vector that matches no remaining node.
    Unmatched,
}

impl Link {
    pub fn name(&self) -> &'static str {
        match self {
            Link::Raised(_) => "raised",
            Link::Vanished => "vanished",
            Link::Closed(_) => "closed",
            Link::Unmatched => "unmatched",
        }
    }

    pub fn coefficient(&self) -> Option<C> {
        match self {
            Link::Raised(c) | Link::Closed(c) => Some(*c),
            _ => None,
        }
    }
}

/// J-eigenpairs ordered by the raising operator.
#[derive(Clone, Debug)]
pub struct LadderChain {
    pub pairs: Vec<EigenPair>,
    /// `x_k = x_0 + 2k` with `pairs[k].value = [x_k]_q`.
    pub x_labels: Vec<C>,
    /// `links[k]` describes raising of node k; the last entry is what
    /// happens past the end of the chain.
    pub links: Vec<Link>,
    pub integer_labels: bool,
    /// `x_0 = Q - d + 1` modulo Q, recorded for the highest-weight family.
    pub predicted_start: Option<i64>,
    pub start_matches: Option<bool>,
    pub bottom_lower_vanishes: bool,
}

impl LadderChain {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn eigenvalues(&self) -> Vec<C> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn top_raise_vanishes(&self) -> bool {
        matches!(self.links.last(), Some(Link::Vanished))
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self.links.last(), Some(Link::Closed(_)))
    }
}

impl Serialize for LadderChain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs = |v: &[C]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("eigenvalues", &pairs(&self.eigenvalues()))?;
        if self.integer_labels {
            let labels: Vec<i64> = self.x_labels.iter().map(|x| x.re.round() as i64).collect();
            map.serialize_entry("xLabels", &labels)?;
        } else {
            map.serialize_entry("xLabels", &pairs(&self.x_labels))?;
        }
        let names: Vec<&str> = self.links.iter().map(Link::name).collect();
        map.serialize_entry("links", &names)?;
        let coeffs: Vec<Option<[f64; 2]>> = self
            .links
            .iter()
            .map(|l| l.coefficient().map(|c| [c.re, c.im]))
            .collect();
        map.serialize_entry("link_coefficients", &coeffs)?;
        map.serialize_entry("eigen_residuals", &self.pairs.iter().map(|p| p.residual).collect::<Vec<_>>())?;
        if let Some(p) = self.predicted_start {
            map.serialize_entry("predicted_start", &p)?;
            map.serialize_entry("start_matches", &self.start_matches)?;
        }
        map.serialize_entry("top_raise_vanishes", &self.top_raise_vanishes())?;
        map.serialize_entry("bottom_lower_vanishes", &self.bottom_lower_vanishes)?;
        map.end()
    }
}

struct Walk {
    nodes: Vec<usize>,
    labels: Vec<C>,
    links: Vec<Link>,
    integer: bool,
}

/// Follows raising from `start` with label `x`.
fn walk(env: &ApproxEnv, j: &Matrix<C>, z: &Matrix<C>, pairs: &[EigenPair], start: usize, x: C, integer: bool) -> Walk {
    let scale = eigen_scale(j);
    let mut w = Walk {
        nodes: vec![start],
        labels: vec![x],
        links: Vec::new(),
        integer,
    };
    loop {
        let (k, xk) = (*w.nodes.last().expect("non-empty"), *w.labels.last().expect("non-empty"));
        let op = ladder_operator(env, j, z, xk, Direction::Raise);
        let v = &pairs[k].vector;
        let image = op.apply(v);
        let size = norm(&image);
        if size <= VANISH_TOL * op.max_abs().max(1.0) * (v.len() as f64).sqrt() {
            w.links.push(Link::Vanished);
            return w;
        }
        let target = q_num(env, xk + re(2.0));
        let hit = pairs
            .iter()
            .enumerate()
            .map(|(i, p)| (i, (p.value - target).norm()))
            .filter(|(_, d)| *d <= 1e-6 * target.norm().max(1.0))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let eigen_ok = residual(j, target, &image) <= LADDER_RESIDUAL_TOL * size * scale;
        let Some((next, _)) = hit.filter(|_| eigen_ok) else {
            w.links.push(Link::Unmatched);
            return w;
        };
        let coeff: C = pairs[next]
            .vector
            .iter()
            .zip(&image)
            .map(|(a, b)| a.conj() * b)
            .sum();
        if next == w.nodes[0] {
            w.links.push(Link::Closed(coeff));
            return w;
        }
        if w.nodes.contains(&next) {
            w.links.push(Link::Unmatched);
            return w;
        }
        w.links.push(Link::Raised(coeff));
        w.nodes.push(next);
        w.labels.push(xk + re(2.0));
    }
}

/// Orders the eigenvectors of J into a raising chain.
///
/// Every eigenvalue is tried as the start, with both solutions of its
/// label equation. The longest walk wins; among equally long walks integer
/// labels are preferred, then the first found. With the other label branch
/// raising acts as lowering, so both directions are covered. Fails unless
/// the chain reaches every eigenvalue.
pub fn spectrum_chain(rep: &Representation) -> Result<LadderChain> {
    let env = rep.ctx().approx_env();
    let m = rep.complex_mats();
    let j = m.j(&env);
    let pairs = eigen_solve(&j)?;
    let d = pairs.len();
    let mut best: Option<Walk> = None;
    for start in 0..d {
        for y in label_roots(&env, pairs[start].value) {
            let (x, integer) = label_of(&env, y);
            let w = walk(&env, &j, &m.z, &pairs, start, x, integer);
            let better = best
                .as_ref()
                .is_none_or(|b| (w.nodes.len(), w.integer) > (b.nodes.len(), b.integer));
            if better {
                best = Some(w);
            }
        }
    }
    let w = best.expect("at least one eigenpair");
    if w.nodes.len() < d {
        return Err(Error::IncompleteChain {
            linked: w.nodes.len(),
            dim: d,
            partial: w.nodes.iter().map(|&i| pairs[i].value).collect(),
        });
    }
    let q = rep.ctx().q() as i64;
    let mut labels = w.labels;
    if w.integer {
        // Shift the start into 1..=Q; [x]_q is Q-periodic.
        let x0 = labels[0].re.round() as i64;
        let shift = (x0 - 1).rem_euclid(q) + 1 - x0;
        for l in labels.iter_mut() {
            *l += re(shift as f64);
        }
    }
    let predicted_start = match rep.provenance() {
        Provenance::Family1(_) => Some(q - d as i64 + 1),
        _ => None,
    };
    let start_matches = predicted_start.map(|p| w.integer && (labels[0].re.round() as i64 - p).rem_euclid(q) == 0);
    let bottom = &pairs[w.nodes[0]].vector;
    let lowered = ladder_operator(&env, &j, &m.z, labels[0], Direction::Lower).apply(bottom);
    let bottom_lower_vanishes = image_vanishes(rep, bottom, &lowered, labels[0], Direction::Lower);
    Ok(LadderChain {
        pairs: w.nodes.iter().map(|&i| pairs[i].clone()).collect(),
        x_labels: labels,
        links: w.links,
        integer_labels: w.integer,
        predicted_start,
        start_matches,
        bottom_lower_vanishes,
    })
}
