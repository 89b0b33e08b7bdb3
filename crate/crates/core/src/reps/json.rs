//! JSON form of a representation:
//! `{"P", "Q", "family", "params", "backend", "conductor", "dim",
//! "generators": {"X", "Y", "Z"}}`. Exact entries use the cyclotomic
//! encoding over Q(zeta_conductor); approximate entries are `[re, im]`.

use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::{Family1Params, Family2Exact, Family2Params, GenMats, Generators, Provenance, Representation, Sign};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{CycloField, CycloNum, ExactEnv, FieldElem, RootContext, Tolerance};

pub(crate) fn rows<T: Clone>(m: &Matrix<T>) -> Vec<Vec<T>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Formats `sign q^k` as `q^k` or `-q^k`.
pub fn format_q_power(sign: Sign, k: i64) -> String {
    let s = if sign == Sign::Minus { "-" } else { "" };
    format!("{s}q^{k}")
}

/// Parses `q`, `-q`, `q^k`, `-q^k` (with `k` possibly negative).
pub fn parse_q_power(s: &str) -> Option<(Sign, i64)> {
    let s = s.trim();
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (Sign::Minus, r.trim_start()),
        None => (Sign::Plus, s.strip_prefix('+').unwrap_or(s)),
    };
    let rest = rest.strip_prefix('q')?;
    if rest.is_empty() {
        return Some((sign, 1));
    }
    let exp = rest.strip_prefix('^')?;
    let exp = exp.strip_prefix('(').and_then(|e| e.strip_suffix(')')).unwrap_or(exp);
    exp.parse().ok().map(|k| (sign, k))
}

fn params_json(p: &Provenance) -> (Value, Value) {
    let c = |z: &Complex64| json!([z.re, z.im]);
    match p {
        Provenance::Family1(f) => (json!(1), json!({"r": f.r, "sign": f.sign.symbol()})),
        Provenance::Family2(f) => (json!(2), json!({"lambda": c(&f.lambda), "a": c(&f.a), "b": c(&f.b)})),
        Provenance::Family2Exact(f) => (
            json!(2),
            json!({
                "lambda": format_q_power(f.lambda_sign, f.lambda_exp),
                "a": f.a.to_string(),
                "b": f.b.to_string(),
            }),
        ),
        Provenance::Tensor(a, b) => {
            let leg = |x: &Provenance| {
                let (fam, params) = params_json(x);
                json!({"family": fam, "params": params})
            };
            (json!("tensor"), json!({"left": leg(a), "right": leg(b)}))
        }
    }
}

fn complex_of(v: &Value) -> Result<Complex64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(Error::Malformed(format!("bad complex number {v}"))),
        },
        _ => match v.as_f64() {
            Some(re) => Ok(Complex64::new(re, 0.0)),
            None => Err(Error::Malformed(format!("bad complex number {v}"))),
        },
    }
}

fn provenance_of(family: &Value, params: &Value) -> Result<Provenance> {
    let field = |k: &str| params.get(k).ok_or_else(|| Error::Malformed(format!("params missing {k:?}")));
    match family {
        Value::Number(n) if n.as_u64() == Some(1) => {
            let r = field("r")?
                .as_u64()
                .ok_or_else(|| Error::Malformed("r must be a non-negative integer".into()))?;
            let sign = field("sign")?
                .as_str()
                .ok_or_else(|| Error::Malformed("sign must be a string".into()))?
                .parse()?;
            Ok(Provenance::Family1(Family1Params { r: r as u32, sign }))
        }
        Value::Number(n) if n.as_u64() == Some(2) => {
            if let Some(s) = field("lambda")?.as_str() {
                let (lambda_sign, lambda_exp) =
                    parse_q_power(s).ok_or_else(|| Error::Malformed(format!("bad exact lambda {s:?}")))?;
                let rat = |k: &str| -> Result<BigRational> {
                    let v = field(k)?;
                    v.as_str()
                        .and_then(|s| BigRational::from_str(s).ok())
                        .ok_or_else(|| Error::Malformed(format!("bad rational {v}")))
                };
                Ok(Provenance::Family2Exact(Family2Exact {
                    lambda_sign,
                    lambda_exp,
                    a: rat("a")?,
                    b: rat("b")?,
                }))
            } else {
                Ok(Provenance::Family2(Family2Params {
                    lambda: complex_of(field("lambda")?)?,
                    a: complex_of(field("a")?)?,
                    b: complex_of(field("b")?)?,
                }))
            }
        }
        Value::String(s) if s == "tensor" => {
            let leg = |k: &str| -> Result<Provenance> {
                let v = field(k)?;
                provenance_of(
                    v.get("family").unwrap_or(&Value::Null),
                    v.get("params").unwrap_or(&Value::Null),
                )
            };
            Ok(Provenance::Tensor(Box::new(leg("left")?), Box::new(leg("right")?)))
        }
        other => Err(Error::Malformed(format!("unknown family {other}"))),
    }
}

impl Serialize for Representation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (family, params) = params_json(self.provenance());
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("P", &self.ctx().p())?;
        map.serialize_entry("Q", &self.ctx().q())?;
        map.serialize_entry("family", &family)?;
        map.serialize_entry("params", &params)?;
        map.serialize_entry("backend", self.backend_name())?;
        match self.generators() {
            Generators::Exact { env, mats } => {
                map.serialize_entry("conductor", &env.field.order())?;
                map.serialize_entry("dim", &self.dim())?;
                let g = json!({"X": rows(&mats.x), "Y": rows(&mats.y), "Z": rows(&mats.z), "Zi": rows(&mats.zinv)});
                map.serialize_entry("generators", &GeneratorsOut(&g))?;
            }
            Generators::Approx { mats, .. } => {
                map.serialize_entry("dim", &self.dim())?;
                let c = |m: &Matrix<Complex64>| rows(&m.map(|z| [z.re, z.im]));
                let g = json!({"X": c(&mats.x), "Y": c(&mats.y), "Z": c(&mats.z), "Zi": c(&mats.zinv)});
                map.serialize_entry("generators", &GeneratorsOut(&g))?;
            }
        }
        map.end()
    }
}

/// Emits the generator map in X, Y, Z, Zi order regardless of map sorting.
struct GeneratorsOut<'a>(&'a Value);

impl Serialize for GeneratorsOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(4))?;
        for k in ["X", "Y", "Z", "Zi"] {
            map.serialize_entry(k, &self.0[k])?;
        }
        map.end()
    }
}

/// Pretty-printed JSON for a representation.
pub fn rep_to_json(rep: &Representation) -> String {
    serde_json::to_string_pretty(rep).expect("representation serializes")
}

fn matrix_of<T: FieldElem>(v: &Value, d: usize, entry: impl Fn(&Value) -> Result<T>) -> Result<Matrix<T>> {
    let rows = v
        .as_array()
        .filter(|r| r.len() == d)
        .ok_or_else(|| Error::Malformed(format!("expected {d} rows")))?;
    let mut data = Vec::with_capacity(d * d);
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == d)
            .ok_or_else(|| Error::Malformed(format!("expected {d} columns")))?;
        for e in row {
            data.push(entry(e)?);
        }
    }
    Ok(Matrix::from_vec(d, d, data))
}

fn mats_of<T: FieldElem>(env: &T::Env, g: &Value, d: usize, entry: impl Fn(&Value) -> Result<T> + Copy) -> Result<GenMats<T>> {
    let get = |k: &str| g.get(k).ok_or_else(|| Error::Malformed(format!("generators missing {k:?}")));
    let x = matrix_of(get("X")?, d, entry)?;
    let y = matrix_of(get("Y")?, d, entry)?;
    let z = matrix_of(get("Z")?, d, entry)?;
    let zinv = match g.get("Zi") {
        Some(m) => matrix_of(m, d, entry)?,
        None => z
            .inverse(env)
            .ok_or_else(|| Error::Malformed("Z is not invertible".into()))?,
    };
    Ok(GenMats { x, y, z, zinv })
}

/// Reads a representation written by [`rep_to_json`], re-validating the
/// defining relations.
pub fn rep_from_json(src: &str) -> Result<Representation> {
    let v: Value = serde_json::from_str(src).map_err(|e| Error::Malformed(e.to_string()))?;
    let uint = |k: &str| -> Result<u32> {
        v.get(k)
            .and_then(Value::as_u64)
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| Error::Malformed(format!("missing or invalid {k:?}")))
    };
    let ctx = RootContext::new(uint("P")?, uint("Q")?)?;
    let prov = provenance_of(&v["family"], &v["params"])?;
    let d = uint("dim")? as usize;
    let g = &v["generators"];
    let gens = match v["backend"].as_str() {
        Some("exact") => {
            let conductor = uint("conductor")?;
            if conductor % ctx.q() != 0 {
                return Err(Error::Malformed(format!("conductor {conductor} is not a multiple of Q")));
            }
            let field = CycloField::new(conductor);
            let env = ExactEnv::new(field.clone(), conductor / ctx.q() * ctx.p());
            let mats = mats_of(&env, g, d, |e| CycloNum::from_json(&field, e))?;
            Generators::Exact { env, mats }
        }
        Some("approx") => {
            let env = ctx.approx_env();
            let mats = mats_of(&env, g, d, complex_of)?;
            Generators::Approx { env, mats }
        }
        _ => return Err(Error::Malformed("backend must be \"exact\" or \"approx\"".into())),
    };
    Representation::new(ctx, gens, prov, &Tolerance::default())
}
