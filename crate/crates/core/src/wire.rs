//! JSON encodings.
//!
//! An element of `F_p` is a bare integer. An element of a higher level is
//! the array of its coordinates over the level below, little-endian, so the
//! innermost arrays hold `F_p` digits: an `F_27` element over `F_3 ⊂ F_3`
//! is `[[1], [2], [0]]`. Decoders also accept a bare integer at any level,
//! read as a prime-field scalar.
//!
//! Polynomials are arrays of coefficients, little-endian. Rational
//! functions are polynomials when the denominator is 1, else
//! `{"num": ..., "den": ...}`.

use serde_json::{json, Map, Value};

use crate::codes::{self, Certificate, Entries, GenMatrix};
use crate::error::{Error, Result};
use crate::ferrers::{DistanceMode, FerrersCode, FerrersDiagram, FerrersReport};
use crate::gf::{FieldElem, FieldTower, Level};
use crate::linalg::Matrix;
use crate::msrd::{DistanceReport, MsrdCode, SumRankProfile};
use crate::ratfun::{Poly, PolyRing, RatFun, RatFunField};
use crate::twist::TwistAut;

fn parse(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn chunk_json(tower: &FieldTower, digits: &[u32], level: Level) -> Value {
    match level.below() {
        None => json!(digits[0]),
        Some(below) => {
            let w = tower.width(below);
            Value::Array(digits.chunks(w).map(|c| chunk_json(tower, c, below)).collect())
        }
    }
}

/// `x` written at its own level.
pub fn elem_to_json(tower: &FieldTower, x: &FieldElem) -> Value {
    chunk_json(tower, x.digits(), x.level())
}

/// `x` written at `level` (lifted first).
pub fn elem_to_json_at(tower: &FieldTower, x: &FieldElem, level: Level) -> Value {
    let f = tower.field(level).expect("level present");
    elem_to_json(tower, &f.lift(x))
}

fn collect_digits(tower: &FieldTower, v: &Value, level: Level, out: &mut Vec<u32>) -> Result<()> {
    match (v, level.below()) {
        (Value::Number(_), None) => {
            let d = v.as_u64().ok_or_else(|| parse(format!("bad digit {v}")))?;
            if d >= tower.p() as u64 {
                return Err(parse(format!("digit {d} out of range for p = {}", tower.p())));
            }
            out.push(d as u32);
            Ok(())
        }
        (Value::Array(items), Some(below)) => {
            let deg = tower.degree(level);
            if items.len() != deg {
                return Err(parse(format!(
                    "{} element needs {deg} coordinates, got {}",
                    level.name(),
                    items.len()
                )));
            }
            items.iter().try_for_each(|c| collect_digits(tower, c, below, out))
        }
        _ => Err(parse(format!("malformed {} element {v}", level.name()))),
    }
}

pub fn elem_from_json(tower: &FieldTower, level: Level, v: &Value) -> Result<FieldElem> {
    let field = tower.field(level)?;
    if let (Some(i), true) = (v.as_i64(), level != Level::Fp) {
        return Ok(field.from_int(i));
    }
    let mut digits = Vec::with_capacity(field.width());
    collect_digits(tower, v, level, &mut digits)?;
    field.from_digits(&digits)
}

pub fn poly_to_json(tower: &FieldTower, f: &Poly) -> Value {
    Value::Array(f.coeffs().iter().map(|c| elem_to_json(tower, c)).collect())
}

pub fn poly_from_json(tower: &FieldTower, level: Level, v: &Value) -> Result<Poly> {
    let items = v.as_array().ok_or_else(|| parse("polynomial must be an array"))?;
    let coeffs = items.iter().map(|c| elem_from_json(tower, level, c)).collect::<Result<Vec<_>>>()?;
    Ok(PolyRing::new(tower.field(level)?).from_coeffs(coeffs))
}

pub fn ratfun_to_json(tower: &FieldTower, g: &RatFun) -> Value {
    if g.den().is_one() {
        poly_to_json(tower, g.num())
    } else {
        json!({"num": poly_to_json(tower, g.num()), "den": poly_to_json(tower, g.den())})
    }
}

pub fn ratfun_from_json(funcs: &RatFunField, v: &Value) -> Result<RatFun> {
    let tower = funcs.field().tower().clone();
    let level = funcs.field().level();
    match v {
        Value::Object(o) => {
            let get = |k: &str| o.get(k).ok_or_else(|| parse(format!("rational function needs {k:?}")));
            let num = poly_from_json(&tower, level, get("num")?)?;
            let den = poly_from_json(&tower, level, get("den")?)?;
            funcs.fraction(num, den)
        }
        _ => Ok(funcs.from_poly(poly_from_json(&tower, level, v)?)),
    }
}

/// `{p, s, m, r?, moduli}`; `moduli[i]` is the modulus of level `i + 1`
/// with coefficients at level `i`.
pub fn tower_to_json(tower: &FieldTower) -> Value {
    let levels = [Level::Fq, Level::Fqm, Level::Fqmr];
    let moduli: Vec<Value> = levels
        .iter()
        .filter(|&&l| tower.has_level(l))
        .map(|&l| poly_to_json(tower, &tower.modulus(l).unwrap()))
        .collect();
    let mut o = Map::new();
    o.insert("p".into(), json!(tower.p()));
    o.insert("s".into(), json!(tower.s()));
    o.insert("m".into(), json!(tower.m()));
    if let Some(r) = tower.r() {
        o.insert("r".into(), json!(r));
    }
    o.insert("moduli".into(), Value::Array(moduli));
    Value::Object(o)
}

pub fn tower_from_json(v: &Value) -> Result<FieldTower> {
    let p = get_usize(v, "p")? as u32;
    let moduli = v.get("moduli").and_then(Value::as_array).ok_or_else(|| parse("tower needs moduli"))?;
    // Decode level by level: each modulus is read against the tower built so far.
    let mut flat: Vec<Vec<Vec<u32>>> = Vec::new();
    for (i, m) in moduli.iter().enumerate() {
        let partial = if i < 2 {
            None
        } else {
            Some(FieldTower::from_moduli(p, &flat)?)
        };
        let coeffs = m.as_array().ok_or_else(|| parse("modulus must be an array"))?;
        let digits = coeffs
            .iter()
            .map(|c| match (&partial, i) {
                (_, 0) => c.as_u64().map(|d| vec![d as u32]).ok_or_else(|| parse(format!("bad F_p digit {c}"))),
                (None, _) => {
                    let mut out = Vec::new();
                    flatten_ints(c, &mut out)?;
                    Ok(out)
                }
                (Some(t), _) => Ok(elem_from_json(t, Level::Fqm, c)?.digits().to_vec()),
            })
            .collect::<Result<Vec<_>>>()?;
        flat.push(digits);
    }
    let tower = FieldTower::from_moduli(p, &flat)?;
    for (key, want) in [("s", tower.s()), ("m", tower.m())] {
        if let Some(got) = v.get(key).and_then(Value::as_u64) {
            if got as usize != want {
                return Err(parse(format!("{key} = {got} disagrees with the moduli ({want})")));
            }
        }
    }
    Ok(tower)
}

fn flatten_ints(v: &Value, out: &mut Vec<u32>) -> Result<()> {
    match v {
        Value::Number(_) => {
            out.push(v.as_u64().ok_or_else(|| parse(format!("bad digit {v}")))? as u32);
            Ok(())
        }
        Value::Array(a) => a.iter().try_for_each(|x| flatten_ints(x, out)),
        _ => Err(parse(format!("expected digits, got {v}"))),
    }
}

pub fn get_usize(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| parse(format!("missing or invalid {key:?}")))
}

fn field(v: &Value, key: &str) -> Result<Value> {
    v.get(key).cloned().ok_or_else(|| parse(format!("missing {key:?}")))
}

pub fn matrix_to_json(tower: &FieldTower, m: &Matrix<FieldElem>, level: Level) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| elem_to_json_at(tower, x, level)).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(tower: &FieldTower, level: Level, v: &Value) -> Result<Matrix<FieldElem>> {
    let rows = v.as_array().ok_or_else(|| parse("matrix must be an array of rows"))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| parse("matrix row must be an array"))?
                .iter()
                .map(|x| elem_from_json(tower, level, x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(Error::ShapeMismatch("ragged matrix".into()));
    }
    if rows.is_empty() {
        return Err(Error::ShapeMismatch("empty matrix".into()));
    }
    Ok(Matrix::from_rows(rows))
}

/// `{tower, lambda, points, k, entries, reduced, f?}`.
pub fn code_to_json(g: &GenMatrix) -> Value {
    let tower = g.tower();
    let entries = match g.entries() {
        Entries::Function(m) => Value::Array(
            m.to_rows()
                .iter()
                .map(|r| Value::Array(r.iter().map(|x| ratfun_to_json(tower, x)).collect()))
                .collect(),
        ),
        Entries::Finite(m) => matrix_to_json(tower, m, tower.top()),
    };
    let mut o = Map::new();
    o.insert("tower".into(), tower_to_json(tower));
    o.insert("lambda".into(), g.lambda().map_or(Value::Null, |l| elem_to_json_at(tower, l, Level::Fqm)));
    o.insert("points".into(), Value::Array(g.points().iter().map(|p| ratfun_to_json(tower, p)).collect()));
    o.insert("k".into(), json!(g.k()));
    o.insert("entries".into(), entries);
    o.insert("reduced".into(), json!(g.is_reduced()));
    if let Some(f) = g.modulus() {
        o.insert("f".into(), poly_to_json(tower, f));
    }
    Value::Object(o)
}

/// Codes with a lambda and points are rebuilt from them and must reproduce
/// the stored entries; other codes are read from their entries.
pub fn code_from_json(v: &Value) -> Result<GenMatrix> {
    let tower = tower_from_json(&field(v, "tower")?)?;
    let reduced = v.get("reduced").and_then(Value::as_bool).unwrap_or(false);
    let points = v.get("points").and_then(Value::as_array).cloned().unwrap_or_default();
    let lambda = v.get("lambda").filter(|l| !l.is_null());
    let code = match lambda {
        Some(l) if !points.is_empty() => {
            let base = tower.truncated(Level::Fqm);
            let phi = TwistAut::new(&base, elem_from_json(&base, Level::Fqm, l)?)?;
            let points = points.iter().map(|p| ratfun_from_json(phi.funcs(), p)).collect::<Result<Vec<_>>>()?;
            let g = codes::construct_mrd(&phi, &points, get_usize(v, "k")?)?;
            if reduced {
                let f = match v.get("f") {
                    Some(f) => poly_from_json(&base, Level::Fqm, f)?,
                    None => tower.modulus(Level::Fqmr).ok_or(Error::MissingLevel(Level::Fqmr))?,
                };
                codes::reduce_code(&g, &f, true)?
            } else {
                g
            }
        }
        _ => GenMatrix::finite(&tower, matrix_from_json(&tower, tower.top(), &field(v, "entries")?)?)?,
    };
    if let Some(entries) = v.get("entries") {
        if code_to_json(&code)["entries"] != *entries {
            return Err(parse("stored entries disagree with the construction data"));
        }
    }
    Ok(code)
}

/// `{count_checked, total, certified, witness?, wall_time_ms}`.
pub fn certificate_to_json(tower: &FieldTower, c: &Certificate) -> Value {
    let mut o = Map::new();
    o.insert("count_checked".into(), json!(c.count_checked as u64));
    o.insert("total".into(), json!(c.total as u64));
    o.insert("certified".into(), json!(c.certified));
    if let Some(w) = &c.witness {
        o.insert("witness".into(), matrix_to_json(tower, w, Level::Fq));
    }
    o.insert("wall_time_ms".into(), json!(c.wall_time_ms as u64));
    Value::Object(o)
}

pub fn diagram_to_json(d: &FerrersDiagram) -> Value {
    json!({"heights": d.heights()})
}

pub fn diagram_from_json(v: &Value) -> Result<FerrersDiagram> {
    let h = v.get("heights").unwrap_or(v);
    let h = h
        .as_array()
        .ok_or_else(|| parse("heights must be an array"))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| parse(format!("bad height {x}"))))
        .collect::<Result<Vec<_>>>()?;
    FerrersDiagram::new(h)
}

pub fn ferrers_report_to_json(tower: &FieldTower, r: &FerrersReport) -> Value {
    let mut o = Map::new();
    o.insert("dimension".into(), json!(r.dimension));
    o.insert("bound".into(), json!(r.bound));
    o.insert("optimal".into(), json!(r.optimal));
    o.insert("fits".into(), json!(r.fits));
    o.insert(
        "mode".into(),
        json!(match r.mode {
            DistanceMode::Exhaustive => "exhaustive",
            DistanceMode::Sampled => "sampled",
        }),
    );
    o.insert("checked".into(), json!(r.checked as u64));
    o.insert("min_rank".into(), json!(r.min_rank));
    o.insert("distance_ok".into(), json!(r.distance_ok));
    if let Some(w) = &r.violation {
        o.insert("witness".into(), matrix_to_json(tower, w, Level::Fq));
    }
    Value::Object(o)
}

/// `{tower, diagram, d, K, optimal, basis, verification_report}`; the
/// report is included when given.
pub fn ferrers_to_json(code: &FerrersCode, report: Option<&FerrersReport>) -> Value {
    let tower = code.fq.tower().truncated(Level::Fq);
    let optimal = crate::ferrers::es_bound(&code.diagram, code.d).is_ok_and(|b| b == code.dim());
    let mut o = Map::new();
    o.insert("tower".into(), tower_to_json(code.fq.tower()));
    o.insert("diagram".into(), diagram_to_json(&code.diagram));
    o.insert("d".into(), json!(code.d));
    o.insert("K".into(), json!(code.dim()));
    o.insert("optimal".into(), json!(optimal));
    o.insert(
        "basis".into(),
        Value::Array(code.basis.iter().map(|b| matrix_to_json(&tower, b, Level::Fq)).collect()),
    );
    o.insert("verification_report".into(), report.map_or(Value::Null, |r| ferrers_report_to_json(&tower, r)));
    Value::Object(o)
}

/// Reads a Ferrers code. The tower defaults to `F_p` with `p` from a
/// top-level `"p"` key when `"tower"` is absent.
pub fn ferrers_from_json(v: &Value) -> Result<FerrersCode> {
    let tower = match v.get("tower") {
        Some(t) => tower_from_json(t)?,
        None => FieldTower::generate(get_usize(v, "p")? as u32, 1, 1, None, 0)?,
    };
    let diagram = diagram_from_json(&field(v, "diagram")?)?;
    let d = get_usize(v, "d")?;
    let basis = v
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| parse("missing basis"))?
        .iter()
        .map(|b| matrix_from_json(&tower, Level::Fq, b))
        .collect::<Result<Vec<_>>>()?;
    FerrersCode::from_basis(diagram, d, tower.field(Level::Fq)?, basis)
}

pub fn msrd_report_to_json(r: &DistanceReport) -> Value {
    json!({
        "distance": r.distance,
        "singleton": r.singleton,
        "msrd": r.msrd,
        "classes": r.classes as u64,
    })
}

/// `{tower, lambda, profile, k, G, distance_report}`.
pub fn msrd_to_json(code: &MsrdCode, report: Option<&DistanceReport>) -> Value {
    json!({
        "tower": tower_to_json(&code.tower),
        "lambda": elem_to_json_at(&code.tower, &code.lambda, Level::Fqm),
        "profile": code.profile.blocks(),
        "k": code.k,
        "G": matrix_to_json(&code.tower, &code.g, Level::Fqm),
        "distance_report": report.map_or(Value::Null, msrd_report_to_json),
    })
}

pub fn msrd_from_json(v: &Value) -> Result<MsrdCode> {
    let tower = tower_from_json(&field(v, "tower")?)?.truncated(Level::Fqm);
    let lambda = elem_from_json(&tower, Level::Fqm, &field(v, "lambda")?)?;
    let profile = v
        .get("profile")
        .and_then(Value::as_array)
        .ok_or_else(|| parse("missing profile"))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| parse(format!("bad block length {x}"))))
        .collect::<Result<Vec<_>>>()?;
    let profile = SumRankProfile::new(profile)?;
    let g = matrix_from_json(&tower, Level::Fqm, &field(v, "G")?)?;
    let k = get_usize(v, "k")?;
    if g.rows() != k || g.cols() != profile.len() {
        return Err(Error::ShapeMismatch(format!(
            "G is {}x{}, expected {k}x{}",
            g.rows(),
            g.cols(),
            profile.len()
        )));
    }
    Ok(MsrdCode {
        profile,
        k,
        g,
        tower,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use proptest::prelude::*;

    #[test]
    fn element_nesting() {
        let t = presets::paper_s5_base();
        let f = t.field(Level::Fqm).unwrap();
        let a = f.generator();
        assert_eq!(elem_to_json(&t, &a), json!([[0], [1], [0]]));
        assert_eq!(elem_to_json(&t, &t.field(Level::Fp).unwrap().from_int(2)), json!(2));
        assert_eq!(elem_from_json(&t, Level::Fqm, &json!(2)).unwrap(), f.from_int(2));
        assert!(elem_from_json(&t, Level::Fqm, &json!([[0], [3], [0]])).is_err());
        assert!(elem_from_json(&t, Level::Fqm, &json!([[0], [1]])).is_err());
    }

    #[test]
    fn tower_round_trip() {
        let reduced = presets::paper_reduced_generator().unwrap();
        for t in [presets::paper_s5_base(), reduced.tower().clone(), FieldTower::generate(2, 2, 3, Some(2), 5).unwrap()] {
            assert_eq!(tower_from_json(&tower_to_json(&t)).unwrap(), t);
        }
    }

    #[test]
    fn paper_codes_round_trip() {
        let g = presets::paper_generator().unwrap();
        let v = code_to_json(&g);
        assert_eq!(v["lambda"], json!([[2], [0], [0]]));
        assert_eq!(code_from_json(&v).unwrap(), g);
        let r = presets::paper_reduced_generator().unwrap();
        let back = code_from_json(&code_to_json(&r)).unwrap();
        assert_eq!(back.matrix(), r.matrix());
        let mut tampered = code_to_json(&r);
        tampered["entries"][0][0] = tampered["entries"][0][1].clone();
        assert!(matches!(code_from_json(&tampered), Err(Error::Parse(_))));
    }

    #[test]
    fn msrd_round_trip() {
        let tower = FieldTower::generate(3, 1, 2, None, 0).unwrap();
        let phi = TwistAut::with_auto_lambda(&tower).unwrap();
        let code = crate::msrd::construct_msrd(&SumRankProfile::new(vec![2, 2]).unwrap(), 2, &phi).unwrap();
        assert_eq!(msrd_from_json(&msrd_to_json(&code, None)).unwrap(), code);
    }

    #[test]
    fn ferrers_round_trip() {
        let tower = FieldTower::generate(3, 1, 2, None, 0).unwrap();
        let phi = TwistAut::with_auto_lambda(&tower).unwrap();
        let p = crate::ferrers::BlockProfile::new(vec![(2, 2), (4, 2)]).unwrap();
        let code = crate::ferrers::construct_ferrers(&p, 2, &phi).unwrap();
        let v = ferrers_to_json(&code, None);
        assert_eq!(v["K"], json!(8));
        assert_eq!(v["optimal"], json!(true));
        let back = ferrers_from_json(&v).unwrap();
        assert_eq!(back.basis, code.basis);
    }

    proptest! {
        #[test]
        fn random_elements_round_trip(seed in 0u64..1000, p in prop::sample::select(vec![2u32, 3, 5]), s in 1usize..3, m in 1usize..3) {
            use rand::SeedableRng;
            let t = FieldTower::generate(p, s, m, Some(2), seed).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for level in Level::ALL {
                let f = t.field(level).unwrap();
                let x = f.random(&mut rng);
                prop_assert_eq!(elem_from_json(&t, level, &elem_to_json(&t, &x)).unwrap(), x);
            }
        }
    }
}
