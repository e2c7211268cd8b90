//! Text and JSON rendering of results. JSON objects have sorted keys, so
//! output is byte-stable.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Number, Value};

use crate::blowup::{ExactnessReport, Presentation};
use crate::gring::GradedRing;
use crate::intlat::SmithForm;
use crate::polyring::IntPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn int(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integers are valid JSON numbers"))
}

pub fn smith_json(degree: u32, s: &SmithForm) -> Value {
    json!({
        "degree": degree,
        "free_rank": s.free_rank,
        "torsion": s.torsion().iter().map(int).collect::<Vec<_>>(),
    })
}

/// `{"text": ..., "terms": [{"coefficient": c, "exponents": [..]}]}` with
/// exponents listed in generator order.
pub fn poly_json(p: &IntPolynomial) -> Value {
    let terms: Vec<Value> =
        p.terms().into_iter().map(|(m, c)| json!({ "coefficient": int(c), "exponents": m })).collect();
    json!({ "text": p.to_string(), "terms": terms })
}

pub fn ring_json(r: &GradedRing, max_degree: u32) -> Value {
    let gens: Vec<Value> =
        r.sig().names().iter().zip(r.sig().degrees()).map(|(n, d)| json!({ "name": n, "degree": d })).collect();
    let pieces: Vec<Value> = (0..=max_degree).map(|k| smith_json(k, &r.smith(k))).collect();
    json!({
        "text": r.to_string(),
        "generators": gens,
        "relations": r.relations().iter().map(poly_json).collect::<Vec<_>>(),
        "pieces": pieces,
    })
}

pub fn presentation_json(p: &Presentation) -> Value {
    let mut v = ring_json(&p.ring, p.valid_through);
    let obj = v.as_object_mut().expect("object");
    obj.insert("kind".into(), json!(p.kind.to_string()));
    obj.insert("valid_through".into(), json!(p.valid_through));
    v
}

pub fn exactness_json(r: &ExactnessReport) -> Value {
    json!({
        "degree": r.degree,
        "target": r.target.to_string(),
        "surjective": r.surjective,
        "well_defined": r.well_defined,
        "exact": r.exact,
        "kernel_rank": r.kernel_rank,
        "image_rank": r.image_rank,
        "message": r.to_string(),
    })
}

/// One line per degree: `A^k = Z + Z/24`.
pub fn pieces_text(pieces: &[(u32, SmithForm)]) -> String {
    pieces.iter().map(|(k, s)| format!("A^{k} = {s}\n")).collect()
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlat::{smith_invariants, IntMatrix};

    #[test]
    fn smith_json_shape() {
        let s = smith_invariants(&IntMatrix::from_i64(3, &[&[0, 1, 0], &[24, 0, 24]]));
        assert_eq!(serde_json::to_string(&smith_json(2, &s)).unwrap(), r#"{"degree":2,"free_rank":1,"torsion":[24]}"#);
    }

    #[test]
    fn point_ring() {
        let r = GradedRing::point();
        let v = ring_json(&r, 1);
        assert_eq!(v["text"], "Z");
        assert_eq!(v["pieces"][1]["free_rank"], 0);
    }

    #[test]
    fn big_integers_stay_exact() {
        let n: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(serde_json::to_string(&int(&n)).unwrap(), "123456789012345678901234567890");
    }
}
