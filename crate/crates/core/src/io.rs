//! JSON file formats. Coordinates in files are 1-based; values are decimal
//! integers or `"p/q"` strings, never floats.
//!
//! * slice function: `{"n", "k", "order": "colex", "values": [...]}`,
//!   indexed by colex rank;
//! * polynomial: `{"n", "terms": [{"vars": [1-based], "coeff": "p/q"}]}`;
//! * cube function: `{"m", "order": "binary-lsb", "values": [...]}`, where
//!   bit `i-1` of the index is `x_i`.

use std::fs;
use std::path::Path;

use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::slice::{MultilinearPolynomial, SliceDomain, SliceFunction};
use crate::transfer::CubeFunction;

fn value_to_json(v: &Rational) -> Value {
    if v.is_integer() {
        if let Some(i) = v.numer().to_i64() {
            return json!(i);
        }
    }
    json!(format_rational(v))
}

fn value_from_json(v: &Value, location: impl Fn() -> String) -> Result<Rational> {
    match v {
        Value::Number(num) => match num.as_i64() {
            Some(i) => Ok(int(i)),
            None => Err(Error::format(location(), format!("{num} is not an integer; use \"p/q\""))),
        },
        Value::String(s) => parse_rational(s).map_err(|e| match e {
            Error::Format { message, .. } => Error::format(location(), message),
            other => other,
        }),
        other => Err(Error::format(location(), format!("expected integer or \"p/q\", found {other}"))),
    }
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::format(what, "expected a JSON object"))
}

fn usize_field(o: &Map<String, Value>, field: &str) -> Result<usize> {
    o.get(field)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::format(field, "missing or not a non-negative integer"))
}

fn check_order(o: &Map<String, Value>, expected: &str) -> Result<()> {
    match o.get("order") {
        None => Ok(()),
        Some(Value::String(s)) if s == expected => Ok(()),
        Some(other) => Err(Error::format("order", format!("expected \"{expected}\", found {other}"))),
    }
}

fn values_field(o: &Map<String, Value>, expected: u64) -> Result<&Vec<Value>> {
    let values = o
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::format("values", "missing or not an array"))?;
    if values.len() as u64 != expected {
        return Err(Error::format(
            "values",
            format!("expected {expected} entries, found {}", values.len()),
        ));
    }
    Ok(values)
}

pub fn slice_function_to_json(f: &SliceFunction) -> Value {
    json!({
        "n": f.domain().n(),
        "k": f.domain().k(),
        "order": "colex",
        "values": f.values().iter().map(value_to_json).collect::<Vec<_>>(),
    })
}

pub fn slice_function_from_json(v: &Value) -> Result<SliceFunction> {
    let o = object(v, "slice function")?;
    let domain = SliceDomain::new(usize_field(o, "n")?, usize_field(o, "k")?)?;
    domain.check_table_capacity()?;
    check_order(o, "colex")?;
    let values = values_field(o, domain.size())?
        .iter()
        .enumerate()
        .map(|(r, v)| value_from_json(v, || format!("values[rank {r}]")))
        .collect::<Result<Vec<_>>>()?;
    SliceFunction::from_values(domain, values)
}

pub fn polynomial_to_json(p: &MultilinearPolynomial) -> Value {
    let mut terms: Vec<(u64, &Rational)> = p.terms().collect();
    terms.sort_by_key(|(m, _)| (m.count_ones(), m.reverse_bits()));
    let terms: Vec<Value> = terms
        .into_iter()
        .map(|(mask, c)| {
            let vars: Vec<usize> = (0..64).filter(|i| (mask >> i) & 1 == 1).map(|i| i + 1).collect();
            json!({ "vars": vars, "coeff": format_rational(c) })
        })
        .collect();
    json!({ "n": p.n(), "terms": terms })
}

pub fn polynomial_from_json(v: &Value) -> Result<MultilinearPolynomial> {
    let o = object(v, "polynomial")?;
    let n = usize_field(o, "n")?;
    if n > 64 {
        return Err(Error::format("n", format!("{n} variables exceed 64")));
    }
    let terms = o
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::format("terms", "missing or not an array"))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for (t, term) in terms.iter().enumerate() {
        let loc = |field: &str| format!("terms[{t}].{field}");
        let term = term
            .as_object()
            .ok_or_else(|| Error::format(format!("terms[{t}]"), "expected an object"))?;
        let vars = term
            .get("vars")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::format(loc("vars"), "missing or not an array"))?;
        let mut mask = 0u64;
        let mut prev = 0u64;
        for v in vars {
            let i = v
                .as_u64()
                .filter(|&i| i >= 1 && i <= n as u64)
                .ok_or_else(|| Error::format(loc("vars"), format!("{v} is not a variable in 1..={n}")))?;
            if i <= prev {
                return Err(Error::format(loc("vars"), "indices must be strictly increasing"));
            }
            prev = i;
            mask |= 1 << (i - 1);
        }
        let coeff = value_from_json(
            term.get("coeff").ok_or_else(|| Error::format(loc("coeff"), "missing"))?,
            || loc("coeff"),
        )?;
        parsed.push((mask, coeff));
    }
    MultilinearPolynomial::from_terms(n, parsed)
}

pub fn cube_function_to_json(g: &CubeFunction) -> Value {
    json!({
        "m": g.m(),
        "order": "binary-lsb",
        "values": g.values().iter().map(value_to_json).collect::<Vec<_>>(),
    })
}

pub fn cube_function_from_json(v: &Value) -> Result<CubeFunction> {
    let o = object(v, "cube function")?;
    let m = usize_field(o, "m")?;
    if m > crate::transfer::cube::MAX_CUBE_VARS {
        return Err(Error::Capacity {
            what: "cube variables",
            actual: m as u64,
            limit: crate::transfer::cube::MAX_CUBE_VARS as u64,
        });
    }
    check_order(o, "binary-lsb")?;
    let values = values_field(o, 1u64 << m)?
        .iter()
        .enumerate()
        .map(|(x, v)| value_from_json(v, || format!("values[index {x}]")))
        .collect::<Result<Vec<_>>>()?;
    CubeFunction::from_values(m, values)
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::format(path.display().to_string(), e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn read_slice_function(path: &Path) -> Result<SliceFunction> {
    slice_function_from_json(&read_json(path)?)
}

pub fn read_cube_function(path: &Path) -> Result<CubeFunction> {
    cube_function_from_json(&read_json(path)?)
}

pub fn read_polynomial(path: &Path) -> Result<MultilinearPolynomial> {
    polynomial_from_json(&read_json(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn slice_round_trip() {
        let dom = SliceDomain::new(4, 2).unwrap();
        let f = SliceFunction::from_values(
            dom,
            vec![int(0), ratio(1, 3), int(-2), ratio(7, 5), int(1), int(0)],
        )
        .unwrap();
        let v = slice_function_to_json(&f);
        assert_eq!(v["values"][1], json!("1/3"));
        assert_eq!(v["values"][2], json!(-2));
        assert_eq!(slice_function_from_json(&v).unwrap(), f);
    }

    #[test]
    fn slice_errors_name_the_rank() {
        let v = json!({"n": 4, "k": 2, "order": "colex", "values": [0, 1, 0.5, 0, 1, 0]});
        let err = slice_function_from_json(&v).unwrap_err().to_string();
        assert!(err.contains("rank 2"), "{err}");
        let v = json!({"n": 4, "k": 2, "values": [0, 1]});
        assert!(slice_function_from_json(&v).unwrap_err().to_string().contains("values"));
        let v = json!({"n": 4, "k": 2, "order": "lex", "values": [0, 0, 0, 0, 0, 0]});
        assert!(slice_function_from_json(&v).is_err());
        let v = json!({"k": 2, "values": []});
        assert!(slice_function_from_json(&v).unwrap_err().to_string().contains("n"));
    }

    #[test]
    fn polynomial_round_trip() {
        let p = MultilinearPolynomial::from_terms(3, [(0b000, ratio(1, 2)), (0b101, ratio(-3, 4)), (0b010, int(2))])
            .unwrap();
        let v = polynomial_to_json(&p);
        assert_eq!(v["terms"][2]["vars"], json!([1, 3]));
        assert_eq!(polynomial_from_json(&v).unwrap(), p);
        let bad = json!({"n": 2, "terms": [{"vars": [3], "coeff": "1"}]});
        assert!(polynomial_from_json(&bad).unwrap_err().to_string().contains("terms[0].vars"));
    }

    #[test]
    fn cube_round_trip() {
        let g = CubeFunction::from_truth_table(2, 0b0110).unwrap();
        let v = cube_function_to_json(&g);
        assert_eq!(v["values"], json!([0, 1, 1, 0]));
        assert_eq!(cube_function_from_json(&v).unwrap(), g);
    }
}
