//! Oracles and helpers shared by the integration tests. Nothing here calls
//! into the library, so the tests compare against independent code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

/// Every twist exponent tuple of length `len` at level `level`.
pub fn all_twists(level: u64, len: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..level as i64).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every weight vector of length `d` with entries in `1..=max`.
pub fn all_weights(d: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=max).map(move |n| {
                    let mut t = t.clone();
                    t.push(n);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_prime_oracle(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Untwisted sum `Σ_{0<m_1<…<m_d<m} Π 1/m_i^{n_i}` by recursion on the last slot.
pub fn direct_sum_level_one(weights: &[u32], bound: u64) -> BigRational {
    fn go(weights: &[u32], below: u64) -> BigRational {
        let Some((&last, rest)) = weights.split_last() else {
            return BigRational::one();
        };
        let mut total = BigRational::zero();
        for k in 1..below {
            let inner = go(rest, k);
            if inner.is_zero() {
                continue;
            }
            let denom = num_traits::pow(BigInt::from(k), last as usize);
            total += inner / BigRational::from_integer(denom);
        }
        total
    }
    go(weights, bound)
}

/// `v_p(q)` for nonzero `q` by repeated division.
pub fn valuation_oracle(q: &BigRational, p: u64) -> i64 {
    assert!(!q.is_zero());
    let p = BigInt::from(p);
    let strip = |mut n: BigInt| {
        let mut v = 0i64;
        n = n.abs();
        loop {
            let (quot, rem) = n.div_rem(&p);
            if !rem.is_zero() {
                return v;
            }
            n = quot;
            v += 1;
        }
    };
    strip(q.numer().clone()) - strip(q.denom().clone())
}

/// Minimal JSON Schema check covering the keywords the repo's schemas use:
/// `type`, `required`, `properties`, `items`, `enum`, `oneOf`.
pub fn validate(schema: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
    if errors.len() > 20 {
        return;
    }
    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let matching = options
            .iter()
            .filter(|s| {
                let mut e = Vec::new();
                validate(s, value, path, &mut e);
                e.is_empty()
            })
            .count();
        if matching != 1 {
            errors.push(format!("{path}: matches {matching} oneOf branches"));
        }
        return;
    }
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "boolean" => value.is_boolean(),
            "number" => value.is_number(),
            _ => false,
        };
        if !ok {
            errors.push(format!("{path}: expected {ty}, got {value}"));
            return;
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            errors.push(format!("{path}: {value} not in {allowed:?}"));
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        for key in required.iter().filter_map(Value::as_str) {
            if value.get(key).is_none() {
                errors.push(format!("{path}: missing {key}"));
            }
        }
    }
    if let (Some(props), Some(obj)) = (
        schema.get("properties").and_then(Value::as_object),
        value.as_object(),
    ) {
        for (key, sub) in props {
            if let Some(v) = obj.get(key) {
                validate(sub, v, &format!("{path}.{key}"), errors);
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            validate(items, v, &format!("{path}[{i}]"), errors);
        }
    }
}

/// Shape check for one CSV data row.
pub fn csv_row_ok(row: &csv::StringRecord) -> bool {
    let int = |s: &str| s.parse::<u64>().is_ok();
    let int_list = |s: &str| s.split('|').all(int);
    let boolean = |s: &str| s == "true" || s == "false";
    let kinds = |s: &str| {
        s.is_empty()
            || s
                .split('|')
                .all(|k| matches!(k, "galois" | "padic_window" | "complex"))
    };
    row.len() == 9
        && int(&row[0])
        && int(&row[1])
        && int(&row[2])
        && int_list(&row[3])
        && int_list(&row[4])
        && boolean(&row[5])
        && kinds(&row[6])
        && boolean(&row[7])
        && boolean(&row[8])
}
