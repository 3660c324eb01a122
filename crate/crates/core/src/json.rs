//! JSON encodings of exact values.
//!
//! Integers are emitted as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise. Rationals are strings `"p/q"` (or `"p"` when
//! integral). Readers accept every form a writer can produce.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{Mat3, Quad, V2, V3};

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Parse(format!("expected an integer, found {n}")))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("expected an integer, found \"{s}\""))),
        other => Err(Error::Parse(format!("expected an integer, found {other}"))),
    }
}

pub fn rat(x: &BigRational) -> Value {
    if x.denom().is_one() {
        json!(x.numer().to_string())
    } else {
        json!(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn parse_rat(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            let bad = || Error::Parse(format!("expected a rational \"p/q\", found \"{s}\""));
            match s.split_once('/') {
                Some((p, q)) => {
                    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                    if q == BigInt::from(0) {
                        return Err(Error::Parse(format!("zero denominator in \"{s}\"")));
                    }
                    Ok(BigRational::new(p, q))
                }
                None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
            }
        }
        _ => Ok(BigRational::from_integer(parse_int(v)?)),
    }
}

pub fn v3(x: &V3) -> Value {
    Value::Array(x.0.iter().map(int).collect())
}

pub fn parse_v3(v: &Value) -> Result<V3> {
    let a = v
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| Error::Parse(format!("expected a 3-element integer array, found {v}")))?;
    Ok(V3([parse_int(&a[0])?, parse_int(&a[1])?, parse_int(&a[2])?]))
}

pub fn v2(x: &V2) -> Value {
    Value::Array(x.0.iter().map(int).collect())
}

pub fn parse_v2(v: &Value) -> Result<V2> {
    let a = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse(format!("expected a 2-element integer array, found {v}")))?;
    Ok(V2([parse_int(&a[0])?, parse_int(&a[1])?]))
}

pub fn rat3(x: &[BigRational; 3]) -> Value {
    Value::Array(x.iter().map(rat).collect())
}

pub fn parse_rat3(v: &Value) -> Result<[BigRational; 3]> {
    let a = v
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| Error::Parse(format!("expected a 3-element rational array, found {v}")))?;
    Ok([parse_rat(&a[0])?, parse_rat(&a[1])?, parse_rat(&a[2])?])
}

pub fn quad(x: &Quad) -> Value {
    json!({"rat": rat(x.rat()), "irr": rat(x.irr()), "d": x.d()})
}

pub fn parse_quad(v: &Value) -> Result<Quad> {
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("quadratic number lacks \"{k}\"")));
    let d = field("d")?
        .as_u64()
        .ok_or_else(|| Error::Parse("discriminant must be a positive integer".into()))?;
    crate::exactnum::check_discriminant(d)?;
    Ok(Quad::new(parse_rat(field("rat")?)?, parse_rat(field("irr")?)?, d))
}

pub fn mat3(m: &Mat3) -> Value {
    Value::Array((0..3).map(|r| v3(&m.row(r))).collect())
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;

    #[test]
    fn big_integers_round_trip_as_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let v = int(&big);
        assert!(v.is_string());
        assert_eq!(parse_int(&v).unwrap(), big);
        assert_eq!(int(&BigInt::from(-7)), json!(-7));
    }

    #[test]
    fn rationals_and_quads() {
        assert_eq!(rat(&ratio(-3, 6)), json!("-1/2"));
        assert_eq!(parse_rat(&json!("4/-8")).unwrap(), ratio(-1, 2));
        assert_eq!(parse_rat(&json!(5)).unwrap(), ratio(5, 1));
        assert!(parse_rat(&json!("1/0")).is_err());
        let q = Quad::new(ratio(1, 3), ratio(-2, 5), 2);
        assert_eq!(quad(&q), json!({"rat":"1/3","irr":"-2/5","d":2}));
        assert_eq!(parse_quad(&quad(&q)).unwrap(), q);
        assert!(parse_quad(&json!({"rat":"1","irr":"1","d":4})).is_err());
    }
}
