//! Exact integer and rational vector helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer vector with arbitrary-precision coordinates.
pub type IntVec = Vec<BigInt>;
/// Rational vector with arbitrary-precision coordinates.
pub type RatVec = Vec<BigRational>;

pub fn int_vec(coords: &[i64]) -> IntVec {
    coords.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn rat_vec(coords: &[i64]) -> RatVec {
    coords
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect()
}

pub fn to_rat(v: &[BigInt]) -> RatVec {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[BigRational], b: &[BigRational]) -> BigRational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Pairing of an integer functional with a rational vector.
pub fn dot_int_rat(a: &[BigInt], b: &[BigRational]) -> BigRational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| {
        acc + BigRational::from_integer(x.clone()) * y
    })
}

pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Divides out the gcd of the coordinates. The zero vector is returned unchanged.
pub fn primitive_int(v: &[BigInt]) -> IntVec {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Positive rescaling of a rational vector to a primitive integer vector.
pub fn primitive_rat(v: &[BigRational]) -> IntVec {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: IntVec = v
        .iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    primitive_int(&scaled)
}

/// Primitive form with the first nonzero coordinate made positive.
pub fn primitive_unsigned(v: &[BigInt]) -> IntVec {
    let p = primitive_int(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => p.iter().map(|x| -x).collect(),
        _ => p,
    }
}

pub fn neg_vec(v: &[BigInt]) -> IntVec {
    v.iter().map(|x| -x).collect()
}

pub fn unit_vec(d: usize, i: usize) -> IntVec {
    (0..d)
        .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
        .collect()
}

/// Renders an exact rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_int_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn fmt_rat_vec(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("({})", parts.join(","))
}

/// Parses `p`, `p/q` or a decimal-free signed integer into an exact rational.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let r: BigRational = s.parse().ok()?;
    Some(r)
}

/// Parses a comma-separated list of rationals such as `1,-1/2,3`.
pub fn parse_rat_list(s: &str) -> Option<RatVec> {
    s.split(',').map(parse_rat).collect()
}

/// Serde adapters that keep numbers exact: integers become JSON numbers when
/// they fit in `i64` and strings otherwise; rationals become `p/q` strings,
/// or bare integers when the denominator is one.
pub mod serde_exact {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Value;

    fn int_to_value(x: &BigInt) -> Value {
        match i64::try_from(x) {
            Ok(small) => Value::from(small),
            Err(_) => Value::String(x.to_string()),
        }
    }

    fn int_from_value(v: &Value) -> Result<BigInt, String> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(BigInt::from)
                .ok_or_else(|| format!("not an integer: {n}")),
            Value::String(s) => s.parse().map_err(|_| format!("not an integer: {s}")),
            other => Err(format!("expected integer, got {other}")),
        }
    }

    fn rat_to_value(x: &BigRational) -> Value {
        if x.denom().is_one() {
            int_to_value(x.numer())
        } else {
            Value::String(fmt_rat(x))
        }
    }

    fn rat_from_value(v: &Value) -> Result<BigRational, String> {
        match v {
            Value::String(s) => parse_rat(s).ok_or_else(|| format!("not a rational: {s}")),
            other => int_from_value(other).map(BigRational::from_integer),
        }
    }

    pub mod int_vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(int_to_value).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntVec, D::Error> {
            let raw = Vec::<Value>::deserialize(d)?;
            raw.iter()
                .map(|v| int_from_value(v).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod int_vecs {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[IntVec], s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(|row| row.iter().map(int_to_value).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<IntVec>, D::Error> {
            let raw = Vec::<Vec<Value>>::deserialize(d)?;
            raw.iter()
                .map(|row| {
                    row.iter()
                        .map(|v| int_from_value(v).map_err(D::Error::custom))
                        .collect()
                })
                .collect()
        }
    }

    pub mod int {
        use super::*;

        pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            int_to_value(v).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
            int_from_value(&Value::deserialize(d)?).map_err(D::Error::custom)
        }
    }

    pub mod rat {
        use super::*;

        pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
            rat_to_value(v).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
            rat_from_value(&Value::deserialize(d)?).map_err(D::Error::custom)
        }
    }

    pub mod rat_vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(rat_to_value).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatVec, D::Error> {
            let raw = Vec::<Value>::deserialize(d)?;
            raw.iter()
                .map(|v| rat_from_value(v).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod rat_vecs {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[RatVec], s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(|row| row.iter().map(rat_to_value).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<RatVec>, D::Error> {
            let raw = Vec::<Vec<Value>>::deserialize(d)?;
            raw.iter()
                .map(|row| {
                    row.iter()
                        .map(|v| rat_from_value(v).map_err(D::Error::custom))
                        .collect()
                })
                .collect()
        }
    }

    pub mod opt_rat {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            v.as_ref().map(rat_to_value).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
            Option::<Value>::deserialize(d)?
                .filter(|v| !v.is_null())
                .map(|v| rat_from_value(&v).map_err(D::Error::custom))
                .transpose()
        }
    }

    pub mod opt_rat_vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<RatVec>, s: S) -> Result<S::Ok, S::Error> {
            v.as_ref()
                .map(|row| row.iter().map(rat_to_value).collect::<Vec<_>>())
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<RatVec>, D::Error> {
            let raw = Option::<Vec<Value>>::deserialize(d)?;
            raw.map(|row| {
                row.iter()
                    .map(|v| rat_from_value(v).map_err(D::Error::custom))
                    .collect()
            })
            .transpose()
        }
    }
}
