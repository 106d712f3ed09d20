//! Serialization helpers: exact rationals and big integers travel as decimal
//! strings so verdict-bearing fields never pass through floating point.

/// `BigRational` as `"num/den"`.
pub mod ratio_string {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn format(r: &BigRational) -> String {
        format!("{}/{}", r.numer(), r.denom())
    }

    pub fn parse(s: &str) -> Result<BigRational, String> {
        let (a, b) = s.split_once('/').unwrap_or((s, "1"));
        let a: BigInt = a.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let b: BigInt = b.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if b == BigInt::from(0) {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(BigRational::new(a, b))
    }

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(D::Error::custom)
    }
}

/// `Option<BigRational>` as `"num/den"` or null.
pub mod opt_ratio_string {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&super::ratio_string::format(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| super::ratio_string::parse(&s).map_err(D::Error::custom))
            .transpose()
    }
}

/// `BigUint` / `BigInt` as a plain decimal string.
pub mod int_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("not an integer: {s:?}")))
    }
}
