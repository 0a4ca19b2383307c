//! Exact rationals serialized as `"p/q"` strings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Longest accepted textual rational.
pub const MAX_LEN: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(pub BigRational);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("bad rational {text:?}: {reason}")]
pub struct RatError {
    pub text: String,
    pub reason: &'static str,
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Rat {
    type Err = RatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason| RatError { text: s.chars().take(64).collect(), reason };
        if s.len() > MAX_LEN {
            return Err(bad("too long"));
        }
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (parse_int(p.trim()).ok_or_else(|| bad("bad numerator"))?, parse_int(q.trim()).ok_or_else(|| bad("bad denominator"))?),
            None => (parse_int(t).ok_or_else(|| bad("not an integer or p/q"))?, BigInt::one()),
        };
        if q.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(Rat(BigRational::new(p, q)))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl From<BigRational> for Rat {
    fn from(q: BigRational) -> Self {
        Rat(q)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }
}

impl Rat {
    pub fn new(p: i64, q: i64) -> Self {
        Rat(BigRational::new(p.into(), q.into()))
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // integers are accepted bare as a convenience
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Rat::from(n)),
        }
    }
}

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!("3/6".parse::<Rat>().unwrap(), Rat::new(1, 2));
        assert_eq!(Rat::new(-4, 6).to_string(), "-2/3");
        assert_eq!(Rat::new(8, 4).to_string(), "2");
        assert_eq!("-7".parse::<Rat>().unwrap(), Rat::from(-7));
        for bad in ["", "1/0", "a/b", "1/2/3", "1.5", "--1", "/3", "3/"] {
            assert!(bad.parse::<Rat>().is_err(), "{bad}");
        }
    }

    #[test]
    fn json_forms() {
        let v: Vec<Rat> = serde_json::from_str(r#"["1/3", 4, "-2/4"]"#).unwrap();
        assert_eq!(v, vec![Rat::new(1, 3), Rat::from(4), Rat::new(-1, 2)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/3","4","-1/2"]"#);
    }
}
