use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};

use rug::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact nonnegative count (queries, gates, rounds) at any scale.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(Integer);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(Integer::new())
    }

    pub fn new(value: Integer) -> Self {
        assert!(value >= 0, "BigCount must be nonnegative");
        BigCount(value)
    }

    pub fn as_integer(&self) -> &Integer {
        &self.0
    }

    pub fn into_integer(self) -> Integer {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn bits(&self) -> u32 {
        self.0.significant_bits()
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(Integer::from(v))
    }
}

impl From<usize> for BigCount {
    fn from(v: usize) -> Self {
        BigCount(Integer::from(v))
    }
}

impl From<Integer> for BigCount {
    fn from(v: Integer) -> Self {
        BigCount::new(v)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn add(self, rhs: &'a BigCount) -> BigCount {
        BigCount(Integer::from(&self.0 + &rhs.0))
    }
}

impl AddAssign<&BigCount> for BigCount {
    fn add_assign(&mut self, rhs: &BigCount) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<u64> for BigCount {
    fn add_assign(&mut self, rhs: u64) {
        self.0 += rhs;
    }
}

impl Mul for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl Sum for BigCount {
    fn sum<I: Iterator<Item = BigCount>>(iter: I) -> BigCount {
        iter.fold(BigCount::zero(), |acc, x| acc + x)
    }
}

// Counts travel as decimal strings so that no JSON consumer rounds them.
impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let v = Integer::from_str_radix(&s, 10).map_err(serde::de::Error::custom)?;
        if v < 0 {
            return Err(serde::de::Error::custom("negative count"));
        }
        Ok(BigCount(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_beyond_u64() {
        let a = BigCount::new(Integer::from(1) << 200);
        let b = a.clone() + a.clone();
        assert_eq!(b, BigCount::new(Integer::from(1) << 201));
        assert_eq!(b.to_u64(), None);
        let json = serde_json::to_string(&b).unwrap();
        let back: BigCount = serde_json::from_str(&json).unwrap();
        assert_eq!(back, b);
    }
}
