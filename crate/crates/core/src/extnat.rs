use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

/// A positive integer or infinity.
///
/// Variant order gives the total order: every `Finite` value is below
/// `Infinite`, and `Infinite` absorbs both addition and multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtNat {
    Finite(u64),
    Infinite,
}

impl ExtNat {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn finite(&self) -> Option<u64> {
        match *self {
            ExtNat::Finite(k) => Some(k),
            ExtNat::Infinite => None,
        }
    }
}

impl From<u64> for ExtNat {
    fn from(k: u64) -> Self {
        ExtNat::Finite(k)
    }
}

impl Mul for ExtNat {
    type Output = ExtNat;

    fn mul(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a * b),
            _ => ExtNat::Infinite,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinite,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(k) => write!(f, "{k}"),
            ExtNat::Infinite => f.write_str("infinite"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::ExtNat::{self, *};
    use proptest::prelude::*;

    fn ext() -> impl Strategy<Value = ExtNat> {
        prop_oneof![(1u64..1000).prop_map(Finite), Just(Infinite)]
    }

    #[test]
    fn order_and_arithmetic() {
        assert!(Finite(3) < Finite(4));
        assert!(Finite(u64::MAX) < Infinite);
        assert_eq!(Infinite, Infinite);
        assert!(Infinite <= Infinite);
        assert_eq!(Finite(3) * Finite(4), Finite(12));
        assert_eq!(Finite(3) * Infinite, Infinite);
        assert_eq!(Infinite * Finite(1), Infinite);
        assert_eq!(Finite(2) + Infinite, Infinite);
        assert_eq!(Infinite.to_string(), "infinite");
    }

    proptest! {
        #[test]
        fn multiplication_is_monotone(a in ext(), b in ext(), c in ext()) {
            if a <= b {
                prop_assert!(a * c <= b * c);
            }
            prop_assert_eq!(a * b, b * a);
        }
    }
}
