//! Step models for the walks this crate analyzes.

use crate::error::{Error, Result};
use crate::scalar::rational_to_f64;
use crate::Rational;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

/// A one-dimensional nearest-neighbour walk model.
///
/// * `Simple`: each step is +1 or -1 with probability 1/2, independently.
/// * `Persistent`: the first step is symmetric; afterwards each step repeats
///   the previous direction with probability `alpha` and reverses with
///   probability `1 - alpha`. `alpha` is kept as an exact rational so the
///   exact DP stays exact; `alpha = 1/2` is distributionally the simple walk.
#[derive(Clone, Debug, PartialEq)]
pub enum WalkModel {
    Simple,
    Persistent { alpha: Rational },
}

impl WalkModel {
    /// Persistent model with `0 < alpha < 1`.
    pub fn persistent(alpha: Rational) -> Result<Self> {
        if alpha <= Rational::zero() || alpha >= Rational::one() {
            return Err(Error::AlphaOutOfRange);
        }
        Ok(WalkModel::Persistent { alpha })
    }

    /// Persistent model from `p/q`, decimal, or integer text.
    pub fn persistent_from_str(text: &str) -> Result<Self> {
        Self::persistent(crate::scalar::parse_rational(text)?)
    }

    pub fn is_simple(&self) -> bool {
        matches!(self, WalkModel::Simple)
    }

    /// `alpha` as a float, for samplers and asymptotics; 1/2 for `Simple`.
    pub fn alpha_f64(&self) -> f64 {
        match self {
            WalkModel::Simple => 0.5,
            WalkModel::Persistent { alpha } => rational_to_f64(alpha),
        }
    }
}

impl std::fmt::Display for WalkModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WalkModel::Simple => write!(f, "simple"),
            WalkModel::Persistent { alpha } => write!(f, "persistent(alpha={alpha})"),
        }
    }
}

impl Serialize for WalkModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            WalkModel::Simple => {
                let mut s = serializer.serialize_struct("WalkModel", 1)?;
                s.serialize_field("kind", "simple")?;
                s.end()
            }
            WalkModel::Persistent { alpha } => {
                let mut s = serializer.serialize_struct("WalkModel", 2)?;
                s.serialize_field("kind", "persistent")?;
                s.serialize_field("alpha", &alpha.to_string())?;
                s.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn persistent_rejects_degenerate_alpha() {
        assert!(WalkModel::persistent(Rational::zero()).is_err());
        assert!(WalkModel::persistent(Rational::one()).is_err());
        assert!(WalkModel::persistent(Rational::new(3.into(), 2.into())).is_err());
        assert!(WalkModel::persistent(Rational::new((-1).into(), 2.into())).is_err());
        assert!(WalkModel::persistent(Rational::new(3.into(), 4.into())).is_ok());
    }

    #[test]
    fn parses_alpha_text() {
        let m = WalkModel::persistent_from_str("0.75").unwrap();
        assert_eq!(m, WalkModel::Persistent { alpha: Rational::new(3.into(), 4.into()) });
        assert!(WalkModel::persistent_from_str("1").is_err());
        assert!(WalkModel::persistent_from_str("x").is_err());
    }

    #[test]
    fn alpha_f64_conversion() {
        assert_eq!(WalkModel::Simple.alpha_f64(), 0.5);
        let m = WalkModel::persistent_from_str("3/4").unwrap();
        assert_eq!(m.alpha_f64(), 0.75);
    }

    #[test]
    fn display_names_the_model() {
        assert_eq!(WalkModel::Simple.to_string(), "simple");
        let m = WalkModel::persistent_from_str("3/4").unwrap();
        assert_eq!(m.to_string(), "persistent(alpha=3/4)");
    }
}
