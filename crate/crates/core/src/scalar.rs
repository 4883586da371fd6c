//! Coefficient scalars.
//!
//! Every container in this crate (graph sums, weight tables, polynomials, the
//! elimination matrix) is generic over a [`Scalar`]. The identities checked by
//! the engine are exact, so the default instantiation is [`BigRational`]; the
//! machine-sized rationals are useful for quick experiments, and `f64` is
//! provided for numerical evaluation only (its zero test is bitwise, so
//! cancellations are not reliable).

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialEq + Debug + Display + Send + Sync + 'static
{
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Parses `p`, `-p`, `p/q` or `-p/q`.
    fn parse_scalar(text: &str) -> Option<Self>;

    /// Whether `==` is exact equality of the represented values.
    fn is_exact() -> bool;

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    /// Magnitude used for pivot selection.
    fn pivot_size(&self) -> f64;
}

fn split_ratio(text: &str) -> Option<(&str, Option<&str>)> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    match text.split_once('/') {
        Some((p, q)) => Some((p, Some(q))),
        None => Some((text, None)),
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn parse_scalar(text: &str) -> Option<Self> {
        let (p, q) = split_ratio(text)?;
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = match q {
            Some(q) => q.parse().ok()?,
            None => BigInt::from(1),
        };
        if q == BigInt::from(0) {
            return None;
        }
        Some(BigRational::new(p, q))
    }

    fn is_exact() -> bool {
        true
    }

    fn pivot_size(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

macro_rules! impl_machine_ratio {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn from_ratio(num: i64, den: i64) -> Self {
                Ratio::new(num as $int, den as $int)
            }

            fn parse_scalar(text: &str) -> Option<Self> {
                let (p, q) = split_ratio(text)?;
                let p: $int = p.parse().ok()?;
                let q: $int = match q {
                    Some(q) => q.parse().ok()?,
                    None => 1,
                };
                if q == 0 {
                    return None;
                }
                Some(Ratio::new(p, q))
            }

            fn is_exact() -> bool {
                true
            }

            fn pivot_size(&self) -> f64 {
                (*self.numer() as f64 / *self.denom() as f64).abs()
            }
        }
    };
}

impl_machine_ratio!(i64);
impl_machine_ratio!(i128);

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn parse_scalar(text: &str) -> Option<Self> {
        let (p, q) = split_ratio(text)?;
        let p: f64 = p.parse().ok()?;
        match q {
            Some(q) => {
                let q: f64 = q.parse().ok()?;
                (q != 0.0).then(|| p / q)
            }
            None => Some(p),
        }
    }

    fn is_exact() -> bool {
        false
    }

    fn pivot_size(&self) -> f64 {
        self.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_fractions() {
        let r = BigRational::parse_scalar("-2/3").unwrap();
        assert_eq!(r, BigRational::from_ratio(-2, 3));
        assert_eq!(r.to_string(), "-2/3");
        assert_eq!(BigRational::parse_scalar("4/2").unwrap().to_string(), "2");
        assert!(BigRational::parse_scalar("1/0").is_none());
        assert!(BigRational::parse_scalar("x").is_none());
        assert_eq!(Ratio::<i64>::parse_scalar("1/48"), Some(Ratio::new(1, 48)));
        assert_eq!(f64::parse_scalar("1/4"), Some(0.25));
    }
}
