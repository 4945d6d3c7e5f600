//! Exact rational-exponent unit algebra over the single base unit `[P]`.
//!
//! A [`Dimension`] is `[P^e]` with `e` an exact rational, so the Euclidean
//! index's `[P^3/2]` can never drift to `1.4999`. A [`Quantity`] pairs a
//! finite magnitude with a dimension; sums and comparisons of unlike
//! dimensions are rejected with [`Error::Heterogeneity`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Rational exponent, always kept in lowest terms with a positive denominator.
pub type Exponent = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimension(Exponent);

impl Dimension {
    pub const DIMENSIONLESS: Dimension = Dimension(Ratio::new_raw(0, 1));
    /// `[P]`: papers, citations per paper, h-type indices.
    pub const PAPERS: Dimension = Dimension(Ratio::new_raw(1, 1));
    /// `[P^3/2]`: the Euclidean index.
    pub const EUCLIDEAN: Dimension = Dimension(Ratio::new_raw(3, 2));
    /// `[P^2]`: total citations.
    pub const CITATIONS: Dimension = Dimension(Ratio::new_raw(2, 1));
    /// `[P^3]`: second-order terms (energy, exergy, entropy).
    pub const SECOND_ORDER: Dimension = Dimension(Ratio::new_raw(3, 1));

    pub fn from_exponent(exponent: Exponent) -> Self {
        // Ratio arithmetic already reduces; this guards hand-built raw ratios.
        Dimension(exponent.reduced())
    }

    /// `[P^n]` for an integer `n`.
    pub fn power_of_p(n: i64) -> Self {
        Dimension(Ratio::from_integer(n))
    }

    /// `[P^num/den]`; fails on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("dimension exponent with zero denominator"));
        }
        Ok(Dimension(Ratio::new(num, den)))
    }

    pub fn exponent(&self) -> Exponent {
        self.0
    }

    pub fn is_dimensionless(&self) -> bool {
        self.0.is_zero()
    }

    /// Raise to a rational power: the exponent is multiplied by `r`.
    pub fn pow(self, r: Exponent) -> Self {
        Dimension(self.0 * r)
    }

    pub fn inverse(self) -> Self {
        Dimension(-self.0)
    }
}

impl Default for Dimension {
    fn default() -> Self {
        Dimension::DIMENSIONLESS
    }
}

// Exponents add under multiplication of powers of P.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Dimension {
    type Output = Dimension;

    fn mul(self, rhs: Dimension) -> Dimension {
        Dimension(self.0 + rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Dimension {
    type Output = Dimension;

    fn div(self, rhs: Dimension) -> Dimension {
        Dimension(self.0 - rhs.0)
    }
}

/// Renders as `dimensionless`, `[P]`, `[P^2]`, `[P^3/2]` or `[P^-1/2]`.
impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.0;
        if e.is_zero() {
            f.write_str("dimensionless")
        } else if e.is_one() {
            f.write_str("[P]")
        } else if e.is_integer() {
            write!(f, "[P^{}]", e.numer())
        } else {
            write!(f, "[P^{}/{}]", e.numer(), e.denom())
        }
    }
}

/// Accepts the rendered forms as well as a bare exponent such as `3/2`.
impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "dimensionless" || s == "nil" {
            return Ok(Dimension::DIMENSIONLESS);
        }
        let exponent = match s.strip_prefix("[P").and_then(|r| r.strip_suffix(']')) {
            Some("") => "1",
            Some(rest) => rest
                .strip_prefix('^')
                .ok_or_else(|| Error::domain(format!("malformed dimension `{s}`")))?,
            None => s,
        };
        let (num, den) = match exponent.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (exponent, "1"),
        };
        let parse = |t: &str| {
            t.parse::<i64>()
                .map_err(|_| Error::domain(format!("malformed dimension `{s}`")))
        };
        Dimension::ratio(parse(num)?, parse(den)?)
    }
}

/// A finite magnitude paired with its dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity<T> {
    magnitude: T,
    dim: Dimension,
}

impl<T: Scalar> Quantity<T> {
    pub fn new(magnitude: T, dim: Dimension) -> Result<Self> {
        if !magnitude.is_finite() {
            return Err(Error::domain(format!(
                "non-finite magnitude {magnitude} for {dim}"
            )));
        }
        Ok(Quantity { magnitude, dim })
    }

    pub fn dimensionless(magnitude: T) -> Result<Self> {
        Self::new(magnitude, Dimension::DIMENSIONLESS)
    }

    pub fn magnitude(&self) -> T {
        self.magnitude
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    fn require_same(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Heterogeneity {
                op,
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.require_same(other, "addition")?;
        Self::new(self.magnitude + other.magnitude, self.dim)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.require_same(other, "subtraction")?;
        Self::new(self.magnitude - other.magnitude, self.dim)
    }

    /// Orders two commensurable quantities by magnitude.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        self.require_same(other, "comparison")?;
        // Both magnitudes are finite, so partial_cmp is total here.
        Ok(self
            .magnitude
            .partial_cmp(&other.magnitude)
            .unwrap_or(Ordering::Equal))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.magnitude * other.magnitude, self.dim * other.dim)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.magnitude.is_zero() {
            return Err(Error::domain(format!(
                "division by a zero-magnitude quantity ({})",
                other.dim
            )));
        }
        Self::new(self.magnitude / other.magnitude, self.dim / other.dim)
    }

    pub fn pow(&self, r: Exponent) -> Result<Self> {
        if self.magnitude < T::zero() && !r.is_integer() {
            return Err(Error::domain(format!(
                "fractional power {r} of negative magnitude {}",
                self.magnitude
            )));
        }
        if self.magnitude.is_zero() && r < Exponent::zero() {
            return Err(Error::domain("negative power of a zero magnitude"));
        }
        let m = if r.is_integer() {
            // powi keeps small integer powers exact.
            match i32::try_from(*r.numer()) {
                Ok(n) => self.magnitude.powi(n),
                Err(_) => self.magnitude.powf(T::from_exponent(r)),
            }
        } else if *r.denom() == 3 && *r.numer() == 1 {
            self.magnitude.cbrt()
        } else if *r.denom() == 2 && *r.numer() == 1 {
            self.magnitude.sqrt()
        } else {
            self.magnitude.powf(T::from_exponent(r))
        };
        Self::new(m, self.dim.pow(r))
    }
}

impl<T: Scalar> fmt::Display for Quantity<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{:.*} {}", p, self.magnitude, self.dim),
            None => write!(f, "{} {}", self.magnitude, self.dim),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(n: i64, den: i64) -> Dimension {
        Dimension::ratio(n, den).unwrap()
    }

    fn q(m: f64, dim: Dimension) -> Quantity<f64> {
        Quantity::new(m, dim).unwrap()
    }

    #[test]
    fn mul_adds_exponents() {
        assert_eq!(Dimension::PAPERS * Dimension::PAPERS, Dimension::CITATIONS);
        assert_eq!(
            Dimension::DIMENSIONLESS * Dimension::EUCLIDEAN,
            Dimension::EUCLIDEAN
        );
        assert_eq!(d(1, 2) * d(1, 2), Dimension::PAPERS);
    }

    #[test]
    fn pow_multiplies_exponents() {
        let third = Exponent::new(1, 3);
        let half = Exponent::new(1, 2);
        assert_eq!(Dimension::SECOND_ORDER.pow(third), Dimension::PAPERS);
        assert_eq!(Dimension::SECOND_ORDER.pow(half), Dimension::EUCLIDEAN);
        assert_eq!(
            Dimension::CITATIONS.pow(Exponent::zero()),
            Dimension::DIMENSIONLESS
        );
    }

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let x = d(6, -4);
        assert_eq!(*x.exponent().numer(), -3);
        assert_eq!(*x.exponent().denom(), 2);
        assert_eq!(d(0, 7), Dimension::DIMENSIONLESS);
        assert!(Dimension::ratio(1, 0).is_err());
    }

    #[test]
    fn rendering_is_exact() {
        assert_eq!(Dimension::PAPERS.to_string(), "[P]");
        assert_eq!(Dimension::EUCLIDEAN.to_string(), "[P^3/2]");
        assert_eq!(Dimension::CITATIONS.to_string(), "[P^2]");
        assert_eq!(Dimension::DIMENSIONLESS.to_string(), "dimensionless");
        assert_eq!(d(-1, 2).to_string(), "[P^-1/2]");
        assert_eq!(d(6, 4).to_string(), "[P^3/2]");
    }

    #[test]
    fn parses_rendered_forms() {
        for dim in [
            Dimension::DIMENSIONLESS,
            Dimension::PAPERS,
            Dimension::EUCLIDEAN,
            Dimension::CITATIONS,
            d(-5, 3),
        ] {
            assert_eq!(dim.to_string().parse::<Dimension>().unwrap(), dim);
        }
        assert_eq!("3/2".parse::<Dimension>().unwrap(), Dimension::EUCLIDEAN);
        assert_eq!(
            "[P^0]".parse::<Dimension>().unwrap(),
            Dimension::DIMENSIONLESS
        );
        assert!("[Q]".parse::<Dimension>().is_err());
        assert!("[P^x]".parse::<Dimension>().is_err());
    }

    #[test]
    fn add_like_units() {
        let s = q(3.0, Dimension::PAPERS).checked_add(&q(4.0, Dimension::PAPERS));
        assert_eq!(s.unwrap(), q(7.0, Dimension::PAPERS));
        let s = q(0.0, Dimension::SECOND_ORDER).checked_add(&q(21.0, Dimension::SECOND_ORDER));
        assert_eq!(s.unwrap(), q(21.0, Dimension::SECOND_ORDER));
    }

    #[test]
    fn add_unlike_units_reports_both_dimensions() {
        let err = q(891.42, Dimension::EUCLIDEAN)
            .checked_add(&q(34.0, Dimension::PAPERS))
            .unwrap_err();
        assert_eq!(
            err,
            Error::Heterogeneity {
                op: "addition",
                left: Dimension::EUCLIDEAN,
                right: Dimension::PAPERS
            }
        );
        let msg = err.to_string();
        assert!(msg.contains("[P^3/2]") && msg.contains("[P]"), "{msg}");
    }

    #[test]
    fn compare() {
        let h_li = q(34.0, Dimension::PAPERS);
        let h_krebs = q(41.0, Dimension::PAPERS);
        assert_eq!(h_li.compare(&h_krebs).unwrap(), Ordering::Less);
        assert_eq!(
            q(5.0, Dimension::PAPERS)
                .compare(&q(5.0, Dimension::PAPERS))
                .unwrap(),
            Ordering::Equal
        );
        assert!(matches!(
            q(1462.71, Dimension::EUCLIDEAN).compare(&q(7013.0, Dimension::CITATIONS)),
            Err(Error::Heterogeneity { .. })
        ));
    }

    #[test]
    fn division_by_zero_is_a_domain_error() {
        let c = q(7.0, Dimension::CITATIONS);
        let zero = q(0.0, Dimension::PAPERS);
        assert!(matches!(c.div(&zero), Err(Error::Domain(_))));
        let i = c.div(&q(3.0, Dimension::PAPERS)).unwrap();
        assert_eq!(i.dim(), Dimension::PAPERS);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Quantity::new(f64::NAN, Dimension::PAPERS).is_err());
        assert!(Quantity::new(f64::INFINITY, Dimension::PAPERS).is_err());
        let big = q(f64::MAX, Dimension::PAPERS);
        assert!(big.checked_add(&big).is_err());
        assert!(big.mul(&big).is_err());
    }

    #[test]
    fn pow_of_quantity() {
        let e = q(21.0, Dimension::SECOND_ORDER);
        let ie = e.pow(Exponent::new(1, 2)).unwrap();
        assert_eq!(ie.dim(), Dimension::EUCLIDEAN);
        assert!((ie.magnitude() - 21f64.sqrt()).abs() < 1e-15);
        let neg = q(-8.0, Dimension::PAPERS);
        assert!(neg.pow(Exponent::new(1, 3)).is_err());
        assert_eq!(
            neg.pow(Exponent::from_integer(2)).unwrap().magnitude(),
            64.0
        );
        let single: Quantity<f32> = Quantity::new(27.0f32, Dimension::SECOND_ORDER).unwrap();
        assert_eq!(single.pow(Exponent::new(1, 3)).unwrap().magnitude(), 3.0f32);
    }

    fn dim_strategy() -> impl Strategy<Value = Dimension> {
        (-40i64..40, 1i64..12).prop_map(|(n, den)| Dimension::ratio(n, den).unwrap())
    }

    fn nonzero_exponent() -> impl Strategy<Value = Exponent> {
        (-12i64..12, 1i64..12)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, den)| Exponent::new(n, den))
    }

    proptest! {
        #[test]
        fn mul_is_commutative_associative_with_identity(
            a in dim_strategy(), b in dim_strategy(), c in dim_strategy()
        ) {
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * Dimension::DIMENSIONLESS, a);
        }

        #[test]
        fn pow_then_reciprocal_power_is_identity(a in dim_strategy(), r in nonzero_exponent()) {
            prop_assert_eq!(a.pow(r).pow(r.recip()), a);
        }

        #[test]
        fn heterogeneous_add_never_succeeds(
            a in dim_strategy(), b in dim_strategy(), x in -1e6f64..1e6, y in -1e6f64..1e6
        ) {
            prop_assume!(a != b);
            let qa = q(x, a);
            let qb = q(y, b);
            prop_assert!(qa.checked_add(&qb).is_err());
            prop_assert!(qa.checked_sub(&qb).is_err());
            prop_assert!(qa.compare(&qb).is_err());
        }
    }
}
