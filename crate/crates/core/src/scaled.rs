//! Sign-carrying log-scaled reals.
//!
//! A [`ScaledValue`] stores `value = mantissa * exp(log_scale)` with the
//! mantissa normalized to `|mantissa| in [1/e, e)` (or exactly zero).  This
//! keeps quantities like `K_nu(x) ~ exp(-x)` for `x ~ 1e4` exact to full
//! relative precision where a plain double would flush to zero, and lets
//! boundary-condition coefficient ratios cancel without intermediate
//! overflow.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::MathError;
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledValue<T> {
    mantissa: T,
    log_scale: T,
}

impl<T: Real> ScaledValue<T> {
    pub fn zero() -> Self {
        ScaledValue {
            mantissa: T::zero(),
            log_scale: T::zero(),
        }
    }

    pub fn one() -> Self {
        ScaledValue {
            mantissa: T::one(),
            log_scale: T::zero(),
        }
    }

    /// Builds `mantissa * exp(log_scale)` and normalizes.
    pub fn new(mantissa: T, log_scale: T) -> Self {
        debug_assert!(mantissa.is_finite(), "scaled mantissa must be finite");
        if mantissa == T::zero() {
            return Self::zero();
        }
        let t = mantissa.abs().ln();
        if t >= -T::one() && t < T::one() {
            ScaledValue {
                mantissa,
                log_scale,
            }
        } else {
            ScaledValue {
                mantissa: mantissa / t.exp(),
                log_scale: log_scale + t,
            }
        }
    }

    pub fn from_value(v: T) -> Self {
        Self::new(v, T::zero())
    }

    /// `sign * exp(ln_abs)` without ever forming the linear-scale number.
    pub fn from_ln(sign: T, ln_abs: T) -> Self {
        if sign == T::zero() {
            return Self::zero();
        }
        ScaledValue {
            mantissa: sign.signum(),
            log_scale: ln_abs,
        }
    }

    pub fn mantissa(&self) -> T {
        self.mantissa
    }

    pub fn log_scale(&self) -> T {
        self.log_scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == T::zero()
    }

    /// `ln |value|`; negative infinity for zero.
    pub fn ln_abs(&self) -> T {
        if self.is_zero() {
            T::neg_infinity()
        } else {
            self.log_scale + self.mantissa.abs().ln()
        }
    }

    pub fn signum(&self) -> T {
        if self.is_zero() {
            T::zero()
        } else {
            self.mantissa.signum()
        }
    }

    pub fn abs(self) -> Self {
        ScaledValue {
            mantissa: self.mantissa.abs(),
            log_scale: self.log_scale,
        }
    }

    /// Multiplies by `exp(dl)`.
    pub fn scale_by_ln(self, dl: T) -> Self {
        if self.is_zero() {
            self
        } else {
            ScaledValue {
                mantissa: self.mantissa,
                log_scale: self.log_scale + dl,
            }
        }
    }

    /// Plain-real value.  Errors on overflow rather than returning an
    /// infinity; values below the representable range flush to zero.
    pub fn value(&self) -> Result<T, MathError> {
        if self.is_zero() {
            return Ok(T::zero());
        }
        let total = self.ln_abs();
        if total > T::max_value().ln() {
            return Err(MathError::Overflow(total.as_f64()));
        }
        // multiplying by exp(log_scale) directly lets the forward and
        // backward transforms share one exp evaluation, so normalize ->
        // denormalize round-trips to a few ulps even at huge exponents
        let direct = self.mantissa * self.log_scale.exp();
        if direct.is_finite() {
            Ok(direct)
        } else {
            Ok(self.signum() * total.exp())
        }
    }

    /// `self / other` as a plain real; `other` must be nonzero.
    pub fn ratio(&self, other: &Self) -> Result<T, MathError> {
        if other.is_zero() {
            return Err(MathError::Domain("ratio with zero denominator".into()));
        }
        (*self / *other).value()
    }

    /// Relative difference `|self - other| / |other|`, for tests and audits.
    pub fn rel_diff(&self, other: &Self) -> T {
        if other.is_zero() {
            return if self.is_zero() {
                T::zero()
            } else {
                T::infinity()
            };
        }
        (*self - *other)
            .ratio(other)
            .map(|r| r.abs())
            .unwrap_or_else(|_| T::infinity())
    }
}

impl<T: Real> Add for ScaledValue<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (hi, lo) = if self.ln_abs() >= rhs.ln_abs() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        // |lo.log_scale - hi.log_scale| <= |ln|lo| - ln|hi|| + 2, so the shift
        // factor never overflows; it underflows to zero when lo is negligible.
        let shift = (lo.log_scale - hi.log_scale).exp();
        Self::new(hi.mantissa + lo.mantissa * shift, hi.log_scale)
    }
}

impl<T: Real> Sub for ScaledValue<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Neg for ScaledValue<T> {
    type Output = Self;

    fn neg(self) -> Self {
        ScaledValue {
            mantissa: -self.mantissa,
            log_scale: self.log_scale,
        }
    }
}

impl<T: Real> Mul for ScaledValue<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::new(self.mantissa * rhs.mantissa, self.log_scale + rhs.log_scale)
    }
}

impl<T: Real> Mul<T> for ScaledValue<T> {
    type Output = Self;

    fn mul(self, rhs: T) -> Self {
        if self.is_zero() || rhs == T::zero() {
            return Self::zero();
        }
        Self::new(self.mantissa * rhs, self.log_scale)
    }
}

impl<T: Real> Div for ScaledValue<T> {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division of scaled values by zero");
        if self.is_zero() {
            return Self::zero();
        }
        Self::new(self.mantissa / rhs.mantissa, self.log_scale - rhs.log_scale)
    }
}

impl<T: Real> fmt::Display for ScaledValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Ok(v) => write!(f, "{}", v),
            Err(_) => write!(f, "{}*exp({})", self.mantissa, self.log_scale),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn normalization_bounds() {
        for &v in &[1e-300f64, 3.5e-2, 0.9, 1.0, 2.5, 1e12, 7.2e307] {
            let s = ScaledValue::from_value(v);
            assert!(s.mantissa().abs() >= 1.0 / std::f64::consts::E);
            assert!(s.mantissa().abs() < std::f64::consts::E);
            assert_relative_eq!(s.value().unwrap(), v, max_relative = 1e-15);
        }
    }

    #[test]
    fn zero_behaves() {
        let z = ScaledValue::<f64>::zero();
        assert!(z.is_zero());
        assert_eq!(z.value().unwrap(), 0.0);
        let one = ScaledValue::one();
        assert_eq!((z + one).value().unwrap(), 1.0);
        assert_eq!((one * z).value().unwrap(), 0.0);
    }

    #[test]
    fn overflow_is_an_error_not_infinity() {
        let huge = ScaledValue::from_ln(1.0f64, 1.0e6);
        assert!(matches!(huge.value(), Err(MathError::Overflow(_))));
        // but ratios of two huge values are fine
        let huge2 = ScaledValue::from_ln(1.0f64, 1.0e6 - 2.0);
        assert_relative_eq!(
            huge.ratio(&huge2).unwrap(),
            2.0f64.exp(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn underflow_flushes_to_zero() {
        let tiny = ScaledValue::from_ln(-1.0f64, -1.0e6);
        assert_eq!(tiny.value().unwrap(), 0.0);
    }

    #[test]
    fn addition_aligns_scales() {
        let a = ScaledValue::from_ln(1.0f64, 50.0);
        let b = ScaledValue::from_ln(1.0f64, 49.0);
        let expected = 50.0f64.exp() + 49.0f64.exp();
        assert_relative_eq!((a + b).value().unwrap(), expected, max_relative = 1e-14);
        // adding something 800 e-folds smaller is a no-op
        let c = ScaledValue::from_ln(1.0f64, -750.0);
        assert_eq!((a + c).value().unwrap(), a.value().unwrap());
    }

    proptest! {
        // normalize -> denormalize is the identity whenever representable
        #[test]
        fn round_trip(v in prop::num::f64::NORMAL.prop_filter("nonzero", |x| *x != 0.0)) {
            let s = ScaledValue::from_value(v);
            let back = s.value().unwrap();
            prop_assert!(((back - v) / v).abs() <= 1e-15);
        }

        #[test]
        fn field_ops_match_plain_arithmetic(
            a in -1e6f64..1e6, b in -1e6f64..1e6,
        ) {
            prop_assume!(a != 0.0 && b != 0.0);
            let (sa, sb) = (ScaledValue::from_value(a), ScaledValue::from_value(b));
            prop_assert!(((sa * sb).value().unwrap() - a * b).abs() <= 1e-12 * (a * b).abs());
            prop_assert!(((sa / sb).value().unwrap() - a / b).abs() <= 1e-12 * (a / b).abs());
            let sum = (sa + sb).value().unwrap();
            prop_assert!((sum - (a + b)).abs() <= 1e-12 * (a.abs() + b.abs()));
        }
    }
}
