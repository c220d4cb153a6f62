//! Closed real intervals and the elementary functions needed by the natural
//! interval extension of objective and constraint expressions.
//!
//! Plain floating point, no directed rounding: the solver operates at
//! tolerances far above one ulp. [`Interval::inflate`] offers optional
//! relative padding for callers that want a safety margin.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with finite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// `lo` and `hi` must already satisfy `lo <= hi`; callers constructing
    /// from untrusted data should use [`Interval::checked`].
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn checked(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite("interval endpoints"));
        }
        if lo > hi {
            return Err(Error::Domain(format!("interval [{lo}, {hi}] with lo > hi")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Magnitude: largest absolute value contained in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Pads both endpoints by `factor * width` (relative inflation; 0 is a
    /// no-op and the solver default).
    pub fn inflate(&self, factor: f64) -> Interval {
        let pad = factor * self.width();
        Interval::new(self.lo - pad, self.hi + pad)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn div(&self, rhs: Interval) -> Result<Interval> {
        if rhs.contains(0.0) {
            return Err(Error::Domain(format!(
                "division by interval [{}, {}] containing zero",
                rhs.lo, rhs.hi
            )));
        }
        let c = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        Ok(Interval::new(
            c.iter().copied().fold(f64::INFINITY, f64::min),
            c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ))
    }

    /// Integer power with the tight rule for even exponents, so that
    /// `[-1, 2]^2 = [0, 4]` rather than `[-2, 4]`.
    pub fn powi(&self, k: i32) -> Result<Interval> {
        if k == 0 {
            return Ok(Interval::point(1.0));
        }
        if k < 0 {
            return Interval::point(1.0).div(self.powi(-k)?);
        }
        let (pl, ph) = (self.lo.powi(k), self.hi.powi(k));
        if k % 2 == 1 || self.lo >= 0.0 {
            Ok(Interval::new(pl, ph))
        } else if self.hi <= 0.0 {
            Ok(Interval::new(ph, pl))
        } else {
            Ok(Interval::new(0.0, pl.max(ph)))
        }
    }

    /// Real power for nonnegative bases; monotone increasing for `r > 0`.
    pub fn powf(&self, r: f64) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::Domain(format!(
                "powf of interval [{}, {}] with negative part",
                self.lo, self.hi
            )));
        }
        if r > 0.0 {
            Ok(Interval::new(self.lo.powf(r), self.hi.powf(r)))
        } else if r == 0.0 {
            Ok(Interval::point(1.0))
        } else {
            if self.lo == 0.0 {
                return Err(Error::Domain(
                    "negative power of interval reaching zero".into(),
                ));
            }
            Ok(Interval::new(self.hi.powf(r), self.lo.powf(r)))
        }
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::Domain(format!(
                "sqrt of interval [{}, {}] with negative part",
                self.lo, self.hi
            )));
        }
        Ok(Interval::new(self.lo.sqrt(), self.hi.sqrt()))
    }

    pub fn exp(&self) -> Interval {
        Interval::new(self.lo.exp(), self.hi.exp())
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            Interval::new(-self.hi, -self.lo)
        } else {
            Interval::new(0.0, self.mag())
        }
    }

    /// Monotonicity-aware sine over critical points.
    pub fn sin(&self) -> Interval {
        if self.width() >= 2.0 * PI {
            return Interval::new(-1.0, 1.0);
        }
        let (sl, sh) = (self.lo.sin(), self.hi.sin());
        let mut lo = sl.min(sh);
        let mut hi = sl.max(sh);
        // peak at pi/2 + 2k*pi inside?
        let k = ((self.lo - FRAC_PI_2) / (2.0 * PI)).ceil();
        if FRAC_PI_2 + 2.0 * PI * k <= self.hi {
            hi = 1.0;
        }
        // trough at -pi/2 + 2k*pi inside?
        let k = ((self.lo + FRAC_PI_2) / (2.0 * PI)).ceil();
        if -FRAC_PI_2 + 2.0 * PI * k <= self.hi {
            lo = -1.0;
        }
        Interval::new(lo, hi)
    }

    pub fn cos(&self) -> Interval {
        Interval::new(self.lo + FRAC_PI_2, self.hi + FRAC_PI_2).sin()
    }

    pub fn atan(&self) -> Interval {
        Interval::new(self.lo.atan(), self.hi.atan())
    }

    pub fn min_i(&self, other: Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.min(other.hi))
    }

    pub fn max_i(&self, other: Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    /// Sign enclosure: `[-1, 1]` when the interval straddles zero.
    pub fn sign(&self) -> Interval {
        if self.lo > 0.0 {
            Interval::point(1.0)
        } else if self.hi < 0.0 {
            Interval::point(-1.0)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Interval::point(0.0)
        } else {
            Interval::new(-1.0, 1.0)
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::new(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::new(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let c = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        Interval::new(
            c.iter().copied().fold(f64::INFINITY, f64::min),
            c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

/// A vector of intervals, one per variable: the enclosure of a subregion.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(components: Vec<Interval>) -> Self {
        IntervalVector(components)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn component(&self, i: usize) -> Interval {
        self.0[i]
    }

    pub fn components(&self) -> &[Interval] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        let a = Interval::new(0.0, 1.0);
        let b = Interval::new(2.0, 3.0);
        assert_eq!(a + b, Interval::new(2.0, 4.0));
        assert_eq!(a - b, Interval::new(-3.0, -1.0));
        assert_eq!(a * b, Interval::new(0.0, 3.0));
        assert_eq!(Interval::new(-1.0, 2.0) * b, Interval::new(-3.0, 6.0));
    }

    #[test]
    fn even_power_is_tight() {
        assert_eq!(
            Interval::new(-1.0, 2.0).powi(2).unwrap(),
            Interval::new(0.0, 4.0)
        );
        assert_eq!(
            Interval::new(-2.0, 1.0).powi(3).unwrap(),
            Interval::new(-8.0, 1.0)
        );
    }

    #[test]
    fn division_by_zero_interval_errors() {
        let err = Interval::new(1.0, 2.0).div(Interval::new(-1.0, 1.0));
        assert!(err.is_err());
        assert_eq!(
            Interval::new(1.0, 2.0).div(Interval::new(1.0, 2.0)).unwrap(),
            Interval::new(0.5, 2.0)
        );
    }

    #[test]
    fn sine_over_critical_points() {
        let s = Interval::new(0.0, PI).sin();
        assert_eq!(s.lo, 0.0);
        assert_eq!(s.hi, 1.0);
        let s = Interval::new(PI, 2.0 * PI).sin();
        assert_eq!(s.lo, -1.0);
        let s = Interval::new(0.0, 10.0).sin();
        assert_eq!(s, Interval::new(-1.0, 1.0));
    }

    #[test]
    fn cosine_via_shift() {
        let c = Interval::new(0.0, PI).cos();
        assert!(c.lo <= -1.0 + 1e-15 && (c.hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sign_enclosure() {
        assert_eq!(Interval::new(0.5, 2.0).sign(), Interval::point(1.0));
        assert_eq!(Interval::new(-2.0, -0.5).sign(), Interval::point(-1.0));
        assert_eq!(Interval::new(-1.0, 1.0).sign(), Interval::new(-1.0, 1.0));
    }
}
