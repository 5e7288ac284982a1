//! Double-double arithmetic: unevaluated sums `hi + lo` of two `f64`s with
//! `|lo| ≤ ulp(hi)/2`, giving roughly 32 significant digits.
//!
//! Used where working precision is destroyed by cancellation: monomial
//! expansions of shifted polynomials, and the compensated residuals of the
//! regularised solves.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Error-free sum: `a + b = s + e` exactly.
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

/// Error-free product: `a * b = p + e` exactly.
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `a + b = s + e` exactly, assuming `|a| ≥ |b|`.
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn renormalised((hi, lo): (f64, f64)) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn powi(self, n: u32) -> Self {
        (0..n).fold(Dd::ONE, |acc, _| acc * self)
    }
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renormalised((s, e + f))
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        Dd::renormalised((s, e + self.lo))
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::renormalised((p, e + (self.hi * b.lo + self.lo * b.hi)))
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        Dd::renormalised((p, e + self.lo * b))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        Dd::renormalised(quick_two_sum(q1, q2)) + q3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_third_round_trips() {
        let third = Dd::ONE / Dd::from(3.0);
        let back = third * 3.0 - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        assert_eq!(third.to_f64(), 1.0 / 3.0);
    }

    #[test]
    fn cancellation_keeps_low_digits() {
        let big = Dd::from(1e16);
        let sum = big + 1.0 + Dd::from(0.25) - big;
        assert_eq!(sum.to_f64(), 1.25);
        let (p, e) = two_prod(1.0 + f64::EPSILON, 1.0 - f64::EPSILON);
        assert_eq!(p, 1.0);
        assert_eq!(e, -f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn powers_and_signs() {
        let x = Dd::from(1.1);
        let p = x.powi(3);
        // 1.1 is not exact in binary; compare with the exact cube of the stored value
        let exact = 1.1f64 * 1.1 * 1.1;
        assert!((p.to_f64() - exact).abs() < 1e-15);
        assert_eq!(-(-x), x);
        assert!(!Dd::from(f64::NAN).is_finite());
    }
}
