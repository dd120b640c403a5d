//! A small double-double (unevaluated sum of two `f64`) real type, about 32
//! significant digits. It exists so Gaver-Stehfest inversion can sum its
//! huge alternating weights without losing the result to rounding; only the
//! operations that real-axis Laplace images need are provided.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub(crate) const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_558e-17 };

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (s, e) = quick_two_sum(p, e + self.lo * b);
        Dd { hi: s, lo: e }
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::new(self.hi.sqrt());
        }
        let y = Dd::new(self.hi.sqrt());
        y + (self - y * y) / (y + y)
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).mul_f64(1.0 / 1024.0);
        // expm1(r) by Taylor series, |r| < 3.4e-4
        let mut term = r;
        let mut s = r;
        for n in 2..=12 {
            term = (term * r) / Dd::new(n as f64);
            s = s + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        // (1+s)^(2^10) via expm1 doubling: s <- 2s + s^2
        for _ in 0..10 {
            s = s + s + s * s;
        }
        let v = s + Dd::ONE;
        let scale = 2f64.powi(k as i32);
        Dd { hi: v.hi * scale, lo: v.lo * scale }
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::new(self.hi.ln());
        }
        let mut y = Dd::new(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    pub fn powf(self, e: Dd) -> Dd {
        if self.hi == 0.0 {
            return if e.hi > 0.0 { Dd::ZERO } else { Dd::new(f64::INFINITY) };
        }
        (e * self.ln()).exp()
    }

    /// `ln(1 + x)` without cancellation for small `x`.
    pub fn ln1p(self) -> Dd {
        if self.hi.abs() > 1e-3 {
            return (Dd::ONE + self).ln();
        }
        // alternating Taylor series
        let mut term = self;
        let mut s = self;
        for n in 2..=30 {
            term = -(term * self);
            let add = term / Dd::new(n as f64);
            s = s + add;
            if add.hi.abs() < 1e-34 * s.hi.abs() {
                break;
            }
        }
        s
    }

    /// `exp(x) - 1` without cancellation for small `x`.
    pub fn expm1(self) -> Dd {
        if self.hi.abs() > 1e-3 {
            return self.exp() - Dd::ONE;
        }
        let mut term = self;
        let mut s = self;
        for n in 2..=20 {
            term = (term * self) / Dd::new(n as f64);
            s = s + term;
            if term.hi.abs() < 1e-34 * s.hi.abs() {
                break;
            }
        }
        s
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (s, e) = quick_two_sum(s, e + f);
        Dd { hi: s, lo: e }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (s, e) = quick_two_sum(p, e);
        Dd { hi: s, lo: e }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o.mul_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o.mul_f64(q2);
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::new(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, hi: f64, lo: f64, tol: f64) -> bool {
        let d = (a - Dd { hi, lo }).to_f64().abs();
        d <= tol * hi.abs()
    }

    #[test]
    fn exp_and_ln_reach_double_double_accuracy() {
        // e = 2.71828182845904523536028747135266...
        let e = Dd::ONE.exp();
        assert!(close(e, std::f64::consts::E, 1.445_646_891_729_250_2e-16, 1e-30));
        // exp(0.7 rounded to f64)
        let x = Dd::new(0.7).exp();
        assert!(close(x, 2.013_752_707_470_476_6, -2.005_824_354_976_479_3e-16, 1e-30), "{x:?}");
        let back = x.ln();
        assert!((back - Dd::new(0.7)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn division_and_sqrt_round_trip() {
        let a = Dd::new(3.0);
        let q = Dd::ONE / a;
        assert!(((q * a) - Dd::ONE).to_f64().abs() < 1e-31);
        let s = Dd::new(2.0).sqrt();
        assert!(((s * s) - Dd::new(2.0)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn ln1p_expm1_small_arguments() {
        let x = Dd::new(1e-6);
        assert!((x.ln1p().expm1() - x).to_f64().abs() < 1e-37);
    }
}
