//! Minimal double-double arithmetic (an unevaluated sum `hi + lo`), enough to
//! sum alternating power series whose terms are far larger than their sum.

use std::ops::{Add, Mul, Neg};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DD {
    pub hi: f64,
    pub lo: f64,
}

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

impl DD {
    pub fn from_f64(x: f64) -> DD {
        DD { hi: x, lo: 0.0 }
    }

    pub fn square(x: f64) -> DD {
        let (hi, lo) = two_prod(x, x);
        DD { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs_hi(self) -> f64 {
        self.hi.abs()
    }

    pub fn div(self, d: DD) -> DD {
        let q1 = self.hi / d.hi;
        let r = self + -(d * q1);
        let q2 = r.hi / d.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo }
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, o: DD) -> DD {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul<f64> for DD {
    type Output = DD;
    fn mul(self, b: f64) -> DD {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        DD { hi, lo }
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, o: DD) -> DD {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
        DD { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_digits_lost_in_plain_sum() {
        let big = DD::from_f64(1e17);
        let s = big + DD::from_f64(1.0) + -big;
        assert_eq!(s.to_f64(), 1.0);
    }

    #[test]
    fn division_is_accurate() {
        let third = DD::from_f64(1.0).div(DD::from_f64(3.0));
        let back = third * 3.0;
        assert!((back + DD::from_f64(-1.0)).to_f64().abs() < 1e-30);
    }
}
