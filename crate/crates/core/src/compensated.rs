//! Double-double arithmetic built from error-free transformations.

use std::ops::{Add, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
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
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const LN2: DoubleDouble = DoubleDouble { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        DoubleDouble { hi, lo }
    }

    pub fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        DoubleDouble { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let rem = self - DoubleDouble::from_f64(b).mul_f64(q1);
        let q2 = rem.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }
    }

    pub fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        DoubleDouble { hi: self.hi * s, lo: self.lo * s }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

/// exp(x) for a double x, to about 30 digits.
pub fn exp_dd(x: f64) -> DoubleDouble {
    let k = (x / std::f64::consts::LN_2).round();
    let r = DoubleDouble::from_f64(x) - LN2.mul_f64(k);
    let r = r.ldexp(-4);
    // Taylor to degree 14; |r| < 2^-5
    let mut term = DoubleDouble::from_f64(1.0);
    let mut sum = term;
    for i in 1..=14 {
        term = term.mul(r).div_f64(i as f64);
        sum = sum + term;
    }
    for _ in 0..4 {
        sum = sum.mul(sum);
    }
    sum.ldexp(k as i32)
}

/// ln(x) for a positive double x (exact input), to about 30 digits.
pub fn log_dd(x: f64) -> DoubleDouble {
    let y = x.ln();
    // one Newton step: y + (x - e^y) / e^y
    let e = exp_dd(y);
    let corr = (DoubleDouble::from_f64(x) - e).to_f64() / e.to_f64();
    DoubleDouble::from_f64(y).add_f64(corr)
}

/// Running sum with a double-double accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    acc: DoubleDouble,
}

impl CompensatedSum {
    pub fn add(&mut self, v: DoubleDouble) {
        self.acc = self.acc + v;
    }
    pub fn value(&self) -> DoubleDouble {
        self.acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::HpFloat;

    fn hp(d: DoubleDouble) -> HpFloat {
        HpFloat::from_f64(d.hi, 256) + HpFloat::from_f64(d.lo, 256)
    }

    #[test]
    fn log_matches_high_precision() {
        for p in [2u64, 3, 5, 7, 1009, 65537, 999_999_937, 2_147_483_647] {
            let got = hp(log_dd(p as f64));
            let want = HpFloat::from_i64(p as i64, 256).ln();
            let rel = ((got - want.clone()) / want).abs().to_f64();
            assert!(rel < 1e-30, "p={p} rel={rel:e}");
        }
    }

    #[test]
    fn sum_beats_naive() {
        let mut s = CompensatedSum::default();
        let mut naive = 0.0;
        for _ in 0..1_000_000 {
            s.add(DoubleDouble::from_f64(0.1));
            naive += 0.1;
        }
        let exact = HpFloat::from_f64(0.1, 256) * HpFloat::from_i64(1_000_000, 256);
        let e1 = (hp(s.value()) - exact.clone()).abs().to_f64();
        let e2 = (HpFloat::from_f64(naive, 256) - exact).abs().to_f64();
        assert!(e1 < 1e-20 && e2 > 1e-10);
    }
}
