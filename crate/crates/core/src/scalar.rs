//! Scalar abstraction shared by the numeric kernels.
//!
//! `Real` is implemented for `f32`, `f64` and [`HpFloat`]. Constants are
//! created "like" an existing value so that they inherit its precision.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Num, Signed};

use crate::hp::HpFloat;

pub trait Real: Num + Signed + Clone + PartialOrd + Debug + Send + Sync {
    /// Mantissa bits carried by this value.
    fn bits(&self) -> usize;
    fn lift(v: f64, like: &Self) -> Self;
    fn lift_int(v: i64, like: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan(&self) -> Self;
    fn pi(like: &Self) -> Self;

    /// Exact for HpFloat when the precision suffices, rounded otherwise.
    fn lift_bigint(v: &num_bigint::BigInt, like: &Self) -> Self {
        let ln = crate::valuation::bigint_to_f64_ln(v);
        let mag = if ln.is_finite() { ln.exp() } else { 0.0 };
        let s = if v.sign() == num_bigint::Sign::Minus { -mag } else { mag };
        Self::lift(s, like)
    }

    fn powi(&self, n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::lift_int(1, self);
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

macro_rules! prim_real {
    ($t:ty, $bits:expr) => {
        impl Real for $t {
            fn bits(&self) -> usize {
                $bits
            }
            fn lift(v: f64, _: &Self) -> Self {
                v as $t
            }
            fn lift_int(v: i64, _: &Self) -> Self {
                v as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }
            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }
            fn sin(&self) -> Self {
                <$t>::sin(*self)
            }
            fn cos(&self) -> Self {
                <$t>::cos(*self)
            }
            fn atan(&self) -> Self {
                <$t>::atan(*self)
            }
            fn pi(_: &Self) -> Self {
                std::f64::consts::PI as $t
            }
            fn powi(&self, n: u32) -> Self {
                <$t>::powi(*self, n as i32)
            }
        }
    };
}

prim_real!(f32, 24);
prim_real!(f64, 53);

impl Real for HpFloat {
    fn bits(&self) -> usize {
        HpFloat::bits(self)
    }
    fn lift(v: f64, like: &Self) -> Self {
        HpFloat::from_f64(v, like.bits())
    }
    fn lift_int(v: i64, like: &Self) -> Self {
        HpFloat::from_i64(v, like.bits())
    }
    fn to_f64(&self) -> f64 {
        HpFloat::to_f64(self)
    }
    fn sqrt(&self) -> Self {
        HpFloat::sqrt(self)
    }
    fn exp(&self) -> Self {
        HpFloat::exp(self)
    }
    fn ln(&self) -> Self {
        HpFloat::ln(self)
    }
    fn sin(&self) -> Self {
        HpFloat::sin(self)
    }
    fn cos(&self) -> Self {
        HpFloat::cos(self)
    }
    fn atan(&self) -> Self {
        HpFloat::atan(self)
    }
    fn pi(like: &Self) -> Self {
        HpFloat::pi(like.bits())
    }
    fn lift_bigint(v: &num_bigint::BigInt, like: &Self) -> Self {
        HpFloat::from_bigint(v, like.bits())
    }
    fn powi(&self, n: u32) -> Self {
        HpFloat::powi(self, n)
    }
}

/// Four-quadrant arctangent built on `atan`.
pub fn atan2<T: Real>(y: &T, x: &T) -> T {
    let zero = T::lift_int(0, x);
    let pi = T::pi(x);
    if x.is_zero() {
        let half = pi / T::lift_int(2, x);
        return if *y >= zero { half } else { -half };
    }
    let base = (y.clone() / x.clone()).atan();
    if *x > zero {
        base
    } else if *y >= zero {
        base + pi
    } else {
        base - pi
    }
}

pub fn c_abs<T: Real>(z: &Complex<T>) -> T {
    (z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()).sqrt()
}

pub fn c_norm_sqr<T: Real>(z: &Complex<T>) -> T {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}

pub fn c_arg<T: Real>(z: &Complex<T>) -> T {
    atan2(&z.im, &z.re)
}

pub fn c_powi<T: Real>(z: &Complex<T>, n: u32) -> Complex<T> {
    let one = T::lift_int(1, &z.re);
    let mut acc = Complex::new(one, T::lift_int(0, &z.re));
    let mut base = z.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base.clone();
        }
        k >>= 1;
        if k > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

pub fn c_inv<T: Real>(z: &Complex<T>) -> Complex<T> {
    let d = c_norm_sqr(z);
    Complex::new(z.re.clone() / d.clone(), -(z.im.clone() / d))
}

/// Principal value of exp(Log(z)/n), refined by Newton from an f64 seed.
pub fn c_nth_root<T: Real>(z: &Complex<T>, n: u32) -> Complex<T> {
    if n == 1 {
        return z.clone();
    }
    let zf = Complex::new(z.re.to_f64(), z.im.to_f64());
    let seed = zf.powf(1.0 / n as f64);
    let mut y = Complex::new(T::lift(seed.re, &z.re), T::lift(seed.im, &z.re));
    let nn = T::lift_int(n as i64, &z.re);
    let nm1 = T::lift_int(n as i64 - 1, &z.re);
    let bits = z.re.bits().max(z.im.bits());
    let mut good = 48usize;
    while good < bits + 8 {
        let yp = c_powi(&y, n - 1);
        let corr = z.clone() * c_inv(&yp);
        y = (y.scale(nm1.clone()) + corr).unscale(nn.clone());
        good *= 2;
    }
    y
}

/// Principal z^(m/n).
pub fn c_pow_ratio<T: Real>(z: &Complex<T>, m: u32, n: u32) -> Complex<T> {
    c_powi(&c_nth_root(z, n), m)
}

pub fn c_sqrt<T: Real>(z: &Complex<T>) -> Complex<T> {
    c_nth_root(z, 2)
}

pub fn c_exp<T: Real>(z: &Complex<T>) -> Complex<T> {
    let r = z.re.exp();
    Complex::new(r.clone() * z.im.cos(), r * z.im.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic_root<T: Real>(like: T) -> f64 {
        let z = Complex::new(T::lift(-0.3, &like), T::lift(0.8, &like));
        let y = c_nth_root(&z, 5);
        let back = c_powi(&y, 5) - z;
        c_abs(&back).to_f64()
    }

    #[test]
    fn roots_for_each_scalar() {
        assert!(generic_root(0f32) < 1e-5);
        assert!(generic_root(0f64) < 1e-14);
        assert!(generic_root(HpFloat::from_i64(0, 320)) < 1e-90);
    }

    #[test]
    fn principal_branch() {
        let z = Complex::new(-1.0f64, 1e-30);
        let y = c_sqrt(&z);
        assert!((y.im - 1.0).abs() < 1e-15);
        let w = Complex::new(0.0f64, 1.0);
        let y = c_pow_ratio(&w, 1, 3);
        let exact = Complex::from_polar(1.0, std::f64::consts::PI / 6.0);
        assert!((y - exact).norm() < 1e-15);
    }

    #[test]
    fn newton_root_matches_exp_log() {
        let bits = 400;
        let z = Complex::new(HpFloat::from_f64(-0.3, bits), HpFloat::from_f64(-0.8, bits));
        for n in [2u32, 3, 7] {
            let log = Complex::new(c_abs(&z).ln(), atan2(&z.im, &z.re));
            let nf = HpFloat::from_i64(n as i64, bits);
            let want = c_exp(&Complex::new(log.re / nf.clone(), log.im / nf));
            assert!(c_abs(&(c_nth_root(&z, n) - want)).to_f64() < 1e-110, "n={n}");
        }
    }

    #[test]
    fn atan2_quadrants() {
        for (y, x) in [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0), (1.0, 0.0)] {
            assert!((atan2(&y, &x) - f64::atan2(y, x)).abs() < 1e-15);
        }
    }
}
