//! The polynomials X, Y, the remainder R and checks of their analytic bounds.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HmError, Result};
use crate::hp::{digits_to_bits, HpFloat};
use crate::poly::{IntPoly, Poly, RatPoly};
use crate::quad::{hp_table, hp_table_store, NodeTable};
use crate::scalar::{c_abs, c_inv, c_pow_ratio, c_powi, c_sqrt, Real};
use crate::sturm::count_negative_roots;

pub const DEFAULT_ROOT_CAP: u64 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HypgIndex {
    pub m: u64,
    pub n: u64,
    pub r: u64,
}

impl HypgIndex {
    pub fn new(m: u64, n: u64, r: u64) -> Result<Self> {
        if n < 3 {
            return Err(HmError::Constraint(format!("n = {n} must be at least 3")));
        }
        if m == 0 || 2 * m >= n {
            return Err(HmError::Constraint(format!("need 0 < m < n/2, got m = {m}, n = {n}")));
        }
        if m.gcd(&n) != 1 {
            return Err(HmError::Constraint(format!("gcd(m, n) = gcd({m}, {n}) != 1")));
        }
        Ok(HypgIndex { m, n, r })
    }

    pub fn with_r(self, r: u64) -> Self {
        HypgIndex { r, ..self }
    }

    pub fn nu(&self) -> BigRational {
        BigRational::new(self.m.into(), self.n.into())
    }

    pub fn nu_f64(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

/// Admissible m for a modulus n.
pub fn admissible_m(n: u64) -> Vec<u64> {
    (1..n.div_ceil(2)).filter(|&m| 2 * m < n && m.gcd(&n) == 1).collect()
}

/// Coefficients of 2F1(-r, -r-m/n; 1-m/n; z) by the exact term ratio.
pub fn x_poly(idx: &HypgIndex) -> Result<RatPoly> {
    let idx = HypgIndex::new(idx.m, idx.n, idx.r)?;
    let (m, n, r) = (idx.m as i64, idx.n as i64, idx.r as i64);
    let mut c = BigRational::one();
    let mut coeffs = Vec::with_capacity(r as usize + 1);
    coeffs.push(c.clone());
    for k in 0..r {
        let num = BigInt::from((r - k) * (n * (r - k) + m));
        let den = BigInt::from((n * (k + 1) - m) * (k + 1));
        c *= BigRational::new(num, den);
        coeffs.push(c.clone());
    }
    Ok(Poly { coeffs })
}

pub fn y_poly(idx: &HypgIndex) -> Result<RatPoly> {
    Ok(x_poly(idx)?.reversed())
}

/// n^r (r+1)...(2r) / prod_{i=1..r} (i n - m).
pub fn x_at_one(idx: &HypgIndex) -> Result<BigRational> {
    let idx = HypgIndex::new(idx.m, idx.n, idx.r)?;
    let mut num = BigInt::from(idx.n).pow(idx.r as u32);
    let mut den = BigInt::one();
    for i in 1..=idx.r {
        num *= BigInt::from(idx.r + i);
        den *= BigInt::from(i * idx.n - idx.m);
    }
    Ok(BigRational::new(num, den))
}

/// (m/n)(1+m/n)...(r+m/n) / ((r+1)...(2r+1)).
pub fn pochhammer_ratio(idx: &HypgIndex) -> BigRational {
    let nu = idx.nu();
    let mut v = nu.clone();
    for k in 1..=idx.r {
        v *= BigRational::from_integer(k.into()) + &nu;
    }
    for k in (idx.r + 1)..=(2 * idx.r + 1) {
        v /= BigRational::from_integer(k.into());
    }
    v
}

/// prod_{k=1..r} k/(k - m/n) = r! Gamma(1-m/n) / Gamma(r+1-m/n).
pub fn gamma_ratio_lower(idx: &HypgIndex) -> BigRational {
    let nu = idx.nu();
    (1..=idx.r).fold(BigRational::one(), |acc, k| {
        let kk = BigRational::from_integer(k.into());
        acc * &kk / (&kk - &nu)
    })
}

/// prod_{k=1..r} (k + m/n)/k = n Gamma(r+1+m/n) / (m Gamma(m/n) r!).
pub fn gamma_ratio_upper(idx: &HypgIndex) -> BigRational {
    let nu = idx.nu();
    (1..=idx.r).fold(BigRational::one(), |acc, k| {
        let kk = BigRational::from_integer(k.into());
        acc * (&kk + &nu) / kk
    })
}

#[derive(Clone, Debug)]
pub struct RemainderParams {
    pub idx: HypgIndex,
    pub prefactor: BigRational,
}

impl RemainderParams {
    pub fn new(idx: &HypgIndex) -> Result<Self> {
        let idx = HypgIndex::new(idx.m, idx.n, idx.r)?;
        Ok(RemainderParams { idx, prefactor: pochhammer_ratio(&idx) })
    }
}

/// A complex point carried at a stated decimal precision.
#[derive(Clone, Debug)]
pub struct ComplexHP {
    pub re: HpFloat,
    pub im: HpFloat,
    pub prec: u32,
}

impl ComplexHP {
    pub fn new(re: HpFloat, im: HpFloat, prec: u32) -> Result<Self> {
        if prec < 30 {
            return Err(HmError::Constraint(format!("precision {prec} below 30 digits")));
        }
        let b = digits_to_bits(prec);
        Ok(ComplexHP { re: re.with_bits(b), im: im.with_bits(b), prec })
    }

    pub fn parse(re: &str, im: &str, prec: u32) -> Result<Self> {
        let b = digits_to_bits(prec);
        let p = |s: &str| HpFloat::parse(s, b).ok_or_else(|| HmError::Parse(format!("bad real {s:?}")));
        ComplexHP::new(p(re)?, p(im)?, prec)
    }

    pub fn from_rational(re: &BigRational, im: &BigRational, prec: u32) -> Result<Self> {
        let b = digits_to_bits(prec);
        ComplexHP::new(HpFloat::from_rational(re, b), HpFloat::from_rational(im, b), prec)
    }

    /// exp(i pi num/den).
    pub fn unit(num: i64, den: i64, prec: u32) -> Result<Self> {
        let b = digits_to_bits(prec + 10);
        let th = HpFloat::pi(b) * HpFloat::from_i64(num, b) / HpFloat::from_i64(den, b);
        ComplexHP::new(th.cos(), th.sin(), prec)
    }

    pub fn one(prec: u32) -> Result<Self> {
        ComplexHP::new(HpFloat::from_i64(1, 64), HpFloat::from_i64(0, 64), prec)
    }

    pub fn to_complex(&self, bits: usize) -> Complex<HpFloat> {
        Complex::new(self.re.with_bits(bits), self.im.with_bits(bits))
    }

    pub fn from_complex(z: &Complex<HpFloat>, prec: u32) -> Self {
        let b = digits_to_bits(prec);
        ComplexHP { re: z.re.with_bits(b), im: z.im.with_bits(b), prec }
    }

    pub fn abs(&self) -> HpFloat {
        c_abs(&Complex::new(self.re.clone(), self.im.clone()))
    }

    pub fn to_f64(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_one(&self) -> bool {
        self.re == HpFloat::one() && self.im.is_zero()
    }
}

fn working_bits(prec: u32, r: u64) -> usize {
    digits_to_bits(prec + 20 + (0.61 * r as f64).ceil() as u32)
}

fn check_domain<T: Real>(z: &Complex<T>) -> Result<()> {
    let zero = T::lift_int(0, &z.re);
    if z.im.is_zero() && z.re <= zero {
        return Err(HmError::Domain("z lies on the non-positive real axis".into()));
    }
    if z.re < zero {
        return Err(HmError::Domain("Re(z) < 0 is outside the integral path".into()));
    }
    let one = T::lift_int(1, &z.re);
    let w = z.clone() - Complex::new(one.clone(), zero);
    let near_one = c_abs(&w) < one.clone();
    let in_disc = c_abs(z) <= one.clone() + T::lift(1e-12, &one);
    if !(near_one || in_disc) {
        return Err(HmError::Domain("need |1 - z| < 1, or Re(z) >= 0 with |z| <= 1".into()));
    }
    Ok(())
}

/// Integrand t^r (1-t)^r w^(-(r+1-m/n)) with w = (1-t) + t z.
fn euler_integrand<T: Real>(idx: &HypgIndex, z: &Complex<T>, t: &T, tc: &T) -> Complex<T> {
    let w = Complex::new(tc.clone() + t.clone() * z.re.clone(), t.clone() * z.im.clone());
    let base = (t.clone() * tc.clone()).powi(idx.r as u32);
    let num = c_pow_ratio(&w, idx.m as u32, idx.n as u32);
    let den = c_powi(&w, idx.r as u32 + 1);
    (num * c_inv(&den)).scale(base)
}

/// (2r+1)! / (r!)^2 as an exact integer.
fn euler_scale(r: u64) -> BigInt {
    let mut v = BigInt::one();
    for k in (r + 1)..=(2 * r + 1) {
        v *= BigInt::from(k);
    }
    for k in 1..=r {
        v /= BigInt::from(k);
    }
    v
}

/// 2F1(r+1-m/n, r+1; 2r+2; 1-z) in the working type via the Euler integral.
pub fn f21_euler<T: Real>(
    idx: &HypgIndex,
    z: &Complex<T>,
    table: &mut NodeTable<T>,
    target_digits: f64,
) -> Result<(Complex<T>, f64)> {
    check_domain(z)?;
    let like = z.re.clone();
    let res = table.integrate(|t, tc| euler_integrand(idx, z, t, tc), &like, target_digits, 14);
    let scale = T::lift_bigint(&euler_scale(idx.r), &like);
    Ok((res.value.scale(scale), res.err_log10))
}

pub fn rat_to_hp(v: &BigRational, bits: usize) -> HpFloat {
    HpFloat::from_rational(v, bits)
}

fn eval_rat_poly_hp(p: &RatPoly, z: &Complex<HpFloat>, bits: usize) -> Complex<HpFloat> {
    let zero = HpFloat::from_i64(0, 64);
    p.eval_with(z, |c| Complex::new(rat_to_hp(c, bits), zero.clone()))
}

/// R_{m,n,r}(z) at the precision of z.
pub fn remainder_eval(idx: &HypgIndex, z: &ComplexHP) -> Result<ComplexHP> {
    let params = RemainderParams::new(idx)?;
    if z.is_one() {
        let b = digits_to_bits(z.prec);
        return ComplexHP::new(rat_to_hp(&params.prefactor, b), HpFloat::from_i64(0, b), z.prec);
    }
    let bits = working_bits(z.prec, idx.r);
    let zc = z.to_complex(bits);
    let f = remainder_complex(&params, &zc, z.prec as f64 + 12.0)?;
    Ok(ComplexHP::from_complex(&f, z.prec))
}

fn remainder_complex(params: &RemainderParams, z: &Complex<HpFloat>, target: f64) -> Result<Complex<HpFloat>> {
    let bits = z.re.bits();
    let mut table = hp_table(bits);
    let out = f21_euler(&params.idx, z, &mut table, target);
    hp_table_store(table);
    let (f, err) = out?;
    if err > -target + 2.0 {
        return Err(HmError::Precision(format!("quadrature error estimate 1e{err:.1} above target 1e-{target:.0}")));
    }
    Ok(f.scale(rat_to_hp(&params.prefactor, bits)))
}

/// |Y(z) - z^(-m/n) X(z) - z^(-m/n) (z-1)^(2r+1) R(z)|.
pub fn relation_residual(idx: &HypgIndex, z: &ComplexHP) -> Result<HpFloat> {
    let params = RemainderParams::new(idx)?;
    let bits = working_bits(z.prec, idx.r);
    let zc = z.to_complex(bits);
    check_domain(&zc)?;
    let one = Complex::new(HpFloat::from_i64(1, bits), HpFloat::from_i64(0, bits));
    let xp = x_poly(idx)?;
    if z.is_one() {
        // both sides are exact rationals at z = 1
        let one = BigRational::one();
        let d = (xp.eval(&one) - xp.reversed().eval(&one)).abs();
        return Ok(rat_to_hp(&d, digits_to_bits(z.prec)));
    }
    let x = eval_rat_poly_hp(&xp, &zc, bits);
    let y = eval_rat_poly_hp(&xp.reversed(), &zc, bits);
    let zinv_nu = c_inv(&c_pow_ratio(&zc, idx.m as u32, idx.n as u32));
    let rr = remainder_complex(&params, &zc, z.prec as f64 + 18.0)?;
    let zm1 = zc.clone() - one;
    let tail = zinv_nu.clone() * c_powi(&zm1, 2 * idx.r as u32 + 1) * rr;
    let res = y - zinv_nu * x - tail;
    Ok(c_abs(&res).with_bits(digits_to_bits(z.prec)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArcMinimum {
    pub min: f64,
    pub argmin_re: f64,
    pub argmin_im: f64,
    pub argmin_index: usize,
    pub one_index: Option<usize>,
    pub samples: usize,
}

/// Minimum of |2F1(r+1-m/n, r+1; 2r+2; 1-z)| over the right half of the unit
/// circle, sampled at phi = -pi/2 + j pi/(samples-1).
pub fn f21_min_check(idx: &HypgIndex, samples: usize) -> Result<ArcMinimum> {
    let idx = HypgIndex::new(idx.m, idx.n, idx.r)?;
    if samples < 8 {
        return Err(HmError::Constraint("need at least 8 samples".into()));
    }
    let mut table = NodeTable::new(&0f64);
    let steps = (samples - 1) as f64;
    let mut best = (f64::INFINITY, 0usize, Complex::new(1.0, 0.0));
    let mut one_index = None;
    for j in 0..samples {
        let (val, z) = if 2 * j == samples - 1 {
            one_index = Some(j);
            (1.0, Complex::new(1.0, 0.0))
        } else {
            let phi = -std::f64::consts::FRAC_PI_2 + j as f64 * std::f64::consts::PI / steps;
            let z = Complex::new(phi.cos().max(0.0), phi.sin());
            let (f, err) = f21_euler(&idx, &z, &mut table, 13.0)?;
            if err > -11.0 {
                return Err(HmError::Precision(format!("arc sample {j}: error estimate 1e{err:.1}")));
            }
            (f.norm(), z)
        };
        if val < best.0 {
            best = (val, j, z);
        }
    }
    Ok(ArcMinimum {
        min: best.0,
        argmin_re: best.2.re,
        argmin_im: best.2.im,
        argmin_index: best.1,
        one_index,
        samples,
    })
}

/// Sturm certificate that all r roots of X are negative reals.
pub fn x_root_certificate(idx: &HypgIndex, cap: u64) -> Result<bool> {
    if idx.r > cap {
        return Err(HmError::CapExceeded { r: idx.r, cap });
    }
    let xp = x_poly(idx)?;
    if idx.r == 0 {
        return Ok(true);
    }
    let d = xp.denominator_lcm();
    let ip: IntPoly = xp.to_int_scaled(&d).expect("lcm clears denominators");
    Ok(count_negative_roots(&ip) as u64 == idx.r)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundsCheck {
    pub lower_ok: bool,
    pub lower_y_ok: bool,
    /// `None` when |z| != 1 or |z - 1| >= 1.
    pub upper_ok: Option<bool>,
}

/// Lower bound (1 + Re z)^r <= |X(z)|, |Y(z)|; upper bound on the unit arc.
pub fn x_bounds_check(idx: &HypgIndex, z: &ComplexHP) -> Result<BoundsCheck> {
    let bits = working_bits(z.prec, idx.r);
    let zc = z.to_complex(bits);
    let xp = x_poly(idx)?;
    let x = c_abs(&eval_rat_poly_hp(&xp, &zc, bits));
    let y = c_abs(&eval_rat_poly_hp(&xp.reversed(), &zc, bits));
    let tol = HpFloat::from_i64(10, bits).powi(1).ln();
    let tol = (-(tol * HpFloat::from_i64(z.prec as i64 - 15, bits))).exp();
    let one = HpFloat::from_i64(1, bits);
    let zero = HpFloat::from_i64(0, bits);
    let (lower_ok, lower_y_ok) = if zc.re >= zero {
        let lb = (one.clone() + zc.re.clone()).powi(idx.r as u32) - tol.clone();
        (x >= lb, y >= lb)
    } else {
        (true, true)
    };
    let modulus = c_abs(&zc);
    let on_circle = (modulus - one.clone()).abs() <= tol;
    let near_one = c_abs(&(zc.clone() - Complex::new(one.clone(), zero))) < one;
    let upper_ok = if on_circle && near_one {
        let g = rat_to_hp(&gamma_ratio_lower(idx), bits);
        let s = c_abs(&(c_sqrt(&zc) + Complex::new(HpFloat::from_i64(1, bits), HpFloat::from_i64(0, bits))));
        let ub = HpFloat::from_f64(1.072, bits) * g * s.powi(2 * idx.r as u32) + tol;
        Some(x <= ub)
    } else {
        None
    };
    Ok(BoundsCheck { lower_ok, lower_y_ok, upper_ok })
}

/// (1 + x)^r <= X(x) for rational 0 <= x, as an exact comparison.
pub fn x_lower_bound_exact(idx: &HypgIndex, x: &BigRational) -> Result<bool> {
    let xp = x_poly(idx)?;
    let v = xp.eval(x).abs();
    let b = num_traits::pow::pow(BigRational::one() + x, idx.r as usize);
    Ok(v >= b)
}

/// Leading coefficient of X; equals (n+m)/(n-m) for r = 1, so X is not monic.
pub fn x_leading_coefficient(idx: &HypgIndex) -> Result<BigRational> {
    Ok(x_poly(idx)?.lead().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn idx(m: u64, n: u64, r: u64) -> HypgIndex {
        HypgIndex::new(m, n, r).unwrap()
    }

    #[test]
    fn index_validation() {
        assert!(HypgIndex::new(2, 4, 3).is_err());
        assert!(HypgIndex::new(2, 3, 1).is_err());
        assert!(HypgIndex::new(1, 2, 1).is_err());
        assert!(HypgIndex::new(3, 7, 0).is_ok());
        assert_eq!(admissible_m(12), vec![1, 5]);
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(x_poly(&idx(1, 3, 0)).unwrap().coeffs, vec![q(1, 1)]);
        for (m, n) in [(1, 3), (2, 5), (3, 7), (1, 4)] {
            let x = x_poly(&idx(m, n, 1)).unwrap();
            assert_eq!(x.coeffs, vec![q(1, 1), q((n + m) as i64, (n - m) as i64)]);
            let y = y_poly(&idx(m, n, 1)).unwrap();
            assert_eq!(y.coeffs, vec![q((n + m) as i64, (n - m) as i64), q(1, 1)]);
        }
    }

    #[test]
    fn x_at_one_examples() {
        assert_eq!(x_at_one(&idx(1, 3, 0)).unwrap(), q(1, 1));
        assert_eq!(x_at_one(&idx(1, 3, 1)).unwrap(), q(3, 1));
        assert_eq!(x_at_one(&idx(1, 3, 2)).unwrap(), q(54, 5));
        let x = x_poly(&idx(1, 3, 2)).unwrap();
        assert_eq!(x.eval(&q(1, 1)), q(54, 5));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_ratio(&idx(1, 3, 0)), q(1, 3));
        assert_eq!(pochhammer_ratio(&idx(1, 3, 1)), q(2, 27));
    }

    #[test]
    fn remainder_at_one_is_prefactor() {
        let z = ComplexHP::one(40).unwrap();
        let v = remainder_eval(&idx(1, 3, 2), &z).unwrap();
        let expect = rat_to_hp(&pochhammer_ratio(&idx(1, 3, 2)), 200);
        assert!((v.re - expect).abs().to_f64() < 1e-40);
    }

    #[test]
    fn domain_errors() {
        let z = ComplexHP::parse("-0.5", "0", 40).unwrap();
        assert!(matches!(remainder_eval(&idx(1, 3, 2), &z), Err(HmError::Domain(_))));
        let z = ComplexHP::parse("0", "0", 40).unwrap();
        assert!(matches!(remainder_eval(&idx(1, 3, 2), &z), Err(HmError::Domain(_))));
    }

    #[test]
    fn roots_r1_and_r0() {
        assert!(x_root_certificate(&idx(1, 3, 0), 60).unwrap());
        assert!(x_root_certificate(&idx(2, 5, 1), 60).unwrap());
        assert!(matches!(x_root_certificate(&idx(1, 3, 61), 60), Err(HmError::CapExceeded { .. })));
    }

    #[test]
    fn leading_coefficient_logged_not_monic() {
        assert_eq!(x_leading_coefficient(&idx(1, 3, 1)).unwrap(), q(2, 1));
    }

    #[test]
    fn euler_scale_small() {
        assert_eq!(euler_scale(0), BigInt::from(1));
        assert_eq!(euler_scale(2), BigInt::from(30));
    }

    // 2F1(a, b; c; x) by direct series in HpFloat, for real 0 <= x < 1/2
    fn series_oracle(idx: &HypgIndex, x: &HpFloat, terms: usize) -> HpFloat {
        let bits = x.bits();
        let a = HpFloat::from_i64((idx.r + 1) as i64, bits) - HpFloat::from_rational(&idx.nu(), bits);
        let b = HpFloat::from_i64((idx.r + 1) as i64, bits);
        let c = HpFloat::from_i64((2 * idx.r + 2) as i64, bits);
        let mut term = HpFloat::from_i64(1, bits);
        let mut sum = term.clone();
        for k in 0..terms {
            let kk = HpFloat::from_i64(k as i64, bits);
            let k1 = HpFloat::from_i64(k as i64 + 1, bits);
            term = term * (a.clone() + kk.clone()) * (b.clone() + kk.clone()) / ((c.clone() + kk) * k1) * x.clone();
            sum = sum + term.clone();
        }
        sum
    }

    #[test]
    fn remainder_matches_series() {
        let id = idx(1, 3, 2);
        let z = ComplexHP::parse("0.9", "0", 60).unwrap();
        let v = remainder_eval(&id, &z).unwrap();
        let bits = digits_to_bits(80);
        let x = HpFloat::parse("0.1", bits).unwrap();
        let s = series_oracle(&id, &x, 120) * rat_to_hp(&pochhammer_ratio(&id), bits);
        let rel = ((v.re.with_bits(bits) - s.clone()) / s).abs().to_f64();
        assert!(rel < 1e-40, "rel {rel:e}");
        assert!(v.im.abs().to_f64() < 1e-50);
    }

    #[test]
    fn relation_examples() {
        let z = ComplexHP::unit(1, 6, 100).unwrap();
        let res = relation_residual(&idx(1, 3, 5), &z).unwrap();
        assert!(res.to_f64() < 1e-85, "{}", res.to_f64());
        let z = ComplexHP::parse("0.7", "0", 100).unwrap();
        let res = relation_residual(&idx(2, 5, 8), &z).unwrap();
        assert!(res.to_f64() < 1e-85, "{}", res.to_f64());
        let res = relation_residual(&idx(2, 5, 8), &ComplexHP::one(100).unwrap()).unwrap();
        assert!(res.is_zero());
    }

    #[test]
    fn arc_minimum_at_one() {
        let a = f21_min_check(&idx(1, 3, 3), 257).unwrap();
        assert!(a.min >= 1.0 - 1e-9);
        assert_eq!(a.argmin_index, 128);
        let a = f21_min_check(&idx(3, 7, 10), 257).unwrap();
        assert!(a.min >= 1.0 - 1e-9);
    }

    #[test]
    fn bounds_examples() {
        let one = ComplexHP::one(40).unwrap();
        let b = x_bounds_check(&idx(1, 3, 4), &one).unwrap();
        assert!(b.lower_ok && b.lower_y_ok);
        let z = ComplexHP::parse("0", "1", 40).unwrap();
        assert!(x_bounds_check(&idx(1, 4, 3), &z).unwrap().lower_ok);
        let z = ComplexHP::unit(1, 4, 40).unwrap();
        let b = x_bounds_check(&idx(1, 3, 6), &z).unwrap();
        assert!(b.lower_ok);
        assert_eq!(b.upper_ok, Some(true));
    }

    #[test]
    fn root_certificate_r13() {
        assert!(x_root_certificate(&idx(1, 3, 13), 60).unwrap());
    }
}
