//! Arbitrary-precision real wrapper over `astro_float::BigFloat`.
//!
//! Every value carries its own precision in bits. Binary operations run at the
//! larger of the two operand precisions, so small exact constants can be
//! created cheaply and mixed with working-precision values.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

const RM: RoundingMode = RoundingMode::ToEven;
const SMALL: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_cc<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Decimal digits to binary precision, rounded up to whole words.
pub fn digits_to_bits(digits: u32) -> usize {
    let b = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 8;
    b.div_ceil(64) * 64
}

#[derive(Clone)]
pub struct HpFloat(BigFloat);

impl HpFloat {
    pub fn from_f64(v: f64, bits: usize) -> Self {
        HpFloat(BigFloat::from_f64(v, bits.max(SMALL)))
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        HpFloat(BigFloat::from_i64(v, bits.max(SMALL)))
    }

    /// Exact conversion of a big integer, then rounded to `bits`.
    pub fn from_bigint(v: &BigInt, bits: usize) -> Self {
        if v.is_zero() {
            return HpFloat::from_i64(0, bits);
        }
        let (sign, words) = v.to_u64_digits();
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let e = (64 * words.len()) as i32;
        let mut x = BigFloat::from_words(&words, s, e);
        let p = bits.max(SMALL);
        if x.mantissa_max_bit_len().unwrap_or(0) != p {
            x.set_precision(p, RM).expect("set precision");
        }
        HpFloat(x)
    }

    pub fn from_rational(q: &BigRational, bits: usize) -> Self {
        let guard = bits + 64;
        let n = HpFloat::from_bigint(q.numer(), guard);
        let d = HpFloat::from_bigint(q.denom(), guard);
        let mut x = n.0.div(&d.0, guard, RM);
        x.set_precision(bits.max(SMALL), RM).expect("set precision");
        HpFloat(x)
    }

    pub fn parse(s: &str, bits: usize) -> Option<Self> {
        let x = with_cc(|cc| BigFloat::parse(s, Radix::Dec, bits.max(SMALL), RM, cc));
        if x.is_nan() {
            None
        } else {
            Some(HpFloat(x))
        }
    }

    pub fn bits(&self) -> usize {
        self.0.mantissa_max_bit_len().unwrap_or(SMALL)
    }

    pub fn with_bits(&self, bits: usize) -> Self {
        let mut x = self.0.clone();
        if x.mantissa_max_bit_len().is_some() {
            x.set_precision(bits.max(SMALL), RM).expect("set precision");
        }
        HpFloat(x)
    }

    fn p2(&self, o: &Self) -> usize {
        self.bits().max(o.bits())
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        HpFloat(self.0.abs())
    }

    pub fn sqrt(&self) -> Self {
        HpFloat(self.0.sqrt(self.bits(), RM))
    }

    pub fn exp(&self) -> Self {
        let p = self.bits();
        HpFloat(with_cc(|cc| self.0.exp(p, RM, cc)))
    }

    pub fn ln(&self) -> Self {
        let p = self.bits();
        HpFloat(with_cc(|cc| self.0.ln(p, RM, cc)))
    }

    pub fn sin(&self) -> Self {
        let p = self.bits();
        HpFloat(with_cc(|cc| self.0.sin(p, RM, cc)))
    }

    pub fn cos(&self) -> Self {
        let p = self.bits();
        HpFloat(with_cc(|cc| self.0.cos(p, RM, cc)))
    }

    pub fn atan(&self) -> Self {
        let p = self.bits();
        HpFloat(with_cc(|cc| self.0.atan(p, RM, cc)))
    }

    pub fn powi(&self, n: u32) -> Self {
        HpFloat(self.0.powi(n as usize, self.bits(), RM))
    }

    pub fn pi(bits: usize) -> Self {
        let p = bits.max(SMALL);
        HpFloat(with_cc(|cc| cc.pi(p, RM)))
    }

    pub fn floor(&self) -> Self {
        HpFloat(self.0.floor())
    }

    /// Exponent `e` with |x| in [2^(e-1), 2^e); `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        if self.0.is_zero() {
            None
        } else {
            self.0.exponent()
        }
    }

    /// Truncating conversion from the leading word.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf() {
            return if self.0.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let Some((m, _, s, e, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        let top = *m.last().unwrap_or(&0);
        if top == 0 {
            return 0.0;
        }
        let mut v = top as f64 / 18446744073709551616.0;
        let mut e = e;
        while e > 0 {
            let k = e.min(512);
            v *= 2f64.powi(k);
            e -= k;
        }
        while e < 0 {
            let k = (-e).min(512);
            v /= 2f64.powi(k);
            e += k;
        }
        if s == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Exact value as a rational (the mantissa is a dyadic fraction).
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.0.is_zero() {
            return Some(BigRational::zero());
        }
        let (m, _, s, e, _) = self.0.as_raw_parts()?;
        let mut num = BigInt::from_slice(
            BigSign::Plus,
            &m.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<u32>>(),
        );
        if s == Sign::Neg {
            num = -num;
        }
        let shift = e as i64 - 64 * m.len() as i64;
        Some(if shift >= 0 {
            BigRational::from_integer(num << shift as usize)
        } else {
            BigRational::new(num, BigInt::one() << (-shift) as usize)
        })
    }

    /// Scientific notation with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let bits = digits_to_bits(digits as u32 + 2);
        let x = self.with_bits(bits);
        let s = with_cc(|cc| x.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
        truncate_sci(&s, digits)
    }

    pub fn inner(&self) -> &BigFloat {
        &self.0
    }
}

fn truncate_sci(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let neg = mant.starts_with('-');
    let body = mant.trim_start_matches('-');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let mut count = 0;
    for c in body.chars() {
        if c == '.' {
            out.push(c);
            continue;
        }
        if count >= digits {
            break;
        }
        out.push(c);
        count += 1;
    }
    if out.ends_with('.') {
        out.pop();
    }
    out.push_str(exp);
    out
}

impl fmt::Debug for HpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(30))
    }
}

impl fmt::Display for HpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(30);
        write!(f, "{}", self.to_sci(d))
    }
}

impl PartialEq for HpFloat {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}

impl PartialOrd for HpFloat {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&o.0)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl $tr for HpFloat {
            type Output = HpFloat;
            fn $f(self, o: HpFloat) -> HpFloat {
                let p = self.p2(&o);
                HpFloat(self.0.$m(&o.0, p, RM))
            }
        }
        impl<'a> $tr<&'a HpFloat> for HpFloat {
            type Output = HpFloat;
            fn $f(self, o: &'a HpFloat) -> HpFloat {
                let p = self.p2(o);
                HpFloat(self.0.$m(&o.0, p, RM))
            }
        }
        impl<'a> $tr<&'a HpFloat> for &'a HpFloat {
            type Output = HpFloat;
            fn $f(self, o: &'a HpFloat) -> HpFloat {
                let p = self.p2(o);
                HpFloat(self.0.$m(&o.0, p, RM))
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Rem for HpFloat {
    type Output = HpFloat;
    fn rem(self, o: HpFloat) -> HpFloat {
        let q = (&self / &o).0.int();
        let q = HpFloat(q);
        &self - &(&q * &o)
    }
}

impl Neg for HpFloat {
    type Output = HpFloat;
    fn neg(self) -> HpFloat {
        HpFloat(-self.0)
    }
}

impl Neg for &HpFloat {
    type Output = HpFloat;
    fn neg(self) -> HpFloat {
        HpFloat(-&self.0)
    }
}

impl Zero for HpFloat {
    fn zero() -> Self {
        HpFloat::from_i64(0, SMALL)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for HpFloat {
    fn one() -> Self {
        HpFloat::from_i64(1, SMALL)
    }
}

impl Num for HpFloat {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> std::result::Result<Self, String> {
        if radix != 10 {
            return Err("only radix 10 is supported".into());
        }
        HpFloat::parse(s, 256).ok_or_else(|| format!("cannot parse {s:?}"))
    }
}

impl Signed for HpFloat {
    fn abs(&self) -> Self {
        HpFloat::abs(self)
    }
    fn abs_sub(&self, o: &Self) -> Self {
        if self <= o {
            Self::zero()
        } else {
            self - o
        }
    }
    fn signum(&self) -> Self {
        if self.0.is_zero() {
            Self::zero()
        } else if self.0.is_negative() {
            -Self::one()
        } else {
            Self::one()
        }
    }
    fn is_positive(&self) -> bool {
        self.0.is_positive() && !self.0.is_zero()
    }
    fn is_negative(&self) -> bool {
        HpFloat::is_negative(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_round_trip() {
        let b = digits_to_bits(50);
        let x = HpFloat::from_i64(1, b) / HpFloat::from_i64(3, b);
        let y = &x * &HpFloat::from_i64(3, b);
        let err = (&y - &HpFloat::one()).abs();
        assert!(err.to_f64() < 1e-49);
        assert!((x.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn bigint_and_rational() {
        let big = BigInt::from(10u32).pow(40) + BigInt::from(7);
        let x = HpFloat::from_bigint(&big, 256);
        assert_eq!(x.to_rational().unwrap(), BigRational::from_integer(big));
        let q = BigRational::new(BigInt::from(-22), BigInt::from(7));
        let y = HpFloat::from_rational(&q, 128);
        assert!((y.to_f64() + 22.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn transcendental_sanity() {
        let b = 256;
        let pi = HpFloat::pi(b);
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let one = HpFloat::from_i64(1, b);
        assert!((one.exp().ln() - one).abs().to_f64() < 1e-70);
        assert!(HpFloat::from_f64(0.5, b).sin().to_f64() - 0.5f64.sin() < 1e-16);
    }

    #[test]
    fn to_f64_extremes() {
        assert_eq!(HpFloat::from_f64(1e300, 128).to_f64(), 1e300);
        assert_eq!(HpFloat::from_f64(-3e-300, 128).to_f64(), -3e-300);
        assert_eq!(HpFloat::zero().to_f64(), 0.0);
    }

    #[test]
    fn sci_format() {
        let x = HpFloat::from_f64(-12345.678, 128);
        assert_eq!(x.to_sci(5), "-1.2345e+4");
    }
}
