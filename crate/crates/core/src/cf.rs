//! Continued fractions of high-precision reals, with a two-precision
//! stability check.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{HmError, Result};
use crate::hp::{digits_to_bits, HpFloat};

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    pub quotients: Vec<BigInt>,
    /// (p_k, q_k) for every convergent kept.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// True when expansion stopped because q exceeded the height.
    pub reached_height: bool,
}

fn floor_int(x: &HpFloat) -> BigInt {
    x.floor().to_rational().expect("finite").to_integer()
}

/// Expand `x` until the next convergent denominator would exceed `max_q`.
/// Terms whose denominators pass 10^((digits - 10)/2) are not trusted.
pub fn expand(x: &HpFloat, digits: u32, max_q: &BigInt) -> ContinuedFraction {
    let trust = BigInt::from(10u32).pow(digits.saturating_sub(10) / 2);
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    let mut quotients = Vec::new();
    let mut convergents = Vec::new();
    let mut y = x.clone();
    loop {
        let a = floor_int(&y);
        let p = &a * &p0 + &p1;
        let q = &a * &q0 + &q1;
        if &q > max_q {
            return ContinuedFraction { quotients, convergents, reached_height: true };
        }
        if q > trust {
            return ContinuedFraction { quotients, convergents, reached_height: false };
        }
        quotients.push(a.clone());
        convergents.push((p.clone(), q.clone()));
        (p1, q1, p0, q0) = (p0, q0, p, q);
        let frac = &y - &HpFloat::from_bigint(&a, y.bits());
        if frac.is_zero() {
            return ContinuedFraction { quotients, convergents, reached_height: true };
        }
        y = HpFloat::from_i64(1, y.bits()) / frac;
    }
}

/// Expand at `digits` and `2 digits`; the lists must agree up to `max_q`.
pub fn stable_expand(
    value_at: impl Fn(usize) -> HpFloat,
    digits: u32,
    max_q: &BigInt,
) -> Result<ContinuedFraction> {
    let lo = expand(&value_at(digits_to_bits(digits)), digits, max_q);
    let hi = expand(&value_at(digits_to_bits(2 * digits)), 2 * digits, max_q);
    if !lo.reached_height {
        return Err(HmError::Precision(format!("{digits} digits do not reach q = {max_q}")));
    }
    if lo.convergents != hi.convergents {
        return Err(HmError::Precision(format!(
            "convergents differ between {digits} and {} digits",
            2 * digits
        )));
    }
    Ok(lo)
}

/// (a/b)^(m/n) for positive integers a, b.
pub fn rational_power(a: &BigInt, b: &BigInt, m: u32, n: u32, bits: usize) -> Result<HpFloat> {
    if !a.is_positive() || !b.is_positive() {
        return Err(HmError::Domain("a and b must be positive".into()));
    }
    let g = bits + 64;
    let x = HpFloat::from_bigint(a, g) / HpFloat::from_bigint(b, g);
    let l = x.ln() * HpFloat::from_i64(m as i64, g) / HpFloat::from_i64(n as i64, g);
    Ok(l.exp().with_bits(bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_all_twos() {
        let v = |b: usize| HpFloat::from_i64(2, b).sqrt();
        let cf = stable_expand(v, 60, &BigInt::from(10u64.pow(12))).unwrap();
        assert_eq!(cf.quotients[0], BigInt::from(1));
        assert!(cf.quotients[1..].iter().all(|a| *a == BigInt::from(2)));
        // Pell convergents
        assert!(cf.convergents.contains(&(BigInt::from(99), BigInt::from(70))));
    }

    #[test]
    fn rational_terminates() {
        let x = HpFloat::from_i64(43, 128) / HpFloat::from_i64(19, 128);
        let cf = expand(&x, 30, &BigInt::from(1000));
        assert_eq!(cf.convergents.last().unwrap(), &(BigInt::from(43), BigInt::from(19)));
    }

    #[test]
    fn cube_root_first_quotient() {
        // (10/9)^(1/3) = [1; 27, ...]
        let x = rational_power(&BigInt::from(10), &BigInt::from(9), 1, 3, 256).unwrap();
        let cf = expand(&x, 60, &BigInt::from(1000));
        assert_eq!(cf.quotients[..2], [BigInt::from(1), BigInt::from(27)]);
    }

    #[test]
    fn low_precision_detected() {
        let v = |b: usize| HpFloat::from_i64(3, b).sqrt();
        assert!(matches!(stable_expand(v, 30, &BigInt::from(10u64).pow(20)), Err(HmError::Precision(_))));
    }
}
