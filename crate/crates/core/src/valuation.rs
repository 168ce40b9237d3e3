//! Elementary number theory: primality, factorization, p-adic valuations and
//! Legendre's formula.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{HmError, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn omega(n: u64) -> u32 {
    factorize(n).len() as u32
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// v_p(x) for x != 0.
pub fn vp_u64(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut e = 0;
    while x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    e
}

pub fn vp_bigint(x: &BigInt, p: u64) -> u64 {
    if x.is_zero() {
        return u64::MAX;
    }
    let pb = BigInt::from(p);
    let mut y = x.abs();
    let mut e = 0;
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return e;
        }
        y = q;
        e += 1;
    }
}

/// Sum of base-p digits of n.
pub fn digit_sum(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// v_p(n!) via Legendre's digit-sum form (n - s_p(n)) / (p - 1).
pub fn vp_factorial(n: u64, p: u64) -> u64 {
    (n - digit_sum(n, p)) / (p - 1)
}

/// v_p(n!) via the floor sum over powers of p.
pub fn vp_factorial_floor_sum(n: u64, p: u64) -> u64 {
    let mut s = 0;
    let mut q = p;
    while q <= n {
        s += n / q;
        match q.checked_mul(p) {
            Some(v) => q = v,
            None => break,
        }
    }
    s
}

/// v_p((2r)!) - v_p(r!), computed both ways; the two must agree.
pub fn legendre_valuation_gap(p: u64, r: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(HmError::Constraint(format!("{p} is not prime")));
    }
    let a = vp_factorial(2 * r, p) - vp_factorial(r, p);
    let b = vp_factorial_floor_sum(2 * r, p) - vp_factorial_floor_sum(r, p);
    if a != b {
        return Err(HmError::Precision(format!("Legendre forms disagree at p={p}, r={r}")));
    }
    Ok(a)
}

/// Squarefree part of a nonzero integer, keeping the sign.
pub fn core(d: i64) -> Result<i64> {
    if d == 0 {
        return Err(HmError::Domain("core(0) is undefined".into()));
    }
    let mut c: i64 = d.signum();
    for (p, e) in factorize(d.unsigned_abs()) {
        if e % 2 == 1 {
            c *= p as i64;
        }
    }
    Ok(c)
}

/// (core, s) with d = s^2 * core and s > 0.
pub fn core_split(d: i64) -> Result<(i64, u64)> {
    let c = core(d)?;
    let s2 = (d / c) as u64;
    let s = (s2 as f64).sqrt().round() as u64;
    debug_assert_eq!(s * s, s2);
    Ok((c, s))
}

/// Inverse of a modulo n by extended gcd, normalized to [1, n-1].
pub fn mod_inverse(a: i64, n: i64) -> Option<i64> {
    let g = a.extended_gcd(&n);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(n))
}

/// Primes up to `limit` by a plain sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn bigint_to_f64_ln(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits < 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn factor_bigint_small(x: &BigInt, primes: &[u64]) -> (Vec<(u64, u64)>, BigInt) {
    let mut rest = x.abs();
    let mut out = Vec::new();
    for &p in primes {
        if rest.is_one() {
            break;
        }
        let e = vp_bigint(&rest, p);
        if e > 0 {
            rest /= BigInt::from(p).pow(e as u32);
            out.push((p, e));
        }
    }
    (out, rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000u64 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "{n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn legendre_gap_examples() {
        for r in 0..200 {
            assert_eq!(legendre_valuation_gap(2, r).unwrap(), r);
        }
        assert_eq!(legendre_valuation_gap(3, 4).unwrap(), 1);
        assert_eq!(legendre_valuation_gap(5, 0).unwrap(), 0);
        assert!(legendre_valuation_gap(9, 4).is_err());
    }

    #[test]
    fn core_examples() {
        assert_eq!(core(1).unwrap(), 1);
        assert_eq!(core(9).unwrap(), 1);
        assert_eq!(core(12).unwrap(), 3);
        assert_eq!(core(-12).unwrap(), -3);
        assert_eq!(core_split(-12).unwrap(), (-3, 2));
        assert!(core(0).is_err());
    }

    #[test]
    fn factor_helpers() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(omega(30), 3);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(vp_bigint(&BigInt::from(96), 2), 5);
        assert_eq!(small_primes(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
