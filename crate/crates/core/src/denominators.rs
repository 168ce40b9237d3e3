//! Exact denominators D_{m,n,r} of X_{m,n,r}, the quadratic content
//! N_{d,m,n,r}, and the lower bounds they satisfy.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::path::Path;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HmError, Result};
use crate::hp::HpFloat;
use crate::hypg::{x_poly, HypgIndex};
use crate::valuation::{factorize, is_prime, mod_inverse, small_primes, vp_bigint, vp_factorial, vp_u64};

pub use crate::hypg::pochhammer_ratio;
pub use crate::valuation::{core, legendre_valuation_gap};

pub const DEFAULT_EXACT_CAP: u64 = 5000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenomResult {
    pub value: BigInt,
    pub factorization: BTreeMap<u64, u32>,
}

impl DenomResult {
    fn from_factors(factorization: BTreeMap<u64, u32>) -> Self {
        let value = factorization
            .iter()
            .fold(BigInt::one(), |acc, (&p, &e)| acc * BigInt::from(p).pow(e));
        DenomResult { value, factorization }
    }

    /// Product of p^e over primes with `keep(p)`.
    pub fn part(&self, keep: impl Fn(u64) -> bool) -> BigInt {
        self.factorization
            .iter()
            .filter(|(&p, _)| keep(p))
            .fold(BigInt::one(), |acc, (&p, &e)| acc * BigInt::from(p).pow(e))
    }

    pub fn ln(&self) -> f64 {
        self.factorization.iter().map(|(&p, &e)| e as f64 * (p as f64).ln()).sum()
    }
}

fn check_cap(idx: &HypgIndex, cap: u64) -> Result<HypgIndex> {
    let idx = HypgIndex::new(idx.m, idx.n, idx.r)?;
    if idx.r > cap {
        return Err(HmError::CapExceeded { r: idx.r, cap });
    }
    Ok(idx)
}

/// v_p(D) from the four families of factors in the coefficient ratio.
///
/// The ratio c_i / c_{i-1} is (r-i+1)(n(r-i+1)+m) / ((ni-m) i). Each family
/// is divisible by p on a single residue class of i, so only about 4r/p
/// positions contribute; v_p(D) is minus the lowest prefix sum.
fn vp_denominator(idx: &HypgIndex, p: u64) -> u32 {
    let (m, n, r) = (idx.m, idx.n, idx.r);
    let mut ev: Vec<(u64, i32)> = Vec::new();
    let mut walk = |class: u64, sign: i32, val: &dyn Fn(u64) -> u64| {
        let mut i = if class == 0 { p } else { class };
        while i <= r {
            let v = vp_u64(val(i), p) as i32;
            if v > 0 {
                ev.push((i, sign * v));
            }
            i += p;
        }
    };
    walk((r + 1) % p, 1, &|i| r - i + 1);
    walk(0, -1, &|i| i);
    if n % p != 0 {
        let ninv = mod_inverse((n % p) as i64, p as i64).expect("p does not divide n") as u64;
        let t = (m % p) * ninv % p;
        walk((r + 1 + t) % p, 1, &|i| n * (r - i + 1) + m);
        walk(t, -1, &|i| n * i - m);
    }
    ev.sort_unstable();
    let (mut acc, mut low, mut k) = (0i32, 0i32, 0usize);
    while k < ev.len() {
        let i = ev[k].0;
        while k < ev.len() && ev[k].0 == i {
            acc += ev[k].1;
            k += 1;
        }
        low = low.min(acc);
    }
    (-low) as u32
}

fn denom_cache() -> &'static RwLock<HashMap<HypgIndex, Arc<DenomResult>>> {
    static CACHE: OnceLock<RwLock<HashMap<HypgIndex, Arc<DenomResult>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

pub fn d_mnr(idx: &HypgIndex) -> Result<Arc<DenomResult>> {
    d_mnr_capped(idx, DEFAULT_EXACT_CAP)
}

/// D_{m,n,r}, memoized.
pub fn d_mnr_capped(idx: &HypgIndex, cap: u64) -> Result<Arc<DenomResult>> {
    let idx = check_cap(idx, cap)?;
    if let Some(hit) = denom_cache().read().expect("denominator cache").get(&idx) {
        return Ok(hit.clone());
    }
    let res = Arc::new(d_mnr_uncached(&idx));
    let mut w = denom_cache().write().expect("denominator cache");
    if w.len() > 200_000 {
        w.clear();
    }
    w.insert(idx, res.clone());
    Ok(res)
}

pub fn d_mnr_uncached(idx: &HypgIndex) -> DenomResult {
    let mut f = BTreeMap::new();
    for p in small_primes(idx.n * idx.r) {
        let e = vp_denominator(idx, p);
        if e > 0 {
            f.insert(p, e);
        }
    }
    DenomResult::from_factors(f)
}

/// D_{m,n,r} as the lcm of the reduced coefficient denominators.
pub fn d_mnr_lcm(idx: &HypgIndex) -> Result<BigInt> {
    Ok(x_poly(idx)?.denominator_lcm())
}

/// Sequence g_j = D [w^j] X(1 - w), exact integers.
pub fn shifted_coeffs(idx: &HypgIndex) -> Result<Vec<BigInt>> {
    let d = d_mnr(idx)?;
    let (m, n, r) = (idx.m as i64, idx.n as i64, idx.r as i64);
    let x1 = crate::hypg::x_at_one(idx)? * BigRational::from_integer(d.value.clone());
    debug_assert!(x1.is_integer());
    let mut g = x1.to_integer();
    let mut out = Vec::with_capacity(r as usize + 1);
    out.push(g.clone());
    for j in 0..r {
        let num = BigInt::from(-(r - j) * (n * (r - j) + m));
        let den = BigInt::from(n * (j + 1) * (2 * r - j));
        let (q, rem) = (g * num).div_rem(&den);
        debug_assert!(rem.is_zero());
        g = q;
        out.push(g.clone());
    }
    Ok(out)
}

/// Polynomial (1/common_denominator) sum (u_k + v_k sqrt(d0)) z^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadCoeffPoly {
    pub d0: i64,
    pub coeffs: Vec<(BigInt, BigInt)>,
    pub common_denominator: BigInt,
}

/// D X(1 - sqrt(d) z) with sqrt(d) = s sqrt(core(d)), s > 0.
pub fn expand_shifted(idx: &HypgIndex, d: i64) -> Result<QuadCoeffPoly> {
    let (d0, s) = crate::valuation::core_split(d)?;
    let g = shifted_coeffs(idx)?;
    let (sb, d0b) = (BigInt::from(s), BigInt::from(d0));
    let mut spow = BigInt::one();
    let mut dpow = BigInt::one();
    let mut coeffs = Vec::with_capacity(g.len());
    for (j, gj) in g.iter().enumerate() {
        let c = gj * &spow * &dpow;
        if j % 2 == 0 {
            coeffs.push((c, BigInt::zero()));
        } else {
            coeffs.push((BigInt::zero(), c));
            dpow *= &d0b;
        }
        spow *= &sb;
    }
    Ok(QuadCoeffPoly { d0, coeffs, common_denominator: d_mnr(idx)?.value.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumeratorResult {
    pub n_value: BigInt,
    pub d1: u64,
    pub d2: u64,
}

pub fn d1_d2(d: i64, n: u64) -> (u64, u64) {
    let n2 = n * n;
    let ad = d.unsigned_abs();
    let d1 = ad.gcd(&n2);
    let d2 = (ad / d1).gcd(&n2);
    (d1, d2)
}

/// Largest N with (D/N) X(1 - sqrt(d) z) in Z[sqrt(core d)][z].
pub fn n_dmnr(idx: &HypgIndex, d: i64) -> Result<NumeratorResult> {
    check_cap(idx, DEFAULT_EXACT_CAP)?;
    if d == 0 {
        return Err(HmError::Domain("d must be nonzero".into()));
    }
    let q = expand_shifted(idx, d)?;
    let n_value = q.coeffs.iter().fold(BigInt::zero(), |acc, (u, v)| acc.gcd(u).gcd(v));
    let (d1, d2) = d1_d2(d, idx.n);
    Ok(NumeratorResult { n_value, d1, d2 })
}

/// Worst case over d of N_{d,n}^r / N_{d,m,n,r}.
///
/// For p | n the p-part depends only on e = v_p(d); it is maximized over e
/// up to saturation of min(e/2, v_p(n) + 1/(p-1)). Primes not dividing n
/// contribute the inverse of the p-part of gcd_j g_j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorstNumerator {
    /// (p, exponent of p in the ratio, maximizing e = v_p(d))
    pub n_part: Vec<(u64, BigRational, u32)>,
    pub coprime_content: BigInt,
}

impl WorstNumerator {
    pub fn ln(&self) -> f64 {
        let a: f64 = self
            .n_part
            .iter()
            .map(|(p, e, _)| e.to_f64().unwrap_or(0.0) * (*p as f64).ln())
            .sum();
        a - crate::valuation::bigint_to_f64_ln(&self.coprime_content)
    }

    /// A d attaining the worst case.
    pub fn witness_d(&self) -> i64 {
        self.n_part.iter().map(|(p, _, e)| (*p as i64).pow(*e)).product()
    }
}

pub fn worst_numerator(idx: &HypgIndex) -> Result<WorstNumerator> {
    let g = shifted_coeffs(idx)?;
    let content = g.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let mut coprime = content.clone();
    let r = idx.r as i64;
    let mut n_part = Vec::new();
    for (p, vn) in factorize(idx.n) {
        let vg: Vec<u64> = g.iter().map(|x| vp_bigint(x, p)).collect();
        coprime /= BigInt::from(p).pow(vp_bigint(&coprime, p) as u32);
        let cap = BigRational::new(BigInt::from(vn as i64 * (p as i64 - 1) + 1), BigInt::from(p as i64 - 1));
        let sat = if p == 2 { 2 * vn + 2 } else { 2 * vn + 1 };
        let mut best: Option<(BigRational, u32)> = None;
        for e in 0..=sat {
            let half = BigRational::new(BigInt::from(e), BigInt::from(2));
            let lead = BigRational::from_integer(r.into()) * half.min(cap.clone());
            let low = vg
                .iter()
                .enumerate()
                .map(|(j, &v)| v + (j as u64 * e as u64) / 2)
                .min()
                .unwrap_or(0);
            let val = lead - BigRational::from_integer(BigInt::from(low));
            if best.as_ref().is_none_or(|(b, _)| val > *b) {
                best = Some((val, e));
            }
        }
        let (val, e) = best.expect("at least e = 0");
        n_part.push((p, val, e));
    }
    Ok(WorstNumerator { n_part, coprime_content: coprime.abs() })
}

/// Part (b) table: (n, d1, d2) with D > d1 d2^r.
pub const LB1_TABLE: [(u64, &str, &str); 6] = [
    (3, "0.08", "2.1"),
    (4, "0.02", "3.77"),
    (5, "0.3", "2.54"),
    (6, "0.3", "10.9"),
    (7, "0.7", "2.63"),
    (8, "0.2", "5.53"),
];

pub fn parse_decimal(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let num: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
    BigRational::new(num, BigInt::from(10).pow(frac.len() as u32))
}

pub fn lb1_constants(n: u64) -> Option<(BigRational, BigRational)> {
    LB1_TABLE
        .iter()
        .find(|row| row.0 == n)
        .map(|row| (parse_decimal(row.1), parse_decimal(row.2)))
}

/// (n/4)^r prod_{p | n} p^(v_p((2r)!) - v_p(r!)).
pub fn lb1a_bound(idx: &HypgIndex) -> BigRational {
    let base = num_traits::pow::pow(BigRational::new(idx.n.into(), 4.into()), idx.r as usize);
    factorize(idx.n).iter().fold(base, |acc, &(p, _)| {
        let e = vp_factorial(2 * idx.r, p) - vp_factorial(idx.r, p);
        acc * BigRational::from_integer(BigInt::from(p).pow(e as u32))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lb1Check {
    pub part_a: bool,
    /// `None` outside 3 <= n <= 8.
    pub part_b: Option<bool>,
}

impl Lb1Check {
    pub fn ok(&self) -> bool {
        self.part_a && self.part_b.unwrap_or(true)
    }
}

pub fn denom_lb1_check(idx: &HypgIndex) -> Result<Lb1Check> {
    let d = BigRational::from_integer(d_mnr(idx)?.value.clone());
    let a = lb1a_bound(idx);
    let part_a = if idx.r == 0 { d >= a } else { d > a };
    let part_b = lb1_constants(idx.n).map(|(c1, c2)| d > c1 * num_traits::pow::pow(c2, idx.r as usize));
    Ok(Lb1Check { part_a, part_b })
}

#[derive(Clone, Debug)]
pub struct Lb2Check {
    pub rhs: HpFloat,
    pub ok: bool,
}

/// D^2 (m/n)...(r+m/n)/((r+1)...(2r+1)) > m/(60n).
pub fn denom_lb2_check(idx: &HypgIndex) -> Result<Lb2Check> {
    if idx.r == 0 {
        return Err(HmError::Constraint("the absolute bound is stated for r >= 1".into()));
    }
    let d = BigRational::from_integer(d_mnr(idx)?.value.clone());
    let rhs = &d * &d * pochhammer_ratio(idx);
    let ok = rhs > BigRational::new(idx.m.into(), (60 * idx.n).into());
    Ok(Lb2Check { rhs: HpFloat::from_rational(&rhs, 192), ok })
}

/// (m/n)...(r+m/n)/((r+1)...(2r+1)) > 4^(-r) sqrt(m/(8nr)), compared squared.
pub fn gamma1_check(idx: &HypgIndex) -> bool {
    if idx.r == 0 {
        return true;
    }
    let p = pochhammer_ratio(idx);
    let rhs = BigRational::new(idx.m.into(), (8 * idx.n * idx.r).into())
        / BigRational::from_integer(BigInt::from(16).pow(idx.r as u32));
    &p * &p > rhs
}

const CACHE_MAGIC: &[u8; 4] = b"HMD1";

/// Binary cache of denominators.
///
/// Header: the bytes `HMD1`. Each record: u32 byte length, then m, n, r as
/// u64, a u32 factor count and that many (u64 prime, u32 exponent) pairs.
/// All integers little-endian.
pub fn write_cache(path: &Path, entries: &[(HypgIndex, DenomResult)]) -> Result<()> {
    let mut out = Vec::new();
    out.extend_from_slice(CACHE_MAGIC);
    for (idx, d) in entries {
        let mut rec = Vec::new();
        for v in [idx.m, idx.n, idx.r] {
            rec.extend_from_slice(&v.to_le_bytes());
        }
        rec.extend_from_slice(&(d.factorization.len() as u32).to_le_bytes());
        for (&p, &e) in &d.factorization {
            rec.extend_from_slice(&p.to_le_bytes());
            rec.extend_from_slice(&e.to_le_bytes());
        }
        out.extend_from_slice(&(rec.len() as u32).to_le_bytes());
        out.extend_from_slice(&rec);
    }
    std::fs::File::create(path)?.write_all(&out)?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<Vec<(HypgIndex, DenomResult)>> {
    let mut buf = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut buf)?;
    if buf.len() < 4 || &buf[..4] != CACHE_MAGIC {
        return Err(HmError::Parse("missing HMD1 header".into()));
    }
    let bad = || HmError::Parse("truncated denominator cache record".into());
    let mut pos = 4;
    let take = |pos: &mut usize, k: usize| -> Result<&[u8]> {
        let s = buf.get(*pos..*pos + k).ok_or_else(bad)?;
        *pos += k;
        Ok(s)
    };
    let u64_at = |s: &[u8]| u64::from_le_bytes(s.try_into().expect("8 bytes"));
    let u32_at = |s: &[u8]| u32::from_le_bytes(s.try_into().expect("4 bytes"));
    let mut out = Vec::new();
    while pos < buf.len() {
        let len = u32_at(take(&mut pos, 4)?) as usize;
        let end = pos + len;
        let m = u64_at(take(&mut pos, 8)?);
        let n = u64_at(take(&mut pos, 8)?);
        let r = u64_at(take(&mut pos, 8)?);
        let count = u32_at(take(&mut pos, 4)?);
        let mut f = BTreeMap::new();
        for _ in 0..count {
            let p = u64_at(take(&mut pos, 8)?);
            let e = u32_at(take(&mut pos, 4)?);
            if !is_prime(p) {
                return Err(HmError::Parse(format!("cache factor {p} is not prime")));
            }
            f.insert(p, e);
        }
        if pos != end {
            return Err(bad());
        }
        out.push((HypgIndex::new(m, n, r)?, DenomResult::from_factors(f)));
    }
    Ok(out)
}

/// Seed the in-memory cache from a file.
pub fn load_cache(path: &Path) -> Result<usize> {
    let entries = read_cache(path)?;
    let mut w = denom_cache().write().expect("denominator cache");
    let k = entries.len();
    for (idx, d) in entries {
        w.insert(idx, Arc::new(d));
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn idx(m: u64, n: u64, r: u64) -> HypgIndex {
        HypgIndex::new(m, n, r).unwrap()
    }

    #[test]
    fn event_walk_matches_lcm() {
        for n in 3..=14u64 {
            for m in crate::hypg::admissible_m(n) {
                for r in 0..=40 {
                    let id = idx(m, n, r);
                    assert_eq!(d_mnr_uncached(&id).value, d_mnr_lcm(&id).unwrap(), "{m} {n} {r}");
                }
            }
        }
    }

    #[test]
    fn r_one_closed_form() {
        for n in 3..=30u64 {
            for m in crate::hypg::admissible_m(n) {
                let want = if m % 2 == 1 && n % 2 == 1 { (n - m) / 2 } else { n - m };
                assert_eq!(d_mnr(&idx(m, n, 1)).unwrap().value, BigInt::from(want));
            }
        }
        assert_eq!(d_mnr(&idx(1, 3, 0)).unwrap().value, BigInt::one());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(d_mnr_capped(&idx(1, 3, 11), 10), Err(HmError::CapExceeded { .. })));
    }

    #[test]
    fn n_example_r1() {
        // D_{1,3,1} = 1 and X(1 - z) = 3 - 2z
        assert_eq!(shifted_coeffs(&idx(1, 3, 1)).unwrap(), vec![BigInt::from(3), BigInt::from(-2)]);
        let nr = n_dmnr(&idx(1, 3, 1), 1).unwrap();
        assert_eq!(nr.n_value, BigInt::one());
        // d = 9: X(1 - 3z) = 3 - 6z
        assert_eq!(n_dmnr(&idx(1, 3, 1), 9).unwrap().n_value, BigInt::from(3));
        let nr = n_dmnr(&idx(1, 3, 0), 7).unwrap();
        assert_eq!(nr.n_value, BigInt::one());
    }

    // independent: expand sum c_k (1 - w)^k with binomials
    fn shifted_oracle(id: &HypgIndex) -> Vec<BigRational> {
        let x = x_poly(id).unwrap();
        let one_minus: Poly<BigRational> = Poly::new(vec![BigRational::one(), -BigRational::one()]);
        let mut acc = Poly::new(vec![BigRational::zero()]);
        let mut pw = Poly::new(vec![BigRational::one()]);
        for c in &x.coeffs {
            acc = acc.add(&pw.scale(c));
            pw = pw.mul(&one_minus);
        }
        acc.coeffs
    }

    #[test]
    fn shifted_coefficients_match_binomial_oracle() {
        for (m, n) in [(1, 3), (2, 5), (1, 4), (5, 12)] {
            for r in 0..=15 {
                let id = idx(m, n, r);
                let d = BigRational::from_integer(d_mnr(&id).unwrap().value.clone());
                let g = shifted_coeffs(&id).unwrap();
                let o = shifted_oracle(&id);
                for (a, b) in g.iter().zip(o.iter()) {
                    assert_eq!(BigRational::from_integer(a.clone()), b * &d);
                }
            }
        }
    }

    #[test]
    fn n_by_sample_points() {
        // (m=1,n=3,r=2), d=9: sqrt d = 3, so D X(1 - 3z) has integer coefficients;
        // recover them from values at z = 0, 1, 2 and take the gcd
        let id = idx(1, 3, 2);
        let x = x_poly(&id).unwrap();
        let d = BigRational::from_integer(d_mnr(&id).unwrap().value.clone());
        let vals: Vec<BigRational> = (0..3)
            .map(|z| &d * x.eval(&(BigRational::one() - BigRational::from_integer((3 * z).into()))))
            .collect();
        let c0 = vals[0].clone();
        let c2 = (&vals[2] - &vals[1] * BigRational::from_integer(2.into()) + &vals[0]) / BigRational::from_integer(2.into());
        let c1 = &vals[1] - &c0 - &c2;
        let g = [c0, c1, c2].iter().fold(BigInt::zero(), |acc, c| acc.gcd(&c.to_integer()));
        assert_eq!(n_dmnr(&id, 9).unwrap().n_value, g);
    }

    #[test]
    fn n_is_maximal() {
        for d in [1i64, 2, 9, -3, 12, 36, -48] {
            let id = idx(1, 3, 7);
            let q = expand_shifted(&id, d).unwrap();
            let nv = n_dmnr(&id, d).unwrap().n_value;
            for (u, v) in &q.coeffs {
                assert!((u % &nv).is_zero() && (v % &nv).is_zero());
            }
            for (p, _) in factorize(nv.to_u64().unwrap()) {
                let pn = &nv * BigInt::from(p);
                assert!(q.coeffs.iter().any(|(u, v)| !(u % &pn).is_zero() || !(v % &pn).is_zero()));
            }
        }
    }

    #[test]
    fn worst_numerator_witness_is_attained() {
        for (m, n) in [(1u64, 3u64), (1, 4), (1, 6), (3, 8), (1, 9), (5, 12)] {
            for r in [1u64, 2, 5, 13, 30] {
                let id = idx(m, n, r);
                let w = worst_numerator(&id).unwrap();
                let d = w.witness_d();
                let nv = n_dmnr(&id, d).unwrap().n_value;
                let nd = crate::constants::n_dn(d, n).ln();
                let exact = r as f64 * nd - crate::valuation::bigint_to_f64_ln(&nv);
                assert!((exact - w.ln()).abs() < 1e-9, "{m} {n} {r}: {exact} vs {}", w.ln());
                // no other small d does better
                for dd in 1..=(n * n * 4) as i64 {
                    let nv = n_dmnr(&id, dd).unwrap().n_value;
                    let v = r as f64 * crate::constants::n_dn(dd, n).ln() - crate::valuation::bigint_to_f64_ln(&nv);
                    assert!(v <= w.ln() + 1e-9, "d={dd}");
                }
            }
        }
    }

    #[test]
    fn lb_checks_small() {
        assert!(denom_lb1_check(&idx(1, 3, 0)).unwrap().ok());
        assert!(denom_lb1_check(&idx(1, 5, 10)).unwrap().part_a);
        assert_eq!(denom_lb1_check(&idx(1, 6, 50)).unwrap().part_b, Some(true));
        assert!(denom_lb2_check(&idx(2, 5, 7)).unwrap().ok);
        assert!(denom_lb2_check(&idx(1, 3, 0)).is_err());
        assert!(gamma1_check(&idx(1, 3, 13)));
    }

    #[test]
    fn pinch_at_r13() {
        let d = d_mnr(&idx(1, 3, 13)).unwrap().value.clone();
        let d = BigRational::from_integer(d);
        let p = num_traits::pow::pow(parse_decimal("2.1"), 13);
        assert!(parse_decimal("0.08") * &p <= d && d < parse_decimal("0.1") * p);
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("hmd1-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("d.bin");
        let entries: Vec<_> = (0..20).map(|r| (idx(2, 7, r), d_mnr_uncached(&idx(2, 7, r)))).collect();
        write_cache(&path, &entries).unwrap();
        assert_eq!(read_cache(&path).unwrap(), entries);
        std::fs::write(&path, b"HMD0").unwrap();
        assert!(read_cache(&path).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }
}
