//! The constants C_n, D_n: an analytic phase choosing D_n and r_comp from
//! S(n,r) D^L(N,n,r), and an exact sweep over small r fixing C_n.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::denominators::{d1_d2, d_mnr, worst_numerator, DenomResult};
use crate::error::{HmError, Result};
use crate::hypg::{admissible_m, gamma_ratio_lower, gamma_ratio_upper, HypgIndex};
use crate::prime_tables::{shared_table, Side, ThetaBandTable};
use crate::valuation::{bigint_to_f64_ln, euler_phi, factorize, mod_inverse, omega, vp_factorial, vp_u64};

/// Outward margin for log-space comparisons.
pub const LOG_MARGIN: f64 = 1e-9;

/// prod p^(e_p) with exact rational exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerReal {
    pub factors: BTreeMap<u64, BigRational>,
}

impl PrimePowerReal {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn ln(&self) -> f64 {
        self.factors.iter().map(|(&p, e)| e.to_f64().unwrap_or(f64::NAN) * (p as f64).ln()).sum()
    }

    pub fn value(&self) -> f64 {
        self.factors.iter().map(|(&p, e)| (p as f64).powf(e.to_f64().unwrap_or(f64::NAN))).product()
    }

    pub fn powi(&self, k: u64) -> Self {
        let k = BigRational::from_integer(k.into());
        PrimePowerReal { factors: self.factors.iter().map(|(&p, e)| (p, e * &k)).collect() }
    }

    pub fn is_one(&self) -> bool {
        self.factors.values().all(|e| e.is_zero())
    }
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// mu_n = prod_{p | n} p^(1/(p-1)).
pub fn mu_n(n: u64) -> PrimePowerReal {
    PrimePowerReal { factors: factorize(n).into_iter().map(|(p, _)| (p, rat(1, p as i64 - 1))).collect() }
}

pub fn log_n_mu(n: u64) -> f64 {
    (n as f64).ln() + mu_n(n).ln()
}

/// N_{d,n} = prod_{p | n} p^min(v_p(d)/2, v_p(n) + 1/(p-1)).
pub fn n_dn(d: i64, n: u64) -> PrimePowerReal {
    let mut factors = BTreeMap::new();
    for (p, vn) in factorize(n) {
        let vd = if d == 0 { 0 } else { vp_u64(d.unsigned_abs(), p) };
        let e = rat(vd as i64, 2).min(rat(vn as i64 * (p as i64 - 1) + 1, p as i64 - 1));
        if !e.is_zero() {
            factors.insert(p, e);
        }
    }
    PrimePowerReal { factors }
}

/// pi/phi(n) sum_{j <= n/2, (j,n)=1} cot(pi j / n).
pub fn chud_rate(n: u64) -> f64 {
    let pi = std::f64::consts::PI;
    let s: f64 = (1..=n / 2).filter(|j| j.gcd(&n) == 1).map(|j| 1.0 / (pi * j as f64 / n as f64).tan()).sum();
    pi / euler_phi(n) as f64 * s
}

/// ln of the bound on N_{d,n}^r / N_{d,m,n,r}: the d-dependent product when
/// d is known, otherwise n mu_n r^omega(n).
pub fn numerator_bound_ln(d: Option<i64>, n: u64, r: u64) -> f64 {
    match d {
        Some(d) => {
            let (d1, d2) = d1_d2(d, n);
            let half = if r % 2 == 1 { 0.5 * (d1 as f64).ln() } else { 0.0 };
            half + factorize(d2).iter().map(|&(p, _)| legendre_excess(p, r) * (p as f64).ln()).sum::<f64>()
        }
        None => log_n_mu(n) + omega(n) as f64 * (r.max(1) as f64).ln(),
    }
}

pub fn numerator_bound(d: Option<i64>, n: u64, r: u64) -> f64 {
    numerator_bound_ln(d, n, r).exp()
}

/// r/(p-1) - v_p(r!).
fn legendre_excess(p: u64, r: u64) -> f64 {
    r as f64 / (p - 1) as f64 - vp_factorial(r, p) as f64
}

/// The sweep's first numerator estimate: d_1^(r/2 - floor(r/2)) bounded by n,
/// and the product taken over every prime of n.
pub fn numerator_estimate_ln(n: u64, r: u64) -> f64 {
    (n as f64).ln() + factorize(n).iter().map(|&(p, _)| legendre_excess(p, r) * (p as f64).ln()).sum::<f64>()
}

/// (n/2) e^(1/4) r^(1/2).
pub fn gamma_term_bound(n: u64, r: u64) -> f64 {
    n as f64 / 2.0 * 0.25f64.exp() * (r as f64).sqrt()
}

/// max(1, prod k/(k-nu), prod (k+nu)/k), exact.
pub fn gamma_term_exact(idx: &HypgIndex) -> BigRational {
    let a = gamma_ratio_lower(idx);
    let b = gamma_ratio_upper(idx);
    BigRational::one().max(a).max(b)
}

pub fn rational_ln(q: &BigRational) -> f64 {
    bigint_to_f64_ln(q.numer()) - bigint_to_f64_ln(q.denom())
}

/// Largest e with p^e <= x.
fn floor_log(p: u64, x: u64) -> u32 {
    let mut e = 0;
    let mut q = p;
    while q <= x {
        e += 1;
        match q.checked_mul(p) {
            Some(v) => q = v,
            None => break,
        }
    }
    e
}

fn isqrt(x: u64) -> u64 {
    let mut s = (x as f64).sqrt() as u64;
    while s * s > x {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= x {
        s += 1;
    }
    s
}

/// prod_{p <= sqrt(nr)} p^floor(log(nr)/log p), exact.
pub fn ds_bound_exact(n: u64, r: u64) -> BigInt {
    let x = n * r;
    crate::valuation::small_primes(isqrt(x))
        .into_iter()
        .fold(BigInt::one(), |acc, p| acc * BigInt::from(p).pow(floor_log(p, x)))
}

pub fn ds_bound_ln(n: u64, r: u64) -> f64 {
    let x = n * r;
    crate::valuation::small_primes(isqrt(x))
        .into_iter()
        .map(|p| floor_log(p, x) as f64 * (p as f64).ln())
        .sum()
}

pub fn ds_bound(n: u64, r: u64) -> f64 {
    ds_bound_ln(n, r).exp()
}

/// 2.033 (nr)^(1/2) + 1.017 (nr)^(1/3) + 4.156 (nr)^(1/4), the log of the
/// analytic small-prime bound.
pub fn ds_bound_analytic_ln(n: u64, r: u64) -> f64 {
    let x = (n * r) as f64;
    2.033 * x.sqrt() + 1.017 * x.cbrt() + 4.156 * x.powf(0.25)
}

pub fn ds_bound_analytic(n: u64, r: u64) -> f64 {
    ds_bound_analytic_ln(n, r).exp()
}

/// ln S(n,r) = ln(0.65 n^2 mu_n r^(omega+1/2)) + analytic small-prime term.
pub fn s_bound_ln(n: u64, r: u64) -> f64 {
    let nf = n as f64;
    (0.65 * nf * nf).ln() + mu_n(n).ln() + (omega(n) as f64 + 0.5) * (r as f64).ln() + ds_bound_analytic_ln(n, r)
}

pub fn s_bound(n: u64, r: u64) -> f64 {
    s_bound_ln(n, r).exp()
}

fn coprime_ells(n: u64) -> Vec<u64> {
    (1..=n / 2).filter(|l| l.gcd(&n) == 1).collect()
}

/// Validity of N: nr/(nN + n/2) >= sqrt(nr).
pub fn dl_valid(n: u64, r: u64, big_n: u64) -> bool {
    let x = (n * r) as f64;
    x / (n as f64 * big_n as f64 + n as f64 / 2.0) >= x.sqrt()
}

/// ln D^L(N, n, r) from the band envelopes.
pub fn dl_bound_ln(n: u64, r: u64, big_n: u64, bands: &ThetaBandTable) -> Result<f64> {
    if big_n == 0 || !dl_valid(n, r, big_n) {
        return Err(HmError::Constraint(format!(
            "N = {big_n} violates nr/(nN + n/2) >= sqrt(nr) at n = {n}, r = {r}"
        )));
    }
    if bands.n != n {
        return Err(HmError::Constraint(format!("band table is for n = {}, not {n}", bands.n)));
    }
    let x = (n * r) as f64;
    let nf = n as f64;
    let mut s = 0.0;
    for a in 0..big_n {
        for &l in &coprime_ells(n) {
            let lf = l as f64;
            let af = a as f64;
            s += bands.envelope(x / (nf * af + lf), Side::Upper)? - bands.envelope(x / (nf * af + nf - lf), Side::Lower)?;
        }
    }
    for &l in &coprime_ells(n) {
        s += bands.envelope(x / (nf * big_n as f64 + l as f64), Side::Upper)?;
    }
    Ok(s)
}

/// Smallest ln D^L(N, n, r) over the valid N <= n_max; `None` when even
/// N = 1 is invalid.
pub fn dl_bound_ln_best(n: u64, r: u64, n_max: u64, bands: &ThetaBandTable) -> Result<Option<f64>> {
    if !dl_valid(n, r, 1) {
        return Ok(None);
    }
    let x = (n * r) as f64;
    let nf = n as f64;
    let ells = coprime_ells(n);
    let mut pairs = 0.0;
    let mut best = f64::INFINITY;
    for big_n in 1..=n_max {
        if !dl_valid(n, r, big_n) {
            break;
        }
        let a = (big_n - 1) as f64;
        for &l in &ells {
            let lf = l as f64;
            pairs += bands.envelope(x / (nf * a + lf), Side::Upper)? - bands.envelope(x / (nf * a + nf - lf), Side::Lower)?;
        }
        let mut tail = 0.0;
        for &l in &ells {
            tail += bands.envelope(x / (nf * big_n as f64 + l as f64), Side::Upper)?;
        }
        best = best.min(pairs + tail);
    }
    Ok(Some(best))
}

/// First r at which N = 1 satisfies the validity condition.
pub fn analytic_start(n: u64) -> u64 {
    (1..).find(|&r| dl_valid(n, r, 1)).expect("valid for r >= 2.25 n")
}

/// Max over swept_to <= r < r_comp of ln(S(n,r) D^L(n,r)) - r ln D_n, with
/// its location.
pub fn analytic_tail(
    n: u64,
    log_dn: f64,
    swept_to: u64,
    r_comp: u64,
    n_max: u64,
    bands: &ThetaBandTable,
) -> Result<Option<(f64, u64)>> {
    let rs: Vec<u64> = (swept_to.max(1)..r_comp).collect();
    let vals: Vec<Result<(f64, u64)>> = rs
        .par_chunks(4096)
        .map(|chunk| {
            let mut best = (f64::NEG_INFINITY, 0);
            for &r in chunk {
                let dl = dl_bound_ln_best(n, r, n_max, bands)?.ok_or(HmError::NoValidPoint(format!(
                    "no valid N at n = {n}, r = {r}; sweep further"
                )))?;
                let v = s_bound_ln(n, r) + dl - r as f64 * log_dn;
                if v > best.0 {
                    best = (v, r);
                }
            }
            Ok(best)
        })
        .collect();
    let mut best: Option<(f64, u64)> = None;
    for v in vals {
        let v = v?;
        if best.is_none_or(|b| v.0 > b.0) {
            best = Some(v);
        }
    }
    Ok(best)
}

pub fn dl_bound(n: u64, r: u64, big_n: u64, bands: &ThetaBandTable) -> Result<f64> {
    Ok(dl_bound_ln(n, r, big_n, bands)?.exp())
}

/// Product of primes p > sqrt(nr), p = k_l mod n, in (nr/(nA+n-l), nr/(nA+l)].
pub fn dl_exact(idx: &HypgIndex) -> Result<BigInt> {
    Ok(dl_exact_primes(idx)?.into_iter().fold(BigInt::one(), |a, p| a * BigInt::from(p)))
}

pub fn dl_exact_primes(idx: &HypgIndex) -> Result<Vec<u64>> {
    let idx = HypgIndex::new(idx.m, idx.n, idx.r)?;
    let (m, n, r) = (idx.m, idx.n, idx.r);
    let x = n * r;
    if x == 0 {
        return Ok(Vec::new());
    }
    let table = shared_table(x.max(10_000))?;
    let root = isqrt(x);
    let mut out = Vec::new();
    for l in coprime_ells(n) {
        let linv = mod_inverse(l as i64, n as i64).expect("l coprime to n") as u64;
        let k = ((n - m % n) % n) * linv % n;
        let mut a = 0u64;
        loop {
            // (x/(nA+n-l), x/(nA+l)] over integers: (floor(x/(nA+n-l)), floor(x/(nA+l))]
            let hi = x / (n * a + l);
            if hi <= root {
                break;
            }
            let lo = (x / (n * a + n - l)).max(root);
            let s = table.primes.partition_point(|&p| (p as u64) <= lo);
            let e = table.primes.partition_point(|&p| (p as u64) <= hi);
            out.extend(table.primes[s..e].iter().map(|&p| p as u64).filter(|p| p % n == k));
            a += 1;
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub r_step: u64,
    pub r_max: u64,
    #[serde(rename = "N_max")]
    pub n_max: u64,
}

impl Grid {
    pub const DESK: Grid = Grid { r_step: 10_000, r_max: 1_000_000, n_max: 50 };
    pub const PAPER: Grid = Grid { r_step: 100_000, r_max: 50_000_000, n_max: 200 };
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnChoice {
    pub log_dn: f64,
    pub r_comp: u64,
    pub big_n: u64,
}

/// Grid argmin of log(S(n,r) D^L(N,n,r))/r; ties go to smaller r, then N.
pub fn choose_dn(n: u64, grid: &Grid, bands: &ThetaBandTable) -> Result<DnChoice> {
    if grid.r_step == 0 || grid.r_max < grid.r_step || grid.n_max == 0 {
        return Err(HmError::Constraint("empty grid".into()));
    }
    let rs: Vec<u64> = (1..=grid.r_max / grid.r_step).map(|i| i * grid.r_step).collect();
    let per_r: Vec<Result<Option<DnChoice>>> = rs
        .par_iter()
        .map(|&r| {
            let mut best: Option<DnChoice> = None;
            let ls = s_bound_ln(n, r);
            for big_n in 1..=grid.n_max {
                if !dl_valid(n, r, big_n) {
                    break;
                }
                let v = (ls + dl_bound_ln(n, r, big_n, bands)?) / r as f64;
                if best.is_none_or(|b| v < b.log_dn) {
                    best = Some(DnChoice { log_dn: v, r_comp: r, big_n });
                }
            }
            Ok(best)
        })
        .collect();
    let mut best: Option<DnChoice> = None;
    for c in per_r {
        if let Some(c) = c? {
            if best.is_none_or(|b| c.log_dn < b.log_dn) {
                best = Some(c);
            }
        }
    }
    best.ok_or_else(|| HmError::NoValidPoint(format!("no (r, N) on the grid satisfies the validity condition for n = {n}")))
}

/// Per-(m, r) quantities of the sweep, all natural logs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub m: u64,
    pub r: u64,
    pub gamma: f64,
    pub numerator: f64,
    pub small: f64,
    pub large: f64,
    pub escalated: bool,
}

impl SweepPoint {
    /// ln of LHS / (D_n/N_{d,n})^r.
    pub fn log_ratio(&self, log_dn: f64) -> f64 {
        self.gamma + self.numerator + self.small + self.large - self.r as f64 * log_dn
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsCert {
    pub n: u64,
    /// exp(ln_cn); null in JSON when it overflows f64.
    #[serde(with = "finite_or_null")]
    pub cn: f64,
    pub ln_cn: f64,
    pub log_dn: f64,
    pub r_comp: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    /// 0 when the maximum comes from the analytic bound, which holds for all m.
    pub m_max: u64,
    pub r_max: u64,
    pub grid: Option<Grid>,
    pub d: Option<i64>,
    /// The exhaustive sweep covered 0 <= r < swept_to.
    pub swept_to: u64,
    pub escalations: u64,
    pub evidence_hash: String,
}

impl ConstantsCert {
    /// [swept_to, r_comp), the range covered by the analytic bound alone.
    pub fn coverage_gap(&self) -> Option<(u64, u64)> {
        (self.swept_to < self.r_comp).then_some((self.swept_to, self.r_comp))
    }
}

mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// ln of the worst-case numerator, exact; with d given, for that d only.
pub fn numerator_exact_ln(idx: &HypgIndex, d: Option<i64>) -> Result<f64> {
    match d {
        Some(d) => {
            let nv = crate::denominators::n_dmnr(idx, d)?.n_value;
            Ok(idx.r as f64 * n_dn(d, idx.n).ln() - bigint_to_f64_ln(&nv))
        }
        None => Ok(worst_numerator(idx)?.ln()),
    }
}

fn split_ln(den: &DenomResult, root: u64) -> (f64, f64) {
    let mut small = 0.0;
    let mut large = 0.0;
    for (&p, &e) in &den.factorization {
        let v = e as f64 * (p as f64).ln();
        if p <= root {
            small += v;
        } else {
            large += v;
        }
    }
    (small, large)
}

/// Exact ln LHS(m, r) / (D_n/N)^r from exact D, N and Gamma products.
pub fn exact_point(idx: &HypgIndex, d: Option<i64>) -> Result<SweepPoint> {
    let den = d_mnr(idx)?;
    let (small, large) = split_ln(&den, isqrt(idx.n * idx.r));
    Ok(SweepPoint {
        m: idx.m,
        r: idx.r,
        gamma: rational_ln(&gamma_term_exact(idx)),
        numerator: numerator_exact_ln(idx, d)?,
        small,
        large,
        escalated: true,
    })
}

/// Sweep 0 <= r < r_max for every admissible m, escalating to exact values
/// whenever an estimate would raise the running maximum.
pub fn verify_small_r(n: u64, log_dn: f64, d: Option<i64>, r_max: u64) -> Result<ConstantsCert> {
    if r_max > crate::denominators::DEFAULT_EXACT_CAP {
        return Err(HmError::CapExceeded { r: r_max, cap: crate::denominators::DEFAULT_EXACT_CAP });
    }
    if let Some(0) = d {
        return Err(HmError::Domain("d must be nonzero".into()));
    }
    shared_table((n * r_max).max(10_000))?;
    let ms = admissible_m(n);
    if ms.is_empty() {
        return Err(HmError::Constraint(format!("no admissible m for n = {n}")));
    }
    let runs: Vec<Result<Vec<SweepPoint>>> = ms.par_iter().map(|&m| sweep_m(n, m, log_dn, d, r_max)).collect();
    let mut points = Vec::new();
    for r in runs {
        points.extend(r?);
    }
    let mut best = (0.0f64, ms[0], 0u64);
    let mut hasher = Sha256::new();
    let mut escalations = 0;
    for p in &points {
        let v = p.log_ratio(log_dn);
        escalations += p.escalated as u64;
        hasher.update(format!("{} {} {:.12e} {}\n", p.m, p.r, v, p.escalated as u8).as_bytes());
        if v > best.0 {
            best = (v, p.m, p.r);
        }
    }
    Ok(ConstantsCert {
        n,
        cn: (best.0 + LOG_MARGIN).exp(),
        ln_cn: best.0 + LOG_MARGIN,
        log_dn,
        r_comp: r_max,
        big_n: 0,
        m_max: best.1,
        r_max: best.2,
        grid: None,
        d,
        swept_to: r_max,
        escalations,
        evidence_hash: format!("{:x}", hasher.finalize()),
    })
}

fn sweep_m(n: u64, m: u64, log_dn: f64, d: Option<i64>, r_max: u64) -> Result<Vec<SweepPoint>> {
    let nu = m as f64 / n as f64;
    let (mut g1, mut g2) = (0.0f64, 0.0f64);
    let mut running = 0.0f64;
    let mut out = Vec::with_capacity(r_max as usize);
    for r in 0..r_max {
        if r > 0 {
            let k = r as f64;
            g1 += (k / (k - nu)).ln();
            g2 += ((k + nu) / k).ln();
        }
        let idx = HypgIndex::new(m, n, r)?;
        // relative f64 error of the running sums stays far below LOG_MARGIN
        let gamma = g1.max(g2).max(0.0) * (1.0 + 1e-12);
        let numer = if r == 0 {
            0.0
        } else {
            match d {
                Some(d) => numerator_bound_ln(Some(d), n, r),
                None => numerator_estimate_ln(n, r),
            }
        };
        let small = if r == 0 { 0.0 } else { ds_bound_ln(n, r) };
        let large = dl_exact_primes(&idx)?.iter().map(|&p| (p as f64).ln()).sum::<f64>();
        let mut pt = SweepPoint { m, r, gamma, numerator: numer, small, large, escalated: false };
        if pt.log_ratio(log_dn) > running {
            let ex = exact_point(&idx, d)?;
            pt = SweepPoint { gamma: ex.gamma.max(gamma), large: ex.large, ..ex };
        }
        running = running.max(pt.log_ratio(log_dn));
        out.push(pt);
    }
    Ok(out)
}

/// Full pipeline: bands, analytic choice of D_n, the exhaustive sweep below
/// sweep_r_max, and the analytic bound from there up to r_comp.
pub fn run_pipeline(n: u64, grid: &Grid, sweep_r_max: u64, d: Option<i64>) -> Result<ConstantsCert> {
    let bands = crate::prime_tables::bands_cached(n, n * grid.r_max)?;
    let choice = choose_dn(n, grid, &bands)?;
    let swept_to = sweep_r_max.max(analytic_start(n)).min(choice.r_comp);
    let mut cert = verify_small_r(n, choice.log_dn, d, swept_to)?;
    if let Some((v, r)) = analytic_tail(n, choice.log_dn, swept_to, choice.r_comp, grid.n_max, &bands)? {
        if v + LOG_MARGIN > cert.ln_cn {
            cert.ln_cn = v + LOG_MARGIN;
            cert.cn = cert.ln_cn.exp();
            cert.r_max = r;
            cert.m_max = 0;
        }
    }
    cert.r_comp = choice.r_comp;
    cert.big_n = choice.big_n;
    cert.grid = Some(*grid);
    Ok(cert)
}

/// Re-check the certificate inequality with exact values at one point.
pub fn recheck_point(cert: &ConstantsCert, m: u64, r: u64) -> Result<bool> {
    let idx = HypgIndex::new(m, cert.n, r)?;
    let p = exact_point(&idx, cert.d)?;
    Ok(p.log_ratio(cert.log_dn) < cert.ln_cn - LOG_MARGIN / 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscalationCheck {
    pub numerator: bool,
    pub numerator_d_free: bool,
    pub small_primes: bool,
    pub large_primes: bool,
}

impl EscalationCheck {
    pub fn ok(&self) -> bool {
        self.numerator && self.numerator_d_free && self.small_primes && self.large_primes
    }
}

/// Exact values against their sweep estimates at (m, r), r >= 1.
pub fn escalation_check(idx: &HypgIndex, bands: &ThetaBandTable) -> Result<EscalationCheck> {
    let (n, r) = (idx.n, idx.r);
    let exact_num = worst_numerator(idx)?.ln();
    let den = d_mnr(idx)?;
    let root = isqrt(n * r);
    let small_exact = den.part(|p| p <= root);
    let large_exact = dl_exact(idx)?;
    let large_ok = match (1..).take_while(|&k| dl_valid(n, r, k)).last() {
        Some(big_n) => bigint_to_f64_ln(&large_exact) <= dl_bound_ln(n, r, big_n, bands)? + LOG_MARGIN,
        None => true,
    };
    Ok(EscalationCheck {
        numerator: exact_num <= numerator_estimate_ln(n, r) + LOG_MARGIN,
        numerator_d_free: exact_num <= numerator_bound_ln(None, n, r) + LOG_MARGIN,
        small_primes: small_exact <= ds_bound_exact(n, r),
        large_primes: large_ok,
    })
}

/// (C_n, D_n) = (n, n mu_n) when d_2 = gcd(d/d_1, n^2) = 1.
pub fn baker_fallback(n: u64, d: i64) -> Result<(f64, f64)> {
    let (_, d2) = d1_d2(d, n);
    if d2 != 1 {
        return Err(HmError::Inapplicable(format!("d2 = {d2} != 1 for d = {d}, n = {n}")));
    }
    Ok((n as f64, log_n_mu(n).exp()))
}

/// Exact Gamma-max * D * N_{d,n}^r / N <= n (n mu_n)^r at one point, in logs.
pub fn baker_check(idx: &HypgIndex, d: i64) -> Result<bool> {
    let (cn, dn) = baker_fallback(idx.n, d)?;
    let p = exact_point(idx, Some(d))?;
    Ok(p.gamma + p.numerator + p.small + p.large <= cn.ln() + idx.r as f64 * dn.ln() + LOG_MARGIN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_columns_small_n() {
        assert!((chud_rate(3) - 0.907).abs() < 1e-3);
        assert!((chud_rate(4) - 1.571).abs() < 1e-3);
        assert!((chud_rate(5) - 1.337).abs() < 1e-3);
        assert!((log_n_mu(3) - 1.648).abs() < 1e-3);
        assert!((log_n_mu(4) - 2.080).abs() < 1e-3);
    }

    #[test]
    fn n_dn_examples() {
        assert!(n_dn(7, 3).is_one());
        assert_eq!(n_dn(9, 3).factors[&3], rat(1, 1));
        assert_eq!(n_dn(4, 4).factors[&2], rat(1, 1));
        assert_eq!(mu_n(7).factors[&7], rat(1, 6));
    }

    #[test]
    fn numerator_bound_formula() {
        let want = (6.0 * 2.0 * 3f64.sqrt()).ln();
        assert!((numerator_bound_ln(None, 6, 1) - want).abs() < 1e-12);
    }

    #[test]
    fn ds_examples() {
        assert_eq!(ds_bound_exact(3, 12), BigInt::from(21600));
        assert_eq!(ds_bound_exact(1, 3), BigInt::one());
        assert!((ds_bound_ln(3, 12) - 21600f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn s_bound_increases() {
        let mut last = f64::NEG_INFINITY;
        for r in 1..200 {
            let v = s_bound_ln(4, r);
            assert!(v > last);
            last = v;
        }
        assert!(s_bound_ln(4, 1_000_000).is_finite());
    }

    #[test]
    fn gamma_bound_holds() {
        for n in 3..=20 {
            for m in admissible_m(n) {
                for r in [1u64, 2, 7, 50, 200] {
                    let g = rational_ln(&gamma_term_exact(&HypgIndex::new(m, n, r).unwrap()));
                    assert!(g <= gamma_term_bound(n, r).ln(), "{m} {n} {r}");
                }
            }
        }
    }

    #[test]
    fn dl_validity_threshold() {
        // n = 4, r = 10^4: sqrt(nr) = 200, so N <= 49
        assert!(dl_valid(4, 10_000, 49));
        assert!(!dl_valid(4, 10_000, 50));
    }

    #[test]
    fn dl_exact_empty_and_small() {
        assert_eq!(dl_exact(&HypgIndex::new(1, 3, 0).unwrap()).unwrap(), BigInt::one());
        // (1,3,13): nr = 39, root 6, l = 1, k = 2
        let ps = dl_exact_primes(&HypgIndex::new(1, 3, 13).unwrap()).unwrap();
        assert!(ps.iter().all(|p| p % 3 == 2 && *p > 6));
    }

    #[test]
    fn baker_routing() {
        assert!(baker_fallback(9, 2).is_ok());
        assert!(baker_fallback(9, 3).is_ok());
        assert!(matches!(baker_fallback(9, 243), Err(HmError::Inapplicable(_))));
        for m in [1u64, 2, 4] {
            for r in 0..=12 {
                assert!(baker_check(&HypgIndex::new(m, 9, r).unwrap(), 2).unwrap());
            }
        }
    }

    #[test]
    fn large_part_of_d_divides_dl_exact() {
        for n in 3..=8u64 {
            for m in admissible_m(n) {
                for r in (1..=200u64).step_by(7) {
                    let idx = HypgIndex::new(m, n, r).unwrap();
                    let root = isqrt(n * r);
                    let large = d_mnr(&idx).unwrap().part(|p| p > root);
                    let dl = dl_exact(&idx).unwrap();
                    assert!((&dl % &large).is_zero(), "m={m} n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn escalation_holds_n4() {
        let bands = crate::prime_tables::build_bands(4, 1_000_000).unwrap();
        for r in (1..=200u64).step_by(3) {
            let c = escalation_check(&HypgIndex::new(1, 4, r).unwrap(), &bands).unwrap();
            assert!(c.ok(), "r={r} {c:?}");
        }
    }

    #[test]
    fn pipeline_covers_r_past_the_sweep() {
        let grid = Grid { r_step: 100, r_max: 2000, n_max: 50 };
        let cert = run_pipeline(4, &grid, 200, None).unwrap();
        assert!(cert.r_comp > 606, "{cert:?}");
        for r in [199, 200, 447, 606] {
            assert!(recheck_point(&cert, 1, r).unwrap(), "r={r}");
        }
    }

    #[test]
    fn analytic_start_matches_validity() {
        for n in [3u64, 4, 12, 757] {
            let r = analytic_start(n);
            assert!(dl_valid(n, r, 1) && !dl_valid(n, r - 1, 1));
            assert!((r as f64 - 2.25 * n as f64).abs() <= 1.0);
        }
    }

    #[test]
    fn small_prime_product_below_analytic_form() {
        for x in 1..=50_000u64 {
            assert!(ds_bound_ln(1, x) <= ds_bound_analytic_ln(1, x), "nr = {x}");
        }
    }
}
