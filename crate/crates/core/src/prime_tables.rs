//! Segmented sieve, Chebyshev functions over residue classes and the banded
//! envelopes theta_LB(x; n) < theta(x; n, k) < theta_UB(x; n).

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compensated::{log_dd, DoubleDouble};
use crate::error::{HmError, Result};
use crate::valuation::{euler_phi, small_primes};

pub const BAND_WIDTH: u64 = 2000;
pub const DEFAULT_SIEVE_CEILING: u64 = 100_000_000;
pub const FULL_SCALE_CEILING: u64 = 2_100_000_000;
/// Below this the 1/840 envelope is not known to hold for every n <= 10^4.
pub const BENNETT_THRESHOLD: f64 = 1.8e9;
pub const BUILD_VERSION: &str = "hmbands-1";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BennettConstants {
    pub c840: f64,
    pub c_sqrt: f64,
    pub thresholds: [(f64, f64); 2],
}

pub const BENNETT: BennettConstants = BennettConstants {
    c840: 840.0,
    c_sqrt: 1.818,
    thresholds: [(1e12, 4.31e-5), (1e13, 3.98e-5)],
};

impl BennettConstants {
    /// Relative envelope |theta(x;n,k) - x/phi(n)| / x for x >= 1.8e9.
    pub fn slope(&self, x: f64) -> f64 {
        let mut s = 1.0 / (self.c840 * x.ln());
        for (t, v) in self.thresholds {
            if x >= t {
                s = s.min(v);
            }
        }
        s
    }
}

static CEILING: AtomicU64 = AtomicU64::new(DEFAULT_SIEVE_CEILING);

pub fn sieve_ceiling() -> u64 {
    CEILING.load(Ordering::Relaxed)
}

pub fn set_sieve_ceiling(x: u64) {
    CEILING.store(x, Ordering::Relaxed);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveConfig {
    pub x_max: u64,
    pub segment_size: u64,
    pub parallelism: usize,
}

impl SieveConfig {
    pub fn new(x_max: u64) -> Result<Self> {
        SieveConfig { x_max, segment_size: 1 << 18, parallelism: rayon::current_num_threads() }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.x_max < 10_000 {
            return Err(HmError::Constraint(format!("x_max {} below 10^4", self.x_max)));
        }
        if self.segment_size < 1 << 16 {
            return Err(HmError::Constraint("segment size below 2^16".into()));
        }
        if self.parallelism == 0 {
            return Err(HmError::Constraint("parallelism must be positive".into()));
        }
        if self.x_max > u32::MAX as u64 {
            return Err(HmError::Constraint("x_max must fit in 32 bits".into()));
        }
        Ok(self)
    }
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u32> {
    let mut comp = vec![false; (hi - lo) as usize];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut j = (p * p).max(lo.div_ceil(p) * p);
        while j < hi {
            comp[(j - lo) as usize] = true;
            j += p;
        }
    }
    (lo.max(2)..hi).filter(|&x| !comp[(x - lo) as usize]).map(|x| x as u32).collect()
}

pub struct PrimeTable {
    pub x_max: u64,
    pub primes: Vec<u32>,
    logs: OnceLock<Vec<DoubleDouble>>,
}

impl std::fmt::Debug for PrimeTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PrimeTable(x_max={}, {} primes)", self.x_max, self.primes.len())
    }
}

pub fn sieve(cfg: &SieveConfig) -> Result<PrimeTable> {
    let cfg = cfg.validated()?;
    let base = small_primes((cfg.x_max as f64).sqrt() as u64 + 1);
    let top = cfg.x_max + 1;
    let segs: Vec<(u64, u64)> = (0..top.div_ceil(cfg.segment_size))
        .map(|i| (i * cfg.segment_size, ((i + 1) * cfg.segment_size).min(top)))
        .collect();
    let run = || segs.par_iter().map(|&(lo, hi)| sieve_segment(lo, hi, &base)).collect::<Vec<_>>();
    let parts = match rayon::ThreadPoolBuilder::new().num_threads(cfg.parallelism).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    Ok(PrimeTable { x_max: cfg.x_max, primes: parts.concat(), logs: OnceLock::new() })
}

fn check_coprime(n: u64, k: u64) -> Result<u64> {
    if n == 0 {
        return Err(HmError::Constraint("modulus must be positive".into()));
    }
    let k = k % n;
    if k.gcd(&n) != 1 {
        return Err(HmError::Constraint(format!("gcd({k}, {n}) != 1")));
    }
    Ok(k)
}

impl PrimeTable {
    fn check(&self, x: f64) -> Result<()> {
        if x > self.x_max as f64 {
            return Err(HmError::CeilingExceeded { x, ceiling: self.x_max });
        }
        Ok(())
    }

    pub fn logs(&self) -> &[DoubleDouble] {
        self.logs.get_or_init(|| self.primes.par_iter().map(|&p| log_dd(p as f64)).collect())
    }

    fn count_le(&self, x: f64) -> usize {
        let xi = x.floor().max(0.0) as u64;
        self.primes.partition_point(|&p| (p as u64) <= xi)
    }

    pub fn theta_dd(&self, x: f64) -> Result<DoubleDouble> {
        self.check(x)?;
        let k = self.count_le(x);
        Ok(self.logs()[..k].iter().fold(DoubleDouble::ZERO, |a, &b| a + b))
    }

    pub fn theta(&self, x: f64) -> Result<f64> {
        Ok(self.theta_dd(x)?.to_f64())
    }

    /// Includes prime powers p^j <= x.
    pub fn psi(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let k = self.count_le(x);
        let xi = x.floor() as u64;
        let mut s = DoubleDouble::ZERO;
        for (i, &p) in self.primes[..k].iter().enumerate() {
            let p = p as u64;
            let mut q = p;
            let mut j = 0u32;
            while q <= xi {
                j += 1;
                match q.checked_mul(p) {
                    Some(v) => q = v,
                    None => break,
                }
            }
            s = s + self.logs()[i].mul_f64(j as f64);
        }
        Ok(s.to_f64())
    }

    pub fn theta_ap(&self, x: f64, n: u64, k: u64) -> Result<f64> {
        let k = check_coprime(n, k)?;
        self.check(x)?;
        let c = self.count_le(x);
        let logs = self.logs();
        let s = self.primes[..c]
            .iter()
            .zip(logs)
            .filter(|(&p, _)| p as u64 % n == k)
            .fold(DoubleDouble::ZERO, |a, (_, &l)| a + l);
        Ok(s.to_f64())
    }

    /// theta(x; n, k) for many x at once; `xs` need not be sorted.
    /// Output row j holds the values for `xs[j]`, indexed by residue.
    pub fn theta_ap_batch(&self, n: u64, xs: &[f64]) -> Result<Vec<Vec<DoubleDouble>>> {
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
        if let Some(&last) = order.last() {
            self.check(xs[last])?;
        }
        let logs = self.logs();
        let mut run = vec![DoubleDouble::ZERO; n as usize];
        let mut out = vec![Vec::new(); xs.len()];
        let mut i = 0usize;
        for j in order {
            let lim = xs[j].floor().max(0.0) as u64;
            while i < self.primes.len() && self.primes[i] as u64 <= lim {
                let c = (self.primes[i] as u64 % n) as usize;
                run[c] = run[c] + logs[i];
                i += 1;
            }
            out[j] = run.clone();
        }
        Ok(out)
    }

    /// Visit primes p <= limit coprime to n in order, with the class sum
    /// before and after the jump at p.
    pub fn class_walk<F>(&self, n: u64, limit: u64, mut f: F) -> Result<Vec<DoubleDouble>>
    where
        F: FnMut(u64, u64, DoubleDouble, DoubleDouble),
    {
        self.check(limit as f64)?;
        let logs = self.logs();
        let mut run = vec![DoubleDouble::ZERO; n as usize];
        for (i, &p) in self.primes.iter().enumerate() {
            let p = p as u64;
            if p > limit {
                break;
            }
            if n.is_multiple_of(p) {
                continue;
            }
            let c = (p % n) as usize;
            let before = run[c];
            run[c] = before + logs[i];
            f(p, c as u64, before, run[c]);
        }
        Ok(run)
    }
}

fn table_slot() -> &'static Mutex<Option<Arc<PrimeTable>>> {
    static SLOT: OnceLock<Mutex<Option<Arc<PrimeTable>>>> = OnceLock::new();
    SLOT.get_or_init(|| Mutex::new(None))
}

/// A shared table reaching at least `x`, grown on demand up to the ceiling.
pub fn shared_table(x: u64) -> Result<Arc<PrimeTable>> {
    let ceiling = sieve_ceiling();
    if x > ceiling {
        return Err(HmError::CeilingExceeded { x: x as f64, ceiling });
    }
    let mut slot = table_slot().lock().expect("prime table");
    if let Some(t) = slot.as_ref() {
        if t.x_max >= x {
            return Ok(t.clone());
        }
    }
    let want = x.max(1_000_000).next_power_of_two().min(ceiling).max(x).max(10_000);
    let t = Arc::new(sieve(&SieveConfig::new(want)?)?);
    *slot = Some(t.clone());
    Ok(t)
}

pub fn theta_ap(x: f64, n: u64, k: u64) -> Result<f64> {
    shared_table(x.max(0.0).ceil() as u64)?.theta_ap(x, n, k)
}

pub fn theta(x: f64) -> Result<f64> {
    shared_table(x.max(0.0).ceil() as u64)?.theta(x)
}

pub fn psi(x: f64) -> Result<f64> {
    shared_table(x.max(0.0).ceil() as u64)?.psi(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub i: u64,
    pub x_lo: u64,
    pub x_hi: u64,
    pub eps_lb: f64,
    pub eps_ub: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaBandTable {
    pub n: u64,
    pub band_width: u64,
    pub bands: Vec<Band>,
    pub x_max: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

fn outward(v: f64, phi: f64) -> f64 {
    v + 1e-12 * (v.abs() + 1.0 / phi)
}

pub fn build_bands(n: u64, x_max: u64) -> Result<ThetaBandTable> {
    build_bands_with(&*shared_table(x_max)?, n, x_max)
}

/// Raw extrema of (theta(x;n,k) - x/phi)/x per band, then suffix maxima.
///
/// Between jumps theta is constant, so the upper side peaks at jump points
/// and band left ends, the lower side just before jumps and at band right
/// ends. Classes without a prime yet contribute -1/phi on the lower side.
pub fn build_bands_with(table: &PrimeTable, n: u64, x_max: u64) -> Result<ThetaBandTable> {
    if n < 3 {
        return Err(HmError::Constraint("modulus must be at least 3".into()));
    }
    table.check(x_max as f64)?;
    let phi = euler_phi(n) as f64;
    let inv_phi = 1.0 / phi;
    let nb = x_max.div_ceil(BAND_WIDTH) as usize;
    let mut up = vec![f64::NEG_INFINITY; nb];
    let mut low = vec![f64::INFINITY; nb];
    let band_of = |x: u64| ((x.max(1) - 1) / BAND_WIDTH) as usize;
    let classes: Vec<usize> = (1..n).filter(|k| k.gcd(&n) == 1).map(|k| k as usize).collect();
    let logs = table.logs();
    let mut run = vec![DoubleDouble::ZERO; n as usize];
    let g = |t: DoubleDouble, x: f64| t.to_f64() / x - inv_phi;
    let mut pi = 0usize;
    for b in 0..nb {
        let x_lo = b as u64 * BAND_WIDTH + 1;
        let x_hi = ((b as u64 + 1) * BAND_WIDTH).min(x_max);
        // pieces entering from the left
        for &k in &classes {
            up[b] = up[b].max(g(run[k], x_lo as f64));
        }
        while pi < table.primes.len() && table.primes[pi] as u64 <= x_hi {
            let p = table.primes[pi] as u64;
            if !n.is_multiple_of(p) {
                let k = (p % n) as usize;
                let lb = band_of(p - 1);
                low[lb] = low[lb].min(g(run[k], p as f64));
                run[k] = run[k] + logs[pi];
                up[b] = up[b].max(g(run[k], p as f64));
            }
            pi += 1;
        }
        // pieces leaving on the right, including the gap up to the next band
        let right = if x_hi == x_max { x_max as f64 } else { (x_hi + 1) as f64 };
        for &k in &classes {
            low[b] = low[b].min(g(run[k], x_hi as f64)).min(g(run[k], right));
        }
    }
    let mut bands = Vec::with_capacity(nb);
    let (mut su, mut sl) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for b in (0..nb).rev() {
        su = su.max(up[b]);
        sl = sl.max(-low[b]);
        bands.push(Band {
            i: b as u64 + 1,
            x_lo: b as u64 * BAND_WIDTH + 1,
            x_hi: ((b as u64 + 1) * BAND_WIDTH).min(x_max),
            eps_lb: outward(sl, phi),
            eps_ub: outward(su, phi),
        });
    }
    bands.reverse();
    Ok(ThetaBandTable { n, band_width: BAND_WIDTH, bands, x_max })
}

impl ThetaBandTable {
    pub fn phi(&self) -> f64 {
        euler_phi(self.n) as f64
    }

    /// theta_UB or theta_LB at x.
    pub fn envelope(&self, x: f64, side: Side) -> Result<f64> {
        let base = x / self.phi();
        let eps = if x <= self.x_max as f64 {
            let i = if x < 1.0 { 0 } else { ((x - 1.0) / BAND_WIDTH as f64).floor() as usize };
            let b = &self.bands[i.min(self.bands.len() - 1)];
            match side {
                Side::Upper => b.eps_ub,
                Side::Lower => b.eps_lb,
            }
        } else if x >= BENNETT_THRESHOLD {
            BENNETT.slope(x)
        } else {
            return Err(HmError::UncoveredGap { x, table_max: self.x_max });
        };
        Ok(match side {
            Side::Upper => base + eps * x,
            Side::Lower => base - eps * x,
        })
    }

    pub fn theta_ub(&self, x: f64) -> Result<f64> {
        self.envelope(x, Side::Upper)
    }

    pub fn theta_lb(&self, x: f64) -> Result<f64> {
        self.envelope(x, Side::Lower)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,band_index,x_lo,x_hi,eps_lb,eps_ub\n");
        for b in &self.bands {
            s.push_str(&format!("{},{},{},{},{:.16e},{:.16e}\n", self.n, b.i, b.x_lo, b.x_hi, b.eps_lb, b.eps_ub));
        }
        s
    }

    pub fn from_csv(text: &str, x_max: u64) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some("n,band_index,x_lo,x_hi,eps_lb,eps_ub") {
            return Err(HmError::Parse("unexpected band CSV header".into()));
        }
        let mut n = 0;
        let mut bands = Vec::new();
        for line in lines {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(HmError::Parse(format!("bad band row {line:?}")));
            }
            let pu = |s: &str| s.parse::<u64>().map_err(|e| HmError::Parse(e.to_string()));
            let pf = |s: &str| s.parse::<f64>().map_err(|e| HmError::Parse(e.to_string()));
            n = pu(f[0])?;
            bands.push(Band { i: pu(f[1])?, x_lo: pu(f[2])?, x_hi: pu(f[3])?, eps_lb: pf(f[4])?, eps_ub: pf(f[5])? });
        }
        Ok(ThetaBandTable { n, band_width: BAND_WIDTH, bands, x_max })
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let (csv, meta) = band_paths(dir, self.n, self.x_max);
        std::fs::write(csv, self.to_csv())?;
        let sidecar = serde_json::json!({"n": self.n, "x_max": self.x_max, "build_version": BUILD_VERSION});
        std::fs::write(meta, sidecar.to_string())?;
        Ok(())
    }

    pub fn load(dir: &Path, n: u64, x_max: u64) -> Result<Option<Self>> {
        let (csv, meta) = band_paths(dir, n, x_max);
        let (Ok(text), Ok(m)) = (std::fs::read_to_string(&csv), std::fs::read_to_string(&meta)) else {
            return Ok(None);
        };
        let v: serde_json::Value = serde_json::from_str(&m).map_err(|e| HmError::Parse(e.to_string()))?;
        if v["build_version"] != BUILD_VERSION || v["n"] != n || v["x_max"] != x_max {
            return Ok(None);
        }
        Ok(Some(ThetaBandTable::from_csv(&text, x_max)?))
    }
}

fn band_paths(dir: &Path, n: u64, x_max: u64) -> (PathBuf, PathBuf) {
    (dir.join(format!("bands_{n}_{x_max}.csv")), dir.join(format!("bands_{n}_{x_max}.json")))
}

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("HYPERMEASURE_CACHE_DIR").map(PathBuf::from)
}

/// Band table from the cache directory when present, built and stored otherwise.
pub fn bands_cached(n: u64, x_max: u64) -> Result<ThetaBandTable> {
    if let Some(dir) = cache_dir() {
        if let Some(t) = ThetaBandTable::load(&dir, n, x_max)? {
            return Ok(t);
        }
        let t = build_bands(n, x_max)?;
        t.save(&dir)?;
        return Ok(t);
    }
    build_bands(n, x_max)
}

/// Largest integer x <= x_max with |theta(x;n,k) - x/phi| >= x/(840 log x)
/// for some k coprime to n; 0 when there is none.
pub fn breach_point(n: u64, x_max: u64) -> Result<u64> {
    breach_point_with(&*shared_table(x_max)?, n, x_max)
}

pub fn breach_point_with(table: &PrimeTable, n: u64, x_max: u64) -> Result<u64> {
    let inv_phi = 1.0 / euler_phi(n) as f64;
    let h = |x: f64| x / (BENNETT.c840 * x.ln());
    let dev = |t: DoubleDouble, x: f64| t.to_f64() - x * inv_phi;
    let mut best = 0u64;
    // pieces on which the class sum is t, starting at `start` (inclusive)
    // and ending before `end` (exclusive)
    let mut piece = |t: DoubleDouble, start: u64, end: u64| {
        let start = start.max(2);
        if start >= end {
            return;
        }
        let last = end - 1;
        if dev(t, last as f64) <= -h(last as f64) {
            best = best.max(last);
            return;
        }
        if dev(t, start as f64) >= h(start as f64) {
            // dev - h is decreasing; find the last integer where it is >= 0
            let (mut lo, mut hi) = (start, last);
            while lo < hi {
                let mid = lo + (hi - lo).div_ceil(2);
                if dev(t, mid as f64) >= h(mid as f64) {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            best = best.max(lo);
        }
    };
    let mut start = vec![1u64; n as usize];
    let fin = table.class_walk(n, x_max, |p, k, before, _| {
        piece(before, start[k as usize], p);
        start[k as usize] = p;
    })?;
    for k in (1..n).filter(|k| k.gcd(&n) == 1) {
        piece(fin[k as usize], start[k as usize], x_max + 1);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqrtCheck {
    pub n: u64,
    pub x_max: u64,
    pub checked: u64,
    /// First failing (x, k), if any.
    pub violation: Option<(u64, u64)>,
}

/// |theta(x;n,k) - x/phi| < 1.818 sqrt(x) at every jump of every class, on
/// both sides of the jump, and at x_max.
pub fn theta_sqrt_check(table: &PrimeTable, n: u64, x_max: u64) -> Result<SqrtCheck> {
    let inv_phi = 1.0 / euler_phi(n) as f64;
    let c = BENNETT.c_sqrt;
    let mut checked = 0u64;
    let mut violation = None;
    let fin = table.class_walk(n, x_max, |p, k, before, after| {
        let x = p as f64;
        let b = c * x.sqrt();
        let lo = before.to_f64() - x * inv_phi;
        let hi = after.to_f64() - x * inv_phi;
        checked += 2;
        if violation.is_none() && !(lo > -b && hi < b) {
            violation = Some((p, k));
        }
    })?;
    let x = x_max as f64;
    for k in (1..n).filter(|k| k.gcd(&n) == 1) {
        let d = fin[k as usize].to_f64() - x * inv_phi;
        checked += 1;
        if violation.is_none() && d.abs() >= c * x.sqrt() {
            violation = Some((x_max, k));
        }
    }
    Ok(SqrtCheck { n, x_max, checked, violation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        sieve(&SieveConfig::new(200_000).unwrap()).unwrap()
    }

    #[test]
    fn sieve_matches_trial_division() {
        let t = table();
        let naive: Vec<u32> = (2..=200_000u32).filter(|&x| crate::valuation::is_prime(x as u64)).collect();
        assert_eq!(t.primes, naive);
        let mut cfg = SieveConfig::new(10_000).unwrap();
        assert!(SieveConfig { x_max: 9_999, ..cfg }.validated().is_err());
        cfg.segment_size = 1 << 10;
        assert!(cfg.validated().is_err());
    }

    #[test]
    fn theta_examples() {
        let t = table();
        assert!((t.theta_ap(2.0, 3, 2).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((t.theta_ap(10.0, 4, 1).unwrap() - 5f64.ln()).abs() < 1e-15);
        let want: f64 = [7u32, 13, 19, 31, 37, 43, 61, 67, 73, 79, 97].iter().map(|&p| (p as f64).ln()).sum();
        assert!((t.theta_ap(100.0, 3, 1).unwrap() - want).abs() < 1e-12);
        assert!((t.theta(2.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        let psi8 = 3.0 * 2f64.ln() + 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((t.psi(8.0).unwrap() - psi8).abs() < 1e-14);
        assert!(t.theta_ap(10.0, 4, 2).is_err());
        assert!(matches!(t.theta(1e6), Err(HmError::CeilingExceeded { .. })));
    }

    #[test]
    fn bands_are_suffix_maxima_and_sound() {
        let t = table();
        for n in [3u64, 4, 5, 12] {
            let b = build_bands_with(&t, n, 200_000).unwrap();
            for w in b.bands.windows(2) {
                assert!(w[0].eps_ub >= w[1].eps_ub && w[0].eps_lb >= w[1].eps_lb);
            }
            let xs: Vec<f64> = (0..400).map(|i| 1.0 + i as f64 * 499.7).collect();
            let vals = t.theta_ap_batch(n, &xs).unwrap();
            for (x, row) in xs.iter().zip(vals) {
                for k in (1..n).filter(|k| k.gcd(&n) == 1) {
                    let th = row[k as usize].to_f64();
                    assert!(b.theta_lb(*x).unwrap() < th && th < b.theta_ub(*x).unwrap(), "n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn envelope_regions() {
        let t = table();
        let b = build_bands_with(&t, 4, 100_000).unwrap();
        assert!(matches!(b.theta_ub(1e6), Err(HmError::UncoveredGap { .. })));
        let up = b.theta_ub(1e13).unwrap();
        assert!((up - 1e13 / 2.0 - 3.98e-5 * 1e13).abs() < 1e-3 * 1e13 * 3.98e-5);
    }

    #[test]
    fn csv_round_trip() {
        let t = table();
        let b = build_bands_with(&t, 5, 50_000).unwrap();
        let back = ThetaBandTable::from_csv(&b.to_csv(), 50_000).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn breach_and_sqrt() {
        let t = table();
        let bp = breach_point_with(&t, 3, 200_000).unwrap();
        assert!(bp > 0 && bp <= 200_000);
        assert_eq!(bp, breach_point_with(&t, 3, 200_000).unwrap());
        let s = theta_sqrt_check(&t, 7, 200_000).unwrap();
        assert!(s.violation.is_none());
    }
}
