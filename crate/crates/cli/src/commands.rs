use std::fmt;
use std::str::FromStr;

use anyhow::{Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use hypermeasure::constants::{self, ConstantsCert, Grid};
use hypermeasure::denominators::{self, d_mnr_capped};
use hypermeasure::hypg::{self, admissible_m, HypgIndex};
use hypermeasure::measures::{self, MeasureConstants, QuadInt};
use hypermeasure::prime_tables::{self, Side};
use hypermeasure::{tables, ComplexHP, HmError, HpFloat};

use crate::output::emit;
use crate::{Cmd, Format, RunConfig};

/// A check ran and failed (exit code 4).
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn fail(what: impl Into<String>) -> anyhow::Error {
    VerificationFailed(what.into()).into()
}

pub fn run(cmd: &Cmd, cfg: &RunConfig) -> Result<()> {
    let json = cfg.format.unwrap_or(Format::Json);
    match cmd {
        Cmd::Poly { m, n, r, at, y } => poly(*m, *n, *r, at.as_deref(), *y, cfg),
        Cmd::Denom { m, n, r } => {
            let idx = index(*m, *n, *r, cfg)?;
            let d = d_mnr_capped(&idx, cfg.exact_r_cap)?;
            let fac: serde_json::Map<String, Value> =
                d.factorization.iter().map(|(p, e)| (p.to_string(), json!(e))).collect();
            emit(&json!({"m": m, "n": n, "r": r, "D": d.value.to_string(), "ln_D": d.ln(), "factorization": fac}), json);
            Ok(())
        }
        Cmd::Numerator { m, n, r, d } => {
            let idx = index(*m, *n, *r, cfg)?;
            let v = match d {
                Some(d) => {
                    let res = denominators::n_dmnr(&idx, *d)?;
                    json!({"m": m, "n": n, "r": r, "d": d, "N": res.n_value.to_string(), "d1": res.d1, "d2": res.d2,
                           "N_dn": constants::n_dn(*d, *n).value()})
                }
                None => {
                    let w = denominators::worst_numerator(&idx)?;
                    json!({"m": m, "n": n, "r": r, "ln_worst": w.ln(), "witness_d": w.witness_d(),
                           "coprime_content": w.coprime_content.to_string()})
                }
            };
            emit(&v, json);
            Ok(())
        }
        Cmd::Theta { x, n, k, bands } => theta(*x, *n, *k, *bands, json),
        Cmd::Bands { n, x_max, out } => {
            let t = prime_tables::bands_cached(*n, *x_max)?;
            let csv = t.to_csv();
            match out {
                Some(p) => std::fs::write(p, csv).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        Cmd::Constants { n, d, r_step, r_max, n_max, sweep_r, full_scale, spot_check } => {
            if *spot_check {
                return spot(*n, *n, json);
            }
            constants_cmd(*n, *d, *r_step, *r_max, *n_max, *sweep_r, *full_scale, json)
        }
        Cmd::Measure { a, b, m, n, verify, cn, log_dn, cert, cf_digits } => {
            measure(a, b, *m, *n, verify.as_deref(), *cn, *log_dn, cert.as_deref(), *cf_digits, json)
        }
        Cmd::Verify { suite, r_max, n_max } => match suite.as_str() {
            "lemmas" => verify_lemmas(*r_max, *n_max, cfg.precision_digits, json),
            "tables" => {
                let rows = tables::golden_rows();
                if tables::emit_rows(&rows)? != tables::GOLDEN_CSV {
                    return Err(fail("table round trip is not byte-exact"));
                }
                spot(3, 100, json)
            }
            "approximants" => verify_approximants((*r_max).min(20), cfg.precision_digits, json),
            other => Err(HmError::Constraint(format!("unknown suite {other:?} (lemmas, tables, approximants)")).into()),
        },
        Cmd::Tables { n } => {
            let rows = tables::golden_rows();
            let rows: Vec<_> = match n {
                Some(n) => {
                    let r = rows.into_iter().filter(|r| r.n().ok() == Some(*n)).collect::<Vec<_>>();
                    if r.is_empty() {
                        return Err(HmError::Domain(format!("no table row for n = {n}")).into());
                    }
                    r
                }
                None => rows,
            };
            match cfg.format {
                Some(Format::Json) => emit(&serde_json::to_value(&rows)?, Format::Json),
                _ => print!("{}", tables::emit_rows(&rows)?),
            }
            Ok(())
        }
    }
}

fn index(m: u64, n: u64, r: u64, cfg: &RunConfig) -> Result<HypgIndex> {
    let idx = HypgIndex::new(m, n, r)?;
    if r > cfg.exact_r_cap {
        return Err(HmError::CapExceeded { r, cap: cfg.exact_r_cap }.into());
    }
    Ok(idx)
}

/// "p/q", an integer, or a plain decimal.
fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || HmError::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad().into());
        }
        return Ok(BigRational::new(p, q));
    }
    let (int, frac) = s.trim().split_once('.').unwrap_or((s.trim(), ""));
    let neg = int.starts_with('-');
    let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let num = if neg { -num } else { num };
    Ok(BigRational::new(num, BigInt::from(10u32).pow(frac.len() as u32)))
}

fn poly(m: u64, n: u64, r: u64, at: Option<&str>, y: bool, cfg: &RunConfig) -> Result<()> {
    let idx = index(m, n, r, cfg)?;
    let p = if y { hypg::y_poly(&idx)? } else { hypg::x_poly(&idx)? };
    match at {
        None => match cfg.format {
            None | Some(Format::Text) => println!("{p}"),
            Some(f) => {
                let coeffs: Vec<String> = p.coeffs.iter().map(|c| c.to_string()).collect();
                emit(&json!({"m": m, "n": n, "r": r, "poly": p.to_string(), "coefficients": coeffs}), f);
            }
        },
        Some(z) => {
            let z = parse_rational(z)?;
            let v = p.eval(&z);
            let dec = v.to_f64().unwrap_or(f64::NAN);
            match cfg.format {
                None | Some(Format::Text) => println!("{v}\n{dec}"),
                Some(f) => emit(&json!({"m": m, "n": n, "r": r, "z": z.to_string(), "exact": v.to_string(), "value": dec}), f),
            }
        }
    }
    Ok(())
}

fn theta(x: f64, n: u64, k: u64, bands: bool, json: Format) -> Result<()> {
    if !(x >= 0.0) {
        return Err(HmError::Domain(format!("x = {x} must be non-negative")).into());
    }
    let v = if n == 1 { prime_tables::theta(x)? } else { prime_tables::theta_ap(x, n, k)? };
    let mut out = json!({"x": x, "n": n, "k": k, "theta": v});
    if bands && n > 1 {
        let t = prime_tables::bands_cached(n, (x.ceil() as u64).max(10_000))?;
        out["lb"] = json!(t.theta_lb(x)?);
        out["ub"] = json!(t.theta_ub(x)?);
        out["eps_ub"] = json!(t.envelope(x, Side::Upper)?);
        out["eps_lb"] = json!(t.envelope(x, Side::Lower)?);
    }
    emit(&out, json);
    Ok(())
}

fn spot(lo: u64, hi: u64, json: Format) -> Result<()> {
    let checks = tables::spot_check(lo, hi, 1e-3)?;
    if checks.is_empty() {
        return Err(HmError::Domain(format!("no table rows with {lo} <= n <= {hi}")).into());
    }
    let bad = checks.iter().filter(|c| !c.ok).count();
    emit(&json!({"rows_checked": checks.len() / 2, "failed": bad, "checks": checks}), json);
    if bad > 0 {
        return Err(fail(format!("{bad} table values differ by more than 0.001")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn constants_cmd(
    n: u64,
    d: Option<i64>,
    r_step: Option<u64>,
    r_max: Option<u64>,
    n_max: Option<u64>,
    sweep_r: u64,
    full_scale: bool,
    json: Format,
) -> Result<()> {
    HypgIndex::new(1, n, 0)?;
    if let Some(d) = d {
        if d == 0 {
            return Err(HmError::Domain("d must be nonzero".into()).into());
        }
        if let Ok((cn, dn)) = constants::baker_fallback(n, d) {
            let (d1, d2) = denominators::d1_d2(d, n);
            emit(
                &json!({"route": "baker_fallback", "n": n, "d": d, "d1": d1, "d2": d2, "cn": cn, "log_dn": dn.ln()}),
                json,
            );
            return Ok(());
        }
    }
    let base = if full_scale {
        let c = prime_tables::sieve_ceiling().max(prime_tables::FULL_SCALE_CEILING);
        prime_tables::set_sieve_ceiling(c);
        Grid::PAPER
    } else {
        Grid::DESK
    };
    let r_max = r_max.unwrap_or(base.r_max);
    let r_step = r_step.unwrap_or(if r_max < base.r_step { (r_max / 20).max(1) } else { base.r_step });
    let grid = Grid { r_step, r_max, n_max: n_max.unwrap_or(base.n_max) };
    let cert = constants::run_pipeline(n, &grid, sweep_r, d)?;
    if let Some((lo, hi)) = cert.coverage_gap() {
        eprintln!("note: exhaustive sweep stops at r = {lo}; C_n covers r in [{lo}, {hi}) through S(n,r) D^L(n,r)");
        if cert.m_max == 0 {
            eprintln!("note: ln C_n = {:.1} comes from that bound at r = {}", cert.ln_cn, cert.r_max);
        }
    }
    emit(&serde_json::to_value(&cert)?, json);
    Ok(())
}

fn parse_height(s: &str) -> Result<BigInt> {
    if let Ok(v) = BigInt::from_str(s) {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| HmError::Parse(format!("bad height {s:?}")))?;
    if !(f >= 1.0) || f.fract() != 0.0 || f > 1e30 {
        return Err(HmError::Parse(format!("height {s:?} must be a positive integer")).into());
    }
    Ok(BigInt::from(f as u128))
}

#[allow(clippy::too_many_arguments)]
fn measure(
    a: &str,
    b: &str,
    m: u64,
    n: u64,
    verify: Option<&str>,
    cn: Option<f64>,
    log_dn: Option<f64>,
    cert: Option<&std::path::Path>,
    cf_digits: u32,
    json: Format,
) -> Result<()> {
    let qa: QuadInt = a.parse()?;
    let qb: QuadInt = b.parse()?;
    let (k, source) = match (cert, cn, log_dn) {
        (Some(p), _, _) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let c: ConstantsCert = serde_json::from_str(&text).map_err(|e| HmError::Parse(e.to_string()))?;
            if c.n != n {
                return Err(HmError::Domain(format!("certificate is for n = {}, not {n}", c.n)).into());
            }
            (MeasureConstants::from(&c), "certificate")
        }
        (None, Some(cn), Some(log_dn)) => (MeasureConstants { cn, log_dn }, "inline"),
        (None, None, None) => (MeasureConstants::from_table(n)?, "table"),
        _ => return Err(HmError::Constraint("give both --cn and --log-dn, or neither".into()).into()),
    };
    let res = measures::compute_measure(&qa, &qb, m, n, &k)?;
    let mut out = json!({
        "a": qa.to_string(), "b": qb.to_string(), "m": m, "n": n,
        "constants": {"source": source, "cn": k.cn, "log_dn": k.log_dn},
        "result": serde_json::to_value(&res)?,
    });
    let mut failed = None;
    if let Some(h) = verify {
        let h = parse_height(h)?;
        let rep = measures::verify_against_convergents(&qa, &qb, m, n, &res, &h, cf_digits)?;
        if !rep.all_pass {
            failed = Some(format!("{} convergents violate the measure", rep.failures.len()));
        }
        out["verification"] = json!({
            "height": rep.height.to_string(),
            "digits": rep.digits,
            "checked": rep.checked,
            "failures": rep.failures.iter().map(|(p, q)| format!("{p}/{q}")).collect::<Vec<_>>(),
            "min_log_margin": rep.min_log_margin,
            "leading_quotients": rep.leading_quotients.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "partial_quotient": rep.partial_quotient.as_ref().map(|c| json!({
                "expected": c.expected.to_string(), "got": c.got.to_string(), "ok": c.ok})),
            "all_pass": rep.all_pass,
        });
    }
    emit(&out, json);
    match failed {
        Some(f) => Err(fail(f)),
        None => Ok(()),
    }
}

#[derive(Default)]
struct Tally {
    total: u64,
    failed: u64,
    first: Option<String>,
}

impl Tally {
    fn add(&mut self, ok: bool, at: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failed += 1;
            self.first.get_or_insert_with(at);
        }
    }
    fn merge(&mut self, o: Tally) {
        self.total += o.total;
        self.failed += o.failed;
        if self.first.is_none() {
            self.first = o.first;
        }
    }
    fn to_json(&self, name: &str) -> Value {
        json!({"name": name, "total": self.total, "failed": self.failed, "first_failure": self.first})
    }
}

fn report(suite: &str, tallies: Vec<(&str, Tally)>, json: Format) -> Result<()> {
    let bad: u64 = tallies.iter().map(|t| t.1.failed).sum();
    let checks: Vec<Value> = tallies.iter().map(|(n, t)| t.to_json(n)).collect();
    emit(&json!({"suite": suite, "checks": checks, "ok": bad == 0}), json);
    if bad > 0 {
        return Err(fail(format!("{bad} checks failed in suite {suite}")));
    }
    Ok(())
}

fn verify_lemmas(r_max: u64, n_max: u64, prec: u32, json: Format) -> Result<()> {
    let pts: Vec<HypgIndex> = (3..=n_max)
        .flat_map(|n| admissible_m(n).into_iter().map(move |m| (m, n)))
        .flat_map(|(m, n)| (0..=r_max).map(move |r| HypgIndex { m, n, r }))
        .collect();
    let per: Vec<Result<[Tally; 5]>> = pts
        .par_iter()
        .map(|idx| {
            let at = || format!("m={} n={} r={}", idx.m, idx.n, idx.r);
            let mut t: [Tally; 5] = Default::default();
            if idx.r >= 1 {
                t[0].add(hypg::x_root_certificate(idx, hypg::DEFAULT_ROOT_CAP.max(r_max))?, at);
                t[2].add(denominators::denom_lb2_check(idx)?.ok, at);
            }
            t[1].add(denominators::denom_lb1_check(idx)?.ok(), at);
            if idx.n <= 10 && [0, 1, 3, 10, 20].contains(&idx.r) {
                let a = hypg::f21_min_check(idx, 257)?;
                let near = a.one_index.is_some_and(|o| o.abs_diff(a.argmin_index) <= 1);
                t[3].add(a.min >= 1.0 - 1e-9 && near, at);
            }
            if idx.r % 5 == 0 {
                let z = ComplexHP::parse("0.625", "0.375", prec)?;
                let res = hypg::relation_residual(idx, &z)?;
                let tol = HpFloat::parse(&format!("1e-{}", prec.saturating_sub(15)), 64).expect("literal");
                t[4].add(res < tol, at);
            }
            Ok(t)
        })
        .collect();
    let names = ["negative_roots", "denom_lb1", "denom_lb2", "arc_minimum", "relation_residual"];
    let mut acc: [Tally; 5] = Default::default();
    for p in per {
        for (a, t) in acc.iter_mut().zip(p?) {
            a.merge(t);
        }
    }
    report("lemmas", names.into_iter().zip(acc).collect(), json)
}

fn verify_approximants(r_max: u64, prec: u32, json: Format) -> Result<()> {
    let mut q_est = Tally::default();
    let mut bracket = Tally::default();
    let mut gap = Tally::default();
    for (a, b) in [(9, 8), (128, 125), (50, 49)] {
        for n in [3u64, 5] {
            let k = MeasureConstants::from_table(n)?;
            let (qa, qb) = (QuadInt::rational(a), QuadInt::rational(b));
            for r in 0..=r_max {
                let at = || format!("a={a} b={b} n={n} r={r}");
                q_est.add(measures::q_estimates(&qa, &qb, 1, n, r, &k)?.holds, at);
                let br = measures::remainder_bracket(&qa, &qb, 1, n, r, &k, prec.max(60))?;
                bracket.add(br.holds, at);
                gap.add(br.numerator_gap_ok, at);
            }
        }
    }
    report("approximants", vec![("q_estimates", q_est), ("remainder_bracket", bracket), ("numerator_gap", gap)], json)
}
