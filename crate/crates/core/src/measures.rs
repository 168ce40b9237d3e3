//! Measure constants E, Q, kappa, c for (a/b)^(m/n), the approximant
//! sequence p_r, q_r built from X and Y, and the checks tying them together.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cf::{rational_power, stable_expand};
use crate::constants::{n_dn, ConstantsCert, PrimePowerReal};
use crate::denominators::{d_mnr, n_dmnr};
use crate::error::{HmError, Result};
use crate::hp::{digits_to_bits, HpFloat};
use crate::hypg::{gamma_ratio_lower, gamma_ratio_upper, pochhammer_ratio, x_poly, HypgIndex};
use crate::scalar::{atan2, c_abs, c_pow_ratio, c_sqrt};

/// Working precision for the closed-form measure constants.
pub const MEASURE_DIGITS: u32 = 64;
/// Minimum precision for remainder evaluation.
pub const BRACKET_DIGITS: u32 = 60;

/// x + y sqrt(-t) with t squarefree; rational integers have y = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    pub x: BigInt,
    pub y: BigInt,
    pub t: u64,
}

impl QuadInt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, t: u64) -> Result<Self> {
        if t == 0 || crate::valuation::core(t as i64)? != t as i64 {
            return Err(HmError::Domain(format!("t = {t} is not a positive squarefree integer")));
        }
        Ok(QuadInt { x: x.into(), y: y.into(), t })
    }

    pub fn rational(x: impl Into<BigInt>) -> Self {
        QuadInt { x: x.into(), y: BigInt::zero(), t: 1 }
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// x^2 + t y^2.
    pub fn norm(&self) -> BigInt {
        &self.x * &self.x + BigInt::from(self.t) * &self.y * &self.y
    }

    pub fn to_complex(&self, bits: usize) -> Complex<HpFloat> {
        let st = HpFloat::from_i64(self.t as i64, bits).sqrt();
        Complex::new(HpFloat::from_bigint(&self.x, bits), HpFloat::from_bigint(&self.y, bits) * st)
    }

    /// "x+y*sqrt(-t)" form.
    pub fn to_ascii(&self) -> String {
        self.render("*sqrt(-", ")")
    }

    fn render(&self, open: &str, close: &str) -> String {
        if self.y.is_zero() {
            return self.x.to_string();
        }
        let sign = if self.y.is_negative() { '-' } else { '+' };
        format!("{}{sign}{}{open}{}{close}", self.x, self.y.abs(), self.t)
    }

    fn with_t(&self, t: u64) -> Self {
        QuadInt { t, ..self.clone() }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("√-", ""))
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim_start_matches('+')).map_err(|_| HmError::Parse(format!("bad integer {s:?}")))
}

impl FromStr for QuadInt {
    type Err = HmError;

    /// Accepts "x", "x+y√-t", "x-√-t", "y√-t", and the ASCII forms with
    /// "*sqrt(-t)" or "sqrt(-t)" in place of "√-t".
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, radicand) = if let Some(i) = s.find('√') {
            let rest = &s[i + '√'.len_utf8()..];
            let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
            (&s[..i], rest)
        } else if let Some(i) = s.find("sqrt(") {
            let rest = s[i + 5..]
                .strip_suffix(')')
                .ok_or_else(|| HmError::Parse(format!("unclosed sqrt in {s:?}")))?;
            (&s[..i], rest)
        } else {
            return Ok(QuadInt::rational(parse_int(&s)?));
        };
        let t = radicand
            .strip_prefix('-')
            .ok_or_else(|| HmError::Parse(format!("radicand must be negative in {s:?}")))?;
        let t: u64 = t.parse().map_err(|_| HmError::Parse(format!("bad radicand {t:?}")))?;
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').last().map(|(i, _)| i);
        let (x, coef) = match split {
            Some(i) => (parse_int(&head[..i])?, &head[i..]),
            None => (BigInt::zero(), head),
        };
        let y = match coef {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            c => parse_int(c)?,
        };
        QuadInt::new(x, y, t)
    }
}

/// Exact element of Q(sqrt(-t)).
#[derive(Clone, Debug, PartialEq)]
struct Qf {
    x: BigRational,
    y: BigRational,
}

impl Qf {
    fn from_int(a: &QuadInt) -> Self {
        Qf { x: BigRational::from_integer(a.x.clone()), y: BigRational::from_integer(a.y.clone()) }
    }
    fn one() -> Self {
        Qf { x: BigRational::one(), y: BigRational::zero() }
    }
    fn mul(&self, o: &Qf, t: u64) -> Qf {
        let t = BigRational::from_integer(t.into());
        Qf { x: &self.x * &o.x - t * &self.y * &o.y, y: &self.x * &o.y + &self.y * &o.x }
    }
    fn add(&self, o: &Qf) -> Qf {
        Qf { x: &self.x + &o.x, y: &self.y + &o.y }
    }
    fn scale(&self, k: &BigRational) -> Qf {
        Qf { x: &self.x * k, y: &self.y * k }
    }
    fn to_int(&self, t: u64) -> Option<QuadInt> {
        (self.x.is_integer() && self.y.is_integer())
            .then(|| QuadInt { x: self.x.to_integer(), y: self.y.to_integer(), t })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputCase {
    /// b/a rational in (0, 1).
    Rational,
    /// |b/a| = 1 and 0 < |b/a - 1| < 1.
    UnitCircle,
}

/// Validated inputs: a, b in a common ring, the case, and d = (a - b)^2.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureInput {
    pub a: QuadInt,
    pub b: QuadInt,
    pub idx: HypgIndex,
    pub case: InputCase,
    pub d: i64,
}

impl MeasureInput {
    pub fn new(a: &QuadInt, b: &QuadInt, m: u64, n: u64) -> Result<Self> {
        let idx = HypgIndex::new(m, n, 0)?;
        if a.is_zero() || b.is_zero() {
            return Err(HmError::Domain("a and b must be nonzero".into()));
        }
        let t = match (a.is_rational(), b.is_rational()) {
            (false, false) if a.t != b.t => {
                return Err(HmError::Domain(format!("a and b lie in different fields (t = {}, {})", a.t, b.t)))
            }
            (false, _) => a.t,
            (true, false) => b.t,
            (true, true) => 1,
        };
        let (a, b) = (a.with_t(t), b.with_t(t));
        let tb = BigInt::from(t);
        // b conj(a) = re + im sqrt(-t)
        let re = &b.x * &a.x + &tb * &b.y * &a.y;
        let im = &b.y * &a.x - &b.x * &a.y;
        let na = a.norm();
        let diff = QuadInt { x: &a.x - &b.x, y: &a.y - &b.y, t };
        let case = if im.is_zero() && re.is_positive() && re < na {
            InputCase::Rational
        } else if na == b.norm() && !diff.is_zero() && diff.norm() < na {
            InputCase::UnitCircle
        } else {
            return Err(HmError::Domain(format!(
                "need 0 < b/a < 1 rational, or |b/a| = 1 with 0 < |b/a - 1| < 1; got a = {a}, b = {b}"
            )));
        };
        if !diff.x.is_zero() && !diff.y.is_zero() {
            return Err(HmError::Domain(format!("(a - b)^2 = ({diff})^2 is not a rational integer")));
        }
        let d = &diff.x * &diff.x - &tb * &diff.y * &diff.y;
        let d = d.to_i64().ok_or_else(|| HmError::Domain(format!("d = {d} does not fit in 64 bits")))?;
        Ok(MeasureInput { a, b, idx, case, d })
    }

    fn with_r(&self, r: u64) -> HypgIndex {
        self.idx.with_r(r)
    }
}

/// C_n and log D_n as used in the measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureConstants {
    pub cn: f64,
    pub log_dn: f64,
}

impl MeasureConstants {
    /// (C_{1,n}, log D_{1,n}) from the checked-in table.
    pub fn from_table(n: u64) -> Result<Self> {
        let row = crate::tables::golden_row(n)
            .ok_or_else(|| HmError::Domain(format!("no table row for n = {n}")))?;
        Ok(MeasureConstants { cn: row.c1()?, log_dn: row.log_d1()? })
    }
}

impl From<&ConstantsCert> for MeasureConstants {
    fn from(c: &ConstantsCert) -> Self {
        MeasureConstants { cn: c.cn, log_dn: c.log_dn }
    }
}

fn ppr_ln(p: &PrimePowerReal, bits: usize) -> HpFloat {
    p.factors.iter().fold(HpFloat::from_i64(0, bits), |acc, (&q, e)| {
        acc + HpFloat::from_rational(e, bits) * HpFloat::from_i64(q as i64, bits).ln()
    })
}

/// Largest f64 not above x (one extra ulp of slack).
fn round_down(x: &HpFloat) -> f64 {
    let mut v = x.to_f64();
    while HpFloat::from_f64(v, x.bits()) > *x {
        v = v.next_down();
    }
    v.next_down()
}

fn round_up(x: &HpFloat) -> f64 {
    let mut v = x.to_f64();
    while HpFloat::from_f64(v, x.bits()) < *x {
        v = v.next_up();
    }
    v.next_up()
}

/// Closed-form pieces shared by the measure and the bracket checks.
struct Geometry {
    /// |sqrt a - sqrt b|^2 and |sqrt a + sqrt b|^2.
    small: HpFloat,
    large: HpFloat,
    abs_a: HpFloat,
    abs_b: HpFloat,
    abs_diff: HpFloat,
    /// b/a
    w: Complex<HpFloat>,
}

fn geometry(inp: &MeasureInput, bits: usize) -> Geometry {
    let a = inp.a.to_complex(bits);
    let b = inp.b.to_complex(bits);
    let na = crate::scalar::c_norm_sqr(&a);
    let w = Complex::new(
        (b.re.clone() * a.re.clone() + b.im.clone() * a.im.clone()) / na.clone(),
        (b.im.clone() * a.re.clone() - b.re.clone() * a.im.clone()) / na,
    );
    let s = c_sqrt(&w);
    let one = HpFloat::from_i64(1, bits);
    let abs_a = c_abs(&a);
    let m = c_abs(&Complex::new(one.clone() - s.re.clone(), -s.im.clone()));
    let p = c_abs(&Complex::new(one + s.re.clone(), s.im.clone()));
    Geometry {
        small: abs_a.clone() * m.clone() * m,
        large: abs_a.clone() * p.clone() * p,
        abs_b: c_abs(&b),
        abs_diff: c_abs(&(a - b)),
        abs_a,
        w,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureDiagnostics {
    pub case: InputCase,
    pub d: i64,
    pub n_dn: f64,
    pub cn: f64,
    pub dn: f64,
    /// 2 l0 E = 18.4 C_n N_{d,n}
    pub two_l0_e: f64,
    /// arg(b/a) on the unit circle branch.
    pub phi: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub kappa: Option<f64>,
    pub c: Option<f64>,
    pub ln_c: Option<f64>,
    pub valid: bool,
    pub diagnostics: MeasureDiagnostics,
}

/// E rounded down, Q, kappa and c rounded up; invalid (not an error) when
/// E <= 1.
pub fn compute_measure(a: &QuadInt, b: &QuadInt, m: u64, n: u64, k: &MeasureConstants) -> Result<MeasureResult> {
    let inp = MeasureInput::new(a, b, m, n)?;
    if !(k.cn >= 1.0) || !k.cn.is_finite() || !k.log_dn.is_finite() || k.log_dn <= 0.0 {
        return Err(HmError::Domain(format!("need finite C_n >= 1 and log D_n > 0, got {k:?}")));
    }
    let bits = digits_to_bits(MEASURE_DIGITS);
    let g = geometry(&inp, bits);
    let ndn = n_dn(inp.d, n);
    let ln_ndn = ppr_ln(&ndn, bits);
    let ln_dn = HpFloat::from_f64(k.log_dn, bits);
    let e_hp = (ln_ndn.clone() - ln_dn.clone()).exp() / g.small.clone();
    let q_hp = (ln_dn - ln_ndn.clone()).exp() * g.large.clone();
    let e = round_down(&e_hp);
    let q = round_up(&q_hp);
    let valid = e > 1.0;
    let (kappa, c, ln_c) = if valid {
        let kappa_hp = HpFloat::from_f64(q, bits).ln() / HpFloat::from_f64(e, bits).ln();
        let kappa = round_up(&kappa_hp);
        let kh = HpFloat::from_f64(kappa, bits);
        let cn = HpFloat::from_f64(k.cn, bits);
        let tail = {
            let ln_n = HpFloat::from_i64(n as i64, bits).ln();
            let ln_nk = kh.clone() * ln_ndn.clone();
            if ln_nk > ln_n {
                ln_nk
            } else {
                ln_n
            }
        };
        let ln_c = HpFloat::from_i64(3, bits).ln()
            + g.abs_a.ln()
            + cn.ln()
            + kh * (HpFloat::from_i64(20, bits) * cn).ln()
            + tail;
        (Some(kappa), Some(round_up(&ln_c.exp())), Some(round_up(&ln_c)))
    } else {
        (None, None, None)
    };
    let phi = (inp.case == InputCase::UnitCircle).then(|| atan2(&g.w.im, &g.w.re).to_f64());
    let n_dn_val = ndn.value();
    Ok(MeasureResult {
        e,
        q,
        kappa,
        c,
        ln_c,
        valid,
        diagnostics: MeasureDiagnostics {
            case: inp.case,
            d: inp.d,
            n_dn: n_dn_val,
            cn: k.cn,
            dn: k.log_dn.exp(),
            two_l0_e: 18.4 * k.cn * n_dn_val,
            phi,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxSeqParams {
    pub k0: f64,
    pub l0: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "Q")]
    pub q: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxConstants {
    pub kappa: f64,
    /// 2 k0 (2 l0 E)^kappa
    pub c: f64,
    /// 2 k0 Q (2 l0 E)^kappa, with no exclusion of the approximants themselves.
    pub c_no_exclusion: f64,
}

/// kappa and c for a sequence with |q_r| < k0 Q^r, |q_r theta - p_r| <= l0 E^-r.
pub fn lemma_approx_c(p: &ApproxSeqParams) -> Result<ApproxConstants> {
    if !(p.e > 1.0) {
        return Err(HmError::Hypothesis(format!("E = {} must exceed 1", p.e)));
    }
    if !(p.q > 1.0) {
        return Err(HmError::Hypothesis(format!("Q = {} must exceed 1", p.q)));
    }
    if !(p.k0 > 0.0 && p.l0 > 0.0) {
        return Err(HmError::Hypothesis(format!("k0 = {}, l0 = {} must be positive", p.k0, p.l0)));
    }
    let two_l0_e = 2.0 * p.l0 * p.e;
    if two_l0_e < 1.0 {
        return Err(HmError::Hypothesis(format!("2 l0 E = {two_l0_e} is below 1")));
    }
    let kappa = p.q.ln() / p.e.ln();
    let c = 2.0 * p.k0 * two_l0_e.powf(kappa);
    Ok(ApproxConstants { kappa, c, c_no_exclusion: c * p.q })
}

/// k0 = 1.072 C_n, l0 = 9.2 C_n D_n |sqrt a - sqrt b|^2 with E, Q from the theorem.
pub fn theorem_params(a: &QuadInt, b: &QuadInt, m: u64, n: u64, k: &MeasureConstants) -> Result<ApproxSeqParams> {
    let res = compute_measure(a, b, m, n, k)?;
    let inp = MeasureInput::new(a, b, m, n)?;
    let g = geometry(&inp, digits_to_bits(MEASURE_DIGITS));
    let l0 = 9.2 * k.cn * k.log_dn.exp() * g.small.to_f64();
    Ok(ApproxSeqParams { k0: 1.072 * k.cn, l0, e: res.e, q: res.q })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximantPair {
    pub idx: HypgIndex,
    pub p: QuadInt,
    pub q: QuadInt,
    pub d_mnr: BigInt,
    pub n_dmnr: BigInt,
    /// Both coordinates of p and q came out integral.
    pub exact: bool,
}

/// p_r = (D/N) sum c_k a^k b^(r-k), q_r = (D/N) sum c_k a^(r-k) b^k, exactly.
pub fn approximants(a: &QuadInt, b: &QuadInt, m: u64, n: u64, r: u64) -> Result<ApproximantPair> {
    let inp = MeasureInput::new(a, b, m, n)?;
    approximants_for(&inp, r)
}

fn approximants_for(inp: &MeasureInput, r: u64) -> Result<ApproximantPair> {
    let idx = inp.with_r(r);
    let t = inp.a.t;
    let x = x_poly(&idx)?;
    let den = d_mnr(&idx)?.value.clone();
    let num = n_dmnr(&idx, inp.d)?.n_value;
    let scale = BigRational::new(den.clone(), num.clone());
    let pows = |base: &QuadInt| {
        let f = Qf::from_int(base);
        let mut v = vec![Qf::one()];
        for _ in 0..r {
            let next = v.last().unwrap().mul(&f, t);
            v.push(next);
        }
        v
    };
    let (pa, pb) = (pows(&inp.a), pows(&inp.b));
    let zero = Qf { x: BigRational::zero(), y: BigRational::zero() };
    let (mut p, mut q) = (zero.clone(), zero);
    let r = r as usize;
    for (k, ck) in x.coeffs.iter().enumerate() {
        q = q.add(&pa[r - k].mul(&pb[k], t).scale(ck));
        p = p.add(&pa[k].mul(&pb[r - k], t).scale(ck));
    }
    let (p, q) = (p.scale(&scale), q.scale(&scale));
    match (p.to_int(t), q.to_int(t)) {
        (Some(p), Some(q)) => Ok(ApproximantPair { idx, p, q, d_mnr: den, n_dmnr: num, exact: true }),
        _ => Err(HmError::Domain(format!("approximants at r = {r} are not algebraic integers"))),
    }
}

/// p_r q_{r+1} != p_{r+1} q_r.
pub fn consecutive_independent(a: &QuadInt, b: &QuadInt, m: u64, n: u64, r: u64) -> Result<bool> {
    let inp = MeasureInput::new(a, b, m, n)?;
    let s = approximants_for(&inp, r)?;
    let u = approximants_for(&inp, r + 1)?;
    let t = inp.a.t;
    let lhs = Qf::from_int(&s.p).mul(&Qf::from_int(&u.q), t);
    let rhs = Qf::from_int(&u.p).mul(&Qf::from_int(&s.q), t);
    Ok(lhs != rhs)
}

/// Lower, actual and upper values for |q_r|.
#[derive(Clone, Debug)]
pub struct QEstimate {
    pub r: u64,
    /// (D/N)(|a| |1 + Re(b/a)|)^r
    pub lower: HpFloat,
    pub actual: HpFloat,
    /// Bound before the constants are applied.
    pub sharp_upper: HpFloat,
    /// 1.072 C_n (D_n/N_{d,n})^r |sqrt a + sqrt b|^(2r)
    pub upper: HpFloat,
    pub holds: bool,
}

fn hp_int(v: &BigInt, bits: usize) -> HpFloat {
    HpFloat::from_bigint(v, bits)
}

fn quad_abs(v: &QuadInt, bits: usize) -> HpFloat {
    hp_int(&v.norm(), bits).sqrt()
}

fn dn_over_ndn_pow(inp: &MeasureInput, k: &MeasureConstants, r: u64, bits: usize) -> HpFloat {
    let ln = HpFloat::from_f64(k.log_dn, bits) - ppr_ln(&n_dn(inp.d, inp.idx.n), bits);
    (ln * HpFloat::from_i64(r as i64, bits)).exp()
}

pub fn q_estimates(a: &QuadInt, b: &QuadInt, m: u64, n: u64, r: u64, k: &MeasureConstants) -> Result<QEstimate> {
    let inp = MeasureInput::new(a, b, m, n)?;
    let bits = digits_to_bits(BRACKET_DIGITS);
    let g = geometry(&inp, bits);
    let pair = approximants_for(&inp, r)?;
    let idx = inp.with_r(r);
    let ratio = HpFloat::from_rational(&BigRational::new(pair.d_mnr.clone(), pair.n_dmnr.clone()), bits);
    let ri = r as u32;
    let one = HpFloat::from_i64(1, bits);
    let lower = ratio.clone() * (g.abs_a.clone() * (one + g.w.re.clone()).abs()).powi(ri);
    let actual = quad_abs(&pair.q, bits);
    let large_r = g.large.powi(ri);
    let sharp_upper = match inp.case {
        InputCase::Rational => ratio * large_r.clone(),
        InputCase::UnitCircle => {
            HpFloat::from_f64(1.072, bits) * ratio * HpFloat::from_rational(&gamma_ratio_lower(&idx), bits) * large_r.clone()
        }
    };
    let upper = HpFloat::from_f64(1.072, bits)
        * HpFloat::from_f64(k.cn, bits)
        * dn_over_ndn_pow(&inp, k, r, bits)
        * large_r;
    let holds = lower <= actual && actual <= sharp_upper && actual < upper;
    Ok(QEstimate { r, lower, actual, sharp_upper, upper, holds })
}

/// Both sides of the remainder estimate around |q_r (a/b)^(m/n) - p_r|.
#[derive(Clone, Debug)]
pub struct Bracket {
    pub r: u64,
    /// |(a - b)/(60 n a q_r)|
    pub lower: HpFloat,
    pub actual: HpFloat,
    /// 1.22 |(a - b)/b| C_n (D_n/N_{d,n})^r |sqrt a - sqrt b|^(2r)
    pub upper: HpFloat,
    /// Bounds before the constants and the 1/(60n) relaxation are applied.
    pub sharp_lower: HpFloat,
    pub sharp_upper: HpFloat,
    pub phi: Option<HpFloat>,
    /// lower < actual < upper
    pub holds: bool,
    pub sharp_holds: bool,
    /// |phi| <= 1.22 |(a - b)/b| on the unit circle branch.
    pub phi_ok: Option<bool>,
    /// N_{d,m,n,r} <= |a - b|^r, compared exactly through norms.
    pub numerator_gap_ok: bool,
}

pub fn remainder_bracket(
    a: &QuadInt,
    b: &QuadInt,
    m: u64,
    n: u64,
    r: u64,
    k: &MeasureConstants,
    digits: u32,
) -> Result<Bracket> {
    let inp = MeasureInput::new(a, b, m, n)?;
    let pair = approximants_for(&inp, r)?;
    let idx = inp.with_r(r);
    let q_digits = crate::valuation::bigint_to_f64_ln(&pair.q.norm()) / 2.0 / std::f64::consts::LN_10;
    let bits = digits_to_bits(digits.max(BRACKET_DIGITS) + q_digits.max(0.0).ceil() as u32 + 20);
    let g = geometry(&inp, bits);
    let theta = {
        let a_c = inp.a.to_complex(bits);
        let b_c = inp.b.to_complex(bits);
        let nb = crate::scalar::c_norm_sqr(&b_c);
        let ab = Complex::new(
            (a_c.re.clone() * b_c.re.clone() + a_c.im.clone() * b_c.im.clone()) / nb.clone(),
            (a_c.im.clone() * b_c.re.clone() - a_c.re.clone() * b_c.im.clone()) / nb,
        );
        c_pow_ratio(&ab, m as u32, n as u32)
    };
    let qc = pair.q.to_complex(bits);
    let pc = pair.p.to_complex(bits);
    let actual = c_abs(&(qc * theta.clone() - pc));
    let abs_q = quad_abs(&pair.q, bits);
    let nn = HpFloat::from_i64(n as i64, bits);
    let lower = g.abs_diff.clone() / (HpFloat::from_i64(60, bits) * nn * g.abs_a.clone() * abs_q.clone());
    let ri = r as u32;
    let small_r = g.small.powi(ri);
    let diff_over_b = g.abs_diff.clone() / g.abs_b.clone();
    let upper = HpFloat::from_f64(1.22, bits)
        * diff_over_b.clone()
        * HpFloat::from_f64(k.cn, bits)
        * dn_over_ndn_pow(&inp, k, r, bits)
        * small_r.clone();
    let ratio = HpFloat::from_rational(&BigRational::new(pair.d_mnr.clone(), pair.n_dmnr.clone()), bits);
    let nu_gamma = HpFloat::from_rational(&(gamma_ratio_upper(&idx) * idx.nu()), bits);
    let phi = (inp.case == InputCase::UnitCircle).then(|| atan2(&g.w.im, &g.w.re));
    let sharp_upper = match &phi {
        None => ratio.clone() * diff_over_b.clone() * nu_gamma * small_r,
        Some(ph) => ratio.clone() * nu_gamma * ph.abs() * small_r,
    };
    let one = HpFloat::from_i64(1, bits);
    let sharp_lower = ratio.clone()
        * ratio
        * HpFloat::from_rational(&pochhammer_ratio(&idx), bits)
        * g.abs_diff.powi(2 * ri + 1)
        * (one + g.w.re.clone()).powi(ri)
        * c_abs(&theta)
        / (g.abs_a.clone() * abs_q);
    let holds = lower < actual && actual < upper;
    let sharp_holds = sharp_lower <= actual && actual <= sharp_upper;
    let phi_ok = phi.as_ref().map(|ph| ph.abs() <= HpFloat::from_f64(1.22, bits) * diff_over_b.clone());
    let gap = QuadInt { x: &inp.a.x - &inp.b.x, y: &inp.a.y - &inp.b.y, t: inp.a.t }.norm();
    let numerator_gap_ok = &pair.n_dmnr * &pair.n_dmnr <= gap.pow(ri);
    Ok(Bracket { r, lower, actual, upper, sharp_lower, sharp_upper, phi, holds, sharp_holds, phi_ok, numerator_gap_ok })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialQuotientCheck {
    pub expected: BigInt,
    pub got: BigInt,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergentReport {
    pub height: BigInt,
    pub digits: u32,
    pub checked: usize,
    pub failures: Vec<(BigInt, BigInt)>,
    /// min over convergents of ln|theta - p/q| + ln c + (kappa + 1) ln q
    pub min_log_margin: f64,
    pub leading_quotients: Vec<BigInt>,
    pub partial_quotient: Option<PartialQuotientCheck>,
    pub all_pass: bool,
}

/// n a - (n + 3)/2 against the second partial quotient of (a/(a-1))^(1/n), n odd.
pub fn partial_quotient_law(a: u64, n: u64, digits: u32) -> Result<PartialQuotientCheck> {
    if n.is_multiple_of(2) || a < 2 {
        return Err(HmError::Domain(format!("need odd n and a >= 2, got a = {a}, n = {n}")));
    }
    let (ab, bb) = (BigInt::from(a), BigInt::from(a - 1));
    let expected = BigInt::from(n * a - (n + 3) / 2);
    let height = BigInt::from(10u32).pow(6);
    let cf = stable_expand(|bits| rational_power(&ab, &bb, 1, n as u32, bits).expect("positive"), digits, &height)?;
    let got = cf
        .quotients
        .get(1)
        .cloned()
        .ok_or_else(|| HmError::Precision("fewer than two partial quotients".into()))?;
    Ok(PartialQuotientCheck { ok: got == expected, expected, got })
}

/// Every convergent p/q of (a/b)^(m/n) with q <= height must satisfy
/// |theta - p/q| > 1/(c q^(kappa+1)).
pub fn verify_against_convergents(
    a: &QuadInt,
    b: &QuadInt,
    m: u64,
    n: u64,
    measure: &MeasureResult,
    height: &BigInt,
    digits: u32,
) -> Result<ConvergentReport> {
    let inp = MeasureInput::new(a, b, m, n)?;
    if inp.case != InputCase::Rational || !inp.a.is_rational() || !inp.b.is_rational() {
        return Err(HmError::Domain("convergent verification needs rational a > b > 0".into()));
    }
    let (Some(kappa), Some(ln_c), true) = (measure.kappa, measure.ln_c, measure.valid) else {
        return Err(HmError::Hypothesis("measure is not valid (E <= 1)".into()));
    };
    let (ab, bb) = (inp.a.x.clone(), inp.b.x.clone());
    let theta_at = |bits: usize| rational_power(&ab, &bb, m as u32, n as u32, bits).expect("positive");
    let cf = stable_expand(theta_at, digits, height)?;
    let bits = digits_to_bits(2 * digits);
    let theta = theta_at(bits);
    let margins: Vec<(f64, bool, (BigInt, BigInt))> = cf
        .convergents
        .par_iter()
        .map(|(p, q)| {
            let gap = (theta.clone() - hp_int(p, bits) / hp_int(q, bits)).abs();
            let rhs_ln = HpFloat::from_f64(ln_c, bits) + HpFloat::from_f64(kappa + 1.0, bits) * hp_int(q, bits).ln();
            if gap.is_zero() {
                return (f64::NEG_INFINITY, false, (p.clone(), q.clone()));
            }
            let margin = gap.ln() + rhs_ln;
            (margin.to_f64(), margin.is_positive(), (p.clone(), q.clone()))
        })
        .collect();
    let failures: Vec<_> = margins.iter().filter(|m| !m.1).map(|m| m.2.clone()).collect();
    let min_log_margin = margins.iter().map(|m| m.0).fold(f64::INFINITY, f64::min);
    let partial_quotient = (m == 1 && n % 2 == 1 && &bb + 1 == ab).then(|| {
        let expected = BigInt::from(n) * &ab - BigInt::from((n + 3) / 2);
        let got = cf.quotients.get(1).cloned().unwrap_or_default();
        PartialQuotientCheck { ok: got == expected, expected, got }
    });
    let all_pass = failures.is_empty() && partial_quotient.as_ref().is_none_or(|c| c.ok);
    Ok(ConvergentReport {
        height: height.clone(),
        digits,
        checked: margins.len(),
        failures,
        min_log_margin,
        leading_quotients: cf.quotients.iter().take(10).cloned().collect(),
        partial_quotient,
        all_pass,
    })
}
