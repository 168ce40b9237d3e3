//! Tanh-sinh quadrature on [0, 1] for complex-valued integrands.
//!
//! Nodes are stored as (t, 1 - t) pairs computed from E = exp(-2|s|) so that
//! both endpoints are resolved to full relative precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;

use crate::hp::HpFloat;
use crate::scalar::{c_abs, Real};

#[derive(Clone, Debug)]
pub struct Node<T> {
    /// 1 / (1 + E)
    pub big: T,
    /// E / (1 + E)
    pub small: T,
    /// pi cosh(u) E / (1 + E)^2, without the step h
    pub weight: T,
}

/// Level 0 holds u = 0, 1, 2, ...; level L > 0 holds odd multiples of 2^-L.
#[derive(Clone, Debug)]
pub struct NodeTable<T> {
    bits: usize,
    levels: Vec<Arc<Vec<Node<T>>>>,
}

#[derive(Clone, Debug)]
pub struct QuadResult<T> {
    pub value: Complex<T>,
    /// Estimated relative error, log10.
    pub err_log10: f64,
    pub levels: usize,
    pub evaluations: usize,
}

impl<T: Real> NodeTable<T> {
    pub fn new(like: &T) -> Self {
        NodeTable { bits: like.bits(), levels: Vec::new() }
    }

    fn node_at(u: &T, like: &T) -> Node<T> {
        let one = T::lift_int(1, like);
        let half = T::lift(0.5, like);
        let eu = u.exp();
        let emu = one.clone() / eu.clone();
        let sinh = (eu.clone() - emu.clone()) * half.clone();
        let cosh = (eu + emu) * half;
        let pi = T::pi(like);
        let e = (-(pi.clone() * sinh)).exp();
        let ope = one.clone() + e.clone();
        Node {
            big: one / ope.clone(),
            small: e.clone() / ope.clone(),
            weight: pi * cosh * e / (ope.clone() * ope),
        }
    }

    fn build_level(&self, level: usize, like: &T) -> Vec<Node<T>> {
        let cutoff = -((self.bits + 24) as f64) * std::f64::consts::LN_2;
        let mut out = Vec::new();
        let h = 0.5f64.powi(level as i32);
        let mut k: u64 = if level == 0 { 0 } else { 1 };
        let step = if level == 0 { 1 } else { 2 };
        loop {
            let uf = k as f64 * h;
            // ln weight ~ ln(pi cosh u) - pi sinh u
            let lw = (std::f64::consts::PI * uf.cosh()).ln() - std::f64::consts::PI * uf.sinh();
            if lw < cutoff {
                break;
            }
            let u = T::lift_int(k as i64, like) / T::lift_int(1i64 << level, like);
            out.push(Self::node_at(&u, like));
            k += step;
        }
        out
    }

    pub fn ensure(&mut self, level: usize, like: &T) {
        while self.levels.len() <= level {
            let l = self.levels.len();
            let nodes = self.build_level(l, like);
            self.levels.push(Arc::new(nodes));
        }
    }

    /// Integrate f(t, 1 - t) over [0, 1] until the estimated relative error
    /// drops below 10^-target_digits or `max_level` is reached.
    pub fn integrate<F>(&mut self, f: F, like: &T, target_digits: f64, max_level: usize) -> QuadResult<T>
    where
        F: Fn(&T, &T) -> Complex<T>,
    {
        let zero = T::lift_int(0, like);
        let mut sum = Complex::new(zero.clone(), zero.clone());
        let mut history: Vec<Complex<T>> = Vec::new();
        let mut evals = 0usize;
        let mut err = 0.0;
        let floor = -(self.bits as f64) * std::f64::consts::LOG10_2 + 2.0;
        for level in 0..=max_level {
            self.ensure(level, like);
            let nodes = self.levels[level].clone();
            for (i, nd) in nodes.iter().enumerate() {
                let a = f(&nd.big, &nd.small);
                evals += 1;
                let mut acc = a;
                if !(level == 0 && i == 0) {
                    acc = acc + f(&nd.small, &nd.big);
                    evals += 1;
                }
                sum = sum + acc.scale(nd.weight.clone());
            }
            let h = T::lift(0.5f64.powi(level as i32), like);
            let est = sum.clone().scale(h);
            history.push(est.clone());
            if level >= 2 {
                let mag = c_abs(&est).to_f64().max(f64::MIN_POSITIVE);
                let d1 = c_abs(&(est.clone() - history[level - 1].clone())).to_f64() / mag;
                let d2 = c_abs(&(est.clone() - history[level - 2].clone())).to_f64() / mag;
                let l1 = d1.max(1e-300).log10();
                let l2 = d2.max(1e-300).log10();
                err = if d1 == 0.0 {
                    floor
                } else if l2 < 0.0 {
                    (l1 * l1 / l2).max(2.0 * l1).max(floor)
                } else {
                    0.0
                };
                if err < -target_digits {
                    return QuadResult { value: est, err_log10: err, levels: level, evaluations: evals };
                }
            }
        }
        QuadResult {
            value: history.pop().expect("at least one level"),
            err_log10: err,
            levels: max_level,
            evaluations: evals,
        }
    }
}

fn hp_cache() -> &'static Mutex<HashMap<usize, NodeTable<HpFloat>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, NodeTable<HpFloat>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared node table for a binary precision; levels are built on demand.
pub fn hp_table(bits: usize) -> NodeTable<HpFloat> {
    let like = HpFloat::from_i64(0, bits);
    let key = like.bits();
    let guard = hp_cache().lock().expect("node cache");
    guard.get(&key).cloned().unwrap_or_else(|| NodeTable::new(&like))
}

pub fn hp_table_store(table: NodeTable<HpFloat>) {
    let mut guard = hp_cache().lock().expect("node cache");
    let keep = guard.get(&table.bits).map(|t| t.levels.len()).unwrap_or(0);
    if table.levels.len() > keep {
        guard.insert(table.bits, table);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_moment_f64() {
        // int t^3 (1-t)^2 = 3! 2! / 6! = 1/60
        let mut tab = NodeTable::new(&0f64);
        let r = tab.integrate(|t, tc| Complex::new(t.powi(3) * tc.powi(2), 0.0), &0f64, 13.0, 10);
        assert!((r.value.re - 1.0 / 60.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity_f64() {
        // int t^{-1/2} = 2
        let mut tab = NodeTable::new(&0f64);
        let r = tab.integrate(|t, _| Complex::new(1.0 / t.sqrt(), 0.0), &0f64, 12.0, 12);
        assert!((r.value.re - 2.0).abs() < 1e-10, "{}", r.value.re);
    }

    #[test]
    fn high_precision_log_integral() {
        // int_0^1 1/(1+t) = ln 2
        let like = HpFloat::from_i64(0, 384);
        let mut tab = hp_table(384);
        let one = HpFloat::from_i64(1, 384);
        let r = tab.integrate(
            |t, _| Complex::new(one.clone() / (one.clone() + t.clone()), HpFloat::from_i64(0, 64)),
            &like,
            100.0,
            12,
        );
        hp_table_store(tab);
        let ln2 = HpFloat::from_i64(2, 384).ln();
        let err = (r.value.re - ln2).abs().to_f64();
        assert!(err < 1e-100, "err {err:e}");
    }
}
