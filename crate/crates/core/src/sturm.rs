//! Sturm sequences over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::poly::{IntPoly, Poly};

/// a * lc(b)^(deg a - deg b + 1) mod b, exact over Z.
pub fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    assert!(!b.is_zero());
    let db = b.degree();
    let lb = b.lead().clone();
    let mut r = a.coeffs.clone();
    if r.len() <= db {
        return Poly::new(r);
    }
    let delta = r.len() - 1 - db;
    let mut steps = 0;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        let shift = dr - db;
        for (i, bc) in b.coeffs.iter().enumerate() {
            r[i + shift] -= &lr * bc;
        }
        r.pop();
        while r.len() > 1 && r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        steps += 1;
    }
    // pad the missing multiplications so the factor is exactly lc^(delta+1)
    for _ in steps..delta + 1 {
        for c in r.iter_mut() {
            *c *= &lb;
        }
    }
    Poly::new(r)
}

fn primitive(p: IntPoly) -> IntPoly {
    let g = p.content();
    if g.is_zero() || g == BigInt::from(1) {
        return p;
    }
    Poly::new(p.coeffs.into_iter().map(|c| c.div_floor(&g)).collect())
}

/// Sign-faithful primitive Sturm chain of `p`.
pub fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![primitive(p.clone())];
    let d = p.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(primitive(d));
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.degree() == 0 {
            break;
        }
        let delta = a.degree() - b.degree();
        let pr = pseudo_rem(a, b);
        if pr.is_zero() {
            break;
        }
        let flip = b.lead().is_negative() && (delta + 1) % 2 == 1;
        let next = if flip { pr } else { Poly::new(pr.coeffs.into_iter().map(|c| -c).collect()) };
        chain.push(primitive(next));
    }
    chain
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn sign(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

/// Number of distinct real roots in (-inf, 0]; zero at 0 counts.
pub fn count_negative_roots(p: &IntPoly) -> usize {
    let chain = sturm_chain(p);
    let at_minus_inf = variations(chain.iter().map(|q| {
        let s = sign(q.lead());
        if q.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    let at_zero = variations(chain.iter().map(|q| sign(&q.coeffs[0])));
    at_minus_inf - at_zero
}

/// Distinct real roots in (a, b] for integer endpoints.
pub fn count_roots_between(p: &IntPoly, a: &BigInt, b: &BigInt) -> usize {
    let chain = sturm_chain(p);
    let va = variations(chain.iter().map(|q| sign(&q.eval(a))));
    let vb = variations(chain.iter().map(|q| sign(&q.eval(b))));
    va - vb
}
