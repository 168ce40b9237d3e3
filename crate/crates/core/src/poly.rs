//! Dense univariate polynomials, index = degree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    pub coeffs: Vec<T>,
}

pub type RatPoly = Poly<BigRational>;
pub type IntPoly = Poly<BigInt>;

impl<T: Clone + Num> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Poly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn lead(&self) -> &T {
        self.coeffs.last().expect("non-empty")
    }

    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly { coeffs: c }
    }

    /// Horner evaluation in the coefficient ring.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Horner evaluation after mapping coefficients into another ring.
    pub fn eval_with<U, F>(&self, x: &U, map: F) -> U
    where
        U: Clone + std::ops::Add<Output = U> + std::ops::Mul<Output = U>,
        F: Fn(&T) -> U,
    {
        let mut it = self.coeffs.iter().rev();
        let mut acc = map(it.next().expect("non-empty"));
        for c in it {
            acc = acc * x.clone() + map(c);
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                let b = o.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        Poly::new(c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut c = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, k: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![T::zero()]);
        }
        let mut k = T::zero();
        let c = self.coeffs[1..]
            .iter()
            .map(|c| {
                k = k.clone() + T::one();
                c.clone() * k.clone()
            })
            .collect();
        Poly::new(c)
    }
}

impl RatPoly {
    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Multiply through by `k` and return integer coefficients; `None` if some
    /// coefficient stays fractional.
    pub fn to_int_scaled(&self, k: &BigInt) -> Option<IntPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let v = c * BigRational::from_integer(k.clone());
            if !v.is_integer() {
                return None;
            }
            out.push(v.to_integer());
        }
        Some(Poly::new(out))
    }
}

impl IntPoly {
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let body = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("({}/{})", a.numer(), a.denom())
            };
            match k {
                0 => write!(f, "{body}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{body}")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn display_forms() {
        let p = Poly::new(vec![q(1, 1), q(2, 1)]);
        assert_eq!(p.to_string(), "1 + 2z");
        let p = Poly::new(vec![q(1, 1), q(-5, 3), q(1, 1)]);
        assert_eq!(p.to_string(), "1 - (5/3)z + z^2");
    }

    #[test]
    fn arithmetic() {
        let a: IntPoly = Poly::new(vec![1.into(), 1.into()]);
        let sq = a.mul(&a);
        assert_eq!(sq.coeffs, vec![1.into(), 2.into(), 1.into()]);
        assert_eq!(sq.eval(&BigInt::from(3)), BigInt::from(16));
        assert_eq!(sq.derivative().coeffs, vec![2.into(), 2.into()]);
        assert_eq!(Poly::new(vec![BigInt::from(0), 0.into()]).degree(), 0);
    }

    #[test]
    fn lcm_and_scaling() {
        let p = Poly::new(vec![q(1, 2), q(1, 3)]);
        let l = p.denominator_lcm();
        assert_eq!(l, BigInt::from(6));
        assert!(p.to_int_scaled(&l).is_some());
        assert!(p.to_int_scaled(&BigInt::from(3)).is_none());
    }
}
