//! Small multivariate polynomials over exact rationals, enough for toric
//! metrics and test functions in one or two moment variables.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::{rat_int, to_f64, Rat};

/// Polynomial in z_1, …, z_n (n ≤ 2 in practice), exponents stored per term.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly {
    pub n: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(n: usize) -> Self {
        MPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    /// The coordinate z_i (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut exp = vec![0; n];
        exp[i] = 1;
        let mut p = Self::zero(n);
        p.terms.insert(exp, rat_int(1));
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            assert_eq!(e.len(), n);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: Vec<u32>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        MPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// ∂/∂z_i, exact.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.n);
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * rat_int(e[i] as i64));
        }
        out
    }

    pub fn eval_f64(&self, z: &[f64]) -> f64 {
        assert_eq!(z.len(), self.n);
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = to_f64(c);
            for (zi, &ei) in z.iter().zip(e) {
                t *= zi.powi(ei as i32);
            }
            acc += t;
        }
        acc
    }

    pub fn eval_rat(&self, z: &[Rat]) -> Rat {
        assert_eq!(z.len(), self.n);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (zi, &ei) in z.iter().zip(e) {
                t *= zi.pow(ei as i32);
            }
            acc += t;
        }
        acc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    /// Restrict a 1-variable polynomial to its coefficient list (low to high).
    pub fn univariate_coeffs(&self) -> Vec<Rat> {
        assert_eq!(self.n, 1);
        let deg = self.terms.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
        let mut out = vec![Rat::zero(); deg + 1];
        for (e, c) in &self.terms {
            out[e[0] as usize] = c.clone();
        }
        out
    }
}
