//! Exact calculus on finite Laurent polynomials plus a polynomial multiple of
//! ln(x), the closed-form solution class of the ruled-manifold ODE:
//!
//! ```text
//! f(x) = Σ q_k x^k  +  (Σ r_j x^j) · ln(x),      x > 0.
//! ```
//!
//! The class is closed under addition, differentiation, antidifferentiation
//! of its log-free members, and multiplication by log-free members. All
//! coefficients are exact rationals; zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::{rat_int, rat_powi, rat_to_string, to_f64, Rat};

#[derive(Debug, Error, PartialEq)]
pub enum ExactPolyError {
    /// (ln x)² would leave the representable class.
    #[error("product of two log-carrying elements leaves the class")]
    LogTimesLog,
    #[error("antiderivative is only defined for log-free elements")]
    LogTermsInAntiderivative,
    /// Keeps the log-polynomial part an honest polynomial.
    #[error("operation would create a negative exponent on the ln(x) part")]
    NegativeLogExponent,
    #[error("evaluation point must be positive, got {0}")]
    NonPositiveEvalPoint(f64),
}

/// Σ q_k x^k + (Σ r_j x^j)·ln(x) with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LogLaurent {
    laurent: BTreeMap<i64, Rat>,
    /// Exponents here are ≥ 0 (enforced by every constructor and operation).
    log: BTreeMap<i64, Rat>,
}

fn insert_term(map: &mut BTreeMap<i64, Rat>, exp: i64, coeff: Rat) {
    if coeff.is_zero() {
        return;
    }
    match map.get_mut(&exp) {
        Some(c) => {
            *c += coeff;
            if c.is_zero() {
                map.remove(&exp);
            }
        }
        None => {
            map.insert(exp, coeff);
        }
    }
}

impl LogLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, c)
    }

    /// c·x^k.
    pub fn monomial(exp: i64, coeff: Rat) -> Self {
        let mut laurent = BTreeMap::new();
        insert_term(&mut laurent, exp, coeff);
        LogLaurent {
            laurent,
            log: BTreeMap::new(),
        }
    }

    /// ln(x).
    pub fn ln_x() -> Self {
        let mut log = BTreeMap::new();
        log.insert(0, rat_int(1));
        LogLaurent {
            laurent: BTreeMap::new(),
            log,
        }
    }

    pub fn from_terms(
        laurent: impl IntoIterator<Item = (i64, Rat)>,
        log: impl IntoIterator<Item = (i64, Rat)>,
    ) -> Self {
        let mut out = Self::zero();
        for (k, c) in laurent {
            insert_term(&mut out.laurent, k, c);
        }
        for (j, c) in log {
            assert!(j >= 0, "log exponents must be non-negative");
            insert_term(&mut out.log, j, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.laurent.is_empty() && self.log.is_empty()
    }

    pub fn has_log_terms(&self) -> bool {
        !self.log.is_empty()
    }

    pub fn laurent_terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.laurent.iter().map(|(k, c)| (*k, c))
    }

    pub fn log_terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.log.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_laurent_exponent(&self) -> Option<i64> {
        self.laurent.keys().next().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.laurent {
            insert_term(&mut out.laurent, *k, c.clone());
        }
        for (j, c) in &other.log {
            insert_term(&mut out.log, *j, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat_int(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        LogLaurent {
            laurent: self.laurent.iter().map(|(k, c)| (*k, c * factor)).collect(),
            log: self.log.iter().map(|(k, c)| (*k, c * factor)).collect(),
        }
    }

    /// Product with a log-free element. The log part of `self` is multiplied
    /// through, so the result stays in the class.
    pub fn mul_laurent(&self, p: &Self) -> Result<Self, ExactPolyError> {
        if p.has_log_terms() {
            if self.has_log_terms() {
                return Err(ExactPolyError::LogTimesLog);
            }
            // multiplication is commutative and p is the log carrier here
            return p.mul_laurent(self);
        }
        let mut out = Self::zero();
        for (k1, c1) in &self.laurent {
            for (k2, c2) in &p.laurent {
                insert_term(&mut out.laurent, k1 + k2, c1 * c2);
            }
        }
        for (j, c1) in &self.log {
            for (k2, c2) in &p.laurent {
                if j + k2 < 0 {
                    return Err(ExactPolyError::NegativeLogExponent);
                }
                insert_term(&mut out.log, j + k2, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Exact d/dx. Uses d/dx(x^j ln x) = j x^{j-1} ln x + x^{j-1}.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.laurent {
            insert_term(&mut out.laurent, k - 1, c * rat_int(*k));
        }
        for (j, c) in &self.log {
            insert_term(&mut out.laurent, j - 1, c.clone());
            if *j != 0 {
                insert_term(&mut out.log, j - 1, c * rat_int(*j));
            }
        }
        out
    }

    /// Exact primitive with zero integration constant:
    /// ∫x^k = x^{k+1}/(k+1) for k ≠ -1 and ∫x^{-1} = ln x.
    pub fn antiderivative(&self) -> Result<Self, ExactPolyError> {
        if self.has_log_terms() {
            return Err(ExactPolyError::LogTermsInAntiderivative);
        }
        let mut out = Self::zero();
        for (k, c) in &self.laurent {
            if *k == -1 {
                insert_term(&mut out.log, 0, c.clone());
            } else {
                insert_term(&mut out.laurent, k + 1, c / rat_int(k + 1));
            }
        }
        Ok(out)
    }

    /// Exact binomial expansion of (p·x + q)^e.
    pub fn poly_pow(p: &Rat, q: &Rat, exponent: u32) -> Self {
        let mut out = Self::constant(rat_int(1));
        let linear = Self::from_terms([(1, p.clone()), (0, q.clone())], []);
        for _ in 0..exponent {
            out = out.mul_laurent(&linear).expect("log-free");
        }
        out
    }

    /// Floating-point value of f(x), rejecting x ≤ 0. Log-free elements
    /// without negative exponents take the exact rational path (x converts
    /// exactly), so polynomial evaluations round only once at the end.
    pub fn eval(&self, x: f64) -> Result<f64, ExactPolyError> {
        if !x.is_finite() || x <= 0.0 {
            return Err(ExactPolyError::NonPositiveEvalPoint(x));
        }
        if self.log.is_empty() && self.min_laurent_exponent().is_none_or(|k| k >= 0) {
            let exact = self
                .eval_rational(&crate::rational::rat_from_f64(x))
                .expect("log-free element");
            return Ok(to_f64(&exact));
        }
        let mut value = 0.0;
        for (k, c) in &self.laurent {
            value += to_f64(c) * x.powi(*k as i32);
        }
        if !self.log.is_empty() {
            let mut logpoly = 0.0;
            for (j, c) in &self.log {
                logpoly += to_f64(c) * x.powi(*j as i32);
            }
            value += logpoly * x.ln();
        }
        Ok(value)
    }

    /// Exact rational value; available when there is no logarithmic part.
    pub fn eval_rational(&self, x: &Rat) -> Option<Rat> {
        if self.has_log_terms() || x.is_zero() {
            return None;
        }
        let mut value = Rat::zero();
        for (k, c) in &self.laurent {
            value += c * rat_powi(x, *k);
        }
        Some(value)
    }

    /// Canonical text form: exponent-ascending `c*x^k` terms, then the log
    /// block `(r_0*x^0 + ...)*ln(x)`. Coefficients render as `n` or `n/d`.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in &self.laurent {
            push_term(&mut out, &mut first, c, *k);
        }
        if !self.log.is_empty() {
            if !first {
                out.push_str(" + ");
            }
            out.push('(');
            let mut log_first = true;
            for (j, c) in &self.log {
                push_term(&mut out, &mut log_first, c, *j);
            }
            out.push_str(")*ln(x)");
        }
        out
    }
}

fn push_term(out: &mut String, first: &mut bool, coeff: &Rat, exp: i64) {
    use num_traits::Signed;
    let (sep, c) = if *first {
        ("", coeff.clone())
    } else if coeff.is_negative() {
        (" - ", -coeff.clone())
    } else {
        (" + ", coeff.clone())
    };
    out.push_str(sep);
    out.push_str(&rat_to_string(&c));
    out.push_str("*x^");
    out.push_str(&exp.to_string());
    *first = false;
}

impl fmt::Display for LogLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn x_pow(k: i64) -> LogLaurent {
        LogLaurent::monomial(k, rat_int(1))
    }

    #[test]
    fn add_cancellation() {
        // (x + ln x) + (-x) = ln x
        let f = x_pow(1).add(&LogLaurent::ln_x());
        let g = x_pow(1).neg();
        assert_eq!(f.add(&g), LogLaurent::ln_x());
        // x^-1 + x^-1 = 2 x^-1
        let h = x_pow(-1).add(&x_pow(-1));
        assert_eq!(h, LogLaurent::monomial(-1, rat_int(2)));
        // f + 0 = f
        assert_eq!(f.add(&LogLaurent::zero()), f);
    }

    #[test]
    fn mul_laurent_cases() {
        // (ln x)·x² = x²·ln x
        let r = LogLaurent::ln_x().mul_laurent(&x_pow(2)).unwrap();
        assert_eq!(r, LogLaurent::from_terms([], [(2, rat_int(1))]));
        // (x^-1 + ln x)·x = 1 + x·ln x
        let f = x_pow(-1).add(&LogLaurent::ln_x());
        let r = f.mul_laurent(&x_pow(1)).unwrap();
        assert_eq!(
            r,
            LogLaurent::from_terms([(0, rat_int(1))], [(1, rat_int(1))])
        );
        // x²·x^-2 = 1
        let r = x_pow(2).mul_laurent(&x_pow(-2)).unwrap();
        assert_eq!(r, LogLaurent::constant(rat_int(1)));
        // log·log rejected
        assert_eq!(
            LogLaurent::ln_x().mul_laurent(&LogLaurent::ln_x()),
            Err(ExactPolyError::LogTimesLog)
        );
        // log part may commute from either factor
        let r = x_pow(2).mul_laurent(&LogLaurent::ln_x()).unwrap();
        assert_eq!(r, LogLaurent::from_terms([], [(2, rat_int(1))]));
    }

    #[test]
    fn derivative_cases() {
        // d/dx[(2+4x)ln x] = 4·ln x + 2x^-1 + 4
        let f = LogLaurent::from_terms([], [(0, rat_int(2)), (1, rat_int(4))]);
        let expected =
            LogLaurent::from_terms([(-1, rat_int(2)), (0, rat_int(4))], [(0, rat_int(4))]);
        assert_eq!(f.derivative(), expected);
        // d/dx[x³ + ln x] = 3x² + x^-1
        let f = x_pow(3).add(&LogLaurent::ln_x());
        let expected = LogLaurent::from_terms([(2, rat_int(3)), (-1, rat_int(1))], []);
        assert_eq!(f.derivative(), expected);
        // d/dx[c] = 0
        assert!(LogLaurent::constant(rat(7, 3)).derivative().is_zero());
    }

    #[test]
    fn antiderivative_cases() {
        // ∫(3x² + x^-1) = x³ + ln x
        let p = LogLaurent::from_terms([(2, rat_int(3)), (-1, rat_int(1))], []);
        assert_eq!(
            p.antiderivative().unwrap(),
            x_pow(3).add(&LogLaurent::ln_x())
        );
        // ∫(-3x^-1 - (3/2)x^-2) = -3 ln x + (3/2) x^-1
        let p = LogLaurent::from_terms([(-1, rat_int(-3)), (-2, rat(-3, 2))], []);
        let expected = LogLaurent::from_terms([(-1, rat(3, 2))], [(0, rat_int(-3))]);
        assert_eq!(p.antiderivative().unwrap(), expected);
        // ∫0 = 0
        assert!(LogLaurent::zero().antiderivative().unwrap().is_zero());
        // log input rejected
        assert!(LogLaurent::ln_x().antiderivative().is_err());
    }

    #[test]
    fn eval_cases() {
        // (x² + ln x)(1) = 1
        let f = x_pow(2).add(&LogLaurent::ln_x());
        assert_eq!(f.eval(1.0).unwrap(), 1.0);
        // x^-1 at 2 = 0.5
        assert_eq!(x_pow(-1).eval(2.0).unwrap(), 0.5);
        // (x ln x)(e) = e
        let f = LogLaurent::from_terms([], [(1, rat_int(1))]);
        let e = std::f64::consts::E;
        assert!((f.eval(e).unwrap() - e).abs() <= 4.0 * f64::EPSILON * e);
        assert!(f.eval(0.0).is_err());
        assert!(f.eval(-1.0).is_err());
    }

    #[test]
    fn polynomial_eval_takes_the_exact_path() {
        // (x² + x³) at the float nearest 0.1: one final rounding only
        let f = LogLaurent::from_terms([(2, rat_int(1)), (3, rat_int(1))], []);
        let x = 0.1f64;
        let exact = f.eval_rational(&crate::rational::rat_from_f64(x)).unwrap();
        assert_eq!(f.eval(x).unwrap(), crate::rational::to_f64(&exact));
    }

    #[test]
    fn eval_rational_exact() {
        let f = LogLaurent::from_terms([(0, rat_int(1)), (2, rat(3, 2))], []);
        assert_eq!(f.eval_rational(&rat(1, 2)).unwrap(), rat(11, 8));
        assert!(LogLaurent::ln_x().eval_rational(&rat(1, 2)).is_none());
    }

    #[test]
    fn poly_pow_cases() {
        // (3x + 3/2)^1
        let p = LogLaurent::poly_pow(&rat_int(3), &rat(3, 2), 1);
        assert_eq!(
            p,
            LogLaurent::from_terms([(1, rat_int(3)), (0, rat(3, 2))], [])
        );
        // (x+1)² = x² + 2x + 1
        let p = LogLaurent::poly_pow(&rat_int(1), &rat_int(1), 2);
        assert_eq!(
            p,
            LogLaurent::from_terms([(2, rat_int(1)), (1, rat_int(2)), (0, rat_int(1))], [])
        );
        // (px+q)^0 = 1
        let p = LogLaurent::poly_pow(&rat_int(5), &rat(-7, 2), 0);
        assert_eq!(p, LogLaurent::constant(rat_int(1)));
    }

    #[test]
    fn canonical_text() {
        let f = LogLaurent::from_terms(
            [(-1, rat(-1, 2)), (2, rat(3, 2))],
            [(0, rat_int(1)), (1, rat_int(-4))],
        );
        assert_eq!(
            f.to_canonical_string(),
            "-1/2*x^-1 + 3/2*x^2 + (1*x^0 - 4*x^1)*ln(x)"
        );
        assert_eq!(LogLaurent::zero().to_canonical_string(), "0");
    }
}
