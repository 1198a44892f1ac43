//! Geometry of the accepted ODE solutions: the fiber profile H on the moment
//! interval [0, 1], the Hermitian scalar curvature of the associated metric,
//! its conformal rescaling by u = aμ + b (constant by construction), and the
//! fundamental constant by quadrature and closed form.
//!
//! Everything lives in the moment coordinate: H(x) = f(x+λ)/P(x)^{n−1} with
//! P(x) = px + c, so the exact derivatives of f carry over by quotient rule.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calabi::{OdeSolution, RuledParams};
use crate::logpoly::LogLaurent;
use crate::quad::integrate_adaptive;
use crate::rational::{rat_int, rat_powi, to_f64};

/// Endpoint identity tolerance for H(0) = H(1) = 0 and H'(0) = 2 = -H'(1).
pub const ENDPOINT_TOL: f64 = 1e-9;
/// Quadrature tolerance for the fundamental constant.
pub const QUAD_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum RuledError {
    #[error("fiber polynomial P = px + c must be positive on [0, 1]")]
    NonPositiveFiberPolynomial,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Fiber profile H(x) = f(x+λ)/P(x)^{n−1} on [0, 1] with exact derivative data.
#[derive(Debug, Clone)]
pub struct FiberProfile {
    n: u32,
    p: f64,
    c: f64,
    lambda: f64,
    f: LogLaurent,
    f_d1: LogLaurent,
    f_d2: LogLaurent,
    pub h0: f64,
    pub h1: f64,
    pub dh0: f64,
    pub dh1: f64,
}

impl FiberProfile {
    /// Build a profile from any element of the solution class; endpoint data
    /// is computed but not gated (degenerate profiles are allowed for
    /// diagnostics and synthetic tests).
    pub fn from_f(f: LogLaurent, params: &RuledParams) -> Result<Self, RuledError> {
        let p = to_f64(&params.p);
        let c = to_f64(&params.c);
        if c <= 0.0 || p + c <= 0.0 {
            return Err(RuledError::NonPositiveFiberPolynomial);
        }
        let f_d1 = f.derivative();
        let f_d2 = f_d1.derivative();
        let mut profile = FiberProfile {
            n: params.n(),
            p,
            c,
            lambda: to_f64(&params.lambda()),
            f,
            f_d1,
            f_d2,
            h0: 0.0,
            h1: 0.0,
            dh0: 0.0,
            dh1: 0.0,
        };
        profile.h0 = profile.h(0.0);
        profile.h1 = profile.h(1.0);
        profile.dh0 = profile.h_prime(0.0);
        profile.dh1 = profile.h_prime(1.0);
        Ok(profile)
    }

    pub fn fiber_poly(&self, x: f64) -> f64 {
        self.p * x + self.c
    }

    fn eval_shifted(&self, g: &LogLaurent, x: f64) -> f64 {
        g.eval(x + self.lambda).expect("x + lambda > 0")
    }

    pub fn h(&self, x: f64) -> f64 {
        self.eval_shifted(&self.f, x) / self.fiber_poly(x).powi(self.n as i32 - 1)
    }

    /// H′ by the quotient rule on the exact f′.
    pub fn h_prime(&self, x: f64) -> f64 {
        let pw = self.fiber_poly(x);
        let fval = self.eval_shifted(&self.f, x);
        let fp = self.eval_shifted(&self.f_d1, x);
        let k = (self.n - 1) as f64;
        (fp * pw - k * self.p * fval) / pw.powi(self.n as i32)
    }

    /// f(x+λ), the profile in its un-normalized form (P^{n−1}·H).
    pub fn f_shifted(&self, x: f64) -> f64 {
        self.eval_shifted(&self.f, x)
    }

    pub fn f_shifted_d2(&self, x: f64) -> f64 {
        self.eval_shifted(&self.f_d2, x)
    }

    pub fn f_shifted_d1(&self, x: f64) -> f64 {
        self.eval_shifted(&self.f_d1, x)
    }

    pub fn endpoints_ok(&self) -> bool {
        self.h0.abs() <= ENDPOINT_TOL
            && self.h1.abs() <= ENDPOINT_TOL
            && (self.dh0 - 2.0).abs() <= ENDPOINT_TOL
            && (self.dh1 + 2.0).abs() <= ENDPOINT_TOL
    }
}

/// Fiber profile of an accepted solution.
pub fn fiber_profile(sol: &OdeSolution, params: &RuledParams) -> Result<FiberProfile, RuledError> {
    FiberProfile::from_f(sol.f.clone(), params)
}

/// Hermitian scalar curvature of the Calabi metric at moment coordinate x:
/// s^H = B/P − (P^{n−1}H)″/P^{n−1}, with (P^{n−1}H)″ = f″(x+λ) exact.
pub fn hermitian_scalar(profile: &FiberProfile, scal_base: f64, x: f64) -> f64 {
    let pw = profile.fiber_poly(x);
    scal_base / pw - profile.f_shifted_d2(x) / pw.powi(profile.n as i32 - 1)
}

/// Scalar curvature of the conformally rescaled metric g̃ = u^{−2} g at x,
/// with u = φ(μ) = aμ + b.
pub fn conformal_hermitian_scalar(
    profile: &FiberProfile,
    params: &RuledParams,
    scal_base: f64,
    x: f64,
) -> f64 {
    let a = to_f64(&params.a);
    let b = to_f64(&params.b);
    let phi = a * x + b;
    let m = params.m as f64;
    let pw = profile.fiber_poly(x).powi(profile.n as i32 - 1);
    phi * phi * hermitian_scalar(profile, scal_base, x) + m * phi * a * profile.f_shifted_d1(x) / pw
        - m * a * a * profile.f_shifted(x) / pw
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureProfile {
    pub sh_samples: Vec<[f64; 2]>,
    pub sh_tilde_samples: Vec<[f64; 2]>,
    /// Target constant a²A.
    pub constant_value: f64,
    pub max_deviation: f64,
}

/// Sample s^H and s̃^H on a uniform grid and record sup |s̃^H − a²A|.
pub fn conformal_scalar(
    profile: &FiberProfile,
    params: &RuledParams,
    sol: &OdeSolution,
    grid: usize,
) -> CurvatureProfile {
    let a = to_f64(&params.a);
    let constant_value = a * a * sol.coeff_a;
    let mut sh_samples = Vec::with_capacity(grid);
    let mut sh_tilde_samples = Vec::with_capacity(grid);
    let mut max_deviation = 0.0_f64;
    for i in 0..grid {
        let x = i as f64 / (grid - 1) as f64;
        let sh = hermitian_scalar(profile, sol.coeff_b, x);
        let sht = conformal_hermitian_scalar(profile, params, sol.coeff_b, x);
        sh_samples.push([x, sh]);
        sh_tilde_samples.push([x, sht]);
        max_deviation = max_deviation.max((sht - constant_value).abs());
    }
    CurvatureProfile {
        sh_samples,
        sh_tilde_samples,
        constant_value,
        max_deviation,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FundamentalConstantReport {
    /// vol(M) = ((p+c)^n − c^n)/(pn) with vol(B) normalized to 1.
    pub volume: f64,
    /// ∫₀¹ s^H(x) P(x)^{n−1} dx by adaptive quadrature.
    pub integral_sh: f64,
    pub c_value: f64,
    /// (2 s^H_S + 8c + 4p)/(2c + p); only defined for n = 2.
    pub c_closed_form: Option<f64>,
    pub quad_error: f64,
}

/// Fundamental constant of the conformal class: the volume-normalized total
/// Hermitian scalar curvature, with s^H_S identified with the solver output B
/// by the volume-rescaling convention.
pub fn fundamental_constant(
    profile: &FiberProfile,
    params: &RuledParams,
    scal_base: f64,
) -> Result<FundamentalConstantReport, RuledError> {
    if params.p == rat_int(0) {
        return Err(RuledError::InvalidInput("p must be nonzero".into()));
    }
    let n = params.n();
    let p_plus_c = &params.p + &params.c;
    let volume_rat = (rat_powi(&p_plus_c, n as i64) - rat_powi(&params.c, n as i64))
        / (&params.p * rat_int(n as i64));
    let volume = to_f64(&volume_rat);
    let exponent = n as i32 - 1;
    let integrand =
        |x: f64| hermitian_scalar(profile, scal_base, x) * profile.fiber_poly(x).powi(exponent);
    let (integral_sh, quad_error) = integrate_adaptive(&integrand, 0.0, 1.0, QUAD_TOL);
    let c_value = integral_sh / volume;
    let c_closed_form = if n == 2 {
        let c = to_f64(&params.c);
        let p = to_f64(&params.p);
        Some((2.0 * scal_base + 8.0 * c + 4.0 * p) / (2.0 * c + p))
    } else {
        None
    };
    Ok(FundamentalConstantReport {
        volume,
        integral_sh,
        c_value,
        c_closed_form,
        quad_error,
    })
}
