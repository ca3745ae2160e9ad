//! Pochhammer symbols, gamma-function ratios, the ball normalisation constant
//! `c_lambda`, Dirichlet-type orthant integrals and the total mass of the
//! Romanovski–Routh weight.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::quadrature::{self, Estimate, QuadratureSpec};

/// Weight parameter `lambda > -1` of the Bergman space.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct WeightParam(f64);

impl WeightParam {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda > -1.0 && lambda.is_finite() {
            Ok(Self(lambda))
        } else {
            Err(Error::Domain(format!("lambda = {lambda} must be a finite number > -1")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for WeightParam {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WeightParam> for f64 {
    fn from(w: WeightParam) -> f64 {
        w.0
    }
}

/// `ln |Gamma(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// `ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b)`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `Gamma(a) / Gamma(b)` for positive arguments, through log-gamma.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    (ln_gamma(a) - ln_gamma(b)).exp()
}

/// Rising factorial `(x)_m = x (x+1) ... (x+m-1)`; `(x)_0 = 1`.
pub fn pochhammer(x: f64, m: u32) -> f64 {
    (0..m).map(|k| x + k as f64).product()
}

/// `c_lambda = (lambda + 1)_n / pi^n`, the constant making `v_lambda` a
/// probability measure on the unit ball of `C^n`.
pub fn c_lambda(n: usize, lambda: f64) -> f64 {
    pochhammer(lambda + 1.0, n as u32) / PI.powi(n as i32)
}

/// `int_{R^n_+} h^p (1 + |h|_1)^{-s} dh = p! Gamma(s - |p| - n) / Gamma(s)`,
/// with `n = p.dim()`.
pub fn dirichlet_integral(p: &MultiIndex, s: f64) -> Result<f64> {
    let n = p.dim() as f64;
    let order = p.order() as f64;
    let rest = s - order - n;
    if !(rest > 0.0) {
        return Err(Error::Divergence(format!(
            "orthant integral needs s > |p| + n, got s = {s}, |p| + n = {}",
            order + n
        )));
    }
    Ok((p.ln_factorial() + ln_gamma(rest) - ln_gamma(s)).exp())
}

/// `V(alpha, beta) = int_R e^{-alpha arccot u} (1 + u^2)^{beta - 1} du`
/// (arccot with values in `(0, pi)`); finite exactly for `beta < 1/2`.
pub fn romanovski_total(alpha: f64, beta: f64) -> Result<f64> {
    Ok(romanovski_total_with_err(alpha, beta, &QuadratureSpec::default())?.value)
}

/// [`romanovski_total`] with an explicit rule and an error estimate.
pub fn romanovski_total_with_err(alpha: f64, beta: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if !(beta < 0.5) {
        return Err(Error::Divergence(format!(
            "V(alpha, beta) diverges for beta = {beta} >= 1/2"
        )));
    }
    quadrature::integrate_rr(alpha, 1.0 - beta, None, spec)
}
