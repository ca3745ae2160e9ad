//! Numerical integration for the three integral families used by the
//! multiplier formulas:
//!
//! * weighted integrals over the positive orthant, `int h^p (1+|h|_1)^{-s} f(h) dh`
//!   ([`integrate_h_weighted`]),
//! * Romanovski–Routh line integrals `int e^{-alpha arccot u} (1+u^2)^{-q} g(u) du`
//!   ([`integrate_rr`]),
//! * integrals against the weighted volume `v_lambda` of the unit ball
//!   ([`integrate_ball`]).
//!
//! Every integrator returns an [`Estimate`] whose error is the difference
//! between the requested rule and a rule with half as many nodes per axis.

pub mod ball;
pub mod gauss;
pub mod line;
pub mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ball::{integrate_ball, integrate_ball_with_breaks};
pub use line::integrate_rr;
pub use simplex::integrate_h_weighted;

/// Which rule to use for orthant integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Tensor Gauss–Legendre on the collapsed cube, weight evaluated pointwise.
    TensorGauss,
    /// Collapsed (Duffy) coordinates with Gauss–Jacobi nodes absorbing the weight.
    #[default]
    DuffySimplex,
    /// Importance-sampled Monte Carlo with Beta-distributed collapsed coordinates.
    MonteCarlo,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensor-gauss" => Ok(Method::TensorGauss),
            "duffy-simplex" => Ok(Method::DuffySimplex),
            "monte-carlo" => Ok(Method::MonteCarlo),
            other => Err(Error::Quadrature(format!("unknown method `{other}`"))),
        }
    }
}

/// Controls every numerical integral in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    /// Gauss nodes per axis and per panel.
    pub nodes_per_axis: usize,
    /// Equal-width panels per axis, on top of breakpoint splits.
    pub subdivisions: usize,
    /// Nodes are doubled until the error estimate drops below this (relative).
    pub target_rel_tol: f64,
    pub method: Method,
    /// Only used by [`Method::MonteCarlo`].
    pub rng_seed: u64,
    /// Sample count for [`Method::MonteCarlo`].
    pub samples: usize,
    /// Upper limit on total leaf nodes when refining.
    pub max_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_per_axis: 24,
            subdivisions: 1,
            target_rel_tol: 1e-10,
            method: Method::DuffySimplex,
            rng_seed: 0,
            samples: 200_000,
            max_nodes: 4_000_000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_nodes(mut self, nodes_per_axis: usize) -> Self {
        self.nodes_per_axis = nodes_per_axis;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis < 2 {
            return Err(Error::Quadrature("nodes_per_axis must be at least 2".into()));
        }
        if !(self.target_rel_tol > 0.0) {
            return Err(Error::Quadrature("target_rel_tol must be positive".into()));
        }
        if self.subdivisions == 0 {
            return Err(Error::Quadrature("subdivisions must be at least 1".into()));
        }
        if self.method == Method::MonteCarlo && self.samples < 2 {
            return Err(Error::Quadrature("monte-carlo needs at least 2 samples".into()));
        }
        Ok(())
    }

    /// Node counts per axis to try, in increasing order, for a `dims`-dimensional rule.
    pub(crate) fn refinement_ladder(&self, dims: usize) -> Vec<usize> {
        let cap = if dims == 0 {
            usize::MAX
        } else {
            (self.max_nodes as f64).powf(1.0 / dims as f64).floor() as usize
        };
        let mut out = vec![self.nodes_per_axis];
        let mut m = self.nodes_per_axis;
        for _ in 0..3 {
            m *= 2;
            if m > cap || m > 512 {
                break;
            }
            out.push(m);
        }
        out
    }
}

/// A value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

impl Estimate {
    pub fn new(value: f64, err: f64) -> Self {
        Self { value, err }
    }

    pub fn rel_err(&self) -> f64 {
        if self.value == 0.0 {
            self.err
        } else {
            self.err / self.value.abs()
        }
    }
}

/// Runs `eval` on the requested and half-size node counts, doubling until the
/// estimate meets `target_rel_tol` or the ladder is exhausted. `diff` returns
/// `(error, scale)` for a (fine, coarse) pair.
pub(crate) fn refine<T>(
    spec: &QuadratureSpec,
    dims: usize,
    mut eval: impl FnMut(usize) -> Result<T>,
    diff: impl Fn(&T, &T) -> (f64, f64),
) -> Result<(T, f64)> {
    spec.validate()?;
    let ladder = spec.refinement_ladder(dims);
    let mut coarse = eval((spec.nodes_per_axis / 2).max(1))?;
    let mut err = f64::INFINITY;
    for m in ladder {
        let fine = eval(m)?;
        let (e, scale) = diff(&fine, &coarse);
        err = e;
        coarse = fine;
        if err <= spec.target_rel_tol * scale.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok((coarse, err))
}
