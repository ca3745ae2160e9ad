//! Integrals against `dv_lambda = c_lambda (1 - |z|^2)^lambda dv(z)` on the
//! unit ball of `C^n`.
//!
//! Writing `z_j = sqrt(rho_j) e^{i theta_j}` gives
//! `dv_lambda = c_lambda / 2^n (1 - |rho|_1)^lambda drho dtheta` with `rho` in
//! the unit simplex. Radial variables use the collapsed Gauss–Jacobi rule of
//! [`super::simplex`]; each angle uses the trapezoid rule, which is exact for
//! trigonometric polynomials of degree below the node count.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::simplex::{visit_collapsed, CollapsedWeight};
use super::{refine, QuadratureSpec};
use crate::error::{Error, Result};
use crate::special::c_lambda;

/// Visits the nodes of the product rule on the ball. The weight includes
/// `c_lambda / 2^n` and the angular step, so weights sum to `v_lambda(B^n) = 1`.
///
/// `breaks[j]` lists values `b` of `h_j = |z_j|^2 / (1 - |z|^2)` across which the
/// integrand may jump.
pub fn visit_ball<F>(
    lambda: f64,
    n: usize,
    radial_nodes: usize,
    angular_nodes: usize,
    breaks: &[Vec<f64>],
    subdivisions: usize,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[Complex64], f64) -> Result<()>,
{
    if !(lambda > -1.0) {
        return Err(Error::Domain(format!("lambda = {lambda} must exceed -1")));
    }
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let weight = CollapsedWeight::simplex(n, lambda);
    let phases: Vec<Complex64> = (0..angular_nodes)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / angular_nodes as f64))
        .collect();
    let ang_w = (2.0 * PI / angular_nodes as f64).powi(n as i32);
    let prefactor = c_lambda(n, lambda) / 2f64.powi(n as i32) * ang_w;
    let total = angular_nodes.pow(n as u32);
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let mut radius = vec![0.0; n];
    visit_collapsed(&weight, breaks, radial_nodes, subdivisions, true, |node, w| {
        for (r, x) in radius.iter_mut().zip(node.x) {
            *r = x.sqrt();
        }
        let wr = w * prefactor;
        for idx in 0..total {
            let mut rest = idx;
            for j in 0..n {
                z[j] = phases[rest % angular_nodes] * radius[j];
                rest /= angular_nodes;
            }
            visit(&z, wr)?;
        }
        Ok(())
    })
}

/// `int_{B^n} g dv_lambda` with `angular_nodes` trapezoid nodes per angle.
pub fn integrate_ball(
    g: impl Fn(&[Complex64]) -> Complex64,
    lambda: f64,
    n: usize,
    angular_nodes: usize,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)> {
    integrate_ball_with_breaks(g, lambda, n, angular_nodes, &[], spec)
}

/// As [`integrate_ball`], splitting the radial rule where `g` jumps across
/// `|z_j|^2 / (1 - |z|^2) = b` for `b` in `breaks[j]`.
pub fn integrate_ball_with_breaks(
    g: impl Fn(&[Complex64]) -> Complex64,
    lambda: f64,
    n: usize,
    angular_nodes: usize,
    breaks: &[Vec<f64>],
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)> {
    if angular_nodes == 0 {
        return Err(Error::Quadrature("angular_nodes must be positive".into()));
    }
    refine(
        spec,
        2 * n,
        |m| {
            let mut acc = Complex64::new(0.0, 0.0);
            visit_ball(lambda, n, m, angular_nodes, breaks, spec.subdivisions, |z, w| {
                acc += g(z) * w;
                Ok(())
            })?;
            Ok(acc)
        },
        |a, b| ((a - b).norm(), a.norm()),
    )
}
