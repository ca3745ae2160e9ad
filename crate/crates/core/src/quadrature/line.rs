//! Line integrals against the Romanovski–Routh weight
//! `e^{-alpha arccot u} (1 + u^2)^{-q}` on the real line.
//!
//! With `u = cot(theta)` the integral becomes
//! `int_0^pi e^{-alpha theta} sin(theta)^{2q-2} g(cot theta) dtheta`,
//! compactly supported, with algebraic endpoint behaviour absorbed by
//! Gauss–Jacobi nodes on the end panels. For `|alpha| > 1` panels are graded
//! geometrically towards both endpoints at scale `1/|alpha|`; the panel set
//! is always symmetric under `theta -> pi - theta`.
//!
//! Every angle is carried together with its complement `pi - theta`, so
//! nodes close to `pi` keep full relative accuracy.

use std::f64::consts::{FRAC_PI_2, PI};

use super::gauss::gauss_jacobi;
use super::{refine, Estimate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::symbol::{SymbolSpec, Var};

/// Angle in `[0, pi]` with its complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    pub theta: f64,
    pub comp: f64,
}

impl Angle {
    pub const ZERO: Angle = Angle { theta: 0.0, comp: PI };
    pub const PI: Angle = Angle { theta: PI, comp: 0.0 };

    /// `arccot(u)` on the branch with values in `(0, pi)`.
    pub fn arccot(u: f64) -> Angle {
        Angle {
            theta: 1f64.atan2(u),
            comp: 1f64.atan2(-u),
        }
    }

    pub fn sin(&self) -> f64 {
        if self.theta <= FRAC_PI_2 {
            self.theta.sin()
        } else {
            self.comp.sin()
        }
    }

    pub fn cot(&self) -> f64 {
        if self.theta <= FRAC_PI_2 {
            self.theta.cos() / self.theta.sin()
        } else {
            -self.comp.cos() / self.comp.sin()
        }
    }
}

/// A node of the `theta` rule.
#[derive(Debug, Clone, Copy)]
pub struct LineNode {
    pub angle: Angle,
    /// `u = cot(theta)`.
    pub u: f64,
}

/// Scaled exponential: `e^{-alpha theta - shift}` with `shift = max(0, -alpha pi)`,
/// which never exceeds one.
fn scaled_exp(alpha: f64, a: &Angle) -> f64 {
    if alpha >= 0.0 {
        (-alpha * a.theta).exp()
    } else {
        (alpha * a.comp).exp()
    }
}

/// `ln` of the factor removed by [`scaled_exp`].
pub fn exp_shift(alpha: f64) -> f64 {
    if alpha < 0.0 {
        -alpha * PI
    } else {
        0.0
    }
}

fn panel_cuts(alpha: f64, u_breaks: &[f64], subdivisions: usize) -> Vec<Angle> {
    let mut cuts = vec![Angle::ZERO, Angle::PI];
    for &b in u_breaks {
        if b.is_finite() {
            cuts.push(Angle::arccot(b));
        }
    }
    if alpha.abs() > 1.0 {
        let mut t = 1.0 / alpha.abs();
        while t < FRAC_PI_2 * 0.75 {
            cuts.push(Angle { theta: t, comp: PI - t });
            cuts.push(Angle { theta: PI - t, comp: t });
            t *= 2.0;
        }
    }
    for i in 1..subdivisions {
        let t = PI * i as f64 / subdivisions as f64;
        cuts.push(Angle { theta: t, comp: PI - t });
    }
    cuts.sort_by(|a, b| a.theta.partial_cmp(&b.theta).unwrap());
    cuts.dedup_by(|a, b| (a.theta - b.theta).abs() <= 1e-15);
    cuts
}

/// Visits the nodes of the `theta` rule for
/// `e^{-alpha theta - shift} sin(theta)^{2q - 2} dtheta`; the weight passed to
/// `visit` includes the scaled exponential and the sine power.
pub fn visit_rr<F>(alpha: f64, q: f64, u_breaks: &[f64], m: usize, subdivisions: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&LineNode, f64) -> Result<()>,
{
    let e = 2.0 * q - 2.0;
    if !(e > -1.0) {
        return Err(Error::Divergence(format!(
            "Romanovski–Routh integral diverges for q = {q} <= 1/2"
        )));
    }
    let cuts = panel_cuts(alpha, u_breaks, subdivisions);
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let width = if lo.theta < FRAC_PI_2 {
            hi.theta - lo.theta
        } else {
            lo.comp - hi.comp
        };
        if width <= 0.0 {
            continue;
        }
        let at_left = lo.theta == 0.0;
        let at_right = hi.comp == 0.0;
        let rule = gauss_jacobi(m, if at_right { e } else { 0.0 }, if at_left { e } else { 0.0 });
        let mut scale = 0.5 * width;
        if at_left {
            scale *= (0.5 * width).powf(e);
        }
        if at_right {
            scale *= (0.5 * width).powf(e);
        }
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let angle = Angle {
                theta: lo.theta + 0.5 * width * (1.0 + t),
                comp: hi.comp + 0.5 * width * (1.0 - t),
            };
            // remaining smooth factor sin^e / theta^e / (pi - theta)^e
            let mut ln_rest = e * angle.sin().ln();
            if at_left {
                ln_rest -= e * angle.theta.ln();
            }
            if at_right {
                ln_rest -= e * angle.comp.ln();
            }
            let w = wt * scale * ln_rest.exp() * scaled_exp(alpha, &angle);
            visit(&LineNode { angle, u: angle.cot() }, w)?;
        }
    }
    Ok(())
}

/// Scaled weighted sums over the `theta` rule: `(sum w g, sum w)`; the true
/// values are these times `e^{exp_shift(alpha)}`.
pub(crate) fn rr_sums(
    alpha: f64,
    q: f64,
    u_breaks: &[f64],
    m: usize,
    subdivisions: usize,
    mut g: impl FnMut(f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    let mut num = 0.0;
    let mut den = 0.0;
    visit_rr(alpha, q, u_breaks, m, subdivisions, |node, w| {
        num += w * g(node.u)?;
        den += w;
        Ok(())
    })?;
    Ok((num, den))
}

/// `int_R e^{-alpha arccot u} (1 + u^2)^{-q} g(u) du`, with `g = None` meaning
/// `g = 1`. Breakpoints registered on `g` for `u` split the panels.
pub fn integrate_rr(alpha: f64, q: f64, g: Option<&SymbolSpec>, spec: &QuadratureSpec) -> Result<Estimate> {
    if let Some(g) = g {
        if g.max_h() > 0 {
            return Err(Error::Arity("line integrand may only depend on `u`".into()));
        }
    }
    let breaks = g.map(|g| g.breaks(Var::U).to_vec()).unwrap_or_default();
    let eval = |u: f64| -> Result<f64> {
        match g {
            None => Ok(1.0),
            Some(g) => g.eval_re(&[], Some(u)),
        }
    };
    let ((num, _), err) = refine(
        spec,
        1,
        |m| rr_sums(alpha, q, &breaks, m, spec.subdivisions, eval),
        |a: &(f64, f64), b: &(f64, f64)| ((a.0 - b.0).abs(), a.0.abs()),
    )?;
    let shift = exp_shift(alpha).exp();
    Ok(Estimate::new(num * shift, err * shift))
}
