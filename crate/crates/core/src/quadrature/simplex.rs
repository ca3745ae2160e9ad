//! Integrals over the positive orthant `R^k_+` with weights
//! `h^p (1 + |h|_1)^{-s}`.
//!
//! The map `h = x / (1 - |x|_1)` sends the open unit simplex onto `R^k_+`
//! and turns the weight into `x^p (1 - |x|_1)^{s - |p| - k - 1}`. The simplex
//! is then parametrised by collapsed coordinates
//!
//! ```text
//! x_j = xi_j * prod_{i<j} (1 - xi_i),   1 - |x|_1 = prod_j (1 - xi_j),
//! ```
//!
//! under which the full weight factorises as
//! `prod_j xi_j^{a_j} (1 - xi_j)^{b_j}` with `a_j = p_j` and
//! `b_j = e + (k - j) + sum_{i>j} p_i` (1-based `j`, `e = s - |p| - k - 1`).
//! Each axis is integrated with Gauss–Jacobi nodes for its own exponents, so a
//! constant integrand is integrated exactly.
//!
//! Discontinuities of the form `h_j = b` become, for fixed outer coordinates,
//! a single point on the `xi_j` axis. Axes are nested with `xi_k` outermost,
//! which is exactly the order in which those points become known.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};

use super::gauss::gauss_jacobi;
use super::{refine, Estimate, Method, QuadratureSpec};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::special::ln_beta;
use crate::symbol::{SymbolSpec, Var};

/// A leaf node of the collapsed-coordinate rule.
#[derive(Debug)]
pub struct SimplexNode<'a> {
    /// Simplex point, `x_j = h_j / (1 + |h|_1)`.
    pub x: &'a [f64],
    /// Orthant point.
    pub h: &'a [f64],
    /// `1 - |x|_1 = 1 / (1 + |h|_1)`, computed without cancellation.
    pub gap: f64,
}

/// Per-axis Jacobi exponents of the collapsed weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapsedWeight {
    /// Exponent at `xi_j = 0`.
    pub left: Vec<f64>,
    /// Exponent at `xi_j = 1`.
    pub right: Vec<f64>,
}

impl CollapsedWeight {
    /// Weight of `h^p (1 + |h|_1)^{-s}` on `R^k_+`, `k = p.dim()`.
    pub fn orthant(p: &MultiIndex, s: f64) -> Result<Self> {
        let k = p.dim();
        let order = p.order() as f64;
        let e = s - order - k as f64 - 1.0;
        if !(e > -1.0) {
            return Err(Error::Divergence(format!(
                "int h^p (1+|h|)^-s diverges for s = {s} <= |p| + n = {}",
                order + k as f64
            )));
        }
        let ent = p.entries();
        let mut left = Vec::with_capacity(k);
        let mut right = Vec::with_capacity(k);
        for j in 0..k {
            let tail: u32 = ent[j + 1..].iter().sum();
            left.push(ent[j] as f64);
            right.push(e + (k - 1 - j) as f64 + tail as f64);
        }
        Ok(Self { left, right })
    }

    /// Weight `(1 - |x|_1)^e` on the `k`-simplex (no monomial factor).
    pub fn simplex(k: usize, e: f64) -> Self {
        Self {
            left: vec![0.0; k],
            right: (0..k).map(|j| e + (k - 1 - j) as f64).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.left.len()
    }

    /// `ln int_{[0,1]^k} prod_j xi_j^{a_j} (1-xi_j)^{b_j} dxi`.
    pub fn ln_mass(&self) -> f64 {
        self.left
            .iter()
            .zip(&self.right)
            .map(|(&a, &b)| ln_beta(a + 1.0, b + 1.0))
            .sum()
    }
}

/// Panel endpoint on `[0, 1]` stored together with its complement.
#[derive(Debug, Clone, Copy)]
struct Cut {
    at: f64,
    comp: f64,
}

struct Walker<'a, F> {
    weight: &'a CollapsedWeight,
    breaks: &'a [Vec<f64>],
    m: usize,
    subdivisions: usize,
    absorb: bool,
    xi: Vec<f64>,
    om: Vec<f64>,
    outer: Vec<f64>,
    x: Vec<f64>,
    h: Vec<f64>,
    visit: F,
}

impl<F> Walker<'_, F>
where
    F: FnMut(&SimplexNode<'_>, f64) -> Result<()>,
{
    fn cuts(&self, level: usize, outer: f64) -> Vec<Cut> {
        let mut cuts = vec![Cut { at: 0.0, comp: 1.0 }, Cut { at: 1.0, comp: 0.0 }];
        for i in 1..self.subdivisions {
            let t = i as f64 / self.subdivisions as f64;
            cuts.push(Cut { at: t, comp: 1.0 - t });
        }
        if let Some(bs) = self.breaks.get(level) {
            for &b in bs {
                if b > 0.0 && b.is_finite() {
                    // h_j = xi / ((1 - xi) P) = b  <=>  xi = bP / (1 + bP)
                    let bp = b * outer;
                    cuts.push(Cut {
                        at: bp / (1.0 + bp),
                        comp: 1.0 / (1.0 + bp),
                    });
                }
            }
        }
        cuts.sort_by(|a, b| a.at.partial_cmp(&b.at).unwrap());
        cuts.dedup_by(|a, b| (a.at - b.at).abs() <= 1e-15);
        cuts
    }

    fn walk(&mut self, level: usize, outer: f64, w: f64) -> Result<()> {
        let k = self.weight.dim();
        if level == k {
            return self.leaf(w);
        }
        // axes are visited from the outermost (last) one inwards
        let j = k - 1 - level;
        self.outer[j] = outer;
        let a = self.weight.left[j];
        let b = self.weight.right[j];
        let cuts = self.cuts(j, outer);
        for pair in cuts.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let width = hi.at - lo.at;
            if width <= 0.0 {
                continue;
            }
            let at_left = lo.at == 0.0;
            let at_right = hi.at == 1.0;
            let jac_left = if self.absorb && at_left { a } else { 0.0 };
            let jac_right = if self.absorb && at_right { b } else { 0.0 };
            let rule = gauss_jacobi(self.m, jac_right, jac_left);
            let mut scale = 0.5 * width;
            if self.absorb && at_left && a != 0.0 {
                scale *= (0.5 * width).powf(a);
            }
            if self.absorb && at_right && b != 0.0 {
                scale *= (0.5 * width).powf(b);
            }
            for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
                let xi = lo.at + 0.5 * width * (1.0 + t);
                let om = hi.comp + 0.5 * width * (1.0 - t);
                let mut f = wt * scale;
                if !(self.absorb && at_left) && a != 0.0 {
                    f *= xi.powf(a);
                }
                if !(self.absorb && at_right) && b != 0.0 {
                    f *= om.powf(b);
                }
                self.xi[j] = xi;
                self.om[j] = om;
                self.walk(level + 1, outer * om, w * f)?;
            }
        }
        Ok(())
    }

    fn leaf(&mut self, w: f64) -> Result<()> {
        let k = self.weight.dim();
        let mut inner = 1.0;
        for j in 0..k {
            self.x[j] = self.xi[j] * inner;
            inner *= self.om[j];
            self.h[j] = self.xi[j] / (self.om[j] * self.outer[j]);
        }
        let node = SimplexNode {
            x: &self.x,
            h: &self.h,
            gap: inner,
        };
        (self.visit)(&node, w)
    }
}

/// Visits every node of the collapsed rule with `m` nodes per panel.
///
/// `breaks[j]` lists values `b` at which the integrand jumps across `h_j = b`.
/// With `absorb = false` the weight is evaluated pointwise and plain
/// Gauss–Legendre nodes are used instead.
pub fn visit_collapsed<F>(
    weight: &CollapsedWeight,
    breaks: &[Vec<f64>],
    m: usize,
    subdivisions: usize,
    absorb: bool,
    visit: F,
) -> Result<()>
where
    F: FnMut(&SimplexNode<'_>, f64) -> Result<()>,
{
    let k = weight.dim();
    let mut walker = Walker {
        weight,
        breaks,
        m,
        subdivisions: subdivisions.max(1),
        absorb,
        xi: vec![0.0; k],
        om: vec![0.0; k],
        outer: vec![0.0; k],
        x: vec![0.0; k],
        h: vec![0.0; k],
        visit,
    };
    walker.walk(0, 1.0, 1.0)
}

/// Monte Carlo version of [`visit_collapsed`]: collapsed coordinates are drawn
/// from `Beta(a_j + 1, b_j + 1)`, each sample carrying the weight
/// `mass / samples`.
pub fn visit_monte_carlo<F>(weight: &CollapsedWeight, samples: usize, seed: u64, mut visit: F) -> Result<()>
where
    F: FnMut(&SimplexNode<'_>, f64) -> Result<()>,
{
    let k = weight.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dists = weight
        .left
        .iter()
        .zip(&weight.right)
        .map(|(&a, &b)| Beta::new(a + 1.0, b + 1.0))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Quadrature(e.to_string()))?;
    let w = weight.ln_mass().exp() / samples as f64;
    let mut xi = vec![0.0; k];
    let mut x = vec![0.0; k];
    let mut h = vec![0.0; k];
    for _ in 0..samples {
        for (v, d) in xi.iter_mut().zip(&dists) {
            *v = d.sample(&mut rng);
        }
        let mut inner = 1.0;
        for j in 0..k {
            x[j] = xi[j] * inner;
            inner *= 1.0 - xi[j];
        }
        let mut outer = 1.0;
        for j in (0..k).rev() {
            outer *= 1.0 - xi[j];
            h[j] = xi[j] / outer;
        }
        if inner <= 0.0 || h.iter().any(|v| !v.is_finite()) {
            continue;
        }
        visit(
            &SimplexNode {
                x: &x,
                h: &h,
                gap: inner,
            },
            w,
        )?;
    }
    Ok(())
}

/// Weighted sums `(sum w f, sum w)` over a rule, `f` complex as `(re, im)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Sums {
    pub re: f64,
    pub im: f64,
    pub mass: f64,
    /// Sums of `w re^2` and `w im^2`, for Monte Carlo variance.
    pub sq: f64,
    pub sq_im: f64,
}

/// Accumulates [`Sums`] for `f` over the rule selected by `spec.method`.
pub(crate) fn collapsed_sums(
    weight: &CollapsedWeight,
    breaks: &[Vec<f64>],
    m: usize,
    spec: &QuadratureSpec,
    mut f: impl FnMut(&[f64]) -> Result<(f64, f64)>,
) -> Result<Sums> {
    let mut s = Sums::default();
    let mut acc = |node: &SimplexNode<'_>, w: f64| -> Result<()> {
        let (re, im) = f(node.h)?;
        s.re += w * re;
        s.im += w * im;
        s.mass += w;
        s.sq += w * re * re;
        s.sq_im += w * im * im;
        Ok(())
    };
    match spec.method {
        Method::DuffySimplex => visit_collapsed(weight, breaks, m, spec.subdivisions, true, &mut acc)?,
        Method::TensorGauss => visit_collapsed(weight, breaks, m, spec.subdivisions, false, &mut acc)?,
        Method::MonteCarlo => visit_monte_carlo(weight, spec.samples, spec.rng_seed, &mut acc)?,
    }
    Ok(s)
}

/// One-sigma Monte Carlo error of `sum w f` for samples of equal weight.
pub(crate) fn monte_carlo_sigma(s: &Sums, samples: usize) -> f64 {
    if s.mass == 0.0 {
        return 0.0;
    }
    let mean = s.re / s.mass;
    let var = (s.sq / s.mass - mean * mean).max(0.0);
    s.mass * (var / samples as f64).sqrt()
}

/// `int_{R^k_+} h^p (1 + |h|_1)^{-s} f(h) dh` with `k = p.dim()`; `f = None`
/// integrates the bare weight. Breakpoints registered on `f` split the rule.
pub fn integrate_h_weighted(p: &MultiIndex, s: f64, f: Option<&SymbolSpec>, spec: &QuadratureSpec) -> Result<Estimate> {
    let weight = CollapsedWeight::orthant(p, s)?;
    let breaks = f.map(|f| f.h_breaks(p.dim())).unwrap_or_default();
    let eval = |h: &[f64]| -> Result<(f64, f64)> {
        match f {
            None => Ok((1.0, 0.0)),
            Some(f) => Ok((f.eval_re(h, None)?, 0.0)),
        }
    };
    if let Some(f) = f {
        if f.uses(Var::U) {
            return Err(Error::Arity("orthant integrand may not use `u`".into()));
        }
    }
    if spec.method == Method::MonteCarlo {
        spec.validate()?;
        let sums = collapsed_sums(&weight, &breaks, 0, spec, eval)?;
        return Ok(Estimate::new(sums.re, monte_carlo_sigma(&sums, spec.samples)));
    }
    let (sums, err) = refine(
        spec,
        p.dim(),
        |m| collapsed_sums(&weight, &breaks, m, spec, eval),
        |a: &Sums, b: &Sums| ((a.re - b.re).abs(), a.re.abs()),
    )?;
    Ok(Estimate::new(sums.re, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::dirichlet_integral;

    #[test]
    fn constant_integrand_is_exact() {
        for p in [vec![0], vec![3], vec![1, 0], vec![2, 1], vec![1, 1, 2]] {
            let p = MultiIndex::new(p);
            for lam in [-0.5, 0.0, 1.7] {
                let s = p.order() as f64 + p.dim() as f64 + lam + 1.0;
                let w = CollapsedWeight::orthant(&p, s).unwrap();
                let sums = collapsed_sums(&w, &[], 3, &QuadratureSpec::default(), |_| Ok((1.0, 0.0))).unwrap();
                let exact = dirichlet_integral(&p, s).unwrap();
                assert!((sums.re - exact).abs() < 1e-13 * exact, "{p} {lam}");
            }
        }
    }

    #[test]
    fn orthant_points_and_gap_are_consistent() {
        let w = CollapsedWeight::orthant(&MultiIndex::new(vec![1, 0, 2]), 9.0).unwrap();
        visit_collapsed(&w, &[vec![0.5], vec![], vec![2.0]], 4, 2, true, |node, wt| {
            assert!(wt > 0.0);
            let sum_h: f64 = node.h.iter().sum();
            assert!((node.gap - 1.0 / (1.0 + sum_h)).abs() < 1e-14);
            for (x, h) in node.x.iter().zip(node.h) {
                assert!((x - h * node.gap).abs() < 1e-14);
                assert!(*h > 0.0);
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn divergent_weight_is_rejected() {
        let p = MultiIndex::new(vec![1, 1]);
        assert!(matches!(CollapsedWeight::orthant(&p, 4.0), Err(Error::Divergence(_))));
        assert!(CollapsedWeight::orthant(&p, 4.01).is_ok());
    }

    #[test]
    fn empty_dimension_has_one_unit_node() {
        let w = CollapsedWeight::orthant(&MultiIndex::zeros(0), 3.0).unwrap();
        let mut count = 0;
        visit_collapsed(&w, &[], 8, 1, true, |node, wt| {
            count += 1;
            assert_eq!(wt, 1.0);
            assert_eq!(node.gap, 1.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 1);
    }
}
