//! Spectral multipliers `gamma_f` of Toeplitz operators whose symbol is a
//! function of the moment map.
//!
//! Every multiplier is a normalised weighted mean of the symbol,
//!
//! ```text
//! gamma_f = int f(x) w(x) dx / int w(x) dx,
//! ```
//!
//! with numerator and denominator evaluated on the same nodes. Four cases:
//!
//! | case    | variables      | weight                                                            |
//! |---------|----------------|-------------------------------------------------------------------|
//! | `qe`    | `h in R^n_+`   | `h^p (1 + |h|)^{-(|p| + n + lambda + 1)}`                          |
//! | `qh-h0` | `h in R^{n-1}_+` | `h^p (1 + |h|)^{-(|p| + n + lambda)}`                            |
//! | `hyp`   | `u in R`       | `e^{-2 xi arccot u} (1 + u^2)^{-(lambda/2 + 1)}`                   |
//! | `qh`    | both           | product of the `qh-h0` weight and `e^{-2 xi arccot u} (1 + u^2)^{-(|p| + n + lambda + 1)/2}` |
//!
//! ```
//! use toeplitz_moment::{spectra, QuadratureSpec, SymbolSpec, MultiIndex};
//!
//! let f = SymbolSpec::parse("1/(1+h1)").unwrap();
//! let spec = QuadratureSpec::default();
//! for p in 0..4u32 {
//!     let g = spectra::gamma_qe(&f, 0.0, 1, &MultiIndex::new(vec![p]), &spec).unwrap();
//!     assert!((g.value.re - 1.0 / (p as f64 + 2.0)).abs() < 1e-10);
//! }
//! ```

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::quadrature::line::{exp_shift, visit_rr};
use crate::quadrature::simplex::{
    collapsed_sums, monte_carlo_sigma, visit_collapsed, visit_monte_carlo, CollapsedWeight, Sums,
};
use crate::quadrature::{refine, Method, QuadratureSpec};
use crate::special::{pochhammer, romanovski_total_with_err, WeightParam};
use crate::symbol::{BinOp, Expr, ExprKind, SymbolSpec, Var};

/// A multiplier value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gamma {
    pub value: Complex64,
    pub err: f64,
}

impl Gamma {
    /// Fails when the weight under- or overflowed, e.g. for huge `|xi|`.
    fn ratio(num: Complex64, den: f64, err: f64) -> Result<Self> {
        let value = num / den;
        if !(den > 0.0) || !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::Quadrature(format!(
                "weight mass {den:e} is not usable, the multiplier is not representable"
            )));
        }
        Ok(Self { value, err })
    }
}

/// Which multiplier family to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    Qe,
    Qh,
    Hyp,
    QhH0,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Qe => "qe",
            Case::Qh => "qh",
            Case::Hyp => "hyp",
            Case::QhH0 => "qh-h0",
        }
    }

    /// Length of the multi-index `p` in dimension `n`.
    pub fn index_dim(self, n: usize) -> usize {
        match self {
            Case::Qe => n,
            Case::Qh | Case::QhH0 => n.saturating_sub(1),
            Case::Hyp => 0,
        }
    }

    pub fn uses_xi(self) -> bool {
        matches!(self, Case::Qh | Case::Hyp)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qe" => Ok(Case::Qe),
            "qh" => Ok(Case::Qh),
            "hyp" => Ok(Case::Hyp),
            "qh-h0" | "qh_h0" => Ok(Case::QhH0),
            _ => Err(Error::Domain(format!(
                "unknown case `{s}` (expected qe, qh, hyp or qh-h0)"
            ))),
        }
    }
}

fn check_index(p: &MultiIndex, want: usize) -> Result<()> {
    if p.dim() != want {
        return Err(Error::Arity(format!(
            "multi-index {p} has {} entries, expected {want}",
            p.dim()
        )));
    }
    Ok(())
}

fn ratio_diff(a: &Sums, b: &Sums) -> (f64, f64) {
    let ga = Complex64::new(a.re, a.im) / a.mass;
    let gb = Complex64::new(b.re, b.im) / b.mass;
    ((ga - gb).norm(), ga.norm().max(1e-300))
}

fn eval_h(f: &SymbolSpec) -> impl Fn(&[f64]) -> Result<(f64, f64)> + '_ {
    move |h| f.eval(h, None).map(|z| (z.re, z.im))
}

/// Ratio of `f` against `h^p (1 + |h|)^{-s}` on the orthant.
fn orthant_ratio(f: &SymbolSpec, p: &MultiIndex, s: f64, spec: &QuadratureSpec) -> Result<Gamma> {
    spec.validate()?;
    let weight = CollapsedWeight::orthant(p, s)?;
    let breaks = f.h_breaks(p.dim());
    if spec.method == Method::MonteCarlo {
        let sums = collapsed_sums(&weight, &breaks, 0, spec, eval_h(f))?;
        let sigma_re = monte_carlo_sigma(&sums, spec.samples);
        let im_sums = Sums {
            re: sums.im,
            sq: sums.sq_im,
            ..sums
        };
        let sigma_im = monte_carlo_sigma(&im_sums, spec.samples);
        let err = sigma_re.hypot(sigma_im) / sums.mass;
        return Gamma::ratio(Complex64::new(sums.re, sums.im), sums.mass, err);
    }
    let (sums, err) = refine(
        spec,
        p.dim(),
        |m| collapsed_sums(&weight, &breaks, m, spec, eval_h(f)),
        ratio_diff,
    )?;
    Gamma::ratio(Complex64::new(sums.re, sums.im), sums.mass, err)
}

/// Scaled line sums `(sum w g, sum w)` for a complex `g(u)`.
fn line_sums(f: &SymbolSpec, alpha: f64, q: f64, m: usize, subdivisions: usize) -> Result<(Complex64, f64)> {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    visit_rr(alpha, q, f.breaks(Var::U), m, subdivisions, |node, w| {
        num += w * f.eval(&[], Some(node.u))?;
        den += w;
        Ok(())
    })?;
    Ok((num, den))
}

fn line_ratio(f: &SymbolSpec, alpha: f64, q: f64, spec: &QuadratureSpec) -> Result<Gamma> {
    let ((num, den), err) = refine(
        spec,
        1,
        |m| line_sums(f, alpha, q, m, spec.subdivisions),
        |a: &(Complex64, f64), b: &(Complex64, f64)| {
            let ga = a.0 / a.1;
            ((ga - b.0 / b.1).norm(), ga.norm().max(1e-300))
        },
    )?;
    Gamma::ratio(num, den, err)
}

/// Quasi-elliptic multiplier `gamma_{f,lambda,n}(p)` for `f(h1, ..., hn)`.
pub fn gamma_qe(f: &SymbolSpec, lambda: f64, n: usize, p: &MultiIndex, spec: &QuadratureSpec) -> Result<Gamma> {
    let lambda = WeightParam::new(lambda)?.get();
    if n == 0 {
        return Err(Error::Domain("dimension n must be at least 1".into()));
    }
    check_index(p, n)?;
    f.check_arity(n, false)?;
    orthant_ratio(f, p, p.order() as f64 + n as f64 + lambda + 1.0, spec)
}

/// Quasi-hyperbolic multiplier for a symbol that does not depend on `u`;
/// here `p` has `n - 1` entries and the result is independent of `xi`.
pub fn gamma_qh_h0(f: &SymbolSpec, lambda: f64, n: usize, p: &MultiIndex, spec: &QuadratureSpec) -> Result<Gamma> {
    let lambda = WeightParam::new(lambda)?.get();
    if n == 0 {
        return Err(Error::Domain("dimension n must be at least 1".into()));
    }
    check_index(p, n - 1)?;
    f.check_arity(n - 1, false)?;
    orthant_ratio(f, p, p.order() as f64 + n as f64 + lambda, spec)
}

/// Multiplier of the hyperbolic (one-dimensional quasi-hyperbolic) case,
/// for a symbol `f(u)` and spectral parameter `xi`.
///
/// ```
/// use toeplitz_moment::{spectra, QuadratureSpec, SymbolSpec};
///
/// let f = SymbolSpec::parse("ind(u > 0)").unwrap();
/// let g = spectra::gamma_hyperbolic(&f, 0.0, 0.0, &QuadratureSpec::default()).unwrap();
/// assert!((g.value.re - 0.5).abs() < 1e-12);
/// ```
pub fn gamma_hyperbolic(f: &SymbolSpec, lambda: f64, xi: f64, spec: &QuadratureSpec) -> Result<Gamma> {
    gamma_qh(f, lambda, 1, &MultiIndex::zeros(0), xi, spec)
}

fn qh_params(lambda: f64, n: usize, p: &MultiIndex, xi: f64) -> Result<(f64, f64, f64)> {
    let lambda = WeightParam::new(lambda)?.get();
    if n == 0 {
        return Err(Error::Domain("dimension n must be at least 1".into()));
    }
    if !xi.is_finite() {
        return Err(Error::Domain(format!("xi must be finite, got {xi}")));
    }
    check_index(p, n - 1)?;
    let s = p.order() as f64 + n as f64 + lambda;
    Ok((s, 2.0 * xi, 0.5 * (s + 1.0)))
}

/// Quasi-hyperbolic multiplier `gamma_{f,lambda,n}(p', xi)` for
/// `f(h1, ..., h_{n-1}, u)`.
///
/// Symbols depending on only one group of variables, or that are a product
/// `a * b` of an `h`-only and a `u`-only factor, are reduced to lower
/// dimensional integrals; anything else goes through [`gamma_qh_nested`].
pub fn gamma_qh(
    f: &SymbolSpec,
    lambda: f64,
    n: usize,
    p: &MultiIndex,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<Gamma> {
    let (s, alpha, q) = qh_params(lambda, n, p, xi)?;
    f.check_arity(n - 1, true)?;
    if !f.uses(Var::U) {
        return orthant_ratio(f, p, s, spec);
    }
    if f.max_h() == 0 {
        return line_ratio(f, alpha, q, spec);
    }
    if let Some((fh, fu)) = split_product(f) {
        let gh = orthant_ratio(&fh, p, s, spec)?;
        let gu = line_ratio(&fu, alpha, q, spec)?;
        return Ok(Gamma {
            value: gh.value * gu.value,
            err: gh.value.norm() * gu.err + gu.value.norm() * gh.err,
        });
    }
    gamma_qh_nested(f, lambda, n, p, xi, spec)
}

/// Splits a real symbol `a * b` into an `h`-only and a `u`-only factor.
fn split_product(f: &SymbolSpec) -> Option<(SymbolSpec, SymbolSpec)> {
    if f.is_complex() {
        return None;
    }
    let ExprKind::Bin(BinOp::Mul, a, b) = &f.re().kind else {
        return None;
    };
    let uses = |e: &Expr| {
        let (mut h, mut u) = (false, false);
        e.for_each_var(&mut |v| match v {
            Var::H(_) => h = true,
            Var::U => u = true,
        });
        (h, u)
    };
    let (ah, au) = uses(a);
    let (bh, bu) = uses(b);
    let (fh, fu) = if !au && !bh {
        (a, b)
    } else if !bu && !ah {
        (b, a)
    } else {
        return None;
    };
    Some((
        SymbolSpec::from_expr((**fh).clone()),
        SymbolSpec::from_expr((**fu).clone()),
    ))
}

struct LineRule {
    u: Vec<f64>,
    w: Vec<f64>,
}

fn line_rule(f: &SymbolSpec, alpha: f64, q: f64, m: usize, subdivisions: usize) -> Result<LineRule> {
    let mut rule = LineRule {
        u: Vec::new(),
        w: Vec::new(),
    };
    visit_rr(alpha, q, f.breaks(Var::U), m, subdivisions, |node, w| {
        rule.u.push(node.u);
        rule.w.push(w);
        Ok(())
    })?;
    Ok(rule)
}

/// Full tensor-product evaluation of the quasi-hyperbolic multiplier, with no
/// attempt to factorise the symbol.
pub fn gamma_qh_nested(
    f: &SymbolSpec,
    lambda: f64,
    n: usize,
    p: &MultiIndex,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<Gamma> {
    let (s, alpha, q) = qh_params(lambda, n, p, xi)?;
    f.check_arity(n - 1, true)?;
    spec.validate()?;
    let weight = CollapsedWeight::orthant(p, s)?;
    let breaks = f.h_breaks(p.dim());
    let absorb = spec.method != Method::TensorGauss;

    if spec.method == Method::MonteCarlo {
        let line = line_rule(f, alpha, q, spec.nodes_per_axis, spec.subdivisions)?;
        let den_u: f64 = line.w.iter().sum();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut sq = 0.0;
        let mut count = 0usize;
        visit_monte_carlo(&weight, spec.samples, spec.rng_seed, |node, _| {
            let mut inner = Complex64::new(0.0, 0.0);
            for (&u, &w) in line.u.iter().zip(&line.w) {
                inner += w * f.eval(node.h, Some(u))?;
            }
            inner /= den_u;
            acc += inner;
            sq += inner.norm_sqr();
            count += 1;
            Ok(())
        })?;
        let mean = acc / count as f64;
        let var = (sq / count as f64 - mean.norm_sqr()).max(0.0);
        return Ok(Gamma {
            value: mean,
            err: (var / count as f64).sqrt(),
        });
    }

    let eval = |m: usize| -> Result<Sums> {
        let line = line_rule(f, alpha, q, m, spec.subdivisions)?;
        let den_u: f64 = line.w.iter().sum();
        let mut sums = Sums::default();
        visit_collapsed(&weight, &breaks, m, spec.subdivisions, absorb, |node, wh| {
            for (&u, &wu) in line.u.iter().zip(&line.w) {
                let z = f.eval(node.h, Some(u))?;
                let w = wh * wu;
                sums.re += w * z.re;
                sums.im += w * z.im;
            }
            sums.mass += wh * den_u;
            Ok(())
        })?;
        Ok(sums)
    };
    let (sums, err) = refine(spec, n, eval, ratio_diff)?;
    Gamma::ratio(Complex64::new(sums.re, sums.im), sums.mass, err)
}

/// The multiplier computed through its closed-form prefactor instead of
/// the normalising integral.
///
/// `constant` is `prefactor / ratio`, the normalisation constant implied by
/// the prefactor; it is independent of `f` and `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrefactorCheck {
    pub ratio_form: Complex64,
    pub prefactor_form: Complex64,
    pub constant: f64,
}

fn total_mass(weight: &CollapsedWeight, spec: &QuadratureSpec) -> Result<f64> {
    let sums = collapsed_sums(
        weight,
        &vec![Vec::new(); weight.dim()],
        spec.nodes_per_axis,
        spec,
        |_| Ok((1.0, 0.0)),
    )?;
    Ok(sums.mass)
}

/// Quasi-elliptic multiplier as `(n + lambda + 1)_{|p|} / p! * int f w dh`.
///
/// The implied constant is `1 / (lambda + 1)_n`, not 1.
pub fn prefactor_qe(
    f: &SymbolSpec,
    lambda: f64,
    n: usize,
    p: &MultiIndex,
    spec: &QuadratureSpec,
) -> Result<PrefactorCheck> {
    let ratio = gamma_qe(f, lambda, n, p, spec)?.value;
    let s = p.order() as f64 + n as f64 + lambda + 1.0;
    let mass = total_mass(&CollapsedWeight::orthant(p, s)?, spec)?;
    let constant = pochhammer(n as f64 + lambda + 1.0, p.order()) / p.factorial() * mass;
    Ok(PrefactorCheck {
        ratio_form: ratio,
        prefactor_form: ratio * constant,
        constant,
    })
}

/// Quasi-hyperbolic multiplier as
/// `(n + lambda)_{|p|} / (p! V(2 xi, -(|p| + n + lambda - 1)/2)) * int f w dh du`.
///
/// The implied constant is `1 / (lambda + 1)_{n-1}`, not 1.
pub fn prefactor_qh(
    f: &SymbolSpec,
    lambda: f64,
    n: usize,
    p: &MultiIndex,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<PrefactorCheck> {
    let ratio = gamma_qh(f, lambda, n, p, xi, spec)?.value;
    let (s, alpha, q) = qh_params(lambda, n, p, xi)?;
    let mass_h = total_mass(&CollapsedWeight::orthant(p, s)?, spec)?;
    let line = line_rule(&SymbolSpec::one(), alpha, q, spec.nodes_per_axis, spec.subdivisions)?;
    let mass_u = line.w.iter().sum::<f64>() * exp_shift(alpha).exp();
    let v = romanovski_total_with_err(alpha, 1.0 - q, spec)?.value;
    let constant = pochhammer(n as f64 + lambda, p.order()) / p.factorial() * mass_h * mass_u / v;
    Ok(PrefactorCheck {
        ratio_form: ratio,
        prefactor_form: ratio * constant,
        constant,
    })
}

/// One row of a [`GammaTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaEntry {
    pub p: MultiIndex,
    pub xi: Option<f64>,
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub err: f64,
}

/// Metadata written alongside a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub case: Case,
    pub n: usize,
    pub lambda: f64,
    pub symbol: String,
    pub quadrature: QuadratureSpec,
    pub version: String,
}

/// Multipliers over a set of multi-indices and, where relevant, a grid of `xi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaTable {
    pub metadata: TableMeta,
    pub entries: Vec<GammaEntry>,
}

/// Evaluates one multiplier of the given case.
pub fn gamma(
    case: Case,
    f: &SymbolSpec,
    lambda: f64,
    n: usize,
    p: &MultiIndex,
    xi: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<Gamma> {
    let need_xi = || xi.ok_or_else(|| Error::Domain(format!("case {case} needs a value of xi")));
    match case {
        Case::Qe => gamma_qe(f, lambda, n, p, spec),
        Case::QhH0 => gamma_qh_h0(f, lambda, n, p, spec),
        Case::Qh => gamma_qh(f, lambda, n, p, need_xi()?, spec),
        Case::Hyp => {
            if n != 1 {
                return Err(Error::Domain(format!("the hyperbolic case has n = 1, got {n}")));
            }
            gamma_hyperbolic(f, lambda, need_xi()?, spec)
        }
    }
}

impl GammaTable {
    /// Computes the table in parallel. Rows are ordered by `ps`, then by `xis`;
    /// `xis` is ignored for the `xi`-free cases.
    pub fn compute(
        case: Case,
        f: &SymbolSpec,
        lambda: f64,
        n: usize,
        ps: &[MultiIndex],
        xis: &[f64],
        spec: &QuadratureSpec,
    ) -> Result<Self> {
        spec.validate()?;
        let grid: Vec<Option<f64>> = if case.uses_xi() {
            if xis.is_empty() {
                return Err(Error::Domain(format!("case {case} needs a non-empty xi grid")));
            }
            xis.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        let jobs: Vec<(&MultiIndex, Option<f64>)> =
            ps.iter().flat_map(|p| grid.iter().map(move |&xi| (p, xi))).collect();
        let entries = jobs
            .into_par_iter()
            .map(|(p, xi)| {
                let g = gamma(case, f, lambda, n, p, xi, spec)?;
                Ok(GammaEntry {
                    p: p.clone(),
                    xi,
                    gamma_re: g.value.re,
                    gamma_im: g.value.im,
                    err: g.err,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            metadata: TableMeta {
                case,
                n,
                lambda,
                symbol: f.source().to_string(),
                quadrature: spec.clone(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            entries,
        })
    }

    /// CSV with columns `p1..pk, xi, gamma_re, gamma_im, err`; `xi` is empty
    /// for `xi`-free cases.
    pub fn to_csv(&self) -> Result<String> {
        let k = self.metadata.case.index_dim(self.metadata.n);
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = (1..=k).map(|j| format!("p{j}")).collect();
        header.extend(["xi", "gamma_re", "gamma_im", "err"].map(String::from));
        w.write_record(&header).map_err(csv_err)?;
        for e in &self.entries {
            let mut row: Vec<String> = e.p.entries().iter().map(u32::to_string).collect();
            row.push(e.xi.map(fmt_float).unwrap_or_default());
            row.push(fmt_float(e.gamma_re));
            row.push(fmt_float(e.gamma_im));
            row.push(fmt_float(e.err));
            w.write_record(&row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Quadrature(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Quadrature(e.to_string()))
    }
}

// Shortest round-trip form, switching to exponent notation far from 1.
fn fmt_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Quadrature(format!("csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn qe_two_dimensional_rational() {
        let f = SymbolSpec::parse("h1/(1+h1+h2)").unwrap();
        for p in MultiIndex::all_up_to(2, 4) {
            let g = gamma_qe(&f, 0.0, 2, &p, &spec()).unwrap();
            let want = (p.entries()[0] as f64 + 1.0) / (p.order() as f64 + 3.0);
            assert!((g.value.re - want).abs() < 1e-10, "{p}: {}", g.value.re);
        }
    }

    #[test]
    fn qe_box_indicator() {
        let f = SymbolSpec::parse("ind(h1<1)*ind(h2<2)").unwrap();
        let cases = [
            ([0, 0], 5.0 / 12.0),
            ([1, 0], 11.0 / 48.0),
            ([0, 2], 101.0 / 432.0),
            ([2, 1], 125.0 / 1152.0),
        ];
        for (p, want) in cases {
            let g = gamma_qe(&f, 0.0, 2, &mi(&p), &spec()).unwrap();
            assert!((g.value.re - want).abs() < 1e-10, "{p:?}: {}", g.value.re);
        }
    }

    #[test]
    fn qh_h0_matches_closed_form() {
        let f = SymbolSpec::parse("h1/(1+h1)").unwrap();
        for p in 0..5u32 {
            let g = gamma_qh_h0(&f, 0.0, 2, &mi(&[p]), &spec()).unwrap();
            let want = (p as f64 + 1.0) / (p as f64 + 2.0);
            assert!((g.value.re - want).abs() < 1e-10);
        }
    }

    #[test]
    fn hyperbolic_values() {
        let f = SymbolSpec::parse("1/(1+u^2)").unwrap();
        let g = gamma_hyperbolic(&f, 0.0, 0.0, &spec()).unwrap();
        assert!((g.value.re - 0.5).abs() < 1e-10);
        let g = gamma_hyperbolic(&f, 0.3, -0.4, &spec()).unwrap();
        assert!((g.value.re - 0.504_215_851_602_023_6).abs() < 1e-10);
    }

    #[test]
    fn qh_nested_agrees_with_factorised() {
        let f = SymbolSpec::parse("h1*ind(u>0)/(1+h1)").unwrap();
        let p = mi(&[1]);
        let a = gamma_qh(&f, 0.5, 2, &p, 0.3, &spec()).unwrap();
        let b = gamma_qh_nested(&f, 0.5, 2, &p, 0.3, &spec()).unwrap();
        assert!((a.value - b.value).norm() < 1e-10);
    }

    #[test]
    fn qh_nested_reference_value() {
        let f = SymbolSpec::parse("1/(1+h1+u^2)").unwrap();
        let g = gamma_qh(&f, 0.5, 2, &mi(&[1]), 0.7, &spec()).unwrap();
        assert!((g.value.re - 0.338_833_054_902_341_05).abs() < 1e-10, "{}", g.value.re);
    }

    #[test]
    fn prefactor_constants() {
        let f = SymbolSpec::parse("1/(1+h1)").unwrap();
        let c = prefactor_qe(&f, 0.5, 2, &mi(&[1, 0]), &spec()).unwrap();
        assert!((c.constant - 1.0 / pochhammer(1.5, 2)).abs() < 1e-12);
        let c = prefactor_qh(&f, 0.5, 2, &mi(&[2]), 0.4, &spec()).unwrap();
        assert!((c.constant - 1.0 / 1.5).abs() < 1e-10, "{}", c.constant);
    }

    #[test]
    fn complex_symbol() {
        let f = SymbolSpec::parse_complex("1/(1+h1)", "h1/(1+h1)").unwrap();
        let g = gamma_qe(&f, 0.0, 1, &mi(&[0]), &spec()).unwrap();
        assert!((g.value - Complex64::new(0.5, 0.5)).norm() < 1e-10);
    }

    #[test]
    fn monte_carlo_is_close() {
        let f = SymbolSpec::parse("1/(1+h1)").unwrap();
        let s = spec().with_method(Method::MonteCarlo);
        let g = gamma_qe(&f, 0.0, 1, &mi(&[1]), &s).unwrap();
        assert!((g.value.re - 1.0 / 3.0).abs() < 5.0 * g.err + 1e-12);
    }

    #[test]
    fn arity_and_domain_errors() {
        let f = SymbolSpec::parse("h2 + u").unwrap();
        assert!(matches!(
            gamma_qe(&f, 0.0, 2, &mi(&[0, 0]), &spec()),
            Err(Error::Arity(_))
        ));
        let g = SymbolSpec::one();
        assert!(matches!(
            gamma_qe(&g, -1.0, 1, &mi(&[0]), &spec()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(gamma_qe(&g, 0.0, 2, &mi(&[0]), &spec()), Err(Error::Arity(_))));
    }

    #[test]
    fn table_is_ordered_and_serialises() {
        let f = SymbolSpec::parse("ind(u>0)").unwrap();
        let t = GammaTable::compute(
            Case::Hyp,
            &f,
            0.0,
            1,
            &[MultiIndex::zeros(0)],
            &[-1.0, 0.0, 1.0],
            &spec(),
        )
        .unwrap();
        assert_eq!(t.entries.len(), 3);
        assert!(t.entries.windows(2).all(|w| w[0].gamma_re < w[1].gamma_re));
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("xi,gamma_re,gamma_im,err\n-1,"));
        let json: serde_json::Value = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(json["metadata"]["case"], "hyp");
    }
}
