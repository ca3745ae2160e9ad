//! Brute-force checks that do not rely on the diagonalisation they test:
//! truncated Toeplitz matrices on the ball in the monomial basis, residuals
//! of the holomorphy systems on their closed-form solutions, and the
//! normalisation of the Bargmann-type transforms.
//!
//! ```
//! use toeplitz_moment::{oracle, QuadratureSpec, SymbolSpec};
//!
//! let f = SymbolSpec::parse("1/(1+h1)").unwrap();
//! let r = oracle::verify_diagonalization(&f, 0.0, 1, 4, &QuadratureSpec::default()).unwrap();
//! assert!(r.max_offdiag < 1e-10 && r.max_diag_dev < 1e-10);
//! ```

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::quadrature::line::visit_rr;
use crate::quadrature::simplex::{visit_collapsed, CollapsedWeight};
use crate::quadrature::{integrate_h_weighted, refine, QuadratureSpec};
use crate::special::{c_lambda, ln_gamma, pochhammer, romanovski_total_with_err, WeightParam};
use crate::spectra::gamma_qe;
use crate::symbol::SymbolSpec;

/// `||z^p||^2` in `L^2(B^n, v_lambda)`: `p! Gamma(n + lambda + 1) / Gamma(n + |p| + lambda + 1)`.
pub fn monomial_norm_sq(p: &MultiIndex, lambda: f64) -> f64 {
    let n = p.dim() as f64;
    (p.ln_factorial() + ln_gamma(n + lambda + 1.0) - ln_gamma(n + p.order() as f64 + lambda + 1.0)).exp()
}

/// `||z^p||` in `L^2(B^n, v_lambda)`.
pub fn monomial_norm(p: &MultiIndex, lambda: f64) -> f64 {
    monomial_norm_sq(p, lambda).sqrt()
}

/// `M[p][q] = <a e_p, e_q>` for the normalised monomials `e_p = z^p / ||z^p||`
/// with `|p|, |q| <= degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzMatrix {
    pub degree: u32,
    pub basis: Vec<MultiIndex>,
    pub entries: DMatrix<Complex64>,
    pub err: f64,
}

impl ToeplitzMatrix {
    pub fn max_offdiag(&self) -> f64 {
        let k = self.basis.len();
        let mut m: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    m = m.max(self.entries[(i, j)].norm());
                }
            }
        }
        m
    }

    /// `max |M - M^*|`.
    pub fn hermitian_defect(&self) -> f64 {
        let d = &self.entries - self.entries.adjoint();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.basis.len()).map(|i| self.entries[(i, i)]).collect()
    }

    /// Long-format CSV: `p, q, re, im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,q,re,im\n");
        for (i, p) in self.basis.iter().enumerate() {
            for (j, q) in self.basis.iter().enumerate() {
                let z = self.entries[(i, j)];
                out.push_str(&format!("\"{p}\",\"{q}\",{},{}\n", z.re, z.im));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let k = self.basis.len();
        let rows: Vec<Vec<[f64; 2]>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| [self.entries[(i, j)].re, self.entries[(i, j)].im])
                    .collect()
            })
            .collect();
        serde_json::json!({
            "degree": self.degree,
            "basis": self.basis,
            "entries": rows,
            "err": self.err,
        })
    }
}

/// `H(z) = (|z_j|^2 / (1 - |z|^2))_j`, the reparametrised moment map on the ball.
fn ball_h(z: &[Complex64], h: &mut Vec<f64>) {
    let d = 1.0 - z.iter().map(|c| c.norm_sqr()).sum::<f64>();
    h.clear();
    h.extend(z.iter().map(|c| c.norm_sqr() / d));
}

/// Builds the truncated Toeplitz matrix of `a` on `B^n` by direct quadrature
/// against `v_lambda`, using `angular_nodes` trapezoid nodes per angle.
/// `breaks[j]` lists values of `h_j` across which `a` jumps.
pub fn toeplitz_matrix_ball_with(
    a: &(dyn Fn(&[Complex64]) -> Result<Complex64> + Sync),
    lambda: f64,
    n: usize,
    degree: u32,
    angular_nodes: usize,
    breaks: &[Vec<f64>],
    spec: &QuadratureSpec,
) -> Result<ToeplitzMatrix> {
    let lambda = WeightParam::new(lambda)?.get();
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if angular_nodes == 0 {
        return Err(Error::Quadrature("angular_nodes must be positive".into()));
    }
    let basis = MultiIndex::all_up_to(n, degree);
    let k = basis.len();
    let norms: Vec<f64> = basis.iter().map(|p| monomial_norm(p, lambda)).collect();
    let weight = CollapsedWeight::simplex(n, lambda);
    let phases: Vec<Complex64> = (0..angular_nodes)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / angular_nodes as f64))
        .collect();
    let prefactor = c_lambda(n, lambda) / 2f64.powi(n as i32) * (2.0 * PI / angular_nodes as f64).powi(n as i32);
    let total = angular_nodes.pow(n as u32);
    let max_power = degree as usize;

    let eval = |m: usize| -> Result<DMatrix<Complex64>> {
        let mut radial: Vec<(Vec<f64>, f64)> = Vec::new();
        visit_collapsed(&weight, breaks, m, spec.subdivisions, true, |node, w| {
            radial.push((node.x.iter().map(|x| x.sqrt()).collect(), w * prefactor));
            Ok(())
        })?;
        let zero = || DMatrix::from_element(k, k, Complex64::new(0.0, 0.0));
        // fixed chunks summed in order keep the result independent of scheduling
        let parts = radial
            .par_chunks(64)
            .map(|chunk| -> Result<DMatrix<Complex64>> {
                let mut acc = zero();
                let mut z = vec![Complex64::new(0.0, 0.0); n];
                let mut mono = vec![Complex64::new(0.0, 0.0); k];
                let mut powers = vec![vec![Complex64::new(1.0, 0.0); max_power + 1]; n];
                for (radius, w) in chunk {
                    for idx in 0..total {
                        let mut rest = idx;
                        for j in 0..n {
                            z[j] = phases[rest % angular_nodes] * radius[j];
                            rest /= angular_nodes;
                            for e in 1..=max_power {
                                powers[j][e] = powers[j][e - 1] * z[j];
                            }
                        }
                        let val = a(&z)? * *w;
                        for (b, p) in basis.iter().enumerate() {
                            let mut v = Complex64::new(1.0, 0.0);
                            for (j, &e) in p.entries().iter().enumerate() {
                                v *= powers[j][e as usize];
                            }
                            mono[b] = v;
                        }
                        // <a z^p, z^q> = int a z^p conj(z^q)
                        for (i, zp) in mono.iter().enumerate() {
                            let vp = val * zp;
                            for (jq, zq) in mono.iter().enumerate() {
                                acc[(i, jq)] += vp * zq.conj();
                            }
                        }
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        let raw = parts.into_iter().fold(zero(), |a, b| a + b);
        Ok(DMatrix::from_fn(k, k, |i, j| raw[(i, j)] / (norms[i] * norms[j])))
    };
    let max_abs = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| {
        let d = (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max);
        (d, 1.0)
    };
    let (entries, err) = refine(spec, 2 * n, eval, max_abs)?;
    Ok(ToeplitzMatrix {
        degree,
        basis,
        entries,
        err,
    })
}

/// [`toeplitz_matrix_ball_with`] with `4 degree + 1` angular nodes and no breakpoints.
pub fn toeplitz_matrix_ball(
    a: &(dyn Fn(&[Complex64]) -> Result<Complex64> + Sync),
    lambda: f64,
    n: usize,
    degree: u32,
    spec: &QuadratureSpec,
) -> Result<ToeplitzMatrix> {
    toeplitz_matrix_ball_with(a, lambda, n, degree, 4 * degree as usize + 1, &[], spec)
}

/// Toeplitz matrix of the moment-map symbol `f o H` on `B^n`.
pub fn moment_symbol_matrix(
    f: &SymbolSpec,
    lambda: f64,
    n: usize,
    degree: u32,
    spec: &QuadratureSpec,
) -> Result<ToeplitzMatrix> {
    f.check_arity(n, false)?;
    let a = |z: &[Complex64]| -> Result<Complex64> {
        let mut h = Vec::with_capacity(z.len());
        ball_h(z, &mut h);
        f.eval(&h, None)
    };
    toeplitz_matrix_ball_with(&a, lambda, n, degree, 4 * degree as usize + 1, &f.h_breaks(n), spec)
}

/// Result of [`verify_diagonalization`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagonalizationReport {
    pub max_offdiag: f64,
    pub max_diag_dev: f64,
    /// Quadrature error estimate of the matrix entries.
    pub err: f64,
}

/// Compares the brute-force matrix of `f o H` with the multipliers `gamma_qe(f, lambda, n, p)`.
pub fn verify_diagonalization(
    f: &SymbolSpec,
    lambda: f64,
    n: usize,
    degree: u32,
    spec: &QuadratureSpec,
) -> Result<DiagonalizationReport> {
    let m = moment_symbol_matrix(f, lambda, n, degree, spec)?;
    let mut dev: f64 = 0.0;
    for (i, p) in m.basis.iter().enumerate() {
        let g = gamma_qe(f, lambda, n, p, spec)?;
        dev = dev.max((m.entries[(i, i)] - g.value).norm());
    }
    Ok(DiagonalizationReport {
        max_offdiag: m.max_offdiag(),
        max_diag_dev: dev,
        err: m.err,
    })
}

fn central_diff<T>(g: impl Fn(f64) -> T, x: f64, step: f64) -> T
where
    T: std::ops::Sub<Output = T> + std::ops::Div<f64, Output = T>,
{
    (g(x + step) - g(x - step)) / (2.0 * step)
}

fn relative(lhs: Complex64, rhs: Complex64, phi: Complex64) -> f64 {
    let scale = lhs.norm() + rhs.norm() + phi.norm();
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).norm() / scale
    }
}

/// `h^{p/2} / (1 + |h|_1)^{|p|/2}`.
pub fn qe_solution(p: &MultiIndex, h: &[f64]) -> f64 {
    let s: f64 = h.iter().sum();
    let ln = p
        .entries()
        .iter()
        .zip(h)
        .map(|(&k, &x)| 0.5 * k as f64 * x.ln())
        .sum::<f64>()
        - 0.5 * p.order() as f64 * (1.0 + s).ln();
    ln.exp()
}

/// Largest relative residual of `p_j/(2 h_j) phi = d_j phi + sum_k h_k d_k phi`
/// on `phi = `[`qe_solution`]. Derivatives are analytic for `fd_step = None`,
/// otherwise central differences with step `fd_step * h_j`.
pub fn pde_residual_qe(p: &MultiIndex, h: &[f64], fd_step: Option<f64>) -> Result<f64> {
    if p.dim() != h.len() || h.is_empty() {
        return Err(Error::Arity("p and h must have the same positive length".into()));
    }
    if h.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Domain("h must be positive".into()));
    }
    let n = h.len();
    let phi = qe_solution(p, h);
    let s: f64 = h.iter().sum();
    let grad: Vec<f64> = (0..n)
        .map(|j| match fd_step {
            None => phi * (0.5 * p.entries()[j] as f64 / h[j] - 0.5 * p.order() as f64 / (1.0 + s)),
            Some(step) => central_diff(
                |x| {
                    let mut hh = h.to_vec();
                    hh[j] = x;
                    qe_solution(p, &hh)
                },
                h[j],
                step * h[j],
            ),
        })
        .collect();
    let euler: f64 = h.iter().zip(&grad).map(|(x, g)| x * g).sum();
    Ok((0..n)
        .map(|j| {
            let lhs = 0.5 * p.entries()[j] as f64 / h[j] * phi;
            let rhs = grad[j] + euler;
            relative(lhs.into(), rhs.into(), phi.into())
        })
        .fold(0.0, f64::max))
}

/// `log w` with the argument taken in `(0, 2 pi)`.
fn log_upper(w: Complex64) -> Complex64 {
    let mut arg = w.im.atan2(w.re);
    if arg <= 0.0 {
        arg += 2.0 * PI;
    }
    Complex64::new(w.norm().ln(), arg)
}

fn qh_exponent(p_prime: &MultiIndex, xi: f64, lambda: f64, n: usize) -> Complex64 {
    Complex64::new(-0.5 * (p_prime.order() as f64 + n as f64 + lambda + 1.0), xi)
}

/// `(h')^{p'/2} (i (1 + |h'|_1) + h_n)^{i xi - (|p'| + n + lambda + 1)/2}`; `h` has `n` entries.
pub fn qh_solution(p_prime: &MultiIndex, xi: f64, lambda: f64, h: &[f64]) -> Complex64 {
    let n = h.len();
    let hp = &h[..n - 1];
    let s: f64 = hp.iter().sum();
    let w = Complex64::new(h[n - 1], 1.0 + s);
    let c = qh_exponent(p_prime, xi, lambda, n);
    let ln_mono: f64 = p_prime
        .entries()
        .iter()
        .zip(hp)
        .map(|(&k, &x)| 0.5 * k as f64 * x.ln())
        .sum();
    (c * log_upper(w) + ln_mono).exp()
}

/// Largest relative residual of the quasi-hyperbolic holomorphy system on
/// [`qh_solution`]:
///
/// ```text
/// d_j phi = (p_j / (2 h_j) + i c / w) phi   (j < n),
/// d_n phi = c / w phi,
/// ```
///
/// with `w = i (1 + |h'|_1) + h_n` and `c = i xi - (|p'| + n + lambda + 1)/2`.
pub fn pde_residual_qh(p_prime: &MultiIndex, xi: f64, lambda: f64, h: &[f64], fd_step: Option<f64>) -> Result<f64> {
    let n = h.len();
    if n == 0 || p_prime.dim() + 1 != n {
        return Err(Error::Arity("h must have one more entry than p'".into()));
    }
    if h[..n - 1].iter().any(|&x| !(x > 0.0) || !x.is_finite()) || !h[n - 1].is_finite() {
        return Err(Error::Domain("h' must be positive and h_n finite".into()));
    }
    let lambda = WeightParam::new(lambda)?.get();
    let phi = qh_solution(p_prime, xi, lambda, h);
    let s: f64 = h[..n - 1].iter().sum();
    let w = Complex64::new(h[n - 1], 1.0 + s);
    let c = qh_exponent(p_prime, xi, lambda, n);
    let i = Complex64::i();
    let coef = |j: usize| -> Complex64 {
        if j + 1 == n {
            c / w
        } else {
            0.5 * p_prime.entries()[j] as f64 / h[j] + i * c / w
        }
    };
    let deriv = |j: usize| -> Complex64 {
        match fd_step {
            None => coef(j) * phi,
            Some(step) => {
                let st = step * h[j].abs().max(1.0);
                central_diff(
                    |x| {
                        let mut hh = h.to_vec();
                        hh[j] = x;
                        qh_solution(p_prime, xi, lambda, &hh)
                    },
                    h[j],
                    st,
                )
            }
        }
    };
    Ok((0..n)
        .map(|j| relative(deriv(j), coef(j) * phi, phi))
        .fold(0.0, f64::max))
}

/// `arccot` with values in `(0, pi)`.
pub fn arccot(u: f64) -> f64 {
    if u > 0.0 {
        (1.0 / u).atan()
    } else if u < 0.0 {
        PI + (1.0 / u).atan()
    } else {
        0.5 * PI
    }
}

/// `F(p', xi, h', u) = (1 + |h'|_1)^{i xi - (n + lambda)/2} (i + u)^{i xi - (|p'| + n + lambda + 1)/2}`
/// and `|F|^2` from its real closed form, with `n = h'.len() + 1`.
pub fn f_weight(p_prime: &MultiIndex, xi: f64, lambda: f64, h_prime: &[f64], u: f64) -> Result<(Complex64, f64)> {
    if p_prime.dim() != h_prime.len() {
        return Err(Error::Arity("p' and h' must have the same length".into()));
    }
    let n = h_prime.len() + 1;
    let nf = n as f64;
    let one_plus = 1.0 + h_prime.iter().sum::<f64>();
    let a = Complex64::new(-0.5 * (nf + lambda), xi);
    let b = qh_exponent(p_prime, xi, lambda, n);
    let f = (a * one_plus.ln() + b * log_upper(Complex64::new(u, 1.0))).exp();
    let sq = (-2.0 * xi * arccot(u)).exp()
        / (one_plus.powf(nf + lambda) * (1.0 + u * u).powf(0.5 * (p_prime.order() as f64 + nf + lambda + 1.0)));
    Ok((f, sq))
}

/// Measured squared norm of the image of a unit basis vector under the
/// Bargmann-type transform, against the constant 1 an isometry requires.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationReport {
    pub measured: f64,
    /// `measured - 1`.
    pub deviation: f64,
    /// The constant an isometry would give, reported as measured / 1.
    pub ratio_to_stated: f64,
    pub err: f64,
}

impl NormalizationReport {
    fn new(measured: f64, err: f64) -> Self {
        Self {
            measured,
            deviation: measured - 1.0,
            ratio_to_stated: measured,
            err,
        }
    }
}

/// `int |W e_p|^2 d nu~_lambda` for the quasi-elliptic transform
/// `W e_p = sqrt((2 pi)^n (n + lambda + 1)_{|p|} / (p! (lambda + 1)_n)) h^{p/2} / (1 + |h|_1)^{|p|/2}`
/// and `d nu~_lambda = c_lambda / 2^n (1 + |h|_1)^{-(n + lambda + 1)} dh`.
///
/// The measured value is `1 / (lambda + 1)_n`, independent of `p`.
pub fn bargmann_normalization_check(
    p: &MultiIndex,
    lambda: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<NormalizationReport> {
    let lambda = WeightParam::new(lambda)?.get();
    if p.dim() != n || n == 0 {
        return Err(Error::Arity(format!("p must have {n} > 0 entries")));
    }
    let nf = n as f64;
    let k2 = (2.0 * PI).powi(n as i32) * pochhammer(nf + lambda + 1.0, p.order())
        / (p.factorial() * pochhammer(lambda + 1.0, n as u32));
    let s = p.order() as f64 + nf + lambda + 1.0;
    let integral = integrate_h_weighted(p, s, None, spec)?;
    let scale = k2 * c_lambda(n, lambda) / 2f64.powi(n as i32);
    Ok(NormalizationReport::new(scale * integral.value, scale * integral.err))
}

/// Quasi-hyperbolic counterpart of [`bargmann_normalization_check`]: the
/// squared constant `2 (2 pi)^n (n + lambda)_{|p'|} / (p'! (lambda + 1)_n V(2 xi, -(|p'| + n + lambda - 1)/2))`
/// times `c_lambda / 2^{n+1} int (h')^{p'} / (1 + |h'|_1)^{|p'|} |F|^2 dh' du`.
///
/// The measured value is `1 / (lambda + 1)_{n-1}`, independent of `p'` and `xi`.
pub fn bargmann_normalization_check_qh(
    p_prime: &MultiIndex,
    xi: f64,
    lambda: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<NormalizationReport> {
    let lambda = WeightParam::new(lambda)?.get();
    if n == 0 || p_prime.dim() + 1 != n {
        return Err(Error::Arity(format!("p' must have {} entries", n.saturating_sub(1))));
    }
    let nf = n as f64;
    let order = p_prime.order() as f64;
    let alpha = 2.0 * xi;
    let q = 0.5 * (order + nf + lambda + 1.0);
    let v = romanovski_total_with_err(alpha, 1.0 - q, spec)?;
    let k2 = 2.0 * (2.0 * PI).powi(n as i32) * pochhammer(nf + lambda, p_prime.order())
        / (p_prime.factorial() * pochhammer(lambda + 1.0, n as u32) * v.value);
    let h_part = integrate_h_weighted(p_prime, order + nf + lambda, None, spec)?;
    // u part, accumulated directly from |F|^2 at h' = 0 divided by its h'-factor
    let (u_part, u_err) = refine(
        spec,
        1,
        |m| {
            let mut acc = 0.0;
            // the rule carries (1 + u^2)^{-q} du; the exponential stays in the integrand
            visit_rr(0.0, q, &[], m, spec.subdivisions, |node, w| {
                let (_, sq) = f_weight(p_prime, xi, lambda, &vec![0.0; n - 1], node.u)?;
                acc += w * sq * (1.0 + node.u * node.u).powf(q);
                Ok(())
            })?;
            Ok(acc)
        },
        |a: &f64, b: &f64| ((a - b).abs(), a.abs()),
    )?;
    let scale = k2 * c_lambda(n, lambda) / 2f64.powi(n as i32 + 1);
    let measured = scale * h_part.value * u_part;
    let err = scale * (h_part.err * u_part + h_part.value * u_err) + measured * v.rel_err();
    Ok(NormalizationReport::new(measured, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn monomial_norms() {
        assert!((monomial_norm_sq(&mi(&[0, 0]), 0.7) - 1.0).abs() < 1e-15);
        assert!((monomial_norm_sq(&mi(&[1]), 0.0) - 0.5).abs() < 1e-15);
        assert!((monomial_norm_sq(&mi(&[1, 1]), 0.0) - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn identity_for_constant_symbol() {
        let one = |_: &[Complex64]| Ok(Complex64::new(1.0, 0.0));
        let m = toeplitz_matrix_ball(&one, 0.5, 2, 3, &QuadratureSpec::default()).unwrap();
        let id = DMatrix::<Complex64>::identity(m.basis.len(), m.basis.len());
        let dev = (&m.entries - id).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-12, "{dev}");
    }

    #[test]
    fn re_z1_couples_neighbours_only() {
        let a = |z: &[Complex64]| Ok(Complex64::new(z[0].re, 0.0));
        let m = toeplitz_matrix_ball(&a, 0.0, 2, 3, &QuadratureSpec::default()).unwrap();
        for (i, p) in m.basis.iter().enumerate() {
            for (j, q) in m.basis.iter().enumerate() {
                let (dp, dq) = (p.entries(), q.entries());
                let neighbour = dp[1] == dq[1] && (dp[0] as i64 - dq[0] as i64).abs() == 1;
                if !neighbour {
                    assert!(m.entries[(i, j)].norm() < 1e-13);
                }
            }
        }
        assert!(m.max_offdiag() > 0.1);
        assert!(m.hermitian_defect() < 1e-13);
    }

    #[test]
    fn pde_residuals() {
        let p = mi(&[2, 1]);
        let h = [0.7, 1.9];
        assert!(pde_residual_qe(&p, &h, None).unwrap() < 1e-14);
        assert!(pde_residual_qe(&p, &h, Some(1e-5)).unwrap() < 1e-8);
        assert_eq!(pde_residual_qe(&mi(&[0, 0]), &h, None).unwrap(), 0.0);
        let hq = [0.7, -1.3];
        assert!(pde_residual_qh(&mi(&[2]), 0.8, 0.5, &hq, None).unwrap() < 1e-14);
        assert!(pde_residual_qh(&mi(&[2]), 0.8, 0.5, &hq, Some(1e-5)).unwrap() < 1e-7);
    }

    #[test]
    fn f_weight_modulus() {
        let (f, sq) = f_weight(&mi(&[1]), -0.6, 0.3, &[0.4], 2.5).unwrap();
        assert!((f.norm_sqr() - sq).abs() < 1e-14);
        let (_, sq) = f_weight(&mi(&[1]), 1.0, 0.0, &[1.0], 0.0).unwrap();
        assert!((sq - (-PI).exp() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn normalisation_constants() {
        let spec = QuadratureSpec::default();
        for p in 0..4 {
            let r = bargmann_normalization_check(&mi(&[p, 1]), 0.5, 2, &spec).unwrap();
            assert!((r.measured - 1.0 / pochhammer(1.5, 2)).abs() < 1e-12);
            let r = bargmann_normalization_check_qh(&mi(&[p]), 0.3, 0.5, 2, &spec).unwrap();
            assert!((r.measured - 1.0 / 1.5).abs() < 1e-10, "{}", r.measured);
        }
    }
}
