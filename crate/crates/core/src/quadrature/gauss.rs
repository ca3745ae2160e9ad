//! Gauss–Jacobi rules on `[-1, 1]` for the weight `(1 - t)^alpha (1 + t)^beta`.
//!
//! Nodes come from the Golub–Welsch eigenproblem and are then polished by
//! Newton steps on the orthonormal recurrence; weights are the Christoffel
//! numbers `1 / sum_k q_k(t_i)^2`, which keeps small weights relatively
//! accurate. Legendre is the case `alpha = beta = 0`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::special::ln_gamma;

/// A quadrature rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i f(t_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }
}

/// Recurrence coefficients `(a_k, b_k)` of the monic Jacobi polynomials, with
/// `b_k` the square root of the off-diagonal term (`b_0` unused).
fn jacobi_recurrence(m: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let mut a = vec![0.0; m + 1];
    let mut b = vec![0.0; m + 1];
    a[0] = (beta - alpha) / (ab + 2.0);
    for k in 1..=m {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        a[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        let b2 = if k == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        b[k] = b2.sqrt();
    }
    (a, b)
}

/// Total mass `int_{-1}^{1} (1-t)^alpha (1+t)^beta dt`.
pub fn jacobi_mass(alpha: f64, beta: f64) -> f64 {
    ((alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(alpha + beta + 2.0))
    .exp()
}

/// Orthonormal polynomials `q_0..q_m` at `x` and the derivative of `q_m`.
fn orthonormal_eval(x: f64, a: &[f64], b: &[f64], mu0: f64, m: usize, q: &mut [f64]) -> f64 {
    let mut dprev = 0.0;
    let mut dcur = 0.0;
    q[0] = 1.0 / mu0.sqrt();
    let mut prev = 0.0;
    for k in 0..m {
        let cur = q[k];
        let bk = if k == 0 { 0.0 } else { b[k] };
        let next = ((x - a[k]) * cur - bk * prev) / b[k + 1];
        let dnext = (cur + (x - a[k]) * dcur - bk * dprev) / b[k + 1];
        q[k + 1] = next;
        prev = cur;
        dprev = dcur;
        dcur = dnext;
    }
    dcur
}

fn compute_rule(m: usize, alpha: f64, beta: f64) -> GaussRule {
    assert!(m >= 1, "a Gauss rule needs at least one node");
    assert!(alpha > -1.0 && beta > -1.0, "Jacobi exponents must exceed -1");
    let (a, b) = jacobi_recurrence(m, alpha, beta);
    let mu0 = jacobi_mass(alpha, beta);

    let mut jm = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        jm[(i, i)] = a[i];
        if i + 1 < m {
            jm[(i, i + 1)] = b[i + 1];
            jm[(i + 1, i)] = b[i + 1];
        }
    }
    let eig = SymmetricEigen::new(jm);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let mut q = vec![0.0; m + 1];
    let mut weights = Vec::with_capacity(m);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let dq = orthonormal_eval(*x, &a, &b, mu0, m, &mut q);
            if dq == 0.0 || !dq.is_finite() {
                break;
            }
            let step = q[m] / dq;
            let nx = *x - step;
            if !(nx > -1.0 && nx < 1.0) {
                break;
            }
            *x = nx;
            if step.abs() < 1e-17 {
                break;
            }
        }
        orthonormal_eval(*x, &a, &b, mu0, m, &mut q);
        let s: f64 = q[..m].iter().map(|v| v * v).sum();
        weights.push(1.0 / s);
    }
    GaussRule {
        nodes,
        weights,
        alpha,
        beta,
    }
}

type RuleKey = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<GaussRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<GaussRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached `m`-point Gauss–Jacobi rule for `(1 - t)^alpha (1 + t)^beta`.
pub fn gauss_jacobi(m: usize, alpha: f64, beta: f64) -> Arc<GaussRule> {
    // normalise -0.0 so it shares a cache slot with 0.0
    let alpha = alpha + 0.0;
    let beta = beta + 0.0;
    let key = (m, alpha.to_bits(), beta.to_bits());
    if let Some(rule) = cache().lock().unwrap().get(&key) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(compute_rule(m, alpha, beta));
    cache()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&rule))
        .clone()
}

/// Cached `m`-point Gauss–Legendre rule.
pub fn gauss_legendre(m: usize) -> Arc<GaussRule> {
    gauss_jacobi(m, 0.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_low_order_nodes() {
        let r = gauss_legendre(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + x).abs() < 1e-15);
        assert!((r.nodes[1] - x).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
        let r = gauss_legendre(1);
        assert_eq!(r.nodes.len(), 1);
        assert!(r.nodes[0].abs() < 1e-15);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn legendre_exact_for_polynomials() {
        let r = gauss_legendre(10);
        // int_{-1}^{1} t^18 dt = 2/19
        let v = r.integrate(|t| t.powi(18));
        assert!((v - 2.0 / 19.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_moments_match_beta_function() {
        // int (1-t)^a (1+t)^b t^k dt checked through the substitution t = 2x - 1:
        // 2^{a+b+1} int x^b (1-x)^a (2x-1)^k dx; for k = 1 this is mass * (b-a)/(a+b+2)
        for &(a, b) in &[(0.0, 0.0), (-0.5, 0.0), (1.7, 3.0), (-0.9, -0.9), (12.0, 0.5)] {
            for m in [3usize, 8, 31] {
                let r = gauss_jacobi(m, a, b);
                let mass = jacobi_mass(a, b);
                let w: f64 = r.weights.iter().sum();
                assert!((w - mass).abs() < 1e-13 * mass, "mass a={a} b={b} m={m}");
                let first = r.integrate(|t| t);
                assert!((first - mass * (b - a) / (a + b + 2.0)).abs() < 1e-13 * mass);
            }
        }
    }

    #[test]
    fn chebyshev_first_kind_nodes() {
        // alpha = beta = -1/2: nodes cos((2i-1) pi / 2m), equal weights pi/m
        let m = 7;
        let r = gauss_jacobi(m, -0.5, -0.5);
        for i in 0..m {
            let expect = -(((2 * i + 1) as f64) * std::f64::consts::PI / (2.0 * m as f64)).cos();
            assert!((r.nodes[i] - expect).abs() < 1e-14);
            assert!((r.weights[i] - std::f64::consts::PI / m as f64).abs() < 1e-14);
        }
    }
}
