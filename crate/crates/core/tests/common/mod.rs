//! Reference quadrature for the integration tests. Tanh-sinh on finite
//! intervals, with infinite tails folded onto `(0, 1)` by `x = 1 / v`. Nothing
//! here uses Gamma functions or the library's Gauss rules.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const STEP: f64 = 1.0 / 64.0;
/// Nodes closer than this to an endpoint are dropped.
const MIN_GAP: f64 = 1e-150;

/// `int_a^b f` by tanh-sinh. Endpoint singularities are fine as long as `f`
/// stays finite at distance `MIN_GAP` from the ends.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    let mut k = 0i64;
    loop {
        let t = k as f64 * STEP;
        let u = FRAC_PI_2 * t.sinh();
        // distance to the nearer endpoint: half (1 - tanh u) = 2 half / (e^{2u} + 1)
        let gap = 2.0 * half / ((2.0 * u).exp() + 1.0);
        if gap < MIN_GAP * half.max(1.0) || !gap.is_finite() {
            break;
        }
        let w = half * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if k == 0 {
            sum += w * f(a + half);
        } else {
            sum += w * (f(a + gap) + f(b - gap));
        }
        k += 1;
    }
    sum * STEP
}

fn pieces(a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(b);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// `int_a^b f`, split at `breaks`.
pub fn finite(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64]) -> f64 {
    pieces(a, b, breaks)
        .into_iter()
        .map(|(lo, hi)| tanh_sinh(&f, lo, hi))
        .sum()
}

/// `int_1^inf f` via `x = 1 / v`, split at `breaks` (values above 1).
fn tail(f: impl Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    let vb: Vec<f64> = breaks.iter().filter(|&&b| b > 1.0).map(|b| 1.0 / b).collect();
    finite(|v| f(1.0 / v) / (v * v), 0.0, 1.0, &vb)
}

/// `int_0^inf f`, split at `breaks`.
pub fn half_line(f: impl Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    finite(&f, 0.0, 1.0, breaks) + tail(&f, breaks)
}

/// `int_R f`, split at `breaks`.
pub fn real_line(f: impl Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    let neg: Vec<f64> = breaks.iter().map(|b| -b).collect();
    finite(&f, -1.0, 1.0, breaks) + tail(&f, breaks) + tail(|x| f(-x), &neg)
}

/// `arccot` with values in `(0, pi)`, written independently of the library.
pub fn arccot(u: f64) -> f64 {
    FRAC_PI_2 - u.atan()
}

/// `int_{R^2_+} g(h1, h2) dh`, nested.
pub fn quadrant(g: impl Fn(f64, f64) -> f64, breaks1: &[f64], breaks2: &[f64]) -> f64 {
    half_line(|x| half_line(|y| g(x, y), breaks2), breaks1)
}

/// Relative deviation, falling back to absolute near zero.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Values computed once with mpmath at 30 digits and frozen here.
pub mod frozen {
    /// `gamma_qh` for `f = 1/(1+h1+u^2)`, `n = 2`, `lambda = 0.5`, `p' = (1)`, `xi = 0.7`.
    pub const GAMMA_QH_MIXED: f64 = 0.338_833_054_902_341_05;
    /// `V(1.3, -0.7)`.
    pub const V_13_M07: f64 = 0.321_000_066_023_975_9;
    /// Hyperbolic multiplier of `1/(1+u^2)` at `lambda = 0.3`, `xi = -0.4`.
    pub const GAMMA_HYP_LORENTZ: f64 = 0.504_215_851_602_023_6;
}

pub mod points {
    use num_complex::Complex64;
    use rand::Rng;
    use toeplitz_moment::geometry::{BallPoint, SiegelPoint};

    /// A ball point with every coordinate nonzero and `1 - |z|^2 > 0.2`.
    pub fn ball(rng: &mut impl Rng, n: usize) -> BallPoint {
        loop {
            let c: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-0.95..0.95)).collect();
            let sq: f64 = c.iter().map(|x| x * x).sum();
            let nonzero = c.chunks(2).all(|p| p[0].hypot(p[1]) > 1e-3);
            if sq < 0.8 && nonzero {
                return BallPoint::new(c).unwrap();
            }
        }
    }

    /// A Siegel point with `z' != 0`, `|z'| < 1`, `|Re z_n| < 2` and defect in `(0.2, 2)`.
    pub fn siegel(rng: &mut impl Rng, n: usize) -> SiegelPoint {
        let mut c: Vec<f64> = (0..2 * (n - 1)).map(|_| rng.random_range(-0.7..0.7)).collect();
        let prime: f64 = c.iter().map(|x| x * x).sum();
        c.push(rng.random_range(-2.0..2.0));
        c.push(prime + rng.random_range(0.2..2.0));
        SiegelPoint::new(c).unwrap()
    }

    pub fn torus(rng: &mut impl Rng, m: usize) -> Vec<Complex64> {
        (0..m)
            .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
            .collect()
    }
}
