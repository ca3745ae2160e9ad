//! Group-moment coordinates `kappa(t, h) = t . sigma(h)` and their inverses
//! `tau = (rho, H)` on the conull sets where no relevant coordinate vanishes.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{act_qe, act_qh, BallPoint, SiegelPoint};
use crate::special::c_lambda;

/// `(t, h)` in `T^n x R^n_+`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCoordQe {
    pub t: Vec<Complex64>,
    pub h: Vec<f64>,
}

impl MomentCoordQe {
    pub fn new(t: Vec<Complex64>, h: Vec<f64>) -> Result<Self> {
        if t.len() != h.len() || h.is_empty() {
            return Err(Error::Domain("t and h must have the same positive length".into()));
        }
        check_positive(&h)?;
        Ok(Self { t, h })
    }
}

/// `(t', s, h)` in `T^{n-1} x R_+ x R^{n-1}_+ x R`; `h` has `n` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCoordQh {
    pub t_prime: Vec<Complex64>,
    pub s: f64,
    pub h: Vec<f64>,
}

impl MomentCoordQh {
    pub fn new(t_prime: Vec<Complex64>, s: f64, h: Vec<f64>) -> Result<Self> {
        if t_prime.len() + 1 != h.len() {
            return Err(Error::Domain("h must have one more entry than t'".into()));
        }
        if !(s > 0.0) {
            return Err(Error::Domain(format!("s = {s} must be positive")));
        }
        check_positive(&h[..h.len() - 1])?;
        if !h[h.len() - 1].is_finite() {
            return Err(Error::Domain("h_n must be finite".into()));
        }
        Ok(Self { t_prime, s, h })
    }
}

fn check_positive(h: &[f64]) -> Result<()> {
    for (j, v) in h.iter().enumerate() {
        if !(*v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("h_{} = {v} must be positive", j + 1)));
        }
    }
    Ok(())
}

fn check_nonzero(z: &[Complex64]) -> Result<()> {
    for (j, c) in z.iter().enumerate() {
        if *c == Complex64::new(0.0, 0.0) {
            return Err(Error::Degenerate(format!(
                "z_{} = 0 lies outside the coordinate chart",
                j + 1
            )));
        }
    }
    Ok(())
}

fn phases(z: &[Complex64]) -> Vec<Complex64> {
    z.iter().map(|c| c / c.norm()).collect()
}

/// `H(z) = (|z_1|^2, ..., |z_n|^2) / (1 - |z|^2)`.
pub fn h_qe(z: &BallPoint) -> Result<Vec<f64>> {
    let zc = z.z();
    check_nonzero(&zc)?;
    let d = z.defect();
    Ok(zc.iter().map(|c| c.norm_sqr() / d).collect())
}

/// `sigma(h) = (h_1^{1/2}, ..., h_n^{1/2}) / (1 + |h|_1)^{1/2}`.
pub fn sigma_qe(h: &[f64]) -> Result<BallPoint> {
    check_positive(h)?;
    let scale = (1.0 + h.iter().sum::<f64>()).sqrt();
    BallPoint::new(h.iter().flat_map(|v| [v.sqrt() / scale, 0.0]).collect())
}

/// `rho(z) = (z_1/|z_1|, ..., z_n/|z_n|)`.
pub fn rho_qe(z: &BallPoint) -> Result<Vec<Complex64>> {
    let zc = z.z();
    check_nonzero(&zc)?;
    Ok(phases(&zc))
}

pub fn kappa_qe(c: &MomentCoordQe) -> Result<BallPoint> {
    act_qe(&c.t, &sigma_qe(&c.h)?)
}

pub fn tau_qe(z: &BallPoint) -> Result<MomentCoordQe> {
    MomentCoordQe::new(rho_qe(z)?, h_qe(z)?)
}

/// `H(z) = (|z_1|^2, ..., |z_{n-1}|^2, Re z_n) / (Im z_n - |z'|^2)`.
pub fn h_qh(z: &SiegelPoint) -> Result<Vec<f64>> {
    let zc = z.z();
    let n = zc.len();
    check_nonzero(&zc[..n - 1])?;
    let d = z.defect();
    let mut h: Vec<f64> = zc[..n - 1].iter().map(|c| c.norm_sqr() / d).collect();
    h.push(zc[n - 1].re / d);
    Ok(h)
}

/// `sigma(h) = (h_1^{1/2}, ..., h_{n-1}^{1/2}, h_n + i (1 + |h'|_1))`.
pub fn sigma_qh(h: &[f64]) -> Result<SiegelPoint> {
    let n = h.len();
    if n == 0 {
        return Err(Error::Domain("h must have at least one entry".into()));
    }
    check_positive(&h[..n - 1])?;
    let norm: f64 = h[..n - 1].iter().sum();
    let mut c: Vec<f64> = h[..n - 1].iter().flat_map(|v| [v.sqrt(), 0.0]).collect();
    c.extend([h[n - 1], 1.0 + norm]);
    SiegelPoint::new(c)
}

/// `rho(z) = (z_1/|z_1|, ..., z_{n-1}/|z_{n-1}|, Im z_n - |z'|^2)` as `(t', s)`.
pub fn rho_qh(z: &SiegelPoint) -> Result<(Vec<Complex64>, f64)> {
    let zc = z.z();
    let n = zc.len();
    check_nonzero(&zc[..n - 1])?;
    Ok((phases(&zc[..n - 1]), z.defect()))
}

pub fn kappa_qh(c: &MomentCoordQh) -> Result<SiegelPoint> {
    act_qh(&c.t_prime, c.s, &sigma_qh(&c.h)?)
}

pub fn tau_qh(z: &SiegelPoint) -> Result<MomentCoordQh> {
    let (t_prime, s) = rho_qh(z)?;
    MomentCoordQh::new(t_prime, s, h_qh(z)?)
}

/// `H~(z) = (H~_0(z), H~_n(z))` with `H~_0 = H'` and `H~_n = Re z_n / Im z_n`.
pub fn h_tilde(z: &SiegelPoint) -> Result<(Vec<f64>, f64)> {
    let mut h = h_qh(z)?;
    h.pop();
    let zn = z.z()[z.dim() - 1];
    Ok((h, zn.re / zn.im))
}

/// Change of variables `h = phi(r) = (r_j^2 / (1 - |r|^2))_j`.
pub fn phi_qe(r: &[f64]) -> Vec<f64> {
    let d = 1.0 - r.iter().map(|v| v * v).sum::<f64>();
    r.iter().map(|v| v * v / d).collect()
}

/// Change of variables `(h, s) = phi(r', x, y)` with `s = y - |r'|^2`,
/// `h_j = r_j^2 / s` and `h_n = x / s`; the argument is `(r', x, y)` flattened.
pub fn phi_qh(arg: &[f64]) -> Vec<f64> {
    let m = arg.len() - 2;
    let (r, x, y) = (&arg[..m], arg[m], arg[m + 1]);
    let s = y - r.iter().map(|v| v * v).sum::<f64>();
    let mut out: Vec<f64> = r.iter().map(|v| v * v / s).collect();
    out.push(x / s);
    out.push(s);
    out
}

/// `det(d phi_r) = 2^n prod r_j / (1 - |r|^2)^{n+1}`.
pub fn jacobian_det_qe(r: &[f64]) -> Result<f64> {
    let d = 1.0 - r.iter().map(|v| v * v).sum::<f64>();
    if !(d > 0.0) || r.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("need r > 0 and |r| < 1".into()));
    }
    let n = r.len() as i32;
    Ok(2f64.powi(n) * r.iter().product::<f64>() / d.powi(n + 1))
}

/// `det(d phi_{(r', x, y)}) = 2^{n-1} prod r_j / (y - |r'|^2)^n`.
pub fn jacobian_det_qh(r_prime: &[f64], x: f64, y: f64) -> Result<f64> {
    let s = y - r_prime.iter().map(|v| v * v).sum::<f64>();
    if !(s > 0.0) || !x.is_finite() || r_prime.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("need r' > 0 and y - |r'|^2 > 0".into()));
    }
    let m = r_prime.len() as i32;
    Ok(2f64.powi(m) * r_prime.iter().product::<f64>() / s.powi(m + 1))
}

/// Determinant of the central-difference Jacobian of `f` at `x`.
pub fn fd_jacobian_det(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], step: f64) -> f64 {
    let dim = x.len();
    let mut jac = DMatrix::zeros(dim, dim);
    let mut xp = x.to_vec();
    for k in 0..dim {
        xp[k] = x[k] + step;
        let plus = f(&xp);
        xp[k] = x[k] - step;
        let minus = f(&xp);
        xp[k] = x[k];
        for i in 0..dim {
            jac[(i, k)] = (plus[i] - minus[i]) / (2.0 * step);
        }
    }
    jac.determinant()
}

/// Density of `nu_lambda = c_lambda / 2^n (dt/it) dh / (1 + |h|_1)^{n+lambda+1}`
/// with respect to `(dt/it) dh`. Each factor `dt_j / (i t_j)` has total mass `2 pi`.
pub fn measure_density_qe(h: &[f64], lambda: f64) -> f64 {
    let n = h.len();
    let s: f64 = h.iter().sum();
    c_lambda(n, lambda) / 2f64.powi(n as i32) * (1.0 + s).powf(-(n as f64 + lambda + 1.0))
}

/// Density of `nu^_lambda = c_lambda / 2^{n+1} (dt'/it') s^{n+lambda} ds dh` with
/// respect to `(dt'/it') ds dh`; independent of `h`.
pub fn measure_density_qh(n: usize, s: f64, lambda: f64) -> f64 {
    c_lambda(n, lambda) / 2f64.powi(n as i32 + 1) * s.powf(n as f64 + lambda)
}

/// Total mass `(2 pi)^m` of the angular factor `dt / (it)` on `T^m`.
pub fn torus_mass(m: usize) -> f64 {
    (2.0 * PI).powi(m as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qe_examples() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let z = BallPoint::new(vec![r, 0.0]).unwrap();
        assert!((h_qe(&z).unwrap()[0] - 1.0).abs() < 1e-15);
        assert!((sigma_qe(&[1.0]).unwrap().coords()[0] - r).abs() < 1e-15);
        let k = kappa_qe(&MomentCoordQe::new(vec![Complex64::i()], vec![1.0]).unwrap()).unwrap();
        assert!(k.coords()[0].abs() < 1e-16 && (k.coords()[1] - r).abs() < 1e-15);
        let zero = BallPoint::new(vec![0.0, 0.0, 0.3, 0.0]).unwrap();
        assert!(matches!(tau_qe(&zero), Err(Error::Degenerate(_))));
    }

    #[test]
    fn qh_examples() {
        let z = sigma_qh(&[0.0]).unwrap();
        assert_eq!(z.coords(), &[0.0, 1.0]);
        let c = tau_qh(&z).unwrap();
        assert_eq!((c.s, c.h.clone()), (1.0, vec![0.0]));
        let z = SiegelPoint::new(vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        assert!(matches!(tau_qh(&z), Err(Error::Degenerate(_))));
        let (_, hn) = h_tilde(&SiegelPoint::new(vec![1.0, 0.0, 1.0, 3.0]).unwrap()).unwrap();
        assert!((hn - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn jacobian_examples() {
        assert!((jacobian_det_qe(&[0.5]).unwrap() - 16.0 / 9.0).abs() < 1e-15);
        assert!((jacobian_det_qh(&[], 0.3, 2.0).unwrap() - 0.5).abs() < 1e-16);
        let r = [0.3, 0.5];
        let fd = fd_jacobian_det(phi_qe, &r, 1e-6);
        let exact = jacobian_det_qe(&r).unwrap();
        assert!((fd - exact).abs() < 1e-6 * exact);
        let arg = [0.4, 0.7, -0.2, 1.5];
        let fd = fd_jacobian_det(phi_qh, &arg, 1e-6);
        let exact = jacobian_det_qh(&arg[..2], arg[2], arg[3]).unwrap();
        assert!((fd - exact).abs() < 1e-6 * exact);
    }

    #[test]
    fn density_examples() {
        assert!((measure_density_qe(&[0.0], 0.0) - 1.0 / (2.0 * PI)).abs() < 1e-16);
        assert_eq!(measure_density_qh(2, 1.0, 0.5), c_lambda(2, 0.5) / 8.0);
    }
}
