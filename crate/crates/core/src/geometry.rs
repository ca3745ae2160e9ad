//! The unit ball `B^n` and the Siegel domain `D_n`, their torus-type actions,
//! Kähler forms and moment maps.
//!
//! Points are stored as flat real vectors `(x_1, y_1, ..., x_n, y_n)` with
//! `z_j = x_j + i y_j`. A complex tangent vector `V` corresponds to the real
//! vector `(Re V_1, Im V_1, ...)`. For a Kähler form
//! `omega = i sum_{j,k} g_{jk} dz_j ^ dzbar_k` with Hermitian `g` one has
//! `omega(v, w) = -2 Im sum_{j,k} g_{jk} V_j conj(W_k)`, fixed by
//! `i dz ^ dzbar = 2 dx ^ dy`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance to the boundary below which a warning is logged.
pub const BOUNDARY_WARN: f64 = 1e-8;

const UNIT_TOL: f64 = 1e-12;

fn to_complex(coords: &[f64]) -> Vec<Complex64> {
    coords.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

fn to_real(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

fn check_coords(coords: &[f64]) -> Result<()> {
    if coords.is_empty() || !coords.len().is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "expected 2n > 0 real coordinates, got {}",
            coords.len()
        )));
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("coordinates must be finite".into()));
    }
    Ok(())
}

/// A point of the unit ball `|z| < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    coords: Vec<f64>,
}

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_coords(&coords)?;
        let p = Self { coords };
        if !(p.defect() > 0.0) {
            return Err(Error::Domain(format!("|z|^2 = {} is not below 1", p.norm_sq())));
        }
        Ok(p)
    }

    pub fn from_complex(z: &[Complex64]) -> Result<Self> {
        Self::new(to_real(z))
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn z(&self) -> Vec<Complex64> {
        to_complex(&self.coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    /// `1 - |z|^2`.
    pub fn defect(&self) -> f64 {
        1.0 - self.norm_sq()
    }
}

/// A point of the Siegel domain `Im z_n - |z'|^2 > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiegelPoint {
    coords: Vec<f64>,
}

impl SiegelPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_coords(&coords)?;
        let p = Self { coords };
        if !(p.defect() > 0.0) {
            return Err(Error::Domain(format!(
                "Im z_n - |z'|^2 = {} is not positive",
                p.defect()
            )));
        }
        Ok(p)
    }

    pub fn from_complex(z: &[Complex64]) -> Result<Self> {
        Self::new(to_real(z))
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn z(&self) -> Vec<Complex64> {
        to_complex(&self.coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len() / 2
    }

    /// `Im z_n - |z'|^2`.
    pub fn defect(&self) -> f64 {
        let n = self.dim();
        let prime: f64 = self.coords[..2 * n - 2].iter().map(|c| c * c).sum();
        self.coords[2 * n - 1] - prime
    }
}

/// Which of the two actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKind {
    /// `T^n` acting on `B^n` by coordinatewise rotation.
    QuasiElliptic,
    /// `T^{n-1} x R_+` acting on `D_n` by `(t', s) z = (s^{1/2} t' z', s z_n)`.
    QuasiHyperbolic,
}

/// A point of either domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DomainPoint {
    Ball(BallPoint),
    Siegel(SiegelPoint),
}

impl DomainPoint {
    /// Builds a point of the domain acted on by `kind`.
    pub fn new(kind: ActionKind, coords: Vec<f64>) -> Result<Self> {
        Ok(match kind {
            ActionKind::QuasiElliptic => DomainPoint::Ball(BallPoint::new(coords)?),
            ActionKind::QuasiHyperbolic => DomainPoint::Siegel(SiegelPoint::new(coords)?),
        })
    }

    pub fn kind(&self) -> ActionKind {
        match self {
            DomainPoint::Ball(_) => ActionKind::QuasiElliptic,
            DomainPoint::Siegel(_) => ActionKind::QuasiHyperbolic,
        }
    }

    pub fn coords(&self) -> &[f64] {
        match self {
            DomainPoint::Ball(p) => p.coords(),
            DomainPoint::Siegel(p) => p.coords(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords().len() / 2
    }

    pub fn defect(&self) -> f64 {
        match self {
            DomainPoint::Ball(p) => p.defect(),
            DomainPoint::Siegel(p) => p.defect(),
        }
    }
}

impl From<BallPoint> for DomainPoint {
    fn from(p: BallPoint) -> Self {
        DomainPoint::Ball(p)
    }
}

impl From<SiegelPoint> for DomainPoint {
    fn from(p: SiegelPoint) -> Self {
        DomainPoint::Siegel(p)
    }
}

/// A real antisymmetric bilinear form on `R^{2n}`, as a matrix `M` with
/// `omega(v, w) = v^T M w`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm {
    pub matrix: DMatrix<f64>,
}

impl TwoForm {
    pub fn eval(&self, v: &[f64], w: &[f64]) -> f64 {
        let m = &self.matrix;
        let mut acc = 0.0;
        for (a, &va) in v.iter().enumerate() {
            for (b, &wb) in w.iter().enumerate() {
                acc += va * m[(a, b)] * wb;
            }
        }
        acc
    }

    /// `max |M + M^T|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let m = &self.matrix;
        (m + m.transpose()).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// Pullback `A^T M A` by a linear map `A`.
    pub fn pullback(&self, a: &DMatrix<f64>) -> TwoForm {
        TwoForm {
            matrix: a.transpose() * &self.matrix * a,
        }
    }
}

fn check_unit(t: &[Complex64]) -> Result<()> {
    for (j, tj) in t.iter().enumerate() {
        if (tj.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::Domain(format!(
                "torus element t_{} has modulus {}, not 1",
                j + 1,
                tj.norm()
            )));
        }
    }
    Ok(())
}

/// `t z = (t_1 z_1, ..., t_n z_n)`.
pub fn act_qe(t: &[Complex64], z: &BallPoint) -> Result<BallPoint> {
    if t.len() != z.dim() {
        return Err(Error::Domain(format!(
            "torus element has {} entries for a point of C^{}",
            t.len(),
            z.dim()
        )));
    }
    check_unit(t)?;
    let w: Vec<Complex64> = z.z().iter().zip(t).map(|(z, t)| z * t).collect();
    BallPoint::from_complex(&w)
}

/// `(t', s) z = (s^{1/2} t' z', s z_n)`.
pub fn act_qh(t_prime: &[Complex64], s: f64, z: &SiegelPoint) -> Result<SiegelPoint> {
    let n = z.dim();
    if t_prime.len() + 1 != n {
        return Err(Error::Domain(format!(
            "t' has {} entries for a point of C^{n}",
            t_prime.len()
        )));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("s = {s} must be positive")));
    }
    check_unit(t_prime)?;
    let zc = z.z();
    let r = s.sqrt();
    let mut w: Vec<Complex64> = zc[..n - 1].iter().zip(t_prime).map(|(z, t)| z * t * r).collect();
    w.push(zc[n - 1] * s);
    SiegelPoint::from_complex(&w)
}

/// Real `2n x 2n` matrix of the complex-diagonal map `v_j -> c_j v_j`.
pub fn complex_diagonal_matrix(c: &[Complex64]) -> DMatrix<f64> {
    let n = c.len();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for (j, cj) in c.iter().enumerate() {
        m[(2 * j, 2 * j)] = cj.re;
        m[(2 * j, 2 * j + 1)] = -cj.im;
        m[(2 * j + 1, 2 * j)] = cj.im;
        m[(2 * j + 1, 2 * j + 1)] = cj.re;
    }
    m
}

/// Real matrix of `omega = i sum g_{jk} dz_j ^ dzbar_k`.
fn form_from_hermitian(g: &DMatrix<Complex64>) -> TwoForm {
    let n = g.nrows();
    let basis = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            for (a, ca) in basis.iter().enumerate() {
                for (b, cb) in basis.iter().enumerate() {
                    m[(2 * j + a, 2 * k + b)] = -2.0 * (g[(j, k)] * ca * cb.conj()).im;
                }
            }
        }
    }
    TwoForm { matrix: m }
}

/// Kähler form of `B^n` at `z`:
/// `g_{jk} = ((1 - |z|^2) delta_{jk} + zbar_j z_k) / (1 - |z|^2)^2`.
pub fn kahler_form_qe(z: &BallPoint) -> TwoForm {
    let d = z.defect();
    if d < BOUNDARY_WARN {
        log::warn!("Kähler form evaluated {d:e} from the boundary of the ball");
    }
    let zc = z.z();
    let n = zc.len();
    let g = DMatrix::from_fn(n, n, |j, k| {
        let delta = if j == k { d } else { 0.0 };
        (zc[j].conj() * zc[k] + delta) / (d * d)
    });
    form_from_hermitian(&g)
}

/// Kähler form of `D_n` at `z`, with `d = Im z_n - |z'|^2`:
/// `g_{jk} = (d delta_{jk} + zbar_j z_k) / d^2` for `j, k < n`,
/// `g_{jn} = zbar_j / (2i d^2)`, `g_{nj} = -z_j / (2i d^2)`, `g_{nn} = 1 / (4 d^2)`.
pub fn kahler_form_qh(z: &SiegelPoint) -> TwoForm {
    let d = z.defect();
    if d < BOUNDARY_WARN {
        log::warn!("Kähler form evaluated {d:e} from the boundary of the Siegel domain");
    }
    let zc = z.z();
    let n = zc.len();
    let two_i = Complex64::new(0.0, 2.0);
    let g = DMatrix::from_fn(n, n, |j, k| {
        let v = match (j + 1 < n, k + 1 < n) {
            (true, true) => {
                let delta = if j == k { d } else { 0.0 };
                zc[j].conj() * zc[k] + delta
            }
            (true, false) => zc[j].conj() / two_i,
            (false, true) => -zc[k] / two_i,
            (false, false) => Complex64::new(0.25, 0.0),
        };
        v / (d * d)
    });
    form_from_hermitian(&g)
}

/// Kähler form of the domain containing `z`.
pub fn kahler_form(z: &DomainPoint) -> TwoForm {
    match z {
        DomainPoint::Ball(p) => kahler_form_qe(p),
        DomainPoint::Siegel(p) => kahler_form_qh(p),
    }
}

/// Point `exp(sX) z` of the one-parameter orbit; for the quasi-hyperbolic
/// action `exp(sX) = (e^{i s X'}, e^{s X_n})`.
fn orbit(x: &[f64], z: &[Complex64], kind: ActionKind, s: f64) -> Vec<Complex64> {
    let n = z.len();
    match kind {
        ActionKind::QuasiElliptic => z
            .iter()
            .zip(x)
            .map(|(z, x)| z * Complex64::from_polar(1.0, s * x))
            .collect(),
        ActionKind::QuasiHyperbolic => {
            let scale = (s * x[n - 1]).exp();
            let mut w: Vec<Complex64> = z[..n - 1]
                .iter()
                .zip(x)
                .map(|(z, x)| z * Complex64::from_polar(scale.sqrt(), s * x))
                .collect();
            w.push(z[n - 1] * scale);
            w
        }
    }
}

fn check_lie(x: &[f64], z: &DomainPoint) -> Result<()> {
    if x.len() != z.dim() {
        return Err(Error::Domain(format!(
            "Lie algebra vector has {} entries for a point of C^{}",
            x.len(),
            z.dim()
        )));
    }
    Ok(())
}

/// Induced vector field `X#_z = d/ds exp(sX) z` at `s = 0`, analytically:
/// `i X_j z_j` for the rotations and `X_n z_n`, `(X_n / 2) z_j` for the
/// dilation.
pub fn induced_field(x: &[f64], z: &DomainPoint) -> Result<Vec<f64>> {
    check_lie(x, z)?;
    let zc = to_complex(z.coords());
    let n = zc.len();
    let i = Complex64::i();
    let v: Vec<Complex64> = match z.kind() {
        ActionKind::QuasiElliptic => zc.iter().zip(x).map(|(z, x)| i * x * z).collect(),
        ActionKind::QuasiHyperbolic => {
            let xn = x[n - 1];
            let mut v: Vec<Complex64> = zc[..n - 1].iter().zip(x).map(|(z, x)| (i * x + xn / 2.0) * z).collect();
            v.push(zc[n - 1] * xn);
            v
        }
    };
    Ok(to_real(&v))
}

/// Central-difference version of [`induced_field`].
pub fn induced_field_fd(x: &[f64], z: &DomainPoint, step: f64) -> Result<Vec<f64>> {
    check_lie(x, z)?;
    let zc = to_complex(z.coords());
    let plus = to_real(&orbit(x, &zc, z.kind(), step));
    let minus = to_real(&orbit(x, &zc, z.kind(), -step));
    Ok(plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * step)).collect())
}

/// `mu(z) = -(|z_1|^2, ..., |z_n|^2) / (1 - |z|^2)`.
pub fn moment_map_qe(z: &BallPoint) -> Vec<f64> {
    let d = z.defect();
    z.z().iter().map(|c| -c.norm_sqr() / d).collect()
}

/// `mu(z) = -(2|z_1|^2, ..., 2|z_{n-1}|^2, Re z_n) / (2 (Im z_n - |z'|^2))`.
pub fn moment_map_qh(z: &SiegelPoint) -> Vec<f64> {
    let d = z.defect();
    let zc = z.z();
    let n = zc.len();
    let mut mu: Vec<f64> = zc[..n - 1].iter().map(|c| -c.norm_sqr() / d).collect();
    mu.push(-zc[n - 1].re / (2.0 * d));
    mu
}

pub fn moment_map(z: &DomainPoint) -> Vec<f64> {
    match z {
        DomainPoint::Ball(p) => moment_map_qe(p),
        DomainPoint::Siegel(p) => moment_map_qh(p),
    }
}

/// `max_i |d mu_X(e_i) - omega(X#, e_i)|` over the real coordinate basis, with
/// `d mu_X` a central difference of `z -> <mu(z), X>` of the given step.
pub fn verify_hamiltonian(z: &DomainPoint, x: &[f64], step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::Domain(format!("step = {step} must be positive")));
    }
    let xs = induced_field(x, z)?;
    let omega = kahler_form(z);
    let kind = z.kind();
    let pair = |c: Vec<f64>| -> Result<f64> {
        let p = DomainPoint::new(kind, c)?;
        Ok(moment_map(&p).iter().zip(x).map(|(m, x)| m * x).sum())
    };
    let dim = z.coords().len();
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        let mut plus = z.coords().to_vec();
        let mut minus = z.coords().to_vec();
        plus[i] += step;
        minus[i] -= step;
        let dmu = (pair(plus)? - pair(minus)?) / (2.0 * step);
        let om: f64 = (0..dim).map(|b| xs[b] * omega.matrix[(b, i)]).sum();
        worst = worst.max((dmu - om).abs());
    }
    Ok(worst)
}
