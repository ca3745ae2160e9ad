//! Expression language for moment-map symbols `f(h1, ..., hk, u)`.
//!
//! ```
//! use toeplitz_moment::symbol::SymbolSpec;
//!
//! let f = SymbolSpec::parse("h1/(1+h1+h2)").unwrap();
//! assert_eq!(f.max_h(), 2);
//! assert!((f.eval_at(&[1.0, 1.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
//! ```

mod ast;
mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

pub use ast::{BinOp, CmpOp, Cond, Expr, ExprKind, Func, Span, Var};

use crate::error::{Error, Result};

/// Number of quasi-random points used to falsify a declared bound.
pub const BOUND_SAMPLES: usize = 10_000;

/// Parses a single expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    parser::parse_expr(text)
}

/// A parsed symbol: real part, optional imaginary part, arity and
/// discontinuity registry.
#[derive(Debug, Clone)]
pub struct SymbolSpec {
    source: String,
    re: Expr,
    im: Option<Expr>,
    max_h: usize,
    uses_u: bool,
    declared_bound: Option<f64>,
    breaks: BTreeMap<Var, Vec<f64>>,
}

impl PartialEq for SymbolSpec {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im && self.declared_bound == other.declared_bound
    }
}

impl SymbolSpec {
    /// Parses a real-valued symbol.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::from_parts(text.to_string(), parse_expr(text)?, None))
    }

    /// Parses a complex symbol given as real and imaginary parts.
    pub fn parse_complex(re: &str, im: &str) -> Result<Self> {
        let r = parse_expr(re)?;
        let i = parse_expr(im)?;
        Ok(Self::from_parts(format!("({re}) + i*({im})"), r, Some(i)))
    }

    /// Wraps an already parsed expression; the source text is its canonical form.
    pub fn from_expr(expr: Expr) -> Self {
        Self::from_parts(expr.to_string(), expr, None)
    }

    /// The constant symbol `1`.
    pub fn one() -> Self {
        Self::parse("1").expect("literal parses")
    }

    fn from_parts(source: String, re: Expr, im: Option<Expr>) -> Self {
        let mut max_h = 0;
        let mut uses_u = false;
        let mut note = |v: Var| match v {
            Var::H(j) => max_h = max_h.max(j),
            Var::U => uses_u = true,
        };
        re.for_each_var(&mut note);
        if let Some(im) = &im {
            im.for_each_var(&mut note);
        }
        let mut breaks: BTreeMap<Var, Vec<f64>> = BTreeMap::new();
        let mut register = |a: &Expr, b: &Expr| {
            // a - b = p * v + q vanishes at v = -q / p
            if let (Some((va, pa, qa)), Some((vb, pb, qb))) = (a.affine(), b.affine()) {
                let v = match (va, vb) {
                    (Some(x), Some(y)) if x != y => return,
                    (x, y) => x.or(y),
                };
                let p = pa - pb;
                if let Some(v) = v {
                    if p != 0.0 {
                        let at = -(qa - qb) / p;
                        if at.is_finite() {
                            breaks.entry(v).or_default().push(at);
                        }
                    }
                }
            }
        };
        re.for_each_split(&mut register);
        if let Some(im) = &im {
            im.for_each_split(&mut register);
        }
        for bs in breaks.values_mut() {
            bs.sort_by(f64::total_cmp);
            bs.dedup();
        }
        Self {
            source,
            re,
            im,
            max_h,
            uses_u,
            declared_bound: None,
            breaks,
        }
    }

    /// Declares `|f| <= bound` and checks it at [`BOUND_SAMPLES`] quasi-random
    /// points of the symbol's domain.
    pub fn with_bound(mut self, bound: f64) -> Result<Self> {
        if !(bound > 0.0) || !bound.is_finite() {
            return Err(Error::Bound(format!("declared bound {bound} must be positive")));
        }
        self.declared_bound = Some(bound);
        self.validate_bound()?;
        Ok(self)
    }

    pub fn declared_bound(&self) -> Option<f64> {
        self.declared_bound
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn re(&self) -> &Expr {
        &self.re
    }

    pub fn im(&self) -> Option<&Expr> {
        self.im.as_ref()
    }

    pub fn is_complex(&self) -> bool {
        self.im.is_some()
    }

    /// Largest `j` such that `hj` occurs (0 if none does).
    pub fn max_h(&self) -> usize {
        self.max_h
    }

    pub fn uses(&self, v: Var) -> bool {
        match v {
            Var::U => self.uses_u,
            Var::H(j) => {
                let mut found = false;
                let mut look = |w: Var| found |= w == Var::H(j);
                self.re.for_each_var(&mut look);
                if let Some(im) = &self.im {
                    im.for_each_var(&mut look);
                }
                found
            }
        }
    }

    /// Sorted breakpoints registered for `v`.
    pub fn breaks(&self, v: Var) -> &[f64] {
        self.breaks.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Breakpoints for `h1..hk`, one list per variable.
    pub fn h_breaks(&self, k: usize) -> Vec<Vec<f64>> {
        (1..=k).map(|j| self.breaks(Var::H(j)).to_vec()).collect()
    }

    /// Checks that the symbol only uses `h1..hk`, and `u` only if allowed.
    pub fn check_arity(&self, k: usize, u_allowed: bool) -> Result<()> {
        if self.max_h > k {
            return Err(Error::Arity(format!(
                "symbol uses h{} but only h1..h{k} are available",
                self.max_h
            )));
        }
        if self.uses_u && !u_allowed {
            return Err(Error::Arity("symbol uses `u`, which is not available here".into()));
        }
        Ok(())
    }

    /// Real part at `(h, u)`.
    pub fn eval_re(&self, h: &[f64], u: Option<f64>) -> Result<f64> {
        self.re.eval(h, u)
    }

    /// Value at `(h, u)`.
    pub fn eval(&self, h: &[f64], u: Option<f64>) -> Result<Complex64> {
        let re = self.re.eval(h, u)?;
        let im = match &self.im {
            Some(e) => e.eval(h, u)?,
            None => 0.0,
        };
        Ok(Complex64::new(re, im))
    }

    /// Real part at a flat point `(h1, ..., hk[, u])`, where `k = max_h()` and
    /// `u` is present iff the symbol uses it.
    pub fn eval_at(&self, point: &[f64]) -> Result<f64> {
        let want = self.max_h + usize::from(self.uses_u);
        if point.len() != want {
            return Err(Error::Arity(format!(
                "expected a point of dimension {want}, got {}",
                point.len()
            )));
        }
        let (h, u) = if self.uses_u {
            (&point[..self.max_h], Some(point[self.max_h]))
        } else {
            (point, None)
        };
        self.eval_re(h, u)
    }

    /// Minimum and maximum of `|f|`-relevant values over the quasi-random
    /// sample used for bound validation, real part only.
    pub fn sampled_range(&self) -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        self.for_each_sample(|z| {
            lo = lo.min(z.re);
            hi = hi.max(z.re);
            Ok(())
        })?;
        Ok((lo, hi))
    }

    /// Checks the declared bound, if any, against [`BOUND_SAMPLES`] Halton
    /// points. `h` coordinates are drawn on `(0, inf)` through `t / (1 - t)`,
    /// `u` on the real line through `tan(pi (t - 1/2))`.
    pub fn validate_bound(&self) -> Result<()> {
        let Some(bound) = self.declared_bound else {
            return Ok(());
        };
        self.for_each_sample(|z| {
            if z.norm() > bound * (1.0 + 1e-12) {
                Err(Error::Bound(format!(
                    "|f| = {} exceeds declared bound {bound}",
                    z.norm()
                )))
            } else {
                Ok(())
            }
        })
    }

    fn for_each_sample(&self, mut f: impl FnMut(Complex64) -> Result<()>) -> Result<()> {
        let dims = self.max_h + usize::from(self.uses_u);
        let mut h = vec![0.0; self.max_h];
        for i in 1..=BOUND_SAMPLES {
            for (d, hj) in h.iter_mut().enumerate() {
                let t = halton(i, PRIMES[d % PRIMES.len()]);
                *hj = t / (1.0 - t);
            }
            let u = self.uses_u.then(|| {
                let t = halton(i, PRIMES[(dims - 1) % PRIMES.len()]);
                (std::f64::consts::PI * (t - 0.5)).tan()
            });
            f(self.eval(&h, u)?)?;
        }
        Ok(())
    }
}

const PRIMES: [usize; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn halton(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

impl fmt::Display for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.im {
            None => write!(f, "{}", self.re),
            Some(im) => write!(f, "{} + i*{}", self.re, im),
        }
    }
}

impl std::str::FromStr for SymbolSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let f = SymbolSpec::parse("1/(1+h1)").unwrap();
        assert_eq!(f.max_h(), 1);
        assert!(!f.uses(Var::U));
        assert_eq!(f.eval_at(&[1.0]).unwrap(), 0.5);

        let g = SymbolSpec::parse("ind(u>0)").unwrap();
        assert_eq!(g.breaks(Var::U), &[0.0]);
        assert_eq!(g.eval_at(&[-2.0]).unwrap(), 0.0);

        let k = SymbolSpec::parse("h1/(1+h1+h2)").unwrap();
        assert!((k.eval_at(&[1.0, 1.0]).unwrap() - 1.0 / 3.0).abs() < 1e-16);

        assert!(matches!(SymbolSpec::parse("foo(h1)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn affine_breakpoints() {
        let f = SymbolSpec::parse("ind(2*h1 - 1 < 0) + ind(3 > h2/4) + min(u, -1) + ind(h1 + h2 < 1)").unwrap();
        assert_eq!(f.breaks(Var::H(1)), &[0.5]);
        assert_eq!(f.breaks(Var::H(2)), &[12.0]);
        assert_eq!(f.breaks(Var::U), &[-1.0]);
        assert_eq!(f.h_breaks(3), vec![vec![0.5], vec![12.0], vec![]]);
    }

    #[test]
    fn arity_checks() {
        let f = SymbolSpec::parse("h2 * ind(u > 1)").unwrap();
        assert!(f.check_arity(2, true).is_ok());
        assert!(matches!(f.check_arity(1, true), Err(Error::Arity(_))));
        assert!(matches!(f.check_arity(2, false), Err(Error::Arity(_))));
        assert!(f.eval_at(&[1.0]).is_err());
    }

    #[test]
    fn eval_errors() {
        let e = |s: &str, h: &[f64]| SymbolSpec::parse(s).unwrap().eval_re(h, None);
        assert!(matches!(e("log(h1 - 2)", &[1.0]), Err(Error::Eval { pos: 0, .. })));
        assert!(matches!(e("sqrt(-h1)", &[1.0]), Err(Error::Eval { .. })));
        assert!(matches!(e("1/(h1 - 1)", &[1.0]), Err(Error::Eval { .. })));
        assert!(matches!(e("h1^(-1)", &[0.0]), Err(Error::Eval { .. })));
        assert!(matches!(e("exp(h1)", &[1000.0]), Err(Error::Eval { .. })));
        assert!((e("arccot(-1)", &[]).unwrap() - 0.75 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn bounds() {
        assert!(SymbolSpec::parse("1/(1+h1)").unwrap().with_bound(1.0).is_ok());
        assert!(matches!(
            SymbolSpec::parse("h1/(1+h1)").unwrap().with_bound(0.5),
            Err(Error::Bound(_))
        ));
        // unbounded in the tail
        assert!(SymbolSpec::parse("log(1+h1)").unwrap().with_bound(5.0).is_err());
        assert!(SymbolSpec::parse("atan(u)").unwrap().with_bound(1.6).is_ok());
        let (lo, hi) = SymbolSpec::parse("ind(u>0)").unwrap().sampled_range().unwrap();
        assert_eq!((lo, hi), (0.0, 1.0));
    }

    #[test]
    fn complex_symbols() {
        let f = SymbolSpec::parse_complex("cosh(1)", "u");
        assert!(f.is_err());
        let f = SymbolSpec::parse_complex("1/(1+u^2)", "u/(1+u^2)").unwrap();
        assert!(f.is_complex());
        let z = f.eval(&[], Some(1.0)).unwrap();
        assert_eq!((z.re, z.im), (0.5, 0.5));
    }
}
