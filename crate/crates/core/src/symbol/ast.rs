use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// A variable of a symbol: `h1, h2, ...` (1-based) or `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    H(usize),
    U,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::H(j) => write!(f, "h{j}"),
            Var::U => f.write_str("u"),
        }
    }
}

/// Byte range in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Atan,
    Arccot,
    Abs,
    Min,
    Max,
}

impl Func {
    pub(crate) fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "atan" => Func::Atan,
            "arccot" => Func::Arccot,
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Atan => "atan",
            Func::Arccot => "arccot",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    /// `(min, max)` argument count.
    pub(crate) fn arity(self) -> (usize, usize) {
        match self {
            Func::Min | Func::Max => (2, usize::MAX),
            _ => (1, 1),
        }
    }
}

/// A comparison `lhs op rhs`, true or false.
#[derive(Debug, Clone, PartialEq)]
pub struct Cond {
    pub op: CmpOp,
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Num(f64),
    Pi,
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Vec<Expr>),
    Ind(Box<Cond>),
    /// `(condition, value)` arms tried in order, then the fallback.
    Piecewise(Vec<(Cond, Expr)>, Box<Expr>),
}

/// Expression node. Equality compares structure only, not spans.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Self { kind, span }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Eval {
            pos: self.span.start,
            msg: msg.into(),
        }
    }

    /// Calls `f` on every variable occurrence.
    pub fn for_each_var(&self, f: &mut impl FnMut(Var)) {
        match &self.kind {
            ExprKind::Num(_) | ExprKind::Pi => {}
            ExprKind::Var(v) => f(*v),
            ExprKind::Neg(a) | ExprKind::Pow(a, _) => a.for_each_var(f),
            ExprKind::Bin(_, a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
            ExprKind::Call(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
            ExprKind::Ind(c) => c.for_each_var(f),
            ExprKind::Piecewise(arms, other) => {
                for (c, e) in arms {
                    c.for_each_var(f);
                    e.for_each_var(f);
                }
                other.for_each_var(f);
            }
        }
    }

    /// Calls `f` on every comparison and on every `min`/`max` call, the places
    /// where the value may jump or kink.
    pub(crate) fn for_each_split(&self, f: &mut impl FnMut(&Expr, &Expr)) {
        match &self.kind {
            ExprKind::Num(_) | ExprKind::Pi | ExprKind::Var(_) => {}
            ExprKind::Neg(a) | ExprKind::Pow(a, _) => a.for_each_split(f),
            ExprKind::Bin(_, a, b) => {
                a.for_each_split(f);
                b.for_each_split(f);
            }
            ExprKind::Call(func, args) => {
                if matches!(func, Func::Min | Func::Max) {
                    for i in 0..args.len() {
                        for j in i + 1..args.len() {
                            f(&args[i], &args[j]);
                        }
                    }
                }
                if *func == Func::Abs {
                    let zero = Expr::new(ExprKind::Num(0.0), Span::default());
                    f(&args[0], &zero);
                }
                args.iter().for_each(|a| a.for_each_split(f));
            }
            ExprKind::Ind(c) => c.for_each_split(f),
            ExprKind::Piecewise(arms, other) => {
                for (c, e) in arms {
                    c.for_each_split(f);
                    e.for_each_split(f);
                }
                other.for_each_split(f);
            }
        }
    }

    /// `Some((var, a, b))` if the expression is `a * var + b` with constant
    /// `a`, `b` (`var = None` for a constant).
    pub(crate) fn affine(&self) -> Option<(Option<Var>, f64, f64)> {
        let merge = |x: Option<Var>, y: Option<Var>| match (x, y) {
            (Some(a), Some(b)) if a != b => Err(()),
            (a, b) => Ok(a.or(b)),
        };
        match &self.kind {
            ExprKind::Num(v) => Some((None, 0.0, *v)),
            ExprKind::Pi => Some((None, 0.0, PI)),
            ExprKind::Var(v) => Some((Some(*v), 1.0, 0.0)),
            ExprKind::Neg(a) => a.affine().map(|(v, p, q)| (v, -p, -q)),
            ExprKind::Bin(op, a, b) => {
                let (va, pa, qa) = a.affine()?;
                let (vb, pb, qb) = b.affine()?;
                match op {
                    BinOp::Add => Some((merge(va, vb).ok()?, pa + pb, qa + qb)),
                    BinOp::Sub => Some((merge(va, vb).ok()?, pa - pb, qa - qb)),
                    BinOp::Mul if va.is_none() => Some((vb, qa * pb, qa * qb)),
                    BinOp::Mul if vb.is_none() => Some((va, pa * qb, qa * qb)),
                    BinOp::Div if vb.is_none() && qb != 0.0 => Some((va, pa / qb, qa / qb)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Evaluates at `(h, u)`; `h[j-1]` is the value of `hj`.
    pub fn eval(&self, h: &[f64], u: Option<f64>) -> Result<f64> {
        let v = self.eval_raw(h, u)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.err("non-finite value"))
        }
    }

    fn eval_raw(&self, h: &[f64], u: Option<f64>) -> Result<f64> {
        Ok(match &self.kind {
            ExprKind::Num(v) => *v,
            ExprKind::Pi => PI,
            ExprKind::Var(Var::H(j)) => *h.get(j - 1).ok_or_else(|| self.err(format!("h{j} is not bound")))?,
            ExprKind::Var(Var::U) => u.ok_or_else(|| self.err("u is not bound"))?,
            ExprKind::Neg(a) => -a.eval(h, u)?,
            ExprKind::Bin(op, a, b) => {
                let x = a.eval(h, u)?;
                let y = b.eval(h, u)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(self.err("division by zero"));
                        }
                        x / y
                    }
                }
            }
            ExprKind::Pow(a, k) => {
                let x = a.eval(h, u)?;
                if x == 0.0 && *k < 0 {
                    return Err(self.err("division by zero"));
                }
                x.powi(*k)
            }
            ExprKind::Call(func, args) => {
                let x = args[0].eval(h, u)?;
                match func {
                    Func::Exp => x.exp(),
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(self.err(format!("log of non-positive value {x}")));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(self.err(format!("sqrt of negative value {x}")));
                        }
                        x.sqrt()
                    }
                    Func::Atan => x.atan(),
                    Func::Arccot => 1f64.atan2(x),
                    Func::Abs => x.abs(),
                    Func::Min | Func::Max => {
                        let mut acc = x;
                        for a in &args[1..] {
                            let y = a.eval(h, u)?;
                            acc = if *func == Func::Min { acc.min(y) } else { acc.max(y) };
                        }
                        acc
                    }
                }
            }
            ExprKind::Ind(c) => {
                if c.eval(h, u)? {
                    1.0
                } else {
                    0.0
                }
            }
            ExprKind::Piecewise(arms, other) => {
                for (c, e) in arms {
                    if c.eval(h, u)? {
                        return e.eval(h, u);
                    }
                }
                other.eval(h, u)?
            }
        })
    }
}

impl Cond {
    pub fn eval(&self, h: &[f64], u: Option<f64>) -> Result<bool> {
        let a = self.lhs.eval(h, u)?;
        let b = self.rhs.eval(h, u)?;
        Ok(match self.op {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        })
    }

    fn for_each_var(&self, f: &mut impl FnMut(Var)) {
        self.lhs.for_each_var(f);
        self.rhs.for_each_var(f);
    }

    fn for_each_split(&self, f: &mut impl FnMut(&Expr, &Expr)) {
        f(&self.lhs, &self.rhs);
        self.lhs.for_each_split(f);
        self.rhs.for_each_split(f);
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        })
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op, self.rhs)
    }
}

/// Canonical form: every compound subexpression is parenthesised.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(v) => write!(f, "{v:?}"),
            ExprKind::Pi => f.write_str("pi"),
            ExprKind::Var(v) => write!(f, "{v}"),
            ExprKind::Neg(a) => write!(f, "(-{a})"),
            ExprKind::Bin(op, a, b) => {
                let op = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {op} {b})")
            }
            ExprKind::Pow(a, k) if *k < 0 => write!(f, "({a} ^ ({k}))"),
            ExprKind::Pow(a, k) => write!(f, "({a} ^ {k})"),
            ExprKind::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            ExprKind::Ind(c) => write!(f, "ind({c})"),
            ExprKind::Piecewise(arms, other) => {
                f.write_str("piecewise(")?;
                for (c, e) in arms {
                    write!(f, "{c}, {e}, ")?;
                }
                write!(f, "{other})")
            }
        }
    }
}
