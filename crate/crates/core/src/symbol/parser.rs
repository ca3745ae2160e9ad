//! Recursive-descent parser.
//!
//! ```text
//! symbol  = sum EOF
//! cond    = sum ("<" | "<=" | ">" | ">=") sum
//! sum     = product { ("+" | "-") product }
//! product = unary { ("*" | "/") unary }
//! unary   = "-" unary | power
//! power   = atom [ "^" int ]
//! int     = ["-"] NUMBER | "(" ["-"] NUMBER ")"
//! atom    = NUMBER | "pi" | "u" | "h" DIGITS
//!         | func "(" sum { "," sum } ")"
//!         | ("ind" | "indicator") "(" cond ")"
//!         | "piecewise" "(" cond "," sum { "," cond "," sum } "," sum ")"
//!         | "(" sum ")"
//! ```

use super::ast::{BinOp, CmpOp, Cond, Expr, ExprKind, Func, Span, Var};
use super::lexer::{lex, Tok, Token};
use crate::error::{Error, Result};

const MAX_POWER: i32 = 64;

pub(crate) fn parse_expr(src: &str) -> Result<Expr> {
    if src.trim().is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser { toks: lex(src)?, i: 0 };
    let e = p.sum()?;
    p.expect(Tok::End, "end of input")?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if t.tok != Tok::End {
            self.i += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.peek().start,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            self.fail(format!("expected {what}, found {}", describe(&self.peek().tok)))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Minus {
            let start = self.bump().start;
            let a = self.unary()?;
            let span = Span { start, end: a.span.end };
            return Ok(Expr::new(ExprKind::Neg(Box::new(a)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (k, end) = self.int_exponent()?;
        let span = Span {
            start: base.span.start,
            end,
        };
        Ok(Expr::new(ExprKind::Pow(Box::new(base), k), span))
    }

    fn int_exponent(&mut self) -> Result<(i32, usize)> {
        let paren = self.peek().tok == Tok::LParen;
        if paren {
            self.bump();
        }
        let neg = self.peek().tok == Tok::Minus;
        if neg {
            self.bump();
        }
        let t = self.peek().clone();
        let Tok::Num(v) = t.tok else {
            return self.fail("exponent must be an integer literal");
        };
        if v.fract() != 0.0 || v > MAX_POWER as f64 {
            return self.fail(format!("exponent must be an integer of magnitude <= {MAX_POWER}"));
        }
        self.bump();
        let mut end = t.end;
        if paren {
            end = self.expect(Tok::RParen, "`)`")?.end;
        }
        let k = v as i32;
        Ok((if neg { -k } else { k }, end))
    }

    fn cond(&mut self) -> Result<Cond> {
        let lhs = self.sum()?;
        self.cond_tail(lhs)
    }

    fn cond_tail(&mut self, lhs: Expr) -> Result<Cond> {
        let op = match cmp_op(&self.peek().tok) {
            Some(op) => op,
            None => return self.fail("expected a comparison operator"),
        };
        self.bump();
        let rhs = self.sum()?;
        Ok(Cond { op, lhs, rhs })
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        let span = Span {
            start: t.start,
            end: t.end,
        };
        match t.tok {
            Tok::Num(v) => Ok(Expr::new(ExprKind::Num(v), span)),
            Tok::LParen => {
                let mut e = self.sum()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                e.span = Span {
                    start: t.start,
                    end: close.end,
                };
                Ok(e)
            }
            Tok::Ident(name) => self.ident(&name, span),
            other => Err(Error::Syntax {
                pos: t.start,
                msg: format!("unexpected {}", describe(&other)),
            }),
        }
    }

    fn ident(&mut self, name: &str, span: Span) -> Result<Expr> {
        let called = self.peek().tok == Tok::LParen;
        if !called {
            let kind = match name {
                "pi" => ExprKind::Pi,
                "u" => ExprKind::Var(Var::U),
                _ => match h_index(name) {
                    Some(j) => ExprKind::Var(Var::H(j)),
                    None => {
                        return Err(Error::Syntax {
                            pos: span.start,
                            msg: format!("unknown identifier `{name}`"),
                        })
                    }
                },
            };
            return Ok(Expr::new(kind, span));
        }
        self.bump();
        let kind = match name {
            "ind" | "indicator" => ExprKind::Ind(Box::new(self.cond()?)),
            "piecewise" => self.piecewise()?,
            _ => {
                let Some(func) = Func::from_name(name) else {
                    return Err(Error::Syntax {
                        pos: span.start,
                        msg: format!("unknown function `{name}`"),
                    });
                };
                let mut args = vec![self.sum()?];
                while self.peek().tok == Tok::Comma {
                    self.bump();
                    args.push(self.sum()?);
                }
                let (lo, hi) = func.arity();
                if args.len() < lo || args.len() > hi {
                    return Err(Error::Syntax {
                        pos: span.start,
                        msg: format!("`{name}` takes {} argument(s), got {}", arity_text(lo, hi), args.len()),
                    });
                }
                ExprKind::Call(func, args)
            }
        };
        let close = self.expect(Tok::RParen, "`)`")?;
        Ok(Expr::new(
            kind,
            Span {
                start: span.start,
                end: close.end,
            },
        ))
    }

    fn piecewise(&mut self) -> Result<ExprKind> {
        let mut arms = Vec::new();
        loop {
            let e = self.sum()?;
            if cmp_op(&self.peek().tok).is_none() {
                if arms.is_empty() {
                    return self.fail("piecewise needs at least one `condition, value` pair");
                }
                return Ok(ExprKind::Piecewise(arms, Box::new(e)));
            }
            let c = self.cond_tail(e)?;
            self.expect(Tok::Comma, "`,`")?;
            let v = self.sum()?;
            arms.push((c, v));
            self.expect(Tok::Comma, "`,` followed by another arm or the fallback value")?;
        }
    }
}

fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
    let span = Span {
        start: a.span.start,
        end: b.span.end,
    };
    Expr::new(ExprKind::Bin(op, Box::new(a), Box::new(b)), span)
}

fn cmp_op(t: &Tok) -> Option<CmpOp> {
    Some(match t {
        Tok::Lt => CmpOp::Lt,
        Tok::Le => CmpOp::Le,
        Tok::Gt => CmpOp::Gt,
        Tok::Ge => CmpOp::Ge,
        _ => return None,
    })
}

fn h_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('h')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn arity_text(lo: usize, hi: usize) -> String {
    if lo == hi {
        lo.to_string()
    } else {
        format!("at least {lo}")
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::End => "end of input".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Lt => "`<`".into(),
        Tok::Le => "`<=`".into(),
        Tok::Gt => "`>`".into(),
        Tok::Ge => "`>=`".into(),
    }
}
