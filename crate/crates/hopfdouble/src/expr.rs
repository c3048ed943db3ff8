//! Element expressions: parsing, evaluation in the various algebras, and printing.
//!
//! ```text
//! top     := expr ('|>' expr)?
//! expr    := ('-')? term (('+'|'-') term)*
//! term    := product ('#' product)?
//! product := factor (('*'|'/') factor)*
//! factor  := int | 'q' | 'w' | gen ('^' '-'? int)? | '(' expr ')'
//! gen     := E F k K z d l dz dd dl
//! ```

use std::fmt;

use hopfdouble_core::hopf::Algebra;
use hopfdouble_core::linalg::{Matrix, Vector};
use hopfdouble_core::{CycField, CycNumber};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0}")]
    Eval(String),
}

impl From<hopfdouble_core::Error> for ExprError {
    fn from(e: hopfdouble_core::Error) -> Self {
        ExprError::Eval(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    E,
    F,
    /// k ∈ B
    SmallK,
    /// κ ∈ B*
    Kappa,
    Z,
    Del,
    Lambda,
    Dz,
    Ddel,
    Dlambda,
}

impl Gen {
    fn from_ident(s: &str) -> Option<Gen> {
        Some(match s {
            "E" => Gen::E,
            "F" => Gen::F,
            "k" => Gen::SmallK,
            "K" => Gen::Kappa,
            "z" => Gen::Z,
            "d" => Gen::Del,
            "l" => Gen::Lambda,
            "dz" => Gen::Dz,
            "dd" => Gen::Ddel,
            "dl" => Gen::Dlambda,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::E => "E",
            Gen::F => "F",
            Gen::SmallK => "k",
            Gen::Kappa => "K",
            Gen::Z => "z",
            Gen::Del => "d",
            Gen::Lambda => "l",
            Gen::Dz => "dz",
            Gen::Ddel => "dd",
            Gen::Dlambda => "dl",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    /// q^e
    Q(i64),
    /// w^e, w = q^{1/2}
    W(i64),
    Gen(Gen, i64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Smash(Box<Expr>, Box<Expr>),
    Action(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn is_action(&self) -> bool {
        matches!(self, Expr::Action(..))
    }

    /// Every generator occurring in the expression.
    pub fn generators(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<Gen>) {
        match self {
            Expr::Gen(g, _) => {
                if !out.contains(g) {
                    out.push(*g)
                }
            }
            Expr::Neg(a) => a.collect(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Smash(a, b) | Expr::Action(a, b) => {
                a.collect(out);
                b.collect(out);
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(&'static str),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Int(s[st..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && b[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].into())));
        } else if s[i..].starts_with("|>") {
            out.push((i, Tok::Sym("|>")));
            i += 2;
        } else {
            let sym = match c {
                b'+' => "+",
                b'-' => "-",
                b'*' => "*",
                b'/' => "/",
                b'^' => "^",
                b'(' => "(",
                b')' => ")",
                b'#' => "#",
                _ => {
                    let ch = s[i..].chars().next().unwrap_or('?');
                    return Err(ExprError::Syntax { pos: i, msg: format!("unexpected character {:?}", ch) });
                }
            };
            out.push((i, Tok::Sym(sym)));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.at(), msg: msg.into() })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn top(&mut self) -> Result<Expr, ExprError> {
        let a = self.expr()?;
        let e = if self.eat("|>") {
            let b = self.expr()?;
            Expr::Action(Box::new(a), Box::new(b))
        } else {
            a
        };
        if self.pos < self.toks.len() {
            return self.err("unexpected trailing input");
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let neg = self.eat("-");
        let mut e = self.term()?;
        if neg {
            e = Expr::Neg(Box::new(e));
        }
        loop {
            if self.eat("+") {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat("-") {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let a = self.product()?;
        if self.eat("#") {
            let b = self.product()?;
            if matches!(self.peek(), Some(Tok::Sym("#"))) {
                return self.err("a smash product has exactly two factors");
            }
            return Ok(Expr::Smash(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut e = self.factor()?;
        loop {
            if self.eat("*") {
                e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
            } else if self.eat("/") {
                e = Expr::Div(Box::new(e), Box::new(self.factor()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn exponent(&mut self) -> Result<i64, ExprError> {
        if !self.eat("^") {
            return Ok(1);
        }
        let neg = self.eat("-");
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let v = i64::try_from(&n).or_else(|_| self.err("exponent too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                match s.as_str() {
                    "q" => Ok(Expr::Q(self.exponent()?)),
                    "w" => Ok(Expr::W(self.exponent()?)),
                    _ => match Gen::from_ident(&s) {
                        Some(g) => Ok(Expr::Gen(g, self.exponent()?)),
                        None => {
                            self.pos -= 1;
                            self.err(format!("unknown token {:?}", s))
                        }
                    },
                }
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(")") {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected {:?}", t)),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, ExprError> {
    let toks = tokenize(s)?;
    Parser { toks, pos: 0, end: s.len() }.top()
}

/// Where expressions are evaluated.
pub trait Target {
    type V: Clone;
    fn field(&self) -> &'static CycField;
    fn scalar(&self, c: CycNumber) -> Self::V;
    fn gen_pow(&self, g: Gen, e: i64) -> Result<Self::V, ExprError>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn scale(&self, a: &Self::V, c: &CycNumber) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    /// Some(c) when the value is c times the unit.
    fn as_scalar(&self, a: &Self::V) -> Option<CycNumber>;
    fn smash(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, ExprError> {
        Ok(self.mul(a, b))
    }
}

pub fn eval<T: Target>(t: &T, e: &Expr) -> Result<T::V, ExprError> {
    let f = t.field();
    Ok(match e {
        Expr::Int(n) => t.scalar(f.from_fraction_coeffs(&int_coeffs(f, n), &vec![BigInt::from(1); f.degree()])?),
        Expr::Q(k) => t.scalar(f.q_powi(*k)),
        Expr::W(k) => t.scalar(f.zeta_pow(*k)),
        Expr::Gen(g, k) => t.gen_pow(*g, *k)?,
        Expr::Neg(a) => t.scale(&eval(t, a)?, &-f.one()),
        Expr::Add(a, b) => t.add(&eval(t, a)?, &eval(t, b)?),
        Expr::Sub(a, b) => t.add(&eval(t, a)?, &t.scale(&eval(t, b)?, &-f.one())),
        Expr::Mul(a, b) => t.mul(&eval(t, a)?, &eval(t, b)?),
        Expr::Div(a, b) => {
            let d = t
                .as_scalar(&eval(t, b)?)
                .ok_or_else(|| ExprError::Eval("division by a non-scalar".into()))?;
            let inv = d.inv().map_err(|_| ExprError::Eval("division by zero".into()))?;
            t.scale(&eval(t, a)?, &inv)
        }
        Expr::Smash(a, b) => t.smash(&eval(t, a)?, &eval(t, b)?)?,
        Expr::Action(..) => return Err(ExprError::Eval("an action is not an element".into())),
    })
}

fn int_coeffs(f: &'static CycField, n: &BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); f.degree()];
    v[0] = n.clone();
    v
}

/// Evaluation in a finite-dimensional algebra with named generators.
pub struct AlgebraTarget<'a> {
    pub alg: &'a dyn Algebra,
    /// The value of each allowed generator.
    pub gens: Vec<(Gen, Vector)>,
    /// g^order = 1 for invertible generators, used for negative exponents.
    pub orders: Vec<(Gen, u32)>,
}

impl AlgebraTarget<'_> {
    fn lookup(&self, g: Gen) -> Result<&Vector, ExprError> {
        self.gens
            .iter()
            .find(|(h, _)| *h == g)
            .map(|(_, v)| v)
            .ok_or_else(|| ExprError::Eval(format!("generator {} is not available here", g.name())))
    }
}

impl Target for AlgebraTarget<'_> {
    type V = Vector;

    fn field(&self) -> &'static CycField {
        self.alg.field()
    }

    fn scalar(&self, c: CycNumber) -> Vector {
        self.alg.unit().scale(&c)
    }

    fn gen_pow(&self, g: Gen, e: i64) -> Result<Vector, ExprError> {
        let x = self.lookup(g)?;
        let e = if e < 0 {
            let ord = self
                .orders
                .iter()
                .find(|(h, _)| *h == g)
                .map(|(_, o)| *o as i64)
                .ok_or_else(|| ExprError::Eval(format!("{} is not invertible", g.name())))?;
            e.rem_euclid(ord)
        } else {
            e
        };
        Ok(self.alg.pow(x, e as u32))
    }

    fn add(&self, a: &Vector, b: &Vector) -> Vector {
        a.add(b)
    }

    fn scale(&self, a: &Vector, c: &CycNumber) -> Vector {
        a.scale(c)
    }

    fn mul(&self, a: &Vector, b: &Vector) -> Vector {
        self.alg.mul(a, b)
    }

    fn as_scalar(&self, a: &Vector) -> Option<CycNumber> {
        let u = self.alg.unit();
        let (i, c) = u.first()?;
        if a.is_zero() {
            return Some(self.field().zero());
        }
        let s = a.get(i)?.checked_div(c).ok()?;
        (u.scale(&s) == *a).then_some(s)
    }
}

/// Evaluation of acting elements as operators: E, F and even powers of k and κ.
pub struct OperatorTarget {
    pub field: &'static CycField,
    pub e: Matrix,
    pub f: Matrix,
    /// K = k²
    pub k: Matrix,
    pub k_inv: Matrix,
}

impl Target for OperatorTarget {
    type V = Matrix;

    fn field(&self) -> &'static CycField {
        self.field
    }

    fn scalar(&self, c: CycNumber) -> Matrix {
        Matrix::identity(self.e.ncols(), self.field).scale(&c)
    }

    fn gen_pow(&self, g: Gen, e: i64) -> Result<Matrix, ExprError> {
        let (m, e) = match g {
            Gen::E | Gen::F if e >= 0 => (if g == Gen::E { &self.e } else { &self.f }, e),
            Gen::SmallK | Gen::Kappa if e % 2 == 0 => {
                // κ² acts as K^{-1}
                let s = if g == Gen::SmallK { e / 2 } else { -e / 2 };
                if s >= 0 {
                    (&self.k, s)
                } else {
                    (&self.k_inv, -s)
                }
            }
            _ => {
                return Err(ExprError::Eval(format!(
                    "{}^{} does not act here; use E, F and even powers of k or K",
                    g.name(),
                    e
                )))
            }
        };
        Ok(m.pow(e as u32, self.field))
    }

    fn add(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.add(b)
    }

    fn scale(&self, a: &Matrix, c: &CycNumber) -> Matrix {
        a.scale(c)
    }

    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.mul(b)
    }

    fn as_scalar(&self, a: &Matrix) -> Option<CycNumber> {
        let n = a.ncols();
        if a.is_zero() {
            return Some(self.field.zero());
        }
        let c = a.entry(0, 0)?.clone();
        (Matrix::identity(n, self.field).scale(&c) == *a).then_some(c)
    }
}

/// A printed element: `(c)*label + ...`, with unit coefficients omitted.
pub struct Printed<'a> {
    pub v: &'a Vector,
    pub label: &'a dyn Fn(usize) -> String,
}

impl fmt::Display for Printed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            return f.write_str("0");
        }
        for (n, (i, c)) in self.v.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{}", (self.label)(i))?;
            } else {
                write!(f, "({})*{}", c, (self.label)(i))?;
            }
        }
        Ok(())
    }
}

pub fn print_with(v: &Vector, label: &dyn Fn(usize) -> String) -> String {
    Printed { v, label }.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        assert!(matches!(parse_expr("E*k^2").unwrap(), Expr::Mul(..)));
        assert!(matches!(parse_expr("(q - q^-1)*F # 1").unwrap(), Expr::Smash(..)));
        let a = parse_expr("k |> F*K^3 # E*k").unwrap();
        assert!(a.is_action());
        match parse_expr("E*x") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{:?}", other),
        }
        assert!(parse_expr("E^").is_err());
        assert!(parse_expr("(E").is_err());
        assert!(parse_expr("E # F # k").is_err());
        assert!(parse_expr("E ! F").is_err());
        assert_eq!(
            parse_expr("dz*dd").unwrap(),
            Expr::Mul(Box::new(Expr::Gen(Gen::Dz, 1)), Box::new(Expr::Gen(Gen::Ddel, 1)))
        );
    }
}
