//! Scalar expressions in the chart coordinates `x1 .. xn`.
//!
//! Grammar (tightest first): integer powers `a^k`, unary minus, `* /`, `+ -`.
//! Functions: `sin cos exp log sqrt`. Derivatives are symbolic with light
//! simplification, and the canonical printer output parses back to the same tree.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

/// Position-carrying parse failure.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// 1-based character column where the problem was detected; input that ends
    /// early reports the column just past the last character.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
}

/// Evaluation failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{op} is undefined at point {point:?}")]
    Domain { op: String, point: Vec<f64> },
    #[error("point has {found} coordinates but the expression needs {needed}")]
    PointDimension { needed: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    /// Applies the function, `None` outside its domain.
    pub fn apply(self, x: f64) -> Option<f64> {
        let y = match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
            Func::Log if x > 0.0 => x.ln(),
            Func::Sqrt if x >= 0.0 => x.sqrt(),
            _ => return None,
        };
        y.is_finite().then_some(y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    /// 0-based coordinate index; printed as `x{i+1}`.
    Var(usize),
    Neg(Expr),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, i32),
    Call(Func, Expr),
}

/// Shared expression tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr(Rc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    fn raw(node: Node) -> Expr {
        Expr(Rc::new(node))
    }

    pub fn num(c: f64) -> Expr {
        Expr::raw(Node::Num(c))
    }

    pub fn var(i: usize) -> Expr {
        Expr::raw(Node::Var(i))
    }

    pub fn zero() -> Expr {
        Expr::num(0.0)
    }

    pub fn one() -> Expr {
        Expr::num(1.0)
    }

    pub fn as_num(&self) -> Option<f64> {
        match *self.0 {
            Node::Num(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_num() == Some(0.0)
    }

    pub fn neg(&self) -> Expr {
        match self.node() {
            Node::Num(c) => Expr::num(-c),
            Node::Neg(a) => a.clone(),
            _ => Expr::raw(Node::Neg(self.clone())),
        }
    }

    pub fn add(&self, b: &Expr) -> Expr {
        match (self.as_num(), b.as_num()) {
            (Some(x), Some(y)) => Expr::num(x + y),
            (Some(x), _) if x == 0.0 => b.clone(),
            (_, Some(y)) if y == 0.0 => self.clone(),
            _ => Expr::raw(Node::Add(self.clone(), b.clone())),
        }
    }

    pub fn sub(&self, b: &Expr) -> Expr {
        match (self.as_num(), b.as_num()) {
            (Some(x), Some(y)) => Expr::num(x - y),
            (Some(x), _) if x == 0.0 => b.neg(),
            (_, Some(y)) if y == 0.0 => self.clone(),
            _ if Rc::ptr_eq(&self.0, &b.0) => Expr::zero(),
            _ => Expr::raw(Node::Sub(self.clone(), b.clone())),
        }
    }

    pub fn mul(&self, b: &Expr) -> Expr {
        match (self.as_num(), b.as_num()) {
            (Some(x), Some(y)) => Expr::num(x * y),
            (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::zero(),
            (Some(x), _) if x == 1.0 => b.clone(),
            (_, Some(y)) if y == 1.0 => self.clone(),
            (Some(x), _) if x == -1.0 => b.neg(),
            (_, Some(y)) if y == -1.0 => self.neg(),
            _ => Expr::raw(Node::Mul(self.clone(), b.clone())),
        }
    }

    pub fn div(&self, b: &Expr) -> Expr {
        match (self.as_num(), b.as_num()) {
            (Some(x), Some(y)) if y != 0.0 => Expr::num(x / y),
            (Some(x), _) if x == 0.0 => Expr::zero(),
            (_, Some(y)) if y == 1.0 => self.clone(),
            _ => Expr::raw(Node::Div(self.clone(), b.clone())),
        }
    }

    pub fn powi(&self, k: i32) -> Expr {
        match (self.as_num(), k) {
            (_, 0) => Expr::one(),
            (_, 1) => self.clone(),
            (Some(x), _) if (x != 0.0 || k > 0) && x.powi(k).is_finite() => Expr::num(x.powi(k)),
            _ => Expr::raw(Node::Pow(self.clone(), k)),
        }
    }

    pub fn call(f: Func, a: &Expr) -> Expr {
        match a.as_num().and_then(|x| f.apply(x)) {
            Some(y) => Expr::num(y),
            None => Expr::raw(Node::Call(f, a.clone())),
        }
    }

    pub fn sin(&self) -> Expr {
        Expr::call(Func::Sin, self)
    }

    pub fn cos(&self) -> Expr {
        Expr::call(Func::Cos, self)
    }

    pub fn exp(&self) -> Expr {
        Expr::call(Func::Exp, self)
    }

    pub fn ln(&self) -> Expr {
        Expr::call(Func::Log, self)
    }

    pub fn sqrt(&self) -> Expr {
        Expr::call(Func::Sqrt, self)
    }

    /// Parses `src` with variables `x1 .. x{dim}`.
    pub fn parse(src: &str, dim: usize) -> Result<Expr, ParseError> {
        let mut p = Parser { src, pos: 0, dim };
        let parsed = p.expr().and_then(|e| {
            p.skip_ws();
            if p.pos < src.len() {
                Err(p.error(format!("unexpected `{}`", p.rest_char())))
            } else {
                Ok(e)
            }
        });
        parsed.map_err(|mut err| {
            err.offset = src[..err.offset].chars().count() + 1;
            err
        })
    }

    /// Largest variable index used plus one.
    pub fn arity(&self) -> usize {
        match self.node() {
            Node::Num(_) => 0,
            Node::Var(i) => i + 1,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.arity(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.arity().max(b.arity())
            }
        }
    }

    /// Evaluates at `point`; domain violations report the point.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let needed = self.arity();
        if point.len() < needed {
            return Err(EvalError::PointDimension {
                needed,
                found: point.len(),
            });
        }
        self.eval_unchecked(point)
    }

    fn eval_unchecked(&self, point: &[f64]) -> Result<f64, EvalError> {
        let domain = |op: &str| EvalError::Domain {
            op: op.to_string(),
            point: point.to_vec(),
        };
        let v = match self.node() {
            Node::Num(c) => *c,
            Node::Var(i) => point[*i],
            Node::Neg(a) => -a.eval_unchecked(point)?,
            Node::Add(a, b) => a.eval_unchecked(point)? + b.eval_unchecked(point)?,
            Node::Sub(a, b) => a.eval_unchecked(point)? - b.eval_unchecked(point)?,
            Node::Mul(a, b) => a.eval_unchecked(point)? * b.eval_unchecked(point)?,
            Node::Div(a, b) => {
                let d = b.eval_unchecked(point)?;
                if d == 0.0 {
                    return Err(domain("division by zero"));
                }
                a.eval_unchecked(point)? / d
            }
            Node::Pow(a, k) => {
                let x = a.eval_unchecked(point)?;
                if x == 0.0 && *k < 0 {
                    return Err(domain("negative power of zero"));
                }
                x.powi(*k)
            }
            Node::Call(f, a) => {
                let x = a.eval_unchecked(point)?;
                f.apply(x).ok_or_else(|| domain(f.name()))?
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain("overflow"))
        }
    }

    /// Symbolic partial derivative with respect to `x{k+1}`.
    pub fn diff(&self, k: usize) -> Expr {
        match self.node() {
            Node::Num(_) => Expr::zero(),
            Node::Var(i) => Expr::num(if *i == k { 1.0 } else { 0.0 }),
            Node::Neg(a) => a.diff(k).neg(),
            Node::Add(a, b) => a.diff(k).add(&b.diff(k)),
            Node::Sub(a, b) => a.diff(k).sub(&b.diff(k)),
            Node::Mul(a, b) => a.diff(k).mul(b).add(&a.mul(&b.diff(k))),
            Node::Div(a, b) => {
                let (da, db) = (a.diff(k), b.diff(k));
                if db.is_zero() {
                    da.div(b)
                } else {
                    da.mul(b).sub(&a.mul(&db)).div(&b.powi(2))
                }
            }
            Node::Pow(a, n) => Expr::num(*n as f64).mul(&a.powi(n - 1)).mul(&a.diff(k)),
            Node::Call(f, a) => {
                let da = a.diff(k);
                if da.is_zero() {
                    return Expr::zero();
                }
                let outer = match f {
                    Func::Sin => a.cos(),
                    Func::Cos => a.sin().neg(),
                    Func::Exp => self.clone(),
                    Func::Log => return da.div(a),
                    Func::Sqrt => return da.div(&Expr::num(2.0).mul(self)),
                };
                outer.mul(&da)
            }
        }
    }

    /// Replaces each variable `x{i+1}` by `subs[i]`.
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        match self.node() {
            Node::Num(_) => self.clone(),
            Node::Var(i) => subs[*i].clone(),
            Node::Neg(a) => a.substitute(subs).neg(),
            Node::Add(a, b) => a.substitute(subs).add(&b.substitute(subs)),
            Node::Sub(a, b) => a.substitute(subs).sub(&b.substitute(subs)),
            Node::Mul(a, b) => a.substitute(subs).mul(&b.substitute(subs)),
            Node::Div(a, b) => a.substitute(subs).div(&b.substitute(subs)),
            Node::Pow(a, n) => a.substitute(subs).powi(*n),
            Node::Call(f, a) => Expr::call(*f, &a.substitute(subs)),
        }
    }

    /// Number of nodes in the tree, counting shared subtrees once per use.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Num(_) | Node::Var(_) => 1,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => 1 + a.size(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Num(c) if c.is_sign_negative() => write!(f, "(-{})", -c),
            Node::Num(c) => write!(f, "{c}"),
            Node::Var(i) => write!(f, "x{}", i + 1),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Div(a, b) => write!(f, "({a} / {b})"),
            Node::Pow(a, n) => match a.node() {
                Node::Num(c) if c.is_sign_negative() => write!(f, "{a}^{n}"),
                Node::Num(_) | Node::Var(_) | Node::Call(..) => write!(f, "{a}^{n}"),
                _ => write!(f, "({a})^{n}"),
            },
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn error(&self, msg: String) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Syntax(msg),
            offset: self.pos,
        }
    }

    fn rest_char(&self) -> char {
        self.src[self.pos..].chars().next().unwrap_or(' ')
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else if self.peek().is_none() {
            Err(self.error(format!("expected `{c}` but input ended")))
        } else {
            Err(self.error(format!("expected `{c}`, found `{}`", self.rest_char())))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::raw(Node::Add(lhs, self.term()?));
            } else if self.eat('-') {
                lhs = Expr::raw(Node::Sub(lhs, self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::raw(Node::Mul(lhs, self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::raw(Node::Div(lhs, self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(match inner.node() {
                Node::Num(c) => Expr::num(-c),
                _ => Expr::raw(Node::Neg(inner)),
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while self.eat('^') {
            let k = self.exponent()?;
            base = Expr::raw(Node::Pow(base, k));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let paren = self.eat('(');
        let negative = self.eat('-');
        self.skip_ws();
        let start = self.pos;
        let digits = self.src[start..]
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .count();
        if digits == 0 {
            return Err(self.error("exponent must be an integer literal".into()));
        }
        self.pos += digits;
        if matches!(self.src[self.pos..].chars().next(), Some('.' | 'e' | 'E')) {
            return Err(self.error("exponent must be an integer literal".into()));
        }
        let k: i32 = self.src[start..self.pos].parse().map_err(|_| ParseError {
            kind: ParseErrorKind::Syntax("exponent too large".into()),
            offset: start,
        })?;
        if paren {
            self.expect(')')?;
        }
        Ok(if negative { -k } else { k })
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input".into())),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = start;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = &self.src[start..i];
        let value: f64 = text.parse().map_err(|_| ParseError {
            kind: ParseErrorKind::Syntax(format!("malformed number `{text}`")),
            offset: start,
        })?;
        if !value.is_finite() {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("number `{text}` is out of range")),
                offset: start,
            });
        }
        self.pos = i;
        Ok(Expr::num(value))
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let len = self.src[start..]
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
            .count();
        let name = &self.src[start..start + len];
        self.pos += len;
        if self.peek() == Some('(') {
            let f = Func::from_name(name).ok_or(ParseError {
                kind: ParseErrorKind::UnknownFunction(name.to_string()),
                offset: start,
            })?;
            self.pos += 1;
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(Expr::raw(Node::Call(f, arg)));
        }
        let index = name
            .strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&i| i >= 1 && i <= self.dim && !name[1..].starts_with('0'));
        match index {
            Some(i) => Ok(Expr::var(i - 1)),
            None => Err(ParseError {
                kind: ParseErrorKind::UnknownVariable(name.to_string()),
                offset: start,
            }),
        }
    }
}
