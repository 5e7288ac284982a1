//! Small arithmetic expression language used by problem configuration files.
//!
//! Grammar: `+ - * / ^`, unary minus, parentheses, numeric literals, the
//! constant `pi`, the functions `exp ln gamma sqrt abs`, and the variables
//! `t x theta u`. Which variables an expression may use depends on where it
//! appears (sources see `t, x`; densities see `theta`; nonlinearities see `u`).

use std::fmt;

use crate::error::{Error, Result};
use crate::special::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    T,
    X,
    Theta,
    U,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::X => "x",
            Var::Theta => "theta",
            Var::U => "u",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Exp,
    Ln,
    Gamma,
    Sqrt,
    Abs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// Variable values for evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Vars {
    pub t: f64,
    pub x: f64,
    pub theta: f64,
    pub u: f64,
}

/// A parsed expression.
#[derive(Clone, PartialEq)]
pub struct Expr {
    source: String,
    root: Node,
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({:?})", self.source)
    }
}

impl Expr {
    /// Parses `text`, accepting only the variables in `allowed`.
    pub fn parse(text: &str, allowed: &[Var]) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            allowed,
            text,
        };
        let root = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(Self {
            source: text.to_string(),
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, vars: &Vars) -> f64 {
        eval(&self.root, vars)
    }

    /// The value if the expression has no variables.
    pub fn constant(&self) -> Option<f64> {
        fn has_var(n: &Node) -> bool {
            match n {
                Node::Num(_) => false,
                Node::Var(_) => true,
                Node::Neg(a) | Node::Call(_, a) => has_var(a),
                Node::Bin(_, a, b) => has_var(a) || has_var(b),
            }
        }
        (!has_var(&self.root)).then(|| self.eval(&Vars::default()))
    }
}

fn eval(node: &Node, v: &Vars) -> f64 {
    match node {
        Node::Num(c) => *c,
        Node::Var(Var::T) => v.t,
        Node::Var(Var::X) => v.x,
        Node::Var(Var::Theta) => v.theta,
        Node::Var(Var::U) => v.u,
        Node::Neg(a) => -eval(a, v),
        Node::Bin(op, a, b) => {
            let (a, b) = (eval(a, v), eval(b, v));
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                BinOp::Pow => {
                    if b.fract() == 0.0 && b.abs() <= 64.0 {
                        a.powi(b as i32)
                    } else {
                        a.powf(b)
                    }
                }
            }
        }
        Node::Call(f, a) => {
            let a = eval(a, v);
            match f {
                Func::Exp => a.exp(),
                Func::Ln => a.ln(),
                Func::Gamma => gamma(a).unwrap_or(f64::NAN),
                Func::Sqrt => a.sqrt(),
                Func::Abs => a.abs(),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' | '-' | '*' | '/' | '^' => {
                out.push((i, Token::Op(c)));
                i += 1;
            }
            '(' => {
                out.push((i, Token::Open));
                i += 1;
            }
            ')' => {
                out.push((i, Token::Close));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lit = &text[start..i];
                let value = lit.parse::<f64>().map_err(|_| {
                    Error::Expr(format!(
                        "invalid number `{lit}` at offset {start} in `{text}`"
                    ))
                })?;
                out.push((start, Token::Num(value)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(Error::Expr(format!(
                    "unexpected character `{c}` at offset {i} in `{text}`"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    allowed: &'a [Var],
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let at = self
            .tokens
            .get(self.pos)
            .map_or(self.text.len(), |(o, _)| *o);
        Error::Expr(format!("{msg} at offset {at} in `{}`", self.text))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(Token::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            // right associative; the exponent may carry its own sign
            let exponent = self.unary()?;
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let Some(token) = self.peek().cloned() else {
            return Err(self.error("unexpected end of expression"));
        };
        self.pos += 1;
        match token {
            Token::Num(v) => Ok(Node::Num(v)),
            Token::Open => {
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Token::Ident(name) => {
                let func = match name.as_str() {
                    "exp" => Some(Func::Exp),
                    "ln" => Some(Func::Ln),
                    "gamma" => Some(Func::Gamma),
                    "sqrt" => Some(Func::Sqrt),
                    "abs" => Some(Func::Abs),
                    _ => None,
                };
                if let Some(func) = func {
                    if self.peek() != Some(&Token::Open) {
                        return Err(self.error(&format!("expected `(` after `{name}`")));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    if self.peek() != Some(&Token::Close) {
                        return Err(self.error("expected `)`"));
                    }
                    self.pos += 1;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                let var = match name.as_str() {
                    "pi" => return Ok(Node::Num(std::f64::consts::PI)),
                    "t" => Var::T,
                    "x" => Var::X,
                    "theta" => Var::Theta,
                    "u" => Var::U,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error(&format!("unknown identifier `{name}`")));
                    }
                };
                if !self.allowed.contains(&var) {
                    self.pos -= 1;
                    let names: Vec<_> = self.allowed.iter().map(|v| v.name()).collect();
                    return Err(self.error(&format!(
                        "variable `{}` is not available here (allowed: {})",
                        var.name(),
                        names.join(", ")
                    )));
                }
                Ok(Node::Var(var))
            }
            Token::Op(c) => {
                self.pos -= 1;
                Err(self.error(&format!("unexpected operator `{c}`")))
            }
            Token::Close => {
                self.pos -= 1;
                Err(self.error("unexpected `)`"))
            }
        }
    }
}
