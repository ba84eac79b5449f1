//! Text syntax for rational functions and matrices.
//!
//! ```text
//! matrix := '[' row (',' row)* ']'          row := '[' expr (',' expr)* ']'
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*       juxtaposition multiplies
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | hex | 'g' | 'z'index | '(' expr ')'
//! ```
//!
//! Decimal integers are read modulo the characteristic, `0x..` literals are
//! raw field representatives and `g` is the generator of an extension field.
//! The output of `Display` on [`RatFunc`] and [`RatMatrix`] parses back to the
//! same value.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ratio::{RatFunc, RatMatrix};

/// A parsed expression: a bare rational function or a bracketed matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Scalar(RatFunc),
    Matrix(RatMatrix),
}

impl Parsed {
    /// Views a scalar as a `1 x 1` matrix.
    pub fn into_matrix(self) -> RatMatrix {
        match self {
            Parsed::Scalar(r) => RatMatrix::scalar(r),
            Parsed::Matrix(m) => m,
        }
    }
}

pub fn parse_expression(src: &str, spec: FieldSpec, nvars: usize) -> Result<Parsed> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0, spec, nvars };
    let out = if p.peek().kind == Tok::LBracket {
        Parsed::Matrix(p.matrix()?)
    } else {
        Parsed::Scalar(p.expr()?)
    };
    p.expect(Tok::End, "end of input")?;
    Ok(out)
}

/// Parses a rational function; matrices are rejected.
pub fn parse_ratfunc(src: &str, spec: FieldSpec, nvars: usize) -> Result<RatFunc> {
    match parse_expression(src, spec, nvars)? {
        Parsed::Scalar(r) => Ok(r),
        Parsed::Matrix(_) => Err(Error::Syntax { line: 1, column: 1, message: "expected a scalar expression".into() }),
    }
}

/// Parses a matrix; a bare expression is read as `1 x 1`.
pub fn parse_matrix(src: &str, spec: FieldSpec, nvars: usize) -> Result<RatMatrix> {
    Ok(parse_expression(src, spec, nvars)?.into_matrix())
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Hex(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        let kind = if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() {
                    s.push(d);
                    advance(&mut chars);
                } else {
                    break;
                }
            }
            if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
                if hex.is_empty() || !hex.chars().all(|d| d.is_ascii_hexdigit()) {
                    return Err(Error::FieldLiteral { line: l, column: col, message: format!("malformed hex literal `{s}`") });
                }
                Tok::Hex(hex.to_string())
            } else if s.chars().all(|d| d.is_ascii_digit()) {
                Tok::Int(s)
            } else {
                return Err(Error::FieldLiteral { line: l, column: col, message: format!("malformed number `{s}`") });
            }
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_alphanumeric() || d == '_' {
                    s.push(d);
                    advance(&mut chars);
                } else {
                    break;
                }
            }
            Tok::Ident(s)
        } else {
            advance(&mut chars);
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                _ => {
                    return Err(Error::Syntax { line: l, column: col, message: format!("unexpected character `{c}`") });
                }
            }
        };
        out.push(Token { kind, line: l, column: col });
    }
    out.push(Token { kind: Tok::End, line, column });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    spec: FieldSpec,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, message: impl Into<String>) -> Error {
        Error::Syntax { line: t.line, column: t.column, message: message.into() }
    }

    fn expect(&mut self, kind: Tok, what: &str) -> Result<Token> {
        let t = self.next();
        if t.kind != kind {
            return Err(Self::error_at(&t, format!("expected {what}, found {}", describe(&t.kind))));
        }
        Ok(t)
    }

    fn matrix(&mut self) -> Result<RatMatrix> {
        self.expect(Tok::LBracket, "`[`")?;
        let mut rows: Vec<Vec<RatFunc>> = Vec::new();
        loop {
            let open = self.expect(Tok::LBracket, "`[` opening a matrix row")?;
            let mut row = vec![self.expr()?];
            while self.peek().kind == Tok::Comma {
                self.next();
                row.push(self.expr()?);
            }
            self.expect(Tok::RBracket, "`]` closing a matrix row")?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Self::error_at(
                        &open,
                        format!("row has {} entries, expected {}", row.len(), first.len()),
                    ));
                }
            }
            rows.push(row);
            if self.peek().kind != Tok::Comma {
                break;
            }
            self.next();
        }
        self.expect(Tok::RBracket, "`]` closing the matrix")?;
        let (r, c) = (rows.len(), rows[0].len());
        RatMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            match self.peek().kind {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().kind {
                Tok::Star => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    let slash = self.next();
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|_| Self::error_at(&slash, "division by zero"))?;
                }
                Tok::Int(_) | Tok::Hex(_) | Tok::Ident(_) | Tok::LParen => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.peek().kind == Tok::Minus {
            self.next();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek().kind != Tok::Caret {
            return Ok(base);
        }
        let caret = self.next();
        let negative = self.peek().kind == Tok::Minus;
        if negative {
            self.next();
        }
        let t = self.next();
        let Tok::Int(digits) = &t.kind else {
            return Err(Self::error_at(&t, format!("expected an integer exponent, found {}", describe(&t.kind))));
        };
        let e: u32 = digits.parse().map_err(|_| Self::error_at(&t, format!("exponent `{digits}` too large")))?;
        let p = base.pow(e);
        if negative {
            p.inv().map_err(|_| Self::error_at(&caret, "zero raised to a negative power"))
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<RatFunc> {
        let t = self.next();
        let (spec, n) = (self.spec, self.nvars);
        match &t.kind {
            Tok::Int(digits) => {
                let p = spec.characteristic();
                let v = digits.bytes().fold(0u64, |acc, d| (acc * 10 + u64::from(d - b'0')) % p);
                Ok(RatFunc::constant(spec, n, v))
            }
            Tok::Hex(digits) => {
                let v = u64::from_str_radix(digits, 16).ok().filter(|&v| spec.contains(v)).ok_or_else(|| {
                    Error::FieldLiteral { line: t.line, column: t.column, message: format!("0x{digits} is not an element of {spec}") }
                })?;
                Ok(RatFunc::constant(spec, n, v))
            }
            Tok::Ident(name) if name == "g" => {
                let g = spec.generator().ok_or_else(|| Error::FieldLiteral {
                    line: t.line,
                    column: t.column,
                    message: format!("{spec} has no generator `g`"),
                })?;
                Ok(RatFunc::constant(spec, n, g))
            }
            Tok::Ident(name) => {
                let index = name
                    .strip_prefix('z')
                    .filter(|d| !d.starts_with('0'))
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| (1..=n).contains(&i));
                match index {
                    Some(i) => RatFunc::var(spec, n, i - 1),
                    None => Err(Error::UnknownVariable { line: t.line, column: t.column, name: name.clone() }),
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(Self::error_at(&t, format!("expected an operand, found {}", describe(other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(s) => format!("`{s}`"),
        Tok::Hex(s) => format!("`0x{s}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBracket => "`[`".into(),
        Tok::RBracket => "`]`".into(),
        Tok::Comma => "`,`".into(),
        Tok::End => "end of input".into(),
    }
}
