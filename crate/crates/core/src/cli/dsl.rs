//! Text format for foliation definitions.
//!
//! ```text
//! # circles
//! vars: x, y;
//! gen: -1*y*dx + x*dy;
//! order: 5;
//! ```
//!
//! Expressions combine rationals, declared variables and derivations
//! `d<var>` with `+ - * / ^` and parentheses. A derivation is any
//! identifier `d<name>` that is not itself a declared variable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational};
use crate::vecfield::PolyVectorField;

#[derive(Clone, Debug, PartialEq)]
pub struct FoliationSpec {
    pub variables: Vec<String>,
    pub generator_expressions: Vec<String>,
    pub generators: Vec<PolyVectorField>,
    /// Integer options such as `order` and `max_degree`.
    pub options: BTreeMap<String, u32>,
}

impl FoliationSpec {
    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Canonical source text; parses back to an equal spec (up to the
    /// stored expression strings, which become the rendered generators).
    pub fn render(&self) -> String {
        let mut out = format!("vars: {};\n", self.variables.join(", "));
        for g in &self.generators {
            out.push_str(&format!("gen: {};\n", g.render(&self.variables)));
        }
        for (k, v) in &self.options {
            out.push_str(&format!("{k}: {v};\n"));
        }
        out
    }
}

const OPTIONS: [&str; 2] = ["order", "max_degree"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(src: &str, line0: usize, col0: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let (l, cc) = (line, col);
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Num(s.parse().unwrap()),
                line: l,
                column: cc,
            });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(s),
                line: l,
                column: cc,
            });
        } else if "+-*/^()".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: l,
                column: cc,
            });
            i += 1;
            col += 1;
        } else {
            return Err(parse_error(l, cc, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(Polynomial),
    Field(PolyVectorField),
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: &'a [String],
    end: (usize, usize),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(parse_error(l, c, message))
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            let (l, c) = self.here();
            let sign = if self.eat('+') {
                Rational::one()
            } else if self.eat('-') {
                -Rational::one()
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            acc = match (acc, rhs) {
                (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(&a + &b.scale(&sign)),
                (Value::Field(a), Value::Field(b)) => Value::Field(&a + &b.scale(&sign)),
                _ => return Err(parse_error(l, c, "cannot add a scalar and a vector field")),
            };
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            let (l, c) = self.here();
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = match (acc, rhs) {
                    (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(&a * &b),
                    (Value::Scalar(a), Value::Field(b)) | (Value::Field(b), Value::Scalar(a)) => {
                        Value::Field(b.mul_poly(&a))
                    }
                    _ => return Err(parse_error(l, c, "cannot multiply two vector fields")),
                };
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let d = match rhs {
                    Value::Scalar(p) if p.degree().finite() == Some(0) => p.constant_term(),
                    Value::Scalar(p) if p.is_zero() => return Err(parse_error(l, c, "division by zero")),
                    _ => return Err(parse_error(l, c, "divisor must be a nonzero rational constant")),
                };
                let inv = d.recip();
                acc = match acc {
                    Value::Scalar(a) => Value::Scalar(a.scale(&inv)),
                    Value::Field(a) => Value::Field(a.scale(&inv)),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                Value::Scalar(a) => Value::Scalar(-&a),
                Value::Field(a) => Value::Field(-&a),
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        let (l, c) = self.here();
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.peek() {
            Some(Token { tok: Tok::Num(k), .. }) => {
                let k: u32 = k.try_into().map_err(|_| parse_error(l, c, "exponent too large"))?;
                self.pos += 1;
                k
            }
            _ => return self.err("expected a non-negative integer exponent"),
        };
        match base {
            Value::Scalar(p) => Ok(Value::Scalar(p.pow(e))),
            Value::Field(_) => Err(parse_error(l, c, "cannot raise a vector field to a power")),
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let n = self.n();
        let Some(t) = self.peek().cloned() else {
            return self.err("unexpected end of expression");
        };
        match t.tok {
            Tok::Num(k) => {
                self.pos += 1;
                Ok(Value::Scalar(Polynomial::constant(n, Rational::from_integer(k))))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Value::Scalar(Polynomial::var(n, i)));
                }
                if let Some(rest) = name.strip_prefix('d') {
                    if let Some(i) = self.vars.iter().position(|v| v == rest) {
                        return Ok(Value::Field(PolyVectorField::basis(i, Polynomial::one(n))));
                    }
                }
                Err(Error::UndeclaredVariable {
                    name,
                    line: t.line,
                    column: t.column,
                })
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(v)
            }
            Tok::Sym(c) => self.err(format!("unexpected `{c}`")),
        }
    }
}

/// Parses one vector-field expression over the given variables.
pub fn parse_field(src: &str, vars: &[String]) -> Result<PolyVectorField> {
    parse_field_at(src, vars, 1, 1)
}

fn parse_field_at(src: &str, vars: &[String], line: usize, column: usize) -> Result<PolyVectorField> {
    let toks = lex(src, line, column)?;
    let end = toks.last().map(|t| (t.line, t.column + 1)).unwrap_or((line, column));
    let mut p = Parser {
        toks,
        pos: 0,
        vars,
        end,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    match v {
        Value::Field(f) => Ok(f),
        Value::Scalar(s) if s.is_zero() => Ok(PolyVectorField::zero(vars.len())),
        Value::Scalar(_) => Err(parse_error(line, column, "expression is a scalar, not a vector field")),
    }
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits the source into `;`-terminated statements, dropping `#` comments,
/// and remembers where each statement starts.
fn statements(source: &str) -> Result<Vec<(String, usize, usize)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start: Option<(usize, usize)> = None;
    for (li, raw) in source.lines().enumerate() {
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        for (ci, ch) in line.chars().enumerate() {
            if ch == ';' {
                let (l, c) = start.unwrap_or((li + 1, ci + 1));
                out.push((std::mem::take(&mut cur), l, c));
                start = None;
            } else {
                if start.is_none() && !ch.is_whitespace() {
                    start = Some((li + 1, ci + 1));
                }
                if start.is_some() {
                    cur.push(ch);
                }
            }
        }
        if start.is_some() {
            cur.push('\n');
        }
    }
    if let Some((l, c)) = start {
        if !cur.trim().is_empty() {
            return Err(parse_error(l, c, "statement is missing its terminating `;`"));
        }
    }
    Ok(out)
}

pub fn parse_spec(source: &str) -> Result<FoliationSpec> {
    let mut variables: Option<Vec<String>> = None;
    let mut exprs = Vec::new();
    let mut generators = Vec::new();
    let mut options = BTreeMap::new();
    for (stmt, line, column) in statements(source)? {
        let Some((key, body)) = stmt.split_once(':') else {
            return Err(parse_error(line, column, "expected `key: value`"));
        };
        let key = key.trim();
        let body_col = column + stmt.find(':').unwrap() + 1;
        match key {
            "vars" => {
                if variables.is_some() {
                    return Err(parse_error(line, column, "variables declared twice"));
                }
                let names: Vec<String> = body.split(',').map(|s| s.trim().to_string()).collect();
                for n in &names {
                    if !valid_name(n) {
                        return Err(parse_error(line, body_col, format!("invalid variable name `{n}`")));
                    }
                }
                for (i, n) in names.iter().enumerate() {
                    if names[..i].contains(n) {
                        return Err(parse_error(line, body_col, format!("variable `{n}` declared twice")));
                    }
                }
                variables = Some(names);
            }
            "gen" => {
                let Some(vars) = &variables else {
                    return Err(parse_error(line, column, "generator before `vars:` declaration"));
                };
                let g = parse_field_at(body, vars, line, body_col)?;
                if !g.vanishes_at_origin() {
                    let constants = g
                        .components()
                        .iter()
                        .map(|p| crate::poly::format_rational(&p.constant_term()))
                        .collect::<Vec<_>>()
                        .join(", ");
                    return Err(Error::NotVanishing {
                        index: generators.len(),
                        constants,
                    });
                }
                exprs.push(body.trim().to_string());
                generators.push(g);
            }
            k if OPTIONS.contains(&k) => {
                let v: u32 = body
                    .trim()
                    .parse()
                    .map_err(|_| parse_error(line, body_col, format!("`{k}` needs a non-negative integer")))?;
                options.insert(k.to_string(), v);
            }
            other => return Err(parse_error(line, column, format!("unknown statement `{other}`"))),
        }
    }
    let Some(variables) = variables else {
        return Err(parse_error(1, 1, "missing `vars:` declaration"));
    };
    if generators.is_empty() {
        return Err(Error::NoGenerators);
    }
    Ok(FoliationSpec {
        variables,
        generator_expressions: exprs,
        generators,
        options,
    })
}
