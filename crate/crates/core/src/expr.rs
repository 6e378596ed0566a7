//! Lattice expressions such as `2*U + U(3) + E6 + <-4>`.
//!
//! ```text
//! EXPR    := TERM ("+" TERM)*
//! TERM    := [INT "*"] ATOM
//! ATOM    := PRIMARY POSTFIX*
//! PRIMARY := NAME | "<" INT ">" | "(" EXPR ")"
//! POSTFIX := "(" INT ")" | "(-1)"
//! ```
//!
//! [`parse_lenient`] additionally accepts `⊕`, `⟨ ⟩`, the Unicode minus,
//! repeat markers `^{⊕k}`, subscripts, `E6^∨(3)` and their TeX spellings.

use crate::error::{Error, Result};
use crate::lattice::{named_lattice, GramLattice, Named};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeExpr {
    Named(Named),
    Scaled(Box<LatticeExpr>, i64),
    Negated(Box<LatticeExpr>),
    Repeat(usize, Box<LatticeExpr>),
    Sum(Vec<LatticeExpr>),
}

impl LatticeExpr {
    pub fn named(n: Named) -> Self {
        LatticeExpr::Named(n)
    }

    /// Flattens nested sums, drops one-term sums and unit repeats, and merges
    /// nested repeats. Parsing always yields normalized trees.
    pub fn normalized(self) -> Self {
        match self {
            LatticeExpr::Named(_) => self,
            LatticeExpr::Scaled(e, t) => LatticeExpr::Scaled(Box::new(e.normalized()), t),
            LatticeExpr::Negated(e) => LatticeExpr::Negated(Box::new(e.normalized())),
            LatticeExpr::Repeat(k, e) => match e.normalized() {
                _ if k == 0 => LatticeExpr::Sum(Vec::new()),
                inner if k == 1 => inner,
                LatticeExpr::Repeat(j, inner) => LatticeExpr::Repeat(k * j, inner),
                inner => LatticeExpr::Repeat(k, Box::new(inner)),
            },
            LatticeExpr::Sum(terms) => {
                let mut flat = Vec::new();
                for t in terms {
                    match t.normalized() {
                        LatticeExpr::Sum(inner) => flat.extend(inner),
                        t => flat.push(t),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    LatticeExpr::Sum(flat)
                }
            }
        }
    }

    pub fn evaluate(&self) -> Result<GramLattice> {
        match self {
            LatticeExpr::Named(n) => named_lattice(*n, None),
            LatticeExpr::Scaled(e, t) => e.evaluate()?.rescale(*t),
            LatticeExpr::Negated(e) => Ok(e.evaluate()?.negated()),
            LatticeExpr::Repeat(k, e) => {
                let l = e.evaluate()?;
                Ok((0..*k).fold(GramLattice::zero(), |acc, _| acc.direct_sum(&l)))
            }
            LatticeExpr::Sum(terms) => {
                terms.iter().try_fold(GramLattice::zero(), |acc, t| Ok(acc.direct_sum(&t.evaluate()?)))
            }
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Named(n) => f.write_str(&n.token()),
            LatticeExpr::Scaled(e, t) => {
                e.fmt_atom(f)?;
                write!(f, "({t})")
            }
            LatticeExpr::Negated(e) => {
                e.fmt_atom(f)?;
                f.write_str("(-1)")
            }
            LatticeExpr::Repeat(..) | LatticeExpr::Sum(_) => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Sum(terms) if terms.is_empty() => f.write_str("0"),
            LatticeExpr::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    match t {
                        LatticeExpr::Sum(_) => write!(f, "({t})")?,
                        _ => t.fmt(f)?,
                    }
                }
                Ok(())
            }
            LatticeExpr::Repeat(k, e) => {
                write!(f, "{k}*")?;
                e.fmt_atom(f)
            }
            _ => self.fmt_atom(f),
        }
    }
}

impl FromStr for LatticeExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

pub fn parse(input: &str) -> Result<LatticeExpr> {
    Parser::new(input, false).run()
}

/// Parses table notation with Unicode and TeX aliases.
pub fn parse_lenient(input: &str) -> Result<LatticeExpr> {
    Parser::new(&desugar(input), true).run()
}

fn desugar(input: &str) -> String {
    let mut s = input.to_string();
    for (from, to) in [
        ("\\oplus", "⊕"),
        ("\\langle", "<"),
        ("\\rangle", ">"),
        ("\\Omega", "Omega"),
        ("\\vee", "∨"),
        ("\\left", ""),
        ("\\right", ""),
        ("Ω", "Omega"),
        ("⟨", "<"),
        ("⟩", ">"),
        ("〈", "<"),
        ("〉", ">"),
        ("−", "-"),
        ("^{⊕", "^{"),
        ("^⊕", "^"),
        ("⊕", "+"),
        ("$", ""),
    ] {
        s = s.replace(from, to);
    }
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '_' => {
                if chars.peek() == Some(&'{') {
                    chars.next();
                    while let Some(&d) = chars.peek() {
                        chars.next();
                        if d == '}' {
                            break;
                        }
                        out.push(d);
                    }
                }
            }
            '₀'..='₉' => out.push(char::from(b'0' + (c as u32 - '₀' as u32) as u8)),
            _ => out.push(c),
        }
    }
    for v in ["E6^∨(3)", "E6^{∨}(3)", "E6∨(3)"] {
        out = out.replace(v, "E6dual3");
    }
    out
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    lenient: bool,
}

impl Parser {
    fn new(input: &str, lenient: bool) -> Self {
        Parser { chars: input.chars().map(|c| if c == '−' { '-' } else { c }).collect(), pos: 0, lenient }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&mut self, offset: usize) -> Option<char> {
        self.skip_ws();
        let mut i = self.pos;
        let mut seen = 0;
        while i < self.chars.len() {
            if !self.chars[i].is_whitespace() {
                if seen == offset {
                    return Some(self.chars[i]);
                }
                seen += 1;
            }
            i += 1;
        }
        None
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.err(format!("expected `{c}`, found `{d}`")),
            None => self.err(format!("expected `{c}`, found end of input")),
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("expected integer")
        })
    }

    fn run(mut self) -> Result<LatticeExpr> {
        let e = self.expr()?;
        if let Some(c) = self.peek() {
            return self.err(format!("unexpected `{c}`"));
        }
        Ok(e.normalized())
    }

    fn expr(&mut self) -> Result<LatticeExpr> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some('+') {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(LatticeExpr::Sum(terms))
    }

    fn term(&mut self) -> Result<LatticeExpr> {
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let at = self.pos;
            let k = self.int()?;
            if k < 1 {
                self.pos = at;
                return self.err("repeat count must be positive");
            }
            self.expect('*')?;
            return Ok(LatticeExpr::Repeat(k as usize, Box::new(self.atom()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<LatticeExpr> {
        let mut e = self.primary()?;
        loop {
            match self.peek() {
                Some('(') if self.peek_at(1).is_some_and(|c| c.is_ascii_digit() || c == '-') => {
                    self.pos += 1;
                    let at = self.pos;
                    let t = self.int()?;
                    self.expect(')')?;
                    e = match t {
                        -1 => LatticeExpr::Negated(Box::new(e)),
                        t if t >= 1 => LatticeExpr::Scaled(Box::new(e), t),
                        _ => {
                            self.pos = at;
                            return self.err(format!("scale must be a positive integer or -1, got {t}"));
                        }
                    };
                }
                Some('^') if self.lenient => {
                    self.pos += 1;
                    let braced = self.peek() == Some('{');
                    if braced {
                        self.pos += 1;
                    }
                    let at = self.pos;
                    let k = self.int()?;
                    if braced {
                        self.expect('}')?;
                    }
                    if k < 1 {
                        self.pos = at;
                        return self.err("repeat count must be positive");
                    }
                    e = LatticeExpr::Repeat(k as usize, Box::new(e));
                }
                _ => return Ok(e),
            }
        }
    }

    fn primary(&mut self) -> Result<LatticeExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('<') => {
                self.pos += 1;
                let at = self.pos;
                let d = self.int()?;
                if d == 0 || d % 2 != 0 {
                    self.pos = at;
                    return self.err(format!("<{d}> requires a nonzero even integer"));
                }
                self.expect('>')?;
                Ok(LatticeExpr::Named(Named::Diagonal(d)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                Named::from_token(&name).map(LatticeExpr::Named)
            }
            Some(c) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}
