//! Text notation for finite quadratic forms.
//!
//! ```text
//! FORM  := "0" | TERM (" + " TERM)*
//! TERM  := ORDER ":" VALUE | ORDER ":u" | ORDER ":v"
//! VALUE := ["-"] INT ["/" INT]
//! ```
//!
//! `d:v` is the cyclic group of order `d` with generator value `v`; `d:u` and
//! `d:v` with a bare letter are the 2-adic planes on `(Z/d)²`. Odd Sylow parts
//! are printed in canonical `w^ε_{p,α}` normal form (values `a/p^α` with `a`
//! the smallest positive even representative), 2-parts as a deterministic
//! orthogonal decomposition with cyclic values taken in `(-1, 1]`.

use super::normal::Component;
use super::{w_numerator, FiniteQuadraticForm};
use crate::error::{Error, Result};
use num_rational::Rational64;
use num_traits::One;
use std::fmt;
use std::str::FromStr;

fn fmt_value(v: Rational64) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl FiniteQuadraticForm {
    /// Canonical text notation; falls back to the raw generator data for
    /// degenerate forms.
    pub fn notation(&self) -> String {
        if self.is_trivial() {
            return "0".into();
        }
        if !self.is_nondegenerate() {
            let terms: Vec<String> = (0..self.num_generators())
                .map(|i| format!("{}:{}", self.orders()[i], fmt_value(self.q_gen(i))))
                .collect();
            return format!("degenerate[{}]", terms.join(" + "));
        }
        let mut terms = Vec::new();
        for p in self.primes().into_iter().filter(|&p| p != 2) {
            for block in self.odd_normal_form(p).expect("nondegenerate") {
                let d = p.pow(block.alpha);
                terms.push(format!("{}:{}", d, fmt_value(Rational64::new(w_numerator(p, block.epsilon), d))));
            }
        }
        if self.order() % 2 == 0 {
            for (component, _) in self.p_part(2).orthogonal_decomposition().expect("nondegenerate") {
                terms.push(match component {
                    Component::Cyclic { order, value } => {
                        let v = if value > Rational64::one() { value - 2 } else { value };
                        format!("{}:{}", order, fmt_value(v))
                    }
                    Component::Plane { order, odd_type } => {
                        format!("{}:{}", order, if odd_type { "v" } else { "u" })
                    }
                });
            }
        }
        terms.join(" + ")
    }
}

impl fmt::Display for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.notation())
    }
}

impl serde::Serialize for FiniteQuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_int(s: &str, pos: usize) -> Result<i64> {
    s.trim().parse::<i64>().map_err(|_| Error::Parse { position: pos, message: format!("expected integer, found `{s}`") })
}

impl FromStr for FiniteQuadraticForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(FiniteQuadraticForm::trivial());
        }
        let mut acc = FiniteQuadraticForm::trivial();
        let mut pos = 0;
        for term in s.split('+') {
            let (order, value) = term.split_once(':').ok_or(Error::Parse {
                position: pos,
                message: format!("expected ORDER:VALUE, found `{}`", term.trim()),
            })?;
            let d = parse_int(order, pos)?;
            let value = value.trim();
            let block = match value {
                "u" | "v" => Component::Plane { order: d, odd_type: value == "v" }.to_form()?,
                _ => {
                    let v = match value.split_once('/') {
                        Some((n, m)) => Rational64::new(parse_int(n, pos)?, parse_int(m, pos)?),
                        None => Rational64::from_integer(parse_int(value, pos)?),
                    };
                    FiniteQuadraticForm::cyclic(d, v)?
                }
            };
            acc = acc.orthogonal_sum(&block);
            pos += term.len() + 1;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_canonical_odd_blocks() {
        let f: FiniteQuadraticForm = "3:2/3 + 3:2/3 + 4:7/4".parse().unwrap();
        assert_eq!(f.notation(), "3:4/3 + 3:4/3 + 4:-1/4");
        assert_eq!(FiniteQuadraticForm::trivial().notation(), "0");
        let u: FiniteQuadraticForm = "2:u".parse().unwrap();
        assert_eq!(u.notation(), "2:u");
    }

    #[test]
    fn round_trip() {
        for s in ["3:4/3 + 3:4/3 + 3:2/3 + 4:-1/4", "5:2/5 + 2:1/2", "9:4/9 + 3:2/3 + 8:3/8 + 4:v", "23:22/23"] {
            let f: FiniteQuadraticForm = s.parse().unwrap();
            let g: FiniteQuadraticForm = f.notation().parse().unwrap();
            assert!(f.is_isometric(&g).unwrap(), "{s}");
        }
        assert!("3".parse::<FiniteQuadraticForm>().is_err());
    }
}
