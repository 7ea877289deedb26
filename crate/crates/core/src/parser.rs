//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := unary ('*' unary)*`,
//! `unary := '-' unary | atom ('^' uint)?`, `atom := literal | var | '(' expr ')'`.
//! Literals are integers or rationals `a/b`. The result is reduced modulo the
//! ring's relations, so parsing into a quotient ring yields normal forms.

use crate::poly::Poly;
use crate::ring::Ring;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable {name:?} at position {pos}")]
    UnknownVariable { pos: usize, name: String },
}

/// Parse `text` into the normal form of a polynomial of `ring`.
pub fn parse_poly(text: &str, ring: &Ring) -> Result<Poly, ParseError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        ring,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(ring.normalize(&e))
}

/// Parse a comma-separated list of polynomial expressions.
pub fn parse_poly_list(text: &str, ring: &Ring) -> Result<Vec<Poly>, ParseError> {
    split_top_level(text)
        .into_iter()
        .map(|s| parse_poly(s.trim(), ring))
        .collect()
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts.retain(|s| !s.trim().is_empty());
    parts
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        let pos = self
            .chars
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or_else(|| self.chars.last().map(|(i, c)| i + c.len_utf8()).unwrap_or(0));
        ParseError::Syntax {
            pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .chars
            .get(self.pos)
            .map(|(_, c)| c.is_whitespace())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let order = self.ring.order().clone();
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t, &order);
                }
                Some('-') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t, &order);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let order = self.ring.order().clone();
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.bump();
            let f = self.unary()?;
            acc = acc.mul(&f, &order);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if self.peek() == Some('-') {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            let e = self.uint()?;
            return Ok(base.pow(e, self.ring.order()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                // parenthesized atoms may carry an exponent, handled by unary
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let lit = self.literal()?;
                let s = self
                    .ring
                    .field()
                    .from_literal(&lit)
                    .map_err(|m| self.err(&m))?;
                Ok(Poly::constant(s, self.ring.n_vars()))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start_pos = self
                    .chars
                    .get(self.pos)
                    .map(|(i, _)| *i)
                    .unwrap_or(0);
                let name = self.ident();
                match self.ring.var_index(&name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(ParseError::UnknownVariable {
                        pos: start_pos,
                        name,
                    }),
                }
            }
            _ => Err(self.err("expected literal, variable, or '('")),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let mut name = String::new();
        while let Some((_, c)) = self.chars.get(self.pos) {
            if c.is_alphanumeric() || *c == '_' {
                name.push(*c);
                self.pos += 1;
            } else {
                break;
            }
        }
        name
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some((_, c)) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                digits.push(*c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return Err(self.err("expected exponent"));
        }
        digits.parse().map_err(|_| self.err("exponent too large"))
    }

    fn literal(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some((_, c)) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                digits.push(*c);
                self.pos += 1;
            } else {
                break;
            }
        }
        // rational literal a/b
        let save = self.pos;
        if self.peek() == Some('/') {
            self.bump();
            let mut den = String::new();
            while let Some((_, c)) = self.chars.get(self.pos) {
                if c.is_ascii_digit() {
                    den.push(*c);
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if den.is_empty() {
                self.pos = save;
            } else {
                return Ok(format!("{digits}/{den}"));
            }
        }
        Ok(digits)
    }
}
