//! Text grammar for ring elements and matrices.
//!
//! ```text
//! letter  := ("y"|"x") "[" color "," index "]"     (any t)
//!          | ("y"|"x") index                       (t = 1 only)
//! unit    := "e[" i "," j "]"
//! term    := [sign] [integer "*"] { unit | letter }+  |  [sign] integer
//! element := term { ("+"|"-") term }*
//! matrix  := "[[" element { "," element }* "]" { ",[" ... "]" }* "]"
//! ```
//!
//! Formatting emits terms in canonical order; parsing accepts any order.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::algebra::{normalize, Factor, Letter, LetterKind, RawTerm, RingElement, Shape};
use crate::error::{Error, Result};

pub const GRAMMAR: &str = "\
letter  := (\"y\"|\"x\") \"[\" color \",\" index \"]\"   (any t)
         | (\"y\"|\"x\") index                     (t = 1 only)
unit    := \"e[\" i \",\" j \"]\"
term    := [sign] [integer \"*\"] { unit | letter }+  |  [sign] integer
element := term { (\"+\"|\"-\") term }*
matrix  := \"[[\" element { \",\" element }* \"]\" { \",[\" ... \"]\" }* \"]\"
point   := \"pt(\" row \";\" coord { \",\" coord }* \")\"
coord   := digits \"|\" digits         (pre-period | primitive period)
         | [digits] \"~\" name \"@\" k  (aperiodic stream tm|fib at offset k)
";

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { src: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn usize(&mut self) -> Result<usize> {
        let d = self.digits()?;
        d.parse().or_else(|_| self.err("integer too large"))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn pair(&mut self) -> Result<(usize, usize)> {
        self.expect(b'[')?;
        let a = self.usize()?;
        self.expect(b',')?;
        let b = self.usize()?;
        self.expect(b']')?;
        Ok((a, b))
    }

    fn term(&mut self, shape: Shape, sign: bool) -> Result<RawTerm> {
        let mut coeff = if sign { -BigInt::one() } else { BigInt::one() };
        let mut factors = Vec::new();
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let n: BigInt = self.digits()?.parse().unwrap();
            coeff *= n;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok(RawTerm { coeff, factors });
            }
        }
        loop {
            match self.peek() {
                Some(b'e') => {
                    self.pos += 1;
                    let (i, j) = self.pair()?;
                    factors.push(Factor::Unit(i, j));
                }
                Some(c @ (b'y' | b'x')) => {
                    self.pos += 1;
                    let kind = if c == b'y' { LetterKind::Y } else { LetterKind::X };
                    let (color, index) = if self.peek() == Some(b'[') {
                        self.pair()?
                    } else {
                        if shape.t() != 1 {
                            return self.err("shorthand letters need t = 1; write y[color,index]");
                        }
                        (1, self.usize()?)
                    };
                    factors.push(Factor::Letter(Letter { kind, color, index }));
                }
                _ => break,
            }
        }
        if factors.is_empty() {
            return self.err("expected a letter, a matrix unit, or an integer");
        }
        Ok(RawTerm { coeff, factors })
    }

    fn element_terms(&mut self, shape: Shape) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            terms.push(self.term(shape, sign)?);
            match self.peek() {
                Some(b'+') => sign = false,
                Some(b'-') => sign = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(terms)
    }
}

/// Parses an element of `rows × cols` matrices written as a sum of terms.
pub fn parse_element(shape: Shape, rows: usize, cols: usize, s: &str) -> Result<RingElement> {
    let mut cur = Cursor::new(s);
    let terms = cur.element_terms(shape)?;
    if !cur.at_end() {
        return cur.err("trailing input");
    }
    normalize(shape, rows, cols, &terms)
}

/// Parses either a bracketed matrix or a plain `1 × 1` element.
pub fn parse_matrix(shape: Shape, s: &str) -> Result<RingElement> {
    let mut cur = Cursor::new(s);
    if cur.peek() != Some(b'[') {
        return parse_element(shape, 1, 1, s);
    }
    cur.expect(b'[')?;
    let mut rows: Vec<Vec<RingElement>> = Vec::new();
    loop {
        cur.expect(b'[')?;
        let mut row = Vec::new();
        loop {
            let terms = cur.element_terms(shape)?;
            row.push(normalize(shape, 1, 1, &terms)?);
            if cur.peek() == Some(b',') {
                cur.pos += 1;
            } else {
                break;
            }
        }
        cur.expect(b']')?;
        rows.push(row);
        if cur.peek() == Some(b',') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    cur.expect(b']')?;
    if !cur.at_end() {
        return cur.err("trailing input");
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse { pos: s.len(), msg: "ragged matrix rows".into() });
    }
    crate::matrices::from_grid(shape, &rows)
}

fn format_letter(shape: Shape, kind: char, color: usize, index: u8, out: &mut String) {
    if shape.t() == 1 {
        out.push(kind);
        out.push_str(&index.to_string());
    } else {
        out.push_str(&format!("{kind}[{color},{index}]"));
    }
}

/// Formats the terms of an element, ignoring matrix coordinates.
fn format_sum<'a, I>(shape: Shape, terms: I, with_units: bool) -> String
where
    I: Iterator<Item = (&'a crate::algebra::TermKey, &'a BigInt)>,
{
    let mut out = String::new();
    for (n, (k, c)) in terms.enumerate() {
        if c.is_negative() {
            out.push_str(if n == 0 { "-" } else { " - " });
        } else if n > 0 {
            out.push_str(" + ");
        }
        let mag = c.abs();
        let mut body = Vec::new();
        if with_units {
            body.push(format!("e[{},{}]", k.row, k.col));
        }
        for (color, w) in k.mono.words().iter().enumerate() {
            for &i in &w.y {
                let mut s = String::new();
                format_letter(shape, 'y', color + 1, i, &mut s);
                body.push(s);
            }
            for &i in &w.x {
                let mut s = String::new();
                format_letter(shape, 'x', color + 1, i, &mut s);
                body.push(s);
            }
        }
        if body.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&body.join(" "));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text: a plain sum for `1 × 1` elements, a bracketed matrix otherwise.
pub fn format_element(e: &RingElement) -> String {
    if e.dims() == (1, 1) {
        return format_sum(e.shape(), e.terms(), false);
    }
    let mut out = String::from("[");
    for i in 1..=e.rows() {
        if i > 1 {
            out.push(',');
        }
        out.push('[');
        for j in 1..=e.cols() {
            if j > 1 {
                out.push(',');
            }
            let entry = e.terms().filter(|(k, _)| k.row == i && k.col == j);
            out.push_str(&format_sum(e.shape(), entry, false));
        }
        out.push(']');
    }
    out.push(']');
    out
}

/// Formats an element as a single sum with explicit `e[i,j]` units.
pub fn format_with_units(e: &RingElement) -> String {
    format_sum(e.shape(), e.terms(), true)
}
