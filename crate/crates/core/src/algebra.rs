//! Exact arithmetic in matrices over `L_r^{⊗t}` using Leavitt's normal form.
//!
//! Every element is stored as a finite `Z`-combination of normal monomials,
//! each tagged with a matrix coordinate. Per tensor color a monomial is a
//! y-word followed by an x-word, so the only forbidden subword that can
//! survive a product is the junction `y_r x_r`, which is resolved eagerly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest supported ring rank; letter indices are stored as bytes.
pub const MAX_RANK: usize = 255;

/// Ring rank `r` and number of tensor factors `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    r: usize,
    t: usize,
}

impl Shape {
    pub fn new(r: usize, t: usize) -> Result<Self> {
        if !(2..=MAX_RANK).contains(&r) {
            return Err(Error::InvalidParameter(format!(
                "rank r = {r} must lie in [2, {MAX_RANK}]"
            )));
        }
        if t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        Ok(Shape { r, t })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    fn check_same(&self, other: &Shape) -> Result<()> {
        if self != other {
            return Err(Error::ShapeMismatch(format!(
                "(r={}, t={}) vs (r={}, t={})",
                self.r, self.t, other.r, other.t
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterKind {
    Y,
    X,
}

/// A generator `y_{color,index}` or `x_{color,index}`; colors and indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub kind: LetterKind,
    pub color: usize,
    pub index: usize,
}

impl Letter {
    pub fn y(color: usize, index: usize) -> Self {
        Letter { kind: LetterKind::Y, color, index }
    }

    pub fn x(color: usize, index: usize) -> Self {
        Letter { kind: LetterKind::X, color, index }
    }

    pub fn check(&self, shape: Shape) -> Result<()> {
        if self.color == 0 || self.color > shape.t {
            return Err(Error::OutOfRange(format!(
                "color {} not in [1, {}]",
                self.color, shape.t
            )));
        }
        if self.index == 0 || self.index > shape.r {
            return Err(Error::OutOfRange(format!(
                "letter index {} not in [1, {}]",
                self.index, shape.r
            )));
        }
        Ok(())
    }
}

/// One tensor color of a normal monomial: `y_{y[0]} ⋯ y_{y[k]} x_{x[0]} ⋯ x_{x[l]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorWord {
    pub y: Vec<u8>,
    pub x: Vec<u8>,
}

impl ColorWord {
    pub fn new(y: Vec<u8>, x: Vec<u8>) -> Self {
        ColorWord { y, x }
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty() && self.x.is_empty()
    }

    /// True when the word avoids the junction `y_r x_r`.
    pub fn is_normal(&self, r: usize) -> bool {
        !(self.y.last() == Some(&(r as u8)) && self.x.first() == Some(&(r as u8)))
    }

    fn involute(&self) -> ColorWord {
        ColorWord {
            y: self.x.iter().rev().copied().collect(),
            x: self.y.iter().rev().copied().collect(),
        }
    }

    /// Product of two color words as a signed sum of normal words.
    ///
    /// The middle `x⋯ y⋯` junction collapses by `x_s y_{s'} = δ`; a surviving
    /// `y_r^k x_r^k` junction is expanded by `y_r x_r = 1 - Σ_{s<r} y_s x_s`.
    pub fn mul(&self, rhs: &ColorWord, r: usize) -> Vec<(bool, ColorWord)> {
        let mut xa = self.x.len();
        let mut yb = 0;
        while xa > 0 && yb < rhs.y.len() {
            if self.x[xa - 1] != rhs.y[yb] {
                return Vec::new();
            }
            xa -= 1;
            yb += 1;
        }
        let mut y = Vec::with_capacity(self.y.len() + rhs.y.len() - yb);
        y.extend_from_slice(&self.y);
        y.extend_from_slice(&rhs.y[yb..]);
        let mut x = Vec::with_capacity(xa + rhs.x.len());
        x.extend_from_slice(&self.x[..xa]);
        x.extend_from_slice(&rhs.x);
        resolve_junction(y, x, r)
    }
}

/// Rewrites `y0 y_r^k · x_r^k x0` into normal words (`false` marks a `+` sign).
fn resolve_junction(y: Vec<u8>, x: Vec<u8>, r: usize) -> Vec<(bool, ColorWord)> {
    let rr = r as u8;
    let mut k = 0;
    while k < y.len() && k < x.len() && y[y.len() - 1 - k] == rr && x[k] == rr {
        k += 1;
    }
    if k == 0 {
        return vec![(false, ColorWord { y, x })];
    }
    let y0 = &y[..y.len() - k];
    let x0 = &x[k..];
    let mut out = Vec::with_capacity(1 + k * (r - 1));
    out.push((false, ColorWord { y: y0.to_vec(), x: x0.to_vec() }));
    for j in 0..k {
        for s in 1..rr {
            let mut ny = Vec::with_capacity(y0.len() + j + 1);
            ny.extend_from_slice(y0);
            ny.extend(std::iter::repeat_n(rr, j));
            ny.push(s);
            let mut nx = Vec::with_capacity(x0.len() + j + 1);
            nx.push(s);
            nx.extend(std::iter::repeat_n(rr, j));
            nx.extend_from_slice(x0);
            out.push((true, ColorWord { y: ny, x: nx }));
        }
    }
    out
}

/// A monomial of `L_r^{⊗t}` in normal form, one [`ColorWord`] per color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    words: Vec<ColorWord>,
}

impl Monomial {
    pub fn one(t: usize) -> Self {
        Monomial { words: vec![ColorWord::default(); t] }
    }

    pub fn from_words(shape: Shape, words: Vec<ColorWord>) -> Result<Self> {
        if words.len() != shape.t {
            return Err(Error::ShapeMismatch(format!(
                "monomial has {} colors, shape has t = {}",
                words.len(),
                shape.t
            )));
        }
        for w in &words {
            if w.y.iter().chain(&w.x).any(|&i| i == 0 || i as usize > shape.r) {
                return Err(Error::OutOfRange(format!("letter index outside [1, {}]", shape.r)));
            }
            if !w.is_normal(shape.r) {
                return Err(Error::NotNormal);
            }
        }
        Ok(Monomial { words })
    }

    /// The y-only monomial with the given per-color words.
    pub fn from_y_words(shape: Shape, words: &[Vec<u8>]) -> Result<Self> {
        Self::from_words(
            shape,
            words.iter().map(|w| ColorWord::new(w.clone(), Vec::new())).collect(),
        )
    }

    pub fn words(&self) -> &[ColorWord] {
        &self.words
    }

    pub fn is_one(&self) -> bool {
        self.words.iter().all(ColorWord::is_empty)
    }

    pub fn involute(&self) -> Monomial {
        Monomial { words: self.words.iter().map(ColorWord::involute).collect() }
    }

    /// Product as a signed sum of normal monomials (colors commute).
    pub fn mul(&self, rhs: &Monomial, r: usize) -> Vec<(bool, Monomial)> {
        let mut acc: Vec<(bool, Vec<ColorWord>)> = vec![(false, Vec::with_capacity(self.words.len()))];
        for (a, b) in self.words.iter().zip(&rhs.words) {
            let parts = a.mul(b, r);
            if parts.is_empty() {
                return Vec::new();
            }
            if parts.len() == 1 {
                let (neg, w) = parts.into_iter().next().unwrap();
                for (sign, ws) in acc.iter_mut() {
                    *sign ^= neg;
                    ws.push(w.clone());
                }
                continue;
            }
            let mut next = Vec::with_capacity(acc.len() * parts.len());
            for (sign, ws) in &acc {
                for (neg, w) in &parts {
                    let mut nw = ws.clone();
                    nw.push(w.clone());
                    next.push((sign ^ neg, nw));
                }
            }
            acc = next;
        }
        acc.into_iter().map(|(s, words)| (s, Monomial { words })).collect()
    }
}

/// Position of a term: matrix coordinate (1-based) and monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub row: usize,
    pub col: usize,
    pub mono: Monomial,
}

/// A factor of a raw (unnormalized) product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Letter(Letter),
    Unit(usize, usize),
}

/// A signed raw product `coeff · f_1 f_2 ⋯ f_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTerm {
    pub coeff: BigInt,
    pub factors: Vec<Factor>,
}

/// An `rows × cols` matrix over `L_r^{⊗t}` in canonical normal form.
///
/// Scalars are the `1 × 1` case. Equality is equality in the ring because
/// the normal form is unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    shape: Shape,
    rows: usize,
    cols: usize,
    terms: BTreeMap<TermKey, BigInt>,
}

impl RingElement {
    pub fn zero(shape: Shape, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        RingElement { shape, rows, cols, terms: BTreeMap::new() }
    }

    pub fn identity(shape: Shape, m: usize) -> Self {
        let mut z = Self::zero(shape, m, m);
        for i in 1..=m {
            z.terms.insert(
                TermKey { row: i, col: i, mono: Monomial::one(shape.t) },
                BigInt::one(),
            );
        }
        z
    }

    /// `n · 1` in the `1 × 1` ring.
    pub fn scalar(shape: Shape, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(shape, 1, 1);
        let n = n.into();
        if !n.is_zero() {
            z.terms.insert(TermKey { row: 1, col: 1, mono: Monomial::one(shape.t) }, n);
        }
        z
    }

    /// The matrix unit `e_{i,j}` in `rows × cols`.
    pub fn unit(shape: Shape, rows: usize, cols: usize, i: usize, j: usize) -> Result<Self> {
        Self::monomial(shape, rows, cols, i, j, Monomial::one(shape.t), BigInt::one())
    }

    pub fn monomial(
        shape: Shape,
        rows: usize,
        cols: usize,
        i: usize,
        j: usize,
        mono: Monomial,
        coeff: BigInt,
    ) -> Result<Self> {
        if i == 0 || i > rows || j == 0 || j > cols {
            return Err(Error::OutOfRange(format!(
                "entry ({i},{j}) outside {rows}×{cols}"
            )));
        }
        let mut z = Self::zero(shape, rows, cols);
        if !coeff.is_zero() {
            z.terms.insert(TermKey { row: i, col: j, mono }, coeff);
        }
        Ok(z)
    }

    /// A single generator as a `1 × 1` element.
    pub fn letter(shape: Shape, letter: Letter) -> Result<Self> {
        letter.check(shape)?;
        let mut words = vec![ColorWord::default(); shape.t];
        let w = &mut words[letter.color - 1];
        match letter.kind {
            LetterKind::Y => w.y.push(letter.index as u8),
            LetterKind::X => w.x.push(letter.index as u8),
        }
        Self::monomial(shape, 1, 1, 1, 1, Monomial { words }, BigInt::one())
    }

    /// Builds an element from `(row, col, monomial, coeff)` terms, summing duplicates.
    pub fn from_terms<I>(shape: Shape, rows: usize, cols: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Monomial, BigInt)>,
    {
        let mut z = Self::zero(shape, rows, cols);
        for (i, j, mono, c) in terms {
            if i == 0 || i > rows || j == 0 || j > cols {
                return Err(Error::OutOfRange(format!("entry ({i},{j}) outside {rows}×{cols}")));
            }
            if mono.words.len() != shape.t {
                return Err(Error::ShapeMismatch("monomial color count".into()));
            }
            z.accumulate(TermKey { row: i, col: j, mono }, c);
        }
        Ok(z)
    }

    fn accumulate(&mut self, key: TermKey, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &BigInt)> {
        self.terms.iter()
    }

    /// The `(i, j)` entry as a `1 × 1` element.
    pub fn entry(&self, i: usize, j: usize) -> Result<RingElement> {
        if i == 0 || i > self.rows || j == 0 || j > self.cols {
            return Err(Error::OutOfRange(format!("entry ({i},{j}) outside {}×{}", self.rows, self.cols)));
        }
        let mut z = Self::zero(self.shape, 1, 1);
        for (k, c) in &self.terms {
            if k.row == i && k.col == j {
                z.terms.insert(TermKey { row: 1, col: 1, mono: k.mono.clone() }, c.clone());
            }
        }
        Ok(z)
    }

    /// Copies the `rows × cols` block starting at 1-based `(row0, col0)`.
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Result<RingElement> {
        if row0 == 0 || col0 == 0 || row0 + rows - 1 > self.rows || col0 + cols - 1 > self.cols {
            return Err(Error::OutOfRange("block outside matrix".into()));
        }
        let mut z = Self::zero(self.shape, rows, cols);
        for (k, c) in &self.terms {
            if (row0..row0 + rows).contains(&k.row) && (col0..col0 + cols).contains(&k.col) {
                z.terms.insert(
                    TermKey { row: k.row - row0 + 1, col: k.col - col0 + 1, mono: k.mono.clone() },
                    c.clone(),
                );
            }
        }
        Ok(z)
    }

    /// Places `self` inside a larger `rows × cols` zero matrix at 0-based offsets.
    pub fn embed(&self, rows: usize, cols: usize, row_off: usize, col_off: usize) -> Result<RingElement> {
        if row_off + self.rows > rows || col_off + self.cols > cols {
            return Err(Error::OutOfRange("embedding does not fit".into()));
        }
        let mut z = Self::zero(self.shape, rows, cols);
        for (k, c) in &self.terms {
            z.terms.insert(
                TermKey { row: k.row + row_off, col: k.col + col_off, mono: k.mono.clone() },
                c.clone(),
            );
        }
        Ok(z)
    }

    /// Multiplies every coefficient by the ring scalar `s` (a `1 × 1` element), on the left.
    pub fn scalar_mul(&self, s: &RingElement) -> Result<RingElement> {
        self.shape.check_same(&s.shape)?;
        if s.dims() != (1, 1) {
            return Err(Error::DimMismatch("scalar must be 1×1".into()));
        }
        let r = self.shape.r;
        let mut acc: HashMap<TermKey, BigInt> = HashMap::new();
        for (ks, cs) in &s.terms {
            for (k, c) in &self.terms {
                let coef = cs * c;
                for (neg, mono) in ks.mono.mul(&k.mono, r) {
                    let e = acc.entry(TermKey { row: k.row, col: k.col, mono }).or_insert_with(BigInt::zero);
                    if neg {
                        *e -= &coef;
                    } else {
                        *e += &coef;
                    }
                }
            }
        }
        Ok(self.with_terms(self.rows, self.cols, acc))
    }

    fn with_terms(&self, rows: usize, cols: usize, acc: HashMap<TermKey, BigInt>) -> RingElement {
        RingElement {
            shape: self.shape,
            rows,
            cols,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn add(&self, rhs: &RingElement) -> Result<RingElement> {
        self.check_same_dims(rhs)?;
        let mut z = self.clone();
        for (k, c) in &rhs.terms {
            z.accumulate(k.clone(), c.clone());
        }
        Ok(z)
    }

    pub fn sub(&self, rhs: &RingElement) -> Result<RingElement> {
        self.check_same_dims(rhs)?;
        let mut z = self.clone();
        for (k, c) in &rhs.terms {
            z.accumulate(k.clone(), -c);
        }
        Ok(z)
    }

    pub fn scale(&self, n: &BigInt) -> RingElement {
        if n.is_zero() {
            return Self::zero(self.shape, self.rows, self.cols);
        }
        RingElement {
            shape: self.shape,
            rows: self.rows,
            cols: self.cols,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * n)).collect(),
        }
    }

    /// Matrix product; `self` is `m × k`, `rhs` is `k × n`.
    pub fn mul(&self, rhs: &RingElement) -> Result<RingElement> {
        self.shape.check_same(&rhs.shape)?;
        if self.cols != rhs.rows {
            return Err(Error::DimMismatch(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let r = self.shape.r;
        let mut by_row: Vec<Vec<(&TermKey, &BigInt)>> = vec![Vec::new(); rhs.rows];
        for (k, c) in &rhs.terms {
            by_row[k.row - 1].push((k, c));
        }
        let mut acc: HashMap<TermKey, BigInt> = HashMap::new();
        for (ka, ca) in &self.terms {
            for &(kb, cb) in &by_row[ka.col - 1] {
                let coef = ca * cb;
                for (neg, mono) in ka.mono.mul(&kb.mono, r) {
                    let e = acc
                        .entry(TermKey { row: ka.row, col: kb.col, mono })
                        .or_insert_with(BigInt::zero);
                    if neg {
                        *e -= &coef;
                    } else {
                        *e += &coef;
                    }
                }
            }
        }
        Ok(self.with_terms(self.rows, rhs.cols, acc))
    }

    /// Conjugate transpose: transposes coordinates and applies the involution
    /// `y_s ↔ x_s` (reversing words) in every color.
    pub fn involute(&self) -> RingElement {
        RingElement {
            shape: self.shape,
            rows: self.cols,
            cols: self.rows,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (TermKey { row: k.col, col: k.row, mono: k.mono.involute() }, c.clone()))
                .collect(),
        }
    }

    /// Per color, the longest y-word and the longest x-word over all terms.
    pub fn degree_profile(&self) -> Result<Vec<(usize, usize)>> {
        if self.is_zero() {
            return Err(Error::NoDegree);
        }
        let mut prof = vec![(0, 0); self.shape.t];
        for k in self.terms.keys() {
            for (p, w) in prof.iter_mut().zip(&k.mono.words) {
                p.0 = p.0.max(w.y.len());
                p.1 = p.1.max(w.x.len());
            }
        }
        Ok(prof)
    }

    /// True when every coefficient is positive.
    pub fn has_positive_coefficients(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    /// If the element is a single term with coefficient `+1`, returns it.
    pub fn as_single_term(&self) -> Option<&TermKey> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        c.is_one().then_some(k)
    }

    fn check_same_dims(&self, rhs: &RingElement) -> Result<()> {
        self.shape.check_same(&rhs.shape)?;
        if self.dims() != rhs.dims() {
            return Err(Error::DimMismatch(format!(
                "{}×{} vs {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    /// Replaces every color-1 word by the same word in `color` of a wider shape.
    ///
    /// Used to move a `t = 1` element into one tensor factor of `L_r^{⊗t}`.
    pub fn relabel_into(&self, target: Shape, color: usize) -> Result<RingElement> {
        if self.shape.t != 1 || self.shape.r != target.r || color == 0 || color > target.t {
            return Err(Error::ShapeMismatch("relabel needs a t = 1 source of equal rank".into()));
        }
        let mut z = RingElement::zero(target, self.rows, self.cols);
        for (k, c) in &self.terms {
            let mut words = vec![ColorWord::default(); target.t];
            words[color - 1] = k.mono.words[0].clone();
            z.terms.insert(TermKey { row: k.row, col: k.col, mono: Monomial { words } }, c.clone());
        }
        Ok(z)
    }
}

/// Normalizes a raw signed sum of products into canonical form.
///
/// Letters are multiplied in left to right, resolving each new junction as it
/// appears (an innermost-leftmost strategy). Matrix units multiply as
/// `e_{i,k} e_{k,j} = e_{i,j}` and commute with letters; a product of several
/// units needs square `rows = cols`.
pub fn normalize(shape: Shape, rows: usize, cols: usize, raw: &[RawTerm]) -> Result<RingElement> {
    let mut out = RingElement::zero(shape, rows, cols);
    for term in raw {
        let mut unit: Option<(usize, usize)> = None;
        let mut units_seen = 0;
        let mut zero = false;
        let mut current: Vec<(BigInt, Monomial)> = vec![(term.coeff.clone(), Monomial::one(shape.t))];
        for f in &term.factors {
            match *f {
                Factor::Unit(i, j) => {
                    units_seen += 1;
                    if units_seen > 1 && rows != cols {
                        return Err(Error::DimMismatch(
                            "a product of matrix units needs a square matrix".into(),
                        ));
                    }
                    if i == 0 || i > rows || j == 0 || j > cols {
                        return Err(Error::OutOfRange(format!("e[{i},{j}] outside {rows}×{cols}")));
                    }
                    unit = match unit {
                        None => Some((i, j)),
                        Some((a, b)) if b == i => Some((a, j)),
                        Some(_) => {
                            zero = true;
                            Some((i, j))
                        }
                    };
                }
                Factor::Letter(l) => {
                    l.check(shape)?;
                    let lm = RingElement::letter(shape, l)?;
                    let (lk, _) = lm.terms.iter().next().unwrap();
                    let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
                    for (c, m) in &current {
                        for (neg, p) in m.mul(&lk.mono, shape.r) {
                            let e = acc.entry(p).or_insert_with(BigInt::zero);
                            if neg {
                                *e -= c;
                            } else {
                                *e += c;
                            }
                        }
                    }
                    current = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (c, m)).collect();
                }
            }
        }
        if zero {
            continue;
        }
        let (i, j) = match unit {
            Some(u) => u,
            None if rows == 1 && cols == 1 => (1, 1),
            None => {
                return Err(Error::DimMismatch(format!(
                    "term without a matrix unit in a {rows}×{cols} context"
                )))
            }
        };
        for (c, m) in current {
            out.accumulate(TermKey { row: i, col: j, mono: m }, c);
        }
    }
    Ok(out)
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_element(self))
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        RingElement::add(self, rhs).expect("add: shape or dimension mismatch")
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        RingElement::sub(self, rhs).expect("sub: shape or dimension mismatch")
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        RingElement::mul(self, rhs).expect("mul: shape or dimension mismatch")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.scale(&BigInt::from(-1))
    }
}
