//! The action of `tV_{r,m}` on the Cantor space `E^{(t)}_{r,m}`, germs at
//! points with eventually periodic coordinates, and Higman's count of
//! conjugacy classes of cyclic `p`-subgroups.
//!
//! A point is a row `i` and one infinite word over `[1, r]` per color. A
//! coordinate is either eventually periodic (`w·z^∞`) or an aperiodic digit
//! stream read from a fixed offset.

use std::fmt;

use num_integer::{Integer, Roots};

use crate::algebra::Shape;
use crate::error::{Error, Result};
use crate::thompson::{Leaf, LeafSet, TreePair};

/// A deterministic aperiodic sequence over `{1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stream {
    /// `1 + (popcount(n) mod 2)`.
    ThueMorse,
    /// The Fibonacci word, shifted to digits `{1, 2}`.
    Fibonacci,
}

impl Stream {
    pub fn name(self) -> &'static str {
        match self {
            Stream::ThueMorse => "tm",
            Stream::Fibonacci => "fib",
        }
    }

    pub fn from_name(s: &str) -> Option<Stream> {
        match s {
            "tm" => Some(Stream::ThueMorse),
            "fib" => Some(Stream::Fibonacci),
            _ => None,
        }
    }

    pub fn digit(self, n: u64) -> u8 {
        match self {
            Stream::ThueMorse => 1 + (n.count_ones() % 2) as u8,
            Stream::Fibonacci => {
                // floor(kφ) = floor((k + isqrt(5k²)) / 2), exactly.
                let floor_phi = |k: u64| {
                    let k = k as u128;
                    (k + (5 * k * k).sqrt()) / 2
                };
                (3 - (floor_phi(n + 2) - floor_phi(n + 1))) as u8
            }
        }
    }
}

/// One color of a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coordinate {
    /// `pre · period^∞` with a primitive period.
    Rational { pre: Vec<u8>, period: Vec<u8> },
    /// `pre` followed by the stream from `offset` on.
    Aperiodic { pre: Vec<u8>, stream: Stream, offset: u64 },
}

fn is_primitive(w: &[u8]) -> bool {
    let n = w.len();
    (1..n).filter(|d| n.is_multiple_of(*d)).all(|d| w.chunks(d).any(|c| c != &w[..d]))
}

impl Coordinate {
    /// Fails if the period is empty or a proper power.
    pub fn rational(pre: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::MalformedPoint("empty period".into()));
        }
        if !is_primitive(&period) {
            return Err(Error::MalformedPoint(format!("period {} is a proper power", digits(&period))));
        }
        Ok(Coordinate::Rational { pre, period }.canonical())
    }

    pub fn aperiodic(pre: Vec<u8>, stream: Stream, offset: u64) -> Self {
        Coordinate::Aperiodic { pre, stream, offset }.canonical()
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Coordinate::Rational { .. })
    }

    /// The `n`-th digit (0-based).
    pub fn digit(&self, n: usize) -> u8 {
        match self {
            Coordinate::Rational { pre, period } => {
                if n < pre.len() {
                    pre[n]
                } else {
                    period[(n - pre.len()) % period.len()]
                }
            }
            Coordinate::Aperiodic { pre, stream, offset } => {
                if n < pre.len() {
                    pre[n]
                } else {
                    stream.digit(offset + (n - pre.len()) as u64)
                }
            }
        }
    }

    pub fn has_prefix(&self, w: &[u8]) -> bool {
        w.iter().enumerate().all(|(n, &d)| self.digit(n) == d)
    }

    /// Removes the first `k` digits.
    pub fn drop_prefix(&self, k: usize) -> Coordinate {
        match self {
            Coordinate::Rational { pre, period } => {
                if k <= pre.len() {
                    return Coordinate::Rational { pre: pre[k..].to_vec(), period: period.clone() };
                }
                let shift = (k - pre.len()) % period.len();
                let mut p = period.clone();
                p.rotate_left(shift);
                Coordinate::Rational { pre: Vec::new(), period: p }
            }
            Coordinate::Aperiodic { pre, stream, offset } => {
                if k <= pre.len() {
                    return Coordinate::Aperiodic { pre: pre[k..].to_vec(), stream: *stream, offset: *offset };
                }
                Coordinate::Aperiodic { pre: Vec::new(), stream: *stream, offset: offset + (k - pre.len()) as u64 }
            }
        }
    }

    pub fn prepend(&self, w: &[u8]) -> Coordinate {
        let mut c = self.clone();
        match &mut c {
            Coordinate::Rational { pre, .. } | Coordinate::Aperiodic { pre, .. } => {
                pre.splice(0..0, w.iter().copied());
            }
        }
        c.canonical()
    }

    /// Shortest pre-period: digits that repeat the tail are folded into it.
    fn canonical(mut self) -> Coordinate {
        match &mut self {
            Coordinate::Rational { pre, period } => {
                while pre.last().is_some() && pre.last() == period.last() {
                    pre.pop();
                    period.rotate_right(1);
                }
            }
            Coordinate::Aperiodic { pre, stream, offset } => {
                while *offset > 0 && pre.last() == Some(&stream.digit(*offset - 1)) {
                    pre.pop();
                    *offset -= 1;
                }
            }
        }
        self
    }

    fn max_digit(&self) -> u8 {
        match self {
            Coordinate::Rational { pre, period } => pre.iter().chain(period).copied().max().unwrap_or(1),
            Coordinate::Aperiodic { pre, .. } => pre.iter().copied().max().unwrap_or(1).max(2),
        }
    }

    fn min_digit(&self) -> u8 {
        match self {
            Coordinate::Rational { pre, period } => pre.iter().chain(period).copied().min().unwrap_or(1),
            Coordinate::Aperiodic { pre, .. } => pre.iter().copied().min().unwrap_or(1).min(1),
        }
    }
}

fn digits(w: &[u8]) -> String {
    w.iter().map(|d| char::from(b'0' + d)).collect()
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coordinate::Rational { pre, period } => write!(f, "{}|{}", digits(pre), digits(period)),
            Coordinate::Aperiodic { pre, stream, offset } => {
                write!(f, "{}~{}@{}", digits(pre), stream.name(), offset)
            }
        }
    }
}

/// A point `e_{row,1}·β_1⋯β_t` of the Cantor space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub row: usize,
    pub coords: Vec<Coordinate>,
}

impl Point {
    pub fn new(row: usize, coords: Vec<Coordinate>) -> Self {
        Point { row, coords }
    }

    /// Checks the row, the number of colors, and that digits lie in `[1, r]`.
    pub fn check(&self, m: usize, shape: Shape) -> Result<()> {
        if self.row == 0 || self.row > m {
            return Err(Error::MalformedPoint(format!("row {} not in [1, {m}]", self.row)));
        }
        if self.coords.len() != shape.t() {
            return Err(Error::MalformedPoint(format!(
                "{} coordinates for t = {}",
                self.coords.len(),
                shape.t()
            )));
        }
        for c in &self.coords {
            if c.min_digit() == 0 || c.max_digit() as usize > shape.r() {
                return Err(Error::MalformedPoint(format!("coordinate {c} uses digits outside [1, {}]", shape.r())));
            }
        }
        Ok(())
    }

    /// Parses `pt(i; w|z, ~tm@k, …)`; digits are single characters `1`–`9`.
    pub fn parse(s: &str) -> Result<Point> {
        let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg} in point {s:?}") };
        let body = s
            .trim()
            .strip_prefix("pt(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| bad("expected pt( … )"))?;
        let (row, rest) = body.split_once(';').ok_or_else(|| bad("expected ';' after the row"))?;
        let row: usize = row.trim().parse().map_err(|_| bad("bad row"))?;
        let word = |w: &str| -> Result<Vec<u8>> {
            w.chars()
                .map(|c| match c.to_digit(10) {
                    Some(d) if d > 0 => Ok(d as u8),
                    _ => Err(bad("digits must be 1-9")),
                })
                .collect()
        };
        let mut coords = Vec::new();
        for part in rest.split(',') {
            let part = part.trim();
            if let Some((pre, tail)) = part.split_once('~') {
                let (name, off) = tail.split_once('@').ok_or_else(|| bad("expected ~name@offset"))?;
                let stream = Stream::from_name(name.trim()).ok_or_else(|| bad("unknown stream"))?;
                let offset: u64 = off.trim().parse().map_err(|_| bad("bad offset"))?;
                coords.push(Coordinate::aperiodic(word(pre.trim())?, stream, offset));
            } else if let Some((pre, per)) = part.split_once('|') {
                coords.push(Coordinate::rational(word(pre.trim())?, word(per.trim())?)?);
            } else {
                return Err(bad("expected w|z or ~name@k"));
            }
        }
        Ok(Point { row, coords })
    }

    pub fn rational_colors(&self) -> Vec<usize> {
        (1..=self.coords.len()).filter(|&c| self.coords[c - 1].is_rational()).collect()
    }

    pub fn lies_under(&self, leaf: &Leaf) -> bool {
        leaf.row == self.row && leaf.words.iter().zip(&self.coords).all(|(w, c)| c.has_prefix(w))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "pt({}; {})", self.row, cs.join(", "))
    }
}

/// Index of the pair whose range leaf lies over `nu`.
fn covering_pair(g: &TreePair, nu: &Point) -> Result<usize> {
    nu.check(g.m(), g.shape())?;
    g.range()
        .iter()
        .position(|b| nu.lies_under(b))
        .ok_or_else(|| Error::MalformedPoint(format!("no range leaf lies over {nu}")))
}

/// `g·ν`: strip the range leaf `b` over `ν` and prepend its partner.
pub fn act(g: &TreePair, nu: &Point) -> Result<Point> {
    let k = covering_pair(g, nu)?;
    let (a, b) = (&g.domain()[k], &g.range()[k]);
    let coords = nu
        .coords
        .iter()
        .enumerate()
        .map(|(c, x)| x.drop_prefix(b.words[c].len()).prepend(&a.words[c]))
        .collect();
    Ok(Point { row: a.row, coords })
}

/// The image of `g` in `Z^n`, one entry per rational color of `ν`:
/// `(ℓ-length of the domain leaf − ℓ-length of the range leaf) / |z_ℓ|`.
pub fn germ(g: &TreePair, nu: &Point) -> Result<Vec<i64>> {
    if act(g, nu)? != *nu {
        return Err(Error::NotFixed);
    }
    let k = covering_pair(g, nu)?;
    let (a, b) = (&g.domain()[k], &g.range()[k]);
    let mut out = Vec::new();
    for color in nu.rational_colors() {
        let Coordinate::Rational { pre, period } = &nu.coords[color - 1] else { unreachable!() };
        let (la, lb) = (a.length(color), b.length(color));
        // Pushing both leaves the same distance toward ν past the pre-period
        // leaves the difference unchanged; inside the tail it must be a
        // multiple of the primitive period.
        let reach = pre.len().saturating_sub(la.min(lb));
        let (la, lb) = ((la + reach) as i64, (lb + reach) as i64);
        let p = period.len() as i64;
        if (la - lb) % p != 0 {
            return Err(Error::VerificationFailed(format!("color {color}: leaves are not aligned in the period")));
        }
        out.push((la - lb) / p);
    }
    Ok(out)
}

/// Number of eventually periodic coordinates of `ν`.
pub fn germ_rank(nu: &Point) -> usize {
    nu.rational_colors().len()
}

/// A basis of `m` roots expanded along every prefix of `leaf`, one color at a time.
fn basis_through(m: usize, shape: Shape, leaf: &Leaf) -> Result<LeafSet> {
    let mut set = LeafSet::root_basis(m, shape);
    let mut cur = Leaf::root(leaf.row, shape.t());
    for (c, w) in leaf.words.iter().enumerate() {
        for &d in w {
            set = set.expand(&cur, c + 1)?;
            cur = cur.child(c + 1, d);
        }
    }
    Ok(set)
}

/// Grows `set` by expanding its first leaf other than `keep` `times` times.
fn pad(mut set: LeafSet, keep: &Leaf, times: usize) -> Result<LeafSet> {
    for _ in 0..times {
        let other = set
            .iter()
            .find(|l| *l != keep)
            .cloned()
            .ok_or_else(|| Error::InvalidParameter("no leaf available to expand".into()))?;
        set = set.expand(&other, 1)?;
    }
    Ok(set)
}

/// A tree pair with `a ↦ b` as one of its pairs; the remaining leaves are
/// matched in sorted order.
pub fn prefix_replacement(m: usize, shape: Shape, a: &Leaf, b: &Leaf) -> Result<TreePair> {
    let mut dom = basis_through(m, shape, a)?;
    let mut ran = basis_through(m, shape, b)?;
    let step = shape.r() - 1;
    if dom.len() < ran.len() {
        let times = (ran.len() - dom.len()) / step;
        dom = pad(dom, a, times)?;
    } else {
        let times = (dom.len() - ran.len()) / step;
        ran = pad(ran, b, times)?;
    }
    let mut domain = vec![a.clone()];
    let mut range = vec![b.clone()];
    domain.extend(dom.iter().filter(|l| *l != a).cloned());
    range.extend(ran.iter().filter(|l| *l != b).cloned());
    TreePair::new(m, shape, domain, range)
}

/// An element fixing `ν` whose germ is `+1` in the `index`-th rational color
/// (0-based) and `0` elsewhere: it maps `w z` to `w z z` there.
pub fn shift_element(m: usize, shape: Shape, nu: &Point, index: usize) -> Result<TreePair> {
    nu.check(m, shape)?;
    let colors = nu.rational_colors();
    let color = *colors
        .get(index)
        .ok_or_else(|| Error::OutOfRange(format!("point has {} rational colors", colors.len())))?;
    let Coordinate::Rational { pre, period } = &nu.coords[color - 1] else { unreachable!() };
    let mut b = Leaf::root(nu.row, shape.t());
    b.words[color - 1] = [pre.as_slice(), period].concat();
    let mut a = b.clone();
    a.words[color - 1].extend_from_slice(period);
    prefix_replacement(m, shape, &a, &b)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn valuation(p: u64, mut n: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn check_cc(p: u64, a: u32, r: u64, m: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
    }
    if a == 0 || r < 2 || m == 0 {
        return Err(Error::InvalidParameter("need a ≥ 1, r ≥ 2, m ≥ 1".into()));
    }
    Ok(())
}

/// Number of `n ∈ [0, r-1]^{a+1}`, not all zero, with
/// `Σ n_j p^j ≡ m (mod r-1)`.
pub fn cc_count(p: u64, a: u32, r: u64, m: u64) -> Result<u64> {
    check_cc(p, a, r, m)?;
    let modulus = r - 1;
    let len = a as usize + 1;
    let mut n = vec![0u64; len];
    let mut count = 0u64;
    loop {
        // Next sequence in base r, little-endian.
        let mut i = 0;
        while i < len && n[i] == r - 1 {
            n[i] = 0;
            i += 1;
        }
        if i == len {
            break;
        }
        n[i] += 1;
        let sum = n.iter().rev().fold(0u64, |acc, &d| (acc * p + d) % modulus);
        if sum == m % modulus {
            count += 1;
        }
    }
    Ok(count)
}

/// Higman's closed forms: `Σ_{i=0}^{b} p^i r^{a-i}` when `p^a` exactly
/// divides `r-1` (with `p^b` the part of `gcd(m, r-1)`), and
/// `Σ_{i=0}^{a} r^{a-i}` when `p ∤ r-1`.
pub fn cc_closed_form(p: u64, a: u32, r: u64, m: u64) -> Result<u64> {
    check_cc(p, a, r, m)?;
    let v = valuation(p, r - 1);
    let top = if v == a {
        valuation(p, m.gcd(&(r - 1)))
    } else if v == 0 {
        a
    } else {
        return Err(Error::HypothesisViolated(format!(
            "p^{v} is the exact power of p = {p} dividing r-1 = {}, but a = {a}; use cc_count",
            r - 1
        )));
    };
    let coef = |i: u32| if v == 0 { 1 } else { p.pow(i) };
    Ok((0..=top).map(|i| coef(i) * r.pow(a - i)).sum())
}
