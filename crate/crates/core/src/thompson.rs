//! The Brin-Higman-Thompson group `tV_{r,m}` as tree pairs over colored
//! leaves, and the dictionary with positive unitary matrices.
//!
//! A leaf is the monomial `e_{row,1}·b_1⋯b_t` with `b_ℓ` a word in the
//! `y_{ℓ,·}`. A tree pair is a positional bijection `domain[k] ↦ range[k]`
//! between two bases; it maps to the matrix `Σ a·(a^φ)*`.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, RingElement, Shape};
use crate::error::{Error, Result};
use crate::matrices::is_unitary;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Leaf {
    pub row: usize,
    pub words: Vec<Vec<u8>>,
}

impl Leaf {
    pub fn root(row: usize, t: usize) -> Self {
        Leaf { row, words: vec![Vec::new(); t] }
    }

    /// The child `self·y_{color,k}`.
    pub fn child(&self, color: usize, k: u8) -> Leaf {
        let mut c = self.clone();
        c.words[color - 1].push(k);
        c
    }

    /// Length of the word in `color` (1-based).
    pub fn length(&self, color: usize) -> usize {
        self.words[color - 1].len()
    }

    /// True when `self` is a prefix of `other` in every color.
    pub fn is_prefix_of(&self, other: &Leaf) -> bool {
        self.row == other.row
            && self.words.iter().zip(&other.words).all(|(a, b)| b.starts_with(a))
    }

    fn monomial(&self, shape: Shape) -> Result<Monomial> {
        Monomial::from_y_words(shape, &self.words)
    }

    /// The leaf as an `m × 1` matrix.
    pub fn to_element(&self, shape: Shape, m: usize) -> Result<RingElement> {
        RingElement::monomial(shape, m, 1, self.row, 1, self.monomial(shape)?, BigInt::one())
    }

    fn check(&self, m: usize, shape: Shape) -> Result<()> {
        if self.row == 0 || self.row > m {
            return Err(Error::OutOfRange(format!("leaf row {} not in [1, {m}]", self.row)));
        }
        if self.words.len() != shape.t() {
            return Err(Error::ShapeMismatch(format!(
                "leaf has {} colors, expected {}",
                self.words.len(),
                shape.t()
            )));
        }
        if self.words.iter().flatten().any(|&k| k == 0 || k as usize > shape.r()) {
            return Err(Error::OutOfRange(format!("leaf letter outside [1, {}]", shape.r())));
        }
        Ok(())
    }
}

/// A finite set of leaves over `m` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafSet {
    m: usize,
    shape: Shape,
    leaves: BTreeSet<Leaf>,
}

impl LeafSet {
    /// Fails on out-of-range leaves or duplicates.
    pub fn new(m: usize, shape: Shape, leaves: Vec<Leaf>) -> Result<Self> {
        let n = leaves.len();
        for l in &leaves {
            l.check(m, shape)?;
        }
        let set: BTreeSet<Leaf> = leaves.into_iter().collect();
        if set.len() != n {
            return Err(Error::InvalidParameter("duplicate leaves".into()));
        }
        Ok(LeafSet { m, shape, leaves: set })
    }

    /// The `m` empty leaves `e_{i,1}`.
    pub fn root_basis(m: usize, shape: Shape) -> Self {
        LeafSet { m, shape, leaves: (1..=m).map(|i| Leaf::root(i, shape.t())).collect() }
    }

    /// All `m·r^{Σd}` leaves whose color-ℓ length is exactly `degrees[ℓ-1]`.
    pub fn multi_homogeneous(m: usize, shape: Shape, degrees: &[usize]) -> Result<Self> {
        if degrees.len() != shape.t() {
            return Err(Error::ShapeMismatch("one degree per color is required".into()));
        }
        let mut leaves: Vec<Leaf> = (1..=m).map(|i| Leaf::root(i, shape.t())).collect();
        for (c, &d) in degrees.iter().enumerate() {
            for _ in 0..d {
                leaves = leaves
                    .iter()
                    .flat_map(|l| (1..=shape.r() as u8).map(move |k| l.child(c + 1, k)))
                    .collect();
            }
        }
        Ok(LeafSet { m, shape, leaves: leaves.into_iter().collect() })
    }

    /// Parses a JSON list of `{"row": i, "words": [[…], …]}` records.
    pub fn from_json(m: usize, shape: Shape, s: &str) -> Result<Self> {
        let leaves: Vec<Leaf> =
            serde_json::from_str(s).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })?;
        Self::new(m, shape, leaves)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn contains(&self, a: &Leaf) -> bool {
        self.leaves.contains(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Leaf> {
        self.leaves.iter()
    }

    /// Replaces `a` by its `r` children in `color`.
    pub fn expand(&self, a: &Leaf, color: usize) -> Result<LeafSet> {
        if color == 0 || color > self.shape.t() {
            return Err(Error::OutOfRange(format!("color {color} not in [1, {}]", self.shape.t())));
        }
        if !self.leaves.contains(a) {
            return Err(Error::LeafNotFound(format!("{a:?}")));
        }
        let mut leaves = self.leaves.clone();
        leaves.remove(a);
        for k in 1..=self.shape.r() as u8 {
            leaves.insert(a.child(color, k));
        }
        Ok(LeafSet { leaves, ..self.clone() })
    }

    /// `Σ a·a* = I_m` and `a*·b = 0` for distinct `a, b`, computed symbolically.
    pub fn is_unitary_set(&self) -> bool {
        let elems: Vec<RingElement> = match self.leaves.iter().map(|l| l.to_element(self.shape, self.m)).collect() {
            Ok(v) => v,
            Err(_) => return false,
        };
        let mut sum = RingElement::zero(self.shape, self.m, self.m);
        for a in &elems {
            sum = &sum + &(a * &a.involute());
        }
        if sum != RingElement::identity(self.shape, self.m) {
            return false;
        }
        for (i, a) in elems.iter().enumerate() {
            let a_star = a.involute();
            for b in &elems[i + 1..] {
                if !(&a_star * b).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Reachability from the root basis by expansions.
    ///
    /// For `t ≤ 2` unitary sets and bases coincide, so the unitary test is
    /// used; otherwise this runs [`LeafSet::is_basis_search`].
    pub fn is_basis(&self) -> bool {
        if self.shape.t() <= 2 {
            return self.is_unitary_set();
        }
        self.is_basis_search()
    }

    /// Backtracking collapse: repeatedly replace a complete sibling family
    /// `{a·y_{ℓ,k} : k}` by `a`, succeeding when the root basis is reached.
    /// Visited sets are memoized.
    pub fn is_basis_search(&self) -> bool {
        let r = self.shape.r();
        if self.len() < self.m || !(self.len() - self.m).is_multiple_of(r - 1) {
            return false;
        }
        let root = LeafSet::root_basis(self.m, self.shape).leaves;
        let mut visited = HashSet::new();
        collapse_search(&self.leaves, &root, r, &mut visited)
    }
}

fn collapse_search(
    set: &BTreeSet<Leaf>,
    root: &BTreeSet<Leaf>,
    r: usize,
    visited: &mut HashSet<BTreeSet<Leaf>>,
) -> bool {
    if set == root {
        return true;
    }
    if !visited.insert(set.clone()) {
        return false;
    }
    for leaf in set {
        for (c, w) in leaf.words.iter().enumerate() {
            if w.last() != Some(&1) {
                continue;
            }
            let mut parent = leaf.clone();
            parent.words[c].pop();
            let family: Vec<Leaf> = (1..=r as u8).map(|k| parent.child(c + 1, k)).collect();
            if family.iter().all(|f| set.contains(f)) && !set.contains(&parent) {
                let mut next = set.clone();
                for f in &family {
                    next.remove(f);
                }
                next.insert(parent);
                if collapse_search(&next, root, r, visited) {
                    return true;
                }
            }
        }
    }
    false
}

/// Tuning for [`TreePair::from_matrix`].
#[derive(Clone, Copy, Debug)]
pub struct FromMatrixOptions {
    /// How many times every degree may be raised by one before giving up.
    pub max_extra_levels: usize,
}

impl Default for FromMatrixOptions {
    fn default() -> Self {
        FromMatrixOptions { max_extra_levels: 4 }
    }
}

/// A bijection between two bases, stored positionally and sorted by domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePair {
    m: usize,
    shape: Shape,
    domain: Vec<Leaf>,
    range: Vec<Leaf>,
}

#[derive(Serialize, Deserialize)]
struct TreePairRecord {
    m: usize,
    r: usize,
    t: usize,
    domain: Vec<Leaf>,
    range: Vec<Leaf>,
}

impl TreePair {
    /// Validates sizes and that both sides are bases.
    pub fn new(m: usize, shape: Shape, domain: Vec<Leaf>, range: Vec<Leaf>) -> Result<Self> {
        if domain.len() != range.len() {
            return Err(Error::InvalidParameter(format!(
                "domain has {} leaves, range has {}",
                domain.len(),
                range.len()
            )));
        }
        for (side, leaves) in [("domain", &domain), ("range", &range)] {
            let set = LeafSet::new(m, shape, leaves.clone())?;
            if !set.is_basis() {
                return Err(Error::NotABasis(format!("{side} is not a basis")));
            }
        }
        Ok(Self::from_parts(m, shape, domain, range))
    }

    fn from_parts(m: usize, shape: Shape, domain: Vec<Leaf>, range: Vec<Leaf>) -> Self {
        let mut pairs: Vec<(Leaf, Leaf)> = domain.into_iter().zip(range).collect();
        pairs.sort();
        let (domain, range) = pairs.into_iter().unzip();
        TreePair { m, shape, domain, range }
    }

    pub fn identity(m: usize, shape: Shape) -> Self {
        let root: Vec<Leaf> = LeafSet::root_basis(m, shape).leaves.into_iter().collect();
        TreePair { m, shape, domain: root.clone(), range: root }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn domain(&self) -> &[Leaf] {
        &self.domain
    }

    pub fn range(&self) -> &[Leaf] {
        &self.range
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Leaf, &Leaf)> {
        self.domain.iter().zip(&self.range)
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn inverse(&self) -> TreePair {
        Self::from_parts(self.m, self.shape, self.range.clone(), self.domain.clone())
    }

    /// Expands the pair `(a, b)` whose range leaf is `b` in `color`, mirroring
    /// the expansion on the domain side.
    pub fn expand_at_range(&self, b: &Leaf, color: usize) -> Result<TreePair> {
        if color == 0 || color > self.shape.t() {
            return Err(Error::OutOfRange(format!("color {color} not in [1, {}]", self.shape.t())));
        }
        let idx = self
            .range
            .iter()
            .position(|x| x == b)
            .ok_or_else(|| Error::LeafNotFound(format!("{b:?}")))?;
        let mut domain = self.domain.clone();
        let mut range = self.range.clone();
        let a = domain.swap_remove(idx);
        range.swap_remove(idx);
        for k in 1..=self.shape.r() as u8 {
            domain.push(a.child(color, k));
            range.push(b.child(color, k));
        }
        Ok(Self::from_parts(self.m, self.shape, domain, range))
    }

    /// Per color, the longest range word.
    pub fn range_degrees(&self) -> Vec<usize> {
        max_lengths(&self.range, self.shape.t())
    }

    pub fn domain_degrees(&self) -> Vec<usize> {
        max_lengths(&self.domain, self.shape.t())
    }

    /// Expands until the range is the full multi-homogeneous basis of degree `degrees`.
    pub fn multi_homogenize(&self, degrees: &[usize]) -> Result<TreePair> {
        let t = self.shape.t();
        if degrees.len() != t {
            return Err(Error::ShapeMismatch("one degree per color is required".into()));
        }
        let have = self.range_degrees();
        if let Some(c) = (0..t).find(|&c| degrees[c] < have[c]) {
            return Err(Error::DegreeTooSmall(format!(
                "color {} needs degree at least {}, got {}",
                c + 1,
                have[c],
                degrees[c]
            )));
        }
        let r = self.shape.r() as u8;
        let mut pairs: Vec<(Leaf, Leaf)> = self.domain.iter().cloned().zip(self.range.iter().cloned()).collect();
        for (c, &d) in degrees.iter().enumerate() {
            let color = c + 1;
            let mut next = Vec::with_capacity(pairs.len());
            let mut stack = pairs;
            while let Some((a, b)) = stack.pop() {
                if b.length(color) >= d {
                    next.push((a, b));
                } else {
                    for k in 1..=r {
                        stack.push((a.child(color, k), b.child(color, k)));
                    }
                }
            }
            pairs = next;
        }
        let (domain, range) = pairs.into_iter().unzip();
        Ok(Self::from_parts(self.m, self.shape, domain, range))
    }

    fn check_compatible(&self, other: &TreePair) -> Result<()> {
        if self.m != other.m || self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!(
                "tree pairs over (m={}, r={}, t={}) and (m={}, r={}, t={})",
                self.m,
                self.shape.r(),
                self.shape.t(),
                other.m,
                other.shape.r(),
                other.shape.t()
            )));
        }
        Ok(())
    }

    /// `self` followed by `other` (so `α(compose(g, h)) = α(g)·α(h)`).
    ///
    /// Each range leaf of `self` is split, together with its partner, until
    /// every piece lies under a single domain leaf of `other`. The pieces form
    /// a basis refining both middle bases, so it is reachable from each of
    /// them and both pairs can be expanded to it. This stays local, unlike
    /// expanding both sides to a common multi-homogeneous degree.
    pub fn compose(&self, other: &TreePair) -> Result<TreePair> {
        self.check_compatible(other)?;
        let mut by_row: HashMap<usize, Vec<(&Leaf, &Leaf)>> = HashMap::new();
        for (c, e) in other.pairs() {
            by_row.entry(c.row).or_default().push((c, e));
        }
        let r = self.shape.r() as u8;
        let (mut domain, mut range) = (Vec::new(), Vec::new());
        let mut stack: Vec<(Leaf, Leaf)> = self.pairs().map(|(a, b)| (a.clone(), b.clone())).collect();
        while let Some((a, p)) = stack.pop() {
            let candidates = by_row.get(&p.row).map(Vec::as_slice).unwrap_or(&[]);
            let mut split = None;
            let mut image = None;
            for &(c, e) in candidates {
                if !overlaps(c, &p) {
                    continue;
                }
                if c.is_prefix_of(&p) {
                    image = Some((c, e));
                    break;
                }
                split = (0..p.words.len()).find(|&l| c.words[l].len() > p.words[l].len());
            }
            match (image, split) {
                (Some((c, e)), _) => {
                    let mut img = e.clone();
                    for (l, w) in img.words.iter_mut().enumerate() {
                        w.extend_from_slice(&p.words[l][c.words[l].len()..]);
                    }
                    domain.push(a);
                    range.push(img);
                }
                (None, Some(l)) => {
                    for k in 1..=r {
                        stack.push((a.child(l + 1, k), p.child(l + 1, k)));
                    }
                }
                (None, None) => return Err(Error::VerificationFailed("middle bases do not cover each other".into())),
            }
        }
        Ok(Self::from_parts(self.m, self.shape, domain, range))
    }

    /// Group equality, decided through the injective map to matrices.
    pub fn equals(&self, other: &TreePair) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.to_matrix() == other.to_matrix())
    }

    /// `Σ_{a ∈ domain} a·(a^φ)*` in normal form.
    pub fn to_matrix(&self) -> RingElement {
        let r = self.shape.r();
        let mut terms = Vec::with_capacity(self.len());
        for (a, b) in self.pairs() {
            let ma = a.monomial(self.shape).expect("validated leaf");
            let mb = b.monomial(self.shape).expect("validated leaf").involute();
            for (neg, mono) in ma.mul(&mb, r) {
                let c = if neg { -BigInt::one() } else { BigInt::one() };
                terms.push((a.row, b.row, mono, c));
            }
        }
        RingElement::from_terms(self.shape, self.m, self.m, terms).expect("validated leaves")
    }

    /// Recovers a tree pair from a positive unitary matrix.
    ///
    /// Seeds the degree with the longest y- and x-words of `u`, then looks for
    /// a full multi-homogeneous basis `A_d` that `u` maps leaf-to-leaf. Each
    /// failed attempt raises every degree by one, up to
    /// `opts.max_extra_levels` times.
    pub fn from_matrix(u: &RingElement, opts: FromMatrixOptions) -> Result<TreePair> {
        let shape = u.shape();
        let (m, n) = u.dims();
        if m != n {
            return Err(Error::DimMismatch(format!("expected a square matrix, got {m}×{n}")));
        }
        if !is_unitary(u).is_unitary() {
            return Err(Error::NotUnitary("u·u* or u*·u is not the identity".into()));
        }
        let seed: Vec<usize> = u.degree_profile()?.into_iter().map(|(y, x)| y.max(x)).collect();
        for extra in 0..=opts.max_extra_levels {
            let d: Vec<usize> = seed.iter().map(|&s| s + extra).collect();
            if let Some(g) = Self::try_degree(u, m, shape, &d)? {
                return Ok(g);
            }
        }
        Err(Error::NotPositiveUnitary { extra_levels: opts.max_extra_levels })
    }

    fn try_degree(u: &RingElement, m: usize, shape: Shape, d: &[usize]) -> Result<Option<TreePair>> {
        let basis = LeafSet::multi_homogeneous(m, shape, d)?;
        let mut by_col: Vec<Vec<(usize, &Monomial, &BigInt)>> = vec![Vec::new(); m];
        for (k, c) in u.terms() {
            by_col[k.col - 1].push((k.row, &k.mono, c));
        }
        let mut domain = Vec::with_capacity(basis.len());
        let mut range = Vec::with_capacity(basis.len());
        for c in basis.iter() {
            let cm = c.monomial(shape)?;
            let mut acc: HashMap<(usize, Monomial), BigInt> = HashMap::new();
            for &(row, mono, coef) in &by_col[c.row - 1] {
                for (neg, p) in mono.mul(&cm, shape.r()) {
                    let e = acc.entry((row, p)).or_default();
                    if neg {
                        *e -= coef;
                    } else {
                        *e += coef;
                    }
                }
            }
            acc.retain(|_, v| *v != BigInt::default());
            if acc.len() != 1 {
                return Ok(None);
            }
            let ((row, mono), coef) = acc.into_iter().next().unwrap();
            if !coef.is_one() || mono.words().iter().any(|w| !w.x.is_empty()) {
                return Ok(None);
            }
            domain.push(Leaf { row, words: mono.words().iter().map(|w| w.y.clone()).collect() });
            range.push(c.clone());
        }
        // a_c* a_c' = c* u* u c' = δ and Σ a_c a_c* = u u* = 1, so unitarity of
        // u already makes the images a unitary set. They are moreover the
        // domain leaves of some tree pair pushed down to depth, hence a basis.
        // Distinctness and the final round trip are the remaining checks.
        let distinct: std::collections::HashSet<&Leaf> = domain.iter().collect();
        if distinct.len() != domain.len() {
            return Ok(None);
        }
        let g = Self::from_parts(m, shape, domain, range);
        let dd = g.domain_degrees();
        let g = g.inverse().multi_homogenize(&dd)?.inverse();
        if g.to_matrix() != *u {
            return Err(Error::VerificationFailed("recovered tree pair does not reproduce u".into()));
        }
        Ok(Some(g))
    }

    pub fn to_json(&self) -> String {
        let rec = TreePairRecord {
            m: self.m,
            r: self.shape.r(),
            t: self.shape.t(),
            domain: self.domain.clone(),
            range: self.range.clone(),
        };
        serde_json::to_string(&rec).expect("tree pair serializes")
    }

    /// Parses the JSON record and validates it with [`TreePair::new`].
    pub fn from_json(s: &str) -> Result<TreePair> {
        let rec: TreePairRecord = serde_json::from_str(s).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: e.to_string(),
        })?;
        let shape = Shape::new(rec.r, rec.t)?;
        TreePair::new(rec.m, shape, rec.domain, rec.range)
    }
}

/// True when the shadows of `a` and `b` meet: same row and, in every color,
/// one word is a prefix of the other.
fn overlaps(a: &Leaf, b: &Leaf) -> bool {
    a.row == b.row
        && a.words.iter().zip(&b.words).all(|(x, y)| x.starts_with(y) || y.starts_with(x))
}

fn max_lengths(leaves: &[Leaf], t: usize) -> Vec<usize> {
    (1..=t).map(|c| leaves.iter().map(|l| l.length(c)).max().unwrap_or(0)).collect()
}
