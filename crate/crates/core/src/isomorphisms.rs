//! Constructive isomorphisms between matrix rings over `L_r^{⊗t}`.
//!
//! A [`Homomorphism`] is a finite table: images of the matrix units
//! `e_{i,1}`, `e_{1,j}` and of the corner scalars `y_{ℓ,s}·e_{1,1}`. It is
//! applied by structural recursion over terms and letters, and it can be
//! checked against the defining relations with [`verify_hom`].

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::algebra::{Letter, LetterKind, RingElement, Shape};
use crate::error::{Error, Result};
use crate::matrices::{direct_sum, row_of_y};

/// Least positive `u` with `u·m1 ≡ m2 (mod s)` and `gcd(u, s) = 1`.
///
/// For `s = 0` the congruence is equality, so the answer is `±1`.
pub fn kaplansky_unit(m1: i64, m2: i64, s: i64) -> Result<i64> {
    if m1.gcd(&s) != m2.gcd(&s) {
        return Err(Error::Precondition(format!(
            "gcd({m1}, {s}) = {} differs from gcd({m2}, {s}) = {}",
            m1.gcd(&s),
            m2.gcd(&s)
        )));
    }
    let s = s.abs();
    if s == 0 {
        return Ok(if m1 == m2 { 1 } else { -1 });
    }
    (1..=2 * s)
        .find(|&u| (u * m1 - m2).rem_euclid(s) == 0 && u.gcd(&s) == 1)
        .ok_or_else(|| Error::VerificationFailed(format!("no unit found for ({m1}, {m2}, {s})")))
}

/// A ring homomorphism `Mat_{m1}(L_r^{⊗t1}) → Mat_{m2}(L_r^{⊗t2})` given by
/// generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    src_m: usize,
    src_shape: Shape,
    dst_m: usize,
    dst_shape: Shape,
    col_units: Vec<RingElement>,
    row_units: Vec<RingElement>,
    corners: Vec<Vec<RingElement>>,
}

impl Homomorphism {
    /// `col_units[i-1]` is the image of `e_{i,1}`, `row_units[j-1]` that of
    /// `e_{1,j}`, and `corners[ℓ-1][s-1]` that of `y_{ℓ,s}·e_{1,1}`.
    pub fn new(
        src: (usize, Shape),
        dst: (usize, Shape),
        col_units: Vec<RingElement>,
        row_units: Vec<RingElement>,
        corners: Vec<Vec<RingElement>>,
    ) -> Result<Self> {
        let (src_m, src_shape) = src;
        let (dst_m, dst_shape) = dst;
        if src_shape.r() != dst_shape.r() {
            return Err(Error::ShapeMismatch("source and target rank differ".into()));
        }
        if col_units.len() != src_m || row_units.len() != src_m {
            return Err(Error::DimMismatch(format!("expected {src_m} unit images per side")));
        }
        if corners.len() != src_shape.t() || corners.iter().any(|c| c.len() != src_shape.r()) {
            return Err(Error::DimMismatch("expected one corner image per letter".into()));
        }
        let all = col_units.iter().chain(&row_units).chain(corners.iter().flatten());
        for e in all {
            if e.shape() != dst_shape {
                return Err(Error::ShapeMismatch("image over the wrong ring".into()));
            }
            if e.dims() != (dst_m, dst_m) {
                return Err(Error::DimMismatch(format!(
                    "image is {}×{}, expected {dst_m}×{dst_m}",
                    e.rows(),
                    e.cols()
                )));
            }
        }
        Ok(Homomorphism { src_m, src_shape, dst_m, dst_shape, col_units, row_units, corners })
    }

    /// Tabulates a map given as a function on elements.
    pub fn from_fn<F>(src: (usize, Shape), dst: (usize, Shape), f: F) -> Result<Self>
    where
        F: Fn(&RingElement) -> Result<RingElement>,
    {
        let (m, shape) = src;
        let mut col = Vec::with_capacity(m);
        let mut row = Vec::with_capacity(m);
        for i in 1..=m {
            col.push(f(&RingElement::unit(shape, m, m, i, 1)?)?);
            row.push(f(&RingElement::unit(shape, m, m, 1, i)?)?);
        }
        let e11 = RingElement::unit(shape, m, m, 1, 1)?;
        let mut corners = Vec::with_capacity(shape.t());
        for color in 1..=shape.t() {
            let mut c = Vec::with_capacity(shape.r());
            for s in 1..=shape.r() {
                let y = RingElement::letter(shape, Letter::y(color, s))?;
                c.push(f(&e11.scalar_mul(&y)?)?);
            }
            corners.push(c);
        }
        Self::new(src, dst, col, row, corners)
    }

    pub fn identity(m: usize, shape: Shape) -> Self {
        Self::from_fn((m, shape), (m, shape), |a| Ok(a.clone())).expect("identity table")
    }

    pub fn source(&self) -> (usize, Shape) {
        (self.src_m, self.src_shape)
    }

    pub fn target(&self) -> (usize, Shape) {
        (self.dst_m, self.dst_shape)
    }

    pub fn image_of_col_unit(&self, i: usize) -> &RingElement {
        &self.col_units[i - 1]
    }

    pub fn image_of_row_unit(&self, j: usize) -> &RingElement {
        &self.row_units[j - 1]
    }

    pub fn image_of_corner(&self, color: usize, s: usize) -> &RingElement {
        &self.corners[color - 1][s - 1]
    }

    fn corner_word(
        &self,
        color: usize,
        kind: LetterKind,
        word: &[u8],
        cache: &mut HashMap<(usize, LetterKind, Vec<u8>), RingElement>,
    ) -> RingElement {
        let key = (color, kind, word.to_vec());
        if let Some(e) = cache.get(&key) {
            return e.clone();
        }
        let letter = |k: u8| {
            let c = &self.corners[color][k as usize - 1];
            if kind == LetterKind::Y {
                c.clone()
            } else {
                c.involute()
            }
        };
        let out = if word.len() == 1 {
            letter(word[0])
        } else {
            let (head, last) = word.split_at(word.len() - 1);
            &self.corner_word(color, kind, head, cache) * &letter(last[0])
        };
        cache.insert(key, out.clone());
        out
    }

    /// Applies the homomorphism term by term:
    /// `e_{i,j}·w ↦ h(e_{i,1})·h(w e_{1,1})·h(e_{1,j})`.
    pub fn apply(&self, a: &RingElement) -> Result<RingElement> {
        if a.shape() != self.src_shape {
            return Err(Error::ShapeMismatch("element is over the wrong ring".into()));
        }
        if a.dims() != (self.src_m, self.src_m) {
            return Err(Error::DimMismatch(format!(
                "expected a {0}×{0} matrix, got {1}×{2}",
                self.src_m,
                a.rows(),
                a.cols()
            )));
        }
        let mut cache = HashMap::new();
        let mut terms = Vec::new();
        for (k, c) in a.terms() {
            let mut p = self.col_units[k.row - 1].clone();
            for (color, w) in k.mono.words().iter().enumerate() {
                if !w.y.is_empty() {
                    p = &p * &self.corner_word(color, LetterKind::Y, &w.y, &mut cache);
                }
                if !w.x.is_empty() {
                    p = &p * &self.corner_word(color, LetterKind::X, &w.x, &mut cache);
                }
            }
            p = &p * &self.row_units[k.col - 1];
            for (kp, cp) in p.terms() {
                terms.push((kp.row, kp.col, kp.mono.clone(), cp * c));
            }
        }
        RingElement::from_terms(self.dst_shape, self.dst_m, self.dst_m, terms)
    }

    /// Image of `x_{ℓ,s}·e_{1,1}`, which is the involute of the y-corner.
    fn x_corner(&self, color: usize, s: usize) -> RingElement {
        self.corners[color - 1][s - 1].involute()
    }

    /// Checks the defining relations on the images; reports the first failure.
    pub fn check(&self) -> std::result::Result<(), String> {
        let (m, t, r) = (self.src_m, self.src_shape.t(), self.src_shape.r());
        let id = RingElement::identity(self.dst_shape, self.dst_m);
        let zero = RingElement::zero(self.dst_shape, self.dst_m, self.dst_m);
        let e11 = &self.col_units[0];
        if self.row_units[0] != *e11 {
            return Err("images of e[1,1] disagree".into());
        }
        for i in 1..=m {
            if self.row_units[i - 1] != self.col_units[i - 1].involute() {
                return Err(format!("h(e[1,{i}]) is not h(e[{i},1])*"));
            }
        }
        let mut sum = zero.clone();
        for i in 1..=m {
            for j in 1..=m {
                let p = &self.row_units[i - 1] * &self.col_units[j - 1];
                let want = if i == j { e11 } else { &zero };
                if p != *want {
                    return Err(format!("h(e[1,{i}])·h(e[{j},1]) is wrong"));
                }
            }
            sum = &sum + &(&self.col_units[i - 1] * &self.row_units[i - 1]);
        }
        if sum != id {
            return Err("Σ h(e[i,i]) is not the identity".into());
        }
        for color in 1..=t {
            let mut total = zero.clone();
            for s in 1..=r {
                let y = &self.corners[color - 1][s - 1];
                if &(e11 * y) * e11 != *y {
                    return Err(format!("image of y[{color},{s}] e[1,1] is not in the corner"));
                }
                for s2 in 1..=r {
                    let p = &self.x_corner(color, s) * &self.corners[color - 1][s2 - 1];
                    let want = if s == s2 { e11 } else { &zero };
                    if p != *want {
                        return Err(format!("relation x[{color},{s}] y[{color},{s2}] fails"));
                    }
                }
                total = &total + &(y * &self.x_corner(color, s));
            }
            if total != *e11 {
                return Err(format!("relation Σ y[{color},s] x[{color},s] = 1 fails"));
            }
        }
        for c1 in 1..=t {
            for c2 in c1 + 1..=t {
                for s1 in 1..=r {
                    for s2 in 1..=r {
                        let a = [self.corners[c1 - 1][s1 - 1].clone(), self.x_corner(c1, s1)];
                        let b = [self.corners[c2 - 1][s2 - 1].clone(), self.x_corner(c2, s2)];
                        for p in &a {
                            for q in &b {
                                if p * q != q * p {
                                    return Err(format!("colors {c1} and {c2} do not commute"));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism> {
        if self.target() != next.source() {
            return Err(Error::DimMismatch("target of the first map is not the source of the second".into()));
        }
        let map = |v: &[RingElement]| v.iter().map(|e| next.apply(e)).collect::<Result<Vec<_>>>();
        Homomorphism::new(
            self.source(),
            next.target(),
            map(&self.col_units)?,
            map(&self.row_units)?,
            self.corners.iter().map(|c| map(c)).collect::<Result<_>>()?,
        )
    }

    /// Lifts `Mat_a → Mat_b` to `Mat_{k·a} → Mat_{k·b}` acting blockwise.
    pub fn entrywise(&self, k: usize) -> Result<Homomorphism> {
        if k == 0 {
            return Err(Error::OutOfRange("block count must be positive".into()));
        }
        let (a, b) = (self.src_m, self.dst_m);
        let place = |e: &RingElement, bi: usize, bj: usize| e.embed(k * b, k * b, (bi - 1) * b, (bj - 1) * b);
        let mut col = Vec::with_capacity(k * a);
        let mut row = Vec::with_capacity(k * a);
        for bi in 1..=k {
            for p in 1..=a {
                col.push(place(&self.col_units[p - 1], bi, 1)?);
                row.push(place(&self.row_units[p - 1], 1, bi)?);
            }
        }
        let corners = self
            .corners
            .iter()
            .map(|c| c.iter().map(|e| place(e, 1, 1)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Homomorphism::new((k * a, self.src_shape), (k * b, self.dst_shape), col, row, corners)
    }

    /// Extends a map between `t = 1` rings to `t` tensor factors: it acts on
    /// color `position` and fixes the other colors.
    pub fn tensor_factor(&self, position: usize, t: usize) -> Result<Homomorphism> {
        if self.src_shape.t() != 1 || self.dst_shape.t() != 1 {
            return Err(Error::ShapeMismatch("tensor extension needs t = 1 maps".into()));
        }
        if position == 0 || position > t {
            return Err(Error::OutOfRange(format!("position {position} not in [1, {t}]")));
        }
        let r = self.src_shape.r();
        let wide = Shape::new(r, t)?;
        let lift = |e: &RingElement| e.relabel_into(wide, position);
        let col = self.col_units.iter().map(lift).collect::<Result<Vec<_>>>()?;
        let row = self.row_units.iter().map(lift).collect::<Result<Vec<_>>>()?;
        let e11 = lift(&self.col_units[0])?;
        let mut corners = Vec::with_capacity(t);
        for color in 1..=t {
            let mut c = Vec::with_capacity(r);
            for s in 1..=r {
                if color == position {
                    c.push(lift(&self.corners[0][s - 1])?);
                } else {
                    c.push(e11.scalar_mul(&RingElement::letter(wide, Letter::y(color, s))?)?);
                }
            }
            corners.push(c);
        }
        Homomorphism::new((self.src_m, wide), (self.dst_m, wide), col, row, corners)
    }

    /// Target-keyed image table in the text grammar, one generator per line.
    pub fn table(&self) -> Vec<(String, RingElement)> {
        let t = self.src_shape.t();
        let mut out = Vec::new();
        for i in 1..=self.src_m {
            out.push((format!("e[{i},1]"), self.col_units[i - 1].clone()));
        }
        for j in 2..=self.src_m {
            out.push((format!("e[1,{j}]"), self.row_units[j - 1].clone()));
        }
        for color in 1..=t {
            for s in 1..=self.src_shape.r() {
                let name = if t == 1 { format!("y{s}") } else { format!("y[{color},{s}]") };
                out.push((format!("{name} e[1,1]"), self.corners[color - 1][s - 1].clone()));
            }
        }
        out
    }
}

/// True iff the images satisfy the matrix-unit relations, the Leavitt
/// relations in the corner, cross-color commutation, and `h(a*) = h(a)*`.
pub fn verify_hom(h: &Homomorphism) -> bool {
    h.check().is_ok()
}

/// A homomorphism together with its two-sided inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub forward: Homomorphism,
    pub inverse: Homomorphism,
}

impl Isomorphism {
    /// Both maps are homomorphisms and compose to the identity on generators.
    pub fn check(&self) -> std::result::Result<(), String> {
        self.forward.check().map_err(|e| format!("forward: {e}"))?;
        self.inverse.check().map_err(|e| format!("inverse: {e}"))?;
        let there = self.forward.then(&self.inverse).map_err(|e| e.to_string())?;
        let (m, shape) = self.forward.source();
        if there != Homomorphism::identity(m, shape) {
            return Err("inverse ∘ forward is not the identity".into());
        }
        let back = self.inverse.then(&self.forward).map_err(|e| e.to_string())?;
        let (m, shape) = self.forward.target();
        if back != Homomorphism::identity(m, shape) {
            return Err("forward ∘ inverse is not the identity".into());
        }
        Ok(())
    }

    pub fn reversed(&self) -> Isomorphism {
        Isomorphism { forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Isomorphism) -> Result<Isomorphism> {
        Ok(Isomorphism {
            forward: self.forward.then(&next.forward)?,
            inverse: next.inverse.then(&self.inverse)?,
        })
    }
}

/// A positive unitary `m_from × m_to` matrix built from diagonal sums
/// `y_{[1..r]} ⊕ I`, each step widening by `r - 1`.
pub fn rect_unitary(m_from: usize, m_to: usize, shape: Shape) -> Result<RingElement> {
    let step = shape.r() - 1;
    if m_from == 0 || m_to == 0 {
        return Err(Error::OutOfRange("sizes must be positive".into()));
    }
    if m_from % step != m_to % step {
        return Err(Error::Precondition(format!("{m_from} ≢ {m_to} mod {step}")));
    }
    if m_to < m_from {
        return Ok(rect_unitary(m_to, m_from, shape)?.involute());
    }
    let row = row_of_y(shape, 1)?;
    let mut y = RingElement::identity(shape, m_from);
    let mut n = m_from;
    while n < m_to {
        let blocks = if n == 1 { vec![row.clone()] } else { vec![row.clone(), RingElement::identity(shape, n - 1)] };
        y = &y * &direct_sum(&blocks)?;
        n += step;
    }
    Ok(y)
}

/// Conjugation `M ↦ Y*·M·Y` from `Mat_{m_from}` to `Mat_{m_to}`, with inverse
/// `N ↦ Y·N·Y*`.
pub fn rect_conjugation_iso(m_from: usize, m_to: usize, shape: Shape) -> Result<Isomorphism> {
    let y = rect_unitary(m_from, m_to, shape)?;
    let ys = y.involute();
    let forward = Homomorphism::from_fn((m_from, shape), (m_to, shape), |a| Ok(&(&ys * a) * &y))?;
    let inverse = Homomorphism::from_fn((m_to, shape), (m_from, shape), |a| Ok(&(&y * a) * &ys))?;
    Ok(Isomorphism { forward, inverse })
}

/// The data of the explicit isomorphism `L_r ≅ Mat_m(L_r)` for `r ≥ 3`,
/// `m > r` and `gcd(m, r - 1) = 1`.
#[derive(Clone, Debug)]
pub struct AapData {
    pub r: usize,
    pub m: usize,
    /// `(s, j) ↦ s#j` for `s ∈ [2, r]`, `j ∈ [1, m-1]`.
    pub hash: BTreeMap<(usize, usize), i64>,
    /// `k ↦ y-word` for `k ∈ [r+m-1, mr]`.
    pub y_assign: BTreeMap<usize, Vec<u8>>,
    /// The `m × mr` positive unitary matrix.
    pub y: RingElement,
    /// Column blocks `Y_1, …, Y_r` of `y`.
    pub ys: Vec<RingElement>,
    /// `(E_i, E'_i)` for `i ∈ [1, m]`, as elements of `L_r`.
    pub partial_sums: Vec<(RingElement, RingElement)>,
    /// `units[i-1][j-1]` is the preimage of `e_{i,j}`.
    pub units: Vec<Vec<RingElement>>,
    /// `corners[s-1][j-1]` is the preimage of `y_s·e_{1,j}`.
    pub corners: Vec<Vec<RingElement>>,
    /// The top path `m ↦ ⋯ ↦ r` and bottom path `1 ↦ ⋯ ↦ r-1` of the m-gon.
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
}

fn check_aap(r: usize, m: usize) -> Result<Shape> {
    if r < 3 || m <= r || m.gcd(&(r - 1)) != 1 {
        return Err(Error::Precondition(format!(
            "need r ≥ 3, m > r and gcd(m, r-1) = 1; got r = {r}, m = {m}"
        )));
    }
    Shape::new(r, 1)
}

/// The permutation of `Z` that shifts by `r - 1` and swaps each pair
/// `(ℓm, ℓm+1)` after shifting.
pub fn aap_pi(r: usize, m: usize, i: i64) -> i64 {
    let (r, m) = (r as i64, m as i64);
    match i.rem_euclid(m) {
        0 => i + r,
        1 => i + r - 2,
        _ => i + r - 1,
    }
}

/// `s#j`: the member of the orbit of `s` in `[1+(r-1)j, (r-1)(j+1)]`.
pub fn aap_hash(r: usize, m: usize, s: usize, j: usize) -> i64 {
    let lo = (1 + (r - 1) * j) as i64;
    let mut x = s as i64;
    while x < lo {
        x = aap_pi(r, m, x);
    }
    debug_assert!(x <= ((r - 1) * (j + 1)) as i64);
    x
}

fn mod_m(k: i64, m: usize) -> usize {
    let v = k.rem_euclid(m as i64) as usize;
    if v == 0 {
        m
    } else {
        v
    }
}

/// Next vertex of the m-cycle `j ↦ (j - r + 1) mod m`.
fn mgon_next(r: usize, m: usize, j: usize) -> usize {
    mod_m(j as i64 - r as i64 + 1, m)
}

struct Scalars {
    shape: Shape,
}

impl Scalars {
    fn y(&self, s: usize) -> RingElement {
        RingElement::letter(self.shape, Letter::y(1, s)).expect("letter in range")
    }

    fn x(&self, s: usize) -> RingElement {
        RingElement::letter(self.shape, Letter::x(1, s)).expect("letter in range")
    }

    fn one(&self) -> RingElement {
        RingElement::scalar(self.shape, 1)
    }

    /// `y_s·a·x_s`.
    fn conj(&self, s: usize, a: &RingElement) -> RingElement {
        &(&self.y(s) * a) * &self.x(s)
    }

    /// `Σ_{s ∈ range} y_s x_s`.
    fn projections(&self, range: std::ops::RangeInclusive<usize>) -> RingElement {
        let mut out = RingElement::scalar(self.shape, 0);
        for s in range {
            out = &out + &(&self.y(s) * &self.x(s));
        }
        out
    }

    fn pow(&self, a: &RingElement, k: usize) -> RingElement {
        let mut out = self.one();
        for _ in 0..k {
            out = &out * a;
        }
        out
    }
}

pub fn aap_data(r: usize, m: usize) -> Result<AapData> {
    let shape = check_aap(r, m)?;
    let sc = Scalars { shape };

    let mut hash = BTreeMap::new();
    let mut y_assign = BTreeMap::new();
    for j in 1..m {
        for s in 2..=r {
            let h = aap_hash(r, m, s, j);
            hash.insert((s, j), h);
            let mut w = vec![1u8; j - 1];
            w.push(s as u8);
            y_assign.insert(h as usize + m, w);
        }
    }
    y_assign.insert(r + m - 1, vec![1u8; m - 1]);

    let mut last_row = Vec::with_capacity(y_assign.len());
    for w in y_assign.values() {
        let mono = crate::algebra::Monomial::from_y_words(shape, std::slice::from_ref(w))?;
        last_row.push(RingElement::monomial(shape, 1, 1, 1, 1, mono, BigInt::from(1))?);
    }
    let last = crate::matrices::from_grid(shape, &[last_row])?;
    let y = direct_sum(&[row_of_y(shape, 1)?, RingElement::identity(shape, m - 2), last])?;
    let ys = (0..r).map(|s| y.block(1, s * m + 1, m, m)).collect::<Result<Vec<_>>>()?;

    // E_i and E'_i, walking the m-gon from m down to r-1.
    let mut e: Vec<Option<RingElement>> = vec![None; m + 1];
    let mut ep: Vec<Option<RingElement>> = vec![None; m + 1];
    e[m] = Some(sc.one());
    ep[m] = Some(RingElement::scalar(shape, 0));
    let mut i = m;
    while i != r - 1 {
        let next = mgon_next(r, m, i);
        let (ei, epi) = (e[i].clone().unwrap(), ep[i].clone().unwrap());
        if i <= r - 2 {
            e[next] = Some(&(&sc.y(1) * &sc.x(1)) + &sc.conj(2, &ei));
            ep[next] = Some(&sc.conj(2, &epi) + &sc.projections(3..=r));
        } else {
            ep[next] = Some(&sc.conj(1, &epi) + &sc.projections(2..=r));
            e[next] = Some(sc.conj(1, &ei));
        }
        i = next;
    }
    let partial_sums: Vec<(RingElement, RingElement)> =
        (1..=m).map(|i| (e[i].clone().unwrap(), ep[i].clone().unwrap())).collect();

    // Diagonal units along the top (m → r) and bottom (1 → r-1) paths,
    // with the edge units e_{next, j}.
    let mut diag: Vec<Option<RingElement>> = vec![None; m + 1];
    diag[1] = Some(partial_sums[0].0.clone());
    diag[m] = Some(partial_sums[m - 2].1.clone());
    let mut edge: HashMap<usize, RingElement> = HashMap::new();
    let mut walk = |start: usize, end: usize, diag: &mut Vec<Option<RingElement>>| {
        let mut path = vec![start];
        let mut j = start;
        while j != end {
            let next = mgon_next(r, m, j);
            let s = if j <= r - 2 { 2 } else { 1 };
            let dj = diag[j].clone().unwrap();
            let dn = sc.conj(s, &dj);
            edge.insert(j, &(&dn * &sc.y(s)) * &dj);
            diag[next] = Some(dn);
            path.push(next);
            j = next;
        }
        path
    };
    let top = walk(m, r, &mut diag);
    let bottom = walk(1, r - 1, &mut diag);
    let diag: Vec<RingElement> = diag.into_iter().skip(1).map(Option::unwrap).collect();

    // Units between two vertices of the same path.
    let mut place: HashMap<usize, (usize, usize)> = HashMap::new();
    for (p, path) in [&top, &bottom].into_iter().enumerate() {
        for (k, &v) in path.iter().enumerate() {
            place.insert(v, (p, k));
        }
    }
    let paths = [&top, &bottom];
    let same_path = |a: usize, b: usize| -> RingElement {
        let (pa, ka) = place[&a];
        let (pb, kb) = place[&b];
        assert_eq!(pa, pb, "vertices {a} and {b} lie on different paths");
        let (lo, hi) = (ka.min(kb), ka.max(kb));
        let path = paths[pa];
        // e_{path[hi], path[lo]} as a product of edges, read from the far end.
        let mut down = diag[path[hi] - 1].clone();
        for k in (lo..hi).rev() {
            down = &down * &edge[&path[k]];
        }
        if ka >= kb {
            down
        } else {
            down.involute()
        }
    };

    let e11 = &diag[0];
    let emm = &diag[m - 1];
    let corner_y = |s: usize| &(e11 * &sc.y(1)) * &diag[s - 1];
    let last_row_pre = |k: usize| {
        let j = mod_m(k as i64, m);
        let s = (k - j) / m + 1;
        &(emm * &sc.y(s)) * &diag[j - 1]
    };

    let y1e11 = corner_y(1);
    let mut e1m = &(&sc.pow(&y1e11, m - 1) * &same_path(1, r - 1)) * &last_row_pre(r + m - 1).involute();
    for j in 1..m {
        for s in 2..=r {
            let h = hash[&(s, j)];
            let hm = mod_m(h, m);
            let term = &(&(&sc.pow(&y1e11, j - 1) * &corner_y(s)) * &same_path(s, hm))
                * &last_row_pre(h as usize + m).involute();
            e1m = &e1m + &term;
        }
    }

    let mut col1: Vec<RingElement> = Vec::with_capacity(m);
    let em1 = e1m.involute();
    for i in 1..=m {
        if place[&i].0 == place[&1].0 {
            col1.push(same_path(i, 1));
        } else {
            col1.push(&same_path(i, m) * &em1);
        }
    }
    let units: Vec<Vec<RingElement>> =
        (0..m).map(|i| (0..m).map(|j| &col1[i] * &col1[j].involute()).collect()).collect();
    let corners: Vec<Vec<RingElement>> =
        (1..=r).map(|s| (0..m).map(|j| &corner_y(s) * &units[s - 1][j]).collect()).collect();

    Ok(AapData { r, m, hash, y_assign, y, ys, partial_sums, units, corners, top, bottom })
}

impl AapData {
    pub fn shape(&self) -> Shape {
        Shape::new(self.r, 1).expect("validated")
    }

    /// `(i, i^π)` for `i` in `[lo, hi]`.
    pub fn pi_window(&self, lo: i64, hi: i64) -> Vec<(i64, i64)> {
        (lo..=hi).map(|i| (i, aap_pi(self.r, self.m, i))).collect()
    }

    /// The forward map `θ: L_r → Mat_m(L_r)`, `y_s ↦ Y_s`.
    pub fn forward(&self) -> Homomorphism {
        let shape = self.shape();
        let id = RingElement::identity(shape, self.m);
        Homomorphism::new((1, shape), (self.m, shape), vec![id.clone()], vec![id], vec![self.ys.clone()])
            .expect("well-formed table")
    }

    /// The inverse map `θ^{-1}: Mat_m(L_r) → L_r` from the preimage table.
    pub fn inverse(&self) -> Homomorphism {
        let shape = self.shape();
        let col = (0..self.m).map(|i| self.units[i][0].clone()).collect();
        let row = (0..self.m).map(|j| self.units[0][j].clone()).collect();
        let corners = (0..self.r).map(|s| &self.corners[s][s] * &self.units[s][0]).collect();
        Homomorphism::new((self.m, shape), (1, shape), col, row, vec![corners]).expect("well-formed table")
    }

    pub fn isomorphism(&self) -> Isomorphism {
        Isomorphism { forward: self.forward(), inverse: self.inverse() }
    }
}

pub fn aap_hom(r: usize, m: usize) -> Result<Homomorphism> {
    Ok(aap_data(r, m)?.forward())
}

pub fn aap_inverse_hom(r: usize, m: usize) -> Result<Homomorphism> {
    Ok(aap_data(r, m)?.inverse())
}

/// An isomorphism `Mat_{m1}(L_r^{⊗t}) ≅ Mat_{m2}(L_r^{⊗t})`, which exists
/// exactly when `gcd(m1, r-1) = gcd(m2, r-1)`.
///
/// For `r ≥ 3` the unit `u` of [`kaplansky_unit`] is raised past `r`, and the
/// map goes through `Mat_{m1}(Mat_u(L_r)) = Mat_{m1·u}(L_r)` before a
/// conjugation to `Mat_{m2}`.
pub fn gcd_iso(r: usize, t: usize, m1: usize, m2: usize) -> Result<Isomorphism> {
    let shape = Shape::new(r, t)?;
    if m1 == 0 || m2 == 0 {
        return Err(Error::OutOfRange("sizes must be positive".into()));
    }
    let (g1, g2) = (m1.gcd(&(r - 1)), m2.gcd(&(r - 1)));
    if g1 != g2 {
        return Err(Error::NoIsomorphism { m1, m2, g1, g2 });
    }
    if r == 2 {
        return rect_conjugation_iso(m1, m2, shape);
    }
    let base = Shape::new(r, 1)?;
    let s = (r - 1) as i64;
    let mut u = kaplansky_unit(m1 as i64, m2 as i64, s)?;
    while u <= r as i64 {
        u += s;
    }
    let u = u as usize;
    let theta = aap_data(r, u)?.isomorphism();
    let blocks = Isomorphism {
        forward: theta.forward.entrywise(m1)?,
        inverse: theta.inverse.entrywise(m1)?,
    };
    let iso = blocks.then(&rect_conjugation_iso(m1 * u, m2, base)?)?;
    if t == 1 {
        return Ok(iso);
    }
    Ok(Isomorphism { forward: iso.forward.tensor_factor(1, t)?, inverse: iso.inverse.tensor_factor(1, t)? })
}
