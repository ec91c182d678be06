#![allow(dead_code)]

use std::collections::BTreeMap;

use leavitt::dynamics::{Coordinate, Point, Stream};
use leavitt::thompson::{Leaf, LeafSet, TreePair};
use leavitt::{Factor, Letter, LetterKind, RawTerm, RingElement, Shape};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn sh(r: usize, t: usize) -> Shape {
    Shape::new(r, t).unwrap()
}

// ---------------------------------------------------------------------------
// Naive rewriting oracle. A color is a plain letter sequence; rules fire at
// random positions until none applies.

/// `(is_y, index)`.
pub type Sym = (bool, u8);
pub type Word = Vec<Sym>;

fn redexes(w: &[Sym], r: u8) -> Vec<usize> {
    (0..w.len().saturating_sub(1))
        .filter(|&i| {
            let (a, b) = (w[i], w[i + 1]);
            (!a.0 && b.0) || (a.0 && !b.0 && a.1 == r && b.1 == r)
        })
        .collect()
}

/// Reduces a single color to its normal form by random-order rewriting with
/// `x_s y_s' → δ` and `y_r x_r → 1 - Σ_{s<r} y_s x_s`.
pub fn oracle_color(word: &[Sym], r: u8, rng: &mut impl Rng) -> BTreeMap<Word, BigInt> {
    let mut cur: BTreeMap<Word, BigInt> = BTreeMap::new();
    cur.insert(word.to_vec(), BigInt::one());
    loop {
        let live: Vec<(Word, Vec<usize>)> = cur
            .keys()
            .map(|w| (w.clone(), redexes(w, r)))
            .filter(|(_, rs)| !rs.is_empty())
            .collect();
        if live.is_empty() {
            return cur;
        }
        let (w, rs) = live.choose(rng).unwrap();
        let i = *rs.choose(rng).unwrap();
        let c = cur.remove(w).unwrap();
        let (a, b) = (w[i], w[i + 1]);
        let (head, tail) = (&w[..i], &w[i + 2..]);
        let mut add = |mid: &[Sym], k: BigInt| {
            let nw: Word = [head, mid, tail].concat();
            let e = cur.entry(nw.clone()).or_insert_with(BigInt::zero);
            *e += k;
            if e.is_zero() {
                cur.remove(&nw);
            }
        };
        if !a.0 {
            if a.1 == b.1 {
                add(&[], c);
            }
        } else {
            add(&[], c.clone());
            for s in 1..r {
                add(&[(true, s), (false, s)], -c.clone());
            }
        }
    }
}

pub type OracleKey = (usize, usize, Vec<Word>);

/// Normal form of a sum of raw products, computed one color at a time.
pub fn oracle_normalize(
    shape: Shape,
    raw: &[RawTerm],
    rng: &mut impl Rng,
) -> BTreeMap<OracleKey, BigInt> {
    let t = shape.t();
    let mut out: BTreeMap<OracleKey, BigInt> = BTreeMap::new();
    for term in raw {
        let mut unit: Option<(usize, usize)> = None;
        let mut dead = false;
        let mut colors: Vec<Word> = vec![Vec::new(); t];
        for f in &term.factors {
            match *f {
                Factor::Unit(i, j) => {
                    unit = match unit {
                        None => Some((i, j)),
                        Some((a, b)) => {
                            dead |= b != i;
                            Some((a, j))
                        }
                    }
                }
                Factor::Letter(l) => {
                    colors[l.color - 1].push((l.kind == LetterKind::Y, l.index as u8));
                }
            }
        }
        if dead {
            continue;
        }
        let (i, j) = unit.unwrap_or((1, 1));
        let mut acc: Vec<(Vec<Word>, BigInt)> = vec![(Vec::new(), term.coeff.clone())];
        for w in &colors {
            let nf = oracle_color(w, shape.r() as u8, rng);
            let mut next = Vec::new();
            for (ws, c) in &acc {
                for (w2, c2) in &nf {
                    let mut ws = ws.clone();
                    ws.push(w2.clone());
                    next.push((ws, c * c2));
                }
            }
            acc = next;
        }
        for (ws, c) in acc {
            let e = out.entry((i, j, ws.clone())).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                out.remove(&(i, j, ws));
            }
        }
    }
    out
}

/// The library's normal form in the oracle's representation.
pub fn as_oracle(e: &RingElement) -> BTreeMap<OracleKey, BigInt> {
    e.terms()
        .map(|(k, c)| {
            let words = k
                .mono
                .words()
                .iter()
                .map(|w| {
                    w.y.iter().map(|&s| (true, s)).chain(w.x.iter().map(|&s| (false, s))).collect()
                })
                .collect();
            ((k.row, k.col, words), c.clone())
        })
        .collect()
}

pub fn random_letter(shape: Shape, rng: &mut impl Rng) -> Letter {
    let color = rng.gen_range(1..=shape.t());
    let index = rng.gen_range(1..=shape.r());
    if rng.gen_bool(0.5) {
        Letter::y(color, index)
    } else {
        Letter::x(color, index)
    }
}

/// A signed product of at most `max_len` random letters.
pub fn random_raw_term(shape: Shape, max_len: usize, rng: &mut impl Rng) -> RawTerm {
    let len = rng.gen_range(0..=max_len);
    let factors = (0..len).map(|_| Factor::Letter(random_letter(shape, rng))).collect();
    let coeff = BigInt::from(rng.gen_range(-3i64..=3));
    RawTerm { coeff, factors }
}

/// A random `1 × 1` element built from a few raw products.
pub fn random_element(shape: Shape, max_len: usize, rng: &mut impl Rng) -> RingElement {
    let n = rng.gen_range(1..=3);
    let raw: Vec<RawTerm> = (0..n).map(|_| random_raw_term(shape, max_len, rng)).collect();
    leavitt::algebra::normalize(shape, 1, 1, &raw).unwrap()
}

/// A random `m × m` element: a sum of a few random scalars at random positions.
pub fn random_matrix(shape: Shape, m: usize, max_len: usize, rng: &mut impl Rng) -> RingElement {
    let mut acc = RingElement::zero(shape, m, m);
    for _ in 0..rng.gen_range(1..=3) {
        let (i, j) = (rng.gen_range(1..=m), rng.gen_range(1..=m));
        let s = random_element(shape, max_len, rng);
        let e = RingElement::unit(shape, m, m, i, j).unwrap();
        acc = &acc + &e.scalar_mul(&s).unwrap();
    }
    acc
}

// ---------------------------------------------------------------------------
// Random leaves, bases and tree pairs.

/// The root basis with `k` simple expansions at random leaves and colors.
pub fn random_basis(m: usize, shape: Shape, k: usize, rng: &mut impl Rng) -> LeafSet {
    let mut set = LeafSet::root_basis(m, shape);
    for _ in 0..k {
        let leaves: Vec<Leaf> = set.iter().cloned().collect();
        let a = leaves.choose(rng).unwrap();
        set = set.expand(a, rng.gen_range(1..=shape.t())).unwrap();
    }
    set
}

/// A tree pair with `k` expansions on each side and a random bijection.
pub fn random_tree_pair(m: usize, shape: Shape, k: usize, rng: &mut impl Rng) -> TreePair {
    let domain: Vec<Leaf> = random_basis(m, shape, k, rng).iter().cloned().collect();
    let mut range: Vec<Leaf> = random_basis(m, shape, k, rng).iter().cloned().collect();
    range.shuffle(rng);
    TreePair::new(m, shape, domain, range).unwrap()
}

pub fn random_pair_params(rng: &mut impl Rng) -> (usize, Shape, usize) {
    let m = rng.gen_range(1..=3);
    let shape = sh(rng.gen_range(2..=3), rng.gen_range(1..=3));
    (m, shape, rng.gen_range(0..=4))
}

/// A random leaf set obtained by expanding and then dropping or adding
/// leaves, so that roughly half of the outputs are not bases.
pub fn random_leaf_set(m: usize, shape: Shape, rng: &mut impl Rng) -> LeafSet {
    let base = random_basis(m, shape, rng.gen_range(0..=4), rng);
    let mut leaves: Vec<Leaf> = base.iter().cloned().collect();
    match rng.gen_range(0..4) {
        0 => {}
        1 => {
            leaves.shuffle(rng);
            leaves.pop();
        }
        2 => {
            // Replace one leaf by one of its children only.
            let i = rng.gen_range(0..leaves.len());
            let c = rng.gen_range(1..=shape.t());
            let k = rng.gen_range(1..=shape.r() as u8);
            leaves[i] = leaves[i].child(c, k);
        }
        _ => {
            // Add a leaf that overlaps an existing one.
            let i = rng.gen_range(0..leaves.len());
            let c = rng.gen_range(1..=shape.t());
            let extra = leaves[i].child(c, 1);
            leaves.push(extra);
        }
    }
    LeafSet::new(m, shape, leaves).unwrap()
}

// ---------------------------------------------------------------------------
// Points and elements fixing them.

pub fn random_word(r: usize, max_len: usize, rng: &mut impl Rng) -> Vec<u8> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(1..=r as u8)).collect()
}

pub fn random_coordinate(r: usize, rational: bool, rng: &mut impl Rng) -> Coordinate {
    let pre = random_word(r.min(2), 2, rng);
    if rational {
        loop {
            let mut period = random_word(r, 3, rng);
            if period.is_empty() {
                period.push(rng.gen_range(1..=r as u8));
            }
            if let Ok(c) = Coordinate::rational(pre.clone(), period) {
                return c;
            }
        }
    } else {
        let stream = if rng.gen_bool(0.5) { Stream::ThueMorse } else { Stream::Fibonacci };
        Coordinate::aperiodic(pre, stream, rng.gen_range(0..5))
    }
}

/// A point with a random mix of rational and aperiodic coordinates.
pub fn random_point(m: usize, shape: Shape, rng: &mut impl Rng) -> Point {
    let coords = (0..shape.t()).map(|_| random_coordinate(shape.r(), rng.gen_bool(0.6), rng)).collect();
    Point::new(rng.gen_range(1..=m), coords)
}

/// The leaf of `nu` with the given per-color depths.
pub fn leaf_of(nu: &Point, depths: &[usize]) -> Leaf {
    let words = nu
        .coords
        .iter()
        .zip(depths)
        .map(|(c, &d)| (0..d).map(|n| c.digit(n)).collect())
        .collect();
    Leaf { row: nu.row, words }
}

/// A random basis containing `a`, with `extra` further expansions away from `a`.
pub fn random_basis_through(m: usize, shape: Shape, a: &Leaf, extra: usize, rng: &mut impl Rng) -> LeafSet {
    let mut set = LeafSet::root_basis(m, shape);
    let mut cur = Leaf::root(a.row, shape.t());
    let mut steps: Vec<usize> = a.words.iter().enumerate().flat_map(|(c, w)| vec![c + 1; w.len()]).collect();
    steps.shuffle(rng);
    for color in steps {
        set = set.expand(&cur, color).unwrap();
        let d = a.words[color - 1][cur.words[color - 1].len()];
        cur = cur.child(color, d);
    }
    for _ in 0..extra {
        let others: Vec<Leaf> = set.iter().filter(|l| *l != a).cloned().collect();
        let Some(b) = others.choose(rng) else { break };
        set = set.expand(b, rng.gen_range(1..=shape.t())).unwrap();
    }
    set
}

/// A random element mapping the leaf `a` of `nu` to itself, hence fixing
/// `nu` with trivial germ, while scrambling everything else.
pub fn random_local_identity(m: usize, shape: Shape, nu: &Point, rng: &mut impl Rng) -> TreePair {
    let depths: Vec<usize> = (0..shape.t()).map(|_| rng.gen_range(0..=2)).collect();
    let a = leaf_of(nu, &depths);
    let extra = rng.gen_range(0..=2);
    let dom = random_basis_through(m, shape, &a, extra, rng);
    let ran = random_basis_through(m, shape, &a, extra, rng);
    let mut rest: Vec<Leaf> = ran.iter().filter(|l| **l != a).cloned().collect();
    rest.shuffle(rng);
    let mut domain = vec![a.clone()];
    let mut range = vec![a.clone()];
    domain.extend(dom.iter().filter(|l| **l != a).cloned());
    range.extend(rest);
    TreePair::new(m, shape, domain, range).unwrap()
}
