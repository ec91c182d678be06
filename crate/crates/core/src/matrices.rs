//! Structural constructors and unitarity checks for rectangular matrices
//! over `L_r^{⊗t}`.

use crate::algebra::{Letter, RingElement, Shape};
use crate::error::{Error, Result};

/// A named structural matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structural {
    Identity(usize),
    /// `e_{i,j}` in `rows × cols`.
    MatrixUnit { rows: usize, cols: usize, i: usize, j: usize },
    /// The `1 × r` row `(y_{ℓ,1}, …, y_{ℓ,r})`.
    RowOfY(usize),
}

pub fn structural(shape: Shape, kind: Structural) -> Result<RingElement> {
    match kind {
        Structural::Identity(m) => {
            if m == 0 {
                return Err(Error::OutOfRange("identity of size 0".into()));
            }
            Ok(RingElement::identity(shape, m))
        }
        Structural::MatrixUnit { rows, cols, i, j } => RingElement::unit(shape, rows, cols, i, j),
        Structural::RowOfY(color) => row_of_y(shape, color),
    }
}

pub fn row_of_y(shape: Shape, color: usize) -> Result<RingElement> {
    let r = shape.r();
    let mut row = RingElement::zero(shape, 1, r);
    for s in 1..=r {
        let y = RingElement::letter(shape, Letter::y(color, s))?;
        row = row.add(&y.embed(1, r, 0, s - 1)?)?;
    }
    Ok(row)
}

/// Block-diagonal sum of the given matrices.
pub fn direct_sum(blocks: &[RingElement]) -> Result<RingElement> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::InvalidParameter("direct sum of no blocks".into()))?;
    let shape = first.shape();
    if let Some(b) = blocks.iter().find(|b| b.shape() != shape) {
        return Err(Error::ShapeMismatch(format!(
            "block with r={}, t={} in a sum with r={}, t={}",
            b.shape().r(),
            b.shape().t(),
            shape.r(),
            shape.t()
        )));
    }
    let rows: usize = blocks.iter().map(RingElement::rows).sum();
    let cols: usize = blocks.iter().map(RingElement::cols).sum();
    let mut out = RingElement::zero(shape, rows, cols);
    let (mut ro, mut co) = (0, 0);
    for b in blocks {
        out = out.add(&b.embed(rows, cols, ro, co)?)?;
        ro += b.rows();
        co += b.cols();
    }
    Ok(out)
}

/// Assembles a matrix from a grid of `1 × 1` entries.
pub fn from_grid(shape: Shape, grid: &[Vec<RingElement>]) -> Result<RingElement> {
    let rows = grid.len();
    let cols = grid.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || grid.iter().any(|r| r.len() != cols) {
        return Err(Error::DimMismatch("grid must be a non-empty rectangle".into()));
    }
    let mut out = RingElement::zero(shape, rows, cols);
    for (i, row) in grid.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if e.dims() != (1, 1) {
                return Err(Error::DimMismatch("grid entries must be 1×1".into()));
            }
            out = out.add(&e.embed(rows, cols, i, j)?)?;
        }
    }
    Ok(out)
}

/// Outcome of the two unitarity products `u·u* = I_m` and `u*·u = I_n`.
#[derive(Clone, Debug)]
pub struct UnitaryWitness {
    pub u: RingElement,
    pub checked_left: bool,
    pub checked_right: bool,
}

impl UnitaryWitness {
    pub fn is_unitary(&self) -> bool {
        self.checked_left && self.checked_right
    }
}

pub fn is_unitary(u: &RingElement) -> UnitaryWitness {
    let shape = u.shape();
    let star = u.involute();
    let left = u * &star == RingElement::identity(shape, u.rows());
    let right = &star * u == RingElement::identity(shape, u.cols());
    UnitaryWitness { u: u.clone(), checked_left: left, checked_right: right }
}
