//! Full-search block matching with a sum-of-absolute-differences cost.
//!
//! Three geometries share one search loop:
//!
//! * bilateral: blocks tile the frame being synthesized and a candidate
//!   `mv` compares `prev(p + mv)` against `next(p - mv)`;
//! * forward: blocks tile the previous frame and are matched into the next;
//! * backward: blocks tile the next frame and are matched into the previous.
//!
//! Reads outside a plane are clamped to the border. Among candidates with
//! equal SAD the shortest vector wins, then the smallest `dy`, then the
//! smallest `dx`. Candidates are visited in exactly that priority order, so
//! a later candidate must be strictly cheaper to replace the current best,
//! which lets each SAD bail out as soon as it reaches the best cost so far.

use alloc::vec::Vec;
use core::ops::Neg;

use crate::{Error, Frame, FrucConfig, Plane, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MotionVector {
    /// Horizontal displacement, positive to the right.
    pub dx: i32,
    /// Vertical displacement, positive downward.
    pub dy: i32,
}

impl MotionVector {
    pub const ZERO: MotionVector = MotionVector { dx: 0, dy: 0 };

    pub const fn new(dx: i32, dy: i32) -> Self {
        Self { dx, dy }
    }

    #[inline]
    pub fn norm_sq(self) -> i64 {
        let (dx, dy) = (self.dx as i64, self.dy as i64);
        dx * dx + dy * dy
    }

    pub fn within(self, range: i32) -> bool {
        self.dx.abs() <= range && self.dy.abs() <= range
    }

    /// Each component divided by two, rounding toward zero.
    pub fn halved_toward_zero(self) -> Self {
        Self::new(self.dx / 2, self.dy / 2)
    }
}

impl Neg for MotionVector {
    type Output = MotionVector;

    fn neg(self) -> Self {
        Self::new(-self.dx, -self.dy)
    }
}

/// The frame a motion field's block grid is laid on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Anchor {
    /// The not-yet-existing middle frame (bilateral search).
    Interpolated,
    /// The previous reference (forward search).
    Previous,
    /// The next reference (backward search).
    Next,
}

/// A per-block grid of displacements and their matching costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotionField {
    anchor: Anchor,
    block_size: usize,
    search_range: i32,
    cols: usize,
    rows: usize,
    vectors: Vec<MotionVector>,
    costs: Vec<u64>,
}

impl MotionField {
    pub fn from_parts(
        anchor: Anchor,
        block_size: usize,
        search_range: i32,
        cols: usize,
        rows: usize,
        vectors: Vec<MotionVector>,
        costs: Vec<u64>,
    ) -> Result<Self> {
        if block_size == 0 || cols == 0 || rows == 0 {
            return Err(Error::ZeroDimension);
        }
        for len in [vectors.len(), costs.len()] {
            if len != cols * rows {
                return Err(Error::PlaneSize {
                    expected: cols * rows,
                    actual: len,
                });
            }
        }
        if vectors.iter().any(|v| !v.within(search_range)) {
            return Err(Error::InvalidConfig("motion vector outside the search range"));
        }
        Ok(Self {
            anchor,
            block_size,
            search_range,
            cols,
            rows,
            vectors,
            costs,
        })
    }

    /// A field holding `mv` in every block, with zero costs.
    pub fn uniform(anchor: Anchor, block_size: usize, search_range: i32, cols: usize, rows: usize, mv: MotionVector) -> Result<Self> {
        Self::from_parts(
            anchor,
            block_size,
            search_range,
            cols,
            rows,
            alloc::vec![mv; cols * rows],
            alloc::vec![0; cols * rows],
        )
    }

    pub fn anchor(&self) -> Anchor {
        self.anchor
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn search_range(&self) -> i32 {
        self.search_range
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[MotionVector] {
        &self.vectors
    }

    pub fn costs(&self) -> &[u64] {
        &self.costs
    }

    #[inline]
    pub fn vector(&self, col: usize, row: usize) -> MotionVector {
        self.vectors[row * self.cols + col]
    }

    #[inline]
    pub fn cost(&self, col: usize, row: usize) -> u64 {
        self.costs[row * self.cols + col]
    }

    /// Top-left pixel of block `(col, row)`.
    #[inline]
    pub fn block_origin(&self, col: usize, row: usize) -> (usize, usize) {
        (col * self.block_size, row * self.block_size)
    }

    /// The same field with every vector negated.
    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.vectors.iter_mut().for_each(|v| *v = -*v);
        out
    }

    pub(crate) fn set(&mut self, index: usize, mv: MotionVector, cost: u64) {
        self.vectors[index] = mv;
        self.costs[index] = cost;
    }

    /// The field applied to a half-resolution chroma grid: block size and
    /// vectors halved (vectors toward zero). Costs are carried unchanged.
    pub(crate) fn for_chroma(&self) -> Self {
        Self {
            block_size: self.block_size / 2,
            search_range: self.search_range / 2,
            vectors: self.vectors.iter().map(|v| v.halved_toward_zero()).collect(),
            ..self.clone()
        }
    }
}

/// Sum of absolute differences between the `block_w`x`block_h` blocks at
/// `origin_a` in `a` and `origin_b` in `b`, with border-clamped reads.
pub fn sad(
    a: &Plane,
    origin_a: (isize, isize),
    b: &Plane,
    origin_b: (isize, isize),
    block_w: usize,
    block_h: usize,
) -> u64 {
    sad_bounded(a, origin_a, b, origin_b, block_w, block_h, u64::MAX)
}

fn inside(p: &Plane, (x, y): (isize, isize), w: usize, h: usize) -> bool {
    x >= 0 && y >= 0 && x as usize + w <= p.width() && y as usize + h <= p.height()
}

/// SAD that stops summing rows once the partial sum reaches `limit`. The
/// result is exact when it is below `limit` and at least `limit` otherwise.
fn sad_bounded(
    a: &Plane,
    origin_a: (isize, isize),
    b: &Plane,
    origin_b: (isize, isize),
    w: usize,
    h: usize,
    limit: u64,
) -> u64 {
    let mut total = 0u64;
    if inside(a, origin_a, w, h) && inside(b, origin_b, w, h) {
        let (ax, ay) = (origin_a.0 as usize, origin_a.1 as usize);
        let (bx, by) = (origin_b.0 as usize, origin_b.1 as usize);
        for r in 0..h {
            let ra = &a.row(ay + r)[ax..ax + w];
            let rb = &b.row(by + r)[bx..bx + w];
            let row: u32 = ra.iter().zip(rb).map(|(&p, &q)| p.abs_diff(q) as u32).sum();
            total += row as u64;
            if total >= limit {
                return total;
            }
        }
    } else {
        for r in 0..h as isize {
            let mut row = 0u32;
            for c in 0..w as isize {
                let p = a.clamped(origin_a.0 + c, origin_a.1 + r);
                let q = b.clamped(origin_b.0 + c, origin_b.1 + r);
                row += p.abs_diff(q) as u32;
            }
            total += row as u64;
            if total >= limit {
                return total;
            }
        }
    }
    total
}

/// Every vector of the `±range` window in tie-break priority order.
pub fn candidate_order(range: i32) -> Vec<MotionVector> {
    let mut out = Vec::with_capacity(((2 * range + 1) * (2 * range + 1)) as usize);
    for dy in -range..=range {
        for dx in -range..=range {
            out.push(MotionVector::new(dx, dy));
        }
    }
    out.sort_by_key(|v| (v.norm_sq(), v.dy, v.dx));
    out
}

fn check_pair(f_p: &Frame, f_n: &Frame, block: usize) -> Result<(usize, usize)> {
    f_p.same_shape(f_n)?;
    let (w, h) = (f_p.width(), f_p.height());
    if w % block != 0 || h % block != 0 {
        return Err(Error::Unaligned {
            width: w,
            height: h,
            block,
        });
    }
    Ok((w / block, h / block))
}

/// Runs the search for every block. `cost(origin, mv, limit)` evaluates one
/// candidate with the bounded-SAD contract.
fn search_field(
    anchor: Anchor,
    block: usize,
    range: i32,
    cols: usize,
    rows: usize,
    cost: impl Fn((isize, isize), MotionVector, u64) -> u64,
) -> MotionField {
    let order = candidate_order(range);
    let mut vectors = Vec::with_capacity(cols * rows);
    let mut costs = Vec::with_capacity(cols * rows);
    for row in 0..rows {
        for col in 0..cols {
            let origin = ((col * block) as isize, (row * block) as isize);
            let mut best = (MotionVector::ZERO, u64::MAX);
            for &mv in &order {
                let c = cost(origin, mv, best.1);
                if c < best.1 {
                    best = (mv, c);
                    if c == 0 {
                        break;
                    }
                }
            }
            vectors.push(best.0);
            costs.push(best.1);
        }
    }
    MotionField {
        anchor,
        block_size: block,
        search_range: range,
        cols,
        rows,
        vectors,
        costs,
    }
}

/// Bilateral search on the luma planes: for every block of the middle
/// frame, the symmetric vector minimizing `SAD(prev(p + mv), next(p - mv))`.
pub fn bilateral_me(f_p: &Frame, f_n: &Frame, cfg: &FrucConfig) -> Result<MotionField> {
    cfg.validate()?;
    let block = cfg.bi_block;
    let (cols, rows) = check_pair(f_p, f_n, block)?;
    let (p, n) = (f_p.luma(), f_n.luma());
    Ok(search_field(Anchor::Interpolated, block, cfg.bi_search, cols, rows, |(x, y), mv, limit| {
        let (dx, dy) = (mv.dx as isize, mv.dy as isize);
        sad_bounded(p, (x + dx, y + dy), n, (x - dx, y - dy), block, block, limit)
    }))
}

fn unilateral_me(src: &Plane, dst: &Plane, anchor: Anchor, cols: usize, rows: usize, cfg: &FrucConfig) -> MotionField {
    let block = cfg.uni_block;
    search_field(anchor, block, cfg.uni_search, cols, rows, |(x, y), mv, limit| {
        sad_bounded(src, (x, y), dst, (x + mv.dx as isize, y + mv.dy as isize), block, block, limit)
    })
}

/// Forward search: blocks of the previous frame matched into the next one.
pub fn forward_me(f_p: &Frame, f_n: &Frame, cfg: &FrucConfig) -> Result<MotionField> {
    cfg.validate()?;
    let (cols, rows) = check_pair(f_p, f_n, cfg.uni_block)?;
    Ok(unilateral_me(f_p.luma(), f_n.luma(), Anchor::Previous, cols, rows, cfg))
}

/// Backward search: blocks of the next frame matched into the previous one.
pub fn backward_me(f_p: &Frame, f_n: &Frame, cfg: &FrucConfig) -> Result<MotionField> {
    cfg.validate()?;
    let (cols, rows) = check_pair(f_p, f_n, cfg.uni_block)?;
    Ok(unilateral_me(f_n.luma(), f_p.luma(), Anchor::Next, cols, rows, cfg))
}

/// Bilateral SAD of a `block_size` block at `origin` along `mv`.
pub fn block_cost_along(f_p: &Frame, f_n: &Frame, origin: (usize, usize), mv: MotionVector, block_size: usize) -> u64 {
    let (x, y) = (origin.0 as isize, origin.1 as isize);
    let (dx, dy) = (mv.dx as isize, mv.dy as isize);
    sad(f_p.luma(), (x + dx, y + dy), f_n.luma(), (x - dx, y - dy), block_size, block_size)
}
