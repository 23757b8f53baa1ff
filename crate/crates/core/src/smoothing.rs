//! 3x3 vector median smoothing of the bilateral field.

use alloc::vec::Vec;

use crate::block_matching::{block_cost_along, MotionField, MotionVector};
use crate::{Error, Frame, Result};

fn euclidean(a: MotionVector, b: MotionVector) -> f64 {
    let dx = (a.dx - b.dx) as f64;
    let dy = (a.dy - b.dy) as f64;
    libm::sqrt(dx * dx + dy * dy)
}

/// Squared distances above this are compared in floating point only.
const EXACT_LIMIT: u64 = 1 << 32;

/// `sqrt(n)` as `k·sqrt(m)` with `m` square-free.
fn split_square(mut n: u64) -> (u64, u64) {
    let mut k = 1;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p * p) {
            n /= p * p;
            k *= p;
        }
        p += 1;
    }
    (n, k)
}

/// The summed distance from `v` to every candidate as exact coefficients
/// of distinct square-free radicals, sorted by radicand. `None` when a
/// distance is too large to factor cheaply.
fn exact_sum(v: MotionVector, candidates: &[MotionVector]) -> Option<Vec<(u64, u64)>> {
    let mut terms = Vec::with_capacity(candidates.len());
    for &u in candidates {
        let n = MotionVector::new(v.dx - u.dx, v.dy - u.dy).norm_sq() as u64;
        if n >= EXACT_LIMIT {
            return None;
        }
        if n > 0 {
            terms.push(split_square(n));
        }
    }
    terms.sort_unstable();
    let mut merged: Vec<(u64, u64)> = Vec::with_capacity(terms.len());
    for (m, k) in terms {
        match merged.last_mut() {
            Some(last) if last.0 == m => last.1 += k,
            _ => merged.push((m, k)),
        }
    }
    Some(merged)
}

/// The candidate with the smallest summed Euclidean distance to all
/// candidates. Ties go to the earliest candidate in the list.
///
/// Sums of square roots that are equal in exact arithmetic can differ in
/// the last bit once rounded, so equality is decided on the exact radical
/// form and only strict orderings come from floating point.
pub fn vector_median(candidates: &[MotionVector]) -> Result<MotionVector> {
    let mut best: Option<(MotionVector, f64)> = None;
    for &v in candidates {
        let total: f64 = candidates.iter().map(|&u| euclidean(v, u)).sum();
        let better = match best {
            None => true,
            Some((b, best_total)) if (total - best_total).abs() <= 1e-9 * best_total.max(1.0) => {
                match (exact_sum(v, candidates), exact_sum(b, candidates)) {
                    (Some(e), Some(be)) if e == be => false,
                    _ => total < best_total,
                }
            }
            Some((_, best_total)) => total < best_total,
        };
        if better {
            best = Some((v, total));
        }
    }
    best.map(|(v, _)| v).ok_or(Error::EmptyCandidates)
}

/// Replaces every vector by the vector median of its 3x3 neighborhood
/// (self first, then the neighbors in raster order; border blocks use the
/// neighbors that exist). Costs are re-evaluated along the new vectors.
pub fn smooth_field(field: &MotionField, f_p: &Frame, f_n: &Frame) -> MotionField {
    let (cols, rows) = (field.cols(), field.rows());
    let block = field.block_size();
    let mut out = field.clone();
    let mut neighborhood = Vec::with_capacity(9);
    for row in 0..rows {
        for col in 0..cols {
            neighborhood.clear();
            neighborhood.push(field.vector(col, row));
            for r in row.saturating_sub(1)..=(row + 1).min(rows - 1) {
                for c in col.saturating_sub(1)..=(col + 1).min(cols - 1) {
                    if (c, r) != (col, row) {
                        neighborhood.push(field.vector(c, r));
                    }
                }
            }
            let mv = vector_median(&neighborhood).expect("neighborhood holds the block itself");
            let cost = block_cost_along(f_p, f_n, field.block_origin(col, row), mv, block);
            out.set(row * cols + col, mv, cost);
        }
    }
    out
}
