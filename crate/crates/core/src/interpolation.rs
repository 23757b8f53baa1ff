//! Motion-compensated rendering of the middle frame.
//!
//! Every function works plane by plane. Chroma planes of 4:2:0 frames reuse
//! the luma field on the half-resolution grid (see
//! [`MotionField`]'s chroma projection): block size, OBMC margin and vectors
//! are halved, vectors rounding toward zero.
//!
//! All arithmetic is integer. Each output sample is rounded once, to the
//! nearest integer with halves going up.

use alloc::vec;
use alloc::vec::Vec;

use crate::block_matching::{Anchor, MotionField, MotionVector};
use crate::{Error, Frame, Plane, Result};

#[inline]
fn div_round(num: u32, den: u32) -> u8 {
    ((2 * num + den) / (2 * den)) as u8
}

/// Half of a vector component, rounded half away from zero.
#[inline]
pub fn half_of(v: i32) -> i32 {
    v.signum() * ((v.abs() + 1) / 2)
}

fn half_vector(mv: MotionVector) -> MotionVector {
    MotionVector::new(half_of(mv.dx), half_of(mv.dy))
}

fn check_grid(plane: &Plane, field: &MotionField) -> Result<()> {
    let b = field.block_size();
    if b == 0 || plane.width() != field.cols() * b || plane.height() != field.rows() * b {
        return Err(Error::Unaligned {
            width: plane.width(),
            height: plane.height(),
            block: b,
        });
    }
    Ok(())
}

fn expect_anchor(field: &MotionField, anchor: Anchor) -> Result<()> {
    if field.anchor() != anchor {
        return Err(Error::InvalidConfig("motion field has the wrong anchor"));
    }
    Ok(())
}

/// Applies `render` to the luma plane with `field` and to each chroma plane
/// with the chroma projection of `field`.
fn per_plane(
    f_p: &Frame,
    f_n: &Frame,
    field: &MotionField,
    mut render: impl FnMut(&Plane, &Plane, &MotionField, bool) -> Plane,
) -> Result<Frame> {
    f_p.same_shape(f_n)?;
    check_grid(f_p.luma(), field)?;
    let chroma_field = f_p.chroma().map(|_| field.for_chroma());
    Ok(f_p.map_planes(|i| match i {
        0 => render(f_p.plane(0), f_n.plane(0), field, false),
        _ => render(f_p.plane(i), f_n.plane(i), chroma_field.as_ref().unwrap(), true),
    }))
}

fn bilateral_plane(p: &Plane, n: &Plane, field: &MotionField) -> Plane {
    let b = field.block_size();
    let mut out = Plane::filled(p.width(), p.height(), 0);
    for row in 0..field.rows() {
        for col in 0..field.cols() {
            let mv = field.vector(col, row);
            let (dx, dy) = (mv.dx as isize, mv.dy as isize);
            for y in row * b..(row + 1) * b {
                for x in col * b..(col + 1) * b {
                    let (xi, yi) = (x as isize, y as isize);
                    let s = p.clamped(xi + dx, yi + dy) as u32 + n.clamped(xi - dx, yi - dy) as u32;
                    out.set(x, y, div_round(s, 2));
                }
            }
        }
    }
    out
}

/// Symmetric interpolation: each pixel is the mean of `prev(p + mv)` and
/// `next(p - mv)` with `mv` the vector of its block.
pub fn bilateral_mci(f_p: &Frame, f_n: &Frame, field: &MotionField) -> Result<Frame> {
    expect_anchor(field, Anchor::Interpolated)?;
    per_plane(f_p, f_n, field, |p, n, fld, _| bilateral_plane(p, n, fld))
}

/// Offsets of the blocks whose enlarged footprint covers local coordinate
/// `u` of block `index` along one axis.
fn covering(u: usize, index: usize, count: usize, block: usize, margin: usize, out: &mut [isize; 2]) -> usize {
    out[0] = 0;
    let mut len = 1;
    if u < margin && index > 0 {
        out[len] = -1;
        len += 1;
    } else if u + margin >= block && index + 1 < count {
        out[len] = 1;
        len += 1;
    }
    len
}

fn obmc_plane(p: &Plane, n: &Plane, field: &MotionField, margin: usize) -> Plane {
    let b = field.block_size();
    let (cols, rows) = (field.cols(), field.rows());
    let mut out = Plane::filled(p.width(), p.height(), 0);
    let (mut hs, mut vs) = ([0isize; 2], [0isize; 2]);
    for row in 0..rows {
        for col in 0..cols {
            for v in 0..b {
                let nv = covering(v, row, rows, b, margin, &mut vs);
                let y = row * b + v;
                for u in 0..b {
                    let nh = covering(u, col, cols, b, margin, &mut hs);
                    let x = col * b + u;
                    let (xi, yi) = (x as isize, y as isize);
                    let mut sum = 0u32;
                    for &oy in &vs[..nv] {
                        for &ox in &hs[..nh] {
                            let mv = field.vector((col as isize + ox) as usize, (row as isize + oy) as usize);
                            let (dx, dy) = (mv.dx as isize, mv.dy as isize);
                            sum += p.clamped(xi + dx, yi + dy) as u32 + n.clamped(xi - dx, yi - dy) as u32;
                        }
                    }
                    out.set(x, y, div_round(sum, 2 * (nh * nv) as u32));
                }
            }
        }
    }
    out
}

/// Overlapped block motion compensation.
///
/// Each block is enlarged by `margin` on every side. A pixel covered by `k`
/// enlarged blocks averages the `2k` predictions `prev(p + mv_i)`,
/// `next(p - mv_i)` with equal weight `1 / 2k`: `k = 1` in a block's
/// interior, 2 along its edges and 4 in its corners. Neighbors beyond the
/// frame border are not counted.
pub fn obmc(f_p: &Frame, f_n: &Frame, field: &MotionField, margin: usize) -> Result<Frame> {
    expect_anchor(field, Anchor::Interpolated)?;
    if 2 * margin >= field.block_size() {
        return Err(Error::InvalidConfig("obmc margin must be below half the block size"));
    }
    per_plane(f_p, f_n, field, |p, n, fld, chroma| {
        obmc_plane(p, n, fld, if chroma { margin / 2 } else { margin })
    })
}

/// Per-pixel accumulator for splatted predictions.
///
/// `sums` holds the sum of both reference samples of every splat (twice the
/// predicted value) and `counts` the number of splats; a zero count marks a
/// hole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Accumulator {
    width: usize,
    height: usize,
    sums: Vec<u32>,
    counts: Vec<u32>,
}

impl Accumulator {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            sums: vec![0; width * height],
            counts: vec![0; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn sums(&self) -> &[u32] {
        &self.sums
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Adds one prediction whose two reference samples sum to `pair`.
    #[inline]
    pub fn add(&mut self, x: usize, y: usize, pair: u32) {
        let i = y * self.width + x;
        self.sums[i] += pair;
        self.counts[i] += 1;
    }

    #[inline]
    pub fn is_hole(&self, x: usize, y: usize) -> bool {
        self.counts[y * self.width + x] == 0
    }

    /// Mean of the overlapping predictions, or `None` for a hole.
    #[inline]
    pub fn resolved(&self, x: usize, y: usize) -> Option<u8> {
        let i = y * self.width + x;
        match self.counts[i] {
            0 => None,
            c => Some(div_round(self.sums[i], 2 * c)),
        }
    }

    pub fn hole_count(&self) -> usize {
        self.counts.iter().filter(|&&c| c == 0).count()
    }

    /// Row-major hole mask, `true` where nothing was splatted.
    pub fn hole_mask(&self) -> Vec<bool> {
        self.counts.iter().map(|&c| c == 0).collect()
    }
}

/// Splat accumulators for every plane of a frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccumulatorFrame {
    pub luma: Accumulator,
    pub chroma: Option<[Accumulator; 2]>,
}

impl AccumulatorFrame {
    fn plane(&self, index: usize) -> &Accumulator {
        match index {
            0 => &self.luma,
            i => &self.chroma.as_ref().expect("accumulator has no chroma")[i - 1],
        }
    }

    pub fn width(&self) -> usize {
        self.luma.width
    }

    pub fn height(&self) -> usize {
        self.luma.height
    }
}

fn splat_plane(src: &Plane, dst: &Plane, field: &MotionField) -> Accumulator {
    let b = field.block_size();
    let (w, h) = (src.width() as isize, src.height() as isize);
    let mut acc = Accumulator::new(src.width(), src.height());
    for row in 0..field.rows() {
        for col in 0..field.cols() {
            let mv = field.vector(col, row);
            let half = half_vector(mv);
            for y in row * b..(row + 1) * b {
                let ty = y as isize + half.dy as isize;
                if ty < 0 || ty >= h {
                    continue;
                }
                for x in col * b..(col + 1) * b {
                    let tx = x as isize + half.dx as isize;
                    if tx < 0 || tx >= w {
                        continue;
                    }
                    let matched = dst.clamped(x as isize + mv.dx as isize, y as isize + mv.dy as isize);
                    acc.add(tx as usize, ty as usize, src.get(x, y) as u32 + matched as u32);
                }
            }
        }
    }
    acc
}

/// Unilateral interpolation along a forward or backward field.
///
/// Every block of the anchor frame, averaged with its match in the other
/// reference, is written to the middle frame at its own position moved by
/// half the vector. Overlapping writes accumulate and unwritten pixels
/// remain holes.
pub fn unilateral_mci(f_p: &Frame, f_n: &Frame, field: &MotionField) -> Result<AccumulatorFrame> {
    let (src, dst) = match field.anchor() {
        Anchor::Previous => (f_p, f_n),
        Anchor::Next => (f_n, f_p),
        Anchor::Interpolated => {
            return Err(Error::InvalidConfig("unilateral interpolation needs a forward or backward field"))
        }
    };
    src.same_shape(dst)?;
    check_grid(src.luma(), field)?;
    let luma = splat_plane(src.luma(), dst.luma(), field);
    let chroma = src.chroma().zip(dst.chroma()).map(|([su, sv], [du, dv])| {
        let cf = field.for_chroma();
        [splat_plane(su, du, &cf), splat_plane(sv, dv, &cf)]
    });
    Ok(AccumulatorFrame { luma, chroma })
}

fn merge_plane(f: &Accumulator, b: &Accumulator, bi: &Plane) -> Plane {
    Plane::from_fn(bi.width(), bi.height(), |x, y| match (f.resolved(x, y), b.resolved(x, y)) {
        (Some(fv), Some(bv)) => div_round(fv as u32 + bv as u32, 2),
        (Some(v), None) | (None, Some(v)) => v,
        (None, None) => bi.get(x, y),
    })
}

/// Joins the forward and backward splats: a pixel present in both is their
/// mean, a pixel present in one takes that value, and a pixel missing from
/// both is taken from the bilateral frame.
pub fn merge_unilateral(f_f: &AccumulatorFrame, f_b: &AccumulatorFrame, f_bi: &Frame) -> Result<Frame> {
    for acc in [f_f, f_b] {
        if (acc.width(), acc.height()) != (f_bi.width(), f_bi.height())
            || acc.chroma.is_some() != f_bi.chroma().is_some()
        {
            return Err(Error::DimensionMismatch {
                expected: (f_bi.width(), f_bi.height()),
                actual: (acc.width(), acc.height()),
            });
        }
    }
    Ok(f_bi.map_planes(|i| merge_plane(f_f.plane(i), f_b.plane(i), f_bi.plane(i))))
}

/// Which blend a fused block uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusionBranch {
    /// `(bi + uni) / 2`, taken when the block's SAD is at least the threshold.
    Average,
    /// `(2 bi + uni) / 3`, favoring the bilateral frame.
    BilateralWeighted,
}

/// Running thresholds: for block `k` in raster order, the mean cost of
/// blocks `0..k`. The first block has no history and gets `+inf`.
pub fn adaptive_thresholds(block_costs: &[u64]) -> Vec<f64> {
    let mut sum = 0u64;
    let mut out = Vec::with_capacity(block_costs.len());
    for (k, &c) in block_costs.iter().enumerate() {
        out.push(if k == 0 { f64::INFINITY } else { sum as f64 / k as f64 });
        sum += c;
    }
    out
}

/// Branch of every block, compared exactly as `cost * k >= sum(costs[..k])`.
pub fn fusion_branches(block_costs: &[u64]) -> Vec<FusionBranch> {
    let mut sum = 0u128;
    let mut out = Vec::with_capacity(block_costs.len());
    for (k, &c) in block_costs.iter().enumerate() {
        let average = k > 0 && c as u128 * k as u128 >= sum;
        out.push(if average {
            FusionBranch::Average
        } else {
            FusionBranch::BilateralWeighted
        });
        sum += c as u128;
    }
    out
}

fn fuse_plane(bi: &Plane, fi: &Plane, branches: &[FusionBranch], cols: usize, block: usize) -> Plane {
    Plane::from_fn(bi.width(), bi.height(), |x, y| {
        let (a, b) = (bi.get(x, y) as u32, fi.get(x, y) as u32);
        match branches[(y / block) * cols + x / block] {
            FusionBranch::Average => div_round(a + b, 2),
            FusionBranch::BilateralWeighted => div_round(2 * a + b, 3),
        }
    })
}

/// Block-wise blend of the bilateral and merged unilateral frames, choosing
/// the branch of each `block_size` block from [`fusion_branches`].
pub fn adaptive_fusion(f_bi: &Frame, f_i: &Frame, block_costs: &[u64], block_size: usize) -> Result<Frame> {
    f_bi.same_shape(f_i)?;
    let (w, h) = (f_bi.width(), f_bi.height());
    if block_size == 0 || w % block_size != 0 || h % block_size != 0 {
        return Err(Error::Unaligned {
            width: w,
            height: h,
            block: block_size,
        });
    }
    let cols = w / block_size;
    if block_costs.len() != cols * (h / block_size) {
        return Err(Error::PlaneSize {
            expected: cols * (h / block_size),
            actual: block_costs.len(),
        });
    }
    if f_bi.chroma().is_some() && !block_size.is_multiple_of(2) {
        return Err(Error::InvalidConfig("4:2:0 input needs even block sizes"));
    }
    let branches = fusion_branches(block_costs);
    Ok(f_bi.map_planes(|i| {
        let block = if i == 0 { block_size } else { block_size / 2 };
        fuse_plane(f_bi.plane(i), f_i.plane(i), &branches, cols, block)
    }))
}

/// Every intermediate of one interpolation.
#[derive(Debug, Clone)]
pub struct InterpolationSet {
    /// Smoothed bilateral field.
    pub bilateral_field: MotionField,
    pub forward_field: Option<MotionField>,
    pub backward_field: Option<MotionField>,
    /// Bilateral frame after OBMC.
    pub f_bi: Frame,
    pub f_f: Option<AccumulatorFrame>,
    pub f_b: Option<AccumulatorFrame>,
    /// Merged unilateral frame.
    pub f_i: Option<Frame>,
    /// Fused frame.
    pub f_u: Option<Frame>,
    /// Per-block SAD of the smoothed bilateral field.
    pub block_costs: Vec<u64>,
}
