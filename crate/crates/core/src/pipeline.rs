//! End-to-end interpolation of frame pairs and sequences.
//!
//! Frames are padded to the block alignment of the configuration on entry
//! and cropped back on exit; every stage in between sees aligned frames.
//!
//! Sequence indices in this module are 1-based to match the evaluation
//! protocol (frame 1 is `frames[0]`).

use alloc::vec::Vec;

use crate::block_matching::{backward_me, bilateral_me, forward_me};
use crate::frame::{crop, pad_to_multiple};
use crate::interpolation::{
    adaptive_fusion, merge_unilateral, obmc, unilateral_mci, InterpolationSet,
};
use crate::smoothing::smooth_field;
use crate::{Error, Frame, FrucConfig, Result, SequenceMeta};

pub use crate::config::InterpolationMode;

/// All stages computed for one frame pair, on padded frames.
#[derive(Debug, Clone)]
pub struct PairAnalysis {
    pub set: InterpolationSet,
    width: usize,
    height: usize,
}

impl PairAnalysis {
    /// The middle frame produced by `mode`, cropped to the input size.
    ///
    /// # Panics
    ///
    /// If the analysis was run without the unilateral branch and `mode`
    /// needs it.
    pub fn output(&self, mode: InterpolationMode) -> Frame {
        let padded = match mode {
            InterpolationMode::Bilateral => &self.set.f_bi,
            InterpolationMode::Unilateral => self.set.f_i.as_ref().expect("unilateral branch not computed"),
            InterpolationMode::Proposed => self.set.f_u.as_ref().expect("unilateral branch not computed"),
        };
        crop(padded, self.width, self.height).expect("crop to the original size")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }
}

fn analyze_inner(f_p: &Frame, f_n: &Frame, cfg: &FrucConfig, unilateral: bool) -> Result<PairAnalysis> {
    f_p.same_shape(f_n)?;
    cfg.validate_for(f_p.color_mode())?;
    let (width, height) = (f_p.width(), f_p.height());
    let align = cfg.alignment();
    let (p, n) = (pad_to_multiple(f_p, align), pad_to_multiple(f_n, align));

    let raw = bilateral_me(&p, &n, cfg)?;
    let bilateral_field = smooth_field(&raw, &p, &n);
    let f_bi = obmc(&p, &n, &bilateral_field, cfg.obmc_margin)?;
    let block_costs = bilateral_field.costs().to_vec();

    let mut set = InterpolationSet {
        bilateral_field,
        forward_field: None,
        backward_field: None,
        f_bi,
        f_f: None,
        f_b: None,
        f_i: None,
        f_u: None,
        block_costs,
    };
    if unilateral {
        let fwd = forward_me(&p, &n, cfg)?;
        let bwd = backward_me(&p, &n, cfg)?;
        let f_f = unilateral_mci(&p, &n, &fwd)?;
        let f_b = unilateral_mci(&p, &n, &bwd)?;
        let f_i = merge_unilateral(&f_f, &f_b, &set.f_bi)?;
        let f_u = adaptive_fusion(&set.f_bi, &f_i, &set.block_costs, cfg.bi_block)?;
        set.forward_field = Some(fwd);
        set.backward_field = Some(bwd);
        set.f_f = Some(f_f);
        set.f_b = Some(f_b);
        set.f_i = Some(f_i);
        set.f_u = Some(f_u);
    }
    Ok(PairAnalysis { set, width, height })
}

/// Runs the stages `cfg.mode` needs.
pub fn analyze(f_p: &Frame, f_n: &Frame, cfg: &FrucConfig) -> Result<PairAnalysis> {
    analyze_inner(f_p, f_n, cfg, cfg.mode != InterpolationMode::Bilateral)
}

/// Runs every stage, so [`PairAnalysis::output`] works for all modes.
pub fn analyze_all(f_p: &Frame, f_n: &Frame, cfg: &FrucConfig) -> Result<PairAnalysis> {
    analyze_inner(f_p, f_n, cfg, true)
}

/// The frame halfway between `f_p` and `f_n`.
pub fn interpolate_between(f_p: &Frame, f_n: &Frame, cfg: &FrucConfig) -> Result<Frame> {
    Ok(analyze(f_p, f_n, cfg)?.output(cfg.mode))
}

/// Inserts one interpolated frame between every consecutive pair.
pub fn double_rate(meta: &SequenceMeta, frames: &[Frame], cfg: &FrucConfig) -> Result<(SequenceMeta, Vec<Frame>)> {
    if frames.len() < 2 {
        return Err(Error::TooFewFrames {
            needed: 2,
            got: frames.len(),
        });
    }
    for f in frames {
        meta.check_frame(f)?;
    }
    let mut out = Vec::with_capacity(2 * frames.len() - 1);
    out.push(frames[0].clone());
    for pair in frames.windows(2) {
        out.push(interpolate_between(&pair[0], &pair[1], cfg)?);
        out.push(pair[1].clone());
    }
    let meta = SequenceMeta {
        frame_rate: meta.frame_rate.doubled(),
        frame_count: Some(out.len()),
        ..meta.clone()
    };
    Ok((meta, out))
}

/// 1-based indices of the frames the protocol withholds: 3, 5, ... up to
/// the last odd index that still has a successor. Frame 1 is never used.
pub fn odd_targets(frame_count: usize) -> impl Iterator<Item = usize> {
    (3..frame_count).step_by(2)
}

/// Rebuilds every withheld odd frame from its even neighbors, returning
/// `(1-based index, frame)` pairs. The odd frames themselves are never read.
pub fn reconstruct_odd(frames: &[Frame], cfg: &FrucConfig) -> Result<Vec<(usize, Frame)>> {
    if frames.len() < 4 {
        return Err(Error::TooFewFrames {
            needed: 4,
            got: frames.len(),
        });
    }
    // 1-based k lives at frames[k - 1]; its neighbors are frames[k - 2] and frames[k]
    odd_targets(frames.len())
        .map(|k| Ok((k, interpolate_between(&frames[k - 2], &frames[k], cfg)?)))
        .collect()
}
