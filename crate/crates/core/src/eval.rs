//! The drop-odd-frames evaluation protocol.
//!
//! Of a sequence with frames `1..=N`, every odd frame from 3 on is withheld
//! and rebuilt from its two even neighbors; the report lists the luma PSNR of
//! each rebuilt frame against the withheld original.

use alloc::string::String;
use alloc::vec::Vec;

use crate::pipeline::{analyze_all, odd_targets, InterpolationMode};
use crate::{psnr, Error, Frame, FrucConfig, Result};

/// Infinite per-frame PSNR counts as this value in averages.
pub const PSNR_CAP_DB: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PsnrReport {
    pub sequence_name: String,
    pub mode: InterpolationMode,
    /// `(1-based frame index, PSNR)`; may contain `+inf`.
    pub per_frame: Vec<(usize, f64)>,
    pub average_db: f64,
}

impl PsnrReport {
    pub fn new(sequence_name: impl Into<String>, mode: InterpolationMode, per_frame: Vec<(usize, f64)>) -> Self {
        let average_db = if per_frame.is_empty() {
            0.0
        } else {
            per_frame.iter().map(|&(_, db)| db.min(PSNR_CAP_DB)).sum::<f64>() / per_frame.len() as f64
        };
        Self {
            sequence_name: sequence_name.into(),
            mode,
            per_frame,
            average_db,
        }
    }
}

fn ensure_len(frames: &[Frame]) -> Result<()> {
    if frames.len() < 4 {
        return Err(Error::TooFewFrames {
            needed: 4,
            got: frames.len(),
        });
    }
    for f in &frames[1..] {
        frames[0].same_shape(f)?;
    }
    Ok(())
}

/// Runs the protocol once and reports every mode.
///
/// The three modes share their motion fields, so this costs about the same
/// as a single-mode run of the proposed mode.
pub fn run_protocol_all_modes(frames: &[Frame], cfg: &FrucConfig, name: &str) -> Result<[PsnrReport; 3]> {
    ensure_len(frames)?;
    let mut rows: [Vec<(usize, f64)>; 3] = Default::default();
    for k in odd_targets(frames.len()) {
        let analysis = analyze_all(&frames[k - 2], &frames[k], cfg)?;
        for (i, mode) in InterpolationMode::ALL.into_iter().enumerate() {
            rows[i].push((k, psnr(&frames[k - 1], &analysis.output(mode))?));
        }
    }
    let [u, b, p] = rows;
    Ok([
        PsnrReport::new(name, InterpolationMode::Unilateral, u),
        PsnrReport::new(name, InterpolationMode::Bilateral, b),
        PsnrReport::new(name, InterpolationMode::Proposed, p),
    ])
}

/// Runs the protocol for `mode`.
pub fn run_protocol(frames: &[Frame], cfg: &FrucConfig, mode: InterpolationMode, name: &str) -> Result<PsnrReport> {
    ensure_len(frames)?;
    let cfg = cfg.with_mode(mode);
    let rebuilt = crate::reconstruct_odd(frames, &cfg)?;
    let per_frame = rebuilt
        .iter()
        .map(|(k, f)| Ok((*k, psnr(&frames[k - 1], f)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PsnrReport::new(name, mode, per_frame))
}
