//! Multi-threaded drivers for the evaluation protocol and rate doubling.
//!
//! Frame pairs are independent, so they are spread over the rayon pool.
//! Results are collected in index order, which makes the output identical
//! to the sequential functions in `fruc_core`.

use rayon::prelude::*;

use fruc_core::pipeline::{analyze, analyze_all, odd_targets};
use fruc_core::{psnr, Error as CoreError, Frame, FrucConfig, InterpolationMode, PsnrReport, SequenceMeta};

use crate::dump::DumpTargets;
use crate::Result;

fn check_sequence(frames: &[Frame], needed: usize) -> Result<()> {
    if frames.len() < needed {
        return Err(CoreError::TooFewFrames { needed, got: frames.len() }.into());
    }
    for f in &frames[1..] {
        frames[0].same_shape(f)?;
    }
    Ok(())
}

/// Withholds every odd frame from 3 on, rebuilds it and reports PSNR for
/// each of `modes`. Reports come back in the order of `modes`.
///
/// With `dumps`, the analysis of each target `k` is written under index `k`.
pub fn evaluate(
    frames: &[Frame],
    cfg: &FrucConfig,
    modes: &[InterpolationMode],
    name: &str,
    dumps: Option<&DumpTargets>,
) -> Result<Vec<PsnrReport>> {
    check_sequence(frames, 4)?;
    let only_bilateral = modes.iter().all(|&m| m == InterpolationMode::Bilateral);
    let targets: Vec<usize> = odd_targets(frames.len()).collect();
    let rows = targets
        .par_iter()
        .map(|&k| -> Result<Vec<f64>> {
            let (prev, next) = (&frames[k - 2], &frames[k]);
            let analysis = if only_bilateral {
                analyze(prev, next, &cfg.with_mode(InterpolationMode::Bilateral))?
            } else {
                analyze_all(prev, next, cfg)?
            };
            if let Some(d) = dumps {
                d.write(k, &analysis)?;
            }
            modes
                .iter()
                .map(|&m| Ok(psnr(&frames[k - 1], &analysis.output(m))?))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(modes
        .iter()
        .enumerate()
        .map(|(i, &mode)| {
            let per_frame = targets.iter().zip(&rows).map(|(&k, r)| (k, r[i])).collect();
            PsnrReport::new(name, mode, per_frame)
        })
        .collect())
}

/// Inserts an interpolated frame between every consecutive pair. Dumps for
/// the frame inserted after input `i` (0-based) use output index `2i + 2`.
pub fn double_rate(
    meta: &SequenceMeta,
    frames: &[Frame],
    cfg: &FrucConfig,
    dumps: Option<&DumpTargets>,
) -> Result<(SequenceMeta, Vec<Frame>)> {
    check_sequence(frames, 2)?;
    for f in frames {
        meta.check_frame(f)?;
    }
    let middles = frames
        .par_windows(2)
        .enumerate()
        .map(|(i, pair)| -> Result<Frame> {
            let analysis = analyze(&pair[0], &pair[1], cfg)?;
            if let Some(d) = dumps {
                d.write(2 * i + 2, &analysis)?;
            }
            Ok(analysis.output(cfg.mode))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(2 * frames.len() - 1);
    out.push(frames[0].clone());
    for (mid, next) in middles.into_iter().zip(&frames[1..]) {
        out.push(mid);
        out.push(next.clone());
    }
    let meta = SequenceMeta {
        frame_rate: meta.frame_rate.doubled(),
        frame_count: Some(out.len()),
        ..meta.clone()
    };
    Ok((meta, out))
}
