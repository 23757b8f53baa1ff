use fruc_core::block_matching::{bilateral_me, forward_me, MotionVector};
use fruc_core::eval::run_protocol_all_modes;
use fruc_core::interpolation::unilateral_mci;
use fruc_core::pipeline::analyze_all;
use fruc_core::synth::{synth_sequence, Background, Mover, SynthSpec, Texture};
use fruc_core::{psnr, run_protocol, ColorMode, Frame, FrucConfig, InterpolationMode, Plane};

fn moving_square(frames: usize, velocity: (i64, i64)) -> SynthSpec {
    SynthSpec::new(96, 64, frames, Background::Noise(Texture::new(11, 6))).with_mover(Mover {
        texture: Texture::new(5, 2),
        width: 24,
        height: 24,
        start: (20, 16),
        velocity,
    })
}

#[test]
fn withheld_frames_are_never_read() {
    let frames = synth_sequence(&moving_square(10, (2, 0))).unwrap();
    let mut corrupted = frames.clone();
    let cfg = FrucConfig::default();
    for k in (3..10).step_by(2) {
        // corrupt frame k (1-based) in the copy handed to the interpolator
        corrupted[k - 1] = Frame::luma_only(Plane::filled(96, 64, 0));
    }
    for mode in InterpolationMode::ALL {
        let clean: Vec<_> = fruc_core::reconstruct_odd(&frames, &cfg.with_mode(mode)).unwrap();
        let dirty: Vec<_> = fruc_core::reconstruct_odd(&corrupted, &cfg.with_mode(mode)).unwrap();
        assert_eq!(clean, dirty, "{mode}");
    }
}

#[test]
fn combined_protocol_matches_single_mode_runs() {
    let frames = synth_sequence(&moving_square(9, (4, -2))).unwrap();
    let cfg = FrucConfig::default();
    let all = run_protocol_all_modes(&frames, &cfg, "sq").unwrap();
    for (report, mode) in all.iter().zip(InterpolationMode::ALL) {
        assert_eq!(report, &run_protocol(&frames, &cfg, mode, "sq").unwrap());
        assert_eq!(report.per_frame.iter().map(|e| e.0).collect::<Vec<_>>(), vec![3, 5, 7]);
    }
}

#[test]
fn global_translation_recovers_motion() {
    let spec = SynthSpec::new(96, 96, 3, Background::Noise(Texture::new(2, 3)));
    let full = Mover {
        texture: Texture::new(8, 3),
        width: 400,
        height: 400,
        start: (-150, -150),
        velocity: (4, 2),
    };
    let spec = spec.with_mover(full);
    let frames = synth_sequence(&spec).unwrap();
    let cfg = FrucConfig::default();
    // content at p in frame 0 sits at p + (4, 2) in frame 1
    let fwd = forward_me(&frames[0], &frames[1], &cfg).unwrap();
    let interior = fwd.cols() / 2 + fwd.cols() * (fwd.rows() / 2);
    assert_eq!(fwd.vectors()[interior], MotionVector { dx: 4, dy: 2 });
    let bi = bilateral_me(&frames[0], &frames[1], &cfg).unwrap();
    let interior = bi.cols() / 2 + bi.cols() * (bi.rows() / 2);
    assert_eq!(bi.vectors()[interior], MotionVector { dx: -2, dy: -1 });
    assert_eq!(bi.costs()[interior], 0);
}

/// Luma without a `border`-pixel frame, where content enters the picture.
fn interior(f: &Frame, border: usize) -> Frame {
    let (w, h) = (f.width() - 2 * border, f.height() - 2 * border);
    Frame::luma_only(Plane::from_fn(w, h, |x, y| f.luma().get(x + border, y + border)))
}

#[test]
fn global_pan_matches_half_step_truth_in_every_mode() {
    let spec = SynthSpec::new(96, 64, 3, Background::Flat(0)).with_mover(Mover {
        texture: Texture::new(8, 3),
        width: 300,
        height: 300,
        start: (-100, -100),
        velocity: (4, 2),
    });
    let frames = synth_sequence(&spec).unwrap();
    let truth = spec.render_half_step(1).unwrap();
    for mode in InterpolationMode::ALL {
        let out = fruc_core::interpolate_between(&frames[0], &frames[1], &FrucConfig::default().with_mode(mode)).unwrap();
        let db = psnr(&interior(&truth, 16), &interior(&out, 16)).unwrap();
        assert!(db > 40.0, "{mode}: {db}");
    }
}

#[test]
fn unilateral_handles_a_small_mover_on_static_background() {
    let spec = moving_square(3, (4, 2));
    let frames = synth_sequence(&spec).unwrap();
    let truth = spec.render_half_step(1).unwrap();
    let cfg = FrucConfig::default().with_mode(InterpolationMode::Unilateral);
    let out = fruc_core::interpolate_between(&frames[0], &frames[1], &cfg).unwrap();
    assert!(psnr(&truth, &out).unwrap() > 35.0);
}

#[test]
fn fast_mover_leaves_holes_that_merge_fills() {
    let spec = SynthSpec::new(128, 64, 2, Background::Flat(40)).with_mover(Mover {
        texture: Texture::new(1, 1),
        width: 32,
        height: 32,
        start: (32, 16),
        velocity: (8, 0),
    });
    let frames = synth_sequence(&spec).unwrap();
    let cfg = FrucConfig::default();
    let fwd = forward_me(&frames[0], &frames[1], &cfg).unwrap();
    let acc = unilateral_mci(&frames[0], &frames[1], &fwd).unwrap();
    assert!(acc.luma.hole_count() > 0);
    let analysis = analyze_all(&frames[0], &frames[1], &cfg).unwrap();
    assert!(analysis.set.f_f.as_ref().unwrap().luma.hole_count() > 0);
    let merged = analysis.output(InterpolationMode::Unilateral);
    assert_eq!((merged.width(), merged.height()), (128, 64));
}

#[test]
fn unaligned_yuv_sequence_round_trips_through_padding() {
    let mut spec = moving_square(4, (2, 2));
    spec.width = 90;
    spec.height = 62;
    spec.color_mode = ColorMode::Yuv420;
    let frames = synth_sequence(&spec).unwrap();
    let out = fruc_core::interpolate_between(&frames[0], &frames[1], &FrucConfig::default()).unwrap();
    assert_eq!((out.width(), out.height(), out.color_mode()), (90, 62, ColorMode::Yuv420));
    assert!(out.chroma().unwrap().iter().all(|p| p.data().iter().all(|&v| v == 128)));
}
