//! Motion-compensated frame-rate up-conversion.
//!
//! The crate combines three motion searches over a frame pair: bilateral
//! (anchored on the frame being synthesized), forward and backward
//! (anchored on the two reference frames). The bilateral field is smoothed
//! with a vector median filter and rendered with overlapped block motion
//! compensation. The unilateral fields are splatted onto the middle frame,
//! merged, and their holes are filled from the bilateral frame. Both
//! candidates are then fused per block against a running SAD threshold.
//!
//! Everything here is pure computation over in-memory planes and only needs
//! `alloc`. Container parsing, reports and the command line live in the
//! `fruc` crate.

#![no_std]

extern crate alloc;

pub mod block_matching;
mod config;
mod error;
pub mod eval;
pub mod frame;
pub mod interpolation;
pub mod metrics;
pub mod pipeline;
pub mod smoothing;
pub mod synth;

pub use block_matching::{Anchor, MotionField, MotionVector};
pub use config::FrucConfig;
pub use error::{Error, Result};
pub use eval::{run_protocol, PsnrReport};
pub use frame::{ColorMode, Frame, Plane, Rational, SequenceMeta};
pub use metrics::psnr;
pub use pipeline::{double_rate, interpolate_between, reconstruct_odd, InterpolationMode};
