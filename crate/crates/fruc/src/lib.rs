//! Frame-rate up-conversion tooling on top of [`fruc_core`]: YUV4MPEG2 and
//! raw planar IO, the drop-odd-frames PSNR protocol with CSV reports, debug
//! dumps, and the `fruc` command line.

pub mod cli;
pub mod dump;
mod error;
pub mod protocol;
pub mod raw;
pub mod report;
pub mod synth_args;
pub mod y4m;

pub use error::{Error, Result};
pub use fruc_core;
