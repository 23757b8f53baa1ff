use core::fmt;
use core::str::FromStr;

use crate::{ColorMode, Error, Result};

/// Which candidate frame the pipeline returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InterpolationMode {
    /// Forward and backward splats merged, holes filled from the bilateral frame.
    Unilateral,
    /// Smoothed bilateral field rendered with OBMC.
    Bilateral,
    /// Block-wise adaptive fusion of the two.
    #[default]
    Proposed,
}

impl InterpolationMode {
    pub const ALL: [InterpolationMode; 3] = [
        InterpolationMode::Unilateral,
        InterpolationMode::Bilateral,
        InterpolationMode::Proposed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InterpolationMode::Unilateral => "unilateral",
            InterpolationMode::Bilateral => "bilateral",
            InterpolationMode::Proposed => "proposed",
        }
    }
}

impl fmt::Display for InterpolationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InterpolationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unilateral" => Ok(InterpolationMode::Unilateral),
            "bilateral" => Ok(InterpolationMode::Bilateral),
            "proposed" => Ok(InterpolationMode::Proposed),
            _ => Err(Error::InvalidConfig("mode must be unilateral, bilateral or proposed")),
        }
    }
}

/// Block sizes and search windows for the three motion searches.
///
/// The defaults are the CIF settings: 8x8 blocks searched over ±16 for the
/// unilateral fields, 16x16 blocks over ±8 for the bilateral field, and a
/// 2-pixel OBMC margin (16x16 blocks enlarged to 20x20).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrucConfig {
    pub uni_block: usize,
    pub uni_search: i32,
    pub bi_block: usize,
    pub bi_search: i32,
    pub obmc_margin: usize,
    pub mode: InterpolationMode,
}

impl Default for FrucConfig {
    fn default() -> Self {
        Self {
            uni_block: 8,
            uni_search: 16,
            bi_block: 16,
            bi_search: 8,
            obmc_margin: 2,
            mode: InterpolationMode::Proposed,
        }
    }
}

impl FrucConfig {
    pub fn with_mode(mut self, mode: InterpolationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.uni_block == 0 || self.bi_block == 0 {
            return Err(Error::InvalidConfig("block sizes must be at least 1"));
        }
        if self.uni_search < 0 || self.bi_search < 0 {
            return Err(Error::InvalidConfig("search ranges must be non-negative"));
        }
        if 2 * self.obmc_margin >= self.bi_block {
            return Err(Error::InvalidConfig("obmc margin must be below half the bilateral block"));
        }
        Ok(())
    }

    /// Additional constraints for frames carrying 4:2:0 chroma, whose
    /// block grids are half the luma ones.
    pub fn validate_for(&self, mode: ColorMode) -> Result<()> {
        self.validate()?;
        if mode == ColorMode::Yuv420 && (!self.uni_block.is_multiple_of(2) || !self.bi_block.is_multiple_of(2)) {
            return Err(Error::InvalidConfig("4:2:0 input needs even block sizes"));
        }
        Ok(())
    }

    /// Alignment every frame is padded to before processing.
    pub fn alignment(&self) -> usize {
        lcm(self.uni_block, self.bi_block)
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_cif_settings() {
        let cfg = FrucConfig::default();
        assert_eq!((cfg.uni_block, cfg.uni_search), (8, 16));
        assert_eq!((cfg.bi_block, cfg.bi_search), (16, 8));
        assert_eq!(cfg.bi_block + 2 * cfg.obmc_margin, 20);
        assert_eq!(cfg.alignment(), 16);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_wide_margin() {
        let cfg = FrucConfig {
            obmc_margin: 8,
            ..FrucConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = FrucConfig {
            uni_block: 0,
            ..FrucConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn odd_blocks_rejected_for_chroma() {
        let cfg = FrucConfig {
            uni_block: 5,
            ..FrucConfig::default()
        };
        cfg.validate_for(ColorMode::LumaOnly).unwrap();
        assert!(cfg.validate_for(ColorMode::Yuv420).is_err());
        assert_eq!(cfg.alignment(), 80);
    }

    #[test]
    fn mode_names_round_trip() {
        for mode in InterpolationMode::ALL {
            assert_eq!(mode.as_str().parse::<InterpolationMode>().unwrap(), mode);
        }
        assert!("median".parse::<InterpolationMode>().is_err());
    }
}
