//! Deterministic synthetic sequences with known motion.
//!
//! A sequence is a static background with rectangular textured movers
//! drawn on top in list order. Each mover translates by an integer velocity
//! per frame and carries its texture along. Rendering can also be asked for
//! the half-frame instants between two frames, which gives the exact middle
//! frame for any mover whose velocity components are even.

use alloc::vec::Vec;

use crate::{ColorMode, Frame, Plane, Result};

/// One step of xorshift64* over a hashed lattice coordinate.
///
/// The sample of texture `seed` at integer point `(x, y)` is the top byte
/// of `xorshift64star(seed ^ x·0x9E3779B97F4A7C15 ^ y·0xC2B2AE3D27D4EB4F)`,
/// so sequences are reproducible from their seeds alone.
pub fn lattice_value(seed: u64, x: i64, y: i64) -> u8 {
    let mut s = seed ^ (x as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (y as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    if s == 0 {
        s = 0x2545_F491_4F6C_DD1D;
    }
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    (s.wrapping_mul(0x2545_F491_4F6C_DD1D) >> 56) as u8
}

/// Value noise: lattice samples every `scale` pixels, bilinearly blended.
/// `scale == 1` is per-pixel white noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Texture {
    pub seed: u64,
    pub scale: u32,
}

impl Texture {
    pub const fn new(seed: u64, scale: u32) -> Self {
        Self { seed, scale }
    }

    pub fn sample(&self, x: i64, y: i64) -> u8 {
        let s = self.scale.max(1) as i64;
        if s == 1 {
            return lattice_value(self.seed, x, y);
        }
        let (cx, cy) = (x.div_euclid(s), y.div_euclid(s));
        let (fx, fy) = (x.rem_euclid(s), y.rem_euclid(s));
        let v = |i: i64, j: i64| lattice_value(self.seed, cx + i, cy + j) as i64;
        let top = v(0, 0) * (s - fx) + v(1, 0) * fx;
        let bottom = v(0, 1) * (s - fx) + v(1, 1) * fx;
        let total = top * (s - fy) + bottom * fy;
        let den = s * s;
        ((2 * total + den) / (2 * den)) as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Background {
    Flat(u8),
    Noise(Texture),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mover {
    pub texture: Texture,
    pub width: usize,
    pub height: usize,
    /// Top-left corner in frame 0; may lie outside the frame.
    pub start: (i64, i64),
    /// Displacement per frame.
    pub velocity: (i64, i64),
}

impl Mover {
    /// Top-left corner at `half_t` half-frames, rounded down.
    fn position(&self, half_t: i64) -> (i64, i64) {
        (
            self.start.0 + (self.velocity.0 * half_t).div_euclid(2),
            self.start.1 + (self.velocity.1 * half_t).div_euclid(2),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthSpec {
    pub width: usize,
    pub height: usize,
    pub frame_count: usize,
    pub background: Background,
    pub movers: Vec<Mover>,
    /// 4:2:0 output gets neutral (128) chroma planes.
    pub color_mode: ColorMode,
}

impl SynthSpec {
    pub fn new(width: usize, height: usize, frame_count: usize, background: Background) -> Self {
        Self {
            width,
            height,
            frame_count,
            background,
            movers: Vec::new(),
            color_mode: ColorMode::LumaOnly,
        }
    }

    pub fn with_mover(mut self, mover: Mover) -> Self {
        self.movers.push(mover);
        self
    }

    /// The picture at time `half_t / 2` frames.
    pub fn render_half_step(&self, half_t: i64) -> Result<Frame> {
        let mut luma = match self.background {
            Background::Flat(v) => Plane::filled(self.width, self.height, v),
            Background::Noise(t) => Plane::from_fn(self.width, self.height, |x, y| t.sample(x as i64, y as i64)),
        };
        for m in &self.movers {
            let (px, py) = m.position(half_t);
            let x0 = px.max(0);
            let y0 = py.max(0);
            let x1 = (px + m.width as i64).min(self.width as i64);
            let y1 = (py + m.height as i64).min(self.height as i64);
            for y in y0..y1 {
                for x in x0..x1 {
                    luma.set(x as usize, y as usize, m.texture.sample(x - px, y - py));
                }
            }
        }
        match self.color_mode {
            ColorMode::LumaOnly => Ok(Frame::luma_only(luma)),
            ColorMode::Yuv420 => {
                let c = Plane::filled(self.width / 2, self.height / 2, 128);
                Frame::yuv420(luma, c.clone(), c)
            }
        }
    }

    /// Frame `t` of the sequence.
    pub fn render(&self, t: usize) -> Result<Frame> {
        self.render_half_step(2 * t as i64)
    }
}

/// All `frame_count` frames of `spec`.
pub fn synth_sequence(spec: &SynthSpec) -> Result<Vec<Frame>> {
    (0..spec.frame_count).map(|t| spec.render(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_without_movers_is_constant() {
        let spec = SynthSpec::new(16, 8, 4, Background::Flat(77));
        let frames = synth_sequence(&spec).unwrap();
        assert_eq!(frames.len(), 4);
        assert!(frames.iter().all(|f| f.luma().data().iter().all(|&s| s == 77)));
    }

    #[test]
    fn mover_translates_exactly() {
        let mover = Mover {
            texture: Texture::new(5, 1),
            width: 8,
            height: 6,
            start: (3, 4),
            velocity: (2, 0),
        };
        let spec = SynthSpec::new(40, 20, 6, Background::Flat(0)).with_mover(mover);
        let frames = synth_sequence(&spec).unwrap();
        for (t, f) in frames.iter().enumerate() {
            for y in 0..6 {
                for x in 0..8 {
                    let expected = mover.texture.sample(x, y);
                    assert_eq!(f.luma().get(3 + 2 * t + x as usize, 4 + y as usize), expected);
                }
            }
            // the pixel left of the rect is background
            assert_eq!(f.luma().get(2 + 2 * t, 5), 0);
        }
    }

    #[test]
    fn half_step_is_midway() {
        let mover = Mover {
            texture: Texture::new(9, 3),
            width: 10,
            height: 10,
            start: (0, 0),
            velocity: (2, 2),
        };
        let spec = SynthSpec::new(32, 32, 3, Background::Noise(Texture::new(1, 1))).with_mover(mover);
        let mid = spec.render_half_step(1).unwrap();
        let shifted = SynthSpec::new(32, 32, 1, Background::Noise(Texture::new(1, 1))).with_mover(Mover {
            start: (1, 1),
            ..mover
        });
        assert_eq!(mid, shifted.render(0).unwrap());
    }

    #[test]
    fn deterministic_and_clipped() {
        let mover = Mover {
            texture: Texture::new(3, 2),
            width: 50,
            height: 50,
            start: (-20, -20),
            velocity: (-3, 1),
        };
        let spec = SynthSpec::new(24, 24, 3, Background::Noise(Texture::new(4, 4))).with_mover(mover);
        assert_eq!(synth_sequence(&spec).unwrap(), synth_sequence(&spec).unwrap());
    }

    #[test]
    fn smooth_texture_interpolates_lattice() {
        let t = Texture::new(12, 4);
        assert_eq!(t.sample(8, 4), lattice_value(12, 2, 1));
        let a = lattice_value(12, 0, 0) as i64;
        let b = lattice_value(12, 1, 0) as i64;
        assert_eq!(t.sample(2, 0) as i64, (a * 2 + b * 2 + 2) / 4);
    }

    #[test]
    fn yuv_output_has_neutral_chroma() {
        let mut spec = SynthSpec::new(8, 8, 1, Background::Flat(3));
        spec.color_mode = ColorMode::Yuv420;
        let f = spec.render(0).unwrap();
        assert!(f.chroma().unwrap().iter().all(|p| p.data().iter().all(|&s| s == 128)));
    }
}
