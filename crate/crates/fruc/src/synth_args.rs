//! Textual synthetic-sequence specs.
//!
//! A spec is a list of `key=value` tokens separated by whitespace or `;`:
//!
//! ```text
//! width=176 height=144 frames=102 color=420
//! background=noise:7:4
//! mover=seed:3,scale:2,w:48,h:32,x:10,y:20,vx:2,vy:-1
//! ```
//!
//! `background` is `flat:VALUE` or `noise:SEED[:SCALE]`; `color` is `mono`
//! (default) or `420`. `mover` may repeat; its `scale` defaults to 1 and
//! its position and velocity to 0. `fps` sets the frame rate as `N` or `N:D`
//! (default 30).

use fruc_core::synth::{Background, Mover, SynthSpec, Texture};
use fruc_core::{ColorMode, Rational};

use crate::{Error, Result};

/// A parsed spec plus the frame rate to store in the output stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthRequest {
    pub spec: SynthSpec,
    pub frame_rate: Rational,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| usage(format!("synth spec: invalid value `{value}` for `{key}`")))
}

fn parse_background(value: &str) -> Result<Background> {
    let parts: Vec<&str> = value.split(':').collect();
    match parts.as_slice() {
        ["flat", v] => Ok(Background::Flat(number("background", v)?)),
        ["noise", seed] => Ok(Background::Noise(Texture::new(number("background", seed)?, 1))),
        ["noise", seed, scale] => Ok(Background::Noise(Texture::new(number("background", seed)?, number("background", scale)?))),
        _ => Err(usage(format!("synth spec: background must be flat:V or noise:SEED[:SCALE], got `{value}`"))),
    }
}

fn parse_mover(value: &str) -> Result<Mover> {
    let mut m = Mover {
        texture: Texture::new(0, 1),
        width: 0,
        height: 0,
        start: (0, 0),
        velocity: (0, 0),
    };
    for field in value.split(',') {
        let (k, v) = field
            .split_once(':')
            .ok_or_else(|| usage(format!("synth spec: mover field `{field}` is not key:value")))?;
        match k {
            "seed" => m.texture.seed = number(k, v)?,
            "scale" => m.texture.scale = number(k, v)?,
            "w" => m.width = number(k, v)?,
            "h" => m.height = number(k, v)?,
            "x" => m.start.0 = number(k, v)?,
            "y" => m.start.1 = number(k, v)?,
            "vx" => m.velocity.0 = number(k, v)?,
            "vy" => m.velocity.1 = number(k, v)?,
            _ => return Err(usage(format!("synth spec: unknown mover field `{k}`"))),
        }
    }
    if m.width == 0 || m.height == 0 {
        return Err(usage("synth spec: mover needs positive w and h"));
    }
    Ok(m)
}

fn parse_rate(value: &str) -> Result<Rational> {
    let r = match value.split_once(':') {
        Some((n, d)) => Rational::new(number("fps", n)?, number("fps", d)?),
        None => Rational::new(number("fps", value)?, 1),
    };
    if r.num == 0 || r.den == 0 {
        return Err(usage("synth spec: fps must be positive"));
    }
    Ok(r)
}

pub fn parse_synth_spec(text: &str) -> Result<SynthRequest> {
    let (mut width, mut height, mut frames) = (None, None, None);
    let mut background = Background::Flat(128);
    let mut movers = Vec::new();
    let mut color_mode = ColorMode::LumaOnly;
    let mut frame_rate = Rational::new(30, 1);
    for token in text.split(|c: char| c.is_whitespace() || c == ';').filter(|t| !t.is_empty()) {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| usage(format!("synth spec: `{token}` is not key=value")))?;
        match key {
            "width" => width = Some(number::<usize>(key, value)?),
            "height" => height = Some(number::<usize>(key, value)?),
            "frames" => frames = Some(number::<usize>(key, value)?),
            "background" => background = parse_background(value)?,
            "mover" => movers.push(parse_mover(value)?),
            "fps" => frame_rate = parse_rate(value)?,
            "color" => {
                color_mode = match value {
                    "mono" => ColorMode::LumaOnly,
                    "420" => ColorMode::Yuv420,
                    _ => return Err(usage(format!("synth spec: color must be mono or 420, got `{value}`"))),
                }
            }
            _ => return Err(usage(format!("synth spec: unknown key `{key}`"))),
        }
    }
    let missing = |k: &str| usage(format!("synth spec: `{k}` is required"));
    let (width, height) = (width.ok_or_else(|| missing("width"))?, height.ok_or_else(|| missing("height"))?);
    let frames = frames.ok_or_else(|| missing("frames"))?;
    if width == 0 || height == 0 || frames == 0 {
        return Err(usage("synth spec: width, height and frames must be positive"));
    }
    if color_mode == ColorMode::Yuv420 && (width % 2 != 0 || height % 2 != 0) {
        return Err(usage("synth spec: 4:2:0 output needs even width and height"));
    }
    let mut spec = SynthSpec::new(width, height, frames, background);
    spec.movers = movers;
    spec.color_mode = color_mode;
    Ok(SynthRequest { spec, frame_rate })
}
