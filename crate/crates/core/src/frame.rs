//! Planar 8-bit pictures and sequence metadata.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorMode {
    LumaOnly,
    Yuv420,
}

/// Frame rate as `num / den` frames per second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    pub num: u32,
    pub den: u32,
}

impl Rational {
    pub const fn new(num: u32, den: u32) -> Self {
        Self { num, den }
    }

    /// The rate after inserting one frame between every pair.
    pub fn doubled(self) -> Self {
        if self.den.is_multiple_of(2) {
            Self::new(self.num, self.den / 2)
        } else {
            Self::new(self.num.saturating_mul(2), self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceMeta {
    pub width: usize,
    pub height: usize,
    pub frame_rate: Rational,
    pub color_mode: ColorMode,
    /// `None` for streams whose length is not known up front.
    pub frame_count: Option<usize>,
}

impl SequenceMeta {
    pub fn new(width: usize, height: usize, frame_rate: Rational, color_mode: ColorMode) -> Result<Self> {
        let meta = Self {
            width,
            height,
            frame_rate,
            color_mode,
            frame_count: None,
        };
        meta.validate()?;
        Ok(meta)
    }

    pub fn validate(&self) -> Result<()> {
        check_dims(self.width, self.height, self.color_mode)
    }

    /// Bytes occupied by one frame's planes.
    pub fn frame_bytes(&self) -> usize {
        frame_bytes(self.width, self.height, self.color_mode)
    }

    /// Checks that `frame` agrees with these dimensions and color mode.
    pub fn check_frame(&self, frame: &Frame) -> Result<()> {
        if (frame.width(), frame.height()) != (self.width, self.height) {
            return Err(Error::DimensionMismatch {
                expected: (self.width, self.height),
                actual: (frame.width(), frame.height()),
            });
        }
        if frame.color_mode() != self.color_mode {
            return Err(Error::ColorModeMismatch);
        }
        Ok(())
    }
}

pub fn frame_bytes(width: usize, height: usize, mode: ColorMode) -> usize {
    match mode {
        ColorMode::LumaOnly => width * height,
        ColorMode::Yuv420 => width * height + 2 * (width / 2) * (height / 2),
    }
}

fn check_dims(width: usize, height: usize, mode: ColorMode) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimension);
    }
    if mode == ColorMode::Yuv420 && (!width.is_multiple_of(2) || !height.is_multiple_of(2)) {
        return Err(Error::OddDimensions { width, height });
    }
    Ok(())
}

/// One row-major plane of 8-bit samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        if data.len() != width * height {
            return Err(Error::PlaneSize {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Self { width, height, data })
    }

    /// # Panics
    ///
    /// If either dimension is zero.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "plane dimensions must be positive");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut plane = Self::filled(width, height, 0);
        for y in 0..height {
            for x in 0..width {
                plane.data[y * width + x] = f(x, y);
            }
        }
        plane
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[u8] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    /// Sample with coordinates clamped to the plane (border replication).
    #[inline]
    pub fn clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.data[cy * self.width + cx]
    }

    /// Extends the plane to `width`x`height` by replicating the last column
    /// and row.
    fn padded(&self, width: usize, height: usize) -> Self {
        if (width, height) == (self.width, self.height) {
            return self.clone();
        }
        Self::from_fn(width, height, |x, y| {
            self.get(x.min(self.width - 1), y.min(self.height - 1))
        })
    }

    fn cropped(&self, width: usize, height: usize) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            data.extend_from_slice(&self.row(y)[..width]);
        }
        Self { width, height, data }
    }
}

/// One decoded picture: a mandatory luma plane and optional 4:2:0 chroma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    luma: Plane,
    chroma: Option<[Plane; 2]>,
}

impl Frame {
    pub fn luma_only(luma: Plane) -> Self {
        Self { luma, chroma: None }
    }

    pub fn yuv420(luma: Plane, u: Plane, v: Plane) -> Result<Self> {
        check_dims(luma.width, luma.height, ColorMode::Yuv420)?;
        let (cw, ch) = (luma.width / 2, luma.height / 2);
        if (u.width, u.height) != (cw, ch) || (v.width, v.height) != (cw, ch) {
            return Err(Error::ChromaSize);
        }
        Ok(Self {
            luma,
            chroma: Some([u, v]),
        })
    }

    /// Builds a frame from the concatenated Y, U, V planes of one picture.
    pub fn from_planar_bytes(width: usize, height: usize, mode: ColorMode, bytes: &[u8]) -> Result<Self> {
        check_dims(width, height, mode)?;
        let expected = frame_bytes(width, height, mode);
        if bytes.len() != expected {
            return Err(Error::PlaneSize {
                expected,
                actual: bytes.len(),
            });
        }
        let luma_len = width * height;
        let luma = Plane::new(width, height, bytes[..luma_len].to_vec())?;
        match mode {
            ColorMode::LumaOnly => Ok(Self::luma_only(luma)),
            ColorMode::Yuv420 => {
                let (cw, ch) = (width / 2, height / 2);
                let c = cw * ch;
                let u = Plane::new(cw, ch, bytes[luma_len..luma_len + c].to_vec())?;
                let v = Plane::new(cw, ch, bytes[luma_len + c..].to_vec())?;
                Self::yuv420(luma, u, v)
            }
        }
    }

    /// Frame filled with one value in every plane.
    pub fn filled(width: usize, height: usize, mode: ColorMode, value: u8) -> Result<Self> {
        check_dims(width, height, mode)?;
        let luma = Plane::filled(width, height, value);
        Ok(match mode {
            ColorMode::LumaOnly => Self::luma_only(luma),
            ColorMode::Yuv420 => {
                let c = Plane::filled(width / 2, height / 2, value);
                Self {
                    luma,
                    chroma: Some([c.clone(), c]),
                }
            }
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.luma.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.luma.height
    }

    pub fn color_mode(&self) -> ColorMode {
        if self.chroma.is_some() {
            ColorMode::Yuv420
        } else {
            ColorMode::LumaOnly
        }
    }

    #[inline]
    pub fn luma(&self) -> &Plane {
        &self.luma
    }

    pub fn luma_mut(&mut self) -> &mut Plane {
        &mut self.luma
    }

    pub fn chroma(&self) -> Option<&[Plane; 2]> {
        self.chroma.as_ref()
    }

    pub fn chroma_mut(&mut self) -> Option<&mut [Plane; 2]> {
        self.chroma.as_mut()
    }

    /// Planes in Y, U, V order.
    pub fn planes(&self) -> impl Iterator<Item = &Plane> {
        core::iter::once(&self.luma).chain(self.chroma.iter().flatten())
    }

    pub fn same_shape(&self, other: &Frame) -> Result<()> {
        if (self.width(), self.height()) != (other.width(), other.height()) {
            return Err(Error::DimensionMismatch {
                expected: (self.width(), self.height()),
                actual: (other.width(), other.height()),
            });
        }
        if self.color_mode() != other.color_mode() {
            return Err(Error::ColorModeMismatch);
        }
        Ok(())
    }

    /// Builds a frame plane-by-plane. `f` receives the plane index (0 = Y)
    /// and returns the produced plane.
    pub(crate) fn map_planes(&self, mut f: impl FnMut(usize) -> Plane) -> Frame {
        let luma = f(0);
        let chroma = self.chroma.as_ref().map(|_| [f(1), f(2)]);
        Frame { luma, chroma }
    }

    pub(crate) fn plane(&self, index: usize) -> &Plane {
        match index {
            0 => &self.luma,
            i => &self.chroma.as_ref().expect("frame has no chroma")[i - 1],
        }
    }
}

/// Pads `frame` so both dimensions become multiples of `n`, replicating
/// the rightmost column and bottom row. 4:2:0 frames are padded to a
/// multiple of `lcm(n, 2)` so the chroma planes stay exactly half size.
///
/// # Panics
///
/// If `n` is zero.
pub fn pad_to_multiple(frame: &Frame, n: usize) -> Frame {
    assert!(n >= 1, "block size must be positive");
    let step = match frame.color_mode() {
        ColorMode::Yuv420 if !n.is_multiple_of(2) => 2 * n,
        _ => n,
    };
    let width = frame.width().div_ceil(step) * step;
    let height = frame.height().div_ceil(step) * step;
    if (width, height) == (frame.width(), frame.height()) {
        return frame.clone();
    }
    let luma = frame.luma.padded(width, height);
    let chroma = frame
        .chroma
        .as_ref()
        .map(|[u, v]| [u.padded(width / 2, height / 2), v.padded(width / 2, height / 2)]);
    Frame { luma, chroma }
}

/// Keeps the top-left `width`x`height` region.
pub fn crop(frame: &Frame, width: usize, height: usize) -> Result<Frame> {
    if width > frame.width() || height > frame.height() {
        return Err(Error::CropTooLarge {
            current: (frame.width(), frame.height()),
            requested: (width, height),
        });
    }
    check_dims(width, height, frame.color_mode())?;
    if (width, height) == (frame.width(), frame.height()) {
        return Ok(frame.clone());
    }
    let luma = frame.luma.cropped(width, height);
    let chroma = frame
        .chroma
        .as_ref()
        .map(|[u, v]| [u.cropped(width / 2, height / 2), v.cropped(width / 2, height / 2)]);
    Ok(Frame { luma, chroma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gradient(w: usize, h: usize) -> Frame {
        Frame::luma_only(Plane::from_fn(w, h, |x, y| (x * 3 + y * 7) as u8))
    }

    #[test]
    fn aligned_frame_is_not_padded() {
        let f = gradient(352, 288);
        assert_eq!(pad_to_multiple(&f, 16), f);
    }

    #[test]
    fn padding_replicates_last_column() {
        let f = gradient(350, 288);
        let p = pad_to_multiple(&f, 16);
        assert_eq!((p.width(), p.height()), (352, 288));
        for y in 0..288 {
            assert_eq!(p.luma().get(350, y), f.luma().get(349, y));
            assert_eq!(p.luma().get(351, y), f.luma().get(349, y));
            assert_eq!(&p.luma().row(y)[..350], f.luma().row(y));
        }
    }

    #[test]
    fn single_pixel_pads_to_block() {
        let f = Frame::luma_only(Plane::filled(1, 1, 7));
        let p = pad_to_multiple(&f, 8);
        assert_eq!((p.width(), p.height()), (8, 8));
        assert!(p.luma().data().iter().all(|&s| s == 7));
    }

    #[test]
    fn crop_keeps_top_left() {
        let f = gradient(8, 8);
        let c = crop(&f, 3, 2).unwrap();
        assert_eq!(c.luma().data(), &[0, 3, 6, 7, 10, 13]);
        assert_eq!(crop(&f, 8, 8).unwrap(), f);
        assert!(matches!(crop(&f, 9, 8), Err(Error::CropTooLarge { .. })));
    }

    #[test]
    fn yuv420_rejects_odd_sizes() {
        let y = Plane::filled(3, 2, 0);
        let c = Plane::filled(1, 1, 0);
        assert!(matches!(
            Frame::yuv420(y, c.clone(), c),
            Err(Error::OddDimensions { .. })
        ));
        assert!(SequenceMeta::new(3, 2, Rational::new(30, 1), ColorMode::Yuv420).is_err());
        assert!(SequenceMeta::new(0, 2, Rational::new(30, 1), ColorMode::LumaOnly).is_err());
    }

    #[test]
    fn planar_bytes_split_into_planes() {
        let f = Frame::from_planar_bytes(2, 2, ColorMode::Yuv420, &[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(f.luma().data(), &[1, 2, 3, 4]);
        let [u, v] = f.chroma().unwrap();
        assert_eq!((u.data(), v.data()), (&[5][..], &[6][..]));
    }

    #[test]
    fn doubling_frame_rates() {
        assert_eq!(Rational::new(30, 1).doubled(), Rational::new(60, 1));
        assert_eq!(Rational::new(30000, 1001).doubled(), Rational::new(60000, 1001));
        assert_eq!(Rational::new(25, 2).doubled(), Rational::new(25, 1));
    }

    fn arb_frame() -> impl Strategy<Value = Frame> {
        (1usize..40, 1usize..40, any::<bool>(), any::<u64>()).prop_map(|(w, h, chroma, seed)| {
            let mut s = seed | 1;
            let mut next = move || {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                s as u8
            };
            if chroma {
                let (w, h) = (w * 2, h * 2);
                let y = Plane::from_fn(w, h, |_, _| next());
                let u = Plane::from_fn(w / 2, h / 2, |_, _| next());
                let v = Plane::from_fn(w / 2, h / 2, |_, _| next());
                Frame::yuv420(y, u, v).unwrap()
            } else {
                Frame::luma_only(Plane::from_fn(w, h, |_, _| next()))
            }
        })
    }

    proptest! {
        #[test]
        fn crop_inverts_pad(f in arb_frame(), n in prop::sample::select(vec![8usize, 16, 3])) {
            let p = pad_to_multiple(&f, n);
            prop_assert_eq!(p.width() % n, 0);
            prop_assert_eq!(p.height() % n, 0);
            prop_assert!(p.width() >= f.width() && p.height() >= f.height());
            prop_assert_eq!(crop(&p, f.width(), f.height()).unwrap(), f);
        }
    }
}
