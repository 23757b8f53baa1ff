//! Headerless planar YUV files (`.yuv`): frames back to back, Y then U then V.

use std::io::{BufReader, Read};

use fruc_core::{ColorMode, Frame, SequenceMeta};

use crate::y4m::read_payload;
use crate::{Error, Result};

/// Iterator over the frames of a raw file with known geometry.
pub struct RawReader<R: Read> {
    inner: BufReader<R>,
    width: usize,
    height: usize,
    mode: ColorMode,
    index: usize,
    done: bool,
}

pub fn read_raw_yuv<R: Read>(reader: R, width: usize, height: usize, mode: ColorMode) -> Result<RawReader<R>> {
    if width == 0 || height == 0 {
        return Err(fruc_core::Error::ZeroDimension.into());
    }
    if mode == ColorMode::Yuv420 && (!width.is_multiple_of(2) || !height.is_multiple_of(2)) {
        return Err(fruc_core::Error::OddDimensions { width, height }.into());
    }
    Ok(RawReader {
        inner: BufReader::new(reader),
        width,
        height,
        mode,
        index: 0,
        done: false,
    })
}

impl<R: Read> RawReader<R> {
    fn next_frame(&mut self) -> Result<Option<Frame>> {
        let mut buf = vec![0; fruc_core::frame::frame_bytes(self.width, self.height, self.mode)];
        // Peek one byte so a clean end of file is not reported as truncation.
        let mut first = [0u8; 1];
        loop {
            match self.inner.read(&mut first) {
                Ok(0) => return Ok(None),
                Ok(_) => break,
                Err(e) if e.kind() == std::io::ErrorKind::Interrupted => continue,
                Err(e) => return Err(Error::Io(e)),
            }
        }
        buf[0] = first[0];
        read_payload(&mut self.inner, &mut buf[1..], self.index)?;
        self.index += 1;
        Ok(Some(Frame::from_planar_bytes(self.width, self.height, self.mode, &buf)?))
    }
}

impl<R: Read> Iterator for RawReader<R> {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.next_frame().transpose();
        if !matches!(item, Some(Ok(_))) {
            self.done = true;
        }
        item
    }
}

/// Reads every frame; `meta` supplies the geometry and frame rate.
pub fn read_raw_all<R: Read>(reader: R, meta: &SequenceMeta) -> Result<Vec<Frame>> {
    read_raw_yuv(reader, meta.width, meta.height, meta.color_mode)?.collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_luma_frames() {
        let data = [1u8, 2, 3, 4, 5, 6, 7, 8];
        let frames: Vec<_> = read_raw_yuv(&data[..], 2, 2, ColorMode::LumaOnly).unwrap().collect::<Result<_>>().unwrap();
        assert_eq!(frames.len(), 2);
        assert_eq!(frames[1].luma().data(), &[5, 6, 7, 8]);
    }

    #[test]
    fn yuv_frame_size() {
        let data = [0u8; 12];
        let frames: Vec<_> = read_raw_yuv(&data[..], 4, 2, ColorMode::Yuv420).unwrap().collect::<Result<_>>().unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].chroma().unwrap()[0].width(), 2);
    }

    #[test]
    fn partial_trailing_frame() {
        let data = [0u8; 7];
        let items: Vec<_> = read_raw_yuv(&data[..], 2, 2, ColorMode::LumaOnly).unwrap().collect();
        assert!(items[0].is_ok());
        assert!(matches!(items[1], Err(Error::Truncated { frame: 1 })));
        assert_eq!(items.len(), 2);
    }

    #[test]
    fn empty_file_has_no_frames() {
        assert_eq!(read_raw_yuv(&[][..], 2, 2, ColorMode::LumaOnly).unwrap().count(), 0);
    }

    #[test]
    fn odd_yuv_geometry_rejected() {
        assert!(read_raw_yuv(&[][..], 3, 2, ColorMode::Yuv420).is_err());
        assert!(read_raw_yuv(&[][..], 0, 2, ColorMode::LumaOnly).is_err());
    }
}
