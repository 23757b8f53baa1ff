//! YUV4MPEG2 streams.
//!
//! Supported subset: 8-bit `C420`, `C420jpeg`, `C420paldv` (also spelled
//! `C420paeg`), `C420mpeg2` and `Cmono`. A missing `C` tag means 4:2:0. The interlace, aspect and comment
//! tags are kept verbatim so a stream can be written back unchanged; frame
//! header parameters are dropped.

use std::io::{self, BufRead, BufReader, Read, Write};

use fruc_core::{ColorMode, Frame, Rational, SequenceMeta};

use crate::{Error, Result};

const SIGNATURE: &[u8] = b"YUV4MPEG2";
const FRAME_TAG: &[u8] = b"FRAME";
const MAX_HEADER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Y4mHeader {
    pub meta: SequenceMeta,
    /// `I` tag value, e.g. `p`.
    pub interlace: Option<String>,
    /// `A` tag value, e.g. `1:1`.
    pub aspect: Option<String>,
    /// `C` tag value as written, e.g. `420jpeg`.
    pub colorspace: Option<String>,
    /// `X` tag values.
    pub comments: Vec<String>,
}

impl Y4mHeader {
    /// Header for a new stream: progressive, square pixels, explicit
    /// colorspace.
    pub fn from_meta(meta: SequenceMeta) -> Self {
        let colorspace = match meta.color_mode {
            ColorMode::LumaOnly => "mono",
            ColorMode::Yuv420 => "420jpeg",
        };
        Self {
            meta,
            interlace: Some("p".into()),
            aspect: Some("1:1".into()),
            colorspace: Some(colorspace.into()),
            comments: Vec::new(),
        }
    }

    pub fn with_meta(&self, meta: SequenceMeta) -> Self {
        Self { meta, ..self.clone() }
    }

    fn to_line(&self) -> String {
        let m = &self.meta;
        let mut line = format!("YUV4MPEG2 W{} H{} F{}:{}", m.width, m.height, m.frame_rate.num, m.frame_rate.den);
        if let Some(i) = &self.interlace {
            line += &format!(" I{i}");
        }
        if let Some(a) = &self.aspect {
            line += &format!(" A{a}");
        }
        match (&self.colorspace, m.color_mode) {
            (Some(c), _) => line += &format!(" C{c}"),
            (None, ColorMode::LumaOnly) => line += " Cmono",
            (None, ColorMode::Yuv420) => {}
        }
        for x in &self.comments {
            line += &format!(" X{x}");
        }
        line.push('\n');
        line
    }
}

fn color_mode(tag: &str) -> Option<ColorMode> {
    match tag {
        "420" | "420jpeg" | "420paldv" | "420paeg" | "420mpeg2" => Some(ColorMode::Yuv420),
        "mono" => Some(ColorMode::LumaOnly),
        _ => None,
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once(':')?;
    let r = Rational::new(n.parse().ok()?, d.parse().ok()?);
    (r.num > 0 && r.den > 0).then_some(r)
}

/// Reads bytes up to and including `\n`, failing past `limit` bytes.
/// Returns `None` at a clean end of stream.
fn read_line<R: BufRead>(r: &mut R, limit: usize, offset: u64) -> Result<Option<Vec<u8>>> {
    let mut line = Vec::new();
    let n = r.by_ref().take(limit as u64 + 1).read_until(b'\n', &mut line)?;
    if n == 0 {
        return Ok(None);
    }
    if line.last() != Some(&b'\n') {
        if n > limit {
            return Err(Error::parse(offset, "header line too long"));
        }
        return Err(Error::parse(offset + n as u64, "unterminated header line"));
    }
    line.pop();
    Ok(Some(line))
}

fn parse_header(line: &[u8]) -> Result<Y4mHeader> {
    if let Some(bad) = (0..SIGNATURE.len()).find(|&i| line.get(i) != Some(&SIGNATURE[i])) {
        return Err(Error::parse(bad as u64, "missing YUV4MPEG2 signature"));
    }
    let rest = &line[SIGNATURE.len()..];
    if !rest.is_empty() && rest[0] != b' ' {
        return Err(Error::parse(SIGNATURE.len() as u64, "expected a space after the signature"));
    }
    let text = std::str::from_utf8(rest).map_err(|e| Error::parse((SIGNATURE.len() + e.valid_up_to()) as u64, "header is not ASCII"))?;

    let (mut width, mut height, mut rate) = (None, None, None);
    let mut header_tags = (None, None, None, Vec::new());
    let mut offset = SIGNATURE.len();
    for token in text.split(' ') {
        let here = offset as u64 + 1;
        offset += token.len() + 1;
        if token.is_empty() {
            continue;
        }
        let (tag, value) = token.split_at(1);
        let bad = |what: &str| Error::parse(here, format!("invalid {what} tag `{token}`"));
        match tag {
            "W" => width = Some(value.parse::<usize>().map_err(|_| bad("width"))?),
            "H" => height = Some(value.parse::<usize>().map_err(|_| bad("height"))?),
            "F" => rate = Some(parse_rational(value).ok_or_else(|| bad("frame rate"))?),
            "I" => header_tags.0 = Some(value.to_string()),
            "A" => header_tags.1 = Some(value.to_string()),
            "C" => header_tags.2 = Some(value.to_string()),
            "X" => header_tags.3.push(value.to_string()),
            _ => return Err(Error::parse(here, format!("unknown header tag `{token}`"))),
        }
    }
    let end = line.len() as u64;
    let width = width.ok_or_else(|| Error::parse(end, "missing W tag"))?;
    let height = height.ok_or_else(|| Error::parse(end, "missing H tag"))?;
    let frame_rate = rate.ok_or_else(|| Error::parse(end, "missing F tag"))?;
    let mode = match &header_tags.2 {
        None => ColorMode::Yuv420,
        Some(c) => color_mode(c).ok_or_else(|| Error::Unsupported(format!("colorspace C{c}")))?,
    };
    let meta = SequenceMeta::new(width, height, frame_rate, mode)?;
    Ok(Y4mHeader {
        meta,
        interlace: header_tags.0,
        aspect: header_tags.1,
        colorspace: header_tags.2,
        comments: header_tags.3,
    })
}

/// Lazily decodes the frames of a YUV4MPEG2 stream.
pub struct Y4mReader<R: Read> {
    inner: BufReader<R>,
    header: Y4mHeader,
    offset: u64,
    index: usize,
    done: bool,
}

/// Parses the stream header; frames are decoded as the reader is iterated.
pub fn parse_y4m<R: Read>(reader: R) -> Result<Y4mReader<R>> {
    let mut inner = BufReader::new(reader);
    let line = read_line(&mut inner, MAX_HEADER, 0)?.ok_or_else(|| Error::parse(0, "empty stream"))?;
    let header = parse_header(&line)?;
    Ok(Y4mReader {
        inner,
        header,
        offset: line.len() as u64 + 1,
        index: 0,
        done: false,
    })
}

impl<R: Read> Y4mReader<R> {
    pub fn header(&self) -> &Y4mHeader {
        &self.header
    }

    pub fn meta(&self) -> &SequenceMeta {
        &self.header.meta
    }

    fn next_frame(&mut self) -> Result<Option<Frame>> {
        let Some(line) = read_line(&mut self.inner, MAX_HEADER, self.offset)? else {
            return Ok(None);
        };
        if !line.starts_with(FRAME_TAG) || !matches!(line.get(FRAME_TAG.len()), None | Some(b' ')) {
            return Err(Error::parse(self.offset, "expected FRAME marker"));
        }
        self.offset += line.len() as u64 + 1;
        let meta = &self.header.meta;
        let mut payload = vec![0; meta.frame_bytes()];
        read_payload(&mut self.inner, &mut payload, self.index)?;
        self.offset += payload.len() as u64;
        self.index += 1;
        Ok(Some(Frame::from_planar_bytes(meta.width, meta.height, meta.color_mode, &payload)?))
    }
}

pub(crate) fn read_payload<R: Read>(r: &mut R, buf: &mut [u8], frame: usize) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => Error::Truncated { frame },
        _ => Error::Io(e),
    })
}

impl<R: Read> Iterator for Y4mReader<R> {
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

/// Reads a whole stream into memory.
pub fn read_y4m<R: Read>(reader: R) -> Result<(Y4mHeader, Vec<Frame>)> {
    let stream = parse_y4m(reader)?;
    let mut header = stream.header().clone();
    let frames = stream.collect::<Result<Vec<_>>>()?;
    header.meta.frame_count = Some(frames.len());
    Ok((header, frames))
}

/// Writes `header` followed by every frame. All frames are checked against
/// the header before anything is written.
pub fn write_y4m<'a, W: Write>(header: &Y4mHeader, frames: impl IntoIterator<Item = &'a Frame>, mut sink: W) -> Result<()> {
    let frames: Vec<&Frame> = frames.into_iter().collect();
    header.meta.validate()?;
    if let Some(c) = &header.colorspace {
        if color_mode(c) != Some(header.meta.color_mode) {
            return Err(Error::Unsupported(format!("colorspace C{c} for {:?}", header.meta.color_mode)));
        }
    }
    for f in &frames {
        header.meta.check_frame(f)?;
    }
    sink.write_all(header.to_line().as_bytes())?;
    for f in frames {
        sink.write_all(b"FRAME\n")?;
        for plane in f.planes() {
            sink.write_all(plane.data())?;
        }
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use fruc_core::Plane;

    fn cif_meta() -> SequenceMeta {
        SequenceMeta::new(352, 288, Rational::new(30, 1), ColorMode::Yuv420).unwrap()
    }

    #[test]
    fn decodes_cif_header() {
        let r = parse_y4m(&b"YUV4MPEG2 W352 H288 F30:1\n"[..]).unwrap();
        assert_eq!(r.meta(), &cif_meta());
        assert_eq!(r.count(), 0);
    }

    #[test]
    fn tiny_420_frame() {
        let data = b"YUV4MPEG2 W2 H2 F25:1 C420\nFRAME\n\x01\x02\x03\x04\x05\x06";
        let (header, frames) = read_y4m(&data[..]).unwrap();
        assert_eq!(header.meta.frame_count, Some(1));
        let f = &frames[0];
        assert_eq!(f.luma().data(), &[1, 2, 3, 4]);
        let [u, v] = f.chroma().unwrap();
        assert_eq!((u.width(), u.height(), u.data()[0], v.data()[0]), (1, 1, 5, 6));
    }

    #[test]
    fn frame_parameters_are_skipped() {
        let data = b"YUV4MPEG2 W2 H1 F1:1 Cmono\nFRAME Ixyz\n\x07\x08";
        let (_, frames) = read_y4m(&data[..]).unwrap();
        assert_eq!(frames[0].luma().data(), &[7, 8]);
    }

    #[test]
    fn bad_signature_reports_offset() {
        match parse_y4m(&b"YUV4MPEG3 W2 H2 F1:1\n"[..]) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 8),
            Err(e) => panic!("unexpected error {e}"),
            Ok(_) => panic!("accepted bad signature"),
        }
        assert!(matches!(parse_y4m(&b""[..]), Err(Error::Parse { offset: 0, .. })));
    }

    #[test]
    fn missing_or_bad_tags() {
        assert!(matches!(parse_y4m(&b"YUV4MPEG2 W2 F1:1\n"[..]), Err(Error::Parse { .. })));
        assert!(matches!(parse_y4m(&b"YUV4MPEG2 W2 H2 F1:0\n"[..]), Err(Error::Parse { .. })));
        assert!(matches!(parse_y4m(&b"YUV4MPEG2 W2 H2 F1:1 Q9\n"[..]), Err(Error::Parse { .. })));
        assert!(matches!(parse_y4m(&b"YUV4MPEG2 W2 H2 F1:1 C444\n"[..]), Err(Error::Unsupported(_))));
        assert!(matches!(parse_y4m(&b"YUV4MPEG2 W3 H2 F1:1 C420\n"[..]), Err(Error::Core(_))));
    }

    #[test]
    fn truncated_payload_names_frame() {
        let data = b"YUV4MPEG2 W2 H2 F1:1 Cmono\nFRAME\n\x01\x02\x03\x04FRAME\n\x01";
        let r = parse_y4m(&data[..]).unwrap();
        let items: Vec<_> = r.collect();
        assert_eq!(items.len(), 2);
        assert!(items[0].is_ok());
        assert!(matches!(items[1], Err(Error::Truncated { frame: 1 })));
    }

    #[test]
    fn garbage_instead_of_frame_marker() {
        let data = b"YUV4MPEG2 W2 H1 F1:1 Cmono\nFRAMEX\n\x01\x02";
        let mut r = parse_y4m(&data[..]).unwrap();
        assert!(matches!(r.next(), Some(Err(Error::Parse { offset: 27, .. }))));
        assert!(r.next().is_none());
    }

    #[test]
    fn writes_header_only_for_no_frames() {
        let meta = SequenceMeta::new(2, 2, Rational::new(30, 1), ColorMode::LumaOnly).unwrap();
        let mut out = Vec::new();
        write_y4m(&Y4mHeader::from_meta(meta), [], &mut out).unwrap();
        assert_eq!(out, b"YUV4MPEG2 W2 H2 F30:1 Ip A1:1 Cmono\n");
    }

    #[test]
    fn writes_single_luma_frame() {
        let meta = SequenceMeta::new(2, 2, Rational::new(30, 1), ColorMode::LumaOnly).unwrap();
        let frame = Frame::luma_only(Plane::new(2, 2, vec![9, 8, 7, 6]).unwrap());
        let mut out = Vec::new();
        write_y4m(&Y4mHeader::from_meta(meta), [&frame], &mut out).unwrap();
        assert_eq!(out, b"YUV4MPEG2 W2 H2 F30:1 Ip A1:1 Cmono\nFRAME\n\x09\x08\x07\x06");
    }

    #[test]
    fn mismatched_frame_writes_nothing() {
        let meta = SequenceMeta::new(2, 2, Rational::new(30, 1), ColorMode::LumaOnly).unwrap();
        let good = Frame::luma_only(Plane::filled(2, 2, 0));
        let bad = Frame::luma_only(Plane::filled(4, 2, 0));
        let mut out = Vec::new();
        assert!(write_y4m(&Y4mHeader::from_meta(meta), [&good, &bad], &mut out).is_err());
        assert!(out.is_empty());
    }

    #[test]
    fn header_tags_survive_round_trip() {
        let data = b"YUV4MPEG2 W4 H2 F30000:1001 It A10:11 C420mpeg2 XYSCSS=420MPEG2 Xfoo\nFRAME\n\0\0\0\0\0\0\0\0\0\0\0\0";
        let (header, frames) = read_y4m(&data[..]).unwrap();
        let mut out = Vec::new();
        write_y4m(&header, &frames, &mut out).unwrap();
        assert_eq!(&out[..], &data[..]);
    }
}
