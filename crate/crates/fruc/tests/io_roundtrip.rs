use fruc::raw::read_raw_yuv;
use fruc::y4m::{parse_y4m, read_y4m, write_y4m, Y4mHeader};
use fruc::Error;
use fruc_core::{ColorMode, Frame, Plane, Rational, SequenceMeta};
use proptest::prelude::*;

fn frame(w: usize, h: usize, mode: ColorMode, seed: u8) -> Frame {
    let p = |pw, ph, k: u8| Plane::from_fn(pw, ph, |x, y| (x as u8).wrapping_mul(31) ^ (y as u8).wrapping_mul(7) ^ seed ^ k);
    match mode {
        ColorMode::LumaOnly => Frame::luma_only(p(w, h, 0)),
        ColorMode::Yuv420 => Frame::yuv420(p(w, h, 0), p(w / 2, h / 2, 1), p(w / 2, h / 2, 2)).unwrap(),
    }
}

fn encode(header: &Y4mHeader, frames: &[Frame]) -> Vec<u8> {
    let mut out = Vec::new();
    write_y4m(header, frames, &mut out).unwrap();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn write_parse_write_is_identity(
        half_w in 1usize..12,
        half_h in 1usize..12,
        count in 0usize..4,
        yuv in any::<bool>(),
        num in 1u32..60_001,
        den in 1u32..1002,
        seed in any::<u8>(),
    ) {
        let mode = if yuv { ColorMode::Yuv420 } else { ColorMode::LumaOnly };
        let (w, h) = (2 * half_w, 2 * half_h);
        let meta = SequenceMeta::new(w, h, Rational::new(num, den), mode).unwrap();
        let frames: Vec<_> = (0..count).map(|i| frame(w, h, mode, seed.wrapping_add(i as u8))).collect();
        let bytes = encode(&Y4mHeader::from_meta(meta), &frames);
        let header_len = bytes.iter().position(|&b| b == b'\n').unwrap() + 1;
        prop_assert_eq!(bytes.len(), header_len + count * (6 + meta_bytes(w, h, mode)));
        let (header, decoded) = read_y4m(&bytes[..]).unwrap();
        prop_assert_eq!(&decoded, &frames);
        prop_assert_eq!(encode(&header, &decoded), bytes);
    }
}

fn meta_bytes(w: usize, h: usize, mode: ColorMode) -> usize {
    fruc_core::frame::frame_bytes(w, h, mode)
}

#[test]
fn header_without_colorspace_stays_without() {
    let data = b"YUV4MPEG2 W4 H2 F25:1\nFRAME\n\x01\x02\x03\x04\x05\x06\x07\x08\x09\x0a\x0b\x0c";
    let (header, frames) = read_y4m(&data[..]).unwrap();
    assert_eq!(header.meta.color_mode, ColorMode::Yuv420);
    assert_eq!(header.colorspace, None);
    assert_eq!(encode(&header, &frames), data);
}

#[test]
fn frames_stream_lazily() {
    let meta = SequenceMeta::new(8, 4, Rational::new(30, 1), ColorMode::LumaOnly).unwrap();
    let frames: Vec<_> = (0..3).map(|i| frame(8, 4, ColorMode::LumaOnly, i)).collect();
    let mut bytes = encode(&Y4mHeader::from_meta(meta), &frames);
    // damage the third marker: the first two frames still decode
    let third = bytes.len() - 32 - 6;
    bytes[third] = b'X';
    let mut it = parse_y4m(&bytes[..]).unwrap();
    assert_eq!(it.next().unwrap().unwrap(), frames[0]);
    assert_eq!(it.next().unwrap().unwrap(), frames[1]);
    assert!(matches!(it.next(), Some(Err(Error::Parse { .. }))));
}

#[test]
fn raw_and_y4m_payloads_agree() {
    let meta = SequenceMeta::new(6, 4, Rational::new(30, 1), ColorMode::Yuv420).unwrap();
    let frames: Vec<_> = (0..2).map(|i| frame(6, 4, ColorMode::Yuv420, i)).collect();
    let raw: Vec<u8> = frames.iter().flat_map(|f| f.planes().flat_map(|p| p.data().to_vec())).collect();
    let decoded: Vec<_> = read_raw_yuv(&raw[..], 6, 4, ColorMode::Yuv420).unwrap().collect::<Result<_, _>>().unwrap();
    assert_eq!(decoded, frames);
    let (_, via_y4m) = read_y4m(&encode(&Y4mHeader::from_meta(meta), &frames)[..]).unwrap();
    assert_eq!(via_y4m, decoded);
}

#[test]
fn truncated_y4m_frame() {
    let meta = SequenceMeta::new(4, 4, Rational::new(30, 1), ColorMode::Yuv420).unwrap();
    let frames = vec![frame(4, 4, ColorMode::Yuv420, 0); 2];
    let bytes = encode(&Y4mHeader::from_meta(meta), &frames);
    assert!(matches!(read_y4m(&bytes[..bytes.len() - 1]), Err(Error::Truncated { frame: 1 })));
}
