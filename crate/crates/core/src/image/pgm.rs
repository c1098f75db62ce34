// Netpbm graymap reader and writer.
//
// Header grammar: magic ("P2" plain, "P5" raw), then width, height and maxval
// as ASCII decimals separated by whitespace. A '#' starts a comment that runs
// to the end of the line. In P5 a single whitespace byte follows maxval and
// the raster begins; samples are one byte when maxval < 256, else two bytes
// big-endian. Rows are stored top to bottom.

use std::fs;
use std::path::Path;

use super::GrayImage;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Plain,
    Raw,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Next unsigned decimal token, or `None` at end of input.
    fn next_uint(&mut self) -> Option<std::result::Result<u64, String>> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let token = &self.bytes[start..self.pos];
        Some(
            std::str::from_utf8(token)
                .ok()
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| {
                    format!(
                        "expected a number, found {:?}",
                        String::from_utf8_lossy(token)
                    )
                }),
        )
    }

    fn header_field(&mut self, name: &str) -> Result<u64> {
        match self.next_uint() {
            Some(Ok(v)) => Ok(v),
            Some(Err(e)) => Err(Error::BadHeader(format!("{name}: {e}"))),
            None => Err(Error::BadHeader(format!("missing {name}"))),
        }
    }
}

/// Parses a P2 or P5 graymap. Intensities are mapped to `value / maxval`.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let format = match bytes.get(..2) {
        Some(b"P2") => Format::Plain,
        Some(b"P5") => Format::Raw,
        _ => return Err(Error::BadMagic),
    };
    if bytes
        .get(2)
        .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
    {
        return Err(Error::BadMagic);
    }
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.header_field("width")?;
    let height = cur.header_field("height")?;
    let maxval = cur.header_field("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::BadHeader(format!(
            "dimensions must be positive, got {width}x{height}"
        )));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::BadHeader(format!(
            "maxval {maxval} not in 1..=65535"
        )));
    }
    let count = (width as usize)
        .checked_mul(height as usize)
        .ok_or_else(|| Error::BadHeader("dimensions overflow".into()))?;
    let maxval = maxval as u32;
    let maxval_f = maxval as f64;

    let mut pixels = Vec::with_capacity(count);
    match format {
        Format::Plain => {
            while pixels.len() < count {
                match cur.next_uint() {
                    Some(Ok(v)) => {
                        if v > maxval as u64 {
                            return Err(Error::SampleOutOfRange {
                                value: v.min(u32::MAX as u64) as u32,
                                maxval,
                            });
                        }
                        pixels.push(v as f64 / maxval_f);
                    }
                    Some(Err(e)) => return Err(Error::BadHeader(e)),
                    None => {
                        return Err(Error::TruncatedData {
                            expected: count,
                            found: pixels.len(),
                        })
                    }
                }
            }
        }
        Format::Raw => {
            // exactly one whitespace byte separates maxval from the raster
            match bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => {
                    return Err(Error::TruncatedData {
                        expected: count,
                        found: 0,
                    })
                }
            }
            let raster = &bytes[cur.pos..];
            let wide = maxval > 255;
            let sample_len = if wide { 2 } else { 1 };
            let found = raster.len() / sample_len;
            if found < count {
                return Err(Error::TruncatedData {
                    expected: count,
                    found,
                });
            }
            for chunk in raster.chunks_exact(sample_len).take(count) {
                let v = if wide {
                    u16::from_be_bytes([chunk[0], chunk[1]]) as u32
                } else {
                    chunk[0] as u32
                };
                if v > maxval {
                    return Err(Error::SampleOutOfRange { value: v, maxval });
                }
                pixels.push(v as f64 / maxval_f);
            }
        }
    }
    GrayImage::new(width as usize, height as usize, pixels)
}

#[inline]
fn quantize(v: f64) -> u8 {
    // f64::round ties away from zero: 0.5 -> 127.5 -> 128
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Serializes with maxval 255. Plain output writes one raster row per line.
pub fn save_pgm(img: &GrayImage, binary: bool) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    let header = format!("{}\n{w} {h}\n255\n", if binary { "P5" } else { "P2" });
    let mut out = header.into_bytes();
    if binary {
        out.extend(img.pixels().iter().map(|&v| quantize(v)));
    } else {
        for row in img.pixels().chunks(w) {
            let line = row
                .iter()
                .map(|&v| quantize(v).to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.extend_from_slice(line.as_bytes());
            out.push(b'\n');
        }
    }
    out
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    load_pgm(&fs::read(path)?)
}

pub fn write_pgm(path: impl AsRef<Path>, img: &GrayImage, binary: bool) -> Result<()> {
    fs::write(path, save_pgm(img, binary))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_two_by_two() {
        let img = load_pgm(b"P2\n2 2\n255\n0 255 255 0").unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.pixels(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn raw_single_byte() {
        let mut bytes = b"P5\n1 1\n255\n".to_vec();
        bytes.push(0x80);
        let img = load_pgm(&bytes).unwrap();
        assert_eq!(img.pixels(), &[128.0 / 255.0]);
    }

    #[test]
    fn raw_sixteen_bit() {
        let mut bytes = b"P5 2 1 65535\n".to_vec();
        bytes.extend_from_slice(&[0xff, 0xff, 0x00, 0x00]);
        let img = load_pgm(&bytes).unwrap();
        assert_eq!(img.pixels(), &[1.0, 0.0]);
    }

    #[test]
    fn comments_in_header() {
        let img =
            load_pgm(b"P2\n# made by hand\n2 1 # trailing\n# maxval next\n10\n5 10\n").unwrap();
        assert_eq!(img.pixels(), &[0.5, 1.0]);
    }

    #[test]
    fn rejects_other_magic() {
        assert!(matches!(load_pgm(b"P7\n1 1\n255\n0"), Err(Error::BadMagic)));
        assert!(matches!(load_pgm(b"P6\n1 1\n255\n0"), Err(Error::BadMagic)));
        assert!(matches!(
            load_pgm(b"P25\n1 1\n255\n0"),
            Err(Error::BadMagic)
        ));
        assert!(matches!(load_pgm(b""), Err(Error::BadMagic)));
    }

    #[test]
    fn rejects_zero_dimensions() {
        assert!(matches!(
            load_pgm(b"P2\n0 2\n255\n"),
            Err(Error::BadHeader(_))
        ));
        assert!(matches!(
            load_pgm(b"P2\n2 2\n0\n0 0 0 0"),
            Err(Error::BadHeader(_))
        ));
        assert!(matches!(
            load_pgm(b"P2\n2 2\n70000\n0 0 0 0"),
            Err(Error::BadHeader(_))
        ));
        assert!(matches!(
            load_pgm(b"P2\n-2 2\n255\n"),
            Err(Error::BadHeader(_))
        ));
    }

    #[test]
    fn truncated_raster() {
        assert!(matches!(
            load_pgm(b"P2\n2 2\n255\n0 1 2"),
            Err(Error::TruncatedData {
                expected: 4,
                found: 3
            })
        ));
        assert!(matches!(
            load_pgm(b"P5\n2 2\n255\n\x00\x01"),
            Err(Error::TruncatedData {
                expected: 4,
                found: 2
            })
        ));
    }

    #[test]
    fn sample_above_maxval() {
        assert!(matches!(
            load_pgm(b"P2\n1 1\n15\n16"),
            Err(Error::SampleOutOfRange {
                value: 16,
                maxval: 15
            })
        ));
    }

    #[test]
    fn writes_single_white_pixel() {
        let img = GrayImage::new(1, 1, vec![1.0]).unwrap();
        assert_eq!(save_pgm(&img, false), b"P2\n1 1\n255\n255\n");
    }

    #[test]
    fn binary_rounds_to_nearest() {
        let img = GrayImage::new(2, 1, vec![0.0, 0.5]).unwrap();
        let bytes = save_pgm(&img, true);
        assert_eq!(&bytes[..11], b"P5\n2 1\n255\n");
        assert_eq!(&bytes[11..], &[0x00, 0x80]);
    }
}
