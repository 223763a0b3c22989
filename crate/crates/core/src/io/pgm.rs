//! Binary (`P5`) and ASCII (`P2`) greymaps.
//!
//! Samples are scaled to `[0, 1]` by `maxval` on read. Writing always
//! produces `P5`; with `maxval = 65535` samples are 16-bit big-endian.
//! Quantization rounds half away from zero.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::ScalarGrid;

/// What [`write_pgm`] does with samples outside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangePolicy {
    #[default]
    Clamp,
    Reject,
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<ScalarGrid> {
    parse_pgm(&fs::read(path)?)
}

pub fn write_pgm(
    g: &ScalarGrid,
    path: impl AsRef<Path>,
    maxval: u16,
    policy: RangePolicy,
) -> Result<()> {
    fs::write(path, encode_pgm(g, maxval, policy)?)?;
    Ok(())
}

pub fn encode_pgm(g: &ScalarGrid, maxval: u16, policy: RangePolicy) -> Result<Vec<u8>> {
    if maxval != 255 && maxval != 65535 {
        return Err(Error::InvalidArgument(format!(
            "maxval must be 255 or 65535, got {maxval}"
        )));
    }
    let header = format!("P5\n{} {}\n{}\n", g.width(), g.height(), maxval);
    let wide = maxval > 255;
    let mut out = Vec::with_capacity(header.len() + g.as_slice().len() * if wide { 2 } else { 1 });
    out.extend_from_slice(header.as_bytes());
    for (i, &v) in g.as_slice().iter().enumerate() {
        let v = match policy {
            RangePolicy::Clamp => v.clamp(0.0, 1.0),
            RangePolicy::Reject if !(0.0..=1.0).contains(&v) => {
                return Err(Error::InvalidArgument(format!(
                    "sample {i} = {v} is outside [0, 1]"
                )))
            }
            RangePolicy::Reject => v,
        };
        let q = (v * maxval as f64).round() as u16;
        if wide {
            out.extend_from_slice(&q.to_be_bytes());
        } else {
            out.push(q as u8);
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Pgm {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.bytes.get(self.pos) {
                None => self.error(format!("unexpected end of file, expected {what}")),
                Some(b) => self.error(format!("expected {what}, found byte 0x{b:02x}")),
            };
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match digits.parse::<u64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.error(format!("{what} {digits} is too large"))
            }
        }
    }
}

/// Decodes a `P2` or `P5` image held in memory.
pub fn parse_pgm(bytes: &[u8]) -> Result<ScalarGrid> {
    let mut cur = Cursor { bytes, pos: 0 };
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return cur.error("unsupported magic number, expected P2 or P5"),
    };
    cur.pos = 2;
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return cur.error(format!("zero dimension {width}x{height}"));
    }
    if maxval == 0 || maxval > 65535 {
        cur.pos = maxval_at;
        return cur.error(format!("maxval {maxval} outside 1..=65535"));
    }
    let count = match usize::try_from(width)
        .ok()
        .zip(usize::try_from(height).ok())
        .and_then(|(w, h)| w.checked_mul(h))
    {
        Some(c) => c,
        None => return cur.error(format!("image {width}x{height} is too large")),
    };
    let scale = 1.0 / maxval as f64;
    let data = if binary {
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return cur.error("expected a single whitespace byte after maxval"),
        }
        let bpp = if maxval > 255 { 2 } else { 1 };
        let expected = count.checked_mul(bpp);
        let available = bytes.len() - cur.pos;
        match expected {
            Some(e) if e <= available => {}
            _ => {
                return cur.error(format!(
                    "truncated payload: expected {} bytes, found {available}",
                    expected.map_or_else(|| "too many".to_string(), |e| e.to_string())
                ))
            }
        }
        let payload = &bytes[cur.pos..];
        let mut data = Vec::with_capacity(count);
        for i in 0..count {
            let v = if bpp == 2 {
                u16::from_be_bytes([payload[2 * i], payload[2 * i + 1]]) as u64
            } else {
                payload[i] as u64
            };
            if v > maxval {
                cur.pos += i * bpp;
                return cur.error(format!("sample {v} exceeds maxval {maxval}"));
            }
            data.push(v as f64 * scale);
        }
        data
    } else {
        let mut data = Vec::with_capacity(count.min(bytes.len()));
        for _ in 0..count {
            let at = cur.pos;
            let v = cur.number("sample")?;
            if v > maxval {
                cur.pos = at;
                return cur.error(format!("sample {v} exceeds maxval {maxval}"));
            }
            data.push(v as f64 * scale);
        }
        data
    };
    ScalarGrid::new(width as usize, height as usize, data)
}
