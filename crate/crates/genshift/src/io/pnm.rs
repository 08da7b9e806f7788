use std::path::Path;

use genshift_core::{ElementKind, GridDomain, Signal};

use super::{read_bytes, write_atomic, IoError, IoResult};

/// A grayscale (1 channel) or RGB (3 channel) image with values in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Image {
    pub grid: GridDomain,
    pub signal: Signal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnmEncoding {
    /// `P2` / `P3` decimal text.
    Plain,
    /// `P5` / `P6` bytes.
    Raw,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    /// Next whitespace-delimited header token, skipping `#` comments.
    fn token(&mut self) -> IoResult<&str> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(IoError::Format("unexpected end of image data".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| IoError::Format("invalid image header".into()))
    }

    fn number(&mut self, what: &str) -> IoResult<usize> {
        let t = self.token()?;
        t.parse().map_err(|_| IoError::Format(format!("invalid {what} `{t}`")))
    }
}

/// Parses P2, P3, P5 and P6 images with maxval 255; intensities are divided by 255.
pub fn parse_pnm(bytes: &[u8]) -> IoResult<Image> {
    let mut c = Cursor { bytes, pos: 0 };
    let magic = c.token()?.to_string();
    let (channels, raw) = match magic.as_str() {
        "P2" => (1, false),
        "P3" => (3, false),
        "P5" => (1, true),
        "P6" => (3, true),
        other => return Err(IoError::Format(format!("unsupported image magic `{other}`"))),
    };
    let width = c.number("width")?;
    let height = c.number("height")?;
    let maxval = c.number("maxval")?;
    if maxval != 255 {
        return Err(IoError::Format(format!("maxval must be 255, found {maxval}")));
    }
    let grid = GridDomain::new(width, height)?;
    let count = grid.len() * channels;
    let mut values = Vec::with_capacity(count);
    if raw {
        // Exactly one whitespace byte separates the header from the samples.
        let start = c.pos + 1;
        let data = bytes.get(start..start + count).ok_or_else(|| IoError::Format("image data is truncated".into()))?;
        if bytes.len() > start + count {
            return Err(IoError::Format("trailing bytes after image data".into()));
        }
        values.extend(data.iter().map(|&b| b as f64 / 255.0));
    } else {
        for _ in 0..count {
            let v = c.number("sample")?;
            if v > 255 {
                return Err(IoError::Format(format!("sample {v} exceeds maxval")));
            }
            values.push(v as f64 / 255.0);
        }
        if c.token().is_ok() {
            return Err(IoError::Format("trailing samples after image data".into()));
        }
    }
    Ok(Image { grid, signal: Signal::new(ElementKind::Pixel, channels, values)? })
}

pub fn read_pnm(path: &Path) -> IoResult<Image> {
    parse_pnm(&read_bytes(path)?)
}

/// Quantizes to 8 bits (`round(255 v)`, clamped) and encodes as PGM or PPM
/// depending on the channel count.
pub fn pnm_to_bytes(image: &Image, encoding: PnmEncoding) -> IoResult<Vec<u8>> {
    let ch = image.signal.channels();
    if ch != 1 && ch != 3 {
        return Err(IoError::Format(format!("images need 1 or 3 channels, found {ch}")));
    }
    if image.signal.len() != image.grid.len() {
        return Err(IoError::Format("image signal does not match its grid".into()));
    }
    let magic = match (ch, encoding) {
        (1, PnmEncoding::Plain) => "P2",
        (3, PnmEncoding::Plain) => "P3",
        (1, PnmEncoding::Raw) => "P5",
        _ => "P6",
    };
    let mut out = format!("{magic}\n{} {}\n255\n", image.grid.width(), image.grid.height()).into_bytes();
    let q = |v: f64| (v * 255.0).round().clamp(0.0, 255.0) as u8;
    match encoding {
        PnmEncoding::Raw => out.extend(image.signal.values().iter().map(|&v| q(v))),
        PnmEncoding::Plain => {
            let w = image.grid.width() * ch;
            for row in image.signal.values().chunks(w) {
                let line: Vec<String> = row.iter().map(|&v| q(v).to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
    }
    Ok(out)
}

pub fn write_pnm(path: &Path, image: &Image, encoding: PnmEncoding) -> IoResult<()> {
    write_atomic(path, &pnm_to_bytes(image, encoding)?)
}
