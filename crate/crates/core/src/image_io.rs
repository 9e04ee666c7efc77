//! PGM (P2 ASCII and P5 binary) decoding and encoding, plus the mapping
//! between integer samples and the unit gray-level interval `[0, 1]`.
//!
//! Samples are stored as raw integers; unit values only appear inside
//! computations. Binary files with `maxval > 255` use big-endian 16-bit
//! samples, as in Netpbm.

use crate::error::PgmError;

/// Longest line emitted for P2 sample data.
const P2_LINE_LIMIT: usize = 70;

/// PGM flavor: `P2` is ASCII, `P5` is raw binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PgmFormat {
    P2,
    P5,
}

impl PgmFormat {
    pub fn magic(self) -> &'static str {
        match self {
            PgmFormat::P2 => "P2",
            PgmFormat::P5 => "P5",
        }
    }
}

/// A gray-level raster: row-major integer samples in `[0, maxval]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    maxval: u16,
    samples: Vec<u16>,
}

impl GrayImage {
    /// Validates dimensions, `maxval` and every sample.
    pub fn new(
        width: usize,
        height: usize,
        maxval: u16,
        samples: Vec<u16>,
    ) -> Result<Self, PgmError> {
        if width == 0 || height == 0 {
            return Err(PgmError::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if maxval == 0 {
            return Err(PgmError::MaxvalOutOfRange(0));
        }
        let expected = width.checked_mul(height).ok_or_else(|| {
            PgmError::InvalidImage(format!("{width}x{height} overflows the pixel count"))
        })?;
        if samples.len() != expected {
            return Err(PgmError::InvalidImage(format!(
                "expected {expected} samples, got {}",
                samples.len()
            )));
        }
        if let Some((index, &sample)) = samples.iter().enumerate().find(|(_, &s)| s > maxval) {
            return Err(PgmError::SampleOutOfRange {
                index,
                sample: sample.into(),
                maxval,
            });
        }
        Ok(Self {
            width,
            height,
            maxval,
            samples,
        })
    }

    /// Builds a single-row image, handy for synthetic inputs.
    pub fn from_row(maxval: u16, samples: Vec<u16>) -> Result<Self, PgmError> {
        let width = samples.len();
        Self::new(width, 1, maxval, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn maxval(&self) -> u16 {
        self.maxval
    }

    pub fn samples(&self) -> &[u16] {
        &self.samples
    }

    pub fn pixel_count(&self) -> usize {
        self.samples.len()
    }

    /// Same geometry and `maxval`, new samples. Callers guarantee the range.
    pub(crate) fn with_samples(&self, samples: Vec<u16>) -> Self {
        debug_assert_eq!(samples.len(), self.samples.len());
        debug_assert!(samples.iter().all(|&s| s <= self.maxval));
        Self {
            width: self.width,
            height: self.height,
            maxval: self.maxval,
            samples,
        }
    }
}

/// `sample / maxval`, a single correctly rounded division.
pub fn to_unit(sample: u16, maxval: u16) -> f64 {
    f64::from(sample) / f64::from(maxval)
}

/// Nearest integer to `value * maxval` (ties away from zero), clamped to
/// `[0, maxval]`. NaN maps to 0.
pub fn from_unit(value: f64, maxval: u16) -> u16 {
    let scaled = (value * f64::from(maxval)).round();
    if scaled.is_nan() || scaled <= 0.0 {
        0
    } else if scaled >= f64::from(maxval) {
        maxval
    } else {
        scaled as u16
    }
}

/// Decodes a P2 or P5 image.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    read_pgm_with_format(bytes).map(|(img, _)| img)
}

/// Decodes a P2 or P5 image and reports which flavor it was.
pub fn read_pgm_with_format(bytes: &[u8]) -> Result<(GrayImage, PgmFormat), PgmError> {
    let format = match bytes.get(..2) {
        Some(b"P2") => PgmFormat::P2,
        Some(b"P5") => PgmFormat::P5,
        other => {
            let found = other
                .map(|m| String::from_utf8_lossy(m).into_owned())
                .unwrap_or_else(|| String::from_utf8_lossy(bytes).into_owned());
            return Err(PgmError::BadMagic(found));
        }
    };
    let mut cursor = Cursor { bytes, pos: 2 };
    // The magic must be followed by whitespace or a comment.
    match cursor.peek() {
        Some(b) if b.is_ascii_whitespace() || b == b'#' => {}
        _ => {
            return Err(PgmError::BadMagic(
                String::from_utf8_lossy(&bytes[..bytes.len().min(3)]).into_owned(),
            ))
        }
    }

    let width = cursor.header_number("width")?;
    let height = cursor.header_number("height")?;
    let maxval = cursor.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::HeaderParse(format!(
            "dimensions must be positive, got {width}x{height}"
        )));
    }
    if !(1..=65535).contains(&maxval) {
        return Err(PgmError::MaxvalOutOfRange(maxval));
    }
    let maxval = maxval as u16;
    let expected = usize::try_from(width)
        .ok()
        .zip(usize::try_from(height).ok())
        .and_then(|(w, h)| w.checked_mul(h))
        .ok_or_else(|| PgmError::HeaderParse(format!("{width}x{height} is too large")))?;

    let samples = match format {
        PgmFormat::P2 => cursor.ascii_samples(expected, maxval)?,
        PgmFormat::P5 => {
            match cursor.peek() {
                Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
                Some(_) => {
                    return Err(PgmError::HeaderParse(
                        "maxval must be followed by a single whitespace byte".into(),
                    ))
                }
                None => return Err(PgmError::Truncated { expected, found: 0 }),
            }
            binary_samples(&bytes[cursor.pos..], expected, maxval)?
        }
    };
    let img = GrayImage::new(width as usize, height as usize, maxval, samples)?;
    Ok((img, format))
}

/// Encodes `img` as P2 or P5. `read_pgm` of the result reproduces `img`.
pub fn write_pgm(img: &GrayImage, format: PgmFormat) -> Vec<u8> {
    let mut out = format!(
        "{}\n{} {}\n{}\n",
        format.magic(),
        img.width,
        img.height,
        img.maxval
    )
    .into_bytes();
    match format {
        PgmFormat::P2 => {
            let mut line_len = 0usize;
            for &s in &img.samples {
                let token = s.to_string();
                if line_len > 0 && line_len + 1 + token.len() > P2_LINE_LIMIT {
                    out.push(b'\n');
                    line_len = 0;
                }
                if line_len > 0 {
                    out.push(b' ');
                    line_len += 1;
                }
                out.extend_from_slice(token.as_bytes());
                line_len += token.len();
            }
            out.push(b'\n');
        }
        PgmFormat::P5 => {
            if img.maxval > 255 {
                out.reserve(img.samples.len() * 2);
                for &s in &img.samples {
                    out.extend_from_slice(&s.to_be_bytes());
                }
            } else {
                out.extend(img.samples.iter().map(|&s| s as u8));
            }
        }
    }
    out
}

fn binary_samples(payload: &[u8], expected: usize, maxval: u16) -> Result<Vec<u16>, PgmError> {
    let samples: Vec<u16> = if maxval > 255 {
        if payload.len() / 2 < expected {
            return Err(PgmError::Truncated {
                expected,
                found: payload.len() / 2,
            });
        }
        payload
            .chunks_exact(2)
            .take(expected)
            .map(|pair| u16::from_be_bytes([pair[0], pair[1]]))
            .collect()
    } else {
        if payload.len() < expected {
            return Err(PgmError::Truncated {
                expected,
                found: payload.len(),
            });
        }
        payload[..expected].iter().map(|&b| u16::from(b)).collect()
    };
    if let Some((index, &sample)) = samples.iter().enumerate().find(|(_, &s)| s > maxval) {
        return Err(PgmError::SampleOutOfRange {
            index,
            sample: sample.into(),
            maxval,
        });
    }
    Ok(samples)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Skips whitespace and `#` comments (through end of line).
    fn skip_filler(&mut self) {
        while let Some(b) = self.peek() {
            if b == b'#' {
                while let Some(c) = self.peek() {
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

    fn token(&mut self) -> Option<&[u8]> {
        self.skip_filler();
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn header_number(&mut self, field: &str) -> Result<u64, PgmError> {
        let token = self
            .token()
            .ok_or_else(|| PgmError::HeaderParse(format!("missing {field}")))?;
        parse_decimal(token)
            .ok_or_else(|| PgmError::HeaderParse(format!("{field} is not a decimal integer")))
    }

    fn ascii_samples(&mut self, expected: usize, maxval: u16) -> Result<Vec<u16>, PgmError> {
        let mut samples = Vec::with_capacity(expected);
        while samples.len() < expected {
            let index = samples.len();
            let Some(token) = self.token() else {
                return Err(PgmError::Truncated {
                    expected,
                    found: index,
                });
            };
            let value = parse_decimal(token).ok_or_else(|| {
                PgmError::HeaderParse(format!("sample {index} is not a decimal integer"))
            })?;
            if value > u64::from(maxval) {
                return Err(PgmError::SampleOutOfRange {
                    index,
                    sample: value.min(u64::from(u32::MAX)) as u32,
                    maxval,
                });
            }
            samples.push(value as u16);
        }
        Ok(samples)
    }
}

fn parse_decimal(token: &[u8]) -> Option<u64> {
    if token.is_empty() || !token.iter().all(u8::is_ascii_digit) {
        return None;
    }
    // Saturate absurdly long numbers instead of failing to parse them.
    Some(token.iter().fold(0u64, |acc, &d| {
        acc.saturating_mul(10).saturating_add(u64::from(d - b'0'))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_minimal_p2() {
        let img = read_pgm(b"P2\n2 1\n255\n0 255\n").unwrap();
        assert_eq!((img.width(), img.height(), img.maxval()), (2, 1, 255));
        assert_eq!(img.samples(), &[0, 255]);
    }

    #[test]
    fn reads_single_binary_sample() {
        let mut bytes = b"P5\n1 1\n255\n".to_vec();
        bytes.push(0x80);
        let img = read_pgm(&bytes).unwrap();
        assert_eq!(img.samples(), &[128]);
    }

    #[test]
    fn rejects_unsupported_magic() {
        assert!(matches!(
            read_pgm(b"P3\n1 1\n255\n0 0 0\n"),
            Err(PgmError::BadMagic(_))
        ));
        assert!(matches!(read_pgm(b""), Err(PgmError::BadMagic(_))));
        assert!(matches!(read_pgm(b"P25 1 1"), Err(PgmError::BadMagic(_))));
    }

    #[test]
    fn skips_header_comments() {
        let img = read_pgm(b"P2\n# made by hand\n2 # width\n1\n# max\n7\n3 7\n").unwrap();
        assert_eq!(img.maxval(), 7);
        assert_eq!(img.samples(), &[3, 7]);
    }

    #[test]
    fn header_errors() {
        assert!(matches!(
            read_pgm(b"P2\nx 1\n255\n0\n"),
            Err(PgmError::HeaderParse(_))
        ));
        assert!(matches!(
            read_pgm(b"P2\n2 1\n"),
            Err(PgmError::HeaderParse(_))
        ));
        assert!(matches!(
            read_pgm(b"P2\n1 1\n0\n0\n"),
            Err(PgmError::MaxvalOutOfRange(0))
        ));
        assert!(matches!(
            read_pgm(b"P5\n1 1\n65536\n\0\0"),
            Err(PgmError::MaxvalOutOfRange(65536))
        ));
        assert!(matches!(
            read_pgm(b"P2\n0 1\n255\n"),
            Err(PgmError::HeaderParse(_))
        ));
    }

    #[test]
    fn truncation_and_range_errors() {
        assert!(matches!(
            read_pgm(b"P2\n3 1\n255\n0 1\n"),
            Err(PgmError::Truncated {
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            read_pgm(b"P5\n2 1\n255\n\x01"),
            Err(PgmError::Truncated { .. })
        ));
        assert!(matches!(
            read_pgm(b"P5\n1 1\n1000\n\x01"),
            Err(PgmError::Truncated { .. })
        ));
        assert!(matches!(
            read_pgm(b"P2\n2 1\n10\n3 11\n"),
            Err(PgmError::SampleOutOfRange {
                index: 1,
                sample: 11,
                maxval: 10
            })
        ));
        assert!(matches!(
            read_pgm(b"P5\n1 1\n100\n\xff"),
            Err(PgmError::SampleOutOfRange { .. })
        ));
    }

    #[test]
    fn writes_minimal_p2() {
        let img = GrayImage::new(2, 1, 255, vec![0, 255]).unwrap();
        assert_eq!(write_pgm(&img, PgmFormat::P2), b"P2\n2 1\n255\n0 255\n");
    }

    #[test]
    fn sixteen_bit_binary_is_big_endian() {
        let img = GrayImage::new(2, 1, 65535, vec![256, 65535]).unwrap();
        let bytes = write_pgm(&img, PgmFormat::P5);
        let header = b"P5\n2 1\n65535\n";
        assert_eq!(&bytes[..header.len()], header);
        // 256 = 0x0100
        assert_eq!(&bytes[header.len()..], &[0x01, 0x00, 0xff, 0xff]);
    }

    #[test]
    fn p2_lines_stay_short() {
        let img = GrayImage::new(100, 3, 65535, (0..300).map(|i| 65535 - i).collect()).unwrap();
        let bytes = write_pgm(&img, PgmFormat::P2);
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.lines().all(|l| l.len() <= P2_LINE_LIMIT));
        assert_eq!(read_pgm(text.as_bytes()).unwrap(), img);
    }

    #[test]
    fn unit_mapping() {
        assert_eq!(to_unit(255, 255), 1.0);
        assert_eq!(to_unit(0, 255), 0.0);
        assert_eq!(from_unit(0.5, 255), 128);
        assert_eq!(from_unit(1.2, 255), 255);
        assert_eq!(from_unit(-0.3, 255), 0);
        assert_eq!(from_unit(f64::NAN, 255), 0);
    }

    #[test]
    fn constructor_checks_invariants() {
        assert!(GrayImage::new(2, 2, 255, vec![0; 3]).is_err());
        assert!(GrayImage::new(0, 2, 255, vec![]).is_err());
        assert!(GrayImage::new(1, 1, 0, vec![0]).is_err());
        assert!(matches!(
            GrayImage::new(1, 1, 9, vec![10]),
            Err(PgmError::SampleOutOfRange { .. })
        ));
    }

    #[test]
    fn unit_round_trip_exhaustive_for_small_maxvals() {
        for m in [1u16, 2, 3, 7, 255, 1023] {
            for s in 0..=m {
                assert_eq!(from_unit(to_unit(s, m), m), s);
                if s > 0 {
                    assert!(to_unit(s, m) > to_unit(s - 1, m));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn unit_round_trip(m in 1u16..=u16::MAX, frac in 0.0f64..=1.0) {
            let s = (frac * f64::from(m)) as u16;
            prop_assert_eq!(from_unit(to_unit(s, m), m), s);
        }

        #[test]
        fn pgm_round_trip(
            width in 1usize..12,
            height in 1usize..12,
            maxval in prop_oneof![1u16..=255, 256u16..=u16::MAX],
            seed in any::<u64>(),
        ) {
            let samples: Vec<u16> = (0..width * height)
                .map(|i| {
                    let h = seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64).wrapping_mul(1442695040888963407);
                    ((h >> 17) % (u64::from(maxval) + 1)) as u16
                })
                .collect();
            let img = GrayImage::new(width, height, maxval, samples).unwrap();
            for format in [PgmFormat::P2, PgmFormat::P5] {
                let (back, f) = read_pgm_with_format(&write_pgm(&img, format)).unwrap();
                prop_assert_eq!(&back, &img);
                prop_assert_eq!(f, format);
            }
        }
    }
}
