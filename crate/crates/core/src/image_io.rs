//! Image containers, PGM / text-grid loading, sub-level thresholding and
//! heatmap output.
//!
//! Black pixels carry the value 0. A P1 bitmap stores ink as bit 1, so bit 1
//! loads as value 0 and bit 0 as value 255.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::HeatValue;

/// A pixel position, `(row, col)` with row 0 at the top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pixel {
    pub row: usize,
    pub col: usize,
}

impl Pixel {
    pub const fn new(row: usize, col: usize) -> Self {
        Pixel { row, col }
    }

    /// Chebyshev (king-move) distance.
    pub fn chebyshev(self, other: Pixel) -> usize {
        self.row.abs_diff(other.row).max(self.col.abs_diff(other.col))
    }

    /// The up to eight pixels at Chebyshev distance 1, without bounds clipping
    /// beyond the non-negative quadrant.
    pub fn neighbors8(self) -> impl Iterator<Item = Pixel> {
        let (r, c) = (self.row as i64, self.col as i64);
        (-1i64..=1)
            .flat_map(move |dr| (-1i64..=1).map(move |dc| (dr, dc)))
            .filter(|&(dr, dc)| dr != 0 || dc != 0)
            .filter_map(move |(dr, dc)| {
                let (nr, nc) = (r + dr, c + dc);
                (nr >= 0 && nc >= 0).then(|| Pixel::new(nr as usize, nc as usize))
            })
    }
}

impl From<(usize, usize)> for Pixel {
    fn from((row, col): (usize, usize)) -> Self {
        Pixel::new(row, col)
    }
}

pub type PixelSet = BTreeSet<Pixel>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayscaleImage {
    width: usize,
    height: usize,
    values: Vec<u32>,
}

impl GrayscaleImage {
    pub fn new(width: usize, height: usize, values: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!(
                "image must be non-empty, got {width}x{height}"
            )));
        }
        if values.len() != width * height {
            return Err(Error::Dimension(format!(
                "{width}x{height} image needs {} values, got {}",
                width * height,
                values.len()
            )));
        }
        Ok(GrayscaleImage {
            width,
            height,
            values,
        })
    }

    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(bad) = rows.iter().position(|r| r.as_ref().len() != width) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} values, expected {width}",
                rows[bad].as_ref().len()
            )));
        }
        let values = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        GrayscaleImage::new(width, height, values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.values[row * self.width + col]
    }

    pub fn max_value(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn pixels(&self) -> impl Iterator<Item = (Pixel, u32)> + '_ {
        let w = self.width;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (Pixel::new(i / w, i % w), v))
    }
}

/// A binary image: a grid and its set of black pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    black: PixelSet,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, black: impl IntoIterator<Item = Pixel>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!(
                "image must be non-empty, got {width}x{height}"
            )));
        }
        let black: PixelSet = black.into_iter().collect();
        if let Some(p) = black.iter().find(|p| p.row >= height || p.col >= width) {
            return Err(Error::Dimension(format!(
                "pixel ({}, {}) lies outside the {width}x{height} grid",
                p.row, p.col
            )));
        }
        Ok(BinaryImage {
            width,
            height,
            black,
        })
    }

    pub fn white(width: usize, height: usize) -> Result<Self> {
        BinaryImage::new(width, height, std::iter::empty())
    }

    /// Parses ASCII art: `#` (or `X`, `1`) is black, `.` (or `0`, space) is
    /// white. Blank lines and surrounding whitespace are ignored.
    pub fn from_art(art: &str) -> Result<Self> {
        let rows: Vec<&str> = art
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut black = PixelSet::new();
        for (r, line) in rows.iter().enumerate() {
            if line.chars().count() != width {
                return Err(Error::Dimension(format!("art row {r} has the wrong length")));
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '#' | 'X' | '1' => {
                        black.insert(Pixel::new(r, c));
                    }
                    '.' | '0' | ' ' => {}
                    other => return Err(Error::Format(format!("unexpected art character {other:?}"))),
                }
            }
        }
        BinaryImage::new(width, height, black)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn black(&self) -> &PixelSet {
        &self.black
    }

    pub fn is_black(&self, p: Pixel) -> bool {
        self.black.contains(&p)
    }

    /// Grayscale view: black is 0, white is 255.
    pub fn to_grayscale(&self) -> GrayscaleImage {
        let mut values = vec![255u32; self.width * self.height];
        for p in &self.black {
            values[p.row * self.width + p.col] = 0;
        }
        GrayscaleImage {
            width: self.width,
            height: self.height,
            values,
        }
    }
}

/// Real-valued grid aligned with an image.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap<T> {
    width: usize,
    height: usize,
    heat: Vec<T>,
}

impl<T: HeatValue> Heatmap<T> {
    pub fn zeros(width: usize, height: usize) -> Self {
        Heatmap {
            width,
            height,
            heat: vec![T::zero(); width * height],
        }
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != width) {
            return Err(Error::Dimension("ragged heatmap rows".into()));
        }
        let heat: Vec<T> = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        if heat.iter().any(|v| !v.is_finite_value()) {
            return Err(Error::Format("heatmap entries must be finite".into()));
        }
        Ok(Heatmap {
            width,
            height,
            heat,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[T] {
        &self.heat
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.heat[row * self.width + col]
    }

    pub fn add_at(&mut self, row: usize, col: usize, v: T) {
        self.heat[row * self.width + col] += v;
    }

    /// Pointwise sum; both maps must have the same shape.
    pub fn accumulate(&mut self, other: &Heatmap<T>) {
        assert_eq!(
            (self.width, self.height),
            (other.width, other.height),
            "heatmap shapes differ"
        );
        for (a, &b) in self.heat.iter_mut().zip(&other.heat) {
            *a += b;
        }
    }

    /// Multiplies by `1 - f`: heat on white pixels becomes zero.
    pub fn mask_to_black(&mut self, img: &BinaryImage) {
        for (i, h) in self.heat.iter_mut().enumerate() {
            let p = Pixel::new(i / self.width, i % self.width);
            if !img.is_black(p) {
                *h = T::zero();
            }
        }
    }

    /// Zeroes every entry strictly below `threshold`.
    pub fn zero_below(&mut self, threshold: T) {
        for h in &mut self.heat {
            if *h < threshold {
                *h = T::zero();
            }
        }
    }

    pub fn max(&self) -> Option<T> {
        self.heat
            .iter()
            .copied()
            .fold(None, |acc, v| match acc {
                Some(m) if m >= v => Some(m),
                _ => Some(v),
            })
    }

    /// Every pixel attaining the maximum heat.
    pub fn argmax(&self) -> Vec<Pixel> {
        let Some(m) = self.max() else {
            return Vec::new();
        };
        self.heat
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == m)
            .map(|(i, _)| Pixel::new(i / self.width, i % self.width))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.heat.iter().all(|v| v.is_zero())
    }

    /// Pixels with non-zero heat.
    pub fn support(&self) -> PixelSet {
        self.heat
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| Pixel::new(i / self.width, i % self.width))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapFormat {
    Csv,
    Pgm,
}

impl std::str::FromStr for HeatmapFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(HeatmapFormat::Csv),
            "pgm" => Ok(HeatmapFormat::Pgm),
            other => Err(Error::Usage(format!("unknown heatmap format {other:?}"))),
        }
    }
}

/// Loads a PGM (P1, P2 or P5) or a plain-text integer grid.
pub fn load_grayscale(path: impl AsRef<Path>) -> Result<GrayscaleImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_grayscale(&bytes)
}

/// Decodes image bytes; the format is sniffed from the leading magic number.
pub fn parse_grayscale(bytes: &[u8]) -> Result<GrayscaleImage> {
    let start = bytes
        .iter()
        .position(|b| !b.is_ascii_whitespace())
        .ok_or_else(|| Error::Format("empty input".into()))?;
    if bytes[start] == b'P' {
        parse_pnm(&bytes[start..])
    } else {
        let text = std::str::from_utf8(bytes)
            .map_err(|_| Error::Format("text grid is not valid UTF-8".into()))?;
        parse_text_grid(text)
    }
}

fn parse_text_grid(text: &str) -> Result<GrayscaleImage> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|_| Error::Format(format!("line {}: bad value {tok:?}", n + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    GrayscaleImage::from_rows(&rows)
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let begin = self.pos;
        while self.pos < self.bytes.len()
            && !self.bytes[self.pos].is_ascii_whitespace()
            && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        (self.pos > begin).then(|| &self.bytes[begin..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let tok = self
            .token()
            .ok_or_else(|| Error::Format(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("bad {what}: {:?}", String::from_utf8_lossy(tok))))
    }
}

fn parse_pnm(bytes: &[u8]) -> Result<GrayscaleImage> {
    let mut cur = HeaderCursor { bytes, pos: 0 };
    let magic = cur.token().unwrap_or_default();
    let (width, height) = match magic {
        b"P1" | b"P2" | b"P5" => (cur.number("width")?, cur.number("height")?),
        other => {
            return Err(Error::Format(format!(
                "unsupported magic number {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::Dimension("image too large".into()))?;

    let values = match magic {
        b"P1" => {
            let mut values = Vec::with_capacity(count);
            while values.len() < count {
                cur.skip_space_and_comments();
                match cur.bytes.get(cur.pos) {
                    Some(b'1') => values.push(0),
                    Some(b'0') => values.push(255),
                    Some(&b) => {
                        return Err(Error::Format(format!("bad P1 bit {:?}", b as char)));
                    }
                    None => break,
                }
                cur.pos += 1;
            }
            check_count(values.len(), count)?;
            values
        }
        b"P2" => {
            let maxval = cur.number("maxval")?;
            let mut values = Vec::with_capacity(count);
            while let Some(tok) = cur.token() {
                let v: u32 = std::str::from_utf8(tok)
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Format("bad P2 sample".into()))?;
                if v as usize > maxval {
                    return Err(Error::Format(format!("sample {v} exceeds maxval {maxval}")));
                }
                values.push(v);
            }
            check_count(values.len(), count)?;
            values
        }
        _ => {
            let maxval = cur.number("maxval")?;
            if maxval == 0 || maxval > 65535 {
                return Err(Error::Format(format!("bad maxval {maxval}")));
            }
            // exactly one whitespace byte separates header from raster
            if !cur.bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
                return Err(Error::Format("missing raster separator".into()));
            }
            let raster = &cur.bytes[cur.pos + 1..];
            let values: Vec<u32> = if maxval < 256 {
                raster.iter().map(|&b| u32::from(b)).collect()
            } else {
                raster
                    .chunks_exact(2)
                    .map(|c| u32::from(u16::from_be_bytes([c[0], c[1]])))
                    .collect()
            };
            check_count(values.len(), count)?;
            if let Some(v) = values.iter().find(|&&v| v as usize > maxval) {
                return Err(Error::Format(format!("sample {v} exceeds maxval {maxval}")));
            }
            values
        }
    };
    GrayscaleImage::new(width, height, values)
}

fn check_count(got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Dimension(format!(
            "header declares {want} pixels, payload has {got}"
        )));
    }
    Ok(())
}

/// Binary image whose black pixels are those with value `<= t`.
pub fn threshold_sublevel(g: &GrayscaleImage, t: i64) -> BinaryImage {
    let black = g
        .pixels()
        .filter(|&(_, v)| i64::from(v) <= t)
        .map(|(p, _)| p)
        .collect();
    BinaryImage {
        width: g.width,
        height: g.height,
        black,
    }
}

/// Plain-text grid encoding (one line per row, single spaces).
pub fn encode_text_grid(g: &GrayscaleImage) -> String {
    let mut out = String::new();
    for row in g.values.chunks(g.width) {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// ASCII PGM (P2) encoding with the given maxval.
pub fn encode_pgm_ascii(g: &GrayscaleImage, maxval: u32) -> String {
    let mut out = format!("P2\n{} {}\n{}\n", g.width, g.height, maxval);
    out.push_str(&encode_text_grid(g));
    out
}

pub fn write_grayscale_text(g: &GrayscaleImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_text_grid(g)).map_err(|e| Error::io(path, e))
}

pub fn encode_heatmap<T: HeatValue>(h: &Heatmap<T>, format: HeatmapFormat) -> String {
    let mut out = String::new();
    match format {
        HeatmapFormat::Csv => {
            for row in h.heat.chunks(h.width) {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        HeatmapFormat::Pgm => {
            let _ = write!(out, "P2\n{} {}\n255\n", h.width, h.height);
            let max = h
                .heat
                .iter()
                .filter_map(|v| v.to_f64())
                .fold(0.0f64, f64::max);
            for row in h.heat.chunks(h.width) {
                let line: Vec<String> = row
                    .iter()
                    .map(|v| {
                        let v = v.to_f64().unwrap_or(0.0);
                        if max <= 0.0 || v <= 0.0 {
                            0u32
                        } else {
                            ((v * 255.0 / max).floor() as u32).min(255)
                        }
                    })
                    .map(|v| v.to_string())
                    .collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
    }
    out
}

pub fn write_heatmap<T: HeatValue>(
    h: &Heatmap<T>,
    path: impl AsRef<Path>,
    format: HeatmapFormat,
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_heatmap(h, format)).map_err(|e| Error::io(path, e))
}
