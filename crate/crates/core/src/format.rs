//! On-disk formats: exact fraction strings, `--mu` weight lists, the JSON mask
//! document, grid CSV files, and 16-bit PGM rasters.
//!
//! Every parser here accepts untrusted input and reports malformed data as
//! `Error::Format` (or the underlying JSON/CSV error) rather than panicking.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::{support_of, SupportOctagon};
use crate::error::{format_err, Result};
use crate::laurent::{Exponent2, Rational};
use crate::mask::MaskMatrix;
use crate::subdivision::{GridFunction, Window};
use crate::symbols::{Family, Params, SchemeSymbol};

/// Largest accepted lattice coordinate or exponent magnitude in input files.
pub const MAX_COORDINATE: i64 = 1 << 30;

/// Largest accepted number of lattice points in a grid window or mask.
pub const MAX_POINTS: u128 = 1 << 24;

fn parse_integer(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format_err(format!("not an integer: {s:?}")));
    }
    s.parse::<BigInt>().map_err(|e| format_err(format!("not an integer: {s:?}: {e}")))
}

/// Parses `p/q` or `p` (optionally signed, surrounding whitespace ignored).
pub fn parse_fraction(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (parse_integer(p)?, parse_integer(q)?),
        None => (parse_integer(s)?, BigInt::from(1)),
    };
    if !den.is_positive() {
        return Err(format_err(format!("denominator must be positive in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Always `p/q` in lowest terms, including integers (`3/1`, `0/1`).
pub fn format_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Comma-separated fractions; the empty string is the empty list.
pub fn parse_mu_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_fraction).collect()
}

mod json_int {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::ser::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        let n: serde_json::Number = v.to_string().parse().map_err(S::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        let text = n.to_string();
        let digits = text.strip_prefix('-').unwrap_or(&text);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(D::Error::custom(format!("expected an integer, got {text}")));
        }
        text.parse().map_err(D::Error::custom)
    }
}

/// Arbitrary-precision integer written as a bare JSON number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonInt(#[serde(with = "json_int")] pub BigInt);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub n: Option<u32>,
    pub l: Option<u32>,
    #[serde(default)]
    pub mu: Vec<String>,
}

/// JSON form of a mask: `rows / denominator`, top-left entry at exponent `offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskDocument {
    pub family: String,
    pub params: ParamsDoc,
    pub denominator: JsonInt,
    pub offset: [i64; 2],
    pub rows: Vec<Vec<JsonInt>>,
    pub support: SupportOctagon,
}

impl MaskDocument {
    pub fn from_symbol(symbol: &SchemeSymbol) -> Result<Self> {
        let mask = MaskMatrix::from_symbol(&symbol.poly)?;
        let support = support_of(&symbol.poly)?.octagon;
        let offset = mask.offset();
        Ok(MaskDocument {
            family: symbol.family.name().to_string(),
            params: ParamsDoc {
                n: symbol.params.n,
                l: symbol.params.l,
                mu: symbol.params.mu.iter().map(format_fraction).collect(),
            },
            denominator: JsonInt(mask.denominator().clone()),
            offset: [offset.e1, offset.e2],
            rows: mask
                .rows()
                .iter()
                .map(|r| r.iter().cloned().map(JsonInt).collect())
                .collect(),
            support,
        })
    }

    /// Parses and validates a document.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: MaskDocument = serde_json::from_str(text)?;
        doc.mask()?;
        Ok(doc)
    }

    /// JSON with one mask row per line.
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self.rows.iter().map(|r| format!("    {}", compact(r))).collect();
        format!(
            "{{\n  \"family\": {},\n  \"params\": {},\n  \"denominator\": {},\n  \"offset\": {},\n  \"rows\": [\n{}\n  ],\n  \"support\": {}\n}}\n",
            compact(&self.family),
            compact(&self.params),
            compact(&self.denominator),
            compact(&self.offset),
            rows.join(",\n"),
            compact(&self.support),
        )
    }

    pub fn mask(&self) -> Result<MaskMatrix> {
        let [e1, e2] = self.offset;
        let height = self.rows.len() as i64;
        let width = self.rows.first().map_or(0, Vec::len) as i64;
        if (width as u128) * (height as u128) > MAX_POINTS {
            return Err(format_err("mask is too large"));
        }
        let in_range = |v: i64| v.abs() <= MAX_COORDINATE;
        if !in_range(e1) || !in_range(e2) || !in_range(e1 + width) || !in_range(e2 - height) {
            return Err(format_err("mask offset out of range"));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.0.clone()).collect())
            .collect();
        MaskMatrix::from_rows(Exponent2::new(e1, e2), self.denominator.0.clone(), rows)
    }

    pub fn to_symbol(&self) -> Result<SchemeSymbol> {
        let poly = self.mask()?.to_symbol();
        let family = Family::from_name(&self.family).unwrap_or(Family::Custom);
        let mu = self
            .params
            .mu
            .iter()
            .map(|m| parse_fraction(m))
            .collect::<Result<Vec<_>>>()?;
        let params = Params {
            n: self.params.n,
            l: self.params.l,
            mu,
        };
        Ok(SchemeSymbol::new(poly, family, params))
    }
}

fn compact<T: Serialize + ?Sized>(v: &T) -> String {
    // serialisation of plain data into a String cannot fail
    serde_json::to_string(v).expect("plain data serialises")
}

/// Grid CSV: `# level:` and `# window: x0 y0 x1 y1` comment lines, then the
/// header `alpha1,alpha2,value` and one row per window point in raster order.
pub fn write_grid_csv(g: &GridFunction) -> String {
    let w = g.window();
    let mut out = String::new();
    let _ = writeln!(out, "# level: {}", g.level());
    let _ = writeln!(out, "# window: {} {} {} {}", w.x0, w.y0, w.x1, w.y1);
    out.push_str("alpha1,alpha2,value\n");
    for p in w.points() {
        let v = g.get(p).expect("window point");
        let _ = writeln!(out, "{},{},{}", p.0, p.1, format_fraction(&v));
    }
    out
}

fn parse_coordinate(s: &str) -> Result<i64> {
    let v: i64 = s
        .trim()
        .parse()
        .map_err(|_| format_err(format!("bad coordinate {s:?}")))?;
    if v.abs() > MAX_COORDINATE {
        return Err(format_err(format!("coordinate {v} out of range")));
    }
    Ok(v)
}

/// Parses a grid CSV. Without a `# window:` line the window is the bounding box
/// of the listed points, and every point of it must be listed.
pub fn parse_grid_csv(text: &str) -> Result<GridFunction> {
    let mut level = 0u32;
    let mut window: Option<Window> = None;
    for line in text.lines().map(str::trim).filter(|l| l.starts_with('#')) {
        let body = line.trim_start_matches('#').trim();
        if let Some(v) = body.strip_prefix("level:") {
            level = v
                .trim()
                .parse()
                .map_err(|_| format_err(format!("bad level line {line:?}")))?;
            if level > 64 {
                return Err(format_err("level out of range"));
            }
        } else if let Some(v) = body.strip_prefix("window:") {
            let parts: Vec<i64> = v
                .split_whitespace()
                .map(parse_coordinate)
                .collect::<Result<_>>()?;
            let [x0, y0, x1, y1] = parts[..] else {
                return Err(format_err(format!("window line needs four integers: {line:?}")));
            };
            let w = Window::new(x0, y0, x1, y1);
            if w.is_empty() || w.area() > MAX_POINTS {
                return Err(format_err(format!("unusable window {w:?}")));
            }
            window = Some(w);
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["alpha1", "alpha2", "value"] {
        return Err(format_err("grid CSV header must be alpha1,alpha2,value"));
    }
    let mut entries: Vec<((i64, i64), Rational)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() != 3 {
            return Err(format_err("grid CSV rows need exactly three fields"));
        }
        let p = (parse_coordinate(&record[0])?, parse_coordinate(&record[1])?);
        entries.push((p, parse_fraction(&record[2])?));
        if entries.len() as u128 > MAX_POINTS {
            return Err(format_err("grid has too many points"));
        }
    }

    let window = match window {
        Some(w) => w,
        None => {
            if entries.is_empty() {
                return Err(format_err("grid without a window line must list at least one point"));
            }
            let w = Window::new(
                entries.iter().map(|(p, _)| p.0).min().unwrap(),
                entries.iter().map(|(p, _)| p.1).min().unwrap(),
                entries.iter().map(|(p, _)| p.0).max().unwrap(),
                entries.iter().map(|(p, _)| p.1).max().unwrap(),
            );
            if w.area() != entries.len() as u128 {
                return Err(format_err("grid without a window line must list every point of its bounding box"));
            }
            w
        }
    };
    let mut g = GridFunction::zeros(level, window);
    let mut seen = std::collections::HashSet::with_capacity(entries.len());
    for (p, v) in entries {
        if !window.contains(p) {
            return Err(format_err(format!("point {p:?} lies outside the declared window")));
        }
        if !seen.insert(p) {
            return Err(format_err(format!("duplicate point {p:?}")));
        }
        g.set(p, v)?;
    }
    Ok(g)
}

/// 16-bit binary PGM of the window (rows top to bottom in decreasing `α2`),
/// min–max normalised with exact rounding, plus the sidecar text carrying the
/// normalisation constants.
pub fn write_pgm(g: &GridFunction) -> (Vec<u8>, String) {
    let w = g.window();
    let (min, max) = g.min_max();
    let range = &max - &min;
    let full = Rational::from_integer(BigInt::from(u16::MAX));
    let mut bytes = format!("P5\n{} {}\n{}\n", w.width(), w.height(), u16::MAX).into_bytes();
    for p in w.points() {
        let v = g.get(p).expect("window point");
        let level: u16 = if range.is_zero() {
            0
        } else {
            let scaled = ((v - &min) * &full / &range).round();
            scaled.to_integer().try_into().expect("normalised value fits in 16 bits")
        };
        bytes.extend_from_slice(&level.to_be_bytes());
    }
    let sidecar = format!("min: {}\nmax: {}\n", format_fraction(&min), format_fraction(&max));
    (bytes, sidecar)
}

/// Decoded 16-bit PGM raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster16 {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u16>,
}

impl Raster16 {
    pub fn pixel(&self, col: usize, row: usize) -> u16 {
        self.pixels[row * self.width + col]
    }
}

/// Decodes a binary `P5` PGM with `maxval > 255` (big-endian 16-bit samples).
pub fn parse_pgm(bytes: &[u8]) -> Result<Raster16> {
    let mut pos = 0usize;
    let mut fields = [0u64; 3];
    if bytes.get(..2) != Some(b"P5".as_slice()) {
        return Err(format_err("not a binary PGM (missing P5 magic)"));
    }
    pos += 2;
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos || pos - start > 9 {
            return Err(format_err("malformed PGM header"));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .expect("ascii digits")
            .parse()
            .expect("at most nine digits");
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(format_err("malformed PGM header"));
    }
    pos += 1;
    let [width, height, maxval] = fields;
    if !(256..=65535).contains(&maxval) {
        return Err(format_err("only 16-bit PGM rasters are supported"));
    }
    let count = width
        .checked_mul(height)
        .filter(|&c| c as u128 <= MAX_POINTS)
        .ok_or_else(|| format_err("PGM raster too large"))? as usize;
    let data = &bytes[pos..];
    if data.len() != 2 * count {
        return Err(format_err(format!("expected {} sample bytes, found {}", 2 * count, data.len())));
    }
    let pixels: Vec<u16> = data.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect();
    if pixels.iter().any(|&p| p as u64 > maxval) {
        return Err(format_err("sample exceeds maxval"));
    }
    Ok(Raster16 {
        width: width as usize,
        height: height as usize,
        maxval: maxval as u16,
        pixels,
    })
}
