//! Touchstone v1 two-port (.s2p) reader and writer.
//!
//! Version 1 only: `[...]` keyword lines from version 2 are rejected with an
//! error naming the line. Data rows carry nine numeric fields in the v1
//! two-port column order `freq S11 S21 S12 S22`. A trailing noise-parameter
//! block (five fields per row, first frequency below the last data row's) is
//! kept verbatim; only Fmin is consumed by the noise model.

use cryochain_core::rfnet::{te_from_nf, FrequencyGrid, RfNetError, Sparams, TwoPortRecord};
use num_complex::Complex64;
use std::fmt;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FreqUnit {
    pub fn factor(self) -> f64 {
        match self {
            FreqUnit::Hz => 1.0,
            FreqUnit::KHz => 1e3,
            FreqUnit::MHz => 1e6,
            FreqUnit::GHz => 1e9,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FreqUnit::Hz => "Hz",
            FreqUnit::KHz => "kHz",
            FreqUnit::MHz => "MHz",
            FreqUnit::GHz => "GHz",
        }
    }

    fn from_token(token: &str) -> Option<Self> {
        match token.to_ascii_lowercase().as_str() {
            "hz" => Some(FreqUnit::Hz),
            "khz" => Some(FreqUnit::KHz),
            "mhz" => Some(FreqUnit::MHz),
            "ghz" => Some(FreqUnit::GHz),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparamFormat {
    /// Real and imaginary parts.
    Ri,
    /// Linear magnitude and angle in degrees.
    Ma,
    /// 20 log10 magnitude and angle in degrees.
    Db,
}

impl SparamFormat {
    pub fn label(self) -> &'static str {
        match self {
            SparamFormat::Ri => "RI",
            SparamFormat::Ma => "MA",
            SparamFormat::Db => "DB",
        }
    }

    fn from_token(token: &str) -> Option<Self> {
        match token.to_ascii_lowercase().as_str() {
            "ri" => Some(SparamFormat::Ri),
            "ma" => Some(SparamFormat::Ma),
            "db" => Some(SparamFormat::Db),
            _ => None,
        }
    }
}

/// Parsed `# <unit> S <format> R <z>` header. Omitted entries take the v1
/// defaults: GHz, S, MA, 50 ohms.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionLine {
    pub freq_unit: FreqUnit,
    pub format: SparamFormat,
    pub z_ref_ohm: f64,
}

impl Default for OptionLine {
    fn default() -> Self {
        Self { freq_unit: FreqUnit::GHz, format: SparamFormat::Ma, z_ref_ohm: 50.0 }
    }
}

/// One row of the optional v1 noise-parameter block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseRow {
    pub freq_hz: f64,
    pub fmin_db: f64,
    pub gamma_opt_mag: f64,
    pub gamma_opt_deg: f64,
    /// Noise resistance normalized to the reference impedance.
    pub rn_norm: f64,
}

impl NoiseRow {
    /// Minimum noise temperature implied by Fmin.
    pub fn fmin_te_k(&self) -> Result<f64, RfNetError> {
        te_from_nf(self.fmin_db)
    }
}

/// A two-port file: header, comment lines in original order, the S-parameter
/// record, and any noise rows.
///
/// Invariant carried from the format, assumed by [`write_touchstone`]: when
/// `noise` is nonempty its first frequency lies below the last data-row
/// frequency and the block is strictly increasing, which is how a reader
/// tells the blocks apart.
#[derive(Debug, Clone, PartialEq)]
pub struct TouchstoneDocument {
    pub option_line: OptionLine,
    pub comments: Vec<String>,
    pub data: TwoPortRecord,
    pub noise: Vec<NoiseRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    VersionTwoKeyword(String),
    DuplicateOptionLine,
    OptionLineAfterData,
    DuplicateOptionToken(String),
    UnknownOptionToken(String),
    UnsupportedParameter(String),
    BadReference(String),
    BadNumber(String),
    NonFiniteValue(String),
    NegativeMagnitude(f64),
    FieldCount { got: usize },
    NonPositiveFrequency(f64),
    NonMonotonicFrequency(f64),
    NoData,
    Record(RfNetError),
}

/// Parse failure at a 1-based line number.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            ParseErrorKind::VersionTwoKeyword(k) => {
                write!(f, "Touchstone v2 keyword {k:?} not supported (v1 only)")
            }
            ParseErrorKind::DuplicateOptionLine => write!(f, "second option line"),
            ParseErrorKind::OptionLineAfterData => write!(f, "option line after data rows"),
            ParseErrorKind::DuplicateOptionToken(t) => {
                write!(f, "option entry {t:?} given twice")
            }
            ParseErrorKind::UnknownOptionToken(t) => write!(f, "unknown option entry {t:?}"),
            ParseErrorKind::UnsupportedParameter(p) => {
                write!(f, "parameter {p:?} not supported (S only)")
            }
            ParseErrorKind::BadReference(t) => write!(f, "bad reference impedance: {t}"),
            ParseErrorKind::BadNumber(t) => write!(f, "unparseable number {t:?}"),
            ParseErrorKind::NonFiniteValue(t) => write!(f, "non-finite value {t:?}"),
            ParseErrorKind::NegativeMagnitude(m) => write!(f, "negative magnitude {m}"),
            ParseErrorKind::FieldCount { got } => write!(
                f,
                "{got} fields; expected 9, or a 5-field noise row starting below the last data frequency"
            ),
            ParseErrorKind::NonPositiveFrequency(v) => write!(f, "frequency {v} not positive"),
            ParseErrorKind::NonMonotonicFrequency(v) => {
                write!(f, "frequency {v} not strictly increasing")
            }
            ParseErrorKind::NoData => write!(f, "no two-port data rows"),
            ParseErrorKind::Record(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn fail(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn parse_number(token: &str, line: usize) -> Result<f64, ParseError> {
    let v: f64 = token
        .parse()
        .map_err(|_| fail(line, ParseErrorKind::BadNumber(token.to_string())))?;
    if !v.is_finite() {
        return Err(fail(line, ParseErrorKind::NonFiniteValue(token.to_string())));
    }
    Ok(v)
}

fn parse_option_line(rest: &str, line: usize) -> Result<OptionLine, ParseError> {
    let mut unit = None;
    let mut format = None;
    let mut z = None;
    let mut param_seen = false;
    let mut tokens = rest.split_whitespace();
    while let Some(tok) = tokens.next() {
        if let Some(u) = FreqUnit::from_token(tok) {
            if unit.replace(u).is_some() {
                return Err(fail(line, ParseErrorKind::DuplicateOptionToken(tok.to_string())));
            }
        } else if let Some(fm) = SparamFormat::from_token(tok) {
            if format.replace(fm).is_some() {
                return Err(fail(line, ParseErrorKind::DuplicateOptionToken(tok.to_string())));
            }
        } else if tok.eq_ignore_ascii_case("s") {
            if param_seen {
                return Err(fail(line, ParseErrorKind::DuplicateOptionToken(tok.to_string())));
            }
            param_seen = true;
        } else if matches!(tok.to_ascii_lowercase().as_str(), "y" | "z" | "g" | "h") {
            return Err(fail(line, ParseErrorKind::UnsupportedParameter(tok.to_string())));
        } else if tok.eq_ignore_ascii_case("r") {
            let value = tokens
                .next()
                .ok_or_else(|| fail(line, ParseErrorKind::BadReference("missing value".into())))?;
            let v = parse_number(value, line)?;
            if v <= 0.0 {
                return Err(fail(line, ParseErrorKind::BadReference(format!("{v} ohms"))));
            }
            if z.replace(v).is_some() {
                return Err(fail(line, ParseErrorKind::DuplicateOptionToken(tok.to_string())));
            }
        } else {
            return Err(fail(line, ParseErrorKind::UnknownOptionToken(tok.to_string())));
        }
    }
    let defaults = OptionLine::default();
    Ok(OptionLine {
        freq_unit: unit.unwrap_or(defaults.freq_unit),
        format: format.unwrap_or(defaults.format),
        z_ref_ohm: z.unwrap_or(defaults.z_ref_ohm),
    })
}

fn pair_to_complex(
    format: SparamFormat,
    a: f64,
    b: f64,
    line: usize,
) -> Result<Complex64, ParseError> {
    match format {
        SparamFormat::Ri => Ok(Complex64::new(a, b)),
        SparamFormat::Ma => {
            if a < 0.0 {
                return Err(fail(line, ParseErrorKind::NegativeMagnitude(a)));
            }
            Ok(Complex64::from_polar(a, b.to_radians()))
        }
        SparamFormat::Db => Ok(Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians())),
    }
}

/// Parse a complete .s2p body. Errors are structured and carry the offending
/// 1-based line; no input panics.
pub fn parse_touchstone(text: &str) -> Result<TouchstoneDocument, ParseError> {
    let mut option: Option<OptionLine> = None;
    let mut comments = Vec::new();
    let mut freqs_raw: Vec<f64> = Vec::new();
    let mut sparams: Vec<Sparams> = Vec::new();
    let mut noise: Vec<NoiseRow> = Vec::new();
    let mut in_noise = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(c) = trimmed.strip_prefix('!') {
            comments.push(c.trim().to_string());
            continue;
        }
        let body = match trimmed.find('!') {
            Some(p) => trimmed[..p].trim_end(),
            None => trimmed,
        };
        if body.starts_with('[') {
            return Err(fail(line, ParseErrorKind::VersionTwoKeyword(body.to_string())));
        }
        if let Some(rest) = body.strip_prefix('#') {
            if option.is_some() {
                return Err(fail(line, ParseErrorKind::DuplicateOptionLine));
            }
            if !freqs_raw.is_empty() {
                return Err(fail(line, ParseErrorKind::OptionLineAfterData));
            }
            option = Some(parse_option_line(rest, line)?);
            continue;
        }

        let mut nums = Vec::new();
        for token in body.split_whitespace() {
            nums.push(parse_number(token, line)?);
        }
        let current = option.clone().unwrap_or_default();
        let starts_noise =
            nums.len() == 5 && !in_noise && freqs_raw.last().is_some_and(|last| nums[0] < *last);
        if in_noise || starts_noise {
            if nums.len() != 5 {
                return Err(fail(line, ParseErrorKind::FieldCount { got: nums.len() }));
            }
            in_noise = true;
            if nums[0] <= 0.0 {
                return Err(fail(line, ParseErrorKind::NonPositiveFrequency(nums[0])));
            }
            let freq_hz = nums[0] * current.freq_unit.factor();
            if noise.last().is_some_and(|prev| freq_hz <= prev.freq_hz) {
                return Err(fail(line, ParseErrorKind::NonMonotonicFrequency(nums[0])));
            }
            if nums[2] < 0.0 {
                return Err(fail(line, ParseErrorKind::NegativeMagnitude(nums[2])));
            }
            noise.push(NoiseRow {
                freq_hz,
                fmin_db: nums[1],
                gamma_opt_mag: nums[2],
                gamma_opt_deg: nums[3],
                rn_norm: nums[4],
            });
            continue;
        }
        if nums.len() != 9 {
            return Err(fail(line, ParseErrorKind::FieldCount { got: nums.len() }));
        }
        if nums[0] <= 0.0 {
            return Err(fail(line, ParseErrorKind::NonPositiveFrequency(nums[0])));
        }
        if freqs_raw.last().is_some_and(|last| nums[0] <= *last) {
            return Err(fail(line, ParseErrorKind::NonMonotonicFrequency(nums[0])));
        }
        let s11 = pair_to_complex(current.format, nums[1], nums[2], line)?;
        let s21 = pair_to_complex(current.format, nums[3], nums[4], line)?;
        let s12 = pair_to_complex(current.format, nums[5], nums[6], line)?;
        let s22 = pair_to_complex(current.format, nums[7], nums[8], line)?;
        freqs_raw.push(nums[0]);
        sparams.push(Sparams::new(s11, s12, s21, s22));
    }

    if freqs_raw.is_empty() {
        return Err(fail(last_line.max(1), ParseErrorKind::NoData));
    }
    let option_line = option.unwrap_or_default();
    let factor = option_line.freq_unit.factor();
    let points_hz: Vec<f64> = freqs_raw.iter().map(|f| f * factor).collect();
    let grid = FrequencyGrid::new(points_hz)
        .map_err(|e| fail(last_line, ParseErrorKind::Record(e)))?;
    let data = TwoPortRecord::new(grid, sparams, option_line.z_ref_ohm)
        .map_err(|e| fail(last_line, ParseErrorKind::Record(e)))?;
    Ok(TouchstoneDocument { option_line, comments, data, noise })
}

fn write_pair(out: &mut String, format: SparamFormat, value: Complex64) {
    match format {
        SparamFormat::Ri => {
            let _ = write!(out, " {:.16e} {:.16e}", value.re, value.im);
        }
        SparamFormat::Ma => {
            let _ = write!(out, " {:.16e} {:.16e}", value.norm(), value.arg().to_degrees());
        }
        SparamFormat::Db => {
            // log10(0) would print as -inf and fail re-parse; -10000 dB
            // underflows back to exactly zero magnitude.
            let db = if value.norm() == 0.0 { -10000.0 } else { 20.0 * value.norm().log10() };
            let _ = write!(out, " {:.16e} {:.16e}", db, value.arg().to_degrees());
        }
    }
}

/// Render a document in the requested format, frequencies in the document's
/// declared unit, 17 significant digits per field.
pub fn write_touchstone(doc: &TouchstoneDocument, format: SparamFormat) -> String {
    let mut out = String::new();
    for c in &doc.comments {
        let _ = writeln!(out, "! {c}");
    }
    let z = doc.option_line.z_ref_ohm;
    let _ = writeln!(out, "# {} S {} R {}", doc.option_line.freq_unit.label(), format.label(), z);
    let factor = doc.option_line.freq_unit.factor();
    for (f_hz, s) in doc.data.grid().points().iter().zip(doc.data.sparams()) {
        let _ = write!(out, "{:.16e}", f_hz / factor);
        for value in [s.s11, s.s21, s.s12, s.s22] {
            write_pair(&mut out, format, value);
        }
        out.push('\n');
    }
    for row in &doc.noise {
        let _ = writeln!(
            out,
            "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e}",
            row.freq_hz / factor,
            row.fmin_db,
            row.gamma_opt_mag,
            row.gamma_opt_deg,
            row.rn_norm
        );
    }
    out
}
