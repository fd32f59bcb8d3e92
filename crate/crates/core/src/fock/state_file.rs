//! The `occupation-v1` state file format.
//!
//! ```text
//! occupation-v1
//! d 6
//! n 3
//! 1 2 3 7.0710678118654757e-1 0.0000000000000000e0
//! 4 5 6 7.0710678118654757e-1 0.0000000000000000e0
//! ```
//!
//! After the header, each record lists the ascending 1-based mode tuple
//! followed by the real and imaginary parts of its amplitude. Omitted tuples
//! have amplitude zero. Blank lines and lines starting with `#` are ignored.
//! Serialization writes records in basis order with 17 significant digits.

use num_complex::Complex64;
use std::collections::HashSet;

use super::basis::{lex_rank, mask_of, modes_of, SystemShape};
use super::state::{l2_norm, FermionState};
use crate::error::{Error, Result};

pub const FORMAT_TAG: &str = "occupation-v1";

/// Norm deviations up to this size are treated as rounding and silently removed.
pub const SILENT_RENORMALIZE: f64 = 1e-6;
/// Largest norm deviation `--renormalize` will repair.
pub const MAX_RENORMALIZE: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeRecord {
    pub modes: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateFile {
    pub shape: SystemShape,
    pub records: Vec<AmplitudeRecord>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn header_value(line: Option<(usize, &str)>, key: &str) -> Result<usize> {
    let (no, text) = line.ok_or_else(|| parse_err(0, format!("missing `{key}` line")))?;
    let mut parts = text.split_whitespace();
    if parts.next() != Some(key) {
        return Err(parse_err(no, format!("expected `{key} <integer>`")));
    }
    let value = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| parse_err(no, format!("expected `{key} <integer>`")))?;
    if parts.next().is_some() {
        return Err(parse_err(no, "trailing tokens"));
    }
    Ok(value)
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, tag)) if tag == FORMAT_TAG => {}
            Some((no, tag)) => return Err(parse_err(no, format!("unknown format tag `{tag}`"))),
            None => return Err(parse_err(0, "empty file")),
        }
        let d = header_value(lines.next(), "d")?;
        let n = header_value(lines.next(), "n")?;
        let shape = SystemShape::new(d, n)?;
        let mut records = Vec::new();
        let mut seen = HashSet::new();
        for (no, line) in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != n + 2 {
                return Err(parse_err(
                    no,
                    format!(
                        "expected {n} modes and two reals, got {} tokens",
                        tokens.len()
                    ),
                ));
            }
            let modes = tokens[..n]
                .iter()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| parse_err(no, format!("bad mode label: {e}")))?;
            if modes.windows(2).any(|w| w[0] >= w[1]) {
                return Err(parse_err(no, "modes must be strictly increasing"));
            }
            let mask = mask_of(&modes, d).map_err(|e| parse_err(no, e.to_string()))?;
            if !seen.insert(mask) {
                return Err(parse_err(no, format!("duplicate tuple {modes:?}")));
            }
            let re: f64 = tokens[n]
                .parse()
                .map_err(|e| parse_err(no, format!("bad real part: {e}")))?;
            let im: f64 = tokens[n + 1]
                .parse()
                .map_err(|e| parse_err(no, format!("bad imaginary part: {e}")))?;
            if !(re.is_finite() && im.is_finite()) {
                return Err(parse_err(no, "amplitude is not finite"));
            }
            records.push(AmplitudeRecord { modes, re, im });
        }
        records.sort_by_key(|r| lex_rank(d, mask_of(&r.modes, d).unwrap_or(0)));
        Ok(Self { shape, records })
    }

    pub fn from_state(state: &FermionState) -> Self {
        let records = state
            .nonzero()
            .into_iter()
            .map(|(mask, a)| AmplitudeRecord {
                modes: modes_of(mask),
                re: a.re,
                im: a.im,
            })
            .collect();
        Self {
            shape: state.shape(),
            records,
        }
    }

    /// Dense amplitude vector, without any normalization.
    pub fn amplitudes(&self) -> Vec<Complex64> {
        let d = self.shape.modes();
        let mut amps = vec![Complex64::new(0.0, 0.0); self.shape.dim()];
        for r in &self.records {
            // records were validated by `parse`; constructing by hand may skip that
            if let Ok(mask) = mask_of(&r.modes, d) {
                amps[lex_rank(d, mask)] = Complex64::new(r.re, r.im);
            }
        }
        amps
    }

    /// Convert to a state. Deviations of the norm from 1 up to `1e-6` are
    /// removed silently; up to `1e-2` only when `renormalize` is set.
    pub fn to_state(&self, renormalize: bool) -> Result<FermionState> {
        for r in &self.records {
            if r.modes.len() != self.shape.particles() {
                return Err(Error::Mode(format!(
                    "record {:?} has the wrong length",
                    r.modes
                )));
            }
            mask_of(&r.modes, self.shape.modes())?;
        }
        let amps = self.amplitudes();
        let norm = l2_norm(&amps);
        let deviation = (norm - 1.0).abs();
        let allowed = if renormalize {
            MAX_RENORMALIZE
        } else {
            SILENT_RENORMALIZE
        };
        if deviation.is_nan() || deviation > allowed {
            return Err(Error::Norm {
                expected: 1.0,
                found: norm,
            });
        }
        FermionState::normalized(self.shape, amps)
    }

    /// Canonical text: basis order, fixed header, 17 significant digits.
    pub fn to_text(&self) -> String {
        let d = self.shape.modes();
        let mut records: Vec<&AmplitudeRecord> = self.records.iter().collect();
        records.sort_by_key(|r| lex_rank(d, mask_of(&r.modes, d).unwrap_or(0)));
        let mut out = format!(
            "{FORMAT_TAG}\nd {}\nn {}\n",
            self.shape.modes(),
            self.shape.particles()
        );
        for r in records {
            let modes: Vec<String> = r.modes.iter().map(|m| m.to_string()).collect();
            out.push_str(&format!(
                "{} {:.16e} {:.16e}\n",
                modes.join(" "),
                r.re,
                r.im
            ));
        }
        out
    }
}
