//! Plain-text form of a UDAS set.
//!
//! ```text
//! 4 4 cyclic
//! 1+0i 0+1i 2+0i 0+2i
//! 0+2i 1+0i 0+1i 2+0i
//! 2+0i 0+2i 1+0i 0+1i
//! 0+1i 2+0i 0+2i 1+0i
//! ```
//!
//! The header is `T L mode`; each following line is one sequence with
//! elements written as `a+bi` / `a-bi` integer tokens separated by single
//! spaces. Every line ends with `\n`. Emitting a parsed canonical file gives
//! back the same bytes.

use super::{build_cyclic, Mode, UdasSet};
use crate::{Amp, Error, Result};
use std::fmt::Write as _;

/// Canonical `a+bi` token.
pub fn format_amp(a: Amp) -> String {
    let sign = if a.im < 0 { '-' } else { '+' };
    format!("{}{}{}i", a.re, sign, a.im.unsigned_abs())
}

/// Parses an `a+bi` / `a-bi` token.
pub fn parse_amp(token: &str) -> Option<Amp> {
    let body = token.strip_suffix('i')?;
    // The real/imaginary separator is the last sign that is not in front.
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last()?;
    let (re, im) = body.split_at(split);
    let im = im.strip_prefix('+').unwrap_or(im);
    if im.starts_with('+') || im.starts_with("--") || re.starts_with('+') {
        return None;
    }
    Some(Amp::new(re.parse().ok()?, im.parse().ok()?))
}

impl UdasSet {
    /// Canonical text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {} {}", self.t(), self.l(), self.mode()).unwrap();
        for row in self.rows() {
            let tokens: Vec<String> = row.iter().map(|&a| format_amp(a)).collect();
            writeln!(out, "{}", tokens.join(" ")).unwrap();
        }
        out
    }

    /// Parses the text form. Structured modes are checked against the UDM
    /// alphabet, and `cyclic` sets must be rotations of their first row.
    pub fn from_text(text: &str) -> Result<UdasSet> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 3 {
            return Err(Error::parse(hline, "header must be `T L mode`"));
        }
        let t: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(hline, format!("bad row count `{}`", fields[0])))?;
        let l: usize = fields[1]
            .parse()
            .map_err(|_| Error::parse(hline, format!("bad length `{}`", fields[1])))?;
        let mode: Mode = fields[2]
            .parse()
            .map_err(|e: Error| Error::parse(hline, e.to_string()))?;

        let mut rows = Vec::with_capacity(t);
        for (lineno, line) in lines {
            if rows.len() == t {
                if line.is_empty() {
                    continue;
                }
                return Err(Error::parse(lineno, format!("more than {t} rows")));
            }
            let row = line
                .split(' ')
                .map(|tok| {
                    parse_amp(tok).ok_or_else(|| Error::parse(lineno, format!("bad element `{tok}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != l {
                return Err(Error::parse(
                    lineno,
                    format!("expected {l} elements, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        if rows.len() != t {
            return Err(Error::parse(
                text.lines().count(),
                format!("expected {t} rows, found {}", rows.len()),
            ));
        }

        match mode {
            Mode::Adhoc => UdasSet::adhoc(rows),
            Mode::Cyclic => {
                let set = build_cyclic(&rows[0])?;
                if set.rows() != rows.as_slice() {
                    return Err(Error::Construction("rows are not rotations of the first row".into()));
                }
                Ok(set)
            }
            Mode::Qc | Mode::BlockCyclic => UdasSet::assemble(rows, mode),
        }
    }
}
