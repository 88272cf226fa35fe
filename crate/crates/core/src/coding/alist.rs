//! Sparse parity-check matrices in the "alist" text format.
//!
//! ```text
//! N M
//! max_col_weight max_row_weight
//! col weights (N values)
//! row weights (M values)
//! N lines: 1-based check indices of each column, zero padded
//! M lines: 1-based column indices of each check, zero padded
//! ```

use super::LdpcCode;
use crate::{Error, Result};
use std::fmt::Write as _;

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| line.split_whitespace().map(move |t| (i + 1, t)))
            .collect();
        Tokens { items, pos: 0 }
    }

    fn line(&self) -> usize {
        self.items
            .get(self.pos)
            .or(self.items.last())
            .map_or(1, |&(l, _)| l)
    }

    fn next(&mut self, what: &str) -> Result<usize> {
        let &(line, tok) = self
            .items
            .get(self.pos)
            .ok_or_else(|| Error::parse(self.line(), format!("unexpected end of input reading {what}")))?;
        self.pos += 1;
        tok.parse()
            .map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
    }

    /// Reads `width` entries and keeps the non-zero ones (converted to 0-based).
    fn list(&mut self, width: usize, weight: usize, bound: usize, what: &str) -> Result<Vec<usize>> {
        let line = self.line();
        let mut out = Vec::with_capacity(weight);
        for _ in 0..width {
            let x = self.next(what)?;
            if x > bound {
                return Err(Error::parse(line, format!("{what} {x} exceeds {bound}")));
            }
            if x > 0 {
                out.push(x - 1);
            }
        }
        if out.len() != weight {
            return Err(Error::parse(
                line,
                format!("{what} list has {} entries, weight says {weight}", out.len()),
            ));
        }
        Ok(out)
    }
}

impl LdpcCode {
    pub fn from_alist(text: &str) -> Result<LdpcCode> {
        let mut tok = Tokens::new(text);
        let n = tok.next("column count")?;
        let m = tok.next("row count")?;
        let max_col = tok.next("max column weight")?;
        let max_row = tok.next("max row weight")?;
        let col_weights = (0..n)
            .map(|_| tok.next("column weight"))
            .collect::<Result<Vec<_>>>()?;
        let row_weights = (0..m)
            .map(|_| tok.next("row weight"))
            .collect::<Result<Vec<_>>>()?;
        let cols = col_weights
            .iter()
            .map(|&w| tok.list(max_col, w, m, "check index"))
            .collect::<Result<Vec<_>>>()?;
        let rows = row_weights
            .iter()
            .map(|&w| tok.list(max_row, w, n, "column index"))
            .collect::<Result<Vec<_>>>()?;
        if tok.pos != tok.items.len() {
            return Err(Error::parse(tok.line(), "trailing data"));
        }
        let mut from_cols = vec![Vec::new(); m];
        for (c, list) in cols.iter().enumerate() {
            for &r in list {
                from_cols[r].push(c);
            }
        }
        for (r, (a, b)) in from_cols.iter_mut().zip(&rows).enumerate() {
            let mut b = b.clone();
            a.sort_unstable();
            b.sort_unstable();
            if *a != b {
                return Err(Error::Code(format!(
                    "row {} disagrees with the column lists",
                    r + 1
                )));
            }
        }
        LdpcCode::from_checks(n, rows)
    }

    pub fn to_alist(&self) -> String {
        let n = self.n();
        let checks = self.checks();
        let cols: Vec<&[usize]> = (0..n).map(|v| self.var_checks(v)).collect();
        let max_col = cols.iter().map(|c| c.len()).max().unwrap_or(0);
        let max_row = checks.iter().map(Vec::len).max().unwrap_or(0);
        let padded = |list: &[usize], width: usize| {
            let mut items: Vec<String> = list.iter().map(|x| (x + 1).to_string()).collect();
            items.resize(width, "0".into());
            items.join(" ")
        };
        let mut out = String::new();
        writeln!(out, "{n} {}", checks.len()).unwrap();
        writeln!(out, "{max_col} {max_row}").unwrap();
        let weights = |w: Vec<usize>| w.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        writeln!(out, "{}", weights(cols.iter().map(|c| c.len()).collect())).unwrap();
        writeln!(out, "{}", weights(checks.iter().map(Vec::len).collect())).unwrap();
        for c in &cols {
            writeln!(out, "{}", padded(c, max_col)).unwrap();
        }
        for r in checks {
            writeln!(out, "{}", padded(r, max_row)).unwrap();
        }
        out
    }
}
