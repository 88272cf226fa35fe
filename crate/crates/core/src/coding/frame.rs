use super::LdpcCode;
use crate::{Error, Result};

/// Column-major fill of an `m × nc` matrix; positions past `v.len()` are zero.
pub fn interleave<T: Copy + Default>(v: &[T], m: usize, nc: usize) -> Result<Vec<Vec<T>>> {
    if m == 0 || v.len() > m * nc {
        return Err(Error::Size(format!(
            "{} bits do not fit a {m}×{nc} matrix",
            v.len()
        )));
    }
    let mut rows = vec![vec![T::default(); nc]; m];
    for (k, &x) in v.iter().enumerate() {
        rows[k % m][k / m] = x;
    }
    Ok(rows)
}

/// Inverse of [`interleave`]: reads the first `n1` entries column by column.
/// Extra columns (such as an appended parity column) are ignored.
pub fn deinterleave<T: Copy>(rows: &[Vec<T>], n1: usize) -> Result<Vec<T>> {
    let m = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if m == 0 || n1 > m * cols || rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Size(format!("cannot read {n1} entries from the matrix")));
    }
    Ok((0..n1).map(|k| rows[k % m][k / m]).collect())
}

/// Position of the sign bit of symbol `l` within a frame row.
pub fn sign_slot(l: usize, mod_bits: usize) -> usize {
    (l + 1) * mod_bits - 1
}

/// One user's `M × N` bit matrix after interleaving and the row parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedFrame {
    pub user_id: usize,
    mod_bits: usize,
    bits: Vec<Vec<u8>>,
}

impl CodedFrame {
    /// Wraps an existing `M × N` matrix without recomputing parities.
    pub fn from_bits(user_id: usize, bits: Vec<Vec<u8>>, mod_bits: usize) -> Result<CodedFrame> {
        let n = bits.first().map_or(0, Vec::len);
        if mod_bits == 0 || n == 0 || n % mod_bits != 0 || bits.iter().any(|r| r.len() != n) {
            return Err(Error::Size(format!(
                "rows of {n} bits cannot be split into {mod_bits}-bit symbols"
            )));
        }
        Ok(CodedFrame {
            user_id,
            mod_bits,
            bits,
        })
    }

    pub fn m(&self) -> usize {
        self.bits.len()
    }

    pub fn n(&self) -> usize {
        self.bits[0].len()
    }

    pub fn nc(&self) -> usize {
        self.n() - 1
    }

    pub fn l(&self) -> usize {
        self.n() / self.mod_bits
    }

    pub fn mod_bits(&self) -> usize {
        self.mod_bits
    }

    pub fn bits(&self) -> &[Vec<u8>] {
        &self.bits
    }

    /// The `mod_bits` bits mapped onto symbol `l` of row `m`.
    pub fn symbol_bits(&self, m: usize, l: usize) -> &[u8] {
        &self.bits[m][l * self.mod_bits..(l + 1) * self.mod_bits]
    }

    /// XOR of all sign bits of a row (zero when the row parity holds).
    pub fn row_parity(&self, m: usize) -> u8 {
        (0..self.l()).fold(0, |acc, l| acc ^ self.bits[m][sign_slot(l, self.mod_bits)])
    }

    pub fn parity_ok(&self) -> bool {
        (0..self.m()).all(|m| self.row_parity(m) == 0)
    }

    /// Rows as `0`/`1` text in `mod_bits`-sized groups, e.g. `011 100 001 110`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.bits {
            let groups: Vec<String> = row
                .chunks(self.mod_bits)
                .map(|c| c.iter().map(|b| char::from(b'0' + b)).collect())
                .collect();
            out.push_str(&groups.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Appends the row parity over the first `L − 1` sign slots as column `N`.
pub fn spc_extend(v: &[Vec<u8>], mod_bits: usize, user_id: usize) -> Result<CodedFrame> {
    let nc = v.first().map_or(0, Vec::len);
    if mod_bits == 0 || (nc + 1) % mod_bits != 0 {
        return Err(Error::Size(format!(
            "{nc} + 1 columns are not a multiple of {mod_bits}"
        )));
    }
    let l = (nc + 1) / mod_bits;
    let bits = v
        .iter()
        .map(|row| {
            let parity = (0..l - 1).fold(0, |acc, i| acc ^ row[sign_slot(i, mod_bits)]);
            let mut out = row.clone();
            out.push(parity);
            out
        })
        .collect();
    CodedFrame::from_bits(user_id, bits, mod_bits)
}

/// Info bits → LDPC codeword → interleaved matrix → parity-extended frame.
pub fn encode_frame(
    code: &LdpcCode,
    u: &[u8],
    m: usize,
    nc: usize,
    mod_bits: usize,
    user_id: usize,
) -> Result<CodedFrame> {
    let v = code.encode(u)?;
    spc_extend(&interleave(&v, m, nc)?, mod_bits, user_id)
}
