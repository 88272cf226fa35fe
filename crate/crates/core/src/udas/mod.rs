//! UDAS element sets, set construction and sum-pattern catalogs.
//!
//! All amplitudes are Gaussian integers ([`Amp`]). Structured sets draw their
//! entries from a UDM element set `{1, 2, .., 2^p} ∪ {1i, 2i, .., 2^p i}`, and
//! every constructor checks that each symbol column holds distinct elements,
//! which is what makes signed superpositions invertible.
//!
//! Row, symbol and user indices are 0-based throughout. Combination indices
//! `mu` are 1-based labels (see [`crate::combination_rows`]).

mod sum_pattern;
mod text;
mod validate;

pub use sum_pattern::{enumerate_sum_patterns, lambda_sum, SumPatternTable};
pub use text::{format_amp, parse_amp};
pub use validate::{validate_udas, ValidationReport, Violation, MAX_BRUTE_FORCE_ROWS};

use crate::{Amp, Error, Result};
use std::fmt;

/// Largest exponent accepted by [`build_element_set`].
pub const MAX_EXPONENT: u32 = 30;

/// Default tolerance on `|P_t - P_avg|` for structured sets.
pub const DEFAULT_POWER_TOL: f64 = 1e-9;

/// Default bound on `max_l |e_{t,l}| / sqrt(P_avg)`.
pub const DEFAULT_PAPR_BOUND: f64 = 4.0;

/// The UDM alphabet for a given exponent bound `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UdmElementSet {
    p: u32,
    elements: Vec<Amp>,
}

impl UdmElementSet {
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Real powers of two ascending, then the imaginary ones ascending.
    pub fn elements(&self) -> &[Amp] {
        &self.elements
    }

    pub fn contains(&self, a: Amp) -> bool {
        element_exponent(a).is_some_and(|e| e <= self.p)
    }
}

/// Builds the `2(p+1)`-element alphabet.
pub fn build_element_set(p: u32) -> Result<UdmElementSet> {
    if p > MAX_EXPONENT {
        return Err(Error::Parameter(format!(
            "exponent bound p = {p} exceeds {MAX_EXPONENT}"
        )));
    }
    let reals = (0..=p).map(|k| Amp::new(1 << k, 0));
    let imags = (0..=p).map(|k| Amp::new(0, 1 << k));
    Ok(UdmElementSet {
        p,
        elements: reals.chain(imags).collect(),
    })
}

/// Exponent `k` when `a` is `2^k` or `2^k i`.
fn element_exponent(a: Amp) -> Option<u32> {
    let v = match (a.re, a.im) {
        (re, 0) if re > 0 => re,
        (0, im) if im > 0 => im,
        _ => return None,
    };
    (v.count_ones() == 1).then(|| v.trailing_zeros())
}

/// How a set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Cyclic,
    Qc,
    BlockCyclic,
    Adhoc,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Cyclic => "cyclic",
            Mode::Qc => "qc",
            Mode::BlockCyclic => "block_cyclic",
            Mode::Adhoc => "adhoc",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(Mode::Cyclic),
            "qc" => Ok(Mode::Qc),
            "block_cyclic" => Ok(Mode::BlockCyclic),
            "adhoc" => Ok(Mode::Adhoc),
            other => Err(Error::Parameter(format!("unknown set mode `{other}`"))),
        }
    }
}

/// `T` sequences of length `L`, one per potential user.
#[derive(Debug, Clone, PartialEq)]
pub struct UdasSet {
    rows: Vec<Vec<Amp>>,
    mode: Mode,
    element_set: Option<UdmElementSet>,
    row_energy: Vec<i64>,
}

impl UdasSet {
    /// Wraps arbitrary rows without structural checks beyond shape.
    pub fn adhoc(rows: Vec<Vec<Amp>>) -> Result<Self> {
        Self::assemble(rows, Mode::Adhoc)
    }

    fn assemble(rows: Vec<Vec<Amp>>, mode: Mode) -> Result<Self> {
        let len = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || len == 0 {
            return Err(Error::Construction("set must have at least one non-empty row".into()));
        }
        if let Some(t) = rows.iter().position(|r| r.len() != len) {
            return Err(Error::Size(format!(
                "row {t} has length {} but row 0 has length {len}",
                rows[t].len()
            )));
        }
        let element_set = if mode == Mode::Adhoc {
            None
        } else {
            let mut p = 0;
            for (t, row) in rows.iter().enumerate() {
                for (l, &a) in row.iter().enumerate() {
                    match element_exponent(a) {
                        Some(e) if e <= MAX_EXPONENT => p = p.max(e),
                        _ => {
                            return Err(Error::Construction(format!(
                                "element {} at row {t}, symbol {l} is not a UDM element",
                                format_amp(a)
                            )))
                        }
                    }
                }
            }
            Some(build_element_set(p)?)
        };
        let row_energy = rows
            .iter()
            .map(|r| r.iter().map(|a| a.norm_sqr()).sum())
            .collect();
        Ok(UdasSet {
            rows,
            mode,
            element_set,
            row_energy,
        })
    }

    /// Number of sequences `T`.
    pub fn t(&self) -> usize {
        self.rows.len()
    }

    /// Sequence length `L`.
    pub fn l(&self) -> usize {
        self.rows[0].len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn rows(&self) -> &[Vec<Amp>] {
        &self.rows
    }

    pub fn row(&self, t: usize) -> &[Amp] {
        &self.rows[t]
    }

    pub fn element(&self, t: usize, l: usize) -> Amp {
        self.rows[t][l]
    }

    /// The alphabet the entries were drawn from; `None` for ad-hoc sets.
    pub fn element_set(&self) -> Option<&UdmElementSet> {
        self.element_set.as_ref()
    }

    /// `Σ_l |e_{t,l}|²` as an exact integer.
    pub fn row_energy(&self, t: usize) -> i64 {
        self.row_energy[t]
    }

    /// `P_t = (1/L) Σ_l |e_{t,l}|²` for every row.
    pub fn per_row_power(&self) -> Vec<f64> {
        let l = self.l() as f64;
        self.row_energy.iter().map(|&e| e as f64 / l).collect()
    }

    /// Mean per-symbol power over the whole set.
    pub fn p_avg(&self) -> f64 {
        let total: i64 = self.row_energy.iter().sum();
        total as f64 / (self.t() * self.l()) as f64
    }

    /// A new ad-hoc set made of the selected rows, in the given order.
    pub fn subset(&self, rows: &[usize]) -> Result<UdasSet> {
        if let Some(&bad) = rows.iter().find(|&&t| t >= self.t()) {
            return Err(Error::Parameter(format!("row {bad} outside 0..{}", self.t())));
        }
        let picked = rows.iter().map(|&t| self.rows[t].clone()).collect();
        UdasSet::assemble(picked, Mode::Adhoc)
    }
}

fn rotate_right(a: &[Amp], shift: usize) -> Vec<Amp> {
    let n = a.len();
    (0..n).map(|c| a[(c + n - shift % n) % n]).collect()
}

fn check_column_distinctness(rows: &[Vec<Amp>]) -> Result<()> {
    for l in 0..rows[0].len() {
        for t in 0..rows.len() {
            for u in t + 1..rows.len() {
                if rows[t][l] == rows[u][l] {
                    return Err(Error::Construction(format!(
                        "rows {t} and {u} share element {} at symbol {l}",
                        format_amp(rows[t][l])
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Cyclic set: row `t` is the generator rotated right by `t`, so `T = L`.
pub fn build_cyclic(generator: &[Amp]) -> Result<UdasSet> {
    if generator.is_empty() {
        return Err(Error::Construction("generator must not be empty".into()));
    }
    for (i, a) in generator.iter().enumerate() {
        if let Some(j) = generator[..i].iter().position(|b| b == a) {
            return Err(Error::Construction(format!(
                "generator repeats {} at positions {j} and {i}",
                format_amp(*a)
            )));
        }
    }
    let rows = (0..generator.len())
        .map(|t| rotate_right(generator, t))
        .collect();
    UdasSet::assemble(rows, Mode::Cyclic)
}

/// Quasi-cyclic set from an `S × Q` grid of circulant generators, each of
/// length `𝓛`. Block `(s, q)` is the circulant of `generators[s][q]`.
pub fn build_qc(generators: &[Vec<Vec<Amp>>]) -> Result<UdasSet> {
    let rows = assemble_blocks(generators)?;
    check_column_distinctness(&rows)?;
    UdasSet::assemble(rows, Mode::Qc)
}

/// Block-wise cyclic set: row-block `b` is the first row-block rotated right
/// by `b` blocks, giving a `(𝓛Q) × (𝓛Q)` set.
pub fn build_block_cyclic(generators: &[Vec<Amp>]) -> Result<UdasSet> {
    let q = generators.len();
    let grid: Vec<Vec<Vec<Amp>>> = (0..q)
        .map(|b| (0..q).map(|c| generators[(c + q - b) % q].clone()).collect())
        .collect();
    let rows = assemble_blocks(&grid)?;
    check_column_distinctness(&rows)?;
    UdasSet::assemble(rows, Mode::BlockCyclic)
}

fn assemble_blocks(grid: &[Vec<Vec<Amp>>]) -> Result<Vec<Vec<Amp>>> {
    let s_count = grid.len();
    let q_count = grid.first().map_or(0, Vec::len);
    if s_count == 0 || q_count == 0 {
        return Err(Error::Construction("generator grid is empty".into()));
    }
    let block = grid[0][0].len();
    if block == 0 {
        return Err(Error::Construction("circulant generators must not be empty".into()));
    }
    for (s, row) in grid.iter().enumerate() {
        if row.len() != q_count {
            return Err(Error::Size(format!(
                "generator row {s} has {} blocks, expected {q_count}",
                row.len()
            )));
        }
        if let Some(q) = row.iter().position(|g| g.len() != block) {
            return Err(Error::Size(format!(
                "generator ({s}, {q}) has length {}, expected {block}",
                row[q].len()
            )));
        }
    }
    // Same position of the same column-block must differ across block-rows.
    for q in 0..q_count {
        for iota in 0..block {
            for s in 0..s_count {
                for s2 in s + 1..s_count {
                    if grid[s][q][iota] == grid[s2][q][iota] {
                        return Err(Error::Construction(format!(
                            "generators (s={s}, q={q}) and (s={s2}, q={q}) both hold {} at position {iota}",
                            format_amp(grid[s][q][iota])
                        )));
                    }
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(s_count * block);
    for blocks in grid {
        for r in 0..block {
            let mut row = Vec::with_capacity(q_count * block);
            for g in blocks {
                row.extend(rotate_right(g, r));
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::Amp;

    pub fn a(re: i64, im: i64) -> Amp {
        Amp::new(re, im)
    }

    /// The 4×4 cyclic set generated by (1, 1i, 2, 2i).
    pub fn cyclic4() -> super::UdasSet {
        super::build_cyclic(&[a(1, 0), a(0, 1), a(2, 0), a(0, 2)]).unwrap()
    }

    /// The 6×6 block-cyclic set from (1,1i), (2,2i), (4,4i).
    pub fn block6() -> super::UdasSet {
        super::build_block_cyclic(&[
            vec![a(1, 0), a(0, 1)],
            vec![a(2, 0), a(0, 2)],
            vec![a(4, 0), a(0, 4)],
        ])
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn element_sets() {
        assert_eq!(build_element_set(0).unwrap().elements(), &[a(1, 0), a(0, 1)]);
        assert_eq!(
            build_element_set(1).unwrap().elements(),
            &[a(1, 0), a(2, 0), a(0, 1), a(0, 2)]
        );
        let p2 = build_element_set(2).unwrap();
        assert_eq!(
            p2.elements(),
            &[a(1, 0), a(2, 0), a(4, 0), a(0, 1), a(0, 2), a(0, 4)]
        );
        assert!(p2.contains(a(0, 4)));
        assert!(!p2.contains(a(8, 0)));
        assert!(!p2.contains(a(-1, 0)));
        assert!(!p2.contains(a(3, 0)));
        assert!(build_element_set(31).is_err());
        assert_eq!(build_element_set(30).unwrap().elements().len(), 62);
    }

    #[test]
    fn cyclic_four() {
        let set = cyclic4();
        let expected = vec![
            vec![a(1, 0), a(0, 1), a(2, 0), a(0, 2)],
            vec![a(0, 2), a(1, 0), a(0, 1), a(2, 0)],
            vec![a(2, 0), a(0, 2), a(1, 0), a(0, 1)],
            vec![a(0, 1), a(2, 0), a(0, 2), a(1, 0)],
        ];
        assert_eq!(set.rows(), expected.as_slice());
        assert_eq!(set.p_avg(), 2.5);
        assert!(set.per_row_power().iter().all(|&p| p == 2.5));
        assert_eq!(set.mode(), Mode::Cyclic);
        assert_eq!(set.element_set().unwrap().p(), 1);
    }

    #[test]
    fn cyclic_degenerate_and_six() {
        let one = build_cyclic(&[a(1, 0)]).unwrap();
        assert_eq!(one.rows(), &[vec![a(1, 0)]]);
        assert_eq!(one.p_avg(), 1.0);

        let six = build_cyclic(&[a(1, 0), a(0, 1), a(2, 0), a(0, 2), a(4, 0), a(0, 4)]).unwrap();
        assert_eq!(six.t(), 6);
        assert_eq!(six.p_avg(), 7.0);
        assert_eq!(six.row(1), &[a(0, 4), a(1, 0), a(0, 1), a(2, 0), a(0, 2), a(4, 0)]);
    }

    #[test]
    fn cyclic_rejects_duplicates_and_foreign_elements() {
        assert!(matches!(
            build_cyclic(&[a(1, 0), a(0, 1), a(1, 0)]),
            Err(Error::Construction(_))
        ));
        assert!(matches!(build_cyclic(&[a(1, 0), a(3, 0)]), Err(Error::Construction(_))));
        assert!(build_cyclic(&[]).is_err());
    }

    #[test]
    fn qc_single_circulant() {
        let set = build_qc(&[vec![vec![a(1, 0), a(0, 1)]]]).unwrap();
        assert_eq!(set.rows(), &[vec![a(1, 0), a(0, 1)], vec![a(0, 1), a(1, 0)]]);
        assert_eq!(set.mode(), Mode::Qc);
    }

    #[test]
    fn qc_one_by_three_is_first_block_row() {
        let set = build_qc(&[vec![
            vec![a(1, 0), a(0, 1)],
            vec![a(2, 0), a(0, 2)],
            vec![a(4, 0), a(0, 4)],
        ]])
        .unwrap();
        assert_eq!(set.rows(), &block6().rows()[..2]);
    }

    #[test]
    fn qc_two_by_one() {
        let set = build_qc(&[vec![vec![a(1, 0), a(0, 1)]], vec![vec![a(2, 0), a(0, 2)]]]).unwrap();
        assert_eq!(set.t(), 4);
        assert_eq!(set.l(), 2);
        for l in 0..2 {
            let mut col: Vec<_> = (0..4).map(|t| (set.element(t, l).re, set.element(t, l).im)).collect();
            col.sort();
            assert_eq!(col, vec![(0, 1), (0, 2), (1, 0), (2, 0)]);
        }
    }

    #[test]
    fn qc_rejects_shared_position() {
        let err = build_qc(&[vec![vec![a(1, 0), a(0, 1)]], vec![vec![a(1, 0), a(0, 2)]]]).unwrap_err();
        let Error::Construction(msg) = err else { panic!("wrong error") };
        assert!(msg.contains("q=0") && msg.contains("position 0"), "{msg}");
    }

    #[test]
    fn qc_rejects_column_collision_beyond_position_rule() {
        // Passes the per-position rule but (1,2) and (2,1) collide after rotation.
        let err = build_qc(&[vec![vec![a(1, 0), a(2, 0)]], vec![vec![a(2, 0), a(1, 0)]]]).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
    }

    #[test]
    fn block_cyclic_six() {
        let set = block6();
        let expected = vec![
            vec![a(1, 0), a(0, 1), a(2, 0), a(0, 2), a(4, 0), a(0, 4)],
            vec![a(0, 1), a(1, 0), a(0, 2), a(2, 0), a(0, 4), a(4, 0)],
            vec![a(4, 0), a(0, 4), a(1, 0), a(0, 1), a(2, 0), a(0, 2)],
            vec![a(0, 4), a(4, 0), a(0, 1), a(1, 0), a(0, 2), a(2, 0)],
            vec![a(2, 0), a(0, 2), a(4, 0), a(0, 4), a(1, 0), a(0, 1)],
            vec![a(0, 2), a(2, 0), a(0, 4), a(4, 0), a(0, 1), a(1, 0)],
        ];
        assert_eq!(set.rows(), expected.as_slice());
        assert_eq!(set.p_avg(), 7.0);
        assert_eq!(set.mode(), Mode::BlockCyclic);
    }

    #[test]
    fn block_cyclic_degenerate_and_two_blocks() {
        let single = build_block_cyclic(&[vec![a(1, 0), a(0, 1), a(2, 0), a(0, 2)]]).unwrap();
        assert_eq!(single.rows(), cyclic4().rows());

        let two = build_block_cyclic(&[vec![a(1, 0), a(0, 1)], vec![a(2, 0), a(0, 2)]]).unwrap();
        let expected = vec![
            vec![a(1, 0), a(0, 1), a(2, 0), a(0, 2)],
            vec![a(0, 1), a(1, 0), a(0, 2), a(2, 0)],
            vec![a(2, 0), a(0, 2), a(1, 0), a(0, 1)],
            vec![a(0, 2), a(2, 0), a(0, 1), a(1, 0)],
        ];
        assert_eq!(two.rows(), expected.as_slice());
    }

    #[test]
    fn subsets_keep_row_order() {
        let set = cyclic4();
        let sub = set.subset(&[0, 2]).unwrap();
        assert_eq!(sub.rows(), &[set.row(0).to_vec(), set.row(2).to_vec()]);
        assert_eq!(sub.mode(), Mode::Adhoc);
        assert!(set.subset(&[4]).is_err());
    }
}
