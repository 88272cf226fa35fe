use crate::{Error, Result};

/// Circulant size of the built-in code.
pub const BUILTIN_CIRCULANT: usize = 127;

/// Binary LDPC code with a systematic encoder derived from its parity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcCode {
    n: usize,
    checks: Vec<Vec<usize>>,
    var_checks: Vec<Vec<usize>>,
    circulant_size: Option<usize>,
    exponent_table: Option<Vec<Vec<i32>>>,
    info_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    /// Row `i` gives parity bit `parity_positions[i]` as a mask over the info bits.
    parity_masks: Vec<Vec<u64>>,
}

impl LdpcCode {
    /// Builds a code from the column indices of each parity check.
    ///
    /// Redundant checks are allowed; the dimension is `n − rank(H)`.
    pub fn from_checks(n: usize, checks: Vec<Vec<usize>>) -> Result<LdpcCode> {
        if n == 0 {
            return Err(Error::Code("code length must be positive".into()));
        }
        let mut var_checks = vec![Vec::new(); n];
        let mut checks = checks;
        for (i, row) in checks.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Code(format!("check {i} lists a column twice")));
            }
            for &v in row.iter() {
                if v >= n {
                    return Err(Error::Code(format!("check {i} references column {v} >= {n}")));
                }
                var_checks[v].push(i);
            }
        }
        let (info_positions, parity_positions, parity_masks) = systematic_form(n, &checks);
        if info_positions.is_empty() {
            return Err(Error::Code("parity checks leave no information bits".into()));
        }
        Ok(LdpcCode {
            n,
            checks,
            var_checks,
            circulant_size: None,
            exponent_table: None,
            info_positions,
            parity_positions,
            parity_masks,
        })
    }

    /// Expands a base matrix of circulant shift exponents (`-1` = zero block).
    /// Block `(r, c)` with exponent `e` connects check `r·z + i` to
    /// variable `c·z + (i + e) mod z`.
    pub fn from_base_matrix(exponents: &[Vec<i32>], z: usize) -> Result<LdpcCode> {
        let cols = exponents.first().map_or(0, Vec::len);
        if z == 0 || cols == 0 || exponents.iter().any(|r| r.len() != cols) {
            return Err(Error::Code("base matrix must be a non-empty rectangle".into()));
        }
        let mut checks = vec![Vec::new(); exponents.len() * z];
        for (r, row) in exponents.iter().enumerate() {
            for (c, &e) in row.iter().enumerate() {
                if e < -1 {
                    return Err(Error::Code(format!("exponent {e} at ({r}, {c})")));
                }
                if e < 0 {
                    continue;
                }
                for i in 0..z {
                    checks[r * z + i].push(c * z + (i + e as usize) % z);
                }
            }
        }
        let mut code = LdpcCode::from_checks(cols * z, checks)?;
        code.circulant_size = Some(z);
        code.exponent_table = Some(exponents.to_vec());
        Ok(code)
    }

    /// The (1016, 508) (3,6)-regular quasi-cyclic code used by the simulator.
    pub fn builtin() -> LdpcCode {
        LdpcCode::from_base_matrix(&builtin_base_matrix(), BUILTIN_CIRCULANT)
            .expect("built-in base matrix is well formed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.info_positions.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    /// Checks touching variable `v`.
    pub fn var_checks(&self, v: usize) -> &[usize] {
        &self.var_checks[v]
    }

    pub fn circulant_size(&self) -> Option<usize> {
        self.circulant_size
    }

    pub fn exponent_table(&self) -> Option<&[Vec<i32>]> {
        self.exponent_table.as_deref()
    }

    /// Codeword positions carrying the information bits, ascending.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.k() {
            return Err(Error::Size(format!("expected {} info bits, got {}", self.k(), u.len())));
        }
        let packed = pack(u);
        let mut v = vec![0u8; self.n];
        for (&pos, &bit) in self.info_positions.iter().zip(u) {
            v[pos] = bit & 1;
        }
        for (&pos, mask) in self.parity_positions.iter().zip(&self.parity_masks) {
            let ones: u32 = mask.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
            v[pos] = (ones & 1) as u8;
        }
        Ok(v)
    }

    /// Number of unsatisfied checks.
    pub fn syndrome_weight(&self, v: &[u8]) -> usize {
        self.checks
            .iter()
            .filter(|row| row.iter().fold(0u8, |acc, &c| acc ^ v[c]) & 1 == 1)
            .count()
    }

    pub fn is_codeword(&self, v: &[u8]) -> bool {
        v.len() == self.n && self.syndrome_weight(v) == 0
    }

    pub fn extract_info(&self, v: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&p| v[p]).collect()
    }
}

pub fn ldpc_encode(u: &[u8], code: &LdpcCode) -> Result<Vec<u8>> {
    code.encode(u)
}

/// 4×8 base of the built-in code: exponent `(s·q) mod 127`, with block
/// `(q mod 4, q)` left empty so every column has weight 3 and every row 6.
pub fn builtin_base_matrix() -> Vec<Vec<i32>> {
    (0..4)
        .map(|s| {
            (0..8)
                .map(|q| {
                    if q % 4 == s {
                        -1
                    } else {
                        ((s * q) % BUILTIN_CIRCULANT) as i32
                    }
                })
                .collect()
        })
        .collect()
}

fn pack(bits: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        out[i / 64] |= u64::from(b & 1) << (i % 64);
    }
    out
}

/// Reduced row echelon form with pivots taken from the rightmost columns.
/// Returns (info positions, pivot positions, pivot rows restricted to info).
fn systematic_form(n: usize, checks: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>, Vec<Vec<u64>>) {
    let words = n.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = checks
        .iter()
        .map(|row| {
            let mut w = vec![0u64; words];
            for &c in row {
                w[c / 64] ^= 1 << (c % 64);
            }
            w
        })
        .collect();
    let bit = |r: &[u64], c: usize| r[c / 64] >> (c % 64) & 1 == 1;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    for col in (0..n).rev() {
        let Some(found) = (next..rows.len()).find(|&r| bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(next, found);
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && bit(row, col) {
                row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push((next, col));
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; n];
    pivots.iter().for_each(|&(_, c)| is_pivot[c] = true);
    let info: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let masks = pivots
        .iter()
        .map(|&(r, _)| {
            let restricted: Vec<u8> = info.iter().map(|&c| bit(&rows[r], c) as u8).collect();
            pack(&restricted)
        })
        .collect();
    (info, pivots.into_iter().map(|(_, c)| c).collect(), masks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> LdpcCode {
        LdpcCode::from_checks(6, vec![vec![0, 1, 3], vec![1, 2, 4], vec![0, 2, 5]]).unwrap()
    }

    #[test]
    fn toy_code_by_hand() {
        let code = toy();
        assert_eq!(code.k(), 3);
        assert_eq!(code.info_positions(), &[0, 1, 2]);
        assert_eq!(code.encode(&[1, 0, 0]).unwrap(), vec![1, 0, 0, 1, 0, 1]);
        assert_eq!(code.encode(&[0, 0, 0]).unwrap(), vec![0; 6]);
        assert!(code.encode(&[1, 0]).is_err());
    }

    #[test]
    fn toy_code_matches_brute_force() {
        let code = toy();
        let codewords: Vec<Vec<u8>> = (0u32..64)
            .map(|x| (0..6).map(|i| (x >> i & 1) as u8).collect::<Vec<u8>>())
            .filter(|v| code.syndrome_weight(v) == 0)
            .collect();
        assert_eq!(codewords.len(), 8);
        for u in 0u32..8 {
            let bits: Vec<u8> = (0..3).map(|i| (u >> i & 1) as u8).collect();
            let v = code.encode(&bits).unwrap();
            assert!(codewords.contains(&v));
            assert_eq!(code.extract_info(&v), bits);
        }
    }

    #[test]
    fn redundant_checks_reduce_rank() {
        let code = LdpcCode::from_checks(
            4,
            vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3]],
        )
        .unwrap();
        assert_eq!(code.k(), 1);
        assert_eq!(code.encode(&[1]).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn malformed_checks() {
        assert!(LdpcCode::from_checks(3, vec![vec![0, 3]]).is_err());
        assert!(LdpcCode::from_checks(3, vec![vec![0, 0]]).is_err());
        assert!(LdpcCode::from_checks(2, vec![vec![0], vec![1]]).is_err());
        assert!(LdpcCode::from_base_matrix(&[vec![0, -2]], 3).is_err());
    }

    #[test]
    fn builtin_is_regular_full_rank() {
        let code = LdpcCode::builtin();
        assert_eq!((code.n(), code.k()), (1016, 508));
        assert_eq!(code.checks().len(), 508);
        assert!(code.checks().iter().all(|r| r.len() == 6));
        assert!((0..code.n()).all(|v| code.var_checks(v).len() == 3));
        assert_eq!(code.circulant_size(), Some(127));
        let base = code.exponent_table().unwrap();
        assert_eq!(base[1][3], 3);
        assert_eq!(base[0][0], -1);
        assert_eq!(base[3][7], -1);
    }

    #[test]
    fn builtin_has_no_four_cycles() {
        let code = LdpcCode::builtin();
        let mut seen = std::collections::HashSet::new();
        for row in code.checks() {
            for (i, &a) in row.iter().enumerate() {
                for &b in &row[i + 1..] {
                    assert!(seen.insert((a, b)), "columns {a} and {b} share two checks");
                }
            }
        }
    }

    #[test]
    fn expansion_of_small_base() {
        let code = LdpcCode::from_base_matrix(&[vec![0, 1, -1]], 3).unwrap();
        assert_eq!(
            code.checks(),
            &[vec![0, 4], vec![1, 5], vec![2, 3]]
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn builtin_codewords_satisfy_checks(seed in any::<u64>()) {
            let code = LdpcCode::builtin();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
            let v = ldpc_encode(&u, &code).unwrap();
            prop_assert!(code.is_codeword(&v));
            prop_assert_eq!(code.extract_info(&v), u);
        }
    }
}
