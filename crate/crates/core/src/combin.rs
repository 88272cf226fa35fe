//! Binomial coefficients and lexicographic ranking of row subsets.
//!
//! Combination indices `mu` are 1-based and enumerate the sorted `tau`-subsets
//! of `0..t` in lexicographic order, so for `t = 4, tau = 2` the order is
//! `{0,1}, {0,2}, {0,3}, {1,2}, {1,3}, {2,3}`.

use crate::{Error, Result};

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Rows of the `mu`-th (1-based) `tau`-subset of `0..t`.
pub fn combination_rows(t: usize, tau: usize, mu: usize) -> Result<Vec<usize>> {
    if tau == 0 || tau > t {
        return Err(Error::Parameter(format!("tau = {tau} outside [1, {t}]")));
    }
    let count = binomial(t, tau) as usize;
    if mu == 0 || mu > count {
        return Err(Error::Parameter(format!(
            "mu = {mu} outside [1, {count}] for C({t}, {tau})"
        )));
    }
    let mut rank = mu - 1;
    let mut rows = Vec::with_capacity(tau);
    let mut next = 0;
    for slot in 0..tau {
        let remaining = tau - slot - 1;
        let mut candidate = next;
        loop {
            let block = binomial(t - candidate - 1, remaining) as usize;
            if rank < block {
                break;
            }
            rank -= block;
            candidate += 1;
        }
        rows.push(candidate);
        next = candidate + 1;
    }
    Ok(rows)
}

/// Inverse of [`combination_rows`]: 1-based rank of a strictly increasing subset.
pub fn combination_rank(t: usize, rows: &[usize]) -> Result<usize> {
    if rows.is_empty() || rows.windows(2).any(|w| w[0] >= w[1]) || rows[rows.len() - 1] >= t {
        return Err(Error::Parameter(format!(
            "{rows:?} is not a strictly increasing subset of 0..{t}"
        )));
    }
    let tau = rows.len();
    let mut rank = 0usize;
    let mut prev = 0usize;
    for (slot, &row) in rows.iter().enumerate() {
        let remaining = tau - slot - 1;
        for skipped in prev..row {
            rank += binomial(t - skipped - 1, remaining) as usize;
        }
        prev = row + 1;
    }
    Ok(rank + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn lexicographic_order_matches_enumeration() {
        for t in 1..=7 {
            for tau in 1..=t {
                let mut expected = Vec::new();
                for mask in 0u32..(1 << t) {
                    if mask.count_ones() as usize == tau {
                        expected.push((0..t).filter(|b| mask >> b & 1 == 1).collect::<Vec<_>>());
                    }
                }
                expected.sort();
                for (i, rows) in expected.iter().enumerate() {
                    assert_eq!(&combination_rows(t, tau, i + 1).unwrap(), rows);
                    assert_eq!(combination_rank(t, rows).unwrap(), i + 1);
                }
            }
        }
    }

    #[test]
    fn pair_labels_for_four_rows() {
        assert_eq!(combination_rows(4, 2, 2).unwrap(), vec![0, 2]);
        assert_eq!(combination_rows(4, 2, 5).unwrap(), vec![1, 3]);
        assert_eq!(combination_rows(4, 3, 4).unwrap(), vec![1, 2, 3]);
        assert!(combination_rows(4, 2, 7).is_err());
        assert!(combination_rows(4, 0, 1).is_err());
    }
}
