//! Exact Gaussian elimination.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::rational::Rational;

/// Rank of the matrix whose rows are `rows`.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let width = m.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&r| col < m[r].len() && !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..m.len() {
            if col >= m[r].len() || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..m[r].len().min(m[rank].len()) {
                let delta = &factor * &m[rank][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

pub fn is_independent(rows: &[Vec<Rational>]) -> bool {
    rank(rows) == rows.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use alloc::vec;

    #[test]
    fn ranks() {
        let r = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[r(&[0, 0])]), 0);
        assert_eq!(rank(&[r(&[1, 2]), r(&[2, 4])]), 1);
        assert_eq!(rank(&[r(&[1, 2, 3]), r(&[0, 1, 1]), r(&[1, 3, 4])]), 2);
        assert!(is_independent(&[r(&[0, 1]), r(&[1, 0])]));
        assert!(!is_independent(&vec![r(&[1, 1]); 2]));
    }
}
