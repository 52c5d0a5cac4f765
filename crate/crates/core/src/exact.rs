//! Fraction-free integer elimination and small exact rational solves.
//!
//! Bareiss elimination keeps every intermediate entry equal to a minor of the
//! input, so each division below is exact and entries never leave the integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact division of two Bareiss intermediates.
fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    debug_assert!((&num % den).is_zero(), "Bareiss division must be exact");
    num / den
}

/// Determinant of a square integer matrix.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                row[j] = exact_div(v, &prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Rank over the rationals of an integer matrix (rows may have any common length).
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[col];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[col]);
            for j in col + 1..cols {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                row[j] = exact_div(v, &prev);
            }
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Inverse of a square rational matrix by Gauss-Jordan elimination.
/// Returns `None` when the matrix is singular.
pub fn rational_inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        inv.swap(col, p);
        let scale = m[col][col].recip();
        for j in 0..n {
            m[col][j] = &m[col][j] * &scale;
            inv[col][j] = &inv[col][j] * &scale;
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..n {
                let dm = &f * &m[col][j];
                m[i][j] -= dm;
                let di = &f * &inv[col][j];
                inv[i][j] -= di;
            }
        }
    }
    Some(inv)
}

/// Returns `Some(integer)` when the rational has denominator one.
pub fn as_integer(q: &BigRational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

pub(crate) fn is_nonnegative(q: &BigRational) -> bool {
    !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(bareiss_determinant(mat(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(bareiss_determinant(mat(&[])), BigInt::one());
        // needs a row swap
        assert_eq!(
            bareiss_determinant(mat(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]])),
            BigInt::from(-2)
        );
        assert_eq!(bareiss_determinant(mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn rank_with_skipped_columns() {
        assert_eq!(bareiss_rank(mat(&[&[0, 1, 1], &[0, 2, 2], &[0, 0, 5]])), 2);
        assert_eq!(bareiss_rank(mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(bareiss_rank(mat(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]])), 3);
        assert_eq!(bareiss_rank(Vec::new()), 0);
    }

    #[test]
    fn inverse_roundtrip() {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let a = vec![vec![q(2), q(-1)], vec![q(-1), q(2)]];
        let inv = rational_inverse(&a).unwrap();
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(inv[0][0], &third * q(2));
        assert_eq!(inv[0][1], third);
        assert!(rational_inverse(&[vec![q(1), q(1)], vec![q(1), q(1)]]).is_none());
    }

    #[test]
    fn integer_detection() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(as_integer(&half), None);
        assert_eq!(as_integer(&(&half + &half)), Some(BigInt::one()));
    }
}
