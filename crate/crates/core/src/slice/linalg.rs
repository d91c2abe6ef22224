//! Fraction-free (Bareiss) Gauss-Jordan elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Result of solving `A X = B` exactly: `X = numer / denom`.
pub struct IntegerSolution {
    pub numer: Vec<Vec<BigInt>>,
    pub denom: BigInt,
}

/// Solves the square system `a * X = b` for every column of `b`.
///
/// Returns `None` when `a` is singular. All intermediate divisions are exact;
/// a non-zero remainder would mean arithmetic corruption and aborts.
pub fn solve_fraction_free(a: Vec<Vec<BigInt>>, b: Vec<Vec<BigInt>>) -> Option<IntegerSolution> {
    let r = a.len();
    assert_eq!(b.len(), r, "right-hand side row count");
    let rhs_cols = b.first().map_or(0, |row| row.len());
    let cols = r + rhs_cols;
    let mut m: Vec<Vec<BigInt>> = a
        .into_iter()
        .zip(b)
        .map(|(mut row, rhs)| {
            assert_eq!(row.len(), r, "system matrix must be square");
            row.extend(rhs);
            row
        })
        .collect();

    let mut prev = BigInt::from(1);
    for k in 0..r {
        let pivot_row = (k..r).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, pivot_row);
        let pivot = m[k][k].clone();
        let (before, rest) = m.split_at_mut(k);
        let (pivot_slice, after) = rest.split_at_mut(1);
        let pivot_line = &pivot_slice[0];
        for row in before.iter_mut().chain(after.iter_mut()) {
            let factor = row[k].clone();
            for j in 0..cols {
                if j == k {
                    continue;
                }
                let mut v = &pivot * &row[j];
                if !factor.is_zero() && !pivot_line[j].is_zero() {
                    v -= &factor * &pivot_line[j];
                }
                let (q, rem) = v.div_rem(&prev);
                assert!(rem.is_zero(), "inexact division in fraction-free elimination");
                row[j] = q;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot;
    }

    // every diagonal entry now equals the final pivot
    let mut denom = prev;
    let mut numer: Vec<Vec<BigInt>> = m.into_iter().map(|row| row[r..].to_vec()).collect();
    if denom.is_negative() {
        denom = -denom;
        for row in &mut numer {
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
    }
    Some(IntegerSolution { numer, denom })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn inverse_of_small_matrix() {
        let a = ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let id = ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let sol = solve_fraction_free(a.clone(), id).unwrap();
        // A * X = I
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = BigRational::zero();
                for t in 0..3 {
                    acc += BigRational::new(&a[i][t] * &sol.numer[t][j], sol.denom.clone());
                }
                let expect = if i == j { 1 } else { 0 };
                assert_eq!(acc, BigRational::from_integer(BigInt::from(expect)));
            }
        }
        assert_eq!(sol.denom, BigInt::from(18));
    }

    #[test]
    fn needs_pivoting() {
        let a = ints(&[&[0, 1], &[1, 0]]);
        let b = ints(&[&[5], &[7]]);
        let sol = solve_fraction_free(a, b).unwrap();
        let x: Vec<BigRational> = sol
            .numer
            .iter()
            .map(|r| BigRational::new(r[0].clone(), sol.denom.clone()))
            .collect();
        assert_eq!(x[0], BigRational::from_integer(7.into()));
        assert_eq!(x[1], BigRational::from_integer(5.into()));
    }

    #[test]
    fn singular() {
        let a = ints(&[&[1, 2], &[2, 4]]);
        let b = ints(&[&[1], &[1]]);
        assert!(solve_fraction_free(a, b).is_none());
    }
}
