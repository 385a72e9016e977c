//! Exact rank over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Rational;

/// Rank of a rational matrix given as rows.
///
/// Each row is scaled to integers, then reduced by fraction-free (Bareiss)
/// elimination, so every intermediate value is an exact integer.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    rank_integer(&mut a)
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    rank_integer(&mut a)
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()));
    row.iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}

fn rank_integer(a: &mut [Vec<BigInt>]) -> usize {
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let f = row[c].clone();
            for (x, p) in row[c..ncols].iter_mut().zip(&prow[c..ncols]) {
                *x = (&pivot * &*x - &f * p) / &prev;
            }
        }
        prev = pivot;
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[vec![q(0, 1), q(0, 1)]]), 0);
        assert_eq!(rank(&[vec![q(1, 2), q(1, 3)], vec![q(3, 1), q(2, 1)]]), 1);
        assert_eq!(rank_i64(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), 3);
        assert_eq!(rank_i64(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]), 2);
        assert_eq!(rank_i64(&[vec![0, 0, 1], vec![0, 2, 0]]), 2);
    }

    /// Rank modulo a large prime by plain elimination; equals the rational
    /// rank except with negligible probability for small entries.
    fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
        const P: i128 = 1_000_000_007;
        let mut a: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| (v as i128).rem_euclid(P)).collect())
            .collect();
        let (n, m) = (a.len(), a.first().map_or(0, Vec::len));
        let inv = |x: i128| {
            let (mut b, mut e, mut acc) = (x, P - 2, 1i128);
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % P;
                }
                b = b * b % P;
                e >>= 1;
            }
            acc
        };
        let mut r = 0;
        for c in 0..m {
            let Some(p) = (r..n).find(|&i| a[i][c] != 0) else { continue };
            a.swap(r, p);
            let iv = inv(a[r][c]);
            for i in 0..n {
                if i != r && a[i][c] != 0 {
                    let f = a[i][c] * iv % P;
                    let prow = a[r].clone();
                    for (x, p) in a[i].iter_mut().zip(&prow) {
                        *x = (*x - f * p).rem_euclid(P);
                    }
                }
            }
            r += 1;
        }
        r
    }

    proptest! {
        #[test]
        fn matches_modular_rank(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 0..6)) {
            prop_assert_eq!(rank_i64(&rows), rank_mod_p(&rows));
        }
    }
}
