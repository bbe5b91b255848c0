//! Exact matrix kernels: rank over a field, integer Smith normal form and
//! division-free determinants.

use crate::error::{Error, Result};
use crate::ring::arith::{CommRing, Field};

/// Rank by Gaussian elimination over an exact field.
pub fn gaussian_rank<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !field.is_zero(&rows[r][c])) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field
            .inv(&rows[rank][c])
            .expect("nonzero field element is invertible");
        for r in 0..rows.len() {
            if r != rank && !field.is_zero(&rows[r][c]) {
                let factor = field.mul(&rows[r][c], &inv);
                for k in c..cols {
                    let t = field.mul(&factor, &rows[rank][k]);
                    rows[r][k] = field.sub(&rows[r][k], &t);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant<R: CommRing>(ring: &R, m: &[Vec<R::Elem>]) -> R::Elem {
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = ring.zero();
            for j in 0..n {
                if ring.is_zero(&m[0][j]) {
                    continue;
                }
                let minor: Vec<Vec<R::Elem>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = ring.mul(&m[0][j], &determinant(ring, &minor));
                acc = if j % 2 == 0 {
                    ring.add(&acc, &term)
                } else {
                    ring.sub(&acc, &term)
                };
            }
            acc
        }
    }
}

pub fn mat_mul<R: CommRing>(ring: &R, a: &[Vec<R::Elem>], b: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(ring.zero(), |acc, k| {
                        ring.add(&acc, &ring.mul(&row[k], &b[k][j]))
                    })
                })
                .collect()
        })
        .collect()
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("smith normal form"))
}

/// Invariant factors of an integer matrix with `cols` columns: nonnegative,
/// each dividing the next, zeros last, `min(rows, cols)` of them.
pub fn smith_invariants(rows: &[Vec<i64>], cols: usize) -> Result<Vec<i128>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let m = a.len();
    let size = m.min(cols);
    for t in 0..size {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                let mut out: Vec<i128> = (0..t).map(|k| a[k][k].abs()).collect();
                out.resize(size, 0);
                return Ok(out);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] = ck(a[i][j].checked_sub(ck(q.checked_mul(a[t][j]))?))?;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[t]))?))?;
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold a row with an offending entry into the pivot row.
            let bad = (t + 1..m).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = ck(a[t][j].checked_add(a[i][j]))?;
                    }
                }
                None => break,
            }
        }
    }
    Ok((0..size).map(|k| a[k][k].abs()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::arith::{Integers, Rationals, ZModRing};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(gaussian_rank(&Rationals, q(&[&[6]])), 1);
        assert_eq!(gaussian_rank(&Rationals, q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(
            gaussian_rank(&ZModRing { n: 2 }, vec![vec![0u64, 1], vec![1, 1]]),
            2
        );
        assert_eq!(gaussian_rank(&ZModRing { n: 3 }, vec![vec![0u64]]), 0);
        assert_eq!(gaussian_rank(&Rationals, vec![]), 0);
    }

    #[test]
    fn smith_examples() {
        assert_eq!(
            smith_invariants(&[vec![4, 0], vec![0, 6]], 2).unwrap(),
            vec![2, 12]
        );
        assert_eq!(
            smith_invariants(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3).unwrap(),
            vec![2, 6, 12]
        );
        assert_eq!(smith_invariants(&[vec![0, 0]], 2).unwrap(), vec![0]);
        assert_eq!(smith_invariants(&[], 3).unwrap(), Vec::<i128>::new());
        assert_eq!(smith_invariants(&[vec![2, 3]], 2).unwrap(), vec![1]);
    }

    // Oracle: the product of the first k invariant factors is the gcd of all k×k minors.
    fn minor_gcd(a: &[Vec<i64>], k: usize) -> BigInt {
        use num_integer::Integer;
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let mut g = BigInt::from(0);
        for ri in crate::exterior::wedge_indices(rows, k) {
            for ci in crate::exterior::wedge_indices(cols, k) {
                let sub: Vec<Vec<BigInt>> = ri
                    .iter()
                    .map(|&i| ci.iter().map(|&j| BigInt::from(a[i][j])).collect())
                    .collect();
                g = g.gcd(&determinant(&Integers, &sub));
            }
        }
        g
    }

    proptest! {
        #[test]
        fn smith_matches_minor_gcds(rows in 1usize..4, cols in 1usize..4, seed in proptest::collection::vec(-9i64..10, 16)) {
            let a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            let inv = smith_invariants(&a, cols).unwrap();
            let mut prod = BigInt::from(1);
            for k in 1..=rows.min(cols) {
                prod *= BigInt::from(inv[k - 1]);
                prop_assert_eq!(&prod, &minor_gcd(&a, k));
                if k >= 2 && inv[k - 1] != 0 {
                    prop_assert_eq!(inv[k - 1] % inv[k - 2], 0);
                }
            }
        }
    }
}
