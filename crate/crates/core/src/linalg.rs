//! Exact linear algebra over the rationals.
//!
//! Kernels are computed by fraction-free elimination: rows are cleared of
//! denominators once, then combined with integer multipliers and reduced
//! by their content, so no rational arithmetic happens until the basis is
//! read off. Pivoting is deterministic (first nonzero column, first row).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x /= &g;
    }
}

fn to_integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    primitive(&mut out);
    out
}

/// `row_i ← p·row_i − q·row_k` where `p`, `q` are the pivot entries.
fn eliminate(target: &mut [BigInt], pivot_row: &[BigInt], col: usize) {
    let p = pivot_row[col].clone();
    let q = target[col].clone();
    for (x, y) in target.iter_mut().zip(pivot_row) {
        *x = &*x * &p - &q * y;
    }
    primitive(target);
}

/// Reduced integer echelon form and its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis: one vector per free column (increasing), with a 1 in
    /// that column and zeros in the other free columns.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.ncols];
                v[f] = BigRational::one();
                for (row, &c) in self.rows.iter().zip(&self.pivots) {
                    if !row[f].is_zero() {
                        v[c] = -BigRational::new(row[f].clone(), row[c].clone());
                    }
                }
                v
            })
            .collect()
    }
}

pub fn echelon(matrix: &[Vec<BigRational>], ncols: usize) -> Echelon {
    let mut rows: Vec<Vec<BigInt>> =
        matrix.iter().map(|r| to_integer_row(r)).filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, i);
        if rows[r][col].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        for row in tail.iter_mut() {
            if !row[col].is_zero() {
                eliminate(row, &head[r], col);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    for k in (0..r).rev() {
        let c = pivots[k];
        let (head, tail) = rows.split_at_mut(k);
        for row in head.iter_mut() {
            if !row[c].is_zero() {
                eliminate(row, &tail[0], c);
            }
        }
    }
    for row in rows.iter_mut() {
        if let Some(first) = row.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
    Echelon { rows, pivots, ncols }
}

/// Basis of `{v : M v = 0}` in reduced echelon form.
pub fn nullspace(matrix: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    echelon(matrix, ncols).kernel()
}

pub fn rank(matrix: &[Vec<BigRational>], ncols: usize) -> usize {
    echelon(matrix, ncols).rank()
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn apply(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
        m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = nullspace(&m, 3);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![int(-2), int(1), int(0)]);
        assert_eq!(k[1], vec![int(-3), int(0), int(1)]);
        for v in &k {
            assert!(apply(&m, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rational_entries_and_full_rank() {
        let m = vec![vec![frac(1, 2), frac(1, 3)], vec![frac(1, 4), frac(1, 5)]];
        assert!(nullspace(&m, 2).is_empty());
        assert_eq!(rank(&m, 2), 2);
        let inv = inverse(&m).unwrap();
        assert_eq!(apply(&m, &[inv[0][0].clone(), inv[1][0].clone()]), vec![int(1), int(0)]);
    }

    #[test]
    fn empty_and_zero_systems() {
        assert_eq!(nullspace(&[], 3).len(), 3);
        assert_eq!(nullspace(&mat(&[&[0, 0]]), 2).len(), 2);
        assert!(inverse(&mat(&[&[1, 1], &[1, 1]])).is_none());
    }
}
