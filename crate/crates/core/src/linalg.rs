//! Dense linear algebra over a [`Field`]: row reduction, rank, kernels.

use crate::scalar::Field;

pub type Matrix<K> = Vec<Vec<K>>;

/// Reduces `m` in place to reduced row echelon form and returns the pivot columns.
///
/// Pivots are chosen by largest magnitude, which keeps approximate fields stable
/// and is harmless for exact ones. Zero rows end up at the bottom.
pub fn rref<K: Field>(m: &mut Matrix<K>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .max_by(|&a, &b| m[a][c].magnitude().total_cmp(&m[b][c].magnitude()));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        m[r][c] = K::one();
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for k in 0..cols {
                if k == c {
                    m[i][k] = K::zero();
                } else if !m[r][k].is_zero() {
                    m[i][k] = m[i][k].clone() - f.clone() * m[r][k].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    for row in m.iter_mut().skip(r) {
        for x in row.iter_mut() {
            *x = K::zero();
        }
    }
    pivots
}

pub fn rank<K: Field>(m: &[Vec<K>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// A basis of `{v : m v = 0}` where `m` has `cols` columns.
pub fn kernel<K: Field>(m: &[Vec<K>], cols: usize) -> Matrix<K> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![K::zero(); cols];
            v[f] = K::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<K: Field>(m: &[Vec<K>]) -> Option<Matrix<K>> {
    let n = m.len();
    let mut a: Matrix<K> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|k| if k == i { K::one() } else { K::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut a);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec<K: Field>(m: &[Vec<K>], v: &[K]) -> Vec<K> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(K::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}

pub fn transpose<K: Clone>(m: &[Vec<K>]) -> Matrix<K> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use proptest::prelude::*;

    fn mq(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&a| rat(a, 1)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let m = mq(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&m), 2);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&m, &k[0]).iter().all(|x| *x == rat(0, 1)));
    }

    #[test]
    fn inverse_round_trip() {
        let m = mq(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, mq(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&mq(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn float_pivoting() {
        let m = vec![vec![1e-12, 1.0], vec![1.0, 1.0]];
        let inv = inverse(&m).unwrap();
        let v = mat_vec(&m, &mat_vec(&inv, &[3.0, 5.0]));
        assert!((v[0] - 3.0).abs() < 1e-9 && (v[1] - 5.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in prop::collection::vec(-3i64..=3, 12)) {
            let m: Matrix<Rational> = entries.chunks(4).map(|r| r.iter().map(|&a| rat(a, 1)).collect()).collect();
            let k = kernel(&m, 4);
            prop_assert_eq!(rank(&m) + k.len(), 4);
            for v in &k {
                prop_assert!(mat_vec(&m, v).iter().all(|x| *x == rat(0, 1)));
            }
        }
    }
}
