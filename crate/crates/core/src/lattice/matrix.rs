//! Small dense integer matrices stored as rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Mat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(a: &[Vec<i64>]) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j]).collect())
        .collect()
}

pub fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            assert_eq!(r.len(), inner);
            (0..cols)
                .map(|j| {
                    let s: i128 = (0..inner).map(|k| r[k] as i128 * b[k][j] as i128).sum();
                    i64::try_from(s).expect("matrix entry overflow")
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[i64], a: &[Vec<i64>]) -> Vec<i64> {
    matmul(&[v.to_vec()], a).remove(0)
}

/// Matrix times column vector.
pub fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|r| {
            let s: i128 = r.iter().zip(v).map(|(x, y)| *x as i128 * *y as i128).sum();
            i64::try_from(s).expect("matrix entry overflow")
        })
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

pub fn max_norm(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

pub fn mat_max_norm(a: &[Vec<i64>]) -> i64 {
    a.iter().map(|r| max_norm(r)).max().unwrap_or(0)
}

/// Exact determinant (fraction-free Bareiss).
pub fn det(a: &[Vec<i64>]) -> BigInt {
    let m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    det_big(m)
}

pub fn det_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Inverse of a square integer matrix with determinant `+-1`.
pub fn inverse_unimodular(a: &[Vec<i64>]) -> Option<Mat> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return None;
    }
    let d = det(a);
    if d.abs() != BigInt::one() {
        return None;
    }
    let inv = inverse_rational(a)?;
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|q| q.is_integer().then(|| q.to_integer().to_i64()).flatten())
                .collect()
        })
        .collect()
}

/// Gauss-Jordan inverse over the rationals.
pub fn inverse_rational(a: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> =
                r.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let piv = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let row = m[col].clone();
                for (x, y) in m[i].iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row-style Hermite normal form with transformation.
///
/// Returns `(h, u, u_inv)` with `u * a = h`, `u` unimodular, `u_inv` its inverse.
/// `h` is in row echelon form with positive pivots, entries above each pivot reduced
/// into `[0, pivot)`, zero rows last.
pub fn hnf_with_transform(a: &[Vec<i64>]) -> (Mat, Mat, Mat) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = identity(rows)
        .into_iter()
        .map(|r| r.into_iter().map(i128::from).collect())
        .collect();
    let mut ui = u.clone();

    // row_i -= q * row_j on h and u; col_j += q * col_i on ui
    fn sub_row(
        h: &mut [Vec<i128>],
        u: &mut [Vec<i128>],
        ui: &mut [Vec<i128>],
        i: usize,
        j: usize,
        q: i128,
    ) {
        if q == 0 {
            return;
        }
        for k in 0..h[i].len() {
            h[i][k] -= q * h[j][k];
        }
        for k in 0..u[i].len() {
            u[i][k] -= q * u[j][k];
        }
        for row in ui.iter_mut() {
            row[j] += q * row[i];
        }
    }
    fn swap_rows(h: &mut [Vec<i128>], u: &mut [Vec<i128>], ui: &mut [Vec<i128>], i: usize, j: usize) {
        h.swap(i, j);
        u.swap(i, j);
        for row in ui.iter_mut() {
            row.swap(i, j);
        }
    }
    fn negate_row(h: &mut [Vec<i128>], u: &mut [Vec<i128>], ui: &mut [Vec<i128>], i: usize) {
        for x in h[i].iter_mut() {
            *x = -*x;
        }
        for x in u[i].iter_mut() {
            *x = -*x;
        }
        for row in ui.iter_mut() {
            row[i] = -row[i];
        }
    }

    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| h[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[i][c].abs()).unwrap();
            if p != r {
                swap_rows(&mut h, &mut u, &mut ui, p, r);
            }
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c] != 0 {
                    let q = h[i][c].div_euclid(h[r][c]);
                    sub_row(&mut h, &mut u, &mut ui, i, r, q);
                    if h[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c] == 0 {
            continue;
        }
        if h[r][c] < 0 {
            negate_row(&mut h, &mut u, &mut ui, r);
        }
        for i in 0..r {
            let q = h[i][c].div_euclid(h[r][c]);
            sub_row(&mut h, &mut u, &mut ui, i, r, q);
        }
        r += 1;
    }
    let conv = |m: Vec<Vec<i128>>| -> Mat {
        m.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| i64::try_from(x).expect("HNF entry overflow"))
                    .collect()
            })
            .collect()
    };
    (conv(h), conv(u), conv(ui))
}

/// Hermite normal form of the row lattice, zero rows dropped.
pub fn hnf(a: &[Vec<i64>]) -> Mat {
    let (h, _, _) = hnf_with_transform(a);
    h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect()
}

/// Rank over the rationals.
pub fn rank(a: &[Vec<i64>]) -> usize {
    hnf(a).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_transform_consistency() {
        let a = vec![vec![4, 6, 2], vec![2, 3, 7], vec![6, 9, 9]];
        let (h, u, ui) = hnf_with_transform(&a);
        assert_eq!(matmul(&u, &a), h);
        assert_eq!(matmul(&u, &ui), identity(3));
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn determinants_and_inverses() {
        let v = vec![vec![1, 0], vec![2, 1]];
        assert_eq!(det(&v), BigInt::from(1));
        assert_eq!(inverse_unimodular(&v).unwrap(), vec![vec![1, 0], vec![-2, 1]]);
        assert!(inverse_unimodular(&[vec![2, 0], vec![0, 1]]).is_none());
        let a = vec![vec![2, -1, 0], vec![1, 3, 5], vec![-4, 2, 7]];
        assert_eq!(det(&a), BigInt::from(49));
    }
}
