use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use super::matrix::{self, Mat};
use crate::error::{Error, Result};
use crate::galois::TorsionPoint;

/// Lattice in `Z^d` given by linearly independent integer basis rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntLattice {
    ambient_dim: usize,
    basis: Mat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Euclidean,
    Max,
}

impl IntLattice {
    /// Basis rows must be linearly independent.
    pub fn new(ambient_dim: usize, basis: Mat) -> Result<Self> {
        if basis.iter().any(|r| r.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: basis.iter().map(|r| r.len()).find(|&l| l != ambient_dim).unwrap(),
            });
        }
        if matrix::rank(&basis) != basis.len() {
            return Err(Error::Invariant("basis vectors are linearly dependent".into()));
        }
        Ok(IntLattice { ambient_dim, basis })
    }

    /// Lattice generated by arbitrary integer vectors (dependent ones allowed).
    pub fn generated_by(ambient_dim: usize, gens: &[Vec<i64>]) -> Self {
        IntLattice {
            ambient_dim,
            basis: matrix::hnf(gens),
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        IntLattice {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn standard(d: usize) -> Self {
        IntLattice {
            ambient_dim: d,
            basis: matrix::identity(d),
        }
    }

    pub fn scaled_standard(d: usize, n: i64) -> Self {
        IntLattice {
            ambient_dim: d,
            basis: (0..d)
                .map(|i| (0..d).map(|j| if i == j { n } else { 0 }).collect())
                .collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// Gram determinant `det(B B^T) = det(L)^2`, exact.
    pub fn gram_det(&self) -> BigInt {
        let g: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|a| {
                self.basis
                    .iter()
                    .map(|b| BigInt::from(matrix::dot(a, b)))
                    .collect()
            })
            .collect();
        matrix::det_big(g)
    }

    pub fn det(&self) -> f64 {
        self.log_det().exp()
    }

    pub fn log_det(&self) -> f64 {
        0.5 * crate::laurent::bigint_ln(&self.gram_det())
    }

    /// Canonical basis: row Hermite normal form.
    pub fn hnf_basis(&self) -> Mat {
        matrix::hnf(&self.basis)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        if self.basis.is_empty() {
            return v.iter().all(|&x| x == 0);
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        matrix::rank(&rows) == self.rank() && {
            // same rank; check integrality of the coordinates via HNF equality
            matrix::hnf(&rows) == self.hnf_basis()
        }
    }

    /// Same lattice (as a set).
    pub fn same_as(&self, other: &IntLattice) -> bool {
        self.ambient_dim == other.ambient_dim && self.hnf_basis() == other.hnf_basis()
    }

    /// LLL-reduced basis (`delta = 0.99`), exact integer updates.
    pub fn lll_reduce(&self) -> IntLattice {
        IntLattice {
            ambient_dim: self.ambient_dim,
            basis: lll(&self.basis, 0.99),
        }
    }

    /// All nonzero lattice vectors with squared Euclidean norm at most `bound`, one per
    /// `+-` pair (first nonzero coordinate positive), sorted by norm then lexicographically.
    pub fn short_vectors(&self, bound: i128) -> Vec<Vec<i64>> {
        self.short_vectors_with_coords(bound).1.into_iter().map(|(_, v)| v).collect()
    }

    /// Like [`Self::short_vectors`], also returning the reduced basis used and each
    /// vector's coordinates in it.
    pub fn short_vectors_with_coords(&self, bound: i128) -> (Mat, Vec<(Vec<i64>, Vec<i64>)>) {
        if self.basis.is_empty() || bound <= 0 {
            return (self.basis.clone(), Vec::new());
        }
        let b = lll(&self.basis, 0.99);
        let mut out = enumerate(&b, bound);
        out.retain(|(_, v)| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0));
        out.sort_by(|(_, x), (_, y)| {
            matrix::dot(x, x)
                .cmp(&matrix::dot(y, y))
                .then_with(|| x.cmp(y))
        });
        (b, out)
    }

    /// Shortest nonzero vector in the given norm, `None` for the zero lattice.
    /// Ties go to the lexicographically smallest vector whose first nonzero entry is
    /// positive.
    pub fn shortest_vector(&self, norm: Norm) -> Option<Vec<i64>> {
        if self.basis.is_empty() {
            return None;
        }
        let b = lll(&self.basis, 0.99);
        let mut best_sq = b.iter().map(|v| matrix::dot(v, v)).min().unwrap();
        if norm == Norm::Max {
            // max-norm minimiser has |v|_2^2 <= d * (max-norm of any vector)^2
            let m = b.iter().map(|v| matrix::max_norm(v)).min().unwrap() as i128;
            best_sq = self.ambient_dim as i128 * m * m;
        }
        let cands = self.short_vectors(best_sq);
        let key = |v: &Vec<i64>| -> i128 {
            match norm {
                Norm::Euclidean => matrix::dot(v, v),
                Norm::Max => matrix::max_norm(v) as i128,
            }
        };
        cands.into_iter().min_by(|x, y| key(x).cmp(&key(y)).then_with(|| x.cmp(y)))
    }

    /// `lambda_1` in the given norm; infinite for the zero lattice.
    pub fn lambda1(&self, norm: Norm) -> f64 {
        match self.shortest_vector(norm) {
            None => f64::INFINITY,
            Some(v) => match norm {
                Norm::Euclidean => (matrix::dot(&v, &v) as f64).sqrt(),
                Norm::Max => matrix::max_norm(&v) as f64,
            },
        }
    }

    /// Saturation `(L tensor Q) cap Z^d`, returned in Hermite normal form.
    pub fn saturate(&self) -> IntLattice {
        if self.basis.is_empty() {
            return self.clone();
        }
        let r = self.rank();
        // Column operations on B are row operations on B^T: U B^T = H, so
        // B U^T = H^T = [T 0]; the first r rows of (U^T)^{-1} = (U^{-1})^T span the saturation.
        let bt = matrix::transpose(&self.basis);
        let (_, _, u_inv) = matrix::hnf_with_transform(&bt);
        let w_inv = matrix::transpose(&u_inv);
        IntLattice::generated_by(self.ambient_dim, &w_inv[..r])
    }

    pub fn is_saturated(&self) -> bool {
        self.gram_det() == self.saturate().gram_det()
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        // Solve x B = v over Q using the first r independent columns.
        let r = self.rank();
        if r == 0 {
            return v.iter().all(|&x| x == 0).then(Vec::new);
        }
        let bt = matrix::transpose(&self.basis);
        let mut aug: Vec<Vec<i64>> = bt.clone();
        for (row, &x) in aug.iter_mut().zip(v) {
            row.push(x);
        }
        // Rational elimination on the augmented system (d equations, r unknowns).
        use num_rational::BigRational;
        let mut m: Vec<Vec<BigRational>> = aug
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let rows = m.len();
        let mut piv_row = 0;
        let mut pivots = Vec::new();
        for c in 0..r {
            let Some(p) = (piv_row..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(piv_row, p);
            let pv = m[piv_row][c].clone();
            for x in m[piv_row].iter_mut() {
                *x /= &pv;
            }
            for i in 0..rows {
                if i != piv_row && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    let prow = m[piv_row].clone();
                    for (x, y) in m[i].iter_mut().zip(prow) {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            piv_row += 1;
        }
        if m[piv_row..].iter().any(|row| !row[r].is_zero()) {
            return None;
        }
        let mut x = vec![0i64; r];
        for (i, &c) in pivots.iter().enumerate() {
            let q = &m[i][r];
            if !q.is_integer() {
                return None;
            }
            x[c] = num_traits::ToPrimitive::to_i64(&q.to_integer())?;
        }
        Some(x)
    }

    /// Intersection with another lattice of the same ambient dimension.
    pub fn intersect(&self, other: &IntLattice) -> IntLattice {
        // x B1 = y B2 ; kernel of [B1; -B2]
        let d = self.ambient_dim;
        if self.rank() == 0 || other.rank() == 0 {
            return IntLattice::zero(d);
        }
        let mut rows: Mat = Vec::new();
        let r1 = self.rank();
        for (i, b) in self.basis.iter().enumerate() {
            let mut row = b.clone();
            row.extend((0..r1).map(|j| i64::from(i == j)));
            rows.push(row);
        }
        for b in &other.basis {
            let mut row: Vec<i64> = b.iter().map(|x| -x).collect();
            row.extend(std::iter::repeat_n(0, r1));
            rows.push(row);
        }
        let (h, _, _) = matrix::hnf_with_transform(&rows);
        let gens: Mat = h
            .iter()
            .filter(|row| row[..d].iter().all(|&x| x == 0) && row[d..].iter().any(|&x| x != 0))
            .map(|row| matrix::vec_mat(&row[d..], &self.basis))
            .collect();
        IntLattice::generated_by(d, &gens)
    }
}

impl serde::Serialize for IntLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

impl fmt::Display for IntLattice {
    /// Rows separated by `;`, entries by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

impl FromStr for IntLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rows: Mat = Vec::new();
        for (i, row) in s.split(';').enumerate() {
            let row = row.trim();
            if row.is_empty() {
                continue;
            }
            let v: std::result::Result<Vec<i64>, _> = row
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(str::parse)
                .collect();
            rows.push(v.map_err(|e| Error::Syntax {
                pos: i,
                msg: format!("row {i}: {e}"),
            })?);
        }
        let d = rows.first().map_or(0, |r| r.len());
        IntLattice::new(d, rows)
    }
}

/// `Lambda_zeta = {u : zeta^u = 1}`; determinant `N`.
pub fn lattice_of_torsion(zeta: &TorsionPoint) -> IntLattice {
    kernel_mod(&[(zeta.residues().iter().map(|&b| b as i64).collect(), zeta.order())], zeta.dim())
}

/// `{u in Z^d : <b_k, u> = 0 mod N_k for all k}`.
pub fn kernel_mod(relations: &[(Vec<i64>, u64)], d: usize) -> IntLattice {
    let m = relations.len();
    let mut rows: Mat = Vec::new();
    for i in 0..d {
        let mut row: Vec<i64> = relations.iter().map(|(b, n)| b[i].rem_euclid(*n as i64)).collect();
        row.extend((0..d).map(|j| i64::from(i == j)));
        rows.push(row);
    }
    for (k, (_, n)) in relations.iter().enumerate() {
        let mut row = vec![0i64; m + d];
        row[k] = *n as i64;
        rows.push(row);
    }
    let (h, _, _) = matrix::hnf_with_transform(&rows);
    let gens: Mat = h
        .into_iter()
        .filter(|row| row[..m].iter().all(|&x| x == 0))
        .map(|row| row[m..].to_vec())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    IntLattice::generated_by(d, &gens).lll_reduce()
}

/// Integer kernel `{v : <a, v> = 0}` of a nonzero vector.
pub fn orthogonal_lattice(a: &[i64]) -> IntLattice {
    let d = a.len();
    let rows: Mat = (0..d)
        .map(|i| {
            let mut row = vec![a[i]];
            row.extend((0..d).map(|j| i64::from(i == j)));
            row
        })
        .collect();
    let (h, _, _) = matrix::hnf_with_transform(&rows);
    let gens: Mat = h
        .into_iter()
        .filter(|row| row[0] == 0)
        .map(|row| row[1..].to_vec())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    IntLattice::generated_by(d, &gens).lll_reduce()
}

/// Extends the rows of a saturated basis to a unimodular matrix `V` whose first columns
/// are the input vectors. The added columns are size-reduced against the input.
pub fn complete_to_unimodular(vectors: &[Vec<i64>], d: usize) -> Result<Mat> {
    let r = vectors.len();
    if r == 0 {
        return Ok(matrix::identity(d));
    }
    if vectors.iter().any(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: vectors[0].len(),
        });
    }
    if matrix::rank(vectors) != r {
        return Err(Error::NotSaturated("input vectors are dependent".into()));
    }
    // B W = [T 0] with W = U^T; W^{-1} = (U^{-1})^T.
    let (h, _, u_inv) = matrix::hnf_with_transform(&matrix::transpose(vectors));
    let t: Mat = matrix::transpose(&h[..r]);
    let det_t = matrix::det(&t);
    if det_t.abs() != BigInt::one() {
        return Err(Error::NotSaturated(format!(
            "index {} in its saturation",
            det_t.abs()
        )));
    }
    let w_inv = matrix::transpose(&u_inv);
    // rows of B are T * (first r rows of W^{-1}); replace them by B itself.
    let mut rows: Mat = vectors.to_vec();
    rows.extend(w_inv[r..].iter().cloned());
    // size-reduce the added rows against the input rows (rational projection, rounded)
    for k in r..d {
        for _ in 0..4 {
            let coeffs = project_round(&rows[..r], &rows[k]);
            if coeffs.iter().all(|&c| c == 0) {
                break;
            }
            for (j, c) in coeffs.into_iter().enumerate() {
                for t in 0..d {
                    rows[k][t] -= c * rows[j][t];
                }
            }
        }
    }
    let v = matrix::transpose(&rows);
    debug_assert_eq!(matrix::det(&v).abs(), BigInt::one());
    Ok(v)
}

/// Rounded coefficients of the orthogonal projection of `x` onto the span of `rows`.
fn project_round(rows: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    let r = rows.len();
    let g: Vec<Vec<f64>> = rows
        .iter()
        .map(|a| rows.iter().map(|b| matrix::dot(a, b) as f64).collect())
        .collect();
    let rhs: Vec<f64> = rows.iter().map(|a| matrix::dot(a, x) as f64).collect();
    // small Gaussian elimination
    let mut m: Vec<Vec<f64>> = g
        .into_iter()
        .zip(rhs)
        .map(|(mut row, b)| {
            row.push(b);
            row
        })
        .collect();
    for c in 0..r {
        let p = (c..r)
            .max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())
            .unwrap();
        m.swap(c, p);
        let pv = m[c][c];
        if pv == 0.0 {
            return vec![0; r];
        }
        for i in 0..r {
            if i != c {
                let f = m[i][c] / pv;
                for k in c..=r {
                    m[i][k] -= f * m[c][k];
                }
            }
        }
    }
    (0..r).map(|i| (m[i][r] / m[i][i]).round() as i64).collect()
}

/// Floating Gram-Schmidt data `(mu, |b*_i|^2)` for an integer basis.
fn gram_schmidt(b: &[Vec<i64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = b.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut bs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut bn = vec![0.0; n];
    for i in 0..n {
        let mut v: Vec<f64> = b[i].iter().map(|&x| x as f64).collect();
        for j in 0..i {
            let d: f64 = b[i].iter().zip(&bs[j]).map(|(&x, y)| x as f64 * y).sum();
            mu[i][j] = if bn[j] > 0.0 { d / bn[j] } else { 0.0 };
            for (vk, bk) in v.iter_mut().zip(&bs[j]) {
                *vk -= mu[i][j] * bk;
            }
        }
        bn[i] = v.iter().map(|x| x * x).sum();
        bs.push(v);
    }
    (mu, bn)
}

/// Textbook LLL with exact integer row updates and recomputed floating GS data.
pub fn lll(basis: &[Vec<i64>], delta: f64) -> Mat {
    let mut b: Mat = basis.to_vec();
    let n = b.len();
    if n <= 1 {
        return b;
    }
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        assert!(guard < 1_000_000, "LLL failed to terminate");
        let (mu, _) = gram_schmidt(&b);
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let q = q as i64;
                for t in 0..b[k].len() {
                    b[k][t] -= q * b[j][t];
                }
            }
        }
        let (mu, bn) = gram_schmidt(&b);
        if bn[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

/// Fincke-Pohst enumeration of all nonzero `v = x B` with `|v|^2 <= bound`, as `(x, v)`.
fn enumerate(b: &[Vec<i64>], bound: i128) -> Vec<(Vec<i64>, Vec<i64>)> {
    let n = b.len();
    let d = b[0].len();
    let (mu, bn) = gram_schmidt(b);
    let slack = bound as f64 * (1.0 + 1e-9) + 1e-6;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fn rec(
        level: usize,
        x: &mut Vec<i64>,
        partial: f64,
        mu: &[Vec<f64>],
        bn: &[f64],
        slack: f64,
        b: &[Vec<i64>],
        bound: i128,
        d: usize,
        out: &mut Vec<(Vec<i64>, Vec<i64>)>,
    ) {
        let n = x.len();
        let center: f64 = -(level + 1..n).map(|j| x[j] as f64 * mu[j][level]).sum::<f64>();
        let rem = slack - partial;
        if rem < 0.0 {
            return;
        }
        let width = (rem / bn[level]).sqrt();
        let lo = (center - width).ceil() as i64;
        let hi = (center + width).floor() as i64;
        for xi in lo..=hi {
            x[level] = xi;
            let t = xi as f64 - center;
            let p = partial + t * t * bn[level];
            if p > slack {
                continue;
            }
            if level == 0 {
                if x.iter().all(|&c| c == 0) {
                    continue;
                }
                let mut v = vec![0i64; d];
                for (j, &c) in x.iter().enumerate() {
                    if c != 0 {
                        for (vt, &bt) in v.iter_mut().zip(&b[j]) {
                            *vt += c * bt;
                        }
                    }
                }
                if matrix::dot(&v, &v) <= bound {
                    out.push((x.clone(), v));
                }
            } else {
                rec(level - 1, x, p, mu, bn, slack, b, bound, d, out);
            }
        }
        x[level] = 0;
    }
    rec(n - 1, &mut x, 0.0, &mu, &bn, slack, b, bound, d, &mut out);
    out
}

/// `[Z^d cap span(L) : L]` for a lattice `L`.
pub fn saturation_index(l: &IntLattice) -> BigInt {
    if l.rank() == 0 {
        return BigInt::one();
    }
    let g = l.gram_det();
    let gs = l.saturate().gram_det();
    let q = g / gs;
    num_integer::Roots::sqrt(&q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_lattices() {
        let z = TorsionPoint::new(&[4, 1], 8).unwrap();
        let l = lattice_of_torsion(&z);
        assert_eq!(l.gram_det(), BigInt::from(64));
        assert!(l.contains(&[1, -4]));
        assert!(l.contains(&[0, 8]));
        assert!(!l.contains(&[1, 0]));
        assert_eq!(l.shortest_vector(Norm::Euclidean), Some(vec![2, 0]));
        assert_eq!(l.lambda1(Norm::Max), 2.0);
        let l = lattice_of_torsion(&TorsionPoint::new(&[1], 7).unwrap());
        assert_eq!(l.basis(), &vec![vec![7]]);
        let l = lattice_of_torsion(&TorsionPoint::new(&[1, 1], 3).unwrap());
        assert_eq!(l.gram_det(), BigInt::from(9));
        assert!(l.contains(&[1, 2]));
    }

    #[test]
    fn saturation() {
        let l = IntLattice::generated_by(2, &[vec![2, 0]]);
        assert_eq!(l.saturate().basis(), &vec![vec![1, 0]]);
        let l = IntLattice::generated_by(2, &[vec![2, 4]]);
        assert_eq!(l.saturate().basis(), &vec![vec![1, 2]]);
        assert!(IntLattice::standard(2).saturate().same_as(&IntLattice::standard(2)));
        let l = IntLattice::generated_by(3, &[vec![2, 0, 2], vec![0, 3, 3]]);
        let s = l.saturate();
        assert_eq!(saturation_index(&l), BigInt::from(6));
        assert!(s.saturate().same_as(&s));
    }

    #[test]
    fn completion() {
        assert_eq!(complete_to_unimodular(&[vec![1, 0]], 2).unwrap(), matrix::identity(2));
        assert_eq!(
            complete_to_unimodular(&[vec![1, 2]], 2).unwrap(),
            vec![vec![1, 0], vec![2, 1]]
        );
        // (3,5,7) - (1,1,1) = 2 (1,2,3): index 2
        assert!(complete_to_unimodular(&[vec![3, 5, 7], vec![1, 1, 1]], 3).is_err());
        assert!(matches!(
            complete_to_unimodular(&[vec![2, 0]], 2),
            Err(Error::NotSaturated(_))
        ));
        let v = complete_to_unimodular(&[vec![3, 5, 7], vec![1, 1, 2]], 3).unwrap();
        assert_eq!(matrix::det(&v).abs(), BigInt::one());
        assert_eq!(matrix::transpose(&v)[0], vec![3, 5, 7]);
    }

    #[test]
    fn text_format() {
        let l: IntLattice = "1 -4; 0 8".parse().unwrap();
        assert_eq!(l.to_string(), "1 -4; 0 8");
        assert!("1 2; 2 4".parse::<IntLattice>().is_err());
    }

    #[test]
    fn orthogonal() {
        let l = orthogonal_lattice(&[1, 5]);
        assert_eq!(l.lambda1(Norm::Max), 5.0);
        let l = orthogonal_lattice(&[1, 0]);
        assert_eq!(l.lambda1(Norm::Max), 1.0);
    }
}
