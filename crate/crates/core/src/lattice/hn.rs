//! Minimal-determinant sublattices and Harder-Narasimhan slope profiles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::base::{lattice_of_torsion, orthogonal_lattice, IntLattice, Norm};
use super::matrix::{self, Mat};
use crate::error::{Error, Result};
use crate::galois::TorsionPoint;
use crate::laurent::bigint_ln;

/// Largest ambient dimension handled by the certified enumeration.
pub const EXACT_DIM_CAP: usize = 4;

/// `gamma_r^{r/2}` for the Hermite constants of ranks 1..4.
fn hermite_factor(r: usize) -> f64 {
    match r {
        0 | 1 => 1.0,
        2 => 4.0 / 3.0,
        3 => std::f64::consts::SQRT_2,
        4 => 2.0,
        _ => unreachable!("exact mode is capped at rank 4"),
    }
}

/// Minimal determinant over rank-`r` subgroups of `lattice`, returned as
/// `(log det, witness)`. The witness is primitive in `lattice`; among minimisers the one
/// with lexicographically smallest Hermite basis is returned.
pub fn min_det_sublattice(lattice: &IntLattice, r: usize) -> Result<(f64, IntLattice)> {
    let (g, w) = min_gram_sublattice(lattice, r)?;
    Ok((0.5 * bigint_ln(&g), w))
}

/// Same as [`min_det_sublattice`] with the exact Gram determinant `det^2`.
pub fn min_gram_sublattice(lattice: &IntLattice, r: usize) -> Result<(BigInt, IntLattice)> {
    let d = lattice.ambient_dim();
    if d > EXACT_DIM_CAP {
        return Err(Error::ExactCapExceeded {
            dim: d,
            cap: EXACT_DIM_CAP,
        });
    }
    let n = lattice.rank();
    if r > n {
        return Err(Error::OutOfRange(format!("rank {r} exceeds lattice rank {n}")));
    }
    if r == 0 {
        return Ok((BigInt::one(), IntLattice::zero(d)));
    }
    if r == n {
        return Ok((
            lattice.gram_det(),
            IntLattice::generated_by(d, lattice.basis()),
        ));
    }
    let reduced = lattice.lll_reduce();
    let b = reduced.basis().clone();
    // Initial candidate: the first r reduced vectors, saturated inside the lattice.
    let first: Mat = (0..r)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut best = saturate_within(&b, &first);
    let mut best_g = best.gram_det();
    let mut best_hnf = best.hnf_basis();

    let lambda1 = reduced.lambda1(Norm::Euclidean);
    let bound_of = |g: &BigInt| hermite_factor(r) * (0.5 * bigint_ln(g)).exp();
    let radius = bound_of(&best_g) / lambda1.powi(r as i32 - 1);
    let radius_sq = ((radius * radius) * (1.0 + 1e-9)).ceil() as i128 + 1;
    let (basis_used, vecs) = reduced.short_vectors_with_coords(radius_sq);
    let norms: Vec<f64> = vecs
        .iter()
        .map(|(_, v)| (matrix::dot(v, v) as f64).sqrt())
        .collect();

    // Depth-first over increasing index tuples with the Minkowski product bound.
    let mut stack: Vec<usize> = Vec::with_capacity(r);
    let mut prod: Vec<f64> = vec![1.0];
    fn dfs(
        start: usize,
        r: usize,
        stack: &mut Vec<usize>,
        prod: &mut Vec<f64>,
        vecs: &[(Vec<i64>, Vec<i64>)],
        norms: &[f64],
        basis_used: &Mat,
        best_g: &mut BigInt,
        best: &mut IntLattice,
        best_hnf: &mut Mat,
        bound_of: &dyn Fn(&BigInt) -> f64,
    ) {
        let t = stack.len();
        for i in start..vecs.len() {
            let p = prod[t] * norms[i];
            let remaining = (r - t - 1) as i32;
            if p * norms[i].powi(remaining) > bound_of(best_g) * (1.0 + 1e-9) {
                // norms are sorted, later indices only get worse
                break;
            }
            stack.push(i);
            let coords: Mat = stack.iter().map(|&k| vecs[k].0.clone()).collect();
            if matrix::rank(&coords) == stack.len() {
                if stack.len() == r {
                    let cand = saturate_within(basis_used, &coords);
                    let g = cand.gram_det();
                    let h = cand.hnf_basis();
                    if g < *best_g || (g == *best_g && h < *best_hnf) {
                        *best_g = g;
                        *best = cand;
                        *best_hnf = h;
                    }
                } else {
                    prod.push(p);
                    dfs(
                        i + 1, r, stack, prod, vecs, norms, basis_used, best_g, best, best_hnf,
                        bound_of,
                    );
                    prod.pop();
                }
            }
            stack.pop();
        }
    }
    dfs(
        0,
        r,
        &mut stack,
        &mut prod,
        &vecs,
        &norms,
        &basis_used,
        &mut best_g,
        &mut best,
        &mut best_hnf,
        &bound_of,
    );
    Ok((best_g, IntLattice::generated_by(d, &best_hnf)))
}

/// `span(x B) cap (Z^n B)` for coordinate rows `x` in the basis `B`.
fn saturate_within(b: &Mat, coords: &Mat) -> IntLattice {
    let n = b.len();
    let sat = IntLattice::generated_by(n, coords).saturate();
    let gens: Mat = sat.basis().iter().map(|x| matrix::vec_mat(x, b)).collect();
    IntLattice::generated_by(b[0].len(), &gens)
}

#[derive(Debug, Clone, Serialize)]
pub struct HNProfile {
    /// `mu_1 <= ... <= mu_r`, natural-log scale.
    pub slopes: Vec<f64>,
    /// `f(j) = min log det` over rank-`j` sublattices, `j = 0..r`.
    pub min_log_dets: Vec<f64>,
    /// Exact `det^2` of the minimisers.
    #[serde(skip)]
    pub gram_dets: Vec<BigInt>,
    /// Hermite bases of the minimisers, one per rank.
    pub witnesses: Vec<Mat>,
    /// Interior vertices of the lower convex hull, where the slope jumps.
    #[serde(rename = "jumps")]
    pub jump_ranks: Vec<usize>,
    /// All hull vertices including `0` and `r`.
    #[serde(skip)]
    pub vertices: Vec<usize>,
    pub certified: bool,
}

/// `a` lies strictly below the chord from `i` to `k` in the `(rank, log G)` plane.
fn strictly_below(gi: &BigInt, i: usize, gj: &BigInt, j: usize, gk: &BigInt, k: usize) -> bool {
    gj.pow((k - i) as u32) < gi.pow((k - j) as u32) * gk.pow((j - i) as u32)
}

impl HNProfile {
    fn from_gram(gram_dets: Vec<BigInt>, witnesses: Vec<Mat>, certified: bool) -> HNProfile {
        let r = gram_dets.len() - 1;
        let mut hull: Vec<usize> = Vec::new();
        for k in 0..=r {
            while hull.len() >= 2 {
                let j = hull[hull.len() - 1];
                let i = hull[hull.len() - 2];
                if strictly_below(&gram_dets[i], i, &gram_dets[j], j, &gram_dets[k], k) {
                    break;
                }
                hull.pop();
            }
            hull.push(k);
        }
        let mut slopes = vec![0.0; r];
        for w in hull.windows(2) {
            let (i, k) = (w[0], w[1]);
            let s = (bigint_ln(&gram_dets[k]) - bigint_ln(&gram_dets[i])) / (2.0 * (k - i) as f64);
            for slot in &mut slopes[i..k] {
                *slot = s;
            }
        }
        HNProfile {
            slopes,
            min_log_dets: gram_dets.iter().map(|g| 0.5 * bigint_ln(g)).collect(),
            jump_ranks: hull[1..hull.len() - 1].to_vec(),
            vertices: hull,
            gram_dets,
            witnesses,
            certified,
        }
    }

    pub fn rank(&self) -> usize {
        self.slopes.len()
    }

    pub fn log_det(&self) -> f64 {
        *self.min_log_dets.last().unwrap()
    }

    /// Values of the convex hull at each rank.
    pub fn hull_values(&self) -> Vec<f64> {
        let mut f = vec![0.0];
        for s in &self.slopes {
            f.push(f.last().unwrap() + s);
        }
        f
    }

    /// Exact checks: hull vertices strictly convex, every point on or above the hull,
    /// `f(0) = 0`, and the hull ends at `log det`.
    pub fn verify_exact(&self) -> Result<()> {
        let g = &self.gram_dets;
        if !g[0].is_one() {
            return Err(Error::Invariant("f(0) != 0".into()));
        }
        let v = &self.vertices;
        for w in v.windows(3) {
            if !strictly_below(&g[w[0]], w[0], &g[w[1]], w[1], &g[w[2]], w[2]) {
                return Err(Error::Invariant("slopes not increasing at a vertex".into()));
            }
        }
        for seg in v.windows(2) {
            let (i, k) = (seg[0], seg[1]);
            for j in i + 1..k {
                // on or above the chord
                if strictly_below(&g[i], i, &g[j], j, &g[k], k) {
                    return Err(Error::Invariant(format!("rank {j} lies below the hull")));
                }
            }
        }
        if *v.last().unwrap() != self.rank() || v[0] != 0 {
            return Err(Error::Invariant("hull does not span 0..r".into()));
        }
        Ok(())
    }

    /// `sum mu_j`, which equals `log det` by construction.
    pub fn slope_sum(&self) -> f64 {
        crate::arith::kahan_sum(self.slopes.iter().copied())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "slopes": self.slopes,
            "jumps": self.jump_ranks,
            "witnesses": self.witnesses,
        })
    }
}

/// Exact Harder-Narasimhan profile of a full-rank lattice in dimension at most 4.
pub fn hn_profile(lattice: &IntLattice) -> Result<HNProfile> {
    if lattice.rank() != lattice.ambient_dim() {
        return Err(Error::OutOfRange("lattice must have full rank".into()));
    }
    let r = lattice.rank();
    let mut grams = Vec::with_capacity(r + 1);
    let mut wits = Vec::with_capacity(r + 1);
    for j in 0..=r {
        let (g, w) = min_gram_sublattice(lattice, j)?;
        grams.push(g);
        wits.push(w.hnf_basis());
    }
    Ok(HNProfile::from_gram(grams, wits, true))
}

/// Non-certified profile from prefixes of an LLL-reduced basis; any dimension.
pub fn hn_profile_heuristic(lattice: &IntLattice) -> HNProfile {
    let b = lattice.lll_reduce().basis().clone();
    let d = lattice.ambient_dim();
    let r = b.len();
    let mut grams = Vec::with_capacity(r + 1);
    let mut wits = Vec::with_capacity(r + 1);
    for j in 0..=r {
        let l = if j == 0 {
            IntLattice::zero(d)
        } else {
            let coords: Mat = (0..j)
                .map(|i| (0..r).map(|k| i64::from(i == k)).collect())
                .collect();
            saturate_within(&b, &coords)
        };
        grams.push(if j == 0 { BigInt::one() } else { l.gram_det() });
        wits.push(l.hnf_basis());
    }
    HNProfile::from_gram(grams, wits, false)
}

/// Best rational approximation with a small denominator, used for exact slope tests.
fn small_rational(x: f64) -> Option<BigRational> {
    for q in 1..=4096i64 {
        let p = (x * q as f64).round();
        if (p / q as f64 - x).abs() <= 1e-15 * x.abs().max(1.0) {
            return Some(BigRational::new(BigInt::from(p as i64), BigInt::from(q)));
        }
    }
    None
}

/// Decides `mu_{j+1} >= nu^{r-j} log det` exactly when `nu` is a small-denominator
/// rational, otherwise in floating point.
fn slope_at_least(p: &HNProfile, j: usize, nu: f64) -> bool {
    let r = p.rank();
    let e = (r - j) as i32;
    // segment containing j+1
    let seg = p
        .vertices
        .windows(2)
        .find(|w| w[0] <= j && j < w[1])
        .expect("rank inside hull");
    let (i, k) = (seg[0], seg[1]);
    let gi = &p.gram_dets[i];
    let gk = &p.gram_dets[k];
    let gr = &p.gram_dets[r];
    if let Some(nu_q) = small_rational(nu) {
        let pw = num_traits::pow(nu_q, e as usize);
        let (s, t) = (pw.numer().clone(), pw.denom().clone());
        if let (Some(s), Some(t)) = (s.to_u32(), t.to_u32()) {
            if t as u64 * (k - i) as u64 <= 1 << 16 && s as u64 * (k - i) as u64 <= 1 << 16 {
                // ln(gk/gi) / (2(k-i)) >= (s/t) ln(gr) / 2  <=>  (gk/gi)^t >= gr^{s(k-i)}
                let lhs = gk.pow(t);
                let rhs = gi.pow(t) * gr.pow(s * (k - i) as u32);
                return lhs >= rhs;
            }
        }
    }
    p.slopes[j] >= nu.powi(e) * p.log_det() * (1.0 - 1e-12)
}

/// `Lambda(nu)`: the filtration member of rank `j` for the smallest `j` with
/// `mu_{j+1} >= nu^{r-j} log det`. Returns the rank-`j` witness.
pub fn lambda_nu(profile: &HNProfile, nu: f64) -> Result<(usize, IntLattice)> {
    if !(nu > 0.0 && nu <= 0.5) {
        return Err(Error::OutOfRange(format!("nu = {nu} not in (0, 1/2]")));
    }
    if profile.gram_dets.last().unwrap() < &BigInt::one() {
        return Err(Error::DeterminantBelowOne);
    }
    let r = profile.rank();
    let d = profile
        .witnesses
        .last()
        .and_then(|w| w.first().map(|row| row.len()))
        .unwrap_or(r);
    for j in 0..r {
        if slope_at_least(profile, j, nu) {
            let w = &profile.witnesses[j];
            let l = if w.is_empty() {
                IntLattice::zero(d)
            } else {
                IntLattice::generated_by(d, w)
            };
            return Ok((j, l));
        }
    }
    // Unreachable for det >= 1; fall back to the whole lattice rank r-1 witness.
    Err(Error::Invariant("no rank satisfies the slope condition".into()))
}

/// `Lambda_zeta(nu)` together with the profile it came from.
pub fn torsion_lambda_nu(zeta: &TorsionPoint, nu: f64) -> Result<(HNProfile, usize, IntLattice)> {
    let l = lattice_of_torsion(zeta);
    let p = hn_profile(&l)?;
    let (j, lnu) = lambda_nu(&p, nu)?;
    Ok((p, j, lnu))
}

/// `min{ lambda_1(saturate(Lambda_zeta(nu))), N^{nu^d / 2} }` with the max-norm.
pub fn tilde_lambda(zeta: &TorsionPoint, nu: f64) -> Result<f64> {
    let (_, _, lnu) = torsion_lambda_nu(zeta, nu)?;
    let cap = (zeta.order() as f64).powf(nu.powi(zeta.dim() as i32) / 2.0);
    Ok(lnu.saturate().lambda1(Norm::Max).min(cap))
}

/// `rho(a)`: smallest max-norm of a nonzero integer vector orthogonal to `a`;
/// `None` stands for infinity (dimension one).
pub fn rho(a: &[i64]) -> Option<i64> {
    assert!(a.iter().any(|&x| x != 0), "rho needs a nonzero vector");
    if a.len() == 1 {
        return None;
    }
    let l = orthogonal_lattice(a);
    l.shortest_vector(Norm::Max).map(|v| matrix::max_norm(&v))
}

/// Audit of the lower bound `log|v|_2 >= nu^{rk(L / L(nu))} log det L` over all
/// vectors of `L` outside `L(nu)` up to the given squared radius. Returns the smallest
/// margin `log|v|_2 - bound` seen (infinite when no vector was checked).
pub fn audit_vlowerbound(
    lattice: &IntLattice,
    lnu: &IntLattice,
    nu: f64,
    radius_sq: i128,
) -> f64 {
    let i = lattice.rank() - lnu.rank();
    let bound = nu.powi(i as i32) * lattice.log_det();
    let mut margin = f64::INFINITY;
    for v in lattice.short_vectors(radius_sq) {
        if lnu.contains(&v) {
            continue;
        }
        let lv = 0.5 * (matrix::dot(&v, &v) as f64).ln();
        margin = margin.min(lv - bound);
    }
    margin
}

/// `2 nu^{1+i} log det L - log det L(nu)` (nonnegative when the bound holds).
pub fn audit_det_lambda_ub(lattice: &IntLattice, lnu: &IntLattice, nu: f64) -> f64 {
    let i = lattice.rank() - lnu.rank();
    let ld = if lnu.rank() == 0 { 0.0 } else { lnu.log_det() };
    2.0 * nu.powi(1 + i as i32) * lattice.log_det() - ld
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(b: &[i64], n: u64) -> TorsionPoint {
        TorsionPoint::new(b, n).unwrap()
    }

    #[test]
    fn min_det_examples() {
        let l = lattice_of_torsion(&z(&[4, 1], 8));
        let (ld, w) = min_det_sublattice(&l, 1).unwrap();
        assert!((ld - 2f64.ln()).abs() < 1e-15);
        assert_eq!(w.basis(), &vec![vec![2, 0]]);
        assert_eq!(min_det_sublattice(&l, 0).unwrap().0, 0.0);
        assert_eq!(min_det_sublattice(&IntLattice::standard(2), 2).unwrap().0, 0.0);
    }

    #[test]
    fn profile_of_skewed_point() {
        let n = 1u64 << 20;
        let l = lattice_of_torsion(&z(&[(n / 2) as i64, 1], n));
        let p = hn_profile(&l).unwrap();
        let ln2 = 2f64.ln();
        assert!((p.slopes[0] - ln2).abs() < 1e-12);
        assert!((p.slopes[1] - 19.0 * ln2).abs() < 1e-12);
        assert_eq!(p.jump_ranks, vec![1]);
        p.verify_exact().unwrap();
        let (j, lnu) = lambda_nu(&p, 0.25).unwrap();
        assert_eq!(j, 1);
        assert_eq!(lnu.basis(), &vec![vec![2, 0]]);
        let t = tilde_lambda(&z(&[(n / 2) as i64, 1], n), 0.25).unwrap();
        assert_eq!(t, 1.0);
    }

    #[test]
    fn trivial_profiles() {
        let p = hn_profile(&IntLattice::scaled_standard(3, 7)).unwrap();
        for s in &p.slopes {
            assert!((s - 7f64.ln()).abs() < 1e-12);
        }
        assert!(p.jump_ranks.is_empty());
        let p = hn_profile(&IntLattice::standard(2)).unwrap();
        assert_eq!(p.slopes, vec![0.0, 0.0]);
        // prime order in d = 1: Lambda(nu) = {0}
        let p = hn_profile(&lattice_of_torsion(&z(&[1], 13))).unwrap();
        assert_eq!(lambda_nu(&p, 0.3).unwrap().0, 0);
        let p = hn_profile(&lattice_of_torsion(&z(&[4, 1], 8))).unwrap();
        assert_eq!(lambda_nu(&p, 0.01).unwrap().0, 0);
    }

    #[test]
    fn tilde_lambda_trivial_branch() {
        let t = tilde_lambda(&z(&[1], 11), 0.25).unwrap();
        assert!((t - 11f64.powf(0.125)).abs() < 1e-12);
        let nu = 0.01;
        let t = tilde_lambda(&z(&[1, 1], 3), nu).unwrap();
        assert!((t - 3f64.powf(nu * nu / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&[1, 0]), Some(1));
        for n in [2, 5, 17] {
            assert_eq!(rho(&[1, n]), Some(n));
        }
        assert_eq!(rho(&[5]), None);
        assert_eq!(rho(&[2, 3, 5]), Some(1));
    }

    #[test]
    fn json_shape() {
        let p = hn_profile(&lattice_of_torsion(&z(&[4, 1], 8))).unwrap();
        let j = p.to_json();
        assert!(j["slopes"].is_array() && j["jumps"].is_array() && j["witnesses"].is_array());
    }
}
