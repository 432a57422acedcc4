//! Factorisation of a torsion point along its HN filtration, and the iterated monomial
//! change of coordinates built from it.

use serde::Serialize;

use super::base::{complete_to_unimodular, lattice_of_torsion, IntLattice, Norm};
use super::hn::{hn_profile, lambda_nu};
use super::matrix::{self, Mat};
use crate::arith;
use crate::error::{Error, Result};
use crate::galois::{delta_point, GaloisSubgroup, TorsionPoint};

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationResult {
    pub eta: TorsionPoint,
    pub xi: TorsionPoint,
    /// `ord(eta)`.
    pub e: u64,
    /// `ord(xi)`.
    pub m: u64,
    pub v: Mat,
    /// `rk(Lambda / Lambda(nu))`.
    pub i: usize,
    /// Last `i` coordinates of `xi^V`.
    pub xi_prime: TorsionPoint,
    /// `xi' = e(a sigma / M)` with `|a|` minimal over the chosen subgroup.
    pub a: Vec<i64>,
    pub sigma: u64,
    /// Saturation of `Lambda_zeta(nu)`.
    pub saturated: IntLattice,
    pub delta_xi: i64,
    /// `d^{-1/2} min{lambda_1(saturation), N^{nu^d / 2}}`.
    pub delta_lower_bound: f64,
}

/// Nearest-to-identity conjugate: over `sigma` in `h` (a subgroup of `Gamma_M`) picks
/// `a = b' sigma^{-1}` reduced into `(-M/2, M/2]` with smallest max-norm, ties to the
/// smallest `sigma`.
pub fn near_identity_conjugate(xi: &TorsionPoint, h: &GaloisSubgroup) -> Result<(Vec<i64>, u64)> {
    let m = xi.order();
    if h.modulus() != m {
        return Err(Error::OrderMismatch {
            group: h.modulus(),
            point: m,
        });
    }
    let mi = m as i64;
    let mut best: Option<(i64, Vec<i64>, u64)> = None;
    for &s in h.elements() {
        let inv = arith::mod_inv(s as i64, mi.max(1)).unwrap_or(0);
        let a: Vec<i64> = xi
            .residues()
            .iter()
            .map(|&r| {
                let x = (r as i128 * inv as i128).rem_euclid(m as i128) as i64;
                if 2 * x > mi {
                    x - mi
                } else {
                    x
                }
            })
            .collect();
        let norm = matrix::max_norm(&a);
        if best.as_ref().is_none_or(|(n, _, _)| norm < *n) {
            best = Some((norm, a, s));
        }
    }
    let (_, a, s) = best.expect("subgroups are nonempty");
    Ok((a, s))
}

/// Splits `zeta = eta * xi` along `Lambda_zeta(nu)` and machine-checks the resulting
/// bounds. `h` is a subgroup of `Gamma_M` with `M = ord(xi)`; `None` means all of
/// `Gamma_M`.
pub fn factor_torsion(
    zeta: &TorsionPoint,
    nu: f64,
    h: Option<&GaloisSubgroup>,
) -> Result<FactorizationResult> {
    if !(nu > 0.0 && nu <= 0.25) {
        return Err(Error::OutOfRange(format!("nu = {nu} not in (0, 1/4]")));
    }
    let d = zeta.dim();
    let n = zeta.order();
    let lattice = lattice_of_torsion(zeta);
    let profile = hn_profile(&lattice)?;
    let (j, lnu) = lambda_nu(&profile, nu)?;
    let i = d - j;
    let saturated = lnu.saturate();

    let (eta, xi, v) = if j == 0 {
        (TorsionPoint::identity(d), zeta.clone(), matrix::identity(d))
    } else {
        let v = complete_to_unimodular(saturated.basis(), d)?;
        let v_inv = matrix::inverse_unimodular(&v).ok_or(Error::NotUnimodular)?;
        // V is unimodular, so zeta^V keeps order N and its residues are over N
        let c: Vec<i64> = zeta
            .pow_matrix(&v)
            .residues()
            .iter()
            .map(|&x| x as i64)
            .collect();
        let head: Vec<i64> = (0..d).map(|k| if k < j { c[k] } else { 0 }).collect();
        let tail: Vec<i64> = (0..d).map(|k| if k < j { 0 } else { c[k] }).collect();
        let eta = TorsionPoint::normalized(&reduce(&matrix::vec_mat(&head, &v_inv), n), n);
        let xi = TorsionPoint::normalized(&reduce(&matrix::vec_mat(&tail, &v_inv), n), n);
        (eta, xi, v)
    };
    let e = eta.order();
    let m = xi.order();
    let xi_v = xi.pow_matrix(&v);
    let xi_prime = xi_v.project(j..d);

    let full;
    let h = match h {
        Some(h) => h,
        None => {
            full = GaloisSubgroup::full(m);
            &full
        }
    };
    let (a, sigma) = near_identity_conjugate(&xi_prime, h)?;

    let lambda_sat = saturated.lambda1(Norm::Max);
    let cap = (n as f64).powf(nu.powi(d as i32) / 2.0);
    let delta_lower_bound = lambda_sat.min(cap) / (d as f64).sqrt();
    let delta_xi = delta_point(&xi);

    let res = FactorizationResult {
        eta,
        xi,
        e,
        m,
        v,
        i,
        xi_prime,
        a,
        sigma,
        saturated,
        delta_xi,
        delta_lower_bound,
    };
    res.check(zeta, nu)?;
    Ok(res)
}

fn reduce(v: &[i64], n: u64) -> Vec<i64> {
    v.iter().map(|x| x.rem_euclid(n as i64)).collect()
}

impl FactorizationResult {
    /// Re-verifies every structural claim against `zeta`.
    pub fn check(&self, zeta: &TorsionPoint, nu: f64) -> Result<()> {
        let n = zeta.order();
        let d = zeta.dim();
        let fail = |s: &str| Err(Error::Invariant(format!("factorisation: {s}")));
        if self.eta.mul(&self.xi) != *zeta {
            return fail("zeta != eta xi");
        }
        if !n.is_multiple_of(self.e) || !n.is_multiple_of(self.m) {
            return fail("orders do not divide N");
        }
        let bound = 2.0 * nu.powi(1 + self.i as i32) * (n as f64).ln();
        if (self.e as f64).ln() > bound * (1.0 + 1e-12) + 1e-12 {
            return fail("E exceeds N^{2 nu^{1+i}}");
        }
        if matrix::det(&self.v).magnitude() != &num_bigint::BigUint::from(1u8) {
            return fail("V not unimodular");
        }
        let xi_v = self.xi.pow_matrix(&self.v);
        let j = d - self.i;
        let lifted = xi_v.order();
        if xi_v.residues()[..j].iter().any(|&x| x != 0) {
            return fail("xi^V has a nontrivial leading coordinate");
        }
        if lifted != self.m || self.xi_prime.order() != self.m {
            return fail("xi' has the wrong order");
        }
        let mi = self.m as i64;
        if matrix::max_norm(&self.a) >= mi.max(1) && self.m > 1 {
            return fail("|a| >= M");
        }
        for (k, &r) in self.xi_prime.residues().iter().enumerate() {
            let want = (self.a[k] as i128 * self.sigma as i128).rem_euclid(self.m as i128) as u64;
            if want != r {
                return fail("xi' != e(a sigma / M)");
            }
        }
        if (self.delta_xi as f64) < self.delta_lower_bound * (1.0 - 1e-12) {
            return fail("delta(xi) below the lower bound");
        }
        if self.i == d {
            let id = matrix::identity(d);
            if !self.eta.is_identity() || self.xi != *zeta || self.v != id || self.m != n {
                return fail("Lambda(nu) = 0 must give the identity branch");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonomialChange {
    pub l: usize,
    pub v: Mat,
    /// `(eta_1, ..., eta_l)`, `None` when `l = 0`.
    pub eta: Option<TorsionPoint>,
    pub xi: TorsionPoint,
    /// Split vectors `v_1, ..., v_l`.
    pub split_vectors: Vec<Vec<i64>>,
    /// `max |V|` entry.
    pub v_norm: i64,
    /// `delta^{eps^{d-1} + ... + eps^{d-l}}`.
    pub v_bound: f64,
}

/// Iteratively splits off one coordinate while the saturated `Lambda_{xi_l}(nu_l)` has a
/// vector of max-norm at most `delta^{eps^{d-l}}`.
pub fn monomial_change(
    zeta: &TorsionPoint,
    delta: f64,
    eps: f64,
    nus: &[f64],
) -> Result<MonomialChange> {
    let d = zeta.dim();
    let n = zeta.order();
    if !(delta >= 1.0) {
        return Err(Error::OutOfRange(format!("delta = {delta} < 1")));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::OutOfRange(format!("eps = {eps} not in (0, 1/2]")));
    }
    if nus.len() != d - 1 {
        return Err(Error::DimensionMismatch {
            expected: d - 1,
            found: nus.len(),
        });
    }
    if nus.iter().any(|&x| !(x > 0.0 && x <= 0.5)) || nus.iter().sum::<f64>() > 0.5 + 1e-15 {
        return Err(Error::OutOfRange("need nu_i in (0, 1/2] with sum <= 1/2".into()));
    }
    let mut v = matrix::identity(d);
    let mut xi = zeta.clone();
    let mut etas: Vec<i64> = Vec::new();
    let mut splits = Vec::new();
    let mut v_exp = 0.0;
    let mut l = 0;
    while l < d - 1 {
        let step = l + 1;
        let k = d + 1 - step;
        let threshold = delta.powf(eps.powi((d - step) as i32));
        let lat = lattice_of_torsion(&xi);
        let (_, lnu) = lambda_nu(&hn_profile(&lat)?, nus[step - 1])?;
        let sat = lnu.saturate();
        let Some(w) = sat.shortest_vector(Norm::Max) else {
            break;
        };
        if matrix::max_norm(&w) as f64 > threshold {
            break;
        }
        let vp = complete_to_unimodular(std::slice::from_ref(&w), k)?;
        let mut block = matrix::identity(d);
        for r in 0..k {
            for c in 0..k {
                block[step - 1 + r][step - 1 + c] = vp[r][c];
            }
        }
        v = matrix::matmul(&v, &block);
        // eta_l = xi_l^w, as a residue mod N
        etas.push(lift(&xi, n, std::slice::from_ref(&w))[0]);
        xi = xi.pow_matrix(&vp).project(1..k);
        splits.push(w);
        v_exp += eps.powi((d - step) as i32);
        l = step;
    }
    let eta = (l > 0).then(|| TorsionPoint::normalized(&etas, n));
    let res = MonomialChange {
        l,
        v_norm: matrix::mat_max_norm(&v),
        v_bound: delta.powf(v_exp),
        v,
        eta,
        xi,
        split_vectors: splits,
    };
    res.check(zeta, delta, eps, nus)?;
    Ok(res)
}

/// Residues of `xi^{w}` for each `w`, expressed over denominator `n` (a multiple of
/// `ord(xi)`).
fn lift(xi: &TorsionPoint, n: u64, ws: &[Vec<i64>]) -> Vec<i64> {
    let s = (n / xi.order()) as i64;
    ws.iter().map(|w| xi.pairing(w) as i64 * s).collect()
}

impl MonomialChange {
    pub fn check(&self, zeta: &TorsionPoint, delta: f64, eps: f64, nus: &[f64]) -> Result<()> {
        let d = zeta.dim();
        let n = zeta.order();
        let fail = |s: &str| Err(Error::Invariant(format!("monomial change: {s}")));
        if matrix::inverse_unimodular(&self.v).is_none() {
            return fail("V not unimodular");
        }
        if self.l == 0 && self.v != matrix::identity(d) {
            return fail("l = 0 requires V = identity");
        }
        let zv = zeta.pow_matrix(&self.v);
        let s = n / zv.order();
        let full: Vec<i64> = zv.residues().iter().map(|&x| (x * s) as i64).collect();
        let head = &full[..self.l];
        let tail = &full[self.l..];
        if let Some(eta) = &self.eta {
            if *eta != TorsionPoint::normalized(head, n) {
                return fail("zeta^V does not start with eta");
            }
            let bound: f64 = nus[..self.l].iter().sum::<f64>() * (n as f64).ln();
            if (eta.order() as f64).ln() > bound * (1.0 + 1e-12) + 1e-12 {
                return fail("ord(eta) exceeds N^{nu_1 + ... + nu_l}");
            }
        }
        if self.xi != TorsionPoint::normalized(tail, n) {
            return fail("zeta^V does not end with xi");
        }
        for (step, w) in self.split_vectors.iter().enumerate() {
            let t = delta.powf(eps.powi((d - step - 1) as i32));
            if matrix::max_norm(w) as f64 > t {
                return fail("split vector above threshold");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(b: &[i64], n: u64) -> TorsionPoint {
        TorsionPoint::new(b, n).unwrap()
    }

    #[test]
    fn prime_order_is_trivial() {
        for p in [7u64, 101, 997] {
            let f = factor_torsion(&z(&[1, 5], p), 0.25, None).unwrap();
            assert_eq!(f.e, 1);
            assert_eq!(f.xi, z(&[1, 5], p));
        }
    }

    #[test]
    fn identity_branch() {
        let zeta = z(&[4, 1], 8);
        let f = factor_torsion(&zeta, 0.01, None).unwrap();
        assert_eq!(f.i, 2);
        assert_eq!(f.xi, zeta);
        assert_eq!(f.e, 1);
        assert_eq!(f.v, matrix::identity(2));
    }

    #[test]
    fn skewed_point_splits() {
        let n = 1u64 << 20;
        let zeta = z(&[(n / 2) as i64, 1], n);
        let f = factor_torsion(&zeta, 0.25, None).unwrap();
        assert!(f.e == 1 || f.e == 2);
        assert_eq!(f.eta.mul(&f.xi), zeta);
        assert_eq!(f.i, 1);
    }

    #[test]
    fn monomial_change_examples() {
        let n = 1u64 << 20;
        let zeta = z(&[(n / 2) as i64, 1], n);
        let delta = 1024.0;
        let r = monomial_change(&zeta, delta, 0.25, &[0.25]).unwrap();
        assert_eq!(r.l, 1);
        assert_eq!(r.split_vectors, vec![vec![1, 0]]);
        assert!(r.eta.as_ref().unwrap().order() as f64 <= (n as f64).powf(0.25));
        let r = monomial_change(&zeta, delta, 0.25, &[0.125]).unwrap();
        assert_eq!(r.l, 0);
        assert_eq!(r.v, matrix::identity(2));
        let r = monomial_change(&z(&[3], 7), 10.0, 0.5, &[]).unwrap();
        assert_eq!(r.l, 0);
    }
}
