use serde::Serialize;
use std::collections::BTreeSet;

use super::torsion::TorsionPoint;
use crate::arith::lcm_u;
use crate::error::{Error, Result};
use crate::lattice::{kernel_mod, lattice_of_torsion, matrix, Norm};

/// Enumeration cap for finite subgroups of the torus.
pub const TORUS_GROUP_CAP: usize = 1_000_000;

/// `delta(zeta)`: smallest max-norm of a nonzero `a` with `zeta^a = 1`.
pub fn delta_point(zeta: &TorsionPoint) -> i64 {
    let v = lattice_of_torsion(zeta)
        .shortest_vector(Norm::Max)
        .expect("torsion lattices have full rank");
    matrix::max_norm(&v)
}

/// Box search for `delta(zeta)` up to `max`; `None` when nothing was found.
pub fn delta_point_brute(zeta: &TorsionPoint, max: i64) -> Option<i64> {
    let d = zeta.dim();
    for r in 1..=max {
        // any vector with max-norm exactly r
        let side = 2 * r + 1;
        let total = (side as u128).pow(d as u32);
        for idx in 0..total {
            let mut t = idx;
            let a: Vec<i64> = (0..d)
                .map(|_| {
                    let x = (t % side as u128) as i64 - r;
                    t /= side as u128;
                    x
                })
                .collect();
            if matrix::max_norm(&a) == r && zeta.annihilated_by(&a) {
                return Some(r);
            }
        }
    }
    None
}

/// Finite subgroup of `G_m^d` generated by torsion points.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteTorusSubgroup {
    d: usize,
    generators: Vec<TorsionPoint>,
    /// Common denominator of all elements.
    exponent: u64,
    elements: Vec<TorsionPoint>,
}

impl FiniteTorusSubgroup {
    pub fn new(generators: Vec<TorsionPoint>) -> Result<Self> {
        let d = generators
            .first()
            .map(|g| g.dim())
            .ok_or_else(|| Error::InvalidTorsion("need at least one generator".into()))?;
        if let Some(g) = generators.iter().find(|g| g.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: g.dim(),
            });
        }
        let bound: u128 = generators.iter().map(|g| g.order() as u128).product();
        let exponent = generators.iter().fold(1, |a, g| lcm_u(a, g.order()));
        let lift = |g: &TorsionPoint| -> Vec<u64> {
            let s = exponent / g.order();
            g.residues().iter().map(|&x| x * s).collect()
        };
        let gens: Vec<Vec<u64>> = generators.iter().map(lift).collect();
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::from([vec![0; d]]);
        let mut frontier = vec![vec![0; d]];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| (a + b) % exponent).collect();
                if seen.insert(y.clone()) {
                    if seen.len() > TORUS_GROUP_CAP {
                        return Err(Error::GroupTooLarge {
                            size: bound,
                            cap: TORUS_GROUP_CAP as u128,
                        });
                    }
                    frontier.push(y);
                }
            }
        }
        if !bound.is_multiple_of(seen.len() as u128) {
            return Err(Error::Invariant(
                "group order does not divide the product of generator orders".into(),
            ));
        }
        let elements = seen
            .into_iter()
            .map(|r| {
                let r: Vec<i64> = r.into_iter().map(|x| x as i64).collect();
                TorsionPoint::normalized(&r, exponent)
            })
            .collect();
        Ok(FiniteTorusSubgroup {
            d,
            generators,
            exponent,
            elements,
        })
    }

    /// `mu_N^d`.
    pub fn full_torsion(n: u64, d: usize) -> Result<Self> {
        let gens = (0..d)
            .map(|i| {
                let b: Vec<i64> = (0..d).map(|j| i64::from(i == j)).collect();
                TorsionPoint::new(&b, n)
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteTorusSubgroup::new(gens)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[TorsionPoint] {
        &self.generators
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn elements(&self) -> &[TorsionPoint] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// `delta(G)`: max-norm first minimum of the intersection of all `Lambda_zeta`.
pub fn delta_group(g: &FiniteTorusSubgroup) -> i64 {
    let rel: Vec<(Vec<i64>, u64)> = g
        .generators()
        .iter()
        .map(|z| (z.residues().iter().map(|&x| x as i64).collect(), z.order()))
        .collect();
    let v = kernel_mod(&rel, g.dim())
        .shortest_vector(Norm::Max)
        .expect("full rank");
    matrix::max_norm(&v)
}

/// `#{zeta in G : zeta^a = 1}`.
pub fn count_kernel(g: &FiniteTorusSubgroup, a: &[i64]) -> Result<usize> {
    if a.iter().all(|&x| x == 0) {
        return Err(Error::OutOfRange("a must be nonzero".into()));
    }
    if a.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: a.len(),
        });
    }
    Ok(g.elements().iter().filter(|z| z.annihilated_by(a)).count())
}

/// `#{zeta in G : delta(zeta) <= T}`.
pub fn count_small_delta(g: &FiniteTorusSubgroup, t: f64) -> usize {
    g.elements()
        .iter()
        .filter(|z| delta_point(z) as f64 <= t)
        .count()
}

/// One enumerated instance of the finite-group counting inequalities.
#[derive(Debug, Clone, Serialize)]
pub struct CountingAudit {
    pub order: usize,
    pub delta_g: i64,
    /// Worst `|a| / delta(G) - count / #G` over the tested `a` (nonnegative when it holds).
    pub kernel_margin: f64,
    /// Worst `3^d T^{d+1} / delta(G) - count / #G` over the tested `T`.
    pub small_delta_margin: f64,
    /// Worst `4^d delta(G)^{-kappa/(d+1+kappa)} - mean delta^{-kappa}` over tested `kappa`.
    pub moment_margin: f64,
}

impl CountingAudit {
    pub fn ok(&self) -> bool {
        self.kernel_margin >= -1e-12 && self.small_delta_margin >= -1e-12 && self.moment_margin >= -1e-12
    }
}

/// Checks the three counting inequalities on `g`: all `a` with `|a| <= a_max`, the
/// thresholds `T` in `ts`, and the exponents `kappa` in `kappas`.
pub fn counting_audit(
    g: &FiniteTorusSubgroup,
    a_max: i64,
    ts: &[f64],
    kappas: &[f64],
) -> CountingAudit {
    let d = g.dim();
    let n = g.order() as f64;
    let dg = delta_group(g);
    let deltas: Vec<i64> = g.elements().iter().map(delta_point).collect();

    let mut kernel_margin = f64::INFINITY;
    let side = 2 * a_max + 1;
    for idx in 0..(side as u64).pow(d as u32) {
        let mut t = idx;
        let a: Vec<i64> = (0..d)
            .map(|_| {
                let x = (t % side as u64) as i64 - a_max;
                t /= side as u64;
                x
            })
            .collect();
        if a.iter().all(|&x| x == 0) {
            continue;
        }
        let c = g.elements().iter().filter(|z| z.annihilated_by(&a)).count() as f64;
        kernel_margin = kernel_margin.min(matrix::max_norm(&a) as f64 / dg as f64 - c / n);
    }

    let mut small_delta_margin = f64::INFINITY;
    for &t in ts {
        let c = deltas.iter().filter(|&&x| x as f64 <= t).count() as f64;
        let bound = 3f64.powi(d as i32) * t.powi(d as i32 + 1) / dg as f64;
        small_delta_margin = small_delta_margin.min(bound - c / n);
    }

    let mut moment_margin = f64::INFINITY;
    for &k in kappas {
        let mean = crate::arith::kahan_sum(deltas.iter().map(|&x| (x as f64).powf(-k))) / n;
        let bound = 4f64.powi(d as i32) * (dg as f64).powf(-k / (d as f64 + 1.0 + k));
        moment_margin = moment_margin.min(bound - mean);
    }

    CountingAudit {
        order: g.order(),
        delta_g: dg,
        kernel_margin,
        small_delta_margin,
        moment_margin,
    }
}
