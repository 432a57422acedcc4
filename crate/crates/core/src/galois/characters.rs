use num_complex::Complex64;
use serde::Serialize;

use super::subgroup::{all_subgroups, GaloisSubgroup};
use crate::arith::{self, euler_phi, factorize, gcd_u, lcm_u, primitive_root_odd_prime_power};
use crate::error::Result;

/// Cyclic decomposition of `Gamma_N` as `(generator, order)` pairs: one smallest
/// primitive root per odd prime power, and `-1`, `3` for the `2^k` part, lifted by CRT.
pub fn cyclic_decomposition(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let lift = |residue: u64, q: u64| -> u64 {
        // x = residue mod q, x = 1 mod n / q
        let r = n / q;
        if r == 1 {
            return residue % q;
        }
        let inv = arith::mod_inv(r as i64, q as i64).unwrap() as u128;
        let t = ((residue as u128 + q as u128 - 1) % q as u128) * inv % q as u128;
        ((1 + r as u128 * t) % n as u128) as u64
    };
    for (p, k) in factorize(n) {
        let q = p.pow(k);
        if p == 2 {
            if k >= 2 {
                out.push((lift(q - 1, q), 2));
            }
            if k >= 3 {
                out.push((lift(3, q), q / 4));
            }
        } else {
            out.push((lift(primitive_root_odd_prime_power(p, k), q), q / p * (p - 1)));
        }
    }
    out
}

/// Discrete logs of every unit in terms of [`cyclic_decomposition`].
#[derive(Debug, Clone)]
pub struct UnitLogs {
    n: u64,
    gens: Vec<(u64, u64)>,
    logs: Vec<Option<Vec<u64>>>,
}

impl UnitLogs {
    pub fn new(n: u64) -> Self {
        let gens = cyclic_decomposition(n);
        let mut logs = vec![None; n as usize];
        let mut exps = vec![0u64; gens.len()];
        let mut x = 1 % n;
        // odometer over exponent tuples, updating x multiplicatively
        loop {
            logs[x as usize] = Some(exps.clone());
            let mut i = 0;
            loop {
                if i == gens.len() {
                    return UnitLogs { n, gens, logs };
                }
                exps[i] += 1;
                x = ((x as u128 * gens[i].0 as u128) % n as u128) as u64;
                if exps[i] < gens[i].1 {
                    break;
                }
                // g^ord = 1, so x is already back to its value before this digit moved
                exps[i] = 0;
                i += 1;
            }
        }
    }

    pub fn generators(&self) -> &[(u64, u64)] {
        &self.gens
    }

    pub fn log(&self, s: u64) -> Option<&[u64]> {
        self.logs[(s % self.n) as usize].as_deref()
    }
}

/// Dirichlet character mod `N`: `chi(g_i) = e(images[i] / ord(g_i))`.
#[derive(Debug, Clone, Serialize)]
pub struct DirichletCharacter {
    pub n: u64,
    pub images: Vec<u64>,
    /// Exponent of `Gamma_N`; values are `e(phase / exponent)`.
    exponent: u64,
    #[serde(skip)]
    phase: Vec<Option<u64>>,
}

impl DirichletCharacter {
    pub fn from_images(logs: &UnitLogs, images: &[u64]) -> Self {
        let n = logs.n;
        let exponent = logs.gens.iter().fold(1, |a, &(_, o)| lcm_u(a, o));
        let phase = (0..n)
            .map(|s| {
                logs.log(s).map(|e| {
                    e.iter()
                        .zip(images)
                        .zip(&logs.gens)
                        .map(|((&ei, &ki), &(_, o))| ei * ki % o * (exponent / o))
                        .sum::<u64>()
                        % exponent
                })
            })
            .collect();
        DirichletCharacter {
            n,
            images: images.to_vec(),
            exponent,
            phase,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&k| k == 0)
    }

    /// `chi(s)`, zero when `s` is not a unit.
    pub fn value(&self, s: u64) -> Complex64 {
        match self.phase[(s % self.n) as usize] {
            Some(p) => arith::e_frac(p as i64, self.exponent),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn kernel(&self) -> GaloisSubgroup {
        let elems: Vec<u64> = (0..self.n)
            .filter(|&s| self.phase[s as usize] == Some(0))
            .collect();
        GaloisSubgroup::from_elements(self.n, elems).expect("kernels are subgroups")
    }

    pub fn order(&self) -> u64 {
        self.phase
            .iter()
            .flatten()
            .fold(1, |a, &p| lcm_u(a, self.exponent / gcd_u(self.exponent, p)))
    }
}

/// All `phi(N)` characters mod `N`, the trivial one first.
pub fn enumerate_characters(n: u64) -> Vec<DirichletCharacter> {
    let logs = UnitLogs::new(n);
    let orders: Vec<u64> = logs.gens.iter().map(|&(_, o)| o).collect();
    let mut out = Vec::with_capacity(euler_phi(n) as usize);
    let mut k = vec![0u64; orders.len()];
    loop {
        out.push(DirichletCharacter::from_images(&logs, &k));
        let mut i = 0;
        loop {
            if i == k.len() {
                return out;
            }
            k[i] += 1;
            if k[i] < orders[i] {
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

/// `f_chi`, the conductor of `ker chi`.
pub fn char_conductor(chi: &DirichletCharacter) -> u64 {
    chi.kernel().conductor()
}

/// `tau = sum_{sigma in Gamma_N} chi(sigma) e(k sigma / N)` by direct compensated
/// summation.
pub fn gauss_sum(chi: &DirichletCharacter, k: i64) -> Complex64 {
    let n = chi.n;
    let mut re = arith::KahanSum::new();
    let mut im = arith::KahanSum::new();
    for s in arith::units_mod(n) {
        let t = chi.value(s) * arith::e_frac(((k as i128 * s as i128).rem_euclid(n as i128)) as i64, n);
        re.add(t.re);
        im.add(t.im);
    }
    Complex64::new(re.value(), im.value())
}

/// `sum_{sigma in G} e(k sigma / N)`.
pub fn subgroup_exp_sum(g: &GaloisSubgroup, k: i64) -> Complex64 {
    let n = g.modulus();
    let mut re = arith::KahanSum::new();
    let mut im = arith::KahanSum::new();
    for &s in g.elements() {
        let t = arith::e_frac(((k as i128 * s as i128).rem_euclid(n as i128)) as i64, n);
        re.add(t.re);
        im.add(t.im);
    }
    Complex64::new(re.value(), im.value())
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussAuditRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub chi_id: usize,
    pub k: u64,
    pub tau_abs: f64,
    pub bound: f64,
}

impl GaussAuditRow {
    pub fn ok(&self) -> bool {
        self.tau_abs <= self.bound + 1e-9
    }
}

/// `|tau(chi, k)|` against `(phi(N) / phi(N')) f_chi^{1/2}` with `N' = N / gcd(k, N)`,
/// for every character and `k` mod `N`.
pub fn gauss_audit(n: u64) -> Vec<GaussAuditRow> {
    let chars = enumerate_characters(n);
    let mut out = Vec::new();
    for (id, chi) in chars.iter().enumerate() {
        let f = char_conductor(chi) as f64;
        for k in 0..n {
            let np = n / gcd_u(k, n);
            let bound = euler_phi(n) as f64 / euler_phi(np) as f64 * f.sqrt();
            out.push(GaussAuditRow {
                n,
                chi_id: id,
                k,
                tau_abs: gauss_sum(chi, k as i64).norm(),
                bound,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupSumRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub subgroup: String,
    pub k: u64,
    pub lhs: f64,
    pub bound: f64,
}

/// `|sum_{sigma in G} e(k sigma / N)| / #G` against `([Gamma_N : G] / phi(N')) f_G^{1/2}`
/// for every subgroup of `Gamma_N`.
pub fn subgroup_sum_audit(n: u64) -> Result<Vec<SubgroupSumRow>> {
    let mut out = Vec::new();
    for g in all_subgroups(n)? {
        let f = g.conductor() as f64;
        for k in 0..n {
            let np = n / gcd_u(k, n);
            out.push(SubgroupSumRow {
                n,
                subgroup: g.to_string(),
                k,
                lhs: subgroup_exp_sum(&g, k as i64).norm() / g.order() as f64,
                bound: g.index() as f64 / euler_phi(np) as f64 * f.sqrt(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_generates() {
        for n in 1..=200u64 {
            let d = cyclic_decomposition(n);
            let prod: u64 = d.iter().map(|&(_, o)| o).product();
            assert_eq!(prod, euler_phi(n), "n = {n}");
            for &(g, o) in &d {
                assert_eq!(arith::mult_order(g, n), o, "n = {n}, g = {g}");
            }
            let logs = UnitLogs::new(n);
            assert!(arith::units_mod(n).iter().all(|&s| logs.log(s).is_some()));
        }
    }

    #[test]
    fn characters_mod_5_and_8() {
        let c = enumerate_characters(5);
        assert_eq!(c.len(), 4);
        let mut f: Vec<u64> = c.iter().map(char_conductor).collect();
        f.sort();
        assert_eq!(f, vec![1, 5, 5, 5]);
        assert_eq!(enumerate_characters(8).len(), 4);
        assert_eq!(char_conductor(&enumerate_characters(36)[0]), 1);
    }

    #[test]
    fn gauss_sums() {
        let c = enumerate_characters(5);
        let quartic = c.iter().find(|x| x.order() == 4).unwrap();
        assert!((gauss_sum(quartic, 1).norm() - 5f64.sqrt()).abs() < 1e-9);
        let t = gauss_sum(&c[0], 1);
        assert!((t.re + 1.0).abs() < 1e-12 && t.im.abs() < 1e-12);
        for n in [7u64, 12] {
            for chi in enumerate_characters(n) {
                let t = gauss_sum(&chi, 0);
                let want = if chi.is_trivial() { euler_phi(n) as f64 } else { 0.0 };
                assert!((t - want).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn characters_are_distinct() {
        let c = enumerate_characters(24);
        for i in 0..c.len() {
            for j in 0..i {
                assert_ne!(c[i].phase, c[j].phase);
            }
        }
    }
}
