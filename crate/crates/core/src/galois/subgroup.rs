use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::arith::{self, divisors, euler_phi, gcd_u, units_mod};
use crate::error::{Error, Result};

/// Largest modulus for which [`all_subgroups`] is offered.
pub const SUBGROUP_ENUM_CAP: u64 = 40;

/// Subgroup of `Gamma_N = (Z/NZ)^x` given by generators. Equality ignores the choice of
/// generators.
#[derive(Debug, Clone, Serialize)]
pub struct GaloisSubgroup {
    n: u64,
    generators: Vec<u64>,
    elements: Vec<u64>,
}

impl PartialEq for GaloisSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.elements == other.elements
    }
}

impl Eq for GaloisSubgroup {}

impl std::hash::Hash for GaloisSubgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.elements.hash(state);
    }
}

impl GaloisSubgroup {
    pub fn new(n: u64, generators: &[u64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSubgroup("modulus must be positive".into()));
        }
        let gens: Vec<u64> = generators.iter().map(|&g| g % n).collect();
        if let Some(&g) = gens.iter().find(|&&g| gcd_u(g, n) != 1 && n != 1) {
            return Err(Error::InvalidSubgroup(format!("{g} is not a unit mod {n}")));
        }
        let one = 1 % n;
        let mut elems: BTreeSet<u64> = BTreeSet::from([one]);
        let mut frontier = vec![one];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = ((x as u128 * g as u128) % n as u128) as u64;
                if elems.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(GaloisSubgroup {
            n,
            generators: gens,
            elements: elems.into_iter().collect(),
        })
    }

    /// All of `Gamma_N`.
    pub fn full(n: u64) -> Self {
        let elements = units_mod(n);
        GaloisSubgroup {
            n,
            generators: elements.clone(),
            elements,
        }
    }

    pub fn trivial(n: u64) -> Self {
        GaloisSubgroup::new(n, &[]).unwrap()
    }

    /// Subgroup with an explicit, already closed element list.
    pub fn from_elements(n: u64, mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        // greedy generators keep the closure near-linear in #G
        let mut gens = Vec::new();
        let mut g = GaloisSubgroup::trivial(n);
        for &s in &elements {
            if !g.contains(s) {
                gens.push(s);
                g = GaloisSubgroup::new(n, &gens)?;
            }
        }
        if g.elements != elements {
            return Err(Error::InvalidSubgroup("element list is not closed".into()));
        }
        Ok(g)
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Sorted element list.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.elements.binary_search(&(s % self.n)).is_ok()
    }

    /// `[Gamma_N : G]`.
    pub fn index(&self) -> u64 {
        euler_phi(self.n) / self.elements.len() as u64
    }

    /// Whether `ker(Gamma_N -> Gamma_f)` lies in this subgroup.
    pub fn contains_kernel_to(&self, f: u64) -> bool {
        units_mod(self.n)
            .into_iter()
            .filter(|&s| s % f == 1 % f)
            .all(|s| self.contains(s))
    }

    /// Least `f | N` with `ker(Gamma_N -> Gamma_f)` contained in the subgroup.
    pub fn conductor(&self) -> u64 {
        divisors(self.n)
            .into_iter()
            .find(|&f| self.contains_kernel_to(f))
            .expect("f = N always works")
    }

    /// Image under reduction `Gamma_N -> Gamma_m` for `m | N`.
    pub fn reduce_mod(&self, m: u64) -> Result<GaloisSubgroup> {
        if !self.n.is_multiple_of(m) {
            return Err(Error::InvalidSubgroup(format!("{m} does not divide {}", self.n)));
        }
        let elems: BTreeSet<u64> = self.elements.iter().map(|&s| s % m).collect();
        GaloisSubgroup::from_elements(m, elems.into_iter().collect())
    }

    /// `{sigma mod m : sigma in G, sigma = 1 mod e}` for `m, e | N`.
    pub fn restrict_reduce(&self, e: u64, m: u64) -> Result<GaloisSubgroup> {
        if !self.n.is_multiple_of(m) || !self.n.is_multiple_of(e) {
            return Err(Error::InvalidSubgroup("moduli must divide N".into()));
        }
        let elems: BTreeSet<u64> = self
            .elements
            .iter()
            .filter(|&&s| s % e == 1 % e)
            .map(|&s| s % m)
            .collect();
        GaloisSubgroup::from_elements(m, elems.into_iter().collect())
    }
}

impl fmt::Display for GaloisSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elements.len() as u64 == euler_phi(self.n) {
            return write!(f, "{}:*", self.n);
        }
        let g: Vec<String> = self.generators.iter().map(|x| x.to_string()).collect();
        write!(f, "{}:{}", self.n, g.join(","))
    }
}

impl FromStr for GaloisSubgroup {
    type Err = Error;

    /// `N:g1,g2,...`, or `N:*` for the full group.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidSubgroup(format!("{m} in {s:?}"));
        let (n, rest) = s.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let n: u64 = n.trim().parse().map_err(|_| bad("bad modulus"))?;
        if n == 0 {
            return Err(bad("zero modulus"));
        }
        let rest = rest.trim();
        if rest == "*" {
            return Ok(GaloisSubgroup::full(n));
        }
        if rest.is_empty() {
            return Ok(GaloisSubgroup::trivial(n));
        }
        let gens = rest
            .split(',')
            .map(|g| g.trim().parse::<u64>().map_err(|_| bad("bad generator")))
            .collect::<Result<Vec<_>>>()?;
        GaloisSubgroup::new(n, &gens)
    }
}

/// Every subgroup of `Gamma_N`, found by closing under adjoining one element at a time.
pub fn all_subgroups(n: u64) -> Result<Vec<GaloisSubgroup>> {
    if n > SUBGROUP_ENUM_CAP {
        return Err(Error::OutOfRange(format!(
            "subgroup enumeration capped at N <= {SUBGROUP_ENUM_CAP}"
        )));
    }
    let units = units_mod(n);
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = vec![GaloisSubgroup::trivial(n)];
    while let Some(g) = queue.pop() {
        if !seen.insert(g.elements.clone()) {
            continue;
        }
        for &u in &units {
            if !g.contains(u) {
                let mut gens = g.generators.clone();
                gens.push(u);
                queue.push(GaloisSubgroup::new(n, &gens)?);
            }
        }
        out.push(g);
    }
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    Ok(out)
}

/// Independent conductor computation: `f` works iff every unit `s = 1 mod f` is in `G`,
/// checked through `s = 1 + f t` for `t` ranging over `0..N/f`.
pub fn conductor_by_lifts(g: &GaloisSubgroup) -> u64 {
    let n = g.modulus();
    let mut fs = divisors(n);
    fs.sort_unstable();
    for f in fs {
        let ok = (0..n / f)
            .map(|t| (1 + f * t) % n)
            .filter(|&s| arith::gcd_u(s, n) == 1)
            .all(|s| g.contains(s));
        if ok {
            return f;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductors() {
        for n in [1u64, 5, 12, 30] {
            assert_eq!(GaloisSubgroup::full(n).conductor(), 1);
        }
        assert_eq!(GaloisSubgroup::trivial(10).conductor(), 5);
        assert_eq!(GaloisSubgroup::new(8, &[3]).unwrap().conductor(), 8);
    }

    #[test]
    fn subgroup_counts() {
        // Gamma_8 = C2 x C2 has 5 subgroups, Gamma_7 = C6 has 4.
        assert_eq!(all_subgroups(8).unwrap().len(), 5);
        assert_eq!(all_subgroups(7).unwrap().len(), 4);
        for n in 1..=40 {
            for g in all_subgroups(n).unwrap() {
                let f = g.conductor();
                assert_eq!(n % f, 0);
                assert!(g.index() <= euler_phi(f));
                assert_eq!(f, conductor_by_lifts(&g));
            }
        }
    }

    #[test]
    fn text_format() {
        let g: GaloisSubgroup = "8:3".parse().unwrap();
        assert_eq!(g.elements(), &[1, 3]);
        assert_eq!(g.to_string(), "8:3");
        let g: GaloisSubgroup = "12:*".parse().unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.to_string(), "12:*");
        assert!("8:2".parse::<GaloisSubgroup>().is_err());
        assert!("x".parse::<GaloisSubgroup>().is_err());
    }

    #[test]
    fn restriction() {
        let g = GaloisSubgroup::full(24);
        let h = g.restrict_reduce(2, 8).unwrap();
        assert_eq!(h, GaloisSubgroup::full(8));
        let h = g.restrict_reduce(3, 8).unwrap();
        // sigma = 1 mod 3 and a unit mod 24: {1, 7, 13, 19} -> mod 8 {1, 7, 5, 3}
        assert_eq!(h.order(), 4);
    }
}
