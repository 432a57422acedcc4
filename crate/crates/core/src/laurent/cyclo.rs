//! Exact elements of cyclotomic fields `Q(zeta_m)` in the power basis.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use super::intpoly::cyclotomic_polynomial;
use crate::arith;

/// `sum_i coords[i] * zeta_m^i` with `zeta_m = e(1/m)` under the principal embedding,
/// reduced modulo the `m`-th cyclotomic polynomial.
#[derive(Debug, Clone)]
pub struct CycloNumber {
    m: u64,
    coords: Vec<BigRational>,
}

/// Nonzero coefficients of `Phi_m` below the leading term, as `(degree, coefficient)`.
fn phi_tail(m: u64) -> Vec<(usize, BigInt)> {
    let phi = cyclotomic_polynomial(m);
    let deg = phi.degree().unwrap();
    phi.coeffs()[..deg]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Folds exponents mod `m` and reduces modulo `Phi_m`.
fn reduce(v: Vec<(usize, BigRational)>, m: u64) -> Vec<BigRational> {
    let m_us = m as usize;
    let mut w = vec![BigRational::zero(); m_us];
    for (i, c) in v {
        if !c.is_zero() {
            w[i % m_us] += c;
        }
    }
    let phi = arith::euler_phi(m) as usize;
    if phi < m_us {
        let tail = phi_tail(m);
        for i in (phi..m_us).rev() {
            if w[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut w[i]);
            for (j, p) in &tail {
                w[i - phi + j] -= &c * BigRational::from_integer(p.clone());
            }
        }
    }
    w.truncate(phi);
    w
}

impl CycloNumber {
    pub fn zero(m: u64) -> Self {
        assert!(m >= 1);
        CycloNumber {
            m,
            coords: vec![BigRational::zero(); arith::euler_phi(m) as usize],
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        CycloNumber { m: 1, coords: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `zeta_m^k`, any integer `k`.
    pub fn root_of_unity(m: u64, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        CycloNumber {
            m,
            coords: reduce(vec![(e, BigRational::one())], m),
        }
    }

    /// Builds `sum c_i zeta_m^i` from arbitrary-length coordinates.
    pub fn from_power_sum(m: u64, v: Vec<BigRational>) -> Self {
        CycloNumber {
            m,
            coords: reduce(v.into_iter().enumerate().collect(), m),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The rational value if every non-constant coordinate vanishes.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Re-embeds into `Q(zeta_target)`; `m` must divide `target`.
    pub fn embed(&self, target: u64) -> CycloNumber {
        assert!(target.is_multiple_of(self.m), "conductor {} does not divide {}", self.m, target);
        if target == self.m {
            return self.clone();
        }
        let step = (target / self.m) as usize;
        let v = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i * step, c.clone()))
            .collect();
        CycloNumber {
            m: target,
            coords: reduce(v, target),
        }
    }

    fn aligned(&self, other: &CycloNumber) -> (CycloNumber, CycloNumber) {
        let l = arith::lcm_u(self.m, other.m);
        (self.embed(l), other.embed(l))
    }

    pub fn add(&self, other: &CycloNumber) -> CycloNumber {
        let (a, b) = self.aligned(other);
        CycloNumber {
            m: a.m,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &CycloNumber) -> CycloNumber {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycloNumber {
        CycloNumber {
            m: self.m,
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> CycloNumber {
        CycloNumber {
            m: self.m,
            coords: self.coords.iter().map(|x| x * q).collect(),
        }
    }

    pub fn mul(&self, other: &CycloNumber) -> CycloNumber {
        let (a, b) = self.aligned(other);
        if let Some(q) = a.as_rational() {
            return b.scale(&q);
        }
        if let Some(q) = b.as_rational() {
            return a.scale(&q);
        }
        let mut prod: Vec<(usize, BigRational)> = Vec::new();
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod.push((i + j, x * y));
                }
            }
        }
        CycloNumber {
            m: a.m,
            coords: reduce(prod, a.m),
        }
    }

    /// Multiplies by `zeta_n^k`; the result lives in `Q(zeta_lcm(m, n))`.
    pub fn mul_root_of_unity(&self, n: u64, k: i64) -> CycloNumber {
        let l = arith::lcm_u(self.m, n);
        let a = self.embed(l);
        let shift = (k.rem_euclid(n as i64) as u64 * (l / n)) as usize;
        if shift == 0 {
            return a;
        }
        let v = a
            .coords
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i + shift, c))
            .collect();
        CycloNumber {
            m: l,
            coords: reduce(v, l),
        }
    }

    /// Galois action `zeta_m -> zeta_m^k` for `k` coprime to `m`.
    pub fn galois(&self, k: u64) -> CycloNumber {
        assert_eq!(arith::gcd_u(k % self.m, self.m), 1, "{k} is not a unit mod {}", self.m);
        let m = self.m as usize;
        let v = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i * (k as usize % m) % m, c.clone()))
            .collect();
        CycloNumber {
            m: self.m,
            coords: reduce(v, self.m),
        }
    }

    /// Complex conjugation, `zeta_m -> zeta_m^{-1}`.
    pub fn conj(&self) -> CycloNumber {
        let m = self.m as usize;
        let v = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| ((m - i) % m, c.clone()))
            .collect();
        CycloNumber {
            m: self.m,
            coords: reduce(v, self.m),
        }
    }

    /// Value under the principal embedding `zeta_m -> e(1/m)`.
    pub fn to_complex(&self) -> Complex64 {
        let mut re = arith::KahanSum::new();
        let mut im = arith::KahanSum::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = arith::e_frac(i as i64, self.m) * rational_to_f64(c);
            re.add(w.re);
            im.add(w.im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// `Some(sign)` when the number is `+1` or `-1`.
    pub fn unit_sign(&self) -> Option<i8> {
        let q = self.as_rational()?;
        if q.is_one() {
            Some(1)
        } else if (-q).is_one() {
            Some(-1)
        } else {
            None
        }
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.coords == other.coords;
        }
        let (a, b) = self.aligned(other);
        a.coords == b.coords
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "{}", zeta_factor(self.m, i))?,
                (_, false) => write!(f, "{a}*{}", zeta_factor(self.m, i))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub(crate) fn zeta_factor(m: u64, i: usize) -> String {
    if i == 1 {
        format!("zeta({m})")
    } else {
        format!("zeta({m})^{i}")
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Huge numerators or denominators: scale through bit lengths.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 900).max(0);
    let shift_d = (db - 900).max(0);
    let n = (q.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n - shift_d) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = CycloNumber::root_of_unity(4, 1);
        assert_eq!(i.mul(&i), CycloNumber::from_int(-1));
        assert_eq!(i.conj(), i.neg());
        let z = i.to_complex();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn sum_of_roots_vanishes() {
        for m in [3u64, 5, 6, 12, 15] {
            // sum of primitive m-th roots is mu(m)
            let s = arith::units_mod(m)
                .into_iter()
                .fold(CycloNumber::zero(m), |acc, k| {
                    acc.add(&CycloNumber::root_of_unity(m, k as i64))
                });
            assert_eq!(s, CycloNumber::from_int(arith::mobius(m)), "m = {m}");
        }
    }

    #[test]
    fn embedding_respects_arithmetic() {
        let a = CycloNumber::root_of_unity(3, 1).scale(&q(2, 3));
        let b = CycloNumber::root_of_unity(4, 3);
        let ab = a.mul(&b);
        assert_eq!(ab.conductor(), 12);
        let expect = a.to_complex() * b.to_complex();
        assert!((ab.to_complex() - expect).norm() < 1e-14);
        assert_eq!(a.embed(12), a);
        assert_eq!(
            CycloNumber::one().mul_root_of_unity(6, 2),
            CycloNumber::root_of_unity(3, 1)
        );
    }

    #[test]
    fn display() {
        let x = CycloNumber::root_of_unity(4, 1).add(&CycloNumber::from_int(1));
        assert_eq!(x.to_string(), "1 + zeta(4)");
        assert_eq!(CycloNumber::from_rational(q(-3, 2)).to_string(), "-3/2");
    }
}
