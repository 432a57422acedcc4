use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use crate::arith;
use crate::error::{Error, Result};

/// The torsion point `e(b/N) = (e(b_1/N), ..., e(b_d/N))` of exact order `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorsionPoint {
    n: u64,
    b: Vec<u64>,
}

impl TorsionPoint {
    /// Residues are reduced mod `n`; the order must be exactly `n`.
    pub fn new(b: &[i64], n: u64) -> Result<Self> {
        if n == 0 || b.is_empty() {
            return Err(Error::InvalidTorsion("need N >= 1 and d >= 1".into()));
        }
        let b: Vec<u64> = b.iter().map(|&x| x.rem_euclid(n as i64) as u64).collect();
        let g = b.iter().fold(n, |g, &x| arith::gcd_u(g, x));
        if g != 1 {
            return Err(Error::InvalidTorsion(format!(
                "residues share factor {g} with N = {n}; order is {}",
                n / g
            )));
        }
        Ok(TorsionPoint { n, b })
    }

    /// Like [`TorsionPoint::new`] but divides out a common factor so the order is exact.
    pub fn normalized(b: &[i64], n: u64) -> Self {
        assert!(n >= 1 && !b.is_empty());
        let r: Vec<u64> = b.iter().map(|&x| x.rem_euclid(n as i64) as u64).collect();
        let g = r.iter().fold(n, |g, &x| arith::gcd_u(g, x));
        TorsionPoint {
            n: n / g,
            b: r.iter().map(|&x| x / g).collect(),
        }
    }

    pub fn identity(d: usize) -> Self {
        TorsionPoint { n: 1, b: vec![0; d] }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn residues(&self) -> &[u64] {
        &self.b
    }

    pub fn is_identity(&self) -> bool {
        self.n == 1
    }

    /// `<b, a> mod N`, so that `zeta^a = e(result / N)`.
    pub fn pairing(&self, a: &[i64]) -> u64 {
        assert_eq!(a.len(), self.b.len());
        let n = self.n as i128;
        let s: i128 = self
            .b
            .iter()
            .zip(a)
            .map(|(&bi, &ai)| (bi as i128 * ai as i128).rem_euclid(n))
            .sum();
        s.rem_euclid(n) as u64
    }

    pub fn annihilated_by(&self, a: &[i64]) -> bool {
        self.pairing(a) == 0
    }

    /// Galois action `zeta -> zeta^sigma` for `sigma` coprime to `N`.
    pub fn act(&self, sigma: u64) -> TorsionPoint {
        let n = self.n as u128;
        TorsionPoint {
            n: self.n,
            b: self
                .b
                .iter()
                .map(|&x| ((x as u128 * sigma as u128) % n) as u64)
                .collect(),
        }
    }

    /// Componentwise product.
    pub fn mul(&self, other: &TorsionPoint) -> TorsionPoint {
        assert_eq!(self.dim(), other.dim());
        let l = arith::lcm_u(self.n, other.n);
        let (s, t) = (l / self.n, l / other.n);
        let b: Vec<i64> = self
            .b
            .iter()
            .zip(&other.b)
            .map(|(&x, &y)| ((x as u128 * s as u128 + y as u128 * t as u128) % l as u128) as i64)
            .collect();
        TorsionPoint::normalized(&b, l)
    }

    pub fn inverse(&self) -> TorsionPoint {
        let b: Vec<i64> = self.b.iter().map(|&x| -(x as i64)).collect();
        TorsionPoint::normalized(&b, self.n)
    }

    /// `zeta^A` for an integer `d x n` matrix `A` (row-vector convention `b A / N`).
    pub fn pow_matrix(&self, a: &[Vec<i64>]) -> TorsionPoint {
        assert_eq!(a.len(), self.dim());
        let cols = a[0].len();
        let n = self.n as i128;
        let b: Vec<i64> = (0..cols)
            .map(|j| {
                let s: i128 = (0..self.dim())
                    .map(|i| (self.b[i] as i128 * a[i][j] as i128).rem_euclid(n))
                    .sum();
                s.rem_euclid(n) as i64
            })
            .collect();
        TorsionPoint::normalized(&b, self.n)
    }

    /// Coordinates `b_i / N` in `[0, 1)`.
    pub fn angles(&self) -> Vec<f64> {
        self.b.iter().map(|&x| x as f64 / self.n as f64).collect()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.b.iter().map(|&x| arith::e_frac(x as i64, self.n)).collect()
    }

    /// Projection onto a subset of coordinates, order recomputed.
    pub fn project(&self, coords: std::ops::Range<usize>) -> TorsionPoint {
        let b: Vec<i64> = self.b[coords].iter().map(|&x| x as i64).collect();
        TorsionPoint::normalized(&b, self.n)
    }
}

impl serde::Serialize for TorsionPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.b.iter().map(|x| format!("{x}/{}", self.n)).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for TorsionPoint {
    type Err = Error;

    /// `b1/N,b2/N,...` with a common denominator.
    fn from_str(s: &str) -> Result<Self> {
        let mut n: Option<u64> = None;
        let mut b = Vec::new();
        for (i, tok) in s.split(',').enumerate() {
            let tok = tok.trim();
            let (num, den) = tok.split_once('/').ok_or_else(|| Error::Syntax {
                pos: i,
                msg: format!("expected b/N, got {tok:?}"),
            })?;
            let num: i64 = num.trim().parse().map_err(|_| Error::Syntax {
                pos: i,
                msg: format!("bad numerator {num:?}"),
            })?;
            let den: u64 = den.trim().parse().map_err(|_| Error::Syntax {
                pos: i,
                msg: format!("bad denominator {den:?}"),
            })?;
            match n {
                None => n = Some(den),
                Some(d) if d != den => {
                    return Err(Error::InvalidTorsion(format!(
                        "common denominator required, got {d} and {den}"
                    )))
                }
                _ => {}
            }
            b.push(num);
        }
        TorsionPoint::new(&b, n.unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert!("1/2,1/8".parse::<TorsionPoint>().is_err());
        let z: TorsionPoint = "4/8,1/8".parse().unwrap();
        assert_eq!(z.order(), 8);
        assert_eq!(z.to_string(), "4/8,1/8");
        assert!("2/8,4/8".parse::<TorsionPoint>().is_err());
    }

    #[test]
    fn group_law() {
        let z = TorsionPoint::new(&[4, 1], 8).unwrap();
        let w = TorsionPoint::new(&[1, 2], 3).unwrap();
        let p = z.mul(&w);
        assert_eq!(p.order(), 24);
        assert_eq!(p.mul(&w.inverse()), z);
        assert_eq!(z.act(5).residues(), &[4, 5]);
        assert!(z.annihilated_by(&[2, 0]));
        assert!(z.annihilated_by(&[1, -4]));
    }
}
