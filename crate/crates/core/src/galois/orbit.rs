use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::subgroup::GaloisSubgroup;
use super::torsion::TorsionPoint;
use crate::arith::{self, KahanSum};
use crate::error::{Error, Result};
use crate::laurent::{intpoly::norm_at_root_of_unity, CycloNumber, IntPoly, LaurentPoly};

fn check_group(zeta: &TorsionPoint, g: &GaloisSubgroup) -> Result<()> {
    if g.modulus() != zeta.order() {
        return Err(Error::OrderMismatch {
            group: g.modulus(),
            point: zeta.order(),
        });
    }
    Ok(())
}

/// `{sigma b / N mod 1 : sigma in G}`, one point per `sigma` in ascending order.
pub fn orbit_points(zeta: &TorsionPoint, g: &GaloisSubgroup) -> Result<Vec<Vec<f64>>> {
    check_group(zeta, g)?;
    Ok(g.elements().iter().map(|&s| zeta.act(s).angles()).collect())
}

/// `P(zeta)` as an exact cyclotomic number.
pub fn exact_value(p: &LaurentPoly, zeta: &TorsionPoint) -> Result<CycloNumber> {
    if p.dim() != zeta.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: zeta.dim(),
        });
    }
    let n = zeta.order();
    if let Some(ic) = p.integer_coeffs() {
        // integer coefficients: fold into one integer polynomial in zeta_N
        let terms: Vec<(u64, BigInt)> = ic.iter().map(|(e, c)| (zeta.pairing(e), c.clone())).collect();
        if crate::laurent::intpoly::vanishes_at_root_of_unity(&terms, n) {
            return Ok(CycloNumber::zero(1));
        }
    }
    let mut acc = CycloNumber::zero(n);
    for (e, c) in p.terms() {
        acc = acc.add(&c.mul_root_of_unity(n, zeta.pairing(e) as i64));
    }
    Ok(acc)
}

/// Exact test `P(zeta) = 0`.
pub fn vanishes_at(p: &LaurentPoly, zeta: &TorsionPoint) -> Result<bool> {
    Ok(exact_value(p, zeta)?.is_zero())
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitAverage {
    /// Mean of `log|P(zeta^sigma)|` over the `sigma` with `P(zeta^sigma) != 0`.
    pub mean: f64,
    /// Number of nonzero terms in the mean.
    pub count: usize,
    /// Elements `sigma` where `P(zeta^sigma) = 0` exactly.
    pub zeros: Vec<u64>,
    /// Elements whose value fell below the threshold but were nonzero.
    pub near_zeros: Vec<u64>,
}

/// Precomputed complex terms paired with `zeta`.
struct PairedTerms {
    n: u64,
    terms: Vec<(u64, num_complex::Complex64)>,
}

impl PairedTerms {
    fn new(p: &LaurentPoly, zeta: &TorsionPoint) -> Self {
        PairedTerms {
            n: zeta.order(),
            terms: p
                .complex_terms()
                .into_iter()
                .map(|(e, c)| (zeta.pairing(&e), c))
                .collect(),
        }
    }

    fn eval(&self, sigma: u64) -> num_complex::Complex64 {
        let n = self.n as u128;
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for &(k, c) in &self.terms {
            let w = c * arith::e_frac(((k as u128 * sigma as u128) % n) as i64, self.n);
            re.add(w.re);
            im.add(w.im);
        }
        num_complex::Complex64::new(re.value(), im.value())
    }
}

/// `(1/#G) sum_{sigma in G} log|P(zeta^sigma)|` with compensated summation in ascending
/// `sigma` order. Values below `1e-9 k |P|` are tested exactly; exact zeros are left out of
/// the mean and reported.
pub fn orbit_average_log(
    p: &LaurentPoly,
    zeta: &TorsionPoint,
    g: &GaloisSubgroup,
) -> Result<OrbitAverage> {
    if p.dim() != zeta.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: zeta.dim(),
        });
    }
    check_group(zeta, g)?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let threshold = 1e-9 * p.num_terms() as f64 * p.coeff_sup_norm();
    let paired = PairedTerms::new(p, zeta);
    let mut sum = KahanSum::new();
    let mut zeros = Vec::new();
    let mut near = Vec::new();
    let mut count = 0;
    for &s in g.elements() {
        let v = paired.eval(s).norm();
        if v < threshold {
            if vanishes_at(p, &zeta.act(s))? {
                zeros.push(s);
                continue;
            }
            near.push(s);
        }
        sum.add(v.ln());
        count += 1;
    }
    let mean = if count == 0 {
        f64::NAN
    } else {
        sum.value() / count as f64
    };
    Ok(OrbitAverage {
        mean,
        count,
        zeros,
        near_zeros: near,
    })
}

/// `Norm_{Q(zeta_N)/Q} P(zeta) = Res(Phi_N, P(X^{b_1}, ..., X^{b_d}))` for integer `P`.
pub fn norm_at_torsion(p: &LaurentPoly, zeta: &TorsionPoint) -> Result<BigInt> {
    let ic = p.integer_coeffs().ok_or(Error::NonInteger)?;
    if p.dim() != zeta.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: zeta.dim(),
        });
    }
    let n = zeta.order();
    let mut coeffs = vec![BigInt::zero(); n as usize];
    for (e, c) in &ic {
        coeffs[zeta.pairing(e) as usize] += c;
    }
    let q = IntPoly::new(coeffs);
    let norm = norm_at_root_of_unity(&q, n);
    if norm.is_zero() {
        return Err(Error::ExactZero);
    }
    Ok(norm)
}

pub fn is_unit_at(p: &LaurentPoly, zeta: &TorsionPoint) -> Result<bool> {
    Ok(norm_at_torsion(p, zeta)?.abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_poly;

    fn z(b: &[i64], n: u64) -> TorsionPoint {
        TorsionPoint::new(b, n).unwrap()
    }

    #[test]
    fn orbits() {
        let pts = orbit_points(&z(&[1], 5), &GaloisSubgroup::full(5)).unwrap();
        assert_eq!(pts, vec![vec![0.2], vec![0.4], vec![0.6], vec![0.8]]);
        let g = GaloisSubgroup::new(8, &[5]).unwrap();
        let pts = orbit_points(&z(&[4, 1], 8), &g).unwrap();
        assert_eq!(pts, vec![vec![0.5, 0.125], vec![0.5, 0.625]]);
        assert!(orbit_points(&z(&[1], 5), &GaloisSubgroup::full(7)).is_err());
    }

    #[test]
    fn averages() {
        let p = parse_poly("x1 - 2", 1).unwrap();
        let a = orbit_average_log(&p, &z(&[1], 3), &GaloisSubgroup::full(3)).unwrap();
        assert!((a.mean - 7f64.ln() / 2.0).abs() < 1e-12);
        let p = parse_poly("x1", 1).unwrap();
        let a = orbit_average_log(&p, &z(&[3], 7), &GaloisSubgroup::full(7)).unwrap();
        assert!(a.mean.abs() < 1e-15);
        let p = parse_poly("x1 - 1", 1).unwrap();
        let a = orbit_average_log(&p, &z(&[1], 4), &GaloisSubgroup::full(4)).unwrap();
        assert!((a.mean - 2f64.ln() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_zeros_are_reported() {
        // 1 + x1 + x2 vanishes at (e(1/3), e(2/3)) and its conjugate
        let p = parse_poly("1 + x1 + x2", 2).unwrap();
        let a = orbit_average_log(&p, &z(&[1, 2], 3), &GaloisSubgroup::full(3)).unwrap();
        assert_eq!(a.zeros, vec![1, 2]);
        assert_eq!(a.count, 0);
        let p = parse_poly("1 + x1 + x2", 2).unwrap();
        let a = orbit_average_log(&p, &z(&[1, 0], 6), &GaloisSubgroup::full(6)).unwrap();
        assert!(a.zeros.is_empty());
    }

    #[test]
    fn norms() {
        let p = parse_poly("1 - x1", 1).unwrap();
        assert_eq!(norm_at_torsion(&p, &z(&[1], 4)).unwrap(), BigInt::from(2));
        assert_eq!(norm_at_torsion(&p, &z(&[1], 6)).unwrap(), BigInt::from(1));
        assert!(!is_unit_at(&p, &z(&[1], 4)).unwrap());
        assert!(is_unit_at(&p, &z(&[1], 6)).unwrap());
        let q = parse_poly("x1 + x2 - 1", 2).unwrap();
        assert!(is_unit_at(&q, &z(&[0, 1], 5)).unwrap());
        assert_eq!(norm_at_torsion(&p, &z(&[0], 1)), Err(Error::ExactZero));
    }

    #[test]
    fn cyclotomic_coefficients_exact_zero() {
        // x1 - zeta(3) vanishes at e(1/3)
        let p = parse_poly("x1 - zeta(3)", 1).unwrap();
        assert!(vanishes_at(&p, &z(&[1], 3)).unwrap());
        assert!(!vanishes_at(&p, &z(&[2], 3)).unwrap());
    }
}
