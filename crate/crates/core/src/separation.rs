//! Root separation and the repulsion of roots from the unit circle, as audits, plus
//! orbit averages of univariate polynomials over roots of unity.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::arith::{self, num_divisors};
use crate::error::{Error, Result};
use crate::galois::{orbit_average_log, GaloisSubgroup, TorsionPoint};
use crate::laurent::{
    bigint_ln, discriminant, essentially_atoral_1d, strip_cyclotomic_factors, AtoralVerdict,
    IntPoly, LaurentPoly,
};
use crate::mahler::{jensen, mahler_univariate};
use crate::roots::roots_int;

/// Exact discriminant `(-1)^{D(D-1)/2} Res(Q, Q') / lc(Q)`.
pub fn discriminant_int(q: &IntPoly) -> Result<BigInt> {
    match q.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Err(Error::OutOfRange("degree must be at least one".into())),
        Some(_) => Ok(discriminant(q)),
    }
}

/// One row of an inequality audit; `margin = rhs - lhs`.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityAudit {
    pub deg: usize,
    pub k_pairs: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub ok: bool,
    /// Roots left out of the sum (repulsion audits: roots on the unit circle).
    pub excluded: usize,
}

impl InequalityAudit {
    pub const CSV_HEADER: &'static str = "deg,k_pairs,lhs,rhs,margin,ok";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.12e},{:.12e},{:.12e},{}",
            self.deg, self.k_pairs, self.lhs, self.rhs, self.margin, self.ok
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MignotteForm {
    /// Squarefree `Q`, with the discriminant term.
    Theorem,
    /// Integer `Q`, no discriminant term; pairs index the distinct roots.
    Corollary,
}

/// Numerical roots closer than this (relative to `max(1, |z|)`) are one root of `Q`.
const CLUSTER_TOL: f64 = 1e-5;

/// Distinct roots of `Q` sorted by `(re, im)`, clustering the numerical copies of a
/// multiple root; with `q` squarefree this is just the root list.
pub fn distinct_roots(q: &IntPoly) -> Result<Vec<Complex64>> {
    let rs = roots_int(q)?;
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for r in &rs.roots {
        match out
            .iter_mut()
            .find(|(c, _)| (*c - r.z).norm() < CLUSTER_TOL * c.norm().max(1.0))
        {
            Some((c, n)) => {
                *c = (*c * *n as f64 + r.z) / (*n as f64 + 1.0);
                *n += 1;
            }
            None => out.push((r.z, 1)),
        }
    }
    let mut v: Vec<Complex64> = out.into_iter().map(|(c, _)| c).collect();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(v)
}

/// `sum_j -log|z_j - z'_j|` against
/// `(D + 2k)/2 log D - (k/2) log 3 + (D - 1) m(Q) [- (1/2) log|disc Q|]`.
///
/// `pairs` index [`distinct_roots`]; all `2k` indices must differ.
pub fn mignotte_audit(q: &IntPoly, pairs: &[(usize, usize)], form: MignotteForm) -> Result<InequalityAudit> {
    let deg = q.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::OutOfRange("degree must be at least one".into()));
    }
    let mut used: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    used.sort_unstable();
    if used.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::CoincidentIndices);
    }
    let disc = discriminant(q);
    if form == MignotteForm::Theorem && disc.is_zero() {
        return Err(Error::OutOfRange("the theorem form needs a squarefree polynomial".into()));
    }
    let zs = distinct_roots(q)?;
    if let Some(&bad) = used.iter().find(|&&i| i >= zs.len()) {
        return Err(Error::OutOfRange(format!("root index {bad} of {}", zs.len())));
    }
    let lhs = arith::kahan_sum(pairs.iter().map(|&(a, b)| -(zs[a] - zs[b]).norm().ln()));
    let m = jensen(&q.to_complex())?.value;
    let d = deg as f64;
    let k = pairs.len() as f64;
    let mut rhs = (d + 2.0 * k) / 2.0 * d.ln() - k / 2.0 * 3f64.ln() + (d - 1.0) * m;
    if form == MignotteForm::Theorem {
        rhs -= 0.5 * bigint_ln(&disc.abs());
    }
    let ok = if pairs.is_empty() { lhs <= rhs } else { lhs < rhs };
    Ok(InequalityAudit {
        deg,
        k_pairs: pairs.len(),
        lhs,
        rhs,
        margin: rhs - lhs,
        ok,
        excluded: 0,
    })
}

/// A uniformly shuffled maximal set of disjoint index pairs from `0..n`.
pub fn random_maximal_pairing<R: Rng>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx.chunks_exact(2).map(|c| (c[0], c[1])).collect()
}

/// Greedy pairing of the closest remaining roots, the hardest case for the audit.
pub fn closest_pairing(zs: &[Complex64]) -> Vec<(usize, usize)> {
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..zs.len() {
        for j in 0..i {
            cand.push(((zs[i] - zs[j]).norm(), j, i));
        }
    }
    cand.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut taken = vec![false; zs.len()];
    let mut out = Vec::new();
    for (_, a, b) in cand {
        if !taken[a] && !taken[b] {
            taken[a] = true;
            taken[b] = true;
            out.push((a, b));
        }
    }
    out
}

/// Roots with `||z| - 1|` below this count as lying on the unit circle.
pub const ON_CIRCLE_TOL: f64 = 1e-10;

/// `sum_{|z_j| != 1} log+ 1/||z_j| - 1|` over the roots of `q` (with multiplicity) and
/// the count of roots treated as on the circle. Cyclotomic factors are removed exactly
/// first; the rest use [`ON_CIRCLE_TOL`].
fn circle_sum(q: &IntPoly) -> Result<(f64, usize)> {
    let split = strip_cyclotomic_factors(q);
    let mut excluded: usize = split
        .factors
        .iter()
        .map(|&(k, e)| arith::euler_phi(k) as usize * e as usize)
        .sum();
    let mut sum = arith::KahanSum::new();
    if split.remainder.degree().unwrap_or(0) > 0 {
        for r in roots_int(&split.remainder)?.roots {
            let gap = (r.z.norm() - 1.0).abs();
            if gap < ON_CIRCLE_TOL {
                excluded += 1;
            } else {
                sum.add(arith::log_plus(1.0 / gap));
            }
        }
    }
    Ok((sum.value(), excluded))
}

/// The unit-circle repulsion bound `lhs <= 4 D (log 2D + m(Q))` for integer `Q`.
pub fn repulsion_audit(q: &IntPoly) -> Result<InequalityAudit> {
    let deg = q.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::OutOfRange("Q must be nonconstant".into()));
    }
    let (lhs, excluded) = circle_sum(q)?;
    let m = mahler_univariate(&LaurentPoly::from_int_poly(q))?.value;
    let d = deg as f64;
    let rhs = 4.0 * d * ((2.0 * d).ln() + m);
    Ok(InequalityAudit {
        deg,
        k_pairs: 0,
        lhs,
        rhs,
        margin: rhs - lhs,
        ok: lhs <= rhs,
        excluded,
    })
}

/// `tilde Q`, the product of the Galois conjugates of `q` over `Q(zeta_m)`, scaled to a
/// primitive integer polynomial. Returns it together with `m`.
pub fn conjugate_product(q: &LaurentPoly) -> Result<(IntPoly, u64)> {
    if q.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: q.dim(),
        });
    }
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (q, _) = q.normalize_monomial();
    let m = q.conductor();
    let mut prod = LaurentPoly::constant(1, crate::laurent::CycloNumber::one());
    for k in arith::units_mod(m) {
        let conj = LaurentPoly::from_terms(1, q.terms().map(|(e, c)| (e.clone(), c.embed(m).galois(k))))?;
        prod = prod.mul(&conj);
    }
    let rat = prod.rational_coeffs().ok_or_else(|| {
        Error::Invariant("conjugate product has irrational coefficients".into())
    })?;
    let ints = crate::laurent::primitive_integer_vector(rat.iter().map(|(_, c)| c));
    let deg = rat.iter().map(|(e, _)| e[0]).max().unwrap() as usize;
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for ((e, _), c) in rat.iter().zip(ints) {
        coeffs[e[0] as usize] = c;
    }
    Ok((IntPoly::new(coeffs), m))
}

/// Projective height `h(Q)`: exact for rational coefficients. For cyclotomic
/// coefficients this returns the lower bound `max(0, h(tilde Q) / [F:Q] - log(1 + D))`,
/// which keeps audits using it conservative.
pub fn projective_height(q: &LaurentPoly) -> Result<f64> {
    if q.rational_coeffs().is_some() {
        return q.height_rational();
    }
    let (qt, m) = conjugate_product(q)?;
    let f = arith::euler_phi(m) as f64;
    let hq = bigint_ln(&qt.coeffs().iter().map(|c| c.abs()).max().unwrap());
    let d = q.normalize_monomial().0.cleared_degree() as f64;
    Ok((hq / f - (1.0 + d).ln()).max(0.0))
}

/// The number-field repulsion bound `lhs <= 10 D [F:Q]^2 (log 2D + h(Q))`. The roots are
/// those of `q` itself, located through `tilde Q`; `f_degree` defaults to
/// `phi(conductor)`.
pub fn repulsion_audit_numberfield(q: &LaurentPoly, f_degree: Option<u64>) -> Result<InequalityAudit> {
    let (qn, _) = q.normalize_monomial();
    let deg = qn.cleared_degree() as usize;
    if deg == 0 {
        return Err(Error::OutOfRange("Q must be nonconstant".into()));
    }
    let m = qn.conductor();
    let fd = f_degree.unwrap_or_else(|| arith::euler_phi(m)) as f64;
    let h = projective_height(&qn)?;
    let (c, _) = qn.to_complex().univariate_dense();
    let rs = crate::roots::roots(&c)?;
    let mut sum = arith::KahanSum::new();
    let mut excluded = 0;
    for r in &rs.roots {
        let gap = (r.z.norm() - 1.0).abs();
        if gap < ON_CIRCLE_TOL {
            excluded += 1;
        } else {
            sum.add(arith::log_plus(1.0 / gap));
        }
    }
    let lhs = sum.value();
    let d = deg as f64;
    let rhs = 10.0 * d * fd * fd * ((2.0 * d).ln() + h);
    Ok(InequalityAudit {
        deg,
        k_pairs: 0,
        lhs,
        rhs,
        margin: rhs - lhs,
        ok: lhs <= rhs,
        excluded,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UnivariateOrbitRecord {
    #[serde(rename = "N")]
    pub n: u64,
    pub average: f64,
    pub m_q: f64,
    pub abs_err: f64,
    /// `[F:Q]^2 [Gamma_N:G] f_G^{1/2} D (log 2D + h(Q)) (log 2N)^3 d_0(N) / N`.
    pub error_shape: f64,
    /// `None` when `Q` has non-integer coefficients.
    pub atoral: Option<AtoralVerdict>,
}

/// Mean of `log|Q(e(sigma/N))|` over `sigma in G`, compared with `m(Q)`.
pub fn univariate_orbit_experiment(q: &LaurentPoly, n: u64, g: &GaloisSubgroup) -> Result<UnivariateOrbitRecord> {
    if q.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: q.dim(),
        });
    }
    let zeta = TorsionPoint::new(&[1], n)?;
    let avg = orbit_average_log(q, &zeta, g)?;
    if !avg.zeros.is_empty() {
        return Err(Error::ExactZero);
    }
    let m_q = mahler_univariate(q)?.value;
    let (qn, _) = q.normalize_monomial();
    let d = qn.cleared_degree().max(1) as f64;
    let fd = arith::euler_phi(qn.conductor()) as f64;
    let h = projective_height(&qn)?;
    let nf = n as f64;
    let error_shape = fd * fd * g.index() as f64 * (g.conductor() as f64).sqrt() * d * ((2.0 * d).ln() + h)
        * (2.0 * nf).ln().powi(3)
        * num_divisors(n) as f64
        / nf;
    let atoral = qn
        .to_int_poly()
        .ok()
        .map(|(ip, _)| essentially_atoral_1d(&ip, 1e-9));
    Ok(UnivariateOrbitRecord {
        n,
        average: avg.mean,
        m_q,
        abs_err: (avg.mean - m_q).abs(),
        error_shape,
        atoral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant_int(&ip(&[-2, 0, 1])).unwrap(), BigInt::from(8));
        assert_eq!(discriminant_int(&ip(&[1, 1, 1])).unwrap(), BigInt::from(-3));
        assert_eq!(discriminant_int(&ip(&[1, -2, 1])).unwrap(), BigInt::from(0));
        assert!(discriminant_int(&ip(&[5])).is_err());
    }

    #[test]
    fn mignotte_examples() {
        let q = ip(&[-2, 0, 1]);
        let a = mignotte_audit(&q, &[(0, 1)], MignotteForm::Theorem).unwrap();
        assert!((a.lhs + (2.0 * 2f64.sqrt()).ln()).abs() < 1e-12);
        // 2 log 2 - (1/2) log 3 + m(Q) - (1/2) log 8 with m(Q) = log 2
        let want = 2.0 * 2f64.ln() - 0.5 * 3f64.ln() + 2f64.ln() - 0.5 * 8f64.ln();
        assert!((a.rhs - want).abs() < 1e-12);
        assert!(a.ok);
        assert!(mignotte_audit(&ip(&[1, 1, 1]), &[(0, 1)], MignotteForm::Theorem).unwrap().ok);
        let a = mignotte_audit(&q, &[], MignotteForm::Theorem).unwrap();
        assert_eq!(a.lhs, 0.0);
        assert!(a.ok);
        assert_eq!(
            mignotte_audit(&q, &[(0, 1), (1, 0)], MignotteForm::Theorem).unwrap_err(),
            Error::CoincidentIndices
        );
        // (X - 1)^2 (X + 2): the corollary sees the two distinct roots
        let q = ip(&[2, -3, 0, 1]);
        assert!(mignotte_audit(&q, &[(0, 1)], MignotteForm::Theorem).is_err());
        assert!(mignotte_audit(&q, &[(0, 1)], MignotteForm::Corollary).unwrap().ok);
    }

    #[test]
    fn mignotte_random_closest_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut n = 0;
        while n < 40 {
            let d = rng.gen_range(2..=12);
            let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-20..=20)).collect();
            if c[d] == 0 {
                c[d] = 1;
            }
            let q = ip(&c);
            if discriminant(&q).is_zero() {
                continue;
            }
            let zs = distinct_roots(&q).unwrap();
            let a = mignotte_audit(&q, &closest_pairing(&zs), MignotteForm::Theorem).unwrap();
            assert!(a.ok, "{c:?}: {a:?}");
            n += 1;
        }
    }

    #[test]
    fn repulsion_examples() {
        let a = repulsion_audit(&ip(&[-1, 2])).unwrap();
        assert!((a.lhs - 2f64.ln()).abs() < 1e-12);
        assert!((a.rhs - 4.0 * (2f64.ln() + 2f64.ln())).abs() < 1e-12);
        assert!(a.ok);
        let a = repulsion_audit(&ip(&[-1, 1])).unwrap();
        assert_eq!((a.lhs, a.excluded), (0.0, 1));
        let lehmer = ip(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let a = repulsion_audit(&lehmer).unwrap();
        assert_eq!(a.excluded, 8);
        assert!(a.ok);
    }

    #[test]
    fn numberfield_repulsion_examples() {
        let q = parse_poly("2*x1 - 1", 1).unwrap();
        let a = repulsion_audit_numberfield(&q, None).unwrap();
        let b = repulsion_audit(&ip(&[-1, 2])).unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-12 && a.rhs > b.rhs && a.ok);
        let q = parse_poly("x1 - 1 - zeta(4)", 1).unwrap();
        let a = repulsion_audit_numberfield(&q, None).unwrap();
        assert!((a.lhs - (1.0 / (2f64.sqrt() - 1.0)).ln()).abs() < 1e-12);
        assert!(a.ok);
        let (qt, m) = conjugate_product(&q).unwrap();
        assert_eq!((qt, m), (ip(&[2, -2, 1]), 4));
        let phi8 = LaurentPoly::from_int_poly(&crate::laurent::cyclotomic_polynomial(8));
        let a = repulsion_audit_numberfield(&phi8, None).unwrap();
        assert_eq!((a.lhs, a.excluded), (0.0, 4));
    }

    #[test]
    fn univariate_orbits() {
        let q = parse_poly("x1 - 2", 1).unwrap();
        let r = univariate_orbit_experiment(&q, 3, &GaloisSubgroup::full(3)).unwrap();
        assert!((r.average - 7f64.ln() / 2.0).abs() < 1e-12);
        assert!((r.abs_err - 0.2798).abs() < 1e-4);
        let r101 = univariate_orbit_experiment(&q, 101, &GaloisSubgroup::full(101)).unwrap();
        assert!(r101.abs_err < r.abs_err);
        let q = parse_poly("x1 - 1", 1).unwrap();
        let r = univariate_orbit_experiment(&q, 4, &GaloisSubgroup::full(4)).unwrap();
        assert!((r.average - 0.5 * 2f64.ln()).abs() < 1e-12);
        assert_eq!(
            univariate_orbit_experiment(&q, 1, &GaloisSubgroup::full(1)).unwrap_err(),
            Error::ExactZero
        );
    }
}
