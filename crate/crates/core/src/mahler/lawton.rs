use serde::Serialize;

use super::{mahler, mahler_univariate, qmc_generator, MeasureResult, QmcRule};
use crate::arith::KahanSum;
use crate::error::{Error, Result};
use crate::lattice::rho;
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, Serialize)]
pub struct LawtonRecord {
    pub a: Vec<i64>,
    /// `None` stands for `rho = infinity` (one variable).
    pub rho: Option<i64>,
    pub deg: i64,
    pub k: usize,
    pub m_spec: f64,
    pub m_p: f64,
    pub abs_err: f64,
    /// `deg^{16 d^2} / rho^{1/(16(k-1))}`, only meaningful for trend comparisons.
    pub bound_shape: f64,
    /// Set when `rho(a) <= deg P`, outside the range where convergence is promised.
    pub flagged: bool,
}

/// `m(P(X^{a_1}, ..., X^{a_d}))` against a precomputed `m(P)`.
pub fn lawton_experiment(p: &LaurentPoly, a: &[i64], m_p: &MeasureResult) -> Result<LawtonRecord> {
    let d = p.dim();
    if a.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: a.len(),
        });
    }
    if a.iter().all(|&x| x == 0) {
        return Err(Error::OutOfRange("a must be nonzero".into()));
    }
    let cols: Vec<Vec<i64>> = a.iter().map(|&x| vec![x]).collect();
    let spec = p.substitute_monomial(&cols)?;
    if spec.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m_spec = mahler_univariate(&spec)?.value;
    let r = rho(a);
    let deg = p.cleared_degree();
    let k = p.num_terms();
    let bound_shape = match r {
        Some(r) if k >= 2 => {
            (deg.max(1) as f64).powi(16 * (d * d) as i32) / (r as f64).powf(1.0 / (16.0 * (k as f64 - 1.0)))
        }
        _ => 0.0,
    };
    Ok(LawtonRecord {
        a: a.to_vec(),
        rho: r,
        deg,
        k,
        m_spec,
        m_p: m_p.value,
        abs_err: (m_spec - m_p.value).abs(),
        bound_shape,
        flagged: r.is_some_and(|r| r <= deg),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampler {
    /// Tensor grid of cell midpoints, `floor(n^{1/d})` per axis.
    Grid,
    /// Rank-1 lattice rule.
    Qmc,
}

fn for_each_point<F: FnMut(&[f64])>(d: usize, n: u64, sampler: Sampler, mut f: F) -> Result<u64> {
    match sampler {
        Sampler::Grid => {
            let m = ((n as f64).powf(1.0 / d as f64) + 1e-9).floor().max(1.0) as u64;
            let total = m.pow(d as u32);
            let mut x = vec![0.0; d];
            for idx in 0..total {
                let mut t = idx;
                for xi in x.iter_mut() {
                    *xi = ((t % m) as f64 + 0.5) / m as f64;
                    t /= m;
                }
                f(&x);
            }
            Ok(total)
        }
        Sampler::Qmc => {
            let (n, z) = qmc_generator(QmcRule::for_dim(d), d, n)?;
            let mut x = vec![0.0; d];
            for k in 0..n {
                for (xi, &zj) in x.iter_mut().zip(&z) {
                    *xi = ((k as u128 * zj as u128) % n as u128) as f64 / n as f64;
                }
                f(&x);
            }
            Ok(n)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeEstimate {
    pub estimate: f64,
    /// One binomial standard error, `sqrt(p (1 - p) / n)`.
    pub band: f64,
    pub samples: u64,
    /// `r^{1/(k-1)}` for comparison with the small-value bound; `None` for monomials.
    pub shape: Option<f64>,
}

/// `vol{x in [0,1)^d : |P(e(x))| < r}` by sampling.
pub fn volume_s(p: &LaurentPoly, r: f64, n_samples: u64, sampler: Sampler) -> Result<VolumeEstimate> {
    if r <= 0.0 {
        return Err(Error::OutOfRange(format!("r = {r} must be positive")));
    }
    let c = p.to_complex();
    let mut hits = 0u64;
    let n = for_each_point(p.dim(), n_samples, sampler, |x| {
        if c.evaluate_angles(x).norm() < r {
            hits += 1;
        }
    })?;
    let est = hits as f64 / n as f64;
    let k = p.num_terms();
    Ok(VolumeEstimate {
        estimate: est,
        band: (est * (1.0 - est) / n as f64).sqrt(),
        samples: n,
        shape: (k >= 2).then(|| r.powf(1.0 / (k as f64 - 1.0))),
    })
}

/// `int_{S(P/|P|, r)} |log|P(e(x))/|P||| dx` by sampling, paired with the shape
/// `r^{1/(4(k-1))}`.
pub fn log_integral_over_s(
    p: &LaurentPoly,
    r: f64,
    n_samples: u64,
    sampler: Sampler,
) -> Result<(f64, Option<f64>)> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::OutOfRange(format!("r = {r} must lie in (0, 1]")));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let h = p.coeff_sup_norm();
    let c = p.to_complex();
    let mut sum = KahanSum::new();
    let n = for_each_point(p.dim(), n_samples, sampler, |x| {
        let v = c.evaluate_angles(x).norm() / h;
        if v < r && v > 0.0 {
            sum.add(-v.ln());
        }
    })?;
    let k = p.num_terms();
    Ok((
        sum.value() / n as f64,
        (k >= 2).then(|| r.powf(1.0 / (4.0 * (k as f64 - 1.0)))),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct HolderRecord {
    pub delta: f64,
    pub m_p: f64,
    pub m_q: f64,
    pub diff: f64,
    /// `delta^{1/(8(k-1))}` with `k` the larger term count.
    pub shape: f64,
}

/// Compares `m(P)` and `m(Q)` for `|P - Q| <= |Q| / 2`.
pub fn holder_probe(p: &LaurentPoly, q: &LaurentPoly) -> Result<HolderRecord> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let delta = p.sub(q).coeff_sup_norm() / q.coeff_sup_norm();
    if delta > 0.5 {
        return Err(Error::OutOfRange(format!("delta = {delta} exceeds 1/2")));
    }
    let m_q = mahler(q)?.value;
    let m_p = if delta == 0.0 { m_q } else { mahler(p)?.value };
    let k = p.num_terms().max(q.num_terms()).max(2);
    Ok(HolderRecord {
        delta,
        m_p,
        m_q,
        diff: m_p - m_q,
        shape: delta.powf(1.0 / (8.0 * (k as f64 - 1.0))),
    })
}

#[cfg(test)]
mod tests {
    use super::super::RecursiveOptions;
    use super::*;
    use crate::laurent::parse_poly;
    use crate::mahler::mahler_multivariate;

    fn p(s: &str, d: usize) -> LaurentPoly {
        parse_poly(s, d).unwrap()
    }

    #[test]
    fn lawton_examples() {
        let q = p("1 + x1 + x2", 2);
        let m = mahler_multivariate(&q, RecursiveOptions::default()).unwrap();
        let r5 = lawton_experiment(&q, &[1, 5], &m).unwrap();
        let r50 = lawton_experiment(&q, &[1, 50], &m).unwrap();
        assert!(r50.abs_err < r5.abs_err);
        assert!(!r50.flagged);
        assert!(lawton_experiment(&q, &[1, 1], &m).unwrap().flagged);

        // x1 (x2 - 1 + eps) at a = (1, 0): the specialization loses exactly log eps
        let eps: f64 = 1e-3;
        let q = p("x1*x2 - 0.999*x1", 2);
        let m = mahler_multivariate(&q, RecursiveOptions::default()).unwrap();
        let r = lawton_experiment(&q, &[1, 0], &m).unwrap();
        assert!(r.flagged);
        assert!((r.m_spec - r.m_p - eps.ln()).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn volume_examples() {
        let v = volume_s(&p("x1", 1), 0.5, 1000, Sampler::Grid).unwrap();
        assert_eq!(v.estimate, 0.0);
        let v = volume_s(&p("x1 - 1", 1), 0.1, 100_000, Sampler::Grid).unwrap();
        let want = 2.0 * 0.05f64.asin() / std::f64::consts::PI;
        assert!((v.estimate - want).abs() < 1e-4, "{v:?}");
        let q = p("1 + x1 + x2", 2);
        let vs: Vec<f64> = [0.4, 0.2, 0.1, 0.05]
            .iter()
            .map(|&r| volume_s(&q, r, 200_000, Sampler::Qmc).unwrap().estimate)
            .collect();
        assert!(vs.windows(2).all(|w| w[1] < w[0]), "{vs:?}");
    }

    #[test]
    fn log_integral_examples() {
        assert_eq!(log_integral_over_s(&p("x1", 1), 0.5, 1000, Sampler::Grid).unwrap().0, 0.0);
        let q = p("x1 - 1", 1);
        let a = log_integral_over_s(&q, 0.1, 100_000, Sampler::Grid).unwrap().0;
        let b = log_integral_over_s(&q, 0.5, 100_000, Sampler::Grid).unwrap().0;
        assert!(a > 0.0 && a < b);
        let q = p("1 + x1 + x2", 2);
        let a = log_integral_over_s(&q, 0.01, 500_000, Sampler::Qmc).unwrap().0;
        let b = log_integral_over_s(&q, 0.1, 500_000, Sampler::Qmc).unwrap().0;
        assert!(a < b);
    }

    #[test]
    fn holder_examples() {
        let q = p("x1 - 2", 1);
        let r = holder_probe(&q, &q).unwrap();
        assert_eq!(r.diff, 0.0);
        let r = holder_probe(&p("x1 - 2.001", 1), &q).unwrap();
        assert!((r.diff.abs() - (2.001f64 / 2.0).ln()).abs() < 1e-12);
        let r = holder_probe(&p("1.01 + x1 + x2", 2), &p("1 + x1 + x2", 2)).unwrap();
        assert!(r.diff.abs() < 0.02);
        assert!(holder_probe(&p("x1 - 4", 1), &q).is_err());
    }
}
