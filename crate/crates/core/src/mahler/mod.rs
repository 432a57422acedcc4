//! Mahler measures: Jensen's formula in one variable, recursive fiberwise integration,
//! rank-1 lattice rules, the explicit height bounds, and Lawton-type experiments.

mod lawton;
pub mod quad;

pub use lawton::{
    holder_probe, lawton_experiment, log_integral_over_s, volume_s, HolderRecord, LawtonRecord,
    Sampler, VolumeEstimate,
};

use num_complex::Complex64;
use serde::Serialize;
use std::cell::Cell;

use crate::arith::{self, KahanSum};
use crate::error::{Error, Result};
use crate::laurent::{strip_cyclotomic_factors, ComplexLaurent, LaurentPoly};
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Jensen,
    Recursive,
    Qmc,
}

/// A computed Mahler measure. `est_error` is a heuristic estimate, not an enclosure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureResult {
    pub value: f64,
    pub method: Method,
    pub est_error: f64,
    /// Roots within `1e-6` of the unit circle (Jensen only).
    pub near_circle_roots: usize,
    /// Deepest bisection level of the outer quadrature.
    pub refinement_depth: usize,
    /// Fibers whose leading coefficient vanished numerically or that vanished entirely.
    pub degenerate_fibers: usize,
    /// Lattice points skipped because the polynomial vanished there (QMC only).
    pub skipped_points: usize,
}

impl MeasureResult {
    fn new(value: f64, method: Method, est_error: f64) -> Self {
        MeasureResult {
            value,
            method,
            est_error,
            near_circle_roots: 0,
            refinement_depth: 0,
            degenerate_fibers: 0,
            skipped_points: 0,
        }
    }
}

/// Univariate cyclotomic factors are divided out exactly up to this degree.
const CYCLOTOMIC_STRIP_MAX_DEG: usize = 200;

/// `log|a_D| + sum log+|z_i|` for a polynomial given by ascending complex coefficients.
pub fn jensen(coeffs: &[Complex64]) -> Result<MeasureResult> {
    let rs = roots::roots(coeffs)?;
    let mut sum = KahanSum::new();
    sum.add(rs.leading_coeff.norm().ln());
    let mut err = 0.0;
    let mut near = 0;
    for r in &rs.roots {
        let a = r.z.norm();
        sum.add(arith::log_plus(a));
        if (a - 1.0).abs() < 1e-6 {
            near += 1;
        }
        if a + r.error_bound >= 1.0 {
            let lo = a - r.error_bound;
            err += if lo > 0.0 { (r.error_bound / lo).min(r.error_bound.max(1.0)) } else { r.error_bound };
        }
    }
    let mut m = MeasureResult::new(sum.value(), Method::Jensen, err);
    m.near_circle_roots = near;
    Ok(m)
}

/// Mahler measure of a univariate Laurent polynomial by Jensen's formula. Integer
/// inputs of moderate degree first lose their cyclotomic factors, which have measure 0.
pub fn mahler_univariate(q: &LaurentPoly) -> Result<MeasureResult> {
    if q.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: q.dim(),
        });
    }
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Ok((ip, _)) = q.to_int_poly() {
        let (ip, _) = ip.strip_x_power();
        if ip.degree().unwrap_or(0) <= CYCLOTOMIC_STRIP_MAX_DEG {
            let split = strip_cyclotomic_factors(&ip);
            let removed: usize = split
                .factors
                .iter()
                .map(|&(k, e)| arith::euler_phi(k) as usize * e as usize)
                .sum();
            let mut m = jensen(&split.remainder.to_complex())?;
            m.near_circle_roots += removed;
            return Ok(m);
        }
    }
    let (c, _) = q.to_complex().univariate_dense();
    jensen(&c)
}

/// Options for [`mahler_multivariate`].
#[derive(Debug, Clone, Copy)]
pub struct RecursiveOptions {
    /// Absolute error target of the outermost integral.
    pub tol: f64,
    /// Cap on the number of subintervals per one-dimensional integral.
    pub max_pieces: usize,
}

impl Default for RecursiveOptions {
    fn default() -> Self {
        RecursiveOptions {
            tol: 1e-9,
            max_pieces: 4000,
        }
    }
}

/// Coefficients below this fraction of the fiber's largest one count as vanished.
const FIBER_ZERO_REL: f64 = 1e-13;

struct Recursion {
    opts: RecursiveOptions,
    /// `|P|`, the scale for deciding that a fiber vanished.
    scale: f64,
    degenerate: Cell<usize>,
    depth: Cell<usize>,
}

impl Recursion {
    /// Jensen on a univariate fiber after trimming numerically vanished end coefficients.
    fn fiber_measure(&self, f: &ComplexLaurent) -> Option<f64> {
        let (mut c, _) = f.univariate_dense();
        let max = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max <= FIBER_ZERO_REL * self.scale {
            return None;
        }
        let cut = FIBER_ZERO_REL * max;
        let hi = c.iter().rposition(|z| z.norm() > cut).unwrap();
        if hi + 1 < c.len() {
            self.degenerate.set(self.degenerate.get() + 1);
        }
        c.truncate(hi + 1);
        let lo = c.iter().position(|z| z.norm() > cut).unwrap();
        let c = &c[lo..];
        if c.len() == 1 {
            return Some(c[0].norm().ln());
        }
        if c.len() == 2 {
            // one root: log|a_1| + log+|a_0 / a_1|
            return Some(c[1].norm().ln() + arith::log_plus((c[0] / c[1]).norm()));
        }
        jensen(c).ok().map(|m| m.value)
    }

    /// `m` of a polynomial in the remaining variables; `tol` is the local target.
    fn measure(&self, p: &ComplexLaurent, tol: f64) -> (f64, f64) {
        if p.dim == 1 {
            return match self.fiber_measure(p) {
                Some(v) => (v, 0.0),
                None => (f64::NEG_INFINITY, 0.0),
            };
        }
        let inner_tol = 0.1 * tol;
        let g = |x: f64| -> f64 {
            let mut x = x;
            // a vanishing fiber sits on a measure-zero set; nudge the node off it
            for _ in 0..8 {
                let (v, _) = self.measure(&p.fiber_angles(&[x]), inner_tol);
                if v.is_finite() {
                    return v;
                }
                self.degenerate.set(self.degenerate.get() + 1);
                x += 1e-9;
            }
            f64::NEG_INFINITY
        };
        let r = quad::integrate(g, 0.0, 1.0, tol, self.opts.max_pieces);
        self.depth.set(self.depth.get().max(r.depth));
        (r.value, r.error)
    }
}

/// Mahler measure by fiberwise recursion: the last variable is handled by Jensen's
/// formula on each fiber, the others by nested adaptive Gauss-Kronrod quadrature.
pub fn mahler_multivariate(p: &LaurentPoly, opts: RecursiveOptions) -> Result<MeasureResult> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.dim() == 1 {
        return mahler_univariate(p);
    }
    if p.num_terms() == 1 {
        return Ok(MeasureResult::new(p.coeff_sup_norm().ln(), Method::Recursive, 0.0));
    }
    mahler_complex(&p.to_complex(), opts)
}

/// Mahler measure of a polynomial with floating coefficients, e.g. a fiber of another
/// polynomial: Jensen in one variable, the recursion otherwise.
pub fn mahler_complex(p: &ComplexLaurent, opts: RecursiveOptions) -> Result<MeasureResult> {
    let scale = p.sup_norm();
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let rec = Recursion {
        opts,
        scale,
        degenerate: Cell::new(0),
        depth: Cell::new(0),
    };
    if p.dim == 1 {
        let (c, _) = p.univariate_dense();
        return jensen(&c);
    }
    let (value, err) = rec.measure(p, opts.tol);
    if !value.is_finite() {
        return Err(Error::Invariant("recursive integration met a vanishing fiber".into()));
    }
    let mut m = MeasureResult::new(value, Method::Recursive, err);
    m.refinement_depth = rec.depth.get();
    m.degenerate_fibers = rec.degenerate.get();
    Ok(m)
}

/// Mahler measure with the method suited to the dimension.
pub fn mahler(p: &LaurentPoly) -> Result<MeasureResult> {
    if p.dim() == 1 {
        mahler_univariate(p)
    } else {
        mahler_multivariate(p, RecursiveOptions::default())
    }
}

/// Rank-1 lattice rules `x_k = k z / n mod 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QmcRule {
    /// `n = F_m`, `z = (1, F_{m-1})`; two dimensions only. `n` is rounded down to a
    /// Fibonacci number.
    Fibonacci,
    /// `z_j = round(n / phi_d^j)` with `phi_d` the real root of `x^{d+1} = x + 1`.
    Kronecker,
}

impl QmcRule {
    pub fn for_dim(d: usize) -> Self {
        if d == 2 {
            QmcRule::Fibonacci
        } else {
            QmcRule::Kronecker
        }
    }
}

/// The lattice size and generating vector a rule uses for `n` requested points.
pub fn qmc_generator(rule: QmcRule, d: usize, n: u64) -> Result<(u64, Vec<u64>)> {
    if n == 0 {
        return Err(Error::OutOfRange("need at least one point".into()));
    }
    match rule {
        QmcRule::Fibonacci => {
            if d != 2 {
                return Err(Error::OutOfRange("the Fibonacci rule is two-dimensional".into()));
            }
            let (mut a, mut b) = (1u64, 1u64);
            while a + b <= n {
                (a, b) = (b, a + b);
            }
            Ok((b, vec![1, a % b]))
        }
        QmcRule::Kronecker => {
            // phi_d by Newton on x^{d+1} - x - 1
            let mut phi = 2.0f64;
            for _ in 0..60 {
                let f = phi.powi(d as i32 + 1) - phi - 1.0;
                let df = (d as f64 + 1.0) * phi.powi(d as i32) - 1.0;
                phi -= f / df;
            }
            let z = (1..=d)
                .map(|j| ((n as f64 / phi.powi(j as i32)).round() as u64) % n)
                .collect();
            Ok((n, z))
        }
    }
}

/// Mean of `log|P(e(x_k))|` over a rank-1 lattice. Points where `|P|` falls below
/// `1e-12 k |P|` are skipped and counted.
pub fn mahler_qmc(p: &LaurentPoly, n_points: u64, rule: QmcRule) -> Result<MeasureResult> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.num_terms() == 1 {
        return Ok(MeasureResult::new(p.coeff_sup_norm().ln(), Method::Qmc, 0.0));
    }
    let d = p.dim();
    let (n, z) = qmc_generator(rule, d, n_points)?;
    let terms = p.complex_terms();
    let cut = 1e-12 * terms.len() as f64 * p.coeff_sup_norm();
    let mut sum = KahanSum::new();
    let mut sum_sq = KahanSum::new();
    let mut skipped = 0usize;
    for k in 0..n {
        let x: Vec<u64> = z.iter().map(|&zj| ((k as u128 * zj as u128) % n as u128) as u64).collect();
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for (e, c) in &terms {
            let mut num: i128 = 0;
            for (ei, xi) in e.iter().zip(&x) {
                num = (num + *ei as i128 * *xi as i128).rem_euclid(n as i128);
            }
            let w = c * arith::e(num as f64 / n as f64);
            re.add(w.re);
            im.add(w.im);
        }
        let v = Complex64::new(re.value(), im.value()).norm();
        if v < cut {
            skipped += 1;
            continue;
        }
        let l = v.ln();
        sum.add(l);
        sum_sq.add(l * l);
    }
    let used = (n as usize - skipped) as f64;
    if used == 0.0 {
        return Err(Error::Invariant("every lattice point is a zero".into()));
    }
    let mean = sum.value() / used;
    let var = (sum_sq.value() / used - mean * mean).max(0.0);
    // heuristic: standard deviation over n, the lattice-rule rate for smooth integrands
    let mut m = MeasureResult::new(mean, Method::Qmc, var.sqrt() / used);
    m.skipped_points = skipped;
    Ok(m)
}

/// The explicit bounds `log|P| - (k - 2) log 2 <= m(P) <= log|P| + (1/2) log k`, with
/// `k` the number of terms. For a monomial both sides equal `log|P|`.
pub fn mahler_bounds(p: &LaurentPoly) -> Result<(f64, f64)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let h = p.coeff_sup_norm().ln();
    let k = p.num_terms();
    if k == 1 {
        return Ok((h, h));
    }
    Ok((
        h - (k as f64 - 2.0) * std::f64::consts::LN_2,
        h + 0.5 * (k as f64).ln(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{cyclotomic_polynomial, parse_poly};

    fn p(s: &str, d: usize) -> LaurentPoly {
        parse_poly(s, d).unwrap()
    }

    #[test]
    fn univariate_examples() {
        let m = mahler_univariate(&p("x1 - 2", 1)).unwrap();
        assert!((m.value - 2f64.ln()).abs() < 1e-12);
        assert_eq!(m.method, Method::Jensen);
        for n in [1u64, 5, 12, 30] {
            let q = LaurentPoly::from_int_poly(&cyclotomic_polynomial(n));
            assert_eq!(mahler_univariate(&q).unwrap().value, 0.0);
        }
        assert_eq!(mahler_univariate(&LaurentPoly::zero(1)), Err(Error::ZeroPolynomial));
        let m = mahler_univariate(&p("3*x1^4", 1)).unwrap();
        assert!((m.value - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn multivariate_examples() {
        let m = mahler_multivariate(&p("x1*x2 + x1 + x2 + 1", 2), RecursiveOptions::default()).unwrap();
        assert!(m.value.abs() < 1e-9, "{m:?}");
        let m = mahler_multivariate(&p("x1*x2 - 1", 2), RecursiveOptions::default()).unwrap();
        assert!(m.value.abs() < 1e-9, "{m:?}");
        let m = mahler_multivariate(&p("1 + x1 + x2", 2), RecursiveOptions::default()).unwrap();
        assert!((m.value - 0.3230659472).abs() < 1e-7, "{m:?}");
    }

    #[test]
    fn qmc_examples() {
        let m = mahler_qmc(&p("x1 - 2", 1), 100_000, QmcRule::Kronecker).unwrap();
        assert!((m.value - 2f64.ln()).abs() < 1e-3);
        let m = mahler_qmc(&p("x1^3*x2", 2), 1000, QmcRule::Fibonacci).unwrap();
        assert_eq!(m.value, 0.0);
        assert_eq!(qmc_generator(QmcRule::Fibonacci, 2, 100).unwrap(), (89, vec![1, 55]));
    }

    #[test]
    fn bounds_examples() {
        let (lo, hi) = mahler_bounds(&p("1 + x1 + x2", 2)).unwrap();
        // k = 3 gives log 1 - log 2
        assert!((lo + 2f64.ln()).abs() < 1e-15);
        assert!(lo < 0.3231 && 0.3231 < hi);
        assert!((hi - 0.5 * 3f64.ln()).abs() < 1e-15);
        let (lo, hi) = mahler_bounds(&p("x1 - 2", 1)).unwrap();
        assert!((lo - 2f64.ln()).abs() < 1e-15);
        assert!((hi - 1.5 * 2f64.ln()).abs() < 1e-15);
        let (lo, hi) = mahler_bounds(&p("2*x1", 1)).unwrap();
        assert_eq!((lo, hi), (2f64.ln(), 2f64.ln()));
    }
}
