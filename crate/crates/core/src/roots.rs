//! Simultaneous complex root finding (Aberth-Ehrlich) with Newton polishing and
//! Weierstrass-type inclusion radii.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::laurent::IntPoly;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub z: Complex64,
    /// `|Q(z)|` evaluated in floating point.
    pub residual: f64,
    /// Radius of a disc around `z` known to contain a root (up to rounding in the bound).
    pub error_bound: f64,
}

/// All roots of `Q = a_0 (X - z_1) ... (X - z_D)`, with multiplicity, sorted by
/// `(re, im)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub leading_coeff: Complex64,
    pub degree: usize,
}

impl RootSet {
    pub fn values(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.z).collect()
    }
}

const MAX_ITER: usize = 800;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Returns `(Q(z), Q'(z))` by Horner.
fn horner2(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = c(0.0);
    let mut dp = c(0.0);
    for &ai in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + ai;
    }
    (p, dp)
}

/// Newton correction `Q(z)/Q'(z)`, evaluated on the reversed polynomial when `|z| > 1`
/// to avoid overflow and cancellation.
fn newton_ratio(a: &[Complex64], z: Complex64) -> Complex64 {
    let n = a.len() - 1;
    if z.norm() <= 1.0 {
        let (p, dp) = horner2(a, z);
        if dp == c(0.0) {
            return if p == c(0.0) { c(0.0) } else { c(f64::INFINITY) };
        }
        p / dp
    } else {
        let y = z.inv();
        let rev: Vec<Complex64> = a.iter().rev().copied().collect();
        let (r, dr) = horner2(&rev, y);
        if r == c(0.0) {
            return c(0.0);
        }
        let denom = c(n as f64) - y * dr / r;
        z / denom
    }
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(i, log|a_i|)`.
fn initial_guesses(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let pts: Vec<(usize, f64)> = a
        .iter()
        .enumerate()
        .filter(|(_, x)| x.norm() > 0.0)
        .map(|(i, x)| (i, x.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (i1, y1) = hull[hull.len() - 2];
            let (i2, y2) = hull[hull.len() - 1];
            // drop the middle point when it lies on or below the chord
            let cross = (i2 as f64 - i1 as f64) * (p.1 - y1) - (y2 - y1) * (p.0 as f64 - i1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (k0, y0) = w[0];
        let (k1, y1) = w[1];
        let m = k1 - k0;
        let r = ((y0 - y1) / m as f64).exp();
        for j in 0..m {
            let ang = 2.0 * PI * (j as f64) / (m as f64) + 2.0 * PI * out.len() as f64 / n as f64 + sigma;
            out.push(Complex64::from_polar(r, ang));
        }
    }
    out
}

fn aberth(a: &[Complex64], z: &mut [Complex64]) -> bool {
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let ratio = newton_ratio(a, z[i]);
            if !ratio.is_finite() {
                // critical point: nudge and retry next sweep
                z[i] += Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                all = false;
                continue;
            }
            let mut s = c(0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d != c(0.0) {
                        s += d.inv();
                    }
                }
            }
            let w = ratio / (c(1.0) - ratio * s);
            if !w.is_finite() {
                all = false;
                continue;
            }
            z[i] -= w;
            // a tiny step alone can come from a near-coincident neighbour, so the
            // Newton ratio must be small as well
            let scale = z[i].norm().max(f64::MIN_POSITIVE);
            if w.norm() <= 4.0 * f64::EPSILON * scale && ratio.norm() <= 1e-7 * scale.max(1.0) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return true;
        }
    }
    false
}

fn polish(a: &[Complex64], z: Complex64) -> Complex64 {
    let mut best = z;
    let mut best_res = horner2(a, z).0.norm();
    let mut cur = z;
    for _ in 0..3 {
        let r = newton_ratio(a, cur);
        if !r.is_finite() {
            break;
        }
        cur -= r;
        let res = horner2(a, cur).0.norm();
        if res < best_res {
            best = cur;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

/// Roots of a polynomial given by ascending complex coefficients.
pub fn roots(coeffs: &[Complex64]) -> Result<RootSet> {
    let hi = coeffs
        .iter()
        .rposition(|x| x.norm() != 0.0)
        .ok_or(Error::ZeroPolynomial)?;
    let a = &coeffs[..=hi];
    let lead = a[hi];
    let zeros = a.iter().position(|x| x.norm() != 0.0).unwrap();
    let core = &a[zeros..];
    let n = core.len() - 1;
    let mut zs: Vec<Complex64> = vec![c(0.0); zeros];
    if n == 1 {
        zs.push(-core[0] / core[1]);
    } else if n >= 2 {
        let mut z = initial_guesses(core);
        let mut converged = aberth(core, &mut z);
        // Escalation: rotate the starting circles and run again.
        let mut attempt = 0;
        while !converged && attempt < 3 {
            attempt += 1;
            let rot = Complex64::from_polar(1.0, 0.37 * attempt as f64);
            let mut z2: Vec<Complex64> = initial_guesses(core).into_iter().map(|w| w * rot).collect();
            converged = aberth(core, &mut z2);
            if converged {
                z = z2;
            }
        }
        if !converged {
            // Accept only if every point is an honest approximate root.
            let scale: f64 = core.iter().map(|x| x.norm()).sum();
            let ok = z.iter().all(|&w| {
                let (p, _) = horner2(core, w);
                p.norm() <= 1e-6 * scale * w.norm().max(1.0).powi(n as i32)
            });
            if !ok {
                return Err(Error::RootFinding(format!(
                    "Aberth iteration did not converge for degree {n}"
                )));
            }
        }
        zs.extend(z.into_iter().map(|w| polish(core, w)));
    }
    let d = zs.len();
    let mut out: Vec<Root> = (0..d)
        .map(|i| {
            let z = zs[i];
            let (p, _) = horner2(a, z);
            // Weierstrass correction W_i = Q(z_i) / (a_D prod_{j != i} (z_i - z_j)); the
            // discs of radius D |W_i| cover all roots.
            let mut denom = lead;
            let mut coincident = false;
            for (j, &w) in zs.iter().enumerate() {
                if j != i {
                    let diff = z - w;
                    if diff.norm() == 0.0 {
                        coincident = true;
                    } else {
                        denom *= diff;
                    }
                }
            }
            let bound = if coincident || !denom.is_finite() || denom.norm() == 0.0 {
                // Multiple root: fall back to the Newton-style radius D |Q/Q'|^(1/D).
                let (_, dp) = horner2(a, z);
                if dp.norm() > 0.0 {
                    d as f64 * (p / dp).norm()
                } else {
                    (p.norm() / lead.norm()).powf(1.0 / d as f64)
                }
            } else {
                d as f64 * (p / denom).norm()
            };
            Root {
                z,
                residual: p.norm(),
                error_bound: bound,
            }
        })
        .collect();
    out.sort_by(|x, y| {
        x.z.re
            .partial_cmp(&y.z.re)
            .unwrap()
            .then(x.z.im.partial_cmp(&y.z.im).unwrap())
    });
    Ok(RootSet {
        roots: out,
        leading_coeff: lead,
        degree: d,
    })
}

pub fn roots_int(q: &IntPoly) -> Result<RootSet> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    roots(&q.to_complex())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let rs = roots_int(&IntPoly::from_i64(&[-2, 0, 1])).unwrap();
        let v = rs.values();
        assert!((v[0].re + 2f64.sqrt()).abs() < 1e-14);
        assert!((v[1].re - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn fifth_roots_of_unity() {
        let rs = roots_int(&IntPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!(rs.degree, 4);
        for r in &rs.roots {
            assert!((r.z.norm() - 1.0).abs() < 1e-14);
            assert!(r.residual < 1e-12);
        }
    }

    #[test]
    fn lehmer_has_one_real_root_above_one() {
        let lehmer = IntPoly::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let rs = roots_int(&lehmer).unwrap();
        assert_eq!(rs.degree, 10);
        let big: Vec<_> = rs.values().into_iter().filter(|z| z.norm() > 1.0 + 1e-6).collect();
        assert_eq!(big.len(), 1);
        assert!(big[0].im.abs() < 1e-12);
        assert!((big[0].re - 1.176_280_818_259_917_6).abs() < 1e-12);
    }

    #[test]
    fn zero_roots_and_multiplicity() {
        // x^2 (x - 1)^2
        let rs = roots_int(&IntPoly::from_i64(&[0, 0, 1, -2, 1])).unwrap();
        assert_eq!(rs.degree, 4);
        let v = rs.values();
        assert_eq!(v.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(v.iter().filter(|z| (*z - 1.0).norm() < 1e-6).count() == 2);
    }

    #[test]
    fn trinomials_have_small_residuals() {
        // equal-modulus coefficients once let two approximations collapse onto a non-root
        for n in 2..=160usize {
            let mut c = vec![0i64; n + 1];
            c[0] = 1;
            c[1] = 1;
            c[n] = 1;
            let rs = roots_int(&IntPoly::from_i64(&c)).unwrap();
            assert_eq!(rs.roots.len(), n);
            for r in &rs.roots {
                assert!(r.residual < 1e-10, "n = {n}: {r:?}");
            }
        }
    }
}
