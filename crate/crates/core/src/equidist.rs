//! Point sets on the torus: exact discrepancy, Koksma-type audits, truncated logarithmic
//! averages over Galois orbits, and fiberwise Mahler averages.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::Path;

use crate::arith::{self, euler_phi, num_divisors, KahanSum};
use crate::error::{Error, Result};
use crate::galois::{delta_point, orbit_points, GaloisSubgroup, TorsionPoint};
use crate::lattice::near_identity_conjugate;
use crate::laurent::LaurentPoly;
use crate::mahler::{mahler, mahler_complex, mahler_multivariate, RecursiveOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    d: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(d: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::OutOfRange("dimension must be positive".into()));
        }
        for p in &points {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: p.len(),
                });
            }
            if let Some(x) = p.iter().find(|x| !(0.0..1.0).contains(*x)) {
                return Err(Error::OutOfRange(format!("coordinate {x} outside [0, 1)")));
            }
        }
        Ok(PointSet { d, points })
    }

    /// `{k / n : 0 <= k < n}`.
    pub fn equispaced(n: usize) -> Self {
        PointSet {
            d: 1,
            points: (0..n).map(|k| vec![k as f64 / n as f64]).collect(),
        }
    }

    /// Angles of the Galois orbit `{zeta^sigma : sigma in G}`.
    pub fn orbit(zeta: &TorsionPoint, g: &GaloisSubgroup) -> Result<Self> {
        Ok(PointSet {
            d: zeta.dim(),
            points: orbit_points(zeta, g)?,
        })
    }

    /// One point per line, comma-separated coordinates written as decimals or `p/q`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let p = line
                .split(',')
                .map(|tok| parse_coordinate(tok.trim()))
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| Error::Syntax {
                    pos: lineno,
                    msg: format!("bad coordinate in line {:?}", line),
                })?;
            points.push(p);
        }
        let d = points
            .first()
            .map(|p| p.len())
            .ok_or_else(|| Error::OutOfRange("empty point set".into()))?;
        PointSet::new(d, points)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        PointSet::parse(&std::fs::read_to_string(path)?)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn parse_coordinate(tok: &str) -> Option<f64> {
    match tok.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            (q > 0).then(|| p as f64 / q as f64)
        }
        None => tok.parse().ok(),
    }
}

/// Largest point set handled by the exhaustive scan in dimension 2.
pub const DISCREPANCY_CAP_2D: usize = 128;
/// Largest point set handled by the exhaustive scan in dimension 3.
pub const DISCREPANCY_CAP_3D: usize = 64;

/// Extreme discrepancy `sup_B |#{x_i in B}/n - vol B|` over all axis-parallel boxes.
/// Exact: in one dimension by the sorted-gap formula, in dimensions 2 and 3 by scanning
/// every box whose faces pass through point coordinates or `{0, 1}`, closed boxes for
/// excess counts and open boxes for deficits.
pub fn discrepancy(ps: &PointSet) -> Result<f64> {
    let n = ps.len();
    if n == 0 {
        return Err(Error::OutOfRange("empty point set".into()));
    }
    match ps.d {
        1 => Ok(discrepancy_1d(ps.points.iter().map(|p| p[0]).collect())),
        2 | 3 => {
            let cap = if ps.d == 2 { DISCREPANCY_CAP_2D } else { DISCREPANCY_CAP_3D };
            if n > cap {
                return Err(Error::DiscrepancyCap { n, d: ps.d, cap });
            }
            Ok(discrepancy_boxes(ps))
        }
        d => Err(Error::DiscrepancyCap { n, d, cap: 0 }),
    }
}

/// `1/n + max_i (x_(i) - i/n) - min_i (x_(i) - i/n)` for the sorted points. Written this
/// way so that `{k/n}` gives `1/n` to the last bit.
fn discrepancy_1d(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, x) in xs.iter().enumerate() {
        let u = x - i as f64 / n as f64;
        lo = lo.min(u);
        hi = hi.max(u);
    }
    1.0 / n as f64 + (hi - lo)
}

fn discrepancy_boxes(ps: &PointSet) -> f64 {
    let d = ps.d;
    // candidate face coordinates per axis, and each point's index into them
    let mut cands: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut idx: Vec<Vec<usize>> = vec![Vec::with_capacity(d); ps.len()];
    for j in 0..d {
        let mut c: Vec<f64> = ps.points.iter().map(|p| p[j]).chain([0.0, 1.0]).collect();
        c.sort_by(f64::total_cmp);
        c.dedup();
        for (i, p) in ps.points.iter().enumerate() {
            idx[i].push(c.binary_search_by(|v| v.total_cmp(&p[j])).unwrap());
        }
        cands.push(c);
    }
    let all: Vec<usize> = (0..ps.len()).collect();
    let scan = BoxScan {
        cands: &cands,
        idx: &idx,
        n: ps.len() as f64,
    };
    scan.axis(0, &all, &all, 1.0)
}

struct BoxScan<'a> {
    cands: &'a [Vec<f64>],
    idx: &'a [Vec<usize>],
    n: f64,
}

impl BoxScan<'_> {
    /// Best deviation over boxes whose sides on axes `< j` are already fixed; `closed` and
    /// `open` hold the points inside the closed and open versions of those sides.
    fn axis(&self, j: usize, closed: &[usize], open: &[usize], vol: f64) -> f64 {
        let c = &self.cands[j];
        let m = c.len();
        if j + 1 == self.cands.len() {
            return self.last_axis(closed, open, vol);
        }
        let mut best: f64 = 0.0;
        let mut in_closed = Vec::with_capacity(closed.len());
        let mut in_open = Vec::with_capacity(open.len());
        for lo in 0..m {
            for hi in lo..m {
                in_closed.clear();
                in_closed.extend(closed.iter().filter(|&&i| (lo..=hi).contains(&self.idx[i][j])));
                in_open.clear();
                in_open.extend(open.iter().filter(|&&i| lo < self.idx[i][j] && self.idx[i][j] < hi));
                best = best.max(self.axis(j + 1, &in_closed, &in_open, vol * (c[hi] - c[lo])));
            }
        }
        best
    }

    fn last_axis(&self, closed: &[usize], open: &[usize], vol: f64) -> f64 {
        let j = self.cands.len() - 1;
        let c = &self.cands[j];
        let m = c.len();
        let n = self.n;
        // prefix counts: cnt[i] = number of points with last index < i
        let prefix = |set: &[usize]| {
            let mut cnt = vec![0usize; m + 1];
            for &i in set {
                cnt[self.idx[i][j] + 1] += 1;
            }
            for i in 1..=m {
                cnt[i] += cnt[i - 1];
            }
            cnt
        };
        let cc = prefix(closed);
        let co = prefix(open);
        // max over a <= b of a term in b plus a term in a, by running prefix maxima
        let mut best: f64 = 0.0;
        let mut pre_closed = f64::NEG_INFINITY;
        let mut pre_open = f64::NEG_INFINITY;
        for b in 0..m {
            pre_closed = pre_closed.max(vol * c[b] - cc[b] as f64 / n);
            best = best.max(cc[b + 1] as f64 / n - vol * c[b] + pre_closed);
            if b > 0 {
                pre_open = pre_open.max(co[b] as f64 / n - vol * c[b - 1]);
                best = best.max(vol * c[b] - co[b] as f64 / n + pre_open);
            }
        }
        best
    }
}

/// Lower bound for the discrepancy of a large set from `samples` random boxes.
pub fn discrepancy_lower_bound(ps: &PointSet, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ps.len() as f64;
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let bx: Vec<(f64, f64)> = (0..ps.d)
            .map(|_| {
                let (a, b): (f64, f64) = (rng.gen(), rng.gen());
                (a.min(b), a.max(b))
            })
            .collect();
        let vol: f64 = bx.iter().map(|(a, b)| b - a).product();
        let c = ps
            .points
            .iter()
            .filter(|p| p.iter().zip(&bx).all(|(x, (a, b))| a <= x && x < b))
            .count() as f64;
        best = best.max((c / n - vol).abs());
    }
    best
}

/// Audit of `lhs <= rhs` with both sides reported.
#[derive(Debug, Clone, Serialize)]
pub struct BoundAudit {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `|mean F(x_i) - int F| <= Var(F) D` in one dimension.
pub fn koksma_audit<F: Fn(f64) -> f64>(f: F, variation: f64, ps: &PointSet, integral: f64) -> Result<BoundAudit> {
    if ps.d != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: ps.d,
        });
    }
    if !variation.is_finite() || variation < 0.0 {
        return Err(Error::OutOfRange("total variation unavailable".into()));
    }
    let mean = arith::kahan_sum(ps.points.iter().map(|p| f(p[0]))) / ps.len() as f64;
    let lhs = (mean - integral).abs();
    let rhs = variation * discrepancy(ps)?;
    Ok(BoundAudit {
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-12,
    })
}

/// `F_{alpha, r}(x) = log max(r, |e(x) - alpha|)`.
pub fn f_alpha_r(alpha: Complex64, r: f64, x: f64) -> f64 {
    (arith::e(x) - alpha).norm().max(r).ln()
}

/// Total variation of `F_{alpha, r}` on `[0, 1]`. The distance `|e(x) - alpha|` is
/// monotone between the nearest and farthest points of the circle, and so is `F`.
pub fn f_alpha_r_variation(alpha: Complex64, r: f64) -> f64 {
    if alpha.norm() == 0.0 {
        return 0.0;
    }
    let near = (alpha.arg() / std::f64::consts::TAU).rem_euclid(1.0);
    let far = (near + 0.5).rem_euclid(1.0);
    let mut xs = [0.0, near, far, 1.0];
    xs.sort_by(f64::total_cmp);
    xs.windows(2)
        .map(|w| (f_alpha_r(alpha, r, w[1]) - f_alpha_r(alpha, r, w[0])).abs())
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct TruncatedLogAverage {
    /// `(1/#G) sum log|zeta^sigma - alpha|` over the `sigma` with distance above `r`.
    pub average: f64,
    pub log_plus_alpha: f64,
    pub residual: f64,
    pub excluded: usize,
    /// `[Gamma_N:G] f_G^{1/2} log(2N) d_0(N) / phi(N) |log r| + r |log r|`.
    pub shape: f64,
}

pub fn truncated_log_average(
    zeta: &TorsionPoint,
    g: &GaloisSubgroup,
    alpha: Complex64,
    r: f64,
) -> Result<TruncatedLogAverage> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::OutOfRange(format!("r = {r} must lie in (0, 1]")));
    }
    if zeta.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: zeta.dim(),
        });
    }
    let pts = orbit_points(zeta, g)?;
    let mut sum = KahanSum::new();
    let mut excluded = 0;
    for x in &pts {
        let dist = (arith::e(x[0]) - alpha).norm();
        if dist > r {
            sum.add(dist.ln());
        } else {
            excluded += 1;
        }
    }
    let average = sum.value() / pts.len() as f64;
    let lp = arith::log_plus(alpha.norm());
    let n = zeta.order();
    let lr = r.ln().abs();
    let shape = g.index() as f64 * (g.conductor() as f64).sqrt() * (2.0 * n as f64).ln() * num_divisors(n) as f64
        / euler_phi(n) as f64
        * lr
        + r * lr;
    Ok(TruncatedLogAverage {
        average,
        log_plus_alpha: lp,
        residual: average - lp,
        excluded,
        shape,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NearIdentity {
    /// `zeta = e(a sigma / N)` with `|a| < N / 2`.
    pub a: Vec<i64>,
    pub sigma: u64,
    /// `|a| / N`.
    pub ratio: f64,
    /// `[Gamma_N:G]^{1/d} f_G^{1/(2d)} / delta(zeta)^{1/(3d)}`.
    pub shape: f64,
}

/// Conjugate of `zeta` closest to the identity, `|a|` minimized over `sigma in G`.
pub fn near_identity_report(zeta: &TorsionPoint, g: &GaloisSubgroup) -> Result<NearIdentity> {
    if g.order() > 1_000_000 {
        return Err(Error::GroupTooLarge {
            size: g.order() as u128,
            cap: 1_000_000,
        });
    }
    let (a, sigma) = near_identity_conjugate(zeta, g)?;
    let n = zeta.order();
    let d = zeta.dim() as f64;
    // e(a sigma / N) = zeta, checked exactly
    let back: Vec<i64> = a.iter().map(|&x| x * sigma as i64).collect();
    if TorsionPoint::normalized(&back, n) != *zeta {
        return Err(Error::Invariant("near-identity conjugate does not reproduce zeta".into()));
    }
    let shape = (g.index() as f64).powf(1.0 / d) * (g.conductor() as f64).powf(1.0 / (2.0 * d))
        / (delta_point(zeta) as f64).powf(1.0 / (3.0 * d));
    Ok(NearIdentity {
        ratio: crate::lattice::matrix::max_norm(&a) as f64 / n as f64,
        a,
        sigma,
        shape,
    })
}

/// `omega(psi; t)`, either known in closed form or estimated from sampled pairs.
pub enum Modulus<'a> {
    Exact(&'a dyn Fn(f64) -> f64),
    /// Estimate from this many random pairs at max-norm distance `t` (fixed seed).
    Sampled(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegrationAudit {
    pub lhs: f64,
    pub rhs: f64,
    pub discrepancy: f64,
    pub omega: f64,
    /// Set when `omega` was sampled, so `rhs` is an estimate.
    pub omega_estimated: bool,
    pub ok: bool,
}

fn sampled_modulus<F: Fn(&[f64]) -> f64>(psi: &F, d: usize, t: f64, pairs: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: f64 = 0.0;
    for _ in 0..pairs {
        let x: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
        let axis = rng.gen_range(0..d);
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(j, &xj)| {
                let step = if j == axis {
                    if rng.gen::<bool>() { t } else { -t }
                } else {
                    rng.gen_range(-t..=t)
                };
                (xj + step).clamp(0.0, 1.0)
            })
            .collect();
        best = best.max((psi(&x) - psi(&y)).abs());
    }
    best
}

/// `|mean psi(x_i) - int psi| <= (1 + 2^{d+1}) omega(psi, D^{1/(d+1)})`.
pub fn numerical_integration_audit<F: Fn(&[f64]) -> f64>(
    psi: F,
    omega: Modulus<'_>,
    ps: &PointSet,
    integral: f64,
) -> Result<IntegrationAudit> {
    let d = ps.d;
    let disc = discrepancy(ps)?;
    let t = disc.powf(1.0 / (d as f64 + 1.0));
    let (w, estimated) = match omega {
        Modulus::Exact(f) => (f(t), false),
        Modulus::Sampled(pairs) => (sampled_modulus(&psi, d, t, pairs), true),
    };
    let mean = arith::kahan_sum(ps.points.iter().map(|p| psi(p))) / ps.len() as f64;
    let lhs = (mean - integral).abs();
    let rhs = (1.0 + 2f64.powi(d as i32 + 1)) * w;
    Ok(IntegrationAudit {
        lhs,
        rhs,
        discrepancy: disc,
        omega: w,
        omega_estimated: estimated,
        ok: lhs <= rhs + 1e-12,
    })
}

/// `(k^{-1/2} hat P(e(x))^{1/2}, |P_{e(x)}|, hat P(e(x))^{1/2})` where `|P_{e(x)}|` is the
/// largest coefficient modulus of the fiber over `e(x)`.
pub fn hat_comparison(p: &LaurentPoly, hat: &LaurentPoly, x: &[f64]) -> (f64, f64, f64) {
    let h = hat.to_complex().evaluate_angles(x).re.max(0.0).sqrt();
    let fiber = p.to_complex().fiber_angles(x).sup_norm();
    (h / (p.num_terms() as f64).sqrt(), fiber, h)
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberAverage {
    pub mean_fiber_measure: f64,
    pub m_p: f64,
    pub diff: f64,
    /// `|m(hat P) - mean log hat P(e(x_i))|`.
    pub hat_residual: f64,
}

/// Mean of `m(P_{e(x_i)})` over a point set in the first `l` variables, against `m(P)`.
pub fn fiber_mahler_average(p: &LaurentPoly, l: usize, ps: &PointSet) -> Result<FiberAverage> {
    if ps.d != l {
        return Err(Error::DimensionMismatch {
            expected: l,
            found: ps.d,
        });
    }
    let hat = p.auxiliary_hat(l)?;
    let pc = p.to_complex();
    let hc = hat.to_complex();
    let scale = p.coeff_sup_norm();
    let opts = RecursiveOptions {
        tol: 1e-8,
        ..RecursiveOptions::default()
    };
    let mut fib = KahanSum::new();
    let mut hat_log = KahanSum::new();
    let mut vanishing = Vec::new();
    for (i, x) in ps.points.iter().enumerate() {
        let f = pc.fiber_angles(x);
        if f.sup_norm() <= 1e-13 * scale {
            vanishing.push(i);
            continue;
        }
        fib.add(mahler_complex(&f, opts)?.value);
        hat_log.add(hc.evaluate_angles(x).re.ln());
    }
    if !vanishing.is_empty() {
        return Err(Error::Invariant(format!("fibers vanish at points {vanishing:?}")));
    }
    let n = ps.len() as f64;
    let mean = fib.value() / n;
    let m_p = mahler_multivariate(p, RecursiveOptions::default())?.value;
    let m_hat = mahler(&hat)?.value;
    Ok(FiberAverage {
        mean_fiber_measure: mean,
        m_p,
        diff: mean - m_p,
        hat_residual: (m_hat - hat_log.value() / n).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_poly;

    fn z(b: &[i64], n: u64) -> TorsionPoint {
        TorsionPoint::new(b, n).unwrap()
    }

    /// Independent 1-d oracle: every interval with endpoints among the points and
    /// `{0, 1}`, both closed and open.
    fn brute_1d(xs: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mut c: Vec<f64> = xs.iter().copied().chain([0.0, 1.0]).collect();
        c.sort_by(f64::total_cmp);
        let mut best: f64 = 0.0;
        for &a in &c {
            for &b in &c {
                if b < a {
                    continue;
                }
                let closed = xs.iter().filter(|&&x| a <= x && x <= b).count() as f64;
                let open = xs.iter().filter(|&&x| a < x && x < b).count() as f64;
                best = best.max(closed / n - (b - a)).max((b - a) - open / n);
            }
        }
        best
    }

    #[test]
    fn one_dimensional_examples() {
        for n in 1..=512 {
            let d = discrepancy(&PointSet::equispaced(n)).unwrap();
            assert_eq!(d, 1.0 / n as f64, "n = {n}");
        }
        let ps = PointSet::new(1, vec![vec![0.0], vec![0.5]]).unwrap();
        assert_eq!(discrepancy(&ps).unwrap(), 0.5);
        let ps = PointSet::new(1, vec![vec![0.0]]).unwrap();
        assert_eq!(discrepancy(&ps).unwrap(), 1.0);
    }

    #[test]
    fn one_dimensional_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(1..30);
            let xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let ps = PointSet::new(1, xs.iter().map(|&x| vec![x]).collect()).unwrap();
            assert!((discrepancy(&ps).unwrap() - brute_1d(&xs)).abs() < 1e-12);
        }
    }

    #[test]
    fn boxes_reduce_to_one_dimension() {
        // (x, 0.5) for a 1-d set: the 2-d discrepancy equals the 1-d one only up to the
        // extra axis, but a full grid is symmetric under swapping coordinates
        let pts: Vec<Vec<f64>> = (0..4)
            .flat_map(|i| (0..4).map(move |j| vec![i as f64 / 4.0, j as f64 / 4.0]))
            .collect();
        let ps = PointSet::new(2, pts.clone()).unwrap();
        let swapped = PointSet::new(2, pts.iter().map(|p| vec![p[1], p[0]]).collect()).unwrap();
        let d = discrepancy(&ps).unwrap();
        assert_eq!(d, discrepancy(&swapped).unwrap());
        // the closed box [0, 3/4]^2 holds all 16 points and has volume 9/16
        assert!((d - 7.0 / 16.0).abs() < 1e-15, "{d}");
        let one = PointSet::new(3, vec![vec![0.0, 0.0, 0.0]]).unwrap();
        assert_eq!(discrepancy(&one).unwrap(), 1.0);
        let big = PointSet::new(3, vec![vec![0.1, 0.2, 0.3]; 65]).unwrap();
        assert!(matches!(discrepancy(&big), Err(Error::DiscrepancyCap { .. })));
    }

    /// Naive 2-d scan: every box with faces through coordinates or `{0, 1}`, counted
    /// directly.
    fn brute_2d(pts: &[Vec<f64>]) -> f64 {
        let n = pts.len() as f64;
        let axis = |j: usize| {
            let mut c: Vec<f64> = pts.iter().map(|p| p[j]).chain([0.0, 1.0]).collect();
            c.sort_by(f64::total_cmp);
            c.dedup();
            c
        };
        let (cx, cy) = (axis(0), axis(1));
        let mut best: f64 = 0.0;
        for (i, &a0) in cx.iter().enumerate() {
            for &b0 in &cx[i..] {
                for (k, &a1) in cy.iter().enumerate() {
                    for &b1 in &cy[k..] {
                        let v = (b0 - a0) * (b1 - a1);
                        let inside = |p: &Vec<f64>, open: bool| {
                            if open {
                                a0 < p[0] && p[0] < b0 && a1 < p[1] && p[1] < b1
                            } else {
                                a0 <= p[0] && p[0] <= b0 && a1 <= p[1] && p[1] <= b1
                            }
                        };
                        let closed = pts.iter().filter(|p| inside(p, false)).count() as f64;
                        let open = pts.iter().filter(|p| inside(p, true)).count() as f64;
                        best = best.max(closed / n - v).max(v - open / n);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn boxes_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(1..14);
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.gen_range(0..8) as f64 / 8.0, rng.gen::<f64>()])
                .collect();
            let d = discrepancy(&PointSet::new(2, pts.clone()).unwrap()).unwrap();
            assert!((d - brute_2d(&pts)).abs() < 1e-12, "{d} vs {}", brute_2d(&pts));
        }
    }

    #[test]
    fn koksma_examples() {
        let n = 10;
        let mid = PointSet::new(1, (0..n).map(|k| vec![(2 * k + 1) as f64 / (2 * n) as f64]).collect()).unwrap();
        let a = koksma_audit(|x| x, 1.0, &mid, 0.5).unwrap();
        assert!(a.lhs < 1e-15 && a.ok);
        let a = koksma_audit(|x| x, 1.0, &PointSet::equispaced(n), 0.5).unwrap();
        assert!((a.lhs - 0.05).abs() < 1e-15 && a.ok);
        let alpha = Complex64::new(2.0, 0.0);
        let ps = PointSet::orbit(&z(&[1], 101), &GaloisSubgroup::full(101)).unwrap();
        let a = koksma_audit(|x| f_alpha_r(alpha, 0.5, x), f_alpha_r_variation(alpha, 0.5), &ps, 2f64.ln()).unwrap();
        assert!(a.ok, "{a:?}");
    }

    #[test]
    fn f_alpha_r_values() {
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(f_alpha_r(zero, 0.3, 0.4), 0.0);
        assert_eq!(f_alpha_r_variation(zero, 0.3), 0.0);
        let two = Complex64::new(2.0, 0.0);
        assert!((f_alpha_r_variation(two, 0.5) - 2.0 * 3f64.ln()).abs() < 1e-12);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(f_alpha_r(one, 0.1, 0.0), 0.1f64.ln());
        assert!((f_alpha_r_variation(one, 0.1) - 2.0 * (2.0 / 0.1f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn truncated_averages() {
        let g3 = GaloisSubgroup::full(3);
        let t = truncated_log_average(&z(&[1], 3), &g3, Complex64::new(0.0, 0.0), 0.5).unwrap();
        assert!(t.average.abs() < 1e-15 && t.residual.abs() < 1e-15);
        let t = truncated_log_average(&z(&[1], 3), &g3, Complex64::new(2.0, 0.0), 0.1).unwrap();
        assert!((t.average - 7f64.ln() / 2.0).abs() < 1e-12);
        assert!((t.residual - 0.2798).abs() < 1e-4);
        let t = truncated_log_average(&z(&[1], 4), &GaloisSubgroup::full(4), Complex64::new(1.0, 0.0), 0.1).unwrap();
        assert_eq!(t.excluded, 0);
        assert!((t.average - 0.5 * 2f64.ln()).abs() < 1e-12);
        let errs: Vec<f64> = [11u64, 101, 1009]
            .iter()
            .map(|&n| {
                truncated_log_average(&z(&[1], n), &GaloisSubgroup::full(n), Complex64::new(0.5, 0.3), 0.1)
                    .unwrap()
                    .residual
                    .abs()
            })
            .collect();
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
    }

    #[test]
    fn near_identity_examples() {
        let r = near_identity_report(&z(&[1], 11), &GaloisSubgroup::full(11)).unwrap();
        assert_eq!((r.a.clone(), r.sigma), (vec![1], 1));
        assert!((r.ratio - 1.0 / 11.0).abs() < 1e-15);
        let r = near_identity_report(&z(&[3], 7), &GaloisSubgroup::full(7)).unwrap();
        assert_eq!(r.a, vec![1]);
        assert_eq!(r.sigma % 7, 3);
        let r = near_identity_report(&z(&[4, 1], 8), &GaloisSubgroup::full(8)).unwrap();
        // brute force over the four units
        let best = [1i64, 3, 5, 7]
            .iter()
            .map(|&s| {
                let inv = arith::mod_inv(s, 8).unwrap();
                [4 * inv, inv]
                    .iter()
                    .map(|&x| {
                        let x = x.rem_euclid(8);
                        if 2 * x > 8 { 8 - x } else { x }
                    })
                    .max()
                    .unwrap()
            })
            .min()
            .unwrap();
        assert_eq!(crate::lattice::matrix::max_norm(&r.a), best);
    }

    #[test]
    fn integration_audits() {
        let grid = PointSet::new(
            2,
            (0..6).flat_map(|i| (0..6).map(move |j| vec![(i as f64 + 0.5) / 6.0, (j as f64 + 0.5) / 6.0])).collect(),
        )
        .unwrap();
        let zero = |_: f64| 0.0;
        let a = numerical_integration_audit(|_| 3.0, Modulus::Exact(&zero), &grid, 3.0).unwrap();
        assert_eq!((a.lhs, a.rhs), (0.0, 0.0));
        assert!(a.ok);
        let lip = |t: f64| t;
        let a = numerical_integration_audit(|x| x[0], Modulus::Exact(&lip), &grid, 0.5).unwrap();
        assert!(a.ok, "{a:?}");
        let p = parse_poly("1 + x1 + x2", 2).unwrap().to_complex();
        let clipped = |x: &[f64]| p.evaluate_angles(x).norm().max(0.1).ln();
        let pts = PointSet::new(2, (1..20).map(|s| vec![s as f64 / 20.0, (7 * s % 20) as f64 / 20.0]).collect()).unwrap();
        let a = numerical_integration_audit(clipped, Modulus::Sampled(10_000), &pts, 0.3231).unwrap();
        assert!(a.omega_estimated && a.ok, "{a:?}");
    }

    #[test]
    fn hat_sandwich() {
        let p = parse_poly("1 + x1 + x2 - 3*x1*x2^2 + x1^2*x2", 2).unwrap();
        let hat = p.auxiliary_hat(1).unwrap();
        for i in 0..50 {
            let x = [i as f64 / 50.0 + 0.003];
            let (lo, mid, hi) = hat_comparison(&p, &hat, &x);
            assert!(lo <= mid + 1e-12 && mid <= hi + 1e-12, "{lo} {mid} {hi}");
        }
    }

    #[test]
    fn fiber_averages() {
        let ps = PointSet::new(1, (0..7).map(|k| vec![k as f64 / 7.0]).collect()).unwrap();
        let f = fiber_mahler_average(&parse_poly("x1*x2 + 2", 2).unwrap(), 1, &ps).unwrap();
        assert!(f.diff.abs() < 1e-9, "{f:?}");
        let p = parse_poly("1 + x1 + x2", 2).unwrap();
        let diffs: Vec<f64> = [11u64, 101, 1009]
            .iter()
            .map(|&n| {
                let ps = PointSet::orbit(&z(&[1], n), &GaloisSubgroup::full(n)).unwrap();
                fiber_mahler_average(&p, 1, &ps).unwrap().diff.abs()
            })
            .collect();
        assert!(diffs[1] < diffs[0] && diffs[2] < diffs[1], "{diffs:?}");
        let ps = PointSet::new(1, vec![vec![1.0 / 6.0], vec![0.5]]).unwrap();
        assert!(fiber_mahler_average(&parse_poly("x1 + x2 - 1", 2).unwrap(), 1, &ps).is_ok());
    }

    #[test]
    fn parse_point_files() {
        let ps = PointSet::parse("# comment\n1/3, 0.25\n0, 2/5\n").unwrap();
        assert_eq!(ps.dim(), 2);
        assert_eq!(ps.points()[0], vec![1.0 / 3.0, 0.25]);
        assert!(PointSet::parse("1.5\n").is_err());
        assert!(PointSet::parse("1/0\n").is_err());
    }
}
