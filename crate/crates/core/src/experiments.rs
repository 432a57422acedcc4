//! Desk-scale experiments behind the command-line tool. Each one returns a [`Table`] of
//! flat records that can be written as versioned CSV or as JSON.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{self, gcd_u, KahanSum};
use crate::equidist::{discrepancy, discrepancy_lower_bound, PointSet};
use crate::error::{Error, Result};
use crate::galois::{
    delta_group, delta_point, gauss_audit, is_unit_at, subgroup_sum_audit,
    vanishes_at, FiniteTorusSubgroup, GaloisSubgroup, TorsionPoint, SUBGROUP_ENUM_CAP,
};
use crate::lattice::{factor_torsion, monomial_change, EXACT_DIM_CAP};
use crate::laurent::{essentially_atoral_1d, parse_poly, AtoralVerdict, IntPoly, LaurentPoly};
use crate::mahler::{
    lawton_experiment, mahler, mahler_bounds, mahler_multivariate, mahler_qmc, mahler_univariate,
    MeasureResult, QmcRule, RecursiveOptions,
};
use crate::separation::{
    closest_pairing, conjugate_product, distinct_roots, mignotte_audit, projective_height,
    random_maximal_pairing, repulsion_audit, univariate_orbit_experiment, MignotteForm,
};

/// Output of one experiment.
#[derive(Debug, Clone)]
pub struct Table {
    pub experiment: &'static str,
    pub seed: u64,
    /// Column line and rows.
    pub csv: String,
    pub rows: serde_json::Value,
    /// Free-form remarks, written as comment lines.
    pub notes: Vec<String>,
    /// False when some row records a failed inequality.
    pub ok: bool,
}

impl Table {
    fn new<T: Serialize>(experiment: &'static str, seed: u64, rows: &[T], ok: bool) -> Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(Table {
            experiment,
            seed,
            csv: String::from_utf8(bytes).expect("csv output is utf-8"),
            rows: serde_json::to_value(rows).map_err(|e| Error::Io(e.to_string()))?,
            notes: Vec::new(),
            ok,
        })
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn header(&self) -> String {
        format!("# atoral-lab v1, experiment={}, seed={}", self.experiment, self.seed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        out.push_str(&self.csv);
        out
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "experiment": self.experiment,
            "seed": self.seed,
            "ok": self.ok,
            "notes": self.notes,
            "rows": self.rows,
        });
        serde_json::to_string_pretty(&v).expect("json values serialize")
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Number of variables named in `text`: the largest `k` in a token `xk`.
pub fn infer_dim(text: &str) -> usize {
    let b = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(k) = text[start..j].parse::<usize>() {
                best = best.max(k);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best.max(1)
}

/// Parses `text` in `dim` variables, inferring the dimension when `dim` is `None`.
pub fn read_poly(text: &str, dim: Option<usize>) -> Result<LaurentPoly> {
    parse_poly(text, dim.unwrap_or_else(|| infer_dim(text)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Jensen,
    Recursive,
    Qmc,
}

#[derive(Debug, Clone, Serialize)]
pub struct MahlerRow {
    pub poly: String,
    pub method: String,
    pub value: f64,
    pub est_error: f64,
    pub lower: f64,
    pub upper: f64,
    pub near_circle_roots: usize,
    pub degenerate_fibers: usize,
    pub skipped_points: usize,
    pub ok: bool,
}

fn measure(p: &LaurentPoly, method: MethodChoice, qmc_points: u64) -> Result<MeasureResult> {
    match method {
        MethodChoice::Auto => mahler(p),
        MethodChoice::Jensen => {
            if p.dim() != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    found: p.dim(),
                });
            }
            mahler_univariate(p)
        }
        MethodChoice::Recursive => mahler_multivariate(p, RecursiveOptions::default()),
        MethodChoice::Qmc => mahler_qmc(p, qmc_points, QmcRule::for_dim(p.dim())),
    }
}

/// `m(P)` with the coefficient sandwich `log|P| - (k-2) log 2 <= m(P) <= log|P| + log(k)/2`.
pub fn cmd_mahler(p: &LaurentPoly, method: MethodChoice, qmc_points: u64) -> Result<Table> {
    let r = measure(p, method, qmc_points)?;
    let (lower, upper) = mahler_bounds(p)?;
    let slack = 1e-9 + r.est_error.abs();
    let ok = lower - slack <= r.value && r.value <= upper + slack;
    let row = MahlerRow {
        poly: p.to_string(),
        method: format!("{:?}", r.method).to_lowercase(),
        value: r.value,
        est_error: r.est_error,
        lower,
        upper,
        near_circle_roots: r.near_circle_roots,
        degenerate_fibers: r.degenerate_fibers,
        skipped_points: r.skipped_points,
        ok,
    };
    Table::new("mahler", 0, &[row], ok)
}

/// `zeta = e(b / N)` with `b = (1, round(phi N), round(phi^2 N), ...) mod N`. The
/// golden ratio is badly approximable, which keeps `delta(zeta)` growing with `N`.
pub fn golden_point(n: u64, d: usize) -> Result<TorsionPoint> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let b: Vec<i64> = (0..d)
        .map(|j| {
            if j == 0 {
                1
            } else {
                ((phi.powi(j as i32) * n as f64).round() as i64).rem_euclid(n as i64)
            }
        })
        .collect();
    TorsionPoint::new(&b, n)
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitRow {
    pub zeta: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub delta: i64,
    pub group_order: usize,
    pub average: f64,
    pub m_p: f64,
    pub abs_err: f64,
    /// Number of `sigma` with `P(zeta^sigma) = 0`, left out of the average.
    pub zero_hits: usize,
}

/// Precomputed `(pairing, coefficient)` list for fast evaluation along an orbit.
struct OrbitEvaluator {
    n: u64,
    terms: Vec<(u64, Complex64)>,
    threshold: f64,
}

impl OrbitEvaluator {
    fn new(p: &LaurentPoly, zeta: &TorsionPoint) -> Self {
        OrbitEvaluator {
            n: zeta.order(),
            terms: p
                .complex_terms()
                .into_iter()
                .map(|(e, c)| (zeta.pairing(&e), c))
                .collect(),
            threshold: 1e-9 * p.num_terms() as f64 * p.coeff_sup_norm(),
        }
    }

    fn abs(&self, sigma: u64) -> f64 {
        let n = self.n as u128;
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for &(k, c) in &self.terms {
            let w = c * arith::e_frac(((k as u128 * sigma as u128) % n) as i64, self.n);
            re.add(w.re);
            im.add(w.im);
        }
        Complex64::new(re.value(), im.value()).norm()
    }
}

/// Mean of `log|P(zeta^sigma)|` over the given `sigma`, exact zeros excluded.
fn orbit_mean(p: &LaurentPoly, zeta: &TorsionPoint, sigmas: impl Iterator<Item = u64>) -> Result<(f64, usize, usize)> {
    let ev = OrbitEvaluator::new(p, zeta);
    let mut sum = KahanSum::new();
    let (mut count, mut zeros) = (0, 0);
    for s in sigmas {
        let v = ev.abs(s);
        if v < ev.threshold && vanishes_at(p, &zeta.act(s))? {
            zeros += 1;
            continue;
        }
        sum.add(v.ln());
        count += 1;
    }
    let mean = if count == 0 { 0.0 } else { sum.value() / count as f64 };
    Ok((mean, count, zeros))
}

fn orbit_row(p: &LaurentPoly, zeta: &TorsionPoint, g: &GaloisSubgroup, m_p: f64) -> Result<OrbitRow> {
    if g.modulus() != zeta.order() {
        return Err(Error::OrderMismatch {
            group: g.modulus(),
            point: zeta.order(),
        });
    }
    let (average, _, zero_hits) = orbit_mean(p, zeta, g.elements().iter().copied())?;
    Ok(OrbitRow {
        zeta: zeta.to_string(),
        n: zeta.order(),
        delta: delta_point(zeta),
        group_order: g.order(),
        average,
        m_p,
        abs_err: (average - m_p).abs(),
        zero_hits,
    })
}

/// Galois-orbit averages of `log|P|`: one row for `zeta` and `g`, or a sweep over orders
/// with golden-ratio points and the full Galois group.
pub fn cmd_orbit_average(p: &LaurentPoly, zeta: Option<(&TorsionPoint, Option<&GaloisSubgroup>)>, sweep: &[u64]) -> Result<Table> {
    let m_p = mahler(p)?.value;
    let mut rows = Vec::new();
    if let Some((z, g)) = zeta {
        let full;
        let g = match g {
            Some(g) => g,
            None => {
                full = GaloisSubgroup::full(z.order());
                &full
            }
        };
        rows.push(orbit_row(p, z, g, m_p)?);
    }
    for &n in sweep {
        let z = golden_point(n, p.dim())?;
        rows.push(orbit_row(p, &z, &GaloisSubgroup::full(n), m_p)?);
    }
    let mut t = Table::new("orbit-average", 0, &rows, true)?;
    if !sweep.is_empty() && p.dim() > 1 {
        t = t.note("sweep points b = (1, round(phi N), ...) mod N, phi the golden ratio");
    }
    Ok(t)
}

#[derive(Debug, Clone, Serialize)]
pub struct LsvRow {
    pub group_order: usize,
    pub delta_g: i64,
    pub mean: f64,
    pub m_p: f64,
    pub abs_err: f64,
    pub zero_hits: usize,
}

/// Mean of `log|P(zeta)|` over a finite subgroup, leaving out the zeros of `P`.
pub fn lsv_row(p: &LaurentPoly, g: &FiniteTorusSubgroup, m_p: f64) -> Result<LsvRow> {
    if g.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: g.dim(),
        });
    }
    let threshold = 1e-9 * p.num_terms() as f64 * p.coeff_sup_norm();
    let mut sum = KahanSum::new();
    let (mut count, mut zeros) = (0usize, 0usize);
    for z in g.elements() {
        let v = p.evaluate_torsion(z)?.norm();
        if v < threshold && vanishes_at(p, z)? {
            zeros += 1;
            continue;
        }
        sum.add(v.ln());
        count += 1;
    }
    let mean = if count == 0 { 0.0 } else { sum.value() / count as f64 };
    Ok(LsvRow {
        group_order: g.order(),
        delta_g: delta_group(g),
        mean,
        m_p,
        abs_err: (mean - m_p).abs(),
        zero_hits: zeros,
    })
}

/// Averages over finite subgroups: the one generated by `gens` (if any), then `mu_N^d` for
/// each `N` in `sweep`.
pub fn cmd_lsv_average(p: &LaurentPoly, gens: &[TorsionPoint], sweep: &[u64]) -> Result<Table> {
    let m_p = mahler(p)?.value;
    let mut rows = Vec::new();
    if !gens.is_empty() {
        rows.push(lsv_row(p, &FiniteTorusSubgroup::new(gens.to_vec())?, m_p)?);
    }
    for &n in sweep {
        rows.push(lsv_row(p, &FiniteTorusSubgroup::full_torsion(n, p.dim())?, m_p)?);
    }
    Table::new("lsv-average", 0, &rows, true)
}

#[derive(Debug, Clone, Serialize)]
pub struct StageRow {
    pub stage: &'static str,
    pub item: &'static str,
    pub value: String,
}

/// Staged output of [`reduction_pipeline`].
#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub delta: i64,
    pub nu: f64,
    pub eps: f64,
    /// Variables split off by the monomial change.
    pub l: usize,
    pub v1: Vec<Vec<i64>>,
    pub eta1: Option<String>,
    pub xi1: String,
    /// Orders of the factors of `xi1 = eta xi`.
    pub e: u64,
    pub m: u64,
    pub i: usize,
    pub v2: Vec<Vec<i64>>,
    pub eta2: String,
    pub xi2: String,
    pub a: Vec<i64>,
    pub sigma: u64,
    pub delta_xi: i64,
    pub delta_lower_bound: f64,
    /// `#H`, the Galois group acting on the final univariate orbit.
    pub h_order: usize,
    pub q: String,
    pub deg_q: i64,
    pub h_q: f64,
    /// Mean of `log|P(zeta^sigma)|` over the `sigma` fixing both torsion factors.
    pub direct_average: f64,
    /// The same mean through the univariate polynomial.
    pub average: f64,
    pub m_q: f64,
    pub m_p: f64,
    pub abs_err: f64,
    pub error_shape: f64,
    pub ok: bool,
}

impl PipelineReport {
    pub fn stages(&self) -> Vec<StageRow> {
        let row = |stage, item, value: String| StageRow { stage, item, value };
        let mat = |v: &[Vec<i64>]| v.iter().map(|r| join(r)).collect::<Vec<_>>().join("; ");
        vec![
            row("input", "N", self.n.to_string()),
            row("input", "delta", self.delta.to_string()),
            row("input", "nu", self.nu.to_string()),
            row("input", "eps", self.eps.to_string()),
            row("monomial_change", "l", self.l.to_string()),
            row("monomial_change", "V", mat(&self.v1)),
            row("monomial_change", "eta", self.eta1.clone().unwrap_or_default()),
            row("monomial_change", "xi", self.xi1.clone()),
            row("factor", "E", self.e.to_string()),
            row("factor", "M", self.m.to_string()),
            row("factor", "i", self.i.to_string()),
            row("factor", "V", mat(&self.v2)),
            row("factor", "eta", self.eta2.clone()),
            row("factor", "xi", self.xi2.clone()),
            row("factor", "a", join(&self.a)),
            row("factor", "sigma", self.sigma.to_string()),
            row("factor", "delta_xi", self.delta_xi.to_string()),
            row("factor", "delta_lower_bound", self.delta_lower_bound.to_string()),
            row("specialize", "H_order", self.h_order.to_string()),
            row("specialize", "Q", self.q.clone()),
            row("specialize", "deg_Q", self.deg_q.to_string()),
            row("specialize", "h_Q", self.h_q.to_string()),
            row("average", "direct", self.direct_average.to_string()),
            row("average", "univariate", self.average.to_string()),
            row("average", "m_Q", self.m_q.to_string()),
            row("average", "m_P", self.m_p.to_string()),
            row("average", "abs_err", self.abs_err.to_string()),
            row("average", "error_shape", self.error_shape.to_string()),
            row("average", "ok", self.ok.to_string()),
        ]
    }
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Invariant(s) => Error::Invariant(format!("{name}: {s}")),
        other => Error::Invariant(format!("{name}: {other}")),
    })
}

/// Reduction of an orbit average to a univariate one: monomial change, factorisation of
/// the remaining torsion point, specialisation of the torsion part, and the univariate
/// experiment on the near-identity exponent.
///
/// Only the `sigma in G` that fix both torsion factors are averaged (the trivial coset);
/// the report checks that the direct and the reduced averages agree. Defaults are
/// `nu = 1 / (128 d^2)` and `eps = nu^d`.
pub fn reduction_pipeline(
    p: &LaurentPoly,
    zeta: &TorsionPoint,
    g: Option<&GaloisSubgroup>,
    nu: Option<f64>,
    eps: Option<f64>,
) -> Result<PipelineReport> {
    let d = p.dim();
    if zeta.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: zeta.dim(),
        });
    }
    if d > EXACT_DIM_CAP {
        return Err(Error::ExactCapExceeded {
            dim: d,
            cap: EXACT_DIM_CAP,
        });
    }
    let n = zeta.order();
    let full;
    let g = match g {
        Some(g) => g,
        None => {
            full = GaloisSubgroup::full(n);
            &full
        }
    };
    if g.modulus() != n {
        return Err(Error::OrderMismatch {
            group: g.modulus(),
            point: n,
        });
    }
    let nu = nu.unwrap_or(1.0 / (128.0 * (d * d) as f64));
    let eps = eps.unwrap_or(nu.powi(d as i32)).min(0.5);
    let delta = delta_point(zeta);

    // monomial change; its nu_l must sum to at most 1/2
    let nus = vec![nu.min(0.5 / (d.max(2) - 1) as f64); d - 1];
    let mc = stage("monomial_change", monomial_change(zeta, delta as f64, eps, &nus))?;
    let p1 = match &mc.eta {
        Some(eta) => stage("monomial_change", p.specialize_torsion(&mc.v, mc.l, eta))?,
        None => p.clone(),
    };
    let xi1 = mc.xi.clone();
    let e1 = mc.eta.as_ref().map_or(1, |e| e.order());
    let m1 = xi1.order();
    if m1 == 1 {
        return Err(Error::Invariant("monomial_change: the remaining torsion point is trivial".into()));
    }
    let g1 = stage("monomial_change", g.restrict_reduce(e1, m1))?;

    // factorisation of xi1, then the near-identity search over H
    let f0 = stage("factor", factor_torsion(&xi1, nu.min(0.25), None))?;
    let h = stage("factor", g1.restrict_reduce(f0.e, f0.m))?;
    let f = stage("factor", factor_torsion(&xi1, nu.min(0.25), Some(&h)))?;
    let d1 = xi1.dim();
    let j = d1 - f.i;
    if f.i == 0 {
        return Err(Error::Invariant("factor: xi is trivial".into()));
    }
    let q_multi = if j == 0 {
        p1.clone()
    } else {
        let head = f.eta.pow_matrix(&f.v).project(0..j);
        stage("specialize", p1.specialize_torsion(&f.v, j, &head))?
    };
    let cols: Vec<Vec<i64>> = f.a.iter().map(|&x| vec![x]).collect();
    let q = stage("specialize", q_multi.substitute_monomial(&cols))?.normalize_monomial().0;
    if q.is_zero() {
        return Err(Error::Invariant("specialize: Q vanishes identically".into()));
    }

    let rec = stage("average", univariate_orbit_experiment(&q, f.m, &h))?;
    // the sigma in G fixing eta1 and eta2
    let sigmas = g
        .elements()
        .iter()
        .copied()
        .filter(|&s| s % e1 == 1 % e1 && (s % m1) % f.e == 1 % f.e);
    let (direct, _, zeros) = orbit_mean(p, zeta, sigmas)?;
    if zeros > 0 {
        return Err(Error::ExactZero);
    }
    let m_p = mahler(p)?.value;
    let agree = (direct - rec.average).abs() <= 1e-8 * direct.abs().max(1.0);
    Ok(PipelineReport {
        n,
        delta,
        nu,
        eps,
        l: mc.l,
        v1: mc.v.clone(),
        eta1: mc.eta.as_ref().map(|e| e.to_string()),
        xi1: xi1.to_string(),
        e: f.e,
        m: f.m,
        i: f.i,
        v2: f.v.clone(),
        eta2: f.eta.to_string(),
        xi2: f.xi.to_string(),
        a: f.a.clone(),
        sigma: f.sigma,
        delta_xi: f.delta_xi,
        delta_lower_bound: f.delta_lower_bound,
        h_order: h.order(),
        deg_q: q.cleared_degree(),
        h_q: projective_height(&q)?,
        q: q.to_string(),
        direct_average: direct,
        average: rec.average,
        m_q: rec.m_q,
        m_p,
        abs_err: (rec.average - m_p).abs(),
        error_shape: rec.error_shape,
        ok: agree,
    })
}

pub fn cmd_reduction_pipeline(
    p: &LaurentPoly,
    zeta: &TorsionPoint,
    g: Option<&GaloisSubgroup>,
    nu: Option<f64>,
    eps: Option<f64>,
) -> Result<Table> {
    let r = reduction_pipeline(p, zeta, g, nu, eps)?;
    let mut t = Table::new("reduction-pipeline", 0, &r.stages(), r.ok)?;
    t.rows = serde_json::to_value(&r).map_err(|e| Error::Io(e.to_string()))?;
    Ok(t)
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitHit {
    pub zeta: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub delta: i64,
}

/// Cap on `sum_{N <= B} N^d`, the number of candidate points scanned by [`ih_search`].
pub const IH_SEARCH_CAP: u64 = 5_000_000;

/// Torsion points of order at most `b_max` at which `P` is an algebraic unit, one point per
/// Galois orbit: unit-ness is invariant under Galois conjugation.
pub fn ih_search(p: &LaurentPoly, b_max: u64) -> Result<(Vec<UnitHit>, usize)> {
    let d = p.dim();
    if d > 2 {
        return Err(Error::OutOfRange(format!("ih-search supports d <= 2, got {d}")));
    }
    p.integer_coeffs().ok_or(Error::NonInteger)?;
    let work: u64 = (1..=b_max).map(|n| n.pow(d as u32)).sum();
    if work > IH_SEARCH_CAP {
        return Err(Error::GroupTooLarge {
            size: work as u128,
            cap: IH_SEARCH_CAP as u128,
        });
    }
    let mut hits = Vec::new();
    let mut scanned = 0;
    for n in 1..=b_max {
        for z in orbit_representatives(n, d) {
            scanned += 1;
            match is_unit_at(p, &z) {
                Ok(true) => hits.push(UnitHit {
                    zeta: z.to_string(),
                    n,
                    delta: delta_point(&z),
                }),
                Ok(false) | Err(Error::ExactZero) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok((hits, scanned))
}

/// One point of exact order `n` from each Galois orbit in `mu_n^d`, `d <= 2`.
fn orbit_representatives(n: u64, d: usize) -> Vec<TorsionPoint> {
    let units = arith::units_mod(n);
    if d == 1 {
        return vec![TorsionPoint::new(&[1 % n as i64], n).expect("valid")];
    }
    let mut seen = vec![false; (n * n) as usize];
    let mut out = Vec::new();
    for b1 in 0..n {
        for b2 in 0..n {
            if seen[(b1 * n + b2) as usize] || gcd_u(gcd_u(b1, b2), n) != 1 {
                continue;
            }
            for &s in &units {
                seen[((s * b1 % n) * n + s * b2 % n) as usize] = true;
            }
            out.push(TorsionPoint::new(&[b1 as i64, b2 as i64], n).expect("valid"));
        }
    }
    out
}

pub fn cmd_ih_search(p: &LaurentPoly, b_max: u64) -> Result<Table> {
    let (hits, scanned) = ih_search(p, b_max)?;
    Ok(Table::new("ih-search", 0, &hits, true)?
        .note(format!("one point per Galois orbit, {scanned} orbits of order <= {b_max} scanned")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyFamily {
    /// Uniform degree in `1..=deg` and coefficients in `[-B, B]`.
    Random,
    /// `X^n Q(1/X) Q(X)` for random `Q` of degree at most `deg / 2`.
    Reciprocal,
}

/// Random squarefree integer polynomial with nonzero leading coefficient.
pub fn random_poly<R: Rng>(rng: &mut R, max_deg: usize, bound: i64, family: PolyFamily) -> IntPoly {
    loop {
        let deg = match family {
            PolyFamily::Random => rng.gen_range(1..=max_deg.max(1)),
            PolyFamily::Reciprocal => rng.gen_range(1..=(max_deg / 2).max(1)),
        };
        let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-bound..=bound)).collect();
        while c[deg] == 0 {
            c[deg] = rng.gen_range(-bound..=bound);
        }
        let q = IntPoly::from_i64(&c);
        let q = match family {
            PolyFamily::Random => q,
            PolyFamily::Reciprocal => {
                let (r, _) = q.reversed().strip_x_power();
                q.mul(&r)
            }
        };
        if crate::separation::discriminant_int(&q).is_ok_and(|x| x != num_bigint::BigInt::from(0)) {
            return q;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationRow {
    pub index: usize,
    pub audit: &'static str,
    pub deg: usize,
    pub k_pairs: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub ok: bool,
    pub excluded: usize,
}

/// Mignotte audits (both forms, closest and random pairings) and the repulsion audit on
/// seeded random squarefree polynomials.
pub fn separation_rows(count: usize, max_deg: usize, bound: i64, seed: u64, family: PolyFamily) -> Result<Vec<SeparationRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for index in 0..count {
        let q = random_poly(&mut rng, max_deg, bound, family);
        let zs = distinct_roots(&q)?;
        let random = random_maximal_pairing(zs.len(), &mut rng);
        let closest = closest_pairing(&zs);
        let audits = [
            ("mignotte_theorem_closest", mignotte_audit(&q, &closest, MignotteForm::Theorem)?),
            ("mignotte_theorem_random", mignotte_audit(&q, &random, MignotteForm::Theorem)?),
            ("mignotte_corollary_closest", mignotte_audit(&q, &closest, MignotteForm::Corollary)?),
            ("repulsion", repulsion_audit(&q)?),
        ];
        for (audit, a) in audits {
            rows.push(SeparationRow {
                index,
                audit,
                deg: a.deg,
                k_pairs: a.k_pairs,
                lhs: a.lhs,
                rhs: a.rhs,
                margin: a.margin,
                ok: a.ok,
                excluded: a.excluded,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_separation_audit(count: usize, max_deg: usize, bound: i64, seed: u64, family: PolyFamily) -> Result<Table> {
    let rows = separation_rows(count, max_deg, bound, seed, family)?;
    let ok = rows.iter().all(|r| r.ok);
    Table::new("separation-audit", seed, &rows, ok)
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub audit: &'static str,
    /// Character index or subgroup label.
    pub object: String,
    pub k: u64,
    pub lhs: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Gauss-sum bounds for every character mod `N <= n_max`, and the subgroup exponential-sum
/// bound for every subgroup when `N` is small enough to enumerate them.
pub fn gauss_rows(n_max: u64) -> Result<Vec<GaussRow>> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for r in gauss_audit(n) {
            rows.push(GaussRow {
                n,
                audit: "gauss",
                object: r.chi_id.to_string(),
                k: r.k,
                lhs: r.tau_abs,
                bound: r.bound,
                ok: r.ok(),
            });
        }
        if n <= SUBGROUP_ENUM_CAP {
            for r in subgroup_sum_audit(n)? {
                rows.push(GaussRow {
                    n,
                    audit: "subgroup",
                    ok: r.lhs <= r.bound + 1e-9,
                    object: r.subgroup,
                    k: r.k,
                    lhs: r.lhs,
                    bound: r.bound,
                });
            }
        }
    }
    Ok(rows)
}

pub fn cmd_gauss_audit(n_max: u64) -> Result<Table> {
    let rows = gauss_rows(n_max)?;
    let ok = rows.iter().all(|r| r.ok);
    Table::new("gauss-audit", 0, &rows, ok)
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyRow {
    pub n: usize,
    pub d: usize,
    pub discrepancy: f64,
    /// False when the set exceeded the exact cap and the value is a random-box lower bound.
    pub exact: bool,
}

pub fn cmd_discrepancy(ps: &PointSet, seed: u64) -> Result<Table> {
    let (value, exact) = match discrepancy(ps) {
        Ok(v) => (v, true),
        Err(Error::DiscrepancyCap { .. }) => (discrepancy_lower_bound(ps, 100_000, seed), false),
        Err(e) => return Err(e),
    };
    let row = DiscrepancyRow {
        n: ps.len(),
        d: ps.dim(),
        discrepancy: value,
        exact,
    };
    let t = Table::new("discrepancy", seed, &[row], true)?;
    Ok(if exact { t } else { t.note("point set above the exact cap: value is a lower bound") })
}

#[derive(Debug, Clone, Serialize)]
pub struct LawtonRow {
    pub a: String,
    pub rho: Option<i64>,
    pub deg: i64,
    pub k: usize,
    pub m_spec: f64,
    pub m_p: f64,
    pub abs_err: f64,
    pub bound_shape: f64,
    pub flagged: bool,
}

pub fn cmd_lawton(p: &LaurentPoly, a_list: &[Vec<i64>]) -> Result<Table> {
    let m_p = mahler(p)?;
    let rows = a_list
        .iter()
        .map(|a| {
            let r = lawton_experiment(p, a, &m_p)?;
            Ok(LawtonRow {
                a: join(&r.a),
                rho: r.rho,
                deg: r.deg,
                k: r.k,
                m_spec: r.m_spec,
                m_p: r.m_p,
                abs_err: r.abs_err,
                bound_shape: r.bound_shape,
                flagged: r.flagged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Table::new("lawton", 0, &rows, true)
}

#[derive(Debug, Clone, Serialize)]
pub struct AtoralRow {
    pub dim: usize,
    /// `yes`, `no`, `boundary` or `unknown`.
    pub verdict: &'static str,
    pub method: &'static str,
}

/// One variable: decided from the roots. Several variables: only the asymmetry
/// sufficient condition is available, and a symmetric polynomial gets `unknown`.
pub fn atoral(p: &LaurentPoly) -> Result<AtoralRow> {
    let verdict = |v: AtoralVerdict| match v {
        AtoralVerdict::Yes => "yes",
        AtoralVerdict::No => "no",
        AtoralVerdict::Boundary => "boundary",
    };
    if p.dim() == 1 {
        let (q, _) = p.normalize_monomial();
        if let Ok((ip, _)) = q.to_int_poly() {
            return Ok(AtoralRow {
                dim: 1,
                verdict: verdict(essentially_atoral_1d(&ip, 1e-9)),
                method: "roots",
            });
        }
        // the conjugate product has every root of Q among its roots
        let (qt, _) = conjugate_product(&q)?;
        let v = essentially_atoral_1d(&qt, 1e-9);
        return Ok(AtoralRow {
            dim: 1,
            verdict: if v == AtoralVerdict::Yes { "yes" } else { "unknown" },
            method: "conjugate_product_roots",
        });
    }
    Ok(AtoralRow {
        dim: p.dim(),
        verdict: if p.is_asymmetric().asymmetric { "yes" } else { "unknown" },
        method: "asymmetry",
    })
}

pub fn cmd_atoral(p: &LaurentPoly) -> Result<Table> {
    let row = atoral(p)?;
    let t = Table::new("atoral", 0, std::slice::from_ref(&row), true)?;
    Ok(if row.verdict == "unknown" && row.dim > 1 {
        t.note("symmetric polynomials can still be essentially atoral; asymmetry is only sufficient")
    } else {
        t
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime_power;

    fn poly(s: &str) -> LaurentPoly {
        read_poly(s, None).unwrap()
    }

    fn z(b: &[i64], n: u64) -> TorsionPoint {
        TorsionPoint::new(b, n).unwrap()
    }

    #[test]
    fn dims_are_inferred() {
        assert_eq!(infer_dim("x1 - 2"), 1);
        assert_eq!(infer_dim("1 + x1 + x3^2"), 3);
        assert_eq!(infer_dim("zeta(12) + x2"), 2);
        assert_eq!(infer_dim("5"), 1);
    }

    #[test]
    fn mahler_command() {
        let t = cmd_mahler(&poly("x1-2"), MethodChoice::Auto, 0).unwrap();
        assert!(t.ok);
        let v = t.rows[0]["value"].as_f64().unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-12);
        let t = cmd_mahler(&poly("x1^10+x1^9-x1^7-x1^6-x1^5-x1^4-x1^3+x1+1"), MethodChoice::Jensen, 0).unwrap();
        assert!((t.rows[0]["value"].as_f64().unwrap() - 0.1623576120).abs() < 1e-9);
        assert!(t.to_csv().starts_with("# atoral-lab v1, experiment=mahler, seed=0\npoly,method,value"));
        assert!(cmd_mahler(&poly("1+x1+x2"), MethodChoice::Jensen, 0).is_err());
    }

    #[test]
    fn orbit_sweeps() {
        let t = cmd_orbit_average(&poly("x1-2"), None, &[3, 11, 101, 1009]).unwrap();
        let errs: Vec<f64> = (0..4).map(|i| t.rows[i]["abs_err"].as_f64().unwrap()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        assert!((t.rows[0]["average"].as_f64().unwrap() - 7f64.ln() / 2.0).abs() < 1e-12);
        let t = cmd_orbit_average(&poly("x1"), None, &[5, 7]).unwrap();
        assert!(t.rows.as_array().unwrap().iter().all(|r| r["abs_err"].as_f64().unwrap() == 0.0));
        let t = cmd_orbit_average(&poly("1+x1+x2"), Some((&z(&[1, 2], 3), None)), &[]).unwrap();
        assert_eq!(t.rows[0]["zero_hits"], 2);
    }

    #[test]
    fn golden_points_have_growing_delta() {
        let deltas: Vec<i64> = [101u64, 1009, 10007]
            .iter()
            .map(|&n| delta_point(&golden_point(n, 2).unwrap()))
            .collect();
        assert!(deltas.windows(2).all(|w| w[1] > w[0]), "{deltas:?}");
        assert_eq!(golden_point(7, 1).unwrap(), z(&[1], 7));
    }

    #[test]
    fn lsv_examples() {
        let p = poly("x1 - 2");
        for n in [3u64, 8, 13] {
            let r = lsv_row(&p, &FiniteTorusSubgroup::full_torsion(n, 1).unwrap(), 2f64.ln()).unwrap();
            let want = (2f64.powi(n as i32) - 1.0).ln() / n as f64;
            assert!((r.mean - want).abs() < 1e-12);
        }
        let r = lsv_row(&read_poly("x1", Some(2)).unwrap(), &FiniteTorusSubgroup::full_torsion(4, 2).unwrap(), 0.0).unwrap();
        assert_eq!(r.mean, 0.0);
        let p = poly("x1 + x2 - 1");
        let m = mahler(&p).unwrap().value;
        let rows: Vec<LsvRow> = [5u64, 6, 13, 31]
            .iter()
            .map(|&n| lsv_row(&p, &FiniteTorusSubgroup::full_torsion(n, 2).unwrap(), m).unwrap())
            .collect();
        assert_eq!(rows.iter().map(|r| r.zero_hits).collect::<Vec<_>>(), vec![0, 2, 0, 0]);
        assert!(rows[2].abs_err < rows[0].abs_err && rows[3].abs_err < rows[2].abs_err);
    }

    #[test]
    fn pipeline_prime_order_is_trivial() {
        let p = poly("1 + x1 + x2");
        let r = reduction_pipeline(&p, &z(&[1, 5], 101), None, Some(0.25), None).unwrap();
        assert_eq!(r.e, 1);
        assert!(r.ok, "{r:?}");
        let r = reduction_pipeline(&poly("x1 - 2"), &z(&[3], 11), None, None, None).unwrap();
        assert!(r.ok && r.l == 0 && r.e == 1);
        assert!((r.average - r.direct_average).abs() < 1e-12);
    }

    #[test]
    fn pipeline_two_adic() {
        let p = poly("1 + x1 + x2");
        let n = 1u64 << 20;
        let zeta = z(&[(n / 2) as i64, 1], n);
        let r = reduction_pipeline(&p, &zeta, None, Some(0.25), None).unwrap();
        assert!(r.ok, "{r:?}");
        assert!(r.e > 1 || r.l > 0, "{r:?}");
    }

    #[test]
    fn ih_examples() {
        let (hits, _) = ih_search(&poly("1 - x1"), 200).unwrap();
        let orders: Vec<u64> = hits.iter().map(|h| h.n).collect();
        let want: Vec<u64> = (2..=200).filter(|&n| !is_prime_power(n)).collect();
        assert_eq!(orders, want);
        // oracle: the product of |P| over the Galois conjugates is the norm
        let p = poly("x1 + x2 - 1");
        let (hits, _) = ih_search(&p, 12).unwrap();
        let hit_set: Vec<String> = hits.iter().map(|h| h.zeta.clone()).collect();
        for n in 1..=12u64 {
            for zeta in orbit_representatives(n, 2) {
                let log_norm: f64 = arith::units_mod(n)
                    .iter()
                    .map(|&s| p.evaluate_torsion(&zeta.act(s)).unwrap().norm().ln())
                    .sum();
                let unit = log_norm.abs() < 1e-8;
                assert_eq!(unit, hit_set.contains(&zeta.to_string()), "{zeta}: {log_norm}");
            }
        }
        assert!(hit_set.contains(&"0/5,1/5".to_string()));
        // P = -1 on the coset x2 = -x1
        let h = hits.iter().find(|h| h.zeta == "1/6,4/6").unwrap();
        assert_eq!(h.delta, 2);
        let (hits, _) = ih_search(&poly("x1 - 3"), 50).unwrap();
        assert!(hits.is_empty());
    }

    #[test]
    fn orbit_representatives_cover() {
        for n in 1..=12u64 {
            let reps = orbit_representatives(n, 2);
            let exact: usize = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| gcd_u(gcd_u(a, b), n) == 1)
                .count();
            assert_eq!(reps.len() * arith::euler_phi(n) as usize, exact, "n = {n}");
        }
    }

    #[test]
    fn separation_is_deterministic_and_ok() {
        let a = cmd_separation_audit(20, 12, 5, 7, PolyFamily::Random).unwrap();
        let b = cmd_separation_audit(20, 12, 5, 7, PolyFamily::Random).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.ok);
        let r = cmd_separation_audit(10, 12, 3, 1, PolyFamily::Reciprocal).unwrap();
        assert!(r.ok);
        let lin = cmd_separation_audit(5, 1, 4, 2, PolyFamily::Random).unwrap();
        assert!(lin.ok);
    }

    #[test]
    fn gauss_small() {
        let t = cmd_gauss_audit(12).unwrap();
        assert!(t.ok);
    }

    #[test]
    fn lawton_and_atoral() {
        let a: Vec<Vec<i64>> = [5, 10, 20].iter().map(|&n| vec![1, n]).collect();
        let t = cmd_lawton(&poly("1+x1+x2"), &a).unwrap();
        let errs: Vec<f64> = (0..3).map(|i| t.rows[i]["abs_err"].as_f64().unwrap()).collect();
        assert!(errs[2] < errs[0], "{errs:?}");
        assert_eq!(atoral(&poly("x1^2-3*x1+1")).unwrap().verdict, "yes");
        assert_eq!(atoral(&poly("x1^2+x1+1")).unwrap().verdict, "yes");
        assert_eq!(atoral(&poly("x1^2-x1+1")).unwrap().verdict, "yes");
        assert_eq!(atoral(&poly("1+x1+x2")).unwrap().verdict, "yes");
        assert_eq!(atoral(&poly("x1+x1^-1+x2+x2^-1-4")).unwrap().verdict, "unknown");
        assert_eq!(atoral(&poly("x1 - zeta(3)")).unwrap().verdict, "yes");
    }

    #[test]
    fn discrepancy_command() {
        let t = cmd_discrepancy(&PointSet::equispaced(8), 0).unwrap();
        assert_eq!(t.rows[0]["discrepancy"].as_f64().unwrap(), 0.125);
        let big = PointSet::new(2, (0..200).map(|i| vec![i as f64 / 200.0, (i * 7 % 200) as f64 / 200.0]).collect()).unwrap();
        let t = cmd_discrepancy(&big, 1).unwrap();
        assert_eq!(t.rows[0]["exact"], false);
    }
}
