//! Global adaptive Gauss-Kronrod (7/15) quadrature on an interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    /// Deepest bisection level reached.
    pub depth: usize,
    pub evals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: usize,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integrates `f` over `[a, b]`, bisecting the worst piece until the summed error
/// estimate is below `tol` or `max_pieces` is reached.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64, max_pieces: usize) -> QuadResult {
    let (v, e) = kronrod(&mut f, a, b);
    let mut heap = BinaryHeap::from([Piece {
        a,
        b,
        value: v,
        error: e,
        depth: 0,
    }]);
    let mut evals = 15;
    let mut depth = 0;
    let mut total_err = e;
    while total_err > tol && heap.len() < max_pieces {
        let p = heap.pop().unwrap();
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = kronrod(&mut f, p.a, m);
        let (v2, e2) = kronrod(&mut f, m, p.b);
        evals += 30;
        depth = depth.max(p.depth + 1);
        total_err += e1 + e2 - p.error;
        for (a, b, value, error) in [(p.a, m, v1, e1), (m, p.b, v2, e2)] {
            heap.push(Piece {
                a,
                b,
                value,
                error,
                depth: p.depth + 1,
            });
        }
    }
    // sum in position order so the result does not depend on heap layout
    let mut pieces = heap.into_vec();
    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = crate::arith::kahan_sum(pieces.iter().map(|p| p.value));
    let error = pieces.iter().map(|p| p.error).sum();
    QuadResult {
        value,
        error,
        depth,
        evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_and_kinked() {
        let r = integrate(|x| x.exp(), 0.0, 1.0, 1e-13, 100);
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-13);
        let r = integrate(|x| (x - 1.0 / 3.0).abs(), 0.0, 1.0, 1e-12, 1000);
        assert!((r.value - 5.0 / 18.0).abs() < 1e-11);
        // integrable log singularity
        let r = integrate(|x| (x - 0.3).abs().ln(), 0.0, 1.0, 1e-10, 2000);
        let want = 0.3 * 0.3f64.ln() - 0.3 + 0.7 * 0.7f64.ln() - 0.7;
        assert!((r.value - want).abs() < 1e-9, "{}", r.value - want);
    }
}
