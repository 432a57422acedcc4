//! The auxiliary polynomial hat P bounding fiber coefficients, and fiberwise Mahler
//! measures averaged over orbit point sets.

use atoral_lab::equidist::{fiber_mahler_average, hat_comparison, truncated_log_average, PointSet};
use atoral_lab::galois::{GaloisSubgroup, TorsionPoint};
use atoral_lab::laurent::parse_poly;
use num_complex::Complex64;

fn main() -> atoral_lab::Result<()> {
    let p = parse_poly("1 + x1 + x2 - 2*x1*x3^2 + x2^-1*x3", 3)?;
    let hat = p.auxiliary_hat(1)?;
    for x in [0.1, 0.37, 0.8] {
        let (lo, sup, hi) = hat_comparison(&p, &hat, &[x]);
        println!("x = {x}: {lo:.4} <= {sup:.4} <= {hi:.4}");
    }

    let q = parse_poly("1 + x1 + x2", 2)?;
    for n in [11u64, 101, 1009] {
        let ps = PointSet::orbit(&TorsionPoint::new(&[1], n)?, &GaloisSubgroup::full(n))?;
        let f = fiber_mahler_average(&q, 1, &ps)?;
        println!("N = {n}: mean fiber measure {:.8}, m(P) {:.8}", f.mean_fiber_measure, f.m_p);
    }

    let t = truncated_log_average(&TorsionPoint::new(&[1], 1009)?, &GaloisSubgroup::full(1009), Complex64::new(0.6, 0.8), 1e-3)?;
    println!("truncated log average at alpha on the circle: {:.5} ({} points cut)", t.average, t.excluded);
    Ok(())
}
