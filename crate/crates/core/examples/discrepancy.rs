//! Exact discrepancy of small point sets, and the Koksma and modulus-of-continuity bounds.

use atoral_lab::equidist::{discrepancy, discrepancy_lower_bound, koksma_audit, numerical_integration_audit, Modulus, PointSet};
use atoral_lab::galois::{GaloisSubgroup, TorsionPoint};

fn main() -> atoral_lab::Result<()> {
    for n in [4usize, 10, 64] {
        println!("D(k/{n}) = {}", discrepancy(&PointSet::equispaced(n))?);
    }
    let orbit = PointSet::orbit(&TorsionPoint::new(&[1, 4], 11)?, &GaloisSubgroup::full(11))?;
    println!("orbit of (1,4)/11: D = {:.4}", discrepancy(&orbit)?);
    let big = PointSet::orbit(&TorsionPoint::new(&[1, 38], 101)?, &GaloisSubgroup::full(101))?;
    println!("orbit of (1,38)/101: D = {:.4}", discrepancy(&big)?);
    let wide = PointSet::orbit(&TorsionPoint::new(&[1, 620], 1009)?, &GaloisSubgroup::full(1009))?;
    println!("orbit of (1,620)/1009: D >= {:.4} (random boxes)", discrepancy_lower_bound(&wide, 20_000, 0));

    let ps = PointSet::orbit(&TorsionPoint::new(&[1], 101)?, &GaloisSubgroup::full(101))?;
    let a = koksma_audit(|x| x * x, 1.0, &ps, 1.0 / 3.0)?;
    println!("Koksma for x^2: {:.2e} <= {:.2e}", a.lhs, a.rhs);
    let lip = |t: f64| 2.0 * t;
    let a = numerical_integration_audit(|x: &[f64]| x[0] * x[1], Modulus::Exact(&lip), &orbit, 0.25)?;
    println!("x1 x2 on the orbit: {:.3e} <= {:.3e}", a.lhs, a.rhs);
    Ok(())
}
