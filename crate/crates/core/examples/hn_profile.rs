//! Lattices of torsion points, their Harder-Narasimhan profiles and the factorisation
//! zeta = eta * xi.

use atoral_lab::galois::{delta_point, TorsionPoint};
use atoral_lab::lattice::{factor_torsion, hn_profile, lambda_nu, lattice_of_torsion, monomial_change, Norm};

fn main() -> atoral_lab::Result<()> {
    for (b, n) in [(vec![1i64, 5, 25], 127u64), (vec![60, 1, 7], 120), (vec![131_072, 7], 262_144)] {
        let zeta = TorsionPoint::new(&b, n)?;
        let lat = lattice_of_torsion(&zeta);
        let p = hn_profile(&lat)?;
        println!("zeta = {zeta}: lambda_1 = {:.3}, delta = {}", lat.lambda1(Norm::Euclidean), delta_point(&zeta));
        println!("  slopes {:?}, jumps at {:?}", p.slopes, p.jump_ranks);
        let (j, lnu) = lambda_nu(&p, 0.25)?;
        if j > 0 {
            println!("  Lambda(1/4) has rank {j}: {lnu}");
        }
        let f = factor_torsion(&zeta, 0.25, None)?;
        println!("  eta = {} (E = {}), xi = {} (M = {}), delta(xi) = {}", f.eta, f.e, f.xi, f.m, f.delta_xi);
    }
    let n = 1u64 << 20;
    let zeta = TorsionPoint::new(&[(n / 2) as i64, 1], n)?;
    let r = monomial_change(&zeta, 1024.0, 0.25, &[0.25])?;
    println!("monomial change: l = {}, V = {:?}, xi = {}", r.l, r.v, r.xi);
    Ok(())
}
