//! Galois-orbit averages of log|P| approaching m(P) as the torsion order grows.

use atoral_lab::experiments::golden_point;
use atoral_lab::galois::{delta_point, orbit_average_log, GaloisSubgroup, TorsionPoint};
use atoral_lab::laurent::parse_poly;
use atoral_lab::mahler::mahler;

fn main() -> atoral_lab::Result<()> {
    let p = parse_poly("x1 - 2", 1)?;
    for n in [3u64, 11, 101, 1009] {
        let avg = orbit_average_log(&p, &TorsionPoint::new(&[1], n)?, &GaloisSubgroup::full(n))?;
        println!("x1 - 2, N = {n}: {:.8} (log 2 = {:.8})", avg.mean, 2f64.ln());
    }

    let p = parse_poly("x1 + x1^-1 + x2 + x2^-1 - 4", 2)?;
    let m = mahler(&p)?.value;
    for n in [101u64, 1009, 10007] {
        let zeta = golden_point(n, 2)?;
        let avg = orbit_average_log(&p, &zeta, &GaloisSubgroup::full(n))?;
        println!(
            "zeta = {zeta}, delta = {}: average {:.6}, m(P) = {m:.6}",
            delta_point(&zeta),
            avg.mean
        );
    }

    // a proper subgroup of the Galois group: the squares mod 101
    let squares: Vec<u64> = (1..101).map(|s| s * s % 101).collect();
    let g = GaloisSubgroup::from_elements(101, squares)?;
    let avg = orbit_average_log(&p, &golden_point(101, 2)?, &g)?;
    println!("index {} subgroup, conductor {}: {:.6}", g.index(), g.conductor(), avg.mean);
    Ok(())
}
