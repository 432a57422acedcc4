//! Mahler measures by Jensen's formula, fiberwise quadrature and a rank-1 lattice rule.

use atoral_lab::experiments::read_poly;
use atoral_lab::laurent::parse_poly;
use atoral_lab::mahler::{mahler, mahler_bounds, mahler_qmc, QmcRule};

fn main() -> atoral_lab::Result<()> {
    let lehmer = parse_poly("x1^10 + x1^9 - x1^7 - x1^6 - x1^5 - x1^4 - x1^3 + x1 + 1", 1)?;
    let m = mahler(&lehmer)?;
    println!("Lehmer: m = {:.12} ({:?}, {} roots near the circle)", m.value, m.method, m.near_circle_roots);

    for text in ["1 + x1 + x2", "1 + x1 + x2 + x3", "x1 + x1^-1 + x2 + x2^-1 - 4"] {
        let p = read_poly(text, None)?;
        let d = p.dim();
        let rec = mahler(&p)?;
        let qmc = mahler_qmc(&p, 200_000, QmcRule::for_dim(d))?;
        let (lo, hi) = mahler_bounds(&p)?;
        println!(
            "{text}: recursive {:.9} (est {:.1e}), lattice rule {:.9}, bounds [{lo:.4}, {hi:.4}]",
            rec.value, rec.est_error, qmc.value
        );
    }
    Ok(())
}
