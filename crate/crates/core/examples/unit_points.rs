//! Torsion points at which an integer polynomial takes unit values.

use atoral_lab::experiments::ih_search;
use atoral_lab::galois::{norm_at_torsion, TorsionPoint};
use atoral_lab::laurent::parse_poly;

fn main() -> atoral_lab::Result<()> {
    let p = parse_poly("1 - x1", 1)?;
    for n in [8u64, 9, 12, 30] {
        println!("norm of 1 - e(1/{n}) = {}", norm_at_torsion(&p, &TorsionPoint::new(&[1], n)?)?);
    }
    let (hits, _) = ih_search(&p, 40)?;
    println!("unit orders up to 40: {:?}", hits.iter().map(|h| h.n).collect::<Vec<_>>());

    let q = parse_poly("x1 + x2 - 1", 2)?;
    let (hits, scanned) = ih_search(&q, 12)?;
    println!("x1 + x2 - 1: {} unit orbits among {scanned}", hits.len());
    for h in hits.iter().take(8) {
        println!("  {} delta = {}", h.zeta, h.delta);
    }
    Ok(())
}
