//! Averages over finite subgroups of the torus and the counting inequalities behind them.

use atoral_lab::experiments::lsv_row;
use atoral_lab::galois::{counting_audit, delta_group, FiniteTorusSubgroup, TorsionPoint};
use atoral_lab::laurent::parse_poly;
use atoral_lab::mahler::mahler;

fn main() -> atoral_lab::Result<()> {
    let p = parse_poly("1 + x1 + x2", 2)?;
    let m = mahler(&p)?.value;
    for n in [5u64, 13, 31, 101] {
        let g = FiniteTorusSubgroup::full_torsion(n, 2)?;
        let r = lsv_row(&p, &g, m)?;
        println!("mu_{n}^2: mean {:.6}, m(P) {m:.6}, {} zeros skipped", r.mean, r.zero_hits);
    }

    let g = FiniteTorusSubgroup::new(vec![TorsionPoint::new(&[1, 3], 10)?, TorsionPoint::new(&[0, 1], 2)?])?;
    let a = counting_audit(&g, 4, &[1.0, 2.0, 4.0], &[0.5, 1.0]);
    println!(
        "#G = {}, delta(G) = {}, margins: kernel {:.3}, small delta {:.3}, moments {:.3}",
        g.order(),
        delta_group(&g),
        a.kernel_margin,
        a.small_delta_margin,
        a.moment_margin
    );
    Ok(())
}
