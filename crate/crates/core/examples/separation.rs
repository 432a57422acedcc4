//! Root separation audits: Mignotte's product bound and the unit-circle repulsion bound.

use atoral_lab::experiments::{separation_rows, PolyFamily};
use atoral_lab::laurent::IntPoly;
use atoral_lab::separation::{closest_pairing, distinct_roots, mignotte_audit, repulsion_audit, MignotteForm};

fn main() -> atoral_lab::Result<()> {
    let q = IntPoly::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    let pairs = closest_pairing(&distinct_roots(&q)?);
    let a = mignotte_audit(&q, &pairs, MignotteForm::Theorem)?;
    println!("Lehmer, Mignotte: {:.4} <= {:.4}", a.lhs, a.rhs);
    let a = repulsion_audit(&q)?;
    println!("Lehmer, repulsion: {:.4} <= {:.4} ({} roots on the circle)", a.lhs, a.rhs, a.excluded);

    for family in [PolyFamily::Random, PolyFamily::Reciprocal] {
        let rows = separation_rows(50, 20, 10, 1, family)?;
        let worst = rows.iter().filter(|r| r.k_pairs > 0).map(|r| r.margin).fold(f64::INFINITY, f64::min);
        println!("{family:?}: {} rows, all ok = {}, smallest margin {worst:.3}", rows.len(), rows.iter().all(|r| r.ok));
    }
    Ok(())
}
