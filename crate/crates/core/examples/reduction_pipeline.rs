//! The staged reduction of a bivariate orbit average to a univariate one.

use atoral_lab::experiments::reduction_pipeline;
use atoral_lab::galois::TorsionPoint;
use atoral_lab::laurent::parse_poly;

fn main() -> atoral_lab::Result<()> {
    let p = parse_poly("1 + x1 + x2", 2)?;
    let n = 1u64 << 20;
    let zeta = TorsionPoint::new(&[(n / 2) as i64, 1], n)?;
    let r = reduction_pipeline(&p, &zeta, None, Some(0.25), None)?;
    for s in r.stages() {
        println!("{:<16} {:<18} {}", s.stage, s.item, s.value);
    }

    let r = reduction_pipeline(&p, &TorsionPoint::new(&[1, 5], 101)?, None, None, None)?;
    println!("prime order: E = {}, direct {:.9} = univariate {:.9}", r.e, r.direct_average, r.average);
    Ok(())
}
