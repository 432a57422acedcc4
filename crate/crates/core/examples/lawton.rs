//! m(P(X^a1, ..., X^ad)) converging to m(P) as rho(a) grows.

use atoral_lab::laurent::parse_poly;
use atoral_lab::mahler::{lawton_experiment, mahler};

fn main() -> atoral_lab::Result<()> {
    let p = parse_poly("1 + x1 + x2", 2)?;
    let m = mahler(&p)?;
    for n in [2i64, 5, 10, 20, 40, 80, 160] {
        let r = lawton_experiment(&p, &[1, n], &m)?;
        println!("a = (1, {n}): rho = {:?}, m = {:.8}, error {:.2e}", r.rho, r.m_spec, r.abs_err);
    }
    let q = parse_poly("1 + x1 + x2 + x3", 3)?;
    let m = mahler(&q)?;
    for a in [[1i64, 4, 16], [1, 10, 100], [1, 31, 961]] {
        let r = lawton_experiment(&q, &a, &m)?;
        println!("a = {a:?}: rho = {:?}, error {:.2e}", r.rho, r.abs_err);
    }
    Ok(())
}
