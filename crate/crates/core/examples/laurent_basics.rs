//! Laurent polynomials with cyclotomic coefficients, exact values at torsion points and
//! monomial substitutions.

use atoral_lab::galois::{exact_value, TorsionPoint};
use atoral_lab::laurent::{cyclotomic_polynomial, parse_poly, resultant, CycloNumber, IntPoly};

fn main() -> atoral_lab::Result<()> {
    let p = parse_poly("2*x1^2*x2^-1 - x1 + 3/2", 2)?;
    println!("P = {p}, degree {}, terms {}", p.total_degree(), p.num_terms());
    let zeta = TorsionPoint::new(&[1, 2], 5)?;
    let v = exact_value(&p, &zeta)?;
    println!("P({zeta}) = {v} ~ {:.6}", v.to_complex());

    let q = p.substitute_monomial(&[vec![1], vec![3]])?;
    println!("P(X, X^3) = {q}");
    let w = CycloNumber::root_of_unity(12, 1);
    println!("zeta_12 + zeta_12^-1 = {}", w.add(&w.conj()));

    let phi = cyclotomic_polynomial(12);
    println!("Phi_12 = {phi}, Res(Phi_12, x - 2) = {}", resultant(&phi, &IntPoly::from_i64(&[-2, 1])));
    let (cleared, shift) = parse_poly("x1^-2 + x1^-1 + 1", 1)?.clear_monomial();
    println!("cleared: {cleared} (shift {shift:?})");
    Ok(())
}
