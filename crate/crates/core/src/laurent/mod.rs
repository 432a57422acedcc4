//! Laurent polynomials over cyclotomic fields and univariate integer polynomials.

pub mod cyclo;
pub mod intpoly;
mod parse;
mod poly;

pub use cyclo::CycloNumber;
pub use intpoly::{
    cyclotomic_polynomial, discriminant, resultant, strip_cyclotomic_factors, CyclotomicSplit,
    IntPoly,
};
pub use parse::parse_poly;
pub use poly::{Asymmetry, ComplexLaurent, Exponent, LaurentPoly};

pub(crate) use poly::{bigint_ln, primitive_integer_vector};

use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AtoralVerdict {
    Yes,
    No,
    Boundary,
}

/// Decides whether a nonzero univariate integer polynomial avoids points of infinite
/// order on the unit circle: cyclotomic factors are removed exactly, the remaining
/// roots are located numerically and compared against `tol`.
pub fn essentially_atoral_1d(q: &IntPoly, tol: f64) -> AtoralVerdict {
    let (stripped, _) = strip_cyclotomic_factors(q).remainder.strip_x_power();
    if stripped.degree().unwrap_or(0) == 0 {
        return AtoralVerdict::Yes;
    }
    let Ok(rs) = roots::roots_int(&stripped) else {
        return AtoralVerdict::Boundary;
    };
    let mut boundary = false;
    for r in &rs.roots {
        let gap = (r.z.norm() - 1.0).abs();
        if gap < tol && r.error_bound < tol {
            return AtoralVerdict::No;
        }
        if gap < 2.0 * tol {
            boundary = true;
        }
    }
    if boundary {
        AtoralVerdict::Boundary
    } else {
        AtoralVerdict::Yes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoral_examples() {
        let tol = 1e-8;
        assert_eq!(
            essentially_atoral_1d(&IntPoly::from_i64(&[1, -3, 1]), tol),
            AtoralVerdict::Yes
        );
        let lehmer = IntPoly::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert_eq!(essentially_atoral_1d(&lehmer, tol), AtoralVerdict::No);
        assert_eq!(
            essentially_atoral_1d(&IntPoly::from_i64(&[1, -1, 1]), tol),
            AtoralVerdict::Yes
        );
        // (x^2 - x + 1)(x - 2)
        assert_eq!(
            essentially_atoral_1d(&IntPoly::from_i64(&[-2, 3, -3, 1]), tol),
            AtoralVerdict::Yes
        );
    }
}
