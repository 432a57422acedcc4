use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

use super::cyclo::CycloNumber;
use super::intpoly::IntPoly;
use crate::arith;
use crate::error::{Error, Result};
use crate::galois::TorsionPoint;
use crate::lattice::matrix;

pub type Exponent = Vec<i64>;

/// Sparse Laurent polynomial in `dim` variables with coefficients in a single
/// cyclotomic field `Q(zeta_m)`.
#[derive(Debug, Clone)]
pub struct LaurentPoly {
    dim: usize,
    conductor: u64,
    terms: BTreeMap<Exponent, CycloNumber>,
}

// Coefficients compare after re-embedding, so the stored conductor is not part of equality.
impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|(a, b)| a == b)
    }
}

/// Outcome of the involution test: `witness = Some((s, mu))` means
/// `involution_reverse(P) = s * x^mu * P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Asymmetry {
    pub asymmetric: bool,
    pub witness: Option<(i8, Exponent)>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1);
        LaurentPoly {
            dim,
            conductor: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: CycloNumber) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn monomial(e: Exponent, c: CycloNumber) -> Self {
        let mut p = Self::zero(e.len());
        p.add_term(e, c);
        p
    }

    /// Sums colliding exponents; zero results are dropped.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, CycloNumber)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(dim: usize, terms: &[(Vec<i64>, i64)]) -> Self {
        Self::from_terms(
            dim,
            terms
                .iter()
                .map(|(e, c)| (e.clone(), CycloNumber::from_int(*c))),
        )
        .expect("exponent lengths must equal dim")
    }

    fn add_term(&mut self, e: Exponent, c: CycloNumber) {
        if c.is_zero() {
            return;
        }
        let cm = c.conductor();
        if !self.conductor.is_multiple_of(cm) {
            let l = arith::lcm_u(self.conductor, cm);
            self.reembed(l);
        }
        let c = c.embed(self.conductor);
        let sum = match self.terms.remove(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    fn reembed(&mut self, m: u64) {
        self.conductor = m;
        for c in self.terms.values_mut() {
            *c = c.embed(m);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &CycloNumber)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> Option<&CycloNumber> {
        self.terms.get(e)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.dim, other.dim);
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            dim: self.dim,
            conductor: self.conductor,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.dim, other.dim);
        let mut p = Self::zero(self.dim);
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let s: Exponent = e.iter().zip(f).map(|(a, b)| a + b).collect();
                p.add_term(s, c.mul(d));
            }
        }
        p
    }

    pub fn scale(&self, c: &CycloNumber) -> LaurentPoly {
        let mut p = Self::zero(self.dim);
        for (e, d) in &self.terms {
            p.add_term(e.clone(), d.mul(c));
        }
        p
    }

    /// Multiplies by `x^shift`.
    pub fn shift(&self, shift: &[i64]) -> LaurentPoly {
        assert_eq!(shift.len(), self.dim);
        LaurentPoly {
            dim: self.dim,
            conductor: self.conductor,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// All coefficients rational.
    pub fn rational_coeffs(&self) -> Option<Vec<(Exponent, BigRational)>> {
        self.terms
            .iter()
            .map(|(e, c)| c.as_rational().map(|q| (e.clone(), q)))
            .collect()
    }

    /// All coefficients integers.
    pub fn integer_coeffs(&self) -> Option<Vec<(Exponent, BigInt)>> {
        self.rational_coeffs()?
            .into_iter()
            .map(|(e, q)| q.is_integer().then(|| (e, q.to_integer())))
            .collect()
    }

    /// Coefficients under the principal embedding.
    pub fn complex_terms(&self) -> Vec<(Exponent, Complex64)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.to_complex()))
            .collect()
    }

    pub fn to_complex(&self) -> ComplexLaurent {
        ComplexLaurent {
            dim: self.dim,
            terms: self.complex_terms(),
        }
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        self.to_complex().evaluate(z)
    }

    /// Evaluation at a torsion point with exponents reduced mod the order before the
    /// trigonometric step.
    pub fn evaluate_torsion(&self, zeta: &TorsionPoint) -> Result<Complex64> {
        if zeta.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: zeta.dim(),
            });
        }
        let mut re = arith::KahanSum::new();
        let mut im = arith::KahanSum::new();
        for (e, c) in self.complex_terms() {
            let w = c * arith::e_frac(zeta.pairing(&e) as i64, zeta.order());
            re.add(w.re);
            im.add(w.im);
        }
        Ok(Complex64::new(re.value(), im.value()))
    }

    /// Term `e -> c` becomes `e^T A -> c` for a `d x n` integer matrix `A`.
    pub fn substitute_monomial(&self, a: &[Vec<i64>]) -> Result<LaurentPoly> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.len(),
            });
        }
        let n = a.first().map_or(0, |r| r.len());
        if n == 0 || a.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n.max(1),
                found: 0,
            });
        }
        Self::from_terms(
            n,
            self.terms.iter().map(|(e, c)| {
                let img: Exponent = (0..n)
                    .map(|j| e.iter().zip(a).map(|(ei, row)| ei * row[j]).sum())
                    .collect();
                (img, c.clone())
            }),
        )
    }

    /// `e -> c` becomes `e -> c * eta^e`.
    pub fn twist(&self, eta: &TorsionPoint) -> Result<LaurentPoly> {
        if eta.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: eta.dim(),
            });
        }
        Self::from_terms(
            self.dim,
            self.terms.iter().map(|(e, c)| {
                (
                    e.clone(),
                    c.mul_root_of_unity(eta.order(), eta.pairing(e) as i64),
                )
            }),
        )
    }

    /// `conj(P)(x_1^{-1}, ..., x_d^{-1})`.
    pub fn involution_reverse(&self) -> LaurentPoly {
        LaurentPoly {
            dim: self.dim,
            conductor: self.conductor,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.conj()))
                .collect(),
        }
    }

    /// Tests whether `involution_reverse(P) = s * x^mu * P` for some sign and monomial.
    /// Irreducibility is the caller's responsibility.
    pub fn is_asymmetric(&self) -> Asymmetry {
        let r = self.involution_reverse();
        let (Some(p0), Some(r0)) = (self.terms.keys().next(), r.terms.keys().next()) else {
            return Asymmetry {
                asymmetric: false,
                witness: Some((1, vec![0; self.dim])),
            };
        };
        let mu: Exponent = r0.iter().zip(p0).map(|(a, b)| a - b).collect();
        let shifted = self.shift(&mu);
        for s in [1i8, -1] {
            let cand = if s == 1 { shifted.clone() } else { shifted.neg() };
            if cand == r {
                return Asymmetry {
                    asymmetric: false,
                    witness: Some((s, mu)),
                };
            }
        }
        Asymmetry {
            asymmetric: true,
            witness: None,
        }
    }

    /// `|P|`: largest coefficient modulus under the principal embedding.
    pub fn coeff_sup_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_complex().norm())
            .fold(0.0, f64::max)
    }

    /// `max sum |e_i|` over the support (0 for the zero polynomial).
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|x| x.abs()).sum())
            .max()
            .unwrap_or(0)
    }

    /// `max sum e_i` after clearing to a polynomial coprime to `x_1 ... x_d`.
    pub fn cleared_degree(&self) -> i64 {
        let (q, _) = self.normalize_monomial();
        q.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Multiplies by the smallest monomial making every exponent nonnegative: only
    /// variables that occur with negative exponents are shifted. Returns the shift.
    pub fn clear_monomial(&self) -> (LaurentPoly, Exponent) {
        if self.is_zero() {
            return (self.clone(), vec![0; self.dim]);
        }
        let shift: Exponent = (0..self.dim)
            .map(|i| (-self.terms.keys().map(|e| e[i]).min().unwrap()).max(0))
            .collect();
        (self.shift(&shift), shift)
    }

    /// Shifts every variable so its smallest exponent is zero; the result is a
    /// polynomial not divisible by any `x_i`.
    pub fn normalize_monomial(&self) -> (LaurentPoly, Exponent) {
        if self.is_zero() {
            return (self.clone(), vec![0; self.dim]);
        }
        let shift: Exponent = (0..self.dim)
            .map(|i| -self.terms.keys().map(|e| e[i]).min().unwrap())
            .collect();
        (self.shift(&shift), shift)
    }

    /// `log max |c_i|` after clearing denominators and content, for rational coefficients.
    pub fn height_rational(&self) -> Result<f64> {
        let qs = self.rational_coeffs().ok_or(Error::NonRational)?;
        if qs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let ints = primitive_integer_vector(qs.iter().map(|(_, q)| q));
        let max = ints.iter().map(|c| c.abs()).max().unwrap();
        Ok(bigint_ln(&max))
    }

    /// `sum_i p_i(x) * conj(p_i)(x^{-1})` where `P = sum_i p_i(x_1..x_l) x'^{i}`.
    pub fn auxiliary_hat(&self, l: usize) -> Result<LaurentPoly> {
        if l == 0 || l >= self.dim {
            return Err(Error::OutOfRange(format!(
                "l = {l} must lie in 1..{}",
                self.dim - 1
            )));
        }
        let mut groups: BTreeMap<Exponent, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let head = e[..l].to_vec();
            groups
                .entry(e[l..].to_vec())
                .or_insert_with(|| LaurentPoly::zero(l))
                .add_term(head, c.clone());
        }
        let mut hat = LaurentPoly::zero(l);
        for p in groups.values() {
            hat = hat.add(&p.mul(&p.involution_reverse()));
        }
        Ok(hat)
    }

    /// `Q = P(X^{V^{-1}})` cleared to a polynomial coprime to `x_1 ... x_d`.
    pub fn change_coordinates(&self, v: &[Vec<i64>]) -> Result<LaurentPoly> {
        let vinv = matrix::inverse_unimodular(v).ok_or(Error::NotUnimodular)?;
        let q = self.substitute_monomial(&matrix::transpose(&vinv))?;
        Ok(q.clear_monomial().0)
    }

    /// `P_{V,eta}`: [`Self::change_coordinates`] followed by setting the first `l`
    /// variables to the torsion point `eta` (exact).
    pub fn specialize_torsion(
        &self,
        v: &[Vec<i64>],
        l: usize,
        eta: &TorsionPoint,
    ) -> Result<LaurentPoly> {
        if l >= self.dim || (l > 0 && eta.dim() != l) {
            return Err(Error::DimensionMismatch {
                expected: l,
                found: eta.dim(),
            });
        }
        let q = self.change_coordinates(v)?;
        if l == 0 {
            return Ok(q);
        }
        let n = eta.order();
        LaurentPoly::from_terms(
            self.dim - l,
            q.terms.iter().map(|(e, c)| {
                let k = eta.pairing(&e[..l]);
                (e[l..].to_vec(), c.mul_root_of_unity(n, k as i64))
            }),
        )
    }

    /// `P_{V,z}` with complex `z` for the first `l` variables.
    pub fn specialize_complex(
        &self,
        v: &[Vec<i64>],
        l: usize,
        z: &[Complex64],
    ) -> Result<ComplexLaurent> {
        if l >= self.dim || z.len() != l {
            return Err(Error::DimensionMismatch {
                expected: l,
                found: z.len(),
            });
        }
        let q = self.change_coordinates(v)?;
        Ok(q.to_complex().fiber(z))
    }

    /// Univariate integer polynomial `x^s * P`, returning `(poly, s)` with `s` minimal.
    pub fn to_int_poly(&self) -> Result<(IntPoly, i64)> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.dim,
            });
        }
        let ints = self.integer_coeffs().ok_or(Error::NonInteger)?;
        if ints.is_empty() {
            return Ok((IntPoly::zero(), 0));
        }
        let lo = ints.iter().map(|(e, _)| e[0]).min().unwrap();
        let hi = ints.iter().map(|(e, _)| e[0]).max().unwrap();
        let mut c = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, v) in ints {
            c[(e[0] - lo) as usize] = v;
        }
        Ok((IntPoly::new(c), -lo))
    }

    pub fn from_int_poly(p: &IntPoly) -> LaurentPoly {
        LaurentPoly::from_terms(
            1,
            p.coeffs().iter().enumerate().map(|(i, c)| {
                (
                    vec![i as i64],
                    CycloNumber::from_rational(BigRational::from_integer(c.clone())),
                )
            }),
        )
        .unwrap()
    }
}

/// Clears denominators and content of a list of rationals.
pub(crate) fn primitive_integer_vector<'a, I>(qs: I) -> Vec<BigInt>
where
    I: Iterator<Item = &'a BigRational> + Clone,
{
    let l = qs
        .clone()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.map(|q| (q * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

pub(crate) fn bigint_ln(x: &BigInt) -> f64 {
    if let Some(f) = x.to_f64().filter(|f| f.is_finite()) {
        return f.abs().ln();
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Laurent polynomial with floating complex coefficients: fibers and specializations.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexLaurent {
    pub dim: usize,
    pub terms: Vec<(Exponent, Complex64)>,
}

impl ComplexLaurent {
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        if let Some(i) = z.iter().position(|w| *w == Complex64::new(0.0, 0.0)) {
            return Err(Error::ZeroCoordinate(i));
        }
        let mut re = arith::KahanSum::new();
        let mut im = arith::KahanSum::new();
        for (e, c) in &self.terms {
            let mut w = *c;
            for (zi, &ei) in z.iter().zip(e) {
                w *= zi.powi(ei as i32);
            }
            re.add(w.re);
            im.add(w.im);
        }
        Ok(Complex64::new(re.value(), im.value()))
    }

    /// Evaluation on the torus at `e(x)`.
    pub fn evaluate_angles(&self, x: &[f64]) -> Complex64 {
        let mut re = arith::KahanSum::new();
        let mut im = arith::KahanSum::new();
        for (e, c) in &self.terms {
            let phase: f64 = e.iter().zip(x).map(|(&ei, xi)| ei as f64 * xi).sum();
            let w = c * arith::e(phase.rem_euclid(1.0));
            re.add(w.re);
            im.add(w.im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// Sets the first `z.len()` variables to `z`; colliding terms are summed.
    pub fn fiber(&self, z: &[Complex64]) -> ComplexLaurent {
        let l = z.len();
        let mut acc: BTreeMap<Exponent, Complex64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut w = *c;
            for (zi, &ei) in z.iter().zip(&e[..l]) {
                w *= zi.powi(ei as i32);
            }
            *acc.entry(e[l..].to_vec()).or_default() += w;
        }
        ComplexLaurent {
            dim: self.dim - l,
            terms: acc.into_iter().collect(),
        }
    }

    /// Fiber over the torus point `e(x)`.
    pub fn fiber_angles(&self, x: &[f64]) -> ComplexLaurent {
        let l = x.len();
        let mut acc: BTreeMap<Exponent, Complex64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let phase: f64 = e[..l].iter().zip(x).map(|(&ei, xi)| ei as f64 * xi).sum();
            *acc.entry(e[l..].to_vec()).or_default() += c * arith::e(phase.rem_euclid(1.0));
        }
        ComplexLaurent {
            dim: self.dim - l,
            terms: acc.into_iter().collect(),
        }
    }

    /// Dense ascending coefficients of a univariate polynomial, after dividing by the
    /// lowest power of `x` present. Exact zeros are kept, so callers decide on trimming.
    pub fn univariate_dense(&self) -> (Vec<Complex64>, i64) {
        assert_eq!(self.dim, 1);
        if self.terms.is_empty() {
            return (Vec::new(), 0);
        }
        let lo = self.terms.iter().map(|(e, _)| e[0]).min().unwrap();
        let hi = self.terms.iter().map(|(e, _)| e[0]).max().unwrap();
        let mut c = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (e, v) in &self.terms {
            c[(e[0] - lo) as usize] += v;
        }
        (c, lo)
    }

    pub fn sup_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_poly;

    fn p(s: &str, d: usize) -> LaurentPoly {
        parse_poly(s, d).unwrap()
    }

    #[test]
    fn substitution_examples() {
        let q = p("x1+x2", 2).substitute_monomial(&[vec![2], vec![3]]).unwrap();
        assert_eq!(q, p("x1^2 + x1^3", 1));
        let q = p("x1*x2 + x1 + 1", 2)
            .substitute_monomial(&[vec![1], vec![-1]])
            .unwrap();
        assert_eq!(q, p("2 + x1", 1));
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(p("x1+x2", 2).substitute_monomial(&id).unwrap(), p("x1+x2", 2));
    }

    #[test]
    fn twist_examples() {
        let one = TorsionPoint::identity(1);
        assert_eq!(p("x1+1", 1).twist(&one).unwrap(), p("x1+1", 1));
        let half = TorsionPoint::new(&[1], 2).unwrap();
        assert_eq!(p("x1+1", 1).twist(&half).unwrap(), p("-x1+1", 1));
        let q = TorsionPoint::new(&[1, 1], 4).unwrap();
        assert_eq!(p("x1*x2", 2).twist(&q).unwrap(), p("-x1*x2", 2));
    }

    #[test]
    fn involution_examples() {
        assert_eq!(p("x1-2", 1).involution_reverse(), p("x1^-1 - 2", 1));
        assert_eq!(
            p("zeta(4)*x1", 1).involution_reverse(),
            p("-zeta(4)*x1^-1", 1)
        );
        let sym = p("x1 + x1^-1 + x2 + x2^-1 - 4", 2);
        assert_eq!(sym.involution_reverse(), sym);
    }

    #[test]
    fn asymmetry_examples() {
        assert!(p("x1+x2-1", 2).is_asymmetric().asymmetric);
        let s = p("x1 + x1^-1 + x2 + x2^-1 - 4", 2).is_asymmetric();
        assert_eq!(s.witness, Some((1, vec![0, 0])));
        let m = p("x1", 1).is_asymmetric();
        assert_eq!(m.witness, Some((1, vec![-2])));
        // x - 1 is reversed to x^-1 - 1 = -x^-1 (x - 1)
        let a = p("x1 - 1", 1).is_asymmetric();
        assert_eq!(a.witness, Some((-1, vec![-1])));
    }

    #[test]
    fn norms_and_degrees() {
        let q = p("x1+x2-4", 2);
        assert_eq!((q.coeff_sup_norm(), q.num_terms(), q.total_degree()), (4.0, 3, 1));
        assert_eq!(LaurentPoly::zero(2).coeff_sup_norm(), 0.0);
        assert!((p("zeta(3)*x1 + 1", 1).coeff_sup_norm() - 1.0).abs() < 1e-15);
        let l = p("x1 + x1^-1 + x2 + x2^-1 - 4", 2);
        assert_eq!(l.total_degree(), 1);
        assert_eq!(l.cleared_degree(), 3);
    }

    #[test]
    fn heights() {
        assert!((p("6*x1^2 + 15", 1).height_rational().unwrap() - 5f64.ln()).abs() < 1e-15);
        assert_eq!(p("x1 + 1", 1).height_rational().unwrap(), 0.0);
        let h = p("1/2*x1 + 1/3", 1).height_rational().unwrap();
        assert!((h - 3f64.ln()).abs() < 1e-15);
        assert_eq!(p("zeta(3)*x1", 1).height_rational(), Err(Error::NonRational));
    }

    #[test]
    fn hat_examples() {
        assert_eq!(
            p("x1*x2 + x1 + 1", 2).auxiliary_hat(1).unwrap(),
            p("3 + x1 + x1^-1", 1)
        );
        assert_eq!(p("x2", 2).auxiliary_hat(1).unwrap(), p("1", 1));
        assert_eq!(
            p("x1+x2-1", 2).auxiliary_hat(1).unwrap(),
            p("3 - x1 - x1^-1", 1)
        );
        assert!(p("x1", 2).auxiliary_hat(2).is_err());
    }

    #[test]
    fn specialization_examples() {
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(
            p("x1+x2", 2).specialize_torsion(&id, 0, &TorsionPoint::identity(1)).unwrap(),
            p("x1+x2", 2)
        );
        assert_eq!(
            p("x1*x2^-1", 2).change_coordinates(&id).unwrap(),
            p("x1", 2)
        );
        let swap = vec![vec![0, 1], vec![1, 0]];
        let half = TorsionPoint::new(&[1], 2).unwrap();
        assert_eq!(
            p("x1+x2", 2).specialize_torsion(&swap, 1, &half).unwrap(),
            p("x1 - 1", 1)
        );
        assert!(p("x1", 2)
            .change_coordinates(&[vec![2, 0], vec![0, 1]])
            .is_err());
    }

    #[test]
    fn evaluation_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(p("x1-2", 1).evaluate(&[one]).unwrap(), Complex64::new(-1.0, 0.0));
        let z = [arith::e(1.0 / 6.0), arith::e(-1.0 / 6.0)];
        assert!(p("x1+x2-1", 2).evaluate(&z).unwrap().norm() < 1e-12);
        let i = p("zeta(4)*x1", 1).evaluate(&[one]).unwrap();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(
            p("x1", 1).evaluate(&[Complex64::new(0.0, 0.0)]),
            Err(Error::ZeroCoordinate(0))
        );
    }
}
