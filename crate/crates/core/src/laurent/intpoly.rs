//! Dense univariate polynomials over the integers: cyclotomic polynomials,
//! exact division, subresultant resultants and discriminants.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::arith;

/// Integer polynomial, coefficients in ascending degree. No trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `X^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] = BigInt::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// `X^n * self(1/X)` with `n = deg self`.
    pub fn reversed(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// Strip the largest power of `X` dividing `self`; returns the power removed.
    pub fn strip_x_power(&self) -> (IntPoly, usize) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (IntPoly::new(self.coeffs[k..].to_vec()), k)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect()
    }

    /// Division with remainder; exact when the divisor's leading coefficient divides
    /// every intermediate leading term. Returns `None` otherwise.
    pub fn div_rem_exact(&self, divisor: &IntPoly) -> Option<(IntPoly, IntPoly)> {
        let dd = divisor.degree()?;
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((IntPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let (q, r) = rem[i].div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    rem[i - dd + j] -= &q * c;
                }
            }
            quot[i - dd] = q;
        }
        Some((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// `self / divisor` if the division is exact in `Z[X]`.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_exact(divisor)?;
        r.is_zero().then_some(q)
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, modulus: &IntPoly) -> IntPoly {
        debug_assert!(modulus.leading().is_one());
        self.div_rem_exact(modulus)
            .expect("monic division is always exact")
            .1
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{a}*X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "{a}*X^{i}")?,
            }
        }
        Ok(())
    }
}

/// Resultant of two integer polynomials via the subresultant algorithm.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut s = BigInt::one();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            s = -s;
        }
    }
    let db = b.degree().unwrap();
    if db == 0 {
        return s * b.leading().pow(a.degree().unwrap() as u32);
    }
    let ca = a.content();
    let cb = b.content();
    let t = ca.pow(db as u32) * cb.pow(a.degree().unwrap() as u32);
    a = a.primitive_part();
    b = b.primitive_part();
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = prem_full(&a, &b);
        if r.is_zero() {
            return BigInt::zero();
        }
        a = b;
        let denom = &g * h.pow(delta as u32);
        b = IntPoly::new(r.coeffs.iter().map(|c| c / &denom).collect());
        g = a.leading();
        // h <- h^(1-delta) g^delta
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u32) / h.pow(delta as u32 - 1)
        };
        let nb = b.degree().unwrap();
        if nb == 0 {
            let da = a.degree().unwrap() as u32;
            let hh = if da == 0 {
                BigInt::one()
            } else {
                b.leading().pow(da) / h.pow(da - 1)
            };
            return s * t * hh;
        }
    }
}

/// Pseudo-remainder with the full power `lc(b)^(deg a - deg b + 1)`.
fn prem_full(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let da = a.degree().unwrap();
    let db = b.degree().unwrap();
    let lc = b.leading();
    let mut r = a.coeffs.clone();
    let mut applied = 0u32;
    let mut top = da as isize;
    while top >= db as isize {
        let t = top as usize;
        let lead = r[t].clone();
        for c in r.iter_mut().take(t + 1) {
            *c *= &lc;
        }
        applied += 1;
        if !lead.is_zero() {
            for (j, c) in b.coeffs.iter().enumerate() {
                r[t - db + j] -= &lead * c;
            }
        }
        r.truncate(t);
        top -= 1;
    }
    let total = (da - db + 1) as u32;
    if applied < total {
        let f = lc.pow(total - applied);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    IntPoly::new(r)
}

/// Discriminant of a polynomial of degree `D >= 1`:
/// `(-1)^(D(D-1)/2) Res(Q, Q') / lc(Q)`.
pub fn discriminant(q: &IntPoly) -> BigInt {
    let d = q.degree().expect("nonzero polynomial");
    assert!(d >= 1, "discriminant needs degree at least one");
    if d == 1 {
        return BigInt::one();
    }
    let r = resultant(q, &q.derivative());
    let sign = if (d * (d - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    BigInt::from(sign) * r / q.leading()
}

fn phi_cache() -> &'static Mutex<HashMap<u64, IntPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial.
///
/// Built from `X - 1` by exact divisions `Phi_{mp}(X) = Phi_m(X^p) / Phi_m(X)` over the
/// distinct primes of `n`, then `Phi_n(X) = Phi_rad(X^(n/rad))`.
pub fn cyclotomic_polynomial(n: u64) -> IntPoly {
    assert!(n >= 1);
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let primes: Vec<u64> = arith::factorize(n).into_iter().map(|(p, _)| p).collect();
    let mut cur: Vec<i64> = vec![-1, 1];
    let mut rad = 1u64;
    for &p in &primes {
        // cur(X^p)
        let mut up = vec![0i64; (cur.len() - 1) * p as usize + 1];
        for (i, &c) in cur.iter().enumerate() {
            up[i * p as usize] = c;
        }
        cur = div_exact_monic_i64(&up, &cur);
        rad *= p;
    }
    let stretch = (n / rad) as usize;
    let mut full = vec![0i64; (cur.len() - 1) * stretch + 1];
    for (i, &c) in cur.iter().enumerate() {
        full[i * stretch] = c;
    }
    let poly = IntPoly::from_i64(&full);
    phi_cache().lock().unwrap().insert(n, poly.clone());
    poly
}

fn div_exact_monic_i64(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem: Vec<i128> = num.iter().map(|&c| c as i128).collect();
    let mut q = vec![0i64; num.len() - dd];
    for i in (dd..num.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        q[i - dd] = c as i64;
        for (j, &b) in den.iter().enumerate() {
            rem[i - dd + j] -= c * b as i128;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Result of removing all cyclotomic factors from a nonzero integer polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclotomicSplit {
    pub remainder: IntPoly,
    /// `(k, multiplicity)` for each `Phi_k` divided out, ascending in `k`.
    pub factors: Vec<(u64, u32)>,
}

/// Divides out every cyclotomic factor by trial exact division.
pub fn strip_cyclotomic_factors(q: &IntPoly) -> CyclotomicSplit {
    assert!(!q.is_zero(), "zero polynomial");
    let mut rem = q.clone();
    let mut factors = Vec::new();
    let mut k = 1u64;
    loop {
        let deg = rem.degree().unwrap_or(0) as u64;
        // phi(k) >= sqrt(k/2) so nothing beyond 2 deg^2 + 2 can divide.
        if k > 2 * deg * deg + 2 {
            break;
        }
        if arith::euler_phi(k) <= deg {
            let phi_k = cyclotomic_polynomial(k);
            let mut mult = 0;
            while let Some(qq) = rem.div_exact(&phi_k) {
                rem = qq;
                mult += 1;
            }
            if mult > 0 {
                factors.push((k, mult));
            }
        }
        k += 1;
    }
    CyclotomicSplit {
        remainder: rem,
        factors,
    }
}

/// Exact test whether `sum_j coeffs[j] * zeta_l^j` vanishes, with `zeta_l` a primitive
/// `l`-th root of unity. `coeffs` may be longer than `l`; exponents are folded mod `l`.
pub fn vanishes_at_root_of_unity(coeffs: &[(u64, BigInt)], l: u64) -> bool {
    let mut folded = vec![BigInt::zero(); l as usize];
    for (j, c) in coeffs {
        folded[(*j % l) as usize] += c;
    }
    let a = IntPoly::new(folded);
    if a.is_zero() {
        return true;
    }
    a.rem_monic(&cyclotomic_polynomial(l)).is_zero()
}

/// `Res(Phi_n, q)`, which equals the norm from `Q(zeta_n)` of `q(zeta_n)`.
pub fn norm_at_root_of_unity(q: &IntPoly, n: u64) -> BigInt {
    let phi = cyclotomic_polynomial(n);
    let reduced = if q.degree().unwrap_or(0) >= phi.degree().unwrap() {
        q.rem_monic(&phi)
    } else {
        q.clone()
    };
    if reduced.is_zero() {
        return BigInt::zero();
    }
    resultant(&phi, &reduced)
}
