//! Elementary number theory on machine integers, plus a compensated summation helper.

use num_complex::Complex64;
use std::f64::consts::PI;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub fn gcd_u(a: u64, b: u64) -> u64 {
    gcd(a as i64, b as i64) as u64
}

pub fn lcm_u(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_u(a, b) * b
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m))
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

pub fn is_prime_power(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1
}

pub fn euler_phi(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Number of divisors, `d_0(n)`.
pub fn num_divisors(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Units of `Z/nZ` as residues in `[0, n)`, ascending. For `n = 1` this is `[0]`.
pub fn units_mod(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&a| gcd_u(a, n) == 1).collect()
}

/// Multiplicative order of `a` modulo `n` (a must be a unit).
pub fn mult_order(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let phi = euler_phi(n);
    let mut ord = phi;
    for (p, _) in factorize(phi) {
        while ord.is_multiple_of(p) && mod_pow(a, ord / p, n) == 1 {
            ord /= p;
        }
    }
    ord
}

/// Smallest primitive root modulo an odd prime power `p^k`.
pub fn primitive_root_odd_prime_power(p: u64, k: u32) -> u64 {
    let n = p.pow(k);
    let phi = euler_phi(n);
    (2..n)
        .find(|&g| gcd_u(g, n) == 1 && mult_order(g, n) == phi)
        .expect("odd prime powers are cyclic")
}

/// `e(x) = exp(2 pi i x)`.
pub fn e(x: f64) -> Complex64 {
    let t = 2.0 * PI * x;
    Complex64::new(t.cos(), t.sin())
}

/// `e(num/den)` with the fraction reduced before the floating-point step.
pub fn e_frac(num: i64, den: u64) -> Complex64 {
    let r = num.rem_euclid(den as i64);
    e(r as f64 / den as f64)
}

/// Neumaier compensated summation; additions happen in the order given.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn kahan_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<KahanSum>().value()
}

/// `log max(1, x)`.
pub fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_divisors() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(num_divisors(360), 24);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root_odd_prime_power(7, 1), 3);
        assert_eq!(primitive_root_odd_prime_power(3, 2), 2);
        assert_eq!(mult_order(3, 7), 6);
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(12, 18), (-5, 3), (0, 7), (7, 0), (1, 2)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(g, gcd(a, b));
            assert_eq!(a * x + b * y, g);
        }
    }

    #[test]
    fn kahan_beats_naive() {
        let xs: Vec<f64> = std::iter::once(1.0)
            .chain(std::iter::repeat_n(1e-16, 10_000))
            .collect();
        let s = kahan_sum(xs.iter().copied());
        assert!((s - (1.0 + 1e-12)).abs() < 1e-15);
    }
}
