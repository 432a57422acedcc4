//! Text form of Laurent polynomials.
//!
//! ```text
//! poly   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := 'x' INT ['^' SIGNED_INT] | 'zeta(' INT ')' ['^' SIGNED_INT] | RATIONAL
//! ```
//! A leading sign is accepted, rationals may be written `p/q` or as decimals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use super::cyclo::{zeta_factor, CycloNumber};
use super::poly::LaurentPoly;
use crate::error::{Error, Result};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().or_else(|_| {
            self.pos = start;
            self.err("integer too large")
        })
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let paren = self.eat(b'(');
        let v = if paren { self.signed_int()? } else { self.uint()? as i64 };
        if paren {
            self.expect(b')')?;
        }
        Ok(if neg { -v } else { v })
    }

    fn rational(&mut self) -> Result<BigRational> {
        let int: BigInt = self.digits()?.parse().unwrap();
        if self.s.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac = self.digits()?;
            let den = BigInt::from(10u32).pow(frac.len() as u32);
            let num = int * &den + frac.parse::<BigInt>().unwrap();
            return Ok(BigRational::new(num, den));
        }
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den: BigInt = self.digits()?.parse().unwrap();
            if den.is_zero() {
                return self.err("division by zero");
            }
            return Ok(BigRational::new(int, den));
        }
        Ok(BigRational::from_integer(int))
    }

    /// One term: coefficient and exponent vector.
    fn term(&mut self) -> Result<(CycloNumber, Vec<i64>)> {
        let mut coeff = CycloNumber::one();
        let mut exp = vec![0i64; self.dim];
        loop {
            match self.peek() {
                Some(b'x') => {
                    self.pos += 1;
                    let at = self.pos;
                    let idx = self.uint()? as usize;
                    if idx == 0 || idx > self.dim {
                        self.pos = at;
                        return Err(Error::VariableOutOfRange {
                            index: idx,
                            dim: self.dim,
                        });
                    }
                    let e = if self.eat(b'^') { self.signed_int()? } else { 1 };
                    exp[idx - 1] += e;
                }
                Some(b'z') => {
                    if !self.s[self.pos..].starts_with(b"zeta") {
                        return self.err("unknown identifier");
                    }
                    self.pos += 4;
                    self.expect(b'(')?;
                    let m = self.uint()?;
                    if m == 0 {
                        return self.err("zeta(0) is undefined");
                    }
                    self.expect(b')')?;
                    let j = if self.eat(b'^') { self.signed_int()? } else { 1 };
                    coeff = coeff.mul(&CycloNumber::root_of_unity(m, j));
                }
                Some(c) if c.is_ascii_digit() => {
                    let q = self.rational()?;
                    coeff = coeff.scale(&q);
                }
                _ => return self.err("expected a factor"),
            }
            if !self.eat(b'*') {
                return Ok((coeff, exp));
            }
        }
    }
}

/// Parses a Laurent polynomial in `dim` variables `x1..x<dim>`.
pub fn parse_poly(text: &str, dim: usize) -> Result<LaurentPoly> {
    if dim == 0 {
        return Err(Error::OutOfRange("dimension must be positive".into()));
    }
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        dim,
    };
    let mut terms = Vec::new();
    let mut neg = if p.eat(b'-') {
        true
    } else {
        p.eat(b'+');
        false
    };
    loop {
        let (c, e) = p.term()?;
        terms.push((e, if neg { c.neg() } else { c }));
        match p.peek() {
            None => break,
            Some(b'+') => neg = false,
            Some(b'-') => neg = true,
            Some(_) => return p.err("expected '+', '-' or end of input"),
        }
        p.pos += 1;
    }
    LaurentPoly::from_terms(dim, terms)
}

fn write_monomial(e: &[i64]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| {
            if x == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, x)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical form: terms in descending lexicographic exponent order; a cyclotomic
/// coefficient is written as one signed piece per nonzero power-basis coordinate.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms().rev() {
            let mono = write_monomial(e);
            for (j, q) in c.coords().iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                let mut parts = Vec::new();
                let a = q.abs();
                if !a.is_one() || (j == 0 && mono.is_empty()) {
                    parts.push(a.to_string());
                }
                if j > 0 {
                    parts.push(zeta_factor(c.conductor(), j));
                }
                if !mono.is_empty() {
                    parts.push(mono.clone());
                }
                let sign = if q.is_negative() { "-" } else { "+" };
                if first {
                    if q.is_negative() {
                        write!(f, "-")?;
                    }
                    first = false;
                } else {
                    write!(f, " {sign} ")?;
                }
                write!(f, "{}", parts.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_like_inputs() {
        let p = parse_poly("x1 + x2 - 4", 2).unwrap();
        assert_eq!(p, LaurentPoly::from_int_terms(2, &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![0, 0], -4)]));
        let p = parse_poly("x1^2*x2 + x1*x2^2 + x1 + x2 - 4*x1*x2", 2).unwrap();
        assert_eq!(p.num_terms(), 5);
        let p = parse_poly("x1^-1", 1).unwrap();
        assert_eq!(p, LaurentPoly::from_int_terms(1, &[(vec![-1], 1)]));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_poly("x3 + 1", 2),
            Err(Error::VariableOutOfRange { index: 3, dim: 2 })
        ));
        assert!(matches!(parse_poly("x1 + ", 1), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_poly("x1 ** 2", 1), Err(Error::Syntax { .. })));
        assert!(parse_poly("x1 - x1", 1).unwrap().is_zero());
    }

    #[test]
    fn printing_round_trip() {
        for (s, d) in [
            ("x1^2*x2 + x1*x2^2 + x1 + x2 - 4*x1*x2", 2),
            ("zeta(4)*x1 + x1 - 3/2", 1),
            ("zeta(12)^5*x1^-3*x2 - 2.5*x2^7 + zeta(3)", 2),
            ("-x1", 1),
            ("0", 3),
        ] {
            let p = parse_poly(s, d).unwrap();
            let printed = p.to_string();
            let q = parse_poly(&printed, d).unwrap();
            assert_eq!(p, q, "{s} -> {printed}");
            assert_eq!(printed, q.to_string());
        }
        assert_eq!(
            parse_poly("x2 - 4 + x1", 2).unwrap().to_string(),
            "x1 + x2 - 4"
        );
        assert!(parse_poly("(1)", 1).is_err());
        assert_eq!(
            parse_poly("zeta(4)*x1+x1", 1).unwrap().to_string(),
            "x1 + zeta(4)*x1"
        );
    }
}
