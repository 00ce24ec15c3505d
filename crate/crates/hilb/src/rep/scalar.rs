//! Exact numbers a_0 + Σ a_r √r, r square-free.

use crate::rat::{fmt_q, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Debug, Default, Hash, PartialOrd, Ord)]
pub struct Scalar {
    // radicand (1 for the rational part) -> coefficient, zeros dropped
    terms: BTreeMap<u64, Q>,
}

/// n = s² · r with r square-free.
pub fn split_square(mut n: u64) -> (u64, u64) {
    assert!(n > 0);
    let (mut s, mut r) = (1u64, 1u64);
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= p;
        }
        p += 1;
    }
    (s, r * n)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }
    pub fn rational(x: Q) -> Self {
        Self::term(x, 1)
    }
    pub fn one() -> Self {
        Self::rational(Q::one())
    }
    /// x·√n for any n ≥ 1.
    pub fn term(x: Q, n: u64) -> Self {
        let mut t = BTreeMap::new();
        if !x.is_zero() {
            let (s, r) = split_square(n);
            t.insert(r, x * Q::from_integer(s as i128));
        }
        Scalar { terms: t }
    }
    pub fn sqrt(n: u64) -> Self {
        Self::term(Q::one(), n)
    }
    /// 1/√n.
    pub fn inv_sqrt(n: u64) -> Self {
        Self::term(Q::new(1, n as i128), n)
    }
    pub fn terms(&self) -> impl Iterator<Item = (&u64, &Q)> {
        self.terms.iter()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&1).copied(),
            _ => None,
        }
    }
    pub fn scale(&self, x: Q) -> Scalar {
        if x.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(r, c)| (*r, *c * x)).collect() }
    }
    fn add_term(&mut self, r: u64, c: Q) {
        let e = self.terms.entry(r).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&r);
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, *c);
        }
        r
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.scale(-Q::one())
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let mut r = Scalar::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let (s, f) = split_square(a * b);
                r.add_term(f, *x * *y * Q::from_integer(s as i128));
            }
        }
        r
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, c)| if *r == 1 { fmt_q(c) } else { format!("{}*sqrt({r})", fmt_q(c)) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
