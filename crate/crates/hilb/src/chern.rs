//! Graded power series in free symbols ch_1, ch_2, …, and the transforms between
//! Chern characters and total Chern classes.
//!
//! Sign convention: the total class is c(V) = Σ (−1)^n c_n(V), so a line bundle with
//! c_1 = x has c = 1 − x. `to_standard` flips it back.

use crate::rat::{factorial, fmt_q, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// Variables: 1..=D are ch_1..ch_D (degree = index); ≥ 1000 are degree-1 extras (x, y, …).
pub type Var = u16;
pub const X: Var = 1000;
pub const Y: Var = 1001;

pub fn var_degree(v: Var) -> u32 {
    if v >= X {
        1
    } else {
        v as u32
    }
}

/// Sparse polynomial: sorted (var, exponent) lists → coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(pub BTreeMap<Vec<(Var, u32)>, Q>);

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }
    pub fn constant(x: Q) -> Self {
        let mut p = Poly::zero();
        p.add_mono(vec![], x);
        p
    }
    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_mono(vec![(v, 1)], Q::one());
        p
    }
    fn add_mono(&mut self, m: Vec<(Var, u32)>, x: Q) {
        if x.is_zero() {
            return;
        }
        let e = self.0.entry(m.clone()).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, x) in &o.0 {
            r.add_mono(m.clone(), *x);
        }
        r
    }
    pub fn scale(&self, x: Q) -> Poly {
        let mut r = Poly::zero();
        for (m, y) in &self.0 {
            r.add_mono(m.clone(), *y * x);
        }
        r
    }
    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(-Q::one()))
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                let mut m: BTreeMap<Var, u32> = a.iter().copied().collect();
                for &(v, e) in b {
                    *m.entry(v).or_insert(0) += e;
                }
                r.add_mono(m.into_iter().collect(), *x * *y);
            }
        }
        r
    }
    /// Substitute polynomials for variables.
    pub fn subst(&self, f: &impl Fn(Var) -> Poly) -> Poly {
        let mut r = Poly::zero();
        for (m, x) in &self.0 {
            let mut t = Poly::constant(*x);
            for &(v, e) in m {
                let fv = f(v);
                for _ in 0..e {
                    t = t.mul(&fv);
                }
            }
            r = r.add(&t);
        }
        r
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let name = |v: Var| match v {
            X => "x".to_string(),
            Y => "y".to_string(),
            _ => format!("ch{v}"),
        };
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(m, x)| {
                let mut s = fmt_q(x);
                for &(v, e) in m {
                    s += &if e == 1 { format!("*{}", name(v)) } else { format!("*{}^{e}", name(v)) };
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChernError {
    #[error("psi needs a_0 = 1")]
    Rank,
    #[error("we assume a+b>0 for simplicity")]
    Trivial,
    #[error("a + b = {0} exceeds the degree cap {1}")]
    Degree(u32, u32),
}

/// Components a_0..a_D, a_n homogeneous of degree n.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernSeries {
    pub d: u32,
    pub a: Vec<Poly>,
}

impl ChernSeries {
    pub fn new(d: u32) -> Self {
        ChernSeries { d, a: vec![Poly::zero(); d as usize + 1] }
    }
    pub fn one(d: u32) -> Self {
        let mut s = Self::new(d);
        s.a[0] = Poly::constant(Q::one());
        s
    }
    /// 1 + ch_1 + ch_2 + … : the generic character with rank slot 1.
    pub fn generic(d: u32) -> Self {
        let mut s = Self::one(d);
        for n in 1..=d {
            s.a[n as usize] = Poly::var(n as Var);
        }
        s
    }
    /// e^x truncated: the character of a line bundle with c_1 = x.
    pub fn line(d: u32, x: Var) -> Self {
        let mut s = Self::new(d);
        let mut p = Poly::constant(Q::one());
        for n in 0..=d {
            s.a[n as usize] = p.scale(Q::one() / Q::from_integer(factorial(n)));
            p = p.mul(&Poly::var(x));
        }
        s
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (x, y) in r.a.iter_mut().zip(&o.a) {
            *x = x.add(y);
        }
        r
    }
    pub fn scale(&self, x: Q) -> Self {
        ChernSeries { d: self.d, a: self.a.iter().map(|p| p.scale(x)).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::new(self.d);
        for i in 0..=self.d as usize {
            for j in 0..=self.d as usize - i {
                r.a[i + j] = r.a[i + j].add(&self.a[i].mul(&o.a[j]));
            }
        }
        r
    }
    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(self.a[0].is_zero());
        let mut r = Self::one(self.d);
        let mut pw = Self::one(self.d);
        for k in 1..=self.d {
            pw = pw.mul(self);
            r = r.add(&pw.scale(Q::one() / Q::from_integer(factorial(k))));
        }
        r
    }
    /// log of a series with constant term 1.
    pub fn log(&self) -> Self {
        assert_eq!(self.a[0], Poly::constant(Q::one()));
        let mut u = self.clone();
        u.a[0] = Poly::zero();
        let mut r = Self::new(self.d);
        let mut pw = Self::one(self.d);
        for k in 1..=self.d {
            pw = pw.mul(&u);
            let sg = if k % 2 == 1 { 1 } else { -1 };
            r = r.add(&pw.scale(Q::new(sg, k as i128)));
        }
        r
    }
    pub fn inverse(&self) -> Self {
        self.log().scale(-Q::one()).exp()
    }
    pub fn subst(&self, f: &impl Fn(Var) -> Poly) -> Self {
        ChernSeries { d: self.d, a: self.a.iter().map(|p| p.subst(f)).collect() }
    }
}

/// Ψ(Σ a_n) = exp(Σ_{n ≥ 1} −(n−1)! a_n).
pub fn psi(s: &ChernSeries) -> Result<ChernSeries, ChernError> {
    if s.a[0] != Poly::constant(Q::one()) {
        return Err(ChernError::Rank);
    }
    let mut e = ChernSeries::new(s.d);
    for n in 1..=s.d as usize {
        e.a[n] = s.a[n].scale(-Q::from_integer(factorial(n as u32 - 1)));
    }
    Ok(e.exp())
}

/// Φ = Ψ^{−1}: a_n = −(log c)_n / (n−1)!, rank slot 1.
pub fn phi(c: &ChernSeries) -> ChernSeries {
    let l = c.log();
    let mut r = ChernSeries::one(c.d);
    for n in 1..=c.d as usize {
        r.a[n] = l.a[n].scale(-Q::one() / Q::from_integer(factorial(n as u32 - 1)));
    }
    r
}

/// c_k(I) (or c_k(−I)) in the module convention c = Σ (−1)^k c_k.
pub fn c_of(s: &ChernSeries, negate: bool) -> Result<Vec<Poly>, ChernError> {
    let mut c = psi(s)?;
    if negate {
        c = c.inverse();
    }
    Ok(c.a.iter().enumerate().map(|(k, p)| if k % 2 == 1 { p.scale(-Q::one()) } else { p.clone() }).collect())
}

/// Convert a total class from the Σ(−1)^n c_n convention to Σ c_n.
pub fn to_standard(c: &ChernSeries) -> ChernSeries {
    ChernSeries { d: c.d, a: c.a.iter().enumerate().map(|(k, p)| if k % 2 == 1 { p.scale(-Q::one()) } else { p.clone() }).collect() }
}

/// (lhs, rhs) of Σ_n (−1)^{a+b} c_{a+n+1}(I) c_{b−n−1}(−I) n = −(a+b)! ch_{a+b}(I).
pub fn claim_sides(s: &ChernSeries, a: u32, b: u32) -> Result<(Poly, Poly), ChernError> {
    if a + b == 0 {
        return Err(ChernError::Trivial);
    }
    if a + b > s.d {
        return Err(ChernError::Degree(a + b, s.d));
    }
    let cp = c_of(s, false)?;
    let cm = c_of(s, true)?;
    let mut lhs = Poly::zero();
    let sg = if (a + b) % 2 == 0 { Q::one() } else { -Q::one() };
    for n in -(a as i64) - 1..=b as i64 - 1 {
        let (i, j) = ((a as i64 + n + 1) as usize, (b as i64 - n - 1) as usize);
        lhs = lhs.add(&cp[i].mul(&cm[j]).scale(sg * Q::from_integer(n as i128)));
    }
    let rhs = s.a[(a + b) as usize].scale(-Q::from_integer(factorial(a + b)));
    Ok((lhs, rhs))
}

pub fn claim_identity_check(a: u32, b: u32, d: u32) -> Result<Poly, ChernError> {
    let (l, r) = claim_sides(&ChernSeries::generic(d), a, b)?;
    Ok(l.sub(&r))
}

/// ch_n ↦ x^n / n!.
pub fn line_subst(v: Var) -> Poly {
    if v >= X {
        return Poly::var(v);
    }
    let mut p = Poly::constant(Q::one() / Q::from_integer(factorial(v as u32)));
    for _ in 0..v {
        p = p.mul(&Poly::var(X));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    #[test]
    fn line_bundle() {
        let c = psi(&ChernSeries::line(5, X)).unwrap();
        let mut expect = ChernSeries::one(5);
        expect.a[1] = Poly::var(X).scale(-Q::one());
        assert_eq!(c, expect);
        assert_eq!(psi(&ChernSeries::one(6)).unwrap(), ChernSeries::one(6));
        let ck = c_of(&ChernSeries::line(5, X), false).unwrap();
        assert_eq!(ck[1], Poly::var(X));
        assert!(ck[2..].iter().all(|p| p.is_zero()));
        assert_eq!(psi(&ChernSeries::new(3)), Err(ChernError::Rank));
    }

    #[test]
    fn inverse_pair() {
        let g = ChernSeries::generic(10);
        assert_eq!(phi(&psi(&g).unwrap()), g);
        let c = psi(&g).unwrap();
        assert_eq!(c.mul(&c.inverse()), ChernSeries::one(10));
    }

    #[test]
    fn two_line_bundles() {
        // c(−I) for I = L_x + L_y: 1/((1−x)(1−y)), so c_k(−I) = (−1)^k h_k(x, y)
        let d = 4;
        let mut s = ChernSeries::line(d, X).add(&ChernSeries::line(d, Y));
        s.a[0] = Poly::constant(Q::one());
        // rank 2 has a_0 = 2; the transform ignores a_0, so normalize it
        let cm = c_of(&s, true).unwrap();
        for k in 0..=d {
            let mut h = Poly::zero();
            for i in 0..=k {
                let mut m = vec![];
                if i > 0 {
                    m.push((X, i));
                }
                if k - i > 0 {
                    m.push((Y, k - i));
                }
                h.add_mono(m, Q::one());
            }
            let sg = if k % 2 == 0 { q(1) } else { q(-1) };
            assert_eq!(cm[k as usize], h.scale(sg), "{k}");
        }
    }

    #[test]
    fn claim_small() {
        let (l, r) = claim_sides(&ChernSeries::generic(3), 0, 1).unwrap();
        assert_eq!(l, r);
        assert_eq!(r, Poly::var(1).scale(q(-1)));
        let lb = ChernSeries::line(4, X);
        let (l, r) = claim_sides(&lb, 1, 1).unwrap();
        let mut xx = Poly::zero();
        xx.add_mono(vec![(X, 2)], q(-1));
        assert_eq!((l.clone(), r), (xx.clone(), xx));
        assert_eq!(claim_identity_check(0, 0, 4), Err(ChernError::Trivial));
        for ab in 1..=8 {
            for a in 0..=ab {
                assert!(claim_identity_check(a, ab - a, 8).unwrap().is_zero(), "{a} {}", ab - a);
            }
        }
    }
}
