//! Künneth tensors on S^k over a split datum: the oracle every diagram rule is checked against.
//!
//! Deliberately shares nothing with the block calculus beyond the ring table.

use crate::rat::Q;
use crate::surface::{Label, SurfaceDatum};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplitClass {
    pub k: usize,
    pub terms: BTreeMap<Vec<Label>, Q>,
}

impl SplitClass {
    pub fn zero(k: usize) -> Self {
        SplitClass { k, terms: BTreeMap::new() }
    }

    pub fn unit(s: &SurfaceDatum, k: usize) -> Self {
        Self::pure(vec![s.unit(); k])
    }

    pub fn pure(labels: Vec<Label>) -> Self {
        let mut c = Self::zero(labels.len());
        c.terms.insert(labels, Q::one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: Vec<Label>, x: Q) {
        assert_eq!(t.len(), self.k);
        if x.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += x;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(x);
            }
        }
    }

    pub fn add(&self, o: &SplitClass) -> SplitClass {
        let mut r = self.clone();
        for (t, x) in &o.terms {
            r.add_term(t.clone(), *x);
        }
        r
    }

    pub fn scale(&self, x: Q) -> SplitClass {
        let mut r = Self::zero(self.k);
        for (t, y) in &self.terms {
            r.add_term(t.clone(), *y * x);
        }
        r
    }

    pub fn mul(&self, s: &SurfaceDatum, o: &SplitClass) -> SplitClass {
        assert_eq!(self.k, o.k);
        let mut r = Self::zero(self.k);
        for (a, x) in &self.terms {
            'pairs: for (b, y) in &o.terms {
                let mut t = Vec::with_capacity(self.k);
                let mut c = *x * *y;
                for i in 0..self.k {
                    match s.lmul(a[i], b[i]) {
                        Some((z, l)) => {
                            c *= z;
                            t.push(l);
                        }
                        None => continue 'pairs,
                    }
                }
                r.add_term(t, c);
            }
        }
        r
    }

    pub fn tensor(&self, o: &SplitClass) -> SplitClass {
        let mut r = Self::zero(self.k + o.k);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut t = a.clone();
                t.extend_from_slice(b);
                r.add_term(t, *x * *y);
            }
        }
        r
    }

    /// The class Σ G^{ab} γ_a ⊗ γ_b placed on legs (i, j) of S^k, unit elsewhere.
    pub fn diagonal(s: &SurfaceDatum, k: usize, i: usize, j: usize) -> SplitClass {
        Self::kernel(s, k, i, j, &s.labels().collect::<Vec<_>>())
    }

    /// Transcendental kernel Σ τ_a ⊗ τ^a on legs (i, j).
    pub fn transcendental(s: &SurfaceDatum, k: usize, i: usize, j: usize) -> SplitClass {
        Self::kernel(s, k, i, j, &(0..s.b).map(|a| s.tau(a)).collect::<Vec<_>>())
    }

    fn kernel(s: &SurfaceDatum, k: usize, i: usize, j: usize, support: &[Label]) -> SplitClass {
        // inverse of the Gram block on `support`
        let g: Vec<Vec<Q>> = support.iter().map(|&a| support.iter().map(|&b| s.lpair(a, b)).collect()).collect();
        let gi = crate::rat::invert(&g).expect("nondegenerate block");
        let mut r = Self::zero(k);
        for (x, &a) in support.iter().enumerate() {
            for (y, &b) in support.iter().enumerate() {
                let mut t = vec![s.unit(); k];
                t[i] = a;
                t[j] = b;
                r.add_term(t, gi[x][y]);
            }
        }
        r
    }

    /// Multiply by Δ_ij, integrate leg j, drop it.
    pub fn contract(&self, s: &SurfaceDatum, i: usize, j: usize) -> SplitClass {
        let d = Self::diagonal(s, self.k, i, j);
        self.mul(s, &d).integrate(s, &[j])
    }

    /// Pullback to the small diagonal: legwise product into one leg.
    pub fn restrict_small(&self, s: &SurfaceDatum) -> SplitClass {
        let mut r = Self::zero(1);
        for (t, x) in &self.terms {
            let mut c = *x;
            let mut l = s.unit();
            let mut alive = true;
            for &a in t {
                match s.lmul(l, a) {
                    Some((z, m)) => {
                        c *= z;
                        l = m;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                r.add_term(vec![l], c);
            }
        }
        r
    }

    pub fn integrate(&self, s: &SurfaceDatum, legs: &[usize]) -> SplitClass {
        let mut r = Self::zero(self.k - legs.len());
        for (t, x) in &self.terms {
            let mut c = *x;
            for &j in legs {
                c *= s.lint(t[j]);
            }
            if c.is_zero() {
                continue;
            }
            let rest: Vec<Label> = t.iter().enumerate().filter(|(i, _)| !legs.contains(i)).map(|(_, l)| *l).collect();
            r.add_term(rest, c);
        }
        r
    }

    /// Small diagonal of S^n as a tensor: iterate γ ↦ Σ γγ_a ⊗ γ^a.
    pub fn small_diagonal(s: &SurfaceDatum, n: usize) -> SplitClass {
        let mut cur = SplitClass::pure(vec![s.unit()]);
        for _ in 1..n {
            let mut next = SplitClass::zero(cur.k + 1);
            for (t, x) in &cur.terms {
                let last = *t.last().unwrap();
                for a in s.labels() {
                    let Some((z, l)) = s.lmul(last, a) else { continue };
                    for b in s.labels() {
                        let g = s.gram_inv(a, b);
                        if g.is_zero() {
                            continue;
                        }
                        let mut u = t.clone();
                        *u.last_mut().unwrap() = l;
                        u.push(b);
                        next.add_term(u, *x * z * g);
                    }
                }
            }
            cur = next;
        }
        cur
    }

    pub fn grade(&self, s: &SurfaceDatum) -> Option<u32> {
        let mut g = None;
        for t in self.terms.keys() {
            let h: u32 = t.iter().map(|&l| s.grade(l) as u32).sum();
            if g.is_some_and(|x| x != h) {
                return None;
            }
            g = Some(h);
        }
        g
    }
}

impl fmt::Display for SplitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (t, x)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}{:?}", crate::rat::fmt_q(x), t)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;
    use crate::surface::{make_surface, SurfaceConfig};

    #[test]
    fn euler_class_of_diagonal() {
        let s = make_surface(&SurfaceConfig::split(1, 2)).unwrap();
        let d = SplitClass::diagonal(&s, 2, 0, 1);
        assert_eq!(d.terms.len(), 5);
        assert_eq!(d.restrict_small(&s), SplitClass::pure(vec![s.point()]).scale(q(5)));
        let t = SplitClass::transcendental(&s, 2, 0, 1);
        assert_eq!(t.restrict_small(&s), SplitClass::pure(vec![s.point()]).scale(q(2)));
        assert!(t.integrate(&s, &[1]).is_zero());
    }

    #[test]
    fn small_diagonal_two_is_diagonal() {
        let s = make_surface(&SurfaceConfig::split(1, 1)).unwrap();
        assert_eq!(SplitClass::small_diagonal(&s, 2), SplitClass::diagonal(&s, 2, 0, 1));
        // Δ_123 = Δ_12 · Δ_23
        let d3 = SplitClass::small_diagonal(&s, 3);
        let p = SplitClass::diagonal(&s, 3, 0, 1).mul(&s, &SplitClass::diagonal(&s, 3, 1, 2));
        assert_eq!(d3, p);
    }

    #[test]
    fn contraction_glues() {
        let s = make_surface(&SurfaceConfig::split(1, 2)).unwrap();
        // transcendental projector is idempotent under composition
        let a = SplitClass::transcendental(&s, 2, 0, 1).tensor(&SplitClass::transcendental(&s, 2, 0, 1));
        let c = a.contract(&s, 1, 2).integrate(&s, &[1]);
        assert_eq!(c, SplitClass::transcendental(&s, 2, 0, 1));
    }
}
