//! sp_{2N} as matrices indexed by ±1..±N, and the generators d_{m,n}.

use crate::rat::{sign, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("index ({0}, {1}) outside ±1..±{2}")]
pub struct IndexError(pub i32, pub i32, pub i32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpMatrix {
    pub n: i32,
    entries: BTreeMap<(i32, i32), Q>,
}

fn ok(i: i32, n: i32) -> bool {
    i != 0 && i.abs() <= n
}

impl SpMatrix {
    pub fn zero(n: i32) -> Self {
        SpMatrix { n, entries: BTreeMap::new() }
    }
    pub fn elementary(n: i32, r: i32, c: i32) -> Result<Self, IndexError> {
        let mut m = Self::zero(n);
        m.add(r, c, Q::one())?;
        Ok(m)
    }
    pub fn get(&self, r: i32, c: i32) -> Q {
        self.entries.get(&(r, c)).copied().unwrap_or_else(Q::zero)
    }
    fn add(&mut self, r: i32, c: i32, x: Q) -> Result<(), IndexError> {
        if !ok(r, self.n) || !ok(c, self.n) {
            return Err(IndexError(r, c, self.n));
        }
        let e = self.entries.entry((r, c)).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
        Ok(())
    }
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn entries(&self) -> impl Iterator<Item = (&(i32, i32), &Q)> {
        self.entries.iter()
    }
    pub fn lin(&self, x: Q, o: &SpMatrix, y: Q) -> SpMatrix {
        let mut r = self.scale(x);
        for (&(i, j), v) in &o.entries {
            r.add(i, j, *v * y).unwrap();
        }
        r
    }
    pub fn scale(&self, x: Q) -> SpMatrix {
        let mut r = Self::zero(self.n);
        if !x.is_zero() {
            r.entries = self.entries.iter().map(|(k, v)| (*k, *v * x)).collect();
        }
        r
    }
    pub fn mul(&self, o: &SpMatrix) -> SpMatrix {
        let mut r = Self::zero(self.n);
        for (&(i, j), x) in &self.entries {
            for (&(_, k), y) in o.entries.range((j, i32::MIN)..=(j, i32::MAX)) {
                r.add(i, k, *x * *y).unwrap();
            }
        }
        r
    }
    pub fn bracket(&self, o: &SpMatrix) -> SpMatrix {
        self.mul(o).lin(Q::one(), &o.mul(self), -Q::one())
    }

    /// (N × −N) and (−N × N) blocks symmetric; (−N × −N) block is minus the transpose of (N × N).
    pub fn in_sp(&self) -> bool {
        let rng = || (1..=self.n).flat_map(|i| (1..=self.n).map(move |j| (i, j)));
        rng().all(|(i, j)| {
            self.get(i, -j) == self.get(j, -i) && self.get(-i, j) == self.get(-j, i) && self.get(-i, -j) == -self.get(j, i)
        })
    }
}

/// d_{m,n} = E_{m,−n} + sign(m)sign(n) E_{n,−m}.
pub fn sp_generator(m: i32, n: i32, big_n: i32) -> Result<SpMatrix, IndexError> {
    if !ok(m, big_n) || !ok(n, big_n) {
        return Err(IndexError(m, n, big_n));
    }
    let a = SpMatrix::elementary(big_n, m, -n)?;
    let b = SpMatrix::elementary(big_n, n, -m)?;
    Ok(a.lin(Q::one(), &b, Q::from_integer((sign(m) * sign(n)) as i128)))
}

/// The right side of [d_{m,n}, d_{m',n'}] as (coefficient, (a, b)) meaning coefficient · d_{a,b}.
pub fn sp_rel_rhs(m: i32, n: i32, m2: i32, n2: i32) -> Vec<(i32, (i32, i32))> {
    let (sm, sn, sm2, sn2) = (sign(m), sign(n), sign(m2), sign(n2));
    let mut v = vec![];
    if n + m2 == 0 {
        v.push((1, (m, n2)));
    }
    if m + m2 == 0 {
        v.push((sm * sn, (n, n2)));
    }
    if n + n2 == 0 {
        v.push((sm2 * sn2, (m, m2)));
    }
    if m + n2 == 0 {
        v.push((sm * sn * sm2 * sn2, (n, m2)));
    }
    v
}

/// All indices with |·| ≤ N; returns the failing quadruples.
pub fn verify_sp_relations(big_n: i32) -> (usize, Vec<(i32, i32, i32, i32)>) {
    let idx: Vec<i32> = (-big_n..=big_n).filter(|&i| i != 0).collect();
    let d = |a, b| sp_generator(a, b, big_n).unwrap();
    let mut count = 0;
    let mut bad = vec![];
    for &m in &idx {
        for &n in &idx {
            for &m2 in &idx {
                for &n2 in &idx {
                    count += 1;
                    let lhs = d(m, n).bracket(&d(m2, n2));
                    let mut rhs = SpMatrix::zero(big_n);
                    for (c, (a, b)) in sp_rel_rhs(m, n, m2, n2) {
                        rhs = rhs.lin(Q::one(), &d(a, b), Q::from_integer(c as i128));
                    }
                    if lhs != rhs {
                        bad.push((m, n, m2, n2));
                    }
                }
            }
        }
    }
    (count, bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    #[test]
    fn generators() {
        let d11 = sp_generator(1, 1, 2).unwrap();
        assert_eq!(d11, SpMatrix::elementary(2, 1, -1).unwrap().scale(q(2)));
        let d21 = sp_generator(2, 1, 2).unwrap();
        assert_eq!(d21.entries().count(), 2);
        assert_eq!((d21.get(2, -1), d21.get(1, -2)), (q(1), q(1)));
        assert!(sp_generator(3, 1, 2).is_err());
        for m in [-2, -1, 1, 2] {
            for n in [-2, -1, 1, 2] {
                assert!(sp_generator(m, n, 2).unwrap().in_sp(), "{m} {n}");
            }
        }
        assert!(!SpMatrix::elementary(2, 1, -2).unwrap().in_sp());
    }

    #[test]
    fn relation_examples() {
        let d = |a, b| sp_generator(a, b, 3).unwrap();
        assert_eq!(d(1, -1).bracket(&d(1, 1)), d(1, 1).scale(q(2)));
        assert!(d(1, 2).bracket(&d(3, 3)).is_zero());
        // index-disjoint: no δ fires
        assert!(sp_rel_rhs(1, 2, 3, 3).is_empty());
    }

    #[test]
    fn full_sweep() {
        let (n, bad) = verify_sp_relations(4);
        assert_eq!(n, 4096);
        assert!(bad.is_empty(), "{bad:?}");
    }
}
