//! Decorated-partition calculus on S^k with leg ids.
//!
//! A monomial is a set partition of its legs. A `Diag(d)` block is the small-diagonal
//! pushforward of the basis class `d`; a `Tr` block is a transcendental kernel on two legs.
//! All rules below are stated for a single monomial and return linear combinations.
//!
//! Rule table (x, y the legs being glued by Δ_xy):
//!
//! | situation                         | result                                    | source          |
//! |-----------------------------------|-------------------------------------------|-----------------|
//! | Diag(a)∋x, Diag(b)∋y              | merge, decoration a·b                     | transversality  |
//! | x, y in one Diag(1) block         | decoration ·(2+ρ+b)c                      | restrict(Δ)     |
//! | x, y in one Diag(a), grade a ≥ 1  | 0                                         | grade           |
//! | Tr{x,p}, Diag(a≠1)∋y              | 0                                         | Δ^tr·l = Δ^tr·c = 0 |
//! | Tr{x,p}, Diag(1) with legs D      | Σ_z Tr{z,p} ∏_{w≠z} c_w                    | small-diagonal expansion + annihilation |
//! | Tr{x,p}, Tr{y,p'}                 | Tr{p,p'} (times c_x when x is kept)       | projector idempotence (cohomology) |
//! | Tr{x,y}                           | b (times c_x when kept)                   | b = ⟨Δ^tr, Δ⟩   |

use crate::rat::Q;
use crate::surface::{Label, SurfaceDatum};
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use smallvec::{smallvec, SmallVec};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Kind {
    Diag(Label),
    Tr,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Block<L> {
    pub kind: Kind,
    pub legs: SmallVec<[L; 4]>,
}

impl<L: Ord + Copy> Block<L> {
    pub fn new(kind: Kind, mut legs: SmallVec<[L; 4]>) -> Self {
        legs.sort_unstable();
        Block { kind, legs }
    }
    pub fn diag(d: Label, legs: &[L]) -> Self {
        Self::new(Kind::Diag(d), legs.iter().copied().collect())
    }
    pub fn tr(a: L, b: L) -> Self {
        Self::new(Kind::Tr, smallvec![a, b])
    }
}

pub type Mono = Vec<Block<u32>>;
pub type Terms = Vec<(Q, Mono)>;

pub fn sort_mono<L: Ord + Copy>(m: &mut [Block<L>]) {
    for b in m.iter_mut() {
        b.legs.sort_unstable();
    }
    m.sort_unstable();
}

fn locate(m: &Mono, x: u32) -> (usize, usize) {
    for (i, b) in m.iter().enumerate() {
        if let Some(p) = b.legs.iter().position(|&l| l == x) {
            return (i, p);
        }
    }
    panic!("leg {x} not present");
}

pub fn has_leg(m: &Mono, x: u32) -> bool {
    m.iter().any(|b| b.legs.contains(&x))
}

/// Σ_{z∈D} Tr{z,p} ∏_{w∈D, w≠z} c_w, appended to `rest`.
fn tr_into(s: &SurfaceDatum, coef: Q, rest: &Mono, p: u32, d: &[u32], out: &mut Terms) {
    for &z in d {
        let mut m = rest.clone();
        m.push(Block::tr(z, p));
        for &w in d {
            if w != z {
                m.push(Block::diag(s.point(), &[w]));
            }
        }
        out.push((coef, m));
    }
}

fn without(legs: &[u32], drop: &[u32]) -> SmallVec<[u32; 4]> {
    let mut v: SmallVec<[u32; 4]> = legs.iter().copied().collect();
    for d in drop {
        if let Some(p) = v.iter().position(|x| x == d) {
            v.remove(p);
        }
    }
    v
}

/// Multiply by Δ_xy and integrate y out; with `keep = false` also integrate x.
pub fn contract(s: &SurfaceDatum, m: &Mono, x: u32, y: u32, keep: bool, out: &mut Terms) {
    let (bi, _) = locate(m, x);
    let (bj, _) = locate(m, y);
    let one = s.unit();
    let pt = s.point();
    if bi == bj {
        let blk = &m[bi];
        let mut rest: Mono = m.clone();
        rest.remove(bi);
        match blk.kind {
            Kind::Diag(d) => {
                if d != one {
                    return;
                }
                let coef = s.euler_diag();
                let legs = if keep { without(&blk.legs, &[y]) } else { without(&blk.legs, &[x, y]) };
                if !legs.is_empty() {
                    rest.push(Block::new(Kind::Diag(pt), legs));
                }
                out.push((coef, rest));
            }
            Kind::Tr => {
                let b = Q::from_integer(s.b as i128);
                if keep {
                    rest.push(Block::diag(pt, &[x]));
                }
                out.push((b, rest));
            }
        }
        return;
    }
    let (lo, hi) = if bi < bj { (bi, bj) } else { (bj, bi) };
    let mut rest: Mono = m.clone();
    let bh = rest.remove(hi);
    let bl = rest.remove(lo);
    let (bx, by) = if bi < bj { (bl, bh) } else { (bh, bl) };
    match (bx.kind, by.kind) {
        (Kind::Diag(a), Kind::Diag(b)) => {
            let Some((c, d)) = s.lmul(a, b) else { return };
            let mut legs = without(&bx.legs, &[x]);
            legs.extend(without(&by.legs, &[y]));
            if keep {
                legs.push(x);
            }
            if legs.is_empty() {
                let v = c * s.lint(d);
                if !v.is_zero() {
                    out.push((v, rest));
                }
            } else {
                rest.push(Block::new(Kind::Diag(d), legs));
                out.push((c, rest));
            }
        }
        (Kind::Tr, Kind::Diag(b)) => {
            if b != one {
                return;
            }
            let p = other(&bx, x);
            let mut d = without(&by.legs, &[y]);
            if keep {
                d.push(x);
            }
            tr_into(s, Q::one(), &rest, p, &d, out);
        }
        (Kind::Diag(a), Kind::Tr) => {
            if a != one {
                return;
            }
            let p = other(&by, y);
            let d = if keep { bx.legs.clone() } else { without(&bx.legs, &[x]) };
            tr_into(s, Q::one(), &rest, p, &d, out);
        }
        (Kind::Tr, Kind::Tr) => {
            let p = other(&bx, x);
            let p2 = other(&by, y);
            rest.push(Block::tr(p, p2));
            if keep {
                rest.push(Block::diag(pt, &[x]));
            }
            out.push((Q::one(), rest));
        }
    }
}

fn other(b: &Block<u32>, x: u32) -> u32 {
    if b.legs[0] == x {
        b.legs[1]
    } else {
        b.legs[0]
    }
}

/// Push forward along the projection forgetting leg x.
pub fn integrate(s: &SurfaceDatum, m: &Mono, x: u32) -> Option<(Q, Mono)> {
    let (bi, p) = locate(m, x);
    match m[bi].kind {
        Kind::Tr => None,
        Kind::Diag(d) => {
            let mut r = m.clone();
            if r[bi].legs.len() > 1 {
                r[bi].legs.remove(p);
                Some((Q::one(), r))
            } else {
                let v = s.lint(d);
                if v.is_zero() {
                    return None;
                }
                r.remove(bi);
                Some((v, r))
            }
        }
    }
}

/// Multiply by the pullback of a basis class along leg x.
pub fn mul_leg(s: &SurfaceDatum, m: &Mono, x: u32, l: Label) -> Option<(Q, Mono)> {
    let (bi, _) = locate(m, x);
    match m[bi].kind {
        Kind::Tr => (l == s.unit()).then(|| (Q::one(), m.clone())),
        Kind::Diag(d) => {
            let (c, e) = s.lmul(d, l)?;
            let mut r = m.clone();
            r[bi].kind = Kind::Diag(e);
            Some((c, r))
        }
    }
}

/// Δ_* of leg x onto the pair (x, x2): multiply by Δ_{x,x2} with x2 fresh.
pub fn push_diag(s: &SurfaceDatum, m: &Mono, x: u32, x2: u32, out: &mut Terms) {
    let (bi, _) = locate(m, x);
    match m[bi].kind {
        Kind::Diag(_) => {
            let mut r = m.clone();
            r[bi].legs.push(x2);
            r[bi].legs.sort_unstable();
            out.push((Q::one(), r));
        }
        Kind::Tr => {
            let mut rest = m.clone();
            let b = rest.remove(bi);
            let p = other(&b, x);
            tr_into(s, Q::one(), &rest, p, &[x, x2], out);
        }
    }
}

/// Expansion of one block into canonical blocks (singletons and, in chow mode, Tr pairs).
fn expand_block(s: &SurfaceDatum, b: &Block<u32>) -> Vec<(Q, Mono)> {
    let chow = !s.mode.is_split();
    match b.kind {
        Kind::Tr => {
            if chow {
                return vec![(Q::one(), vec![b.clone()])];
            }
            let mut v = vec![];
            for a1 in 0..s.b {
                for a2 in 0..s.b {
                    let g = s.gram_inv(s.tau(a1), s.tau(a2));
                    if !g.is_zero() {
                        v.push((g, vec![Block::diag(s.tau(a1), &[b.legs[0]]), Block::diag(s.tau(a2), &[b.legs[1]])]));
                    }
                }
            }
            v
        }
        Kind::Diag(_) if b.legs.len() == 1 => vec![(Q::one(), vec![b.clone()])],
        Kind::Diag(d) => {
            if !chow {
                return split_diag(s, d, &b.legs);
            }
            let pt = s.point();
            let legs = &b.legs;
            match s.grade(d) {
                2 => vec![(Q::one(), legs.iter().map(|&z| Block::diag(pt, &[z])).collect())],
                1 => legs
                    .iter()
                    .map(|&z| (Q::one(), legs.iter().map(|&w| Block::diag(if w == z { d } else { pt }, &[w])).collect()))
                    .collect(),
                _ => chow_unit_diag(s, legs),
            }
        }
    }
}

fn split_diag(s: &SurfaceDatum, d: Label, legs: &[u32]) -> Vec<(Q, Mono)> {
    if legs.len() == 1 {
        return vec![(Q::one(), vec![Block::diag(d, legs)])];
    }
    let (last, init) = legs.split_last().unwrap();
    let mut out = vec![];
    for i in s.labels() {
        let Some((c, di)) = s.lmul(d, i) else { continue };
        for j in s.labels() {
            let g = s.gram_inv(i, j);
            if g.is_zero() {
                continue;
            }
            for (x, mut m) in split_diag(s, di, init) {
                m.push(Block::diag(j, &[*last]));
                out.push((c * g * x, m));
            }
        }
    }
    out
}

fn chow_pair(s: &SurfaceDatum, x: u32, y: u32) -> Vec<(Q, Mono)> {
    let mut v = vec![(Q::one(), vec![Block::tr(x, y)])];
    for i in s.labels() {
        for j in s.labels() {
            let g = s.gram_inv(i, j);
            if !g.is_zero() {
                v.push((g, vec![Block::diag(i, &[x]), Block::diag(j, &[y])]));
            }
        }
    }
    v
}

fn chow_unit_diag(s: &SurfaceDatum, legs: &[u32]) -> Vec<(Q, Mono)> {
    let r = legs.len();
    if r == 2 {
        return chow_pair(s, legs[0], legs[1]);
    }
    let (one, pt) = (s.unit(), s.point());
    let mut out = vec![];
    for i in 0..r {
        for j in i + 1..r {
            let cs: Mono = (0..r).filter(|&k| k != i && k != j).map(|k| Block::diag(pt, &[legs[k]])).collect();
            for (x, mut m) in chow_pair(s, legs[i], legs[j]) {
                m.extend(cs.iter().cloned());
                out.push((x, m));
            }
        }
    }
    let k = -Q::from_integer(r as i128 - 2);
    for i in 0..r {
        out.push((k, (0..r).map(|j| Block::diag(if j == i { one } else { pt }, &[legs[j]])).collect()));
    }
    out
}

/// Canonical expansion of a monomial.
pub fn expand(s: &SurfaceDatum, m: &Mono) -> Terms {
    let mut acc: Terms = vec![(Q::one(), vec![])];
    for b in m {
        let parts = expand_block(s, b);
        let mut next = Vec::with_capacity(acc.len() * parts.len());
        for (x, a) in &acc {
            for (y, p) in &parts {
                let mut n = a.clone();
                n.extend(p.iter().cloned());
                next.push((*x * *y, n));
            }
        }
        acc = next;
    }
    for (_, m) in acc.iter_mut() {
        sort_mono(m);
    }
    acc
}

pub fn is_expanded(s: &SurfaceDatum, m: &Mono) -> bool {
    m.iter().all(|b| match b.kind {
        Kind::Tr => !s.mode.is_split(),
        Kind::Diag(_) => b.legs.len() == 1,
    })
}

pub fn accumulate<K: std::hash::Hash + Eq>(map: &mut FxHashMap<K, Q>, k: K, v: Q) {
    if v.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match map.entry(k) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += v;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(v);
        }
    }
}

/// Complex codimension of a monomial's class.
pub fn codim(s: &SurfaceDatum, m: &Mono) -> i32 {
    m.iter()
        .map(|b| match b.kind {
            Kind::Tr => 2,
            Kind::Diag(d) => 2 * (b.legs.len() as i32 - 1) + s.grade(d) as i32,
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;
    use crate::surface::{make_surface, SurfaceConfig};

    fn k3() -> SurfaceDatum {
        make_surface(&SurfaceConfig::k3(1, 21)).unwrap()
    }

    #[test]
    fn tr_self_contraction_is_b() {
        let s = k3();
        let m = vec![Block::tr(0, 1)];
        let mut out = vec![];
        contract(&s, &m, 0, 1, false, &mut out);
        assert_eq!(out, vec![(q(21), vec![])]);
    }

    #[test]
    fn diagonal_self_intersection() {
        let s = k3();
        let m = vec![Block::diag(0, &[0, 1])];
        let mut out = vec![];
        contract(&s, &m, 0, 1, false, &mut out);
        assert_eq!(out, vec![(q(24), vec![])]);
    }

    #[test]
    fn tr_integrates_to_zero() {
        let s = k3();
        assert!(integrate(&s, &vec![Block::tr(0, 1)], 1).is_none());
        assert_eq!(integrate(&s, &vec![Block::diag(s.point(), &[0])], 0), Some((q(1), vec![])));
    }

    #[test]
    fn expansion_of_pair_matches_diagonal() {
        let s = k3();
        let e = expand(&s, &vec![Block::diag(0, &[0, 1])]);
        assert_eq!(e.len(), 4);
        let ll = e.iter().find(|(_, m)| m.iter().all(|b| b.kind == Kind::Diag(1))).unwrap();
        assert_eq!(ll.0, Q::new(1, 2));
    }

    #[test]
    fn codims() {
        let s = k3();
        assert_eq!(codim(&s, &vec![Block::diag(0, &[0, 1, 2])]), 4);
        assert_eq!(codim(&s, &vec![Block::tr(0, 1), Block::diag(2, &[2])]), 4);
    }
}
