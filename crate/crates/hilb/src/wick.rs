//! Products and commutators of normal-ordered operators by Wick contraction.
//!
//! Bosonic throughout (all classes have even degree). Contracting an annihilator
//! leg x of mode −n with a creator leg y of mode n multiplies by Δ_xy, integrates
//! both legs and scales by −n.

use crate::blocks::{self, Block, Mono, Terms};
use crate::op::{ann_mask, ann_weight, cre_mask, key_to_mono, mono_to_key, shift, Key, Op, Slot};
use crate::rat::Q;
use crate::surface::SurfaceDatum;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Pairing {
    All,
    NonEmpty,
    FullLeft,
}

struct Ctx<'a> {
    s: &'a SurfaceDatum,
    anns: Vec<(u32, i32)>,
    cres: Vec<(u32, i32)>,
    slots: Vec<Slot>,
    pairing: Pairing,
}

impl Ctx<'_> {
    fn dfs(&self, i: usize, used: u64, matched: usize, terms: &Terms, coef: Q, out: &mut FxHashMap<Key, Q>) {
        if i == self.anns.len() {
            if self.pairing == Pairing::NonEmpty && matched == 0 {
                return;
            }
            for (x, m) in terms {
                blocks::accumulate(out, mono_to_key(m, &self.slots), coef * *x);
            }
            return;
        }
        if self.pairing != Pairing::FullLeft {
            self.dfs(i + 1, used, matched, terms, coef, out);
        }
        let (x, mx) = self.anns[i];
        for (j, &(y, my)) in self.cres.iter().enumerate() {
            if used >> j & 1 == 1 || my != -mx {
                continue;
            }
            let mut next = Vec::new();
            for (c, m) in terms {
                let mut o = Vec::new();
                blocks::contract(self.s, m, x, y, false, &mut o);
                next.extend(o.into_iter().map(|(d, m2)| (*c * d, m2)));
            }
            if !next.is_empty() {
                self.dfs(i + 1, used | 1 << j, matched + 1, &next, coef * Q::from_integer(mx as i128), out);
            }
        }
    }
}

/// Σ over contractions of a·b (a on the left), accumulated into `out` with factor `coef`.
pub fn wick(s: &SurfaceDatum, a: &Key, b: &Key, pairing: Pairing, coef: Q, out: &mut FxHashMap<Key, Q>) {
    if pairing == Pairing::NonEmpty && ann_mask(a) & cre_mask(b) == 0 {
        return;
    }
    let (ma, mut slots) = key_to_mono(a);
    let (mb, sb) = key_to_mono(b);
    let off = slots.len() as u32;
    slots.extend(sb);
    let mut m: Mono = ma;
    m.extend(mb.into_iter().map(|blk| Block { kind: blk.kind, legs: blk.legs.iter().map(|l| l + off).collect() }));
    let anns: Vec<(u32, i32)> = (0..off).filter(|&i| slots[i as usize].mode < 0).map(|i| (i, slots[i as usize].mode)).collect();
    let cres: Vec<(u32, i32)> = (off..slots.len() as u32).filter(|&i| slots[i as usize].mode > 0).map(|i| (i, slots[i as usize].mode)).collect();
    if pairing == Pairing::FullLeft {
        // every annihilator needs a partner of matching mode
        let mut avail: FxHashMap<i32, i32> = FxHashMap::default();
        for &(_, n) in &cres {
            *avail.entry(n).or_default() += 1;
        }
        for &(_, n) in &anns {
            let e = avail.entry(-n).or_default();
            *e -= 1;
            if *e < 0 {
                return;
            }
        }
    }
    assert!(cres.len() <= 64, "too many creators in one term");
    let ctx = Ctx { s, anns, cres, slots, pairing };
    ctx.dfs(0, 0, 0, &vec![(Q::one(), m)], coef, out);
}

/// Truncation window: only the action on states of weight ≤ w is retained.
#[derive(Clone, Copy, Debug)]
pub struct Window(pub Option<u32>);

impl Window {
    pub const ALL: Window = Window(None);
    fn kills(self, a: &Key, b: &Key) -> bool {
        match self.0 {
            None => false,
            Some(w) => {
                let out = w as i64 + shift(b).max(0) as i64;
                ann_weight(b) > w || ann_weight(a) as i64 > out
            }
        }
    }
    fn keep(self, k: &Key) -> bool {
        self.0.map_or(true, |w| ann_weight(k) <= w)
    }
}

fn finish(out: FxHashMap<Key, Q>, win: Window) -> Op {
    let mut r = Op::zero();
    for (k, x) in out {
        if win.keep(&k) {
            r.add_term(k, x);
        }
    }
    r
}

pub fn compose(s: &SurfaceDatum, a: &Op, b: &Op, win: Window) -> Op {
    let mut out = FxHashMap::default();
    for (ka, xa) in &a.terms {
        for (kb, xb) in &b.terms {
            if !win.kills(ka, kb) {
                wick(s, ka, kb, Pairing::All, *xa * *xb, &mut out);
            }
        }
    }
    finish(out, win)
}

/// [a, b]; the uncontracted products cancel identically.
pub fn commutator(s: &SurfaceDatum, a: &Op, b: &Op, win: Window) -> Op {
    let mut out = FxHashMap::default();
    // index b's terms by creator mask to skip hopeless pairs quickly
    let bt: Vec<(&Key, &Q, u64, u64)> = b.terms.iter().map(|(k, x)| (k, x, ann_mask(k), cre_mask(k))).collect();
    for (ka, xa) in &a.terms {
        let (aa, ca) = (ann_mask(ka), cre_mask(ka));
        for &(kb, xb, ab, cb) in &bt {
            let x = *xa * *xb;
            if aa & cb != 0 && !win.kills(ka, kb) {
                wick(s, ka, kb, Pairing::NonEmpty, x, &mut out);
            }
            if ab & ca != 0 && !win.kills(kb, ka) {
                wick(s, kb, ka, Pairing::NonEmpty, -x, &mut out);
            }
        }
    }
    finish(out, win)
}

/// Apply an operator to a vector (creation-only terms); annihilators must all contract.
pub fn apply(s: &SurfaceDatum, a: &Op, v: &Op) -> Op {
    let mut out = FxHashMap::default();
    for (kv, xv) in &v.terms {
        let w = crate::op::cre_weight(kv);
        for (ka, xa) in &a.terms {
            if ann_weight(ka) <= w {
                wick(s, ka, kv, Pairing::FullLeft, *xa * *xv, &mut out);
            }
        }
    }
    let mut r = Op::zero();
    for (k, x) in out {
        r.add_term(k, x);
    }
    r
}

/// An operator word: legs listed left to right, class on those legs (plus free legs).
#[derive(Clone, Debug)]
pub struct Word {
    pub order: Vec<u32>,
    pub mono: Mono,
    pub slots: Vec<Slot>,
}

/// Normal order a word by adjacent swaps, emitting a contraction for every
/// annihilator passed over a creator of opposite mode.
pub fn canonicalize(s: &SurfaceDatum, coef: Q, w: Word) -> Op {
    let mut r = Op::zero();
    let mut stack = vec![(coef, w)];
    while let Some((c, mut w)) = stack.pop() {
        let mode = |i: u32| w.slots[i as usize].mode;
        let pos = w.order.windows(2).position(|p| mode(p[0]) < 0 && mode(p[1]) > 0);
        let Some(i) = pos else {
            r.add_term(mono_to_key(&w.mono, &w.slots), c);
            continue;
        };
        let (x, y) = (w.order[i], w.order[i + 1]);
        let (mx, my) = (mode(x), mode(y));
        if mx + my == 0 {
            let mut out = vec![];
            blocks::contract(s, &w.mono, x, y, false, &mut out);
            let mut order = w.order.clone();
            order.drain(i..i + 2);
            for (d, m) in out {
                stack.push((c * d * Q::from_integer(mx as i128), Word { order: order.clone(), mono: m, slots: w.slots.clone() }));
            }
        }
        w.order.swap(i, i + 1);
        stack.push((c, w));
    }
    r
}

/// The normal-ordered product :…: of a word — reorder without commutator terms.
pub fn reorder_colon(w: &Word) -> Op {
    Op::single(Q::one(), mono_to_key(&w.mono, &w.slots))
}

/// Word with a single class monomial on consecutive modes.
pub fn word(modes: &[i32], class: Mono) -> Word {
    Word { order: (0..modes.len() as u32).collect(), mono: class, slots: modes.iter().map(|&n| Slot::mode(n)).collect() }
}

pub fn is_zero_expanded(s: &SurfaceDatum, o: &Op) -> bool {
    o.is_zero() || crate::op::expand(s, o).is_zero()
}

pub fn scale_terms(o: &Op, x: Q) -> Op {
    if x.is_zero() {
        Op::zero()
    } else {
        o.scale(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op::{expand, q_class, q_label};
    use crate::rat::q;
    use crate::surface::{make_surface, SurfaceConfig};

    fn k3() -> SurfaceDatum {
        make_surface(&SurfaceConfig::k3(1, 21)).unwrap()
    }

    #[test]
    fn heisenberg() {
        let s = k3();
        let one = s.basis_class(s.unit());
        let c = s.basis_class(s.point());
        let l = s.basis_class(s.picard(0));
        let comm = commutator(&s, &q_class(&s, 3, &one), &q_class(&s, -3, &c), Window::ALL);
        assert_eq!(comm, Op::identity().scale(q(3)));
        let comm = commutator(&s, &q_class(&s, -2, &l), &q_class(&s, 2, &l), Window::ALL);
        assert_eq!(comm, Op::identity().scale(q(-4)));
        assert!(commutator(&s, &q_class(&s, 2, &l), &q_class(&s, 1, &l), Window::ALL).is_zero());
    }

    #[test]
    fn annihilate_on_vacuum_state() {
        let s = k3();
        let v = q_label(2, s.unit());
        let r = apply(&s, &q_label(-2, s.point()), &v);
        assert_eq!(r, Op::identity().scale(q(-2)));
        assert!(apply(&s, &q_label(-1, s.point()), &Op::identity()).is_zero());
    }

    #[test]
    fn canonicalize_swap() {
        let s = k3();
        // q_{-1}q_1(Δ) = q_1q_{-1}(Δ) − e
        let w = word(&[-1, 1], vec![Block::diag(s.unit(), &[0, 1])]);
        let r = canonicalize(&s, Q::one(), w.clone());
        let expect = reorder_colon(&w).add(&Op::identity().scale(q(-24)));
        assert_eq!(r, expect);
        // idempotent on normal-ordered words
        let w2 = word(&[2, -3], vec![Block::diag(s.unit(), &[0]), Block::diag(s.point(), &[1])]);
        assert_eq!(canonicalize(&s, Q::one(), w2.clone()), reorder_colon(&w2));
    }

    #[test]
    fn compose_matches_canonicalize() {
        let s = k3();
        let a = q_label(-2, s.unit());
        let b = Op::single(Q::one(), vec![Block::diag(s.unit(), &[Slot::mode(2), Slot::mode(1)])]);
        let lhs = compose(&s, &a, &b, Window::ALL);
        let w = word(&[-2, 2, 1], vec![Block::diag(s.unit(), &[0]), Block::diag(s.unit(), &[1, 2])]);
        let rhs = canonicalize(&s, Q::one(), w);
        assert_eq!(expand(&s, &lhs), expand(&s, &rhs));
    }
}
