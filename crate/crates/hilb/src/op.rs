//! Normal-ordered operator expressions.
//!
//! A term is a multiset of Nakajima legs (mode ≠ 0) and free legs (tagged, mode 0),
//! partitioned into decorated blocks. Because every term is normal ordered by
//! construction, the multiset is the whole word: creators sit left of annihilators.
//! The empty key is the identity.

use crate::blocks::{self, accumulate, Block, Kind, Mono};
use crate::rat::{fmt_q, Q};
use crate::surface::{Class, Label, SurfaceDatum};
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Slot {
    pub free: u8,
    pub mode: i32,
}

impl Slot {
    pub fn mode(n: i32) -> Self {
        Slot { free: 0, mode: n }
    }
    pub fn free(tag: u8) -> Self {
        Slot { free: tag, mode: 0 }
    }
}

pub type Key = Vec<Block<Slot>>;

pub fn key_to_mono(k: &Key) -> (Mono, Vec<Slot>) {
    let mut slots = vec![];
    let mut m = Vec::with_capacity(k.len());
    for b in k {
        let legs = b
            .legs
            .iter()
            .map(|s| {
                slots.push(*s);
                (slots.len() - 1) as u32
            })
            .collect();
        m.push(Block { kind: b.kind, legs });
    }
    (m, slots)
}

pub fn mono_to_key(m: &Mono, slots: &[Slot]) -> Key {
    let mut k: Key = m.iter().map(|b| Block::new(b.kind, b.legs.iter().map(|&i| slots[i as usize]).collect())).collect();
    k.sort_unstable();
    k
}

pub fn legs(k: &Key) -> impl Iterator<Item = &Slot> {
    k.iter().flat_map(|b| b.legs.iter())
}

pub fn ann_weight(k: &Key) -> u32 {
    legs(k).filter(|s| s.mode < 0).map(|s| (-s.mode) as u32).sum()
}

pub fn cre_weight(k: &Key) -> u32 {
    legs(k).filter(|s| s.mode > 0).map(|s| s.mode as u32).sum()
}

pub fn shift(k: &Key) -> i32 {
    legs(k).map(|s| s.mode).sum()
}

/// Bit set of |mode| over annihilators (bit 63 collects |mode| ≥ 63).
pub fn ann_mask(k: &Key) -> u64 {
    legs(k).filter(|s| s.mode < 0).fold(0, |m, s| m | 1u64 << (-s.mode).min(63))
}

pub fn cre_mask(k: &Key) -> u64 {
    legs(k).filter(|s| s.mode > 0).fold(0, |m, s| m | 1u64 << s.mode.min(63))
}

/// Codimension shift of the operator term (free legs integrate against grade-2 duals).
pub fn codim_shift(s: &SurfaceDatum, k: &Key) -> i32 {
    let (m, _) = key_to_mono(k);
    let modes: i32 = legs(k).filter(|x| x.free == 0).map(|x| x.mode.abs() - 1).sum();
    let frees = legs(k).filter(|x| x.free > 0).count() as i32;
    modes + blocks::codim(s, &m) - 2 * frees
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Op {
    pub terms: FxHashMap<Key, Q>,
}

impl Op {
    pub fn zero() -> Self {
        Op::default()
    }
    pub fn identity() -> Self {
        Self::single(Q::one(), vec![])
    }
    pub fn single(x: Q, k: Key) -> Self {
        let mut o = Op::zero();
        o.add_term(k, x);
        o
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn add_term(&mut self, k: Key, x: Q) {
        accumulate(&mut self.terms, k, x);
    }
    pub fn add_scaled(&mut self, o: &Op, x: Q) {
        if x.is_zero() {
            return;
        }
        for (k, y) in &o.terms {
            self.add_term(k.clone(), *y * x);
        }
    }
    pub fn add(&self, o: &Op) -> Op {
        let mut r = self.clone();
        r.add_scaled(o, Q::one());
        r
    }
    pub fn sub(&self, o: &Op) -> Op {
        let mut r = self.clone();
        r.add_scaled(o, -Q::one());
        r
    }
    pub fn scale(&self, x: Q) -> Op {
        let mut r = Op::zero();
        r.add_scaled(self, x);
        r
    }
    pub fn max_ann(&self) -> u32 {
        self.terms.keys().map(ann_weight).max().unwrap_or(0)
    }
    pub fn truncate(&self, max_ann: u32) -> Op {
        Op { terms: self.terms.iter().filter(|(k, _)| ann_weight(k) <= max_ann).map(|(k, x)| (k.clone(), *x)).collect() }
    }
    /// Weight shifts present among the terms.
    pub fn shifts(&self) -> Vec<i32> {
        let mut v: Vec<i32> = self.terms.keys().map(shift).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
    pub fn sorted(&self) -> Vec<(&Key, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }
    pub fn map_mono(&self, f: impl Fn(&Mono, &mut Vec<(Q, Mono)>), s_slots: impl Fn(&[Slot]) -> Vec<Slot>) -> Op {
        let mut r = Op::zero();
        for (k, x) in &self.terms {
            let (m, slots) = key_to_mono(k);
            let slots2 = s_slots(&slots);
            let mut out = vec![];
            f(&m, &mut out);
            for (y, m2) in out {
                r.add_term(mono_to_key(&m2, &slots2), *x * y);
            }
        }
        r
    }
}

fn find_free(slots: &[Slot], tag: u8) -> Option<u32> {
    slots.iter().position(|s| s.free == tag).map(|i| i as u32)
}

/// Canonical expansion of every term (singletons plus Tr edges).
pub fn expand(s: &SurfaceDatum, o: &Op) -> Op {
    let mut r = Op::zero();
    for (k, x) in &o.terms {
        let (m, slots) = key_to_mono(k);
        if blocks::is_expanded(s, &m) {
            r.add_term(k.clone(), *x);
            continue;
        }
        for (y, m2) in blocks::expand(s, &m) {
            r.add_term(mono_to_key(&m2, &slots), *x * y);
        }
    }
    r
}

/// Multiply the free leg `tag` by a class (no integration).
pub fn mul_free(s: &SurfaceDatum, o: &Op, tag: u8, g: &Class) -> Op {
    let mut r = Op::zero();
    for (k, x) in &o.terms {
        let (m, slots) = key_to_mono(k);
        let f = find_free(&slots, tag).expect("free leg");
        for (l, c) in s.terms(g) {
            if let Some((y, m2)) = blocks::mul_leg(s, &m, f, l) {
                r.add_term(mono_to_key(&m2, &slots), *x * c * y);
            }
        }
    }
    r
}

/// Multiply the free leg by γ and integrate it: the endomorphism E(γ).
pub fn with_class(s: &SurfaceDatum, o: &Op, tag: u8, g: &Class) -> Op {
    let mut r = Op::zero();
    for (k, x) in &o.terms {
        let (m, slots) = key_to_mono(k);
        let f = find_free(&slots, tag).expect("free leg");
        for (l, c) in s.terms(g) {
            if let Some((y, m2)) = blocks::mul_leg(s, &m, f, l) {
                if let Some((z, m3)) = blocks::integrate(s, &m2, f) {
                    r.add_term(mono_to_key(&m3, &slots), *x * c * y * z);
                }
            }
        }
    }
    r
}

/// Integrate the free legs `a`, `b` against the diagonal: E(Δ).
pub fn glue(s: &SurfaceDatum, o: &Op, a: u8, b: u8) -> Op {
    contract_free(s, o, a, b, false)
}

/// Restrict the free legs `a`, `b` to the diagonal, keeping leg `a`.
pub fn restrict_free(s: &SurfaceDatum, o: &Op, a: u8, b: u8) -> Op {
    contract_free(s, o, a, b, true)
}

fn contract_free(s: &SurfaceDatum, o: &Op, a: u8, b: u8, keep: bool) -> Op {
    let mut r = Op::zero();
    for (k, x) in &o.terms {
        let (m, slots) = key_to_mono(k);
        let (fa, fb) = (find_free(&slots, a).expect("free leg"), find_free(&slots, b).expect("free leg"));
        let mut out = vec![];
        blocks::contract(s, &m, fa, fb, keep, &mut out);
        for (y, m2) in out {
            r.add_term(mono_to_key(&m2, &slots), *x * y);
        }
    }
    r
}

/// Δ_* of the free leg `tag` onto the pair (tag, tag2).
pub fn push_diag(s: &SurfaceDatum, o: &Op, tag: u8, tag2: u8) -> Op {
    let mut r = Op::zero();
    for (k, x) in &o.terms {
        let (m, mut slots) = key_to_mono(k);
        let f = find_free(&slots, tag).expect("free leg");
        slots.push(Slot::free(tag2));
        let mut out = vec![];
        blocks::push_diag(s, &m, f, (slots.len() - 1) as u32, &mut out);
        for (y, m2) in out {
            r.add_term(mono_to_key(&m2, &slots), *x * y);
        }
    }
    r
}

/// Rename a free-leg tag.
pub fn retag(o: &Op, from: u8, to: u8) -> Op {
    let mut r = Op::zero();
    for (k, x) in &o.terms {
        let mut k2: Key = k
            .iter()
            .map(|b| Block::new(b.kind, b.legs.iter().map(|s| if s.free == from { Slot::free(to) } else { *s }).collect()))
            .collect();
        k2.sort_unstable();
        r.add_term(k2, *x);
    }
    r
}

/// The operator q_n(γ) with no free leg.
pub fn q_class(s: &SurfaceDatum, n: i32, g: &Class) -> Op {
    let mut r = Op::zero();
    for (l, c) in s.terms(g) {
        r.add_term(vec![Block::diag(l, &[Slot::mode(n)])], c);
    }
    r
}

pub fn q_label(n: i32, l: Label) -> Op {
    Op::single(Q::one(), vec![Block::diag(l, &[Slot::mode(n)])])
}

fn fmt_slot(s: &Slot) -> String {
    if s.free > 0 {
        format!("F{}", s.free)
    } else {
        s.mode.to_string()
    }
}

pub fn fmt_key(s: &SurfaceDatum, k: &Key) -> String {
    if k.is_empty() {
        return "Id".into();
    }
    k.iter()
        .map(|b| {
            let legs: Vec<String> = b.legs.iter().map(fmt_slot).collect();
            match b.kind {
                Kind::Diag(d) => format!("{{{}}}:{}", legs.join(","), s.name(d)),
                Kind::Tr => format!("tr({})", legs.join(",")),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Deterministic text of an operator, one term per line.
pub fn fmt_op(s: &SurfaceDatum, o: &Op) -> String {
    if o.is_zero() {
        return "0".into();
    }
    o.sorted().into_iter().map(|(k, x)| format!("{} * {}", fmt_q(x), fmt_key(s, k))).collect::<Vec<_>>().join("\n")
}

pub fn residual_lines(s: &SurfaceDatum, o: &Op, limit: usize) -> Vec<String> {
    o.sorted().into_iter().take(limit).map(|(k, x)| format!("{} * {}", fmt_q(x), fmt_key(s, k))).collect()
}

pub fn collect_terms(v: impl IntoIterator<Item = (Key, Q)>) -> Op {
    let mut r = Op::zero();
    for (k, x) in v {
        r.add_term(k, x);
    }
    r
}

pub fn as_map(o: &Op) -> &FxHashMap<Key, Q> {
    &o.terms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{make_surface, SurfaceConfig};

    #[test]
    fn key_roundtrip_and_weights() {
        let k: Key = vec![Block::diag(0, &[Slot::mode(2), Slot::mode(-1), Slot::free(1)]), Block::tr(Slot::mode(3), Slot::mode(-3))];
        let (m, sl) = key_to_mono(&k);
        let mut k2 = k.clone();
        k2.sort_unstable();
        assert_eq!(mono_to_key(&m, &sl), k2);
        assert_eq!(ann_weight(&k), 4);
        assert_eq!(cre_weight(&k), 5);
        assert_eq!(shift(&k), 1);
    }

    #[test]
    fn specialize_free_leg() {
        let s = make_surface(&SurfaceConfig::k3(1, 21)).unwrap();
        let qf = Op::single(Q::one(), vec![Block::diag(0, &[Slot::mode(2), Slot::free(1)])]);
        let l = s.parse_class("l").unwrap();
        assert_eq!(with_class(&s, &qf, 1, &l), q_class(&s, 2, &l));
        // restrict then specialize = specialize with the pushforward
        let pushed = push_diag(&s, &qf, 1, 2);
        assert_eq!(pushed.len(), 1);
    }
}
