//! The Fock model: creation-only operator terms applied to the vacuum.
//!
//! A basis monomial is a canonical key whose legs all have positive mode: singletons
//! `q_n(label)` and, in chow mode, transcendental pairs `q_m q_n(Δ^tr)`.

use crate::blocks::{Block, Kind};
use crate::op::{self, cre_weight, legs, Key, Op, Slot};
use crate::rat::Q;
use crate::surface::{Class, Label, SurfaceDatum};
use crate::wick;
use num_traits::{One, Zero};
use thiserror::Error;

pub type FockVector = Op;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("modes must be positive, got {0}")]
    Mode(i32),
    #[error("unknown label {0}")]
    Label(String),
    #[error("class must lie in R(S) in k3-chow mode")]
    NotAlgebraic,
    #[error("transcendental pairs only exist in k3-chow mode")]
    PairInSplit,
    #[error("datum mismatch: {0}")]
    Mismatch(String),
}

pub fn vacuum() -> FockVector {
    Op::identity()
}

pub fn fock_monomial(s: &SurfaceDatum, singles: &[(i32, &str)], pairs: &[(i32, i32)]) -> Result<FockVector, FockError> {
    let mut k: Key = vec![];
    for &(n, name) in singles {
        if n < 1 {
            return Err(FockError::Mode(n));
        }
        let l = s.label(name).ok_or_else(|| FockError::Label(name.into()))?;
        k.push(Block::diag(l, &[Slot::mode(n)]));
    }
    for &(m, n) in pairs {
        if s.mode.is_split() {
            return Err(FockError::PairInSplit);
        }
        for x in [m, n] {
            if x < 1 {
                return Err(FockError::Mode(x));
            }
        }
        k.push(Block::tr(Slot::mode(m), Slot::mode(n)));
    }
    k.sort_unstable();
    // a transcendental label among chow singletons would not be canonical
    Ok(op::expand(s, &Op::single(Q::one(), k)))
}

pub fn weight(k: &Key) -> u32 {
    cre_weight(k)
}

/// Σ(n − 1 + grade) over singletons, Σ(m + n) over transcendental pairs.
pub fn codim(s: &SurfaceDatum, k: &Key) -> i32 {
    k.iter()
        .map(|b| match b.kind {
            Kind::Tr => b.legs.iter().map(|x| x.mode).sum(),
            Kind::Diag(l) => b.legs.iter().map(|x| x.mode - 1).sum::<i32>() + 2 * (b.legs.len() as i32 - 1) + s.grade(l) as i32,
        })
        .sum()
}

/// q_n(γ) on a vector, acting directly on monomials.
///
/// Annihilation removes a matching singleton with factor n·⟨γ, δ⟩ (n < 0); transcendental
/// pairs are invisible to algebraic annihilators.
pub fn apply_q(s: &SurfaceDatum, n: i32, g: &Class, w: &FockVector) -> Result<FockVector, FockError> {
    let mut r = Op::zero();
    if n == 0 {
        return Ok(r);
    }
    let gt = s.terms(g);
    for (k, x) in &w.terms {
        if n > 0 {
            for &(l, c) in &gt {
                let b = Block::diag(l, &[Slot::mode(n)]);
                let at = k.partition_point(|x| *x <= b);
                let mut k2 = Vec::with_capacity(k.len() + 1);
                k2.extend_from_slice(&k[..at]);
                k2.push(b);
                k2.extend_from_slice(&k[at..]);
                r.add_term(k2, *x * c);
            }
        } else {
            for (i, b) in k.iter().enumerate() {
                if i > 0 && k[i - 1] == *b {
                    // identical factors: each copy contributes, handled by the multiplicity below
                    continue;
                }
                let Kind::Diag(d) = b.kind else { continue };
                if b.legs.len() != 1 || b.legs[0].mode != -n {
                    continue;
                }
                let mult = k[i..].iter().take_while(|c| *c == b).count() as i128;
                let p: Q = gt.iter().map(|&(l, c)| c * s.lpair(l, d)).sum();
                if p.is_zero() {
                    continue;
                }
                let mut k2 = k.clone();
                k2.remove(i);
                r.add_term(k2, *x * p * Q::from_integer(n as i128 * mult));
            }
        }
    }
    Ok(r)
}

/// Apply a general operator (no free legs).
pub fn apply_expr(s: &SurfaceDatum, e: &Op, w: &FockVector) -> FockVector {
    op::expand(s, &wick::apply(s, e, w))
}

/// All basis monomials of weight exactly `w`.
pub fn basis(s: &SurfaceDatum, w: u32) -> Vec<Key> {
    let labels: Vec<Label> = if s.mode.is_split() { s.labels().collect() } else { s.algebraic_labels() };
    // factor types ordered: (mode, label) singletons, then (m ≤ n) pairs
    let mut kinds: Vec<(u32, Block<Slot>)> = vec![];
    for n in 1..=w as i32 {
        for &l in &labels {
            kinds.push((n as u32, Block::diag(l, &[Slot::mode(n)])));
        }
    }
    if !s.mode.is_split() {
        for m in 1..=w as i32 {
            for n in m..=w as i32 - m {
                kinds.push(((m + n) as u32, Block::tr(Slot::mode(m), Slot::mode(n))));
            }
        }
    }
    let mut out = vec![];
    fn go(kinds: &[(u32, Block<Slot>)], i: usize, left: u32, cur: &mut Key, out: &mut Vec<Key>) {
        if left == 0 {
            let mut k = cur.clone();
            k.sort_unstable();
            out.push(k);
            return;
        }
        for j in i..kinds.len() {
            if kinds[j].0 <= left {
                cur.push(kinds[j].1.clone());
                go(kinds, j, left - kinds[j].0, cur, out);
                cur.pop();
            }
        }
    }
    go(&kinds, 0, w, &mut vec![], &mut out);
    out.sort();
    out
}

/// Replace each transcendental pair by Σ g^{ab} q_m(τ_a) q_n(τ_b) in the split model.
pub fn to_split_fock(s: &SurfaceDatum, sp: &SurfaceDatum, w: &FockVector) -> Result<FockVector, FockError> {
    if s.mode.is_split() || !sp.mode.is_split() || s.b != sp.b || s.rho != sp.rho || s.picard_gram() != sp.picard_gram() {
        return Err(FockError::Mismatch("need a chow datum and a split datum with equal ρ, b and Picard lattice".into()));
    }
    let map = |l: Label| sp.label(s.name(l)).expect("algebraic label present in split datum");
    let mut r = Op::zero();
    for (k, x) in &w.terms {
        let k2: Key = k
            .iter()
            .map(|b| match b.kind {
                Kind::Diag(l) => Block::new(Kind::Diag(map(l)), b.legs.clone()),
                Kind::Tr => b.clone(),
            })
            .collect();
        r.add_term(k2, *x);
    }
    Ok(op::expand(sp, &r))
}

pub fn is_state(w: &FockVector) -> bool {
    w.terms.keys().all(|k| legs(k).all(|x| x.mode > 0 && x.free == 0))
}
