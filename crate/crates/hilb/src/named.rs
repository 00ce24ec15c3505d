//! The named operators, as normal-ordered series truncated by annihilation weight.
//!
//! Every series takes `max_ann`: terms whose annihilators remove more than that much
//! weight are dropped. On states of weight ≤ w only terms with annihilation weight ≤ w act,
//! so the truncation is exact there. Operators into Hilb × S carry one free leg, tag 1.

use crate::blocks::{Block, Kind};
use crate::op::{self, mul_free, push_diag, with_class, Key, Op, Slot};
use crate::rat::{factorial, q, qr, Q};
use crate::surface::{Class, SurfaceDatum};
use num_traits::{One, Zero};
use smallvec::SmallVec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NamedError {
    #[error("J/G(k≥4) require c_1 = 0")]
    NeedsFlat,
    #[error("unsupported operator: {0}")]
    Unsupported(String),
}

pub const F1: u8 = 1;
pub const F2: u8 = 2;

fn diag_key(label: u16, modes: &[i32], free: Option<u8>) -> Key {
    let mut legs: SmallVec<[Slot; 4]> = modes.iter().map(|&n| Slot::mode(n)).collect();
    if let Some(f) = free {
        legs.push(Slot::free(f));
    }
    vec![Block::new(Kind::Diag(label), legs)]
}

fn finish(s: &SurfaceDatum, o: Op) -> Op {
    // transcendental kernels only have closed-form contraction rules in chow mode
    if s.mode.is_split() {
        op::expand(s, &o)
    } else {
        o
    }
}

/// q_n with its class leg free: the S-valued Nakajima operator.
pub fn q_free(n: i32) -> Op {
    assert!(n != 0);
    Op::single(Q::one(), diag_key(0, &[n], Some(F1)))
}

fn ann_of(modes: &[i32]) -> u32 {
    modes.iter().filter(|&&n| n < 0).map(|&n| (-n) as u32).sum()
}

/// Ordered pairs (a, b), a + b = n, a, b ≠ 0, annihilation weight ≤ max_ann.
fn pairs(n: i32, max_ann: u32) -> Vec<(i32, i32)> {
    let m = max_ann as i32 + n.abs() + 1;
    (-m..=m).filter(|&a| a != 0 && a != n).map(|a| (a, n - a)).filter(|&(a, b)| ann_of(&[a, b]) <= max_ann).collect()
}

/// 𝔏_n = ½ Σ :q_a q_b:|_Δ.
pub fn lehn(n: i32, max_ann: u32) -> Op {
    let mut o = Op::zero();
    for (a, b) in pairs(n, max_ann) {
        o.add_term(diag_key(0, &[a, b], Some(F1)), qr(1, 2));
    }
    o
}

/// L_n = ½ Σ :q_a q_b:(Δ^tr).
pub fn vir(s: &SurfaceDatum, n: i32, max_ann: u32) -> Op {
    let mut o = Op::zero();
    for (a, b) in pairs(n, max_ann) {
        o.add_term(vec![Block::tr(Slot::mode(a), Slot::mode(b))], qr(1, 2));
    }
    finish(s, o)
}

/// Multisets of nonzero integers (sorted) of length r, sum n, annihilation weight ≤ max_ann.
pub fn partitions(r: usize, n: i32, max_ann: u32) -> Vec<Vec<i32>> {
    fn go(r: usize, n: i32, lo: i32, ann_left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>, cap: i32) {
        if r == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for p in lo..=cap {
            if p == 0 {
                continue;
            }
            let cost = if p < 0 { -p } else { 0 };
            if cost > ann_left {
                continue;
            }
            // remaining r−1 parts are ≥ p
            if n - p < (r as i32 - 1) * p && p > 0 {
                break;
            }
            cur.push(p);
            go(r - 1, n - p, p, ann_left - cost, cur, out, cap);
            cur.pop();
        }
    }
    let mut out = vec![];
    let a = max_ann as i32;
    let cap = a + n.abs() + 1;
    go(r, n, -a, a, &mut vec![], &mut out, cap);
    out
}

fn lambda_fact(p: &[i32]) -> i128 {
    let mut f = 1i128;
    let mut i = 0;
    while i < p.len() {
        let j = p[i..].iter().take_while(|&&x| x == p[i]).count();
        f *= factorial(j as u32);
        i += j;
    }
    f
}

/// J^k_n from the partition formula, with the free leg tagged `tag`.
///
/// The e-correction runs over nonempty partitions of length k−1 only.
pub fn j_op(s: &SurfaceDatum, n: i32, k: u32, max_ann: u32) -> Result<Op, NamedError> {
    if k >= 1 && !s.t_vanishes() {
        return Err(NamedError::NeedsFlat);
    }
    let kf = q(factorial(k));
    let mut o = Op::zero();
    for p in partitions(k as usize + 1, n, max_ann) {
        o.add_term(diag_key(s.unit(), &p, Some(F1)), -kf / q(lambda_fact(&p)));
    }
    if k >= 2 {
        let e = s.e_coeff();
        for p in partitions(k as usize - 1, n, max_ann) {
            let sl: i128 = p.iter().map(|&x| (x as i128).pow(2)).sum();
            let c = kf * e * q(sl + (n as i128).pow(2) - 2) / q(24 * lambda_fact(&p));
            o.add_term(diag_key(s.point(), &p, Some(F1)), c);
        }
    }
    Ok(o)
}

/// The literal reading of the partition formula, with the empty partition included
/// in the e-correction; kept only to document why it is excluded.
pub fn j_op_literal(s: &SurfaceDatum, n: i32, k: u32, max_ann: u32) -> Result<Op, NamedError> {
    let mut o = j_op(s, n, k, max_ann)?;
    if k == 1 && n == 0 {
        o.add_term(diag_key(s.point(), &[], Some(F1)), s.e_coeff() * q(-2) / q(24));
    }
    Ok(o)
}

fn g2(max_ann: u32) -> Op {
    let mut o = Op::zero();
    for m in 1..=max_ann as i32 {
        o.add_term(diag_key(0, &[m, -m], Some(F1)), -Q::one());
    }
    o
}

fn g3(s: &SurfaceDatum, max_ann: u32) -> Op {
    let mut o = Op::zero();
    // ordered triples summing to zero; a multiset p has 3!/p! orderings
    for p in partitions(3, 0, max_ann) {
        o.add_term(diag_key(0, &p, Some(F1)), qr(-1, 6) * q(6 / lambda_fact(&p)));
    }
    if !s.t_vanishes() {
        let mut tt = Op::zero();
        for m in 1..=max_ann as i32 {
            tt.add_term(diag_key(0, &[m, -m], Some(F1)), qr(-m as i128, 2));
        }
        o = o.add(&mul_free(s, &tt, F1, &s.t_class()));
    }
    o
}

/// 𝔊_k with one free leg: k = 2, 3 by the closed formulas, k ≥ 4 from J^{k−1}_0.
pub fn g_op(s: &SurfaceDatum, k: u32, max_ann: u32) -> Result<Op, NamedError> {
    match k {
        0 | 1 => Ok(Op::zero()),
        2 => Ok(g2(max_ann)),
        3 => Ok(g3(s, max_ann)),
        _ => {
            if !s.t_vanishes() {
                return Err(NamedError::NeedsFlat);
            }
            let j = j_op(s, 0, k - 1, max_ann)?.scale(Q::one() / q(factorial(k - 1)));
            let lower = g_op(s, k - 2, max_ann)?;
            Ok(j.sub(&mul_free(s, &lower, F1, &e12(s))))
        }
    }
}

/// e/12 as a class.
pub fn e12(s: &SurfaceDatum) -> Class {
    s.e_class().iter().map(|x| *x / q(12)).collect()
}

/// Integrate the free leg against γ.
pub fn at(s: &SurfaceDatum, o: &Op, g: &Class) -> Op {
    with_class(s, o, F1, g)
}

/// Δ_* of an operator with free leg 1 onto legs (1, 2).
pub fn delta_push(s: &SurfaceDatum, o: &Op) -> Op {
    push_diag(s, o, F1, F2)
}

/// Id ⊠ [Δ_*(γ)] on the free legs (1, 2).
pub fn id_diag(s: &SurfaceDatum, g: &Class) -> Op {
    let mut o = Op::zero();
    for (l, c) in s.terms(g) {
        o.add_term(diag_key(l, &[], Some(F1)).into_iter().map(|mut b| {
            b.legs.push(Slot::free(F2));
            b.legs.sort_unstable();
            b
        }).collect(), c);
    }
    o
}

/// D_{m,n} without the radical normalization: q_m q_n(Δ^tr) + δ_{m+n} b/2 (m ≥ n).
pub fn d_raw(s: &SurfaceDatum, m: i32, n: i32) -> Op {
    let mut o = Op::single(Q::one(), vec![Block::tr(Slot::mode(m), Slot::mode(n))]);
    if m + n == 0 && m < 0 {
        // q_m q_n with m < n is reordered: q_{-k} q_k = q_k q_{-k} − k b
        o.add_term(vec![], q(m as i128) * q(s.b as i128));
    }
    if m + n == 0 {
        o.add_term(vec![], qr(s.b as i128, 2));
    }
    finish(s, o)
}

pub fn codim_shift_of(s: &SurfaceDatum, o: &Op) -> Vec<i32> {
    let mut v: Vec<i32> = o.terms.keys().map(|k| op::codim_shift(s, k)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn is_zero(o: &Op) -> bool {
    o.terms.values().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{make_surface, SurfaceConfig};

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(2, 0, 3), vec![vec![-3, 3], vec![-2, 2], vec![-1, 1]]);
        assert_eq!(partitions(1, 2, 0), vec![vec![2]]);
        assert!(partitions(1, 0, 5).is_empty());
        // parts of length 3 summing to 1 with no annihilators: 3? none (parts ≥ 1 sum to ≥ 3)
        assert!(partitions(3, 1, 0).is_empty());
        assert_eq!(partitions(3, 3, 0), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn j_zero_is_minus_q() {
        let s = make_surface(&SurfaceConfig::k3(1, 21)).unwrap();
        for n in [-3, -1, 2] {
            assert_eq!(j_op(&s, n, 0, 6).unwrap(), q_free(n).scale(-Q::one()));
        }
        assert!(j_op(&s, 0, 0, 6).unwrap().is_zero());
    }

    #[test]
    fn flatness_required() {
        let mut c = SurfaceConfig::split(1, 1).with_t(&[1]);
        c.mode = crate::surface::Mode::GeneralSplit;
        let s = make_surface(&c).unwrap();
        assert_eq!(g_op(&s, 4, 3), Err(NamedError::NeedsFlat));
        assert_eq!(j_op(&s, 0, 2, 3), Err(NamedError::NeedsFlat));
        assert!(g_op(&s, 3, 3).is_ok());
    }
}
