//! Writing 𝔊_k(γ), γ ∈ R(S), through Nakajima operators with algebraic classes and L_m.
//!
//! Expand the diagonal class of every term of 𝔊_k(γ) into singletons plus at most one
//! transcendental edge. Edge-free terms are Heisenberg words. Terms with an edge on modes
//! (a, b) and fixed remaining factors sum, over a + b = m, to L_m times those factors, because
//! L_m commutes with every q_n(δ), δ ∈ R(S).

use crate::blocks::Kind;
use crate::named::{self, at, vir, NamedError};
use crate::op::{self, Key, Op};
use crate::rat::Q;
use crate::surface::{Class, Label, SurfaceDatum};
use crate::verify::residual;
use crate::wick::{compose, Window};
use num_traits::Zero;
use std::collections::BTreeMap;

/// coef · L_m^{[m given]} · q_{n_1}(δ_1) ⋯ q_{n_r}(δ_r), modes weakly decreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub coef: Q,
    pub vir: Option<i32>,
    pub factors: Vec<(i32, Label)>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub items: Vec<Item>,
    pub assembled: Op,
    pub residual: Op,
}

fn factors_of(k: &Key) -> (Vec<(i32, Label)>, Option<(i32, i32)>) {
    let mut f = vec![];
    let mut tr = None;
    for b in k {
        match b.kind {
            Kind::Diag(l) => f.extend(b.legs.iter().map(|x| (x.mode, l))),
            Kind::Tr => tr = Some((b.legs[0].mode, b.legs[1].mode)),
        }
    }
    f.sort_by(|a, b| b.cmp(a));
    (f, tr)
}

pub fn word_op(s: &SurfaceDatum, it: &Item, w: u32) -> Op {
    let mut o = match it.vir {
        Some(m) => vir(s, m, w + 2 * it.factors.iter().map(|x| x.0.unsigned_abs()).sum::<u32>()),
        None => Op::identity(),
    };
    for &(n, l) in &it.factors {
        o = compose(s, &o, &op::q_label(n, l), Window::ALL);
    }
    o.scale(it.coef)
}

/// Decompose 𝔊_k(γ) and certify the result on states of weight ≤ w.
pub fn decompose_g(s: &SurfaceDatum, k: u32, g: &Class, w: u32) -> Result<Decomposition, NamedError> {
    if k < 2 {
        return Err(NamedError::Unsupported(format!("decomposition needs k ≥ 2, got {k}")));
    }
    if s.mode.is_split() {
        return Err(NamedError::Unsupported("decomposition runs in k3-chow mode".into()));
    }
    let target = at(s, &named::g_op(s, k, w)?, g).truncate(w);
    let mut heis: BTreeMap<Vec<(i32, Label)>, Q> = BTreeMap::new();
    // (m, remaining factors) -> coefficient of L_m, read off one representative edge
    let mut virs: BTreeMap<(i32, Vec<(i32, Label)>), Q> = BTreeMap::new();
    let expanded = op::expand(s, &target);
    for (key, c) in expanded.sorted() {
        let (f, tr) = factors_of(key);
        match tr {
            None => *heis.entry(f).or_insert_with(Q::zero) += *c,
            Some((a, b)) => {
                // L_m carries Tr{a,b} with weight 1 (a ≠ b) or 1/2 (a = b)
                let lc = if a == b { *c * Q::from_integer(2) } else { *c };
                virs.entry((a + b, f)).or_insert(lc);
            }
        }
    }
    let mut items: Vec<Item> = heis.into_iter().filter(|(_, c)| !c.is_zero()).map(|(f, c)| Item { coef: c, vir: None, factors: f }).collect();
    items.extend(virs.into_iter().filter(|(_, c)| !c.is_zero()).map(|((m, f), c)| Item { coef: c, vir: Some(m), factors: f }));
    let mut assembled = Op::zero();
    for it in &items {
        assembled = assembled.add(&word_op(s, it, w));
    }
    let assembled = assembled.truncate(w);
    let res = residual(s, &target.sub(&assembled));
    Ok(Decomposition { items, assembled, residual: res })
}

pub fn fmt_item(s: &SurfaceDatum, it: &Item) -> String {
    let mut parts = vec![crate::rat::fmt_q(&it.coef)];
    if let Some(m) = it.vir {
        parts.push(format!("L({m})"));
    }
    parts.extend(it.factors.iter().map(|&(n, l)| format!("q({n},{})", s.name(l))));
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{make_surface, SurfaceConfig};

    #[test]
    fn g2_of_point_and_unit() {
        let s = make_surface(&SurfaceConfig::k3(1, 21)).unwrap();
        let d = decompose_g(&s, 2, &s.basis_class(s.point()), 6).unwrap();
        assert!(d.residual.is_zero());
        assert!(d.items.iter().all(|i| i.vir.is_none()));
        let d = decompose_g(&s, 2, &s.basis_class(s.unit()), 6).unwrap();
        assert!(d.residual.is_zero());
        // the transcendental part of G_2(1) is −L_0
        let v: Vec<_> = d.items.iter().filter(|i| i.vir.is_some()).collect();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].vir, v[0].coef, v[0].factors.len()), (Some(0), -Q::from_integer(1), 0));
    }
}
