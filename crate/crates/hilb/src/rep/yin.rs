//! Yin vectors Σ_σ sign σ · D_{m_1,n_σ(1)} ⋯ D_{m_{b+1},n_σ(b+1)} v in the pair sector of the
//! Fock model, their annihilation by d_{−m,−n}, the gl_∞ action, and the split-model Kimura sum.

use super::dop::{d_op, rad_apply, RadOp};
use super::scalar::Scalar;
use crate::op::Op;
use crate::rat::{qr, Q};
use crate::split::SplitClass;
use crate::surface::SurfaceDatum;
use itertools::Itertools;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum YinError {
    #[error("index families must both have length b + 1 = {0}")]
    Length(usize),
    #[error("indices must be positive")]
    Index,
    #[error("kimura_check is limited to b ≤ 4, got {0}")]
    TooLarge(usize),
}

pub fn perm_sign(p: &[usize]) -> i32 {
    let inv = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Signed permutations of 0..k.
pub fn signed_perms(k: usize) -> Vec<(i32, Vec<usize>)> {
    (0..k).permutations(k).map(|p| (perm_sign(&p), p)).collect()
}

/// v^{m…}_{n…}; index lists need not be sorted (the antisymmetry is built in).
pub fn yin(s: &SurfaceDatum, m: &[i32], n: &[i32]) -> Result<RadOp, YinError> {
    if m.len() != n.len() {
        return Err(YinError::Length(m.len()));
    }
    if m.iter().chain(n).any(|&x| x < 1) {
        return Err(YinError::Index);
    }
    let mut r = RadOp::zero();
    for (sg, p) in signed_perms(m.len()) {
        let mut v = RadOp::rational(Op::identity());
        for i in (0..m.len()).rev() {
            v = rad_apply(s, &d_op(s, m[i], n[p[i]]), &v);
        }
        r = r.add(&v.times(&Scalar::rational(Q::from_integer(sg as i128))));
    }
    Ok(r)
}

/// d_{−a,−c} v^M_N for a, c ≤ mode_bound; returns failing (M, N, a, c).
pub fn yin_annihilation_check(s: &SurfaceDatum, b: usize, index_bound: i32, mode_bound: i32) -> (usize, Vec<(Vec<i32>, Vec<i32>, i32, i32)>) {
    let sets: Vec<Vec<i32>> = (1..=index_bound).combinations(b + 1).collect();
    let mut count = 0;
    let mut bad = vec![];
    for mm in &sets {
        for nn in &sets {
            let v = yin(s, mm, nn).unwrap();
            for a in 1..=mode_bound {
                for c in 1..=mode_bound {
                    count += 1;
                    if !rad_apply(s, &d_op(s, -a, -c), &v).is_zero() {
                        bad.push((mm.clone(), nn.clone(), a, c));
                    }
                }
            }
        }
    }
    (count, bad)
}

/// An element of S²(∧^{b+1}): unordered pairs of sorted index sets.
pub type WedgeSquare = BTreeMap<(Vec<i32>, Vec<i32>), Q>;

fn sort_wedge(v: &[i32]) -> Option<(i32, Vec<i32>)> {
    let mut w = v.to_vec();
    let mut sg = 1;
    // bubble sort, tracking sign; repeated index kills the wedge
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] == w[j + 1] {
                return None;
            }
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sg = -sg;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((sg, w))
}

fn push_pair(out: &mut WedgeSquare, c: Q, a: &[i32], b: &[i32]) {
    let (Some((sa, a)), Some((sb, b))) = (sort_wedge(a), sort_wedge(b)) else { return };
    let key = if a <= b { (a, b) } else { (b, a) };
    let e = out.entry(key).or_insert_with(|| Q::from_integer(0));
    *e += c * Q::from_integer((sa * sb) as i128);
}

/// (E_{s,u} − b/2 δ) on (e_M)(e_N): replace every occurrence of u by s, one at a time.
pub fn levi_action(s_: i32, u: i32, m: &[i32], n: &[i32]) -> WedgeSquare {
    let mut out = WedgeSquare::new();
    for i in 0..m.len() {
        if m[i] == u {
            let mut m2 = m.to_vec();
            m2[i] = s_;
            push_pair(&mut out, Q::from_integer(1), &m2, n);
        }
    }
    for i in 0..n.len() {
        if n[i] == u {
            let mut n2 = n.to_vec();
            n2[i] = s_;
            push_pair(&mut out, Q::from_integer(1), m, &n2);
        }
    }
    out.retain(|_, c| *c != Q::from_integer(0));
    out
}

/// The assignment (e_M)(e_N) ↦ v^M_N, extended linearly.
pub fn assign(s: &SurfaceDatum, w: &WedgeSquare) -> RadOp {
    let mut r = RadOp::zero();
    for ((a, b), c) in w {
        r = r.add(&yin(s, a, b).unwrap().times(&Scalar::rational(*c)));
    }
    r
}

/// (D_{s,−u} − b/2 δ_{su}) v^M_N − assign((E_{s,u} − b/2 δ)(e_M)(e_N)).
pub fn gl_residual(s: &SurfaceDatum, s_: i32, u: i32, m: &[i32], n: &[i32]) -> RadOp {
    let v = yin(s, m, n).unwrap();
    let mut lhs = rad_apply(s, &d_op(s, s_, -u), &v);
    if s_ == u {
        lhs = lhs.sub(&v.times(&Scalar::rational(qr(s.b as i128, 2))));
    }
    lhs.sub(&assign(s, &levi_action(s_, u, m, n)))
}

/// The direct re-indexing of the yin side: Σ_{m_i = u} v^{M[i→s]}_N + Σ_{n_i = u} v^M_{N[i→s]}.
pub fn reindexed(s: &SurfaceDatum, s_: i32, u: i32, m: &[i32], n: &[i32]) -> RadOp {
    let mut r = RadOp::zero();
    for i in 0..m.len() {
        if m[i] == u {
            let mut m2 = m.to_vec();
            m2[i] = s_;
            r = r.add(&yin(s, &m2, n).unwrap());
        }
    }
    for i in 0..n.len() {
        if n[i] == u {
            let mut n2 = n.to_vec();
            n2[i] = s_;
            r = r.add(&yin(s, m, &n2).unwrap());
        }
    }
    r
}

/// Σ_σ sign σ Π_i Δ^tr_{i, σ(i)+b+1} on S^{2(b+1)} of a split datum.
pub fn kimura_sum(s: &SurfaceDatum, b: usize) -> Result<SplitClass, YinError> {
    if b > 4 {
        return Err(YinError::TooLarge(b));
    }
    let k = 2 * (b + 1);
    let mut r = SplitClass::zero(k);
    for (sg, p) in signed_perms(b + 1) {
        let mut t = SplitClass::unit(s, k);
        for i in 0..=b {
            t = t.mul(s, &SplitClass::transcendental(s, k, i, p[i] + b + 1));
        }
        r = r.add(&t.scale(Q::from_integer(sg as i128)));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::to_split_fock;
    use crate::surface::{make_surface, SurfaceConfig};

    #[test]
    fn annihilated() {
        let s = make_surface(&SurfaceConfig::k3(1, 2)).unwrap();
        let v = yin(&s, &[1, 2, 3], &[1, 2, 3]).unwrap();
        assert!(!v.is_zero());
        assert!(rad_apply(&s, &d_op(&s, -1, -1), &v).is_zero());
        let s1 = make_surface(&SurfaceConfig::k3(1, 1)).unwrap();
        let v = yin(&s1, &[1, 2], &[1, 2]).unwrap();
        assert!(rad_apply(&s1, &d_op(&s1, -1, -2), &v).is_zero());
        let (n, bad) = yin_annihilation_check(&s1, 1, 3, 3);
        assert_eq!((n, bad.len()), (81, 0));
    }

    #[test]
    fn antisymmetric() {
        let s = make_surface(&SurfaceConfig::k3(1, 1)).unwrap();
        let a = yin(&s, &[1, 3], &[2, 3]).unwrap();
        let b = yin(&s, &[3, 1], &[2, 3]).unwrap();
        assert!(a.add(&b).is_zero());
        assert!(yin(&s, &[2, 2], &[1, 3]).unwrap().is_zero());
        // S²: the two families may be exchanged
        assert_eq!(a, yin(&s, &[2, 3], &[1, 3]).unwrap());
    }

    #[test]
    fn gl_examples() {
        let s = make_surface(&SurfaceConfig::k3(1, 2)).unwrap();
        let (m, n) = ([1, 2, 3], [1, 2, 3]);
        assert!(levi_action(4, 5, &m, &n).is_empty());
        assert!(gl_residual(&s, 4, 5, &m, &n).is_zero());
        let w = levi_action(4, 2, &m, &n);
        assert_eq!(w.len(), 1);
        assert!(gl_residual(&s, 4, 2, &m, &n).is_zero());
        let v = yin(&s, &m, &n).unwrap();
        let lhs = rad_apply(&s, &d_op(&s, 4, -2), &v);
        assert_eq!(lhs, reindexed(&s, 4, 2, &m, &n));
        // diagonal: eigenvalue = multiplicity of u
        let (m, n) = ([1, 2, 4], [2, 3, 4]);
        let w = levi_action(2, 2, &m, &n);
        assert_eq!(w.values().copied().collect::<Vec<_>>(), vec![Q::from_integer(2)]);
        assert!(gl_residual(&s, 2, 2, &m, &n).is_zero());
    }

    #[test]
    fn kimura() {
        for (b, bm, zero) in [(1, 1, true), (2, 2, true), (3, 3, true), (2, 3, false), (1, 2, false)] {
            let s = make_surface(&SurfaceConfig::split(1, bm)).unwrap();
            assert_eq!(kimura_sum(&s, b).unwrap().is_zero(), zero, "{b} {bm}");
        }
        let s = make_surface(&SurfaceConfig::split(1, 1)).unwrap();
        assert_eq!(kimura_sum(&s, 5), Err(YinError::TooLarge(5)));
    }

    #[test]
    fn split_images() {
        // the free pair sector keeps the vector; the rank-b split model kills it
        for (b, bm) in [(1, 1), (1, 2), (2, 2)] {
            let c = make_surface(&SurfaceConfig::k3(1, bm)).unwrap();
            let sp = make_surface(&SurfaceConfig::split(1, bm)).unwrap();
            let idx: Vec<i32> = (1..=b as i32 + 1).collect();
            let v = yin(&c, &idx, &idx).unwrap();
            assert!(!v.is_zero());
            let img: Vec<Op> = v.parts().map(|(_, o)| to_split_fock(&c, &sp, o).unwrap()).collect();
            assert_eq!(img.iter().all(|o| o.is_zero()), b == bm, "{b} {bm}");
        }
    }
}
