//! The operators D_{m,n} on the Fock model, with radical coefficients.
//!
//! A radical operator is Σ_r √r · X_r with X_r rational; vectors are radical operators
//! without annihilators.

use super::scalar::{split_square, Scalar};
use super::sp::sp_rel_rhs;
use crate::blocks::Block;
use crate::op::{self, Op, Slot};
use crate::rat::{q, qr, sign, Q};
use crate::surface::SurfaceDatum;
use crate::wick::{self, canonicalize, commutator, word, Window};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RadOp {
    parts: BTreeMap<u64, Op>,
}

impl RadOp {
    pub fn zero() -> Self {
        RadOp::default()
    }
    pub fn rational(o: Op) -> Self {
        let mut r = RadOp::zero();
        r.push(1, o);
        r
    }
    fn push(&mut self, rad: u64, o: Op) {
        if o.is_zero() {
            return;
        }
        let e = self.parts.entry(rad).or_insert_with(Op::zero);
        *e = e.add(&o);
        if e.is_zero() {
            self.parts.remove(&rad);
        }
    }
    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|o| o.is_zero())
    }
    pub fn parts(&self) -> impl Iterator<Item = (&u64, &Op)> {
        self.parts.iter()
    }
    pub fn add(&self, o: &RadOp) -> RadOp {
        let mut r = self.clone();
        for (k, x) in &o.parts {
            r.push(*k, x.clone());
        }
        r
    }
    pub fn sub(&self, o: &RadOp) -> RadOp {
        self.add(&o.times(&Scalar::rational(-Q::from_integer(1))))
    }
    pub fn times(&self, c: &Scalar) -> RadOp {
        let mut r = RadOp::zero();
        for (rad, x) in &self.parts {
            let p = &Scalar::sqrt(*rad) * c;
            for (rad2, y) in scalar_parts(&p) {
                r.push(rad2, x.scale(y));
            }
        }
        r
    }
    /// Combine part-by-part through a bilinear map on rational operators.
    pub fn bilinear(&self, o: &RadOp, f: impl Fn(&Op, &Op) -> Op) -> RadOp {
        let mut r = RadOp::zero();
        for (a, x) in &self.parts {
            for (b, y) in &o.parts {
                let (sq, f2) = split_square(a * b);
                r.push(f2, f(x, y).scale(q(sq as i128)));
            }
        }
        r
    }
    pub fn expand(&self, s: &SurfaceDatum) -> RadOp {
        let mut r = RadOp::zero();
        for (k, x) in &self.parts {
            r.push(*k, op::expand(s, x));
        }
        r
    }
    pub fn fmt(&self, s: &SurfaceDatum) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let v: Vec<String> = self
            .parts
            .iter()
            .map(|(r, o)| if *r == 1 { op::fmt_op(s, o) } else { format!("sqrt({r}) * ({})", op::fmt_op(s, o)) })
            .collect();
        v.join(" + ")
    }
}

fn scalar_parts(x: &Scalar) -> Vec<(u64, Q)> {
    x.terms().map(|(r, c)| (*r, *c)).collect()
}

/// q_m q_n(Δ^tr) as an honest product: reordered with its commutator term.
pub fn qq_tr(s: &SurfaceDatum, m: i32, n: i32) -> Op {
    op::expand(s, &canonicalize(s, Q::from_integer(1), word(&[m, n], vec![Block::tr(0, 1)])))
}

/// D_{m,n} = sign(n)/√|mn| · q_m q_n(Δ^tr) + δ_{m+n} b/2 for m ≥ n; D_{n,m} = sign(m)sign(n) D_{m,n}.
pub fn d_op(s: &SurfaceDatum, m: i32, n: i32) -> RadOp {
    assert!(m != 0 && n != 0);
    if m < n {
        return d_op(s, n, m).times(&Scalar::rational(q((sign(m) * sign(n)) as i128)));
    }
    let mn = (m as i64 * n as i64).unsigned_abs();
    let x = Op::single(Q::from_integer(1), vec![Block::tr(Slot::mode(m), Slot::mode(n))]);
    let mut r = RadOp::rational(op::expand(s, &x)).times(&Scalar::term(qr(sign(n) as i128, mn as i128), mn));
    if m + n == 0 {
        r.push(1, Op::identity().scale(qr(s.b as i128, 2)));
    }
    r
}

pub fn rad_commutator(s: &SurfaceDatum, a: &RadOp, b: &RadOp) -> RadOp {
    a.bilinear(b, |x, y| commutator(s, x, y, Window::ALL)).expand(s)
}

pub fn rad_apply(s: &SurfaceDatum, a: &RadOp, v: &RadOp) -> RadOp {
    a.bilinear(v, |x, y| wick::apply(s, x, y)).expand(s)
}

/// [D_{m,n}, D_{m',n'}] minus the image of the sp relation.
pub fn d_relation(s: &SurfaceDatum, m: i32, n: i32, m2: i32, n2: i32) -> RadOp {
    let lhs = rad_commutator(s, &d_op(s, m, n), &d_op(s, m2, n2));
    let mut rhs = RadOp::zero();
    for (c, (a, b)) in sp_rel_rhs(m, n, m2, n2) {
        rhs = rhs.add(&d_op(s, a, b).times(&Scalar::rational(q(c as i128))));
    }
    lhs.sub(&rhs)
}

/// States q_{m_1}q_{n_1}(Δ^tr)⋯ v of the pair sector with total weight ≤ w (or every
/// basis monomial in split mode).
pub fn sector_basis(s: &SurfaceDatum, w: u32) -> Vec<Op> {
    (0..=w)
        .flat_map(|k| crate::fock::basis(s, k))
        .filter(|k| s.mode.is_split() || k.iter().all(|b| b.kind == crate::blocks::Kind::Tr))
        .map(|k| Op::single(Q::from_integer(1), k))
        .collect()
}

/// Evaluate a relation residual on the sector basis up to weight w.
pub fn evaluate(s: &SurfaceDatum, res: &RadOp, states: &[Op]) -> Option<RadOp> {
    states
        .iter()
        .map(|v| rad_apply(s, res, &RadOp::rational(v.clone())))
        .find(|r| !r.is_zero())
}

/// D_{m,n} v − δ_{m+n} b/2 v for m ≥ n, n < 0.
pub fn highest(s: &SurfaceDatum, m: i32, n: i32) -> RadOp {
    let v = RadOp::rational(Op::identity());
    let mut r = rad_apply(s, &d_op(s, m, n), &v);
    if m + n == 0 {
        r = r.sub(&v.times(&Scalar::rational(qr(s.b as i128, 2))));
    }
    r
}

/// q_{−n} q_n(Δ^tr) − q_n q_{−n}(Δ^tr) + n b.
pub fn reorder_identity(s: &SurfaceDatum, n: i32) -> Op {
    qq_tr(s, -n, n).sub(&qq_tr(s, n, -n)).add(&Op::identity().scale(q(n as i128 * s.b as i128)))
}

/// The commutator pattern of q_m q_n with q_{m'} q_{n'}, taken on Δ^tr.
pub fn oioi_tr(s: &SurfaceDatum, m: i32, n: i32, m2: i32, n2: i32) -> Op {
    let qq = |a, b| qq_tr(s, a, b);
    let lhs = op::expand(s, &commutator(s, &qq(m, n), &qq(m2, n2), Window::ALL));
    let mut rhs = Op::zero();
    let mut add = |c: i32, cond: bool, a: i32, b: i32| {
        if cond {
            rhs = rhs.add(&qq(a, b).scale(q(c as i128)));
        }
    };
    add(m, m + m2 == 0, n, n2);
    add(m, m + n2 == 0, m2, n);
    add(n, n + m2 == 0, m, n2);
    add(n, n + n2 == 0, m2, m);
    lhs.sub(&rhs)
}
