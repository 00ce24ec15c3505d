//! The lowest-weight Verma module of Vir: L_n (n > 0) raise weight by n, L_{−n} lower,
//! [L_m, L_n] = (m − n) L_{m+n} − c (m³ − m)/12 δ_{m+n}, L_0 v = h v.
//!
//! Contravariant form: L_n† = L_{−n}, ⟨v, v⟩ = 1. In the usual highest-weight language
//! L'_k = −L_{−k} has central charge c and weight −h.

use crate::rat::{det_big, to_big, Q};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, HashMap};

/// L_{n_1} ⋯ L_{n_k} v with n_1 ≥ … ≥ n_k ≥ 1.
pub type Word = Vec<u32>;
pub type VirVector = BTreeMap<Word, Q>;

pub struct Verma {
    pub c: Q,
    pub h: Q,
    memo: HashMap<(i32, Word), VirVector>,
}

fn add_into(acc: &mut VirVector, v: &VirVector, x: Q) {
    for (w, c) in v {
        let e = acc.entry(w.clone()).or_insert_with(Q::zero);
        *e += *c * x;
        if e.is_zero() {
            acc.remove(w);
        }
    }
}

fn unit(w: Word) -> VirVector {
    BTreeMap::from([(w, Q::from_integer(1))])
}

impl Verma {
    pub fn new(c: Q, h: Q) -> Self {
        Verma { c, h, memo: HashMap::new() }
    }

    /// L_k applied to a basis word, straightened back to ordered words.
    pub fn apply_word(&mut self, k: i32, w: &Word) -> VirVector {
        if let Some(r) = self.memo.get(&(k, w.clone())) {
            return r.clone();
        }
        let r = if w.is_empty() {
            match k.signum() {
                1 => unit(vec![k as u32]),
                0 if !self.h.is_zero() => BTreeMap::from([(vec![], self.h)]),
                _ => VirVector::new(),
            }
        } else if k > 0 && k as u32 >= w[0] {
            let mut w2 = vec![k as u32];
            w2.extend_from_slice(w);
            unit(w2)
        } else {
            let n1 = w[0] as i32;
            let rest: Word = w[1..].to_vec();
            let mut acc = VirVector::new();
            // L_{n1} (L_k rest)
            let inner = self.apply_word(k, &rest);
            let moved = self.apply(n1, &inner);
            add_into(&mut acc, &moved, Q::from_integer(1));
            // [L_k, L_{n1}] rest
            if k != n1 {
                let t = self.apply_word(k + n1, &rest);
                add_into(&mut acc, &t, Q::from_integer((k - n1) as i128));
            }
            if k + n1 == 0 {
                let z = -self.c * Q::from_integer((k as i128).pow(3) - k as i128) / Q::from_integer(12);
                add_into(&mut acc, &unit(rest), z);
            }
            acc
        };
        self.memo.insert((k, w.clone()), r.clone());
        r
    }

    pub fn apply(&mut self, k: i32, v: &VirVector) -> VirVector {
        let mut acc = VirVector::new();
        for (w, c) in v {
            let r = self.apply_word(k, w);
            add_into(&mut acc, &r, *c);
        }
        acc
    }

    /// ⟨L_{a_1}⋯L_{a_r} v, y⟩ = ⟨v, L_{−a_r} ⋯ L_{−a_1} y⟩.
    pub fn form(&mut self, x: &Word, y: &Word) -> Q {
        let mut v = unit(y.clone());
        for &a in x {
            v = self.apply(-(a as i32), &v);
        }
        v.get(&Word::new()).copied().unwrap_or_else(Q::zero)
    }
}

/// Partitions of `level` into parts ≥ min_part, weakly decreasing.
pub fn words(level: u32, min_part: u32) -> Vec<Word> {
    fn go(left: u32, max: u32, min: u32, cur: &mut Word, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (min..=max.min(left)).rev() {
            cur.push(p);
            go(left - p, p, min, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(level, level, min_part, &mut vec![], &mut out);
    out
}

pub fn shapovalov_gram(c: Q, level: u32, quotient: bool) -> Vec<Vec<Q>> {
    let mut m = Verma::new(c, Q::zero());
    let ws = words(level, if quotient { 2 } else { 1 });
    ws.iter().map(|x| ws.iter().map(|y| m.form(x, y)).collect()).collect()
}

pub fn gram_det(g: &[Vec<Q>]) -> BigRational {
    if g.is_empty() {
        return BigRational::from_integer(BigInt::from(1));
    }
    det_big(&g.iter().map(|r| r.iter().map(to_big).collect()).collect::<Vec<_>>())
}

/// Levels whose quotient Gram determinant vanishes at c = b, h = 0.
pub fn no_singular_check(b: i64, max_level: u32) -> Vec<(u32, BigRational)> {
    (2..=max_level)
        .map(|l| (l, gram_det(&shapovalov_gram(Q::from_integer(b as i128), l, true))))
        .filter(|(_, d)| d.is_zero())
        .collect()
}

pub fn gram_csv(g: &[Vec<Q>]) -> String {
    g.iter().map(|r| r.iter().map(crate::rat::fmt_q).collect::<Vec<_>>().join(",") + "\n").collect()
}

pub fn det_sign(d: &BigRational) -> i32 {
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qr};

    #[test]
    fn small_levels() {
        assert_eq!(shapovalov_gram(q(7), 1, false), vec![vec![q(0)]]);
        assert_eq!(shapovalov_gram(q(5), 2, true), vec![vec![qr(5, 2)]]);
        // full level 2 at h = 0: ⟨L_1²v, L_1²v⟩ = 0 as L_1 v is null
        let g = shapovalov_gram(q(5), 2, false);
        assert_eq!(g[0][0], qr(5, 2));
        assert_eq!(g[1][1], q(0));
        assert!(gram_det(&g).is_zero());
        assert_eq!(words(6, 2).len(), 4);
    }

    #[test]
    fn nonzero_h_oracle() {
        // with h' = −h the usual level-2 entries 4h' + c/2, 6h', 4h'(2h' + 1), up to the sign of L_2
        let mut m = Verma::new(q(3), q(2));
        let g = [[m.form(&vec![2], &vec![2]), m.form(&vec![2], &vec![1, 1])], [m.form(&vec![1, 1], &vec![2]), m.form(&vec![1, 1], &vec![1, 1])]];
        assert_eq!(g[0][0], q(-8) + qr(3, 2));
        assert_eq!(g[0][1], q(12));
        assert_eq!(g[1][0], q(12));
        assert_eq!(g[1][1], q(24));
    }

    #[test]
    fn irreducible_shadow() {
        for b in [2, 21] {
            assert!(no_singular_check(b, 6).is_empty(), "{b}");
        }
    }
}
