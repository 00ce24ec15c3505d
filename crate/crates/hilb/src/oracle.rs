//! Randomized agreement between the diagram calculus and Künneth tensors,
//! plus the diagonal relations checked as rewrites.

use crate::blocks::{Block, Mono};
use crate::diagram::{diagonal, DiagramClass};
use crate::rat::{q, Q};
use crate::split::SplitClass;
use crate::surface::{make_surface, Class, Label, SurfaceConfig, SurfaceDatum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Pair {
    pub chow: SurfaceDatum,
    pub split: SurfaceDatum,
}

impl Pair {
    pub fn new(rho: usize, b: usize) -> Self {
        let g: Vec<Vec<i64>> = (0..rho).map(|i| (0..rho).map(|j| if i == j { 2 } else if i + 1 == j || j + 1 == i { 1 } else { 0 }).collect()).collect();
        let rows: Vec<&[i64]> = g.iter().map(|r| r.as_slice()).collect();
        Pair {
            chow: make_surface(&SurfaceConfig::k3(rho, b).with_picard(&rows)).unwrap(),
            split: make_surface(&SurfaceConfig::split(rho, b).with_picard(&rows)).unwrap(),
        }
    }
}

pub fn random_diagram(s: &SurfaceDatum, rng: &mut impl Rng, k: u32) -> DiagramClass {
    let nterms = rng.gen_range(1..=3);
    let labels: Vec<Label> = s.labels().collect();
    let mut raw = vec![];
    for _ in 0..nterms {
        let mut legs: Vec<u32> = (1..=k).collect();
        // random set partition by shuffling and cutting
        for i in (1..legs.len()).rev() {
            let j = rng.gen_range(0..=i);
            legs.swap(i, j);
        }
        let mut m: Mono = vec![];
        let mut i = 0;
        while i < legs.len() {
            let size = rng.gen_range(1..=(legs.len() - i).min(3));
            let part = &legs[i..i + size];
            if size == 2 && rng.gen_bool(0.4) {
                m.push(Block::tr(part[0], part[1]));
            } else {
                m.push(Block::diag(labels[rng.gen_range(0..labels.len())], part));
            }
            i += size;
        }
        let coef = Q::new(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        raw.push((coef, m));
    }
    DiagramClass::from_terms(s, k, raw)
}

fn class_to_split(p: &Pair, c: &Class) -> SplitClass {
    let mut r = SplitClass::zero(1);
    for (l, x) in p.chow.terms(c) {
        let l = if l == p.chow.point() { p.split.point() } else { l };
        r.add_term(vec![l], x);
    }
    r
}

#[derive(Debug, Default, Clone)]
pub struct OracleReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// `n` random operations (product, contraction, restriction, integration) compared exactly.
pub fn run(p: &Pair, n: usize, seed: u64) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s, sp) = (&p.chow, &p.split);
    let mut rep = OracleReport::default();
    for it in 0..n {
        let k = rng.gen_range(1..=4u32);
        let a = random_diagram(s, &mut rng, k);
        let sa = a.split_of(s, sp).unwrap();
        let op = rng.gen_range(0..4);
        let (name, lhs, rhs) = match op {
            0 => {
                let b = random_diagram(s, &mut rng, k);
                let sb = b.split_of(s, sp).unwrap();
                ("mul", a.mul(s, &b).unwrap().split_of(s, sp).unwrap(), sa.mul(sp, &sb))
            }
            1 if k >= 2 => {
                let i = rng.gen_range(1..=k);
                let mut j = rng.gen_range(1..=k);
                while j == i {
                    j = rng.gen_range(1..=k);
                }
                ("contract", a.contract(s, i, j).unwrap().split_of(s, sp).unwrap(), sa.contract(sp, i as usize - 1, j as usize - 1))
            }
            2 => ("restrict", class_to_split(p, &a.restrict_small_diagonal(s)), sa.restrict_small(sp)),
            _ => {
                let legs: Vec<u32> = (1..=k).filter(|_| rng.gen_bool(0.5)).collect();
                let l0: Vec<usize> = legs.iter().map(|&l| l as usize - 1).collect();
                ("integrate", a.integrate(s, &legs).unwrap().split_of(s, sp).unwrap(), sa.integrate(sp, &l0))
            }
        };
        rep.checked += 1;
        if lhs != rhs {
            rep.failures.push(format!("#{it} {name} on {}", a.to_text(s).replace('\n', " ; ")));
        }
    }
    rep
}

/// The named diagonal relations as rewrites, each returning pass/fail.
pub fn relations(p: &Pair) -> Vec<(&'static str, bool)> {
    let s = &p.chow;
    let (one, c) = (s.unit(), s.point());
    let d = diagonal(s);
    let mut out = vec![];
    let e = s.e_class();
    out.push(("bv1", e == { let mut v = s.zero(); v[c as usize] = q(24); v }));
    let mut bv2 = true;
    for i in 0..s.rho {
        for j in 0..s.rho {
            let (li, lj) = (s.basis_class(s.picard(i)), s.basis_class(s.picard(j)));
            let mut v = s.zero();
            v[c as usize] = s.pair(&li, &lj);
            bv2 &= s.mul(&li, &lj) == v;
        }
    }
    out.push(("bv2", bv2));
    let cc = DiagramClass::pure(s, &[c, c]);
    out.push(("bv3", d.mul(s, &DiagramClass::pure(s, &[c, one])).unwrap() == cc && d.mul(s, &DiagramClass::pure(s, &[one, c])).unwrap() == cc));
    let mut bv4 = true;
    for i in 0..s.rho {
        let l = s.picard(i);
        let rhs = DiagramClass::pure(s, &[l, c]).add(&DiagramClass::pure(s, &[c, l]));
        bv4 &= d.mul(s, &DiagramClass::pure(s, &[l, one])).unwrap() == rhs;
    }
    out.push(("bv4", bv4));
    // bv5: Δ_123 = Δ_12 c_3 + Δ_13 c_2 + Δ_23 c_1 − c_1c_2 − c_1c_3 − c_2c_3
    let d123 = DiagramClass::diag(s, 3, &[1, 2, 3], one);
    let mut bv5 = DiagramClass::zero(3);
    for (i, j, k) in [(1, 2, 3), (1, 3, 2), (2, 3, 1)] {
        let mut ck = vec![one; 3];
        ck[k as usize - 1] = c;
        bv5 = bv5.add(&DiagramClass::diag(s, 3, &[i, j], one).mul(s, &DiagramClass::pure(s, &ck)).unwrap());
        let mut cij = vec![c; 3];
        cij[k as usize - 1] = one;
        bv5 = bv5.sub(&DiagramClass::pure(s, &cij));
    }
    out.push(("bv5", bv5 == d123 && DiagramClass::small_diagonal_expansion(s, 3).unwrap() == bv5));
    // bv6 against the Künneth small diagonal, n = 2..5
    let bv6 = (2..=5u32).all(|n| {
        let lhs = DiagramClass::small_diagonal_expansion(s, n).unwrap().split_of(s, &p.split).unwrap();
        lhs == SplitClass::small_diagonal(&p.split, n as usize)
    });
    out.push(("bv6", bv6));
    let t = DiagramClass::tr(s, 2, 1, 2);
    let mut bv7 = t.mul(s, &DiagramClass::pure(s, &[one, c])).unwrap().is_zero();
    for i in 0..s.rho {
        bv7 &= t.mul(s, &DiagramClass::pure(s, &[s.picard(i), one])).unwrap().is_zero();
    }
    out.push(("bv7", bv7));
    // b = <Δ^tr, Δ> and Δ^tr ∘ Δ^tr = Δ^tr
    let b_ok = t.mul(s, &d).unwrap().integrate(s, &[1, 2]).unwrap() == DiagramClass::zero(0).add(&scalar(s, q(s.b as i128)));
    out.push(("b", b_ok));
    let tt = DiagramClass::tr(s, 4, 1, 2).mul(s, &DiagramClass::tr(s, 4, 3, 4)).unwrap();
    let comp = tt.contract(s, 2, 3).unwrap().integrate(s, &[2]).unwrap();
    out.push(("tr-idempotent", comp == t));
    out
}

fn scalar(s: &SurfaceDatum, x: Q) -> DiagramClass {
    DiagramClass::from_terms(s, 0, [(x, vec![])])
}
