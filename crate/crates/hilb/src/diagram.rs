//! Tautological classes on S^k as decorated partitions with transcendental edges.
//!
//! Legs are numbered 1..=k. Stored terms are always canonical: every diagonal block
//! expanded to singletons (plus Tr edges in chow mode), sorted, merged.

use crate::blocks::{self, accumulate, Block, Kind, Mono};
use crate::rat::{fmt_q, parse_q, Q};
use crate::split::SplitClass;
use crate::surface::{Class, Label, SurfaceDatum};
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DiagramError {
    #[error("leg count mismatch: {0} vs {1}")]
    LegMismatch(u32, u32),
    #[error("invalid leg {0}")]
    InvalidLeg(u32),
    #[error("split datum does not match the algebraic part")]
    DatumMismatch,
    #[error("small diagonal expansion needs n >= 2 in k3-chow mode")]
    BadExpansion,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagramClass {
    pub k: u32,
    pub terms: BTreeMap<Mono, Q>,
}

const SHIFT: u32 = 1 << 16;

impl DiagramClass {
    pub fn zero(k: u32) -> Self {
        DiagramClass { k, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Build from arbitrary (possibly non-canonical) monomials on legs 1..=k.
    pub fn from_terms(s: &SurfaceDatum, k: u32, raw: impl IntoIterator<Item = (Q, Mono)>) -> Self {
        let mut acc = FxHashMap::default();
        for (x, m) in raw {
            for (y, e) in blocks::expand(s, &m) {
                accumulate(&mut acc, e, x * y);
            }
        }
        DiagramClass { k, terms: acc.into_iter().collect() }
    }

    pub fn unit(s: &SurfaceDatum, k: u32) -> Self {
        Self::pure(s, &vec![s.unit(); k as usize])
    }

    /// γ_1 ⊗ … ⊗ γ_k for basis labels.
    pub fn pure(s: &SurfaceDatum, labels: &[Label]) -> Self {
        let m: Mono = labels.iter().enumerate().map(|(i, &l)| Block::diag(l, &[i as u32 + 1])).collect();
        Self::from_terms(s, labels.len() as u32, [(Q::one(), m)])
    }

    /// Small diagonal of the listed legs decorated by a basis class; other legs carry 1.
    pub fn diag(s: &SurfaceDatum, k: u32, legs: &[u32], d: Label) -> Self {
        let mut m: Mono = vec![Block::diag(d, legs)];
        for i in 1..=k {
            if !legs.contains(&i) {
                m.push(Block::diag(s.unit(), &[i]));
            }
        }
        Self::from_terms(s, k, [(Q::one(), m)])
    }

    /// Δ^tr on legs (i, j); chow mode only (split mode expands it).
    pub fn tr(s: &SurfaceDatum, k: u32, i: u32, j: u32) -> Self {
        let mut m: Mono = vec![Block::tr(i, j)];
        for l in 1..=k {
            if l != i && l != j {
                m.push(Block::diag(s.unit(), &[l]));
            }
        }
        Self::from_terms(s, k, [(Q::one(), m)])
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, x) in &o.terms {
            let e = r.terms.entry(m.clone()).or_insert_with(Q::zero);
            *e += *x;
            if e.is_zero() {
                r.terms.remove(m);
            }
        }
        r
    }

    pub fn scale(&self, x: Q) -> Self {
        if x.is_zero() {
            return Self::zero(self.k);
        }
        DiagramClass { k: self.k, terms: self.terms.iter().map(|(m, y)| (m.clone(), *y * x)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-Q::one()))
    }

    fn check_leg(&self, i: u32) -> Result<(), DiagramError> {
        if i == 0 || i > self.k {
            Err(DiagramError::InvalidLeg(i))
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, s: &SurfaceDatum, o: &Self) -> Result<Self, DiagramError> {
        if self.k != o.k {
            return Err(DiagramError::LegMismatch(self.k, o.k));
        }
        let mut raw = vec![];
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut m = a.clone();
                m.extend(b.iter().map(|bl| Block::new(bl.kind, bl.legs.iter().map(|l| l + SHIFT).collect())));
                let mut cur = vec![(*x * *y, m)];
                for i in 1..=self.k {
                    let mut next = vec![];
                    for (c, m) in &cur {
                        let mut out = vec![];
                        blocks::contract(s, m, i, i + SHIFT, true, &mut out);
                        next.extend(out.into_iter().map(|(d, m)| (*c * d, m)));
                    }
                    cur = next;
                }
                raw.extend(cur);
            }
        }
        Ok(Self::from_terms(s, self.k, raw))
    }

    /// Multiply by Δ_ij, integrate leg j, renumber the legs above j.
    pub fn contract(&self, s: &SurfaceDatum, i: u32, j: u32) -> Result<Self, DiagramError> {
        self.check_leg(i)?;
        self.check_leg(j)?;
        if i == j {
            return Err(DiagramError::InvalidLeg(j));
        }
        let mut raw = vec![];
        for (m, x) in &self.terms {
            let mut out = vec![];
            blocks::contract(s, m, i, j, true, &mut out);
            raw.extend(out.into_iter().map(|(y, m)| (*x * y, relabel_drop(&m, &[j]))));
        }
        Ok(Self::from_terms(s, self.k - 1, raw))
    }

    /// Pull back along S ↪ S^k.
    pub fn restrict_small_diagonal(&self, s: &SurfaceDatum) -> Class {
        let mut out = s.zero();
        for (m, x) in &self.terms {
            let mut cur = vec![(*x, m.clone())];
            for j in 2..=self.k {
                let mut next = vec![];
                for (c, m) in &cur {
                    let mut o = vec![];
                    blocks::contract(s, m, 1, j, true, &mut o);
                    next.extend(o.into_iter().map(|(d, m)| (*c * d, m)));
                }
                cur = next;
            }
            for (c, m) in cur {
                for (d, m) in blocks::expand(s, &m) {
                    match m.as_slice() {
                        [b] => match b.kind {
                            Kind::Diag(l) => out[l as usize] += c * d,
                            Kind::Tr => unreachable!(),
                        },
                        _ => unreachable!("restriction leaves one leg"),
                    }
                }
            }
        }
        out
    }

    pub fn integrate(&self, s: &SurfaceDatum, legs: &[u32]) -> Result<Self, DiagramError> {
        for &l in legs {
            self.check_leg(l)?;
        }
        let mut raw = vec![];
        'terms: for (m, x) in &self.terms {
            let mut c = *x;
            let mut m = m.clone();
            for &l in legs {
                match blocks::integrate(s, &m, l) {
                    Some((y, r)) => {
                        c *= y;
                        m = r;
                    }
                    None => continue 'terms,
                }
            }
            raw.push((c, relabel_drop(&m, legs)));
        }
        Ok(Self::from_terms(s, self.k - legs.len() as u32, raw))
    }

    /// Σ_{i<j} Δ_ij ∏_{k≠i,j} c_k − (n−2) Σ_i ∏_{k≠i} c_k.
    pub fn small_diagonal_expansion(s: &SurfaceDatum, n: u32) -> Result<Self, DiagramError> {
        if n < 2 || s.mode.is_split() {
            return Err(DiagramError::BadExpansion);
        }
        let pt = s.point();
        let mut raw = vec![];
        for i in 1..=n {
            for j in i + 1..=n {
                let mut m: Mono = vec![Block::diag(s.unit(), &[i, j])];
                m.extend((1..=n).filter(|&k| k != i && k != j).map(|k| Block::diag(pt, &[k])));
                raw.push((Q::one(), m));
            }
        }
        for i in 1..=n {
            let m: Mono = (1..=n).map(|k| Block::diag(if k == i { s.unit() } else { pt }, &[k])).collect();
            raw.push((-Q::from_integer(n as i128 - 2), m));
        }
        Ok(Self::from_terms(s, n, raw))
    }

    /// Substitute Δ^tr ↦ Σ τ_a ⊗ τ^a and expand into a Künneth tensor over the split datum.
    pub fn split_of(&self, s: &SurfaceDatum, sp: &SurfaceDatum) -> Result<SplitClass, DiagramError> {
        if s.mode.is_split() || !sp.mode.is_split() || s.rho != sp.rho || s.b != sp.b || s.picard_gram() != sp.picard_gram() {
            return Err(DiagramError::DatumMismatch);
        }
        let map = |l: Label| if l == s.point() { sp.point() } else { l };
        let mut out = SplitClass::zero(self.k as usize);
        for (m, x) in &self.terms {
            let mut cur = SplitClass::pure(vec![sp.unit(); self.k as usize]).scale(*x);
            for b in m {
                let f = match b.kind {
                    Kind::Tr => SplitClass::transcendental(sp, self.k as usize, b.legs[0] as usize - 1, b.legs[1] as usize - 1),
                    Kind::Diag(d) => {
                        let mut t = vec![sp.unit(); self.k as usize];
                        t[b.legs[0] as usize - 1] = map(d);
                        SplitClass::pure(t)
                    }
                };
                cur = cur.mul(sp, &f);
            }
            out = out.add(&cur);
        }
        Ok(out)
    }

    /// Total codimension, when homogeneous.
    pub fn grade(&self, s: &SurfaceDatum) -> Option<i32> {
        let mut g = None;
        for m in self.terms.keys() {
            let h = blocks::codim(s, m);
            if g.is_some_and(|x| x != h) {
                return None;
            }
            g = Some(h);
        }
        g
    }

    /// One term per line: `coef * k | {legs}:label ... | tr:(i,j) ...`.
    pub fn to_text(&self, s: &SurfaceDatum) -> String {
        if self.terms.is_empty() {
            return format!("{} | 0", self.k);
        }
        let mut lines = vec![];
        for (m, x) in &self.terms {
            let mut diag = vec![];
            let mut tr = vec![];
            for b in m {
                let legs: Vec<String> = b.legs.iter().map(|l| l.to_string()).collect();
                match b.kind {
                    Kind::Diag(d) => diag.push(format!("{{{}}}:{}", legs.join(","), s.name(d))),
                    Kind::Tr => tr.push(format!("({})", legs.join(","))),
                }
            }
            let tr = if tr.is_empty() { "(-)".to_string() } else { tr.join(" ") };
            let coef = if x.is_one() { String::new() } else { format!("{} * ", fmt_q(x)) };
            lines.push(format!("{coef}{} | {} | tr:{tr}", self.k, diag.join(" ")));
        }
        lines.join("\n")
    }

    pub fn parse(s: &SurfaceDatum, text: &str) -> Result<Self, DiagramError> {
        let err = |m: &str| DiagramError::Parse(m.to_string());
        let mut k = None;
        let mut raw = vec![];
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (coef, body) = match line.split_once('*') {
                Some((c, b)) => (parse_q(c).ok_or_else(|| err("bad coefficient"))?, b),
                None => (Q::one(), line),
            };
            let parts: Vec<&str> = body.split('|').map(str::trim).collect();
            let kk: u32 = parts[0].parse().map_err(|_| err("bad leg count"))?;
            if k.is_some_and(|x| x != kk) {
                return Err(DiagramError::LegMismatch(k.unwrap(), kk));
            }
            k = Some(kk);
            if parts.len() == 2 && parts[1] == "0" {
                continue;
            }
            if parts.len() != 3 {
                return Err(err("expected `k | blocks | tr:...`"));
            }
            let mut m: Mono = vec![];
            for tok in parts[1].split_whitespace() {
                let (legs, lab) = tok.split_once(':').ok_or_else(|| err("block needs :label"))?;
                let legs = parse_legs(legs.trim_start_matches('{').trim_end_matches('}'))?;
                let l = s.label(lab).ok_or_else(|| err("unknown label"))?;
                m.push(Block::diag(l, &legs));
            }
            let tr = parts[2].strip_prefix("tr:").ok_or_else(|| err("expected tr:"))?;
            if !matches!(tr, "(-)" | "(—)") {
                for tok in tr.split_whitespace() {
                    let legs = parse_legs(tok.trim_start_matches('(').trim_end_matches(')'))?;
                    if legs.len() != 2 {
                        return Err(err("tr edge needs two legs"));
                    }
                    m.push(Block::tr(legs[0], legs[1]));
                }
            }
            let mut seen: Vec<u32> = m.iter().flat_map(|b| b.legs.iter().copied()).collect();
            seen.sort_unstable();
            if seen != (1..=kk).collect::<Vec<_>>() {
                return Err(err("every leg must appear in exactly one block"));
            }
            raw.push((coef, m));
        }
        let k = k.ok_or_else(|| err("empty input"))?;
        Ok(Self::from_terms(s, k, raw))
    }
}

fn parse_legs(t: &str) -> Result<Vec<u32>, DiagramError> {
    t.split(',').map(|x| x.trim().parse().map_err(|_| DiagramError::Parse(format!("bad leg {x:?}")))).collect()
}

/// Drop the given legs (already integrated) and renumber the rest consecutively from 1.
fn relabel_drop(m: &Mono, dropped: &[u32]) -> Mono {
    let f = |l: u32| l - dropped.iter().filter(|&&d| d < l).count() as u32;
    let mut r: Mono = m.iter().map(|b| Block::new(b.kind, b.legs.iter().map(|&l| f(l)).collect())).collect();
    blocks::sort_mono(&mut r);
    r
}

/// The diagonal of S² in the datum's own representation.
pub fn diagonal(s: &SurfaceDatum) -> DiagramClass {
    DiagramClass::diag(s, 2, &[1, 2], s.unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qr};
    use crate::surface::{make_surface, SurfaceConfig};

    fn k3() -> SurfaceDatum {
        make_surface(&SurfaceConfig::k3(1, 21)).unwrap()
    }

    #[test]
    fn bv4_and_bv7() {
        let s = k3();
        let (l, c, one) = (1, s.point(), s.unit());
        let d = diagonal(&s);
        let lhs = d.mul(&s, &DiagramClass::pure(&s, &[l, one])).unwrap();
        let rhs = DiagramClass::pure(&s, &[l, c]).add(&DiagramClass::pure(&s, &[c, l]));
        assert_eq!(lhs, rhs);
        let t = DiagramClass::tr(&s, 2, 1, 2);
        assert!(t.mul(&s, &DiagramClass::pure(&s, &[one, l])).unwrap().is_zero());
        assert!(t.mul(&s, &DiagramClass::pure(&s, &[c, one])).unwrap().is_zero());
    }

    #[test]
    fn diagonal_squared_and_restrictions() {
        let s = k3();
        let d = diagonal(&s);
        assert_eq!(d.mul(&s, &d).unwrap(), DiagramClass::pure(&s, &[s.point(), s.point()]).scale(q(24)));
        let mut e = s.zero();
        e[s.point() as usize] = q(24);
        assert_eq!(d.restrict_small_diagonal(&s), e);
        e[s.point() as usize] = q(21);
        assert_eq!(DiagramClass::tr(&s, 2, 1, 2).restrict_small_diagonal(&s), e);
        assert!(DiagramClass::tr(&s, 2, 1, 2).integrate(&s, &[2]).unwrap().is_zero());
    }

    #[test]
    fn diagonal_text() {
        let s = k3();
        let d = diagonal(&s);
        assert_eq!(d.terms.len(), 4);
        let half = d.terms.iter().find(|(m, _)| m.iter().all(|b| b.kind == Kind::Diag(1))).unwrap();
        assert_eq!(*half.1, qr(1, 2));
        let t = d.to_text(&s);
        assert_eq!(DiagramClass::parse(&s, &t).unwrap(), d);
        assert_eq!(DiagramClass::parse(&s, "2 | {1,2}:1 | tr:(-)").unwrap(), d);
        assert_eq!(DiagramClass::parse(&s, "3 | {1,2}:c {3}:l1 | tr:(-)").unwrap().grade(&s), Some(5));
        assert!(DiagramClass::parse(&s, "2 | {1}:c | tr:(-)").is_err());
    }

    #[test]
    fn expansion_small_cases() {
        let s = k3();
        assert_eq!(DiagramClass::small_diagonal_expansion(&s, 2).unwrap(), diagonal(&s));
        assert!(DiagramClass::small_diagonal_expansion(&s, 1).is_err());
    }
}
