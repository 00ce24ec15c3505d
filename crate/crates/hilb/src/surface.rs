//! The coefficient ring of the surface: basis, grading, pairing, products.
//!
//! Basis order is fixed: `1`, `l1..lρ`, then (split only) `tau1..taub`, then `c`.
//! Every product of two basis elements is a scalar times a basis element, which is
//! what lets the block calculus carry a single label per decoration.

use crate::rat::{fmt_q, invert, parse_q, q, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "k3-chow")]
    K3Chow,
    #[serde(rename = "split")]
    Split,
    #[serde(rename = "general-split")]
    GeneralSplit,
}

impl Mode {
    pub fn is_split(self) -> bool {
        !matches!(self, Mode::K3Chow)
    }
    pub fn name(self) -> &'static str {
        match self {
            Mode::K3Chow => "k3-chow",
            Mode::Split => "split",
            Mode::GeneralSplit => "general-split",
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DatumError {
    #[error("singular {0} Gram matrix")]
    SingularGram(&'static str),
    #[error("{0} Gram matrix is not symmetric")]
    Asymmetric(&'static str),
    #[error("canonical class must vanish in k3-chow mode")]
    CanonicalNonzero,
    #[error("negative grade for basis symbol {0}")]
    NegativeGrade(String),
    #[error("invalid surface configuration: {0}")]
    Invalid(String),
}

pub type Label = u16;

/// A class on S as dense coefficients over the datum basis.
pub type Class = Vec<Q>;

#[derive(Clone, Debug)]
pub struct SurfaceDatum {
    pub mode: Mode,
    pub rho: usize,
    pub b: usize,
    names: Vec<String>,
    grades: Vec<u8>,
    gram: Vec<Vec<Q>>,
    gram_inv: Vec<Vec<Q>>,
    table: Vec<Vec<Option<(Q, Label)>>>,
    picard_gram: Vec<Vec<Q>>,
    trans_gram: Vec<Vec<Q>>,
    t: Vec<Q>,
    e_coeff: Q,
}

// Numbers in config files may be integers or "p/q" strings.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn get(&self) -> Result<Q, DatumError> {
        match self {
            Num::Int(i) => Ok(q(*i as i128)),
            Num::Str(s) => parse_q(s).ok_or_else(|| DatumError::Invalid(format!("bad rational {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub mode: Mode,
    pub picard_rank: usize,
    #[serde(default)]
    pub picard_gram: Option<Vec<Vec<Num>>>,
    pub b: usize,
    #[serde(default)]
    pub transcendental_gram: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    pub t_coeffs: Option<Vec<Num>>,
}

impl SurfaceConfig {
    pub fn parse(text: &str) -> Result<Self, DatumError> {
        toml::from_str(text).map_err(|e| DatumError::Invalid(e.message().to_string()))
    }

    pub fn k3(rho: usize, b: usize) -> Self {
        SurfaceConfig { mode: Mode::K3Chow, picard_rank: rho, picard_gram: None, b, transcendental_gram: None, t_coeffs: None }
    }

    pub fn split(rho: usize, b: usize) -> Self {
        SurfaceConfig { mode: Mode::Split, ..Self::k3(rho, b) }
    }

    pub fn with_picard(mut self, g: &[&[i64]]) -> Self {
        self.picard_gram = Some(g.iter().map(|r| r.iter().map(|&x| Num::Int(x)).collect()).collect());
        self
    }

    pub fn with_t(mut self, t: &[i64]) -> Self {
        self.t_coeffs = Some(t.iter().map(|&x| Num::Int(x)).collect());
        self
    }
}

fn matrix(m: &Option<Vec<Vec<Num>>>, n: usize, what: &'static str, default_diag: i128) -> Result<Vec<Vec<Q>>, DatumError> {
    let Some(rows) = m else {
        return Ok((0..n).map(|i| (0..n).map(|j| if i == j { q(default_diag) } else { Q::zero() }).collect()).collect());
    };
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(DatumError::Invalid(format!("{what} Gram matrix must be {n}x{n}")));
    }
    let out: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(Num::get).collect::<Result<_, _>>()).collect::<Result<_, _>>()?;
    for i in 0..n {
        for j in 0..n {
            if out[i][j] != out[j][i] {
                return Err(DatumError::Asymmetric(what));
            }
        }
    }
    Ok(out)
}

pub fn make_surface(cfg: &SurfaceConfig) -> Result<SurfaceDatum, DatumError> {
    if cfg.b == 0 {
        return Err(DatumError::Invalid("b must be at least 1".into()));
    }
    let rho = cfg.picard_rank;
    // The honest rank-one K3 lattice has <l,l> = 2; other ranks default to 2·I.
    let pg = matrix(&cfg.picard_gram, rho, "Picard", 2)?;
    let split = cfg.mode.is_split();
    let tg = if split {
        matrix(&cfg.transcendental_gram, cfg.b, "transcendental", 1)?
    } else {
        if cfg.transcendental_gram.is_some() {
            return Err(DatumError::Invalid("transcendental_gram only applies to split modes".into()));
        }
        vec![]
    };
    let t: Vec<Q> = match &cfg.t_coeffs {
        None => vec![Q::zero(); rho],
        Some(v) if v.len() == rho => v.iter().map(Num::get).collect::<Result<_, _>>()?,
        Some(_) => return Err(DatumError::Invalid("t_coeffs must have picard_rank entries".into())),
    };
    if cfg.mode == Mode::K3Chow && t.iter().any(|x| !x.is_zero()) {
        return Err(DatumError::CanonicalNonzero);
    }
    let mut basis: Vec<(String, i32)> = vec![("1".into(), 0)];
    basis.extend((1..=rho).map(|i| (format!("l{i}"), 1)));
    if split {
        basis.extend((1..=cfg.b).map(|a| (format!("tau{a}"), 1)));
    }
    basis.push(("c".into(), 2));
    SurfaceDatum::from_parts(cfg.mode, &basis, &pg, &tg, cfg.b, t)
}

impl SurfaceDatum {
    /// Low-level constructor; `basis` must be `1`, grade-1 symbols, `c` in that order.
    pub fn from_parts(
        mode: Mode,
        basis: &[(String, i32)],
        picard_gram: &[Vec<Q>],
        trans_gram: &[Vec<Q>],
        b: usize,
        t: Vec<Q>,
    ) -> Result<Self, DatumError> {
        for (name, g) in basis {
            if *g < 0 {
                return Err(DatumError::NegativeGrade(name.clone()));
            }
            if *g > 2 {
                return Err(DatumError::Invalid(format!("grade {g} of {name} exceeds 2")));
            }
        }
        let rho = picard_gram.len();
        let split = mode.is_split();
        let dim = 2 + rho + if split { b } else { 0 };
        if basis.len() != dim || basis[0].1 != 0 || basis[dim - 1].1 != 2 || basis[1..dim - 1].iter().any(|x| x.1 != 1) {
            return Err(DatumError::Invalid("basis must be 1, grade-one classes, c".into()));
        }
        if invert(picard_gram).is_none() {
            return Err(DatumError::SingularGram("Picard"));
        }
        if split && invert(trans_gram).is_none() {
            return Err(DatumError::SingularGram("transcendental"));
        }
        let mut gram = vec![vec![Q::zero(); dim]; dim];
        gram[0][dim - 1] = Q::one();
        gram[dim - 1][0] = Q::one();
        for i in 0..rho {
            for j in 0..rho {
                gram[1 + i][1 + j] = picard_gram[i][j];
            }
        }
        if split {
            for i in 0..b {
                for j in 0..b {
                    gram[1 + rho + i][1 + rho + j] = trans_gram[i][j];
                }
            }
        }
        let gram_inv = invert(&gram).ok_or(DatumError::SingularGram("intersection"))?;
        let grades: Vec<u8> = basis.iter().map(|x| x.1 as u8).collect();
        let point = (dim - 1) as Label;
        let mut table = vec![vec![None; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                table[i][j] = match (grades[i], grades[j]) {
                    (0, _) => Some((Q::one(), j as Label)),
                    (_, 0) => Some((Q::one(), i as Label)),
                    (1, 1) if !gram[i][j].is_zero() => Some((gram[i][j], point)),
                    _ => None,
                };
            }
        }
        let euler = q((2 + rho + b) as i128);
        let e_coeff = if split { euler } else { q(24) };
        Ok(SurfaceDatum {
            mode,
            rho,
            b,
            names: basis.iter().map(|x| x.0.clone()).collect(),
            grades,
            gram,
            gram_inv,
            table,
            picard_gram: picard_gram.to_vec(),
            trans_gram: trans_gram.to_vec(),
            t,
            e_coeff,
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }
    pub fn unit(&self) -> Label {
        0
    }
    pub fn point(&self) -> Label {
        (self.dim() - 1) as Label
    }
    pub fn picard(&self, i: usize) -> Label {
        (1 + i) as Label
    }
    pub fn tau(&self, a: usize) -> Label {
        (1 + self.rho + a) as Label
    }
    pub fn is_tau(&self, l: Label) -> bool {
        self.mode.is_split() && (l as usize) > self.rho && (l as usize) <= self.rho + self.b
    }
    pub fn name(&self, l: Label) -> &str {
        &self.names[l as usize]
    }
    pub fn grade(&self, l: Label) -> u8 {
        self.grades[l as usize]
    }
    pub fn label(&self, name: &str) -> Option<Label> {
        let name = if name == "l" && self.rho >= 1 { "l1" } else { name };
        self.names.iter().position(|n| n == name).map(|i| i as Label)
    }
    /// Labels of the ring the operators may carry: everything in split mode, R(S) in chow mode.
    pub fn labels(&self) -> impl Iterator<Item = Label> {
        0..self.dim() as Label
    }
    pub fn algebraic_labels(&self) -> Vec<Label> {
        self.labels().filter(|&l| !self.is_tau(l)).collect()
    }

    /// Product of basis elements as (scalar, label), None when zero.
    #[inline]
    pub fn lmul(&self, a: Label, b: Label) -> Option<(Q, Label)> {
        self.table[a as usize][b as usize]
    }
    #[inline]
    pub fn lpair(&self, a: Label, b: Label) -> Q {
        self.gram[a as usize][b as usize]
    }
    #[inline]
    pub fn lint(&self, a: Label) -> Q {
        if a == self.point() {
            Q::one()
        } else {
            Q::zero()
        }
    }
    pub fn gram_inv(&self, a: Label, b: Label) -> Q {
        self.gram_inv[a as usize][b as usize]
    }
    pub fn picard_gram(&self) -> &[Vec<Q>] {
        &self.picard_gram
    }
    pub fn trans_gram(&self) -> &[Vec<Q>] {
        &self.trans_gram
    }

    /// Coefficient of c in the Euler class used by the e-terms.
    pub fn e_coeff(&self) -> Q {
        self.e_coeff
    }
    /// Self-intersection of the diagonal, as a multiple of c: one per basis element
    /// (counting the transcendental rank in chow mode).
    pub fn euler_diag(&self) -> Q {
        q((2 + self.rho + self.b) as i128)
    }
    pub fn t_coeffs(&self) -> &[Q] {
        &self.t
    }
    pub fn t_vanishes(&self) -> bool {
        self.t.iter().all(Q::is_zero)
    }
    /// Chow data violating ρ + b = 22, where e = 24c disagrees with the diagonal's self-intersection.
    pub fn synthetic(&self) -> bool {
        self.mode == Mode::K3Chow && self.rho + self.b != 22
    }

    pub fn zero(&self) -> Class {
        vec![Q::zero(); self.dim()]
    }
    pub fn basis_class(&self, l: Label) -> Class {
        let mut v = self.zero();
        v[l as usize] = Q::one();
        v
    }
    pub fn e_class(&self) -> Class {
        let mut v = self.zero();
        v[self.point() as usize] = self.e_coeff;
        v
    }
    pub fn t_class(&self) -> Class {
        let mut v = self.zero();
        for (i, x) in self.t.iter().enumerate() {
            v[1 + i] = *x;
        }
        v
    }

    pub fn class_grade(&self, g: &Class) -> Option<u8> {
        let mut gr = None;
        for (i, x) in g.iter().enumerate() {
            if !x.is_zero() {
                match gr {
                    None => gr = Some(self.grades[i]),
                    Some(h) if h != self.grades[i] => return None,
                    _ => {}
                }
            }
        }
        gr
    }

    pub fn pair(&self, g: &Class, h: &Class) -> Q {
        let mut s = Q::zero();
        for (i, x) in g.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in h.iter().enumerate() {
                if !y.is_zero() {
                    s += *x * *y * self.gram[i][j];
                }
            }
        }
        s
    }

    pub fn mul(&self, g: &Class, h: &Class) -> Class {
        let mut out = self.zero();
        for (i, x) in g.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in h.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                if let Some((s, l)) = self.table[i][j] {
                    out[l as usize] += *x * *y * s;
                }
            }
        }
        out
    }

    /// Nonzero (label, coefficient) pairs of a class.
    pub fn terms(&self, g: &Class) -> Vec<(Label, Q)> {
        g.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i as Label, *x)).collect()
    }

    /// Dual-basis element of a label with respect to the full pairing.
    pub fn dual(&self, l: Label) -> Class {
        (0..self.dim()).map(|j| self.gram_inv[l as usize][j]).collect()
    }

    /// Parse `2c + l1 - 1/2 tau2`, also accepting `e` and `t`/`K`.
    pub fn parse_class(&self, s: &str) -> Result<Class, String> {
        let mut out = self.zero();
        let s = s.replace(' ', "");
        if s.is_empty() {
            return Err("empty class".into());
        }
        let mut rest = s.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut sgn = Q::one();
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sgn = -sgn;
                rest = r;
            } else if !first {
                return Err(format!("expected + or - in class {s:?}"));
            }
            first = false;
            let end = rest[1..].find(['+', '-']).map(|i| i + 1).unwrap_or(rest.len());
            let tok = &rest[..end];
            rest = &rest[end..];
            let split = tok.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(|| format!("no class symbol in {tok:?}"))?;
            let (coef, name) = tok.split_at(split);
            let coef = if coef.is_empty() {
                Q::one()
            } else {
                parse_q(coef.trim_end_matches('*')).ok_or_else(|| format!("bad coefficient {coef:?}"))?
            };
            let v = match name {
                "e" => self.e_class(),
                "t" | "K" => self.t_class(),
                _ => self.basis_class(self.label(name).ok_or_else(|| format!("unknown class {name:?}"))?),
            };
            for (o, x) in out.iter_mut().zip(v) {
                *o += sgn * coef * x;
            }
        }
        Ok(out)
    }

    pub fn fmt_class(&self, g: &Class) -> String {
        let ts = self.terms(g);
        if ts.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (l, x)) in ts.iter().enumerate() {
            let neg = *x < Q::zero();
            let a = if neg { -*x } else { *x };
            if i > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            if !a.is_one() {
                s.push_str(&fmt_q(&a));
            }
            s.push_str(self.name(*l));
        }
        s
    }

    pub fn describe(&self) -> String {
        let mut s = format!("{} rho={} b={}", self.mode.name(), self.rho, self.b);
        if self.synthetic() {
            s.push_str(" (synthetic datum)");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> SurfaceDatum {
        make_surface(&SurfaceConfig::k3(1, 21)).unwrap()
    }

    #[test]
    fn constructions() {
        let s = k3();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.e_class(), vec![q(0), q(0), q(24)]);
        assert!(!s.synthetic());
        let sp = make_surface(&SurfaceConfig::split(1, 2)).unwrap();
        let names: Vec<&str> = sp.labels().map(|l| sp.name(l)).collect();
        assert_eq!(names, ["1", "l1", "tau1", "tau2", "c"]);
        let bad = SurfaceConfig::k3(1, 21).with_t(&[1]);
        assert_eq!(make_surface(&bad).unwrap_err().to_string(), "canonical class must vanish in k3-chow mode");
        let sing = SurfaceConfig::k3(2, 20).with_picard(&[&[1, 1], &[1, 1]]);
        assert_eq!(make_surface(&sing).unwrap_err(), DatumError::SingularGram("Picard"));
        let neg = SurfaceDatum::from_parts(Mode::K3Chow, &[("1".into(), 0), ("x".into(), -1), ("c".into(), 2)], &[vec![q(1)]], &[], 21, vec![q(0)]);
        assert!(matches!(neg, Err(DatumError::NegativeGrade(_))));
    }

    #[test]
    fn pairing_and_products() {
        let s = k3();
        let one = s.basis_class(0);
        let c = s.basis_class(s.point());
        let l = s.parse_class("l").unwrap();
        assert_eq!(s.pair(&one, &c), q(1));
        assert_eq!(s.pair(&one, &one), q(0));
        assert_eq!(s.pair(&l, &l), q(2));
        assert_eq!(s.mul(&l, &l), s.parse_class("2c").unwrap());
        assert_eq!(s.mul(&c, &c), s.zero());
        let sp = make_surface(&SurfaceConfig::split(1, 2)).unwrap();
        let t1 = sp.basis_class(sp.tau(0));
        let t2 = sp.basis_class(sp.tau(1));
        assert_eq!(sp.mul(&t1, &t2), sp.zero());
        assert_eq!(sp.mul(&t1, &t1), sp.basis_class(sp.point()));
    }

    #[test]
    fn ring_axioms_exhaustive() {
        for s in [k3(), make_surface(&SurfaceConfig::split(2, 3).with_picard(&[&[0, 1], &[1, -2]])).unwrap()] {
            let basis: Vec<Class> = s.labels().map(|l| s.basis_class(l)).collect();
            let one = s.basis_class(0);
            for x in &basis {
                for y in &basis {
                    assert_eq!(s.mul(x, y), s.mul(y, x));
                    assert_eq!(s.pair(&s.mul(x, y), &one), s.pair(x, y));
                    for z in &basis {
                        assert_eq!(s.mul(&s.mul(x, y), z), s.mul(x, &s.mul(y, z)));
                    }
                }
            }
            if s.mode == Mode::K3Chow {
                for x in &basis[1..] {
                    assert_eq!(s.mul(&s.e_class(), x), s.zero());
                }
            }
        }
    }

    #[test]
    fn config_text() {
        let cfg = SurfaceConfig::parse("mode = \"split\"\npicard_rank = 1\npicard_gram = [[\"2\"]]\nb = 2\ntranscendental_gram = [[1, 0], [0, \"-1/2\"]]\n").unwrap();
        let s = make_surface(&cfg).unwrap();
        assert_eq!(s.lpair(s.tau(1), s.tau(1)), Q::new(-1, 2));
        assert!(SurfaceConfig::parse("mode = \"bogus\"\npicard_rank = 1\nb = 1").is_err());
        assert_eq!(s.fmt_class(&s.parse_class("2c - 1/2 l + tau1").unwrap()), "-1/2l1 + tau1 + 2c");
    }
}
