//! Text forms for operators and Fock vectors.
//!
//! ```text
//! expr := term (('+'|'-') term)*        term := rational? atom+
//! atom := q(n,class) | L(n) | Lehn(n) | J(n,k) | G(k,class) | D(m,n) | [expr,expr]
//! vec  := vterm (('+'|'-') vterm)*      vterm := rational? factor* v
//! factor := q(n,class)(^k)? | qq(m,n;tr)(^k)?
//! ```
//! Operators are evaluated by acting on the vector right to left, so every series is
//! truncated exactly at the weight of what it acts on.

use crate::blocks::Kind;
use crate::named::{self, NamedError};
use crate::op::{self, cre_weight, legs, Op, Slot};
use crate::rat::{fmt_q, parse_q, Q};
use crate::rep::dop::{d_op, qq_tr, RadOp};
use crate::surface::{Class, SurfaceDatum};
use crate::wick;
use num_traits::{One, Signed};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DslError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Class(String),
    #[error(transparent)]
    Named(#[from] NamedError),
    #[error("{0}")]
    Eval(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    Q(i32, String),
    L(i32),
    Lehn(i32),
    J(i32, u32),
    G(u32, String),
    D(i32, i32),
    Br(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr(pub Vec<(Q, Vec<Atom>)>);

#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Q(i32, String),
    QQ(i32, i32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VecExpr(pub Vec<(Q, Vec<Factor>)>);

struct P<'a> {
    s: &'a str,
    i: usize,
}

impl<'a> P<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Parse { pos: self.i, msg: msg.into() })
    }
    fn ws(&mut self) {
        while self.s[self.i..].starts_with(char::is_whitespace) {
            self.i += self.s[self.i..].chars().next().unwrap().len_utf8();
        }
    }
    fn peek(&mut self, t: &str) -> bool {
        self.ws();
        self.s[self.i..].starts_with(t)
    }
    fn eat(&mut self, t: &str) -> bool {
        if self.peek(t) {
            self.i += t.len();
            true
        } else {
            false
        }
    }
    fn expect(&mut self, t: &str) -> Result<(), DslError> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }
    fn done(&mut self) -> bool {
        self.ws();
        self.i == self.s.len()
    }
    fn int(&mut self) -> Result<i64, DslError> {
        self.ws();
        let st = self.i;
        let b = self.s.as_bytes();
        if self.i < b.len() && (b[self.i] == b'-' || b[self.i] == b'+') {
            self.i += 1;
        }
        while self.i < b.len() && b[self.i].is_ascii_digit() {
            self.i += 1;
        }
        self.s[st..self.i].parse().or_else(|_| {
            self.i = st;
            self.err("expected an integer")
        })
    }
    /// Optional leading rational, e.g. `3/2`, `-1/6 *`.
    fn coef(&mut self) -> Result<Option<Q>, DslError> {
        self.ws();
        let b = self.s.as_bytes();
        let st = self.i;
        let mut j = self.i;
        while j < b.len() && (b[j].is_ascii_digit() || b[j] == b'/') {
            j += 1;
        }
        if j == st {
            return Ok(None);
        }
        let x = parse_q(&self.s[st..j]).ok_or(DslError::Parse { pos: st, msg: "bad rational".into() })?;
        self.i = j;
        self.eat("*");
        Ok(Some(x))
    }
    fn class(&mut self, close: char) -> Result<String, DslError> {
        self.ws();
        let st = self.i;
        let end = self.s[st..].find(close).map(|k| st + k).ok_or(DslError::Parse { pos: st, msg: format!("unterminated class, expected {close:?}") })?;
        let c = self.s[st..end].trim().to_string();
        if c.is_empty() {
            return self.err("empty class");
        }
        self.i = end;
        Ok(c)
    }
    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut terms = vec![];
        let mut sg = Q::one();
        if self.eat("-") {
            sg = -sg;
        } else {
            self.eat("+");
        }
        loop {
            let c = self.coef()?.unwrap_or_else(Q::one);
            let mut atoms = vec![];
            while let Some(a) = self.atom()? {
                atoms.push(a);
            }
            if atoms.is_empty() {
                return self.err("expected an operator atom");
            }
            terms.push((sg * c, atoms));
            if self.eat("+") {
                sg = Q::one();
            } else if self.eat("-") {
                sg = -Q::one();
            } else {
                break;
            }
        }
        Ok(Expr(terms))
    }
    fn atom(&mut self) -> Result<Option<Atom>, DslError> {
        if self.eat("[") {
            let a = self.expr()?;
            self.expect(",")?;
            let b = self.expr()?;
            self.expect("]")?;
            return Ok(Some(Atom::Br(Box::new(a), Box::new(b))));
        }
        // longest names first
        for name in ["Lehn(", "L(", "J(", "G(", "D(", "q("] {
            if self.eat(name) {
                let a = match name {
                    "Lehn(" => Atom::Lehn(self.int()? as i32),
                    "L(" => Atom::L(self.int()? as i32),
                    "J(" => {
                        let n = self.int()? as i32;
                        self.expect(",")?;
                        let k = self.int()?;
                        if k < 0 {
                            return self.err("J needs k ≥ 0");
                        }
                        Atom::J(n, k as u32)
                    }
                    "G(" => {
                        let k = self.int()?;
                        if k < 0 {
                            return self.err("G needs k ≥ 0");
                        }
                        self.expect(",")?;
                        Atom::G(k as u32, self.class(')')?)
                    }
                    "D(" => {
                        let m = self.int()? as i32;
                        self.expect(",")?;
                        Atom::D(m, self.int()? as i32)
                    }
                    _ => {
                        let n = self.int()? as i32;
                        self.expect(",")?;
                        Atom::Q(n, self.class(')')?)
                    }
                };
                self.expect(")")?;
                if matches!(a, Atom::Q(0, _) | Atom::D(0, _) | Atom::D(_, 0)) {
                    return self.err("modes must be nonzero");
                }
                return Ok(Some(a));
            }
        }
        Ok(None)
    }
    fn vector(&mut self) -> Result<VecExpr, DslError> {
        let mut terms = vec![];
        let mut sg = Q::one();
        if self.eat("-") {
            sg = -sg;
        } else {
            self.eat("+");
        }
        loop {
            let c = self.coef()?.unwrap_or_else(Q::one);
            let mut fs = vec![];
            loop {
                let f = if self.eat("qq(") {
                    let m = self.int()? as i32;
                    self.expect(",")?;
                    let n = self.int()? as i32;
                    self.expect(";")?;
                    self.expect("tr")?;
                    self.expect(")")?;
                    Factor::QQ(m, n)
                } else if self.eat("q(") {
                    let n = self.int()? as i32;
                    self.expect(",")?;
                    let cl = self.class(')')?;
                    self.expect(")")?;
                    Factor::Q(n, cl)
                } else {
                    break;
                };
                let mut p = 1;
                if self.eat("^") {
                    p = self.int()?;
                    if p < 1 {
                        return self.err("powers must be positive");
                    }
                }
                for _ in 0..p {
                    fs.push(f.clone());
                }
            }
            self.expect("v")?;
            terms.push((sg * c, fs));
            if self.eat("+") {
                sg = Q::one();
            } else if self.eat("-") {
                sg = -Q::one();
            } else {
                break;
            }
        }
        Ok(VecExpr(terms))
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, DslError> {
    let mut p = P { s, i: 0 };
    let e = p.expr()?;
    if !p.done() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_vector(s: &str) -> Result<VecExpr, DslError> {
    let mut p = P { s, i: 0 };
    let e = p.vector()?;
    if !p.done() {
        return p.err("trailing input");
    }
    Ok(e)
}

fn write_coef(f: &mut fmt::Formatter<'_>, i: usize, c: &Q) -> fmt::Result {
    let a = c.abs();
    if i == 0 {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
    }
    if !a.is_one() {
        write!(f, "{} ", fmt_q(&a))?;
    }
    Ok(())
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Q(n, c) => write!(f, "q({n},{c})"),
            Atom::L(n) => write!(f, "L({n})"),
            Atom::Lehn(n) => write!(f, "Lehn({n})"),
            Atom::J(n, k) => write!(f, "J({n},{k})"),
            Atom::G(k, c) => write!(f, "G({k},{c})"),
            Atom::D(m, n) => write!(f, "D({m},{n})"),
            Atom::Br(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, atoms)) in self.0.iter().enumerate() {
            write_coef(f, i, c)?;
            let a: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
            write!(f, "{}", a.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Display for VecExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, fs)) in self.0.iter().enumerate() {
            write_coef(f, i, c)?;
            for x in fs {
                match x {
                    Factor::Q(n, cl) => write!(f, "q({n},{cl}) ")?,
                    Factor::QQ(m, n) => write!(f, "qq({m},{n};tr) ")?,
                }
            }
            write!(f, "v")?;
        }
        Ok(())
    }
}

fn class_of(s: &SurfaceDatum, c: &str) -> Result<Class, DslError> {
    if let Some(l) = s.label(c) {
        return Ok(s.basis_class(l));
    }
    s.parse_class(c).map_err(DslError::Class)
}

/// Build a Fock vector (rational) from its text form.
pub fn build_vector(s: &SurfaceDatum, v: &VecExpr) -> Result<Op, DslError> {
    let mut r = Op::zero();
    for (c, fs) in &v.0 {
        let mut w = Op::identity();
        for f in fs.iter().rev() {
            let o = match f {
                Factor::Q(n, cl) => op::q_class(s, *n, &class_of(s, cl)?),
                Factor::QQ(m, n) => {
                    if s.mode.is_split() {
                        return Err(DslError::Eval("transcendental pairs only exist in k3-chow mode".into()));
                    }
                    qq_tr(s, *m, *n)
                }
            };
            w = op::expand(s, &wick::apply(s, &o, &w));
        }
        r = r.add(&w.scale(*c));
    }
    Ok(op::expand(s, &r))
}

fn max_weight(v: &RadOp) -> u32 {
    v.parts().flat_map(|(_, o)| o.terms.keys().map(cre_weight)).max().unwrap_or(0)
}

fn max_tag(v: &RadOp) -> u8 {
    v.parts().flat_map(|(_, o)| o.terms.keys().flat_map(|k| legs(k).map(|x| x.free).collect::<Vec<_>>())).max().unwrap_or(0)
}

fn atom_op(s: &SurfaceDatum, a: &Atom, w: u32) -> Result<RadOp, DslError> {
    let o = match a {
        Atom::Q(n, c) => op::q_class(s, *n, &class_of(s, c)?),
        Atom::L(n) => named::vir(s, *n, w),
        Atom::Lehn(n) => op::expand(s, &named::lehn(*n, w)),
        Atom::J(n, k) => op::expand(s, &named::j_op(s, *n, *k, w)?),
        Atom::G(k, c) => op::expand(s, &named::at(s, &named::g_op(s, *k, w)?, &class_of(s, c)?)),
        Atom::D(m, n) => {
            if s.mode.is_split() {
                return Ok(d_op(s, *m, *n).expand(s));
            }
            return Ok(d_op(s, *m, *n));
        }
        Atom::Br(..) => unreachable!(),
    };
    Ok(RadOp::rational(o))
}

fn act_atom(s: &SurfaceDatum, a: &Atom, v: &RadOp) -> Result<RadOp, DslError> {
    if let Atom::Br(x, y) = a {
        let xy = act(s, x, &act(s, y, v)?)?;
        let yx = act(s, y, &act(s, x, v)?)?;
        return Ok(xy.sub(&yx));
    }
    let o = atom_op(s, a, max_weight(v))?;
    // a fresh tag for this operator's free leg
    let t = max_tag(v) + 1;
    let o = if t > 1 {
        let mut r = RadOp::zero();
        for (rad, x) in o.parts() {
            let sc = crate::rep::scalar::Scalar::sqrt(*rad);
            r = r.add(&RadOp::rational(op::retag(x, named::F1, t)).times(&sc));
        }
        r
    } else {
        o
    };
    Ok(o.bilinear(v, |x, y| wick::apply(s, x, y)).expand(s))
}

/// E · v.
pub fn act(s: &SurfaceDatum, e: &Expr, v: &RadOp) -> Result<RadOp, DslError> {
    let mut r = RadOp::zero();
    for (c, atoms) in &e.0 {
        let mut w = v.clone();
        for a in atoms.iter().rev() {
            w = act_atom(s, a, &w)?;
        }
        r = r.add(&w.times(&crate::rep::scalar::Scalar::rational(*c)));
    }
    Ok(r)
}

/// Canonical text of a vector: DSL form when every term is a product of singletons
/// and transcendental pairs, operator text otherwise.
pub fn fmt_vector(s: &SurfaceDatum, v: &RadOp) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut parts = vec![];
    for (rad, o) in v.parts() {
        let text = match to_vec_expr(s, o) {
            Some(e) => e.to_string(),
            None => op::fmt_op(s, o).replace('\n', " + "),
        };
        parts.push(if *rad == 1 { text } else { format!("sqrt({rad}) * ({text})") });
    }
    parts.join(" + ")
}

pub fn to_vec_expr(s: &SurfaceDatum, o: &Op) -> Option<VecExpr> {
    let mut terms = vec![];
    for (k, c) in o.sorted() {
        let mut fs = vec![];
        // highest modes first
        let mut blocks: Vec<_> = k.iter().collect();
        blocks.sort_by_key(|b| std::cmp::Reverse(b.legs.iter().map(|x| x.mode).max()));
        for b in blocks {
            match b.kind {
                Kind::Diag(l) if b.legs.len() == 1 && b.legs[0].free == 0 => fs.push(Factor::Q(b.legs[0].mode, s.name(l).to_string())),
                Kind::Tr if b.legs.iter().all(|x: &Slot| x.free == 0) => fs.push(Factor::QQ(b.legs[0].mode, b.legs[1].mode)),
                _ => return None,
            }
        }
        terms.push((*c, fs));
    }
    Some(VecExpr(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qr;
    use crate::surface::{make_surface, SurfaceConfig};

    #[test]
    fn parse_and_print() {
        let e = parse_expr("G(2,c) - 1/2 [L(2), q(3,l)] + D(1,-1) q(-1,1)").unwrap();
        assert_eq!(e.0.len(), 3);
        assert_eq!(e.0[1].0, qr(-1, 2));
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        let v = parse_vector("3/2 q(2,l) q(1,1) v + qq(1,2;tr) v").unwrap();
        assert_eq!(parse_vector(&v.to_string()).unwrap(), v);
        assert_eq!(parse_vector("1/2 q(1,1)^2 v").unwrap().0[0].1.len(), 2);
        match parse_expr("q(1,1) + ") {
            Err(DslError::Parse { pos, .. }) => assert_eq!(pos, 9),
            r => panic!("{r:?}"),
        }
        assert!(parse_expr("q(0,1)").is_err());
        assert!(parse_vector("q(1,1)").is_err());
    }

    #[test]
    fn compute_examples() {
        let s = make_surface(&SurfaceConfig::k3(1, 21)).unwrap();
        let run = |e: &str, v: &str| {
            let w = RadOp::rational(build_vector(&s, &parse_vector(v).unwrap()).unwrap());
            act(&s, &parse_expr(e).unwrap(), &w).unwrap()
        };
        assert!(run("[L(2),q(3,l)]", "v").is_zero());
        assert!(run("q(-1,c)", "v").is_zero());
        let g = run("G(2,c)", "1/2 q(1,1)^2 v");
        assert!(!g.is_zero());
        // G_2(c) = −Σ q_m(c) q_{−m}(c): q_{−1}(c) removes one q_1(1) with factor −1
        assert_eq!(fmt_vector(&s, &g), "q(1,1) q(1,c) v");
        assert_eq!(fmt_vector(&s, &run("q(-2,c)", "q(2,1) v")), "-2 v");
        let d = run("D(2,1)", "v");
        assert_eq!(fmt_vector(&s, &d), "sqrt(2) * (1/2 qq(1,2;tr) v)");
    }
}
