//! Verification suites: each expands its bounds into identity instances and returns
//! one certificate per instance.

use crate::cert::Certificate;
use hilb::chern::{self, ChernSeries};
use hilb::decompose::decompose_g;
use hilb::named::NamedError;
use hilb::op::{self, Op};
use hilb::oracle::{self, Pair};
use hilb::rep::{dop, shapovalov, sp, yin};
use hilb::surface::{make_surface, Class, Label, SurfaceConfig, SurfaceDatum};
use hilb::verify::{self, residual, Omega};
use itertools::Itertools;
use rayon::prelude::*;
use serde_json::json;
use std::collections::{BTreeMap, HashSet};
use std::time::Instant;
use thiserror::Error;

pub const SUITES: [&str; 15] = [
    "heisenberg",
    "virasoro",
    "commute",
    "lqw",
    "omega",
    "decompose",
    "oioi",
    "prop2",
    "sp",
    "yin",
    "gl",
    "kimura",
    "shapovalov",
    "chern",
    "diagram-oracle",
];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("{0}")]
    Named(#[from] NamedError),
    #[error("{0}")]
    Config(String),
}

#[derive(Clone, Debug, Default)]
pub struct Bounds {
    pub max_mode: Option<i32>,
    pub max_weight: Option<u32>,
    pub max_level: Option<u32>,
    pub chern_degree: Option<u32>,
    pub b_list: Option<Vec<usize>>,
    pub b_model: Option<usize>,
}

pub struct Ctx {
    pub bounds: Bounds,
    /// A user-supplied datum replaces each suite's default data.
    pub surface: Option<SurfaceDatum>,
}

type Res = Result<Vec<Certificate>, SuiteError>;

fn k3(rho: usize, b: usize) -> SurfaceDatum {
    make_surface(&SurfaceConfig::k3(rho, b)).unwrap()
}

/// The honest K3 lattice split ρ + b = 22 when b ≤ 21.
fn k3_b(b: usize) -> SurfaceDatum {
    k3(if b <= 21 { 22 - b } else { 1 }, b)
}

fn timed(mut c: Certificate, f: impl FnOnce() -> Vec<String>) -> Certificate {
    let t = Instant::now();
    let r = f();
    c = c.residual(r);
    c.millis = t.elapsed().as_millis() as u64;
    c
}

fn lines(s: &SurfaceDatum, o: &Op) -> Vec<String> {
    op::residual_lines(s, o, 8)
}

fn nonzero(r: i32) -> std::vec::IntoIter<i32> {
    (-r..=r).filter(|&x| x != 0).collect::<Vec<_>>().into_iter()
}

fn ring_labels(s: &SurfaceDatum) -> Vec<Label> {
    if s.mode.is_split() {
        s.labels().collect()
    } else {
        s.algebraic_labels()
    }
}

fn class(s: &SurfaceDatum, l: Label) -> Class {
    s.basis_class(l)
}

pub fn run_suite(name: &str, ctx: &Ctx) -> Res {
    match name {
        "heisenberg" => heisenberg(ctx),
        "virasoro" => virasoro(ctx),
        "commute" => commute(ctx),
        "lqw" => lqw(ctx),
        "omega" => omega(ctx),
        "decompose" => decompose(ctx),
        "oioi" => oioi(ctx),
        "prop2" => prop2(ctx),
        "sp" => sp_suite(ctx),
        "yin" => yin_suite(ctx),
        "gl" => gl(ctx),
        "kimura" => kimura(ctx),
        "shapovalov" => shapo(ctx),
        "chern" => chern_suite(ctx),
        "diagram-oracle" => diagram(ctx),
        _ => Err(SuiteError::Config(format!("unknown suite {name:?}"))),
    }
}

fn surfaces(ctx: &Ctx, default: Vec<SurfaceDatum>) -> Vec<SurfaceDatum> {
    match &ctx.surface {
        Some(s) => vec![s.clone()],
        None => default,
    }
}

fn heisenberg(ctx: &Ctx) -> Res {
    let mm = ctx.bounds.max_mode.unwrap_or(6);
    let w = ctx.bounds.max_weight.unwrap_or(10);
    let mut out = vec![];
    for s in surfaces(ctx, vec![k3(1, 21), make_surface(&SurfaceConfig::split(1, 1)).unwrap()]) {
        let t = Instant::now();
        let (_, bad) = verify::heisenberg_on_states(&s, mm, w);
        let eval_ms = t.elapsed().as_millis() as u64;
        let mut failing: BTreeMap<(i32, String, i32, String), Vec<String>> = BTreeMap::new();
        for (n, a, n2, b, st) in bad {
            failing.entry((n, a.clone(), n2, b.clone())).or_default().push(format!("on state {st}"));
            failing.entry((n2, b, n, a)).or_default().push(format!("on state {st}"));
        }
        let labels = ring_labels(&s);
        let inst: Vec<(i32, Label, i32, Label)> =
            nonzero(mm).flat_map(|n| labels.iter().map(move |&l| (n, l))).collect::<Vec<_>>().into_iter().tuple_combinations().map(|((n, a), (n2, b))| (n, a, n2, b)).collect();
        let per = eval_ms / inst.len().max(1) as u64;
        out.par_extend(inst.into_par_iter().map(|(n, a, n2, b)| {
            let c = Certificate::new("heisenberg", &s.describe(), "canonical+evaluation")
                .param("n", n)
                .param("gamma", s.name(a))
                .param("n2", n2)
                .param("gamma2", s.name(b))
                .bound("max_weight", w);
            let mut c = timed(c, || {
                let mut r = lines(&s, &residual(&s, &verify::heis(&s, n, &class(&s, a), n2, &class(&s, b))));
                if let Some(f) = failing.get(&(n, s.name(a).to_string(), n2, s.name(b).to_string())) {
                    r.extend(f.iter().take(4).cloned());
                }
                r
            });
            c.millis += per;
            c
        }));
    }
    Ok(out)
}

fn virasoro(ctx: &Ctx) -> Res {
    let mm = ctx.bounds.max_mode.unwrap_or(4);
    let w = ctx.bounds.max_weight.unwrap_or(10);
    let s = surfaces(ctx, vec![k3(1, 21)]).remove(0);
    let d = s.describe();
    let mut out: Vec<Certificate> = (-mm..=mm)
        .cartesian_product(nonzero(mm))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(n, n2)| {
            let c = Certificate::new("heis-vir", &d, "canonical").param("n", n).param("n2", n2).bound("max_weight", w);
            timed(c, || lines(&s, &residual(&s, &verify::heis_vir(&s, n, n2, w))))
        })
        .collect();
    out.par_extend((-mm..=mm).cartesian_product(-mm..=mm).collect::<Vec<_>>().into_par_iter().map(|(n, n2)| {
        let c = Certificate::new("vir-vir", &d, "canonical").param("n", n).param("n2", n2).bound("max_weight", w);
        timed(c, || lines(&s, &residual(&s, &verify::vir_vir(&s, n, n2, w))))
    }));
    let central: Vec<SurfaceDatum> = match (&ctx.surface, &ctx.bounds.b_list) {
        (Some(s), _) => vec![s.clone()],
        (None, Some(bs)) => bs.iter().map(|&b| k3_b(b)).collect(),
        (None, None) => vec![k3_b(2), k3_b(21)],
    };
    for s in central {
        let d = s.describe();
        out.par_extend((-mm..=mm).cartesian_product(-mm..=mm).collect::<Vec<_>>().into_par_iter().map(|(n, n2)| {
            let c = Certificate::new("vir-central", &d, "canonical").param("n", n).param("n2", n2).param("b", s.b).bound("max_weight", w);
            timed(c, || lines(&s, &residual(&s, &verify::vir_central(&s, n, n2, w))))
        }));
    }
    Ok(out)
}

fn commute(ctx: &Ctx) -> Res {
    let mm = ctx.bounds.max_mode.unwrap_or(4);
    let w = ctx.bounds.max_weight.unwrap_or(10);
    let s = surfaces(ctx, vec![k3(1, 21)]).remove(0);
    let d = s.describe();
    let labels = s.algebraic_labels();
    let inst: Vec<(i32, i32, Label)> = (-mm..=mm).cartesian_product(nonzero(mm)).cartesian_product(labels).map(|((n, m), l)| (n, m, l)).collect();
    Ok(inst
        .into_par_iter()
        .map(|(n, m, l)| {
            let c = Certificate::new("commute", &d, "canonical").param("n", n).param("m", m).param("gamma", s.name(l)).bound("max_weight", w);
            timed(c, || lines(&s, &residual(&s, &verify::commute(&s, n, m, &class(&s, l), w))))
        })
        .collect())
}

fn collect<T: Send>(v: Vec<Result<T, SuiteError>>) -> Result<Vec<T>, SuiteError> {
    v.into_iter().collect()
}

fn lqw(ctx: &Ctx) -> Res {
    let mm = ctx.bounds.max_mode.unwrap_or(3);
    let w = ctx.bounds.max_weight.unwrap_or(8);
    let s = surfaces(ctx, vec![k3(1, 21)]).remove(0);
    if !s.t_vanishes() {
        return Err(NamedError::NeedsFlat.into());
    }
    let d = s.describe();
    let mut inst: Vec<(&str, i32, i32)> = vec![];
    for id in ["lqw-2", "lqw-3", "lqw-4", "lqw-5"] {
        for (n, n2) in (-mm..=mm).cartesian_product(-mm..=mm) {
            inst.push((id, n, n2));
        }
    }
    let mut out = collect(
        inst.into_par_iter()
            .map(|(id, n, n2)| {
                let c = Certificate::new(id, &d, "canonical").param("n", n).param("n2", n2).bound("max_weight", w);
                let r = verify::lqw(&s, id, n, n2, w)?;
                Ok(timed(c, || lines(&s, &residual(&s, &r))))
            })
            .collect(),
    )?;
    let mut special: Vec<(&str, i32, u32)> = vec![];
    for k in 0..=3 {
        special.push(("lqw-special-a", 1, k));
        special.push(("lqw-special-a", -1, k));
    }
    for k in 1..=6u32 {
        for a in k.saturating_sub(3)..=k.min(3) {
            special.push(("lqw-special-b", a as i32, k));
        }
    }
    out.extend(collect(
        special
            .into_par_iter()
            .map(|(id, x, k)| {
                let (c, r) = if id == "lqw-special-a" {
                    (Certificate::new(id, &d, "canonical").param("sign", x).param("k", k), verify::lqw_special_a(&s, x, k, w)?)
                } else {
                    (Certificate::new(id, &d, "canonical").param("a", x).param("k", k), verify::lqw_special_b(&s, x as u32, k, w)?)
                };
                Ok(timed(c.bound("max_weight", w), || lines(&s, &residual(&s, &r))))
            })
            .collect(),
    )?);
    for k in [1, 2] {
        let c = Certificate::new("formula-j", &d, "canonical").param("k", k).bound("max_weight", w);
        let r = verify::j_vs_g(&s, k, w)?;
        out.push(timed(c, || lines(&s, &residual(&s, &r))));
    }
    Ok(out)
}

fn omega(ctx: &Ctx) -> Res {
    let mm = ctx.bounds.max_mode.unwrap_or(3);
    let w = ctx.bounds.max_weight.unwrap_or(8);
    let s = surfaces(ctx, vec![k3(1, 21)]).remove(0);
    if !s.t_vanishes() {
        return Err(NamedError::NeedsFlat.into());
    }
    let d = s.describe();
    let mut inst = vec![];
    for (n, n2) in (-mm..=mm).cartesian_product(-mm..=mm) {
        for (k, k2) in (0..=3u32).cartesian_product(0..=3u32) {
            if (3..=5).contains(&(k + k2)) {
                inst.push((n, k, n2, k2));
            }
        }
    }
    let vals: Vec<((i32, u32, i32, u32), Result<Omega, Op>, u64)> = collect(
        inst.into_par_iter()
            .map(|(n, k, n2, k2)| {
                let t = Instant::now();
                let r = verify::extract_omega(&s, n, k, n2, k2, w)?;
                Ok(((n, k, n2, k2), r, t.elapsed().as_millis() as u64))
            })
            .collect(),
    )?;
    let table: BTreeMap<_, _> = vals.iter().map(|(k, v, _)| (*k, v.clone())).collect();
    let mut out = vec![];
    let val_json = |o: &Omega| match o {
        Omega::Value(x) => json!(hilb::rat::fmt_q(x)),
        Omega::Undetermined => json!("undetermined"),
    };
    for ((n, k, n2, k2), r, ms) in &vals {
        let mut c = Certificate::new("omega-proportional", &d, "canonical").param("n", *n).param("k", *k).param("n2", *n2).param("k2", *k2).bound("max_weight", w);
        c = match r {
            Ok(o) => c.param("omega", val_json(o)).param("omega_origin", "derived").residual(vec![]),
            Err(rest) => c.residual(lines(&s, rest)),
        };
        c.millis = *ms;
        out.push(c);
        // antisymmetry, once per unordered pair
        if (n, k) < (n2, k2) {
            let other = &table[&(*n2, *k2, *n, *k)];
            let c = Certificate::new("omega-antisymmetry", &d, "canonical").param("n", *n).param("k", *k).param("n2", *n2).param("k2", *k2);
            let bad = match (r, other) {
                (Ok(Omega::Value(a)), Ok(Omega::Value(b))) if *a == -*b => vec![],
                (Ok(Omega::Undetermined), Ok(Omega::Undetermined)) => vec![],
                (Ok(a), Ok(b)) => vec![format!("omega {} vs {}", val_json(a), val_json(b))],
                _ => vec!["not proportional".into()],
            };
            out.push(c.residual(bad));
        }
    }
    Ok(out)
}

fn decompose(ctx: &Ctx) -> Res {
    let w = ctx.bounds.max_weight.unwrap_or(6);
    let s = surfaces(ctx, vec![k3(1, 21)]).remove(0);
    let d = s.describe();
    let inst: Vec<(u32, Label)> = (2..=4).cartesian_product(s.algebraic_labels()).collect();
    collect(
        inst.into_par_iter()
            .map(|(k, l)| {
                let t = Instant::now();
                let r = decompose_g(&s, k, &class(&s, l), w)?;
                let words: Vec<String> = r.items.iter().map(|it| hilb::decompose::fmt_item(&s, it)).collect();
                let mut c = Certificate::new("decompose-g", &d, "canonical")
                    .param("k", k)
                    .param("gamma", s.name(l))
                    .param("words", words)
                    .bound("max_weight", w)
                    .residual(lines(&s, &r.residual));
                c.millis = t.elapsed().as_millis() as u64;
                Ok(c)
            })
            .collect(),
    )
}

fn oioi(ctx: &Ctx) -> Res {
    let mm = ctx.bounds.max_mode.unwrap_or(2);
    let w = ctx.bounds.max_weight.unwrap_or(4);
    let s = surfaces(ctx, vec![k3(1, 21)]).remove(0);
    let d = s.describe();
    let labels = ring_labels(&s);
    let oi: Vec<(i32, i32, i32, Label)> = nonzero(mm)
        .cartesian_product(nonzero(mm))
        .cartesian_product(nonzero(mm))
        .cartesian_product(labels)
        .map(|(((m, n), k), l)| (m, n, k, l))
        .collect();
    let mut out: Vec<Certificate> = oi
        .into_par_iter()
        .map(|(m, n, k, l)| {
            let c = Certificate::new("oi", &d, "canonical").param("m", m).param("n", n).param("k", k).param("gamma", s.name(l)).bound("max_weight", w);
            timed(c, || lines(&s, &residual(&s, &verify::oi(&s, m, n, k, &class(&s, l), w))))
        })
        .collect();
    let quads: Vec<(i32, i32, i32, i32)> = nonzero(mm).cartesian_product(nonzero(mm)).cartesian_product(nonzero(mm).cartesian_product(nonzero(mm))).map(|((a, b), (c, e))| (a, b, c, e)).collect();
    out.par_extend(quads.into_par_iter().map(|(m, n, m2, n2)| {
        let c = Certificate::new("oioi", &d, "canonical").param("m", m).param("n", n).param("m2", m2).param("n2", n2).bound("max_weight", w);
        timed(c, || lines(&s, &residual(&s, &verify::oioi(&s, m, n, m2, n2, w))))
    }));
    Ok(out)
}

fn prop2(ctx: &Ctx) -> Res {
    let mm = ctx.bounds.max_mode.unwrap_or(3);
    let w = ctx.bounds.max_weight.unwrap_or(6);
    let s = surfaces(ctx, vec![k3(1, 21)]).remove(0);
    let d = s.describe();
    let mut out: Vec<Certificate> = nonzero(mm)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| {
            let c = Certificate::new("prop2-first", &d, "canonical").param("m", m).bound("max_weight", w);
            timed(c, || lines(&s, &residual(&s, &verify::prop2_first(&s, m, w))))
        })
        .collect();
    out.par_extend(nonzero(mm).cartesian_product(nonzero(mm)).collect::<Vec<_>>().into_par_iter().map(|(m, n)| {
        let c = Certificate::new("prop2-second", &d, "canonical").param("m", m).param("n", n).bound("max_weight", w);
        timed(c, || lines(&s, &residual(&s, &verify::prop2_second(&s, m, n, w))))
    }));
    Ok(out)
}

fn sp_suite(ctx: &Ctx) -> Res {
    let big_n = 4;
    let mm = ctx.bounds.max_mode.unwrap_or(3);
    let w = ctx.bounds.max_weight.unwrap_or(6);
    let idx: Vec<i32> = nonzero(big_n).collect();
    let quads: Vec<(i32, i32, i32, i32)> = idx.iter().copied().cartesian_product(idx.clone()).cartesian_product(idx.iter().copied().cartesian_product(idx.clone())).map(|((a, b), (c, e))| (a, b, c, e)).collect();
    let mut out: Vec<Certificate> = quads
        .into_par_iter()
        .map(|(m, n, m2, n2)| {
            let c = Certificate::new("sp-matrix", "none", "exact matrix").param("m", m).param("n", n).param("m2", m2).param("n2", n2).bound("N", big_n);
            timed(c, || {
                let dd = |a, b| sp::sp_generator(a, b, big_n).unwrap();
                let lhs = dd(m, n).bracket(&dd(m2, n2));
                let mut rhs = sp::SpMatrix::zero(big_n);
                for (k, (a, b)) in sp::sp_rel_rhs(m, n, m2, n2) {
                    rhs = rhs.lin(1.into(), &dd(a, b), (k as i128).into());
                }
                let diff = lhs.lin(1.into(), &rhs, (-1).into());
                diff.entries().take(8).map(|((i, j), x)| format!("{} * E({i},{j})", hilb::rat::fmt_q(x))).collect()
            })
        })
        .collect();
    for (a, b) in idx.iter().copied().cartesian_product(idx.clone()) {
        let c = Certificate::new("sp-membership", "none", "exact matrix").param("m", a).param("n", b).bound("N", big_n);
        out.push(timed(c, || if sp::sp_generator(a, b, big_n).unwrap().in_sp() { vec![] } else { vec!["not in sp".into()] }));
    }
    let s = surfaces(ctx, vec![k3(1, 21)]).remove(0);
    let d = s.describe();
    let states = dop::sector_basis(&s, w);
    let quads: Vec<(i32, i32, i32, i32)> = nonzero(mm).cartesian_product(nonzero(mm)).cartesian_product(nonzero(mm).cartesian_product(nonzero(mm))).map(|((a, b), (c, e))| (a, b, c, e)).collect();
    out.par_extend(quads.into_par_iter().map(|(m, n, m2, n2)| {
        let c = Certificate::new("sp-fock", &d, "canonical+evaluation").param("m", m).param("n", n).param("m2", m2).param("n2", n2).bound("max_weight", w);
        timed(c, || {
            let r = dop::d_relation(&s, m, n, m2, n2);
            let mut v = if r.is_zero() { vec![] } else { vec![r.fmt(&s)] };
            if let Some(x) = dop::evaluate(&s, &r, &states) {
                v.push(format!("on a sector state: {}", x.fmt(&s)));
            }
            v
        })
    }));
    for (m, n) in nonzero(mm).cartesian_product(nonzero(mm)).filter(|&(m, n)| m >= n && n < 0) {
        let c = Certificate::new("sp-highest", &d, "evaluation").param("m", m).param("n", n);
        out.push(timed(c, || {
            let r = dop::highest(&s, m, n);
            if r.is_zero() {
                vec![]
            } else {
                vec![r.fmt(&s)]
            }
        }));
    }
    for n in 1..=mm {
        let c = Certificate::new("sp-reorder", &d, "canonical").param("n", n);
        out.push(timed(c, || lines(&s, &dop::reorder_identity(&s, n))));
    }
    let small = nonzero(mm).cartesian_product(nonzero(mm)).cartesian_product(nonzero(mm).cartesian_product(nonzero(mm)));
    for ((m, n), (m2, n2)) in small {
        let c = Certificate::new("oioi-tr", &d, "canonical").param("m", m).param("n", n).param("m2", m2).param("n2", n2);
        out.push(timed(c, || lines(&s, &dop::oioi_tr(&s, m, n, m2, n2))));
    }
    Ok(out)
}

fn yin_suite(ctx: &Ctx) -> Res {
    let modes = ctx.bounds.max_mode.unwrap_or(3);
    let bs = ctx.bounds.b_list.clone().unwrap_or(vec![1, 2]);
    let mut out = vec![];
    for b in bs {
        let s = match &ctx.surface {
            Some(s) if s.b == b => s.clone(),
            _ => k3_b(b),
        };
        let d = s.describe();
        let sets: Vec<Vec<i32>> = (1..=3).combinations(b + 1).collect();
        for (mm, nn) in sets.iter().cartesian_product(&sets) {
            let v = yin::yin(&s, mm, nn).unwrap();
            for (a, c) in (1..=modes).cartesian_product(1..=modes) {
                let cert = Certificate::new("yin-annihilation", &d, "evaluation").param("b", b).param("m_idx", mm.clone()).param("n_idx", nn.clone()).param("a", a).param("c", c);
                out.push(timed(cert, || {
                    let r = dop::rad_apply(&s, &dop::d_op(&s, -a, -c), &v);
                    if r.is_zero() {
                        vec![]
                    } else {
                        vec![r.fmt(&s)]
                    }
                }));
            }
            let cert = Certificate::new("yin-sign", &d, "evaluation").param("b", b).param("m_idx", mm.clone()).param("n_idx", nn.clone());
            out.push(timed(cert, || {
                let mut sw = mm.clone();
                sw.swap(0, 1);
                let r = yin::yin(&s, &sw, nn).unwrap().add(&v);
                let mut bad = vec![];
                if v.is_zero() {
                    bad.push("yin vector vanishes in the free pair sector".into());
                }
                if !r.is_zero() {
                    bad.push(r.fmt(&s));
                }
                bad
            }));
        }
    }
    Ok(out)
}

fn gl(ctx: &Ctx) -> Res {
    let bound = ctx.bounds.max_mode.unwrap_or(4);
    let bs = ctx.bounds.b_list.clone().unwrap_or(vec![2]);
    let mut out = vec![];
    for b in bs {
        let s = match &ctx.surface {
            Some(s) if s.b == b => s.clone(),
            _ => k3_b(b),
        };
        let d = s.describe();
        let sets: Vec<Vec<i32>> = (1..=bound).combinations(b + 1).collect();
        let inst: Vec<(Vec<i32>, Vec<i32>, i32, i32)> = sets
            .iter()
            .cartesian_product(&sets)
            .filter(|(a, c)| a <= c)
            .cartesian_product((1..=bound).cartesian_product(1..=bound))
            .map(|((a, c), (x, u))| (a.clone(), c.clone(), x, u))
            .collect();
        out.par_extend(inst.into_par_iter().map(|(mm, nn, x, u)| {
            let c = Certificate::new("gl-equivariance", &d, "evaluation").param("b", b).param("m_idx", mm.clone()).param("n_idx", nn.clone()).param("s", x).param("u", u);
            timed(c, || {
                let mut bad = vec![];
                let r = yin::gl_residual(&s, x, u, &mm, &nn);
                if !r.is_zero() {
                    bad.push(format!("wedge side: {}", r.fmt(&s)));
                }
                let v = yin::yin(&s, &mm, &nn).unwrap();
                let mut lhs = dop::rad_apply(&s, &dop::d_op(&s, x, -u), &v);
                if x == u {
                    lhs = lhs.sub(&v.times(&hilb::rep::scalar::Scalar::rational(hilb::rat::qr(b as i128, 2))));
                }
                let r2 = lhs.sub(&yin::reindexed(&s, x, u, &mm, &nn));
                if !r2.is_zero() {
                    bad.push(format!("re-indexed side: {}", r2.fmt(&s)));
                }
                bad
            })
        }));
    }
    Ok(out)
}

fn kimura(ctx: &Ctx) -> Res {
    let pairs: Vec<(usize, usize)> = match (&ctx.bounds.b_list, ctx.bounds.b_model) {
        (Some(bs), Some(bm)) => bs.iter().map(|&b| (b, bm)).collect(),
        (Some(bs), None) => bs.iter().map(|&b| (b, b)).collect(),
        (None, Some(bm)) => vec![(bm, bm)],
        (None, None) => vec![(1, 1), (2, 2), (3, 3)],
    };
    let mut out = vec![];
    for (b, bm) in pairs {
        let sp = make_surface(&SurfaceConfig::split(1, bm)).map_err(|e| SuiteError::Config(e.to_string()))?;
        let c = Certificate::new("kimura", &sp.describe(), "split brute force").param("b", b).param("b_model", bm);
        let r = yin::kimura_sum(&sp, b).map_err(|e| SuiteError::Config(e.to_string()))?;
        out.push(timed(c, || r.terms.iter().take(8).map(|(t, x)| format!("{} * {}", hilb::rat::fmt_q(x), t.iter().map(|&l| sp.name(l)).join("⊗"))).collect()));
    }
    Ok(out)
}

fn shapo(ctx: &Ctx) -> Res {
    let lv = ctx.bounds.max_level.unwrap_or(6);
    let bs: Vec<usize> = ctx.bounds.b_list.clone().unwrap_or((2..=21).collect());
    let mut out: Vec<Certificate> = bs
        .into_par_iter()
        .flat_map_iter(|b| {
            (2..=lv).map(move |l| {
                let c = Certificate::new("shapovalov-quotient", "none", "exact gram").param("c", b).param("level", l);
                let t = Instant::now();
                let det = shapovalov::gram_det(&shapovalov::shapovalov_gram((b as i128).into(), l, true));
                let mut c = c.param("det", det.to_string()).residual(if shapovalov::det_sign(&det) == 0 { vec!["singular".into()] } else { vec![] });
                c.millis = t.elapsed().as_millis() as u64;
                c
            })
        })
        .collect();
    let c = Certificate::new("shapovalov-level1-null", "none", "exact gram").param("level", 1);
    out.push(timed(c, || {
        let g = shapovalov::shapovalov_gram(2.into(), 1, false);
        if g == vec![vec![0.into()]] {
            vec![]
        } else {
            vec![format!("{g:?}")]
        }
    }));
    Ok(out)
}

fn chern_suite(ctx: &Ctx) -> Res {
    let d = ctx.bounds.chern_degree.unwrap_or(10);
    let top = d.min(8);
    let mut out = vec![];
    let p = |x: &chern::Poly| x.to_string();
    let c = Certificate::new("chern-phi-psi", "none", "canonical").bound("degree", d);
    out.push(timed(c, || {
        let g = ChernSeries::generic(d);
        let back = chern::phi(&chern::psi(&g).unwrap());
        back.a.iter().zip(&g.a).filter(|(x, y)| x != y).map(|(x, y)| format!("{} vs {}", p(x), p(y))).collect()
    }));
    let c = Certificate::new("chern-inverse", "none", "canonical").bound("degree", d);
    out.push(timed(c, || {
        let cc = chern::psi(&ChernSeries::generic(d)).unwrap();
        let prod = cc.mul(&cc.inverse());
        if prod == ChernSeries::one(d) {
            vec![]
        } else {
            vec!["c(I)c(−I) ≠ 1".into()]
        }
    }));
    let inst: Vec<(u32, u32)> = (1..=top).flat_map(|ab| (0..=ab).map(move |a| (a, ab - a))).collect();
    out.par_extend(inst.into_par_iter().flat_map_iter(|(a, b)| {
        let c = Certificate::new("chern-claim", "none", "canonical").param("a", a).param("b", b).bound("degree", top);
        let gen = timed(c, || {
            let r = chern::claim_identity_check(a, b, top).unwrap();
            if r.is_zero() {
                vec![]
            } else {
                vec![r.to_string()]
            }
        });
        let c = Certificate::new("chern-claim-line", "none", "canonical").param("a", a).param("b", b).bound("degree", top);
        let line = timed(c, || {
            let (l, r) = chern::claim_sides(&ChernSeries::line(top, chern::X), a, b).unwrap();
            let (gl, gr) = chern::claim_sides(&ChernSeries::generic(top), a, b).unwrap();
            let mut bad = vec![];
            if l != r {
                bad.push(format!("{} vs {}", p(&l), p(&r)));
            }
            // specializing the generic identity agrees with computing on the line bundle
            if gl.subst(&chern::line_subst) != l || gr.subst(&chern::line_subst) != r {
                bad.push("specialization mismatch".into());
            }
            bad
        });
        [gen, line]
    }));
    Ok(out)
}

fn diagram(_ctx: &Ctx) -> Res {
    let p = Pair::new(2, 3);
    let d = format!("{} / {}", p.chow.describe(), p.split.describe());
    let mut out = vec![];
    let seed = 20261017u64;
    let c = Certificate::new("diagram-oracle", &d, "split oracle").param("ops", 1000).param("seed", seed);
    out.push(timed(c, || oracle::run(&p, 1000, seed).failures.into_iter().take(8).collect()));
    for (name, ok) in oracle::relations(&p) {
        let c = Certificate::new("diagram-relation", &d, "rewrite").param("relation", name);
        out.push(c.residual(if ok { vec![] } else { vec!["relation fails".into()] }));
    }
    Ok(out)
}

/// Suites requested on the command line, in canonical order, without repeats.
pub fn select(names: &[String]) -> Result<Vec<String>, SuiteError> {
    if names.is_empty() || names.iter().any(|n| n == "all") {
        return Ok(SUITES.iter().map(|s| s.to_string()).collect());
    }
    let mut seen = HashSet::new();
    for n in names {
        for part in n.split(',') {
            if !SUITES.contains(&part) {
                return Err(SuiteError::Config(format!("unknown suite {part:?}; known: {}", SUITES.join(", "))));
            }
            seen.insert(part.to_string());
        }
    }
    Ok(SUITES.iter().filter(|s| seen.contains(**s)).map(|s| s.to_string()).collect())
}
