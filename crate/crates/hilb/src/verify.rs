//! Operator identities as "left side minus right side" expressions.
//!
//! Each builder returns the difference truncated to the window; an identity holds on
//! all states of weight ≤ w exactly when the canonical expansion of the difference is empty.

use crate::named::{self, at, delta_push, e12, id_diag, j_op, lehn, q_free, vir, NamedError, F1, F2};
use crate::op::{self, glue, mul_free, retag, Op};
use crate::rat::{q, qr, Q};
use crate::surface::{Class, SurfaceDatum};
use crate::wick::{commutator, compose, Window};
use num_traits::{One, Zero};

/// Canonical residual: empty iff the difference vanishes as an operator.
pub fn residual(s: &SurfaceDatum, diff: &Op) -> Op {
    if diff.is_zero() {
        return Op::zero();
    }
    op::expand(s, diff)
}

fn win(w: u32) -> Window {
    Window(Some(w))
}

fn amax(w: u32, other_shift: i32) -> u32 {
    w + other_shift.max(0) as u32
}

fn second(o: &Op) -> Op {
    retag(o, F1, F2)
}

pub fn heis(s: &SurfaceDatum, n: i32, g: &Class, n2: i32, g2: &Class) -> Op {
    let a = op::q_class(s, n, g);
    let b = op::q_class(s, n2, g2);
    let mut d = commutator(s, &a, &b, Window::ALL);
    if n + n2 == 0 {
        d.add_term(vec![], -q(n as i128) * s.pair(g, g2));
    }
    d
}

/// [𝔏_n, q_{n'}] = −n' Δ_*(q_{n+n'}) on S².
pub fn heis_vir(s: &SurfaceDatum, n: i32, n2: i32, w: u32) -> Op {
    let l = lehn(n, amax(w, n2));
    let lhs = commutator(s, &l, &second(&q_free(n2)), win(w));
    if n + n2 == 0 {
        return lhs;
    }
    lhs.sub(&delta_push(s, &q_free(n + n2)).scale(q(-n2 as i128)))
}

/// [𝔏_n(1), q_{n'}(γ)] = −n' q_{n+n'}(γ).
pub fn heis_vir_class(s: &SurfaceDatum, n: i32, n2: i32, g: &Class, w: u32) -> Op {
    let l = at(s, &lehn(n, amax(w, n2)), &s.basis_class(s.unit()));
    let lhs = commutator(s, &l, &op::q_class(s, n2, g), win(w));
    if n + n2 == 0 {
        return lhs;
    }
    lhs.sub(&op::q_class(s, n + n2, g).scale(q(-n2 as i128)))
}

/// [𝔏_n, 𝔏_{n'}] = (n−n')Δ_*𝔏_{n+n'} − (n³−n)/12 δ Id ⊠ Δ_*(e).
pub fn vir_vir(s: &SurfaceDatum, n: i32, n2: i32, w: u32) -> Op {
    let a = lehn(n, amax(w, n2));
    let b = second(&lehn(n2, amax(w, n)));
    let lhs = commutator(s, &a, &b, win(w));
    let mut rhs = delta_push(s, &lehn(n + n2, w)).scale(q((n - n2) as i128));
    if n + n2 == 0 {
        let c = qr((n as i128).pow(3) - n as i128, 12);
        rhs = rhs.sub(&id_diag(s, &s.e_class()).scale(c));
    }
    lhs.sub(&rhs.truncate(w))
}

/// [L_n, L_{n'}] = (n−n')L_{n+n'} − (n³−n)/12 δ b.
pub fn vir_central(s: &SurfaceDatum, n: i32, n2: i32, w: u32) -> Op {
    let lhs = commutator(s, &vir(s, n, amax(w, n2)), &vir(s, n2, amax(w, n)), win(w));
    let mut rhs = vir(s, n + n2, w).scale(q((n - n2) as i128));
    if n + n2 == 0 {
        rhs.add_term(vec![], -qr((n as i128).pow(3) - n as i128, 12) * q(s.b as i128));
    }
    lhs.sub(&rhs.truncate(w))
}

/// [L_n, q_m(γ)] = 0 for γ ∈ R(S).
pub fn commute(s: &SurfaceDatum, n: i32, m: i32, g: &Class, w: u32) -> Op {
    commutator(s, &vir(s, n, amax(w, m)), &op::q_class(s, m, g), win(w))
}

fn jw(s: &SurfaceDatum, n: i32, k: i32, w: u32) -> Result<Op, NamedError> {
    if k < 0 {
        return Ok(Op::zero());
    }
    j_op(s, n, k as u32, w)
}

fn lqw_lhs(s: &SurfaceDatum, n: i32, k: u32, n2: i32, k2: u32, w: u32) -> Result<Op, NamedError> {
    let a = j_op(s, n, k, amax(w, n2))?;
    let b = second(&j_op(s, n2, k2, amax(w, n))?);
    Ok(commutator(s, &a, &b, win(w)))
}

fn e_id(s: &SurfaceDatum) -> Op {
    id_diag(s, &s.e_class())
}

/// The relations among J^k_n, by id: "lqw-2" … "lqw-5".
pub fn lqw(s: &SurfaceDatum, id: &str, n: i32, n2: i32, w: u32) -> Result<Op, NamedError> {
    let (n3, nn) = (n + n2, n as i128);
    let cub = nn.pow(3) - nn;
    let delta = n + n2 == 0;
    Ok(match id {
        "lqw-2" => {
            let mut d = lqw_lhs(s, n, 0, n2, 0, w)?;
            if delta {
                d = d.sub(&id_diag(s, &s.basis_class(s.unit())).scale(q(nn)));
            }
            d
        }
        "lqw-3" => lqw_lhs(s, n, 1, n2, 0, w)?.sub(&delta_push(s, &jw(s, n3, 0, w)?).scale(q(n2 as i128))),
        "lqw-4" => {
            let mut rhs = delta_push(s, &jw(s, n3, 1, w)?).scale(q(2 * n2 as i128));
            if delta {
                rhs = rhs.sub(&e_id(s).scale(qr(cub, 6)));
            }
            lqw_lhs(s, n, 2, n2, 0, w)?.sub(&rhs.truncate(w))
        }
        "lqw-5" => {
            let mut rhs = delta_push(s, &jw(s, n3, 1, w)?).scale(q((n2 - n) as i128));
            if delta {
                rhs = rhs.sub(&e_id(s).scale(qr(cub, 12)));
            }
            lqw_lhs(s, n, 1, n2, 1, w)?.sub(&rhs.truncate(w))
        }
        _ => return Err(NamedError::Unsupported(id.into())),
    })
}

/// [J^k_{±1}, J^2_0] = ∓2Δ_*(J^{k+1}_{±1}).
pub fn lqw_special_a(s: &SurfaceDatum, sign: i32, k: u32, w: u32) -> Result<Op, NamedError> {
    let lhs = lqw_lhs(s, sign, k, 0, 2, w)?;
    let rhs = delta_push(s, &j_op(s, sign, k + 1, w)?).scale(q(-2 * sign as i128));
    Ok(lhs.sub(&rhs.truncate(w)))
}

/// [J^a_1, J^{k−a}_{−1}] = −kΔ_*(J^{k−1}_0) + k(k−1)(k−2)Δ_*(e/12 · J^{k−3}_0), k ≥ 1.
pub fn lqw_special_b(s: &SurfaceDatum, a: u32, k: u32, w: u32) -> Result<Op, NamedError> {
    let lhs = lqw_lhs(s, 1, a, -1, k - a, w)?;
    let kk = k as i128;
    let mut rhs = delta_push(s, &jw(s, 0, k as i32 - 1, w)?).scale(q(-kk));
    let low = jw(s, 0, k as i32 - 3, w)?;
    if !low.is_zero() {
        rhs = rhs.add(&delta_push(s, &mul_free(s, &low, F1, &e12(s))).scale(q(kk * (kk - 1) * (kk - 2))));
    }
    Ok(lhs.sub(&rhs.truncate(w)))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Omega {
    Value(Q),
    /// Both the remainder and the e-term vanish on the window.
    Undetermined,
}

/// Ω from [J^k_n, J^{k'}_{n'}] − (kn'−k'n)Δ_*(J^{k+k'−1}) = Ω·Δ_*(e/12·J^{k+k'−3}).
/// Err(residual) when the remainder is not proportional.
pub fn extract_omega(s: &SurfaceDatum, n: i32, k: u32, n2: i32, k2: u32, w: u32) -> Result<Result<Omega, Op>, NamedError> {
    let lhs = lqw_lhs(s, n, k, n2, k2, w)?;
    let kk = k as i32 * n2 - k2 as i32 * n;
    let main = delta_push(s, &jw(s, n + n2, (k + k2) as i32 - 1, w)?).scale(q(kk as i128)).truncate(w);
    let r = residual(s, &lhs.sub(&main));
    let low = jw(s, n + n2, (k + k2) as i32 - 3, w)?;
    let t = if low.is_zero() { Op::zero() } else { residual(s, &delta_push(s, &mul_free(s, &low, F1, &e12(s))).truncate(w)) };
    if t.is_zero() {
        return Ok(if r.is_zero() { Ok(Omega::Undetermined) } else { Err(r) });
    }
    let (key, tv) = t.sorted().into_iter().next().map(|(k, v)| (k.clone(), *v)).unwrap();
    let ratio = r.terms.get(&key).copied().unwrap_or_else(Q::zero) / tv;
    let rest = r.sub(&t.scale(ratio));
    Ok(if rest.is_zero() { Ok(Omega::Value(ratio)) } else { Err(rest) })
}

/// J^k_0 − k!(𝔊_{k+1} + e/12 · 𝔊_{k−1}).
pub fn j_vs_g(s: &SurfaceDatum, k: u32, w: u32) -> Result<Op, NamedError> {
    let j = j_op(s, 0, k, w)?;
    let mut g = named::g_op(s, k + 1, w)?;
    if k >= 1 {
        g = g.add(&mul_free(s, &named::g_op(s, k - 1, w)?, F1, &e12(s)));
    }
    Ok(j.sub(&g.scale(q(crate::rat::factorial(k)))))
}

/// Two legs glued against the diagonal: X(Δ) for X with free legs 1, 2.
fn at_delta(s: &SurfaceDatum, o: &Op) -> Op {
    glue(s, o, F1, F2)
}

fn product(s: &SurfaceDatum, a: &Op, b: &Op, w: u32) -> Op {
    compose(s, a, &second(b), win(w))
}

/// q_m q_n(Δ) as a composition.
pub fn qq_delta(s: &SurfaceDatum, m: i32, n: i32, w: u32) -> Op {
    at_delta(s, &product(s, &q_free(m), &q_free(n), w + 2 * (m.abs() + n.abs()) as u32))
}

/// [q_m q_n(Δ), q_k(γ)] = mδ_{m+k} q_n(γ) + nδ_{n+k} q_m(γ).
pub fn oi(s: &SurfaceDatum, m: i32, n: i32, k: i32, g: &Class, w: u32) -> Op {
    let lhs = commutator(s, &qq_delta(s, m, n, w), &op::q_class(s, k, g), win(w));
    let mut rhs = Op::zero();
    if m + k == 0 {
        rhs = rhs.add(&op::q_class(s, n, g).scale(q(m as i128)));
    }
    if n + k == 0 {
        rhs = rhs.add(&op::q_class(s, m, g).scale(q(n as i128)));
    }
    lhs.sub(&rhs)
}

/// The four-term commutator of two quadratic Δ-operators.
pub fn oioi(s: &SurfaceDatum, m: i32, n: i32, m2: i32, n2: i32, w: u32) -> Op {
    let qq = |a: i32, b: i32| qq_delta(s, a, b, w);
    let lhs = commutator(s, &qq(m, n), &qq(m2, n2), win(w));
    let mut rhs = Op::zero();
    let mut add = |c: i32, cond: bool, a: i32, b: i32| {
        if cond && c != 0 {
            rhs = rhs.add(&qq(a, b).scale(q(c as i128)));
        }
    };
    add(m, m + m2 == 0, n, n2);
    add(m, m + n2 == 0, m2, n);
    add(n, n + m2 == 0, m, n2);
    add(n, n + n2 == 0, m2, m);
    lhs.sub(&rhs.truncate(w))
}

/// The two commutators in the chain expressing 𝔏_0-quadratics through Heis.
pub fn prop2_first(s: &SurfaceDatum, m: i32, w: u32) -> Op {
    let big = w + 2 * m.unsigned_abs();
    let ll = at_delta(s, &product(s, &lehn(0, big), &lehn(0, big), big)).scale(-Q::one());
    let lhs = commutator(s, &ll, &op::q_class(s, m, &s.basis_class(s.unit())), win(w));
    let ql = at_delta(s, &product(s, &q_free(m), &lehn(0, big), big));
    let mm = m as i128;
    let rhs = ql.scale(q(2 * mm)).sub(&op::q_class(s, m, &s.e_class()).scale(q(mm * mm)));
    lhs.sub(&rhs.truncate(w))
}

pub fn prop2_second(s: &SurfaceDatum, m: i32, n: i32, w: u32) -> Op {
    let big = w + 2 * (m.abs() + n.abs()) as u32;
    let ql = at_delta(s, &product(s, &q_free(m), &lehn(0, big), big));
    let lhs = commutator(s, &ql, &op::q_class(s, n, &s.basis_class(s.unit())), win(w));
    let mut rhs = qq_delta(s, m, n, w).scale(q(-n as i128));
    if m + n == 0 {
        rhs = rhs.add(&at(s, &lehn(0, big), &s.basis_class(s.unit())).scale(q(m as i128)));
    }
    lhs.sub(&rhs.truncate(w))
}

pub use named::g_op;

/// Failures of [q_n(γ), q_{n'}(γ')] w = n δ_{n+n'} ⟨γ, γ'⟩ w over every basis monomial w of
/// weight ≤ max_weight, every pair of basis labels and 0 < |n|, |n'| ≤ max_mode.
/// Returns (checks, failing (n, γ, n', γ', state)).
pub fn heisenberg_on_states(s: &SurfaceDatum, max_mode: i32, max_weight: u32) -> (usize, Vec<(i32, String, i32, String, String)>) {
    use crate::fock::{apply_q, basis};
    use rayon::prelude::*;
    let labels: Vec<_> = if s.mode.is_split() { s.labels().collect() } else { s.algebraic_labels() };
    let ops: Vec<(i32, crate::surface::Label, Class)> = (-max_mode..=max_mode)
        .filter(|&n| n != 0)
        .flat_map(|n| labels.iter().map(move |&l| (n, l)))
        .map(|(n, l)| (n, l, s.basis_class(l)))
        .collect();
    let states: Vec<op::Key> = (0..=max_weight).flat_map(|w| basis(s, w)).collect();
    let per: Vec<(usize, Vec<(i32, String, i32, String, String)>)> = states
        .par_iter()
        .map(|k| {
            let w = Op::single(Q::one(), k.clone());
            let first: Vec<Op> = ops.iter().map(|(n, _, g)| apply_q(s, *n, g, &w).unwrap()).collect();
            let m: Vec<Vec<Op>> = ops.iter().map(|(n, _, g)| first.iter().map(|v| if v.is_zero() { Op::zero() } else { apply_q(s, *n, g, v).unwrap() }).collect()).collect();
            let mut bad = vec![];
            let mut checks = 0;
            for a in 0..ops.len() {
                for b in a + 1..ops.len() {
                    checks += 1;
                    let (na, la, ga) = &ops[a];
                    let (nb, lb, gb) = &ops[b];
                    let ok = if na + nb == 0 {
                        m[a][b].sub(&m[b][a]).sub(&w.scale(q(*na as i128) * s.pair(ga, gb))).is_zero()
                    } else {
                        m[a][b] == m[b][a]
                    };
                    if !ok {
                        bad.push((*na, s.name(*la).to_string(), *nb, s.name(*lb).to_string(), op::fmt_key(s, k)));
                    }
                }
            }
            (checks, bad)
        })
        .collect();
    let checks = per.iter().map(|x| x.0).sum();
    (checks, per.into_iter().flat_map(|x| x.1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{make_surface, SurfaceConfig};

    fn k3() -> SurfaceDatum {
        make_surface(&SurfaceConfig::k3(1, 21)).unwrap()
    }

    #[test]
    fn heisenberg_virasoro() {
        let s = k3();
        for (n, n2) in [(1, -2), (-2, 2), (0, 3), (2, 1)] {
            assert!(residual(&s, &heis_vir(&s, n, n2, 6)).is_zero(), "{n} {n2}");
        }
        for (n, n2) in [(2, -2), (1, -1), (3, -1), (0, 0)] {
            assert!(residual(&s, &vir_vir(&s, n, n2, 6)).is_zero(), "{n} {n2}");
        }
    }

    #[test]
    fn virasoro_central_charge() {
        let s = k3();
        for (n, n2) in [(2, -2), (3, -1), (1, -1)] {
            assert!(residual(&s, &vir_central(&s, n, n2, 6)).is_zero(), "{n} {n2}");
        }
        let l = s.basis_class(s.picard(0));
        assert!(residual(&s, &commute(&s, 2, -1, &l, 6)).is_zero());
    }

    #[test]
    fn lqw_small() {
        let s = k3();
        for id in ["lqw-2", "lqw-3", "lqw-4", "lqw-5"] {
            for (n, n2) in [(1, -1), (2, -1), (0, 1)] {
                let r = residual(&s, &lqw(&s, id, n, n2, 5).unwrap());
                assert!(r.is_zero(), "{id} {n} {n2}: {}", op::fmt_op(&s, &r));
            }
        }
    }

    #[test]
    fn perturbed_sides_fail() {
        let s = k3();
        // dropping the central term or flipping a sign must leave a residual
        let full = lqw_lhs(&s, 2, 2, -2, 0, 5).unwrap();
        let main = delta_push(&s, &jw(&s, 0, 1, 5).unwrap()).scale(q(-4)).truncate(5);
        assert!(!residual(&s, &full.sub(&main)).is_zero());
        let hv = commutator(&s, &lehn(1, 7), &second(&q_free(-2)), win(5));
        assert!(!residual(&s, &hv.sub(&delta_push(&s, &q_free(-1)).scale(q(-2)))).is_zero());
        assert!(!residual(&s, &hv).is_zero());
        let lc = commutator(&s, &vir(&s, 2, 5), &vir(&s, -2, 7), win(5));
        assert!(!residual(&s, &lc.sub(&vir(&s, 0, 5).scale(q(4)).truncate(5))).is_zero());
    }

    #[test]
    fn formula_j_matches_lehn() {
        let s = k3();
        for k in [1, 2] {
            assert!(residual(&s, &j_vs_g(&s, k, 8).unwrap()).is_zero());
        }
        // including the empty partition at k = 1 breaks both checks
        let lit = named::j_op_literal(&s, 0, 1, 8).unwrap();
        assert!(!residual(&s, &lit.sub(&named::g_op(&s, 2, 8).unwrap())).is_zero());
    }

    #[test]
    fn quadratic_commutators() {
        let s = k3();
        let l = s.basis_class(s.picard(0));
        assert!(residual(&s, &oi(&s, 2, 3, -2, &l, 6)).is_zero());
        assert!(residual(&s, &oioi(&s, -2, 3, 2, 1, 6)).is_zero());
        assert!(residual(&s, &prop2_first(&s, 2, 5)).is_zero());
        assert!(residual(&s, &prop2_second(&s, 2, -2, 5)).is_zero());
    }
}
