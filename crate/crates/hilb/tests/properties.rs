use hilb::chern::{self, ChernSeries, Poly};
use hilb::dsl::{self, Atom, Expr};
use hilb::fock::{self, FockVector};
use hilb::op::{self, Op};
use hilb::oracle::{self, Pair};
use hilb::rat::{q, qr, Q};
use hilb::rep::dop::{self, RadOp};
use hilb::rep::shapovalov::{self, Verma};
use hilb::rep::sp;
use hilb::surface::{make_surface, SurfaceConfig, SurfaceDatum};
use hilb::wick;
use proptest::prelude::*;
use std::sync::OnceLock;

fn k3() -> &'static SurfaceDatum {
    static S: OnceLock<SurfaceDatum> = OnceLock::new();
    S.get_or_init(|| make_surface(&SurfaceConfig::k3(1, 21)).unwrap())
}

fn pair_b2() -> &'static (SurfaceDatum, SurfaceDatum) {
    static S: OnceLock<(SurfaceDatum, SurfaceDatum)> = OnceLock::new();
    S.get_or_init(|| (make_surface(&SurfaceConfig::k3(1, 2)).unwrap(), make_surface(&SurfaceConfig::split(1, 2)).unwrap()))
}

fn mode() -> impl Strategy<Value = i32> {
    prop_oneof![-4..=-1i32, 1..=4i32]
}

fn label() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("1"), Just("l"), Just("c")]
}

/// A basis state: creation singletons and transcendental pairs.
fn state(s: &SurfaceDatum, singles: &[(i32, &str)], pairs: &[(i32, i32)]) -> FockVector {
    fock::fock_monomial(s, singles, pairs).unwrap()
}

fn singles() -> impl Strategy<Value = Vec<(i32, &'static str)>> {
    prop::collection::vec((1..=3i32, label()), 0..3)
}

fn tr_pairs() -> impl Strategy<Value = Vec<(i32, i32)>> {
    prop::collection::vec((1..=3i32, 1..=3i32).prop_map(|(a, b)| (a.min(b), a.max(b))), 0..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // two routes to q_n(γ)·w: the Wick engine and the direct Fock action
    #[test]
    fn fock_action_matches_engine(n in mode(), l in label(), sg in singles(), ps in tr_pairs()) {
        let s = k3();
        let w = state(s, &sg, &ps);
        let g = s.basis_class(s.label(l).unwrap());
        let direct = fock::apply_q(s, n, &g, &w).unwrap();
        let engine = op::expand(s, &wick::apply(s, &op::q_class(s, n, &g), &w));
        prop_assert_eq!(op::expand(s, &direct), engine);
    }

    #[test]
    fn expansion_is_idempotent(ms in prop::collection::vec(mode(), 1..4), sg in singles(), ps in tr_pairs()) {
        let s = k3();
        let mut w = state(s, &sg, &ps);
        for m in ms {
            w = wick::apply(s, &op::q_class(s, m, &s.basis_class(s.unit())), &w);
        }
        let once = op::expand(s, &w);
        prop_assert_eq!(op::expand(s, &once), once);
    }

    // replacing Δ^tr pairs by Künneth sums commutes with the D-operators
    #[test]
    fn split_intertwines_d_action(m in mode().prop_filter("", |x| x.abs() <= 3), n in mode().prop_filter("", |x| x.abs() <= 3), ps in tr_pairs()) {
        let (s, sp) = pair_b2();
        let w = state(s, &[], &ps);
        let lhs = dop::rad_apply(s, &dop::d_op(s, m, n), &RadOp::rational(w.clone()));
        let ws = fock::to_split_fock(s, sp, &w).unwrap();
        let rhs = dop::rad_apply(sp, &dop::d_op(sp, m, n), &RadOp::rational(ws));
        let l: Vec<(u64, Op)> = lhs.parts().map(|(r, o)| (*r, fock::to_split_fock(s, sp, o).unwrap())).filter(|(_, o)| !o.is_zero()).collect();
        let r: Vec<(u64, Op)> = rhs.parts().map(|(r, o)| (*r, op::expand(sp, o))).filter(|(_, o)| !o.is_zero()).collect();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn dsl_round_trip(e in expr()) {
        let text = e.to_string();
        let back = dsl::parse_expr(&text).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }

    // ch is additive, so c(V ⊕ W) = c(V)·c(W)
    #[test]
    fn chern_class_is_multiplicative(d in 1u32..7) {
        let v = ChernSeries::line(d, chern::X);
        let w = ChernSeries::line(d, chern::Y);
        // Ψ only sees positive degrees; its rank slot is normalized to 1
        let mut vw = v.add(&w);
        vw.a[0] = Poly::constant(q(1));
        let sum = chern::psi(&vw).unwrap();
        prop_assert_eq!(sum, chern::psi(&v).unwrap().mul(&chern::psi(&w).unwrap()));
    }

    #[test]
    fn phi_inverts_psi(d in 1u32..9) {
        let g = ChernSeries::generic(d);
        prop_assert_eq!(chern::phi(&chern::psi(&g).unwrap()), g);
    }

    #[test]
    fn shapovalov_form_is_symmetric(c in -6i128..30, h in -4i128..5, level in 1u32..5) {
        let mut m = Verma::new(q(c), qr(h, 2));
        let ws = shapovalov::words(level, 1);
        for x in &ws {
            for y in &ws {
                prop_assert_eq!(m.form(x, y), m.form(y, x));
            }
        }
    }

    #[test]
    fn sp_jacobi(a in gen(), b in gen(), c in gen()) {
        let g = |(m, n): (i32, i32)| sp::sp_generator(m, n, 3).unwrap();
        let (x, y, z) = (g(a), g(b), g(c));
        let one = q(1);
        let j = x.bracket(&y.bracket(&z)).lin(one, &y.bracket(&z.bracket(&x)), one).lin(one, &z.bracket(&x.bracket(&y)), one);
        prop_assert!(j.is_zero());
        prop_assert!(x.bracket(&y).in_sp());
    }

    #[test]
    fn oracle_random_seeds(seed in any::<u64>()) {
        let p = Pair::new(1, 2);
        let r = oracle::run(&p, 20, seed);
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures);
    }
}

fn gen() -> impl Strategy<Value = (i32, i32)> {
    let i = prop_oneof![-3..=-1i32, 1..=3i32];
    (i.clone(), i)
}

fn coef() -> impl Strategy<Value = Q> {
    (-5i128..=5, 1i128..=4).prop_filter("nonzero", |(a, _)| *a != 0).prop_map(|(a, b)| qr(a, b))
}

fn atom() -> impl Strategy<Value = Atom> {
    let leaf = prop_oneof![
        (mode(), label()).prop_map(|(n, c)| Atom::Q(n, c.to_string())),
        (-4..=4i32).prop_map(Atom::L),
        (-4..=4i32).prop_map(Atom::Lehn),
        (-3..=3i32, 0..=3u32).prop_map(|(n, k)| Atom::J(n, k)),
        (0..=4u32, label()).prop_map(|(k, c)| Atom::G(k, c.to_string())),
        (mode(), mode()).prop_map(|(m, n)| Atom::D(m, n)),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        let term = (coef(), prop::collection::vec(inner, 1..3));
        let e = prop::collection::vec(term, 1..3).prop_map(Expr).boxed();
        (e.clone(), e).prop_map(|(a, b)| Atom::Br(Box::new(a), Box::new(b)))
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    prop::collection::vec((coef(), prop::collection::vec(atom(), 1..4)), 1..4).prop_map(Expr)
}

// The Fock-model Virasoro operators on the Δ^tr sector reproduce the Verma Gram matrix at c = b, h = 0:
// ⟨x, y⟩ is the vacuum coefficient of L_{−x_r}⋯L_{−x_1} L_{y_1}⋯L_{y_s} v.
#[test]
fn verma_gram_matches_fock_model() {
    let s = make_surface(&SurfaceConfig::k3(20, 2)).unwrap();
    for level in 1..=4u32 {
        let ws = shapovalov::words(level, 1);
        let apply_word = |w: &[u32], sign: i32, v: &Op| -> Op {
            let mut v = v.clone();
            for &a in w.iter().rev() {
                let n = sign * a as i32;
                v = op::expand(&s, &wick::apply(&s, &hilb::named::vir(&s, n, 2 * level), &v));
            }
            v
        };
        let fock_gram: Vec<Vec<Q>> = ws
            .iter()
            .map(|x| {
                ws.iter()
                    .map(|y| {
                        let v = apply_word(y, 1, &fock::vacuum());
                        let rev: Vec<u32> = x.iter().rev().copied().collect();
                        let back = apply_word(&rev, -1, &v);
                        back.terms.get(&vec![]).copied().unwrap_or(q(0))
                    })
                    .collect()
            })
            .collect();
        assert_eq!(fock_gram, shapovalov::shapovalov_gram(q(2), level, false), "level {level}");
    }
}

#[test]
fn chern_series_to_degree_ten() {
    let g = ChernSeries::generic(10);
    let c = chern::psi(&g).unwrap();
    assert_eq!(c.mul(&c.inverse()), ChernSeries::one(10));
    let p: &Poly = &chern::claim_identity_check(3, 5, 8).unwrap();
    assert!(p.is_zero());
}
