use num::{One, Zero};
use proptest::prelude::*;

use orbijac::critical::{newton_polygon, newton_refine, solve_22r_hyperplane, KSeries, NumberField};
use orbijac::flowcc::{apply, compose, invert, CoordinateChange};
use orbijac::geometry::OrbifoldData;
use orbijac::jacobian::{full_generators, rank, Certificate, FullReducer};
use orbijac::potential::{w_22r, w_lead};
use orbijac::{q, qr, Mono, NovikovScalar, TateSeries, Var, Q};

fn rat() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| qr(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Q> {
    rat().prop_filter("nonzero", |x| !x.is_zero())
}

fn exponent() -> impl Strategy<Value = Q> {
    (-8i64..=24, 1i64..=4).prop_map(|(n, d)| qr(n, d))
}

/// Finite scalar, optionally with a big-O.
fn scalar() -> impl Strategy<Value = NovikovScalar> {
    (prop::collection::vec((exponent(), rat()), 0..4), prop::option::of(20i64..60))
        .prop_map(|(t, p)| NovikovScalar::from_terms(t, p.map(q)))
}

fn exact_scalar() -> impl Strategy<Value = NovikovScalar> {
    prop::collection::vec((exponent(), rat()), 0..4).prop_map(|t| NovikovScalar::from_terms(t, None))
}

fn mono(max: u32) -> impl Strategy<Value = Mono> {
    (0..=max, 0..=max, 0..=max).prop_map(|(i, j, k)| Mono::new(i, j, k))
}

fn poly(max: u32, exps: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = TateSeries> {
    sparse_poly(max, exps, 5)
}

fn sparse_poly(max: u32, exps: std::ops::RangeInclusive<i64>, terms: usize) -> impl Strategy<Value = TateSeries> {
    prop::collection::vec((mono(max), nonzero_rat(), exps), 0..terms).prop_map(|v| {
        let mut s = TateSeries::zero();
        for (m, c, e) in v {
            s.add_term(m, &NovikovScalar::monomial(c, q(e)));
        }
        s
    })
}

/// Coordinate change with rational linear part and tails of valuation above `min_val`.
fn coordinate_change(min_val: i64) -> impl Strategy<Value = CoordinateChange> {
    // few low-degree terms: exact substitution grows quickly
    let tail = move || sparse_poly(1, min_val + 2..=min_val + 6, 3);
    ([nonzero_rat(), nonzero_rat(), nonzero_rat()], [tail(), tail(), tail()]).prop_map(|(c, u)| CoordinateChange::new(c, u).unwrap())
}

fn triple() -> impl Strategy<Value = [u32; 3]> {
    prop::sample::select(vec![[2, 2, 2], [2, 2, 5], [2, 3, 3], [2, 3, 7], [2, 4, 4], [3, 3, 3], [3, 4, 5]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn novikov_ring_laws(a in exact_scalar(), b in exact_scalar(), c in exact_scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_exact_zero());
    }

    #[test]
    fn novikov_precision_rules(a in scalar(), b in scalar()) {
        let pa = a.precision().clone();
        let pb = b.precision().clone();
        let min = |x: &Option<Q>, y: &Option<Q>| match (x, y) { (Some(x), Some(y)) => Some(x.min(y).clone()), (Some(x), None) | (None, Some(x)) => Some(x.clone()), _ => None };
        prop_assert_eq!(a.add(&b).precision().clone(), min(&pa, &pb));
        // absolute precision of a product: min(pa + val b, pb + val a)
        if let (Some(va), Some(vb)) = (a.val(), b.val()) {
            let ea = pa.as_ref().map(|p| p + &vb);
            let eb = pb.as_ref().map(|p| p + &va);
            prop_assert_eq!(a.mul(&b).precision().clone(), min(&ea, &eb));
        }
    }

    #[test]
    fn novikov_inverse(a in exact_scalar(), cap in 10i64..40) {
        prop_assume!(!a.is_exact_zero());
        let cap = q(cap);
        let inv = a.invert_with(&cap).unwrap();
        let v = a.val().unwrap();
        // a * a^-1 = 1 up to the precision the product can carry
        prop_assert!(a.mul(&inv).eq_mod(&NovikovScalar::one(), &(&cap + &v)));
    }

    #[test]
    fn tate_leibniz(p in poly(3, -4..=8), r in poly(3, -4..=8)) {
        for v in Var::ALL {
            prop_assert_eq!(p.mul(&r).partial(v), p.partial(v).mul(&r).add(&p.mul(&r.partial(v))));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn apply_is_a_ring_map(f in coordinate_change(0), p in poly(2, 0..=6), r in poly(2, 0..=6)) {
        let cap = q(30);
        let lhs = apply(&f, &p.mul(&r)).unwrap();
        let rhs = apply(&f, &p).unwrap().mul(&apply(&f, &r).unwrap());
        prop_assert!(lhs.eq_mod(&rhs, &cap));
        prop_assert!(apply(&f, &p.add(&r)).unwrap().eq_mod(&apply(&f, &p).unwrap().add(&apply(&f, &r).unwrap()), &cap));
    }

    #[test]
    fn compose_matches_apply(f in coordinate_change(0), g in coordinate_change(0), p in poly(2, 0..=6)) {
        let cap = q(30);
        let fg = compose(&f, &g).unwrap();
        let lhs = apply(&fg, &p).unwrap();
        let rhs = apply(&g, &apply(&f, &p).unwrap()).unwrap();
        prop_assert!(lhs.eq_mod(&rhs, &cap));
    }

    #[test]
    fn inverse_is_two_sided(f in coordinate_change(0)) {
        let cap = q(16);
        let g = invert(&f, &cap).unwrap();
        for h in [compose(&f, &g).unwrap(), compose(&g, &f).unwrap()] {
            prop_assert!(h.c.iter().all(|c| c.is_one()));
            prop_assert!(h.u.iter().all(|u| u.eq_mod(&TateSeries::zero(), &cap)));
        }
    }

    #[test]
    fn reduction_reconstructs(t in triple(), p in poly(6, 0..=12)) {
        let w = w_lead(&OrbifoldData::new(t[0], t[1], t[2]).unwrap());
        let r = FullReducer::new(&w).unwrap().reduce(&p, &q(60)).unwrap();
        prop_assert!(r.defect(&p, &full_generators(&w)).is_zero());
        prop_assert!(r.certified_precision >= q(44));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// A coordinate change with small tails leaves the Jacobian rank alone.
    #[test]
    fn rank_is_invariant(t in triple(), f in coordinate_change(8)) {
        let f = CoordinateChange::new([Q::one(), Q::one(), Q::one()], f.u).unwrap();
        let mut w = w_lead(&OrbifoldData::new(t[0], t[1], t[2]).unwrap());
        let before = rank(&w, &q(80)).unwrap().rank;
        w.series = apply(&f, &w.series).unwrap().truncate(&q(120));
        let after = rank(&w, &q(80)).unwrap();
        prop_assert_eq!(before, after.rank);
        prop_assert_eq!(after.certificate, Certificate::Leading);
    }

    /// Slopes of the Newton polygon of `prod (z - c_i T^v_i)` are the negated `v_i`.
    #[test]
    fn polygon_recovers_root_valuations(roots in prop::collection::vec((nonzero_rat(), -6i64..12), 1..6)) {
        let mut coeffs = vec![NovikovScalar::one()];
        for (c, v) in &roots {
            let root = NovikovScalar::monomial(c.clone(), q(*v));
            let mut next = vec![NovikovScalar::zero(); coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(a);
                next[i] = next[i].sub(&a.mul(&root));
            }
            coeffs = next;
        }
        let mut got: Vec<Q> = vec![];
        for (s, e, slope) in newton_polygon(&coeffs) {
            for _ in s..e {
                got.push(-slope.clone());
            }
        }
        let mut want: Vec<Q> = roots.iter().map(|(_, v)| q(*v)).collect();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    /// Newton refinement from a truncated critical point never loses residual.
    #[test]
    fn refinement_is_monotone(ln in 1i64..8, trunc in 12i64..30) {
        let lambda = qr(ln, 4);
        let ck = vec![Q::one()];
        let w = w_22r(3, &lambda, &ck).unwrap();
        let (pts, _) = solve_22r_hyperplane(3, &lambda, &ck, &q(60)).unwrap();
        let f = NumberField::rational();
        for p in pts {
            let seed = p.coords.clone().map(|c| {
                let n = c.to_novikov().unwrap().truncate(&q(trunc));
                KSeries::from_novikov(&f, &NovikovScalar::from_terms(n.terms().to_vec(), None))
            });
            let out = newton_refine(&w, &seed, &q(60)).unwrap();
            let increasing = out.history.windows(2).all(|h| match (&h[0], &h[1]) {
                (Some(a), Some(b)) => a < b,
                (Some(_), None) => true,
                _ => false,
            });
            prop_assert!(increasing, "history {:?}", out.history);
            prop_assert!(out.residual_valuation.as_ref().is_none_or(|v| v >= &q(60)));
        }
    }
}
