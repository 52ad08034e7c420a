//! Property suites: order-theoretic invariants of the surface model, the
//! agreement of independent rule formulations, and the structural fast paths
//! against their windowed brute-force counterparts.

use proptest::prelude::*;

use discarc::homext::{
    composite_nonzero, ext_dim, factors_through, hom_dim, hom_dim_source_rule,
    killed_by_triangulation, killed_by_triangulation_in_window,
};
use discarc::index::{approximation_triangle, index, min_right_approximation};
use discarc::oracle::{enumerate_arcs, verify_approximation, Window};
use discarc::surface::{in_interval, Arc, MarkedPoint, ModelParams, Obj};
use discarc::triangles::{extension_triangle, verify_triangle_window};
use discarc::triangulation::fountain_triangulation;

fn point_strategy(n: u32, w: i64) -> impl Strategy<Value = MarkedPoint> {
    (0..n, -w..=w, any::<bool>()).prop_map(|(j, k, acc)| {
        if acc {
            MarkedPoint::acc(j)
        } else {
            MarkedPoint::reg(j, k)
        }
    })
}

fn arc_strategy(n: u32, w: i64) -> impl Strategy<Value = Arc> {
    (point_strategy(n, w), point_strategy(n, w))
        .prop_filter_map("valid arc", |(p, q)| Arc::new(p, q).ok())
}

proptest! {
    #[test]
    fn successor_predecessor_inverse(p in point_strategy(3, 12)) {
        prop_assert_eq!(p.successor().predecessor(), p);
        prop_assert_eq!(p.predecessor().successor(), p);
        if p.is_accumulation() {
            prop_assert_eq!(p.successor(), p);
        }
    }

    #[test]
    fn open_intervals_partition(
        a in point_strategy(2, 8),
        b in point_strategy(2, 8),
        x in point_strategy(2, 8),
    ) {
        prop_assume!(a != b && x != a && x != b);
        let one = in_interval(x, a, b, false, false);
        let two = in_interval(x, b, a, false, false);
        prop_assert!(one != two, "{x} must lie in exactly one of ({a},{b}) and ({b},{a})");
    }

    #[test]
    fn suspension_inverse(c in arc_strategy(2, 8), k in -5i64..=5) {
        prop_assert_eq!(c.suspend(k).suspend(-k), c);
    }

    #[test]
    fn crossing_symmetric_irreflexive(x in arc_strategy(2, 7), y in arc_strategy(2, 7)) {
        prop_assert!(!x.crosses_transversely(&x));
        prop_assert_eq!(x.crosses_transversely(&y), y.crosses_transversely(&x));
    }

    #[test]
    fn hammock_rules_agree(b in arc_strategy(2, 6), c in arc_strategy(2, 6)) {
        prop_assert_eq!(hom_dim(&b, &c), hom_dim_source_rule(&b, &c));
    }

    #[test]
    fn ext_is_hom_into_suspension(c in arc_strategy(2, 6), a in arc_strategy(2, 6)) {
        prop_assert_eq!(ext_dim(&c, &a), hom_dim(&c, &a.suspend(1)));
    }

    #[test]
    fn hom_is_suspension_invariant(b in arc_strategy(2, 6), c in arc_strategy(2, 6), k in -3i64..=3) {
        prop_assert_eq!(hom_dim(&b, &c), hom_dim(&b.suspend(k), &c.suspend(k)));
    }

    #[test]
    fn factorization_endpoints(b in arc_strategy(1, 7), c in arc_strategy(1, 7), s in arc_strategy(1, 7)) {
        if hom_dim(&b, &c) == 1 && factors_through(&b, &c, &s).unwrap() {
            prop_assert_eq!(hom_dim(&b, &s), 1);
            prop_assert_eq!(hom_dim(&s, &c), 1);
        }
    }

    #[test]
    fn extension_triangles_pass_window(c in arc_strategy(1, 4), a in arc_strategy(1, 4)) {
        prop_assume!(ext_dim(&c, &a) == 1);
        let params = ModelParams::new(1).unwrap();
        let t = extension_triangle(&c, &a).unwrap();
        let rep = verify_triangle_window(&t, params, Window(8));
        prop_assert!(rep.pass(), "{} failed at {:?}", t, rep.failures.first());
    }

    #[test]
    fn structural_kill_matches_window(
        c in arc_strategy(1, 4),
        a in arc_strategy(1, 4),
        flip_at in -3i64..=3,
        accumulation_base in any::<bool>(),
    ) {
        prop_assume!(hom_dim(&c, &a.suspend(1)) == 1);
        let params = ModelParams::new(1).unwrap();
        let base = if accumulation_base { MarkedPoint::acc(0) } else { MarkedPoint::reg(0, 0) };
        let tri = fountain_triangulation(params, base);
        let tri = match tri.flip(&Arc::new(base, MarkedPoint::reg(0, flip_at)).unwrap_or(
            Arc::new(MarkedPoint::reg(0, 5), MarkedPoint::reg(0, 8)).unwrap(),
        )) {
            Ok((t, _)) => t,
            Err(_) => tri,
        };
        let target = a.suspend(1);
        let structural = killed_by_triangulation(&c, &target, &tri);
        let windowed = killed_by_triangulation_in_window(&c, &target, &tri, Window(9));
        // The window is wide enough for these endpoints: the two answers agree.
        prop_assert_eq!(structural, windowed);
    }

    #[test]
    fn approximations_verify_on_sampled_arcs(c in arc_strategy(1, 4), regular_base in any::<bool>()) {
        let params = ModelParams::new(1).unwrap();
        let base = if regular_base { MarkedPoint::reg(0, 0) } else { MarkedPoint::acc(0) };
        let tri = fountain_triangulation(params, base);
        let x0 = min_right_approximation(&tri, &c);
        prop_assert!(verify_approximation(&tri, &c, &x0, Window(8)).passed());
        let t = approximation_triangle(&tri, &c).unwrap();
        prop_assert!(verify_triangle_window(&t, params, Window(8)).pass());
    }

    #[test]
    fn index_additive_over_sums(c in arc_strategy(2, 4), d in arc_strategy(2, 4)) {
        let params = ModelParams::new(2).unwrap();
        let tri = fountain_triangulation(params, MarkedPoint::acc(1));
        let sum = index(&tri, &Obj::from_arcs(vec![c, d])).unwrap();
        let split = index(&tri, &Obj::single(c))
            .unwrap()
            .plus(&index(&tri, &Obj::single(d)).unwrap())
            .unwrap();
        prop_assert_eq!(sum, split);
    }

    #[test]
    fn flip_involution(k in -4i64..=4, regular_base in any::<bool>()) {
        let params = ModelParams::new(1).unwrap();
        let base = if regular_base { MarkedPoint::reg(0, 0) } else { MarkedPoint::acc(0) };
        let tri = fountain_triangulation(params, base);
        let Ok(arc) = Arc::new(base, MarkedPoint::reg(0, k)) else { return Ok(()) };
        let Ok((once, quad)) = tri.flip(&arc) else { return Ok(()) };
        let (twice, _) = once.flip(&quad.y).unwrap();
        prop_assert!(twice.same_arc_set(&tri));
    }
}

/// Factorization chains compose: if b → c factors through s and s → c factors
/// through t, then b → c factors through t. Enumerated over a window.
#[test]
fn factorization_chain_transitivity() {
    let params = ModelParams::new(1).unwrap();
    let arcs = enumerate_arcs(params, Window(5));
    let mut checked = 0usize;
    for b in &arcs {
        for c in &arcs {
            if hom_dim(b, c) != 1 {
                continue;
            }
            for s in &arcs {
                if !factors_through(b, c, s).unwrap() || hom_dim(s, c) != 1 {
                    continue;
                }
                for t in &arcs {
                    if factors_through(s, c, t).unwrap() {
                        checked += 1;
                        assert!(
                            factors_through(b, c, t).unwrap(),
                            "chain {b} -> {s} -> {t} -> {c} broke transitivity"
                        );
                    }
                }
                // One inner witness per (b, c, s) keeps the run fast.
                break;
            }
        }
    }
    assert!(checked > 1000, "the window must exercise real chains, got {checked}");
}

/// Composites agree with direct factorization bookkeeping on a window.
#[test]
fn composites_match_factorization() {
    let params = ModelParams::new(1).unwrap();
    let arcs = enumerate_arcs(params, Window(3));
    for a in &arcs {
        for b in &arcs {
            if hom_dim(a, b) != 1 {
                continue;
            }
            for c in &arcs {
                if hom_dim(b, c) != 1 {
                    continue;
                }
                let got = composite_nonzero(a, b, c).unwrap();
                let expect = hom_dim(a, c) == 1 && factors_through(a, c, b).unwrap();
                assert_eq!(got, expect);
            }
        }
    }
}

/// Indices of rigid objects with one or two summands over Window(4) are
/// pairwise distinct.
#[test]
fn index_distinguishes_small_rigid_objects() {
    let params = ModelParams::new(1).unwrap();
    let tri = fountain_triangulation(params, MarkedPoint::reg(0, 0));
    let arcs = enumerate_arcs(params, Window(4));
    let mut objects: Vec<Obj> = arcs.iter().map(|a| Obj::single(*a)).collect();
    for (i, a) in arcs.iter().enumerate() {
        for b in arcs.iter().skip(i) {
            objects.push(Obj::from_arcs(vec![*a, *b]));
        }
    }
    objects.retain(discarc::index::is_rigid_object);
    objects.sort();
    objects.dedup();
    let mut seen = std::collections::BTreeMap::new();
    for obj in &objects {
        let v = index(&tri, obj).unwrap();
        let key: Vec<(Arc, i64)> = v.coefficients().map(|(a, c)| (*a, c)).collect();
        if let Some(other) = seen.insert(key, obj.clone()) {
            panic!("rigid objects {obj} and {other} share an index");
        }
    }
    assert!(objects.len() > 400, "window must provide real coverage");
}

/// Oracle monotonicity: an approximation verified on a window stays verified
/// on the enlarged window.
#[test]
fn oracle_window_monotonicity() {
    let params = ModelParams::new(2).unwrap();
    let tri = fountain_triangulation(params, MarkedPoint::acc(1));
    for c in enumerate_arcs(params, Window(2)) {
        let x0 = min_right_approximation(&tri, &c);
        let small = verify_approximation(&tri, &c, &x0, Window(6)).passed();
        let large = verify_approximation(&tri, &c, &x0, Window(8)).passed();
        assert!(
            !small || large,
            "window soundness alarm for {c}: pass at 6 but fail at 8"
        );
        assert!(small, "approximation of {c} failed already at window 6");
    }
}
