//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use discarc::homext::{ext_dim, hom_dim, hom_dim_source_rule};
use discarc::index::{
    additivity_defect, approximation_triangle, image_dim_vector, index, index_after_flip,
    is_rigid_object, linearly_independent, min_right_approximation, sign_coherent,
    triangle_connecting_killed, IndexVector,
};
use discarc::oracle::{
    enumerate_arcs, random_arc, random_rigid_object, verify_approximation, Window,
};
use discarc::surface::{Arc, MarkedPoint, ModelParams, Obj};
use discarc::triangles::{extension_triangle, split_triangle, verify_triangle_window};
use discarc::triangulation::{fountain_triangulation, FanTriangulation};

fn acc(j: u32) -> MarkedPoint {
    MarkedPoint::acc(j)
}

fn reg(j: u32, k: i64) -> MarkedPoint {
    MarkedPoint::reg(j, k)
}

fn arc(p: MarkedPoint, q: MarkedPoint) -> Arc {
    Arc::new(p, q).unwrap()
}

fn params(n: u32) -> ModelParams {
    ModelParams::new(n).unwrap()
}

fn conclude(criterion: u32, label: &str, started: Instant, budget: Duration, detail: String) {
    let elapsed = started.elapsed();
    println!(
        "criterion {criterion} ({label}): PASS in {:.3}s — {detail}",
        elapsed.as_secs_f64()
    );
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its {budget:?} budget: {elapsed:?}"
    );
}

/// The triangulation configurations shared by criteria 3, 4 and 7: for each
/// n, an accumulation fountain and a regular-base fountain, each unflipped
/// and with one and two seeded flips.
fn suite_triangulations(seed: u64) -> Vec<FanTriangulation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 1..=3u32 {
        let p = params(n);
        for base in [acc(0), reg(0, 0)] {
            let fountain = fountain_triangulation(p, base);
            out.push(fountain.clone());
            let mut current = fountain;
            for _ in 0..2 {
                let members = current.members_in_window(Window(3));
                let flippable: Vec<&Arc> =
                    members.iter().filter(|a| current.flip(a).is_ok()).collect();
                if flippable.is_empty() {
                    break;
                }
                let pick = flippable[rand::Rng::gen_range(&mut rng, 0..flippable.len())];
                let (next, _) = current.flip(pick).unwrap();
                out.push(next.clone());
                current = next;
            }
        }
    }
    out
}

#[test]
fn criterion_1_two_accumulation_worked_example() {
    let started = Instant::now();
    let p = params(2);
    let tri = fountain_triangulation(p, acc(1));
    let c = arc(acc(0), reg(0, 0));
    let a = arc(acc(0), reg(1, 0));
    let e = arc(reg(0, 0), reg(1, 0));
    let x_c = arc(acc(1), reg(0, 0));
    let x_a = arc(acc(1), acc(0));
    let y = arc(acc(1), reg(1, 1));

    let ind_c = index(&tri, &Obj::single(c)).unwrap();
    assert_eq!(ind_c, expected(&tri, &[(x_c, 1), (x_a, -1)]));
    let ind_a = index(&tri, &Obj::single(a)).unwrap();
    assert_eq!(ind_a, expected(&tri, &[(x_a, 1), (y, -1)]));
    let ind_e = index(&tri, &Obj::single(e)).unwrap();
    assert_eq!(ind_e, expected(&tri, &[(x_c, 1), (y, -1)]));
    let a_plus_c = Obj::from_arcs(vec![a, c]);
    let ind_ac = index(&tri, &a_plus_c).unwrap();
    assert_eq!(ind_ac, ind_e);
    assert!(!is_rigid_object(&a_plus_c));
    assert!(is_rigid_object(&Obj::single(e)));
    assert_ne!(a_plus_c, Obj::single(e));
    assert!(!linearly_independent(&[ind_a, ind_c, ind_e]).unwrap());
    conclude(
        1,
        "two-accumulation worked example",
        started,
        Duration::from_secs(1),
        "all index identities exact".into(),
    );
}

fn expected(tri: &FanTriangulation, entries: &[(Arc, i64)]) -> IndexVector {
    let mut v = IndexVector::zero(tri);
    for (arc, coeff) in entries {
        let unit = IndexVector::unit(tri, *arc);
        for _ in 0..coeff.abs() {
            v = if *coeff > 0 { v.plus(&unit).unwrap() } else { v.minus(&unit).unwrap() };
        }
    }
    v
}

#[test]
fn criterion_2_one_accumulation_backward_extension() {
    let started = Instant::now();
    let p = params(1);
    let tri = fountain_triangulation(p, acc(0));
    let x = arc(acc(0), reg(0, 0));
    let double_desuspension = x.suspend(-2);
    let t = extension_triangle(&x, &double_desuspension).unwrap();
    let e = arc(reg(0, 0), reg(0, 2));
    assert_eq!(t.middle(), &Obj::single(e));
    assert!(!tri.contains(&e));
    conclude(
        2,
        "one-accumulation backward extension",
        started,
        Duration::from_secs(1),
        format!("middle term {e}, not a member"),
    );
}

#[test]
fn criterion_3_approximation_suite() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut total = 0usize;
    for tri in suite_triangulations(0x5eed_0003) {
        let p = tri.params();
        for _ in 0..200 {
            let c = random_arc(&mut rng, p, Window(4));
            let x0 = min_right_approximation(&tri, &c);
            let report = verify_approximation(&tri, &c, &x0, Window(8));
            assert!(
                report.passed(),
                "approximation of {c} w.r.t. {tri} failed: {:?}",
                report.failures().collect::<Vec<_>>()
            );
            let t = approximation_triangle(&tri, &c)
                .unwrap_or_else(|e| panic!("approximation of {c} w.r.t. {tri}: {e}"));
            assert_eq!(t.middle(), &x0);
            assert!(
                triangle_connecting_killed(&t, &tri),
                "connecting map of {c} w.r.t. {tri} not annihilated"
            );
            for s in t.first().summands() {
                assert!(tri.contains(s), "cocone summand {s} escapes {tri}");
            }
            if is_rigid_object(&Obj::single(c)) {
                assert!(
                    !t.first().shares_summand_with(t.middle()),
                    "approximation terms of rigid {c} share a summand"
                );
            }
            total += 1;
        }
    }
    conclude(
        3,
        "approximation suite",
        started,
        Duration::from_secs(60),
        format!("{total} sampled arcs across 18 triangulations, zero failures"),
    );
}

#[test]
fn criterion_4_defect_suite() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let triangulations = suite_triangulations(0x5eed_0004);

    // Approximation triangles have zero defect.
    let mut approx_checked = 0usize;
    for tri in &triangulations {
        for _ in 0..25 {
            let c = random_arc(&mut rng, tri.params(), Window(4));
            let t = approximation_triangle(tri, &c).unwrap();
            let d = additivity_defect(tri, &t).unwrap();
            assert!(d.is_zero(), "approximation triangle of {c} has defect {d}");
            approx_checked += 1;
        }
    }

    // Defect additivity over direct sums.
    let tri2 = fountain_triangulation(params(2), acc(1));
    let mut sum_pairs = 0usize;
    while sum_pairs < 100 {
        let (Some(t1), Some(t2)) = (
            sample_extension(&mut rng, tri2.params()),
            sample_extension(&mut rng, tri2.params()),
        ) else {
            continue;
        };
        let combined = additivity_defect(&tri2, &t1.direct_sum(&t2)).unwrap();
        let separate = additivity_defect(&tri2, &t1)
            .unwrap()
            .plus(&additivity_defect(&tri2, &t2).unwrap())
            .unwrap();
        assert!(
            combined.same_coefficients(&separate),
            "defect not additive: {combined} vs {separate}"
        );
        sum_pairs += 1;
    }

    // Triangle pairs with matching windowed image vectors have equal defects:
    // split paddings and suspension-translated approximation triangles.
    let mut matched = 0usize;
    let members = tri2.members_in_window(Window(2));
    while matched < 25 {
        let Some(t) = sample_extension(&mut rng, tri2.params()) else { continue };
        let pad = split_triangle(&members[rand::Rng::gen_range(&mut rng, 0..members.len())]);
        let padded = t.direct_sum(&pad);
        if image_dim_vector(&tri2, &t, Window(8)) != image_dim_vector(&tri2, &padded, Window(8)) {
            continue;
        }
        let d1 = additivity_defect(&tri2, &t).unwrap();
        let d2 = additivity_defect(&tri2, &padded).unwrap();
        assert!(d1.same_coefficients(&d2), "padding changed the defect: {d1} vs {d2}");
        matched += 1;
    }
    while matched < 50 {
        let c = random_arc(&mut rng, tri2.params(), Window(3));
        let shift = rand::Rng::gen_range(&mut rng, 1..=3i64);
        let t = approximation_triangle(&tri2, &c).unwrap();
        let ts = approximation_triangle(&tri2, &c.suspend(shift)).unwrap();
        if image_dim_vector(&tri2, &t, Window(8)) != image_dim_vector(&tri2, &ts, Window(8)) {
            continue;
        }
        let d1 = additivity_defect(&tri2, &t).unwrap();
        let d2 = additivity_defect(&tri2, &ts).unwrap();
        assert!(d1.same_coefficients(&d2), "translated pair defects differ: {d1} vs {d2}");
        matched += 1;
    }

    conclude(
        4,
        "defect suite",
        started,
        Duration::from_secs(60),
        format!("{approx_checked} approximation defects zero, {sum_pairs} sum pairs, {matched} matched-image pairs"),
    );
}

fn sample_extension(
    rng: &mut ChaCha8Rng,
    p: ModelParams,
) -> Option<discarc::triangles::Triangle> {
    for _ in 0..80 {
        let c = random_arc(rng, p, Window(4));
        let a = random_arc(rng, p, Window(4));
        if let Ok(t) = extension_triangle(&c, &a) {
            return Some(t);
        }
    }
    None
}

#[test]
fn criterion_5_rigid_object_indices() {
    let started = Instant::now();
    let p = params(1);
    let tri = fountain_triangulation(p, reg(0, 0));
    let arcs = enumerate_arcs(p, Window(3));

    // All rigid objects with at most three summands (multisets up to
    // isomorphism) over the window.
    let mut objects: Vec<Obj> = Vec::new();
    let m = arcs.len();
    for i in 0..m {
        objects.push(Obj::single(arcs[i]));
        for j in i..m {
            objects.push(Obj::from_arcs(vec![arcs[i], arcs[j]]));
            for k in j..m {
                objects.push(Obj::from_arcs(vec![arcs[i], arcs[j], arcs[k]]));
            }
        }
    }
    objects.retain(is_rigid_object);
    objects.sort();
    objects.dedup();

    let mut seen: Vec<(Vec<(Arc, i64)>, Obj)> = Vec::new();
    let mut independents = 0usize;
    for obj in &objects {
        let v = index(&tri, obj).unwrap();
        let key: Vec<(Arc, i64)> = v.coefficients().map(|(a, c)| (*a, c)).collect();
        if let Some((_, other)) = seen.iter().find(|(k, _)| *k == key) {
            panic!("distinct rigid objects {obj} and {other} share the index {v}");
        }
        seen.push((key, obj.clone()));

        let summand_indices: Vec<IndexVector> = obj
            .summands()
            .iter()
            .map(|s| index(&tri, &Obj::single(*s)).unwrap())
            .collect();
        assert!(
            sign_coherent(&summand_indices).unwrap(),
            "summand indices of {obj} are not sign-coherent"
        );
        let mut distinct = obj.summands().to_vec();
        distinct.dedup();
        let distinct_indices: Vec<IndexVector> = distinct
            .iter()
            .map(|s| index(&tri, &Obj::single(*s)).unwrap())
            .collect();
        assert!(
            linearly_independent(&distinct_indices).unwrap(),
            "summand indices of {obj} are dependent"
        );
        independents += 1;
    }
    conclude(
        5,
        "rigid object index injectivity, signs, independence",
        started,
        Duration::from_secs(120),
        format!("{} rigid objects, {independents} independence checks", objects.len()),
    );
}

#[test]
fn criterion_6_mutation_suite() {
    let started = Instant::now();
    let p = params(1);
    let tri = fountain_triangulation(p, reg(0, 0));
    assert!(tri.is_rigid());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let flips = [
        arc(reg(0, 0), reg(0, 2)),
        arc(reg(0, 0), reg(0, 3)),
        arc(reg(0, 0), reg(0, -3)),
    ];
    let mut positive = 0usize;
    let mut negative = 0usize;
    let mut samples = 0usize;
    for flip_arc in &flips {
        let (flipped, _) = tri.flip(flip_arc).unwrap();
        assert!(flipped.is_rigid());
        for _ in 0..40 {
            let m = random_rigid_object(&mut rng, p, Window(5), 3);
            let v = index(&tri, &m).unwrap();
            if v.coefficient(flip_arc) >= 0 {
                positive += 1;
            } else {
                negative += 1;
            }
            let rerouted = index_after_flip(&tri, flip_arc, &m).unwrap();
            let direct = index(&flipped, &m).unwrap();
            assert!(
                rerouted.same_coefficients(&direct),
                "mutation mismatch for {m} at {flip_arc}: {rerouted} vs {direct}"
            );
            samples += 1;
        }
    }
    assert!(samples >= 100, "need at least 100 samples, got {samples}");
    assert!(positive >= 10, "nonnegative branch exercised only {positive} times");
    assert!(negative >= 10, "negative branch exercised only {negative} times");
    conclude(
        6,
        "mutation suite",
        started,
        Duration::from_secs(60),
        format!("{samples} rigid objects, branches +{positive}/−{negative}, zero mismatches"),
    );
}

#[test]
fn criterion_7_consistency_suite() {
    let started = Instant::now();
    // Hammock rule agreement and the ext/hom correspondence on Window(5).
    let mut pairs = 0usize;
    for n in [1u32, 2] {
        let p = params(n);
        let arcs = enumerate_arcs(p, Window(5));
        for b in &arcs {
            for c in &arcs {
                assert_eq!(
                    hom_dim(b, c),
                    hom_dim_source_rule(b, c),
                    "hammock rules disagree on {b} -> {c} (n = {n})"
                );
                assert_eq!(
                    ext_dim(c, b),
                    hom_dim(c, &b.suspend(1)),
                    "extension/morphism correspondence fails on ({c}, {b}) (n = {n})"
                );
                pairs += 1;
            }
        }
    }

    // Flip involution plus windowed validation for the suite triangulations.
    let mut flips_checked = 0usize;
    for tri in suite_triangulations(0x5eed_0007) {
        assert!(tri.validate_window(Window(6)).pass(), "{tri} fails window validation");
        for member in tri.members_in_window(Window(2)) {
            let Ok((once, quad)) = tri.flip(&member) else { continue };
            assert!(once.validate_window(Window(6)).pass());
            let (twice, _) = once.flip(&quad.y).unwrap();
            assert!(twice.same_arc_set(&tri), "flip at {member} is not involutive");
            flips_checked += 1;
            if flips_checked.is_multiple_of(4) {
                break;
            }
        }
    }
    conclude(
        7,
        "consistency suite",
        started,
        Duration::from_secs(60),
        format!("{pairs} rule pairs, {flips_checked} flips validated"),
    );
}

/// Exactness of every constructed triangle family on a wide window, with the
/// approximation inputs drawn from Window(4) as the module invariants ask.
/// This drives each approximation through the full long-exact-sequence check,
/// including multi-summand cocones over flipped triangulations.
#[test]
fn constructed_triangles_verify_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut configs: Vec<FanTriangulation> = Vec::new();
    for (n, base) in [(1, acc(0)), (1, reg(0, 0)), (2, acc(1)), (2, reg(0, 0))] {
        let fountain = fountain_triangulation(params(n), base);
        configs.push(fountain.clone());
        let mut current = fountain;
        for flip_at in [2i64, -2] {
            if let Ok(x) = Arc::new(base, reg(base.interval(), flip_at)) {
                if let Ok((next, _)) = current.flip(&x) {
                    configs.push(next.clone());
                    current = next;
                }
            }
        }
    }
    let mut multi_summand = 0usize;
    for tri in &configs {
        let p = tri.params();
        for _ in 0..20 {
            let c = random_arc(&mut rng, p, Window(4));
            let t = approximation_triangle(tri, &c).unwrap();
            if t.first().summands().len() >= 2 {
                multi_summand += 1;
            }
            let rep = verify_triangle_window(&t, p, Window(8));
            assert!(
                rep.pass(),
                "approximation of {c} w.r.t. {tri} failed exactness: {:?}",
                rep.failures.first()
            );
        }
    }
    assert!(multi_summand > 0, "the sample must exercise multi-summand cocones");
}
