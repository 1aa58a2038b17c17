use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeta_core::online::{Gcds, OnlineRunner};
use zeta_core::{
    build_intersection_graph, cyclone_order, exact_mcds, exact_mds, interiors_intersect, intersects, is_cds,
    is_dominating_set, is_independent_set, max_independent_set_exact, run_gcds, separation, translate,
    ArrivalSequence, IntersectionGraph, OnlineAlgorithm, Shape, Tolerance, VertexSet,
};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn planar_shape() -> impl Strategy<Value = Shape> {
    let c = (-3.0..3.0f64, -3.0..3.0f64);
    prop_oneof![
        (c.clone(), 0.2..2.0f64).prop_map(|((x, y), r)| Shape::ball([x, y], r).unwrap()),
        (c.clone(), 0.2..2.0f64, 0.0..6.3f64).prop_map(|((x, y), s, a)| Shape::cube([x, y], s, a).unwrap()),
        (c, 3u32..9, 0.2..2.0f64, 0.0..6.3f64)
            .prop_map(|((x, y), k, r, a)| Shape::polygon([x, y], k, r, a).unwrap()),
    ]
}

fn spatial_shape() -> impl Strategy<Value = Shape> {
    let c = (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64);
    prop_oneof![
        (c.clone(), 0.2..2.0f64).prop_map(|((x, y, z), r)| Shape::ball([x, y, z], r).unwrap()),
        (c.clone(), 0.2..2.0f64).prop_map(|((x, y, z), r)| Shape::ball([x, y, z], r).unwrap()),
        (c, 0.2..2.0f64, 0.0..6.3f64).prop_map(|((x, y, z), s, a)| Shape::cube([x, y, z], s, a).unwrap()),
    ]
}

/// Two shapes of the same dimension whose pair is supported.
fn shape_pair() -> impl Strategy<Value = (Shape, Shape)> {
    prop_oneof![
        (planar_shape(), planar_shape()),
        (spatial_shape(), spatial_shape())
            .prop_filter("ball x box is unsupported in 3-d", |(a, b)| a.variant_name() == b.variant_name()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn intersects_is_symmetric((a, b) in shape_pair()) {
        prop_assert_eq!(intersects(&a, &b, tol()).unwrap(), intersects(&b, &a, tol()).unwrap());
        prop_assert_eq!(interiors_intersect(&a, &b, tol()).unwrap(), interiors_intersect(&b, &a, tol()).unwrap());
    }

    #[test]
    fn interior_overlap_implies_intersection((a, b) in shape_pair()) {
        if interiors_intersect(&a, &b, tol()).unwrap() {
            prop_assert!(intersects(&a, &b, tol()).unwrap());
        }
    }

    #[test]
    fn every_shape_meets_itself(a in prop_oneof![planar_shape(), spatial_shape()]) {
        prop_assert!(intersects(&a, &a, tol()).unwrap());
        prop_assert!(interiors_intersect(&a, &a, tol()).unwrap());
    }

    #[test]
    fn translation_preserves_intersection((a, b) in shape_pair(), v in prop::collection::vec(-5.0..5.0f64, 3)) {
        let sep = separation(&a, &b).unwrap();
        prop_assume!((sep - tol().eta).abs() > 1e-9);
        let v = &v[..a.dimension()];
        let (ta, tb) = (translate(&a, v).unwrap(), translate(&b, v).unwrap());
        prop_assert_eq!(intersects(&a, &b, tol()).unwrap(), intersects(&ta, &tb, tol()).unwrap());
    }

    #[test]
    fn graph_matches_pairwise_predicate(objs in prop::collection::vec(planar_shape(), 0..12)) {
        let g = build_intersection_graph(&objs, tol()).unwrap();
        for i in 0..objs.len() {
            prop_assert!(!g.has_edge(i, i));
            for j in 0..objs.len() {
                if i != j {
                    prop_assert_eq!(g.has_edge(i, j), intersects(&objs[i], &objs[j], tol()).unwrap());
                    prop_assert_eq!(g.has_edge(i, j), g.has_edge(j, i));
                }
            }
        }
    }

    #[test]
    fn cyclone_order_is_a_permutation(k in 3usize..30, h in 0usize..30, t in 0usize..30) {
        let (h, t) = (h % k, t % k);
        prop_assume!(h != t);
        let order = cyclone_order(k, h, t).unwrap();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..k).collect::<Vec<_>>());
        prop_assert_eq!(order[0], t);
        prop_assert_eq!(order[k - 1], h);
    }
}

/// Membership in a box rotated in the x1-x2 plane, tested in the box's own frame.
fn in_box(s: &Shape, p: &[f64]) -> bool {
    let Shape::Box { center, side, angle } = s else { unreachable!() };
    let c = center.coords();
    let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
    let (sn, cs) = angle.sin_cos();
    let (u, v) = (cs * dx + sn * dy, -sn * dx + cs * dy);
    let h = side / 2.0;
    u.abs() <= h && v.abs() <= h && (2..p.len()).all(|j| (p[j] - c[j]).abs() <= h)
}

fn bounding_box(s: &Shape) -> Vec<(f64, f64)> {
    let Shape::Box { center, side, angle } = s else { unreachable!() };
    let c = center.coords();
    let planar = side / 2.0 * (angle.cos().abs() + angle.sin().abs());
    c.iter()
        .enumerate()
        .map(|(j, &x)| {
            let r = if j < 2 { planar } else { side / 2.0 };
            (x - r, x + r)
        })
        .collect()
}

#[test]
fn box_predicate_agrees_with_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 100 {
        attempts += 1;
        assert!(attempts < 10_000, "could not draw enough non-tangent pairs");
        let d = if checked % 2 == 0 { 2 } else { 3 };
        let draw = |rng: &mut ChaCha8Rng| {
            let c: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            Shape::Box {
                center: zeta_core::Point::new(c).unwrap(),
                side: rng.gen_range(0.5..1.5),
                angle: rng.gen_range(0.0..std::f64::consts::FRAC_PI_2),
            }
        };
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        let sep = separation(&a, &b).unwrap();
        if sep.abs() < 0.02 {
            continue;
        }
        let region: Vec<(f64, f64)> = bounding_box(&a)
            .into_iter()
            .zip(bounding_box(&b))
            .map(|((l1, h1), (l2, h2))| (l1.max(l2), h1.min(h2)))
            .collect();
        let mut sampled = false;
        if region.iter().all(|(l, h)| l <= h) {
            let mut p = vec![0.0; d];
            for _ in 0..100_000 {
                for (x, (l, h)) in p.iter_mut().zip(&region) {
                    *x = if l < h { rng.gen_range(*l..*h) } else { *l };
                }
                if in_box(&a, &p) && in_box(&b, &p) {
                    sampled = true;
                    break;
                }
            }
        }
        assert_eq!(intersects(&a, &b, tol()).unwrap(), sampled, "pair {a:?} {b:?} sep {sep}");
        checked += 1;
    }
}

/// Random vertex-arrival graph: vertex t links to earlier vertices with
/// probability `p`; with `connected`, each vertex after the first gets at least
/// one back edge so every prefix is connected.
fn arrival_graph(n: usize, p: f64, connected: bool, seed: u64) -> ArrivalSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let back = (0..n)
        .map(|t| {
            let mut b: Vec<usize> = (0..t).filter(|_| rng.gen_bool(p)).collect();
            if connected && t > 0 && b.is_empty() {
                b.push(rng.gen_range(0..t));
            }
            b
        })
        .collect();
    ArrivalSequence::Abstract(back)
}

fn replay(alg: &dyn OnlineAlgorithm, seq: &ArrivalSequence, mut check: impl FnMut(&zeta_core::OnlineState)) {
    let ArrivalSequence::Abstract(back) = seq else { unreachable!() };
    let mut runner = OnlineRunner::new(alg, tol());
    for b in back {
        runner.reveal_abstract(b).unwrap();
        check(runner.state());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn gds_is_independent_and_dominating_at_every_step(n in 1usize..25, p in 0.05..0.6f64, seed: u64) {
        let seq = arrival_graph(n, p, false, seed);
        replay(&zeta_core::online::Gds, &seq, |s| {
            assert!(is_independent_set(&s.revealed, &s.a));
            assert!(is_dominating_set(&s.revealed, &s.a));
        });
    }

    #[test]
    fn gcds_counts_pairs_and_solos(n in 1usize..25, p in 0.05..0.6f64, connected: bool, seed: u64) {
        let seq = arrival_graph(n, p, connected, seed);
        replay(&Gcds, &seq, |s| {
            assert_eq!(s.a.len(), 2 * s.i.len() - s.solo_count);
            assert_eq!(s.a, s.i.union(&s.j));
            assert!(is_dominating_set(&s.revealed, &s.a));
            assert!(is_independent_set(&s.revealed, &s.i));
            if connected {
                assert!(is_cds(&s.revealed, &s.a));
            }
        });
    }

    #[test]
    fn gcds_on_connected_arrivals_is_a_cds(n in 1usize..25, p in 0.05..0.6f64, seed: u64) {
        let seq = arrival_graph(n, p, true, seed);
        let g = seq.graph(tol()).unwrap();
        let run = run_gcds(&seq, tol()).unwrap();
        prop_assert!(is_cds(&g, run.solution()));
    }
}

fn subsets_lexmin(g: &IntersectionGraph, ok: impl Fn(&VertexSet) -> bool) -> VertexSet {
    let n = g.n();
    let mut best: Option<VertexSet> = None;
    for mask in 0u32..(1 << n) {
        let s: VertexSet = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        if !ok(&s) {
            continue;
        }
        best = match best {
            None => Some(s),
            Some(b) if s.len() < b.len() || (s.len() == b.len() && s.members() < b.members()) => Some(s),
            keep => keep,
        };
    }
    best.unwrap_or_else(VertexSet::empty)
}

fn random_graph(n: usize, p: f64, seed: u64) -> IntersectionGraph {
    arrival_graph(n, p, false, seed).graph(tol()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_solvers_match_brute_force(n in 1usize..11, p in 0.1..0.7f64, seed: u64) {
        let g = random_graph(n, p, seed);
        prop_assert_eq!(exact_mds(&g).unwrap(), subsets_lexmin(&g, |s| is_dominating_set(&g, s)));
        prop_assert_eq!(exact_mcds(&g).unwrap(), subsets_lexmin(&g, |s| is_cds(&g, s)));
        let mis = max_independent_set_exact(&g).unwrap();
        let mut brute: Option<VertexSet> = None;
        for mask in 0u32..(1 << n) {
            let s: VertexSet = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            if !is_independent_set(&g, &s) {
                continue;
            }
            brute = match brute {
                None => Some(s),
                Some(b) if s.len() > b.len() || (s.len() == b.len() && s.members() < b.members()) => Some(s),
                keep => keep,
            };
        }
        prop_assert_eq!(mis, brute.unwrap());
    }
}
