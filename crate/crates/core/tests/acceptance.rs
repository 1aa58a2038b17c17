//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeta_core::adversary::arrival_layout;
use zeta_core::harness::{path_of_cycles_instance, random_unit_disks, reproduction_suite};
use zeta_core::online::{Gcds, Gds, OnlineRunner};
use zeta_core::{
    adaptive_mis_adversary, build_instance, build_intersection_graph, chain_blocks, exact_mcds, exact_mds, exact_mis,
    generate_block, generate_zeta_witness, independent_kissing_number, intersects, is_dominating_set,
    is_independent_set, run_gcds, run_gds, run_suite, separation, verify_block, verify_instance,
    verify_kissing_configuration, ArrivalSequence, Construction, ExperimentSpec, Family, Params, Point,
    SequenceVariant, Shape, SuiteOptions, Tolerance,
};

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn tol() -> Tolerance {
    Tolerance::default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> Result<T, String>) -> Result<T, String> {
    let start = Instant::now();
    let out = f()?;
    ensure(start.elapsed() < limit, || format!("{what} took {:?}", start.elapsed()))?;
    Ok(out)
}

/// Independent kissing numbers of the witness graphs.
fn criterion_1() -> Check {
    let cases: Vec<(Family, usize, bool)> = vec![
        (Family::FixedCube { d: 2 }, 4, true),
        (Family::UnitDisk, 5, true),
        (Family::FixedCube { d: 3 }, 8, true),
        (Family::FixedCube { d: 4 }, 16, true),
        (Family::UnitBall, 12, true),
        (Family::Triangle, 5, false),
        (Family::FixedPolygon { k: 7 }, 5, false),
        (Family::ArbitraryCube { d: 2 }, 6, false),
        (Family::ArbitraryCube { d: 3 }, 12, false),
    ]
    .into_iter()
    .chain((5..=10).map(|k| (Family::ArbitraryPolygon { k }, 6, false)))
    .collect();
    let mut seen = Vec::new();
    for (family, expected, exact) in cases {
        let z = timed(Duration::from_secs(10), &family.to_string(), || {
            let w = generate_zeta_witness(family, &Params::default()).map_err(e)?;
            let g = build_intersection_graph(&w.objects(), tol()).map_err(e)?;
            independent_kissing_number(&g).map_err(e)
        })?;
        ensure(if exact { z == expected } else { z >= expected }, || {
            format!("{family}: zeta {z}, expected {}{expected}", if exact { "" } else { ">= " })
        })?;
        seen.push(format!("{family}={z}"));
    }
    Ok(seen.join(" "))
}

/// GDS on witness order reaches ratio exactly zeta.
fn criterion_2() -> Check {
    let mut seen = Vec::new();
    for (family, zeta) in [
        (Family::UnitDisk, 5),
        (Family::FixedCube { d: 2 }, 4),
        (Family::FixedCube { d: 3 }, 8),
        (Family::UnitBall, 12),
    ] {
        let w = generate_zeta_witness(family, &Params::default()).map_err(e)?;
        let seq = ArrivalSequence::Geometric(w.objects());
        let online = run_gds(&seq, tol()).map_err(e)?.solution().len();
        let offline = exact_mds(&seq.graph(tol()).map_err(e)?).map_err(e)?.len();
        ensure(online == zeta && offline == 1, || format!("{family}: gds {online}, mds {offline}"))?;
        seen.push(format!("{family}={online}/{offline}"));
    }
    Ok(seen.join(" "))
}

/// Adaptive adversary against greedy independent set.
fn criterion_3() -> Check {
    let mut seen = Vec::new();
    for r in 1..=3 {
        let run = adaptive_mis_adversary(&Gds, r, Family::UnitDisk, &Params::default()).map_err(e)?;
        let greedy = run.run.solution().len();
        let mis = exact_mis(&run.sequence.graph(tol()).map_err(e)?).map_err(e)?.len();
        ensure(greedy == r && mis == 5 * r, || format!("rounds {r}: greedy {greedy}, mis {mis}"))?;
        seen.push(format!("r={r}:{greedy}/{mis}"));
    }
    Ok(seen.join(" "))
}

/// GCDS on cyclone-order paths of cycles, abstract and geometric.
fn criterion_4() -> Check {
    let mut seen = Vec::new();
    for (k, m) in [(8, 1), (8, 2), (10, 1), (10, 2)] {
        let bound = (k - 1) * m - 1;
        let inst = path_of_cycles_instance(k, m, SequenceVariant::General).map_err(e)?;
        let gcds = run_gcds(&inst.sequence(tol()).map_err(e)?, tol()).map_err(e)?.solution().len();
        ensure(gcds >= bound, || format!("abstract k={k} m={m}: gcds {gcds} < {bound}"))?;
        // Unit disks give 10-cycles and fixed squares 8-cycles.
        let family = if k == 10 { Family::UnitDisk } else { Family::FixedCube { d: 2 } };
        let block = chain_blocks(&generate_block(family, &Params::default()).map_err(e)?, m).map_err(e)?;
        let seq = arrival_layout(&block, SequenceVariant::General).map_err(e)?.sequence();
        let geo = run_gcds(&seq, tol()).map_err(e)?.solution().len();
        ensure(geo >= bound, || format!("{family} k={k} m={m}: gcds {geo} < {bound}"))?;
        seen.push(format!("({k},{m}):{gcds}/{geo}>={bound}"));
    }
    Ok(seen.join(" "))
}

/// Single-block sequences with an optimum of one.
fn criterion_5() -> Check {
    let mut seen = Vec::new();
    for (family, bound) in [
        (Family::UnitDisk, 8),
        (Family::FixedCube { d: 2 }, 6),
        (Family::FixedCube { d: 3 }, 13),
        (Family::UnitBall, 17),
        (Family::Triangle, 9),
    ] {
        let block = generate_block(family, &Params::default()).map_err(e)?;
        let seq = arrival_layout(&block, SequenceVariant::Opt1).map_err(e)?.sequence();
        let gcds = run_gcds(&seq, tol()).map_err(e)?.solution().len();
        let mcds = exact_mcds(&seq.graph(tol()).map_err(e)?).map_err(e)?.len();
        ensure(gcds >= bound && mcds == 1, || format!("{family}: gcds {gcds} (need {bound}), mcds {mcds}"))?;
        seen.push(format!("{family}={gcds}"));
    }
    Ok(seen.join(" "))
}

/// Two chained disk C-blocks, pendant and cores appended.
fn criterion_6() -> Check {
    timed(Duration::from_secs(60), "disk path", || {
        let block = chain_blocks(&generate_block(Family::UnitDisk, &Params::default()).map_err(e)?, 2).map_err(e)?;
        let seq = arrival_layout(&block, SequenceVariant::General).map_err(e)?.sequence();
        let g = seq.graph(tol()).map_err(e)?;
        let gcds = run_gcds(&seq, tol()).map_err(e)?.solution().len();
        let mcds = exact_mcds(&g).map_err(e)?.len();
        let ratio = gcds as f64 / mcds as f64;
        ensure(mcds == 5, || format!("mcds {mcds}, expected 5"))?;
        ensure(ratio >= 9.0 / 5.0, || format!("ratio {ratio} below 9/5"))?;
        ensure(ratio >= 3.0, || format!("ratio {ratio} below 3"))?;
        Ok(format!("{} objects, gcds {gcds}, mcds {mcds}, ratio {ratio:.2}", g.n()))
    })
}

struct RandomCase {
    zeta: usize,
    mcds: usize,
    gcds: usize,
    gds: usize,
    gcds_i: usize,
}

fn random_cases() -> Result<Vec<RandomCase>, String> {
    (0..200u64)
        .map(|seed| {
            let n = 6 + (seed % 13) as usize;
            let seq = ArrivalSequence::Geometric(random_unit_disks(n, seed).map_err(e)?);
            let g = seq.graph(tol()).map_err(e)?;
            let gcds = run_gcds(&seq, tol()).map_err(e)?;
            Ok(RandomCase {
                zeta: independent_kissing_number(&g).map_err(e)?,
                mcds: exact_mcds(&g).map_err(e)?.len(),
                gcds: gcds.solution().len(),
                gcds_i: gcds.state.i.len(),
                gds: run_gds(&seq, tol()).map_err(e)?.solution().len(),
            })
        })
        .collect()
}

/// GCDS upper bounds on random connected unit-disk instances.
fn criterion_7(cases: &[RandomCase]) -> Check {
    let mut violations = 0;
    for c in cases {
        let (z, o, a) = (c.zeta as f64, c.mcds as f64, c.gcds as f64);
        let absolute = if c.gcds <= 1 { 2.0 * z } else { (2.0 * z).min(2.0 * (z - 1.0) * (1.0 + 1.0 / (a - 1.0))) };
        if a > 2.0 * (z - 1.0) * o + 2.0 + 1e-9 || a > absolute * o + 1e-9 {
            violations += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    let worst = cases.iter().map(|c| c.gcds as f64 / c.mcds as f64).fold(0.0, f64::max);
    Ok(format!("{} instances, 0 violations, worst ratio {worst:.2}", cases.len()))
}

/// Independent sets are at most (zeta - 1)|O| + 1.
fn criterion_8(cases: &[RandomCase]) -> Check {
    let violations = cases
        .iter()
        .filter(|c| {
            let cap = (c.zeta.max(1) - 1) * c.mcds + 1;
            c.gds > cap || c.gcds_i > cap
        })
        .count();
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("{} instances, 0 violations", cases.len()))
}

fn in_box(s: &Shape, p: &[f64]) -> bool {
    let Shape::Box { center, side, angle } = s else { unreachable!() };
    let c = center.coords();
    let (sn, cs) = angle.sin_cos();
    let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
    let h = side / 2.0;
    (cs * dx + sn * dy).abs() <= h && (-sn * dx + cs * dy).abs() <= h && (2..p.len()).all(|j| (p[j] - c[j]).abs() <= h)
}

fn box_pairs_agree_with_sampling() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 100 {
        let d = 2 + checked % 2;
        let mut draw = || Shape::Box {
            center: Point::new((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap(),
            side: rng.gen_range(0.5..1.5),
            angle: rng.gen_range(0.0..std::f64::consts::FRAC_PI_2),
        };
        let (a, b) = (draw(), draw());
        let sep = separation(&a, &b).map_err(e)?;
        if sep.abs() < 0.02 {
            continue;
        }
        let reach = |s: &Shape, j: usize| {
            let Shape::Box { side, angle, .. } = s else { unreachable!() };
            if j < 2 {
                side / 2.0 * (angle.cos().abs() + angle.sin().abs())
            } else {
                side / 2.0
            }
        };
        let region: Vec<(f64, f64)> = (0..d)
            .map(|j| {
                let (ca, cb) = (a.center().coords()[j], b.center().coords()[j]);
                ((ca - reach(&a, j)).max(cb - reach(&b, j)), (ca + reach(&a, j)).min(cb + reach(&b, j)))
            })
            .collect();
        let mut hit = false;
        if region.iter().all(|(l, h)| l < h) {
            let mut p = vec![0.0; d];
            for _ in 0..100_000 {
                for (x, (l, h)) in p.iter_mut().zip(&region) {
                    *x = rng.gen_range(*l..*h);
                }
                if in_box(&a, &p) && in_box(&b, &p) {
                    hit = true;
                    break;
                }
            }
        }
        let predicate = intersects(&a, &b, tol()).map_err(e)?;
        ensure(predicate == hit, || format!("box pair disagrees with sampling at separation {sep}"))?;
        ensure(predicate == intersects(&b, &a, tol()).map_err(e)?, || "intersects is not symmetric".into())?;
        checked += 1;
    }
    Ok(())
}

/// Step invariants of the online algorithms, generator certificates and the
/// box predicate.
fn criterion_9() -> Check {
    for seed in 0..100u64 {
        let objects = random_unit_disks(6 + (seed % 13) as usize, seed).map_err(e)?;
        let mut gds = OnlineRunner::new(&Gds, tol());
        let mut gcds = OnlineRunner::new(&Gcds, tol());
        for s in &objects {
            gds.reveal_object(s).map_err(e)?;
            gcds.reveal_object(s).map_err(e)?;
            let st = gds.state();
            ensure(is_independent_set(&st.revealed, &st.a) && is_dominating_set(&st.revealed, &st.a), || {
                format!("seed {seed}: gds state is not an independent dominating set")
            })?;
            let st = gcds.state();
            ensure(st.a.len() == 2 * st.i.len() - st.solo_count, || format!("seed {seed}: gcds count identity"))?;
        }
    }
    let families = [
        Family::UnitDisk,
        Family::FixedCube { d: 2 },
        Family::FixedCube { d: 3 },
        Family::FixedCube { d: 4 },
        Family::ArbitraryCube { d: 2 },
        Family::ArbitraryCube { d: 3 },
        Family::UnitBall,
        Family::Triangle,
        Family::FixedPolygon { k: 5 },
        Family::FixedPolygon { k: 6 },
        Family::FixedPolygon { k: 7 },
        Family::ArbitraryPolygon { k: 5 },
        Family::ArbitraryPolygon { k: 8 },
    ];
    let mut certified = 0;
    for family in families {
        let w = generate_zeta_witness(family, &Params::default()).map_err(e)?;
        ensure(verify_kissing_configuration(&w, tol()).ok, || format!("{family} witness fails its verifier"))?;
        certified += 1;
    }
    for family in [
        Family::UnitDisk,
        Family::FixedCube { d: 2 },
        Family::FixedCube { d: 3 },
        Family::ArbitraryCube { d: 2 },
        Family::ArbitraryCube { d: 3 },
        Family::UnitBall,
        Family::Triangle,
    ] {
        let block = generate_block(family, &Params::default()).map_err(e)?;
        let chain = chain_blocks(&block, 2).map_err(e)?;
        for b in [&block, &chain] {
            ensure(verify_block(b, tol()).ok, || format!("{family} block fails its verifier"))?;
        }
        certified += 2;
    }
    for spec in reproduction_suite().iter().filter(|s| s.construction != Construction::Adaptive) {
        let inst = build_instance(spec).map_err(e)?;
        ensure(verify_instance(&inst, tol()).ok, || format!("instance for {spec:?} fails verification"))?;
        certified += 1;
    }
    box_pairs_agree_with_sampling()?;
    Ok(format!("online step invariants on 100 instances, {certified} certified generator outputs, 100 box pairs"))
}

/// Two reproduction-suite runs give identical reports, all bounds hold.
fn criterion_10() -> Check {
    let specs: Vec<ExperimentSpec> = reproduction_suite();
    let first = run_suite(&specs, SuiteOptions { parallel: true, timing: false });
    let second = run_suite(&specs, SuiteOptions { parallel: false, timing: false });
    ensure(first.to_csv() == second.to_csv(), || "reports differ between runs".into())?;
    let failing: Vec<String> = first
        .rows
        .iter()
        .filter(|(_, r)| !r.bound_satisfied)
        .map(|(s, r)| format!("{} {} {}: {:?}", s.family, s.construction, s.algorithm, r.error_detail))
        .collect();
    ensure(failing.is_empty(), || format!("unsatisfied rows: {}", failing.join("; ")))?;
    Ok(format!("{} rows, byte-identical, all bounds satisfied", specs.len()))
}

fn main() -> ExitCode {
    let cases = random_cases();
    let criteria: Vec<Criterion> = vec![
        ("zeta witnesses", Box::new(criterion_1)),
        ("GDS tightness", Box::new(criterion_2)),
        ("greedy IS adversary", Box::new(criterion_3)),
        ("path-of-cycles lemma", Box::new(criterion_4)),
        ("MCDS lower bounds, opt1", Box::new(criterion_5)),
        ("MCDS general variant, m=2", Box::new(criterion_6)),
        ("GCDS upper bounds, random disks", Box::new(|| cases.as_ref().map_err(Clone::clone).and_then(|c| criterion_7(c)))),
        ("independent set lemma, random disks", Box::new(|| cases.as_ref().map_err(Clone::clone).and_then(|c| criterion_8(c)))),
        ("structural invariants", Box::new(criterion_9)),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
