use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::{Mutex, OnceLock};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::realize::{realize, Problem, Relation, SearchOptions};
use super::{configuration_margin, verify_kissing_configuration, Family, KissingConfiguration, Params};
use crate::error::{Error, Result};
use crate::geometry::{separation, Shape, Tolerance};

pub(super) const SEARCH_MARGIN: f64 = 0.01;

/// Search results are deterministic in their key, so each is computed once
/// per process.
pub(super) fn memoized(key: String, f: impl FnOnce() -> Result<Vec<Shape>>) -> Result<Vec<Shape>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Vec<Shape>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&key) {
        return Ok(v.clone());
    }
    let v = f()?;
    cache.lock().expect("cache lock").insert(key, v.clone());
    Ok(v)
}

pub(super) fn eps_in(name: &str, eps: Option<f64>, default: f64, upper: f64) -> Result<f64> {
    let e = eps.unwrap_or(default);
    if e.is_finite() && e > 0.0 && e < upper {
        Ok(e)
    } else {
        Err(Error::InvalidParams(format!("{name}: eps must lie in (0, {upper:.6}), got {e}")))
    }
}

pub fn generate_zeta_witness(family: Family, params: &Params) -> Result<KissingConfiguration> {
    family.validate()?;
    let config = match family {
        Family::UnitDisk => disk_witness(),
        Family::FixedCube { d } => cube_witness(d, params.eps)?,
        Family::ArbitraryCube { d } => arbitrary_cube_witness(d, params)?,
        Family::UnitBall => ball_witness(params.eps)?,
        Family::Triangle | Family::FixedPolygon { k: 5 | 6 } => {
            let core = family.unit(vec![0.0, 0.0], 0.0);
            let (independents, _) = best_radial(&core, &|c| family.unit(c.to_vec(), 0.0), 5, &|_, _| false);
            plain(family, core, independents, None)
        }
        Family::FixedPolygon { .. } => {
            // Corners of a regular pentagon on a circle of radius 1.78.
            let independents = (0..5)
                .map(|i| {
                    let a = FRAC_PI_2 + TAU * i as f64 / 5.0;
                    family.unit(vec![1.78 * a.cos(), 1.78 * a.sin()], 0.0)
                })
                .collect();
            plain(family, family.unit(vec![0.0, 0.0], 0.0), independents, None)
        }
        Family::ArbitraryPolygon { .. } => {
            let independents = memoized(format!("{family}/{}", params.seed), || search_ring(family, 6, params.seed))?;
            plain(family, family.unit(vec![0.0, 0.0], 0.0), independents, None)
        }
    };
    certify(config)
}

fn plain(family: Family, core: Shape, independents: Vec<Shape>, eps: Option<f64>) -> KissingConfiguration {
    KissingConfiguration { family, core, independents, eps, standard: false }
}

fn certify(c: KissingConfiguration) -> Result<KissingConfiguration> {
    let tol = Tolerance::default();
    let v = verify_kissing_configuration(&c, tol);
    if !v.ok {
        return Err(Error::ConstructionFailed(format!("{}: {}", c.family, v.reason.unwrap_or_default())));
    }
    let margin = configuration_margin(&c)?;
    if margin <= 100.0 * tol.eta {
        return Err(Error::ConstructionFailed(format!("{}: margin {margin} is within tolerance", c.family)));
    }
    Ok(c)
}

fn disk_witness() -> KissingConfiguration {
    let family = Family::UnitDisk;
    let independents = (0..5)
        .map(|i| {
            let a = FRAC_PI_2 + TAU * i as f64 / 5.0;
            family.unit(vec![2.0 * a.cos(), 2.0 * a.sin()], 0.0)
        })
        .collect();
    KissingConfiguration { family, core: family.unit(vec![0.0, 0.0], 0.0), independents, eps: None, standard: true }
}

/// Cubes at the corners `-eps` / `1 + eps` of the unit cube, core at its center.
fn cube_witness(d: usize, eps: Option<f64>) -> Result<KissingConfiguration> {
    let root = (d as f64).sqrt();
    let eps = eps_in("fixed cube witness", eps, 1.0 / (4.0 * root), 1.0 / (2.0 * root))?;
    let family = Family::FixedCube { d };
    let independents = (0..1usize << d)
        .map(|i| family.unit((0..d).map(|j| if i >> j & 1 == 1 { 1.0 + eps } else { -eps }).collect(), 0.0))
        .collect();
    Ok(plain(family, family.unit(vec![0.5; d], 0.0), independents, Some(eps)))
}

fn ball_witness(eps: Option<f64>) -> Result<KissingConfiguration> {
    let eps = eps_in("ball witness", eps, 0.001, 2.0 / (2.0 * PI / 5.0).sin() - 2.0)?;
    let family = Family::UnitBall;
    let scale = (2.0 + eps) / 2.0;
    let independents = icosahedron().into_iter().map(|v| family.unit(v.iter().map(|c| c * scale).collect(), 0.0)).collect();
    Ok(plain(family, family.unit(vec![0.0; 3], 0.0), independents, Some(eps)))
}

/// Vertices of the regular icosahedron with edge length 2.
pub(super) fn icosahedron() -> Vec<[f64; 3]> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v = Vec::with_capacity(12);
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            v.push([0.0, s1, s2 * phi]);
            v.push([s1, s2 * phi, 0.0]);
            v.push([s2 * phi, 0.0, s1]);
        }
    }
    v
}

/// Six unit squares around an axis-parallel core in the plane (search), then
/// doubled along each further axis at `+-(1/2 + eps)`.
fn arbitrary_cube_witness(d: usize, params: &Params) -> Result<KissingConfiguration> {
    let base_family = Family::ArbitraryCube { d: 2 };
    let mut independents = memoized(format!("{base_family}/{}", params.seed), || search_ring(base_family, 6, params.seed))?;
    let mut core = base_family.unit(vec![0.0, 0.0], 0.0);
    let eps = if d > 2 { Some(eps_in("arbitrary cube witness", params.eps, 0.125, 0.5)?) } else { None };
    for _ in 2..d {
        let h = 0.5 + eps.expect("set for d > 2");
        independents = [-h, h].iter().flat_map(|&x| independents.iter().map(move |s| s.lifted(x))).collect::<Result<_>>()?;
        core = core.lifted(0.0)?;
    }
    Ok(plain(Family::ArbitraryCube { d }, core, independents, eps))
}

/// Largest `s` such that `at(s)` still meets `a`, for `at` moving outward.
pub(super) fn touch_distance(a: &Shape, at: &dyn Fn(f64) -> Shape) -> f64 {
    let mut hi = 1.0;
    while separation(a, &at(hi)).unwrap_or(f64::INFINITY) <= 0.0 && hi < 1e6 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if separation(a, &at(mid)).unwrap_or(f64::INFINITY) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn unit_dir(a: f64) -> [f64; 2] {
    [a.cos(), a.sin()]
}

fn radial_ring(core: &Shape, make: &dyn Fn([f64; 2]) -> Shape, n: usize, phi0: f64, lam: f64) -> Vec<Shape> {
    (0..n)
        .map(|i| {
            let u = unit_dir(phi0 + TAU * i as f64 / n as f64);
            let t = touch_distance(core, &|s| make([s * u[0], s * u[1]]));
            make([lam * t * u[0], lam * t * u[1]])
        })
        .collect()
}

/// Smallest slack of a ring: core overlap, overlap of required neighbors,
/// and gap between all other pairs.
fn ring_margin(core: &Shape, ring: &[Shape], adjacent: &dyn Fn(usize, usize) -> bool) -> f64 {
    let sep = |a: &Shape, b: &Shape| separation(a, b).unwrap_or(f64::NAN);
    let mut m = ring.iter().map(|s| -sep(core, s)).fold(f64::INFINITY, f64::min);
    for i in 0..ring.len() {
        for j in i + 1..ring.len() {
            let s = sep(&ring[i], &ring[j]);
            m = m.min(if adjacent(i, j) { -s } else { s });
        }
    }
    m
}

/// Ring of `n` translates placed just inside touching distance of the core,
/// choosing the starting angle and radial scale with the largest margin.
pub(super) fn best_radial(
    core: &Shape,
    make: &dyn Fn([f64; 2]) -> Shape,
    n: usize,
    adjacent: &dyn Fn(usize, usize) -> bool,
) -> (Vec<Shape>, f64) {
    let mut best: Option<(Vec<Shape>, f64)> = None;
    for step in 0..24 {
        let phi0 = TAU / n as f64 * step as f64 / 24.0;
        for lam in [0.9, 0.93, 0.95, 0.97, 0.98, 0.99] {
            let ring = radial_ring(core, make, n, phi0, lam);
            let m = ring_margin(core, &ring, adjacent);
            if best.as_ref().is_none_or(|(_, bm)| m > *bm) {
                best = Some((ring, m));
            }
        }
    }
    best.expect("grid is nonempty")
}

/// `n` pairwise apart copies, free in position and angle, all meeting an
/// angle-0 core at the origin.
fn search_ring(family: Family, n: usize, seed: u64) -> Result<Vec<Shape>> {
    let core = family.unit(vec![0.0, 0.0], 0.0);
    let build = |x: &[f64]| {
        let mut v = vec![core.clone()];
        v.extend((0..n).map(|i| family.unit(vec![x[3 * i], x[3 * i + 1]], x[3 * i + 2])));
        v
    };
    let mut constraints: Vec<(usize, usize, Relation)> = (1..=n).map(|i| (0, i, Relation::Meet)).collect();
    for i in 1..=n {
        for j in i + 1..=n {
            constraints.push((i, j, Relation::Apart));
        }
    }
    let problem = Problem {
        vars: 3 * n,
        build: &build,
        var_shapes: (0..3 * n).map(|v| vec![v / 3 + 1]).collect(),
        constraints,
        margin: SEARCH_MARGIN,
    };
    let mut init = |rng: &mut ChaCha8Rng| {
        let mut x = Vec::with_capacity(3 * n);
        for i in 0..n {
            let a = TAU * i as f64 / n as f64 + rng.gen_range(-0.2..0.2);
            let theta = rng.gen_range(0.0..TAU);
            let u = unit_dir(a);
            let t = touch_distance(&core, &|s| family.unit(vec![s * u[0], s * u[1]], theta));
            x.extend([0.97 * t * u[0], 0.97 * t * u[1], theta]);
        }
        x
    };
    let x = realize(&problem, &mut init, SearchOptions { seed, ..Default::default() })
        .ok_or_else(|| Error::ConstructionFailed(format!("{family}: no configuration of {n} found")))?;
    Ok(build(&x).split_off(1))
}
