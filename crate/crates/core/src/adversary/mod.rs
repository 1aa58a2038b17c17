//! Witness configurations and lower-bound constructions for each object
//! family, plus the verifiers that certify them.

mod adaptive;
mod blocks;
pub mod realize;
mod witness;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{intersects, interiors_intersect, separation, Shape, Tolerance};
use crate::graph::IntersectionGraph;

pub use adaptive::{adaptive_mis_adversary, AdversaryRun};
pub use blocks::{arrival_layout, arrival_sequence, chain_blocks, generate_block, ArrivalLayout, SequenceVariant};
pub use witness::generate_zeta_witness;

/// Object family of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Family {
    UnitDisk,
    /// Axis-parallel unit hyper-cubes in R^d.
    FixedCube { d: usize },
    /// Unit hyper-cubes rotated freely in the x1-x2 plane.
    ArbitraryCube { d: usize },
    UnitBall,
    /// Apex-up unit triangles (circumradius 1).
    Triangle,
    /// Regular k-gons of circumradius 1, all with angle 0.
    FixedPolygon { k: u32 },
    /// Regular k-gons of circumradius 1, any rotation.
    ArbitraryPolygon { k: u32 },
}

pub const MAX_CUBE_DIMENSION: usize = 6;

impl Family {
    /// Builds a family from its CLI name and optional dimension / side count.
    pub fn from_name(name: &str, d: Option<usize>, k: Option<u32>) -> Result<Self> {
        let need_d = || d.ok_or_else(|| Error::InvalidParams(format!("family {name} needs d")));
        let need_k = || k.ok_or_else(|| Error::InvalidParams(format!("family {name} needs k")));
        let f = match name {
            "unit-disk" => Family::UnitDisk,
            "fixed-square" => Family::FixedCube { d: 2 },
            "arbitrary-square" => Family::ArbitraryCube { d: 2 },
            "fixed-cube" => Family::FixedCube { d: need_d()? },
            "arbitrary-cube" => Family::ArbitraryCube { d: need_d()? },
            "unit-ball" => Family::UnitBall,
            "triangle" => Family::Triangle,
            "fixed-polygon" => Family::FixedPolygon { k: need_k()? },
            "arbitrary-polygon" => Family::ArbitraryPolygon { k: need_k()? },
            other => return Err(Error::InvalidParams(format!("unknown family {other}"))),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::FixedCube { d } | Family::ArbitraryCube { d } if !(2..=MAX_CUBE_DIMENSION).contains(&d) => {
                Err(Error::InvalidParams(format!("cube dimension must be in 2..={MAX_CUBE_DIMENSION}, got {d}")))
            }
            Family::FixedPolygon { k } if k < 5 => Err(Error::InvalidParams(format!(
                "fixed polygons need k >= 5 (use triangle or fixed-cube for k = 3, 4), got {k}"
            ))),
            Family::ArbitraryPolygon { k } if !(5..=10).contains(&k) => {
                Err(Error::InvalidParams(format!("arbitrary polygons are supported for 5 <= k <= 10, got {k}")))
            }
            _ => Ok(()),
        }
    }

    pub fn dimension(&self) -> usize {
        match *self {
            Family::FixedCube { d } | Family::ArbitraryCube { d } => d,
            Family::UnitBall => 3,
            _ => 2,
        }
    }

    /// The family's unit object at `center` with planar rotation `angle`
    /// (ignored by fixed-orientation families).
    pub fn unit(&self, center: Vec<f64>, angle: f64) -> Shape {
        let center = crate::geometry::Point::new(center).expect("finite center");
        match *self {
            Family::UnitDisk | Family::UnitBall => Shape::Ball { center, radius: 1.0 },
            Family::FixedCube { .. } => Shape::Box { center, side: 1.0, angle: 0.0 },
            Family::ArbitraryCube { .. } => Shape::Box { center, side: 1.0, angle },
            Family::Triangle => Shape::Polygon { center, k: 3, circumradius: 1.0, angle: 0.0 },
            Family::FixedPolygon { k } => Shape::Polygon { center, k, circumradius: 1.0, angle: 0.0 },
            Family::ArbitraryPolygon { k } => Shape::Polygon { center, k, circumradius: 1.0, angle },
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::UnitDisk => write!(f, "unit-disk"),
            Family::FixedCube { d } => write!(f, "fixed-cube(d={d})"),
            Family::ArbitraryCube { d } => write!(f, "arbitrary-cube(d={d})"),
            Family::UnitBall => write!(f, "unit-ball"),
            Family::Triangle => write!(f, "triangle"),
            Family::FixedPolygon { k } => write!(f, "fixed-polygon(k={k})"),
            Family::ArbitraryPolygon { k } => write!(f, "arbitrary-polygon(k={k})"),
        }
    }
}

/// Generator parameters shared by every family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Construction slack; each family has its own default and admissible range.
    #[serde(default)]
    pub eps: Option<f64>,
    /// Seed for search-derived configurations.
    #[serde(default)]
    pub seed: u64,
}

impl Params {
    pub fn with_eps(eps: f64) -> Self {
        Params { eps: Some(eps), seed: 0 }
    }
}

/// A core object together with pairwise non-touching objects that all meet it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KissingConfiguration {
    pub family: Family,
    pub core: Shape,
    pub independents: Vec<Shape>,
    pub eps: Option<f64>,
    /// Independents touch the core without sharing interior points with it.
    pub standard: bool,
}

impl KissingConfiguration {
    /// Witness arrival order: independents first, core last.
    pub fn objects(&self) -> Vec<Shape> {
        let mut v = self.independents.clone();
        v.push(self.core.clone());
        v
    }
}

/// Outcome of a structural check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub reason: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { ok: true, reason: None }
    }

    pub fn fail(reason: impl Into<String>) -> Self {
        Verdict { ok: false, reason: Some(reason.into()) }
    }

    fn from_result(r: std::result::Result<(), String>) -> Self {
        match r {
            Ok(()) => Verdict::pass(),
            Err(e) => Verdict::fail(e),
        }
    }
}

pub fn verify_kissing_configuration(c: &KissingConfiguration, tol: Tolerance) -> Verdict {
    let check = || -> std::result::Result<(), String> {
        let e = |err: Error| err.to_string();
        for (i, s) in c.independents.iter().enumerate() {
            if !intersects(s, &c.core, tol).map_err(e)? {
                return Err(format!("independent {i} misses the core"));
            }
            if c.standard && interiors_intersect(s, &c.core, tol).map_err(e)? {
                return Err(format!("independent {i} overlaps the core interior"));
            }
        }
        for i in 0..c.independents.len() {
            for j in i + 1..c.independents.len() {
                if intersects(&c.independents[i], &c.independents[j], tol).map_err(e)? {
                    return Err(format!("independents {i} and {j} touch"));
                }
            }
        }
        Ok(())
    };
    Verdict::from_result(check())
}

/// Smallest gap between two independents; the slack of the construction.
pub fn configuration_margin(c: &KissingConfiguration) -> Result<f64> {
    let mut m = f64::INFINITY;
    for i in 0..c.independents.len() {
        for j in i + 1..c.independents.len() {
            m = m.min(separation(&c.independents[i], &c.independents[j])?);
        }
    }
    Ok(m)
}

/// Cyclone enumeration of a k-cycle `0, 1, .., k-1`: from the tail forward up
/// to just before the head, then from the tail backwards ending at the head.
pub fn cyclone_order(k: usize, head: usize, tail: usize) -> Result<Vec<usize>> {
    if head >= k || tail >= k || head == tail {
        return Err(Error::InvalidParams(format!("cyclone order needs distinct head/tail < k, got k={k} head={head} tail={tail}")));
    }
    let forward = (head + k - tail) % k;
    let mut order: Vec<usize> = (0..forward).map(|i| (tail + i) % k).collect();
    order.extend((1..=k - forward).map(|i| (tail + k - i) % k));
    Ok(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    /// A single cycle dominated by one core.
    C,
    /// A path of cycles dominated by one core.
    PC,
    /// A path dominated by one core.
    P,
}

/// Objects annotated with their cycle (or path) structure and cores.
///
/// `partition` lists the groups in path order; each group lists its members
/// in cycle order (or path order for P-blocks). `core_groups[c]` are the
/// groups dominated by `cores[c]`. `shift` is the translation that maps one
/// copy of the block onto the next when blocks are chained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockInstance {
    pub family: Family,
    pub kind: BlockKind,
    pub objects: Vec<Shape>,
    pub partition: Vec<Vec<usize>>,
    pub heads: Vec<usize>,
    pub tails: Vec<usize>,
    pub cores: Vec<Shape>,
    pub core_groups: Vec<Vec<usize>>,
    pub shift: Vec<f64>,
}

/// Checks the three defining properties of a path of cycles: vertex and edge
/// counts, every group inducing a cycle, and a single head-tail edge between
/// consecutive groups.
pub fn verify_path_of_cycles(
    g: &IntersectionGraph,
    partition: &[Vec<usize>],
    heads: &[usize],
    tails: &[usize],
) -> Verdict {
    let check = || -> std::result::Result<(), String> {
        let m = partition.len();
        if m == 0 {
            return Err("empty partition".into());
        }
        if heads.len() != m || tails.len() != m {
            return Err("one head and one tail per group required".into());
        }
        let k = partition[0].len();
        if k < 3 || partition.iter().any(|p| p.len() != k) {
            return Err("groups must share a size k >= 3".into());
        }
        let mut group_of = vec![usize::MAX; g.n()];
        for (gi, p) in partition.iter().enumerate() {
            for &v in p {
                if v >= g.n() || group_of[v] != usize::MAX {
                    return Err(format!("vertex {v} out of range or in two groups"));
                }
                group_of[v] = gi;
            }
        }
        if g.n() != m * k {
            return Err(format!("expected {} vertices, found {}", m * k, g.n()));
        }
        if g.edge_count() != m * k + m - 1 {
            return Err(format!("expected {} edges, found {}", m * k + m - 1, g.edge_count()));
        }
        for (gi, p) in partition.iter().enumerate() {
            if group_of[heads[gi]] != gi || group_of[tails[gi]] != gi || heads[gi] == tails[gi] {
                return Err(format!("group {gi}: head/tail must be distinct members"));
            }
            let sub = g.induced(p);
            if sub.edge_count() != k || (0..k).any(|v| sub.degree(v) != 2) || !sub.is_connected() {
                return Err(format!("group {gi} does not induce a {k}-cycle"));
            }
        }
        for (u, v) in g.edges() {
            let (gu, gv) = (group_of[u], group_of[v]);
            if gu == gv {
                continue;
            }
            let (lo, hi, a, b) = if gu < gv { (gu, gv, u, v) } else { (gv, gu, v, u) };
            if hi != lo + 1 || a != heads[lo] || b != tails[hi] {
                return Err(format!("edge ({u}, {v}) is not a head-tail link of consecutive groups"));
            }
        }
        Ok(())
    };
    Verdict::from_result(check())
}

/// Checks that consecutive entries of `order` are adjacent and that these are
/// the only edges, i.e. that `g` is the path `order`.
pub fn verify_path(g: &IntersectionGraph, order: &[usize]) -> Verdict {
    let n = g.n();
    if order.len() != n {
        return Verdict::fail(format!("order lists {} of {n} vertices", order.len()));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Verdict::fail(format!("order is not a permutation at {v}"));
        }
    }
    if g.edge_count() != n.saturating_sub(1) {
        return Verdict::fail(format!("a path on {n} vertices has {} edges, found {}", n.saturating_sub(1), g.edge_count()));
    }
    for w in order.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Verdict::fail(format!("{} and {} are consecutive but not adjacent", w[0], w[1]));
        }
    }
    Verdict::pass()
}

/// Full structural check of a block or chain of blocks, including the cores.
pub fn verify_block(b: &BlockInstance, tol: Tolerance) -> Verdict {
    let check = || -> std::result::Result<(), String> {
        let e = |err: Error| err.to_string();
        let g = crate::graph::build_intersection_graph(&b.objects, tol).map_err(e)?;
        match b.kind {
            BlockKind::C | BlockKind::PC => {
                let v = verify_path_of_cycles(&g, &b.partition, &b.heads, &b.tails);
                if let Some(r) = v.reason {
                    return Err(r);
                }
            }
            BlockKind::P => {
                for (gi, p) in b.partition.iter().enumerate() {
                    if p.first() != Some(&b.tails[gi]) || p.last() != Some(&b.heads[gi]) {
                        return Err(format!("path group {gi} must start at its tail and end at its head"));
                    }
                }
                let order: Vec<usize> = b.partition.concat();
                if let Some(r) = verify_path(&g, &order).reason {
                    return Err(r);
                }
            }
        }
        if b.core_groups.len() != b.cores.len() {
            return Err("one group list per core required".into());
        }
        let mut owner = vec![usize::MAX; b.objects.len()];
        for (c, groups) in b.core_groups.iter().enumerate() {
            for &gi in groups {
                for &v in b.partition.get(gi).ok_or("core group out of range")? {
                    owner[v] = c;
                }
            }
        }
        if owner.contains(&usize::MAX) {
            return Err("some object has no core".into());
        }
        for (c, core) in b.cores.iter().enumerate() {
            for (v, s) in b.objects.iter().enumerate() {
                let hit = intersects(core, s, tol).map_err(e)?;
                if hit != (owner[v] == c) {
                    return Err(format!("core {c} {} object {v}", if hit { "touches foreign" } else { "misses" }));
                }
            }
            for (c2, other) in b.cores.iter().enumerate().skip(c + 1) {
                if intersects(core, other, tol).map_err(e)? {
                    return Err(format!("cores {c} and {c2} touch"));
                }
            }
        }
        Ok(())
    };
    Verdict::from_result(check())
}
