use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::realize::{realize, Problem, Relation, SearchOptions};
use super::witness::{best_radial, eps_in, memoized, touch_distance, SEARCH_MARGIN};
use super::{cyclone_order, verify_block, BlockInstance, BlockKind, Family, Params};
use crate::error::{Error, Result};
use crate::geometry::{intersects, translate, Shape, Tolerance};
use crate::online::ArrivalSequence;

/// One cycle of a path of cycles, members in cycle order.
#[derive(Clone)]
struct Group {
    members: Vec<Shape>,
    tail: usize,
    head: usize,
}

/// A single block: one core dominating groups listed in path order.
struct Block {
    groups: Vec<Group>,
    core: Shape,
    shift: Vec<f64>,
}

impl Block {
    fn into_instance(self, family: Family, kind: BlockKind) -> BlockInstance {
        let mut objects = Vec::new();
        let mut partition = Vec::new();
        let (mut heads, mut tails) = (Vec::new(), Vec::new());
        for g in self.groups {
            let base = objects.len();
            heads.push(base + g.head);
            tails.push(base + g.tail);
            partition.push((base..base + g.members.len()).collect());
            objects.extend(g.members);
        }
        let core_groups = vec![(0..partition.len()).collect()];
        BlockInstance { family, kind, objects, partition, heads, tails, cores: vec![self.core], core_groups, shift: self.shift }
    }
}

fn expected_kind(family: Family) -> Result<BlockKind> {
    match family {
        Family::UnitDisk | Family::Triangle => Ok(BlockKind::C),
        Family::FixedCube { .. } | Family::ArbitraryCube { .. } => Ok(BlockKind::PC),
        Family::UnitBall => Ok(BlockKind::P),
        other => Err(Error::InvalidParams(format!("no block construction for {other}"))),
    }
}

/// The family's block: a C-block for disks and triangles, a PC-block for
/// cubes, a P-block for balls. The result is verified before it is returned.
pub fn generate_block(family: Family, params: &Params) -> Result<BlockInstance> {
    family.validate()?;
    let kind = expected_kind(family)?;
    let block = match family {
        Family::UnitDisk => {
            let ring = (0..10).map(|i| family.unit(polar(2.0, TAU * i as f64 / 10.0).to_vec(), 0.0)).collect();
            translation_chain(family, ring, family.unit(vec![0.0, 0.0], 0.0))?
        }
        Family::Triangle => {
            let core = family.unit(vec![0.0, 0.0], 0.0);
            let n = 11;
            let (ring, _) = best_radial(&core, &|c| family.unit(c.to_vec(), 0.0), n, &|i, j| (j - i) % n == 1 || (j - i) % n == n - 1);
            translation_chain(family, ring, core)?
        }
        Family::FixedCube { d } => {
            let eps = eps_in("fixed cube block", params.eps, 1.0 / 16.0, if d == 2 { 0.1 } else { 0.125 })?;
            lift_to(fixed_square_base(eps), d, eps)?
        }
        Family::ArbitraryCube { d } => {
            let eps = eps_in("arbitrary cube block", params.eps, 1.0 / 16.0, 0.125)?;
            lift_to(arbitrary_square_base(params.seed)?, d, eps)?
        }
        Family::UnitBall => ball_block(params.seed)?,
        _ => unreachable!("kind checked above"),
    };
    let instance = block.into_instance(family, kind);
    let v = verify_block(&instance, Tolerance::default());
    if !v.ok {
        return Err(Error::ConstructionFailed(format!("{family} block: {}", v.reason.unwrap_or_default())));
    }
    Ok(instance)
}

fn polar(r: f64, a: f64) -> [f64; 2] {
    [r * a.cos(), r * a.sin()]
}

/// Eight axis-parallel unit squares forming an 8-cycle around a core at the
/// origin, with tail and head at heights `-(1 - eps)` and `1 - eps`.
fn fixed_square_base(eps: f64) -> Block {
    let family = Family::FixedCube { d: 2 };
    let y = 1.0 - eps;
    let centers = [
        [0.45, -y],
        [0.9, -0.6],
        [0.9, 0.3],
        [0.3, 0.9],
        [-0.45, y],
        [-0.9, 0.6],
        [-0.9, -0.3],
        [-0.3, -0.9],
    ];
    Block {
        groups: vec![Group { members: centers.iter().map(|c| family.unit(c.to_vec(), 0.0)).collect(), tail: 0, head: 4 }],
        core: family.unit(vec![0.0, 0.0], 0.0),
        shift: vec![0.0, 3.0 - 2.0 * eps],
    }
}

/// Twelve freely rotated unit squares forming a 12-cycle around an
/// axis-parallel core, with a chaining translation found by the same search.
fn arbitrary_square_base(seed: u64) -> Result<Block> {
    let family = Family::ArbitraryCube { d: 2 };
    let n = 12;
    let (tail, head) = (0, n / 2);
    let shapes = memoized(format!("arbitrary-square-block/{seed}"), || {
        let mut init_ring = |rng: &mut ChaCha8Rng| ring_init(family, n, rng);
        chain_search(family, n, Topology::Cycle, tail, head, &mut init_ring, seed)
    })?;
    Ok(unpack_chain(family, shapes, n, tail, head, 2))
}

fn ball_block(seed: u64) -> Result<Block> {
    let family = Family::UnitBall;
    let n = 19;
    let shapes = memoized(format!("unit-ball-block/{seed}"), || {
        let mut init = |rng: &mut ChaCha8Rng| spiral_init(n, rng);
        chain_search(family, n, Topology::Path, 0, n - 1, &mut init, seed)
    })?;
    Ok(unpack_chain(family, shapes, n, 0, n - 1, 3))
}

#[derive(Clone, Copy)]
enum Topology {
    Cycle,
    Path,
}

impl Topology {
    fn adjacent(self, n: usize, i: usize, j: usize) -> bool {
        let gap = i.abs_diff(j);
        match self {
            Topology::Cycle => gap == 1 || gap == n - 1,
            Topology::Path => gap == 1,
        }
    }
}

/// Search result layout: `n` objects followed by the shift vector encoded as
/// the center of one extra unit object.
fn unpack_chain(family: Family, mut shapes: Vec<Shape>, n: usize, tail: usize, head: usize, d: usize) -> Block {
    let shift = shapes.pop().expect("shift entry").center().coords().to_vec();
    debug_assert_eq!(shapes.len(), n);
    Block { groups: vec![Group { members: shapes, tail, head }], core: family.unit(vec![0.0; d], 0.0), shift }
}

/// Finds `n` objects around a core at the origin whose graph is the given
/// cycle or path, together with a translation under which the next copy
/// meets this one only through the head / next tail pair.
fn chain_search(
    family: Family,
    n: usize,
    topo: Topology,
    tail: usize,
    head: usize,
    init: &mut dyn FnMut(&mut ChaCha8Rng) -> Vec<f64>,
    seed: u64,
) -> Result<Vec<Shape>> {
    let d = family.dimension();
    let rot = matches!(family, Family::ArbitraryCube { .. } | Family::ArbitraryPolygon { .. });
    let per = if rot { d + 1 } else { d };
    let vars = n * per + d;
    let core = family.unit(vec![0.0; d], 0.0);
    // Shapes: core, objects, shifted core, shifted objects.
    let build = |x: &[f64]| {
        let shift = &x[n * per..];
        let obj = |i: usize, s: f64| {
            let c: Vec<f64> = (0..d).map(|k| x[i * per + k] + s * shift[k]).collect();
            family.unit(c, if rot { x[i * per + d] } else { 0.0 })
        };
        let mut v = Vec::with_capacity(2 * n + 2);
        v.push(core.clone());
        v.extend((0..n).map(|i| obj(i, 0.0)));
        v.push(family.unit(shift.to_vec(), 0.0));
        v.extend((0..n).map(|i| obj(i, 1.0)));
        v
    };
    let (o, c2, o2) = (1, n + 1, n + 2);
    let mut constraints = vec![(0, c2, Relation::Apart)];
    for i in 0..n {
        constraints.push((0, o + i, Relation::Meet));
        constraints.push((0, o2 + i, Relation::Apart));
        constraints.push((c2, o + i, Relation::Apart));
        for j in i + 1..n {
            let rel = if topo.adjacent(n, i, j) { Relation::Meet } else { Relation::Apart };
            constraints.push((o + i, o + j, rel));
        }
        for j in 0..n {
            let rel = if (i, j) == (head, tail) { Relation::Meet } else { Relation::Apart };
            constraints.push((o + i, o2 + j, rel));
        }
    }
    let var_shapes = (0..vars)
        .map(|v| if v < n * per { vec![o + v / per, o2 + v / per] } else { (c2..o2 + n).collect() })
        .collect();
    let problem = Problem { vars, build: &build, var_shapes, constraints, margin: SEARCH_MARGIN };
    let mut full_init = |rng: &mut ChaCha8Rng| {
        let mut x = init(rng);
        let c = |i: usize| &x[i * per..i * per + d];
        let (ch, ct) = (c(head).to_vec(), c(tail).to_vec());
        let norm = ch.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-9);
        let shift: Vec<f64> = (0..d).map(|k| ch[k] + 1.8 * ch[k] / norm - ct[k]).collect();
        x.extend(shift);
        x
    };
    let x = realize(&problem, &mut full_init, SearchOptions { seed, restarts: 150, max_iters: 1500 })
        .ok_or_else(|| Error::ConstructionFailed(format!("{family}: no chainable block of {n} found")))?;
    let shapes = build(&x);
    let mut out: Vec<Shape> = shapes[o..o + n].to_vec();
    out.push(shapes[c2].clone());
    Ok(out)
}

/// Objects spaced around the core just inside touching distance, tail at the
/// bottom and head at the top.
fn ring_init(family: Family, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let core = family.unit(vec![0.0, 0.0], 0.0);
    let mut x = Vec::with_capacity(3 * n);
    for i in 0..n {
        let a = -FRAC_PI_2 + TAU * i as f64 / n as f64 + rng.gen_range(-0.1..0.1);
        let theta = rng.gen_range(0.0..TAU);
        let u = polar(1.0, a);
        let t = touch_distance(&core, &|s| family.unit(vec![s * u[0], s * u[1]], theta));
        x.extend([0.95 * t * u[0], 0.95 * t * u[1], theta]);
    }
    x
}

/// Ball centers along a spiral on a sphere of radius 1.9, tail on top.
fn spiral_init(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x = Vec::with_capacity(3 * n);
    let turn = rng.gen_range(-0.3..0.3);
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let z = 1.9 * (1.0 - 2.0 * t);
        let a = t * TAU * 2.6 + turn;
        let r = (1.9f64 * 1.9 - z * z).max(0.0).sqrt();
        x.extend([r * a.cos() + rng.gen_range(-0.2..0.2), r * a.sin() + rng.gen_range(-0.2..0.2), z + rng.gen_range(-0.2..0.2)]);
    }
    x
}

/// Repeated doubling of a planar block along new axes: the lower copy keeps
/// the sequence, the upper copy reverses it, and the two meet only through the
/// copies of the sequence's last object.
fn lift_to(base: Block, d: usize, eps: f64) -> Result<Block> {
    let mut b = base;
    if d == 2 {
        return Ok(b);
    }
    let far = 0.5 + 2.0 * eps;
    let near = 0.5 - eps;
    for _ in 2..d {
        let lift = |g: &Group, x: f64| -> Result<Group> {
            Ok(Group { members: g.members.iter().map(|s| s.lifted(x)).collect::<Result<_>>()?, tail: g.tail, head: g.head })
        };
        let mut lower: Vec<Group> = b.groups.iter().map(|g| lift(g, -far)).collect::<Result<_>>()?;
        let mut upper: Vec<Group> = b
            .groups
            .iter()
            .rev()
            .map(|g| lift(&Group { members: g.members.clone(), tail: g.head, head: g.tail }, far))
            .collect::<Result<_>>()?;
        let axis = b.core.dimension();
        let last = lower.last_mut().expect("nonempty");
        last.members[last.head] = last.members[last.head].with_coordinate(axis, -near);
        let first = &mut upper[0];
        first.members[first.tail] = first.members[first.tail].with_coordinate(axis, near);
        lower.extend(upper);
        b = Block { groups: lower, core: b.core.lifted(0.0)?, shift: Vec::new() };
    }
    // Endpoints pushed out along the last axis so translated copies touch.
    let axis = d - 1;
    let first = &mut b.groups[0];
    first.members[first.tail] = first.members[first.tail].with_coordinate(axis, -(1.0 - eps));
    let last = b.groups.last_mut().expect("nonempty");
    last.members[last.head] = last.members[last.head].with_coordinate(axis, 1.0 - eps);
    let mut shift = vec![0.0; d];
    shift[axis] = 3.0 - 2.0 * eps;
    b.shift = shift;
    Ok(b)
}

/// Picks head, tail and translation for a ring of translates so that chained
/// copies meet only through head and next tail.
fn translation_chain(family: Family, ring: Vec<Shape>, core: Shape) -> Result<Block> {
    let n = ring.len();
    let tol = Tolerance::default();
    for head in 0..n {
        let mut tails = vec![(head + n / 2) % n, (head + n.div_ceil(2)) % n];
        tails.dedup();
        for tail in tails {
            for lam in [0.95, 0.9, 0.85] {
                let ch = ring[head].center().coords();
                let cc = core.center().coords();
                let dir: Vec<f64> = ch.iter().zip(cc).map(|(a, b)| a - b).collect();
                let norm = dir.iter().map(|a| a * a).sum::<f64>().sqrt();
                let u: Vec<f64> = dir.iter().map(|a| a / norm).collect();
                let reach = touch_distance(&ring[head], &|s| {
                    translate(&ring[head], &u.iter().map(|a| a * s).collect::<Vec<_>>()).expect("same dimension")
                });
                let ct = ring[tail].center().coords();
                let shift: Vec<f64> = (0..ch.len()).map(|k| ch[k] + lam * reach * u[k] - ct[k]).collect();
                let block = Block {
                    groups: vec![Group { members: ring.clone(), tail, head }],
                    core: core.clone(),
                    shift,
                };
                let inst = block.into_instance(family, BlockKind::C);
                let chained = chain_blocks(&inst, 3);
                if chained.is_ok_and(|c| verify_block(&c, tol).ok && pendant(&c, tol).is_ok()) {
                    let BlockInstance { objects, cores, shift, .. } = inst;
                    return Ok(Block {
                        groups: vec![Group { members: objects, tail, head }],
                        core: cores.into_iter().next().expect("one core"),
                        shift,
                    });
                }
            }
        }
    }
    Err(Error::ConstructionFailed(format!("{family}: no chaining translation found")))
}

/// `m` translated copies of a single block. Fails if the copies interact
/// anywhere other than the head of one copy and the tail of the next.
pub fn chain_blocks(block: &BlockInstance, m: usize) -> Result<BlockInstance> {
    if m == 0 {
        return Err(Error::InvalidParams("chain length must be at least 1".into()));
    }
    if block.cores.len() != 1 {
        return Err(Error::InvalidParams("only a single block can be chained".into()));
    }
    if m == 1 {
        return Ok(block.clone());
    }
    let n = block.objects.len();
    let groups = block.partition.len();
    let mut out = BlockInstance {
        family: block.family,
        kind: block.kind,
        objects: Vec::with_capacity(n * m),
        partition: Vec::new(),
        heads: Vec::new(),
        tails: Vec::new(),
        cores: Vec::new(),
        core_groups: Vec::new(),
        shift: block.shift.clone(),
    };
    for c in 0..m {
        let v: Vec<f64> = block.shift.iter().map(|s| s * c as f64).collect();
        for s in &block.objects {
            out.objects.push(translate(s, &v)?);
        }
        out.partition.extend(block.partition.iter().map(|p| p.iter().map(|i| i + c * n).collect()));
        out.heads.extend(block.heads.iter().map(|h| h + c * n));
        out.tails.extend(block.tails.iter().map(|t| t + c * n));
        out.cores.push(translate(&block.cores[0], &v)?);
        out.core_groups.push((c * groups..(c + 1) * groups).collect());
    }
    let v = verify_block(&out, Tolerance::default());
    if !v.ok {
        return Err(Error::ConstructionFailed(format!("chain of {m}: {}", v.reason.unwrap_or_default())));
    }
    Ok(out)
}

/// The extra object of the general sequence: the tail of the next copy, which
/// touches only the last head of the chain.
fn pendant(b: &BlockInstance, tol: Tolerance) -> Result<Shape> {
    let v: Vec<f64> = b.shift.iter().map(|s| s * b.cores.len() as f64).collect();
    let first_tail = b.objects[b.tails[0]].clone();
    let p = translate(&first_tail, &v)?;
    let last_head = *b.heads.last().expect("nonempty");
    for (i, s) in b.objects.iter().enumerate() {
        if intersects(&p, s, tol)? != (i == last_head) {
            return Err(Error::ConstructionFailed(format!("pendant object interacts with object {i}")));
        }
    }
    if let Some(c) = b.cores.iter().position(|c| intersects(&p, c, tol).unwrap_or(true)) {
        return Err(Error::ConstructionFailed(format!("pendant object touches core {c}")));
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceVariant {
    /// One block in cyclone order followed by its core.
    Opt1,
    /// The whole chain in cyclone order, a pendant touching only the last
    /// head, then every core.
    General,
}

/// Objects of an online instance with the order in which they arrive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrivalLayout {
    pub objects: Vec<Shape>,
    pub order: Vec<usize>,
    pub pendant: Option<usize>,
    pub cores: Vec<usize>,
}

impl ArrivalLayout {
    pub fn sequence(&self) -> ArrivalSequence {
        ArrivalSequence::Geometric(self.order.iter().map(|&i| self.objects[i].clone()).collect())
    }
}

pub fn arrival_layout(b: &BlockInstance, variant: SequenceVariant) -> Result<ArrivalLayout> {
    let tol = Tolerance::default();
    if variant == SequenceVariant::Opt1 && b.cores.len() != 1 {
        return Err(Error::InvalidParams("the opt1 sequence needs a single block".into()));
    }
    let mut objects = b.objects.clone();
    let mut order = Vec::with_capacity(objects.len() + b.cores.len() + 1);
    for (gi, group) in b.partition.iter().enumerate() {
        match b.kind {
            BlockKind::P => order.extend(group),
            BlockKind::C | BlockKind::PC => {
                let pos = |v: usize| group.iter().position(|&x| x == v);
                let (h, t) = pos(b.heads[gi]).zip(pos(b.tails[gi])).ok_or_else(|| {
                    Error::InvalidParams(format!("group {gi}: head or tail outside the group"))
                })?;
                order.extend(cyclone_order(group.len(), h, t)?.into_iter().map(|p| group[p]));
            }
        }
    }
    let pendant_index = if variant == SequenceVariant::General {
        objects.push(pendant(b, tol)?);
        order.push(objects.len() - 1);
        Some(objects.len() - 1)
    } else {
        None
    };
    let mut cores = Vec::new();
    for c in &b.cores {
        objects.push(c.clone());
        cores.push(objects.len() - 1);
        order.push(objects.len() - 1);
    }
    Ok(ArrivalLayout { objects, order, pendant: pendant_index, cores })
}

pub fn arrival_sequence(b: &BlockInstance, variant: SequenceVariant) -> Result<ArrivalSequence> {
    Ok(arrival_layout(b, variant)?.sequence())
}
