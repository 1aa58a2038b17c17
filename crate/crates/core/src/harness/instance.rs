//! Concrete online instances: objects (or an abstract graph), their arrival
//! order and the structure the generator claims for them.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Algorithm, Construction, ExperimentSpec, Variant};
use crate::adversary::{
    adaptive_mis_adversary, arrival_layout, chain_blocks, cyclone_order, generate_block, generate_zeta_witness,
    verify_path, verify_path_of_cycles, BlockKind, Family, Params, SequenceVariant, Verdict,
};
use crate::error::{Error, Result};
use crate::geometry::{Shape, Tolerance};
use crate::graph::{build_intersection_graph, IntersectionGraph};
use crate::online::{ArrivalSequence, Gds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructureKind {
    #[serde(rename = "witness")]
    Witness,
    C,
    PC,
    P,
}

/// Indices refer to `Instance::objects` (or to the abstract vertices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub kind: StructureKind,
    pub partition: Vec<Vec<usize>>,
    pub heads: Vec<usize>,
    pub tails: Vec<usize>,
    pub cores: Vec<usize>,
    /// For each core, the partition groups it dominates.
    pub core_groups: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pendant: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractGraph {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

/// Instance document. Geometric instances list their objects; abstract ones
/// leave `objects` empty and carry an explicit graph instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub dimension: usize,
    pub family: String,
    pub objects: Vec<Shape>,
    pub order: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<AbstractGraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<Structure>,
}

impl Instance {
    pub fn n(&self) -> usize {
        match &self.graph {
            Some(g) => g.n,
            None => self.objects.len(),
        }
    }

    pub fn is_abstract(&self) -> bool {
        self.graph.is_some()
    }

    /// Graph over the instance's own indices.
    pub fn graph(&self, tol: Tolerance) -> Result<IntersectionGraph> {
        match &self.graph {
            Some(g) => {
                if !self.objects.is_empty() {
                    return Err(Error::Format("an instance has either objects or a graph, not both".into()));
                }
                IntersectionGraph::from_edges(g.n, g.edges.iter().map(|e| (e[0], e[1])))
            }
            None => {
                for s in &self.objects {
                    s.validate()?;
                }
                build_intersection_graph(&self.objects, tol)
            }
        }
    }

    fn check_order(&self) -> Result<()> {
        let n = self.n();
        let mut seen = vec![false; n];
        if self.order.len() != n {
            return Err(Error::Format(format!("order lists {} of {n} objects", self.order.len())));
        }
        for &v in &self.order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Format(format!("order is not a permutation (at {v})")));
            }
        }
        Ok(())
    }

    /// Objects (or vertices) in arrival order.
    pub fn sequence(&self, tol: Tolerance) -> Result<ArrivalSequence> {
        self.check_order()?;
        if self.is_abstract() {
            ArrivalSequence::from_graph_order(&self.graph(tol)?, &self.order)
        } else {
            Ok(ArrivalSequence::Geometric(self.order.iter().map(|&i| self.objects[i].clone()).collect()))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Connected unit-disk instance: every new disk is centered within distance
/// `[0.6, 2)` of a uniformly chosen earlier one, so each prefix is connected.
pub fn random_unit_disks(n: usize, seed: u64) -> Result<Vec<Shape>> {
    if n == 0 {
        return Err(Error::InvalidParams("random instances need at least one object".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Shape::unit_disk(0.0, 0.0)];
    while out.len() < n {
        let c = out[rng.gen_range(0..out.len())].center().coords().to_vec();
        let r = rng.gen_range(0.6..2.0);
        let th = rng.gen_range(0.0..TAU);
        out.push(Shape::unit_disk(c[0] + r * th.cos(), c[1] + r * th.sin()));
    }
    Ok(out)
}

/// Abstract path of `m` k-cycles with one core per cycle. Each cycle has its
/// tail at position 0 and its head opposite; the general variant adds a
/// pendant on the last head.
pub fn path_of_cycles_instance(k: usize, m: usize, variant: SequenceVariant) -> Result<Instance> {
    if k < 3 || m == 0 {
        return Err(Error::InvalidParams(format!("a path of cycles needs k >= 3 and m >= 1, got k={k} m={m}")));
    }
    if variant == SequenceVariant::Opt1 && m != 1 {
        return Err(Error::InvalidParams("the opt1 sequence needs a single cycle".into()));
    }
    let head_pos = k / 2;
    let mut edges = Vec::new();
    let mut partition = Vec::new();
    let (mut heads, mut tails) = (Vec::new(), Vec::new());
    for g in 0..m {
        let base = g * k;
        partition.push((base..base + k).collect::<Vec<_>>());
        edges.extend((0..k).map(|i| [base + i, base + (i + 1) % k]));
        tails.push(base);
        heads.push(base + head_pos);
        if g > 0 {
            edges.push([heads[g - 1], base]);
        }
    }
    let mut order = Vec::new();
    for g in 0..m {
        order.extend(cyclone_order(k, head_pos, 0)?.into_iter().map(|p| g * k + p));
    }
    let mut n = m * k;
    let pendant = (variant == SequenceVariant::General).then(|| {
        edges.push([heads[m - 1], n]);
        order.push(n);
        n += 1;
        n - 1
    });
    let mut cores = Vec::new();
    for p in &partition {
        edges.extend(p.iter().map(|&v| [v, n]));
        cores.push(n);
        order.push(n);
        n += 1;
    }
    Ok(Instance {
        dimension: 0,
        family: "abstract".into(),
        objects: Vec::new(),
        order,
        graph: Some(AbstractGraph { n, edges }),
        structure: Some(Structure {
            kind: StructureKind::C,
            partition,
            heads,
            tails,
            core_groups: (0..m).map(|g| vec![g]).collect(),
            cores,
            pendant,
        }),
    })
}

fn sequence_variant(spec: &ExperimentSpec) -> Result<SequenceVariant> {
    match spec.variant_or_default() {
        Some(Variant::Opt1) => Ok(SequenceVariant::Opt1),
        Some(Variant::General) => Ok(SequenceVariant::General),
        other => Err(Error::InvalidParams(format!("construction {:?} does not take variant {other:?}", spec.construction))),
    }
}

fn need_family(spec: &ExperimentSpec) -> Result<Family> {
    spec.family()?.ok_or_else(|| Error::InvalidParams(format!("{:?} needs a geometric family", spec.construction)))
}

/// Generates the instance an experiment runs on.
pub fn build_instance(spec: &ExperimentSpec) -> Result<Instance> {
    let params = Params { eps: spec.eps, seed: spec.seed };
    match spec.construction {
        Construction::Witness => {
            let family = need_family(spec)?;
            let w = generate_zeta_witness(family, &params)?;
            let z = w.independents.len();
            let mut order: Vec<usize> = (0..=z).collect();
            if spec.algorithm == Algorithm::GreedyIs {
                order.rotate_right(1);
            }
            Ok(Instance {
                dimension: family.dimension(),
                family: family.to_string(),
                objects: w.objects(),
                order,
                graph: None,
                structure: Some(Structure {
                    kind: StructureKind::Witness,
                    partition: vec![(0..z).collect()],
                    heads: Vec::new(),
                    tails: Vec::new(),
                    cores: vec![z],
                    core_groups: vec![vec![0]],
                    pendant: None,
                }),
            })
        }
        Construction::Block | Construction::Path => {
            let family = need_family(spec)?;
            let m = match spec.construction {
                Construction::Block => 1,
                _ => spec.m.unwrap_or(2),
            };
            let block = chain_blocks(&generate_block(family, &params)?, m)?;
            let layout = arrival_layout(&block, sequence_variant(spec)?)?;
            let kind = match block.kind {
                BlockKind::C => StructureKind::C,
                BlockKind::PC => StructureKind::PC,
                BlockKind::P => StructureKind::P,
            };
            Ok(Instance {
                dimension: family.dimension(),
                family: family.to_string(),
                objects: layout.objects,
                order: layout.order,
                graph: None,
                structure: Some(Structure {
                    kind,
                    partition: block.partition,
                    heads: block.heads,
                    tails: block.tails,
                    cores: layout.cores,
                    core_groups: block.core_groups,
                    pendant: layout.pendant,
                }),
            })
        }
        Construction::Adaptive => {
            let family = need_family(spec)?;
            if spec.algorithm != Algorithm::GreedyIs {
                return Err(Error::InvalidParams("the adaptive adversary plays against greedy_is".into()));
            }
            let rounds = spec.m.unwrap_or(1);
            let run = adaptive_mis_adversary(&Gds, rounds, family, &params)?;
            let ArrivalSequence::Geometric(objects) = run.sequence else {
                unreachable!("the adversary places geometric objects")
            };
            Ok(Instance {
                dimension: family.dimension(),
                family: family.to_string(),
                order: (0..objects.len()).collect(),
                objects,
                graph: None,
                structure: None,
            })
        }
        Construction::Cycles => {
            let k = spec.k.ok_or_else(|| Error::InvalidParams("cycles construction needs k".into()))? as usize;
            path_of_cycles_instance(k, spec.m.unwrap_or(1), sequence_variant(spec)?)
        }
        Construction::Random => {
            let family = need_family(spec)?;
            if family != Family::UnitDisk {
                return Err(Error::InvalidParams("random instances are unit disks only".into()));
            }
            let objects = random_unit_disks(spec.n.unwrap_or(18), spec.seed)?;
            Ok(Instance {
                dimension: 2,
                family: family.to_string(),
                order: (0..objects.len()).collect(),
                objects,
                graph: None,
                structure: None,
            })
        }
    }
}

/// Checks an instance document: a valid arrival order, and if a structure is
/// declared, that the intersection graph realizes it.
pub fn verify_instance(inst: &Instance, tol: Tolerance) -> Verdict {
    let check = || -> std::result::Result<(), String> {
        let e = |err: Error| err.to_string();
        inst.check_order().map_err(e)?;
        if !inst.is_abstract() {
            if let Some(s) = inst.objects.iter().find(|s| s.dimension() != inst.dimension) {
                return Err(format!("object of dimension {} in a {}-dimensional instance", s.dimension(), inst.dimension));
            }
        }
        let g = inst.graph(tol).map_err(e)?;
        if let Some(s) = &inst.structure {
            verify_structure(&g, s)?;
        }
        Ok(())
    };
    match check() {
        Ok(()) => Verdict::pass(),
        Err(r) => Verdict::fail(r),
    }
}

fn verify_structure(g: &IntersectionGraph, s: &Structure) -> std::result::Result<(), String> {
    let n = g.n();
    let in_range = |v: &usize| *v < n;
    if !s.partition.iter().flatten().all(in_range) || !s.cores.iter().all(in_range) || !s.pendant.iter().all(in_range) {
        return Err("structure index out of range".into());
    }
    let mut members: Vec<usize> = s.partition.concat();
    members.sort_unstable();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in members.iter().enumerate() {
        index[v] = i;
    }
    let relabel = |vs: &[usize]| vs.iter().map(|&v| index[v]).collect::<Vec<_>>();
    let sub = g.induced(&members);
    match s.kind {
        StructureKind::Witness => {
            if s.partition.len() != 1 || s.cores.len() != 1 {
                return Err("a witness has one group of independents and one core".into());
            }
            if sub.edge_count() != 0 {
                return Err("witness independents are not pairwise apart".into());
            }
        }
        StructureKind::C | StructureKind::PC => {
            let partition: Vec<Vec<usize>> = s.partition.iter().map(|p| relabel(p)).collect();
            if let Some(r) = verify_path_of_cycles(&sub, &partition, &relabel(&s.heads), &relabel(&s.tails)).reason {
                return Err(r);
            }
        }
        StructureKind::P => {
            if let Some(r) = verify_path(&sub, &relabel(&s.partition.concat())).reason {
                return Err(r);
            }
        }
    }
    if s.core_groups.len() != s.cores.len() {
        return Err("one group list per core required".into());
    }
    let mut owner = vec![usize::MAX; n];
    for (c, groups) in s.core_groups.iter().enumerate() {
        for &gi in groups {
            for &v in s.partition.get(gi).ok_or("core group out of range")? {
                owner[v] = c;
            }
        }
    }
    if members.iter().any(|&v| owner[v] == usize::MAX) {
        return Err("some structure member has no core".into());
    }
    for (c, &core) in s.cores.iter().enumerate() {
        for &v in &members {
            if g.has_edge(core, v) != (owner[v] == c) {
                return Err(format!("core {c} {} member {v}", if owner[v] == c { "misses" } else { "touches foreign" }));
            }
        }
    }
    if let Some(p) = s.pendant {
        let last_head = *s.heads.last().ok_or("a pendant needs a head")?;
        if g.neighbors(p) != [last_head] {
            return Err(format!("pendant {p} must touch only the last head {last_head}"));
        }
    }
    Ok(())
}
