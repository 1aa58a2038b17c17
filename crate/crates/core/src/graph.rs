//! Intersection graphs, vertex sets and exact structural queries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{intersects, Shape, Tolerance};

/// Largest vertex count accepted by the exact independent-set solver.
pub const MIS_CAP: usize = 40;

/// Sorted, duplicate-free set of vertex indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        VertexSet::new(v)
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Undirected simple graph on `0..n`, optionally carrying the objects it was
/// built from.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionGraph {
    adj: Vec<Vec<usize>>,
    objects: Option<Vec<Shape>>,
}

#[derive(Serialize)]
struct EdgeList {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl IntersectionGraph {
    pub fn empty(n: usize) -> Self {
        IntersectionGraph { adj: vec![Vec::new(); n], objects: None }
    }

    /// Abstract graph from an edge list. Duplicate edges collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = IntersectionGraph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn cycle(k: usize) -> Self {
        let edges = (0..k).map(|i| (i, (i + 1) % k));
        IntersectionGraph::from_edges(k, edges).expect("cycle edges are in range")
    }

    pub fn path(n: usize) -> Self {
        IntersectionGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are in range")
    }

    pub(crate) fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::InvalidParams(format!("edge ({u}, {v}) out of range for n = {n}")));
        }
        if u == v {
            return Err(Error::InvalidParams(format!("self-loop at {u}")));
        }
        for (a, b) in [(u, v), (v, u)] {
            if let Err(pos) = self.adj[a].binary_search(&b) {
                self.adj[a].insert(pos, b);
            }
        }
        Ok(())
    }

    pub(crate) fn push_object(&mut self, s: Shape) {
        self.objects.get_or_insert_with(Vec::new).push(s);
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn objects(&self) -> Option<&[Shape]> {
        self.objects.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Subgraph induced on `vertices` (relabelled `0..len` in the given order).
    pub fn induced(&self, vertices: &[usize]) -> IntersectionGraph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut nb: Vec<usize> =
                    self.adj[v].iter().filter_map(|&u| (index[u] != usize::MAX).then_some(index[u])).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        let objects = self.objects.as_ref().map(|objs| vertices.iter().map(|&v| objs[v].clone()).collect());
        IntersectionGraph { adj, objects }
    }

    /// Edge list as JSON, `{"n": .., "edges": [[u, v], ..]}`.
    pub fn to_edge_list_json(&self) -> String {
        let list = EdgeList { n: self.n(), edges: self.edges().map(|(u, v)| [u, v]).collect() };
        serde_json::to_string(&list).expect("edge list serializes")
    }

    /// Closed/open neighborhoods as bitmasks; requires `n <= 64`.
    pub(crate) fn neighbor_masks(&self) -> Vec<u64> {
        debug_assert!(self.n() <= 64);
        self.adj.iter().map(|nb| nb.iter().fold(0u64, |m, &v| m | (1 << v))).collect()
    }
}

pub fn build_intersection_graph(objects: &[Shape], tol: Tolerance) -> Result<IntersectionGraph> {
    let mut g = IntersectionGraph::empty(0);
    g.objects = Some(Vec::with_capacity(objects.len()));
    let d = objects.first().map(Shape::dimension);
    for s in objects {
        if Some(s.dimension()) != d {
            return Err(Error::DimensionMismatch { expected: d.unwrap_or(0), found: s.dimension() });
        }
        let v = g.add_vertex();
        for (u, o) in objects[..v].iter().enumerate() {
            if intersects(o, s, tol)? {
                g.add_edge(u, v)?;
            }
        }
        g.push_object(s.clone());
    }
    Ok(g)
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::SizeCapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// Independence number of the subgraph induced on `mask`.
pub(crate) fn alpha(nb: &[u64], mask: u64) -> usize {
    fn go(nb: &[u64], mut mask: u64, taken: usize, best: &mut usize) {
        let mut taken = taken;
        // Vertices of degree <= 1 inside `mask` can always be taken.
        loop {
            let mut changed = false;
            let mut m = mask;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                if mask & (1 << v) == 0 {
                    continue;
                }
                if (nb[v] & mask).count_ones() <= 1 {
                    taken += 1;
                    mask &= !(nb[v] | (1 << v));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if mask == 0 {
            *best = (*best).max(taken);
            return;
        }
        if taken + mask.count_ones() as usize <= *best {
            return;
        }
        let mut pick = 0;
        let mut pick_deg = 0;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let d = (nb[v] & mask).count_ones();
            if d > pick_deg {
                pick = v;
                pick_deg = d;
            }
        }
        go(nb, mask & !(nb[pick] | (1 << pick)), taken + 1, best);
        go(nb, mask & !(1 << pick), taken, best);
    }
    let mut best = 0;
    go(nb, mask, 0, &mut best);
    best
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Maximum independent set; among all maximum sets the lexicographically
/// smallest sorted member list is returned.
pub fn max_independent_set_exact(g: &IntersectionGraph) -> Result<VertexSet> {
    max_independent_set_with_cap(g, MIS_CAP)
}

pub fn max_independent_set_with_cap(g: &IntersectionGraph, cap: usize) -> Result<VertexSet> {
    check_cap(g.n(), cap.min(64))?;
    let nb = g.neighbor_masks();
    let mut cand = full_mask(g.n());
    let mut need = alpha(&nb, cand);
    let mut chosen = Vec::with_capacity(need);
    for v in 0..g.n() {
        if need == 0 {
            break;
        }
        if cand & (1 << v) == 0 {
            continue;
        }
        let later = cand & !(nb[v] | full_mask(v + 1));
        if 1 + alpha(&nb, later) == need {
            chosen.push(v);
            need -= 1;
            cand = later;
        } else {
            cand &= !(1 << v);
        }
    }
    Ok(VertexSet(chosen))
}

/// Independent kissing number: the largest independent set inside any open
/// neighborhood.
pub fn independent_kissing_number(g: &IntersectionGraph) -> Result<usize> {
    let mut best = 0;
    for v in 0..g.n() {
        let nbhd = g.neighbors(v);
        if nbhd.len() <= best {
            continue;
        }
        check_cap(nbhd.len(), MIS_CAP)?;
        let sub = g.induced(nbhd);
        best = best.max(alpha(&sub.neighbor_masks(), full_mask(sub.n())));
    }
    Ok(best)
}

pub fn is_dominating_set(g: &IntersectionGraph, s: &VertexSet) -> bool {
    (0..g.n()).all(|v| s.contains(v) || g.neighbors(v).iter().any(|&u| s.contains(u)))
}

pub fn is_independent_set(g: &IntersectionGraph, s: &VertexSet) -> bool {
    s.iter().all(|v| g.neighbors(v).iter().all(|&u| !s.contains(u)))
}

/// Dominating, and connected inside every connected component of `g`.
pub fn is_cds(g: &IntersectionGraph, s: &VertexSet) -> bool {
    if !is_dominating_set(g, s) {
        return false;
    }
    g.components().iter().all(|comp| {
        let inside: Vec<usize> = comp.iter().copied().filter(|&v| s.contains(v)).collect();
        !inside.is_empty() && g.induced(&inside).is_connected()
    })
}
