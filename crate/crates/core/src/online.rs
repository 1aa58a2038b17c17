//! Vertex-arrival engine with the greedy dominating-set (GDS) and greedy
//! connected-dominating-set (GCDS) algorithms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{intersects, Shape, Tolerance};
use crate::graph::{build_intersection_graph, IntersectionGraph, VertexSet};

/// Ordered online input. Vertex `t` (0-based) is revealed at step `t + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrivalSequence {
    Geometric(Vec<Shape>),
    /// `back_edges[t]` lists the earlier vertices adjacent to vertex `t`.
    Abstract(Vec<Vec<usize>>),
}

impl ArrivalSequence {
    pub fn len(&self) -> usize {
        match self {
            ArrivalSequence::Geometric(o) => o.len(),
            ArrivalSequence::Abstract(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Abstract sequence revealing `g`'s vertices in the given order.
    pub fn from_graph_order(g: &IntersectionGraph, order: &[usize]) -> Result<Self> {
        let mut pos = vec![usize::MAX; g.n()];
        for (t, &v) in order.iter().enumerate() {
            if v >= g.n() || pos[v] != usize::MAX {
                return Err(Error::InvalidParams(format!("order is not a permutation at {v}")));
            }
            pos[v] = t;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(t, &v)| {
                let mut b: Vec<usize> = g.neighbors(v).iter().map(|&u| pos[u]).filter(|&p| p < t).collect();
                b.sort_unstable();
                b
            })
            .collect();
        Ok(ArrivalSequence::Abstract(back))
    }

    /// Graph of the whole sequence, vertices labelled by arrival index.
    pub fn graph(&self, tol: Tolerance) -> Result<IntersectionGraph> {
        match self {
            ArrivalSequence::Geometric(objs) => build_intersection_graph(objs, tol),
            ArrivalSequence::Abstract(back) => {
                let edges = back.iter().enumerate().flat_map(|(t, b)| b.iter().map(move |&u| (u, t)));
                let edges: Vec<_> = edges.collect();
                if let Some(&(u, t)) = edges.iter().find(|(u, t)| u >= t) {
                    return Err(Error::InvalidParams(format!("vertex {t} lists non-predecessor {u}")));
                }
                IntersectionGraph::from_edges(back.len(), edges)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Skip,
    Add,
    AddPair,
    AddSolo,
}

/// What an online algorithm does with the vertex just revealed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Skip,
    /// Add the new vertex to I.
    Add,
    /// Add the new vertex to I and the given earlier vertex to J.
    AddPair(usize),
    /// Add the new vertex to I as the seed of a fresh component.
    AddSolo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub decision: Decision,
    pub added: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnlineState {
    pub revealed: IntersectionGraph,
    pub a: VertexSet,
    pub i: VertexSet,
    pub j: VertexSet,
    pub solo_count: usize,
}

impl OnlineState {
    fn new() -> Self {
        OnlineState {
            revealed: IntersectionGraph::empty(0),
            a: VertexSet::empty(),
            i: VertexSet::empty(),
            j: VertexSet::empty(),
            solo_count: 0,
        }
    }

    pub fn is_dominated(&self, v: usize) -> bool {
        self.a.contains(v) || self.revealed.neighbors(v).iter().any(|&u| self.a.contains(u))
    }
}

pub trait OnlineAlgorithm {
    fn name(&self) -> &'static str;

    /// Decide on vertex `v`, which has just been added to `state.revealed`.
    fn decide(&self, state: &OnlineState, v: usize) -> Action;
}

/// Add every undominated vertex.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gds;

/// Add every undominated vertex together with its earliest revealed neighbor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gcds;

impl OnlineAlgorithm for Gds {
    fn name(&self) -> &'static str {
        "gds"
    }

    fn decide(&self, state: &OnlineState, v: usize) -> Action {
        if state.is_dominated(v) {
            Action::Skip
        } else {
            Action::Add
        }
    }
}

impl OnlineAlgorithm for Gcds {
    fn name(&self) -> &'static str {
        "gcds"
    }

    fn decide(&self, state: &OnlineState, v: usize) -> Action {
        if state.is_dominated(v) {
            return Action::Skip;
        }
        match state.revealed.neighbors(v).first() {
            Some(&j) => Action::AddPair(j),
            None => Action::AddSolo,
        }
    }
}

/// Incremental driver: reveal vertices one at a time and let the algorithm act.
pub struct OnlineRunner<'a> {
    alg: &'a dyn OnlineAlgorithm,
    tol: Tolerance,
    state: OnlineState,
    objects: Vec<Shape>,
    trace: Vec<StepRecord>,
}

impl<'a> OnlineRunner<'a> {
    pub fn new(alg: &'a dyn OnlineAlgorithm, tol: Tolerance) -> Self {
        OnlineRunner { alg, tol, state: OnlineState::new(), objects: Vec::new(), trace: Vec::new() }
    }

    pub fn state(&self) -> &OnlineState {
        &self.state
    }

    pub fn trace(&self) -> &[StepRecord] {
        &self.trace
    }

    pub fn reveal_object(&mut self, s: &Shape) -> Result<&StepRecord> {
        let mut back = Vec::new();
        for (u, prev) in self.objects.iter().enumerate() {
            if intersects(prev, s, self.tol)? {
                back.push(u);
            }
        }
        self.objects.push(s.clone());
        self.state.revealed.push_object(s.clone());
        self.reveal(&back)
    }

    pub fn reveal_abstract(&mut self, back: &[usize]) -> Result<&StepRecord> {
        self.reveal(back)
    }

    fn reveal(&mut self, back: &[usize]) -> Result<&StepRecord> {
        let v = self.state.revealed.add_vertex();
        for &u in back {
            if u >= v {
                return Err(Error::InvalidParams(format!("vertex {v} lists non-predecessor {u}")));
            }
            self.state.revealed.add_edge(u, v)?;
        }
        let action = self.alg.decide(&self.state, v);
        let st = &mut self.state;
        let (decision, added) = match action {
            Action::Skip => (Decision::Skip, vec![]),
            Action::Add => {
                st.i.insert(v);
                st.a.insert(v);
                (Decision::Add, vec![v])
            }
            Action::AddPair(j) => {
                if !st.revealed.has_edge(v, j) {
                    return Err(Error::InvalidParams(format!("{j} is not a revealed neighbor of {v}")));
                }
                st.i.insert(v);
                st.j.insert(j);
                st.a.insert(v);
                st.a.insert(j);
                (Decision::AddPair, vec![v, j])
            }
            Action::AddSolo => {
                st.i.insert(v);
                st.a.insert(v);
                st.solo_count += 1;
                (Decision::AddSolo, vec![v])
            }
        };
        self.trace.push(StepRecord { t: v + 1, decision, added });
        Ok(self.trace.last().expect("just pushed"))
    }

    pub fn finish(self) -> OnlineRun {
        OnlineRun { state: self.state, trace: self.trace }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnlineRun {
    pub state: OnlineState,
    pub trace: Vec<StepRecord>,
}

impl OnlineRun {
    pub fn solution(&self) -> &VertexSet {
        &self.state.a
    }

    /// Trace as a JSON array of `{t, decision, added}`.
    pub fn trace_json(&self) -> String {
        serde_json::to_string(&self.trace).expect("trace serializes")
    }
}

pub fn run_online(alg: &dyn OnlineAlgorithm, seq: &ArrivalSequence, tol: Tolerance) -> Result<OnlineRun> {
    let mut runner = OnlineRunner::new(alg, tol);
    match seq {
        ArrivalSequence::Geometric(objs) => {
            for s in objs {
                runner.reveal_object(s)?;
            }
        }
        ArrivalSequence::Abstract(back) => {
            for b in back {
                runner.reveal_abstract(b)?;
            }
        }
    }
    Ok(runner.finish())
}

pub fn run_gds(seq: &ArrivalSequence, tol: Tolerance) -> Result<OnlineRun> {
    run_online(&Gds, seq, tol)
}

pub fn run_gcds(seq: &ArrivalSequence, tol: Tolerance) -> Result<OnlineRun> {
    run_online(&Gcds, seq, tol)
}

/// Greedy independent set: the GDS solution read as an independent set.
pub fn greedy_is(seq: &ArrivalSequence, tol: Tolerance) -> Result<VertexSet> {
    Ok(run_gds(seq, tol)?.state.a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> ArrivalSequence {
        ArrivalSequence::Abstract(vec![vec![], vec![0], vec![1]])
    }

    #[test]
    fn gcds_on_path() {
        let run = run_gcds(&path3(), Tolerance::default()).unwrap();
        assert_eq!(run.state.a.members(), &[0, 1, 2]);
        assert_eq!(run.state.i.members(), &[0, 2]);
        assert_eq!(run.state.j.members(), &[1]);
        assert_eq!(run.state.solo_count, 1);
        assert_eq!(
            run.trace_json(),
            r#"[{"t":1,"decision":"add_solo","added":[0]},{"t":2,"decision":"skip","added":[]},{"t":3,"decision":"add_pair","added":[2,1]}]"#
        );
    }

    #[test]
    fn gds_single_and_k2() {
        let one = ArrivalSequence::Abstract(vec![vec![]]);
        assert_eq!(run_gds(&one, Tolerance::default()).unwrap().state.a.len(), 1);
        let k2 = ArrivalSequence::Abstract(vec![vec![], vec![0]]);
        assert_eq!(greedy_is(&k2, Tolerance::default()).unwrap().len(), 1);
    }

    #[test]
    fn far_disks_all_taken() {
        let seq = ArrivalSequence::Geometric((0..6).map(|i| Shape::unit_disk(5.0 * i as f64, 0.0)).collect());
        assert_eq!(greedy_is(&seq, Tolerance::default()).unwrap().len(), 6);
    }

    #[test]
    fn bad_back_edges_rejected() {
        let seq = ArrivalSequence::Abstract(vec![vec![0]]);
        assert!(run_gds(&seq, Tolerance::default()).is_err());
    }

    #[test]
    fn abstract_from_graph_order() {
        let g = IntersectionGraph::path(3);
        let seq = ArrivalSequence::from_graph_order(&g, &[1, 0, 2]).unwrap();
        assert_eq!(seq, ArrivalSequence::Abstract(vec![vec![], vec![0], vec![0]]));
        assert_eq!(run_gds(&seq, Tolerance::default()).unwrap().state.a.len(), 1);
    }
}
