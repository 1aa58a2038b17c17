//! Exact offline optima: minimum dominating set, maximum independent set and
//! minimum connected dominating set.

use crate::error::{Error, Result};
use crate::graph::{max_independent_set_with_cap, IntersectionGraph, VertexSet, MIS_CAP};

/// Largest vertex count accepted by the exact MDS and MCDS solvers.
pub const DOMINATION_CAP: usize = 30;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n > 64 {
        Err(Error::SizeCapExceeded { n, cap })
    } else {
        Ok(())
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

pub fn exact_mis(g: &IntersectionGraph) -> Result<VertexSet> {
    max_independent_set_with_cap(g, MIS_CAP)
}

pub fn exact_mds(g: &IntersectionGraph) -> Result<VertexSet> {
    exact_mds_with_cap(g, DOMINATION_CAP)
}

/// Minimum dominating set, lexicographically smallest among the minimum ones.
pub fn exact_mds_with_cap(g: &IntersectionGraph, cap: usize) -> Result<VertexSet> {
    let n = g.n();
    check_cap(n, cap)?;
    if n == 0 {
        return Ok(VertexSet::empty());
    }
    let closed: Vec<u64> = g.neighbor_masks().iter().enumerate().map(|(v, m)| m | (1 << v)).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let max_cover = closed.iter().map(|m| m.count_ones()).max().unwrap_or(1);

    // Is there a set of at most `budget` vertices from `avail` dominating `undominated`?
    fn feasible(closed: &[u64], max_cover: u32, undominated: u64, avail: u64, budget: usize) -> bool {
        if undominated == 0 {
            return true;
        }
        if budget == 0 || (undominated.count_ones() as usize).div_ceil(max_cover as usize) > budget {
            return false;
        }
        let u = undominated.trailing_zeros() as usize;
        // Some member of N[u] must be chosen.
        let options = closed[u] & avail;
        bits(options).any(|w| feasible(closed, max_cover, undominated & !closed[w], avail, budget - 1))
    }

    let upper = greedy_dominating(&closed, all).count_ones() as usize;
    let size = (1..=upper).find(|&k| feasible(&closed, max_cover, all, all, k)).unwrap_or(upper);

    let mut chosen = Vec::with_capacity(size);
    let mut undominated = all;
    for v in 0..n {
        if chosen.len() == size {
            break;
        }
        let later = all & !((1u64 << v) | ((1u64 << v) - 1));
        let rest = undominated & !closed[v];
        if feasible(&closed, max_cover, rest, later, size - chosen.len() - 1) {
            chosen.push(v);
            undominated = rest;
        }
    }
    Ok(VertexSet::new(chosen))
}

fn greedy_dominating(closed: &[u64], all: u64) -> u64 {
    let mut undominated = all;
    let mut set = 0u64;
    while undominated != 0 {
        let best = (0..closed.len()).max_by_key(|&v| ((closed[v] & undominated).count_ones(), std::cmp::Reverse(v)));
        let v = best.expect("graph is nonempty");
        set |= 1 << v;
        undominated &= !closed[v];
    }
    set
}

pub fn exact_mcds(g: &IntersectionGraph) -> Result<VertexSet> {
    exact_mcds_with_cap(g, DOMINATION_CAP)
}

/// Minimum connected dominating set, solved per connected component and
/// unioned. Inside a component, connected vertex subsets are enumerated by
/// increasing size; the lexicographically smallest dominating one wins.
pub fn exact_mcds_with_cap(g: &IntersectionGraph, cap: usize) -> Result<VertexSet> {
    check_cap(g.n(), cap)?;
    let nb = g.neighbor_masks();
    let mut out = Vec::new();
    for comp in g.components() {
        if comp.len() == 1 {
            out.push(comp[0]);
            continue;
        }
        let comp_mask = comp.iter().fold(0u64, |m, &v| m | (1 << v));
        out.extend(bits(component_mcds(&nb, &comp, comp_mask)));
    }
    Ok(VertexSet::new(out))
}

fn component_mcds(nb: &[u64], comp: &[usize], comp_mask: u64) -> u64 {
    let closed = |set: u64| bits(set).fold(set, |m, v| m | nb[v]);
    for k in 1..=comp.len() {
        let mut best: Option<Vec<usize>> = None;
        for &v in comp {
            // Connected sets whose smallest vertex is `v`.
            let allowed = comp_mask & !((1u64 << v) | ((1u64 << v) - 1));
            let ext = nb[v] & allowed;
            esu(nb, allowed, 1 << v, ext, 1 << v | nb[v], k, &mut |set| {
                if closed(set) & comp_mask == comp_mask {
                    let list: Vec<usize> = bits(set).collect();
                    if best.as_ref().is_none_or(|b| list < *b) {
                        best = Some(list);
                    }
                }
            });
        }
        if let Some(b) = best {
            return b.iter().fold(0u64, |m, &v| m | (1 << v));
        }
    }
    comp_mask
}

/// Enumerates every connected set of size `k` that extends `set` using only
/// `allowed` vertices; each set is produced exactly once.
fn esu(nb: &[u64], allowed: u64, set: u64, mut ext: u64, seen: u64, k: usize, visit: &mut impl FnMut(u64)) {
    if set.count_ones() as usize == k {
        visit(set);
        return;
    }
    while ext != 0 {
        let w = ext.trailing_zeros() as usize;
        ext &= ext - 1;
        let fresh = nb[w] & allowed & !seen;
        esu(nb, allowed, set | (1 << w), ext | fresh, seen | fresh, k, visit);
    }
}
