//! Penalty-driven local search for configurations that are only specified by
//! which pairs must intersect and which must stay apart.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{separation, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Closed sets must overlap by at least the margin.
    Meet,
    /// Closed sets must be at least the margin apart.
    Apart,
}

pub struct Problem<'a> {
    pub vars: usize,
    /// Builds every shape taking part in a constraint from the variables.
    pub build: &'a dyn Fn(&[f64]) -> Vec<Shape>,
    /// For each variable, the shapes whose geometry depends on it.
    pub var_shapes: Vec<Vec<usize>>,
    pub constraints: Vec<(usize, usize, Relation)>,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { seed: 0, restarts: 200, max_iters: 600 }
    }
}

/// The penalty aims past the required margin so that descent does not stall
/// on the flat part of the hinge right at the boundary.
const OVERSHOOT: f64 = 2.0;

fn hinge(sep: f64, rel: Relation, margin: f64) -> f64 {
    let v = match rel {
        Relation::Meet => sep + margin,
        Relation::Apart => margin - sep,
    };
    if v > 0.0 {
        v * v
    } else {
        0.0
    }
}

impl Problem<'_> {
    fn penalty_over(&self, shapes: &[Shape], which: impl Iterator<Item = usize>) -> f64 {
        which
            .map(|c| {
                let (a, b, rel) = self.constraints[c];
                hinge(separation(&shapes[a], &shapes[b]).unwrap_or(f64::INFINITY), rel, OVERSHOOT * self.margin)
            })
            .sum()
    }

    pub fn penalty(&self, x: &[f64]) -> f64 {
        let shapes = (self.build)(x);
        self.penalty_over(&shapes, 0..self.constraints.len())
    }

    /// Smallest slack over all constraints (positive when every constraint
    /// holds strictly).
    pub fn slack(&self, x: &[f64]) -> f64 {
        let shapes = (self.build)(x);
        self.constraints
            .iter()
            .map(|&(a, b, rel)| {
                let s = separation(&shapes[a], &shapes[b]).unwrap_or(f64::INFINITY);
                match rel {
                    Relation::Meet => -s,
                    Relation::Apart => s,
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn gradient(&self, x: &[f64], touching: &[Vec<usize>]) -> Vec<f64> {
        const H: f64 = 1e-7;
        let mut g = vec![0.0; x.len()];
        let mut xp = x.to_vec();
        for v in 0..x.len() {
            let cs = touching[v].iter().copied();
            xp[v] = x[v] + H;
            let fp = self.penalty_over(&(self.build)(&xp), cs.clone());
            xp[v] = x[v] - H;
            let fm = self.penalty_over(&(self.build)(&xp), cs);
            xp[v] = x[v];
            g[v] = (fp - fm) / (2.0 * H);
        }
        g
    }

    fn constraints_per_var(&self) -> Vec<Vec<usize>> {
        self.var_shapes
            .iter()
            .map(|shapes| {
                (0..self.constraints.len())
                    .filter(|&c| {
                        let (a, b, _) = self.constraints[c];
                        shapes.contains(&a) || shapes.contains(&b)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Minimize the hinge penalty from seeded random starts; returns the first
/// point at which every constraint holds with the required margin.
pub fn realize(
    problem: &Problem,
    init: &mut dyn FnMut(&mut ChaCha8Rng) -> Vec<f64>,
    opts: SearchOptions,
) -> Option<Vec<f64>> {
    let touching = problem.constraints_per_var();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let mut x = init(&mut rng);
        debug_assert_eq!(x.len(), problem.vars);
        let mut fx = problem.penalty(&x);
        let mut step = 0.1;
        for _ in 0..opts.max_iters {
            if fx == 0.0 || problem.slack(&x) >= problem.margin {
                return Some(x);
            }
            let g = problem.gradient(&x, &touching);
            let gg: f64 = g.iter().map(|v| v * v).sum();
            if gg == 0.0 {
                break;
            }
            step *= 2.0;
            let mut moved = false;
            while step > 1e-14 {
                let xn: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - step * b).collect();
                let fxn = problem.penalty(&xn);
                if fxn < fx - 1e-4 * step * gg {
                    x = xn;
                    fx = fxn;
                    moved = true;
                    break;
                }
                step /= 2.0;
            }
            if !moved {
                break;
            }
        }
        if problem.slack(&x) >= problem.margin {
            return Some(x);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn three_disks_in_a_path() {
        let build = |x: &[f64]| (0..3).map(|i| Shape::unit_disk(x[2 * i], x[2 * i + 1])).collect::<Vec<_>>();
        let problem = Problem {
            vars: 6,
            build: &build,
            var_shapes: (0..6).map(|v| vec![v / 2]).collect(),
            constraints: vec![(0, 1, Relation::Meet), (1, 2, Relation::Meet), (0, 2, Relation::Apart)],
            margin: 0.05,
        };
        let mut init = |rng: &mut ChaCha8Rng| (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = realize(&problem, &mut init, SearchOptions::default()).expect("feasible");
        assert!(problem.slack(&x) >= 0.05 - 1e-12);
    }
}
