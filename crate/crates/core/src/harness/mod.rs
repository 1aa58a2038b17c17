//! Experiment orchestration: build an instance, replay it through an online
//! algorithm, solve it exactly offline and compare the ratio with the known
//! bound for the family.

mod bounds;
mod instance;

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::Family;
use crate::error::{Error, Result};
use crate::geometry::Tolerance;
use crate::graph::{independent_kissing_number, max_independent_set_exact};
use crate::offline::{exact_mcds, exact_mds};
use crate::online::{greedy_is, run_gcds, run_gds};

pub use bounds::{
    bound_row, gcds_absolute, gcds_asymptotic, table_key, BoundRow, Formula, BOUND_TABLE, FUNKE_ASYMPTOTIC,
    FUNKE_OFFSET, FUNKE_SLOPE,
};
pub use instance::{
    build_instance, path_of_cycles_instance, random_unit_disks, verify_instance, AbstractGraph, Instance, Structure,
    StructureKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Independent kissing configuration plus its core.
    Witness,
    /// One block in its arrival order.
    Block,
    /// `m` chained blocks.
    Path,
    /// Adaptive independent-set game, `m` rounds.
    Adaptive,
    /// Abstract path of `m` k-cycles.
    Cycles,
    /// Random connected unit disks, `n` objects.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Gds,
    Gcds,
    GreedyIs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Opt1,
    General,
    Adaptive,
}

macro_rules! snake_display {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let s = serde_json::to_string(self).expect("unit variant");
                f.write_str(s.trim_matches('"'))
            }
        }
    )*};
}
snake_display!(Construction, Algorithm, Variant, BoundKind);

/// One experiment. `family` is a family name (see `Family::from_name`) or
/// `abstract` for the cycles construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub family: String,
    pub construction: Construction,
    pub algorithm: Algorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn new(family: &str, construction: Construction, algorithm: Algorithm) -> Self {
        ExperimentSpec {
            family: family.into(),
            construction,
            algorithm,
            variant: None,
            d: None,
            k: None,
            m: None,
            n: None,
            eps: None,
            seed: 0,
        }
    }

    pub fn variant(mut self, v: Variant) -> Self {
        self.variant = Some(v);
        self
    }

    pub fn d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    pub fn k(mut self, k: u32) -> Self {
        self.k = Some(k);
        self
    }

    pub fn m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// The geometric family, or `None` for abstract instances.
    pub fn family(&self) -> Result<Option<Family>> {
        if self.family == "abstract" {
            return match self.construction {
                Construction::Cycles => Ok(None),
                c => Err(Error::InvalidParams(format!("construction {c} needs a geometric family"))),
            };
        }
        if self.construction == Construction::Cycles {
            return Err(Error::InvalidParams("the cycles construction is abstract".into()));
        }
        Family::from_name(&self.family, self.d, self.k).map(Some)
    }

    pub fn variant_or_default(&self) -> Option<Variant> {
        self.variant.or(match self.construction {
            Construction::Block => Some(Variant::Opt1),
            Construction::Path | Construction::Cycles => Some(Variant::General),
            Construction::Adaptive => Some(Variant::Adaptive),
            Construction::Witness | Construction::Random => None,
        })
    }
}

/// How `paper_bound` is compared with the measured values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `ratio <= paper_bound` (upper bound on the algorithm).
    RatioAtMost,
    /// `ratio >= paper_bound` (the construction forces the ratio up).
    RatioAtLeast,
    /// `online_size >= paper_bound`.
    OnlineAtLeast,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RatioReport {
    pub online_size: Option<usize>,
    pub offline_size: Option<usize>,
    pub ratio: Option<f64>,
    pub paper_bound: Option<f64>,
    pub bound_kind: Option<BoundKind>,
    pub bound_satisfied: bool,
    /// Exact independent kissing number of the instance graph.
    pub zeta: Option<usize>,
    pub funke_bound: Option<f64>,
    pub funke_asymptotic: Option<f64>,
    pub runtime_ms: Option<f64>,
    /// Error kind when the experiment did not complete.
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_detail: Option<String>,
}

const SLACK: f64 = 1e-9;

/// Runs one experiment. Failures are reported in the `error` field together
/// with whatever was computed before the failure.
pub fn run_experiment(spec: &ExperimentSpec) -> RatioReport {
    let start = Instant::now();
    let mut report = RatioReport::default();
    if let Err(e) = evaluate(spec, &mut report) {
        report.bound_satisfied = false;
        report.error = Some(e.kind().to_string());
        report.error_detail = Some(e.to_string());
    }
    report.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    report
}

fn evaluate(spec: &ExperimentSpec, report: &mut RatioReport) -> Result<()> {
    let tol = Tolerance::default();
    let family = spec.family()?;
    let inst = build_instance(spec)?;
    let seq = inst.sequence(tol)?;
    let g = seq.graph(tol)?;

    let online = match spec.algorithm {
        Algorithm::Gds => run_gds(&seq, tol)?.solution().len(),
        Algorithm::Gcds => run_gcds(&seq, tol)?.solution().len(),
        Algorithm::GreedyIs => greedy_is(&seq, tol)?.len(),
    };
    report.online_size = Some(online);
    if family == Some(Family::UnitDisk) && spec.algorithm == Algorithm::Gcds {
        report.funke_asymptotic = Some(FUNKE_ASYMPTOTIC);
    }

    let offline = match spec.algorithm {
        Algorithm::Gds => exact_mds(&g)?.len(),
        Algorithm::Gcds => exact_mcds(&g)?.len(),
        Algorithm::GreedyIs => max_independent_set_exact(&g)?.len(),
    };
    if offline == 0 {
        return Err(Error::InvalidParams("empty instance".into()));
    }
    report.offline_size = Some(offline);
    let ratio = online as f64 / offline as f64;
    report.ratio = Some(ratio);
    if report.funke_asymptotic.is_some() {
        report.funke_bound = Some(FUNKE_SLOPE * offline as f64 + FUNKE_OFFSET);
    }

    let zeta = independent_kissing_number(&g)?;
    report.zeta = Some(zeta);
    let z = zeta.max(1);

    let (kind, bound) = primary_bound(spec, family, z, online)?;
    report.bound_kind = Some(kind);
    report.paper_bound = Some(bound);
    let primary = match kind {
        BoundKind::RatioAtMost => ratio <= bound + SLACK,
        BoundKind::RatioAtLeast => ratio >= bound - SLACK,
        BoundKind::OnlineAtLeast => online as f64 >= bound - SLACK,
    };
    // Guarantees of the algorithms themselves, which every instance must meet.
    let universal = match spec.algorithm {
        Algorithm::Gds => online <= z * offline,
        Algorithm::GreedyIs => offline <= z * online,
        Algorithm::Gcds => {
            online as f64 <= gcds_absolute(z, online) * offline as f64 + SLACK
                && online as f64 <= gcds_asymptotic(z, offline) + SLACK
        }
    };
    report.bound_satisfied = primary && universal;
    Ok(())
}

fn primary_bound(spec: &ExperimentSpec, family: Option<Family>, zeta: usize, online: usize) -> Result<(BoundKind, f64)> {
    let row = family.map(bound_row);
    let d = family.map_or(2, |f| f.dimension());
    let family_zeta = || {
        row.map(|r| r.zeta.eval(d))
            .ok_or_else(|| Error::InvalidParams("no family bound for an abstract instance".into()))
    };
    Ok(match (spec.algorithm, spec.construction) {
        (Algorithm::Gds, Construction::Witness) => (BoundKind::RatioAtLeast, family_zeta()?),
        (Algorithm::Gds, _) => (BoundKind::RatioAtMost, zeta as f64),
        (Algorithm::GreedyIs, Construction::Witness | Construction::Adaptive) => {
            (BoundKind::RatioAtMost, 1.0 / family_zeta()?)
        }
        (Algorithm::GreedyIs, _) => (BoundKind::RatioAtLeast, 1.0 / zeta as f64),
        (Algorithm::Gcds, Construction::Block | Construction::Path) => {
            let row = row.expect("block constructions are geometric");
            let f = match spec.variant_or_default() {
                Some(Variant::Opt1) => row.opt1,
                _ => row.general,
            };
            let f = f.ok_or_else(|| Error::InvalidParams(format!("no block bound for {}", spec.family)))?;
            (BoundKind::RatioAtLeast, f.eval(d))
        }
        (Algorithm::Gcds, Construction::Cycles) => {
            let k = spec.k.unwrap_or(0) as f64;
            let m = spec.m.unwrap_or(1) as f64;
            (BoundKind::OnlineAtLeast, (k - 1.0) * m - 1.0)
        }
        (Algorithm::Gcds, _) => (BoundKind::RatioAtMost, gcds_absolute(zeta, online)),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    pub parallel: bool,
    /// Fill `runtime_ms`; off by default so that reports are reproducible byte for byte.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub rows: Vec<(ExperimentSpec, RatioReport)>,
}

pub const CSV_HEADER: [&str; 22] = [
    "family",
    "construction",
    "algorithm",
    "variant",
    "d",
    "k",
    "m",
    "n",
    "eps",
    "seed",
    "online_size",
    "offline_size",
    "ratio",
    "paper_bound",
    "bound_satisfied",
    "runtime_ms",
    "error",
    "zeta",
    "bound_kind",
    "funke_bound",
    "funke_asymptotic",
    "error_detail",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

impl SuiteReport {
    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|(_, r)| r.bound_satisfied)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for (s, r) in &self.rows {
            let record = [
                s.family.clone(),
                s.construction.to_string(),
                s.algorithm.to_string(),
                opt(&s.variant_or_default()),
                opt(&s.d),
                opt(&s.k),
                opt(&s.m),
                opt(&s.n),
                opt(&s.eps),
                s.seed.to_string(),
                opt(&r.online_size),
                opt(&r.offline_size),
                num(r.ratio),
                num(r.paper_bound),
                r.bound_satisfied.to_string(),
                num(r.runtime_ms),
                opt(&r.error),
                opt(&r.zeta),
                opt(&r.bound_kind),
                num(r.funke_bound),
                num(r.funke_asymptotic),
                opt(&r.error_detail),
            ];
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Runs every spec; rows come back in input order whether or not they run in
/// parallel, and a failing row never stops the others.
pub fn run_suite(specs: &[ExperimentSpec], opts: SuiteOptions) -> SuiteReport {
    let run = |s: &ExperimentSpec| {
        let mut r = run_experiment(s);
        if !opts.timing {
            r.runtime_ms = None;
        }
        (s.clone(), r)
    };
    let rows = if opts.parallel { specs.par_iter().map(run).collect() } else { specs.iter().map(run).collect() };
    SuiteReport { rows }
}

/// Every bound that the generators reproduce, at desk scale.
pub fn reproduction_suite() -> Vec<ExperimentSpec> {
    use Algorithm::*;
    use Construction::*;
    let mut v = vec![
        ExperimentSpec::new("unit-disk", Witness, Gds),
        ExperimentSpec::new("fixed-square", Witness, Gds),
        ExperimentSpec::new("fixed-cube", Witness, Gds).d(3),
        ExperimentSpec::new("fixed-cube", Witness, Gds).d(4),
        ExperimentSpec::new("unit-ball", Witness, Gds),
        ExperimentSpec::new("triangle", Witness, Gds),
        ExperimentSpec::new("fixed-polygon", Witness, Gds).k(7),
        ExperimentSpec::new("arbitrary-square", Witness, Gds),
        ExperimentSpec::new("arbitrary-cube", Witness, Gds).d(3),
    ];
    v.extend((5..=10).map(|k| ExperimentSpec::new("arbitrary-polygon", Witness, Gds).k(k)));
    v.push(ExperimentSpec::new("unit-disk", Witness, GreedyIs));
    v.extend((1..=3).map(|r| ExperimentSpec::new("unit-disk", Adaptive, GreedyIs).m(r)));
    for (k, m) in [(8, 1), (8, 2), (10, 1), (10, 2)] {
        v.push(ExperimentSpec::new("abstract", Cycles, Gcds).k(k).m(m));
    }
    for (family, d) in [
        ("unit-disk", None),
        ("fixed-square", None),
        ("fixed-cube", Some(3)),
        ("arbitrary-square", None),
        ("arbitrary-cube", Some(3)),
        ("unit-ball", None),
        ("triangle", None),
    ] {
        let mut s = ExperimentSpec::new(family, Block, Gcds).variant(Variant::Opt1);
        s.d = d;
        v.push(s);
    }
    for family in ["unit-disk", "fixed-square", "arbitrary-square", "triangle"] {
        v.push(ExperimentSpec::new(family, Path, Gcds).variant(Variant::General).m(2));
    }
    for seed in 0..5 {
        v.push(ExperimentSpec::new("unit-disk", Random, Gcds).n(18).seed(seed));
        v.push(ExperimentSpec::new("unit-disk", Random, Gds).n(18).seed(seed));
        v.push(ExperimentSpec::new("unit-disk", Random, GreedyIs).n(18).seed(seed));
    }
    v
}
