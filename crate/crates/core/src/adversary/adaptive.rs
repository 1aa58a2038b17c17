use super::{generate_zeta_witness, Family, Params};
use crate::error::{Error, Result};
use crate::geometry::{translate, Shape, Tolerance};
use crate::online::{ArrivalSequence, OnlineAlgorithm, OnlineRun, OnlineRunner};

/// Transcript of an adaptive game against an online independent-set algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryRun {
    pub sequence: ArrivalSequence,
    pub run: OnlineRun,
    /// Fresh objects the algorithm accepted.
    pub accepted: usize,
}

/// Each round presents a fresh copy of the witness core far from everything
/// so far. If the algorithm takes it, the witness independents around it
/// follow; they all meet the accepted object and are pairwise apart.
pub fn adaptive_mis_adversary(
    alg: &dyn OnlineAlgorithm,
    rounds: usize,
    family: Family,
    params: &Params,
) -> Result<AdversaryRun> {
    if rounds == 0 {
        return Err(Error::InvalidParams("at least one round is required".into()));
    }
    let witness = generate_zeta_witness(family, params)?;
    let origin = witness.core.center().clone();
    let reach = witness
        .independents
        .iter()
        .map(|s| s.center().distance(&origin) + s.bounding_radius())
        .fold(witness.core.bounding_radius(), f64::max);
    let spacing = 4.0 * reach + 4.0;
    let d = family.dimension();

    let tol = Tolerance::default();
    let mut runner = OnlineRunner::new(alg, tol);
    let mut presented: Vec<Shape> = Vec::new();
    let mut accepted = 0;
    for r in 0..rounds {
        let mut offset = vec![0.0; d];
        offset[0] = spacing * r as f64;
        let fresh = translate(&witness.core, &offset)?;
        let v = presented.len();
        runner.reveal_object(&fresh)?;
        presented.push(fresh);
        if runner.state().a.contains(v) {
            accepted += 1;
            for s in &witness.independents {
                let s = translate(s, &offset)?;
                runner.reveal_object(&s)?;
                presented.push(s);
            }
        }
    }
    Ok(AdversaryRun { sequence: ArrivalSequence::Geometric(presented), run: runner.finish(), accepted })
}
