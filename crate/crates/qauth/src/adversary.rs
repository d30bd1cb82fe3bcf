//! Eve strategies and Monte Carlo estimation of detection rates,
//! impersonation acceptance, and adversarial communication cost.
//!
//! Trials are independent: each draws its own seed from the master seed,
//! so the parallel and sequential execution paths produce bit-identical
//! estimates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ledger::{notation, AuthTask, ComplexityExpr, ModelClass};
use crate::protocols::{find_spec, run_simulable, Outcome, ProtocolError, RunParams};
use crate::qsim::BasisSpec;
use crate::rng::derive_seed;

/// How Eve picks a measurement basis per intercepted qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisStrategy {
    Fixed(BasisSpec),
    /// Uniform over computational and diagonal.
    UniformRandom,
}

/// What a substitution attack does to an in-flight payload.
#[derive(Debug, Clone, PartialEq)]
pub enum TamperRule {
    /// X on the qubit at this index of every intercepted quantum send.
    FlipQubit(usize),
    /// XOR this mask onto every classical payload (positional; payload
    /// length is preserved).
    RewriteClassical(Vec<bool>),
}

/// How an impersonating Eve fakes missing key material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GuessStrategy {
    UniformKeyGuess,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdversaryKind {
    None,
    InterceptResend {
        basis: BasisStrategy,
        /// Restrict interception to sends with this tag (e.g. one leg).
        tag_filter: Option<String>,
    },
    Substitution(TamperRule),
    Impersonation(GuessStrategy),
}

#[derive(Debug, Error)]
pub enum AdversaryError {
    #[error("estimation requires at least 100 trials, got {0}")]
    TooFewTrials(u64),
    #[error("impersonation acceptance is defined for identity protocols; `{0}` authenticates data origin")]
    NotIdentity(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// A Monte Carlo probability estimate with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub point: f64,
    pub lo: f64,
    pub hi: f64,
    pub trials: u64,
    pub seed: u64,
}

impl RateEstimate {
    pub fn from_counts(successes: u64, trials: u64, seed: u64) -> RateEstimate {
        assert!(trials >= 1 && successes <= trials);
        // 95% two-sided normal quantile
        let z = 1.959963984540054_f64;
        let n = trials as f64;
        let p = successes as f64 / n;
        let denom = 1.0 + z * z / n;
        let center = p + z * z / (2.0 * n);
        let spread = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
        RateEstimate {
            point: p,
            lo: (((center - spread) / denom).max(0.0)).min(p),
            hi: (((center + spread) / denom).min(1.0)).max(p),
            trials,
            seed,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn check_simulable(id: &str) -> Result<(), AdversaryError> {
    let spec = find_spec(id)?;
    if !spec.simulable {
        return Err(AdversaryError::Protocol(ProtocolError::NotSimulable(
            id.to_string(),
        )));
    }
    Ok(())
}

/// Count trials whose outcome satisfies `pred`, sequentially.
///
/// Each trial runs in a fresh session seeded by `derive_seed(seed, i)`.
pub fn count_matching_sequential(
    id: &str,
    params: &RunParams,
    adversary: &AdversaryKind,
    trials: u64,
    seed: u64,
    pred: impl Fn(&Outcome) -> bool + Sync,
) -> Result<u64, AdversaryError> {
    let mut hits = 0;
    for i in 0..trials {
        let (outcome, _) = run_simulable(id, params, adversary.clone(), derive_seed(seed, i))?;
        if pred(&outcome) {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Count trials whose outcome satisfies `pred`.
///
/// Runs trials in parallel when the `parallel` feature is enabled;
/// results are identical to [`count_matching_sequential`] either way.
pub fn count_matching(
    id: &str,
    params: &RunParams,
    adversary: &AdversaryKind,
    trials: u64,
    seed: u64,
    pred: impl Fn(&Outcome) -> bool + Sync,
) -> Result<u64, AdversaryError> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let (outcome, _) =
                    run_simulable(id, params, adversary.clone(), derive_seed(seed, i))?;
                Ok(u64::from(pred(&outcome)))
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }
    #[cfg(not(feature = "parallel"))]
    count_matching_sequential(id, params, adversary, trials, seed, pred)
}

/// Fraction of runs that flag eavesdropping under the given adversary.
pub fn detection_rate(
    id: &str,
    params: &RunParams,
    adversary: &AdversaryKind,
    trials: u64,
    seed: u64,
) -> Result<RateEstimate, AdversaryError> {
    check_simulable(id)?;
    if trials < 100 {
        return Err(AdversaryError::TooFewTrials(trials));
    }
    let hits = count_matching(id, params, adversary, trials, seed, |o| {
        o.eavesdrop_detected
    })?;
    Ok(RateEstimate::from_counts(hits, trials, seed))
}

/// Fraction of runs in which Eve, holding no key and no pair halves, is
/// accepted as the claimant. Identity protocols only.
pub fn impersonation_acceptance(
    id: &str,
    params: &RunParams,
    trials: u64,
    seed: u64,
) -> Result<RateEstimate, AdversaryError> {
    check_simulable(id)?;
    let spec = find_spec(id)?;
    if spec.kind != AuthTask::Identity {
        return Err(AdversaryError::NotIdentity(id.to_string()));
    }
    if trials < 100 {
        return Err(AdversaryError::TooFewTrials(trials));
    }
    let adversary = AdversaryKind::Impersonation(GuessStrategy::UniformKeyGuess);
    let hits = count_matching(id, params, &adversary, trials, seed, |o| o.accepted)?;
    Ok(RateEstimate::from_counts(hits, trials, seed))
}

/// Per-trial restart ceiling for [`adversarial_cost`]; a trial that never
/// reaches acceptance within it yields an infinite restart factor.
const RESTART_CAP: u64 = 100_000;

/// Expected communication cost until an accepted run, restart-on-detection.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialCost {
    /// Cost of one run of the protocol.
    pub per_run: ComplexityExpr,
    /// Fraction of single runs that fail (detected or corrupted).
    pub failure: RateEstimate,
    /// Mean number of runs until acceptance; `inf` if the cap was hit.
    pub restart_factor: f64,
}

impl AdversarialCost {
    /// Notation with the adversarial subscript, e.g. `Q_E(f_I) = 1.33 × (3n)`.
    pub fn notation(&self, model: ModelClass, task: AuthTask) -> String {
        let honest = notation(model, &self.per_run, task, true);
        let (lhs, rhs) = honest.split_once(" = ").expect("notation has an equals sign");
        if (self.restart_factor - 1.0).abs() < f64::EPSILON {
            format!("{lhs} = {rhs}")
        } else {
            format!("{lhs} = {:.2} × ({rhs})", self.restart_factor)
        }
    }
}

/// Estimate the restart-until-accept cost of a protocol under an adversary.
///
/// Each trial replays the protocol with fresh derived seeds until a run is
/// accepted (failed runs include undetected corruption: the parties notice
/// at the acceptance check and start over). With no adversary this
/// short-circuits to the declared expression and a restart factor of 1.
pub fn adversarial_cost(
    id: &str,
    params: &RunParams,
    adversary: &AdversaryKind,
    trials: u64,
    seed: u64,
) -> Result<AdversarialCost, AdversaryError> {
    check_simulable(id)?;
    let per_run = find_spec(id)?.declared_complexity;
    if matches!(adversary, AdversaryKind::None) {
        return Ok(AdversarialCost {
            per_run,
            failure: RateEstimate::from_counts(0, trials.max(1), seed),
            restart_factor: 1.0,
        });
    }
    if trials < 100 {
        return Err(AdversaryError::TooFewTrials(trials));
    }

    let trial = |i: u64| -> Result<(u64, u64), AdversaryError> {
        // (failures among first runs, runs until acceptance)
        let trial_seed = derive_seed(seed, i);
        let mut runs = 0;
        let mut first_failed = 0;
        loop {
            let (outcome, _) =
                run_simulable(id, params, adversary.clone(), derive_seed(trial_seed, runs))?;
            runs += 1;
            if runs == 1 && !outcome.accepted {
                first_failed = 1;
            }
            if outcome.accepted || runs >= RESTART_CAP {
                let capped = if outcome.accepted { runs } else { u64::MAX };
                return Ok((first_failed, capped));
            }
        }
    };

    #[cfg(feature = "parallel")]
    let results: Result<Vec<(u64, u64)>, AdversaryError> = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(trial).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Result<Vec<(u64, u64)>, AdversaryError> = (0..trials).map(trial).collect();
    let results = results?;

    let failures: u64 = results.iter().map(|&(f, _)| f).sum();
    let restart_factor = if results.iter().any(|&(_, r)| r == u64::MAX) {
        f64::INFINITY
    } else {
        results.iter().map(|&(_, r)| r as f64).sum::<f64>() / trials as f64
    };
    Ok(AdversarialCost {
        per_run,
        failure: RateEstimate::from_counts(failures, trials, seed),
        restart_factor,
    })
}
