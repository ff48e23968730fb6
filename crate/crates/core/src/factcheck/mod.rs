//! Randomized property suites, one per stated fact, plus two exploratory
//! probes that only record what they see.

mod gen;
mod probes;
mod suites;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interlace::RelationVerdict;
use crate::poly::{ComplexPoint, MultiPoly, UniPoly, C64};
use crate::stability::SamplerConfig;

pub use probes::{probe_question, Question, ProbeReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    /// A refutation fails the suite.
    Fact,
    /// Never fails; records observations.
    Probe,
}

/// Evidence attached to a refutation or observation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// A zero with every coordinate in the open right half plane.
    Zero { point: ComplexPoint, value: Option<C64> },
    /// A necessary condition for stability failed.
    Necessary { reason: String },
    Relation { verdict: RelationVerdict },
    /// `(f/g)(sigma)` outside the target region.
    Ratio { sigma: C64, value: C64 },
    Roots { roots: Vec<C64> },
    /// Two real root sequences that were compared.
    RootOrder { f: Vec<f64>, g: Vec<f64> },
    Mismatch { expected: f64, got: f64 },
    Note { text: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refutation {
    pub trial: usize,
    pub input: MultiPoly,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub others: Vec<MultiPoly>,
    /// The polynomial the witness refers to, when it differs from `input`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<MultiPoly>,
    pub witness: Option<Evidence>,
    pub reason: String,
}

impl Refutation {
    /// Polynomial the witness was found for.
    pub fn refuted(&self) -> &MultiPoly {
        self.output.as_ref().unwrap_or(&self.input)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub trial: usize,
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<MultiPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub kind: SuiteKind,
    pub statement: String,
    pub trials: usize,
    pub passes: usize,
    pub skips: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub skip_reasons: BTreeMap<String, usize>,
    pub refutations: Vec<Refutation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub histogram: BTreeMap<String, usize>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.kind == SuiteKind::Probe || self.refutations.is_empty()
    }

    /// Drops wall-clock data so reports can be compared byte for byte.
    pub fn without_timing(mut self) -> Self {
        self.ms = None;
        self
    }
}

/// What one trial produced.
pub(crate) enum Outcome {
    Pass,
    /// Pass, counted under a histogram bucket.
    Bucket(String),
    Skip(String),
    Refuted(Box<Refutation>),
    Observed { bucket: String, observation: Option<Box<Observation>> },
}

impl Outcome {
    pub(crate) fn skip(reason: &str) -> Self {
        Outcome::Skip(reason.to_string())
    }

    pub(crate) fn refuted(
        trial: usize,
        input: &MultiPoly,
        others: &[MultiPoly],
        output: Option<&MultiPoly>,
        witness: Option<Evidence>,
        reason: impl Into<String>,
    ) -> Self {
        Outcome::Refuted(Box::new(Refutation {
            trial,
            input: input.clone(),
            others: others.to_vec(),
            output: output.cloned(),
            witness,
            reason: reason.into(),
        }))
    }
}

/// Per-trial context handed to suite bodies.
pub(crate) struct Ctx {
    pub trial: usize,
    pub rng: ChaCha8Rng,
    /// Sampler for single stability decisions.
    pub cfg: SamplerConfig,
    /// Cheaper sampler for relation checks, which call it once per
    /// multiplier.
    pub rel_cfg: SamplerConfig,
    pub seed: u64,
}

pub(crate) type SuiteFn = fn(&mut Ctx) -> Result<Outcome>;

pub struct SuiteInfo {
    pub id: &'static str,
    pub statement: &'static str,
    pub kind: SuiteKind,
    pub default_trials: usize,
    pub(crate) body: SuiteFn,
}

/// Restrictions sampled per stability decision inside a suite.
pub const SUITE_SAMPLER_TRIALS: usize = 256;
/// Restrictions per multiplier inside relation checks.
pub const SUITE_RELATION_TRIALS: usize = 64;
/// Trials for closure suites when none are requested.
pub const CLOSURE_TRIALS: usize = 200;
/// Trials for construction and relation suites when none are requested.
pub const CONSTRUCTION_TRIALS: usize = 50;

/// Every suite, in registry order.
pub fn registry() -> &'static [SuiteInfo] {
    suites::REGISTRY
}

pub fn suite_ids() -> Vec<&'static str> {
    registry().iter().map(|s| s.id).collect()
}

pub fn lookup(id: &str) -> Result<&'static SuiteInfo> {
    registry()
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownSuite(id.to_string()))
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3))
}

fn trial_ctx(id: &str, seed: u64, trial: usize) -> Ctx {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(id));
    rng.set_stream(trial as u64);
    let inner = fnv1a(id).rotate_left(17) ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ trial as u64;
    Ctx {
        trial,
        rng,
        cfg: SamplerConfig::default().with_trials(SUITE_SAMPLER_TRIALS).with_seed(inner),
        rel_cfg: SamplerConfig::default().with_trials(SUITE_RELATION_TRIALS).with_seed(inner),
        seed: inner,
    }
}

/// Runs `trials` trials of suite `id` (its default count when `None`).
/// Deterministic in `(id, trials, seed)` apart from `ms`.
pub fn run_suite(id: &str, trials: Option<usize>, seed: u64) -> Result<SuiteReport> {
    let info = lookup(id)?;
    let trials = trials.unwrap_or(info.default_trials);
    let start = Instant::now();
    let mut report = SuiteReport {
        suite: info.id.to_string(),
        kind: info.kind,
        statement: info.statement.to_string(),
        trials,
        passes: 0,
        skips: 0,
        skip_reasons: BTreeMap::new(),
        refutations: Vec::new(),
        observations: Vec::new(),
        histogram: BTreeMap::new(),
        seed,
        ms: None,
    };
    for trial in 0..trials {
        let mut ctx = trial_ctx(info.id, seed, trial);
        let outcome = match (info.body)(&mut ctx) {
            Ok(o) => o,
            // Numerical breakdowns on a random input are skips, not verdicts.
            Err(e @ (Error::NoConvergence { .. } | Error::Numerical(_))) => Outcome::Skip(format!("numerical: {e}")),
            Err(e) => return Err(e),
        };
        match outcome {
            Outcome::Pass => report.passes += 1,
            Outcome::Bucket(b) => {
                report.passes += 1;
                *report.histogram.entry(b).or_default() += 1;
            }
            Outcome::Skip(reason) => {
                report.skips += 1;
                *report.skip_reasons.entry(reason).or_default() += 1;
            }
            Outcome::Refuted(r) => {
                if info.kind == SuiteKind::Probe {
                    report.passes += 1;
                    report.observations.push(Observation {
                        trial,
                        label: r.reason.clone(),
                        inputs: std::iter::once(r.input).chain(r.others).collect(),
                        evidence: r.witness,
                    });
                } else {
                    report.refutations.push(*r);
                }
            }
            Outcome::Observed { bucket, observation } => {
                report.passes += 1;
                *report.histogram.entry(bucket).or_default() += 1;
                if let Some(o) = observation {
                    report.observations.push(*o);
                }
            }
        }
    }
    report.ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

/// Runs every registered suite with default trial counts.
pub fn run_all(seed: u64) -> Result<Vec<SuiteReport>> {
    registry().iter().map(|s| run_suite(s.id, None, seed)).collect()
}

pub fn corpus_save(report: &SuiteReport, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn corpus_load(path: &Path) -> Result<SuiteReport> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub(crate) fn uni(p: &UniPoly) -> MultiPoly {
    MultiPoly::from_univariate(p, 1, 0).expect("one variable")
}
