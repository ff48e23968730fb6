//! Exploratory probes for two open questions. They never fail; they count
//! what they see and keep interesting inputs.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gen::{certified_ppos, hurwitz1, ppos1, psim_pair};
use super::{run_suite, uni, Ctx, Evidence, Observation, Outcome};
use crate::construct::double_slice_det;
use crate::error::Result;
use crate::interlace::{check_relation, Relation};
use crate::uniroots::{all_roots, common_interlacer, hurwitz_verdict, real_rooted};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Question {
    /// Do `~P` (or `~H`) pairs always have a common interlacer?
    Q1,
    /// Is the double-coefficient determinant of a positive polynomial stable?
    Q2,
}

impl Question {
    pub fn suite_id(self) -> &'static str {
        match self {
            Question::Q1 => "q1-probe",
            Question::Q2 => "q2-probe",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub question: Question,
    pub budget: usize,
    pub seed: u64,
    pub histogram: BTreeMap<String, usize>,
    pub skips: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
}

/// Runs `budget` probe trials.
pub fn probe_question(which: Question, budget: usize, seed: u64) -> Result<ProbeReport> {
    let r = run_suite(which.suite_id(), Some(budget), seed)?;
    Ok(ProbeReport {
        question: which,
        budget,
        seed,
        histogram: r.histogram,
        skips: r.skips,
        observations: r.observations,
    })
}

fn observed(bucket: &str) -> Outcome {
    Outcome::Observed {
        bucket: bucket.to_string(),
        observation: None,
    }
}

pub(super) fn q1_trial(ctx: &mut Ctx) -> Result<Outcome> {
    let deg = ctx.rng.gen_range(1..=5);
    let (f, g, family) = match ctx.trial % 3 {
        0 => {
            let (f, g) = psim_pair(&mut ctx.rng, deg);
            (f, g, "P")
        }
        1 => {
            let dg = if deg > 1 && ctx.rng.gen_bool(0.5) { deg - 1 } else { deg };
            (ppos1(&mut ctx.rng, deg), ppos1(&mut ctx.rng, dg), "P")
        }
        _ => {
            let dg = if deg > 1 && ctx.rng.gen_bool(0.5) { deg - 1 } else { deg };
            (hurwitz1(&mut ctx.rng, deg), hurwitz1(&mut ctx.rng, dg), "H")
        }
    };
    let (fm, gm) = (uni(&f), uni(&g));
    let rel = if family == "P" { Relation::PSim } else { Relation::HSim };
    if !check_relation(&fm, &gm, rel, &ctx.rel_cfg)?.accepted() {
        return Ok(observed(&format!("~{family} fails")));
    }
    if !real_rooted(&f, 1e-9)? || !real_rooted(&g, 1e-9)? {
        return Ok(observed(&format!("~{family}, not real-rooted")));
    }
    match common_interlacer(&f, &g, 1e-9)? {
        Some(_) => Ok(observed(&format!("~{family}, interlacer found"))),
        None => Ok(Outcome::Observed {
            bucket: format!("~{family}, no interlacer"),
            observation: Some(Box::new(Observation {
                trial: ctx.trial,
                label: format!("~{family} pair without a common interlacer"),
                inputs: vec![fm, gm],
                evidence: None,
            })),
        }),
    }
}

pub(super) fn q2_trial(ctx: &mut Ctx) -> Result<Outcome> {
    let big = certified_ppos(&mut ctx.rng, 3, 2)?;
    let r = 1 + ctx.trial % 3;
    let det = double_slice_det(&big, 1, 2, r)?;
    if det.is_zero() {
        return Ok(observed(&format!("r={r} zero")));
    }
    let u = det.to_univariate(0)?;
    if u.degree() == Some(0) {
        let c = u.coeffs()[0];
        return Ok(observed(&format!("r={r} constant {}", if c.re > 0.0 { "positive" } else { "non-positive" })));
    }
    if hurwitz_verdict(&u, 1e-9)?.stable {
        return Ok(observed(&format!("r={r} stable")));
    }
    let roots = all_roots(&u, 1e-9)?.roots;
    Ok(Outcome::Observed {
        bucket: format!("r={r} unstable"),
        observation: Some(Box::new(Observation {
            trial: ctx.trial,
            label: format!("r={r} determinant has a root in the closed right half plane"),
            inputs: vec![big, det],
            evidence: Some(Evidence::Roots { roots }),
        })),
    })
}
