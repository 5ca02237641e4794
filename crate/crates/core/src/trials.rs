//! Randomized lemma instances checked against direct generation.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::patterns::{
    verify_pattern, InstanceRecord, LemmaInstance, LemmaParams, TemplateId, SEVEN_CYC_LAMBDA_MIN, SEVEN_CYC_MU_MIN,
};
use crate::recurrence::{generate, RecurrenceSpec};
use crate::Result;

/// Blocks checked for the unbounded 2cyc pattern.
pub const TWO_CYC_BLOCKS: u64 = 30;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Parameters satisfying the template's hypotheses, small enough to
/// generate directly.
pub fn random_params(template: TemplateId, rng: &mut impl Rng) -> LemmaParams {
    match template {
        TemplateId::SevenCyc => {
            let gamma: u8 = rng.gen_range(0..=6);
            let k: i64 = rng.gen_range(7 + gamma as i64..=140);
            let c: i64 = rng.gen_range(1..=(k - gamma as i64) / 7);
            let g = gamma as usize;
            let lambda = -2 * c + SEVEN_CYC_LAMBDA_MIN[g] + rng.gen_range(0..25);
            let mu = -c + SEVEN_CYC_MU_MIN[g] + rng.gen_range(0..25);
            LemmaParams::SevenCyc { k: b(k), c: b(c), gamma, lambda: b(lambda), mu: b(mu) }
        }
        TemplateId::TwoCyc => {
            let k: i64 = rng.gen_range(1..=40);
            LemmaParams::TwoCyc { k: b(k), m: b(k + 5 + rng.gen_range(0..200)) }
        }
        // μ ≥ 6 so the range reaches past the initial conditions at K+5
        TemplateId::FiveCyc => LemmaParams::FiveCyc { k: b(rng.gen_range(3..=80)), mu: b(rng.gen_range(6..=60)) },
        TemplateId::SixteenCyc1 => {
            let k: i64 = rng.gen_range(1..=30);
            let lambda = k + 32 + rng.gen_range(0..80);
            let mut above = || b(lambda + 1 + rng.gen_range(0..300));
            LemmaParams::SixteenCyc1 { k: b(k), lambda: b(lambda), mu1: above(), mu2: above(), gamma: above() }
        }
        TemplateId::SixteenCyc2 => {
            let k: i64 = rng.gen_range(1..=30);
            let lambda = k + 32 + rng.gen_range(0..80);
            let mut above = || b(lambda + 1 + rng.gen_range(0..300));
            LemmaParams::SixteenCyc2 {
                k: b(k),
                lambda: b(lambda),
                mu1: above(),
                mu2: above(),
                gamma1: above(),
                gamma2: above(),
                gamma3: above(),
            }
        }
    }
}

/// Last index a trial checks: the extent, or 30 blocks for 2cyc.
pub fn check_horizon(inst: &LemmaInstance) -> BigInt {
    match inst.extent() {
        Some(e) => e.clone(),
        None => inst.anchor() + 2 * TWO_CYC_BLOCKS + 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialResult {
    pub instance: InstanceRecord,
    pub checked: u64,
    pub mismatches: usize,
    pub partial: bool,
    /// Both fillers produced identical terms over the covered range.
    pub filler_independent: bool,
}

impl TrialResult {
    pub fn ok(&self) -> bool {
        self.mismatches == 0 && !self.partial && self.filler_independent && self.checked > 0
    }
}

/// Generates the instance twice with independent random fillers and
/// verifies both runs against the closed forms.
pub fn run_trial(inst: &LemmaInstance, rng: &mut impl Rng) -> Result<TrialResult> {
    let horizon = check_horizon(inst);
    let max = usize::try_from(&horizon).map_err(|_| crate::Error::Invalid("horizon too large".into()))?;
    let mut runs = Vec::with_capacity(2);
    for _ in 0..2 {
        let fill: Vec<i64> = (0..inst.filler_len()? + 4).map(|_| rng.gen_range(-1000..=1000)).collect();
        let ics = inst.initial_conditions(|i| b(fill[i % fill.len()]))?;
        runs.push(generate(RecurrenceSpec::three_term(), ics, max)?);
    }
    let first = verify_pattern(inst, &runs[0])?;
    let second = verify_pattern(inst, &runs[1])?;
    let lo = usize::try_from(inst.start()).unwrap_or(1).max(1);
    let filler_independent = (lo..=max).all(|i| runs[0].term_at(i as i64).ok() == runs[1].term_at(i as i64).ok());
    Ok(TrialResult {
        instance: inst.to_record(),
        checked: first.checked,
        mismatches: first.mismatches.len() + second.mismatches.len(),
        partial: first.partial && inst.extent().is_some(),
        filler_independent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub template: TemplateId,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<TrialResult>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.trials
    }
}

/// `trials` random instances of `template`. Trial `i` draws from its own
/// generator seeded by `(seed, i)`, so the report does not depend on
/// scheduling.
pub fn lemma_suite(template: TemplateId, trials: usize, seed: u64) -> Result<SuiteReport> {
    let results: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let inst = LemmaInstance::new(random_params(template, &mut rng))?;
            run_trial(&inst, &mut rng)
        })
        .collect::<Result<_>>()?;
    let passed = results.iter().filter(|r| r.ok()).count();
    let failures = results.into_iter().filter(|r| !r.ok()).collect();
    Ok(SuiteReport { template, seed, trials, passed, failures })
}
