//! Bit-exact verification of plans by exhaustive or sampled messages.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{build_plan, Corner, PlanError, SchemePlan};
use crate::lda_bounds::{Rational, Regime, SymLdaConfig};
use crate::lda_core::{lda_outputs, BitVec};
use crate::par::{sum_range, Exec};

pub const MAX_EXHAUSTIVE_BITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Exhaustive,
    Random { seed: u64, trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    pub messages_tested: u64,
    pub failures: u64,
    /// The target rates, present only when no message failed.
    pub achieved_rates: Option<(usize, usize)>,
}

impl VerificationReport {
    pub fn verified(&self) -> bool {
        self.failures == 0
    }
}

/// Message pair number `t` of a random run: stream `t` of a ChaCha generator keyed by `seed`.
fn random_message(seed: u64, t: u64, r1: usize, r2: usize) -> (BitVec, BitVec) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    let mut draw = |len: usize| {
        let mut w = BitVec::zeros(len);
        for i in 0..len {
            w.set(i, rng.gen());
        }
        w
    };
    let w1 = draw(r1);
    let w2 = draw(r2);
    (w1, w2)
}

fn split_index(v: u64, r1: usize, r2: usize) -> (BitVec, BitVec) {
    (BitVec::from_u64(r1, v), BitVec::from_u64(r2, v >> r1))
}

fn fails(plan: &SchemePlan, w1: &BitVec, w2: &BitVec) -> u64 {
    let (x1, x2, x0) = plan.encode_unchecked(w1, w2);
    let (y1, y2) = lda_outputs(plan.channel(), &x1, &x2, &x0).expect("plan vectors have length m");
    let (e1, e2) = plan.decode_unchecked(&y1, &y2);
    u64::from(&e1 != w1 || &e2 != w2)
}

/// [`verify_plan_with`] using the default executor.
pub fn verify_plan(plan: &SchemePlan, mode: VerifyMode) -> Result<VerificationReport, PlanError> {
    verify_plan_with(plan, mode, Exec::Auto)
}

/// Encodes, passes through the channel and decodes every (or every sampled)
/// message pair. The report does not depend on the executor.
pub fn verify_plan_with(
    plan: &SchemePlan,
    mode: VerifyMode,
    exec: Exec,
) -> Result<VerificationReport, PlanError> {
    let (r1, r2) = plan.target_rates();
    let (tested, failures) = match mode {
        VerifyMode::Exhaustive => {
            let n = r1 + r2;
            if n > MAX_EXHAUSTIVE_BITS {
                return Err(PlanError::TooManyBits(n));
            }
            let count = 1u64 << n;
            let failures = sum_range(exec, count, |v| {
                let (w1, w2) = split_index(v, r1, r2);
                fails(plan, &w1, &w2)
            });
            (count, failures)
        }
        VerifyMode::Random { seed, trials } => {
            let failures = sum_range(exec, trials, |t| {
                let (w1, w2) = random_message(seed, t, r1, r2);
                fails(plan, &w1, &w2)
            });
            (trials, failures)
        }
    };
    Ok(VerificationReport {
        mode,
        messages_tested: tested,
        failures,
        achieved_rates: (failures == 0).then_some((r1, r2)),
    })
}

/// Several plans used on consecutive channel uses; each user's message is the
/// concatenation of its per-use messages.
#[derive(Debug, Clone)]
pub struct TimeSharedPlan {
    segments: Vec<SchemePlan>,
}

impl TimeSharedPlan {
    pub fn new(segments: Vec<SchemePlan>) -> Result<Self, PlanError> {
        if segments.is_empty() {
            return Err(PlanError::Invalid("time sharing needs at least one plan".into()));
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[SchemePlan] {
        &self.segments
    }

    /// Total information bits per user over the whole block.
    pub fn total_bits(&self) -> (usize, usize) {
        self.segments.iter().fold((0, 0), |(a, b), p| {
            let (r1, r2) = p.target_rates();
            (a + r1, b + r2)
        })
    }

    /// Rates per channel use.
    pub fn rates(&self) -> (Rational, Rational) {
        let (a, b) = self.total_bits();
        let k = self.segments.len() as i64;
        (Rational::new(a as i64, k), Rational::new(b as i64, k))
    }

    fn split(&self, w: &BitVec, user_one: bool) -> Vec<BitVec> {
        let mut off = 0;
        self.segments
            .iter()
            .map(|p| {
                let (r1, r2) = p.target_rates();
                let len = if user_one { r1 } else { r2 };
                let mut part = BitVec::zeros(len);
                for i in 0..len {
                    part.set(i, w.get(off + i));
                }
                off += len;
                part
            })
            .collect()
    }

    fn join(parts: &[BitVec]) -> BitVec {
        let total = parts.iter().map(BitVec::len).sum();
        let mut w = BitVec::zeros(total);
        let mut off = 0;
        for p in parts {
            for i in 0..p.len() {
                w.set(off + i, p.get(i));
            }
            off += p.len();
        }
        w
    }

    /// Per-use channel outputs.
    pub fn outputs(&self, w1: &BitVec, w2: &BitVec) -> Result<Vec<(BitVec, BitVec)>, PlanError> {
        let (b1, b2) = self.total_bits();
        for (w, r) in [(w1, b1), (w2, b2)] {
            if w.len() != r {
                return Err(PlanError::MessageLength { expected: r, got: w.len() });
            }
        }
        let p1 = self.split(w1, true);
        let p2 = self.split(w2, false);
        self.segments
            .iter()
            .zip(p1.iter().zip(&p2))
            .map(|(p, (a, b))| p.outputs(a, b))
            .collect()
    }

    pub fn decode(&self, ys: &[(BitVec, BitVec)]) -> Result<(BitVec, BitVec), PlanError> {
        if ys.len() != self.segments.len() {
            return Err(PlanError::Invalid(format!(
                "expected {} channel uses, got {}",
                self.segments.len(),
                ys.len()
            )));
        }
        let mut d1 = Vec::new();
        let mut d2 = Vec::new();
        for (p, (y1, y2)) in self.segments.iter().zip(ys) {
            let (a, b) = p.decode(y1, y2)?;
            d1.push(a);
            d2.push(b);
        }
        Ok((Self::join(&d1), Self::join(&d2)))
    }

    /// Exhaustive check over the joint message space.
    pub fn verify(&self, exec: Exec) -> Result<VerificationReport, PlanError> {
        let (b1, b2) = self.total_bits();
        let n = b1 + b2;
        if n > MAX_EXHAUSTIVE_BITS {
            return Err(PlanError::TooManyBits(n));
        }
        let count = 1u64 << n;
        let failures = sum_range(exec, count, |v| {
            let (w1, w2) = split_index(v, b1, b2);
            let ok = self
                .outputs(&w1, &w2)
                .and_then(|ys| self.decode(&ys))
                .map(|(e1, e2)| e1 == w1 && e2 == w2)
                .unwrap_or(false);
            u64::from(!ok)
        });
        Ok(VerificationReport {
            mode: VerifyMode::Exhaustive,
            messages_tested: count,
            failures,
            achieved_rates: (failures == 0).then_some((b1, b2)),
        })
    }
}

/// Time division at `alpha = 1`: `uses_r1` channel uses serve user 1 alone,
/// then `uses_r2` serve user 2 alone.
pub fn alpha_one_time_share(
    cfg: &SymLdaConfig,
    uses_r1: usize,
    uses_r2: usize,
) -> Result<TimeSharedPlan, PlanError> {
    if cfg.regime() != Regime::AlphaOne {
        return Err(PlanError::UnsupportedRegime(cfg.regime()));
    }
    let first = build_plan(cfg, Corner::R1Dominant)?;
    let second = build_plan(cfg, Corner::R2Dominant)?;
    let mut segments = vec![first; uses_r1];
    segments.extend(std::iter::repeat_n(second, uses_r2));
    TimeSharedPlan::new(segments)
}
