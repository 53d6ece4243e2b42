//! Bit-level transmission plans for the symmetric deterministic channel.
//!
//! A [`SchemePlan`] places information blocks on levels of X1, X2 and the
//! relay signal X0, derives relay parity and in-signal repeat blocks as XORs
//! of information bits, and lists the order in which each receiver peels
//! blocks off its output. Decoding is successive cancellation: a bit is read
//! from an output level once every other bit landing on that level is known.

mod layouts;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lda_bounds::{BoundsError, Regime, SymLdaConfig};
use crate::lda_core::{lda_outputs, BitVec, LdaChannelParams, LdaError};

pub use layouts::build_plan;
pub use verify::{
    alpha_one_time_share, verify_plan, verify_plan_with, TimeSharedPlan, VerificationReport,
    VerifyMode,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("no plan for regime {0} at this point")]
    UnsupportedRegime(Regime),
    #[error(transparent)]
    ParameterGranularity(#[from] BoundsError),
    #[error("receiver {receiver} cannot decode block {block}")]
    Undecodable { receiver: u8, block: String },
    #[error("invalid plan: {0}")]
    Invalid(String),
    #[error("message length mismatch: expected {expected}, got {got}")]
    MessageLength { expected: usize, got: usize },
    #[error(transparent)]
    Channel(#[from] LdaError),
    #[error("exhaustive mode needs at most 24 information bits, plan has {0}")]
    TooManyBits(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signal {
    X1,
    X2,
    X0,
}

impl Signal {
    fn index(self) -> usize {
        match self {
            Signal::X1 => 0,
            Signal::X2 => 1,
            Signal::X0 => 2,
        }
    }

    fn swapped(self) -> Self {
        match self {
            Signal::X1 => Signal::X2,
            Signal::X2 => Signal::X1,
            Signal::X0 => Signal::X0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Private,
    Common,
    RelayParity,
    Repeat,
    Zero,
}

impl Role {
    fn is_info(self) -> bool {
        matches!(self, Role::Private | Role::Common)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum User {
    One,
    Two,
}

impl User {
    fn swapped(self) -> Self {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Corner {
    R1Dominant,
    R2Dominant,
}

/// One block of consecutive levels in a transmit signal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub signal: Signal,
    /// Inclusive 1-based level range.
    pub level_range: (usize, usize),
    pub block_id: String,
    pub role: Role,
    /// Message owner of an information block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<User>,
}

impl BlockSpec {
    pub fn len(&self) -> usize {
        self.level_range.1 + 1 - self.level_range.0
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Bits `offset..offset+len` of an information block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSlice {
    pub block_id: String,
    pub offset: usize,
}

/// A derived block equals the XOR of its source slices, bit by bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedRule {
    pub block_id: String,
    pub sources: Vec<SourceSlice>,
}

impl fmt::Display for DerivedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.block_id)?;
        for (i, s) in self.sources.iter().enumerate() {
            let op = if i == 0 { " " } else { " ^ " };
            if s.offset == 0 {
                write!(f, "{op}{}", s.block_id)?;
            } else {
                write!(f, "{op}{}[{}..]", s.block_id, s.offset)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanParts {
    pub config: SymLdaConfig,
    pub regime: Regime,
    pub corner: Corner,
    pub blocks: Vec<BlockSpec>,
    pub relay_rule: Vec<DerivedRule>,
    pub repeats: Vec<DerivedRule>,
    pub decode_order_rx1: Vec<String>,
    pub decode_order_rx2: Vec<String>,
    pub target_rates: (usize, usize),
}

/// Immutable plan with its compiled encoder and decoding schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PlanParts", into = "PlanParts")]
pub struct SchemePlan {
    parts: PlanParts,
    compiled: Compiled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Compiled {
    channel: LdaChannelParams,
    m: usize,
    /// Per block: (user, offset within that user's message) for information blocks.
    info_slot: Vec<Option<(User, usize)>>,
    /// Derived blocks: block index and list of (source block index, offset).
    derived: Vec<(usize, Vec<(usize, usize)>)>,
    rx1: Vec<Step>,
    rx2: Vec<Step>,
}

/// Recover global bit `bit` from output level `level` after removing `others`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Step {
    level: usize,
    bit: usize,
    others: Vec<usize>,
}

impl From<SchemePlan> for PlanParts {
    fn from(p: SchemePlan) -> Self {
        p.parts
    }
}

impl TryFrom<PlanParts> for SchemePlan {
    type Error = PlanError;

    fn try_from(parts: PlanParts) -> Result<Self, Self::Error> {
        SchemePlan::new(parts)
    }
}

impl SchemePlan {
    /// Validates the parts and compiles the decoding schedule.
    pub fn new(parts: PlanParts) -> Result<Self, PlanError> {
        let compiled = compile(&parts)?;
        Ok(Self { parts, compiled })
    }

    pub fn parts(&self) -> &PlanParts {
        &self.parts
    }

    pub fn config(&self) -> &SymLdaConfig {
        &self.parts.config
    }

    pub fn regime(&self) -> Regime {
        self.parts.regime
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.parts.blocks
    }

    pub fn relay_rule(&self) -> &[DerivedRule] {
        &self.parts.relay_rule
    }

    pub fn target_rates(&self) -> (usize, usize) {
        self.parts.target_rates
    }

    pub fn channel(&self) -> &LdaChannelParams {
        &self.compiled.channel
    }

    pub fn m(&self) -> usize {
        self.compiled.m
    }

    pub fn info_bits(&self) -> usize {
        self.parts.target_rates.0 + self.parts.target_rates.1
    }

    pub fn block(&self, id: &str) -> Option<&BlockSpec> {
        self.parts.blocks.iter().find(|b| b.block_id == id)
    }

    /// Replaces the relay rule but keeps the decoding schedule of the original
    /// plan, modelling a relay that deviates from what the receivers expect.
    pub fn with_tampered_relay_rule(&self, rule: Vec<DerivedRule>) -> Result<Self, PlanError> {
        let mut parts = self.parts.clone();
        parts.relay_rule = rule;
        let fresh = compile_encoder(&parts)?;
        let mut compiled = self.compiled.clone();
        compiled.derived = fresh.derived;
        Ok(Self { parts, compiled })
    }

    /// Transmit signals for messages `w1`, `w2`.
    pub fn encode(&self, w1: &BitVec, w2: &BitVec) -> Result<(BitVec, BitVec, BitVec), PlanError> {
        let (r1, r2) = self.parts.target_rates;
        for (w, r) in [(w1, r1), (w2, r2)] {
            if w.len() != r {
                return Err(PlanError::MessageLength { expected: r, got: w.len() });
            }
        }
        Ok(self.encode_unchecked(w1, w2))
    }

    fn encode_unchecked(&self, w1: &BitVec, w2: &BitVec) -> (BitVec, BitVec, BitVec) {
        let m = self.compiled.m;
        let mut xs = [BitVec::zeros(m), BitVec::zeros(m), BitVec::zeros(m)];
        let blocks = &self.parts.blocks;
        let info_bit = |bi: usize, j: usize| -> bool {
            match self.compiled.info_slot[bi] {
                Some((User::One, off)) => w1.get(off + j),
                Some((User::Two, off)) => w2.get(off + j),
                None => false,
            }
        };
        for (bi, b) in blocks.iter().enumerate() {
            if self.compiled.info_slot[bi].is_some() {
                let x = &mut xs[b.signal.index()];
                for j in 0..b.len() {
                    x.set(b.level_range.0 - 1 + j, info_bit(bi, j));
                }
            }
        }
        for (bi, sources) in &self.compiled.derived {
            let b = &blocks[*bi];
            let x = &mut xs[b.signal.index()];
            for j in 0..b.len() {
                let v = sources
                    .iter()
                    .fold(false, |acc, &(si, off)| acc ^ info_bit(si, off + j));
                x.set(b.level_range.0 - 1 + j, v);
            }
        }
        let [x1, x2, x0] = xs;
        (x1, x2, x0)
    }

    /// Channel outputs for the encoded messages.
    pub fn outputs(&self, w1: &BitVec, w2: &BitVec) -> Result<(BitVec, BitVec), PlanError> {
        let (x1, x2, x0) = self.encode(w1, w2)?;
        Ok(lda_outputs(&self.compiled.channel, &x1, &x2, &x0)?)
    }

    /// Successive-cancellation estimates of `(w1, w2)` from the two outputs.
    pub fn decode(&self, y1: &BitVec, y2: &BitVec) -> Result<(BitVec, BitVec), PlanError> {
        let m = self.compiled.m;
        for y in [y1, y2] {
            if y.len() != m {
                return Err(PlanError::Channel(LdaError::LengthMismatch {
                    expected: m,
                    got: y.len(),
                }));
            }
        }
        Ok(self.decode_unchecked(y1, y2))
    }

    fn decode_unchecked(&self, y1: &BitVec, y2: &BitVec) -> (BitVec, BitVec) {
        let (r1, r2) = self.parts.target_rates;
        let n = r1 + r2;
        let run = |steps: &[Step], y: &BitVec| {
            let mut est = BitVec::zeros(n);
            for s in steps {
                let v = s.others.iter().fold(y.get(s.level), |acc, &o| acc ^ est.get(o));
                est.set(s.bit, v);
            }
            est
        };
        let e1 = run(&self.compiled.rx1, y1);
        let e2 = run(&self.compiled.rx2, y2);
        let mut w1 = BitVec::zeros(r1);
        for i in 0..r1 {
            w1.set(i, e1.get(i));
        }
        let mut w2 = BitVec::zeros(r2);
        for i in 0..r2 {
            w2.set(i, e2.get(r1 + i));
        }
        (w1, w2)
    }

    /// Same plan with users exchanged.
    pub(crate) fn swapped(&self) -> Result<Self, PlanError> {
        let p = &self.parts;
        let blocks = p
            .blocks
            .iter()
            .map(|b| BlockSpec {
                signal: b.signal.swapped(),
                level_range: b.level_range,
                block_id: swap_id(&b.block_id),
                role: b.role,
                owner: b.owner.map(User::swapped),
            })
            .collect();
        let swap_rules = |rules: &[DerivedRule]| -> Vec<DerivedRule> {
            rules
                .iter()
                .map(|r| DerivedRule {
                    block_id: swap_id(&r.block_id),
                    sources: r
                        .sources
                        .iter()
                        .map(|s| SourceSlice {
                            block_id: swap_id(&s.block_id),
                            offset: s.offset,
                        })
                        .collect(),
                })
                .collect()
        };
        let swap_order = |o: &[String]| o.iter().map(|s| swap_id(s)).collect();
        SchemePlan::new(PlanParts {
            config: p.config,
            regime: p.regime,
            corner: match p.corner {
                Corner::R1Dominant => Corner::R2Dominant,
                Corner::R2Dominant => Corner::R1Dominant,
            },
            blocks,
            relay_rule: swap_rules(&p.relay_rule),
            repeats: swap_rules(&p.repeats),
            decode_order_rx1: swap_order(&p.decode_order_rx2),
            decode_order_rx2: swap_order(&p.decode_order_rx1),
            target_rates: (p.target_rates.1, p.target_rates.0),
        })
    }
}

fn swap_id(id: &str) -> String {
    if let Some(rest) = id.strip_prefix("U1") {
        format!("U2{rest}")
    } else if let Some(rest) = id.strip_prefix("U2") {
        format!("U1{rest}")
    } else if let Some(rest) = id.strip_prefix('A') {
        format!("B{rest}")
    } else if let Some(rest) = id.strip_prefix('B') {
        format!("A{rest}")
    } else {
        id.to_string()
    }
}

/// Checks the block table and rules; fills everything but the schedules.
fn compile_encoder(p: &PlanParts) -> Result<Compiled, PlanError> {
    let channel = p.config.channel()?;
    let m = channel.m();
    let invalid = |msg: String| Err(PlanError::Invalid(msg));

    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, b) in p.blocks.iter().enumerate() {
        let (lo, hi) = b.level_range;
        if lo == 0 || hi < lo || hi > m {
            return invalid(format!("block {} has range {lo}..={hi} outside 1..={m}", b.block_id));
        }
        if index.insert(b.block_id.as_str(), i).is_some() {
            return invalid(format!("duplicate block id {}", b.block_id));
        }
        if b.role.is_info() != b.owner.is_some() {
            return invalid(format!("block {} owner does not match its role", b.block_id));
        }
    }
    for (i, a) in p.blocks.iter().enumerate() {
        for b in &p.blocks[i + 1..] {
            let overlap = a.level_range.0 <= b.level_range.1 && b.level_range.0 <= a.level_range.1;
            if a.signal == b.signal && overlap {
                return invalid(format!("blocks {} and {} overlap", a.block_id, b.block_id));
            }
        }
    }

    let mut info_slot = vec![None; p.blocks.len()];
    let mut lens = [0usize; 2];
    for (i, b) in p.blocks.iter().enumerate() {
        if let Some(u) = b.owner {
            let k = if u == User::One { 0 } else { 1 };
            info_slot[i] = Some((u, lens[k]));
            lens[k] += b.len();
        }
    }
    if (lens[0], lens[1]) != p.target_rates {
        return invalid(format!(
            "information lengths {:?} differ from target rates {:?}",
            (lens[0], lens[1]),
            p.target_rates
        ));
    }

    let mut derived = Vec::new();
    let mut covered: Vec<bool> = vec![false; p.blocks.len()];
    for (rules, role) in [(&p.relay_rule, Role::RelayParity), (&p.repeats, Role::Repeat)] {
        for r in rules {
            let Some(&bi) = index.get(r.block_id.as_str()) else {
                return invalid(format!("rule for unknown block {}", r.block_id));
            };
            let b = &p.blocks[bi];
            if b.role != role || covered[bi] {
                return invalid(format!("rule for {} does not match a {role:?} block", r.block_id));
            }
            if role == Role::RelayParity && b.signal != Signal::X0 {
                return invalid(format!("relay block {} is not in X0", r.block_id));
            }
            covered[bi] = true;
            let mut srcs = Vec::with_capacity(r.sources.len());
            for s in &r.sources {
                let Some(&si) = index.get(s.block_id.as_str()) else {
                    return invalid(format!("{} references unknown block {}", r.block_id, s.block_id));
                };
                if info_slot[si].is_none() {
                    return invalid(format!("{} references non-information block {}", r.block_id, s.block_id));
                }
                if s.offset + b.len() > p.blocks[si].len() {
                    return invalid(format!("{} overruns source {}", r.block_id, s.block_id));
                }
                srcs.push((si, s.offset));
            }
            derived.push((bi, srcs));
        }
    }
    for (i, b) in p.blocks.iter().enumerate() {
        if matches!(b.role, Role::RelayParity | Role::Repeat) && !covered[i] {
            return invalid(format!("derived block {} has no rule", b.block_id));
        }
    }
    Ok(Compiled {
        channel,
        m,
        info_slot,
        derived,
        rx1: Vec::new(),
        rx2: Vec::new(),
    })
}

fn compile(p: &PlanParts) -> Result<Compiled, PlanError> {
    let mut c = compile_encoder(p)?;
    let shell = SchemePlan {
        parts: p.clone(),
        compiled: c.clone(),
    };
    let (r1, r2) = p.target_rates;
    let n = r1 + r2;
    let m = c.m;
    // Column view of the linear map from message bits to output levels.
    let mut rows = [vec![BitVec::zeros(n); m], vec![BitVec::zeros(n); m]];
    for g in 0..n {
        let (w1, w2) = if g < r1 {
            (BitVec::unit(r1, g), BitVec::zeros(r2))
        } else {
            (BitVec::zeros(r1), BitVec::unit(r2, g - r1))
        };
        let (x1, x2, x0) = shell.encode_unchecked(&w1, &w2);
        let (y1, y2) = lda_outputs(&c.channel, &x1, &x2, &x0)?;
        for (k, y) in [y1, y2].iter().enumerate() {
            for l in 0..m {
                if y.get(l) {
                    rows[k][l].set(g, true);
                }
            }
        }
    }

    let global_bits = |bi: usize| -> Vec<usize> {
        match c.info_slot[bi] {
            Some((User::One, off)) => (off..off + p.blocks[bi].len()).collect(),
            Some((User::Two, off)) => (r1 + off..r1 + off + p.blocks[bi].len()).collect(),
            None => Vec::new(),
        }
    };
    for (k, order) in [&p.decode_order_rx1, &p.decode_order_rx2].into_iter().enumerate() {
        let receiver = k as u8 + 1;
        let own = if k == 0 { User::One } else { User::Two };
        for b in &p.blocks {
            if b.owner == Some(own) && !order.contains(&b.block_id) {
                return Err(PlanError::Invalid(format!(
                    "receiver {receiver} never decodes its own block {}",
                    b.block_id
                )));
            }
        }
        let mut known = BitVec::zeros(n);
        let mut steps = Vec::new();
        for id in order {
            let bi = p
                .blocks
                .iter()
                .position(|b| &b.block_id == id && b.role.is_info())
                .ok_or_else(|| PlanError::Invalid(format!("decode order names unknown block {id}")))?;
            let mut pending: Vec<usize> = global_bits(bi);
            while !pending.is_empty() {
                let mut progressed = false;
                for (l, row) in rows[k].iter().enumerate() {
                    let unknown: Vec<usize> = (0..n).filter(|&g| row.get(g) && !known.get(g)).collect();
                    if unknown.len() == 1 && pending.contains(&unknown[0]) {
                        let bit = unknown[0];
                        let others = (0..n).filter(|&g| g != bit && row.get(g)).collect();
                        steps.push(Step { level: l, bit, others });
                        known.set(bit, true);
                        pending.retain(|&g| g != bit);
                        progressed = true;
                    }
                }
                if !progressed {
                    return Err(PlanError::Undecodable {
                        receiver,
                        block: id.clone(),
                    });
                }
            }
        }
        if k == 0 {
            c.rx1 = steps;
        } else {
            c.rx2 = steps;
        }
    }
    Ok(c)
}
