//! Block layouts for each regime with known capacity or sum capacity.

use super::{
    BlockSpec, Corner, DerivedRule, PlanError, PlanParts, Role, SchemePlan, Signal, SourceSlice,
    User,
};
use crate::lda_bounds::{in_sum_capacity_strip, Regime, SymLdaConfig};

use Signal::{X0, X1, X2};

/// Plan reaching the requested dominant corner (or, in the sum-capacity strip,
/// a point on the sum-rate face).
///
/// Layouts by regime, with `nI = alpha*nS` and `nC = beta*nS`:
///
/// * `alpha = 1`: the full single-user rate, through the relay when `beta > 1`.
/// * II-IV: the relay neutralizes X2 at Rx1 and X1 at Rx2 and carries
///   an extra common block when `nC > max(nS, nI)`.
/// * I: each user sends common bits above its private block, which the relay neutralizes.
/// * V: private blocks on all levels; the relay neutralizes interference.
/// * VI.1: the relay sends `A2 ^ B1`; X2 leaves gaps where X1 lands at Rx2.
/// * Strip: the relay neutralizes the bottom `nC` cross levels, leaving a
///   moderate-interference layering on the rest. Rates are
///   `(nI, nC + 2(nS - nI))`, whose sum is `(2 - alpha + beta) nS`.
pub fn build_plan(cfg: &SymLdaConfig, corner: Corner) -> Result<SchemePlan, PlanError> {
    let regime = cfg.regime();
    let (ns, ni, nc) = (cfg.ns, cfg.ni()?, cfg.nc()?);
    let parts = match regime {
        Regime::AlphaOne => alpha_one(cfg, ns, nc),
        Regime::I => regime_i(cfg, ns, ni, nc),
        Regime::II | Regime::III | Regime::IV => regime_ii_iv(cfg, ns, ni, nc),
        Regime::V => regime_v(cfg, ns, ni, nc),
        Regime::VI1 => regime_vi1(cfg, ns, ni, nc),
        Regime::VI2 | Regime::VI3 | Regime::VI4 if in_sum_capacity_strip(cfg.alpha, cfg.beta) => {
            strip(cfg, ns, ni, nc)
        }
        other => return Err(PlanError::UnsupportedRegime(other)),
    };
    let plan = SchemePlan::new(parts)?;
    match corner {
        Corner::R1Dominant => Ok(plan),
        Corner::R2Dominant => plan.swapped(),
    }
}

struct Builder {
    blocks: Vec<BlockSpec>,
    relay: Vec<DerivedRule>,
    repeats: Vec<DerivedRule>,
}

impl Builder {
    fn new() -> Self {
        Self {
            blocks: Vec::new(),
            relay: Vec::new(),
            repeats: Vec::new(),
        }
    }

    fn push(&mut self, signal: Signal, start: usize, len: usize, id: &str, role: Role, owner: Option<User>) {
        if len == 0 {
            return;
        }
        self.blocks.push(BlockSpec {
            signal,
            level_range: (start, start + len - 1),
            block_id: id.to_string(),
            role,
            owner,
        });
    }

    fn private(&mut self, signal: Signal, start: usize, len: usize, id: &str, owner: User) {
        self.push(signal, start, len, id, Role::Private, Some(owner));
    }

    fn common(&mut self, signal: Signal, start: usize, len: usize, id: &str, owner: User) {
        self.push(signal, start, len, id, Role::Common, Some(owner));
    }

    fn zero(&mut self, signal: Signal, start: usize, len: usize, id: &str) {
        self.push(signal, start, len, id, Role::Zero, None);
    }

    fn repeat(&mut self, signal: Signal, start: usize, len: usize, id: &str, source: &str, offset: usize) {
        if len == 0 {
            return;
        }
        self.push(signal, start, len, id, Role::Repeat, None);
        self.repeats.push(DerivedRule {
            block_id: id.to_string(),
            sources: vec![SourceSlice {
                block_id: source.to_string(),
                offset,
            }],
        });
    }

    /// Information bits `(block, bit)` carried on level `l` of `signal`.
    fn occupants(&self, signal: Signal, l: usize) -> Vec<(String, usize)> {
        let Some(b) = self
            .blocks
            .iter()
            .find(|b| b.signal == signal && b.level_range.0 <= l && l <= b.level_range.1)
        else {
            return Vec::new();
        };
        let j = l - b.level_range.0;
        match b.role {
            Role::Private | Role::Common => vec![(b.block_id.clone(), j)],
            Role::Repeat => self
                .repeats
                .iter()
                .find(|r| r.block_id == b.block_id)
                .map(|r| r.sources.iter().map(|s| (s.block_id.clone(), s.offset + j)).collect())
                .unwrap_or_default(),
            Role::RelayParity | Role::Zero => Vec::new(),
        }
    }

    /// Relay levels `start..start+len` carry the XOR of the given signal
    /// windows, split into parity blocks wherever the source blocks change.
    fn relay_xor(&mut self, start: usize, len: usize, windows: &[(Signal, usize)]) {
        let mut groups: Vec<(usize, usize, Vec<(String, usize)>)> = Vec::new();
        for j in 0..len {
            let terms: Vec<(String, usize)> = windows
                .iter()
                .flat_map(|&(s, w)| self.occupants(s, w + j))
                .collect();
            if terms.is_empty() {
                continue;
            }
            let extends = groups.last().is_some_and(|(g0, glen, gterms)| {
                g0 + glen == j
                    && gterms.len() == terms.len()
                    && gterms
                        .iter()
                        .zip(&terms)
                        .all(|((gid, gbit), (id, bit))| gid == id && gbit + glen == *bit)
            });
            if extends {
                groups.last_mut().expect("checked above").1 += 1;
            } else {
                groups.push((j, 1, terms));
            }
        }
        for (j, glen, terms) in groups {
            let id = format!("C{}", self.relay.len() + 1);
            self.push(X0, start + j, glen, &id, Role::RelayParity, None);
            self.relay.push(DerivedRule {
                block_id: id,
                sources: terms
                    .into_iter()
                    .map(|(block_id, offset)| SourceSlice { block_id, offset })
                    .collect(),
            });
        }
    }

    fn finish(
        self,
        cfg: &SymLdaConfig,
        rx1: &[&str],
        rx2: &[&str],
    ) -> PlanParts {
        let order = |ids: &[&str]| {
            ids.iter()
                .filter(|id| self.blocks.iter().any(|b| b.block_id == **id))
                .map(|s| s.to_string())
                .collect()
        };
        let rate = |u: User| {
            self.blocks
                .iter()
                .filter(|b| b.owner == Some(u))
                .map(BlockSpec::len)
                .sum()
        };
        PlanParts {
            config: *cfg,
            regime: cfg.regime(),
            corner: Corner::R1Dominant,
            target_rates: (rate(User::One), rate(User::Two)),
            decode_order_rx1: order(rx1),
            decode_order_rx2: order(rx2),
            blocks: self.blocks,
            relay_rule: self.relay,
            repeats: self.repeats,
        }
    }
}

fn alpha_one(cfg: &SymLdaConfig, ns: usize, nc: usize) -> PlanParts {
    let mut b = Builder::new();
    if nc <= ns {
        b.private(X1, 1, ns, "A", User::One);
    } else {
        b.private(X0, 1, nc, "A", User::One);
    }
    b.finish(cfg, &["A"], &[])
}

fn regime_ii_iv(cfg: &SymLdaConfig, ns: usize, ni: usize, nc: usize) -> PlanParts {
    let top = ns.max(ni);
    let m = nc.max(top);
    let l = nc.min(top);
    let mut b = Builder::new();
    b.common(X0, 1, m - top, "U0", User::One);
    b.private(X1, m - nc + 1, l, "U1p", User::One);
    b.private(X2, m - nc + 1, l, "U2p", User::Two);
    b.relay_xor(m - ni + 1, l.min(ni), &[(X1, m - nc + 1), (X2, m - nc + 1)]);
    b.finish(cfg, &["U0", "U1p"], &["U0", "U2p"])
}

fn regime_i(cfg: &SymLdaConfig, ns: usize, ni: usize, nc: usize) -> PlanParts {
    let m = ni;
    let d = ni - ns;
    let big_d = ns - nc;
    let k2 = d.min(big_d);
    let o = k2.min(big_d.saturating_sub(d));
    let mut b = Builder::new();
    b.common(X1, 1, k2, "A1", User::One);
    b.common(X1, k2 + 1, o, "A2", User::One);
    b.private(X1, k2 + o + 1, big_d - k2 - o, "A3", User::One);
    b.zero(X1, big_d + 1, d - o, "Z1");
    b.repeat(X1, big_d + d - o + 1, o, "A2r", "A2", 0);
    b.private(X1, m - nc + 1, nc, "A4", User::One);
    b.common(X2, 1, k2, "B1", User::Two);
    b.private(X2, m - nc + 1, nc, "B2", User::Two);
    b.relay_xor(1, nc, &[(X1, m - nc + 1), (X2, m - nc + 1)]);
    b.finish(cfg, &["B1", "A1", "A2", "A3", "A4"], &["A1", "A2", "B1", "B2"])
}

fn regime_v(cfg: &SymLdaConfig, ns: usize, ni: usize, nc: usize) -> PlanParts {
    let mut b = Builder::new();
    b.private(X1, 1, ns, "U1p", User::One);
    b.private(X2, 1, ns, "U2p", User::Two);
    b.relay_xor(nc - ni + 1, ni, &[(X1, 1), (X2, 1)]);
    b.finish(cfg, &["U1p"], &["U2p"])
}

fn regime_vi1(cfg: &SymLdaConfig, ns: usize, ni: usize, nc: usize) -> PlanParts {
    let mut b = Builder::new();
    b.common(X1, 1, ni - nc, "A1", User::One);
    b.private(X1, ni - nc + 1, nc, "A2", User::One);
    b.private(X1, ni + 1, ns - ni, "A3", User::One);
    b.zero(X2, 1, ni - nc, "Z1");
    b.private(X2, ni - nc + 1, nc, "B1", User::Two);
    b.private(X2, ni + 1, ns - 2 * ni, "B2", User::Two);
    b.zero(X2, ns - ni + 1, ni - nc, "Z2");
    b.private(X2, ns - nc + 1, nc, "B3", User::Two);
    b.relay_xor(1, nc, &[(X1, ni - nc + 1), (X2, ni - nc + 1)]);
    b.finish(cfg, &["A1", "A2", "A3"], &["B1", "B2", "A1", "B3"])
}

fn strip(cfg: &SymLdaConfig, ns: usize, ni: usize, nc: usize) -> PlanParts {
    // Top window of n levels behaves like an interference channel with cross
    // strength k; the relay removes the cross term on the bottom nc levels.
    let n = ns - nc;
    let k = ni - nc;
    let d = ns - ni;
    let r = d.min(k - 2 * d);
    let mut b = Builder::new();
    b.common(X1, 1, d, "A1", User::One);
    b.common(X1, d + 1, r, "A2", User::One);
    b.common(X1, d + r + 1, k - 2 * d - r, "A3", User::One);
    b.zero(X1, k - d + 1, d - r, "Z1");
    b.repeat(X1, k - r + 1, r, "A2r", "A2", 0);
    b.private(X1, k + 1, d, "A4", User::One);
    b.private(X1, n + 1, nc, "A5", User::One);
    b.common(X2, 1, d, "B1", User::Two);
    b.zero(X2, d + 1, k - d, "Z2");
    b.private(X2, k + 1, d, "B2", User::Two);
    b.private(X2, n + 1, nc, "B3", User::Two);
    b.relay_xor(1, nc, &[(X1, k + 1), (X2, k + 1)]);
    b.finish(
        cfg,
        &["A1", "A2", "B1", "A3", "A4", "A5"],
        &["B1", "A2", "B2", "B3"],
    )
}
