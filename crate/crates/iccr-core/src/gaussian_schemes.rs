//! Gaussian achievable schemes: zero-forcing relay, the six-stream scheme for
//! weak interference and weak relay, and linear-relay decoding strategies.
//! Logs are base 2.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian_bounds::{
    from_exponents, outer_region_gaussian, single_rate_outer, vi1_outer_corner, GaussianChannelParams,
    GaussianError, SnrExponentConfig,
};
use crate::par::{self, Exec};
use crate::region_geometry::{build_region, HalfPlaneConstraint, RatePoint, RateRegion};

/// Slack allowed when checking inequalities between channel gains.
const REL_TOL: f64 = 1e-12;

fn leq(a: f64, b: f64) -> bool {
    a <= b + REL_TOL * a.abs().max(b.abs()).max(1.0)
}

fn c2(x: f64) -> f64 {
    (1.0 + x).log2()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Vi1Condition {
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl fmt::Display for Vi1Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Vi1Condition::C1 => 1,
            Vi1Condition::C2 => 2,
            Vi1Condition::C3 => 3,
            Vi1Condition::C4 => 4,
            Vi1Condition::C5 => 5,
        };
        write!(f, "(c{n})")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error("zero forcing needs 2 hI^2 <= hC^2, got hI^2={hi2}, hC^2={hc2}")]
    InfeasibleZf { hi2: f64, hc2: f64 },
    #[error("gap guarantee needs 2 hI^2 <= hC^2 <= hS^2, got hS^2={hs2}, hI^2={hi2}, hC^2={hc2}")]
    ZfRegime { hs2: f64, hi2: f64, hc2: f64 },
    #[error("condition {condition} fails: {detail}")]
    Regime { condition: Vi1Condition, detail: String },
    #[error("relay power |a1|^2 + |a2|^2 = {0} exceeds 1")]
    RelayPower(f64),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
}

/// Relay signal `X0 = a1 X1 + a2 X2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelayCoeffs {
    pub a1: Complex64,
    pub a2: Complex64,
}

impl RelayCoeffs {
    pub const SILENT: RelayCoeffs = RelayCoeffs {
        a1: Complex64::new(0.0, 0.0),
        a2: Complex64::new(0.0, 0.0),
    };

    pub fn new(a1: Complex64, a2: Complex64) -> Self {
        Self { a1, a2 }
    }

    pub fn power(&self) -> f64 {
        self.a1.norm_sqr() + self.a2.norm_sqr()
    }
}

/// Coefficients cancelling X2 at receiver 1 and X1 at receiver 2.
pub fn zf_coeffs(ch: &GaussianChannelParams) -> Result<RelayCoeffs, SchemeError> {
    let (hi2, hc2) = (ch.hi2(), ch.hc2());
    if !leq(2.0 * hi2, hc2) {
        return Err(SchemeError::InfeasibleZf { hi2, hc2 });
    }
    if ch.hi == 0.0 {
        return Ok(RelayCoeffs::SILENT);
    }
    Ok(RelayCoeffs {
        a1: -ch.h21() / ch.hc,
        a2: -ch.h12() / ch.hc,
    })
}

/// `R1 = log2(1 + |hS - hI e^{j theta21}|^2)` and its mirror with `theta12`.
pub fn zf_rates(ch: &GaussianChannelParams) -> Result<(f64, f64), SchemeError> {
    zf_coeffs(ch)?;
    Ok((c2((ch.hs - ch.h21()).norm_sqr()), c2((ch.hs - ch.h12()).norm_sqr())))
}

/// Outcome of a secondary check reported alongside the main gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerCheck {
    pub gap: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub channel: GaussianChannelParams,
    pub inner: (f64, f64),
    pub outer: (f64, f64),
    pub gap_per_user: f64,
    pub bound: f64,
    /// `gap_per_user <= bound + 1e-9`, and the corner check passes when present.
    pub pass: bool,
    pub corner_check: Option<CornerCheck>,
}

impl GapReport {
    fn new(
        channel: GaussianChannelParams,
        inner: (f64, f64),
        outer: (f64, f64),
        gap_per_user: f64,
        bound: f64,
        corner_check: Option<CornerCheck>,
    ) -> Self {
        let pass = gap_per_user <= bound + 1e-9 && corner_check.is_none_or(|c| c.pass);
        Self { channel, inner, outer, gap_per_user, bound, pass, corner_check }
    }
}

/// `log2(4 / (1 - 1/sqrt 2)^2)`.
pub fn theorem5_bound() -> f64 {
    (4.0 / (1.0 - FRAC_1_SQRT_2).powi(2)).log2()
}

pub const THEOREM6_BOUND: f64 = 11.7;

/// Zero forcing against the single-rate outer bound.
pub fn gap_theorem5(ch: &GaussianChannelParams) -> Result<GapReport, SchemeError> {
    let (hs2, hi2, hc2) = (ch.hs2(), ch.hi2(), ch.hc2());
    if !(leq(2.0 * hi2, hc2) && leq(hc2, hs2)) {
        return Err(SchemeError::ZfRegime { hs2, hi2, hc2 });
    }
    let inner = zf_rates(ch)?;
    let outer = single_rate_outer(ch);
    let gap = outer - inner.0.min(inner.1);
    Ok(GapReport::new(*ch, inner, (outer, outer), gap, theorem5_bound(), None))
}

/// First of the conditions (c1)-(c5) that fails, if any.
pub fn vi1_conditions(ch: &GaussianChannelParams) -> Result<(), SchemeError> {
    let (s, i, c) = (ch.hs2(), ch.hi2(), ch.hc2());
    let checks = [
        (Vi1Condition::C1, leq(c, i * i / (1.0 + i)), format!("hC^2={c} > hI^4/(1+hI^2)={}", i * i / (1.0 + i))),
        (
            Vi1Condition::C2,
            leq(c, 0.5 * (1.0 + s) / (1.0 + i)),
            format!("hC^2={c} > (1+hS^2)/(2(1+hI^2))={}", 0.5 * (1.0 + s) / (1.0 + i)),
        ),
        (Vi1Condition::C3, leq(i * (1.0 + i), s), format!("hI^2(1+hI^2)={} > hS^2={s}", i * (1.0 + i))),
        (Vi1Condition::C4, leq(1.0, s.min(i)), format!("min(hS^2, hI^2)={} < 1", s.min(i))),
        (Vi1Condition::C5, leq(9.0, s / (1.0 + i)), format!("hS^2/(1+hI^2)={} < 9", s / (1.0 + i))),
    ];
    match checks.into_iter().find(|(_, ok, _)| !ok) {
        Some((condition, _, detail)) => Err(SchemeError::Regime { condition, detail }),
        None => Ok(()),
    }
}

/// Power split of the six-stream scheme. Transmitter 1 sends `A1, A2, A3`,
/// transmitter 2 sends `B1, B2, B3`, and the relay forwards `A2` and `B1`
/// with weights `l1`, `l2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vi1Allocation {
    pub a1_sq: f64,
    pub a2: Complex64,
    pub a3_sq: f64,
    pub b1: Complex64,
    pub b2_sq: f64,
    pub b3_sq: f64,
    pub l1: f64,
    pub l2: f64,
}

impl Vi1Allocation {
    pub fn tx1_power(&self) -> f64 {
        self.a1_sq + self.a2.norm_sqr() + self.a3_sq
    }

    pub fn tx2_power(&self) -> f64 {
        self.b1.norm_sqr() + self.b2_sq + self.b3_sq
    }

    pub fn relay_power(&self) -> f64 {
        self.l1 * self.l1 + self.l2 * self.l2
    }
}

pub fn vi1_allocation(ch: &GaussianChannelParams) -> Result<Vi1Allocation, SchemeError> {
    vi1_conditions(ch)?;
    let (s, i, c) = (ch.hs2(), ch.hi2(), ch.hc2());
    let scale = ch.hc / (2f64.sqrt() * ch.hi);
    Ok(Vi1Allocation {
        a1_sq: i / (1.0 + i) - c / (2.0 * i),
        a2: Complex64::from_polar(scale, -ch.theta21),
        a3_sq: 1.0 / (1.0 + i),
        b1: Complex64::from_polar(scale, -ch.theta12),
        b2_sq: 1.0 / (1.0 + i) - c / (1.0 + s),
        b3_sq: c / (1.0 + s),
        l1: -FRAC_1_SQRT_2,
        l2: -FRAC_1_SQRT_2,
    })
}

/// Per-stream rates of the six-stream scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vi1SubRates {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl Vi1SubRates {
    pub fn r1(&self) -> f64 {
        self.a1 + self.a2 + self.a3
    }

    pub fn r2(&self) -> f64 {
        self.b1 + self.b2 + self.b3
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.a1, self.a2, self.a3, self.b1, self.b2, self.b3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vi1Rates {
    /// Rates from the exact SINR of each stream.
    pub exact: Vi1SubRates,
    /// Closed-form lower bounds valid under (c1)-(c5).
    pub lower: Vi1SubRates,
}

pub fn vi1_achievable_rates(ch: &GaussianChannelParams) -> Result<Vi1Rates, SchemeError> {
    let alloc = vi1_allocation(ch)?;
    let (s, i, c) = (ch.hs2(), ch.hi2(), ch.hc2());
    let ratio = ch.hs / ch.hi;
    let p21 = (Complex64::from_polar(ratio, -ch.theta21) - 1.0).norm_sqr();
    let p12 = (Complex64::from_polar(ratio, -ch.theta12) - 1.0).norm_sqr();
    let a1 = alloc.a1_sq;
    let t = s / (1.0 + i);
    let u = i / (1.0 + i);

    let a1_at_y1 = s * a1 / (1.0 + t + u + 0.5 * c * p21);
    let a1_at_y2 = i * a1 / (1.0 + u + s * c / (1.0 + s));
    let exact = Vi1SubRates {
        a1: c2(a1_at_y1).min(c2(a1_at_y2)),
        a2: c2(0.5 * c * p21 / (1.0 + t + u)),
        a3: c2(s / (1.0 + 2.0 * i)),
        b1: c2(0.5 * c * p12 / (1.0 + i * a1 + u + t)),
        b2: c2(s * alloc.b2_sq / (1.0 + i * a1 + u + s * c / (1.0 + s))),
        b3: c2(c * s / (1.0 + s) / (1.0 + u)),
    };
    let lower = Vi1SubRates {
        a1: c2(i / (4.0 * (3.0 + c))),
        a2: c2(c / 10.0),
        a3: c2(s / (1.0 + 2.0 * i)),
        b1: c2(c / 10.0),
        b2: c2(s / (4.0 * (1.0 + i).powi(2))),
        b3: c2(c / 4.0),
    };
    Ok(Vi1Rates { exact, lower })
}

/// Closed-form lower-bound rates against the outer corner; the corner with
/// `R2 = 0` is checked separately against `log2(1 + hS^2)` with bound 2.
pub fn gap_theorem6(ch: &GaussianChannelParams) -> Result<GapReport, SchemeError> {
    let rates = vi1_achievable_rates(ch)?;
    let inner = (rates.lower.r1(), rates.lower.r2());
    let outer = vi1_outer_corner(ch);
    let gap = (outer.0 - inner.0).max(outer.1 - inner.1).max(0.0);
    let corner_gap = outer.0 - c2(ch.hs2());
    let corner = CornerCheck { gap: corner_gap, bound: 2.0, pass: corner_gap <= 2.0 + 1e-9 };
    Ok(GapReport::new(*ch, inner, outer, gap, THEOREM6_BOUND, Some(corner)))
}

/// Analytic gap with lower-bound denominators `n_a2`, `n_b1`: returns
/// `(t0, max(gap_R1, gap_R2))` where `gap_R1 = log2(32 n_a2)` and `gap_R2`
/// is evaluated at `t = t0`.
pub fn analytic_gap(n_a2: f64, n_b1: f64) -> (f64, f64) {
    let ra = (1.0 + (4.0 / n_a2 * (1.5 - 2.0 / n_a2)).sqrt()) / (1.0 - 2.0 / n_a2);
    let rb = (1.0 + (8.0 / n_b1 * (1.0 - 2.0 / n_b1)).sqrt()) / (1.0 - 4.0 / n_b1);
    let t0 = ra.max(rb).powi(2);
    let gap_r1 = (32.0 * n_a2).log2();
    let k = 4.0 * (1.0 + FRAC_1_SQRT_2).powi(4);
    let gap_r2 = (k * (1.0 + 2.0 * t0).powi(2) * n_b1 * 4.0 / (1.0 + t0 * t0)).log2();
    (t0, gap_r1.max(gap_r2))
}

/// How the receivers treat the two messages under a linear relay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Both receivers decode both messages.
    #[serde(rename = "JD")]
    Jd,
    /// Each receiver decodes its own message and treats the other as noise.
    #[serde(rename = "IaN")]
    Ian,
    /// User 1's message is decoded at both receivers; user 2's only at receiver 2.
    Mix12,
    /// User 2's message is decoded at both receivers; user 1's only at receiver 1.
    Mix21,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Jd, Strategy::Ian, Strategy::Mix12, Strategy::Mix21];

    pub fn label(self) -> &'static str {
        match self {
            Strategy::Jd => "JD",
            Strategy::Ian => "IaN",
            Strategy::Mix12 => "Mix12",
            Strategy::Mix21 => "Mix21",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown strategy {s:?}; expected JD, IaN, Mix12 or Mix21"))
    }
}

/// Squared effective gains `(g11, g12, g21, g22)`; `gkj` carries `Xj` to receiver `k`.
pub fn effective_gains(ch: &GaussianChannelParams, coeffs: &RelayCoeffs) -> [f64; 4] {
    let hs = Complex64::new(ch.hs, 0.0);
    [
        (hs + coeffs.a1 * ch.hc).norm_sqr(),
        (ch.h12() + coeffs.a2 * ch.hc).norm_sqr(),
        (ch.h21() + coeffs.a1 * ch.hc).norm_sqr(),
        (hs + coeffs.a2 * ch.hc).norm_sqr(),
    ]
}

/// MAC constraints `(R_own, R_other, R_sum)` at a receiver seeing `own` and `other`.
fn mac(own: f64, other: f64) -> [f64; 3] {
    [c2(own), c2(other), c2(own + other)]
}

pub fn linear_strategy_region(
    ch: &GaussianChannelParams,
    coeffs: &RelayCoeffs,
    strategy: Strategy,
) -> Result<RateRegion, SchemeError> {
    let p = coeffs.power();
    if !leq(p, 1.0) {
        return Err(SchemeError::RelayPower(p));
    }
    let [g11, g12, g21, g22] = effective_gains(ch, coeffs);
    let h = HalfPlaneConstraint::new;
    let ian1 = c2(g11 / (1.0 + g12));
    let ian2 = c2(g22 / (1.0 + g21));
    let constraints = match strategy {
        Strategy::Ian => vec![h(1.0, 0.0, ian1), h(0.0, 1.0, ian2)],
        Strategy::Jd => {
            let [r1a, r2a, sa] = mac(g11, g12);
            let [r2b, r1b, sb] = mac(g22, g21);
            vec![h(1.0, 0.0, r1a.min(r1b)), h(0.0, 1.0, r2a.min(r2b)), h(1.0, 1.0, sa.min(sb))]
        }
        Strategy::Mix12 => {
            let [r2, r1, s] = mac(g22, g21);
            vec![h(1.0, 0.0, ian1.min(r1)), h(0.0, 1.0, r2), h(1.0, 1.0, s)]
        }
        Strategy::Mix21 => {
            let [r1, r2, s] = mac(g11, g12);
            vec![h(1.0, 0.0, r1), h(0.0, 1.0, ian2.min(r2)), h(1.0, 1.0, s)]
        }
    };
    Ok(build_region(&constraints).expect("both rates are bounded"))
}

/// Relay coefficient candidates: magnitudes on a uniform grid over `[0, 1]`
/// combined with the given phases, keeping those within the power budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffGrid {
    pub points: usize,
    pub phases: Vec<f64>,
}

impl Default for CoeffGrid {
    fn default() -> Self {
        Self { points: 41, phases: vec![0.0, PI] }
    }
}

impl CoeffGrid {
    pub fn candidates(&self) -> Vec<RelayCoeffs> {
        let mags: Vec<f64> = match self.points {
            0 => Vec::new(),
            1 => vec![0.0],
            n => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
        };
        let mut out = Vec::new();
        for &m1 in &mags {
            for &m2 in &mags {
                if m1 * m1 + m2 * m2 > 1.0 + REL_TOL {
                    continue;
                }
                for &p1 in &self.phases {
                    for &p2 in &self.phases {
                        out.push(RelayCoeffs::new(Complex64::from_polar(m1, p1), Complex64::from_polar(m2, p2)));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub snr_db: f64,
    pub strategy: Strategy,
    pub coeffs: RelayCoeffs,
    pub r1: f64,
    pub r2: f64,
    pub sum_rate: f64,
    pub outer_sum: f64,
    pub gap: f64,
}

pub const SWEEP_CSV_HEADER: [&str; 11] = [
    "snr_db", "strategy", "a1_re", "a1_im", "a2_re", "a2_im", "r1", "r2", "sum_rate", "outer_sum", "gap",
];

impl SweepRow {
    pub fn csv_record(&self) -> [String; 11] {
        [
            self.snr_db.to_string(),
            self.strategy.label().to_string(),
            self.coeffs.a1.re.to_string(),
            self.coeffs.a1.im.to_string(),
            self.coeffs.a2.re.to_string(),
            self.coeffs.a2.im.to_string(),
            self.r1.to_string(),
            self.r2.to_string(),
            self.sum_rate.to_string(),
            self.outer_sum.to_string(),
            self.gap.to_string(),
        ]
    }
}

/// Vertex of largest sum rate, first in vertex order on ties.
fn best_vertex(region: &RateRegion) -> RatePoint {
    region
        .vertices()
        .iter()
        .copied()
        .fold(RatePoint::new(0.0, 0.0), |best, v| if v.r1 + v.r2 > best.r1 + best.r2 { v } else { best })
}

/// Best sum rate of `strategy` over `candidates`, first candidate on ties.
pub fn best_strategy_point(
    ch: &GaussianChannelParams,
    strategy: Strategy,
    candidates: &[RelayCoeffs],
    exec: Exec,
) -> Option<(RelayCoeffs, RatePoint)> {
    let points = par::map(exec, candidates, |c| {
        linear_strategy_region(ch, c, strategy).ok().map(|r| best_vertex(&r))
    });
    candidates
        .iter()
        .zip(points)
        .filter_map(|(c, p)| p.map(|p| (*c, p)))
        .fold(None, |best: Option<(RelayCoeffs, RatePoint)>, (c, p)| match best {
            Some((_, b)) if b.r1 + b.r2 >= p.r1 + p.r2 => best,
            _ => Some((c, p)),
        })
}

/// For each SNR (in dB) and strategy, the best sum rate over the coefficient
/// grid, with the zero-forcing coefficients added as a candidate when
/// feasible. Channel phases are zero; rows follow input order.
pub fn strategy_sweep(
    snr_db: &[f64],
    alpha: f64,
    beta: f64,
    strategies: &[Strategy],
    grid: &CoeffGrid,
    exec: Exec,
) -> Result<Vec<SweepRow>, SchemeError> {
    let base = grid.candidates();
    let mut rows = Vec::with_capacity(snr_db.len() * strategies.len());
    for &db in snr_db {
        let snr = 10f64.powf(db / 10.0);
        let ch = from_exponents(SnrExponentConfig { snr, alpha, beta }, 0.0, 0.0)?;
        let outer_sum = outer_region_gaussian(&ch).max_sum_rate();
        let mut candidates = base.clone();
        if let Ok(zf) = zf_coeffs(&ch) {
            candidates.push(zf);
        }
        for &strategy in strategies {
            let (coeffs, p) = best_strategy_point(&ch, strategy, &candidates, exec)
                .unwrap_or((RelayCoeffs::SILENT, RatePoint::new(0.0, 0.0)));
            let sum_rate = p.r1 + p.r2;
            rows.push(SweepRow {
                snr_db: db,
                strategy,
                coeffs,
                r1: p.r1,
                r2: p.r2,
                sum_rate,
                outer_sum,
                gap: outer_sum - sum_rate,
            });
        }
    }
    Ok(rows)
}
