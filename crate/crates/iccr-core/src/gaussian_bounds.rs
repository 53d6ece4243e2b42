//! Outer-bound formulas for the symmetric Gaussian channel. Logs are base 2.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::region_geometry::{build_region, HalfPlaneConstraint, RateRegion};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("SNR must exceed 1, got {0}")]
    SnrTooSmall(f64),
    #[error("exponents must be non-negative, got alpha={alpha}, beta={beta}")]
    NegativeExponent { alpha: f64, beta: f64 },
    #[error("gain magnitudes must be finite and non-negative")]
    InvalidGain,
}

/// Symmetric gains: direct `hs`, cross `hi` with phases `theta12`, `theta21`, relay `hc`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianChannelParams {
    pub hs: f64,
    pub hi: f64,
    pub hc: f64,
    pub theta12: f64,
    pub theta21: f64,
}

impl GaussianChannelParams {
    pub fn new(hs: f64, hi: f64, hc: f64) -> Result<Self, GaussianError> {
        Self::with_phases(hs, hi, hc, 0.0, 0.0)
    }

    pub fn with_phases(hs: f64, hi: f64, hc: f64, theta12: f64, theta21: f64) -> Result<Self, GaussianError> {
        if [hs, hi, hc].iter().any(|h| !h.is_finite() || *h < 0.0) {
            return Err(GaussianError::InvalidGain);
        }
        Ok(Self { hs, hi, hc, theta12, theta21 })
    }

    /// Gains given by their squares.
    pub fn from_squares(hs2: f64, hi2: f64, hc2: f64) -> Result<Self, GaussianError> {
        Self::new(hs2.sqrt(), hi2.sqrt(), hc2.sqrt())
    }

    pub fn hs2(&self) -> f64 {
        self.hs * self.hs
    }

    pub fn hi2(&self) -> f64 {
        self.hi * self.hi
    }

    pub fn hc2(&self) -> f64 {
        self.hc * self.hc
    }

    /// Complex cross gain `hI e^{j theta12}` into receiver 1.
    pub fn h12(&self) -> Complex64 {
        Complex64::from_polar(self.hi, self.theta12)
    }

    /// Complex cross gain `hI e^{j theta21}` into receiver 2.
    pub fn h21(&self) -> Complex64 {
        Complex64::from_polar(self.hi, self.theta21)
    }

    pub fn full(&self) -> FullGains {
        FullGains {
            h11: self.hs,
            h12: self.hi,
            h10: self.hc,
            h21: self.hi,
            h22: self.hs,
            h20: self.hc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrExponentConfig {
    pub snr: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// `hS^2 = SNR`, `hI^2 = SNR^alpha`, `hC^2 = SNR^beta`.
pub fn from_exponents(cfg: SnrExponentConfig, theta12: f64, theta21: f64) -> Result<GaussianChannelParams, GaussianError> {
    // Negated form also rejects NaN.
    if !(cfg.snr > 1.0) {
        return Err(GaussianError::SnrTooSmall(cfg.snr));
    }
    if !(cfg.alpha >= 0.0 && cfg.beta >= 0.0) {
        return Err(GaussianError::NegativeExponent { alpha: cfg.alpha, beta: cfg.beta });
    }
    GaussianChannelParams::with_phases(
        cfg.snr.sqrt(),
        cfg.snr.powf(cfg.alpha / 2.0),
        cfg.snr.powf(cfg.beta / 2.0),
        theta12,
        theta21,
    )
}

/// `log2(1 + (hS + hC)^2)`.
pub fn single_rate_outer(ch: &GaussianChannelParams) -> f64 {
    (1.0 + (ch.hs + ch.hc).powi(2)).log2()
}

/// `log2(1 + 4 max{hS^2, hC^2})`, never below [`single_rate_outer`].
pub fn single_rate_outer_loose(ch: &GaussianChannelParams) -> f64 {
    (1.0 + 4.0 * ch.hs2().max(ch.hc2())).log2()
}

/// `log2(1 + min{h12^2, h10^2}) + log2(1 + min{h21^2, h20^2}) + 2`.
pub fn gaussian_mlp2(h12_sq: f64, h10_sq: f64, h21_sq: f64, h20_sq: f64) -> f64 {
    (1.0 + h12_sq.min(h10_sq)).log2() + (1.0 + h21_sq.min(h20_sq)).log2() + 2.0
}

/// Magnitudes of all six links.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullGains {
    pub h11: f64,
    pub h12: f64,
    pub h10: f64,
    pub h21: f64,
    pub h22: f64,
    pub h20: f64,
}

/// Sum-rate objective at relay correlation magnitude `rho = |r1|`, `|r2| = sqrt(1 - rho^2)`.
pub fn etw_objective(g: &FullGains, rho: f64) -> f64 {
    let rho = rho.clamp(0.0, 1.0);
    let r2 = (1.0 - rho * rho).max(0.0).sqrt();
    let first = (g.h11 + rho * g.h10).powi(2) / (1.0 + g.h21 * g.h21)
        + (g.h12 + r2 * g.h10).powi(2)
        + 1.0;
    let second = (g.h21 + rho * g.h20).powi(2)
        + (g.h22 + r2 * g.h20).powi(2) / (1.0 + g.h12 * g.h12)
        + 1.0;
    first.log2()
        + second.log2()
        + gaussian_mlp2(g.h12 * g.h12, g.h10 * g.h10, g.h21 * g.h21, g.h20 * g.h20)
}

/// Maximum of [`etw_objective`] over `rho in [0, 1]`: a 1001-point scan,
/// then golden-section search on the bracket around the best grid point.
pub fn etw_sum_outer_general(g: &FullGains) -> f64 {
    etw_maximize(g).1
}

/// Maximizer and maximum of [`etw_objective`].
pub fn etw_maximize(g: &FullGains) -> (f64, f64) {
    const N: usize = 1000;
    let (best_i, best_v) = (0..=N)
        .map(|i| (i, etw_objective(g, i as f64 / N as f64)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let mut lo = best_i.saturating_sub(1) as f64 / N as f64;
    let mut hi = (best_i + 1).min(N) as f64 / N as f64;
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = etw_objective(g, x1);
    let mut f2 = etw_objective(g, x2);
    while hi - lo > 1e-8 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = etw_objective(g, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = etw_objective(g, x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    [(mid, etw_objective(g, mid)), (best_i as f64 / N as f64, best_v)]
        .into_iter()
        .fold((0.0, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc })
}

/// `2 log2(2 (1 + 1/sqrt 2)^2)`.
pub fn etw_constant() -> f64 {
    2.0 * (2.0 * (1.0 + FRAC_1_SQRT_2).powi(2)).log2()
}

/// Closed-form symmetric sum-rate bound.
pub fn etw_sum_outer_symmetric(ch: &GaussianChannelParams) -> f64 {
    let (s, i, c) = (ch.hs2(), ch.hi2(), ch.hc2());
    2.0 * (s.max(c) / (1.0 + i) + i.max(c) + 1.0).log2()
        + 2.0 * (1.0 + i.min(c)).log2()
        + etw_constant()
}

/// Outer corner `(R1, R2)` with `R1 = log2(1 + 4 hS^2)` on the sum-rate face.
pub fn vi1_outer_corner(ch: &GaussianChannelParams) -> (f64, f64) {
    let (s, i, c) = (ch.hs2(), ch.hi2(), ch.hc2());
    let r1 = (1.0 + 4.0 * s).log2();
    let k = 2.0 * (1.0 + FRAC_1_SQRT_2).powi(2);
    let r2 = 2.0 * ((1.0 + i + s / (1.0 + i)) * (1.0 + c) * k).log2() - r1;
    (r1, r2)
}

/// `|hS + hC|^2 <= |hI e^{j theta} + hC|^2` for both cross phases.
pub fn strong_interference_symmetric(ch: &GaussianChannelParams) -> bool {
    let lhs = (ch.hs + ch.hc).powi(2);
    [ch.theta12, ch.theta21]
        .iter()
        .all(|&t| lhs <= (Complex64::from_polar(ch.hi, t) + ch.hc).norm_sqr())
}

/// Region cut by the single-rate bounds and the symmetric sum-rate bound.
///
/// The corner of [`vi1_outer_corner`] sits on the same sum-rate line at the
/// looser single-rate coordinate `log2(1 + 4 hS^2)`, so it adds no cut.
pub fn outer_region_gaussian(ch: &GaussianChannelParams) -> RateRegion {
    let single = single_rate_outer(ch);
    build_region(&[
        HalfPlaneConstraint::new(1.0, 0.0, single),
        HalfPlaneConstraint::new(0.0, 1.0, single),
        HalfPlaneConstraint::new(1.0, 1.0, etw_sum_outer_symmetric(ch)),
    ])
    .expect("single-rate bounds keep the region bounded")
}
