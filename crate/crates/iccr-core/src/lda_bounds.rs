//! Symmetric deterministic-channel parameterization, regime map and outer region.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lda_core::LdaChannelParams;
use crate::region_geometry::{build_region, HalfPlaneConstraint, RateRegion};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: Rational },
    #[error("nS must be positive")]
    ZeroNs,
    #[error("nS={ns} times {name}={value} is not an integer; use a multiple of {lcm}")]
    ParameterGranularity {
        ns: usize,
        name: &'static str,
        value: Rational,
        lcm: usize,
    },
}

pub fn rat(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}

fn int(n: i64) -> Rational {
    Ratio::from_integer(n)
}

/// Symmetric channel with direct strength `ns`, cross strength `alpha*ns`
/// and relay strength `beta*ns`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymLdaConfig {
    pub ns: usize,
    pub alpha: Rational,
    pub beta: Rational,
}

impl SymLdaConfig {
    /// Validates signs and that both derived strengths are integers.
    pub fn new(ns: usize, alpha: Rational, beta: Rational) -> Result<Self, BoundsError> {
        check_exponents(alpha, beta)?;
        if ns == 0 {
            return Err(BoundsError::ZeroNs);
        }
        let cfg = Self { ns, alpha, beta };
        cfg.ni()?;
        cfg.nc()?;
        Ok(cfg)
    }

    /// Smallest `ns` making both derived strengths integral.
    pub fn smallest(alpha: Rational, beta: Rational) -> Result<Self, BoundsError> {
        Self::new(min_integral_ns(alpha, beta), alpha, beta)
    }

    pub fn ni(&self) -> Result<usize, BoundsError> {
        self.scaled("alpha", self.alpha)
    }

    pub fn nc(&self) -> Result<usize, BoundsError> {
        self.scaled("beta", self.beta)
    }

    /// Multiplies a rational rate by `ns`, failing unless the result is an integer.
    pub fn bits(&self, name: &'static str, r: Rational) -> Result<usize, BoundsError> {
        self.scaled(name, r)
    }

    fn scaled(&self, name: &'static str, r: Rational) -> Result<usize, BoundsError> {
        let v = r * int(self.ns as i64);
        if !v.is_integer() {
            return Err(BoundsError::ParameterGranularity {
                ns: self.ns,
                name,
                value: r,
                lcm: min_integral_ns(self.alpha, self.beta),
            });
        }
        Ok(v.to_integer() as usize)
    }

    pub fn channel(&self) -> Result<LdaChannelParams, BoundsError> {
        Ok(LdaChannelParams::symmetric(self.ns, self.ni()?, self.nc()?))
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self.alpha, self.beta)
    }
}

/// Least common multiple of the denominators of `alpha` and `beta`.
pub fn min_integral_ns(alpha: Rational, beta: Rational) -> usize {
    alpha.denom().lcm(beta.denom()) as usize
}

fn check_exponents(alpha: Rational, beta: Rational) -> Result<(), BoundsError> {
    if alpha.is_negative() {
        return Err(BoundsError::Negative { name: "alpha", value: alpha });
    }
    if beta.is_negative() {
        return Err(BoundsError::Negative { name: "beta", value: beta });
    }
    Ok(())
}

/// Cells of the `(alpha, beta)` plane.
///
/// For `beta >= 1` the three labels II, III, IV share one outer region; the
/// split used here is II for `alpha < 1`, III for `1 < alpha <= beta` and IV
/// for `alpha > beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    AlphaOne,
    I,
    II,
    III,
    IV,
    V,
    #[serde(rename = "VI_1")]
    VI1,
    #[serde(rename = "VI_2")]
    VI2,
    #[serde(rename = "VI_3")]
    VI3,
    #[serde(rename = "VI_4")]
    VI4,
}

impl Regime {
    pub const ALL: [Regime; 10] = [
        Regime::AlphaOne,
        Regime::I,
        Regime::II,
        Regime::III,
        Regime::IV,
        Regime::V,
        Regime::VI1,
        Regime::VI2,
        Regime::VI3,
        Regime::VI4,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Regime::AlphaOne => "AlphaOne",
            Regime::I => "I",
            Regime::II => "II",
            Regime::III => "III",
            Regime::IV => "IV",
            Regime::V => "V",
            Regime::VI1 => "VI_1",
            Regime::VI2 => "VI_2",
            Regime::VI3 => "VI_3",
            Regime::VI4 => "VI_4",
        }
    }

    /// Membership test of the regime's own inequalities, ignoring tie-breaking.
    pub fn contains(&self, alpha: Rational, beta: Rational) -> bool {
        let one = Rational::one();
        let half = rat(1, 2);
        match self {
            Regime::AlphaOne => alpha == one,
            Regime::I => alpha > one && beta < one,
            Regime::II => alpha != one && beta >= one && alpha <= one,
            Regime::III => alpha != one && beta >= one && alpha >= one && alpha <= beta,
            Regime::IV => alpha != one && beta >= one && alpha >= beta,
            Regime::V => alpha != one && alpha <= beta && beta <= one,
            Regime::VI1 => beta <= alpha && alpha <= half,
            Regime::VI2 => {
                half < alpha && alpha < one && beta <= alpha && beta + alpha * 3 <= int(2)
            }
            Regime::VI3 => {
                beta + alpha * 3 > int(2) && beta + alpha <= one && beta <= alpha && alpha < one
            }
            Regime::VI4 => beta + alpha > one && beta <= alpha && alpha < one,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Regime of `(alpha, beta)`; boundary points go to the first matching label
/// in enum order, so `alpha = 1` is always [`Regime::AlphaOne`].
pub fn classify_regime(alpha: Rational, beta: Rational) -> Regime {
    Regime::ALL
        .into_iter()
        .find(|r| r.contains(alpha, beta))
        .expect("regime cells cover the non-negative quadrant")
}

/// Constraint `a*r1 + b*r2 <= c` with exact right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactConstraint {
    pub a: i64,
    pub b: i64,
    pub c: Rational,
}

impl ExactConstraint {
    fn new(a: i64, b: i64, c: Rational) -> Self {
        Self { a, b, c }
    }

    fn holds(&self, p: (Rational, Rational)) -> bool {
        int(self.a) * p.0 + int(self.b) * p.1 <= self.c
    }

    pub fn to_f64(&self) -> HalfPlaneConstraint {
        HalfPlaneConstraint::new(self.a as f64, self.b as f64, to_f64(self.c))
    }
}

pub fn to_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn max3(a: Rational, b: Rational, c: Rational) -> Rational {
    a.max(b).max(c)
}

/// Normalized outer-bound constraints in exact arithmetic.
pub fn symmetric_outer_constraints(alpha: Rational, beta: Rational) -> Vec<ExactConstraint> {
    let one = Rational::one();
    let zero = Rational::zero();
    let single = one.max(beta);
    let kra = (one - alpha.max(beta)).max(zero) + beta + one.max(alpha);
    let etw = max3(one - alpha, alpha, beta) * 2 + alpha.min(beta) * 2;
    let weighted = max3(one, beta, alpha)
        + max3(one - alpha, alpha, beta)
        + (one - alpha).max(beta)
        + alpha.min(beta) * 2;
    let mut cs = vec![
        ExactConstraint::new(1, 0, single),
        ExactConstraint::new(0, 1, single),
        ExactConstraint::new(1, 1, kra),
    ];
    if alpha == one {
        cs.push(ExactConstraint::new(1, 1, single));
    }
    cs.push(ExactConstraint::new(1, 1, etw));
    cs.push(ExactConstraint::new(2, 1, weighted));
    cs.push(ExactConstraint::new(1, 2, weighted));
    cs
}

/// Normalized outer region `r_i = R_i / nS`.
pub fn symmetric_outer_region(alpha: Rational, beta: Rational) -> RateRegion {
    let cs: Vec<_> = symmetric_outer_constraints(alpha, beta)
        .iter()
        .map(ExactConstraint::to_f64)
        .collect();
    build_region(&cs).expect("outer constraints bound both rates")
}

/// Outer region in bits per channel use for a concrete `ns`.
pub fn symmetric_outer_region_bits(cfg: &SymLdaConfig) -> RateRegion {
    symmetric_outer_region(cfg.alpha, cfg.beta)
        .scaled(cfg.ns as f64)
        .expect("scaling keeps the region bounded")
}

/// Exact vertices of the region cut by `cs` from the non-negative quadrant.
pub fn exact_vertices(cs: &[ExactConstraint]) -> Vec<(Rational, Rational)> {
    let zero = Rational::zero();
    let mut lines: Vec<ExactConstraint> = cs.to_vec();
    lines.push(ExactConstraint::new(1, 0, zero));
    lines.push(ExactConstraint::new(0, 1, zero));
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (p, q) = (lines[i], lines[j]);
            let det = p.a * q.b - q.a * p.b;
            if det == 0 {
                continue;
            }
            let det = int(det);
            let r1 = (p.c * int(q.b) - q.c * int(p.b)) / det;
            let r2 = (q.c * int(p.a) - p.c * int(q.a)) / det;
            let v = (r1, r2);
            if r1 >= zero && r2 >= zero && cs.iter().all(|h| h.holds(v)) && !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Exact Pareto-maximal vertices, sorted by decreasing `r1`.
pub fn exact_dominant_vertices(alpha: Rational, beta: Rational) -> Vec<(Rational, Rational)> {
    let vs = exact_vertices(&symmetric_outer_constraints(alpha, beta));
    let mut dom: Vec<_> = vs
        .iter()
        .filter(|v| !vs.iter().any(|w| w != *v && w.0 >= v.0 && w.1 >= v.1))
        .copied()
        .collect();
    dom.sort_by_key(|v| std::cmp::Reverse(v.0));
    dom
}

/// Multi-letter term replacement `min{n20,n21} + min{n10,n12}`.
pub fn lda_mlp2(p: &LdaChannelParams) -> usize {
    p.n20.min(p.n21) + p.n10.min(p.n12)
}

/// True on the band `4a-3 <= b <= 3a-2`, `2/3 <= a <= 1` where the sum capacity is `2-a+b`.
pub fn in_sum_capacity_strip(alpha: Rational, beta: Rational) -> bool {
    alpha >= rat(2, 3)
        && alpha <= Rational::one()
        && beta >= alpha * 4 - int(3)
        && beta <= alpha * 3 - int(2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CapacityStatus {
    ExactRegion(RateRegion),
    SumCapacityOnly { value: f64, exact: Rational },
    Open,
}

impl CapacityStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CapacityStatus::ExactRegion(_) => "exact",
            CapacityStatus::SumCapacityOnly { .. } => "sum",
            CapacityStatus::Open => "open",
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CapacityStatus::ExactRegion(_))
    }
}

pub fn capacity_status(alpha: Rational, beta: Rational) -> CapacityStatus {
    let regime = classify_regime(alpha, beta);
    let strip = in_sum_capacity_strip(alpha, beta);
    match regime {
        Regime::AlphaOne
        | Regime::I
        | Regime::II
        | Regime::III
        | Regime::IV
        | Regime::V
        | Regime::VI1 => CapacityStatus::ExactRegion(symmetric_outer_region(alpha, beta)),
        Regime::VI4 if strip => CapacityStatus::ExactRegion(symmetric_outer_region(alpha, beta)),
        Regime::VI2 | Regime::VI3 if strip => {
            let exact = int(2) - alpha + beta;
            CapacityStatus::SumCapacityOnly { value: to_f64(exact), exact }
        }
        _ => CapacityStatus::Open,
    }
}

/// Region for a channel without direct links, in bits per use.
pub fn region_ns_zero(ni: usize, nc: usize) -> RateRegion {
    let (ni, nc) = (ni as f64, nc as f64);
    build_region(&[
        HalfPlaneConstraint::new(1.0, 0.0, nc),
        HalfPlaneConstraint::new(0.0, 1.0, nc),
        HalfPlaneConstraint::new(1.0, 1.0, nc + ni),
    ])
    .expect("axis constraints bound the region")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region_geometry::RatePoint;

    #[test]
    fn examples() {
        assert_eq!(classify_regime(int(2), rat(1, 2)), Regime::I);
        assert_eq!(classify_regime(rat(3, 10), rat(3, 5)), Regime::V);
        assert_eq!(classify_regime(rat(4, 5), rat(1, 10)), Regime::VI3);
        assert_eq!(classify_regime(int(1), int(7)), Regime::AlphaOne);
        assert_eq!(classify_regime(rat(1, 2), int(1)), Regime::II);
    }

    #[test]
    fn alpha_one_triangle() {
        let r = symmetric_outer_region(int(1), rat(1, 2));
        assert_eq!(r.vertices().len(), 3);
        assert!((r.max_sum_rate() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vi1_corner() {
        let dom = exact_dominant_vertices(rat(2, 5), rat(1, 5));
        assert_eq!(dom[0], (int(1), rat(3, 5)));
    }

    #[test]
    fn regime_i_pentagon() {
        let dom = exact_dominant_vertices(rat(6, 5), rat(1, 2));
        assert_eq!(dom, vec![(int(1), rat(7, 10)), (rat(7, 10), int(1))]);
    }

    #[test]
    fn statuses() {
        assert!(capacity_status(rat(2, 5), rat(1, 5)).is_exact());
        match capacity_status(rat(9, 10), rat(13, 20)) {
            CapacityStatus::ExactRegion(r) => {
                let dom = r.dominant_vertices();
                assert!(dom.iter().any(|p| (p.r1 - 1.0).abs() < 1e-12 && (p.r2 - 0.75).abs() < 1e-12));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(capacity_status(rat(3, 5), rat(1, 20)), CapacityStatus::Open);
    }

    #[test]
    fn mlp2() {
        let p = LdaChannelParams {
            n20: 3,
            n21: 5,
            n10: 2,
            n12: 4,
            ..Default::default()
        };
        assert_eq!(lda_mlp2(&p), 5);
        assert_eq!(lda_mlp2(&LdaChannelParams::default()), 0);
        assert_eq!(lda_mlp2(&LdaChannelParams::symmetric(6, 3, 2)), 4);
    }

    #[test]
    fn ns_zero_regions() {
        assert_eq!(region_ns_zero(5, 0).vertices(), &[RatePoint::new(0.0, 0.0)]);
        assert_eq!(region_ns_zero(0, 3).vertices().len(), 3);
        assert_eq!(region_ns_zero(3, 2).vertices().len(), 4);
    }

    #[test]
    fn granularity() {
        let err = SymLdaConfig::new(3, rat(1, 2), rat(1, 3)).unwrap_err();
        assert!(matches!(err, BoundsError::ParameterGranularity { lcm: 6, .. }));
        let cfg = SymLdaConfig::smallest(rat(1, 2), rat(1, 3)).unwrap();
        assert_eq!((cfg.ns, cfg.ni().unwrap(), cfg.nc().unwrap()), (6, 3, 2));
    }
}
