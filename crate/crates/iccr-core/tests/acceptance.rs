//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use iccr_core::gaussian_bounds::{
    etw_constant, etw_sum_outer_general, etw_sum_outer_symmetric, from_exponents, strong_interference_symmetric,
    GaussianChannelParams, SnrExponentConfig,
};
use iccr_core::gaussian_schemes::{
    analytic_gap, gap_theorem5, gap_theorem6, linear_strategy_region, strategy_sweep, theorem5_bound,
    vi1_achievable_rates, vi1_allocation, CoeffGrid, RelayCoeffs, Strategy, THEOREM6_BOUND,
};
use iccr_core::lda_bounds::{
    capacity_status, exact_dominant_vertices, in_sum_capacity_strip, rat, Rational, Regime,
    SymLdaConfig,
};
use iccr_core::lda_core::{lda_outputs, BitVec, LdaChannelParams};
use iccr_core::lda_schemes::{build_plan, verify_plan, Corner, VerifyMode};
use iccr_core::par::Exec;
use iccr_core::region_geometry::{
    build_region, per_user_gap, region_contains, HalfPlaneConstraint, RatePoint, RateRegion,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Preferred exhaustive budget in message bits; regimes with fewer than 20
/// such samples are topped up with their cheapest remaining points.
const MAX_BITS: usize = 16;
const HARD_MAX_BITS: usize = 24;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rationals(max_den: i64, hi: i64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=max_den).flat_map(|d| (0..=hi * d).map(move |n| rat(n, d))).collect();
    out.sort();
    out.dedup();
    out
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (n - 1) as f64)).collect()
}

/// `count` entries spread evenly over `items`.
fn spread<T: Clone>(items: &[T], count: usize) -> Vec<T> {
    if items.len() <= count {
        return items.to_vec();
    }
    (0..count).map(|k| items[k * items.len() / count].clone()).collect()
}

fn ratio(n: usize, ns: usize) -> Rational {
    rat(n as i64, ns as i64)
}

/// Exact-capacity samples per regime at the smallest `nS <= 12`.
fn capacity_samples() -> Vec<(Regime, Vec<SymLdaConfig>)> {
    let g = rationals(12, 3);
    let mut by_regime: Vec<(Regime, Vec<(usize, SymLdaConfig)>)> = Vec::new();
    for &a in &g {
        for &b in &g {
            if !capacity_status(a, b).is_exact() {
                continue;
            }
            let Ok(cfg) = SymLdaConfig::smallest(a, b) else { continue };
            if cfg.ns > 12 {
                continue;
            }
            let ns = Rational::from_integer(cfg.ns as i64);
            let bits = exact_dominant_vertices(a, b)
                .iter()
                .map(|&(r1, r2)| ((r1 + r2) * ns).ceil().to_integer() as usize)
                .max()
                .unwrap_or(0);
            if bits > HARD_MAX_BITS {
                continue;
            }
            let regime = cfg.regime();
            match by_regime.iter_mut().find(|(r, _)| *r == regime) {
                Some((_, v)) => v.push((bits, cfg)),
                None => by_regime.push((regime, vec![(bits, cfg)])),
            }
        }
    }
    by_regime.sort_by_key(|(r, _)| *r);
    by_regime
        .into_iter()
        .map(|(r, v)| {
            let cheap: Vec<SymLdaConfig> = v.iter().filter(|(b, _)| *b <= MAX_BITS).map(|(_, c)| *c).collect();
            if cheap.len() >= 20 {
                return (r, spread(&cheap, 20));
            }
            let mut all = v;
            all.sort_by_key(|(b, _)| *b);
            (r, all.into_iter().take(20).map(|(_, c)| c).collect())
        })
        .collect()
}

fn show(p: &[(Rational, Rational)]) -> String {
    let v: Vec<String> = p.iter().map(|(a, b)| format!("({a}, {b})")).collect();
    v.join(" ")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    for (regime, samples) in capacity_samples() {
        let (mut decoded, mut matched) = (0, 0);
        let mut first_miss = None;
        for cfg in &samples {
            let mut corners = Vec::new();
            let mut ok = true;
            for corner in [Corner::R1Dominant, Corner::R2Dominant] {
                let plan = build_plan(cfg, corner).expect("exact regimes are plannable");
                let (r1, r2) = plan.target_rates();
                corners.push((ratio(r1, cfg.ns), ratio(r2, cfg.ns)));
                ok &= r1 + r2 <= HARD_MAX_BITS
                    && verify_plan(&plan, VerifyMode::Exhaustive).is_ok_and(|rep| rep.verified());
            }
            decoded += usize::from(ok);
            let dom = exact_dominant_vertices(cfg.alpha, cfg.beta);
            let mut got = corners.clone();
            got.sort();
            got.dedup();
            let mut want = dom.clone();
            want.sort();
            if got == want {
                matched += 1;
            } else if first_miss.is_none() {
                first_miss = Some(format!(
                    "at ({}, {}) plans reach {} but outer corners are {}",
                    cfg.alpha,
                    cfg.beta,
                    show(&corners),
                    show(&dom)
                ));
            }
        }
        let n = samples.len();
        let good = n >= 20 && decoded == n && matched == n;
        pass &= good;
        let mut note = format!("{regime}: {n} samples, {decoded} decode, {matched} at outer corners");
        if let Some(m) = first_miss {
            note.push_str(&format!(" [{m}]"));
        }
        notes.push(note);
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 60.0;
    notes.push(format!("{secs:.1}s"));
    outcome(pass, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let mut pts = Vec::new();
    for &a in &rationals(12, 1) {
        for &b in &rationals(12, 1) {
            if !in_sum_capacity_strip(a, b) || a == Rational::from_integer(1) {
                continue;
            }
            let Ok(cfg) = SymLdaConfig::smallest(a, b) else { continue };
            if let Ok(p) = build_plan(&cfg, Corner::R1Dominant) {
                let (r1, r2) = p.target_rates();
                if r1 + r2 <= MAX_BITS {
                    pts.push((cfg, p));
                }
            }
        }
    }
    let mut good = 0;
    for (cfg, p) in &pts {
        let rep = verify_plan(p, VerifyMode::Exhaustive).expect("within budget");
        let (r1, r2) = p.target_rates();
        let want = (rat(2, 1) - cfg.alpha + cfg.beta) * Rational::from_integer(cfg.ns as i64);
        if rep.verified() && Rational::from_integer((r1 + r2) as i64) == want {
            good += 1;
        }
    }
    outcome(pts.len() >= 10 && good == pts.len(), format!("{good}/{} strip samples verified at (2-a+b)nS", pts.len()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    let mut points = 0;
    for s2 in log_space(0.0, 12.0, 10) {
        for f in (0..10).map(|k| k as f64 / 9.0) {
            let c2 = s2.powf(f);
            for i2 in log_space(-6.0, 0.0, 10).into_iter().map(|g| c2 / 2.0 * g) {
                points += 1;
                for t in [0.0, PI / 2.0, PI] {
                    let ch = GaussianChannelParams::with_phases(s2.sqrt(), i2.sqrt(), c2.sqrt(), t, t).unwrap();
                    let rep = gap_theorem5(&ch).expect("grid inside the regime");
                    worst = worst.max(rep.gap_per_user);
                    violations += usize::from(!rep.pass);
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        violations == 0 && secs < 10.0,
        format!(
            "{points} points x 3 phases, max gap {worst:.3} <= {:.3}, {violations} violations, {secs:.2}s",
            theorem5_bound()
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut admissible = 0;
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    let n = 22;
    for s2 in log_space(1.0, 12.0, n) {
        for i2 in log_space(0.0, 6.0, n) {
            for c2 in log_space(-2.0, 6.0, n) {
                let ch = GaussianChannelParams::from_squares(s2, i2, c2).unwrap();
                let Ok(rep) = gap_theorem6(&ch) else { continue };
                admissible += 1;
                worst = worst.max(rep.gap_per_user);
                violations += usize::from(!rep.pass);
            }
        }
    }
    let (t0, analytic) = analytic_gap(10.0, 10.0);
    let grid_ok = admissible > 0 && violations == 0;
    let analytic_ok = (analytic - THEOREM6_BOUND).abs() <= 0.1;
    outcome(
        grid_ok && analytic_ok,
        format!(
            "grid {}: {admissible} admissible of {} points, max gap {worst:.3} <= {THEOREM6_BOUND}; \
             analytic {}: t0 = {t0:.3}, gap {analytic:.3} vs {THEOREM6_BOUND}",
            if grid_ok { "ok" } else { "fails" },
            n * n * n,
            if analytic_ok { "ok" } else { "fails" },
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let ch = GaussianChannelParams::from_squares(
            10f64.powf(rng.gen_range(0.0..8.0)),
            10f64.powf(rng.gen_range(0.0..8.0)),
            10f64.powf(rng.gen_range(0.0..8.0)),
        )
        .unwrap();
        worst = worst.max((etw_sum_outer_general(&ch.full()) - etw_sum_outer_symmetric(&ch)).abs());
    }
    let k = etw_constant();
    outcome(
        worst <= 1e-8 && k < 5.17,
        format!("max |general - symmetric| = {worst:.3e}, constant {k:.4} < 5.17"),
    )
}

fn criterion_6() -> Outcome {
    let snr = 1e9;
    let (mut agree, mut total) = (0, 0);
    let mut first_miss = None;
    for ai in 0..=60 {
        for bi in 0..=60 {
            let (a, b) = (ai as f64 * 0.05, bi as f64 * 0.05);
            if (a.max(b) - 1.0).abs() < 0.05 {
                continue;
            }
            let ch = from_exponents(SnrExponentConfig { snr, alpha: a, beta: b }, 0.0, 0.0).unwrap();
            let expect = a.max(b) >= 1.0;
            total += 1;
            if strong_interference_symmetric(&ch) == expect {
                agree += 1;
            } else if first_miss.is_none() {
                first_miss = Some(format!("alpha {a:.2} beta {b:.2}"));
            }
        }
    }
    let mut detail = format!("{agree}/{total} agree");
    if let Some(m) = first_miss {
        detail.push_str(&format!(", first disagreement at {m}"));
    }
    outcome(agree == total, detail)
}

fn pentagon(rng: &mut ChaCha8Rng, scale: f64) -> RateRegion {
    let u1 = rng.gen_range(0.1..1.0) * scale;
    let u2 = rng.gen_range(0.1..1.0) * scale;
    let s = rng.gen_range(u1.max(u2)..=u1 + u2);
    build_region(&[
        HalfPlaneConstraint::new(1.0, 0.0, u1),
        HalfPlaneConstraint::new(0.0, 1.0, u2),
        HalfPlaneConstraint::new(1.0, 1.0, s),
    ])
    .unwrap()
}

/// Dense grid over the outer boundary, back-off found by scanning `g`.
fn brute_gap(outer: &RateRegion, inner: &RateRegion) -> f64 {
    let v = outer.vertices();
    let mut worst: f64 = 0.0;
    for i in 0..v.len() {
        let (p, q) = (v[i], v[(i + 1) % v.len()]);
        for k in 0..=200 {
            let t = k as f64 / 200.0;
            let x = RatePoint::new(p.r1 + t * (q.r1 - p.r1), p.r2 + t * (q.r2 - p.r2));
            let mut g = 0.0;
            while !region_contains(inner, x.backed_off(g), 1e-12) {
                g += 5e-4;
            }
            worst = worst.max(g);
        }
    }
    worst
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let outer = pentagon(&mut rng, 10.0);
        let inner = pentagon(&mut rng, 6.0);
        worst = worst.max((per_user_gap(&outer, &inner) - brute_gap(&outer, &inner)).abs());
    }
    outcome(worst <= 2e-3, format!("100 pairs, max deviation {worst:.2e} <= 2e-3"))
}

fn random_bits(len: usize, rng: &mut ChaCha8Rng) -> BitVec {
    let mut v = BitVec::zeros(len);
    for i in 0..len {
        v.set(i, rng.gen());
    }
    v
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();

    let mut linear = true;
    let mut nilpotent = true;
    for _ in 0..1000 {
        let p = LdaChannelParams::symmetric(rng.gen_range(0..10), rng.gen_range(0..10), rng.gen_range(0..10));
        let m = p.m();
        let a: Vec<BitVec> = (0..3).map(|_| random_bits(m, &mut rng)).collect();
        let b: Vec<BitVec> = (0..3).map(|_| random_bits(m, &mut rng)).collect();
        let s: Vec<BitVec> = a.iter().zip(&b).map(|(x, y)| x.xor(y).unwrap()).collect();
        let ya = lda_outputs(&p, &a[0], &a[1], &a[2]).unwrap();
        let yb = lda_outputs(&p, &b[0], &b[1], &b[2]).unwrap();
        let ys = lda_outputs(&p, &s[0], &s[1], &s[2]).unwrap();
        linear &= ys.0 == ya.0.xor(&yb.0).unwrap() && ys.1 == ya.1.xor(&yb.1).unwrap();
        nilpotent &= a[0].shifted_down(m).is_zero();
    }
    if !linear {
        failures.push("linearity");
    }
    if !nilpotent {
        failures.push("nilpotency");
    }

    // Regime V: user 2's message never reaches receiver 1 and vice versa.
    let mut neutral = true;
    for (ns, a, b) in [(4, rat(1, 2), rat(3, 4)), (6, rat(1, 3), rat(2, 3)), (10, rat(2, 5), rat(1, 2))] {
        let plan = build_plan(&SymLdaConfig::new(ns, a, b).unwrap(), Corner::R1Dominant).unwrap();
        let (r1, r2) = plan.target_rates();
        for _ in 0..200 {
            let (w1, w2) = (random_bits(r1, &mut rng), random_bits(r2, &mut rng));
            let (y1, y2) = plan.outputs(&w1, &w2).unwrap();
            let (y1_alone, _) = plan.outputs(&w1, &BitVec::zeros(r2)).unwrap();
            let (_, y2_alone) = plan.outputs(&BitVec::zeros(r1), &w2).unwrap();
            neutral &= y1 == y1_alone && y2 == y2_alone;
        }
    }
    if !neutral {
        failures.push("neutralization");
    }

    let (mut power, mut dominance, mut admissible) = (true, true, 0);
    for s2 in log_space(1.0, 12.0, 16) {
        for i2 in log_space(0.0, 6.0, 16) {
            for c2 in log_space(-2.0, 6.0, 16) {
                let ch = GaussianChannelParams::from_squares(s2, i2, c2).unwrap();
                let Ok(alloc) = vi1_allocation(&ch) else { continue };
                admissible += 1;
                power &= (alloc.tx1_power() - 1.0).abs() < 1e-12
                    && alloc.tx2_power() <= 1.0 + 1e-12
                    && (alloc.relay_power() - 1.0).abs() < 1e-15;
                let r = vi1_achievable_rates(&ch).unwrap();
                dominance &= r.exact.as_array().iter().zip(r.lower.as_array()).all(|(e, l)| *e >= l - 1e-12);
            }
        }
    }
    if !power {
        failures.push("power identities");
    }
    if !dominance {
        failures.push("exact-rate dominance");
    }
    let detail = if failures.is_empty() {
        format!("linearity, nilpotency, neutralization, power and dominance hold ({admissible} admissible channels)")
    } else {
        format!("failing: {}", failures.join(", "))
    };
    outcome(failures.is_empty() && admissible > 0, detail)
}

fn strategy_ordering() -> Outcome {
    let snrs = [40.0, 50.0, 60.0, 70.0, 80.0];
    let rows = strategy_sweep(&snrs, 0.5, 0.7, &[Strategy::Ian, Strategy::Jd], &CoeffGrid::default(), Exec::Auto)
        .expect("valid sweep");
    let gap_of = |k: Strategy| -> Vec<f64> { rows.iter().filter(|r| r.strategy == k).map(|r| r.gap).collect() };
    let ian = gap_of(Strategy::Ian);
    let jd = gap_of(Strategy::Jd);
    let silent: Vec<f64> = snrs
        .iter()
        .zip(rows.iter().filter(|r| r.strategy == Strategy::Ian))
        .map(|(&db, row)| {
            let ch = from_exponents(SnrExponentConfig { snr: 10f64.powf(db / 10.0), alpha: 0.5, beta: 0.7 }, 0.0, 0.0)
                .unwrap();
            let r = linear_strategy_region(&ch, &RelayCoeffs::SILENT, Strategy::Ian).unwrap();
            row.outer_sum - r.max_sum_rate()
        })
        .collect();
    let bound = 2.0 * theorem5_bound();
    let tracks = ian.iter().all(|&g| g <= bound);
    let grows = |g: &[f64]| g.windows(2).all(|w| w[1] > w[0]);
    let pass = tracks && grows(&jd) && grows(&silent);
    let fmt = |g: &[f64]| g.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join("/");
    outcome(
        pass,
        format!(
            "sum gaps at {:?} dB: IaN {} (<= {bound:.2}), JD {}, silent {}",
            snrs,
            fmt(&ian),
            fmt(&jd),
            fmt(&silent)
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 LDA capacity corners", criterion_1),
        ("2 sum-capacity strip", criterion_2),
        ("3 zero-forcing gap", criterion_3),
        ("4 six-stream gap", criterion_4),
        ("5 sum-rate bound consistency", criterion_5),
        ("6 strong interference equivalence", criterion_6),
        ("7 geometry oracle", criterion_7),
        ("8 property suites", criterion_8),
        ("strategy ordering", strategy_ordering),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        failed += usize::from(!o.pass);
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
