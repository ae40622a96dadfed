//! The self-check suite behind `agreement-lab verify`: divergence facts,
//! conditional-expectation conservation, protocol invariants, substitutes
//! closure under restriction, canonical corpus numbers, and
//! agreement⇒accuracy audits on a freshly synthesized certified corpus.
//!
//! Every check is deterministic (fixed seeds) and reports the measured
//! quantity it judged, so a failure names the number that broke.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    audit_agreement_accuracy, compute_boolean, partition_jb_march, partition_windowed,
};
use crate::corpus::{
    make_coin_xor, make_identical, make_xor, random_boolean_substitutes_structure,
    random_one_sided_substitutes_structure, random_structure, random_substitutes_structure,
};
use crate::divergence::{envelope, pythagorean_residual, BregmanGenerator};
use crate::error::Result;
use crate::metrics::{accuracy_profile, agreement_profile};
use crate::protocol::{
    quadratic_disagreement, run_discretized_bregman, run_discretized_quadratic, run_fast_rounding,
    run_standard, ProtocolKind, ProtocolPartition,
};
use crate::structure::{InformationStructure, Rectangle};
use crate::substitutes::{rectangle_check, CheckMode};
use crate::validate_structure;

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// The measured quantity the verdict rests on.
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckResult {
            name,
            passed,
            detail,
        }
    }
}

/// All check outcomes from one run of the suite.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    /// True when every check passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Wire format: `{"passed": bool, "checks": [{name, passed, detail}]}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "passed": self.all_passed(),
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Copy of a structure with every conditional mean clamped into
/// `[lo, 1 − lo]`, keeping entropy-generator divergences finite.
pub fn clamped_means(s: &InformationStructure, lo: f64) -> Result<InformationStructure> {
    let prob: Vec<Vec<f64>> = (0..s.rows())
        .map(|i| (0..s.cols()).map(|j| s.prob(i, j)).collect())
        .collect();
    let mean: Vec<Vec<f64>> = (0..s.rows())
        .map(|i| {
            (0..s.cols())
                .map(|j| s.mean(i, j).clamp(lo, 1.0 - lo))
                .collect()
        })
        .collect();
    let label = s.label().map(|l| format!("{l}-clamped"));
    validate_structure(s.rows(), s.cols(), prob, mean, label)
}

/// Checks the four Jensen-Bregman facts on `instances` seeded random grid
/// points: (i) ½(D(a‖x)+D(b‖x)) ≥ JB(a,b) for any x; (ii) the reverse
/// triangle inequality for x between a and b; (iii) nesting the interval
/// shrinks JB; (iv) the Jensen gap of any 5-point variable on [a,b] is at
/// most 2·JB(a,b).
pub fn check_divergence_facts(
    name: &'static str,
    g: &BregmanGenerator,
    instances: usize,
    seed: u64,
) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let a: f64 = rng.random();
        let b: f64 = rng.random();
        let x: f64 = rng.random();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let jb = g.jb(lo, hi);

        let midpointed = 0.5 * (g.div(lo, x) + g.div(hi, x));
        if midpointed.is_finite() && midpointed < jb - 1e-12 {
            failures += 1;
            worst = worst.max(jb - midpointed);
        }

        let between = lo + rng.random::<f64>() * (hi - lo);
        let split = g.jb(lo, between) + g.jb(between, hi);
        if split > jb + 1e-12 {
            failures += 1;
            worst = worst.max(split - jb);
        }

        let inner_a = lo + rng.random::<f64>() * (hi - lo);
        let inner_b = lo + rng.random::<f64>() * (hi - lo);
        let (ia, ib) = if inner_a <= inner_b {
            (inner_a, inner_b)
        } else {
            (inner_b, inner_a)
        };
        let nested = g.jb(ia, ib);
        if nested > jb + 1e-12 {
            failures += 1;
            worst = worst.max(nested - jb);
        }

        let points: Vec<f64> = (0..5)
            .map(|_| lo + rng.random::<f64>() * (hi - lo))
            .collect();
        let raw: Vec<f64> = (0..5).map(|_| rng.random::<f64>() + 1e-12).collect();
        let total: f64 = raw.iter().sum();
        let mean: f64 = points
            .iter()
            .zip(&raw)
            .map(|(x, w)| x * w / total)
            .sum();
        let expected_g: f64 = points
            .iter()
            .zip(&raw)
            .map(|(x, w)| g.g(*x) * w / total)
            .sum();
        let gap = expected_g - g.g(mean.clamp(0.0, 1.0));
        if gap > 2.0 * jb + 1e-12 {
            failures += 1;
            worst = worst.max(gap - 2.0 * jb);
        }
    }
    CheckResult::new(
        name,
        failures == 0,
        format!("{failures} violations over {instances} instances (worst excess {worst:.3e})"),
    )
}

/// Conditional-mean conservation: the expected divergence from the cell
/// mean to the block mean splits exactly through the row (or column) mean.
fn check_pythagorean(
    name: &'static str,
    g: &BregmanGenerator,
    clamp: Option<f64>,
) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for seed in 0..30u64 {
        let rows = 2 + (seed % 5) as usize;
        let cols = 2 + (seed % 4) as usize;
        let mut s = random_structure(rows, cols, 90_000 + seed)?;
        if let Some(lo) = clamp {
            s = clamped_means(&s, lo)?;
        }
        let full = s.full_rect();
        worst = worst.max(pythagorean_residual(&s, g, &full)?);
        let t = s.transpose();
        worst = worst.max(pythagorean_residual(&t, g, &t.full_rect())?);
    }
    Ok(CheckResult::new(
        name,
        worst <= 1e-8,
        format!("max residual {worst:.3e} over 30 structures, both orientations"),
    ))
}

/// The three-message quadratic protocol meets its agreement target within
/// its round budget, with nonnegative monovariant drops.
fn check_disc_quad() -> Result<CheckResult> {
    let mut worst_quad: f64 = 0.0;
    let mut ok = true;
    for seed in 0..10u64 {
        let s = random_structure(5, 5, 91_000 + seed)?;
        for epsilon in [0.1, 0.05] {
            let t = run_discretized_quadratic(&s, epsilon)?;
            let final_quad = t
                .trace()
                .last()
                .expect("trace has round 0")
                .agreement_quad;
            worst_quad = worst_quad.max(final_quad / epsilon);
            ok &= final_quad <= epsilon;
            ok &= t.t_end <= (1000.0 / epsilon).ceil() as usize;
            ok &= t.bits == (t.t_end as f64 * 3f64.log2()).ceil() as u64;
            ok &= t.trace().all(|r| r.monovariant_drop >= -1e-12);
        }
    }
    Ok(CheckResult::new(
        "protocol-disc-quad",
        ok,
        format!("worst final agreement / ε = {worst_quad:.3}"),
    ))
}

/// The Bregman discretization meets its Jensen-Bregman target for both
/// shipped generators.
fn check_disc_bregman() -> Result<CheckResult> {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for g in [BregmanGenerator::squared(), BregmanGenerator::kl()] {
        for seed in 0..6u64 {
            let s = random_structure(4, 4, 92_000 + seed)?;
            let epsilon = 0.2;
            let t = run_discretized_bregman(&s, &g, epsilon)?;
            let final_jb = t.trace().last().expect("trace has round 0").agreement_jb;
            worst = worst.max(final_jb / epsilon);
            ok &= final_jb <= epsilon;
            let m = g.range_m();
            ok &= t.t_end <= (24.0 * m * (4.0 * m + epsilon) / (epsilon * epsilon)).ceil() as usize;
        }
    }
    Ok(CheckResult::new(
        "protocol-disc-bregman",
        ok,
        format!("worst final JB / ε = {worst:.3}"),
    ))
}

/// The two-message protocol always takes exactly two rounds and its grid
/// bit accounting matches the alphabet.
fn check_fast() -> Result<CheckResult> {
    let mut ok = true;
    for seed in 0..10u64 {
        let s = random_structure(5, 5, 93_000 + seed)?;
        for epsilon in [0.1, 0.05] {
            let t = run_fast_rounding(&s, epsilon)?;
            let levels = (1.0 / epsilon + 1e-9).floor() as usize + 1;
            ok &= t.t_end == 2;
            ok &= t.message_alphabet == Some(levels);
            ok &= t.bits == 2 * (levels as f64).log2().ceil() as u64;
        }
    }
    Ok(CheckResult::new(
        "protocol-fast",
        ok,
        "2 rounds, grid alphabet, bit accounting on 10 structures × 2 ε".into(),
    ))
}

/// Restriction to any positive-mass rectangle preserves rectangle
/// substitutes, as does transposition.
fn check_substitutes_closure() -> Result<CheckResult> {
    let g = BregmanGenerator::squared();
    let mut rng = ChaCha8Rng::seed_from_u64(94_000);
    let mut ok = true;
    for seed in 1..=4u64 {
        let s = random_substitutes_structure(4, 4, seed, &g)?;
        ok &= rectangle_check(&s.transpose(), &g, CheckMode::Rectangle)?.holds;
        for _ in 0..3 {
            let rows: Vec<usize> = (0..4).filter(|_| rng.random::<f64>() < 0.7).collect();
            let cols: Vec<usize> = (0..4).filter(|_| rng.random::<f64>() < 0.7).collect();
            if rows.is_empty() || cols.is_empty() {
                continue;
            }
            let rect = Rectangle::new(rows, cols)?;
            if s.mass(&rect)? <= 0.0 {
                continue;
            }
            let restricted = s.restrict(&rect)?;
            ok &= rectangle_check(&restricted, &g, CheckMode::Rectangle)?.holds;
        }
    }
    Ok(CheckResult::new(
        "substitutes-closure",
        ok,
        "restriction and transposition of 4 certified structures".into(),
    ))
}

/// The canonical example structures reproduce their frozen numbers.
fn check_canonical_numbers() -> Result<CheckResult> {
    let g = BregmanGenerator::squared();
    let mut ok = true;
    let mut notes = Vec::new();

    let xor = make_xor();
    let root = ProtocolPartition::root(&xor)?;
    let agreement = agreement_profile(&xor, &root, &g)?;
    let accuracy = accuracy_profile(&xor, &root, &g)?;
    let weak = rectangle_check(&xor, &g, CheckMode::Weak)?;
    ok &= agreement.quad.abs() <= 1e-15;
    ok &= (accuracy.alice_quad - 0.25).abs() <= 1e-12;
    ok &= (weak.worst_violation - 0.25).abs() <= 1e-12;
    ok &= weak.full_rect_rhs.abs() <= 1e-15;
    notes.push(format!(
        "xor: agreement {:.1e}, accuracy {:.4}, weak violation {:.4}",
        agreement.quad, accuracy.alice_quad, weak.worst_violation
    ));

    let cx = make_coin_xor();
    let root = ProtocolPartition::root(&cx)?;
    let agreement = agreement_profile(&cx, &root, &g)?;
    let accuracy = accuracy_profile(&cx, &root, &g)?;
    let weak = rectangle_check(&cx, &g, CheckMode::Weak)?;
    let rect = rectangle_check(&cx, &g, CheckMode::Rectangle)?;
    ok &= agreement.quad.abs() <= 1e-15;
    ok &= (accuracy.alice_quad - 0.09).abs() <= 1e-12;
    ok &= weak.holds;
    ok &= (weak.full_rect_lhs - 0.09).abs() <= 1e-12;
    ok &= (weak.full_rect_rhs - 0.16).abs() <= 1e-12;
    ok &= !rect.holds;
    notes.push(format!(
        "coin-xor: accuracy {:.4}, weak {:.2}/{:.2}, rectangle holds {}",
        accuracy.alice_quad, weak.full_rect_lhs, weak.full_rect_rhs, rect.holds
    ));

    let id = make_identical(&[0.2, 0.3, 0.5], &[0.1, 0.6, 0.9])?;
    let rect = rectangle_check(&id, &g, CheckMode::Rectangle)?;
    let t = run_standard(&id, 8)?;
    ok &= rect.holds;
    ok &= t.t_end <= 1;
    notes.push(format!(
        "identical: rectangle holds {}, standard tEnd {}",
        rect.holds, t.t_end
    ));

    Ok(CheckResult::new(
        "canonical-numbers",
        ok,
        notes.join("; "),
    ))
}

/// Agreement⇒accuracy audits on a freshly synthesized certified corpus:
/// every report must be applicable, satisfied, and keep agreement from
/// degrading after the stopping round.
fn check_corpus_audits_quadratic() -> Result<CheckResult> {
    let g = BregmanGenerator::squared();
    let mut corpus = Vec::new();
    for seed in 1..=8u64 {
        corpus.push(random_substitutes_structure(4, 4, seed, &g)?);
    }
    for seed in 0..4u64 {
        corpus.push(random_boolean_substitutes_structure(4, 4, seed)?);
        corpus.push(random_one_sided_substitutes_structure(4, 4, seed)?);
    }
    let mut ok = true;
    let mut audited = 0usize;
    for s in &corpus {
        for (kind, epsilon) in [
            (ProtocolKind::Standard, 0.0),
            (ProtocolKind::DiscretizedQuadratic, 0.05),
            (ProtocolKind::FastRounding, 0.1),
        ] {
            let report = audit_agreement_accuracy(s, &g, kind, epsilon)?;
            ok &= report.applicable && report.satisfied;
            ok &= report.continued_agreement_ok != Some(false);
            audited += 1;
        }
    }
    Ok(CheckResult::new(
        "corpus-audits-quadratic",
        ok,
        format!("{audited} audits over {} certified structures, all satisfied", corpus.len()),
    ))
}

/// The general-divergence bound holds end-to-end on an entropy-generator
/// certified corpus.
fn check_corpus_audits_kl() -> Result<CheckResult> {
    let g = BregmanGenerator::kl();
    let mut corpus = Vec::new();
    for seed in 1..=3u64 {
        corpus.push(random_substitutes_structure(4, 4, seed, &g)?);
    }
    for seed in 0..3u64 {
        corpus.push(random_boolean_substitutes_structure(4, 4, seed)?);
        corpus.push(random_one_sided_substitutes_structure(4, 4, seed)?);
    }
    let mut ok = true;
    let mut audited = 0usize;
    for s in &corpus {
        for (kind, epsilon) in [
            (ProtocolKind::DiscretizedBregman, 0.2),
            (ProtocolKind::FastRounding, 0.1),
        ] {
            let report = audit_agreement_accuracy(s, &g, kind, epsilon)?;
            ok &= report.applicable && report.satisfied;
            audited += 1;
        }
    }
    Ok(CheckResult::new(
        "corpus-audits-kl",
        ok,
        format!("{audited} audits over {} certified structures, all satisfied", corpus.len()),
    ))
}

/// Boolean computation harness on the canonical structures.
fn check_boolean_harness() -> Result<CheckResult> {
    let xor = compute_boolean(&make_xor(), 0.1)?;
    let cx = compute_boolean(&make_coin_xor(), 0.1)?;
    let id = compute_boolean(&make_identical(&[0.5, 0.5], &[0.0, 1.0])?, 0.1)?;
    let ok = (xor.error_probability - 0.5).abs() <= 1e-12
        && (cx.error_probability - 0.1).abs() <= 1e-12
        && id.error_probability == 0.0;
    Ok(CheckResult::new(
        "boolean-harness",
        ok,
        format!(
            "errors: xor {:.3}, coin-xor {:.3}, identical {:.1}",
            xor.error_probability, cx.error_probability, id.error_probability
        ),
    ))
}

/// Interval-partition guarantees: windowed mismatch within √ε·N with
/// intervals no longer than 2/N; JB-march coarse/fine weights and the
/// α-sum cap on certified structures.
fn check_interval_partitions() -> Result<CheckResult> {
    let g = BregmanGenerator::squared();
    let mut ok = true;

    for seed in 0..5u64 {
        let s = random_structure(6, 6, 95_000 + seed)?;
        let root = ProtocolPartition::root(&s)?;
        let eps = quadratic_disagreement(&s, &root)?;
        let n = (eps.powf(-1.0 / 6.0).ceil() as usize).max(2);
        let p = partition_windowed(&s, n)?;
        ok &= p.mismatch_probability(&s) <= eps.sqrt() * n as f64 + 1e-12;
        ok &= p.max_interval_length() <= 2.0 / n as f64 + 1e-12;
    }

    let (beta, c) = (0.01, 0.5);
    let table = envelope(&g, 4001)?;
    for seed in 1..=4u64 {
        let s = random_substitutes_structure(4, 4, seed, &g)?;
        let p = partition_jb_march(&s, &g, beta, c)?;
        let coarse = p.coarse().expect("jb-march records coarse boundaries");
        for w in coarse.windows(2) {
            let jb = g.jb(w[0], w[1]);
            ok &= jb >= beta - 1e-9 && jb <= 2.0 * beta / c + 1e-9;
        }
        let mut fine = vec![0.0];
        fine.extend_from_slice(p.boundaries());
        fine.push(1.0);
        for w in fine.windows(2) {
            ok &= g.jb(w[0], w[1]) <= 4.0 * beta / (c * c) + 1e-9;
        }
        let root = ProtocolPartition::root(&s)?;
        let eps = agreement_profile(&s, &root, &g)?.jb;
        let alpha_sum: f64 = p.alphas().expect("jb-march records alphas").iter().sum();
        ok &= 2.0 * alpha_sum <= 4.0 * (eps / (beta * c)).powf(1.0 / (1.0 - c.log2())) + 1e-9;
        ok &= p.grouped_divergence(&s, &g)? <= 2.0 * table.star_at(p.mismatch_probability(&s)) + 1e-9;
    }

    Ok(CheckResult::new(
        "interval-partitions",
        ok,
        "windowed + jb-march guarantees on random and certified structures".into(),
    ))
}

/// Runs the whole verification suite.
pub fn run_suite() -> Result<VerificationReport> {
    let squared = BregmanGenerator::squared();
    let kl = BregmanGenerator::kl();
    let checks = vec![
        check_divergence_facts("divergence-facts-squared", &squared, 2000, 11),
        check_divergence_facts("divergence-facts-kl", &kl, 2000, 12),
        check_pythagorean("pythagorean-squared", &squared, None)?,
        check_pythagorean("pythagorean-kl", &kl, Some(1e-6))?,
        check_disc_quad()?,
        check_disc_bregman()?,
        check_fast()?,
        check_substitutes_closure()?,
        check_canonical_numbers()?,
        check_corpus_audits_quadratic()?,
        check_corpus_audits_kl()?,
        check_boolean_harness()?,
        check_interval_partitions()?,
    ];
    Ok(VerificationReport { checks })
}
