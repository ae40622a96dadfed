//! Accuracy bounds, interval-partition devices, thwart densities, and
//! end-to-end agreement⇒accuracy audits.
//!
//! The centerpiece is [`audit_agreement_accuracy`]: run a protocol to its
//! stopping round, measure the final agreement ε̂ and both experts' accuracy,
//! and compare the accuracy against the level the agreement implies —
//! `10·ε̂^{1/3} + δ` under squared distance ([`bound_quadratic`]), and
//! `(8/c²)·β + 16·Ĝ*((ε̂/β)^{1/(1−log₂c)})` for a general Bregman generator
//! ([`bound_bregman`]). The interval partitions ([`partition_windowed`],
//! [`partition_jb_march`]) are the constructive devices those bounds rest
//! on; [`thwart_density`] places their boundaries where few signal pairs
//! straddle them. [`compute_boolean`] runs the two-message protocol as a
//! bounded-error computation of a boolean target.

use crate::divergence::{envelope, BregmanGenerator};
use crate::error::{Error, Result};
use crate::metrics::{accuracy_profile, agreement_profile};
use crate::protocol::{self, quadratic_disagreement, Evolution, ProtocolKind};
use crate::structure::InformationStructure;
use crate::substitutes::{self, rectangle_check, CheckMode};

/// Number of candidates in the automatic β grid search.
pub const BETA_GRID_POINTS: usize = 200;

/// Low end of the automatic β grid.
pub const BETA_GRID_MIN: f64 = 1e-8;

/// β reported for the zero-agreement limit, where the bound is minimized
/// as β → 0.
pub const BETA_FLOOR: f64 = 1e-12;

/// Interval-width tolerance for boundary bisections.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

/// Slack absorbing bisection error in the marching comparisons, so a
/// remainder that equals the target in exact arithmetic terminates the
/// march instead of spawning a sliver interval.
const MARCH_SLACK: f64 = 1e-10;

/// Additive slack when comparing a measured accuracy to a bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Triangle-inequality constant used by audits; both shipped generators
/// satisfy JB(a,x) + JB(x,b) ≥ ½·JB(a,b).
pub const DEFAULT_TRIANGLE_C: f64 = 0.5;

/// Grid resolution of the concave-envelope table behind [`bound_bregman`].
const BOUND_ENVELOPE_GRID: usize = 4001;

// ---------------------------------------------------------------------------
// Closed-form bounds
// ---------------------------------------------------------------------------

/// The accuracy level implied by ε-agreement under squared distance, with
/// an additive δ for approximately substitutable signals: `10·ε^{1/3} + δ`.
pub fn bound_quadratic(epsilon: f64, delta: f64) -> f64 {
    debug_assert!(epsilon >= 0.0, "agreement level must be nonnegative");
    debug_assert!(delta >= 0.0, "substitutes slack must be nonnegative");
    10.0 * epsilon.cbrt() + delta
}

/// One evaluated β choice and the bound value it yields.
#[derive(Debug, Clone, Copy)]
pub struct BetaChoice {
    pub beta: f64,
    pub value: f64,
}

/// An evaluated general-divergence accuracy bound
/// `(8/c²)·β + 16·Ĝ*((ε/β)^{1/(1−log₂c)})`.
#[derive(Debug, Clone)]
pub struct BregmanBound {
    /// Agreement level the bound was evaluated at.
    pub epsilon: f64,
    /// Triangle-inequality constant.
    pub c: f64,
    /// The β behind `value`: the caller's, or the grid minimizer.
    pub beta: f64,
    /// Whether `beta` came from the automatic grid search.
    pub auto_beta: bool,
    /// Bound value at `beta`.
    pub value: f64,
    /// Envelope argument `(ε/β)^{1/(1−log₂c)}`, clamped to [0,1].
    pub q: f64,
    /// The bound exceeds the divergence range M, so it constrains nothing.
    pub vacuous: bool,
    /// β = ε^{r/(r+1−log₂c)} with r = 1, the right scaling when the
    /// envelope grows linearly near zero.
    pub power_choice: Option<BetaChoice>,
    /// β = ε^{1/3}·ln(1/ε)^{2/3}, the right scaling for the entropy
    /// generator.
    pub log_choice: Option<BetaChoice>,
}

/// Evaluates the general accuracy bound for a generator at agreement level
/// `epsilon`, either at a fixed β or minimizing over [`BETA_GRID_POINTS`]
/// log-spaced β values in `[1e-8, max(1, JB_G(0,1))]`. The two asymptotic
/// β scalings are evaluated alongside for reference whenever ε ∈ (0,1).
pub fn bound_bregman(
    g: &BregmanGenerator,
    c: f64,
    epsilon: f64,
    beta: Option<f64>,
) -> Result<BregmanBound> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::DomainError(format!(
            "triangle constant c must lie in (0,1), got {c}"
        )));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon,
            requirement: "agreement level must be nonnegative",
        });
    }
    let table = envelope(g, BOUND_ENVELOPE_GRID)?;
    let exponent = 1.0 / (1.0 - c.log2());
    let eval = |b: f64| -> (f64, f64) {
        let q = if epsilon == 0.0 {
            0.0
        } else {
            (epsilon / b).powf(exponent).min(1.0)
        };
        (q, 8.0 / (c * c) * b + 16.0 * table.star_at(q))
    };

    let (beta_used, auto_beta) = match beta {
        Some(b) if b > 0.0 => (b, false),
        Some(b) => {
            return Err(Error::DomainError(format!(
                "beta must be positive, got {b}"
            )))
        }
        None if epsilon == 0.0 => (BETA_FLOOR, true),
        None => {
            let lo = BETA_GRID_MIN;
            let hi = g.jb(0.0, 1.0).max(1.0);
            let span = (hi / lo).ln();
            let mut best = (lo, eval(lo).1);
            for k in 1..BETA_GRID_POINTS {
                let b = lo * (span * k as f64 / (BETA_GRID_POINTS - 1) as f64).exp();
                let v = eval(b).1;
                if v < best.1 {
                    best = (b, v);
                }
            }
            (best.0, true)
        }
    };
    let (q, value) = eval(beta_used);

    let suggest = |b: f64| BetaChoice {
        beta: b,
        value: eval(b).1,
    };
    let in_unit = epsilon > 0.0 && epsilon < 1.0;
    let power_choice = in_unit.then(|| suggest(epsilon.powf(1.0 / (2.0 - c.log2()))));
    let log_choice =
        in_unit.then(|| suggest(epsilon.cbrt() * (1.0 / epsilon).ln().powf(2.0 / 3.0)));

    Ok(BregmanBound {
        epsilon,
        c,
        beta: beta_used,
        auto_beta,
        value,
        q,
        vacuous: value > g.range_m(),
        power_choice,
        log_choice,
    })
}

// ---------------------------------------------------------------------------
// Thwart density
// ---------------------------------------------------------------------------

/// Positive-mass signal pairs as (mass, lower belief, upper belief).
fn belief_pairs(s: &InformationStructure) -> Vec<(f64, f64, f64)> {
    let alice = s.alice_beliefs();
    let bob = s.bob_beliefs();
    let mut pairs = Vec::new();
    for (i, a) in alice.iter().enumerate() {
        let Some(a) = *a else { continue };
        for (j, b) in bob.iter().enumerate() {
            let p = s.prob(i, j);
            if p <= 0.0 {
                continue;
            }
            let b = b.expect("a positive cell's column has mass");
            pairs.push(if a <= b { (p, a, b) } else { (p, b, a) });
        }
    }
    pairs
}

fn density_at(pairs: &[(f64, f64, f64)], x: f64, inclusive: bool) -> f64 {
    pairs
        .iter()
        .filter(|&&(_, lo, hi)| lo <= x && x <= hi && (inclusive || lo != hi))
        .map(|&(p, _, _)| p)
        .sum()
}

/// The probability that `x` lies between the two experts' prior
/// expectations, inclusive of the endpoints. The strict variant
/// (`inclusive = false`) additionally requires the expectations to differ.
/// Piecewise constant in `x` between distinct belief values.
pub fn thwart_density(s: &InformationStructure, x: f64, inclusive: bool) -> f64 {
    debug_assert!(x > 0.0 && x < 1.0, "density is evaluated inside (0,1)");
    density_at(&belief_pairs(s), x, inclusive)
}

/// Distinct belief values of both parties, sorted ascending.
fn belief_points(s: &InformationStructure) -> Vec<f64> {
    let mut points: Vec<f64> = s
        .alice_beliefs()
        .into_iter()
        .flatten()
        .chain(s.bob_beliefs().into_iter().flatten())
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// Candidate density minimizers in `[lo, hi)`: optionally `lo` itself, plus
/// the midpoint of every gap between consecutive points of
/// `{lo} ∪ (beliefs ∩ (lo, hi)) ∪ {hi}`. Density is constant on each open
/// gap and only jumps up at belief values, so these candidates cover every
/// attainable minimum.
fn density_candidates(points: &[f64], lo: f64, hi: f64, include_lo: bool) -> Vec<f64> {
    let mut anchors = vec![lo];
    anchors.extend(points.iter().copied().filter(|&p| p > lo && p < hi));
    anchors.push(hi);
    let mut candidates = Vec::with_capacity(anchors.len());
    if include_lo {
        candidates.push(lo);
    }
    for w in anchors.windows(2) {
        candidates.push(0.5 * (w[0] + w[1]));
    }
    candidates
}

/// Exact minimizer over `candidates` (ties go to the smallest point).
fn minimize_density(
    pairs: &[(f64, f64, f64)],
    candidates: &[f64],
    inclusive: bool,
) -> (f64, f64) {
    let mut best = (candidates[0], density_at(pairs, candidates[0], inclusive));
    for &x in &candidates[1..] {
        let rho = density_at(pairs, x, inclusive);
        if rho < best.1 {
            best = (x, rho);
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Interval partitions
// ---------------------------------------------------------------------------

/// How an interval partition was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionConstruction {
    /// N evenly spaced windows; each boundary is the inclusive-thwart
    /// minimizer within its window.
    Windowed,
    /// Coarse intervals marched to Jensen-Bregman weight 2β/c, then one
    /// strict-thwart-minimizing boundary inside each coarse interval.
    JbMarch,
}

impl PartitionConstruction {
    /// Stable string id.
    pub fn id(&self) -> &'static str {
        match self {
            PartitionConstruction::Windowed => "windowed",
            PartitionConstruction::JbMarch => "jb-march",
        }
    }
}

/// A partition of [0,1] into intervals, with the construction metadata the
/// per-interval guarantees are stated against. Interval `k` is
/// `[x_k, x_{k+1})` over the boundary sequence extended by 0 and 1 (the
/// last interval is closed).
#[derive(Debug, Clone)]
pub struct IntervalPartition {
    boundaries: Vec<f64>,
    windows: Option<Vec<(f64, f64)>>,
    construction: PartitionConstruction,
    coarse: Option<Vec<f64>>,
    alphas: Option<Vec<f64>>,
}

impl IntervalPartition {
    /// Interior boundaries, strictly increasing within (0,1).
    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// Per-boundary admissible window the boundary was chosen from.
    pub fn windows(&self) -> Option<&[(f64, f64)]> {
        self.windows.as_deref()
    }

    /// Which construction produced this partition.
    pub fn construction(&self) -> PartitionConstruction {
        self.construction
    }

    /// Jb-march only: the coarse boundary sequence from step one, including
    /// the endpoints 0 and 1.
    pub fn coarse(&self) -> Option<&[f64]> {
        self.coarse.as_deref()
    }

    /// Jb-march only: the strict thwart density at each chosen boundary
    /// (the per-coarse-interval minimum).
    pub fn alphas(&self) -> Option<&[f64]> {
        self.alphas.as_deref()
    }

    /// The intervals as (lo, hi) pairs covering [0, 1].
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        let mut ends = vec![0.0];
        ends.extend_from_slice(&self.boundaries);
        ends.push(1.0);
        ends.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Index of the interval containing `x` (boundaries belong to the
    /// interval on their right).
    pub fn interval_index(&self, x: f64) -> usize {
        self.boundaries.partition_point(|&b| b <= x)
    }

    /// Length of the longest interval.
    pub fn max_interval_length(&self) -> f64 {
        self.intervals()
            .into_iter()
            .map(|(lo, hi)| hi - lo)
            .fold(0.0, f64::max)
    }

    /// Probability that the two experts' prior expectations fall in
    /// different intervals.
    pub fn mismatch_probability(&self, s: &InformationStructure) -> f64 {
        belief_pairs(s)
            .into_iter()
            .filter(|&(_, lo, hi)| self.interval_index(lo) != self.interval_index(hi))
            .map(|(p, _, _)| p)
            .sum()
    }

    /// Expected divergence from Bob's prior expectation to his expectation
    /// after additionally learning which interval Alice's expectation lies
    /// in: E[D_G(μ_{S^{(k(σ))}τ} ‖ μ_τ)], where S^{(k)} collects the rows
    /// whose belief falls in interval k.
    pub fn grouped_divergence(
        &self,
        s: &InformationStructure,
        g: &BregmanGenerator,
    ) -> Result<f64> {
        let alice = s.alice_beliefs();
        let bob = s.bob_beliefs();
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); self.boundaries.len() + 1];
        for (i, belief) in alice.iter().enumerate() {
            if let Some(a) = belief {
                groups[self.interval_index(*a)].push(i);
            }
        }
        let mut total = 0.0;
        for rows in groups.iter().filter(|rows| !rows.is_empty()) {
            for (j, prior) in bob.iter().enumerate() {
                let mass: f64 = rows.iter().map(|&i| s.prob(i, j)).sum();
                if mass <= 0.0 {
                    continue;
                }
                let refined = s.col_mean(j, rows)?;
                let prior = prior.expect("a positive cell's column has mass");
                total += mass * g.div(refined, prior);
            }
        }
        Ok(total)
    }

    /// Wire format with the construction id and all metadata.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "construction": self.construction.id(),
            "boundaries": self.boundaries,
            "windows": self.windows,
            "coarse": self.coarse,
            "alphas": self.alphas,
        })
    }
}

/// Partitions [0,1] into `n` near-uniform intervals. Boundary `i` is the
/// exact minimizer of inclusive thwart density over the half-open window
/// `[i/n − 1/(2n), i/n + 1/(2n))`, so every interval has length at most
/// `2/n` and the probability of the two experts' beliefs landing in
/// different intervals is at most `√ε·n`, where ε = E[(μ_σ − μ_τ)²].
pub fn partition_windowed(s: &InformationStructure, n: usize) -> Result<IntervalPartition> {
    if n < 2 {
        return Err(Error::DomainError(format!(
            "a windowed partition needs at least 2 intervals, got {n}"
        )));
    }
    let pairs = belief_pairs(s);
    let points = belief_points(s);
    let nf = n as f64;
    let mut boundaries = Vec::with_capacity(n - 1);
    let mut windows = Vec::with_capacity(n - 1);
    for i in 1..n {
        let lo = i as f64 / nf - 0.5 / nf;
        let hi = i as f64 / nf + 0.5 / nf;
        let candidates = density_candidates(&points, lo, hi, true);
        let (x, _) = minimize_density(&pairs, &candidates, true);
        boundaries.push(x);
        windows.push((lo, hi));
    }
    Ok(IntervalPartition {
        boundaries,
        windows: Some(windows),
        construction: PartitionConstruction::Windowed,
        coarse: None,
        alphas: None,
    })
}

/// Bisection for the unique root of an increasing function on [lo, hi].
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Partitions [0,1] in two steps. Step one marches coarse boundaries so
/// each coarse interval carries Jensen-Bregman weight 2β/c, re-balancing
/// the last boundary (JB to the left = JB to the right) when the remainder
/// falls short of β — every coarse interval then carries weight in
/// [β, 2β/c]; by the c-triangle inequality the re-balanced pair stays in
/// range too. Step two places one boundary inside each coarse interval at
/// the exact strict-thwart-density minimizer, recording the minima as
/// `alphas`. If JB_G(0,1) ≤ 2β/c the trivial partition {[0,1]} is returned.
pub fn partition_jb_march(
    s: &InformationStructure,
    g: &BregmanGenerator,
    beta: f64,
    c: f64,
) -> Result<IntervalPartition> {
    if !(beta > 0.0) {
        return Err(Error::DomainError(format!(
            "beta must be positive, got {beta}"
        )));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::DomainError(format!(
            "triangle constant c must lie in (0,1), got {c}"
        )));
    }
    let target = 2.0 * beta / c;
    if g.jb(0.0, 1.0) <= target {
        return Ok(IntervalPartition {
            boundaries: Vec::new(),
            windows: None,
            construction: PartitionConstruction::JbMarch,
            coarse: Some(vec![0.0, 1.0]),
            alphas: Some(Vec::new()),
        });
    }

    let mut coarse = vec![0.0];
    loop {
        let prev = *coarse.last().expect("coarse starts nonempty");
        let remainder = g.jb(prev, 1.0);
        if remainder <= target + MARCH_SLACK {
            if remainder >= beta - MARCH_SLACK {
                coarse.push(1.0);
            } else {
                let p = coarse[coarse.len() - 2];
                coarse.pop();
                coarse.push(bisect(|x| g.jb(p, x) - g.jb(x, 1.0), p, 1.0));
                coarse.push(1.0);
            }
            break;
        }
        coarse.push(bisect(|x| g.jb(prev, x) - target, prev, 1.0));
    }

    let pairs = belief_pairs(s);
    let points = belief_points(s);
    let mut boundaries = Vec::with_capacity(coarse.len() - 1);
    let mut windows = Vec::with_capacity(coarse.len() - 1);
    let mut alphas = Vec::with_capacity(coarse.len() - 1);
    for w in coarse.windows(2) {
        let candidates = density_candidates(&points, w[0], w[1], false);
        let (x, rho) = minimize_density(&pairs, &candidates, false);
        boundaries.push(x);
        windows.push((w[0], w[1]));
        alphas.push(rho);
    }
    Ok(IntervalPartition {
        boundaries,
        windows: Some(windows),
        construction: PartitionConstruction::JbMarch,
        coarse: Some(coarse),
        alphas: Some(alphas),
    })
}

// ---------------------------------------------------------------------------
// Agreement ⇒ accuracy audits
// ---------------------------------------------------------------------------

/// Which accuracy bound an audit compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `10·ε^{1/3} + δ` against quadratic accuracy.
    Quadratic,
    /// `(8/c²)β + 16·Ĝ*(…)` against Bregman accuracy.
    Bregman,
}

impl BoundKind {
    /// Stable string id.
    pub fn id(&self) -> &'static str {
        match self {
            BoundKind::Quadratic => "quadratic",
            BoundKind::Bregman => "bregman",
        }
    }
}

/// Outcome of one agreement⇒accuracy audit: a protocol run on a structure,
/// the measured final agreement and accuracies, and the bound evaluation.
#[derive(Debug, Clone)]
pub struct BoundReport {
    /// The structure's label, or empty.
    pub label: String,
    pub protocol: ProtocolKind,
    pub generator_name: String,
    /// The ε the protocol was asked to reach (0 for the standard protocol,
    /// which takes no parameter).
    pub epsilon_target: f64,
    /// Final agreement: ¼E[(a−b)²] under squared distance, E[JB] otherwise.
    pub epsilon_measured: f64,
    pub accuracy_alice: f64,
    pub accuracy_bob: f64,
    pub bound_kind: BoundKind,
    /// The bound evaluated at `epsilon_measured`.
    pub bound: f64,
    /// max(accuracies) ≤ bound + 1e-9.
    pub satisfied: bool,
    /// The bound exceeds the largest possible error, so it constrains
    /// nothing.
    pub vacuous: bool,
    /// The structure passed the rectangle substitutes check for this
    /// generator; the accuracy guarantee is only promised when it did.
    pub applicable: bool,
    pub bits: u64,
    pub t_end: usize,
    /// Measured lower bound on the substitutes slack δ (exact on grids
    /// small enough to enumerate partitions; 0 when the check holds). The
    /// quadratic bound includes it.
    pub delta_lower_bound: f64,
    /// β behind a Bregman bound (None for quadratic).
    pub beta: Option<f64>,
    /// Triangle constant behind a Bregman bound (None for quadratic).
    pub c: Option<f64>,
    /// Whether, for every stored round pair t < t′, round t′ kept quadratic
    /// agreement within 10·ε_t^{1/3}. Only evaluated for squared distance
    /// on applicable structures.
    pub continued_agreement_ok: Option<bool>,
}

impl BoundReport {
    /// Header row for [`BoundReport::csv_row`].
    pub fn csv_header() -> &'static str {
        "label,protocol,generator,epsilonTarget,epsilonMeasured,accuracyAlice,accuracyBob,\
         bound,satisfied,vacuous,bits,tEnd,deltaLowerBound"
    }

    /// One CSV row; floats keep 17 significant digits.
    pub fn csv_row(&self) -> String {
        let label = if self.label.contains(',') || self.label.contains('"') {
            format!("\"{}\"", self.label.replace('"', "\"\""))
        } else {
            self.label.clone()
        };
        format!(
            "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{},{},{:.16e}",
            label,
            self.protocol.id(),
            self.generator_name,
            self.epsilon_target,
            self.epsilon_measured,
            self.accuracy_alice,
            self.accuracy_bob,
            self.bound,
            self.satisfied,
            self.vacuous,
            self.bits,
            self.t_end,
            self.delta_lower_bound,
        )
    }

    /// Wire format mirroring the CSV columns plus the bound parameters.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "label": self.label,
            "protocol": self.protocol.id(),
            "generator": self.generator_name,
            "epsilonTarget": self.epsilon_target,
            "epsilonMeasured": self.epsilon_measured,
            "accuracyAlice": self.accuracy_alice,
            "accuracyBob": self.accuracy_bob,
            "boundKind": self.bound_kind.id(),
            "bound": self.bound,
            "satisfied": self.satisfied,
            "vacuous": self.vacuous,
            "applicable": self.applicable,
            "bits": self.bits,
            "tEnd": self.t_end,
            "deltaLowerBound": self.delta_lower_bound,
            "beta": self.beta,
            "c": self.c,
            "continuedAgreementOk": self.continued_agreement_ok,
        })
    }
}

/// Round budget that lets the exact-expectation protocol reach its fixpoint:
/// blocks can split at most rows·cols − 1 times and silent signals can be
/// dropped at most rows + cols times.
fn standard_horizon(s: &InformationStructure) -> usize {
    s.rows() * s.cols() + s.rows() + s.cols() + 4
}

/// True when every later stored round keeps quadratic agreement within
/// `10·ε^{1/3}` of each earlier round's level ε. Rounds beyond the stored
/// range repeat the stabilized partition, so the stored rounds cover all.
fn continued_agreement_holds(s: &InformationStructure, evolution: &Evolution) -> Result<bool> {
    let last = evolution.last_stored_round();
    let mut levels = Vec::with_capacity(last + 1);
    for t in 0..=last {
        levels.push(0.25 * quadratic_disagreement(s, evolution.partition(t))?);
    }
    for (t, &level) in levels.iter().enumerate() {
        let cap = bound_quadratic(level, 0.0) + BOUND_SLACK;
        if levels[t + 1..].iter().any(|&later| later > cap) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs `kind` on the structure, measures the final agreement and both
/// accuracy profiles, and evaluates the matching accuracy bound at the
/// measured agreement. Structures failing the rectangle substitutes check
/// are still audited, marked `applicable: false`, and get the measured
/// substitutes slack δ folded into the quadratic bound.
pub fn audit_agreement_accuracy(
    s: &InformationStructure,
    g: &BregmanGenerator,
    kind: ProtocolKind,
    epsilon: f64,
) -> Result<BoundReport> {
    let applicable = rectangle_check(s, g, CheckMode::Rectangle)?.holds;
    let transcript = match kind {
        ProtocolKind::Standard => protocol::run_standard(s, standard_horizon(s))?,
        ProtocolKind::DiscretizedQuadratic => protocol::run_discretized_quadratic(s, epsilon)?,
        ProtocolKind::DiscretizedBregman => protocol::run_discretized_bregman(s, g, epsilon)?,
        ProtocolKind::FastRounding => protocol::run_fast_rounding(s, epsilon)?,
    };
    let final_partition = transcript.final_partition();
    let agreement = agreement_profile(s, final_partition, g)?;
    let accuracy = accuracy_profile(s, final_partition, g)?;

    let quadratic = g.name() == "squared";
    let (epsilon_measured, accuracy_alice, accuracy_bob) = if quadratic {
        (agreement.quad, accuracy.alice_quad, accuracy.bob_quad)
    } else {
        (agreement.jb, accuracy.alice_bregman, accuracy.bob_bregman)
    };

    let delta_lower_bound = if applicable {
        0.0
    } else {
        let estimate = substitutes::delta_estimate(s, g, substitutes::DEFAULT_EXACT_LIMIT);
        estimate.exact.unwrap_or(estimate.lower_bound)
    };

    let (bound_kind, bound, beta, c, vacuous) = if quadratic {
        let b = bound_quadratic(epsilon_measured, delta_lower_bound);
        (BoundKind::Quadratic, b, None, None, b > 1.0)
    } else {
        let fragment = bound_bregman(g, DEFAULT_TRIANGLE_C, epsilon_measured, None)?;
        (
            BoundKind::Bregman,
            fragment.value,
            Some(fragment.beta),
            Some(fragment.c),
            fragment.vacuous,
        )
    };

    let continued_agreement_ok = if quadratic && applicable {
        Some(continued_agreement_holds(s, transcript.evolution())?)
    } else {
        None
    };

    Ok(BoundReport {
        label: s.label().unwrap_or("").to_string(),
        protocol: kind,
        generator_name: g.name().to_string(),
        epsilon_target: if kind == ProtocolKind::Standard { 0.0 } else { epsilon },
        epsilon_measured,
        accuracy_alice,
        accuracy_bob,
        bound_kind,
        bound,
        satisfied: accuracy_alice.max(accuracy_bob) <= bound + BOUND_SLACK,
        vacuous,
        applicable,
        bits: transcript.bits,
        t_end: transcript.t_end,
        delta_lower_bound,
        beta,
        c,
        continued_agreement_ok,
    })
}

// ---------------------------------------------------------------------------
// Boolean computation
// ---------------------------------------------------------------------------

/// Result of running the two-message protocol as a boolean computation.
#[derive(Debug, Clone, Copy)]
pub struct BooleanComputation {
    /// Probability mass of signal pairs whose output differs from the true
    /// bit.
    pub error_probability: f64,
    /// Communication cost of the two grid messages.
    pub bits: u64,
    /// Grid step √(δ/8) the underlying run used.
    pub epsilon: f64,
}

/// Runs the fast protocol with ε = √(δ/8) on a structure whose target
/// variable is a deterministic bit (every positive-mass conditional mean is
/// 0 or 1) and outputs Bob's message rounded to {0,1}, ties toward 1.
/// Returns the probability of a wrong output and the bit cost.
pub fn compute_boolean(s: &InformationStructure, delta: f64) -> Result<BooleanComputation> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::EpsilonOutOfRange {
            value: delta,
            requirement: "delta must lie in (0,1)",
        });
    }
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            let mean = s.mean(i, j);
            if s.prob(i, j) > 0.0 && mean != 0.0 && mean != 1.0 {
                return Err(Error::NotBoolean(format!(
                    "conditional mean at cell ({i},{j}) is {mean}, expected 0 or 1"
                )));
            }
        }
    }
    let epsilon = (delta / 8.0).sqrt();
    let transcript = protocol::run_fast_rounding(s, epsilon)?;

    // Bob's round-two message is his expectation within his block snapped
    // to the grid; his own announcement does not move his expectation (the
    // block's rows are already fixed), so it can be recomputed from the
    // final partition even when the stored evolution was truncated.
    let mut error_probability = 0.0;
    for block in transcript.final_partition().blocks() {
        for &j in block.cols() {
            if s.col_mass(j, block.rows()) <= 0.0 {
                continue;
            }
            let message = protocol::grid_round(s.col_mean(j, block.rows())?, epsilon);
            let output = if message >= 0.5 { 1.0 } else { 0.0 };
            for &i in block.rows() {
                if s.prob(i, j) > 0.0 && s.mean(i, j) != output {
                    error_probability += s.prob(i, j);
                }
            }
        }
    }
    Ok(BooleanComputation {
        error_probability,
        bits: transcript.bits,
        epsilon,
    })
}
