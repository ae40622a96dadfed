//! Deterministic protocol execution as partition refinement.
//!
//! A transcript prefix corresponds to a combinatorial rectangle S×T of signal
//! pairs that would have produced it, so running a protocol jointly over all
//! signal pairs means refining a partition of the signal grid into rectangles:
//! on odd rounds Alice's message splits each block's row set, on even rounds
//! Bob's splits the column set. Everything here is exact expectation
//! arithmetic over the joint distribution — no sampling.
//!
//! Protocols:
//! - **standard**: the speaker announces their exact conditional expectation;
//!   rows/columns split by bit-level equality of that value.
//! - **disc-quad**: three-message discretization — low/high when the
//!   speaker's expectation is more than ε/4 below/above the block mean,
//!   medium otherwise (ties medium).
//! - **disc-bregman**: medium when D_G(speaker ‖ block) < ε/2, else low/high
//!   by the sign of speaker − block; the +∞ divergence sentinel forces
//!   low/high and the round is logged.
//! - **fast**: two messages; each party sends its expectation rounded to the
//!   nearest multiple of ε (half-up).
//!
//! The discretized protocols end at the round (within a protocol-specific
//! horizon) minimizing the unconditional disagreement E[(μ_σT − μ_Sτ)²]
//! (quadratic) or E[D_G(μ_σT ‖ μ_Sτ)] (Bregman); ties go to the smallest
//! round, and both parties can compute the horizon and the minimizer from
//! the public structure alone.

use serde_json::json;

use crate::divergence::BregmanGenerator;
use crate::error::{Error, Result};
use crate::metrics::{agreement_profile, monovariant_decrease};
use crate::structure::{InformationStructure, Rectangle};

/// Early-stop threshold for the standard protocol: once the unconditional
/// E[(a−b)²] falls this low, the parties are treated as exactly agreeing
/// (the gap at a true fixpoint is pure float noise, around 1e-32).
pub const STANDARD_STOP: f64 = 1e-24;

/// Whose turn it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Speaker {
    Alice,
    Bob,
}

impl Speaker {
    /// Speaker of 1-based round t: Alice on odd rounds.
    pub fn for_round(t: usize) -> Speaker {
        if t % 2 == 1 {
            Speaker::Alice
        } else {
            Speaker::Bob
        }
    }

    fn other(self) -> Speaker {
        match self {
            Speaker::Alice => Speaker::Bob,
            Speaker::Bob => Speaker::Alice,
        }
    }
}

/// One protocol message. Discretized protocols use the three-letter
/// alphabet; the standard and fast protocols send numeric values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Message {
    Low,
    Medium,
    High,
    Value(f64),
}

/// The rectangle partition induced by all length-t transcript prefixes.
///
/// Blocks are pairwise disjoint and cover every positive-mass cell;
/// zero-mass rows or columns of a block are dropped when its owner next
/// speaks (their conditional expectation is undefined and they carry no
/// probability).
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolPartition {
    blocks: Vec<Rectangle>,
    round: usize,
    speaker_next: Speaker,
    /// Per block: index of the round-(t−1) block it came from and the
    /// message that selected it. Empty at round 0.
    messages: Vec<(usize, Message)>,
}

impl ProtocolPartition {
    /// The round-0 partition: one block holding every positive-mass row and
    /// column.
    pub fn root(s: &InformationStructure) -> Result<ProtocolPartition> {
        let all_cols: Vec<usize> = (0..s.cols()).collect();
        let all_rows: Vec<usize> = (0..s.rows()).collect();
        let rows: Vec<usize> = (0..s.rows())
            .filter(|&i| s.row_mass(i, &all_cols) > 0.0)
            .collect();
        let cols: Vec<usize> = (0..s.cols())
            .filter(|&j| s.col_mass(j, &all_rows) > 0.0)
            .collect();
        Ok(ProtocolPartition {
            blocks: vec![Rectangle::new(rows, cols)?],
            round: 0,
            speaker_next: Speaker::Alice,
            messages: Vec::new(),
        })
    }

    /// A partition with every positive-mass cell in its own block (the
    /// finest refinement any protocol can reach).
    pub fn singletons(s: &InformationStructure) -> Result<ProtocolPartition> {
        let mut blocks = Vec::new();
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if s.prob(i, j) > 0.0 {
                    blocks.push(Rectangle::new([i], [j])?);
                }
            }
        }
        Ok(ProtocolPartition {
            blocks,
            round: 0,
            speaker_next: Speaker::Alice,
            messages: Vec::new(),
        })
    }

    /// The blocks, one per realized transcript prefix.
    pub fn blocks(&self) -> &[Rectangle] {
        &self.blocks
    }

    /// Completed rounds.
    pub fn round(&self) -> usize {
        self.round
    }

    /// Speaker of the next round.
    pub fn speaker_next(&self) -> Speaker {
        self.speaker_next
    }

    /// (parent block index, selecting message) per block; empty at round 0.
    pub fn messages(&self) -> &[(usize, Message)] {
        &self.messages
    }

    /// Index of the block containing cell (i, j), if any covers it.
    pub fn block_of(&self, i: usize, j: usize) -> Option<usize> {
        self.blocks.iter().position(|b| {
            b.rows().binary_search(&i).is_ok() && b.cols().binary_search(&j).is_ok()
        })
    }
}

/// Protocol identifiers shared by the library and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    Standard,
    DiscretizedQuadratic,
    DiscretizedBregman,
    FastRounding,
}

impl ProtocolKind {
    /// Stable string id: `standard`, `disc-quad`, `disc-bregman`, `fast`.
    pub fn id(&self) -> &'static str {
        match self {
            ProtocolKind::Standard => "standard",
            ProtocolKind::DiscretizedQuadratic => "disc-quad",
            ProtocolKind::DiscretizedBregman => "disc-bregman",
            ProtocolKind::FastRounding => "fast",
        }
    }
}

/// Parses a protocol id as used on the command line.
pub fn parse_protocol(name: &str) -> Result<ProtocolKind> {
    match name {
        "standard" => Ok(ProtocolKind::Standard),
        "disc-quad" => Ok(ProtocolKind::DiscretizedQuadratic),
        "disc-bregman" => Ok(ProtocolKind::DiscretizedBregman),
        "fast" => Ok(ProtocolKind::FastRounding),
        other => Err(Error::DomainError(format!(
            "unknown protocol {other:?}; expected standard, disc-quad, disc-bregman, or fast"
        ))),
    }
}

/// The full partition evolution of one run.
///
/// Partitions are stored up to the round where they stabilize; two
/// consecutive rounds without a split mean no later round can split either
/// (the split of a block depends only on the partition, which did not
/// change), so [`Evolution::partition`] clamps queries past the stored range
/// to the stabilized partition.
#[derive(Debug, Clone)]
pub struct Evolution {
    partitions: Vec<ProtocolPartition>,
    horizon: usize,
    infinite_divergence_rounds: Vec<usize>,
}

impl Evolution {
    /// Partition after round t (clamped to the stabilized partition).
    pub fn partition(&self, t: usize) -> &ProtocolPartition {
        &self.partitions[t.min(self.partitions.len() - 1)]
    }

    /// Largest round with a distinct stored partition.
    pub fn last_stored_round(&self) -> usize {
        self.partitions.len() - 1
    }

    /// The simulation horizon this evolution was run to.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Rounds where an infinite divergence forced a low/high message
    /// (Bregman discretization with endpoint expectations only).
    pub fn infinite_divergence_rounds(&self) -> &[usize] {
        &self.infinite_divergence_rounds
    }
}

/// Split rules, one per protocol.
#[derive(Clone, Copy)]
pub(crate) enum SplitRule<'a> {
    /// Group by bit-exact equality of the speaker's expectation.
    Exact,
    /// low / medium / high around the block mean with ε/4 thresholds.
    ThresholdQuad { epsilon: f64 },
    /// medium when D_G(speaker ‖ block) < ε/2, else low/high by sign.
    ThresholdBregman {
        epsilon: f64,
        g: &'a BregmanGenerator,
    },
    /// Group by the expectation rounded to the nearest multiple of ε.
    RoundToGrid { epsilon: f64 },
}

impl SplitRule<'_> {
    /// Classifies a speaker expectation `v` within a block of mean `c` into
    /// a grouping key and the message it corresponds to. `infinite` is set
    /// when the divergence sentinel decided the message.
    pub(crate) fn classify(&self, v: f64, c: f64, infinite: &mut bool) -> (u64, Message) {
        match *self {
            SplitRule::Exact => (v.to_bits(), Message::Value(v)),
            SplitRule::ThresholdQuad { epsilon } => {
                if v < c - epsilon / 4.0 {
                    (0, Message::Low)
                } else if v > c + epsilon / 4.0 {
                    (2, Message::High)
                } else {
                    (1, Message::Medium)
                }
            }
            SplitRule::ThresholdBregman { epsilon, g } => {
                let d = g.div(v, c);
                if d < epsilon / 2.0 {
                    (1, Message::Medium)
                } else {
                    if d.is_infinite() {
                        *infinite = true;
                    }
                    if v < c {
                        (0, Message::Low)
                    } else {
                        (2, Message::High)
                    }
                }
            }
            SplitRule::RoundToGrid { epsilon } => {
                let r = grid_round(v, epsilon);
                (r.to_bits(), Message::Value(r))
            }
        }
    }
}

/// Rounds an expectation to the nearest multiple of `epsilon`, half up —
/// the fast protocol's message grid.
pub(crate) fn grid_round(v: f64, epsilon: f64) -> f64 {
    (v / epsilon + 0.5).floor() * epsilon
}

/// One refinement round. Returns the new partition and whether anything
/// changed (a block split or a silent row/column was dropped).
fn step(
    s: &InformationStructure,
    prev: &ProtocolPartition,
    rule: SplitRule<'_>,
) -> Result<(ProtocolPartition, bool, bool)> {
    let speaker = prev.speaker_next;
    let mut blocks = Vec::with_capacity(prev.blocks.len());
    let mut messages = Vec::with_capacity(prev.blocks.len());
    let mut changed = false;
    let mut infinite = false;

    for (parent, block) in prev.blocks.iter().enumerate() {
        let c = s.block_mean(block)?;
        // (key, message, member signals) in first-occurrence order.
        let mut groups: Vec<(u64, Message, Vec<usize>)> = Vec::new();
        let own: &[usize] = match speaker {
            Speaker::Alice => block.rows(),
            Speaker::Bob => block.cols(),
        };
        for &k in own {
            let mass = match speaker {
                Speaker::Alice => s.row_mass(k, block.cols()),
                Speaker::Bob => s.col_mass(k, block.rows()),
            };
            if mass <= 0.0 {
                changed = true; // silent signal dropped from the block
                continue;
            }
            let v = match speaker {
                Speaker::Alice => s.row_mean(k, block.cols())?,
                Speaker::Bob => s.col_mean(k, block.rows())?,
            };
            let (key, msg) = rule.classify(v, c, &mut infinite);
            match groups.iter_mut().find(|(gk, _, _)| *gk == key) {
                Some((_, _, members)) => members.push(k),
                None => groups.push((key, msg, vec![k])),
            }
        }
        if groups.len() != 1 {
            changed = true;
        }
        for (_, msg, members) in groups {
            let rect = match speaker {
                Speaker::Alice => Rectangle::new(members, block.cols().to_vec())?,
                Speaker::Bob => Rectangle::new(block.rows().to_vec(), members)?,
            };
            blocks.push(rect);
            messages.push((parent, msg));
        }
    }

    Ok((
        ProtocolPartition {
            blocks,
            round: prev.round + 1,
            speaker_next: speaker.other(),
            messages,
        },
        changed,
        infinite,
    ))
}

/// Runs the refinement to `horizon` rounds, stopping early once two
/// consecutive rounds pass without any change (the partition is then a
/// fixpoint and all later rounds coincide with it).
pub(crate) fn evolve(
    s: &InformationStructure,
    rule: SplitRule<'_>,
    horizon: usize,
) -> Result<Evolution> {
    let mut partitions = vec![ProtocolPartition::root(s)?];
    let mut infinite_rounds = Vec::new();
    let mut quiet_streak = 0usize;
    for t in 1..=horizon {
        let (next, changed, infinite) = step(s, &partitions[t - 1], rule)?;
        if infinite {
            infinite_rounds.push(t);
        }
        partitions.push(next);
        if changed {
            quiet_streak = 0;
        } else {
            quiet_streak += 1;
            if quiet_streak == 2 {
                partitions.truncate(t - 1); // keep rounds 0..=t−2
                break;
            }
        }
    }
    Ok(Evolution {
        partitions,
        horizon,
        infinite_divergence_rounds: infinite_rounds,
    })
}

/// Unconditional E[(μ_σT − μ_Sτ)²] at a partition (no ¼ normalization).
pub fn quadratic_disagreement(
    s: &InformationStructure,
    partition: &ProtocolPartition,
) -> Result<f64> {
    let mut total = 0.0;
    for block in partition.blocks() {
        for &i in block.rows() {
            if s.row_mass(i, block.cols()) <= 0.0 {
                continue;
            }
            let a = s.row_mean(i, block.cols())?;
            for &j in block.cols() {
                let p = s.prob(i, j);
                if p <= 0.0 {
                    continue;
                }
                let b = s.col_mean(j, block.rows())?;
                total += p * (a - b) * (a - b);
            }
        }
    }
    Ok(total)
}

/// Unconditional E[D_G(μ_σT ‖ μ_Sτ)] at a partition; may be +∞ when a
/// Bob-side expectation sits on an endpoint singularity of G′.
pub fn bregman_disagreement(
    s: &InformationStructure,
    g: &BregmanGenerator,
    partition: &ProtocolPartition,
) -> Result<f64> {
    let mut total = 0.0;
    for block in partition.blocks() {
        for &i in block.rows() {
            if s.row_mass(i, block.cols()) <= 0.0 {
                continue;
            }
            let a = s.row_mean(i, block.cols())?;
            for &j in block.cols() {
                let p = s.prob(i, j);
                if p <= 0.0 {
                    continue;
                }
                let b = s.col_mean(j, block.rows())?;
                total += p * g.div(a, b);
            }
        }
    }
    Ok(total)
}

/// Per-round trace entry of a [`Transcript`].
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// Round index (0 is the prior state before any message).
    pub round: usize,
    /// ¼E[(a−b)²] at this round's partition.
    pub agreement_quad: f64,
    /// E[JB_G(a,b)] at this round's partition.
    pub agreement_jb: f64,
    /// E[D_G(μ_thisBlock ‖ μ_previousBlock)] — Charlie's error decrease over
    /// the round; 0 for round 0.
    pub monovariant_drop: f64,
}

/// A completed protocol run: per-round metrics, the termination round, the
/// bit count, and the underlying partition evolution.
#[derive(Debug, Clone)]
pub struct Transcript {
    pub protocol: ProtocolKind,
    /// The protocol's ε; `None` for the standard protocol.
    pub epsilon: Option<f64>,
    /// Generator used for the JB and monovariant columns ("squared" for the
    /// quadratic protocols).
    pub generator_name: String,
    /// State before any message.
    pub round0: RoundRecord,
    /// Records for rounds 1..=tEnd.
    pub rounds: Vec<RoundRecord>,
    pub t_end: usize,
    pub bits: u64,
    /// Message alphabet size: 3 for the discretized protocols,
    /// floor(1/ε)+1 grid values for fast rounding, `None` (continuous) for
    /// the standard protocol.
    pub message_alphabet: Option<usize>,
    /// Standard protocol only: stopped before `maxRounds` at (numerically)
    /// zero disagreement.
    pub early_stopped: bool,
    evolution: Evolution,
}

impl Transcript {
    /// The partition evolution behind this transcript.
    pub fn evolution(&self) -> &Evolution {
        &self.evolution
    }

    /// Partition at the termination round.
    pub fn final_partition(&self) -> &ProtocolPartition {
        self.evolution.partition(self.t_end)
    }

    /// Round records including round 0, in order.
    pub fn trace(&self) -> impl Iterator<Item = &RoundRecord> {
        std::iter::once(&self.round0).chain(self.rounds.iter())
    }

    /// The transcript wire format:
    /// `{"protocol", "epsilon", "generator", "tEnd", "bits", "trace": [..]}`
    /// with one trace entry per round 0..=tEnd.
    pub fn to_json_value(&self) -> serde_json::Value {
        let trace: Vec<serde_json::Value> = self
            .trace()
            .map(|r| {
                json!({
                    "round": r.round,
                    "agreementQuad": r.agreement_quad,
                    "agreementJB": r.agreement_jb,
                    "monovariantDrop": r.monovariant_drop,
                })
            })
            .collect();
        json!({
            "protocol": self.protocol.id(),
            "epsilon": self.epsilon,
            "generator": self.generator_name,
            "tEnd": self.t_end,
            "bits": self.bits,
            "trace": trace,
        })
    }

    /// Trace as CSV with the same columns as the JSON trace, one row per
    /// round.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("round,agreementQuad,agreementJB,monovariantDrop\n");
        for r in self.trace() {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e}\n",
                r.round, r.agreement_quad, r.agreement_jb, r.monovariant_drop
            ));
        }
        out
    }
}

/// Builds trace records (round 0 through `t_end`) for a finished evolution,
/// reusing the stabilized record once the partition stops changing.
#[allow(clippy::too_many_arguments)]
fn build_transcript(
    s: &InformationStructure,
    evolution: Evolution,
    protocol: ProtocolKind,
    epsilon: Option<f64>,
    g: &BregmanGenerator,
    t_end: usize,
    bits: u64,
    message_alphabet: Option<usize>,
    early_stopped: bool,
) -> Result<Transcript> {
    let profile0 = agreement_profile(s, evolution.partition(0), g)?;
    let round0 = RoundRecord {
        round: 0,
        agreement_quad: profile0.quad,
        agreement_jb: profile0.jb,
        monovariant_drop: 0.0,
    };
    let stable = evolution.last_stored_round();
    let mut rounds = Vec::with_capacity(t_end);
    for t in 1..=t_end {
        if t > stable + 1 {
            // Both endpoints clamp to the stabilized partition: metrics are
            // those of the previous record and the drop is zero.
            let mut r = rounds.last().cloned().unwrap_or_else(|| round0.clone());
            r.round = t;
            r.monovariant_drop = 0.0;
            rounds.push(r);
            continue;
        }
        let profile = agreement_profile(s, evolution.partition(t), g)?;
        let drop = monovariant_decrease(s, g, evolution.partition(t - 1), evolution.partition(t))?;
        rounds.push(RoundRecord {
            round: t,
            agreement_quad: profile.quad,
            agreement_jb: profile.jb,
            monovariant_drop: drop,
        });
    }
    Ok(Transcript {
        protocol,
        epsilon,
        generator_name: g.name().to_string(),
        round0,
        rounds,
        t_end,
        bits,
        message_alphabet,
        early_stopped,
        evolution,
    })
}

/// Smallest round index minimizing `value` over rounds 0..=last stored
/// (later rounds repeat the stabilized value, so they never win ties).
fn argmin_round(
    s: &InformationStructure,
    evolution: &Evolution,
    value: impl Fn(&InformationStructure, &ProtocolPartition) -> Result<f64>,
) -> Result<usize> {
    let mut best_t = 0;
    let mut best = value(s, evolution.partition(0))?;
    for t in 1..=evolution.last_stored_round() {
        let v = value(s, evolution.partition(t))?;
        if v < best {
            best = v;
            best_t = t;
        }
    }
    Ok(best_t)
}

/// Runs the exact-expectation protocol for at most `max_rounds` rounds,
/// stopping early when the parties (numerically) agree everywhere. Bit
/// accounting: 64 bits per round (one f64 expectation per message).
pub fn run_standard(s: &InformationStructure, max_rounds: usize) -> Result<Transcript> {
    if max_rounds < 1 {
        return Err(Error::DomainError("maxRounds must be at least 1".into()));
    }
    let evolution = evolve(s, SplitRule::Exact, max_rounds)?;
    let mut t_end = max_rounds;
    let mut early_stopped = false;
    for t in 0..=evolution.last_stored_round().min(max_rounds) {
        if quadratic_disagreement(s, evolution.partition(t))? <= STANDARD_STOP {
            t_end = t;
            early_stopped = true;
            break;
        }
    }
    let g = BregmanGenerator::squared();
    build_transcript(
        s,
        evolution,
        ProtocolKind::Standard,
        None,
        &g,
        t_end,
        64 * t_end as u64,
        None,
        early_stopped,
    )
}

/// Runs the three-message quadratic discretization with threshold ε/4 and
/// horizon ceil(1000/ε); requires 0 < ε < 1.
pub fn run_discretized_quadratic(s: &InformationStructure, epsilon: f64) -> Result<Transcript> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon,
            requirement: "0 < epsilon < 1",
        });
    }
    let horizon = (1000.0 / epsilon).ceil() as usize;
    let evolution = evolve(s, SplitRule::ThresholdQuad { epsilon }, horizon)?;
    let t_end = argmin_round(s, &evolution, quadratic_disagreement)?;
    let g = BregmanGenerator::squared();
    build_transcript(
        s,
        evolution,
        ProtocolKind::DiscretizedQuadratic,
        Some(epsilon),
        &g,
        t_end,
        trit_bits(t_end),
        Some(3),
        false,
    )
}

/// Runs the three-message Bregman discretization with threshold ε/2 on
/// D_G(speaker ‖ block) and horizon ceil(24M(4M+ε)/ε²); requires ε > 0.
pub fn run_discretized_bregman(
    s: &InformationStructure,
    g: &BregmanGenerator,
    epsilon: f64,
) -> Result<Transcript> {
    if !(epsilon > 0.0) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon,
            requirement: "epsilon > 0",
        });
    }
    let m = g.range_m();
    let horizon = (24.0 * m * (4.0 * m + epsilon) / (epsilon * epsilon)).ceil() as usize;
    let evolution = evolve(s, SplitRule::ThresholdBregman { epsilon, g }, horizon)?;
    let t_end = argmin_round(s, &evolution, |s, p| bregman_disagreement(s, g, p))?;
    build_transcript(
        s,
        evolution,
        ProtocolKind::DiscretizedBregman,
        Some(epsilon),
        g,
        t_end,
        trit_bits(t_end),
        Some(3),
        false,
    )
}

/// Runs the two-message rounding protocol: each party sends its expectation
/// rounded to the nearest multiple of ε (half-up). Requires 0 < ε ≤ ½.
pub fn run_fast_rounding(s: &InformationStructure, epsilon: f64) -> Result<Transcript> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon,
            requirement: "0 < epsilon <= 0.5",
        });
    }
    let evolution = evolve(s, SplitRule::RoundToGrid { epsilon }, 2)?;
    // Alphabet: multiples of ε from 0 to 1, i.e. floor(1/ε)+1 grid values
    // (the nudge keeps e.g. 1/0.1 from flooring to 9).
    let levels = (1.0 / epsilon + 1e-9).floor() as usize + 1;
    let bits = 2 * (levels as f64).log2().ceil() as u64;
    let g = BregmanGenerator::squared();
    build_transcript(
        s,
        evolution,
        ProtocolKind::FastRounding,
        Some(epsilon),
        &g,
        2,
        bits,
        Some(levels),
        false,
    )
}

/// ceil(t · log2 3) — trit messages measured in bits.
fn trit_bits(t_end: usize) -> u64 {
    (t_end as f64 * 3f64.log2()).ceil() as u64
}

/// The termination round of a discretized protocol: the disagreement
/// minimizer both parties compute from the public structure. Defined for
/// `disc-quad` (g ignored) and `disc-bregman` (g required).
pub fn compute_t_end(
    s: &InformationStructure,
    kind: ProtocolKind,
    g: Option<&BregmanGenerator>,
    epsilon: f64,
) -> Result<usize> {
    match kind {
        ProtocolKind::DiscretizedQuadratic => Ok(run_discretized_quadratic(s, epsilon)?.t_end),
        ProtocolKind::DiscretizedBregman => {
            let g = g.ok_or_else(|| {
                Error::DomainError("disc-bregman tEnd needs a generator".into())
            })?;
            Ok(run_discretized_bregman(s, g, epsilon)?.t_end)
        }
        other => Err(Error::DomainError(format!(
            "tEnd minimization is defined for the discretized protocols, not {}",
            other.id()
        ))),
    }
}
