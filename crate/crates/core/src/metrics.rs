//! Agreement and accuracy measurement at a protocol state.
//!
//! At a partition state, each positive-mass cell (σ, τ) has three beliefs:
//! Alice's a = μ_σT, Bob's b = μ_Sτ, and transcript-only Charlie's c = μ_ST,
//! where S×T is the cell's block, plus the ground truth μ_στ from the mean
//! matrix. The profiles aggregate the standard disagreement and error
//! functionals of those beliefs; [`monovariant_decrease`] measures how much a
//! refinement improves Charlie, which is the quantity that makes discretized
//! protocols terminate.
//!
//! Infinite divergences (KL with an endpoint belief) poison the affected
//! fields to +∞ and the offending cells are listed in the profile for
//! diagnosis; quadratic fields and JB are always finite.

use crate::divergence::BregmanGenerator;
use crate::error::{Error, Result};
use crate::protocol::ProtocolPartition;
use crate::structure::InformationStructure;

/// How far apart the parties (and Charlie) are at a state.
#[derive(Debug, Clone)]
pub struct AgreementProfile {
    /// ¼E[(a−b)²] — the quadratic agreement measure.
    pub quad: f64,
    /// E[JB_G(a,b)].
    pub jb: f64,
    /// ½E[D_G(a‖c) + D_G(b‖c)] — agreement with Charlie.
    pub with_charlie: f64,
    /// ½E[D_G(a‖b) + D_G(b‖a)] — symmetrized divergence between the parties.
    pub symmetrized: f64,
    /// Cells whose contribution to any field was infinite.
    pub infinite_cells: Vec<(usize, usize)>,
}

/// How far each belief is from the ground truth μ_στ at a state.
#[derive(Debug, Clone)]
pub struct AccuracyProfile {
    /// E[(μ_στ − a)²].
    pub alice_quad: f64,
    /// E[(μ_στ − b)²].
    pub bob_quad: f64,
    /// E[D_G(μ_στ ‖ a)].
    pub alice_bregman: f64,
    /// E[D_G(μ_στ ‖ b)].
    pub bob_bregman: f64,
    /// E[D_G(μ_στ ‖ (a+b)/2)] — accuracy of the midpoint consensus belief.
    pub midpoint: f64,
    /// Cells whose contribution to any field was infinite.
    pub infinite_cells: Vec<(usize, usize)>,
}

fn check_partition(s: &InformationStructure, partition: &ProtocolPartition) -> Result<()> {
    for block in partition.blocks() {
        let row_ok = block.rows().iter().all(|&i| i < s.rows());
        let col_ok = block.cols().iter().all(|&j| j < s.cols());
        if !row_ok || !col_ok {
            return Err(Error::DimensionMismatch(format!(
                "partition block exceeds the {}×{} grid",
                s.rows(),
                s.cols()
            )));
        }
    }
    Ok(())
}

/// Per-block beliefs: (block mean, per-row Alice means, per-column Bob
/// means), skipping zero-mass rows/columns.
#[allow(clippy::type_complexity)]
fn block_beliefs(
    s: &InformationStructure,
    block: &crate::structure::Rectangle,
) -> Result<(f64, Vec<(usize, f64)>, Vec<(usize, f64)>)> {
    let c = s.block_mean(block)?;
    let mut rows = Vec::with_capacity(block.rows().len());
    for &i in block.rows() {
        if s.row_mass(i, block.cols()) > 0.0 {
            rows.push((i, s.row_mean(i, block.cols())?));
        }
    }
    let mut cols = Vec::with_capacity(block.cols().len());
    for &j in block.cols() {
        if s.col_mass(j, block.rows()) > 0.0 {
            cols.push((j, s.col_mean(j, block.rows())?));
        }
    }
    Ok((c, rows, cols))
}

/// Computes the agreement profile of a state, with expectations over all
/// positive-mass cells.
pub fn agreement_profile(
    s: &InformationStructure,
    partition: &ProtocolPartition,
    g: &BregmanGenerator,
) -> Result<AgreementProfile> {
    check_partition(s, partition)?;
    let mut raw_quad = 0.0;
    let mut jb = 0.0;
    let mut with_charlie = 0.0;
    let mut symmetrized = 0.0;
    let mut infinite_cells = Vec::new();
    for block in partition.blocks() {
        let (c, rows, cols) = block_beliefs(s, block)?;
        for &(i, a) in &rows {
            for &(j, b) in &cols {
                let p = s.prob(i, j);
                if p <= 0.0 {
                    continue;
                }
                raw_quad += p * (a - b) * (a - b);
                jb += p * g.jb(a, b);
                let wc = 0.5 * (g.div(a, c) + g.div(b, c));
                let sym = 0.5 * (g.div(a, b) + g.div(b, a));
                if !wc.is_finite() || !sym.is_finite() {
                    infinite_cells.push((i, j));
                }
                with_charlie += p * wc;
                symmetrized += p * sym;
            }
        }
    }
    Ok(AgreementProfile {
        quad: 0.25 * raw_quad,
        jb,
        with_charlie,
        symmetrized,
        infinite_cells,
    })
}

/// Computes the accuracy profile of a state against the ground-truth mean
/// matrix.
pub fn accuracy_profile(
    s: &InformationStructure,
    partition: &ProtocolPartition,
    g: &BregmanGenerator,
) -> Result<AccuracyProfile> {
    check_partition(s, partition)?;
    let mut alice_quad = 0.0;
    let mut bob_quad = 0.0;
    let mut alice_bregman = 0.0;
    let mut bob_bregman = 0.0;
    let mut midpoint = 0.0;
    let mut infinite_cells = Vec::new();
    for block in partition.blocks() {
        let (_, rows, cols) = block_beliefs(s, block)?;
        for &(i, a) in &rows {
            for &(j, b) in &cols {
                let p = s.prob(i, j);
                if p <= 0.0 {
                    continue;
                }
                let y = s.mean(i, j);
                alice_quad += p * (y - a) * (y - a);
                bob_quad += p * (y - b) * (y - b);
                let da = g.div(y, a);
                let db = g.div(y, b);
                let dm = g.div(y, 0.5 * (a + b));
                if !da.is_finite() || !db.is_finite() || !dm.is_finite() {
                    infinite_cells.push((i, j));
                }
                alice_bregman += p * da;
                bob_bregman += p * db;
                midpoint += p * dm;
            }
        }
    }
    Ok(AccuracyProfile {
        alice_quad,
        bob_quad,
        alice_bregman,
        bob_bregman,
        midpoint,
        infinite_cells,
    })
}

/// The decrease of Charlie's expected error across a refinement:
/// E[D_G(μ_toBlock ‖ μ_fromBlock)] ≥ 0. This equals the drop of
/// E[D_G(μ_στ ‖ c)] between the two states (conditional-expectation
/// Pythagorean identity) but needs only block means to evaluate.
pub fn monovariant_decrease(
    s: &InformationStructure,
    g: &BregmanGenerator,
    from: &ProtocolPartition,
    to: &ProtocolPartition,
) -> Result<f64> {
    check_partition(s, from)?;
    check_partition(s, to)?;
    let mut total = 0.0;
    for to_block in to.blocks() {
        let parent = from
            .blocks()
            .iter()
            .find(|fb| fb.contains(to_block))
            .ok_or_else(|| {
                Error::NotARefinement(format!(
                    "no coarse block contains rows {:?} × cols {:?}",
                    to_block.rows(),
                    to_block.cols()
                ))
            })?;
        let mass = s.mass(to_block)?;
        if mass <= 0.0 {
            continue;
        }
        let fine_mean = s.block_mean(to_block)?;
        let coarse_mean = s.block_mean(parent)?;
        total += mass * g.div(fine_mean, coarse_mean);
    }
    Ok(total)
}

/// Charlie's expected error at a state, reported as the excess over the
/// state-independent constant E[G(μ_στ)]:
///
/// ```text
/// E[D_G(μ_στ ‖ c)] − E[G(μ_στ)] = E[−G(c) − (μ_στ − c)·G′(c)]
/// ```
///
/// Differences of this quantity between states are exact error drops. Cells
/// with μ_στ = c contribute −G(c) directly, which keeps endpoint blocks
/// (where G′ may be ±∞ but every member mean equals c) finite.
pub fn charlie_excess(
    s: &InformationStructure,
    g: &BregmanGenerator,
    partition: &ProtocolPartition,
) -> Result<f64> {
    check_partition(s, partition)?;
    let mut total = 0.0;
    for block in partition.blocks() {
        let c = s.block_mean(block)?;
        for &i in block.rows() {
            for &j in block.cols() {
                let p = s.prob(i, j);
                if p <= 0.0 {
                    continue;
                }
                let y = s.mean(i, j);
                let term = if y == c {
                    -g.g(c)
                } else {
                    -g.g(c) - (y - c) * g.dg(c)
                };
                total += p * term;
            }
        }
    }
    Ok(total)
}
