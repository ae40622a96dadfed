//! Rectangle-substitutes checking and the violation magnitude δ.
//!
//! A structure satisfies rectangle substitutes for a generator G when, for
//! every positive-mass rectangle S×T,
//!
//! ```text
//! E[D_G(μ_στ ‖ μ_Sτ) | S,T]  ≤  E[D_G(μ_σT ‖ μ_ST) | S,T]
//! ```
//!
//! — informally: within any rectangle event, Bob's signal is worth no more
//! on top of Alice's than Alice's is worth on top of nothing. The *weak*
//! check tests only the full grid; the *rectangle* check enumerates all
//! (2^m−1)(2^n−1) sub-rectangles. [`delta_estimate`] measures how badly the
//! condition fails: a lower bound from the worst single rectangle (completed
//! with singletons, which contribute nothing) and, for tiny grids, the exact
//! maximum over all partitions of the grid into rectangles.
//!
//! By the conditional-expectation Pythagorean identity the violation of S×T
//! can be rewritten symmetrically as
//! E[D_G(μ_στ‖μ_ST)] − E[D_G(μ_Sτ‖μ_ST)] − E[D_G(μ_σT‖μ_ST)] (all
//! conditioned on S×T), so transposing the structure leaves every violation
//! — and the verdict — unchanged.

use rayon::prelude::*;
use serde_json::json;

use crate::divergence::BregmanGenerator;
use crate::error::{Error, Result};
use crate::structure::{InformationStructure, Rectangle};

/// Violations at or below this threshold count as float noise, not failures.
pub const VIOLATION_TOLERANCE: f64 = 1e-10;

/// Default per-side cap for full rectangle enumeration (2^12 subsets).
pub const ENUMERATION_GUARD: usize = 12;

/// Default cell-count ceiling for exact δ partition enumeration.
pub const DEFAULT_EXACT_LIMIT: usize = 9;

/// Which rectangles a check covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// The full grid only.
    Weak,
    /// Every positive-mass sub-rectangle.
    Rectangle,
}

impl CheckMode {
    /// Stable string id.
    pub fn id(&self) -> &'static str {
        match self {
            CheckMode::Weak => "weak",
            CheckMode::Rectangle => "rectangle",
        }
    }
}

/// Outcome of a substitutes check.
#[derive(Debug, Clone)]
pub struct SubstitutesReport {
    /// worstViolation ≤ [`VIOLATION_TOLERANCE`].
    pub holds: bool,
    /// The rectangle attaining the worst violation.
    pub worst_rect: Option<Rectangle>,
    /// max over checked rectangles of LHS − RHS (may be negative).
    pub worst_violation: f64,
    /// Positive-mass rectangles evaluated.
    pub rectangles_checked: u64,
    pub mode: CheckMode,
    /// LHS E[D_G(μ_στ ‖ μ_Sτ)] at the full grid.
    pub full_rect_lhs: f64,
    /// RHS E[D_G(μ_σT ‖ μ_ST)] at the full grid.
    pub full_rect_rhs: f64,
}

impl SubstitutesReport {
    /// JSON form used by the CLI `check` subcommand.
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "mode": self.mode.id(),
            "holds": self.holds,
            "worstViolation": self.worst_violation,
            "worstRect": self.worst_rect.as_ref().map(|r| json!({
                "rows": r.rows(),
                "cols": r.cols(),
            })),
            "rectanglesChecked": self.rectangles_checked,
            "fullRectLhs": self.full_rect_lhs,
            "fullRectRhs": self.full_rect_rhs,
        })
    }
}

/// δ bounds for approximate rectangle substitutes.
#[derive(Debug, Clone)]
pub struct DeltaEstimate {
    /// max(0, max over rectangles of mass·violation) — always valid: a
    /// single bad rectangle completed with singletons is a partition.
    pub lower_bound: f64,
    /// max(0, max over all rectangle partitions of the mass-weighted
    /// violation sum); only for grids with at most `exactLimit` cells.
    pub exact: Option<f64>,
    /// Partitions visited by the exact enumeration (0 when skipped).
    pub partitions_enumerated: u64,
}

impl DeltaEstimate {
    /// JSON form used by the CLI `check` subcommand in delta mode.
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "lowerBound": self.lower_bound,
            "exact": self.exact,
            "partitionsEnumerated": self.partitions_enumerated,
        })
    }
}

/// LHS, RHS, and mass of the substitutes inequality on one rectangle, or
/// `None` for zero-mass rectangles. Both sides are finite for every
/// generator: an endpoint conditional mean forces all the means it averages
/// to sit on the same endpoint.
fn rect_sides(
    s: &InformationStructure,
    g: &BregmanGenerator,
    rows: &[usize],
    cols: &[usize],
) -> Option<(f64, f64, f64)> {
    let mut mass = 0.0;
    let mut col_mass = vec![0.0; cols.len()];
    let mut col_sum = vec![0.0; cols.len()];
    let mut row_mass = vec![0.0; rows.len()];
    let mut row_sum = vec![0.0; rows.len()];
    for (ri, &i) in rows.iter().enumerate() {
        for (ci, &j) in cols.iter().enumerate() {
            let p = s.prob(i, j);
            if p <= 0.0 {
                continue;
            }
            let y = s.mean(i, j);
            mass += p;
            col_mass[ci] += p;
            col_sum[ci] += p * y;
            row_mass[ri] += p;
            row_sum[ri] += p * y;
        }
    }
    if mass <= 0.0 {
        return None;
    }
    // Conditional means live in the convex hull of the cell means; the
    // clamps only strip a final-rounding ulp outside [0, 1].
    let c = (row_sum.iter().sum::<f64>() / mass).clamp(0.0, 1.0);
    let mut lhs = 0.0;
    for (ci, &j) in cols.iter().enumerate() {
        if col_mass[ci] <= 0.0 {
            continue;
        }
        let b = (col_sum[ci] / col_mass[ci]).clamp(0.0, 1.0);
        for &i in rows {
            let p = s.prob(i, j);
            if p > 0.0 {
                lhs += p * g.div(s.mean(i, j), b);
            }
        }
    }
    let mut rhs = 0.0;
    for (ri, _) in rows.iter().enumerate() {
        if row_mass[ri] <= 0.0 {
            continue;
        }
        let a = (row_sum[ri] / row_mass[ri]).clamp(0.0, 1.0);
        rhs += row_mass[ri] * g.div(a, c);
    }
    Some((lhs / mass, rhs / mass, mass))
}

/// Violation LHS − RHS of one rectangle (conditioned on it), with its mass.
pub fn rect_violation(
    s: &InformationStructure,
    g: &BregmanGenerator,
    rect: &Rectangle,
) -> Result<(f64, f64)> {
    match rect_sides(s, g, rect.rows(), rect.cols()) {
        Some((lhs, rhs, mass)) => Ok((lhs - rhs, mass)),
        None => Err(Error::ZeroMassSlice(
            "zero-mass rectangle has no conditional violation".into(),
        )),
    }
}

fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// Scans all positive-mass sub-rectangles, scoring each with
/// `score(mass, violation)` and returning the best (ties to the first in
/// row-mask-major order), plus the number of rectangles checked.
#[allow(clippy::type_complexity)]
fn scan_rectangles(
    s: &InformationStructure,
    g: &BregmanGenerator,
    score: impl Fn(f64, f64) -> f64 + Sync,
) -> (f64, Option<Rectangle>, u64) {
    let m = s.rows();
    let n = s.cols();
    let per_row_mask: Vec<(f64, Option<(u32, u32)>, u64)> = (1u32..(1 << m))
        .into_par_iter()
        .map(|s_mask| {
            let rows = mask_to_indices(s_mask);
            let mut best = f64::NEG_INFINITY;
            let mut best_masks = None;
            let mut checked = 0u64;
            for t_mask in 1u32..(1 << n) {
                let cols = mask_to_indices(t_mask);
                let Some((lhs, rhs, mass)) = rect_sides(s, g, &rows, &cols) else {
                    continue;
                };
                checked += 1;
                let v = score(mass, lhs - rhs);
                if v > best {
                    best = v;
                    best_masks = Some((s_mask, t_mask));
                }
            }
            (best, best_masks, checked)
        })
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut best_masks = None;
    let mut checked = 0u64;
    for (v, masks, c) in per_row_mask {
        checked += c;
        if masks.is_some() && v > best {
            best = v;
            best_masks = masks;
        }
    }
    let rect = best_masks
        .map(|(sm, tm)| Rectangle::new(mask_to_indices(sm), mask_to_indices(tm)).expect("nonempty"));
    (best, rect, checked)
}

/// Checks weak (full grid) or rectangle (all sub-rectangles) substitutes.
/// The rectangle mode enumerates 2^m·2^n subsets and is guarded at
/// [`ENUMERATION_GUARD`] signals per side; use
/// [`rectangle_check_with_guard`] to override.
pub fn rectangle_check(
    s: &InformationStructure,
    g: &BregmanGenerator,
    mode: CheckMode,
) -> Result<SubstitutesReport> {
    rectangle_check_with_guard(s, g, mode, Some(ENUMERATION_GUARD))
}

/// As [`rectangle_check`], with an explicit enumeration guard (`None`
/// disables the size check entirely).
pub fn rectangle_check_with_guard(
    s: &InformationStructure,
    g: &BregmanGenerator,
    mode: CheckMode,
    guard: Option<usize>,
) -> Result<SubstitutesReport> {
    let full = s.full_rect();
    let (full_lhs, full_rhs, _) =
        rect_sides(s, g, full.rows(), full.cols()).expect("total mass is 1");
    let (worst_violation, worst_rect, rectangles_checked) = match mode {
        CheckMode::Weak => (full_lhs - full_rhs, Some(full), 1),
        CheckMode::Rectangle => {
            if let Some(limit) = guard {
                if s.rows() > limit || s.cols() > limit {
                    return Err(Error::TooLargeForEnumeration {
                        rows: s.rows(),
                        cols: s.cols(),
                        limit,
                    });
                }
            }
            let (v, r, c) = scan_rectangles(s, g, |_, violation| violation);
            (v, r, c)
        }
    };
    Ok(SubstitutesReport {
        holds: worst_violation <= VIOLATION_TOLERANCE,
        worst_rect,
        worst_violation,
        rectangles_checked,
        mode,
        full_rect_lhs: full_lhs,
        full_rect_rhs: full_rhs,
    })
}

/// Recursively enumerates every partition of the m×n grid into rectangles:
/// take the first uncovered cell in row-major order, try every rectangle
/// containing it whose cells are all uncovered, and recurse.
fn enumerate_partitions(
    m: usize,
    n: usize,
    covered: &mut [bool],
    current: &mut Vec<Rectangle>,
    visit: &mut impl FnMut(&[Rectangle]),
) {
    let Some(first) = covered.iter().position(|&c| !c) else {
        visit(current);
        return;
    };
    let (r, c) = (first / n, first % n);
    // Rows below r with (i, c) free and columns right of c with (r, j) free
    // are the only candidates for a rectangle containing (r, c).
    let row_candidates: Vec<usize> = (r + 1..m).filter(|&i| !covered[i * n + c]).collect();
    let col_candidates: Vec<usize> = (c + 1..n).filter(|&j| !covered[r * n + j]).collect();
    for s_mask in 0u32..(1 << row_candidates.len()) {
        let mut rows = vec![r];
        rows.extend(
            row_candidates
                .iter()
                .enumerate()
                .filter(|(b, _)| s_mask & (1 << b) != 0)
                .map(|(_, &i)| i),
        );
        'next_t: for t_mask in 0u32..(1 << col_candidates.len()) {
            let mut cols = vec![c];
            cols.extend(
                col_candidates
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| t_mask & (1 << b) != 0)
                    .map(|(_, &j)| j),
            );
            for &i in &rows {
                for &j in &cols {
                    if covered[i * n + j] {
                        continue 'next_t;
                    }
                }
            }
            for &i in &rows {
                for &j in &cols {
                    covered[i * n + j] = true;
                }
            }
            current.push(Rectangle::new(rows.clone(), cols.clone()).expect("nonempty"));
            enumerate_partitions(m, n, covered, current, visit);
            current.pop();
            for &i in &rows {
                for &j in &cols {
                    covered[i * n + j] = false;
                }
            }
        }
    }
}

/// Estimates the δ of δ-approximate rectangle substitutes: always a lower
/// bound from the single worst rectangle, and the exact partition maximum
/// when the grid has at most `exact_limit` cells.
pub fn delta_estimate(
    s: &InformationStructure,
    g: &BregmanGenerator,
    exact_limit: usize,
) -> DeltaEstimate {
    let (best_weighted, _, _) = scan_rectangles(s, g, |mass, violation| mass * violation);
    let lower_bound = best_weighted.max(0.0);

    let (m, n) = (s.rows(), s.cols());
    if m * n > exact_limit {
        return DeltaEstimate {
            lower_bound,
            exact: None,
            partitions_enumerated: 0,
        };
    }
    let mut covered = vec![false; m * n];
    let mut current = Vec::new();
    let mut partitions = 0u64;
    let mut best_gap = f64::NEG_INFINITY;
    enumerate_partitions(m, n, &mut covered, &mut current, &mut |partition| {
        partitions += 1;
        let mut gap = 0.0;
        for rect in partition {
            if let Some((lhs, rhs, mass)) = rect_sides(s, g, rect.rows(), rect.cols()) {
                gap += mass * (lhs - rhs);
            }
        }
        if gap > best_gap {
            best_gap = gap;
        }
    });
    DeltaEstimate {
        lower_bound,
        exact: Some(best_gap.max(0.0)),
        partitions_enumerated: partitions,
    }
}
