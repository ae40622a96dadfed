//! Finite information structures: a joint distribution over two experts'
//! signals plus the conditional mean of a [0,1]-valued target per signal pair.
//!
//! The data model is the pair of m×n matrices
//!
//! ```text
//! prob[i][j] = P[σ = i, τ = j]        mean[i][j] = E[Y | σ = i, τ = j]
//! ```
//!
//! which is a sufficient statistic for every quantity this crate computes:
//! all conditional expectations are probability-weighted averages of `mean`
//! entries, and divergence comparisons between rounds depend on the target
//! only through these conditional means. Zero-probability cells may carry
//! arbitrary finite `mean` entries; no computation ever reads them.
//!
//! A [`Rectangle`] is a product set S×T of row and column indices — the
//! knowledge state induced by a protocol transcript. Conditioning on a
//! rectangle of zero mass is an error ([`Error::ZeroMassSlice`]), never a
//! silent default.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Validation renormalizes total mass only within this distance of 1.
pub const RENORMALIZATION_LIMIT: f64 = 1e-9;

/// Post-validation guarantee on |Σ prob − 1|.
pub const MASS_TOLERANCE: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Rectangle
// ---------------------------------------------------------------------------

/// A combinatorial rectangle S×T: nonempty sets of row and column indices.
///
/// Index sets are stored sorted and deduplicated; rectangles are plain data
/// and carry no reference to a structure, so bounds are checked by the
/// operations that combine the two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rectangle {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Rectangle {
    /// Builds a rectangle from arbitrary index iterables; sorts and dedups.
    pub fn new<R, C>(rows: R, cols: C) -> Result<Self>
    where
        R: IntoIterator<Item = usize>,
        C: IntoIterator<Item = usize>,
    {
        let mut rows: Vec<usize> = rows.into_iter().collect();
        let mut cols: Vec<usize> = cols.into_iter().collect();
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        if rows.is_empty() {
            return Err(Error::EmptyRectangle("row set is empty".into()));
        }
        if cols.is_empty() {
            return Err(Error::EmptyRectangle("column set is empty".into()));
        }
        Ok(Rectangle { rows, cols })
    }

    /// The full rectangle {0..m−1}×{0..n−1}.
    pub fn full(rows: usize, cols: usize) -> Self {
        Rectangle {
            rows: (0..rows).collect(),
            cols: (0..cols).collect(),
        }
    }

    /// Sorted row indices.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Sorted column indices.
    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// Rectangle with rows and columns swapped.
    pub fn transpose(&self) -> Rectangle {
        Rectangle {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// True if `other` is contained in `self` (as a product set).
    pub fn contains(&self, other: &Rectangle) -> bool {
        subset(&other.rows, &self.rows) && subset(&other.cols, &self.cols)
    }

    fn check_bounds(&self, rows: usize, cols: usize) -> Result<()> {
        // Sorted sets: the last element is the maximum.
        let rmax = *self.rows.last().expect("nonempty by construction");
        let cmax = *self.cols.last().expect("nonempty by construction");
        if rmax >= rows || cmax >= cols {
            return Err(Error::DimensionMismatch(format!(
                "rectangle extends to ({rmax}, {cmax}) outside a {rows}x{cols} structure"
            )));
        }
        Ok(())
    }
}

/// True if sorted slice `a` is a subset of sorted slice `b`.
fn subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

// ---------------------------------------------------------------------------
// InformationStructure
// ---------------------------------------------------------------------------

/// A validated, immutable finite information structure.
///
/// Construct with [`validate_structure`] (or deserialize through
/// [`InformationStructure::from_json_str`]); fields are private so every
/// instance in existence satisfies the invariants:
///
/// * all probabilities ≥ 0 and finite, Σ prob = 1 within `1e-12`;
/// * means at positive-probability cells lie in [0, 1]; all means finite.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationStructure {
    rows: usize,
    cols: usize,
    /// Row-major m×n joint probabilities.
    prob: Vec<f64>,
    /// Row-major m×n conditional means.
    mean: Vec<f64>,
    label: Option<String>,
    /// True if validation rescaled the mass to exactly 1.
    renormalized: bool,
}

/// Validates raw matrices into an [`InformationStructure`].
///
/// Probabilities are renormalized only when |Σ − 1| ≤ [`RENORMALIZATION_LIMIT`]
/// (the adjustment is recorded on the result); larger deviations are an error.
pub fn validate_structure(
    rows: usize,
    cols: usize,
    prob: Vec<Vec<f64>>,
    mean: Vec<Vec<f64>>,
    label: Option<String>,
) -> Result<InformationStructure> {
    if rows == 0 || cols == 0 {
        return Err(Error::DimensionMismatch(format!(
            "structure must have at least one row and column, got {rows}x{cols}"
        )));
    }
    let expect_shape = |name: &str, m: &Vec<Vec<f64>>| -> Result<()> {
        if m.len() != rows || m.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "{name} matrix is not {rows}x{cols}"
            )));
        }
        Ok(())
    };
    expect_shape("prob", &prob)?;
    expect_shape("mean", &mean)?;

    let mut flat_prob = Vec::with_capacity(rows * cols);
    let mut flat_mean = Vec::with_capacity(rows * cols);
    for (i, (prow, mrow)) in prob.iter().zip(&mean).enumerate() {
        for (j, (&p, &mu)) in prow.iter().zip(mrow).enumerate() {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::NegativeProbability {
                    row: i,
                    col: j,
                    value: p,
                });
            }
            if !mu.is_finite() || (p > 0.0 && !(0.0..=1.0).contains(&mu)) {
                return Err(Error::MeanOutOfRange {
                    row: i,
                    col: j,
                    value: mu,
                });
            }
            flat_prob.push(p);
            flat_mean.push(mu);
        }
    }

    let total: f64 = flat_prob.iter().sum();
    let mut renormalized = false;
    if (total - 1.0).abs() > MASS_TOLERANCE {
        if (total - 1.0).abs() > RENORMALIZATION_LIMIT {
            return Err(Error::MassNotOne {
                total,
                limit: RENORMALIZATION_LIMIT,
            });
        }
        for p in &mut flat_prob {
            *p /= total;
        }
        renormalized = true;
    }

    Ok(InformationStructure {
        rows,
        cols,
        prob: flat_prob,
        mean: flat_mean,
        label,
        renormalized,
    })
}

impl InformationStructure {
    /// Number of Alice signals (rows).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of Bob signals (columns).
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Joint probability P[σ=i, τ=j]. Panics if out of bounds.
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.prob[i * self.cols + j]
    }

    /// Conditional mean E[Y|σ=i, τ=j] as stored. Panics if out of bounds.
    /// Entries at zero-probability cells are unspecified filler.
    pub fn mean(&self, i: usize, j: usize) -> f64 {
        self.mean[i * self.cols + j]
    }

    /// Free-text identifier, if any.
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Returns a copy with the given label.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// True if validation had to rescale the probability mass.
    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    /// The full rectangle of this structure.
    pub fn full_rect(&self) -> Rectangle {
        Rectangle::full(self.rows, self.cols)
    }

    /// Total probability mass of a rectangle.
    pub fn mass(&self, rect: &Rectangle) -> Result<f64> {
        rect.check_bounds(self.rows, self.cols)?;
        let mut total = 0.0;
        for &i in rect.rows() {
            for &j in rect.cols() {
                total += self.prob(i, j);
            }
        }
        Ok(total)
    }

    /// Mass of row `i` restricted to the given columns.
    pub fn row_mass(&self, i: usize, cols: &[usize]) -> f64 {
        cols.iter().map(|&j| self.prob(i, j)).sum()
    }

    /// Mass of column `j` restricted to the given rows.
    pub fn col_mass(&self, j: usize, rows: &[usize]) -> f64 {
        rows.iter().map(|&i| self.prob(i, j)).sum()
    }

    /// μ_ST — the expectation of Y conditioned on the rectangle (Charlie's
    /// expectation when the transcript pins the state to `rect`).
    pub fn block_mean(&self, rect: &Rectangle) -> Result<f64> {
        rect.check_bounds(self.rows, self.cols)?;
        let mut mass = 0.0;
        let mut acc = 0.0;
        for &i in rect.rows() {
            for &j in rect.cols() {
                let p = self.prob(i, j);
                if p > 0.0 {
                    mass += p;
                    acc += p * self.mean(i, j);
                }
            }
        }
        if mass <= 0.0 {
            return Err(Error::ZeroMassSlice(format!(
                "rectangle {:?}x{:?} has zero mass",
                rect.rows(),
                rect.cols()
            )));
        }
        // The true conditional mean lies in the convex hull of the cell
        // means; the clamp only removes a final-rounding ulp outside [0, 1].
        Ok((acc / mass).clamp(0.0, 1.0))
    }

    /// μ_σT — Alice's expectation given her signal `i` and column set `cols`.
    pub fn row_mean(&self, i: usize, cols: &[usize]) -> Result<f64> {
        let mut mass = 0.0;
        let mut acc = 0.0;
        for &j in cols {
            let p = self.prob(i, j);
            if p > 0.0 {
                mass += p;
                acc += p * self.mean(i, j);
            }
        }
        if mass <= 0.0 {
            return Err(Error::ZeroMassSlice(format!(
                "row {i} has zero mass within columns {cols:?}"
            )));
        }
        Ok((acc / mass).clamp(0.0, 1.0))
    }

    /// μ_Sτ — Bob's expectation given his signal `j` and row set `rows`.
    pub fn col_mean(&self, j: usize, rows: &[usize]) -> Result<f64> {
        let mut mass = 0.0;
        let mut acc = 0.0;
        for &i in rows {
            let p = self.prob(i, j);
            if p > 0.0 {
                mass += p;
                acc += p * self.mean(i, j);
            }
        }
        if mass <= 0.0 {
            return Err(Error::ZeroMassSlice(format!(
                "column {j} has zero mass within rows {rows:?}"
            )));
        }
        Ok((acc / mass).clamp(0.0, 1.0))
    }

    /// μ_στ — the cell mean, defined only where the cell has positive mass.
    pub fn cell_mean(&self, i: usize, j: usize) -> Result<f64> {
        if self.prob(i, j) <= 0.0 {
            return Err(Error::ZeroMassSlice(format!(
                "cell ({i}, {j}) has zero probability"
            )));
        }
        Ok(self.mean(i, j))
    }

    /// Alice's belief vector μ_σ over the full column set; entries are `None`
    /// for zero-mass rows.
    pub fn alice_beliefs(&self) -> Vec<Option<f64>> {
        let cols: Vec<usize> = (0..self.cols).collect();
        (0..self.rows)
            .map(|i| self.row_mean(i, &cols).ok())
            .collect()
    }

    /// Bob's belief vector μ_τ over the full row set; entries are `None` for
    /// zero-mass columns.
    pub fn bob_beliefs(&self) -> Vec<Option<f64>> {
        let rows: Vec<usize> = (0..self.rows).collect();
        (0..self.cols)
            .map(|j| self.col_mean(j, &rows).ok())
            .collect()
    }

    /// Restriction to a rectangle: the |S|×|T| sub-structure with mass
    /// renormalized to 1, re-indexed compactly in the rectangle's order.
    /// Restricting a restriction equals restricting by the intersection.
    pub fn restrict(&self, rect: &Rectangle) -> Result<InformationStructure> {
        rect.check_bounds(self.rows, self.cols)?;
        let mass = self.mass(rect)?;
        if mass <= 0.0 {
            return Err(Error::ZeroMassSlice(format!(
                "cannot restrict to zero-mass rectangle {:?}x{:?}",
                rect.rows(),
                rect.cols()
            )));
        }
        let mut prob = Vec::with_capacity(rect.rows().len() * rect.cols().len());
        let mut mean = Vec::with_capacity(prob.capacity());
        for &i in rect.rows() {
            for &j in rect.cols() {
                prob.push(self.prob(i, j) / mass);
                mean.push(self.mean(i, j));
            }
        }
        Ok(InformationStructure {
            rows: rect.rows().len(),
            cols: rect.cols().len(),
            prob,
            mean,
            label: self
                .label
                .as_ref()
                .map(|l| format!("{l}|restricted")),
            renormalized: false,
        })
    }

    /// The transposed structure (Alice and Bob swapped).
    pub fn transpose(&self) -> InformationStructure {
        let mut prob = Vec::with_capacity(self.prob.len());
        let mut mean = Vec::with_capacity(self.mean.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                prob.push(self.prob(i, j));
                mean.push(self.mean(i, j));
            }
        }
        InformationStructure {
            rows: self.cols,
            cols: self.rows,
            prob,
            mean,
            label: self.label.as_ref().map(|l| format!("{l}|transposed")),
            renormalized: self.renormalized,
        }
    }

    // -- JSON ---------------------------------------------------------------

    /// Parses the JSON file format; unknown top-level keys are rejected.
    pub fn from_json_str(text: &str) -> Result<InformationStructure> {
        let raw: StructureFile = serde_json::from_str(text)?;
        validate_structure(raw.rows, raw.cols, raw.prob, raw.mean, raw.label)
    }

    /// Serializes to the JSON file format (pretty, deterministic key order).
    pub fn to_json_string(&self) -> String {
        let file = StructureFile {
            rows: self.rows,
            cols: self.cols,
            prob: (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.prob(i, j)).collect())
                .collect(),
            mean: (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.mean(i, j)).collect())
                .collect(),
            label: self.label.clone(),
        };
        serde_json::to_string_pretty(&file).expect("structure serialization cannot fail")
    }

    /// Reads and validates a structure from a file.
    pub fn read_json(path: &std::path::Path) -> Result<InformationStructure> {
        InformationStructure::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Writes the JSON file format to a path.
    pub fn write_json(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }
}

/// Wire format: `{"rows": m, "cols": n, "prob": [[..]], "mean": [[..]], "label": ..}`
/// with row-major matrices. `deny_unknown_fields` enforces rejection of
/// unrecognized top-level keys.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureFile {
    rows: usize,
    cols: usize,
    prob: Vec<Vec<f64>>,
    mean: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xor() -> InformationStructure {
        validate_structure(
            2,
            2,
            vec![vec![0.25, 0.25], vec![0.25, 0.25]],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            Some("xor".into()),
        )
        .unwrap()
    }

    #[test]
    fn validate_accepts_xor() {
        let s = xor();
        assert_eq!(s.rows(), 2);
        assert!(!s.renormalized());
        assert_eq!(s.block_mean(&s.full_rect()).unwrap(), 0.5);
    }

    #[test]
    fn validate_rejects_bad_mass() {
        let err = validate_structure(
            1,
            2,
            vec![vec![0.5, 0.4]],
            vec![vec![0.0, 1.0]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MassNotOne { .. }));
    }

    #[test]
    fn validate_renormalizes_tiny_drift() {
        let s = validate_structure(
            1,
            2,
            vec![vec![0.5 + 3e-10, 0.5]],
            vec![vec![0.0, 1.0]],
            None,
        )
        .unwrap();
        assert!(s.renormalized());
        let total = s.prob(0, 0) + s.prob(0, 1);
        assert!((total - 1.0).abs() <= MASS_TOLERANCE);
    }

    #[test]
    fn validate_rejects_negative_prob_and_bad_mean() {
        let err = validate_structure(
            1,
            2,
            vec![vec![-0.1, 1.1]],
            vec![vec![0.0, 1.0]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NegativeProbability { row: 0, col: 0, .. }));

        let err = validate_structure(
            1,
            2,
            vec![vec![0.5, 0.5]],
            vec![vec![0.0, 1.5]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MeanOutOfRange { row: 0, col: 1, .. }));
    }

    #[test]
    fn mean_outside_range_tolerated_at_zero_mass_cells() {
        // The entry is never read, so validation lets it through.
        let s = validate_structure(
            1,
            2,
            vec![vec![1.0, 0.0]],
            vec![vec![0.5, 7.0]],
            None,
        )
        .unwrap();
        assert!(s.cell_mean(0, 1).is_err());
    }

    #[test]
    fn single_cell_conditioning_returns_the_entry() {
        let s = xor();
        let r = Rectangle::new([1], [0]).unwrap();
        assert_eq!(s.block_mean(&r).unwrap(), 1.0);
        assert_eq!(s.cell_mean(1, 0).unwrap(), 1.0);
    }

    #[test]
    fn zero_mass_rectangle_is_rejected() {
        let s = validate_structure(
            2,
            2,
            vec![vec![0.5, 0.0], vec![0.0, 0.5]],
            vec![vec![0.1, 0.2], vec![0.3, 0.4]],
            None,
        )
        .unwrap();
        let r = Rectangle::new([0], [1]).unwrap();
        assert!(matches!(s.block_mean(&r), Err(Error::ZeroMassSlice(_))));
        assert!(matches!(s.restrict(&r), Err(Error::ZeroMassSlice(_))));
    }

    #[test]
    fn restrict_full_is_identity() {
        let s = xor();
        let r = s.restrict(&s.full_rect()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((r.prob(i, j) - s.prob(i, j)).abs() <= 1e-15);
                assert_eq!(r.mean(i, j), s.mean(i, j));
            }
        }
    }

    #[test]
    fn restrict_single_row_keeps_row_entries() {
        let s = xor();
        let r = s
            .restrict(&Rectangle::new([1], [0, 1]).unwrap())
            .unwrap();
        assert_eq!(r.rows(), 1);
        assert_eq!(r.mean(0, 0), 1.0);
        assert_eq!(r.mean(0, 1), 0.0);
        assert!((r.prob(0, 0) - 0.5).abs() <= 1e-15);
    }

    #[test]
    fn restriction_composes_as_intersection() {
        let s = validate_structure(
            3,
            3,
            vec![
                vec![0.1, 0.1, 0.1],
                vec![0.1, 0.2, 0.1],
                vec![0.1, 0.1, 0.1],
            ],
            vec![
                vec![0.1, 0.9, 0.5],
                vec![0.2, 0.3, 0.8],
                vec![0.7, 0.4, 0.6],
            ],
            None,
        )
        .unwrap();
        let outer = Rectangle::new([0, 1, 2], [1, 2]).unwrap();
        // Rows {1,2} of the restriction correspond to original rows {1,2};
        // its column 0 is the original column 1.
        let once = s
            .restrict(&outer)
            .unwrap()
            .restrict(&Rectangle::new([1, 2], [0]).unwrap())
            .unwrap();
        let direct = s
            .restrict(&Rectangle::new([1, 2], [1]).unwrap())
            .unwrap();
        for i in 0..2 {
            assert!((once.prob(i, 0) - direct.prob(i, 0)).abs() <= 1e-12);
            assert_eq!(once.mean(i, 0), direct.mean(i, 0));
        }
    }

    #[test]
    fn unknown_json_keys_are_rejected() {
        let text = r#"{"rows":1,"cols":1,"prob":[[1.0]],"mean":[[0.5]],"extra":3}"#;
        assert!(InformationStructure::from_json_str(text).is_err());
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let s = xor();
        let back = InformationStructure::from_json_str(&s.to_json_string()).unwrap();
        assert_eq!(back, s);
        // Serialization is deterministic.
        assert_eq!(back.to_json_string(), s.to_json_string());
    }

    #[test]
    fn transpose_swaps_roles() {
        let s = validate_structure(
            1,
            2,
            vec![vec![0.25, 0.75]],
            vec![vec![0.2, 0.6]],
            None,
        )
        .unwrap();
        let t = s.transpose();
        assert_eq!((t.rows(), t.cols()), (2, 1));
        assert_eq!(t.prob(1, 0), 0.75);
        assert_eq!(t.mean(1, 0), 0.6);
    }

    // -- property tests ------------------------------------------------------

    prop_compose! {
        /// Random structures up to 5x5 with rational-ish weights.
        fn arb_structure()(
            rows in 1usize..=5,
            cols in 1usize..=5,
        )(
            rows in Just(rows),
            cols in Just(cols),
            weights in proptest::collection::vec(0u32..20, rows * cols),
            means in proptest::collection::vec(0u32..=100, rows * cols),
        ) -> Option<InformationStructure> {
            let total: u32 = weights.iter().sum();
            if total == 0 {
                return None;
            }
            let prob: Vec<Vec<f64>> = (0..rows)
                .map(|i| (0..cols).map(|j| weights[i * cols + j] as f64 / total as f64).collect())
                .collect();
            let mean: Vec<Vec<f64>> = (0..rows)
                .map(|i| (0..cols).map(|j| means[i * cols + j] as f64 / 100.0).collect())
                .collect();
            validate_structure(rows, cols, prob, mean, None).ok()
        }
    }

    proptest! {
        #[test]
        fn block_mean_within_mean_range(s in arb_structure()) {
            let Some(s) = s else { return Ok(()) };
            let full = s.full_rect();
            let mu = s.block_mean(&full).unwrap();
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 0..s.rows() {
                for j in 0..s.cols() {
                    if s.prob(i, j) > 0.0 {
                        lo = lo.min(s.mean(i, j));
                        hi = hi.max(s.mean(i, j));
                    }
                }
            }
            prop_assert!(mu >= lo - 1e-12 && mu <= hi + 1e-12);
        }

        #[test]
        fn law_of_total_expectation_over_row_split(s in arb_structure()) {
            let Some(s) = s else { return Ok(()) };
            if s.rows() < 2 { return Ok(()); }
            let full = s.full_rect();
            let mu = s.block_mean(&full).unwrap();
            // Split the full rectangle into single-row sub-rectangles; the
            // mass-weighted average of the parts must reproduce the whole.
            let mut acc = 0.0;
            let mut mass = 0.0;
            for i in 0..s.rows() {
                let r = Rectangle::new([i], 0..s.cols()).unwrap();
                let m = s.mass(&r).unwrap();
                if m > 0.0 {
                    acc += m * s.block_mean(&r).unwrap();
                    mass += m;
                }
            }
            prop_assert!((acc / mass - mu).abs() <= 1e-10);
        }

        #[test]
        fn tower_property_of_restriction(s in arb_structure()) {
            let Some(s) = s else { return Ok(()) };
            let rect = Rectangle::new(0..s.rows().clamp(1, 2), 0..s.cols()).unwrap();
            if s.mass(&rect).unwrap() <= 0.0 { return Ok(()); }
            let restricted = s.restrict(&rect).unwrap();
            let inner = restricted.block_mean(&restricted.full_rect()).unwrap();
            let outer = s.block_mean(&rect).unwrap();
            prop_assert!((inner - outer).abs() <= 1e-12);
        }

        #[test]
        fn json_round_trip(s in arb_structure()) {
            let Some(s) = s else { return Ok(()) };
            let back = InformationStructure::from_json_str(&s.to_json_string()).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
