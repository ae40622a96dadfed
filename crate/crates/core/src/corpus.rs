//! Canonical and randomized example structures.
//!
//! Canonical instances: the XOR structure (perfect agreement, maximal
//! inaccuracy), the coin-XOR structure (weak substitutes without rectangle
//! substitutes: a hidden coin picks between a correlated and an
//! anti-correlated pair of bits), and identical-signals structures (both
//! parties see the same signal; the benchmark rectangle-substitutes family).
//!
//! Randomized instances come from a ChaCha8 stream seeded with a caller
//! `u64`; the algorithm id is embedded in every label so corpora are
//! reproducible across machines. [`random_substitutes_structure`] synthesizes
//! certified rectangle-substitutes instances by blending a random structure
//! toward an identical-signals target and binary-searching the smallest
//! blend weight that passes the exhaustive check; whatever the search does,
//! the result is re-certified before it is returned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divergence::BregmanGenerator;
use crate::error::{Error, Result};
use crate::structure::{validate_structure, InformationStructure};
use crate::substitutes::{rectangle_check, CheckMode};

/// PRNG identifier recorded in labels of randomized structures.
pub const PRNG_ID: &str = "chacha8";

/// Largest grid side for certified synthesis (the certificate is an
/// exhaustive rectangle scan).
pub const SYNTHESIS_GUARD: usize = 8;

/// Two independent fair bits; the value is their XOR. Everyone's belief is
/// ½ at every state, so the parties always agree perfectly and are always
/// 0.25-inaccurate.
pub fn make_xor() -> InformationStructure {
    validate_structure(
        2,
        2,
        vec![vec![0.25, 0.25], vec![0.25, 0.25]],
        vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        Some("xor".into()),
    )
    .expect("fixed table validates")
}

/// A hidden fair coin picks between highly correlated bits (heads: equal
/// with probability 90%) and highly anti-correlated bits (tails); each party
/// sees (coin, own bit) and the value is the XOR of the bits. Signal layout:
/// 0=(heads,0), 1=(heads,1), 2=(tails,0), 3=(tails,1).
///
/// Beliefs start at 0.1 or 0.9 for both parties — zero disagreement with
/// accuracy error 0.09 — and conditioning on the coin yields an XOR-like
/// block, so weak substitutes holds while rectangle substitutes fails.
pub fn make_coin_xor() -> InformationStructure {
    let p_eq = 0.225; // ½ · 45%: coin × matching bit pair
    let p_ne = 0.025;
    validate_structure(
        4,
        4,
        vec![
            vec![p_eq, p_ne, 0.0, 0.0],
            vec![p_ne, p_eq, 0.0, 0.0],
            vec![0.0, 0.0, p_ne, p_eq],
            vec![0.0, 0.0, p_eq, p_ne],
        ],
        vec![
            vec![0.0, 1.0, 0.5, 0.5],
            vec![1.0, 0.0, 0.5, 0.5],
            vec![0.5, 0.5, 0.0, 1.0],
            vec![0.5, 0.5, 1.0, 0.0],
        ],
        Some("coin-xor".into()),
    )
    .expect("fixed table validates")
}

/// Both parties observe the same signal X ~ `dist` and the value is
/// `values[X]`: the diagonal structure, which satisfies rectangle
/// substitutes for every generator (the left side of the inequality is
/// identically zero). Off-diagonal cells carry zero probability; their mean
/// entries are filled with midpoints for continuity but are never read.
pub fn make_identical(dist: &[f64], values: &[f64]) -> Result<InformationStructure> {
    if dist.len() != values.len() || dist.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "identical-signals structure needs matching nonempty dist/values, got {} and {}",
            dist.len(),
            values.len()
        )));
    }
    let n = dist.len();
    let prob: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { dist[i] } else { 0.0 }).collect())
        .collect();
    let mean: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (values[i] + values[j])).collect())
        .collect();
    validate_structure(n, n, prob, mean, Some(format!("identical-n{n}")))
}

/// A seeded random structure: probabilities are normalized uniforms, means
/// are uniforms, both drawn row-major from a ChaCha8 stream (probabilities
/// first). The same seed reproduces the structure byte for byte.
pub fn random_structure(rows: usize, cols: usize, seed: u64) -> Result<InformationStructure> {
    if rows < 1 || cols < 1 {
        return Err(Error::DimensionMismatch(
            "random structure needs at least one row and column".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (prob, mean) = draw_matrices(&mut rng, rows, cols);
    validate_structure(
        rows,
        cols,
        prob,
        mean,
        Some(format!("random-{rows}x{cols}-seed{seed}-{PRNG_ID}")),
    )
}

/// A seeded certified structure whose value is a deterministic 0/1 function
/// of one expert's signal (even seeds: Alice's rows; odd seeds: Bob's
/// columns); the joint distribution is random and the 0/1 assignment is
/// random but never constant.
///
/// Such structures satisfy rectangle substitutes for every generator. When
/// the value is a function of Alice's signal, her conditional mean cannot
/// move when Bob's signal is revealed, so the left side of the substitutes
/// inequality is zero on every rectangle. When it is a function of Bob's
/// signal, the inequality is the Bregman Pythagorean tower property:
/// predicting the value from (σ, rectangle) is at least as good as
/// predicting it from the rectangle alone. The result is re-certified with
/// the squared generator before being returned.
pub fn random_boolean_substitutes_structure(
    rows: usize,
    cols: usize,
    seed: u64,
) -> Result<InformationStructure> {
    if rows > SYNTHESIS_GUARD || cols > SYNTHESIS_GUARD {
        return Err(Error::TooLargeForEnumeration {
            rows,
            cols,
            limit: SYNTHESIS_GUARD,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (prob, _) = draw_matrices(&mut rng, rows, cols);
    let row_informed = seed.is_multiple_of(2);
    let k = if row_informed { rows } else { cols };
    if k < 2 {
        return Err(Error::DimensionMismatch(
            "a non-constant boolean value needs at least two informed signals".into(),
        ));
    }
    let mut f: Vec<f64> = (0..k)
        .map(|_| if rng.random::<f64>() < 0.5 { 0.0 } else { 1.0 })
        .collect();
    if f.iter().all(|&v| v == f[0]) {
        f[k - 1] = 1.0 - f[0];
    }
    let mean: Vec<Vec<f64>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| if row_informed { f[i] } else { f[j] })
                .collect()
        })
        .collect();
    let side = if row_informed { "alice" } else { "bob" };
    let s = validate_structure(
        rows,
        cols,
        prob,
        mean,
        Some(format!(
            "boolean-{rows}x{cols}-seed{seed}-{PRNG_ID}-{side}"
        )),
    )?;
    let report = rectangle_check(&s, &BregmanGenerator::squared(), CheckMode::Rectangle)?;
    if !report.holds {
        return Err(Error::SynthesisFailed {
            steps: 1,
            best_violation: report.worst_violation,
        });
    }
    Ok(s)
}

/// A seeded certified structure whose value is a deterministic function of
/// one expert's signal with values interior to (0, 1) (even seeds: Alice's
/// rows; odd seeds: Bob's columns); the joint distribution is random.
///
/// Certified for every generator by the same argument as
/// [`random_boolean_substitutes_structure`]. Unlike the boolean family,
/// interior values sit between the grid points and thresholds of the
/// coarse protocols, which therefore stop short of exact learning; these
/// structures keep agreement and accuracy strictly positive and exercise
/// the accuracy bounds non-vacuously.
pub fn random_one_sided_substitutes_structure(
    rows: usize,
    cols: usize,
    seed: u64,
) -> Result<InformationStructure> {
    if rows > SYNTHESIS_GUARD || cols > SYNTHESIS_GUARD {
        return Err(Error::TooLargeForEnumeration {
            rows,
            cols,
            limit: SYNTHESIS_GUARD,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (prob, _) = draw_matrices(&mut rng, rows, cols);
    let row_informed = seed.is_multiple_of(2);
    let k = if row_informed { rows } else { cols };
    let f: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
    let mean: Vec<Vec<f64>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| if row_informed { f[i] } else { f[j] })
                .collect()
        })
        .collect();
    let side = if row_informed { "alice" } else { "bob" };
    let s = validate_structure(
        rows,
        cols,
        prob,
        mean,
        Some(format!(
            "one-sided-{rows}x{cols}-seed{seed}-{PRNG_ID}-{side}"
        )),
    )?;
    let report = rectangle_check(&s, &BregmanGenerator::squared(), CheckMode::Rectangle)?;
    if !report.holds {
        return Err(Error::SynthesisFailed {
            steps: 1,
            best_violation: report.worst_violation,
        });
    }
    Ok(s)
}

fn draw_matrices(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let raw: Vec<f64> = (0..rows * cols).map(|_| rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let prob: Vec<Vec<f64>> = (0..rows)
        .map(|i| (0..cols).map(|j| raw[i * cols + j] / total).collect())
        .collect();
    let mean: Vec<Vec<f64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random::<f64>()).collect())
        .collect();
    (prob, mean)
}

/// Synthesizes a certified rectangle-substitutes structure for `g`.
///
/// Draws a random base structure and an identical-signals target from the
/// seed (after the base, the stream yields the target's diagonal
/// distribution and then its values), blends both the probability and mean
/// matrices toward the target, and binary-searches the smallest blend
/// weight passing the exhaustive rectangle check. Blend weight 1 is the
/// diagonal limit, which always passes; the returned structure is
/// re-certified before returning. Square grids only, at most
/// [`SYNTHESIS_GUARD`] signals per side.
pub fn random_substitutes_structure(
    rows: usize,
    cols: usize,
    seed: u64,
    g: &BregmanGenerator,
) -> Result<InformationStructure> {
    if rows != cols {
        return Err(Error::DimensionMismatch(format!(
            "substitutes synthesis blends toward a diagonal target and needs a square grid, got {rows}x{cols}"
        )));
    }
    if rows > SYNTHESIS_GUARD {
        return Err(Error::TooLargeForEnumeration {
            rows,
            cols,
            limit: SYNTHESIS_GUARD,
        });
    }
    let n = rows;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (base_prob, base_mean) = draw_matrices(&mut rng, n, n);
    let raw_dist: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let dist_total: f64 = raw_dist.iter().sum();
    let dist: Vec<f64> = raw_dist.iter().map(|x| x / dist_total).collect();
    let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();

    let blend = |w: f64| -> Result<InformationStructure> {
        let prob: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let target = if i == j { dist[i] } else { 0.0 };
                        (1.0 - w) * base_prob[i][j] + w * target
                    })
                    .collect()
            })
            .collect();
        let mean: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let target = if i == j {
                            values[i]
                        } else {
                            0.5 * (values[i] + values[j])
                        };
                        (1.0 - w) * base_mean[i][j] + w * target
                    })
                    .collect()
            })
            .collect();
        validate_structure(
            n,
            n,
            prob,
            mean,
            Some(format!(
                "substitutes-{n}x{n}-seed{seed}-{PRNG_ID}-g{}-mix{w}",
                g.name()
            )),
        )
    };
    let passes = |w: f64| -> Result<(bool, f64)> {
        let s = blend(w)?;
        let report = rectangle_check(&s, g, CheckMode::Rectangle)?;
        Ok((report.holds, report.worst_violation))
    };

    let mut steps = 0u32;
    let (ok0, _) = passes(0.0)?;
    steps += 1;
    let mut hi = 1.0;
    if !ok0 {
        let (ok1, v1) = passes(1.0)?;
        steps += 1;
        if !ok1 {
            return Err(Error::SynthesisFailed {
                steps,
                best_violation: v1,
            });
        }
        let mut lo = 0.0;
        while steps < 64 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (ok, _) = passes(mid)?;
            steps += 1;
            if ok {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    } else {
        hi = 0.0;
    }

    let result = blend(hi)?;
    let report = rectangle_check(&result, g, CheckMode::Rectangle)?;
    if !report.holds {
        return Err(Error::SynthesisFailed {
            steps,
            best_violation: report.worst_violation,
        });
    }
    Ok(result)
}

/// Structure families the CLI can generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    Xor,
    CoinXor,
    Identical,
    Random,
    Substitutes,
}

impl CorpusKind {
    /// Stable string id.
    pub fn id(&self) -> &'static str {
        match self {
            CorpusKind::Xor => "xor",
            CorpusKind::CoinXor => "coin-xor",
            CorpusKind::Identical => "identical",
            CorpusKind::Random => "random",
            CorpusKind::Substitutes => "substitutes",
        }
    }
}

/// Parses a corpus kind id as used on the command line.
pub fn parse_corpus_kind(name: &str) -> Result<CorpusKind> {
    match name {
        "xor" => Ok(CorpusKind::Xor),
        "coin-xor" => Ok(CorpusKind::CoinXor),
        "identical" => Ok(CorpusKind::Identical),
        "random" => Ok(CorpusKind::Random),
        "substitutes" => Ok(CorpusKind::Substitutes),
        other => Err(Error::DomainError(format!(
            "unknown corpus kind {other:?}; expected xor, coin-xor, identical, random, or substitutes"
        ))),
    }
}

/// A fully seeded generation request; the seed determines the output for
/// every kind (the fixed kinds ignore it).
#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    /// Generator certified against, for the substitutes kind.
    pub generator: Option<BregmanGenerator>,
}

/// Generates the structure a [`CorpusSpec`] describes. The identical kind
/// draws its distribution and values from the seed (distribution first).
pub fn generate(spec: &CorpusSpec) -> Result<InformationStructure> {
    match spec.kind {
        CorpusKind::Xor => Ok(make_xor()),
        CorpusKind::CoinXor => Ok(make_coin_xor()),
        CorpusKind::Identical => {
            if spec.rows != spec.cols {
                return Err(Error::DimensionMismatch(
                    "identical-signals structures are square".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let raw: Vec<f64> = (0..spec.rows).map(|_| rng.random::<f64>()).collect();
            let total: f64 = raw.iter().sum();
            let dist: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let values: Vec<f64> = (0..spec.rows).map(|_| rng.random::<f64>()).collect();
            let s = make_identical(&dist, &values)?;
            Ok(s.with_label(format!(
                "identical-n{}-seed{}-{PRNG_ID}",
                spec.rows, spec.seed
            )))
        }
        CorpusKind::Random => random_structure(spec.rows, spec.cols, spec.seed),
        CorpusKind::Substitutes => {
            let g = spec
                .generator
                .clone()
                .unwrap_or_else(BregmanGenerator::squared);
            random_substitutes_structure(spec.rows, spec.cols, spec.seed, &g)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{accuracy_profile, agreement_profile};
    use crate::protocol::{run_standard, ProtocolPartition};
    use crate::structure::Rectangle;

    #[test]
    fn xor_baseline_numbers() {
        let s = make_xor();
        assert_eq!(s.block_mean(&s.full_rect()).unwrap(), 0.5);
        let g = BregmanGenerator::squared();
        let root = ProtocolPartition::root(&s).unwrap();
        assert_eq!(agreement_profile(&s, &root, &g).unwrap().quad, 0.0);
        let weak = rectangle_check(&s, &g, CheckMode::Weak).unwrap();
        assert!((weak.worst_violation - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn coin_xor_beliefs_and_round0_error() {
        let s = make_coin_xor();
        for belief in s.alice_beliefs().into_iter().flatten() {
            assert!(
                (belief - 0.1).abs() <= 1e-12 || (belief - 0.9).abs() <= 1e-12,
                "belief {belief}"
            );
        }
        let g = BregmanGenerator::squared();
        let root = ProtocolPartition::root(&s).unwrap();
        let acc = accuracy_profile(&s, &root, &g).unwrap();
        assert!((acc.alice_quad - 0.09).abs() <= 1e-12);
        let weak = rectangle_check(&s, &g, CheckMode::Weak).unwrap();
        assert!(weak.holds);
        let rect = rectangle_check(&s, &g, CheckMode::Rectangle).unwrap();
        assert!(!rect.holds);
    }

    #[test]
    fn coin_xor_heads_restriction_is_a_biased_xor() {
        let s = make_coin_xor();
        let heads = Rectangle::new([0, 1], [0, 1]).unwrap();
        let r = s.restrict(&heads).unwrap();
        let expect = [[0.45, 0.05], [0.05, 0.45]];
        for (i, row) in expect.iter().enumerate() {
            for (j, &cell) in row.iter().enumerate() {
                assert!((r.prob(i, j) - cell).abs() <= 1e-12);
                assert_eq!(r.mean(i, j), ((i + j) % 2) as f64);
            }
        }
    }

    #[test]
    fn identical_signals_properties() {
        let s = make_identical(&[0.2, 0.3, 0.5], &[0.1, 0.5, 0.9]).unwrap();
        for g in [BregmanGenerator::squared(), BregmanGenerator::kl()] {
            let r = rectangle_check(&s, &g, CheckMode::Rectangle).unwrap();
            assert!(r.holds);
            assert!(r.full_rect_lhs.abs() <= 1e-15);
        }
        let t = run_standard(&s, 10).unwrap();
        assert_eq!(t.t_end, 0);
        // Restriction keeps the diagonal shape.
        let r = s
            .restrict(&Rectangle::new([0, 2], [0, 1, 2]).unwrap())
            .unwrap();
        for i in 0..r.rows() {
            for j in 0..r.cols() {
                if r.prob(i, j) > 0.0 {
                    assert!((r.row_mean(i, &[0, 1, 2]).unwrap() - r.mean(i, j)).abs() <= 1e-15);
                }
            }
        }
        assert!(matches!(
            make_identical(&[0.5, 0.5], &[0.1]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn random_structure_is_deterministic_and_valid() {
        let a = random_structure(5, 5, 42).unwrap();
        let b = random_structure(5, 5, 42).unwrap();
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert!(a.label().unwrap().contains(PRNG_ID));
        let mut total = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                total += a.prob(i, j);
            }
        }
        assert!((total - 1.0).abs() <= 1e-12);
        let c = random_structure(5, 5, 43).unwrap();
        assert_ne!(a.to_json_string(), c.to_json_string());
    }

    #[test]
    fn synthesized_structures_are_certified() {
        let g = BregmanGenerator::squared();
        for seed in 0..10 {
            let s = random_substitutes_structure(4, 4, seed, &g).unwrap();
            let r = rectangle_check(&s, &g, CheckMode::Rectangle).unwrap();
            assert!(r.holds, "seed {seed}");
            assert!(s.label().unwrap().contains("mix"));
        }
        let kl = BregmanGenerator::kl();
        let s = random_substitutes_structure(3, 3, 7, &kl).unwrap();
        assert!(rectangle_check(&s, &kl, CheckMode::Rectangle).unwrap().holds);
    }

    #[test]
    fn synthesis_is_deterministic() {
        let g = BregmanGenerator::squared();
        let a = random_substitutes_structure(4, 4, 11, &g).unwrap();
        let b = random_substitutes_structure(4, 4, 11, &g).unwrap();
        assert_eq!(a.to_json_string(), b.to_json_string());
    }

    #[test]
    fn synthesis_preconditions() {
        let g = BregmanGenerator::squared();
        assert!(matches!(
            random_substitutes_structure(3, 4, 0, &g),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            random_substitutes_structure(9, 9, 0, &g),
            Err(Error::TooLargeForEnumeration { limit: 8, .. })
        ));
    }

    #[test]
    fn boolean_synthesis_is_certified_and_nonconstant() {
        for seed in 0..6 {
            let s = random_boolean_substitutes_structure(4, 4, seed).unwrap();
            let report =
                rectangle_check(&s, &BregmanGenerator::squared(), CheckMode::Rectangle).unwrap();
            assert!(report.holds, "seed {seed} must certify");
            let mut seen = std::collections::BTreeSet::new();
            for i in 0..4 {
                for j in 0..4 {
                    let v = s.mean(i, j);
                    assert!(v == 0.0 || v == 1.0, "boolean mean, got {v}");
                    seen.insert(v as u8);
                }
            }
            assert_eq!(seen.len(), 2, "values must not be constant");
            let side = if seed % 2 == 0 { "alice" } else { "bob" };
            assert!(s.label().unwrap().ends_with(side));
        }
    }

    #[test]
    fn boolean_synthesis_sides_are_constant_along_the_informed_signal() {
        let alice = random_boolean_substitutes_structure(3, 5, 2).unwrap();
        for i in 0..3 {
            for j in 1..5 {
                assert_eq!(alice.mean(i, j), alice.mean(i, 0));
            }
        }
        let bob = random_boolean_substitutes_structure(3, 5, 3).unwrap();
        for j in 0..5 {
            for i in 1..3 {
                assert_eq!(bob.mean(i, j), bob.mean(0, j));
            }
        }
    }

    #[test]
    fn one_sided_synthesis_is_certified_with_interior_values() {
        for seed in 0..4 {
            let s = random_one_sided_substitutes_structure(4, 4, seed).unwrap();
            for g in [BregmanGenerator::squared(), BregmanGenerator::kl()] {
                let report = rectangle_check(&s, &g, CheckMode::Rectangle).unwrap();
                assert!(report.holds, "seed {seed} must certify for {}", g.name());
            }
            for i in 0..4 {
                for j in 0..4 {
                    let v = s.mean(i, j);
                    assert!(v > 0.0 && v < 1.0, "interior value, got {v}");
                }
            }
        }
    }

    #[test]
    fn corpus_spec_round_trip() {
        for kind in ["xor", "coin-xor", "identical", "random", "substitutes"] {
            assert_eq!(parse_corpus_kind(kind).unwrap().id(), kind);
        }
        assert!(parse_corpus_kind("gaussian").is_err());
        let spec = CorpusSpec {
            kind: CorpusKind::Identical,
            rows: 4,
            cols: 4,
            seed: 3,
            generator: None,
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert!(a.label().unwrap().starts_with("identical-n4-seed3"));
    }
}
