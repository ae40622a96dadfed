//! Bregman generators and the divergences built from them.
//!
//! A generator is a strictly convex differentiable `G: [0,1] → ℝ`. From it:
//!
//! ```text
//! D_G(y‖x)  = G(y) − G(x) − (y−x)·G′(x)        (Bregman divergence)
//! JB_G(a,b) = (G(a)+G(b))/2 − G((a+b)/2)       (Jensen-Bregman divergence)
//! M         = max G − min G on [0,1]            (range)
//! Ĝ(x)      = max {G(a)−G(b) : |a−b| ≤ x}      (gap growth)
//! Ĝ*        = upper concave envelope of Ĝ       (enters the accuracy bound)
//! ```
//!
//! Shipped generators: `squared` (G=x², D_G = squared distance), `kl`
//! (negative Shannon entropy, D_G = binary KL divergence), and the polynomial
//! family `power:r` (G=x^r, r>1). KL's derivative is unbounded at the
//! endpoints; `D_G(y‖x)` with x ∈ {0,1}, y ≠ x is a `+∞` sentinel that
//! propagates through comparisons (∞ ≥ threshold is true) and poisons
//! averages into a reported +∞ rather than a silent NaN. `JB_G` is always
//! finite.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::structure::{InformationStructure, Rectangle};

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A strictly convex differentiable generator on [0,1].
///
/// Construct via [`BregmanGenerator::squared`], [`BregmanGenerator::kl`],
/// [`BregmanGenerator::power`], or [`BregmanGenerator::custom`]; parse CLI
/// names with [`parse_generator`].
#[derive(Clone)]
pub struct BregmanGenerator {
    name: String,
    value: Evaluator,
    deriv: Evaluator,
    range_m: f64,
    argmin: f64,
    symmetric: bool,
}

impl std::fmt::Debug for BregmanGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BregmanGenerator")
            .field("name", &self.name)
            .field("range_m", &self.range_m)
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

impl BregmanGenerator {
    /// G(x) = x²; D_G is the squared distance (y−x)².
    pub fn squared() -> Self {
        BregmanGenerator {
            name: "squared".into(),
            value: Arc::new(|x| x * x),
            deriv: Arc::new(|x| 2.0 * x),
            range_m: 1.0,
            argmin: 0.0,
            symmetric: false,
        }
    }

    /// Negative Shannon entropy G(x) = x ln x + (1−x) ln(1−x), with the
    /// limit value 0 at both endpoints; D_G is the binary KL divergence.
    pub fn kl() -> Self {
        BregmanGenerator {
            name: "kl".into(),
            value: Arc::new(|x| {
                let mut v = 0.0;
                if x > 0.0 {
                    v += x * x.ln();
                }
                if x < 1.0 {
                    v += (1.0 - x) * (1.0 - x).ln();
                }
                v
            }),
            // ln(x/(1−x)): naturally −∞ at 0 and +∞ at 1 in IEEE arithmetic.
            deriv: Arc::new(|x| (x / (1.0 - x)).ln()),
            range_m: std::f64::consts::LN_2,
            argmin: 0.5,
            symmetric: true,
        }
    }

    /// G(x) = x^r for r > 1.
    pub fn power(r: f64) -> Result<Self> {
        if !(r > 1.0) || !r.is_finite() {
            return Err(Error::DomainError(format!(
                "power generator needs exponent r > 1, got {r}"
            )));
        }
        Ok(BregmanGenerator {
            name: format!("power:{r}"),
            value: Arc::new(move |x| x.powf(r)),
            deriv: Arc::new(move |x| r * x.powf(r - 1.0)),
            range_m: 1.0,
            argmin: 0.0,
            symmetric: false,
        })
    }

    /// A user-supplied generator. The evaluators are probed on a grid to
    /// locate the minimum and range and to verify strict convexity; an
    /// evaluator that fails those checks is rejected.
    pub fn custom(
        name: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let value: Evaluator = Arc::new(value);
        let deriv: Evaluator = Arc::new(deriv);
        // Locate the minimum on a fine grid, then sharpen by golden-section.
        const PROBE: usize = 10_000;
        let mut best_x = 0.0;
        let mut best = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for k in 0..=PROBE {
            let x = k as f64 / PROBE as f64;
            let v = value(x);
            if !v.is_finite() {
                return Err(Error::DomainError(format!(
                    "generator value non-finite at {x}"
                )));
            }
            if v < best {
                best = v;
                best_x = x;
            }
            max = max.max(v);
        }
        let (mut lo, mut hi) = (
            (best_x - 1.0 / PROBE as f64).max(0.0),
            (best_x + 1.0 / PROBE as f64).min(1.0),
        );
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..60 {
            let m1 = hi - phi * (hi - lo);
            let m2 = lo + phi * (hi - lo);
            if value(m1) <= value(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let argmin = 0.5 * (lo + hi);
        let range_m = max - value(argmin).min(best);
        let mut g = BregmanGenerator {
            name: name.into(),
            value,
            deriv,
            range_m,
            argmin,
            symmetric: false, // refined below
        };
        g.symmetric = (0..=100).all(|k| {
            let x = k as f64 / 100.0;
            ((g.value)(x) - (g.value)(1.0 - x)).abs() <= 1e-12 * (1.0 + g.range_m)
        });
        g.validate()?;
        Ok(g)
    }

    /// Identifier ("squared", "kl", "power:r", or the custom name).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// M = max G − min G on [0,1].
    pub fn range_m(&self) -> f64 {
        self.range_m
    }

    /// Whether G(x) = G(1−x).
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// G(x).
    pub fn g(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    /// G′(x). May be ±∞ at the endpoints (e.g. KL).
    pub fn dg(&self, x: f64) -> f64 {
        (self.deriv)(x)
    }

    /// D_G(y‖x) without domain validation (callers guarantee y, x ∈ [0,1]).
    /// Returns the +∞ sentinel when G′(x) is infinite and y ≠ x; clamps
    /// float-noise negatives to 0.
    pub fn div(&self, y: f64, x: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&y) && (0.0..=1.0).contains(&x));
        if y == x {
            return 0.0;
        }
        let d = self.dg(x);
        if d.is_infinite() {
            return f64::INFINITY;
        }
        (self.g(y) - self.g(x) - (y - x) * d).max(0.0)
    }

    /// JB_G(a,b) without domain validation. Always finite.
    pub fn jb(&self, a: f64, b: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        (0.5 * (self.g(a) + self.g(b)) - self.g(0.5 * (a + b))).max(0.0)
    }

    /// Verifies strict convexity on a grid of triples and the consistency of
    /// `range_m` against a 10⁴-point grid.
    pub fn validate(&self) -> Result<()> {
        const GRID: usize = 100;
        for ai in 0..GRID - 1 {
            for xi in ai + 1..GRID {
                for bi in xi + 1..=GRID {
                    let (a, x, b) = (
                        ai as f64 / GRID as f64,
                        xi as f64 / GRID as f64,
                        bi as f64 / GRID as f64,
                    );
                    let chord = ((b - x) * self.g(a) + (x - a) * self.g(b)) / (b - a);
                    if !(self.g(x) < chord - 1e-15) {
                        return Err(Error::DomainError(format!(
                            "generator {} is not strictly convex at ({a}, {x}, {b})",
                            self.name
                        )));
                    }
                }
            }
        }
        const PROBE: usize = 10_000;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..=PROBE {
            let v = self.g(k as f64 / PROBE as f64);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !(self.range_m > 0.0) || (self.range_m - (hi - lo)).abs() > 1e-6 {
            return Err(Error::DomainError(format!(
                "generator {}: declared range {} differs from grid range {}",
                self.name,
                self.range_m,
                hi - lo
            )));
        }
        Ok(())
    }
}

/// Parses a CLI generator name: `"squared"`, `"kl"`, or `"power:r"`.
pub fn parse_generator(name: &str) -> Result<BregmanGenerator> {
    match name {
        "squared" => Ok(BregmanGenerator::squared()),
        "kl" => Ok(BregmanGenerator::kl()),
        other => {
            if let Some(rest) = other.strip_prefix("power:") {
                let r: f64 = rest.parse().map_err(|_| {
                    Error::DomainError(format!("cannot parse power exponent from {other:?}"))
                })?;
                BregmanGenerator::power(r)
            } else {
                Err(Error::DomainError(format!(
                    "unknown generator {other:?}; expected squared, kl, or power:r"
                )))
            }
        }
    }
}

/// D_G(y‖x) with domain validation; `+∞` sentinel at derivative singularities.
pub fn bregman(g: &BregmanGenerator, y: f64, x: f64) -> Result<f64> {
    check_unit("bregman", y)?;
    check_unit("bregman", x)?;
    Ok(g.div(y, x))
}

/// JB_G(a,b) with domain validation; symmetric, finite, 0 iff a = b.
pub fn jensen_bregman(g: &BregmanGenerator, a: f64, b: f64) -> Result<f64> {
    check_unit("jensen_bregman", a)?;
    check_unit("jensen_bregman", b)?;
    Ok(g.jb(a, b))
}

fn check_unit(op: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!("{op}: argument {x} outside [0,1]")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// c-approximate triangle inequality
// ---------------------------------------------------------------------------

/// Scans grid triples a < x < b for the minimum of
/// (JB(a,x) + JB(x,b)) / JB(a,b) — an upper bound on the largest c with
/// JB(a,x) + JB(x,b) ≥ c·JB(a,b). For x outside [a,b] the ratio exceeds 1 by
/// interval nesting, so interior x suffices.
pub fn c_approx_min_ratio(g: &BregmanGenerator, grid_step: f64) -> Result<f64> {
    if !(grid_step > 0.0 && grid_step <= 0.1) {
        return Err(Error::DomainError(format!(
            "grid step {grid_step} outside (0, 0.1]"
        )));
    }
    let n = (1.0 / grid_step).round() as usize;
    // JB on grid indices via a half-grid table: with h[i] = G(i/n)/2 and
    // g2[k] = G(k/(2n)), JB(i/n, j/n) = h[i] + h[j] − g2[i+j].
    let g2: Vec<f64> = (0..=2 * n).map(|k| g.g(k as f64 / (2 * n) as f64)).collect();
    let h: Vec<f64> = (0..=n).map(|i| 0.5 * g2[2 * i]).collect();
    let jb = |i: usize, j: usize| (h[i] + h[j] - g2[i + j]).max(0.0);

    let min = (0..n.saturating_sub(1))
        .into_par_iter()
        .map(|a| {
            let mut local = f64::INFINITY;
            for b in (a + 2)..=n {
                let jab = jb(a, b);
                if jab <= 0.0 {
                    continue; // degenerate; strict convexity makes this unreachable
                }
                for x in (a + 1)..b {
                    let ratio = (jb(a, x) + jb(x, b)) / jab;
                    if ratio < local {
                        local = ratio;
                    }
                }
            }
            local
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(min)
}

// ---------------------------------------------------------------------------
// Ĝ and its concave envelope
// ---------------------------------------------------------------------------

/// Tabulated Ĝ and Ĝ* on a uniform grid, queried by linear interpolation.
#[derive(Debug, Clone)]
pub struct EnvelopeTable {
    grid_x: Vec<f64>,
    tilde_g: Vec<f64>,
    tilde_g_star: Vec<f64>,
    range_m: f64,
}

/// Builds the Ĝ / Ĝ* table for a generator.
///
/// Ĝ(x) maximizes G(a)−G(b) over |a−b| ≤ x. For convex G the maximum puts
/// `a` at an endpoint of [0,1] and `b` as close to the argmin x* as the gap
/// allows:
///
/// ```text
/// Ĝ(x) = max( G(0) − G(min(x, x*)),  G(1) − G(max(1−x, x*)) )
/// ```
///
/// which is nondecreasing with Ĝ(0) = 0 and Ĝ(1) = M. Ĝ* is the upper
/// concave envelope of the tabulated points.
pub fn envelope(g: &BregmanGenerator, grid_size: usize) -> Result<EnvelopeTable> {
    if grid_size < 101 {
        return Err(Error::DomainError(format!(
            "envelope grid size {grid_size} < 101"
        )));
    }
    let n = grid_size - 1;
    let grid_x: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let x_star = g.argmin;
    let g0 = g.g(0.0);
    let g1 = g.g(1.0);
    let tilde_g: Vec<f64> = grid_x
        .iter()
        .map(|&x| {
            let left = g0 - g.g(x.min(x_star));
            let right = g1 - g.g((1.0 - x).max(x_star));
            left.max(right).max(0.0)
        })
        .collect();
    let tilde_g_star = upper_concave_envelope(&grid_x, &tilde_g);
    Ok(EnvelopeTable {
        grid_x,
        tilde_g,
        tilde_g_star,
        range_m: g.range_m,
    })
}

/// Upper concave envelope of points with strictly increasing x, evaluated
/// back at every x (hull vertices keep their value; other points get the
/// chord value above them).
fn upper_concave_envelope(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let cross = |o: usize, a: usize, b: usize| -> f64 {
        (xs[a] - xs[o]) * (ys[b] - ys[o]) - (ys[a] - ys[o]) * (xs[b] - xs[o])
    };
    let mut hull: Vec<usize> = Vec::new();
    for p in 0..xs.len() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(xs.len());
    let mut seg = 0;
    for i in 0..xs.len() {
        while seg + 1 < hull.len() && xs[hull[seg + 1]] < xs[i] {
            seg += 1;
        }
        let (l, r) = (hull[seg], hull[(seg + 1).min(hull.len() - 1)]);
        if l == r || xs[i] <= xs[l] {
            out.push(ys[l].max(ys[i]));
        } else {
            let t = (xs[i] - xs[l]) / (xs[r] - xs[l]);
            out.push((ys[l] + t * (ys[r] - ys[l])).max(ys[i]));
        }
    }
    out
}

impl EnvelopeTable {
    /// Grid abscissae.
    pub fn grid_x(&self) -> &[f64] {
        &self.grid_x
    }

    /// Tabulated Ĝ values.
    pub fn tilde_g(&self) -> &[f64] {
        &self.tilde_g
    }

    /// Tabulated Ĝ* values.
    pub fn tilde_g_star(&self) -> &[f64] {
        &self.tilde_g_star
    }

    /// Ĝ(x) by linear interpolation; x is clamped to [0,1].
    pub fn tilde_at(&self, x: f64) -> f64 {
        interpolate(&self.grid_x, &self.tilde_g, x)
    }

    /// Ĝ*(x) by linear interpolation; x is clamped to [0,1].
    pub fn star_at(&self, x: f64) -> f64 {
        interpolate(&self.grid_x, &self.tilde_g_star, x)
    }

    /// Checks the table invariants: Ĝ* ≥ Ĝ pointwise, Ĝ* concave on the
    /// grid, Ĝ*(0)=0, Ĝ*(1)=M.
    pub fn validate(&self) -> Result<()> {
        let n = self.grid_x.len();
        for i in 0..n {
            if self.tilde_g_star[i] < self.tilde_g[i] - 1e-12 {
                return Err(Error::DomainError(format!(
                    "envelope below its source at grid index {i}"
                )));
            }
        }
        for i in 1..n - 1 {
            let second = self.tilde_g_star[i + 1] - 2.0 * self.tilde_g_star[i]
                + self.tilde_g_star[i - 1];
            if second > 1e-9 {
                return Err(Error::DomainError(format!(
                    "envelope not concave at grid index {i} (second difference {second:e})"
                )));
            }
        }
        if self.tilde_g_star[0].abs() > 1e-12 {
            return Err(Error::DomainError("envelope nonzero at 0".into()));
        }
        if (self.tilde_g_star[n - 1] - self.range_m).abs() > 1e-9 {
            return Err(Error::DomainError(format!(
                "envelope at 1 is {} but the range is {}",
                self.tilde_g_star[n - 1],
                self.range_m
            )));
        }
        Ok(())
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let n = xs.len() - 1;
    let pos = x * n as f64;
    let i = (pos.floor() as usize).min(n - 1);
    let t = pos - i as f64;
    ys[i] + t * (ys[i + 1] - ys[i])
}

// ---------------------------------------------------------------------------
// Pythagorean residual
// ---------------------------------------------------------------------------

/// Residual of the conditional-expectation Pythagorean identity on a
/// rectangle: with A = μ_στ, B = μ_σT, C = μ_ST and expectations conditioned
/// on the rectangle,
///
/// ```text
/// E[D_G(A‖C)] = E[D_G(A‖B)] + E[D_G(B‖C)]
/// ```
///
/// Returns |E[D_G(A‖C)] − E[D_G(A‖B)] − E[D_G(B‖C)]|. Cells where any of the
/// three divergences is infinite (KL with an endpoint expectation) are
/// excluded and the expectation renormalized over the finite sub-event.
pub fn pythagorean_residual(
    s: &InformationStructure,
    g: &BregmanGenerator,
    rect: &Rectangle,
) -> Result<f64> {
    let c = s.block_mean(rect)?;
    let mut included_mass = 0.0;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for &i in rect.rows() {
        if s.row_mass(i, rect.cols()) <= 0.0 {
            continue;
        }
        let b = s.row_mean(i, rect.cols())?;
        for &j in rect.cols() {
            let p = s.prob(i, j);
            if p <= 0.0 {
                continue;
            }
            let a = s.mean(i, j);
            let (dac, dab, dbc) = (g.div(a, c), g.div(a, b), g.div(b, c));
            if !dac.is_finite() || !dab.is_finite() || !dbc.is_finite() {
                continue;
            }
            included_mass += p;
            lhs += p * dac;
            rhs += p * (dab + dbc);
        }
    }
    if included_mass <= 0.0 {
        return Err(Error::ZeroMassSlice(
            "no finite-divergence cells in rectangle".into(),
        ));
    }
    Ok(((lhs - rhs) / included_mass).abs())
}
