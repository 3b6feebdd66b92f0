//! Row-subsampled least-squares recovery of class rates from eigenvalues.
//!
//! The forward model is log-linear: for a selector `μ` over measurement
//! generators, `−log λ_μ = Σ_c A[μ,c] x_c` with `x_c = −log(1 − 2 q_c)` and
//! `A[μ,c]` the anticommutation bit between the selected product and class
//! `c`. Writing `A = (1 − H)/2` with `H` the ±1 character block turns the
//! system into `2y = s·1 − H x` with intercept `s = Σ_c x_c`; the solver
//! works on the augmented matrix `[H | 1]` because the character block is
//! what the isometry diagnostics apply to.
//!
//! All solves go through the SVD path; normal equations would square the
//! condition number of designs that are already near the edge at small
//! row counts.

use crate::code::SpacetimeCode;
use crate::fault::PriorDistribution;
use crate::gf2::BitVec;
use crate::pauli::SpacetimePauli;
use crate::real::{lstsq_solve, RealMatrix};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A subsampled measurement design: random selectors over the measurement
/// generators and the matrices they induce on the classes.
#[derive(Clone, Debug)]
pub struct SubsampleDesign {
    rows: Vec<BitVec>,
    /// 0/1 anticommutation block, q_rows × K.
    a01: RealMatrix,
    /// ±1 character block, q_rows × K.
    signed: RealMatrix,
    seed: u64,
}

/// Recovered class rates with solver diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct RecoveryResult {
    /// `−log(1 − 2 q̄_c)` per class.
    pub x_bar: Vec<f64>,
    /// Recovered rates `q̄_c = (1 − e^{−x̄_c})/2`; always below 1/2.
    pub q_bar: Vec<f64>,
    /// Residual `‖A x̄ − y‖₂` on the original (unaugmented) system.
    pub residual: f64,
    /// Smallest singular value of the augmented design.
    pub sigma_min: f64,
    /// Largest singular value of the augmented design.
    pub sigma_max: f64,
    /// Isometry defect of the character block, from [`rip_constant`].
    pub rip_delta: f64,
    /// True when eigenvalues were clamped to the floor before the log.
    pub tainted: bool,
    /// Rows whose eigenvalue estimates were clamped.
    pub clamped_rows: Vec<usize>,
}

/// Default row count for `k` classes.
#[must_use]
pub fn default_q_rows(k: usize) -> usize {
    (4 * k).max(k + 16)
}

/// Draws `q_rows` selectors uniformly from the nonzero patterns and
/// materializes the induced matrices. Entry `[i][c]` is the
/// anticommutation bit between the product selected by row `i` and the
/// representative of class `c`, which equals the parity of
/// `rows[i] AND syndrome_c`.
///
/// # Errors
/// [`Error::Validation`] when `q_rows` is below the class count or the
/// prior is empty.
pub fn draw_design(
    code: &SpacetimeCode,
    prior: &PriorDistribution,
    q_rows: usize,
    seed: u64,
) -> Result<SubsampleDesign> {
    let k = prior.len();
    if k == 0 {
        return Err(Error::Validation("prior has no classes".into()));
    }
    if q_rows < k {
        return Err(Error::Validation(format!(
            "q_rows = {q_rows} is below the class count {k}"
        )));
    }
    let m = code.syndrome_bits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(q_rows);
    while rows.len() < q_rows {
        let mut mu = BitVec::zeros(m);
        for bit in 0..m {
            if rng.random::<bool>() {
                mu.set(bit, true);
            }
        }
        if !mu.is_zero() {
            rows.push(mu);
        }
    }
    Ok(design_from_rows(prior, m, rows, seed))
}

/// Deterministic design over every selector, the zero row included;
/// used as the exhaustive reference on small instances.
///
/// # Errors
/// [`Error::Guard`] when the selector space exceeds 2^20 rows.
pub fn full_enumeration(code: &SpacetimeCode, prior: &PriorDistribution) -> Result<SubsampleDesign> {
    let m = code.syndrome_bits();
    if m > 20 {
        return Err(Error::Guard(format!(
            "full enumeration needs 2^{m} rows; the guard allows at most 2^20"
        )));
    }
    let rows: Vec<BitVec> = (0..1usize << m)
        .map(|mask| {
            let mut mu = BitVec::zeros(m);
            for bit in 0..m {
                if mask >> bit & 1 == 1 {
                    mu.set(bit, true);
                }
            }
            mu
        })
        .collect();
    Ok(design_from_rows(prior, m, rows, 0))
}

/// Builds a design from explicit selector rows.
///
/// # Panics
/// Panics when a row's length differs from the syndrome width.
#[must_use]
pub fn design_from_rows(
    prior: &PriorDistribution,
    m: usize,
    rows: Vec<BitVec>,
    seed: u64,
) -> SubsampleDesign {
    let k = prior.len();
    let mut a01 = RealMatrix::zeros(rows.len(), k);
    let mut signed = RealMatrix::zeros(rows.len(), k);
    for (i, mu) in rows.iter().enumerate() {
        assert_eq!(mu.len(), m, "selector width mismatch");
        for (c, class) in prior.classes().iter().enumerate() {
            if mu.dot(&class.syndrome) {
                a01.set(i, c, 1.0);
                signed.set(i, c, -1.0);
            } else {
                signed.set(i, c, 1.0);
            }
        }
    }
    SubsampleDesign {
        rows,
        a01,
        signed,
        seed,
    }
}

impl SubsampleDesign {
    /// The selector rows.
    #[must_use]
    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Row count.
    #[must_use]
    pub fn q_rows(&self) -> usize {
        self.rows.len()
    }

    /// Class count.
    #[must_use]
    pub fn k(&self) -> usize {
        self.a01.ncols()
    }

    /// Seed the rows were drawn with (0 for explicit constructions).
    #[must_use]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The 0/1 anticommutation block.
    #[must_use]
    pub fn a01(&self) -> &RealMatrix {
        &self.a01
    }

    /// The ±1 character block.
    #[must_use]
    pub fn signed(&self) -> &RealMatrix {
        &self.signed
    }

    /// The augmented solver matrix `[H | 1]` (ones column last).
    #[must_use]
    pub fn augmented(&self) -> RealMatrix {
        let q = self.q_rows();
        let k = self.k();
        let mut g = RealMatrix::zeros(q, k + 1);
        for i in 0..q {
            for c in 0..k {
                g.set(i, c, self.signed.get(i, c));
            }
            g.set(i, k, 1.0);
        }
        g
    }
}

/// Isometry defect of the normalized character block:
/// `δ̂ = max(σ_max²/q − 1, 1 − σ_min²/q)`.
#[must_use]
pub fn rip_constant(design: &SubsampleDesign) -> f64 {
    let q = design.q_rows() as f64;
    let sv = design.signed.singular_values();
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    (smax * smax / q - 1.0).max(1.0 - smin * smin / q)
}

/// Guaranteed bound on `‖x̄ − x‖₂` when each row of `y` is off by at most
/// `eps` and the augmented design has isometry defect `delta`.
#[must_use]
pub fn recovery_error_bound(delta: f64, eps: f64) -> f64 {
    2.0 * (1.0 + delta).sqrt() / (1.0 - delta) * eps
}

/// Per-class bound on `|q̄_c − q_c|` under the same hypotheses, valid when
/// the true and recovered rates are nonnegative.
#[must_use]
pub fn prior_error_bound(delta: f64, eps: f64) -> f64 {
    (1.0 + delta).sqrt() / (1.0 - delta) * eps
}

/// Solves the augmented system for `y = −log λ̂` per row.
///
/// # Errors
/// [`Error::Numeric`] when a row is not finite, or when the augmented
/// design is column-rank deficient (the message advises increasing
/// `q_rows`).
pub fn recover(design: &SubsampleDesign, y_bar: &[f64]) -> Result<RecoveryResult> {
    recover_inner(design, y_bar, false, Vec::new())
}

/// Converts eigenvalue estimates to `y = −log λ̂` and solves.
///
/// Rows with `λ̂ ≤ 0` are a hard error by default: they mean the shot
/// budget cannot resolve the eigenvalue's sign, and taking the log would
/// manufacture data. With `clamp` set, such rows are clamped to the floor
/// `1/shots` and the result is marked tainted.
///
/// # Errors
/// [`Error::Dimension`] on length mismatch; [`Error::Numeric`] listing the
/// offending rows when clamping is off.
pub fn recover_from_lambdas(
    design: &SubsampleDesign,
    lambda_hats: &[f64],
    shots: usize,
    clamp: bool,
) -> Result<RecoveryResult> {
    if lambda_hats.len() != design.q_rows() {
        return Err(Error::Dimension(format!(
            "{} eigenvalue estimates for {} rows",
            lambda_hats.len(),
            design.q_rows()
        )));
    }
    let bad: Vec<usize> = lambda_hats
        .iter()
        .enumerate()
        .filter(|(_, &l)| l <= 0.0)
        .map(|(i, _)| i)
        .collect();
    if !bad.is_empty() && !clamp {
        return Err(Error::Numeric(format!(
            "eigenvalue estimates are nonpositive on rows {bad:?}; increase \
             shots, or clamp to the 1/shots floor at the cost of a tainted \
             result"
        )));
    }
    let floor = 1.0 / shots.max(1) as f64;
    let y: Vec<f64> = lambda_hats.iter().map(|&l| -l.max(floor).ln()).collect();
    recover_inner(design, &y, !bad.is_empty(), bad)
}

fn recover_inner(
    design: &SubsampleDesign,
    y_bar: &[f64],
    tainted: bool,
    clamped_rows: Vec<usize>,
) -> Result<RecoveryResult> {
    let q = design.q_rows();
    let k = design.k();
    if y_bar.len() != q {
        return Err(Error::Dimension(format!(
            "{} observations for {} rows",
            y_bar.len(),
            q
        )));
    }
    if let Some(i) = y_bar.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("observation {i} is not finite")));
    }
    let g = design.augmented();
    let rhs: Vec<f64> = y_bar.iter().map(|v| 2.0 * v).collect();
    // The intercept is a reparameterization (s = Σ x), so when the ones
    // column happens to fall inside the class block's span the augmented
    // matrix loses rank without losing information; the constrained form
    // is the original 0/1 system, which we fall back to.
    let (x_bar, sol) = match lstsq_solve(&g, &rhs) {
        Ok(sol) => ((0..k).map(|c| -sol.x[c]).collect::<Vec<f64>>(), sol),
        Err(Error::Numeric(_)) => {
            let sol = lstsq_solve(&design.a01, y_bar).map_err(|e| match e {
                Error::Numeric(msg) => Error::Numeric(format!(
                    "{msg}; the design does not pin down the classes, increase q_rows"
                )),
                other => other,
            })?;
            (sol.x.clone(), sol)
        }
        Err(other) => return Err(other),
    };
    let q_bar: Vec<f64> = x_bar.iter().map(|&x| (1.0 - (-x).exp()) / 2.0).collect();
    // residual on the original 0/1 system, not the augmented one
    let ax = design.a01.matvec(&x_bar);
    let residual = ax
        .iter()
        .zip(y_bar)
        .map(|(a, y)| (a - y) * (a - y))
        .sum::<f64>()
        .sqrt();
    Ok(RecoveryResult {
        x_bar,
        q_bar,
        residual,
        sigma_min: sol.sigma_min,
        sigma_max: sol.sigma_max,
        rip_delta: rip_constant(design),
        tainted,
        clamped_rows,
    })
}

/// Class-support pattern of an operator `b`: bit `c` is the
/// anticommutation of class `c`'s representative with `b`. Faithful for
/// every member of each class exactly when no class is split by `b`,
/// which is what logical learnability certifies for `b` in the gauge
/// commutant.
#[must_use]
pub fn class_pattern(prior: &PriorDistribution, b: &SpacetimePauli) -> BitVec {
    let mut v = BitVec::zeros(prior.len());
    for (c, class) in prior.classes().iter().enumerate() {
        if class.representative.symplectic(b) {
            v.set(c, true);
        }
    }
    v
}

/// A reconstructed eigenvalue with its multiplicative error bound.
#[derive(Clone, Debug, Serialize)]
pub struct ReconstructedEigenvalue {
    /// `exp(−Σ_c pattern[c] · x̄_c)`.
    pub lambda: f64,
    /// Bound on `|log λ̂ − log λ|`: `2 ‖pattern‖₂ eps / √(1 − δ̂)`.
    pub log_error_bound: f64,
}

/// Rebuilds the eigenvalue of the operator whose class pattern is given,
/// with the error bound implied by per-row precision `eps` and the
/// design's isometry defect.
///
/// # Errors
/// [`Error::Dimension`] when the pattern length differs from the class
/// count.
pub fn reconstruct_logical_eigenvalue(
    design: &SubsampleDesign,
    result: &RecoveryResult,
    pattern: &BitVec,
    eps: f64,
) -> Result<ReconstructedEigenvalue> {
    if pattern.len() != design.k() {
        return Err(Error::Dimension(format!(
            "pattern has {} bits for {} classes",
            pattern.len(),
            design.k()
        )));
    }
    let exponent: f64 = pattern.ones().map(|c| result.x_bar[c]).sum();
    let norm = (pattern.count_ones() as f64).sqrt();
    let delta = result.rip_delta;
    let bound = if delta < 1.0 {
        2.0 * norm * eps / (1.0 - delta).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(ReconstructedEigenvalue {
        lambda: (-exponent).exp(),
        log_error_bound: bound,
    })
}
