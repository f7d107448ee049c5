//! Singular values, Schatten norms, exact and sampled operator norms, and trace.
//!
//! Singular values are taken in the true `L²(G)` inner product: the operator
//! matrix is formed in the orthonormal basis `φ_i/‖φ_i‖` before the SVD. The
//! raw coset-coordinate matrix is only similar to the operator, not unitarily
//! equivalent, and would give the wrong values.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gelfand::BiInvariantFunction;
use crate::group::weighted_lp;
use crate::multiplier::MultiplierOperator;

/// Agreement required between the analytic and dense singular values.
pub const SPECTRAL_TOL: f64 = 1e-9;

/// Default Schatten exponents.
pub const DEFAULT_P_GRID: [f64; 6] = [1.0, 4.0 / 3.0, 2.0, 3.0, 4.0, f64::INFINITY];

const JACOBI_SWEEPS: usize = 64;

/// Singular values of a dense complex matrix by one-sided (Hestenes) Jacobi.
///
/// Column pairs are rotated until mutually orthogonal; the column norms are
/// then the singular values. Returned in descending order.
pub fn jacobi_singular_values(matrix: &DMatrix<Complex64>) -> Vec<f64> {
    let mut cols: Vec<Vec<Complex64>> = matrix
        .column_iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    let n = cols.len();
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|v| v.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|v| v.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate the phase out of γ, then apply the real rotation.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                for (ap, aq) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let x = *ap;
                    let y = *aq * phase;
                    *ap = x * c - y * s;
                    *aq = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// `|eigenvalues|` sorted descending: exact for a normal operator.
pub fn analytic_singular_values(op: &MultiplierOperator<'_>) -> Vec<f64> {
    let mut sv: Vec<f64> = op.eigenvalues().iter().map(|v| v.norm()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Matrix `⟨T e_j, e_i⟩` in the orthonormal basis `e_i = φ_i √μ_i`,
/// with `T` applied through its kernel.
pub fn orthonormal_matrix(op: &MultiplierOperator<'_>) -> Result<DMatrix<Complex64>> {
    let table = op.table();
    let pair = table.pair();
    let s = table.len();
    let basis: Vec<BiInvariantFunction> = (0..s)
        .map(|i| {
            let scale = table.weights()[i].sqrt();
            BiInvariantFunction::new(table.values()[i].iter().map(|v| v * scale).collect())
        })
        .collect::<Result<_>>()?;
    let images: Vec<BiInvariantFunction> = basis
        .iter()
        .map(|e| op.apply_kernel(e))
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(s, s, |i, j| pair.inner(&images[j], &basis[i])))
}

/// Dense-SVD singular values, checked against the analytic formula.
pub fn singular_values(op: &MultiplierOperator<'_>) -> Result<Vec<f64>> {
    let dense = jacobi_singular_values(&orthonormal_matrix(op)?);
    let analytic = analytic_singular_values(op);
    let scale = 1.0f64.max(analytic.first().copied().unwrap_or(0.0));
    let gap = dense
        .iter()
        .zip(&analytic)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if gap > SPECTRAL_TOL * scale {
        return Err(Error::SpectralInconsistency(gap));
    }
    Ok(dense)
}

/// `(Σ s_k^p)^{1/p}`, or `s_1` for `p = ∞`.
pub fn schatten_from_singular_values(sv: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(weighted_lp(sv.iter().map(|&v| (1.0, v)), p))
}

pub fn schatten_norm(op: &MultiplierOperator<'_>, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    schatten_from_singular_values(&singular_values(op)?, p)
}

/// Exact `L^{1,♮} → L^{∞,♮}` norm: the largest kernel entry.
///
/// Normalized coset indicators `(|G|/|C_b|)·1_{C_b}` have unit `L¹` norm and
/// are mapped to column `b` of the kernel, so the bound is attained.
pub fn op_norm_1_inf(op: &MultiplierOperator<'_>) -> f64 {
    op.op_norm_1_inf()
}

/// A sampled lower bound on `‖T‖_{p→q}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampledNorm {
    pub p: f64,
    pub q: f64,
    pub value: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Per-trial generator: stream `trial` of the seeded ChaCha generator.
pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub(crate) fn gaussian_coords(rng: &mut ChaCha8Rng, s: usize) -> Vec<Complex64> {
    (0..s)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect()
}

/// `max ‖T f‖_q / ‖f‖_p` over the coset indicators, the eigenfunction of
/// largest `|eigenvalue|`, and `trials` complex-Gaussian bi-invariant `f`.
pub fn sampled_norm_lower_bound(
    op: &MultiplierOperator<'_>,
    p: f64,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<SampledNorm> {
    for e in [p, q] {
        if e.is_nan() || e < 1.0 {
            return Err(Error::InvalidExponent(e));
        }
    }
    let table = op.table();
    let pair = table.pair();
    let s = table.len();
    let mut candidates: Vec<BiInvariantFunction> = (0..s).map(|c| pair.indicator(c)).collect();
    let argmax = op
        .eigenvalues()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    candidates.push(table.row(argmax));
    let mut best = 0.0f64;
    let mut consider = |f: &BiInvariantFunction| -> Result<()> {
        let denom = pair.lp_norm(f, p)?;
        if denom > 0.0 {
            best = best.max(pair.lp_norm(&op.apply_kernel(f)?, q)? / denom);
        }
        Ok(())
    };
    for f in &candidates {
        consider(f)?;
    }
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        consider(&BiInvariantFunction::new(gaussian_coords(&mut rng, s))?)?;
    }
    Ok(SampledNorm {
        p,
        q,
        value: best,
        trials,
        seed,
    })
}

/// `Σ_i eigenvalues[i]`, cross-checked against `Σ_k ⟨T e_k, e_k⟩` over the
/// orthonormal coset basis `e_k = √(|G|/|C_k|)·1_{C_k}`.
pub fn trace(op: &MultiplierOperator<'_>) -> Result<Complex64> {
    let spectral: Complex64 = op.eigenvalues().iter().sum();
    let basis = trace_in_coset_basis(op)?;
    let scale = 1.0 + op.eigenvalues().iter().map(|v| v.norm()).sum::<f64>();
    let gap = (spectral - basis).norm();
    if gap > 1e-10 * scale {
        return Err(Error::SpectralInconsistency(gap));
    }
    Ok(spectral)
}

pub fn trace_in_coset_basis(op: &MultiplierOperator<'_>) -> Result<Complex64> {
    let pair = op.table().pair();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, w) in pair.class_weights().iter().enumerate() {
        let mut coords = vec![Complex64::new(0.0, 0.0); pair.num_cosets()];
        coords[k] = Complex64::new(1.0 / w.sqrt(), 0.0);
        let e = BiInvariantFunction::new(coords)?;
        acc += pair.inner(&op.apply_kernel(&e)?, &e);
    }
    Ok(acc)
}

/// Spectral summary of one operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub convention: &'static str,
    pub singular_values: Vec<f64>,
    /// `(p, ‖T‖_{S_p})` pairs; `p = ∞` is serialized as `null`.
    pub schatten: Vec<(Option<f64>, f64)>,
    pub op_norm_2_2: f64,
    pub op_norm_1_inf: f64,
    pub trace: [f64; 2],
    pub sampled_norms: Vec<SampledNorm>,
}

/// Singular values, Schatten norms on `p_grid`, exact norms, trace, and
/// sampled lower bounds for each `(p, q)` in `sampled`.
pub fn spectral_report(
    op: &MultiplierOperator<'_>,
    p_grid: &[f64],
    sampled: &[(f64, f64)],
    trials: usize,
    seed: u64,
) -> Result<SpectralReport> {
    let sv = singular_values(op)?;
    let schatten = p_grid
        .iter()
        .map(|&p| Ok((p.is_finite().then_some(p), schatten_from_singular_values(&sv, p)?)))
        .collect::<Result<_>>()?;
    let tr = trace(op)?;
    Ok(SpectralReport {
        convention: op.convention().as_str(),
        op_norm_2_2: sv.first().copied().unwrap_or(0.0),
        singular_values: sv,
        schatten,
        op_norm_1_inf: op_norm_1_inf(op),
        trace: [tr.re, tr.im],
        sampled_norms: sampled
            .iter()
            .map(|&(p, q)| sampled_norm_lower_bound(op, p, q, trials, seed))
            .collect::<Result<_>>()?,
    })
}
