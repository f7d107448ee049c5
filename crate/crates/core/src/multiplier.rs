//! Spherical Fourier multipliers `T_m` under both spectral conventions.
//!
//! Under the Plancherel convention `T_m f = Σ_i μ_i m_i f̂_i φ_i`, so `T_m`
//! acts on `φ_j` with eigenvalue `m_j`. Under the counting convention
//! `T_m f = Σ_i m_i ⟨f, φ_i⟩ φ_i` and the eigenvalue on `φ_j` becomes
//! `m_j ‖φ_j‖²`. Both operators act on bi-invariant functions only.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gelfand::{BiInvariantFunction, SphericalTable};
use crate::transform::{sft_raw, spectral_norm, synthesize, transform, Convention};

/// Relative tolerance of the built-in kernel/spectral cross-check.
pub const APPLY_TOL: f64 = 1e-10;

/// A symbol `m`, one value per spherical function.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplier {
    values: Vec<Complex64>,
}

impl Multiplier {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { values })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(s: usize, value: Complex64) -> Self {
        Self {
            values: vec![value; s],
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(Complex64::conj).collect(),
        }
    }

    /// Pointwise product `m·m'`.
    pub fn product(&self, other: &Self) -> Self {
        Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }

    /// `α m + β m'`.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        }
    }

    /// `[(Re m)₊, (Re m)₋, (Im m)₊, (Im m)₋]`, so that
    /// `m = p₀ − p₁ + i(p₂ − p₃)` with every part nonnegative.
    pub fn sign_parts(&self) -> [Self; 4] {
        let part = |f: fn(&Complex64) -> f64| Self {
            values: self.values.iter().map(|v| Complex64::new(f(v), 0.0)).collect(),
        };
        [
            part(|v| v.re.max(0.0)),
            part(|v| (-v.re).max(0.0)),
            part(|v| v.im.max(0.0)),
            part(|v| (-v.im).max(0.0)),
        ]
    }

    /// `‖m‖_{ℓ^p}` weighted by `convention` (`L^p(μ)` for Plancherel).
    pub fn norm(&self, table: &SphericalTable, convention: Convention, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if self.len() != table.len() {
            return Err(Error::DimensionMismatch {
                expected: table.len(),
                actual: self.len(),
            });
        }
        Ok(spectral_norm(&self.values, table, convention, p))
    }
}

/// `T_m` bound to a spherical table, with its spectrum and bi-invariant kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierOperator<'t> {
    multiplier: Multiplier,
    convention: Convention,
    table: &'t SphericalTable,
    eigenvalues: Vec<Complex64>,
    kernel: DMatrix<Complex64>,
}

/// Builds `T_m`; the kernel is `k(x,y) = Σ_i w_i m_i φ_i(x) φ_i(y⁻¹)` on class representatives.
pub fn build_operator<'t>(
    m: &Multiplier,
    table: &'t SphericalTable,
    convention: Convention,
) -> Result<MultiplierOperator<'t>> {
    let s = table.len();
    if m.len() != s {
        return Err(Error::DimensionMismatch {
            expected: s,
            actual: m.len(),
        });
    }
    let eigenvalues: Vec<Complex64> = match convention {
        Convention::Plancherel => m.values.clone(),
        Convention::Counting => m
            .values
            .iter()
            .zip(table.l2_norms_sq())
            .map(|(v, n)| v * n)
            .collect(),
    };
    let pair = table.pair();
    let rows = table.values();
    let left = DMatrix::from_fn(s, s, |a, i| rows[i][a] * m.values[i] * convention.weight(table, i));
    let right = DMatrix::from_fn(s, s, |i, b| rows[i][pair.inverse_class(b)]);
    let kernel = left * right;
    Ok(MultiplierOperator {
        multiplier: m.clone(),
        convention,
        table,
        eigenvalues,
        kernel,
    })
}

impl<'t> MultiplierOperator<'t> {
    pub fn multiplier(&self) -> &Multiplier {
        &self.multiplier
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn table(&self) -> &'t SphericalTable {
        self.table
    }

    /// Eigenvalue of `T_m` on each spherical function.
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// `kernel[(a, b)] = k(x_a, y)` for any `y` in class `b`.
    pub fn kernel(&self) -> &DMatrix<Complex64> {
        &self.kernel
    }

    fn check(&self, f: &BiInvariantFunction) -> Result<()> {
        if f.len() != self.table.len() {
            return Err(Error::DimensionMismatch {
                expected: self.table.len(),
                actual: f.len(),
            });
        }
        Ok(())
    }

    /// `Σ_i w_i m_i c_i φ_i`, with `c = f̂` (Plancherel) or `c_i = ⟨f, φ_i⟩` (counting).
    pub fn apply_spectral(&self, f: &BiInvariantFunction) -> Result<BiInvariantFunction> {
        self.check(f)?;
        let coeffs = transform(f, self.table, self.convention)?;
        let scaled: Vec<Complex64> = coeffs
            .coeffs()
            .iter()
            .zip(&self.multiplier.values)
            .map(|(c, m)| c * m)
            .collect();
        Ok(BiInvariantFunction::from_raw(synthesize(
            &scaled,
            self.table,
            self.convention,
        )))
    }

    /// `(T_m f)(x) = (1/|G|) Σ_y k(x,y) f(y)`.
    pub fn apply_kernel(&self, f: &BiInvariantFunction) -> Result<BiInvariantFunction> {
        self.check(f)?;
        let w = self.table.pair().class_weights();
        let s = self.table.len();
        Ok(BiInvariantFunction::from_raw(
            (0..s)
                .map(|a| {
                    (0..s)
                        .map(|b| self.kernel[(a, b)] * f.coords()[b] * w[b])
                        .sum()
                })
                .collect(),
        ))
    }

    /// Applies `T_m`, cross-checking the spectral and kernel formulas.
    pub fn apply(&self, f: &BiInvariantFunction) -> Result<BiInvariantFunction> {
        let spectral = self.apply_spectral(f)?;
        let kernel = self.apply_kernel(f)?;
        let scale = 1.0
            + f.coords().iter().map(|v| v.norm()).fold(0.0, f64::max)
                * self.kernel.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let gap = spectral
            .coords()
            .iter()
            .zip(kernel.coords())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if gap > APPLY_TOL * scale {
            return Err(Error::KernelMismatch(gap));
        }
        Ok(spectral)
    }

    /// `T_m* = T_{m̄}` under the same convention.
    pub fn adjoint(&self) -> MultiplierOperator<'t> {
        build_operator(&self.multiplier.conj(), self.table, self.convention)
            .expect("conjugate has the same length")
    }

    /// `max_{a,b} |k(x_a, y_b)|`, the exact `L^{1,♮} → L^{∞,♮}` norm.
    pub fn op_norm_1_inf(&self) -> f64 {
        self.kernel.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Defects of `ℱ(T_m f) = m·f̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalDefect {
    /// Against `m_i f̂_i` (Plancherel) or `m_i ‖φ_i‖² f̂_i` (counting).
    pub corrected: f64,
    /// Against `m_i f̂_i` regardless of convention.
    pub uncorrected: f64,
}

/// Measures the diagonal identity for `op` on `f`.
pub fn diagonal_identity_defect(
    op: &MultiplierOperator<'_>,
    f: &BiInvariantFunction,
) -> Result<DiagonalDefect> {
    let image = op.apply(f)?;
    let lhs = sft_raw(image.coords(), op.table);
    let fh = sft_raw(f.coords(), op.table);
    let mut corrected = 0.0f64;
    let mut uncorrected = 0.0f64;
    for i in 0..lhs.len() {
        corrected = corrected.max((lhs[i] - op.eigenvalues[i] * fh[i]).norm());
        uncorrected = uncorrected.max((lhs[i] - op.multiplier.values[i] * fh[i]).norm());
    }
    Ok(DiagonalDefect {
        corrected,
        uncorrected,
    })
}

/// `(‖T_m(f∗g) − (T_m f)∗g‖_∞, ‖T_{m1}f ∗ T_{m2}g − T_{m1m2}(f∗g)‖_∞)` with `m = m1`.
pub fn composition_defects(
    m1: &Multiplier,
    m2: &Multiplier,
    f: &BiInvariantFunction,
    g: &BiInvariantFunction,
    table: &SphericalTable,
    convention: Convention,
) -> Result<(f64, f64)> {
    let pair = table.pair();
    let t1 = build_operator(m1, table, convention)?;
    let t2 = build_operator(m2, table, convention)?;
    let t12 = build_operator(&m1.product(m2), table, convention)?;
    let fg = pair.convolve(f, g)?;
    let sup = |a: &BiInvariantFunction, b: &BiInvariantFunction| {
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    };
    let t1f = t1.apply(f)?;
    let d1 = sup(&t1.apply(&fg)?, &pair.convolve(&t1f, g)?);
    let d2 = sup(&pair.convolve(&t1f, &t2.apply(g)?)?, &t12.apply(&fg)?);
    Ok((d1, d2))
}
