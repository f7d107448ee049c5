//! Spherical Fourier transform, its inverse, and the Plancherel pairing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gelfand::{BiInvariantFunction, SphericalTable};
use crate::group::weighted_lp;

/// Which measure the spectral side carries.
///
/// `Plancherel` weights spherical function `φ_i` by `μ_i = 1/‖φ_i‖²`;
/// `Counting` gives every spherical function weight 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Plancherel,
    Counting,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Plancherel => "plancherel",
            Convention::Counting => "counting",
        }
    }

    /// Spectral weight of row `i` under this convention.
    pub fn weight(self, table: &SphericalTable, i: usize) -> f64 {
        match self {
            Convention::Plancherel => table.weights()[i],
            Convention::Counting => 1.0,
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plancherel" => Ok(Convention::Plancherel),
            "counting" => Ok(Convention::Counting),
            other => Err(Error::Parse(format!("unknown convention {other:?}"))),
        }
    }
}

/// Transform coefficients, indexed like the rows of a [`SphericalTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    coeffs: Vec<Complex64>,
}

impl SpectralVector {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `ℓ^p` norm under `convention`'s weights; `p = ∞` is the plain sup.
    pub fn norm(&self, table: &SphericalTable, convention: Convention, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        Ok(spectral_norm(&self.coeffs, table, convention, p))
    }

    pub(crate) fn from_raw(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }
}

pub(crate) fn spectral_norm(
    coeffs: &[Complex64],
    table: &SphericalTable,
    convention: Convention,
    p: f64,
) -> f64 {
    if p.is_infinite() {
        return coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    }
    weighted_lp(coeffs.iter().enumerate().map(|(i, c)| (convention.weight(table, i), c.norm())), p)
}

fn check_len(len: usize, table: &SphericalTable) -> Result<()> {
    if len != table.len() {
        return Err(Error::DimensionMismatch {
            expected: table.len(),
            actual: len,
        });
    }
    Ok(())
}

/// `f̂(φ_i) = (1/|G|) Σ_x f(x) φ_i(x⁻¹)`.
pub fn sft(f: &BiInvariantFunction, table: &SphericalTable) -> Result<SpectralVector> {
    check_len(f.len(), table)?;
    Ok(SpectralVector::from_raw(sft_raw(f.coords(), table)))
}

pub(crate) fn sft_raw(f: &[Complex64], table: &SphericalTable) -> Vec<Complex64> {
    let pair = table.pair();
    let w = pair.class_weights();
    table
        .values()
        .iter()
        .map(|phi| {
            f.iter()
                .enumerate()
                .map(|(k, v)| v * phi[pair.inverse_class(k)] * w[k])
                .sum()
        })
        .collect()
}

/// `⟨f, φ_i⟩_{L²}`, the coefficient used by the counting-measure multiplier.
///
/// Agrees with [`sft`] whenever `φ_i(x⁻¹) = conj φ_i(x)`.
pub fn inner_coefficients(f: &BiInvariantFunction, table: &SphericalTable) -> Result<SpectralVector> {
    check_len(f.len(), table)?;
    let pair = table.pair();
    Ok(SpectralVector::from_raw(
        table
            .values()
            .iter()
            .map(|phi| pair.inner_raw(f.coords(), phi))
            .collect(),
    ))
}

/// Forward transform under `convention`: [`sft`] or [`inner_coefficients`].
pub fn transform(
    f: &BiInvariantFunction,
    table: &SphericalTable,
    convention: Convention,
) -> Result<SpectralVector> {
    match convention {
        Convention::Plancherel => sft(f, table),
        Convention::Counting => inner_coefficients(f, table),
    }
}

/// `f(x) = Σ_i μ_i c_i φ_i(x)`.
pub fn inverse_sft(c: &SpectralVector, table: &SphericalTable) -> Result<BiInvariantFunction> {
    check_len(c.len(), table)?;
    Ok(BiInvariantFunction::from_raw(synthesize(
        c.coeffs(),
        table,
        Convention::Plancherel,
    )))
}

/// `Σ_i w_i c_i φ_i` with `w_i` the convention weight.
pub(crate) fn synthesize(
    c: &[Complex64],
    table: &SphericalTable,
    convention: Convention,
) -> Vec<Complex64> {
    let s = table.pair().num_cosets();
    let mut out = vec![Complex64::new(0.0, 0.0); s];
    for (i, (ci, phi)) in c.iter().zip(table.values()).enumerate() {
        let scaled = ci * convention.weight(table, i);
        for (o, p) in out.iter_mut().zip(phi) {
            *o += scaled * p;
        }
    }
    out
}

/// `(Σ_i μ_i f̂_i conj ĝ_i, ⟨f, g⟩_{L²})`; equal by the Plancherel theorem.
pub fn plancherel_pairing(
    f: &BiInvariantFunction,
    g: &BiInvariantFunction,
    table: &SphericalTable,
) -> Result<(Complex64, Complex64)> {
    let fh = sft(f, table)?;
    let gh = sft(g, table)?;
    let lhs = fh
        .coeffs()
        .iter()
        .zip(gh.coeffs())
        .zip(table.weights())
        .map(|((a, b), mu)| a * b.conj() * mu)
        .sum();
    Ok((lhs, table.pair().inner(f, g)))
}
