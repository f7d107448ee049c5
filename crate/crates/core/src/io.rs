//! JSON and CSV file formats.
//!
//! Complex numbers are always `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gelfand::{double_cosets, subgroup_from_generators, BiInvariantFunction, GelfandPair, SphericalTable};
use crate::group::{build_group, GroupFunction, GroupOptions};
use crate::multiplier::Multiplier;
use crate::transform::{Convention, SpectralVector};

pub type Pair2 = [f64; 2];

pub fn to_pairs(values: &[Complex64]) -> Vec<Pair2> {
    values.iter().map(|v| [v.re, v.im]).collect()
}

pub fn from_pairs(values: &[Pair2]) -> Vec<Complex64> {
    values.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

/// `{"degree": n, "group_generators": [[...]], "subgroup_generators": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub group_generators: Vec<Vec<u32>>,
    #[serde(default)]
    pub subgroup_generators: Vec<Vec<u32>>,
}

impl GroupFile {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(bytes)?)
    }

    /// Builds the group, closes the subgroup, and splits into double cosets.
    pub fn build(&self, options: &GroupOptions) -> Result<GelfandPair> {
        let group = build_group(self.degree, &self.group_generators, options)?;
        for g in &self.subgroup_generators {
            if g.len() != self.degree {
                return Err(Error::InvalidPermutation(format!(
                    "subgroup generator {g:?} has the wrong degree"
                )));
            }
        }
        let k = subgroup_from_generators(&group, &self.subgroup_generators)?;
        double_cosets(&group, &k)
    }
}

/// Whether function values are listed per group element or per double coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Group,
    Coset,
}

/// `{"basis": "group" | "coset", "values": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Basis>,
    pub values: Vec<Pair2>,
}

impl FunctionFile {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(bytes)?)
    }

    /// Reads the values as a bi-invariant function on `pair`.
    ///
    /// Group-basis input is projected onto the bi-invariant subspace. Without
    /// an explicit basis the length decides (`|G|` or the coset count).
    pub fn resolve(&self, pair: &GelfandPair) -> Result<(BiInvariantFunction, Basis)> {
        let n = pair.group().order();
        let s = pair.num_cosets();
        let basis = match self.basis {
            Some(b) => b,
            None if self.values.len() == s => Basis::Coset,
            None if self.values.len() == n => Basis::Group,
            None => {
                return Err(Error::DimensionMismatch {
                    expected: s,
                    actual: self.values.len(),
                })
            }
        };
        let values = from_pairs(&self.values);
        let f = match basis {
            Basis::Coset => {
                if values.len() != s {
                    return Err(Error::DimensionMismatch {
                        expected: s,
                        actual: values.len(),
                    });
                }
                BiInvariantFunction::new(values)?
            }
            Basis::Group => pair.project(&GroupFunction::new(values)?)?,
        };
        Ok((f, basis))
    }

    /// Serializes `f` in the requested basis.
    pub fn from_function(f: &BiInvariantFunction, pair: &GelfandPair, basis: Basis) -> Result<Self> {
        let values = match basis {
            Basis::Coset => to_pairs(f.coords()),
            Basis::Group => to_pairs(pair.expand(f)?.values()),
        };
        Ok(Self {
            basis: Some(basis),
            values,
        })
    }
}

/// `{"convention": "plancherel" | "counting", "values": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierFile {
    pub convention: Convention,
    pub values: Vec<Pair2>,
}

impl MultiplierFile {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn multiplier(&self) -> Result<Multiplier> {
        Multiplier::new(from_pairs(&self.values))
    }
}

/// `{"convention": ..., "coeffs": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFile {
    pub convention: Convention,
    pub coeffs: Vec<Pair2>,
}

impl SpectralFile {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn new(convention: Convention, v: &SpectralVector) -> Self {
        Self {
            convention,
            coeffs: to_pairs(v.coeffs()),
        }
    }

    pub fn vector(&self) -> Result<SpectralVector> {
        SpectralVector::new(from_pairs(&self.coeffs))
    }
}

/// JSON mirror of a [`SphericalTable`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalTableFile {
    pub order: usize,
    pub subgroup_order: usize,
    pub coset_sizes: Vec<usize>,
    pub values: Vec<Vec<Pair2>>,
    pub l2_norms_sq: Vec<f64>,
    pub weights: Vec<f64>,
    pub positive_definite: Vec<bool>,
    pub positive_definite_sampled: bool,
    pub residuals: Vec<f64>,
}

impl From<&SphericalTable> for SphericalTableFile {
    fn from(t: &SphericalTable) -> Self {
        Self {
            order: t.pair().group().order(),
            subgroup_order: t.pair().subgroup().len(),
            coset_sizes: t.pair().coset_sizes(),
            values: t.values().iter().map(|r| to_pairs(r)).collect(),
            l2_norms_sq: t.l2_norms_sq().to_vec(),
            weights: t.weights().to_vec(),
            positive_definite: t.positive_definite().to_vec(),
            positive_definite_sampled: t.psd_sampled(),
            residuals: t.residuals().to_vec(),
        }
    }
}

/// One CSV row per spherical function: index, interleaved re/im per coset,
/// `‖φ‖²`, `μ`, positive-definite flag, functional-equation residual.
pub fn spherical_table_csv(t: &SphericalTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let s = t.pair().num_cosets();
    let mut header = vec!["index".to_string()];
    for c in 0..s {
        header.push(format!("re_{c}"));
        header.push(format!("im_{c}"));
    }
    header.extend(["norm_sq", "mu", "positive_definite", "residual"].map(String::from));
    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for (i, row) in t.values().iter().enumerate() {
        let mut rec = vec![i.to_string()];
        for v in row {
            rec.push(v.re.to_string());
            rec.push(v.im.to_string());
        }
        rec.push(t.l2_norms_sq()[i].to_string());
        rec.push(t.weights()[i].to_string());
        rec.push(t.positive_definite()[i].to_string());
        rec.push(t.residuals()[i].to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::BuiltinPair;
    use crate::gelfand::compute_spherical_functions;

    fn s3() -> GelfandPair {
        BuiltinPair::Sym(3).group_file().build(&GroupOptions::default()).unwrap()
    }

    #[test]
    fn group_file_roundtrip() {
        let text = r#"{"degree": 3, "group_generators": [[1,2,0],[1,0,2]], "subgroup_generators": [[1,0,2]]}"#;
        let file = GroupFile::parse(text.as_bytes()).unwrap();
        let pair = file.build(&GroupOptions::default()).unwrap();
        assert_eq!(pair.coset_sizes(), vec![2, 4]);
        assert!(GroupFile::parse(b"{\"degree\": 3}").is_err());
        assert!(GroupFile::parse(b"not json").is_err());
        let bad = r#"{"degree": 3, "group_generators": [[1,2,0]], "subgroup_generators": [[1,0,2]]}"#;
        assert!(matches!(
            GroupFile::parse(bad.as_bytes()).unwrap().build(&GroupOptions::default()),
            Err(Error::NotASubgroup(_))
        ));
    }

    #[test]
    fn function_file_bases() {
        let pair = s3();
        let coset = FunctionFile::parse(br#"{"basis": "coset", "values": [[1,0],[-0.5,0]]}"#).unwrap();
        let (f, b) = coset.resolve(&pair).unwrap();
        assert_eq!(b, Basis::Coset);
        assert_eq!(f.coords()[1], Complex64::new(-0.5, 0.0));

        let group = FunctionFile::parse(br#"{"values": [[6,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#).unwrap();
        let (f, b) = group.resolve(&pair).unwrap();
        assert_eq!(b, Basis::Group);
        assert_eq!(f.coords(), &[Complex64::new(3.0, 0.0), Complex64::new(0.0, 0.0)]);

        let odd = FunctionFile::parse(br#"{"values": [[1,0],[1,0],[1,0]]}"#).unwrap();
        assert!(matches!(odd.resolve(&pair), Err(Error::DimensionMismatch { .. })));
        let lie = FunctionFile::parse(br#"{"basis": "group", "values": [[1,0],[1,0]]}"#).unwrap();
        assert!(matches!(lie.resolve(&pair), Err(Error::DomainMismatch { .. })));

        let back = FunctionFile::from_function(&f, &pair, Basis::Group).unwrap();
        assert_eq!(back.values.len(), 6);
    }

    #[test]
    fn multiplier_and_spectral_files() {
        let m = MultiplierFile::parse(br#"{"convention": "counting", "values": [[1,0],[1,0]]}"#).unwrap();
        assert_eq!(m.convention, Convention::Counting);
        assert_eq!(m.multiplier().unwrap().len(), 2);
        assert!(MultiplierFile::parse(br#"{"convention": "haar", "values": []}"#).is_err());
        let v = SpectralFile::parse(br#"{"convention": "plancherel", "coeffs": [[0,0],[0.5,0]]}"#).unwrap();
        let text = serde_json::to_string(&SpectralFile::new(v.convention, &v.vector().unwrap())).unwrap();
        assert_eq!(text, r#"{"convention":"plancherel","coeffs":[[0.0,0.0],[0.5,0.0]]}"#);
    }

    #[test]
    fn table_exports() {
        let t = compute_spherical_functions(&s3(), 0, 1e-6).unwrap();
        let csv = spherical_table_csv(&t).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "index,re_0,im_0,re_1,im_1,norm_sq,mu,positive_definite,residual");
        assert!(lines[2].starts_with("1,1,0,"));
        let json = serde_json::to_value(SphericalTableFile::from(&t)).unwrap();
        assert_eq!(json["coset_sizes"], serde_json::json!([2, 4]));
        assert_eq!(json["values"].as_array().unwrap().len(), 2);
    }
}
