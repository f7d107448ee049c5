//! Double cosets, the K-bi-invariant convolution algebra and its spherical functions.
//!
//! A K-bi-invariant function is stored by its values on the double cosets
//! `KxK`; class 0 is always `K` itself. The algebra of such functions is
//! commutative exactly when `(G, K)` is a Gelfand pair, and its joint
//! eigenfunctions, normalized to 1 at the identity, are the spherical
//! functions.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{weighted_lp, FiniteGroup, GroupFunction};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A group with a subgroup `K`, partitioned into `K×K` orbits.
#[derive(Debug, Clone, PartialEq)]
pub struct GelfandPair {
    group: FiniteGroup,
    subgroup: Vec<usize>,
    cosets: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    inverse_class: Vec<usize>,
    commutative: Option<bool>,
}

/// Result of the commutativity test on coset indicators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Commutativity {
    pub commutative: bool,
    /// `max |1_{C_i}∗1_{C_j} − 1_{C_j}∗1_{C_i}|` over pairs and points.
    pub defect: f64,
}

/// Closure of `generators` (given as group labels) inside `group`.
pub fn subgroup_from_generators(group: &FiniteGroup, generators: &[Vec<u32>]) -> Result<Vec<usize>> {
    let mut gens = Vec::with_capacity(generators.len());
    for g in generators {
        gens.push(group.find(g).ok_or_else(|| {
            Error::NotASubgroup(format!("generator {g:?} is not an element of the group"))
        })?);
    }
    let mut member = vec![false; group.order()];
    let mut elements = vec![group.identity()];
    member[group.identity()] = true;
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head];
        head += 1;
        for &g in &gens {
            let y = group.mul(x, g);
            if !member[y] {
                member[y] = true;
                elements.push(y);
            }
        }
    }
    elements.sort_unstable();
    Ok(elements)
}

/// Partitions `group` into double cosets `KxK` of `subgroup`.
///
/// Classes are listed by their smallest element index, so the class of the
/// identity (which is `K`) comes first. The commutativity flag is left unset.
pub fn double_cosets(group: &FiniteGroup, subgroup: &[usize]) -> Result<GelfandPair> {
    let n = group.order();
    let mut k: Vec<usize> = subgroup.to_vec();
    k.sort_unstable();
    k.dedup();
    if k.iter().any(|&x| x >= n) {
        return Err(Error::NotASubgroup("element index out of range".into()));
    }
    let mut member = vec![false; n];
    k.iter().for_each(|&x| member[x] = true);
    if !member[group.identity()] {
        return Err(Error::NotASubgroup("identity missing".into()));
    }
    for &a in &k {
        if !member[group.inv(a)] {
            return Err(Error::NotASubgroup(format!("not closed under inverse at {a}")));
        }
        for &b in &k {
            if !member[group.mul(a, b)] {
                return Err(Error::NotASubgroup(format!(
                    "not closed under multiplication at ({a}, {b})"
                )));
            }
        }
    }

    let mut class_of = vec![usize::MAX; n];
    let mut cosets = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = cosets.len();
        let mut orbit = Vec::new();
        for &k1 in &k {
            let k1x = group.mul(k1, x);
            for &k2 in &k {
                let y = group.mul(k1x, k2);
                if class_of[y] == usize::MAX {
                    class_of[y] = c;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        cosets.push(orbit);
    }
    let inverse_class = cosets
        .iter()
        .map(|coset| class_of[group.inv(coset[0])])
        .collect();

    Ok(GelfandPair {
        group: group.clone(),
        subgroup: k,
        cosets,
        class_of,
        inverse_class,
        commutative: None,
    })
}

/// Tests whether the coset indicators commute under convolution.
///
/// Convolutions of bi-invariant functions are bi-invariant, so the products
/// are compared on one representative per class, using exact integer counts
/// `#{y ∈ C_i : y⁻¹x ∈ C_j}`.
pub fn is_gelfand_pair(pair: &GelfandPair) -> Commutativity {
    let s = pair.num_cosets();
    let n = pair.group.order();
    let mut counts = vec![0u32; s * s];
    let mut worst = 0u32;
    for rep in pair.representatives() {
        counts.iter_mut().for_each(|c| *c = 0);
        for y in 0..n {
            let i = pair.class_of[y];
            let j = pair.class_of[pair.group.mul(pair.group.inv(y), rep)];
            counts[i * s + j] += 1;
        }
        for i in 0..s {
            for j in 0..i {
                worst = worst.max(counts[i * s + j].abs_diff(counts[j * s + i]));
            }
        }
    }
    Commutativity {
        commutative: worst == 0,
        defect: worst as f64 / n as f64,
    }
}

impl GelfandPair {
    /// Runs [`is_gelfand_pair`] and records the verdict.
    pub fn certify(mut self) -> (Self, Commutativity) {
        let verdict = is_gelfand_pair(&self);
        self.commutative = Some(verdict.commutative);
        (self, verdict)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    pub fn num_cosets(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset_sizes(&self) -> Vec<usize> {
        self.cosets.iter().map(Vec::len).collect()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// Index of the class `C⁻¹` for class `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c]
    }

    /// `None` until [`GelfandPair::certify`] has run.
    pub fn commutative(&self) -> Option<bool> {
        self.commutative
    }

    /// Smallest element of each class.
    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.cosets.iter().map(|c| c[0])
    }

    /// Haar mass `|C_k| / |G|` of each class.
    pub fn class_weights(&self) -> Vec<f64> {
        let n = self.group.order() as f64;
        self.cosets.iter().map(|c| c.len() as f64 / n).collect()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.num_cosets() {
            return Err(Error::DimensionMismatch {
                expected: self.num_cosets(),
                actual: len,
            });
        }
        Ok(())
    }

    /// `L²(G)` inner product of two bi-invariant functions.
    pub fn inner(&self, f: &BiInvariantFunction, g: &BiInvariantFunction) -> Complex64 {
        self.inner_raw(&f.coords, &g.coords)
    }

    pub(crate) fn inner_raw(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        let n = self.group.order() as f64;
        self.cosets
            .iter()
            .zip(f.iter().zip(g))
            .map(|(c, (a, b))| a * b.conj() * (c.len() as f64 / n))
            .sum()
    }

    /// Normalized `L^p(G)` norm of a bi-invariant function.
    pub fn lp_norm(&self, f: &BiInvariantFunction, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        Ok(self.lp_norm_raw(&f.coords, p))
    }

    pub(crate) fn lp_norm_raw(&self, f: &[Complex64], p: f64) -> f64 {
        let n = self.group.order() as f64;
        weighted_lp(
            self.cosets
                .iter()
                .zip(f)
                .map(|(c, v)| (c.len() as f64 / n, v.norm())),
            p,
        )
    }

    /// Convolution of two bi-invariant functions, evaluated on class representatives.
    pub fn convolve(
        &self,
        f: &BiInvariantFunction,
        g: &BiInvariantFunction,
    ) -> Result<BiInvariantFunction> {
        self.check_dim(f.len())?;
        self.check_dim(g.len())?;
        Ok(BiInvariantFunction {
            coords: self.convolve_raw(&f.coords, &g.coords),
        })
    }

    pub(crate) fn convolve_raw(&self, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
        let grp = &self.group;
        let n = grp.order();
        let scale = 1.0 / n as f64;
        self.representatives()
            .map(|rep| {
                let mut acc = ZERO;
                for y in 0..n {
                    acc += f[self.class_of[y]] * g[self.class_of[grp.mul(grp.inv(y), rep)]];
                }
                acc * scale
            })
            .collect()
    }

    /// `Σ_c w_c A_c`, where `A_c` is the matrix of `f ↦ 1_{C_c} ∗ f` on coset coordinates.
    pub fn left_action_matrix(&self, weights: &[Complex64]) -> DMatrix<Complex64> {
        let s = self.num_cosets();
        let grp = &self.group;
        let scale = 1.0 / grp.order() as f64;
        let mut a = DMatrix::from_element(s, s, ZERO);
        for (k, rep) in self.representatives().enumerate() {
            for y in 0..grp.order() {
                let c = self.class_of[y];
                let j = self.class_of[grp.mul(grp.inv(y), rep)];
                a[(k, j)] += weights[c] * scale;
            }
        }
        a
    }

    /// Averages `f` over each double coset.
    pub fn project(&self, f: &GroupFunction) -> Result<BiInvariantFunction> {
        if f.len() != self.group.order() {
            return Err(Error::DomainMismatch {
                expected: self.group.order(),
                actual: f.len(),
            });
        }
        Ok(BiInvariantFunction {
            coords: self
                .cosets
                .iter()
                .map(|c| c.iter().map(|&x| f.values()[x]).sum::<Complex64>() / c.len() as f64)
                .collect(),
        })
    }

    /// Expands coset coordinates to one value per group element.
    pub fn expand(&self, f: &BiInvariantFunction) -> Result<GroupFunction> {
        self.check_dim(f.len())?;
        Ok(self.expand_raw(&f.coords))
    }

    pub(crate) fn expand_raw(&self, f: &[Complex64]) -> GroupFunction {
        GroupFunction::new(self.class_of.iter().map(|&c| f[c]).collect())
            .expect("coordinates are finite")
    }

    /// `1_{C_c}` as a bi-invariant function.
    pub fn indicator(&self, c: usize) -> BiInvariantFunction {
        let mut coords = vec![ZERO; self.num_cosets()];
        coords[c] = ONE;
        BiInvariantFunction { coords }
    }
}

/// A K-bi-invariant function, one value per double coset.
#[derive(Debug, Clone, PartialEq)]
pub struct BiInvariantFunction {
    coords: Vec<Complex64>,
}

impl BiInvariantFunction {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    pub fn zeros(s: usize) -> Self {
        Self {
            coords: vec![ZERO; s],
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub(crate) fn from_raw(coords: Vec<Complex64>) -> Self {
        Self { coords }
    }
}

/// `max_{x,y} |(1/|K|) Σ_k φ(xky) − φ(x)φ(y)|` over all of `G × G`.
pub fn functional_equation_residual(phi: &GroupFunction, pair: &GelfandPair) -> Result<f64> {
    let grp = pair.group();
    let n = grp.order();
    if phi.len() != n {
        return Err(Error::DomainMismatch {
            expected: n,
            actual: phi.len(),
        });
    }
    let v = phi.values();
    let k = pair.subgroup();
    let mut worst = 0.0f64;
    for x in 0..n {
        let xk: Vec<usize> = k.iter().map(|&kk| grp.mul(x, kk)).collect();
        for y in 0..n {
            let avg = xk.iter().map(|&a| v[grp.mul(a, y)]).sum::<Complex64>() / k.len() as f64;
            worst = worst.max((avg - v[x] * v[y]).norm());
        }
    }
    Ok(worst)
}

/// Same quantity for a bi-invariant function; the average depends only on
/// the classes of `x` and `y`, so representatives suffice.
fn functional_equation_residual_coords(phi: &[Complex64], pair: &GelfandPair) -> f64 {
    let grp = pair.group();
    let reps: Vec<usize> = pair.representatives().collect();
    let k = pair.subgroup();
    let mut worst = 0.0f64;
    for (a, &x) in reps.iter().enumerate() {
        let xk: Vec<usize> = k.iter().map(|&kk| grp.mul(x, kk)).collect();
        for (b, &y) in reps.iter().enumerate() {
            let avg = xk
                .iter()
                .map(|&z| phi[pair.class_of(grp.mul(z, y))])
                .sum::<Complex64>()
                / k.len() as f64;
            worst = worst.max((avg - phi[a] * phi[b]).norm());
        }
    }
    worst
}

/// Outcome of the positive-definiteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdVerdict {
    pub positive_definite: bool,
    /// Smallest Gram eigenvalue seen (over all sampled minors when sampled).
    pub min_eigenvalue: f64,
    /// True when the verdict comes from random principal minors.
    pub sampled: bool,
}

/// Groups above this order get the sampled principal-minor test.
pub const PSD_CAP: usize = 1024;
const PSD_MINORS: usize = 200;
const PSD_MINOR_SIZE: usize = 64;

/// Checks that the Gram matrix `M[x,y] = φ(x⁻¹y)` is positive semidefinite.
pub fn is_positive_definite(phi: &GroupFunction, group: &FiniteGroup, tol: f64) -> Result<PsdVerdict> {
    is_positive_definite_capped(phi, group, tol, PSD_CAP)
}

pub fn is_positive_definite_capped(
    phi: &GroupFunction,
    group: &FiniteGroup,
    tol: f64,
    cap: usize,
) -> Result<PsdVerdict> {
    let n = group.order();
    if phi.len() != n {
        return Err(Error::DomainMismatch {
            expected: n,
            actual: phi.len(),
        });
    }
    let v = phi.values();
    // A Hermitian Gram matrix needs φ(x⁻¹) = conj φ(x).
    let asym = (0..n)
        .map(|x| (v[group.inv(x)] - v[x].conj()).norm())
        .fold(0.0, f64::max);
    if asym > tol {
        return Ok(PsdVerdict {
            positive_definite: false,
            min_eigenvalue: f64::NEG_INFINITY,
            sampled: false,
        });
    }
    let real = v.iter().all(|z| z.im.abs() <= f64::EPSILON);
    let gram_min = |idx: &[usize]| -> f64 {
        let m = idx.len();
        if real {
            let g = DMatrix::from_fn(m, m, |a, b| v[group.mul(group.inv(idx[a]), idx[b])].re);
            let g = (&g + g.transpose()) * 0.5;
            g.symmetric_eigenvalues().min()
        } else {
            let g = DMatrix::from_fn(m, m, |a, b| v[group.mul(group.inv(idx[a]), idx[b])]);
            let g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
            SymmetricEigen::new(g).eigenvalues.min()
        }
    };

    if n <= cap {
        let idx: Vec<usize> = (0..n).collect();
        let min = gram_min(&idx);
        return Ok(PsdVerdict {
            positive_definite: min >= -tol,
            min_eigenvalue: min,
            sampled: false,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut min = f64::INFINITY;
    for _ in 0..PSD_MINORS {
        let size = rng.gen_range(1..=PSD_MINOR_SIZE.min(n));
        let idx = sample(&mut rng, n, size).into_vec();
        min = min.min(gram_min(&idx));
    }
    Ok(PsdVerdict {
        positive_definite: min >= -tol,
        min_eigenvalue: min,
        sampled: true,
    })
}

/// Tuning for [`compute_spherical_functions_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalOptions {
    pub seed: u64,
    /// Minimum separation between eigenvalues of the random algebra element.
    pub gap_tol: f64,
    pub max_attempts: usize,
    pub psd_tol: f64,
    pub psd_cap: usize,
}

impl Default for SphericalOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            gap_tol: 1e-6,
            max_attempts: 32,
            psd_tol: 1e-9,
            psd_cap: PSD_CAP,
        }
    }
}

/// The spherical functions of a Gelfand pair with their norms and Plancherel weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalTable {
    pair: GelfandPair,
    values: Vec<Vec<Complex64>>,
    l2_norms_sq: Vec<f64>,
    weights: Vec<f64>,
    positive_definite: Vec<bool>,
    psd_sampled: bool,
    residuals: Vec<f64>,
    attempts: usize,
}

/// Spherical functions with default options and the given seed and eigen-gap tolerance.
pub fn compute_spherical_functions(pair: &GelfandPair, seed: u64, tol: f64) -> Result<SphericalTable> {
    compute_spherical_functions_with(
        pair,
        &SphericalOptions {
            seed,
            gap_tol: tol,
            ..Default::default()
        },
    )
}

/// Diagonalizes a random Hermitian element of the bi-invariant algebra.
///
/// In the orthonormal basis `√(|C_k|/|G|)·1_{C_k}` the operator of
/// convolution by `1_C` has adjoint convolution by `1_{C⁻¹}`, so
/// `Σ_c (a_c + a_{c'}) + i(b_c − b_{c'})` times `A_c` (with `c'` the inverse
/// class) is Hermitian. Its eigenvectors, rescaled to 1 at the identity, are
/// the spherical functions once the eigenvalues are simple.
pub fn compute_spherical_functions_with(
    pair: &GelfandPair,
    options: &SphericalOptions,
) -> Result<SphericalTable> {
    let certified = match pair.commutative {
        Some(c) => c,
        None => is_gelfand_pair(pair).commutative,
    };
    if !certified {
        return Err(Error::NotGelfandPair {
            defect: is_gelfand_pair(pair).defect,
        });
    }
    let mut pair = pair.clone();
    pair.commutative = Some(true);

    let s = pair.num_cosets();
    let scale: Vec<f64> = pair.class_weights().iter().map(|w| w.sqrt()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut draws = 0;
    let mut vectors = Vec::with_capacity(s);
    split_cluster(
        &pair,
        &scale,
        DMatrix::identity(s, s),
        &mut rng,
        options,
        &mut draws,
        &mut vectors,
    )?;

    let mut rows = Vec::with_capacity(s);
    for v in &vectors {
        let at_e = v[0] / scale[0];
        if at_e.norm() < 1e-12 {
            return Err(Error::DegenerateSpectrum {
                tol: options.gap_tol,
                attempts: draws,
            });
        }
        let mut row: Vec<Complex64> = (0..s).map(|k| v[k] / scale[k] / at_e).collect();
        row[0] = ONE;
        rows.push(row);
    }
    sort_rows(&mut rows);
    Ok(SphericalTable::from_rows(pair, rows, options, draws))
}

/// A random Hermitian element of the algebra in orthonormal coset coordinates.
fn random_hermitian(pair: &GelfandPair, scale: &[f64], rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let s = pair.num_cosets();
    let a: Vec<f64> = (0..s).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..s).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let z: Vec<Complex64> = (0..s)
        .map(|c| {
            let ci = pair.inverse_class(c);
            Complex64::new(a[c] + a[ci], b[c] - b[ci])
        })
        .collect();
    let action = pair.left_action_matrix(&z);
    let h = DMatrix::from_fn(s, s, |k, j| action[(k, j)] * (scale[k] / scale[j]));
    (&h + h.adjoint()) * Complex64::new(0.5, 0.0)
}

const JACOBI_SWEEPS: usize = 16;

/// Eigen-decomposition of a Hermitian matrix: nalgebra's solver followed by
/// cyclic Jacobi sweeps on `Vᴴ M V`, which bring the residual down to rounding level.
fn hermitian_eigen(m: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let mut v = SymmetricEigen::new(m.clone()).eigenvectors;
    let mut a = v.adjoint() * m * &v;
    let scale = a.norm().max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= f64::EPSILON * 1e-3 * scale {
                    continue;
                }
                rotated = true;
                // Phase e^{-iθ} on column q makes a_pq real, then a real rotation zeroes it.
                let phase = (apq / g).conj();
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..n {
                    let x = a[(r, p)];
                    let y = a[(r, q)] * phase;
                    a[(r, p)] = x * c - y * s;
                    a[(r, q)] = x * s + y * c;
                    let x = v[(r, p)];
                    let y = v[(r, q)] * phase;
                    v[(r, p)] = x * c - y * s;
                    v[(r, q)] = x * s + y * c;
                }
                for r in 0..n {
                    let x = a[(p, r)];
                    let y = a[(q, r)] * phase.conj();
                    a[(p, r)] = x * c - y * s;
                    a[(q, r)] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// Diagonalizes a fresh random element on the span of `basis` and recurses
/// into every group of eigenvalues closer than the separation threshold.
///
/// Eigenvectors are only as accurate as `ε‖H‖/gap`, so close eigenvalues are
/// never trusted: their joint eigenspace is split again with another draw.
fn split_cluster(
    pair: &GelfandPair,
    scale: &[f64],
    basis: DMatrix<Complex64>,
    rng: &mut ChaCha8Rng,
    options: &SphericalOptions,
    draws: &mut usize,
    out: &mut Vec<Vec<Complex64>>,
) -> Result<()> {
    let k = basis.ncols();
    if k == 1 {
        out.push(basis.column(0).iter().copied().collect());
        return Ok(());
    }
    for _ in 0..options.max_attempts {
        *draws += 1;
        let h = random_hermitian(pair, scale, rng);
        let floor = h.norm() / (16 * pair.num_cosets()) as f64;
        let restricted = basis.adjoint() * h * &basis;
        let restricted = (&restricted + restricted.adjoint()) * Complex64::new(0.5, 0.0);
        let (values, vectors) = hermitian_eigen(restricted);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let lo = values[order[0]];
        let hi = values[order[k - 1]];
        let threshold = options.gap_tol.max((hi - lo) / (4 * k) as f64).max(floor);
        let mut groups: Vec<Vec<usize>> = vec![vec![order[0]]];
        for w in order.windows(2) {
            if values[w[1]] - values[w[0]] < threshold {
                groups.last_mut().expect("nonempty").push(w[1]);
            } else {
                groups.push(vec![w[1]]);
            }
        }
        if groups.len() == 1 {
            continue;
        }
        for g in groups {
            let sub = DMatrix::from_fn(k, g.len(), |r, c| vectors[(r, g[c])]);
            split_cluster(pair, scale, &basis * sub, rng, options, draws, out)?;
        }
        return Ok(());
    }
    Err(Error::DegenerateSpectrum {
        tol: options.gap_tol,
        attempts: options.max_attempts,
    })
}

fn rounded(v: f64) -> i64 {
    (v * 1e9).round() as i64
}

/// Constant function first, then descending real part on class 1, then
/// descending lexicographic order of the rounded values.
fn sort_rows(rows: &mut [Vec<Complex64>]) {
    let key = |row: &Vec<Complex64>| -> (bool, Vec<(i64, i64)>) {
        let constant = row.iter().all(|v| rounded(v.re) == rounded(1.0) && rounded(v.im) == 0);
        let mut k: Vec<(i64, i64)> = Vec::with_capacity(row.len());
        if let Some(v) = row.get(1) {
            k.push((rounded(v.re), 0));
        }
        k.extend(row.iter().map(|v| (rounded(v.re), rounded(v.im))));
        (constant, k)
    };
    rows.sort_by_key(|r| std::cmp::Reverse(key(r)));
}

impl SphericalTable {
    fn from_rows(
        pair: GelfandPair,
        values: Vec<Vec<Complex64>>,
        options: &SphericalOptions,
        attempts: usize,
    ) -> Self {
        let l2_norms_sq: Vec<f64> = values.iter().map(|r| pair.inner_raw(r, r).re).collect();
        let weights = plancherel_weights_from_norms(&l2_norms_sq);
        let mut psd_sampled = false;
        let positive_definite = values
            .iter()
            .map(|r| {
                let verdict = is_positive_definite_capped(
                    &pair.expand_raw(r),
                    pair.group(),
                    options.psd_tol,
                    options.psd_cap,
                )
                .expect("row expands to the group order");
                psd_sampled |= verdict.sampled;
                verdict.positive_definite
            })
            .collect();
        let residuals = values
            .iter()
            .map(|r| functional_equation_residual_coords(r, &pair))
            .collect();
        Self {
            pair,
            values,
            l2_norms_sq,
            weights,
            positive_definite,
            psd_sampled,
            residuals,
            attempts,
        }
    }

    pub fn pair(&self) -> &GelfandPair {
        &self.pair
    }

    /// Number of spherical functions, equal to the number of double cosets.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Row `i` is `φ_i` on the double cosets; column 0 is the value at `K`.
    pub fn values(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    pub fn row(&self, i: usize) -> BiInvariantFunction {
        BiInvariantFunction::from_raw(self.values[i].clone())
    }

    pub fn l2_norms_sq(&self) -> &[f64] {
        &self.l2_norms_sq
    }

    /// Plancherel weights `μ_i = 1/‖φ_i‖²`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn positive_definite(&self) -> &[bool] {
        &self.positive_definite
    }

    pub fn psd_sampled(&self) -> bool {
        self.psd_sampled
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// Random draws used before the spectrum separated.
    pub fn attempts(&self) -> usize {
        self.attempts
    }

    /// Largest `|⟨φ_i, φ_j⟩|` over `i ≠ j`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.len() {
            for j in 0..i {
                worst = worst.max(self.pair.inner_raw(&self.values[i], &self.values[j]).norm());
            }
        }
        worst
    }

    /// Largest `|(1_C∗φ_i)(x) − λ φ_i(x)|` over classes `C`, rows `i` and all
    /// `x ∈ G`, with `λ = (1_C∗φ_i)(e)`.
    pub fn eigenfunction_residual(&self) -> f64 {
        let grp = self.pair.group();
        let n = grp.order();
        let scale = 1.0 / n as f64;
        let mut worst = 0.0f64;
        for row in &self.values {
            let phi = self.pair.expand_raw(row);
            let phi = phi.values();
            for coset in self.pair.cosets() {
                let conv: Vec<Complex64> = (0..n)
                    .map(|x| {
                        coset.iter().map(|&y| phi[grp.mul(grp.inv(y), x)]).sum::<Complex64>()
                            * scale
                    })
                    .collect();
                let lambda = conv[grp.identity()];
                for x in 0..n {
                    worst = worst.max((conv[x] - lambda * phi[x]).norm());
                }
            }
        }
        worst
    }

    /// Largest `|φ_i(x⁻¹) − conj φ_i(x)|` over positive-definite rows.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (row, &pd) in self.values.iter().zip(&self.positive_definite) {
            if !pd {
                continue;
            }
            for (c, v) in row.iter().enumerate() {
                worst = worst.max((row[self.pair.inverse_class(c)] - v.conj()).norm());
            }
        }
        worst
    }

    /// Largest `|φ_i(x)| − 1` over positive-definite rows (≤ 0 when bounded by 1).
    pub fn sup_excess(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.positive_definite)
            .filter(|(_, &pd)| pd)
            .flat_map(|(row, _)| row.iter().map(|v| v.norm() - 1.0))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether every spherical function was found positive definite.
    pub fn bounded_equals_positive(&self) -> bool {
        self.positive_definite.iter().all(|&b| b)
    }
}

fn plancherel_weights_from_norms(norms_sq: &[f64]) -> Vec<f64> {
    norms_sq.iter().map(|n| 1.0 / n).collect()
}

/// `μ_i = 1/‖φ_i‖²`, the weights that make the inversion formula exact.
pub fn plancherel_weights(table: &SphericalTable) -> Vec<f64> {
    plancherel_weights_from_norms(&table.l2_norms_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupOptions};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn s3_pair() -> GelfandPair {
        let g = build_group(3, &[vec![1, 2, 0], vec![1, 0, 2]], &GroupOptions::default()).unwrap();
        let k = subgroup_from_generators(&g, &[vec![1, 0, 2]]).unwrap();
        double_cosets(&g, &k).unwrap()
    }

    fn cyclic(n: usize) -> FiniteGroup {
        let gen: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        build_group(n, &[gen], &GroupOptions::default()).unwrap()
    }

    fn s4() -> FiniteGroup {
        build_group(4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], &GroupOptions::default()).unwrap()
    }

    /// Brute-force orbit enumeration, independent of `double_cosets`.
    fn orbit_sizes(g: &FiniteGroup, k: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; g.order()];
        let mut sizes = Vec::new();
        for x in 0..g.order() {
            if seen[x] {
                continue;
            }
            let mut orbit = std::collections::BTreeSet::new();
            for &a in k {
                for &b in k {
                    orbit.insert(g.mul(g.mul(a, x), b));
                }
            }
            orbit.iter().for_each(|&y| seen[y] = true);
            sizes.push(orbit.len());
        }
        sizes
    }

    #[test]
    fn s3_double_cosets() {
        let pair = s3_pair();
        assert_eq!(pair.coset_sizes(), vec![2, 4]);
        assert_eq!(orbit_sizes(pair.group(), pair.subgroup()), vec![2, 4]);
        assert!(pair.cosets()[0].contains(&0));
        assert_eq!(pair.cosets()[0], pair.subgroup());
    }

    #[test]
    fn trivial_and_full_subgroups() {
        let g = s4();
        let trivial = double_cosets(&g, &[0]).unwrap();
        assert_eq!(trivial.num_cosets(), 24);
        let all: Vec<usize> = (0..24).collect();
        let full = double_cosets(&g, &all).unwrap();
        assert_eq!(full.num_cosets(), 1);
    }

    #[test]
    fn rejects_non_subgroup() {
        let g = s4();
        let err = double_cosets(&g, &[0, 1]);
        assert!(matches!(err, Err(Error::NotASubgroup(_))));
        assert!(matches!(double_cosets(&g, &[1]), Err(Error::NotASubgroup(_))));
        assert!(matches!(
            subgroup_from_generators(&g, &[vec![0, 1, 2]]),
            Err(Error::NotASubgroup(_))
        ));
    }

    /// Full-group indicator convolutions, independent of the class-representative shortcut.
    fn brute_commutator(pair: &GelfandPair) -> f64 {
        let g = pair.group();
        let ind = |c: usize| {
            GroupFunction::new(
                (0..g.order())
                    .map(|x| if pair.class_of(x) == c { c_one() } else { ZERO })
                    .collect(),
            )
            .unwrap()
        };
        let mut worst = 0.0f64;
        for i in 0..pair.num_cosets() {
            for j in 0..i {
                let a = crate::group::convolve(&ind(i), &ind(j), g).unwrap();
                let b = crate::group::convolve(&ind(j), &ind(i), g).unwrap();
                for (x, y) in a.values().iter().zip(b.values()) {
                    worst = worst.max((x - y).norm());
                }
            }
        }
        worst
    }

    fn c_one() -> Complex64 {
        ONE
    }

    #[test]
    fn gelfand_certification() {
        let v = is_gelfand_pair(&s3_pair());
        assert!(v.commutative);
        assert_eq!(v.defect, 0.0);
        assert_eq!(brute_commutator(&s3_pair()), 0.0);

        let z6 = double_cosets(&cyclic(6), &[0]).unwrap();
        assert!(is_gelfand_pair(&z6).commutative);

        let s4e = double_cosets(&s4(), &[0]).unwrap();
        let v = is_gelfand_pair(&s4e);
        assert!(!v.commutative);
        assert!(v.defect > 0.0);
        assert!((brute_commutator(&s4e) - v.defect).abs() < 1e-15);
    }

    #[test]
    fn projection() {
        let pair = s3_pair();
        let delta = GroupFunction::point_mass(6, 0, 1.0);
        let p = pair.project(&delta).unwrap();
        assert_eq!(p.coords(), &[c(0.5), c(0.0)]);
        let expanded = pair.expand(&p).unwrap();
        for x in 0..6 {
            let expect = if pair.class_of(x) == 0 { 0.5 } else { 0.0 };
            assert_eq!(expanded.values()[x], c(expect));
        }
        // Idempotent.
        assert_eq!(pair.project(&expanded).unwrap(), p);
    }

    #[test]
    fn s3_spherical_table() {
        let (pair, _) = s3_pair().certify();
        let table = compute_spherical_functions(&pair, 0, 1e-6).unwrap();
        assert_eq!(table.len(), 2);
        // Hand solution of the 2×2 eigenproblem: φ₀ = (1, 1), φ₁ = (1, −1/2).
        let expected = [[1.0, 1.0], [1.0, -0.5]];
        for (row, exp) in table.values().iter().zip(expected) {
            for (v, e) in row.iter().zip(exp) {
                assert!((v - c(e)).norm() < 1e-12, "{row:?}");
            }
        }
        assert!((table.weights()[0] - 1.0).abs() < 1e-12);
        assert!((table.weights()[1] - 2.0).abs() < 1e-12);
        assert_eq!(plancherel_weights(&table), table.weights());
        assert!(table.positive_definite().iter().all(|&b| b));
        assert!(table.residuals().iter().all(|&r| r <= 1e-10));
    }

    #[test]
    fn cyclic_characters() {
        let pair = double_cosets(&cyclic(4), &[0]).unwrap();
        let table = compute_spherical_functions(&pair, 3, 1e-6).unwrap();
        let gen = pair.group().find(&[1, 2, 3, 0]).unwrap();
        // Each row is a character j ↦ i^{kj}: multiplicative on the generator's powers.
        let mut found = [false; 4];
        for row in table.values() {
            let at_gen = row[pair.class_of(gen)];
            let k = (0..4)
                .find(|&k| (at_gen - Complex64::i().powi(k)).norm() < 1e-12)
                .expect("value at generator is a 4th root of unity") as usize;
            found[k] = true;
            let mut x = pair.group().identity();
            for j in 0..4 {
                assert!((row[pair.class_of(x)] - Complex64::i().powi((k * j) as i32)).norm() < 1e-12);
                x = pair.group().mul(x, gen);
            }
        }
        assert!(found.iter().all(|&b| b));
        assert!(table.weights().iter().all(|&w| (w - 1.0).abs() < 1e-12));
        assert!(table.values()[0].iter().all(|v| (v - ONE).norm() < 1e-12));
    }

    #[test]
    fn full_subgroup_single_row() {
        let g = s4();
        let all: Vec<usize> = (0..24).collect();
        let pair = double_cosets(&g, &all).unwrap();
        let table = compute_spherical_functions(&pair, 0, 1e-6).unwrap();
        assert_eq!(table.values(), &[vec![ONE]]);
        assert_eq!(table.weights(), &[1.0]);
    }

    #[test]
    fn non_gelfand_rejected() {
        let pair = double_cosets(&s4(), &[0]).unwrap();
        assert!(matches!(
            compute_spherical_functions(&pair, 0, 1e-6),
            Err(Error::NotGelfandPair { .. })
        ));
    }

    #[test]
    fn degenerate_spectrum_reported() {
        let pair = double_cosets(&cyclic(5), &[0]).unwrap();
        let opts = SphericalOptions {
            gap_tol: 1e9,
            max_attempts: 3,
            ..Default::default()
        };
        assert_eq!(
            compute_spherical_functions_with(&pair, &opts),
            Err(Error::DegenerateSpectrum {
                tol: 1e9,
                attempts: 3
            })
        );
    }

    #[test]
    fn functional_equation_examples() {
        let pair = s3_pair();
        let one = GroupFunction::constant(6, ONE);
        assert_eq!(functional_equation_residual(&one, &pair).unwrap(), 0.0);
        let two = GroupFunction::constant(6, c(2.0));
        assert!((functional_equation_residual(&two, &pair).unwrap() - 2.0).abs() < 1e-15);

        let table = compute_spherical_functions(&pair, 0, 1e-6).unwrap();
        let phi1 = pair.expand(&table.row(1)).unwrap();
        let full = functional_equation_residual(&phi1, &pair).unwrap();
        assert!(full <= 1e-10);
        assert!((full - table.residuals()[1]).abs() < 1e-14);
    }

    #[test]
    fn positive_definiteness() {
        let pair = s3_pair();
        let g = pair.group();
        let one = GroupFunction::constant(6, ONE);
        assert!(is_positive_definite(&one, g, 1e-9).unwrap().positive_definite);

        let table = compute_spherical_functions(&pair, 0, 1e-6).unwrap();
        let phi1 = pair.expand(&table.row(1)).unwrap();
        let verdict = is_positive_definite(&phi1, g, 1e-9).unwrap();
        assert!(verdict.positive_definite);
        let gram: Vec<Vec<f64>> = (0..6)
            .map(|x| (0..6).map(|y| phi1.values()[g.mul(g.inv(x), y)].re).collect())
            .collect();
        // Oracle: M² = 3M and tr M = 6, so the spectrum is {3, 3, 0, 0, 0, 0}.
        let trace: f64 = (0..6).map(|i| gram[i][i]).sum();
        assert!((trace - 6.0).abs() < 1e-12);
        for i in 0..6 {
            for j in 0..6 {
                let sq: f64 = (0..6).map(|k| gram[i][k] * gram[k][j]).sum();
                assert!((sq - 3.0 * gram[i][j]).abs() < 1e-12);
            }
        }
        assert!(verdict.min_eigenvalue.abs() < 1e-12);

        let z3 = cyclic(3);
        let f = GroupFunction::from_real(&[1.0, -1.0, -1.0]).unwrap();
        let verdict = is_positive_definite(&f, &z3, 1e-9).unwrap();
        assert!(!verdict.positive_definite);
        // Circulant Gram: eigenvalues Σ_j c_j ω^{jk} = −1, 2, 2.
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let eigs: Vec<f64> = (0..3i32)
            .map(|k| (0..3i32).map(|j| f.values()[j as usize] * w.powi(j * k)).sum::<Complex64>().re)
            .collect();
        assert!((eigs.iter().copied().fold(f64::INFINITY, f64::min) + 1.0).abs() < 1e-12);
        assert!((verdict.min_eigenvalue + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_psd_above_cap() {
        let z = cyclic(8);
        let one = GroupFunction::constant(8, ONE);
        let v = is_positive_definite_capped(&one, &z, 1e-9, 4).unwrap();
        assert!(v.sampled && v.positive_definite);
    }

    #[test]
    fn table_invariants_dihedral() {
        // D5 with a reflection subgroup.
        let g = build_group(5, &[vec![1, 2, 3, 4, 0], vec![0, 4, 3, 2, 1]], &GroupOptions::default())
            .unwrap();
        let k = subgroup_from_generators(&g, &[vec![0, 4, 3, 2, 1]]).unwrap();
        let pair = double_cosets(&g, &k).unwrap();
        let table = compute_spherical_functions(&pair, 9, 1e-6).unwrap();
        assert_eq!(table.len(), pair.num_cosets());
        assert!(table.orthogonality_defect() < 1e-10);
        assert!(table.eigenfunction_residual() < 1e-10);
        assert!(table.hermitian_defect() < 1e-10);
        assert!(table.sup_excess() < 1e-12);
        for (n, w) in table.l2_norms_sq().iter().zip(table.weights()) {
            assert!((n * w - 1.0).abs() < 1e-12);
            assert!(*n <= 1.0 + 1e-12);
        }
        let other = compute_spherical_functions(&pair, 12345, 1e-6).unwrap();
        for (a, b) in table.values().iter().zip(other.values()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-10);
            }
        }
    }
}
