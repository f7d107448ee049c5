//! Randomized theorem suite for multipliers on a fixed spherical table.
//!
//! Each check is evaluated over a deterministic sample set (constant and zero
//! symbols on coset indicators, point symbols on normalized spherical
//! functions) followed by `trials` seeded random samples. Identities report
//! their largest defect; inequalities report the sample with the smallest
//! margin `bound − observed`. The sample that produced the reported value is
//! kept as a witness and can be re-run with [`replay`].

use std::cell::OnceCell;
use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gelfand::{BiInvariantFunction, SphericalTable};
use crate::io::{from_pairs, to_pairs, Pair2};
use crate::multiplier::{
    build_operator, composition_defects, diagonal_identity_defect, Multiplier, MultiplierOperator,
};
use crate::schatten::{
    analytic_singular_values, gaussian_coords, sampled_norm_lower_bound,
    schatten_from_singular_values, singular_values, trial_rng, DEFAULT_P_GRID,
};
use crate::transform::{inner_coefficients, inverse_sft, plancherel_pairing, sft, Convention, SpectralVector};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_TRIALS: usize = 200;

/// Exponents of the interpolated `L^p → L^{p'}` check.
pub const INTERPOLATION_EXPONENTS: [f64; 3] = [1.25, 1.5, 1.75];
/// Random inputs per sampled norm estimate.
pub const INNER_TRIALS: usize = 32;
/// Exponents of the counting-measure Fourier bound.
pub const FOURIER_EXPONENTS: [f64; 4] = [2.0, 3.0, 4.0, f64::INFINITY];

const DETERMINISTIC_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiplierKind {
    ComplexGaussian,
    Nonnegative,
    Sparse,
    Rademacher,
}

impl MultiplierKind {
    pub const ALL: [MultiplierKind; 4] = [
        MultiplierKind::ComplexGaussian,
        MultiplierKind::Nonnegative,
        MultiplierKind::Sparse,
        MultiplierKind::Rademacher,
    ];
}

impl std::str::FromStr for MultiplierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex-gaussian" => Ok(Self::ComplexGaussian),
            "nonnegative" => Ok(Self::Nonnegative),
            "sparse" => Ok(Self::Sparse),
            "rademacher" => Ok(Self::Rademacher),
            other => Err(Error::Parse(format!("unknown multiplier kind {other:?}"))),
        }
    }
}

/// A seeded random symbol of length `s`.
pub fn random_multiplier(s: usize, seed: u64, kind: MultiplierKind) -> Multiplier {
    multiplier_from_rng(&mut ChaCha8Rng::seed_from_u64(seed), s, kind)
}

fn multiplier_from_rng(rng: &mut ChaCha8Rng, s: usize, kind: MultiplierKind) -> Multiplier {
    let values = match kind {
        MultiplierKind::ComplexGaussian => gaussian_coords(rng, s),
        MultiplierKind::Nonnegative => gaussian_coords(rng, s)
            .into_iter()
            .map(|z| Complex64::new(z.norm(), 0.0))
            .collect(),
        MultiplierKind::Sparse => {
            let mut v = gaussian_coords(rng, s);
            for i in sample_indices(rng, s, s / 2) {
                v[i] = Complex64::new(0.0, 0.0);
            }
            v
        }
        MultiplierKind::Rademacher => (0..s)
            .map(|_| Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0))
            .collect(),
    };
    Multiplier::new(values).expect("finite by construction")
}

/// One input tuple `(m, m2, f, g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub index: usize,
    pub m: Multiplier,
    pub m2: Multiplier,
    pub f: BiInvariantFunction,
    pub g: BiInvariantFunction,
}

/// The samples [`run_suite`] evaluates, in order.
pub fn samples(table: &SphericalTable, trials: usize, seed: u64) -> Vec<Sample> {
    let pair = table.pair();
    let s = table.len();
    let one = Multiplier::constant(s, Complex64::new(1.0, 0.0));
    let zero = Multiplier::constant(s, Complex64::new(0.0, 0.0));
    let mut out = Vec::new();
    let mut push = |m: Multiplier, m2: Multiplier, f: BiInvariantFunction, g: BiInvariantFunction| {
        let index = out.len();
        out.push(Sample { index, m, m2, f, g });
    };
    for m in [&one, &zero] {
        for c in 0..s.min(DETERMINISTIC_CAP) {
            push(m.clone(), one.clone(), pair.indicator(c), pair.indicator((c + 1) % s));
        }
    }
    let mut points: Vec<usize> = (0..s.min(DETERMINISTIC_CAP)).collect();
    if s > DETERMINISTIC_CAP {
        points.push(s - 1);
    }
    for j in points {
        let mut e = vec![Complex64::new(0.0, 0.0); s];
        e[j] = Complex64::new(1.0, 0.0);
        let e = Multiplier::new(e).expect("finite");
        let scale = table.weights()[j].sqrt();
        let phi = BiInvariantFunction::new(table.values()[j].iter().map(|v| v * scale).collect())
            .expect("finite table");
        push(e.clone(), e, phi.clone(), phi);
    }
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let kind = MultiplierKind::ALL[t % MultiplierKind::ALL.len()];
        let m = multiplier_from_rng(&mut rng, s, kind);
        let m2 = multiplier_from_rng(&mut rng, s, MultiplierKind::ComplexGaussian);
        let f = BiInvariantFunction::new(gaussian_coords(&mut rng, s)).expect("finite");
        let g = BiInvariantFunction::new(gaussian_coords(&mut rng, s)).expect("finite");
        push(m, m2, f, g);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckId {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
    V8,
    V9,
    V10,
    V11,
    V12,
    V13,
    V14,
    V15,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
    Diagnostic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Identity,
    Inequality,
}

impl CheckId {
    pub const ALL: [CheckId; 15] = [
        CheckId::V1,
        CheckId::V2,
        CheckId::V3,
        CheckId::V4,
        CheckId::V5,
        CheckId::V6,
        CheckId::V7,
        CheckId::V8,
        CheckId::V9,
        CheckId::V10,
        CheckId::V11,
        CheckId::V12,
        CheckId::V13,
        CheckId::V14,
        CheckId::V15,
    ];

    pub fn theorem(self) -> &'static str {
        match self {
            CheckId::V1 => "fourier-inversion",
            CheckId::V2 => "plancherel-isometry",
            CheckId::V3 => "riemann-lebesgue",
            CheckId::V4 => "multiplier-diagonal",
            CheckId::V5 => "multiplier-composition",
            CheckId::V6 => "multiplier-adjoint",
            CheckId::V7 => "bounded-l1-to-linf",
            CheckId::V8 => "bounded-l2",
            CheckId::V9 => "riesz-thorin-interpolation",
            CheckId::V10 => "hausdorff-young-counting",
            CheckId::V11 => "bounded-lp-symbol",
            CheckId::V12 => "trace-class",
            CheckId::V13 => "schatten-class",
            CheckId::V14 => "spherical-function-properties",
            CheckId::V15 => "convention-diagnostics",
        }
    }

    pub fn convention(self) -> &'static str {
        match self {
            CheckId::V6 => "both",
            CheckId::V10 | CheckId::V11 | CheckId::V12 | CheckId::V13 | CheckId::V15 => "counting",
            CheckId::V14 => "table",
            _ => "plancherel",
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            CheckId::V9 => Mode::Sampled,
            CheckId::V15 => Mode::Diagnostic,
            _ => Mode::Exact,
        }
    }

    fn kind(self) -> Kind {
        match self {
            CheckId::V3
            | CheckId::V7
            | CheckId::V8
            | CheckId::V9
            | CheckId::V10
            | CheckId::V11
            | CheckId::V12
            | CheckId::V13 => Kind::Inequality,
            _ => Kind::Identity,
        }
    }

    /// Table-level checks have no per-sample inputs.
    fn per_sample(self) -> bool {
        self != CheckId::V14
    }
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One evaluation: a defect (`bound = None`) or an `observed ≤ bound` pair.
#[derive(Debug, Clone, PartialEq)]
struct Measure {
    observed: f64,
    bound: Option<f64>,
    extra: Vec<(&'static str, f64)>,
}

impl Measure {
    fn defect(observed: f64) -> Self {
        Self {
            observed,
            bound: None,
            extra: Vec::new(),
        }
    }

    fn ineq(observed: f64, bound: f64) -> Self {
        Self {
            observed,
            bound: Some(bound),
            extra: Vec::new(),
        }
    }

    fn margin(&self) -> f64 {
        self.bound.map_or(f64::NAN, |b| b - self.observed)
    }

    /// Keeps whichever inequality has the smaller margin.
    fn tightest(parts: impl IntoIterator<Item = Measure>) -> Self {
        parts
            .into_iter()
            .reduce(|a, b| if b.margin() < a.margin() { b } else { a })
            .expect("at least one part")
    }

    fn with(mut self, key: &'static str, value: f64) -> Self {
        self.extra.push((key, value));
        self
    }
}

fn sup_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn interpolation_seed(seed: u64, index: usize) -> u64 {
    seed ^ ((9u64 << 56) | index as u64)
}

/// Operators and singular values of one sample's `m`, built on first use.
struct Cache<'a> {
    table: &'a SphericalTable,
    m: &'a Multiplier,
    ops: [OnceCell<Result<MultiplierOperator<'a>>>; 2],
    sv: [OnceCell<Result<Vec<f64>>>; 2],
}

impl<'a> Cache<'a> {
    fn new(table: &'a SphericalTable, m: &'a Multiplier) -> Self {
        Self {
            table,
            m,
            ops: Default::default(),
            sv: Default::default(),
        }
    }

    fn slot(convention: Convention) -> usize {
        match convention {
            Convention::Plancherel => 0,
            Convention::Counting => 1,
        }
    }

    fn op(&self, convention: Convention) -> Result<&MultiplierOperator<'a>> {
        self.ops[Self::slot(convention)]
            .get_or_init(|| build_operator(self.m, self.table, convention))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn singular_values(&self, convention: Convention) -> Result<&[f64]> {
        self.sv[Self::slot(convention)]
            .get_or_init(|| singular_values(self.op(convention)?))
            .as_deref()
            .map_err(Clone::clone)
    }
}

fn evaluate(id: CheckId, cache: &Cache<'_>, x: &Sample, seed: u64) -> Result<Measure> {
    let table = cache.table;
    let pair = table.pair();
    Ok(match id {
        CheckId::V1 => {
            let mut worst = 0.0f64;
            for h in [&x.f, &x.g] {
                let back = inverse_sft(&sft(h, table)?, table)?;
                worst = worst.max(sup_diff(back.coords(), h.coords()));
            }
            Measure::defect(worst)
        }
        CheckId::V2 => {
            let (lhs, rhs) = plancherel_pairing(&x.f, &x.g, table)?;
            let (ff, rf) = plancherel_pairing(&x.f, &x.f, table)?;
            let pairing = (lhs - rhs).norm();
            let isometry = (ff - rf).norm();
            Measure::defect(pairing.max(isometry))
                .with("pairing", pairing)
                .with("isometry", isometry)
        }
        CheckId::V3 => {
            let hat = sft(&x.f, table)?;
            Measure::ineq(
                hat.norm(table, Convention::Plancherel, f64::INFINITY)?,
                pair.lp_norm(&x.f, 1.0)?,
            )
        }
        CheckId::V4 => {
            let op = cache.op(Convention::Plancherel)?;
            Measure::defect(diagonal_identity_defect(op, &x.f)?.corrected)
        }
        CheckId::V5 => {
            let (d1, d2) = composition_defects(&x.m, &x.m2, &x.f, &x.g, table, Convention::Plancherel)?;
            Measure::defect(d1.max(d2)).with("left", d1).with("product", d2)
        }
        CheckId::V6 => {
            let mut worst = 0.0f64;
            for conv in [Convention::Plancherel, Convention::Counting] {
                let op = cache.op(conv)?;
                let lhs = pair.inner(&op.apply(&x.f)?, &x.g);
                let rhs = pair.inner(&x.f, &op.adjoint().apply(&x.g)?);
                worst = worst.max((lhs - rhs).norm());
            }
            Measure::defect(worst)
        }
        CheckId::V7 => {
            let op = cache.op(Convention::Plancherel)?;
            Measure::ineq(op.op_norm_1_inf(), x.m.norm(table, Convention::Plancherel, 1.0)?)
        }
        CheckId::V8 => {
            let norm = cache.singular_values(Convention::Plancherel)?.first().copied().unwrap_or(0.0);
            let kernel_l1 = inverse_l1(&x.m, table)?;
            let sup = x.m.norm(table, Convention::Plancherel, f64::INFINITY)?;
            Measure::tightest([Measure::ineq(norm, sup), Measure::ineq(norm, kernel_l1)])
                .with("sup_bound", sup)
                .with("kernel_l1_bound", kernel_l1)
        }
        CheckId::V9 => {
            let op = cache.op(Convention::Plancherel)?;
            let m1 = x.m.norm(table, Convention::Plancherel, 1.0)?;
            let k1 = inverse_l1(&x.m, table)?;
            let inner_seed = interpolation_seed(seed, x.index);
            let parts = INTERPOLATION_EXPONENTS
                .iter()
                .map(|&p| {
                    let q = p / (p - 1.0);
                    let est = sampled_norm_lower_bound(op, p, q, INNER_TRIALS, inner_seed)?;
                    let bound = m1.powf((2.0 - p) / p) * k1.powf((2.0 * p - 2.0) / p);
                    Ok(Measure::ineq(est.value, bound))
                })
                .collect::<Result<Vec<_>>>()?;
            Measure::tightest(parts)
        }
        CheckId::V10 => {
            let hat = inner_coefficients(&x.f, table)?;
            let l2 = pair.lp_norm(&x.f, 2.0)?;
            let parts = FOURIER_EXPONENTS
                .iter()
                .map(|&q| Ok(Measure::ineq(hat.norm(table, Convention::Counting, q)?, l2)))
                .collect::<Result<Vec<_>>>()?;
            Measure::tightest(parts)
        }
        CheckId::V11 | CheckId::V12 | CheckId::V13 => {
            let op = cache.op(Convention::Counting)?;
            let sv = cache.singular_values(Convention::Counting)?;
            let gap = sup_diff_real(sv, &analytic_singular_values(op));
            let norm_p = |p: f64| x.m.norm(table, Convention::Counting, p);
            let m = match id {
                CheckId::V11 => Measure::tightest(
                    DEFAULT_P_GRID
                        .iter()
                        .map(|&p| Ok(Measure::ineq(sv.first().copied().unwrap_or(0.0), norm_p(p)?)))
                        .collect::<Result<Vec<_>>>()?,
                ),
                CheckId::V12 => {
                    let s1 = schatten_from_singular_values(sv, 1.0)?;
                    let m1 = norm_p(1.0)?;
                    let ratio = if m1 > 0.0 { s1 / m1 } else { 0.0 };
                    Measure::ineq(s1, 4.0 * m1).with("s1_ratio", ratio)
                }
                _ => Measure::tightest(
                    DEFAULT_P_GRID
                        .iter()
                        .map(|&p| {
                            let c = if p.is_infinite() { 1.0 } else { 4f64.powf(1.0 / p) };
                            Ok(Measure::ineq(schatten_from_singular_values(sv, p)?, c * norm_p(p)?))
                        })
                        .collect::<Result<Vec<_>>>()?,
                ),
            };
            m.with("svd_gap", gap)
        }
        CheckId::V14 => {
            let at_e = table
                .values()
                .iter()
                .map(|r| (r[0] - Complex64::new(1.0, 0.0)).norm())
                .fold(0.0, f64::max);
            let functional = table.residuals().iter().copied().fold(0.0, f64::max);
            let eigen = table.eigenfunction_residual();
            let orth = table.orthogonality_defect();
            let sup = table.sup_excess().max(0.0);
            Measure::defect(at_e.max(functional).max(eigen).max(orth).max(sup))
                .with("identity_value", at_e)
                .with("functional_equation", functional)
                .with("eigenfunction", eigen)
                .with("orthogonality", orth)
                .with("sup_excess", sup)
        }
        CheckId::V15 => {
            let op = cache.op(Convention::Counting)?;
            let diagonal = diagonal_identity_defect(op, &x.f)?.uncorrected;
            let (_, product) = composition_defects(&x.m, &x.m2, &x.f, &x.g, table, Convention::Counting)?;
            let isometry = table
                .l2_norms_sq()
                .iter()
                .map(|n| (n - 1.0).abs())
                .fold(0.0, f64::max);
            Measure::defect(diagonal.max(product).max(isometry))
                .with("uncorrected_diagonal", diagonal)
                .with("counting_product", product)
                .with("norm_sq_defect", isometry)
        }
    })
}

fn sup_diff_real(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `‖ℱ⁻¹m‖_{L¹}`.
fn inverse_l1(m: &Multiplier, table: &SphericalTable) -> Result<f64> {
    let k = inverse_sft(&SpectralVector::new(m.values().to_vec())?, table)?;
    table.pair().lp_norm(&k, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub m: Vec<Pair2>,
    pub m2: Vec<Pair2>,
    pub f: Vec<Pair2>,
    pub g: Vec<Pair2>,
}

impl Witness {
    fn of(x: &Sample) -> Self {
        Self {
            index: x.index,
            m: to_pairs(x.m.values()),
            m2: to_pairs(x.m2.values()),
            f: to_pairs(x.f.coords()),
            g: to_pairs(x.g.coords()),
        }
    }

    pub fn sample(&self) -> Result<Sample> {
        Ok(Sample {
            index: self.index,
            m: Multiplier::new(from_pairs(&self.m))?,
            m2: Multiplier::new(from_pairs(&self.m2))?,
            f: BiInvariantFunction::new(from_pairs(&self.f))?,
            g: BiInvariantFunction::new(from_pairs(&self.g))?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: CheckId,
    pub theorem: String,
    pub convention: String,
    pub mode: Mode,
    /// Largest defect, or the observed side of the tightest inequality.
    pub worst: f64,
    pub bound: Option<f64>,
    pub margin: Option<f64>,
    pub pass: bool,
    pub witness: Option<Witness>,
    /// Per-key maxima over all samples.
    pub extra: BTreeMap<String, f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDescriptor {
    pub name: String,
    pub order: usize,
    pub subgroup_order: usize,
    pub double_cosets: usize,
    pub bounded_equals_positive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub pair: PairDescriptor,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub checks: Vec<CheckRecord>,
}

impl TheoremReport {
    /// True when every non-diagnostic check passed.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, id: CheckId) -> &CheckRecord {
        self.checks
            .iter()
            .find(|c| c.id == id)
            .expect("every check id is present")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub name: String,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            name: String::new(),
            trials: DEFAULT_TRIALS,
            seed: 0,
            tol: DEFAULT_TOL,
        }
    }
}

/// Runs every check on `table`.
pub fn run_suite(table: &SphericalTable, options: &SuiteOptions) -> TheoremReport {
    let xs = samples(table, options.trials, options.seed);
    let mut acc: Vec<Accumulator> = CheckId::ALL.iter().map(|&id| Accumulator::new(id)).collect();
    for x in &xs {
        let cache = Cache::new(table, &x.m);
        for a in acc.iter_mut().filter(|a| a.id.per_sample()) {
            a.add(evaluate(a.id, &cache, x, options.seed), Some(x.index));
        }
    }
    let empty = Sample {
        index: 0,
        m: Multiplier::constant(0, Complex64::new(0.0, 0.0)),
        m2: Multiplier::constant(0, Complex64::new(0.0, 0.0)),
        f: BiInvariantFunction::zeros(0),
        g: BiInvariantFunction::zeros(0),
    };
    let cache = Cache::new(table, &empty.m);
    for a in acc.iter_mut().filter(|a| !a.id.per_sample()) {
        a.add(evaluate(a.id, &cache, &empty, options.seed), None);
    }
    let pair = table.pair();
    TheoremReport {
        pair: PairDescriptor {
            name: options.name.clone(),
            order: pair.group().order(),
            subgroup_order: pair.subgroup().len(),
            double_cosets: pair.num_cosets(),
            bounded_equals_positive: table.bounded_equals_positive(),
        },
        seed: options.seed,
        trials: options.trials,
        tolerance: options.tol,
        checks: acc.into_iter().map(|a| a.finish(&xs, options.tol)).collect(),
    }
}

struct Accumulator {
    id: CheckId,
    best: Option<(Measure, Option<usize>)>,
    extra: BTreeMap<String, f64>,
    error: Option<String>,
}

impl Accumulator {
    fn new(id: CheckId) -> Self {
        Self {
            id,
            best: None,
            extra: BTreeMap::new(),
            error: None,
        }
    }

    fn add(&mut self, m: Result<Measure>, index: Option<usize>) {
        let m = match m {
            Ok(m) => m,
            Err(e) => {
                self.error.get_or_insert_with(|| match index {
                    Some(i) => format!("sample {i}: {e}"),
                    None => e.to_string(),
                });
                return;
            }
        };
        for (k, v) in &m.extra {
            let slot = self.extra.entry(k.to_string()).or_insert(*v);
            *slot = slot.max(*v);
        }
        let worse = match &self.best {
            None => true,
            Some((b, _)) => match self.id.kind() {
                Kind::Identity => m.observed > b.observed,
                Kind::Inequality => m.margin() < b.margin(),
            },
        };
        if worse {
            self.best = Some((m, index));
        }
    }

    fn finish(self, xs: &[Sample], tol: f64) -> CheckRecord {
        let id = self.id;
        let (worst, bound, margin, witness) = match &self.best {
            Some((m, x)) => (
                m.observed,
                m.bound,
                m.bound.map(|_| m.margin()),
                x.map(|i| Witness::of(&xs[i])),
            ),
            None => (0.0, None, None, None),
        };
        let ok = match id.kind() {
            Kind::Identity => worst <= tol,
            Kind::Inequality => margin.is_none_or(|mg| mg >= -tol),
        };
        CheckRecord {
            id,
            theorem: id.theorem().to_string(),
            convention: id.convention().to_string(),
            mode: id.mode(),
            worst,
            bound,
            margin,
            pass: id.mode() == Mode::Diagnostic || (self.error.is_none() && ok),
            witness,
            extra: self.extra,
            error: self.error,
        }
    }
}

/// Re-evaluates `id` on a stored witness and returns the value recorded as `worst`.
pub fn replay(id: CheckId, table: &SphericalTable, witness: &Witness, seed: u64) -> Result<f64> {
    let x = witness.sample()?;
    for len in [x.m.len(), x.m2.len(), x.f.len(), x.g.len()] {
        if len != table.len() {
            return Err(Error::DimensionMismatch {
                expected: table.len(),
                actual: len,
            });
        }
    }
    Ok(evaluate(id, &Cache::new(table, &x.m), &x, seed)?.observed)
}
