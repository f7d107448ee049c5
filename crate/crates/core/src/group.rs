//! Finite permutation groups with normalized counting (Haar) measure.
//!
//! Elements are indexed `0..order` in breadth-first discovery order with the
//! identity at index 0. The Haar measure gives every element weight `1/|G|`,
//! so all `L^p` norms and convolutions below are normalized.

use std::collections::HashMap;
use std::collections::VecDeque;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest permutation degree accepted from untrusted input.
pub const MAX_DEGREE: usize = 4096;

/// Knobs for group construction and table validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupOptions {
    /// Closure aborts with [`Error::GroupTooLarge`] past this order.
    pub max_order: usize,
    /// Associativity is checked on every triple up to this order and on
    /// `10 * order` random triples above it.
    pub associativity_cap: usize,
}

impl Default for GroupOptions {
    fn default() -> Self {
        Self {
            max_order: 10_000,
            associativity_cap: 512,
        }
    }
}

/// An enumerated finite group: multiplication and inverse tables plus labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<Vec<u32>>,
}

impl FiniteGroup {
    /// Builds a group from raw tables, validating the group axioms.
    ///
    /// `mul` is row-major: `mul[a * order + b]` is the index of `a·b`.
    pub fn from_tables(
        identity: usize,
        mul: Vec<u32>,
        inv: Vec<u32>,
        labels: Vec<Vec<u32>>,
        options: &GroupOptions,
    ) -> Result<Self> {
        let order = inv.len();
        if order == 0 {
            return Err(Error::InvalidGroupTable("empty group".into()));
        }
        if mul.len() != order * order {
            return Err(Error::InvalidGroupTable(format!(
                "multiplication table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if labels.len() != order {
            return Err(Error::InvalidGroupTable("label count differs from order".into()));
        }
        if identity >= order || mul.iter().chain(inv.iter()).any(|&x| x as usize >= order) {
            return Err(Error::InvalidGroupTable("element index out of range".into()));
        }
        let group = Self {
            order,
            identity,
            mul,
            inv,
            labels,
        };
        group.validate(options)?;
        Ok(group)
    }

    fn validate(&self, options: &GroupOptions) -> Result<()> {
        let e = self.identity;
        for x in 0..self.order {
            if self.mul(e, x) != x || self.mul(x, e) != x {
                return Err(Error::InvalidGroupTable(format!("identity law fails at {x}")));
            }
            if self.mul(x, self.inv(x)) != e {
                return Err(Error::InvalidGroupTable(format!("inverse law fails at {x}")));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        if self.order <= options.associativity_cap {
            for a in 0..self.order {
                for b in 0..self.order {
                    for c in 0..self.order {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidGroupTable(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.order as u64);
            for _ in 0..10 * self.order {
                let (a, b, c) = (
                    rng.gen_range(0..self.order),
                    rng.gen_range(0..self.order),
                    rng.gen_range(0..self.order),
                );
                if !assoc(a, b, c) {
                    return Err(Error::InvalidGroupTable(format!(
                        "associativity fails at ({a}, {b}, {c})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// Permutation images (or other caller-supplied labels) for each element.
    pub fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }

    /// Index of the element carrying `label`, if any.
    pub fn find(&self, label: &[u32]) -> Option<usize> {
        self.labels.iter().position(|l| l.as_slice() == label)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

fn check_permutation(degree: usize, images: &[u32]) -> Result<()> {
    if images.len() != degree {
        return Err(Error::InvalidPermutation(format!(
            "expected {degree} images, got {}",
            images.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &i in images {
        let i = i as usize;
        if i >= degree || seen[i] {
            return Err(Error::InvalidPermutation(format!(
                "{images:?} is not a bijection on 0..{degree}"
            )));
        }
        seen[i] = true;
    }
    Ok(())
}

/// `(a·b)(i) = a(b(i))`: apply `b` first.
fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&i| a[i as usize]).collect()
}

/// Breadth-first closure of `generators` under composition.
///
/// The identity permutation is element 0; the remaining elements follow in
/// discovery order, so tables are reproducible across runs.
pub fn build_group(
    degree: usize,
    generators: &[Vec<u32>],
    options: &GroupOptions,
) -> Result<FiniteGroup> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::InvalidPermutation(format!(
            "degree {degree} outside 1..={MAX_DEGREE}"
        )));
    }
    for g in generators {
        check_permutation(degree, g)?;
    }

    let identity: Vec<u32> = (0..degree as u32).collect();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = compose(&elements[x], g);
            if !index.contains_key(&y) {
                if elements.len() >= options.max_order {
                    return Err(Error::GroupTooLarge {
                        cap: options.max_order,
                    });
                }
                index.insert(y.clone(), elements.len() as u32);
                queue.push_back(elements.len());
                elements.push(y);
            }
        }
    }

    let order = elements.len();
    let mut mul = Vec::with_capacity(order * order);
    for a in &elements {
        for b in &elements {
            // Closed under composition: the generators generate everything we found.
            mul.push(index[&compose(a, b)]);
        }
    }
    let mut inv = vec![0u32; order];
    for (x, perm) in elements.iter().enumerate() {
        let mut inverse = vec![0u32; degree];
        for (i, &img) in perm.iter().enumerate() {
            inverse[img as usize] = i as u32;
        }
        inv[x] = index[&inverse];
    }
    FiniteGroup::from_tables(0, mul, inv, elements, options)
}

/// A complex-valued function on the elements of a finite group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { values })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(order: usize, value: Complex64) -> Self {
        Self {
            values: vec![value; order],
        }
    }

    /// `scale · 1_{x}`.
    pub fn point_mass(order: usize, x: usize, scale: f64) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); order];
        values[x] = Complex64::new(scale, 0.0);
        Self { values }
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

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// Weighted `L^p` norm of `(weight, |value|)` pairs.
pub(crate) fn weighted_lp(values: impl Iterator<Item = (f64, f64)>, p: f64) -> f64 {
    if p.is_infinite() {
        values
            .filter(|&(w, _)| w > 0.0)
            .map(|(_, a)| a)
            .fold(0.0, f64::max)
    } else if p == 1.0 {
        values.map(|(w, a)| w * a).sum()
    } else if p == 2.0 {
        values.map(|(w, a)| w * a * a).sum::<f64>().sqrt()
    } else {
        // Scale by the largest entry so large p cannot overflow.
        let values: Vec<(f64, f64)> = values.collect();
        let top = values.iter().filter(|&&(w, _)| w > 0.0).map(|&(_, a)| a).fold(0.0, f64::max);
        if top == 0.0 || !top.is_finite() {
            return top;
        }
        top * values.iter().map(|&(w, a)| w * (a / top).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `((1/|G|) Σ |f(x)|^p)^{1/p}`, or `max |f|` for `p = ∞`.
pub fn lp_norm(f: &GroupFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let w = 1.0 / f.len() as f64;
    Ok(weighted_lp(f.values.iter().map(|v| (w, v.norm())), p))
}

/// `(f∗g)(x) = (1/|G|) Σ_y f(y) g(y⁻¹x)`.
pub fn convolve(f: &GroupFunction, g: &GroupFunction, group: &FiniteGroup) -> Result<GroupFunction> {
    let n = group.order();
    for h in [f, g] {
        if h.len() != n {
            return Err(Error::DomainMismatch {
                expected: n,
                actual: h.len(),
            });
        }
    }
    let scale = 1.0 / n as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for y in 0..n {
        let fy = f.values[y];
        if fy == Complex64::new(0.0, 0.0) {
            continue;
        }
        let yinv = group.inv(y);
        for (x, slot) in out.iter_mut().enumerate() {
            *slot += fy * g.values[group.mul(yinv, x)];
        }
    }
    out.iter_mut().for_each(|v| *v *= scale);
    Ok(GroupFunction { values: out })
}

/// `x ↦ conj(f(x⁻¹))`.
pub fn involution(f: &GroupFunction, group: &FiniteGroup) -> Result<GroupFunction> {
    if f.len() != group.order() {
        return Err(Error::DomainMismatch {
            expected: group.order(),
            actual: f.len(),
        });
    }
    Ok(GroupFunction {
        values: (0..group.order())
            .map(|x| f.values[group.inv(x)].conj())
            .collect(),
    })
}

/// Right-translation Haar defect `|(1/|G|)Σ f(x·y⁻¹) − (1/|G|)Σ f(x)|`.
///
/// Finite groups are unimodular, so this is zero up to summation order.
pub fn modular_defect(f: &GroupFunction, y: usize, group: &FiniteGroup) -> f64 {
    let n = group.order() as f64;
    let yinv = group.inv(y);
    let shifted: Complex64 = (0..group.order())
        .map(|x| f.values[group.mul(x, yinv)])
        .sum();
    let plain: Complex64 = f.values.iter().sum();
    ((shifted - plain) / n).norm()
}
