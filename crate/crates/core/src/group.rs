//! Finite matrix groups: closure, orbits, averaging, projections.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;


#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::operator_norm;
use crate::linalg::{self, Matrix};
use crate::reflections::{commute, max_isometry_violation, Reflection};
use crate::spaces::{sample_sphere, NormSpec, SphereSample, Vector};
use crate::{Error, Result};

pub const DEFAULT_GROUP_CAP: usize = 10_000;
/// Two matrices are the same group element when entries agree to this.
pub const ELEMENT_TOL: f64 = 1e-9;
/// Refinement steps used when measuring projection norms.
pub const PROJECTION_REFINE_STEPS: usize = 40;

/// Set of matrices with tolerance-based lookup.
///
/// Matrices are bucketed by a fixed generic linear projection of their entries;
/// a lookup scans the neighbouring buckets and compares entrywise.
#[derive(Debug, Clone, Default)]
pub struct MatrixSet {
    items: Vec<Matrix>,
    buckets: BTreeMap<i64, Vec<usize>>,
}

const BUCKET_SCALE: f64 = 1e7;

fn projection_key(m: &Matrix) -> f64 {
    m.as_slice()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let w = ((k as f64 + 1.0) * 0.618_033_988_749_895).fract() + 0.5;
            w * v
        })
        .sum()
}

impl MatrixSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Matrix] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Matrix> {
        self.items
    }

    pub fn find(&self, m: &Matrix) -> Option<usize> {
        let b = (projection_key(m) * BUCKET_SCALE).floor() as i64;
        (b - 1..=b + 1).find_map(|k| {
            self.buckets.get(&k)?.iter().copied().find(|&i| self.items[i].max_abs_diff(m) <= ELEMENT_TOL)
        })
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.find(m).is_some()
    }

    /// Inserts unless present; returns whether the set grew.
    pub fn insert(&mut self, m: Matrix) -> bool {
        if self.contains(&m) {
            return false;
        }
        let b = (projection_key(&m) * BUCKET_SCALE).floor() as i64;
        self.buckets.entry(b).or_default().push(self.items.len());
        self.items.push(m);
        true
    }
}

#[derive(Debug, Clone)]
pub struct GroupClosure {
    pub elements: Vec<Matrix>,
    pub generators: Vec<Matrix>,
    pub capped: bool,
}

impl GroupClosure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    fn require_finite(&self) -> Result<()> {
        if self.capped {
            Err(Error::CappedGroup)
        } else {
            Ok(())
        }
    }
}

/// Breadth-first closure of the generators under left multiplication.
pub fn generate(generators: &[Matrix], dim: usize, cap: usize) -> Result<GroupClosure> {
    if let Some(g) = generators.iter().find(|g| g.rows() != dim || g.cols() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: g.rows() });
    }
    let mut set = MatrixSet::new();
    set.insert(Matrix::identity(dim));
    let mut capped = false;
    let mut head = 0;
    'bfs: while head < set.len() {
        let x = set.items()[head].clone();
        head += 1;
        for g in generators {
            let y = g.mul(&x);
            if !set.contains(&y) {
                if set.len() >= cap {
                    capped = true;
                    break 'bfs;
                }
                set.insert(y);
            }
        }
    }
    Ok(GroupClosure { elements: set.into_items(), generators: generators.to_vec(), capped })
}

/// Closure generated by reflection matrices.
pub fn generate_from_reflections(reflections: &[Reflection], dim: usize, cap: usize) -> Result<GroupClosure> {
    let gens: Vec<Matrix> = reflections.iter().map(|r| r.matrix().clone()).collect();
    generate(&gens, dim, cap)
}

/// `{g x : g ∈ W}` without repetitions, in element order.
pub fn orbit(closure: &GroupClosure, x: &Vector) -> Result<Vec<Vector>> {
    closure.require_finite()?;
    if x.dim() != closure.dim() {
        return Err(Error::DimensionMismatch { expected: closure.dim(), found: x.dim() });
    }
    let mut out: Vec<Vector> = Vec::new();
    for g in &closure.elements {
        let y = g.mul_vec(x.as_slice());
        if !out.iter().any(|z| linalg::max_abs_diff(&z.0, &y) <= ELEMENT_TOL) {
            out.push(Vector(y));
        }
    }
    Ok(out)
}

/// Scalar product `⟨x, y⟩ = xᵀ G y` invariant under a finite group.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantProduct {
    pub gram: Matrix,
}

impl InvariantProduct {
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        linalg::dot(x, &self.gram.mul_vec(y))
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.inner(x, x).sqrt()
    }

    /// Angle between the lines spanned by `x` and `y`, in `[0, π/2]`.
    pub fn line_angle(&self, x: &[f64], y: &[f64]) -> f64 {
        let c = self.inner(x, y).abs() / (self.norm(x) * self.norm(y));
        c.min(1.0).acos()
    }
}

/// `G = (1/|W|) Σ gᵀg`.
pub fn invariant_product(closure: &GroupClosure) -> Result<InvariantProduct> {
    closure.require_finite()?;
    let n = closure.dim();
    let mut gram = Matrix::zeros(n, n);
    for g in &closure.elements {
        gram = gram.add(&g.transpose().mul(g));
    }
    let gram = gram.scale(1.0 / closure.order() as f64);
    let sym = gram.add(&gram.transpose()).scale(0.5);
    Ok(InvariantProduct { gram: sym })
}

/// Orthonormal basis of `∩ Ker e_i*` in `R^dim`.
pub fn fixed_subspace(dim: usize, reflections: &[Reflection]) -> Result<Vec<Vec<f64>>> {
    if let Some(r) = reflections.iter().find(|r| r.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: r.dim() });
    }
    if reflections.is_empty() {
        return Ok((0..dim).map(|i| linalg::unit(dim, i)).collect());
    }
    let rows: Vec<Vec<f64>> = reflections.iter().map(|r| r.e_star().0.clone()).collect();
    Ok(Matrix::from_rows(&rows).null_space(1e-10))
}

/// A projection with its measured norms.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionCert {
    pub matrix: Matrix,
    pub image_basis: Vec<Vec<f64>>,
    pub kernel_basis: Vec<Vec<f64>>,
    pub norm_p: f64,
    pub norm_complement: f64,
    pub sample_seed: u64,
    pub sample_count: usize,
}

impl ProjectionCert {
    pub fn idempotency_defect(&self) -> f64 {
        self.matrix.mul(&self.matrix).max_abs_diff(&self.matrix)
    }

    fn measure(spec: &NormSpec, matrix: Matrix, sample: &SphereSample) -> Self {
        let n = matrix.rows();
        let complement = Matrix::identity(n).sub(&matrix);
        ProjectionCert {
            image_basis: matrix.range(1e-10),
            kernel_basis: matrix.null_space(1e-10),
            norm_p: operator_norm(&matrix, spec, sample, PROJECTION_REFINE_STEPS).value,
            norm_complement: operator_norm(&complement, spec, sample, PROJECTION_REFINE_STEPS).value,
            sample_seed: sample.seed,
            sample_count: sample.count,
            matrix,
        }
    }
}

/// `p = ½(1 - ∏ s_i)` for pairwise commuting reflections.
pub fn product_projection(spec: &NormSpec, commuting: &[Reflection], sample: &SphereSample) -> Result<ProjectionCert> {
    let n = spec.dim();
    if let Some(r) = commuting.iter().find(|r| r.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: r.dim() });
    }
    for i in 0..commuting.len() {
        for j in i + 1..commuting.len() {
            if !commute(&commuting[i], &commuting[j]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let prod = commuting.iter().fold(Matrix::identity(n), |acc, s| acc.mul(s.matrix()));
    let p = Matrix::identity(n).sub(&prod).scale(0.5);
    Ok(ProjectionCert::measure(spec, p, sample))
}

/// `p' = (1/|W|) Σ g`, the projection onto the fixed space of `W`.
pub fn averaging_projection(spec: &NormSpec, closure: &GroupClosure, sample: &SphereSample) -> Result<ProjectionCert> {
    closure.require_finite()?;
    let n = closure.dim();
    if n != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: n });
    }
    let sum = closure.elements.iter().fold(Matrix::zeros(n, n), |acc, g| acc.add(g));
    Ok(ProjectionCert::measure(spec, sum.scale(1.0 / closure.order() as f64), sample))
}

/// `max |‖x+y‖² + ‖x−y‖² − 2‖x‖² − 2‖y‖²|`.
pub fn four_squares_residual(spec: &NormSpec, pairs: &[(Vector, Vector)]) -> f64 {
    pairs
        .iter()
        .map(|(x, y)| {
            let (x, y) = (x.as_slice(), y.as_slice());
            let s: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            (spec.norm(&s).powi(2) + spec.norm(&d).powi(2) - 2.0 * spec.norm(x).powi(2) - 2.0 * spec.norm(y).powi(2))
                .abs()
        })
        .fold(0.0, f64::max)
}

/// Checks that the projections are pairwise orthogonal (`p_i p_j = 0`) and that
/// each `1 - 2p_i` is isometric on a fixed sample.
pub fn check_orthogonal_family(spec: &NormSpec, projections: &[Matrix]) -> Result<()> {
    let n = spec.dim();
    for (i, p) in projections.iter().enumerate() {
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.rows() });
        }
        for (j, q) in projections.iter().enumerate() {
            if i != j && p.mul(q).max_abs() > 1e-10 {
                return Err(Error::NotOrthogonal(i.min(j), i.max(j)));
            }
        }
    }
    let sample = sample_sphere(spec, 64, 0);
    for (i, p) in projections.iter().enumerate() {
        let u = Matrix::identity(n).sub(&p.scale(2.0));
        if max_isometry_violation(&u, spec, &sample) > 1e-9 {
            return Err(Error::NotIsometric(i));
        }
    }
    Ok(())
}

/// `max_i ‖(1 − p_i)x‖ − (1 − 1/k)‖x‖` with no validation of the family.
pub fn complement_bound_slack(spec: &NormSpec, projections: &[Matrix], x: &Vector) -> f64 {
    let n = spec.dim();
    let k = projections.len() as f64;
    let best = projections
        .iter()
        .map(|p| spec.norm(&Matrix::identity(n).sub(p).mul_vec(x.as_slice())))
        .fold(0.0, f64::max);
    best - (1.0 - 1.0 / k) * spec.norm(x.as_slice())
}

/// Validated form of [`complement_bound_slack`].
pub fn orthogonal_complement_bound_check(spec: &NormSpec, projections: &[Matrix], x: &Vector) -> Result<f64> {
    if x.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: x.dim() });
    }
    if projections.is_empty() {
        return Err(Error::Empty("projections"));
    }
    check_orthogonal_family(spec, projections)?;
    Ok(complement_bound_slack(spec, projections, x))
}

/// Diagonal coordinate projection onto `coords`.
pub fn coordinate_projection(dim: usize, coords: &[usize]) -> Matrix {
    let mut d = vec![0.0; dim];
    for &c in coords {
        d[c] = 1.0;
    }
    Matrix::diagonal(&d)
}
