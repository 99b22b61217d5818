//! Hilbert/Coxeter strip decomposition of coordinate norms.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use petgraph::unionfind::UnionFind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::coxeter::{build_graph, classify, TypeLabel, DEFAULT_ORDER_CAP};
use crate::group::{four_squares_residual, product_projection, ProjectionCert};
use crate::linalg::{self, plane_rotation, Matrix};
use crate::rational::{q, q_frac, QVector};
use crate::reflections::{
    is_isometric, make_exact_reflection, make_reflection, max_isometry_violation, sign_change, Reflection,
};
use crate::spaces::{sample_sphere, Functional, NormSpec, SphereSample, Vector};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct StripTestConfig {
    pub rotation_angles: Vec<f64>,
    pub sample_count: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for StripTestConfig {
    fn default() -> Self {
        Self { rotation_angles: vec![1.0, 0.1, PI / 4.0, 2.0 * PI / 5.0], sample_count: 256, seed: 0, tolerance: 1e-9 }
    }
}

impl StripTestConfig {
    fn sample(&self, spec: &NormSpec) -> SphereSample {
        sample_sphere(spec, self.sample_count, self.seed)
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) || self.rotation_angles.is_empty() || self.sample_count == 0 {
            return Err(crate::Error::InvalidSpec("strip test config needs tolerance > 0, angles and samples".into()));
        }
        Ok(())
    }
}

/// Coordinate sign changes that are isometries of `spec`, with their coordinates.
pub fn sign_change_reflections(spec: &NormSpec, cfg: &StripTestConfig) -> Result<Vec<(usize, Reflection)>> {
    let sample = cfg.sample(spec);
    let mut out = Vec::new();
    for i in 0..spec.dim() {
        let s = sign_change(spec.dim(), i);
        if is_isometric(&s, spec, &sample)?.holds(cfg.tolerance) {
            out.push((i, s));
        }
    }
    Ok(out)
}

/// Evidence that two coordinates were not joined.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub pair: (usize, usize),
    pub angle: f64,
    pub point: Vector,
    pub residual: f64,
    /// Four-squares residual on the coordinate plane of the pair.
    pub pair_four_squares: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HilbertStrip {
    pub indices: Vec<usize>,
    pub four_squares_residual: f64,
    pub rotation_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HilbertPairs {
    pub strips: Vec<HilbertStrip>,
    pub witnesses: Vec<Witness>,
    /// Rotations in the joined coordinate planes.
    pub generators: Vec<Matrix>,
}

/// `max_{θ, x} |‖R_θ x‖ − ‖x‖|` and the worst `(θ, x)`.
fn rotation_residual(spec: &NormSpec, i: usize, j: usize, angles: &[f64], sample: &SphereSample) -> (f64, f64, Vector) {
    let mut worst = (0.0, angles[0], sample.points[0].clone());
    for &t in angles {
        let r = plane_rotation(spec.dim(), i, j, t);
        for x in &sample.points {
            let d = (spec.norm(&r.mul_vec(x.as_slice())) - spec.norm(x.as_slice())).abs();
            if d > worst.0 {
                worst = (d, t, x.clone());
            }
        }
    }
    worst
}

/// `count` pairs of Gaussian vectors supported on `coords`.
pub fn supported_pairs(dim: usize, coords: &[usize], count: usize, seed: u64) -> Vec<(Vector, Vector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf0u64);
    let draw = |rng: &mut ChaCha8Rng| {
        let mut v = vec![0.0; dim];
        for &c in coords {
            v[c] = rng.sample(StandardNormal);
        }
        Vector(v)
    };
    (0..count).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

const FOUR_SQUARES_PAIRS: usize = 100;

/// Joins `i, j` when every test rotation of the `(i, j)` plane is isometric;
/// classes are the union-find closure of the joins (pairs in lexicographic
/// order), kept when of size ≥ 2.
pub fn hilbert_pairs(spec: &NormSpec, coords: &[usize], cfg: &StripTestConfig) -> Result<HilbertPairs> {
    cfg.validate()?;
    let n = spec.dim();
    let sample = cfg.sample(spec);
    let mut uf = UnionFind::<usize>::new(n);
    let mut joined: Vec<(usize, usize, f64)> = Vec::new();
    let mut witnesses = Vec::new();
    let mut generators = Vec::new();
    for (a, &i) in coords.iter().enumerate() {
        for &j in &coords[a + 1..] {
            let (res, angle, point) = rotation_residual(spec, i, j, &cfg.rotation_angles, &sample);
            if res <= cfg.tolerance {
                uf.union(i, j);
                joined.push((i, j, res));
                generators.push(plane_rotation(n, i, j, cfg.rotation_angles[0]));
            } else {
                let pairs = supported_pairs(n, &[i, j], FOUR_SQUARES_PAIRS, cfg.seed);
                witnesses.push(Witness {
                    pair: (i, j),
                    angle,
                    point,
                    residual: res,
                    pair_four_squares: four_squares_residual(spec, &pairs),
                });
            }
        }
    }
    let mut strips = Vec::new();
    for class in classes(&mut uf, coords) {
        if class.len() < 2 {
            continue;
        }
        let pairs = supported_pairs(n, &class, FOUR_SQUARES_PAIRS, cfg.seed);
        let rotation_residual = joined
            .iter()
            .filter(|(i, _, _)| class.contains(i))
            .map(|&(_, _, r)| r)
            .fold(0.0, f64::max);
        strips.push(HilbertStrip {
            four_squares_residual: four_squares_residual(spec, &pairs),
            rotation_residual,
            indices: class,
        });
    }
    Ok(HilbertPairs { strips, witnesses, generators })
}

/// Union-find classes restricted to `coords`, ordered by smallest member.
fn classes(uf: &mut UnionFind<usize>, coords: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = coords.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
    for &c in &sorted {
        let r = uf.find_mut(c);
        match out.iter_mut().find(|(root, _)| *root == r) {
            Some((_, v)) => v.push(c),
            None => out.push((r, vec![c])),
        }
    }
    out.into_iter().map(|(_, v)| v).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoxeterStrip {
    pub indices: Vec<usize>,
    pub label: TypeLabel,
    /// Swap-type reflections found inside the strip, as `(i, j, sign)` for the
    /// axis `ε_i − sign·ε_j`.
    pub found: Vec<(usize, usize, i8)>,
    pub reflections: Vec<Reflection>,
}

/// Reflection along `ε_i − sign·ε_j`. For polytope norms this is the exact
/// euclidean reflection (the only candidate that can permute the vertices);
/// otherwise the functional is the norming functional of the unit axis,
/// rescaled to pairing 1.
fn swap_candidate(spec: &NormSpec, i: usize, j: usize, sign: i8) -> Result<Reflection> {
    let n = spec.dim();
    if spec.as_polytope().is_some() {
        let mut axis = QVector::zeros(n);
        axis.0[i] = q(1);
        axis.0[j] = q(-i64::from(sign));
        let f = axis.scale(&q_frac(1, 2));
        return make_exact_reflection(axis, f);
    }
    let mut axis = vec![0.0; n];
    axis[i] = 1.0;
    axis[j] = -f64::from(sign);
    let norm = spec.norm(&axis);
    let e: Vec<f64> = axis.iter().map(|x| x / norm).collect();
    let f = spec.norming_functional(&Vector(e.clone()))?.functional.0;
    let pairing = linalg::dot(&f, &e);
    make_reflection(Vector(e), Functional(f.iter().map(|x| x / pairing).collect()))
}

/// Isometric coordinate sign changes followed by isometric reflections along
/// `ε_i − ε_j` and `ε_i + ε_j` (`i < j`), in that order.
pub fn coordinate_reflections(spec: &NormSpec, cfg: &StripTestConfig) -> Result<Vec<Reflection>> {
    cfg.validate()?;
    let sample = cfg.sample(spec);
    let mut out: Vec<Reflection> = sign_change_reflections(spec, cfg)?.into_iter().map(|(_, s)| s).collect();
    for i in 0..spec.dim() {
        for j in i + 1..spec.dim() {
            for sign in [1i8, -1] {
                let s = swap_candidate(spec, i, j, sign)?;
                if is_isometric(&s, spec, &sample)?.holds(cfg.tolerance) {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

/// Joins `i, j` when a reflection along `ε_i ∓ ε_j` is isometric, then labels
/// each class from the found reflections plus the class's sign changes.
pub fn coxeter_strips(spec: &NormSpec, remaining: &[usize], cfg: &StripTestConfig) -> Result<Vec<CoxeterStrip>> {
    cfg.validate()?;
    let n = spec.dim();
    let sample = cfg.sample(spec);
    let mut uf = UnionFind::<usize>::new(n);
    let mut found: Vec<(usize, usize, i8, Reflection)> = Vec::new();
    for (a, &i) in remaining.iter().enumerate() {
        for &j in &remaining[a + 1..] {
            for sign in [1i8, -1] {
                let s = swap_candidate(spec, i, j, sign)?;
                if is_isometric(&s, spec, &sample)?.holds(cfg.tolerance) {
                    uf.union(i, j);
                    found.push((i, j, sign, s));
                }
            }
        }
    }
    let mut strips = Vec::new();
    for class in classes(&mut uf, remaining) {
        let mut reflections: Vec<Reflection> = class.iter().map(|&c| sign_change(n, c)).collect();
        let mut used = Vec::new();
        for (i, j, sign, s) in &found {
            if class.contains(i) {
                reflections.push(s.clone());
                used.push((*i, *j, *sign));
            }
        }
        let graph = build_graph(&reflections, DEFAULT_ORDER_CAP)?;
        let label = if graph.components.len() == 1 {
            classify(&graph, &graph.components[0])?.label
        } else {
            TypeLabel::new(crate::coxeter::Family::Unknown, class.len())
        };
        strips.push(CoxeterStrip { indices: class, label, found: used, reflections });
    }
    Ok(strips)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripKind {
    Hilbert,
    Coxeter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripProjection {
    pub kind: StripKind,
    pub indices: Vec<usize>,
    pub cert: ProjectionCert,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub dim: usize,
    pub hilbert_strips: Vec<HilbertStrip>,
    pub coxeter_strips: Vec<CoxeterStrip>,
    pub projections: Vec<StripProjection>,
    pub uncovered: Vec<usize>,
    pub witnesses: Vec<Witness>,
    /// Every generator found maps each strip onto a strip of the same size and kind.
    pub partition_preserved: bool,
    /// Hilbert classes come from rotation joinability, a finite stand-in for
    /// orbits of the identity component.
    pub surrogate_criterion: bool,
    pub ideal: bool,
    pub diagnostics: Vec<String>,
}

impl DecompositionReport {
    pub fn hilbert_indices(&self) -> Vec<Vec<usize>> {
        self.hilbert_strips.iter().map(|s| s.indices.clone()).collect()
    }

    pub fn coxeter_indices(&self) -> Vec<Vec<usize>> {
        self.coxeter_strips.iter().map(|s| s.indices.clone()).collect()
    }

    /// Strips in report order, tagged by kind.
    pub fn strips(&self) -> Vec<(StripKind, Vec<usize>)> {
        self.hilbert_strips
            .iter()
            .map(|s| (StripKind::Hilbert, s.indices.clone()))
            .chain(self.coxeter_strips.iter().map(|s| (StripKind::Coxeter, s.indices.clone())))
            .collect()
    }
}

pub fn decompose(spec: &NormSpec, cfg: &StripTestConfig) -> Result<DecompositionReport> {
    cfg.validate()?;
    let n = spec.dim();
    let signs = sign_change_reflections(spec, cfg)?;
    let covered: Vec<usize> = signs.iter().map(|(i, _)| *i).collect();
    let uncovered: Vec<usize> = (0..n).filter(|i| !covered.contains(i)).collect();
    let mut diagnostics = Vec::new();
    if spec.is_ideal() && !uncovered.is_empty() {
        diagnostics.push(format!("ideal norm with non-isometric sign changes at {uncovered:?}"));
    }
    let hilbert = hilbert_pairs(spec, &covered, cfg)?;
    let in_hilbert: Vec<usize> = hilbert.strips.iter().flat_map(|s| s.indices.clone()).collect();
    let remaining: Vec<usize> = covered.iter().copied().filter(|i| !in_hilbert.contains(i)).collect();
    let coxeter = coxeter_strips(spec, &remaining, cfg)?;

    let sample = cfg.sample(spec);
    let mut projections = Vec::new();
    let tagged = hilbert
        .strips
        .iter()
        .map(|s| (StripKind::Hilbert, &s.indices))
        .chain(coxeter.iter().map(|s| (StripKind::Coxeter, &s.indices)));
    for (kind, indices) in tagged {
        let refl: Vec<Reflection> = indices.iter().map(|&c| sign_change(n, c)).collect();
        let cert = product_projection(spec, &refl, &sample)?;
        projections.push(StripProjection { kind, indices: indices.clone(), cert });
    }

    let mut report = DecompositionReport {
        dim: n,
        hilbert_strips: hilbert.strips,
        coxeter_strips: coxeter,
        projections,
        uncovered,
        witnesses: hilbert.witnesses,
        partition_preserved: true,
        surrogate_criterion: true,
        ideal: spec.is_ideal(),
        diagnostics,
    };
    let mut generators: Vec<Matrix> = signs.iter().map(|(_, s)| s.matrix().clone()).collect();
    generators.extend(hilbert.generators);
    for s in &report.coxeter_strips {
        generators.extend(s.reflections.iter().map(|r| r.matrix().clone()));
    }
    let strips = report.strips();
    report.partition_preserved = generators.iter().all(|g| preserves_partition(g, &strips));
    Ok(report)
}

/// `g` maps each strip's coordinate subspace onto the subspace of a strip of
/// the same kind and size.
pub fn preserves_partition(g: &Matrix, strips: &[(StripKind, Vec<usize>)]) -> bool {
    strips.iter().all(|(kind, s)| {
        let mut support: Vec<usize> =
            (0..g.rows()).filter(|&r| s.iter().any(|&c| g[(r, c)].abs() > 1e-12)).collect();
        support.sort_unstable();
        strips.iter().any(|(k2, t)| {
            let mut t = t.clone();
            t.sort_unstable();
            k2 == kind && t.len() == s.len() && t == support
        })
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripBound {
    pub kind: StripKind,
    pub indices: Vec<usize>,
    pub norm_p: f64,
    pub norm_complement: f64,
    pub within_bounds: bool,
}

/// Measured `(‖p‖, ‖1−p‖)` per strip; ideal norms must give `(1, 1)` (or
/// `(1, 0)` for the full-space strip), others `‖p‖ ≤ 2`, `‖1−p‖ ≤ 1`.
pub fn strip_projection_bounds(
    spec: &NormSpec,
    report: &DecompositionReport,
    sample: &SphereSample,
) -> Result<Vec<StripBound>> {
    let n = spec.dim();
    let tol = 1e-9;
    report
        .projections
        .iter()
        .map(|sp| {
            let refl: Vec<Reflection> = sp.indices.iter().map(|&c| sign_change(n, c)).collect();
            let cert = product_projection(spec, &refl, sample)?;
            let full = sp.indices.len() == n;
            let within_bounds = if report.ideal {
                (cert.norm_p - 1.0).abs() <= tol
                    && if full { cert.norm_complement <= tol } else { (cert.norm_complement - 1.0).abs() <= tol }
            } else {
                cert.norm_p <= 2.0 + tol && cert.norm_complement <= 1.0 + tol
            };
            Ok(StripBound {
                kind: sp.kind,
                indices: sp.indices.clone(),
                norm_p: cert.norm_p,
                norm_complement: cert.norm_complement,
                within_bounds,
            })
        })
        .collect()
}

/// Largest isometry residual of `m` over a sample, re-exported for reports.
pub fn isometry_residual(m: &Matrix, spec: &NormSpec, sample: &SphereSample) -> f64 {
    max_isometry_violation(m, spec, sample)
}
