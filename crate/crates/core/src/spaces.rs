//! Norms on `R^n`: evaluation, norming functionals, sphere sampling.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[allow(unused_imports)]
use num_traits::Float;

use crate::polytope::{Membership, Polytope};
use crate::rational::QVector;
use crate::{Error, Result};

/// A point of `R^n` in floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn unit(n: usize, i: usize) -> Self {
        Self(crate::linalg::unit(n, i))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// A linear functional on `R^n`, given by its coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional(pub Vec<f64>);

impl Functional {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn apply(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(self.0.len(), x.len());
        crate::linalg::dot(&self.0, x)
    }

    /// `f(x)` with dimension checking.
    pub fn pairing(&self, x: &Vector) -> Result<f64> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        Ok(self.apply(&x.0))
    }
}

impl From<Vec<f64>> for Functional {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Exponent of an `ℓ_p`-type norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    fn validate(self) -> Result<()> {
        match self {
            Exponent::Finite(p) if !(p >= 1.0 && p.is_finite()) => {
                Err(Error::InvalidSpec(format!("exponent {p} must be ≥ 1")))
            }
            _ => Ok(()),
        }
    }
}

/// One slot of a nested norm: either the inner norm of a coordinate block or
/// a single raw coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum Slot {
    Block { spec: NormSpec, coords: Vec<usize> },
    Raw(usize),
}

impl Slot {
    fn coords(&self) -> Vec<usize> {
        match self {
            Slot::Block { coords, .. } => coords.clone(),
            Slot::Raw(c) => vec![*c],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    Lp(Exponent),
    /// `(Σ w_i |x_i|^p)^{1/p}`, or `max w_i |x_i|` for `p = ∞`.
    WeightedLp { p: Exponent, weights: Vec<f64> },
    /// Outer norm applied to the slot values.
    Nested { outer: Box<NormSpec>, slots: Vec<Slot> },
    /// `inf {λ > 0 : Σ |x_k/λ|^{p_k} ≤ 1}`.
    OrliczNakano(Vec<f64>),
    Polytope(Polytope),
}

/// A norm on `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    dim: usize,
    kind: NormKind,
}

/// Norming functional of a vector, with a flag for non-smooth points where a
/// choice had to be made.
#[derive(Debug, Clone, PartialEq)]
pub struct NormingFunctional {
    pub functional: Functional,
    pub non_unique: bool,
}

impl NormSpec {
    pub fn lp(dim: usize, p: Exponent) -> Result<Self> {
        check_dim(dim)?;
        p.validate()?;
        Ok(Self { dim, kind: NormKind::Lp(p) })
    }

    pub fn weighted_lp(p: Exponent, weights: Vec<f64>) -> Result<Self> {
        check_dim(weights.len())?;
        p.validate()?;
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidSpec("weights must be positive".into()));
        }
        Ok(Self { dim: weights.len(), kind: NormKind::WeightedLp { p, weights } })
    }

    pub fn orlicz_nakano(exponents: Vec<f64>) -> Result<Self> {
        check_dim(exponents.len())?;
        for &p in &exponents {
            Exponent::Finite(p).validate()?;
        }
        Ok(Self { dim: exponents.len(), kind: NormKind::OrliczNakano(exponents) })
    }

    /// Nested norm; the slots must partition `0..dim` and the outer norm must
    /// be monotone in absolute values.
    pub fn nested(dim: usize, outer: NormSpec, slots: Vec<Slot>) -> Result<Self> {
        check_dim(dim)?;
        if outer.dim != slots.len() {
            return Err(Error::DimensionMismatch { expected: slots.len(), found: outer.dim });
        }
        if !outer.is_ideal() {
            return Err(Error::InvalidSpec("outer norm of a nested norm must be ideal".into()));
        }
        let mut seen = vec![false; dim];
        for slot in &slots {
            if let Slot::Block { spec, coords } = slot {
                if spec.dim != coords.len() {
                    return Err(Error::DimensionMismatch { expected: coords.len(), found: spec.dim });
                }
            }
            for c in slot.coords() {
                if c >= dim || seen[c] {
                    return Err(Error::InvalidSpec(format!("slot coordinate {c} out of range or repeated")));
                }
                seen[c] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSpec("nested slots must cover every coordinate".into()));
        }
        Ok(Self { dim, kind: NormKind::Nested { outer: Box::new(outer), slots } })
    }

    pub fn polytope(dim: usize, vertices: Vec<QVector>) -> Result<Self> {
        Ok(Self { dim, kind: NormKind::Polytope(Polytope::new(dim, vertices)?) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match &self.kind {
            NormKind::Polytope(p) => Some(p),
            _ => None,
        }
    }

    /// Ideal (lattice) norms: `|y| ≤ |x|` coordinatewise implies `‖y‖ ≤ ‖x‖`.
    pub fn is_ideal(&self) -> bool {
        match &self.kind {
            NormKind::Lp(_) | NormKind::WeightedLp { .. } | NormKind::OrliczNakano(_) => true,
            NormKind::Nested { outer, slots } => {
                outer.is_ideal()
                    && slots.iter().all(|s| match s {
                        Slot::Block { spec, .. } => spec.is_ideal(),
                        Slot::Raw(_) => true,
                    })
            }
            NormKind::Polytope(_) => false,
        }
    }

    pub fn eval_norm(&self, x: &Vector) -> Result<f64> {
        self.check(x.as_slice())?;
        Ok(self.norm(x.as_slice()))
    }

    /// Norm of a slice of length `dim` (unchecked in release builds).
    pub fn norm(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            NormKind::Lp(p) => lp_norm(x, *p, None),
            NormKind::WeightedLp { p, weights } => lp_norm(x, *p, Some(weights)),
            NormKind::OrliczNakano(ps) => orlicz_nakano_norm(x, ps),
            NormKind::Nested { outer, slots } => {
                let y: Vec<f64> = slots
                    .iter()
                    .map(|s| match s {
                        Slot::Block { spec, coords } => {
                            let sub: Vec<f64> = coords.iter().map(|&c| x[c]).collect();
                            spec.norm(&sub)
                        }
                        Slot::Raw(c) => x[*c],
                    })
                    .collect();
                outer.norm(&y)
            }
            NormKind::Polytope(p) => p.gauge(x),
        }
    }

    pub fn norming_functional(&self, e: &Vector) -> Result<NormingFunctional> {
        self.check(e.as_slice())?;
        if e.is_zero() {
            return Err(Error::ZeroVector);
        }
        let (f, non_unique) = self.subgradient(e.as_slice());
        Ok(NormingFunctional { functional: Functional(f), non_unique })
    }

    /// A norming functional at non-zero `x` (centroid of the dual face at
    /// non-smooth points) and whether the dual face is larger than a point.
    pub(crate) fn subgradient(&self, x: &[f64]) -> (Vec<f64>, bool) {
        match &self.kind {
            NormKind::Lp(p) => lp_subgradient(x, *p, None),
            NormKind::WeightedLp { p, weights } => lp_subgradient(x, *p, Some(weights)),
            NormKind::OrliczNakano(ps) => orlicz_nakano_subgradient(x, ps),
            NormKind::Nested { outer, slots } => {
                let y: Vec<f64> = slots
                    .iter()
                    .map(|s| match s {
                        Slot::Block { spec, coords } => spec.norm(&coords.iter().map(|&c| x[c]).collect::<Vec<_>>()),
                        Slot::Raw(c) => x[*c],
                    })
                    .collect();
                let (g, mut non_unique) = outer.subgradient(&y);
                let mut f = vec![0.0; self.dim];
                for (k, slot) in slots.iter().enumerate() {
                    match slot {
                        Slot::Raw(c) => f[*c] = g[k],
                        Slot::Block { spec, coords } => {
                            let sub: Vec<f64> = coords.iter().map(|&c| x[c]).collect();
                            if sub.iter().all(|&v| v == 0.0) {
                                non_unique |= g[k] != 0.0;
                                continue;
                            }
                            let (h, nu) = spec.subgradient(&sub);
                            non_unique |= nu && g[k] != 0.0;
                            for (&c, hv) in coords.iter().zip(h) {
                                f[c] = g[k] * hv;
                            }
                        }
                    }
                }
                (f, non_unique)
            }
            NormKind::Polytope(p) => p.supporting_functional(x),
        }
    }

    /// Exact membership of `x` in the unit ball of a polytope norm.
    pub fn polytope_membership(&self, x: &QVector) -> Result<Membership> {
        match &self.kind {
            NormKind::Polytope(p) => p.membership(x),
            _ => Err(Error::InexactInput),
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidSpec("dimension must be positive".into()));
    }
    Ok(())
}

fn weight(w: Option<&Vec<f64>>, i: usize) -> f64 {
    w.map_or(1.0, |w| w[i])
}

fn lp_norm(x: &[f64], p: Exponent, w: Option<&Vec<f64>>) -> f64 {
    match p {
        Exponent::Infinity => x.iter().enumerate().fold(0.0, |m, (i, v)| m.max(weight(w, i) * v.abs())),
        Exponent::Finite(p) if p == 1.0 => x.iter().enumerate().map(|(i, v)| weight(w, i) * v.abs()).sum(),
        Exponent::Finite(p) => {
            let m = x.iter().fold(0.0, |m, v| m.max(v.abs()));
            if m == 0.0 {
                return 0.0;
            }
            let s: f64 = x.iter().enumerate().map(|(i, v)| weight(w, i) * (v.abs() / m).powf(p)).sum();
            m * s.powf(1.0 / p)
        }
    }
}

fn lp_subgradient(x: &[f64], p: Exponent, w: Option<&Vec<f64>>) -> (Vec<f64>, bool) {
    let n = x.len();
    match p {
        Exponent::Infinity => {
            let top = lp_norm(x, p, w);
            let active: Vec<usize> =
                (0..n).filter(|&i| weight(w, i) * x[i].abs() >= top * (1.0 - 1e-12)).collect();
            let k = active.len() as f64;
            let mut f = vec![0.0; n];
            for &i in &active {
                f[i] = x[i].signum() * weight(w, i) / k;
            }
            // Dual of weighted ℓ∞ is Σ |f_i| / w_i, so the split keeps it at 1.
            (f, active.len() > 1)
        }
        Exponent::Finite(p) if p == 1.0 => {
            let f = (0..n).map(|i| if x[i] == 0.0 { 0.0 } else { x[i].signum() * weight(w, i) }).collect();
            (f, x.contains(&0.0))
        }
        Exponent::Finite(p) => {
            let norm = lp_norm(x, Exponent::Finite(p), w);
            let f = (0..n).map(|i| weight(w, i) * x[i].signum() * (x[i].abs() / norm).powf(p - 1.0)).collect();
            (f, false)
        }
    }
}

fn modular(x: &[f64], ps: &[f64], lambda: f64) -> f64 {
    x.iter().zip(ps).map(|(v, &p)| (v.abs() / lambda).powf(p)).sum()
}

/// Bisection on `λ` over `[max|x_i|, Σ|x_i|]` to relative width `1e-13`.
fn orlicz_nakano_norm(x: &[f64], ps: &[f64]) -> f64 {
    let mut lo = x.iter().fold(0.0, |m, v| m.max(v.abs()));
    if lo == 0.0 {
        return 0.0;
    }
    let mut hi: f64 = x.iter().map(|v| v.abs()).sum();
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if modular(x, ps, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn orlicz_nakano_subgradient(x: &[f64], ps: &[f64]) -> (Vec<f64>, bool) {
    let lambda = orlicz_nakano_norm(x, ps);
    let u: Vec<f64> = x.iter().map(|v| v.abs() / lambda).collect();
    let denom: f64 = u.iter().zip(ps).map(|(&ui, &p)| p * ui.powf(p)).sum();
    let mut non_unique = false;
    let f = x
        .iter()
        .zip(&u)
        .zip(ps)
        .map(|((&xi, &ui), &p)| {
            if xi == 0.0 {
                non_unique |= p == 1.0;
                0.0
            } else {
                p * xi.signum() * ui.powf(p - 1.0) / denom
            }
        })
        .collect();
    (f, non_unique)
}

/// Points on the unit sphere of a norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSample {
    pub points: Vec<Vector>,
    pub seed: u64,
    pub count: usize,
}

/// `count` Gaussian directions normalised by the norm; deterministic in `seed`.
pub fn sample_sphere(spec: &NormSpec, count: usize, seed: u64) -> SphereSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..count)
        .map(|_| loop {
            let g: Vec<f64> = (0..spec.dim()).map(|_| rng.sample(StandardNormal)).collect();
            let n = spec.norm(&g);
            if n > 1e-12 {
                break Vector(g.into_iter().map(|v| v / n).collect());
            }
        })
        .collect();
    SphereSample { points, seed, count }
}

/// Largest violations of the norm axioms found over a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub homogeneity: f64,
    pub triangle: f64,
    pub symmetry: f64,
    /// `None` for norms that are not ideal.
    pub monotonicity: Option<f64>,
    pub pairs: usize,
}

impl AxiomReport {
    pub fn max_violation(&self) -> f64 {
        self.homogeneity.max(self.triangle).max(self.symmetry).max(self.monotonicity.unwrap_or(0.0))
    }
}

pub fn norm_axioms_check(spec: &NormSpec, sample: &SphereSample) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(sample.seed ^ 0x5eed_a710_u64);
    let pts = &sample.points;
    let mut report = AxiomReport {
        homogeneity: 0.0,
        triangle: 0.0,
        symmetry: 0.0,
        monotonicity: spec.is_ideal().then_some(0.0),
        pairs: 0,
    };
    for (k, x) in pts.iter().enumerate() {
        let x = x.as_slice();
        let nx = spec.norm(x);
        let t: f64 = rng.random_range(-4.0..4.0);
        let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
        report.homogeneity = report.homogeneity.max((spec.norm(&tx) - t.abs() * nx).abs());
        let mx: Vec<f64> = x.iter().map(|v| -v).collect();
        report.symmetry = report.symmetry.max((spec.norm(&mx) - nx).abs());
        let y = pts[(k + 1) % pts.len()].as_slice();
        let s: f64 = rng.random_range(0.0..3.0);
        let sum: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + s * b).collect();
        report.triangle = report.triangle.max(spec.norm(&sum) - nx - s * spec.norm(y)).max(0.0);
        if let Some(m) = report.monotonicity.as_mut() {
            let shrunk: Vec<f64> = x.iter().map(|v| v * rng.random_range(-1.0..=1.0)).collect();
            *m = m.max(spec.norm(&shrunk) - nx).max(0.0);
        }
        report.pairs += 1;
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Exponent {
        Exponent::Finite(v)
    }

    #[test]
    fn lp3_of_ones() {
        let s = NormSpec::lp(2, p(3.0)).unwrap();
        let n = s.eval_norm(&Vector(vec![1.0, 1.0])).unwrap();
        assert!((n - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn orlicz_nakano_reduces_to_l2() {
        let s = NormSpec::orlicz_nakano(vec![2.0, 2.0]).unwrap();
        let n = s.eval_norm(&Vector(vec![1.0, 1.0])).unwrap();
        assert!((n - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn dimension_mismatch() {
        let s = NormSpec::lp(3, p(2.0)).unwrap();
        assert!(matches!(s.eval_norm(&Vector(vec![1.0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn invalid_exponent_and_weights() {
        assert!(NormSpec::lp(2, p(0.5)).is_err());
        assert!(NormSpec::weighted_lp(p(2.0), vec![1.0, 0.0]).is_err());
        assert!(NormSpec::orlicz_nakano(vec![2.0, 0.9]).is_err());
    }

    #[test]
    fn norming_functionals_of_lp() {
        let s = NormSpec::lp(2, p(3.0)).unwrap();
        let f = s.norming_functional(&Vector(vec![1.0, 0.0])).unwrap();
        assert_eq!(f.functional.0, vec![1.0, 0.0]);
        let s = NormSpec::lp(2, p(2.0)).unwrap();
        let f = s.norming_functional(&Vector(vec![3.0, 4.0])).unwrap();
        assert!((f.functional.0[0] - 0.6).abs() < 1e-15 && (f.functional.0[1] - 0.8).abs() < 1e-15);
        assert_eq!(s.norming_functional(&Vector(vec![0.0, 0.0])), Err(Error::ZeroVector));
    }

    #[test]
    fn linf_functional_splits_ties() {
        let s = NormSpec::lp(2, Exponent::Infinity).unwrap();
        let f = s.norming_functional(&Vector(vec![1.0, -1.0])).unwrap();
        assert_eq!(f.functional.0, vec![0.5, -0.5]);
        assert!(f.non_unique);
    }

    #[test]
    fn nested_requires_cover_and_ideal_outer() {
        let l2 = NormSpec::lp(2, p(2.0)).unwrap();
        let outer = NormSpec::lp(2, p(1.0)).unwrap();
        let slots = vec![Slot::Block { spec: l2.clone(), coords: vec![0, 1] }];
        assert!(NormSpec::nested(3, NormSpec::lp(1, p(1.0)).unwrap(), slots).is_err());
        let slots = vec![Slot::Block { spec: l2, coords: vec![0, 1] }, Slot::Raw(1)];
        assert!(NormSpec::nested(2, outer, slots).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_normalised() {
        let s = NormSpec::lp(3, p(3.0)).unwrap();
        let a = sample_sphere(&s, 20, 7);
        assert_eq!(a, sample_sphere(&s, 20, 7));
        assert_ne!(a, sample_sphere(&s, 20, 8));
        assert!(a.points.iter().all(|x| (s.norm(&x.0) - 1.0).abs() <= 1e-12));
    }

    #[test]
    fn polytope_membership_requires_polytope() {
        let s = NormSpec::lp(2, p(2.0)).unwrap();
        assert_eq!(s.polytope_membership(&QVector::from_ints(&[0, 0])), Err(Error::InexactInput));
    }
}
