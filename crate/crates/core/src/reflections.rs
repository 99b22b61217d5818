//! Reflections `s = 1 - 2 e*⊗e`, their angles, commutation and product orders.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::One;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{self, Matrix};
use crate::rational::{QMatrix, QVector, Rational};
use crate::spaces::{sample_sphere, Functional, NormSpec, SphereSample, Vector};
use crate::{Error, Result};

/// Tolerance on `e*(e) = 1` accepted by [`make_reflection`].
pub const PAIRING_TOL: f64 = 1e-12;
/// Default number of sphere points for sampled isometry tests.
pub const DEFAULT_ISOMETRY_SAMPLES: usize = 512;
/// Default tolerance for sampled isometry tests.
pub const DEFAULT_ISOMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Reflection {
    e: Vector,
    e_star: Functional,
    matrix: Matrix,
    exact: Option<(QVector, QVector)>,
}

/// Builds `s_{e,e*}`; `e*(e)` must equal 1 within [`PAIRING_TOL`].
pub fn make_reflection(e: Vector, e_star: Functional) -> Result<Reflection> {
    if e.dim() != e_star.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: e_star.dim() });
    }
    let pairing = e_star.apply(e.as_slice());
    if (pairing - 1.0).abs() > PAIRING_TOL {
        return Err(Error::NotNormalized { pairing });
    }
    let n = e.dim();
    let matrix = Matrix::identity(n).sub(&Matrix::outer(e.as_slice(), e_star.coeffs()).scale(2.0));
    Ok(Reflection { e, e_star, matrix, exact: None })
}

/// Exact reflection over the rationals; `e*(e)` must be exactly 1.
pub fn make_exact_reflection(e: QVector, e_star: QVector) -> Result<Reflection> {
    if e.dim() != e_star.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: e_star.dim() });
    }
    let pairing = e_star.dot(&e);
    if !pairing.is_one() {
        return Err(Error::NotNormalized { pairing: crate::rational::to_f64(&pairing) });
    }
    let mut r = make_reflection(Vector(e.to_f64()), Functional(e_star.to_f64()))?;
    r.exact = Some((e, e_star));
    Ok(r)
}

/// Sign change of coordinate `i` in `R^n`.
pub fn sign_change(n: usize, i: usize) -> Reflection {
    make_exact_reflection(QVector::unit(n, i), QVector::unit(n, i)).expect("unit pairing")
}

/// Euclidean (orthogonal) reflection along a non-zero vector.
pub fn orthogonal_reflection(axis: &[f64]) -> Result<Reflection> {
    let norm = linalg::euclid(axis);
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let e: Vec<f64> = axis.iter().map(|x| x / norm).collect();
    let pairing = linalg::dot(&e, &e);
    let e_star = e.iter().map(|x| x / pairing).collect();
    make_reflection(Vector(e), Functional(e_star))
}

/// Euclidean reflection along a rational axis, kept exact.
pub fn exact_orthogonal_reflection(axis: &QVector) -> Result<Reflection> {
    let nn = axis.dot(axis);
    if axis.is_zero() {
        return Err(Error::ZeroVector);
    }
    make_exact_reflection(axis.clone(), axis.scale(&nn.recip()))
}

impl Reflection {
    pub fn dim(&self) -> usize {
        self.e.dim()
    }

    pub fn e(&self) -> &Vector {
        &self.e
    }

    pub fn e_star(&self) -> &Functional {
        &self.e_star
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Rational `(e, e*)` when the reflection was built exactly.
    pub fn exact_data(&self) -> Option<(&QVector, &QVector)> {
        self.exact.as_ref().map(|(e, f)| (e, f))
    }

    /// Exact matrix, from the exact data or from the binary values of the floats.
    pub fn exact_matrix(&self) -> Option<QMatrix> {
        let (e, f) = match &self.exact {
            Some((e, f)) => (e.clone(), f.clone()),
            None => (QVector::from_f64(self.e.as_slice())?, QVector::from_f64(self.e_star.coeffs())?),
        };
        let n = e.dim();
        let mut m = QMatrix::identity(n);
        let two = Rational::from_integer(2.into());
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j) - &two * &e.0[i] * &f.0[j];
                m.set(i, j, v);
            }
        }
        Some(m)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let t = 2.0 * self.e_star.apply(x);
        x.iter().zip(self.e.as_slice()).map(|(xi, ei)| xi - t * ei).collect()
    }

    /// `g s g^{-1}`, i.e. the reflection along `g e` with functional `e* ∘ g^{-1}`.
    pub fn conjugate(&self, g: &Matrix, g_inv: &Matrix) -> Result<Reflection> {
        let e = g.mul_vec(self.e.as_slice());
        let f = g_inv.vec_mul(self.e_star.coeffs());
        let pairing = linalg::dot(&e, &f);
        make_reflection(Vector(e), Functional(f.into_iter().map(|v| v / pairing).collect()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Isometry {
    Exact(bool),
    Sampled { max_violation: f64 },
}

impl Isometry {
    pub fn holds(&self, tol: f64) -> bool {
        match *self {
            Isometry::Exact(b) => b,
            Isometry::Sampled { max_violation } => max_violation <= tol,
        }
    }
}

/// Exact vertex-permutation test for polytope norms, sampled otherwise.
pub fn is_isometric(s: &Reflection, spec: &NormSpec, sample: &SphereSample) -> Result<Isometry> {
    if s.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: s.dim() });
    }
    if let Some(p) = spec.as_polytope() {
        return Ok(Isometry::Exact(s.exact_matrix().is_some_and(|m| p.is_symmetry_exact(&m))));
    }
    Ok(Isometry::Sampled { max_violation: max_isometry_violation(s.matrix(), spec, sample) })
}

/// [`is_isometric`] with the default sample.
pub fn is_isometric_default(s: &Reflection, spec: &NormSpec) -> Result<Isometry> {
    is_isometric(s, spec, &sample_sphere(spec, DEFAULT_ISOMETRY_SAMPLES, 0))
}

/// `max |‖Mx‖ - ‖x‖|` over the sample.
pub fn max_isometry_violation(m: &Matrix, spec: &NormSpec, sample: &SphereSample) -> f64 {
    sample
        .points
        .iter()
        .map(|x| (spec.norm(&m.mul_vec(x.as_slice())) - spec.norm(x.as_slice())).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleResult {
    pub alpha: f64,
    pub cos_sq: f64,
    pub degenerate: bool,
}

/// `cos²α = e₁*(e₂)·e₂*(e₁)`.
pub fn angle(s1: &Reflection, s2: &Reflection) -> Result<AngleResult> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch { expected: s1.dim(), found: s2.dim() });
    }
    let (a, b) = (s1.e.as_slice(), s2.e.as_slice());
    let degenerate = linalg::max_abs_diff(a, b) <= 1e-12
        || a.iter().zip(b).all(|(x, y)| (x + y).abs() <= 1e-12);
    if degenerate {
        return Ok(AngleResult { alpha: 0.0, cos_sq: 1.0, degenerate });
    }
    let raw = s1.e_star.apply(b) * s2.e_star.apply(a);
    if raw < -1e-9 {
        return Err(Error::NegativeProduct { value: raw });
    }
    let cos_sq = raw.clamp(0.0, 1.0);
    Ok(AngleResult { alpha: cos_sq.sqrt().acos(), cos_sq, degenerate })
}

/// Commutator vanishes within `1e-10`.
pub fn commute(s1: &Reflection, s2: &Reflection) -> bool {
    let ab = s1.matrix.mul(&s2.matrix);
    let ba = s2.matrix.mul(&s1.matrix);
    ab.max_abs_diff(&ba) <= 1e-10
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductOrder {
    Finite(u64),
    ExceedsCap,
}

/// Smallest `m ≤ cap` with `(s₁s₂)^m = 1` within `1e-9`.
///
/// When `e₁, e₂` are independent and `1 - e₁*(e₂)e₂*(e₁) ≠ 0`, the space splits
/// into `span(e₁, e₂)` and the common mirror, so powers are taken on the 2×2
/// restriction.
pub fn product_order(s1: &Reflection, s2: &Reflection, cap: u64) -> ProductOrder {
    let a = s1.e_star.apply(s2.e.as_slice());
    let b = s2.e_star.apply(s1.e.as_slice());
    let independent = Matrix::from_rows(&[s1.e.0.clone(), s2.e.0.clone()]).rank(1e-10) == 2;
    let m = if independent && (1.0 - a * b).abs() > 1e-9 {
        // Columns are the images of e₁, e₂ in the basis (e₁, e₂).
        let r1 = Matrix::from_rows(&[vec![-1.0, -2.0 * a], vec![0.0, 1.0]]);
        let r2 = Matrix::from_rows(&[vec![1.0, 0.0], vec![-2.0 * b, -1.0]]);
        r1.mul(&r2)
    } else {
        s1.matrix.mul(&s2.matrix)
    };
    matrix_order(&m, cap).map_or(ProductOrder::ExceedsCap, ProductOrder::Finite)
}

/// Smallest `k ≤ cap` with `m^k = 1` within `1e-9`.
pub fn matrix_order(m: &Matrix, cap: u64) -> Option<u64> {
    let mut p = m.clone();
    for k in 1..=cap {
        if p.is_identity(1e-9) {
            return Some(k);
        }
        if p.max_abs() > 1e6 {
            return None;
        }
        p = p.mul(m);
    }
    None
}

/// Reduced `(k, m)` with `|x - k/m| ≤ tol` and `m ≤ max_den`, by continued fractions.
pub fn rational_approximation(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e18 {
            break;
        }
        let a = a as u64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Order predicted by `α/π`: the reduced denominator, if one exists below `cap`.
pub fn order_from_angle(alpha: f64, cap: u64) -> Option<u64> {
    rational_approximation(alpha / PI, cap, 1e-9).map(|(_, m)| m)
}

/// `φ_s(g₁,g₂) = 1 - e*(g₁⁻¹g₂e)·e*(g₂⁻¹g₁e)`.
pub fn phi_s(s: &Reflection, g1: &Matrix, g2: &Matrix) -> Result<f64> {
    let n = s.dim();
    for g in [g1, g2] {
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.rows() });
        }
    }
    let singular = || Error::InvalidSpec("isometry matrix is singular".into());
    let g1i = g1.inverse().ok_or_else(singular)?;
    let g2i = g2.inverse().ok_or_else(singular)?;
    let e = s.e.as_slice();
    let u = g1i.mul(g2).mul_vec(e);
    let v = g2i.mul(g1).mul_vec(e);
    Ok(1.0 - s.e_star.apply(&u) * s.e_star.apply(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Exponent;
    use alloc::vec;

    fn refl(e: &[f64], f: &[f64]) -> Reflection {
        make_reflection(Vector(e.to_vec()), Functional(f.to_vec())).unwrap()
    }

    #[test]
    fn defining_formula() {
        let s = refl(&[1.0, 0.0], &[1.0, 1.0]);
        assert_eq!(s.matrix().to_rows(), vec![vec![-1.0, -2.0], vec![0.0, 1.0]]);
        assert!(s.matrix().mul(s.matrix()).is_identity(1e-12));
        let bad = make_reflection(Vector(vec![1.0, 0.0]), Functional(vec![2.0, 0.0]));
        assert!(matches!(bad, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn orders_and_angles() {
        let e1 = orthogonal_reflection(&[1.0, 0.0]).unwrap();
        let t = PI / 4.0;
        let e2 = orthogonal_reflection(&[t.cos(), t.sin()]).unwrap();
        let a = angle(&e1, &e2).unwrap();
        assert!((a.alpha - t).abs() < 1e-12 && (a.cos_sq - 0.5).abs() < 1e-12);
        assert_eq!(product_order(&e1, &e2, 60), ProductOrder::Finite(4));
        assert_eq!(order_from_angle(a.alpha, 60), Some(4));
        let perp = orthogonal_reflection(&[0.0, 1.0]).unwrap();
        assert_eq!(product_order(&e1, &perp, 60), ProductOrder::Finite(2));
        assert!(commute(&e1, &perp) && !commute(&e1, &e2));
        let c = 0.9f64;
        let e3 = orthogonal_reflection(&[c, (1.0 - c * c).sqrt()]).unwrap();
        assert_eq!(product_order(&e1, &e3, 1000), ProductOrder::ExceedsCap);
        assert_eq!(order_from_angle(c.acos(), 1000), None);
    }

    #[test]
    fn degenerate_angle() {
        let s = orthogonal_reflection(&[0.6, 0.8]).unwrap();
        let m = orthogonal_reflection(&[-0.6, -0.8]).unwrap();
        let a = angle(&s, &m).unwrap();
        assert!(a.degenerate && a.alpha == 0.0);
    }

    #[test]
    fn phi_of_rotation() {
        let s = sign_change(2, 0);
        let r = linalg::plane_rotation(2, 0, 1, PI / 4.0);
        let v = phi_s(&s, &Matrix::identity(2), &r).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        assert!(phi_s(&s, &r, &r).unwrap().abs() < 1e-12);
    }

    #[test]
    fn sign_change_isometric_in_lp() {
        let spec = NormSpec::lp(3, Exponent::Finite(3.0)).unwrap();
        let iso = is_isometric(&sign_change(3, 1), &spec, &sample_sphere(&spec, 100, 1)).unwrap();
        assert!(iso.holds(1e-12));
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(rational_approximation(0.4, 10, 1e-12), Some((2, 5)));
        assert_eq!(rational_approximation(0.0, 10, 1e-12), Some((0, 1)));
    }
}
