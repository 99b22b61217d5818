//! Centrally symmetric polytopes as unit balls.
//!
//! Facets come from a double-description pass over the polar cone, in exact
//! integer arithmetic. Membership is decided independently by an exact LP.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lp::{self, LpOutcome};
use crate::rational::{self, to_f64, QMatrix, QVector, Rational};
use crate::{Error, Result};

/// A symmetric polytope `conv(V)` spanning `R^n`, used as a unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    points: Vec<QVector>,
    vertices: Vec<QVector>,
    vertex_set: BTreeSet<QVector>,
    facets: Vec<QVector>,
    facets_f64: Vec<Vec<f64>>,
}

/// Exact separating functional for a point outside the ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    /// Primitive integer normal.
    pub functional: QVector,
    pub value_at_point: Rational,
    pub max_on_vertices: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    Inside,
    Boundary,
    Outside(Separation),
}

impl Polytope {
    /// Builds the ball `conv(points)`; the point set must be symmetric and
    /// span `R^dim`.
    pub fn new(dim: usize, points: Vec<QVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("polytope dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidSpec("polytope needs vertices".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        let set: BTreeSet<QVector> = points.iter().cloned().collect();
        if set.iter().any(|v| !set.contains(&v.neg())) {
            return Err(Error::InvalidSpec("polytope vertex set is not symmetric".into()));
        }
        if set.iter().any(QVector::is_zero) || rational::rank(&points) < dim {
            return Err(Error::InvalidSpec("polytope vertices do not span the space".into()));
        }
        let distinct: Vec<QVector> = set.iter().cloned().collect();
        let facets = double_description(dim, &distinct);
        let vertices: Vec<QVector> = distinct
            .into_iter()
            .filter(|v| {
                let tight: Vec<QVector> = facets.iter().filter(|f| f.dot(v).is_one()).cloned().collect();
                rational::rank(&tight) == dim
            })
            .collect();
        let vertex_set = vertices.iter().cloned().collect();
        let facets_f64 = facets.iter().map(QVector::to_f64).collect();
        Ok(Self { dim, points, vertices, vertex_set, facets, facets_f64 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The points as supplied (serialisation order).
    pub fn points(&self) -> &[QVector] {
        &self.points
    }

    /// Extreme points, sorted.
    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn is_vertex(&self, v: &QVector) -> bool {
        self.vertex_set.contains(v)
    }

    /// Facet normals `f`, scaled so that `max_v f(v) = 1`.
    pub fn facets(&self) -> &[QVector] {
        &self.facets
    }

    /// Minkowski functional by facet maximum.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        self.facets_f64
            .iter()
            .map(|f| f.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn gauge_exact(&self, x: &QVector) -> Rational {
        self.facets.iter().map(|f| f.dot(x)).fold(Rational::zero(), |m, v| if v > m { v } else { m })
    }

    /// Centroid of the facet normals active at `x`, and whether more than one
    /// facet is active.
    pub fn supporting_functional(&self, x: &[f64]) -> (Vec<f64>, bool) {
        let g = self.gauge(x);
        let tol = 1e-12 * g.max(1.0);
        let active: Vec<&Vec<f64>> = self
            .facets_f64
            .iter()
            .filter(|f| f.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() >= g - tol)
            .collect();
        let mut c = vec![0.0; self.dim];
        for f in &active {
            for (ci, fi) in c.iter_mut().zip(f.iter()) {
                *ci += fi;
            }
        }
        let k = active.len() as f64;
        c.iter_mut().for_each(|ci| *ci /= k);
        (c, active.len() > 1)
    }

    /// Exact membership of `x` in the ball, by linear feasibility.
    pub fn membership(&self, x: &QVector) -> Result<Membership> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        if x.is_zero() {
            return Ok(Membership::Inside);
        }
        // min Σλ  s.t.  Σ λ_v v = x, λ ≥ 0; the optimum is the gauge of x and
        // the optimal dual is a facet normal attaining it.
        let m = self.vertices.len();
        let cost = vec![Rational::one(); m];
        let rows: Vec<Vec<Rational>> =
            (0..self.dim).map(|i| self.vertices.iter().map(|v| v.0[i].clone()).collect()).collect();
        let LpOutcome::Optimal(sol) = lp::minimize(&cost, &rows, &x.0) else {
            unreachable!("a spanning symmetric polytope absorbs every vector")
        };
        let one = Rational::one();
        Ok(if sol.value < one {
            Membership::Inside
        } else if sol.value == one {
            Membership::Boundary
        } else {
            let functional = QVector(sol.dual).primitive();
            let value_at_point = functional.dot(x);
            let max_on_vertices = self
                .vertices
                .iter()
                .map(|v| functional.dot(v))
                .fold(None::<Rational>, |m, v| Some(m.map_or(v.clone(), |m| if v > m { v } else { m })))
                .unwrap();
            Membership::Outside(Separation { functional, value_at_point, max_on_vertices })
        })
    }

    /// True iff the linear map permutes the vertex set.
    pub fn is_symmetry_exact(&self, m: &QMatrix) -> bool {
        self.vertices.iter().all(|v| self.vertex_set.contains(&m.mul_vec(v)))
    }

    /// Float variant: every mapped vertex lands within `tol` of a vertex.
    pub fn is_symmetry_approx(&self, m: &crate::linalg::Matrix, tol: f64) -> bool {
        let verts: Vec<Vec<f64>> = self.vertices.iter().map(QVector::to_f64).collect();
        verts.iter().all(|v| {
            let w = m.mul_vec(v);
            verts.iter().any(|u| crate::linalg::max_abs_diff(u, &w) <= tol)
        })
    }
}

type Bits = Vec<u64>;

fn bits_with(len: usize) -> Bits {
    vec![0; len.div_ceil(64)]
}

fn set_bit(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn and_bits(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn count_bits(a: &Bits) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

fn contains_bits(sup: &Bits, sub: &Bits) -> bool {
    sup.iter().zip(sub).all(|(s, t)| s & t == *t)
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn normalize(mut r: Vec<BigInt>) -> Vec<BigInt> {
    let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        r.iter_mut().for_each(|x| *x /= &g);
    }
    r
}

/// Facet normals of `conv(V)` for symmetric spanning `V`, as the extreme rays
/// of the polar cone `{(f, t) : t - f·v ≥ 0 ∀v}`.
fn double_description(dim: usize, vertices: &[QVector]) -> Vec<QVector> {
    let d = dim + 1;
    let constraints: Vec<Vec<BigInt>> = vertices
        .iter()
        .map(|v| {
            let l = v.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let lq = Rational::from_integer(l.clone());
            let mut row: Vec<BigInt> = v.0.iter().map(|x| -(x * &lq).to_integer()).collect();
            row.push(l);
            row
        })
        .collect();
    let m = constraints.len();

    // Initial simplicial cone on d independent constraints.
    let mut basis_idx: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<QVector> = Vec::new();
    for (i, c) in constraints.iter().enumerate() {
        let mut trial = basis_rows.clone();
        trial.push(QVector(c.iter().map(|x| Rational::from_integer(x.clone())).collect()));
        if rational::rank(&trial) > basis_rows.len() {
            basis_rows = trial;
            basis_idx.push(i);
            if basis_idx.len() == d {
                break;
            }
        }
    }
    assert_eq!(basis_idx.len(), d, "polar cone must be pointed");

    let mut rays: Vec<(Vec<BigInt>, Bits)> = Vec::new();
    for k in 0..d {
        let mut rhs = vec![Rational::zero(); d];
        rhs[k] = Rational::one();
        let col = rational::solve(&basis_rows, &rhs).expect("independent rows");
        let l = col.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let lq = Rational::from_integer(l);
        let ray = normalize(col.0.iter().map(|x| (x * &lq).to_integer()).collect());
        let mut z = bits_with(m);
        for (kk, &ci) in basis_idx.iter().enumerate() {
            if kk != k {
                set_bit(&mut z, ci);
            }
        }
        rays.push((ray, z));
    }

    let in_basis: BTreeSet<usize> = basis_idx.iter().copied().collect();
    for (ci, a) in constraints.iter().enumerate() {
        if in_basis.contains(&ci) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| int_dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, (_, z)) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    set_bit(z, ci);
                }
            }
            continue;
        }
        let mut next: Vec<(Vec<BigInt>, Bits)> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = and_bits(&rays[p].1, &rays[n].1);
                if count_bits(&common) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, (_, z))| k == p || k == n || !contains_bits(z, &common));
                if !adjacent {
                    continue;
                }
                let ray: Vec<BigInt> = rays[n]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(rn, rp)| &vals[p] * rn - &vals[n] * rp)
                    .collect();
                let mut z = common;
                set_bit(&mut z, ci);
                next.push((normalize(ray), z));
            }
        }
        for (i, (r, z)) in rays.into_iter().enumerate() {
            if vals[i].is_positive() {
                next.push((r, z));
            } else if vals[i].is_zero() {
                let mut z = z;
                set_bit(&mut z, ci);
                next.push((r, z));
            }
        }
        rays = next;
    }

    let mut facets: Vec<QVector> = rays
        .into_iter()
        .map(|(r, _)| {
            let t = Rational::from_integer(r[dim].clone());
            debug_assert!(t.is_positive());
            QVector(r[..dim].iter().map(|x| Rational::from_integer(x.clone()) / &t).collect())
        })
        .collect();
    facets.sort();
    facets.dedup();
    facets
}

/// `f64` dot product with exact facet normals, for diagnostics.
pub fn facet_values(p: &Polytope, x: &[f64]) -> Vec<f64> {
    p.facets().iter().map(|f| f.0.iter().zip(x).map(|(a, b)| to_f64(a) * b).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn cross(n: usize) -> Polytope {
        let mut pts = Vec::new();
        for i in 0..n {
            pts.push(QVector::unit(n, i));
            pts.push(QVector::unit(n, i).neg());
        }
        Polytope::new(n, pts).unwrap()
    }

    #[test]
    fn cross_polytope_facets_are_sign_vectors() {
        let p = cross(3);
        assert_eq!(p.facets().len(), 8);
        assert!(p.facets().iter().all(|f| f.0.iter().all(|x| x.abs() == q(1))));
        assert_eq!(p.vertices().len(), 6);
    }

    #[test]
    fn interior_points_are_not_vertices() {
        let mut pts = cross(2).points().to_vec();
        pts.push(QVector(vec![q_frac(1, 4), q_frac(1, 4)]));
        pts.push(QVector(vec![q_frac(-1, 4), q_frac(-1, 4)]));
        let p = Polytope::new(2, pts).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let pts = vec![QVector::from_ints(&[1, 0]), QVector::from_ints(&[0, 1]), QVector::from_ints(&[-1, 0])];
        assert!(matches!(Polytope::new(2, pts), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn membership_agrees_with_gauge() {
        let p = cross(2);
        let inside = QVector(vec![q_frac(1, 2), q_frac(2, 5)]);
        assert_eq!(p.membership(&inside).unwrap(), Membership::Inside);
        assert_eq!(p.membership(&QVector(vec![q_frac(1, 2), q_frac(1, 2)])).unwrap(), Membership::Boundary);
        let Membership::Outside(sep) = p.membership(&QVector::from_ints(&[1, 1])).unwrap() else { panic!() };
        assert_eq!(sep.functional, QVector::from_ints(&[1, 1]));
        assert!(sep.value_at_point > sep.max_on_vertices);
        assert_eq!(p.gauge_exact(&QVector::from_ints(&[1, 1])), q(2));
    }

    #[test]
    fn supporting_functional_at_vertex_is_centroid() {
        let (f, non_unique) = cross(2).supporting_functional(&[1.0, 0.0]);
        assert!((f[0] - 1.0).abs() < 1e-15 && f[1].abs() < 1e-15);
        assert!(non_unique);
        let (f, non_unique) = cross(2).supporting_functional(&[0.5, 0.5]);
        assert_eq!(f, vec![1.0, 1.0]);
        assert!(!non_unique);
    }
}
