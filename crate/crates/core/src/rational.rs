//! Exact rational vectors and matrices.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::Matrix;
use crate::{Error, Result};

pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidSpec(format!("malformed rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// `"n"` for integers, `"n/d"` otherwise (always reduced).
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Vector of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVector(pub Vec<Rational>);

impl QVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| q(x)).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        self.0.iter().zip(&other.0).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn neg(&self) -> QVector {
        QVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    pub fn from_f64(v: &[f64]) -> Option<QVector> {
        v.iter().map(|&x| from_f64(x)).collect::<Option<Vec<_>>>().map(QVector)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Positive multiple with coprime integer entries.
    pub fn primitive(&self) -> QVector {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return self.clone();
        }
        QVector(ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect())
    }
}

/// Square or rectangular matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i * self.cols + j] = x;
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &QVector) -> QVector {
        assert_eq!(self.cols, x.dim(), "matrix-vector shape");
        QVector(
            (0..self.rows)
                .map(|i| (0..self.cols).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &x.0[j]))
                .collect(),
        )
    }

    pub fn to_f64(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| to_f64(self.get(i, j)))
    }
}

/// Exact rank over `Q`.
pub fn rank(rows: &[QVector]) -> usize {
    row_echelon(rows.to_vec()).len()
}

/// Reduced row echelon form; returns the non-zero rows.
fn row_echelon(mut rows: Vec<QVector>) -> Vec<QVector> {
    let ncols = rows.first().map_or(0, QVector::dim);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].0[c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r].0[c].recip();
        rows[r] = rows[r].scale(&inv);
        for i in 0..rows.len() {
            if i != r && !rows[i].0[c].is_zero() {
                let f = rows[i].0[c].clone();
                let pivot = rows[r].clone();
                for (x, y) in rows[i].0.iter_mut().zip(&pivot.0) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Solves the square system `a x = b` exactly; `None` when singular.
pub fn solve(a: &[QVector], b: &[Rational]) -> Option<QVector> {
    let n = a.len();
    let aug: Vec<QVector> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.0.clone();
            r.push(bi.clone());
            QVector(r)
        })
        .collect();
    let ech = row_echelon(aug);
    if ech.len() < n || (0..n).any(|i| !ech[i].0[i].is_one()) {
        return None;
    }
    Some(QVector(ech.iter().map(|r| r.0[n].clone()).collect()))
}

pub fn is_negative(x: &Rational) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), q_frac(3, 2));
        assert_eq!(format_rational(&q_frac(3, 2)), "3/2");
        assert_eq!(format_rational(&q(-4)), "-4");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn exact_solve_and_rank() {
        let a = [QVector::from_ints(&[2, 1]), QVector::from_ints(&[1, 3])];
        let x = solve(&a, &[q(3), q(4)]).unwrap();
        assert_eq!(x, QVector(vec![q(1), q(1)]));
        assert_eq!(rank(&[QVector::from_ints(&[1, 2]), QVector::from_ints(&[2, 4])]), 1);
        assert!(solve(&[QVector::from_ints(&[1, 2]), QVector::from_ints(&[2, 4])], &[q(1), q(1)]).is_none());
    }

    #[test]
    fn primitive_vector() {
        let v = QVector(vec![q_frac(1, 8), q_frac(1, 8), q_frac(-1, 8)]);
        assert_eq!(v.primitive(), QVector::from_ints(&[1, 1, -1]));
    }
}
