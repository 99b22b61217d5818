//! Named norms, root systems and reflection sets.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;


#[allow(unused_imports)]
use num_traits::Float;

use crate::coxeter::{RootSystem, Weight};
use crate::linalg::Matrix;
use crate::rational::QVector;
use crate::reflections::{orthogonal_reflection, sign_change, Reflection};
use crate::spaces::{Exponent, NormSpec, Slot};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    Norm(NormSpec),
    Roots(RootSystem),
    Reflections(Vec<Reflection>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub entry: Entry,
}

/// Catalogue templates with a one-line description each.
pub const CATALOGUE: &[(&str, &str)] = &[
    ("remark_4_7(n)", "polytope ball conv(D_n·(1,…,n)) (n odd: symmetrised by −1)"),
    ("example_6_8_3", "R^4 norm [(|ξ|₂ + |ς₁|)² + ς₂²]^{1/2}"),
    ("example_6_8_4", "R^6 norm [(|ξ|₂ + |ς₁|)² + (|η|₂ + |ς₂|)²]^{1/2}"),
    ("orlicz_nakano(p1,…,pn)", "Orlicz–Nakano norm with the given exponents"),
    ("lp(p,n)", "ℓ_p^n, p a number ≥ 1 or inf"),
    ("roots_A(n)", "root system {ε_i − ε_j} on n indices"),
    ("roots_B(n)", "root system {±ε_i, ±ε_i ± ε_j} on n indices"),
    ("roots_D(n)", "root system {±ε_i ± ε_j} on n indices"),
    ("simple_A(n)", "simple reflections ε_i − ε_{i+1} in R^{n+1}"),
    ("simple_B(n)", "simple reflections ε_i − ε_{i+1}, ε_n in R^n"),
    ("simple_D(n)", "simple reflections ε_i − ε_{i+1}, ε_{n−1} + ε_n in R^n"),
    ("I2(m)", "two reflections in R^2 at angle π/m"),
    ("H3", "simple reflections of type H3"),
    ("H4", "simple reflections of type H4"),
    ("F4", "simple reflections of type F4"),
    ("sign_changes(n)", "the n coordinate sign changes of R^n"),
    ("infinite_pair", "two reflections at angle arccos(9/10) plus a connecting reflection in R^3"),
    ("close_axes_triple", "three independent euclidean axes with ‖e₁ − e₂‖ < 1 − cos(π/5)"),
];

/// Looks up a fixture by name, e.g. `remark_4_7(4)`, `lp(inf,3)`, `H3`.
pub fn fixture(name: &str) -> Result<Fixture> {
    let unknown = || Error::UnknownFixture(name.to_string());
    let trimmed: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let (head, args) = match trimmed.split_once('(') {
        Some((h, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(unknown)?;
            let args: Vec<&str> = inner.split(',').map(|a| a.rsplit('=').next().unwrap_or(a)).collect();
            (h.to_string(), args)
        }
        None => (trimmed.clone(), Vec::new()),
    };
    let int = |i: usize| -> Result<usize> { args.get(i).and_then(|a| a.parse().ok()).ok_or_else(unknown) };
    let one_int = || -> Result<usize> {
        if args.len() == 1 {
            int(0)
        } else {
            Err(unknown())
        }
    };
    let entry = match (head.as_str(), args.len()) {
        ("remark_4_7", 1) => Entry::Norm(remark_4_7(one_int()?)?),
        ("example_6_8_3", 0) => Entry::Norm(example_6_8_3()),
        ("example_6_8_4", 0) => Entry::Norm(example_6_8_4()),
        ("orlicz_nakano", _) if !args.is_empty() => {
            let ps = args.iter().map(|a| a.parse::<f64>().map_err(|_| unknown())).collect::<Result<Vec<_>>>()?;
            Entry::Norm(NormSpec::orlicz_nakano(ps)?)
        }
        ("lp", 2) => {
            let p = match args[0] {
                "inf" => Exponent::Infinity,
                s => Exponent::Finite(s.parse().map_err(|_| unknown())?),
            };
            Entry::Norm(NormSpec::lp(int(1)?, p)?)
        }
        ("roots_A", 1) => Entry::Roots(roots_a(one_int()?)),
        ("roots_B", 1) => Entry::Roots(roots_b(one_int()?)),
        ("roots_D", 1) => Entry::Roots(roots_d(one_int()?)),
        ("simple_A", 1) => Entry::Reflections(simple_a(one_int()?)?),
        ("simple_B", 1) => Entry::Reflections(simple_b(one_int()?)?),
        ("simple_D", 1) => Entry::Reflections(simple_d(one_int()?)?),
        ("I2", 1) => Entry::Reflections(i2(one_int()? as u64)?),
        ("H3", 0) => Entry::Reflections(from_diagram(&path_orders(&[5, 3]))?),
        ("H4", 0) => Entry::Reflections(from_diagram(&path_orders(&[5, 3, 3]))?),
        ("F4", 0) => Entry::Reflections(from_diagram(&path_orders(&[3, 4, 3]))?),
        ("sign_changes", 1) => {
            let n = one_int()?;
            Entry::Reflections((0..n).map(|i| sign_change(n, i)).collect())
        }
        ("infinite_pair", 0) => Entry::Reflections(infinite_pair()?),
        ("close_axes_triple", 0) => Entry::Reflections(close_axes_triple()?),
        _ => return Err(unknown()),
    };
    let template = CATALOGUE
        .iter()
        .find(|(t, _)| t.split('(').next() == Some(head.as_str()))
        .map(|(_, d)| d.to_string())
        .unwrap_or_default();
    Ok(Fixture { name: trimmed, description: template, entry })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// `conv(D_n · (1, 2, …, n))`; for odd `n` the orbit is closed under `−1` so
/// that the ball is symmetric.
pub fn remark_4_7(n: usize) -> Result<NormSpec> {
    if n < 2 {
        return Err(Error::InvalidSpec("remark_4_7 needs n ≥ 2".into()));
    }
    let mut pts = Vec::new();
    for perm in permutations(n) {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() % 2 == 1 && n.is_multiple_of(2) {
                continue;
            }
            let v: Vec<i64> =
                (0..n).map(|i| (perm[i] as i64 + 1) * if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            pts.push(QVector::from_ints(&v));
        }
    }
    pts.sort();
    NormSpec::polytope(n, pts)
}

fn l2(n: usize) -> NormSpec {
    NormSpec::lp(n, Exponent::Finite(2.0)).expect("valid")
}

fn l1(n: usize) -> NormSpec {
    NormSpec::lp(n, Exponent::Finite(1.0)).expect("valid")
}

/// `|ξ|₂ + |ς|` on three coordinates `(ξ₁, ξ₂, ς)`.
fn plane_plus_line() -> NormSpec {
    let slots = vec![Slot::Block { spec: l2(2), coords: vec![0, 1] }, Slot::Raw(2)];
    NormSpec::nested(3, l1(2), slots).expect("valid")
}

/// Coordinates `(ξ₁, ξ₂, ς₁, ς₂)`.
pub fn example_6_8_3() -> NormSpec {
    let slots = vec![Slot::Block { spec: plane_plus_line(), coords: vec![0, 1, 2] }, Slot::Raw(3)];
    NormSpec::nested(4, l2(2), slots).expect("valid")
}

/// Coordinates `(ξ₁, ξ₂, η₁, η₂, ς₁, ς₂)`.
pub fn example_6_8_4() -> NormSpec {
    let slots = vec![
        Slot::Block { spec: plane_plus_line(), coords: vec![0, 1, 4] },
        Slot::Block { spec: plane_plus_line(), coords: vec![2, 3, 5] },
    ];
    NormSpec::nested(6, l2(2), slots).expect("valid")
}

fn unit(n: usize, terms: &[(usize, f64)]) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for &(i, c) in terms {
        v[i] = c;
    }
    v
}

fn with_negatives(roots: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let neg: Vec<Vec<f64>> = roots.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    roots.into_iter().chain(neg).collect()
}

pub fn roots_a(n: usize) -> RootSystem {
    let mut roots = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                roots.push(unit(n, &[(i, 1.0), (j, -1.0)]));
            }
        }
    }
    RootSystem { index_set: (0..n).collect(), roots }
}

fn long_roots(n: usize) -> Vec<Vec<f64>> {
    let mut roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            roots.push(unit(n, &[(i, 1.0), (j, -1.0)]));
            roots.push(unit(n, &[(i, 1.0), (j, 1.0)]));
        }
    }
    roots
}

pub fn roots_b(n: usize) -> RootSystem {
    let mut roots: Vec<Vec<f64>> = (0..n).map(|i| unit(n, &[(i, 1.0)])).collect();
    roots.extend(long_roots(n));
    RootSystem { index_set: (0..n).collect(), roots: with_negatives(roots) }
}

pub fn roots_d(n: usize) -> RootSystem {
    RootSystem { index_set: (0..n).collect(), roots: with_negatives(long_roots(n)) }
}

fn reflections_of(axes: &[Vec<f64>]) -> Result<Vec<Reflection>> {
    axes.iter().map(|a| orthogonal_reflection(a)).collect()
}

pub fn simple_a(n: usize) -> Result<Vec<Reflection>> {
    reflections_of(&(0..n).map(|i| unit(n + 1, &[(i, 1.0), (i + 1, -1.0)])).collect::<Vec<_>>())
}

pub fn simple_b(n: usize) -> Result<Vec<Reflection>> {
    let mut axes: Vec<Vec<f64>> = (0..n - 1).map(|i| unit(n, &[(i, 1.0), (i + 1, -1.0)])).collect();
    axes.push(unit(n, &[(n - 1, 1.0)]));
    reflections_of(&axes)
}

pub fn simple_d(n: usize) -> Result<Vec<Reflection>> {
    if n < 2 {
        return Err(Error::InvalidSpec("simple_D needs n ≥ 2".into()));
    }
    let mut axes: Vec<Vec<f64>> = (0..n - 1).map(|i| unit(n, &[(i, 1.0), (i + 1, -1.0)])).collect();
    axes.push(unit(n, &[(n - 2, 1.0), (n - 1, 1.0)]));
    reflections_of(&axes)
}

pub fn i2(m: u64) -> Result<Vec<Reflection>> {
    if m < 2 {
        return Err(Error::InvalidSpec("I2(m) needs m ≥ 2".into()));
    }
    let t = PI / m as f64;
    reflections_of(&[vec![1.0, 0.0], vec![-t.cos(), t.sin()]])
}

/// Order matrix of a path diagram with the given edge weights.
pub fn path_orders(weights: &[u64]) -> Vec<Vec<Weight>> {
    let r = weights.len() + 1;
    let mut m = vec![vec![Weight::Finite(2); r]; r];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Weight::Finite(1);
    }
    for (i, &w) in weights.iter().enumerate() {
        m[i][i + 1] = Weight::Finite(w);
        m[i + 1][i] = Weight::Finite(w);
    }
    m
}

/// Unit roots with Gram matrix `-cos(π/m_ij)`, realised from its eigen-decomposition.
pub fn from_diagram(orders: &[Vec<Weight>]) -> Result<Vec<Reflection>> {
    let c = crate::coxeter::cosine_matrix(&orders.to_vec());
    let (vals, vecs) = c.symmetric_eigen();
    if vals[0] <= 1e-12 {
        return Err(Error::InvalidSpec("diagram is not of finite type".into()));
    }
    let r = orders.len();
    let roots = Matrix::from_fn(r, r, |i, j| vecs[(i, j)] * vals[j].sqrt());
    reflections_of(&roots.to_rows())
}

pub fn infinite_pair() -> Result<Vec<Reflection>> {
    let c: f64 = 0.9;
    reflections_of(&[vec![1.0, 0.0, 0.0], vec![c, (1.0 - c * c).sqrt(), 0.0], vec![0.0, 0.6, 0.8]])
}

/// `e₁, e₂` at angle 0.15 (so `‖e₁ − e₂‖₂ ≈ 0.1497`), and `e₃` meeting `e₂`
/// but orthogonal to `e₁`.
pub fn close_axes_triple() -> Result<Vec<Reflection>> {
    let t: f64 = 0.15;
    reflections_of(&[vec![1.0, 0.0, 0.0], vec![t.cos(), t.sin(), 0.0], vec![0.0, 0.6, 0.8]])
}

/// Names usable with [`fixture`] for every norm fixture exercised by tests.
pub fn ideal_norm_names() -> Vec<String> {
    let mut v: Vec<String> = ["example_6_8_3", "example_6_8_4", "orlicz_nakano(2,2,2,3,3,4)", "orlicz_nakano(2,3,4)"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for p in ["1", "1.5", "2", "3", "inf"] {
        v.push(format!("lp({p},3)"));
    }
    v
}

impl Fixture {
    pub fn norm(&self) -> Option<&NormSpec> {
        match &self.entry {
            Entry::Norm(n) => Some(n),
            _ => None,
        }
    }

    pub fn reflections(&self) -> Option<&[Reflection]> {
        match &self.entry {
            Entry::Reflections(r) => Some(r),
            _ => None,
        }
    }

    pub fn roots(&self) -> Option<&RootSystem> {
        match &self.entry {
            Entry::Roots(r) => Some(r),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Vector;

    #[test]
    fn example_norms() {
        let n = example_6_8_3().eval_norm(&Vector(vec![3.0, 4.0, 1.0, 2.0])).unwrap();
        assert!((n - 40f64.sqrt()).abs() < 1e-12);
        let m = example_6_8_4().eval_norm(&Vector(vec![3.0, 4.0, 0.0, 1.0, 1.0, 2.0])).unwrap();
        assert!((m - (36.0f64 + 9.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn names_parse() {
        assert!(fixture("remark_4_7(n=3)").is_ok());
        assert!(fixture("lp(inf,2)").is_ok());
        assert!(fixture("orlicz_nakano(2, 3)").is_ok());
        assert_eq!(fixture("nope").unwrap_err(), Error::UnknownFixture("nope".into()));
        assert!(matches!(fixture("lp(2)"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn root_counts() {
        assert_eq!(roots_b(4).roots.len(), 32);
        assert_eq!(roots_d(4).roots.len(), 24);
        assert_eq!(roots_a(4).roots.len(), 12);
    }
}
