//! Operator norms and the reflection constant `c(E) = inf ‖s_{e,e*}‖`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{self, Matrix};
use crate::spaces::{sample_sphere, Functional, NormSpec, SphereSample, Vector};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorNorm {
    pub value: f64,
    pub argmax: Vector,
}

/// Lower bound for `sup ‖Mx‖/‖x‖`: best of the sample, the basis vectors, the
/// columns of `M` and the `±1` eigenvectors of `M`, then coordinate-wise
/// ascent from the best few candidates with step halving.
pub fn operator_norm(m: &Matrix, spec: &NormSpec, sample: &SphereSample, refine_steps: usize) -> OperatorNorm {
    let n = spec.dim();
    let ratio = |x: &[f64]| {
        let d = spec.norm(x);
        if d <= 1e-300 {
            0.0
        } else {
            spec.norm(&m.mul_vec(x)) / d
        }
    };
    let mut candidates: Vec<Vec<f64>> = sample.points.iter().map(|p| p.0.clone()).collect();
    candidates.extend((0..n).map(|i| linalg::unit(n, i)));
    candidates.extend((0..n).map(|j| m.column(j)));
    for shift in [1.0, -1.0] {
        let a = m.sub(&Matrix::identity(n).scale(shift));
        candidates.extend(a.null_space(1e-10));
    }
    let mut scored: Vec<(f64, Vec<f64>)> = candidates.into_iter().map(|x| (ratio(&x), x)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    scored.truncate(3);
    let (mut best, mut arg) = scored[0].clone();
    for (v0, x0) in scored {
        let (v, x) = ascend(&ratio, x0, v0, refine_steps);
        if v > best {
            best = v;
            arg = x;
        }
    }
    let scale = spec.norm(&arg);
    if scale > 0.0 {
        arg.iter_mut().for_each(|a| *a /= scale);
    }
    OperatorNorm { value: best, argmax: Vector(arg) }
}

fn ascend(f: &impl Fn(&[f64]) -> f64, mut x: Vec<f64>, mut v: f64, steps: usize) -> (f64, Vec<f64>) {
    let scale = x.iter().fold(0.0f64, |m, a| m.max(a.abs())).max(1e-300);
    let mut h = 0.25 * scale;
    for _ in 0..steps {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += dir * h;
                let w = f(&y);
                if w > v {
                    v = w;
                    x = y;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    (v, x)
}

/// Optimiser settings for [`estimate_c`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CConfig {
    pub iterations: usize,
    pub initial_scale: f64,
    pub decay_every: usize,
    pub sphere_points: usize,
    pub refine_steps: usize,
}

impl Default for CConfig {
    fn default() -> Self {
        Self { iterations: 200, initial_scale: 0.3, decay_every: 20, sphere_points: 48, refine_steps: 12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartResult {
    pub index: usize,
    pub value: f64,
    pub e: Vector,
    pub e_star: Functional,
    /// Best value after each iteration; non-increasing.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CEstimate {
    /// Best value found; an upper bound on `c(E)`.
    pub value: f64,
    pub argmin_e: Vector,
    pub argmin_e_star: Functional,
    pub restarts: usize,
    pub seed: u64,
    pub traces: Vec<Vec<f64>>,
}

/// Parameters `(u, w) ∈ R^n × R^n` map to `e = u/‖u‖` and
/// `e* = f₀ + w − w(e)·f₀`, where `f₀` norms `e`; so `e*(e) = 1`.
fn pair_from_params(spec: &NormSpec, params: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = spec.dim();
    let (u, w) = params.split_at(n);
    let nu = spec.norm(u);
    if !(nu > 1e-12) || !nu.is_finite() {
        return None;
    }
    let e: Vec<f64> = u.iter().map(|x| x / nu).collect();
    let (f0, _) = spec.subgradient(&e);
    let f0_e = linalg::dot(&f0, &e);
    let f0: Vec<f64> = f0.iter().map(|x| x / f0_e).collect();
    let we = linalg::dot(w, &e);
    let f: Vec<f64> = f0.iter().zip(w).map(|(a, b)| a + b - we * a).collect();
    Some((e, f))
}

fn reflection_matrix(e: &[f64], f: &[f64]) -> Matrix {
    Matrix::identity(e.len()).sub(&Matrix::outer(e, f).scale(2.0))
}

/// The restart objective: `‖s_{e,e*}‖` on a fixed sphere sample.
struct Objective<'a> {
    spec: &'a NormSpec,
    sample: SphereSample,
    cfg: CConfig,
}

impl Objective<'_> {
    fn eval(&self, params: &[f64]) -> f64 {
        match pair_from_params(self.spec, params) {
            Some((e, f)) => {
                operator_norm(&reflection_matrix(&e, &f), self.spec, &self.sample, self.cfg.refine_steps).value
            }
            None => f64::INFINITY,
        }
    }
}

/// Starting point of restart `k`: the `k`-th coordinate axis for `k < n`, a
/// seeded Gaussian direction otherwise; the tangential part starts at zero.
fn start_point(n: usize, k: usize, seed: u64) -> Vec<f64> {
    let mut x = vec![0.0; 2 * n];
    if k < n {
        x[k] = 1.0;
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k as u64));
        for xi in x.iter_mut().take(n) {
            *xi = rng.sample(StandardNormal);
        }
    }
    x
}

/// One Nelder–Mead restart. Deterministic in `(seed, index)`; restarts are
/// independent so callers may run them in parallel.
pub fn run_restart(spec: &NormSpec, index: usize, seed: u64, cfg: &CConfig) -> RestartResult {
    let n = spec.dim();
    let obj = Objective { spec, sample: sample_sphere(spec, cfg.sphere_points, seed), cfg: *cfg };
    let x0 = start_point(n, index, seed);
    let dim = 2 * n;
    let mut scale = cfg.initial_scale;
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim + 1);
    let build = |x0: &[f64], scale: f64| -> Vec<(f64, Vec<f64>)> {
        let mut s = vec![(obj.eval(x0), x0.to_vec())];
        for i in 0..dim {
            let mut x = x0.to_vec();
            x[i] += scale;
            s.push((obj.eval(&x), x));
        }
        s
    };
    simplex.extend(build(&x0, scale));
    let mut trace = Vec::with_capacity(cfg.iterations);
    for it in 0..cfg.iterations {
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        if it > 0 && it % cfg.decay_every == 0 {
            scale *= 0.5;
            let best = simplex[0].clone();
            simplex = build(&best.1, scale);
            simplex[0] = best;
            simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        nelder_mead_step(&obj, &mut simplex);
        let best = simplex.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
        trace.push(best.min(trace.last().copied().unwrap_or(f64::INFINITY)));
    }
    simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (value, x) = simplex.swap_remove(0);
    let (e, f) = pair_from_params(spec, &x).expect("finite objective implies a valid pair");
    RestartResult { index, value, e: Vector(e), e_star: Functional(f), trace }
}

fn nelder_mead_step(obj: &Objective<'_>, s: &mut [(f64, Vec<f64>)]) {
    s.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k = s.len() - 1;
    let dim = s[0].1.len();
    let mut centroid = vec![0.0; dim];
    for (_, x) in &s[..k] {
        for (c, xi) in centroid.iter_mut().zip(x) {
            *c += xi / k as f64;
        }
    }
    let toward = |t: f64, worst: &[f64]| -> Vec<f64> {
        centroid.iter().zip(worst).map(|(c, w)| c + t * (w - c)).collect()
    };
    let worst = s[k].1.clone();
    let xr = toward(-1.0, &worst);
    let fr = obj.eval(&xr);
    if fr < s[0].0 {
        let xe = toward(-2.0, &worst);
        let fe = obj.eval(&xe);
        s[k] = if fe < fr { (fe, xe) } else { (fr, xr) };
    } else if fr < s[k - 1].0 {
        s[k] = (fr, xr);
    } else {
        let xc = if fr < s[k].0 { toward(-0.5, &worst) } else { toward(0.5, &worst) };
        let fc = obj.eval(&xc);
        if fc < s[k].0.min(fr) {
            s[k] = (fc, xc);
        } else {
            let best = s[0].1.clone();
            for item in s.iter_mut().skip(1) {
                let x: Vec<f64> = best.iter().zip(&item.1).map(|(b, x)| b + 0.5 * (x - b)).collect();
                *item = (obj.eval(&x), x);
            }
        }
    }
}

/// Picks the lowest value, ties going to the lowest restart index.
pub fn merge_restarts(mut results: Vec<RestartResult>, seed: u64) -> Result<CEstimate> {
    if results.is_empty() {
        return Err(Error::Empty("restarts"));
    }
    results.sort_by_key(|r| r.index);
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.value < results[best].value {
            best = i;
        }
    }
    let b = &results[best];
    Ok(CEstimate {
        value: b.value,
        argmin_e: b.e.clone(),
        argmin_e_star: b.e_star.clone(),
        restarts: results.len(),
        seed,
        traces: results.iter().map(|r| r.trace.clone()).collect(),
    })
}

/// Sequential multi-start estimate of `c(E)`.
pub fn estimate_c(spec: &NormSpec, restarts: usize, seed: u64) -> Result<CEstimate> {
    estimate_c_with(spec, restarts, seed, &CConfig::default())
}

pub fn estimate_c_with(spec: &NormSpec, restarts: usize, seed: u64, cfg: &CConfig) -> Result<CEstimate> {
    if restarts == 0 {
        return Err(Error::Empty("restarts"));
    }
    let results = (0..restarts).map(|k| run_restart(spec, k, seed, cfg)).collect();
    merge_restarts(results, seed)
}

/// `‖s_{e,e*}‖` for an explicit pair, with a denser sphere sample.
pub fn reflection_norm(spec: &NormSpec, e: &Vector, e_star: &Functional, cfg: &CConfig, seed: u64) -> f64 {
    let sample = sample_sphere(spec, cfg.sphere_points, seed);
    operator_norm(&reflection_matrix(&e.0, &e_star.0), spec, &sample, cfg.refine_steps).value
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub dim: usize,
    pub restarts: usize,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    /// Second differences of `c` over the `p` grid (divided differences for
    /// uneven spacing, scaled by the squared mean spacing).
    pub second_differences: Vec<f64>,
}

/// Second differences of `ys` over a possibly uneven grid `xs`.
pub fn second_differences(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    (1..xs.len().saturating_sub(1))
        .map(|i| {
            let (h0, h1) = (xs[i] - xs[i - 1], xs[i + 1] - xs[i]);
            let dd = 2.0 * (ys[i + 1] / (h1 * (h0 + h1)) - ys[i] / (h0 * h1) + ys[i - 1] / (h0 * (h0 + h1)));
            dd * (0.5 * (h0 + h1)).powi(2)
        })
        .collect()
}

pub fn sweep_c_lp(p_values: &[f64], dim: usize, restarts: usize, seed: u64) -> Result<Sweep> {
    sweep_c_lp_by(p_values, dim, restarts, seed, |spec| estimate_c(spec, restarts, seed))
}

/// Sweep with a caller-supplied estimator (for parallel restarts).
pub fn sweep_c_lp_by(
    p_values: &[f64],
    dim: usize,
    restarts: usize,
    seed: u64,
    mut estimate: impl FnMut(&NormSpec) -> Result<CEstimate>,
) -> Result<Sweep> {
    let mut rows = Vec::with_capacity(p_values.len());
    for &p in p_values {
        let spec = NormSpec::lp(dim, crate::spaces::Exponent::Finite(p))?;
        rows.push(SweepRow { p, c: estimate(&spec)?.value });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.p).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.c).collect();
    Ok(Sweep { dim, restarts, seed, second_differences: second_differences(&xs, &ys), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Exponent;

    #[test]
    fn identity_and_sign_change_have_norm_one() {
        let spec = NormSpec::lp(2, Exponent::Finite(3.0)).unwrap();
        let s = sample_sphere(&spec, 32, 0);
        assert!((operator_norm(&Matrix::identity(2), &spec, &s, 10).value - 1.0).abs() < 1e-12);
        let d = Matrix::diagonal(&[-1.0, 1.0]);
        assert!((operator_norm(&d, &spec, &s, 10).value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn skew_reflection_in_l1() {
        let spec = NormSpec::lp(2, Exponent::Finite(1.0)).unwrap();
        let s = sample_sphere(&spec, 32, 0);
        let m = reflection_matrix(&[1.0, 0.0], &[1.0, 1.0]);
        assert!((operator_norm(&m, &spec, &s, 20).value - 3.0).abs() < 1e-6);
    }

    #[test]
    fn pairs_are_normalised() {
        let spec = NormSpec::lp(3, Exponent::Finite(4.0)).unwrap();
        let (e, f) = pair_from_params(&spec, &[0.3, -1.0, 0.2, 0.5, 0.1, -0.7]).unwrap();
        assert!((linalg::dot(&e, &f) - 1.0).abs() < 1e-12);
        assert!((spec.norm(&e) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn second_difference_of_quadratic() {
        let xs = [1.0, 1.5, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let d = second_differences(&xs, &ys);
        assert!((d[0] - 2.0 * 0.25).abs() < 1e-12);
        assert!((d[1] - 2.0 * 0.75f64.powi(2)).abs() < 1e-12);
    }
}
