//! Brute-force grid estimate of `inf ‖s_{e,e*}‖` on `ℓ_p²`.
//!
//! `e = (cos t, sin t)/‖·‖_p` on a 720-point grid of `[0, π)`, `e*` on the
//! pairing-1 line through the norming functional, operator norms by a
//! 10⁴-point sweep of the unit circle.

use std::f64::consts::PI;

pub const T_POINTS: usize = 720;
pub const LINE_POINTS: usize = 81;
pub const LINE_HALF_WIDTH: f64 = 2.0;
pub const SWEEP_POINTS: usize = 10_000;

fn norm(p: f64, x: [f64; 2]) -> f64 {
    if p.is_infinite() {
        x[0].abs().max(x[1].abs())
    } else {
        (x[0].abs().powf(p) + x[1].abs().powf(p)).powf(1.0 / p)
    }
}

fn dual_at(p: f64, e: [f64; 2]) -> [f64; 2] {
    // Gradient of the p-norm at a unit vector; p ∈ (1, ∞).
    let g = |v: f64| v.signum() * v.abs().powf(p - 1.0);
    [g(e[0]), g(e[1])]
}

/// Minimum over the grid. The sweep of a candidate stops as soon as it exceeds
/// the best value so far, which does not change the minimum.
pub fn grid_c(p: f64) -> f64 {
    assert!(p > 1.0 && p.is_finite());
    let sweep: Vec<[f64; 2]> = (0..SWEEP_POINTS)
        .map(|k| {
            let a = PI * k as f64 / SWEEP_POINTS as f64;
            let x = [a.cos(), a.sin()];
            let n = norm(p, x);
            [x[0] / n, x[1] / n]
        })
        .collect();
    let mut best = f64::INFINITY;
    for j in 0..T_POINTS {
        let t = PI * j as f64 / T_POINTS as f64;
        let u = [t.cos(), t.sin()];
        let nu = norm(p, u);
        let e = [u[0] / nu, u[1] / nu];
        let f0 = dual_at(p, e);
        let tangent = [-e[1], e[0]];
        for k in 0..LINE_POINTS {
            let lambda = -LINE_HALF_WIDTH + 2.0 * LINE_HALF_WIDTH * k as f64 / (LINE_POINTS - 1) as f64;
            let f = [f0[0] + lambda * tangent[0], f0[1] + lambda * tangent[1]];
            let pairing = f[0] * e[0] + f[1] * e[1];
            let f = [f[0] / pairing, f[1] / pairing];
            let mut worst: f64 = 0.0;
            for x in &sweep {
                let c = 2.0 * (f[0] * x[0] + f[1] * x[1]);
                worst = worst.max(norm(p, [x[0] - c * e[0], x[1] - c * e[1]]));
                if worst >= best {
                    break;
                }
            }
            best = best.min(worst);
        }
    }
    best
}
