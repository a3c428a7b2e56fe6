//! Derivative-free Nelder–Mead minimizer.

use alloc::vec;
use alloc::vec::Vec;

/// Stopping rules for [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Stop once `max f − min f` over the simplex falls below this.
    pub f_tol: f64,
    /// ...and every vertex is within this distance (max-norm) of the best one.
    pub x_tol: f64,
    pub max_iter: usize,
    /// Edge length of the initial simplex, per coordinate.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            f_tol: 1e-12,
            x_tol: 1e-9,
            max_iter: 10_000,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` starting from `x0`. Non-finite objective values are treated
/// as `+∞`, so the search simply steers away from infeasible regions.
pub fn minimize<F>(f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    verts.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        let step = if v[i] != 0.0 {
            opts.initial_step * v[i].abs().max(1.0)
        } else {
            opts.initial_step
        };
        v[i] += step;
        verts.push(v);
    }
    let mut vals: Vec<f64> = verts.iter().map(|v| eval(v)).collect();

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iter {
        // order vertices best → worst
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        verts = order.iter().map(|&i| verts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[n] - vals[0];
        let size = verts[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&verts[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread.is_finite() && spread < opts.f_tol && size < opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &verts[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }

        let along = |out: &mut [f64], coef: f64, worst: &[f64]| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst) {
                *o = c + coef * (c - w);
            }
        };

        along(&mut trial, REFLECT, &verts[n]);
        let f_r = eval(&trial);
        if f_r < vals[0] {
            along(&mut trial2, EXPAND, &verts[n]);
            let f_e = eval(&trial2);
            if f_e < f_r {
                verts[n].copy_from_slice(&trial2);
                vals[n] = f_e;
            } else {
                verts[n].copy_from_slice(&trial);
                vals[n] = f_r;
            }
            continue;
        }
        if f_r < vals[n - 1] {
            verts[n].copy_from_slice(&trial);
            vals[n] = f_r;
            continue;
        }
        // contraction: outside if the reflection helped at all, inside otherwise
        let (coef, reference) = if f_r < vals[n] {
            (CONTRACT, f_r)
        } else {
            (-CONTRACT, vals[n])
        };
        along(&mut trial2, coef, &verts[n]);
        let f_c = eval(&trial2);
        if f_c < reference {
            verts[n].copy_from_slice(&trial2);
            vals[n] = f_c;
            continue;
        }
        let best = verts[0].clone();
        for i in 1..=n {
            for (x, b) in verts[i].iter_mut().zip(&best) {
                *x = b + SHRINK * (*x - b);
            }
            vals[i] = eval(&verts[i]);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap_or(0);
    SimplexResult {
        x: verts[best].clone(),
        value: vals[best],
        iterations,
        converged,
    }
}
