//! Deterministic bundle-point sampling.
//!
//! Base points are uniform over the chart's sample box with rejection
//! against the domain check; fiber points are y = y_max · L^{−T} u with u
//! uniform in the unit ball and L the Cholesky factor of g(x), so the fiber
//! radius r² = g_{ji} y^j y^i is bounded by y_max² on every chart alike.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::ChartedMetric;
use crate::linalg;

/// Draw `count` in-domain bundle points, reproducibly for a given seed.
pub fn sample_points(
    m: &ChartedMetric,
    count: usize,
    seed: u64,
    y_max: f64,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let n = m.dim();
    let sample_box = m.sample_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: Vec<f64> = sample_box
            .iter()
            .map(|(lo, hi)| rng.gen_range(*lo..*hi))
            .collect();
        if !m.domain_check(&x) {
            continue;
        }
        let u = unit_ball(&mut rng, n);
        let g = m.eval(&x);
        let l = linalg::cholesky(&g).expect("metric positive definite in-domain");
        // solve Lᵀ w = u, so that w = L^{−T} u
        let lt = ndarray::Array2::from_shape_fn((n, n), |(i, j)| l[(j, i)]);
        let w = linalg::solve(&lt, &u).expect("Cholesky factor invertible");
        let y: Vec<f64> = w.iter().map(|v| v * y_max).collect();
        out.push((x, y));
    }
    out
}

/// Uniform draw from the closed unit ball by cube rejection.
fn unit_ball(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if u.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            return u;
        }
    }
}
