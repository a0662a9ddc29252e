//! Geodesics of the bundle metric, integrated in induced coordinates.
//!
//! The state advances as (q, w) with q the induced coordinates (x, y) and w
//! the adapted-frame velocity components: q̇ = A(q) w and
//! ẇ^γ = −Γ^γ_{αβ} w^α w^β with the Koszul connection table, so no
//! frame-transport bookkeeping is needed. Published states carry the induced
//! velocity v = A w; the energy G(w, w) is the conserved quantity.

use thiserror::Error;

use crate::bundle::{adapted_frame_at, cg_metric_at};
use crate::connection::koszul_connection_at;
use crate::geometry::ChartedMetric;
use crate::linalg;

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicState {
    /// Induced coordinates (x₁..xₙ, y₁..yₙ).
    pub q: Vec<f64>,
    /// Induced velocity q̇.
    pub v: Vec<f64>,
    pub t: f64,
}

#[derive(Debug, Clone)]
pub struct GeodesicSample {
    pub state: GeodesicState,
    /// ^{CG}g(v, v) at this sample.
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Initial state first; one sample per completed step after it.
    pub samples: Vec<GeodesicSample>,
    /// Index of the first step that would have left the chart domain, if
    /// the integration stopped early.
    pub exit_index: Option<usize>,
}

#[derive(Debug, Error)]
pub enum GeodesicError {
    #[error("step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("start point {0:?} is outside the chart domain")]
    StartOutOfDomain(Vec<f64>),
}

/// Classical fixed-step RK4 on (q, w).
pub fn geodesic_integrate(
    m: &ChartedMetric,
    start: &GeodesicState,
    step: f64,
    n_steps: usize,
) -> Result<Trajectory, GeodesicError> {
    let n = m.dim();
    let n2 = 2 * n;
    assert_eq!(start.q.len(), n2, "state carries 2n induced coordinates");
    assert_eq!(start.v.len(), n2, "state carries 2n induced velocities");
    if step <= 0.0 {
        return Err(GeodesicError::NonPositiveStep(step));
    }
    if !m.domain_check(&start.q[..n]) {
        return Err(GeodesicError::StartOutOfDomain(start.q[..n].to_vec()));
    }

    let deriv = |q: &[f64], w: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let (x, y) = q.split_at(n);
        let frame = adapted_frame_at(m, x, y);
        let table = koszul_connection_at(m, x, y).values;
        let qdot = linalg::matvec(&frame.matrix, w);
        let mut wdot = vec![0.0; n2];
        for g in 0..n2 {
            for a in 0..n2 {
                for b in 0..n2 {
                    wdot[g] -= table[(g, a, b)] * w[a] * w[b];
                }
            }
        }
        (qdot, wdot)
    };

    let publish = |q: &[f64], w: &[f64], t: f64| -> GeodesicSample {
        let (x, y) = q.split_at(n);
        let frame = adapted_frame_at(m, x, y);
        let v = linalg::matvec(&frame.matrix, w);
        let g_frame = cg_metric_at(m, x, y).assembled();
        let mut energy = 0.0;
        for a in 0..n2 {
            for b in 0..n2 {
                energy += g_frame[(a, b)] * w[a] * w[b];
            }
        }
        GeodesicSample {
            state: GeodesicState {
                q: q.to_vec(),
                v,
                t,
            },
            energy,
        }
    };

    // initial frame velocity w = A⁻¹ v
    let frame0 = adapted_frame_at(m, &start.q[..n], &start.q[n..]);
    let mut w = linalg::matvec(&frame0.inverse, &start.v);
    let mut q = start.q.clone();
    let mut t = start.t;

    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(publish(&q, &w, t));
    let mut exit_index = None;

    for istep in 0..n_steps {
        let (k1q, k1w) = deriv(&q, &w);
        let add = |base: &[f64], k: &[f64], h: f64| -> Vec<f64> {
            base.iter().zip(k.iter()).map(|(b, kk)| b + h * kk).collect()
        };
        let half = step / 2.0;
        let q2 = add(&q, &k1q, half);
        if !m.domain_check(&q2[..n]) {
            exit_index = Some(istep);
            break;
        }
        let (k2q, k2w) = deriv(&q2, &add(&w, &k1w, half));
        let q3 = add(&q, &k2q, half);
        if !m.domain_check(&q3[..n]) {
            exit_index = Some(istep);
            break;
        }
        let (k3q, k3w) = deriv(&q3, &add(&w, &k2w, half));
        let q4 = add(&q, &k3q, step);
        if !m.domain_check(&q4[..n]) {
            exit_index = Some(istep);
            break;
        }
        let (k4q, k4w) = deriv(&q4, &add(&w, &k3w, step));

        for i in 0..n2 {
            q[i] += step / 6.0 * (k1q[i] + 2.0 * k2q[i] + 2.0 * k3q[i] + k4q[i]);
        }
        let mut w_next = w.clone();
        for i in 0..n2 {
            w_next[i] += step / 6.0 * (k1w[i] + 2.0 * k2w[i] + 2.0 * k3w[i] + k4w[i]);
        }
        w = w_next;
        t += step;
        if !m.domain_check(&q[..n]) {
            exit_index = Some(istep);
            break;
        }
        samples.push(publish(&q, &w, t));
    }

    Ok(Trajectory {
        samples,
        exit_index,
    })
}

/// Largest relative energy drift along a trajectory.
pub fn energy_drift(traj: &Trajectory) -> f64 {
    let e0 = traj.samples[0].energy;
    traj.samples
        .iter()
        .map(|s| (s.energy - e0).abs() / e0.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}
