//! Tangent-bundle points, the adapted frame, and the bundle metric.
//!
//! Bundle index conventions: Greek indices α, β, … run over 0..2n; the first
//! n are horizontal (unbarred), the last n vertical (barred). The adapted
//! frame fields, expressed in induced coordinates q = (x, y), are
//! X_(i) = ∂_i − y^s Γ^h_{si} ∂_{h̄} and X_(ī) = ∂_{ī}; they form the columns
//! of the frame matrix A, so A = [[I, 0], [B, I]] with B^h_i = −y^s Γ^h_{si}.
//!
//! The bundle metric in the adapted frame is block diagonal:
//! hh = g_{ji}, hv = 0, vv = (1/α)(g_{ji} + y_j y_i) with α = 1 + r² and
//! r² = g_{ji} y^j y^i.

use ndarray::{Array2, Array3};

use crate::geometry::{christoffel, riemann, BaseField, ChartedMetric, GeometryError};
use crate::linalg;
use crate::scalar::{seed_along, Dual, Scalar};

/// A tangent-bundle point (x, y) with its derived scalars.
#[derive(Debug, Clone)]
pub struct BundlePoint<S: Scalar> {
    pub x: Vec<S>,
    pub y: Vec<S>,
}

impl<S: Scalar> BundlePoint<S> {
    pub fn new(m: &ChartedMetric, x: Vec<S>, y: Vec<S>) -> Result<Self, GeometryError> {
        let xv: Vec<f64> = x.iter().map(|v| v.value()).collect();
        if x.len() != m.dim() || y.len() != m.dim() || !m.domain_check(&xv) {
            return Err(GeometryError::OutOfDomain {
                metric: m.name(),
                point: xv,
            });
        }
        Ok(BundlePoint { x, y })
    }

    /// r² = g_{ji} y^j y^i ≥ 0.
    pub fn r2(&self, m: &ChartedMetric) -> S {
        let g = m.eval(&self.x);
        let n = m.dim();
        let mut s = S::zero();
        for j in 0..n {
            for i in 0..n {
                let term = g[(j, i)] * self.y[j] * self.y[i];
                s += term;
            }
        }
        s
    }

    /// α = 1 + r².
    pub fn alpha(&self, m: &ChartedMetric) -> S {
        S::one() + self.r2(m)
    }

    /// y_j = g_{ji} y^i.
    pub fn y_lower(&self, m: &ChartedMetric) -> Vec<S> {
        linalg::matvec(&m.eval(&self.x), &self.y)
    }
}

/// Concatenate base and fiber coordinates into an induced-coordinate point.
pub fn induced_point<S: Scalar>(x: &[S], y: &[S]) -> Vec<S> {
    let mut q = Vec::with_capacity(x.len() + y.len());
    q.extend_from_slice(x);
    q.extend_from_slice(y);
    q
}

/// The adapted-frame matrix as a function of the induced coordinates
/// q = (x, y): column α holds the induced components of the frame field X_α.
pub fn frame_columns<S: Scalar>(m: &ChartedMetric, q: &[S]) -> Array2<S> {
    let n = m.dim();
    debug_assert_eq!(q.len(), 2 * n);
    let (x, y) = q.split_at(n);
    let gamma = christoffel(m, x);
    let mut a = Array2::from_elem((2 * n, 2 * n), S::zero());
    for i in 0..2 * n {
        a[(i, i)] = S::one();
    }
    for h in 0..n {
        for i in 0..n {
            let mut v = S::zero();
            for s in 0..n {
                let term = y[s] * gamma[(h, s, i)];
                v -= term;
            }
            a[(n + h, i)] = v;
        }
    }
    a
}

/// The adapted frame and its inverse at a bundle point.
#[derive(Debug, Clone)]
pub struct AdaptedFrame<S: Scalar> {
    /// Columns are the frame fields in induced coordinates.
    pub matrix: Array2<S>,
    /// Closed-form inverse [[I, 0], [−B, I]].
    pub inverse: Array2<S>,
}

pub fn adapted_frame_at<S: Scalar>(m: &ChartedMetric, x: &[S], y: &[S]) -> AdaptedFrame<S> {
    let n = m.dim();
    let matrix = frame_columns(m, &induced_point(x, y));
    let mut inverse = matrix.clone();
    for h in 0..n {
        for i in 0..n {
            inverse[(n + h, i)] = -matrix[(n + h, i)];
        }
    }
    AdaptedFrame { matrix, inverse }
}

/// Structure coefficients Ω^ε_{αβ} with [X_α, X_β] = Ω^ε_{αβ} X_ε, stored as
/// `omega[ε][α][β]`, computed from numeric frame commutators: directional
/// dual-number derivatives of the frame columns along frame columns,
/// re-expressed in the frame basis through A⁻¹.
pub fn structure_coefficients_at<S: Scalar>(
    m: &ChartedMetric,
    x: &[S],
    y: &[S],
) -> Array3<S> {
    let n2 = 2 * m.dim();
    let q = induced_point(x, y);
    let frame = adapted_frame_at(m, x, y);
    // jac[α][β][μ] = (X_α · ∂) X_β^μ, one dual sweep per direction α
    let mut jac = Array3::from_elem((n2, n2, n2), S::zero());
    for alpha in 0..n2 {
        let dir: Vec<S> = (0..n2).map(|mu| frame.matrix[(mu, alpha)]).collect();
        let cols = frame_columns::<Dual<S>>(m, &seed_along(&q, &dir));
        for beta in 0..n2 {
            for mu in 0..n2 {
                jac[(alpha, beta, mu)] = cols[(mu, beta)].eps;
            }
        }
    }
    let mut omega = Array3::from_elem((n2, n2, n2), S::zero());
    for alpha in 0..n2 {
        for beta in 0..n2 {
            let commut: Vec<S> = (0..n2)
                .map(|mu| jac[(alpha, beta, mu)] - jac[(beta, alpha, mu)])
                .collect();
            let in_frame = linalg::matvec(&frame.inverse, &commut);
            for eps in 0..n2 {
                omega[(eps, alpha, beta)] = in_frame[eps];
            }
        }
    }
    omega
}

/// Closed-form structure coefficients used only as a cross-check of the
/// numeric commutators: Ω^{h̄}_{ij} = −y^s R^h_{ijs}, Ω^{h̄}_{i ȷ̄} = Γ^h_{ji},
/// antisymmetric counterparts, all other components zero.
pub fn structure_coefficients_closed_form<S: Scalar>(
    m: &ChartedMetric,
    x: &[S],
    y: &[S],
) -> Array3<S> {
    let n = m.dim();
    let gamma = christoffel(m, x);
    let r = riemann(m, x);
    let mut omega = Array3::from_elem((2 * n, 2 * n, 2 * n), S::zero());
    for h in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = S::zero();
                for s in 0..n {
                    let term = y[s] * r[(h, i, j, s)];
                    v -= term;
                }
                omega[(n + h, i, j)] = v;
                omega[(n + h, i, n + j)] = gamma[(h, j, i)];
                omega[(n + h, n + j, i)] = -gamma[(h, j, i)];
            }
        }
    }
    omega
}

/// The bundle metric in the adapted frame, block by block.
#[derive(Debug, Clone)]
pub struct BundleMetricBlocks<S: Scalar> {
    pub hh: Array2<S>,
    pub hv: Array2<S>,
    pub vv: Array2<S>,
}

impl<S: Scalar> BundleMetricBlocks<S> {
    /// Assemble the full 2n×2n matrix [[hh, hv], [hvᵀ, vv]].
    pub fn assembled(&self) -> Array2<S> {
        let n = self.hh.nrows();
        let mut g = Array2::from_elem((2 * n, 2 * n), S::zero());
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.hh[(i, j)];
                g[(i, n + j)] = self.hv[(i, j)];
                g[(n + i, j)] = self.hv[(j, i)];
                g[(n + i, n + j)] = self.vv[(i, j)];
            }
        }
        g
    }
}

/// Bundle metric blocks: hh = g, hv = 0, vv = (1/α)(g_{ji} + y_j y_i).
pub fn cg_metric_at<S: Scalar>(m: &ChartedMetric, x: &[S], y: &[S]) -> BundleMetricBlocks<S> {
    let n = m.dim();
    let g = m.eval(x);
    let p = BundlePoint {
        x: x.to_vec(),
        y: y.to_vec(),
    };
    let alpha = p.alpha(m);
    let yl = p.y_lower(m);
    let inv_alpha = alpha.recip();
    let mut vv = Array2::from_elem((n, n), S::zero());
    for j in 0..n {
        for i in 0..n {
            vv[(j, i)] = inv_alpha * (g[(j, i)] + yl[j] * yl[i]);
        }
    }
    BundleMetricBlocks {
        hh: g,
        hv: Array2::from_elem((n, n), S::zero()),
        vv,
    }
}

/// Inverse blocks: hh⁻¹ = g^{ji}, vv⁻¹ = α g^{ji} − y^j y^i (Sherman-Morrison).
pub fn cg_metric_inverse_at<S: Scalar>(
    m: &ChartedMetric,
    x: &[S],
    y: &[S],
) -> BundleMetricBlocks<S> {
    let n = m.dim();
    let g_inv = m.metric_inverse(x);
    let p = BundlePoint {
        x: x.to_vec(),
        y: y.to_vec(),
    };
    let alpha = p.alpha(m);
    let mut vv = Array2::from_elem((n, n), S::zero());
    for j in 0..n {
        for i in 0..n {
            vv[(j, i)] = alpha * g_inv[(j, i)] - y[j] * y[i];
        }
    }
    BundleMetricBlocks {
        hh: g_inv,
        hv: Array2::from_elem((n, n), S::zero()),
        vv,
    }
}

/// The pairing γ g_X = y^j g_{ji} X^i of a base field value with the fiber
/// vector.
pub fn gamma_pairing<S: Scalar>(m: &ChartedMetric, x: &[S], y: &[S], field_value: &[S]) -> S {
    let g = m.eval(x);
    let n = m.dim();
    let mut s = S::zero();
    for j in 0..n {
        for i in 0..n {
            let term = y[j] * g[(j, i)] * field_value[i];
            s += term;
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftKind {
    Vertical,
    Complete,
    Horizontal,
}

impl LiftKind {
    pub fn name(self) -> &'static str {
        match self {
            LiftKind::Vertical => "vertical",
            LiftKind::Complete => "complete",
            LiftKind::Horizontal => "horizontal",
        }
    }
}

/// A lifted vector field value in adapted-frame components.
#[derive(Debug, Clone)]
pub struct LiftedVector<S: Scalar> {
    pub horizontal_part: Vec<S>,
    pub vertical_part: Vec<S>,
    pub kind: LiftKind,
    pub base_field: BaseField,
}

/// A lifted covector value in adapted-frame components (ω_α).
#[derive(Debug, Clone)]
pub struct LiftedCovector<S: Scalar> {
    pub horizontal_part: Vec<S>,
    pub vertical_part: Vec<S>,
    pub kind: LiftKind,
    pub base_field: BaseField,
}

/// Lift of a base field in adapted-frame components:
/// ^V X = (0, X), ^H X = (X, 0), ^C X = (X, y^s ∇_s X).
pub fn lift_vector<S: Scalar>(
    m: &ChartedMetric,
    f: BaseField,
    kind: LiftKind,
    x: &[S],
    y: &[S],
) -> LiftedVector<S> {
    let n = m.dim();
    let xv = f.eval(m, x);
    let (h, v) = match kind {
        LiftKind::Vertical => (vec![S::zero(); n], xv),
        LiftKind::Horizontal => (xv, vec![S::zero(); n]),
        LiftKind::Complete => {
            let nabla = crate::geometry::covariant_derivative_vector(m, f, x);
            let mut v = vec![S::zero(); n];
            for h_idx in 0..n {
                for s in 0..n {
                    let term = y[s] * nabla[(s, h_idx)];
                    v[h_idx] += term;
                }
            }
            (xv, v)
        }
    };
    LiftedVector {
        horizontal_part: h,
        vertical_part: v,
        kind,
        base_field: f,
    }
}

/// Lift of a base field as a function of induced coordinates q = (x, y),
/// returned as 2n induced components. Used where the lift must be
/// differentiated as a vector field on the bundle (Lie-derivative oracle):
/// ^V X = (0, X), ^C X = (X, y^s ∂_s X), ^H X = (X, −y^s Γ^h_{sm} X^m).
pub fn lift_vector_induced<S: Scalar>(
    m: &ChartedMetric,
    f: BaseField,
    kind: LiftKind,
    q: &[S],
) -> Vec<S> {
    let n = m.dim();
    let (x, y) = q.split_at(n);
    let xv = f.eval(m, x);
    let mut out = vec![S::zero(); 2 * n];
    match kind {
        LiftKind::Vertical => {
            out[n..].copy_from_slice(&xv);
        }
        LiftKind::Complete => {
            out[..n].copy_from_slice(&xv);
            let dx = crate::geometry::field_partials(m, f, x);
            for h in 0..n {
                for s in 0..n {
                    let term = y[s] * dx[(s, h)];
                    out[n + h] += term;
                }
            }
        }
        LiftKind::Horizontal => {
            out[..n].copy_from_slice(&xv);
            let gamma = christoffel(m, x);
            for h in 0..n {
                for s in 0..n {
                    for mm in 0..n {
                        let term = y[s] * gamma[(h, s, mm)] * xv[mm];
                        out[n + h] -= term;
                    }
                }
            }
        }
    }
    out
}

/// Closed-form associated covectors of the three lifts:
/// ^V X_B = (0, (1/α)(X_i + y_i ⟨X, y⟩)),
/// ^C X_B = (X_i, (1/α)(y^n ∇_n X_i + y_i ∇_n X_t y^t y^n)),
/// ^H X_B = (X_i, 0).
pub fn lift_covector<S: Scalar>(
    m: &ChartedMetric,
    f: BaseField,
    kind: LiftKind,
    x: &[S],
    y: &[S],
) -> LiftedCovector<S> {
    let n = m.dim();
    let xl = crate::geometry::field_lowered(m, f, x);
    let p = BundlePoint {
        x: x.to_vec(),
        y: y.to_vec(),
    };
    let alpha = p.alpha(m);
    let yl = p.y_lower(m);
    let inv_alpha = alpha.recip();
    let (h, v) = match kind {
        LiftKind::Horizontal => (xl, vec![S::zero(); n]),
        LiftKind::Vertical => {
            let mut pairing = S::zero();
            for t in 0..n {
                let term = xl[t] * y[t];
                pairing += term;
            }
            let v: Vec<S> = (0..n)
                .map(|i| inv_alpha * (xl[i] + yl[i] * pairing))
                .collect();
            (vec![S::zero(); n], v)
        }
        LiftKind::Complete => {
            let nabla_low = crate::geometry::covariant_derivative_covector(m, f, x);
            // c = ∇_n X_t y^t y^n
            let mut c = S::zero();
            for nn in 0..n {
                for t in 0..n {
                    let term = nabla_low[(nn, t)] * y[t] * y[nn];
                    c += term;
                }
            }
            let mut v = vec![S::zero(); n];
            for i in 0..n {
                let mut d = S::zero();
                for nn in 0..n {
                    let term = nabla_low[(nn, i)] * y[nn];
                    d += term;
                }
                v[i] = inv_alpha * (d + yl[i] * c);
            }
            (xl, v)
        }
    };
    LiftedCovector {
        horizontal_part: h,
        vertical_part: v,
        kind,
        base_field: f,
    }
}

/// Lower a lifted vector with the bundle metric blocks; the independent
/// oracle for `lift_covector`.
pub fn lower_lifted_vector<S: Scalar>(
    blocks: &BundleMetricBlocks<S>,
    lifted: &LiftedVector<S>,
) -> LiftedCovector<S> {
    let h = linalg::matvec(&blocks.hh, &lifted.horizontal_part);
    let v = linalg::matvec(&blocks.vv, &lifted.vertical_part);
    LiftedCovector {
        horizontal_part: h,
        vertical_part: v,
        kind: lifted.kind,
        base_field: lifted.base_field,
    }
}
