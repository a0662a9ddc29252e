//! Base-manifold Riemannian calculus.
//!
//! Index conventions used throughout the crate:
//! - Christoffel symbols `Gamma[h][j][i]` = Γ^h_{ji}, symmetric in (j, i).
//! - Riemann tensor `R[h][j][i][k]` = R^h_{jik} with
//!   R(∂_j, ∂_i)∂_k = R^h_{jik} ∂_h, i.e.
//!   R^h_{jik} = ∂_j Γ^h_{ik} − ∂_i Γ^h_{jk} + Γ^h_{jm}Γ^m_{ik} − Γ^h_{im}Γ^m_{jk}.
//! - The lowered tensor `lowered[i][j][k][l]` = g(R(∂_i,∂_j)∂_l, ∂_k), the
//!   arrangement for which constant curvature K gives
//!   R_{ijkl} = K (g_{ik} g_{jl} − g_{il} g_{jk}).
//! - The mixed tensor `mixed[h][a][b][c]` = R^{h·}_{·abc} := g^{ht} g_{cs} R^s_{tab}
//!   (canonical reading); the alternative contraction swaps the slot the
//!   dummy t occupies and equals the negative of the canonical one.
//!
//! All derivative work is forward-mode dual numbers (first derivatives of g
//! for Γ, nested duals for R), never finite differences.

use ndarray::{Array2, Array3, Array4, Array5};
use thiserror::Error;

use crate::linalg;
use crate::scalar::{seed_partial, Dual, Scalar};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("unknown metric '{0}' (expected euclidean(n), sphere(radius), hyperbolic_half_plane, flat_torus(n))")]
    UnknownMetric(String),
    #[error("invalid metric parameter: {0}")]
    BadParameter(String),
    #[error("point {point:?} outside the chart domain of {metric}")]
    OutOfDomain { metric: String, point: Vec<f64> },
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

/// A single-chart Riemannian metric with a smooth matrix evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartedMetric {
    /// Flat ℝ^n, identity metric.
    Euclidean { n: usize },
    /// Round sphere of the given radius, chart (θ, φ), 0 < θ < π.
    Sphere { radius: f64 },
    /// Hyperbolic upper half-plane, chart (x, y), y > 0, g = δ/y².
    HalfPlane,
    /// Flat torus chart [0, 2π)^n, identity metric.
    FlatTorus { n: usize },
}

/// Margin kept from chart singularities; samplers and domain checks both
/// honor it.
pub const DOMAIN_MARGIN: f64 = 1e-3;

impl ChartedMetric {
    /// Construct a builtin metric by name and parameter list.
    pub fn builtin(name: &str, params: &[f64]) -> Result<Self, GeometryError> {
        let int_param = |default: usize| -> Result<usize, GeometryError> {
            match params {
                [] => Ok(default),
                [p] if p.fract() == 0.0 && *p >= 1.0 && *p <= 8.0 => Ok(*p as usize),
                _ => Err(GeometryError::BadParameter(format!(
                    "dimension must be an integer in 1..=8, got {params:?}"
                ))),
            }
        };
        match name {
            "euclidean" => Ok(ChartedMetric::Euclidean { n: int_param(2)? }),
            "sphere" => {
                let radius = match params {
                    [] => 1.0,
                    [r] if *r > 0.0 => *r,
                    _ => {
                        return Err(GeometryError::BadParameter(format!(
                            "sphere radius must be a single positive number, got {params:?}"
                        )))
                    }
                };
                Ok(ChartedMetric::Sphere { radius })
            }
            "hyperbolic_half_plane" | "half_plane" => {
                if params.is_empty() {
                    Ok(ChartedMetric::HalfPlane)
                } else {
                    Err(GeometryError::BadParameter(
                        "hyperbolic_half_plane takes no parameters".into(),
                    ))
                }
            }
            "flat_torus" => Ok(ChartedMetric::FlatTorus { n: int_param(2)? }),
            other => Err(GeometryError::UnknownMetric(other.to_string())),
        }
    }

    /// Parse `"name"` or `"name(p1,p2)"`.
    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let text = text.trim();
        if let Some(open) = text.find('(') {
            let close = text
                .rfind(')')
                .ok_or_else(|| GeometryError::BadParameter(format!("unbalanced parens in '{text}'")))?;
            let name = &text[..open];
            let inner = &text[open + 1..close];
            let params: Vec<f64> = if inner.trim().is_empty() {
                vec![]
            } else {
                inner
                    .split(',')
                    .map(|p| {
                        p.trim().parse::<f64>().map_err(|_| {
                            GeometryError::BadParameter(format!("bad number '{p}' in '{text}'"))
                        })
                    })
                    .collect::<Result<_, _>>()?
            };
            Self::builtin(name, &params)
        } else {
            Self::builtin(text, &[])
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ChartedMetric::Euclidean { n } | ChartedMetric::FlatTorus { n } => *n,
            ChartedMetric::Sphere { .. } | ChartedMetric::HalfPlane => 2,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ChartedMetric::Euclidean { n } => format!("euclidean({n})"),
            ChartedMetric::Sphere { radius } => format!("sphere({radius})"),
            ChartedMetric::HalfPlane => "hyperbolic_half_plane".into(),
            ChartedMetric::FlatTorus { n } => format!("flat_torus({n})"),
        }
    }

    /// True when the chart metric is constant (zero connection and curvature).
    pub fn is_flat(&self) -> bool {
        matches!(
            self,
            ChartedMetric::Euclidean { .. } | ChartedMetric::FlatTorus { .. }
        )
    }

    /// Metric components g_{ij}(x); symmetric by construction.
    pub fn eval<S: Scalar>(&self, x: &[S]) -> Array2<S> {
        let n = self.dim();
        debug_assert_eq!(x.len(), n);
        match self {
            ChartedMetric::Euclidean { .. } | ChartedMetric::FlatTorus { .. } => {
                Array2::from_shape_fn((n, n), |(i, j)| {
                    if i == j {
                        S::one()
                    } else {
                        S::zero()
                    }
                })
            }
            ChartedMetric::Sphere { radius } => {
                let r2 = S::from_f64(radius * radius);
                let st = x[0].sin();
                let mut g = Array2::from_elem((2, 2), S::zero());
                g[(0, 0)] = r2;
                g[(1, 1)] = r2 * st * st;
                g
            }
            ChartedMetric::HalfPlane => {
                let conf = (x[1] * x[1]).recip();
                let mut g = Array2::from_elem((2, 2), S::zero());
                g[(0, 0)] = conf;
                g[(1, 1)] = conf;
                g
            }
        }
    }

    /// Chart-domain predicate with a safety margin from singular loci.
    pub fn domain_check(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            ChartedMetric::Euclidean { .. } | ChartedMetric::FlatTorus { .. } => true,
            ChartedMetric::Sphere { .. } => {
                x[0] > DOMAIN_MARGIN && x[0] < std::f64::consts::PI - DOMAIN_MARGIN
            }
            ChartedMetric::HalfPlane => x[1] > DOMAIN_MARGIN,
        }
    }

    /// Comfortable chart-interior box for samplers, one (lo, hi) per
    /// coordinate.
    pub fn sample_box(&self) -> Vec<(f64, f64)> {
        match self {
            ChartedMetric::Euclidean { n } => vec![(-2.0, 2.0); *n],
            ChartedMetric::Sphere { .. } => {
                vec![(0.3, std::f64::consts::PI - 0.3), (-3.0, 3.0)]
            }
            ChartedMetric::HalfPlane => vec![(-2.0, 2.0), (0.5, 3.0)],
            ChartedMetric::FlatTorus { n } => vec![(0.0, 2.0 * std::f64::consts::PI); *n],
        }
    }

    pub fn metric_inverse<S: Scalar>(&self, x: &[S]) -> Array2<S> {
        linalg::inverse(&self.eval(x)).expect("builtin metrics are positive definite in-domain")
    }
}

/// ∂_m g_{ij} for all m, via one dual evaluation per coordinate.
/// Returned as `dg[m][i][j]`.
pub fn metric_partials<S: Scalar>(m: &ChartedMetric, x: &[S]) -> Array3<S> {
    let n = m.dim();
    let mut dg = Array3::from_elem((n, n, n), S::zero());
    for k in 0..n {
        let g = m.eval::<Dual<S>>(&seed_partial(x, k));
        for i in 0..n {
            for j in 0..n {
                dg[(k, i, j)] = g[(i, j)].eps;
            }
        }
    }
    dg
}

/// Levi-Civita Christoffel symbols Γ^h_{ji} = ½ g^{hm}(∂_j g_{mi} + ∂_i g_{mj} − ∂_m g_{ji}).
pub fn christoffel<S: Scalar>(m: &ChartedMetric, x: &[S]) -> Array3<S> {
    let n = m.dim();
    let g_inv = m.metric_inverse(x);
    let dg = metric_partials(m, x);
    let half = S::from_f64(0.5);
    let mut gamma = Array3::from_elem((n, n, n), S::zero());
    for h in 0..n {
        for j in 0..n {
            for i in 0..n {
                let mut sum = S::zero();
                for mm in 0..n {
                    let term = g_inv[(h, mm)]
                        * (dg[(j, mm, i)] + dg[(i, mm, j)] - dg[(mm, j, i)]);
                    sum += term;
                }
                gamma[(h, j, i)] = half * sum;
            }
        }
    }
    gamma
}

/// Riemann tensor R^h_{jik}; see the module docs for the sign convention.
pub fn riemann<S: Scalar>(m: &ChartedMetric, x: &[S]) -> Array4<S> {
    let n = m.dim();
    // dgamma[a][h][j][i] = ∂_a Γ^h_{ji}
    let mut dgamma = Array4::from_elem((n, n, n, n), S::zero());
    for a in 0..n {
        let gamma_dual = christoffel::<Dual<S>>(m, &seed_partial(x, a));
        for h in 0..n {
            for j in 0..n {
                for i in 0..n {
                    dgamma[(a, h, j, i)] = gamma_dual[(h, j, i)].eps;
                }
            }
        }
    }
    let gamma = christoffel(m, x);
    let mut r = Array4::from_elem((n, n, n, n), S::zero());
    for h in 0..n {
        for j in 0..n {
            for i in 0..n {
                for k in 0..n {
                    let mut v = dgamma[(j, h, i, k)] - dgamma[(i, h, j, k)];
                    for mm in 0..n {
                        let quad = gamma[(h, j, mm)] * gamma[(mm, i, k)]
                            - gamma[(h, i, mm)] * gamma[(mm, j, k)];
                        v += quad;
                    }
                    r[(h, j, i, k)] = v;
                }
            }
        }
    }
    r
}

/// Fully lowered tensor, `lowered[i][j][k][l]` = g(R(∂_i,∂_j)∂_l, ∂_k) = g_{ks} R^s_{ijl}.
pub fn lower_riemann<S: Scalar>(g: &Array2<S>, r: &Array4<S>) -> Array4<S> {
    let n = g.nrows();
    let mut low = Array4::from_elem((n, n, n, n), S::zero());
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = S::zero();
                    for s in 0..n {
                        let term = g[(k, s)] * r[(s, i, j, l)];
                        v += term;
                    }
                    low[(i, j, k, l)] = v;
                }
            }
        }
    }
    low
}

/// Canonical mixed tensor `mixed[h][a][b][c]` = R^{h·}_{·abc} = g^{ht} g_{cs} R^s_{tab}.
pub fn mixed_riemann<S: Scalar>(
    g: &Array2<S>,
    g_inv: &Array2<S>,
    r: &Array4<S>,
) -> Array4<S> {
    let n = g.nrows();
    let mut out = Array4::from_elem((n, n, n, n), S::zero());
    for h in 0..n {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut v = S::zero();
                    for t in 0..n {
                        for s in 0..n {
                            let term = g_inv[(h, t)] * g[(c, s)] * r[(s, t, a, b)];
                            v += term;
                        }
                    }
                    out[(h, a, b, c)] = v;
                }
            }
        }
    }
    out
}

/// Alternative contraction-order reading of the mixed tensor:
/// `alt[h][a][b][c]` = g^{ht} g_{cs} R^s_{atb}. By first-pair antisymmetry
/// this equals minus the canonical reading; computed directly so the identity
/// can be checked rather than assumed.
pub fn mixed_riemann_alt<S: Scalar>(
    g: &Array2<S>,
    g_inv: &Array2<S>,
    r: &Array4<S>,
) -> Array4<S> {
    let n = g.nrows();
    let mut out = Array4::from_elem((n, n, n, n), S::zero());
    for h in 0..n {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut v = S::zero();
                    for t in 0..n {
                        for s in 0..n {
                            let term = g_inv[(h, t)] * g[(c, s)] * r[(s, a, t, b)];
                            v += term;
                        }
                    }
                    out[(h, a, b, c)] = v;
                }
            }
        }
    }
    out
}

/// Covariant derivative of the Riemann tensor,
/// `out[a][h][j][i][k]` = ∇_a R^h_{jik}.
pub fn nabla_riemann<S: Scalar>(m: &ChartedMetric, x: &[S]) -> Array5<S> {
    let n = m.dim();
    let gamma = christoffel(m, x);
    let mut dr = Array5::from_elem((n, n, n, n, n), S::zero());
    for a in 0..n {
        let r_dual = riemann::<Dual<S>>(m, &seed_partial(x, a));
        for h in 0..n {
            for j in 0..n {
                for i in 0..n {
                    for k in 0..n {
                        dr[(a, h, j, i, k)] = r_dual[(h, j, i, k)].eps;
                    }
                }
            }
        }
    }
    let r = riemann(m, x);
    let mut out = Array5::from_elem((n, n, n, n, n), S::zero());
    for a in 0..n {
        for h in 0..n {
            for j in 0..n {
                for i in 0..n {
                    for k in 0..n {
                        let mut v = dr[(a, h, j, i, k)];
                        for mm in 0..n {
                            let term = gamma[(h, a, mm)] * r[(mm, j, i, k)]
                                - gamma[(mm, a, j)] * r[(h, mm, i, k)]
                                - gamma[(mm, a, i)] * r[(h, j, mm, k)]
                                - gamma[(mm, a, k)] * r[(h, j, i, mm)];
                            v += term;
                        }
                        out[(a, h, j, i, k)] = v;
                    }
                }
            }
        }
    }
    out
}

/// Sectional curvature of the base metric for the plane spanned by u, v.
pub fn base_sectional<S: Scalar>(m: &ChartedMetric, x: &[S], u: &[S], v: &[S]) -> S {
    let g = m.eval(x);
    let r = riemann(m, x);
    let low = lower_riemann(&g, &r);
    let n = m.dim();
    let mut num = S::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let term = low[(i, j, k, l)] * u[i] * v[j] * u[k] * v[l];
                    num += term;
                }
            }
        }
    }
    let ip = |a: &[S], b: &[S]| {
        let mut s = S::zero();
        for i in 0..n {
            for j in 0..n {
                let term = g[(i, j)] * a[i] * b[j];
                s += term;
            }
        }
        s
    };
    let uu = ip(u, u);
    let vv = ip(v, v);
    let uv = ip(u, v);
    num / (uu * vv - uv * uv)
}

// ---------------------------------------------------------------------------
// Base vector fields
// ---------------------------------------------------------------------------

/// Named smooth test fields on the base charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseField {
    /// X = 0.
    Zero,
    /// Constant components (1, 1/2, 1/4, …): a translation generator on flat
    /// charts.
    Constant,
    /// X = (x¹, 0, …): linear, non-parallel.
    Linear,
    /// X = (x², 0, …): the associated covector x² dx¹ is not closed.
    Shear,
    /// X = ((x¹)², 0, …): nonzero second covariant derivative on flat charts.
    Quadratic,
    /// Rotation generator: (−x², x¹, 0, …) on flat charts, ∂_φ on the sphere.
    Rotational,
    /// Second sphere isometry generator (−sin φ, −cot θ cos φ).
    SphereKilling,
    /// Gradient of the height function cos θ on the unit sphere: (−sin θ, 0).
    GradientHeight,
}

pub const ALL_FIELDS: [BaseField; 8] = [
    BaseField::Zero,
    BaseField::Constant,
    BaseField::Linear,
    BaseField::Shear,
    BaseField::Quadratic,
    BaseField::Rotational,
    BaseField::SphereKilling,
    BaseField::GradientHeight,
];

impl BaseField {
    pub fn name(self) -> &'static str {
        match self {
            BaseField::Zero => "zero",
            BaseField::Constant => "constant",
            BaseField::Linear => "linear",
            BaseField::Shear => "shear",
            BaseField::Quadratic => "quadratic",
            BaseField::Rotational => "rotational",
            BaseField::SphereKilling => "sphere_killing",
            BaseField::GradientHeight => "gradient_height",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        ALL_FIELDS.iter().copied().find(|f| f.name() == name)
    }

    /// Chart-domain guard: whether this field makes sense on the metric.
    pub fn available_on(self, m: &ChartedMetric) -> bool {
        let n = m.dim();
        match self {
            BaseField::Zero | BaseField::Constant => true,
            BaseField::Linear | BaseField::Quadratic => !matches!(m, ChartedMetric::Sphere { .. }),
            BaseField::Shear => n >= 2 && !matches!(m, ChartedMetric::Sphere { .. }),
            BaseField::Rotational => n >= 2,
            BaseField::SphereKilling | BaseField::GradientHeight => {
                matches!(m, ChartedMetric::Sphere { .. })
            }
        }
    }

    /// Default audit field set for a metric.
    pub fn defaults_for(m: &ChartedMetric) -> Vec<BaseField> {
        ALL_FIELDS
            .iter()
            .copied()
            .filter(|f| *f != BaseField::Zero && f.available_on(m))
            .collect()
    }

    /// Component functions X^h(x) on the chart.
    pub fn eval<S: Scalar>(self, m: &ChartedMetric, x: &[S]) -> Vec<S> {
        let n = m.dim();
        let mut out = vec![S::zero(); n];
        match self {
            BaseField::Zero => {}
            BaseField::Constant => {
                let mut c = 1.0;
                for v in out.iter_mut() {
                    *v = S::from_f64(c);
                    c *= 0.5;
                }
            }
            BaseField::Linear => out[0] = x[0],
            BaseField::Shear => out[0] = x[1],
            BaseField::Quadratic => out[0] = x[0] * x[0],
            BaseField::Rotational => match m {
                ChartedMetric::Sphere { .. } => out[1] = S::one(),
                _ => {
                    out[0] = -x[1];
                    out[1] = x[0];
                }
            },
            BaseField::SphereKilling => {
                out[0] = -x[1].sin();
                out[1] = -(x[0].cos() / x[0].sin()) * x[1].cos();
            }
            BaseField::GradientHeight => out[0] = -x[0].sin(),
        }
        out
    }
}

/// ∂_i X^h for all i, via duals: `out[i][h]`.
pub fn field_partials<S: Scalar>(m: &ChartedMetric, f: BaseField, x: &[S]) -> Array2<S> {
    let n = m.dim();
    let mut out = Array2::from_elem((n, n), S::zero());
    for i in 0..n {
        let xv = f.eval::<Dual<S>>(m, &seed_partial(x, i));
        for h in 0..n {
            out[(i, h)] = xv[h].eps;
        }
    }
    out
}

/// ∇_i X^h = ∂_i X^h + Γ^h_{im} X^m, as `out[i][h]`.
pub fn covariant_derivative_vector<S: Scalar>(
    m: &ChartedMetric,
    f: BaseField,
    x: &[S],
) -> Array2<S> {
    let n = m.dim();
    let gamma = christoffel(m, x);
    let xv = f.eval(m, x);
    let mut out = field_partials(m, f, x);
    for i in 0..n {
        for h in 0..n {
            for mm in 0..n {
                let term = gamma[(h, i, mm)] * xv[mm];
                out[(i, h)] += term;
            }
        }
    }
    out
}

/// Associated covector components X_j = g_{js} X^s.
pub fn field_lowered<S: Scalar>(m: &ChartedMetric, f: BaseField, x: &[S]) -> Vec<S> {
    let g = m.eval(x);
    let xv = f.eval(m, x);
    linalg::matvec(&g, &xv)
}

/// ∇_i X_j = ∂_i X_j − Γ^m_{ij} X_m, as `out[i][j]`.
pub fn covariant_derivative_covector<S: Scalar>(
    m: &ChartedMetric,
    f: BaseField,
    x: &[S],
) -> Array2<S> {
    let n = m.dim();
    let gamma = christoffel(m, x);
    let xl = field_lowered(m, f, x);
    let mut out = Array2::from_elem((n, n), S::zero());
    for i in 0..n {
        let low_dual = field_lowered::<Dual<S>>(m, f, &seed_partial(x, i));
        for j in 0..n {
            let mut v = low_dual[j].eps;
            for mm in 0..n {
                let term = gamma[(mm, i, j)] * xl[mm];
                v -= term;
            }
            out[(i, j)] = v;
        }
    }
    out
}

/// Second covariant derivative of the associated covector,
/// `out[i][j][k]` = ∇_i ∇_j X_k (iterated derivative of the (0,2) tensor ∇X).
pub fn second_covariant_derivative_covector<S: Scalar>(
    m: &ChartedMetric,
    f: BaseField,
    x: &[S],
) -> Array3<S> {
    let n = m.dim();
    let gamma = christoffel(m, x);
    let t = covariant_derivative_covector(m, f, x);
    let mut out = Array3::from_elem((n, n, n), S::zero());
    for i in 0..n {
        let t_dual = covariant_derivative_covector::<Dual<S>>(m, f, &seed_partial(x, i));
        for j in 0..n {
            for k in 0..n {
                let mut v = t_dual[(j, k)].eps;
                for mm in 0..n {
                    let term =
                        gamma[(mm, i, j)] * t[(mm, k)] + gamma[(mm, i, k)] * t[(j, mm)];
                    v -= term;
                }
                out[(i, j, k)] = v;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn builtins() -> Vec<ChartedMetric> {
        vec![
            ChartedMetric::Euclidean { n: 2 },
            ChartedMetric::Sphere { radius: 1.0 },
            ChartedMetric::HalfPlane,
            ChartedMetric::FlatTorus { n: 2 },
        ]
    }

    fn sample_points(m: &ChartedMetric, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let boxes = m.sample_box();
        (0..count)
            .map(|_| {
                boxes
                    .iter()
                    .map(|&(lo, hi)| rng.gen_range(lo..hi))
                    .collect::<Vec<f64>>()
            })
            .inspect(|x| assert!(m.domain_check(x)))
            .collect()
    }

    #[test]
    fn builtin_parsing() {
        assert_eq!(
            ChartedMetric::parse("euclidean(2)").unwrap(),
            ChartedMetric::Euclidean { n: 2 }
        );
        assert_eq!(
            ChartedMetric::parse("sphere(1)").unwrap(),
            ChartedMetric::Sphere { radius: 1.0 }
        );
        assert_eq!(
            ChartedMetric::parse("hyperbolic_half_plane").unwrap(),
            ChartedMetric::HalfPlane
        );
        assert_eq!(
            ChartedMetric::parse("flat_torus(3)").unwrap(),
            ChartedMetric::FlatTorus { n: 3 }
        );
        assert!(ChartedMetric::parse("nosuch").is_err());
        assert!(ChartedMetric::parse("sphere(-1)").is_err());
    }

    #[test]
    fn metric_values_match_chart_formulas() {
        let e = ChartedMetric::Euclidean { n: 2 };
        let g = e.eval(&[0.3, -1.2]);
        assert_eq!(g[(0, 0)], 1.0);
        assert_eq!(g[(0, 1)], 0.0);

        let s = ChartedMetric::Sphere { radius: 1.0 };
        let g = s.eval(&[PI / 4.0, 0.0]);
        assert_relative_eq!(g[(0, 0)], 1.0, epsilon = 1e-15);
        assert_relative_eq!(g[(1, 1)], 0.5, epsilon = 1e-15);

        let h = ChartedMetric::HalfPlane;
        let g = h.eval(&[0.0, 2.0]);
        assert_relative_eq!(g[(0, 0)], 0.25, epsilon = 1e-15);
        assert_relative_eq!(g[(1, 1)], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn metric_is_symmetric_and_positive_definite_everywhere_sampled() {
        for m in builtins() {
            for x in sample_points(&m, 100, 11) {
                let g = m.eval(&x);
                for i in 0..m.dim() {
                    for j in 0..m.dim() {
                        assert_eq!(g[(i, j)], g[(j, i)], "{} not symmetric", m.name());
                    }
                }
                linalg::cholesky(&g)
                    .unwrap_or_else(|e| panic!("{} not SPD at {:?}: {e}", m.name(), x));
            }
        }
    }

    #[test]
    fn metric_partials_match_finite_differences() {
        // One-time cross-check of the dual-number machinery against a blunt
        // central difference before it is trusted as the derivative engine.
        for m in builtins() {
            for x in sample_points(&m, 10, 17) {
                let dg = metric_partials(&m, &x);
                let h = 1e-6;
                for k in 0..m.dim() {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[k] += h;
                    xm[k] -= h;
                    let gp = m.eval(&xp);
                    let gm = m.eval(&xm);
                    for i in 0..m.dim() {
                        for j in 0..m.dim() {
                            let fd = (gp[(i, j)] - gm[(i, j)]) / (2.0 * h);
                            assert_relative_eq!(dg[(k, i, j)], fd, epsilon = 1e-7);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn christoffel_sphere_frozen_values() {
        let m = ChartedMetric::Sphere { radius: 1.0 };
        let x = [PI / 4.0, 0.0];
        let gamma = christoffel(&m, &x);
        // Γ^θ_{φφ} = −sinθ cosθ, Γ^φ_{θφ} = cotθ
        assert_relative_eq!(gamma[(0, 1, 1)], -0.5, epsilon = 1e-12);
        assert_relative_eq!(gamma[(1, 0, 1)], 1.0, epsilon = 1e-12);
        assert_relative_eq!(gamma[(1, 1, 0)], 1.0, epsilon = 1e-12);
        assert_relative_eq!(gamma[(0, 0, 0)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn christoffel_vanishes_for_constant_metrics() {
        for m in [ChartedMetric::Euclidean { n: 2 }, ChartedMetric::FlatTorus { n: 2 }] {
            for x in sample_points(&m, 20, 3) {
                let gamma = christoffel(&m, &x);
                assert!(gamma.iter().all(|v| v.abs() < 1e-15));
            }
        }
    }

    #[test]
    fn christoffel_symmetric_in_lower_indices() {
        for m in builtins() {
            for x in sample_points(&m, 50, 5) {
                let gamma = christoffel(&m, &x);
                let n = m.dim();
                for h in 0..n {
                    for j in 0..n {
                        for i in 0..n {
                            // exact: both entries are computed from the same
                            // symmetric combination
                            assert_relative_eq!(
                                gamma[(h, j, i)],
                                gamma[(h, i, j)],
                                epsilon = 1e-15
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn metric_compatibility() {
        for m in builtins() {
            for x in sample_points(&m, 100, 7) {
                let gamma = christoffel(&m, &x);
                let dg = metric_partials(&m, &x);
                let g = m.eval(&x);
                let n = m.dim();
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let mut v = dg[(i, j, k)];
                            for mm in 0..n {
                                v -= gamma[(mm, i, j)] * g[(mm, k)]
                                    + gamma[(mm, i, k)] * g[(j, mm)];
                            }
                            assert!(
                                v.abs() <= 1e-10,
                                "∇g residual {v:.2e} on {} at {:?}",
                                m.name(),
                                x
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn riemann_flat_metrics_vanish() {
        for m in [ChartedMetric::Euclidean { n: 3 }, ChartedMetric::FlatTorus { n: 2 }] {
            for x in sample_points(&m, 10, 23) {
                let r = riemann(&m, &x);
                assert!(r.iter().all(|v| v.abs() < 1e-14));
            }
        }
    }

    #[test]
    fn riemann_sphere_frozen_lowered_value() {
        let m = ChartedMetric::Sphere { radius: 1.0 };
        let x = [PI / 4.0, 0.0];
        let g = m.eval(&x);
        let r = riemann(&m, &x);
        let low = lower_riemann(&g, &r);
        // Constant curvature K = 1: R_{ijkl} = g_ik g_jl − g_il g_jk.
        assert_relative_eq!(low[(0, 1, 0, 1)], 0.5, epsilon = 1e-10);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let expect = g[(i, k)] * g[(j, l)] - g[(i, l)] * g[(j, k)];
                        assert_relative_eq!(low[(i, j, k, l)], expect, epsilon = 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn riemann_antisymmetry_and_bianchi() {
        for m in builtins() {
            for x in sample_points(&m, 30, 31) {
                let r = riemann(&m, &x);
                let n = m.dim();
                for h in 0..n {
                    for j in 0..n {
                        for i in 0..n {
                            for k in 0..n {
                                assert!(
                                    (r[(h, j, i, k)] + r[(h, i, j, k)]).abs() <= 1e-12,
                                    "antisymmetry fails on {}",
                                    m.name()
                                );
                                let bianchi =
                                    r[(h, j, i, k)] + r[(h, i, k, j)] + r[(h, k, j, i)];
                                assert!(
                                    bianchi.abs() <= 1e-9,
                                    "first Bianchi fails on {}: {bianchi:.2e}",
                                    m.name()
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lowered_riemann_pair_symmetry() {
        for m in builtins() {
            for x in sample_points(&m, 30, 37) {
                let g = m.eval(&x);
                let r = riemann(&m, &x);
                let low = lower_riemann(&g, &r);
                let n = m.dim();
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            for l in 0..n {
                                assert!(
                                    (low[(i, j, k, l)] - low[(k, l, i, j)]).abs() <= 1e-10
                                );
                                assert!(
                                    (low[(i, j, k, l)] + low[(i, j, l, k)]).abs() <= 1e-10
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn half_plane_sectional_curvature_is_minus_one() {
        let m = ChartedMetric::HalfPlane;
        for x in [[0.0, 1.0], [1.0, 2.5], [-1.5, 0.7]] {
            let k = base_sectional(&m, &x, &[1.0, 0.0], &[0.0, 1.0]);
            assert_relative_eq!(k, -1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn sphere_sectional_curvature_matches_radius() {
        let m = ChartedMetric::Sphere { radius: 2.0 };
        let k = base_sectional(&m, &[1.1, 0.4], &[1.0, 0.2], &[-0.3, 1.0]);
        assert_relative_eq!(k, 0.25, epsilon = 1e-8);
    }

    #[test]
    fn mixed_riemann_round_trip_and_oracle_contraction() {
        for m in builtins() {
            for x in sample_points(&m, 20, 41) {
                let g = m.eval(&x);
                let g_inv = m.metric_inverse(&x);
                let r = riemann(&m, &x);
                let mixed = mixed_riemann(&g, &g_inv, &r);
                let n = m.dim();
                // Lower h and raise c again: must reproduce mixed exactly.
                for h in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            for c in 0..n {
                                // brute-force independent contraction loop
                                let mut oracle = 0.0;
                                for t in 0..n {
                                    for s in 0..n {
                                        oracle += g_inv[(h, t)] * g[(c, s)] * r[(s, t, a, b)];
                                    }
                                }
                                assert_relative_eq!(
                                    mixed[(h, a, b, c)],
                                    oracle,
                                    epsilon = 1e-12
                                );
                                // round trip: g_{ht} g^{cs} mixed^{t.}_{.abs}
                                // = R^c_{hab}, the original tensor with the
                                // raised/lowered slots swapped back
                                let mut back = 0.0;
                                for t in 0..n {
                                    for s in 0..n {
                                        back += g[(h, t)] * g_inv[(c, s)] * mixed[(t, a, b, s)];
                                    }
                                }
                                assert_relative_eq!(back, r[(c, h, a, b)], epsilon = 1e-12);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn alternative_mixed_reading_is_the_negative() {
        let m = ChartedMetric::Sphere { radius: 1.0 };
        for x in sample_points(&m, 20, 43) {
            let g = m.eval(&x);
            let g_inv = m.metric_inverse(&x);
            let r = riemann(&m, &x);
            let canon = mixed_riemann(&g, &g_inv, &r);
            let alt = mixed_riemann_alt(&g, &g_inv, &r);
            for (a, b) in canon.iter().zip(alt.iter()) {
                assert_relative_eq!(*a, -*b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn covariant_derivative_examples() {
        // Constant field on flat chart: ∇X = 0.
        let e = ChartedMetric::Euclidean { n: 2 };
        let d = covariant_derivative_vector(&e, BaseField::Constant, &[0.4_f64, 0.9]);
        assert!(d.iter().all(|v| v.abs() < 1e-14));

        // Quadratic field: ∇_1 X^1 = 2 x¹ at x = (1, 0).
        let d = covariant_derivative_vector(&e, BaseField::Quadratic, &[1.0, 0.0]);
        assert_relative_eq!(d[(0, 0)], 2.0, epsilon = 1e-12);

        // Covector form at the same point: ∇_1 ∇_1 X_1 = 2.
        let dd = second_covariant_derivative_covector(&e, BaseField::Quadratic, &[1.0, 0.0]);
        assert_relative_eq!(dd[(0, 0, 0)], 2.0, epsilon = 1e-10);
    }

    #[test]
    fn sphere_isometry_generators_are_killing() {
        let m = ChartedMetric::Sphere { radius: 1.0 };
        for f in [BaseField::Rotational, BaseField::SphereKilling] {
            for x in sample_points(&m, 40, 53) {
                let low = covariant_derivative_covector(&m, f, &x);
                for i in 0..2 {
                    for j in 0..2 {
                        assert!(
                            (low[(i, j)] + low[(j, i)]).abs() <= 1e-10,
                            "{} not Killing at {:?}",
                            f.name(),
                            x
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn gradient_height_is_not_killing() {
        let m = ChartedMetric::Sphere { radius: 1.0 };
        let low = covariant_derivative_covector(&m, BaseField::GradientHeight, &[PI / 4.0, 0.3]);
        let sym = (low[(0, 0)] + low[(0, 0)]).abs();
        assert!(sym > 0.1);
    }

    #[test]
    fn ricci_identity_pins_curvature_sign() {
        // (∇_i∇_j − ∇_j∇_i) X_k = −R^m_{ijk} X_m for the stored convention.
        for m in builtins() {
            for f in BaseField::defaults_for(&m) {
                for x in sample_points(&m, 15, 59) {
                    let dd = second_covariant_derivative_covector(&m, f, &x);
                    let r = riemann(&m, &x);
                    let xl = field_lowered(&m, f, &x);
                    let n = m.dim();
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                let mut resid = dd[(i, j, k)] - dd[(j, i, k)];
                                for mm in 0..n {
                                    resid += r[(mm, i, j, k)] * xl[mm];
                                }
                                assert!(
                                    resid.abs() <= 1e-8,
                                    "Ricci identity residual {resid:.2e} on {} field {}",
                                    m.name(),
                                    f.name()
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn field_availability_guards() {
        let sphere = ChartedMetric::Sphere { radius: 1.0 };
        assert!(!BaseField::Linear.available_on(&sphere));
        assert!(BaseField::SphereKilling.available_on(&sphere));
        assert!(!BaseField::SphereKilling.available_on(&ChartedMetric::Euclidean { n: 2 }));
        let e1 = ChartedMetric::Euclidean { n: 1 };
        assert!(!BaseField::Rotational.available_on(&e1));
        assert_eq!(
            BaseField::defaults_for(&e1),
            vec![BaseField::Constant, BaseField::Linear, BaseField::Quadratic]
        );
    }
}
