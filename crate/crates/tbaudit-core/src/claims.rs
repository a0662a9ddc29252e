//! Claim infrastructure: audited formulas as data.
//!
//! A claim pairs an `evaluate` closure (the printed formula under a
//! documented reading) with an independent `oracle` closure (ground truth
//! from the Koszul connection or the bundle metric). The runner evaluates
//! both over seeded sample points and named base fields, takes the max
//! absolute residual, and assigns a verdict by tolerance bands. Claims are
//! never asserted to pass; the expected-verdict ledger lives with the CLI.

use ndarray::{Array2, Array3, Array4, Array5};

use crate::bundle::{
    adapted_frame_at, cg_metric_at, cg_metric_inverse_at, structure_coefficients_at,
    AdaptedFrame, BundleMetricBlocks, BundlePoint,
};
use crate::bundle::LiftKind;
use crate::connection::{
    bundle_covariant_derivative_covector_with, bundle_covariant_derivative_with,
    closed_form_connection_at, corrected_connection_at, koszul_connection_at, BundleConnectionTable,
    ConnectionSource,
};
use crate::curvature::{bundle_curvature_eq17, BundleCurvatureTable};
use crate::geometry::{
    christoffel, covariant_derivative_covector, covariant_derivative_vector, field_lowered,
    lower_riemann, mixed_riemann, mixed_riemann_alt, nabla_riemann, riemann,
    second_covariant_derivative_covector, BaseField, ChartedMetric,
};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Residual bands: ≤ pass → PASS, > fail → FAIL, otherwise INCONCLUSIVE.
#[derive(Debug, Clone, Copy)]
pub struct ToleranceBands {
    pub pass: f64,
    pub fail: f64,
}

impl Default for ToleranceBands {
    fn default() -> Self {
        ToleranceBands {
            pass: 1e-6,
            fail: 1e-3,
        }
    }
}

impl ToleranceBands {
    pub fn verdict(&self, residual: f64, samples: usize) -> Verdict {
        if samples == 0 || !residual.is_finite() {
            return Verdict::Inconclusive;
        }
        if residual <= self.pass {
            Verdict::Pass
        } else if residual > self.fail {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Everything derivable from (metric, x, y) alone, built once per sample
/// point and shared across claims and fields.
pub struct PointCtx<'m> {
    pub m: &'m ChartedMetric,
    pub n: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub g: Array2<f64>,
    pub g_inv: Array2<f64>,
    pub y_lower: Vec<f64>,
    pub r2: f64,
    pub alpha: f64,
    pub gamma: Array3<f64>,
    /// R^h_{jik}
    pub riemann: Array4<f64>,
    /// canonical R^{h·}_{·abc} = g^{ht} g_{cs} R^s_{tab}
    pub mixed: Array4<f64>,
    /// alternative contraction reading (equals −mixed)
    pub mixed_alt: Array4<f64>,
    /// g(R(∂_i,∂_j)∂_l, ∂_k) as [i][j][k][l]
    pub lowered: Array4<f64>,
    pub frame: AdaptedFrame<f64>,
    pub omega: Array3<f64>,
    pub blocks: BundleMetricBlocks<f64>,
    pub blocks_inv: BundleMetricBlocks<f64>,
    pub g_frame: Array2<f64>,
    pub g_frame_inv: Array2<f64>,
    pub koszul: BundleConnectionTable<f64>,
    pub closed_form: BundleConnectionTable<f64>,
    pub corrected: BundleConnectionTable<f64>,
}

impl<'m> PointCtx<'m> {
    pub fn new(m: &'m ChartedMetric, x: &[f64], y: &[f64]) -> Self {
        let n = m.dim();
        debug_assert!(m.domain_check(x));
        let g = m.eval(x);
        let g_inv = m.metric_inverse(x);
        let p = BundlePoint {
            x: x.to_vec(),
            y: y.to_vec(),
        };
        let y_lower = p.y_lower(m);
        let r2 = p.r2(m);
        let alpha = 1.0 + r2;
        let gamma = christoffel(m, x);
        let r = riemann(m, x);
        let mixed = mixed_riemann(&g, &g_inv, &r);
        let mixed_alt = mixed_riemann_alt(&g, &g_inv, &r);
        let lowered = lower_riemann(&g, &r);
        let frame = adapted_frame_at(m, x, y);
        let omega = structure_coefficients_at(m, x, y);
        let blocks = cg_metric_at(m, x, y);
        let blocks_inv = cg_metric_inverse_at(m, x, y);
        let g_frame = blocks.assembled();
        let g_frame_inv = blocks_inv.assembled();
        let koszul = koszul_connection_at(m, x, y);
        let closed_form = closed_form_connection_at(m, x, y);
        let corrected = corrected_connection_at(m, x, y);
        PointCtx {
            m,
            n,
            x: x.to_vec(),
            y: y.to_vec(),
            g,
            g_inv,
            y_lower,
            r2,
            alpha,
            gamma,
            riemann: r,
            mixed,
            mixed_alt,
            lowered,
            frame,
            omega,
            blocks,
            blocks_inv,
            g_frame,
            g_frame_inv,
            koszul,
            closed_form,
            corrected,
        }
    }
}

/// Field-dependent caches built once per (point, field) pair.
pub struct FieldCtx {
    pub field: BaseField,
    /// X^h
    pub value: Vec<f64>,
    /// X_i = g_{is} X^s
    pub lowered: Vec<f64>,
    /// ∇_i X^h as [i][h]
    pub nabla: Array2<f64>,
    /// ∇_i X_j as [i][j]
    pub nabla_lower: Array2<f64>,
    /// ∇_i ∇_j X_k as [i][j][k]
    pub nabla2_lower: Array3<f64>,
    /// V^h = y^s ∇_s X^h
    pub v_upper: Vec<f64>,
    /// V_i = y^s ∇_s X_i
    pub v_lower: Vec<f64>,
    /// ⟨X, y⟩ = X_t y^t
    pub pairing: f64,
    /// ∇_n X_t y^t y^n
    pub c_tilde: f64,
    /// Oracle ∇_β(lift X)^α as [β][α], per lift kind.
    pub d_vertical: Array2<f64>,
    pub d_complete: Array2<f64>,
    pub d_horizontal: Array2<f64>,
    /// Oracle ∇_β(lift X_B)_γ as [β][γ], per lift kind.
    pub dw_vertical: Array2<f64>,
    pub dw_complete: Array2<f64>,
    pub dw_horizontal: Array2<f64>,
}

impl FieldCtx {
    pub fn new(p: &PointCtx<'_>, field: BaseField) -> Self {
        let m = p.m;
        let n = p.n;
        let value = field.eval(m, &p.x);
        let lowered = field_lowered(m, field, &p.x);
        let nabla = covariant_derivative_vector(m, field, &p.x);
        let nabla_lower = covariant_derivative_covector(m, field, &p.x);
        let nabla2_lower = second_covariant_derivative_covector(m, field, &p.x);
        let mut v_upper = vec![0.0; n];
        let mut v_lower = vec![0.0; n];
        for h in 0..n {
            for s in 0..n {
                v_upper[h] += p.y[s] * nabla[(s, h)];
                v_lower[h] += p.y[s] * nabla_lower[(s, h)];
            }
        }
        let pairing = lowered.iter().zip(p.y.iter()).map(|(a, b)| a * b).sum();
        let mut c_tilde = 0.0;
        for nn in 0..n {
            for t in 0..n {
                c_tilde += nabla_lower[(nn, t)] * p.y[t] * p.y[nn];
            }
        }
        let dv = |kind| bundle_covariant_derivative_with(m, &p.x, &p.y, field, kind, &p.koszul);
        let dw =
            |kind| bundle_covariant_derivative_covector_with(m, &p.x, &p.y, field, kind, &p.koszul);
        FieldCtx {
            field,
            value,
            lowered,
            nabla,
            nabla_lower,
            nabla2_lower,
            v_upper,
            v_lower,
            pairing,
            c_tilde,
            d_vertical: dv(LiftKind::Vertical),
            d_complete: dv(LiftKind::Complete),
            d_horizontal: dv(LiftKind::Horizontal),
            dw_vertical: dw(LiftKind::Vertical),
            dw_complete: dw(LiftKind::Complete),
            dw_horizontal: dw(LiftKind::Horizontal),
        }
    }
}

/// Curvature caches, built once per point and only when a curvature claim is
/// present: the three frame-curvature tables and the covariant derivative of
/// the base curvature tensor.
pub struct CurvCtx<'p, 'm> {
    pub p: &'p PointCtx<'m>,
    /// ∇_a R^h_{jik} as [a][h][j][i][k]
    pub nabla_riemann: Array5<f64>,
    /// Commutator-formula curvature of the Koszul connection (ground truth).
    pub oracle: BundleCurvatureTable,
    /// Commutator-formula curvature of the printed coefficient table.
    pub closed_form: BundleCurvatureTable,
    /// Commutator-formula curvature of the corrected coefficient table.
    pub corrected: BundleCurvatureTable,
}

impl<'p, 'm> CurvCtx<'p, 'm> {
    pub fn new(p: &'p PointCtx<'m>) -> Self {
        CurvCtx {
            nabla_riemann: nabla_riemann(p.m, &p.x),
            oracle: bundle_curvature_eq17(p.m, &p.x, &p.y, ConnectionSource::Oracle),
            closed_form: bundle_curvature_eq17(p.m, &p.x, &p.y, ConnectionSource::ClosedForm),
            corrected: bundle_curvature_eq17(p.m, &p.x, &p.y, ConnectionSource::Corrected),
            p,
        }
    }
}

/// The two sides of a claim. Point claims depend only on the bundle point;
/// field claims additionally on a base field; curvature claims on the
/// curvature caches.
pub enum ClaimFns {
    Point {
        evaluate: fn(&PointCtx) -> Vec<f64>,
        oracle: fn(&PointCtx) -> Vec<f64>,
    },
    Field {
        evaluate: fn(&PointCtx, &FieldCtx) -> Vec<f64>,
        oracle: fn(&PointCtx, &FieldCtx) -> Vec<f64>,
    },
    Curv {
        evaluate: fn(&CurvCtx) -> Vec<f64>,
        oracle: fn(&CurvCtx) -> Vec<f64>,
    },
}

pub struct Claim {
    /// Stable identifier, e.g. "eq2.vertical_vertical".
    pub id: &'static str,
    /// Display anchor in the audited text, e.g. "Eq. (2) last line".
    pub location: &'static str,
    /// The formula text as printed.
    pub quote: &'static str,
    /// Note describing the canonical reading or typo repair applied.
    pub reading: &'static str,
    /// For repaired/substituted variants: the id of the claim as printed.
    pub variant_of: Option<&'static str>,
    pub fns: ClaimFns,
}

#[derive(Debug, Clone)]
pub struct ClaimResult {
    pub id: String,
    pub location: String,
    pub quote: String,
    pub verdict: Verdict,
    pub max_abs_residual: f64,
    /// Number of (point, field) evaluations contributing to the residual.
    pub samples: usize,
    /// Evaluations skipped because the field is not defined on the metric.
    pub skipped: usize,
}

/// Evaluate claims over sample points and fields; the only entry point the
/// report pipeline uses.
pub fn audit_claims(
    m: &ChartedMetric,
    claims: &[Claim],
    points: &[(Vec<f64>, Vec<f64>)],
    fields: &[BaseField],
    bands: ToleranceBands,
) -> Vec<ClaimResult> {
    let mut residuals = vec![0.0_f64; claims.len()];
    let mut counts = vec![0usize; claims.len()];
    let mut skips = vec![0usize; claims.len()];
    let field_ok: Vec<bool> = fields.iter().map(|f| f.available_on(m)).collect();
    let needs_curv = claims
        .iter()
        .any(|c| matches!(c.fns, ClaimFns::Curv { .. }));

    for (x, y) in points {
        let p = PointCtx::new(m, x, y);
        let curv_ctx = needs_curv.then(|| CurvCtx::new(&p));
        let field_ctxs: Vec<Option<FieldCtx>> = fields
            .iter()
            .zip(field_ok.iter())
            .map(|(f, ok)| ok.then(|| FieldCtx::new(&p, *f)))
            .collect();
        for (ci, claim) in claims.iter().enumerate() {
            match &claim.fns {
                ClaimFns::Point { evaluate, oracle } => {
                    let lhs = evaluate(&p);
                    let rhs = oracle(&p);
                    assert_eq!(
                        lhs.len(),
                        rhs.len(),
                        "claim {} evaluate/oracle shape mismatch",
                        claim.id
                    );
                    for (a, b) in lhs.iter().zip(rhs.iter()) {
                        residuals[ci] = residuals[ci].max((a - b).abs());
                    }
                    counts[ci] += 1;
                }
                ClaimFns::Field { evaluate, oracle } => {
                    for fc in field_ctxs.iter() {
                        let Some(fc) = fc else {
                            skips[ci] += 1;
                            continue;
                        };
                        let lhs = evaluate(&p, fc);
                        let rhs = oracle(&p, fc);
                        assert_eq!(
                            lhs.len(),
                            rhs.len(),
                            "claim {} evaluate/oracle shape mismatch",
                            claim.id
                        );
                        for (a, b) in lhs.iter().zip(rhs.iter()) {
                            residuals[ci] = residuals[ci].max((a - b).abs());
                        }
                        counts[ci] += 1;
                    }
                }
                ClaimFns::Curv { evaluate, oracle } => {
                    let cc = curv_ctx
                        .as_ref()
                        .expect("curvature context is built whenever a Curv claim is registered");
                    let lhs = evaluate(cc);
                    let rhs = oracle(cc);
                    assert_eq!(
                        lhs.len(),
                        rhs.len(),
                        "claim {} evaluate/oracle shape mismatch",
                        claim.id
                    );
                    for (a, b) in lhs.iter().zip(rhs.iter()) {
                        residuals[ci] = residuals[ci].max((a - b).abs());
                    }
                    counts[ci] += 1;
                }
            }
        }
    }

    claims
        .iter()
        .enumerate()
        .map(|(ci, claim)| ClaimResult {
            id: claim.id.to_string(),
            location: claim.location.to_string(),
            quote: claim.quote.to_string(),
            verdict: bands.verdict(residuals[ci], counts[ci]),
            max_abs_residual: residuals[ci],
            samples: counts[ci],
            skipped: skips[ci],
        })
        .collect()
}

/// Every registered claim: connection coefficients (Eq. 2), lift derivative
/// and rotation displays (Eqs. 4–13), metric lowering (Eq. 7), Lie
/// derivatives (Eqs. 15–16), and curvature families (Eqs. 17–18).
pub fn registry() -> Vec<Claim> {
    let mut all = crate::connection::claims();
    all.extend(crate::lifts::claims());
    all.extend(crate::killing::claims());
    all.extend(crate::curvature::claims());
    all
}

/// Helper shared by claim bodies: flatten an n×n block into a Vec row-major.
pub fn flatten2(a: &Array2<f64>) -> Vec<f64> {
    a.iter().copied().collect()
}

/// Extract a block of the 2n×2n frame-index matrix `d` (for example a
/// bundle covariant derivative) with given horizontal/vertical offsets.
pub fn block(d: &Array2<f64>, n: usize, row_vertical: bool, col_vertical: bool) -> Array2<f64> {
    let ro = if row_vertical { n } else { 0 };
    let co = if col_vertical { n } else { 0 };
    Array2::from_shape_fn((n, n), |(i, j)| d[(ro + i, co + j)])
}

/// Oracle inner product helper: w_α = G_{αβ} z^β on frame components.
pub fn lower_frame_vector(p: &PointCtx<'_>, z: &[f64]) -> Vec<f64> {
    linalg::matvec(&p.g_frame, &z.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_bands() {
        let b = ToleranceBands::default();
        assert_eq!(b.verdict(1e-9, 10), Verdict::Pass);
        assert_eq!(b.verdict(1e-6, 10), Verdict::Pass);
        assert_eq!(b.verdict(5e-4, 10), Verdict::Inconclusive);
        assert_eq!(b.verdict(2e-3, 10), Verdict::Fail);
        assert_eq!(b.verdict(0.0, 0), Verdict::Inconclusive);
        assert_eq!(b.verdict(f64::NAN, 10), Verdict::Inconclusive);
    }

    #[test]
    fn point_ctx_caches_are_consistent() {
        let m = ChartedMetric::Sphere { radius: 1.0 };
        let p = PointCtx::new(&m, &[std::f64::consts::FRAC_PI_4, 0.2], &[0.4, -0.7]);
        assert_eq!(p.alpha, 1.0 + p.r2);
        // cached product identities
        let prod = linalg::matmul(&p.g_frame, &p.g_frame_inv);
        for i in 0..2 * p.n {
            for j in 0..2 * p.n {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - expect).abs() <= 1e-12);
            }
        }
        for (a, b) in p.mixed.iter().zip(p.mixed_alt.iter()) {
            assert!((a + b).abs() <= 1e-12);
        }
    }

    #[test]
    fn field_ctx_scalar_caches() {
        let m = ChartedMetric::Euclidean { n: 2 };
        let p = PointCtx::new(&m, &[2.0, 0.0], &[1.0, 0.0]);
        let fc = FieldCtx::new(&p, BaseField::Linear);
        assert_eq!(fc.value, vec![2.0, 0.0]);
        assert_eq!(fc.v_upper, vec![1.0, 0.0]);
        assert_eq!(fc.pairing, 2.0);
        assert_eq!(fc.c_tilde, 1.0);
    }

    #[test]
    fn full_registry_is_well_formed() {
        let all = registry();
        assert_eq!(all.len(), 85);
        let ids: Vec<&str> = all.iter().map(|c| c.id).collect();
        let mut dedup = ids.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), ids.len(), "duplicate claim ids across modules");
        for c in &all {
            assert!(!c.id.is_empty() && !c.location.is_empty() && !c.quote.is_empty());
            if let Some(parent) = c.variant_of {
                assert!(ids.contains(&parent), "{} orphaned variant", c.id);
                assert_ne!(parent, c.id);
            }
        }
    }

    #[test]
    fn runner_counts_skips_for_unavailable_fields() {
        let m = ChartedMetric::Euclidean { n: 2 };
        let claim = Claim {
            id: "test.identity",
            location: "nowhere",
            quote: "X = X",
            reading: "",
            variant_of: None,
            fns: ClaimFns::Field {
                evaluate: |_p, fc| fc.value.clone(),
                oracle: |_p, fc| fc.value.clone(),
            },
        };
        let points = vec![(vec![0.0, 0.0], vec![1.0, 0.0]); 3];
        let results = audit_claims(
            &m,
            &[claim],
            &points,
            &[BaseField::Constant, BaseField::SphereKilling],
            ToleranceBands::default(),
        );
        assert_eq!(results[0].samples, 3);
        assert_eq!(results[0].skipped, 3);
        assert_eq!(results[0].verdict, Verdict::Pass);
        assert_eq!(results[0].max_abs_residual, 0.0);
    }

    #[test]
    fn runner_flags_disagreement() {
        let m = ChartedMetric::Euclidean { n: 2 };
        let claim = Claim {
            id: "test.off_by_half",
            location: "nowhere",
            quote: "X = X + 1/2",
            reading: "",
            variant_of: None,
            fns: ClaimFns::Point {
                evaluate: |p| vec![p.alpha + 0.5],
                oracle: |p| vec![p.alpha],
            },
        };
        let points = vec![(vec![0.1, 0.2], vec![0.3, 0.4])];
        let results = audit_claims(&m, &[claim], &points, &[], ToleranceBands::default());
        assert_eq!(results[0].verdict, Verdict::Fail);
        assert!((results[0].max_abs_residual - 0.5).abs() < 1e-15);
    }
}
