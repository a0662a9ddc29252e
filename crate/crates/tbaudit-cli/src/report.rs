//! Audit report assembly and rendering.
//!
//! The JSON schema is part of the external interface: key names and the
//! claim/proposition record layouts are stable, and a given configuration
//! plus seed must produce byte-identical output across runs.

use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use tbaudit_core::claims::{ClaimResult, Verdict};
use tbaudit_core::curvature::flatness_audit;
use tbaudit_core::geometry::{BaseField, ChartedMetric};
use tbaudit_core::killing::killing_classify;
use tbaudit_core::lifts::{closedness_check, parallel_lift_check};

use crate::config::AuditConfig;

/// One audited claim in the report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportClaim {
    pub id: String,
    pub location: String,
    pub quote: String,
    pub verdict: String,
    pub max_abs_residual: f64,
    pub samples: usize,
}

/// Consistency record for one of the four audited propositions.
#[derive(Debug, Clone, Serialize)]
pub struct PropositionRecord {
    pub id: String,
    pub consistent: bool,
    pub notes: String,
}

/// Full audit report. Field order here fixes the JSON key order.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub version: String,
    pub config: AuditConfig,
    pub convention_sign: i8,
    pub claims: Vec<ReportClaim>,
    pub propositions: Vec<PropositionRecord>,
    pub falsified_claims: Vec<String>,
    pub timing_ms: u64,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

impl AuditReport {
    /// Assemble a report from claim results and proposition records.
    ///
    /// `timing_ms` is pinned to zero so that identical configurations yield
    /// byte-identical files; wall-clock timing is printed to stderr instead.
    pub fn new(
        config: AuditConfig,
        convention_sign: i8,
        results: &[ClaimResult],
        propositions: Vec<PropositionRecord>,
    ) -> Self {
        let claims: Vec<ReportClaim> = results
            .iter()
            .map(|r| ReportClaim {
                id: r.id.to_string(),
                location: r.location.to_string(),
                quote: r.quote.to_string(),
                verdict: verdict_name(r.verdict).to_string(),
                max_abs_residual: r.max_abs_residual,
                samples: r.samples,
            })
            .collect();
        let falsified_claims = results
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .map(|r| r.id.to_string())
            .collect();
        AuditReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            convention_sign,
            claims,
            propositions,
            falsified_claims,
            timing_ms: 0,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).context("serializing report")?;
        s.push('\n');
        Ok(s)
    }

    /// Fixed-width plain-text table with a verdict-count footer.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let id_w = self
            .claims
            .iter()
            .map(|c| c.id.len())
            .chain(std::iter::once("claim".len()))
            .max()
            .unwrap_or(5);
        let loc_w = self
            .claims
            .iter()
            .map(|c| c.location.len())
            .chain(std::iter::once("location".len()))
            .max()
            .unwrap_or(8);
        out.push_str(&format!(
            "{:<id_w$}  {:<loc_w$}  {:<12}  {:>14}  {:>7}\n",
            "claim", "location", "verdict", "max residual", "samples"
        ));
        out.push_str(&format!(
            "{:-<id_w$}  {:-<loc_w$}  {:-<12}  {:->14}  {:->7}\n",
            "", "", "", "", ""
        ));
        let mut pass = 0usize;
        let mut fail = 0usize;
        let mut inconclusive = 0usize;
        for c in &self.claims {
            match c.verdict.as_str() {
                "PASS" => pass += 1,
                "FAIL" => fail += 1,
                _ => inconclusive += 1,
            }
            out.push_str(&format!(
                "{:<id_w$}  {:<loc_w$}  {:<12}  {:>14.6e}  {:>7}\n",
                c.id, c.location, c.verdict, c.max_abs_residual, c.samples
            ));
        }
        out.push('\n');
        out.push_str(&format!(
            "claims: {} total, {} PASS, {} FAIL, {} INCONCLUSIVE\n",
            self.claims.len(),
            pass,
            fail,
            inconclusive
        ));
        if !self.falsified_claims.is_empty() {
            out.push_str(&format!(
                "falsified: {}\n",
                self.falsified_claims.join(", ")
            ));
        }
        for p in &self.propositions {
            out.push_str(&format!(
                "{}: consistent={} — {}\n",
                p.id, p.consistent, p.notes
            ));
        }
        out
    }
}

/// Evaluate the four audited propositions over the sampled points and the
/// configured base fields.
pub fn build_propositions(
    m: &ChartedMetric,
    points: &[(Vec<f64>, Vec<f64>)],
    fields: &[BaseField],
) -> Vec<PropositionRecord> {
    let mut records = Vec::with_capacity(4);

    // Proposition 1: a base field is parallel iff both of its lifts are.
    {
        let mut consistent = true;
        let mut notes = Vec::new();
        for &f in fields {
            let c = parallel_lift_check(m, points, f);
            if !c.equivalence_holds {
                consistent = false;
                notes.push(format!(
                    "{}: base_parallel={} complete={} horizontal={}",
                    f.name(),
                    c.base_parallel,
                    c.complete_parallel,
                    c.horizontal_parallel
                ));
            }
        }
        records.push(PropositionRecord {
            id: "prop1".to_string(),
            consistent,
            notes: if notes.is_empty() {
                format!(
                    "parallel-lift equivalence holds for all {} fields",
                    fields.len()
                )
            } else {
                notes.join("; ")
            },
        });
    }

    // Proposition 2: closed base covector with vanishing second covariant
    // derivative has a closed complete lift.
    {
        let mut consistent = true;
        let mut notes = Vec::new();
        for &f in fields {
            let c = closedness_check(m, points, f);
            if !c.implication_holds {
                consistent = false;
                notes.push(format!(
                    "{}: base_closed={} second_cov_deriv_zero={} complete_lift_closed={}",
                    f.name(),
                    c.base_closed,
                    c.second_cov_deriv_zero,
                    c.complete_lift_closed
                ));
            }
        }
        records.push(PropositionRecord {
            id: "prop2".to_string(),
            consistent,
            notes: if notes.is_empty() {
                format!(
                    "closedness implication holds for all {} fields",
                    fields.len()
                )
            } else {
                notes.join("; ")
            },
        });
    }

    // Proposition 3: claimed Killing-lift characterizations (a) and (b).
    {
        let mut consistent = true;
        let mut notes = Vec::new();
        for &f in fields {
            let c = killing_classify(m, points, f);
            if !c.prop3a_consistent {
                consistent = false;
                notes.push(format!(
                    "{}: complete lift Killing though the claimed condition fails (3a inconsistent)",
                    f.name()
                ));
            }
            if !c.prop3b_consistent {
                consistent = false;
                notes.push(format!(
                    "{}: horizontal-lift Killing status contradicts the claimed condition (3b inconsistent)",
                    f.name()
                ));
            }
        }
        records.push(PropositionRecord {
            id: "prop3".to_string(),
            consistent,
            notes: if notes.is_empty() {
                format!(
                    "Killing-lift characterization consistent for all {} fields",
                    fields.len()
                )
            } else {
                notes.join("; ")
            },
        });
    }

    // Proposition 4: the bundle metric is flat iff the base is flat.
    {
        let f = flatness_audit(m, points);
        records.push(PropositionRecord {
            id: "prop4".to_string(),
            consistent: f.base_flat == f.bundle_flat,
            notes: format!(
                "base_flat={} bundle_flat={} max_bundle_curv={:.3e}",
                f.base_flat, f.bundle_flat, f.max_bundle_curv
            ),
        });
    }

    records
}

/// Write `contents` to `path` atomically: stage in a temp file beside the
/// target, then rename into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let dir = dir.map(Path::to_path_buf).unwrap_or_else(|| ".".into());
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())
        .context("writing report")?;
    tmp.persist(path)
        .with_context(|| format!("renaming report into {}", path.display()))?;
    Ok(())
}
