//! Audit configuration: JSON file and/or command-line flags, flags winning.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use tbaudit_core::geometry::{BaseField, ChartedMetric};

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_Y_MAX: f64 = 1.2;
pub const DEFAULT_TOLERANCE_PASS: f64 = 1e-6;
pub const DEFAULT_TOLERANCE_FAIL: f64 = 1e-3;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct AuditConfig {
    /// Chart name, e.g. "euclidean(2)", "sphere(1)", "hyperbolic_half_plane".
    pub metric: String,
    pub samples: usize,
    pub seed: u64,
    /// Fiber sampling radius bound: r² ≤ y_max² at every drawn point.
    pub y_max: f64,
    pub tolerance_pass: f64,
    pub tolerance_fail: f64,
    /// Optional claim-id filter (exact ids, or prefixes ending in '*').
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claims: Option<Vec<String>>,
    /// Optional base-field filter by name.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<String>>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            metric: "euclidean(2)".into(),
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            y_max: DEFAULT_Y_MAX,
            tolerance_pass: DEFAULT_TOLERANCE_PASS,
            tolerance_fail: DEFAULT_TOLERANCE_FAIL,
            claims: None,
            fields: None,
        }
    }
}

/// Flag-level overrides collected from the command line.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverrides {
    pub metric: Option<String>,
    pub dim: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub y_max: Option<f64>,
    pub tolerance_pass: Option<f64>,
    pub tolerance_fail: Option<f64>,
    pub claims: Option<Vec<String>>,
    pub fields: Option<Vec<String>>,
}

impl AuditConfig {
    /// Resolve: config file (if any) < TBAUDIT_SEED env < flags.
    pub fn resolve(file: Option<&str>, over: &ConfigOverrides) -> Result<Self> {
        let mut cfg = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read config file '{path}'"))?;
                serde_json::from_str::<AuditConfig>(&text)
                    .with_context(|| format!("cannot parse config file '{path}'"))?
            }
            None => AuditConfig::default(),
        };
        if over.seed.is_none() {
            if let Ok(env_seed) = std::env::var("TBAUDIT_SEED") {
                cfg.seed = env_seed
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| anyhow!("TBAUDIT_SEED is not a 64-bit unsigned: '{env_seed}'"))?;
            }
        }
        if let Some(name) = &over.metric {
            // bare names take the --dim flag, full "name(params)" stand alone
            cfg.metric = if name.contains('(') {
                name.clone()
            } else if let Some(d) = over.dim {
                format!("{name}({d})")
            } else {
                name.clone()
            };
        } else if let Some(d) = over.dim {
            let base = cfg.metric.split('(').next().unwrap_or("").to_string();
            cfg.metric = format!("{base}({d})");
        }
        if let Some(v) = over.samples {
            cfg.samples = v;
        }
        if let Some(v) = over.seed {
            cfg.seed = v;
        }
        if let Some(v) = over.y_max {
            cfg.y_max = v;
        }
        if let Some(v) = over.tolerance_pass {
            cfg.tolerance_pass = v;
        }
        if let Some(v) = over.tolerance_fail {
            cfg.tolerance_fail = v;
        }
        if over.claims.is_some() {
            cfg.claims = over.claims.clone();
        }
        if over.fields.is_some() {
            cfg.fields = over.fields.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            bail!("samples must be ≥ 1, got {}", self.samples);
        }
        if !(self.y_max.is_finite() && self.y_max >= 0.0) {
            bail!("y_max must be finite and non-negative, got {}", self.y_max);
        }
        if !(self.tolerance_pass.is_finite() && self.tolerance_pass > 0.0) {
            bail!("tolerance_pass must be a positive real, got {}", self.tolerance_pass);
        }
        if !(self.tolerance_fail.is_finite() && self.tolerance_pass < self.tolerance_fail) {
            bail!(
                "tolerance_pass ({}) must be below tolerance_fail ({})",
                self.tolerance_pass,
                self.tolerance_fail
            );
        }
        let m = self.parse_metric()?;
        if let Some(fields) = &self.fields {
            for f in fields {
                let Some(field) = BaseField::from_name(f) else {
                    bail!("unknown field '{f}'");
                };
                if !field.available_on(&m) {
                    bail!("field '{f}' is not defined on {}", m.name());
                }
            }
        }
        Ok(())
    }

    pub fn parse_metric(&self) -> Result<ChartedMetric> {
        ChartedMetric::parse(&self.metric).map_err(|e| anyhow!("{e}"))
    }

    /// The audited field set: the named filter, or the metric's defaults.
    pub fn resolve_fields(&self, m: &ChartedMetric) -> Vec<BaseField> {
        match &self.fields {
            Some(names) => names
                .iter()
                .filter_map(|n| BaseField::from_name(n))
                .collect(),
            None => BaseField::defaults_for(m),
        }
    }
}
