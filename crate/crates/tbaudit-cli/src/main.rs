//! `tbaudit` — audit closed-form tangent-bundle geometry claims against
//! independent numerical oracles.
//!
//! Exit codes: 0 when every claim expected to hold passed, 1 when a claim
//! expected to hold was falsified (or a claim could not be decided), 2 on
//! usage or configuration errors. Claims recorded in the expected-failure
//! ledger do not affect the exit status; they are listed under
//! `falsified_claims` in the report.

mod config;
mod expected;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use tbaudit_core::claims::{audit_claims, registry, Claim, ToleranceBands, Verdict};
use tbaudit_core::connection::pin_convention_sign;
use tbaudit_core::geodesic::{geodesic_integrate, GeodesicState};
use tbaudit_core::geometry::ChartedMetric;
use tbaudit_core::sampler::sample_points;

use config::{AuditConfig, ConfigOverrides};
use report::{build_propositions, write_atomic, AuditReport};

#[derive(Parser)]
#[command(
    name = "tbaudit",
    version,
    about = "Numerical auditor for tangent-bundle metric formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Audit every registered claim.
    Audit(AuditArgs),
    /// Audit the connection-coefficient claims (eq2.*).
    Connection(AuditArgs),
    /// Audit the curvature claims (eq17.*, eq18.*).
    Curvature(AuditArgs),
    /// Audit the lift-calculus claims (eq4.* through eq13.*).
    Lifts(AuditArgs),
    /// Audit the Killing / Lie-derivative claims (eq15.*, eq16.*).
    Killing(KillingArgs),
    /// Integrate a bundle geodesic and print it as CSV.
    Geodesic(GeodesicArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct AuditArgs {
    /// Chart name, e.g. euclidean(2), sphere, hyperbolic_half_plane, flat_torus.
    #[arg(long)]
    metric: Option<String>,
    /// Base dimension, composed with a bare --metric name.
    #[arg(long)]
    dim: Option<usize>,
    /// Number of sampled bundle points.
    #[arg(long)]
    samples: Option<usize>,
    /// RNG seed (flag beats TBAUDIT_SEED beats config file).
    #[arg(long)]
    seed: Option<u64>,
    /// Fiber radius bound for sampled points.
    #[arg(long)]
    y_max: Option<f64>,
    /// Residuals at or below this bound pass.
    #[arg(long)]
    tolerance_pass: Option<f64>,
    /// Residuals above this bound fail; between the bounds is inconclusive.
    #[arg(long)]
    tolerance_fail: Option<f64>,
    /// Comma-separated claim ids; a trailing '*' matches by prefix.
    #[arg(long, value_delimiter = ',')]
    claims: Option<Vec<String>>,
    /// Comma-separated base vector fields to audit field claims against.
    #[arg(long, value_delimiter = ',')]
    fields: Option<Vec<String>>,
    /// JSON config file; flags override its entries.
    #[arg(long)]
    config: Option<String>,
    /// Write the JSON report to this path (atomically).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stdout format.
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct KillingArgs {
    #[command(flatten)]
    audit: AuditArgs,
    /// Restrict the audit to one base field by name.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args)]
struct GeodesicArgs {
    /// Chart name, e.g. euclidean(2), sphere.
    #[arg(long, default_value = "euclidean(2)")]
    metric: String,
    /// Base dimension, composed with a bare --metric name.
    #[arg(long)]
    dim: Option<usize>,
    /// Comma-separated base coordinates x^1..x^n.
    #[arg(long, value_delimiter = ',', required = true)]
    x: Vec<f64>,
    /// Comma-separated fiber coordinates y^1..y^n.
    #[arg(long, value_delimiter = ',', required = true)]
    y: Vec<f64>,
    /// Comma-separated initial velocity v^1..v^2n in induced coordinates.
    #[arg(long, value_delimiter = ',', required = true)]
    v: Vec<f64>,
    /// Number of RK4 steps.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Step size.
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Audit(a) => run_audit(a, None),
        Command::Connection(a) => run_audit(a, Some(&["eq2."])),
        Command::Curvature(a) => run_audit(a, Some(&["eq17.", "eq18."])),
        Command::Lifts(a) => run_audit(
            a,
            Some(&[
                "eq4.", "eq5.", "eq6.", "eq7.", "eq8.", "eq9.", "eq10.", "eq11.", "eq12.",
                "eq13.",
            ]),
        ),
        Command::Killing(k) => {
            let mut a = k.audit;
            if let Some(field) = k.field {
                match &mut a.fields {
                    Some(fs) => fs.push(field),
                    None => a.fields = Some(vec![field]),
                }
            }
            run_audit(a, Some(&["eq15.", "eq16."]))
        }
        Command::Geodesic(g) => run_geodesic(g),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Restrict the registry to a subcommand's prefixes and the user's claim
/// filter. Filter entries match exactly, or by prefix when ending in `*`.
fn select_claims(
    all: Vec<Claim>,
    prefixes: Option<&[&str]>,
    filter: Option<&[String]>,
) -> Result<Vec<Claim>> {
    let mut claims = all;
    if let Some(prefixes) = prefixes {
        claims.retain(|c| prefixes.iter().any(|p| c.id.starts_with(p)));
    }
    if let Some(filter) = filter {
        for pat in filter {
            let hit = if let Some(prefix) = pat.strip_suffix('*') {
                claims.iter().any(|c| c.id.starts_with(prefix))
            } else {
                claims.iter().any(|c| c.id == pat.as_str())
            };
            if !hit {
                bail!("claim filter '{pat}' matches no audited claim");
            }
        }
        claims.retain(|c| {
            filter.iter().any(|pat| match pat.strip_suffix('*') {
                Some(prefix) => c.id.starts_with(prefix),
                None => c.id == pat.as_str(),
            })
        });
    }
    Ok(claims)
}

fn run_audit(a: AuditArgs, prefixes: Option<&[&str]>) -> Result<ExitCode> {
    let over = ConfigOverrides {
        metric: a.metric,
        dim: a.dim,
        samples: a.samples,
        seed: a.seed,
        y_max: a.y_max,
        tolerance_pass: a.tolerance_pass,
        tolerance_fail: a.tolerance_fail,
        claims: a.claims,
        fields: a.fields,
    };
    let mut cfg = AuditConfig::resolve(a.config.as_deref(), &over)?;
    let m = cfg.parse_metric()?;
    // Echo the canonical chart name so identical charts yield identical
    // reports regardless of how they were spelled.
    cfg.metric = m.name();

    let claims = select_claims(registry(), prefixes, cfg.claims.as_deref())?;
    let fields = cfg.resolve_fields(&m);
    let points = sample_points(&m, cfg.samples, cfg.seed, cfg.y_max);
    let bands = ToleranceBands {
        pass: cfg.tolerance_pass,
        fail: cfg.tolerance_fail,
    };
    let sign = pin_convention_sign().context("pinning curvature sign convention")?;

    let started = std::time::Instant::now();
    let results = audit_claims(&m, &claims, &points, &fields, bands);
    let propositions = build_propositions(&m, &points, &fields);
    eprintln!(
        "audited {} claims on {} at {} points in {} ms",
        results.len(),
        m.name(),
        points.len(),
        started.elapsed().as_millis()
    );

    let unexpected: Vec<&str> = results
        .iter()
        .filter(|r| match r.verdict {
            Verdict::Fail => !expected::expected_to_fail(&m, &r.id),
            Verdict::Inconclusive => true,
            Verdict::Pass => false,
        })
        .map(|r| r.id.as_str())
        .collect();

    let report = AuditReport::new(cfg, sign, &results, propositions);
    match a.format {
        Format::Json => print!("{}", report.to_json()?),
        Format::Table => print!("{}", report.to_table()),
    }
    if let Some(path) = &a.out {
        write_atomic(path, &report.to_json()?)?;
        eprintln!("report written to {}", path.display());
    }

    if unexpected.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("unexpected verdicts: {}", unexpected.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn run_geodesic(g: GeodesicArgs) -> Result<ExitCode> {
    let spec = match g.dim {
        Some(d) if !g.metric.contains('(') => format!("{}({d})", g.metric),
        _ => g.metric.clone(),
    };
    let m = ChartedMetric::parse(&spec)?;
    let n = m.dim();
    if g.x.len() != n {
        bail!("--x needs {n} components for {}, got {}", m.name(), g.x.len());
    }
    if g.y.len() != n {
        bail!("--y needs {n} components for {}, got {}", m.name(), g.y.len());
    }
    if g.v.len() != 2 * n {
        bail!(
            "--v needs {} components for {}, got {}",
            2 * n,
            m.name(),
            g.v.len()
        );
    }
    if g.steps == 0 {
        bail!("--steps must be at least 1");
    }
    let mut q = g.x.clone();
    q.extend_from_slice(&g.y);
    let start = GeodesicState {
        q,
        v: g.v.clone(),
        t: 0.0,
    };
    let traj = geodesic_integrate(&m, &start, g.dt, g.steps)?;

    let mut header = String::from("t");
    for i in 1..=n {
        header.push_str(&format!(",x{i}"));
    }
    for i in 1..=n {
        header.push_str(&format!(",y{i}"));
    }
    for i in 1..=2 * n {
        header.push_str(&format!(",v{i}"));
    }
    header.push_str(",energy");
    println!("{header}");
    for s in &traj.samples {
        let mut row = format!("{:.12e}", s.state.t);
        for c in &s.state.q {
            row.push_str(&format!(",{c:.12e}"));
        }
        for c in &s.state.v {
            row.push_str(&format!(",{c:.12e}"));
        }
        row.push_str(&format!(",{:.12e}", s.energy));
        println!("{row}");
    }
    if let Some(i) = traj.exit_index {
        eprintln!(
            "trajectory left the chart domain at step {i}; emitted {} samples",
            traj.samples.len()
        );
    }
    Ok(ExitCode::SUCCESS)
}
