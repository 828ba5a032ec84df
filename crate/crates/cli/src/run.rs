//! Command dispatch: parse inputs, call the library, render reports.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use ghlab_core::{
    c_m_upper, ed_evidence, equilateral_gap_bound, equilateral_search, gh_exact, inequality_audit,
    infinite_distance_sweep, min_distortion_embedding, r_m_upper, AuditReport, Budget,
    CertifiedValue, EquilateralReport, EquilateralSpec, FiniteMetricSpace, NormedModel,
    SweepReport, Tag, DEFAULT_SEED,
};

use crate::output::{float, to_json};
use crate::{Cli, Command, Format};

pub enum CliError {
    Io(String),
    Parse(String),
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Parse(msg) => write!(f, "{msg}"),
            CliError::Validation(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<ghlab_core::Error> for CliError {
    fn from(e: ghlab_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Message prefixes of the typed constructors' errors; these surface through
/// serde as custom messages and mean the file parsed but failed validation.
const VALIDATION_PREFIXES: [&str; 6] = [
    "invalid input",
    "dimension mismatch",
    "metric axiom violated",
    "index ",
    "degenerate denominator",
    "duplicate points",
];

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    // Syntax errors first, so they always carry a line/column location.
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_value(value).map_err(|e| {
        let message = e.to_string();
        if VALIDATION_PREFIXES.iter().any(|p| message.starts_with(p)) {
            CliError::Validation(format!("{}: {message}", path.display()))
        } else {
            // Schema-level mismatches (missing/unknown fields, wrong types)
            // count as parse failures.
            CliError::Parse(format!("{}: {message}", path.display()))
        }
    })
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Ok(text) = std::env::var("GHLAB_SEED") {
        return text
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Validation(format!("GHLAB_SEED is not a u64: {text:?}")));
    }
    Ok(flag.unwrap_or(DEFAULT_SEED))
}

fn emit(cli: &Cli, payload: String) -> Result<(), CliError> {
    let text = payload + "\n";
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn require_json(cli: &Cli, command: &str) -> Result<(), CliError> {
    if cli.format == Format::Csv {
        return Err(CliError::Validation(format!(
            "csv output is not defined for `{command}`; use --format json"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct EmbedJson<'a> {
    distortion: f64,
    points: &'a [Vec<f64>],
}

#[derive(Serialize)]
struct EdJson {
    ed_lower_bound: usize,
    cap: usize,
}

#[derive(Serialize)]
struct AuditJson<'a> {
    model: &'a NormedModel,
    m: usize,
    c: &'a CertifiedValue,
    r: &'a CertifiedValue,
    constructive_r_from_c: f64,
    checks: &'a [ghlab_core::AuditCheck],
}

#[derive(Serialize)]
struct SweepRowJson {
    lambda: f64,
    d: f64,
    m: usize,
    c: f64,
    c_tag: Tag,
    bound: f64,
    valid: bool,
}

#[derive(Serialize)]
struct SweepJson<'a> {
    m: usize,
    equilateral: &'a EquilateralReport,
    c: &'a CertifiedValue,
    rows: Vec<SweepRowJson>,
}

fn audit_csv(model: &NormedModel, report: &AuditReport) -> String {
    let mut text = String::from(
        "model,m,c,c_tag,r,r_tag,r_from_c,\
         stated_upper_pass,stated_upper_conclusive,stated_upper_margin,\
         stated_lower_pass,stated_lower_conclusive,stated_lower_margin,\
         constructive_step_pass,constructive_step_conclusive,constructive_step_margin",
    );
    text.push('\n');
    text.push_str(&format!(
        "{model},{},{},{},{},{},{}",
        report.m,
        float(report.c.value),
        report.c.tag,
        float(report.r.value),
        report.r.tag,
        float(report.constructive_r_from_c),
    ));
    for check in &report.checks {
        text.push_str(&format!(
            ",{},{},{}",
            check.pass,
            check.conclusive,
            float(check.margin)
        ));
    }
    text
}

fn sweep_csv(report: &SweepReport) -> String {
    let mut text = String::from("lambda,d,m,c,c_tag,bound,valid");
    for row in &report.rows {
        text.push('\n');
        text.push_str(&format!(
            "{},{},{},{},{},{},{}",
            float(row.lambda),
            float(row.report.d),
            row.report.m,
            float(row.report.c_value),
            row.report.c_tag,
            float(row.report.bound),
            row.report.valid,
        ));
    }
    text
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let seed = resolve_seed(cli.seed)?;
    let budget = Budget::new(cli.starts, cli.iters)?;

    match &cli.command {
        Command::Gh { x, y, nodes } => {
            require_json(&cli, "gh")?;
            let x: FiniteMetricSpace = load(x)?;
            let y: FiniteMetricSpace = load(y)?;
            let result = gh_exact(&x, &y, *nodes);
            emit(&cli, to_json(&result))
        }
        Command::Embed { space, model } => {
            require_json(&cli, "embed")?;
            let space: FiniteMetricSpace = load(space)?;
            let model: NormedModel = load(model)?;
            let (config, distortion) = min_distortion_embedding(&space, &model, &budget, seed)?;
            emit(
                &cli,
                to_json(&EmbedJson {
                    distortion,
                    points: config.points(),
                }),
            )
        }
        Command::Equilateral { model, m, ed, tol } => {
            require_json(&cli, "equilateral")?;
            let model: NormedModel = load(model)?;
            if *ed {
                let bound = ed_evidence(&model, &budget, seed)?;
                return emit(
                    &cli,
                    to_json(&EdJson {
                        ed_lower_bound: bound,
                        cap: 1usize << model.dim(),
                    }),
                );
            }
            let m = m.ok_or_else(|| {
                CliError::Validation("equilateral needs either --m <M> or --ed".into())
            })?;
            let report = equilateral_search(&model, m, &budget, seed, *tol)?;
            emit(&cli, to_json(&report))
        }
        Command::Imbalance { model, m } => {
            require_json(&cli, "imbalance")?;
            let model: NormedModel = load(model)?;
            let cert = c_m_upper(&model, *m, &budget, seed)?;
            emit(&cli, to_json(&cert))
        }
        Command::Packing { model, m } => {
            require_json(&cli, "packing")?;
            let model: NormedModel = load(model)?;
            let cert = r_m_upper(&model, *m, &budget, seed)?;
            emit(&cli, to_json(&cert))
        }
        Command::Audit { model, m } => {
            let model: NormedModel = load(model)?;
            let report = inequality_audit(&model, *m, &budget, seed)?;
            let payload = match cli.format {
                Format::Json => to_json(&AuditJson {
                    model: &model,
                    m: report.m,
                    c: &report.c,
                    r: &report.r,
                    constructive_r_from_c: report.constructive_r_from_c,
                    checks: &report.checks,
                }),
                Format::Csv => audit_csv(&model, &report),
            };
            emit(&cli, payload)
        }
        Command::Bound {
            d,
            m,
            c_value,
            c_tag,
        } => {
            require_json(&cli, "bound")?;
            let spec = EquilateralSpec::new(*m, *d)?;
            let cert = CertifiedValue {
                value: *c_value,
                tag: (*c_tag).into(),
                witness: None,
                provenance: "supplied on the command line".into(),
            };
            let report = equilateral_gap_bound(&spec, &cert)?;
            emit(&cli, to_json(&report))
        }
        Command::Sweep {
            x_model,
            y_model,
            m,
            lambdas,
        } => {
            let x_model: NormedModel = load(x_model)?;
            let y_model: NormedModel = load(y_model)?;
            let report = infinite_distance_sweep(&x_model, &y_model, *m, lambdas, &budget, seed)?;
            let payload = match cli.format {
                Format::Json => {
                    let rows = report
                        .rows
                        .iter()
                        .map(|row| SweepRowJson {
                            lambda: row.lambda,
                            d: row.report.d,
                            m: row.report.m,
                            c: row.report.c_value,
                            c_tag: row.report.c_tag,
                            bound: row.report.bound,
                            valid: row.report.valid,
                        })
                        .collect();
                    to_json(&SweepJson {
                        m: report.m,
                        equilateral: &report.equilateral,
                        c: &report.c,
                        rows,
                    })
                }
                Format::Csv => sweep_csv(&report),
            };
            emit(&cli, payload)
        }
    }
}
