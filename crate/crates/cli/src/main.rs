use std::io::IsTerminal;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use taxunify::catalog::{
    self, catalog_stats, load_annotations, load_catalog, load_gold, load_project, load_sus,
    to_canonical_json, write_atomic, GroupBy,
};
use taxunify::report::{self, AgreementReport, SusReport};
use taxunify::study::{annotator_correctness, krippendorff_alpha, sus_batch};
use taxunify::{CatalogError, Fraction, LoadMode};

mod validate;

#[derive(Parser)]
#[command(
    name = "taxunify",
    version,
    about = "Unify classification schemes and check the result"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check project, scheme, catalog, annotation and gold files.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Compute laconicity, lucidity, completeness and soundness of a project.
    Metrics {
        project: PathBuf,
        #[command(flatten)]
        thresholds: ThresholdFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Inter-annotator agreement, correctness against gold labels, and SUS scores.
    Agreement {
        annotations: PathBuf,
        #[arg(long)]
        gold: Option<PathBuf>,
        #[arg(long)]
        sus: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Count catalog entries per group.
    Stats {
        catalog: PathBuf,
        #[arg(long, value_enum, default_value = "year")]
        group_by: GroupArg,
        #[command(flatten)]
        common: Common,
    },
    /// Serve the projects of a workspace directory over HTTP.
    Serve {
        #[arg(long)]
        workspace: PathBuf,
        #[arg(long, default_value = taxunify_service::DEFAULT_BIND)]
        bind: SocketAddr,
        /// Require this value in the X-Taxunify-Secret header.
        #[arg(long, env = "TAXUNIFY_SECRET", hide_env_values = true)]
        secret: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reject unknown fields in JSON inputs (the default).
    #[arg(long, conflicts_with = "lenient")]
    strict: bool,
    /// Ignore unknown fields in JSON inputs.
    #[arg(long)]
    lenient: bool,
}

impl Common {
    fn mode(&self) -> LoadMode {
        if self.lenient {
            LoadMode::Lenient
        } else {
            LoadMode::Strict
        }
    }

    fn color(&self) -> bool {
        self.out.is_none()
            && std::env::var_os("TAXUNIFY_NO_COLOR").is_none()
            && std::io::stdout().is_terminal()
    }
}

#[derive(Args)]
struct ThresholdFlags {
    /// Threshold as a decimal (0.9) or a fraction (9/10).
    #[arg(long, value_parser = parse_threshold)]
    laconicity: Option<Fraction>,
    #[arg(long, value_parser = parse_threshold)]
    lucidity: Option<Fraction>,
    #[arg(long, value_parser = parse_threshold)]
    completeness: Option<Fraction>,
    #[arg(long, value_parser = parse_threshold)]
    soundness: Option<Fraction>,
}

fn parse_threshold(s: &str) -> Result<Fraction, String> {
    let f: Fraction = s.parse().map_err(|e| format!("{e}"))?;
    if f > Fraction::ONE {
        return Err(format!("{s} is above 1"));
    }
    Ok(f)
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Year,
    Area,
    CollectionType,
    Contribution,
}

impl From<GroupArg> for GroupBy {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Year => GroupBy::Year,
            GroupArg::Area => GroupBy::Area,
            GroupArg::CollectionType => GroupBy::CollectionType,
            GroupArg::Contribution => GroupBy::Contribution,
        }
    }
}

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;

/// An error message for stderr and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: USAGE,
            message: message.to_string(),
        }
    }
}

/// Unreadable or malformed input is a usage error; well-formed input that
/// breaks a rule is a validation failure.
fn load_failure(e: CatalogError) -> Failure {
    let code = match e {
        CatalogError::Io { .. }
        | CatalogError::Parse { .. }
        | CatalogError::SchemaVersion { .. }
        | CatalogError::WrongKind { .. } => USAGE,
        _ => FAILED,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn emit(common: &Common, body: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => write_atomic(path, body).map_err(Failure::usage),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("taxunify: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Validate { paths, common } => validate::run(&paths, &common),
        Command::Metrics {
            project,
            thresholds,
            common,
        } => metrics(&project, &thresholds, &common),
        Command::Agreement {
            annotations,
            gold,
            sus,
            common,
        } => agreement(&annotations, gold.as_deref(), sus.as_deref(), &common),
        Command::Stats {
            catalog,
            group_by,
            common,
        } => stats(&catalog, group_by.into(), &common),
        Command::Serve {
            workspace,
            bind,
            secret,
        } => serve(workspace, bind, secret),
    }
}

fn metrics(path: &Path, flags: &ThresholdFlags, common: &Common) -> Result<u8, Failure> {
    let project = load_project(path, common.mode()).map_err(load_failure)?;
    let mut t = project.thresholds;
    t.laconicity = flags.laconicity.unwrap_or(t.laconicity);
    t.lucidity = flags.lucidity.unwrap_or(t.lucidity);
    t.completeness = flags.completeness.unwrap_or(t.completeness);
    t.soundness = flags.soundness.unwrap_or(t.soundness);
    let report = project
        .metric_report_with(&t)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let body = match common.format {
        Format::Json => report::metrics_json(&report),
        Format::Text => report::metrics_text(&report, common.color()),
    };
    emit(common, &body)?;
    Ok(if report.passed { OK } else { FAILED })
}

fn agreement(
    annotations: &Path,
    gold: Option<&Path>,
    sus: Option<&Path>,
    common: &Common,
) -> Result<u8, Failure> {
    let mut set = load_annotations(annotations, common.mode()).map_err(Failure::usage)?;
    let gold = gold
        .map(|p| load_gold(p, common.mode()))
        .transpose()
        .map_err(Failure::usage)?;
    if let (Some(g), false) = (&gold, set.declared_categories) {
        set.matrix.extend_categories(g.labels.values().cloned());
    }
    let reliability = krippendorff_alpha(&set.matrix)
        .map_err(|e| Failure::usage(format!("{}: {e}", annotations.display())))?;
    let correctness = gold
        .map(|g| annotator_correctness(&set.matrix, &g))
        .transpose()
        .map_err(Failure::usage)?;
    let usability = match sus {
        Some(p) => {
            let records = load_sus(p).map_err(Failure::usage)?;
            let responses: Vec<_> = records.iter().map(|r| r.response).collect();
            let summary = sus_batch(&responses)
                .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            Some(SusReport::new(&records, summary))
        }
        None => None,
    };
    let report = AgreementReport {
        reliability,
        correctness,
        usability,
    };
    let body = match common.format {
        Format::Json => to_canonical_json(&report),
        Format::Text => report::agreement_text(&report),
    };
    emit(common, &body)?;
    Ok(OK)
}

fn stats(path: &Path, group_by: GroupBy, common: &Common) -> Result<u8, Failure> {
    let catalog = load_catalog(path, common.mode()).map_err(load_failure)?;
    let stats = catalog_stats(&catalog, group_by);
    let body = match common.format {
        Format::Json => catalog::to_canonical_json(&stats),
        Format::Text => report::stats_text(&stats),
    };
    emit(common, &body)?;
    Ok(OK)
}

fn serve(workspace: PathBuf, bind: SocketAddr, secret: Option<String>) -> Result<u8, Failure> {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .init();
    let runtime = tokio::runtime::Runtime::new().map_err(Failure::usage)?;
    runtime
        .block_on(taxunify_service::serve(taxunify_service::ServiceConfig {
            workspace,
            bind,
            secret,
        }))
        .map_err(Failure::usage)?;
    Ok(OK)
}
