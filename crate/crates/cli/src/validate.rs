use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use taxunify::catalog::{
    load_annotations, load_catalog, load_gold, load_scheme, peek_kind, read_project_document,
    to_canonical_json, DocumentKind,
};
use taxunify::{validate_scheme, CatalogError, LoadMode, Violation};

use crate::{emit, Common, Failure, Format, FAILED, OK, USAGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
enum Status {
    Valid,
    Invalid,
    Unreadable,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct FileReport {
    path: String,
    kind: Option<DocumentKind>,
    status: Status,
    /// Structured referential and structural problems.
    violations: Vec<Violation>,
    /// Problems without a structured form: unknown fields, duplicate DOIs,
    /// bad annotation rows, unreadable input.
    problems: Vec<String>,
}

#[derive(Debug, Serialize)]
struct ValidateReport {
    valid: bool,
    files: Vec<FileReport>,
}

fn unreadable(e: &CatalogError) -> bool {
    matches!(
        e,
        CatalogError::Io { .. }
            | CatalogError::Parse { .. }
            | CatalogError::SchemaVersion { .. }
            | CatalogError::WrongKind { .. }
    )
}

fn check(path: &Path, mode: LoadMode) -> FileReport {
    let mut report = FileReport {
        path: path.display().to_string(),
        kind: None,
        status: Status::Valid,
        violations: Vec::new(),
        problems: Vec::new(),
    };
    let outcome = inspect(path, mode, &mut report);
    if let Err(e) = outcome {
        report.status = if unreadable(&e) {
            Status::Unreadable
        } else {
            Status::Invalid
        };
        match e {
            CatalogError::ReferentialViolation { violations } => {
                report.violations.extend(violations)
            }
            e => report.problems.push(e.to_string()),
        }
    } else if !report.violations.is_empty() || !report.problems.is_empty() {
        report.status = Status::Invalid;
    }
    report
}

/// CSV files are read as annotation tables; JSON files by their `kind`.
fn inspect(path: &Path, mode: LoadMode, report: &mut FileReport) -> Result<(), CatalogError> {
    let kind = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        DocumentKind::Annotations
    } else {
        match peek_kind(path)? {
            Some(k) => k,
            None => {
                return Err(CatalogError::WrongKind {
                    path: path.to_path_buf(),
                    expected: DocumentKind::Project,
                    found: None,
                })
            }
        }
    };
    report.kind = Some(kind);
    match kind {
        DocumentKind::Project => {
            let doc = read_project_document(path, mode)?;
            report.violations = doc.validate().violations;
        }
        DocumentKind::Scheme => {
            let scheme = load_scheme(path, mode)?;
            report.violations = validate_scheme(&scheme).violations;
        }
        DocumentKind::Catalog => {
            let catalog = load_catalog(path, mode)?;
            for s in catalog.schemes() {
                report.violations.extend(validate_scheme(s).violations);
            }
        }
        DocumentKind::Annotations => {
            load_annotations(path, mode)?;
        }
        DocumentKind::Gold => {
            load_gold(path, mode)?;
        }
    }
    Ok(())
}

fn text(report: &ValidateReport) -> String {
    let mut s = String::new();
    for f in &report.files {
        if f.status == Status::Unreadable {
            continue;
        }
        let kind = f.kind.map(|k| k.to_string()).unwrap_or_default();
        let status = if f.status == Status::Valid {
            "ok"
        } else {
            "invalid"
        };
        let _ = writeln!(s, "{status:<8} {} ({kind})", f.path);
        for v in &f.violations {
            let _ = writeln!(s, "  {v}");
        }
        for p in &f.problems {
            let _ = writeln!(s, "  {p}");
        }
    }
    s
}

pub(crate) fn run(paths: &[std::path::PathBuf], common: &Common) -> Result<u8, Failure> {
    let files: Vec<FileReport> = paths.iter().map(|p| check(p, common.mode())).collect();
    for f in files.iter().filter(|f| f.status == Status::Unreadable) {
        for p in &f.problems {
            eprintln!("taxunify: {p}");
        }
    }
    let code = if files.iter().any(|f| f.status == Status::Unreadable) {
        USAGE
    } else if files.iter().any(|f| f.status == Status::Invalid) {
        FAILED
    } else {
        OK
    };
    let report = ValidateReport {
        valid: code == OK,
        files,
    };
    let body = match common.format {
        Format::Json => to_canonical_json(&report),
        Format::Text => text(&report),
    };
    emit(common, &body)?;
    Ok(code)
}
