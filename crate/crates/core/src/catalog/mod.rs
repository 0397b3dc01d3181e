//! Flat-file persistence: the publication catalog, project files (unified
//! scheme, previous schemes and mapping), and study data.
//!
//! Every JSON document carries `schemaVersion` and `kind`. Output is
//! canonical: two equal values always serialize to the same bytes.
//! Fields this crate does not know are either rejected ([`LoadMode::Strict`])
//! or carried through to the next save ([`LoadMode::Lenient`]).

mod entry;
mod project;
mod study_files;

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::scheme::{ClassNode, ClassificationScheme, Extra, MappingPair, Violation};
use crate::study::StudyError;

pub use entry::{
    catalog_stats, normalize_doi, Catalog, CatalogDocument, CatalogEntry, CatalogStats,
    CollectionType, Contribution, GroupBy, StatRow,
};
pub use project::{Project, ProjectDocument, ProjectSummary};
pub use study_files::{
    load_annotations, load_gold, load_sus, save_annotations_json, save_gold, AnnotatedUnit,
    AnnotationSet, AnnotationsDocument, GoldDocument, SusRecord,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Value of the `kind` field of a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DocumentKind {
    Catalog,
    Scheme,
    Project,
    Annotations,
    Gold,
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DocumentKind::Catalog => "catalog",
            DocumentKind::Scheme => "scheme",
            DocumentKind::Project => "project",
            DocumentKind::Annotations => "annotations",
            DocumentKind::Gold => "gold",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoadMode {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: schemaVersion {found:?} is not supported (expected {expected})", path.display())]
    SchemaVersion {
        path: PathBuf,
        found: Option<u64>,
        expected: u32,
    },
    #[error("{}: expected a {expected} document, found {found:?}", path.display())]
    WrongKind {
        path: PathBuf,
        expected: DocumentKind,
        found: Option<String>,
    },
    #[error("{}: unknown fields {}", path.display(), fields.join(", "))]
    UnknownFields { path: PathBuf, fields: Vec<String> },
    #[error("duplicate DOI {doi}: entries #{first_index} ({first_raw:?}) and #{second_index} ({second_raw:?})")]
    DuplicateDoi {
        doi: String,
        first_index: usize,
        first_raw: String,
        second_index: usize,
        second_raw: String,
    },
    #[error("dangling references: {}", join_violations(.violations))]
    ReferentialViolation { violations: Vec<Violation> },
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
    #[error("{}:{line}: {source}", path.display())]
    Study {
        path: PathBuf,
        line: usize,
        source: StudyError,
    },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CatalogError + '_ {
    move |source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, e: serde_json::Error) -> CatalogError {
    CatalogError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Collects the dotted paths of every field that landed in an [`Extra`].
pub trait UnknownFields {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>);
}

pub(crate) fn child(path: &str, field: &str) -> String {
    if path.is_empty() {
        field.to_string()
    } else {
        format!("{path}.{field}")
    }
}

pub(crate) fn push_extra(extra: &Extra, path: &str, out: &mut Vec<String>) {
    out.extend(extra.keys().map(|k| child(path, k)));
}

impl UnknownFields for ClassNode {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        push_extra(&self.extra, path, out);
    }
}

impl UnknownFields for MappingPair {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        push_extra(&self.extra, path, out);
    }
}

impl UnknownFields for ClassificationScheme {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        push_extra(&self.extra, path, out);
        for (i, n) in self.nodes.iter().enumerate() {
            n.unknown_fields(&child(path, &format!("nodes[{i}]")), out);
        }
    }
}

impl<T: UnknownFields> UnknownFields for [T] {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        for (i, x) in self.iter().enumerate() {
            x.unknown_fields(&format!("{path}[{i}]"), out);
        }
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct Header {
    schema_version: Option<u64>,
    kind: Option<String>,
}

/// Reads only `kind` from a JSON document.
pub fn peek_kind(path: &Path) -> Result<Option<DocumentKind>, CatalogError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let header: Header = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    Ok(header
        .kind
        .and_then(|k| serde_json::from_value(serde_json::Value::String(k)).ok()))
}

fn read_document<T>(path: &Path, kind: DocumentKind, mode: LoadMode) -> Result<T, CatalogError>
where
    T: DeserializeOwned + UnknownFields,
{
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_document(path, &text, kind, mode)
}

pub(crate) fn parse_document<T>(
    path: &Path,
    text: &str,
    kind: DocumentKind,
    mode: LoadMode,
) -> Result<T, CatalogError>
where
    T: DeserializeOwned + UnknownFields,
{
    let header: Header = serde_json::from_str(text).map_err(|e| parse_err(path, e))?;
    if header.schema_version != Some(SCHEMA_VERSION as u64) {
        return Err(CatalogError::SchemaVersion {
            path: path.to_path_buf(),
            found: header.schema_version,
            expected: SCHEMA_VERSION,
        });
    }
    if header.kind.as_deref() != Some(&kind.to_string()) {
        return Err(CatalogError::WrongKind {
            path: path.to_path_buf(),
            expected: kind,
            found: header.kind,
        });
    }
    let doc: T = serde_json::from_str(text).map_err(|e| parse_err(path, e))?;
    if mode == LoadMode::Strict {
        let mut fields = Vec::new();
        doc.unknown_fields("", &mut fields);
        if !fields.is_empty() {
            return Err(CatalogError::UnknownFields {
                path: path.to_path_buf(),
                fields,
            });
        }
    }
    Ok(doc)
}

/// Pretty JSON with two-space indentation and a trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document types serialize infallibly");
    s.push('\n');
    s
}

/// Writes through a sibling temporary file so readers never see a torn file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CatalogError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// A standalone scheme file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SchemeDocument {
    pub schema_version: u32,
    pub kind: DocumentKind,
    #[serde(flatten)]
    pub scheme: ClassificationScheme,
}

impl UnknownFields for SchemeDocument {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        self.scheme.unknown_fields(path, out);
    }
}

pub fn load_scheme(path: &Path, mode: LoadMode) -> Result<ClassificationScheme, CatalogError> {
    let doc: SchemeDocument = read_document(path, DocumentKind::Scheme, mode)?;
    Ok(doc.scheme)
}

pub fn scheme_to_json(scheme: &ClassificationScheme) -> String {
    to_canonical_json(&SchemeDocument {
        schema_version: SCHEMA_VERSION,
        kind: DocumentKind::Scheme,
        scheme: scheme.clone(),
    })
}

pub fn save_scheme(scheme: &ClassificationScheme, path: &Path) -> Result<(), CatalogError> {
    write_atomic(path, &scheme_to_json(scheme))
}

pub fn load_catalog(path: &Path, mode: LoadMode) -> Result<Catalog, CatalogError> {
    let doc: CatalogDocument = read_document(path, DocumentKind::Catalog, mode)?;
    Catalog::from_document(doc)
}

pub fn save_catalog(catalog: &Catalog, path: &Path) -> Result<(), CatalogError> {
    write_atomic(path, &catalog.to_json())
}

/// Reads a project file as written, before duplicate pairs are collapsed.
pub fn read_project_document(path: &Path, mode: LoadMode) -> Result<ProjectDocument, CatalogError> {
    read_document(path, DocumentKind::Project, mode)
}

pub fn load_project(path: &Path, mode: LoadMode) -> Result<Project, CatalogError> {
    read_project_document(path, mode)?.into_project()
}

pub fn save_project(project: &Project, path: &Path) -> Result<(), CatalogError> {
    write_atomic(path, &project.to_json())
}
