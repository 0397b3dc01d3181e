use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    child, push_extra, to_canonical_json, CatalogError, DocumentKind, UnknownFields, SCHEMA_VERSION,
};
use crate::scheme::{ClassificationScheme, Extra, MetaResearchArea, Violation};

/// How a publication entered the review.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CollectionType {
    /// Found by the search itself.
    Included,
    /// Reached through the references of an included publication.
    IncludedByReference,
}

/// What the publication does with a classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Contribution {
    ProposesNew,
    UsesExisting,
    ExtendsExisting,
}

/// One row of the data extraction form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogEntry {
    pub doi: String,
    pub collection_type: CollectionType,
    pub contribution: Contribution,
    pub area: MetaResearchArea,
    #[serde(default)]
    pub scheme_ids: Vec<String>,
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
    /// The classes as printed in the publication, before structuring.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes_text: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

impl CatalogEntry {
    pub fn new(doi: impl Into<String>, area: MetaResearchArea, year: i32) -> Self {
        CatalogEntry {
            doi: doi.into(),
            collection_type: CollectionType::Included,
            contribution: Contribution::ProposesNew,
            area,
            scheme_ids: Vec::new(),
            year,
            venue: None,
            classes_text: None,
            extra: Extra::new(),
        }
    }
}

impl UnknownFields for CatalogEntry {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        push_extra(&self.extra, path, out);
    }
}

/// Lowercases and strips resolver prefixes: `https://doi.org/10.1/ABC` → `10.1/abc`.
pub fn normalize_doi(doi: &str) -> String {
    let lower = doi.trim().to_lowercase();
    const PREFIXES: [&str; 5] = [
        "https://doi.org/",
        "http://doi.org/",
        "https://dx.doi.org/",
        "http://dx.doi.org/",
        "doi:",
    ];
    PREFIXES
        .iter()
        .find_map(|p| lower.strip_prefix(p))
        .map(|s| s.trim_start().to_string())
        .unwrap_or(lower)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogDocument {
    pub schema_version: u32,
    pub kind: DocumentKind,
    #[serde(default)]
    pub entries: Vec<CatalogEntry>,
    #[serde(default)]
    pub schemes: Vec<ClassificationScheme>,
    #[serde(flatten)]
    pub extra: Extra,
}

impl UnknownFields for CatalogDocument {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        push_extra(&self.extra, path, out);
        self.entries.unknown_fields(&child(path, "entries"), out);
        self.schemes.unknown_fields(&child(path, "schemes"), out);
    }
}

/// Publications keyed by normalized DOI, with the schemes extracted from them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    schemes: Vec<ClassificationScheme>,
    extra: Extra,
}

impl Catalog {
    /// Normalizes DOIs, rejects duplicates and dangling scheme ids, and sorts
    /// entries by DOI and schemes by id.
    pub fn new(
        entries: Vec<CatalogEntry>,
        schemes: Vec<ClassificationScheme>,
    ) -> Result<Self, CatalogError> {
        Self::build(entries, schemes, Extra::new())
    }

    pub fn from_document(doc: CatalogDocument) -> Result<Self, CatalogError> {
        Self::build(doc.entries, doc.schemes, doc.extra)
    }

    fn build(
        mut entries: Vec<CatalogEntry>,
        mut schemes: Vec<ClassificationScheme>,
        extra: Extra,
    ) -> Result<Self, CatalogError> {
        let mut seen: HashMap<String, (usize, String)> = HashMap::new();
        for (i, e) in entries.iter_mut().enumerate() {
            let raw = std::mem::take(&mut e.doi);
            e.doi = normalize_doi(&raw);
            if let Some((first_index, first_raw)) = seen.get(&e.doi) {
                return Err(CatalogError::DuplicateDoi {
                    doi: e.doi.clone(),
                    first_index: *first_index,
                    first_raw: first_raw.clone(),
                    second_index: i,
                    second_raw: raw,
                });
            }
            seen.insert(e.doi.clone(), (i, raw));
        }

        let mut violations = Vec::new();
        let mut scheme_ids = HashSet::new();
        for s in &schemes {
            if !scheme_ids.insert(s.id.as_str()) {
                violations.push(Violation::DuplicateSchemeId {
                    scheme_id: s.id.clone(),
                });
            }
        }
        for e in &entries {
            for id in &e.scheme_ids {
                if !scheme_ids.contains(id.as_str()) {
                    violations.push(Violation::UnknownScheme {
                        scheme_id: id.clone(),
                    });
                }
            }
        }
        if !violations.is_empty() {
            violations.sort();
            violations.dedup();
            return Err(CatalogError::ReferentialViolation { violations });
        }

        entries.sort_by(|a, b| a.doi.cmp(&b.doi));
        schemes.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Catalog {
            entries,
            schemes,
            extra,
        })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn schemes(&self) -> &[ClassificationScheme] {
        &self.schemes
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, doi: &str) -> Option<&CatalogEntry> {
        let doi = normalize_doi(doi);
        self.entries
            .binary_search_by(|e| e.doi.cmp(&doi))
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn to_document(&self) -> CatalogDocument {
        CatalogDocument {
            schema_version: SCHEMA_VERSION,
            kind: DocumentKind::Catalog,
            entries: self.entries.clone(),
            schemes: self.schemes.clone(),
            extra: self.extra.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(&self.to_document())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GroupBy {
    Year,
    Area,
    CollectionType,
    Contribution,
}

impl fmt::Display for GroupBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupBy::Year => "year",
            GroupBy::Area => "area",
            GroupBy::CollectionType => "collectionType",
            GroupBy::Contribution => "contribution",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatRow {
    pub key: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogStats {
    pub group_by: GroupBy,
    pub rows: Vec<StatRow>,
    pub total: usize,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum GroupKey {
    Year(i32),
    Area(MetaResearchArea),
    Collection(CollectionType),
    Contribution(Contribution),
}

impl GroupKey {
    fn label(&self) -> String {
        match self {
            GroupKey::Year(y) => y.to_string(),
            GroupKey::Area(a) => a.to_string(),
            GroupKey::Collection(c) => format!("{c:?}"),
            GroupKey::Contribution(c) => format!("{c:?}"),
        }
    }
}

/// Entry counts per group, in natural key order (years ascending, enums in
/// declaration order). Groups without entries are omitted.
pub fn catalog_stats(catalog: &Catalog, group_by: GroupBy) -> CatalogStats {
    let mut counts: BTreeMap<GroupKey, usize> = BTreeMap::new();
    for e in catalog.entries() {
        let key = match group_by {
            GroupBy::Year => GroupKey::Year(e.year),
            GroupBy::Area => GroupKey::Area(e.area),
            GroupBy::CollectionType => GroupKey::Collection(e.collection_type),
            GroupBy::Contribution => GroupKey::Contribution(e.contribution),
        };
        *counts.entry(key).or_default() += 1;
    }
    CatalogStats {
        group_by,
        rows: counts
            .into_iter()
            .map(|(k, count)| StatRow {
                key: k.label(),
                count,
            })
            .collect(),
        total: catalog.len(),
    }
}
