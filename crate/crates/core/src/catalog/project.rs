use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{
    child, push_extra, to_canonical_json, CatalogError, DocumentKind, UnknownFields, SCHEMA_VERSION,
};
use crate::metrics::{metric_report, MetricError, MetricReport, Thresholds};
use crate::scheme::{
    validate_mapping, validate_scheme, ClassificationScheme, Extra, MappingPair, MappingSet,
    SchemeRole, ValidationOutcome, Violation,
};

/// A unification project: the unified scheme, the previous schemes mapped
/// into it, the mapping itself and the pass thresholds. `revision` counts
/// persisted changes.
#[derive(Debug, Clone, PartialEq)]
pub struct Project {
    pub id: String,
    pub revision: u64,
    pub thresholds: Thresholds,
    pub unified: ClassificationScheme,
    pub previous: Vec<ClassificationScheme>,
    pub mapping: MappingSet,
    pub extra: Extra,
}

/// A project file as written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectDocument {
    pub schema_version: u32,
    pub kind: DocumentKind,
    pub id: String,
    #[serde(default)]
    pub revision: u64,
    #[serde(default)]
    pub thresholds: Thresholds,
    pub unified: ClassificationScheme,
    #[serde(default)]
    pub previous: Vec<ClassificationScheme>,
    #[serde(default)]
    pub mapping: Vec<MappingPair>,
    #[serde(flatten)]
    pub extra: Extra,
}

impl UnknownFields for ProjectDocument {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        push_extra(&self.extra, path, out);
        self.unified.unknown_fields(&child(path, "unified"), out);
        self.previous.unknown_fields(&child(path, "previous"), out);
        self.mapping.unknown_fields(&child(path, "mapping"), out);
    }
}

/// Listing entry for a project.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectSummary {
    pub id: String,
    pub revision: u64,
    pub unified_scheme_id: String,
    pub previous_scheme_ids: Vec<String>,
    pub pair_count: usize,
}

fn validate_parts(
    unified: &ClassificationScheme,
    previous: &[ClassificationScheme],
    pairs: &[MappingPair],
) -> ValidationOutcome {
    let mut out = validate_scheme(unified);
    if unified.role != SchemeRole::Unified {
        out.violations.push(Violation::WrongRole {
            scheme_id: unified.id.clone(),
            expected: SchemeRole::Unified,
        });
    }
    if previous.is_empty() {
        out.violations.push(Violation::NoPreviousSchemes);
    }
    let mut ids = HashSet::from([unified.id.as_str()]);
    for t in previous {
        out.extend(validate_scheme(t));
        if t.role != SchemeRole::Previous {
            out.violations.push(Violation::WrongRole {
                scheme_id: t.id.clone(),
                expected: SchemeRole::Previous,
            });
        }
        if !ids.insert(t.id.as_str()) {
            out.violations.push(Violation::DuplicateSchemeId {
                scheme_id: t.id.clone(),
            });
        }
    }
    out.extend(validate_mapping(unified, previous, pairs));
    out
}

fn is_dangling(v: &Violation) -> bool {
    matches!(
        v,
        Violation::UnknownScheme { .. }
            | Violation::UnknownUnifiedNode { .. }
            | Violation::UnknownPreviousNode { .. }
            | Violation::DanglingParent { .. }
    )
}

impl ProjectDocument {
    /// Every violation, including pairs listed more than once.
    pub fn validate(&self) -> ValidationOutcome {
        validate_parts(&self.unified, &self.previous, &self.mapping)
    }

    /// Collapses duplicate pairs. Fails if any id does not resolve.
    pub fn into_project(self) -> Result<Project, CatalogError> {
        let dangling: Vec<Violation> = self
            .validate()
            .violations
            .into_iter()
            .filter(is_dangling)
            .collect();
        if !dangling.is_empty() {
            return Err(CatalogError::ReferentialViolation {
                violations: dangling,
            });
        }
        Ok(Project {
            mapping: MappingSet::new(self.id.clone(), self.mapping),
            id: self.id,
            revision: self.revision,
            thresholds: self.thresholds,
            unified: self.unified,
            previous: self.previous,
            extra: self.extra,
        })
    }
}

impl Project {
    pub fn new(
        id: impl Into<String>,
        unified: ClassificationScheme,
        previous: Vec<ClassificationScheme>,
        pairs: impl IntoIterator<Item = MappingPair>,
    ) -> Self {
        let id = id.into();
        Project {
            mapping: MappingSet::new(id.clone(), pairs),
            id,
            revision: 0,
            thresholds: Thresholds::default(),
            unified,
            previous,
            extra: Extra::new(),
        }
    }

    pub fn validate(&self) -> ValidationOutcome {
        validate_parts(&self.unified, &self.previous, self.mapping.pairs())
    }

    /// Checks a replacement mapping against this project's schemes.
    pub fn validate_mapping_candidate(
        &self,
        project_id: &str,
        pairs: &[MappingPair],
    ) -> ValidationOutcome {
        let mut out = validate_mapping(&self.unified, &self.previous, pairs);
        if !project_id.is_empty() && project_id != self.id {
            out.violations.insert(
                0,
                Violation::ProjectMismatch {
                    expected: self.id.clone(),
                    found: project_id.to_string(),
                },
            );
        }
        out
    }

    pub fn metric_report(&self) -> Result<MetricReport, MetricError> {
        self.metric_report_with(&self.thresholds)
    }

    pub fn metric_report_with(&self, thresholds: &Thresholds) -> Result<MetricReport, MetricError> {
        metric_report(&self.unified, &self.previous, &self.mapping, thresholds)
    }

    pub fn summary(&self) -> ProjectSummary {
        ProjectSummary {
            id: self.id.clone(),
            revision: self.revision,
            unified_scheme_id: self.unified.id.clone(),
            previous_scheme_ids: self.previous.iter().map(|t| t.id.clone()).collect(),
            pair_count: self.mapping.len(),
        }
    }

    pub fn to_document(&self) -> ProjectDocument {
        ProjectDocument {
            schema_version: SCHEMA_VERSION,
            kind: DocumentKind::Project,
            id: self.id.clone(),
            revision: self.revision,
            thresholds: self.thresholds,
            unified: self.unified.clone(),
            previous: self.previous.clone(),
            mapping: self.mapping.pairs().to_vec(),
            extra: self.extra.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(&self.to_document())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_validate() {
        for p in fixtures::all() {
            assert!(p.validate().is_ok(), "{}: {:?}", p.id, p.validate());
        }
    }

    #[test]
    fn unknown_scheme_is_referential() {
        let mut doc = fixtures::fan().to_document();
        doc.mapping.push(MappingPair::new("c1", "T7", "d1"));
        match doc.into_project() {
            Err(CatalogError::ReferentialViolation { violations }) => assert_eq!(
                violations,
                vec![Violation::UnknownScheme {
                    scheme_id: "T7".into()
                }]
            ),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicates_are_reported_then_collapsed() {
        let mut doc = fixtures::fan().to_document();
        doc.mapping.push(MappingPair::new("c1", "T1", "d1"));
        assert!(matches!(
            doc.validate().violations[..],
            [Violation::DuplicatePair { .. }]
        ));
        let p = doc.into_project().unwrap();
        assert_eq!(p, fixtures::fan());
    }

    #[test]
    fn roles_and_empty_previous() {
        let mut p = fixtures::identity();
        p.previous[0].role = SchemeRole::Unified;
        assert!(p.validate().violations.contains(&Violation::WrongRole {
            scheme_id: "T1".into(),
            expected: SchemeRole::Previous
        }));
        let p = fixtures::no_previous();
        assert_eq!(p.validate().violations, vec![Violation::NoPreviousSchemes]);
    }

    #[test]
    fn candidate_mapping_checks_project() {
        let p = fixtures::fan();
        let v = p.validate_mapping_candidate("other", &[]);
        assert!(matches!(
            v.violations[..],
            [Violation::ProjectMismatch { .. }]
        ));
        assert!(p.validate_mapping_candidate("", &[]).is_ok());
    }
}
