//! Domain types for classification schemes and the mapping relation between
//! a unified scheme and the previous schemes it subsumes.
//!
//! Every value here is plain data. Construction never fails; well-formedness
//! is checked separately by [`validate_scheme`] and [`validate_mapping`],
//! which report every violation they find instead of stopping at the first.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Fields present in a document that this crate does not model. They are kept
/// so that a lenient load followed by a save loses nothing.
pub type Extra = BTreeMap<String, serde_json::Value>;

/// The five areas of meta-research used to tag catalog entries and classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MetaResearchArea {
    Methods,
    Reporting,
    Reproducibility,
    Evaluation,
    Incentives,
}

impl MetaResearchArea {
    pub const ALL: [MetaResearchArea; 5] = [
        MetaResearchArea::Methods,
        MetaResearchArea::Reporting,
        MetaResearchArea::Reproducibility,
        MetaResearchArea::Evaluation,
        MetaResearchArea::Incentives,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetaResearchArea::Methods => "Methods",
            MetaResearchArea::Reporting => "Reporting",
            MetaResearchArea::Reproducibility => "Reproducibility",
            MetaResearchArea::Evaluation => "Evaluation",
            MetaResearchArea::Incentives => "Incentives",
        }
    }
}

impl fmt::Display for MetaResearchArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown meta-research area {0:?}")]
pub struct UnknownArea(pub String);

impl FromStr for MetaResearchArea {
    type Err = UnknownArea;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetaResearchArea::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| UnknownArea(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Category,
    Class,
}

/// A class or category inside a scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassNode {
    pub id: String,
    pub label: String,
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<MetaResearchArea>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

impl ClassNode {
    pub fn new(id: impl Into<String>, label: impl Into<String>, kind: NodeKind) -> Self {
        ClassNode {
            id: id.into(),
            label: label.into(),
            kind,
            parent_id: None,
            area: None,
            description: None,
            extra: Extra::new(),
        }
    }

    pub fn class(id: impl Into<String>, label: impl Into<String>) -> Self {
        Self::new(id, label, NodeKind::Class)
    }

    pub fn category(id: impl Into<String>, label: impl Into<String>) -> Self {
        Self::new(id, label, NodeKind::Category)
    }

    pub fn with_parent(mut self, parent: impl Into<String>) -> Self {
        self.parent_id = Some(parent.into());
        self
    }

    pub fn with_area(mut self, area: MetaResearchArea) -> Self {
        self.area = Some(area);
        self
    }
}

/// Whether a scheme is the unified scheme or one of the previous schemes
/// being mapped into it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SchemeRole {
    Unified,
    Previous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationScheme {
    pub id: String,
    pub name: String,
    pub role: SchemeRole,
    pub nodes: Vec<ClassNode>,
    /// DOI of the catalog entry the scheme was extracted from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

impl ClassificationScheme {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        role: SchemeRole,
        nodes: Vec<ClassNode>,
    ) -> Self {
        ClassificationScheme {
            id: id.into(),
            name: name.into(),
            role,
            nodes,
            provenance: None,
            extra: Extra::new(),
        }
    }

    /// Shorthand for a flat unified scheme whose labels equal the ids.
    pub fn unified<I, S>(id: &str, node_ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::flat(id, SchemeRole::Unified, node_ids)
    }

    /// Shorthand for a flat previous scheme whose labels equal the ids.
    pub fn previous<I, S>(id: &str, node_ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::flat(id, SchemeRole::Previous, node_ids)
    }

    fn flat<I, S>(id: &str, role: SchemeRole, node_ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let nodes = node_ids
            .into_iter()
            .map(|n| {
                let n = n.into();
                ClassNode::class(n.clone(), n)
            })
            .collect();
        Self::new(id, id, role, nodes)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: &str) -> Option<&ClassNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.node(id).is_some()
    }
}

/// One element `(c, d)` of the mapping relation, where `d` lives in the
/// previous scheme named by `previous_scheme_id`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MappingPair {
    pub unified_node_id: String,
    pub previous_scheme_id: String,
    pub previous_node_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

impl MappingPair {
    pub fn new(
        unified_node_id: impl Into<String>,
        previous_scheme_id: impl Into<String>,
        previous_node_id: impl Into<String>,
    ) -> Self {
        MappingPair {
            unified_node_id: unified_node_id.into(),
            previous_scheme_id: previous_scheme_id.into(),
            previous_node_id: previous_node_id.into(),
            note: None,
            extra: Extra::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// The identity of a pair. Notes do not take part in it.
    pub fn key(&self) -> PairKey<'_> {
        PairKey {
            previous_scheme_id: &self.previous_scheme_id,
            previous_node_id: &self.previous_node_id,
            unified_node_id: &self.unified_node_id,
        }
    }
}

/// Ordering key of a pair: previous scheme, previous node, unified node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairKey<'a> {
    pub previous_scheme_id: &'a str,
    pub previous_node_id: &'a str,
    pub unified_node_id: &'a str,
}

/// The mapping relation of a project, materialized for all previous schemes
/// at once. Pairs are unique by [`PairKey`] and kept sorted by it.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", from = "MappingSetDocument")]
pub struct MappingSet {
    project_id: String,
    pairs: Vec<MappingPair>,
}

impl MappingSet {
    /// Builds the set. Later duplicates of a triple are dropped; the first
    /// occurrence (and its note) wins. Use [`duplicate_pairs`] beforehand if
    /// the duplicates need reporting.
    pub fn new(
        project_id: impl Into<String>,
        pairs: impl IntoIterator<Item = MappingPair>,
    ) -> Self {
        let mut set = MappingSet {
            project_id: project_id.into(),
            pairs: Vec::new(),
        };
        for p in pairs {
            set.insert(p);
        }
        set
    }

    pub fn project_id(&self) -> &str {
        &self.project_id
    }

    pub fn pairs(&self) -> &[MappingPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, key: PairKey<'_>) -> bool {
        self.pairs.binary_search_by(|p| p.key().cmp(&key)).is_ok()
    }

    /// Returns `false` if the triple was already present.
    pub fn insert(&mut self, pair: MappingPair) -> bool {
        match self.pairs.binary_search_by(|p| p.key().cmp(&pair.key())) {
            Ok(_) => false,
            Err(pos) => {
                self.pairs.insert(pos, pair);
                true
            }
        }
    }

    pub fn remove(&mut self, key: PairKey<'_>) -> Option<MappingPair> {
        self.pairs
            .binary_search_by(|p| p.key().cmp(&key))
            .ok()
            .map(|pos| self.pairs.remove(pos))
    }

    pub fn into_document(self) -> MappingSetDocument {
        MappingSetDocument {
            project_id: self.project_id,
            pairs: self.pairs,
        }
    }
}

/// The mapping as written in a file or request body: a list that may still
/// contain duplicates.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MappingSetDocument {
    #[serde(default)]
    pub project_id: String,
    #[serde(default)]
    pub pairs: Vec<MappingPair>,
}

impl From<MappingSetDocument> for MappingSet {
    fn from(doc: MappingSetDocument) -> Self {
        MappingSet::new(doc.project_id, doc.pairs)
    }
}

/// Every triple that occurs more than once in `pairs`, once each, in order of
/// second occurrence.
pub fn duplicate_pairs(pairs: &[MappingPair]) -> Vec<&MappingPair> {
    let mut seen = HashSet::new();
    let mut reported = HashSet::new();
    let mut dups = Vec::new();
    for p in pairs {
        let key = p.key();
        if !seen.insert(key) && reported.insert(key) {
            dups.push(p);
        }
    }
    dups
}

/// A single breach of a structural invariant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "camelCase")]
pub enum Violation {
    #[serde(rename_all = "camelCase")]
    EmptySchemeId {
        scheme_name: String,
    },
    #[serde(rename_all = "camelCase")]
    EmptySchemeName {
        scheme_id: String,
    },
    #[serde(rename_all = "camelCase")]
    EmptyScheme {
        scheme_id: String,
    },
    #[serde(rename_all = "camelCase")]
    EmptyNodeId {
        scheme_id: String,
        position: usize,
    },
    #[serde(rename_all = "camelCase")]
    EmptyLabel {
        scheme_id: String,
        node_id: String,
    },
    #[serde(rename_all = "camelCase")]
    DuplicateId {
        scheme_id: String,
        node_id: String,
    },
    #[serde(rename_all = "camelCase")]
    DanglingParent {
        scheme_id: String,
        node_id: String,
        parent_id: String,
    },
    #[serde(rename_all = "camelCase")]
    ParentCycle {
        scheme_id: String,
        node_id: String,
    },
    #[serde(rename_all = "camelCase")]
    ClassAsParent {
        scheme_id: String,
        node_id: String,
        parent_id: String,
    },
    #[serde(rename_all = "camelCase")]
    UnknownScheme {
        scheme_id: String,
    },
    #[serde(rename_all = "camelCase")]
    UnknownUnifiedNode {
        scheme_id: String,
        node_id: String,
    },
    #[serde(rename_all = "camelCase")]
    UnknownPreviousNode {
        scheme_id: String,
        node_id: String,
    },
    #[serde(rename_all = "camelCase")]
    DuplicatePair {
        unified_node_id: String,
        previous_scheme_id: String,
        previous_node_id: String,
    },
    #[serde(rename_all = "camelCase")]
    WrongRole {
        scheme_id: String,
        expected: SchemeRole,
    },
    #[serde(rename_all = "camelCase")]
    DuplicateSchemeId {
        scheme_id: String,
    },
    NoPreviousSchemes,
    #[serde(rename_all = "camelCase")]
    ProjectMismatch {
        expected: String,
        found: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptySchemeId { scheme_name } => {
                write!(f, "EmptySchemeId: scheme {scheme_name:?} has an empty id")
            }
            EmptySchemeName { scheme_id } => write!(f, "EmptySchemeName({scheme_id})"),
            EmptyScheme { scheme_id } => write!(f, "EmptyScheme({scheme_id}): scheme has no nodes"),
            EmptyNodeId {
                scheme_id,
                position,
            } => {
                write!(
                    f,
                    "EmptyNodeId: node #{position} of {scheme_id} has an empty id"
                )
            }
            EmptyLabel { scheme_id, node_id } => write!(f, "EmptyLabel({node_id}) in {scheme_id}"),
            DuplicateId { scheme_id, node_id } => {
                write!(f, "DuplicateId({node_id}) in {scheme_id}")
            }
            DanglingParent {
                scheme_id,
                node_id,
                parent_id,
            } => {
                write!(
                    f,
                    "DanglingParent({parent_id}) of node {node_id} in {scheme_id}"
                )
            }
            ParentCycle { scheme_id, node_id } => {
                write!(
                    f,
                    "ParentCycle: node {node_id} in {scheme_id} is its own ancestor"
                )
            }
            ClassAsParent {
                scheme_id,
                node_id,
                parent_id,
            } => write!(
                f,
                "ClassAsParent: node {node_id} in {scheme_id} has parent {parent_id} of kind Class"
            ),
            UnknownScheme { scheme_id } => write!(f, "UnknownScheme({scheme_id})"),
            UnknownUnifiedNode { scheme_id, node_id } => {
                write!(
                    f,
                    "UnknownUnifiedNode({node_id}) not in unified scheme {scheme_id}"
                )
            }
            UnknownPreviousNode { scheme_id, node_id } => {
                write!(
                    f,
                    "UnknownPreviousNode({node_id}) not in scheme {scheme_id}"
                )
            }
            DuplicatePair {
                unified_node_id,
                previous_scheme_id,
                previous_node_id,
            } => write!(
                f,
                "DuplicatePair({unified_node_id}, {previous_scheme_id}/{previous_node_id})"
            ),
            WrongRole {
                scheme_id,
                expected,
            } => {
                write!(
                    f,
                    "WrongRole: scheme {scheme_id} should have role {expected:?}"
                )
            }
            DuplicateSchemeId { scheme_id } => write!(f, "DuplicateSchemeId({scheme_id})"),
            NoPreviousSchemes => write!(f, "NoPreviousSchemes: project lists no previous scheme"),
            ProjectMismatch { expected, found } => {
                write!(
                    f,
                    "ProjectMismatch: mapping belongs to {found:?}, expected {expected:?}"
                )
            }
        }
    }
}

/// Result of a validation: empty means well-formed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationOutcome {
    pub violations: Vec<Violation>,
}

impl ValidationOutcome {
    pub fn ok() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn extend(&mut self, other: ValidationOutcome) {
        self.violations.extend(other.violations);
    }
}

impl From<Vec<Violation>> for ValidationOutcome {
    fn from(violations: Vec<Violation>) -> Self {
        ValidationOutcome { violations }
    }
}

/// Checks every node and scheme invariant of `scheme`.
pub fn validate_scheme(scheme: &ClassificationScheme) -> ValidationOutcome {
    let sid = &scheme.id;
    let mut out = Vec::new();
    if scheme.id.is_empty() {
        out.push(Violation::EmptySchemeId {
            scheme_name: scheme.name.clone(),
        });
    }
    if scheme.name.is_empty() {
        out.push(Violation::EmptySchemeName {
            scheme_id: sid.clone(),
        });
    }
    if scheme.nodes.is_empty() {
        out.push(Violation::EmptyScheme {
            scheme_id: sid.clone(),
        });
    }

    let mut by_id: HashMap<&str, &ClassNode> = HashMap::new();
    let mut duplicates = BTreeSet::new();
    for (position, node) in scheme.nodes.iter().enumerate() {
        if node.id.is_empty() {
            out.push(Violation::EmptyNodeId {
                scheme_id: sid.clone(),
                position,
            });
            continue;
        }
        if node.label.is_empty() {
            out.push(Violation::EmptyLabel {
                scheme_id: sid.clone(),
                node_id: node.id.clone(),
            });
        }
        if by_id.insert(&node.id, node).is_some() {
            duplicates.insert(node.id.as_str());
        }
    }
    out.extend(duplicates.into_iter().map(|id| Violation::DuplicateId {
        scheme_id: sid.clone(),
        node_id: id.to_string(),
    }));

    for node in &scheme.nodes {
        let Some(parent_id) = &node.parent_id else {
            continue;
        };
        match by_id.get(parent_id.as_str()) {
            None => out.push(Violation::DanglingParent {
                scheme_id: sid.clone(),
                node_id: node.id.clone(),
                parent_id: parent_id.clone(),
            }),
            Some(parent) if parent.kind == NodeKind::Class => out.push(Violation::ClassAsParent {
                scheme_id: sid.clone(),
                node_id: node.id.clone(),
                parent_id: parent_id.clone(),
            }),
            Some(_) => {}
        }
    }

    // A node lies on a cycle iff walking its parent chain leads back to it.
    let mut on_cycle = BTreeSet::new();
    for node in &scheme.nodes {
        let mut visited = HashSet::new();
        let mut cursor = node.parent_id.as_deref();
        while let Some(id) = cursor {
            if id == node.id {
                on_cycle.insert(node.id.as_str());
                break;
            }
            if !visited.insert(id) {
                break;
            }
            cursor = by_id.get(id).and_then(|p| p.parent_id.as_deref());
        }
    }
    out.extend(on_cycle.into_iter().map(|id| Violation::ParentCycle {
        scheme_id: sid.clone(),
        node_id: id.to_string(),
    }));

    out.into()
}

/// Checks that every pair resolves against the unified scheme and the given
/// previous schemes, and reports repeated triples.
pub fn validate_mapping(
    unified: &ClassificationScheme,
    previous: &[ClassificationScheme],
    pairs: &[MappingPair],
) -> ValidationOutcome {
    let mut out = Vec::new();
    let unified_ids: HashSet<&str> = unified.nodes.iter().map(|n| n.id.as_str()).collect();
    let previous_ids: HashMap<&str, HashSet<&str>> = previous
        .iter()
        .map(|s| {
            (
                s.id.as_str(),
                s.nodes.iter().map(|n| n.id.as_str()).collect(),
            )
        })
        .collect();

    let mut unknown_schemes = BTreeSet::new();
    let mut unknown_unified = BTreeSet::new();
    let mut unknown_previous = BTreeSet::new();
    for p in pairs {
        if !unified_ids.contains(p.unified_node_id.as_str()) {
            unknown_unified.insert(p.unified_node_id.as_str());
        }
        match previous_ids.get(p.previous_scheme_id.as_str()) {
            None => {
                unknown_schemes.insert(p.previous_scheme_id.as_str());
            }
            Some(ids) if !ids.contains(p.previous_node_id.as_str()) => {
                unknown_previous
                    .insert((p.previous_scheme_id.as_str(), p.previous_node_id.as_str()));
            }
            Some(_) => {}
        }
    }
    out.extend(
        unknown_schemes
            .into_iter()
            .map(|s| Violation::UnknownScheme {
                scheme_id: s.to_string(),
            }),
    );
    out.extend(
        unknown_unified
            .into_iter()
            .map(|n| Violation::UnknownUnifiedNode {
                scheme_id: unified.id.clone(),
                node_id: n.to_string(),
            }),
    );
    out.extend(
        unknown_previous
            .into_iter()
            .map(|(s, n)| Violation::UnknownPreviousNode {
                scheme_id: s.to_string(),
                node_id: n.to_string(),
            }),
    );
    out.extend(
        duplicate_pairs(pairs)
            .into_iter()
            .map(|p| Violation::DuplicatePair {
                unified_node_id: p.unified_node_id.clone(),
                previous_scheme_id: p.previous_scheme_id.clone(),
                previous_node_id: p.previous_node_id.clone(),
            }),
    );
    out.into()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scheme(nodes: Vec<ClassNode>) -> ClassificationScheme {
        ClassificationScheme::new("s", "Scheme", SchemeRole::Previous, nodes)
    }

    #[test]
    fn minimal_scheme_is_valid() {
        let s = scheme(vec![ClassNode::class("c1", "Validation Research")]);
        assert!(validate_scheme(&s).is_ok());
    }

    #[test]
    fn duplicate_ids_are_reported_once() {
        let s = scheme(vec![
            ClassNode::class("c1", "A"),
            ClassNode::class("c1", "B"),
            ClassNode::class("c1", "C"),
        ]);
        assert_eq!(
            validate_scheme(&s).violations,
            vec![Violation::DuplicateId {
                scheme_id: "s".into(),
                node_id: "c1".into()
            }]
        );
    }

    #[test]
    fn dangling_parent() {
        let s = scheme(vec![ClassNode::class("c1", "A").with_parent("c9")]);
        assert_eq!(
            validate_scheme(&s).violations,
            vec![Violation::DanglingParent {
                scheme_id: "s".into(),
                node_id: "c1".into(),
                parent_id: "c9".into()
            }]
        );
    }

    #[test]
    fn parent_cycles_name_every_member() {
        let s = scheme(vec![
            ClassNode::category("a", "A").with_parent("b"),
            ClassNode::category("b", "B").with_parent("a"),
            ClassNode::category("c", "C").with_parent("a"),
            ClassNode::category("d", "D").with_parent("d"),
        ]);
        let v = validate_scheme(&s).violations;
        let cyc: Vec<_> = v
            .iter()
            .filter_map(|v| match v {
                Violation::ParentCycle { node_id, .. } => Some(node_id.as_str()),
                _ => None,
            })
            .collect();
        assert_eq!(cyc, ["a", "b", "d"]);
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn classes_cannot_parent() {
        let s = scheme(vec![
            ClassNode::class("leaf", "Leaf"),
            ClassNode::class("below", "Below").with_parent("leaf"),
            ClassNode::category("cat", "Cat"),
            ClassNode::class("ok", "Ok").with_parent("cat"),
            ClassNode::category("sub", "Sub").with_parent("cat"),
        ]);
        assert_eq!(
            validate_scheme(&s).violations,
            vec![Violation::ClassAsParent {
                scheme_id: "s".into(),
                node_id: "below".into(),
                parent_id: "leaf".into()
            }]
        );
    }

    #[test]
    fn labels_may_repeat_but_not_be_empty() {
        let s = scheme(vec![
            ClassNode::class("a", "Evaluation"),
            ClassNode::class("b", "Evaluation"),
            ClassNode::class("c", ""),
        ]);
        assert_eq!(
            validate_scheme(&s).violations,
            vec![Violation::EmptyLabel {
                scheme_id: "s".into(),
                node_id: "c".into()
            }]
        );
    }

    #[test]
    fn empty_scheme_is_flagged() {
        let s = scheme(vec![]);
        assert!(matches!(
            validate_scheme(&s).violations[..],
            [Violation::EmptyScheme { .. }]
        ));
    }

    #[test]
    fn mapping_checks() {
        let c = ClassificationScheme::unified("C", ["c1", "c2"]);
        let t = ClassificationScheme::previous("T1", ["d1", "d2"]);
        let prev = [t];
        assert!(validate_mapping(&c, &prev, &[]).is_ok());

        let pairs = vec![
            MappingPair::new("c1", "T1", "d1"),
            MappingPair::new("c1", "T9", "d1"),
            MappingPair::new("c7", "T1", "d2"),
            MappingPair::new("c2", "T1", "d5"),
            MappingPair::new("c1", "T1", "d1").with_note("again"),
        ];
        let v = validate_mapping(&c, &prev, &pairs).violations;
        assert_eq!(
            v,
            vec![
                Violation::UnknownScheme {
                    scheme_id: "T9".into()
                },
                Violation::UnknownUnifiedNode {
                    scheme_id: "C".into(),
                    node_id: "c7".into()
                },
                Violation::UnknownPreviousNode {
                    scheme_id: "T1".into(),
                    node_id: "d5".into()
                },
                Violation::DuplicatePair {
                    unified_node_id: "c1".into(),
                    previous_scheme_id: "T1".into(),
                    previous_node_id: "d1".into()
                },
            ]
        );
    }

    #[test]
    fn duplicates_collapse_on_load() {
        let raw = vec![
            MappingPair::new("c1", "T1", "d1").with_note("first"),
            MappingPair::new("c1", "T1", "d2"),
            MappingPair::new("c1", "T1", "d1").with_note("second"),
        ];
        // Oracle: number of distinct triples by plain set insertion.
        let distinct: HashSet<_> = raw
            .iter()
            .map(|p| {
                (
                    &p.unified_node_id,
                    &p.previous_scheme_id,
                    &p.previous_node_id,
                )
            })
            .collect();
        let set = MappingSet::new("p", raw.clone());
        assert_eq!(set.len(), distinct.len());
        assert_eq!(set.pairs()[0].note.as_deref(), Some("first"));
        assert_eq!(duplicate_pairs(&raw).len(), 1);
    }

    #[test]
    fn area_parsing_is_closed() {
        for a in MetaResearchArea::ALL {
            assert_eq!(a.as_str().parse::<MetaResearchArea>().unwrap(), a);
        }
        assert!("Teaching".parse::<MetaResearchArea>().is_err());
        assert!("methods".parse::<MetaResearchArea>().is_err());
        assert!(serde_json::from_str::<MetaResearchArea>("\"Funding\"").is_err());
    }

    #[test]
    fn mapping_set_insert_remove() {
        let mut set = MappingSet::new("p", []);
        assert!(set.insert(MappingPair::new("c1", "T", "d1")));
        assert!(!set.insert(MappingPair::new("c1", "T", "d1")));
        let key = PairKey {
            previous_scheme_id: "T",
            previous_node_id: "d1",
            unified_node_id: "c1",
        };
        assert!(set.contains(key));
        assert!(set.remove(key).is_some());
        assert!(set.is_empty());
    }
}
