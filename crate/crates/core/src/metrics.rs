//! Generality and appropriateness metrics of a unified scheme with respect to
//! a set of previous schemes, plus the per-node diagnostics and refinement
//! advice derived from them.
//!
//! With `C` the unified scheme, `𝒯` the previous schemes and `m` the mapping:
//!
//! * a previous node `d ∈ T` is *laconic* if at most one `c` maps to it and
//!   *complete* if at least one does;
//! * a unified node `c` is *lucid* w.r.t. `T` if it maps to at most one node
//!   of `T` and *sound* w.r.t. `T` if it maps to at least one.
//!
//! Laconicity and completeness are the fractions of laconic and complete
//! nodes over `Σ|T|`. Lucidity counts a unified node only if it is lucid
//! w.r.t. every `T` (minimum over `𝒯`); soundness counts it if it is sound
//! w.r.t. some `T` (maximum over `𝒯`). Both divide by `|C|`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fraction::Fraction;
use crate::scheme::{ClassificationScheme, MappingSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("no previous schemes: the metrics are undefined")]
    EmptyPreviousSet,
    #[error("unified scheme {scheme_id} has no nodes")]
    EmptyUnified { scheme_id: String },
    #[error("previous scheme {scheme_id} has no nodes")]
    EmptyScheme { scheme_id: String },
    #[error("pair ({unified_node_id}, {previous_scheme_id}/{previous_node_id}) does not resolve")]
    UnresolvedPair {
        unified_node_id: String,
        previous_scheme_id: String,
        previous_node_id: String,
    },
}

/// Who maps to whom, indexed by position in the schemes' node lists.
struct Incidence<'a> {
    unified: &'a ClassificationScheme,
    previous: &'a [ClassificationScheme],
    /// `previous_partners[t][d]`: unified node indices mapped onto node `d` of scheme `t`.
    previous_partners: Vec<Vec<Vec<usize>>>,
    /// `unified_partners[c][t]`: node indices of scheme `t` that `c` maps onto.
    unified_partners: Vec<Vec<Vec<usize>>>,
}

impl<'a> Incidence<'a> {
    fn build(
        unified: &'a ClassificationScheme,
        previous: &'a [ClassificationScheme],
        mapping: &MappingSet,
    ) -> Result<Self, MetricError> {
        if previous.is_empty() {
            return Err(MetricError::EmptyPreviousSet);
        }
        if let Some(t) = previous.iter().find(|t| t.is_empty()) {
            return Err(MetricError::EmptyScheme {
                scheme_id: t.id.clone(),
            });
        }

        let unified_index = index_of(unified);
        let previous_index: HashMap<&str, (usize, HashMap<&str, usize>)> = previous
            .iter()
            .enumerate()
            .map(|(t, s)| (s.id.as_str(), (t, index_of(s))))
            .collect();

        let mut previous_partners: Vec<Vec<Vec<usize>>> =
            previous.iter().map(|t| vec![Vec::new(); t.len()]).collect();
        let mut unified_partners = vec![vec![Vec::new(); previous.len()]; unified.len()];

        for p in mapping.pairs() {
            let resolved = unified_index
                .get(p.unified_node_id.as_str())
                .and_then(|&c| {
                    let (t, nodes) = previous_index.get(p.previous_scheme_id.as_str())?;
                    let d = nodes.get(p.previous_node_id.as_str())?;
                    Some((c, *t, *d))
                });
            let Some((c, t, d)) = resolved else {
                return Err(MetricError::UnresolvedPair {
                    unified_node_id: p.unified_node_id.clone(),
                    previous_scheme_id: p.previous_scheme_id.clone(),
                    previous_node_id: p.previous_node_id.clone(),
                });
            };
            previous_partners[t][d].push(c);
            unified_partners[c][t].push(d);
        }

        Ok(Incidence {
            unified,
            previous,
            previous_partners,
            unified_partners,
        })
    }

    fn require_unified(&self) -> Result<(), MetricError> {
        if self.unified.is_empty() {
            return Err(MetricError::EmptyUnified {
                scheme_id: self.unified.id.clone(),
            });
        }
        Ok(())
    }

    fn previous_total(&self) -> u64 {
        self.previous.iter().map(|t| t.len() as u64).sum()
    }

    fn count_previous(&self, pred: impl Fn(usize) -> bool) -> u64 {
        self.previous_partners
            .iter()
            .flatten()
            .filter(|partners| pred(partners.len()))
            .count() as u64
    }

    fn laconicity(&self) -> Fraction {
        frac(
            self.count_previous(|links| links <= 1),
            self.previous_total(),
        )
    }

    fn completeness(&self) -> Fraction {
        frac(
            self.count_previous(|links| links >= 1),
            self.previous_total(),
        )
    }

    fn lucid(&self, c: usize) -> bool {
        self.unified_partners[c].iter().all(|ds| ds.len() <= 1)
    }

    fn sound(&self, c: usize) -> bool {
        self.unified_partners[c].iter().any(|ds| !ds.is_empty())
    }

    fn lucidity(&self) -> Fraction {
        let n = (0..self.unified.len()).filter(|&c| self.lucid(c)).count();
        frac(n as u64, self.unified.len() as u64)
    }

    fn soundness(&self) -> Fraction {
        let n = (0..self.unified.len()).filter(|&c| self.sound(c)).count();
        frac(n as u64, self.unified.len() as u64)
    }
}

fn index_of(s: &ClassificationScheme) -> HashMap<&str, usize> {
    let mut m = HashMap::with_capacity(s.nodes.len());
    for (i, n) in s.nodes.iter().enumerate() {
        m.entry(n.id.as_str()).or_insert(i);
    }
    m
}

fn frac(n: u64, d: u64) -> Fraction {
    Fraction::new(n, d).expect("denominator checked non-zero")
}

/// Fraction of previous nodes that at most one unified node maps onto.
pub fn laconicity(
    unified: &ClassificationScheme,
    previous: &[ClassificationScheme],
    mapping: &MappingSet,
) -> Result<Fraction, MetricError> {
    Ok(Incidence::build(unified, previous, mapping)?.laconicity())
}

/// Fraction of unified nodes that map onto at most one node of every previous scheme.
pub fn lucidity(
    unified: &ClassificationScheme,
    previous: &[ClassificationScheme],
    mapping: &MappingSet,
) -> Result<Fraction, MetricError> {
    let inc = Incidence::build(unified, previous, mapping)?;
    inc.require_unified()?;
    Ok(inc.lucidity())
}

/// Fraction of previous nodes covered by at least one unified node.
pub fn completeness(
    unified: &ClassificationScheme,
    previous: &[ClassificationScheme],
    mapping: &MappingSet,
) -> Result<Fraction, MetricError> {
    Ok(Incidence::build(unified, previous, mapping)?.completeness())
}

/// Fraction of unified nodes that map into at least one previous scheme.
pub fn soundness(
    unified: &ClassificationScheme,
    previous: &[ClassificationScheme],
    mapping: &MappingSet,
) -> Result<Fraction, MetricError> {
    let inc = Incidence::build(unified, previous, mapping)?;
    inc.require_unified()?;
    Ok(inc.soundness())
}

/// Minimum value each metric must reach for a report to pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(with = "threshold_string")]
    pub laconicity: Fraction,
    #[serde(with = "threshold_string")]
    pub lucidity: Fraction,
    #[serde(with = "threshold_string")]
    pub completeness: Fraction,
    #[serde(with = "threshold_string")]
    pub soundness: Fraction,
}

impl Default for Thresholds {
    /// 0.90 for laconicity, lucidity and soundness; 0.95 for completeness.
    fn default() -> Self {
        let ninety = frac(90, 100);
        Thresholds {
            laconicity: ninety,
            lucidity: ninety,
            completeness: frac(95, 100),
            soundness: ninety,
        }
    }
}

/// Thresholds are written as decimals (`"0.95"`) when the denominator is a
/// power of ten and as `"n/d"` otherwise.
mod threshold_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::fraction::Fraction;

    pub fn serialize<S: Serializer>(f: &Fraction, s: S) -> Result<S::Ok, S::Error> {
        let mut d = f.denominator();
        let mut places = 0;
        while d.is_multiple_of(10) {
            d /= 10;
            places += 1;
        }
        if d == 1 {
            s.serialize_str(&f.to_decimal(places))
        } else {
            s.serialize_str(&f.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Fraction, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Metric {
    Laconicity,
    Lucidity,
    Completeness,
    Soundness,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Laconicity,
        Metric::Lucidity,
        Metric::Completeness,
        Metric::Soundness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Laconicity => "laconicity",
            Metric::Lucidity => "lucidity",
            Metric::Completeness => "completeness",
            Metric::Soundness => "soundness",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricValue {
    pub value: Fraction,
    pub threshold: Fraction,
    pub passed: bool,
}

impl MetricValue {
    fn new(value: Fraction, threshold: Fraction) -> Self {
        MetricValue {
            value,
            threshold,
            passed: value >= threshold,
        }
    }
}

/// Link counts and predicate values of one previous node w.r.t. its own scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PreviousNodeResult {
    pub scheme_id: String,
    pub node_id: String,
    pub link_count: usize,
    pub laconic: bool,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PerSchemeLinks {
    pub previous_scheme_id: String,
    pub link_count: usize,
    pub lucid: bool,
    pub sound: bool,
}

/// Predicates of one unified node, per previous scheme and aggregated
/// (lucid = all per-scheme lucid, sound = any per-scheme sound).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UnifiedNodeResult {
    pub scheme_id: String,
    pub node_id: String,
    pub link_count: usize,
    pub per_scheme: Vec<PerSchemeLinks>,
    pub lucid: bool,
    pub sound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "side", rename_all = "camelCase")]
pub enum NodeDiagnostic {
    Unified(UnifiedNodeResult),
    Previous(PreviousNodeResult),
}

impl NodeDiagnostic {
    pub fn scheme_id(&self) -> &str {
        match self {
            NodeDiagnostic::Unified(u) => &u.scheme_id,
            NodeDiagnostic::Previous(p) => &p.scheme_id,
        }
    }

    pub fn node_id(&self) -> &str {
        match self {
            NodeDiagnostic::Unified(u) => &u.node_id,
            NodeDiagnostic::Previous(p) => &p.node_id,
        }
    }
}

/// A refinement suggestion derived from a failing node predicate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Advice {
    /// A previous node is not laconic: the unified nodes sharing it may be redundant.
    #[serde(rename_all = "camelCase")]
    MergeCandidate {
        previous_scheme_id: String,
        previous_node_id: String,
        unified_node_ids: Vec<String>,
    },
    /// A unified node is not lucid w.r.t. one previous scheme: it may be too coarse.
    #[serde(rename_all = "camelCase")]
    SplitCandidate {
        unified_scheme_id: String,
        unified_node_id: String,
        previous_scheme_id: String,
        previous_node_ids: Vec<String>,
    },
    /// A previous node is not complete: nothing in the unified scheme covers it.
    #[serde(rename_all = "camelCase")]
    MissingCoverage {
        previous_scheme_id: String,
        previous_node_id: String,
    },
    /// A unified node is not sound: unnecessary, or a deliberate novel class
    /// that the user study has to justify.
    #[serde(rename_all = "camelCase")]
    UnsoundClass {
        unified_scheme_id: String,
        unified_node_id: String,
    },
}

impl Advice {
    /// `(schemeId, nodeId)` of the node the advice is about.
    pub fn subject(&self) -> (&str, &str) {
        match self {
            Advice::MergeCandidate {
                previous_scheme_id,
                previous_node_id,
                ..
            }
            | Advice::MissingCoverage {
                previous_scheme_id,
                previous_node_id,
            } => (previous_scheme_id, previous_node_id),
            Advice::SplitCandidate {
                unified_scheme_id,
                unified_node_id,
                ..
            }
            | Advice::UnsoundClass {
                unified_scheme_id,
                unified_node_id,
            } => (unified_scheme_id, unified_node_id),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Advice::MergeCandidate { .. } => 0,
            Advice::SplitCandidate { .. } => 1,
            Advice::MissingCoverage { .. } => 2,
            Advice::UnsoundClass { .. } => 3,
        }
    }

    fn sort_key(&self) -> (&str, &str, u8, &str) {
        let (s, n) = self.subject();
        let extra = match self {
            Advice::SplitCandidate {
                previous_scheme_id, ..
            } => previous_scheme_id.as_str(),
            _ => "",
        };
        (s, n, self.rank(), extra)
    }
}

impl fmt::Display for Advice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Advice::MergeCandidate {
                previous_scheme_id,
                previous_node_id,
                unified_node_ids,
            } => write!(
                f,
                "merge candidate: unified nodes {{{}}} all map to {previous_scheme_id}/{previous_node_id}",
                unified_node_ids.join(", ")
            ),
            Advice::SplitCandidate {
                unified_node_id,
                previous_scheme_id,
                previous_node_ids,
                ..
            } => write!(
                f,
                "split candidate: {unified_node_id} maps to {{{}}} in {previous_scheme_id}",
                previous_node_ids.join(", ")
            ),
            Advice::MissingCoverage {
                previous_scheme_id,
                previous_node_id,
            } => write!(
                f,
                "missing coverage: {previous_scheme_id}/{previous_node_id} has no unified counterpart"
            ),
            Advice::UnsoundClass {
                unified_node_id, ..
            } => write!(
                f,
                "unnecessary or novel class: {unified_node_id} maps to no previous scheme; flag for user-study justification"
            ),
        }
    }
}

/// All four metrics with threshold checks, node diagnostics and advice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricReport {
    pub project_id: String,
    pub unified_scheme_id: String,
    pub previous_scheme_ids: Vec<String>,
    pub laconicity: MetricValue,
    pub lucidity: MetricValue,
    pub completeness: MetricValue,
    pub soundness: MetricValue,
    pub passed: bool,
    pub diagnostics: Vec<NodeDiagnostic>,
    pub advice: Vec<Advice>,
}

impl MetricReport {
    pub fn metric(&self, m: Metric) -> &MetricValue {
        match m {
            Metric::Laconicity => &self.laconicity,
            Metric::Lucidity => &self.lucidity,
            Metric::Completeness => &self.completeness,
            Metric::Soundness => &self.soundness,
        }
    }

    pub fn failed_metrics(&self) -> Vec<Metric> {
        Metric::ALL
            .into_iter()
            .filter(|&m| !self.metric(m).passed)
            .collect()
    }
}

/// Computes the full report for a project.
pub fn metric_report(
    unified: &ClassificationScheme,
    previous: &[ClassificationScheme],
    mapping: &MappingSet,
    thresholds: &Thresholds,
) -> Result<MetricReport, MetricError> {
    let inc = Incidence::build(unified, previous, mapping)?;
    inc.require_unified()?;

    let laconicity = MetricValue::new(inc.laconicity(), thresholds.laconicity);
    let lucidity = MetricValue::new(inc.lucidity(), thresholds.lucidity);
    let completeness = MetricValue::new(inc.completeness(), thresholds.completeness);
    let soundness = MetricValue::new(inc.soundness(), thresholds.soundness);
    let passed = [&laconicity, &lucidity, &completeness, &soundness]
        .iter()
        .all(|m| m.passed);

    let mut diagnostics = Vec::with_capacity(unified.len() + inc.previous_total() as usize);
    let mut advice = Vec::new();

    for (c, node) in unified.nodes.iter().enumerate() {
        let mut per_scheme = Vec::with_capacity(previous.len());
        for (t, scheme) in previous.iter().enumerate() {
            let ds = &inc.unified_partners[c][t];
            per_scheme.push(PerSchemeLinks {
                previous_scheme_id: scheme.id.clone(),
                link_count: ds.len(),
                lucid: ds.len() <= 1,
                sound: !ds.is_empty(),
            });
            if ds.len() > 1 {
                let mut ids: Vec<String> = ds.iter().map(|&d| scheme.nodes[d].id.clone()).collect();
                ids.sort();
                advice.push(Advice::SplitCandidate {
                    unified_scheme_id: unified.id.clone(),
                    unified_node_id: node.id.clone(),
                    previous_scheme_id: scheme.id.clone(),
                    previous_node_ids: ids,
                });
            }
        }
        let sound = inc.sound(c);
        if !sound {
            advice.push(Advice::UnsoundClass {
                unified_scheme_id: unified.id.clone(),
                unified_node_id: node.id.clone(),
            });
        }
        diagnostics.push(NodeDiagnostic::Unified(UnifiedNodeResult {
            scheme_id: unified.id.clone(),
            node_id: node.id.clone(),
            link_count: per_scheme.iter().map(|p| p.link_count).sum(),
            lucid: inc.lucid(c),
            sound,
            per_scheme,
        }));
    }

    for (t, scheme) in previous.iter().enumerate() {
        for (d, node) in scheme.nodes.iter().enumerate() {
            let cs = &inc.previous_partners[t][d];
            if cs.len() > 1 {
                let mut ids: Vec<String> =
                    cs.iter().map(|&c| unified.nodes[c].id.clone()).collect();
                ids.sort();
                advice.push(Advice::MergeCandidate {
                    previous_scheme_id: scheme.id.clone(),
                    previous_node_id: node.id.clone(),
                    unified_node_ids: ids,
                });
            }
            if cs.is_empty() {
                advice.push(Advice::MissingCoverage {
                    previous_scheme_id: scheme.id.clone(),
                    previous_node_id: node.id.clone(),
                });
            }
            diagnostics.push(NodeDiagnostic::Previous(PreviousNodeResult {
                scheme_id: scheme.id.clone(),
                node_id: node.id.clone(),
                link_count: cs.len(),
                laconic: cs.len() <= 1,
                complete: !cs.is_empty(),
            }));
        }
    }

    diagnostics.sort_by(|a, b| (a.scheme_id(), a.node_id()).cmp(&(b.scheme_id(), b.node_id())));
    advice.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));

    Ok(MetricReport {
        project_id: mapping.project_id().to_string(),
        unified_scheme_id: unified.id.clone(),
        previous_scheme_ids: previous.iter().map(|t| t.id.clone()).collect(),
        laconicity,
        lucidity,
        completeness,
        soundness,
        passed,
        diagnostics,
        advice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scheme::MappingPair;

    fn f(n: u64, d: u64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn all(c: &ClassificationScheme, ts: &[ClassificationScheme], m: &MappingSet) -> [Fraction; 4] {
        [
            laconicity(c, ts, m).unwrap(),
            lucidity(c, ts, m).unwrap(),
            completeness(c, ts, m).unwrap(),
            soundness(c, ts, m).unwrap(),
        ]
    }

    #[test]
    fn identity_fixture() {
        let p = fixtures::identity();
        let v = all(&p.unified, &p.previous, &p.mapping);
        assert_eq!(v, [Fraction::ONE; 4]);
        let r = metric_report(&p.unified, &p.previous, &p.mapping, &Thresholds::default()).unwrap();
        assert!(r.advice.is_empty());
        assert!(r.passed);
    }

    #[test]
    fn fan_fixture_exact_parts() {
        let p = fixtures::fan();
        let [l, u, c, s] = all(&p.unified, &p.previous, &p.mapping);
        assert_eq!((l.numerator(), l.denominator()), (2, 3));
        assert_eq!((u.numerator(), u.denominator()), (1, 2));
        assert_eq!((c.numerator(), c.denominator()), (2, 3));
        assert_eq!((s.numerator(), s.denominator()), (2, 2));
    }

    #[test]
    fn two_scheme_fixture() {
        let p = fixtures::two_scheme();
        let [_, u, _, s] = all(&p.unified, &p.previous, &p.mapping);
        assert_eq!(u, Fraction::ZERO);
        assert_eq!(s, Fraction::ONE);
    }

    #[test]
    fn empty_mapping() {
        let p = fixtures::fan();
        let m = MappingSet::new("fan", []);
        assert_eq!(
            all(&p.unified, &p.previous, &m),
            [Fraction::ONE, Fraction::ONE, Fraction::ZERO, Fraction::ZERO]
        );
    }

    #[test]
    fn errors() {
        let c = ClassificationScheme::unified("C", ["c1"]);
        let m = MappingSet::new("p", []);
        assert_eq!(laconicity(&c, &[], &m), Err(MetricError::EmptyPreviousSet));
        assert_eq!(soundness(&c, &[], &m), Err(MetricError::EmptyPreviousSet));
        let empty_t = ClassificationScheme::previous("T", Vec::<String>::new());
        assert_eq!(
            completeness(&c, std::slice::from_ref(&empty_t), &m),
            Err(MetricError::EmptyScheme {
                scheme_id: "T".into()
            })
        );
        let t = ClassificationScheme::previous("T", ["d"]);
        let empty_c = ClassificationScheme::unified("C", Vec::<String>::new());
        assert!(laconicity(&empty_c, std::slice::from_ref(&t), &m).is_ok());
        assert_eq!(
            lucidity(&empty_c, std::slice::from_ref(&t), &m),
            Err(MetricError::EmptyUnified {
                scheme_id: "C".into()
            })
        );
        let bad = MappingSet::new("p", [MappingPair::new("c1", "T", "zz")]);
        assert!(matches!(
            laconicity(&c, std::slice::from_ref(&t), &bad),
            Err(MetricError::UnresolvedPair { .. })
        ));
    }

    #[test]
    fn fan_advice() {
        let p = fixtures::fan();
        let r = metric_report(&p.unified, &p.previous, &p.mapping, &Thresholds::default()).unwrap();
        assert_eq!(
            r.advice,
            vec![
                Advice::SplitCandidate {
                    unified_scheme_id: "C".into(),
                    unified_node_id: "c1".into(),
                    previous_scheme_id: "T1".into(),
                    previous_node_ids: vec!["d1".into(), "d2".into()],
                },
                Advice::MergeCandidate {
                    previous_scheme_id: "T1".into(),
                    previous_node_id: "d2".into(),
                    unified_node_ids: vec!["c1".into(), "c2".into()],
                },
                Advice::MissingCoverage {
                    previous_scheme_id: "T1".into(),
                    previous_node_id: "d3".into(),
                },
            ]
        );
        assert_eq!(
            r.failed_metrics(),
            [Metric::Laconicity, Metric::Lucidity, Metric::Completeness]
        );
        let custom = Thresholds {
            laconicity: Fraction::ZERO,
            lucidity: Fraction::ZERO,
            completeness: f(95, 100),
            soundness: Fraction::ZERO,
        };
        let r = metric_report(&p.unified, &p.previous, &p.mapping, &custom).unwrap();
        assert_eq!(r.failed_metrics(), [Metric::Completeness]);
    }

    #[test]
    fn unsound_advice() {
        let c = ClassificationScheme::unified("C", ["c1", "novel"]);
        let t = ClassificationScheme::previous("T", ["d1"]);
        let m = MappingSet::new("p", [MappingPair::new("c1", "T", "d1")]);
        let r = metric_report(&c, &[t], &m, &Thresholds::default()).unwrap();
        assert_eq!(
            r.advice,
            vec![Advice::UnsoundClass {
                unified_scheme_id: "C".into(),
                unified_node_id: "novel".into()
            }]
        );
        assert_eq!(r.soundness.value, f(1, 2));
    }

    #[test]
    fn threshold_json() {
        let t = Thresholds::default();
        let j = serde_json::to_string(&t).unwrap();
        assert_eq!(
            j,
            r#"{"laconicity":"0.90","lucidity":"0.90","completeness":"0.95","soundness":"0.90"}"#
        );
        let back: Thresholds = serde_json::from_str(&j).unwrap();
        assert_eq!(back, t);
        let odd: Thresholds = serde_json::from_str(
            r#"{"laconicity":"2/3","lucidity":"1","completeness":"0.95","soundness":"0"}"#,
        )
        .unwrap();
        assert_eq!(serde_json::to_value(odd).unwrap()["laconicity"], "2/3");
    }
}
