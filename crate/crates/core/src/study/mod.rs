//! Evaluation of user-study results: reliability (Krippendorff's alpha),
//! correctness against a gold standard, and SUS usability scores.

mod alpha;
mod confusion;
mod sus;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

pub use alpha::{krippendorff_alpha, AlphaReport, CoincidenceMatrix};
pub use confusion::{
    annotator_correctness, correctness, majority_vote, Averages, ClassCounts, ConfusionReport,
    MajorityVote, StudyCorrectness,
};
pub use sus::{sus_batch, SusResponse, SusSummary, SUS_ITEMS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StudyError {
    #[error("at least two annotators are required, got {0}")]
    TooFewAnnotators(usize),
    #[error("duplicate unit {0:?}")]
    DuplicateUnit(String),
    #[error("duplicate annotator {0:?}")]
    DuplicateAnnotator(String),
    #[error("row for unit {unit:?} has {found} cells, expected {expected}")]
    RaggedRow {
        unit: String,
        expected: usize,
        found: usize,
    },
    #[error("empty label for unit {unit:?} by {annotator:?}")]
    EmptyLabel { unit: String, annotator: String },
    #[error("label {label:?} (unit {unit:?}) is not in the category set")]
    LabelOutsideAlphabet { unit: String, label: String },
    #[error("no unit carries two or more labels")]
    InsufficientData,
    #[error("unit {0:?} is in only one of the annotations and the gold standard")]
    UnknownUnit(String),
    #[error("nothing to score")]
    NoScoredUnits,
    #[error("SUS response has {0} items, expected 10")]
    WrongItemCount(usize),
    #[error("SUS item {item} is {value}, expected 1..=5")]
    OutOfRangeItem { item: usize, value: u8 },
    #[error("no SUS responses")]
    EmptyBatch,
}

/// Units × annotators table of category labels. Cells may be missing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationMatrix {
    units: Vec<String>,
    annotators: Vec<String>,
    /// Row-major, `units.len() * annotators.len()` cells.
    cells: Vec<Option<String>>,
    categories: BTreeSet<String>,
}

impl AnnotationMatrix {
    /// Builds a matrix from one row per unit. When `categories` is `None` the
    /// category set is the set of labels that occur.
    pub fn new(
        units: Vec<String>,
        annotators: Vec<String>,
        rows: Vec<Vec<Option<String>>>,
        categories: Option<BTreeSet<String>>,
    ) -> Result<Self, StudyError> {
        if annotators.len() < 2 {
            return Err(StudyError::TooFewAnnotators(annotators.len()));
        }
        let mut seen = HashSet::new();
        if let Some(a) = annotators.iter().find(|a| !seen.insert(a.as_str())) {
            return Err(StudyError::DuplicateAnnotator(a.clone()));
        }
        let mut seen = HashSet::new();
        if let Some(u) = units.iter().find(|u| !seen.insert(u.as_str())) {
            return Err(StudyError::DuplicateUnit(u.clone()));
        }
        if rows.len() != units.len() {
            return Err(StudyError::RaggedRow {
                unit: format!("<{} rows for {} units>", rows.len(), units.len()),
                expected: units.len(),
                found: rows.len(),
            });
        }
        let mut cells = Vec::with_capacity(units.len() * annotators.len());
        for (unit, row) in units.iter().zip(rows) {
            if row.len() != annotators.len() {
                return Err(StudyError::RaggedRow {
                    unit: unit.clone(),
                    expected: annotators.len(),
                    found: row.len(),
                });
            }
            for (annotator, cell) in annotators.iter().zip(&row) {
                if cell.as_deref() == Some("") {
                    return Err(StudyError::EmptyLabel {
                        unit: unit.clone(),
                        annotator: annotator.clone(),
                    });
                }
            }
            cells.extend(row);
        }
        let present: BTreeSet<String> = cells.iter().flatten().cloned().collect();
        let categories = match categories {
            Some(declared) => {
                for (i, cell) in cells.iter().enumerate() {
                    if let Some(label) = cell {
                        if !declared.contains(label) {
                            return Err(StudyError::LabelOutsideAlphabet {
                                unit: units[i / annotators.len()].clone(),
                                label: label.clone(),
                            });
                        }
                    }
                }
                declared
            }
            None => present,
        };
        Ok(AnnotationMatrix {
            units,
            annotators,
            cells,
            categories,
        })
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn annotators(&self) -> &[String] {
        &self.annotators
    }

    pub fn categories(&self) -> &BTreeSet<String> {
        &self.categories
    }

    /// Adds labels to the category set (e.g. gold labels nobody used).
    pub fn extend_categories<I: IntoIterator<Item = String>>(&mut self, labels: I) {
        self.categories.extend(labels);
    }

    pub fn label(&self, unit: usize, annotator: usize) -> Option<&str> {
        self.cells[unit * self.annotators.len() + annotator].as_deref()
    }

    /// The labels present for unit `unit`, in annotator order.
    pub fn unit_labels(&self, unit: usize) -> impl Iterator<Item = &str> + '_ {
        let w = self.annotators.len();
        self.cells[unit * w..(unit + 1) * w]
            .iter()
            .flatten()
            .map(String::as_str)
    }

    /// Labels given by one annotator, keyed by unit; missing cells are absent.
    pub fn annotator_labels(&self, annotator: usize) -> BTreeMap<String, String> {
        self.units
            .iter()
            .enumerate()
            .filter_map(|(u, unit)| Some((unit.clone(), self.label(u, annotator)?.to_string())))
            .collect()
    }
}

/// Reference label for each unit.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GoldStandard {
    pub labels: BTreeMap<String, String>,
}

impl GoldStandard {
    pub fn new(labels: BTreeMap<String, String>) -> Self {
        GoldStandard { labels }
    }

    pub fn get(&self, unit: &str) -> Option<&str> {
        self.labels.get(unit).map(String::as_str)
    }
}

#[cfg(test)]
pub(crate) fn matrix(rows: &[&[Option<&str>]]) -> AnnotationMatrix {
    let annotators = (0..rows[0].len()).map(|a| format!("a{a}")).collect();
    let units = (0..rows.len()).map(|u| format!("u{u}")).collect();
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|c| c.map(str::to_string)).collect())
        .collect();
    AnnotationMatrix::new(units, annotators, rows, None).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn matrix_invariants() {
        let err = AnnotationMatrix::new(vec![s("u")], vec![s("a")], vec![vec![None]], None);
        assert_eq!(err, Err(StudyError::TooFewAnnotators(1)));

        let err = AnnotationMatrix::new(
            vec![s("u")],
            vec![s("a"), s("b")],
            vec![vec![Some(s("x")), Some(s("z"))]],
            Some([s("x"), s("y")].into()),
        );
        assert!(matches!(err, Err(StudyError::LabelOutsideAlphabet { label, .. }) if label == "z"));

        let err = AnnotationMatrix::new(
            vec![s("u"), s("u")],
            vec![s("a"), s("b")],
            vec![vec![None, None], vec![None, None]],
            None,
        );
        assert_eq!(err, Err(StudyError::DuplicateUnit(s("u"))));

        let err = AnnotationMatrix::new(
            vec![s("u")],
            vec![s("a"), s("b")],
            vec![vec![Some(s(""))]],
            None,
        );
        assert!(matches!(err, Err(StudyError::RaggedRow { .. })));
    }

    #[test]
    fn missing_cells_are_not_labels() {
        let m = matrix(&[&[Some("x"), None], &[None, Some("y")]]);
        assert_eq!(m.categories().len(), 2);
        assert_eq!(m.unit_labels(0).collect::<Vec<_>>(), ["x"]);
        assert_eq!(m.annotator_labels(1).len(), 1);
    }
}
