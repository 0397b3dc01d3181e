//! One-vs-rest confusion counts against a gold standard.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{AnnotationMatrix, GoldStandard, StudyError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    /// `None` when the denominator is zero.
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

impl ClassCounts {
    fn from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ClassCounts {
            tp,
            fp,
            fn_,
            tn,
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
            f1: ratio(2 * tp, 2 * tp + fp + fn_),
        }
    }
}

fn ratio(n: u64, d: u64) -> Option<f64> {
    (d != 0).then(|| n as f64 / d as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Averages {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    /// Classes left out of each macro average because the per-class value is
    /// undefined. Always zero for micro averages.
    pub skipped_precision: usize,
    pub skipped_recall: usize,
    pub skipped_f1: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfusionReport {
    pub scored: u64,
    pub correct: u64,
    pub accuracy: f64,
    pub per_class: BTreeMap<String, ClassCounts>,
    pub micro: Averages,
    #[serde(rename = "macro")]
    pub macro_: Averages,
}

/// Scores `predictions` (unit → label) against `gold`, one-vs-rest for every
/// class in `alphabet`.
pub fn correctness(
    predictions: &BTreeMap<String, String>,
    gold: &GoldStandard,
    alphabet: &BTreeSet<String>,
) -> Result<ConfusionReport, StudyError> {
    for (unit, label) in &gold.labels {
        if !alphabet.contains(label) {
            return Err(StudyError::LabelOutsideAlphabet {
                unit: unit.clone(),
                label: label.clone(),
            });
        }
    }
    let mut decisions = Vec::with_capacity(predictions.len());
    for (unit, predicted) in predictions {
        let truth = gold
            .get(unit)
            .ok_or_else(|| StudyError::UnknownUnit(unit.clone()))?;
        if !alphabet.contains(predicted) {
            return Err(StudyError::LabelOutsideAlphabet {
                unit: unit.clone(),
                label: predicted.clone(),
            });
        }
        decisions.push((predicted.as_str(), truth));
    }
    if decisions.is_empty() {
        return Err(StudyError::NoScoredUnits);
    }

    let scored = decisions.len() as u64;
    let correct = decisions.iter().filter(|(p, t)| p == t).count() as u64;

    let mut per_class = BTreeMap::new();
    let (mut tp_all, mut fp_all, mut fn_all) = (0, 0, 0);
    for class in alphabet {
        let (mut tp, mut fp, mut fn_) = (0, 0, 0);
        for &(p, t) in &decisions {
            match (p == class, t == class) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
        tp_all += tp;
        fp_all += fp;
        fn_all += fn_;
        per_class.insert(
            class.clone(),
            ClassCounts::from_counts(tp, fp, fn_, scored - tp - fp - fn_),
        );
    }

    let micro = Averages {
        precision: ratio(tp_all, tp_all + fp_all),
        recall: ratio(tp_all, tp_all + fn_all),
        f1: ratio(2 * tp_all, 2 * tp_all + fp_all + fn_all),
        skipped_precision: 0,
        skipped_recall: 0,
        skipped_f1: 0,
    };
    let macro_mean = |get: fn(&ClassCounts) -> Option<f64>| {
        let defined: Vec<f64> = per_class.values().filter_map(get).collect();
        let skipped = per_class.len() - defined.len();
        let mean =
            (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
        (mean, skipped)
    };
    let (precision, skipped_precision) = macro_mean(|c| c.precision);
    let (recall, skipped_recall) = macro_mean(|c| c.recall);
    let (f1, skipped_f1) = macro_mean(|c| c.f1);

    Ok(ConfusionReport {
        scored,
        correct,
        accuracy: correct as f64 / scored as f64,
        per_class,
        micro,
        macro_: Averages {
            precision,
            recall,
            f1,
            skipped_precision,
            skipped_recall,
            skipped_f1,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MajorityVote {
    pub labels: BTreeMap<String, String>,
    /// Units whose top count was shared; the lexicographically smallest
    /// label among the tied ones was taken.
    pub ties: Vec<String>,
}

/// Most frequent label per unit. Units without any label are skipped.
pub fn majority_vote(matrix: &AnnotationMatrix) -> MajorityVote {
    let mut labels = BTreeMap::new();
    let mut ties = Vec::new();
    for (u, unit) in matrix.units().iter().enumerate() {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for l in matrix.unit_labels(u) {
            *counts.entry(l).or_default() += 1;
        }
        let Some(&top) = counts.values().max() else {
            continue;
        };
        let mut winners = counts.iter().filter(|(_, &c)| c == top).map(|(l, _)| *l);
        let first = winners.next().expect("max exists");
        if winners.next().is_some() {
            ties.push(unit.clone());
        }
        labels.insert(unit.clone(), first.to_string());
    }
    MajorityVote { labels, ties }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StudyCorrectness {
    pub per_annotator: BTreeMap<String, ConfusionReport>,
    /// Annotators who labelled no unit.
    pub unscored_annotators: Vec<String>,
    pub majority: ConfusionReport,
    pub majority_ties: Vec<String>,
}

/// Correctness of every annotator and of the majority-vote labelling.
pub fn annotator_correctness(
    matrix: &AnnotationMatrix,
    gold: &GoldStandard,
) -> Result<StudyCorrectness, StudyError> {
    if let Some(unit) = gold.labels.keys().find(|u| !matrix.units().contains(u)) {
        return Err(StudyError::UnknownUnit(unit.clone()));
    }
    let alphabet = matrix.categories();
    let mut per_annotator = BTreeMap::new();
    let mut unscored_annotators = Vec::new();
    for (a, name) in matrix.annotators().iter().enumerate() {
        let labels = matrix.annotator_labels(a);
        if labels.is_empty() {
            unscored_annotators.push(name.clone());
            continue;
        }
        per_annotator.insert(name.clone(), correctness(&labels, gold, alphabet)?);
    }
    let vote = majority_vote(matrix);
    let majority = correctness(&vote.labels, gold, alphabet)?;
    Ok(StudyCorrectness {
        per_annotator,
        unscored_annotators,
        majority,
        majority_ties: vote.ties,
    })
}
