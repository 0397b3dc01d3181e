//! Krippendorff's alpha for nominal data.
//!
//! Units with fewer than two labels cannot be paired and are left out. For
//! every remaining unit `u` with `m_u` labels each ordered pair of labels from
//! different annotators adds `1 / (m_u - 1)` to the coincidence matrix.
//! With `n_c` the row sums and `n` their total:
//!
//! ```text
//! D_o = Σ_{c≠k} o_ck / n
//! D_e = Σ_{c≠k} n_c n_k / (n (n - 1))
//! α   = 1 - D_o / D_e
//! ```
//!
//! The sums are accumulated on integers grouped by `m_u` so the result does
//! not depend on the order of units, annotators or categories.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{AnnotationMatrix, StudyError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoincidenceMatrix {
    pub categories: Vec<String>,
    /// `counts[c][k]` is `o_ck`; symmetric.
    pub counts: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AlphaReport {
    pub alpha: f64,
    pub observed_disagreement: f64,
    pub expected_disagreement: f64,
    /// Number of pairable values `n`.
    pub pairable_values: u64,
    pub units_used: usize,
    pub units_excluded: Vec<String>,
    /// Set when only one category occurs among the pairable values
    /// (`D_e = 0`); alpha is then reported as 1.
    pub degenerate: bool,
    pub coincidence: CoincidenceMatrix,
}

/// Nominal Krippendorff's alpha over all annotated units.
pub fn krippendorff_alpha(matrix: &AnnotationMatrix) -> Result<AlphaReport, StudyError> {
    let categories: Vec<String> = matrix.categories().iter().cloned().collect();
    let index: HashMap<&str, usize> = categories
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    let k = categories.len();

    // Keyed by m_u - 1: per-category-pair sums of n_uc * n_uk (or
    // n_uc * (n_uc - 1) on the diagonal) over units with that many labels.
    let mut by_width: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut totals = vec![0u64; k];
    let mut units_used = 0;
    let mut units_excluded = Vec::new();

    for (u, unit) in matrix.units().iter().enumerate() {
        let mut counts = vec![0u64; k];
        let mut m = 0u64;
        for label in matrix.unit_labels(u) {
            counts[index[label]] += 1;
            m += 1;
        }
        if m < 2 {
            units_excluded.push(unit.clone());
            continue;
        }
        units_used += 1;
        let acc = by_width.entry(m - 1).or_insert_with(|| vec![0; k * k]);
        for c in 0..k {
            totals[c] += counts[c];
            for j in 0..k {
                let pairs = if c == j {
                    counts[c] * counts[c].saturating_sub(1)
                } else {
                    counts[c] * counts[j]
                };
                acc[c * k + j] += pairs;
            }
        }
    }

    if units_used == 0 {
        return Err(StudyError::InsufficientData);
    }

    let n: u64 = totals.iter().sum();
    let mut coincidence = vec![vec![0f64; k]; k];
    let mut disagreement = 0f64;
    for (&width, acc) in &by_width {
        let mut off_diagonal = 0u64;
        for c in 0..k {
            for j in 0..k {
                coincidence[c][j] += acc[c * k + j] as f64 / width as f64;
                if c != j {
                    off_diagonal += acc[c * k + j];
                }
            }
        }
        disagreement += off_diagonal as f64 / width as f64;
    }

    let sum_sq: u64 = totals.iter().map(|t| t * t).sum();
    let expected_pairs = n * n - sum_sq;
    let observed = disagreement / n as f64;
    let expected = expected_pairs as f64 / (n * (n - 1)) as f64;
    let degenerate = expected_pairs == 0;
    let alpha = if degenerate {
        1.0
    } else {
        1.0 - (n - 1) as f64 * disagreement / expected_pairs as f64
    };

    Ok(AlphaReport {
        alpha,
        observed_disagreement: observed,
        expected_disagreement: expected,
        pairable_values: n,
        units_used,
        units_excluded,
        degenerate,
        coincidence: CoincidenceMatrix {
            categories,
            counts: coincidence,
        },
    })
}
