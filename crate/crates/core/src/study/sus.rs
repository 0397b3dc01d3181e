//! System Usability Scale scoring.

use serde::{Deserialize, Serialize};

use super::StudyError;

pub const SUS_ITEMS: usize = 10;

/// Ten Likert answers, 1 = strongly disagree … 5 = strongly agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct SusResponse([u8; SUS_ITEMS]);

impl SusResponse {
    pub fn new(items: &[u8]) -> Result<Self, StudyError> {
        let items: [u8; SUS_ITEMS] = items
            .try_into()
            .map_err(|_| StudyError::WrongItemCount(items.len()))?;
        if let Some((i, &v)) = items
            .iter()
            .enumerate()
            .find(|(_, v)| !(1..=5).contains(*v))
        {
            return Err(StudyError::OutOfRangeItem {
                item: i + 1,
                value: v,
            });
        }
        Ok(SusResponse(items))
    }

    pub fn items(&self) -> &[u8; SUS_ITEMS] {
        &self.0
    }

    /// Score in `[0, 100]`: odd items contribute `score - 1`, even items
    /// `5 - score`, and the sum is scaled by 2.5.
    pub fn score(&self) -> f64 {
        let sum: u32 = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if i % 2 == 0 {
                    v as u32 - 1
                } else {
                    5 - v as u32
                }
            })
            .sum();
        sum as f64 * 2.5
    }
}

impl TryFrom<Vec<u8>> for SusResponse {
    type Error = StudyError;

    fn try_from(v: Vec<u8>) -> Result<Self, Self::Error> {
        SusResponse::new(&v)
    }
}

impl From<SusResponse> for Vec<u8> {
    fn from(r: SusResponse) -> Self {
        r.0.to_vec()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SusSummary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

pub fn sus_batch(responses: &[SusResponse]) -> Result<SusSummary, StudyError> {
    if responses.is_empty() {
        return Err(StudyError::EmptyBatch);
    }
    let mut scores: Vec<f64> = responses.iter().map(SusResponse::score).collect();
    scores.sort_by(f64::total_cmp);
    let n = scores.len();
    let median = if n % 2 == 1 {
        scores[n / 2]
    } else {
        (scores[n / 2 - 1] + scores[n / 2]) / 2.0
    };
    Ok(SusSummary {
        count: n,
        mean: scores.iter().sum::<f64>() / n as f64,
        median,
        min: scores[0],
        max: scores[n - 1],
    })
}
