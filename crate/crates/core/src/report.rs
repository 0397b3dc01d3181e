//! Text and JSON renderings of reports.
//!
//! JSON output is canonical and contains no timestamps, so the same input
//! always yields the same bytes whichever front end produced it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::catalog::{to_canonical_json, CatalogStats, SusRecord};
use crate::metrics::{Metric, MetricReport, NodeDiagnostic};
use crate::study::{AlphaReport, ConfusionReport, StudyCorrectness, SusSummary};

pub fn metrics_json(report: &MetricReport) -> String {
    to_canonical_json(report)
}

struct Paint(bool);

impl Paint {
    fn status(&self, ok: bool) -> String {
        match (ok, self.0) {
            (true, true) => "\x1b[32mpass\x1b[0m".into(),
            (false, true) => "\x1b[31mFAIL\x1b[0m".into(),
            (true, false) => "pass".into(),
            (false, false) => "FAIL".into(),
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn metrics_text(report: &MetricReport, color: bool) -> String {
    let paint = Paint(color);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "project {} (unified {}; previous {})",
        report.project_id,
        report.unified_scheme_id,
        report.previous_scheme_ids.join(", ")
    );
    let _ = writeln!(
        s,
        "{:<14}{:>8}  {:<10}{:>10}  status",
        "metric", "value", "fraction", "threshold"
    );
    for m in Metric::ALL {
        let v = report.metric(m);
        let _ = writeln!(
            s,
            "{:<14}{:>8}  {:<10}{:>10}  {}",
            m.name(),
            v.value.to_decimal(4),
            v.value.to_string(),
            v.threshold.to_decimal(4),
            paint.status(v.passed)
        );
    }
    let _ = writeln!(s, "overall: {}", paint.status(report.passed));
    if report.advice.is_empty() {
        let _ = writeln!(s, "advice: none");
    } else {
        let _ = writeln!(s, "advice:");
        for a in &report.advice {
            let _ = writeln!(s, "  - {a}");
        }
    }
    let _ = writeln!(s, "diagnostics:");
    for d in &report.diagnostics {
        match d {
            NodeDiagnostic::Unified(u) => {
                let _ = writeln!(
                    s,
                    "  {}/{}  unified   links={}  lucid={}  sound={}",
                    u.scheme_id,
                    u.node_id,
                    u.link_count,
                    yes(u.lucid),
                    yes(u.sound)
                );
            }
            NodeDiagnostic::Previous(p) => {
                let _ = writeln!(
                    s,
                    "  {}/{}  previous  links={}  laconic={}  complete={}",
                    p.scheme_id,
                    p.node_id,
                    p.link_count,
                    yes(p.laconic),
                    yes(p.complete)
                );
            }
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SusScore {
    pub respondent: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SusReport {
    pub summary: SusSummary,
    pub scores: Vec<SusScore>,
}

impl SusReport {
    pub fn new(records: &[SusRecord], summary: SusSummary) -> Self {
        SusReport {
            summary,
            scores: records
                .iter()
                .map(|r| SusScore {
                    respondent: r.respondent.clone(),
                    score: r.response.score(),
                })
                .collect(),
        }
    }
}

/// Everything the agreement command computes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub reliability: AlphaReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correctness: Option<StudyCorrectness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub usability: Option<SusReport>,
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"))
}

fn confusion_text(s: &mut String, name: &str, r: &ConfusionReport) {
    let _ = writeln!(
        s,
        "  {name}: accuracy {:.3} ({}/{})  micro P/R/F1 {}/{}/{}  macro P/R/F1 {}/{}/{}",
        r.accuracy,
        r.correct,
        r.scored,
        opt(r.micro.precision),
        opt(r.micro.recall),
        opt(r.micro.f1),
        opt(r.macro_.precision),
        opt(r.macro_.recall),
        opt(r.macro_.f1),
    );
    let skipped = r.macro_.skipped_precision + r.macro_.skipped_recall + r.macro_.skipped_f1;
    if skipped > 0 {
        let _ = writeln!(
            s,
            "    macro skipped undefined classes: precision {}, recall {}, f1 {}",
            r.macro_.skipped_precision, r.macro_.skipped_recall, r.macro_.skipped_f1
        );
    }
    for (class, c) in &r.per_class {
        let _ = writeln!(
            s,
            "    {class}: tp={} fp={} fn={} tn={}  P={} R={} F1={}",
            c.tp,
            c.fp,
            c.fn_,
            c.tn,
            opt(c.precision),
            opt(c.recall),
            opt(c.f1)
        );
    }
}

pub fn agreement_text(report: &AgreementReport) -> String {
    let mut s = String::new();
    let a = &report.reliability;
    let _ = writeln!(
        s,
        "krippendorff alpha (nominal): {:.3}  D_o={:.6}  D_e={:.6}  n={}",
        a.alpha, a.observed_disagreement, a.expected_disagreement, a.pairable_values
    );
    let _ = writeln!(
        s,
        "units used: {}  excluded (fewer than two labels): {}",
        a.units_used,
        a.units_excluded.len()
    );
    if a.degenerate {
        let _ = writeln!(
            s,
            "warning: only one category among pairable values; alpha reported as 1"
        );
    }
    if let Some(c) = &report.correctness {
        let _ = writeln!(s, "correctness against gold standard:");
        for (name, r) in &c.per_annotator {
            confusion_text(&mut s, name, r);
        }
        confusion_text(&mut s, "majority vote", &c.majority);
        if !c.majority_ties.is_empty() {
            let _ = writeln!(
                s,
                "  majority ties broken by label order: {}",
                c.majority_ties.join(", ")
            );
        }
        if !c.unscored_annotators.is_empty() {
            let _ = writeln!(
                s,
                "  unscored annotators: {}",
                c.unscored_annotators.join(", ")
            );
        }
    }
    if let Some(u) = &report.usability {
        let m = &u.summary;
        let _ = writeln!(
            s,
            "SUS: n={} mean={:.2} median={:.2} min={:.1} max={:.1}",
            m.count, m.mean, m.median, m.min, m.max
        );
    }
    s
}

pub fn stats_text(stats: &CatalogStats) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<22}{:>8}", stats.group_by.to_string(), "count");
    for row in &stats.rows {
        let _ = writeln!(s, "{:<22}{:>8}", row.key, row.count);
    }
    let _ = writeln!(s, "{:<22}{:>8}", "total", stats.total);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fan_text() {
        let r = fixtures::fan().metric_report().unwrap();
        let t = metrics_text(&r, false);
        assert!(
            t.contains("laconicity      0.6667  2/3           0.9000  FAIL"),
            "{t}"
        );
        assert!(
            t.contains("soundness       1.0000  2/2           0.9000  pass"),
            "{t}"
        );
        assert!(t.contains("missing coverage: T1/d3"));
    }

    #[test]
    fn json_round_trip() {
        for p in fixtures::all() {
            let r = p.metric_report().unwrap();
            let j = metrics_json(&r);
            let back: MetricReport = serde_json::from_str(&j).unwrap();
            assert_eq!(back, r);
            assert_eq!(metrics_json(&back), j);
        }
    }
}
