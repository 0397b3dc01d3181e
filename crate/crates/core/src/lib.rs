//! Tooling for unifying classification schemes.
//!
//! A *project* pairs one unified scheme with the previous schemes it is meant
//! to subsume and a mapping between their classes. From that mapping the
//! crate computes four metrics:
//!
//! * **laconicity** and **lucidity** tell whether the unified scheme is too
//!   fine-grained (merge candidates) or too coarse (split candidates);
//! * **completeness** and **soundness** tell whether it covers every previous
//!   class and whether each of its own classes is grounded in some previous
//!   scheme.
//!
//! All four are exact [`Fraction`]s. [`metrics::metric_report`] adds per-node
//! diagnostics, threshold checks and refinement [`Advice`].
//!
//! The [`study`] module scores user studies of a scheme: Krippendorff's alpha
//! between annotators, precision/recall/F1 against a gold standard, and SUS
//! questionnaires. [`catalog`] reads and writes all of it as JSON or CSV.
//!
//! ```
//! use taxunify::fixtures;
//!
//! let project = fixtures::fan();
//! let report = project.metric_report()?;
//! assert_eq!(report.laconicity.value.to_string(), "2/3");
//! assert_eq!(report.lucidity.value.to_decimal(4), "0.5000");
//! assert!(!report.completeness.passed);
//! # Ok::<(), taxunify::MetricError>(())
//! ```

pub mod catalog;
pub mod fixtures;
pub mod fraction;
pub mod metrics;
pub mod report;
pub mod scheme;
pub mod study;

pub use catalog::{CatalogError, LoadMode, Project};
pub use fraction::Fraction;
pub use metrics::{
    completeness, laconicity, lucidity, metric_report, soundness, Advice, MetricError,
    MetricReport, Thresholds,
};
pub use scheme::{
    validate_mapping, validate_scheme, ClassNode, ClassificationScheme, MappingPair, MappingSet,
    MetaResearchArea, NodeKind, SchemeRole, ValidationOutcome, Violation,
};

/// The guide's code blocks, compiled and run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/study.md")]
    mod study {}
    #[doc = include_str!("../../../book/src/files.md")]
    mod files {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
