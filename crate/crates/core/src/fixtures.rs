//! Small reference projects shared by the tests, the guide, the service and
//! the golden vectors under `fixtures/golden/`.

use crate::catalog::Project;
use crate::scheme::{ClassificationScheme, MappingPair};

fn pair(c: &str, t: &str, d: &str) -> MappingPair {
    MappingPair::new(c, t, d)
}

/// `C = {c1}`, `T1 = {d1}`, mapping `{(c1, d1)}`.
pub fn identity() -> Project {
    Project::new(
        "identity",
        ClassificationScheme::unified("C", ["c1"]),
        vec![ClassificationScheme::previous("T1", ["d1"])],
        [pair("c1", "T1", "d1")],
    )
}

/// `C = {c1, c2}`, `T1 = {d1, d2, d3}`, mapping `{(c1,d1), (c1,d2), (c2,d2)}`.
///
/// `d2` has two partners, `d3` none, and `c1` fans out into `T1`.
pub fn fan() -> Project {
    Project::new(
        "fan",
        ClassificationScheme::unified("C", ["c1", "c2"]),
        vec![ClassificationScheme::previous("T1", ["d1", "d2", "d3"])],
        [
            pair("c1", "T1", "d1"),
            pair("c1", "T1", "d2"),
            pair("c2", "T1", "d2"),
        ],
    )
}

/// `C = {c1}`, `T1 = {d1}`, `T2 = {e1, e2}`, mapping `{(c1,d1), (c1,e1), (c1,e2)}`.
pub fn two_scheme() -> Project {
    Project::new(
        "two-scheme",
        ClassificationScheme::unified("C", ["c1"]),
        vec![
            ClassificationScheme::previous("T1", ["d1"]),
            ClassificationScheme::previous("T2", ["e1", "e2"]),
        ],
        [
            pair("c1", "T1", "d1"),
            pair("c1", "T2", "e1"),
            pair("c1", "T2", "e2"),
        ],
    )
}

/// A one-to-one mapping between `C = {c1, c2, c3}` and `T1 = {d1, d2, d3}`.
pub fn bijection() -> Project {
    Project::new(
        "bijection",
        ClassificationScheme::unified("C", ["c1", "c2", "c3"]),
        vec![ClassificationScheme::previous("T1", ["d1", "d2", "d3"])],
        [
            pair("c1", "T1", "d1"),
            pair("c2", "T1", "d2"),
            pair("c3", "T1", "d3"),
        ],
    )
}

/// A unified scheme with no previous schemes; every metric is undefined.
pub fn no_previous() -> Project {
    Project::new(
        "no-previous",
        ClassificationScheme::unified("C", ["c1"]),
        vec![],
        [],
    )
}

/// Every fixture on which the metrics are defined.
pub fn all() -> Vec<Project> {
    vec![identity(), fan(), two_scheme(), bijection()]
}
