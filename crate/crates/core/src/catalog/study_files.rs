//! Annotation matrices, gold standards and SUS surveys, as JSON or CSV.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    child, io_err, parse_document, push_extra, to_canonical_json, write_atomic, CatalogError,
    DocumentKind, LoadMode, UnknownFields, SCHEMA_VERSION,
};
use crate::scheme::Extra;
use crate::study::{AnnotationMatrix, GoldStandard, StudyError, SusResponse, SUS_ITEMS};

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedUnit {
    pub unit: String,
    /// Annotator → label; absent or `null` means the annotator left it blank.
    #[serde(default)]
    pub labels: BTreeMap<String, Option<String>>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotationsDocument {
    pub schema_version: u32,
    pub kind: DocumentKind,
    pub annotators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<Vec<String>>,
    pub units: Vec<AnnotatedUnit>,
    #[serde(flatten)]
    pub extra: Extra,
}

impl UnknownFields for AnnotatedUnit {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        push_extra(&self.extra, path, out);
    }
}

impl UnknownFields for AnnotationsDocument {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        push_extra(&self.extra, path, out);
        self.units.unknown_fields(&child(path, "units"), out);
    }
}

/// A loaded annotation matrix. `declared_categories` is false when the
/// category set was inferred from the labels (always the case for CSV).
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationSet {
    pub matrix: AnnotationMatrix,
    pub declared_categories: bool,
}

fn study_err(path: &Path, line: usize) -> impl FnOnce(StudyError) -> CatalogError + '_ {
    move |source| CatalogError::Study {
        path: path.to_path_buf(),
        line,
        source,
    }
}

fn csv_err(path: &Path, e: csv::Error) -> CatalogError {
    let (line, column) = e
        .position()
        .map(|p| (p.line() as usize, 0))
        .unwrap_or((0, 0));
    CatalogError::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message: e.to_string(),
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>, CatalogError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file))
}

/// Loads annotations from `.csv` (first column unit id, one column per
/// annotator, blank cell = no label) or from a JSON annotations document.
pub fn load_annotations(path: &Path, mode: LoadMode) -> Result<AnnotationSet, CatalogError> {
    if is_csv(path) {
        return load_annotations_csv(path);
    }
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let doc: AnnotationsDocument = parse_document(path, &text, DocumentKind::Annotations, mode)?;
    let known: BTreeSet<&str> = doc.annotators.iter().map(String::as_str).collect();
    let mut units = Vec::with_capacity(doc.units.len());
    let mut rows = Vec::with_capacity(doc.units.len());
    for u in &doc.units {
        if let Some(a) = u.labels.keys().find(|a| !known.contains(a.as_str())) {
            return Err(CatalogError::Invalid {
                path: path.to_path_buf(),
                message: format!(
                    "unit {:?} has a label by undeclared annotator {a:?}",
                    u.unit
                ),
            });
        }
        units.push(u.unit.clone());
        rows.push(
            doc.annotators
                .iter()
                .map(|a| u.labels.get(a).cloned().flatten())
                .collect(),
        );
    }
    let declared = doc.categories.as_ref().map(|c| c.iter().cloned().collect());
    let matrix = AnnotationMatrix::new(units, doc.annotators.clone(), rows, declared)
        .map_err(study_err(path, 0))?;
    Ok(AnnotationSet {
        matrix,
        declared_categories: doc.categories.is_some(),
    })
}

fn load_annotations_csv(path: &Path) -> Result<AnnotationSet, CatalogError> {
    let mut rdr = csv_reader(path)?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let annotators: Vec<String> = headers
        .iter()
        .skip(1)
        .map(|h| h.trim().to_string())
        .collect();
    let mut units = Vec::new();
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let mut cells = record.iter();
        let unit = cells.next().unwrap_or_default().trim().to_string();
        let row: Vec<Option<String>> = cells
            .map(|c| {
                let c = c.trim();
                (!c.is_empty()).then(|| c.to_string())
            })
            .collect();
        units.push(unit);
        rows.push(row);
    }
    let matrix =
        AnnotationMatrix::new(units, annotators, rows, None).map_err(study_err(path, 0))?;
    Ok(AnnotationSet {
        matrix,
        declared_categories: false,
    })
}

/// Writes `matrix` as a JSON annotations document with its category set.
pub fn save_annotations_json(matrix: &AnnotationMatrix, path: &Path) -> Result<(), CatalogError> {
    let units = matrix
        .units()
        .iter()
        .enumerate()
        .map(|(u, unit)| AnnotatedUnit {
            unit: unit.clone(),
            labels: matrix
                .annotators()
                .iter()
                .enumerate()
                .filter_map(|(a, name)| Some((name.clone(), Some(matrix.label(u, a)?.to_string()))))
                .collect(),
            extra: Extra::new(),
        })
        .collect();
    let doc = AnnotationsDocument {
        schema_version: SCHEMA_VERSION,
        kind: DocumentKind::Annotations,
        annotators: matrix.annotators().to_vec(),
        categories: Some(matrix.categories().iter().cloned().collect()),
        units,
        extra: Extra::new(),
    };
    write_atomic(path, &to_canonical_json(&doc))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GoldDocument {
    pub schema_version: u32,
    pub kind: DocumentKind,
    pub labels: BTreeMap<String, String>,
    #[serde(flatten)]
    pub extra: Extra,
}

impl UnknownFields for GoldDocument {
    fn unknown_fields(&self, path: &str, out: &mut Vec<String>) {
        push_extra(&self.extra, path, out);
    }
}

/// Loads a gold standard from JSON or from a two-column `unit,label` CSV.
pub fn load_gold(path: &Path, mode: LoadMode) -> Result<GoldStandard, CatalogError> {
    if !is_csv(path) {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let doc: GoldDocument = parse_document(path, &text, DocumentKind::Gold, mode)?;
        if let Some((unit, _)) = doc.labels.iter().find(|(_, l)| l.is_empty()) {
            return Err(CatalogError::Invalid {
                path: path.to_path_buf(),
                message: format!("empty gold label for unit {unit:?}"),
            });
        }
        return Ok(GoldStandard::new(doc.labels));
    }
    let mut rdr = csv_reader(path)?;
    let mut labels = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let (Some(unit), Some(label)) = (record.get(0), record.get(1)) else {
            return Err(CatalogError::Invalid {
                path: path.to_path_buf(),
                message: format!("line {line}: expected unit,label"),
            });
        };
        let (unit, label) = (unit.trim(), label.trim());
        if label.is_empty() {
            return Err(CatalogError::Invalid {
                path: path.to_path_buf(),
                message: format!("line {line}: empty gold label for unit {unit:?}"),
            });
        }
        if labels.insert(unit.to_string(), label.to_string()).is_some() {
            return Err(CatalogError::Invalid {
                path: path.to_path_buf(),
                message: format!("line {line}: unit {unit:?} listed twice"),
            });
        }
    }
    Ok(GoldStandard::new(labels))
}

pub fn save_gold(gold: &GoldStandard, path: &Path) -> Result<(), CatalogError> {
    let doc = GoldDocument {
        schema_version: SCHEMA_VERSION,
        kind: DocumentKind::Gold,
        labels: gold.labels.clone(),
        extra: Extra::new(),
    };
    write_atomic(path, &to_canonical_json(&doc))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SusRecord {
    pub respondent: String,
    pub response: SusResponse,
}

/// Loads a SUS survey CSV: a header row, then either ten item columns or a
/// respondent id followed by ten item columns.
pub fn load_sus(path: &Path) -> Result<Vec<SusRecord>, CatalogError> {
    let mut rdr = csv_reader(path)?;
    let width = rdr.headers().map_err(|e| csv_err(path, e))?.len();
    let with_id = match width {
        w if w == SUS_ITEMS => false,
        w if w == SUS_ITEMS + 1 => true,
        w => {
            return Err(CatalogError::Invalid {
                path: path.to_path_buf(),
                message: format!(
                    "expected {SUS_ITEMS} or {} columns, found {w}",
                    SUS_ITEMS + 1
                ),
            })
        }
    };
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let line = record.position().map_or(i + 2, |p| p.line() as usize);
        let mut cells = record.iter();
        let respondent = if with_id {
            cells.next().unwrap_or_default().trim().to_string()
        } else {
            format!("r{}", i + 1)
        };
        let mut items = Vec::with_capacity(SUS_ITEMS);
        for (j, c) in cells.enumerate() {
            let v: u8 = c.trim().parse().map_err(|_| CatalogError::Parse {
                path: path.to_path_buf(),
                line,
                column: j + 1 + with_id as usize,
                message: format!("item {} is not an integer: {c:?}", j + 1),
            })?;
            items.push(v);
        }
        let response = SusResponse::new(&items).map_err(study_err(path, line))?;
        out.push(SusRecord {
            respondent,
            response,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn csv_blank_cells_are_missing() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "a.csv",
            "unit,alice,bob\np1,x,x\np2,\"y, z\",\np3,,x\n",
        );
        let set = load_annotations(&p, LoadMode::Strict).unwrap();
        let m = &set.matrix;
        assert_eq!(m.annotators(), ["alice", "bob"]);
        assert_eq!(m.label(1, 0), Some("y, z"));
        assert_eq!(m.label(1, 1), None);
        assert_eq!(m.label(2, 0), None);
        assert!(!set.declared_categories);
        assert!(!m.categories().contains(""));
    }

    #[test]
    fn json_annotations_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "a.json",
            r#"{"schemaVersion":1,"kind":"annotations","annotators":["a","b"],
                "categories":["x","y","z"],
                "units":[{"unit":"p1","labels":{"a":"x","b":null}},{"unit":"p2","labels":{"b":"y"}}]}"#,
        );
        let set = load_annotations(&p, LoadMode::Strict).unwrap();
        assert!(set.declared_categories);
        assert_eq!(set.matrix.categories().len(), 3);
        let out = dir.path().join("b.json");
        save_annotations_json(&set.matrix, &out).unwrap();
        assert_eq!(load_annotations(&out, LoadMode::Strict).unwrap(), set);

        let bad = write(
            dir.path(),
            "c.json",
            r#"{"schemaVersion":1,"kind":"annotations","annotators":["a","b"],
                "units":[{"unit":"p1","labels":{"zed":"x"}}]}"#,
        );
        assert!(matches!(
            load_annotations(&bad, LoadMode::Strict),
            Err(CatalogError::Invalid { .. })
        ));
    }

    #[test]
    fn gold_formats() {
        let dir = tempfile::tempdir().unwrap();
        let csv = write(dir.path(), "g.csv", "unit,label\np1,x\np2,y\n");
        let gold = load_gold(&csv, LoadMode::Strict).unwrap();
        assert_eq!(gold.get("p2"), Some("y"));
        let json = dir.path().join("g.json");
        save_gold(&gold, &json).unwrap();
        assert_eq!(load_gold(&json, LoadMode::Strict).unwrap(), gold);
        let dup = write(dir.path(), "d.csv", "unit,label\np1,x\np1,y\n");
        assert!(load_gold(&dup, LoadMode::Strict).is_err());
    }

    #[test]
    fn sus_csv() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "s.csv",
            "respondent,q1,q2,q3,q4,q5,q6,q7,q8,q9,q10\nr1,5,1,5,1,5,1,5,1,5,1\nr2,3,3,3,3,3,3,3,3,3,3\n",
        );
        let rs = load_sus(&p).unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[0].response.score(), 100.0);
        assert_eq!(rs[1].respondent, "r2");

        let p = write(
            dir.path(),
            "t.csv",
            "q1,q2,q3,q4,q5,q6,q7,q8,q9,q10\n3,3,3,3,3,3,3,3,3,7\n",
        );
        match load_sus(&p) {
            Err(CatalogError::Study { line, source, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(source, StudyError::OutOfRangeItem { item: 10, value: 7 });
            }
            other => panic!("{other:?}"),
        }
    }
}
