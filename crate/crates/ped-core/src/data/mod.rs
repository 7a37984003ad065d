//! Dataset representation, CSV ingestion, and metadata sidecars.
//!
//! Features are stored column-major as `f64`; categorical cells hold the
//! level index (exact for any realistic cardinality). Labels are class ids
//! `0..K-1` with the original label strings kept in a dictionary so files can
//! be decoded back to their source values.

pub mod generators;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{PedError, Result};
use crate::seed::Seed;

pub use generators::{generate, CovariateCase, GeneratorSpec};

/// Kind of a feature column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnKind {
    Continuous,
    /// Level strings in encoding order; cell values are indices into this list.
    Categorical { levels: Vec<String> },
}

/// Name and kind of one feature column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub name: String,
    #[serde(flatten)]
    pub kind: ColumnKind,
}

impl ColumnSchema {
    pub fn continuous(name: impl Into<String>) -> Self {
        ColumnSchema {
            name: name.into(),
            kind: ColumnKind::Continuous,
        }
    }

    pub fn categorical(name: impl Into<String>, levels: Vec<String>) -> Self {
        ColumnSchema {
            name: name.into(),
            kind: ColumnKind::Categorical { levels },
        }
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self.kind, ColumnKind::Categorical { .. })
    }

    /// Number of levels for a categorical column, 0 for continuous.
    pub fn cardinality(&self) -> usize {
        match &self.kind {
            ColumnKind::Continuous => 0,
            ColumnKind::Categorical { levels } => levels.len(),
        }
    }
}

/// An N x p feature table with class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Vec<f64>>,
    labels: Vec<u32>,
    schema: Vec<ColumnSchema>,
    label_levels: Vec<String>,
    target_name: String,
}

impl Dataset {
    /// Build a dataset, validating every invariant.
    pub fn new(
        schema: Vec<ColumnSchema>,
        columns: Vec<Vec<f64>>,
        labels: Vec<u32>,
        label_levels: Vec<String>,
        target_name: impl Into<String>,
    ) -> Result<Self> {
        let target_name = target_name.into();
        if schema.is_empty() {
            return Err(PedError::InvalidSchema {
                column: target_name,
                reason: "dataset needs at least one feature column".into(),
            });
        }
        if schema.len() != columns.len() {
            return Err(PedError::InvalidSchema {
                column: target_name,
                reason: format!(
                    "schema has {} columns, data has {}",
                    schema.len(),
                    columns.len()
                ),
            });
        }
        let n = labels.len();
        if n == 0 {
            return Err(PedError::EmptyInput("dataset has no rows".into()));
        }
        let mut seen = HashMap::new();
        for col in &schema {
            if seen.insert(col.name.clone(), ()).is_some() || col.name == target_name {
                return Err(PedError::InvalidSchema {
                    column: col.name.clone(),
                    reason: "column names must be unique".into(),
                });
            }
        }
        let k = label_levels.len();
        if k < 2 {
            return Err(PedError::ConstantTarget {
                column: target_name,
            });
        }
        for (j, (col, values)) in schema.iter().zip(&columns).enumerate() {
            if values.len() != n {
                return Err(PedError::LengthMismatch {
                    left: values.len(),
                    right: n,
                });
            }
            if let ColumnKind::Categorical { levels } = &col.kind {
                if levels.len() < 2 {
                    return Err(PedError::InvalidSchema {
                        column: col.name.clone(),
                        reason: "categorical cardinality must be at least 2".into(),
                    });
                }
                let card = levels.len() as f64;
                for (i, &v) in values.iter().enumerate() {
                    if v.fract() != 0.0 || v < 0.0 || v >= card {
                        return Err(PedError::ParseCell {
                            row: i + 1,
                            column: schema[j].name.clone(),
                            value: format!("{v} is not a valid level index"),
                        });
                    }
                }
            }
        }
        for (i, &y) in labels.iter().enumerate() {
            if (y as usize) >= k {
                return Err(PedError::ParseCell {
                    row: i + 1,
                    column: target_name,
                    value: format!("label id {y} out of range for K={k}"),
                });
            }
        }
        Ok(Dataset {
            columns,
            labels,
            schema,
            label_levels,
            target_name,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.schema.len()
    }

    pub fn n_classes(&self) -> usize {
        self.label_levels.len()
    }

    pub fn schema(&self) -> &[ColumnSchema] {
        &self.schema
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn label_levels(&self) -> &[String] {
        &self.label_levels
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, row: usize) -> u32 {
        self.labels[row]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn value(&self, row: usize, j: usize) -> f64 {
        self.columns[j][row]
    }

    /// Copy row `i`'s features into `buf` (length p).
    pub fn fill_row(&self, i: usize, buf: &mut [f64]) {
        for (j, col) in self.columns.iter().enumerate() {
            buf[j] = col[i];
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        let mut buf = vec![0.0; self.n_features()];
        self.fill_row(i, &mut buf);
        buf
    }

    /// True when two datasets can be used as train/test for the same model.
    pub fn schema_matches(&self, other: &Dataset) -> bool {
        self.schema == other.schema && self.label_levels == other.label_levels
    }

    /// Class counts over all rows.
    pub fn class_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n_classes()];
        for &y in &self.labels {
            counts[y as usize] += 1;
        }
        counts
    }

    /// Materialize a row subset as a new dataset (order preserved).
    pub fn subset(&self, rows: &[usize]) -> Result<Dataset> {
        if rows.is_empty() {
            return Err(PedError::EmptyRows);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| rows.iter().map(|&i| col[i]).collect())
            .collect();
        let labels = rows.iter().map(|&i| self.labels[i]).collect();
        Dataset::new(
            self.schema.clone(),
            columns,
            labels,
            self.label_levels.clone(),
            self.target_name.clone(),
        )
    }
}

/// Sidecar metadata stored next to every dataset CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub target: String,
    pub schema: Vec<ColumnSchema>,
    pub label_levels: Vec<String>,
    pub n_rows: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<GeneratorSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<Seed>,
}

impl DatasetMeta {
    pub fn of(dataset: &Dataset) -> Self {
        DatasetMeta {
            target: dataset.target_name.clone(),
            schema: dataset.schema.clone(),
            label_levels: dataset.label_levels.clone(),
            n_rows: dataset.n_rows(),
            generator: None,
            seed: None,
        }
    }

    pub fn with_generator(mut self, spec: GeneratorSpec, seed: Seed) -> Self {
        self.generator = Some(spec);
        self.seed = Some(seed);
        self
    }
}

/// Path of the metadata sidecar for a CSV: `d.csv` -> `d.meta.json`.
pub fn meta_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

fn open_err(path: &Path, source: std::io::Error) -> PedError {
    if source.kind() == std::io::ErrorKind::NotFound {
        PedError::MissingFile {
            path: path.display().to_string(),
        }
    } else {
        PedError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// Load a CSV with a header row, encoding labels and categorical levels by
/// first appearance.
pub fn load_csv(path: &Path, target_column: &str, categorical_columns: &[String]) -> Result<Dataset> {
    load_csv_impl(path, target_column, categorical_columns, None)
}

/// Load a CSV using the dictionaries pinned in its metadata sidecar, so the
/// result has the exact encodings of the dataset that produced the file.
pub fn load_csv_with_meta(path: &Path, meta: &DatasetMeta) -> Result<Dataset> {
    let categorical: Vec<String> = meta
        .schema
        .iter()
        .filter(|c| c.is_categorical())
        .map(|c| c.name.clone())
        .collect();
    load_csv_impl(path, &meta.target, &categorical, Some(meta))
}

/// Read the sidecar for `path` if present and load with pinned encodings,
/// falling back to first-appearance encoding otherwise.
pub fn load_csv_auto(path: &Path, target_column: &str, categorical_columns: &[String]) -> Result<Dataset> {
    let mp = meta_path(path);
    if mp.exists() {
        let meta = read_meta(&mp)?;
        if meta.target == target_column {
            return load_csv_with_meta(path, &meta);
        }
    }
    load_csv(path, target_column, categorical_columns)
}

pub fn read_meta(path: &Path) -> Result<DatasetMeta> {
    let text = std::fs::read_to_string(path).map_err(|e| open_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| PedError::Metadata {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

pub fn write_meta(path: &Path, meta: &DatasetMeta) -> Result<()> {
    let mut text = serde_json::to_string_pretty(meta).map_err(|e| PedError::Metadata {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| open_err(path, e))
}

fn load_csv_impl(
    path: &Path,
    target_column: &str,
    categorical_columns: &[String],
    pinned: Option<&DatasetMeta>,
) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| open_err(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| PedError::Metadata {
            path: path.display().to_string(),
            reason: format!("cannot read header: {e}"),
        })?
        .iter()
        .map(str::to_owned)
        .collect();

    let mut name_to_idx = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        if name_to_idx.insert(h.clone(), i).is_some() {
            return Err(PedError::InvalidSchema {
                column: h.clone(),
                reason: "duplicate column in header".into(),
            });
        }
    }
    let target_idx = *name_to_idx
        .get(target_column)
        .ok_or_else(|| PedError::UnknownColumn {
            name: target_column.to_string(),
        })?;
    for c in categorical_columns {
        if !name_to_idx.contains_key(c.as_str()) {
            return Err(PedError::UnknownColumn { name: c.clone() });
        }
    }
    if headers.len() < 2 {
        return Err(PedError::InvalidSchema {
            column: target_column.to_string(),
            reason: "no feature columns".into(),
        });
    }

    let feature_cols: Vec<usize> = (0..headers.len()).filter(|&i| i != target_idx).collect();
    let is_cat: Vec<bool> = feature_cols
        .iter()
        .map(|&i| categorical_columns.iter().any(|c| *c == headers[i]))
        .collect();

    // Pinned dictionaries (from a sidecar) or first-appearance dictionaries.
    let mut level_dicts: Vec<HashMap<String, u32>> = vec![HashMap::new(); feature_cols.len()];
    let mut level_lists: Vec<Vec<String>> = vec![Vec::new(); feature_cols.len()];
    let mut label_dict: HashMap<String, u32> = HashMap::new();
    let mut label_list: Vec<String> = Vec::new();
    let mut frozen = false;
    if let Some(meta) = pinned {
        frozen = true;
        for (slot, &i) in feature_cols.iter().enumerate() {
            let col = meta
                .schema
                .iter()
                .find(|c| c.name == headers[i])
                .ok_or_else(|| PedError::UnknownColumn {
                    name: headers[i].clone(),
                })?;
            if let ColumnKind::Categorical { levels } = &col.kind {
                for (ix, lv) in levels.iter().enumerate() {
                    level_dicts[slot].insert(lv.clone(), ix as u32);
                }
                level_lists[slot] = levels.clone();
            }
        }
        for (ix, lv) in meta.label_levels.iter().enumerate() {
            label_dict.insert(lv.clone(), ix as u32);
        }
        label_list = meta.label_levels.clone();
    }

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); feature_cols.len()];
    let mut labels: Vec<u32> = Vec::new();

    for (row_idx, record) in reader.records().enumerate() {
        let row = row_idx + 1; // 1-based data row, header excluded
        let record = record.map_err(|e| PedError::ParseCell {
            row,
            column: "<record>".into(),
            value: e.to_string(),
        })?;
        if record.len() != headers.len() {
            return Err(PedError::ParseCell {
                row,
                column: "<record>".into(),
                value: format!("expected {} fields, got {}", headers.len(), record.len()),
            });
        }
        for (slot, &i) in feature_cols.iter().enumerate() {
            let cell = record.get(i).unwrap_or("");
            if is_cat[slot] {
                let code = match level_dicts[slot].get(cell) {
                    Some(&c) => c,
                    None if frozen => {
                        return Err(PedError::ParseCell {
                            row,
                            column: headers[i].clone(),
                            value: format!("level {cell:?} not in pinned dictionary"),
                        })
                    }
                    None => {
                        let c = level_lists[slot].len() as u32;
                        level_dicts[slot].insert(cell.to_string(), c);
                        level_lists[slot].push(cell.to_string());
                        c
                    }
                };
                columns[slot].push(f64::from(code));
            } else {
                let v: f64 = cell.trim().parse().map_err(|_| PedError::ParseCell {
                    row,
                    column: headers[i].clone(),
                    value: cell.to_string(),
                })?;
                columns[slot].push(v);
            }
        }
        let cell = record.get(target_idx).unwrap_or("");
        let y = match label_dict.get(cell) {
            Some(&c) => c,
            None if frozen => {
                return Err(PedError::ParseCell {
                    row,
                    column: target_column.to_string(),
                    value: format!("label {cell:?} not in pinned dictionary"),
                })
            }
            None => {
                let c = label_list.len() as u32;
                label_dict.insert(cell.to_string(), c);
                label_list.push(cell.to_string());
                c
            }
        };
        labels.push(y);
    }

    if labels.is_empty() {
        return Err(PedError::EmptyInput(format!(
            "{} has no data rows",
            path.display()
        )));
    }
    if label_list.len() < 2 {
        return Err(PedError::ConstantTarget {
            column: target_column.to_string(),
        });
    }

    let schema: Vec<ColumnSchema> = feature_cols
        .iter()
        .enumerate()
        .map(|(slot, &i)| {
            if is_cat[slot] {
                ColumnSchema::categorical(headers[i].clone(), level_lists[slot].clone())
            } else {
                ColumnSchema::continuous(headers[i].clone())
            }
        })
        .collect();

    Dataset::new(schema, columns, labels, label_list, target_column)
}

fn format_cell(dataset: &Dataset, row: usize, j: usize) -> String {
    let v = dataset.value(row, j);
    match &dataset.schema()[j].kind {
        ColumnKind::Continuous => {
            let mut s = String::new();
            // Shortest round-trip representation; reparses to the same f64.
            write!(s, "{v}").unwrap();
            s
        }
        ColumnKind::Categorical { levels } => levels[v as usize].clone(),
    }
}

/// Write selected rows (features then target, decoded to source strings).
pub fn write_csv_rows(dataset: &Dataset, rows: &[usize], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| open_err(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    let mut header: Vec<&str> = dataset.schema().iter().map(|c| c.name.as_str()).collect();
    header.push(dataset.target_name());
    writer.write_record(&header).map_err(|e| PedError::Io {
        path: path.display().to_string(),
        source: std::io::Error::other(e),
    })?;
    for &i in rows {
        let mut record: Vec<String> = (0..dataset.n_features())
            .map(|j| format_cell(dataset, i, j))
            .collect();
        record.push(dataset.label_levels()[dataset.label(i) as usize].clone());
        writer.write_record(&record).map_err(|e| PedError::Io {
            path: path.display().to_string(),
            source: std::io::Error::other(e),
        })?;
    }
    writer.flush().map_err(|e| open_err(path, e))
}

/// Write the whole dataset as CSV.
pub fn write_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let rows: Vec<usize> = (0..dataset.n_rows()).collect();
    write_csv_rows(dataset, &rows, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn labels_encoded_by_first_appearance() {
        let f = write_tmp("x,y\n1.0,a\n2.0,b\n3.0,a\n4.0,b\n");
        let ds = load_csv(f.path(), "y", &[]).unwrap();
        assert_eq!(ds.n_classes(), 2);
        assert_eq!(ds.labels(), &[0, 1, 0, 1]);
        assert_eq!(ds.label_levels(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn unparsable_continuous_cell_names_row_and_column() {
        let f = write_tmp("x,y\n1.0,a\noops,b\n");
        let err = load_csv(f.path(), "y", &[]).unwrap_err();
        match err {
            PedError::ParseCell { row, column, value } => {
                assert_eq!(row, 2);
                assert_eq!(column, "x");
                assert_eq!(value, "oops");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn constant_target_is_rejected() {
        let f = write_tmp("x,y\n1.0,a\n2.0,a\n");
        let err = load_csv(f.path(), "y", &[]).unwrap_err();
        assert!(matches!(err, PedError::ConstantTarget { .. }));
    }

    #[test]
    fn unknown_target_column_is_rejected() {
        let f = write_tmp("x,y\n1.0,a\n2.0,b\n");
        let err = load_csv(f.path(), "label", &[]).unwrap_err();
        assert!(matches!(err, PedError::UnknownColumn { .. }));
    }

    #[test]
    fn missing_file_is_distinct() {
        let err = load_csv(Path::new("/nonexistent/data.csv"), "y", &[]).unwrap_err();
        assert!(matches!(err, PedError::MissingFile { .. }));
    }

    #[test]
    fn categorical_columns_are_label_encoded() {
        let f = write_tmp("color,x,y\nred,1.0,a\nblue,2.0,b\nred,3.5,a\n");
        let ds = load_csv(f.path(), "y", &["color".to_string()]).unwrap();
        assert_eq!(ds.schema()[0].cardinality(), 2);
        assert_eq!(ds.column(0), &[0.0, 1.0, 0.0]);
        assert_eq!(ds.column(1), &[1.0, 2.0, 3.5]);
    }

    #[test]
    fn roundtrip_with_sidecar_preserves_encodings() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_tmp("c,x,y\nb,0.25,z\na,-1.5,w\na,3e-7,z\nb,0.1,w\n");
        let ds = load_csv(f.path(), "y", &["c".to_string()]).unwrap();

        let out = dir.path().join("sub.csv");
        // Subset starting with rows whose first-appearance order differs.
        write_csv_rows(&ds, &[1, 0, 3], &out).unwrap();
        let meta = DatasetMeta::of(&ds);
        write_meta(&meta_path(&out), &meta).unwrap();

        let meta2 = read_meta(&meta_path(&out)).unwrap();
        let reloaded = load_csv_with_meta(&out, &meta2).unwrap();
        let expected = ds.subset(&[1, 0, 3]).unwrap();
        assert_eq!(reloaded, expected);
    }

    #[test]
    fn full_roundtrip_equality() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GeneratorSpec::Twonorm { p: 3 };
        let ds = generate(&spec, 200, Seed::new(11)).unwrap();
        let out = dir.path().join("d.csv");
        write_csv(&ds, &out).unwrap();
        write_meta(&meta_path(&out), &DatasetMeta::of(&ds)).unwrap();
        let back = load_csv_auto(&out, "y", &[]).unwrap();
        assert_eq!(back, ds);
    }
}
