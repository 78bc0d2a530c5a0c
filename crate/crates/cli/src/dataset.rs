//! CSV ingestion: comma separated, header row required, UTF-8.

use std::path::{Path, PathBuf};

use lfda::{DataMatrix, LabelVector};
use ndarray::Array2;

use crate::error::{CliError, CliResult};

/// Raw string cells of a CSV file, kept until columns are picked by name.
#[derive(Debug, Clone)]
pub struct CsvTable {
    path: PathBuf,
    headers: Vec<String>,
    records: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn read(path: &Path) -> CliResult<Self> {
        let fail = |e: csv::Error| CliError::input(format!("{}: {e}", path.display()));
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(fail)?;
        let headers: Vec<String> = reader.headers().map_err(fail)?.iter().map(String::from).collect();
        if headers.is_empty() || headers.iter().all(String::is_empty) {
            return Err(CliError::input(format!("{}: missing header row", path.display())));
        }
        let mut records = Vec::new();
        for rec in reader.records() {
            records.push(rec.map_err(fail)?.iter().map(String::from).collect());
        }
        Ok(CsvTable {
            path: path.to_path_buf(),
            headers,
            records,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn n_rows(&self) -> usize {
        self.records.len()
    }

    pub fn column_index(&self, name: &str) -> CliResult<usize> {
        self.headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::input(format!("{}: column '{name}' not found", self.path.display()))
        })
    }

    /// Named columns parsed as finite numbers, in the given order.
    pub fn numeric(&self, names: &[String]) -> CliResult<DataMatrix> {
        let cols: Vec<usize> = names
            .iter()
            .map(|n| self.column_index(n))
            .collect::<CliResult<_>>()?;
        if self.records.is_empty() {
            return Err(CliError::input(format!("{}: no data rows", self.path.display())));
        }
        if cols.is_empty() {
            return Err(CliError::input(format!("{}: no feature columns", self.path.display())));
        }
        let mut out = Array2::zeros((self.records.len(), cols.len()));
        for (i, rec) in self.records.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                let cell = &rec[c];
                let v: f64 = cell.parse().map_err(|_| {
                    CliError::input(format!(
                        "{}: row {}, column '{}': cannot parse '{cell}' as a number",
                        self.path.display(),
                        i + 1,
                        names[j]
                    ))
                })?;
                if !v.is_finite() {
                    return Err(CliError::input(format!(
                        "{}: row {}, column '{}': non-finite value '{cell}'",
                        self.path.display(),
                        i + 1,
                        names[j]
                    )));
                }
                out[[i, j]] = v;
            }
        }
        DataMatrix::new(out).map_err(|e| CliError::from_lfda(&self.path.display().to_string(), e))
    }

    /// Raw strings of one column.
    pub fn strings(&self, name: &str) -> CliResult<Vec<String>> {
        let c = self.column_index(name)?;
        Ok(self.records.iter().map(|r| r[c].clone()).collect())
    }

    /// Labels from a named column; empty cells are unlabeled samples.
    pub fn labels(&self, name: &str) -> CliResult<LabelVector> {
        let raw = self.strings(name)?;
        let opts: Vec<Option<&str>> = raw
            .iter()
            .map(|s| if s.is_empty() { None } else { Some(s.as_str()) })
            .collect();
        Ok(LabelVector::from_optional(&opts))
    }
}

/// Feature matrix plus the optional label column it was read with.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub rows: DataMatrix,
    pub label_name: Option<String>,
    pub labels: Option<LabelVector>,
}

impl Dataset {
    /// Every column except `label_col` is a feature.
    pub fn read(path: &Path, label_col: Option<&str>) -> CliResult<Self> {
        let table = CsvTable::read(path)?;
        let feature_names: Vec<String> = match label_col {
            Some(name) => {
                table.column_index(name)?;
                table.headers().iter().filter(|h| *h != name).cloned().collect()
            }
            None => table.headers().to_vec(),
        };
        let rows = table.numeric(&feature_names)?;
        let labels = label_col.map(|name| table.labels(name)).transpose()?;
        Ok(Dataset {
            feature_names,
            rows,
            label_name: label_col.map(String::from),
            labels,
        })
    }
}
