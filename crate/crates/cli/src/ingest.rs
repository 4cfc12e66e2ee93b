use std::fs::File;
use std::path::Path;

use ndarray::Array2;
use vqsel_core::{Dataset, Error, Result};

/// Reads a rectangular numeric CSV, one point per row. Errors carry the
/// 1-based file line and column.
pub fn ingest_csv(path: &Path, has_header: bool) -> Result<Dataset> {
    let rows = read_numeric_rows(path, has_header)?;
    Dataset::from_rows(rows)
}

/// Reads a square numeric CSV (no header) as a precomputed kernel table.
pub fn read_matrix_csv(path: &Path) -> Result<Array2<f64>> {
    let rows = read_numeric_rows(path, false)?;
    let n = rows.len();
    if rows[0].len() != n {
        return Err(Error::Input(format!(
            "{}: kernel matrix must be square, got {n} rows of {} columns",
            path.display(),
            rows[0].len()
        )));
    }
    Array2::from_shape_vec((n, n), rows.into_iter().flatten().collect())
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_numeric_rows(path: &Path, has_header: bool) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(|e| Error::Input(format!("cannot open {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(col, cell)| {
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        Error::Input(format!(
                            "{}: row {line}, column {}: {cell:?} is not a finite number",
                            path.display(),
                            col + 1
                        ))
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if values.len() != first.len() {
                return Err(Error::Input(format!(
                    "{}: row {line} has {} columns, expected {}",
                    path.display(),
                    values.len(),
                    first.len()
                )));
            }
        }
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(Error::Input(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}
