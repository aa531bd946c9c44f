//! CSV ingestion and output.
//!
//! Input rows are `f1,...,fd[,label]`. A first row with any non-numeric field
//! is taken as a header and skipped.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use anchornn::PointSet;

use crate::error::{CliError, CliResult};

pub fn load_points(path: &Path, has_labels: bool) -> CliResult<PointSet> {
    let file = File::open(path).map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    parse_points(file, has_labels).map_err(|e| match e {
        CliError::Data(msg) => CliError::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_points(input: impl Read, has_labels: bool) -> CliResult<PointSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut coords = Vec::new();
    let mut labels = Vec::new();
    let mut width = None;
    let mut first = true;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if std::mem::take(&mut first) && record.iter().any(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(CliError::Data(format!(
                    "line {line}: expected {w} fields, found {}",
                    record.len()
                )))
            }
            Some(_) => {}
        }
        let features = if has_labels {
            record.len().saturating_sub(1)
        } else {
            record.len()
        };
        if features == 0 {
            return Err(CliError::Data(format!("line {line}: no coordinates")));
        }
        for field in record.iter().take(features) {
            let x: f64 = field
                .parse()
                .map_err(|_| CliError::Data(format!("line {line}: '{field}' is not a number")))?;
            if !x.is_finite() {
                return Err(CliError::Data(format!("line {line}: non-finite value '{field}'")));
            }
            coords.push(x);
        }
        if has_labels {
            let field = &record[features];
            let label = field
                .parse::<usize>()
                .map_err(|_| CliError::Data(format!("line {line}: label '{field}' is not a nonnegative integer")))?;
            labels.push(label);
        }
    }
    let Some(width) = width else {
        return Err(CliError::Data("no data rows".into()));
    };
    let dim = if has_labels { width - 1 } else { width };
    let points = PointSet::new(coords, dim)?;
    Ok(if has_labels {
        points.with_labels(labels)?
    } else {
        points
    })
}

/// Writes coordinates with 17 significant digits, plus the label column when
/// present, so that reading the file back is bit-exact.
pub fn write_points(path: &Path, points: &PointSet) -> CliResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let labels = points.labels();
    for (i, row) in points.iter().enumerate() {
        let mut fields: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        if let Some(l) = labels {
            fields.push(l[i].to_string());
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// One integer label per line.
pub fn write_labels(path: &Path, labels: &[usize]) -> CliResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for l in labels {
        writeln!(out, "{l}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str, labels: bool) -> CliResult<PointSet> {
        parse_points(s.as_bytes(), labels)
    }

    #[test]
    fn plain_rows() {
        let p = parse("0,0\n1,1\n", false).unwrap();
        assert_eq!((p.len(), p.dim()), (2, 2));
        assert_eq!(p.point(1), &[1.0, 1.0]);
    }

    #[test]
    fn labelled_rows() {
        let p = parse("0,0,1\n5,5,0\n", true).unwrap();
        assert_eq!(p.labels().unwrap(), &[1, 0]);
        assert_eq!(p.dim(), 2);
    }

    #[test]
    fn header_is_skipped() {
        let p = parse("x,y,label\n0.5,1e-3,2\n", true).unwrap();
        assert_eq!(p.point(0), &[0.5, 1e-3]);
        assert_eq!(p.labels().unwrap(), &[2]);
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = parse("1,2\n1,2,3\n", false).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn bad_values() {
        assert!(parse("", false).is_err());
        assert!(parse("x,y\n", false).is_err());
        assert!(parse("1,NaN\n", false).is_err());
        assert!(parse("1,inf\n", false).is_err());
        let err = parse("1,2\n3,oops\n", false).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(parse("1,2,-1\n", true).is_err());
        assert!(parse("1\n", true).is_err());
    }
}
