use std::collections::HashSet;
use std::io::Read;

use csv::{ReaderBuilder, StringRecord, Trim};

use super::report::REPORT_COLUMNS;
use super::GeodesicRecord;
use crate::{Error, Result};

pub const INPUT_COLUMNS: [&str; 6] = [
    "manifold",
    "index",
    "length",
    "tube_radius",
    "vol_parent",
    "vol_drilled",
];

/// Reads geodesic records from CSV with the [`INPUT_COLUMNS`] header.
///
/// A report written by [`emit_report`](super::emit_report) is accepted too;
/// its computed columns are ignored. Empty cells mark absent optional fields.
pub fn parse_records<R: Read>(source: R) -> Result<Vec<GeodesicRecord>> {
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(source);
    let mut rows = reader.records();
    let header = match rows.next() {
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing header".into(),
            })
        }
        Some(h) => h.map_err(|e| csv_parse_error(e, 1))?,
    };
    let width = check_header(&header)?;

    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for row in rows {
        let row = row.map_err(|e| csv_parse_error(e, 0))?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() == 1 && row[0].is_empty() {
            continue;
        }
        if row.len() != width {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", width, row.len()),
            });
        }
        let record = parse_row(&row, line)?;
        if !seen.insert(record.index) {
            return Err(Error::Validation {
                line,
                message: format!("duplicate index {}", record.index),
            });
        }
        records.push(record);
    }
    Ok(records)
}

fn csv_parse_error(e: csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

fn check_header(header: &StringRecord) -> Result<usize> {
    let names: Vec<&str> = header.iter().collect();
    if names == INPUT_COLUMNS || names == REPORT_COLUMNS {
        Ok(names.len())
    } else {
        Err(Error::Parse {
            line: 1,
            message: format!("unexpected header '{}'; expected '{}'", names.join(","), INPUT_COLUMNS.join(",")),
        })
    }
}

fn parse_row(row: &StringRecord, line: u64) -> Result<GeodesicRecord> {
    let manifold = row[0].to_string();
    if manifold.is_empty() {
        return Err(Error::Validation {
            line,
            message: "manifold id is empty".into(),
        });
    }
    let index: i64 = row[1].parse().map_err(|_| Error::Parse {
        line,
        message: format!("index '{}' is not an integer", &row[1]),
    })?;
    if index < 1 {
        return Err(Error::Validation {
            line,
            message: format!("index {} must be at least 1", index),
        });
    }
    let length = required(row, 2, line)?;
    let tube_radius = optional(row, 3, line)?;
    let vol_parent = required(row, 4, line)?;
    let vol_drilled = optional(row, 5, line)?;
    Ok(GeodesicRecord {
        manifold,
        index: index as u64,
        length,
        tube_radius,
        vol_parent,
        vol_drilled,
    })
}

fn required(row: &StringRecord, col: usize, line: u64) -> Result<f64> {
    optional(row, col, line)?.ok_or_else(|| Error::Validation {
        line,
        message: format!("{} is required", INPUT_COLUMNS[col]),
    })
}

fn optional(row: &StringRecord, col: usize, line: u64) -> Result<Option<f64>> {
    let cell = &row[col];
    if cell.is_empty() {
        return Ok(None);
    }
    let v: f64 = cell.parse().map_err(|_| Error::Parse {
        line,
        message: format!("{} '{}' is not a number", INPUT_COLUMNS[col], cell),
    })?;
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Validation {
            line,
            message: format!("{} = {} must be positive and finite", INPUT_COLUMNS[col], cell),
        });
    }
    Ok(Some(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "manifold,index,length,tube_radius,vol_parent,vol_drilled\n";

    fn parse(s: &str) -> Result<Vec<GeodesicRecord>> {
        parse_records(s.as_bytes())
    }

    #[test]
    fn header_only_is_empty() {
        assert!(parse(HEADER).unwrap().is_empty());
        assert!(parse(HEADER.trim_end()).unwrap().is_empty());
    }

    #[test]
    fn optional_radius_absent() {
        let recs = parse(&format!("{HEADER}weeks,1,0.5846,,0.9427,2.8281\n")).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.manifold, "weeks");
        assert_eq!(r.index, 1);
        assert_eq!(r.length, 0.5846);
        assert_eq!(r.tube_radius, None);
        assert_eq!(r.vol_parent, 0.9427);
        assert_eq!(r.vol_drilled, Some(2.8281));
    }

    #[test]
    fn negative_length_is_validation_error() {
        let err = parse(&format!("{HEADER}weeks,1,-1,,0.9427,2.8\n")).unwrap_err();
        assert!(matches!(err, Error::Validation { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn zero_volume_is_validation_error() {
        let err = parse(&format!("{HEADER}weeks,1,1,,0,2.8\n")).unwrap_err();
        assert!(matches!(err, Error::Validation { line: 2, .. }));
    }

    #[test]
    fn duplicate_index_rejected() {
        let src = format!("{HEADER}w,1,1,,1,2\nw,2,1,,1,2\nw,1,1,,1,2\n");
        let err = parse(&src).unwrap_err();
        assert!(matches!(err, Error::Validation { line: 4, .. }), "{err:?}");
    }

    #[test]
    fn malformed_rows_report_line() {
        let err = parse(&format!("{HEADER}w,1,1,,1,2\nw,2,abc,,1,2\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = parse(&format!("{HEADER}w,1,1,1\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse(&format!("{HEADER}w,x,1,,1,2\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn bad_header_rejected() {
        let err = parse("a,b,c\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(matches!(parse("").unwrap_err(), Error::Parse { line: 1, .. }));
    }

    #[test]
    fn missing_required_field() {
        let err = parse(&format!("{HEADER}w,1,,,1,2\n")).unwrap_err();
        assert!(matches!(err, Error::Validation { line: 2, .. }));
    }

    #[test]
    fn whitespace_and_blank_lines_tolerated() {
        let recs = parse(&format!("{HEADER}w, 1 , 0.5 , 0.6 ,1,\n\n")).unwrap();
        assert_eq!(recs[0].tube_radius, Some(0.6));
        assert_eq!(recs[0].vol_drilled, None);
    }
}
