//! CSV interchange for patterns, Fry points, curves and test results.
//!
//! Pattern files carry a sidecar comment `# window x_min x_max y_min y_max`
//! followed by a `x,y[,mark]` header and one point per row in decimal
//! notation. Floats are written in shortest round-trip form, so a write/read
//! cycle reproduces coordinates exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimator::CurveStatistic;
use crate::fry::FryPattern;
use crate::geom::{Vec2, Window};
use crate::mctest::{TestConfig, TestResult};
use crate::pattern::PointPattern;

/// Serialize a pattern to the pattern CSV format.
pub fn pattern_to_csv(pattern: &PointPattern) -> String {
    let w = pattern.window();
    let mut out = String::new();
    let _ = writeln!(out, "# window {} {} {} {}", w.x_min, w.x_max, w.y_min, w.y_max);
    let has_marks = pattern.marks().is_some();
    let _ = writeln!(out, "{}", if has_marks { "x,y,mark" } else { "x,y" });
    for (i, p) in pattern.points().iter().enumerate() {
        match pattern.marks() {
            Some(marks) => {
                let _ = writeln!(out, "{},{},{}", p.x, p.y, marks[i]);
            }
            None => {
                let _ = writeln!(out, "{},{}", p.x, p.y);
            }
        }
    }
    out
}

pub fn write_pattern<P: AsRef<Path>>(pattern: &PointPattern, path: P) -> Result<()> {
    fs::write(path, pattern_to_csv(pattern)).map_err(Error::from)
}

/// Parse the pattern CSV format.
///
/// The window comes from the `# window` sidecar when present, otherwise from
/// `fallback_window`. Malformed rows report their 1-based line number;
/// points outside the declared window are a validation error listing the
/// offending lines.
pub fn pattern_from_csv(text: &str, fallback_window: Option<Window>) -> Result<PointPattern> {
    let mut window = fallback_window;
    let mut points = Vec::new();
    let mut marks: Vec<String> = Vec::new();
    let mut header_seen = false;
    let mut has_mark_column = false;
    let mut row_lines = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let fields: Vec<&str> = comment.split_whitespace().collect();
            if fields.first() == Some(&"window") {
                if fields.len() != 5 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "window comment needs 4 numbers".into(),
                    });
                }
                let nums: Vec<f64> = fields[1..]
                    .iter()
                    .map(|f| {
                        f.parse::<f64>().map_err(|_| Error::Parse {
                            line: line_no,
                            message: format!("bad window coordinate '{f}'"),
                        })
                    })
                    .collect::<Result<_>>()?;
                window = Some(Window::new(nums[0], nums[1], nums[2], nums[3]).map_err(
                    |e| Error::Parse {
                        line: line_no,
                        message: e.to_string(),
                    },
                )?);
            }
            continue;
        }
        if !header_seen {
            header_seen = true;
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            match cols.as_slice() {
                ["x", "y"] => has_mark_column = false,
                ["x", "y", "mark"] => has_mark_column = true,
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected header 'x,y' or 'x,y,mark', got '{line}'"),
                    })
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let expected = if has_mark_column { 3 } else { 2 };
        if cols.len() != expected {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {expected} fields, got {}", cols.len()),
            });
        }
        let parse_coord = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad coordinate '{s}'"),
            })
        };
        points.push(Vec2::new(parse_coord(cols[0])?, parse_coord(cols[1])?));
        if has_mark_column {
            marks.push(cols[2].to_string());
        }
        row_lines.push(line_no);
    }

    if !header_seen {
        return Err(Error::Data("pattern file has no header row".into()));
    }
    let window = window.ok_or_else(|| {
        Error::Data("no window: add a '# window x_min x_max y_min y_max' line or pass one".into())
    })?;

    let offenders: Vec<usize> = points
        .iter()
        .zip(&row_lines)
        .filter(|(p, _)| !window.contains(**p))
        .map(|(_, l)| *l)
        .collect();
    if !offenders.is_empty() {
        return Err(Error::Data(format!(
            "{} point(s) outside the declared window, at line(s) {:?}",
            offenders.len(),
            &offenders[..offenders.len().min(10)]
        )));
    }

    PointPattern::with_marks(points, window, has_mark_column.then_some(marks))
}

pub fn read_pattern<P: AsRef<Path>>(path: P, fallback_window: Option<Window>) -> Result<PointPattern> {
    let text = fs::read_to_string(path)?;
    pattern_from_csv(&text, fallback_window)
}

/// Serialize Fry points as `dx,dy,group` rows.
pub fn fry_to_csv(fry: &FryPattern) -> String {
    let mut out = String::from("dx,dy,group\n");
    for (z, g) in fry.vectors().iter().zip(fry.group_of()) {
        let _ = writeln!(out, "{},{},{}", z.x, z.y, g);
    }
    out
}

pub fn write_fry<P: AsRef<Path>>(fry: &FryPattern, path: P) -> Result<()> {
    fs::write(path, fry_to_csv(fry)).map_err(Error::from)
}

/// Serialize a curve as `r,value` rows; missing values become empty fields.
pub fn curve_to_csv(curve: &CurveStatistic) -> String {
    let mut out = String::from("r,value\n");
    for (r, v) in curve.r_grid().iter().zip(curve.values()) {
        match v {
            Some(v) => {
                let _ = writeln!(out, "{r},{v}");
            }
            None => {
                let _ = writeln!(out, "{r},");
            }
        }
    }
    out
}

/// Single-row CSV summary of a test outcome.
pub fn test_result_to_csv(result: &TestResult, cfg: &TestConfig) -> String {
    let warnings = result.warnings.join("; ");
    format!(
        "p_value,ordering,scheme,statistic,r_max,M,seed,warnings\n{},{},{},{},{},{},{},{}\n",
        result.p_value,
        cfg.ordering.name(),
        cfg.scheme.name(),
        cfg.statistic.name(),
        cfg.r_max,
        cfg.bootstrap_count,
        cfg.seed,
        warnings
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::RngStream;

    #[test]
    fn round_trip_is_exact() {
        let w = Window::new(-1.5, 2.5, 0.0, 1.0).unwrap();
        let mut rng = RngStream::new(31, 0);
        let pts: Vec<Vec2> = (0..50)
            .map(|_| Vec2::new(rng.uniform(-1.5, 2.5), rng.uniform(0.0, 1.0)))
            .collect();
        let marks: Vec<String> = (0..50)
            .map(|i| if i % 2 == 0 { "on".into() } else { "off".into() })
            .collect();
        let pattern = PointPattern::with_marks(pts, w, Some(marks)).unwrap();
        let text = pattern_to_csv(&pattern);
        let back = pattern_from_csv(&text, None).unwrap();
        assert_eq!(back.points(), pattern.points());
        assert_eq!(back.marks(), pattern.marks());
        assert_eq!(back.window(), pattern.window());
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(pattern_from_csv("", None).is_err());
        assert!(pattern_from_csv("# window 0 1 0 1\n", None).is_err());
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let text = "# window 0 1 0 1\nx,y\n0.5,0.5\n0.7,oops\n";
        match pattern_from_csv(text, None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn outside_window_lists_offenders() {
        let text = "# window 0 1 0 1\nx,y\n0.5,0.5\n1.5,0.5\n";
        match pattern_from_csv(text, None) {
            Err(Error::Data(msg)) => assert!(msg.contains("[4]"), "message: {msg}"),
            other => panic!("expected data error, got {other:?}"),
        }
    }

    #[test]
    fn fallback_window_applies_when_no_sidecar() {
        let text = "x,y\n0.5,0.5\n";
        assert!(pattern_from_csv(text, None).is_err());
        let w = Window::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let p = pattern_from_csv(text, Some(w)).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn curve_csv_leaves_missing_values_empty() {
        let curve =
            CurveStatistic::new(vec![0.5, 1.0], vec![Some(2.25), None]).unwrap();
        assert_eq!(curve_to_csv(&curve), "r,value\n0.5,2.25\n1,\n");
    }
}
