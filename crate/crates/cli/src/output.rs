use std::fs;
use std::path::{Path, PathBuf};

use cavity_zeno::AmplitudeSeries;
use serde::Serialize;

use crate::error::{CliError, Result};

pub const SERIES_HEADER: &str = "t,re_c1,im_c1,re_c2,im_c2,survival,concurrence";

/// 17 significant digits: round-trips every f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    text.push('\n');
    write_file(path, &text)
}

pub fn series_csv(series: &AmplitudeSeries) -> String {
    let mut out = String::with_capacity(series.len() * 7 * 24);
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for i in 0..series.len() {
        let (c1, c2) = (series.c1()[i], series.c2()[i]);
        let row = [
            series.times()[i],
            c1.re,
            c1.im,
            c2.re,
            c2.im,
            series.survival()[i],
            series.concurrence()[i],
        ];
        let line: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn write_series(path: &Path, series: &AmplitudeSeries) -> Result<()> {
    write_file(path, &series_csv(series))
}

/// Wide table: a leading column followed by one column per curve.
pub fn table_csv(header: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn file_name(path: &Path) -> PathBuf {
    path.file_name().map(PathBuf::from).unwrap_or_else(|| path.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.0, 1.0, -0.1, 1.0 / 3.0, 6.02e23, 5e-324, f64::MAX] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn table_layout() {
        let text = table_csv(&["x".into(), "y".into()], &[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert_eq!(lines.len(), 3);
    }
}
