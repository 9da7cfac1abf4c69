//! Report schema, atomic JSON writes and CSV traces.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use stakit::fields::LatticeSpec;
use stakit::report::{ConvergenceRow, ResidualReport};
use stakit::{Error, Result};

use crate::config::Command;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub name: String,
    pub max: f64,
    pub l2: f64,
    pub points: usize,
    pub masked: usize,
    pub informational: bool,
    pub tolerance: Option<f64>,
    /// `None` when no tolerance applies.
    pub pass: Option<bool>,
}

/// Field order is the serialization order; `wall_time` stays last so
/// reports compare equal line by line apart from the final entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Command,
    pub seed: u64,
    pub lattice: Option<LatticeSpec>,
    pub residuals: Vec<ResidualEntry>,
    pub scalars: BTreeMap<String, f64>,
    /// Named multivector outputs, 16 coefficients each.
    pub values: BTreeMap<String, Vec<f64>>,
    pub convergence: Vec<ConvergenceRow>,
    pub pass: bool,
    pub wall_time: f64,
    #[serde(skip)]
    pub trace: Option<ResidualReport>,
}

impl Report {
    pub fn new(command: Command, seed: u64) -> Self {
        Report {
            command,
            seed,
            lattice: None,
            residuals: Vec::new(),
            scalars: BTreeMap::new(),
            values: BTreeMap::new(),
            convergence: Vec::new(),
            pass: true,
            wall_time: 0.0,
            trace: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("report: {e}")))
    }

    /// Header plus one row per reported point: lattice coordinates when
    /// the run had a domain, else the sample index.
    pub fn to_csv(&self) -> String {
        let Some(trace) = &self.trace else {
            return String::new();
        };
        let mut out = String::new();
        let head: Vec<&str> = trace.residuals.iter().map(|r| r.name.as_str()).collect();
        let rows = trace.residuals.first().map_or(0, |r| r.values.len());
        match &trace.domain {
            Some(_) => out.push_str("x0,x1,x2,x3"),
            None => out.push_str("index"),
        }
        for h in &head {
            out.push(',');
            out.push_str(h);
        }
        out.push('\n');
        for i in 0..rows {
            match &trace.domain {
                Some(d) => {
                    let x = d.point(i);
                    out.push_str(&format!("{},{},{},{}", x[0], x[1], x[2], x[3]));
                }
                None => out.push_str(&i.to_string()),
            }
            for r in &trace.residuals {
                out.push(',');
                out.push_str(&r.values.get(i).map_or(String::new(), |v| v.to_string()));
            }
            out.push('\n');
        }
        out
    }
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path.file_name().ok_or_else(|| Error::Io { path: path.display().to_string(), message: "not a file path".into() })?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(io)
}

pub fn write_report(report: &Report, path: &Path) -> Result<()> {
    write_atomic(path, &report.to_json())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_passes() {
        let r = Report::new(Command::Identities, 0);
        assert!(r.pass);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn wall_time_is_last() {
        let json = Report::new(Command::Invert, 1).to_json();
        let last_key = json.lines().rev().find(|l| l.contains(':')).unwrap();
        assert!(last_key.trim_start().starts_with("\"wall_time\""), "{json}");
    }

    #[test]
    fn csv_has_one_row_per_point() {
        let spec = LatticeSpec::new([0.0; 4], 0.5, [5, 6, 5, 5]).unwrap();
        let mut trace = ResidualReport::on(spec);
        trace.push("a", vec![0.0; spec.len()]);
        trace.push("b", vec![1.0; spec.len()]);
        let mut r = Report::new(Command::Maxwell, 0);
        r.trace = Some(trace);
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x0,x1,x2,x3,a,b");
        assert_eq!(lines.len(), 1 + spec.len());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
