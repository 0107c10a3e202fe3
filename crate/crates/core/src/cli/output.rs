use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::roots::ZeroReport;

use super::{SuiteItem, SuiteReport};

pub const CSV_HEADER: [&str; 8] = ["family", "k", "m", "re", "im", "modulus", "deviation", "residual"];

pub fn write_json<T: serde::Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// One row per root, at full precision.
pub fn write_csv<'a, W: Write>(reports: impl IntoIterator<Item = &'a ZeroReport>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for z in reports {
        let m = z.m.map(|m| m.to_string()).unwrap_or_default();
        for r in &z.roots {
            let k = z.k.to_string();
            w.write_record([&z.family, &k, &m, &r.re, &r.im, &r.modulus, &r.deviation, &r.residual])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `<dir>/<suite>.json` and `<dir>/<suite>.csv`.
pub fn write_artifacts(report: &SuiteReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_json(report, fs::File::create(dir.join(format!("{}.json", report.suite)))?)?;
    let zeros = report.items.iter().filter_map(|i| match i {
        SuiteItem::Zeros(z) => Some(z),
        _ => None,
    });
    write_csv(zeros, fs::File::create(dir.join(format!("{}.csv", report.suite)))?)
}
