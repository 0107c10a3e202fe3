//! In-memory and on-disk caches of q-expansions.
//!
//! Text format of one expansion:
//!
//! ```text
//! ppoly-expansion 1
//! weight 24
//! kind eigenform 0
//! coefficients real 1096
//! 0 0x0p0
//! 1 0x1p0
//! ...
//! ```
//!
//! `kind` is `eisenstein`, `eigenform <i>` or `basis-element <i>`.
//! `coefficients exact` is followed by `index p/q` lines; `coefficients real
//! <bits>` by `index <hex literal>` lines, the literal being
//! `[-]0x<hex significand>p<binary exponent>`. An eigenform package file
//! starts with `ppoly-eigenforms 1`, `weight`, `precision` and `forms <d>`
//! lines, then for each form a `certificate <t2> <t3>` line and one
//! expansion block.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock, RwLock};

use super::{hecke_eigenforms, Coefficients, EigenformPackage, FormKind, FourierExpansion, HeckeCertificate};
use crate::arith::{parse_hex_literal, to_hex_literal, PrecisionContext, Rat};
use crate::error::{Error, Result};

pub fn write_expansion<W: Write>(f: &FourierExpansion, out: &mut W) -> Result<()> {
    writeln!(out, "ppoly-expansion 1")?;
    writeln!(out, "weight {}", f.weight)?;
    match f.kind {
        FormKind::Eisenstein => writeln!(out, "kind eisenstein")?,
        FormKind::Eigenform(i) => writeln!(out, "kind eigenform {i}")?,
        FormKind::BasisElement(i) => writeln!(out, "kind basis-element {i}")?,
    }
    match &f.coeffs {
        Coefficients::Exact(v) => {
            writeln!(out, "coefficients exact")?;
            for (n, a) in v.iter().enumerate() {
                writeln!(out, "{n} {a}")?;
            }
        }
        Coefficients::Real(v) => {
            writeln!(out, "coefficients real {}", v.first().map(|x| x.prec()).unwrap_or(64))?;
            for (n, a) in v.iter().enumerate() {
                writeln!(out, "{n} {}", to_hex_literal(a))?;
            }
        }
    }
    writeln!(out, "end")?;
    Ok(())
}

struct Lines<R: BufRead> {
    inner: std::io::Lines<R>,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self) -> Result<String> {
        loop {
            match self.inner.next() {
                Some(line) => {
                    let line = line?;
                    let t = line.trim();
                    if !t.is_empty() {
                        return Ok(t.to_string());
                    }
                }
                None => return Err(Error::Parse("unexpected end of expansion data".into())),
            }
        }
    }

    fn expect_field(&mut self, key: &str) -> Result<Vec<String>> {
        let line = self.next_line()?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(key) {
            return Err(Error::Parse(format!("expected `{key}`, found `{line}`")));
        }
        Ok(parts.map(str::to_string).collect())
    }
}

fn parse_num<T: std::str::FromStr>(s: Option<&String>, what: &str) -> Result<T> {
    s.and_then(|x| x.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad or missing {what}")))
}

fn read_block<R: BufRead>(lines: &mut Lines<R>) -> Result<FourierExpansion> {
    let head = lines.expect_field("ppoly-expansion")?;
    if head.first().map(String::as_str) != Some("1") {
        return Err(Error::Parse("unsupported expansion format version".into()));
    }
    let weight: u32 = parse_num(lines.expect_field("weight")?.first(), "weight")?;
    let kind_parts = lines.expect_field("kind")?;
    let kind = match kind_parts.first().map(String::as_str) {
        Some("eisenstein") => FormKind::Eisenstein,
        Some("eigenform") => FormKind::Eigenform(parse_num(kind_parts.get(1), "index")?),
        Some("basis-element") => FormKind::BasisElement(parse_num(kind_parts.get(1), "index")?),
        _ => return Err(Error::Parse("unknown kind".into())),
    };
    let c = lines.expect_field("coefficients")?;
    let real_prec: Option<u32> = match c.first().map(String::as_str) {
        Some("exact") => None,
        Some("real") => Some(parse_num(c.get(1), "precision")?),
        _ => return Err(Error::Parse("unknown coefficient type".into())),
    };
    let mut exact = Vec::new();
    let mut real = Vec::new();
    loop {
        let line = lines.next_line()?;
        if line == "end" {
            break;
        }
        let (idx, val) = line
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("bad coefficient line `{line}`")))?;
        let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("bad index `{idx}`")))?;
        let expected = exact.len() + real.len();
        if idx != expected {
            return Err(Error::Parse(format!("index {idx} out of order, expected {expected}")));
        }
        match real_prec {
            None => exact.push(
                val.trim()
                    .parse::<Rat>()
                    .map_err(|_| Error::Parse(format!("bad rational `{val}`")))?,
            ),
            Some(p) => real.push(parse_hex_literal(val.trim(), p)?),
        }
    }
    let coeffs = match real_prec {
        None => Coefficients::Exact(exact),
        Some(_) => Coefficients::Real(real),
    };
    Ok(FourierExpansion { weight, kind, coeffs })
}

pub fn read_expansion<R: BufRead>(input: R) -> Result<FourierExpansion> {
    read_block(&mut Lines { inner: input.lines() })
}

pub fn write_package(pkg: &EigenformPackage, path: &Path) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut out = BufWriter::new(fs::File::create(&tmp)?);
        writeln!(out, "ppoly-eigenforms 1")?;
        writeln!(out, "weight {}", pkg.weight)?;
        writeln!(out, "precision {}", pkg.precision)?;
        writeln!(out, "forms {}", pkg.forms.len())?;
        for (f, c) in pkg.forms.iter().zip(&pkg.certificates) {
            writeln!(
                out,
                "certificate {} {}",
                to_hex_literal(&c.t2_residual),
                to_hex_literal(&c.t3_residual)
            )?;
            write_expansion(f, &mut out)?;
        }
        out.flush()?;
    }
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn read_package(path: &Path) -> Result<EigenformPackage> {
    let mut lines = Lines {
        inner: BufReader::new(fs::File::open(path)?).lines(),
    };
    if lines.expect_field("ppoly-eigenforms")?.first().map(String::as_str) != Some("1") {
        return Err(Error::Parse("unsupported package format version".into()));
    }
    let weight: u32 = parse_num(lines.expect_field("weight")?.first(), "weight")?;
    let precision: u32 = parse_num(lines.expect_field("precision")?.first(), "precision")?;
    let count: usize = parse_num(lines.expect_field("forms")?.first(), "form count")?;
    let mut forms = Vec::with_capacity(count);
    let mut certificates = Vec::with_capacity(count);
    for _ in 0..count {
        let c = lines.expect_field("certificate")?;
        if c.len() != 2 {
            return Err(Error::Parse("certificate needs two values".into()));
        }
        certificates.push(HeckeCertificate {
            t2_residual: parse_hex_literal(&c[0], precision)?,
            t3_residual: parse_hex_literal(&c[1], precision)?,
        });
        forms.push(read_block(&mut lines)?);
    }
    if forms.is_empty() || forms.iter().any(|f| f.weight != weight) {
        return Err(Error::Parse("inconsistent package".into()));
    }
    Ok(EigenformPackage {
        weight,
        forms,
        certificates,
        precision,
    })
}

type Key = (u32, u32);

fn memory() -> &'static RwLock<HashMap<Key, Arc<EigenformPackage>>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Arc<EigenformPackage>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn disk_path(dir: &Path, k: u32, bits: u32) -> PathBuf {
    dir.join(format!("eigenforms-k{k}-b{bits}.txt"))
}

/// Eigenforms of weight `k` with at least `n` coefficients, served from the
/// process cache, then `dir`, then computed (and written back to both).
pub fn eigenforms_cached(k: u32, n: usize, ctx: &PrecisionContext, dir: Option<&Path>) -> Result<Arc<EigenformPackage>> {
    let key = (k, ctx.bits());
    if let Some(pkg) = memory().read().expect("form cache poisoned").get(&key) {
        if pkg.truncation() >= n {
            return Ok(pkg.clone());
        }
    }
    let from_disk = dir
        .map(|d| disk_path(d, k, ctx.bits()))
        .filter(|p| p.exists())
        .and_then(|p| read_package(&p).ok())
        .filter(|pkg| pkg.weight == k && pkg.truncation() >= n);
    let pkg = match from_disk {
        Some(pkg) => pkg,
        None => {
            let pkg = hecke_eigenforms(k, n, ctx)?;
            if let Some(d) = dir {
                fs::create_dir_all(d)?;
                write_package(&pkg, &disk_path(d, k, ctx.bits()))?;
            }
            pkg
        }
    };
    let pkg = Arc::new(pkg);
    let mut map = memory().write().expect("form cache poisoned");
    let entry = map.entry(key).or_insert_with(|| pkg.clone());
    if entry.truncation() < pkg.truncation() {
        *entry = pkg.clone();
    }
    Ok(pkg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::eisenstein_expansion;

    #[test]
    fn exact_round_trip() {
        let e = eisenstein_expansion(12, 15).unwrap();
        let mut buf = Vec::new();
        write_expansion(&e, &mut buf).unwrap();
        let back = read_expansion(buf.as_slice()).unwrap();
        assert_eq!(back.exact(), e.exact());
        assert_eq!(back.kind, FormKind::Eisenstein);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("0 691/65520"));
    }

    #[test]
    fn package_round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = PrecisionContext::new(128).unwrap();
        let pkg = eigenforms_cached(24, 10, &ctx, Some(dir.path())).unwrap();
        let back = read_package(&disk_path(dir.path(), 24, 128)).unwrap();
        assert_eq!(back.forms.len(), 2);
        for (a, b) in pkg.forms.iter().zip(&back.forms) {
            for m in 0..=10 {
                assert_eq!(a.coeff(m, pkg.precision), b.coeff(m, pkg.precision));
            }
        }
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(read_expansion("ppoly-expansion 1\nweight 12\nkind nope\n".as_bytes()).is_err());
        assert!(read_expansion("ppoly-expansion 1\nweight 12\nkind eisenstein\ncoefficients exact\n1 3\nend\n".as_bytes()).is_err());
    }
}
