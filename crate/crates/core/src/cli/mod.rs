//! Verification suites, report assembly and artifact output behind the
//! `ppoly` binary.

mod build;
mod output;
mod rational;
mod suites;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rug::Float;
use serde::Serialize;

use crate::arith::{to_decimal, BigReal};
use crate::error::{Error, Result};
use crate::roots::{classify, Tolerances, Verdict, ZeroReport};

pub use build::{build_family, FORM_FAMILIES};
pub use output::{write_csv, write_json, write_artifacts, CSV_HEADER};
pub use rational::recognize_rational;

/// Environment variable naming the default on-disk form cache.
pub const CACHE_ENV: &str = "PPOLY_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Msw,
    LalinSmyth,
    CfiOdd,
    FullLevel1,
    DrEisensteinOdd,
    ConjDerivatives,
    Cocycle,
    Fe,
    BernoulliIdentities,
    Sigma2Crosscheck,
    LogIntegral,
    DerivativeOracle,
    ManinRatios,
    EisensteinOracle,
}

pub const ALL_SUITES: [Suite; 14] = [
    Suite::Msw,
    Suite::LalinSmyth,
    Suite::CfiOdd,
    Suite::FullLevel1,
    Suite::DrEisensteinOdd,
    Suite::ConjDerivatives,
    Suite::Cocycle,
    Suite::Fe,
    Suite::BernoulliIdentities,
    Suite::Sigma2Crosscheck,
    Suite::LogIntegral,
    Suite::DerivativeOracle,
    Suite::ManinRatios,
    Suite::EisensteinOracle,
];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Msw => "msw",
            Suite::LalinSmyth => "lalin-smyth",
            Suite::CfiOdd => "cfi-odd",
            Suite::FullLevel1 => "full-level1",
            Suite::DrEisensteinOdd => "dr-eisenstein-odd",
            Suite::ConjDerivatives => "conj-derivatives",
            Suite::Cocycle => "cocycle",
            Suite::Fe => "fe",
            Suite::BernoulliIdentities => "bernoulli-identities",
            Suite::Sigma2Crosscheck => "sigma2-crosscheck",
            Suite::LogIntegral => "log-integral",
            Suite::DerivativeOracle => "derivative-oracle",
            Suite::ManinRatios => "manin-ratios",
            Suite::EisensteinOracle => "eisenstein-oracle",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        ALL_SUITES
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }

    /// `(k_min, k_max, m_max, bits, pass_tol, fail_tol)`.
    fn defaults(self) -> (u32, u32, u32, u32, f64, f64) {
        match self {
            Suite::Msw | Suite::LalinSmyth => (4, 100, 0, 200, 1e-20, 1e-3),
            Suite::CfiOdd | Suite::FullLevel1 => (12, 50, 0, 300, 1e-20, 1e-3),
            Suite::DrEisensteinOdd => (8, 60, 1, 200, 1e-10, 1e-3),
            Suite::ConjDerivatives => (12, 50, 3, 200, 1e-10, 1e-3),
            Suite::Cocycle => (4, 50, 0, 200, 1e-25, 1e-24),
            Suite::Fe => (4, 50, 3, 200, 1e-25, 1e-24),
            Suite::BernoulliIdentities => (4, 50, 0, 200, 1e-30, 1e-29),
            Suite::Sigma2Crosscheck => (12, 12, 1, 200, 1e-8, 1e-7),
            Suite::LogIntegral => (12, 12, 1, 200, 1e-30, 1e-29),
            Suite::DerivativeOracle => (12, 12, 3, 200, 1.0, 2.0),
            Suite::ManinRatios => (12, 26, 0, 300, 1e-80, 1e-79),
            Suite::EisensteinOracle => (4, 50, 0, 200, 1e-30, 1e-29),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub k_min: u32,
    pub k_max: u32,
    pub m_max: u32,
    pub precision_bits: u32,
    pub pass_tol: f64,
    pub fail_tol: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub cache: Option<PathBuf>,
}

impl SuiteConfig {
    /// The default grid for `suite`; unknown names are kept and rejected by
    /// [`run_suite`].
    pub fn new(suite: &str) -> SuiteConfig {
        let (k_min, k_max, m_max, bits, pass, fail) = Suite::parse(suite).map(Suite::defaults).unwrap_or((12, 50, 3, 200, 1e-10, 1e-3));
        SuiteConfig {
            suite: suite.to_string(),
            k_min,
            k_max,
            m_max,
            precision_bits: bits,
            pass_tol: pass,
            fail_tol: fail,
            out: None,
            cache: std::env::var_os(CACHE_ENV).map(PathBuf::from),
        }
    }

    pub fn validate(&self) -> Result<Suite> {
        let suite = Suite::parse(&self.suite)?;
        let bad = |msg: String| Err(Error::ConfigInvalid(msg));
        if self.k_min % 2 == 1 || self.k_max % 2 == 1 {
            return bad(format!("weights must be even, got {}..={}", self.k_min, self.k_max));
        }
        if self.k_min > self.k_max {
            return bad(format!("empty weight range {}..={}", self.k_min, self.k_max));
        }
        if !(self.pass_tol > 0.0 && self.pass_tol < self.fail_tol) {
            return bad(format!("need 0 < pass_tol < fail_tol, got {} and {}", self.pass_tol, self.fail_tol));
        }
        if self.k_max > 30 && self.precision_bits < 128 {
            return bad(format!("weights above 30 need at least 128 bits, got {}", self.precision_bits));
        }
        if self.precision_bits < 64 {
            return bad(format!("precision {} below 64 bits", self.precision_bits));
        }
        Ok(suite)
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            pass: self.pass_tol,
            fail: self.fail_tol,
        }
    }

    fn weights(&self, lo: u32) -> impl Iterator<Item = u32> {
        (self.k_min.max(lo)..=self.k_max).step_by(2)
    }
}

/// A numerical identity `lhs = rhs` checked to `tolerance`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    pub k: u32,
    pub m: Option<u32>,
    pub lhs: String,
    pub rhs: String,
    pub difference: String,
    pub error_bound: String,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl IdentityCheck {
    /// Verdict from `difference` known to within `error_bound`.
    pub fn new(label: impl Into<String>, k: u32, m: Option<u32>, lhs: String, rhs: String, difference: &BigReal, error_bound: &BigReal, tol: &Tolerances) -> Self {
        IdentityCheck {
            label: label.into(),
            k,
            m,
            lhs,
            rhs,
            difference: to_decimal(difference),
            error_bound: to_decimal(error_bound),
            tolerance: tol.pass,
            verdict: classify(difference, error_bound, tol),
        }
    }

    /// Scalar identity with exact sides; no computation error.
    pub fn exact(label: impl Into<String>, k: u32, m: Option<u32>, holds: bool, lhs: String, rhs: String) -> Self {
        IdentityCheck {
            label: label.into(),
            k,
            m,
            lhs,
            rhs,
            difference: if holds { "0".into() } else { "nonzero".into() },
            error_bound: "0".into(),
            tolerance: 0.0,
            verdict: if holds { Verdict::Pass } else { Verdict::Fail },
        }
    }
}

/// An item that raised instead of producing a value; counted as inconclusive.
#[derive(Clone, Debug, Serialize)]
pub struct ItemError {
    pub label: String,
    pub k: u32,
    pub m: Option<u32>,
    pub message: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SuiteItem {
    Zeros(ZeroReport),
    Identity(IdentityCheck),
    Error(ItemError),
}

impl SuiteItem {
    pub fn verdict(&self) -> Verdict {
        match self {
            SuiteItem::Zeros(z) => z.verdict,
            SuiteItem::Identity(c) => c.verdict,
            SuiteItem::Error(e) => e.verdict,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SuiteItem::Zeros(z) => match z.m {
                Some(m) => format!("{} k={} m={m}", z.family, z.k),
                None => format!("{} k={}", z.family, z.k),
            },
            SuiteItem::Identity(c) => format!("{} k={}", c.label, c.k),
            SuiteItem::Error(e) => format!("{} k={}", e.label, e.k),
        }
    }

    fn error(label: impl Into<String>, k: u32, m: Option<u32>, e: &Error) -> SuiteItem {
        SuiteItem::Error(ItemError {
            label: label.into(),
            k,
            m,
            message: e.to_string(),
            verdict: Verdict::Inconclusive,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub items: Vec<SuiteItem>,
    pub counts: Counts,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    /// Kept out of the JSON so reports are reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    /// Largest unimodular deviation over the zero reports, if any.
    pub fn max_deviation(&self) -> Option<BigReal> {
        self.items
            .iter()
            .filter_map(|i| match i {
                SuiteItem::Zeros(z) => Some(z.deviation_value.clone()),
                _ => None,
            })
            .reduce(|a, b| if b > a { b } else { a })
    }
}

fn aggregate(items: &[SuiteItem]) -> (Counts, Verdict) {
    let mut c = Counts::default();
    let mut v = Verdict::Pass;
    for item in items {
        let iv = item.verdict();
        match iv {
            Verdict::Pass => c.pass += 1,
            Verdict::Fail => c.fail += 1,
            Verdict::Inconclusive => c.inconclusive += 1,
        }
        v = v.and(iv);
    }
    (c, v)
}

/// Runs one suite over its grid and writes `<suite>.json` and `<suite>.csv`
/// under `cfg.out` if set.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let suite = cfg.validate()?;
    let start = Instant::now();
    let mut notes = Vec::new();
    let items = suites::run(suite, cfg, &mut notes)?;
    let (counts, verdict) = aggregate(&items);
    let report = SuiteReport {
        suite: cfg.suite.clone(),
        config: cfg.clone(),
        items,
        counts,
        verdict,
        notes,
        elapsed: start.elapsed(),
    };
    if let Some(dir) = &cfg.out {
        write_artifacts(&report, dir)?;
    }
    Ok(report)
}

/// `|x|` at the precision of `x`.
fn abs(x: &BigReal) -> BigReal {
    Float::with_val(x.prec(), x.abs_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        let cfg = SuiteConfig::new("nonsense-suite");
        assert!(matches!(run_suite(&cfg), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn config_checks() {
        let mut cfg = SuiteConfig::new("msw");
        cfg.k_min = 5;
        assert!(matches!(cfg.validate(), Err(Error::ConfigInvalid(_))));
        let mut cfg = SuiteConfig::new("msw");
        cfg.pass_tol = 1e-2;
        cfg.fail_tol = 1e-3;
        assert!(matches!(cfg.validate(), Err(Error::ConfigInvalid(_))));
        let mut cfg = SuiteConfig::new("conj-derivatives");
        cfg.precision_bits = 100;
        assert!(matches!(cfg.validate(), Err(Error::ConfigInvalid(_))));
        cfg.k_max = 30;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn every_suite_has_a_round_trip_name() {
        for s in ALL_SUITES {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
            assert!(SuiteConfig::new(s.name()).validate().is_ok());
        }
    }

    #[test]
    fn aggregate_rules() {
        let ok = SuiteItem::Identity(IdentityCheck::exact("a", 4, None, true, "1".into(), "1".into()));
        let bad = SuiteItem::Identity(IdentityCheck::exact("b", 4, None, false, "1".into(), "2".into()));
        let unsure = SuiteItem::error("c", 4, None, &Error::invalid("x"));
        assert_eq!(aggregate(std::slice::from_ref(&ok)).1, Verdict::Pass);
        assert_eq!(aggregate(&[ok.clone(), unsure.clone()]).1, Verdict::Inconclusive);
        assert_eq!(aggregate(&[ok, unsure, bad]).1, Verdict::Fail);
    }
}
