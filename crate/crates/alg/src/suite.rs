//! Loading and running certificate suites.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use taylor_core::catalog;
use taylor_core::certify::{check_assertion, Certificate, Outcome, Status};

use crate::certfile::{assertion_id, parse_certificate};
use crate::error::{read_file, Error, Result};

/// A certificate together with the file it came from.
#[derive(Clone, Debug)]
pub struct SuiteEntry {
    pub source: String,
    pub certificate: Certificate,
}

/// The outcome of one assertion.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    /// `<algebra>#<position> <assertion>`, positions counted from 1.
    pub id: String,
    #[serde(serialize_with = "serialize_status")]
    pub status: Status,
    pub detail: String,
    pub millis: u64,
}

fn serialize_status<S: serde::Serializer>(s: &Status, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(s.as_str())
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub records: Vec<Record>,
    pub certificates: usize,
}

impl Report {
    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    /// `certificates=N assertions=M pass=P fail=F inconclusive=I`.
    pub fn summary(&self) -> String {
        format!(
            "certificates={} assertions={} pass={} fail={} inconclusive={}",
            self.certificates,
            self.records.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Inconclusive)
        )
    }

    /// Failures dominate; inconclusive results only count in strict mode.
    pub fn status(&self, strict: bool) -> Status {
        if self.count(Status::Fail) > 0 {
            Status::Fail
        } else if strict && self.count(Status::Inconclusive) > 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    /// One line per assertion, then the summary. No timings, so output is
    /// stable across runs.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{:<12} {}", r.status.as_str(), r.id));
            if !r.detail.is_empty() {
                out.push_str(" :: ");
                out.push_str(&r.detail);
            }
            out.push('\n');
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }

    pub fn render_json(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }
}

macro_rules! embedded {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../data/certificates/", $file)))),*]
    };
}

/// The shipped certificates, one per catalog algebra on at most four
/// elements except the two extra affine entries.
const SHIPPED: &[(&str, &str)] = embedded![
    "s.cert", "m.cert", "z2aff.cert",
    "t1n.cert", "t2n.cert", "t3n.cert", "t4n.cert", "t5n.cert",
    "t1s.cert", "t2s.cert", "t1p.cert", "t2p.cert",
    "t1c.cert", "t2c.cert", "t3c.cert", "t4c.cert", "t5c.cert",
    "t6c.cert", "t7c.cert", "t8c.cert", "t9c.cert", "t10c.cert",
    "t11c.cert", "t12c.cert", "t13c.cert", "t14c.cert", "t15c.cert",
    "t4_1.cert", "t4_2.cert", "t4_3.cert", "t4_4.cert", "t4_5.cert", "t4_6.cert",
    "t4_7.cert", "t4_8.cert", "t4_9.cert", "t4_10.cert", "t4_11.cert", "t4_12.cert",
    "t4_13.cert", "t4_14.cert", "t4_15.cert", "t4_16.cert", "t4_17.cert", "t4_18.cert",
];

/// Parses the shipped suite.
pub fn shipped_suite() -> Result<Vec<SuiteEntry>> {
    SHIPPED
        .iter()
        .map(|(file, text)| {
            let certificate = parse_certificate(text).map_err(|e| e.in_file(Path::new(file)))?;
            Ok(SuiteEntry { source: file.to_string(), certificate })
        })
        .collect()
}

/// Parses every `*.cert` file in `dir`, in file name order.
pub fn load_dir(dir: &Path) -> Result<Vec<SuiteEntry>> {
    let listing = std::fs::read_dir(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    let mut paths: Vec<PathBuf> = listing
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cert"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Usage(format!("no .cert files in {}", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            let certificate = parse_certificate(&read_file(p)?).map_err(|e| e.in_file(p))?;
            Ok(SuiteEntry { source: p.display().to_string(), certificate })
        })
        .collect()
}

/// Checks one certificate, assertions in order. Errors from the checker,
/// such as an unknown catalog name, are recorded as failures.
pub fn run_certificate(cert: &Certificate, cap: usize) -> Vec<Record> {
    let alg = match catalog::get(&cert.algebra) {
        Ok(entry) => entry.algebra,
        Err(e) => {
            return vec![Record { id: cert.algebra.clone(), status: Status::Fail, detail: e.to_string(), millis: 0 }]
        }
    };
    cert.assertions
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let start = Instant::now();
            let outcome = check_assertion(&alg, a, cap).unwrap_or_else(|e| Outcome::fail(format!("error: {e}")));
            Record {
                id: format!("{}#{} {}", cert.algebra, i + 1, assertion_id(a)),
                status: outcome.status,
                detail: outcome.detail,
                millis: start.elapsed().as_millis() as u64,
            }
        })
        .collect()
}

/// Checks every certificate, concurrently when `parallel` is set. Records
/// keep suite order either way.
pub fn run_suite(entries: &[SuiteEntry], cap: usize, parallel: bool) -> Report {
    let per_cert: Vec<Vec<Record>> = if parallel {
        entries.par_iter().map(|e| run_certificate(&e.certificate, cap)).collect()
    } else {
        entries.iter().map(|e| run_certificate(&e.certificate, cap)).collect()
    };
    Report { records: per_cert.into_iter().flatten().collect(), certificates: entries.len() }
}
