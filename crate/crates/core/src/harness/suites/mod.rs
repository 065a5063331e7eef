//! Named suites. Each returns its checks; [`run_suite`] assembles the report.

mod brodzki;
mod complexes;
mod fedosov;
mod fundamental;
mod koszul;
mod liecw;
mod weyl;

use std::time::Instant;

use serde_json::{json, Map, Value};

use super::config::{SuiteConfig, SuiteName};
use super::report::{Check, Report};
use super::HarnessError;
use crate::conventions;
use crate::sample::Sampler;

pub use complexes::lambda_homology_k_eta;
pub use fundamental::{golden_table, table_to_json, GOLDEN_M4};

/// Sampler for one check: the seed is split by the check name, so results
/// do not depend on the order in which checks run.
pub(crate) fn sampler(cfg: &SuiteConfig, name: &str) -> Sampler {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes().chain(cfg.seed.to_le_bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    Sampler::new(h)
}

fn suite_checks(name: SuiteName, cfg: &SuiteConfig) -> Result<Vec<Check>, HarnessError> {
    Ok(match name {
        SuiteName::Complexes => complexes::run(cfg),
        SuiteName::Weyl => weyl::run(cfg),
        SuiteName::Koszul => koszul::run(cfg),
        SuiteName::Brodzki => brodzki::run(cfg),
        SuiteName::Fundamental => fundamental::run(cfg)?,
        SuiteName::Liecw => liecw::run(cfg),
        SuiteName::Fedosov => fedosov::run(cfg),
        SuiteName::All => unreachable!("expanded by run_suite"),
    })
}

fn params(cfg: &SuiteConfig) -> Value {
    let mut p = match serde_json::to_value(cfg).expect("config serializes") {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    p.remove("format");
    p.remove("suite");
    p.insert("conventions".into(), serde_json::to_value(conventions::active()).expect("conventions serialize"));
    Value::Object(p)
}

/// Run the configured suite; `all` runs every suite and prefixes nothing,
/// since check names already carry their suite.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    let names: Vec<SuiteName> = if cfg.suite == SuiteName::All { SuiteName::EACH.to_vec() } else { vec![cfg.suite] };
    let mut checks = Vec::new();
    let mut timing = Map::new();
    for n in names {
        let start = Instant::now();
        checks.extend(suite_checks(n, cfg)?);
        timing.insert(n.to_string(), json!(start.elapsed().as_secs_f64()));
    }
    let timing = cfg.timing.then_some(Value::Object(timing));
    Ok(Report::new(cfg.suite.as_str(), params(cfg), checks, timing))
}
