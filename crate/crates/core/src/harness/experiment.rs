use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{bound_set, BoundArgs, BoundName};
use crate::extraction::{extract, ExtractionParams};
use crate::geometry::Configuration;
use crate::oracle::{max_biclique_oracle_with_cap, Biclique, DEFAULT_ORACLE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExperimentOptions {
    pub with_oracle: bool,
    pub oracle_cap: u128,
    /// Record wall time; off for byte-reproducible reports.
    pub timing: bool,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            with_oracle: false,
            oracle_cap: DEFAULT_ORACLE_CAP,
            timing: true,
        }
    }
}

/// One report line. Field order is the column order of CSV reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub row: usize,
    pub param: Option<String>,
    pub value: Option<u64>,
    pub seed: u64,
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub incidences: u64,
    pub rs_oracle: Option<u64>,
    pub rs_extracted: u64,
    pub r: usize,
    pub s: usize,
    /// Pipeline step the extracted biclique came from.
    pub branch: String,
    pub thm4d: Option<f64>,
    pub thm5d: Option<f64>,
    pub as_lower: Option<f64>,
    pub as_upper: Option<f64>,
    pub et: Option<f64>,
    pub ratio_extracted_oracle: Option<f64>,
    /// `rs_extracted` over the dimension's main bound.
    pub ratio_rs_bound: Option<f64>,
    pub wall_ms: Option<f64>,
    pub error: Option<String>,
}

impl ReportRow {
    /// Extracted never beats the oracle.
    pub fn is_consistent(&self) -> bool {
        self.rs_oracle.is_none_or(|o| self.rs_extracted <= o)
    }
}

fn ratio(num: u64, den: f64) -> Option<f64> {
    (den > 0.0 && den.is_finite()).then(|| num as f64 / den)
}

/// Extraction, optional oracle and bounds on one configuration.
pub fn run_experiment(c: &Configuration, params: &ExtractionParams, opts: &ExperimentOptions) -> ReportRow {
    let start = Instant::now();
    let mut errors = Vec::new();

    let (biclique, branch, incidences) = match extract(c, params) {
        Ok(x) => {
            let branch = x.trace.chosen.map_or("none", |s| s.as_str()).to_string();
            (x.biclique, branch, x.trace.incidences)
        }
        Err(f) => {
            errors.push(f.to_string());
            let branch = f.trace.chosen.map_or("none", |s| s.as_str()).to_string();
            (f.best, branch, f.trace.incidences)
        }
    };

    let rs_oracle = if opts.with_oracle {
        match max_biclique_oracle_with_cap(c, opts.oracle_cap) {
            Ok(b) => Some(b.rs),
            Err(e) => {
                errors.push(format!("oracle: {e}"));
                None
            }
        }
    } else {
        None
    };

    let bounds = bound_set(&BoundArgs::new(c.m() as u64, c.n() as u64, incidences, c.dim()));
    let get = |name: BoundName| bounds.iter().find(|b| b.name == name).map(|b| b.value);
    let main = match c.dim() {
        4 => get(BoundName::Thm4d),
        5 => get(BoundName::Thm5d),
        3 => get(BoundName::AsUpper),
        _ => None,
    };
    let Biclique { r, s, rs, .. } = biclique;

    ReportRow {
        row: 0,
        param: None,
        value: None,
        seed: params.seed,
        d: c.dim(),
        m: c.m(),
        n: c.n(),
        incidences,
        rs_oracle,
        rs_extracted: rs,
        r,
        s,
        branch,
        thm4d: get(BoundName::Thm4d),
        thm5d: get(BoundName::Thm5d),
        as_lower: get(BoundName::AsLower),
        as_upper: get(BoundName::AsUpper),
        et: get(BoundName::Et),
        ratio_extracted_oracle: rs_oracle.and_then(|o| ratio(rs, o as f64)),
        ratio_rs_bound: main.and_then(|b| ratio(rs, b)),
        wall_ms: opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        error: (!errors.is_empty()).then(|| errors.join("; ")),
    }
}
