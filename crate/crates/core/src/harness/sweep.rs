use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::experiment::{run_experiment, ExperimentOptions, ReportRow};
use super::generate::{generate, GeneratorSpec, PlantedFlat};
use crate::error::{Error, Result};
use crate::extraction::ExtractionParams;
use crate::oracle::DEFAULT_ORACLE_CAP;
use crate::rational::parse_rational;
use crate::rng::derive_seed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vary {
    /// `noise_points`, `noise_hyperplanes`, `grid_side`, `dim`, or one of
    /// `points_on_flat`, `hyperplanes_through_flat`, `flat_dim` with an
    /// optional `[i]` entry index (default 0).
    pub param: String,
    pub values: Vec<u64>,
}

/// Extraction parameters as written in sweep files; rationals are strings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamsDoc {
    pub beta: Option<String>,
    pub c1: Option<String>,
    pub c5: Option<String>,
    pub t0_const: Option<String>,
    pub rich_divisor: Option<u64>,
    pub retry_cap: Option<u32>,
    pub projection_bound: Option<i64>,
}

impl ParamsDoc {
    pub fn to_params(&self) -> Result<ExtractionParams> {
        let mut p = ExtractionParams::default();
        for (slot, text) in [
            (&mut p.beta, &self.beta),
            (&mut p.c1, &self.c1),
            (&mut p.c5, &self.c5),
            (&mut p.t0_const, &self.t0_const),
        ] {
            if let Some(t) = text {
                *slot = parse_rational(t)?;
            }
        }
        if let Some(k) = self.rich_divisor {
            p.rich_divisor = k;
        }
        if let Some(k) = self.retry_cap {
            p.retry_cap = k;
        }
        if let Some(k) = self.projection_bound {
            p.projection_bound = k;
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub generator: GeneratorSpec,
    pub vary: Vary,
    #[serde(default)]
    pub with_oracle: bool,
    #[serde(default)]
    pub oracle_cap: Option<u128>,
    #[serde(default)]
    pub params: ParamsDoc,
}

enum Target {
    NoisePoints,
    NoiseHyperplanes,
    GridSide,
    Dim,
    PointsOnFlat(usize),
    HyperplanesThroughFlat(usize),
    FlatDim(usize),
}

fn parse_target(param: &str) -> Result<Target> {
    let (name, index) = match param.split_once('[') {
        Some((name, rest)) => {
            let idx = rest
                .strip_suffix(']')
                .and_then(|i| i.parse().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad parameter index in `{param}`")))?;
            (name, idx)
        }
        None => (param, 0),
    };
    Ok(match name {
        "noise_points" => Target::NoisePoints,
        "noise_hyperplanes" => Target::NoiseHyperplanes,
        "grid_side" => Target::GridSide,
        "dim" => Target::Dim,
        "points_on_flat" => Target::PointsOnFlat(index),
        "hyperplanes_through_flat" => Target::HyperplanesThroughFlat(index),
        "flat_dim" => Target::FlatDim(index),
        _ => return Err(Error::InvalidArgument(format!("unknown sweep parameter `{param}`"))),
    })
}

fn entry(spec: &mut GeneratorSpec, i: usize) -> Result<&mut PlantedFlat> {
    let len = spec.planted.len();
    spec.planted.get_mut(i).ok_or(Error::IndexOutOfRange {
        what: "planted entries",
        index: i,
        len,
    })
}

fn apply(spec: &mut GeneratorSpec, target: &Target, value: u64) -> Result<()> {
    let v = value as usize;
    match *target {
        Target::NoisePoints => spec.noise_points = v,
        Target::NoiseHyperplanes => spec.noise_hyperplanes = v,
        Target::GridSide => spec.grid_side = v,
        Target::Dim => spec.dim = v,
        Target::PointsOnFlat(i) => entry(spec, i)?.points_on_flat = v,
        Target::HyperplanesThroughFlat(i) => entry(spec, i)?.hyperplanes_through_flat = v,
        Target::FlatDim(i) => entry(spec, i)?.flat_dim = v,
    }
    Ok(())
}

fn error_row(row: usize, param: &str, value: u64, seed: u64, dim: usize, e: &Error) -> ReportRow {
    ReportRow {
        row,
        param: Some(param.to_string()),
        value: Some(value),
        seed,
        d: dim,
        m: 0,
        n: 0,
        incidences: 0,
        rs_oracle: None,
        rs_extracted: 0,
        r: 0,
        s: 0,
        branch: "none".into(),
        thm4d: None,
        thm5d: None,
        as_lower: None,
        as_upper: None,
        et: None,
        ratio_extracted_oracle: None,
        ratio_rs_bound: None,
        wall_ms: None,
        error: Some(e.to_string()),
    }
}

/// One row per value of the varied parameter, in ascending order. Row `i`
/// uses seed `derive_seed(generator.seed, i)` for both generation and
/// extraction. A failing row is reported, not propagated.
pub fn sweep(spec: &SweepSpec, timing: bool) -> Result<Vec<ReportRow>> {
    if spec.vary.values.is_empty() {
        return Err(Error::EmptyInput("sweep values"));
    }
    let target = parse_target(&spec.vary.param)?;
    let base = spec.params.to_params()?;
    let opts = ExperimentOptions {
        with_oracle: spec.with_oracle,
        oracle_cap: spec.oracle_cap.unwrap_or(DEFAULT_ORACLE_CAP),
        timing,
    };
    let mut values = spec.vary.values.clone();
    values.sort_unstable();

    let rows = values
        .par_iter()
        .enumerate()
        .map(|(row, &value)| {
            let seed = derive_seed(spec.generator.seed, row as u64);
            let mut gen = spec.generator.clone();
            gen.seed = seed;
            let config = apply(&mut gen, &target, value).and_then(|()| generate(&gen));
            let mut out = match config {
                Ok(c) => {
                    let params = ExtractionParams { seed, ..base.clone() };
                    run_experiment(&c, &params, &opts)
                }
                Err(e) => error_row(row, &spec.vary.param, value, seed, gen.dim, &e),
            };
            out.row = row;
            out.param = Some(spec.vary.param.clone());
            out.value = Some(value);
            out
        })
        .collect();
    Ok(rows)
}
