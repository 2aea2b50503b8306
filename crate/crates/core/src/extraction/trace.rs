use serde::Serialize;

use super::Thresholds;
use crate::oracle::Biclique;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    /// Max-degree stars.
    Degree,
    /// Rich hyperplanes classified for degeneracy.
    RichFilter,
    /// Codimension-one witness flats of degenerate hyperplanes.
    Witness,
    /// Dyadic choice among witness flats.
    FlatBuckets,
    /// Points classified against the chosen witness flats.
    DualLayer,
    /// Dyadic choice among witness lines.
    LineBuckets,
    /// 3-flats classified against the chosen lines (`R^5`).
    FlatLayer,
    /// Dyadic choice among the planes of the previous layer (`R^5`).
    PlaneBuckets,
    /// Generic map into the plane.
    Base,
}

impl Step {
    pub fn as_str(self) -> &'static str {
        match self {
            Step::Degree => "degree",
            Step::RichFilter => "rich_filter",
            Step::Witness => "witness",
            Step::FlatBuckets => "flat_buckets",
            Step::DualLayer => "dual_layer",
            Step::LineBuckets => "line_buckets",
            Step::FlatLayer => "flat_layer",
            Step::PlaneBuckets => "plane_buckets",
            Step::Base => "base",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Some witness reached its multiplicity threshold; its biclique is
    /// among the candidates.
    ThresholdExceeded,
    Continue,
    /// Nothing left to peel; the pipeline stops here.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub source: Step,
    pub biclique: Biclique,
    pub exceeds_threshold: bool,
}

/// The chosen dyadic level against the averaging bound it must meet.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pigeonhole {
    pub level: u32,
    /// `2^(level+1)` times the incidences of the chosen bucket.
    pub weighted: u64,
    /// `(beta / rich_divisor) * degenerate incidences / #levels`.
    pub required: f64,
    pub levels: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: Step,
    pub branch: Branch,
    /// Incidences carried into the next layer.
    pub incidences: Option<u64>,
    pub pigeonhole: Option<Pigeonhole>,
    pub metrics: Vec<Metric>,
    pub candidates: Vec<Candidate>,
}

impl StepRecord {
    pub(crate) fn new(step: Step) -> Self {
        StepRecord {
            step,
            branch: Branch::Continue,
            incidences: None,
            pigeonhole: None,
            metrics: Vec::new(),
            candidates: Vec::new(),
        }
    }

    pub(crate) fn metric(&mut self, name: &'static str, value: impl Into<f64>) {
        self.metrics.push(Metric {
            name,
            value: value.into(),
        });
    }

    pub fn get_metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractionTrace {
    pub dim: usize,
    pub m: usize,
    pub n: usize,
    pub incidences: u64,
    pub thresholds: Option<Thresholds>,
    pub steps: Vec<StepRecord>,
    /// Step whose candidate was returned.
    pub chosen: Option<Step>,
}

impl ExtractionTrace {
    pub fn step(&self, step: Step) -> Option<&StepRecord> {
        self.steps.iter().find(|s| s.step == step)
    }

    pub fn candidates(&self) -> impl Iterator<Item = &Candidate> {
        self.steps.iter().flat_map(|s| s.candidates.iter())
    }
}
