use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::trace::{Branch, Candidate, ExtractionTrace, Pigeonhole, Step, StepRecord};
use super::{compute_thresholds, ExtractionParams, Thresholds};
use crate::bounds::{evaluate_bound, BoundArgs, BoundName};
use crate::degeneracy::{classify_hyperplane_guided, classify_in_container, classify_point_against_flats};
use crate::error::{Error, Result};
use crate::geometry::{Configuration, Flat, Hyperplane, MAX_DIM, MIN_DIM};
use crate::graph::{build_graph, configuration_graph, dyadic_buckets, filter_rich, IncidenceGraph, Side};
use crate::oracle::{best_of, degree_bicliques, validate_biclique, Biclique};
use crate::rational::{int, to_f64, Rational};
use crate::rng::derive_seed;
use crate::transforms::{generic_project, ProjectionOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub biclique: Biclique,
    pub trace: ExtractionTrace,
}

/// A subroutine error, with everything harvested before it.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtractionFailure {
    pub error: Error,
    pub best: Biclique,
    pub trace: ExtractionTrace,
}

impl fmt::Display for ExtractionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.trace.steps.last().map_or("start", |s| s.step.as_str());
        write!(f, "extraction stopped after `{last}`: {}", self.error)
    }
}

impl std::error::Error for ExtractionFailure {}

/// Runs the layered search and returns the best certified biclique found.
pub fn extract(c: &Configuration, params: &ExtractionParams) -> std::result::Result<Extraction, Box<ExtractionFailure>> {
    let g = configuration_graph(c);
    let mut run = Run {
        c,
        g,
        params,
        trace: ExtractionTrace {
            dim: c.dim(),
            m: c.m(),
            n: c.n(),
            incidences: 0,
            thresholds: None,
            steps: Vec::new(),
            chosen: None,
        },
    };
    run.trace.incidences = run.g.edge_count() as u64;
    let outcome = run.execute();
    let best = run.finish();
    match outcome {
        Ok(()) => Ok(Extraction {
            biclique: best,
            trace: run.trace,
        }),
        Err(error) => Err(Box::new(ExtractionFailure {
            error,
            best,
            trace: run.trace,
        })),
    }
}

/// Hyperplane index, core and witness.
type Witnessed = (usize, Flat, Flat);

struct Run<'a> {
    c: &'a Configuration,
    g: IncidenceGraph,
    params: &'a ExtractionParams,
    trace: ExtractionTrace,
}

/// Flats handed over by a layer, with what they were assigned.
type Assignment = BTreeMap<Flat, Vec<usize>>;

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b.max(1))
}

impl Run<'_> {
    fn execute(&mut self) -> Result<()> {
        self.params.validate()?;
        let d = self.c.dim();
        if !(MIN_DIM..=MAX_DIM).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        self.degree_step();
        if d == 2 || self.trace.incidences == 0 {
            return Ok(());
        }
        if d >= 4 {
            self.trace.thresholds = Some(compute_thresholds(
                self.c.m() as u64,
                self.c.n() as u64,
                self.trace.incidences,
                d,
                self.params,
            )?);
        }

        let (degenerate, i_deg) = self.rich_filter_step()?;
        if degenerate.is_empty() {
            return Ok(());
        }
        let witnesses = self.witness_step(degenerate);
        let flats = self.flat_bucket_step(&witnesses, i_deg);

        if d == 3 {
            let points: Vec<Flat> = self.c.points().iter().map(Flat::point).collect();
            return self.base_step(points, flats, 1);
        }

        let (lines, i1_deg) = self.dual_layer_step(&flats)?;
        if lines.is_empty() {
            return Ok(());
        }
        let line_bucket = self.line_bucket_step(&lines, &flats, i1_deg);
        if d == 4 {
            return self.base_step(line_bucket, flats, 1);
        }

        let (planes, i2_deg) = self.flat_layer_step(&flats, &line_bucket)?;
        if planes.is_empty() {
            return Ok(());
        }
        let plane_bucket = self.plane_bucket_step(&planes, &line_bucket, i2_deg);
        self.base_step(line_bucket, plane_bucket, 2)
    }

    fn finish(&mut self) -> Biclique {
        let best = best_of(self.trace.candidates().map(|cand| cand.biclique.clone()));
        let chosen = self
            .trace
            .candidates()
            .find(|cand| cand.biclique == best)
            .map(|cand| cand.source);
        self.trace.chosen = chosen;
        best
    }

    fn thresholds(&self) -> Option<&Thresholds> {
        self.trace.thresholds.as_ref()
    }

    fn candidate(&self, step: Step, b: Biclique, exceeds: bool) -> Option<Candidate> {
        if b.rs == 0 {
            return None;
        }
        debug_assert_eq!(validate_biclique(self.c, &b), Ok(true));
        Some(Candidate {
            source: step,
            biclique: b,
            exceeds_threshold: exceeds,
        })
    }

    /// Candidates for every flat in `flats`, flagged by `exceeds`.
    fn harvest<'f, I>(&self, rec: &mut StepRecord, flats: I)
    where
        I: IntoIterator<Item = (&'f Flat, bool)>,
    {
        let items: Vec<(&Flat, bool)> = flats.into_iter().collect();
        let found: Vec<Candidate> = items
            .par_iter()
            .filter_map(|(f, exceeds)| self.candidate(rec.step, Biclique::on_flat(self.c, f), *exceeds))
            .collect();
        rec.candidates.extend(found);
    }

    fn degree_step(&mut self) {
        let mut rec = StepRecord::new(Step::Degree);
        for b in degree_bicliques(self.c) {
            if let Some(cand) = self.candidate(Step::Degree, b, false) {
                rec.candidates.push(cand);
            }
        }
        rec.metric("max_point_degree", self.g.max_degree(Side::Left) as f64);
        rec.metric("max_hyperplane_degree", self.g.max_degree(Side::Right) as f64);
        if self.c.dim() == 2 || self.trace.incidences == 0 {
            rec.branch = Branch::Exhausted;
        }
        self.trace.steps.push(rec);
    }

    /// Degenerate rich hyperplanes with their witnesses, and their total
    /// incidence count.
    fn rich_filter_step(&mut self) -> Result<(Vec<Witnessed>, u64)> {
        let mut rec = StepRecord::new(Step::RichFilter);
        let n = self.c.n() as u64;
        let k = ceil_div(self.trace.incidences, self.params.rich_divisor * n).max(1);
        let rich = filter_rich(&self.g, Side::Right, k as usize);
        let guides: Vec<Flat> = self.c.hyperplanes().iter().map(Hyperplane::to_flat).collect();
        let verdicts = rich
            .par_iter()
            .map(|&j| classify_hyperplane_guided(&self.c.hyperplanes()[j], self.c.points(), &self.params.beta, &guides))
            .collect::<Result<Vec<_>>>()?;

        let deg = |j: usize| self.g.degree(Side::Right, j) as u64;
        let mut degenerate = Vec::new();
        let (mut i_deg, mut i_nondeg, mut ties) = (0u64, 0u64, 0u32);
        let mut nondeg = Vec::new();
        for (&j, v) in rich.iter().zip(verdicts) {
            ties += v.at_boundary as u32;
            if v.is_degenerate() {
                i_deg += deg(j);
                degenerate.push((j, v.core.expect("degenerate has a core"), v.witness.expect("degenerate has a witness")));
            } else {
                i_nondeg += deg(j);
                nondeg.push(j);
            }
        }
        let i_poor = self.trace.incidences - i_deg - i_nondeg;

        // a nondegenerate hyperplane still yields its own star
        if let Some(&j) = nondeg.iter().max_by_key(|&&j| (deg(j), std::cmp::Reverse(j))) {
            let star = Biclique::new(self.g.neighbors(Side::Right, j).to_vec(), vec![j], None);
            if let Some(cand) = self.candidate(Step::RichFilter, star, false) {
                rec.candidates.push(cand);
            }
        }
        rec.metric("rich_threshold", k as f64);
        rec.metric("rich", rich.len() as f64);
        rec.metric("degenerate", degenerate.len() as f64);
        rec.metric("boundary_ties", ties);
        rec.metric("incidences_poor", i_poor as f64);
        rec.metric("incidences_nondegenerate", i_nondeg as f64);
        if !nondeg.is_empty() {
            let args = BoundArgs {
                m: Some(self.c.m() as u64),
                n: Some(nondeg.len() as u64),
                d: Some(self.c.dim()),
                ..BoundArgs::default()
            };
            if let Ok(et) = evaluate_bound(BoundName::Et, &args) {
                rec.metric("et_nondegenerate", et.value);
            }
        }
        rec.incidences = Some(i_deg);
        if degenerate.is_empty() {
            rec.branch = Branch::Exhausted;
        }
        self.trace.steps.push(rec);
        Ok((degenerate, i_deg))
    }

    fn witness_step(&mut self, degenerate: Vec<(usize, Flat, Flat)>) -> Assignment {
        let mut rec = StepRecord::new(Step::Witness);
        let mut witnesses: Assignment = BTreeMap::new();
        let mut cores: BTreeSet<Flat> = BTreeSet::new();
        for (j, core, witness) in degenerate {
            witnesses.entry(witness).or_default().push(j);
            cores.insert(core);
        }
        let s0 = self.thresholds().map(|t| t.s0.clone());
        let flagged: Vec<(&Flat, bool)> = witnesses
            .iter()
            .map(|(f, hs)| (f, s0.as_ref().is_some_and(|s| s.reached_by(hs.len() as u64))))
            .collect();
        let exceeded = flagged.iter().filter(|(_, e)| *e).count();
        self.harvest(&mut rec, flagged);
        self.harvest(&mut rec, cores.iter().filter(|f| !witnesses.contains_key(*f)).map(|f| (f, false)));
        rec.metric("witnesses", witnesses.len() as f64);
        rec.metric("max_multiplicity", witnesses.values().map(Vec::len).max().unwrap_or(0) as f64);
        rec.metric("threshold_reached", exceeded as f64);
        rec.branch = if exceeded > 0 {
            Branch::ThresholdExceeded
        } else {
            Branch::Continue
        };
        self.trace.steps.push(rec);
        witnesses
    }

    /// Dyadic level maximizing `2^(level+1) * weight(bucket)`, smallest level
    /// on ties.
    fn choose_level(
        &self,
        rec: &mut StepRecord,
        multiplicities: &[u64],
        weight: impl Fn(usize) -> u64,
        degenerate_incidences: u64,
    ) -> Vec<usize> {
        let buckets = dyadic_buckets(multiplicities.iter().copied().enumerate());
        let scored: Vec<(u64, u64)> = buckets
            .iter()
            .map(|b| {
                let inc: u64 = b.members.iter().map(|&i| weight(i)).sum();
                (inc << (b.level + 1), inc)
            })
            .collect();
        let Some(best) = (0..buckets.len()).max_by(|&a, &b| scored[a].0.cmp(&scored[b].0).then(b.cmp(&a))) else {
            rec.branch = Branch::Exhausted;
            return Vec::new();
        };
        let required = to_f64(
            &(&self.params.beta * int(degenerate_incidences as i64)
                / Rational::from_integer(BigInt::from(self.params.rich_divisor))
                / int(buckets.len() as i64)),
        );
        rec.pigeonhole = Some(Pigeonhole {
            level: buckets[best].level,
            weighted: scored[best].0,
            required,
            levels: buckets.len(),
            holds: scored[best].0 as f64 >= required,
        });
        rec.incidences = Some(scored[best].1);
        rec.metric("bucket_size", buckets[best].members.len() as f64);
        buckets[best].members.clone()
    }

    fn flat_bucket_step(&mut self, witnesses: &Assignment, i_deg: u64) -> Vec<Flat> {
        let mut rec = StepRecord::new(Step::FlatBuckets);
        let flats: Vec<&Flat> = witnesses.keys().collect();
        let mult: Vec<u64> = witnesses.values().map(|v| v.len() as u64).collect();
        let points_on: Vec<u64> = flats
            .par_iter()
            .map(|f| self.c.points().iter().filter(|p| f.contains_point(p)).count() as u64)
            .collect();
        let chosen = self.choose_level(&mut rec, &mult, |i| points_on[i], i_deg);
        self.trace.steps.push(rec);
        chosen.into_iter().map(|i| flats[i].clone()).collect()
    }

    /// Rich points classified against `flats`; returns witness lines with the
    /// points assigned to them, and the degenerate points' incidences.
    fn dual_layer_step(&mut self, flats: &[Flat]) -> Result<(Assignment, u64)> {
        let mut rec = StepRecord::new(Step::DualLayer);
        let through: Vec<Vec<Flat>> = self
            .c
            .points()
            .par_iter()
            .map(|p| flats.iter().filter(|f| f.contains_point(p)).cloned().collect())
            .collect();
        let i_layer: u64 = through.iter().map(|v| v.len() as u64).sum();
        let k = ceil_div(i_layer, self.params.rich_divisor * self.c.m() as u64).max(1);
        let rich: Vec<usize> = (0..self.c.m()).filter(|&i| through[i].len() as u64 >= k).collect();
        let verdicts = rich
            .par_iter()
            .map(|&i| classify_point_against_flats(&self.c.points()[i], &through[i], &self.params.beta))
            .collect::<Result<Vec<_>>>()?;

        let mut lines: Assignment = BTreeMap::new();
        let (mut i_deg, mut ties) = (0u64, 0u32);
        for (&i, v) in rich.iter().zip(verdicts) {
            ties += v.at_boundary as u32;
            if let Some(line) = v.witness {
                i_deg += through[i].len() as u64;
                lines.entry(line).or_default().push(i);
            }
        }
        let r0 = self.thresholds().map(|t| t.r0.clone());
        let flagged: Vec<(&Flat, bool)> = lines
            .iter()
            .map(|(f, ps)| (f, r0.as_ref().is_some_and(|r| r.reached_by(ps.len() as u64))))
            .collect();
        let exceeded = flagged.iter().filter(|(_, e)| *e).count();
        self.harvest(&mut rec, flagged);
        rec.metric("rich_threshold", k as f64);
        rec.metric("rich", rich.len() as f64);
        rec.metric("degenerate", lines.values().map(Vec::len).sum::<usize>() as f64);
        rec.metric("boundary_ties", ties);
        rec.metric("lines", lines.len() as f64);
        rec.metric("threshold_reached", exceeded as f64);
        rec.incidences = Some(i_deg);
        rec.branch = if lines.is_empty() {
            Branch::Exhausted
        } else if exceeded > 0 {
            Branch::ThresholdExceeded
        } else {
            Branch::Continue
        };
        self.trace.steps.push(rec);
        Ok((lines, i_deg))
    }

    fn line_bucket_step(&mut self, lines: &Assignment, flats: &[Flat], i_deg: u64) -> Vec<Flat> {
        let mut rec = StepRecord::new(Step::LineBuckets);
        let keys: Vec<&Flat> = lines.keys().collect();
        let mult: Vec<u64> = lines.values().map(|v| v.len() as u64).collect();
        let inc: Vec<u64> = keys
            .par_iter()
            .map(|l| flats.iter().filter(|f| l.is_subset_of(f)).count() as u64)
            .collect();
        let chosen = self.choose_level(&mut rec, &mult, |i| inc[i], i_deg);
        self.trace.steps.push(rec);
        chosen.into_iter().map(|i| keys[i].clone()).collect()
    }

    /// 3-flats classified against the lines they contain; returns witness
    /// planes with the flats assigned to them.
    fn flat_layer_step(&mut self, flats: &[Flat], lines: &[Flat]) -> Result<(Assignment, u64)> {
        let mut rec = StepRecord::new(Step::FlatLayer);
        let inside: Vec<Vec<Flat>> = flats
            .par_iter()
            .map(|f| lines.iter().filter(|l| l.is_subset_of(f)).cloned().collect())
            .collect();
        let i_layer: u64 = inside.iter().map(|v| v.len() as u64).sum();

        // the same incidences seen as point-plane incidences in R^3
        let opts = ProjectionOptions {
            entry_bound: self.params.projection_bound,
            retry_cap: self.params.retry_cap,
        };
        let projected = generic_project(lines, flats, 3, derive_seed(self.params.seed, 1), &opts)?;
        rec.metric("projected_incidences", projected.edge_count as f64);
        rec.metric("projection_retries", projected.map.retries_used);

        let k = ceil_div(i_layer, self.params.rich_divisor * flats.len() as u64).max(1);
        let rich: Vec<usize> = (0..flats.len()).filter(|&a| inside[a].len() as u64 >= k).collect();
        let verdicts = rich
            .par_iter()
            .map(|&a| classify_in_container(&flats[a], &inside[a], &self.params.beta, flats))
            .collect::<Result<Vec<_>>>()?;

        let mut planes: Assignment = BTreeMap::new();
        let mut cores: BTreeSet<Flat> = BTreeSet::new();
        let (mut i_deg, mut ties) = (0u64, 0u32);
        for (&a, v) in rich.iter().zip(verdicts) {
            ties += v.at_boundary as u32;
            if let (Some(core), Some(w)) = (v.core, v.witness) {
                i_deg += inside[a].len() as u64;
                planes.entry(w).or_default().push(a);
                cores.insert(core);
            }
        }
        let t0 = self.thresholds().and_then(|t| t.t0.clone());
        let flagged: Vec<(&Flat, bool)> = planes
            .iter()
            .map(|(f, fs)| (f, t0.as_ref().is_some_and(|t| t.reached_by(fs.len() as u64))))
            .collect();
        let exceeded = flagged.iter().filter(|(_, e)| *e).count();
        self.harvest(&mut rec, flagged);
        self.harvest(&mut rec, cores.iter().filter(|f| !planes.contains_key(*f)).map(|f| (f, false)));
        rec.metric("layer_incidences", i_layer as f64);
        rec.metric("rich_threshold", k as f64);
        rec.metric("rich", rich.len() as f64);
        rec.metric("degenerate", planes.values().map(Vec::len).sum::<usize>() as f64);
        rec.metric("boundary_ties", ties);
        rec.metric("threshold_reached", exceeded as f64);
        rec.incidences = Some(i_deg);
        rec.branch = if planes.is_empty() {
            Branch::Exhausted
        } else if exceeded > 0 {
            Branch::ThresholdExceeded
        } else {
            Branch::Continue
        };
        self.trace.steps.push(rec);
        Ok((planes, i_deg))
    }

    fn plane_bucket_step(&mut self, planes: &Assignment, lines: &[Flat], i_deg: u64) -> Vec<Flat> {
        let mut rec = StepRecord::new(Step::PlaneBuckets);
        let keys: Vec<&Flat> = planes.keys().collect();
        let mult: Vec<u64> = planes.values().map(|v| v.len() as u64).collect();
        let inc: Vec<u64> = keys
            .par_iter()
            .map(|p| lines.iter().filter(|l| l.is_subset_of(p)).count() as u64)
            .collect();
        let chosen = self.choose_level(&mut rec, &mult, |i| inc[i], i_deg);
        self.trace.steps.push(rec);
        chosen.into_iter().map(|i| keys[i].clone()).collect()
    }

    /// Maps `(low, high)` into the plane, compares the incidence count with
    /// the planar bound, and harvests the richest objects on either side.
    fn base_step(&mut self, low: Vec<Flat>, high: Vec<Flat>, seed_slot: u64) -> Result<()> {
        let mut rec = StepRecord::new(Step::Base);
        rec.branch = Branch::Exhausted;
        let opts = ProjectionOptions {
            entry_bound: self.params.projection_bound,
            retry_cap: self.params.retry_cap,
        };
        let seed = derive_seed(self.params.seed, 1 + seed_slot);
        let original = build_graph(&low, &high)?;
        let proj = generic_project(&low, &high, 2, seed, &opts);
        let proj = match proj {
            Ok(p) => p,
            Err(e) => {
                self.trace.steps.push(rec);
                return Err(e);
            }
        };
        let planar = build_graph(&proj.low, &proj.high)?;
        let args = BoundArgs {
            m: Some(low.len().max(1) as u64),
            n: Some(high.len().max(1) as u64),
            d: Some(2),
            ..BoundArgs::default()
        };
        let st = evaluate_bound(BoundName::KstFree, &args)?.value;
        rec.metric("low", low.len() as f64);
        rec.metric("high", high.len() as f64);
        rec.metric("incidences", original.edge_count() as f64);
        rec.metric("projected_incidences", planar.edge_count() as f64);
        rec.metric("projection_retries", proj.map.retries_used);
        rec.metric("planar_bound", st);
        rec.metric("planar_bound_exceeded", (planar.edge_count() as f64 > st) as u8);
        rec.incidences = Some(planar.edge_count() as u64);

        let top = |side: Side, len: usize| {
            (0..len).max_by(|&a, &b| planar.degree(side, a).cmp(&planar.degree(side, b)).then(b.cmp(&a)))
        };
        let mut picked = Vec::new();
        if let Some(i) = top(Side::Left, low.len()) {
            picked.push((&low[i], false));
        }
        if let Some(j) = top(Side::Right, high.len()) {
            picked.push((&high[j], false));
        }
        self.harvest(&mut rec, picked);
        self.trace.steps.push(rec);
        Ok(())
    }
}
