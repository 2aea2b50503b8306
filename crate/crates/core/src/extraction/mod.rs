//! Constructive search for a large `K_{r,s}`.
//!
//! The pipeline peels the configuration in layers. Rich hyperplanes are
//! classified for degeneracy, and each degenerate one hands over a witness
//! flat of codimension one inside it. Witness flats are bucketed dyadically
//! by how many hyperplanes chose them, and the points are then classified
//! against the best bucket, each degenerate point handing over a line. In
//! `R^5` the 3-flats are classified once more against those lines. Finally
//! the last pair of families is mapped generically into the plane. Every
//! flat met on the way is turned into the biclique (points on it) x
//! (hyperplanes through it), and the best one is returned.

mod pipeline;
mod trace;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::degeneracy::check_beta;
use crate::error::{Error, Result};
use crate::rational::{eval_sum, format_rational, int, log2_floor1, ratio, to_f64, Factor, Rational};

pub use pipeline::{extract, Extraction, ExtractionFailure};
pub use trace::{Branch, Candidate, ExtractionTrace, Metric, Pigeonhole, Step, StepRecord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionParams {
    pub beta: Rational,
    pub c1: Rational,
    pub c5: Rational,
    pub t0_const: Rational,
    /// Hyperplanes need at least `I / (rich_divisor * n)` points to count
    /// as rich (and dually for points).
    pub rich_divisor: u64,
    pub retry_cap: u32,
    pub oracle_cap: u128,
    /// Entry bound for generic maps.
    pub projection_bound: i64,
    pub seed: u64,
}

impl Default for ExtractionParams {
    fn default() -> Self {
        ExtractionParams {
            beta: ratio(1, 2),
            c1: Rational::one(),
            c5: Rational::one(),
            t0_const: Rational::one(),
            rich_divisor: 4,
            retry_cap: 32,
            oracle_cap: crate::oracle::DEFAULT_ORACLE_CAP,
            projection_bound: 10_000,
            seed: 0,
        }
    }
}

impl ExtractionParams {
    pub fn validate(&self) -> Result<()> {
        check_beta(&self.beta)?;
        for (name, c) in [("c1", &self.c1), ("c5", &self.c5), ("t0_const", &self.t0_const)] {
            if *c <= Rational::zero() {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        if self.rich_divisor == 0 {
            return Err(Error::InvalidArgument("rich_divisor must be positive".into()));
        }
        Ok(())
    }
}

/// A threshold value, exact when all powers involved are rational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdValue {
    pub value: f64,
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<Rational>,
}

fn ser_opt_rational<S: serde::Serializer>(
    x: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&format_rational(x)),
        None => s.serialize_none(),
    }
}

impl ThresholdValue {
    fn from_terms(terms: &[Vec<Factor>]) -> Self {
        let (value, exact) = eval_sum(terms);
        ThresholdValue { value, exact }
    }

    fn exact(x: Rational) -> Self {
        ThresholdValue {
            value: to_f64(&x),
            exact: Some(x),
        }
    }

    /// `count > self`, exactly when possible.
    pub fn exceeded_by(&self, count: u64) -> bool {
        match &self.exact {
            Some(e) => int(count as i64) > *e,
            None => count as f64 > self.value,
        }
    }

    pub fn reached_by(&self, count: u64) -> bool {
        match &self.exact {
            Some(e) => int(count as i64) >= *e,
            None => count as f64 >= self.value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub s0: ThresholdValue,
    pub r0: ThresholdValue,
    pub t0: Option<ThresholdValue>,
    /// The `max(1, log2(mn))` used in `R^4`; absent in `R^5`, where
    /// logarithmic factors are absorbed into the constants.
    pub log_factor: Option<f64>,
}

/// Witness-multiplicity thresholds.
///
/// * `d = 4`: `s0 = c1 I^(3/2) / (m^(3/2) n^(1/2) L^4)` and `r0 = c5 I^(3/2) /
///   (m^(1/2) n^(3/2) L^3)` with `L = max(1, log2(mn))`.
/// * `d = 5`: `s0 = c1 I^2 / (m^2 n)`, `r0 = c5 I^2 / (m n^2)`, `t0 = t0_const
///   I^2 / (m^2 n)`.
pub fn compute_thresholds(m: u64, n: u64, incidences: u64, d: usize, params: &ExtractionParams) -> Result<Thresholds> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("thresholds need m, n >= 1".into()));
    }
    if incidences as u128 > m as u128 * n as u128 {
        return Err(Error::InvalidArgument(format!(
            "{incidences} incidences exceed m*n = {}",
            m as u128 * n as u128
        )));
    }
    let (mq, nq, iq) = (int(m as i64), int(n as i64), int(incidences as i64));
    match d {
        4 => {
            let log = log2_floor1(&(&mq * &nq));
            let log_factor = Some(log.as_f64());
            let s0 = ThresholdValue::from_terms(&[vec![
                Factor::Pow(params.c1.clone(), 1, 1),
                Factor::Pow(iq.clone(), 3, 2),
                Factor::Pow(mq.clone(), -3, 2),
                Factor::Pow(nq.clone(), -1, 2),
                Factor::Log(log.clone(), -4),
            ]]);
            let r0 = ThresholdValue::from_terms(&[vec![
                Factor::Pow(params.c5.clone(), 1, 1),
                Factor::Pow(iq, 3, 2),
                Factor::Pow(mq, -1, 2),
                Factor::Pow(nq, -3, 2),
                Factor::Log(log, -3),
            ]]);
            Ok(Thresholds {
                s0,
                r0,
                t0: None,
                log_factor,
            })
        }
        5 => {
            let i2 = &iq * &iq;
            let m2n = &mq * &mq * &nq;
            let mn2 = &mq * &nq * &nq;
            Ok(Thresholds {
                s0: ThresholdValue::exact(&params.c1 * &i2 / &m2n),
                r0: ThresholdValue::exact(&params.c5 * &i2 / mn2),
                t0: Some(ThresholdValue::exact(&params.t0_const * i2 / m2n)),
                log_factor: None,
            })
        }
        _ => Err(Error::InvalidArgument(format!("thresholds are defined for d = 4, 5, not {d}"))),
    }
}

/// Bracket `x^(1/q)` between two multiples of `2^-shift`.
fn root_bracket(x: &BigInt, q: u32, shift: u32) -> (Rational, Rational) {
    let scaled: BigInt = x << (shift as usize * q as usize);
    let r = scaled.nth_root(q);
    let exact = num_traits::pow::pow(r.clone(), q as usize) == scaled;
    let denom = BigInt::one() << shift as usize;
    let lo = Rational::new(r.clone(), denom.clone());
    let hi = if exact { lo.clone() } else { Rational::new(r + 1, denom) };
    (lo, hi)
}

/// Whether `I >= C (m n^(2/3) + n m^(3/5))` (`d = 4`) or `I >= C (m n^(3/4) +
/// n m^(2/3))` (`d = 5`), decided exactly by bracketing the radicals.
pub fn check_hypothesis(m: u64, n: u64, incidences: u64, d: usize, constant: &Rational) -> Result<bool> {
    if *constant <= Rational::zero() {
        return Err(Error::InvalidArgument("hypothesis constant must be positive".into()));
    }
    let (mb, nb) = (BigInt::from(m), BigInt::from(n));
    let pw = |b: &BigInt, e: usize| num_traits::pow::pow(b.clone(), e);
    // each term written as (radicand, root)
    let terms: [(BigInt, u32); 2] = match d {
        4 => [(pw(&mb, 3) * pw(&nb, 2), 3), (pw(&nb, 5) * pw(&mb, 3), 5)],
        5 => [(pw(&mb, 4) * pw(&nb, 3), 4), (pw(&nb, 3) * pw(&mb, 2), 3)],
        _ => return Err(Error::InvalidArgument(format!("hypothesis is stated for d = 4, 5, not {d}"))),
    };
    let target = int(incidences as i64) / constant;
    for shift in (0..64).map(|k| k * 8) {
        let (lo0, hi0) = root_bracket(&terms[0].0, terms[0].1, shift);
        let (lo1, hi1) = root_bracket(&terms[1].0, terms[1].1, shift);
        if target >= hi0 + hi1 {
            return Ok(true);
        }
        if target < lo0 + lo1 {
            return Ok(false);
        }
    }
    let approx = |(x, q): &(BigInt, u32)| to_f64(&Rational::from_integer(x.clone())).powf(1.0 / *q as f64);
    Ok(to_f64(&target) >= approx(&terms[0]) + approx(&terms[1]))
}

#[cfg(test)]
mod tests;
