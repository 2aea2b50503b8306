//! β-degeneracy of hyperplanes (and flats) with respect to the objects they
//! contain, and the dual notion for points with respect to the hyperplanes
//! (or flats) through them.
//!
//! A container `C` holding objects `O` is β-degenerate when some proper
//! subflat of `C` contains strictly more than `β·|O|` of them. A point `p` is
//! dual β-degenerate when some line through `p` lies in at least `β·|F|` of
//! the flats `F` through `p`. The two thresholds differ in strictness on
//! purpose; `DegeneracyVerdict::at_boundary` flags the tie.
//!
//! Search is exhaustive and exact. For the container version it relies on a
//! simple fact: the objects inside a proper subflat `G ⊊ C` have an affine
//! hull that is spanned by at most `dim(C)` of them, because every object
//! that is not already inside the running hull raises its dimension by at
//! least one, and the hull stays inside `G`. So hulls of subsets of size
//! `<= dim(C)` cover every candidate.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Flat, Hyperplane, Point, Span};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Degenerate,
    Nondegenerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyVerdict {
    pub beta: Rational,
    /// Number of objects in the container (or flats through the point).
    pub total: usize,
    pub verdict: Verdict,
    /// Richest proper subflat (container version) or richest line (dual).
    pub core: Option<Flat>,
    /// `core` extended to codimension one inside the container; for the dual
    /// version it equals `core`. Present iff degenerate.
    pub witness: Option<Flat>,
    /// Objects on `core` (and on `witness`, which never holds fewer).
    pub witness_count: usize,
    /// `witness_count == β·total` exactly.
    pub at_boundary: bool,
}

impl DegeneracyVerdict {
    fn trivial(beta: &Rational, total: usize) -> Self {
        DegeneracyVerdict {
            beta: beta.clone(),
            total,
            verdict: Verdict::Nondegenerate,
            core: None,
            witness: None,
            witness_count: total,
            at_boundary: false,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.verdict == Verdict::Degenerate
    }
}

pub(crate) fn check_beta(beta: &Rational) -> Result<()> {
    if *beta > Rational::zero() && *beta < Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("beta must lie in (0,1), got {beta}")))
    }
}

fn scaled_total(beta: &Rational, total: usize) -> Rational {
    beta * Rational::from_integer(BigInt::from(total))
}

fn count_in(hull: &Flat, objects: &[Flat]) -> usize {
    objects.iter().filter(|o| o.is_subset_of(hull)).count()
}

/// Proper subflat of `container` holding the most `objects`.
///
/// Ties go to the lower-dimensional flat, then to the smaller canonical
/// form. Every object must lie in the container and there must be at least
/// two of them.
pub fn richest_proper_subflat(container: &Flat, objects: &[Flat]) -> Result<(Flat, usize)> {
    if objects.len() < 2 {
        return Err(Error::InvalidArgument(
            "richest_proper_subflat needs at least two objects".into(),
        ));
    }
    if let Some(i) = objects.iter().position(|o| !o.is_subset_of(container)) {
        return Err(Error::InvalidArgument(format!(
            "object {i} does not lie in the container"
        )));
    }

    let mut seen: HashSet<Flat> = HashSet::new();
    let mut best: Option<(Flat, usize)> = None;
    let max_size = container.dim();
    // iterative DFS over index combinations, carrying the running hull
    let mut stack: Vec<(usize, Flat, usize)> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (i, o.clone(), 1))
        .rev()
        .collect();
    while let Some((last, hull, size)) = stack.pop() {
        if hull.dim() >= container.dim() {
            continue;
        }
        if seen.insert(hull.clone()) {
            let count = count_in(&hull, objects);
            let better = match &best {
                None => true,
                Some((b, bc)) => (count, std::cmp::Reverse(&hull)) > (*bc, std::cmp::Reverse(b)),
            };
            if better {
                best = Some((hull.clone(), count));
            }
        }
        if size == max_size {
            continue;
        }
        for next in ((last + 1)..objects.len()).rev() {
            if let Span::Proper(h) = hull.join(&objects[next]) {
                stack.push((next, h, size + 1));
            }
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("container has no proper subflat candidates".into()))
}

/// Point-set convenience wrapper around [`richest_proper_subflat`].
pub fn richest_proper_subflat_of_points(container: &Flat, points: &[Point]) -> Result<(Flat, usize)> {
    let objects: Vec<Flat> = points.iter().map(Flat::point).collect();
    richest_proper_subflat(container, &objects)
}

/// Grows `core` inside `container` to dimension `dim(container) - 1`.
///
/// Every object already lies in `core` unless `core` is of codimension one
/// (a further object would give a richer proper subflat), so only directions
/// are adjoined. Intersections of the container with guide flats through the
/// current flat are preferred, picking the one lying in the most guides;
/// failing that, echelon directions of the container are used in order.
pub fn extend_witness(core: &Flat, container: &Flat, guides: &[Flat]) -> Flat {
    let target = container.dim().saturating_sub(1);
    let mut current = core.clone();
    while current.dim() < target {
        let through: Vec<&Flat> = guides.iter().filter(|g| current.is_subset_of(g)).collect();
        let mut best: Option<(usize, Flat)> = None;
        for g in &through {
            let Span::Proper(cand) = container.intersect(g) else {
                continue;
            };
            if cand.dim() <= current.dim() || cand.dim() > target {
                continue;
            }
            let support = through.iter().filter(|h| cand.is_subset_of(h)).count();
            let better = match &best {
                None => true,
                Some((s, f)) => (support, std::cmp::Reverse(&cand)) > (*s, std::cmp::Reverse(f)),
            };
            if better {
                best = Some((support, cand));
            }
        }
        if let Some((_, cand)) = best {
            current = cand;
            continue;
        }
        let dir = container
            .directions()
            .iter()
            .find(|v| !current.contains_direction(v))
            .expect("container has a direction outside a lower-dimensional subflat");
        current = current
            .extend_with_direction(dir)
            .proper()
            .expect("extension stays inside a proper container");
    }
    current
}

/// Strict-threshold classification of a container against the objects it
/// holds: degenerate iff the richest proper subflat holds more than
/// `β·|objects|`.
pub fn classify_in_container(
    container: &Flat,
    objects: &[Flat],
    beta: &Rational,
    guides: &[Flat],
) -> Result<DegeneracyVerdict> {
    check_beta(beta)?;
    if objects.len() <= 1 {
        return Ok(DegeneracyVerdict::trivial(beta, objects.len()));
    }
    let (core, count) = richest_proper_subflat(container, objects)?;
    let threshold = scaled_total(beta, objects.len());
    let count_q = Rational::from_integer(BigInt::from(count));
    let degenerate = count_q > threshold;
    let witness = degenerate.then(|| extend_witness(&core, container, guides));
    Ok(DegeneracyVerdict {
        beta: beta.clone(),
        total: objects.len(),
        verdict: if degenerate {
            Verdict::Degenerate
        } else {
            Verdict::Nondegenerate
        },
        core: Some(core),
        witness,
        witness_count: count,
        at_boundary: count_q == threshold,
    })
}

/// Classifies `h` against the points of `points` lying on it.
pub fn classify_hyperplane(h: &Hyperplane, points: &[Point], beta: &Rational) -> Result<DegeneracyVerdict> {
    classify_hyperplane_guided(h, points, beta, &[])
}

/// As [`classify_hyperplane`], extending the witness preferably along
/// intersections with the `guides`.
pub fn classify_hyperplane_guided(
    h: &Hyperplane,
    points: &[Point],
    beta: &Rational,
    guides: &[Flat],
) -> Result<DegeneracyVerdict> {
    for p in points {
        crate::error::check_dim(h.dim(), p.dim())?;
    }
    let on: Vec<Flat> = points.iter().filter(|p| h.contains(p)).map(Flat::point).collect();
    classify_in_container(&h.to_flat(), &on, beta, guides)
}

/// Non-strict dual classification of `p` against hyperplanes through it.
pub fn classify_point_dual(p: &Point, hyperplanes: &[Hyperplane], beta: &Rational) -> Result<DegeneracyVerdict> {
    let flats: Vec<Flat> = hyperplanes.iter().map(Hyperplane::to_flat).collect();
    classify_point_against_flats(p, &flats, beta)
}

/// Non-strict dual classification of `p` against flats (dimension >= 1)
/// through it: degenerate iff some line through `p` lies in at least
/// `β·|flats|` of them.
///
/// Candidate lines come from intersections of at most `max dim` flats: the
/// intersection of all flats containing an optimal line is reached by such a
/// subset, since each flat that changes the running intersection lowers its
/// dimension.
pub fn classify_point_against_flats(p: &Point, flats: &[Flat], beta: &Rational) -> Result<DegeneracyVerdict> {
    check_beta(beta)?;
    for (i, f) in flats.iter().enumerate() {
        crate::error::check_dim(f.ambient_dim(), p.dim())?;
        if f.dim() == 0 || !f.contains_point(p) {
            return Err(Error::InvalidArgument(format!(
                "flat {i} must be at least a line through the point"
            )));
        }
    }
    if flats.len() <= 1 {
        return Ok(DegeneracyVerdict::trivial(beta, flats.len()));
    }

    let max_size = flats.iter().map(Flat::dim).max().unwrap_or(1);
    let mut seen: HashSet<Flat> = HashSet::new();
    let mut best: Option<(Flat, usize)> = None;
    let mut stack: Vec<(usize, Flat, usize)> = flats
        .iter()
        .enumerate()
        .map(|(i, f)| (i, f.clone(), 1))
        .rev()
        .collect();
    while let Some((last, inter, size)) = stack.pop() {
        let line = Flat::from_generators(p.coords(), vec![inter.directions()[0].clone()])
            .proper()
            .expect("a line is proper in dimension >= 2");
        if seen.insert(line.clone()) {
            let count = flats.iter().filter(|f| line.is_subset_of(f)).count();
            let better = match &best {
                None => true,
                Some((b, bc)) => (count, std::cmp::Reverse(&line)) > (*bc, std::cmp::Reverse(b)),
            };
            if better {
                best = Some((line, count));
            }
        }
        if size == max_size {
            continue;
        }
        for next in ((last + 1)..flats.len()).rev() {
            if let Span::Proper(g) = inter.intersect(&flats[next]) {
                if g.dim() >= 1 && g.dim() < inter.dim() {
                    stack.push((next, g, size + 1));
                }
            }
        }
    }
    let (line, count) = best.expect("at least one candidate line");
    let threshold = scaled_total(beta, flats.len());
    let count_q = Rational::from_integer(BigInt::from(count));
    let degenerate = count_q >= threshold;
    Ok(DegeneracyVerdict {
        beta: beta.clone(),
        total: flats.len(),
        verdict: if degenerate {
            Verdict::Degenerate
        } else {
            Verdict::Nondegenerate
        },
        core: Some(line.clone()),
        witness: degenerate.then_some(line),
        witness_count: count,
        at_boundary: count_q == threshold,
    })
}

#[cfg(test)]
mod tests;
