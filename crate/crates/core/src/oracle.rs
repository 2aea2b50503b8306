//! Exact maximum biclique of a point-hyperplane incidence graph.
//!
//! The hyperplanes of any `K_{r,s}` all contain the affine hull of its `r`
//! points, and the hull of any point set is already the hull of at most `d`
//! of its points. So it is enough to scan hulls of small point subsets,
//! pairing each hull with every point on it and every hyperplane through it.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, Flat, Span};
use crate::graph::{configuration_graph, IncidenceGraph, Side};

pub const DEFAULT_ORACLE_CAP: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Biclique {
    /// Sorted, distinct point indices.
    pub points: Vec<usize>,
    /// Sorted, distinct hyperplane indices.
    pub hyperplanes: Vec<usize>,
    pub r: usize,
    pub s: usize,
    pub rs: u64,
    #[serde(skip)]
    pub witness: Option<Flat>,
}

impl Biclique {
    pub fn empty() -> Self {
        Biclique::new(Vec::new(), Vec::new(), None)
    }

    pub fn new(mut points: Vec<usize>, mut hyperplanes: Vec<usize>, witness: Option<Flat>) -> Self {
        points.sort_unstable();
        points.dedup();
        hyperplanes.sort_unstable();
        hyperplanes.dedup();
        let (r, s) = (points.len(), hyperplanes.len());
        Biclique {
            points,
            hyperplanes,
            r,
            s,
            rs: r as u64 * s as u64,
            witness,
        }
    }

    /// Points on `f` times hyperplanes containing `f`.
    pub fn on_flat(c: &Configuration, f: &Flat) -> Self {
        let points = (0..c.m()).filter(|&i| f.contains_point(&c.points()[i])).collect();
        let hyperplanes = (0..c.n()).filter(|&j| f.lies_in(&c.hyperplanes()[j])).collect();
        Biclique::new(points, hyperplanes, Some(f.clone()))
    }

    /// Larger `rs`, then larger `r`, then lexicographically smaller indices.
    pub fn quality_cmp(&self, other: &Biclique) -> Ordering {
        self.rs
            .cmp(&other.rs)
            .then(self.r.cmp(&other.r))
            .then_with(|| other.points.cmp(&self.points))
            .then_with(|| other.hyperplanes.cmp(&self.hyperplanes))
    }

    pub fn is_better_than(&self, other: &Biclique) -> bool {
        self.quality_cmp(other) == Ordering::Greater
    }
}

/// Best of an iterator under [`Biclique::quality_cmp`]; empty if none.
pub fn best_of<I: IntoIterator<Item = Biclique>>(it: I) -> Biclique {
    it.into_iter()
        .fold(Biclique::empty(), |best, b| if b.is_better_than(&best) { b } else { best })
}

/// Max-degree `K_{1,s}` and `K_{r,1}`.
pub fn degree_bicliques(c: &Configuration) -> Vec<Biclique> {
    let g = configuration_graph(c);
    let mut out = Vec::new();
    let pick = |side: Side, len: usize| {
        (0..len)
            .max_by(|&a, &b| g.degree(side, a).cmp(&g.degree(side, b)).then(b.cmp(&a)))
            .filter(|&i| g.degree(side, i) > 0)
    };
    if let Some(i) = pick(Side::Left, c.m()) {
        out.push(Biclique::new(vec![i], g.neighbors(Side::Left, i).to_vec(), None));
    }
    if let Some(j) = pick(Side::Right, c.n()) {
        out.push(Biclique::new(g.neighbors(Side::Right, j).to_vec(), vec![j], None));
    }
    out
}

fn binomial_prefix(m: usize, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for k in 0..=d.min(m) {
        if k > 0 {
            term = term * (m - k + 1) as u128 / k as u128;
        }
        total = total.saturating_add(term);
    }
    total
}

fn check_cap(c: &Configuration, cap: u128) -> Result<()> {
    let needed = binomial_prefix(c.m(), c.dim());
    if needed > cap {
        return Err(Error::OracleCapExceeded { needed, cap });
    }
    Ok(())
}

/// Every point as a 0-flat plus every proper hull of at most `d` points,
/// deduplicated and sorted.
pub fn candidate_flats(c: &Configuration) -> Vec<Flat> {
    let mut all: BTreeSet<Flat> = BTreeSet::new();
    let mut level: BTreeSet<Flat> = c.points().iter().map(Flat::point).collect();
    while !level.is_empty() {
        let next: BTreeSet<Flat> = level
            .par_iter()
            .flat_map_iter(|f| {
                c.points()
                    .iter()
                    .filter(|p| !f.contains_point(p))
                    .filter_map(|p| f.extend_with_point(p).proper())
                    .collect::<Vec<_>>()
            })
            .collect();
        all.extend(level);
        level = next;
    }
    all.into_iter().collect()
}

pub fn max_biclique_oracle(c: &Configuration) -> Result<Biclique> {
    max_biclique_oracle_with_cap(c, DEFAULT_ORACLE_CAP)
}

/// Exact `rs(P, Q)` with a witnessing biclique. Refuses when the number of
/// point subsets of size at most `d` exceeds `cap`.
pub fn max_biclique_oracle_with_cap(c: &Configuration, cap: u128) -> Result<Biclique> {
    check_cap(c, cap)?;
    if c.m() == 0 || c.n() == 0 {
        return Ok(Biclique::empty());
    }
    let g = configuration_graph(c);
    let mut best = best_of(degree_bicliques(c));

    // (flat, hyperplanes containing it); a hull with no hyperplane through
    // it cannot grow into one that has some
    let mut level: Vec<(Flat, Vec<usize>)> = (0..c.m())
        .filter(|&i| g.degree(Side::Left, i) > 0)
        .map(|i| (Flat::point(&c.points()[i]), g.neighbors(Side::Left, i).to_vec()))
        .collect();
    while !level.is_empty() {
        let scored = level
            .par_iter()
            .map(|(f, hs)| Biclique::new(points_on(c, &g, f, hs), hs.clone(), Some(f.clone())))
            .collect::<Vec<_>>();
        best = best_of(std::iter::once(best).chain(scored));

        let next: BTreeSet<(Flat, Vec<usize>)> = level
            .par_iter()
            .flat_map_iter(|(f, hs)| {
                let mut cand: BTreeSet<usize> = BTreeSet::new();
                for &j in hs {
                    cand.extend(g.neighbors(Side::Right, j));
                }
                let mut covered: BTreeSet<usize> = BTreeSet::new();
                let mut out = Vec::new();
                for i in cand {
                    if covered.contains(&i) || f.contains_point(&c.points()[i]) {
                        continue;
                    }
                    let Some(grown) = f.extend_with_point(&c.points()[i]).proper() else {
                        continue;
                    };
                    let through: Vec<usize> = hs
                        .iter()
                        .copied()
                        .filter(|&j| grown.lies_in(&c.hyperplanes()[j]))
                        .collect();
                    if through.is_empty() {
                        continue;
                    }
                    covered.extend(points_on(c, &g, &grown, &through));
                    out.push((grown, through));
                }
                out
            })
            .collect();
        level = next.into_iter().collect();
    }
    Ok(best)
}

/// Points on `f`, given the nonempty list `hs` of hyperplanes through it.
fn points_on(c: &Configuration, g: &IncidenceGraph, f: &Flat, hs: &[usize]) -> Vec<usize> {
    g.neighbors(Side::Right, hs[0])
        .iter()
        .copied()
        .filter(|&i| f.contains_point(&c.points()[i]))
        .collect()
}

/// True iff every listed pair is incident, the count fields agree with the
/// index lists, and the witness (if any) sits between the two sides.
pub fn validate_biclique(c: &Configuration, b: &Biclique) -> Result<bool> {
    for &i in &b.points {
        if i >= c.m() {
            return Err(Error::IndexOutOfRange {
                what: "point",
                index: i,
                len: c.m(),
            });
        }
    }
    for &j in &b.hyperplanes {
        if j >= c.n() {
            return Err(Error::IndexOutOfRange {
                what: "hyperplane",
                index: j,
                len: c.n(),
            });
        }
    }
    let distinct = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
    if !distinct(&b.points) || !distinct(&b.hyperplanes) {
        return Ok(false);
    }
    if b.r != b.points.len() || b.s != b.hyperplanes.len() || b.rs != b.r as u64 * b.s as u64 {
        return Ok(false);
    }
    let incident = b.points.iter().all(|&i| {
        b.hyperplanes
            .iter()
            .all(|&j| c.hyperplanes()[j].contains(&c.points()[i]))
    });
    if !incident {
        return Ok(false);
    }
    if let Some(w) = &b.witness {
        if b.r >= 1 && b.s >= 1 {
            if w.ambient_dim() != c.dim() {
                return Ok(false);
            }
            let ok = b.points.iter().all(|&i| w.contains_point(&c.points()[i]))
                && b.hyperplanes.iter().all(|&j| w.lies_in(&c.hyperplanes()[j]));
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Hull of the biclique's points, when proper.
pub fn point_hull(c: &Configuration, b: &Biclique) -> Option<Flat> {
    let pts: Vec<_> = b.points.iter().map(|&i| c.points()[i].clone()).collect();
    match crate::geometry::affine_hull(&pts).ok()? {
        Span::Proper(f) => Some(f),
        _ => None,
    }
}
