//! Bipartite incidence graphs between geometric objects, rich-object
//! filtering and dyadic multiplicity buckets.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{Configuration, Flat, Hyperplane, Point};

/// Ambient and intrinsic dimension of a geometric object.
pub trait GeoObject: Sync {
    fn ambient_dim(&self) -> usize;
    fn flat_dim(&self) -> usize;
}

impl GeoObject for Point {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }
    fn flat_dim(&self) -> usize {
        0
    }
}

impl GeoObject for Flat {
    fn ambient_dim(&self) -> usize {
        Flat::ambient_dim(self)
    }
    fn flat_dim(&self) -> usize {
        self.dim()
    }
}

impl GeoObject for Hyperplane {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }
    fn flat_dim(&self) -> usize {
        self.dim() - 1
    }
}

/// `self ⊆ other`.
pub trait LiesIn<R> {
    fn lies_in(&self, other: &R) -> bool;
}

impl LiesIn<Hyperplane> for Point {
    fn lies_in(&self, h: &Hyperplane) -> bool {
        h.contains(self)
    }
}

impl LiesIn<Flat> for Point {
    fn lies_in(&self, f: &Flat) -> bool {
        f.contains_point(self)
    }
}

impl LiesIn<Hyperplane> for Flat {
    fn lies_in(&self, h: &Hyperplane) -> bool {
        Flat::lies_in(self, h)
    }
}

impl LiesIn<Flat> for Flat {
    fn lies_in(&self, f: &Flat) -> bool {
        self.is_subset_of(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// Containment graph between a left family and a right family of objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Edge `(a, b)` iff `left[a] ⊆ right[b]`.
pub fn build_graph<L, R>(left: &[L], right: &[R]) -> Result<IncidenceGraph>
where
    L: GeoObject + LiesIn<R>,
    R: GeoObject,
{
    let ambient = left
        .first()
        .map(GeoObject::ambient_dim)
        .or_else(|| right.first().map(GeoObject::ambient_dim));
    if let Some(d) = ambient {
        for o in left {
            check_dim(d, o.ambient_dim())?;
        }
        for o in right {
            check_dim(d, o.ambient_dim())?;
        }
    }
    let max_left = left.iter().map(GeoObject::flat_dim).max();
    let min_right = right.iter().map(GeoObject::flat_dim).min();
    if let (Some(l), Some(r)) = (max_left, min_right) {
        if l >= r {
            return Err(Error::InvalidArgument(format!(
                "left objects (dim {l}) must be lower-dimensional than right objects (dim {r})"
            )));
        }
    }
    let left_adj: Vec<Vec<usize>> = left
        .par_iter()
        .map(|a| {
            right
                .iter()
                .enumerate()
                .filter(|(_, b)| a.lies_in(b))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    Ok(IncidenceGraph::from_left_adjacency(left_adj, right.len()))
}

/// Point-hyperplane incidence graph of a configuration.
pub fn configuration_graph(c: &Configuration) -> IncidenceGraph {
    build_graph(c.points(), c.hyperplanes()).expect("configuration objects share a dimension")
}

impl IncidenceGraph {
    /// Builds from per-left neighbor lists; lists are sorted and deduplicated.
    pub fn from_left_adjacency(mut left_adj: Vec<Vec<usize>>, right_len: usize) -> Self {
        let mut right_adj = vec![Vec::new(); right_len];
        let mut edge_count = 0;
        for (a, nbrs) in left_adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            nbrs.dedup();
            edge_count += nbrs.len();
            for &b in nbrs.iter() {
                right_adj[b].push(a);
            }
        }
        IncidenceGraph {
            left_adj,
            right_adj,
            edge_count,
        }
    }

    pub fn left_len(&self) -> usize {
        self.left_adj.len()
    }

    pub fn right_len(&self) -> usize {
        self.right_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, side: Side, idx: usize) -> &[usize] {
        match side {
            Side::Left => &self.left_adj[idx],
            Side::Right => &self.right_adj[idx],
        }
    }

    pub fn degree(&self, side: Side, idx: usize) -> usize {
        self.neighbors(side, idx).len()
    }

    pub fn degrees(&self, side: Side) -> Vec<usize> {
        let adj = match side {
            Side::Left => &self.left_adj,
            Side::Right => &self.right_adj,
        };
        adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self, side: Side) -> usize {
        self.degrees(side).into_iter().max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.left_adj[a].binary_search(&b).is_ok()
    }

    /// All edges as `(left, right)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left_adj
            .iter()
            .enumerate()
            .flat_map(|(a, nbrs)| nbrs.iter().map(move |&b| (a, b)))
    }
}

/// Objects on `side` with degree at least `k`.
pub fn filter_rich(g: &IncidenceGraph, side: Side, k: usize) -> Vec<usize> {
    (0..match side {
        Side::Left => g.left_len(),
        Side::Right => g.right_len(),
    })
        .filter(|&i| g.degree(side, i) >= k)
        .collect()
}

/// Objects whose multiplicity lies in `[2^level, 2^(level+1))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DyadicBucket {
    pub level: u32,
    pub members: Vec<usize>,
}

impl DyadicBucket {
    pub fn lower(&self) -> u64 {
        1 << self.level
    }

    pub fn upper(&self) -> u64 {
        1 << (self.level + 1)
    }

    /// `2^level * |members|`.
    pub fn weighted_size(&self) -> u64 {
        self.lower() * self.members.len() as u64
    }
}

/// Partitions objects with positive multiplicity into half-open dyadic
/// ranges. Input is `(object, multiplicity)`; output is sorted by level with
/// sorted members.
pub fn dyadic_buckets<I>(multiplicities: I) -> Vec<DyadicBucket>
where
    I: IntoIterator<Item = (usize, u64)>,
{
    let mut by_level: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for (obj, count) in multiplicities {
        if count == 0 {
            continue;
        }
        by_level.entry(count.ilog2()).or_default().push(obj);
    }
    by_level
        .into_iter()
        .map(|(level, mut members)| {
            members.sort_unstable();
            DyadicBucket { level, members }
        })
        .collect()
}
