use std::collections::HashSet;

use super::hyperplane::Hyperplane;
use super::point::{check_supported, Point};
use crate::error::{check_dim, Error, Result};

/// `m` distinct points and `n` distinct hyperplanes sharing one ambient
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    dim: usize,
    points: Vec<Point>,
    hyperplanes: Vec<Hyperplane>,
}

impl Configuration {
    pub fn new(dim: usize, points: Vec<Point>, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        check_supported(dim)?;
        let mut seen = HashSet::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            check_dim(dim, p.dim())?;
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(i));
            }
        }
        let mut seen = HashSet::with_capacity(hyperplanes.len());
        for (i, h) in hyperplanes.iter().enumerate() {
            check_dim(dim, h.dim())?;
            if !seen.insert(h) {
                return Err(Error::DuplicateHyperplane(i));
            }
        }
        Ok(Configuration {
            dim,
            points,
            hyperplanes,
        })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Configuration::new(dim, Vec::new(), Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn n(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.hyperplanes.is_empty()
    }
}
