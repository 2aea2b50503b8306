use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 5;

pub(crate) fn check_supported(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// A point of `R^d` with exact rational coordinates, `d` in `2..=5`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        check_supported(coords.len())?;
        Ok(Point { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Point::new(coords.iter().map(|&c| int(c)).collect())
    }

    /// Skips the dimension check; callers guarantee `2 <= len <= 5`.
    pub(crate) fn from_vec(coords: Vec<Rational>) -> Self {
        debug_assert!((MIN_DIM..=MAX_DIM).contains(&coords.len()));
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(c))?;
        }
        f.write_str(")")
    }
}
