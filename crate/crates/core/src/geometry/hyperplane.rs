use std::fmt;

use num_traits::{One, Zero};

use super::point::{check_supported, Point};
use crate::error::{check_dim, Error, Result};
use crate::linalg::dot;
use crate::rational::{format_rational, int, Rational};

/// The hyperplane `coeffs . x = offset`, stored normalized so that the first
/// nonzero coefficient is 1. Equal point sets compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    coeffs: Vec<Rational>,
    offset: Rational,
}

impl Hyperplane {
    pub fn new(coeffs: Vec<Rational>, offset: Rational) -> Result<Self> {
        check_supported(coeffs.len())?;
        Hyperplane::normalized(coeffs, offset)
    }

    pub fn from_ints(coeffs: &[i64], offset: i64) -> Result<Self> {
        Hyperplane::new(coeffs.iter().map(|&c| int(c)).collect(), int(offset))
    }

    pub(crate) fn normalized(mut coeffs: Vec<Rational>, mut offset: Rational) -> Result<Self> {
        let lead = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or(Error::ZeroNormal)?;
        if !lead.is_one() {
            let inv = lead.recip();
            for c in &mut coeffs {
                *c *= &inv;
            }
            offset *= &inv;
        }
        Ok(Hyperplane { coeffs, offset })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn contains(&self, p: &Point) -> bool {
        debug_assert_eq!(self.dim(), p.dim());
        dot(&self.coeffs, p.coords()) == self.offset
    }

    /// True iff the direction `v` is parallel to the hyperplane.
    pub fn contains_direction(&self, v: &[Rational]) -> bool {
        dot(&self.coeffs, v).is_zero()
    }

    /// Exact incidence test with a dimension check.
    pub fn incident(&self, p: &Point) -> Result<bool> {
        check_dim(self.dim(), p.dim())?;
        Ok(self.contains(p))
    }

    /// The augmented row `[coeffs | offset]`.
    pub fn augmented(&self) -> Vec<Rational> {
        let mut row = self.coeffs.clone();
        row.push(self.offset.clone());
        row
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{}*x{}", format_rational(c), i + 1)?;
        }
        write!(f, " = {}", format_rational(&self.offset))
    }
}
