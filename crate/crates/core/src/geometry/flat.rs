use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use super::hyperplane::Hyperplane;
use super::point::Point;
use crate::linalg::{self, dot, Row};
use crate::rational::{format_rational, Rational};

/// A proper affine subspace of `R^d` of dimension `0..=d-1`.
///
/// Canonical form: `directions` is in reduced row-echelon form and
/// `basepoint` is the unique point of the flat whose coordinates vanish in
/// the pivot columns. Two flats with the same point set are structurally
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    basepoint: Point,
    directions: Vec<Row>,
    pivots: Vec<usize>,
}

/// Result of a hull or intersection computation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Span {
    Empty,
    Proper(Flat),
    Full,
}

impl Span {
    pub fn proper(self) -> Option<Flat> {
        match self {
            Span::Proper(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Span::Full)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Span::Empty)
    }
}

impl Flat {
    pub fn point(p: &Point) -> Flat {
        Flat {
            basepoint: p.clone(),
            directions: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Canonical flat through `base` spanned by `directions` (any spanning
    /// set, possibly dependent).
    pub fn from_generators(base: &[Rational], mut directions: Vec<Row>) -> Span {
        let d = base.len();
        directions.retain(|v| !linalg::is_zero(v));
        let pivots = linalg::rref(&mut directions);
        if pivots.len() == d {
            return Span::Full;
        }
        let mut basepoint = base.to_vec();
        for (row, &p) in directions.iter().zip(&pivots) {
            let coef = base[p].clone();
            if coef.is_zero() {
                continue;
            }
            for (b, r) in basepoint.iter_mut().zip(row) {
                *b -= &coef * r;
            }
        }
        Span::Proper(Flat {
            basepoint: Point::from_vec(basepoint),
            directions,
            pivots,
        })
    }

    /// Solution set of augmented rows `[a | b]` in `R^d`.
    pub fn from_equations(d: usize, augmented: &[Row]) -> Span {
        if augmented.is_empty() {
            return Span::Full;
        }
        match linalg::solve_affine(augmented, d) {
            None => Span::Empty,
            Some((particular, kernel)) => Flat::from_generators(&particular, kernel),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basepoint.dim()
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn basepoint(&self) -> &Point {
        &self.basepoint
    }

    pub fn directions(&self) -> &[Row] {
        &self.directions
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Projection of `v` onto the direction space along the pivot columns;
    /// equals `v` iff `v` lies in the direction space.
    fn reconstruct(&self, v: &[Rational], shift: Option<&[Rational]>) -> bool {
        let d = v.len();
        let mut next_pivot = 0;
        for j in 0..d {
            if next_pivot < self.pivots.len() && self.pivots[next_pivot] == j {
                next_pivot += 1;
                continue;
            }
            let mut acc = match shift {
                Some(b) => b[j].clone(),
                None => Rational::zero(),
            };
            for (row, &p) in self.directions.iter().zip(&self.pivots) {
                if !row[j].is_zero() && !v[p].is_zero() {
                    acc += &v[p] * &row[j];
                }
            }
            if acc != v[j] {
                return false;
            }
        }
        true
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        debug_assert_eq!(self.ambient_dim(), p.dim());
        // basepoint vanishes on pivot columns, so p's pivot coordinates are
        // exactly its coefficients along the echelon rows
        self.reconstruct(p.coords(), Some(self.basepoint.coords()))
    }

    pub fn contains_direction(&self, v: &[Rational]) -> bool {
        self.reconstruct(v, None)
    }

    pub fn is_subset_of(&self, other: &Flat) -> bool {
        self.dim() <= other.dim()
            && other.contains_point(&self.basepoint)
            && self.directions.iter().all(|v| other.contains_direction(v))
    }

    pub fn lies_in(&self, h: &Hyperplane) -> bool {
        h.contains(&self.basepoint) && self.directions.iter().all(|v| h.contains_direction(v))
    }

    /// `d - k` augmented equations `[a | a.b]` cutting out the flat.
    pub fn equations(&self) -> Vec<Row> {
        let d = self.ambient_dim();
        linalg::nullspace(&self.directions, d)
            .into_iter()
            .map(|mut a| {
                let rhs = dot(&a, self.basepoint.coords());
                a.push(rhs);
                a
            })
            .collect()
    }

    pub fn intersect(&self, other: &Flat) -> Span {
        let mut eqs = self.equations();
        eqs.extend(other.equations());
        Flat::from_equations(self.ambient_dim(), &eqs)
    }

    pub fn intersect_hyperplane(&self, h: &Hyperplane) -> Span {
        let mut eqs = self.equations();
        eqs.push(h.augmented());
        Flat::from_equations(self.ambient_dim(), &eqs)
    }

    /// Smallest flat containing `self` and `p`.
    pub fn extend_with_point(&self, p: &Point) -> Span {
        if self.contains_point(p) {
            return Span::Proper(self.clone());
        }
        let mut dirs = self.directions.clone();
        dirs.push(linalg::sub(p.coords(), self.basepoint.coords()));
        Flat::from_generators(self.basepoint.coords(), dirs)
    }

    pub fn extend_with_direction(&self, v: &[Rational]) -> Span {
        let mut dirs = self.directions.clone();
        dirs.push(v.to_vec());
        Flat::from_generators(self.basepoint.coords(), dirs)
    }

    /// Smallest flat containing both flats.
    pub fn join(&self, other: &Flat) -> Span {
        let mut dirs = self.directions.clone();
        dirs.extend(other.directions.iter().cloned());
        dirs.push(linalg::sub(
            other.basepoint.coords(),
            self.basepoint.coords(),
        ));
        Flat::from_generators(self.basepoint.coords(), dirs)
    }

    pub fn as_hyperplane(&self) -> Option<Hyperplane> {
        if self.dim() + 1 != self.ambient_dim() {
            return None;
        }
        let eq = self.equations().pop()?;
        let (coeffs, offset) = eq.split_at(eq.len() - 1);
        Hyperplane::normalized(coeffs.to_vec(), offset[0].clone()).ok()
    }

    /// The single point of a 0-flat.
    pub fn as_point(&self) -> Option<&Point> {
        (self.dim() == 0).then_some(&self.basepoint)
    }
}

impl Hyperplane {
    pub fn to_flat(&self) -> Flat {
        Flat::from_equations(self.dim(), &[self.augmented()])
            .proper()
            .expect("a hyperplane is a proper nonempty flat")
    }
}

impl Ord for Flat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.basepoint.cmp(&other.basepoint))
            .then_with(|| self.directions.cmp(&other.directions))
    }
}

impl PartialOrd for Flat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-flat {}", self.dim(), self.basepoint)?;
        for v in &self.directions {
            f.write_str(" + t<")?;
            for (i, c) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&format_rational(c))?;
            }
            f.write_str(">")?;
        }
        Ok(())
    }
}
