//! Exact points, hyperplanes and flats, and the incidence and containment
//! predicates everything else is built on.

mod config;
mod flat;
mod hyperplane;
mod point;

pub use config::Configuration;
pub use flat::{Flat, Span};
pub use hyperplane::Hyperplane;
pub(crate) use point::check_supported;
pub use point::{Point, MAX_DIM, MIN_DIM};

use crate::error::{check_dim, Error, Result};
use crate::linalg;

/// Something a flat can be contained in.
pub trait Container {
    fn ambient_dim(&self) -> usize;
    fn contains_point(&self, p: &Point) -> bool;
    fn contains_flat(&self, f: &Flat) -> bool;
}

impl Container for Hyperplane {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }
    fn contains_point(&self, p: &Point) -> bool {
        self.contains(p)
    }
    fn contains_flat(&self, f: &Flat) -> bool {
        f.lies_in(self)
    }
}

impl Container for Flat {
    fn ambient_dim(&self) -> usize {
        Flat::ambient_dim(self)
    }
    fn contains_point(&self, p: &Point) -> bool {
        Flat::contains_point(self, p)
    }
    fn contains_flat(&self, f: &Flat) -> bool {
        f.is_subset_of(self)
    }
}

/// True iff `p` lies on `h`, evaluated exactly.
pub fn incident(p: &Point, h: &Hyperplane) -> Result<bool> {
    h.incident(p)
}

/// True iff `f` is contained in `g` (a flat or a hyperplane).
pub fn flat_contained<C: Container + ?Sized>(f: &Flat, g: &C) -> Result<bool> {
    check_dim(g.ambient_dim(), f.ambient_dim())?;
    Ok(g.contains_flat(f))
}

/// Smallest flat containing every point; `Span::Full` when the points span
/// all of `R^d`.
pub fn affine_hull(points: &[Point]) -> Result<Span> {
    let (first, rest) = points
        .split_first()
        .ok_or(Error::EmptyInput("affine_hull needs at least one point"))?;
    let mut dirs = Vec::with_capacity(rest.len());
    for p in rest {
        check_dim(first.dim(), p.dim())?;
        dirs.push(linalg::sub(p.coords(), first.coords()));
    }
    Ok(Flat::from_generators(first.coords(), dirs))
}

/// Smallest flat containing every flat in a nonempty list.
pub fn affine_hull_of_flats<'a, I>(flats: I) -> Result<Span>
where
    I: IntoIterator<Item = &'a Flat>,
{
    let mut iter = flats.into_iter();
    let first = iter
        .next()
        .ok_or(Error::EmptyInput("affine_hull_of_flats needs at least one flat"))?;
    let base = first.basepoint().coords();
    let mut dirs: Vec<linalg::Row> = first.directions().to_vec();
    for f in iter {
        check_dim(first.ambient_dim(), f.ambient_dim())?;
        dirs.extend(f.directions().iter().cloned());
        dirs.push(linalg::sub(f.basepoint().coords(), base));
    }
    Ok(Flat::from_generators(base, dirs))
}

/// Common solution set of the hyperplanes in `R^dim`.
pub fn intersect_hyperplanes(dim: usize, hyperplanes: &[Hyperplane]) -> Result<Span> {
    for h in hyperplanes {
        check_dim(dim, h.dim())?;
    }
    let eqs: Vec<_> = hyperplanes.iter().map(Hyperplane::augmented).collect();
    Ok(Flat::from_equations(dim, &eqs))
}
