//! Point-hyperplane duality and the generic dimension-reducing map used to
//! turn flat-flat containments into point-hyperplane incidences in a lower
//! dimension.

use std::collections::HashSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, Flat, Hyperplane, Point, Span, MAX_DIM, MIN_DIM};
use crate::graph::build_graph;
use crate::linalg::{self, dot, Row};
use crate::rational::{format_rational, int, Rational};
use crate::rng::{derive_seed, SeededRng};

/// Output of [`dualize`]. Dual point `i` comes from hyperplane `i`, dual
/// hyperplane `j` from point `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dualized {
    pub config: Configuration,
    /// `t` of the shear `x_i -> x_i - t_i x_d` applied first, if any
    /// hyperplane was parallel to the `x_d` axis.
    pub shear: Option<Vec<Rational>>,
}

fn shear_for(hyperplanes: &[Hyperplane], d: usize) -> Option<Vec<Rational>> {
    if hyperplanes.iter().all(|h| !h.coeffs()[d - 1].is_zero()) {
        return None;
    }
    // t = (k, k^2, ..., k^(d-1)); each hyperplane rules out finitely many k
    for k in 1i64.. {
        let t: Vec<Rational> = (1..d as u32).map(|e| int(k.pow(e))).collect();
        let ok = hyperplanes
            .iter()
            .all(|h| !(dot(&h.coeffs()[..d - 1], &t) + &h.coeffs()[d - 1]).is_zero());
        if ok {
            return Some(t);
        }
    }
    unreachable!()
}

fn shear_point(p: &Point, t: &[Rational]) -> Point {
    let c = p.coords();
    let d = c.len();
    let mut out: Vec<Rational> = c[..d - 1]
        .iter()
        .zip(t)
        .map(|(x, ti)| x - ti * &c[d - 1])
        .collect();
    out.push(c[d - 1].clone());
    Point::new(out).expect("same dimension")
}

fn shear_hyperplane(h: &Hyperplane, t: &[Rational]) -> Hyperplane {
    let c = h.coeffs();
    let d = c.len();
    let mut coeffs = c.to_vec();
    coeffs[d - 1] = dot(&c[..d - 1], t) + &c[d - 1];
    Hyperplane::new(coeffs, h.offset().clone()).expect("shear is invertible")
}

/// Standard duality: the point `a` maps to `x_d = a_1 x_1 + ... + a_{d-1}
/// x_{d-1} - a_d`, and the hyperplane `x_d = b_1 x_1 + ... - b_d` maps to the
/// point `b`. Incidences are preserved with the two sides swapped.
pub fn dualize(c: &Configuration) -> Dualized {
    let d = c.dim();
    let shear = shear_for(c.hyperplanes(), d);
    let (points, hyperplanes): (Vec<Point>, Vec<Hyperplane>) = match &shear {
        Some(t) => (
            c.points().iter().map(|p| shear_point(p, t)).collect(),
            c.hyperplanes().iter().map(|h| shear_hyperplane(h, t)).collect(),
        ),
        None => (c.points().to_vec(), c.hyperplanes().to_vec()),
    };
    let dual_points = hyperplanes
        .iter()
        .map(|h| {
            let cd = &h.coeffs()[d - 1];
            let mut b: Vec<Rational> = h.coeffs()[..d - 1].iter().map(|ci| -(ci / cd)).collect();
            b.push(-(h.offset() / cd));
            Point::new(b).expect("same dimension")
        })
        .collect();
    let dual_hyperplanes = points
        .iter()
        .map(|p| {
            let a = p.coords();
            let mut coeffs: Vec<Rational> = a[..d - 1].iter().map(|x| -x.clone()).collect();
            coeffs.push(Rational::one());
            Hyperplane::new(coeffs, -a[d - 1].clone()).expect("x_d coefficient is one")
        })
        .collect();
    Dualized {
        config: Configuration::new(d, dual_points, dual_hyperplanes)
            .expect("duality is a bijection on distinct objects"),
        shear,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionOptions {
    /// Map entries are drawn uniformly from `[-entry_bound, entry_bound]`.
    pub entry_bound: i64,
    pub retry_cap: u32,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions {
            entry_bound: 10_000,
            retry_cap: 32,
        }
    }
}

/// A generic reduction `R^d -> R^{d'}` for flats of dimensions `a < b`.
///
/// Every flat is first cut with the affine subspace `W = origin +
/// span(section)` of dimension `d - a` (taking `a`-flats to points) and the
/// result, written in the coordinates of `W`, is then mapped linearly by
/// `projection` into `R^{d'}`. When `a = 0` the section is the identity and
/// when `d - a = d'` so is the projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericMap {
    pub dim_from: usize,
    pub dim_to: usize,
    pub low_dim: usize,
    pub high_dim: usize,
    #[serde(serialize_with = "ser_row")]
    pub section_origin: Row,
    #[serde(serialize_with = "ser_rows")]
    pub section: Vec<Row>,
    #[serde(serialize_with = "ser_rows")]
    pub projection: Vec<Row>,
    pub seed: u64,
    pub retries_used: u32,
}

fn ser_row<S: serde::Serializer>(row: &Row, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(row.iter().map(format_rational))
}

fn ser_rows<S: serde::Serializer>(rows: &[Row], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rows.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()))
}

/// Images of the two families under a [`GenericMap`], in input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub low: Vec<Flat>,
    pub high: Vec<Flat>,
    pub map: GenericMap,
    pub edge_count: usize,
}

impl Projection {
    /// Point-hyperplane view of the images, when the high images are
    /// hyperplanes of the target space.
    pub fn to_configuration(&self) -> Result<Configuration> {
        let points = self
            .low
            .iter()
            .map(|f| f.as_point().cloned())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidArgument("low images are not points".into()))?;
        let hyperplanes = self
            .high
            .iter()
            .map(Flat::as_hyperplane)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidArgument("high images are not hyperplanes".into()))?;
        Configuration::new(self.map.dim_to, points, hyperplanes)
    }
}

fn uniform_dim(flats: &[Flat], what: &str) -> Result<Option<usize>> {
    let Some(first) = flats.first() else {
        return Ok(None);
    };
    if flats.iter().any(|f| f.dim() != first.dim()) {
        return Err(Error::InvalidArgument(format!("{what} flats must share one dimension")));
    }
    Ok(Some(first.dim()))
}

fn mat_vec(m: &[Row], v: &[Rational]) -> Row {
    m.iter().map(|row| dot(row, v)).collect()
}

fn random_matrix(rng: &mut SeededRng, rows: usize, cols: usize, bound: i64) -> Vec<Row> {
    (0..rows)
        .map(|_| (0..cols).map(|_| int(rng.uniform_i64(-bound, bound))).collect())
        .collect()
}

fn identity(n: usize) -> Vec<Row> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

struct Draw {
    origin: Row,
    section: Vec<Row>,
    projection: Vec<Row>,
}

impl Draw {
    fn new(rng: &mut SeededRng, d: usize, a: usize, target: usize, bound: i64) -> Option<Draw> {
        let w = d - a;
        let (origin, section) = if a == 0 {
            (vec![Rational::zero(); d], identity(d))
        } else {
            let origin = random_matrix(rng, 1, d, bound).pop().unwrap();
            let section = random_matrix(rng, w, d, bound);
            if linalg::rank(&section) < w {
                return None;
            }
            (origin, section)
        };
        let projection = if w == target {
            identity(w)
        } else {
            let p = random_matrix(rng, target, w, bound);
            if linalg::rank(&p) < target {
                return None;
            }
            p
        };
        Some(Draw {
            origin,
            section,
            projection,
        })
    }

    /// Image of `f` or `None` if `f ∩ W` has the wrong dimension.
    fn image(&self, f: &Flat, expected_dim: usize) -> Option<Flat> {
        // rows a.x = b become (a B) u = b - a.origin
        let w = self.section.len();
        let eqs: Vec<Row> = f
            .equations()
            .into_iter()
            .map(|eq| {
                let (a, b) = eq.split_at(eq.len() - 1);
                let mut row: Row = (0..w).map(|k| dot(a, &self.section[k])).collect();
                row.push(&b[0] - dot(a, &self.origin));
                row
            })
            .collect();
        let (u0, kernel) = linalg::solve_affine(&eqs, w)?;
        if kernel.len() != expected_dim {
            return None;
        }
        let base = mat_vec(&self.projection, &u0);
        let dirs = kernel.iter().map(|v| mat_vec(&self.projection, v)).collect();
        match Flat::from_generators(&base, dirs) {
            Span::Proper(img) if img.dim() == expected_dim => Some(img),
            _ => None,
        }
    }
}

/// Maps `low` (all of one dimension `a`) and `high` (all of one dimension
/// `b > a`) from `R^d` into `R^{target_dim}`, sending `a`-flats to points and
/// `b`-flats to `(b-a)`-flats, so that containment between the families is
/// preserved exactly. Draws that collapse distinct objects or change the
/// containment graph are redrawn with derived seeds up to the retry cap.
pub fn generic_project(
    low: &[Flat],
    high: &[Flat],
    target_dim: usize,
    seed: u64,
    opts: &ProjectionOptions,
) -> Result<Projection> {
    if !(MIN_DIM..=MAX_DIM).contains(&target_dim) {
        return Err(Error::UnsupportedDimension(target_dim));
    }
    let la = uniform_dim(low, "low")?;
    let hb = uniform_dim(high, "high")?;
    let (a, b) = match (la, hb) {
        (Some(a), Some(b)) => (a, b),
        (Some(a), None) => (a, a + target_dim - 1),
        (None, Some(b)) => (b.saturating_sub(target_dim - 1), b),
        (None, None) => {
            return Ok(Projection {
                low: Vec::new(),
                high: Vec::new(),
                map: GenericMap {
                    dim_from: target_dim,
                    dim_to: target_dim,
                    low_dim: 0,
                    high_dim: target_dim - 1,
                    section_origin: Vec::new(),
                    section: Vec::new(),
                    projection: Vec::new(),
                    seed,
                    retries_used: 0,
                },
                edge_count: 0,
            })
        }
    };
    let d = low
        .first()
        .or(high.first())
        .map(Flat::ambient_dim)
        .expect("nonempty");
    if high.iter().chain(low).any(|f| f.ambient_dim() != d) {
        return Err(Error::InvalidArgument("flats must share an ambient dimension".into()));
    }
    if b <= a || b - a >= target_dim || d - a < target_dim {
        return Err(Error::InvalidArgument(format!(
            "cannot map {a}-flats and {b}-flats of R^{d} to points and {}-flats of R^{target_dim}",
            b.saturating_sub(a)
        )));
    }

    let original = build_graph(low, high)?;
    for attempt in 0..=opts.retry_cap {
        let draw_seed = if attempt == 0 { seed } else { derive_seed(seed, attempt as u64) };
        let mut rng = SeededRng::new(draw_seed);
        let Some(draw) = Draw::new(&mut rng, d, a, target_dim, opts.entry_bound) else {
            continue;
        };
        let Some(low_img) = low.iter().map(|f| draw.image(f, 0)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let Some(high_img) = high.iter().map(|f| draw.image(f, b - a)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let distinct = |v: &[Flat]| v.iter().collect::<HashSet<_>>().len() == v.len();
        if !distinct(&low_img) || !distinct(&high_img) {
            continue;
        }
        let projected = build_graph(&low_img, &high_img)?;
        if projected != original {
            continue;
        }
        return Ok(Projection {
            low: low_img,
            high: high_img,
            edge_count: projected.edge_count(),
            map: GenericMap {
                dim_from: d,
                dim_to: target_dim,
                low_dim: a,
                high_dim: b,
                section_origin: draw.origin,
                section: draw.section,
                projection: draw.projection,
                seed,
                retries_used: attempt,
            },
        });
    }
    Err(Error::RetryCapExceeded(opts.retry_cap))
}

#[cfg(test)]
mod tests;
