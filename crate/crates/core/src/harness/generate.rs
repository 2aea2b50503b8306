use std::collections::HashSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_supported, Configuration, Flat, Hyperplane, Point};
use crate::linalg::{self, dot, Row};
use crate::rational::{int, Rational};
use crate::rng::SeededRng;

/// Redraws allowed per requested object before a spec is declared infeasible.
const MAX_REDRAWS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Planted,
    Grid,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedFlat {
    pub flat_dim: usize,
    #[serde(default)]
    pub points_on_flat: usize,
    #[serde(default)]
    pub hyperplanes_through_flat: usize,
    /// Index of an earlier entry whose flat must contain this one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub dim: usize,
    #[serde(default)]
    pub planted: Vec<PlantedFlat>,
    #[serde(default)]
    pub noise_points: usize,
    #[serde(default)]
    pub noise_hyperplanes: usize,
    #[serde(default)]
    pub grid_side: usize,
    #[serde(default)]
    pub seed: u64,
    /// Half-width of the integer box for random coordinates.
    #[serde(default = "default_box")]
    pub coord_bound: i64,
}

fn default_box() -> i64 {
    10
}

impl GeneratorSpec {
    pub fn planted(dim: usize, planted: Vec<PlantedFlat>, noise_points: usize, noise_hyperplanes: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Planted,
            dim,
            planted,
            noise_points,
            noise_hyperplanes,
            grid_side: 0,
            seed,
            coord_bound: default_box(),
        }
    }

    pub fn grid(dim: usize, side: usize) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Grid,
            dim,
            planted: Vec::new(),
            noise_points: 0,
            noise_hyperplanes: 0,
            grid_side: side,
            seed: 0,
            coord_bound: default_box(),
        }
    }

    pub fn random(dim: usize, points: usize, hyperplanes: usize, coord_bound: i64, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Random,
            dim,
            planted: Vec::new(),
            noise_points: points,
            noise_hyperplanes: hyperplanes,
            grid_side: 0,
            seed,
            coord_bound,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_supported(self.dim)?;
        if self.coord_bound < 1 {
            return Err(Error::Infeasible("coord_bound must be at least 1".into()));
        }
        for (i, e) in self.planted.iter().enumerate() {
            if e.flat_dim >= self.dim {
                return Err(Error::Infeasible(format!(
                    "planted entry {i}: flat_dim {} must be below {}",
                    e.flat_dim, self.dim
                )));
            }
            if e.flat_dim + 1 == self.dim && e.hyperplanes_through_flat > 1 {
                return Err(Error::Infeasible(format!(
                    "planted entry {i}: a hyperplane is the only hyperplane through itself"
                )));
            }
            if e.flat_dim == 0 && e.points_on_flat > 1 {
                return Err(Error::Infeasible(format!("planted entry {i}: a 0-flat holds one point")));
            }
            if let Some(p) = e.parent {
                if p >= i || self.planted[p].flat_dim <= e.flat_dim {
                    return Err(Error::Infeasible(format!(
                        "planted entry {i}: parent must be an earlier, higher-dimensional entry"
                    )));
                }
            }
        }
        Ok(())
    }
}

struct Builder {
    rng: SeededRng,
    bound: i64,
    points: Vec<Point>,
    seen_points: HashSet<Point>,
    hyperplanes: Vec<Hyperplane>,
    seen_hyperplanes: HashSet<Hyperplane>,
}

impl Builder {
    fn int_vec(&mut self, d: usize, bound: i64) -> Row {
        (0..d).map(|_| int(self.rng.uniform_i64(-bound, bound))).collect()
    }

    /// Rational in `[-bound, bound]` with denominator 1, 2 or 3.
    fn small_rational(&mut self) -> Rational {
        let q = self.rng.uniform_i64(1, 3);
        let p = self.rng.uniform_i64(-self.bound * q, self.bound * q);
        Rational::new(p.into(), q.into())
    }

    fn push_point(&mut self, p: Point) -> bool {
        if self.seen_points.insert(p.clone()) {
            self.points.push(p);
            true
        } else {
            false
        }
    }

    fn push_hyperplane(&mut self, h: Hyperplane) -> bool {
        if self.seen_hyperplanes.insert(h.clone()) {
            self.hyperplanes.push(h);
            true
        } else {
            false
        }
    }

    /// Random flat of dimension `k`, inside `parent` when given.
    fn draw_flat(&mut self, d: usize, k: usize, parent: Option<&Flat>) -> Result<Flat> {
        for _ in 0..MAX_REDRAWS {
            let (base, dirs) = match parent {
                Some(par) => {
                    let base = self.point_on(par).into_coords();
                    let dirs: Vec<Row> = (0..k)
                        .map(|_| {
                            let coefs = self.int_vec(par.dim(), 3);
                            combine(par.directions(), &coefs, d)
                        })
                        .collect();
                    (base, dirs)
                }
                None => {
                    let base = self.int_vec(d, self.bound);
                    let dirs = (0..k).map(|_| self.int_vec(d, 3)).collect();
                    (base, dirs)
                }
            };
            if linalg::rank(&dirs) < k {
                continue;
            }
            if let Some(f) = Flat::from_generators(&base, dirs).proper() {
                return Ok(f);
            }
        }
        Err(Error::Infeasible(format!("could not draw a {k}-flat")))
    }

    fn point_on(&mut self, f: &Flat) -> Point {
        let coefs: Vec<Rational> = (0..f.dim()).map(|_| self.small_rational()).collect();
        let offset = combine(f.directions(), &coefs, f.ambient_dim());
        let coords = f.basepoint().coords().iter().zip(offset).map(|(b, o)| b + o).collect();
        Point::new(coords).expect("ambient dimension is supported")
    }

    fn hyperplane_through(&mut self, f: &Flat) -> Option<Hyperplane> {
        let normals = linalg::nullspace(f.directions(), f.ambient_dim());
        let coefs = self.int_vec(normals.len(), 3);
        let normal = combine(&normals, &coefs, f.ambient_dim());
        if linalg::is_zero(&normal) {
            return None;
        }
        let offset = dot(&normal, f.basepoint().coords());
        Hyperplane::new(normal, offset).ok()
    }

    fn random_point(&mut self, d: usize) -> Point {
        Point::new(self.int_vec(d, self.bound)).expect("supported dimension")
    }

    /// Random normal with small entries through a random box point.
    fn random_hyperplane(&mut self, d: usize) -> Option<Hyperplane> {
        let normal = self.int_vec(d, 2);
        let through = self.int_vec(d, self.bound);
        let offset = dot(&normal, &through);
        Hyperplane::new(normal, offset).ok()
    }

    fn fill<F>(&mut self, count: usize, what: &str, mut draw: F) -> Result<()>
    where
        F: FnMut(&mut Builder) -> bool,
    {
        let mut added = 0;
        let mut tries = 0;
        while added < count {
            if draw(self) {
                added += 1;
                tries = 0;
            } else {
                tries += 1;
                if tries > MAX_REDRAWS {
                    return Err(Error::Infeasible(format!("could not place {count} distinct {what}")));
                }
            }
        }
        Ok(())
    }
}

fn combine(vectors: &[Row], coefs: &[Rational], d: usize) -> Row {
    let mut out = vec![Rational::zero(); d];
    for (v, c) in vectors.iter().zip(coefs) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// Builds the configuration a spec describes; the same spec always yields
/// the same configuration.
pub fn generate(spec: &GeneratorSpec) -> Result<Configuration> {
    spec.validate()?;
    let d = spec.dim;
    let mut b = Builder {
        rng: SeededRng::new(spec.seed),
        bound: spec.coord_bound,
        points: Vec::new(),
        seen_points: HashSet::new(),
        hyperplanes: Vec::new(),
        seen_hyperplanes: HashSet::new(),
    };
    match spec.kind {
        GeneratorKind::Grid => {
            let side = spec.grid_side as i64;
            let mut coords: Vec<Vec<i64>> = vec![Vec::new()];
            for _ in 0..d {
                coords = coords
                    .into_iter()
                    .flat_map(|p| {
                        (0..side).map(move |v| {
                            let mut q = p.clone();
                            q.push(v);
                            q
                        })
                    })
                    .collect();
            }
            if side > 0 {
                for c in coords {
                    b.push_point(Point::from_ints(&c)?);
                }
            }
            for axis in 0..d {
                for v in 0..side {
                    let mut normal = vec![0; d];
                    normal[axis] = 1;
                    b.push_hyperplane(Hyperplane::from_ints(&normal, v)?);
                }
            }
        }
        GeneratorKind::Planted => {
            let mut flats: Vec<Flat> = Vec::new();
            for e in &spec.planted {
                let parent = e.parent.map(|p| flats[p].clone());
                let f = b.draw_flat(d, e.flat_dim, parent.as_ref())?;
                b.fill(e.points_on_flat, "points on a planted flat", |b| {
                    let p = b.point_on(&f);
                    b.push_point(p)
                })?;
                b.fill(e.hyperplanes_through_flat, "hyperplanes through a planted flat", |b| {
                    b.hyperplane_through(&f).is_some_and(|h| b.push_hyperplane(h))
                })?;
                flats.push(f);
            }
        }
        GeneratorKind::Random => {}
    }
    b.fill(spec.noise_points, "noise points", |b| {
        let p = b.random_point(d);
        b.push_point(p)
    })?;
    b.fill(spec.noise_hyperplanes, "noise hyperplanes", |b| {
        b.random_hyperplane(d).is_some_and(|h| b.push_hyperplane(h))
    })?;
    Configuration::new(d, b.points, b.hyperplanes)
}
