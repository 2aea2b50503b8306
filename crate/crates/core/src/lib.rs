//! Large complete bipartite subgraphs of point-hyperplane incidence graphs in
//! `R^2..R^5`, computed over exact rationals.

pub mod bounds;
pub mod degeneracy;
pub mod error;
pub mod extraction;
pub mod geometry;
pub mod graph;
pub mod harness;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod rng;
pub mod transforms;

pub use error::{Error, Result};
pub use geometry::{Configuration, Flat, Hyperplane, Point, Span};
pub use rational::Rational;
