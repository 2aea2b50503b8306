use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Configuration, Hyperplane, Point};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Serialize, Deserialize)]
struct ConfigDoc {
    dim: usize,
    points: Vec<Vec<String>>,
    hyperplanes: Vec<HyperplaneDoc>,
}

#[derive(Serialize, Deserialize)]
struct HyperplaneDoc {
    coeffs: Vec<String>,
    offset: String,
}

fn parse_row(tokens: &[String]) -> Result<Vec<Rational>> {
    tokens.iter().map(|t| parse_rational(t)).collect()
}

fn format_row(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

pub fn parse_config(text: &str) -> Result<Configuration> {
    let doc: ConfigDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let points = doc
        .points
        .iter()
        .map(|p| Point::new(parse_row(p)?))
        .collect::<Result<Vec<_>>>()?;
    let hyperplanes = doc
        .hyperplanes
        .iter()
        .map(|h| Hyperplane::new(parse_row(&h.coeffs)?, parse_rational(&h.offset)?))
        .collect::<Result<Vec<_>>>()?;
    Configuration::new(doc.dim, points, hyperplanes)
}

/// Pretty-printed JSON; hyperplanes are written in normalized form.
pub fn serialize_config(c: &Configuration) -> String {
    let doc = ConfigDoc {
        dim: c.dim(),
        points: c.points().iter().map(|p| format_row(p.coords())).collect(),
        hyperplanes: c
            .hyperplanes()
            .iter()
            .map(|h| HyperplaneDoc {
                coeffs: format_row(h.coeffs()),
                offset: format_rational(h.offset()),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("string-only document");
    out.push('\n');
    out
}
