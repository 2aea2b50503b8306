//! Closed-form incidence and biclique bounds, evaluated exactly when every
//! fractional power happens to be rational and in `f64` otherwise.
//!
//! | name              | formula                                               |
//! |-------------------|-------------------------------------------------------|
//! | `kst_free`        | `C((mn)^(d/(d+1)) + m + n)`                            |
//! | `as_lower`        | `C(I/mn)^(d-1) mn`                                     |
//! | `as_upper`        | `C(I/mn)^((d+1)/2) mn`                                 |
//! | `et`              | `C((mn)^(d/(d+1)) + m n^(1-1/(d-1)))`                  |
//! | `et_dual`         | `C((mn)^(d/(d+1)) + n m^(1-1/(d-1)))`                  |
//! | `rich_count`      | `C(m^(d+1)/k^(d+2) + m^(d-1)/k^(d-1))`                 |
//! | `rich_count_dual` | `C(n^(d+1)/k^(d+2) + n^(d-1)/k^(d-1))`                 |
//! | `thm4d`           | `C(I/mn)^(5/2) mn / L^4`, `d = 4`                      |
//! | `thm5d`           | `C(I/mn)^3 mn / L^10`, `d = 5`                         |
//!
//! `L = max(1, log2(mn))`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{eval_sum, format_rational, int, log2_floor1, to_f64, Factor, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    KstFree,
    AsLower,
    AsUpper,
    Et,
    EtDual,
    RichCount,
    RichCountDual,
    Thm4d,
    Thm5d,
}

impl BoundName {
    pub const ALL: [BoundName; 9] = [
        BoundName::KstFree,
        BoundName::AsLower,
        BoundName::AsUpper,
        BoundName::Et,
        BoundName::EtDual,
        BoundName::RichCount,
        BoundName::RichCountDual,
        BoundName::Thm4d,
        BoundName::Thm5d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::KstFree => "kst_free",
            BoundName::AsLower => "as_lower",
            BoundName::AsUpper => "as_upper",
            BoundName::Et => "et",
            BoundName::EtDual => "et_dual",
            BoundName::RichCount => "rich_count",
            BoundName::RichCountDual => "rich_count_dual",
            BoundName::Thm4d => "thm4d",
            BoundName::Thm5d => "thm5d",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownBound(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundArgs {
    pub m: Option<u64>,
    pub n: Option<u64>,
    pub incidences: Option<u64>,
    pub k: Option<u64>,
    pub d: Option<usize>,
    pub constant: Rational,
}

impl Default for BoundArgs {
    fn default() -> Self {
        BoundArgs {
            m: None,
            n: None,
            incidences: None,
            k: None,
            d: None,
            constant: Rational::one(),
        }
    }
}

impl BoundArgs {
    pub fn new(m: u64, n: u64, incidences: u64, d: usize) -> Self {
        BoundArgs {
            m: Some(m),
            n: Some(n),
            incidences: Some(incidences),
            d: Some(d),
            ..BoundArgs::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub name: BoundName,
    pub value: f64,
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub constant: Rational,
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

fn ser_opt_rational<S: serde::Serializer>(
    x: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&format_rational(x)),
        None => s.serialize_none(),
    }
}

struct Req<'a> {
    name: BoundName,
    args: &'a BoundArgs,
}

impl Req<'_> {
    fn get(&self, v: Option<u64>, arg: &'static str) -> Result<u64> {
        v.ok_or(Error::MissingArgument {
            bound: self.name.as_str(),
            arg,
        })
    }

    fn positive(&self, v: Option<u64>, arg: &'static str) -> Result<Rational> {
        let x = self.get(v, arg)?;
        if x == 0 {
            return Err(Error::InvalidArgument(format!(
                "bound `{}` needs `{arg}` > 0",
                self.name
            )));
        }
        Ok(int(x as i64))
    }

    fn dim(&self, allowed: std::ops::RangeInclusive<usize>) -> Result<i64> {
        let d = self.args.d.ok_or(Error::MissingArgument {
            bound: self.name.as_str(),
            arg: "d",
        })?;
        if !allowed.contains(&d) {
            return Err(Error::InvalidArgument(format!(
                "bound `{}` is stated for d in {allowed:?}, got {d}",
                self.name
            )));
        }
        Ok(d as i64)
    }
}

pub fn evaluate(name: &str, args: &BoundArgs) -> Result<BoundValue> {
    evaluate_bound(name.parse()?, args)
}

pub fn evaluate_bound(name: BoundName, args: &BoundArgs) -> Result<BoundValue> {
    use Factor::Pow;
    let req = Req { name, args };
    if args.constant <= Rational::zero() {
        return Err(Error::InvalidArgument("bound constants must be positive".into()));
    }
    let terms: Vec<Vec<Factor>> = match name {
        BoundName::KstFree | BoundName::Et | BoundName::EtDual => {
            let m = req.positive(args.m, "m")?;
            let n = req.positive(args.n, "n")?;
            let d = req.dim(2..=5)?;
            let mn = Pow(&m * &n, d, (d + 1) as u32);
            match name {
                BoundName::KstFree => vec![vec![mn], vec![Pow(m, 1, 1)], vec![Pow(n, 1, 1)]],
                BoundName::Et => vec![vec![mn], vec![Pow(m, 1, 1), Pow(n, d - 2, (d - 1) as u32)]],
                _ => vec![vec![mn], vec![Pow(n, 1, 1), Pow(m, d - 2, (d - 1) as u32)]],
            }
        }
        BoundName::AsLower | BoundName::AsUpper | BoundName::Thm4d | BoundName::Thm5d => {
            let m = req.positive(args.m, "m")?;
            let n = req.positive(args.n, "n")?;
            let i = int(req.get(args.incidences, "incidences")? as i64);
            let mn = &m * &n;
            let density = &i / &mn;
            let log = log2_floor1(&mn);
            let t = match name {
                BoundName::AsLower => {
                    let d = req.dim(2..=5)?;
                    vec![Pow(density, d - 1, 1), Pow(mn, 1, 1)]
                }
                BoundName::AsUpper => {
                    let d = req.dim(2..=5)?;
                    vec![Pow(density, d + 1, 2), Pow(mn, 1, 1)]
                }
                BoundName::Thm4d => {
                    if args.d.is_some() {
                        req.dim(4..=4)?;
                    }
                    vec![Pow(density, 5, 2), Pow(mn, 1, 1), Factor::Log(log, -4)]
                }
                _ => {
                    if args.d.is_some() {
                        req.dim(5..=5)?;
                    }
                    vec![Pow(density, 3, 1), Pow(mn, 1, 1), Factor::Log(log, -10)]
                }
            };
            vec![t]
        }
        BoundName::RichCount | BoundName::RichCountDual => {
            let size = if name == BoundName::RichCount {
                req.positive(args.m, "m")?
            } else {
                req.positive(args.n, "n")?
            };
            let k = req.positive(args.k, "k")?;
            let d = req.dim(2..=5)?;
            let kinv = k.recip();
            vec![
                vec![Pow(size.clone(), d + 1, 1), Pow(kinv.clone(), d + 2, 1)],
                vec![Pow(size, d - 1, 1), Pow(kinv, d - 1, 1)],
            ]
        }
    };
    let (raw, exact) = eval_sum(&terms);
    let c = &args.constant;
    Ok(BoundValue {
        name,
        value: raw * to_f64(c),
        exact: exact.map(|e| e * c),
        constant: c.clone(),
    })
}

/// Values of every bound whose arguments are present and whose dimension
/// range covers `args.d`.
pub fn bound_set(args: &BoundArgs) -> Vec<BoundValue> {
    BoundName::ALL
        .into_iter()
        .filter(|name| match name {
            BoundName::Thm4d => args.d == Some(4),
            BoundName::Thm5d => args.d == Some(5),
            _ => true,
        })
        .filter_map(|name| evaluate_bound(name, args).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn rel_err(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn reference_values() {
        let et = evaluate("et", &BoundArgs { m: Some(16), n: Some(64), d: Some(4), ..Default::default() }).unwrap();
        assert_eq!(et.exact, Some(int(512)));
        assert_eq!(et.value, 512.0);

        let al = evaluate("as_lower", &BoundArgs::new(7, 9, 63, 3)).unwrap();
        assert_eq!(al.exact, Some(int(63)));

        let t4 = evaluate("thm4d", &BoundArgs::new(32, 32, 1024, 4)).unwrap();
        assert_eq!(t4.exact, Some(ratio(1024, 10_000)));
        assert!(rel_err(t4.value, 0.1024) <= 1e-12);
    }

    #[test]
    fn inexact_powers_fall_back_to_floats() {
        let v = evaluate("kst_free", &BoundArgs { m: Some(3), n: Some(5), d: Some(4), ..Default::default() }).unwrap();
        assert!(v.exact.is_none());
        let expect = 15f64.powf(0.8) + 8.0;
        assert!(rel_err(v.value, expect) <= 1e-12);
        // log2(12) is irrational
        let t = evaluate("thm5d", &BoundArgs::new(3, 4, 6, 5)).unwrap();
        assert!(t.exact.is_none());
        assert!(rel_err(t.value, 0.125 * 12.0 / 12f64.log2().powi(10)) <= 1e-12);
    }

    #[test]
    fn low_dimension_bounds_coincide() {
        for (m, n, i) in [(4, 9, 10), (10, 10, 55), (3, 17, 2)] {
            let a = evaluate("as_lower", &BoundArgs::new(m, n, i, 3)).unwrap();
            let b = evaluate("as_upper", &BoundArgs::new(m, n, i, 3)).unwrap();
            assert_eq!(a.exact, b.exact);
        }
    }

    #[test]
    fn constants_scale_values() {
        let mut args = BoundArgs::new(4, 4, 8, 3);
        args.constant = ratio(3, 2);
        let v = evaluate("as_lower", &args).unwrap();
        assert_eq!(v.exact, Some(int(6)));
        assert_eq!(v.constant, ratio(3, 2));
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(evaluate("nope", &BoundArgs::default()), Err(Error::UnknownBound(_))));
        assert!(matches!(
            evaluate("et", &BoundArgs { m: Some(1), d: Some(3), ..Default::default() }),
            Err(Error::MissingArgument { arg: "n", .. })
        ));
        let zero_k = BoundArgs { m: Some(5), k: Some(0), d: Some(3), ..Default::default() };
        assert!(evaluate("rich_count", &zero_k).is_err());
        assert!(evaluate("thm4d", &BoundArgs::new(4, 4, 4, 5)).is_err());
        let mut neg = BoundArgs::new(4, 4, 4, 3);
        neg.constant = int(0);
        assert!(evaluate("as_lower", &neg).is_err());
        for b in BoundName::ALL {
            assert_eq!(b.as_str().parse::<BoundName>().unwrap(), b);
        }
    }

    #[test]
    fn rich_counts() {
        let args = BoundArgs { m: Some(4), n: Some(8), k: Some(2), d: Some(3), ..Default::default() };
        // 4^4/2^5 + 4^2/2^2 = 8 + 4
        assert_eq!(evaluate("rich_count", &args).unwrap().exact, Some(int(12)));
        // 8^4/2^5 + 8^2/2^2 = 128 + 16
        assert_eq!(evaluate("rich_count_dual", &args).unwrap().exact, Some(int(144)));
    }

    #[test]
    fn bound_set_filters_by_dimension() {
        let names: Vec<_> = bound_set(&BoundArgs::new(16, 16, 64, 4)).into_iter().map(|b| b.name).collect();
        assert!(names.contains(&BoundName::Thm4d));
        assert!(!names.contains(&BoundName::Thm5d));
        assert!(!names.contains(&BoundName::RichCount));
    }

    proptest::proptest! {
        #[test]
        fn monotone_in_incidences(m in 1u64..200, n in 1u64..200, a in 0u64..1000, b in 0u64..1000, d in 2usize..=5) {
            let (lo, hi) = (a.min(b), a.max(b));
            for name in ["as_lower", "as_upper", "thm4d", "thm5d"] {
                let dd = match name { "thm4d" => 4, "thm5d" => 5, _ => d };
                let x = evaluate(name, &BoundArgs::new(m, n, lo, dd)).unwrap().value;
                let y = evaluate(name, &BoundArgs::new(m, n, hi, dd)).unwrap().value;
                proptest::prop_assert!(x <= y * (1.0 + 1e-12));
            }
        }
    }
}
