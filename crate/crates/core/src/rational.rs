//! Exact rational scalars and the small amount of number theory the bounds
//! and thresholds need (exact roots, exact base-2 logarithms).

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p"` or `"p/q"` (optional sign, surrounding whitespace ignored).
pub fn parse_rational(token: &str) -> Result<Rational> {
    let token = token.trim();
    let bad = || Error::Parse(format!("malformed rational `{token}`"));
    let (numer, denom) = match token.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (token, "1"),
    };
    if numer.is_empty() || denom.is_empty() || denom.starts_with(['+', '-']) {
        return Err(bad());
    }
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{token}`")));
    }
    Ok(Rational::new(numer, denom))
}

/// `"p"` for integers, `"p/q"` otherwise. Inverse of [`parse_rational`].
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact `n`-th root of a nonnegative rational, if it is rational.
pub fn exact_root(x: &Rational, n: u32) -> Option<Rational> {
    if x.is_negative() || n == 0 {
        return None;
    }
    let root_int = |v: &BigInt| -> Option<BigInt> {
        let r = v.nth_root(n);
        (num_traits::pow::pow(r.clone(), n as usize) == *v).then_some(r)
    };
    let p = root_int(x.numer())?;
    let q = root_int(x.denom())?;
    Some(Rational::new(p, q))
}

/// Exact `x^(p/q)` when the result is rational.
pub fn exact_pow(x: &Rational, p: i64, q: u32) -> Option<Rational> {
    if q == 0 || (p < 0 && x.is_zero()) {
        return None;
    }
    let root = exact_root(x, q)?;
    let mag = num_traits::pow::pow(root, p.unsigned_abs() as usize);
    Some(if p < 0 { mag.recip() } else { mag })
}

/// Exact base-2 logarithm, if `x` is an integral power of two.
pub fn exact_log2(x: &Rational) -> Option<i64> {
    if !x.is_positive() {
        return None;
    }
    let pow2_exponent = |v: &BigInt| -> Option<u64> {
        let (sign, _) = v.to_u64_digits();
        if sign != Sign::Plus {
            return None;
        }
        let bits = v.bits();
        (v.trailing_zeros()? == bits - 1).then_some(bits - 1)
    };
    if x.denom().is_one() {
        pow2_exponent(x.numer()).map(|e| e as i64)
    } else if x.numer().is_one() {
        pow2_exponent(x.denom()).map(|e| -(e as i64))
    } else {
        None
    }
}

/// Base-2 logarithm with the floor convention `max(1, log2 x)`, exact when
/// `x` is a power of two.
pub fn log2_floor1(x: &Rational) -> LogValue {
    match exact_log2(x) {
        Some(e) if e >= 1 => LogValue::Exact(int(e)),
        Some(_) => LogValue::Exact(Rational::one()),
        None => {
            let v = to_f64(x).log2();
            if v <= 1.0 {
                LogValue::Exact(Rational::one())
            } else {
                LogValue::Approx(v)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LogValue {
    Exact(Rational),
    Approx(f64),
}

impl LogValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            LogValue::Exact(r) => to_f64(r),
            LogValue::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            LogValue::Exact(r) => Some(r),
            LogValue::Approx(_) => None,
        }
    }
}

/// A factor `base^(p/q)` or `log^p` of a product evaluated by [`eval_sum`].
pub(crate) enum Factor {
    Pow(Rational, i64, u32),
    Log(LogValue, i64),
}

impl Factor {
    fn exact(&self) -> Option<Rational> {
        match self {
            Factor::Pow(b, p, q) => {
                let g = num_integer::gcd(p.unsigned_abs(), *q as u64);
                exact_pow(b, p / g as i64, (*q as u64 / g) as u32)
            }
            Factor::Log(l, p) => l.exact().map(|v| {
                let mag = num_traits::pow::pow(v.clone(), p.unsigned_abs() as usize);
                if *p < 0 {
                    mag.recip()
                } else {
                    mag
                }
            }),
        }
    }

    fn approx(&self) -> f64 {
        match self {
            Factor::Pow(b, p, q) => to_f64(b).powf(*p as f64 / *q as f64),
            Factor::Log(l, p) => l.as_f64().powi(*p as i32),
        }
    }
}

/// Sum of products; exact when every factor is rational.
pub(crate) fn eval_sum(terms: &[Vec<Factor>]) -> (f64, Option<Rational>) {
    let exact: Option<Rational> = terms
        .iter()
        .map(|t| t.iter().map(Factor::exact).product::<Option<Rational>>())
        .sum();
    match exact {
        Some(e) => (to_f64(&e), Some(e)),
        None => {
            let v = terms.iter().map(|t| t.iter().map(Factor::approx).product::<f64>()).sum();
            (v, None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(format_rational(&ratio(2, 4)), "1/2");
        assert_eq!(format_rational(&int(-5)), "-5");
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(parse_rational("1/0"), Err(Error::Parse(_))));
        for bad in ["", "/", "1/", "a", "1/-2", "1.5", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn zero_is_canonical() {
        let z = parse_rational("0/7").unwrap();
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    #[test]
    fn roots_and_logs() {
        assert_eq!(exact_root(&int(1024), 5), Some(int(4)));
        assert_eq!(exact_root(&ratio(8, 27), 3), Some(ratio(2, 3)));
        assert_eq!(exact_root(&int(2), 2), None);
        assert_eq!(exact_pow(&int(1024), 4, 5), Some(int(256)));
        assert_eq!(exact_pow(&int(4), -3, 2), Some(ratio(1, 8)));
        assert_eq!(exact_log2(&int(1024)), Some(10));
        assert_eq!(exact_log2(&ratio(1, 8)), Some(-3));
        assert_eq!(exact_log2(&int(12)), None);
        assert_eq!(log2_floor1(&int(1)), LogValue::Exact(int(1)));
        assert_eq!(log2_floor1(&int(256)), LogValue::Exact(int(8)));
        assert!(matches!(log2_floor1(&int(12)), LogValue::Approx(_)));
    }

    proptest::proptest! {
        #[test]
        fn format_parse_roundtrip(p in -10_000i64..10_000, q in 1i64..10_000) {
            let x = ratio(p, q);
            proptest::prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }
    }
}
