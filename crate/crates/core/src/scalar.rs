//! Exact rational scalars and the extended scalar used for bridge resistances.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational, always in lowest terms with positive denominator.
pub type Scalar = crate::rational::Rational;

/// Builds `n/d` from machine integers. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Parses an integer, `a/b` rational, or finite decimal (`0.25`, `-1.5e-3` is rejected).
pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in `{t}`"))?;
        let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in `{t}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{t}`"));
        }
        return Ok(Scalar::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(format!("bad decimal `{t}`"));
        }
        let digits = format!("{whole_digits}{frac}");
        let mantissa: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| format!("bad decimal `{t}`"))?
        };
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let value = Scalar::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = t.parse().map_err(|_| format!("bad number `{t}`"))?;
    Ok(Scalar::from_integer(n))
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for f64 individually
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000) as usize;
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Decimal rendering with 15 significant digits.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        let s = format!("{:.14e}", v);
        return trim_mantissa(&s);
    }
    let decimals = (14 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn trim_mantissa(s: &str) -> String {
    match s.split_once('e') {
        Some((m, e)) if m.contains('.') => {
            format!("{}e{}", m.trim_end_matches('0').trim_end_matches('.'), e)
        }
        _ => s.to_string(),
    }
}

/// Best rational approximation of `v` with denominator at most `max_den`.
pub fn rational_approx(v: f64, max_den: u64) -> Scalar {
    assert!(v.is_finite());
    let negative = v < 0.0;
    let mut x = v.abs();
    // convergents h/k
    let (mut h0, mut h1) = (0u128, 1u128);
    let (mut k0, mut k1) = (1u128, 0u128);
    let max_den = max_den as u128;
    loop {
        let a = x.floor();
        if a > 1e18 {
            break;
        }
        let a = a as u128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den {
            // best semiconvergent within bound
            let t = (max_den - k0) / k1;
            let hs = t * h1 + h0;
            let ks = t * k1 + k0;
            let err_semi = (hs as f64 / ks as f64 - v.abs()).abs();
            let err_conv = (h1 as f64 / k1 as f64 - v.abs()).abs();
            if ks > 0 && err_semi < err_conv {
                h1 = hs;
                k1 = ks;
            }
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = x - a as f64;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    let r = Scalar::new(BigInt::from(h1), BigInt::from(k1));
    if negative {
        -r
    } else {
        r
    }
}

/// A scalar that may be `+∞`; only produced for resistances across a deleted bridge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtScalar {
    Finite(Scalar),
    Inf,
}

impl ExtScalar {
    pub fn zero() -> Self {
        ExtScalar::Finite(Scalar::zero())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtScalar::Inf)
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            ExtScalar::Finite(x) => Some(x),
            ExtScalar::Inf => None,
        }
    }

    /// Unwraps a value known to be finite. Panics on `Inf`, which marks a bug in a limit form.
    pub fn expect_finite(&self, what: &str) -> &Scalar {
        match self {
            ExtScalar::Finite(x) => x,
            ExtScalar::Inf => panic!("undefined infinite expression: {what}"),
        }
    }

    /// `self + s`, with `INF + s = INF`.
    pub fn add(&self, s: &Scalar) -> ExtScalar {
        match self {
            ExtScalar::Finite(x) => ExtScalar::Finite(x + s),
            ExtScalar::Inf => ExtScalar::Inf,
        }
    }

    /// `num / self` for a finite numerator, with `s / INF = 0`.
    pub fn divide_into(&self, num: &Scalar) -> Scalar {
        match self {
            ExtScalar::Finite(x) => num / x,
            ExtScalar::Inf => Scalar::zero(),
        }
    }

    /// `self / (self + s)`, with `INF / (INF + s) = 1`.
    pub fn over_plus(&self, s: &Scalar) -> Scalar {
        match self {
            ExtScalar::Finite(x) => x / (x + s),
            ExtScalar::Inf => Scalar::one(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtScalar::Finite(x) => to_f64(x),
            ExtScalar::Inf => f64::INFINITY,
        }
    }
}

impl From<Scalar> for ExtScalar {
    fn from(x: Scalar) -> Self {
        ExtScalar::Finite(x)
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::Finite(x) => f.write_str(&format_scalar(x)),
            ExtScalar::Inf => f.write_str("inf"),
        }
    }
}

/// Checks that `x > 0`.
pub(crate) fn is_positive(x: &Scalar) -> bool {
    x.is_positive()
}

pub(crate) fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_number_forms() {
        assert_eq!(parse_scalar("3").unwrap(), int(3));
        assert_eq!(parse_scalar("6/8").unwrap(), ratio(3, 4));
        assert_eq!(parse_scalar("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_scalar("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_scalar(".5").unwrap(), ratio(1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
        assert!(parse_scalar("1e3").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_scalar(&ratio(2, 4)), "1/2");
        assert_eq!(format_scalar(&ratio(-6, 3)), "-2");
        assert_eq!(ExtScalar::Inf.to_string(), "inf");
    }

    #[test]
    fn float_format_has_fifteen_digits() {
        assert_eq!(format_float(1.0 / 12.0), "0.0833333333333333");
        assert_eq!(format_float(0.25), "0.25");
        assert_eq!(format_float(2.0), "2");
    }

    #[test]
    fn infinity_limit_forms() {
        let s = ratio(1, 3);
        assert!(ExtScalar::Inf.add(&s).is_inf());
        assert_eq!(ExtScalar::Inf.divide_into(&s), int(0));
        assert_eq!(ExtScalar::Inf.over_plus(&s), int(1));
        assert_eq!(ExtScalar::Finite(int(1)).over_plus(&int(1)), ratio(1, 2));
    }

    #[test]
    #[should_panic]
    fn other_infinite_forms_are_errors() {
        ExtScalar::Inf.expect_finite("test");
    }

    #[test]
    fn continued_fraction_rounding() {
        assert_eq!(rational_approx(0.25, 1_000_000), ratio(1, 4));
        assert_eq!(rational_approx(1.0 / 3.0 + 1e-13, 1_000_000), ratio(1, 3));
        let pi = rational_approx(std::f64::consts::PI, 1000);
        assert_eq!(pi, ratio(355, 113));
    }
}
