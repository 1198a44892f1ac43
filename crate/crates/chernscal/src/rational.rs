//! Exact rational coefficients.
//!
//! `Rat` is an arbitrary-precision rational, always stored reduced with a
//! positive denominator (both guaranteed by the `num-rational` constructors).
//! Everything symbolic in this crate is built over `Rat`; floats appear only
//! when a value is finally evaluated.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact conversion of a finite f64. Every finite double is a rational.
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float")
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational in f64 range")
}

/// Integer power with negative exponents allowed (base must be nonzero then).
pub fn rat_powi(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        base.pow(exp as i32)
    } else {
        base.pow(-exp as i32).recip()
    }
}

/// Parse a rational from decimal ("0.5", "-3", "2.25e-3") or fraction ("3/2") syntax.
///
/// Decimal strings convert exactly (base-ten digits over a power of ten), so
/// command-line parameters like `--lambda 0.5` stay exact.
pub fn parse_rational(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rat::new(num, den));
    }
    // decimal with optional exponent
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let negative = int_part.starts_with('-');
    let digits: String = int_part
        .trim_start_matches(['+', '-'])
        .chars()
        .chain(frac_part.chars())
        .collect();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("cannot parse number {s:?}"));
    }
    let mut value = Rat::new(
        digits.parse::<BigInt>().map_err(|_| "overflow")?,
        BigInt::from(1),
    );
    let shift = exp10 - frac_part.len() as i64;
    value *= rat_powi(&rat_int(10), shift);
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Render as "n" or "n/d".
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let r = rat(2, 4);
        assert_eq!(r, rat(1, 2));
        assert_eq!(rat_to_string(&r), "1/2");
        let r = rat(3, -6);
        assert!(r.denom().is_positive());
        assert_eq!(r, rat(-1, 2));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), rat_int(-3));
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("2.25e-2").unwrap(), rat(9, 400));
        assert_eq!(parse_rational("1e3").unwrap(), rat_int(1000));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn f64_round_trip_is_exact() {
        let x = 0.1f64;
        let r = rat_from_f64(x);
        assert_eq!(to_f64(&r), x);
    }

    #[test]
    fn powi_negative() {
        assert_eq!(rat_powi(&rat(2, 1), -2), rat(1, 4));
    }
}
