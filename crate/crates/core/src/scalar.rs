//! Scalar abstraction: every algorithm in this crate is generic over the
//! coefficient field, instantiated either with `f64` or with exact rationals.
//!
//! The rational instantiation exists so that operator identities and kernel
//! computations can be checked with zero tolerance instead of an epsilon.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// Exact rational scalar (arbitrary-precision numerator and denominator).
pub type Rat = BigRational;

/// Coefficient field for Fourier series and operator matrices.
///
/// `tau()` is the circle circumference 2π in the scalar model. In the
/// rational model it is a fixed continued-fraction convergent; every
/// zero-tolerance check in the crate is invariant under that choice because
/// the factor either cancels (normalized pairings) or multiplies a quantity
/// compared against zero.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// True when arithmetic is exact and equality checks need no tolerance.
    const EXACT: bool;

    fn from_int(n: i128) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// The circle circumference 2π.
    fn tau() -> Self;

    fn as_f64(&self) -> f64;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(n: i128) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn tau() -> Self {
        std::f64::consts::TAU
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_int(n: i128) -> Self {
        Rat::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    fn tau() -> Self {
        // 2 * (80143857 / 25510582), a convergent of pi accurate to ~6e-17.
        Rat::new(BigInt::from(80143857i64), BigInt::from(12755291i64))
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Complex number over the chosen scalar field.
pub type C<S> = Complex<S>;

/// Real scalar promoted to a complex value.
pub fn c_re<S: Scalar>(re: S) -> C<S> {
    Complex::new(re, S::zero())
}

/// Purely imaginary value `im * i`.
pub fn c_im<S: Scalar>(im: S) -> C<S> {
    Complex::new(S::zero(), im)
}

/// Complex value from integer real and imaginary parts.
pub fn c_int<S: Scalar>(re: i128, im: i128) -> C<S> {
    Complex::new(S::from_int(re), S::from_int(im))
}

/// `(i j)^order`, the spectral symbol of the order-th derivative at frequency `j`.
pub fn derivative_symbol<S: Scalar>(j: i64, order: u32) -> C<S> {
    let magnitude = (j as i128).pow(order);
    match order % 4 {
        0 => c_int(magnitude, 0),
        1 => c_int(0, magnitude),
        2 => c_int(-magnitude, 0),
        _ => c_int(0, -magnitude),
    }
}

/// Magnitude of a complex value as `f64`, for diagnostics and tolerances.
pub fn abs_f64<S: Scalar>(z: &C<S>) -> f64 {
    let re = z.re.as_f64();
    let im = z.im.as_f64();
    re.hypot(im)
}

/// Parse a plain decimal string (`-1`, `0.5`, `3/4`) into an exact rational.
pub fn rat_from_decimal(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let numer: BigInt = digits.parse().ok()?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(Rat::new(BigInt::from(sign) * numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_symbol_cycles_through_powers_of_i() {
        assert_eq!(derivative_symbol::<f64>(2, 0), Complex::new(1.0, 0.0));
        assert_eq!(derivative_symbol::<f64>(2, 1), Complex::new(0.0, 2.0));
        assert_eq!(derivative_symbol::<f64>(2, 2), Complex::new(-4.0, 0.0));
        // (2i)^3 = -8i
        assert_eq!(derivative_symbol::<f64>(2, 3), Complex::new(0.0, -8.0));
        assert_eq!(derivative_symbol::<f64>(2, 4), Complex::new(16.0, 0.0));
    }

    #[test]
    fn rational_tau_is_close_to_two_pi() {
        let tau = <Rat as Scalar>::tau();
        assert!((tau.as_f64() - std::f64::consts::TAU).abs() < 1e-14);
    }

    #[test]
    fn decimal_parsing_produces_exact_ratios() {
        assert_eq!(rat_from_decimal("0.5").unwrap(), Rat::from_ratio(1, 2));
        assert_eq!(rat_from_decimal("-1").unwrap(), Rat::from_int(-1));
        assert_eq!(rat_from_decimal("2.25").unwrap(), Rat::from_ratio(9, 4));
        assert_eq!(rat_from_decimal("3/4").unwrap(), Rat::from_ratio(3, 4));
        assert_eq!(rat_from_decimal("-7/2").unwrap(), Rat::from_ratio(-7, 2));
        assert!(rat_from_decimal("abc").is_none());
        assert!(rat_from_decimal("1/0").is_none());
    }
}
