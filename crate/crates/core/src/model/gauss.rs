//! Exact Gaussian rationals, `a + b i` with `a, b ∈ ℚ`.
//!
//! Backed by `num_complex::Complex<BigRational>`; this module adds the
//! parsing, formatting and integer-power helpers the engine needs.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type GaussRat = Complex<BigRational>;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_rational(r: BigRational) -> GaussRat {
    Complex::new(r, BigRational::zero())
}

pub fn from_int(n: i64) -> GaussRat {
    from_rational(BigRational::from_integer(BigInt::from(n)))
}

pub fn from_frac(num: i64, den: i64) -> GaussRat {
    from_rational(rat(num, den))
}

pub fn is_real(z: &GaussRat) -> bool {
    z.im.is_zero()
}

/// Multiplication with a fast path for real operands.
pub fn mul(a: &GaussRat, b: &GaussRat) -> GaussRat {
    if a.im.is_zero() && b.im.is_zero() {
        return Complex::new(&a.re * &b.re, BigRational::zero());
    }
    a * b
}

/// Integer power; `None` when raising zero to a negative exponent.
pub fn pow(base: &GaussRat, exp: i64) -> Option<GaussRat> {
    if exp < 0 {
        if base.is_zero() {
            return None;
        }
        let inv = GaussRat::one() / base;
        return pow(&inv, -exp);
    }
    let mut result = GaussRat::one();
    let mut acc = base.clone();
    let mut e = exp as u64;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &acc);
        }
        e >>= 1;
        if e > 0 {
            acc = mul(&acc, &acc);
        }
    }
    Some(result)
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if num.is_empty() || den.is_empty() || den.starts_with(['+', '-']) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Parse `p/q`, `p/q*i`, `i`, `-i` or `p/q+r/s*i` (either part optional,
/// denominators optional). No whitespace, no floating literals.
pub fn parse(text: &str) -> Option<GaussRat> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some(body) = s.strip_suffix('i') {
        // find the split between real and imaginary part: the last sign not at 0
        let split = body
            .char_indices()
            .rev()
            .find(|&(idx, c)| idx > 0 && (c == '+' || c == '-'))
            .map(|(idx, _)| idx);
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let im = match im_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => {
                let coeff = other.strip_suffix('*')?;
                let coeff = coeff.strip_prefix('+').unwrap_or(coeff);
                parse_rational(coeff)?
            }
        };
        let re = if re_str.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(re_str)?
        };
        Some(Complex::new(re, im))
    } else {
        parse_rational(s).map(from_rational)
    }
}

/// Canonical text form, the inverse of [`parse`].
pub fn format(z: &GaussRat) -> String {
    Display(z).to_string()
}

struct Display<'a>(&'a GaussRat);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        if z.im.is_zero() {
            return write!(f, "{}", z.re);
        }
        let im_abs = z.im.abs();
        let im_part = if im_abs.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", im_abs)
        };
        if z.re.is_zero() {
            if z.im.is_negative() {
                write!(f, "-{}", im_part)
            } else {
                write!(f, "{}", im_part)
            }
        } else {
            let sign = if z.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", z.re, sign, im_part)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3"), Some(from_int(3)));
        assert_eq!(parse("-1/2"), Some(from_frac(-1, 2)));
        assert_eq!(parse("i"), Some(Complex::new(rat(0, 1), rat(1, 1))));
        assert_eq!(parse("-i"), Some(Complex::new(rat(0, 1), rat(-1, 1))));
        assert_eq!(parse("1/2+3/4*i"), Some(Complex::new(rat(1, 2), rat(3, 4))));
        assert_eq!(parse("-2-i"), Some(Complex::new(rat(-2, 1), rat(-1, 1))));
        assert_eq!(parse("5*i"), Some(Complex::new(rat(0, 1), rat(5, 1))));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("1.5"), None);
        assert_eq!(parse("2+*i"), None);
        assert_eq!(parse(""), None);
    }

    #[test]
    fn format_is_canonical() {
        for s in [
            "0",
            "3",
            "-1/2",
            "i",
            "-i",
            "1/2+3/4*i",
            "-2-i",
            "5*i",
            "-7/3*i",
        ] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
    }

    #[test]
    fn powers() {
        let two = from_int(2);
        assert_eq!(pow(&two, -3), Some(from_frac(1, 8)));
        assert_eq!(pow(&two, 0), Some(from_int(1)));
        assert_eq!(pow(&from_int(0), -1), None);
        let i = parse("i").unwrap();
        assert_eq!(pow(&i, 2), Some(from_int(-1)));
        assert_eq!(pow(&i, -1), Some(parse("-i").unwrap()));
    }

    #[test]
    fn square_roots() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(-4, 1)), None);
    }
}
