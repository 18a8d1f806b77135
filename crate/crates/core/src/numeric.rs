//! Multiprecision helpers shared by the root and closed-form layers.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};

/// Significant decimal digits carried by a `bits`-bit mantissa.
pub fn decimal_digits(bits: u32) -> usize {
    (f64::from(bits) * std::f64::consts::LOG10_2).ceil() as usize
}

/// `2^exp` at the given precision.
pub fn pow2(prec: u32, exp: i32) -> Float {
    Float::with_val(prec, 1) << exp
}

/// Decimal rendering at full working precision. Integral values print
/// without a fractional part.
pub fn format_float(x: &Float, bits: u32) -> String {
    if x.is_integer() {
        if let Some(i) = x.to_integer() {
            if i.significant_bits() <= bits {
                return i.to_string();
            }
        }
    }
    positional(x.to_string_radix_round(10, Some(decimal_digits(bits)), Round::Nearest))
}

/// Rewrites `d.ddde-X` without an exponent when `X` is small; tiny values
/// keep scientific notation.
fn positional(s: String) -> String {
    let Some((mantissa, exp)) = s.split_once('e') else {
        return s;
    };
    let Ok(exp) = exp.parse::<i64>() else {
        return s;
    };
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let len = digits.len() as i64;
    if (-POSITIONAL_MIN_EXP..0).contains(&exp) {
        format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else if (0..len - 1).contains(&exp) {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{sign}{int}.{frac}")
    } else {
        s
    }
}

const POSITIONAL_MIN_EXP: i64 = 8;

pub fn parse_float(s: &str, prec: u32) -> Result<Float> {
    Float::parse(s)
        .map(|p| Float::with_val(prec, p))
        .map_err(|e| Error::Parse(format!("{s:?} is not a decimal number: {e}")))
}

pub fn parse_integer(s: &str) -> Result<Integer> {
    s.trim()
        .parse::<Integer>()
        .map_err(|e| Error::Parse(format!("{s:?} is not an integer: {e}")))
}

/// `(re, im)` decimal pair.
pub fn format_complex(z: &Complex, bits: u32) -> (String, String) {
    (format_float(z.real(), bits), format_float(z.imag(), bits))
}

pub fn parse_complex(re: &str, im: &str, prec: u32) -> Result<Complex> {
    Ok(Complex::with_val(
        prec,
        (parse_float(re, prec)?, parse_float(im, prec)?),
    ))
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Largest modulus in a slice, zero when empty.
pub fn max_abs<'a>(prec: u32, zs: impl IntoIterator<Item = &'a Complex>) -> Float {
    zs.into_iter()
        .map(abs)
        .fold(Float::with_val(prec, 0), |acc, a| if a > acc { a } else { acc })
}

/// `z^n` for a non-negative integer power.
pub fn powu(z: &Complex, n: u64) -> Complex {
    let prec = z.prec().0;
    match u32::try_from(n) {
        Ok(n) => Complex::with_val(prec, z.pow(n)),
        Err(_) => Complex::with_val(prec, z.pow(Integer::from(n))),
    }
}
