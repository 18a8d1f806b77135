//! Dense integer polynomials and the characteristic family `g_{k,h}`.

use std::fmt;

use rug::{Complex, Float, Integer};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::parse_integer;
use crate::sequences::SequenceParams;

/// Integer polynomial; `coeffs[i]` multiplies `x^i`.
///
/// The coefficient vector never has a trailing zero, so the zero
/// polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == 1)
    }

    pub fn derivative(&self) -> IntPolynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Integer::from(c * i as u64))
                .collect(),
        )
    }

    /// Exact Horner evaluation at an integer.
    pub fn eval_integer(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation at the precision of `x`.
    pub fn eval(&self, x: &Float) -> Float {
        let mut acc = Float::with_val(x.prec(), 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `(f(x), f'(x))` in one Horner pass.
    pub fn eval_with_derivative(&self, x: &Float) -> (Float, Float) {
        let mut value = Float::with_val(x.prec(), 0);
        let mut slope = Float::with_val(x.prec(), 0);
        for c in self.coeffs.iter().rev() {
            slope *= x;
            slope += &value;
            value *= x;
            value += c;
        }
        (value, slope)
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let mut acc = Complex::with_val(z.prec(), 0);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn eval_complex_with_derivative(&self, z: &Complex) -> (Complex, Complex) {
        let mut value = Complex::with_val(z.prec(), 0);
        let mut slope = Complex::with_val(z.prec(), 0);
        for c in self.coeffs.iter().rev() {
            slope *= z;
            slope += &value;
            value *= z;
            value += c;
        }
        (value, slope)
    }

    /// Gcd of the coefficients (non-negative).
    pub fn content(&self) -> Integer {
        self.coeffs.iter().fold(Integer::new(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut content = self.content();
        if self.leading().is_some_and(|c| *c < 0) {
            content = -content;
        }
        Self::new(
            self.coeffs
                .iter()
                .map(|c| Integer::from(c.div_exact_ref(&content)))
                .collect(),
        )
    }

    /// Pseudo-remainder of `self` by `divisor`, up to a constant factor
    /// `lc(divisor)^e`; only its primitive part is meaningful.
    fn pseudo_rem(&self, divisor: &IntPolynomial) -> IntPolynomial {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        while rem.len() > d && !rem.is_empty() {
            let top = rem.len() - 1;
            let factor = rem[top].clone();
            let shift = top - d;
            for c in rem.iter_mut() {
                *c *= lead;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= Integer::from(&factor * dc);
            }
            debug_assert!(rem[top].is_zero());
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Self::new(rem)
    }

    /// Greatest common divisor over `Q[x]`, returned as a primitive integer
    /// polynomial with positive leading coefficient (primitive PRS).
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    fn term_string(c: &Integer, i: usize) -> String {
        let mag = Integer::from(c.abs_ref());
        let coeff = if mag == 1 && i > 0 {
            String::new()
        } else {
            mag.to_string()
        };
        match i {
            0 => coeff,
            1 => format!("{coeff}x"),
            _ => format!("{coeff}x^{i}"),
        }
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let term = Self::term_string(c, i);
            match (first, *c < 0) {
                (true, true) => write!(f, "-{term}")?,
                (true, false) => write!(f, "{term}")?,
                (false, true) => write!(f, " - {term}")?,
                (false, false) => write!(f, " + {term}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let coeffs = strings
            .iter()
            .map(|s| parse_integer(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(IntPolynomial::new(coeffs))
    }
}

/// `g_{k,h}(x) = x^(k+h-1) - x^(k-1) - ... - x - 1`.
pub fn build_g(params: SequenceParams) -> IntPolynomial {
    let degree = params.order();
    let k = params.k() as usize;
    let mut coeffs = vec![Integer::new(); degree + 1];
    for c in coeffs.iter_mut().take(k) {
        *c = Integer::from(-1);
    }
    coeffs[degree] += 1;
    IntPolynomial::new(coeffs)
}

/// `p_h(x) = x^h - x^(h-1) - 1`, whose positive root is the row limit
/// `lim_{k -> inf} alpha_{k,h}`.
pub fn build_p(h: u32) -> Result<IntPolynomial> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    let h = h as usize;
    let mut coeffs = vec![Integer::new(); h + 1];
    coeffs[h] += 1;
    coeffs[h - 1] -= 1;
    coeffs[0] -= 1;
    Ok(IntPolynomial::new(coeffs))
}

/// Cauchy's companion `x^n - |a_{n-1}| x^(n-1) - ... - |a_0|`, whose
/// positive root bounds the moduli of all roots of a monic `f`.
pub fn cauchy_companion(f: &IntPolynomial) -> Result<IntPolynomial> {
    if !f.is_monic() {
        return Err(Error::InvalidParameter(format!("{f} is not monic")));
    }
    let n = f.degree().unwrap();
    if f.coeffs[..n].iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidParameter(format!("{f} has no nonzero lower coefficient")));
    }
    let mut coeffs: Vec<Integer> = f.coeffs[..n].iter().map(|c| -Integer::from(c.abs_ref())).collect();
    coeffs.push(Integer::from(1));
    Ok(IntPolynomial::new(coeffs))
}

/// Outcome of [`squarefree_check`]: the exact `gcd(f, f')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeCertificate {
    pub squarefree: bool,
    pub gcd: IntPolynomial,
}

/// Decides whether `f` has only simple roots by computing `gcd(f, f')`
/// exactly.
pub fn squarefree_check(f: &IntPolynomial) -> Result<SquarefreeCertificate> {
    match f.degree() {
        None | Some(0) => Err(Error::InvalidParameter("squarefree check needs degree >= 1".into())),
        Some(_) => {
            let gcd = f.gcd(&f.derivative());
            Ok(SquarefreeCertificate {
                squarefree: gcd.degree() == Some(0),
                gcd,
            })
        }
    }
}
