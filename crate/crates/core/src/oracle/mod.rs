//! Extended-precision reference values for `K_ν(y)`.
//!
//! Two independent routes: the power series through `I_{±ν}` (small `y`) and
//! quadrature along steepest-descent contours (`y >= 1`). They share nothing
//! but the complex gamma function, and agree on the overlap `1 <= y < 2`.

mod bernoulli;
mod contour;
mod gamma;
mod quad;
mod series;

use num_complex::Complex64;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::types::ComplexValue;

pub use bernoulli::{even_bernoulli, even_bernoulli_f64};
pub use contour::{k_contour, k_contour_with, ContourOptions, ContourReport};
pub use gamma::{gamma_big, gamma_complex, gamma_digits, gamma_one_third, stirling_leading_modulus};
pub use series::{k_series, k_series_with, SERIES_MAX_ABS_T};

/// An arbitrary-precision complex number together with the number of
/// decimal digits it is trusted to.
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub value: Complex,
    pub digits: u32,
}

impl BigComplex {
    pub fn new(value: Complex, digits: u32) -> Self {
        BigComplex { value, digits }
    }

    /// Rounds to the scaled `f64` representation.
    pub fn to_value(&self) -> ComplexValue {
        to_value(&self.value)
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            value: self.value.clone().conj(),
            digits: self.digits,
        }
    }

    /// `|self - other| / |other|` at full precision, rounded to `f64`.
    pub fn rel_deviation(&self, other: &BigComplex) -> f64 {
        let prec = self.value.prec().0.max(other.value.prec().0);
        let diff = Complex::with_val(prec, &self.value - &other.value);
        let num = Float::with_val(prec, diff.abs_ref());
        let den = Float::with_val(prec, other.value.abs_ref());
        if den.is_zero() {
            return if num.is_zero() { 0.0 } else { f64::INFINITY };
        }
        Float::with_val(prec, num / den).to_f64()
    }
}

/// `rug` complex to [`ComplexValue`] without passing through the `f64` range.
pub fn to_value(z: &Complex) -> ComplexValue {
    let (re, im) = (z.real(), z.imag());
    let exp = [re, im]
        .iter()
        .filter(|f| f.is_normal())
        .filter_map(|f| f.get_exp())
        .max();
    let Some(e) = exp else {
        return ComplexValue::ZERO;
    };
    let shift = -e;
    let m = Complex64::new(
        Float::with_val(64, re << shift).to_f64(),
        Float::with_val(64, im << shift).to_f64(),
    );
    ComplexValue::from_parts2(m, e as i64)
}

/// [`ComplexValue`] to `rug` complex at `prec` bits.
pub fn from_value(v: &ComplexValue, prec: u32) -> Result<Complex> {
    let (m, exp2) = v.parts2();
    if v.is_zero() {
        return Ok(Complex::new(prec));
    }
    let exp2 = i32::try_from(exp2).map_err(|_| Error::Domain("exponent out of range".into()))?;
    Ok(Complex::with_val(prec, (m.re, m.im)) << exp2)
}
