//! `K_ν(y) = (π/2)(I_{-ν}(y) - I_ν(y)) / sin(νπ)` by direct summation.
//!
//! For `ν = r + it` the two `I` series are each of size `e^{π|t|/2}` times
//! the result, so the working precision grows linearly in `|t|`
//! (see [`PrecisionPolicy::series_digits`]).

use rug::float::Constant;
use rug::{Complex, Float};

use super::gamma::gamma_big;
use super::BigComplex;
use crate::error::{Error, Result};
use crate::types::{ComplexValue, PrecisionPolicy};

/// Largest `|Im ν|` the series oracle accepts.
pub const SERIES_MAX_ABS_T: f64 = 200.0;

/// `K_ν(y)` for `0 < y < 2` with the default precision policy.
pub fn k_series(nu: ComplexValue, y: f64) -> Result<BigComplex> {
    k_series_with(nu, y, &PrecisionPolicy::default())
}

pub fn k_series_with(nu: ComplexValue, y: f64, policy: &PrecisionPolicy) -> Result<BigComplex> {
    if !(y > 0.0 && y < 2.0) {
        return Err(Error::Domain(format!("series oracle needs 0 < y < 2, got {y}")));
    }
    let nu = nu.to_complex64()?;
    let (r, t) = (nu.re, nu.im);
    if t.abs() > SERIES_MAX_ABS_T {
        return Err(Error::OracleRange(format!(
            "|t| = {} exceeds the series cap {SERIES_MAX_ABS_T}",
            t.abs()
        )));
    }
    if t == 0.0 && r.fract() == 0.0 {
        return Err(Error::DegenerateOrder(r));
    }
    // sin(νπ) near zero costs digits as well
    let sin_mag = ((std::f64::consts::PI * r).sin().powi(2)
        + (std::f64::consts::PI * t).sinh().powi(2))
    .sqrt();
    let extra = if sin_mag < 1.0 {
        (-sin_mag.log10()).ceil() as u32
    } else {
        0
    };
    let digits = policy.series_digits(t) + extra;
    let bits = PrecisionPolicy::digits_to_bits(digits) + 16;

    let nu = Complex::with_val(bits, (r, t));
    let half = Float::with_val(bits, y) / 2u32;
    let i_pos = bessel_i(&nu, &half, bits)?;
    let neg = Complex::with_val(bits, -&nu);
    let i_neg = bessel_i(&neg, &half, bits)?;

    let pi = Float::with_val(bits, Constant::Pi);
    let sin = Complex::with_val(bits, &nu * &pi).sin();
    let k = (i_neg - i_pos) * (pi / 2u32) / sin;
    Ok(BigComplex::new(k, policy.base_digits))
}

/// `I_ν(2·half)`.
fn bessel_i(nu: &Complex, half: &Float, bits: u32) -> Result<Complex> {
    let one_plus = Complex::with_val(bits, nu + 1u32);
    let g = gamma_big(&one_plus, bits)?;
    let ln_half = Float::with_val(bits, half.ln_ref());
    let lead = Complex::with_val(bits, nu * &ln_half).exp() / g;

    let q = Float::with_val(bits, half.square_ref());
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    let mut sum = Complex::with_val(bits, 1);
    let mut term = Complex::with_val(bits, 1);
    let mut m = 1u32;
    loop {
        let denom = Complex::with_val(bits, nu + m) * m;
        term *= &q;
        term /= denom;
        sum += &term;
        let tm = Float::with_val(bits, term.abs_ref());
        let sm = Float::with_val(bits, sum.abs_ref());
        if tm < Float::with_val(bits, &sm * &eps) {
            break;
        }
        m += 1;
        if m > 100_000 {
            return Err(Error::Accuracy { achieved: (tm / sm).to_f64() });
        }
    }
    Ok(lead * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> ComplexValue {
        ComplexValue::new(x, 0.0)
    }

    #[test]
    fn half_integer_closed_form() {
        let k = k_series(re(0.5), 1.0).unwrap().to_value();
        let expect = (std::f64::consts::PI / 2.0).sqrt() * (-1f64).exp();
        assert!((k.re() - expect).abs() < 1e-15 * expect);
        assert!((expect - 0.461_068_504_447_894_55).abs() < 1e-16);
        assert!(k.im().abs() < 1e-25);
    }

    #[test]
    fn conjugate_symmetry() {
        let a = k_series(ComplexValue::new(0.5, 5.0), 0.5).unwrap();
        let b = k_series(ComplexValue::new(0.5, -5.0), 0.5).unwrap();
        assert!(a.rel_deviation(&b.conj()) < 1e-25);
    }

    #[test]
    fn purely_imaginary_order_is_real() {
        for t in [3.0, 40.0, 150.0] {
            let k = k_series(ComplexValue::new(0.0, t), 0.7).unwrap();
            let prec = k.value.prec().0;
            let ratio = Float::with_val(prec, k.value.imag().abs_ref())
                / Float::with_val(prec, k.value.abs_ref());
            assert!(ratio < 1e-20, "t={t}: {ratio}");
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(k_series(re(2.0), 1.0), Err(Error::DegenerateOrder(_))));
        assert!(matches!(
            k_series(ComplexValue::new(0.0, 250.0), 1.0),
            Err(Error::OracleRange(_))
        ));
        assert!(matches!(k_series(re(0.5), 2.5), Err(Error::Domain(_))));
    }

    #[test]
    fn three_term_recurrence() {
        // K_{ν-1} - K_{ν+1} = -(2ν/y) K_ν
        let (r, t, y) = (0.5, 20.0, 1.3);
        let bits = 300;
        let km = k_series(ComplexValue::new(r - 1.0, t), y).unwrap().value;
        let k0 = k_series(ComplexValue::new(r, t), y).unwrap().value;
        let kp = k_series(ComplexValue::new(r + 1.0, t), y).unwrap().value;
        let lhs = Complex::with_val(bits, &km - &kp);
        let nu = Complex::with_val(bits, (r, t));
        let rhs = Complex::with_val(bits, -nu * 2u32 / Float::with_val(bits, y)) * k0;
        let err = Float::with_val(bits, Complex::with_val(bits, &lhs - &rhs).abs_ref())
            / Float::with_val(bits, rhs.abs_ref());
        assert!(err < 1e-25, "{err}");
    }
}
