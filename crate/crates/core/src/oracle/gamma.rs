//! Complex gamma function at arbitrary precision.
//!
//! Stirling's series on `z + N`, with `N` chosen so that `|z + N|` is large
//! enough for the series to reach the working precision, followed by the
//! recurrence `Γ(z) = Γ(z + N) / (z (z+1) ... (z+N-1))`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::bernoulli::even_bernoulli;
use super::{from_value, BigComplex};
use crate::error::{Error, Result};
use crate::types::ComplexValue;

/// Precision (bits) used by [`gamma_complex`] for `f64`-level callers.
pub const GAMMA_BITS: u32 = 128;

fn is_pole(z: &Complex) -> bool {
    if !z.imag().is_zero() {
        return false;
    }
    let re = z.real();
    re.is_integer() && *re <= 0
}

/// `ln Γ(w)` by Stirling's series; requires `Re w >= 1` and `|w|` large
/// relative to `prec` (see [`gamma_big`]).
fn stirling_ln_gamma(w: &Complex, prec: u32) -> Complex {
    let half = Float::with_val(prec, 0.5);
    let ln_w = Complex::with_val(prec, w.ln_ref());
    let mut s = Complex::with_val(prec, w - &half) * &ln_w;
    s -= w;
    let ln_2pi = Float::with_val(prec, Float::with_val(prec, Constant::Pi) * 2u32).ln();
    s += ln_2pi * half;

    let w2_inv = Complex::with_val(prec, w * w).recip();
    let mut w_pow = Complex::with_val(prec, w.recip_ref());
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 8));
    let max_terms = (0.4 * prec as f64) as usize + 20;
    let bern = even_bernoulli(max_terms);
    let mut prev_mag: Option<Float> = None;
    for (idx, b) in bern.iter().enumerate() {
        let k = (idx + 1) as u32;
        let coef = Float::with_val(prec, b) / ((2 * k) * (2 * k - 1));
        let term = Complex::with_val(prec, &w_pow * &coef);
        let mag = Float::with_val(prec, term.abs_ref());
        if let Some(p) = &prev_mag {
            // asymptotic series: stop before the terms start growing
            if mag > *p {
                break;
            }
        }
        s += &term;
        if mag < eps {
            break;
        }
        prev_mag = Some(mag);
        w_pow *= &w2_inv;
    }
    s
}

/// `Γ(z)` at `prec` bits.
pub fn gamma_big(z: &Complex, prec: u32) -> Result<Complex> {
    if is_pole(z) {
        return Err(Error::Pole("gamma"));
    }
    let wp = prec + 32;
    let z = Complex::with_val(wp, z);
    // 2π|w| must exceed wp·ln2 for the asymptotic series to reach 2^-wp
    let min_abs = 0.125 * wp as f64 + 12.0;
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    let mut shift = 0u32;
    loop {
        let x = re + shift as f64;
        if x >= 1.0 && (x * x + im * im).sqrt() >= min_abs {
            break;
        }
        shift += 1;
    }
    let w = Complex::with_val(wp, &z + shift);
    let ln_g = stirling_ln_gamma(&w, wp);
    let mut g = ln_g.exp();
    if shift > 0 {
        let mut prod = Complex::with_val(wp, &z);
        for k in 1..shift {
            prod *= Complex::with_val(wp, &z + k);
        }
        g /= prod;
    }
    Ok(Complex::with_val(prec, g))
}

/// `Γ(s)` to about 1e-30 relative accuracy.
pub fn gamma_complex(s: ComplexValue) -> Result<ComplexValue> {
    let z = from_value(&s, GAMMA_BITS)?;
    let g = gamma_big(&z, GAMMA_BITS)?;
    Ok(BigComplex::new(g, 36).to_value())
}

/// `Γ(s)` as a [`BigComplex`] at the given number of decimal digits.
pub fn gamma_digits(s: &Complex, digits: u32) -> Result<BigComplex> {
    let bits = crate::types::PrecisionPolicy::digits_to_bits(digits);
    Ok(BigComplex::new(gamma_big(s, bits)?, digits))
}

/// `Γ(1/3)` to `f64` precision, computed once.
pub fn gamma_one_third() -> f64 {
    static VALUE: std::sync::OnceLock<f64> = std::sync::OnceLock::new();
    *VALUE.get_or_init(|| {
        let third = Complex::with_val(GAMMA_BITS, (Float::with_val(GAMMA_BITS, 1) / 3u32, 0));
        gamma_big(&third, GAMMA_BITS)
            .expect("1/3 is not a pole")
            .real()
            .to_f64()
    })
}

/// Stirling's leading modulus `sqrt(2π) |s|^{Re s - 1/2} e^{-Re s} e^{-Im s · arg s}`.
pub fn stirling_leading_modulus(s: &Complex, prec: u32) -> Float {
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let abs = Float::with_val(prec, s.abs_ref());
    let arg = Float::with_val(prec, s.arg_ref());
    let re = Float::with_val(prec, s.real());
    let im = Float::with_val(prec, s.imag());
    let expo = Float::with_val(prec, &re - 0.5f64);
    let p = abs.pow(expo);
    let e = Float::with_val(prec, -(re + im * arg)).exp();
    two_pi.sqrt() * p * e
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(prec: u32, re: f64, im: f64) -> Complex {
        Complex::with_val(prec, (re, im))
    }

    #[test]
    fn integer_values() {
        let g = gamma_big(&c(200, 1.0, 0.0), 200).unwrap();
        assert!((g.real().to_f64() - 1.0).abs() < 1e-30);
        let g = gamma_big(&c(200, 7.0, 0.0), 200).unwrap();
        assert!((Float::with_val(200, g.real() - 720u32)).abs() < 1e-50);
    }

    #[test]
    fn reflection_at_one_third() {
        let prec = 300;
        let third = Complex::with_val(prec, (Float::with_val(prec, 1) / 3u32, 0));
        let two_thirds = Complex::with_val(prec, (Float::with_val(prec, 2) / 3u32, 0));
        let prod = gamma_big(&third, prec).unwrap() * gamma_big(&two_thirds, prec).unwrap();
        let pi = Float::with_val(prec, Constant::Pi);
        let expect = pi * 2u32 / Float::with_val(prec, 3).sqrt();
        let err = Float::with_val(prec, prod.real() - &expect).abs() / expect;
        assert!(err < 1e-85, "{err}");
    }

    #[test]
    fn reflection_complex() {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let prec = 256;
        let z = c(prec, 0.3, 47.0);
        let one_minus = Complex::with_val(prec, 1 - &z);
        let lhs = gamma_big(&z, prec).unwrap() * gamma_big(&one_minus, prec).unwrap();
        let pi = Float::with_val(prec, Constant::Pi);
        let rhs = Complex::with_val(prec, &z * &pi).sin().recip() * pi;
        let err = Float::with_val(prec, Complex::with_val(prec, &lhs - &rhs).abs_ref())
            / Float::with_val(prec, rhs.abs_ref());
        assert!(err < 1e-60, "{err}");
    }

    #[test]
    fn poles_are_rejected() {
        assert_eq!(gamma_big(&c(64, 0.0, 0.0), 64), Err(Error::Pole("gamma")));
        assert_eq!(gamma_big(&c(64, -3.0, 0.0), 64), Err(Error::Pole("gamma")));
        assert!(gamma_big(&c(64, -3.0, 1e-10), 64).is_ok());
    }

    #[test]
    fn stirling_modulus_agrees_at_large_imaginary_part() {
        let prec = 200;
        let s = c(prec, 0.5, 30.0);
        let g = gamma_big(&s, prec).unwrap();
        let lead = stirling_leading_modulus(&s, prec);
        let ratio = Float::with_val(prec, g.abs_ref()) / lead;
        // the next Stirling correction is 1/(12|s|) in size
        assert!((ratio.to_f64() - 1.0).abs() < 1.0 / (12.0 * 30.0) * 1.1);
    }

    #[test]
    fn f64_entry_point() {
        let g = gamma_complex(ComplexValue::new(0.5, 0.0)).unwrap();
        assert!((g.re() - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        let g = gamma_complex(ComplexValue::from_complex(Complex64::new(1.0, 0.0))).unwrap();
        assert!((g.re() - 1.0).abs() < 1e-16);
        assert!((gamma_one_third() - 2.678_938_534_707_747_6).abs() < 1e-15);
    }
}
