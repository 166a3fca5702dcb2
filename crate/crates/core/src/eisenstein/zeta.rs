//! Riemann zeta and the completed function `ξ(s) = π^{−s/2} Γ(s/2) ζ(s)`.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{domain, Error, Result};
use crate::oracle::{even_bernoulli, from_value, gamma_big, to_value};
use crate::types::ComplexValue;

/// Largest `|Im s|` accepted by [`zeta_complex`].
pub const MAX_ABS_IM: f64 = 500.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub s: ComplexValue,
    pub zeta: ComplexValue,
    /// `π^{−s/2} Γ(s/2) ζ(s)`.
    pub xi: ComplexValue,
}

fn bits_for(s: &Complex) -> u32 {
    let m = Float::with_val(64, s.abs_ref()).to_f64().max(1.0);
    128 + m.log2().ceil() as u32
}

/// `ζ(s)` by Euler–Maclaurin summation at `prec` bits.
pub fn zeta_big(s: &Complex, prec: u32) -> Result<Complex> {
    if s.imag().is_zero() && *s.real() == 1 {
        return Err(Error::Pole("zeta"));
    }
    let wp = prec + 32;
    let abs_s = Float::with_val(64, s.abs_ref()).to_f64();
    let n = (abs_s / std::f64::consts::PI).ceil() as u32 + 20;
    let one = Complex::with_val(wp, (1, 0));
    let mut sum = Complex::new(wp);
    for k in 1..n {
        let neg_ln = -Float::with_val(wp, k).ln();
        sum += Complex::with_val(wp, s * neg_ln).exp();
    }
    // N^{−s}
    let n_pow = Complex::with_val(wp, s * -Float::with_val(wp, n).ln()).exp();
    let s_minus_1 = Complex::with_val(wp, s - &one);
    sum += Complex::with_val(wp, &n_pow * n) / &s_minus_1;
    sum += Complex::with_val(wp, &n_pow / 2u32);

    // Σ B_{2k}/(2k)! (s)_{2k−1} N^{−s−2k+1}
    let terms = 60;
    let bern = even_bernoulli(terms);
    let n_f = Float::with_val(wp, n);
    let n2_inv = Float::with_val(wp, &n_f * &n_f).recip();
    // (s)_1 N^{−s−1}
    let mut poch = Complex::with_val(wp, s * &n_pow) / &n_f;
    let mut fact = Float::with_val(wp, 2); // (2k)!
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let scale = Float::with_val(wp, sum.abs_ref());
    for (idx, b) in bern.iter().enumerate() {
        let k = idx as u32 + 1;
        let term = Complex::with_val(wp, &poch * Float::with_val(wp, b)) / &fact;
        let mag = Float::with_val(wp, term.abs_ref());
        sum += &term;
        if mag < Float::with_val(wp, &eps * &scale) {
            break;
        }
        // advance to (s)_{2k+1} N^{−s−2k−1}
        poch *= Complex::with_val(wp, s + (2 * k - 1));
        poch *= Complex::with_val(wp, s + (2 * k));
        poch *= &n2_inv;
        fact *= (2 * k + 1) * (2 * k + 2);
    }
    Ok(Complex::with_val(prec, sum))
}

/// `π^{−s/2} Γ(s/2) ζ(s)` at `prec` bits.
pub fn xi_big(s: &Complex, prec: u32) -> Result<Complex> {
    let wp = prec + 16;
    let z = zeta_big(s, wp)?;
    let half = Complex::with_val(wp, s / 2u32);
    let g = gamma_big(&half, wp)?;
    let ln_pi = Float::with_val(wp, Constant::Pi).ln();
    let pi_pow = Complex::with_val(wp, -(half * ln_pi)).exp();
    Ok(Complex::with_val(prec, z * g * pi_pow))
}

/// `ζ(s)` and `ξ(s)`; `|Im s| <= 500`.
pub fn zeta_complex(s: ComplexValue) -> Result<ZetaValue> {
    if !(s.im().abs() <= MAX_ABS_IM) {
        return domain(format!("|Im s| = {} exceeds {MAX_ABS_IM}", s.im().abs()));
    }
    let prec0 = 64;
    let sb = from_value(&s, prec0)?;
    let prec = bits_for(&sb);
    let sb = from_value(&s, prec)?;
    let zeta = zeta_big(&sb, prec)?;
    let wp = prec + 16;
    let half = Complex::with_val(wp, &sb / 2u32);
    let g = gamma_big(&half, wp)?;
    let ln_pi = Float::with_val(wp, Constant::Pi).ln();
    let pi_pow = Complex::with_val(wp, -(half * ln_pi)).exp();
    let xi = Complex::with_val(wp, &zeta * g) * pi_pow;
    Ok(ZetaValue {
        s,
        zeta: to_value(&zeta),
        xi: to_value(&xi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn special_values() {
        let z = zeta_complex(ComplexValue::new(2.0, 0.0)).unwrap();
        assert!((z.zeta.re() - PI * PI / 6.0).abs() < 1e-15);
        assert!(z.zeta.im().abs() < 1e-20);
        let z = zeta_complex(ComplexValue::new(-1.0, 0.0)).unwrap();
        assert!((z.zeta.re() + 1.0 / 12.0).abs() < 1e-15);
        let z = zeta_complex(ComplexValue::new(0.5, 0.0)).unwrap();
        assert!((z.zeta.re() + 1.460_354_508_809_586_8).abs() < 1e-14);
        // ζ(1/2 + i) = 0.1439364270771890 − 0.7220997435316730 i
        let z = zeta_complex(ComplexValue::new(0.5, 1.0)).unwrap();
        assert!((z.zeta.re() - 0.143_936_427_077_189).abs() < 1e-13);
        assert!((z.zeta.im() + 0.722_099_743_531_673).abs() < 1e-13);
        // ξ(2) = π^{−1} Γ(1) ζ(2) = π/6
        let z = zeta_complex(ComplexValue::new(2.0, 0.0)).unwrap();
        assert!((z.xi.re() - PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn first_zero() {
        let z = zeta_complex(ComplexValue::new(0.5, 14.134_725)).unwrap();
        assert!(z.zeta.abs() < 1e-6);
        let z = zeta_complex(ComplexValue::new(0.5, 14.134_725_141_734_69)).unwrap();
        assert!(z.zeta.abs() < 1e-13);
    }

    #[test]
    fn functional_equation() {
        for (re, im) in [(0.7, 21.0), (0.2, 100.0), (1.3, 250.0), (-0.4, 480.0)] {
            let a = zeta_complex(ComplexValue::new(re, im)).unwrap();
            let b = zeta_complex(ComplexValue::new(1.0 - re, -im)).unwrap();
            let dev = (a.xi - b.xi).abs() / a.xi.abs();
            assert!(dev < 1e-12, "{re}+{im}i: {dev}");
        }
    }

    #[test]
    fn poles_and_range() {
        assert_eq!(zeta_complex(ComplexValue::new(1.0, 0.0)), Err(Error::Pole("zeta")));
        assert!(zeta_complex(ComplexValue::new(0.0, 0.0)).is_err());
        assert!(zeta_complex(ComplexValue::new(0.5, 600.0)).is_err());
    }

    #[test]
    fn large_height_against_riemann_siegel_scale() {
        // |ζ(1/2 + it)| stays far below t^{1/6} log t at these heights
        for t in [100.0, 300.0, 500.0] {
            let z = zeta_complex(ComplexValue::new(0.5, t)).unwrap();
            assert!(z.zeta.abs() < t.powf(1.0 / 6.0) * t.ln());
        }
    }
}
