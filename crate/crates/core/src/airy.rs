//! Airy function `Ai` and its derivative on the real line.
//!
//! `|x| <= 12`: Maclaurin series summed in 320-bit arithmetic (the series
//! cancels about `e^{2·(2/3)|x|^{3/2}}`, i.e. 24 digits at the edge).
//! Beyond that the standard asymptotic expansions, whose smallest term is
//! below `1e-24` there.

use std::sync::OnceLock;

use rug::ops::Pow;
use rug::Float;

use crate::error::{domain, Result};
use crate::oracle::gamma_big;

const SERIES_LIMIT: f64 = 12.0;
const MAX_ABS_X: f64 = 1e8;
const BITS: u32 = 320;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub ai: f64,
    pub ai_prime: f64,
    pub arg: f64,
}

/// `Ai(x)`.
pub fn airy_ai(x: f64) -> Result<f64> {
    airy(x).map(|a| a.ai)
}

/// `Ai'(x)`.
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    airy(x).map(|a| a.ai_prime)
}

pub fn airy(x: f64) -> Result<AiryValue> {
    check(x)?;
    let (ai, aip) = if x.abs() <= SERIES_LIMIT {
        let (ai, aip) = series(x);
        (ai.to_f64(), aip.to_f64())
    } else if x > 0.0 {
        let (ai, aip) = asymptotic_pos(x);
        let damp = (-(2.0 / 3.0) * x * x.sqrt()).exp();
        (ai * damp, aip * damp)
    } else {
        asymptotic_neg(-x)
    };
    Ok(AiryValue {
        ai,
        ai_prime: aip,
        arg: x,
    })
}

/// `(Ai(x) e^{ξ}, Ai'(x) e^{ξ})` with `ξ = (2/3) x^{3/2}`, for `x >= 0`.
/// Finite for every `x` in range, unlike the unscaled values.
pub fn airy_scaled(x: f64) -> Result<(f64, f64)> {
    check(x)?;
    if x < 0.0 {
        return domain(format!("scaled Airy needs x >= 0, got {x}"));
    }
    if x <= SERIES_LIMIT {
        let (ai, aip) = series(x);
        let xi = Float::with_val(BITS, x).sqrt() * x * 2u32 / 3u32;
        let e = xi.exp();
        Ok((Float::with_val(BITS, &ai * &e).to_f64(), (aip * e).to_f64()))
    } else {
        Ok(asymptotic_pos(x))
    }
}

fn check(x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > MAX_ABS_X {
        return domain(format!("Airy argument {x} outside |x| <= {MAX_ABS_X:e}"));
    }
    Ok(())
}

/// `(Ai(0), -Ai'(0))` at `BITS` precision.
fn origin_constants() -> &'static (Float, Float) {
    static C: OnceLock<(Float, Float)> = OnceLock::new();
    C.get_or_init(|| {
        let third = Float::with_val(BITS, 1) / 3u32;
        let two_thirds = Float::with_val(BITS, 2) / 3u32;
        let g13 = gamma_big(&rug::Complex::with_val(BITS, (&third, 0)), BITS)
            .expect("1/3 is not a pole");
        let g23 = gamma_big(&rug::Complex::with_val(BITS, (&two_thirds, 0)), BITS)
            .expect("2/3 is not a pole");
        let three = Float::with_val(BITS, 3);
        // Ai(0) = 3^{-2/3}/Γ(2/3), -Ai'(0) = 3^{-1/3}/Γ(1/3)
        let c1 = Float::with_val(BITS, three.clone().pow(-two_thirds)) / g23.real();
        let c2 = Float::with_val(BITS, three.pow(-third)) / g13.real();
        (c1, c2)
    })
}

/// The two Maclaurin solutions `f, g` and their derivatives.
fn maclaurin(x: f64) -> [Float; 4] {
    let xf = Float::with_val(BITS, x);
    let x3 = Float::with_val(BITS, xf.clone().square() * &xf);
    let eps = Float::with_val(BITS, Float::i_exp(1, -(BITS as i32)));
    // f = Σ a_k, a_k = a_{k-1} x³/((3k-1)3k); g = Σ b_k, b_0 = x
    // f' = Σ c_k, c_1 = x²/2, c_k = c_{k-1} x³/((3k-3)(3k-1)); g' = Σ d_k, d_0 = 1
    let mut a = Float::with_val(BITS, 1);
    let mut b = xf.clone();
    let mut c = Float::with_val(BITS, xf.square_ref()) / 2u32;
    let mut d = Float::with_val(BITS, 1);
    let mut f = a.clone();
    let mut g = b.clone();
    let mut fp = c.clone();
    let mut gp = d.clone();
    let mut k = 1u32;
    loop {
        a *= &x3;
        a /= (3 * k - 1) * (3 * k);
        b *= &x3;
        b /= (3 * k) * (3 * k + 1);
        d *= &x3;
        d /= (3 * k - 2) * (3 * k);
        f += &a;
        g += &b;
        gp += &d;
        if k >= 2 {
            c *= &x3;
            c /= (3 * k - 3) * (3 * k - 1);
            fp += &c;
        }
        let biggest = a.clone().abs().max(&b.clone().abs()).max(&d.clone().abs());
        if k > 3 && biggest < eps {
            break;
        }
        k += 1;
    }
    [f, g, fp, gp]
}

fn series(x: f64) -> (Float, Float) {
    let (c1, c2) = origin_constants();
    let [f, g, fp, gp] = maclaurin(x);
    let ai = Float::with_val(BITS, c1 * &f) - Float::with_val(BITS, c2 * &g);
    let aip = Float::with_val(BITS, c1 * &fp) - Float::with_val(BITS, c2 * &gp);
    (ai, aip)
}

/// Coefficients `u_k` of the asymptotic expansions, `k = 0..n`.
fn u_coefficients(n: usize) -> Vec<f64> {
    let mut u = vec![1.0; n + 1];
    for k in 1..=n {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

fn v_coefficients(u: &[f64]) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(k, uk)| {
            let kf = k as f64;
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk
        })
        .collect()
}

/// Sums `Σ s_k c_k / ξ^k` until the terms stop decreasing or are negligible.
fn asym_sum(c: &[f64], xi: f64, sign: impl Fn(usize) -> f64, parity: Option<usize>) -> f64 {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for (k, ck) in c.iter().enumerate() {
        if let Some(p) = parity {
            if k % 2 != p {
                continue;
            }
        }
        let term = sign(k) * ck / xi.powi(k as i32);
        if term.abs() > prev {
            break;
        }
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        prev = term.abs();
    }
    sum
}

/// Scaled `(Ai e^{ξ}, Ai' e^{ξ})` for large positive `x`.
fn asymptotic_pos(x: f64) -> (f64, f64) {
    let xi = (2.0 / 3.0) * x * x.sqrt();
    let u = u_coefficients(40);
    let v = v_coefficients(&u);
    let alt = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let su = asym_sum(&u, xi, alt, None);
    let sv = asym_sum(&v, xi, alt, None);
    let q = x.powf(0.25);
    let norm = 0.5 / std::f64::consts::PI.sqrt();
    (norm * su / q, -norm * q * sv)
}

/// `(Ai(-z), Ai'(-z))` for large positive `z`.
fn asymptotic_neg(z: f64) -> (f64, f64) {
    let xi = (2.0 / 3.0) * z * z.sqrt();
    let u = u_coefficients(40);
    let v = v_coefficients(&u);
    // alternating signs within the even and odd subsequences
    let sgn = |k: usize| if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let ue = asym_sum(&u, xi, sgn, Some(0));
    let uo = asym_sum(&u, xi, sgn, Some(1));
    let ve = asym_sum(&v, xi, sgn, Some(0));
    let vo = asym_sum(&v, xi, sgn, Some(1));
    let phase = xi - std::f64::consts::FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    let q = z.powf(0.25);
    let norm = 1.0 / std::f64::consts::PI.sqrt();
    (norm / q * (c * ue + s * uo), norm * q * (s * ve - c * vo))
}

/// `π` at the series precision; used by tests of the Wronskian.
#[cfg(test)]
fn pi() -> Float {
    Float::with_val(BITS, rug::float::Constant::Pi)
}

/// `(Bi(x), Bi'(x))` from the Maclaurin series.
#[cfg(test)]
fn airy_bi_series(x: f64) -> (f64, f64) {
    let (c1, c2) = origin_constants();
    let [f, g, fp, gp] = maclaurin(x);
    let s3 = Float::with_val(BITS, 3).sqrt();
    let bi = (Float::with_val(BITS, c1 * &f) + Float::with_val(BITS, c2 * &g)) * &s3;
    let bip = (Float::with_val(BITS, c1 * &fp) + Float::with_val(BITS, c2 * &gp)) * &s3;
    (bi.to_f64(), bip.to_f64())
}
