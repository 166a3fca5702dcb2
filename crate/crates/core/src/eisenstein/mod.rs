//! Real-analytic Eisenstein series `E(z, s)` for the modular group.
//!
//! `E(z, s) = y^s + φ(s) y^{1−s} + Σ_{n≠0} c_n √y K_{s−1/2}(2π|n|y) e^{2πinx}`
//! with `c_n = 2|n|^{s−1/2} σ_{1−2s}(|n|)/ξ(2s)` and `φ(s) = ξ(2s−1)/ξ(2s)`.
//! [`direct_coset_sum`] evaluates the defining lattice sum independently
//! for `Re s > 1`.

mod coset;
mod shape;
mod zeta;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::asymptotics::evaluate;
use crate::error::{domain, Error, Result};
use crate::oracle::{k_contour_with, k_series_with, ContourOptions, SERIES_MAX_ABS_T};
use crate::types::{ComplexValue, Method, PrecisionPolicy};

pub use coset::{direct_coset_sum, direct_coset_sum_with, CosetOptions, CosetSum};
pub use shape::{
    bound_shape_check, bound_shape_check_with, coefficient_shape_ratio, ln_coefficient_bound,
    ln_coefficient_sum_squares, ShapeCase, ShapeOptions, ShapeReport, ShapeRow,
    COEFFICIENT_SHAPE_CONSTANT,
};
pub use zeta::{xi_big, zeta_big, zeta_complex, ZetaValue, MAX_ABS_IM};

/// Default lower bound on `|t|`.
pub const DEFAULT_T0: f64 = 30.0;

/// Where the `K` values in the Fourier sum come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSource {
    /// Extended-precision series / contour quadrature.
    Oracle,
    /// [`evaluate`]: leading-order asymptotics, series below `y = 1`.
    Asymptotic,
}

impl KernelSource {
    pub fn tag(&self) -> &'static str {
        match self {
            KernelSource::Oracle => "oracle",
            KernelSource::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EisensteinOptions {
    pub kernel: KernelSource,
    pub t0: f64,
    /// Digits requested from the oracle kernels.
    pub digits: u32,
}

impl Default for EisensteinOptions {
    fn default() -> Self {
        EisensteinOptions {
            kernel: KernelSource::Oracle,
            t0: DEFAULT_T0,
            digits: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EisensteinPoint {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub t: f64,
    /// Fourier modes `1 <= |n| <= n_terms` are summed.
    pub n_terms: usize,
    pub value: ComplexValue,
    /// `y^s + φ(s) y^{1−s}`.
    pub constant_term: ComplexValue,
    /// `value − constant_term`.
    pub fourier_part: ComplexValue,
    pub kernel: KernelSource,
    /// Estimated relative error of `value`.
    pub accuracy: f64,
}

/// First `N >= 1` with `2π(N+1)y >= max(π|t|/2 + 40, |t| + 40)`.
pub fn truncation_length(t: f64, y: f64) -> usize {
    let target = (PI * t.abs() / 2.0 + 40.0).max(t.abs() + 40.0);
    let n = (target / (2.0 * PI * y)).ceil() - 1.0;
    n.max(1.0) as usize
}

fn divisor_power_sum(n: u64, w: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            sum += (w * (d as f64).ln()).exp();
            let e = n / d;
            if e != d {
                sum += (w * (e as f64).ln()).exp();
            }
        }
        d += 1;
    }
    sum
}

fn s_parts(s: ComplexValue) -> Result<Complex64> {
    s.to_complex64()
}

fn xi_two_s(s: Complex64) -> Result<ComplexValue> {
    Ok(zeta_complex(ComplexValue::from_complex(2.0 * s))?.xi)
}

fn coefficient_with(n: i64, s: Complex64, xi2s: &ComplexValue) -> ComplexValue {
    let m = n.unsigned_abs();
    let sigma = divisor_power_sum(m, 1.0 - 2.0 * s);
    let pow = ((s - 0.5) * (m as f64).ln()).exp();
    ComplexValue::from_complex(2.0 * pow * sigma) / *xi2s
}

/// `c_n = 2|n|^{s−1/2} σ_{1−2s}(|n|)/ξ(2s)`, `n ≠ 0`.
pub fn fourier_coefficient(n: i64, s: ComplexValue) -> Result<ComplexValue> {
    if n == 0 {
        return domain("n = 0 is the constant term y^s + φ(s) y^{1−s}");
    }
    let sc = s_parts(s)?;
    Ok(coefficient_with(n, sc, &xi_two_s(sc)?))
}

/// `φ(s) = ξ(2s−1)/ξ(2s)`.
pub fn scattering_term(s: ComplexValue) -> Result<ComplexValue> {
    let sc = s_parts(s)?;
    let num = zeta_complex(ComplexValue::from_complex(2.0 * sc - 1.0))
        .map_err(|_| Error::Pole("scattering term"))?
        .xi;
    let den = xi_two_s(sc).map_err(|_| Error::Pole("scattering term"))?;
    if den.is_zero() {
        return Err(Error::Pole("scattering term"));
    }
    Ok(num / den)
}

/// `K_ν(a)` for the Fourier sum.
fn kernel(nu: ComplexValue, a: f64, opts: &EisensteinOptions) -> Result<(ComplexValue, f64)> {
    match opts.kernel {
        KernelSource::Oracle => {
            if a < 2.0 && nu.im().abs() <= SERIES_MAX_ABS_T && !(nu.im() == 0.0 && nu.re().fract() == 0.0) {
                let policy = PrecisionPolicy {
                    base_digits: opts.digits,
                    ..Default::default()
                };
                Ok((k_series_with(nu, a, &policy)?.to_value(), 0.0))
            } else if a >= 1.0 {
                let co = ContourOptions {
                    digits: opts.digits,
                    ..Default::default()
                };
                Ok((k_contour_with(nu, a, &co)?.value.to_value(), 0.0))
            } else {
                Err(Error::OracleRange(format!("K at argument {a} with |t| > {SERIES_MAX_ABS_T}")))
            }
        }
        KernelSource::Asymptotic => {
            let res = evaluate(nu.re(), nu.im(), a)?;
            // relative size of the first neglected term
            let err = match res.method {
                Method::Series => 0.0,
                Method::MonoCoalescence => a.powf(-1.0 / 3.0),
                _ => 1.0 / a,
            };
            Ok((res.value, err))
        }
    }
}

/// Everything in `E(x + iy, s)` that does not depend on `x`.
#[derive(Debug, Clone)]
pub struct FourierData {
    pub y: f64,
    pub s: ComplexValue,
    pub constant_term: ComplexValue,
    /// `c_n √y K_{s−1/2}(2πny)` for `n = 1..=N`.
    pub modes: Vec<ComplexValue>,
    /// Estimated relative kernel error for each mode.
    pub mode_errors: Vec<f64>,
    pub kernel: KernelSource,
}

impl FourierData {
    pub fn new(y: f64, s: ComplexValue, opts: &EisensteinOptions) -> Result<Self> {
        let (r, t) = (s.re(), s.im());
        if !(y > 0.0 && y.is_finite()) {
            return domain(format!("y = {y} must be positive"));
        }
        if !(0.5..=1.5).contains(&r) {
            return domain(format!("Re s = {r} not in [1/2, 3/2]"));
        }
        if !(t.abs() >= opts.t0) {
            return domain(format!("|Im s| = {} below t0 = {}", t.abs(), opts.t0));
        }
        let sc = s_parts(s)?;
        let xi2s = xi_two_s(sc)?;
        let phi = scattering_term(s)?;
        let ln_y = y.ln();
        let constant_term = ComplexValue::from_complex((sc * ln_y).exp())
            + phi * ComplexValue::from_complex(((1.0 - sc) * ln_y).exp());
        let n = truncation_length(t, y);
        let nu = ComplexValue::new(r - 0.5, t);
        let mut modes = Vec::with_capacity(n);
        let mut mode_errors = Vec::with_capacity(n);
        for k in 1..=n {
            let (kv, err) = kernel(nu, 2.0 * PI * k as f64 * y, opts)?;
            modes.push(coefficient_with(k as i64, sc, &xi2s) * kv.mul_real(y.sqrt()));
            mode_errors.push(err);
        }
        Ok(FourierData {
            y,
            s,
            constant_term,
            modes,
            mode_errors,
            kernel: opts.kernel,
        })
    }

    /// `Σ_{1<=|n|<=N} c_n √y K e^{2πinx} = 2 Σ_{n>=1} (...) cos 2πnx`.
    pub fn fourier_part(&self, x: f64) -> ComplexValue {
        self.modes
            .iter()
            .enumerate()
            .map(|(i, m)| m.mul_real(2.0 * (2.0 * PI * (i + 1) as f64 * x).cos()))
            .sum()
    }

    pub fn point(&self, x: f64) -> EisensteinPoint {
        let fourier_part = self.fourier_part(x);
        let value = self.constant_term + fourier_part;
        let scale = value.abs().max(f64::MIN_POSITIVE);
        let kernel_err: f64 = self
            .modes
            .iter()
            .zip(&self.mode_errors)
            .map(|(m, e)| 2.0 * m.abs() * e)
            .sum::<f64>()
            / scale;
        // oracle kernels: rounding of the summed terms
        let rounding = 1e-14 * (self.constant_term.abs() + self.modes.iter().map(|m| 2.0 * m.abs()).sum::<f64>()) / scale;
        EisensteinPoint {
            x,
            y: self.y,
            r: self.s.re(),
            t: self.s.im(),
            n_terms: self.modes.len(),
            value,
            constant_term: self.constant_term,
            fourier_part,
            kernel: self.kernel,
            accuracy: kernel_err + rounding,
        }
    }
}

/// `E(x + iy, s)` from its Fourier expansion, with oracle kernels.
pub fn eisenstein_eval(x: f64, y: f64, s: ComplexValue, target_accuracy: f64) -> Result<EisensteinPoint> {
    eisenstein_eval_with(x, y, s, target_accuracy, &EisensteinOptions::default())
}

pub fn eisenstein_eval_with(
    x: f64,
    y: f64,
    s: ComplexValue,
    target_accuracy: f64,
    opts: &EisensteinOptions,
) -> Result<EisensteinPoint> {
    if !x.is_finite() {
        return domain("x must be finite");
    }
    let p = FourierData::new(y, s, opts)?.point(x);
    if p.accuracy > target_accuracy {
        return Err(Error::Accuracy { achieved: p.accuracy });
    }
    Ok(p)
}
