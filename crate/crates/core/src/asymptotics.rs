//! Leading-order asymptotics of `K_{r+it}(y)` as `y → ∞` with `t/y` fixed,
//! a priori envelopes, and the dispatcher [`evaluate`].
//!
//! All values are returned as [`ComplexValue`]s: the exponential factors
//! (`e^{−tπ/2}` and friends) are applied on the log scale.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::airy::{airy, airy_scaled};
use crate::error::{domain, Error, Result};
use crate::oracle::{gamma_one_third, k_contour, k_series, SERIES_MAX_ABS_T};
use crate::saddle::{cfu_coefficients_in, chi_constant, CfuCase, SaddleData, UniformWindow};
use crate::types::{
    classify_regime, ComplexValue, EvalResult, Method, Regime, RegimeThresholds,
};

/// Nonuniform mono evaluator refuses `π/2 − guard < θ < π/2`.
pub const MONO_GUARD: f64 = 0.05;

/// Error orders reported by each evaluator.
pub mod orders {
    use crate::types::ErrorOrder;
    pub const MONO_LAPLACE: ErrorOrder = ErrorOrder::new(-3, 2);
    pub const MONO_COALESCENCE: ErrorOrder = ErrorOrder::new(-2, 3);
    pub const OSC_LAPLACE: ErrorOrder = ErrorOrder::new(-3, 2);
    pub const UNIFORM_AI: ErrorOrder = ErrorOrder::new(-4, 3);
    pub const UNIFORM_AI_PRIME: ErrorOrder = ErrorOrder::new(-5, 3);
}

fn check_r(r: f64, th: &RegimeThresholds) -> Result<()> {
    if !r.is_finite() {
        return domain("order must be finite");
    }
    if r.abs() > th.max_abs_r {
        return Err(Error::OrderOutOfRange {
            r,
            max: th.max_abs_r,
        });
    }
    Ok(())
}

fn check_y(y: f64) -> Result<()> {
    if !(y > 0.0 && y.is_finite()) {
        return domain(format!("argument y = {y} must be positive and finite"));
    }
    Ok(())
}

/// `Γ(1/3) / (2^{2/3} 3^{1/6})`.
pub fn coalescence_constant() -> f64 {
    gamma_one_third() / (2f64.powf(2.0 / 3.0) * 3f64.powf(1.0 / 6.0))
}

/// Dominant term for `t = y sin θ`, `0 <= θ <= π/2`.
///
/// For `θ < π/2` this is `√(π/(2y cos θ)) e^{−y(cos θ + θ sin θ)} e^{irθ}`;
/// exactly at `θ = π/2` it is `e^{−πy/2 + iπr/2} y^{−1/3} Γ(1/3)/(2^{2/3}3^{1/6})`.
/// Points with `π/2 − 0.05 < θ < π/2` belong to [`k_uniform_mono`].
pub fn k_mono_nonuniform(r: f64, theta: f64, y: f64) -> Result<EvalResult> {
    let th = RegimeThresholds::default();
    check_r(r, &th)?;
    check_y(y)?;
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return domain(format!("theta {theta} not in [0, π/2]"));
    }
    if theta == FRAC_PI_2 {
        let ln_abs = -FRAC_PI_2 * y - y.ln() / 3.0 + coalescence_constant().ln();
        let value = ComplexValue::from_polar_ln(ln_abs, FRAC_PI_2 * r);
        return Ok(EvalResult {
            value,
            terms: vec![value],
            regime: Regime::MonoNonuniform { theta },
            method: Method::MonoCoalescence,
            error_order: vec![orders::MONO_COALESCENCE],
            ln_envelope: None,
            near_zero: false,
            oracle: None,
        });
    }
    if theta > FRAC_PI_2 - MONO_GUARD {
        return Err(Error::DispatchToUniform { param: theta });
    }
    let (s, c) = theta.sin_cos();
    let ln_abs = 0.5 * (PI / (2.0 * y * c)).ln() - y * (c + theta * s);
    let value = ComplexValue::from_polar_ln(ln_abs, r * theta);
    Ok(EvalResult {
        value,
        terms: vec![value],
        regime: Regime::MonoNonuniform { theta },
        method: Method::MonoLaplace,
        error_order: vec![orders::MONO_LAPLACE],
        ln_envelope: None,
        near_zero: false,
        oracle: None,
    })
}

/// Smallest `μ` accepted by [`k_osc_nonuniform`]: `t/y >= 1 + width`.
pub fn osc_guard(th: &RegimeThresholds) -> f64 {
    (1.0 + th.coalescence_width).acosh()
}

/// Dominant term for `t = y cosh μ`:
///
/// `√(2π/(y sinh μ)) e^{−y(π/2)cosh μ + irπ/2} [cosh(rμ) sin(π/4 − χ) − i sinh(rμ) cos(π/4 − χ)]`
/// with `χ = y(sinh μ − μ cosh μ)`. `terms` holds the two bracket terms
/// times the prefactor; `ln_envelope` is the prefactor times
/// `max_phase |bracket| = cosh(rμ)`, and `near_zero` marks points where the
/// bracket is below half of that.
pub fn k_osc_nonuniform(r: f64, mu: f64, y: f64) -> Result<EvalResult> {
    let th = RegimeThresholds::default();
    check_r(r, &th)?;
    check_y(y)?;
    if !(mu > 0.0) || !mu.is_finite() {
        return domain(format!("mu {mu} must be positive"));
    }
    // small slack so that μ = acosh(t/y) at the band edge is accepted
    if mu < osc_guard(&th) * (1.0 - 1e-12) {
        return Err(Error::DispatchToUniform { param: mu });
    }
    let chi = chi_constant(mu, y);
    let phase = FRAC_PI_4 - chi;
    let (sp, cp) = phase.sin_cos();
    let ln_pre = 0.5 * (2.0 * PI / (y * mu.sinh())).ln() - y * FRAC_PI_2 * mu.cosh();
    let pre = ComplexValue::from_polar_ln(ln_pre, r * FRAC_PI_2);
    let t1 = pre.mul_real((r * mu).cosh() * sp);
    let t2 = pre.mul_complex(Complex64::new(0.0, -(r * mu).sinh() * cp));
    let bracket = ((r * mu).cosh() * sp).hypot((r * mu).sinh() * cp);
    Ok(EvalResult {
        value: t1 + t2,
        terms: vec![t1, t2],
        regime: Regime::OscNonuniform { mu },
        method: Method::OscLaplace,
        error_order: vec![orders::OSC_LAPLACE, orders::OSC_LAPLACE],
        ln_envelope: Some(ln_pre + (r * mu).cosh().ln()),
        near_zero: bracket < 0.5 * (r * mu).cosh(),
        oracle: None,
    })
}

/// `√(2π)(t² − y²)^{−1/4} e^{−tπ/2} sin(π/4 − √(t² − y²) + t·arccosh(t/y))`,
/// the classical leading term for purely imaginary order, `t > y`.
pub fn k_imag_order_classical(t: f64, y: f64) -> Result<ComplexValue> {
    check_y(y)?;
    if !(t > y) {
        return domain("classical oscillatory form needs t > y");
    }
    let root = ((t - y) * (t + y)).sqrt();
    let s = (FRAC_PI_4 - root + t * (t / y).acosh()).sin();
    let ln = 0.5 * (2.0 * PI).ln() - 0.5 * root.ln() - t * FRAC_PI_2;
    Ok(ComplexValue::from_polar_ln(ln, 0.0).mul_real(s))
}

/// `2πi e^{yA}[p₀ y^{−1/3} Ai(y^{2/3}ζ) − q₀ y^{−2/3} Ai'(y^{2/3}ζ)]` written
/// with the real coefficients of [`SaddleData`].
fn uniform_value(r: f64, y: f64, d: &SaddleData) -> Result<(ComplexValue, ComplexValue)> {
    let x = y.powf(2.0 / 3.0) * d.zeta;
    // Ai and Ai' with any exponential part kept on the log scale
    let (ai, aip, ln_scale) = if x >= 0.0 {
        let (a, b) = airy_scaled(x)?;
        (a, b, -(2.0 / 3.0) * x * x.sqrt())
    } else {
        let v = airy(x)?;
        (v.ai, v.ai_prime, 0.0)
    };
    let ln_pre = y * d.a_coeff + ln_scale;
    let pre = ComplexValue::from_polar_ln(ln_pre, r * FRAC_PI_2);
    let k = PI * 2f64.sqrt();
    let t_ai = pre.mul_real(k * y.powf(-1.0 / 3.0) * d.ai_coeff * d.ratio * ai);
    let t_aip = pre.mul_complex(Complex64::new(
        0.0,
        k * y.powf(-2.0 / 3.0) * d.ai_prime_coeff * d.ratio * aip,
    ));
    Ok((t_ai, t_aip))
}

fn uniform_result(r: f64, y: f64, d: &SaddleData, method: Method) -> Result<EvalResult> {
    let (a, b) = uniform_value(r, y, d)?;
    Ok(EvalResult {
        value: a + b,
        terms: vec![a, b],
        regime: Regime::UniformNearCoalescence,
        method,
        error_order: vec![orders::UNIFORM_AI, orders::UNIFORM_AI_PRIME],
        ln_envelope: None,
        near_zero: false,
        oracle: None,
    })
}

/// Uniform Airy-type expansion for `t = y sin θ`, `θ` in the window below
/// `π/2`: the `Ai` term (order `y^{−1/3}`) plus the `Ai'` term (`y^{−2/3}`).
pub fn k_uniform_mono(r: f64, theta: f64, y: f64) -> Result<EvalResult> {
    k_uniform_mono_tilde(r, theta - FRAC_PI_2, y, &UniformWindow::default())
}

/// As [`k_uniform_mono`], parameterized by `θ̃ = θ − π/2 <= 0` so callers
/// can pass it without cancellation.
pub fn k_uniform_mono_tilde(r: f64, theta_tilde: f64, y: f64, window: &UniformWindow) -> Result<EvalResult> {
    check_r(r, &RegimeThresholds::default())?;
    check_y(y)?;
    let d = cfu_coefficients_in(r, theta_tilde, CfuCase::Mono, window)?;
    uniform_result(r, y, &d, Method::UniformMono)
}

/// Uniform expansion for `t = y cosh μ`, `0 <= μ <= μ₀`. At `μ = 0` it
/// coincides exactly with `k_uniform_mono(r, π/2, y)`.
pub fn k_uniform_osc(r: f64, mu: f64, y: f64) -> Result<EvalResult> {
    k_uniform_osc_in(r, mu, y, &UniformWindow::default())
}

pub fn k_uniform_osc_in(r: f64, mu: f64, y: f64, window: &UniformWindow) -> Result<EvalResult> {
    check_r(r, &RegimeThresholds::default())?;
    check_y(y)?;
    let d = cfu_coefficients_in(r, mu, CfuCase::Osc, window)?;
    uniform_result(r, y, &d, Method::UniformOsc)
}

/// Constant in [`small_y_envelope`].
pub const SMALL_Y_CONSTANT: f64 = 8.0 * PI;
/// Smallest `|t|` for which [`small_y_envelope`] is claimed.
pub const DEFAULT_T0: f64 = 30.0;

/// `C y^{1/2−r} e^{−|t|π/2} |t|^{r−1}`, a bound for `|K_{r−1/2+it}(y)|` when
/// `1/2 <= r <= 3/2`, `|t| >= 30`, `0 < y < 1`. Natural log.
pub fn ln_small_y_envelope(r: f64, t: f64, y: f64) -> Result<f64> {
    if !(0.5..=1.5).contains(&r) {
        return domain(format!("r = {r} not in [1/2, 3/2]"));
    }
    if !(t.abs() >= DEFAULT_T0) || !t.is_finite() {
        return domain(format!("|t| = {} below t0 = {DEFAULT_T0}", t.abs()));
    }
    if !(y > 0.0 && y < 1.0) {
        return domain(format!("y = {y} not in (0, 1)"));
    }
    let ta = t.abs();
    Ok(SMALL_Y_CONSTANT.ln() + (0.5 - r) * y.ln() - ta * FRAC_PI_2 + (r - 1.0) * ta.ln())
}

pub fn small_y_envelope(r: f64, t: f64, y: f64) -> Result<f64> {
    ln_small_y_envelope(r, t, y).map(f64::exp)
}

/// Exponent `N` of [`coarse_envelope`]'s constant: the maximum over `R` of
/// `−y₀R⁴/24 + |r|R`.
pub fn coarse_exponent(r: f64, y0: f64) -> f64 {
    0.75 * r.abs() * (6.0 * r.abs() / y0).cbrt()
}

/// `C' e^{−y}/√y` with `C' = e^N √(π/2)`; bounds `|K_{r+it}(y)|` for every
/// real `t` and `y >= y₀`. Natural log.
pub fn ln_coarse_envelope_from(r: f64, y: f64, y0: f64) -> Result<f64> {
    check_r(r, &RegimeThresholds::default())?;
    if !(y0 > 0.0) || !(y >= y0) || !y.is_finite() {
        return domain(format!("coarse envelope needs y >= y0 = {y0}, got {y}"));
    }
    Ok(coarse_exponent(r, y0) + 0.5 * FRAC_PI_2.ln() - y - 0.5 * y.ln())
}

pub fn coarse_envelope(r: f64, y: f64) -> Result<f64> {
    ln_coarse_envelope_from(r, y, 1.0).map(f64::exp)
}

/// Classifies `(r, t, y)` and evaluates with the matching formula.
///
/// `0 < y < 1` is answered by the series oracle (or the contour oracle past
/// the series cap on `|t|`), with the small-argument envelope attached when
/// it applies.
pub fn evaluate(r: f64, t: f64, y: f64) -> Result<EvalResult> {
    evaluate_with(r, t, y, &RegimeThresholds::default())
}

pub fn evaluate_with(r: f64, t: f64, y: f64, th: &RegimeThresholds) -> Result<EvalResult> {
    th.validate()?;
    let spec = classify_regime(r, t, y, th)?;
    let t = spec.t;
    let res = match spec.regime {
        Regime::SmallArgument => {
            let nu = ComplexValue::new(r, t);
            let value = if t <= SERIES_MAX_ABS_T && !(t == 0.0 && r.fract() == 0.0) {
                k_series(nu, y)?.to_value()
            } else {
                k_contour(nu, y)?.to_value()
            };
            // the envelope is phrased for order r' − 1/2 + it
            let ln_envelope = ln_small_y_envelope(r + 0.5, t, y).ok();
            EvalResult {
                value,
                terms: vec![value],
                regime: spec.regime,
                method: Method::Series,
                error_order: Vec::new(),
                ln_envelope,
                near_zero: false,
                oracle: None,
            }
        }
        Regime::UniformNearCoalescence => {
            let window = UniformWindow {
                theta0: UniformWindow::default().theta0.max(1.01 * (1.0 - th.coalescence_width).acos()),
                mu0: UniformWindow::default().mu0.max(1.01 * (1.0 + th.coalescence_width).acosh()),
            };
            if t <= y {
                // θ̃ = −arccos(t/y) = −2 arcsin(√((y − t)/(2y)))
                let a = -2.0 * ((y - t) / (2.0 * y)).sqrt().asin();
                k_uniform_mono_tilde(r, a, y, &window)?
            } else {
                let mu = (((t - y) * (t + y)).sqrt() / y).asinh();
                k_uniform_osc_in(r, mu, y, &window)?
            }
        }
        Regime::MonoNonuniform { theta } => k_mono_nonuniform(r, theta, y)?,
        Regime::OscNonuniform { mu } => k_osc_nonuniform(r, mu, y)?,
    };
    let mut res = res;
    if res.ln_envelope.is_none() && y >= 1.0 {
        res.ln_envelope = ln_coarse_envelope_from(r, y, 1.0).ok();
    }
    Ok(if spec.conjugate { res.conj() } else { res })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ErrorOrder;

    fn rel(a: &ComplexValue, b: &ComplexValue) -> f64 {
        a.rel_deviation(b)
    }

    #[test]
    fn mono_examples() {
        let k = k_mono_nonuniform(0.0, 0.0, 10.0).unwrap();
        let expect = (PI / 20.0).sqrt() * (-10f64).exp();
        assert!((k.value.re() - expect).abs() < 1e-15 * expect);
        assert!((k.value.re() - 1.79934e-5).abs() < 1e-9);
        // O(1/y) relative to K_0(10)
        let dev = (k.value.re() - 1.778_006_23e-5).abs() / 1.778e-5;
        assert!(dev > 0.005 && dev < 0.02);
        let k1 = k_mono_nonuniform(1.0, 0.0, 10.0).unwrap();
        assert!(rel(&k1.value, &k.value) < 1e-15);
        assert_eq!(k.error_order, vec![ErrorOrder::new(-3, 2)]);
        let k = k_mono_nonuniform(0.0, FRAC_PI_2, 100.0).unwrap();
        let expect = ComplexValue::from_polar_ln(-50.0 * PI - 100f64.ln() / 3.0, 0.0).mul_real(
            gamma_one_third() / (2f64.powf(2.0 / 3.0) * 3f64.powf(1.0 / 6.0)),
        );
        assert!(rel(&k.value, &expect) < 1e-14);
        assert_eq!(k.error_order, vec![ErrorOrder::new(-2, 3)]);
        assert!(matches!(
            k_mono_nonuniform(0.0, FRAC_PI_2 - 0.01, 100.0),
            Err(Error::DispatchToUniform { .. })
        ));
    }

    #[test]
    fn osc_reduces_to_classical_form() {
        for (mu, y) in [(0.5, 50.0), (1.0, 20.0), (2.0, 137.0)] {
            let k = k_osc_nonuniform(0.0, mu, y).unwrap();
            let c = k_imag_order_classical(y * mu.cosh(), y).unwrap();
            let dev = rel(&k.value, &c);
            let tol = if k.near_zero { 1e-9 } else { 1e-12 };
            assert!(dev < tol, "mu={mu} y={y}: {dev}");
        }
    }

    #[test]
    fn osc_envelope_example() {
        let k = k_osc_nonuniform(0.5, 1.0, 20.0).unwrap();
        let bound = (2.0 * PI / (20.0 * 1f64.sinh())).sqrt()
            * (-20.0 * FRAC_PI_2 * 1f64.cosh()).exp()
            * 0.5f64.cosh()
            * 2f64.sqrt();
        assert!(k.value.abs() <= bound);
        assert!(k.value.abs() <= k.envelope().unwrap() * (1.0 + 1e-12) * 2f64.sqrt());
    }

    #[test]
    fn osc_zero_of_the_oscillation_is_flagged() {
        // χ < 0; pick y so that π/4 − χ = 20π
        let mu: f64 = 1.0;
        let unit = mu.sinh() - mu * mu.cosh();
        let y = (20.0 * PI - FRAC_PI_4) / -unit;
        let k = k_osc_nonuniform(0.0, mu, y).unwrap();
        assert!(k.near_zero);
        assert!(k.value.abs() < 1e-10 * k.envelope().unwrap());
    }

    #[test]
    fn uniform_limits() {
        for (r, y) in [(0.0, 100.0), (1.0, 400.0), (1.5, 50.0)] {
            let u = k_uniform_mono(r, FRAC_PI_2, y).unwrap();
            let o = k_uniform_osc(r, 0.0, y).unwrap();
            assert_eq!(u.value, o.value);
            let n = k_mono_nonuniform(r, FRAC_PI_2, y).unwrap();
            assert!(rel(&u.terms[0], &n.value) < 1e-12, "r={r}");
        }
        let u = k_uniform_osc(0.0, 0.05, 500.0).unwrap();
        assert!(u.terms[1].is_zero());
        assert!(k_uniform_mono(0.0, 0.5, 100.0).is_err());
        assert!(k_uniform_osc(0.0, 2.0, 100.0).is_err());
    }

    #[test]
    fn envelopes() {
        let e = small_y_envelope(0.5, 50.0, 0.5).unwrap();
        let expect = SMALL_Y_CONSTANT * (-25.0 * PI).exp() / 50f64.sqrt();
        assert!((e - expect).abs() < 1e-12 * expect);
        assert!(small_y_envelope(1.5, 40.0, 0.999_999).unwrap().is_finite());
        assert!(small_y_envelope(1.6, 40.0, 0.5).is_err());
        assert!(small_y_envelope(1.0, 10.0, 0.5).is_err());
        let a = coarse_envelope(0.0, 10.0).unwrap();
        assert!((a - FRAC_PI_2.sqrt() * (-10f64).exp() / 10f64.sqrt()).abs() < 1e-15);
        assert!(coarse_envelope(1.5, 1.0).unwrap() > 0.0);
        assert!(coarse_envelope(1.0, 3.0).unwrap() < coarse_envelope(1.0, 2.0).unwrap());
    }

    #[test]
    fn dispatcher_routes_and_conjugates() {
        let a = evaluate(0.0, 50.0, 100.0).unwrap();
        assert!(matches!(a.regime, Regime::MonoNonuniform { .. }));
        let b = evaluate(0.5, 100.0, 100.0).unwrap();
        assert_eq!(b.method, Method::UniformMono);
        let c = evaluate(0.5, 30.0, 0.4).unwrap();
        assert_eq!(c.method, Method::Series);
        assert!(c.ln_envelope.is_some());
        for (r, t, y) in [(0.0, 50.0, 100.0), (1.0, 120.0, 100.0), (0.3, 101.0, 100.0), (0.5, 40.0, 0.3)] {
            let p = evaluate(r, t, y).unwrap();
            let m = evaluate(r, -t, y).unwrap();
            assert_eq!(m.value, p.value.conj());
        }
    }
}
