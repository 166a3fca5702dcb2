//! Saddle points, steepest-descent curves and the cubic (Chester–Friedman–
//! Ursell) change of variables for `∫ e^{-y φ(R)} e^{rR} dR`.
//!
//! Two phase functions, with `t = y sin θ` or `t = y cosh μ`:
//!
//! ```text
//! mono:  φ(R) = cosh R − iR sin θ     saddles i((−1)^k θ + kπ)
//! osc:   φ(R) = cosh R − iR cosh μ    saddles ±μ + i(π/2 + 2kπ)
//! ```
//!
//! Both cases are handled through `θ̃ = θ − π/2`, with `θ̃ = −iμ` in the
//! oscillatory one. Every expression that is `0/0` at coalescence (`θ̃ = 0`)
//! is written through the entire function
//! `h(θ̃²) = (sin θ̃ − θ̃ cos θ̃)/θ̃³ = 1/3 − θ̃²/30 + …`, so no Taylor switch is
//! needed.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::types::ComplexValue;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseKind {
    Mono { theta: f64 },
    Osc { mu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFunction {
    pub kind: PhaseKind,
}

impl PhaseFunction {
    pub fn mono(theta: f64) -> Self {
        PhaseFunction {
            kind: PhaseKind::Mono { theta },
        }
    }

    pub fn osc(mu: f64) -> Self {
        PhaseFunction {
            kind: PhaseKind::Osc { mu },
        }
    }

    /// Coefficient `c` in `φ(R) = cosh R − i c R`.
    fn slope(&self) -> f64 {
        match self.kind {
            PhaseKind::Mono { theta } => theta.sin(),
            PhaseKind::Osc { mu } => mu.cosh(),
        }
    }

    pub fn evaluate(&self, r: Complex64) -> Complex64 {
        r.cosh() - Complex64::i() * r * self.slope()
    }

    pub fn derivative(&self, r: Complex64) -> Complex64 {
        r.sinh() - Complex64::i() * self.slope()
    }

    pub fn evaluate_value(&self, r: ComplexValue) -> Result<ComplexValue> {
        Ok(ComplexValue::from_complex(self.evaluate(r.to_complex64()?)))
    }
}

/// Closed-form saddles for `k` in `range`. The oscillatory phase has two
/// saddles per `k`, returned as `(R_k^-, R_k^+)` pairs in order.
pub fn saddle_points(phase: &PhaseFunction, range: RangeInclusive<i64>) -> Vec<ComplexValue> {
    let mut out = Vec::new();
    for k in range {
        match phase.kind {
            PhaseKind::Mono { theta } => {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                out.push(ComplexValue::new(0.0, sign * theta + k as f64 * PI));
            }
            PhaseKind::Osc { mu } => {
                let im = FRAC_PI_2 + 2.0 * PI * k as f64;
                out.push(ComplexValue::new(-mu, im));
                out.push(ComplexValue::new(mu, im));
            }
        }
    }
    out
}

/// `sinh u − u` without cancellation.
fn sinh_minus_id(u: f64) -> f64 {
    if u.abs() > 0.5 {
        return u.sinh() - u;
    }
    let u2 = u * u;
    let mut term = u * u2 / 6.0;
    let mut sum = term;
    let mut k = 2.0;
    while term.abs() > 1e-18 * sum.abs() {
        term *= u2 / ((2.0 * k) * (2.0 * k + 1.0));
        sum += term;
        k += 1.0;
    }
    sum
}

/// `1 − x` for `x = s·u/sinh u`, `s = sin θ`, given `1 − s` exactly.
fn one_minus_ratio(s: f64, one_minus_s: f64, u: f64) -> f64 {
    if u == 0.0 {
        return one_minus_s;
    }
    one_minus_s + s * sinh_minus_id(u) / u.sinh()
}

/// `arcsin x` from `1 − x`, accurate as `x → 1`.
fn asin_from_complement(one_minus_x: f64) -> f64 {
    if one_minus_x < 0.5 {
        FRAC_PI_2 - 2.0 * (0.5 * one_minus_x).max(0.0).sqrt().asin()
    } else {
        (1.0 - one_minus_x).asin()
    }
}

/// Point `u + i w(u)` of the steepest-descent curve through `iθ`,
/// `sin w = sin θ · u / sinh u`.
pub fn descent_path_mono(theta: f64, u: f64) -> Result<ComplexValue> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return domain(format!("theta {theta} not in (0, π/2)"));
    }
    if !u.is_finite() {
        return domain("path parameter must be finite");
    }
    let s = theta.sin();
    // 1 − sin θ = 2 sin²(π/4 − θ/2)
    let one_minus_s = 2.0 * (0.25 * PI - 0.5 * theta).sin().powi(2);
    let w = if u.abs() > 700.0 {
        0.0
    } else {
        asin_from_complement(one_minus_ratio(s, one_minus_s, u))
    };
    Ok(ComplexValue::new(u, w))
}

/// Branches of the oscillatory steepest-descent contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// From `−∞` through `R_0^-` up to `+i∞`.
    Minus,
    /// From `+i∞` through `R_0^+` down to `+∞`.
    Plus,
}

/// Point on the oscillatory descent branch, parameterized so that `s = 0`
/// is the saddle. On `L+`, `s > 0` is the lower part `u = μ + s` and
/// `s < 0` the upper part with `Im R = π/2 − s`; `L−` is the mirror image
/// `R ↦ −conj(R)` with `s ↦ −s`, so both run with increasing `s`.
pub fn descent_path_osc(mu: f64, branch: Branch, s: f64) -> Result<ComplexValue> {
    if !(mu > 0.0) || !mu.is_finite() {
        return domain(format!("mu {mu} must be positive"));
    }
    if !s.is_finite() {
        return domain("path parameter must be finite");
    }
    let z = match branch {
        Branch::Plus => osc_plus(mu, s),
        Branch::Minus => {
            let p = osc_plus(mu, -s);
            Complex64::new(-p.re, p.im)
        }
    };
    Ok(ComplexValue::from_complex(z))
}

/// `sinh μ − μ cosh μ`, negative for `μ > 0`.
fn chi_unit(mu: f64) -> f64 {
    if mu > 0.5 {
        return mu.sinh() - mu * mu.cosh();
    }
    // −Σ 2k μ^{2k+1}/(2k+1)!
    let m2 = mu * mu;
    let mut pw = mu; // μ^{2k+1}/(2k+1)!
    let mut sum = 0.0;
    let mut k = 1.0;
    loop {
        pw *= m2 / ((2.0 * k) * (2.0 * k + 1.0));
        let term = 2.0 * k * pw;
        sum += term;
        if term <= 1e-18 * sum {
            break;
        }
        k += 1.0;
    }
    -sum
}

fn osc_plus(mu: f64, s: f64) -> Complex64 {
    let (sh, ch) = (mu.sinh(), mu.cosh());
    if s >= 0.0 {
        let u = mu + s;
        if s == 0.0 {
            return Complex64::new(mu, FRAC_PI_2);
        }
        if u > 700.0 {
            return Complex64::new(u, 0.0);
        }
        // 1 − sin w = (sinh(μ+s) − sinh μ − s cosh μ)/sinh u
        let n = if s < 0.5 {
            let mut pw = 1.0;
            let mut sum = 0.0;
            let mut k = 1.0;
            loop {
                pw *= s / k;
                if k >= 2.0 {
                    let term = pw * if k as i64 % 2 == 1 { ch } else { sh };
                    sum += term;
                    if k > 3.0 && term.abs() <= 1e-18 * sum.abs() {
                        break;
                    }
                }
                k += 1.0;
            }
            sum
        } else {
            u.sinh() - sh - s * ch
        };
        let w = asin_from_complement(n / u.sinh());
        return Complex64::new(u, w);
    }
    // upper part: Im φ = c fixes u ∈ [−μ, μ] as the root of
    // F(u) = sinh u sin w − u cosh μ − c, which is decreasing there
    let w = FRAC_PI_2 - s;
    let sw = w.sin();
    let c = chi_unit(mu);
    let f = |u: f64| u.sinh() * sw - u * ch - c;
    let (mut lo, mut hi) = (-mu, mu);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-17 * mu {
            break;
        }
    }
    Complex64::new(0.5 * (lo + hi), w)
}

/// `χ = y (sinh μ − μ cosh μ) = √(t² − y²) − t·arccosh(t/y)`.
pub fn chi_constant(mu: f64, y: f64) -> f64 {
    y * chi_unit(mu)
}

/// `h(x) = Σ_{k≥1} (−1)^{k+1} 2k x^{k−1}/(2k+1)!`; `h(θ̃²) = (sin θ̃ − θ̃ cos θ̃)/θ̃³`.
pub fn cubic_h(x: f64) -> f64 {
    // direct forms away from the origin
    if x > 0.25 {
        let a = x.sqrt();
        return (a.sin() - a * a.cos()) / (a * a * a);
    }
    if x < -0.25 {
        let m = (-x).sqrt();
        return (m * m.cosh() - m.sinh()) / (m * m * m);
    }
    let mut coef: f64 = 1.0 / 6.0; // 1/(2k+1)! at k = 1
    let mut pw = 1.0;
    let mut sum: f64 = 0.0;
    let mut k = 1.0;
    loop {
        let term = 2.0 * k * coef * pw;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        pw *= -x;
        coef /= (2.0 * k + 2.0) * (2.0 * k + 3.0);
        k += 1.0;
    }
    sum
}

/// `ζ(θ) = [3/2 (θ sin θ + cos θ − (π/2) sin θ)]^{2/3} >= 0`.
pub fn cfu_zeta_mono(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= FRAC_PI_2) {
        return domain(format!("theta {theta} not in (0, π/2]"));
    }
    Ok(zeta_from_tilde(theta - FRAC_PI_2))
}

/// `ζ = θ̃² (3h/2)^{2/3}` in terms of `θ̃ = θ − π/2`.
pub(crate) fn zeta_from_tilde(a: f64) -> f64 {
    a * a * (1.5 * cubic_h(a * a)).powf(2.0 / 3.0)
}

/// `ζ(μ) = −[3/2 (μ cosh μ − sinh μ)]^{2/3} <= 0`.
pub fn cfu_zeta_osc(mu: f64) -> Result<f64> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return domain(format!("mu {mu} must be nonnegative"));
    }
    Ok(-mu * mu * (1.5 * cubic_h(-mu * mu)).powf(2.0 / 3.0))
}

/// Which side of coalescence a [`SaddleData`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfuCase {
    Mono,
    Osc,
}

/// Half-widths of the uniform windows around coalescence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformWindow {
    /// Largest `|θ̃|` accepted by the mono uniform expansion.
    pub theta0: f64,
    /// Largest `μ` accepted by the oscillatory uniform expansion.
    pub mu0: f64,
}

impl Default for UniformWindow {
    fn default() -> Self {
        // covers the dispatcher's coalescence band |t/y − 1| <= 0.05
        // (|θ̃| <= 0.318, μ <= 0.316) with room for seam checks
        UniformWindow {
            theta0: 0.5,
            mu0: 0.5,
        }
    }
}

/// Geometry and leading uniform coefficients at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleData {
    pub case: CfuCase,
    /// The two coalescing saddles (`k = 0, 1` mono; `R_0^±` osc).
    pub saddles: Vec<ComplexValue>,
    pub zeta: f64,
    /// `A(θ̃) = −(π/2) cos θ̃`.
    pub a_coeff: f64,
    pub p0: ComplexValue,
    pub q0: ComplexValue,
    /// `(ζ/cos²θ)^{1/4}` or `(ζ/−sinh²μ)^{1/4}`; `2^{−1/6}` at coalescence.
    pub ratio: f64,
    /// Real coefficient of `Ai'`: `−sin(rθ̃) ζ^{−1/2}` (mono) or
    /// `sinh(rμ) |ζ|^{−1/2}` (osc); `r·2^{1/3}` at coalescence.
    pub ai_prime_coeff: f64,
    /// Real coefficient of `Ai`: `cos(rθ̃)` or `cosh(rμ)`.
    pub ai_coeff: f64,
    /// Phase constant `χ / y` (osc only).
    pub chi: Option<f64>,
}

/// `sin(x)/x`.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `sinh(x)/x`.
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

/// CFU data at `θ̃ ∈ [−θ0, 0]` (mono) or `μ ∈ [0, μ0]` (osc). `param` is
/// `θ̃` or `μ` respectively.
pub fn cfu_coefficients(r: f64, param: f64, case: CfuCase) -> Result<SaddleData> {
    cfu_coefficients_in(r, param, case, &UniformWindow::default())
}

pub fn cfu_coefficients_in(
    r: f64,
    param: f64,
    case: CfuCase,
    window: &UniformWindow,
) -> Result<SaddleData> {
    let irpi2 = Complex64::new(0.0, r * FRAC_PI_2).exp();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    match case {
        CfuCase::Mono => {
            let a = param;
            if !(a <= 0.0 && a >= -window.theta0) {
                return Err(Error::Window {
                    param: a,
                    lo: -window.theta0,
                    hi: 0.0,
                });
            }
            let h = cubic_h(a * a);
            let g = (1.5 * h).powf(1.0 / 3.0); // ζ^{1/2} = |θ̃| g
            let zeta = a * a * g * g;
            // (ζ/sin²θ̃)^{1/4} = (|θ̃|/|sin θ̃|)^{1/2} g^{1/2}
            let ratio = (1.0 / sinc(a)).sqrt() * g.sqrt();
            let ai_coeff = (r * a).cos();
            // −sin(rθ̃)/ζ^{1/2} = r sinc(rθ̃)/g  (θ̃ <= 0)
            let ai_prime_coeff = r * sinc(r * a) / g;
            let theta = a + FRAC_PI_2;
            let p0 = ComplexValue::from_complex(Complex64::new(0.0, -inv_sqrt2) * irpi2 * ai_coeff * ratio);
            // q0 = (1/√2) e^{irπ/2} sin(rθ̃) ζ^{−1/2} ratio
            let q0 = ComplexValue::from_complex(irpi2 * (inv_sqrt2 * -ai_prime_coeff * ratio));
            Ok(SaddleData {
                case,
                saddles: vec![
                    ComplexValue::new(0.0, theta),
                    ComplexValue::new(0.0, PI - theta),
                ],
                zeta,
                a_coeff: -FRAC_PI_2 * a.cos(),
                p0,
                q0,
                ratio,
                ai_prime_coeff,
                ai_coeff,
                chi: None,
            })
        }
        CfuCase::Osc => {
            let mu = param;
            if !(mu >= 0.0 && mu <= window.mu0) {
                return Err(Error::Window {
                    param: mu,
                    lo: 0.0,
                    hi: window.mu0,
                });
            }
            let h = cubic_h(-mu * mu);
            let g = (1.5 * h).powf(1.0 / 3.0); // |ζ|^{1/2} = μ g
            let zeta = -mu * mu * g * g;
            let ratio = (1.0 / sinhc(mu)).sqrt() * g.sqrt();
            let ai_coeff = (r * mu).cosh();
            let ai_prime_coeff = r * sinhc(r * mu) / g;
            let p0 = ComplexValue::from_complex(Complex64::new(0.0, -inv_sqrt2) * irpi2 * ai_coeff * ratio);
            // ζ^{−1/2} = −i|ζ|^{−1/2}, sin(rθ̃) = −i sinh(rμ)
            let q0 = ComplexValue::from_complex(irpi2 * (-inv_sqrt2 * ai_prime_coeff * ratio));
            Ok(SaddleData {
                case,
                saddles: vec![
                    ComplexValue::new(-mu, FRAC_PI_2),
                    ComplexValue::new(mu, FRAC_PI_2),
                ],
                zeta,
                a_coeff: -FRAC_PI_2 * mu.cosh(),
                p0,
                q0,
                ratio,
                ai_prime_coeff,
                ai_coeff,
                chi: Some(chi_unit(mu)),
            })
        }
    }
}

impl SaddleData {
    /// `(−φ(R_a), −φ(R_b))` at the two saddles, which the cubic map sends
    /// to `A ∓ (2/3)ζ^{3/2}` (with `ζ^{1/2} = i|ζ|^{1/2}` when `ζ < 0`).
    pub fn cubic_endpoint_values(&self) -> (Complex64, Complex64) {
        let z32 = if self.zeta >= 0.0 {
            Complex64::new(self.zeta.powf(1.5), 0.0)
        } else {
            Complex64::new(0.0, -(-self.zeta).powf(1.5))
        };
        let a = Complex64::new(self.a_coeff, 0.0);
        (a - z32 * (2.0 / 3.0), a + z32 * (2.0 / 3.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn saddle_examples() {
        let s = saddle_points(&PhaseFunction::mono(PI / 6.0), 0..=0);
        assert_eq!(s[0].to_complex64().unwrap(), Complex64::new(0.0, PI / 6.0));
        let s = saddle_points(&PhaseFunction::osc(1.0), 0..=0);
        assert_eq!(s[0].to_complex64().unwrap(), Complex64::new(-1.0, FRAC_PI_2));
        assert_eq!(s[1].to_complex64().unwrap(), Complex64::new(1.0, FRAC_PI_2));
        let s = saddle_points(&PhaseFunction::mono(FRAC_PI_2), 0..=1);
        assert!((s[0].to_complex64().unwrap() - s[1].to_complex64().unwrap()).norm() < 1e-15);
    }

    #[test]
    fn phase_derivative_vanishes_at_saddles() {
        for theta in [0.1, PI / 6.0, 1.2, FRAC_PI_2] {
            let ph = PhaseFunction::mono(theta);
            for s in saddle_points(&ph, -3..=3) {
                let r = s.to_complex64().unwrap();
                assert!(ph.derivative(r).norm() <= 1e-13 * (1.0 + r.norm()), "{theta} {r}");
            }
        }
        for mu in [0.05, 1.0, 3.0] {
            let ph = PhaseFunction::osc(mu);
            for s in saddle_points(&ph, -3..=3) {
                let r = s.to_complex64().unwrap();
                assert!(ph.derivative(r).norm() <= 1e-13 * (1.0 + r.norm()) * mu.cosh());
            }
        }
    }

    #[test]
    fn mono_path_examples() {
        let p = descent_path_mono(PI / 6.0, 0.0).unwrap().to_complex64().unwrap();
        assert!((p - Complex64::new(0.0, PI / 6.0)).norm() < 1e-15);
        let p = descent_path_mono(PI / 6.0, 2.0).unwrap().to_complex64().unwrap();
        let v = 0.5 * 2.0 / 2f64.sinh();
        assert!(close(v, 0.275_73, 1e-5));
        assert!((p.im - v.asin()).abs() < 1e-15);
        assert!(descent_path_mono(FRAC_PI_2, 1.0).is_err());
        assert!(descent_path_mono(0.0, 1.0).is_err());
        for u in [-50.0, -5.0, 5.0, 50.0, 1e6] {
            let w = descent_path_mono(PI / 6.0, u).unwrap().to_complex64().unwrap().im;
            assert!(w.abs() <= FRAC_PI_2 && w < PI / 6.0);
        }
    }

    #[test]
    fn osc_path_examples() {
        let p = descent_path_osc(1.0, Branch::Plus, 0.0).unwrap().to_complex64().unwrap();
        assert!((p - Complex64::new(1.0, FRAC_PI_2)).norm() < 1e-15);
        let p = descent_path_osc(1.0, Branch::Minus, 0.0).unwrap().to_complex64().unwrap();
        assert!((p - Complex64::new(-1.0, FRAC_PI_2)).norm() < 1e-15);
        let p = descent_path_osc(1.0, Branch::Plus, 40.0).unwrap().to_complex64().unwrap();
        assert!(p.im < 1e-15 && p.im >= 0.0);
        assert!(descent_path_osc(0.0, Branch::Plus, 1.0).is_err());
    }

    #[test]
    fn chi_examples() {
        assert!(chi_constant(1e-9, 10.0).abs() < 1e-25);
        let chi = chi_constant(1.0, 10.0);
        assert!(close(chi, -10.0 * (-1f64).exp(), 1e-14));
        assert!(close(chi, -3.678_794_41, 1e-9));
        let t = 10.0 * 1f64.cosh();
        let alt = (t * t - 100.0).sqrt() - t * (t / 10.0).acosh();
        assert!((chi - alt).abs() <= 1e-13 * chi.abs());
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(cfu_zeta_mono(FRAC_PI_2).unwrap(), 0.0);
        let z = cfu_zeta_mono(FRAC_PI_2 - 0.01).unwrap();
        assert!(close(z, 1e-4 / 2f64.powf(2.0 / 3.0), 1e-4));
        let th = PI / 3.0;
        let direct = (1.5 * (th * th.sin() + th.cos() - FRAC_PI_2 * th.sin())).powf(2.0 / 3.0);
        assert!(close(cfu_zeta_mono(th).unwrap(), direct, 1e-14));
        assert_eq!(cfu_zeta_osc(0.0).unwrap(), 0.0);
        let z = cfu_zeta_osc(0.1).unwrap();
        let direct = -(1.5 * (0.1 * 0.1f64.cosh() - 0.1f64.sinh())).powf(2.0 / 3.0);
        assert!((z - direct).abs() < 1e-12 * direct.abs());
        assert!(close(z, -6.30e-3, 1e-3));
        let z = cfu_zeta_osc(1.0).unwrap();
        assert!(close(z, -(1.5 * (-1f64).exp()).powf(2.0 / 3.0), 1e-14));
    }

    #[test]
    fn coefficient_limits() {
        let d = cfu_coefficients(0.0, -0.1, CfuCase::Mono).unwrap();
        assert!(d.q0.is_zero());
        let expect = Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2) * d.ratio;
        assert!((d.p0.to_complex64().unwrap() - expect).norm() < 1e-15);
        let lim = 2f64.powf(-1.0 / 6.0);
        for a in [-1e-2, -1e-4, -1e-6, 0.0] {
            let d = cfu_coefficients(1.0, a, CfuCase::Mono).unwrap();
            assert!((d.ratio - lim).abs() < 1e-3 * a.abs().max(1e-12).sqrt() + 1e-15);
            // ζ/cos²θ directly, where it is not 0/0
            if a != 0.0 {
                let direct = (d.zeta / a.sin().powi(2)).powf(0.25);
                assert!((direct - d.ratio).abs() < 1e-8);
            }
        }
        let d0 = cfu_coefficients(1.0, 0.0, CfuCase::Mono).unwrap();
        assert!((d0.ai_prime_coeff - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
        let o0 = cfu_coefficients(1.0, 0.0, CfuCase::Osc).unwrap();
        assert_eq!(d0.ratio, o0.ratio);
        assert_eq!(d0.ai_prime_coeff, o0.ai_prime_coeff);
        assert!(cfu_coefficients(1.0, 0.1, CfuCase::Mono).is_err());
        assert!(cfu_coefficients(1.0, 0.9, CfuCase::Osc).is_err());
    }

    #[test]
    fn osc_coefficients_match_displayed_terms() {
        // 2πi p0 = π√2 e^{irπ/2} cosh(rμ) ratio; −2πi q0 = iπ√2 e^{irπ/2} sinh(rμ)|ζ|^{−1/2} ratio
        let (r, mu) = (1.0, 0.1);
        let d = cfu_coefficients(r, mu, CfuCase::Osc).unwrap();
        let e = Complex64::new(0.0, r * FRAC_PI_2).exp();
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        let lhs = two_pi_i * d.p0.to_complex64().unwrap();
        let rhs = PI * 2f64.sqrt() * e * (r * mu).cosh() * d.ratio;
        assert!((lhs - rhs).norm() < 1e-14);
        let lhs = -two_pi_i * d.q0.to_complex64().unwrap();
        let rhs = Complex64::new(0.0, PI * 2f64.sqrt()) * e * (r * mu).sinh() / (-d.zeta).sqrt() * d.ratio;
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        let direct_ratio = (d.zeta / -(mu.sinh().powi(2))).powf(0.25);
        assert!((direct_ratio - d.ratio).abs() < 1e-12);
    }

    #[test]
    fn cubic_consistency_at_saddles() {
        for a in [-0.3, -0.1, -0.01] {
            let d = cfu_coefficients(0.5, a, CfuCase::Mono).unwrap();
            let ph = PhaseFunction::mono(a + FRAC_PI_2);
            let (lo, hi) = d.cubic_endpoint_values();
            let f0 = -ph.evaluate(d.saddles[0].to_complex64().unwrap());
            let f1 = -ph.evaluate(d.saddles[1].to_complex64().unwrap());
            assert!((f0 - lo).norm() < 1e-12 && (f1 - hi).norm() < 1e-12, "{a}");
        }
        for mu in [0.3, 0.1, 0.01] {
            let d = cfu_coefficients(0.5, mu, CfuCase::Osc).unwrap();
            let ph = PhaseFunction::osc(mu);
            let (lo, hi) = d.cubic_endpoint_values();
            let fp = -ph.evaluate(d.saddles[1].to_complex64().unwrap());
            let fm = -ph.evaluate(d.saddles[0].to_complex64().unwrap());
            assert!((fp - lo).norm() < 1e-12 && (fm - hi).norm() < 1e-12, "{mu}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn mono_path_has_constant_phase(theta in 0.01f64..1.56, u in -30.0f64..30.0) {
                let r = descent_path_mono(theta, u).unwrap().to_complex64().unwrap();
                let ph = PhaseFunction::mono(theta);
                // Im(−φ) at the saddle iθ is 0
                let im = ph.evaluate(r).im;
                prop_assert!(im.abs() <= 1e-12 * (1.0 + u.abs()) * (1.0 + u.abs().min(700.0).cosh() * 1e-3), "{}", im);
            }

            #[test]
            fn osc_paths_have_constant_phase(mu in 0.02f64..3.0, s in -20.0f64..20.0) {
                let ph = PhaseFunction::osc(mu);
                let c = chi_unit(mu);
                let p = descent_path_osc(mu, Branch::Plus, s).unwrap().to_complex64().unwrap();
                let m = descent_path_osc(mu, Branch::Minus, s).unwrap().to_complex64().unwrap();
                let scale = 1e-12 * (1.0 + p.re.abs().max(m.re.abs()).cosh() + s.abs() * mu.cosh());
                prop_assert!((ph.evaluate(p).im - c).abs() <= scale);
                prop_assert!((ph.evaluate(m).im + c).abs() <= scale);
            }

            #[test]
            fn zeta_signs_and_monotonicity(a in 0.0f64..0.5, b in 0.0f64..0.5) {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let zl = cfu_zeta_osc(lo).unwrap();
                let zh = cfu_zeta_osc(hi).unwrap();
                prop_assert!(zl <= 0.0 && zh <= zl);
                let ml = cfu_zeta_mono(FRAC_PI_2 - lo).unwrap();
                let mh = cfu_zeta_mono(FRAC_PI_2 - hi).unwrap();
                prop_assert!(ml >= 0.0 && mh >= ml);
            }
        }
    }
}
