//! `K_ν(y) = ½ ∫ e^{-y cosh R + νR} dR` along steepest-descent contours.
//!
//! With `ν = r + it`, `t >= 0`:
//!
//! * `t <= y`: one path `R = u + i w(u)` through the saddle `iθ`,
//!   `sin w = sin θ · u / sinh u`, folded onto `u >= 0`.
//! * `t > y`: the two lower descent branches through `±μ + iπ/2`
//!   (`sin w = (u cosh μ + c)/sinh u`, `c = sinh μ − μ cosh μ`) joined by the
//!   horizontal segment `Im R = π/2`. The segment replaces the two branches
//!   that run off to `+i∞` (they cancel up there); its integrand is smooth,
//!   with stationary phase exactly at the end points.
//!
//! Every quantity that cancels near a saddle (`1 - sin w`, `dw/du`) is
//! evaluated from series in the offset `δ` from the saddle.

use rug::float::Constant;
use rug::{Complex, Float};

use super::quad::TanhSinh;
use super::BigComplex;
use crate::error::{Error, Result};
use crate::types::{ComplexValue, PrecisionPolicy};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions {
    /// Target relative accuracy in decimal digits.
    pub digits: u32,
    /// Truncate the infinite branches once the integrand falls below
    /// `e^{-margin}` times its saddle value.
    pub margin: f64,
    pub max_level: u32,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions {
            digits: 20,
            margin: 80.0,
            max_level: 12,
        }
    }
}

/// Geometry shared by both cases: the curve `sin w = s·(sinh μ + δ cosh μ)/sinh(μ+δ)`.
/// The mono case is `μ = 0`, `s = sin θ`; the osc case has `s = 1`.
struct Path {
    prec: u32,
    s: Float,
    one_minus_s: Float,
    mu: Float,
    sinh_mu: Float,
    cosh_mu: Float,
    half_pi: Float,
}

impl Path {
    /// `(N, N')` with `N(δ) = sinh(μ+δ) − sinh μ − δ cosh μ`.
    fn remainders(&self, d: &Float) -> (Float, Float) {
        let p = self.prec;
        if *d >= 1 {
            let u = Float::with_val(p, &self.mu + d);
            let (sh, ch) = u.sinh_cosh(Float::new(p));
            let n = sh - &self.sinh_mu - Float::with_val(p, d * &self.cosh_mu);
            let np = ch - &self.cosh_mu;
            return (n, np);
        }
        let eps = Float::with_val(p, Float::i_exp(1, -(p as i32) - 4));
        let big = Float::with_val(p, self.cosh_mu.max_ref(&self.sinh_mu));
        let mut n = Float::new(p);
        let mut np = Float::new(p);
        let mut pw = Float::with_val(p, 1u32);
        let mut k = 1u32;
        loop {
            pw *= d;
            pw /= k;
            // k-th derivative of sinh at μ: cosh for odd k, sinh for even
            let odd = k % 2 == 1;
            if k >= 2 {
                n += Float::with_val(p, &pw * if odd { &self.cosh_mu } else { &self.sinh_mu });
            }
            np += Float::with_val(p, &pw * if odd { &self.sinh_mu } else { &self.cosh_mu });
            if k >= 4 {
                let tail = Float::with_val(p, &pw * &big);
                let scale = Float::with_val(p, n.abs_ref());
                if tail < Float::with_val(p, scale * &eps) {
                    break;
                }
            }
            k += 1;
        }
        (n, np)
    }

    /// `(R, dR/dδ)` on the right lower branch at offset `δ > 0`.
    fn point(&self, d: &Float) -> (Complex, Complex) {
        let p = self.prec;
        let u = Float::with_val(p, &self.mu + d);
        let (sh, ch) = u.clone().sinh_cosh(Float::new(p));
        let (n, np) = self.remainders(d);
        // 1 − v = (1 − s) + s N / sinh u
        let one_minus_v = Float::with_val(p, &self.s * &n) / &sh + &self.one_minus_s;
        let w = if one_minus_v <= 0.5 {
            let a = Float::with_val(p, &one_minus_v / 2u32).sqrt().asin();
            Float::with_val(p, &self.half_pi - a * 2u32)
        } else {
            Float::with_val(p, 1u32 - &one_minus_v).asin()
        };
        // v' = s (N cosh u − N' sinh u) / sinh² u
        let num = Float::with_val(p, &n * &ch) - Float::with_val(p, &np * &sh);
        let vp = Float::with_val(p, &self.s * num) / Float::with_val(p, sh.square_ref());
        let one_plus_v = Float::with_val(p, 2u32 - &one_minus_v);
        let root = Float::with_val(p, one_minus_v * one_plus_v).sqrt();
        let wp = vp / root;
        (
            Complex::with_val(p, (u, w)),
            Complex::with_val(p, (Float::with_val(p, 1u32), wp)),
        )
    }

    /// `sin w` in `f64`, for locating truncation points.
    fn w_f64(&self, d: f64) -> f64 {
        let mu = self.mu.to_f64();
        let u = mu + d;
        let v = self.s.to_f64() * (self.sinh_mu.to_f64() + d * self.cosh_mu.to_f64()) / u.sinh();
        v.clamp(-1.0, 1.0).asin()
    }
}

struct Integrand {
    prec: u32,
    nu: Complex,
    y: Float,
}

impl Integrand {
    fn eval(&self, r: &Complex) -> Complex {
        let p = self.prec;
        let mut e = Complex::with_val(p, r.cosh_ref()) * &self.y;
        e = Complex::with_val(p, &self.nu * r) - e;
        e.exp()
    }

    fn ln_abs(&self, r: &Complex) -> f64 {
        Float::with_val(64, self.eval(r).abs_ref()).ln().to_f64()
    }
}

/// `K_ν(y)` for `y > 0` by contour quadrature. Negative `Im ν` is handled by
/// conjugation.
pub fn k_contour(nu: ComplexValue, y: f64) -> Result<BigComplex> {
    k_contour_with(nu, y, &ContourOptions::default()).map(|c| c.value)
}

/// Diagnostics from a contour evaluation.
#[derive(Debug, Clone)]
pub struct ContourReport {
    pub value: BigComplex,
    /// Length of each truncated infinite branch, in the path parameter.
    pub truncation: f64,
    /// `ln(|integrand at truncation| / |integrand at saddle|)`, worst branch.
    pub ln_endpoint_ratio: f64,
}

pub fn k_contour_with(nu: ComplexValue, y: f64, opts: &ContourOptions) -> Result<ContourReport> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::Domain(format!("contour oracle needs y > 0, got {y}")));
    }
    let nu = nu.to_complex64()?;
    if nu.im < 0.0 {
        let mut rep = k_contour_with(ComplexValue::from_complex(nu.conj()), y, opts)?;
        rep.value = rep.value.conj();
        return Ok(rep);
    }
    let (r, t) = (nu.re, nu.im);
    // exponents reach y cosh U; keep the requested digits on top of that
    let guard = (y.max(t).max(1.0)).log2().ceil() as u32 + 64;
    let prec = PrecisionPolicy::digits_to_bits(opts.digits) + guard;
    let prec = prec.max(192);

    let yf = Float::with_val(prec, y);
    let tf = Float::with_val(prec, t);
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let integrand = Integrand {
        prec,
        nu: Complex::with_val(prec, (r, t)),
        y: yf.clone(),
    };
    let rel_tol = 10f64.powi(-(opts.digits as i32) - 2);

    if t <= y {
        let diff = Float::with_val(prec, &yf - &tf);
        let s = Float::with_val(prec, &tf / &yf);
        let one_minus_s = Float::with_val(prec, &diff / &yf);
        let path = Path {
            prec,
            s,
            one_minus_s,
            mu: Float::new(prec),
            sinh_mu: Float::new(prec),
            cosh_mu: Float::with_val(prec, 1u32),
            half_pi: half_pi.clone(),
        };
        let theta = (t / y).asin();
        let saddle_ln = -y * theta.cos() - t * theta;
        let len = truncation(&path, y, t, r, saddle_ln, opts.margin);
        let lenf = Float::with_val(prec, len);
        let mut q = TanhSinh::new(prec, rel_tol);
        q.max_level = opts.max_level;
        let res = q.integrate(&lenf, |d| {
            let (rr, dr) = path.point(d);
            let left = Complex::with_val(prec, (-Float::with_val(prec, rr.real()), rr.imag()));
            let dl = Complex::with_val(prec, (Float::with_val(prec, 1u32), -Float::with_val(prec, dr.imag())));
            integrand.eval(&rr) * dr + integrand.eval(&left) * dl
        })?;
        let end = path.point(&lenf).0;
        let end_left = Complex::with_val(prec, (-Float::with_val(prec, end.real()), end.imag()));
        let ln_end = integrand.ln_abs(&end).max(integrand.ln_abs(&end_left));
        let value = res.value / 2u32;
        return Ok(ContourReport {
            value: BigComplex::new(value, opts.digits),
            truncation: len,
            ln_endpoint_ratio: ln_end - saddle_ln,
        });
    }

    // oscillatory case
    let sinh_mu = Float::with_val(
        prec,
        Float::with_val(prec, &tf - &yf) * Float::with_val(prec, &tf + &yf),
    )
    .sqrt()
        / &yf;
    let cosh_mu = Float::with_val(prec, &tf / &yf);
    let mu = Float::with_val(prec, &sinh_mu + &cosh_mu).ln();
    let muf = mu.to_f64();
    let path = Path {
        prec,
        s: Float::with_val(prec, 1u32),
        one_minus_s: Float::new(prec),
        mu: mu.clone(),
        sinh_mu,
        cosh_mu,
        half_pi: half_pi.clone(),
    };
    let saddle_ln = -t * std::f64::consts::FRAC_PI_2 + r.abs() * muf;
    let len = truncation(&path, y, t, r, saddle_ln, opts.margin);
    let lenf = Float::with_val(prec, len);
    let mut q = TanhSinh::new(prec, rel_tol);
    q.max_level = opts.max_level;
    let branches = q.integrate(&lenf, |d| {
        let (rr, dr) = path.point(d);
        let left = Complex::with_val(prec, (-Float::with_val(prec, rr.real()), rr.imag()));
        let dl = Complex::with_val(prec, (Float::with_val(prec, 1u32), -Float::with_val(prec, dr.imag())));
        integrand.eval(&rr) * dr + integrand.eval(&left) * dl
    })?;

    // segment from −μ + iπ/2 to μ + iπ/2; total phase change is 2|χ|
    let chi = y * (muf.sinh() - muf * muf.cosh());
    let panels = ((2.0 * chi.abs() / std::f64::consts::PI).ceil() as u32).max(1);
    let width = Float::with_val(prec, &mu * 2u32) / panels;
    let scale = Float::with_val(prec, saddle_ln).exp();
    let mut seg_q = TanhSinh::new(prec, rel_tol);
    seg_q.max_level = opts.max_level;
    seg_q.abs_tol = Some(Float::with_val(prec, &scale * rel_tol) * 1e-3);
    let mut segment = Complex::new(prec);
    for k in 0..panels {
        let start = Float::with_val(prec, &width * k) - &mu;
        let res = seg_q.integrate(&width, |d| {
            let u = Float::with_val(prec, &start + d);
            integrand.eval(&Complex::with_val(prec, (u, &half_pi)))
        })?;
        segment += res.value;
    }
    let end = path.point(&lenf).0;
    let end_left = Complex::with_val(prec, (-Float::with_val(prec, end.real()), end.imag()));
    let ln_end = integrand.ln_abs(&end).max(integrand.ln_abs(&end_left));
    let value = (branches.value + segment) / 2u32;
    Ok(ContourReport {
        value: BigComplex::new(value, opts.digits),
        truncation: len,
        ln_endpoint_ratio: ln_end - saddle_ln,
    })
}

/// Offset `δ` along a lower branch past which the integrand is below
/// `e^{-margin}` of its saddle value on both branches.
fn truncation(path: &Path, y: f64, t: f64, r: f64, saddle_ln: f64, margin: f64) -> f64 {
    let mu = path.mu.to_f64();
    let drop = |d: f64| {
        let u = mu + d;
        let w = path.w_f64(d);
        // ln|F| = −y cosh u cos w − t w + r(±u)
        let ln_f = -y * u.cosh() * w.cos() - t * w + r.abs() * u;
        saddle_ln - ln_f
    };
    let mut hi = 0.05;
    while drop(hi) < margin {
        hi *= 1.25;
        if hi > 1e3 {
            break;
        }
    }
    let mut lo = hi / 1.25;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if drop(mid) < margin {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::k_series;

    #[test]
    fn k0_at_ten() {
        let k = k_contour(ComplexValue::new(0.0, 0.0), 10.0).unwrap().to_value();
        assert!((k.re() - 1.778_006_231_616_765e-5).abs() < 1e-19, "{k:?}");
    }

    #[test]
    fn half_integer_closed_form() {
        for y in [1.0, 5.0, 40.0] {
            let k = k_contour(ComplexValue::new(0.5, 0.0), y).unwrap().to_value();
            let expect = (std::f64::consts::PI / (2.0 * y)).sqrt() * (-y).exp();
            assert!((k.re() / expect - 1.0).abs() < 1e-15, "y={y}");
        }
    }

    #[test]
    fn agrees_with_series_in_both_cases() {
        for (r, t, y) in [(0.5, 1.2, 1.5), (1.0, 30.0, 1.5), (1.5, 1.0, 1.9), (0.5, 1.9, 1.9)] {
            let nu = ComplexValue::new(r, t);
            let a = k_contour(nu, y).unwrap();
            let b = k_series(nu, y).unwrap();
            let dev = a.rel_deviation(&b);
            assert!(dev < 1e-15, "({r},{t},{y}): {dev}");
        }
    }

    #[test]
    fn conjugation_for_negative_t() {
        let a = k_contour(ComplexValue::new(0.7, 12.0), 3.0).unwrap();
        let b = k_contour(ComplexValue::new(0.7, -12.0), 3.0).unwrap();
        assert!(a.rel_deviation(&b.conj()) < 1e-30);
    }

    #[test]
    fn truncation_keeps_endpoint_negligible() {
        for (r, t, y) in [(1.5, 30.0, 60.0), (0.0, 100.0, 100.0), (1.0, 80.0, 40.0)] {
            let rep = k_contour_with(ComplexValue::new(r, t), y, &ContourOptions::default()).unwrap();
            assert!(rep.ln_endpoint_ratio < (1e-30f64).ln(), "{rep:?}");
        }
    }
}
