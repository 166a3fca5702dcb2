//! Tanh-sinh quadrature in arbitrary precision.
//!
//! The integrand receives the abscissa as an offset from the left end of the
//! interval, computed without cancellation, so integrands that are only
//! delicate near `x = 0` (the saddle end of a descent path) can use series
//! expansions there.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct QuadResult {
    pub value: Complex,
}

pub(crate) struct TanhSinh {
    pub prec: u32,
    pub rel_tol: f64,
    /// Converged also once the level change drops below this, whatever the
    /// size of the integral (for panels of an oscillatory sum).
    pub abs_tol: Option<Float>,
    pub min_level: u32,
    pub max_level: u32,
}

impl TanhSinh {
    pub fn new(prec: u32, rel_tol: f64) -> Self {
        TanhSinh {
            prec,
            rel_tol,
            abs_tol: None,
            min_level: 3,
            max_level: 12,
        }
    }

    /// Largest `τ` whose weight still matters at this precision.
    fn tau_max(&self) -> f64 {
        // weight ≈ π cosh τ e^{-π sinh τ}
        let target = (self.prec as f64 + 20.0) * std::f64::consts::LN_2;
        let mut tau: f64 = 1.0;
        while std::f64::consts::PI * tau.sinh() - (std::f64::consts::PI * tau.cosh()).ln() < target {
            tau += 0.05;
        }
        tau
    }

    /// `∫_0^len f(x) dx`; `f` gets the offset `x`.
    pub fn integrate<F>(&self, len: &Float, mut f: F) -> Result<QuadResult>
    where
        F: FnMut(&Float) -> Complex,
    {
        let p = self.prec;
        let half_pi = Float::with_val(p, Constant::Pi) / 2u32;
        let tau_max = self.tau_max();

        // level 0, h = 1
        let mut total = Complex::new(p);
        {
            let half = Float::with_val(p, len / 2u32);
            let w0 = Float::with_val(p, len * &half_pi) / 2u32;
            total += f(&half) * w0;
        }

        let mut node = |tau: f64, acc: &mut Complex| {
            let tau = Float::with_val(p, tau);
            let s = Float::with_val(p, tau.sinh_ref()) * &half_pi;
            let ch_tau = Float::with_val(p, tau.cosh_ref());
            let e2 = Float::with_val(p, -Float::with_val(p, &s * 2u32)).exp();
            // x = len / (1 + e^{-2s}); x' = len·(π/2)cosh τ / (2 cosh² s)
            let x = Float::with_val(p, len / Float::with_val(p, &e2 + 1u32));
            let ch_s = Float::with_val(p, s.cosh_ref());
            let w = Float::with_val(p, len * &half_pi) * ch_tau
                / (Float::with_val(p, ch_s.square_ref()) * 2u32);
            // mirror node at -τ: offset len·e^{-2s}/(1 + e^{-2s}), same weight
            let x_mirror = Float::with_val(p, &x * &e2);
            *acc += f(&x) * &w;
            *acc += f(&x_mirror) * &w;
        };

        let mut j = 1u32;
        while (j as f64) <= tau_max {
            node(j as f64, &mut total);
            j += 1;
        }
        let mut estimate = total.clone();
        let mut level = 0u32;
        loop {
            level += 1;
            let h = 0.5f64.powi(level as i32);
            let mut j = 1u64;
            while (j as f64) * h <= tau_max {
                node(j as f64 * h, &mut total);
                j += 2;
            }
            let next = Complex::with_val(p, &total * h);
            let diff = Float::with_val(p, Complex::with_val(p, &next - &estimate).abs_ref());
            let mag = Float::with_val(p, next.abs_ref());
            let rel_change = if mag.is_zero() {
                if diff.is_zero() { 0.0 } else { f64::INFINITY }
            } else {
                Float::with_val(p, &diff / &mag).to_f64()
            };
            estimate = next;
            let abs_ok = self.abs_tol.as_ref().is_some_and(|a| diff <= *a);
            if level >= self.min_level && (rel_change <= self.rel_tol || abs_ok) {
                return Ok(QuadResult { value: estimate });
            }
            if level >= self.max_level {
                return Err(Error::Accuracy {
                    achieved: rel_change,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential() {
        let q = TanhSinh::new(200, 1e-40);
        let len = Float::with_val(200, 2);
        let r = q
            .integrate(&len, |x| Complex::with_val(200, (x * x, Float::with_val(200, x.exp_ref()))))
            .unwrap();
        let exact_re = Float::with_val(200, 8) / 3u32;
        let exact_im = Float::with_val(200, Float::with_val(200, 2).exp() - 1u32);
        assert!(Float::with_val(200, r.value.real() - &exact_re).abs() < 1e-45);
        assert!(Float::with_val(200, r.value.imag() - &exact_im).abs() < 1e-45);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let q = TanhSinh::new(200, 1e-30);
        let len = Float::with_val(200, 1);
        let r = q
            .integrate(&len, |x| Complex::with_val(200, Float::with_val(200, x.recip_sqrt_ref())))
            .unwrap();
        assert!(Float::with_val(200, r.value.real() - 2u32).abs() < 1e-30);
    }

    #[test]
    fn reports_non_convergence() {
        let mut q = TanhSinh::new(128, 1e-30);
        q.max_level = 3;
        let len = Float::with_val(128, 200);
        let r = q.integrate(&len, |x| Complex::with_val(128, Float::with_val(128, x * 10u32).sin()));
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }
}
