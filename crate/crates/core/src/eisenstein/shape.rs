//! Empirical shape of the Eisenstein bounds.
//!
//! The bounds involve a spectral majorant `ω(t) >= 1` that cannot be
//! evaluated; [`ShapeOptions::omega`] takes a surrogate (default `1`).
//! Ratios are reported, never asserted, except through the constant
//! [`COEFFICIENT_SHAPE_CONSTANT`].

use std::f64::consts::PI;

use super::{
    coefficient_with, s_parts, truncation_length, xi_two_s, EisensteinOptions, FourierData,
};
use crate::error::{domain, Result};
use crate::types::ComplexValue;

/// Upper bound for [`coefficient_shape_ratio`] over
/// `r ∈ [0.6, 1.5]`, `|t| ∈ [30, 120]`, `N ∈ [10, 1000]`: twice the
/// largest value seen there (7.8, at `r = 0.6`, `t = 30`, `N = 1000`).
pub const COEFFICIENT_SHAPE_CONSTANT: f64 = 16.0;

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `ln Σ_{1<=|n|<=N} |c_n|²`.
pub fn ln_coefficient_sum_squares(s: ComplexValue, n_max: usize) -> Result<f64> {
    if n_max == 0 {
        return domain("N must be at least 1");
    }
    let sc = s_parts(s)?;
    let xi = xi_two_s(sc)?;
    let mut acc = f64::NEG_INFINITY;
    for n in 1..=n_max {
        let c = coefficient_with(n as i64, sc, &xi);
        acc = log_sum_exp(acc, 2.0 * c.ln_abs());
    }
    Ok(acc + 2f64.ln())
}

/// `ln[e^{|t|π}(N + |t|)(|t| + N/|t|)^{2r−1}]`, the bound with `ω` dropped.
pub fn ln_coefficient_bound(r: f64, t: f64, n_max: usize) -> f64 {
    let (ta, n) = (t.abs(), n_max as f64);
    ta * PI + (n + ta).ln() + (2.0 * r - 1.0) * (ta + n / ta).ln()
}

/// `Σ|c_n|²` divided by [`ln_coefficient_bound`].
pub fn coefficient_shape_ratio(r: f64, t: f64, n_max: usize) -> Result<f64> {
    let ln = ln_coefficient_sum_squares(ComplexValue::new(r, t), n_max)?;
    Ok((ln - ln_coefficient_bound(r, t, n_max)).exp())
}

/// Which case of the Eisenstein bound a point falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeCase {
    /// `r = 1/2`, `0 < y < 1`
    HalfSmallY,
    /// `1/2 < r <= 1`, `0 < y < 1`
    MidSmallY,
    /// `1 < r <= 3/2`, `0 < y < 1`
    HighSmallY,
    /// `r = 1/2`, `1 <= y <= |t|/2`
    HalfMidY,
    MidMidY,
    HighMidY,
    /// `r = 1/2`, `y > |t|/2`
    HalfLargeY,
    /// `r > 1/2`, `y > |t|/2`
    AboveHalfLargeY,
}

impl ShapeCase {
    pub fn classify(r: f64, t: f64, y: f64) -> ShapeCase {
        let half = (r - 0.5).abs() < 1e-12;
        let ta = t.abs();
        if y < 1.0 {
            if half {
                ShapeCase::HalfSmallY
            } else if r <= 1.0 {
                ShapeCase::MidSmallY
            } else {
                ShapeCase::HighSmallY
            }
        } else if y <= ta / 2.0 {
            if half {
                ShapeCase::HalfMidY
            } else if r <= 1.0 {
                ShapeCase::MidMidY
            } else {
                ShapeCase::HighMidY
            }
        } else if half {
            ShapeCase::HalfLargeY
        } else {
            ShapeCase::AboveHalfLargeY
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ShapeCase::HalfSmallY => "r=1/2,y<1",
            ShapeCase::MidSmallY => "1/2<r<=1,y<1",
            ShapeCase::HighSmallY => "1<r<=3/2,y<1",
            ShapeCase::HalfMidY => "r=1/2,1<=y<=|t|/2",
            ShapeCase::MidMidY => "1/2<r<=1,1<=y<=|t|/2",
            ShapeCase::HighMidY => "1<r<=3/2,1<=y<=|t|/2",
            ShapeCase::HalfLargeY => "r=1/2,y>|t|/2",
            ShapeCase::AboveHalfLargeY => "r>1/2,y>|t|/2",
        }
    }

    /// `ln` of the non-constant part of the bound, and of the alternative
    /// large-`y` form where there is one.
    pub fn ln_bound(&self, r: f64, t: f64, y: f64, omega: f64, eps: f64) -> (f64, Option<f64>) {
        let ta = t.abs();
        let ls = |a: f64, b: f64| log_sum_exp(a, b);
        let ln_w = 0.5 * omega.ln();
        let q = (ta / y).ln();
        let decay = ta * PI / 2.0 - 2.0 * PI * y;
        match self {
            ShapeCase::HalfSmallY => ((-0.5 - eps) * y.ln() + ln_w + (1.0 + eps) * ta.ln(), None),
            ShapeCase::MidSmallY => ((1.0 - r) * y.ln() + ls((r + 0.5) * q, q + ln_w), None),
            ShapeCase::HighSmallY => (ls((2.0 * r - 0.5) * q, r * q + ln_w), None),
            ShapeCase::HalfMidY => ((1.0 + eps) * ta.ln() + ln_w, None),
            ShapeCase::MidMidY => (ls((r + 0.5) * ta.ln(), ta.ln() + ln_w), None),
            ShapeCase::HighMidY => (ls((2.0 * r - 0.5) * ta.ln(), r * ta.ln() + ln_w), None),
            ShapeCase::HalfLargeY => (
                decay + (-0.5 + eps) * ta.ln() + ln_w,
                Some(decay - y.ln() + (0.5 + eps) * ta.ln() + ln_w),
            ),
            ShapeCase::AboveHalfLargeY => (
                decay + ls(0.5 * ta.ln(), ln_w - 0.5 * ta.ln()),
                Some(decay - y.ln() + ls(1.5 * ta.ln(), 0.5 * (ta.ln() + omega.ln()))),
            ),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ShapeOptions {
    /// Surrogate for the spectral majorant `ω(t)`.
    pub omega: fn(f64) -> f64,
    pub epsilon: f64,
    /// Real part of `z` at which `E` is evaluated.
    pub x: f64,
    pub eval: EisensteinOptions,
}

fn unit_omega(_: f64) -> f64 {
    1.0
}

impl Default for ShapeOptions {
    fn default() -> Self {
        ShapeOptions {
            omega: unit_omega,
            epsilon: 0.0,
            x: 0.0,
            eval: EisensteinOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeRow {
    pub r: f64,
    pub t: f64,
    pub y: f64,
    pub case: ShapeCase,
    pub n_terms: usize,
    /// `E − y^s − φ(s) y^{1−s}`.
    pub residual: ComplexValue,
    pub ratio: f64,
    pub alt_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeReport {
    pub rows: Vec<ShapeRow>,
    /// Largest ratio per case, in case order.
    pub max_ratio: Vec<(ShapeCase, f64)>,
}

/// Residual of the Fourier expansion over a grid, divided by the
/// `ω`-surrogate form of the matching bound.
pub fn bound_shape_check(r: f64, t_grid: &[f64], y_grid: &[f64]) -> Result<ShapeReport> {
    bound_shape_check_with(r, t_grid, y_grid, &ShapeOptions::default())
}

pub fn bound_shape_check_with(
    r: f64,
    t_grid: &[f64],
    y_grid: &[f64],
    opts: &ShapeOptions,
) -> Result<ShapeReport> {
    let mut rows = Vec::with_capacity(t_grid.len() * y_grid.len());
    for &t in t_grid {
        for &y in y_grid {
            let s = ComplexValue::new(r, t);
            let data = FourierData::new(y, s, &opts.eval)?;
            let residual = data.fourier_part(opts.x);
            let case = ShapeCase::classify(r, t, y);
            let (lb, alt) = case.ln_bound(r, t, y, (opts.omega)(t), opts.epsilon);
            let lr = residual.ln_abs();
            rows.push(ShapeRow {
                r,
                t,
                y,
                case,
                n_terms: truncation_length(t, y),
                residual,
                ratio: (lr - lb).exp(),
                alt_ratio: alt.map(|a| (lr - a).exp()),
            });
        }
    }
    let mut max_ratio: Vec<(ShapeCase, f64)> = Vec::new();
    for row in &rows {
        match max_ratio.iter_mut().find(|(c, _)| *c == row.case) {
            Some(entry) => entry.1 = entry.1.max(row.ratio),
            None => max_ratio.push((row.case, row.ratio)),
        }
    }
    max_ratio.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(ShapeReport { rows, max_ratio })
}
