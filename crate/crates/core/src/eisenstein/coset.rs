//! `E(z, s) = Σ y^s/|cz + d|^{2s}` over coprime `(c, d)` modulo `±1`.
//!
//! Rows `c <= bound` are summed completely: `|d| <= D_c` directly, the rest
//! by Möbius inversion over `k | c`, a binomial expansion of
//! `((km ± cx)² + c²y²)^{−s}` in `c²y²/(km ± cx)²`, and Hurwitz zeta
//! functions. Rows `c > bound` contribute their `d`-average
//! `φ(c) c^{−2s} y^{1−s} √π Γ(s−1/2)/Γ(s)`, with Euler's `φ(c)` sieved out to
//! a large cutoff and replaced by its mean density beyond it. What is left
//! out is the oscillating part of the rows `c > bound`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle::{even_bernoulli_f64, gamma_complex};
use crate::types::ComplexValue;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosetOptions {
    /// Rows `c > sieve_limit` use the mean density `6/π²` of `φ(c)/c`.
    pub sieve_limit: u64,
}

impl Default for CosetOptions {
    fn default() -> Self {
        CosetOptions { sieve_limit: 1 << 22 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosetSum {
    pub value: ComplexValue,
    /// Size of the oscillating part of the last octave of rows,
    /// `|Σ_{bound/2 < c <= bound} (row_c − mean_c)|`; the neglected rows
    /// beyond `bound` are of the same order or smaller.
    pub tail_estimate: f64,
    pub bound: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// `(k, μ(k))` for the squarefree divisors `k` of `c`.
fn mobius_divisors(c: u64) -> Vec<(u64, i32)> {
    let mut primes = Vec::new();
    let mut m = c;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    let mut out = vec![(1u64, 1i32)];
    for p in primes {
        let n = out.len();
        for i in 0..n {
            let (k, mu) = out[i];
            out.push((k * p, -mu));
        }
    }
    out
}

/// Hurwitz `ζ(w, q) = Σ_{m>=0} (m + q)^{−w}`, `Re w > 1`, `q > 0`.
fn hurwitz(w: Complex64, q: f64, bern: &[f64]) -> Complex64 {
    // shift until the Euler–Maclaurin corrections decay quickly
    let target = w.norm() / PI + 12.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut a = q;
    while a < target {
        sum += (-w * a.ln()).exp();
        a += 1.0;
    }
    let a_pow = (-w * a.ln()).exp(); // a^{−w}
    sum += a_pow * a / (w - 1.0) + 0.5 * a_pow;
    let mut poch = w * a_pow / a; // (w)_1 a^{−w−1}
    let mut fact = 2.0;
    for (j, b) in bern.iter().enumerate() {
        let k = (j + 1) as f64;
        let term = poch * (*b / fact);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        poch *= (w + (2.0 * k - 1.0)) * (w + 2.0 * k) / (a * a);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    sum
}

struct Row<'a> {
    s: Complex64,
    ln_y: f64,
    x: f64,
    y: f64,
    bern: &'a [f64],
}

impl Row<'_> {
    /// `y^s ((cx + d)² + c²y²)^{−s}`
    fn term(&self, c: f64, d: f64) -> Complex64 {
        let u = c * self.x + d;
        let a = u * u + c * c * self.y * self.y;
        (self.s * (self.ln_y - a.ln())).exp()
    }

    /// `Σ_{gcd(c,d)=1} y^s/|cz + d|^{2s}` for `c >= 1`.
    fn sum(&self, c: u64) -> Complex64 {
        let cf = c as f64;
        let b = cf * self.y;
        // beyond D the expansion parameter |s| c²y²/u² is at most 1/4
        let k_fac = 2.0 * self.s.norm().sqrt().max(1.0);
        let dmax = (cf * self.x.abs() + k_fac * b).ceil() as i64 + 1;
        let mut direct = Complex64::new(0.0, 0.0);
        for d in -dmax..=dmax {
            if gcd(c, d.unsigned_abs()) == 1 {
                direct += self.term(cf, d as f64);
            }
        }
        // coprime |d| > D: Σ_{k|c} μ(k) Σ_{m >= m0} [F(km + cx) + F(km − cx)]
        let mut tail = Complex64::new(0.0, 0.0);
        let ys = (self.s * self.ln_y).exp();
        for (k, mu) in mobius_divisors(c) {
            let kf = k as f64;
            let m0 = (dmax as u64 / k + 1) as f64;
            let mut part = Complex64::new(0.0, 0.0);
            // binom(−s, j) b^{2j}, accumulated
            let mut coef = Complex64::new(1.0, 0.0);
            for j in 0..200 {
                let w = 2.0 * self.s + 2.0 * j as f64;
                let kw = (-w * kf.ln()).exp();
                let h = hurwitz(w, m0 + cf * self.x / kf, self.bern)
                    + hurwitz(w, m0 - cf * self.x / kf, self.bern);
                let term = coef * kw * h;
                part += term;
                if term.norm() < 1e-18 * part.norm() {
                    break;
                }
                coef *= -(self.s + j as f64) / (j as f64 + 1.0) * b * b;
            }
            tail += part * mu as f64;
        }
        direct + ys * tail
    }
}

fn totients(n: usize) -> Vec<u32> {
    let mut phi: Vec<u32> = (0..=n as u32).collect();
    for p in 2..=n {
        if phi[p] == p as u32 {
            let mut m = p;
            while m <= n {
                phi[m] -= phi[m] / p as u32;
                m += p;
            }
        }
    }
    phi
}

/// `Σ_{c > bound} φ(c) c^{−2s}`.
fn totient_tail(s: Complex64, bound: u64, limit: u64) -> Complex64 {
    let limit = limit.max(bound);
    let phi = totients(limit as usize);
    let mut sum = Complex64::new(0.0, 0.0);
    for c in (bound + 1)..=limit {
        sum += phi[c as usize] as f64 * (-2.0 * s * (c as f64).ln()).exp();
    }
    // (6/π²) ∫_{L+1/2}^∞ c^{1−2s} dc
    let l = limit as f64 + 0.5;
    sum + 6.0 / (PI * PI) * ((2.0 - 2.0 * s) * l.ln()).exp() / (2.0 * s - 2.0)
}

/// The defining lattice sum for `Re s > 1`, complete in `d` for each
/// `c <= bound` and averaged over `d` beyond.
pub fn direct_coset_sum(x: f64, y: f64, s: ComplexValue, bound: u64) -> Result<CosetSum> {
    direct_coset_sum_with(x, y, s, bound, &CosetOptions::default())
}

pub fn direct_coset_sum_with(
    x: f64,
    y: f64,
    s: ComplexValue,
    bound: u64,
    opts: &CosetOptions,
) -> Result<CosetSum> {
    let r = s.re();
    if !(r > 1.0) {
        return Err(Error::Divergence(r));
    }
    if !(y > 0.0 && y.is_finite() && x.is_finite()) {
        return crate::error::domain("coset sum needs finite x and y > 0");
    }
    if bound == 0 {
        return crate::error::domain("bound must be positive");
    }
    let sc = s.to_complex64()?;
    let x = x - x.floor();
    let bern = even_bernoulli_f64(30);
    let row = Row {
        s: sc,
        ln_y: y.ln(),
        x,
        y,
        bern: &bern,
    };
    // d-average of a row, without the φ(c) c^{−2s} factor
    let g = gamma_complex(ComplexValue::from_complex(sc - 0.5))? / gamma_complex(s)?;
    let mean = ComplexValue::from_complex(((1.0 - sc) * y.ln()).exp() * PI.sqrt()) * g;
    let mean = mean.to_complex64()?;
    let phi = totients(bound as usize);

    let mut total = (sc * y.ln()).exp();
    let mut osc_last_octave = Complex64::new(0.0, 0.0);
    for c in 1..=bound {
        let v = row.sum(c);
        total += v;
        if 2 * c > bound {
            let avg = mean * phi[c as usize] as f64 * (-2.0 * sc * (c as f64).ln()).exp();
            osc_last_octave += v - avg;
        }
    }
    total += mean * totient_tail(sc, bound, opts.sieve_limit);
    Ok(CosetSum {
        value: ComplexValue::from_complex(total),
        tail_estimate: osc_last_octave.norm(),
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_and_totients() {
        let mut d = mobius_divisors(12);
        d.sort();
        assert_eq!(d, vec![(1, 1), (2, -1), (3, -1), (6, 1)]);
        let phi = totients(12);
        assert_eq!(&phi[1..], &[1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn hurwitz_matches_direct_sum() {
        let bern = even_bernoulli_f64(30);
        let w = Complex64::new(2.4, 80.0);
        let q = 3.7;
        let direct: Complex64 = (0..2_000_000).map(|m| (-w * (m as f64 + q).ln()).exp()).sum();
        // remaining tail ≈ ∫ from 2e6
        let tail = ((1.0 - w) * (2e6 + q).ln()).exp() / (w - 1.0);
        let h = hurwitz(w, q, &bern);
        assert!((h - direct - tail).norm() < 1e-11);
        // ζ(2, 1) = π²/6
        let z2 = hurwitz(Complex64::new(2.0, 0.0), 1.0, &bern);
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn row_sum_matches_brute_force() {
        let bern = even_bernoulli_f64(30);
        let s = Complex64::new(1.4, 3.0);
        let row = Row {
            s,
            ln_y: 0.9f64.ln(),
            x: 0.3,
            y: 0.9,
            bern: &bern,
        };
        for c in [1u64, 6, 7] {
            let fast = row.sum(c);
            let mut brute = Complex64::new(0.0, 0.0);
            let big = 2_000_000i64;
            for d in -big..=big {
                if gcd(c, d.unsigned_abs()) == 1 {
                    brute += row.term(c as f64, d as f64);
                }
            }
            // the brute-force tail beyond |d| = big is ~ big^{1−2r}
            assert!((fast - brute).norm() < 1e-9 * fast.norm(), "c={c}");
        }
    }

    #[test]
    fn bound_one_enumerates_first_row() {
        // with bound = 1 the pairs are (0,1) and (1,d) for all d
        let s = ComplexValue::new(1.5, 0.0);
        let (x, y) = (0.2, 1.1);
        let sum = direct_coset_sum_with(x, y, s, 1, &CosetOptions { sieve_limit: 1 }).unwrap();
        let bern = even_bernoulli_f64(30);
        let row = Row {
            s: Complex64::new(1.5, 0.0),
            ln_y: y.ln(),
            x,
            y,
            bern: &bern,
        };
        let mean = PI.sqrt() * y.powf(-0.5) / 0.886_226_925_452_758; // √π Γ(1)/Γ(3/2)
        let tail = mean * totient_tail(Complex64::new(1.5, 0.0), 1, 1);
        let expect = y.powf(1.5) + row.sum(1).re + tail.re;
        assert!((sum.value.re() - expect).abs() < 1e-12 * expect);
        let direct: f64 = (-10_000..=10_000)
            .map(|d: i32| y.powf(1.5) / ((x + d as f64).powi(2) + y * y).powf(1.5))
            .sum();
        assert!((row.sum(1).re - direct).abs() < 1e-7);
    }

    #[test]
    fn divergent_for_small_real_part() {
        assert_eq!(
            direct_coset_sum(0.0, 1.0, ComplexValue::new(0.9, 40.0), 10).unwrap_err(),
            Error::Divergence(0.9)
        );
    }
}
