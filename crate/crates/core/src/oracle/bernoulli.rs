//! Even-index Bernoulli numbers as exact rationals.
//!
//! Computed from tangent numbers with integer arithmetic only
//! (`B_{2k} = (-1)^{k-1} 2k T_k / (2^{2k}(2^{2k} - 1))`), cached process-wide.

use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

fn tangent_numbers(n: usize) -> Vec<Integer> {
    let mut t = vec![Integer::new(); n + 1];
    if n == 0 {
        return t;
    }
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u32 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&t[j - 1] * (j - k) as u32);
            let b = Integer::from(&t[j] * (j - k + 2) as u32);
            t[j] = a + b;
        }
    }
    t
}

/// `B_{2k}` for `k = 1..=count`, as a slice starting at `B_2`.
pub fn even_bernoulli(count: usize) -> Vec<Rational> {
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().expect("bernoulli cache poisoned");
    if guard.len() < count {
        // recompute from scratch; the tangent recurrence is not incremental
        let n = count.max(2 * guard.len()).max(16);
        let t = tangent_numbers(n);
        let mut out = Vec::with_capacity(n);
        for (k, tk) in t.iter().enumerate().skip(1) {
            let pow = Integer::from(1) << (2 * k as u32);
            let den = Integer::from(&pow * (Integer::from(&pow - 1u32)));
            let mut num = Integer::from(tk * (2 * k as u32));
            if k % 2 == 0 {
                num = -num;
            }
            out.push(Rational::from((num, den)));
        }
        *guard = out;
    }
    guard[..count].to_vec()
}

/// `B_{2k}` as `f64` for `k = 1..=count`.
pub fn even_bernoulli_f64(count: usize) -> Vec<f64> {
    even_bernoulli(count).iter().map(|b| b.to_f64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let b = even_bernoulli(6);
        let expect = [(1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730)];
        for (got, (n, d)) in b.iter().zip(expect) {
            assert_eq!(*got, Rational::from((n, d)));
        }
    }

    #[test]
    fn growth_matches_zeta_formula() {
        // |B_{2k}| = 2 (2k)! zeta(2k) / (2π)^{2k}, and zeta(2k) -> 1
        let b = even_bernoulli(40);
        let k = 40u32;
        let mut fact = 1f64.ln();
        for i in 1..=2 * k {
            fact += (i as f64).ln();
        }
        let ln_expected = 2f64.ln() + fact - 2.0 * k as f64 * (2.0 * std::f64::consts::PI).ln();
        let got = b[39].to_f64().abs().ln();
        assert!((got - ln_expected).abs() < 1e-12);
    }
}
