//! Shared value types, regime classification and precision policy.
//!
//! K-Bessel values of large imaginary order span hundreds of decades
//! (`K_{800i}(800)` is of size `e^{-400π}`), so [`ComplexValue`] carries a
//! natural-log scale next to an `f64` mantissa. Arithmetic never overflows
//! or underflows; only [`ComplexValue::to_complex64`] can.

use std::f64::consts::{FRAC_PI_2, LN_10, LN_2, PI};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// A complex number `mantissa · 2^{exp2}`; the larger mantissa component
/// lies in `[0.5, 1)`. Rescaling by powers of two is exact, so precision
/// does not degrade with the size of the exponent.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexValue {
    mantissa: Complex64,
    exp2: i64,
}

/// `x · 2^e` without intermediate overflow.
fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl ComplexValue {
    pub const ZERO: ComplexValue = ComplexValue {
        mantissa: Complex64::new(0.0, 0.0),
        exp2: 0,
    };

    pub fn new(re: f64, im: f64) -> Self {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::normalized(z, 0)
    }

    /// `z · 2^exp2`, exactly.
    pub fn from_parts2(z: Complex64, exp2: i64) -> Self {
        Self::normalized(z, exp2)
    }

    fn normalized(z: Complex64, exp2: i64) -> Self {
        assert!(
            z.re.is_finite() && z.im.is_finite(),
            "non-finite ComplexValue component"
        );
        let m = z.re.abs().max(z.im.abs());
        if m == 0.0 {
            return Self::ZERO;
        }
        let mut e = m.log2().floor() as i64 + 1;
        // log2 can be off by one near powers of two
        let scaled = ldexp(m, -e);
        if scaled >= 1.0 {
            e += 1;
        } else if scaled < 0.5 {
            e -= 1;
        }
        ComplexValue {
            mantissa: Complex64::new(ldexp(z.re, -e), ldexp(z.im, -e)),
            exp2: exp2 + e,
        }
    }

    /// `z · e^{ln_scale}`.
    pub fn scaled(z: Complex64, ln_scale: f64) -> Self {
        assert!(ln_scale.is_finite(), "non-finite ComplexValue scale");
        let k = (ln_scale / LN_2).floor();
        let rem = ln_scale - k * LN_2;
        Self::normalized(z * rem.exp(), k as i64)
    }

    /// `e^{ln_abs + i arg}`.
    pub fn from_polar_ln(ln_abs: f64, arg: f64) -> Self {
        assert!(ln_abs.is_finite() && arg.is_finite());
        Self::scaled(Complex64::from_polar(1.0, arg), ln_abs)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    /// Natural log of the modulus; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.exp2 as f64 * LN_2 + self.mantissa.norm().ln()
        }
    }

    pub fn abs(&self) -> f64 {
        ldexp(self.mantissa.norm(), self.exp2)
    }

    pub fn arg(&self) -> f64 {
        self.mantissa.arg()
    }

    /// Mantissa and natural-log scale: `self = mantissa · e^{scale}`.
    pub fn parts(&self) -> (Complex64, f64) {
        (self.mantissa, self.exp2 as f64 * LN_2)
    }

    /// Real and imaginary parts in decimal scientific notation with
    /// `digits` significant digits; valid far outside the `f64` range.
    pub fn to_sci(&self, digits: usize) -> (String, String) {
        let fmt = |m: f64| {
            if m == 0.0 {
                return format!("{:.*e}", digits.saturating_sub(1), 0.0);
            }
            let mut f = rug::Float::with_val(64, m);
            f <<= self.exp2 as i32;
            // value = 0.d₁d₂… × 10^exp
            let (neg, ds, exp) = f.to_sign_string_exp(10, Some(digits.max(1)));
            let e = exp.unwrap_or(0) as i64 - 1;
            let sign = if neg { "-" } else { "" };
            if ds.len() > 1 {
                format!("{sign}{}.{}e{e}", &ds[..1], &ds[1..])
            } else {
                format!("{sign}{ds}e{e}")
            }
        };
        (fmt(self.mantissa.re), fmt(self.mantissa.im))
    }

    /// Mantissa and binary exponent: `self = mantissa · 2^{exp2}`, exactly.
    pub fn parts2(&self) -> (Complex64, i64) {
        (self.mantissa, self.exp2)
    }

    pub fn conj(&self) -> Self {
        ComplexValue {
            mantissa: self.mantissa.conj(),
            exp2: self.exp2,
        }
    }

    /// `self · e^{ln_factor}`.
    pub fn scale_ln(&self, ln_factor: f64) -> Self {
        if self.is_zero() {
            return *self;
        }
        *self * Self::from_polar_ln(ln_factor, 0.0)
    }

    pub fn mul_real(&self, k: f64) -> Self {
        Self::normalized(self.mantissa * k, self.exp2)
    }

    pub fn mul_complex(&self, k: Complex64) -> Self {
        Self::normalized(self.mantissa * k, self.exp2)
    }

    /// `None` if the value is outside the `f64` range.
    pub fn try_to_complex64(&self) -> Option<Complex64> {
        let z = Complex64::new(ldexp(self.mantissa.re, self.exp2), ldexp(self.mantissa.im, self.exp2));
        if z.re.is_finite() && z.im.is_finite() {
            Some(z)
        } else {
            None
        }
    }

    /// Plain `Complex64`. Values below the `f64` range flush to zero.
    pub fn to_complex64(&self) -> Result<Complex64> {
        self.try_to_complex64().ok_or_else(|| {
            Error::Domain(format!("value 2^{} overflows f64", self.exp2))
        })
    }

    pub fn re(&self) -> f64 {
        ldexp(self.mantissa.re, self.exp2)
    }

    pub fn im(&self) -> f64 {
        ldexp(self.mantissa.im, self.exp2)
    }

    /// `|self - reference| / |reference|`, computed without leaving the
    /// scaled representation.
    pub fn rel_deviation(&self, reference: &ComplexValue) -> f64 {
        if reference.is_zero() {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        let diff = *self - *reference;
        if diff.is_zero() {
            return 0.0;
        }
        ldexp(diff.mantissa.norm() / reference.mantissa.norm(), diff.exp2 - reference.exp2)
    }
}

impl Default for ComplexValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Debug for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:+.16e}{:+.16e}i)·2^{}",
            self.mantissa.re, self.mantissa.im, self.exp2
        )
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // decimal exponent so that tiny values print in the usual way
        if self.is_zero() {
            return write!(f, "0+0i");
        }
        let log10 = self.exp2 as f64 * std::f64::consts::LOG10_2;
        let e10 = log10.floor();
        let m = self.mantissa * 10f64.powf(log10 - e10);
        write!(f, "({:+.15}{:+.15}i)e{}", m.re, m.im, e10 as i64)
    }
}

impl Neg for ComplexValue {
    type Output = ComplexValue;
    fn neg(self) -> ComplexValue {
        ComplexValue {
            mantissa: -self.mantissa,
            exp2: self.exp2,
        }
    }
}

impl Mul for ComplexValue {
    type Output = ComplexValue;
    fn mul(self, rhs: ComplexValue) -> ComplexValue {
        if self.is_zero() || rhs.is_zero() {
            return ComplexValue::ZERO;
        }
        ComplexValue::normalized(self.mantissa * rhs.mantissa, self.exp2 + rhs.exp2)
    }
}

impl Div for ComplexValue {
    type Output = ComplexValue;
    fn div(self, rhs: ComplexValue) -> ComplexValue {
        assert!(!rhs.is_zero(), "division by zero ComplexValue");
        if self.is_zero() {
            return ComplexValue::ZERO;
        }
        ComplexValue::normalized(self.mantissa / rhs.mantissa, self.exp2 - rhs.exp2)
    }
}

impl Add for ComplexValue {
    type Output = ComplexValue;
    fn add(self, rhs: ComplexValue) -> ComplexValue {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exp2 >= rhs.exp2 {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shift = small.exp2 - big.exp2;
        let z = big.mantissa
            + Complex64::new(ldexp(small.mantissa.re, shift), ldexp(small.mantissa.im, shift));
        if z.re == 0.0 && z.im == 0.0 {
            return ComplexValue::ZERO;
        }
        ComplexValue::normalized(z, big.exp2)
    }
}

impl Sub for ComplexValue {
    type Output = ComplexValue;
    fn sub(self, rhs: ComplexValue) -> ComplexValue {
        self + (-rhs)
    }
}

impl std::iter::Sum for ComplexValue {
    fn sum<I: Iterator<Item = ComplexValue>>(iter: I) -> ComplexValue {
        iter.fold(ComplexValue::ZERO, |a, b| a + b)
    }
}

/// Which asymptotic description applies at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// `t = y sin θ`, saddles well separated.
    MonoNonuniform { theta: f64 },
    /// `t = y cosh μ`, saddles well separated.
    OscNonuniform { mu: f64 },
    /// `|t/y - 1|` inside the coalescence width.
    UniformNearCoalescence,
    /// `0 < y < 1`.
    SmallArgument,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::MonoNonuniform { .. } => "MonoNonuniform",
            Regime::OscNonuniform { .. } => "OscNonuniform",
            Regime::UniformNearCoalescence => "UniformNearCoalescence",
            Regime::SmallArgument => "SmallArgument",
        }
    }
}

/// Routing thresholds for the dispatcher.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeThresholds {
    /// Route to the uniform expansions when `|t/y - 1| <= coalescence_width`.
    pub coalescence_width: f64,
    pub small_y_cut: f64,
    pub coarse_cut_ratio: f64,
    /// Bound `M` on `|r|`.
    pub max_abs_r: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds {
            coalescence_width: 0.05,
            small_y_cut: 1.0,
            coarse_cut_ratio: FRAC_PI_2,
            max_abs_r: 1.5,
        }
    }
}

impl RegimeThresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.coalescence_width > 0.0 && self.coalescence_width <= 0.2) {
            return domain(format!(
                "coalescence_width {} not in (0, 0.2]",
                self.coalescence_width
            ));
        }
        if !(self.max_abs_r >= 0.0) {
            return domain("max_abs_r must be nonnegative");
        }
        Ok(())
    }
}

/// The order `ν = r + it`, the argument `y`, and the regime they fall in.
///
/// `t` is stored as `|t|`; `conjugate` records whether the caller asked for
/// negative `t`, in which case `K_{r-it}(y) = conj K_{r+it}(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderSpec {
    pub r: f64,
    pub t: f64,
    pub y: f64,
    pub regime: Regime,
    pub theta: Option<f64>,
    pub mu: Option<f64>,
    pub conjugate: bool,
}

/// Assigns `(r, t, y)` to a regime.
pub fn classify_regime(r: f64, t: f64, y: f64, thresholds: &RegimeThresholds) -> Result<OrderSpec> {
    if !(y > 0.0) || !y.is_finite() {
        return domain(format!("argument y = {y} must be positive and finite"));
    }
    if !t.is_finite() || !r.is_finite() {
        return domain("order must be finite");
    }
    if r.abs() > thresholds.max_abs_r {
        return Err(Error::OrderOutOfRange {
            r,
            max: thresholds.max_abs_r,
        });
    }
    let conjugate = t < 0.0;
    let t = t.abs();
    let ratio = t / y;
    let (regime, theta, mu) = if y < thresholds.small_y_cut {
        (Regime::SmallArgument, None, None)
    } else if (ratio - 1.0).abs() <= thresholds.coalescence_width {
        let (theta, mu) = if ratio <= 1.0 {
            (Some(ratio.asin()), None)
        } else {
            (None, Some(ratio.acosh()))
        };
        (Regime::UniformNearCoalescence, theta, mu)
    } else if ratio <= 1.0 {
        let theta = ratio.asin();
        (Regime::MonoNonuniform { theta }, Some(theta), None)
    } else {
        let mu = ratio.acosh();
        (Regime::OscNonuniform { mu }, None, Some(mu))
    };
    Ok(OrderSpec {
        r,
        t,
        y,
        regime,
        theta,
        mu,
        conjugate,
    })
}

/// Exponent of `y` in a displayed O-term, e.g. `-3/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorOrder {
    pub num: i32,
    pub den: i32,
}

impl ErrorOrder {
    pub const fn new(num: i32, den: i32) -> Self {
        ErrorOrder { num, den }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for ErrorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Which formula produced an [`EvalResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Laplace dominant term, `0 <= θ < π/2`.
    MonoLaplace,
    /// Dominant term at `θ = π/2`.
    MonoCoalescence,
    OscLaplace,
    UniformMono,
    UniformOsc,
    /// Extended-precision series through `I_{±ν}`.
    Series,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: ComplexValue,
    /// Individual displayed terms; `value` is their sum.
    pub terms: Vec<ComplexValue>,
    pub regime: Regime,
    pub method: Method,
    /// O-term exponents relative to `y`, one per error channel. Empty when
    /// the value comes from an oracle.
    pub error_order: Vec<ErrorOrder>,
    /// Natural log of an a priori magnitude bound, when one is known.
    pub ln_envelope: Option<f64>,
    /// Set when the dominant term sits close to a zero of its oscillation.
    pub near_zero: bool,
    pub oracle: Option<ComplexValue>,
}

impl EvalResult {
    pub fn envelope(&self) -> Option<f64> {
        self.ln_envelope.map(f64::exp)
    }

    pub fn conj(mut self) -> Self {
        self.value = self.value.conj();
        for term in &mut self.terms {
            *term = term.conj();
        }
        self.oracle = self.oracle.map(|o| o.conj());
        self
    }

    pub fn with_oracle(mut self, oracle: ComplexValue) -> Self {
        self.oracle = Some(oracle);
        self
    }

    pub fn rel_deviation(&self) -> Option<f64> {
        self.oracle.map(|o| self.value.rel_deviation(&o))
    }
}

/// Decimal working precision for extended-precision evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub base_digits: u32,
    pub cancellation_guard_digits: u32,
    /// Fixed override; when set it replaces the computed digit count.
    pub working_digits: Option<u32>,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            base_digits: 30,
            cancellation_guard_digits: 15,
            working_digits: None,
        }
    }
}

impl PrecisionPolicy {
    /// Digits for the series at imaginary order `t`: the difference
    /// `I_{-ν} - I_ν` cancels about `π|t|/ln 10` digits.
    pub fn series_digits(&self, t: f64) -> u32 {
        let needed = self.base_digits
            + (PI * t.abs() / LN_10).ceil() as u32
            + self.cancellation_guard_digits;
        match self.working_digits {
            Some(d) => d.max(needed),
            None => needed,
        }
    }

    pub fn digits_to_bits(digits: u32) -> u32 {
        (digits as f64 * LN_10 / std::f64::consts::LN_2).ceil() as u32 + 8
    }
}
