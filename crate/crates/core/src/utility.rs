//! Normalized application utilities.
//!
//! Two families are supported: a sigmoid for inelastic (real-time) traffic and
//! a normalized logarithm for elastic (delay-tolerant) traffic. Both satisfy
//! `U(0) = 0`, are strictly increasing, and have a strictly concave logarithm,
//! which is what makes the sum-of-log-utilities allocation problem convex.
//!
//! The sigmoid is stored together with its derived normalizer `c` and offset
//! `d`. They are always computed from `(a, b)` and cannot be set directly.

use crate::error::{Error, Result};

/// Sigmoid constants `(c, d)` for steepness `a` and inflection rate `b`.
///
/// `c = (1 + e^(ab)) / e^(ab)` and `d = 1 / (1 + e^(ab))`, evaluated through
/// `e^(-ab)` so that large `a·b` never overflows.
pub fn derive_constants(a: f64, b: f64) -> Result<(f64, f64)> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    let t = (-a * b).exp();
    Ok((1.0 + t, t / (1.0 + t)))
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        });
    }
    if value <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be > 0",
        });
    }
    Ok(())
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `ln(1 - e^(-x))` for `x > 0`.
fn ln_one_minus_exp_neg(x: f64) -> f64 {
    if x > std::f64::consts::LN_2 {
        (-(-x).exp()).ln_1p()
    } else {
        (-(-x).exp_m1()).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sigmoid {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Sigmoid {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let (c, d) = derive_constants(a, b)?;
        Ok(Self { a, b, c, d })
    }

    /// Steepness.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Inflection rate.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    // c·(S − d) rewritten as (1 − e^(−ar)) / (1 + e^(−a(r−b))).
    fn value(&self, r: f64) -> f64 {
        -(-self.a * r).exp_m1() / (1.0 + (self.a * (self.b - r)).exp())
    }

    fn log_value(&self, r: f64) -> f64 {
        ln_one_minus_exp_neg(self.a * r) - softplus(self.a * (self.b - r))
    }

    // a·S(1 − S)/(S − d) rewritten as a·c·(1 − S)/(1 − e^(−ar)).
    fn slope(&self, r: f64) -> f64 {
        let one_minus_s = 1.0 / (1.0 + (self.a * (r - self.b)).exp());
        self.a * self.c * one_minus_s / -(-self.a * r).exp_m1()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Logarithmic {
    k: f64,
    r_max: f64,
    norm: f64,
}

impl Logarithmic {
    pub fn new(k: f64, r_max: f64) -> Result<Self> {
        check_positive("k", k)?;
        check_positive("r_max", r_max)?;
        Ok(Self {
            k,
            r_max,
            norm: (k * r_max).ln_1p(),
        })
    }

    /// Rate of increase.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Rate at which the utility reaches 1.
    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    fn value(&self, r: f64) -> f64 {
        (self.k * r).ln_1p() / self.norm
    }

    fn log_value(&self, r: f64) -> f64 {
        (self.k * r).ln_1p().ln() - self.norm.ln()
    }

    fn slope(&self, r: f64) -> f64 {
        let kr = self.k * r;
        self.k / ((1.0 + kr) * kr.ln_1p())
    }
}

/// A user's application model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilitySpec {
    Sigmoid(Sigmoid),
    Logarithmic(Logarithmic),
}

impl UtilitySpec {
    pub fn sigmoid(a: f64, b: f64) -> Result<Self> {
        Sigmoid::new(a, b).map(Self::Sigmoid)
    }

    pub fn logarithmic(k: f64, r_max: f64) -> Result<Self> {
        Logarithmic::new(k, r_max).map(Self::Logarithmic)
    }

    /// Short family name used in scenario files and result tables.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Sigmoid(_) => "sigmoid",
            Self::Logarithmic(_) => "log",
        }
    }

    /// The rate scale of the curve: `b` for a sigmoid, `r_max` for a logarithm.
    pub fn scale(&self) -> f64 {
        match self {
            Self::Sigmoid(s) => s.b,
            Self::Logarithmic(l) => l.r_max,
        }
    }

    /// `U(r)` for `r >= 0`.
    ///
    /// The logarithmic family is evaluated as written above `r_max`, so values
    /// greater than 1 are possible there.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::Domain {
                rate: r,
                reason: "utility is defined for finite r >= 0",
            });
        }
        Ok(match self {
            Self::Sigmoid(s) => s.value(r),
            Self::Logarithmic(l) => l.value(r),
        })
    }

    /// `ln U(r)` for `r > 0`. Callers treat `r = 0` as `-inf` themselves.
    pub fn log_utility(&self, r: f64) -> Result<f64> {
        check_open_domain(r)?;
        Ok(match self {
            Self::Sigmoid(s) => s.log_value(r),
            Self::Logarithmic(l) => l.log_value(r),
        })
    }

    /// `d/dr ln U(r)`; strictly positive and strictly decreasing in `r`.
    pub fn log_utility_slope(&self, r: f64) -> Result<f64> {
        check_open_domain(r)?;
        Ok(self.slope_unchecked(r))
    }

    pub(crate) fn slope_unchecked(&self, r: f64) -> f64 {
        match self {
            Self::Sigmoid(s) => s.slope(r),
            Self::Logarithmic(l) => l.slope(r),
        }
    }
}

fn check_open_domain(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain {
            rate: r,
            reason: "log utility is defined for finite r > 0",
        });
    }
    Ok(())
}
