//! Sine and cosine integrals and their four-term signed combinations.
//!
//! `si`/`ci` follow the usual two-branch scheme: a Maclaurin series below
//! [`SERIES_BREAKPOINT`], and the continued fraction for the exponential
//! integral E₁(ix) above it (`Ci(x) = -Re E₁(ix)`, `Si(x) = π/2 + Im E₁(ix)`).
//! The continued fraction keeps the absolute error at the few-ulp level all
//! the way to x = 1e6, which a truncated asymptotic series cannot do.
//!
//! The combination functions evaluate the four terms at
//! `(ω_L∓Ω)t, (ω_U∓Ω)t` exactly; the short-time polynomial/log expansions
//! and long-time trigonometric asymptotes are provided as separate guarded
//! operations for the two sign patterns they are tabulated for.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Series/continued-fraction crossover for `si`/`ci`. At the breakpoint the
/// series peak term is ~1, so no accuracy cliff on either side; the value is
/// pinned by the branch-boundary tests.
pub const SERIES_BREAKPOINT: f64 = 4.0;

/// Validity guard for the short-time expansions: `t * omega_u <= 0.1`.
pub const SHORT_TIME_MAX_PRODUCT: f64 = 0.1;

/// Validity guard for the long-time asymptotes: `t * (omega_l - Omega) >= 10`.
pub const LONG_TIME_MIN_PRODUCT: f64 = 10.0;

#[derive(Debug, Error, PartialEq)]
pub enum SpecialError {
    #[error("si is undefined for NaN input")]
    NanInput,
    #[error("ci requires a strictly positive argument, got {0}")]
    NonPositiveArgument(f64),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("expansion is tabulated only for patterns (+,-,+,-) and (+,-,-,+), got {0}")]
    UnsupportedPattern(SignPattern),
    #[error("t={t} outside the short-time guard t*omega_u <= {max}")]
    OutsideShortTimeGuard { t: f64, max: f64 },
    #[error("t={t} outside the long-time guard t*(omega_l - Omega) >= {min}")]
    OutsideLongTimeGuard { t: f64, min: f64 },
    #[error("pattern {0} has a divergent log as t -> 0; no finite limit")]
    DivergentLimit(SignPattern),
    #[error("sign pattern entries must be +1 or -1")]
    BadSign,
    #[error("frequency window requires 0 < Omega < omega_l < omega_u, got Omega={omega_sys}, [{omega_l}, {omega_u}]")]
    BadWindow {
        omega_l: f64,
        omega_u: f64,
        omega_sys: f64,
    },
}

/// Four signs applied to the terms at arguments
/// `(ω_L-Ω)t, (ω_U-Ω)t, (ω_L+Ω)t, (ω_U+Ω)t`, in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPattern {
    signs: [i8; 4],
}

impl SignPattern {
    /// Pattern (+,-,+,-).
    pub const PMPM: SignPattern = SignPattern {
        signs: [1, -1, 1, -1],
    };
    /// Pattern (+,-,-,+).
    pub const PMMP: SignPattern = SignPattern {
        signs: [1, -1, -1, 1],
    };

    pub fn new(signs: [i8; 4]) -> Result<Self, SpecialError> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(SpecialError::BadSign);
        }
        Ok(Self { signs })
    }

    pub fn signs(&self) -> [i8; 4] {
        self.signs
    }

    pub fn negated(&self) -> Self {
        Self {
            signs: self.signs.map(|s| -s),
        }
    }

    /// True when the signs sum to zero, so the `ln t` parts of the four Ci
    /// terms cancel and the t -> 0 limit is finite.
    pub fn is_cancelling(&self) -> bool {
        self.signs.iter().map(|s| *s as i32).sum::<i32>() == 0
    }
}

impl std::fmt::Display for SignPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = |s: i8| if s > 0 { '+' } else { '-' };
        write!(
            f,
            "({},{},{},{})",
            c(self.signs[0]),
            c(self.signs[1]),
            c(self.signs[2]),
            c(self.signs[3])
        )
    }
}

/// The three frequencies entering every combination: the window bounds and
/// the central frequency. `omega_l > omega_sys` keeps all Ci arguments
/// positive for t > 0 (off-resonant window); `delta` is stored once so that
/// prefactors never recompute it from rounded inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyWindow {
    omega_l: f64,
    omega_u: f64,
    omega_sys: f64,
    delta: f64,
}

impl FrequencyWindow {
    pub fn new(omega_l: f64, omega_u: f64, omega_sys: f64) -> Result<Self, SpecialError> {
        if !(omega_sys > 0.0 && omega_l > omega_sys && omega_u > omega_l && omega_u.is_finite()) {
            return Err(SpecialError::BadWindow {
                omega_l,
                omega_u,
                omega_sys,
            });
        }
        Ok(Self {
            omega_l,
            omega_u,
            omega_sys,
            delta: omega_u - omega_l,
        })
    }

    pub fn omega_l(&self) -> f64 {
        self.omega_l
    }

    pub fn omega_u(&self) -> f64 {
        self.omega_u
    }

    /// Central (system) frequency Ω.
    pub fn omega_sys(&self) -> f64 {
        self.omega_sys
    }

    /// Window width Δω = ω_U - ω_L.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The four combination arguments at time `t`:
    /// `[(ω_L-Ω)t, (ω_U-Ω)t, (ω_L+Ω)t, (ω_U+Ω)t]`.
    pub fn arguments(&self, t: f64) -> [f64; 4] {
        [
            (self.omega_l - self.omega_sys) * t,
            (self.omega_u - self.omega_sys) * t,
            (self.omega_l + self.omega_sys) * t,
            (self.omega_u + self.omega_sys) * t,
        ]
    }

    fn frequencies(&self) -> [f64; 4] {
        [
            self.omega_l - self.omega_sys,
            self.omega_u - self.omega_sys,
            self.omega_l + self.omega_sys,
            self.omega_u + self.omega_sys,
        ]
    }

    pub fn short_time_ok(&self, t: f64) -> bool {
        t >= 0.0 && t * self.omega_u <= SHORT_TIME_MAX_PRODUCT
    }

    pub fn long_time_ok(&self, t: f64) -> bool {
        t * (self.omega_l - self.omega_sys) >= LONG_TIME_MIN_PRODUCT
    }
}

/// Si(x) = ∫₀ˣ sin(u)/u du. Odd in x; absolute error a few ulps of π/2 for
/// |x| <= 1e6.
pub fn si(x: f64) -> Result<f64, SpecialError> {
    if x.is_nan() {
        return Err(SpecialError::NanInput);
    }
    if x < 0.0 {
        return Ok(-si_positive(-x));
    }
    Ok(si_positive(x))
}

fn si_positive(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x <= SERIES_BREAKPOINT {
        si_series(x)
    } else {
        std::f64::consts::FRAC_PI_2 + e1_of_ix(x).im
    }
}

/// Ci(x) = γ + ln x + ∫₀ˣ (cos(u) - 1)/u du for x > 0.
pub fn ci(x: f64) -> Result<f64, SpecialError> {
    if x.is_nan() || x <= 0.0 {
        return Err(SpecialError::NonPositiveArgument(x));
    }
    if x <= SERIES_BREAKPOINT {
        Ok(ci_series(x))
    } else {
        Ok(-e1_of_ix(x).re)
    }
}

fn si_series(x: f64) -> f64 {
    // sum over n of (-1)^n x^(2n+1) / ((2n+1) (2n+1)!)
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 1u32;
    loop {
        let k = 2 * n; // term index bookkeeping: multiply by -x^2/((k)(k+1))
        term *= -x2 / ((k as f64) * (k as f64 + 1.0));
        let contrib = term / (k as f64 + 1.0);
        sum += contrib;
        if contrib.abs() < f64::EPSILON * sum.abs() * 0.25 || n > 60 {
            break;
        }
        n += 1;
    }
    sum
}

fn ci_series(x: f64) -> f64 {
    // gamma + ln x + sum over n>=1 of (-1)^n x^(2n) / ((2n) (2n)!)
    let x2 = x * x;
    let mut fact_term = 1.0; // x^(2n)/(2n)!
    let mut sum = 0.0;
    let mut n = 1u32;
    loop {
        let k = 2 * n;
        fact_term *= x2 / ((k as f64 - 1.0) * k as f64);
        let contrib = if n.is_multiple_of(2) {
            fact_term / k as f64
        } else {
            -fact_term / k as f64
        };
        sum += contrib;
        if fact_term / (k as f64) < f64::EPSILON * 0.25 || n > 60 {
            break;
        }
        n += 1;
    }
    EULER_GAMMA + x.ln() + sum
}

/// E₁(ix) by the modified Lentz continued fraction
/// E₁(z) = e^{-z} / (z + 1 - 1²/(z + 3 - 2²/(z + 5 - ...))).
fn e1_of_ix(x: f64) -> Complex64 {
    let z = Complex64::new(0.0, x);
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = z + 1.0;
    if f.norm_sqr() == 0.0 {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..400u32 {
        let a = -((n as f64) * (n as f64));
        let b = z + (2 * n + 1) as f64;
        d = b + a * d;
        if d.norm_sqr() == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c.norm_sqr() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    // e^{-ix} / f
    Complex64::new(x.cos(), -x.sin()) / f
}

fn check_pattern_tabulated(pattern: SignPattern) -> Result<(), SpecialError> {
    if pattern == SignPattern::PMPM || pattern == SignPattern::PMMP {
        Ok(())
    } else {
        Err(SpecialError::UnsupportedPattern(pattern))
    }
}

/// Signed four-term combination of Si at the window arguments.
pub fn f_si(pattern: SignPattern, t: f64, w: &FrequencyWindow) -> Result<f64, SpecialError> {
    if t.is_nan() || t < 0.0 {
        return Err(SpecialError::NegativeTime(t));
    }
    let args = w.arguments(t);
    let mut sum = 0.0;
    for (s, a) in pattern.signs.iter().zip(args) {
        sum += *s as f64 * si(a)?;
    }
    Ok(sum)
}

/// Signed four-term combination of Ci at the window arguments; requires
/// t > 0 since Ci diverges at 0. For cancelling patterns near t = 0 use
/// [`f_ci_limit`] instead of subtracting large logarithms.
pub fn f_ci(pattern: SignPattern, t: f64, w: &FrequencyWindow) -> Result<f64, SpecialError> {
    if t.is_nan() || t <= 0.0 {
        return Err(SpecialError::NonPositiveArgument(t));
    }
    let args = w.arguments(t);
    let mut sum = 0.0;
    for (s, a) in pattern.signs.iter().zip(args) {
        sum += *s as f64 * ci(a)?;
    }
    Ok(sum)
}

/// The finite t -> 0 limit of [`f_ci`] for patterns whose signs sum to zero:
/// the γ and ln t parts cancel, leaving the signed sum of the frequency
/// logarithms.
pub fn f_ci_limit(pattern: SignPattern, w: &FrequencyWindow) -> Result<f64, SpecialError> {
    if !pattern.is_cancelling() {
        return Err(SpecialError::DivergentLimit(pattern));
    }
    let freqs = w.frequencies();
    let mut sum = 0.0;
    for (s, a) in pattern.signs.iter().zip(freqs) {
        sum += *s as f64 * a.ln();
    }
    Ok(sum)
}

/// Short-time expansion of [`f_si`], tabulated for (+,-,+,-) and (+,-,-,+);
/// error O(t⁵).
pub fn f_si_short(pattern: SignPattern, t: f64, w: &FrequencyWindow) -> Result<f64, SpecialError> {
    check_pattern_tabulated(pattern)?;
    if !w.short_time_ok(t) {
        return Err(SpecialError::OutsideShortTimeGuard {
            t,
            max: SHORT_TIME_MAX_PRODUCT,
        });
    }
    let (wl, wu, om) = (w.omega_l, w.omega_u, w.omega_sys);
    Ok(if pattern == SignPattern::PMPM {
        2.0 * (wl - wu) * t
            + t.powi(3) / 9.0 * (wu.powi(3) - wl.powi(3) + 3.0 * om * om * wu - 3.0 * om * om * wl)
    } else {
        t.powi(3) / 3.0 * om * (wl * wl - wu * wu)
    })
}

/// Short-time expansion of [`f_ci`]; error O(t⁴). The constant part is the
/// same signed log combination as [`f_ci_limit`].
pub fn f_ci_short(pattern: SignPattern, t: f64, w: &FrequencyWindow) -> Result<f64, SpecialError> {
    check_pattern_tabulated(pattern)?;
    if !w.short_time_ok(t) {
        return Err(SpecialError::OutsideShortTimeGuard {
            t,
            max: SHORT_TIME_MAX_PRODUCT,
        });
    }
    let (wl, wu, om) = (w.omega_l, w.omega_u, w.omega_sys);
    Ok(if pattern == SignPattern::PMPM {
        ((wl * wl - om * om) / (wu * wu - om * om)).ln() + 0.5 * (wu * wu - wl * wl) * t * t
    } else {
        ((wl - om) * (wu + om) / ((wl + om) * (wu - om))).ln() + om * (wl - wu) * t * t
    })
}

/// Long-time asymptote of [`f_si`] (the t·F asymptote divided by t);
/// relative envelope O(t⁻²) once inside the guard.
pub fn f_si_long(pattern: SignPattern, t: f64, w: &FrequencyWindow) -> Result<f64, SpecialError> {
    check_pattern_tabulated(pattern)?;
    if !w.long_time_ok(t) {
        return Err(SpecialError::OutsideLongTimeGuard {
            t,
            min: LONG_TIME_MIN_PRODUCT,
        });
    }
    let (wl, wu, om) = (w.omega_l, w.omega_u, w.omega_sys);
    let (dl, du) = (1.0 / (wl * wl - om * om), 1.0 / (wu * wu - om * om));
    let (c, s) = ((om * t).cos(), (om * t).sin());
    let (cl, sl) = ((wl * t).cos(), (wl * t).sin());
    let (cu, su) = ((wu * t).cos(), (wu * t).sin());
    Ok(if pattern == SignPattern::PMPM {
        2.0 / t * (wu * cu * du * c + om * su * du * s - wl * cl * dl * c - om * sl * dl * s)
    } else {
        2.0 / t * (wu * su * du * s + om * cu * du * c - wl * sl * dl * s - om * cl * dl * c)
    })
}

/// Long-time asymptote of [`f_ci`]; same conventions as [`f_si_long`].
pub fn f_ci_long(pattern: SignPattern, t: f64, w: &FrequencyWindow) -> Result<f64, SpecialError> {
    check_pattern_tabulated(pattern)?;
    if !w.long_time_ok(t) {
        return Err(SpecialError::OutsideLongTimeGuard {
            t,
            min: LONG_TIME_MIN_PRODUCT,
        });
    }
    let (wl, wu, om) = (w.omega_l, w.omega_u, w.omega_sys);
    let (dl, du) = (1.0 / (wl * wl - om * om), 1.0 / (wu * wu - om * om));
    let (c, s) = ((om * t).cos(), (om * t).sin());
    let (cl, sl) = ((wl * t).cos(), (wl * t).sin());
    let (cu, su) = ((wu * t).cos(), (wu * t).sin());
    Ok(if pattern == SignPattern::PMPM {
        2.0 / t * (wl * sl * dl * c - om * cl * dl * s - wu * su * du * c + om * cu * du * s)
    } else {
        2.0 / t * (om * sl * dl * c - wl * cl * dl * s + wu * cu * du * s - om * su * du * c)
    })
}
