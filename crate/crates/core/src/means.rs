//! Closed-form ensemble means of the indicator terms over a uniform
//! frequency window, with short-time coefficients, long-time plateaus, and
//! an adaptive-quadrature route that serves as the independent oracle.
//!
//! Three means have closed forms: the common low-temperature mean of
//! |α(t)|², and the leading-order high-temperature means of the decoherence
//! and overlap terms (|α|²/(τ_T ω) and τ_T ω |α|²). Each closed form is an
//! endpoint difference of antiderivatives whose oscillatory parts are the
//! tabulated sign-pattern combinations of Si and Ci; every form is pinned
//! against the quadrature route rather than trusted from its derivation.
//!
//! The quadrature route also integrates the un-approximated coth/tanh
//! integrands, which makes the leading-order truncation error of the
//! high-temperature forms measurable instead of assumed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::indicators::{displacement_amplitude, IndicatorError, Oscillator};
use crate::params::{coupling_constant, ModelParams, ParamsError, ThermalTime};
use crate::quad::{self, QuadError};
use crate::special::{ci, si, FrequencyWindow, SpecialError};

#[derive(Debug, Error)]
pub enum MeanError {
    #[error("closed-form mean requires t > 0 (got {0}); use mean_short_time near zero")]
    NonPositiveTime(f64),
    #[error("high-temperature mean is undefined at zero temperature")]
    ZeroTemperature,
    #[error("t={t} outside the short-time guard t*omega_u <= {max}")]
    OutsideShortTimeGuard { t: f64, max: f64 },
    #[error("t={t} outside the long-time guard t*(omega_l - Omega) >= {min}")]
    OutsideLongTimeGuard { t: f64, min: f64 },
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Indicator(#[from] IndicatorError),
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// Which analyzed mean is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeanKind {
    /// Low temperature: both indicator terms reduce to |α(t)|².
    LowTF0,
    /// High temperature, decoherence term: |α(t)|² / (τ_T ω) at leading order.
    HighTGamma,
    /// High temperature, overlap term: τ_T ω |α(t)|² at leading order.
    HighTB,
}

impl MeanKind {
    pub const ALL: [MeanKind; 3] = [MeanKind::LowTF0, MeanKind::HighTGamma, MeanKind::HighTB];

    pub fn label(&self) -> &'static str {
        match self {
            MeanKind::LowTF0 => "low_t_f0",
            MeanKind::HighTGamma => "high_t_gamma",
            MeanKind::HighTB => "high_t_b",
        }
    }
}

/// Integrand selector for the quadrature route. The `Exact*` variants carry
/// the full coth/tanh thermal factors with no leading-order truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanIntegrand {
    Kind(MeanKind),
    ExactGamma,
    ExactOverlap,
}

/// Amplitude and offset of the long-time asymptote
/// `prefactor * (a cos²(Ω t) + b)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AsymptoteConstants {
    pub kind: MeanKind,
    pub a: f64,
    pub b: f64,
    pub prefactor: f64,
}

impl AsymptoteConstants {
    /// Minimum of the asymptote over a period: `prefactor * b` when a >= 0,
    /// `prefactor * (a + b)` otherwise.
    pub fn plateau_minimum(&self) -> f64 {
        if self.a >= 0.0 {
            self.prefactor * self.b
        } else {
            self.prefactor * (self.a + self.b)
        }
    }

    /// Time average of the asymptote: `prefactor * (a/2 + b)`.
    pub fn time_average(&self) -> f64 {
        self.prefactor * (0.5 * self.a + self.b)
    }
}

/// Coefficient of t² in the short-time mean.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ShortTimeCoefficient {
    pub kind: MeanKind,
    pub c2: f64,
}

/// 2 M γ̄₀ / (ħ π): the window- and temperature-independent part of every
/// prefactor under the C = 2 sqrt(M m γ̄₀/π) coupling convention.
fn base_prefactor(params: &ModelParams) -> f64 {
    2.0 * params.mass * params.gamma0_bar / (params.hbar * std::f64::consts::PI)
}

fn require_thermal(kind: MeanKind, tau: &ThermalTime) -> Result<(), MeanError> {
    if kind != MeanKind::LowTF0 && !tau.tau_t.is_finite() {
        return Err(MeanError::ZeroTemperature);
    }
    Ok(())
}

/// Si/Ci and elementary pieces of the antiderivatives at one window edge.
struct Edge {
    w: f64,
    /// 1/(ω² - Ω²)
    d: f64,
    cos_wt: f64,
    sin_wt: f64,
    /// Si((ω∓Ω)t), Si((ω±Ω)t)
    si_m: f64,
    si_p: f64,
    ci_m: f64,
    ci_p: f64,
    /// Si(ωt); only the high-temperature decoherence form needs it
    si_wt: f64,
}

impl Edge {
    fn new(t: f64, w: f64, om: f64, need_si_wt: bool) -> Result<Self, SpecialError> {
        Ok(Edge {
            w,
            d: 1.0 / (w * w - om * om),
            cos_wt: (w * t).cos(),
            sin_wt: (w * t).sin(),
            si_m: si((w - om) * t)?,
            si_p: si((w + om) * t)?,
            ci_m: ci((w - om) * t)?,
            ci_p: ci((w + om) * t)?,
            si_wt: if need_si_wt { si(w * t)? } else { 0.0 },
        })
    }
}

/// Antiderivative values at one edge for the selected kind's four integral
/// pieces (two elementary, two oscillatory). `c`/`s` are cos(Ωt)/sin(Ωt).
struct EdgeTerms {
    elementary_plus: f64,
    elementary_minus: f64,
    oscillatory_cos: f64,
    oscillatory_sin: f64,
}

fn edge_terms(kind: MeanKind, e: &Edge, t: f64, om: f64, c: f64, s: f64) -> EdgeTerms {
    let w = e.w;
    let d = e.d;
    let ln_ratio = ((w - om) / (w + om)).ln();
    match kind {
        MeanKind::LowTF0 => EdgeTerms {
            // ∫ ω/(ω²-Ω²)² dω
            elementary_plus: -0.5 * d,
            // ∫ Ω²/(ω(ω²-Ω²)²) dω
            elementary_minus: (w * w * d).ln() / (2.0 * om * om) - 0.5 * d,
            // ∫ ω cos(ωt)/(ω²-Ω²)² dω
            oscillatory_cos: -0.5 * e.cos_wt * d
                - t / (4.0 * om) * (c * (e.si_m - e.si_p) + s * (e.ci_m + e.ci_p)),
            // ∫ Ω sin(ωt)/(ω²-Ω²)² dω
            oscillatory_sin: (-2.0 * w * e.sin_wt * d
                + t * (c * (e.ci_m + e.ci_p) + s * (e.si_p - e.si_m)))
                / (4.0 * om)
                - (c * (e.si_m - e.si_p) + s * (e.ci_m + e.ci_p)) / (4.0 * om * om),
        },
        MeanKind::HighTGamma => EdgeTerms {
            // ∫ 1/(ω²-Ω²)² dω
            elementary_plus: -w * d / (2.0 * om * om) - ln_ratio / (4.0 * om.powi(3)),
            // ∫ Ω²/(ω²(ω²-Ω²)²) dω
            elementary_minus: -1.0 / (om * om * w)
                - w * d / (2.0 * om * om)
                - 3.0 * ln_ratio / (4.0 * om.powi(3)),
            // ∫ cos(ωt)/(ω²-Ω²)² dω
            oscillatory_cos: (-2.0 * w * e.cos_wt * d
                - t * (c * (e.si_m + e.si_p) + s * (e.ci_m - e.ci_p)))
                / (4.0 * om * om)
                - (c * (e.ci_m - e.ci_p) - s * (e.si_m + e.si_p)) / (4.0 * om.powi(3)),
            // ∫ Ω sin(ωt)/(ω(ω²-Ω²)²) dω
            oscillatory_sin: e.si_wt / om.powi(3)
                - (c * (e.si_m + e.si_p) + s * (e.ci_m - e.ci_p)) / (2.0 * om.powi(3))
                + (-2.0 * om * e.sin_wt * d + t * (c * (e.ci_m - e.ci_p) - s * (e.si_m + e.si_p)))
                    / (4.0 * om * om),
        },
        MeanKind::HighTB => EdgeTerms {
            // ∫ ω²/(ω²-Ω²)² dω
            elementary_plus: ln_ratio / (4.0 * om) - 0.5 * w * d,
            // ∫ Ω²/(ω²-Ω²)² dω
            elementary_minus: om * om * (-w * d / (2.0 * om * om) - ln_ratio / (4.0 * om.powi(3))),
            // ∫ ω² cos(ωt)/(ω²-Ω²)² dω
            oscillatory_cos: (c * (e.ci_m - e.ci_p) - s * (e.si_m + e.si_p)) / (4.0 * om)
                + (-2.0 * w * e.cos_wt * d - t * (c * (e.si_m + e.si_p) + s * (e.ci_m - e.ci_p)))
                    / 4.0,
            // ∫ ω Ω sin(ωt)/(ω²-Ω²)² dω
            oscillatory_sin: (-2.0 * om * e.sin_wt * d
                + t * (c * (e.ci_m - e.ci_p) - s * (e.si_m + e.si_p)))
                / 4.0,
        },
    }
}

/// Closed-form ensemble mean `⟨⟨f⟩⟩(t)` for the selected kind, including its
/// full prefactor, so that it is directly comparable with
/// [`mean_quadrature`] of the same kind.
pub fn mean_exact(
    kind: MeanKind,
    t: f64,
    w: &FrequencyWindow,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<f64, MeanError> {
    if t.is_nan() || t <= 0.0 {
        return Err(MeanError::NonPositiveTime(t));
    }
    require_thermal(kind, tau)?;
    params.validate()?;
    let om = w.omega_sys();
    let c = (om * t).cos();
    let s = (om * t).sin();
    let k_plus = 1.0 + c * c;
    let k_minus = 1.0 - c * c;
    let need_si_wt = kind == MeanKind::HighTGamma;
    let lower = edge_terms(
        kind,
        &Edge::new(t, w.omega_l(), om, need_si_wt)?,
        t,
        om,
        c,
        s,
    );
    let upper = edge_terms(
        kind,
        &Edge::new(t, w.omega_u(), om, need_si_wt)?,
        t,
        om,
        c,
        s,
    );
    let sum = k_plus * (upper.elementary_plus - lower.elementary_plus)
        + k_minus * (upper.elementary_minus - lower.elementary_minus)
        - 2.0 * c * (upper.oscillatory_cos - lower.oscillatory_cos)
        - 2.0 * s * (upper.oscillatory_sin - lower.oscillatory_sin);
    let p0 = base_prefactor(params) / w.delta();
    Ok(match kind {
        MeanKind::LowTF0 => p0 * sum,
        MeanKind::HighTGamma => p0 / tau.tau_t * sum,
        MeanKind::HighTB => p0 * tau.tau_t * sum,
    })
}

/// Average of `f(ω)` under the uniform density on the window:
/// `(1/Δω) ∫ f dω`.
pub fn uniform_average(
    f: impl Fn(f64) -> f64,
    w: &FrequencyWindow,
    tol: f64,
) -> Result<f64, MeanError> {
    let r = quad::integrate(f, w.omega_l(), w.omega_u(), tol, 0.0)?;
    Ok(r.value / w.delta())
}

/// Adaptive-quadrature ensemble mean for the selected integrand. `Kind`
/// variants integrate the leading-order forms behind [`mean_exact`];
/// `ExactGamma`/`ExactOverlap` integrate |α|² coth(τ_T ω) and
/// |α|² tanh(τ_T ω) with no truncation, providing the master oracle.
pub fn mean_quadrature(
    integrand: MeanIntegrand,
    t: f64,
    w: &FrequencyWindow,
    tau: &ThermalTime,
    params: &ModelParams,
    tol: f64,
) -> Result<f64, MeanError> {
    if t.is_nan() || t < 0.0 {
        return Err(MeanError::NonPositiveTime(t));
    }
    if let MeanIntegrand::Kind(kind) = integrand {
        require_thermal(kind, tau)?;
    }
    params.validate()?;
    // the window's system frequency is authoritative for the mean; both
    // routes must drive the bath at the same frequency
    let params = ModelParams {
        omega: w.omega_sys(),
        ..*params
    };
    // the means are bath-mass independent under the coupling convention;
    // evaluate at unit mass
    let coupling = coupling_constant(&params, 1.0)?;
    let amp2 = |omega: f64| {
        let osc = Oscillator {
            omega,
            mass: 1.0,
            coupling,
        };
        displacement_amplitude(t, &osc, &params)
            .map(|a| a.norm_sqr())
            .expect("window excludes resonance and t >= 0")
    };
    let tau_t = tau.tau_t;
    match integrand {
        MeanIntegrand::Kind(MeanKind::LowTF0) => uniform_average(amp2, w, tol),
        MeanIntegrand::Kind(MeanKind::HighTGamma) => {
            uniform_average(|omega| amp2(omega) / (tau_t * omega), w, tol)
        }
        MeanIntegrand::Kind(MeanKind::HighTB) => {
            uniform_average(|omega| tau_t * omega * amp2(omega), w, tol)
        }
        MeanIntegrand::ExactGamma => {
            uniform_average(|omega| amp2(omega) * tau.coth_factor(omega), w, tol)
        }
        MeanIntegrand::ExactOverlap => {
            uniform_average(|omega| amp2(omega) * tau.tanh_factor(omega), w, tol)
        }
    }
}

/// Coefficient of t² in the short-time mean.
///
/// For the high-temperature overlap kind two rival conventions circulate
/// (one duplicates τ_T, the other divides by Δω); the coefficient here,
/// `2 M γ̄₀ τ_T/(ħ π)`, is the one the quadrature fit reproduces — see the
/// resolution check in the validation suite.
pub fn short_time_coefficient(
    kind: MeanKind,
    w: &FrequencyWindow,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<ShortTimeCoefficient, MeanError> {
    require_thermal(kind, tau)?;
    params.validate()?;
    let base = base_prefactor(params);
    let c2 = match kind {
        MeanKind::LowTF0 => base * (w.omega_u() / w.omega_l()).ln() / w.delta(),
        MeanKind::HighTGamma => base / (tau.tau_t * w.omega_l() * w.omega_u()),
        MeanKind::HighTB => base * tau.tau_t,
    };
    Ok(ShortTimeCoefficient { kind, c2 })
}

/// Short-time mean `c2 t²`; valid for `t * omega_u <= 0.1`.
pub fn mean_short_time(
    kind: MeanKind,
    t: f64,
    w: &FrequencyWindow,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<f64, MeanError> {
    if !w.short_time_ok(t) {
        return Err(MeanError::OutsideShortTimeGuard {
            t,
            max: crate::special::SHORT_TIME_MAX_PRODUCT,
        });
    }
    Ok(short_time_coefficient(kind, w, tau, params)?.c2 * t * t)
}

/// Long-time asymptote constants (a, b) and prefactor for the selected kind.
///
/// All three pairs are assembled from the closed-form window integrals that
/// survive at long times, and are cross-checked against time-averaged
/// quadrature — the constants the long-time mean actually approaches.
pub fn asymptote_constants(
    kind: MeanKind,
    w: &FrequencyWindow,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<AsymptoteConstants, MeanError> {
    require_thermal(kind, tau)?;
    params.validate()?;
    let (wl, wu, om) = (w.omega_l(), w.omega_u(), w.omega_sys());
    let dl = 1.0 / (wl * wl - om * om);
    let du = 1.0 / (wu * wu - om * om);
    let ln_q = ((wl - om) * (wu + om) / ((wl + om) * (wu - om))).ln();
    let p0 = base_prefactor(params) / w.delta();
    let (a, b, prefactor) = match kind {
        MeanKind::LowTF0 => {
            let a = -((2.0 * (wu / wl).ln() - ((wu * wu - om * om) / (wl * wl - om * om)).ln())
                / (2.0 * om * om));
            (a, dl - du - a, p0)
        }
        MeanKind::HighTGamma => {
            // r = ∫ dω/(ω²-Ω²)², p = ∫ Ω² dω/(ω²(ω²-Ω²)²) over the window
            let r = (2.0 * wl * dl - 2.0 * wu * du + ln_q / om) / (4.0 * om * om);
            let p =
                ((wu - wl) / (wl * wu) + 0.5 * (wl * dl - wu * du) + 0.75 * ln_q / om) / (om * om);
            (r - p, r + p, p0 / tau.tau_t)
        }
        MeanKind::HighTB => (-ln_q / (2.0 * om), wl * dl - wu * du, p0 * tau.tau_t),
    };
    Ok(AsymptoteConstants {
        kind,
        a,
        b,
        prefactor,
    })
}

/// Long-time mean `prefactor (a cos²(Ω t) + b)`; valid for
/// `t (omega_l - Omega) >= 10`.
pub fn mean_long_time(
    kind: MeanKind,
    t: f64,
    w: &FrequencyWindow,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<f64, MeanError> {
    if !w.long_time_ok(t) {
        return Err(MeanError::OutsideLongTimeGuard {
            t,
            min: crate::special::LONG_TIME_MIN_PRODUCT,
        });
    }
    let k = asymptote_constants(kind, w, tau, params)?;
    let c = (w.omega_sys() * t).cos();
    Ok(k.prefactor * (k.a * c * c + k.b))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen oracle values keep all their digits
mod tests {
    use super::*;

    fn setup() -> (FrequencyWindow, ModelParams) {
        (
            FrequencyWindow::new(10.0, 20.0, 1.0).unwrap(),
            ModelParams::natural(1.0, 1.0, 1.0).unwrap(),
        )
    }

    fn tau_of(params: &ModelParams, tau_t: f64) -> ThermalTime {
        // tau_t = hbar/(2 kB T) => T = 1/(2 tau_t) in natural units
        ThermalTime::from_temperature(params, 1.0 / (2.0 * tau_t)).unwrap()
    }

    #[test]
    fn mean_exact_matches_frozen_oracle_values() {
        // mpmath evaluations of the verified closed forms, 18 digits
        let (w, p) = setup();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        let v = mean_exact(MeanKind::LowTF0, 0.5, &w, &cold, &p).unwrap();
        assert!(((v - 2.523_789_822_187_318_51e-4) / v).abs() < 1e-13, "{v}");
        let v = mean_exact(MeanKind::LowTF0, 2.0, &w, &cold, &p).unwrap();
        assert!(((v - 2.615_956_370_510_451_13e-4) / v).abs() < 1e-13, "{v}");
        // the high-temperature assemblies carry 1/Ω³-amplified cancellations;
        // forward error measured at the 1e-9 level for Ω ~ 1 windows
        let hot = tau_of(&p, 1.0 / 200.0);
        let v = mean_exact(MeanKind::HighTGamma, 0.5, &w, &hot, &p).unwrap();
        assert!(((v - 3.463_475_386_419_032_58e-3) / v).abs() < 5e-9, "{v}");
        let v = mean_exact(MeanKind::HighTB, 0.5, &w, &hot, &p).unwrap();
        assert!(((v - 1.939_197_277_685_327_57e-5) / v).abs() < 5e-9, "{v}");
    }

    #[test]
    fn mean_exact_agrees_with_quadrature() {
        let (w, p) = setup();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        for t in [0.05, 0.5, 3.3, 30.0] {
            let a = mean_exact(MeanKind::LowTF0, t, &w, &cold, &p).unwrap();
            let b = mean_quadrature(
                MeanIntegrand::Kind(MeanKind::LowTF0),
                t,
                &w,
                &cold,
                &p,
                1e-10,
            )
            .unwrap();
            assert!(((a - b) / b).abs() < 1e-8, "t={t}: {a} vs {b}");
        }
        let hot = tau_of(&p, 1.0 / 500.0);
        for kind in [MeanKind::HighTGamma, MeanKind::HighTB] {
            for t in [0.5, 12.0] {
                let a = mean_exact(kind, t, &w, &hot, &p).unwrap();
                let b = mean_quadrature(MeanIntegrand::Kind(kind), t, &w, &hot, &p, 1e-10).unwrap();
                assert!(((a - b) / b).abs() < 1e-8, "{kind:?} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn high_t_means_match_exact_integrands_to_truncation_order() {
        let (w, p) = setup();
        // T = 1e4: tau_t*omega <= 1e-3, dropped terms O((tau_t w)^2) ~ 3e-7
        let tau = ThermalTime::from_temperature(&p, 1.0e4).unwrap();
        let t = 0.5;
        let lead = mean_exact(MeanKind::HighTGamma, t, &w, &tau, &p).unwrap();
        let full = mean_quadrature(MeanIntegrand::ExactGamma, t, &w, &tau, &p, 1e-10).unwrap();
        assert!(((lead - full) / full).abs() < 1e-6, "{lead} vs {full}");
        let lead = mean_exact(MeanKind::HighTB, t, &w, &tau, &p).unwrap();
        let full = mean_quadrature(MeanIntegrand::ExactOverlap, t, &w, &tau, &p, 1e-10).unwrap();
        assert!(((lead - full) / full).abs() < 1e-6, "{lead} vs {full}");
    }

    #[test]
    fn quadrature_normalization_and_calibration() {
        let (w, _) = setup();
        let one = uniform_average(|_| 1.0, &w, 1e-12).unwrap();
        assert!((one - 1.0).abs() < 1e-13);
        let id = uniform_average(|x| x, &w, 1e-12).unwrap();
        assert!((id - 15.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_mean_vanishes_at_zero_time() {
        let (w, p) = setup();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        let v = mean_quadrature(
            MeanIntegrand::Kind(MeanKind::LowTF0),
            0.0,
            &w,
            &cold,
            &p,
            1e-9,
        )
        .unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn closed_form_requires_positive_time_and_finite_temperature() {
        let (w, p) = setup();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        assert!(matches!(
            mean_exact(MeanKind::LowTF0, 0.0, &w, &cold, &p),
            Err(MeanError::NonPositiveTime(_))
        ));
        assert!(matches!(
            mean_exact(MeanKind::HighTGamma, 1.0, &w, &cold, &p),
            Err(MeanError::ZeroTemperature)
        ));
    }

    #[test]
    fn short_time_coefficients() {
        let (w, p) = setup();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        // (2/(10 pi)) ln 2
        let c2 = short_time_coefficient(MeanKind::LowTF0, &w, &cold, &p)
            .unwrap()
            .c2;
        assert!((c2 - 0.044_127_120_030_530_318_7).abs() < 1e-16);
        let tau = tau_of(&p, 1.0 / 400.0);
        let c2 = short_time_coefficient(MeanKind::HighTGamma, &w, &tau, &p)
            .unwrap()
            .c2;
        assert!(((c2 - 1.273_239_544_735_162_69) / c2).abs() < 1e-14);
        let c2 = short_time_coefficient(MeanKind::HighTB, &w, &tau, &p)
            .unwrap()
            .c2;
        assert!(((c2 - 1.591_549_430_918_953_36e-3) / c2).abs() < 1e-14);
    }

    #[test]
    fn short_time_branch_matches_exact_with_quadratic_deviation() {
        let (w, p) = setup();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        // fit over t*omega_u in [1e-3, 1e-2]: below that the closed form's
        // cancellation noise (~1e-6 relative) masks the t² deviation
        let ts: Vec<f64> = (0..8)
            .map(|k| 1e-3 / 20.0 * (10.0f64).powf(k as f64 / 7.0))
            .collect();
        let devs: Vec<f64> = ts
            .iter()
            .map(|&t| {
                let ex = mean_exact(MeanKind::LowTF0, t, &w, &cold, &p).unwrap();
                let st = mean_short_time(MeanKind::LowTF0, t, &w, &cold, &p).unwrap();
                (ex / st - 1.0).abs()
            })
            .collect();
        let slope = sbs_testkit::loglog_slope(&ts, &devs);
        assert!(slope >= 1.5, "slope {slope}");
        assert!(mean_short_time(MeanKind::LowTF0, 1.0, &w, &cold, &p).is_err());
    }

    #[test]
    fn long_time_constants_match_frozen_oracle_values() {
        // mpmath evaluation of the window integrals, 18 digits
        let (w, p) = setup();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        let k = asymptote_constants(MeanKind::LowTF0, &w, &cold, &p).unwrap();
        assert!((k.a - 3.773_602_817_691_455_41e-3).abs() < 1e-17);
        assert!((k.b - 3.821_141_619_158_244_6e-3).abs() < 1e-17);
        let tau = tau_of(&p, 1.0 / 400.0);
        let k = asymptote_constants(MeanKind::HighTGamma, &w, &tau, &p).unwrap();
        assert!((k.a - 2.936_184_525_843_123_9e-4).abs() < 1e-16, "{}", k.a);
        assert!((k.b - 2.975_508_217_243_652_71e-4).abs() < 1e-16, "{}", k.b);
        let k = asymptote_constants(MeanKind::HighTB, &w, &tau, &p).unwrap();
        assert!((k.a - 5.029_361_845_258_431_24e-2).abs() < 1e-15);
        assert!((k.b - 5.088_478_772_689_299_01e-2).abs() < 1e-15);
    }

    #[test]
    fn plateaus_are_positive_and_oscillation_is_comparable_to_offset() {
        // for off-resonant windows the a and b constants are positive and of
        // the same order: the long-time mean oscillates between b and a+b
        let p = ModelParams::natural(1.0, 1.0, 1.0).unwrap();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        let tau = tau_of(&p, 1e-3);
        for (wl, wu) in [(10.0, 20.0), (100.0, 200.0), (15.0, 90.0)] {
            let w = FrequencyWindow::new(wl, wu, 1.0).unwrap();
            for kind in MeanKind::ALL {
                let k = asymptote_constants(
                    kind,
                    &w,
                    if kind == MeanKind::LowTF0 {
                        &cold
                    } else {
                        &tau
                    },
                    &p,
                )
                .unwrap();
                assert!(k.b > 0.0, "{kind:?} b = {}", k.b);
                assert!(k.a > 0.0, "{kind:?} a = {}", k.a);
                let ratio = k.a / k.b;
                assert!(ratio > 0.5 && ratio < 1.05, "{kind:?} a/b = {ratio}");
                assert!(k.plateau_minimum() > 0.0);
            }
        }
    }

    #[test]
    fn long_time_branch_tracks_exact_mean() {
        let (w, p) = setup();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        // pointwise O(1/t) agreement improving along the guard
        let t1 = 100.0 / (w.omega_l() - w.omega_sys());
        let ex = mean_exact(MeanKind::LowTF0, t1, &w, &cold, &p).unwrap();
        let lt = mean_long_time(MeanKind::LowTF0, t1, &w, &cold, &p).unwrap();
        assert!(
            ((ex - lt) / lt).abs() < 0.02,
            "rel {}",
            ((ex - lt) / lt).abs()
        );
        assert!(mean_long_time(MeanKind::LowTF0, 0.5, &w, &cold, &p).is_err());
    }

    #[test]
    fn temperature_monotonicity_of_high_t_means() {
        let (w, p) = setup();
        let t = 0.5;
        let tau1 = tau_of(&p, 1.0 / 400.0);
        let tau2 = tau_of(&p, 2.0 / 400.0);
        let g1 = mean_exact(MeanKind::HighTGamma, t, &w, &tau1, &p).unwrap();
        let g2 = mean_exact(MeanKind::HighTGamma, t, &w, &tau2, &p).unwrap();
        assert!(
            ((g1 / g2) - 2.0).abs() < 1e-12,
            "gamma mean must scale as 1/tau_t"
        );
        let b1 = mean_exact(MeanKind::HighTB, t, &w, &tau1, &p).unwrap();
        let b2 = mean_exact(MeanKind::HighTB, t, &w, &tau2, &p).unwrap();
        assert!(
            ((b2 / b1) - 2.0).abs() < 1e-12,
            "overlap mean must scale as tau_t"
        );
    }

    #[test]
    fn long_time_mean_is_periodic_in_half_system_period() {
        let (w, p) = setup();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        let t = 12.0;
        let period = std::f64::consts::PI / w.omega_sys();
        let v1 = mean_long_time(MeanKind::LowTF0, t, &w, &cold, &p).unwrap();
        let v2 = mean_long_time(MeanKind::LowTF0, t + period, &w, &cold, &p).unwrap();
        assert!(((v1 - v2) / v1).abs() < 1e-12);
    }

    #[test]
    fn positivity_of_exact_mean() {
        let (w, p) = setup();
        let cold = ThermalTime::from_temperature(&p, 0.0).unwrap();
        let tau = tau_of(&p, 1.0 / 400.0);
        for t in [0.01, 0.3, 1.2, 5.0, 17.0, 60.0] {
            assert!(mean_exact(MeanKind::LowTF0, t, &w, &cold, &p).unwrap() >= 0.0);
            assert!(mean_exact(MeanKind::HighTGamma, t, &w, &tau, &p).unwrap() >= 0.0);
            assert!(mean_exact(MeanKind::HighTB, t, &w, &tau, &p).unwrap() >= 0.0);
        }
    }
}
