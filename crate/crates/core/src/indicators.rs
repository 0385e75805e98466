//! Per-oscillator and macrofraction indicator functions over finite sampled
//! environments.
//!
//! Each bath oscillator driven by the rotating central position acquires a
//! displacement amplitude per unit of branch separation; its contributions
//! to the decoherence factor and to the generalized overlap differ only by
//! the thermal factor (coth vs tanh of τ_T ω). Macrofraction indicators are
//! exponentials of compensated sums of those terms.

use num_complex::Complex64;
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{coupling_constant, EnvironmentSpec, ModelParams, ParamsError, ThermalTime};

/// Relative half-width of the rejected band around the resonance ω = Ω when
/// sampling frequencies. Cannot trigger for windows with ω_L > Ω; kept as a
/// guard against the (ω - Ω)⁻¹ pole.
pub const RESONANCE_REJECTION_BAND: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum IndicatorError {
    #[error("oscillator frequency {omega} is resonant with the system frequency {omega_sys}")]
    Resonant { omega: f64, omega_sys: f64 },
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("separation must be non-negative and finite, got {0}")]
    BadSeparation(f64),
    #[error("window lower edge {omega_l} must exceed the system frequency {omega_sys}")]
    WindowBelowSystemFrequency { omega_l: f64, omega_sys: f64 },
    #[error("time grid must be non-empty")]
    EmptyGrid,
    #[error("time grid must be strictly increasing at index {0}")]
    NonIncreasingGrid(usize),
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// One realized bath mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillator {
    /// Mode frequency ω.
    pub omega: f64,
    /// Mode mass.
    pub mass: f64,
    /// Coupling constant to the central oscillator.
    pub coupling: f64,
}

/// Branch separation |X₀ - X₀'|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Separation(f64);

impl Separation {
    pub fn new(delta_x: f64) -> Result<Self, IndicatorError> {
        if !delta_x.is_finite() || delta_x < 0.0 {
            return Err(IndicatorError::BadSeparation(delta_x));
        }
        Ok(Self(delta_x))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

/// Whether a macrofraction is traced over (unobserved) or read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MacLabel {
    Unobserved,
    Observed(usize),
}

/// A group of bath oscillators treated collectively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Macrofraction {
    pub oscillators: Vec<Oscillator>,
    pub label: MacLabel,
}

impl Macrofraction {
    pub fn len(&self) -> usize {
        self.oscillators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oscillators.is_empty()
    }
}

/// Time series of the macrofraction indicators, with the environment spec
/// that produced it (including the seed) as metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndicatorSeries {
    pub times: Vec<f64>,
    /// |Γ(t)| over the unobserved macrofraction.
    pub gamma_abs: Vec<f64>,
    /// B(t) per observed macrofraction, outer index = macrofraction.
    pub overlaps: Vec<Vec<f64>>,
    pub spec: EnvironmentSpec,
}

/// Compensated (Kahan) accumulator; macrofraction sums can run over 10⁶
/// terms in sweeps.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// e^{ix} - 1 without cancellation at small |x|.
fn cis_minus_one(x: f64) -> Complex64 {
    let half_sin = (0.5 * x).sin();
    Complex64::new(-2.0 * half_sin * half_sin, x.sin())
}

/// Complex displacement amplitude of a driven bath mode per unit of branch
/// position:
/// `-C/(2 sqrt(2 ħ m ω)) [ (e^{i(ω+Ω)t}-1)/(ω+Ω) + (e^{i(ω-Ω)t}-1)/(ω-Ω) ]`.
pub fn displacement_amplitude(
    t: f64,
    osc: &Oscillator,
    params: &ModelParams,
) -> Result<Complex64, IndicatorError> {
    if t.is_nan() || t < 0.0 {
        return Err(IndicatorError::NegativeTime(t));
    }
    let omega_sys = params.omega;
    if (osc.omega - omega_sys).abs() <= RESONANCE_REJECTION_BAND * omega_sys {
        return Err(IndicatorError::Resonant {
            omega: osc.omega,
            omega_sys,
        });
    }
    let prefactor = -osc.coupling / (2.0 * (2.0 * params.hbar * osc.mass * osc.omega).sqrt());
    let plus = cis_minus_one((osc.omega + omega_sys) * t) / (osc.omega + omega_sys);
    let minus = cis_minus_one((osc.omega - omega_sys) * t) / (osc.omega - omega_sys);
    Ok(prefactor * (plus + minus))
}

/// Per-oscillator decoherence exponent term
/// `f^Γ(t; ω) = |α(t)|² coth(τ_T ω)`.
pub fn decoherence_term(
    t: f64,
    osc: &Oscillator,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<f64, IndicatorError> {
    let alpha = displacement_amplitude(t, osc, params)?;
    Ok(alpha.norm_sqr() * tau.coth_factor(osc.omega))
}

/// Per-oscillator overlap exponent term `f^B(t; ω) = |α(t)|² tanh(τ_T ω)`.
pub fn overlap_term(
    t: f64,
    osc: &Oscillator,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<f64, IndicatorError> {
    let alpha = displacement_amplitude(t, osc, params)?;
    Ok(alpha.norm_sqr() * tau.tanh_factor(osc.omega))
}

/// Draw the full environment for `spec`: i.i.d. uniform frequencies on
/// [ω_L, ω_U] from a ChaCha stream seeded with `spec.seed`, split into the
/// unobserved macrofraction followed by the observed ones in order.
/// Identical inputs produce identical environments on every platform.
pub fn sample_environment(
    spec: &EnvironmentSpec,
    params: &ModelParams,
) -> Result<(Macrofraction, Vec<Macrofraction>), IndicatorError> {
    spec.validate()?;
    params.validate()?;
    if spec.omega_l <= params.omega {
        return Err(IndicatorError::WindowBelowSystemFrequency {
            omega_l: spec.omega_l,
            omega_sys: params.omega,
        });
    }
    let coupling = coupling_constant(params, spec.mass)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dist = Uniform::new(spec.omega_l, spec.omega_u).expect("validated window");
    let mut draw = |n: usize, label: MacLabel| -> Macrofraction {
        let mut oscillators = Vec::with_capacity(n);
        while oscillators.len() < n {
            let omega = dist.sample(&mut rng);
            if (omega - params.omega).abs() <= RESONANCE_REJECTION_BAND * params.omega {
                continue;
            }
            oscillators.push(Oscillator {
                omega,
                mass: spec.mass,
                coupling,
            });
        }
        Macrofraction { oscillators, label }
    };
    let unobserved = draw(spec.n_unobserved, MacLabel::Unobserved);
    let observed: Vec<Macrofraction> = (0..spec.n_macrofractions)
        .map(|i| draw(spec.n_observed_per_mac, MacLabel::Observed(i)))
        .collect();
    Ok((unobserved, observed))
}

fn exponent_sum(
    t: f64,
    sep: Separation,
    mac: &Macrofraction,
    tau: &ThermalTime,
    params: &ModelParams,
    overlap: bool,
) -> Result<f64, IndicatorError> {
    let mut acc = KahanSum::default();
    for osc in &mac.oscillators {
        let term = if overlap {
            overlap_term(t, osc, tau, params)?
        } else {
            decoherence_term(t, osc, tau, params)?
        };
        acc.add(term);
    }
    Ok(0.5 * sep.get() * sep.get() * acc.value())
}

/// `-ln|Γ(t)|` over a macrofraction: `(ΔX²/2) Σ_k f^Γ(t; ω_k)`.
pub fn decoherence_exponent(
    t: f64,
    sep: Separation,
    mac: &Macrofraction,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<f64, IndicatorError> {
    exponent_sum(t, sep, mac, tau, params, false)
}

/// `-ln B(t)` over a macrofraction: `(ΔX²/2) Σ_k f^B(t; ω_k)`.
pub fn overlap_exponent(
    t: f64,
    sep: Separation,
    mac: &Macrofraction,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<f64, IndicatorError> {
    exponent_sum(t, sep, mac, tau, params, true)
}

/// Macrofraction decoherence factor `|Γ(t)| = exp[-(ΔX²/2) Σ_k f^Γ]`.
///
/// Conventionally evaluated on the unobserved macrofraction; the computation
/// is identical for any group of oscillators.
pub fn decoherence_factor(
    t: f64,
    sep: Separation,
    mac: &Macrofraction,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<f64, IndicatorError> {
    Ok((-decoherence_exponent(t, sep, mac, tau, params)?).exp())
}

/// Macrofraction generalized overlap `B(t) = exp[-(ΔX²/2) Σ_k f^B]`.
pub fn generalized_overlap(
    t: f64,
    sep: Separation,
    mac: &Macrofraction,
    tau: &ThermalTime,
    params: &ModelParams,
) -> Result<f64, IndicatorError> {
    Ok((-overlap_exponent(t, sep, mac, tau, params)?).exp())
}

/// Evaluate |Γ| on the unobserved macrofraction and B on every observed one
/// across a strictly increasing time grid.
#[allow(clippy::too_many_arguments)]
pub fn indicator_series(
    times: &[f64],
    sep: Separation,
    unobserved: &Macrofraction,
    observed: &[Macrofraction],
    tau: &ThermalTime,
    params: &ModelParams,
    spec: &EnvironmentSpec,
) -> Result<IndicatorSeries, IndicatorError> {
    if times.is_empty() {
        return Err(IndicatorError::EmptyGrid);
    }
    for i in 1..times.len() {
        if times[i].is_nan() || times[i] <= times[i - 1] {
            return Err(IndicatorError::NonIncreasingGrid(i));
        }
    }
    let mut gamma_abs = Vec::with_capacity(times.len());
    for &t in times {
        gamma_abs.push(decoherence_factor(t, sep, unobserved, tau, params)?);
    }
    let mut overlaps = Vec::with_capacity(observed.len());
    for mac in observed {
        let mut row = Vec::with_capacity(times.len());
        for &t in times {
            row.push(generalized_overlap(t, sep, mac, tau, params)?);
        }
        overlaps.push(row);
    }
    Ok(IndicatorSeries {
        times: times.to_vec(),
        gamma_abs,
        overlaps,
        spec: *spec,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen oracle values keep all their digits
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> ModelParams {
        ModelParams::natural(1.0, 1.0, 1.0).unwrap()
    }

    fn osc(omega: f64) -> Oscillator {
        let p = params();
        Oscillator {
            omega,
            mass: 1.0,
            coupling: coupling_constant(&p, 1.0).unwrap(),
        }
    }

    fn tau(temperature: f64) -> ThermalTime {
        ThermalTime::from_temperature(&params(), temperature).unwrap()
    }

    #[test]
    fn amplitude_vanishes_at_zero_time() {
        let a = displacement_amplitude(0.0, &osc(10.0), &params()).unwrap();
        assert_eq!(a, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn amplitude_vanishes_at_common_period() {
        // omega = 2*Omega and t = 2*pi/Omega make both exponents full turns
        let p = params();
        let t = 2.0 * std::f64::consts::PI / p.omega;
        let a = displacement_amplitude(t, &osc(2.0), &p).unwrap();
        assert!(a.norm() < 1e-13, "|alpha| = {}", a.norm());
    }

    #[test]
    fn amplitude_rejects_resonance_and_negative_time() {
        assert!(matches!(
            displacement_amplitude(1.0, &osc(1.0), &params()),
            Err(IndicatorError::Resonant { .. })
        ));
        assert!(displacement_amplitude(-0.1, &osc(10.0), &params()).is_err());
    }

    #[test]
    fn amplitude_matches_reference_value() {
        // ħ=m=M=γ̄₀=1, Ω=1, ω=10, t=0.3 (mpmath, 18 digits)
        let a = displacement_amplitude(0.3, &osc(10.0), &params()).unwrap();
        assert!((a.re - 0.049_484_122_930_596_974_3).abs() < 1e-15);
        assert!((a.im - (-0.004_181_604_649_450_684_0)).abs() < 1e-15);
        assert!((a.norm_sqr() - 0.002_466_164_239_654_740_87).abs() < 1e-16);
    }

    #[test]
    fn amplitude_matches_driven_mode_quadrature() {
        // Independent route: alpha(t) = -i C/sqrt(2 ħ m ω) ∫₀ᵗ e^{iωs} cos(Ωs) ds
        // by composite Simpson.
        let p = params();
        let o = osc(10.0);
        for t in [0.3, 1.7, 6.1] {
            let n = 40_000;
            let h = t / n as f64;
            let g = |s: f64| {
                let e = Complex64::new(0.0, o.omega * s).exp();
                e * (p.omega * s).cos()
            };
            let mut integral = g(0.0) + g(t);
            for k in 1..n {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                integral += w * g(k as f64 * h);
            }
            integral *= h / 3.0;
            let want = Complex64::new(0.0, -1.0) * o.coupling
                / (2.0 * p.hbar * o.mass * o.omega).sqrt()
                * integral;
            let got = displacement_amplitude(t, &o, &p).unwrap();
            assert!((got - want).norm() < 1e-10, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn term_ratio_is_squared_coth() {
        let th = tau(2.0);
        for t in [0.2, 1.0, 4.0] {
            let fg = decoherence_term(t, &osc(10.0), &th, &params()).unwrap();
            let fb = overlap_term(t, &osc(10.0), &th, &params()).unwrap();
            let coth = th.coth_factor(10.0);
            assert!((fg / fb - coth * coth).abs() <= 1e-12 * coth * coth);
            assert!(fb <= fg);
        }
    }

    #[test]
    fn terms_degenerate_at_low_temperature() {
        let th = tau(0.025); // tau_t*omega = 200
        let fg = decoherence_term(1.0, &osc(10.0), &th, &params()).unwrap();
        let fb = overlap_term(1.0, &osc(10.0), &th, &params()).unwrap();
        assert!((fg / fb - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn high_temperature_leading_order() {
        // tau_t*omega = 0.01: f_gamma ≈ |alpha|²/(tau_t omega) to 1e-4 relative
        let p = params();
        let th = ThermalTime::from_temperature(&p, 100.0).unwrap(); // tau_t = 0.005
        let o = osc(2.0);
        let t = 0.05;
        let fg = decoherence_term(t, &o, &th, &p).unwrap();
        let a2 = displacement_amplitude(t, &o, &p).unwrap().norm_sqr();
        let lead = a2 / (th.tau_t * o.omega);
        assert!(((fg - lead) / fg).abs() < 1e-4);
        // and f_b -> tau_t omega |alpha|²
        let fb = overlap_term(t, &o, &th, &p).unwrap();
        let lead_b = th.tau_t * o.omega * a2;
        assert!(((fb - lead_b) / fb).abs() < 1e-4);
    }

    fn spec(seed: u64) -> EnvironmentSpec {
        EnvironmentSpec::new(10.0, 20.0, 1.0, 0.1, 3, 2, 2, seed).unwrap()
    }

    #[test]
    fn sampling_is_deterministic_and_partitioned() {
        let p = params();
        let (u1, o1) = sample_environment(&spec(7), &p).unwrap();
        let (u2, o2) = sample_environment(&spec(7), &p).unwrap();
        assert_eq!(u1, u2);
        assert_eq!(o1, o2);
        assert_eq!(u1.len(), 3);
        assert_eq!(o1.len(), 2);
        assert!(o1.iter().all(|m| m.len() == 2));
        assert_eq!(o1[0].label, MacLabel::Observed(0));
        // different seed, different draw
        let (u3, _) = sample_environment(&spec(8), &p).unwrap();
        assert_ne!(u1, u3);
        // all 3+2+2 frequencies distinct
        let mut all: Vec<f64> = u1.oscillators.iter().map(|o| o.omega).collect();
        for m in &o1 {
            all.extend(m.oscillators.iter().map(|o| o.omega));
        }
        for i in 0..all.len() {
            for j in 0..i {
                assert_ne!(all[i], all[j]);
            }
        }
    }

    #[test]
    fn sampling_rejects_window_at_or_below_resonance() {
        let p = params();
        let bad = EnvironmentSpec::new(0.5, 20.0, 1.0, 0.1, 3, 2, 2, 7).unwrap();
        assert!(matches!(
            sample_environment(&bad, &p),
            Err(IndicatorError::WindowBelowSystemFrequency { .. })
        ));
    }

    #[test]
    fn sampled_frequency_moments_match_uniform_law() {
        let p = params();
        let s = EnvironmentSpec::new(10.0, 20.0, 1.0, 0.1, 100_000, 1, 1, 2024).unwrap();
        let (u, _) = sample_environment(&s, &p).unwrap();
        let n = u.len() as f64;
        let mean: f64 = u.oscillators.iter().map(|o| o.omega).sum::<f64>() / n;
        let width = s.omega_u - s.omega_l;
        let tol = 3.0 * (width / 12.0f64.sqrt()) / n.sqrt();
        assert!((mean - 15.0).abs() < tol, "mean {mean}, tol {tol}");
    }

    #[test]
    fn factor_trivial_cases() {
        let p = params();
        let th = tau(1.0);
        let mac = Macrofraction {
            oscillators: vec![osc(10.0), osc(12.0)],
            label: MacLabel::Unobserved,
        };
        let zero_sep = Separation::new(0.0).unwrap();
        assert_eq!(
            decoherence_factor(1.0, zero_sep, &mac, &th, &p).unwrap(),
            1.0
        );
        let sep = Separation::new(0.7).unwrap();
        assert_eq!(decoherence_factor(0.0, sep, &mac, &th, &p).unwrap(), 1.0);
        assert_eq!(generalized_overlap(0.0, sep, &mac, &th, &p).unwrap(), 1.0);
        assert!(Separation::new(-1.0).is_err());
    }

    #[test]
    fn single_oscillator_exponent_identity() {
        let p = params();
        let th = tau(1.0);
        let sep = Separation::new(0.7).unwrap();
        let mac = Macrofraction {
            oscillators: vec![osc(10.0)],
            label: MacLabel::Unobserved,
        };
        let t = 1.3;
        let f = decoherence_term(t, &osc(10.0), &th, &p).unwrap();
        let minus_log = -decoherence_factor(t, sep, &mac, &th, &p).unwrap().ln();
        assert!((minus_log - 0.5 * 0.49 * f).abs() < 1e-15);
    }

    #[test]
    fn overlap_dominates_decoherence_factor() {
        let p = params();
        let th = tau(5.0);
        let sep = Separation::new(1.0).unwrap();
        let (u, _) = sample_environment(&spec(11), &p).unwrap();
        for t in [0.1, 0.9, 3.0] {
            let g = decoherence_factor(t, sep, &u, &th, &p).unwrap();
            let b = generalized_overlap(t, sep, &u, &th, &p).unwrap();
            assert!(b >= g);
            assert!(g > 0.0 && g <= 1.0);
            assert!(b > 0.0 && b <= 1.0);
        }
    }

    #[test]
    fn low_temperature_indicators_coincide() {
        let p = params();
        let th = tau(0.2); // tau_t >= 2.5, tau_t*omega_l >= 25
        let sep = Separation::new(1.0).unwrap();
        let (u, _) = sample_environment(&spec(5), &p).unwrap();
        let g = decoherence_factor(1.0, sep, &u, &th, &p).unwrap();
        let b = generalized_overlap(1.0, sep, &u, &th, &p).unwrap();
        assert!((g - b).abs() <= 1e-12);
    }

    #[test]
    fn factorization_over_partitions() {
        let p = params();
        let th = tau(1.0);
        let sep = Separation::new(0.9).unwrap();
        let s = EnvironmentSpec::new(10.0, 20.0, 1.0, 1.0, 40, 1, 1, 31).unwrap();
        let (u, _) = sample_environment(&s, &p).unwrap();
        let (left, right) = u.oscillators.split_at(17);
        let m_all = u.clone();
        let m_l = Macrofraction {
            oscillators: left.to_vec(),
            label: MacLabel::Unobserved,
        };
        let m_r = Macrofraction {
            oscillators: right.to_vec(),
            label: MacLabel::Unobserved,
        };
        let t = 0.8;
        let whole = decoherence_factor(t, sep, &m_all, &th, &p).unwrap();
        let product = decoherence_factor(t, sep, &m_l, &th, &p).unwrap()
            * decoherence_factor(t, sep, &m_r, &th, &p).unwrap();
        assert!(((whole - product) / whole).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn appending_an_oscillator_never_increases_indicators(
            seed in 0u64..1000, t in 0.01f64..5.0, extra in 10.01f64..19.99
        ) {
            let p = params();
            let th = tau(1.0);
            let sep = Separation::new(1.0).unwrap();
            let s = EnvironmentSpec::new(10.0, 20.0, 1.0, 1.0, 5, 1, 1, seed).unwrap();
            let (mut u, _) = sample_environment(&s, &p).unwrap();
            let before = decoherence_factor(t, sep, &u, &th, &p).unwrap();
            let before_b = generalized_overlap(t, sep, &u, &th, &p).unwrap();
            u.oscillators.push(osc(extra));
            let after = decoherence_factor(t, sep, &u, &th, &p).unwrap();
            let after_b = generalized_overlap(t, sep, &u, &th, &p).unwrap();
            prop_assert!(after <= before);
            prop_assert!(after_b <= before_b);
        }

        #[test]
        fn exponent_is_exactly_quadratic_in_separation(
            seed in 0u64..1000, t in 0.01f64..5.0, dx in 0.01f64..3.0
        ) {
            let p = params();
            let th = tau(1.0);
            let s = EnvironmentSpec::new(10.0, 20.0, 1.0, 1.0, 8, 1, 1, seed).unwrap();
            let (u, _) = sample_environment(&s, &p).unwrap();
            let e1 = decoherence_exponent(t, Separation::new(dx).unwrap(), &u, &th, &p).unwrap();
            let e2 = decoherence_exponent(t, Separation::new(2.0 * dx).unwrap(), &u, &th, &p).unwrap();
            prop_assert!(((e2 - 4.0 * e1) / e2.max(1e-300)).abs() < 1e-12);
        }
    }

    #[test]
    fn series_contract() {
        let p = params();
        let th = tau(1.0);
        let sep = Separation::new(1.0).unwrap();
        let s = spec(3);
        let (u, o) = sample_environment(&s, &p).unwrap();
        let series = indicator_series(&[0.0], sep, &u, &o, &th, &p, &s).unwrap();
        assert_eq!(series.gamma_abs, vec![1.0]);
        assert!(series.overlaps.iter().all(|row| row == &vec![1.0]));
        assert!(matches!(
            indicator_series(&[], sep, &u, &o, &th, &p, &s),
            Err(IndicatorError::EmptyGrid)
        ));
        assert!(matches!(
            indicator_series(&[1.0, 0.5], sep, &u, &o, &th, &p, &s),
            Err(IndicatorError::NonIncreasingGrid(1))
        ));
        // batch values match pointwise single evaluations
        let grid = [0.0, 0.4, 1.1, 2.0];
        let series = indicator_series(&grid, sep, &u, &o, &th, &p, &s).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            let g = decoherence_factor(t, sep, &u, &th, &p).unwrap();
            assert_eq!(series.gamma_abs[i], g);
            for (k, mac) in o.iter().enumerate() {
                let b = generalized_overlap(t, sep, mac, &th, &p).unwrap();
                assert_eq!(series.overlaps[k][i], b);
            }
        }
    }
}
