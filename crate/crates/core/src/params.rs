//! Model constants, bath ensemble descriptions, and temperature regimes.
//!
//! The default unit system is natural units ħ = k_B = 1, but both constants
//! stay explicit parameters so that every formula in the crate reads exactly
//! like its dimensional form and SI runs remain possible.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Factor operationalizing the "much greater / much smaller" conditions of
/// the temperature-regime definitions: low temperature means
/// `kB*T <= hbar*omega_L / REGIME_SEPARATION_FACTOR`, high temperature means
/// `kB*T >= REGIME_SEPARATION_FACTOR * hbar*omega_U`.
pub const REGIME_SEPARATION_FACTOR: f64 = 10.0;

/// Factor operationalizing the fast-environment condition
/// `omega_L >= FAST_ENVIRONMENT_FACTOR * Omega`.
pub const FAST_ENVIRONMENT_FACTOR: f64 = 10.0;

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("temperature must be non-negative, got {0}")]
    NegativeTemperature(f64),
    #[error("frequency window requires 0 < omega_L < omega_U, got [{0}, {1}]")]
    BadWindow(f64, f64),
    #[error("{name} must be at least 1, got {value}")]
    ZeroCount { name: &'static str, value: usize },
}

fn require_positive(name: &'static str, value: f64) -> Result<f64, ParamsError> {
    if !value.is_finite() {
        return Err(ParamsError::NonFinite { name, value });
    }
    if value <= 0.0 {
        return Err(ParamsError::NonPositive { name, value });
    }
    Ok(value)
}

/// Constants of the central oscillator and the unit system.
///
/// `omega` is the renormalized central frequency; the frequency shift from
/// the bath couplings is assumed to be already absorbed into it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Mass of the central oscillator.
    pub mass: f64,
    /// Renormalized central frequency Ω (rad / time).
    pub omega: f64,
    /// Coupling scale γ̄₀ (frequency) entering the coupling convention.
    pub gamma0_bar: f64,
    /// Reduced Planck constant.
    pub hbar: f64,
    /// Boltzmann constant.
    pub k_b: f64,
}

impl ModelParams {
    pub fn new(
        mass: f64,
        omega: f64,
        gamma0_bar: f64,
        hbar: f64,
        k_b: f64,
    ) -> Result<Self, ParamsError> {
        let p = Self {
            mass,
            omega,
            gamma0_bar,
            hbar,
            k_b,
        };
        p.validate()?;
        Ok(p)
    }

    /// Natural units ħ = k_B = 1.
    pub fn natural(mass: f64, omega: f64, gamma0_bar: f64) -> Result<Self, ParamsError> {
        Self::new(mass, omega, gamma0_bar, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        require_positive("mass", self.mass)?;
        require_positive("omega", self.omega)?;
        require_positive("gamma0_bar", self.gamma0_bar)?;
        require_positive("hbar", self.hbar)?;
        require_positive("k_b", self.k_b)?;
        Ok(())
    }
}

/// Bath ensemble description: the frequency window, the common oscillator
/// mass, the temperature, the macrofraction partition sizes, and the RNG
/// seed that makes every sampled environment reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentSpec {
    /// Lower bound of the uniform frequency window.
    pub omega_l: f64,
    /// Upper bound of the uniform frequency window.
    pub omega_u: f64,
    /// Common mass of the bath oscillators.
    pub mass: f64,
    /// Temperature (>= 0; zero selects the strict low-temperature limit).
    pub temperature: f64,
    /// Number of traced-over oscillators.
    pub n_unobserved: usize,
    /// Number of oscillators in each observed macrofraction.
    pub n_observed_per_mac: usize,
    /// Number of observed macrofractions.
    pub n_macrofractions: usize,
    /// 64-bit seed for the frequency draws.
    pub seed: u64,
}

impl EnvironmentSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omega_l: f64,
        omega_u: f64,
        mass: f64,
        temperature: f64,
        n_unobserved: usize,
        n_observed_per_mac: usize,
        n_macrofractions: usize,
        seed: u64,
    ) -> Result<Self, ParamsError> {
        let s = Self {
            omega_l,
            omega_u,
            mass,
            temperature,
            n_unobserved,
            n_observed_per_mac,
            n_macrofractions,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        if !(self.omega_l > 0.0 && self.omega_l < self.omega_u && self.omega_u.is_finite()) {
            return Err(ParamsError::BadWindow(self.omega_l, self.omega_u));
        }
        require_positive("bath mass", self.mass)?;
        if !self.temperature.is_finite() || self.temperature < 0.0 {
            return Err(ParamsError::NegativeTemperature(self.temperature));
        }
        for (name, value) in [
            ("n_unobserved", self.n_unobserved),
            ("n_observed_per_mac", self.n_observed_per_mac),
            ("n_macrofractions", self.n_macrofractions),
        ] {
            if value == 0 {
                return Err(ParamsError::ZeroCount { name, value });
            }
        }
        Ok(())
    }

    /// True when every bath frequency sits far above the central frequency
    /// (`omega_L >= FAST_ENVIRONMENT_FACTOR * Omega`).
    pub fn is_fast(&self, params: &ModelParams) -> bool {
        self.omega_l >= FAST_ENVIRONMENT_FACTOR * params.omega
    }

    pub fn delta_omega(&self) -> f64 {
        self.omega_u - self.omega_l
    }
}

/// Thermal time ħ/(2 k_B T), stored together with the temperature that
/// produced it. `T = 0` is admitted and represented by an infinite thermal
/// time; the hyperbolic factors then evaluate to exactly 1 and the infinity
/// itself never enters arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalTime {
    pub tau_t: f64,
    pub temperature: f64,
}

impl ThermalTime {
    pub fn from_temperature(params: &ModelParams, temperature: f64) -> Result<Self, ParamsError> {
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(ParamsError::NegativeTemperature(temperature));
        }
        let tau_t = if temperature == 0.0 {
            f64::INFINITY
        } else {
            params.hbar / (2.0 * params.k_b * temperature)
        };
        Ok(Self { tau_t, temperature })
    }

    /// coth(τ_T ω): the mean-initial-energy factor of the decoherence term.
    /// Returns exactly 1 in the zero-temperature limit.
    pub fn coth_factor(&self, omega: f64) -> f64 {
        if self.tau_t.is_infinite() {
            return 1.0;
        }
        let x = self.tau_t * omega;
        if x > 19.0 {
            // coth(x) - 1 < 2^-53 here; avoid the division
            1.0
        } else {
            1.0 / x.tanh()
        }
    }

    /// tanh(τ_T ω): the initial-state purity factor of the overlap term.
    pub fn tanh_factor(&self, omega: f64) -> f64 {
        if self.tau_t.is_infinite() {
            return 1.0;
        }
        (self.tau_t * omega).tanh()
    }
}

/// Classification of a temperature relative to the bath frequency window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TemperatureRegime {
    LowT,
    HighT,
    Intermediate,
}

/// Coupling constant `C = 2 sqrt(M m γ̄₀ / π)` for a bath oscillator of mass
/// `m` — the convention under which `C²/m` is mass-independent.
pub fn coupling_constant(params: &ModelParams, bath_mass: f64) -> Result<f64, ParamsError> {
    params.validate()?;
    require_positive("bath mass", bath_mass)?;
    Ok(2.0 * (params.mass * bath_mass * params.gamma0_bar / std::f64::consts::PI).sqrt())
}

/// Classify the temperature of `spec` against the factor-of-ten thresholds.
pub fn classify_regime(spec: &EnvironmentSpec, params: &ModelParams) -> TemperatureRegime {
    classify_regime_with_factor(spec, params, REGIME_SEPARATION_FACTOR)
}

/// Same as [`classify_regime`] with an explicit separation factor.
pub fn classify_regime_with_factor(
    spec: &EnvironmentSpec,
    params: &ModelParams,
    factor: f64,
) -> TemperatureRegime {
    let thermal = params.k_b * spec.temperature;
    if thermal <= params.hbar * spec.omega_l / factor {
        TemperatureRegime::LowT
    } else if thermal >= factor * params.hbar * spec.omega_u {
        TemperatureRegime::HighT
    } else {
        TemperatureRegime::Intermediate
    }
}
