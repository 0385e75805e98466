//! Decoherence and distinguishability indicators for a massive harmonic
//! oscillator linearly coupled to a bath of oscillators with random
//! frequencies.
//!
//! The crate is organized around the pipeline used to certify when the
//! joint system–environment state develops redundant, read-out-without-
//! disturbance records of the central oscillator position:
//!
//! * [`params`] — model constants, bath ensemble descriptions, temperature
//!   regime classification.
//! * [`special`] — sine/cosine integrals and the four-term signed
//!   combinations (with short- and long-time expansions) that the
//!   closed-form ensemble means are built from.
//! * [`quad`] — adaptive Gauss–Kronrod quadrature, used as the independent
//!   oracle for every closed form in [`means`].
//! * [`indicators`] — the per-oscillator displacement amplitude, the
//!   decoherence and overlap exponent terms, and their macrofraction
//!   aggregates over sampled environments.
//! * [`means`] — closed-form ensemble means of the indicator terms over a
//!   uniform frequency distribution, their short-time coefficients and
//!   long-time plateaus, plus the quadrature route.
//! * [`regime`] — Gaussian decay timescales, macrofraction-size bounds,
//!   temperature constraints, and the end-to-end verdict report.

pub mod indicators;
pub mod means;
pub mod params;
pub mod quad;
pub mod regime;
pub mod special;

pub use indicators::{
    decoherence_factor, displacement_amplitude, generalized_overlap, indicator_series,
    sample_environment, IndicatorSeries, MacLabel, Macrofraction, Oscillator, Separation,
};
pub use means::{
    asymptote_constants, mean_exact, mean_long_time, mean_quadrature, mean_short_time,
    short_time_coefficient, AsymptoteConstants, MeanIntegrand, MeanKind, ShortTimeCoefficient,
};
pub use params::{
    classify_regime, coupling_constant, EnvironmentSpec, ModelParams, TemperatureRegime,
    ThermalTime,
};
pub use regime::{
    gaussian_timescale, macrofraction_bound, macrofraction_ratio, sbs_verdict,
    temperature_constraint, MacBound, RegimeReport, Timescales, VerdictWindow,
};
pub use special::{FrequencyWindow, SignPattern};
