//! First-principles validation of the per-oscillator indicator formulas by
//! direct density-matrix computation in a truncated Fock space.
//!
//! The closed forms checked here assert that a thermally occupied bath mode,
//! displaced conditionally on the central position branch, yields
//! `-ln|Γ| = (ΔX²/2)|α|² coth(τ_T ω)` and `-ln B = (ΔX²/2)|α|² tanh(τ_T ω)`.
//! This crate rebuilds both quantities from matrices: thermal states,
//! displacement operators from the matrix exponential of their generator,
//! harmonic rotation, trace overlaps, and the generalized overlap
//! `tr sqrt(sqrt(ρ₁) ρ₂ sqrt(ρ₁))` via Hermitian eigendecompositions.
//! Everything is dense and deliberately free of the algebraic shortcuts the
//! formulas themselves rely on.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;
use thiserror::Error;

use sbs_core::indicators::{displacement_amplitude, IndicatorError, Oscillator};
use sbs_core::params::{ModelParams, ParamsError, ThermalTime};

#[derive(Debug, Error)]
pub enum FockError {
    #[error("mean occupation must be non-negative and finite, got {0}")]
    BadOccupation(f64),
    #[error("dimension {dim} leaves trace deficit {deficit:.3e} above the budget {budget:.3e}")]
    DimensionTooSmall {
        dim: usize,
        deficit: f64,
        budget: f64,
    },
    #[error("displacement |alpha|^2 = {alpha_sq:.3e} too large for dimension {dim} (guard |alpha|^2 <= dim/10)")]
    DisplacementTooLarge { alpha_sq: f64, dim: usize },
    #[error(
        "state lost trace {deficit:.3e}, above 10x the budget {budget:.3e}; increase the dimension"
    )]
    TruncationExceeded { deficit: f64, budget: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {0:.3e} below tolerance")]
    NotPositiveSemidefinite(f64),
    #[error(transparent)]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
    #[error(transparent)]
    Indicator(#[from] IndicatorError),
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// Eigenvalues of nominally PSD matrices may round slightly negative; below
/// this they indicate real trouble.
pub const PSD_TOLERANCE: f64 = -1e-9;

/// Hermitian eigendecomposition with the convention `m = V diag(λ) V†`.
///
/// The backend reads the row-major buffer as column-major, so for complex
/// Hermitian input it diagonalizes the transpose (= conjugate); feeding the
/// conjugate restores the stated convention. Pinned by the reconstruction
/// test below.
fn hermitian_eigh(m: &Array2<Complex64>) -> Result<(Array1<f64>, Array2<Complex64>), FockError> {
    let conjugated = m.mapv(|z| z.conj());
    Ok(conjugated.eigh(UPLO::Lower)?)
}

/// Allowed trace loss when truncating bosonic states, and the dimension
/// selection rule derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationBudget {
    pub max_trace_deficit: f64,
}

impl Default for TruncationBudget {
    fn default() -> Self {
        Self {
            max_trace_deficit: 1e-8,
        }
    }
}

impl TruncationBudget {
    pub fn new(max_trace_deficit: f64) -> Self {
        Self { max_trace_deficit }
    }

    /// Dimension holding a thermal tail below the budget plus headroom for a
    /// displacement of modulus `max_disp`: geometric-tail term plus
    /// `4 |α|² + 20`.
    pub fn dimension_for(&self, nbar: f64, max_disp: f64) -> usize {
        let thermal = if nbar > 0.0 {
            // q^D <= budget with q = nbar/(nbar+1)
            (self.max_trace_deficit.ln() / (nbar / (nbar + 1.0)).ln()).ceil() as usize
        } else {
            0
        };
        thermal + (4.0 * max_disp * max_disp).ceil() as usize + 20
    }
}

/// Truncated density matrix with its truncation loss.
#[derive(Debug, Clone)]
pub struct FockState {
    pub dim: usize,
    pub matrix: Array2<Complex64>,
    /// 1 - trace: probability weight lost to the truncation.
    pub trace_deficit: f64,
}

impl FockState {
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|n| self.matrix[(n, n)]).sum()
    }

    pub fn purity(&self) -> f64 {
        let m = self.matrix.dot(&self.matrix);
        (0..self.dim).map(|n| m[(n, n)].re).sum()
    }

    /// Position expectation value `tr(ρ x̂)` for a mode of mass `m` and
    /// frequency `ω`: `x̂ = sqrt(ħ/(2 m ω)) (a + a†)`.
    pub fn mean_position(&self, mass: f64, omega: f64, hbar: f64) -> f64 {
        let scale = (hbar / (2.0 * mass * omega)).sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 0..self.dim - 1 {
            let root = ((n + 1) as f64).sqrt();
            // tr(rho a) + tr(rho a†) restricted to the first off-diagonals
            acc += self.matrix[(n, n + 1)] * root + self.matrix[(n + 1, n)] * root;
        }
        scale * acc.re
    }
}

/// Mean thermal occupation `1/(e^{ħω/k_B T} - 1)`; zero at T = 0.
pub fn thermal_nbar(omega: f64, temperature: f64, params: &ModelParams) -> Result<f64, FockError> {
    let tau = ThermalTime::from_temperature(params, temperature)?;
    if tau.tau_t.is_infinite() {
        return Ok(0.0);
    }
    Ok(1.0 / (2.0 * tau.tau_t * omega).exp_m1())
}

/// Thermal state with occupation `nbar` in a `dim`-dimensional Fock space.
/// Populations are the untruncated `(1-q) qⁿ`, so the recorded deficit is
/// the true geometric tail `q^dim`; it must not exceed `max_deficit`.
pub fn thermal_state(nbar: f64, dim: usize, max_deficit: f64) -> Result<FockState, FockError> {
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(FockError::BadOccupation(nbar));
    }
    let q = nbar / (nbar + 1.0);
    let deficit = if nbar > 0.0 {
        (dim as f64 * q.ln()).exp()
    } else {
        0.0
    };
    if deficit > max_deficit {
        return Err(FockError::DimensionTooSmall {
            dim,
            deficit,
            budget: max_deficit,
        });
    }
    let mut matrix = Array2::zeros((dim, dim));
    let mut p = 1.0 / (nbar + 1.0);
    for n in 0..dim {
        matrix[(n, n)] = Complex64::new(p, 0.0);
        p *= q;
    }
    Ok(FockState {
        dim,
        matrix,
        trace_deficit: deficit,
    })
}

/// Displacement operator `exp(α a† - α* a)` on the truncated space, built
/// from the eigendecomposition of its Hermitian generator. Unitary to
/// ~1e-9 while `|α|² <= dim/10`.
pub fn displacement_operator(alpha: Complex64, dim: usize) -> Result<Array2<Complex64>, FockError> {
    let alpha_sq = alpha.norm_sqr();
    if alpha_sq > dim as f64 / 10.0 {
        return Err(FockError::DisplacementTooLarge { alpha_sq, dim });
    }
    // generator G = α a† - α* a = i H with H Hermitian tridiagonal
    let mut h = Array2::<Complex64>::zeros((dim, dim));
    for n in 0..dim - 1 {
        let root = ((n + 1) as f64).sqrt();
        let g = alpha * root; // G[n+1][n]
        h[(n + 1, n)] = Complex64::new(0.0, -1.0) * g;
        h[(n, n + 1)] = (Complex64::new(0.0, -1.0) * g).conj();
    }
    let (vals, vecs) = hermitian_eigh(&h)?;
    Ok(unitary_from_phases(&vals, &vecs))
}

/// V diag(e^{iλ}) V† for real eigenvalues λ and unitary V.
fn unitary_from_phases(vals: &Array1<f64>, vecs: &Array2<Complex64>) -> Array2<Complex64> {
    let dim = vals.len();
    let mut scaled = vecs.clone();
    for (j, &lambda) in vals.iter().enumerate() {
        let phase = Complex64::new(0.0, lambda).exp();
        for i in 0..dim {
            scaled[(i, j)] *= phase;
        }
    }
    let vdag = vecs.t().mapv(|z| z.conj());
    scaled.dot(&vdag)
}

/// Diagonal free rotation `exp(-i H t/ħ)`, `H = (n + 1/2) ħ ω`.
pub fn rotation_operator(omega: f64, t: f64, dim: usize) -> Array2<Complex64> {
    let mut r = Array2::zeros((dim, dim));
    for n in 0..dim {
        r[(n, n)] = Complex64::new(0.0, -(n as f64 + 0.5) * omega * t).exp();
    }
    r
}

fn conjugate(u: &Array2<Complex64>, m: &Array2<Complex64>) -> Array2<Complex64> {
    let udag = u.t().mapv(|z| z.conj());
    u.dot(m).dot(&udag)
}

/// Dimension accommodating both branch displacements of a driven mode at
/// time `t` for the given branch positions.
fn common_dimension(
    t: f64,
    positions: &[f64],
    osc: &Oscillator,
    params: &ModelParams,
    temperature: f64,
    budget: &TruncationBudget,
) -> Result<(usize, f64, Complex64), FockError> {
    let alpha = displacement_amplitude(t, osc, params)?;
    let max_disp = positions
        .iter()
        .fold(0.0f64, |m, &x| m.max((alpha * x).norm()));
    let nbar = thermal_nbar(osc.omega, temperature, params)?;
    Ok((budget.dimension_for(nbar, max_disp), nbar, alpha))
}

/// The bath-mode state conditioned on branch position `x0` at time `t`:
/// rotated displaced thermal state
/// `e^{-iHt/ħ} D(α(t) x₀) ρ_th D†(α(t) x₀) e^{iHt/ħ}`.
pub fn evolved_state(
    x0: f64,
    t: f64,
    osc: &Oscillator,
    params: &ModelParams,
    temperature: f64,
    budget: &TruncationBudget,
) -> Result<FockState, FockError> {
    let (dim, nbar, alpha) = common_dimension(t, &[x0], osc, params, temperature, budget)?;
    evolved_state_with_dim(x0, t, osc, nbar, alpha, dim, budget)
}

fn evolved_state_with_dim(
    x0: f64,
    t: f64,
    osc: &Oscillator,
    nbar: f64,
    alpha: Complex64,
    dim: usize,
    budget: &TruncationBudget,
) -> Result<FockState, FockError> {
    let thermal = thermal_state(nbar, dim, budget.max_trace_deficit)?;
    let d = displacement_operator(alpha * x0, dim)?;
    let displaced = conjugate(&d, &thermal.matrix);
    let r = rotation_operator(osc.omega, t, dim);
    let matrix = conjugate(&r, &displaced);
    let trace: Complex64 = (0..dim).map(|n| matrix[(n, n)]).sum();
    let deficit = 1.0 - trace.re;
    if deficit > 10.0 * budget.max_trace_deficit {
        return Err(FockError::TruncationExceeded {
            deficit,
            budget: budget.max_trace_deficit,
        });
    }
    Ok(FockState {
        dim,
        matrix,
        trace_deficit: deficit,
    })
}

/// Complex per-oscillator decoherence factor
/// `tr[U(x₀;t) ρ_th U†(x₀';t)]` with `U(x;t) = e^{-iHt/ħ} D(α(t) x)`.
/// Only the modulus is physically meaningful here: the position-dependent
/// quadratic phase of the driven evolution is not tracked.
pub fn decoherence_oracle(
    t: f64,
    x0: f64,
    x0p: f64,
    osc: &Oscillator,
    params: &ModelParams,
    temperature: f64,
    budget: &TruncationBudget,
) -> Result<Complex64, FockError> {
    let (dim, nbar, alpha) = common_dimension(t, &[x0, x0p], osc, params, temperature, budget)?;
    let thermal = thermal_state(nbar, dim, budget.max_trace_deficit)?;
    let d1 = displacement_operator(alpha * x0, dim)?;
    let d2 = displacement_operator(alpha * x0p, dim)?;
    let r = rotation_operator(osc.omega, t, dim);
    let u1 = r.dot(&d1);
    let u2dag = r.dot(&d2).t().mapv(|z| z.conj());
    let m = u1.dot(&thermal.matrix).dot(&u2dag);
    Ok((0..dim).map(|n| m[(n, n)]).sum())
}

/// Hermitian square root by eigendecomposition, clipping slightly negative
/// eigenvalues at zero.
fn hermitian_sqrt(m: &Array2<Complex64>) -> Result<Array2<Complex64>, FockError> {
    let (vals, vecs) = hermitian_eigh(m)?;
    let mut scaled = vecs.clone();
    for (j, &lambda) in vals.iter().enumerate() {
        if lambda < PSD_TOLERANCE {
            return Err(FockError::NotPositiveSemidefinite(lambda));
        }
        let root = lambda.max(0.0).sqrt();
        for i in 0..vals.len() {
            scaled[(i, j)] *= root;
        }
    }
    let vdag = vecs.t().mapv(|z| z.conj());
    Ok(scaled.dot(&vdag))
}

/// Generalized overlap `B(ρ₁, ρ₂) = tr sqrt(sqrt(ρ₁) ρ₂ sqrt(ρ₁))` of the
/// two branch-conditioned states.
pub fn overlap_oracle(
    t: f64,
    x0: f64,
    x0p: f64,
    osc: &Oscillator,
    params: &ModelParams,
    temperature: f64,
    budget: &TruncationBudget,
) -> Result<f64, FockError> {
    let (dim, nbar, alpha) = common_dimension(t, &[x0, x0p], osc, params, temperature, budget)?;
    let rho1 = evolved_state_with_dim(x0, t, osc, nbar, alpha, dim, budget)?;
    let rho2 = evolved_state_with_dim(x0p, t, osc, nbar, alpha, dim, budget)?;
    generalized_overlap_of(&rho1.matrix, &rho2.matrix)
}

/// The overlap functional itself, for callers that already hold states.
pub fn generalized_overlap_of(
    rho1: &Array2<Complex64>,
    rho2: &Array2<Complex64>,
) -> Result<f64, FockError> {
    let sqrt1 = hermitian_sqrt(rho1)?;
    let inner = sqrt1.dot(rho2).dot(&sqrt1);
    let (vals, _) = hermitian_eigh(&inner)?;
    let mut b = 0.0;
    for &lambda in vals.iter() {
        if lambda < PSD_TOLERANCE {
            return Err(FockError::NotPositiveSemidefinite(lambda));
        }
        b += lambda.max(0.0).sqrt();
    }
    Ok(b)
}
