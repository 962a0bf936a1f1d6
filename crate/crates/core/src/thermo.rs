//! Equilibrium thermodynamics from a diagonalized Hamiltonian.
//!
//! Everything is an analytic function of the eigenvalues (and, for the
//! magnetization, of the eigenvectors): Gibbs weights are evaluated with
//! energies shifted by the ground energy, and β-derivatives of `ln Z` are
//! replaced by the corresponding energy moments.
//!
//! * `S/k_B = ln Z + β⟨ε⟩`
//! * `C/k_B = β² (⟨ε²⟩ - ⟨ε⟩²)`
//! * `M ∝ ⟨Σ I^z⟩`, reported as `polarization = -2⟨Σ I^z⟩/N`, positive for
//!   spins aligned with the field.

use crate::error::{Error, Result};
use crate::hamiltonian::ChainGeometry;
use crate::spectrum::Spectrum;
use crate::spin;

/// Largest inverse temperature accepted anywhere in the crate.
pub const BETA_MAX: f64 = 1e6;

/// Planck constant, J·s (exact, SI 2019).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Boltzmann constant, J/K (exact, SI 2019).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Thermodynamic state of a spectrum at one inverse temperature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoPoint {
    pub beta: f64,
    pub log_z: f64,
    /// `S / k_B`
    pub entropy: f64,
    /// `C / k_B`
    pub heat_capacity: f64,
    /// `⟨Σ I^z⟩`
    pub mean_iz: f64,
    /// `-2⟨Σ I^z⟩ / N`
    pub polarization: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Magnetization {
    pub mean_iz: f64,
    pub polarization: f64,
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && (0.0..=BETA_MAX).contains(&beta)) {
        return Err(Error::param(format!(
            "beta must lie in [0, {BETA_MAX:e}], got {beta}"
        )));
    }
    Ok(())
}

/// Boltzmann factors of a spectrum relative to its ground energy.
pub(crate) struct Boltzmann {
    /// Ground energy used as the shift.
    pub e0: f64,
    /// Normalized weights, same order as the eigenvalues.
    pub weights: Vec<f64>,
    /// `ln Σ_i exp(-β (λ_i - λ_0))`
    pub log_sum: f64,
    /// `⟨λ - λ_0⟩`
    pub mean_shifted: f64,
}

impl Boltzmann {
    pub fn new(eigenvalues: &[f64], beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let e0 = eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if !e0.is_finite() {
            return Err(Error::numeric("spectrum contains non-finite values"));
        }
        let mut weights: Vec<f64> = eigenvalues
            .iter()
            .map(|&e| (-beta * (e - e0)).exp())
            .collect();
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::numeric("spectrum contains non-finite values"));
        }
        // ln(1 + x) keeps relative precision when excited weights are tiny.
        let ground = eigenvalues.iter().position(|&e| e == e0).unwrap_or(0);
        let excited: f64 = weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != ground)
            .map(|(_, w)| w)
            .sum();
        let sum = 1.0 + excited;
        let mut mean_shifted = 0.0;
        for (w, &e) in weights.iter_mut().zip(eigenvalues) {
            *w /= sum;
            mean_shifted += *w * (e - e0);
        }
        if !mean_shifted.is_finite() {
            return Err(Error::numeric("thermal average overflows the spectrum range"));
        }
        Ok(Self {
            e0,
            weights,
            log_sum: excited.ln_1p(),
            mean_shifted,
        })
    }

    pub fn entropy(&self, beta: f64) -> f64 {
        self.log_sum + beta * self.mean_shifted
    }

    pub fn heat_capacity(&self, eigenvalues: &[f64], beta: f64) -> f64 {
        let (e0, mean) = (self.e0, self.mean_shifted);
        let var: f64 = self
            .weights
            .iter()
            .zip(eigenvalues)
            .map(|(w, &e)| {
                let d = e - e0 - mean;
                w * d * d
            })
            .sum();
        beta * beta * var
    }
}

/// Normalized Gibbs weights `exp(-β λ_i) / Z`.
pub fn gibbs_weights(spectrum: &Spectrum, beta: f64) -> Result<Vec<f64>> {
    Ok(Boltzmann::new(spectrum.eigenvalues(), beta)?.weights)
}

/// `ln Z` with `Z = Σ_i exp(-β λ_i)`.
pub fn log_partition(spectrum: &Spectrum, beta: f64) -> Result<f64> {
    let b = Boltzmann::new(spectrum.eigenvalues(), beta)?;
    Ok(b.log_sum - beta * spectrum.ground_energy())
}

/// Mean energy `⟨ε⟩` in units of `D12`.
pub fn mean_energy(spectrum: &Spectrum, beta: f64) -> Result<f64> {
    let b = Boltzmann::new(spectrum.eigenvalues(), beta)?;
    Ok(spectrum.ground_energy() + b.mean_shifted)
}

/// `S / k_B = ln Z + β⟨ε⟩`.
pub fn entropy(spectrum: &Spectrum, beta: f64) -> Result<f64> {
    Ok(Boltzmann::new(spectrum.eigenvalues(), beta)?.entropy(beta))
}

/// `C / k_B = β² Var(ε)`.
pub fn heat_capacity(spectrum: &Spectrum, beta: f64) -> Result<f64> {
    let ev = spectrum.eigenvalues();
    Ok(Boltzmann::new(ev, beta)?.heat_capacity(ev, beta))
}

/// Diagonal expectation `⟨v_i| Σ I^z |v_i⟩` for every eigenvector.
pub fn iz_expectations(spectrum: &Spectrum) -> Vec<f64> {
    let diag = spin::total_iz_diagonal(spectrum.n_spins());
    let v = spectrum.eigenvectors();
    (0..spectrum.dim())
        .map(|c| {
            diag.iter()
                .enumerate()
                .map(|(r, m)| m * v[(r, c)].norm_sqr())
                .sum()
        })
        .collect()
}

pub(crate) fn magnetization_from(weights: &[f64], iz: &[f64], n_spins: usize) -> Magnetization {
    let mean_iz: f64 = weights.iter().zip(iz).map(|(w, m)| w * m).sum();
    Magnetization {
        mean_iz,
        polarization: -2.0 * mean_iz / n_spins as f64,
    }
}

fn check_matching(spectrum: &Spectrum, geometry: &ChainGeometry) -> Result<()> {
    if spectrum.n_spins() != geometry.n_spins() {
        return Err(Error::param(format!(
            "spectrum has {} spins, geometry has {}",
            spectrum.n_spins(),
            geometry.n_spins()
        )));
    }
    Ok(())
}

/// Gibbs expectation of `Σ I^z` and the normalized polarization.
pub fn magnetization(
    spectrum: &Spectrum,
    beta: f64,
    geometry: &ChainGeometry,
) -> Result<Magnetization> {
    check_matching(spectrum, geometry)?;
    let b = Boltzmann::new(spectrum.eigenvalues(), beta)?;
    Ok(magnetization_from(
        &b.weights,
        &iz_expectations(spectrum),
        geometry.n_spins(),
    ))
}

/// All thermodynamic quantities at once.
pub fn thermo_point(spectrum: &Spectrum, beta: f64, geometry: &ChainGeometry) -> Result<ThermoPoint> {
    check_matching(spectrum, geometry)?;
    let ev = spectrum.eigenvalues();
    let b = Boltzmann::new(ev, beta)?;
    let m = magnetization_from(&b.weights, &iz_expectations(spectrum), geometry.n_spins());
    Ok(ThermoPoint {
        beta,
        log_z: b.log_sum - beta * spectrum.ground_energy(),
        entropy: b.entropy(beta),
        heat_capacity: b.heat_capacity(ev, beta),
        mean_iz: m.mean_iz,
        polarization: m.polarization,
    })
}

/// Spin temperature in kelvin for a dipolar constant given as a cyclic
/// frequency `d12_hz`: `T = h·d12 / (k_B β)`.
pub fn kelvin_from_beta(d12_hz: f64, beta: f64) -> Result<f64> {
    if !(d12_hz.is_finite() && d12_hz > 0.0 && beta.is_finite() && beta > 0.0) {
        return Err(Error::param(format!(
            "d12_hz and beta must be > 0, got {d12_hz} and {beta}"
        )));
    }
    Ok(PLANCK * d12_hz / (BOLTZMANN * beta))
}
