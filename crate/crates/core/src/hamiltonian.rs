//! Zeeman and dipolar Hamiltonians of a collinear, equally spaced chain.
//!
//! Every pair shares the polar angle `theta` and azimuth `phi` of the chain
//! axis relative to the field, and couples with `b_jk = 1/|j-k|^3` in units
//! of the nearest-neighbour constant `D12`. The dipolar term is kept in full:
//! secular, single-flip and double-flip families are all present.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{self, site_iz, site_mask, OperatorMatrix};
use crate::MAX_SPINS;

/// Chain length and field orientation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainGeometry {
    n_spins: usize,
    theta: f64,
    phi: f64,
}

impl ChainGeometry {
    pub fn new(n_spins: usize, theta: f64, phi: f64) -> Result<Self> {
        if !(2..=MAX_SPINS).contains(&n_spins) {
            return Err(Error::param(format!(
                "chain length {n_spins} outside 2..={MAX_SPINS}"
            )));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::param(format!("theta {theta} outside [0, pi]")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::param(format!("phi {phi} outside [0, 2pi)")));
        }
        Ok(Self {
            n_spins,
            theta,
            phi,
        })
    }

    /// Field perpendicular to the chain (`theta = pi/2, phi = 0`).
    pub fn perpendicular(n_spins: usize) -> Result<Self> {
        Self::new(n_spins, PI / 2.0, 0.0)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins
    }

    /// Dipolar coupling `b_jk = 1/|j-k|^3` (1-indexed sites, `j != k`).
    pub fn coupling(&self, j: usize, k: usize) -> f64 {
        debug_assert!(j != k);
        let d = j.abs_diff(k) as f64;
        1.0 / (d * d * d)
    }

    /// All pairs `(j, k)` with `j < k`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n_spins;
        (1..=n).flat_map(move |j| ((j + 1)..=n).map(move |k| (j, k)))
    }
}

/// Zeeman energy `omega0 / D12`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct FieldSpec(f64);

impl FieldSpec {
    pub fn new(omega0: f64) -> Result<Self> {
        if !omega0.is_finite() || omega0 < 0.0 {
            return Err(Error::param(format!(
                "omega0 must be finite and >= 0, got {omega0}"
            )));
        }
        Ok(Self(omega0))
    }

    pub fn omega0(&self) -> f64 {
        self.0
    }
}

/// `omega0 * Σ_k I_k^z`.
pub fn build_hz(geometry: &ChainGeometry, field: FieldSpec) -> OperatorMatrix {
    let diag: Vec<f64> = spin::total_iz_diagonal(geometry.n_spins)
        .into_iter()
        .map(|m| field.0 * m)
        .collect();
    OperatorMatrix::diagonal(&diag).expect("chain dimension is valid")
}

/// Angular prefactors shared by every pair of the chain.
struct DipolarCoefficients {
    /// `1 - 3 cos^2 theta`
    secular: f64,
    /// `-(3/4) sin 2theta e^{-i phi}`, multiplies the raising single-flip terms.
    single_raise: Complex64,
    /// `-(3/4) sin^2 theta e^{-2i phi}`, multiplies `I_j^+ I_k^+`.
    double_raise: Complex64,
}

impl DipolarCoefficients {
    fn new(theta: f64, phi: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            secular: 1.0 - 3.0 * c * c,
            single_raise: Complex64::from_polar(-0.75 * (2.0 * theta).sin(), -phi),
            double_raise: Complex64::from_polar(-0.75 * s * s, -2.0 * phi),
        }
    }
}

/// Full dipolar Hamiltonian `H_dd / D12`.
///
/// Built column by column from the action of each pair term on a basis
/// state; the lowering families are the Hermitian conjugates of the raising
/// ones.
pub fn build_hdd(geometry: &ChainGeometry) -> OperatorMatrix {
    let n = geometry.n_spins;
    let dim = geometry.dim();
    let coef = DipolarCoefficients::new(geometry.theta, geometry.phi);
    let mut h = OperatorMatrix::zeros(dim);

    for (j, k) in geometry.pairs() {
        let b = geometry.coupling(j, k);
        let mj_mask = site_mask(j, n);
        let mk_mask = site_mask(k, n);
        let both = mj_mask | mk_mask;
        let secular = b * coef.secular;
        let single_up = coef.single_raise * b;
        let single_down = single_up.conj();
        let double_up = coef.double_raise * b;
        let double_down = double_up.conj();

        for s in 0..dim {
            let mj = site_iz(s, j, n);
            let mk = site_iz(s, k, n);

            // I^z I^z
            h.add_to(s, s, Complex64::new(secular * mj * mk, 0.0));

            // -(1/4)(I^+ I^- + I^- I^+): exactly one of the two acts when spins differ.
            if mj != mk {
                h.add_to(s ^ both, s, Complex64::new(-0.25 * secular, 0.0));
            }

            // I_j^z I_k^± + I_j^± I_k^z
            let flip_k = s ^ mk_mask;
            let flip_j = s ^ mj_mask;
            let k_single = if mk < 0.0 { single_up } else { single_down };
            let j_single = if mj < 0.0 { single_up } else { single_down };
            h.add_to(flip_k, s, k_single * mj);
            h.add_to(flip_j, s, j_single * mk);

            // I^+ I^+ and I^- I^-
            if mj < 0.0 && mk < 0.0 {
                h.add_to(s ^ both, s, double_up);
            } else if mj > 0.0 && mk > 0.0 {
                h.add_to(s ^ both, s, double_down);
            }
        }
    }
    h
}

/// `H / D12 = H_z + H_dd`.
pub fn build_h(geometry: &ChainGeometry, field: FieldSpec) -> OperatorMatrix {
    let mut h = build_hdd(geometry);
    add_zeeman(&mut h, geometry.n_spins, field);
    h
}

/// Adds `omega0 Σ I^z` to an existing dipolar matrix in place.
pub(crate) fn add_zeeman(h: &mut OperatorMatrix, n_spins: usize, field: FieldSpec) {
    for (s, m) in spin::total_iz_diagonal(n_spins).into_iter().enumerate() {
        h.add_to(s, s, Complex64::new(field.0 * m, 0.0));
    }
}

/// Mean local field `sqrt(Tr H_dd^2 / Tr (Σ I^z)^2)` in units of `D12`.
pub fn local_field(geometry: &ChainGeometry) -> f64 {
    local_field_of(&build_hdd(geometry), geometry.n_spins)
}

pub(crate) fn local_field_of(hdd: &OperatorMatrix, n_spins: usize) -> f64 {
    let tr_iz2: f64 = spin::total_iz_diagonal(n_spins).iter().map(|m| m * m).sum();
    (hdd.frobenius_sq() / tr_iz2).sqrt()
}

/// Ratio `sweep_rate / (gamma * h_loc^2)`; values well below one mean the
/// sweep is slow enough for the spins to stay in internal equilibrium.
///
/// Units: `sweep_rate` in field units per second, `gamma` in rad/(s·field
/// unit), `h_loc` in field units.
pub fn adiabaticity_margin(sweep_rate: f64, gamma: f64, h_loc: f64) -> Result<f64> {
    for (name, v) in [("sweep_rate", sweep_rate), ("gamma", gamma), ("h_loc", h_loc)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::param(format!("{name} must be > 0, got {v}")));
        }
    }
    Ok(sweep_rate / (gamma * h_loc * h_loc))
}
