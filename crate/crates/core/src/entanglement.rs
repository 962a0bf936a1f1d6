//! Pairwise entanglement of the thermal state.
//!
//! A two-spin reduced density matrix is traced out of the Gibbs state
//! directly from the eigenvectors. Its Wootters concurrence is built from the
//! square roots `λ_k` of the eigenvalues of the non-Hermitian product
//! `R = ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
//!
//! Pair basis order follows the crate convention with spin `m` as the high
//! bit: `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.

use std::fmt;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{build_h, ChainGeometry, FieldSpec};
use crate::spectrum::{diagonalize, Spectrum};
use crate::thermo::Boltzmann;

/// 4×4 complex matrix, row-major.
pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerance on the imaginary part and on negative real parts of the
/// eigenvalues of `R`.
pub const R_EIGEN_TOL: f64 = 1e-9;

/// Tolerance used when validating reduced density matrices.
pub const DENSITY_TOL: f64 = 1e-10;

/// Off-X entries must vanish to this level for the closed-form oracle.
pub const X_STRUCTURE_TOL: f64 = 1e-12;

/// Upper end of the inverse-temperature scan used by [`phase_boundary`].
pub const BOUNDARY_BETA_MAX: f64 = 100.0;

/// Bisection resolution of the phase-boundary search.
pub const BOUNDARY_BETA_RESOLUTION: f64 = 1e-6;

const BOUNDARY_SCAN_STEP: f64 = 0.01;

/// Smallest `q` counted as entanglement. Far from the boundary `q` can be
/// smaller than rounding noise (e.g. `e^{-β/2}` at large β), so its sign
/// alone does not decide.
pub const ENTANGLEMENT_THRESHOLD: f64 = 1e-12;

/// Two distinct sites `m < n` of a chain, 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinPair {
    pub m: usize,
    pub n: usize,
}

impl SpinPair {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(Error::param(format!(
                "pair ({m}, {n}) must satisfy 1 <= m < n"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn check(&self, n_spins: usize) -> Result<()> {
        if self.m == 0 || self.m >= self.n || self.n > n_spins {
            return Err(Error::param(format!(
                "pair ({}, {}) invalid for a chain of {n_spins} spins",
                self.m, self.n
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SpinPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.m, self.n)
    }
}

/// Two-spin density matrix of the pair `(m, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDensity {
    pair: SpinPair,
    entries: Mat4,
}

impl ReducedDensity {
    /// Validates Hermiticity, unit trace and positivity (all to [`DENSITY_TOL`]).
    pub fn new(pair: SpinPair, entries: Mat4) -> Result<Self> {
        let rho = Self { pair, entries };
        let defect = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| (entries[i][j] - entries[j][i].conj()).norm())
            .fold(0.0, f64::max);
        if defect > DENSITY_TOL {
            return Err(Error::Contract(format!(
                "reduced density not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = rho.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::Contract(format!("reduced density trace {tr} != 1")));
        }
        let min_eig = rho.eigenvalues()?.into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -DENSITY_TOL {
            return Err(Error::Contract(format!(
                "reduced density has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(rho)
    }

    /// Projector onto a pure two-spin state with amplitudes in pair-basis order.
    pub fn pure(pair: SpinPair, amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::param("zero state vector"));
        }
        let a = amplitudes.map(|x| x / norm);
        let mut e = [[ZERO; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = a[i] * a[j].conj();
            }
        }
        Self::new(pair, e)
    }

    pub fn pair(&self) -> SpinPair {
        self.pair
    }

    pub fn entries(&self) -> &Mat4 {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    /// Eigenvalues of the (Hermitian) density matrix, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let m = Mat::<Complex64>::from_fn(4, 4, |i, j| self.entries[i][j]);
        m.self_adjoint_eigenvalues(faer::Side::Lower)
            .map_err(|e| Error::numeric(format!("4x4 eigensolver failed: {e:?}")))
    }
}

/// Per-eigenvector partial traces for one pair.
///
/// Entry `i` is `Tr_rest |v_i⟩⟨v_i|`; the reduced Gibbs state at any β is
/// the weighted sum of these blocks, so a field point can be diagonalized
/// once and the eigenvectors discarded.
#[derive(Clone, Debug)]
pub struct PairBlocks {
    pair: SpinPair,
    blocks: Vec<Mat4>,
}

impl PairBlocks {
    pub fn new(spectrum: &Spectrum, pair: SpinPair) -> Result<Self> {
        let n = spectrum.n_spins();
        pair.check(n)?;
        let dim = spectrum.dim();
        let hi = 1usize << (n - pair.m);
        let lo = 1usize << (n - pair.n);
        let offsets = [0, lo, hi, hi | lo];
        let v = spectrum.eigenvectors();
        let rests: Vec<usize> = (0..dim).filter(|s| s & (hi | lo) == 0).collect();

        let blocks = (0..dim)
            .map(|c| {
                let mut b = [[ZERO; 4]; 4];
                for &rest in &rests {
                    let x = offsets.map(|o| v[(rest | o, c)]);
                    if x.iter().all(|z| *z == ZERO) {
                        continue;
                    }
                    for a in 0..4 {
                        for bb in 0..4 {
                            b[a][bb] += x[a] * x[bb].conj();
                        }
                    }
                }
                b
            })
            .collect();
        Ok(Self { pair, blocks })
    }

    pub fn pair(&self) -> SpinPair {
        self.pair
    }

    /// `Σ_i w_i block_i`, validated as a density matrix.
    pub fn reduce(&self, weights: &[f64]) -> Result<ReducedDensity> {
        if weights.len() != self.blocks.len() {
            return Err(Error::param("weight vector length mismatch"));
        }
        let mut e = [[ZERO; 4]; 4];
        for (w, b) in weights.iter().zip(&self.blocks) {
            if *w == 0.0 {
                continue;
            }
            for a in 0..4 {
                for c in 0..4 {
                    e[a][c] += b[a][c] * *w;
                }
            }
        }
        ReducedDensity::new(self.pair, e)
    }
}

/// Reduced density matrix of `pair` in the Gibbs state at `beta`.
pub fn reduce(spectrum: &Spectrum, beta: f64, pair: SpinPair) -> Result<ReducedDensity> {
    pair.check(spectrum.n_spins())?;
    let b = Boltzmann::new(spectrum.eigenvalues(), beta)?;
    PairBlocks::new(spectrum, pair)?.reduce(&b.weights)
}

/// `σ_y⊗σ_y` in the pair basis: anti-diagonal `(-1, 1, 1, -1)`.
const FLIP_SIGNS: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];

/// `(σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn spin_flip(rho: &ReducedDensity) -> Mat4 {
    // (Y ρ* Y)[a][b] = s_a s_b conj(ρ[3-a][3-b]) with Y[a][3-a] = s_a.
    let mut out = [[ZERO; 4]; 4];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            *x = rho.entries[3 - a][3 - b].conj() * (FLIP_SIGNS[a] * FLIP_SIGNS[b]);
        }
    }
    out
}

fn matmul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            if a[i][k] == ZERO {
                continue;
            }
            for j in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceResult {
    /// `max(q, 0)`
    pub value: f64,
    /// `λ1 - λ2 - λ3 - λ4`
    pub q: f64,
    /// Square roots of the eigenvalues of `R`, descending.
    pub lambdas: [f64; 4],
}

impl ConcurrenceResult {
    /// `q` above [`ENTANGLEMENT_THRESHOLD`].
    pub fn is_entangled(&self) -> bool {
        self.q > ENTANGLEMENT_THRESHOLD
    }
}

/// Wootters concurrence of a two-spin state.
///
/// The eigenvalues of `R` are checked against the error contract; the
/// `λ_k` themselves are taken as the singular values of
/// `τ = Aᵀ (σ_y⊗σ_y) A` with `ρ = A A†`, which equal `√eig(R)` but keep full
/// absolute accuracy where `R` has (near) zero eigenvalues.
pub fn concurrence(rho: &ReducedDensity) -> Result<ConcurrenceResult> {
    check_r_eigenvalues(rho)?;
    let mut lambdas = [0.0; 4];
    for (l, s) in lambdas.iter_mut().zip(flip_singular_values(rho)?) {
        *l = s;
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let q = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(ConcurrenceResult {
        value: q.max(0.0),
        q,
        lambdas,
    })
}

/// Eigenvalues of `R` must be real and non-negative up to [`R_EIGEN_TOL`].
fn check_r_eigenvalues(rho: &ReducedDensity) -> Result<()> {
    let r = matmul4(&rho.entries, &spin_flip(rho));
    let m = Mat::<Complex64>::from_fn(4, 4, |i, j| r[i][j]);
    let eig = m
        .eigenvalues()
        .map_err(|e| Error::numeric(format!("R-matrix eigensolver failed: {e:?}")))?;
    for z in eig {
        if z.im.abs() > R_EIGEN_TOL {
            return Err(Error::numeric(format!(
                "R-matrix eigenvalue {z} has imaginary part above {R_EIGEN_TOL:e}"
            )));
        }
        if z.re < -R_EIGEN_TOL {
            return Err(Error::numeric(format!(
                "R-matrix eigenvalue {z} is negative beyond {R_EIGEN_TOL:e}"
            )));
        }
    }
    Ok(())
}

fn flip_singular_values(rho: &ReducedDensity) -> Result<Vec<f64>> {
    let m = Mat::<Complex64>::from_fn(4, 4, |i, j| rho.entries[i][j]);
    let evd = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::numeric(format!("4x4 eigensolver failed: {e:?}")))?;
    let (u, mu) = (evd.U(), evd.S().column_vector());
    let a = Mat::<Complex64>::from_fn(4, 4, |i, k| u[(i, k)] * mu[k].re.max(0.0).sqrt());
    let tau = Mat::<Complex64>::from_fn(4, 4, |i, j| {
        (0..4)
            .map(|x| a[(x, i)] * a[(3 - x, j)] * FLIP_SIGNS[x])
            .sum()
    });
    tau.singular_values()
        .map_err(|e| Error::numeric(format!("4x4 SVD failed: {e:?}")))
}

/// Closed-form concurrence of an X-shaped state,
/// `2 max(0, |ρ14| - √(ρ22 ρ33), |ρ23| - √(ρ11 ρ44))`.
pub fn concurrence_xstate_oracle(rho: &ReducedDensity) -> Result<f64> {
    let e = &rho.entries;
    for i in 0..4 {
        for j in 0..4 {
            let on_x = i == j || i + j == 3;
            if !on_x && e[i][j].norm() > X_STRUCTURE_TOL {
                return Err(Error::param(format!(
                    "state is not X-shaped: entry ({i},{j}) = {}",
                    e[i][j]
                )));
            }
        }
    }
    let d = |i: usize| e[i][i].re.max(0.0);
    let a = e[0][3].norm() - (d(1) * d(2)).sqrt();
    let b = e[1][2].norm() - (d(0) * d(3)).sqrt();
    Ok(2.0 * a.max(b).max(0.0))
}

/// Which side of the entangled/separable boundary a state lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseSide {
    Entangled,
    Separable,
}

impl fmt::Display for PhaseSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseSide::Entangled => "entangled",
            PhaseSide::Separable => "separable",
        })
    }
}

/// Concurrence of one pair as a function of β at a fixed field.
pub struct ThermalConcurrence {
    eigenvalues: Vec<f64>,
    blocks: PairBlocks,
}

impl ThermalConcurrence {
    pub fn new(geometry: &ChainGeometry, pair: SpinPair, omega0: f64) -> Result<Self> {
        pair.check(geometry.n_spins())?;
        let spectrum = diagonalize(&build_h(geometry, FieldSpec::new(omega0)?))?;
        Ok(Self {
            blocks: PairBlocks::new(&spectrum, pair)?,
            eigenvalues: spectrum.eigenvalues().to_vec(),
        })
    }

    pub fn at(&self, beta: f64) -> Result<ConcurrenceResult> {
        let b = Boltzmann::new(&self.eigenvalues, beta)?;
        concurrence(&self.blocks.reduce(&b.weights)?)
    }

    /// Smallest β in `(0, beta_max]` where the concurrence becomes positive.
    pub fn onset(&self, beta_max: f64) -> Result<Option<f64>> {
        let steps = (beta_max / BOUNDARY_SCAN_STEP).ceil() as usize;
        let mut prev = 0.0;
        for k in 1..=steps {
            let beta = (k as f64 * BOUNDARY_SCAN_STEP).min(beta_max);
            if self.at(beta)?.is_entangled() {
                let (mut lo, mut hi) = (prev, beta);
                while hi - lo > BOUNDARY_BETA_RESOLUTION {
                    let mid = 0.5 * (lo + hi);
                    if self.at(mid)?.is_entangled() {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Ok(Some(hi));
            }
            prev = beta;
        }
        Ok(None)
    }
}

/// Point of the entangled/separable boundary; `beta_star` is `None` where
/// the pair stays separable for every β up to [`BOUNDARY_BETA_MAX`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub omega0: f64,
    pub beta_star: Option<f64>,
}

/// Onset inverse temperature of pairwise entanglement along a field grid.
pub fn phase_boundary(
    geometry: &ChainGeometry,
    pair: SpinPair,
    omega0_grid: &[f64],
) -> Result<Vec<BoundaryPoint>> {
    pair.check(geometry.n_spins())?;
    omega0_grid
        .iter()
        .map(|&omega0| {
            if !(omega0.is_finite() && omega0 > 0.0) {
                return Err(Error::param(format!(
                    "boundary grid values must be > 0, got {omega0}"
                )));
            }
            let tc = ThermalConcurrence::new(geometry, pair, omega0)?;
            Ok(BoundaryPoint {
                omega0,
                beta_star: tc.onset(BOUNDARY_BETA_MAX)?,
            })
        })
        .collect()
}

/// Classifies the thermal state at `(omega0, beta)` by its concurrence.
pub fn classify_point(
    geometry: &ChainGeometry,
    pair: SpinPair,
    omega0: f64,
    beta: f64,
) -> Result<PhaseSide> {
    let c = ThermalConcurrence::new(geometry, pair, omega0)?.at(beta)?;
    Ok(if c.is_entangled() {
        PhaseSide::Entangled
    } else {
        PhaseSide::Separable
    })
}
