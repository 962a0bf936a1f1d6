//! Hermitian eigendecomposition of Hamiltonians.
//!
//! The heavy lifting is done by `faer`. Before calling it the matrix is split
//! into independent blocks (connected components of its nonzero pattern) and
//! blocks with vanishing imaginary parts go through the real symmetric solver.
//! Entries smaller than `f64::EPSILON * max|H|` count as structural zeros for
//! this split; they are below the rounding level of the solver itself.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::OperatorMatrix;

/// Absolute tolerance (scaled by `max(1, max|H|)`) for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues of a degenerate level are grouped when they differ by less than this.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Mat<Complex64>,
}

impl Spectrum {
    /// Assembles a spectrum from parts; eigenvalues are sorted together with
    /// their vectors.
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Mat<Complex64>) -> Result<Self> {
        let dim = eigenvalues.len();
        if eigenvectors.nrows() != dim || eigenvectors.ncols() != dim {
            return Err(Error::param(format!(
                "eigenvector matrix is {}x{}, expected {dim}x{dim}",
                eigenvectors.nrows(),
                eigenvectors.ncols()
            )));
        }
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::param(format!("dimension {dim} is not a power of two >= 2")));
        }
        if let Some(bad) = eigenvalues.iter().find(|x| !x.is_finite()) {
            return Err(Error::numeric(format!("non-finite eigenvalue {bad}")));
        }
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
        let values = order.iter().map(|&i| eigenvalues[i]).collect();
        let vectors = Mat::from_fn(dim, dim, |r, c| eigenvectors[(r, order[c])]);
        Ok(Self {
            eigenvalues: values,
            eigenvectors: vectors,
        })
    }

    /// Spectrum of a diagonal matrix with the standard basis as eigenvectors.
    pub fn from_diagonal(values: &[f64]) -> Result<Self> {
        Self::from_parts(values.to_vec(), Mat::identity(values.len(), values.len()))
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n_spins(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors as columns, in eigenvalue order.
    pub fn eigenvectors(&self) -> &Mat<Complex64> {
        &self.eigenvectors
    }

    /// Column `i` as a vector.
    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.eigenvectors[(r, i)]).collect()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Number of eigenvalues within [`DEGENERACY_TOL`] of the ground energy.
    pub fn ground_degeneracy(&self) -> usize {
        let e0 = self.eigenvalues[0];
        self.eigenvalues
            .iter()
            .take_while(|&&e| e - e0 < DEGENERACY_TOL)
            .count()
    }

    /// `max_i ||H v_i - λ_i v_i||`.
    pub fn max_residual(&self, h: &OperatorMatrix) -> f64 {
        let hv = h.as_mat() * &self.eigenvectors;
        let dim = self.dim();
        (0..dim)
            .map(|c| {
                (0..dim)
                    .map(|r| (hv[(r, c)] - self.eigenvectors[(r, c)] * self.eigenvalues[c]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max |V†V - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.eigenvectors.adjoint() * &self.eigenvectors;
        let dim = self.dim();
        let mut m = 0.0f64;
        for c in 0..dim {
            for r in 0..dim {
                let target = if r == c { 1.0 } else { 0.0 };
                m = m.max((g[(r, c)] - target).norm());
            }
        }
        m
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> OperatorMatrix {
        let dim = self.dim();
        let scaled = Mat::from_fn(dim, dim, |r, c| self.eigenvectors[(r, c)] * self.eigenvalues[c]);
        OperatorMatrix::from_mat(&scaled * self.eigenvectors.adjoint()).expect("square power-of-two")
    }
}

/// Disjoint-set forest over basis indices.
struct Components {
    parent: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Groups basis indices into blocks that `h` does not couple.
fn independent_blocks(h: &Mat<Complex64>, cut: f64) -> Vec<Vec<usize>> {
    let dim = h.nrows();
    let mut sets = Components::new(dim);
    for c in 0..dim {
        for r in (c + 1)..dim {
            if h[(r, c)].norm() > cut {
                sets.union(r, c);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; dim];
    for i in 0..dim {
        let root = sets.find(i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

fn evd_error(e: faer::linalg::evd::EvdError) -> Error {
    Error::numeric(format!("eigensolver did not converge: {e:?}"))
}

/// Eigendecomposition of a Hermitian operator.
pub fn diagonalize(h: &OperatorMatrix) -> Result<Spectrum> {
    let dim = h.dim();
    let mat = h.as_mat();
    if !h.is_finite() {
        return Err(Error::numeric("Hamiltonian has non-finite entries"));
    }
    let scale = h.max_abs();
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    let cut = f64::EPSILON * scale;

    let mut values = vec![0.0; dim];
    let mut vectors = Mat::<Complex64>::zeros(dim, dim);
    let mut next = 0;
    for block in independent_blocks(mat, cut) {
        let n = block.len();
        let real = block
            .iter()
            .all(|&c| block.iter().all(|&r| mat[(r, c)].im.abs() <= cut));
        if real {
            let sub = Mat::<f64>::from_fn(n, n, |r, c| mat[(block[r], block[c])].re);
            let evd = sub.self_adjoint_eigen(Side::Lower).map_err(evd_error)?;
            let (s, u) = (evd.S().column_vector(), evd.U());
            for k in 0..n {
                values[next + k] = s[k];
                for (r, &row) in block.iter().enumerate() {
                    vectors[(row, next + k)] = Complex64::new(u[(r, k)], 0.0);
                }
            }
        } else {
            let sub = Mat::<Complex64>::from_fn(n, n, |r, c| mat[(block[r], block[c])]);
            let evd = sub.self_adjoint_eigen(Side::Lower).map_err(evd_error)?;
            let (s, u) = (evd.S().column_vector(), evd.U());
            for k in 0..n {
                values[next + k] = s[k].re;
                for (r, &row) in block.iter().enumerate() {
                    vectors[(row, next + k)] = u[(r, k)];
                }
            }
        }
        next += n;
    }

    let spectrum = Spectrum::from_parts(values, vectors)?;
    let trace = h.trace().re;
    let sum: f64 = spectrum.eigenvalues.iter().sum();
    if (sum - trace).abs() > 1e-9 * dim as f64 * scale.max(1.0) {
        return Err(Error::numeric(format!(
            "eigenvalue sum {sum} disagrees with trace {trace}"
        )));
    }
    Ok(spectrum)
}
