//! Spin-1/2 operators in the `N`-spin product basis.
//!
//! Basis convention, used by every module in this crate: spin `k`
//! (1-indexed) is bit `N - k` of the basis index, so spin 1 is the most
//! significant bit. Bit value `0` is spin up (`I^z = +1/2`) and `1` is spin
//! down (`I^z = -1/2`). For `N = 2` the basis order is
//! `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.

use std::ops::{Add, Mul, Sub};

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::MAX_SPINS;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex square operator on a `2^N`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    mat: Mat<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: Mat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: Mat::identity(dim, dim),
        }
    }

    /// Wraps a square matrix. The dimension must be a power of two.
    pub fn from_mat(mat: Mat<Complex64>) -> Result<Self> {
        let dim = mat.nrows();
        if mat.ncols() != dim {
            return Err(Error::param(format!(
                "operator must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if dim < 2 || !dim.is_power_of_two() || dim > (1 << MAX_SPINS) {
            return Err(Error::param(format!(
                "operator dimension {dim} is not a power of two <= {}",
                1 << MAX_SPINS
            )));
        }
        Ok(Self { mat })
    }

    /// Builds an operator from row-major entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::param("ragged operator rows"));
        }
        Self::from_mat(Mat::from_fn(dim, dim, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::from_mat(Mat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Number of spins `N` with `dim = 2^N`.
    pub fn n_spins(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    #[inline]
    pub(crate) fn add_to(&mut self, row: usize, col: usize, value: Complex64) {
        self.mat[(row, col)] += value;
    }

    pub fn as_mat(&self) -> &Mat<Complex64> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<Complex64> {
        self.mat
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint().to_owned(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let d = self.dim();
        Self {
            mat: Mat::from_fn(d, d, |i, j| self.mat[(i, j)] * factor),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn is_finite(&self) -> bool {
        let d = self.dim();
        (0..d).all(|j| (0..d).all(|i| self.mat[(i, j)].is_finite()))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        let d = self.dim();
        let mut m = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                m = m.max(self.mat[(i, j)].norm());
            }
        }
        m
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        (self - other).max_abs()
    }

    /// `Tr(A† A)`, the squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for j in 0..d {
            for i in 0..d {
                s += self.mat[(i, j)].norm_sqr();
            }
        }
        s
    }

    /// Largest deviation from Hermiticity, `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut m = 0.0f64;
        for i in 0..d {
            for j in i..d {
                m = m.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        m
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `true` when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|j| (0..d).all(|i| i == j || self.mat[(i, j)] == ZERO))
    }

    /// Real parts of the diagonal.
    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }

    /// Applies the operator to a state vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        assert_eq!(v.len(), d, "vector length mismatch");
        let mut out = vec![ZERO; d];
        for (j, &vj) in v.iter().enumerate() {
            if vj == ZERO {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.mat[(i, j)] * vj;
            }
        }
        out
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            mat: &self.mat * &rhs.mat,
        }
    }
}

/// The three spin-1/2 building blocks `I^z`, `I^+`, `I^-`.
#[derive(Clone, Debug)]
pub struct SingleSpinOps {
    pub iz: OperatorMatrix,
    pub iplus: OperatorMatrix,
    pub iminus: OperatorMatrix,
}

pub fn single_spin_ops() -> SingleSpinOps {
    let iz = OperatorMatrix::diagonal(&[0.5, -0.5]).expect("2x2");
    // |up> = e0, |down> = e1; I+ |down> = |up>.
    let iplus = OperatorMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).expect("2x2");
    let iminus = iplus.adjoint();
    SingleSpinOps { iz, iplus, iminus }
}

/// Pauli `σ_y` in the `(up, down)` basis.
pub fn sigma_y() -> OperatorMatrix {
    let i = Complex64::new(0.0, 1.0);
    OperatorMatrix::from_rows(&[vec![ZERO, -i], vec![i, ZERO]]).expect("2x2")
}

pub(crate) fn check_spin_count(n_spins: usize) -> Result<()> {
    if n_spins == 0 || n_spins > MAX_SPINS {
        return Err(Error::param(format!(
            "spin count {n_spins} outside 1..={MAX_SPINS}"
        )));
    }
    Ok(())
}

/// Bit mask of spin `site` (1-indexed) in an `n_spins` chain.
#[inline]
pub fn site_mask(site: usize, n_spins: usize) -> usize {
    1 << (n_spins - site)
}

/// `I^z` eigenvalue of spin `site` in basis state `state`.
#[inline]
pub fn site_iz(state: usize, site: usize, n_spins: usize) -> f64 {
    if state & site_mask(site, n_spins) == 0 {
        0.5
    } else {
        -0.5
    }
}

/// Lifts a single-site operator to `Id ⊗ … ⊗ op ⊗ … ⊗ Id` with `op` at `site`.
pub fn embed(op: &OperatorMatrix, site: usize, n_spins: usize) -> Result<OperatorMatrix> {
    check_spin_count(n_spins)?;
    if op.dim() != 2 {
        return Err(Error::param(format!(
            "embed expects a 2x2 operator, got dim {}",
            op.dim()
        )));
    }
    if site == 0 || site > n_spins {
        return Err(Error::param(format!(
            "site {site} outside 1..={n_spins}"
        )));
    }
    let dim = 1usize << n_spins;
    let shift = n_spins - site;
    let mask = 1usize << shift;
    let mut out = OperatorMatrix::zeros(dim);
    for col in 0..dim {
        let b_in = (col >> shift) & 1;
        for b_out in 0..2 {
            let amp = op.get(b_out, b_in);
            if amp != ZERO {
                let row = (col & !mask) | (b_out << shift);
                out.add_to(row, col, amp);
            }
        }
    }
    Ok(out)
}

/// Diagonal of `Σ_k I_k^z` in the product basis.
pub fn total_iz_diagonal(n_spins: usize) -> Vec<f64> {
    let dim = 1usize << n_spins;
    (0..dim)
        .map(|s| n_spins as f64 / 2.0 - s.count_ones() as f64)
        .collect()
}

/// `Σ_k I_k^z`.
pub fn total_iz(n_spins: usize) -> Result<OperatorMatrix> {
    check_spin_count(n_spins)?;
    OperatorMatrix::diagonal(&total_iz_diagonal(n_spins))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ladder_ops() {
        let ops = single_spin_ops();
        let down = vec![ZERO, ONE];
        assert_eq!(ops.iplus.apply(&down), vec![ONE, ZERO]);
        assert_eq!((&ops.iplus * &ops.iplus).max_abs(), 0.0);
        assert_eq!(ops.iz.diagonal_real(), vec![0.5, -0.5]);
        assert_eq!(ops.iminus, ops.iplus.adjoint());
        // [Iz, I+] = I+
        assert_eq!(ops.iz.commutator(&ops.iplus), ops.iplus);
    }

    #[test]
    fn embed_bit_order() {
        let ops = single_spin_ops();
        assert_eq!(embed(&ops.iz, 1, 1).unwrap(), ops.iz);
        assert_eq!(
            embed(&ops.iz, 1, 2).unwrap().diagonal_real(),
            vec![0.5, 0.5, -0.5, -0.5]
        );
        assert_eq!(
            embed(&ops.iz, 2, 2).unwrap().diagonal_real(),
            vec![0.5, -0.5, 0.5, -0.5]
        );
        assert!(embed(&ops.iz, 2, 2).unwrap().is_diagonal());
    }

    #[test]
    fn embed_rejects_bad_site() {
        let ops = single_spin_ops();
        assert!(matches!(embed(&ops.iz, 0, 3), Err(Error::Parameter(_))));
        assert!(matches!(embed(&ops.iz, 4, 3), Err(Error::Parameter(_))));
        assert!(matches!(embed(&ops.iz, 1, 11), Err(Error::Parameter(_))));
    }

    #[test]
    fn site_iz_matches_embedding() {
        let ops = single_spin_ops();
        for n in 1..=4 {
            for k in 1..=n {
                let e = embed(&ops.iz, k, n).unwrap();
                for s in 0..(1 << n) {
                    assert_eq!(e.get(s, s).re, site_iz(s, k, n));
                }
            }
        }
    }

    #[test]
    fn total_iz_small() {
        assert_eq!(total_iz(1).unwrap().diagonal_real(), vec![0.5, -0.5]);
        assert_eq!(total_iz(2).unwrap().diagonal_real(), vec![1.0, 0.0, 0.0, -1.0]);
        // Tr (ΣIz)^2 = N 2^(N-2), by direct summation over basis states.
        let d3: f64 = total_iz_diagonal(3).iter().map(|x| x * x).sum();
        assert_eq!(d3, 6.0);
        let tz = total_iz(3).unwrap();
        assert_eq!((&tz * &tz).trace(), c(6.0));
    }

    #[test]
    fn total_iz_spectrum_is_binomial() {
        for n in 1..=8 {
            let diag = total_iz_diagonal(n);
            for j in 0..=n {
                let m = n as f64 / 2.0 - j as f64;
                let count = diag.iter().filter(|&&x| x == m).count();
                let binom = (0..j).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
                assert_eq!(count, binom, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn sigma_y_squares_to_identity() {
        let sy = sigma_y();
        assert_eq!(&sy * &sy, OperatorMatrix::identity(2));
    }

    #[test]
    fn from_mat_rejects_non_power_of_two() {
        assert!(OperatorMatrix::from_mat(Mat::zeros(3, 3)).is_err());
        assert!(OperatorMatrix::from_mat(Mat::zeros(2, 4)).is_err());
    }
}
