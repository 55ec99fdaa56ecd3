use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::state::{check_same_dim, StateVector};
use crate::error::{Error, Result};

/// Relative Hermiticity tolerance (scaled by the largest entry magnitude).
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Imaginary residue above which [`expectation`] refuses to return a real value.
pub const EXPECTATION_IMAG_TOL: f64 = 1e-10;

/// Dense square operator on an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n_qubits: usize,
    matrix: DMatrix<C64>,
    hermitian: bool,
}

impl DenseOperator {
    /// Wraps a square matrix of dimension `2^n`.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let n_qubits = qubits_for_square(&matrix)?;
        Ok(Self { n_qubits, matrix, hermitian: false })
    }

    /// Wraps a matrix and checks that it is Hermitian.
    pub fn hermitian(matrix: DMatrix<C64>) -> Result<Self> {
        let n_qubits = qubits_for_square(&matrix)?;
        let dev = hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOL * max_abs(&matrix).max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        // Symmetrize so the flag holds to rounding.
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        Ok(Self { n_qubits, matrix, hermitian: true })
    }

    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self { n_qubits, matrix: DMatrix::identity(dim, dim), hermitian: true }
    }

    pub fn zeros(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self { n_qubits, matrix: DMatrix::zeros(dim, dim), hermitian: true }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        check_same_dim(self.dim(), state.dim())?;
        Ok(state.with_amplitudes(&self.matrix * state.amplitudes()))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { n_qubits: self.n_qubits, matrix: self.matrix.scale(factor), hermitian: self.hermitian }
    }

    pub fn add(&self, other: &DenseOperator) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(Self {
            n_qubits: self.n_qubits,
            matrix: &self.matrix + &other.matrix,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    /// `[self, other]`. Anti-Hermitian when both factors are Hermitian, so the
    /// Hermitian flag is cleared.
    pub fn commutator(&self, other: &DenseOperator) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        let m = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        Ok(Self { n_qubits: self.n_qubits, matrix: m, hermitian: false })
    }

    /// Largest entrywise deviation from another operator.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.matrix - &other.matrix))
    }

    fn require_hermitian(&self) -> Result<()> {
        if self.hermitian {
            return Ok(());
        }
        let dev = hermitian_deviation(&self.matrix);
        if dev > HERMITIAN_TOL * max_abs(&self.matrix).max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(())
    }

    /// Eigendecomposition of a Hermitian operator.
    pub fn spectrum(&self) -> Result<HermitianSpectrum> {
        self.require_hermitian()?;
        Ok(HermitianSpectrum::of_matrix(&self.matrix))
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl HermitianSpectrum {
    pub(crate) fn of_matrix(m: &DMatrix<C64>) -> Self {
        let herm = (m + m.adjoint()).scale(0.5);
        let eig = herm.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let eigenvectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
        Self { eigenvalues, eigenvectors }
    }

    /// `f(M)` for a scalar function applied to the eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> DMatrix<C64> {
        let d = DVector::from_iterator(self.eigenvalues.len(), self.eigenvalues.iter().map(|&l| f(l)));
        let mut scaled = self.eigenvectors.clone();
        for (mut col, &di) in scaled.column_iter_mut().zip(d.iter()) {
            col *= di;
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// `f(M) v` without forming `f(M)`.
    pub fn apply_fn(&self, v: &DVector<C64>, f: impl Fn(f64) -> C64) -> DVector<C64> {
        let mut coeffs = self.eigenvectors.ad_mul(v);
        for (c, &l) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= f(l);
        }
        &self.eigenvectors * coeffs
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |acc, l| acc.max(l.abs()))
    }
}

/// Operator acting on an ordered subset of qubits.
///
/// The first support qubit is the most significant bit of the block index.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    support: Vec<usize>,
    block: DMatrix<C64>,
}

impl LocalOperator {
    pub fn new(block: DMatrix<C64>, support: Vec<usize>) -> Result<Self> {
        let m = qubits_for_square(&block)?;
        if m != support.len() {
            return Err(Error::DimensionMismatch { expected: 1 << support.len(), found: block.nrows() });
        }
        for (i, &q) in support.iter().enumerate() {
            if support[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(Self { support, block })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn block(&self) -> &DMatrix<C64> {
        &self.block
    }

    fn check_register(&self, n_total: usize) -> Result<()> {
        if let Some(&q) = self.support.iter().find(|&&q| q >= n_total) {
            return Err(Error::QubitOutOfRange { index: q, n_qubits: n_total });
        }
        Ok(())
    }

    /// Offsets of block basis states within the full index, and the mask of
    /// support bits.
    fn layout(&self, n_total: usize) -> (Vec<usize>, usize) {
        let m = self.support.len();
        let bits: Vec<usize> = self.support.iter().map(|&q| 1usize << (n_total - 1 - q)).collect();
        let offsets = (0..1usize << m)
            .map(|b| (0..m).filter(|&p| (b >> (m - 1 - p)) & 1 == 1).map(|p| bits[p]).sum())
            .collect();
        (offsets, bits.iter().sum())
    }

    /// Applies the block to the support qubits of `state`.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check_register(state.n_qubits())?;
        Ok(state.with_amplitudes(self.apply_raw(state.amplitudes(), state.n_qubits())))
    }

    pub(crate) fn apply_raw(&self, psi: &DVector<C64>, n_total: usize) -> DVector<C64> {
        let (offsets, mask) = self.layout(n_total);
        let k = offsets.len();
        let mut out = DVector::zeros(psi.len());
        let mut gathered = DVector::zeros(k);
        for base in (0..psi.len()).filter(|i| i & mask == 0) {
            for (g, &o) in gathered.iter_mut().zip(&offsets) {
                *g = psi[base + o];
            }
            let mapped = &self.block * &gathered;
            for (v, &o) in mapped.iter().zip(&offsets) {
                out[base + o] = *v;
            }
        }
        out
    }

    /// Dense realization on an `n_total`-qubit register.
    pub fn to_dense(&self, n_total: usize) -> Result<DMatrix<C64>> {
        self.check_register(n_total)?;
        let dim = 1usize << n_total;
        let (offsets, mask) = self.layout(n_total);
        let mut full = DMatrix::zeros(dim, dim);
        for base in (0..dim).filter(|i| i & mask == 0) {
            for (r, &ro) in offsets.iter().enumerate() {
                for (c, &co) in offsets.iter().enumerate() {
                    full[(base + ro, base + co)] = self.block[(r, c)];
                }
            }
        }
        Ok(full)
    }
}

/// Embeds `block` on `support` of an `n_total`-qubit register, identity elsewhere.
pub fn embed_operator(block: &DenseOperator, support: &[usize], n_total: usize) -> Result<DenseOperator> {
    let local = LocalOperator::new(block.matrix().clone(), support.to_vec())?;
    let matrix = local.to_dense(n_total)?;
    Ok(DenseOperator { n_qubits: n_total, matrix, hermitian: block.hermitian })
}

/// `exp(scale · H)` for Hermitian `H`, by spectral decomposition.
pub fn herm_exp(h: &DenseOperator, scale: C64) -> Result<DenseOperator> {
    let spectrum = h.spectrum()?;
    let matrix = spectrum.map(|l| (scale * l).exp());
    // exp(sH) is Hermitian for real s.
    let hermitian = scale.im == 0.0;
    Ok(DenseOperator { n_qubits: h.n_qubits, matrix, hermitian })
}

/// `<ψ|O|ψ>` for Hermitian `O`.
pub fn expectation(state: &StateVector, op: &DenseOperator) -> Result<f64> {
    check_same_dim(op.dim(), state.dim())?;
    op.require_hermitian()?;
    let v = state.amplitudes().dotc(&(op.matrix() * state.amplitudes()));
    if v.im.abs() > EXPECTATION_IMAG_TOL * op_scale(op) {
        return Err(Error::ComplexExpectation(v.im));
    }
    Ok(v.re)
}

fn op_scale(op: &DenseOperator) -> f64 {
    max_abs(op.matrix()).max(1.0)
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn qubits_for_square(m: &DMatrix<C64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let dim = m.nrows();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("operator dimension {dim} is not a power of two >= 2")));
    }
    Ok(dim.trailing_zeros() as usize)
}
