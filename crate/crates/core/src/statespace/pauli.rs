use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::state::{check_register, check_same_dim, StateVector};
use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// `(x, z)` symplectic bits.
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Letter for base-4 digit `d` in the order I, X, Y, Z.
    pub fn from_digit(d: usize) -> Self {
        Self::ALL[d & 3]
    }

    pub fn matrix(self) -> DMatrix<C64> {
        let o = C64::new(0.0, 0.0);
        let r = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => DMatrix::from_row_slice(2, 2, &[r, o, o, r]),
            Pauli::X => DMatrix::from_row_slice(2, 2, &[o, r, r, o]),
            Pauli::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            Pauli::Z => DMatrix::from_row_slice(2, 2, &[r, o, o, -r]),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of Pauli letters over a register, stored as X and Z bitmasks.
///
/// Bit `n - 1 - q` of each mask belongs to qubit `q`, matching the amplitude
/// ordering of [`StateVector`]. A `Y` letter sets both bits; the string is
/// `i^{|x & z|} X^x Z^z`, which keeps every string Hermitian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        Ok(Self { n_qubits, x: 0, z: 0 })
    }

    /// Parses a string such as `"XIZ"`; the first character is qubit 0.
    pub fn parse(letters: &str) -> Result<Self> {
        let letters: Vec<Pauli> = letters
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidArgument(format!("unknown Pauli letter {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::from_letters(&letters)
    }

    pub fn from_letters(letters: &[Pauli]) -> Result<Self> {
        let mut p = Self::identity(letters.len())?;
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        Ok(p)
    }

    /// Places `letters` on the given qubits of an `n_qubits` register.
    pub fn on_support(n_qubits: usize, support: &[usize], letters: &[Pauli]) -> Result<Self> {
        if support.len() != letters.len() {
            return Err(Error::DimensionMismatch { expected: support.len(), found: letters.len() });
        }
        let mut p = Self::identity(n_qubits)?;
        for (&q, &l) in support.iter().zip(letters) {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            p.set(q, l);
        }
        Ok(p)
    }

    /// The Pauli string with base-4 `index` over `support`: the digit for
    /// `support[p]` is `(index >> 2(m-1-p)) & 3` in the order I, X, Y, Z.
    pub fn from_support_index(n_qubits: usize, support: &[usize], index: usize) -> Result<Self> {
        let m = support.len();
        let letters: Vec<Pauli> =
            (0..m).map(|p| Pauli::from_digit(index >> (2 * (m - 1 - p)))).collect();
        Self::on_support(n_qubits, support, &letters)
    }

    fn bit(&self, q: usize) -> u64 {
        1u64 << (self.n_qubits - 1 - q)
    }

    fn set(&mut self, q: usize, l: Pauli) {
        let b = self.bit(q);
        let (x, z) = l.bits();
        self.x = if x { self.x | b } else { self.x & !b };
        self.z = if z { self.z | b } else { self.z & !b };
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn letter(&self, q: usize) -> Pauli {
        let b = self.bit(q);
        Pauli::from_bits(self.x & b != 0, self.z & b != 0)
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n_qubits).map(|q| self.letter(q)).collect()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Raw `(x, z)` bit masks.
    pub fn masks(&self) -> (u64, u64) {
        (self.x, self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|&q| self.letter(q) != Pauli::I).collect()
    }

    fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// `self · other = phase · result` with `phase` in {±1, ±i}.
    pub fn multiply(&self, other: &PauliString) -> Result<(C64, PauliString)> {
        check_same_dim(self.n_qubits, other.n_qubits)?;
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let result = PauliString { n_qubits: self.n_qubits, x, z };
        // X^a Z^b X^c Z^d = (-1)^{b·c} X^{a^c} Z^{b^d}
        let exponent = self.y_count() as i64 + other.y_count() as i64 - result.y_count() as i64
            + 2 * (self.z & other.x).count_ones() as i64;
        Ok((i_pow(exponent), result))
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        anti.is_multiple_of(2)
    }

    /// `σ|ψ>`.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        check_same_dim(self.n_qubits, state.n_qubits())?;
        Ok(state.with_amplitudes(self.apply_raw(state.amplitudes())))
    }

    pub(crate) fn apply_raw(&self, psi: &DVector<C64>) -> DVector<C64> {
        let base = i_pow(self.y_count() as i64);
        let x = self.x as usize;
        let z = self.z as usize;
        let mut out = DVector::zeros(psi.len());
        for (i, &a) in psi.iter().enumerate() {
            let sign = if (i & z).count_ones() % 2 == 1 { -base } else { base };
            out[i ^ x] = sign * a;
        }
        out
    }

    /// `<ψ|σ|ψ>` for an arbitrary (not necessarily normalized) vector.
    pub(crate) fn expectation_raw(&self, psi: &DVector<C64>) -> C64 {
        let base = i_pow(self.y_count() as i64);
        let x = self.x as usize;
        let z = self.z as usize;
        let mut acc = C64::new(0.0, 0.0);
        for (i, &a) in psi.iter().enumerate() {
            let t = psi[i ^ x].conj() * a;
            if (i & z).count_ones() % 2 == 1 {
                acc -= t;
            } else {
                acc += t;
            }
        }
        base * acc
    }

    /// Real expectation value `<ψ|σ|ψ>`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        check_same_dim(self.n_qubits, state.n_qubits())?;
        Ok(self.expectation_raw(state.amplitudes()).re)
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn to_matrix(&self) -> DMatrix<C64> {
        let dim = 1usize << self.n_qubits;
        let base = i_pow(self.y_count() as i64);
        let x = self.x as usize;
        let z = self.z as usize;
        let mut m = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let sign = if (j & z).count_ones() % 2 == 1 { -base } else { base };
            m[(j ^ x, j)] = sign;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

fn i_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}
