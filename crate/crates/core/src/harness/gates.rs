//! Gate-count estimates under a Pauli-rotation compilation model.
//!
//! A weight-`w` Pauli rotation `exp(-iθP)` compiles to a CNOT ladder of
//! `2(w-1)` two-qubit gates around one single-qubit rotation. Terms with
//! `|a| <= PRUNE` are dropped.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::qite::QiteGenerator;

pub const PRUNE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCount {
    pub two_qubit: usize,
    pub rotations: usize,
}

impl std::ops::Add for GateCount {
    type Output = GateCount;

    fn add(self, o: GateCount) -> GateCount {
        GateCount { two_qubit: self.two_qubit + o.two_qubit, rotations: self.rotations + o.rotations }
    }
}

impl std::ops::AddAssign for GateCount {
    fn add_assign(&mut self, o: GateCount) {
        *self = *self + o;
    }
}

fn rotation(weight: usize) -> GateCount {
    if weight == 0 {
        // Identity rotation is a global phase.
        GateCount::default()
    } else {
        GateCount { two_qubit: 2 * (weight - 1), rotations: 1 }
    }
}

/// Cost of one set of generators.
///
/// Uncompressed, every generator is compiled on its own, as in one QITE
/// sweep `Π_k exp(-iΔτ A_k)`. Compressed, identical Pauli strings from
/// different generators are merged first, giving one first-order Trotter
/// layer of `exp(-it Σ_k A_k)`.
pub fn gate_count(generators: &[QiteGenerator], compressed: bool) -> GateCount {
    let mut total = GateCount::default();
    if compressed {
        let mut merged: BTreeMap<(u64, u64), (usize, f64)> = BTreeMap::new();
        for g in generators {
            for (a, p) in g.pauli_terms() {
                let entry = merged.entry(p.masks()).or_insert((p.weight(), 0.0));
                entry.1 += a;
            }
        }
        for (weight, a) in merged.into_values() {
            if a.abs() > PRUNE {
                total += rotation(weight);
            }
        }
    } else {
        for g in generators {
            for (a, p) in g.pauli_terms() {
                if a.abs() > PRUNE {
                    total += rotation(p.weight());
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generator(n: usize, domain: Vec<usize>, terms: &[(usize, f64)]) -> QiteGenerator {
        let mut g = QiteGenerator::zero(n, domain);
        for &(i, a) in terms {
            g.coefficients[i] = a;
        }
        g
    }

    #[test]
    fn weight_three_string() {
        // XYZ on three qubits: digits 1, 2, 3.
        let g = generator(3, vec![0, 1, 2], &[((1 << 4) | (2 << 2) | 3, 0.3)]);
        assert_eq!(gate_count(&[g], false), GateCount { two_qubit: 4, rotations: 1 });
    }

    #[test]
    fn identity_and_pruned_terms_are_free() {
        let g = generator(2, vec![0, 1], &[(5, 1e-9)]);
        assert_eq!(gate_count(std::slice::from_ref(&g), false), GateCount::default());
        assert_eq!(gate_count(&[g], true), GateCount::default());
        assert_eq!(gate_count(&[QiteGenerator::zero(2, vec![0, 1])], false), GateCount::default());
    }

    #[test]
    fn compression_merges_shared_strings() {
        // Both windows contain Y on qubit 1 (IY on [0,1], YI on [1,2]).
        let a = generator(3, vec![0, 1], &[(2, 0.1), (6, 0.2)]);
        let b = generator(3, vec![1, 2], &[(8, 0.3), (6, 0.1)]);
        let plain = gate_count(&[a.clone(), b.clone()], false);
        let merged = gate_count(&[a.clone(), b.clone()], true);
        assert_eq!(plain.rotations, 4);
        assert_eq!(merged.rotations, 3);
        assert_eq!(plain.two_qubit, 2 + 2);
        assert_eq!(merged.two_qubit, 2 + 2);
        // Cancelling coefficients drop out entirely.
        let c = generator(3, vec![1, 2], &[(8, -0.3)]);
        let b_only = generator(3, vec![1, 2], &[(8, 0.3)]);
        assert_eq!(gate_count(&[b_only, c], true), GateCount::default());
    }
}
