//! Pauli operators and strings.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::BadPauliLabel { label: c.to_string() }),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of single-qubit Paulis, one per qubit.
///
/// Position 0 is the leftmost character of the label; in a CR-gate frame it
/// is the control qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        Self { ops }
    }

    /// Parse a label such as `"ZIIZ"`.
    pub fn from_label(label: &str) -> Result<Self> {
        let ops = label.chars().map(Pauli::from_char).collect::<Result<Vec<_>>>()?;
        if ops.is_empty() {
            return Err(Error::BadPauliLabel { label: label.to_string() });
        }
        Ok(Self { ops })
    }

    /// A string of `len` qubits with Z wherever `mask` has a set bit.
    /// Bit `len - 1 - p` of the mask corresponds to label position `p`, so
    /// the mask reads as the binary number spelled by the label with Z = 1.
    pub fn z_from_mask(mask: usize, len: usize) -> Self {
        let ops = (0..len)
            .map(|p| if (mask >> (len - 1 - p)) & 1 == 1 { Pauli::Z } else { Pauli::I })
            .collect();
        Self { ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn label(&self) -> String {
        self.ops.iter().map(|p| p.to_char()).collect()
    }

    /// True when the string contains only I and Z.
    pub fn is_diagonal(&self) -> bool {
        self.ops.iter().all(|p| matches!(p, Pauli::I | Pauli::Z))
    }

    /// Bit mask of Z positions (MSB = position 0), or an error if any X or Y
    /// is present.
    pub fn z_mask(&self) -> Result<usize> {
        if !self.is_diagonal() {
            return Err(Error::NonDiagonalPauli { label: self.label() });
        }
        let n = self.ops.len();
        let mut mask = 0usize;
        for (p, op) in self.ops.iter().enumerate() {
            if *op == Pauli::Z {
                mask |= 1 << (n - 1 - p);
            }
        }
        Ok(mask)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
