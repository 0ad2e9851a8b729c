//! Pauli strings in symplectic form.
//!
//! A [`PauliString`] is `phase · σ_{n-1} ⊗ … ⊗ σ_0` where qubit `q` carries
//! `σ(x_q, z_q)` with `σ(0,0) = I`, `σ(1,0) = X`, `σ(0,1) = Z`, `σ(1,1) = Y`.
//! Since `Y = iXZ`, the product `XZ` is `-iY`.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::graph::MAX_QUBITS;

/// Global phase, stored as a power of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_power(k: u32) -> Self {
        match k % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn power(self) -> u32 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Phase::PlusOne | Phase::MinusOne)
    }

    pub fn to_complex(self) -> Complex64 {
        i_pow(self.power())
    }
}

pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

impl PauliString {
    /// # Panics
    /// If `n > 64` or a mask has bits at or above `n`.
    pub fn new(n: usize, x: u64, z: u64, phase: Phase) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let valid = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        assert!(
            x & !valid == 0 && z & !valid == 0,
            "mask bits beyond qubit count"
        );
        Self { n, x, z, phase }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, 0, 0, Phase::PlusOne)
    }

    pub fn x_on(n: usize, q: usize) -> Self {
        Self::new(n, 1 << q, 0, Phase::PlusOne)
    }

    pub fn z_on(n: usize, q: usize) -> Self {
        Self::new(n, 0, 1 << q, Phase::PlusOne)
    }

    pub fn y_on(n: usize, q: usize) -> Self {
        Self::new(n, 1 << q, 1 << q, Phase::PlusOne)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Hermitian iff the phase is `±1`.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn with_phase(self, phase: Phase) -> Self {
        Self { phase, ..self }
    }

    /// Symplectic product parity: true iff `self` and `other` commute.
    pub fn commutes(&self, other: &PauliString) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        ((self.x & other.z) ^ (self.z & other.x))
            .count_ones()
            .is_multiple_of(2)
    }

    /// Action on a basis state: `P|col> = coeff |row>`.
    pub fn apply_to_basis(&self, col: usize) -> (usize, Complex64) {
        let col_bits = col as u64;
        let k = self.phase.power()
            + (self.x & self.z).count_ones()
            + 2 * (self.z & col_bits).count_ones();
        ((col_bits ^ self.x) as usize, i_pow(k))
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        assert_eq!(self.n, rhs.n, "qubit count mismatch");
        // σ(x,z) = i^{xz} X^x Z^z and Z^z X^x = (-1)^{xz} X^x Z^z, per qubit.
        let x = self.x ^ rhs.x;
        let z = self.z ^ rhs.z;
        let k = self.phase.power()
            + rhs.phase.power()
            + (self.x & self.z).count_ones()
            + (rhs.x & rhs.z).count_ones()
            + 2 * (self.z & rhs.x).count_ones()
            + 3 * (x & z).count_ones();
        PauliString {
            n: self.n,
            x,
            z,
            phase: Phase::from_power(k),
        }
    }
}

impl fmt::Display for PauliString {
    /// Sign followed by one letter per qubit, qubit 0 first: `+XZ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase {
            Phase::PlusOne => "+",
            Phase::PlusI => "+i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        };
        f.write_str(sign)?;
        for q in 0..self.n {
            let c = match (self.x >> q & 1, self.z >> q & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, _) => 'Z',
                _ => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_products() {
        let x = PauliString::x_on(1, 0);
        let y = PauliString::y_on(1, 0);
        let z = PauliString::z_on(1, 0);
        assert_eq!(x * z, y.with_phase(Phase::MinusI));
        assert_eq!(z * x, y.with_phase(Phase::PlusI));
        assert_eq!(x * y, z.with_phase(Phase::PlusI));
        assert_eq!(y * z, x.with_phase(Phase::PlusI));
        for p in [x, y, z] {
            assert_eq!(p * p, PauliString::identity(1));
        }
    }

    #[test]
    fn commutation() {
        let xz = PauliString::new(2, 0b01, 0b10, Phase::PlusOne);
        let zx = PauliString::new(2, 0b10, 0b01, Phase::PlusOne);
        assert!(xz.commutes(&zx));
        assert!(!PauliString::x_on(1, 0).commutes(&PauliString::z_on(1, 0)));
        assert!(xz.commutes(&PauliString::identity(2)));
    }

    #[test]
    fn display() {
        let p = PauliString::new(3, 0b001, 0b110, Phase::MinusOne);
        assert_eq!(p.to_string(), "-XZZ");
        assert_eq!(PauliString::y_on(2, 1).to_string(), "+IY");
    }

    #[test]
    fn basis_action_matches_y() {
        let y = PauliString::y_on(1, 0);
        assert_eq!(y.apply_to_basis(0), (1, Complex64::new(0.0, 1.0)));
        assert_eq!(y.apply_to_basis(1), (0, Complex64::new(0.0, -1.0)));
    }
}
