//! Arithmetic over `Z_d` and `Z_d^n`.
//!
//! A [`DigitLabel`] names a computational basis state `|q_1 q_2 … q_n⟩` or,
//! equally, a linear functional `k·q = k_1 q_1 ⊕ … ⊕ k_n q_n`. The two roles
//! share one type; which one applies is decided by the caller.
//!
//! Indices are big-endian: the first qudit is the most significant digit, so
//! label `(1, 2)` with `d = 3` sits at index `1·3 + 2 = 5`.

use std::fmt;

use crate::error::{Error, Result};

/// `n` qudits with `d` levels each; the group `Z_d^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuditSystem {
    n: usize,
    d: usize,
    dim: usize,
}

impl QuditSystem {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSystem { n, d, reason: "need at least one qudit" });
        }
        if d < 2 {
            return Err(Error::InvalidSystem { n, d, reason: "need at least two levels" });
        }
        let dim = u32::try_from(n)
            .ok()
            .and_then(|e| d.checked_pow(e))
            .ok_or(Error::InvalidSystem { n, d, reason: "d^n overflows the index range" })?;
        Ok(Self { n, d, dim })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// Hilbert-space dimension `d^n`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index step of qudit `wire` under the big-endian convention: `d^(n-1-wire)`.
    #[inline]
    pub fn stride(&self, wire: usize) -> usize {
        debug_assert!(wire < self.n);
        self.d.pow((self.n - 1 - wire) as u32)
    }

    /// Digit of qudit `wire` inside basis index `index`.
    #[inline]
    pub fn digit_of(&self, index: usize, wire: usize) -> usize {
        (index / self.stride(wire)) % self.d
    }

    pub fn check_wire(&self, wire: usize) -> Result<()> {
        if wire < self.n {
            Ok(())
        } else {
            Err(Error::WireOutOfRange { wire, n: self.n })
        }
    }

    pub(crate) fn ensure_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SystemMismatch {
                left_n: self.n,
                left_d: self.d,
                right_n: other.n,
                right_d: other.d,
            })
        }
    }

    pub fn zero_label(&self) -> DigitLabel {
        DigitLabel { digits: vec![0; self.n], system: *self }
    }

    pub fn is_prime_dimension(&self) -> bool {
        is_prime(self.d)
    }
}

/// Length-`n` digit string over `Z_d`; either a basis label `q` or a functional `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitLabel {
    digits: Vec<usize>,
    system: QuditSystem,
}

impl DigitLabel {
    pub fn new(system: QuditSystem, digits: Vec<usize>) -> Result<Self> {
        if digits.len() != system.n {
            return Err(Error::LabelLength { expected: system.n, got: digits.len() });
        }
        if let Some((position, &digit)) = digits.iter().enumerate().find(|(_, &x)| x >= system.d) {
            return Err(Error::DigitOutOfRange { position, digit, d: system.d });
        }
        Ok(Self { digits, system })
    }

    #[inline]
    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    #[inline]
    pub fn system(&self) -> QuditSystem {
        self.system
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&x| x == 0)
    }

    /// Digit-wise addition modulo `d`.
    pub fn add_mod(&self, other: &Self) -> Result<Self> {
        self.system.ensure_same(&other.system)?;
        let d = self.system.d;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(a, b)| (a + b) % d)
            .collect();
        Ok(Self { digits, system: self.system })
    }

    /// Additive inverse in `Z_d^n`.
    pub fn neg_mod(&self) -> Self {
        let d = self.system.d;
        Self {
            digits: self.digits.iter().map(|&a| (d - a) % d).collect(),
            system: self.system,
        }
    }

    /// `(Σ_j k_j q_j) mod d`.
    pub fn dot_mod(&self, other: &Self) -> Result<usize> {
        self.system.ensure_same(&other.system)?;
        Ok(dot_digits(&self.digits, &other.digits, self.system.d))
    }

    pub fn to_index(&self) -> usize {
        let d = self.system.d;
        self.digits.iter().fold(0, |acc, &x| acc * d + x)
    }

    pub fn from_index(index: usize, system: QuditSystem) -> Result<Self> {
        if index >= system.dim {
            return Err(Error::IndexOutOfRange { index, dim: system.dim });
        }
        let mut digits = vec![0; system.n];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = rest % system.d;
            rest /= system.d;
        }
        Ok(Self { digits, system })
    }

    /// Ket-style string: digits run together for `d ≤ 10`, comma separated above.
    pub fn ket_string(&self) -> String {
        if self.system.d <= 10 {
            self.digits.iter().map(|x| x.to_string()).collect()
        } else {
            self.digits.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for DigitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.ket_string())
    }
}

/// Free-function forms mirroring the method names.
pub fn add_mod(a: &DigitLabel, b: &DigitLabel) -> Result<DigitLabel> {
    a.add_mod(b)
}

pub fn dot_mod(k: &DigitLabel, q: &DigitLabel) -> Result<usize> {
    k.dot_mod(q)
}

pub fn label_to_index(q: &DigitLabel) -> usize {
    q.to_index()
}

pub fn index_to_label(index: usize, system: QuditSystem) -> Result<DigitLabel> {
    DigitLabel::from_index(index, system)
}

#[inline]
pub(crate) fn dot_digits(k: &[usize], q: &[usize], d: usize) -> usize {
    k.iter().zip(q).fold(0, |acc, (a, b)| (acc + a * b) % d)
}

/// All `d^n` labels in index order.
pub fn enumerate_labels(system: QuditSystem) -> impl ExactSizeIterator<Item = DigitLabel> {
    (0..system.dim).map(move |i| DigitLabel::from_index(i, system).expect("index in range"))
}

/// Trial division; `d` is a qudit dimension, so small.
pub fn is_prime(d: usize) -> bool {
    if d < 2 {
        return false;
    }
    if d < 4 {
        return true;
    }
    if d.is_multiple_of(2) {
        return false;
    }
    let mut f = 3;
    while f * f <= d {
        if d.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}
