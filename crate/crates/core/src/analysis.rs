//! Wavenumber and position observables, entropic uncertainty, the
//! translation-operator identity, and partitions of the basis by a functional.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::duality::{single_qudit_fourier, to_k_rep};
use crate::error::{Error, Result};
use crate::gates::translation_gate_matrix;
use crate::kernel::{max_entry_deviation, CMatrix};
use crate::state::{Representation, StateVector};
use crate::system::{dot_digits, enumerate_labels, DigitLabel};

/// A `d × d` Hermitian operator on one qudit, with the basis its matrix is written in.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQuditObservable {
    pub d: usize,
    pub matrix: CMatrix,
    pub basis: Representation,
}

impl SingleQuditObservable {
    /// Frobenius norm of `M − M†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

fn ramp(d: usize) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |m, _| Complex64::new(m as f64, 0.0)))
}

/// `K_k = diag(0, 1, …, d−1)`.
pub fn k_observable_in_k_rep(d: usize) -> SingleQuditObservable {
    SingleQuditObservable { d, matrix: ramp(d), basis: Representation::K }
}

/// `K_q = F K_k F†`; its eigenvectors are the planewave columns of `F`.
pub fn k_observable_in_q_rep(d: usize) -> SingleQuditObservable {
    let f = single_qudit_fourier(d);
    let matrix = f.matrix() * ramp(d) * f.adjoint();
    SingleQuditObservable { d, matrix, basis: Representation::Q }
}

/// `Q_q = diag(0, 1, …, d−1)`.
pub fn q_observable(d: usize) -> SingleQuditObservable {
    SingleQuditObservable { d, matrix: ramp(d), basis: Representation::Q }
}

/// `⟨k̂_j⟩` for every qudit `j`, contracting `K_q` against the `j`-th digit.
///
/// This is the plain mean of a cyclic variable; [`k_distributions`] gives the
/// full per-qudit distribution.
pub fn expect_k(s: &StateVector) -> Result<Vec<f64>> {
    s.expect_rep(Representation::Q)?;
    let system = s.system();
    let d = system.d();
    let k_q = k_observable_in_q_rep(d).matrix;
    let amps = s.amplitudes();
    let mut out = Vec::with_capacity(system.n());
    for wire in 0..system.n() {
        let stride = system.stride(wire);
        let mut acc = Complex64::new(0.0, 0.0);
        for base in (0..amps.len()).step_by(stride * d) {
            for offset in 0..stride {
                let at = |v: usize| amps[base + offset + v * stride];
                for r in 0..d {
                    let left = at(r).conj();
                    for c in 0..d {
                        acc += left * k_q[(r, c)] * at(c);
                    }
                }
            }
        }
        out.push(acc.re);
    }
    Ok(out)
}

/// `⟨q̂_j⟩ = Σ_q |ψ(q)|² q_j`.
pub fn expect_q(s: &StateVector) -> Result<Vec<f64>> {
    s.expect_rep(Representation::Q)?;
    (0..s.system().n())
        .map(|wire| Ok(mean(&s.marginal(wire)?)))
        .collect()
}

/// Marginal distribution of each `k_j`, from the k-rep amplitudes.
pub fn k_distributions(s: &StateVector) -> Result<Vec<Vec<f64>>> {
    let phi = to_k_rep(s)?;
    (0..phi.system().n()).map(|wire| phi.marginal(wire)).collect()
}

fn mean(distribution: &[f64]) -> f64 {
    distribution.iter().enumerate().map(|(v, p)| v as f64 * p).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Commutator {
    pub matrix: CMatrix,
    pub frobenius_norm: f64,
}

/// `[Q_q, K_q] = Q_q K_q − K_q Q_q`.
pub fn commutator_qk(d: usize) -> Commutator {
    let q = q_observable(d).matrix;
    let k = k_observable_in_q_rep(d).matrix;
    let matrix = &q * &k - &k * &q;
    let frobenius_norm = matrix.norm();
    Commutator { matrix, frobenius_norm }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub h_q: f64,
    pub h_k: f64,
    pub sum: f64,
    pub log_base: String,
}

impl EntropyReport {
    /// Converts a natural-log report to logarithms of `base`.
    pub fn in_base(&self, base: f64) -> Self {
        let scale = base.ln();
        Self {
            h_q: self.h_q / scale,
            h_k: self.h_k / scale,
            sum: self.sum / scale,
            log_base: format!("{base}"),
        }
    }
}

/// Shannon entropy in nats with `0·ln 0 = 0`.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    -probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// `H_q` from the given amplitudes and `H_k` from their k-rep image, in nats.
pub fn entropies(s: &StateVector) -> Result<EntropyReport> {
    s.expect_rep(Representation::Q)?;
    let h_q = shannon_entropy(&s.probabilities());
    let h_k = shannon_entropy(&to_k_rep(s)?.probabilities());
    Ok(EntropyReport { h_q, h_k, sum: h_q + h_k, log_base: "e".to_owned() })
}

/// `T_k(q) = diag(exp(−2πi m q / d))`, `m = 0 … d−1`.
pub fn translation_operator_k_rep(d: usize, q: usize) -> Result<CMatrix> {
    if q >= d {
        return Err(Error::ParameterOutOfRange { value: q, d });
    }
    Ok(CMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |m, _| {
        Complex64::from_polar(1.0, -2.0 * PI * ((m * q) % d) as f64 / d as f64)
    })))
}

/// Max-entry deviation between `exp(−2πi K_q q / d)` and the shift-by-`q`
/// permutation. The exponential is `F T_k(q) F†`, exact because `K_k` is diagonal.
pub fn verify_translation_identity(d: usize, q: usize) -> Result<f64> {
    let f = single_qudit_fourier(d);
    let exp_k = f.matrix() * translation_operator_k_rep(d, q)? * f.adjoint();
    Ok(max_entry_deviation(&exp_k, &translation_gate_matrix(d, q)?))
}

/// The `d` classes `{q : k·q = v}` induced by a functional `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub functional: DigitLabel,
    pub classes: Vec<Vec<DigitLabel>>,
}

impl Partition {
    /// Class index `k·q` of a basis label.
    pub fn class_of(&self, q: &DigitLabel) -> Result<usize> {
        self.functional.dot_mod(q)
    }

    /// All `d` classes have `d^(n−1)` labels. Holds for every nonzero `k`
    /// when `d` is prime; for composite `d` it needs `gcd(k_1, …, k_n, d) = 1`.
    pub fn is_balanced(&self) -> bool {
        let size = self.classes[0].len();
        self.classes.iter().all(|class| class.len() == size)
    }

    pub fn to_file(&self) -> PartitionFile {
        PartitionFile {
            k: self.functional.digits().to_vec(),
            classes: self
                .classes
                .iter()
                .map(|class| class.iter().map(DigitLabel::ket_string).collect())
                .collect(),
        }
    }
}

/// Classes are listed in basis index order.
pub fn partition(k: &DigitLabel) -> Partition {
    let system = k.system();
    let mut classes = vec![Vec::new(); system.d()];
    for q in enumerate_labels(system) {
        classes[dot_digits(k.digits(), q.digits(), system.d())].push(q);
    }
    Partition { functional: k.clone(), classes }
}

/// `{"k": [digits], "classes": [[ket strings]...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionFile {
    pub k: Vec<usize>,
    pub classes: Vec<Vec<String>>,
}
