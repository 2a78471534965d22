//! Fourier duality between the basis-state (`q`) and functional (`k`) pictures.
//!
//! The single-qudit matrix has `F[q][k] = ω^(q·k) / √d` with `ω = exp(2πi/d)`
//! and carries k-rep amplitudes to q-rep amplitudes; `F†` goes the other way.
//! Because `exp(2πi (Σ_j k_j q_j) / d)` does not care whether the exponent sum
//! is reduced mod `d`, the n-qudit transform is exactly `F ⊗ … ⊗ F` and is
//! applied one qudit at a time.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{apply_local_in_place, unitarity_deviation, CMatrix};
use crate::state::{Representation, StateVector};
use crate::system::{dot_digits, enumerate_labels, DigitLabel, QuditSystem};

/// Largest dimension for which dense `d^n × d^n` oracles are built.
pub const ORACLE_DIM_CAP: usize = 4096;

/// `ω^m` for `m = 0 … d−1`.
pub fn roots_of_unity(d: usize) -> Vec<Complex64> {
    (0..d)
        .map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / d as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierMatrix {
    d: usize,
    entries: CMatrix,
}

impl FourierMatrix {
    pub fn new(d: usize) -> Self {
        assert!(d >= 2, "qudit dimension must be at least 2");
        let roots = roots_of_unity(d);
        let scale = 1.0 / (d as f64).sqrt();
        let entries = CMatrix::from_fn(d, d, |q, k| roots[(q * k) % d] * scale);
        Self { d, entries }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn adjoint(&self) -> CMatrix {
        self.entries.adjoint()
    }

    /// Frobenius norm of `F F† − I`.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.entries)
    }
}

pub fn single_qudit_fourier(d: usize) -> FourierMatrix {
    FourierMatrix::new(d)
}

fn transform_all(amplitudes: &mut [Complex64], system: QuditSystem, matrix: &CMatrix) {
    for wire in 0..system.n() {
        apply_local_in_place(amplitudes, system, wire, matrix);
    }
}

/// `ψ(q) = d^(−n/2) Σ_k φ(k) exp(2πi k·q / d)`.
pub fn to_q_rep(phi: &StateVector) -> Result<StateVector> {
    phi.expect_rep(Representation::K)?;
    let system = phi.system();
    let f = FourierMatrix::new(system.d());
    let mut amps = phi.amplitudes().to_vec();
    transform_all(&mut amps, system, f.matrix());
    Ok(StateVector::from_unitary_image(system, Representation::Q, amps))
}

/// `φ(k) = d^(−n/2) Σ_q ψ(q) exp(−2πi k·q / d)`.
pub fn to_k_rep(psi: &StateVector) -> Result<StateVector> {
    psi.expect_rep(Representation::Q)?;
    let system = psi.system();
    let f_dag = FourierMatrix::new(system.d()).adjoint();
    let mut amps = psi.amplitudes().to_vec();
    transform_all(&mut amps, system, &f_dag);
    Ok(StateVector::from_unitary_image(system, Representation::K, amps))
}

/// Q-rep form of the basis functional `|k⟩`: `⟨q|k⟩ = d^(−n/2) exp(2πi k·q / d)`.
pub fn planewave(k: &DigitLabel) -> StateVector {
    let system = k.system();
    let roots = roots_of_unity(system.d());
    let scale = 1.0 / (system.dim() as f64).sqrt();
    let amps = enumerate_labels(system)
        .map(|q| roots[dot_digits(k.digits(), q.digits(), system.d())] * scale)
        .collect();
    StateVector::from_unitary_image(system, Representation::Q, amps)
}

/// Dense `d^n × d^n` matrix of the k→q transform, built entry by entry.
pub fn dense_fourier_oracle(system: QuditSystem) -> Result<CMatrix> {
    let dim = system.dim();
    if dim > ORACLE_DIM_CAP {
        return Err(Error::OracleCap { dim, cap: ORACLE_DIM_CAP });
    }
    let d = system.d();
    let roots = roots_of_unity(d);
    let scale = 1.0 / (dim as f64).sqrt();
    let labels: Vec<_> = enumerate_labels(system).collect();
    Ok(CMatrix::from_fn(dim, dim, |q, k| {
        roots[dot_digits(labels[k].digits(), labels[q].digits(), d)] * scale
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{kron, max_entry_deviation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn sys(n: usize, d: usize) -> QuditSystem {
        QuditSystem::new(n, d).unwrap()
    }

    fn label(n: usize, d: usize, digits: &[usize]) -> DigitLabel {
        DigitLabel::new(sys(n, d), digits.to_vec()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fourier_matrix_examples() {
        let h = FourierMatrix::new(2);
        let s = FRAC_1_SQRT_2;
        let expected = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
        assert!(max_entry_deviation(h.matrix(), &expected) < 1e-15);

        // d = 3, row 2: (1, ω², ω) / √3
        let f3 = FourierMatrix::new(3);
        let w = c((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin());
        let r3 = 1.0 / 3f64.sqrt();
        for (col, want) in [c(1.0, 0.0), w * w, w].iter().enumerate() {
            assert!((f3.matrix()[(2, col)] - want * r3).norm() < 1e-15);
        }
        for d in 2..=16 {
            assert!(FourierMatrix::new(d).unitarity_deviation() < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn to_q_rep_examples() {
        let zero = StateVector::basis_state(&label(3, 4, &[0, 0, 0]), Representation::K);
        let psi = to_q_rep(&zero).unwrap();
        assert_eq!(psi.rep(), Representation::Q);
        assert!(psi.amplitudes().iter().all(|a| (a - c(0.125, 0.0)).norm() < 1e-15));

        let one = StateVector::basis_state(&label(1, 2, &[1]), Representation::K);
        let psi = to_q_rep(&one).unwrap();
        assert!((psi.amplitudes()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((psi.amplitudes()[1] - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        assert!(matches!(to_q_rep(&psi), Err(Error::RepresentationMismatch { .. })));
        assert!(matches!(to_k_rep(&one), Err(Error::RepresentationMismatch { .. })));
    }

    #[test]
    fn to_k_rep_examples() {
        let psi = StateVector::basis_state(&label(2, 3, &[0, 0]), Representation::Q);
        let phi = to_k_rep(&psi).unwrap();
        assert!(phi.amplitudes().iter().all(|a| (a - c(1.0 / 3.0, 0.0)).norm() < 1e-15));

        // q = (1,0): φ(k) = ω^(−k_1) / 3, evaluated straight from the sum.
        let psi = StateVector::basis_state(&label(2, 3, &[1, 0]), Representation::Q);
        let phi = to_k_rep(&psi).unwrap();
        for k in enumerate_labels(sys(2, 3)) {
            let want = Complex64::from_polar(1.0 / 3.0, -2.0 * PI * k.digits()[0] as f64 / 3.0);
            assert!((phi.amplitude(&k).unwrap() - want).norm() < 1e-15);
        }

        let k0 = label(2, 5, &[3, 1]);
        let delta = to_k_rep(&planewave(&k0)).unwrap();
        let expected = StateVector::basis_state(&k0, Representation::K);
        assert!(delta.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn planewave_examples() {
        let flat = planewave(&label(2, 3, &[0, 0]));
        assert!(flat.amplitudes().iter().all(|a| (a - c(1.0 / 3.0, 0.0)).norm() < 1e-15));
        let pw = planewave(&label(1, 2, &[1]));
        assert!((pw.amplitudes()[1] - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let pw = planewave(&label(2, 3, &[2, 1]));
        let want = Complex64::from_polar(1.0 / 3.0, 2.0 * PI / 3.0);
        assert!((pw.amplitude(&label(2, 3, &[1, 2])).unwrap() - want).norm() < 1e-15);
    }

    #[test]
    fn dense_oracle_examples() {
        let h = FourierMatrix::new(2);
        let hh = kron(h.matrix(), h.matrix());
        assert!(max_entry_deviation(&dense_fourier_oracle(sys(2, 2)).unwrap(), &hh) < 1e-15);
        assert!(unitarity_deviation(&dense_fourier_oracle(sys(3, 3)).unwrap()) < 1e-11);
        assert_eq!(
            dense_fourier_oracle(sys(5, 6)),
            Err(Error::OracleCap { dim: 7776, cap: ORACLE_DIM_CAP })
        );

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..100 {
            let system = sys(1 + i % 3, 2 + i % 4);
            let oracle = dense_fourier_oracle(system).unwrap();
            let phi = StateVector::random(system, Representation::K, &mut rng);
            let v = nalgebra::DVector::from_column_slice(phi.amplitudes());
            let dense = &oracle * v;
            let fast = to_q_rep(&phi).unwrap();
            let err = dense.iter().zip(fast.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }

    proptest::proptest! {
        #[test]
        fn round_trip_and_parseval(seed in 0u64..100_000, n in 1usize..=4, d in 2usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let psi = StateVector::random(sys(n, d), Representation::Q, &mut rng);
            let phi = to_k_rep(&psi).unwrap();
            proptest::prop_assert!((phi.norm_sqr() - psi.norm_sqr()).abs() < 1e-12);
            let back = to_q_rep(&phi).unwrap();
            proptest::prop_assert!(back.max_abs_diff(&psi).unwrap() < 1e-12);
        }
    }
}
