//! Strided application of `d × d` operators to one qudit of a dense vector.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::system::QuditSystem;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) fn check_square(matrix: &CMatrix, d: usize) -> Result<()> {
    if matrix.nrows() == d && matrix.ncols() == d {
        Ok(())
    } else {
        Err(Error::MatrixShape { rows: matrix.nrows(), cols: matrix.ncols(), d })
    }
}

/// In place: `amplitudes ← (I ⊗ … ⊗ M_wire ⊗ … ⊗ I) amplitudes`.
///
/// Runs in `O(d^(n+1))` without forming the full operator.
pub(crate) fn apply_local_in_place(
    amplitudes: &mut [Complex64],
    system: QuditSystem,
    wire: usize,
    matrix: &CMatrix,
) {
    let d = system.d();
    let stride = system.stride(wire);
    let block = stride * d;
    let mut fiber = vec![Complex64::new(0.0, 0.0); d];
    for base in (0..amplitudes.len()).step_by(block) {
        for offset in 0..stride {
            let start = base + offset;
            for (v, slot) in fiber.iter_mut().enumerate() {
                *slot = amplitudes[start + v * stride];
            }
            for r in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, x) in fiber.iter().enumerate() {
                    acc += matrix[(r, c)] * x;
                }
                amplitudes[start + r * stride] = acc;
            }
        }
    }
}

/// Applies a (not necessarily unitary) single-qudit operator at `wire` and
/// returns the raw amplitude vector.
pub fn apply_local_operator(state: &StateVector, wire: usize, matrix: &CMatrix) -> Result<Vec<Complex64>> {
    let system = state.system();
    system.check_wire(wire)?;
    check_square(matrix, system.d())?;
    let mut out = state.amplitudes().to_vec();
    apply_local_in_place(&mut out, system, wire, matrix);
    Ok(out)
}

/// Frobenius norm of `M M† − I`.
pub fn unitarity_deviation(matrix: &CMatrix) -> f64 {
    let n = matrix.nrows();
    (matrix * matrix.adjoint() - CMatrix::identity(n, n)).norm()
}

pub fn max_entry_deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Kronecker product, used by tests and oracles.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
