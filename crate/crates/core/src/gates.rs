//! Structured qudit gates and circuits.
//!
//! Translations and (doubly) controlled adds are basis permutations and are
//! applied as index arithmetic in `O(d^n)`; no gate matrix is ever formed
//! outside [`circuit_unitary_oracle`] and [`translation_gate_matrix`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::duality::ORACLE_DIM_CAP;
use crate::error::{Error, Result};
use crate::kernel::{apply_local_in_place, check_square, unitarity_deviation, CMatrix};
use crate::state::{Representation, StateVector, NORM_TOLERANCE};
use crate::system::{DigitLabel, QuditSystem};

#[derive(Debug, Clone, PartialEq)]
pub enum GateDescriptor {
    /// `|c⟩ ↦ |c ⊕ amount⟩` on `target`.
    Translation { target: usize, amount: usize },
    /// `q_target ← q_target ⊕ multiplier·q_control`.
    ControlledAdd { control: usize, target: usize, multiplier: usize },
    /// `q_target ← q_target ⊕ q_k_control·q_j_control`.
    DoublyControlledAdd { k_control: usize, j_control: usize, target: usize },
    SingleQuditUnitary { target: usize, matrix: CMatrix },
}

impl GateDescriptor {
    pub fn wires(&self) -> Vec<usize> {
        match *self {
            GateDescriptor::Translation { target, .. } => vec![target],
            GateDescriptor::ControlledAdd { control, target, .. } => vec![control, target],
            GateDescriptor::DoublyControlledAdd { k_control, j_control, target } => {
                vec![k_control, j_control, target]
            }
            GateDescriptor::SingleQuditUnitary { target, .. } => vec![target],
        }
    }

    pub fn validate(&self, system: QuditSystem) -> Result<()> {
        let wires = self.wires();
        for (i, &w) in wires.iter().enumerate() {
            system.check_wire(w)?;
            if wires[..i].contains(&w) {
                return Err(Error::WireClash { wire: w });
            }
        }
        let d = system.d();
        match self {
            GateDescriptor::Translation { amount: value, .. }
            | GateDescriptor::ControlledAdd { multiplier: value, .. } => {
                if *value >= d {
                    return Err(Error::ParameterOutOfRange { value: *value, d });
                }
            }
            GateDescriptor::DoublyControlledAdd { .. } => {}
            GateDescriptor::SingleQuditUnitary { matrix, .. } => {
                check_square(matrix, d)?;
                let deviation = unitarity_deviation(matrix);
                if deviation.is_nan() || deviation > NORM_TOLERANCE {
                    return Err(Error::NotUnitary { deviation });
                }
            }
        }
        Ok(())
    }

    /// Gates whose ordered product undoes `self`.
    pub fn inverse(&self, d: usize) -> Vec<GateDescriptor> {
        match self {
            GateDescriptor::Translation { target, amount } => {
                vec![GateDescriptor::Translation { target: *target, amount: (d - amount) % d }]
            }
            GateDescriptor::ControlledAdd { control, target, multiplier } => vec![GateDescriptor::ControlledAdd {
                control: *control,
                target: *target,
                multiplier: (d - multiplier) % d,
            }],
            // Adding k·j a total of d times is the identity.
            GateDescriptor::DoublyControlledAdd { .. } => vec![self.clone(); d - 1],
            GateDescriptor::SingleQuditUnitary { target, matrix } => vec![GateDescriptor::SingleQuditUnitary {
                target: *target,
                matrix: matrix.adjoint(),
            }],
        }
    }

    /// Applies an already validated gate to a q-rep amplitude buffer.
    fn apply(&self, amplitudes: &mut Vec<Complex64>, system: QuditSystem) {
        let d = system.d();
        match *self {
            GateDescriptor::Translation { target, amount } => {
                let stride = system.stride(target);
                permute(amplitudes, |i| {
                    let t = (i / stride) % d;
                    i - t * stride + ((t + amount) % d) * stride
                });
            }
            GateDescriptor::ControlledAdd { control, target, multiplier } => {
                let (cs, ts) = (system.stride(control), system.stride(target));
                permute(amplitudes, |i| {
                    let c = (i / cs) % d;
                    let t = (i / ts) % d;
                    i - t * ts + ((t + multiplier * c) % d) * ts
                });
            }
            GateDescriptor::DoublyControlledAdd { k_control, j_control, target } => {
                let (ks, js, ts) = (system.stride(k_control), system.stride(j_control), system.stride(target));
                permute(amplitudes, |i| {
                    let k = (i / ks) % d;
                    let j = (i / js) % d;
                    let t = (i / ts) % d;
                    i - t * ts + ((t + k * j) % d) * ts
                });
            }
            GateDescriptor::SingleQuditUnitary { target, ref matrix } => {
                apply_local_in_place(amplitudes, system, target, matrix);
            }
        }
    }
}

/// `out[dest(i)] = in[i]`; `dest` must be a bijection on the index range.
fn permute(amplitudes: &mut Vec<Complex64>, dest: impl Fn(usize) -> usize) {
    let mut out = vec![Complex64::new(0.0, 0.0); amplitudes.len()];
    for (i, a) in amplitudes.iter().enumerate() {
        out[dest(i)] = *a;
    }
    *amplitudes = out;
}

/// Shift matrix with `entry[r][c] = 1` iff `r = (c + a) mod d`.
pub fn translation_gate_matrix(d: usize, a: usize) -> Result<CMatrix> {
    if a >= d {
        return Err(Error::ParameterOutOfRange { value: a, d });
    }
    Ok(CMatrix::from_fn(d, d, |r, c| {
        if r == (c + a) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

fn apply_gate(s: &StateVector, gate: &GateDescriptor) -> Result<StateVector> {
    s.expect_rep(Representation::Q)?;
    gate.validate(s.system())?;
    let mut amps = s.amplitudes().to_vec();
    gate.apply(&mut amps, s.system());
    Ok(StateVector::from_unitary_image(s.system(), Representation::Q, amps))
}

pub fn apply_translation(s: &StateVector, target: usize, amount: usize) -> Result<StateVector> {
    apply_gate(s, &GateDescriptor::Translation { target, amount })
}

pub fn apply_controlled_add(s: &StateVector, control: usize, target: usize, multiplier: usize) -> Result<StateVector> {
    apply_gate(s, &GateDescriptor::ControlledAdd { control, target, multiplier })
}

pub fn apply_doubly_controlled_add(
    s: &StateVector,
    k_control: usize,
    j_control: usize,
    target: usize,
) -> Result<StateVector> {
    apply_gate(s, &GateDescriptor::DoublyControlledAdd { k_control, j_control, target })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    system: QuditSystem,
    gates: Vec<GateDescriptor>,
}

impl Circuit {
    pub fn new(system: QuditSystem) -> Self {
        Self { system, gates: Vec::new() }
    }

    pub fn from_gates(system: QuditSystem, gates: Vec<GateDescriptor>) -> Result<Self> {
        let mut circuit = Self::new(system);
        for gate in gates {
            circuit.push(gate)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: GateDescriptor) -> Result<&mut Self> {
        gate.validate(self.system)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn system(&self) -> QuditSystem {
        self.system
    }

    pub fn gates(&self) -> &[GateDescriptor] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Reversed order, each gate replaced by its inverse.
    pub fn inverse(&self) -> Self {
        let d = self.system.d();
        Self {
            system: self.system,
            gates: self.gates.iter().rev().flat_map(|g| g.inverse(d)).collect(),
        }
    }

    pub fn run(&self, s: &StateVector) -> Result<StateVector> {
        s.expect_rep(Representation::Q)?;
        self.system.ensure_same(&s.system())?;
        let mut amps = s.amplitudes().to_vec();
        self.run_in_place(&mut amps);
        Ok(StateVector::from_unitary_image(self.system, Representation::Q, amps))
    }

    fn run_in_place(&self, amplitudes: &mut Vec<Complex64>) {
        for gate in &self.gates {
            gate.apply(amplitudes, self.system);
        }
    }

    pub fn to_file(&self) -> CircuitFile {
        CircuitFile {
            n: self.system.n(),
            d: self.system.d(),
            gates: self.gates.iter().map(GateFile::from).collect(),
        }
    }
}

pub fn run_circuit(c: &Circuit, s: &StateVector) -> Result<StateVector> {
    c.run(s)
}

/// Dense unitary of the circuit, one column per basis input.
pub fn circuit_unitary_oracle(c: &Circuit) -> Result<CMatrix> {
    let dim = c.system.dim();
    if dim > ORACLE_DIM_CAP {
        return Err(Error::OracleCap { dim, cap: ORACLE_DIM_CAP });
    }
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[col] = Complex64::new(1.0, 0.0);
        c.run_in_place(&mut amps);
        out.column_mut(col).copy_from_slice(&amps);
    }
    Ok(out)
}

/// Wire roles in the functional-creation circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionalCircuitLayout {
    pub handler_wires: Vec<usize>,
    pub source_wires: Vec<usize>,
    pub holder_wire: usize,
}

impl FunctionalCircuitLayout {
    /// Handlers on wires `0..m`, sources on `m..2m`, holder on `2m`.
    pub fn standard(m: usize) -> Self {
        Self {
            handler_wires: (0..m).collect(),
            source_wires: (m..2 * m).collect(),
            holder_wire: 2 * m,
        }
    }

    pub fn m(&self) -> usize {
        self.source_wires.len()
    }

    pub fn total_wires(&self) -> usize {
        2 * self.m() + 1
    }
}

/// One doubly controlled add per source qudit: handler `l` scales source `l`
/// into the holder, so a holder starting at `|0⟩` ends at `|k·q mod d⟩`.
pub fn build_functional_circuit(m: usize, d: usize) -> Result<(Circuit, FunctionalCircuitLayout)> {
    if m == 0 {
        return Err(Error::InvalidSystem { n: 0, d, reason: "functional circuit needs at least one source" });
    }
    let layout = FunctionalCircuitLayout::standard(m);
    let system = QuditSystem::new(layout.total_wires(), d)?;
    let gates = layout
        .handler_wires
        .iter()
        .zip(&layout.source_wires)
        .map(|(&k_control, &j_control)| GateDescriptor::DoublyControlledAdd {
            k_control,
            j_control,
            target: layout.holder_wire,
        })
        .collect();
    Ok((Circuit::from_gates(system, gates)?, layout))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalOutput {
    pub state: StateVector,
    pub layout: FunctionalCircuitLayout,
    pub holder_probabilities: Vec<f64>,
}

/// Loads `handlers ⊗ |sources⟩ ⊗ |0⟩` and runs the functional-creation circuit.
///
/// The handler amplitudes `b_k` are placed on the handler qudits' computational
/// basis whatever their representation tag.
pub fn create_functional(handlers: &StateVector, sources: &DigitLabel) -> Result<FunctionalOutput> {
    let hs = handlers.system();
    let ss = sources.system();
    if hs.d() != ss.d() {
        return Err(Error::DimensionMismatch { left: hs.d(), right: ss.d() });
    }
    if hs.n() != ss.n() {
        return Err(Error::LabelLength { expected: hs.n(), got: ss.n() });
    }
    let d = hs.d();
    let (circuit, layout) = build_functional_circuit(hs.n(), d)?;
    let handler_reg = StateVector::from_unitary_image(hs, Representation::Q, handlers.amplitudes().to_vec());
    let source_reg = StateVector::basis_state(sources, Representation::Q);
    let holder = StateVector::basis_state(&QuditSystem::new(1, d)?.zero_label(), Representation::Q);
    let input = handler_reg.tensor_product(&source_reg)?.tensor_product(&holder)?;
    let state = circuit.run(&input)?;
    let holder_probabilities = state.marginal(layout.holder_wire)?;
    Ok(FunctionalOutput { state, layout, holder_probabilities })
}

/// On-disk circuit: `{"n", "d", "gates": [{"kind": ..., ...}]}` with 0-based wires.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub n: usize,
    pub d: usize,
    pub gates: Vec<GateFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GateFile {
    Translation { target: usize, amount: usize },
    Cadd { control: usize, target: usize, multiplier: usize },
    Ccadd { k_control: usize, j_control: usize, target: usize },
    /// Row-major `d × d` matrix of `[re, im]` pairs.
    Unitary { target: usize, matrix: Vec<Vec<[f64; 2]>> },
}

impl From<&GateDescriptor> for GateFile {
    fn from(gate: &GateDescriptor) -> Self {
        match *gate {
            GateDescriptor::Translation { target, amount } => GateFile::Translation { target, amount },
            GateDescriptor::ControlledAdd { control, target, multiplier } => {
                GateFile::Cadd { control, target, multiplier }
            }
            GateDescriptor::DoublyControlledAdd { k_control, j_control, target } => {
                GateFile::Ccadd { k_control, j_control, target }
            }
            GateDescriptor::SingleQuditUnitary { target, ref matrix } => GateFile::Unitary {
                target,
                matrix: matrix
                    .row_iter()
                    .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            },
        }
    }
}

impl GateFile {
    fn into_descriptor(self, d: usize) -> Result<GateDescriptor> {
        Ok(match self {
            GateFile::Translation { target, amount } => GateDescriptor::Translation { target, amount },
            GateFile::Cadd { control, target, multiplier } => {
                GateDescriptor::ControlledAdd { control, target, multiplier }
            }
            GateFile::Ccadd { k_control, j_control, target } => {
                GateDescriptor::DoublyControlledAdd { k_control, j_control, target }
            }
            GateFile::Unitary { target, matrix } => {
                let rows = matrix.len();
                if rows != d || matrix.iter().any(|r| r.len() != d) {
                    let cols = matrix.iter().map(Vec::len).max().unwrap_or(0);
                    return Err(Error::MatrixShape { rows, cols, d });
                }
                let matrix = CMatrix::from_fn(d, d, |r, c| Complex64::new(matrix[r][c][0], matrix[r][c][1]));
                GateDescriptor::SingleQuditUnitary { target, matrix }
            }
        })
    }
}

impl TryFrom<CircuitFile> for Circuit {
    type Error = Error;

    fn try_from(file: CircuitFile) -> Result<Self> {
        let system = QuditSystem::new(file.n, file.d)?;
        let gates = file
            .gates
            .into_iter()
            .map(|g| g.into_descriptor(file.d))
            .collect::<Result<Vec<_>>>()?;
        Circuit::from_gates(system, gates)
    }
}
