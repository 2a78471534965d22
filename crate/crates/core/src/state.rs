//! Dense amplitude vectors tagged with the representation they live in.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{DigitLabel, QuditSystem};

/// Allowed deviation of `Σ|a|²` from one.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Which basis the amplitudes are expressed in: basis states `q` or functionals `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representation {
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "k")]
    K,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Q => f.write_str("q-rep"),
            Representation::K => f.write_str("k-rep"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    system: QuditSystem,
    rep: Representation,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn basis_state(label: &DigitLabel, rep: Representation) -> Self {
        let system = label.system();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); system.dim()];
        amplitudes[label.to_index()] = Complex64::new(1.0, 0.0);
        Self { system, rep, amplitudes }
    }

    /// Validates length and normalization; amplitudes are stored as given.
    pub fn from_amplitudes(
        system: QuditSystem,
        rep: Representation,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        if amplitudes.len() != system.dim() {
            return Err(Error::AmplitudeLength { expected: system.dim(), got: amplitudes.len() });
        }
        let norm_sqr = norm_sqr(&amplitudes);
        let deviation = (norm_sqr - 1.0).abs();
        if deviation.is_nan() || deviation > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr, deviation });
        }
        Ok(Self { system, rep, amplitudes })
    }

    /// For amplitudes produced by a unitary map of a valid state.
    pub(crate) fn from_unitary_image(
        system: QuditSystem,
        rep: Representation,
        amplitudes: Vec<Complex64>,
    ) -> Self {
        debug_assert_eq!(amplitudes.len(), system.dim());
        Self { system, rep, amplitudes }
    }

    /// Normalized state with i.i.d. complex Gaussian amplitudes (Haar-distributed direction).
    pub fn random<R: Rng + ?Sized>(system: QuditSystem, rep: Representation, rng: &mut R) -> Self {
        let mut amplitudes: Vec<Complex64> = (0..system.dim())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = norm_sqr(&amplitudes).sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self { system, rep, amplitudes }
    }

    #[inline]
    pub fn system(&self) -> QuditSystem {
        self.system
    }

    #[inline]
    pub fn rep(&self) -> Representation {
        self.rep
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn amplitude(&self, label: &DigitLabel) -> Result<Complex64> {
        self.system.ensure_same(&label.system())?;
        Ok(self.amplitudes[label.to_index()])
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn expect_rep(&self, expected: Representation) -> Result<()> {
        if self.rep == expected {
            Ok(())
        } else {
            Err(Error::RepresentationMismatch { expected, got: self.rep })
        }
    }

    fn ensure_compatible(&self, other: &Self) -> Result<()> {
        self.system.ensure_same(&other.system)?;
        other.expect_rep(self.rep)
    }

    /// `Σ_i conj(f_i) g_i`; both states must share system and representation.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.ensure_compatible(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(f, g)| f.conj() * g)
            .sum())
    }

    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr().min(1.0))
    }

    /// `self ⊗ other`, with `self`'s qudits most significant.
    pub fn tensor_product(&self, other: &Self) -> Result<Self> {
        if self.system.d() != other.system.d() {
            return Err(Error::DimensionMismatch { left: self.system.d(), right: other.system.d() });
        }
        other.expect_rep(self.rep)?;
        let system = QuditSystem::new(self.system.n() + other.system.n(), self.system.d())?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|f| other.amplitudes.iter().map(move |g| f * g))
            .collect();
        Ok(Self { system, rep: self.rep, amplitudes })
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Marginal distribution of the digit on `wire`.
    pub fn marginal(&self, wire: usize) -> Result<Vec<f64>> {
        self.system.check_wire(wire)?;
        let mut out = vec![0.0; self.system.d()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            out[self.system.digit_of(i, wire)] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Largest elementwise modulus difference; `None` if the states are incomparable.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        self.ensure_compatible(other).ok()?;
        Some(max_abs_diff(&self.amplitudes, &other.amplitudes))
    }

    pub fn to_file(&self) -> StateFile {
        StateFile {
            n: self.system.n(),
            d: self.system.d(),
            rep: self.rep,
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

pub fn inner_product(f: &StateVector, g: &StateVector) -> Result<Complex64> {
    f.inner_product(g)
}

pub fn tensor_product(f: &StateVector, g: &StateVector) -> Result<StateVector> {
    f.tensor_product(g)
}

pub fn fidelity(f: &StateVector, g: &StateVector) -> Result<f64> {
    f.fidelity(g)
}

pub(crate) fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

pub(crate) fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// On-disk form: `{"n", "d", "rep": "q"|"k", "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: usize,
    pub d: usize,
    pub rep: Representation,
    pub amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<StateFile> for StateVector {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        let system = QuditSystem::new(file.n, file.d)?;
        let amplitudes = file.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        StateVector::from_amplitudes(system, file.rep, amplitudes)
    }
}
