//! Acceptance criteria, one PASS/FAIL line each. Tolerances and runtime
//! budgets are fixed here; the target exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qudit_duality::analysis::{
    commutator_qk, entropies, k_observable_in_q_rep, partition, q_observable, verify_translation_identity,
};
use qudit_duality::duality::{dense_fourier_oracle, planewave, to_k_rep, to_q_rep};
use qudit_duality::gates::{build_functional_circuit, circuit_unitary_oracle, Circuit, GateDescriptor};
use qudit_duality::kernel::{apply_local_operator, CMatrix};
use qudit_duality::system::enumerate_labels;
use qudit_duality::{DigitLabel, QuditSystem, Representation, StateVector};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn sys(n: usize, d: usize) -> QuditSystem {
    QuditSystem::new(n, d).unwrap()
}

fn label(system: QuditSystem, digits: &[usize]) -> DigitLabel {
    DigitLabel::new(system, digits.to_vec()).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Systems with `d` in `ds` and `d^n ≤ cap`.
fn small_systems(ds: impl IntoIterator<Item = usize>, cap: usize) -> Vec<QuditSystem> {
    let mut out = Vec::new();
    for d in ds {
        let mut n = 1;
        while d.pow(n as u32) <= cap {
            out.push(sys(n, d));
            n += 1;
        }
    }
    out
}

fn ac1_partitions() -> Outcome {
    let s = sys(2, 3);
    let as_sets = |k: &[usize]| -> Vec<Vec<String>> {
        partition(&label(s, k))
            .to_file()
            .classes
            .into_iter()
            .map(|mut class| {
                class.sort();
                class
            })
            .collect()
    };
    let sorted = |classes: [[&str; 3]; 3]| -> Vec<Vec<String>> {
        classes
            .iter()
            .map(|class| {
                let mut v: Vec<String> = class.iter().map(|x| x.to_string()).collect();
                v.sort();
                v
            })
            .collect()
    };
    let q2 = sorted([["00", "10", "20"], ["01", "11", "21"], ["02", "12", "22"]]);
    let k21 = sorted([["00", "11", "22"], ["01", "20", "12"], ["10", "21", "02"]]);
    let ok = as_sets(&[0, 1]) == q2 && as_sets(&[2, 1]) == k21;
    outcome(ok, "k = (0,1) and k = (2,1), six classes")
}

fn ac2_controlled_add_matrix() -> Outcome {
    let gate = GateDescriptor::ControlledAdd { control: 0, target: 1, multiplier: 2 };
    let u = circuit_unitary_oracle(&Circuit::from_gates(sys(2, 3), vec![gate]).unwrap()).unwrap();
    let u1 = [[0, 1, 0], [0, 0, 1], [1, 0, 0]];
    let u2 = [[0, 0, 1], [1, 0, 0], [0, 1, 0]];
    let id = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let blocks = [id, u1, u2];
    let mut mismatches = 0;
    for r in 0..9 {
        for col in 0..9 {
            let want = if r / 3 == col / 3 { blocks[r / 3][r % 3][col % 3] as f64 } else { 0.0 };
            if u[(r, col)] != c(want, 0.0) {
                mismatches += 1;
            }
        }
    }
    outcome(mismatches == 0, format!("{mismatches} of 81 entries differ from diag(I, U1, U2)"))
}

fn ac3_functional_exhaustive() -> Outcome {
    let mut worst = 0.0f64;
    let mut wrong = 0;
    let mut cases = 0;
    for (d, m) in [(3, 2), (2, 3), (6, 1)] {
        let (circuit, layout) = build_functional_circuit(m, d).unwrap();
        let register = sys(m, d);
        for k in enumerate_labels(register) {
            for q in enumerate_labels(register) {
                let mut digits = k.digits().to_vec();
                digits.extend_from_slice(q.digits());
                digits.push(0);
                let input = StateVector::basis_state(&label(circuit.system(), &digits), Representation::Q);
                let out = circuit.run(&input).unwrap();
                // value of k·q computed by hand
                let value = k.digits().iter().zip(q.digits()).map(|(a, b)| a * b).sum::<usize>() % d;
                *digits.last_mut().unwrap() = value;
                let amp = out.amplitude(&label(circuit.system(), &digits)).unwrap();
                worst = worst.max((amp.norm() - 1.0).abs());
                let holder = out.marginal(layout.holder_wire).unwrap();
                if (holder[value] - 1.0).abs() > 1e-12 {
                    wrong += 1;
                }
                cases += 1;
            }
        }
    }
    outcome(
        cases == 181 && wrong == 0 && worst < 1e-12,
        format!("{cases} cases, {wrong} wrong holders, max | |amp| - 1 | = {worst:e}"),
    )
}

fn ac4_superposed_handlers() -> Outcome {
    let (d, m) = (3, 2);
    let (circuit, _) = build_functional_circuit(m, d).unwrap();
    let register = sys(m, d);
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst = 1.0f64;
    for _ in 0..50 {
        let handlers = StateVector::random(register, Representation::Q, &mut rng);
        let q = [rng.random_range(0..d), rng.random_range(0..d)];
        let source = StateVector::basis_state(&label(register, &q), Representation::Q);
        let holder = StateVector::basis_state(&label(sys(1, d), &[0]), Representation::Q);
        let input = handlers.tensor_product(&source).unwrap().tensor_product(&holder).unwrap();
        let out = circuit.run(&input).unwrap();

        // Σ_k b_k |k⟩|q⟩|k·q⟩ by direct index arithmetic: k occupies the top two digits.
        let mut reference = vec![c(0.0, 0.0); d.pow(5)];
        for (k_index, b) in handlers.amplitudes().iter().enumerate() {
            let (k1, k2) = (k_index / d, k_index % d);
            let value = (k1 * q[0] + k2 * q[1]) % d;
            let index = (((k1 * d + k2) * d + q[0]) * d + q[1]) * d + value;
            reference[index] = *b;
        }
        let overlap: Complex64 = reference.iter().zip(out.amplitudes()).map(|(r, o)| r.conj() * o).sum();
        worst = worst.min(overlap.norm_sqr());
    }
    outcome(worst >= 1.0 - 1e-12, format!("min fidelity over 50 handler states = {worst:.15}"))
}

fn ac5_fourier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut round_trip = 0.0f64;
    for i in 0..200 {
        let d = 2 + i % 5;
        let n = rng.random_range(1..=6);
        let psi = StateVector::random(sys(n, d), Representation::Q, &mut rng);
        let back = to_q_rep(&to_k_rep(&psi).unwrap()).unwrap();
        round_trip = round_trip.max(max_diff(back.amplitudes(), psi.amplitudes()));
    }

    let mut planewave_err = 0.0f64;
    let mut planewave_cases = 0;
    for s in small_systems(2..=6, 81) {
        let scale = 1.0 / (s.dim() as f64).sqrt();
        for k in enumerate_labels(s) {
            let via_transform = to_q_rep(&StateVector::basis_state(&k, Representation::K)).unwrap();
            let wave = planewave(&k);
            // literal exp(2πi k·q / d) / √(d^n)
            let literal: Vec<_> = enumerate_labels(s)
                .map(|q| {
                    let dot: usize = k.digits().iter().zip(q.digits()).map(|(a, b)| a * b).sum();
                    Complex64::from_polar(scale, 2.0 * PI * dot as f64 / s.d() as f64)
                })
                .collect();
            planewave_err = planewave_err
                .max(max_diff(wave.amplitudes(), via_transform.amplitudes()))
                .max(max_diff(wave.amplitudes(), &literal));
            planewave_cases += 1;
        }
    }

    let mut oracle_err = 0.0f64;
    for s in small_systems(2..=6, 256) {
        let oracle = dense_fourier_oracle(s).unwrap();
        for k in enumerate_labels(s) {
            let fast = to_q_rep(&StateVector::basis_state(&k, Representation::K)).unwrap();
            oracle_err = oracle_err.max(max_diff(fast.amplitudes(), oracle.column(k.to_index()).as_slice()));
        }
    }
    outcome(
        round_trip < 1e-12 && planewave_err < 1e-12 && oracle_err < 1e-12,
        format!(
            "round trip {round_trip:e}, planewave {planewave_err:e} over {planewave_cases} functionals, dense oracle {oracle_err:e}"
        ),
    )
}

fn ac6_spectrum_and_eigenstates() -> Outcome {
    let mut spectrum_err = 0.0f64;
    let mut hermitian_err = 0.0f64;
    for d in 2..=16 {
        let k_q = k_observable_in_q_rep(d);
        hermitian_err = hermitian_err.max(k_q.hermiticity_deviation());
        let mut eig: Vec<f64> = SymmetricEigen::new(k_q.matrix.clone()).eigenvalues.iter().copied().collect();
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (m, lambda) in eig.iter().enumerate() {
            spectrum_err = spectrum_err.max((lambda - m as f64).abs());
        }
    }
    let mut eigen_err = 0.0f64;
    for s in small_systems(2..=9, 81) {
        let k_q = k_observable_in_q_rep(s.d()).matrix;
        for k in enumerate_labels(s) {
            let wave = planewave(&k);
            for wire in 0..s.n() {
                let out = apply_local_operator(&wave, wire, &k_q).unwrap();
                let scaled: Vec<_> = wave.amplitudes().iter().map(|a| a * k.digits()[wire] as f64).collect();
                eigen_err = eigen_err.max(max_diff(&out, &scaled));
            }
        }
    }
    outcome(
        hermitian_err < 1e-10 && spectrum_err < 1e-10 && eigen_err < 1e-10,
        format!("hermiticity {hermitian_err:e}, spectrum {spectrum_err:e}, eigen relation {eigen_err:e}"),
    )
}

fn ac7_commutator() -> Outcome {
    let min_norm = (2..=16).map(|d| commutator_qk(d).frobenius_norm).fold(f64::INFINITY, f64::min);
    // Q_q = diag(0,1), K_q = ½[[1,−1],[−1,1]] ⇒ QK − KQ = [[0, ½], [−½, 0]]
    let hand = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.0)]);
    let k2 = k_observable_in_q_rep(2).matrix;
    let q2 = q_observable(2).matrix;
    let dense = &q2 * &k2 - &k2 * &q2;
    let lib = commutator_qk(2).matrix;
    let err = max_diff(lib.as_slice(), hand.as_slice()).max(max_diff(dense.as_slice(), hand.as_slice()));
    outcome(min_norm > 0.1 && err < 1e-12, format!("min norm {min_norm:.6}, d = 2 deviation {err:e}"))
}

fn ac8_translation_identity() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=16 {
        for q in 0..d {
            worst = worst.max(verify_translation_identity(d, q).unwrap());
        }
    }
    outcome(worst < 1e-10, format!("max deviation {worst:e} over d = 2..16 (incl. 4, 6, 8, 9, 12)"))
}

fn ac9_entropy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let ds = [2, 3, 6];
    let mut min_sum = f64::INFINITY;
    for i in 0..1000 {
        let s = sys(rng.random_range(1..=4), ds[i % 3]);
        let psi = StateVector::random(s, Representation::Q, &mut rng);
        min_sum = min_sum.min(entropies(&psi).unwrap().sum);
    }
    let mut extreme_err = 0.0f64;
    for d in ds {
        for n in 1..=4 {
            let s = sys(n, d);
            let full = n as f64 * (d as f64).ln();
            for q in enumerate_labels(s) {
                let basis = entropies(&StateVector::basis_state(&q, Representation::Q)).unwrap();
                let wave = entropies(&planewave(&q)).unwrap();
                extreme_err = extreme_err
                    .max(basis.h_q.abs())
                    .max((basis.h_k - full).abs())
                    .max((wave.h_q - full).abs())
                    .max(wave.h_k.abs());
            }
        }
    }
    outcome(
        min_sum > 0.0 && extreme_err < 1e-12,
        format!("min H_q + H_k = {min_sum:.6} over 1000 states, extremes deviation {extreme_err:e}"),
    )
}

fn ac10_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qudit"))
            .args(["verify", "--d", "3", "--n", "2"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = a.status.code() == Some(0) && b.status.code() == Some(0) && identical;
    let parses = serde_json::from_slice::<serde_json::Value>(&a.stdout).is_ok();
    outcome(
        ok && parses,
        format!("exit codes {:?}/{:?}, byte-identical: {identical}, {} bytes", a.status.code(), b.status.code(), a.stdout.len()),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 10] = [
        ("AC1 partition reproduction", ac1_partitions, Duration::from_millis(1)),
        ("AC2 controlled-add block matrix", ac2_controlled_add_matrix, Duration::from_millis(1)),
        ("AC3 exhaustive functional creation", ac3_functional_exhaustive, Duration::from_secs(1)),
        ("AC4 superposed handlers", ac4_superposed_handlers, Duration::from_secs(1)),
        ("AC5 Fourier duality", ac5_fourier, Duration::from_secs(10)),
        ("AC6 observable spectrum and eigenstates", ac6_spectrum_and_eigenstates, Duration::from_secs(5)),
        ("AC7 non-commutation", ac7_commutator, Duration::from_secs(1)),
        ("AC8 translation identity", ac8_translation_identity, Duration::from_secs(5)),
        ("AC9 entropic uncertainty", ac9_entropy, Duration::from_secs(10)),
        ("AC10 verify determinism", ac10_determinism, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed < budget;
        let passed = result.passed && in_time;
        if !passed {
            failed += 1;
        }
        println!(
            "[{}] {name}: {} ({:.3} ms, budget {} ms)",
            if passed { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64() * 1e3,
            budget.as_millis(),
        );
    }
    println!("{} of {} acceptance criteria passed", 10 - failed, 10);
    if failed > 0 {
        std::process::exit(1);
    }
}
