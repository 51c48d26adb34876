mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C;
use qsdc_core::circuit::{Circuit, Party, QubitRef, Role};
use qsdc_core::gate::{GateKind, GateOp};
use qsdc_core::state::{PauliString, StateVector};

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn registry(n: usize) -> Vec<QubitRef> {
    (0..n)
        .map(|index| QubitRef {
            index,
            role: Role::Data,
            owner: Party::Alice,
            block: 0,
        })
        .collect()
}

fn bell() -> StateVector {
    StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)])
        .unwrap()
}

#[test]
fn zero_states() {
    assert_eq!(StateVector::zero(1).unwrap().amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
    assert_eq!(StateVector::zero(2).unwrap().amplitudes()[0], c(1.0, 0.0));
    assert!(StateVector::zero(0).is_err());
    assert!(StateVector::zero(25).is_err());
}

#[test]
fn ghz3_matches_oracle() {
    let mut circ = Circuit::new(registry(3)).unwrap();
    circ.gates([GateOp::h(0), GateOp::cx(0, 1), GateOp::cx(1, 2)]).unwrap();
    let lib = circ.run().unwrap();
    let reference = common::run(&circ);
    assert!(common::max_diff(lib.amplitudes(), &reference) < 1e-12);
    assert!((reference[0].re - FRAC_1_SQRT_2).abs() < 1e-12);
    assert!((reference[7].re - FRAC_1_SQRT_2).abs() < 1e-12);
}

#[test]
fn phase_on_bell_low_bit() {
    let out = bell().applied(GateKind::Phase(PI / 3.0), &[0]).unwrap();
    let want = [c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), C::from_polar(FRAC_1_SQRT_2, PI / 3.0)];
    assert!(common::max_diff(out.amplitudes(), &want) < 1e-12);
}

#[test]
fn cx_is_involution_on_random_state() {
    let raw = [c(0.1, 0.2), c(-0.3, 0.1), c(0.2, 0.2), c(0.0, -0.4), c(0.5, 0.1), c(0.1, 0.1), c(-0.2, 0.3), c(0.3, 0.0)];
    let s = StateVector::normalized(raw.to_vec()).unwrap();
    let t = s.clone().applied(GateKind::CX, &[2, 0]).unwrap().applied(GateKind::CX, &[2, 0]).unwrap();
    assert!((s.fidelity(&t).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn apply_rejects_bad_targets() {
    let mut s = StateVector::zero(2).unwrap();
    assert!(s.apply(GateKind::CX, &[0, 0]).is_err());
    assert!(s.apply(GateKind::H, &[2]).is_err());
    assert!(s.apply(GateKind::CX, &[0]).is_err());
    assert!(s.apply(GateKind::X, &[0, 1]).is_err());
}

#[test]
fn sampling_examples() {
    let h = StateVector::zero(1).unwrap().sample(100, 1).unwrap();
    assert_eq!(h.count("0"), 100);
    let shots = 100_000u64;
    let h = bell().sample(shots, 77).unwrap();
    let sigma = (0.25 * shots as f64).sqrt();
    for key in ["00", "11"] {
        assert!((h.count(key) as f64 - 50_000.0).abs() < 3.0 * sigma, "{key}");
    }
    assert_eq!(h.count("01") + h.count("10"), 0);
    assert!(StateVector::zero(1).unwrap().sample(0, 1).is_err());
}

#[test]
fn fidelity_examples() {
    let zero = StateVector::zero(1).unwrap();
    let one = StateVector::basis(1, 1).unwrap();
    assert!((zero.fidelity(&zero).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(zero.fidelity(&one).unwrap(), 0.0);
    let minus = bell().applied(GateKind::Z, &[0]).unwrap();
    assert!(bell().fidelity(&minus).unwrap() < 1e-15);
    assert!(zero.fidelity(&bell()).is_err());
    assert!((bell().density().fidelity(&bell()).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn pauli_expectation_examples() {
    let z: PauliString = "Z".parse().unwrap();
    assert!((StateVector::zero(1).unwrap().pauli_expectation(&z).unwrap() - 1.0).abs() < 1e-15);
    let xx: PauliString = "XX".parse().unwrap();
    assert!((bell().pauli_expectation(&xx).unwrap() - 1.0).abs() < 1e-12);
    let psi = StateVector::from_amplitudes(vec![c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)])
        .unwrap();
    let zi: PauliString = "ZI".parse().unwrap();
    assert!(psi.pauli_expectation(&zi).unwrap().abs() < 1e-12);
    assert!("ZQ".parse::<PauliString>().is_err());
    assert!(bell().pauli_expectation(&z).is_err());
}

#[test]
fn partial_trace_examples() {
    let rho = StateVector::zero(1).unwrap().density();
    assert_eq!(rho.get(0, 0), c(1.0, 0.0));
    assert_eq!(rho.get(1, 1), c(0.0, 0.0));
    let red = bell().density().partial_trace(&[0]).unwrap();
    assert!((red.get(0, 0).re - 0.5).abs() < 1e-12 && (red.get(1, 1).re - 0.5).abs() < 1e-12);
    // Product |+⟩ ⊗ |1⟩ (qubit 0 is |+⟩).
    let prod = StateVector::basis(2, 2).unwrap().applied(GateKind::H, &[0]).unwrap();
    let r0 = prod.density().partial_trace(&[0]).unwrap();
    assert!((r0.purity() - 1.0).abs() < 1e-10);
    assert!((r0.trace().re - 1.0).abs() < 1e-10);
    assert!((r0.get(0, 1).re - 0.5).abs() < 1e-12);
    let r1 = prod.density().partial_trace(&[1]).unwrap();
    assert!((r1.get(1, 1).re - 1.0).abs() < 1e-12);
}

#[test]
fn dense_oracle_agrees_on_small_circuit() {
    let mut circ = Circuit::new(registry(3)).unwrap();
    circ.gates([
        GateOp::h(1),
        GateOp::single(GateKind::Phase(0.7), 1),
        GateOp::cx(1, 2),
        GateOp::cz(2, 0),
        GateOp::single(GateKind::Y, 0),
        GateOp::h(2),
    ])
    .unwrap();
    let u = common::dense_unitary(&circ);
    let col0: Vec<C> = u.iter().map(|row| row[0]).collect();
    assert!(common::max_diff(circ.run().unwrap().amplitudes(), &col0) < 1e-12);
    assert!(common::max_diff(&common::run(&circ), &col0) < 1e-12);
}
