//! Golden tests for small hand-worked examples: the two-CNOT matrix and the
//! generator-form traces of single phase and Hadamard steps.

use cliffmeas::bruhat::stage_to_matrix;
use cliffmeas::compiler::{c_stage_rounds, h_stage_rounds, p_stage_rounds};
use cliffmeas::gsf::{rows_to_ops, AuxBasis, Gsf};
use cliffmeas::symplectic::{circuit_to_symplectic, is_symplectic};
use cliffmeas::{BinMatrix, CliffordGate, Permutation, Stage};

fn rows(g: &Gsf) -> Vec<String> {
    g.to_matrix().to_row_strings()
}

fn ops(r: &[&str]) -> Vec<cliffmeas::PauliOp> {
    rows_to_ops(&BinMatrix::parse_rows(r).unwrap())
}

const TWO_CNOT: [&str; 6] = ["110000", "011000", "001000", "000100", "000110", "000111"];

#[test]
fn two_cnot_matrix() {
    // the second CNOT of the pair is applied first in time
    let m = circuit_to_symplectic(&[CliffordGate::Cnot(1, 2), CliffordGate::Cnot(0, 1)], 3).unwrap();
    assert_eq!(m.as_matrix().to_row_strings(), TWO_CNOT);
    assert!(is_symplectic(m.as_matrix()));
    // gate order as listed gives the other product
    let listed = circuit_to_symplectic(&[CliffordGate::Cnot(0, 1), CliffordGate::Cnot(1, 2)], 3).unwrap();
    assert_eq!(listed.as_matrix().row(0).to_bit_string(), "111000");
}

#[test]
fn two_cnot_stage_matrix() {
    let u = BinMatrix::parse_rows(&["110", "011", "001"]).unwrap();
    let m = stage_to_matrix(&Stage::C { u: u.clone(), conj: Permutation::identity(3) }, 3).unwrap();
    assert_eq!(m.as_matrix().to_row_strings(), TWO_CNOT);
    assert_eq!(u.transpose().inverse().unwrap().to_row_strings(), ["100", "110", "111"]);
}

#[test]
fn phase_step_trace() {
    // columns A, Q | A, Q; rows: logical X, logical Z, stabilizer
    let mut g = Gsf::from_matrix(1, &BinMatrix::parse_rows(&["0100", "0001", "0010"]).unwrap());
    g.add_stabilizer_to_logical(0, 0);
    g.add_stabilizer_to_logical(0, 1);
    let g = g.measure_update(&ops(&["1101"])).unwrap();
    assert_eq!(rows(&g), ["0110", "0011", "1101"]);
    let mut g = g;
    g.add_stabilizer_to_logical(0, 0);
    assert_eq!(rows(&g), ["1011", "0011", "1101"]);
    let mut g = g.measure_update(&ops(&["0001"])).unwrap();
    g.reduce_logicals();
    assert_eq!(rows(&g), ["1010", "0010", "0001"]);
}

#[test]
fn hadamard_step_trace() {
    let mut g = Gsf::from_matrix(1, &BinMatrix::parse_rows(&["0100", "0001", "0010"]).unwrap());
    g.add_stabilizer_to_logical(0, 0);
    let mut g = g.measure_update(&ops(&["1001"])).unwrap();
    assert_eq!(rows(&g), ["0110", "0001", "1001"]);
    g.add_stabilizer_to_logical(0, 1);
    let mut g = g.measure_update(&ops(&["0100"])).unwrap();
    assert_eq!(rows(&g), ["0110", "1000", "0100"]);
    g.add_stabilizer_to_logical(0, 0);
    assert_eq!(rows(&g), ["0010", "1000", "0100"]);
}

#[test]
fn single_qubit_stage_rounds_use_the_traced_operators() {
    let p = p_stage_rounds(&[0], 1, AuxBasis::Zero).unwrap();
    let sym: Vec<String> = p.iter().map(|r| r.operators[0].to_symplectic().to_bit_string()).collect();
    assert_eq!(sym, ["1101", "0001"]);
    let h = h_stage_rounds(&[0], 1, AuxBasis::Zero).unwrap();
    let sym: Vec<String> = h.iter().map(|r| r.operators[0].to_symplectic().to_bit_string()).collect();
    assert_eq!(sym, ["1001", "0100"]);
}

#[test]
fn rounds_reproduce_traces_through_alignment() {
    // automatic alignment reaches the same final forms as the manual steps
    let g = Gsf::initial(1, AuxBasis::Zero);
    let mut p = g.measure(&ops(&["1101"]), None).unwrap().measure(&ops(&["0001"]), None).unwrap();
    p.reduce_logicals();
    assert_eq!(rows(&p), ["1010", "0010", "0001"]);
    let mut h = g.measure(&ops(&["1001"]), None).unwrap().measure(&ops(&["0100"]), None).unwrap();
    h.reduce_logicals();
    assert_eq!(rows(&h), ["0010", "1000", "0100"]);
}

#[test]
fn cnot_stage_second_round() {
    let u = BinMatrix::parse_rows(&["110", "011", "001"]).unwrap();
    let rounds = c_stage_rounds(&u, &Permutation::identity(3), AuxBasis::Zero).unwrap();
    assert_eq!(rounds.len(), 3);
    let z: Vec<String> = rounds[1].operators.iter().map(|p| p.z.to_bit_string()).collect();
    // (I | (U^t)^{-1} + I) with L1 = [[0,0,0],[1,0,0],[1,1,0]]
    assert_eq!(z, ["100000", "010100", "001110"]);
    assert!(rounds[1].operators.iter().all(|p| p.x.is_zero()));
    let x: Vec<String> = rounds[0].operators.iter().map(|p| p.x.to_bit_string()).collect();
    assert_eq!(x, ["100100", "010010", "001001"]);
    assert!(rounds[2].ancilla.is_none());
}
