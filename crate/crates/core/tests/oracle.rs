//! Pauli algebra, tableau simulation and the ancilla gadget against dense
//! state vectors.

mod common;

use cliffmeas::gadget::{gadget_measure, natural_mode};
use cliffmeas::pauli::symplectic_product;
use cliffmeas::symplectic::random_gate_word;
use cliffmeas::{CliffordMap, PauliOp, Tableau};
use common::{all_hermitian, dense_matrix, mat_eq, mat_mul, Dense};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn with_phase(p: &PauliOp, k: u8) -> PauliOp {
    let mut q = p.clone();
    q.phase_exp = (q.phase_exp + k) % 4;
    q
}

#[test]
fn multiply_matches_matrix_product() {
    let ops = all_hermitian(2);
    for (i, p) in ops.iter().enumerate() {
        for q in &ops {
            let p = with_phase(p, i as u8 % 4);
            let r = p.multiply(q).unwrap();
            assert!(mat_eq(&dense_matrix(&r), &mat_mul(&dense_matrix(&p), &dense_matrix(q))), "{p} * {q}");
        }
    }
}

#[test]
fn multiply_is_associative_on_three_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ops = all_hermitian(3);
    for _ in 0..200 {
        let pick = |rng: &mut ChaCha8Rng| with_phase(&ops[rng.gen_range(0..ops.len())], rng.gen_range(0..4));
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        assert_eq!(left, right);
        assert!(mat_eq(&dense_matrix(&left), &mat_mul(&mat_mul(&dense_matrix(&a), &dense_matrix(&b)), &dense_matrix(&c))));
    }
}

#[test]
fn hermitian_form_squares_to_identity() {
    for p in all_hermitian(3) {
        let m = dense_matrix(&p);
        let adjoint: Vec<Vec<_>> = (0..m.len()).map(|i| (0..m.len()).map(|j| m[j][i].conj()).collect()).collect();
        assert!(mat_eq(&m, &adjoint), "{p} not Hermitian");
        let sq = p.multiply(&p).unwrap();
        assert!(sq.x.is_zero() && sq.z.is_zero() && sq.phase_exp == 0, "{p}");
    }
}

#[test]
fn symplectic_product_matches_commutation() {
    let ops = all_hermitian(2);
    for p in &ops {
        for q in &ops {
            let pq = mat_mul(&dense_matrix(p), &dense_matrix(q));
            let qp = mat_mul(&dense_matrix(q), &dense_matrix(p));
            assert_eq!(symplectic_product(p, q), !mat_eq(&pq, &qp), "{p} {q}");
            assert_eq!(symplectic_product(p, q), symplectic_product(q, p));
        }
    }
}

fn random_pair(n: usize, rng: &mut ChaCha8Rng) -> (Tableau, Dense) {
    let mut t = Tableau::zero_state(n);
    let mut d = Dense::zero(n);
    let mut gates = random_gate_word(n, 6 * n * n + 4, rng);
    for q in 0..n {
        if rng.gen() {
            gates.push(cliffmeas::CliffordGate::X(q));
        }
        if rng.gen() {
            gates.push(cliffmeas::CliffordGate::Z(q));
        }
    }
    for g in gates {
        t.apply_gate(g).unwrap();
        d.apply_gate(g);
    }
    (t, d)
}

#[test]
fn gates_track_signs_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=3 {
        for _ in 0..100 {
            let (t, d) = random_pair(n, &mut rng);
            for s in t.stabilizers() {
                assert!(d.is_stabilized_by(s), "{s}");
            }
        }
    }
}

#[test]
fn clifford_map_matches_dense_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 1..=3 {
        let gates = random_gate_word(n, 20, &mut rng);
        let map = CliffordMap::from_circuit(&gates, n).unwrap();
        for p in all_hermitian(n) {
            // U p |ψ⟩ = (U p U†) U |ψ⟩ for a random state ψ
            let (_, psi) = random_pair(n, &mut rng);
            let mut lhs = psi.apply_pauli(&p);
            let mut rhs = psi.clone();
            for &g in &gates {
                lhs.apply_gate(g);
                rhs.apply_gate(g);
            }
            assert!(lhs.approx_eq(&rhs.apply_pauli(&map.conjugate(&p))), "{p}");
        }
    }
}

#[test]
fn measurement_matches_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut random_outcomes = 0;
    for n in 1..=3 {
        let ops = all_hermitian(n);
        for _ in 0..150 {
            let (t, d) = random_pair(n, &mut rng);
            let p = ops[rng.gen_range(1..ops.len())].with_sign(rng.gen());
            for forced in [1i8, -1] {
                let mut t2 = t.clone();
                let mut d2 = d.clone();
                let prob = d2.project(&p, forced);
                match t2.measure_forced(&p, forced) {
                    Ok(m) => {
                        assert!(prob > 0.1, "tableau allowed an impossible outcome");
                        assert!((prob - if m.random { 0.5 } else { 1.0 }).abs() < 1e-9);
                        random_outcomes += m.random as usize;
                        for s in t2.stabilizers() {
                            assert!(d2.is_stabilized_by(s));
                        }
                    }
                    Err(_) => assert!(prob < 1e-9, "tableau rejected a possible outcome"),
                }
            }
        }
    }
    assert!(random_outcomes > 100);
}

/// Images of `Z_1..Z_d` under a random Clifford: a random commuting independent set.
fn random_commuting_set(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Vec<PauliOp> {
    let gates = random_gate_word(n, 5 * n * n + 3, rng);
    let map = CliffordMap::from_circuit(&gates, n).unwrap();
    map.images_z[..d].iter().map(|p| p.with_sign(rng.gen())).collect()
}

#[test]
fn gadget_matches_dense_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n in 1..=3 {
        for _ in 0..60 {
            let (t, psi) = random_pair(n, &mut rng);
            let d = rng.gen_range(1..=n);
            let ops = random_commuting_set(n, d, &mut rng);
            let (outcomes, after) = gadget_measure(&t, &ops, natural_mode(&ops), &mut rng).unwrap();
            let mut dense = psi.clone();
            for (p, &o) in ops.iter().zip(&outcomes) {
                assert!(dense.project(p, o) > 1e-9, "gadget reported an impossible outcome");
            }
            for s in after.stabilizers() {
                assert!(dense.is_stabilized_by(s), "{s}");
            }
        }
    }
}
