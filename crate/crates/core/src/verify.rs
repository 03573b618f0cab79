//! Concrete execution of schedules and comparison with direct gate application.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::compiler::{compile_circuit, expected_stabilizers, frame_correction, CompileOptions, Schedule};
use crate::error::{CompileError, Error, SimError};
use crate::gadget::{ancilla_tableau, gadget_measure};
use crate::gf2::Permutation;
use crate::gsf::AuxBasis;
use crate::pauli::PauliOp;
use crate::tableau::{canonical_generators, CliffordMap, Tableau};

/// State after a schedule and the outcome of every measured operator.
#[derive(Clone, Debug)]
pub struct Run {
    /// All `2n` qubits, before the frame correction.
    pub state: Tableau,
    pub outcomes: Vec<i8>,
    pub rounds_executed: usize,
}

/// Executes every round on `input` (the data qubits). Ancilla rounds go
/// through the gadget; the others measure their operators one at a time.
pub fn run_schedule<R: Rng + ?Sized>(s: &Schedule, input: &Tableau, rng: &mut R) -> Result<Run, Error> {
    if input.num_qubits() != s.n {
        return Err(Error::Schema(format!("schedule has {} qubits, input has {}", s.n, input.num_qubits())));
    }
    let aux = match s.aux_init {
        AuxBasis::Zero => Tableau::zero_state(s.n),
        AuxBasis::Plus => Tableau::plus_state(s.n),
    };
    let mut state = aux.tensor(input);
    let mut outcomes = Vec::with_capacity(s.num_outcomes());
    for r in &s.rounds {
        match &r.ancilla {
            Some(a) => {
                let built = ancilla_tableau(&r.operators, 2 * s.n, a.mode)?;
                if built.canonical_form() != a.generators {
                    return Err(CompileError::Malformed(format!("{}: ancilla does not match its operators", r.tag())).into());
                }
                let (o, next) = gadget_measure(&state, &r.operators, a.mode, rng)?;
                outcomes.extend(o);
                state = next;
            }
            None => {
                for (i, p) in r.operators.iter().enumerate() {
                    if r.operators[..i].iter().any(|q| !q.commutes(p)) {
                        return Err(SimError::MeasuredNotCommuting(i - 1, i).into());
                    }
                    outcomes.push(state.measure_random(p, rng)?.outcome);
                }
            }
        }
    }
    Ok(Run { state, outcomes, rounds_executed: s.rounds.len() })
}

/// Applies the frame correction and returns the output qubits in circuit order.
pub fn corrected_output(s: &Schedule, run: &Run) -> Result<(Tableau, PauliOp), Error> {
    let w = frame_correction(s, &run.outcomes)?;
    let mut st = run.state.clone();
    st.apply_pauli(&w);
    let aux_ok = expected_stabilizers(s).iter().all(|p| st.deterministic_outcome(p) == Some(1));
    if !aux_ok {
        return Err(CompileError::SymbolicMismatch("auxiliary qubits not reset after correction".into()).into());
    }
    Ok((st.extract_qubits(&s.output_qubits)?, w))
}

/// Pauli `W` with `W · π(t1) · W = t2`, if the two states differ only by
/// the permutation and a Pauli operator.
pub fn equivalent_up_to_pauli_perm(t1: &Tableau, t2: &Tableau, perm: &Permutation) -> Option<PauliOp> {
    if t1.num_qubits() != t2.num_qubits() || perm.len() != t1.num_qubits() {
        return None;
    }
    let a = t1.permute_qubits(perm).canonical_form();
    let b = t2.canonical_form();
    if a.iter().zip(&b).any(|(p, q)| p.unsigned() != q.unsigned()) {
        return None;
    }
    let flips: Vec<bool> = a.iter().zip(&b).map(|(p, q)| p.is_negative() != q.is_negative()).collect();
    crate::compiler::anticommuting_pauli(&a, &flips)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialReport {
    pub seed: u64,
    pub n: usize,
    pub rounds_executed: usize,
    pub outcomes: Vec<i8>,
    pub residual_correction: PauliOp,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostics: Option<String>,
}

/// One trial: random input state from `seed`, schedule run, comparison with
/// the target applied directly.
pub fn run_trial(s: &Schedule, seed: u64) -> TrialReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let input = Tableau::random(s.n, &mut rng);
    let expected = s.target.apply_to(&input);
    let fail = |outcomes: Vec<i8>, rounds: usize, msg: String| TrialReport {
        seed,
        n: s.n,
        rounds_executed: rounds,
        outcomes,
        residual_correction: PauliOp::identity(2 * s.n),
        verdict: Verdict::Fail,
        diagnostics: Some(msg),
    };
    let run = match run_schedule(s, &input, &mut rng) {
        Ok(r) => r,
        Err(e) => return fail(vec![], 0, e.to_string()),
    };
    match corrected_output(s, &run) {
        Err(e) => fail(run.outcomes, run.rounds_executed, e.to_string()),
        Ok((out, w)) => {
            let ok = out.same_state(&expected);
            TrialReport {
                seed,
                n: s.n,
                rounds_executed: run.rounds_executed,
                outcomes: run.outcomes,
                residual_correction: w,
                verdict: if ok { Verdict::Pass } else { Verdict::Fail },
                diagnostics: (!ok).then(|| {
                    format!("got {:?}, want {:?}", out.canonical_strings(), expected.canonical_strings())
                }),
            }
        }
    }
}

/// Trial seeds drawn from the master seed.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.gen()).collect()
}

/// Compiles the circuit and runs `trials` independent trials. Reports come
/// back in seed order regardless of scheduling.
pub fn end_to_end_check(circuit: &Circuit, seed: u64, trials: usize) -> Result<Vec<TrialReport>, CompileError> {
    let s = compile_circuit(&circuit.gates, circuit.n, CompileOptions::default())?;
    Ok(run_trials(&s, seed, trials))
}

pub fn run_trials(s: &Schedule, seed: u64, trials: usize) -> Vec<TrialReport> {
    let seeds = trial_seeds(seed, trials);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        seeds.par_iter().map(|&t| run_trial(s, t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        seeds.iter().map(|&t| run_trial(s, t)).collect()
    }
}

/// Runs a schedule on a named input state and returns the corrected output.
pub fn simulate(s: &Schedule, input: &Tableau, seed: u64) -> Result<(Run, Tableau, PauliOp), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let run = run_schedule(s, input, &mut rng)?;
    let (out, w) = corrected_output(s, &run)?;
    Ok((run, out, w))
}

/// Signed canonical generators of `map` applied to `input`.
pub fn direct_output(map: &CliffordMap, input: &Tableau) -> Vec<PauliOp> {
    canonical_generators(map.apply_to(input).stabilizers())
}
