//! Compilation of a symplectic matrix into rounds of simultaneous Pauli
//! measurements on `2n` qubits: auxiliary qubits `A_1..A_n` at positions
//! `0..n` and data qubits `Q_1..Q_n` at positions `n..2n`.
//!
//! Every stage keeps its data on one qubit per pair `(A_j, Q_j)` and the
//! other qubit of the pair as an auxiliary in a known basis. H stages (and
//! P stages that start in `|0⟩`) move data across the pair; the move is only
//! recorded.

use serde::{Deserialize, Serialize};

use crate::bruhat::{decompose, Stage, StageForm, StageSequence};
use crate::error::{CompileError, GsfError};
use crate::gadget::{css_witness_check, AncillaSpec, GadgetMode};
use crate::gf2::{BinMatrix, BitVector, Permutation};
use crate::gsf::{AuxBasis, Gsf};
use crate::pauli::{symplectic_product, PauliOp};
use crate::symplectic::{CliffordGate, SymplecticMatrix};
use crate::tableau::{canonical_generators, CliffordMap};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementRound {
    /// Stage kind and 1-based stage index, e.g. `P2`.
    pub stage_tag: String,
    /// 1-based round number within its stage.
    pub step: usize,
    pub operators: Vec<PauliOp>,
    /// `None` for rounds measured directly, one operator at a time.
    pub ancilla: Option<AncillaSpec>,
    /// Range of this round's results in the flat outcome list.
    pub outcome_slot: (usize, usize),
}

impl MeasurementRound {
    pub fn tag(&self) -> String {
        format!("{}.{}", self.stage_tag, self.step)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inventory {
    #[serde(rename = "4n")]
    pub four_n: usize,
    #[serde(rename = "2n")]
    pub two_n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    pub form: StageForm,
    /// Drop rounds without operators.
    pub prune: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { form: StageForm::Nine, prune: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub n: usize,
    pub form: StageForm,
    pub aux_init: AuxBasis,
    pub rounds: Vec<MeasurementRound>,
    pub stages: Vec<Stage>,
    /// Trailing qubit permutation of the stage decomposition.
    pub final_perm: Permutation,
    /// Position (`0..2n`) holding output qubit `c` after the last round.
    pub output_qubits: Vec<usize>,
    /// Basis of the auxiliary qubits after the last round.
    pub aux_final: AuxBasis,
    pub inventory: Inventory,
    /// Target operation, including the signs of the images.
    pub target: CliffordMap,
}

impl Schedule {
    pub fn num_outcomes(&self) -> usize {
        self.rounds.last().map_or(0, |r| r.outcome_slot.1)
    }

    /// Positions of the auxiliary qubits after the last round.
    pub fn aux_qubits(&self) -> Vec<usize> {
        let mut used = vec![false; 2 * self.n];
        for &q in &self.output_qubits {
            used[q] = true;
        }
        (0..2 * self.n).filter(|&q| !used[q]).collect()
    }

    pub fn symplectic_target(&self) -> SymplecticMatrix {
        self.target.to_symplectic()
    }
}

/// Where each (virtual) data qubit currently lives, and the auxiliary basis.
#[derive(Clone, Debug)]
struct Layout {
    n: usize,
    data: Vec<usize>,
    basis: AuxBasis,
}

impl Layout {
    fn new(n: usize, basis: AuxBasis) -> Layout {
        Layout { n, data: (n..2 * n).collect(), basis }
    }

    fn aux(&self, j: usize) -> usize {
        let d = self.data[j];
        if d >= self.n {
            d - self.n
        } else {
            d + self.n
        }
    }

    fn swap(&mut self, j: usize) {
        self.data[j] = self.aux(j);
    }

    fn width(&self) -> usize {
        2 * self.n
    }
}

/// Operator with the given X and Z supports, in `+` letter form.
fn op(width: usize, xs: &[usize], zs: &[usize]) -> PauliOp {
    let mut x = BitVector::zeros(width);
    let mut z = BitVector::zeros(width);
    for &q in xs {
        x.flip(q);
    }
    for &q in zs {
        z.flip(q);
    }
    PauliOp::hermitian(x, z)
}

/// Exchanges the X and Z parts, i.e. conjugation by H on every qubit up to sign.
fn dual(p: &PauliOp) -> PauliOp {
    PauliOp::hermitian(p.z.clone(), p.x.clone())
}

fn dual_mode(m: GadgetMode) -> GadgetMode {
    match m {
        GadgetMode::XOnly => GadgetMode::ZOnly,
        GadgetMode::ZOnly => GadgetMode::XOnly,
        GadgetMode::TwoBlock => GadgetMode::TwoBlock,
    }
}

struct Draft {
    ops: Vec<PauliOp>,
    /// `None` for direct rounds.
    mode: Option<GadgetMode>,
}

/// Strictly lower unitriangular part plus identity: `(U^t)^{-1} + I`.
fn l1_of(u: &BinMatrix) -> Result<BinMatrix, CompileError> {
    let uit = u.inverse().map_err(crate::error::DecomposeError::from)?.transpose();
    Ok(uit.add(&BinMatrix::identity(u.nrows())).expect("square"))
}

/// Rounds of a CNOT stage starting with the auxiliary qubits in `|0⟩`. Index
/// `i` of `u` refers to virtual data qubit `label[i]`.
fn cnot_rounds_primal(u: &BinMatrix, label: &[usize], lay: &Layout) -> Result<Vec<Draft>, CompileError> {
    let n = lay.n;
    let w = lay.width();
    let l1 = l1_of(u)?;
    let aux = |i: usize| lay.aux(label[i]);
    let dat = |i: usize| lay.data[label[i]];
    let r1 = (0..n).map(|i| op(w, &[aux(i), dat(i)], &[])).collect();
    let r2 = (0..n)
        .map(|i| {
            let mut zs = vec![aux(i)];
            zs.extend(l1.row(i).iter_ones().map(dat));
            op(w, &[], &zs)
        })
        .collect();
    let r3 = (0..n).map(|i| op(w, &[aux(i)], &[])).collect();
    Ok(vec![
        Draft { ops: r1, mode: Some(GadgetMode::XOnly) },
        Draft { ops: r2, mode: Some(GadgetMode::ZOnly) },
        Draft { ops: r3, mode: None },
    ])
}

/// CNOT stage `conj · C(u) · conj⁻¹`. Flips the auxiliary basis.
fn cnot_stage(u: &BinMatrix, conj: &Permutation, lay: &mut Layout) -> Result<Vec<Draft>, CompileError> {
    let n = lay.n;
    if !u.is_upper_unitriangular() {
        return Err(CompileError::Malformed("C stage matrix is not upper unitriangular".into()));
    }
    let inv = conj.inverse();
    let label: Vec<usize> = (0..n).map(|i| inv.apply(i)).collect();
    let drafts = match lay.basis {
        AuxBasis::Zero => cnot_rounds_primal(u, &label, lay)?,
        AuxBasis::Plus => {
            // H^{⊗2n} turns C(W) into C(W^{-T}); W^{-T} is lower triangular,
            // so reverse the qubit order to make it upper again.
            let uit = u.inverse().map_err(crate::error::DecomposeError::from)?.transpose();
            let rev = BinMatrix::from_fn(n, n, |i, j| uit.get(n - 1 - i, n - 1 - j));
            let rlabel: Vec<usize> = (0..n).map(|i| label[n - 1 - i]).collect();
            cnot_rounds_primal(&rev, &rlabel, lay)?
                .into_iter()
                .map(|d| Draft { ops: d.ops.iter().map(dual).collect(), mode: d.mode.map(dual_mode) })
                .collect()
        }
    };
    lay.basis = lay.basis.flipped();
    Ok(drafts)
}

fn phase_stage(qubits: &BitVector, lay: &mut Layout) -> Vec<Draft> {
    let w = lay.width();
    let m: Vec<usize> = qubits.iter_ones().collect();
    match lay.basis {
        AuxBasis::Plus => {
            // in place: measure Y_A Z_Q, then Z on every auxiliary qubit
            let r1 = m.iter().map(|&j| op(w, &[lay.aux(j)], &[lay.aux(j), lay.data[j]])).collect();
            let r2 = (0..lay.n).map(|j| op(w, &[], &[lay.aux(j)])).collect();
            lay.basis = AuxBasis::Zero;
            vec![Draft { ops: r1, mode: Some(GadgetMode::TwoBlock) }, Draft { ops: r2, mode: None }]
        }
        AuxBasis::Zero => {
            // measure X_A Y_Q, then Z_Q; the data moves to A
            let r1 = m.iter().map(|&j| op(w, &[lay.aux(j), lay.data[j]], &[lay.data[j]])).collect();
            let r2 = m.iter().map(|&j| op(w, &[], &[lay.data[j]])).collect();
            for &j in &m {
                lay.swap(j);
            }
            vec![Draft { ops: r1, mode: Some(GadgetMode::TwoBlock) }, Draft { ops: r2, mode: None }]
        }
    }
}

fn hadamard_stage(qubits: &BitVector, lay: &mut Layout) -> Vec<Draft> {
    let w = lay.width();
    let n = lay.n;
    let m: Vec<usize> = qubits.iter_ones().collect();
    // written for |0⟩; the |+⟩ version is its X/Z dual
    let flip = lay.basis == AuxBasis::Plus;
    let mk = |xs: &[usize], zs: &[usize]| if flip { op(w, zs, xs) } else { op(w, xs, zs) };
    let r1 = m.iter().map(|&j| mk(&[lay.aux(j)], &[lay.data[j]])).collect();
    let r2 = (0..n)
        .map(|j| if qubits.get(j) { mk(&[lay.data[j]], &[]) } else { mk(&[lay.aux(j)], &[]) })
        .collect();
    for &j in &m {
        lay.swap(j);
    }
    lay.basis = lay.basis.flipped();
    vec![Draft { ops: r1, mode: Some(GadgetMode::TwoBlock) }, Draft { ops: r2, mode: None }]
}

fn check_round(ops: &[PauliOp], tag: &str) -> Result<(), CompileError> {
    for (i, p) in ops.iter().enumerate() {
        if !p.is_hermitian() {
            return Err(CompileError::Malformed(format!("{tag}: operator {p} is not Hermitian")));
        }
        if ops[i + 1..].iter().any(|q| !p.commutes(q)) {
            return Err(CompileError::Malformed(format!("{tag}: operators do not commute")));
        }
    }
    Ok(())
}

fn finish_round(d: Draft, stage_tag: &str, step: usize, n: usize, slot: usize) -> Result<MeasurementRound, CompileError> {
    let tag = format!("{stage_tag}.{step}");
    check_round(&d.ops, &tag)?;
    let ancilla = match d.mode {
        None => None,
        Some(mode) => {
            let a = AncillaSpec::for_operators(&d.ops, 2 * n, mode)
                .map_err(|e| CompileError::Malformed(format!("{tag}: {e}")))?;
            if !css_witness_check(&a) {
                return Err(CompileError::Malformed(format!("{tag}: ancilla has no CSS witness")));
            }
            Some(a)
        }
    };
    let len = d.ops.len();
    Ok(MeasurementRound { stage_tag: stage_tag.to_string(), step, operators: d.ops, ancilla, outcome_slot: (slot, slot + len) })
}

fn single_stage(stage: &Stage, n: usize, basis: AuxBasis) -> Result<Vec<MeasurementRound>, CompileError> {
    let mut lay = Layout::new(n, basis);
    let drafts = match stage {
        Stage::C { u, conj } => cnot_stage(u, conj, &mut lay)?,
        Stage::P { qubits } => phase_stage(qubits, &mut lay),
        Stage::H { qubits } => hadamard_stage(qubits, &mut lay),
    };
    let tag = stage.kind().to_string();
    let mut slot = 0;
    let mut out = Vec::new();
    for (k, d) in drafts.into_iter().enumerate() {
        let r = finish_round(d, &tag, k + 1, n, slot)?;
        slot = r.outcome_slot.1;
        out.push(r);
    }
    Ok(out)
}

fn subset(n: usize, qubits: &[usize]) -> Result<BitVector, CompileError> {
    let mut b = BitVector::zeros(n);
    for &q in qubits {
        if q >= n {
            return Err(CompileError::Symplectic(crate::error::SymplecticError::QubitOutOfRange { index: q + 1, n }));
        }
        b.set(q, true);
    }
    Ok(b)
}

/// Rounds of a phase stage on `qubits` (0-based), data on `Q`, auxiliary
/// qubits in `basis`.
pub fn p_stage_rounds(qubits: &[usize], n: usize, basis: AuxBasis) -> Result<Vec<MeasurementRound>, CompileError> {
    single_stage(&Stage::P { qubits: subset(n, qubits)? }, n, basis)
}

/// Rounds of a Hadamard stage on `qubits` (0-based).
pub fn h_stage_rounds(qubits: &[usize], n: usize, basis: AuxBasis) -> Result<Vec<MeasurementRound>, CompileError> {
    single_stage(&Stage::H { qubits: subset(n, qubits)? }, n, basis)
}

/// Rounds of the CNOT stage `conj · C(u) · conj⁻¹`.
pub fn c_stage_rounds(
    u: &BinMatrix,
    conj: &Permutation,
    basis: AuxBasis,
) -> Result<Vec<MeasurementRound>, CompileError> {
    single_stage(&Stage::C { u: u.clone(), conj: conj.clone() }, u.nrows(), basis)
}

/// Compiles a circuit given as gates on `n` qubits; the target keeps the
/// signs produced by the circuit, including its X and Z gates.
pub fn compile_circuit(gates: &[CliffordGate], n: usize, opts: CompileOptions) -> Result<Schedule, CompileError> {
    let target = CliffordMap::from_circuit(gates, n).map_err(|e| CompileError::Malformed(e.to_string()))?;
    compile_map(&target, opts)
}

/// Compiles a symplectic matrix with all image signs `+`.
pub fn compile(m: &SymplecticMatrix, opts: CompileOptions) -> Result<Schedule, CompileError> {
    let z = BitVector::zeros(m.n());
    compile_map(&CliffordMap::from_symplectic(m, &z, &z), opts)
}

pub fn compile_map(target: &CliffordMap, opts: CompileOptions) -> Result<Schedule, CompileError> {
    let m = target.to_symplectic();
    let seq = decompose(&m, opts.form)?;
    let sched = assemble(&seq, target.clone(), opts)?;
    symbolic_check(&sched)?;
    Ok(sched)
}

fn assemble(seq: &StageSequence, target: CliffordMap, opts: CompileOptions) -> Result<Schedule, CompileError> {
    let n = seq.n;
    let aux_init = AuxBasis::Zero;
    let mut lay = Layout::new(n, aux_init);
    let mut rounds = Vec::new();
    let mut inventory = Inventory::default();
    let mut slot = 0;
    for (idx, stage) in seq.stages.iter().enumerate() {
        let stage_tag = format!("{}{}", stage.kind(), idx + 1);
        let drafts = match stage {
            Stage::C { u, conj } => cnot_stage(u, conj, &mut lay)?,
            Stage::P { qubits } => phase_stage(qubits, &mut lay),
            Stage::H { qubits } => hadamard_stage(qubits, &mut lay),
        };
        for (k, d) in drafts.into_iter().enumerate() {
            if opts.prune && d.ops.is_empty() {
                continue;
            }
            let r = finish_round(d, &stage_tag, k + 1, n, slot)?;
            match r.ancilla.as_ref().map(|a| a.mode) {
                Some(GadgetMode::TwoBlock) => inventory.four_n += 1,
                Some(_) => inventory.two_n += 1,
                None => {}
            }
            slot = r.outcome_slot.1;
            rounds.push(r);
        }
    }
    let inv = seq.final_perm.inverse();
    let output_qubits = (0..n).map(|c| lay.data[inv.apply(c)]).collect();
    Ok(Schedule {
        n,
        form: opts.form,
        aux_init,
        rounds,
        stages: seq.stages.clone(),
        final_perm: seq.final_perm.clone(),
        output_qubits,
        aux_final: lay.basis,
        inventory,
        target,
    })
}

/// Propagates the generator form through every round. With `outcomes` the
/// recorded signs follow the results; without, every result counts as `+1`.
/// Stabilizer rows end in canonical form with the logical rows reduced
/// against them.
pub fn replay(s: &Schedule, outcomes: Option<&[i8]>) -> Result<Gsf, CompileError> {
    if let Some(o) = outcomes {
        if o.len() != s.num_outcomes() {
            return Err(CompileError::Malformed(format!(
                "expected {} outcomes, got {}",
                s.num_outcomes(),
                o.len()
            )));
        }
    }
    let mut g = Gsf::initial(s.n, s.aux_init);
    for (i, r) in s.rounds.iter().enumerate() {
        if r.operators.is_empty() {
            continue;
        }
        let res = outcomes.map(|o| &o[r.outcome_slot.0..r.outcome_slot.1]);
        g = g.measure(&r.operators, res).map_err(|source| round_error(i, r, source))?;
    }
    g.stabilizers = canonical_generators(&g.stabilizers);
    g.reduce_logicals();
    Ok(g)
}

fn round_error(i: usize, r: &MeasurementRound, source: GsfError) -> CompileError {
    CompileError::Round { round: i + 1, tag: r.tag(), source }
}

/// Logical rows the final generator form should have, with target signs.
pub fn expected_logicals(s: &Schedule) -> Vec<PauliOp> {
    let w = 2 * s.n;
    s.target
        .images_x
        .iter()
        .chain(&s.target.images_z)
        .map(|p| p.embed(w, &s.output_qubits))
        .collect()
}

/// Stabilizers of the auxiliary qubits after the last round.
pub fn expected_stabilizers(s: &Schedule) -> Vec<PauliOp> {
    let w = 2 * s.n;
    s.aux_qubits()
        .into_iter()
        .map(|q| PauliOp::single(w, q, s.aux_final.axis()))
        .collect()
}

/// Checks, ignoring signs, that the rounds turn the initial form into the target.
pub fn symbolic_check(s: &Schedule) -> Result<(), CompileError> {
    let g = replay(s, None)?;
    let got: Vec<PauliOp> = g.logical_rows().map(|p| p.unsigned()).collect();
    let want: Vec<PauliOp> = expected_logicals(s).iter().map(|p| p.unsigned()).collect();
    if got != want {
        let row = got.iter().zip(&want).position(|(a, b)| a != b).unwrap_or(0);
        return Err(CompileError::SymbolicMismatch(format!(
            "logical row {}: got {}, want {}",
            row + 1,
            got[row],
            want[row]
        )));
    }
    let unsigned = |v: &[PauliOp]| canonical_generators(&v.iter().map(|p| p.unsigned()).collect::<Vec<_>>());
    if unsigned(&g.stabilizers) != unsigned(&expected_stabilizers(s)) {
        return Err(CompileError::SymbolicMismatch("auxiliary qubits are not in the expected basis".into()));
    }
    Ok(())
}

/// Pauli `W` on all `2n` qubits that, applied after the last round, gives the
/// target image signs and leaves every auxiliary qubit in the `+1`
/// eigenstate of its basis. Depends only on the outcomes.
pub fn frame_correction(s: &Schedule, outcomes: &[i8]) -> Result<PauliOp, CompileError> {
    let g = replay(s, Some(outcomes))?;
    let want = expected_logicals(s);
    let mut rows = Vec::new();
    let mut flips = Vec::new();
    for (got, want) in g.logical_rows().zip(&want) {
        if got.unsigned() != want.unsigned() {
            return Err(CompileError::SymbolicMismatch(format!("logical row {got} does not match {want}")));
        }
        rows.push(got.clone());
        flips.push(got.is_negative() != want.is_negative());
    }
    for st in &g.stabilizers {
        rows.push(st.clone());
        flips.push(st.is_negative());
    }
    anticommuting_pauli(&rows, &flips)
        .ok_or_else(|| CompileError::SymbolicMismatch("frame correction system is inconsistent".into()))
}

/// Pauli anticommuting exactly with the rows flagged in `flips`.
pub fn anticommuting_pauli(rows: &[PauliOp], flips: &[bool]) -> Option<PauliOp> {
    let w = rows.first().map_or(0, |r| r.num_qubits());
    // symplectic product with (x|z) is the dot product with (z|x)
    let a = BinMatrix::from_rows(2 * w, rows.iter().map(|r| r.z.concat(&r.x)).collect()).ok()?;
    let sol = a.solve(&BitVector::from_bools(flips))?;
    let p = PauliOp::hermitian(sol.slice(0, w), sol.slice(w, 2 * w));
    debug_assert!(rows.iter().zip(flips).all(|(r, &f)| symplectic_product(r, &p) == f));
    Some(p)
}

/// Rows `l'_j` spanned by `(I  L1)` with `(L2  L3)·(I  I)ᵗ = I`, built by
/// `l'_j = l_j + Σ_{p<j, l_j·c_p = 1} l'_p`.
pub fn lemma2_construct(l1: &BinMatrix) -> Result<(BinMatrix, BinMatrix), CompileError> {
    let n = l1.nrows();
    if l1.ncols() != n || (0..n).any(|i| (i..n).any(|j| l1.get(i, j))) {
        return Err(CompileError::Malformed("L1 must be strictly lower triangular".into()));
    }
    let l = BinMatrix::identity(n).hstack(l1).expect("same height");
    let dot_c = |v: &BitVector, p: usize| v.get(p) ^ v.get(n + p);
    let mut out: Vec<BitVector> = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = l.row(j).clone();
        for (p, prev) in out.iter().enumerate() {
            if dot_c(l.row(j), p) {
                row.xor_assign(prev);
            }
        }
        out.push(row);
    }
    let m = BinMatrix::from_rows(2 * n, out).expect("widths");
    Ok((m.submatrix(0, n, 0, n), m.submatrix(0, n, n, 2 * n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::random_symplectic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_schedule_counts() {
        let s = compile(&SymplecticMatrix::identity(2), CompileOptions::default()).unwrap();
        assert_eq!(s.rounds.len(), 22);
        assert_eq!(s.inventory, Inventory { four_n: 5, two_n: 8 });
        assert!(s.final_perm.is_identity());
    }

    #[test]
    fn random_matrices_pass_symbolic_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..7 {
            for _ in 0..10 {
                let m = random_symplectic(n, &mut rng);
                let s = compile(&m, CompileOptions::default()).unwrap();
                assert_eq!(s.rounds.len(), 22);
                let e = compile(&m, CompileOptions { form: StageForm::Eleven, prune: false }).unwrap();
                assert_eq!(e.rounds.len(), 27);
            }
        }
    }

    #[test]
    fn lemma2_small() {
        let (l2, l3) = lemma2_construct(&BinMatrix::parse_rows(&["00", "10"]).unwrap()).unwrap();
        assert_eq!(l2.to_row_strings(), ["10", "11"]);
        assert_eq!(l3.to_row_strings(), ["00", "10"]);
    }
}
