//! Ancilla-assisted measurement of a commuting set of Pauli operators.
//!
//! For operators `i^{τ_j} X^{e_j} Z^{f_j}` on `N` data qubits the ancilla has
//! two blocks of `N` qubits. It is `|0⟩^N |+⟩^N` projected onto the `+1`
//! eigenspaces of `T_j = X^{e_j} ⊗ (-1)^{τ_j} i^{τ_j} X^{e_j} Z^{f_j}`.
//! The data qubits control CNOTs onto block 2, then block 1 controls CNOTs
//! onto the data. Block 1 is read out in the X basis and block 2 in the Z
//! basis; operator `j` has outcome `∏_{l∈e_j} v^x_l · ∏_{l∈f_j} v^z_l`.
//! Operator sets without Z parts (or without X parts) only need one block.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::gf2::BinMatrix;
use crate::pauli::{Axis, PauliOp};
use crate::symplectic::CliffordGate;
use crate::tableau::{canonical_generators, Tableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetMode {
    TwoBlock,
    XOnly,
    ZOnly,
}

/// Single-qubit Clifford, named by its gates in time order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalClifford {
    I,
    H,
    P,
    #[serde(rename = "H.P")]
    HP,
    #[serde(rename = "P.H")]
    PH,
    #[serde(rename = "H.P.H")]
    HPH,
}

impl LocalClifford {
    pub const ALL: [LocalClifford; 6] =
        [LocalClifford::I, LocalClifford::H, LocalClifford::P, LocalClifford::HP, LocalClifford::PH, LocalClifford::HPH];

    pub fn gates(self, q: usize) -> Vec<CliffordGate> {
        use CliffordGate::{H, P};
        match self {
            LocalClifford::I => vec![],
            LocalClifford::H => vec![H(q)],
            LocalClifford::P => vec![P(q)],
            LocalClifford::HP => vec![H(q), P(q)],
            LocalClifford::PH => vec![P(q), H(q)],
            LocalClifford::HPH => vec![H(q), P(q), H(q)],
        }
    }

    pub fn conjugate(self, p: &mut PauliOp, q: usize) {
        for g in self.gates(q) {
            match g {
                CliffordGate::H(q) => p.conj_h(q),
                CliffordGate::P(q) => p.conj_p(q),
                _ => unreachable!(),
            }
        }
    }
}

/// Ancilla state used by one measurement round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncillaSpec {
    pub n_qubits: usize,
    pub mode: GadgetMode,
    /// Canonical stabilizer generators of the ancilla state.
    pub generators: Vec<PauliOp>,
    /// Local Cliffords that turn the state into a CSS state.
    pub css_witness: Vec<LocalClifford>,
}

impl AncillaSpec {
    /// Ancilla for measuring `ops` (on `n` data qubits) in the given mode.
    pub fn for_operators(ops: &[PauliOp], n: usize, mode: GadgetMode) -> Result<AncillaSpec, SimError> {
        let t = ancilla_tableau(ops, n, mode)?;
        let generators = t.canonical_form();
        let css_witness = find_css_witness(&generators).ok_or(SimError::NoCssWitness)?;
        Ok(AncillaSpec { n_qubits: t.num_qubits(), mode, generators, css_witness })
    }

    /// Ancilla with no projections, as used by empty rounds.
    pub fn trivial(n: usize, mode: GadgetMode) -> AncillaSpec {
        Self::for_operators(&[], n, mode).expect("empty operator set")
    }

    pub fn tableau(&self) -> Result<Tableau, SimError> {
        Tableau::from_stabilizers(self.generators.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.weight() == 1)
    }
}

/// Mode implied by the operators: one block when all Z parts (or all X parts) vanish.
pub fn natural_mode(ops: &[PauliOp]) -> GadgetMode {
    if ops.iter().all(|p| p.z.is_zero()) {
        GadgetMode::XOnly
    } else if ops.iter().all(|p| p.x.is_zero()) {
        GadgetMode::ZOnly
    } else {
        GadgetMode::TwoBlock
    }
}

fn validate_ops(ops: &[PauliOp], n: usize, mode: GadgetMode) -> Result<(), SimError> {
    for (i, p) in ops.iter().enumerate() {
        if p.num_qubits() != n {
            return Err(SimError::WrongCount { expected: n, got: p.num_qubits() });
        }
        if !p.is_hermitian() {
            return Err(crate::error::PauliError::NotHermitian(p.to_string()).into());
        }
        for (j, q) in ops.iter().enumerate().skip(i + 1) {
            if !p.commutes(q) {
                return Err(SimError::MeasuredNotCommuting(i, j));
            }
        }
        let bad = match mode {
            GadgetMode::XOnly => !p.z.is_zero(),
            GadgetMode::ZOnly => !p.x.is_zero(),
            GadgetMode::TwoBlock => false,
        };
        if bad {
            return Err(crate::error::PauliError::Parse(format!("{p} does not fit gadget mode {mode:?}")).into());
        }
    }
    let rows = BinMatrix::from_rows(2 * n, ops.iter().map(|p| p.to_symplectic()).collect()).expect("widths");
    if rows.rank() < ops.len() {
        return Err(SimError::DependentGenerators);
    }
    Ok(())
}

/// Ancilla state as a tableau. Two-block ancillas hold block 1 on `0..n` and
/// block 2 on `n..2n`; single-block ancillas have `n` qubits.
pub fn ancilla_tableau(ops: &[PauliOp], n: usize, mode: GadgetMode) -> Result<Tableau, SimError> {
    validate_ops(ops, n, mode)?;
    let (mut t, projectors): (Tableau, Vec<PauliOp>) = match mode {
        GadgetMode::TwoBlock => {
            let t = Tableau::zero_state(n).tensor(&Tableau::plus_state(n));
            let b1: Vec<usize> = (0..n).collect();
            let b2: Vec<usize> = (n..2 * n).collect();
            let proj = ops
                .iter()
                .map(|p| {
                    let h = p.unsigned();
                    let xpart = PauliOp::hermitian(h.x.clone(), crate::gf2::BitVector::zeros(n)).embed(2 * n, &b1);
                    // (-1)^τ i^τ X^e Z^f on block 2
                    let mut second = h.embed(2 * n, &b2);
                    if h.tau() % 2 == 1 {
                        second = second.negated();
                    }
                    xpart.multiply(&second).expect("same width")
                })
                .collect();
            (t, proj)
        }
        GadgetMode::XOnly => (Tableau::zero_state(n), ops.iter().map(|p| p.unsigned()).collect()),
        GadgetMode::ZOnly => (Tableau::plus_state(n), ops.iter().map(|p| p.unsigned()).collect()),
    };
    for p in &projectors {
        t.measure_forced(p, 1)?;
    }
    Ok(t)
}

/// Result of a gadget measurement before the ancilla is traced out.
#[derive(Clone, Debug)]
pub struct GadgetRun {
    /// Outcome `±1` of each operator, in input order.
    pub outcomes: Vec<i8>,
    /// Data qubits followed by the ancilla qubits.
    pub joint: Tableau,
    /// Positions of the ancilla qubits within `joint`.
    pub ancilla_qubits: Vec<usize>,
    /// Readout value of each ancilla qubit (`±1`), aligned with `ancilla_qubits`.
    pub readout: Vec<i8>,
}

/// Runs the gadget on `t` and keeps the joint state.
pub fn gadget_measure_joint<R: Rng + ?Sized>(
    t: &Tableau,
    ops: &[PauliOp],
    mode: GadgetMode,
    rng: &mut R,
) -> Result<GadgetRun, SimError> {
    let n = t.num_qubits();
    let anc = ancilla_tableau(ops, n, mode)?;
    let mut joint = t.tensor(&anc);
    let (b1, b2): (Option<usize>, Option<usize>) = match mode {
        GadgetMode::TwoBlock => (Some(n), Some(2 * n)),
        GadgetMode::XOnly => (Some(n), None),
        GadgetMode::ZOnly => (None, Some(n)),
    };
    if let Some(b2) = b2 {
        for l in 0..n {
            joint.apply_gate(CliffordGate::Cnot(l, b2 + l))?;
        }
    }
    if let Some(b1) = b1 {
        for l in 0..n {
            joint.apply_gate(CliffordGate::Cnot(b1 + l, l))?;
        }
    }
    let total = joint.num_qubits();
    let mut vx = vec![1i8; n];
    let mut vz = vec![1i8; n];
    let mut ancilla_qubits = Vec::new();
    let mut readout = Vec::new();
    if let Some(b1) = b1 {
        for (l, v) in vx.iter_mut().enumerate() {
            let m = joint.measure_random(&PauliOp::single(total, b1 + l, Axis::X), rng)?;
            *v = m.outcome;
            ancilla_qubits.push(b1 + l);
            readout.push(m.outcome);
        }
    }
    if let Some(b2) = b2 {
        for (l, v) in vz.iter_mut().enumerate() {
            let m = joint.measure_random(&PauliOp::single(total, b2 + l, Axis::Z), rng)?;
            *v = m.outcome;
            ancilla_qubits.push(b2 + l);
            readout.push(m.outcome);
        }
    }
    let outcomes = ops
        .iter()
        .map(|p| {
            let mut s = if p.is_negative() { -1 } else { 1 };
            for l in p.x.iter_ones() {
                s *= vx[l];
            }
            for l in p.z.iter_ones() {
                s *= vz[l];
            }
            s
        })
        .collect();
    Ok(GadgetRun { outcomes, joint, ancilla_qubits, readout })
}

/// Measures `ops` on `t` through the ancilla gadget and traces the ancilla out.
pub fn gadget_measure<R: Rng + ?Sized>(
    t: &Tableau,
    ops: &[PauliOp],
    mode: GadgetMode,
    rng: &mut R,
) -> Result<(Vec<i8>, Tableau), SimError> {
    let run = gadget_measure_joint(t, ops, mode, rng)?;
    let data = run.joint.discard_qubits(&run.ancilla_qubits)?;
    Ok((run.outcomes, data))
}

fn css_ranks(gens: &[PauliOp]) -> (usize, usize, usize) {
    let n = gens.first().map_or(0, |g| g.num_qubits());
    let all = BinMatrix::from_rows(2 * n, gens.iter().map(|g| g.to_symplectic()).collect()).unwrap();
    let xs = BinMatrix::from_rows(n, gens.iter().map(|g| g.x.clone()).collect()).unwrap();
    let zs = BinMatrix::from_rows(n, gens.iter().map(|g| g.z.clone()).collect()).unwrap();
    (all.rank(), xs.rank(), zs.rank())
}

/// Whether the group generated by `gens` has a basis of X-only and Z-only elements.
pub fn is_css(gens: &[PauliOp]) -> bool {
    let (g, x, z) = css_ranks(gens);
    x + z == g
}

fn apply_layer(gens: &[PauliOp], layer: &[LocalClifford]) -> Vec<PauliOp> {
    gens.iter()
        .map(|g| {
            let mut g = g.clone();
            for (q, c) in layer.iter().enumerate() {
                c.conjugate(&mut g, q);
            }
            g
        })
        .collect()
}

/// Checks that the witness layer maps the ancilla state to a CSS state.
pub fn css_witness_check(a: &AncillaSpec) -> bool {
    a.css_witness.len() == a.n_qubits && is_css(&apply_layer(&a.generators, &a.css_witness))
}

const MAX_SEARCH_QUBITS: usize = 6;

/// Finds local Cliffords making the state CSS. The state is split into
/// unentangled components; each component is searched by increasing number
/// of non-identity gates, preferring higher qubit indices and `H`.
pub fn find_css_witness(gens: &[PauliOp]) -> Option<Vec<LocalClifford>> {
    let n = gens.first().map_or(0, |g| g.num_qubits());
    let mut layer = vec![LocalClifford::I; n];
    if is_css(gens) {
        return Some(layer);
    }
    let canon = canonical_generators(gens);
    // union-find over qubits sharing a generator
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for g in &canon {
        let s = g.support();
        for w in s.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; n];
    for q in 0..n {
        let r = find(&mut parent, q);
        if root_of[r] == usize::MAX {
            root_of[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[root_of[r]].push(q);
    }
    for comp in comps {
        let rows: Vec<PauliOp> = canon
            .iter()
            .filter(|g| g.support().first().is_some_and(|q| comp.contains(q)))
            .map(|g| g.restrict(&comp))
            .collect();
        if rows.is_empty() || is_css(&rows) {
            continue;
        }
        if comp.len() > MAX_SEARCH_QUBITS {
            return None;
        }
        let local = search_component(&rows, comp.len())?;
        for (i, &q) in comp.iter().enumerate() {
            layer[q] = local[i];
        }
    }
    debug_assert!(is_css(&apply_layer(gens, &layer)));
    Some(layer)
}

fn search_component(rows: &[PauliOp], k: usize) -> Option<Vec<LocalClifford>> {
    let gates = &LocalClifford::ALL[1..];
    for size in 1..=k {
        // subsets of `size` qubits, preferring high indices
        let mut subsets = Vec::new();
        let mut pick = Vec::new();
        subsets_desc(size, k, &mut pick, &mut subsets);
        for subset in subsets {
            let mut idx = vec![0usize; size];
            loop {
                let mut layer = vec![LocalClifford::I; k];
                for (slot, &q) in subset.iter().enumerate() {
                    layer[q] = gates[idx[slot]];
                }
                if is_css(&apply_layer(rows, &layer)) {
                    return Some(layer);
                }
                let mut pos = 0;
                while pos < size {
                    idx[pos] += 1;
                    if idx[pos] < gates.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == size {
                    break;
                }
            }
        }
    }
    None
}

fn subsets_desc(size: usize, below: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if pick.len() == size {
        out.push(pick.clone());
        return;
    }
    for q in (0..below).rev() {
        if size - pick.len() > q + 1 {
            break;
        }
        pick.push(q);
        subsets_desc(size, q, pick, out);
        pick.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn op(s: &str, n: usize) -> PauliOp {
        PauliOp::parse(s, n).unwrap()
    }

    #[test]
    fn bell_ancilla_for_xx() {
        let a = AncillaSpec::for_operators(&[op("+X1X2", 2)], 2, GadgetMode::XOnly).unwrap();
        let s: Vec<String> = a.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(s, ["+X1X2", "+Z1Z2"]);
        assert!(css_witness_check(&a));
    }

    #[test]
    fn single_operator_ancilla_has_paper_form() {
        // (I + i X⊗Z)|0⟩|+⟩ for a one-qubit Y measurement
        let a = ancilla_tableau(&[op("+Y1", 1)], 1, GadgetMode::TwoBlock).unwrap();
        let expected = Tableau::from_stabilizers(vec![op("-X1Y2", 2), op("+Z1X2", 2)]).unwrap();
        assert!(a.same_state(&expected), "{:?}", a.canonical_strings());
    }

    #[test]
    fn gadget_matches_projective_measurement() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ops = [op("+X1Y2", 2)];
        for _ in 0..20 {
            let t = Tableau::random(2, &mut rng);
            let (out, after) = gadget_measure(&t, &ops, GadgetMode::TwoBlock, &mut rng).unwrap();
            let mut direct = t.clone();
            direct.measure_forced(&ops[0], out[0]).unwrap();
            assert!(after.same_state(&direct));
        }
    }

    #[test]
    fn witness_for_y_ancilla_needs_more_than_h() {
        let a = AncillaSpec::for_operators(&[op("+X1Y2", 2)], 2, GadgetMode::TwoBlock).unwrap();
        assert!(css_witness_check(&a));
        assert!(a.css_witness.iter().any(|c| !matches!(c, LocalClifford::I | LocalClifford::H)));
    }
}
