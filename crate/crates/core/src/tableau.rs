//! Stabilizer states as signed generator lists with destabilizer bookkeeping.

use rand::Rng;

use crate::error::SimError;
use crate::gf2::{BinMatrix, BitVector, Permutation};
use crate::pauli::{Axis, PauliOp};
use crate::symplectic::{symplectic_partner, CliffordGate, SymplecticMatrix};

/// Stabilizer state on `n` qubits. `stab[i]` and `destab[i]` anticommute and
/// every other pair of rows commutes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    stab: Vec<PauliOp>,
    destab: Vec<PauliOp>,
}

/// Outcome of a projective Pauli measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    /// `+1` or `-1`.
    pub outcome: i8,
    /// Whether the outcome was uniformly random before the measurement.
    pub random: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeChoice {
    Random,
    Forced(i8),
}

impl Tableau {
    /// `|0⟩^n`.
    pub fn zero_state(n: usize) -> Self {
        Tableau {
            n,
            stab: (0..n).map(|q| PauliOp::single(n, q, Axis::Z)).collect(),
            destab: (0..n).map(|q| PauliOp::single(n, q, Axis::X)).collect(),
        }
    }

    /// `|+⟩^n`.
    pub fn plus_state(n: usize) -> Self {
        Tableau {
            n,
            stab: (0..n).map(|q| PauliOp::single(n, q, Axis::X)).collect(),
            destab: (0..n).map(|q| PauliOp::single(n, q, Axis::Z)).collect(),
        }
    }

    /// State stabilized by `n` commuting, independent, Hermitian generators.
    pub fn from_stabilizers(gens: Vec<PauliOp>) -> Result<Self, SimError> {
        let n = gens.first().map_or(0, |g| g.num_qubits());
        if gens.len() != n {
            return Err(SimError::WrongCount { expected: n, got: gens.len() });
        }
        for g in &gens {
            if g.num_qubits() != n {
                return Err(SimError::WrongCount { expected: n, got: g.num_qubits() });
            }
            if !g.is_hermitian() {
                return Err(crate::error::PauliError::NotHermitian(g.to_string()).into());
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !gens[i].commutes(&gens[j]) {
                    return Err(SimError::NotCommuting(i, j));
                }
            }
        }
        let rows = BinMatrix::from_rows(2 * n, gens.iter().map(|g| g.to_symplectic()).collect()).expect("widths");
        if rows.rank() < n {
            return Err(SimError::DependentGenerators);
        }
        let destab = symplectic_partner(&rows).map_err(|_| SimError::DependentGenerators)?;
        let destab = destab.rows().iter().map(PauliOp::from_symplectic).collect();
        Ok(Tableau { n, stab: gens, destab })
    }

    /// Random state reached from `|0⟩^n` by a random H/P/CNOT word.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut t = Self::zero_state(n);
        let len = (5 * n * n).max(8);
        for g in crate::symplectic::random_gate_word(n, len, rng) {
            t.apply_gate(g).expect("in range");
        }
        // random Pauli frame so that signs vary
        for q in 0..n {
            if rng.gen() {
                t.apply_gate(CliffordGate::X(q)).unwrap();
            }
            if rng.gen() {
                t.apply_gate(CliffordGate::Z(q)).unwrap();
            }
        }
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliOp] {
        &self.stab
    }

    pub fn destabilizers(&self) -> &[PauliOp] {
        &self.destab
    }

    fn rows_mut(&mut self) -> impl Iterator<Item = &mut PauliOp> {
        self.stab.iter_mut().chain(self.destab.iter_mut())
    }

    pub fn apply_gate(&mut self, gate: CliffordGate) -> Result<(), SimError> {
        let n = self.n;
        if gate.max_qubit() >= n {
            return Err(SimError::QubitOutOfRange { index: gate.max_qubit() + 1, n });
        }
        match gate {
            CliffordGate::H(q) => self.rows_mut().for_each(|r| r.conj_h(q)),
            CliffordGate::P(q) => self.rows_mut().for_each(|r| r.conj_p(q)),
            CliffordGate::Cnot(c, t) => {
                if c == t {
                    return Err(SimError::QubitOutOfRange { index: c + 1, n });
                }
                self.rows_mut().for_each(|r| r.conj_cnot(c, t))
            }
            CliffordGate::X(q) => self.rows_mut().for_each(|r| r.conj_x(q)),
            CliffordGate::Z(q) => self.rows_mut().for_each(|r| r.conj_z(q)),
        }
        Ok(())
    }

    pub fn apply_gates(&mut self, gates: &[CliffordGate]) -> Result<(), SimError> {
        gates.iter().try_for_each(|&g| self.apply_gate(g))
    }

    /// Conjugates the state by the Pauli operator `w`.
    pub fn apply_pauli(&mut self, w: &PauliOp) {
        assert_eq!(w.num_qubits(), self.n);
        for r in self.rows_mut() {
            if !r.commutes(w) {
                r.phase_exp = (r.phase_exp + 2) % 4;
            }
        }
    }

    /// Outcome of measuring `p` if it is determined by the state.
    pub fn deterministic_outcome(&self, p: &PauliOp) -> Option<i8> {
        if self.stab.iter().any(|s| !s.commutes(p)) {
            return None;
        }
        let mut acc = PauliOp::identity(self.n);
        for (s, d) in self.stab.iter().zip(&self.destab) {
            if !d.commutes(p) {
                acc.mul_assign(s);
            }
        }
        debug_assert_eq!(acc.x, p.x);
        debug_assert_eq!(acc.z, p.z);
        Some(if acc.phase_exp == p.phase_exp { 1 } else { -1 })
    }

    /// Projective measurement of a Hermitian Pauli operator.
    pub fn measure<R: Rng + ?Sized>(&mut self, p: &PauliOp, choice: OutcomeChoice, rng: &mut R) -> Result<Measurement, SimError> {
        if p.num_qubits() != self.n {
            return Err(SimError::WrongCount { expected: self.n, got: p.num_qubits() });
        }
        if !p.is_hermitian() {
            return Err(crate::error::PauliError::NotHermitian(p.to_string()).into());
        }
        let Some(k) = self.stab.iter().position(|s| !s.commutes(p)) else {
            let det = self.deterministic_outcome(p).expect("commutes with all stabilizers");
            if let OutcomeChoice::Forced(f) = choice {
                if f != det {
                    return Err(SimError::ForcedOutcomeImpossible { op: p.to_string(), forced: f });
                }
            }
            return Ok(Measurement { outcome: det, random: false });
        };
        let pivot = self.stab[k].clone();
        for i in 0..self.n {
            if i != k && !self.stab[i].commutes(p) {
                self.stab[i].mul_assign(&pivot);
            }
            if i != k && !self.destab[i].commutes(p) {
                self.destab[i].mul_assign(&pivot);
            }
        }
        let outcome = match choice {
            OutcomeChoice::Random => {
                if rng.gen() {
                    1
                } else {
                    -1
                }
            }
            OutcomeChoice::Forced(f) => f,
        };
        self.destab[k] = pivot;
        self.stab[k] = if outcome == 1 { p.clone() } else { p.negated() };
        Ok(Measurement { outcome, random: true })
    }

    pub fn measure_random<R: Rng + ?Sized>(&mut self, p: &PauliOp, rng: &mut R) -> Result<Measurement, SimError> {
        self.measure(p, OutcomeChoice::Random, rng)
    }

    /// Measurement with a prescribed outcome; fails if the outcome is impossible.
    pub fn measure_forced(&mut self, p: &PauliOp, outcome: i8) -> Result<Measurement, SimError> {
        self.measure(p, OutcomeChoice::Forced(outcome), &mut NoRng)
    }

    /// `self ⊗ other`, with the qubits of `self` first.
    pub fn tensor(&self, other: &Tableau) -> Tableau {
        let n = self.n + other.n;
        let left: Vec<usize> = (0..self.n).collect();
        let right: Vec<usize> = (self.n..n).collect();
        let mut stab: Vec<PauliOp> = self.stab.iter().map(|p| p.embed(n, &left)).collect();
        stab.extend(other.stab.iter().map(|p| p.embed(n, &right)));
        let mut destab: Vec<PauliOp> = self.destab.iter().map(|p| p.embed(n, &left)).collect();
        destab.extend(other.destab.iter().map(|p| p.embed(n, &right)));
        Tableau { n, stab, destab }
    }

    /// Moves qubit `i` to position `perm(i)`.
    pub fn permute_qubits(&self, perm: &Permutation) -> Tableau {
        assert_eq!(perm.len(), self.n);
        let pos = perm.as_slice();
        Tableau {
            n: self.n,
            stab: self.stab.iter().map(|p| p.embed(self.n, pos)).collect(),
            destab: self.destab.iter().map(|p| p.embed(self.n, pos)).collect(),
        }
    }

    /// Traces out qubits that are each in a pure state, unentangled with the rest.
    /// The remaining qubits keep their relative order.
    pub fn discard_qubits(&self, qubits: &[usize]) -> Result<Tableau, SimError> {
        let mut stab = self.stab.clone();
        let mut drop = vec![false; self.n];
        for &q in qubits {
            if q >= self.n {
                return Err(SimError::QubitOutOfRange { index: q + 1, n: self.n });
            }
            drop[q] = true;
            let Some(k) = stab.iter().position(|s| s.x.get(q) || s.z.get(q)) else {
                return Err(SimError::NotProduct(q));
            };
            let pivot = stab.remove(k);
            let axis = pivot.axis_at(q);
            for s in stab.iter_mut() {
                match s.axis_at(q) {
                    None => {}
                    a if a == axis => s.mul_assign(&pivot),
                    _ => return Err(SimError::NotProduct(q)),
                }
            }
        }
        let keep: Vec<usize> = (0..self.n).filter(|&q| !drop[q]).collect();
        let gens: Vec<PauliOp> = stab.iter().map(|s| s.restrict(&keep)).collect();
        if keep.is_empty() {
            return Ok(Tableau { n: 0, stab: vec![], destab: vec![] });
        }
        Tableau::from_stabilizers(gens)
    }

    /// Keeps only the listed qubits (in that order); the rest must be in a product state.
    pub fn extract_qubits(&self, keep: &[usize]) -> Result<Tableau, SimError> {
        let mut marked = vec![false; self.n];
        for &k in keep {
            marked[k] = true;
        }
        let others: Vec<usize> = (0..self.n).filter(|&q| !marked[q]).collect();
        let reduced = self.discard_qubits(&others)?;
        // reduced holds `keep` in ascending order; reorder to the requested order
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        let pos: Vec<usize> = sorted.iter().map(|q| keep.iter().position(|k| k == q).unwrap()).collect();
        Ok(reduced.permute_qubits(&Permutation::from_vec(pos).expect("distinct qubits")))
    }

    /// Unique reduced row-echelon generator set. Columns are ordered
    /// `x_1, z_1, x_2, z_2, …`.
    pub fn canonical_form(&self) -> Vec<PauliOp> {
        canonical_generators(&self.stab)
    }

    pub fn canonical_strings(&self) -> Vec<String> {
        self.canonical_form().iter().map(|p| p.to_string()).collect()
    }

    pub fn same_state(&self, other: &Tableau) -> bool {
        self.n == other.n && self.canonical_form() == other.canonical_form()
    }
}

/// Reduced row-echelon form of a commuting generator list, signs tracked.
pub fn canonical_generators(gens: &[PauliOp]) -> Vec<PauliOp> {
    let mut rows = gens.to_vec();
    let n = rows.first().map_or(0, |r| r.num_qubits());
    let bit = |p: &PauliOp, c: usize| if c.is_multiple_of(2) { p.x.get(c / 2) } else { p.z.get(c / 2) };
    let mut r = 0;
    for c in 0..2 * n {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i], c)) else { continue };
        rows.swap(p, r);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && bit(row, c) {
                row.mul_assign(&pivot);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Clifford operation given by signed images of `X_i` and `Z_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordMap {
    pub images_x: Vec<PauliOp>,
    pub images_z: Vec<PauliOp>,
}

impl CliffordMap {
    pub fn identity(n: usize) -> Self {
        CliffordMap {
            images_x: (0..n).map(|q| PauliOp::single(n, q, Axis::X)).collect(),
            images_z: (0..n).map(|q| PauliOp::single(n, q, Axis::Z)).collect(),
        }
    }

    pub fn from_circuit(gates: &[CliffordGate], n: usize) -> Result<Self, SimError> {
        let mut m = Self::identity(n);
        for &g in gates {
            if g.max_qubit() >= n {
                return Err(SimError::QubitOutOfRange { index: g.max_qubit() + 1, n });
            }
            for img in m.images_x.iter_mut().chain(m.images_z.iter_mut()) {
                match g {
                    CliffordGate::H(q) => img.conj_h(q),
                    CliffordGate::P(q) => img.conj_p(q),
                    CliffordGate::Cnot(c, t) => img.conj_cnot(c, t),
                    CliffordGate::X(q) => img.conj_x(q),
                    CliffordGate::Z(q) => img.conj_z(q),
                }
            }
        }
        Ok(m)
    }

    /// Map with the images given by the rows of `m`; `neg_x[i]`/`neg_z[i]`
    /// negate the corresponding image.
    pub fn from_symplectic(m: &SymplecticMatrix, neg_x: &BitVector, neg_z: &BitVector) -> Self {
        let n = m.n();
        let row = |i: usize| PauliOp::from_symplectic(m.as_matrix().row(i));
        CliffordMap {
            images_x: (0..n).map(|i| row(i).with_sign(neg_x.get(i))).collect(),
            images_z: (0..n).map(|i| row(n + i).with_sign(neg_z.get(i))).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images_x.len()
    }

    pub fn to_symplectic(&self) -> SymplecticMatrix {
        let n = self.n();
        let rows = self.images_x.iter().chain(&self.images_z).map(|p| p.to_symplectic()).collect();
        SymplecticMatrix::new_unchecked(BinMatrix::from_rows(2 * n, rows).unwrap())
    }

    /// Sign bits of the images relative to the `+` Hermitian form.
    pub fn sign_bits(&self) -> (BitVector, BitVector) {
        let bits = |v: &[PauliOp]| BitVector::from_bools(&v.iter().map(|p| p.is_negative()).collect::<Vec<_>>());
        (bits(&self.images_x), bits(&self.images_z))
    }

    /// `U p U†`.
    pub fn conjugate(&self, p: &PauliOp) -> PauliOp {
        let n = self.n();
        let mut acc = PauliOp::identity(n);
        acc.phase_exp = p.phase_exp;
        for q in p.x.iter_ones() {
            acc.mul_assign(&self.images_x[q]);
        }
        for q in p.z.iter_ones() {
            acc.mul_assign(&self.images_z[q]);
        }
        acc
    }

    pub fn apply_to(&self, t: &Tableau) -> Tableau {
        Tableau {
            n: t.n,
            stab: t.stab.iter().map(|p| self.conjugate(p)).collect(),
            destab: t.destab.iter().map(|p| self.conjugate(p)).collect(),
        }
    }
}

/// Placeholder generator for forced measurements, which never draw randomness.
struct NoRng;

impl rand::RngCore for NoRng {
    fn next_u32(&mut self) -> u32 {
        unreachable!("forced measurement drew randomness")
    }
    fn next_u64(&mut self) -> u64 {
        unreachable!("forced measurement drew randomness")
    }
    fn fill_bytes(&mut self, _: &mut [u8]) {
        unreachable!("forced measurement drew randomness")
    }
    fn try_fill_bytes(&mut self, _: &mut [u8]) -> Result<(), rand::Error> {
        unreachable!("forced measurement drew randomness")
    }
}
