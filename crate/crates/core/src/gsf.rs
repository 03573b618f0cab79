//! Generator forms: logical X rows, logical Z rows and stabilizer rows of a
//! stabilizer code, updated under Pauli measurements.
//!
//! Rows are kept as signed Pauli operators. Phase-free use simply ignores the
//! signs; the same code tracks exact signs when measurement outcomes are given.

use crate::error::GsfError;
use crate::gf2::{BinMatrix, BitVector};
use crate::pauli::{symplectic_product, Axis, PauliOp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gsf {
    pub logical_x: Vec<PauliOp>,
    pub logical_z: Vec<PauliOp>,
    pub stabilizers: Vec<PauliOp>,
}

/// Basis of a single-qubit auxiliary register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxBasis {
    /// `|0⟩`, stabilized by `Z`.
    Zero,
    /// `|+⟩`, stabilized by `X`.
    Plus,
}

impl AuxBasis {
    pub fn axis(self) -> Axis {
        match self {
            AuxBasis::Zero => Axis::Z,
            AuxBasis::Plus => Axis::X,
        }
    }

    pub fn flipped(self) -> AuxBasis {
        match self {
            AuxBasis::Zero => AuxBasis::Plus,
            AuxBasis::Plus => AuxBasis::Zero,
        }
    }
}

impl Gsf {
    /// Form of `n` data qubits on `Q_1..Q_n` (positions `n..2n`) with the
    /// auxiliary qubits `A_1..A_n` (positions `0..n`) in the given basis.
    pub fn initial(n: usize, aux: AuxBasis) -> Gsf {
        let total = 2 * n;
        Gsf {
            logical_x: (0..n).map(|i| PauliOp::single(total, n + i, Axis::X)).collect(),
            logical_z: (0..n).map(|i| PauliOp::single(total, n + i, Axis::Z)).collect(),
            stabilizers: (0..n).map(|i| PauliOp::single(total, i, aux.axis())).collect(),
        }
    }

    /// Builds a form from `(x|z)` rows: `k` logical X rows, `k` logical Z rows,
    /// then stabilizer rows. All rows get the `+` Hermitian phase.
    pub fn from_matrix(k: usize, m: &BinMatrix) -> Gsf {
        let rows: Vec<PauliOp> = m.rows().iter().map(PauliOp::from_symplectic).collect();
        Gsf {
            logical_x: rows[..k].to_vec(),
            logical_z: rows[k..2 * k].to_vec(),
            stabilizers: rows[2 * k..].to_vec(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.stabilizers
            .first()
            .or(self.logical_x.first())
            .map_or(0, |p| p.num_qubits())
    }

    pub fn num_logical(&self) -> usize {
        self.logical_x.len()
    }

    /// Rows as a binary matrix, phases dropped.
    pub fn to_matrix(&self) -> BinMatrix {
        let rows = self
            .logical_x
            .iter()
            .chain(&self.logical_z)
            .chain(&self.stabilizers)
            .map(|p| p.to_symplectic())
            .collect();
        BinMatrix::from_rows(2 * self.num_qubits(), rows).unwrap()
    }

    pub fn logical_rows(&self) -> impl Iterator<Item = &PauliOp> {
        self.logical_x.iter().chain(&self.logical_z)
    }

    fn logical_rows_mut(&mut self) -> impl Iterator<Item = &mut PauliOp> {
        self.logical_x.iter_mut().chain(self.logical_z.iter_mut())
    }

    /// Multiplies stabilizer row `s` into logical row `l` (index over X rows then Z rows).
    pub fn add_stabilizer_to_logical(&mut self, s: usize, l: usize) {
        let st = self.stabilizers[s].clone();
        let k = self.num_logical();
        if l < k {
            self.logical_x[l].mul_assign(&st);
        } else {
            self.logical_z[l - k].mul_assign(&st);
        }
    }

    /// Measurement update for operators that already satisfy the four
    /// preconditions against stabilizer rows `0..d`: the measured operators
    /// pairwise commute, row `i < d` anticommutes with operator `i` only, rows
    /// `≥ d` commute with all of them, and every logical row commutes with all
    /// of them. Rows `0..d` are replaced by the measured operators.
    pub fn measure_update(&self, ef: &[PauliOp]) -> Result<Gsf, GsfError> {
        self.check_width(ef)?;
        check_self_orthogonal(ef)?;
        if ef.len() > self.stabilizers.len() {
            return Err(GsfError::Cond2Partner);
        }
        for (i, s) in self.stabilizers.iter().enumerate() {
            for (j, e) in ef.iter().enumerate() {
                if symplectic_product(s, e) != (i == j) {
                    return Err(GsfError::Cond2Partner);
                }
            }
        }
        if self.logical_x.iter().any(|l| ef.iter().any(|e| symplectic_product(l, e))) {
            return Err(GsfError::Cond3LogicalX);
        }
        if self.logical_z.iter().any(|l| ef.iter().any(|e| symplectic_product(l, e))) {
            return Err(GsfError::Cond4LogicalZ);
        }
        let mut out = self.clone();
        for (i, e) in ef.iter().enumerate() {
            out.stabilizers[i] = e.clone();
        }
        Ok(out)
    }

    /// Rewrites the form into an equivalent one (same stabilizer group, logical
    /// rows changed by stabilizer elements) on which `measure_update` applies.
    pub fn align_for_measurement(&self, ef: &[PauliOp]) -> Result<Gsf, GsfError> {
        self.check_width(ef)?;
        check_self_orthogonal(ef)?;
        let d = ef.len();
        let s = self.stabilizers.len();
        if d > s {
            return Err(GsfError::Cond2Partner);
        }
        let mut stab = self.stabilizers.clone();
        let mut k: Vec<BitVector> = stab
            .iter()
            .map(|r| BitVector::from_bools(&ef.iter().map(|e| symplectic_product(r, e)).collect::<Vec<_>>()))
            .collect();
        for j in 0..d {
            let p = (j..s).find(|&i| k[i].get(j)).ok_or(GsfError::Cond2Partner)?;
            k.swap(p, j);
            stab.swap(p, j);
            let (kj, sj) = (k[j].clone(), stab[j].clone());
            for i in 0..s {
                if i != j && k[i].get(j) {
                    k[i].xor_assign(&kj);
                    stab[i].mul_assign(&sj);
                }
            }
        }
        let mut out = Gsf { logical_x: self.logical_x.clone(), logical_z: self.logical_z.clone(), stabilizers: stab };
        let paired = out.stabilizers[..d].to_vec();
        for l in out.logical_rows_mut() {
            for (e, st) in ef.iter().zip(&paired) {
                if symplectic_product(l, e) {
                    l.mul_assign(st);
                }
            }
        }
        Ok(out)
    }

    /// Aligns, then records the measured operators as stabilizers. `outcomes`
    /// (`±1` per operator) negates the recorded rows; `None` keeps them as given.
    pub fn measure(&self, ef: &[PauliOp], outcomes: Option<&[i8]>) -> Result<Gsf, GsfError> {
        let aligned = self.align_for_measurement(ef)?;
        let signed: Vec<PauliOp> = match outcomes {
            None => ef.to_vec(),
            Some(o) => ef.iter().zip(o).map(|(e, &v)| if v == 1 { e.clone() } else { e.negated() }).collect(),
        };
        aligned.measure_update(&signed)
    }

    /// Multiplies stabilizers into the logical rows so that no logical row has
    /// support on a pivot column of the reduced stabilizer rows.
    pub fn reduce_logicals(&mut self) {
        let nq = self.num_qubits();
        let bit = |p: &PauliOp, c: usize| if c < nq { p.x.get(c) } else { p.z.get(c - nq) };
        let mut stab = self.stabilizers.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..2 * nq {
            if r == stab.len() {
                break;
            }
            let Some(p) = (r..stab.len()).find(|&i| bit(&stab[i], c)) else { continue };
            stab.swap(p, r);
            let piv = stab[r].clone();
            for (i, row) in stab.iter_mut().enumerate() {
                if i != r && bit(row, c) {
                    row.mul_assign(&piv);
                }
            }
            pivots.push(c);
            r += 1;
        }
        for l in self.logical_rows_mut() {
            for (row, &c) in stab.iter().zip(&pivots) {
                if bit(l, c) {
                    l.mul_assign(row);
                }
            }
        }
    }

    fn check_width(&self, ef: &[PauliOp]) -> Result<(), GsfError> {
        let n = self.num_qubits();
        match ef.iter().find(|e| e.num_qubits() != n) {
            Some(e) => Err(GsfError::Width { expected: n, got: e.num_qubits() }),
            None => Ok(()),
        }
    }
}

fn check_self_orthogonal(ef: &[PauliOp]) -> Result<(), GsfError> {
    for (i, a) in ef.iter().enumerate() {
        for b in &ef[i + 1..] {
            if symplectic_product(a, b) {
                return Err(GsfError::Cond1SelfOrthogonal);
            }
        }
    }
    Ok(())
}

/// Rows `(x|z)` to `+`-phase Hermitian operators.
pub fn rows_to_ops(m: &BinMatrix) -> Vec<PauliOp> {
    m.rows().iter().map(PauliOp::from_symplectic).collect()
}
