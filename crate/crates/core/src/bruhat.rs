//! Decomposition of symplectic matrices into the nine-stage form
//! `C P C P H P C' P C' · π`, where the primed C stages are conjugated by the
//! final qubit permutation π.
//!
//! The matrix is first split as `B₁ · w · B₂` with `B₁, B₂` in the Borel
//! subgroup (upper unitriangular CNOT stages times phase layers) and `w` a
//! Hadamard subset followed by a qubit permutation. Each Borel factor is then
//! expanded into two C stages and two P stages.

use serde::{Deserialize, Serialize};

use crate::error::DecomposeError;
use crate::gf2::{BinMatrix, BitVector, Permutation};
use crate::symplectic::{is_symplectic, SymplecticMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    /// CNOT layer `[[U, 0], [0, U^{-T}]]` with `U` upper unitriangular, conjugated by `conj`.
    C { u: BinMatrix, conj: Permutation },
    /// Phase gates on the qubits set in `qubits`.
    P { qubits: BitVector },
    /// Hadamard gates on the qubits set in `qubits`.
    H { qubits: BitVector },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StageForm {
    /// `C P C P H P C P C`
    Nine,
    /// `H C P C P C H P C P C`
    Eleven,
}

impl StageForm {
    pub fn pattern(self) -> &'static str {
        match self {
            StageForm::Nine => "CPCPHPCPC",
            StageForm::Eleven => "HCPCPCHPCPC",
        }
    }
}

impl Stage {
    pub fn kind(&self) -> char {
        match self {
            Stage::C { .. } => 'C',
            Stage::P { .. } => 'P',
            Stage::H { .. } => 'H',
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Stage::C { u, .. } => u.is_identity(),
            Stage::P { qubits } | Stage::H { qubits } => qubits.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageSequence {
    pub n: usize,
    pub stages: Vec<Stage>,
    pub final_perm: Permutation,
}

/// `[[U, 0], [0, U^{-T}]]`.
pub fn cnot_layer(u: &BinMatrix) -> Result<SymplecticMatrix, DecomposeError> {
    let n = u.nrows();
    let uit = u.inverse()?.transpose();
    let z = BinMatrix::zeros(n, n);
    SymplecticMatrix::from_blocks(u, &z, &z, &uit).map_err(|_| DecomposeError::NotSymplectic)
}

/// `[[I, Λ], [0, I]]` for a symmetric `Λ`.
pub fn phase_layer(lambda: &BinMatrix) -> SymplecticMatrix {
    let n = lambda.nrows();
    let i = BinMatrix::identity(n);
    let z = BinMatrix::zeros(n, n);
    SymplecticMatrix::from_blocks(&i, lambda, &z, &i).expect("symmetric phase layer")
}

fn diag(bits: &BitVector) -> BinMatrix {
    let n = bits.len();
    BinMatrix::from_fn(n, n, |i, j| i == j && bits.get(i))
}

pub fn stage_to_matrix(stage: &Stage, n: usize) -> Result<SymplecticMatrix, DecomposeError> {
    match stage {
        Stage::C { u, conj } => {
            if u.nrows() != n || conj.len() != n {
                return Err(crate::error::Gf2Error::DimensionMismatch("C stage size".into()).into());
            }
            let p = SymplecticMatrix::permutation(conj);
            Ok(p.mul(&cnot_layer(u)?).mul(&p.inverse()))
        }
        Stage::P { qubits } => Ok(phase_layer(&diag(qubits))),
        Stage::H { qubits } => {
            let mut m = BinMatrix::identity(2 * n);
            for j in qubits.iter_ones() {
                m.swap_cols(j, n + j);
            }
            Ok(SymplecticMatrix::new(m).expect("hadamard layer"))
        }
    }
}

impl StageSequence {
    /// Product of the stage matrices in order, followed by the final permutation.
    pub fn product(&self) -> Result<SymplecticMatrix, DecomposeError> {
        let mut m = SymplecticMatrix::identity(self.n);
        for s in &self.stages {
            m = m.mul(&stage_to_matrix(s, self.n)?);
        }
        Ok(m.mul(&SymplecticMatrix::permutation(&self.final_perm)))
    }

    pub fn pattern(&self) -> String {
        self.stages.iter().map(|s| s.kind()).collect()
    }

    /// Checks the stage pattern and that every C stage is upper unitriangular,
    /// with the C stages after the H stage conjugated by the final permutation.
    pub fn conforms_to(&self, form: StageForm) -> bool {
        if self.pattern() != form.pattern() {
            return false;
        }
        let last_h = self.stages.iter().rposition(|s| s.kind() == 'H').unwrap_or(0);
        self.stages.iter().enumerate().all(|(i, s)| match s {
            Stage::C { u, conj } => {
                u.is_upper_unitriangular()
                    && if i > last_h { *conj == self.final_perm } else { conj.is_identity() }
            }
            _ => true,
        })
    }
}

/// Reorders `0..2n` as `x_1..x_n, z_n..z_1`, making the Borel subgroup upper triangular.
fn sigma(n: usize, p: usize) -> usize {
    if p < n {
        p
    } else {
        3 * n - 1 - p
    }
}

fn reindex(m: &BinMatrix, n: usize) -> BinMatrix {
    BinMatrix::from_fn(2 * n, 2 * n, |i, j| m.get(sigma(n, i), sigma(n, j)))
}

/// Splits `m = B₁ · w · B₂` with `B₁, B₂` upper triangular in the reordered
/// basis and `w` monomial.
fn borel_split(m: &SymplecticMatrix) -> (BinMatrix, BinMatrix, BinMatrix) {
    let n = m.n();
    let size = 2 * n;
    let pair = |p: usize| size - 1 - p;
    let mut cur = reindex(m.as_matrix(), n);
    let mut left = BinMatrix::identity(size);
    let mut right = BinMatrix::identity(size);

    // cur ← cur·T, right ← T·right with T = I + E_{c,k} (+ E_{pair k, pair c})
    let col_op = |cur: &mut BinMatrix, right: &mut BinMatrix, c: usize, k: usize| {
        cur.add_col(c, k);
        right.add_row(k, c);
        if k != pair(c) {
            cur.add_col(pair(k), pair(c));
            right.add_row(pair(c), pair(k));
        }
    };
    // cur ← S·cur, left ← left·S with S = I + E_{h,i} (+ E_{pair i, pair h})
    let row_op = |cur: &mut BinMatrix, left: &mut BinMatrix, h: usize, i: usize| {
        cur.add_row(i, h);
        left.add_col(h, i);
        if h != pair(i) {
            cur.add_row(pair(h), pair(i));
            left.add_col(pair(i), pair(h));
        }
    };

    for i in (0..size).rev() {
        let c = cur.row(i).first_one().expect("invertible matrix has no zero row");
        let targets: Vec<usize> = cur.row(i).iter_ones().filter(|&k| k > c && k != pair(c)).collect();
        for k in targets {
            col_op(&mut cur, &mut right, c, k);
        }
        if pair(c) > c && cur.get(i, pair(c)) {
            col_op(&mut cur, &mut right, c, pair(c));
        }
        let above: Vec<usize> = (0..i).filter(|&h| h != pair(i) && cur.get(h, c)).collect();
        for h in above {
            row_op(&mut cur, &mut left, h, i);
        }
        if pair(i) < i && cur.get(pair(i), c) {
            row_op(&mut cur, &mut left, pair(i), i);
        }
        debug_assert_eq!(cur.row(i).count_ones(), 1);
    }
    (reindex(&left, n), reindex(&cur, n), reindex(&right, n))
}

/// Upper unitriangular `V` with `V Vᵀ` equal to `s` off the diagonal.
fn cholesky_like(s: &BinMatrix) -> BinMatrix {
    let n = s.nrows();
    let mut v = BinMatrix::identity(n);
    for i in (0..n).rev() {
        for j in (i + 1..n).rev() {
            let mut b = s.get(i, j);
            for k in j + 1..n {
                b ^= v.get(i, k) && v.get(j, k);
            }
            v.set(i, j, b);
        }
    }
    v
}

/// Writes `[[I, S], [0, I]]` (symmetric `S`) as `C(V) · P(all) · C(V⁻¹)` times a
/// diagonal phase layer; returns `(V, diagonal)`.
fn split_symmetric(s: &BinMatrix) -> (BinMatrix, BitVector) {
    let n = s.nrows();
    let v = cholesky_like(s);
    let mut d = BitVector::zeros(n);
    for i in 0..n {
        d.set(i, s.get(i, i) ^ (v.row(i).count_ones() % 2 == 1));
    }
    (v, d)
}

fn all_ones(n: usize) -> BitVector {
    BitVector::from_bools(&vec![true; n])
}

/// Nine-stage decomposition `C P C P H P C' P C' · π` of a symplectic matrix.
pub fn bruhat_decompose(m: &SymplecticMatrix) -> Result<StageSequence, DecomposeError> {
    if !is_symplectic(m.as_matrix()) {
        return Err(DecomposeError::NotSymplectic);
    }
    let n = m.n();
    let (l, w, r) = borel_split(m);
    let blk = |x: &BinMatrix, a: usize, b: usize| x.submatrix(a * n, a * n + n, b * n, b * n + n);

    // w = H(D) · Perm(π)
    let mut h_set = BitVector::zeros(n);
    let mut pi = vec![0; n];
    for (i, slot) in pi.iter_mut().enumerate() {
        let c = w.row(i).first_one().expect("monomial");
        if c < n {
            *slot = c;
        } else {
            *slot = c - n;
            h_set.set(i, true);
        }
    }
    let pi = Permutation::from_vec(pi)?;

    // left factor: C(U1) · [[I, S1], [0, I]]
    let u1 = blk(&l, 0, 0);
    let s1 = u1.inverse()?.mul(&blk(&l, 0, 1))?;
    let (v1, d1) = split_symmetric(&s1);
    // right factor: [[I, S2], [0, I]] · C(U2)
    let u2 = blk(&r, 0, 0);
    let s2 = blk(&r, 0, 1).mul(&u2.transpose())?;
    let (v2, d2) = split_symmetric(&s2);
    let d2_conj = BitVector::from_bools(&(0..n).map(|i| d2.get(pi.apply(i))).collect::<Vec<_>>());

    let id = Permutation::identity(n);
    let stages = vec![
        Stage::C { u: u1.mul(&v1)?, conj: id.clone() },
        Stage::P { qubits: all_ones(n) },
        Stage::C { u: v1.inverse()?, conj: id.clone() },
        Stage::P { qubits: d1 },
        Stage::H { qubits: h_set },
        Stage::P { qubits: d2_conj },
        Stage::C { u: v2.clone(), conj: pi.clone() },
        Stage::P { qubits: all_ones(n) },
        Stage::C { u: v2.inverse()?.mul(&u2)?, conj: pi.clone() },
    ];
    let seq = StageSequence { n, stages, final_perm: pi };
    if seq.product()? != *m {
        return Err(DecomposeError::ReconstructionMismatch);
    }
    debug_assert!(seq.conforms_to(StageForm::Nine));
    Ok(seq)
}

/// Eleven-stage form `H C P C P C H P C P C · π`, obtained from the nine-stage
/// form by adding an empty leading H stage and an identity C stage.
pub fn decompose_eleven(m: &SymplecticMatrix) -> Result<StageSequence, DecomposeError> {
    let nine = bruhat_decompose(m)?;
    let n = nine.n;
    let mut stages = vec![Stage::H { qubits: BitVector::zeros(n) }];
    stages.extend(nine.stages[..4].iter().cloned());
    stages.push(Stage::C { u: BinMatrix::identity(n), conj: Permutation::identity(n) });
    stages.extend(nine.stages[4..].iter().cloned());
    let seq = StageSequence { n, stages, final_perm: nine.final_perm };
    debug_assert!(seq.conforms_to(StageForm::Eleven));
    Ok(seq)
}

pub fn decompose(m: &SymplecticMatrix, form: StageForm) -> Result<StageSequence, DecomposeError> {
    match form {
        StageForm::Nine => bruhat_decompose(m),
        StageForm::Eleven => decompose_eleven(m),
    }
}

/// Writes an invertible `V` as `Perm(conj) · ρ U1 ρ · U2` with `U1`, `U2`
/// upper unitriangular and `ρ` the order-reversing permutation, so that a
/// general CNOT layer becomes permutation-conjugated upper-triangular layers.
pub fn normalize_cstage(v: &BinMatrix) -> Result<(Permutation, BinMatrix, BinMatrix), DecomposeError> {
    let (p, l, u) = v.plu()?;
    let n = v.nrows();
    let u1 = BinMatrix::from_fn(n, n, |i, j| l.get(n - 1 - i, n - 1 - j));
    Ok((p, u1, u))
}

/// Order-reversing permutation of `0..n`.
pub fn reversal(n: usize) -> Permutation {
    Permutation::from_vec((0..n).rev().collect()).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{circuit_to_symplectic, random_symplectic, CliffordGate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_gives_identity_stages() {
        let seq = bruhat_decompose(&SymplecticMatrix::identity(3)).unwrap();
        assert!(seq.conforms_to(StageForm::Nine));
        assert!(seq.final_perm.is_identity());
        assert!(seq.stages.iter().all(|s| match s {
            Stage::H { qubits } => qubits.is_zero(),
            _ => true,
        }));
    }

    #[test]
    fn single_hadamard() {
        let m = circuit_to_symplectic(&[CliffordGate::H(0)], 1).unwrap();
        let seq = bruhat_decompose(&m).unwrap();
        assert_eq!(seq.product().unwrap(), m);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..9 {
            for _ in 0..20 {
                let m = random_symplectic(n, &mut rng);
                let seq = bruhat_decompose(&m).unwrap();
                assert!(seq.conforms_to(StageForm::Nine));
                let e = decompose_eleven(&m).unwrap();
                assert_eq!(e.product().unwrap(), m);
            }
        }
    }

    #[test]
    fn normalize_swap() {
        let v = BinMatrix::parse_rows(&["01", "10"]).unwrap();
        let (p, u1, u2) = normalize_cstage(&v).unwrap();
        assert!(u1.is_upper_unitriangular() && u2.is_upper_unitriangular());
        let r = reversal(2).matrix();
        let rebuilt = p.matrix().mul(&r).unwrap().mul(&u1).unwrap().mul(&r).unwrap().mul(&u2).unwrap();
        assert_eq!(rebuilt, v);
    }
}
