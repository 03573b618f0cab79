//! Binary symplectic matrices of Clifford operations.
//!
//! Rows `0..N` of a matrix hold the images of `X_1..X_N`, rows `N..2N` the
//! images of `Z_1..Z_N`, each as a `(x|z)` row vector. Appending a gate to a
//! circuit acts on columns, so the matrix of a circuit is the product of its
//! gate matrices in time order and a Pauli row vector `v` maps to `v·M`.

use rand::Rng;

use crate::error::SymplecticError;
use crate::gf2::{BinMatrix, BitVector, Permutation};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CliffordGate {
    H(usize),
    P(usize),
    Cnot(usize, usize),
    X(usize),
    Z(usize),
}

impl CliffordGate {
    pub fn max_qubit(&self) -> usize {
        match *self {
            CliffordGate::H(q) | CliffordGate::P(q) | CliffordGate::X(q) | CliffordGate::Z(q) => q,
            CliffordGate::Cnot(a, b) => a.max(b),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymplecticMatrix {
    m: BinMatrix,
}

/// `J = [[0, I], [I, 0]]` of size `2n`.
pub fn symplectic_form(n: usize) -> BinMatrix {
    BinMatrix::from_fn(2 * n, 2 * n, |i, j| j == (i + n) % (2 * n))
}

/// Checks `M J Mᵗ = J`.
pub fn is_symplectic(m: &BinMatrix) -> bool {
    if !m.is_square() || !m.nrows().is_multiple_of(2) {
        return false;
    }
    let n = m.nrows() / 2;
    (0..2 * n).all(|i| {
        (0..2 * n).all(|j| row_product(m.row(i), m.row(j), n) == (j == (i + n) % (2 * n)))
    })
}

/// Symplectic product of two `2n` row vectors.
pub fn row_product(u: &BitVector, v: &BitVector, n: usize) -> bool {
    let mut a = false;
    for i in u.iter_ones() {
        let j = if i < n { i + n } else { i - n };
        a ^= v.get(j);
    }
    a
}

impl SymplecticMatrix {
    pub fn new(m: BinMatrix) -> Result<Self, SymplecticError> {
        if is_symplectic(&m) {
            Ok(SymplecticMatrix { m })
        } else {
            Err(SymplecticError::NotSymplectic)
        }
    }

    pub(crate) fn new_unchecked(m: BinMatrix) -> Self {
        debug_assert!(is_symplectic(&m));
        SymplecticMatrix { m }
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix { m: BinMatrix::identity(2 * n) }
    }

    pub fn from_blocks(q: &BinMatrix, r: &BinMatrix, s: &BinMatrix, t: &BinMatrix) -> Result<Self, SymplecticError> {
        let m = q.hstack(r)?.vstack(&s.hstack(t)?)?;
        Self::new(m)
    }

    /// Matrix of the qubit permutation sending qubit `i` to `perm(i)`.
    pub fn permutation(perm: &Permutation) -> Self {
        let n = perm.len();
        let p = perm.as_slice();
        let m = BinMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n {
                j == p[i]
            } else {
                j == n + p[i - n]
            }
        });
        SymplecticMatrix { m }
    }

    pub fn n(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn as_matrix(&self) -> &BinMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> BinMatrix {
        self.m
    }

    /// Blocks `(Q, R, S, T)` of `[[Q, R], [S, T]]`.
    pub fn blocks(&self) -> (BinMatrix, BinMatrix, BinMatrix, BinMatrix) {
        let n = self.n();
        (
            self.m.submatrix(0, n, 0, n),
            self.m.submatrix(0, n, n, 2 * n),
            self.m.submatrix(n, 2 * n, 0, n),
            self.m.submatrix(n, 2 * n, n, 2 * n),
        )
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix { m: self.m.mul(&other.m).expect("matching sizes") }
    }

    /// Inverse `J Mᵗ J`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let j = symplectic_form(self.n());
        let inv = j.mul(&self.m.transpose()).unwrap().mul(&j).unwrap();
        SymplecticMatrix { m: inv }
    }

    /// Image of a `(x|z)` row vector.
    pub fn apply_row(&self, v: &BitVector) -> BitVector {
        self.m.left_mul_vec(v)
    }

    /// Appends a gate in place. `X` and `Z` gates do not change the matrix.
    pub fn apply_gate(&mut self, gate: CliffordGate) -> Result<(), SymplecticError> {
        let n = self.n();
        if gate.max_qubit() >= n {
            return Err(SymplecticError::QubitOutOfRange { index: gate.max_qubit() + 1, n });
        }
        match gate {
            CliffordGate::H(j) => self.m.swap_cols(j, n + j),
            CliffordGate::P(j) => self.m.add_col(j, n + j),
            CliffordGate::Cnot(c, t) => {
                if c == t {
                    return Err(SymplecticError::QubitOutOfRange { index: c + 1, n });
                }
                self.m.add_col(c, t);
                self.m.add_col(n + t, n + c);
            }
            CliffordGate::X(_) | CliffordGate::Z(_) => {}
        }
        Ok(())
    }

    pub fn gate_matrix(gate: CliffordGate, n: usize) -> Result<Self, SymplecticError> {
        let mut m = Self::identity(n);
        m.apply_gate(gate)?;
        Ok(m)
    }
}

/// Symplectic matrix of a gate list on `n` qubits, gates in time order.
pub fn circuit_to_symplectic(gates: &[CliffordGate], n: usize) -> Result<SymplecticMatrix, SymplecticError> {
    let mut m = SymplecticMatrix::identity(n);
    for &g in gates {
        m.apply_gate(g)?;
    }
    Ok(m)
}

/// For commuting independent rows `AB` (`d × 2N`) finds `EF` with
/// `AB J EFᵗ = I` and `EF J EFᵗ = 0`.
///
/// Each row is the zero-free-variable solution of its linear system, then
/// rows are made pairwise commuting by adding rows of `AB` in index order.
pub fn symplectic_partner(ab: &BinMatrix) -> Result<BinMatrix, SymplecticError> {
    let cols = ab.ncols();
    if !cols.is_multiple_of(2) {
        return Err(SymplecticError::Gf2(crate::error::Gf2Error::DimensionMismatch("odd width".into())));
    }
    let n = cols / 2;
    let d = ab.nrows();
    for i in 0..d {
        for j in i + 1..d {
            if row_product(ab.row(i), ab.row(j), n) {
                return Err(SymplecticError::NotCommuting(i, j));
            }
        }
    }
    // (AB J) e = unit
    let abj = BinMatrix::from_fn(d, cols, |i, j| ab.get(i, (j + n) % cols));
    let mut ef = Vec::with_capacity(d);
    for i in 0..d {
        let sol = abj.solve(&BitVector::unit(d, i)).ok_or(SymplecticError::Dependent)?;
        ef.push(sol);
    }
    for k in 0..d {
        for j in 0..k {
            if row_product(&ef[k], &ef[j], n) {
                let fix = ab.row(j).clone();
                ef[k].xor_assign(&fix);
            }
        }
    }
    Ok(BinMatrix::from_rows(cols, ef)?)
}

/// Random symplectic matrix built from a random H/P/CNOT word of length at
/// least `5n²`. Not uniform over the group.
pub fn random_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymplecticMatrix {
    // H and P are both odd on the three non-identity Paulis of one qubit,
    // so a fixed word length would only reach half of Sp(2)
    let len = (5 * n * n).max(4) + rng.gen_range(0..2);
    let gates = random_gate_word(n, len, rng);
    circuit_to_symplectic(&gates, n).expect("gates in range")
}

/// Uniformly chosen H, P and CNOT gates.
pub fn random_gate_word<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> Vec<CliffordGate> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let kind = if n >= 2 { rng.gen_range(0..3) } else { rng.gen_range(0..2) };
        let g = match kind {
            0 => CliffordGate::H(rng.gen_range(0..n)),
            1 => CliffordGate::P(rng.gen_range(0..n)),
            _ => {
                let c = rng.gen_range(0..n);
                let mut t = rng.gen_range(0..n - 1);
                if t >= c {
                    t += 1;
                }
                CliffordGate::Cnot(c, t)
            }
        };
        out.push(g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_gate_matrices() {
        let h = SymplecticMatrix::gate_matrix(CliffordGate::H(0), 1).unwrap();
        assert_eq!(h.as_matrix().to_row_strings(), ["01", "10"]);
        let p = SymplecticMatrix::gate_matrix(CliffordGate::P(0), 1).unwrap();
        assert_eq!(p.as_matrix().to_row_strings(), ["11", "01"]);
        let c = SymplecticMatrix::gate_matrix(CliffordGate::Cnot(0, 1), 2).unwrap();
        assert_eq!(c.as_matrix().to_row_strings(), ["1100", "0100", "0010", "0011"]);
    }

    #[test]
    fn partner_of_z_rows_is_x_rows() {
        let ab = BinMatrix::parse_rows(&["1000", "0100"]).unwrap();
        let ef = symplectic_partner(&ab).unwrap();
        assert_eq!(ef.to_row_strings(), ["0010", "0001"]);
    }

    #[test]
    fn random_matrices_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            let m = random_symplectic(n, &mut rng);
            assert!(is_symplectic(m.as_matrix()));
            assert_eq!(m.mul(&m.inverse()), SymplecticMatrix::identity(n));
        }
    }
}
