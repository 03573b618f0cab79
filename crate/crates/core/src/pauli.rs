//! Pauli operators in binary form `i^l · X^a Z^b`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::PauliError;
use crate::gf2::BitVector;

/// `i^phase_exp · X^x · Z^z` on `x.len()` qubits.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliOp {
    pub x: BitVector,
    pub z: BitVector,
    pub phase_exp: u8,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Symplectic product `a·f + b·e` of `(a|b)` and `(e|f)`.
pub fn symplectic_product(p: &PauliOp, q: &PauliOp) -> bool {
    p.x.dot(&q.z) ^ p.z.dot(&q.x)
}

impl PauliOp {
    pub fn new(x: BitVector, z: BitVector, phase_exp: u8) -> Result<Self, PauliError> {
        if x.len() != z.len() {
            return Err(PauliError::LengthMismatch(x.len(), z.len()));
        }
        Ok(PauliOp { x, z, phase_exp: phase_exp % 4 })
    }

    /// Hermitian operator with a `+` sign: `i^τ X^x Z^z`, τ = |x ∧ z|.
    pub fn hermitian(x: BitVector, z: BitVector) -> Self {
        assert_eq!(x.len(), z.len());
        let tau = (x.and_count(&z) % 4) as u8;
        PauliOp { x, z, phase_exp: tau }
    }

    /// Hermitian operator from a `2n` vector `(x|z)`.
    pub fn from_symplectic(v: &BitVector) -> Self {
        assert!(v.len().is_multiple_of(2));
        let n = v.len() / 2;
        Self::hermitian(v.slice(0, n), v.slice(n, 2 * n))
    }

    pub fn identity(n: usize) -> Self {
        PauliOp { x: BitVector::zeros(n), z: BitVector::zeros(n), phase_exp: 0 }
    }

    pub fn single(n: usize, q: usize, axis: Axis) -> Self {
        let mut p = Self::identity(n);
        match axis {
            Axis::X => p.x.set(q, true),
            Axis::Z => p.z.set(q, true),
            Axis::Y => {
                p.x.set(q, true);
                p.z.set(q, true);
                p.phase_exp = 1;
            }
        }
        p
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn tau(&self) -> usize {
        self.x.and_count(&self.z)
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase_exp as usize + 4 - self.tau() % 4).is_multiple_of(2)
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Coefficient exponent `k` in `i^k · (product of X, Y, Z letters)`.
    pub fn letter_phase(&self) -> u8 {
        ((self.phase_exp as usize + 4 - self.tau() % 4) % 4) as u8
    }

    /// True when the operator is `-1` times its letter form.
    pub fn is_negative(&self) -> bool {
        self.letter_phase() == 2
    }

    /// Same letters with the given sign (Hermitian result).
    pub fn with_sign(&self, negative: bool) -> Self {
        let mut p = self.clone();
        p.phase_exp = ((self.tau() % 4) as u8 + if negative { 2 } else { 0 }) % 4;
        p
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.phase_exp = (p.phase_exp + 2) % 4;
        p
    }

    /// Operator with the phase dropped to its Hermitian `+` representative.
    pub fn unsigned(&self) -> Self {
        Self::hermitian(self.x.clone(), self.z.clone())
    }

    pub fn to_symplectic(&self) -> BitVector {
        self.x.concat(&self.z)
    }

    /// Product `self · other` with exact phase.
    pub fn multiply(&self, other: &PauliOp) -> Result<PauliOp, PauliError> {
        if self.num_qubits() != other.num_qubits() {
            return Err(PauliError::LengthMismatch(self.num_qubits(), other.num_qubits()));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliOp) -> PauliOp {
        // X^a Z^b X^e Z^f = (-1)^{b·e} X^{a+e} Z^{b+f}
        let swap = (self.z.and_count(&other.x) % 2) as u8;
        PauliOp {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            phase_exp: (self.phase_exp + other.phase_exp + 2 * swap) % 4,
        }
    }

    /// `self ← self · other`.
    pub fn mul_assign(&mut self, other: &PauliOp) {
        let swap = (self.z.and_count(&other.x) % 2) as u8;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
        self.phase_exp = (self.phase_exp + other.phase_exp + 2 * swap) % 4;
    }

    pub fn commutes(&self, other: &PauliOp) -> bool {
        !symplectic_product(self, other)
    }

    pub fn weight(&self) -> usize {
        (0..self.num_qubits()).filter(|&q| self.x.get(q) || self.z.get(q)).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits()).filter(|&q| self.x.get(q) || self.z.get(q)).collect()
    }

    pub fn axis_at(&self, q: usize) -> Option<Axis> {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => None,
            (true, false) => Some(Axis::X),
            (false, true) => Some(Axis::Z),
            (true, true) => Some(Axis::Y),
        }
    }

    /// Places qubit `i` of `self` at position `positions[i]` of an `n`-qubit operator.
    pub fn embed(&self, n: usize, positions: &[usize]) -> PauliOp {
        assert_eq!(positions.len(), self.num_qubits());
        let mut p = PauliOp::identity(n);
        for (i, &pos) in positions.iter().enumerate() {
            p.x.set(pos, self.x.get(i));
            p.z.set(pos, self.z.get(i));
        }
        p.phase_exp = self.phase_exp;
        p
    }

    /// Keeps only the listed qubits, in the listed order. The letter phase is preserved.
    pub fn restrict(&self, positions: &[usize]) -> PauliOp {
        let x = BitVector::from_bools(&positions.iter().map(|&q| self.x.get(q)).collect::<Vec<_>>());
        let z = BitVector::from_bools(&positions.iter().map(|&q| self.z.get(q)).collect::<Vec<_>>());
        let tau = x.and_count(&z) % 4;
        let k = self.letter_phase() as usize;
        PauliOp { x, z, phase_exp: ((k + tau) % 4) as u8 }
    }

    // Conjugation `U P U†` by single gates. The rules act on the letter form
    // with a sign; the overall coefficient is carried through unchanged.

    fn conj_with(&mut self, f: impl FnOnce(&mut BitVector, &mut BitVector) -> bool) {
        let k = self.letter_phase();
        let flip = f(&mut self.x, &mut self.z);
        let tau = (self.x.and_count(&self.z) % 4) as u8;
        self.phase_exp = (tau + k + if flip { 2 } else { 0 }) % 4;
    }

    pub fn conj_h(&mut self, q: usize) {
        self.conj_with(|x, z| {
            let (a, b) = (x.get(q), z.get(q));
            x.set(q, b);
            z.set(q, a);
            a && b
        });
    }

    pub fn conj_p(&mut self, q: usize) {
        self.conj_with(|x, z| {
            let (a, b) = (x.get(q), z.get(q));
            z.set(q, a ^ b);
            a && b
        });
    }

    pub fn conj_cnot(&mut self, c: usize, t: usize) {
        self.conj_with(|x, z| {
            let (xc, zc, xt, zt) = (x.get(c), z.get(c), x.get(t), z.get(t));
            x.set(t, xt ^ xc);
            z.set(c, zc ^ zt);
            xc && zt && !(xt ^ zc)
        });
    }

    pub fn conj_x(&mut self, q: usize) {
        self.conj_with(|_, z| z.get(q));
    }

    pub fn conj_z(&mut self, q: usize) {
        self.conj_with(|x, _| x.get(q));
    }

    /// Parses strings such as `+Z1Z2`, `-iX1Y3` or `+I` for an `n`-qubit operator.
    pub fn parse(s: &str, n: usize) -> Result<PauliOp, PauliError> {
        let err = || PauliError::Parse(s.to_string());
        let mut rest = s.trim();
        let mut k = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            k = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            k = (k + 1) % 4;
            rest = r;
        }
        let mut x = BitVector::zeros(n);
        let mut z = BitVector::zeros(n);
        if rest != "I" {
            let chars: Vec<char> = rest.chars().collect();
            let mut i = 0;
            if chars.is_empty() {
                return Err(err());
            }
            while i < chars.len() {
                let letter = chars[i];
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let idx: usize = chars[start..i].iter().collect::<String>().parse().map_err(|_| err())?;
                if idx == 0 || idx > n || x.get(idx - 1) || z.get(idx - 1) {
                    return Err(err());
                }
                let q = idx - 1;
                match letter {
                    'X' => x.set(q, true),
                    'Z' => z.set(q, true),
                    'Y' => {
                        x.set(q, true);
                        z.set(q, true);
                    }
                    _ => return Err(err()),
                }
            }
        }
        let tau = (x.and_count(&z) % 4) as u8;
        Ok(PauliOp { x, z, phase_exp: (tau + k) % 4 })
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.letter_phase() as usize];
        f.write_str(prefix)?;
        let mut any = false;
        for q in 0..self.num_qubits() {
            if let Some(a) = self.axis_at(q) {
                any = true;
                let c = match a {
                    Axis::X => 'X',
                    Axis::Y => 'Y',
                    Axis::Z => 'Z',
                };
                write!(f, "{c}{}", q + 1)?;
            }
        }
        if !any {
            f.write_str("I")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PauliJson {
    x: String,
    z: String,
    phase_exp: u8,
}

impl Serialize for PauliOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PauliJson { x: self.x.to_bit_string(), z: self.z.to_bit_string(), phase_exp: self.phase_exp }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PauliOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PauliJson::deserialize(d)?;
        let x = BitVector::parse(&j.x).map_err(serde::de::Error::custom)?;
        let z = BitVector::parse(&j.z).map_err(serde::de::Error::custom)?;
        if j.phase_exp > 3 {
            return Err(serde::de::Error::custom("phase_exp must be in 0..4"));
        }
        PauliOp::new(x, z, j.phase_exp).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> PauliOp {
        PauliOp::parse(s, n).unwrap()
    }

    #[test]
    fn zx_picks_up_minus_sign() {
        let z = p("+Z1", 1);
        let x = p("+X1", 1);
        let zx = z.multiply(&x).unwrap();
        assert_eq!(zx.phase_exp, 2);
        assert!(zx.x.get(0) && zx.z.get(0));
        assert_eq!(x.multiply(&z).unwrap().phase_exp, 0);
    }

    #[test]
    fn y_is_i_x_z() {
        let y = PauliOp::single(1, 0, Axis::Y);
        assert_eq!(y.to_string(), "+Y1");
        assert!(y.is_hermitian());
        let xz = p("+X1", 1).multiply(&p("+Z1", 1)).unwrap();
        assert_eq!(xz.to_string(), "-iY1");
    }

    #[test]
    fn display_round_trips() {
        for s in ["+Z1Z2", "-X1Y3", "+iY2", "-iX1Z2Y3", "+I"] {
            assert_eq!(p(s, 3).to_string(), s);
        }
    }

    #[test]
    fn hermiticity_rule() {
        let mut q = p("+Y1", 1);
        assert!(q.is_hermitian());
        q.phase_exp = 0;
        assert!(!q.is_hermitian());
    }

    #[test]
    fn conjugation_rules() {
        let mut q = p("+Y1", 1);
        q.conj_h(0);
        assert_eq!(q.to_string(), "-Y1");
        let mut q = p("+X1", 1);
        q.conj_p(0);
        assert_eq!(q.to_string(), "+Y1");
        let mut q = p("+Y1", 1);
        q.conj_p(0);
        assert_eq!(q.to_string(), "-X1");
        let mut q = p("+X1", 2);
        q.conj_cnot(0, 1);
        assert_eq!(q.to_string(), "+X1X2");
        let mut q = p("+Z2", 2);
        q.conj_cnot(0, 1);
        assert_eq!(q.to_string(), "+Z1Z2");
        let mut q = p("+Y1Y2", 2);
        q.conj_cnot(0, 1);
        assert_eq!(q.to_string(), "-X1Z2");
        let mut q = p("+Y1", 1);
        q.conj_x(0);
        assert_eq!(q.to_string(), "-Y1");
    }

    #[test]
    fn json_shape() {
        let q = p("+Y1Z2", 2);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"x":"10","z":"11","phase_exp":1}"#);
        let back: PauliOp = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
