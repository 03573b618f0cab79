#![allow(dead_code)]
//! Dense state-vector oracle for a handful of qubits. Qubit `q` is bit `q`
//! of the basis index.

use cliffmeas::{CliffordGate, PauliOp};
use num_complex::Complex64;

pub const EPS: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub amp: Vec<Complex64>,
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn mask(v: &cliffmeas::BitVector) -> usize {
    v.iter_ones().fold(0, |m, q| m | (1 << q))
}

impl Dense {
    pub fn zero(n: usize) -> Dense {
        let mut amp = vec![Complex64::new(0.0, 0.0); 1 << n];
        amp[0] = Complex64::new(1.0, 0.0);
        Dense { n, amp }
    }

    pub fn apply_gate(&mut self, g: CliffordGate) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match g {
            CliffordGate::H(q) => {
                let b = 1 << q;
                for k in 0..self.amp.len() {
                    if k & b == 0 {
                        let (a0, a1) = (self.amp[k], self.amp[k | b]);
                        self.amp[k] = (a0 + a1) * s;
                        self.amp[k | b] = (a0 - a1) * s;
                    }
                }
            }
            CliffordGate::P(q) => {
                for (k, a) in self.amp.iter_mut().enumerate() {
                    if k >> q & 1 == 1 {
                        *a *= i_pow(1);
                    }
                }
            }
            CliffordGate::Cnot(c, t) => {
                for k in 0..self.amp.len() {
                    if k >> c & 1 == 1 && k >> t & 1 == 0 {
                        self.amp.swap(k, k | 1 << t);
                    }
                }
            }
            CliffordGate::X(q) => {
                let b = 1 << q;
                for k in 0..self.amp.len() {
                    if k & b == 0 {
                        self.amp.swap(k, k | b);
                    }
                }
            }
            CliffordGate::Z(q) => {
                for (k, a) in self.amp.iter_mut().enumerate() {
                    if k >> q & 1 == 1 {
                        *a = -*a;
                    }
                }
            }
        }
    }

    /// `p |ψ⟩` for `p = i^l X^a Z^b`.
    pub fn apply_pauli(&self, p: &PauliOp) -> Dense {
        let (a, b) = (mask(&p.x), mask(&p.z));
        let c = i_pow(p.phase_exp);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amp.len()];
        for (k, amp) in self.amp.iter().enumerate() {
            let sign = if (b & k).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[k ^ a] += c * sign * amp;
        }
        Dense { n: self.n, amp: out }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Projects onto the `outcome` eigenspace of Hermitian `p` and
    /// renormalizes; returns the probability.
    pub fn project(&mut self, p: &PauliOp, outcome: i8) -> f64 {
        let pp = self.apply_pauli(p);
        for (a, b) in self.amp.iter_mut().zip(&pp.amp) {
            *a = (*a + *b * outcome as f64) * 0.5;
        }
        let prob = self.norm_sqr();
        if prob > EPS {
            let s = prob.sqrt();
            self.amp.iter_mut().for_each(|a| *a /= s);
        }
        prob
    }

    pub fn is_stabilized_by(&self, p: &PauliOp) -> bool {
        let pp = self.apply_pauli(p);
        pp.amp.iter().zip(&self.amp).all(|(a, b)| (a - b).norm() < 1e-7)
    }

    pub fn approx_eq(&self, other: &Dense) -> bool {
        self.amp.iter().zip(&other.amp).all(|(a, b)| (a - b).norm() < 1e-7)
    }
}

/// Dense matrix of `p` as a `2^n × 2^n` row-major array.
pub fn dense_matrix(p: &PauliOp) -> Vec<Vec<Complex64>> {
    let n = p.num_qubits();
    let dim = 1 << n;
    (0..dim)
        .map(|row| {
            (0..dim)
                .map(|col| {
                    let mut e = Dense::zero(n);
                    e.amp[0] = Complex64::new(0.0, 0.0);
                    e.amp[col] = Complex64::new(1.0, 0.0);
                    e.apply_pauli(p).amp[row]
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn mat_eq(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).norm() < EPS)
}

/// Every Pauli on `n` qubits in `+` Hermitian letter form.
pub fn all_hermitian(n: usize) -> Vec<PauliOp> {
    let mut out = Vec::new();
    for code in 0..(1usize << (2 * n)) {
        let bits = |off: usize| cliffmeas::BitVector::from_bools(&(0..n).map(|q| code >> (off + q) & 1 == 1).collect::<Vec<_>>());
        out.push(PauliOp::hermitian(bits(0), bits(n)));
    }
    out
}
