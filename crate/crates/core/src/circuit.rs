//! Plain-text circuit files.
//!
//! ```text
//! qubits 3
//! # comment
//! H 1
//! CNOT 1 2
//! ```
//!
//! Gates are `H j`, `P j`, `CNOT j l`, `X j`, `Z j` with 1-based qubits.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::ParseError;
use crate::symplectic::{random_gate_word, CliffordGate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<CliffordGate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<CliffordGate>) -> Circuit {
        Circuit { n, gates }
    }

    pub fn parse(text: &str) -> Result<Circuit, ParseError> {
        let mut n = None;
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            let err = |message: String| ParseError { line, message };
            let Some(count) = n else {
                if toks.len() != 2 || !toks[0].eq_ignore_ascii_case("qubits") {
                    return Err(err("expected header `qubits N`".into()));
                }
                let v: usize = toks[1].parse().map_err(|_| err(format!("bad qubit count {:?}", toks[1])))?;
                if v == 0 {
                    return Err(err("qubit count must be positive".into()));
                }
                n = Some(v);
                continue;
            };
            let idx = |s: &str| -> Result<usize, ParseError> {
                let v: usize = s.parse().map_err(|_| err(format!("bad qubit index {s:?}")))?;
                if v == 0 || v > count {
                    return Err(err(format!("qubit {v} out of range 1..={count}")));
                }
                Ok(v - 1)
            };
            let name = toks[0].to_ascii_uppercase();
            let arity = if name == "CNOT" { 2 } else { 1 };
            if toks.len() != arity + 1 {
                return Err(err(format!("{name} takes {arity} qubit index(es)")));
            }
            let g = match name.as_str() {
                "H" => CliffordGate::H(idx(toks[1])?),
                "P" => CliffordGate::P(idx(toks[1])?),
                "X" => CliffordGate::X(idx(toks[1])?),
                "Z" => CliffordGate::Z(idx(toks[1])?),
                "CNOT" => {
                    let (c, t) = (idx(toks[1])?, idx(toks[2])?);
                    if c == t {
                        return Err(err("CNOT control and target must differ".into()));
                    }
                    CliffordGate::Cnot(c, t)
                }
                _ => return Err(err(format!("unknown gate {:?}", toks[0]))),
            };
            gates.push(g);
        }
        let n = n.ok_or(ParseError { line: 0, message: "missing `qubits N` header".into() })?;
        Ok(Circuit { n, gates })
    }

    /// Random word of H, P and CNOT gates.
    pub fn random<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> Circuit {
        Circuit { n, gates: random_gate_word(n, len, rng) }
    }
}

impl FromStr for Circuit {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Circuit::parse(s)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n)?;
        for g in &self.gates {
            match *g {
                CliffordGate::H(q) => writeln!(f, "H {}", q + 1)?,
                CliffordGate::P(q) => writeln!(f, "P {}", q + 1)?,
                CliffordGate::X(q) => writeln!(f, "X {}", q + 1)?,
                CliffordGate::Z(q) => writeln!(f, "Z {}", q + 1)?,
                CliffordGate::Cnot(c, t) => writeln!(f, "CNOT {} {}", c + 1, t + 1)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let c = Circuit::parse("qubits 2\nH 1\nCNOT 1 2").unwrap();
        assert_eq!(c.gates, [CliffordGate::H(0), CliffordGate::Cnot(0, 1)]);
        assert_eq!(Circuit::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn reports_line_numbers() {
        assert_eq!(Circuit::parse("qubits 2\nCNOT 1 1").unwrap_err().line, 2);
        assert_eq!(Circuit::parse("qubits 2\n\nH 3").unwrap_err().line, 3);
        assert!(Circuit::parse("# nothing\nH 1").is_err());
        assert!(Circuit::parse("").is_err());
    }
}
