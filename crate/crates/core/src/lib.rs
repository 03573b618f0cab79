//! Compilation of Clifford circuits into constant-depth schedules of
//! simultaneous Pauli measurements, with an exact stabilizer simulator to
//! check the schedules.
//!
//! A symplectic matrix is split into CNOT, phase and Hadamard stages
//! ([`bruhat`]); each stage becomes two or three measurement rounds on the
//! data qubits plus `n` auxiliary qubits ([`compiler`]). Rounds that need an
//! entangled ancilla state carry its generators ([`gadget`]).

pub mod bruhat;
pub mod circuit;
pub mod compiler;
pub mod error;
pub mod gadget;
pub mod gf2;
pub mod gsf;
pub mod pauli;
pub mod schema;
pub mod symplectic;
pub mod tableau;
pub mod verify;

pub use bruhat::{bruhat_decompose, Stage, StageForm, StageSequence};
pub use circuit::Circuit;
pub use compiler::{compile, compile_circuit, CompileOptions, Schedule, SCHEMA_VERSION};
pub use error::Error;
pub use gf2::{BinMatrix, BitVector, Permutation};
pub use pauli::PauliOp;
pub use symplectic::{CliffordGate, SymplecticMatrix};
pub use tableau::{CliffordMap, Tableau};
