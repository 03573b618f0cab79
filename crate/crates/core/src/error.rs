use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular: row {row} depends on earlier rows")]
    Singular { row: usize },
    #[error("bad bit string: {0}")]
    BadBitString(String),
    #[error("not a permutation: {0}")]
    BadPermutation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("length mismatch: {0} vs {1} qubits")]
    LengthMismatch(usize, usize),
    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("cannot parse Pauli operator {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("rows {0} and {1} anticommute")]
    NotCommuting(usize, usize),
    #[error("rows are linearly dependent")]
    Dependent,
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("forced outcome {forced} contradicts deterministic outcome of {op}")]
    ForcedOutcomeImpossible { op: String, forced: i8 },
    #[error("generators {0} and {1} anticommute")]
    NotCommuting(usize, usize),
    #[error("generators are dependent")]
    DependentGenerators,
    #[error("expected {expected} generators, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("qubit {0} is not in a product state with the rest")]
    NotProduct(usize),
    #[error("no local-Clifford layer makes the ancilla CSS")]
    NoCssWitness,
    #[error("measured operators must commute pairwise; {0} and {1} do not")]
    MeasuredNotCommuting(usize, usize),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Violations of the measurement-update preconditions for a generator form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GsfError {
    #[error("condition 1: measured operators do not commute pairwise")]
    Cond1SelfOrthogonal,
    #[error("condition 2: measured operators are not symplectic partners of the stabilizer rows")]
    Cond2Partner,
    #[error("condition 3: logical X rows do not commute with the measured operators")]
    Cond3LogicalX,
    #[error("condition 4: logical Z rows do not commute with the measured operators")]
    Cond4LogicalZ,
    #[error("measured operators act on {got} qubits, generator form has {expected}")]
    Width { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("input matrix is not symplectic")]
    NotSymplectic,
    #[error("reconstruction mismatch after decomposition")]
    ReconstructionMismatch,
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("round {round} ({tag}): {source}")]
    Round { round: usize, tag: String, source: GsfError },
    #[error("round {round} ({tag}): measured set has rank {rank}, expected {expected}")]
    Rank { round: usize, tag: String, rank: usize, expected: usize },
    #[error("final generator form does not match the target matrix: {0}")]
    SymbolicMismatch(String),
    #[error("schedule is malformed: {0}")]
    Malformed(String),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Gsf(#[from] GsfError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
