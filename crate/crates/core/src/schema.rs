//! JSON forms of schedules and stage sequences. Qubit indices and
//! permutations are 1-based; matrices are lists of row bit strings.

use serde::{Deserialize, Serialize};

use crate::bruhat::{Stage, StageForm};
use crate::compiler::{Inventory, MeasurementRound, Schedule, SCHEMA_VERSION};
use crate::error::Error;
use crate::gadget::AncillaSpec;
use crate::gf2::{BinMatrix, BitVector, Permutation};
use crate::gsf::AuxBasis;
use crate::pauli::PauliOp;
use crate::symplectic::{is_symplectic, SymplecticMatrix};
use crate::tableau::CliffordMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum StageJson {
    C { u: Vec<String>, conj: Vec<usize> },
    P { qubits: Vec<usize> },
    H { qubits: Vec<usize> },
}

fn ones_1based(b: &BitVector) -> Vec<usize> {
    b.iter_ones().map(|q| q + 1).collect()
}

fn subset_from_1based(n: usize, qs: &[usize]) -> Result<BitVector, Error> {
    let mut b = BitVector::zeros(n);
    for &q in qs {
        if q == 0 || q > n {
            return Err(Error::Schema(format!("qubit {q} out of range 1..={n}")));
        }
        b.set(q - 1, true);
    }
    Ok(b)
}

impl StageJson {
    pub fn from_stage(s: &Stage) -> StageJson {
        match s {
            Stage::C { u, conj } => StageJson::C { u: u.to_row_strings(), conj: conj.to_one_based() },
            Stage::P { qubits } => StageJson::P { qubits: ones_1based(qubits) },
            Stage::H { qubits } => StageJson::H { qubits: ones_1based(qubits) },
        }
    }

    pub fn to_stage(&self, n: usize) -> Result<Stage, Error> {
        Ok(match self {
            StageJson::C { u, conj } => {
                let u = BinMatrix::parse_rows(u)?;
                if u.nrows() != n || u.ncols() != n || !u.is_upper_unitriangular() {
                    return Err(Error::Schema("C stage needs an upper unitriangular n×n matrix".into()));
                }
                Stage::C { u, conj: Permutation::from_one_based(conj)? }
            }
            StageJson::P { qubits } => Stage::P { qubits: subset_from_1based(n, qubits)? },
            StageJson::H { qubits } => Stage::H { qubits: subset_from_1based(n, qubits)? },
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundJson {
    pub stage_tag: String,
    pub step: usize,
    pub operators: Vec<PauliOp>,
    pub ancilla: Option<AncillaSpec>,
    /// Half-open range `[start, end)` into the outcome list.
    pub outcome_slot: [usize; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TargetJson {
    pub matrix: Vec<String>,
    /// Bit `i` set when the image of `X_{i+1}` carries a minus sign.
    pub neg_x: String,
    pub neg_z: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScheduleJson {
    pub schema_version: u32,
    pub n: usize,
    pub stage_form: u8,
    pub aux_init: AuxBasis,
    pub aux_final: AuxBasis,
    pub rounds: Vec<RoundJson>,
    pub stages: Vec<StageJson>,
    pub final_perm: Vec<usize>,
    pub output_qubits: Vec<usize>,
    pub inventory: Inventory,
    pub target: TargetJson,
}

impl From<&Schedule> for ScheduleJson {
    fn from(s: &Schedule) -> Self {
        let (nx, nz) = s.target.sign_bits();
        ScheduleJson {
            schema_version: SCHEMA_VERSION,
            n: s.n,
            stage_form: match s.form {
                StageForm::Nine => 9,
                StageForm::Eleven => 11,
            },
            aux_init: s.aux_init,
            aux_final: s.aux_final,
            rounds: s
                .rounds
                .iter()
                .map(|r| RoundJson {
                    stage_tag: r.stage_tag.clone(),
                    step: r.step,
                    operators: r.operators.clone(),
                    ancilla: r.ancilla.clone(),
                    outcome_slot: [r.outcome_slot.0, r.outcome_slot.1],
                })
                .collect(),
            stages: s.stages.iter().map(StageJson::from_stage).collect(),
            final_perm: s.final_perm.to_one_based(),
            output_qubits: s.output_qubits.iter().map(|q| q + 1).collect(),
            inventory: s.inventory,
            target: TargetJson {
                matrix: s.target.to_symplectic().as_matrix().to_row_strings(),
                neg_x: nx.to_bit_string(),
                neg_z: nz.to_bit_string(),
            },
        }
    }
}

impl TryFrom<ScheduleJson> for Schedule {
    type Error = Error;

    fn try_from(j: ScheduleJson) -> Result<Self, Error> {
        if j.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                j.schema_version
            )));
        }
        let n = j.n;
        if n == 0 {
            return Err(Error::Schema("n must be positive".into()));
        }
        let form = match j.stage_form {
            9 => StageForm::Nine,
            11 => StageForm::Eleven,
            f => return Err(Error::Schema(format!("unknown stage form {f}"))),
        };
        let m = BinMatrix::parse_rows(&j.target.matrix)?;
        if m.nrows() != 2 * n || m.ncols() != 2 * n || !is_symplectic(&m) {
            return Err(Error::Schema("target matrix must be a 2n×2n symplectic matrix".into()));
        }
        let (nx, nz) = (BitVector::parse(&j.target.neg_x)?, BitVector::parse(&j.target.neg_z)?);
        if nx.len() != n || nz.len() != n {
            return Err(Error::Schema("sign strings must have n bits".into()));
        }
        let target = CliffordMap::from_symplectic(&SymplecticMatrix::new_unchecked(m), &nx, &nz);
        let mut rounds = Vec::with_capacity(j.rounds.len());
        let mut slot = 0;
        for r in j.rounds {
            if r.outcome_slot != [slot, slot + r.operators.len()] {
                return Err(Error::Schema(format!("{}.{}: outcome slot out of sequence", r.stage_tag, r.step)));
            }
            if let Some(op) = r.operators.iter().find(|p| p.num_qubits() != 2 * n || !p.is_hermitian()) {
                return Err(Error::Schema(format!("{}.{}: bad operator {op}", r.stage_tag, r.step)));
            }
            slot += r.operators.len();
            rounds.push(MeasurementRound {
                stage_tag: r.stage_tag,
                step: r.step,
                operators: r.operators,
                ancilla: r.ancilla,
                outcome_slot: (r.outcome_slot[0], r.outcome_slot[1]),
            });
        }
        let output_qubits: Vec<usize> = j
            .output_qubits
            .iter()
            .map(|&q| if q == 0 || q > 2 * n { Err(Error::Schema(format!("output qubit {q} out of range"))) } else { Ok(q - 1) })
            .collect::<Result<_, _>>()?;
        if output_qubits.len() != n {
            return Err(Error::Schema("output_qubits must list n positions".into()));
        }
        let stages = j.stages.iter().map(|s| s.to_stage(n)).collect::<Result<_, _>>()?;
        Ok(Schedule {
            n,
            form,
            aux_init: j.aux_init,
            rounds,
            stages,
            final_perm: Permutation::from_one_based(&j.final_perm)?,
            output_qubits,
            aux_final: j.aux_final,
            inventory: j.inventory,
            target,
        })
    }
}

impl Schedule {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ScheduleJson::from(self)).expect("schedule serializes")
    }

    pub fn from_json(text: &str) -> Result<Schedule, Error> {
        let j: ScheduleJson = serde_json::from_str(text)?;
        Schedule::try_from(j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{compile_circuit, CompileOptions};
    use crate::symplectic::CliffordGate;

    #[test]
    fn schedule_round_trips() {
        let gates = [CliffordGate::H(0), CliffordGate::Cnot(0, 1), CliffordGate::X(1)];
        let s = compile_circuit(&gates, 2, CompileOptions::default()).unwrap();
        let text = s.to_json();
        assert!(text.contains("\"4n\": 5"));
        let back = Schedule::from_json(&text).unwrap();
        assert_eq!(back, s);
    }
}
