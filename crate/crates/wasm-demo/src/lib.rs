//! Browser bindings: compile a circuit, show its stage decomposition, and
//! verify the compiled schedule on random inputs. Each call takes circuit
//! text and returns JSON.

use cliffmeas::bruhat::decompose;
use cliffmeas::compiler::symbolic_check;
use cliffmeas::schema::StageJson;
use cliffmeas::symplectic::circuit_to_symplectic;
use cliffmeas::verify::{run_trials, Verdict};
use cliffmeas::{compile_circuit, Circuit, CompileOptions, StageForm};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn form(stage_form: u8) -> Result<StageForm, String> {
    match stage_form {
        9 => Ok(StageForm::Nine),
        11 => Ok(StageForm::Eleven),
        f => Err(format!("unknown stage form {f}")),
    }
}

fn parse(text: &str) -> Result<Circuit, String> {
    Circuit::parse(text).map_err(|e| e.to_string())
}

pub fn compile_json(text: &str, stage_form: u8, prune: bool) -> Result<String, String> {
    let c = parse(text)?;
    let s = compile_circuit(&c.gates, c.n, CompileOptions { form: form(stage_form)?, prune }).map_err(|e| e.to_string())?;
    symbolic_check(&s).map_err(|e| e.to_string())?;
    Ok(s.to_json())
}

pub fn decompose_json(text: &str, stage_form: u8) -> Result<String, String> {
    let c = parse(text)?;
    let m = circuit_to_symplectic(&c.gates, c.n).map_err(|e| e.to_string())?;
    let seq = decompose(&m, form(stage_form)?).map_err(|e| e.to_string())?;
    let stages: Vec<StageJson> = seq.stages.iter().map(StageJson::from_stage).collect();
    Ok(json!({
        "n": c.n,
        "matrix": m.as_matrix().to_row_strings(),
        "pattern": seq.pattern(),
        "stages": stages,
        "final_perm": seq.final_perm.to_one_based(),
    })
    .to_string())
}

pub fn verify_json(text: &str, trials: usize, seed: u64) -> Result<String, String> {
    let c = parse(text)?;
    let s = compile_circuit(&c.gates, c.n, CompileOptions::default()).map_err(|e| e.to_string())?;
    let reports = run_trials(&s, seed, trials);
    let passed = reports.iter().filter(|r| r.verdict == Verdict::Pass).count();
    Ok(json!({
        "n": c.n,
        "rounds": s.rounds.len(),
        "inventory": s.inventory,
        "trials": trials,
        "passed": passed,
        "reports": reports,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn compile(text: &str, stage_form: u8, prune: bool) -> Result<String, JsError> {
    compile_json(text, stage_form, prune).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = decompose)]
pub fn decompose_circuit(text: &str, stage_form: u8) -> Result<String, JsError> {
    decompose_json(text, stage_form).map_err(|e| JsError::new(&e))
}

/// `seed` is a JS number; integers up to 2^53 survive the conversion.
#[wasm_bindgen]
pub fn verify(text: &str, trials: u32, seed: f64) -> Result<String, JsError> {
    verify_json(text, trials as usize, seed as u64).map_err(|e| JsError::new(&e))
}
