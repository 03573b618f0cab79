use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use cliffmeas::compiler::symbolic_check;
use cliffmeas::verify::{direct_output, run_trials, simulate, Verdict};
use cliffmeas::{compile_circuit, Circuit, CompileOptions, Schedule, StageForm, Tableau, SCHEMA_VERSION};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "cliffmeas", about = "Compile Clifford circuits into Pauli-measurement schedules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a circuit file into a schedule (JSON).
    Compile {
        #[arg(short, long)]
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Drop rounds that measure nothing.
        #[arg(long)]
        prune: bool,
        #[arg(long, default_value = "9", value_parser = ["9", "11"])]
        stage_form: String,
    },
    /// Compile a circuit and check it against direct application on random inputs.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a schedule on a named input state.
    Simulate {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = InputState::AllZero)]
        state: InputState,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Round count, ancilla inventory and operator weights of a schedule.
    Stats {
        #[arg(short, long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum InputState {
    AllZero,
    AllPlus,
}

enum Failure {
    Input(String),
    Verification(String),
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    Circuit::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_schedule(path: &Path) -> Result<Schedule, Failure> {
    Schedule::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn compile(c: &Circuit, opts: CompileOptions) -> Result<Schedule, Failure> {
    let s = compile_circuit(&c.gates, c.n, opts).map_err(|e| Failure::Verification(e.to_string()))?;
    symbolic_check(&s).map_err(|e| Failure::Verification(e.to_string()))?;
    Ok(s)
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Compile { input, output, prune, stage_form } => {
            let form = if stage_form == "11" { StageForm::Eleven } else { StageForm::Nine };
            let s = compile(&load_circuit(&input)?, CompileOptions { form, prune })?;
            let text = s.to_json();
            match output {
                Some(p) => fs::write(&p, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
                None => emit(&(text + "\n")),
            }
        }
        Command::Verify { input, trials, seed } => {
            let s = compile(&load_circuit(&input)?, CompileOptions::default())?;
            let reports = run_trials(&s, seed, trials);
            let mut lines = String::new();
            for r in &reports {
                let _ = writeln!(lines, "{}", serde_json::to_string(r).expect("report serializes"));
            }
            emit(&lines);
            let failed = reports.iter().filter(|r| r.verdict == Verdict::Fail).count();
            if failed > 0 {
                return Err(Failure::Verification(format!("{failed} of {trials} trials failed")));
            }
        }
        Command::Simulate { input, state, seed } => {
            let s = load_schedule(&input)?;
            let t = match state {
                InputState::AllZero => Tableau::zero_state(s.n),
                InputState::AllPlus => Tableau::plus_state(s.n),
            };
            let (run, out, w) = simulate(&s, &t, seed).map_err(|e| Failure::Verification(e.to_string()))?;
            let got = out.canonical_form();
            let want = direct_output(&s.target, &t);
            let text = |v: &[cliffmeas::PauliOp]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
            let report = json!({
                "seed": seed,
                "n": s.n,
                "rounds_executed": run.rounds_executed,
                "outcomes": run.outcomes,
                "correction": w.to_string(),
                "output_stabilizers": text(&got),
                "expected_stabilizers": text(&want),
                "match": got == want,
            });
            emit(&(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"));
            if got != want {
                return Err(Failure::Verification("output differs from direct application".into()));
            }
        }
        Command::Stats { input } => {
            let s = load_schedule(&input)?;
            let mut out = String::new();
            let _ = writeln!(out, "qubits            {}", s.n);
            let _ = writeln!(out, "stage form        {}", s.form.pattern());
            let _ = writeln!(out, "rounds            {}", s.rounds.len());
            let _ = writeln!(out, "4n ancillas       {}", s.inventory.four_n);
            let _ = writeln!(out, "2n ancillas       {}", s.inventory.two_n);
            let _ = writeln!(out, "measured ops      {}", s.num_outcomes());
            let _ = writeln!(out, "{:<8} {:>5} {:>9} {:>10} {:>10}", "round", "ops", "ancilla", "max wt", "mean wt");
            for r in &s.rounds {
                let w: Vec<usize> = r.operators.iter().map(|p| p.weight()).collect();
                let max = w.iter().max().copied().unwrap_or(0);
                let mean = if w.is_empty() { 0.0 } else { w.iter().sum::<usize>() as f64 / w.len() as f64 };
                let anc = r.ancilla.as_ref().map_or("-".to_string(), |a| a.n_qubits.to_string());
                let _ = writeln!(out, "{:<8} {:>5} {:>9} {:>10} {:>10.2}", r.tag(), w.len(), anc, max, mean);
            }
            emit(&out);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let version = format!("{} (schedule schema {SCHEMA_VERSION})", env!("CARGO_PKG_VERSION"));
    let matches = Cli::command().version(version).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
