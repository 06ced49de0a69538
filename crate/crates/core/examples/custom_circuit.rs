//! Reads a circuit in the line-oriented text format, validates it, checks
//! it on the tableau, and simulates it under a noise model from TOML.
//!
//! `cargo run --example custom_circuit [circuit.txt] [noise.toml]`
//!
//! With no arguments two parallel entanglement swaps are used.

use mqnc::circuit::{validate, Circuit};
use mqnc::engine::{run_datapoint, TerminationRule};
use mqnc::noise::NoiseModel;
use mqnc::tableau::verify_protocol;

const SWAP: &str = "\
# two independent swaps, each joining two Bell pairs
qubits 8
resource 0 1 bell
resource 2 3 bell
resource 4 5 bell
resource 6 7 bell
output 0 3 bell
output 4 7 bell
PREP X 0; PREP Z 1; PREP X 2; PREP Z 3; PREP X 4; PREP Z 5; PREP X 6; PREP Z 7
BELL 0 1; BELL 2 3; BELL 4 5; BELL 6 7
CNOT 1 2; CNOT 5 6
H 1; H 5
MZZ 1 2 -> t1 t2; MZZ 5 6 -> t5 t6
BP X 3 if t2; BP X 7 if t6
BP Z 3 if t1; BP Z 7 if t5
";

const NOISE: &str = "\
p_init = 0.02
init_bias = \"uniform_observable\"
p_gate1 = 0.005
p_gate2 = 0.005
p_meas = 0.005
p_mem = 0.005
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let circuit: Circuit = match args.first() {
        Some(path) => std::fs::read_to_string(path)?.parse()?,
        None => SWAP.parse()?,
    };
    let model = match args.get(1) {
        Some(path) => NoiseModel::from_file(path.as_ref())?,
        None => NoiseModel::from_toml_str(NOISE)?,
    };

    let problems = validate(&circuit);
    if !problems.is_empty() {
        for p in &problems {
            eprintln!("invalid: {p:?}");
        }
        std::process::exit(1);
    }
    print!("{circuit}");

    let report = verify_protocol(&circuit);
    println!(
        "\ntableau: {} branches, {}",
        report.branches,
        if report.passed() { "correct" } else { "FAILED" }
    );

    let point = run_datapoint(
        &circuit,
        &model,
        &TerminationRule {
            max_errors: 5_000,
            max_trials: 200_000,
        },
        0,
    );
    println!(
        "noisy fidelity {:.4} [{:.4}, {:.4}] over {} trials",
        point.fidelity, point.ci_low, point.ci_high, point.trials
    );
    Ok(())
}
