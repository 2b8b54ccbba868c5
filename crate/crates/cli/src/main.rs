use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use chainqc::algorithms::{self, AlgorithmResult};
use chainqc::model::{
    BlockLayout, BooleanOracleSpec, ChainState, DeviationState, LogicalCircuit, PauliAxis, PauliString,
    SiteReadout, MAX_DEVIATION_SPINS,
};
use chainqc::verify::{self, VerifyOptions};
use chainqc::{compiler, protocol, simulator, Error};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CONSISTENCY: u8 = 3;
const EXIT_CAPACITY: u8 = 4;

/// Largest cross-check deviation accepted by `deutsch` and `dj`.
const CONSISTENCY_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "chainqc", version, about = "Global-control quantum computing on Ising spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    X,
    Y,
    Z,
}

impl From<Axis> for PauliAxis {
    fn from(a: Axis) -> Self {
        match a {
            Axis::X => PauliAxis::X,
            Axis::Y => PauliAxis::Y,
            Axis::Z => PauliAxis::Z,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated mirror cycles and report per-site readouts.
    Mirror {
        #[arg(long, default_value_t = 3)]
        spins: usize,
        #[arg(long, default_value_t = 3)]
        cycles: usize,
        /// Per-primitive dephasing probability.
        #[arg(long = "noise", default_value_t = 0.0)]
        epsilon: f64,
        /// Pauli terms ("z@1,-x@2,x@3") or a ket ("0+0").
        #[arg(long, default_value = "z@1,-x@2,x@3")]
        init: String,
        #[arg(long, value_enum, default_value_t = Axis::X)]
        readout_axis: Axis,
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Include the SWAP-network baseline (JSON only).
        #[arg(long)]
        baseline: bool,
    },
    /// Deutsch's algorithm on the three-spin buffered layout.
    Deutsch {
        /// f00, f01, f10 or f11.
        function: String,
    },
    /// Deutsch-Jozsa on a single three-spin block.
    Dj {
        /// Four-bit truth table such as f0011.
        function: String,
    },
    /// Compile a logical circuit (JSON) to a pulse sequence with a cost report.
    Compile {
        circuit: PathBuf,
        #[arg(long = "block-size", short = 'm')]
        block_size: usize,
        /// Fix the number of blocks instead of fitting the circuit.
        #[arg(long)]
        blocks: Option<usize>,
    },
    /// Run the oracle property suite.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_spins: usize,
        /// Check against a deliberately wrong constant.
        #[arg(long)]
        corrupt: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapacityExceeded { .. } => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

type CmdResult = Result<String, Failure>;

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn initial_state(spins: usize, init: &str, polarization: f64) -> Result<DeviationState, Error> {
    let is_ket = !init.is_empty() && init.chars().all(|c| matches!(c, '0' | '1' | '+' | '-' | '\u{2212}'));
    if is_ket {
        let psi = ChainState::basis(spins, init)?;
        DeviationState::pseudo_pure(&psi, polarization)
    } else {
        DeviationState::from_terms(spins, &PauliString::parse_list(init)?, polarization)
    }
}

fn readout_row(r: &SiteReadout) -> serde_json::Value {
    json!({ "site": r.site, "sx": r.sx, "sy": r.sy, "sz": r.sz, "label": r.label.as_str() })
}

#[allow(clippy::too_many_arguments)]
fn cmd_mirror(
    spins: usize,
    cycles: usize,
    epsilon: f64,
    init: &str,
    axis: PauliAxis,
    threshold: f64,
    format: Format,
    baseline: bool,
) -> CmdResult {
    if !(2..=MAX_DEVIATION_SPINS).contains(&spins) {
        return Err(Failure::usage(format!("spins must be in 2..={MAX_DEVIATION_SPINS}")));
    }
    if cycles == 0 {
        return Err(Failure::usage("cycles must be at least 1"));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Failure::usage("noise must be in [0, 1]"));
    }
    if baseline && matches!(format, Format::Csv) {
        return Err(Failure::usage("--baseline needs --format json"));
    }
    let seq = protocol::mirror_cycle(spins)?;
    let mut ideal = initial_state(spins, init, 1e-5)?;
    let mut noisy = ideal.clone();
    let mut rows = Vec::with_capacity(cycles + 1);
    for cycle in 0..=cycles {
        if cycle > 0 {
            ideal = simulator::run(&ideal, &seq)?;
            noisy = simulator::run_noisy(&noisy, &seq, epsilon)?;
        }
        let report = simulator::spectrum(&noisy, &[axis], threshold)?;
        let fidelity = noisy.overlap(&ideal) / ideal.overlap(&ideal);
        rows.push((cycle, fidelity, report));
    }
    match format {
        Format::Csv => {
            let mut out = String::from("cycle,site,sx,sy,sz,label\n");
            for (cycle, _, report) in &rows {
                for r in &report.sites {
                    writeln!(out, "{cycle},{},{:.12},{:.12},{:.12},{}", r.site, r.sx, r.sy, r.sz, r.label.as_str())
                        .unwrap();
                }
            }
            Ok(out)
        }
        Format::Json => {
            let layout = BlockLayout::new(spins, 1)?;
            let mut doc = json!({
                "spins": spins,
                "cycles": cycles,
                "epsilon": epsilon,
                "init": init,
                "readout_axis": axis.to_string(),
                "threshold": threshold,
                "steps_per_cycle": seq.len(),
                "cost": compiler::cost(&seq, &layout),
                "results": rows.iter().map(|(cycle, fidelity, report)| json!({
                    "cycle": cycle,
                    "fidelity": fidelity,
                    "max_abs_readout": report.max_abs(),
                    "sites": report.sites.iter().map(readout_row).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            if baseline {
                let b = compiler::swap_network_mirror(spins)?;
                doc["baseline"] = json!({
                    "kind": "swap_network",
                    "cost": compiler::cost(&b, &layout),
                    "global_control_compliant": b.global_control_compliant,
                });
            }
            Ok(to_json(&doc) + "\n")
        }
    }
}

fn parse_function(s: &str, arity: usize) -> Result<BooleanOracleSpec, Failure> {
    let f: BooleanOracleSpec = s.parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
    if f.arity != arity {
        return Err(Failure::usage(format!("expected a function of {arity} bit(s), got {s}")));
    }
    Ok(f)
}

fn algorithm_report(result: &AlgorithmResult) -> CmdResult {
    let deviation = algorithms::cross_check(result)?;
    let mut doc = json!({
        "function": result.function.to_string(),
        "classification": result.classification.as_str(),
        "sites": result.report.sites.iter().map(readout_row).collect::<Vec<_>>(),
        "cross_check_deviation": deviation,
        "sequence_length": result.sequence.len(),
        "global_control_compliant": result.sequence.global_control_compliant,
    });
    if !result.register_probabilities.is_empty() {
        doc["register_probabilities"] = json!(result.register_probabilities);
    }
    let out = to_json(&doc) + "\n";
    if !(deviation <= CONSISTENCY_TOL) {
        return Err(Failure { code: EXIT_CONSISTENCY, message: out });
    }
    Ok(out)
}

fn cmd_compile(path: &PathBuf, m: usize, blocks: Option<usize>) -> CmdResult {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let circuit: LogicalCircuit =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    circuit.validate()?;
    let layout = match blocks {
        Some(b) => BlockLayout::new(m, b)?,
        None => compiler::make_layout(circuit.n_logical, m)?,
    };
    let seq = compiler::compile(&circuit, &layout)?;
    let cost = compiler::cost(&seq, &layout);
    Ok(to_json(&json!({ "layout": layout, "sequence": seq, "cost": cost })) + "\n")
}

fn cmd_verify(max_spins: usize, corrupt: bool) -> CmdResult {
    let summary = verify::run_suite(max_spins, VerifyOptions { corrupt })?;
    let mut out = String::new();
    for r in &summary.results {
        writeln!(out, "{} {} ({})", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail).unwrap();
    }
    writeln!(out, "{} passed, {} failed", summary.passed, summary.failed).unwrap();
    out += &to_json(&summary);
    out.push('\n');
    if !summary.all_passed() {
        return Err(Failure { code: EXIT_VERIFY, message: out });
    }
    Ok(out)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Mirror { spins, cycles, epsilon, init, readout_axis, threshold, format, baseline } => {
            cmd_mirror(spins, cycles, epsilon, &init, readout_axis.into(), threshold, format, baseline)
        }
        Command::Deutsch { function } => algorithm_report(&algorithms::deutsch(&parse_function(&function, 1)?)?),
        Command::Dj { function } => {
            let f = parse_function(&function, 2)?;
            algorithm_report(&algorithms::deutsch_jozsa(&f).map_err(|e| Failure::usage(e.to_string()))?)
        }
        Command::Compile { circuit, block_size, blocks } => cmd_compile(&circuit, block_size, blocks),
        Command::Verify { max_spins, corrupt } => cmd_verify(max_spins, corrupt),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if f.code == EXIT_USAGE || f.code == EXIT_CAPACITY {
                eprintln!("error: {}", f.message);
            } else {
                print!("{}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
