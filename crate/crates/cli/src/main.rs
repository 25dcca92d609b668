//! `qforge`: batch front end for slicing, categorizing, testing and
//! mutating OpenQASM circuits.
//!
//! Exit codes: 0 success, 1 test failure or failed check, 2 usage, parse or
//! runtime error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qforge_core::analysis::{categorize, hslice, slice_file_name, vslice, SliceMode};
use qforge_core::library::{build_subroutine, generate_test_cases, SubroutineSpec};
use qforge_core::qasm::{parse_named, serialize};
use qforge_core::sim::{qsphere, run_zero};
use qforge_core::testkit::{
    inject_bug, is_silent_mutation, load_vectors, random_mutation, run_tests, strip_measurements,
    swap_test, swap_test_exact, vectors_to_json, Mutation, TestConfig, TestMode,
    DEFAULT_SWAP_SHOTS,
};
use qforge_core::{Circuit, GateKind, GateStats};

/// Widest circuit whose unitary `inject` builds to decide silence.
const SILENT_CHECK_MAX_QUBITS: usize = 12;

#[derive(Parser)]
#[command(name = "qforge", version, about = "Debugging and testing tools for quantum circuits")]
struct Cli {
    /// Seed for every stochastic step.
    #[arg(long, global = true, env = "QFORGE_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cut a circuit at its break-barriers and write one file per slice.
    Slice {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Standalone)]
        mode: ModeArg,
        /// Remove idle wires from every slice.
        #[arg(long)]
        strip_idle: bool,
        /// Output directory (defaults to the input file's directory).
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Print the manifest to stdout.
        #[arg(long)]
        json: bool,
    },
    /// Run a test-vector file against a circuit.
    Test {
        file: PathBuf,
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long, value_enum, default_value_t = TestModeArg::Pclass)]
        mode: TestModeArg,
        /// Fidelity tolerance in fquant mode.
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
        /// Sample instead of reading the exact statevector.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Classify a block as AP, PM or AR.
    Categorize {
        file: PathBuf,
        #[arg(long, default_value_t = qforge_core::analysis::DEFAULT_MAX_CATEGORIZE_QUBITS)]
        max_unitary_qubits: usize,
        #[arg(long)]
        json: bool,
    },
    /// List the source positions of a gate kind.
    Locate {
        file: PathBuf,
        #[arg(long)]
        gate: String,
        /// Comma-separated qubits the gate must touch, e.g. `q[0],q[1]`.
        #[arg(long)]
        qubits: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the gate histogram, optionally checked against a reference.
    Counts {
        file: PathBuf,
        /// Reference subroutine: qft:n, ghz:n, w:n, dicke:n,k, adder,
        /// diffusion:n, cluster:n or qpe:c,phase.
        #[arg(long)]
        expect: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Generate six-basis test vectors from a reference subroutine.
    GenTests {
        /// qft, ghz, w, dicke, adder, diffusion, cluster, or a full spec such
        /// as `qpe:3,0.25`.
        kind: String,
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long)]
        hamming: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Swap test between the states prepared by two circuits.
    SwapTest {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SWAP_SHOTS)]
        shots: u64,
        /// Read the ancilla probability from the statevector.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write a copy of a circuit with one deliberate bug.
    Inject {
        file: PathBuf,
        #[arg(long, value_enum)]
        bug: BugArg,
        /// Op index the mutation applies to.
        #[arg(long)]
        index: Option<usize>,
        /// Gate for extra-gate.
        #[arg(long)]
        gate: Option<String>,
        /// Comma-separated qubits for extra-gate and wrong-qubit.
        #[arg(long)]
        qubits: Option<String>,
        /// Comma-separated angles for extra-gate; `pi` expressions allowed.
        #[arg(long, allow_hyphen_values = true)]
        angles: Option<String>,
        /// Insert position for extra-gate (end when omitted).
        #[arg(long)]
        position: Option<usize>,
        /// Angle offset for phase-shift; `pi` expressions allowed.
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Export the Q-sphere of the state prepared from |0…0⟩.
    Qsphere {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Standalone,
    Accumulated,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestModeArg {
    Pclass,
    Fquant,
}

#[derive(Clone, Copy, ValueEnum)]
enum BugArg {
    ExtraGate,
    MissingGate,
    WrongQubit,
    WrongOrder,
    PhaseShift,
    SkipInit,
    Random,
}

#[derive(Serialize)]
struct SliceManifest {
    source: String,
    mode: SliceMode,
    strip_idle: bool,
    cut_positions: Vec<usize>,
    slices: Vec<SliceEntry>,
}

#[derive(Serialize)]
struct SliceEntry {
    file: String,
    ops: usize,
    num_qubits: usize,
    kept_qubits: Vec<usize>,
    removed_qubits: Vec<usize>,
}

#[derive(Serialize)]
struct LocateHit {
    index: usize,
    op: String,
    origin: String,
    line: usize,
    column: usize,
}

#[derive(Serialize)]
struct CountsReport {
    counts: BTreeMap<GateKind, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<BTreeMap<GateKind, usize>>,
    mismatches: Vec<CountMismatch>,
    ok: bool,
}

#[derive(Serialize)]
struct CountMismatch {
    gate: GateKind,
    expected: usize,
    found: usize,
}

#[derive(Serialize)]
struct InjectReport {
    mutation: Mutation,
    output: String,
    /// `None` when the circuit is too wide for a unitary comparison.
    silent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means the command ran but a check failed.
fn run(cli: Cli) -> Result<bool> {
    let seed = cli.seed;
    match cli.command {
        Command::Slice {
            file,
            mode,
            strip_idle,
            out_dir,
            json,
        } => cmd_slice(&file, mode, strip_idle, out_dir, json),
        Command::Test {
            file,
            vectors,
            mode,
            tolerance,
            shots,
            json,
        } => cmd_test(&file, &vectors, mode, tolerance, shots, seed, json),
        Command::Categorize {
            file,
            max_unitary_qubits,
            json,
        } => {
            let circuit = strip_measurements(&load_circuit(&file)?)?;
            let cat = categorize(&circuit, max_unitary_qubits)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&cat)?);
            } else {
                println!("{cat}");
            }
            Ok(true)
        }
        Command::Locate {
            file,
            gate,
            qubits,
            json,
        } => cmd_locate(&file, &gate, qubits.as_deref(), json),
        Command::Counts { file, expect, json } => cmd_counts(&file, expect.as_deref(), json),
        Command::GenTests {
            kind,
            qubits,
            hamming,
            output,
        } => {
            let spec = spec_from_kind(&kind, qubits, hamming)?;
            let set = generate_test_cases(&spec)?;
            write_or_print(output.as_deref(), &vectors_to_json(&set.cases))?;
            if let Some(path) = output {
                eprintln!("wrote {} cases for {spec} to {}", set.cases.len(), path.display());
            }
            Ok(true)
        }
        Command::SwapTest {
            a,
            b,
            shots,
            exact,
            json,
        } => {
            let (prep_a, prep_b) = (load_circuit(&a)?, load_circuit(&b)?);
            let result = if exact {
                swap_test_exact(&prep_a, &prep_b)?
            } else {
                swap_test(&prep_a, &prep_b, shots, seed)?
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&result)?);
            } else {
                if !exact {
                    println!("seed: {seed}");
                    println!("shots: {}", result.shots);
                    println!("ones: {}", result.ones);
                }
                println!("p0: {:.6}", result.p0);
                println!("s: {:.6}", result.s);
                println!("delta_theta: {:.6}", result.delta_theta);
                if !exact {
                    println!("stderr: {:.6}", result.stderr);
                }
            }
            Ok(true)
        }
        Command::Inject {
            file,
            bug,
            index,
            gate,
            qubits,
            angles,
            position,
            delta,
            output,
            json,
        } => {
            let circuit = load_circuit(&file)?;
            let args = InjectArgs {
                index,
                gate,
                qubits,
                angles,
                position,
                delta,
            };
            cmd_inject(&circuit, bug, args, seed, &output, json)
        }
        Command::Qsphere { file, output } => {
            let circuit = strip_measurements(&load_circuit(&file)?)?;
            let nodes = qsphere(&run_zero(&circuit)?);
            write_or_print(output.as_deref(), &serde_json::to_string_pretty(&nodes)?)?;
            Ok(true)
        }
    }
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let origin = path.display().to_string();
    parse_named(&text, &origin).with_context(|| format!("parsing {origin}"))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => {
            fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_slice(
    file: &Path,
    mode: ModeArg,
    strip_idle: bool,
    out_dir: Option<PathBuf>,
    json: bool,
) -> Result<bool> {
    let circuit = load_circuit(file)?;
    let mode = match mode {
        ModeArg::Standalone => SliceMode::Standalone,
        ModeArg::Accumulated => SliceMode::Accumulated,
    };
    let stem = file
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow!("cannot derive a file stem from {}", file.display()))?;
    let dir = out_dir.unwrap_or_else(|| file.parent().map(Path::to_path_buf).unwrap_or_default());
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let set = vslice(&circuit, mode);
    let mut entries = Vec::with_capacity(set.slices.len());
    for (k, slice) in set.slices.iter().enumerate() {
        let name = slice_file_name(stem, k + 1);
        let (body, kept, removed) = if strip_idle {
            let w = hslice(slice);
            (w.reduced, w.kept_qubits, w.removed_qubits)
        } else {
            (slice.clone(), (0..slice.num_qubits()).collect(), Vec::new())
        };
        let path = dir.join(&name);
        fs::write(&path, serialize(&body)).with_context(|| format!("writing {}", path.display()))?;
        if !json {
            println!("{}", path.display());
        }
        entries.push(SliceEntry {
            file: name,
            ops: body.len(),
            num_qubits: body.num_qubits(),
            kept_qubits: kept,
            removed_qubits: removed,
        });
    }
    let manifest = SliceManifest {
        source: file.display().to_string(),
        mode,
        strip_idle,
        cut_positions: set.cut_positions,
        slices: entries,
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    let manifest_path = dir.join(format!("{stem}.manifest.json"));
    fs::write(&manifest_path, format!("{text}\n"))
        .with_context(|| format!("writing {}", manifest_path.display()))?;
    if json {
        println!("{text}");
    } else {
        println!("{}", manifest_path.display());
    }
    Ok(true)
}

fn cmd_test(
    file: &Path,
    vectors: &Path,
    mode: TestModeArg,
    tolerance: f64,
    shots: Option<u64>,
    seed: u64,
    json: bool,
) -> Result<bool> {
    let circuit = load_circuit(file)?;
    let text =
        fs::read_to_string(vectors).with_context(|| format!("reading {}", vectors.display()))?;
    let cases = load_vectors(&text).with_context(|| format!("in {}", vectors.display()))?;
    let mode = match mode {
        TestModeArg::Pclass => TestMode::Pclass,
        TestModeArg::Fquant => TestMode::Fquant,
    };
    let config = TestConfig {
        epsilon: tolerance,
        shots,
        seed,
        ..TestConfig::new(mode)
    };
    let report = run_tests(&circuit, &cases, &config)?;
    if json {
        println!("{}", report.to_json());
    } else {
        if shots.is_some() {
            println!("seed: {seed}");
        }
        print!("{}", report.render_text());
    }
    Ok(report.all_passed())
}

fn parse_qubit_list(circuit: &Circuit, list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            circuit
                .resolve_qubit(s)
                .ok_or_else(|| anyhow!("unknown qubit `{s}`"))
        })
        .collect()
}

fn parse_gate(name: &str) -> Result<GateKind> {
    GateKind::from_name(name).ok_or_else(|| anyhow!("unknown gate `{name}`"))
}

fn cmd_locate(file: &Path, gate: &str, qubits: Option<&str>, json: bool) -> Result<bool> {
    let circuit = load_circuit(file)?;
    let kind = parse_gate(gate)?;
    let qubits = match qubits {
        Some(list) => parse_qubit_list(&circuit, list)?,
        None => Vec::new(),
    };
    let hits: Vec<LocateHit> = circuit
        .gate_loc(kind, &qubits)
        .into_iter()
        .map(|(index, span)| LocateHit {
            index,
            op: circuit.ops()[index].to_string(),
            origin: span.origin.clone(),
            line: span.line,
            column: span.column,
        })
        .collect();
    if json {
        println!("{}", serde_json::to_string_pretty(&hits)?);
    } else {
        for hit in &hits {
            println!("#{} {} at {}:{}:{}", hit.index, hit.op, hit.origin, hit.line, hit.column);
        }
        println!("{} match(es)", hits.len());
    }
    Ok(true)
}

fn unitary_counts(circuit: &Circuit) -> GateStats {
    circuit
        .count_ops()
        .histogram
        .into_iter()
        .filter(|(k, _)| k.is_unitary())
        .collect()
}

fn cmd_counts(file: &Path, expect: Option<&str>, json: bool) -> Result<bool> {
    let circuit = load_circuit(file)?;
    let Some(expect) = expect else {
        let counts = circuit.count_ops();
        if json {
            let report = CountsReport {
                counts: counts.histogram,
                expected: None,
                mismatches: Vec::new(),
                ok: true,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        } else {
            println!("{counts}");
        }
        return Ok(true);
    };
    let spec: SubroutineSpec = expect.parse()?;
    let expected = unitary_counts(&build_subroutine(&spec)?);
    let found = unitary_counts(&circuit);
    let mismatches: Vec<CountMismatch> = found
        .diff(&expected)
        .into_iter()
        .map(|(gate, expected, found)| CountMismatch {
            gate,
            expected,
            found,
        })
        .collect();
    let ok = mismatches.is_empty();
    if json {
        let report = CountsReport {
            counts: found.histogram,
            expected: Some(expected.histogram),
            mismatches,
            ok,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else if ok {
        println!("OK {found}");
    } else {
        println!("MISMATCH {found} vs {spec} {expected}");
        for m in &mismatches {
            println!("{}: expected {}, found {}", m.gate, m.expected, m.found);
        }
    }
    Ok(ok)
}

fn spec_from_kind(kind: &str, qubits: Option<usize>, hamming: Option<usize>) -> Result<SubroutineSpec> {
    if kind.contains(':') {
        return Ok(kind.parse()?);
    }
    let need_n = || qubits.ok_or_else(|| anyhow!("`{kind}` needs --qubits"));
    let text = match kind.to_ascii_lowercase().as_str() {
        "adder" | "full_adder" | "fulladder" => "adder".to_string(),
        "dicke" => {
            let k = hamming.ok_or_else(|| anyhow!("`dicke` needs --hamming"))?;
            format!("dicke:{},{k}", need_n()?)
        }
        "qpe" => bail!("qpe needs a phase; use the form qpe:COUNT,PHASE"),
        other => format!("{other}:{}", need_n()?),
    };
    Ok(text.parse()?)
}

/// Evaluates an angle expression with the circuit parser, so `pi/4` and
/// `-3*pi/8` are accepted wherever QASM accepts them.
fn parse_angle(expr: &str) -> Result<f64> {
    let text = format!("OPENQASM 2.0;\nqreg q[1];\np({expr}) q[0];\n");
    let circuit =
        parse_named(&text, "<angle>").map_err(|e| anyhow!("invalid angle `{expr}`: {}", e.message))?;
    Ok(circuit.ops()[0].angles[0])
}

struct InjectArgs {
    index: Option<usize>,
    gate: Option<String>,
    qubits: Option<String>,
    angles: Option<String>,
    position: Option<usize>,
    delta: Option<String>,
}

fn cmd_inject(
    circuit: &Circuit,
    bug: BugArg,
    args: InjectArgs,
    seed: u64,
    output: &Path,
    json: bool,
) -> Result<bool> {
    let index = || args.index.ok_or_else(|| anyhow!("this bug needs --index"));
    let qubits = || -> Result<Vec<usize>> {
        let list = args.qubits.as_deref().ok_or_else(|| anyhow!("this bug needs --qubits"))?;
        parse_qubit_list(circuit, list)
    };
    let mutation = match bug {
        BugArg::ExtraGate => Mutation::ExtraGate {
            gate: parse_gate(args.gate.as_deref().ok_or_else(|| anyhow!("extra-gate needs --gate"))?)?,
            qubits: qubits()?,
            angles: match &args.angles {
                Some(list) => list.split(',').map(parse_angle).collect::<Result<_>>()?,
                None => Vec::new(),
            },
            position: args.position,
        },
        BugArg::MissingGate => Mutation::MissingGate { index: index()? },
        BugArg::WrongQubit => Mutation::WrongQubit {
            index: index()?,
            qubits: qubits()?,
        },
        BugArg::WrongOrder => Mutation::WrongOrder { index: index()? },
        BugArg::PhaseShift => Mutation::PhaseShift {
            index: index()?,
            delta: parse_angle(args.delta.as_deref().ok_or_else(|| anyhow!("phase-shift needs --delta"))?)?,
        },
        BugArg::SkipInit => Mutation::SkipInitialization,
        BugArg::Random => random_mutation(circuit, seed)?,
    };
    let mutated = inject_bug(circuit, &mutation)?;
    fs::write(output, serialize(&mutated)).with_context(|| format!("writing {}", output.display()))?;
    let silent = if circuit.num_qubits() <= SILENT_CHECK_MAX_QUBITS && !circuit.has_measure() {
        Some(is_silent_mutation(circuit, &mutated, SILENT_CHECK_MAX_QUBITS)?)
    } else {
        None
    };
    let report = InjectReport {
        mutation,
        output: output.display().to_string(),
        silent,
        seed: matches!(bug, BugArg::Random).then_some(seed),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        if let Some(seed) = report.seed {
            println!("seed: {seed}");
        }
        println!("mutation: {}", serde_json::to_string(&report.mutation)?);
        println!("wrote {}", report.output);
        match silent {
            Some(true) => println!("warning: silent mutation (unitary unchanged)"),
            Some(false) => println!("mutation changes the unitary"),
            None => println!("silence not checked (circuit too wide or measured)"),
        }
    }
    Ok(true)
}
