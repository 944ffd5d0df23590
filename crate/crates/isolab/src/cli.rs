//! The `isolab` command line.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use isolab_core::channel::{analyze, extended_output, ChannelHandle, SearchOptions};
use isolab_core::linalg::{purity_metrics, ComplexMatrix, DensityMatrix, PureState};
use isolab_core::protocol::{
    honest_witness, run_protocol_exact, run_protocol_sampled, ProtocolResult, WitnessState,
};
use isolab_core::reduction::{build_instance, max_accept_prob, reduction_check};
use isolab_core::{tol, Error};
use num_complex::Complex64;
use serde_json::Value;

use crate::format::{parse_circuit, parse_complex, serialize_circuit, CircuitParseError};
use crate::report::{complex_matrix, complex_vec, num, nums, Report};
use crate::verifier::parse_verifier;

/// Environment variable overriding the dimension cap.
pub const MAX_DIM_ENV: &str = "ISOLAB_MAX_DIM";

#[derive(Parser, Debug)]
#[command(name = "isolab", version, about = "Analyze how close a circuit channel is to an isometry")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a circuit file
    Validate { path: PathBuf },
    /// Exact isometry test, minimum output opnorm search and classification
    Analyze {
        path: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Choi matrix, its spectrum and rank
    Choi { path: PathBuf },
    /// Kraus operators from the Choi matrix
    Kraus { path: PathBuf },
    /// Run the two-swap-test protocol
    Protocol {
        path: PathBuf,
        /// `honest` or a state file on (H⊗R)⊗2
        #[arg(long, default_value = "honest")]
        witness: String,
        /// `auto` (search minimizer) or a state file on H⊗R
        #[arg(long, default_value = "auto")]
        psi: String,
        #[arg(long, default_value_t = 0)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
    },
    /// Build the channel instance of a verifier
    Reduce {
        verifier: PathBuf,
        #[arg(long)]
        epsilon: f64,
        /// Also search the instance and check the applicable implication
        #[arg(long)]
        check: bool,
        /// Output circuit path (default: `<verifier stem>.channel.circ` beside the input)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Cap(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Cap(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::DimensionCap { .. } => CliError::Cap(e.to_string()),
            Error::NonFinite => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CircuitParseError> for CliError {
    fn from(e: CircuitParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn max_dim(env: Option<&str>) -> Result<usize, CliError> {
    match env {
        None => Ok(tol::DEFAULT_MAX_DIM),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{MAX_DIM_ENV} is not a positive integer: '{s}'"))),
    }
}

fn load_channel(path: &Path, cap: usize) -> Result<ChannelHandle, CliError> {
    let circuit = parse_circuit(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(ChannelHandle::with_max_dim(circuit, cap)?)
}

/// Whitespace-separated complex literals; `#` starts a comment.
fn read_amplitudes(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let text = read(path)?;
    text.lines()
        .flat_map(|l| l.split('#').next().unwrap_or("").split_whitespace())
        .map(|t| {
            parse_complex(t).ok_or_else(|| {
                CliError::Input(format!("{}: invalid complex literal '{t}'", path.display()))
            })
        })
        .collect()
}

/// A pure state (`dim` entries) or a row-major density matrix (`dim²` entries).
fn read_state(path: &Path, dim: usize) -> Result<DensityMatrix, CliError> {
    let entries = read_amplitudes(path)?;
    if entries.len() == dim {
        Ok(PureState::new(entries)?.projector())
    } else if entries.len() == dim * dim {
        Ok(DensityMatrix::new(ComplexMatrix::from_row_major(dim, dim, entries)?)?)
    } else {
        Err(CliError::Input(format!(
            "{}: witness dimension mismatch: {} entries, expected {dim} or {}",
            path.display(),
            entries.len(),
            dim * dim
        )))
    }
}

fn path_value(p: &Path) -> Value {
    Value::from(p.display().to_string())
}

fn cmd_validate(path: &Path) -> Result<Report, CliError> {
    let c = parse_circuit(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut r = Report::new("validate");
    r.input("path", path_value(path))
        .result("valid", true)
        .result("input_qubits", c.input_qubits)
        .result("output_qubits", c.output_qubits())
        .result("peak_qubits", c.peak_qubits())
        .result("gates", c.gates.len())
        .result("unitary_only", c.is_unitary_only());
    Ok(r)
}

fn cmd_analyze(path: &Path, epsilon: f64, opts: SearchOptions, cap: usize) -> Result<Report, CliError> {
    let ch = load_channel(path, cap)?;
    let rep = analyze(&ch, epsilon, &opts)?;
    let out = extended_output(&ch.kraus()?, rep.minimizing_state());
    let metrics = purity_metrics(&DensityMatrix::new(out)?);
    let mut r = Report::new("analyze");
    r.input("path", path_value(path))
        .input("epsilon", num(epsilon))
        .input("restarts", opts.restarts)
        .seed(opts.seed)
        .result("dim_in", ch.dim_in())
        .result("dim_out", ch.dim_out())
        .result("choi_rank", rep.choi_rank())
        .result("choi_eigenvalues", nums(&rep.exact.choi_eigenvalues))
        .result("exact_isometry", rep.exact_isometry())
        .result("leading_kraus_defect", num(rep.exact.leading_kraus_defect))
        .result("min_output_opnorm", num(rep.min_output_opnorm()))
        .result("per_restart", nums(&rep.search.per_restart))
        .result("best_restart", rep.search.best_restart)
        .result("minimizer", complex_vec(rep.minimizing_state().amplitudes()))
        .result("purity", num(metrics.purity))
        .result("opnorm", num(metrics.opnorm))
        .result("trace_distance_to_pure", num(metrics.tdist_to_pure))
        .result("classification", rep.classification.as_str());
    Ok(r)
}

fn cmd_choi(path: &Path, cap: usize) -> Result<Report, CliError> {
    let ch = load_channel(path, cap)?;
    let choi = ch.choi()?;
    let mut r = Report::new("choi");
    r.input("path", path_value(path))
        .result("dim_in", ch.dim_in())
        .result("dim_out", ch.dim_out())
        .result("eigenvalues", nums(&choi.eigenvalues()))
        .result("rank", choi.rank(tol::RANK))
        .result("purity", num(choi.purity()))
        .result("marginal_defect", num(choi.marginal_defect()))
        .result("matrix", complex_matrix(choi.matrix().matrix()));
    Ok(r)
}

/// Unit matrix `|i⟩⟨j|` of dimension `d`.
fn unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

fn cmd_kraus(path: &Path, cap: usize) -> Result<Report, CliError> {
    let ch = load_channel(path, cap)?;
    let kraus = ch.kraus()?;
    let d = ch.dim_in();
    let mut residual: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let e = unit(d, i, j);
            let diff = kraus.apply(&e)?.max_abs_diff(&ch.apply_operator(&e)?);
            residual = residual.max(diff);
        }
    }
    let mut r = Report::new("kraus");
    r.input("path", path_value(path))
        .result("dim_in", ch.dim_in())
        .result("dim_out", ch.dim_out())
        .result("count", kraus.len())
        .result("completeness_defect", num(kraus.completeness_defect()))
        .result("reconstruction_residual", num(residual))
        .result(
            "operators",
            Value::Array(kraus.operators().iter().map(complex_matrix).collect()),
        );
    Ok(r)
}

fn protocol_results(r: &mut Report, res: &ProtocolResult) {
    r.result("p_step1_symmetric", num(res.p_step1_symmetric))
        .result(
            "p_step3_antisymmetric_given_step1",
            num(res.p_step3_antisymmetric_given_step1),
        )
        .result("p_accept", num(res.p_accept));
    if let Some(s) = res.shots {
        r.result("shots", s.n)
            .result("accepts", s.accepts)
            .result("accept_frequency", num(res.accept_frequency().unwrap_or(f64::NAN)));
    }
}

struct ProtocolArgs<'a> {
    witness: &'a str,
    psi: &'a str,
    shots: u64,
    opts: SearchOptions,
}

fn cmd_protocol(path: &Path, a: &ProtocolArgs<'_>, cap: usize) -> Result<Report, CliError> {
    let ch = load_channel(path, cap)?;
    let d = ch.dim_in();
    let mut r = Report::new("protocol");
    r.input("path", path_value(path))
        .input("witness", a.witness)
        .input("psi", a.psi)
        .input("shots", a.shots)
        .seed(a.opts.seed);
    let witness = if a.witness == "honest" {
        let psi = if a.psi == "auto" {
            r.input("restarts", a.opts.restarts);
            let search = isolab_core::channel::min_output_opnorm(&ch, &a.opts)?;
            r.result("min_output_opnorm", num(search.value));
            search.state
        } else {
            let amps = read_amplitudes(Path::new(a.psi))?;
            if amps.len() != d * d {
                return Err(CliError::Input(format!(
                    "{}: witness dimension mismatch: psi has {} entries, expected {}",
                    a.psi,
                    amps.len(),
                    d * d
                )));
            }
            PureState::new(amps)?
        };
        r.result("psi", complex_vec(psi.amplitudes()));
        honest_witness(&ch, &psi)?
    } else {
        WitnessState::new(read_state(Path::new(a.witness), d * d * d * d)?, d)?
    };
    let res = if a.shots > 0 {
        run_protocol_sampled(&ch, &witness, a.shots, a.opts.seed)?
    } else {
        run_protocol_exact(&ch, &witness)?
    };
    protocol_results(&mut r, &res);
    Ok(r)
}

fn default_out(verifier: &Path) -> PathBuf {
    let stem = verifier
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "verifier".into());
    verifier.with_file_name(format!("{stem}.channel.circ"))
}

struct ReduceArgs {
    epsilon: f64,
    check: bool,
    out: Option<PathBuf>,
    opts: SearchOptions,
}

fn cmd_reduce(path: &Path, a: &ReduceArgs, cap: usize) -> Result<Report, CliError> {
    let v = parse_verifier(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let inst = build_instance(&v, a.epsilon)?;
    // Enforce the cap before writing anything.
    ChannelHandle::with_max_dim(inst.channel_circuit.clone(), cap)?;
    let out = a.out.clone().unwrap_or_else(|| default_out(path));
    std::fs::write(&out, serialize_circuit(&inst.channel_circuit))
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", out.display())))?;
    let (p, witness) = max_accept_prob(&v)?;
    let mut r = Report::new("reduce");
    r.input("verifier", path_value(path))
        .input("epsilon", num(a.epsilon))
        .input("check", a.check)
        .result("output_path", path_value(&out))
        .result("input_qubits", inst.channel_circuit.input_qubits)
        .result("output_qubits", inst.channel_circuit.output_qubits())
        .result("padding_qubits", inst.padding_qubits)
        .result("depolarized_dim", inst.depolarized_dim)
        .result("measured_qubit", inst.measured)
        .result("max_accept_prob", num(p))
        .result("optimal_witness", complex_vec(witness.amplitudes()));
    if a.check {
        let t = reduction_check(&v, a.epsilon, &a.opts)?;
        r.input("restarts", a.opts.restarts).seed(a.opts.seed);
        let mut check = serde_json::Map::new();
        check.insert("min_output_opnorm".into(), num(t.min_output_opnorm));
        check.insert("minimizer".into(), complex_vec(t.minimizer.amplitudes()));
        check.insert("implication".into(), t.implication.as_str().into());
        check.insert("holds".into(), t.holds.map_or(Value::Null, Value::from));
        check.insert(
            "explicit_witness_opnorm".into(),
            t.explicit_witness_opnorm.map_or(Value::Null, num),
        );
        check.insert("classification".into(), t.classification.as_str().into());
        r.result("check", Value::Object(check));
    }
    Ok(r)
}

fn dispatch(cli: Cli, cap: usize) -> Result<Report, CliError> {
    match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Analyze {
            path,
            epsilon,
            restarts,
            seed,
        } => cmd_analyze(&path, epsilon, SearchOptions::new(restarts, seed), cap),
        Command::Choi { path } => cmd_choi(&path, cap),
        Command::Kraus { path } => cmd_kraus(&path, cap),
        Command::Protocol {
            path,
            witness,
            psi,
            shots,
            seed,
            restarts,
        } => cmd_protocol(
            &path,
            &ProtocolArgs {
                witness: &witness,
                psi: &psi,
                shots,
                opts: SearchOptions::new(restarts, seed),
            },
            cap,
        ),
        Command::Reduce {
            verifier,
            epsilon,
            check,
            out,
            restarts,
            seed,
        } => cmd_reduce(
            &verifier,
            &ReduceArgs {
                epsilon,
                check,
                out,
                opts: SearchOptions::new(restarts, seed),
            },
            cap,
        ),
    }
}

/// Runs one invocation. `max_dim_env` is the value of [`MAX_DIM_ENV`], if set.
pub fn run<I, T>(args: I, max_dim_env: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    match max_dim(max_dim_env).and_then(|cap| dispatch(cli, cap)) {
        Ok(report) => Outcome {
            code: 0,
            stdout: report.render(),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
