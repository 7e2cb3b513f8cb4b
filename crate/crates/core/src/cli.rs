//! Command-line front end. Machine-readable results go to stdout or files,
//! progress and diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cs::{reconstruct, sparsity_fraction, MeasurementSet, SolverConfig};
use crate::error::{Error, Result};
use crate::landscape::{self, metrics, nrmse, sample_indices, GridSpec, Landscape, LandscapeMeta};
use crate::mitigation::{mitigated_landscape, Extrapolation, ZneConfig};
use crate::ncm::{self, mixed_reconstruct, plan_mixed_sampling, LinearNcm};
use crate::optimize::{
    endpoint_distance, oscar_init, random_point, AdamConfig, CircuitObjective, InterpolatedObjective, Interpolator,
    NelderMeadConfig, OptimizerKind,
};
use crate::parallel::{dispatch, eager_reconstruct, LatencyModel};
use crate::sim::{generate_landscape, random_regular_graph, random_sk_with, Ansatz, NoiseModel, ProblemInstance, SkCouplings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "oscar", version, about = "Cost-landscape generation, compressed-sensing reconstruction and analysis")]
pub struct Cli {
    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grid-search a landscape by circuit simulation.
    Generate(GenerateArgs),
    /// Draw uniform random samples from a landscape file.
    Sample(SampleArgs),
    /// Reconstruct a landscape from samples by compressed sensing.
    Reconstruct(ReconstructArgs),
    /// Roughness and flatness metrics of a landscape.
    Metrics(InputArgs),
    /// Fraction of DCT coefficients holding a given share of the energy.
    Sparsity(SparsityArgs),
    /// Generate a zero-noise-extrapolated landscape.
    Zne(ZneArgs),
    /// Fit a noise compensation model between two landscapes.
    NcmTrain(NcmTrainArgs),
    /// Reconstruct a reference landscape from mixed two-device samples.
    NcmReconstruct(NcmReconstructArgs),
    /// Run an optimizer on the spline of a 2-D landscape.
    Optimize(OptimizeArgs),
    /// Choose an initial point from a reconstruction, then optimize the circuit.
    Init(InitArgs),
    /// Sample through simulated parallel devices with latency and timeouts.
    Dispatch(DispatchArgs),
    /// Import a 2-D landscape from a CSV matrix.
    ImportCsv(ImportCsvArgs),
    /// Export a 2-D landscape as a CSV matrix.
    ExportCsv(ExportCsvArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProblemArg {
    /// Random 3-regular MaxCut.
    Maxcut3,
    /// SK model with ±1 couplings.
    Sk,
    /// SK model with Gaussian couplings.
    SkGaussian,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AnsatzArg {
    Qaoa,
    Twolocal,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Base seed for all randomness.
    #[arg(long, env = "OSCAR_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    #[arg(long, value_enum, required_unless_present = "problem_file")]
    pub problem: Option<ProblemArg>,
    /// JSON problem instance, instead of --problem.
    #[arg(long, conflicts_with = "problem")]
    pub problem_file: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pub qubits: usize,
    /// Seed for the random instance (default: --seed).
    #[arg(long)]
    pub instance_seed: Option<u64>,
    #[arg(long, value_enum, default_value = "qaoa")]
    pub ansatz: AnsatzArg,
    /// QAOA depth.
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Two-local layer count.
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    /// Grid preset (paper-p1, paper-p2) or a GridSpec JSON file.
    #[arg(long, default_value = "paper-p1")]
    pub grid: String,
    #[command(flatten)]
    pub noise: NoiseArgs,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    /// Depolarizing probability per 1-qubit gate.
    #[arg(long, default_value_t = 0.0)]
    pub p1q: f64,
    /// Depolarizing probability per 2-qubit gate.
    #[arg(long, default_value_t = 0.0)]
    pub p2q: f64,
    #[arg(long, default_value_t = NoiseModel::DEFAULT_TRAJECTORIES)]
    pub trajectories: usize,
    /// Measurement shots per point; 0 gives exact expectations.
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Fixed regularization weight (default: scaled to the data).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_fraction)]
    pub fraction: f64,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Measurement-set JSON output.
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Landscape (.lsc) to sample from, or a measurement-set JSON.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Sampling fraction; required when --in is a landscape.
    #[arg(long, value_parser = parse_fraction)]
    pub fraction: Option<f64>,
    /// Grid for measurement-set input (preset or JSON file).
    #[arg(long)]
    pub grid: Option<String>,
    /// True landscape for an NRMSE report.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SparsityArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.99, value_parser = parse_fraction)]
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Richardson,
    Linear,
}

#[derive(Debug, Args)]
pub struct ZneArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[arg(long, value_enum, default_value = "richardson")]
    pub method: MethodArg,
    /// Comma-separated noise scale factors (default: 1,2,3 for Richardson, 1,3 for linear).
    #[arg(long, value_delimiter = ',')]
    pub scales: Option<Vec<f64>>,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct NcmTrainArgs {
    /// Landscape from the device to be compensated.
    #[arg(long)]
    pub src: PathBuf,
    /// Landscape from the reference device.
    #[arg(long = "ref")]
    pub reference: PathBuf,
    /// Share of the grid used as training points.
    #[arg(long, default_value_t = 0.01, value_parser = parse_fraction)]
    pub fraction: f64,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Model JSON output.
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct NcmReconstructArgs {
    /// Reference-device landscape (also the NRMSE truth).
    #[arg(long = "ref")]
    pub reference: PathBuf,
    /// Secondary-device landscape.
    #[arg(long)]
    pub other: PathBuf,
    /// Total sampling fraction.
    #[arg(long, default_value_t = 0.1, value_parser = parse_fraction)]
    pub fraction: f64,
    /// Share of the samples taken on the reference device.
    #[arg(long, default_value_t = 0.5, value_parser = parse_share)]
    pub ref_share: f64,
    /// Training fraction of the grid when fitting a model here.
    #[arg(long, default_value_t = 0.01, value_parser = parse_share)]
    pub training: f64,
    /// Previously trained model JSON.
    #[arg(long, conflicts_with = "no_ncm")]
    pub model: Option<PathBuf>,
    /// Merge the secondary samples uncompensated.
    #[arg(long)]
    pub no_ncm: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OptimizerArg {
    Adam,
    NelderMead,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, value_enum, default_value = "adam")]
    pub optimizer: OptimizerArg,
    /// ADAM learning rate.
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// 2-D landscape to interpolate.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Initial point, comma-separated (default: random from --seed).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub init: Option<Vec<f64>>,
    /// Minimize the landscape instead of maximizing it.
    #[arg(long)]
    pub minimize: bool,
    /// Also optimize the live circuit recorded in the landscape metadata and
    /// report the endpoint distance.
    #[arg(long)]
    pub compare_live: bool,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Run JSON output (default: stdout only).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InitArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long, default_value_t = 0.1, value_parser = parse_fraction)]
    pub fraction: f64,
    /// Also run from a random initial point for comparison.
    #[arg(long)]
    pub baseline: bool,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DispatchArgs {
    /// Landscape standing in for the device: jobs return its values.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.1, value_parser = parse_fraction)]
    pub fraction: f64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Soft timeout per job, in seconds of virtual time.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub base_latency: f64,
    /// Lognormal tail location; omit for constant latency.
    #[arg(long, allow_negative_numbers = true)]
    pub tail_mu: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub tail_sigma: f64,
    /// Eagerly reconstruct from the completed samples into this file.
    #[arg(long)]
    pub reconstruct: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Report JSON output.
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ImportCsvArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Row axis as name:lo:hi.
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub rows: (String, f64, f64),
    /// Column axis as name:lo:hi.
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub cols: (String, f64, f64),
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportCsvArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
}

fn parse_fraction(s: &str) -> std::result::Result<f64, String> {
    let f: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if f > 0.0 && f <= 1.0 {
        Ok(f)
    } else {
        Err(format!("{f} is not in (0, 1]"))
    }
}

fn parse_share(s: &str) -> std::result::Result<f64, String> {
    let f: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&f) {
        Ok(f)
    } else {
        Err(format!("{f} is not in [0, 1]"))
    }
}

fn parse_axis(s: &str) -> std::result::Result<(String, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected name:lo:hi".into());
    }
    let lo = parts[1].parse().map_err(|e| format!("lo: {e}"))?;
    let hi = parts[2].parse().map_err(|e| format!("hi: {e}"))?;
    Ok((parts[0].to_string(), lo, hi))
}

/// A command failure, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        // Fails only if a pool already exists, e.g. when embedded in tests.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut ctx = Context {
        argv: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        start: Instant::now(),
    };
    match execute(&cli.command, &mut ctx) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

struct Context {
    argv: Vec<String>,
    start: Instant,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    argv: &'a [String],
    seed: Option<u64>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    tool_version: &'static str,
    wall_time_seconds: f64,
}

impl Context {
    fn manifest(&self, command: &str, seed: Option<u64>, inputs: &[&Path], outputs: &[&Path]) -> Result<()> {
        let m = RunManifest {
            command,
            argv: &self.argv,
            seed,
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
            tool_version: env!("CARGO_PKG_VERSION"),
            wall_time_seconds: self.start.elapsed().as_secs_f64(),
        };
        for out in outputs {
            let mut name = out.as_os_str().to_owned();
            name.push(".manifest.json");
            write_json_file(Path::new(&name), &m)?;
        }
        Ok(())
    }
}

fn write_json_file<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_json_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

fn grid_from_arg(arg: &str) -> CliResult<GridSpec> {
    if let Some(g) = GridSpec::preset(arg) {
        return Ok(g);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return usage(format!("unknown grid {arg:?}: not a preset (paper-p1, paper-p2) or a file"));
    }
    Ok(read_json_file(path)?)
}

impl NoiseArgs {
    fn model(&self) -> CliResult<NoiseModel> {
        let m = NoiseModel {
            p1q: self.p1q,
            p2q: self.p2q,
            trajectories: self.trajectories,
            shots: self.shots,
        };
        m.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(m)
    }
}

impl CircuitArgs {
    fn problem(&self, seed: u64) -> CliResult<ProblemInstance> {
        let instance_seed = self.instance_seed.unwrap_or(seed);
        match (&self.problem_file, self.problem) {
            (Some(path), _) => Ok(read_json_file(path)?),
            (None, Some(ProblemArg::Maxcut3)) => Ok(random_regular_graph(self.qubits, 3, instance_seed)?),
            (None, Some(ProblemArg::Sk)) => Ok(random_sk_with(self.qubits, instance_seed, SkCouplings::PlusMinusOne)?),
            (None, Some(ProblemArg::SkGaussian)) => Ok(random_sk_with(self.qubits, instance_seed, SkCouplings::Gaussian)?),
            (None, None) => usage("one of --problem or --problem-file is required"),
        }
    }

    fn ansatz(&self) -> CliResult<Ansatz> {
        let a = match self.ansatz {
            AnsatzArg::Qaoa => Ansatz::Qaoa { p: self.p },
            AnsatzArg::Twolocal => Ansatz::TwoLocal { layers: self.layers },
        };
        a.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(a)
    }

    /// Problem, ansatz, grid and noise, with the grid checked against the
    /// ansatz parameter count.
    fn resolve(&self, seed: u64) -> CliResult<(ProblemInstance, Ansatz, GridSpec, NoiseModel)> {
        let problem = self.problem(seed)?;
        let ansatz = self.ansatz()?;
        let grid = grid_from_arg(&self.grid)?;
        let k = ansatz.parameter_count(problem.n_qubits);
        if grid.ndim() != k {
            return usage(format!(
                "grid has {} dimensions but {} on {} qubits has {k} parameters",
                grid.ndim(),
                ansatz.name(),
                problem.n_qubits
            ));
        }
        Ok((problem, ansatz, grid, self.noise.model()?))
    }
}

impl SolverArgs {
    fn config(&self) -> CliResult<SolverConfig> {
        let cfg = SolverConfig {
            lambda: self.lambda,
            max_iters: self.max_iters,
            tolerance: self.tol,
            ..Default::default()
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

impl OptimizerArgs {
    fn kind(&self, spec: &GridSpec) -> OptimizerKind {
        match self.optimizer {
            OptimizerArg::Adam => {
                let mut cfg = AdamConfig::for_grid(spec);
                if let Some(lr) = self.lr {
                    cfg.lr = lr;
                }
                if let Some(n) = self.max_iters {
                    cfg.max_iters = n;
                }
                OptimizerKind::Adam(cfg)
            }
            OptimizerArg::NelderMead => {
                let mut cfg = NelderMeadConfig {
                    initial_step: spec.max_spacing() * 2.0,
                    bounds: Some(spec.bounds()),
                    ..Default::default()
                };
                if let Some(n) = self.max_iters {
                    cfg.max_iters = n;
                }
                OptimizerKind::NelderMead(cfg)
            }
        }
    }
}

fn load(path: &Path) -> Result<Landscape> {
    landscape::load(path)
}

fn reconstruction_summary(l: &Landscape) -> Value {
    serde_json::to_value(&l.meta.reconstruction).unwrap_or(Value::Null)
}

fn execute(command: &Command, ctx: &mut Context) -> CliResult<()> {
    match command {
        Command::Generate(a) => cmd_generate(a, ctx),
        Command::Sample(a) => cmd_sample(a, ctx),
        Command::Reconstruct(a) => cmd_reconstruct(a, ctx),
        Command::Metrics(a) => {
            let m = metrics(&load(&a.input)?)?;
            print_json(&serde_json::to_value(m).map_err(Error::from)?);
            Ok(())
        }
        Command::Sparsity(a) => {
            let l = load(&a.input)?;
            let f = sparsity_fraction(l.values(), &l.shape(), a.energy)?;
            print_json(&json!({ "fraction": f, "energy": a.energy, "points": l.len() }));
            Ok(())
        }
        Command::Zne(a) => cmd_zne(a, ctx),
        Command::NcmTrain(a) => cmd_ncm_train(a, ctx),
        Command::NcmReconstruct(a) => cmd_ncm_reconstruct(a, ctx),
        Command::Optimize(a) => cmd_optimize(a, ctx),
        Command::Init(a) => cmd_init(a, ctx),
        Command::Dispatch(a) => cmd_dispatch(a, ctx),
        Command::ImportCsv(a) => {
            let (rn, rlo, rhi) = &a.rows;
            let (cn, clo, chi) = &a.cols;
            let l = landscape::import_csv(&a.input, (rn, *rlo, *rhi), (cn, *clo, *chi))?;
            landscape::save(&l, &a.out)?;
            ctx.manifest("import-csv", None, &[&a.input], &[&a.out])?;
            eprintln!("imported {}x{} landscape", l.shape()[0], l.shape()[1]);
            Ok(())
        }
        Command::ExportCsv(a) => {
            landscape::export_csv(&load(&a.input)?, &a.out)?;
            ctx.manifest("export-csv", None, &[&a.input], &[&a.out])?;
            Ok(())
        }
    }
}

fn cmd_generate(a: &GenerateArgs, ctx: &mut Context) -> CliResult<()> {
    let seed = a.seed.seed;
    let (problem, ansatz, grid, noise) = a.circuit.resolve(seed)?;
    eprintln!(
        "generating {} points: {} qubits, {}, p1q={} p2q={}",
        grid.len(),
        problem.n_qubits,
        ansatz.name(),
        noise.p1q,
        noise.p2q
    );
    let l = generate_landscape(&problem, &ansatz, &grid, &noise, seed)?;
    landscape::save(&l, &a.out)?;
    ctx.manifest("generate", Some(seed), &[], &[&a.out])?;
    let (imax, vmax) = l.argmax();
    print_json(&json!({ "points": l.len(), "max": vmax, "argmax": grid.point(imax), "out": a.out }));
    Ok(())
}

fn cmd_sample(a: &SampleArgs, ctx: &mut Context) -> CliResult<()> {
    let l = load(&a.input)?;
    let idx = sample_indices(l.len(), a.fraction, a.seed.seed)?;
    let meas = l.measure(&idx)?;
    write_json_file(&a.out, &meas)?;
    ctx.manifest("sample", Some(a.seed.seed), &[&a.input], &[&a.out])?;
    print_json(&json!({ "samples": meas.len(), "points": l.len(), "out": a.out }));
    Ok(())
}

fn is_landscape_file(path: &Path) -> Result<bool> {
    let mut head = [0u8; 6];
    let mut f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    use std::io::Read;
    let n = f.read(&mut head).map_err(|e| Error::io(path, e))?;
    Ok(n == head.len() && head == *landscape::MAGIC)
}

fn cmd_reconstruct(a: &ReconstructArgs, ctx: &mut Context) -> CliResult<()> {
    let config = a.solver.config()?;
    let (spec, meas, meta) = if is_landscape_file(&a.input)? {
        let Some(fraction) = a.fraction else {
            return usage("--fraction is required when --in is a landscape");
        };
        let l = load(&a.input)?;
        let idx = sample_indices(l.len(), fraction, a.seed.seed)?;
        (l.spec().clone(), l.measure(&idx)?, l.meta.clone())
    } else {
        let meas: MeasurementSet = read_json_file(&a.input)?;
        let Some(grid) = &a.grid else {
            return usage("--grid is required when --in is a measurement set");
        };
        let spec = grid_from_arg(grid)?;
        if spec.shape().as_slice() != meas.grid_shape() {
            return usage("measurement grid shape does not match --grid");
        }
        (spec, meas, LandscapeMeta::default())
    };
    if meas.is_empty() {
        return usage("no samples to reconstruct from");
    }
    eprintln!("reconstructing {} points from {} samples", spec.len(), meas.len());
    let rec = reconstruct(&meas, &config)?;
    let out = Landscape::from_reconstruction(spec, &rec, meas.len(), 0.0, meta)?;
    landscape::save(&out, &a.out)?;
    let mut inputs: Vec<&Path> = vec![&a.input];
    if let Some(t) = &a.truth {
        inputs.push(t);
    }
    ctx.manifest("reconstruct", Some(a.seed.seed), &inputs, &[&a.out])?;
    let mut report = json!({ "out": a.out, "reconstruction": reconstruction_summary(&out) });
    if let Some(t) = &a.truth {
        report["nrmse"] = json!(nrmse(&load(t)?, &out)?);
    }
    print_json(&report);
    Ok(())
}

fn cmd_zne(a: &ZneArgs, ctx: &mut Context) -> CliResult<()> {
    let seed = a.seed.seed;
    let (problem, ansatz, grid, noise) = a.circuit.resolve(seed)?;
    let extrapolation = match a.method {
        MethodArg::Richardson => Extrapolation::Richardson,
        MethodArg::Linear => Extrapolation::Linear,
    };
    let scales = a.scales.clone().unwrap_or_else(|| match a.method {
        MethodArg::Richardson => ZneConfig::richardson().scale_factors,
        MethodArg::Linear => ZneConfig::linear().scale_factors,
    });
    let zne = ZneConfig::new(scales, extrapolation).map_err(|e| CliError::Usage(e.to_string()))?;
    eprintln!("generating ZNE landscape ({} circuits per point)", zne.queries_per_point());
    let l = mitigated_landscape(&problem, &ansatz, &grid, &noise, &zne, seed)?;
    landscape::save(&l, &a.out)?;
    ctx.manifest("zne", Some(seed), &[], &[&a.out])?;
    print_json(&json!({
        "out": a.out,
        "points": l.len(),
        "queries_per_point": zne.queries_per_point(),
        "total_queries": zne.queries_per_point() * l.len(),
        "metrics": metrics(&l)?,
    }));
    Ok(())
}

fn same_grid(a: &Landscape, b: &Landscape) -> CliResult<()> {
    if a.spec() != b.spec() {
        return usage("landscapes are on different grids");
    }
    Ok(())
}

fn cmd_ncm_train(a: &NcmTrainArgs, ctx: &mut Context) -> CliResult<()> {
    let src = load(&a.src)?;
    let reference = load(&a.reference)?;
    same_grid(&src, &reference)?;
    let idx = sample_indices(src.len(), a.fraction, a.seed.seed)?;
    let xs: Vec<f64> = idx.iter().map(|&i| src.values()[i]).collect();
    let ys: Vec<f64> = idx.iter().map(|&i| reference.values()[i]).collect();
    let model = ncm::train(&xs, &ys)?;
    write_json_file(&a.out, &model)?;
    ctx.manifest("ncm-train", Some(a.seed.seed), &[&a.src, &a.reference], &[&a.out])?;
    print_json(&serde_json::to_value(model).map_err(Error::from)?);
    Ok(())
}

fn cmd_ncm_reconstruct(a: &NcmReconstructArgs, ctx: &mut Context) -> CliResult<()> {
    let reference = load(&a.reference)?;
    let other = load(&a.other)?;
    same_grid(&reference, &other)?;
    let config = a.solver.config()?;
    let spec = reference.spec().clone();
    let plan = plan_mixed_sampling(spec.len(), a.fraction, a.ref_share, a.training, a.seed.seed)?;
    let model: Option<LinearNcm> = if a.no_ncm {
        None
    } else if let Some(path) = &a.model {
        Some(read_json_file(path)?)
    } else {
        let xs: Vec<f64> = plan.training.iter().map(|&i| other.values()[i]).collect();
        let ys: Vec<f64> = plan.training.iter().map(|&i| reference.values()[i]).collect();
        Some(ncm::train(&xs, &ys)?)
    };
    let r = reference.measure(&plan.reference)?;
    let o = other.measure(&plan.other)?;
    let out = mixed_reconstruct(&spec, &r, &o, model.as_ref(), &config)?;
    landscape::save(&out, &a.out)?;
    let mut inputs: Vec<&Path> = vec![&a.reference, &a.other];
    if let Some(m) = &a.model {
        inputs.push(m);
    }
    ctx.manifest("ncm-reconstruct", Some(a.seed.seed), &inputs, &[&a.out])?;
    print_json(&json!({
        "out": a.out,
        "reference_samples": plan.reference.len(),
        "other_samples": plan.other.len(),
        "training_samples": if model.is_some() && a.model.is_none() { plan.training.len() } else { 0 },
        "model": model,
        "nrmse": nrmse(&reference, &out)?,
    }));
    Ok(())
}

fn cmd_optimize(a: &OptimizeArgs, ctx: &mut Context) -> CliResult<()> {
    let l = load(&a.input)?;
    let spec = l.spec().clone();
    if spec.ndim() != 2 {
        return usage("optimize needs a 2-D landscape");
    }
    let interp = Interpolator::new(&l)?;
    let init = match &a.init {
        Some(p) if p.len() == 2 => p.clone(),
        Some(p) => return usage(format!("--init needs 2 coordinates, got {}", p.len())),
        None => random_point(&spec, a.seed.seed),
    };
    let kind = a.optimizer.kind(&spec);
    let mut obj = if a.minimize {
        InterpolatedObjective::minimize(&interp)
    } else {
        InterpolatedObjective::maximize(&interp)
    };
    let run = kind.run(&mut obj, &init)?;
    let mut report = json!({ "optimizer": kind.name(), "init": init, "run": run });
    if a.compare_live {
        let (Some(problem), Some(ansatz)) = (&l.meta.problem, l.meta.ansatz) else {
            return usage("--compare-live needs a landscape with problem and ansatz metadata");
        };
        if a.minimize {
            return usage("--compare-live optimizes the circuit cost, which is maximized");
        }
        let noise = l.meta.noise.unwrap_or_default();
        let mut live = CircuitObjective::new(problem, ansatz, noise, a.seed.seed)?;
        let live_run = kind.run(&mut live, &init)?;
        report["endpoint_distance"] = json!(endpoint_distance(&run, &live_run)?);
        report["live_run"] = serde_json::to_value(&live_run).map_err(Error::from)?;
    }
    if let Some(out) = &a.out {
        write_json_file(out, &report)?;
        ctx.manifest("optimize", Some(a.seed.seed), &[&a.input], &[out])?;
    }
    print_json(&report);
    Ok(())
}

fn cmd_init(a: &InitArgs, ctx: &mut Context) -> CliResult<()> {
    let seed = a.seed.seed;
    let (problem, ansatz, grid, noise) = a.circuit.resolve(seed)?;
    if grid.ndim() != 2 {
        return usage("init needs a 2-D grid (depth-1 QAOA)");
    }
    let kind = a.optimizer.kind(&grid);
    let res = oscar_init(&problem, &ansatz, &grid, &noise, a.fraction, &kind, &SolverConfig::default(), seed)?;
    let mut report = json!({
        "optimizer": kind.name(),
        "init_point": res.init_point,
        "queries": { "opt": res.opt_queries(), "recon": res.recon_queries, "total": res.total_queries() },
        "final_value": -res.live_run.final_value(),
        "converged": res.live_run.converged,
        "endpoint": res.live_run.endpoint,
    });
    if a.baseline {
        let init = random_point(&grid, seed);
        let mut live = CircuitObjective::new(&problem, ansatz, noise, seed)?;
        let run = kind.run(&mut live, &init)?;
        report["random_init"] = json!({
            "init_point": init,
            "queries": { "opt": run.query_count },
            "final_value": -run.final_value(),
            "converged": run.converged,
            "endpoint": run.endpoint,
        });
    }
    if let Some(out) = &a.out {
        write_json_file(out, &report)?;
        ctx.manifest("init", Some(seed), &[], &[out])?;
    }
    print_json(&report);
    Ok(())
}

fn cmd_dispatch(a: &DispatchArgs, ctx: &mut Context) -> CliResult<()> {
    let l = load(&a.input)?;
    let config = a.solver.config()?;
    let seed = a.seed.seed;
    let latency = match a.tail_mu {
        Some(mu) => LatencyModel::lognormal(a.base_latency, mu, a.tail_sigma, seed),
        None => LatencyModel::constant(a.base_latency),
    };
    latency.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if a.workers == 0 {
        return usage("--workers must be at least 1");
    }
    if let Some(t) = a.timeout {
        if !(t > 0.0) {
            return usage("--timeout must be positive");
        }
    }
    let jobs = sample_indices(l.len(), a.fraction, seed)?;
    let values = l.values();
    let report = dispatch(&jobs, &l.shape(), |i| Ok(values[i]), a.workers, &latency, a.timeout)?;
    write_json_file(&a.out, &report)?;
    let mut outputs: Vec<&Path> = vec![&a.out];
    let mut summary = json!({
        "requested": report.requested.len(),
        "completed": report.completed.len(),
        "timed_out": report.timed_out_indices.len(),
        "failed": report.failed.len(),
        "wall_time": report.wall_time,
        "per_worker_counts": report.per_worker_counts,
        "out": a.out,
    });
    if let Some(path) = &a.reconstruct {
        let rec = eager_reconstruct(&report, l.spec(), &config)?;
        landscape::save(&rec, path)?;
        summary["omitted_fraction"] = json!(report.omitted_fraction());
        summary["nrmse"] = json!(nrmse(&l, &rec)?);
        outputs.push(path);
    }
    ctx.manifest("dispatch", Some(seed), &[&a.input], &outputs)?;
    print_json(&summary);
    Ok(())
}
