//! Command-line front end: inspect, spectra, filter, generate, train, bench.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use hodgenet::complex::{hodge_laplacians, verify_chain_property, SimplicialComplex};
use hodgenet::data::{
    fig1_complex, load_complex, load_features, load_trajectories, save_complex, save_features, save_trajectories,
    synth_citation_like, synth_trajectories, Scale, TrajectoryDataset,
};
use hodgenet::nn::{Activation, Architecture, Mode};
use hodgenet::train::{
    benchmark, train_classification, train_imputation, BenchConfig, ClassificationMetrics, OrderMetrics, Task,
    TrainConfig,
};
use hodgenet::tsp::{sft_basis, spatial_filter, spectral_filter, FilterSpec};
use hodgenet::{Cochain, Error};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DIMENSION: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hodgenet", version, about = "Simplicial signal processing and simplicial neural networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-order counts, Laplacian sparsity and the chain-property check.
    Inspect {
        complex: Option<PathBuf>,
        /// Inspect a built-in complex instead of a file.
        #[arg(long, value_enum, conflicts_with = "complex")]
        synthetic: Option<Builtin>,
    },
    /// Eigenvalues of the Hodge Laplacians as CSV.
    Spectra {
        complex: PathBuf,
        /// Only this order (default: every order).
        #[arg(long, short)]
        order: Option<usize>,
        /// Output CSV (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Filter a feature file over the spectrum of its Hodge Laplacian.
    Filter {
        complex: PathBuf,
        features: PathBuf,
        #[arg(long, value_enum, default_value = "identity")]
        preset: FilterPreset,
        /// Eigenvalue cutoff for the low/high presets.
        #[arg(long, default_value_t = 1e-6)]
        cutoff: f64,
        /// Polynomial tap weights w_0,w_1,... applied as Σ w_j L^j x (overrides --preset).
        #[arg(long, value_delimiter = ',')]
        coeffs: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic dataset as JSON files.
    Generate {
        #[arg(long, value_enum)]
        kind: GenerateKind,
        #[arg(long, default_value = "small")]
        scale: Scale,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train over repeated seeds and write summary.json, loss.csv, timing.json and manifest.json.
    Train(TrainArgs),
    /// Time forward plus backward passes of several architectures on the same data.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Builtin {
    Fig1,
    Tiny,
    Small,
    Paper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FilterPreset {
    Identity,
    Low,
    High,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GenerateKind {
    Citation,
    Trajectories,
}

/// Where training data comes from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
pub struct DataArgs {
    /// Generate data instead of loading it: citation-like complex for imputation,
    /// punctured mesh trajectories for classification.
    #[arg(long)]
    pub synthetic: Option<Scale>,
    #[arg(long)]
    pub data_seed: Option<u64>,
    #[arg(long)]
    pub complex: Option<PathBuf>,
    /// Feature files, one per order.
    #[arg(long, num_args = 1..)]
    pub features: Vec<PathBuf>,
    #[arg(long)]
    pub trajectories: Option<PathBuf>,
}

impl DataArgs {
    fn overlay(&mut self, flags: &DataArgs) {
        if flags.synthetic.is_some() || flags.complex.is_some() {
            *self = DataArgs {
                data_seed: flags.data_seed.or(self.data_seed),
                ..flags.clone()
            };
        } else if flags.data_seed.is_some() {
            self.data_seed = flags.data_seed;
        }
        if !flags.features.is_empty() {
            self.features = flags.features.clone();
        }
        if flags.trajectories.is_some() {
            self.trajectories = flags.trajectories.clone();
        }
    }

    fn paths(&self) -> Vec<PathBuf> {
        self.complex
            .iter()
            .chain(&self.features)
            .chain(&self.trajectories)
            .cloned()
            .collect()
    }
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// JSON training config, or a manifest.json from an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_parser = parse_task)]
    pub task: Option<Task>,
    #[arg(long)]
    pub arch: Option<Architecture>,
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long)]
    pub filters: Option<usize>,
    #[arg(long, value_parser = parse_activation)]
    pub activation: Option<Activation>,
    #[arg(long)]
    pub missing_rate: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Use the j = 0 Laplacian taps (reference SNN/SCNN parameterization).
    #[arg(long)]
    pub zero_taps: Option<bool>,
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<usize>>,
    #[command(flatten)]
    pub data: DataArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// JSON bench config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub archs: Option<Vec<Architecture>>,
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long)]
    pub filters: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub warmup: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// Write bench.json and manifest.json here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub data: DataArgs,
}

fn parse_json_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_task(s: &str) -> Result<Task, String> {
    parse_json_str(s)
}

fn parse_activation(s: &str) -> Result<Activation, String> {
    parse_json_str(s)
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    parse_json_str(s)
}

/// A failed command: message and exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::RateOutOfRange(_) | Error::InvalidConfig(_) | Error::OrderOutOfRange { .. } => EXIT_USAGE,
            Error::Parse { .. }
            | Error::SchemaVersionMismatch { .. }
            | Error::DuplicateSimplex { .. }
            | Error::DuplicateVertex { .. }
            | Error::WrongCardinality { .. }
            | Error::EmptyComplex => EXIT_PARSE,
            Error::DimensionMismatch(_) => EXIT_DIMENSION,
            _ => EXIT_RUNTIME,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_RUNTIME,
        message: format!("{}: {e}", path.display()),
    }
}

type CliResult<T = ()> = Result<T, Failure>;

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Inspect { complex, synthetic } => inspect(complex.as_deref(), synthetic),
        Command::Spectra { complex, order, out } => spectra(&complex, order, out.as_deref()),
        Command::Filter {
            complex,
            features,
            preset,
            cutoff,
            coeffs,
            out,
        } => filter(&complex, &features, preset, cutoff, coeffs, &out),
        Command::Generate { kind, scale, seed, out } => generate(kind, scale, seed, &out),
        Command::Train(args) => train(args),
        Command::Bench(args) => bench(args),
    }
}

fn write_file(path: &Path, text: &str) -> CliResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn inspect_report(complex: &SimplicialComplex) -> Result<String, Error> {
    let mut out = String::new();
    let counts = complex.counts();
    let line: Vec<String> = counts.iter().enumerate().map(|(k, n)| format!("N_{k}={n}")).collect();
    let chain = verify_chain_property(complex)?;
    let max = chain.iter().map(|c| c.max_abs).max().unwrap_or(0);
    writeln!(out, "{}, chain max |entry| = {max}", line.join(" ")).unwrap();
    if complex.inserted_faces() > 0 {
        writeln!(out, "faces added by closure: {}", complex.inserted_faces()).unwrap();
    }
    for c in &chain {
        writeln!(out, "B_{} B_{}: max |entry| = {}", c.k, c.k + 1, c.max_abs).unwrap();
    }
    for k in 0..=complex.order() {
        let t = hodge_laplacians(complex, k)?;
        let n = t.size().max(1) as f64;
        let density = |nnz: usize| nnz as f64 / (n * n);
        let part = |m: &Option<hodgenet::complex::CsrMatrix<f64>>| match m {
            Some(m) => format!("nnz {} ({:.4})", m.nnz(), density(m.nnz())),
            None => "absent".to_string(),
        };
        writeln!(
            out,
            "L_{k}: nnz {} (density {:.4}); lower {}; upper {}",
            t.full.nnz(),
            density(t.full.nnz()),
            part(&t.lower),
            part(&t.upper)
        )
        .unwrap();
    }
    Ok(out)
}

fn inspect(path: Option<&Path>, builtin: Option<Builtin>) -> CliResult {
    let complex = match (path, builtin) {
        (Some(p), _) => load_complex(p)?,
        (None, Some(Builtin::Fig1)) => fig1_complex(),
        (None, Some(Builtin::Tiny)) => synth_citation_like(0, Scale::Tiny)?.0,
        (None, Some(Builtin::Small)) => synth_citation_like(0, Scale::Small)?.0,
        (None, Some(Builtin::Paper)) => synth_citation_like(0, Scale::Paper)?.0,
        (None, None) => return Err(usage("inspect needs a complex file or --synthetic")),
    };
    print!("{}", inspect_report(&complex)?);
    Ok(())
}

pub fn spectra_csv(complex: &SimplicialComplex, order: Option<usize>) -> Result<String, Error> {
    let orders: Vec<usize> = match order {
        Some(k) => vec![k],
        None => (0..=complex.order()).collect(),
    };
    let mut out = String::from("order,index,eigenvalue\n");
    for k in orders {
        let t = hodge_laplacians(complex, k)?;
        let basis = sft_basis(&t.full)?;
        for (i, l) in basis.eigenvalues.iter().enumerate() {
            writeln!(out, "{k},{i},{l}").unwrap();
        }
    }
    Ok(out)
}

fn spectra(path: &Path, order: Option<usize>, out: Option<&Path>) -> CliResult {
    let complex = load_complex(path)?;
    let csv = spectra_csv(&complex, order)?;
    match out {
        Some(p) => write_file(p, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn filter(
    complex: &Path,
    features: &Path,
    preset: FilterPreset,
    cutoff: f64,
    coeffs: Option<Vec<f64>>,
    out: &Path,
) -> CliResult {
    let complex = load_complex(complex)?;
    let x = load_features(features)?;
    let t = hodge_laplacians(&complex, x.order)?;
    let y = match (coeffs, preset) {
        (Some(w), _) => spatial_filter(&t, &w, &x)?,
        (None, FilterPreset::Identity) => spatial_filter(&t, &[1.0], &x)?,
        (None, FilterPreset::Low) => spectral_filter(&t.full, &FilterSpec::low_pass(cutoff), &x)?,
        (None, FilterPreset::High) => spectral_filter(&t.full, &FilterSpec::high_pass(cutoff), &x)?,
    };
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    }
    save_features(&y, out)?;
    Ok(())
}

fn trajectory_counts(scale: Scale) -> (usize, usize) {
    match scale {
        Scale::Tiny => (40, 10),
        Scale::Small => (80, 20),
        Scale::Paper => (160, 40),
    }
}

fn generate(kind: GenerateKind, scale: Scale, seed: u64, out: &Path) -> CliResult {
    std::fs::create_dir_all(out).map_err(|e| io_failure(out, e))?;
    match kind {
        GenerateKind::Citation => {
            let (complex, features) = synth_citation_like(seed, scale)?;
            save_complex(&complex, out.join("complex.json"))?;
            for x in &features {
                save_features(x, out.join(format!("features_{}.json", x.order)))?;
            }
        }
        GenerateKind::Trajectories => {
            let (n_train, n_test) = trajectory_counts(scale);
            let (mesh, data) = synth_trajectories(seed, n_train, n_test)?;
            save_complex(&mesh, out.join("complex.json"))?;
            save_trajectories(&data, out.join("trajectories.json"))?;
        }
    }
    Ok(())
}

/// Inputs as hashed in the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputHash {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to rerun a command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub command: String,
    pub config: serde_json::Value,
    pub data: DataArgs,
    pub seed: u64,
    pub inputs: Vec<InputHash>,
    pub outputs: Vec<PathBuf>,
}

fn hash_inputs(data: &DataArgs) -> CliResult<Vec<InputHash>> {
    data.paths()
        .into_iter()
        .map(|path| {
            let bytes = std::fs::read(&path).map_err(|e| Failure::from(Error::parse(path.display().to_string(), e)))?;
            Ok(InputHash {
                sha256: hex::encode(Sha256::digest(&bytes)),
                path,
            })
        })
        .collect()
}

/// Reads `path` as either a bare config or a manifest carrying one.
fn read_config<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<(T, Option<DataArgs>)> {
    let ctx = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Failure::from(Error::parse(&ctx, e)))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::from(Error::parse(&ctx, e)))?;
    let (config, data) = match serde_json::from_value::<Manifest>(value.clone()) {
        Ok(m) => (m.config, Some(m.data)),
        Err(_) => (value, None),
    };
    let config = serde_json::from_value(config).map_err(|e| Failure::from(Error::parse(&ctx, e)))?;
    Ok((config, data))
}

pub fn resolve_train(args: &TrainArgs) -> CliResult<(TrainConfig, DataArgs)> {
    let (mut cfg, mut data) = match &args.config {
        Some(p) => {
            let (c, d) = read_config::<TrainConfig>(p)?;
            (c, d.unwrap_or_default())
        }
        None => (TrainConfig::default(), DataArgs::default()),
    };
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = args.$field.clone() {
                cfg.$field = v;
            }
        )*};
    }
    set!(task, arch, layers, filters, activation, missing_rate, seed, repeats, iterations, lr, batch_size, zero_taps);
    if let Some(o) = &args.orders {
        cfg.orders = Some(o.clone());
    }
    data.overlay(&args.data);
    cfg.validate()?;
    Ok((cfg, data))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len().max(1) as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        MeanStd { mean, std: var.sqrt() }
    }
}

#[derive(Debug, Serialize)]
struct OrderSummary {
    order: usize,
    parameters: usize,
    accuracy: MeanStd,
    accuracy_all: MeanStd,
    baseline_accuracy: MeanStd,
    baseline_accuracy_all: MeanStd,
    final_loss: MeanStd,
}

#[derive(Debug, Serialize)]
struct ImputeSummary {
    task: Task,
    arch: Architecture,
    repeats: usize,
    parameters: usize,
    orders: Vec<OrderSummary>,
}

#[derive(Debug, Serialize)]
struct ClassifySummary {
    task: Task,
    arch: Architecture,
    repeats: usize,
    parameters: usize,
    test_accuracy: MeanStd,
    train_accuracy: MeanStd,
    final_loss: MeanStd,
}

#[derive(Debug, Serialize)]
struct Timing {
    /// Forward plus backward seconds per repeat, summed over orders.
    seconds: Vec<f64>,
    mean: MeanStd,
}

fn load_citation(data: &DataArgs) -> CliResult<(SimplicialComplex, Vec<Cochain>)> {
    match (&data.synthetic, &data.complex) {
        (Some(scale), _) => Ok(synth_citation_like(data.data_seed.unwrap_or(0), *scale)?),
        (None, Some(c)) => {
            if data.features.is_empty() {
                return Err(usage("imputation needs --features"));
            }
            let complex = load_complex(c)?;
            let features = data.features.iter().map(load_features).collect::<Result<Vec<_>, _>>()?;
            Ok((complex, features))
        }
        (None, None) => Err(usage("no data: pass --synthetic SCALE or --complex with --features")),
    }
}

fn load_flows(data: &DataArgs) -> CliResult<(SimplicialComplex, TrajectoryDataset)> {
    match (&data.synthetic, &data.complex, &data.trajectories) {
        (Some(scale), _, _) => {
            let (n_train, n_test) = trajectory_counts(*scale);
            Ok(synth_trajectories(data.data_seed.unwrap_or(0), n_train, n_test)?)
        }
        (None, Some(c), Some(t)) => Ok((load_complex(c)?, load_trajectories(t)?)),
        _ => Err(usage("no data: pass --synthetic SCALE or --complex with --trajectories")),
    }
}

fn train(args: TrainArgs) -> CliResult {
    let (cfg, data) = resolve_train(&args)?;
    let inputs = hash_inputs(&data)?;
    let out = &args.out;
    let mut loss_csv = String::from("repeat,order,iteration,loss\n");
    let mut seconds = Vec::with_capacity(cfg.repeats);
    let summary = match cfg.task {
        Task::Impute => {
            let (complex, features) = load_citation(&data)?;
            let runs: Vec<Vec<OrderMetrics>> = (0..cfg.repeats)
                .map(|r| train_imputation(&complex, &features, &cfg, r))
                .collect::<Result<_, _>>()?;
            for (r, run) in runs.iter().enumerate() {
                seconds.push(run.iter().map(|m| m.seconds).sum());
                for m in run {
                    for (i, l) in m.losses.iter().enumerate() {
                        writeln!(loss_csv, "{r},{},{i},{l}", m.order).unwrap();
                    }
                }
            }
            let orders: Vec<OrderSummary> = (0..runs[0].len())
                .map(|j| {
                    let col = |f: &dyn Fn(&OrderMetrics) -> f64| MeanStd::of(&runs.iter().map(|run| f(&run[j])).collect::<Vec<_>>());
                    OrderSummary {
                        order: runs[0][j].order,
                        parameters: runs[0][j].parameters,
                        accuracy: col(&|m| m.accuracy),
                        accuracy_all: col(&|m| m.accuracy_all),
                        baseline_accuracy: col(&|m| m.baseline_accuracy),
                        baseline_accuracy_all: col(&|m| m.baseline_accuracy_all),
                        final_loss: col(&|m| m.losses.last().copied().unwrap_or(f64::NAN)),
                    }
                })
                .collect();
            to_json(&ImputeSummary {
                task: cfg.task,
                arch: cfg.arch,
                repeats: cfg.repeats,
                parameters: orders.iter().map(|o| o.parameters).sum(),
                orders,
            })
        }
        Task::Classify => {
            let (mesh, flows) = load_flows(&data)?;
            let runs: Vec<ClassificationMetrics> = (0..cfg.repeats)
                .map(|r| train_classification(&mesh, &flows, &cfg, r))
                .collect::<Result<_, _>>()?;
            for (r, m) in runs.iter().enumerate() {
                seconds.push(m.seconds);
                for (i, l) in m.losses.iter().enumerate() {
                    writeln!(loss_csv, "{r},1,{i},{l}").unwrap();
                }
            }
            let col = |f: &dyn Fn(&ClassificationMetrics) -> f64| MeanStd::of(&runs.iter().map(f).collect::<Vec<_>>());
            to_json(&ClassifySummary {
                task: cfg.task,
                arch: cfg.arch,
                repeats: cfg.repeats,
                parameters: runs[0].parameters,
                test_accuracy: col(&|m| m.test_accuracy),
                train_accuracy: col(&|m| m.train_accuracy),
                final_loss: col(&|m| m.losses.last().copied().unwrap_or(f64::NAN)),
            })
        }
    };
    let outputs = ["summary.json", "loss.csv", "timing.json", "manifest.json"].map(|f| out.join(f));
    write_file(&outputs[0], &summary)?;
    write_file(&outputs[1], &loss_csv)?;
    write_file(
        &outputs[2],
        &to_json(&Timing {
            mean: MeanStd::of(&seconds),
            seconds,
        }),
    )?;
    let manifest = Manifest {
        command: "train".into(),
        config: serde_json::to_value(&cfg).expect("config serializes"),
        data,
        seed: cfg.seed,
        inputs,
        outputs: outputs.to_vec(),
    };
    write_file(&outputs[3], &to_json(&manifest))?;
    println!("{}", summary.trim_end());
    Ok(())
}

fn bench(args: BenchArgs) -> CliResult {
    let (mut cfg, mut data) = match &args.config {
        Some(p) => {
            let (c, d) = read_config::<BenchConfig>(p)?;
            (c, d.unwrap_or_default())
        }
        None => (BenchConfig::default(), DataArgs::default()),
    };
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = args.$field.clone() {
                cfg.$field = v;
            }
        )*};
    }
    set!(archs, layers, filters, iterations, warmup, seed, mode);
    data.overlay(&args.data);
    if data.synthetic.is_none() && data.complex.is_none() {
        data.synthetic = Some(Scale::Small);
    }
    cfg.validate()?;
    let inputs = hash_inputs(&data)?;
    let (complex, features) = load_citation(&data)?;
    let report = benchmark(&complex, &features, &cfg)?;

    println!("arch      seconds    s/iter     params  reference  r_k per order and layer");
    for t in &report.timings {
        let sat: Vec<String> = t
            .saturation
            .iter()
            .map(|s| s.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join("/"))
            .collect();
        println!(
            "{:<9} {:<10.4} {:<10.5} {:<7} {:<10} {}",
            t.arch.name(),
            t.seconds,
            t.seconds_per_iteration,
            t.parameters,
            t.reference_parameters.map_or("-".into(), |p| p.to_string()),
            if sat.iter().all(|s| s.is_empty()) { "-".into() } else { sat.join(" ") }
        );
    }
    if let Some(r) = report.biscnn_over_scnn {
        println!("Bi-SCNN / SCNN time ratio: {r:.3} (published: 21.21 s / 365.92 s = 0.058)");
    }
    if let Some(out) = &args.out {
        let files = [out.join("bench.json"), out.join("manifest.json")];
        write_file(&files[0], &to_json(&report))?;
        let manifest = Manifest {
            command: "bench".into(),
            config: serde_json::to_value(&cfg).expect("config serializes"),
            data,
            seed: cfg.seed,
            inputs,
            outputs: files.to_vec(),
        };
        write_file(&files[1], &to_json(&manifest))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("hodgenet").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_config_values() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(&cfg, r#"{"arch": "scnn", "filters": 12, "iterations": 5}"#).unwrap();
        let cli = parse(&["train", "--config", cfg.to_str().unwrap(), "--filters", "7", "--out", "x", "--synthetic", "tiny"]);
        let Command::Train(args) = cli.command else { panic!() };
        let (c, data) = resolve_train(&args).unwrap();
        assert_eq!((c.arch, c.filters, c.iterations), (Architecture::Scnn, 7, 5));
        assert_eq!(data.synthetic, Some(Scale::Tiny));
    }

    #[test]
    fn bad_rate_is_a_usage_error() {
        let cli = parse(&["train", "--missing-rate", "1.5", "--out", "x", "--synthetic", "tiny"]);
        let Command::Train(args) = cli.command else { panic!() };
        assert_eq!(resolve_train(&args).unwrap_err().code, EXIT_USAGE);
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::dims("x")).code, EXIT_DIMENSION);
        assert_eq!(Failure::from(Error::Parse { context: "f".into(), message: "m".into() }).code, EXIT_PARSE);
        let training = Error::Training {
            order: 2,
            source: Box::new(Error::EmptyMask),
        };
        let f = Failure::from(training);
        assert_eq!(f.code, EXIT_RUNTIME);
        assert!(f.message.contains("order 2"));
    }

    #[test]
    fn activation_names() {
        assert_eq!(parse_activation("lr").unwrap(), Activation::LeakyRelu);
        assert_eq!(parse_activation("id").unwrap(), Activation::Identity);
        assert!(parse_activation("relu").is_err());
    }

    #[test]
    fn filled_triangle_report() {
        let t = SimplicialComplex::build(&[vec![], vec![], vec![vec![0, 1, 2]]]).unwrap();
        let report = inspect_report(&t).unwrap();
        assert!(report.starts_with("N_0=3 N_1=3 N_2=1, chain max |entry| = 0"), "{report}");
        let csv = spectra_csv(&t, Some(1)).unwrap();
        let eig: Vec<f64> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
        assert_eq!(eig.len(), 3);
        assert!(eig.iter().all(|l| (l - 3.0).abs() < 1e-10));
    }

    #[test]
    fn mean_std_is_population() {
        let m = MeanStd::of(&[1.0, 3.0]);
        assert_eq!((m.mean, m.std), (2.0, 1.0));
    }
}
