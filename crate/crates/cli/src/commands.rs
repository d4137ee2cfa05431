//! Subcommands and their exit-code contract.
//!
//! | code | meaning                                                   |
//! |------|-----------------------------------------------------------|
//! | 0    | success (for `verify`: the refit reproduced the model)    |
//! | 1    | I/O, parse, argument or integrity error                   |
//! | 2    | `craft`: no denial possible for this decoy                |
//! | 3    | `verify`: refit deviates from the model beyond tolerance  |

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use deniable_core::deniability::{
    adversary_recover, craft_denial, deniability_check, entropy_per_record, run_trial, verify_denial, Attribute,
    DistributionSpec, ExperimentConfig, TrialOutcome, DEFAULT_RESOLUTION,
};
use deniable_core::models::serialized_bit_length;
use deniable_core::rng::{self, label};
use deniable_core::{LinearRegression, ParamModel};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::certificate::{self, Variant, VerificationJson};
use crate::csv_io;
use crate::dist::parse_distribution;
use crate::error::{CliError, Result};
use crate::model_file::ModelFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_DENIAL: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

const SEED_ENV: &str = "DENIABLE_FIT_SEED";

#[derive(Debug, Parser)]
#[command(name = "deniable-fit", version, about = "Craft and verify deniable retraining of fitted models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a denial certificate for a model and a decoy dataset.
    Craft(CraftArgs),
    /// Retrain a certificate's decoy under its crafted norm and compare.
    Verify(VerifyArgs),
    /// Evaluate the entropy bound `n > k / H`.
    Bound(BoundArgs),
    /// Run the seeded regression denial experiment.
    Experiment(ExperimentArgs),
    /// Produce two different datasets with the same least-squares fit.
    Adversary(AdversaryArgs),
}

#[derive(Debug, Args)]
pub struct CraftArgs {
    /// Model file (JSON with `kind` and `params`).
    #[arg(long)]
    pub model: PathBuf,
    /// Decoy dataset CSV.
    #[arg(long)]
    pub decoy: PathBuf,
    #[arg(long, env = SEED_ENV)]
    pub seed: u64,
    /// Certificate output path.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "euclidean")]
    pub variant: Variant,
    /// Craft for the mean-absolute-error form (forces the one-norm variant).
    #[arg(long)]
    pub mae: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub certificate: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Largest accepted per-coordinate deviation from the model parameters.
    #[arg(long, default_value_t = 5e-3)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Model size in bits.
    #[arg(long, conflicts_with = "param_dim", required_unless_present = "param_dim")]
    pub k_bits: Option<u64>,
    /// Derive the model size from a parameter count instead.
    #[arg(long)]
    pub param_dim: Option<usize>,
    /// Entropy per record in bits.
    #[arg(long, conflicts_with = "dist", required_unless_present = "dist")]
    pub entropy_bits: Option<f64>,
    /// Record distribution, e.g. `du:1:8 × 10, exp:5`.
    #[arg(long)]
    pub dist: Option<String>,
    /// Quantization step for continuous attributes.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: f64,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value_t = 6)]
    pub d: usize,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, env = SEED_ENV)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
    #[arg(long, default_value_t = 5e-3)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value = "euclidean")]
    pub variant: Variant,
    /// Also write per-trial results as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AdversaryArgs {
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, env = SEED_ENV)]
    pub seed: u64,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::io("stdout", e))
}

fn fmt_vec(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", items.join(", "))
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Craft(a) => craft(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Bound(a) => bound(a, out),
        Command::Experiment(a) => experiment(a, out),
        Command::Adversary(a) => adversary(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = match &e {
                CliError::Core(deniable_core::Error::ZeroResidual { .. })
                | CliError::Core(deniable_core::Error::RankConditionViolated { .. }) => EXIT_NO_DENIAL,
                _ => EXIT_ERROR,
            };
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

fn craft(args: CraftArgs, out: &mut dyn Write) -> Result<i32> {
    let model_file = ModelFile::parse(&read(&args.model)?)?;
    let decoy = csv_io::read_dataset(read(&args.decoy)?.as_bytes())?;
    let variant = if args.mae { Variant::OneNorm } else { args.variant };
    let cert = craft_denial(&model_file.model(), &model_file.params, &decoy, args.seed, variant.into())?;
    write_file(&args.out, &certificate::to_json(&cert)?)?;
    emit(out, &format!("wrote {} ({} norm(s), seed {})\n", args.out.display(), cert.norms.len(), args.seed))?;
    Ok(EXIT_OK)
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let cert = certificate::from_json(&read(&args.certificate)?)?;
    let model_file = ModelFile::parse(&read(&args.model)?)?;
    let model = model_file.model();
    if cert.model.kind != model.kind() || cert.model.param_dim != model.param_dim() {
        return Err(CliError::format(format!(
            "certificate is for a {} model with {} parameters",
            cert.model.kind, cert.model.param_dim
        )));
    }
    let report = verify_denial(&cert, &model, &model_file.params, args.tolerance)?;
    let json = serde_json::to_string_pretty(&VerificationJson::new(&report, args.tolerance))?;
    emit(out, &format!("{json}\n"))?;
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[derive(Serialize)]
struct BoundJson {
    k_bits: u64,
    entropy_per_record_bits: f64,
    n: u64,
    threshold: f64,
    deniable: bool,
    /// Present when continuous attributes were quantized to count bits.
    #[serde(skip_serializing_if = "Option::is_none")]
    quantization_resolution: Option<f64>,
}

fn bound(args: BoundArgs, out: &mut dyn Write) -> Result<i32> {
    let k_bits = match (args.k_bits, args.param_dim) {
        (Some(k), _) => k,
        (None, Some(d)) => serialized_bit_length(&vec![0.0; d]),
        (None, None) => return Err(CliError::format("need --k-bits or --param-dim")),
    };
    let (h, quantized) = match (args.entropy_bits, &args.dist) {
        (Some(h), _) => (h, false),
        (None, Some(text)) => {
            let spec = parse_distribution(text)?;
            let continuous = spec.attributes.iter().any(|a| !matches!(a, Attribute::DiscreteUniform { .. }));
            (entropy_per_record(&spec, args.resolution)?, continuous)
        }
        (None, None) => return Err(CliError::format("need --entropy-bits or --dist")),
    };
    let report = deniability_check(k_bits, h, args.n)?;
    let json = BoundJson {
        k_bits: report.k_bits,
        entropy_per_record_bits: report.entropy_per_record_bits,
        n: report.n,
        threshold: report.threshold,
        deniable: report.deniable,
        quantization_resolution: quantized.then_some(args.resolution),
    };
    emit(out, &format!("{}\n", serde_json::to_string_pretty(&json)?))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TrialJson {
    trial: u64,
    seed: u64,
    p_star: Vec<f64>,
    refit: Vec<f64>,
    max_abs_diff: f64,
    passed: bool,
    decoy_attempts: usize,
}

fn experiment(args: ExperimentArgs, out: &mut dyn Write) -> Result<i32> {
    if args.d < 1 || args.trials == 0 {
        return Err(CliError::format("need --d ≥ 1 and --trials ≥ 1"));
    }
    let config = ExperimentConfig {
        param_dim: args.d,
        records: args.n,
        tolerance: args.tolerance,
        inner: args.variant.into(),
        ..ExperimentConfig::default()
    };
    let outcomes: Vec<TrialOutcome> = (0..args.trials)
        .into_par_iter()
        .map(|i| run_trial(&config, rng::trial_seed(args.seed, i)))
        .collect::<std::result::Result<_, _>>()?;

    let mut text = String::new();
    let _ = writeln!(text, "{:>5}  {:>20}  {:>12}  {:>6}  {:>6}", "trial", "seed", "max_abs_diff", "passed", "decoys");
    for (i, o) in outcomes.iter().enumerate() {
        let v = &o.verification;
        let _ = writeln!(
            text,
            "{:>5}  {:>20}  {:>12.3e}  {:>6}  {:>6}",
            i,
            o.seed,
            v.max_abs_diff,
            if v.passed { "yes" } else { "no" },
            o.decoy_attempts
        );
    }
    let passed = outcomes.iter().filter(|o| o.verification.passed).count();
    let _ = writeln!(
        text,
        "pass rate: {passed}/{} ({:.3}) at tolerance {:e}",
        outcomes.len(),
        passed as f64 / outcomes.len() as f64,
        args.tolerance
    );
    let first = &outcomes[0];
    let _ = writeln!(text, "\ntrial 0: model parameters vs refit on decoy data");
    let _ = writeln!(text, "{:>12}  {:>12}", "p*", "refit");
    for (a, b) in first.p_star.iter().zip(&first.verification.refit.params) {
        let _ = writeln!(text, "{a:>12.5}  {b:>12.5}");
    }
    emit(out, &text)?;

    if let Some(path) = &args.out {
        let rows: Vec<TrialJson> = outcomes
            .iter()
            .enumerate()
            .map(|(i, o)| TrialJson {
                trial: i as u64,
                seed: o.seed,
                p_star: o.p_star.clone(),
                refit: o.verification.refit.params.clone(),
                max_abs_diff: o.verification.max_abs_diff,
                passed: o.verification.passed,
                decoy_attempts: o.decoy_attempts,
            })
            .collect();
        write_file(path, &format!("{}\n", serde_json::to_string_pretty(&rows)?))?;
    }
    Ok(EXIT_OK)
}

fn adversary(args: AdversaryArgs, out: &mut dyn Write) -> Result<i32> {
    let model = LinearRegression::with_param_dim(args.d)?;
    let mut prng = rng::stream(args.seed, label::MODEL);
    let p_star: Vec<f64> = (0..args.d).map(|_| prng.random_range(-6.0..6.0)).collect();
    let inputs = DistributionSpec::repeat(Attribute::DiscreteUniform { lo: 1, hi: 8 }, args.d - 1);
    let demo = adversary_recover(&model, &p_star, &inputs, args.n, args.seed)?;

    let mut text = format!("p*: {}\n", fmt_vec(&p_star));
    for (idx, (data, refit)) in demo.datasets.iter().zip(&demo.refits).enumerate() {
        let mut csv = Vec::new();
        csv_io::write_dataset(&mut csv, data)?;
        let diff = refit.params.iter().zip(&p_star).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let _ = write!(text, "\ndataset {}:\n{}", idx + 1, String::from_utf8_lossy(&csv));
        let _ = writeln!(text, "refit {}: {}  max_abs_diff {:.3e}", idx + 1, fmt_vec(&refit.params), diff);
    }
    let differing = demo.datasets[0]
        .inputs()
        .as_slice()
        .iter()
        .zip(demo.datasets[1].inputs().as_slice())
        .filter(|(a, b)| a != b)
        .count();
    let _ = writeln!(text, "\ninput entries that differ: {differing}");
    emit(out, &text)?;
    Ok(EXIT_OK)
}
