//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use wavecomplex_core::complexity::ComplexityReport;
use wavecomplex_core::denoise::{denoise_signal, residual_energy_density, DenoiseConfig, ESTIMATOR};
use wavecomplex_core::dwt::{forward, Wavelet};
use wavecomplex_core::hmt::{fit, FitConfig};
use wavecomplex_core::orchestrate::{SelectionConfig, SweepConfig};
use wavecomplex_core::signalgen::{add_wgn, logistic_series, lorenz_series, LorenzComponent, LorenzConfig};
use wavecomplex_core::Signal;

use crate::config::ConfigFile;
use crate::error::CliError;
use crate::formats::{self, DenoiseSidecar, ModelFile};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "wavecomplex", version, about = "Wavelet-tree statistical complexity of time series")]
pub struct Cli {
    /// Settings file of `key = value` lines; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a logistic-map or Lorenz series (optionally with white noise) as CSV.
    Generate(GenerateArgs),
    /// Fit the hidden Markov tree to a signal and write the model as JSON.
    Fit(FitArgs),
    /// Complexity report for a saved model or a freshly fitted signal.
    Complexity(ComplexityArgs),
    /// Remove white noise of known variance.
    Denoise(DenoiseArgs),
    /// Rank wavelets by the complexity of their fitted trees.
    Select(SelectArgs),
    /// Complexity and entropy rate of logistic orbits over a range of r.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Logistic,
    Lorenz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Component {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Comma-separated wavelet names, or `all`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletList(pub Vec<Wavelet>);

impl FromStr for WaveletList {
    type Err = wavecomplex_core::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(WaveletList(Wavelet::ALL.to_vec()));
        }
        s.split(',').map(|w| w.trim().parse()).collect::<Result<_, _>>().map(WaveletList)
    }
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file (stdout when omitted).
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitFlags {
    /// Relative log-likelihood change that stops EM.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Hidden states per node.
    #[arg(long)]
    pub states: Option<usize>,
    /// Variance floor relative to each scale's mean squared coefficient.
    #[arg(long)]
    pub variance_floor: Option<f64>,
    /// Pin all state means to zero.
    #[arg(long)]
    pub zero_mean: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Signal CSV (first column).
    #[arg(long, short, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Use only the first 2^levels samples.
    #[arg(long)]
    pub levels: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub source: Source,
    /// Logistic parameter.
    #[arg(long)]
    pub r: Option<f64>,
    /// Logistic starting point.
    #[arg(long)]
    pub x0: Option<f64>,
    /// Samples kept.
    #[arg(long)]
    pub n: Option<usize>,
    /// Iterates (or integration steps) discarded first.
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long, value_enum)]
    pub component: Option<Component>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Variance of added white Gaussian noise (none by default).
    #[arg(long)]
    pub noise_var: Option<f64>,
    /// Noise seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, short)]
    pub wavelet: Option<Wavelet>,
    #[command(flatten)]
    pub fit: FitFlags,
    /// Also write the coefficient tree as JSON.
    #[arg(long, value_name = "FILE")]
    pub tree_out: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    /// Saved model; when absent the signal given by --input is fitted.
    #[arg(long, short, value_name = "FILE", conflicts_with = "input")]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, short)]
    pub wavelet: Option<Wavelet>,
    #[command(flatten)]
    pub fit: FitFlags,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, short)]
    pub wavelet: Option<Wavelet>,
    /// Known noise variance.
    #[arg(long)]
    pub noise_var: Option<f64>,
    /// Clean reference; enables the residual energy in the sidecar.
    #[arg(long, value_name = "FILE")]
    pub clean: Option<PathBuf>,
    /// Sidecar JSON path (defaults to the output path with a .json extension,
    /// or stderr when writing to stdout).
    #[arg(long, value_name = "FILE")]
    pub meta: Option<PathBuf>,
    #[command(flatten)]
    pub fit: FitFlags,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Candidates: comma-separated names or `all`.
    #[arg(long)]
    pub wavelets: Option<WaveletList>,
    #[arg(long, value_name = "FILE")]
    pub clean: Option<PathBuf>,
    /// Noise variance assumed by the denoiser when --clean is given.
    #[arg(long)]
    pub noise_var: Option<f64>,
    #[command(flatten)]
    pub fit: FitFlags,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub rmin: Option<f64>,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Evaluate a single r instead of a range.
    #[arg(long, conflicts_with_all = ["rmin", "rmax", "step"])]
    pub r: Option<f64>,
    #[arg(long, short)]
    pub wavelet: Option<Wavelet>,
    /// Series length is 2^levels.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub x0: Option<f64>,
    #[command(flatten)]
    pub fit: FitFlags,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("run `wavecomplex --help` for usage");
            }
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let conf = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::Generate(a) => generate(a, &conf),
        Command::Fit(a) => fit_cmd(a, &conf),
        Command::Complexity(a) => complexity_cmd(a, &conf),
        Command::Denoise(a) => denoise_cmd(a, &conf),
        Command::Select(a) => select_cmd(a, &conf),
        Command::Sweep(a) => sweep_cmd(a, &conf),
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))
}

fn fit_config(f: &FitFlags, conf: &ConfigFile, base: &FitConfig) -> Result<FitConfig, CliError> {
    let cfg = FitConfig {
        states: conf.pick(f.states, "states", base.states)?,
        max_iter: conf.pick(f.max_iter, "max-iter", base.max_iter)?,
        rel_tol: conf.pick(f.tol, "tol", base.rel_tol)?,
        restarts: conf.pick(f.restarts, "restarts", base.restarts)?,
        variance_floor: conf.pick(f.variance_floor, "variance-floor", base.variance_floor)?,
        zero_mean: conf.switch(f.zero_mean, "zero-mean")? || base.zero_mean,
        seed: conf.pick(f.seed, "seed", base.seed)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn load_signal(path: &Path, levels: Option<usize>, what: &str) -> Result<Signal, CliError> {
    let samples = formats::read_signal(open(path)?).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })?;
    let n = samples.len();
    let signal = Signal::new(samples)?;
    let signal = match levels {
        Some(j) => {
            let want = 1usize.checked_shl(j as u32).filter(|_| (2..31).contains(&j));
            match want {
                Some(want) if want <= n => Signal::new(signal.into_inner()[..want].to_vec())?,
                _ => return Err(CliError::Usage(format!("--levels {j} needs 2^{j} samples, {what} has {n}"))),
            }
        }
        None => signal,
    };
    if signal.dyadic_levels().is_ok() {
        return Ok(signal);
    }
    let trimmed = signal.truncate_dyadic().map_err(|_| CliError::Input(format!("{what} is too short ({n} samples)")))?;
    eprintln!("warning: {what} has {n} samples; using the first {}", trimmed.len());
    Ok(trimmed)
}

fn input_signal(a: &InputArgs, conf: &ConfigFile) -> Result<Signal, CliError> {
    let path = match &a.input {
        Some(p) => p.clone(),
        None => conf.get::<PathBuf>("input")?.ok_or_else(|| CliError::Usage("--input is required".into()))?,
    };
    let levels = match a.levels {
        Some(j) => Some(j),
        None => conf.get("levels")?,
    };
    load_signal(&path, levels, "input")
}

fn wavelet(flag: Option<Wavelet>, conf: &ConfigFile) -> Result<Wavelet, CliError> {
    match flag {
        Some(w) => Ok(w),
        None => conf.get::<Wavelet>("wavelet")?.ok_or_else(|| CliError::Usage("--wavelet is required".into())),
    }
}

fn generate(a: &GenerateArgs, conf: &ConfigFile) -> Result<(), CliError> {
    let clean = match a.source {
        Source::Logistic => {
            let r = conf.pick(a.r, "r", 4.0)?;
            let x0 = conf.pick(a.x0, "x0", 0.4)?;
            let n = conf.pick(a.n, "n", 4096)?;
            let burn_in = conf.pick(a.burn_in, "burn-in", 1000)?;
            logistic_series(r, x0, n, burn_in)?
        }
        Source::Lorenz => {
            let d = LorenzConfig::default();
            let cfg = LorenzConfig {
                sigma: conf.pick(a.sigma, "sigma", d.sigma)?,
                rho: conf.pick(a.rho, "rho", d.rho)?,
                beta: conf.pick(a.beta, "beta", d.beta)?,
                dt: conf.pick(a.dt, "dt", d.dt)?,
                burn_in: conf.pick(a.burn_in, "burn-in", d.burn_in)?,
                n: conf.pick(a.n, "n", d.n)?,
                ..d
            };
            let component = match a.component {
                Some(c) => c,
                None => match conf.raw("component") {
                    Some(v) => Component::from_str(v, true).map_err(|e| CliError::Usage(format!("config `component`: {e}")))?,
                    None => Component::Y,
                },
            };
            let component = match component {
                Component::X => LorenzComponent::X,
                Component::Y => LorenzComponent::Y,
                Component::Z => LorenzComponent::Z,
            };
            lorenz_series(&cfg, component)?
        }
    };
    let noise_var = conf.pick(a.noise_var, "noise-var", 0.0)?;
    let seed = conf.pick(a.seed, "seed", 0)?;
    let signal = add_wgn(&clean, noise_var, seed)?;
    formats::write_signal(sink(a.out.out.as_deref())?, signal.samples())?;
    Ok(())
}

fn fit_cmd(a: &FitArgs, conf: &ConfigFile) -> Result<(), CliError> {
    let signal = input_signal(&a.input, conf)?;
    let w = wavelet(a.wavelet, conf)?;
    let cfg = fit_config(&a.fit, conf, &FitConfig::default())?;
    let tree = forward(&signal, &w.bank())?;
    if let Some(p) = &a.tree_out {
        formats::write_tree(sink(Some(p))?, &tree)?;
    }
    let fitted = fit(&tree, &cfg)?;
    let mut out = sink(a.out.out.as_deref())?;
    formats::write_model(&mut out, &ModelFile::new(&fitted, Some(w), &cfg))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn complexity_cmd(a: &ComplexityArgs, conf: &ConfigFile) -> Result<(), CliError> {
    let model_path = match &a.model {
        Some(p) => Some(p.clone()),
        None if a.input.input.is_none() => conf.get::<PathBuf>("model")?,
        None => None,
    };
    let (w, params) = match model_path {
        Some(p) => {
            let m = formats::read_model(open(&p)?)?;
            (a.wavelet.or(m.config.wavelet), m.params)
        }
        None => {
            let signal = input_signal(&a.input, conf)?;
            let w = wavelet(a.wavelet, conf)?;
            let cfg = fit_config(&a.fit, conf, &FitConfig::default())?;
            (Some(w), fit(&forward(&signal, &w.bank())?, &cfg)?.params)
        }
    };
    let report = ComplexityReport::from_params(&params);
    let mut out = sink(a.out.out.as_deref())?;
    match a.format {
        ReportFormat::Json => {
            formats::write_report_json(&mut out, w, &report)?;
            writeln!(out)?;
        }
        ReportFormat::Csv => formats::write_report_csv(&mut out, w, &report)?,
    }
    out.flush()?;
    Ok(())
}

fn denoise_cmd(a: &DenoiseArgs, conf: &ConfigFile) -> Result<(), CliError> {
    let signal = input_signal(&a.input, conf)?;
    let w = wavelet(a.wavelet, conf)?;
    let cfg = DenoiseConfig {
        noise_variance: conf.pick(a.noise_var, "noise-var", 1.0)?,
        fit: fit_config(&a.fit, conf, &FitConfig::default())?,
    };
    let clean = match a.clean.clone().map_or_else(|| conf.get::<PathBuf>("clean"), |p| Ok(Some(p)))? {
        Some(p) => {
            let c = load_signal(&p, None, "clean reference")?;
            if c.len() != signal.len() {
                return Err(CliError::Input(format!("clean reference has {} samples, input {}", c.len(), signal.len())));
            }
            Some(c)
        }
        None => None,
    };
    let den = denoise_signal(&signal, &w.bank(), &cfg)?;
    let residual = clean.as_ref().map(|c| residual_energy_density(&den.signal, c)).transpose()?;
    let sidecar = DenoiseSidecar {
        wavelet: w,
        noise_variance: cfg.noise_variance,
        residual_energy_density: residual,
        global_c_norm: ComplexityReport::from_params(&den.fit.params).global_c_norm,
        estimator: ESTIMATOR.to_string(),
    };
    formats::write_signal(sink(a.out.out.as_deref())?, den.signal.samples())?;
    let meta = a.meta.clone().or_else(|| a.out.out.as_ref().map(|p| p.with_extension("json")));
    match meta {
        Some(p) => {
            let mut f = sink(Some(&p))?;
            serde_json::to_writer_pretty(&mut f, &sidecar)?;
            writeln!(f)?;
            f.flush()?;
        }
        None => eprintln!("{}", serde_json::to_string(&sidecar)?),
    }
    Ok(())
}

fn select_cmd(a: &SelectArgs, conf: &ConfigFile) -> Result<(), CliError> {
    let signal = input_signal(&a.input, conf)?;
    let candidates = conf.pick(a.wavelets.clone(), "wavelets", WaveletList(Wavelet::ALL.to_vec()))?;
    let clean = match a.clean.clone().map_or_else(|| conf.get::<PathBuf>("clean"), |p| Ok(Some(p)))? {
        Some(p) => Some(load_signal(&p, Some(signal.dyadic_levels()?), "clean reference")?),
        None => None,
    };
    let cfg = SelectionConfig {
        fit: fit_config(&a.fit, conf, &FitConfig::default())?,
        noise_variance: conf.pick(a.noise_var, "noise-var", 1.0)?,
    };
    let pool = parallel::thread_pool()?;
    let sel = parallel::select(&pool, &signal, &candidates.0, &cfg, clean.as_ref())?;
    formats::write_selection_csv(sink(a.out.out.as_deref())?, &sel)?;
    let failed = sel.rows.iter().filter(|r| !r.status.is_ok()).count();
    if sel.winner.is_none() {
        return Err(CliError::Numerical("every candidate failed to fit".into()));
    }
    if failed > 0 {
        eprintln!("warning: {failed} candidate(s) failed; see the status column");
    }
    Ok(())
}

fn sweep_cmd(a: &SweepArgs, conf: &ConfigFile) -> Result<(), CliError> {
    let d = SweepConfig::default();
    let cfg = SweepConfig {
        wavelet: conf.pick(a.wavelet, "wavelet", d.wavelet)?,
        levels: conf.pick(a.levels, "levels", d.levels)?,
        burn_in: conf.pick(a.burn_in, "burn-in", d.burn_in)?,
        x0: conf.pick(a.x0, "x0", d.x0)?,
        fit: fit_config(&a.fit, conf, &d.fit)?,
    };
    if !(2..31).contains(&cfg.levels) {
        return Err(CliError::Usage(format!("--levels must be in 2..31, got {}", cfg.levels)));
    }
    let (rmin, rmax, step) = match conf.pick(a.r, "r", f64::NAN)? {
        r if !r.is_nan() => (r, r, 1.0),
        _ => (
            conf.pick(a.rmin, "rmin", 2.8)?,
            conf.pick(a.rmax, "rmax", 4.0)?,
            conf.pick(a.step, "step", 0.001)?,
        ),
    };
    let pool = parallel::thread_pool()?;
    let rows = if rmin == rmax {
        if !(0.0..=4.0).contains(&rmin) {
            return Err(CliError::Usage(format!("r must lie in [0, 4], got {rmin}")));
        }
        vec![wavecomplex_core::orchestrate::sweep_point(rmin, &cfg)]
    } else {
        parallel::sweep(&pool, rmin, rmax, step, &cfg)?
    };
    formats::write_sweep_csv(sink(a.out.out.as_deref())?, &rows)?;
    let failed = rows.iter().filter(|r| !r.status.is_ok()).count();
    if failed == rows.len() {
        return Err(CliError::Numerical("every sweep row failed".into()));
    }
    if failed > 0 {
        eprintln!("warning: {failed} of {} rows failed; see the status column", rows.len());
    }
    Ok(())
}
