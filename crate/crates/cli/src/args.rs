use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rydpol_core::io::ParamsSpec;
use rydpol_core::OpticsPreset;
use serde::{Deserialize, Serialize};

/// Dressed-spectrum, EIT, and polarization-inversion runs for RF-dressed Rydberg atoms.
///
/// Every run writes its outputs and a `<command>.manifest.json` into `--out`;
/// `rydpol replay <manifest>` reproduces them byte for byte.
/// `RYDPOL_THREADS` caps the worker threads.
#[derive(Debug, Parser)]
#[command(name = "rydpol", version)]
pub struct Cli {
    /// Directory for output files; created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// Read and write angles in degrees instead of radians.
    #[arg(long, global = true)]
    pub degrees: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalue spectrogram of the coupling matrix over the phase angle.
    Spectrogram(SpectrogramArgs),
    /// Outer and inner envelope curves over the phase angle.
    Envelopes(EnvelopesArgs),
    /// Steady-state EIT spectrogram.
    Eit(EitArgs),
    /// Phase angle from one or more spectrum files.
    Invert(InvertArgs),
    /// Forward-simulate and invert over a set of phase angles.
    Roundtrip(RoundtripArgs),
    /// Exact Wigner 3-j or 6-j symbol.
    Wigner(WignerArgs),
    /// Re-run the job recorded in a manifest.
    Replay(ReplayArgs),
    /// Print one of the shipped JSON schemas.
    Schema(SchemaArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ClassArgs {
    /// Twice the lower-level angular momentum J.
    #[arg(long = "J2", allow_negative_numbers = true)]
    pub j2: i32,
    /// Transition branch: J' = J + |p|, with -1, 0, or 1.
    #[arg(long, allow_negative_numbers = true)]
    pub p: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeMode {
    Exact,
    Approx,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnvelopeChoice {
    Exact,
    Approx,
    Numeric,
    All,
}

#[derive(Debug, Args)]
pub struct SpectrogramArgs {
    #[command(flatten)]
    pub class: ClassArgs,
    /// Number of phase angles over [0, 2pi], both ends included.
    #[arg(long, default_value_t = 361)]
    pub phi_steps: usize,
    /// Absolute tolerance for counting degenerate eigenvalues.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Also write envelope columns: closed forms (3/2 classes) or numeric (any class).
    #[arg(long, value_enum)]
    pub envelopes: Option<EnvelopeMode>,
}

#[derive(Debug, Args)]
pub struct EnvelopesArgs {
    /// Twice J; the closed forms exist for J2 = 3 only.
    #[arg(long = "J2", default_value_t = 3, allow_negative_numbers = true)]
    pub j2: i32,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub p: i32,
    #[arg(long, default_value_t = 361)]
    pub phi_steps: usize,
    #[arg(long, value_enum, default_value_t = EnvelopeChoice::All)]
    pub kind: EnvelopeChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpticsArg {
    Standard,
    RotatedCircular,
}

impl From<OpticsArg> for OpticsPreset {
    fn from(o: OpticsArg) -> Self {
        match o {
            OpticsArg::Standard => OpticsPreset::Standard,
            OpticsArg::RotatedCircular => OpticsPreset::RotatedCircular,
        }
    }
}

/// Simulator rates and fields; unset flags keep the scenario or default values.
#[derive(Debug, Clone, Copy, Args)]
pub struct PhysicsArgs {
    /// Probe Rabi frequency (MHz).
    #[arg(long)]
    pub omega_probe: Option<f64>,
    /// Coupling Rabi frequency (MHz).
    #[arg(long)]
    pub omega_coupling: Option<f64>,
    /// RF Rabi scale (MHz).
    #[arg(long)]
    pub omega_rf: Option<f64>,
    /// Intermediate-level decay rate (MHz).
    #[arg(long)]
    pub gamma_i: Option<f64>,
    /// Rydberg decoherence rate (MHz).
    #[arg(long)]
    pub gamma_r: Option<f64>,
    /// Probe detuning (MHz).
    #[arg(long, allow_negative_numbers = true)]
    pub delta_probe: Option<f64>,
}

impl PhysicsArgs {
    pub fn spec(&self) -> ParamsSpec {
        ParamsSpec {
            omega_probe_mhz: self.omega_probe,
            omega_coupling_mhz: self.omega_coupling,
            omega_rf_mhz: self.omega_rf,
            gamma_i_mhz: self.gamma_i,
            gamma_r_mhz: self.gamma_r,
            delta_probe_mhz: self.delta_probe,
        }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct DetuningArgs {
    /// Lower end of the coupling-detuning grid (MHz).
    #[arg(long, allow_negative_numbers = true)]
    pub detuning_min: Option<f64>,
    /// Upper end of the coupling-detuning grid (MHz).
    #[arg(long, allow_negative_numbers = true)]
    pub detuning_max: Option<f64>,
    /// Points in the coupling-detuning grid.
    #[arg(long)]
    pub detuning_points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EitArgs {
    /// Scenario JSON; without it, --J2 and --p are required.
    #[arg(long, conflicts_with_all = ["j2", "p"])]
    pub scenario: Option<PathBuf>,
    #[arg(long = "J2", allow_negative_numbers = true, requires = "p")]
    pub j2: Option<i32>,
    #[arg(long, allow_negative_numbers = true, requires = "j2")]
    pub p: Option<i32>,
    #[arg(long, value_enum)]
    pub optics: Option<OpticsArg>,
    /// Add the fine-structure partner of the laser-coupled level this many MHz above it.
    #[arg(long)]
    pub third_level: Option<f64>,
    #[arg(long)]
    pub phi_steps: Option<usize>,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub detuning: DetuningArgs,
    /// Also write a spectrum file (the `invert` input format) at each of these angles.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub spectrum_at: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelArg {
    /// Closed-form inverse of the approximate envelope ratio.
    ClosedForm,
    /// Bisection on the exact envelope ratio.
    Exact,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// Spectrum JSON files; the first sets the ratio, each one prunes.
    #[arg(required = true)]
    pub spectra: Vec<PathBuf>,
    /// Scenario JSON supplying the simulator parameters for calibration.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, value_enum, default_value_t = KernelArg::ClosedForm)]
    pub kernel: KernelArg,
    /// Slack on the ratio range: absolute for 1/2^0, relative for 3/2^+-.
    #[arg(long, default_value_t = 0.05)]
    pub range_tol: f64,
    /// Dead band as a fraction of the calibrated gap between strong and weak central peaks.
    #[arg(long, default_value_t = 0.1)]
    pub dead_band_fraction: f64,
    /// Fixed central-peak share threshold instead of a calibrated one.
    #[arg(long, requires = "dead_band")]
    pub central_threshold: Option<f64>,
    /// Half-width of the no-decision band around --central-threshold.
    #[arg(long, requires = "central_threshold")]
    pub dead_band: Option<f64>,
    /// Peak prominence floor as a fraction of the first spectrum's maximum (default 1e-4); raise it for noisy data.
    /// Merge and centre tolerances then come from the first spectrum's grid.
    #[arg(long)]
    pub min_prominence: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForwardArg {
    Eigen,
    Eit,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    #[command(flatten)]
    pub class: ClassArgs,
    /// Phase angles to test, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "phi_steps")]
    pub phi: Vec<f64>,
    /// Number of phase angles k * 2pi / N, when --phi is not given.
    #[arg(long, default_value_t = 36)]
    pub phi_steps: usize,
    #[arg(long, value_enum, default_value_t = ForwardArg::Eigen)]
    pub forward: ForwardArg,
    /// Optical configurations in order, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "standard")]
    pub optics: Vec<OpticsArg>,
    #[arg(long, value_enum, default_value_t = KernelArg::ClosedForm)]
    pub kernel: KernelArg,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub detuning: DetuningArgs,
    /// Gaussian noise on simulated EIT spectra, as a fraction of each spectrum's maximum.
    #[arg(long, requires = "seed")]
    pub noise: Option<f64>,
    /// Seed for --noise.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum SymbolKind {
    #[value(name = "3j")]
    #[serde(rename = "3j")]
    ThreeJ,
    #[value(name = "6j")]
    #[serde(rename = "6j")]
    SixJ,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    pub symbol: SymbolKind,
    /// Six half-integers such as `3/2 1 1/2 -1/2 0 1/2`: (j1 j2 j3 m1 m2 m3) or {j1 j2 j3; j4 j5 j6}.
    #[arg(num_args = 6, allow_hyphen_values = true, required = true)]
    pub values: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemaName {
    Manifest,
    Scenario,
    Spectrum,
    Spectrogram,
    Envelopes,
    Eit,
    Report,
    Roundtrip,
    Wigner,
}

#[derive(Debug, Args)]
pub struct SchemaArgs {
    #[arg(value_enum)]
    pub name: SchemaName,
}
