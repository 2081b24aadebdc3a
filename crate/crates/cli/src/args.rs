use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "shearlet", version, about = "Shearlet group densities, transforms and frame diagnostics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    /// Whitespace-separated `a s t1 t2 w` lines (params only).
    Text,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for the compute modules [count]; all cores when absent
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Accept generator exponents with β ≤ 4α + 2
    #[arg(long, global = true)]
    pub allow_weak_beta: bool,
    /// key=value file, one pair per line, '#' comments; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Group algebra on elements written "a,s,t1,t2"
    Group(GroupArgs),
    /// Generate a windowed parameter set
    Params(ParamsArgs),
    /// Estimate upper and lower weighted densities over an h ladder
    Density(DensityArgs),
    /// Check the covering lattice: point location and box intersection counts
    Covering(CoveringArgs),
    /// Admissibility constants and, optionally, the generator-class check
    Admissibility(AdmissibilityArgs),
    /// Continuous shearlet transform at given group elements
    Transform(TransformArgs),
    /// Isometry identity of the continuous transform for a test function
    Isometry(IsometryArgs),
    /// Fit the spatial and frequency decay envelopes and check dominance
    Decay(DecayArgs),
    /// Truncated amalgam norm of the transform
    Amalgam(AmalgamArgs),
    /// Tail energies and weak-HAP distances over random base points
    Hap(HapArgs),
    /// Frame-bound estimates on a band-limited surrogate
    FrameBounds(FrameArgs),
    /// Witness against an upper frame bound from a crowded box
    Witness(WitnessArgs),
    /// Scatter data of a windowed parameter set
    PlotData(PlotArgs),
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Family: regular, oversampled-diagonal, oversampled-shear, coshearlet, tilde-regular
    #[arg(long, default_value = "regular")]
    pub family: String,
    /// Dilation base a > 1 [dimensionless]
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Shear step b > 0 [shear units]
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Translation step c > 0 [length]
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
    /// First diagonal oversampling entry r1 [dimensionless]
    #[arg(long, default_value_t = 1.0)]
    pub r1: f64,
    /// Second diagonal oversampling entry r2 [dimensionless]
    #[arg(long, default_value_t = 1.0)]
    pub r2: f64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Spatial decay exponent α > 3/2 [dimensionless]
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Frequency envelope exponent β > 4α + 2 [dimensionless]
    #[arg(long, default_value_t = 11.0)]
    pub beta: f64,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// Symmetric index window: j, k, m1, m2 all in [-N, N] [count]
    #[arg(long, default_value_t = 4)]
    pub window: i64,
    /// Scale index range "lo,hi", overriding --window [count]
    #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
    pub j_range: Option<Vec<i64>>,
    /// Shear index range "lo,hi" [count]
    #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
    pub k_range: Option<Vec<i64>>,
    /// First translation index range "lo,hi" [count]
    #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
    pub m1_range: Option<Vec<i64>>,
    /// Second translation index range "lo,hi" [count]
    #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
    pub m2_range: Option<Vec<i64>>,
}

#[derive(Debug, Args)]
pub struct SurrogateArgs {
    /// Half extent L of the torus [-L, L)² [length]
    #[arg(long, default_value_t = 2.0)]
    pub l: f64,
    /// Samples per axis of the torus [count]
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    /// Frequency band "xi1_min,xi1_max,xi2_max" [cycles per unit length]; command default when absent
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub band: Option<Vec<f64>>,
    /// Iteration cap of power and inverse iteration [count]
    #[arg(long, default_value_t = 5000)]
    pub max_iter: usize,
    /// Relative residual tolerance of the iterations [dimensionless]
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestFn {
    /// The generator itself
    Psi,
    /// Unit-norm one-sided bump on (1,2)×(-1,1)
    Bump,
    /// Bump on ±(0.6,2.4)×(-1.5,1.5)
    BumpMirrored,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Compose elements left to right, e.g. --compose 1,0,0,0 4,1,2,3
    #[arg(long, num_args = 2.., allow_negative_numbers = true)]
    pub compose: Option<Vec<String>>,
    /// Inverse of an element
    #[arg(long, allow_negative_numbers = true)]
    pub inverse: Option<String>,
    /// Element acting on a point; needs --x
    #[arg(long, allow_negative_numbers = true)]
    pub act: Option<String>,
    /// Point "x1,x2" [length]
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<String>,
    /// Image of an element in the alternative group law
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<String>,
    /// Haar volume of the box of size h [dimensionless]
    #[arg(long)]
    pub haar_volume: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub window: WindowArgs,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub window: WindowArgs,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Parameter set file ("a s t1 t2 w" lines) counted instead of the family
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Box sizes h [dimensionless]
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
    pub h: Vec<f64>,
    /// Random box centres per h [count]
    #[arg(long, default_value_t = 100)]
    pub centers: usize,
    /// Use centres (a^i, 0, 0), i in [-K, K], plus --centers random draws each [count]
    #[arg(long)]
    pub ladder_steps: Option<i64>,
    /// Random seed
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CoveringArgs {
    /// Box sizes h [dimensionless]
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    pub h: Vec<f64>,
    /// Enlargement factors r ≥ 1 [dimensionless]
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub r: Vec<f64>,
    /// Random points located per h [count]
    #[arg(long, default_value_t = 10000)]
    pub points: usize,
    /// Random boxes per (h, r) [count]
    #[arg(long, default_value_t = 1000)]
    pub boxes: usize,
    /// Random seed
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct AdmissibilityArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    /// Gauss-Legendre nodes per axis; the refinement uses twice as many [count]
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
    /// Also run the generator-class check (spatial decay and frequency envelope)
    #[arg(long)]
    pub b0: bool,
    /// Half extent of the generator rendering [length]
    #[arg(long, default_value_t = 32.0)]
    pub b0_l: f64,
    /// Samples per axis of the generator rendering [count]
    #[arg(long, default_value_t = 1024)]
    pub b0_n: usize,
    /// Exponent for the spatial fit; the generator's α when absent [dimensionless]
    #[arg(long)]
    pub b0_alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    /// Group elements "a,s,t1,t2", separated by ';' or repeated
    #[arg(long, value_delimiter = ';', required = true, allow_negative_numbers = true)]
    pub g: Vec<String>,
    /// Analysed function in closed form
    #[arg(long, value_enum, default_value = "psi")]
    pub f: TestFn,
    /// Sampled function (binary grid file) analysed instead of --f
    #[arg(long)]
    pub grid: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IsometryArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    #[arg(long, value_enum, default_value = "psi")]
    pub f: TestFn,
    /// Half extent of the rendering [length]
    #[arg(long, default_value_t = 8.0)]
    pub l: f64,
    /// Samples per axis of the rendering [count]
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    /// Gauss-Legendre nodes in ln a [count]
    #[arg(long, default_value_t = 64)]
    pub ln_a_nodes: usize,
    /// Gauss-Legendre nodes in s [count]
    #[arg(long, default_value_t = 64)]
    pub s_nodes: usize,
    /// Nodes per axis of the admissibility integrals [count]
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
}

#[derive(Debug, Args)]
pub struct DecayArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    /// Scale range "lo,hi" of the fitting grid [dimensionless]
    #[arg(long, value_delimiter = ',', num_args = 2, default_value = "0.25,4")]
    pub a_range: Vec<f64>,
    /// Shear range [-s_max, s_max] [shear units]
    #[arg(long, default_value_t = 2.0)]
    pub s_max: f64,
    /// Translation range [-t_max, t_max]² [length]
    #[arg(long, default_value_t = 4.0)]
    pub t_max: f64,
    /// Scale nodes [count]
    #[arg(long, default_value_t = 20)]
    pub n_a: usize,
    /// Shear nodes [count]
    #[arg(long, default_value_t = 20)]
    pub n_s: usize,
    /// Translation nodes per axis [count]
    #[arg(long, default_value_t = 10)]
    pub n_t: usize,
    /// Held-out random points for the dominance check [count]
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Random seed
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct AmalgamArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    #[arg(long, value_enum, default_value = "psi")]
    pub f: TestFn,
    /// Index radius of the truncation [count]
    #[arg(long, default_value_t = 8)]
    pub radius: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Span {
    Dual,
    Primal,
}

#[derive(Debug, Args)]
pub struct HapArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub gen: GenArgs,
    #[command(flatten)]
    pub surrogate: SurrogateArgs,
    #[arg(long, value_enum, default_value = "psi")]
    pub f: TestFn,
    /// Random base points p [count]
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Radii R [dimensionless]
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub r: Vec<f64>,
    /// Centre reach of the tail sum [length]
    #[arg(long, default_value_t = 32.0)]
    pub reach: f64,
    /// Width of the outer shell checked for leftover energy [length]
    #[arg(long, default_value_t = 2.0)]
    pub shell: f64,
    /// Largest accepted shell energy relative to ‖f‖²‖ψ‖² [dimensionless]
    #[arg(long, default_value_t = 1e-12)]
    pub floor: f64,
    /// Range of ln a for the base points [dimensionless]
    #[arg(long, value_delimiter = ',', num_args = 2, default_value = "-0.12,0.11", allow_negative_numbers = true)]
    pub ln_a_range: Vec<f64>,
    /// Range of s for the base points [shear units]
    #[arg(long, value_delimiter = ',', num_args = 2, default_value = "-0.2,0.2", allow_negative_numbers = true)]
    pub s_range: Vec<f64>,
    /// Range of both translations of the base points [length]
    #[arg(long, value_delimiter = ',', num_args = 2, default_value = "-2,2", allow_negative_numbers = true)]
    pub t_range: Vec<f64>,
    /// Skip the surrogate distances
    #[arg(long)]
    pub no_distance: bool,
    /// Span used for the distances
    #[arg(long, value_enum, default_value = "dual")]
    pub span: Span,
    /// Random seed
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FrameArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub gen: GenArgs,
    #[command(flatten)]
    pub surrogate: SurrogateArgs,
    /// Parameter set file used instead of the family
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Random test vectors for the Rayleigh quotients [count]
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// Random seed
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub gen: GenArgs,
    /// Box size h [dimensionless]
    #[arg(long, default_value_t = 0.5)]
    pub h: f64,
    /// Weighted count to reach [count]
    #[arg(long)]
    pub target: f64,
    /// Base element p of the box where |T(η, ·)| stays away from 0
    #[arg(long, default_value = "1,0,0,0", allow_negative_numbers = true)]
    pub p: String,
    /// Ladder steps x = a^-i, i = 0..=K [count]
    #[arg(long, default_value_t = 24)]
    pub max_steps: usize,
    /// Samples per axis for the infimum over the box [count]
    #[arg(long, default_value_t = 5)]
    pub samples_per_axis: usize,
}
