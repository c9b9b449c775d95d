use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use surface_modes_core::{Dimension, Medium, QuadOptions, SolverOptions};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "surface-modes",
    version,
    about = "Surface-localized transmission eigenmodes of the unit disk and ball"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transmission eigenvalues for each m in the range.
    Eigenvalues(CommonArgs),
    /// Interior-to-full L² ratios of w and v.
    Localize(CommonArgs),
    /// Bound checks over the (n, m, τ) grid.
    Verify(CommonArgs),
    /// Normalized |w| and |v| on a uniform radial grid, single m.
    Profile(ProfileArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Inclusive `a:b`, or a single `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MRange {
    pub min: u32,
    pub max: u32,
}

impl FromStr for MRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("invalid m value '{t}'"));
        match s.split_once(':') {
            Some((a, b)) => Ok(MRange { min: parse(a)?, max: parse(b)? }),
            None => {
                let m = parse(s)?;
                Ok(MRange { min: m, max: m })
            }
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Refractive contrast (comma list accepted by `verify`).
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub n: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub dim: u8,
    #[arg(long, default_value_t = 1)]
    pub s0: u32,
    /// Angular orders, `a:b` inclusive or a single value.
    #[arg(long, default_value = "20:80")]
    pub m: MRange,
    /// Inner radii, comma list in (0, 1).
    #[arg(long, value_delimiter = ',', default_value = "0.5", allow_negative_numbers = true)]
    pub tau: Vec<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Relative residual accepted by the root finder.
    #[arg(long)]
    pub tol_root: Option<f64>,
    /// Relative agreement accepted by the quadrature check.
    #[arg(long)]
    pub tol_quad: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: Vec<f64>,
    pub dim: Dimension,
    pub s0: u32,
    pub m_min: u32,
    pub m_max: u32,
    pub tau: Vec<f64>,
    pub tol_root: Option<f64>,
    pub tol_quad: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub samples: Option<usize>,
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self, CliError> {
        let dim = Dimension::from_u8(args.dim)
            .map_err(|_| CliError::Config(format!("--dim must be 2 or 3, got {}", args.dim)))?;
        if args.n.is_empty() {
            return Err(CliError::Config("--n needs at least one value".into()));
        }
        for &n in &args.n {
            Medium::new(n, dim).map_err(|e| CliError::Config(e.to_string()))?;
        }
        if args.s0 < 1 {
            return Err(CliError::Config("--s0 must be at least 1".into()));
        }
        if args.m.min < 1 || args.m.min > args.m.max {
            return Err(CliError::Config(format!("--m needs 1 <= a <= b, got {}:{}", args.m.min, args.m.max)));
        }
        if args.tau.is_empty() {
            return Err(CliError::Config("--tau needs at least one value".into()));
        }
        if let Some(t) = args.tau.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            return Err(CliError::Config(format!("each tau must lie in (0, 1), got {t}")));
        }
        for (flag, tol) in [("--tol-root", args.tol_root), ("--tol-quad", args.tol_quad)] {
            if let Some(t) = tol {
                if !(t > 0.0 && t < 1.0) {
                    return Err(CliError::Config(format!("{flag} must lie in (0, 1), got {t}")));
                }
            }
        }
        Ok(RunConfig {
            n: args.n.clone(),
            dim,
            s0: args.s0,
            m_min: args.m.min,
            m_max: args.m.max,
            tau: args.tau.clone(),
            tol_root: args.tol_root,
            tol_quad: args.tol_quad,
            format: args.format,
            out: args.out.clone(),
            samples: None,
        })
    }

    pub fn single_n(&self) -> Result<f64, CliError> {
        match self.n.as_slice() {
            [n] => Ok(*n),
            _ => Err(CliError::Config("this command takes a single --n value".into())),
        }
    }

    pub fn medium(&self, n: f64) -> Result<Medium, CliError> {
        Medium::new(n, self.dim).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn solver_options(&self) -> SolverOptions {
        let mut opts = SolverOptions::default();
        if let Some(t) = self.tol_root {
            opts.residual_tol = t;
        }
        opts
    }

    pub fn quad_options(&self) -> QuadOptions {
        let mut opts = QuadOptions::default();
        if let Some(t) = self.tol_quad {
            opts.rel_tol = t;
            opts.fail_tol = opts.fail_tol.max(100.0 * t);
        }
        opts
    }

    /// JSON echo of the configuration; the output path is left out so that
    /// identical runs written to different files are byte-identical.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("n".into(), json!(self.n));
        map.insert("dim".into(), json!(self.dim.as_u8()));
        map.insert("s0".into(), json!(self.s0));
        map.insert("m_min".into(), json!(self.m_min));
        map.insert("m_max".into(), json!(self.m_max));
        map.insert("tau".into(), json!(self.tau));
        map.insert("tol_root".into(), json!(self.tol_root));
        map.insert("tol_quad".into(), json!(self.tol_quad));
        if let Some(samples) = self.samples {
            map.insert("samples".into(), json!(samples));
        }
        map.insert("format".into(), json!(self.format.as_str()));
        Value::Object(map)
    }
}
