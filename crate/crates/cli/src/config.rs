use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Enumerate,
    Stats,
    Measure,
    Kernel,
    Spectrum,
    Separation,
    Limit,
    Sample,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Eigen,
    Recurrence,
    Bruteforce,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    /// K_n = P_d P_u, down to n-1 and back up.
    DownUp,
    /// DU_n, up to n+1 and back down.
    UpDown,
    /// P_u from size n-1 to n.
    Up,
    /// P_d from size n to n-1.
    Down,
    /// Growth counts G from size n to n+1.
    Growth,
    /// Pruning counts P from size n to n-1.
    Pruning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    /// A run of the down-up chain.
    Trajectory,
    /// Monte Carlo estimate of P(T > r) for the geometric sum.
    Geometric,
}

/// Exact computations on random rooted trees and the down-up chain.
#[derive(Clone, Debug, Parser)]
#[command(name = "treemix", version)]
pub struct RunConfig {
    pub command: Command,

    /// Tree size.
    #[arg(long)]
    pub n: Option<usize>,

    /// Largest number of steps on a separation curve; the threshold r for
    /// `sample --kind geometric`.
    #[arg(long = "r-max")]
    pub r_max: Option<u64>,

    /// Time scale for `limit`, steps = c n^2.
    #[arg(long)]
    pub c: Option<f64>,

    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = RouteArg::Eigen)]
    pub route: RouteArg,

    /// Write to this file instead of stdout.
    #[arg(long = "output")]
    pub output_path: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Series truncation tolerance for `limit`.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,

    #[arg(long, value_enum, default_value_t = KernelKind::DownUp)]
    pub kernel: KernelKind,

    #[arg(long = "kind", value_enum, default_value_t = SampleKind::Trajectory)]
    pub sample_kind: SampleKind,

    /// Steps for `sample --kind trajectory`.
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,

    /// A tree as a balanced parenthesis string: the subject of `stats`, or
    /// the start state of a trajectory (default: the path).
    #[arg(long)]
    pub tree: Option<String>,

    /// `enumerate`: print T_1..T_n from the counting recursion instead of
    /// listing trees.
    #[arg(long = "count-only")]
    pub count_only: bool,

    /// `separation --route eigen`: evaluate in floating point, for large n.
    #[arg(long)]
    pub float: bool,
}

impl RunConfig {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command.to_possible_value().map(|v| v.get_name().to_owned()),
            "n": self.n,
            "r_max": self.r_max,
            "c": self.c,
            "samples": self.samples,
            "seed": self.seed,
            "route": self.route.to_possible_value().map(|v| v.get_name().to_owned()),
            "output_path": self.output_path.as_ref().map(|p| p.display().to_string()),
            "format": self.format.to_possible_value().map(|v| v.get_name().to_owned()),
            "tol": self.tol,
            "kernel": self.kernel.to_possible_value().map(|v| v.get_name().to_owned()),
            "kind": self.sample_kind.to_possible_value().map(|v| v.get_name().to_owned()),
            "steps": self.steps,
            "tree": self.tree,
            "count_only": self.count_only,
            "float": self.float,
        })
    }
}

/// Size caps per kind of work. `TREEMIX_MAX_N` raises every cap to its
/// value; results past the defaults are unsupported.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub enumeration: usize,
    pub kernel: usize,
    pub count: usize,
    pub exact_curve: usize,
    pub float_curve: usize,
}

impl Caps {
    pub const DEFAULT: Caps = Caps {
        enumeration: treemix_core::tree::ENUMERATION_CAP,
        kernel: 12,
        count: 200,
        exact_curve: 64,
        float_curve: 100_000,
    };

    pub fn from_env() -> Caps {
        let raised = std::env::var("TREEMIX_MAX_N")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok());
        match raised {
            Some(m) => {
                let d = Caps::DEFAULT;
                Caps {
                    enumeration: d.enumeration.max(m),
                    kernel: d.kernel.max(m),
                    count: d.count.max(m),
                    exact_curve: d.exact_curve.max(m),
                    float_curve: d.float_curve.max(m),
                }
            }
            None => Caps::DEFAULT,
        }
    }
}
