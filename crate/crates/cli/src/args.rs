use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use leapfrog_core::{canonicalize, CanonicalSetup, ModelParams, PhysicalState, ReducedState, Regime};

use crate::emit::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "leapfrog",
    version,
    about = "Coaxial vortex filament pairs: equilibria, leapfrogging verdicts, simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Equilibria and thresholds of the reduced system.
    Equilibria(ModelArgs),
    /// Leapfrogging verdict for an initial configuration.
    Classify(ModelArgs),
    /// Time series of the reduced system with reconstructed axial positions.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
    },
    /// Hamiltonian values and verdicts on a phase-plane grid.
    Portrait(PortraitArgs),
    /// Two parallel straight filaments: numerical against exact motion.
    Parallel(ParallelArgs),
    /// Filament-PDE right-hand side against the circle ODE.
    Pdecheck(PdeArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Same,
    Opposite,
}

/// Model inputs, either reduced (`--beta`/`--gamma`, `--d`, `--theta`, `--w`)
/// or physical (`--gamma1`, `--gamma2`, `--r1`, `--z1`, `--r2`, `--z2`).
#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,

    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    /// Strength ratio of a same-sign pair.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Strength ratio of an opposite-sign pair.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Scale of the radius invariant (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Axial separation z1 - z2 (default 0).
    #[arg(long, allow_negative_numbers = true)]
    pub w: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub gamma1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub z1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub z2: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct IntegrationArgs {
    #[arg(long, default_value_t = 100.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
}

#[derive(Args, Debug, Clone)]
pub struct PortraitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Samples as THETAxW.
    #[arg(long, default_value = "400x400")]
    pub grid: String,
    #[arg(long, allow_negative_numbers = true)]
    pub theta_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub w_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub w_max: Option<f64>,
    /// Where to write the JSON metadata of a CSV grid (default: next to
    /// `--output` with a `.meta.json` suffix).
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ParallelArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub gamma1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma2: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x2: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y2: f64,
    /// Final time (default: one rotation period, or 100 for a translating pair).
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StencilArg {
    Fourth,
    Spectral,
}

#[derive(Args, Debug, Clone)]
pub struct PdeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Samples per filament (even, at least 16).
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = StencilArg::Fourth)]
    pub stencil: StencilArg,
}

/// Model inputs after validation.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub params: ModelParams<f64>,
    pub state: Option<ReducedState<f64>>,
    /// Axial positions of the initial state, canonical frame.
    pub z0: (f64, f64),
    pub setup: Option<CanonicalSetup<f64>>,
}

/// Outcome of physical inputs whose invariant rules out leapfrogging.
#[derive(Debug, Clone)]
pub enum Inputs {
    Model(Resolved),
    Infeasible { d: f64 },
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::usage(message)
}

impl ModelArgs {
    fn physical_given(&self) -> bool {
        [self.gamma1, self.gamma2, self.r1, self.z1, self.r2, self.z2]
            .iter()
            .any(Option::is_some)
    }

    fn reduced_given(&self) -> bool {
        self.regime.is_some()
            || [self.beta, self.gamma, self.d, self.theta, self.w]
                .iter()
                .any(Option::is_some)
    }

    /// Validates the inputs; `need_state` requires an initial state.
    pub fn resolve(&self, need_state: bool) -> Result<Inputs, CliError> {
        match (self.physical_given(), self.reduced_given()) {
            (true, true) => Err(usage("give either reduced inputs (--beta/--gamma, --d, --theta, --w) or physical inputs (--gamma1, --gamma2, --r1, --z1, --r2, --z2), not both")),
            (false, false) => Err(usage("no model inputs given")),
            (true, false) => self.resolve_physical(),
            (false, true) => self.resolve_reduced(need_state).map(Inputs::Model),
        }
    }

    fn resolve_physical(&self) -> Result<Inputs, CliError> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| usage(format!("physical inputs need --{name}")));
        let phys = PhysicalState::new(
            need(self.r1, "r1")?,
            need(self.z1, "z1")?,
            need(self.r2, "r2")?,
            need(self.z2, "z2")?,
        );
        let (g1, g2) = (need(self.gamma1, "gamma1")?, need(self.gamma2, "gamma2")?);
        match canonicalize(g1, g2, phys, self.alpha) {
            Ok(setup) => Ok(Inputs::Model(Resolved {
                params: setup.params,
                state: Some(setup.reduced0),
                z0: (setup.phys0.z1, setup.phys0.z2),
                setup: Some(setup),
            })),
            Err(leapfrog_core::Error::InfeasibleInvariant { d }) => Ok(Inputs::Infeasible { d }),
            Err(e) => Err(e.into()),
        }
    }

    fn resolve_reduced(&self, need_state: bool) -> Result<Resolved, CliError> {
        let regime = match (self.regime, self.beta, self.gamma) {
            (_, Some(_), Some(_)) => return Err(usage("give only one of --beta and --gamma")),
            (Some(RegimeArg::Opposite), Some(_), None) => return Err(usage("--beta belongs to the same-sign regime")),
            (Some(RegimeArg::Same), None, Some(_)) => return Err(usage("--gamma belongs to the opposite-sign regime")),
            (_, Some(_), None) => Regime::SameSign,
            (_, None, Some(_)) => Regime::OppositeSign,
            (_, None, None) => return Err(usage("reduced inputs need --beta or --gamma")),
        };
        let ratio = self.beta.or(self.gamma).expect("checked above");
        let params = ModelParams::new(regime, self.alpha, ratio, self.d.unwrap_or(1.0))?;
        let state = match self.theta {
            Some(theta) => {
                let s = ReducedState::new(theta, self.w.unwrap_or(0.0));
                params.check_state(&s)?;
                Some(s)
            }
            None if need_state => return Err(usage("an initial state needs --theta (and optionally --w)")),
            None => None,
        };
        let w = state.map_or(0.0, |s| s.w);
        Ok(Resolved {
            params,
            state,
            z0: (w, 0.0),
            setup: None,
        })
    }
}

/// Parses `THETAxW` into sample counts.
pub fn parse_grid(spec: &str) -> Result<(usize, usize), CliError> {
    let bad = || usage(format!("--grid expects THETAxW with counts >= 2, got `{spec}`"));
    let (a, b) = spec.split_once(['x', 'X']).ok_or_else(bad)?;
    let n_theta: usize = a.trim().parse().map_err(|_| bad())?;
    let n_w: usize = b.trim().parse().map_err(|_| bad())?;
    if n_theta < 2 || n_w < 2 {
        return Err(bad());
    }
    Ok((n_theta, n_w))
}
