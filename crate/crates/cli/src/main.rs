mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use murphy_toric::io::SCHEMA_VERSION;

#[derive(Parser, Debug)]
#[command(name = "murphy-toric", about = "Blown-up toric fans, rank-three toric bundles and incidence schemes")]
#[command(disable_version_flag = true, subcommand_required = false, arg_required_else_help = true)]
pub struct Cli {
    /// Print the JSON schema version and exit.
    #[arg(short = 'V', long)]
    version: bool,

    /// Worker threads for parallel stages (defaults to all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build, refine and test fans.
    #[command(subcommand)]
    Fan(FanCmd),
    /// The fans Σ_n, their Chern data and moduli equations.
    #[command(subcommand)]
    Murphy(MurphyCmd),
    /// Torus-invariant divisors.
    #[command(subcommand)]
    Divisor(DivisorCmd),
    /// Filtrations of rank-r toric bundles.
    #[command(subcommand)]
    Bundle(BundleCmd),
    /// Point/line configurations over prime fields.
    #[command(subcommand)]
    Incidence(IncidenceCmd),
}

#[derive(Subcommand, Debug)]
pub enum FanCmd {
    /// Build a fan from rays and maximal cones, or the fan of P^n.
    Build {
        /// Rays as "x,y,..;x,y,..".
        #[arg(long, requires = "cones", conflicts_with = "projective")]
        rays: Option<String>,
        /// Maximal cones as ray index lists "0,1;1,2".
        #[arg(long)]
        cones: Option<String>,
        /// Build the fan of projective n-space.
        #[arg(long)]
        projective: Option<usize>,
    },
    /// Star-subdivide the cone spanned by the given rays.
    Subdivide {
        #[arg(long)]
        fan: PathBuf,
        /// Ray indices "0,1,2".
        #[arg(long)]
        cone: String,
    },
    /// Check that the cones form a fan.
    Validate {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Check that every maximal cone is unimodular.
    Smooth {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Check that the support is the whole space.
    Complete {
        #[arg(long)]
        fan: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Enumeration strategy.
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Cap on search nodes visited.
    #[arg(long, default_value_t = 200_000_000)]
    budget: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyArg {
    Auto,
    Backtrack,
    Brute,
}

#[derive(Subcommand, Debug)]
pub enum MurphyCmd {
    /// Build Σ_n.
    Fan {
        #[arg(long)]
        n: usize,
        /// Keep the cone table implicit.
        #[arg(long)]
        lazy: bool,
    },
    /// Chern datum of an incidence datum, validated on Σ_n.
    Chern {
        #[arg(long)]
        incidence: PathBuf,
        /// Use the implicit fan and sample adjacent cone pairs.
        #[arg(long)]
        lazy: bool,
        /// Adjacent pairs to sample on the implicit fan.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compile the moduli rank conditions.
    Equations {
        #[arg(long)]
        incidence: PathBuf,
        #[arg(long)]
        allow_degenerate: bool,
    },
    /// Compare solutions of the moduli conditions with C_I over F_p.
    Verify {
        #[arg(long)]
        incidence: PathBuf,
        #[arg(long)]
        field: String,
        /// Also write the report here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        allow_degenerate: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check that no cone of Σ_n holds three original rays.
    Audit {
        #[arg(long)]
        incidence: PathBuf,
        #[arg(long)]
        allow_degenerate: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum DivisorCmd {
    /// Decide whether a divisor is Cartier and give its local characters.
    Cartier {
        #[arg(long)]
        fan: PathBuf,
        /// Coefficients on the rays, "1,0,0".
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Class group as free rank and torsion.
    Classgroup {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Evaluate the support function of a Cartier divisor at a point.
    Support {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Rational coordinates, "1/2,-3".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum BundleCmd {
    /// Run the compatibility check and recover characters per cone.
    #[command(group(clap::ArgGroup::new("source").required(true).args(["filtration", "config"])))]
    CheckCompat {
        /// Fan of an explicit filtration.
        #[arg(long, requires = "filtration")]
        fan: Option<PathBuf>,
        #[arg(long)]
        filtration: Option<PathBuf>,
        /// A configuration realizing the incidence datum; its forced
        /// filtrations on Σ_n are checked against the rule datum.
        #[arg(long, requires = "incidence")]
        config: Option<PathBuf>,
        #[arg(long)]
        incidence: Option<PathBuf>,
    },
    /// Dimensions of a ray's filtration under a Chern datum.
    Signature {
        #[arg(long)]
        chern: PathBuf,
        /// Fan of an explicit datum.
        #[arg(long, conflicts_with = "n")]
        fan: Option<PathBuf>,
        /// Σ_n for a rule datum; defaults to the one the datum needs.
        #[arg(long)]
        n: Option<usize>,
        /// Ray index.
        #[arg(long, conflicts_with = "label", required_unless_present = "label")]
        ray: Option<usize>,
        /// Ray label of Σ_n, "1,2,3".
        #[arg(long)]
        label: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum IncidenceCmd {
    /// List every configuration realizing the datum.
    Enumerate {
        #[arg(long)]
        incidence: PathBuf,
        #[arg(long)]
        field: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check that a configuration realizes the datum.
    Check {
        #[arg(long)]
        incidence: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.version {
        println!("murphy-toric {} (schema {SCHEMA_VERSION})", env!("CARGO_PKG_VERSION"));
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required");
        return ExitCode::from(2);
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().ok();
    }
    let ctx = commands::Context { out: cli.out, workers: cli.workers };
    match commands::run(&ctx, command) {
        Ok(commands::Outcome::Pass) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
