use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use conefold::cone_geometry::{StringTension, INFERENCE_TOLERANCE};
use conefold::flat_structure::{OrderConvention, PlanarLoop};
use conefold::observational::{
    load_bound_catalog, CatalogSource, ObservationalBound, TensionDistribution,
};
use conefold::report::{
    self, ChiSelection, CommandOutput, NetworkOptions, ReportFormat, RunConfig, Status,
};
use conefold::surface_file::read_surface_file;
use conefold::{Error, Result};

#[derive(Parser)]
#[command(
    name = "conefold",
    version,
    about = "Cone-point geometry of cosmic-string networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gauss-Bonnet checks on flat cone surfaces
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Observational tension bounds
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Sampled string networks and the genus verdict
    #[command(subcommand)]
    Network(NetworkCmd),
    /// Local models of the quadratic differential
    #[command(subcommand)]
    Flat(FlatCmd),
    /// Numerical probes of the cone metric
    #[command(subcommand)]
    Probe(ProbeCmd),
    /// Foliation scenario classification
    Classify(ClassifyArgs),
    /// Full replication report
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand)]
enum SurfaceCmd {
    Check {
        file: PathBuf,
        /// Residual tolerance deciding the exit status
        #[arg(long, default_value_t = conefold::cone_geometry::CHECK_TOLERANCE)]
        tol: f64,
        /// Tolerance for the admissible genus set
        #[arg(long, default_value_t = INFERENCE_TOLERANCE)]
        genus_tol: f64,
        /// Accept negative tensions (angle excess)
        #[arg(long)]
        allow_negative: bool,
    },
    Genus {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        tensions: Vec<f64>,
        #[arg(long, default_value_t = INFERENCE_TOLERANCE)]
        tol: f64,
    },
}

#[derive(Args)]
struct CatalogArg {
    /// Bound catalog file; the builtin catalog is used otherwise
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CatalogArg {
    fn load(&self) -> Result<(Vec<ObservationalBound>, String)> {
        match &self.config {
            Some(p) => Ok((
                load_bound_catalog(CatalogSource::File(p))?,
                p.display().to_string(),
            )),
            None => Ok((
                load_bound_catalog(CatalogSource::Builtin)?,
                "builtin".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum BoundsCmd {
    Report(CatalogArg),
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Uniform,
    Fixed,
}

#[derive(Subcommand)]
enum NetworkCmd {
    Sample {
        #[arg(long, env = "CONEFOLD_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        bound: String,
        #[arg(long, value_enum, default_value = "uniform")]
        dist: Dist,
        /// Allow more strings than the per-horizon cap
        #[arg(long)]
        override_cap: bool,
        #[command(flatten)]
        catalog: CatalogArg,
    },
}

#[derive(Subcommand)]
enum FlatCmd {
    NaturalCoord {
        #[arg(long, allow_hyphen_values = true)]
        order: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    QuadratureCheck {
        #[arg(long, allow_hyphen_values = true)]
        order: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ProbeCmd {
    Holonomy {
        #[arg(long)]
        gmu: f64,
        #[arg(long = "loop", allow_hyphen_values = true)]
        path: PlanarLoop,
    },
    Length {
        #[arg(long)]
        c: f64,
        #[arg(long = "loop", allow_hyphen_values = true)]
        path: PlanarLoop,
        /// Treat the vertices as an open path
        #[arg(long)]
        open: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ClassifyArgs {
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    enumerate: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    SvgData,
}

#[derive(Clone, Copy, ValueEnum)]
enum Chi {
    Derived,
    Paper,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    SelfConsistent,
    Paper,
}

#[derive(Subcommand)]
enum ReportCmd {
    All {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_enum, default_value = "both")]
        chi: Chi,
        #[arg(long, value_enum, default_value = "self-consistent")]
        order_convention: Order,
        #[arg(long, env = "CONEFOLD_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        catalog: CatalogArg,
    },
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or("expected re,im")?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|_| format!("bad real part '{re}'"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|_| format!("bad imaginary part '{im}'"))?;
    Ok(Complex64::new(re, im))
}

fn run(cli: Cli) -> Result<CommandOutput> {
    match cli.command {
        Command::Surface(SurfaceCmd::Check {
            file,
            tol,
            genus_tol,
            allow_negative,
        }) => {
            let surface = read_surface_file(&file, allow_negative)?;
            report::surface_check(
                &surface,
                report::SurfaceCheckOptions {
                    tolerance: tol,
                    genus_tolerance: genus_tol,
                },
            )
        }
        Command::Surface(SurfaceCmd::Genus { tensions, tol }) => {
            let tensions = tensions
                .iter()
                .enumerate()
                .map(|(i, &g)| StringTension::new(g, format!("#{}", i + 1)))
                .collect::<Result<Vec<_>>>()?;
            report::surface_genus(&tensions, tol)
        }
        Command::Bounds(BoundsCmd::Report(catalog)) => {
            let (cat, label) = catalog.load()?;
            report::bounds_report(&cat, &label)
        }
        Command::Network(NetworkCmd::Sample {
            seed,
            count,
            bound,
            dist,
            override_cap,
            catalog,
        }) => {
            let (cat, label) = catalog.load()?;
            let opts = NetworkOptions {
                seed,
                count,
                bound,
                distribution: match dist {
                    Dist::Uniform => TensionDistribution::Uniform,
                    Dist::Fixed => TensionDistribution::FixedAtBound,
                },
                override_cap,
                catalog_label: label,
            };
            report::network_sample(&cat, &opts)
        }
        Command::Flat(FlatCmd::NaturalCoord { order, z }) => report::flat_natural_coord(order, z),
        Command::Flat(FlatCmd::QuadratureCheck { order, z, samples }) => {
            report::flat_quadrature_check(order, z, samples)
        }
        Command::Probe(ProbeCmd::Holonomy { gmu, path }) => report::probe_holonomy(gmu, &path),
        Command::Probe(ProbeCmd::Length { c, path, open }) => {
            report::probe_length(c, &path.with_closed(!open))
        }
        Command::Classify(ClassifyArgs {
            scenario,
            enumerate,
        }) => match scenario {
            Some(key) => report::classify_scenario(&key),
            None if enumerate => Ok(report::classify_enumerate()),
            None => Err(Error::InvalidScenario(
                "expected --scenario or --enumerate".into(),
            )),
        },
        Command::Report(ReportCmd::All {
            format,
            chi,
            order_convention,
            seed,
            count,
            trials,
            catalog,
        }) => {
            let (cat, label) = catalog.load()?;
            let cfg = RunConfig {
                seed,
                chi: match chi {
                    Chi::Derived => ChiSelection::Derived,
                    Chi::Paper => ChiSelection::Paper,
                    Chi::Both => ChiSelection::Both,
                },
                order: match order_convention {
                    Order::SelfConsistent => OrderConvention::SelfConsistent,
                    Order::Paper => OrderConvention::Paper,
                },
                format: match format {
                    Format::Text => ReportFormat::Text,
                    Format::Csv => ReportFormat::Csv,
                    Format::SvgData => ReportFormat::SvgData,
                },
                catalog_label: label,
                count,
                monte_carlo_trials: trials,
                ..RunConfig::default()
            };
            report::report_all(&cat, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Status::InputError.code() as u8
            } else {
                0
            });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::InputError.code() as u8)
        }
    }
}
