use std::path::PathBuf;
use std::process::ExitCode;

use atoral_lab::equidist::PointSet;
use atoral_lab::experiments::{self as ex, MethodChoice, PolyFamily, Table};
use atoral_lab::galois::{GaloisSubgroup, TorsionPoint};
use atoral_lab::laurent::LaurentPoly;
use atoral_lab::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "atoral-lab", version, about = "Torsion-point averages, Mahler measures and their audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Laurent polynomial, e.g. "1 + x1 + x2^-1"
    #[arg(long, global = true)]
    poly: Option<String>,
    /// Number of variables (default: largest index in --poly)
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Torsion point b1/N,b2/N,...
    #[arg(long, global = true)]
    zeta: Option<TorsionPoint>,
    /// Galois subgroup N:g1,g2,... or N:*
    #[arg(long, global = true)]
    group: Option<GaloisSubgroup>,
    #[arg(long, global = true)]
    nu: Option<f64>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the table here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON instead of CSV
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Jensen,
    Recursive,
    Qmc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    Reciprocal,
}

#[derive(Subcommand)]
enum Command {
    /// Mahler measure with the coefficient bounds
    Mahler {
        #[arg(value_name = "POLY")]
        text: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// Number of QMC points
        #[arg(long, default_value_t = 1_000_000)]
        points: u64,
    },
    /// Galois-orbit average of log|P| at --zeta, or along a sweep of orders
    OrbitAverage {
        #[arg(value_name = "POLY")]
        text: Option<String>,
        /// Orders N; the point is e(1/N, round(phi N)/N, ...)
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<u64>,
    },
    /// Average of log|P| over finite subgroups of the torus
    LsvAverage {
        #[arg(value_name = "POLY")]
        text: Option<String>,
        /// Generator b1/N,...; repeat for more
        #[arg(long = "gen")]
        gens: Vec<TorsionPoint>,
        /// Orders N for the full N-torsion
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<u64>,
    },
    /// Staged reduction of an orbit average to a univariate one
    ReductionPipeline {
        #[arg(value_name = "POLY")]
        text: Option<String>,
    },
    /// Torsion points where P is an algebraic unit
    IhSearch {
        #[arg(value_name = "POLY")]
        text: Option<String>,
        #[arg(long, default_value_t = 12)]
        bmax: u64,
    },
    /// Mignotte and repulsion audits on random integer polynomials
    SeparationAudit {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 20)]
        degree: usize,
        #[arg(long = "coeff-bound", default_value_t = 10)]
        coeff_bound: i64,
        #[arg(long, value_enum, default_value = "random")]
        family: Family,
    },
    /// Gauss-sum and subgroup exponential-sum bounds for all N up to N_MAX
    GaussAudit {
        #[arg(default_value_t = 60)]
        n_max: u64,
    },
    /// Discrepancy of a point file, or of the orbit of --zeta under --group
    Discrepancy {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// m(P(X^a1, ..., X^ad)) against m(P)
    Lawton {
        #[arg(value_name = "POLY")]
        text: Option<String>,
        /// Exponent vectors, e.g. --a 1,5 1,10
        #[arg(long = "a", num_args = 1..)]
        a: Vec<String>,
    },
    /// Essential atorality verdict
    Atoral {
        #[arg(value_name = "POLY")]
        text: Option<String>,
    },
}

fn input(msg: impl Into<String>) -> Error {
    Error::OutOfRange(msg.into())
}

fn poly(positional: &Option<String>, c: &Common) -> atoral_lab::Result<LaurentPoly> {
    let text = positional
        .as_ref()
        .or(c.poly.as_ref())
        .ok_or_else(|| input("a polynomial is required (positional or --poly)"))?;
    ex::read_poly(text, c.dim)
}

fn parse_vec(s: &str) -> atoral_lab::Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| input(format!("bad exponent vector {s:?}"))))
        .collect()
}

fn run(cli: &Cli) -> atoral_lab::Result<Table> {
    let c = &cli.common;
    match &cli.command {
        Command::Mahler { text: p, method, points } => {
            let m = match method {
                Method::Auto => MethodChoice::Auto,
                Method::Jensen => MethodChoice::Jensen,
                Method::Recursive => MethodChoice::Recursive,
                Method::Qmc => MethodChoice::Qmc,
            };
            ex::cmd_mahler(&poly(p, c)?, m, *points)
        }
        Command::OrbitAverage { text: p, sweep } => {
            let p = poly(p, c)?;
            if c.zeta.is_none() && sweep.is_empty() {
                return Err(input("give --zeta or --sweep"));
            }
            let single = c.zeta.as_ref().map(|z| (z, c.group.as_ref()));
            ex::cmd_orbit_average(&p, single, sweep)
        }
        Command::LsvAverage { text: p, gens, sweep } => {
            if gens.is_empty() && sweep.is_empty() {
                return Err(input("give --gen or --sweep"));
            }
            ex::cmd_lsv_average(&poly(p, c)?, gens, sweep)
        }
        Command::ReductionPipeline { text: p } => {
            let zeta = c.zeta.as_ref().ok_or_else(|| input("--zeta is required"))?;
            ex::cmd_reduction_pipeline(&poly(p, c)?, zeta, c.group.as_ref(), c.nu, c.eps)
        }
        Command::IhSearch { text: p, bmax } => ex::cmd_ih_search(&poly(p, c)?, *bmax),
        Command::SeparationAudit {
            count,
            degree,
            coeff_bound,
            family,
        } => {
            let f = match family {
                Family::Random => PolyFamily::Random,
                Family::Reciprocal => PolyFamily::Reciprocal,
            };
            ex::cmd_separation_audit(*count, *degree, *coeff_bound, c.seed, f)
        }
        Command::GaussAudit { n_max } => ex::cmd_gauss_audit(*n_max),
        Command::Discrepancy { file } => {
            let ps = match (file, &c.zeta) {
                (Some(f), _) => PointSet::from_file(f)?,
                (None, Some(z)) => {
                    let g = c.group.clone().unwrap_or_else(|| GaloisSubgroup::full(z.order()));
                    PointSet::orbit(z, &g)?
                }
                (None, None) => return Err(input("give --file or --zeta")),
            };
            ex::cmd_discrepancy(&ps, c.seed)
        }
        Command::Lawton { text: p, a } => {
            let a = a.iter().map(|s| parse_vec(s)).collect::<atoral_lab::Result<Vec<_>>>()?;
            if a.is_empty() {
                return Err(input("give at least one --a vector"));
            }
            ex::cmd_lawton(&poly(p, c)?, &a)
        }
        Command::Atoral { text: p } => ex::cmd_atoral(&poly(p, c)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let table = match run(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::Invariant(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            };
        }
    };
    let text = if cli.common.json { table.to_json() + "\n" } else { table.to_csv() };
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
        }
        None => print!("{text}"),
    }
    if table.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("audit failure: at least one row has ok = false");
        ExitCode::from(2)
    }
}
