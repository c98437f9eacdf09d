use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use geodrg_cli::enumerate::{self, EnumerationSpec};
use geodrg_cli::*;
use geodrg_core::filters::{classify_main2, report_for_array, report_for_classical, report_for_geometric};
use geodrg_core::spectrum::b_parameter;
use geodrg_core::{
    array_to_geometric, classical_eigenvalues, eigenvalues, geometric_to_array, rational, IntersectionArray,
};
use geodrg_graphs::families::Family;
use geodrg_graphs::oracle::{verify_all, DistanceData, VerifyOptions};

#[derive(Parser)]
#[command(name = "geodrg", version, about = "Parameters, feasibility and brute-force verification of geometric distance-regular graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a family graph and write `<stem>.graph` (and `<stem>.cover` when known).
    Build {
        /// johnson N D | grassmann Q N D | hamming D E | bilinear D E Q | grid M N | clique-extension M N S
        family: String,
        params: Vec<u64>,
        #[arg(long, short, default_value = ".")]
        out: PathBuf,
    },
    /// Run every oracle check on a graph file, with an optional cover file.
    Verify {
        graph: PathBuf,
        cover: Option<PathBuf>,
        /// Examine every distance-2 pair for the Sigma checks.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 50, conflicts_with = "exhaustive")]
        sigma_cap: usize,
        /// Node budget for the cover search when no cover file is given.
        #[arg(long, default_value_t = 1_000_000)]
        cover_budget: usize,
    },
    /// Eigenvalues and multiplicities of an intersection array or classical parameters.
    Spectrum {
        #[command(flatten)]
        input: ArrayOrClassical,
    },
    /// Intersection array of a geometric array.
    Geo2array {
        #[command(flatten)]
        geo: GeoArgs,
    },
    /// Geometric array of an intersection array; `r` defaults to `-theta_min`.
    Array2geo {
        array: String,
        #[arg(long)]
        r: Option<i64>,
    },
    /// Full filter battery on one parameter set.
    Filter {
        #[arg(long, conflicts_with_all = ["classical", "phi"])]
        array: Option<String>,
        #[arg(long, conflicts_with = "phi")]
        classical: Option<String>,
        #[command(flatten)]
        geo: OptGeoArgs,
    },
    /// Branch of the classification for a geometric array.
    Classify {
        #[command(flatten)]
        geo: GeoArgs,
    },
    /// Screen a box of candidate geometric arrays; one JSON line per survivor.
    Enumerate {
        /// Diameter range, e.g. `3` or `3..4`.
        #[arg(long, default_value = "3")]
        diameter: String,
        #[arg(long)]
        tau_d: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        phi_prefix: Option<String>,
        #[arg(long)]
        tau_prefix: Option<String>,
        /// Check whose failure does not exclude a candidate (repeatable).
        #[arg(long = "ignore-check")]
        ignore: Vec<String>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ArrayOrClassical {
    /// Intersection array `{b0,..;c1,..}`.
    #[arg(long)]
    array: Option<String>,
    /// Classical parameters `D,b,alpha,beta`.
    #[arg(long)]
    classical: Option<String>,
}

#[derive(Args)]
struct GeoArgs {
    /// `phi_0,..,phi_{D-1}`
    #[arg(long)]
    phi: String,
    /// `tau_1,..,tau_D`
    #[arg(long)]
    tau: String,
    #[arg(long)]
    beta: i64,
}

#[derive(Args)]
struct OptGeoArgs {
    #[arg(long, requires_all = ["tau", "beta"])]
    phi: Option<String>,
    #[arg(long, requires = "phi")]
    tau: Option<String>,
    #[arg(long, requires = "phi")]
    beta: Option<i64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn print_json(v: &impl Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn parse_array(s: &str) -> Result<IntersectionArray> {
    s.parse().with_context(|| format!("bad intersection array {s:?}"))
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Build { family, params, out } => {
            let fam = Family::from_args(&family, &params)?;
            let (g, cover) = fam.build()?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let stem = out.join(fam.stem());
            fs::write(stem.with_extension("graph"), g.to_text())?;
            if let Some(c) = &cover {
                fs::write(stem.with_extension("cover"), c.to_text())?;
            }
            let k = g.regular_degree().map_or("irregular".to_string(), |k| k.to_string());
            let d = DistanceData::new(&g).map_or("inf".to_string(), |d| d.diameter().to_string());
            println!("n={} k={k} D={d}", g.n());
            Ok(EXIT_PASS)
        }
        Cmd::Verify { graph, cover, exhaustive, sigma_cap, cover_budget } => {
            let g = read_graph(&graph)?;
            let cover = cover.map(|p| read_cover(&p, g.n())).transpose()?;
            let opts = VerifyOptions { sigma_cap: (!exhaustive).then_some(sigma_cap), cover_budget };
            let report = verify_all(&g, cover.as_ref(), &opts);
            print_json(&report)?;
            Ok(exit_code(report.overall))
        }
        Cmd::Spectrum { input } => {
            let spec = match (input.array, input.classical) {
                (Some(a), _) => eigenvalues(&parse_array(&a)?)?,
                (_, Some(c)) => classical_eigenvalues(&parse_classical(&c)?)?,
                _ => unreachable!("clap enforces one input"),
            };
            print_json(&spec)?;
            Ok(EXIT_PASS)
        }
        Cmd::Geo2array { geo } => {
            let g = geometric_from_parts(&geo.phi, &geo.tau, geo.beta)?;
            println!("{}", geometric_to_array(&g)?);
            Ok(EXIT_PASS)
        }
        Cmd::Array2geo { array, r } => {
            let arr = parse_array(&array)?;
            let r = match r {
                Some(r) => r,
                None => {
                    let s = eigenvalues(&arr)?;
                    let t = s.theta_min().exact().and_then(rational::to_i64);
                    -t.context("theta_min is not an integer; pass --r")?
                }
            };
            println!("{}", array_to_geometric(&arr, r)?);
            Ok(EXIT_PASS)
        }
        Cmd::Filter { array, classical, geo } => {
            let report = match (array, classical, geo.phi) {
                (Some(a), _, _) => report_for_array(&parse_array(&a)?),
                (_, Some(c), _) => report_for_classical(&parse_classical(&c)?),
                (_, _, Some(phi)) => {
                    let (tau, beta) = (geo.tau.unwrap_or_default(), geo.beta.unwrap_or_default());
                    report_for_geometric(&geometric_from_parts(&phi, &tau, beta)?)
                }
                _ => bail!("give --array, --classical, or --phi/--tau/--beta"),
            };
            print_json(&report)?;
            Ok(exit_code(report.overall))
        }
        Cmd::Classify { geo } => {
            let g = geometric_from_parts(&geo.phi, &geo.tau, geo.beta)?;
            let b = geometric_to_array(&g)
                .ok()
                .and_then(|a| eigenvalues(&a).ok().and_then(|s| b_parameter(&a, &s).ok()));
            let c = classify_main2(&g, b.as_ref());
            print_json(&c)?;
            Ok(exit_code(c.status))
        }
        Cmd::Enumerate { diameter, tau_d, beta, phi_prefix, tau_prefix, ignore, workers, out } => {
            let spec = EnumerationSpec {
                phi_prefix: phi_prefix.as_deref().map(parse_list).transpose()?.unwrap_or_default(),
                tau_prefix: tau_prefix.as_deref().map(parse_list).transpose()?.unwrap_or_default(),
                ignore,
                ..EnumerationSpec::new(parse_range(&diameter)?, parse_range(&tau_d)?, parse_range(&beta)?)
            };
            let records = enumerate::run(&spec, workers)?;
            match out {
                Some(p) => {
                    let f = fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                    enumerate::write_jsonl(&records, BufWriter::new(f))?;
                }
                None => enumerate::write_jsonl(&records, BufWriter::new(io::stdout().lock()))?,
            }
            eprintln!("{} candidates retained", records.len());
            Ok(EXIT_PASS)
        }
    }
}
