//! Command-line front end. Every decision procedure and experiment in
//! the library is reachable as a subcommand with deterministic output:
//! JSON by default, `--format text` for a human rendering, and
//! `--format csv` for the tabular reports. Results go to stdout (or
//! `--out PATH`); progress lines go to stderr.
//!
//! Exit codes: 0 success, 2 bad flags or malformed input, 3 resource
//! budget exceeded, 4 the requested theorem or certificate does not
//! apply, 1 anything else.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semireg::{
    census_csv, first_fall_degree, hilbert_series, ideal_index, is_semiregular,
    nonexistence_threshold, proportion_csv, proportion_grid, quadratic_census, sigma, sigma_csv,
    sigma_semiregular_predicted, sigma_table, single_element_grid, t_series, tau, threshold_csv,
    threshold_scan, Budget, CellMode, DegreeVector, Element, Error, ExperimentCtx,
    GradedBasisIndex, IdealSpec, ProportionCell, SigmaTable, DEFAULT_SEED,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "semireg",
    version,
    about = "Semi-regularity of homogeneous sequences over the squarefree quotient of GF(2)[X1..Xn]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads (falls back to SEMIREG_THREADS, then all cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    threads: Option<u64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

/// Generator input shared by hilbert, check, and ffd.
#[derive(Args)]
struct GensArgs {
    /// Ring size; cross-checked against the generators' own ring size
    #[arg(long)]
    n: Option<usize>,

    /// Generator in the form d:n:{i.j,...}; repeat for a sequence
    #[arg(long = "gens", value_name = "ELEM")]
    gens: Vec<String>,

    /// File with one generator per line (# starts a comment)
    #[arg(long = "gens-file", value_name = "PATH")]
    gens_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Graded dimensions of the quotient by the given generators
    Hilbert(GensArgs),
    /// Semi-regularity verdict with the full comparison trace
    Check(GensArgs),
    /// First fall degree of each generator
    Ffd(GensArgs),
    /// Coefficients of the reference series for a degree list
    #[command(name = "t-series")]
    TSeries {
        /// Degree list, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[arg(long)]
        n: usize,
        /// Coefficients to compute (default n + 2)
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Index of the reference series (first coefficient <= 0)
    Tau {
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[arg(long)]
        n: usize,
    },
    /// The full symmetric element of degree d, optionally with verdict
    Sigma {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Also decide semi-regularity of the element
        #[arg(long)]
        check: bool,
    },
    /// Exact rank-classified census of the nonzero quadratics
    Census {
        #[arg(long)]
        n: usize,
    },
    /// Proportion of semi-regular sequences of m quadratics, by (n, m)
    Table1 {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        m_min: usize,
        #[arg(long)]
        m_max: usize,
        #[arg(long, default_value_t = 20)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Proportion of semi-regular single elements, by (n, d)
    Table2 {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        d_max: usize,
        #[arg(long, default_value_t = 20)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Symmetric-element semi-regularity grid vs the closed form
    #[command(name = "sigma-table")]
    SigmaTable {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        d_max: usize,
    },
    /// Non-existence certificate for a degree list
    Certificate {
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
    },
    /// Per-n companion scan to the non-existence certificate
    #[command(name = "threshold-scan")]
    ThresholdScan {
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[arg(long)]
        n_limit: usize,
        #[arg(long, default_value_t = 200)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads(cli.threads);
    match run(&cli) {
        Ok(payload) => match deliver(&cli.out, &payload) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_class(&e))
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_class(&e))
        }
    }
}

/// Thread count: flag, then SEMIREG_THREADS, then the rayon default. A
/// failed build (already initialized) is harmless and ignored.
fn configure_threads(flag: Option<u64>) {
    let from_env = std::env::var("SEMIREG_THREADS")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .filter(|&v| v >= 1);
    if let Some(t) = flag.or(from_env) {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global();
    }
}

fn exit_class(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } => 3,
        Error::Inapplicable { .. } | Error::InvalidCertificate { .. } => 4,
        Error::TooManyVariables { .. }
        | Error::InvalidVariable { .. }
        | Error::DuplicateVariable { .. }
        | Error::DimensionMismatch { .. }
        | Error::DegreeMismatch { .. }
        | Error::DegreeOutOfRange { .. }
        | Error::ZeroGenerator { .. }
        | Error::InvalidDegreeVector
        | Error::NotQuadratic { .. }
        | Error::Parse { .. } => 2,
        _ => 1,
    }
}

fn deliver(out: &Option<PathBuf>, payload: &str) -> Result<(), Error> {
    let payload = payload.trim_end_matches('\n');
    match out {
        Some(path) => std::fs::write(path, format!("{payload}\n")).map_err(|e| Error::Io {
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{payload}").and_then(|_| stdout.flush()) {
                Ok(()) => Ok(()),
                // The consumer closed the pipe; stop quietly instead of panicking.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
                Err(e) => Err(Error::Io {
                    message: format!("cannot write to stdout: {e}"),
                }),
            }
        }
    }
}

fn progress(msg: &str) {
    eprintln!("[semireg] {msg}");
}

fn budget() -> Budget {
    Budget::default()
}

fn parse_gens(args: &GensArgs) -> Result<IdealSpec, Error> {
    let mut texts: Vec<String> = args.gens.clone();
    if let Some(path) = &args.gens_file {
        let body = std::fs::read_to_string(path).map_err(|e| Error::Io {
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        for line in body.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            texts.push(line.to_string());
        }
    }
    if texts.is_empty() {
        return Err(Error::Parse {
            message: "no generators given; use --gens or --gens-file".into(),
        });
    }
    let gens: Vec<Element> = texts
        .iter()
        .map(|t| t.parse::<Element>())
        .collect::<Result<_, _>>()?;
    let n = gens[0].n();
    if let Some(stated) = args.n {
        if stated != n {
            return Err(Error::Parse {
                message: format!("--n {stated} disagrees with the generators' ring size {n}"),
            });
        }
    }
    IdealSpec::new(n, gens)
}

fn degree_vector(d: &[usize]) -> Result<DegreeVector, Error> {
    DegreeVector::new(d.to_vec())
}

fn run(cli: &Cli) -> Result<String, Error> {
    match &cli.command {
        Command::Hilbert(args) => cmd_hilbert(args, cli.format),
        Command::Check(args) => cmd_check(args, cli.format),
        Command::Ffd(args) => cmd_ffd(args, cli.format),
        Command::TSeries { d, n, horizon } => cmd_t_series(d, *n, *horizon, cli.format),
        Command::Tau { d, n } => cmd_tau(d, *n, cli.format),
        Command::Sigma { n, d, check } => cmd_sigma(*n, *d, *check, cli.format),
        Command::Census { n } => cmd_census(*n, cli.format),
        Command::Table1 {
            n_min,
            n_max,
            m_min,
            m_max,
            samples,
            seed,
        } => cmd_table1(*n_min, *n_max, *m_min, *m_max, *samples, *seed, cli.format),
        Command::Table2 {
            n_max,
            d_max,
            samples,
            seed,
        } => cmd_table2(*n_max, *d_max, *samples, *seed, cli.format),
        Command::SigmaTable { n_max, d_max } => cmd_sigma_table(*n_max, *d_max, cli.format),
        Command::Certificate { d } => cmd_certificate(d, cli.format),
        Command::ThresholdScan {
            d,
            n_limit,
            samples,
            seed,
        } => cmd_threshold_scan(d, *n_limit, *samples, *seed, cli.format),
    }
}

fn render_json(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

fn no_csv(command: &str) -> Error {
    Error::Parse {
        message: format!("csv output is not defined for {command}; use json or text"),
    }
}

fn gens_text(ideal: &IdealSpec) -> Vec<String> {
    ideal.gens().iter().map(|g| g.to_string()).collect()
}

fn cmd_hilbert(args: &GensArgs, format: Format) -> Result<String, Error> {
    let ideal = parse_gens(args)?;
    let h = hilbert_series(&ideal, &budget())?;
    Ok(match format {
        Format::Json => render_json(&json!({
            "command": "hilbert",
            "n": ideal.n(),
            "generators": gens_text(&ideal),
            "degrees": ideal.degrees().entries(),
            "dims": h.dims,
            "index": h.index,
        })),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "n: {}", ideal.n()).unwrap();
            writeln!(out, "generators: {}", gens_text(&ideal).join(" ")).unwrap();
            writeln!(out, "dims: {}", join(&h.dims)).unwrap();
            write!(out, "index: {}", h.index).unwrap();
            out
        }
        Format::Csv => {
            let mut out = String::from("degree,dim\n");
            for (k, dim) in h.dims.iter().enumerate() {
                writeln!(out, "{k},{dim}").unwrap();
            }
            out.pop();
            out
        }
    })
}

fn cmd_check(args: &GensArgs, format: Format) -> Result<String, Error> {
    let ideal = parse_gens(args)?;
    let report = is_semiregular(&ideal, &budget())?;
    let index = ideal_index(&ideal, &budget())?;
    let ffds: Vec<Option<usize>> = ideal
        .gens()
        .iter()
        .map(|g| first_fall_degree(g, &budget()))
        .collect::<Result<_, _>>()?;
    let divergence = report.first_divergence.as_ref().map(|d| {
        json!({
            "degree": d.degree,
            "dim": d.hilbert_dim,
            "reference": d.reference.to_string(),
            "gap": d.gap.to_string(),
        })
    });
    Ok(match format {
        Format::Json => render_json(&json!({
            "command": "check",
            "n": ideal.n(),
            "generators": gens_text(&ideal),
            "degrees": ideal.degrees().entries(),
            "verdict": report.verdict,
            "ideal_index": index,
            "reference_index": report.t_index,
            "dims": report.checked_dims,
            "reference_coeffs": report.t_coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "ranks": report.ranks,
            "first_divergence": divergence,
            "first_fall_degrees": ffds,
        })),
        Format::Text => {
            let mut out = String::new();
            writeln!(
                out,
                "verdict: {}",
                if report.verdict {
                    "semi-regular"
                } else {
                    "not semi-regular"
                }
            )
            .unwrap();
            writeln!(out, "ideal index: {index}").unwrap();
            writeln!(out, "reference index: {}", report.t_index).unwrap();
            writeln!(out, "dims:   {}", join(&report.checked_dims)).unwrap();
            writeln!(out, "coeffs: {}", join(&report.t_coeffs)).unwrap();
            match &report.first_divergence {
                Some(d) => writeln!(
                    out,
                    "first divergence: degree {} (dim {}, reference {}, gap {})",
                    d.degree, d.hilbert_dim, d.reference, d.gap
                )
                .unwrap(),
                None => writeln!(out, "first divergence: none").unwrap(),
            }
            write!(
                out,
                "first fall degrees: {}",
                ffds.iter()
                    .map(|f| f.map_or("none".to_string(), |v| v.to_string()))
                    .collect::<Vec<_>>()
                    .join(" ")
            )
            .unwrap();
            out
        }
        Format::Csv => return Err(no_csv("check")),
    })
}

fn cmd_ffd(args: &GensArgs, format: Format) -> Result<String, Error> {
    let ideal = parse_gens(args)?;
    let ffds: Vec<Option<usize>> = ideal
        .gens()
        .iter()
        .map(|g| first_fall_degree(g, &budget()))
        .collect::<Result<_, _>>()?;
    Ok(match format {
        Format::Json => render_json(&json!({
            "command": "ffd",
            "n": ideal.n(),
            "generators": gens_text(&ideal),
            "first_fall_degrees": ffds,
        })),
        Format::Text => {
            let mut out = String::new();
            for (g, f) in ideal.gens().iter().zip(&ffds) {
                writeln!(
                    out,
                    "{g}: {}",
                    f.map_or("none".to_string(), |v| v.to_string())
                )
                .unwrap();
            }
            out.pop();
            out
        }
        Format::Csv => {
            let mut out = String::from("position,degree,ffd\n");
            for (i, (g, f)) in ideal.gens().iter().zip(&ffds).enumerate() {
                writeln!(
                    out,
                    "{},{},{}",
                    i + 1,
                    g.degree(),
                    f.map_or("none".to_string(), |v| v.to_string())
                )
                .unwrap();
            }
            out.pop();
            out
        }
    })
}

fn cmd_t_series(
    d: &[usize],
    n: usize,
    horizon: Option<usize>,
    format: Format,
) -> Result<String, Error> {
    let dv = degree_vector(d)?;
    let horizon = horizon.unwrap_or(n + 2);
    let series = t_series(&dv, n, horizon)?;
    let coeffs: Vec<String> = series.coeff_strings();
    Ok(match format {
        Format::Json => render_json(&json!({
            "command": "t-series",
            "d": d,
            "n": n,
            "horizon": horizon,
            "coeffs": coeffs,
            "index": series.index(),
        })),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "coeffs: {}", coeffs.join(" ")).unwrap();
            match series.index() {
                Some(i) => write!(out, "index: {i}").unwrap(),
                None => write!(out, "index: beyond horizon {horizon}").unwrap(),
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("k,coeff\n");
            for (k, c) in coeffs.iter().enumerate() {
                writeln!(out, "{k},{c}").unwrap();
            }
            out.pop();
            out
        }
    })
}

fn cmd_tau(d: &[usize], n: usize, format: Format) -> Result<String, Error> {
    let dv = degree_vector(d)?;
    let t = tau(&dv, n);
    let series = t_series(&dv, n, t + 1)?;
    let coeff = series.coeff(t)?.to_string();
    Ok(match format {
        Format::Json => render_json(&json!({
            "command": "tau",
            "d": d,
            "n": n,
            "tau": t,
            "coeff_at_tau": coeff,
        })),
        Format::Text => format!("tau: {t}\ncoeff at tau: {coeff}"),
        Format::Csv => format!("n,tau,coeff_at_tau\n{n},{t},{coeff}"),
    })
}

/// Printing cap for the symmetric element: the support has C(n, d)
/// monomials and must stay reasonable for a terminal.
const SIGMA_SUPPORT_CAP: u64 = 1 << 20;

fn cmd_sigma(n: usize, d: usize, check: bool, format: Format) -> Result<String, Error> {
    let count = GradedBasisIndex::new(n, d)?.count();
    if count > SIGMA_SUPPORT_CAP {
        return Err(Error::ResourceLimit {
            degree: d,
            rows: count,
            cols: 1,
            limit_bits: SIGMA_SUPPORT_CAP,
        });
    }
    let element = sigma(d, n)?;
    let verdict = if check {
        let ideal = IdealSpec::single(element.clone())?;
        let direct = is_semiregular(&ideal, &budget())?.verdict;
        let predicted = sigma_semiregular_predicted(d, n)?;
        Some((direct, predicted))
    } else {
        None
    };
    Ok(match format {
        Format::Json => render_json(&json!({
            "command": "sigma",
            "n": n,
            "d": d,
            "monomials": count,
            "element": element.to_string(),
            "semiregular": verdict.map(|(v, _)| v),
            "predicted_semiregular": verdict.map(|(_, p)| p),
            "agrees": verdict.map(|(v, p)| v == p),
        })),
        Format::Text => {
            let mut out = format!("{element}");
            if let Some((v, p)) = verdict {
                write!(
                    out,
                    "\nsemiregular: {}\nclosed form predicts: {}\nagrees: {}",
                    if v { "yes" } else { "no" },
                    if p { "yes" } else { "no" },
                    if v == p { "yes" } else { "NO" }
                )
                .unwrap();
            }
            out
        }
        Format::Csv => return Err(no_csv("sigma")),
    })
}

fn cmd_census(n: usize, format: Format) -> Result<String, Error> {
    let ctx = ExperimentCtx::default();
    progress(&format!(
        "census over the nonzero quadratics in {n} variables"
    ));
    let report = quadratic_census(&ctx, n)?;
    Ok(match format {
        Format::Json => {
            let mut value = serde_json::to_value(&report).expect("census serializes");
            value["command"] = json!("census");
            render_json(&value)
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(
                out,
                "n: {n}  mode: {}  population: {}",
                report.mode, report.population
            )
            .unwrap();
            for class in &report.classes {
                writeln!(
                    out,
                    "rank {:>2}: count {:>12}  semiregular {:>5}  index {}  dims {}",
                    class.rank,
                    class.count,
                    class.semiregular,
                    class.index,
                    join(&class.dims)
                )
                .unwrap();
            }
            writeln!(
                out,
                "semiregular: {} of {} ({} ~ {:.5})",
                report.semiregular_count, report.population, report.pi_exact, report.pi
            )
            .unwrap();
            for note in &report.audit {
                writeln!(
                    out,
                    "audit [{}]: published {} vs computed {} -> {}",
                    note.context,
                    note.published,
                    note.computed,
                    if note.agrees { "agrees" } else { "DISAGREES" }
                )
                .unwrap();
            }
            out.pop();
            out
        }
        Format::Csv => census_csv(&report),
    })
}

fn grid_text(cells: &[ProportionCell], col_of: impl Fn(&ProportionCell) -> usize) -> String {
    let mut rows: Vec<usize> = cells.iter().map(|c| c.n).collect();
    rows.sort_unstable();
    rows.dedup();
    let mut cols: Vec<usize> = cells.iter().map(&col_of).collect();
    cols.sort_unstable();
    cols.dedup();
    let mut out = String::from("n\\ ");
    for c in &cols {
        write!(out, " {c:>6}").unwrap();
    }
    out.push('\n');
    for r in &rows {
        write!(out, "{r:>3}").unwrap();
        for c in &cols {
            match cells.iter().find(|cell| cell.n == *r && col_of(cell) == *c) {
                Some(cell) => write!(out, " {:>6.3}", cell.estimate).unwrap(),
                None => write!(out, " {:>6}", "-").unwrap(),
            }
        }
        out.push('\n');
    }
    out.pop();
    out
}

fn cmd_table1(
    n_min: usize,
    n_max: usize,
    m_min: usize,
    m_max: usize,
    samples: u64,
    seed: u64,
    format: Format,
) -> Result<String, Error> {
    if n_min > n_max || m_min > m_max {
        return Err(Error::Parse {
            message: "empty range: need n_min <= n_max and m_min <= m_max".into(),
        });
    }
    let ctx = ExperimentCtx {
        master_seed: seed,
        ..ExperimentCtx::default()
    };
    let cells = proportion_grid(
        &ctx,
        n_min..=n_max,
        m_min..=m_max,
        2,
        samples,
        Some(&progress),
    )?;
    Ok(match format {
        Format::Json => render_json(&json!({
            "command": "table1",
            "d": 2,
            "samples": samples,
            "seed": seed,
            "cells": cells,
        })),
        Format::Text => grid_text(&cells, |c| c.m),
        Format::Csv => proportion_csv(&cells),
    })
}

fn cmd_table2(
    n_max: usize,
    d_max: usize,
    samples: u64,
    seed: u64,
    format: Format,
) -> Result<String, Error> {
    let ctx = ExperimentCtx {
        master_seed: seed,
        ..ExperimentCtx::default()
    };
    let cells = single_element_grid(&ctx, n_max, d_max, samples, Some(&progress))?;
    Ok(match format {
        Format::Json => render_json(&json!({
            "command": "table2",
            "samples": samples,
            "seed": seed,
            "cells": cells,
        })),
        Format::Text => grid_text(&cells, |c| c.d),
        Format::Csv => proportion_csv(&cells),
    })
}

fn sigma_grid_text(table: &SigmaTable) -> String {
    let mut out = String::from("n\\d");
    for d in 1..=table.d_max {
        write!(out, " {d:>2}").unwrap();
    }
    out.push('\n');
    for n in 1..=table.n_max {
        write!(out, "{n:>3}").unwrap();
        for d in 1..=table.d_max {
            let mark = table
                .cells
                .iter()
                .find(|c| c.n == n && c.d == d)
                .map_or("  ", |c| if c.computed { " x" } else { " ." });
            out.push_str(mark);
        }
        out.push('\n');
    }
    write!(out, "mismatches vs closed form: {}", table.mismatches).unwrap();
    out
}

fn cmd_sigma_table(n_max: usize, d_max: usize, format: Format) -> Result<String, Error> {
    let ctx = ExperimentCtx::default();
    let table = sigma_table(&ctx, n_max, d_max, Some(&progress))?;
    Ok(match format {
        Format::Json => {
            let mut value = serde_json::to_value(&table).expect("table serializes");
            value["command"] = json!("sigma-table");
            render_json(&value)
        }
        Format::Text => sigma_grid_text(&table),
        Format::Csv => sigma_csv(&table),
    })
}

fn cmd_certificate(d: &[usize], format: Format) -> Result<String, Error> {
    let dv = degree_vector(d)?;
    let cert = nonexistence_threshold(&dv)?;
    let witnesses: Vec<Value> = cert
        .certificates
        .iter()
        .map(|c| {
            json!({
                "degree": c.degree,
                "n": c.n,
                "tau_at_n": c.tau_at_n,
                "slope": c.slope().to_string(),
            })
        })
        .collect();
    Ok(match format {
        Format::Json => render_json(&json!({
            "command": "certificate",
            "degrees": cert.degrees.entries(),
            "witnesses": witnesses,
            "slope": cert.bound.slope.to_string(),
            "constant": cert.bound.constant.to_string(),
            "pivot_degree": cert.pivot_degree,
            "threshold": cert.threshold,
        })),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "degrees: {:?}", cert.degrees.entries()).unwrap();
            for c in &cert.certificates {
                writeln!(
                    out,
                    "witness: degree {} at n = {} has index {} (slope {})",
                    c.degree,
                    c.n,
                    c.tau_at_n,
                    c.slope()
                )
                .unwrap();
            }
            writeln!(
                out,
                "bound: tau(n) >= {} n + {}",
                cert.bound.slope, cert.bound.constant
            )
            .unwrap();
            write!(
                out,
                "no semi-regular sequence of these degrees for n >= {}",
                cert.threshold
            )
            .unwrap();
            out
        }
        Format::Csv => return Err(no_csv("certificate")),
    })
}

fn cmd_threshold_scan(
    d: &[usize],
    n_limit: usize,
    samples: u64,
    seed: u64,
    format: Format,
) -> Result<String, Error> {
    let dv = degree_vector(d)?;
    let ctx = ExperimentCtx {
        master_seed: seed,
        ..ExperimentCtx::default()
    };
    let report = threshold_scan(&ctx, &dv, n_limit, samples, Some(&progress))?;
    Ok(match format {
        Format::Json => {
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["command"] = json!("threshold-scan");
            value["seed"] = json!(seed);
            render_json(&value)
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(
                out,
                "degrees {:?}: bound {} n + {}, threshold {}",
                report.degrees, report.slope, report.constant, report.threshold
            )
            .unwrap();
            for row in &report.rows {
                let mode = row
                    .mode
                    .map(|m: CellMode| m.to_string())
                    .unwrap_or_else(|| "-".to_string());
                writeln!(
                    out,
                    "n {:>3}  tau {:>3}  veto {:>5}  above-threshold {:>5}  mode {:>10}  \
                     successes {}/{}",
                    row.n,
                    row.tau,
                    row.tau_veto,
                    row.above_threshold,
                    mode,
                    row.successes,
                    row.trials
                )
                .unwrap();
            }
            out.pop();
            out
        }
        Format::Csv => threshold_csv(&report),
    })
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
