//! Command-line front end. Every verb reads standard input and writes
//! standard output so that `family | enumerate | classify` pipelines work.

use std::fmt::Display;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::census::{
    census_members, generate_census, one_decimal, stats_from_members, CensusKind, CensusOptions, CensusQuery,
    CensusStats, CSV_HEADER,
};
use crate::enumeration::{brute_force_vertex_surfaces, enumerate_vertex_surfaces, VertexSurfaceSet};
use crate::families::{build_family, FamilyKind, FamilySpec};
use crate::normal::NormalVector;
use crate::topology::{classify_vector, CLASSIFY_HEADER};
use crate::triangulation::Triangulation;
use crate::verify::{run_suite, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

fn domain<E: Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "normsurf", version, about = "Normal surfaces in 3-manifold triangulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Closed,
    Bounded,
}

impl From<KindArg> for CensusKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Closed => CensusKind::Closed,
            KindArg::Bounded => CensusKind::Bounded,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Table,
    Signatures,
}

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    s.parse::<FamilyKind>().map_err(|e| {
        let names: Vec<&str> = FamilyKind::ALL.iter().map(|k| k.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a family member as a gluing table.
    Family {
        #[arg(value_parser = parse_family)]
        name: FamilyKind,
        n: usize,
    },
    /// Read a gluing table, print it followed by its vertex normal surfaces.
    Enumerate {
        /// Use support enumeration instead of double description.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        discs_only: bool,
    },
    /// Read a gluing table and surfaces, print one CSV row per surface.
    Classify,
    /// Generate a census and print its statistics.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        one_vertex: bool,
        #[arg(long)]
        discs_only: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        journal: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Run sizes above the default ceiling.
        #[arg(long)]
        allow_large: bool,
    },
    /// Print the census count and complexity tables for n = 1..max-n.
    Report {
        #[arg(long, value_delimiter = ',', default_values_t = [1u8, 2])]
        tables: Vec<u8>,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        allow_large: bool,
    },
    /// Run the self-check suite.
    Verify {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        tier: u8,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, S>(args: I, input: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, input, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let CliError::Usage(_) = e {
                let _ = writeln!(err, "{}", Cli::command().render_usage());
            }
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, input: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Family { name, n } => {
            let t = build_family(FamilySpec { kind: name, n }).map_err(domain)?;
            out.write_all(t.to_text().as_bytes())?;
        }
        Command::Enumerate { oracle, discs_only } => {
            let stream = read_stream(input, "enumerate")?;
            let t = &stream.triangulation;
            let mut set = if oracle {
                brute_force_vertex_surfaces(t)
            } else {
                enumerate_vertex_surfaces(t)
            }
            .map_err(domain)?;
            if discs_only {
                let mut keep = Vec::new();
                for v in set.surfaces {
                    if classify_vector(t, &v).map_err(domain)?.is_disc() {
                        keep.push(v);
                    }
                }
                set = VertexSurfaceSet {
                    n: set.n,
                    surfaces: keep,
                };
            }
            out.write_all(t.to_text().as_bytes())?;
            out.write_all(set.to_text().as_bytes())?;
        }
        Command::Classify => {
            let stream = read_stream(input, "classify")?;
            writeln!(out, "{CLASSIFY_HEADER}")?;
            for v in &stream.surfaces {
                let c = classify_vector(&stream.triangulation, v).map_err(domain)?;
                writeln!(out, "{}", c.csv_row())?;
            }
        }
        Command::Census {
            n,
            kind,
            one_vertex,
            discs_only,
            jobs,
            journal,
            format,
            allow_large,
        } => {
            let q = CensusQuery {
                n,
                kind: kind.into(),
                one_vertex,
                discs_only,
            };
            let opts = CensusOptions {
                jobs,
                journal,
                allow_large,
            };
            let members = generate_census(&q, &opts).map_err(domain)?;
            match format {
                OutputFormat::Signatures => {
                    for m in &members {
                        writeln!(out, "{}", m.signature)?;
                    }
                }
                OutputFormat::Csv => {
                    let stats = stats_from_members(&q, &members);
                    writeln!(out, "{CSV_HEADER}")?;
                    writeln!(out, "{}", stats.csv_row())?;
                }
                OutputFormat::Table => {
                    let stats = stats_from_members(&q, &members);
                    writeln!(out, "{}", CensusStats::table_header())?;
                    writeln!(out, "{}", stats.table_row())?;
                }
            }
        }
        Command::Report {
            tables,
            max_n,
            jobs,
            allow_large,
        } => {
            if let Some(t) = tables.iter().find(|&&t| t != 1 && t != 2) {
                return Err(CliError::Usage(format!("no table {t}; tables are 1 and 2")));
            }
            let opts = CensusOptions {
                jobs,
                journal: None,
                allow_large,
            };
            report(&tables, max_n, &opts, out)?;
        }
        Command::Verify { tier } => {
            let results = run_suite(tier);
            for r in &results {
                writeln!(out, "{r}")?;
            }
            let failed = results.iter().filter(|r| r.status == Status::Fail).count();
            if failed > 0 {
                return Err(CliError::Domain(format!("{failed} criteria failed")));
            }
        }
    }
    Ok(())
}

fn report(tables: &[u8], max_n: usize, opts: &CensusOptions, out: &mut dyn Write) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let closed = census_members(n, CensusKind::Closed, opts).map_err(domain)?;
        let bounded = census_members(n, CensusKind::Bounded, opts).map_err(domain)?;
        let c = CensusQuery::new(n, CensusKind::Closed);
        let b = CensusQuery::new(n, CensusKind::Bounded);
        rows.push((
            n,
            stats_from_members(&c, &closed),
            stats_from_members(&c.one_vertex(), &closed),
            stats_from_members(&b, &bounded),
            stats_from_members(&b.discs_only(), &bounded),
        ));
    }
    if tables.contains(&1) {
        writeln!(out, "Table 1: triangulations in the census")?;
        writeln!(out, "{:>3} {:>10} {:>12} {:>10}", "n", "closed", "closed-1vtx", "bounded")?;
        for (n, c, c1, b, _) in &rows {
            writeln!(out, "{:>3} {:>10} {:>12} {:>10}", n, c.count, c1.count, b.count)?;
        }
    }
    if tables.contains(&1) && tables.contains(&2) {
        writeln!(out)?;
    }
    if tables.contains(&2) {
        writeln!(out, "Table 2: sigma and kappa, max / avg")?;
        writeln!(
            out,
            "{:>3} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13}",
            "n", "sig closed", "sig 1vtx", "sig bounded", "sig discs", "kap closed", "kap bounded"
        )?;
        let cell = |max: String, avg: &num_rational::Ratio<u64>| format!("{max} / {}", one_decimal(avg));
        for (n, c, c1, b, bd) in &rows {
            writeln!(
                out,
                "{:>3} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13}",
                n,
                cell(c.sigma_max.to_string(), &c.sigma_avg),
                cell(c1.sigma_max.to_string(), &c1.sigma_avg),
                cell(b.sigma_max.to_string(), &b.sigma_avg),
                cell(bd.sigma_max.to_string(), &bd.sigma_avg),
                cell(c.kappa_max.to_string(), &c.kappa_avg),
                cell(b.kappa_max.to_string(), &b.kappa_avg),
            )?;
        }
    }
    Ok(())
}

/// A triangulation followed by optional surfaces, as produced by
/// `family` and `enumerate`.
pub struct Stream {
    pub triangulation: Triangulation,
    pub surfaces: Vec<NormalVector>,
}

pub fn parse_stream(text: &str) -> Result<Option<Stream>, CliError> {
    let mut table = String::new();
    let mut surfaces = Vec::new();
    for line in text.lines() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() || body.starts_with("n=") {
            continue;
        }
        if body.contains('|') {
            surfaces.push(body.parse::<NormalVector>().map_err(domain)?);
        } else {
            table.push_str(body);
            table.push('\n');
        }
    }
    if table.is_empty() {
        return Ok(None);
    }
    let triangulation = Triangulation::parse(&table).map_err(domain)?;
    for v in &surfaces {
        if v.tet_count() != triangulation.size() {
            return Err(CliError::Domain(format!(
                "surface {v} has {} blocks for {} tetrahedra",
                v.tet_count(),
                triangulation.size()
            )));
        }
    }
    Ok(Some(Stream {
        triangulation,
        surfaces,
    }))
}

fn read_stream(input: &mut dyn Read, verb: &str) -> Result<Stream, CliError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    parse_stream(&text)?
        .ok_or_else(|| CliError::Usage(format!("{verb}: expected a gluing table on standard input")))
}
