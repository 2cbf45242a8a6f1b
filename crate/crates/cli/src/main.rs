use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flatform::catalog;
use flatform::crystal::{parse_group, write_group, CrystalGroup};
use flatform::hcc::full_report;
use flatform::linalg::IntegerMatrix;
use flatform::report::{write_certificate, write_hcc, FullReport};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "flatform", version, about = "Exact invariants and torus actions for Bieberbach groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a group is a torsion-free crystallographic group.
    Validate(GroupArgs),
    /// First homology, Betti numbers and center rank.
    Invariants(GroupArgs),
    /// Build the torus action certificate.
    Calabi(GroupArgs),
    /// Check the binomial and sum bounds and the splitting subgroup.
    Hcc(GroupArgs),
    /// Full report for one group, or for every catalog entry.
    Report(ReportArgs),
    /// Built-in groups.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Full report for the real Bott group of a bit string or matrix file.
    Bott {
        n: usize,
        /// Upper-triangle bits in row-major order, or a file holding an n x n matrix.
        source: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Names of the built-in groups.
    List,
    /// Print a built-in group in the group file format.
    Get { name: String },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct Source {
    /// Group file.
    file: Option<PathBuf>,
    /// Built-in group name.
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Args)]
struct GroupArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ReportArgs {
    /// Report on every catalog entry.
    #[arg(long, conflicts_with_all = ["file", "catalog"])]
    all: bool,
    /// Group file.
    file: Option<PathBuf>,
    /// Built-in group name.
    #[arg(long)]
    catalog: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy)]
enum Section {
    Validate,
    Invariants,
    Calabi,
    Hcc,
    Full,
}

struct InputError(String);

fn load(file: Option<&PathBuf>, catalog_name: Option<&str>) -> Result<(String, CrystalGroup), InputError> {
    if let Some(name) = catalog_name {
        let entry = catalog::get(name).map_err(|e| InputError(e.to_string()))?;
        return Ok((entry.name, entry.group));
    }
    let path = file.ok_or_else(|| InputError("no group file or catalog name given".into()))?;
    let src = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let group = parse_group(&src).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok((path.display().to_string(), group))
}

fn load_bott(n: usize, source: &str) -> Result<(String, CrystalGroup), InputError> {
    let entry = match catalog::parse_bits(source) {
        Some(bits) => catalog::bott(n, &bits),
        _ => {
            let src = fs::read_to_string(source).map_err(|e| InputError(format!("{source}: {e}")))?;
            let m = parse_matrix(n, &src).map_err(|e| InputError(format!("{source}: {e}")))?;
            catalog::bott_from_matrix(&m)
        }
    }
    .map_err(|e| InputError(e.to_string()))?;
    Ok((entry.name, entry.group))
}

fn parse_matrix(n: usize, src: &str) -> Result<IntegerMatrix, String> {
    let mut entries = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (i, line) in src.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let row: Vec<i64> = body
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format!("line {}: expected an integer, found `{t}`", i + 1)))
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(format!("line {}: expected {n} entries, found {}", i + 1, row.len()));
        }
        entries.extend(row);
        rows += 1;
    }
    if rows != n {
        return Err(format!("expected {n} rows, found {rows}"));
    }
    Ok(IntegerMatrix::from_vec(n, n, entries.into_iter().map(Into::into).collect()))
}

fn section_passed(r: &FullReport, section: Section) -> bool {
    match section {
        Section::Validate => r.validation.passed(),
        Section::Invariants => r.invariants.is_some() && r.errors.is_empty(),
        Section::Calabi => {
            r.invariants.is_some()
                && r.errors.is_empty()
                && (r.k() == Some(0) || r.certificate.as_ref().is_some_and(|c| c.passed()))
        }
        Section::Hcc | Section::Full => r.passed(),
    }
}

fn section_json(r: &FullReport, section: Section) -> Value {
    let full = serde_json::to_value(r).expect("report serializes");
    let keys: &[&str] = match section {
        Section::Validate => &["group_name", "dim", "validation"],
        Section::Invariants => &["group_name", "dim", "validation", "h1", "betti", "center_rank", "k"],
        Section::Calabi => &["group_name", "dim", "k", "certificate", "errors"],
        Section::Hcc => &["group_name", "dim", "k", "betti", "hcc", "splitting_subgroup", "errors"],
        Section::Full => return full,
    };
    let mut out = serde_json::Map::new();
    for &key in keys {
        out.insert(key.into(), full[key].clone());
    }
    out.insert("passed".into(), json!(section_passed(r, section)));
    Value::Object(out)
}

fn section_text(r: &FullReport, section: Section) -> String {
    if let Section::Full = section {
        return r.to_text();
    }
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "== {} (dim {}) ==", r.group_name, r.dim).unwrap();
    if matches!(section, Section::Validate | Section::Invariants) || !r.validation.passed() {
        writeln!(w, "validation").unwrap();
        write!(w, "{}", r.validation).unwrap();
    }
    if let Some(inv) = &r.invariants {
        match section {
            Section::Invariants => {
                writeln!(w, "H_1          {}", inv.h1).unwrap();
                writeln!(w, "betti        {}", inv.betti).unwrap();
                writeln!(w, "center rank  {}", inv.center_rank).unwrap();
                writeln!(w, "k            {}", inv.k).unwrap();
            }
            Section::Calabi | Section::Hcc => {
                writeln!(w, "k            {}", inv.k).unwrap();
                writeln!(w, "betti        {}", inv.betti).unwrap();
            }
            _ => {}
        }
    }
    if let Section::Calabi = section {
        match &r.certificate {
            Some(c) => write_certificate(w, c),
            None if r.k() == Some(0) => writeln!(w, "certificate  none (k = 0)").unwrap(),
            None => {}
        }
    }
    if let Section::Hcc = section {
        if let Some(h) = &r.hcc {
            write_hcc(w, h);
        }
        if let Some(s) = &r.splitting_subgroup {
            writeln!(w, "splitting subgroup").unwrap();
            writeln!(w, "  index                    {}", s.index).unwrap();
            writeln!(w, "  generators               {}", s.generator_names.join(", ")).unwrap();
            writeln!(
                w,
                "  direct product           {}",
                if s.verified_direct_product { "verified" } else { "NOT verified" }
            )
            .unwrap();
        }
    }
    for e in &r.errors {
        writeln!(w, "error: {e}").unwrap();
    }
    writeln!(w, "result       {}", if section_passed(r, section) { "PASS" } else { "FAIL" }).unwrap();
    out
}

fn emit(reports: &[FullReport], section: Section, format: Format, many: bool) -> ExitCode {
    match format {
        Format::Json => {
            let values: Vec<Value> = reports.iter().map(|r| section_json(r, section)).collect();
            let value =
                if many { Value::Array(values) } else { values.into_iter().next().unwrap_or(Value::Null) };
            println!("{}", serde_json::to_string_pretty(&value).expect("json serializes"));
        }
        Format::Text => {
            let texts: Vec<String> = reports.iter().map(|r| section_text(r, section)).collect();
            print!("{}", texts.join("\n"));
            if many {
                let passed = reports.iter().filter(|r| section_passed(r, section)).count();
                println!("\n{passed}/{} passed", reports.len());
            }
        }
    }
    if reports.iter().all(|r| section_passed(r, section)) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, InputError> {
    let (section, args) = match cli.command {
        Command::Validate(a) => (Section::Validate, a),
        Command::Invariants(a) => (Section::Invariants, a),
        Command::Calabi(a) => (Section::Calabi, a),
        Command::Hcc(a) => (Section::Hcc, a),
        Command::Report(a) => {
            if a.all {
                let entries = catalog::all();
                let reports: Vec<FullReport> =
                    entries.par_iter().map(|e| full_report(&e.name, &e.group)).collect();
                return Ok(emit(&reports, Section::Full, a.format, true));
            }
            if a.file.is_none() && a.catalog.is_none() {
                return Err(InputError("report needs --all, a group file or --catalog <name>".into()));
            }
            let (name, group) = load(a.file.as_ref(), a.catalog.as_deref())?;
            return Ok(emit(&[full_report(&name, &group)], Section::Full, a.format, false));
        }
        Command::Catalog { action } => {
            match action {
                CatalogAction::List => {
                    for name in catalog::list() {
                        let e = catalog::get(&name).expect("listed entries exist");
                        println!("{:<16} {}", e.name, e.description);
                    }
                }
                CatalogAction::Get { name } => {
                    let e = catalog::get(&name).map_err(|e| InputError(e.to_string()))?;
                    print!("{}", write_group(&e.group, Some(&e.description)));
                }
            }
            return Ok(ExitCode::SUCCESS);
        }
        Command::Bott { n, source, format } => {
            let (name, group) = load_bott(n, &source)?;
            return Ok(emit(&[full_report(&name, &group)], Section::Full, format, false));
        }
    };
    let (name, group) = load(args.source.file.as_ref(), args.source.catalog.as_deref())?;
    Ok(emit(&[full_report(&name, &group)], section, args.format, false))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
