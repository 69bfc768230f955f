//! Command-line front end for the gridfloer toolkit.
//!
//! Exit codes: 0 on success, 1 on a domain failure (verification failure,
//! contradiction, infeasible bounds, size limit), 2 on usage or parse
//! errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use gridfloer::data;
use gridfloer::engine::session::{parse_session, render_session_json, run_session};
use gridfloer::grid::homology::{tilde_homology_with_limit, tilde_to_hat};
use gridfloer::grid::{parse_grid, GridError};
use gridfloer::hfk::{parse_hfk, verify_table, HfkTable};
use gridfloer::pd::alexander::alexander_polynomial;
use gridfloer::pd::twist::{insert_full_twist_with_undo, StrandDir, TwistSign, TwistSite};
use gridfloer::pd::{parse_pd, PdError};
use gridfloer::torsion::{
    lemma_diagonal_check, maxmax_torsion_bound, minmax_torsion_bound, torsion_interval,
};

#[derive(Parser)]
#[command(name = "gridfloer", version, about = "Grid knot Floer homology, torsion bounds, and unknotting derivations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the command's primary artifact to this file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the hat-flavor homology table of a `.grd` grid diagram.
    ComputeHfk {
        grid: PathBuf,
        /// Largest accepted grid size.
        #[arg(long, default_value_t = 10)]
        max_grid: usize,
    },
    /// Torsion-order bounds and certificate from a `.hfk` table.
    Bounds {
        table: PathBuf,
        /// Externally known upper bound on the torsion order.
        #[arg(long)]
        external_upper: Option<u32>,
    },
    /// Normalized Alexander polynomial of a `.pd` diagram.
    Alexander { pd: PathBuf },
    /// Insert a full twist along a disk transversal.
    Twist {
        pd: PathBuf,
        /// Strands in boundary order, e.g. `3u,7d` (edge label + direction).
        #[arg(long)]
        strands: String,
        /// Handedness: `right` or `left`.
        #[arg(long, default_value = "right")]
        sign: String,
    },
    /// Run a derivation session and print traces.
    Derive { session: PathBuf },
    /// Check the bundled tables and diagrams against the manifest.
    VerifyData {
        /// Verify an on-disk copy of the data directory instead.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

enum AppError {
    Usage(String),
    Domain(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Domain(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Usage(e.to_string())
}

fn domain<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Domain(e.to_string())
}

fn pd_error(e: PdError) -> AppError {
    match e {
        PdError::AlexanderInternal(_) => domain(e),
        _ => usage(e),
    }
}

fn grid_error(e: GridError) -> AppError {
    match e {
        GridError::SizeLimit { .. }
        | GridError::DifferentialSquare { .. }
        | GridError::NotDivisible { .. }
        | GridError::BadRectangleGrading { .. } => domain(e),
        _ => usage(e),
    }
}

fn read(path: &Path) -> Result<String, AppError> {
    std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read `{}`: {e}", path.display())))
}

struct Report {
    text: String,
    json: String,
    artifact: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if let Some(out) = &cli.out {
                if let Err(e) = std::fs::write(out, &report.artifact) {
                    eprintln!("error: cannot write `{}`: {e}", out.display());
                    return ExitCode::from(2);
                }
            }
            if cli.json {
                println!("{}", report.json.trim_end());
            } else {
                println!("{}", report.text.trim_end());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: &Cli) -> Result<Report, AppError> {
    match &cli.command {
        Command::ComputeHfk { grid, max_grid } => compute_hfk(grid, *max_grid),
        Command::Bounds { table, external_upper } => bounds(table, *external_upper),
        Command::Alexander { pd } => alexander(pd),
        Command::Twist { pd, strands, sign } => twist(pd, strands, sign),
        Command::Derive { session } => derive(session),
        Command::VerifyData { data_dir } => verify_data(data_dir.as_deref()),
    }
}

fn compute_hfk(path: &Path, max_grid: usize) -> Result<Report, AppError> {
    let grid = parse_grid(&read(path)?).map_err(grid_error)?;
    let tilde = tilde_homology_with_limit(&grid, max_grid).map_err(grid_error)?;
    let hat = tilde_to_hat(&tilde).map_err(grid_error)?;
    let named = hat.with_name(
        path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
    );
    let (verify, _) = verify_table(&named);

    let mut text = String::new();
    text.push_str(&format!(
        "grid size {}, blocked homology of total dimension {}\n",
        grid.size(),
        tilde.total_dim()
    ));
    text.push_str(&named.to_csv());
    text.push_str(&render_verify_text(&verify));
    let json = pretty(&json!({
        "grid_size": grid.size(),
        "tilde_total_dim": tilde.total_dim(),
        "cells": cells_json(&named),
        "verify": verify,
    }));
    Ok(Report { text, json, artifact: named.to_csv() })
}

fn render_verify_text(v: &gridfloer::hfk::VerifyReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "total dimension {} ({})\n",
        v.total_dim,
        if v.parity_pass { "odd" } else { "even: FAIL" }
    ));
    if v.symmetry.pass {
        s.push_str("symmetry d(mu, A) = d(mu - 2A, -A): pass\n");
    } else {
        s.push_str(&format!("symmetry: FAIL at {:?}\n", v.symmetry.offenders));
    }
    s.push_str(&format!(
        "Euler characteristic {} (value 1 at t = 1: {})\n",
        v.euler,
        if v.euler_pass { "pass" } else { "FAIL" }
    ));
    s.push_str(&format!("verified: {}\n", if v.verified { "yes" } else { "NO" }));
    s
}

fn cells_json(tab: &HfkTable) -> serde_json::Value {
    serde_json::Value::Array(
        tab.cells()
            .into_iter()
            .map(|((mu, a), d)| json!({"mu": mu, "A": a, "dim": d}))
            .collect(),
    )
}

fn bounds(path: &Path, external_upper: Option<u32>) -> Result<Report, AppError> {
    let text = read(path)?;
    let table = if path.extension().is_some_and(|e| e == "json") {
        gridfloer::hfk::parse_hfk_json(&text).map_err(usage)?
    } else {
        parse_hfk(&text).map_err(usage)?
    };
    let (verify, verified) = verify_table(&table);
    let Some(vt) = verified else {
        return Err(domain(format!(
            "table `{}` failed verification; bounds require a verified table\n{}",
            path.display(),
            render_verify_text(&verify)
        )));
    };
    let lemma = lemma_diagonal_check(&vt);
    let (minmax, certificate) = minmax_torsion_bound(&vt).map_err(domain)?;
    let maxmax = maxmax_torsion_bound(&vt).map_err(domain)?;
    let interval = torsion_interval(&vt, external_upper).map_err(domain)?;

    let mut text = String::new();
    let name = table.name().unwrap_or("table");
    text.push_str(&format!("bounds for {name} (total dimension {})\n", table.total_dim()));
    text.push_str(&format!(
        "diagonal bound: {} (green cell (0,0) with dimension {}",
        lemma.value, lemma.green.1
    ));
    if lemma.red.is_empty() {
        text.push_str(")\n");
    } else {
        let red: Vec<String> =
            lemma.red.iter().map(|(mu, a)| format!("({mu},{a})")).collect();
        text.push_str(&format!("; empty red cells {})\n", red.join(" ")));
    }
    text.push_str(&format!("pairing bounds: min-max {minmax}, max-max {maxmax}\n"));
    if let Some(u) = external_upper {
        text.push_str(&format!("external upper bound: {u}\n"));
    }
    let upper = interval.upper.expect("table intervals are bounded");
    text.push_str(&format!("torsion order interval: [{}, {}]\n", interval.lower, upper));
    text.push_str(&format!(
        "certificate: {} pair classes, free generator at ({}, {}), largest offset {}\n",
        certificate.pairs.len(),
        certificate.free.0,
        certificate.free.1,
        certificate.max_n
    ));
    for (t, count) in &certificate.pairs {
        text.push_str(&format!(
            "  {count} x U^{} pair ({}, {}) -> ({}, {})\n",
            t.n, t.lower.0, t.lower.1, t.upper.0, t.upper.1
        ));
    }

    let json = pretty(&json!({
        "table": table.name(),
        "total_dim": table.total_dim(),
        "lemma": lemma,
        "minmax": minmax,
        "maxmax": maxmax,
        "external_upper": external_upper,
        "interval": {"lower": interval.lower, "upper": interval.upper},
        "certificate": certificate,
    }));
    Ok(Report { text, json: json.clone(), artifact: json })
}

fn alexander(path: &Path) -> Result<Report, AppError> {
    let pd = parse_pd(&read(path)?).map_err(pd_error)?;
    let poly = alexander_polynomial(&pd).map_err(pd_error)?;
    let text = format!(
        "crossings: {}\nAlexander polynomial: {poly}\n",
        pd.crossing_count()
    );
    let json = pretty(&json!({
        "crossings": pd.crossing_count(),
        "alexander": poly.to_string(),
        "alexander_is_one": poly.is_one(),
    }));
    Ok(Report { text, json: json.clone(), artifact: json })
}

fn parse_strands(list: &str) -> Result<Vec<(u32, StrandDir)>, AppError> {
    let mut out = Vec::new();
    for part in list.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if part.len() < 2 {
            return Err(usage(format!("bad strand `{part}`: expected e.g. `3u` or `7d`")));
        }
        let (num, dir) = part.split_at(part.len() - 1);
        let edge: u32 = num
            .parse()
            .map_err(|_| usage(format!("bad strand `{part}`: expected e.g. `3u` or `7d`")))?;
        let dir = match dir {
            "u" | "U" => StrandDir::Up,
            "d" | "D" => StrandDir::Down,
            _ => return Err(usage(format!("bad direction in `{part}`: use `u` or `d`"))),
        };
        out.push((edge, dir));
    }
    Ok(out)
}

fn twist(path: &Path, strands: &str, sign: &str) -> Result<Report, AppError> {
    let pd = parse_pd(&read(path)?).map_err(pd_error)?;
    let sign = match sign {
        "right" | "rh" | "+1" | "+" => TwistSign::Right,
        "left" | "lh" | "-1" | "-" => TwistSign::Left,
        other => return Err(usage(format!("bad sign `{other}`: use `right` or `left`"))),
    };
    let site = TwistSite::new(parse_strands(strands)?, sign).map_err(usage)?;
    let (out, undo) = insert_full_twist_with_undo(&pd, &site).map_err(pd_error)?;
    let undo_desc: Vec<String> = undo
        .strands
        .iter()
        .map(|(e, d)| format!("{e}{}", if *d == StrandDir::Up { "u" } else { "d" }))
        .collect();
    let text = format!(
        "inserted a full twist on {} strands: {} -> {} crossings\nundo site: --strands {} --sign {}\n{}",
        site.width(),
        pd.crossing_count(),
        out.crossing_count(),
        undo_desc.join(","),
        if undo.sign == TwistSign::Right { "right" } else { "left" },
        out.to_pd_text()
    );
    let json = pretty(&json!({
        "strands": site.width(),
        "crossings_before": pd.crossing_count(),
        "crossings_after": out.crossing_count(),
        "undo_strands": undo_desc.join(","),
        "undo_sign": if undo.sign == TwistSign::Right { "right" } else { "left" },
        "pd": out.to_pd_text(),
    }));
    Ok(Report { text, json, artifact: out.to_pd_text() })
}

fn derive(path: &Path) -> Result<Report, AppError> {
    let input = parse_session(&read(path)?).map_err(usage)?;
    let (_, output) = run_session(&input).map_err(|e| match e {
        gridfloer::engine::EngineError::Contradiction { .. }
        | gridfloer::engine::EngineError::AuditFailed { .. } => domain(e),
        other => usage(other),
    })?;

    let mut text = String::new();
    if let Some(d) = &output.description {
        text.push_str(&format!("# {d}\n"));
    }
    text.push_str(&format!(
        "asserted {} facts, derived {} new facts (trace audit passed)\n",
        output.asserted, output.derived
    ));
    for q in &output.queries {
        use gridfloer::engine::BoundKind;
        let headline = match (q.kind, q.derived) {
            (BoundKind::UnknottingGe, _) => format!("u({}) >= {}", q.knot, q.value),
            (BoundKind::UnknottingLe, true) => format!("u({}) <= {}", q.knot, q.value),
            (BoundKind::UnknottingLe, false) => {
                format!("u({}): no upper bound derived", q.knot)
            }
            (BoundKind::TorsionInterval, _) => format!("t({}) in {}", q.knot, q.value),
            (BoundKind::AlexanderOne, _) => {
                format!("Alexander polynomial of {} is 1: {}", q.knot, q.value)
            }
            (BoundKind::Properties, _) => format!("properties of {}: {}", q.knot, q.value),
        };
        text.push_str(&format!("\n{headline}\n"));
        if let Some(note) = &q.note {
            text.push_str(&format!("  note: {note}\n"));
        }
        for line in &q.trace {
            text.push_str(&format!("  {line}\n"));
        }
    }
    let json = render_session_json(&output);
    Ok(Report { text, json: json.clone(), artifact: json })
}

fn verify_data(dir: Option<&Path>) -> Result<Report, AppError> {
    let report = data::verify_bundle(dir).map_err(domain)?;
    let mut text = String::new();
    for f in &report.files {
        let status = if f.pass { "ok" } else { "FAIL" };
        let mut detail = format!("checksum {}", if f.checksum_ok { "ok" } else { "MISMATCH" });
        if let Some(t) = &f.table {
            detail.push_str(&format!(
                ", table {}",
                if t.verified { "verified" } else { "NOT verified" }
            ));
        }
        text.push_str(&format!("{status:4} {:24} {detail}\n", f.path));
    }
    text.push_str(&format!("bundle: {}\n", if report.pass { "pass" } else { "FAIL" }));
    let json = pretty(&serde_json::to_value(&report).expect("serializable"));
    if !report.pass {
        return Err(domain(format!("data verification failed\n{text}")));
    }
    Ok(Report { text, json: json.clone(), artifact: json })
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}
