//! `hypertet` command-line interface.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypertet::format::{sig17, to_json};
use hypertet::membership::{edge_label, face_label, vertex_label};
use hypertet::{
    boundary_path, build, classify, export_off, gram_from_angles, measure, midpoint_counterexample,
    milnor_check, slice, DihedralAngles, Kind, SliceSpec, Verdict, DEFAULT_TOL,
};
use serde_json::json;

/// Exit status for malformed invocations; 0-2 are reserved for `check`.
const EXIT_USAGE: u8 = 3;
/// Exit status for valid invocations that could not be carried out.
const EXIT_FAILURE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "hypertet",
    version,
    about = "Dihedral angles of compact hyperbolic tetrahedra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an angle vector (exit 0 interior, 1 boundary, 2 exterior).
    Check {
        /// Six angles in radians: e12,e13,e14,e23,e24,e34.
        #[arg(long, allow_hyphen_values = true)]
        angles: DihedralAngles,
        /// Half-width of the equality band.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Construct the tetrahedron realizing an interior angle vector.
    Build {
        #[arg(long, allow_hyphen_values = true)]
        angles: DihedralAngles,
        #[arg(long, value_enum, default_value_t = BuildFormat::Json)]
        format: BuildFormat,
        /// Write to FILE instead of standard output.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Gram matrix, principal minors and the Gram-matrix criterion.
    Gram {
        #[arg(long, allow_hyphen_values = true)]
        angles: DihedralAngles,
        #[arg(long)]
        json: bool,
    },
    /// Classify a 2-D grid of angle vectors.
    Slice {
        #[command(flatten)]
        slice: SliceArgs,
        /// CSV output file.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Optional binary PGM image.
        #[arg(long, value_name = "FILE")]
        pgm: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Search a slice for two interior points with an exterior midpoint.
    Nonconvex {
        #[command(flatten)]
        slice: SliceArgs,
    },
    /// Three-stage path from an interior point to the boundary.
    Path {
        #[arg(long, allow_hyphen_values = true)]
        angles: DihedralAngles,
        #[arg(long, default_value_t = 11)]
        samples_per_stage: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(clap::Args)]
struct SliceArgs {
    /// Pinned edges, e.g. e14=1.3,e23=1.3,e24=1.3,e34=1.3.
    #[arg(long)]
    fixed: String,
    /// The two swept edges, e.g. e12,e13.
    #[arg(long)]
    free: String,
    /// LO:HI:N for both axes, or two ranges separated by a comma.
    #[arg(long)]
    range: String,
}

impl SliceArgs {
    fn spec(&self) -> Result<SliceSpec, Failure> {
        SliceSpec::parse(&self.fixed, &self.free, &self.range)
            .map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildFormat {
    Json,
    Off,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn runtime(e: impl ToString) -> Failure {
    Failure::Runtime(e.to_string())
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".to_string(), sig17)
}

fn verdict_text(v: &Verdict) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind: {}", v.kind);
    for (title, items) in [
        ("angles in (0, pi/2]", &v.condition1),
        ("vertex sums > pi", &v.condition2),
        ("face-angle sums < pi", &v.condition3),
    ] {
        let _ = writeln!(out, "{title}:");
        for it in items {
            let _ = writeln!(
                out,
                "  {:<5} {:>22}  {:?}",
                it.label,
                fmt_opt(it.value),
                it.status
            );
        }
    }
    let codes = v.codes();
    let _ = writeln!(
        out,
        "codes: {}",
        if codes.is_empty() { "-" } else { &codes }
    );
    out
}

fn run_check(
    angles: &DihedralAngles,
    tol: f64,
    as_json: bool,
    out: &mut String,
) -> Result<u8, Failure> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Failure::Usage(format!(
            "--tol must be a finite non-negative number, got {tol}"
        )));
    }
    let v = classify(angles, tol);
    if as_json {
        let _ = writeln!(
            out,
            "{}",
            to_json(&json!({ "angles": angles, "codes": v.codes(), "verdict": v }))
        );
    } else {
        out.push_str(&verdict_text(&v));
    }
    Ok(match v.kind {
        Kind::Interior => 0,
        Kind::Boundary => 1,
        Kind::Exterior => 2,
    })
}

fn run_build(
    angles: &DihedralAngles,
    format: BuildFormat,
    file: Option<&PathBuf>,
    out: &mut String,
) -> Result<(), Failure> {
    let t = build(angles).map_err(runtime)?;
    let text = match format {
        BuildFormat::Off => export_off(&t),
        BuildFormat::Json => {
            let m = measure(&t);
            let edges: serde_json::Map<String, serde_json::Value> =
                (0..6).map(|e| (edge_label(e), json!(m.edges[e]))).collect();
            let dihedrals: serde_json::Map<String, serde_json::Value> = (0..6)
                .map(|e| (edge_label(e), json!(m.dihedrals.0[e])))
                .collect();
            let doc = json!({
                "angles": angles,
                "normals": t.normals.map(|n| n.vec().to_array()),
                "vertex_labels": (0..4).map(vertex_label).collect::<Vec<_>>(),
                "vertices_hyperboloid": t.vertices.map(|p| p.vec().to_array()),
                "vertices_ball": t.vertices.map(|p| p.to_ball().coords()),
                "edge_lengths": edges,
                "measured_dihedrals": dihedrals,
            });
            to_json(&doc) + "\n"
        }
    };
    match file {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            out.push_str(&text);
            Ok(())
        }
    }
}

fn run_gram(angles: &DihedralAngles, as_json: bool, out: &mut String) -> Result<(), Failure> {
    let m = gram_from_angles(angles);
    let rep = milnor_check(&m, DEFAULT_TOL);
    if as_json {
        let _ = writeln!(
            out,
            "{}",
            to_json(&json!({ "angles": angles, "matrix": m.0, "report": rep }))
        );
        return Ok(());
    }
    let _ = writeln!(out, "matrix:");
    for row in &m.0 {
        let _ = writeln!(
            out,
            "  {}",
            row.map(|x| format!("{:>22}", sig17(x))).join(" ")
        );
    }
    let _ = writeln!(out, "det: {}", sig17(rep.det));
    let _ = writeln!(out, "proper principal minors:");
    for r in &rep.minors {
        let faces: Vec<String> = r.indices.iter().map(|&i| face_label(i)).collect();
        let pd = if r.positive_definite {
            "positive definite"
        } else {
            "not positive definite"
        };
        let _ = writeln!(
            out,
            "  {:<10} det {:>22}  {pd}",
            faces.join(","),
            sig17(r.determinant)
        );
    }
    let _ = writeln!(out, "det negative: {}", rep.det_negative);
    let _ = writeln!(
        out,
        "minors positive definite: {}",
        rep.minors_positive_definite
    );
    let _ = writeln!(out, "realizable: {}", rep.valid);
    Ok(())
}

fn run_slice(
    spec: &SliceSpec,
    out: &PathBuf,
    pgm: Option<&PathBuf>,
    threads: Option<usize>,
) -> Result<(), Failure> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(runtime)?;
    let grid = pool.install(|| slice(spec)).map_err(runtime)?;
    write_file(out, grid.to_csv().as_bytes())?;
    if let Some(p) = pgm {
        write_file(p, &grid.to_pgm())?;
    }
    eprintln!(
        "{} nodes: {} interior, {} boundary, {} exterior",
        grid.cells.len(),
        grid.count(Kind::Interior),
        grid.count(Kind::Boundary),
        grid.count(Kind::Exterior)
    );
    Ok(())
}

fn run_nonconvex(spec: &SliceSpec, out: &mut String) -> Result<(), Failure> {
    match midpoint_counterexample(spec).map_err(runtime)? {
        Some(c) => out.push_str(&(to_json(&c) + "\n")),
        None => out.push_str("none\n"),
    }
    Ok(())
}

fn run_path(
    angles: &DihedralAngles,
    samples: usize,
    as_json: bool,
    out: &mut String,
) -> Result<(), Failure> {
    let trace = boundary_path(angles, samples).map_err(|e| match e {
        hypertet::ExploreError::InvalidSpec(m) => Failure::Usage(m),
        other => runtime(other),
    })?;
    if as_json {
        let _ = writeln!(out, "{}", to_json(&trace));
        return Ok(());
    }
    for (k, st) in trace.stages.iter().enumerate() {
        let edges: Vec<String> = st.scaled_edges.iter().map(|&e| edge_label(e)).collect();
        let _ = writeln!(
            out,
            "stage {}: scale {} from 1 to {}; {} becomes ideal",
            k + 1,
            edges.join(","),
            sig17(st.breakpoint),
            vertex_label(st.saturated_vertex)
        );
    }
    let _ = writeln!(out, "stage,parameter,e12,e13,e14,e23,e24,e34,kind,codes");
    for s in &trace.samples {
        let a: Vec<String> = s.angles.0.iter().map(|&x| sig17(x)).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.stage,
            sig17(s.parameter),
            a.join(","),
            s.verdict.kind,
            s.verdict.codes()
        );
    }
    Ok(())
}

/// Runs a command, collecting its standard output in `out`.
fn run(cli: Cli, out: &mut String) -> Result<u8, Failure> {
    match cli.command {
        Command::Check { angles, tol, json } => run_check(&angles, tol, json, out),
        Command::Build {
            angles,
            format,
            out: file,
        } => run_build(&angles, format, file.as_ref(), out).map(|()| 0),
        Command::Gram { angles, json } => run_gram(&angles, json, out).map(|()| 0),
        Command::Slice {
            slice,
            out: file,
            pgm,
            threads,
        } => run_slice(&slice.spec()?, &file, pgm.as_ref(), threads).map(|()| 0),
        Command::Nonconvex { slice } => run_nonconvex(&slice.spec()?, out).map(|()| 0),
        Command::Path {
            angles,
            samples_per_stage,
            json,
        } => run_path(&angles, samples_per_stage, json, out).map(|()| 0),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let mut out = String::new();
    let res = run(cli, &mut out);
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout
        .write_all(out.as_bytes())
        .and_then(|()| stdout.flush())
    {
        // A closed pipe (e.g. `| head`) is not an error.
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    }
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
