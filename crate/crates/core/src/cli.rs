//! `spiralkit solve | certify | serve`.
//!
//! Exit codes: 0 success, 1 input error, 2 no feasible solution (or nothing to
//! certify), 3 a stored spiral fails re-certification.

use std::fs;
use std::io::{self, Read, Write};
use std::net::IpAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::scene::{self, Alpha0Spec, ResultDocument, SpiralRecord};
use crate::spiral::{self, Branch, SpiralParams};
use crate::svg::{self, SvgOptions};
use crate::UnitVec2;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_TAMPERED: i32 = 3;

/// Position tolerance for stored contacts and junctions, relative to scale.
const POSITION_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "spiralkit", version, about = "G2 spiral transition curves between points and circles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a scene file and write a result document.
    Solve(SolveArgs),
    /// Re-certify every spiral stored in a result document.
    Certify(CertifyArgs),
    /// Run the local HTTP solve service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Scene JSON file, or `-` for stdin.
    pub scene: PathBuf,
    /// Where to write the result document; `-` is stdout.
    #[arg(short, long, default_value = "-")]
    pub output: PathBuf,
    /// Also render the result to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Replace the scene's shape parameters, e.g. `0.32` or `0.1,0.2,0.32`.
    #[arg(long, value_delimiter = ',')]
    pub alpha0: Option<Vec<f64>>,
    /// Replace the scene's branch.
    #[arg(long)]
    pub branch: Option<Branch>,
    /// Polyline segments per curve in the SVG.
    #[arg(long, default_value_t = svg::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Comb whisker length per unit curvature (default: automatic).
    #[arg(long)]
    pub comb_scale: Option<f64>,
    /// Draw control polygons in the SVG.
    #[arg(long)]
    pub control_polygon: bool,
    /// Leave out the curvature comb.
    #[arg(long)]
    pub no_comb: bool,
}

impl SolveArgs {
    pub fn new(scene: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        SolveArgs {
            scene: scene.into(),
            output: output.into(),
            svg: None,
            alpha0: None,
            branch: None,
            samples: svg::DEFAULT_SAMPLES,
            comb_scale: None,
            control_polygon: false,
            no_comb: false,
        }
    }

    fn svg_options(&self) -> SvgOptions {
        SvgOptions {
            samples: self.samples,
            comb_scale: self.comb_scale,
            show_control_polygon: self.control_polygon,
            show_comb: !self.no_comb,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    /// Result JSON file, or `-` for stdin.
    pub result: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
}

pub fn run(cli: Cli) -> i32 {
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    match cli.command {
        Command::Solve(a) => cmd_solve(&a, &mut out, &mut err),
        Command::Certify(a) => cmd_certify(&a.result, &mut out, &mut err),
        Command::Serve(a) => cmd_serve(&a, &mut err),
    }
}

fn read_input(path: &Path) -> io::Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path)
    }
}

fn write_output(path: &Path, bytes: &[u8], stdout: &mut dyn Write) -> io::Result<()> {
    if path.as_os_str() == "-" {
        stdout.write_all(bytes)?;
        stdout.flush()
    } else {
        fs::write(path, bytes)
    }
}

pub fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let bytes = match read_input(&args.scene) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", args.scene.display());
            return EXIT_INPUT;
        }
    };
    let mut scene = match scene::decode_scene(&bytes) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", args.scene.display());
            return EXIT_INPUT;
        }
    };
    if let Some(values) = &args.alpha0 {
        scene.alpha0 = match values.as_slice() {
            [a] => Alpha0Spec::Single(*a),
            v => Alpha0Spec::List(v.to_vec()),
        };
    }
    if let Some(b) = args.branch {
        scene.branch = b;
    }
    if let Err(e) = scene.validate() {
        let _ = writeln!(stderr, "error: {}: {e}", args.scene.display());
        return EXIT_INPUT;
    }

    let doc = scene::solve_scene(&scene);
    log::info!(
        "solved {} of {} shape parameters",
        doc.feasible_count(),
        doc.entries.len()
    );
    if let Err(e) = write_output(&args.output, &scene::write_result(&doc), stdout) {
        let _ = writeln!(stderr, "error: cannot write {}: {e}", args.output.display());
        return EXIT_INPUT;
    }
    for e in doc.entries.iter().filter(|e| !e.feasible) {
        if let Some(f) = &e.failure {
            let _ = writeln!(stderr, "alpha0 = {}: {}", e.alpha0, f.message);
        }
    }
    if doc.feasible_count() == 0 {
        return EXIT_INFEASIBLE;
    }
    if let Some(path) = &args.svg {
        let rendered = match svg::render_svg(&doc, &args.svg_options()) {
            Ok(b) => b,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_INPUT;
            }
        };
        if let Err(e) = fs::write(path, rendered) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
            return EXIT_INPUT;
        }
    }
    EXIT_OK
}

/// Outcome of re-checking a stored result document.
#[derive(Clone, Debug, PartialEq)]
pub enum Recertification {
    /// Every stored spiral passed; the count is included.
    Passed { spirals: usize },
    /// No feasible entry carries a spiral.
    Empty,
    Failed {
        entry: usize,
        spiral: usize,
        reason: String,
    },
}

/// Recovers the design parameters of a stored spiral from its control points.
fn stored_params(rec: &SpiralRecord, alpha0: f64) -> Option<SpiralParams> {
    let c = &rec.control_points;
    let t0 = c.tangent(0.0).ok()?;
    let t1: UnitVec2 = c.tangent(1.0).ok()?;
    let branch = if rec.end_radius < 0.0 { Branch::Right } else { Branch::Left };
    Some(
        SpiralParams::new(c.points[0], t0, t0.angle_to(t1).abs(), rec.end_radius.abs(), alpha0)
            .with_branch(branch),
    )
}

fn check_record(rec: &SpiralRecord, alpha0: f64) -> Result<(), String> {
    let c = &rec.control_points;
    let params = stored_params(rec, alpha0).ok_or("vanishing end derivative")?;
    let report = spiral::certify_spiral(c, &params, spiral::DEFAULT_SAMPLES);
    if let Some(why) = report.first_failure(&Default::default()) {
        return Err(why);
    }
    let scale = c.diameter().max(rec.end_radius.abs());
    let gap = (c.points[4].distance(rec.circle_center) - rec.end_radius.abs()).abs();
    if gap > POSITION_TOL * scale {
        return Err(format!("contact point off its circle by {gap:e}"));
    }
    Ok(())
}

/// Re-runs certification on every spiral in `doc`, plus the contact and
/// junction position checks.
pub fn recertify(doc: &ResultDocument) -> Recertification {
    let mut count = 0;
    for (i, e) in doc.entries.iter().enumerate() {
        if !e.feasible {
            continue;
        }
        for (j, rec) in e.spirals.iter().enumerate() {
            if let Err(reason) = check_record(rec, e.alpha0) {
                return Recertification::Failed {
                    entry: i,
                    spiral: j,
                    reason,
                };
            }
            count += 1;
        }
        if let [a, b] = e.spirals.as_slice() {
            let scale = a.control_points.diameter().max(b.control_points.diameter());
            let gap = a.control_points.points[0].distance(b.control_points.points[0]);
            if gap > POSITION_TOL * scale {
                return Recertification::Failed {
                    entry: i,
                    spiral: 1,
                    reason: format!("spirals do not share a junction point (gap {gap:e})"),
                };
            }
        }
    }
    if count == 0 {
        Recertification::Empty
    } else {
        Recertification::Passed { spirals: count }
    }
}

pub fn cmd_certify(path: &Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let bytes = match read_input(path) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", path.display());
            return EXIT_INPUT;
        }
    };
    let doc = match scene::parse_result(&bytes) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", path.display());
            return EXIT_INPUT;
        }
    };
    match recertify(&doc) {
        Recertification::Passed { spirals } => {
            let _ = writeln!(stdout, "ok: {spirals} spiral(s) certified");
            EXIT_OK
        }
        Recertification::Empty => {
            let _ = writeln!(stderr, "nothing to certify: no feasible entries with spirals");
            EXIT_INFEASIBLE
        }
        Recertification::Failed { entry, spiral, reason } => {
            let _ = writeln!(
                stderr,
                "entry {entry} (alpha0 = {}), spiral {spiral}: {reason}",
                doc.entries[entry].alpha0
            );
            EXIT_TAMPERED
        }
    }
}

pub fn cmd_serve(args: &ServeArgs, stderr: &mut dyn Write) -> i32 {
    let rt = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start runtime: {e}");
            return EXIT_INPUT;
        }
    };
    match rt.block_on(crate::service::serve(args.bind, args.port)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot serve on {}:{}: {e}", args.bind, args.port);
            EXIT_INPUT
        }
    }
}
