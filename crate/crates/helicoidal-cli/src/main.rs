//! Command-line front end for the helicoidal planners and admissibility
//! tools.
//!
//! All commands read JSON (files or stdin), write JSON (stdout or `--out`),
//! and are deterministic given the configuration and seed: object keys come
//! out sorted and floats in shortest round-trip decimal form, so repeated
//! runs are byte-identical. Exit codes: 0 success, 1 invalid input,
//! 2 planner/solver failure.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nalgebra::{Vector3, Vector4};
use serde::Deserialize;
use serde_json::{json, Value};

use helicoidal::admissible::{
    circular_helicoid_check, jacobi_admissible, ruled_admissible, screw_admissible,
    substantial_rank, JacobiData, ScrewParams,
};
use helicoidal::lines::{helicoid_point, HelicoidalFrame};
use helicoidal::planner::{
    plan_helicoidal_3, plan_homogeneous_2, plan_parallel, two_piece_residual, TwoPieceGrid,
};
use helicoidal::quatsphere::{hopf_classify, HopfClass, HopfClassifyOptions};
use helicoidal::{
    Curvature, GeomError, Isometry, OrientedGeodesic, PlannerError, SpacePoint, TangentVector,
};

#[derive(Parser)]
#[command(
    name = "helicoidal",
    version,
    about = "Helicoidal motion planning on spaces of oriented geodesics"
)]
struct Cli {
    /// JSON file with default configuration values; flags override fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Angular speed of the helicoidal motions.
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,

    /// Curvature of the space form (-1, 0 or 1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    kappa: Option<i64>,

    /// Numerical tolerance for plan endpoints and admissibility residuals.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,

    /// Seed for the deterministic sampling operations.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Sample count for the rank computation.
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Grid sizes as SxT (mesh sampling, residual search).
    #[arg(long, global = true, value_name = "SxT")]
    grid: Option<String>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Join two oriented lines by at most three helicoidal pieces
    /// (one translation piece when alpha = 0 and the lines are parallel).
    Plan {
        /// JSON file with the source geodesic; stdin object {"source","target"} when omitted.
        source: Option<PathBuf>,
        /// JSON file with the target geodesic.
        target: Option<PathBuf>,
    },
    /// Join two oriented lines by at most two admissible screw motions.
    PlanScrew {
        source: Option<PathBuf>,
        target: Option<PathBuf>,
    },
    /// Evaluate an admissibility criterion on JSON input
    /// ({"type":"jacobi"|"ruled"|"screw"|"circular-helicoid", ...}).
    CheckAdmissible { input: Option<PathBuf> },
    /// Classify a JSON list of oriented great circles against the Hopf slices.
    ClassifySphere { circles: Option<PathBuf> },
    /// Report the substantiality rank over a grid of angular speeds.
    Rank,
    /// Export the swept helicoid surface of one piece as a Wavefront mesh.
    Sweep {
        /// JSON file with the piece ({"line","p","a","alpha","duration"}).
        piece: Option<PathBuf>,
        /// Half-width of the ray parameter range s in [-s_max, s_max].
        #[arg(long, default_value_t = 1.0)]
        s_max: f64,
    },
    /// Grid search for the closest two-piece approach to the reversed line.
    #[command(name = "residual-2piece")]
    Residual2Piece { line: Option<PathBuf> },
}

/// Resolved configuration: file values overridden by flags, with the
/// documented defaults.
struct RunConfig {
    alpha: f64,
    kappa: Curvature,
    tol: f64,
    seed: u64,
    samples: usize,
    grid: (usize, usize),
    out: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    alpha: Option<f64>,
    kappa: Option<i64>,
    tol: Option<f64>,
    seed: Option<u64>,
    samples: Option<usize>,
    grid: Option<String>,
    out: Option<PathBuf>,
}

enum CliError {
    /// Malformed or inconsistent input: exit code 1.
    Invalid(String),
    /// A planner or solver could not reach its target: exit code 2.
    Solver(String),
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<PlannerError> for CliError {
    fn from(e: PlannerError) -> Self {
        match e {
            PlannerError::Geom(g) => CliError::Invalid(g.to_string()),
            other => CliError::Solver(other.to_string()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn parse_grid(text: &str) -> Result<(usize, usize), CliError> {
    let (s, t) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| invalid(format!("grid must look like 64x64, got {text:?}")))?;
    let s = s
        .trim()
        .parse::<usize>()
        .map_err(|e| invalid(format!("grid: {e}")))?;
    let t = t
        .trim()
        .parse::<usize>()
        .map_err(|e| invalid(format!("grid: {e}")))?;
    Ok((s, t))
}

impl RunConfig {
    fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let file: FileConfig = match &cli.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| invalid(format!("config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let grid_text = cli.grid.clone().or(file.grid);
        let grid = match grid_text {
            Some(g) => parse_grid(&g)?,
            None => (64, 64),
        };
        let config = RunConfig {
            alpha: cli.alpha.or(file.alpha).unwrap_or(1.0),
            kappa: Curvature::from_int(cli.kappa.or(file.kappa).unwrap_or(0))?,
            tol: cli.tol.or(file.tol).unwrap_or(1e-7),
            seed: cli.seed.or(file.seed).unwrap_or(0),
            samples: cli.samples.or(file.samples).unwrap_or(128),
            grid,
            out: cli.out.clone().or(file.out),
        };
        if config.tol.is_nan() || config.tol <= 0.0 {
            return Err(invalid("tol must be positive"));
        }
        if config.samples < 1 {
            return Err(invalid("samples must be at least 1"));
        }
        if config.grid.0 < 2 || config.grid.1 < 2 {
            return Err(invalid("grid counts must be at least 2"));
        }
        Ok(config)
    }
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) => {
            fs::read_to_string(p).map_err(|e| invalid(format!("cannot read {}: {e}", p.display())))
        }
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| invalid(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| invalid(format!("{what}: {e}")))
}

/// Emit a value with sorted keys and shortest round-trip floats, either to
/// the configured file or to stdout.
fn emit(config: &RunConfig, value: &Value) -> Result<(), CliError> {
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(value).expect("serializable")
    );
    match &config.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_pair(
    source: Option<&Path>,
    target: Option<&Path>,
) -> Result<(OrientedGeodesic, OrientedGeodesic), CliError> {
    match (source, target) {
        (Some(s), Some(t)) => {
            let src = parse_json(&read_input(Some(s))?, "source geodesic")?;
            let tgt = parse_json(&read_input(Some(t))?, "target geodesic")?;
            Ok((src, tgt))
        }
        (None, None) => {
            #[derive(Deserialize)]
            struct Pair {
                source: OrientedGeodesic,
                target: OrientedGeodesic,
            }
            let pair: Pair = parse_json(&read_input(None)?, "stdin pair")?;
            Ok((pair.source, pair.target))
        }
        _ => Err(invalid(
            "provide both SOURCE and TARGET files, or neither (stdin)",
        )),
    }
}

fn cmd_plan(
    config: &RunConfig,
    src: OrientedGeodesic,
    tgt: OrientedGeodesic,
    screws: bool,
) -> Result<(), CliError> {
    let plan = if screws {
        plan_homogeneous_2(&src, &tgt, config.alpha, config.tol)?
    } else if config.alpha == 0.0 {
        plan_parallel(&src, &tgt, config.tol)?
    } else {
        plan_helicoidal_3(&src, &tgt, config.alpha, config.tol)?
    };
    let value = serde_json::to_value(&plan).expect("plan serializes");
    emit(config, &value)
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum CheckInput {
    Jacobi {
        kappa: i64,
        sigma_base: [f64; 4],
        sigma_dir: [f64; 4],
        u: [f64; 4],
        v: [f64; 4],
        #[serde(default)]
        a: f64,
    },
    Ruled {
        beta_dot0: [f64; 3],
        v0: [f64; 3],
        vdot0: [f64; 3],
    },
    Screw {
        theta: f64,
        lambda: f64,
        rho: f64,
        eta: f64,
    },
    CircularHelicoid {
        r: f64,
    },
}

fn cmd_check(config: &RunConfig, input: CheckInput) -> Result<(), CliError> {
    let value = match input {
        CheckInput::Jacobi {
            kappa,
            sigma_base,
            sigma_dir,
            u,
            v,
            a,
        } => {
            let kappa = Curvature::from_int(kappa)?;
            let base = SpacePoint::new(kappa, Vector4::from(sigma_base))?;
            let sigma = TangentVector::new(base, Vector4::from(sigma_dir))?;
            let u = TangentVector::new(base, Vector4::from(u))?;
            let v = TangentVector::new(base, Vector4::from(v))?;
            let data = JacobiData::unit_speed(sigma, u, v, a)?;
            let ok = jacobi_admissible(&data, config.alpha, config.tol)?;
            json!({"schema": "check/v1", "criterion": "jacobi", "alpha": config.alpha,
                   "admissible": ok})
        }
        CheckInput::Ruled {
            beta_dot0,
            v0,
            vdot0,
        } => {
            let ok = ruled_admissible(
                Vector3::from(beta_dot0),
                Vector3::from(v0),
                Vector3::from(vdot0),
                config.alpha,
                config.tol,
            )?;
            json!({"schema": "check/v1", "criterion": "ruled", "alpha": config.alpha,
                   "admissible": ok})
        }
        CheckInput::Screw {
            theta,
            lambda,
            rho,
            eta,
        } => {
            let params = ScrewParams::new(
                theta,
                lambda,
                rho,
                eta,
                Isometry::identity(Curvature::Euclidean),
            )?;
            let ok = screw_admissible(&params, config.alpha, config.tol)?;
            json!({"schema": "check/v1", "criterion": "screw", "alpha": config.alpha,
                   "admissible": ok})
        }
        CheckInput::CircularHelicoid { r } => {
            let (speed, ok) = circular_helicoid_check(r, config.alpha)?;
            json!({"schema": "check/v1", "criterion": "circular-helicoid",
                   "alpha": config.alpha, "r": r, "ruling_speed": speed, "admissible": ok})
        }
    };
    emit(config, &value)
}

fn cmd_classify(config: &RunConfig, circles: Vec<OrientedGeodesic>) -> Result<(), CliError> {
    let class = hopf_classify(&circles, HopfClassifyOptions::default())?;
    let value = match class {
        HopfClass::LeftHopf { z } => json!({
            "schema": "classify/v1", "class": "left-hopf", "z": [z[0], z[1], z[2]],
        }),
        HopfClass::RightHopf { z } => json!({
            "schema": "classify/v1", "class": "right-hopf", "z": [z[0], z[1], z[2]],
        }),
        HopfClass::BothConstant { x, y } => json!({
            "schema": "classify/v1", "class": "both-constant",
            "x": [x[0], x[1], x[2]], "y": [y[0], y[1], y[2]],
        }),
        HopfClass::NotHopf => json!({"schema": "classify/v1", "class": "not-hopf"}),
    };
    emit(config, &value)
}

fn cmd_rank(config: &RunConfig) -> Result<(), CliError> {
    // a symmetric grid of angular speeds; the critical values ±√κ, where
    // real, are the integers ±1 and 0 and sit on the grid already
    let alphas = [-3.0, -2.0, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 2.0, 3.0];
    let entries: Vec<Value> = alphas
        .iter()
        .map(|&alpha| {
            let rank = substantial_rank(config.kappa, alpha, config.samples.max(4), config.seed);
            let critical = alpha * alpha == config.kappa.value();
            json!({
                "alpha": alpha,
                "rank": rank,
                "controllable": rank == 4,
                "critical": critical,
            })
        })
        .collect();
    let value = json!({
        "schema": "rank/v1",
        "kappa": config.kappa.as_int(),
        "samples": config.samples.max(4),
        "seed": config.seed,
        "entries": entries,
    });
    emit(config, &value)
}

#[derive(Deserialize)]
struct SweepPiece {
    line: OrientedGeodesic,
    p: [f64; 4],
    a: [f64; 4],
    alpha: f64,
    duration: f64,
}

fn cmd_sweep(config: &RunConfig, piece: SweepPiece, s_max: f64) -> Result<(), CliError> {
    let base = SpacePoint::new(piece.line.kappa(), Vector4::from(piece.p))?;
    let axis = TangentVector::new(base, Vector4::from(piece.a))?;
    let frame = HelicoidalFrame::new(piece.line, base, axis, piece.alpha)?;
    let (ns, nt) = config.grid;
    if s_max.is_nan() || s_max <= 0.0 {
        return Err(invalid("s_max must be positive"));
    }
    if !piece.duration.is_finite() || piece.duration <= 0.0 {
        return Err(invalid("sweep needs a piece with positive finite duration"));
    }

    // vertices in row-major order: the ray parameter s varies in the outer
    // loop, the axis parameter t in the inner one
    let mut text = String::new();
    for i in 0..ns {
        let s = -s_max + 2.0 * s_max * i as f64 / (ns - 1) as f64;
        for j in 0..nt {
            let t = piece.duration * j as f64 / (nt - 1) as f64;
            let point = helicoid_point(&frame, s, t)?;
            let c = point.coords();
            if frame.kappa() == Curvature::Euclidean {
                text.push_str(&format!("v {} {} {}\n", c[1], c[2], c[3]));
            } else {
                // embedded quadric vertices keep all four coordinates
                text.push_str(&format!("v {} {} {} {}\n", c[0], c[1], c[2], c[3]));
            }
        }
    }
    // each grid cell splits into two triangles wound consistently with the
    // surface normal ∂s × ∂t
    let index = |i: usize, j: usize| i * nt + j + 1;
    for i in 0..ns - 1 {
        for j in 0..nt - 1 {
            let (a, b, c, d) = (
                index(i, j),
                index(i + 1, j),
                index(i + 1, j + 1),
                index(i, j + 1),
            );
            text.push_str(&format!("f {a} {b} {c}\n"));
            text.push_str(&format!("f {a} {c} {d}\n"));
        }
    }

    match &config.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_residual(config: &RunConfig, line: OrientedGeodesic) -> Result<(), CliError> {
    if config.alpha == 0.0 {
        return Err(invalid("the two-piece search needs alpha != 0"));
    }
    let grid = TwoPieceGrid {
        s_steps: config.grid.0,
        t0_steps: config.grid.1,
        t1_steps: config.grid.1,
        phi_steps: 8,
        ..TwoPieceGrid::default()
    };
    let residual = two_piece_residual(&line, config.alpha, &grid)?;
    let value = json!({
        "schema": "residual/v1",
        "alpha": config.alpha,
        "grid_points": grid.total_points(),
        "residual": residual,
    });
    emit(config, &value)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = RunConfig::resolve(&cli)?;
    match &cli.command {
        Command::Plan { source, target } => {
            let (s, t) = load_pair(source.as_deref(), target.as_deref())?;
            cmd_plan(&config, s, t, false)
        }
        Command::PlanScrew { source, target } => {
            let (s, t) = load_pair(source.as_deref(), target.as_deref())?;
            cmd_plan(&config, s, t, true)
        }
        Command::CheckAdmissible { input } => {
            let parsed = parse_json(&read_input(input.as_deref())?, "admissibility input")?;
            cmd_check(&config, parsed)
        }
        Command::ClassifySphere { circles } => {
            let parsed: Vec<OrientedGeodesic> =
                parse_json(&read_input(circles.as_deref())?, "circle list")?;
            if parsed.is_empty() {
                return Err(invalid("circle list must be nonempty"));
            }
            cmd_classify(&config, parsed)
        }
        Command::Rank => cmd_rank(&config),
        Command::Sweep { piece, s_max } => {
            let parsed = parse_json(&read_input(piece.as_deref())?, "helicoidal piece")?;
            cmd_sweep(&config, parsed, *s_max)
        }
        Command::Residual2Piece { line } => {
            let parsed = match line {
                Some(path) => parse_json(&read_input(Some(path))?, "line")?,
                None => OrientedGeodesic::x_axis(),
            };
            cmd_residual(&config, parsed)
        }
    }
}

fn main() -> ExitCode {
    // route argument errors to exit code 1 (invalid input); code 2 is
    // reserved for planner/solver failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Solver(msg)) => {
            eprintln!("planner failure: {msg}");
            ExitCode::from(2)
        }
    }
}
