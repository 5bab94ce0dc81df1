//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage or domain error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ap_atlas::families::{one_d_profile, Solution};
use ap_atlas::figures::{self, FigureId, FigureSpec};
use ap_atlas::params::{HomogeneityParams, Tolerances};
use ap_atlas::report::{fmt_sig, write_atomic, Table};
use ap_atlas::special::{scan_admissible_m, ProfileContext, UpsilonProfile};
use ap_atlas::verify::{self, Check};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "ap-atlas", version, about = "Homogeneous solutions of Δu = γ u^(γ-1) in the plane")]
struct Cli {
    /// Relative tolerance of the Ψ quadrature.
    #[arg(long, global = true)]
    tol_quad: Option<f64>,
    /// Absolute tolerance of the y_* root finder.
    #[arg(long, global = true)]
    tol_root: Option<f64>,
    /// Output file, or output directory for `figures`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON file mirroring the flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Svg,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a solution at points.
    Eval(EvalArgs),
    /// Tabulate y_* and t_* over m.
    Tstar(TstarArgs),
    /// Sample Υ and its derivatives on [0, 2 t_*].
    Profile(ProfileArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Regenerate figure data.
    Figures(FiguresArgs),
}

#[derive(Args, Debug, Default)]
struct Exponent {
    /// Homogeneity degree.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "gamma")]
    a: Option<f64>,
    /// Exponent of the nonlinearity.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    Radial,
    HalfPlane,
    Slab,
    Cone,
    Implicit,
    ExplicitA2,
    OneD,
    MultiFlap,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[command(flatten)]
    exponent: Exponent,
    /// First-integral constant.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
    /// Cone parameter.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Counter-clockwise rotation applied to the solution.
    #[arg(long, allow_hyphen_values = true)]
    rotation: Option<f64>,
    /// A flap `rotation,c`; repeat for each flap.
    #[arg(long = "flap", allow_hyphen_values = true)]
    flaps: Vec<String>,
    /// A point `x1,x2`; repeat for several.
    #[arg(long = "point", allow_hyphen_values = true)]
    points: Vec<String>,
}

#[derive(Args, Debug)]
struct TstarArgs {
    #[command(flatten)]
    exponent: Exponent,
    /// Comma-separated values of m.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    m: Vec<f64>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[command(flatten)]
    exponent: Exponent,
    /// First-integral constant.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
    /// Number of intervals; rows are samples + 1.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    ClosedForms,
    OracleTriangle,
    NegativeControls,
    Matrix,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
}

#[derive(Args, Debug)]
struct FiguresArgs {
    /// 1-7 or `surfaces`.
    id: String,
    /// `key=value` replacing a caption binding (a, m, c, samples, grid).
    #[arg(long = "override")]
    overrides: Vec<String>,
}

/// Values accepted from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    tol_quad: Option<f64>,
    tol_root: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    a: Option<f64>,
    gamma: Option<f64>,
    m: Option<OneOrMany>,
    c: Option<f64>,
    rotation: Option<f64>,
    family: Option<Family>,
    samples: Option<usize>,
    suite: Option<Suite>,
    #[serde(default)]
    points: Vec<[f64; 2]>,
    #[serde(default)]
    flaps: Vec<[f64; 2]>,
    #[serde(default, rename = "override")]
    overrides: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn single(&self) -> Result<f64, Failure> {
        match self {
            OneOrMany::One(v) => Ok(*v),
            OneOrMany::Many(v) if v.len() == 1 => Ok(v[0]),
            OneOrMany::Many(_) => Err(Failure::usage("config: m must be a single number here")),
        }
    }

    fn list(&self) -> Vec<f64> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

enum Failure {
    /// Usage or domain error, exit 2.
    Usage(String),
    /// Some verification check failed, exit 1.
    Verification(usize),
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }
}

impl From<ap_atlas::Error> for Failure {
    fn from(e: ap_atlas::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Context {
    tol: Tolerances,
    out: Option<PathBuf>,
    format: Format,
    config: ConfigFile,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(n)) => {
            eprintln!("verification failed: {n} check(s) did not pass");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("AP_ATLAS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("AP_ATLAS_THREADS must be a non-negative integer, got '{raw}'")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("cannot size the thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("invalid config {}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let defaults = Tolerances::default();
    let tol = Tolerances {
        quad_rel: cli.tol_quad.or(config.tol_quad).unwrap_or(defaults.quad_rel),
        root_abs: cli.tol_root.or(config.tol_root).unwrap_or(defaults.root_abs),
        ..defaults
    }
    .validated()?;
    let ctx = Context {
        tol,
        out: cli.out.or_else(|| config.out.clone()),
        format: cli.format.or(config.format).unwrap_or(Format::Csv),
        config,
    };
    match cli.command {
        Command::Eval(args) => cmd_eval(&ctx, args),
        Command::Tstar(args) => cmd_tstar(&ctx, args),
        Command::Profile(args) => cmd_profile(&ctx, args),
        Command::Verify(args) => cmd_verify(&ctx, args),
        Command::Figures(args) => cmd_figures(&ctx, args),
    }
}

/// `a` or `gamma` from the flags, else from the config.
fn resolve_params(ctx: &Context, e: &Exponent, default_a: Option<f64>) -> Result<HomogeneityParams, Failure> {
    let (a, gamma) = if e.a.is_some() || e.gamma.is_some() {
        (e.a, e.gamma)
    } else {
        (ctx.config.a, ctx.config.gamma)
    };
    match (a, gamma) {
        (Some(_), Some(_)) => Err(Failure::usage("give exactly one of a and gamma")),
        (Some(a), None) => Ok(HomogeneityParams::from_a(a)?),
        (None, Some(g)) => Ok(HomogeneityParams::from_gamma(g)?),
        (None, None) => match default_a {
            Some(a) => Ok(HomogeneityParams::from_a(a)?),
            None => Err(Failure::usage("one of --a or --gamma is required")),
        },
    }
}

fn config_m(ctx: &Context) -> Result<Option<f64>, Failure> {
    ctx.config.m.as_ref().map(OneOrMany::single).transpose()
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), Failure> {
    let parsed = s
        .split_once(',')
        .and_then(|(x, y)| Some((x.trim().parse::<f64>().ok()?, y.trim().parse::<f64>().ok()?)));
    parsed.ok_or_else(|| Failure::usage(format!("{what} '{s}' is not of the form x,y")))
}

/// Prints to stdout or writes atomically to `--out`.
fn emit(ctx: &Context, contents: &str) -> Result<(), Failure> {
    match &ctx.out {
        Some(path) => write_atomic(path, contents.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn reject_svg(ctx: &Context, cmd: &str) -> Result<(), Failure> {
    if ctx.format == Format::Svg {
        return Err(Failure::usage(format!("{cmd} supports --format csv or json")));
    }
    Ok(())
}

fn build_solution(ctx: &Context, args: &EvalArgs) -> Result<(Solution, HomogeneityParams), Failure> {
    let family = args
        .family
        .or(ctx.config.family)
        .ok_or_else(|| Failure::usage("--family is required"))?;
    let m = args.m.map(Ok).or_else(|| config_m(ctx).transpose()).transpose()?;
    let c = args.c.or(ctx.config.c);
    let default_a = match family {
        Family::Cone | Family::MultiFlap => Some(0.5),
        Family::ExplicitA2 => Some(2.0),
        _ => None,
    };
    let params = resolve_params(ctx, &args.exponent, default_a)?;
    let need_m = || m.ok_or_else(|| Failure::usage("--m is required for this family"));
    let sol = match family {
        Family::Radial => Solution::radial(params)?,
        Family::HalfPlane | Family::OneD => Solution::half_plane(params),
        Family::Slab => Solution::slab(params),
        Family::Cone => Solution::resonant_cone(params, c.ok_or_else(|| Failure::usage("--c is required for the cone"))?)?,
        Family::Implicit => {
            let profile = UpsilonProfile::new(ProfileContext::with_tolerances(params.a(), need_m()?, ctx.tol)?);
            Solution::implicit(profile)?
        }
        Family::ExplicitA2 => {
            if params.a() != 2.0 {
                return Err(Failure::usage("explicit-a2 requires a = 2"));
            }
            Solution::explicit_a2(need_m()?)?
        }
        Family::MultiFlap => {
            let mut flaps = args
                .flaps
                .iter()
                .map(|f| parse_pair(f, "flap"))
                .collect::<Result<Vec<_>, _>>()?;
            if flaps.is_empty() {
                flaps = ctx.config.flaps.iter().map(|f| (f[0], f[1])).collect();
            }
            if params.a() != 0.5 {
                return Err(Failure::usage("multi-flap solutions require a = 1/2"));
            }
            Solution::multi_flap(&flaps)?
        }
    };
    let rotation = args.rotation.or(ctx.config.rotation).unwrap_or(0.0);
    Ok((sol.rotated(rotation), params))
}

fn cmd_eval(ctx: &Context, args: EvalArgs) -> Result<(), Failure> {
    reject_svg(ctx, "eval")?;
    let (sol, params) = build_solution(ctx, &args)?;
    let one_d = args.family.or(ctx.config.family) == Some(Family::OneD);
    let mut points = args
        .points
        .iter()
        .map(|p| parse_pair(p, "point"))
        .collect::<Result<Vec<_>, _>>()?;
    if points.is_empty() {
        points = ctx.config.points.iter().map(|p| (p[0], p[1])).collect();
    }
    if points.is_empty() {
        return Err(Failure::usage("at least one --point x1,x2 is required"));
    }
    let values = points
        .iter()
        .map(|&(x1, x2)| {
            if !x1.is_finite() || !x2.is_finite() {
                return Err(Failure::usage(format!("point ({x1}, {x2}) is not finite")));
            }
            if one_d {
                Ok(one_d_profile(params.gamma(), x2)?)
            } else {
                Ok(sol.evaluate(x1, x2))
            }
        })
        .collect::<Result<Vec<f64>, Failure>>()?;
    let text = match ctx.format {
        Format::Json => json_text(&json!({
            "solution": if one_d { "one-d".to_string() } else { sol.label() },
            "values": points.iter().zip(&values).map(|((x1, x2), u)| json!({"x1": x1, "x2": x2, "u": u})).collect::<Vec<_>>(),
        })),
        _ => {
            let mut t = Table::new(["x1", "x2", "u"]);
            for ((x1, x2), u) in points.iter().zip(&values) {
                t.push(vec![fmt_sig(*x1), fmt_sig(*x2), fmt_sig(*u)]);
            }
            t.to_csv()?
        }
    };
    emit(ctx, &text)
}

fn cmd_tstar(ctx: &Context, args: TstarArgs) -> Result<(), Failure> {
    reject_svg(ctx, "tstar")?;
    let params = resolve_params(ctx, &args.exponent, None)?;
    let mut grid = if args.m.is_empty() {
        ctx.config.m.as_ref().map(OneOrMany::list).unwrap_or_default()
    } else {
        args.m
    };
    if grid.is_empty() {
        return Err(Failure::usage("--m is required (comma-separated list)"));
    }
    if grid.iter().any(|m| !m.is_finite()) {
        return Err(Failure::usage("m values must be finite"));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let rows = scan_admissible_m(params.a(), &grid, ctx.tol);
    let text = match ctx.format {
        Format::Json => json_text(&json!({ "a": params.a(), "rows": rows })),
        _ => {
            let mut t = Table::new(["m", "y_star", "t_star", "admissible", "error"]);
            let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_default();
            for r in &rows {
                t.push(vec![
                    fmt_sig(r.m),
                    opt(r.y_star),
                    opt(r.t_star),
                    r.admissible.to_string(),
                    r.error.clone().unwrap_or_default(),
                ]);
            }
            t.to_csv()?
        }
    };
    emit(ctx, &text)?;
    if rows.iter().all(|r| r.error.is_some()) {
        return Err(Failure::usage("no value of m produced a profile"));
    }
    Ok(())
}

fn cmd_profile(ctx: &Context, args: ProfileArgs) -> Result<(), Failure> {
    let params = resolve_params(ctx, &args.exponent, None)?;
    let m = match args.m {
        Some(m) => m,
        None => config_m(ctx)?.ok_or_else(|| Failure::usage("--m is required"))?,
    };
    let samples = args.samples.or(ctx.config.samples).unwrap_or(400);
    if samples < 2 || samples % 2 == 1 {
        return Err(Failure::usage("--samples must be even and at least 2"));
    }
    let profile = UpsilonProfile::new(ProfileContext::with_tolerances(params.a(), m, ctx.tol)?);
    let points = figures::curve_points(&profile, samples)?;
    let (d1_left, d2_edge) = profile.boundary_derivatives();
    let mut rows = Vec::with_capacity(points.len());
    for (i, &(t, y)) in points.iter().enumerate() {
        let (dy, d2y) = if i == 0 {
            (d1_left, d2_edge)
        } else if i == samples {
            (-d1_left, d2_edge)
        } else {
            (profile.upsilon_prime(t)?, profile.upsilon_second(t)?)
        };
        rows.push([t, y, dy, d2y]);
    }
    let text = match ctx.format {
        Format::Json => json_text(&json!({
            "a": params.a(),
            "m": m,
            "y_star": profile.y_star(),
            "t_star": profile.t_star(),
            "rows": rows.iter().map(|r| json!({"t": r[0], "upsilon": r[1], "upsilon_prime": r[2], "upsilon_second": r[3]})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut t = Table::new(["t", "upsilon", "upsilon_prime", "upsilon_second"]);
            for r in &rows {
                t.push(r.iter().map(|v| fmt_sig(*v)).collect());
            }
            t.to_csv()?
        }
        Format::Svg => {
            let spec = FigureSpec {
                a: params.a(),
                m: vec![m],
                samples,
                ..FigureSpec::caption(FigureId::CurvesSublinear)
            };
            let files = figures::render(&spec, ctx.tol)?;
            files
                .into_iter()
                .find(|f| f.file_name.ends_with(".svg"))
                .map(|f| f.contents)
                .expect("curve figures include an SVG")
        }
    };
    emit(ctx, &text)
}

fn cmd_verify(ctx: &Context, args: VerifyArgs) -> Result<(), Failure> {
    reject_svg(ctx, "verify")?;
    let suite = args.suite.or(ctx.config.suite).unwrap_or(Suite::ClosedForms);
    let a = args.a.or(ctx.config.a);
    let m = match args.m {
        Some(m) => Some(m),
        None => config_m(ctx)?,
    };
    let checks: Vec<Check> = match suite {
        Suite::ClosedForms => verify::closed_forms_suite(),
        Suite::OracleTriangle => {
            let (a, m) = (a.unwrap_or(2.0), m.unwrap_or(1.0));
            HomogeneityParams::from_a(a)?;
            verify::oracle_triangle(a, m)
        }
        Suite::NegativeControls => verify::negative_controls(),
        Suite::Matrix => verify::verification_matrix(),
        Suite::All => {
            let mut all = verify::closed_forms_suite();
            all.extend(verify::negative_controls());
            all.extend(verify::verification_matrix());
            all
        }
    };
    let text = match ctx.format {
        Format::Json => json_text(&serde_json::to_value(&checks).expect("serializable")),
        _ => {
            let mut t = Table::new(["check", "threshold", "measured", "pass", "detail"]);
            for c in &checks {
                t.push(vec![
                    c.check.clone(),
                    fmt_sig(c.threshold),
                    fmt_sig(c.measured),
                    c.pass.to_string(),
                    c.detail.clone().unwrap_or_default(),
                ]);
            }
            t.to_csv()?
        }
    };
    emit(ctx, &text)?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    eprintln!("{} checks, {failed} failed", checks.len());
    if failed > 0 {
        return Err(Failure::Verification(failed));
    }
    Ok(())
}

fn cmd_figures(ctx: &Context, args: FiguresArgs) -> Result<(), Failure> {
    let id: FigureId = args.id.parse()?;
    let mut spec = FigureSpec::caption(id);
    let overrides = if args.overrides.is_empty() { &ctx.config.overrides } else { &args.overrides };
    for kv in overrides {
        spec.apply_override(kv)?;
    }
    let dir = ctx.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
    let files = figures::render(&spec, ctx.tol)?;
    let mut written = Vec::with_capacity(files.len());
    for f in &files {
        let path: PathBuf = Path::new(&dir).join(&f.file_name);
        write_atomic(&path, f.contents.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    match ctx.format {
        Format::Json => print!("{}", json_text(&json!({ "figure": id.stem(), "files": written }))),
        _ => {
            for w in written {
                println!("{w}");
            }
        }
    }
    Ok(())
}
