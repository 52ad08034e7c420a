//! Command-line front end: parse the shared formats, run a computation, and
//! emit text, JSON, or SVG. Exit codes: 0 success, 1 domain error (the error
//! name is printed), 2 parse error.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::RngCore;

use crate::homext::{ext_dim, hom_dim};
use crate::index::{additivity_defect, index};
use crate::jsonio;
use crate::oracle::{self, Window};
use crate::render::{render_svg, render_triangulation, RenderSpec};
use crate::surface::{Arc, ModelParams, Obj};
use crate::textio;
use crate::triangles::extension_triangle;
use crate::triangulation::FanTriangulation;

#[derive(Parser, Debug)]
#[command(name = "discarc", version, about = "Exact arc combinatorics on the completed marked disc")]
struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ModelArg {
    /// Number of accumulation points; inferred from the inputs when omitted.
    #[arg(short = 'n', long = "n")]
    n: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension of the morphism space between two arcs.
    Hom {
        b: String,
        c: String,
        #[command(flatten)]
        model: ModelArg,
    },
    /// Dimension of the extension space of the first arc by the second.
    Ext {
        c: String,
        a: String,
        #[command(flatten)]
        model: ModelArg,
    },
    /// The distinguished triangle realizing the extension of C by A.
    Triangle {
        c: String,
        a: String,
        #[command(flatten)]
        model: ModelArg,
    },
    /// Index vector of an object with respect to a triangulation.
    Index {
        #[arg(short = 't', long = "triangulation")]
        triangulation: PathBuf,
        object: String,
    },
    /// Flip a member arc; prints the mutated triangulation document.
    Flip {
        #[arg(short = 't', long = "triangulation")]
        triangulation: PathBuf,
        arc: String,
    },
    /// Additivity defect of the extension triangle of C by A.
    Defect {
        #[arg(short = 't', long = "triangulation")]
        triangulation: PathBuf,
        c: String,
        a: String,
    },
    /// Run the windowed verification suites against a triangulation.
    Verify {
        #[arg(short = 't', long = "triangulation")]
        triangulation: PathBuf,
        #[arg(long, default_value_t = 8)]
        window: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Draw a triangulation or an arc list as SVG.
    Render {
        #[arg(short = 't', long = "triangulation")]
        triangulation: Option<PathBuf>,
        /// JSON file with a list of arcs to draw.
        #[arg(long)]
        arcs: Option<PathBuf>,
        #[command(flatten)]
        model: ModelArg,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 6)]
        window: u32,
        #[arg(long, default_value_t = 640)]
        width: u32,
        #[arg(long)]
        labels: bool,
    },
}

enum AppError {
    Parse(String),
    Domain(String),
}

impl AppError {
    fn exit_code(&self) -> i32 {
        match self {
            AppError::Parse(_) => 2,
            AppError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Parse(m) | AppError::Domain(m) => m,
        }
    }
}

fn parse_err(e: impl std::fmt::Display) -> AppError {
    AppError::Parse(e.to_string())
}

fn domain_err(e: impl std::fmt::Display) -> AppError {
    AppError::Domain(e.to_string())
}

/// Infer or validate the model parameter for loose-arc commands.
fn resolve_params(model: &ModelArg, points: &[crate::surface::MarkedPoint]) -> Result<ModelParams, AppError> {
    let needed = points.iter().map(|p| p.interval() + 1).max().unwrap_or(1);
    let n = model.n.unwrap_or(needed);
    let params = ModelParams::new(n).map_err(parse_err)?;
    for p in points {
        if !params.contains_point(*p) {
            return Err(AppError::Parse(format!(
                "ParseError: point {p} is outside the model with n = {n}"
            )));
        }
    }
    Ok(params)
}

fn load_triangulation(path: &PathBuf) -> Result<FanTriangulation, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Parse(format!("ParseError: cannot read {}: {e}", path.display())))?;
    jsonio::triangulation_from_json(&text).map_err(parse_err)
}

fn parse_arc_arg(text: &str) -> Result<Arc, AppError> {
    textio::parse_arc(text).map_err(parse_err)
}

fn parse_obj_arg(text: &str) -> Result<Obj, AppError> {
    textio::parse_obj(text).map_err(parse_err)
}

fn arc_points(arcs: &[Arc]) -> Vec<crate::surface::MarkedPoint> {
    arcs.iter().flat_map(|a| [a.lo(), a.hi()]).collect()
}

fn check_in_model(params: ModelParams, arcs: &[Arc]) -> Result<(), AppError> {
    for arc in arcs {
        if !params.contains_arc(arc) {
            return Err(AppError::Parse(format!(
                "ParseError: arc {arc} is outside the model with n = {}",
                params.n()
            )));
        }
    }
    Ok(())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Hom { b, c, model } => {
            let (b, c) = (parse_arc_arg(&b)?, parse_arc_arg(&c)?);
            resolve_params(&model, &arc_points(&[b, c]))?;
            let d = hom_dim(&b, &c);
            if cli.json {
                println!("{{\"hom\": {d}}}");
            } else {
                println!("{d}");
            }
            Ok(())
        }
        Command::Ext { c, a, model } => {
            let (c, a) = (parse_arc_arg(&c)?, parse_arc_arg(&a)?);
            resolve_params(&model, &arc_points(&[c, a]))?;
            let d = ext_dim(&c, &a);
            if cli.json {
                println!("{{\"ext\": {d}}}");
            } else {
                println!("{d}");
            }
            Ok(())
        }
        Command::Triangle { c, a, model } => {
            let (c, a) = (parse_arc_arg(&c)?, parse_arc_arg(&a)?);
            resolve_params(&model, &arc_points(&[c, a]))?;
            let t = extension_triangle(&c, &a).map_err(domain_err)?;
            if cli.json {
                let doc = serde_json::json!({
                    "case": t.kind().to_string(),
                    "first": jsonio::obj_repr(t.first()),
                    "middle": jsonio::obj_repr(t.middle()),
                    "last": jsonio::obj_repr(t.last()),
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("document serializes"));
            } else {
                println!("{t}");
            }
            Ok(())
        }
        Command::Index { triangulation, object } => {
            let tri = load_triangulation(&triangulation)?;
            let obj = parse_obj_arg(&object)?;
            check_in_model(tri.params(), obj.summands())?;
            let v = index(&tri, &obj).map_err(domain_err)?;
            if cli.json {
                println!("{}", jsonio::index_vector_to_json(&v));
            } else {
                println!("{v}");
            }
            Ok(())
        }
        Command::Flip { triangulation, arc } => {
            let tri = load_triangulation(&triangulation)?;
            let arc = parse_arc_arg(&arc)?;
            check_in_model(tri.params(), &[arc])?;
            let (flipped, _) = tri.flip(&arc).map_err(domain_err)?;
            println!("{}", jsonio::triangulation_to_json(&flipped));
            Ok(())
        }
        Command::Defect { triangulation, c, a } => {
            let tri = load_triangulation(&triangulation)?;
            let (c, a) = (parse_arc_arg(&c)?, parse_arc_arg(&a)?);
            check_in_model(tri.params(), &[c, a])?;
            let t = extension_triangle(&c, &a).map_err(domain_err)?;
            let d = additivity_defect(&tri, &t).map_err(domain_err)?;
            if cli.json {
                println!("{}", jsonio::index_vector_to_json(&d));
            } else {
                println!("{d}");
            }
            Ok(())
        }
        Command::Verify { triangulation, window, seed } => {
            let tri = load_triangulation(&triangulation)?;
            let seed = seed.unwrap_or_else(|| rand::thread_rng().next_u64());
            let report = run_verify(&tri, Window(window), seed);
            println!("{{\"seed\": {seed}}}");
            for check in &report.checks {
                println!(
                    "{}",
                    serde_json::to_string(check).expect("check records serialize")
                );
            }
            let color = std::env::var_os("NO_COLOR").is_none();
            let verdict = if report.passed() {
                if color { "\x1b[32mPASS\x1b[0m" } else { "PASS" }.to_string()
            } else {
                if color { "\x1b[31mFAIL\x1b[0m" } else { "FAIL" }.to_string()
            };
            println!("{verdict}: {} (seed {seed})", report.summary());
            if report.passed() {
                Ok(())
            } else {
                Err(AppError::Domain("VerificationFailed: see report above".into()))
            }
        }
        Command::Render { triangulation, arcs, model, out, window, width, labels } => {
            let spec = RenderSpec {
                width,
                stroke_width: 1.5,
                label_points: labels,
                window: Window(window),
            };
            let svg = match (&triangulation, &arcs) {
                (Some(path), None) => {
                    let tri = load_triangulation(path)?;
                    render_triangulation(&tri, &spec)
                }
                (tri_path, Some(arc_path)) => {
                    let tri = tri_path.as_ref().map(load_triangulation).transpose()?;
                    let text = fs::read_to_string(arc_path).map_err(|e| {
                        AppError::Parse(format!("ParseError: cannot read {}: {e}", arc_path.display()))
                    })?;
                    let reprs: Vec<jsonio::ArcRepr> =
                        serde_json::from_str(&text).map_err(parse_err)?;
                    let params = match &tri {
                        Some(t) => t.params(),
                        None => {
                            let pts: Vec<_> = reprs
                                .iter()
                                .flat_map(|r| {
                                    [crate::surface::MarkedPoint::from(r.0), r.1.into()]
                                })
                                .collect();
                            resolve_params(&model, &pts)?
                        }
                    };
                    let mut list: Vec<Arc> = reprs
                        .into_iter()
                        .map(|r| jsonio::arc_from_repr(r, params).map_err(parse_err))
                        .collect::<Result<_, _>>()?;
                    if let Some(t) = &tri {
                        list.extend(t.members_in_window(spec.window));
                    }
                    render_svg(params, &list, &spec)
                }
                (None, None) => {
                    return Err(AppError::Parse(
                        "ParseError: render needs --triangulation or --arcs".into(),
                    ))
                }
            };
            fs::write(&out, svg)
                .map_err(|e| AppError::Domain(format!("IoError: cannot write {}: {e}", out.display())))?;
            Ok(())
        }
    }
}

/// The bundled verification run behind `discarc verify`.
fn run_verify(tri: &FanTriangulation, window: Window, seed: u64) -> oracle::Report {
    use rand::SeedableRng;
    let mut report = oracle::Report::default();
    let params = tri.params();

    let validation = tri.validate_window(Window(window.0.min(6)));
    report.record(
        "triangulation window validation",
        validation.pass(),
        validation
            .crossings
            .first()
            .map(|(a, b)| format!("members {a} and {b} cross"))
            .or_else(|| validation.not_maximal.first().map(|a| format!("{a} uncovered"))),
    );

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..40 {
        let c = oracle::random_arc(&mut rng, params, Window(4));
        match crate::index::approximation_triangle(tri, &c) {
            Ok(t) => {
                let x0 = t.middle().clone();
                report.merge(oracle::verify_approximation(tri, &c, &x0, window));
                report.merge(oracle::verify_kill_consistency(tri, &t, window));
                report.record(
                    format!("approximation connecting map killed {c}"),
                    crate::index::triangle_connecting_killed(&t, tri),
                    None,
                );
            }
            Err(e) => report.record("approximation construction", false, Some(e.to_string())),
        }
    }

    report.merge(oracle::verify_defect_invariance(tri, 25, window, seed ^ 1));

    // Rule consistency samples: the two hammock formulations agree, and the
    // extension dimension is the morphism dimension into the suspension.
    let arcs = oracle::enumerate_arcs(params, Window(3));
    let mut consistent = true;
    'outer: for b in &arcs {
        for c in &arcs {
            if hom_dim(b, c) != crate::homext::hom_dim_source_rule(b, c) {
                consistent = false;
                break 'outer;
            }
            if ext_dim(c, b) != hom_dim(c, &b.suspend(1)) {
                consistent = false;
                break 'outer;
            }
        }
    }
    report.record("hammock rule consistency", consistent, None);

    if tri.is_rigid() {
        let flip_candidates: Vec<Arc> = tri
            .members_in_window(Window(2))
            .into_iter()
            .filter(|a| tri.flip(a).is_ok())
            .take(2)
            .collect();
        if !flip_candidates.is_empty() {
            match oracle::verify_mutation(tri, &flip_candidates, 40, Window(4), seed ^ 2) {
                Ok(r) => report.merge(r),
                Err(e) => report.record("mutation suite", false, Some(e.to_string())),
            }
        }
    }
    report
}
