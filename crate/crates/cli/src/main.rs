use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morsenov_core::argmap::examples::{f_mn, g_eps, g_eps_expectation};
use morsenov_core::argmap::{
    check_link_radius, crit_points_arg_rational, crit_points_milnor, BivariateMero, RationalMap,
    SolverConfig, C64,
};
use morsenov_core::{
    alexander_from_seifert, alexander_via_burau, deplumb_braid_surface, eval,
    minimize_inhomogeneity, seifert_matrix_from_braid, Braidword, Citation, IntMatrix, LaurentPoly,
    SeifertMatrix, SurfaceExpr,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "morsenov", version, about = "Braids, Seifert matrices, Murasugi sums and argument maps")]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    #[command(subcommand)]
    Braid(BraidCmd),
    #[command(subcommand)]
    Seifert(SeifertCmd),
    /// Alexander polynomial of a closed braid or a Seifert matrix.
    Alexander(AlexanderArgs),
    /// Split A(O, 0) plumbands off the braid surface.
    Deplumb(WordArgs),
    #[command(subcommand)]
    Expr(ExprCmd),
    #[command(subcommand)]
    Argmap(ArgmapCmd),
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Strictness, inhomogeneity and the Morse-Novikov bound 2I.
    Analyze(WordArgs),
    /// Search braid-equivalent words for a smaller inhomogeneity.
    Minimize {
        #[command(flatten)]
        word: WordArgs,
        /// Number of distinct words to visit.
        #[arg(long, default_value_t = 2000)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum SeifertCmd {
    /// Seifert matrix of the braid surface.
    Matrix(WordArgs),
}

#[derive(Subcommand)]
enum ExprCmd {
    /// Evaluate a surface expression given as JSON.
    Eval(JsonArgs),
}

#[derive(Subcommand)]
enum ArgmapCmd {
    /// Critical points of arg R for a rational map R.
    Rational(RationalArgs),
    /// Critical points of a Milnor map on a sphere in C^2.
    Milnor(MilnorArgs),
    /// Check that the zero/pole divisor meets the sphere transversally.
    Radius(RadiusArgs),
}

#[derive(Args)]
struct WordArgs {
    /// Braidword such as "s1 s1 -s2" or "1,1,-2".
    #[arg(long, visible_alias = "braid", allow_hyphen_values = true)]
    word: String,
    #[arg(long)]
    strands: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Seifert,
    Burau,
    Both,
}

#[derive(Args)]
struct AlexanderArgs {
    #[arg(long, visible_alias = "word", allow_hyphen_values = true, required_unless_present = "matrix", requires = "strands")]
    braid: Option<String>,
    #[arg(long)]
    strands: Option<usize>,
    /// Seifert matrix as JSON rows, e.g. "[[-1,1],[0,-1]]".
    #[arg(long, conflicts_with = "braid")]
    matrix: Option<String>,
    #[arg(long, value_enum, default_value = "seifert")]
    method: Method,
}

#[derive(Args)]
struct JsonArgs {
    /// Inline JSON.
    #[arg(long, required_unless_present = "input")]
    expr: Option<String>,
    /// File holding the JSON.
    #[arg(long, conflicts_with = "expr")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct RationalArgs {
    /// Ascending numerator coefficients, comma separated.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "input", requires = "den")]
    num: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    den: Option<String>,
    /// JSON file {"num": [...], "den": [...]}.
    #[arg(long, conflicts_with = "num")]
    input: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MapSource {
    /// JSON {"P": [...], "Q": [...]}.
    #[arg(long)]
    poly: Option<String>,
    /// File holding the polynomial JSON.
    #[arg(long)]
    input: Option<PathBuf>,
    /// F_{m,n} = m z^m + n w^n, given as "m,n".
    #[arg(long)]
    fmn: Option<String>,
    /// G_eps = 4w^2 - 8 eps w - 1.
    #[arg(long)]
    g_eps: Option<f64>,
}

#[derive(Args)]
struct MilnorArgs {
    #[command(flatten)]
    source: MapSource,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 4096)]
    seeds: usize,
    #[arg(long, default_value_t = 50)]
    iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol_residual: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_dedupe: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_hessian: f64,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Linkage distance for critical curves (default: radius / 10).
    #[arg(long)]
    curve_link: Option<f64>,
}

#[derive(Args)]
struct RadiusArgs {
    #[command(flatten)]
    source: MapSource,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

enum Failure {
    Input(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> (&'static str, u8) {
        match self {
            Failure::Input(_) => ("input", 3),
            Failure::Mismatch(_) => ("oracle-mismatch", 4),
        }
    }
}

fn input<E: ToString>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

struct Success {
    payload: Value,
    provenance: Vec<String>,
}

fn ok(payload: impl Serialize) -> Result<Success, Failure> {
    Ok(Success { payload: serde_json::to_value(payload).map_err(input)?, provenance: Vec::new() })
}

fn tags<'a>(c: impl IntoIterator<Item = &'a Citation>) -> Vec<String> {
    c.into_iter().map(|c| c.tag().to_string()).collect()
}

fn word(a: &WordArgs) -> Result<Braidword, Failure> {
    Braidword::parse(&a.word, a.strands).map_err(input)
}

fn poly_json(p: &LaurentPoly) -> Value {
    let mut v = serde_json::to_value(p).unwrap_or(Value::Null);
    v["text"] = Value::String(p.to_string());
    v
}

fn read_json(inline: Option<&str>, file: Option<&PathBuf>) -> Result<String, Failure> {
    match (inline, file) {
        (Some(s), _) => Ok(s.to_string()),
        (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| input(format!("{}: {e}", p.display()))),
        (None, None) => Err(input("no input given")),
    }
}

fn parse_coeffs(s: &str) -> Result<Vec<C64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map(|x| C64::new(x, 0.0)).map_err(|e| input(format!("coefficient {t:?}: {e}"))))
        .collect()
}

fn map_source(s: &MapSource) -> Result<(BivariateMero, Option<f64>), Failure> {
    if let Some(fmn) = &s.fmn {
        let parts: Vec<u32> = fmn.split(',').map(|t| t.trim().parse().map_err(input)).collect::<Result<_, _>>()?;
        let [m, n] = parts[..] else {
            return Err(input("--fmn takes two integers \"m,n\""));
        };
        return Ok((f_mn(m, n), None));
    }
    if let Some(eps) = s.g_eps {
        return Ok((g_eps(eps), Some(eps)));
    }
    let text = read_json(s.poly.as_deref(), s.input.as_ref())?;
    Ok((serde_json::from_str(&text).map_err(input)?, None))
}

fn run(cmd: Cmd) -> Result<Success, Failure> {
    match cmd {
        Cmd::Braid(BraidCmd::Analyze(a)) => {
            let b = word(&a)?;
            if !b.is_strict() {
                return ok(json!({"strict": false, "inhomogeneity": null, "mn_upper": null}));
            }
            let i = b.inhomogeneity().map_err(input)?;
            let cite = if i == 0 { Citation::HomogeneousBraidFibered } else { Citation::MnInhomogeneityBound };
            let mut s = ok(json!({"strict": true, "inhomogeneity": i, "mn_upper": 2 * i}))?;
            s.provenance = tags([&cite]);
            Ok(s)
        }
        Cmd::Braid(BraidCmd::Minimize { word: a, budget }) => {
            let b = word(&a)?;
            let m = minimize_inhomogeneity(&b, budget).map_err(input)?;
            ok(json!({
                "input_inhomogeneity": b.inhomogeneity().map_err(input)?,
                "inhomogeneity": m.inhomogeneity,
                "word": m.word,
                "text": m.word.to_string(),
                "visited": m.visited,
            }))
        }
        Cmd::Seifert(SeifertCmd::Matrix(a)) => {
            let v = seifert_matrix_from_braid(&word(&a)?).map_err(input)?;
            let mut payload = serde_json::to_value(&v).map_err(input)?;
            payload["genus"] = json!(v.genus());
            ok(payload)
        }
        Cmd::Alexander(a) => alexander(a),
        Cmd::Deplumb(a) => ok(deplumb_braid_surface(&word(&a)?).map_err(input)?),
        Cmd::Expr(ExprCmd::Eval(a)) => {
            let text = read_json(a.expr.as_deref(), a.input.as_ref())?;
            let e: SurfaceExpr = serde_json::from_str(&text).map_err(input)?;
            let b = eval(&e).map_err(input)?;
            let mut s = ok(&b)?;
            s.provenance = tags(&b.provenance);
            Ok(s)
        }
        Cmd::Argmap(ArgmapCmd::Rational(a)) => {
            let r = match (&a.num, &a.den) {
                (Some(n), Some(d)) => RationalMap::new(parse_coeffs(n)?, parse_coeffs(d)?),
                _ => serde_json::from_str(&read_json(None, a.input.as_ref())?).map_err(input)?,
            };
            ok(crit_points_arg_rational(&r).map_err(input)?)
        }
        Cmd::Argmap(ArgmapCmd::Milnor(a)) => {
            let (f, eps) = map_source(&a.source)?;
            let cfg = SolverConfig {
                seed_count: a.seeds,
                newton_max_iters: a.iters,
                tol_residual: a.tol_residual,
                tol_dedupe: a.tol_dedupe,
                tol_hessian: a.tol_hessian,
                rng_seed: a.rng_seed,
                curve_link: a.curve_link,
            };
            let mut rep = crit_points_milnor(&f, a.radius, &cfg).map_err(input)?;
            if let Some(eps) = eps.filter(|_| a.radius == 1.0) {
                rep.check_expectation(&g_eps_expectation(eps));
            }
            ok(rep)
        }
        Cmd::Argmap(ArgmapCmd::Radius(a)) => {
            let (f, _) = map_source(&a.source)?;
            ok(check_link_radius(&f, a.radius, a.samples).map_err(input)?)
        }
    }
}

fn alexander(a: AlexanderArgs) -> Result<Success, Failure> {
    if let Some(m) = &a.matrix {
        if a.method != Method::Seifert {
            return Err(input("a bare Seifert matrix only supports --method seifert"));
        }
        let rows: IntMatrix = serde_json::from_str(m).map_err(input)?;
        let v = SeifertMatrix::connected(rows).map_err(input)?;
        return ok(json!({"seifert": poly_json(&alexander_from_seifert(&v))}));
    }
    let (Some(w), Some(n)) = (&a.braid, a.strands) else {
        return Err(input("--braid and --strands are required"));
    };
    let b = Braidword::parse(w, n).map_err(input)?;
    let seifert = || -> Result<LaurentPoly, Failure> {
        Ok(alexander_from_seifert(&seifert_matrix_from_braid(&b).map_err(input)?))
    };
    let burau = || alexander_via_burau(&b).map_err(input);
    match a.method {
        Method::Seifert => ok(json!({"seifert": poly_json(&seifert()?)})),
        Method::Burau => ok(json!({"burau": poly_json(&burau()?)})),
        Method::Both => {
            let (s, u) = (seifert()?, burau()?);
            if s != u {
                return Err(Failure::Mismatch(format!("Seifert route gives {s}, Burau route gives {u}")));
            }
            ok(json!({"seifert": poly_json(&s), "burau": poly_json(&u), "agree": true}))
        }
    }
}

fn emit(v: &Value, pretty: bool) {
    let text = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    let text = text.unwrap_or_else(|e| format!("{{\"status\":\"error\",\"error\":{{\"code\":\"internal\",\"message\":\"{e}\"}}}}"));
    // a closed pipe (e.g. `| head`) is not worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("MORSENOV_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // a second initialization can only fail if something else already set it up
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli.cmd) {
        Ok(s) => {
            emit(&json!({"status": "ok", "payload": s.payload, "provenance": s.provenance}), cli.pretty);
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, exit) = f.code();
            let (Failure::Input(msg) | Failure::Mismatch(msg)) = f;
            emit(&json!({"status": "error", "error": {"code": code, "message": msg}, "provenance": []}), cli.pretty);
            ExitCode::from(exit)
        }
    }
}
