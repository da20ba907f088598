//! Argument parsing and command dispatch for the `graphcode` binary.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ggcode_core::certificate::{certify, SupportCertificate};
use ggcode_core::fixtures::{example, Example};
use ggcode_core::graphcode::{GraphCodeReport, MembershipReport};
use ggcode_core::spec::{parse_code, parse_graph, parse_inner_codes};
use ggcode_core::{
    BoundOutcome, DistanceBracket, EdgeAssignment, EdgeOrder, Engine, Error, GeneralizedGraphCode,
    SearchOptions,
};
use serde::Serialize;
use serde_json::json;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CLAIM: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "graphcode", version, about = "Generalized graph codes on balanced multipartite graphs")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads for minimum-distance search (0 = all cores).
    #[arg(long, env = "GRAPHCODE_WORKERS", global = true)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = Engine::Auto, global = true)]
    pub engine: Engine,
    /// Stop minimum-distance search after this many seconds and report a bracket.
    #[arg(long, global = true)]
    pub max_seconds: Option<f64>,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CodeSource {
    /// `complete:<ell>,<m>` or a graph file.
    #[arg(long, required_unless_present = "example", conflicts_with = "example")]
    pub graph: Option<String>,
    /// One code spec for every part, or one per part, comma-separated.
    #[arg(long, required_unless_present = "example")]
    pub inner: Option<String>,
    #[arg(long, default_value_t = EdgeOrder::Canonical)]
    pub order: EdgeOrder,
    /// Use a built-in instance (k777 or k333).
    #[arg(long)]
    pub example: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph code and report [N, K, D], lambda2 and the bound.
    Build {
        #[command(flatten)]
        source: CodeSource,
        /// Write the global parity-check matrix here.
        #[arg(long)]
        write_parity: Option<PathBuf>,
        /// Write a generator matrix of the graph code here.
        #[arg(long)]
        write_generator: Option<PathBuf>,
    },
    /// Report [N, K, D], lambda2 and the bound.
    Params {
        #[command(flatten)]
        source: CodeSource,
    },
    /// Evaluate the spectral bound without computing D.
    Bound {
        #[command(flatten)]
        source: CodeSource,
    },
    /// Check an assignment file against every local constraint.
    Verify {
        #[command(flatten)]
        source: CodeSource,
        assignment: PathBuf,
    },
    /// Reproduce a built-in instance and check its claimed parameters.
    Example { name: String },
    /// Evaluate each step of the bound's argument on one codeword.
    Certify {
        #[command(flatten)]
        source: CodeSource,
        /// An assignment file, `witness`, or `witness:<label prefix>`.
        #[arg(long)]
        codeword: String,
    },
    /// Parameters of a single code spec.
    Code { spec: String },
    /// Balance check and spectrum of a graph spec.
    Graph {
        spec: String,
        #[arg(long, default_value_t = EdgeOrder::Canonical)]
        order: EdgeOrder,
    },
}

/// Usage error from argument parsing, with clap's rendered message.
#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
    pub exit: u8,
}

/// Parses `argv` (including the program name).
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    RunConfig::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        let exit = match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
            _ => EXIT_USAGE,
        };
        ConfigError {
            message: e.render().to_string(),
            exit,
        }
    })
}

/// Rendered report plus exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub status: u8,
}

pub fn exit_status(err: &Error) -> u8 {
    match err {
        Error::Capacity(_) | Error::Numeric(_) => EXIT_CAPACITY,
        _ => EXIT_USAGE,
    }
}

enum Loaded {
    Example(Box<Example>),
    Built(GeneralizedGraphCode),
}

impl Loaded {
    fn code(&self) -> &GeneralizedGraphCode {
        match self {
            Loaded::Example(e) => &e.code,
            Loaded::Built(c) => c,
        }
    }
}

fn load(source: &CodeSource) -> Result<Loaded, Error> {
    if let Some(name) = &source.example {
        return Ok(Loaded::Example(Box::new(example(name)?)));
    }
    let graph = parse_graph(source.graph.as_deref().unwrap_or_default(), source.order)?;
    let inner = parse_inner_codes(source.inner.as_deref().unwrap_or_default(), graph.ell())?;
    Ok(Loaded::Built(GeneralizedGraphCode::build(graph, inner)?))
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Text => text(),
    }
}

fn search_options<'a>(config: &RunConfig, progress: &'a (dyn Fn(DistanceBracket) + Sync)) -> SearchOptions<'a> {
    SearchOptions {
        engine: config.engine,
        deadline: config
            .max_seconds
            .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
        progress: Some(progress),
    }
}

fn report_status(r: &GraphCodeReport) -> u8 {
    if !r.claims_hold() || r.bound_satisfied == Some(false) {
        EXIT_CLAIM
    } else {
        EXIT_OK
    }
}

#[derive(Serialize)]
struct VerifyReport {
    #[serde(rename = "N")]
    len: usize,
    weight: usize,
    #[serde(flatten)]
    membership: MembershipReport,
    order_convention: String,
}

fn bound_json(gc: &GeneralizedGraphCode) -> Result<(serde_json::Value, String), Error> {
    let l2 = gc.lambda2()?;
    let inner = gc.uniform_inner_parameters()?;
    let outcome = gc.theorem_bound()?;
    let (bound, note) = match &outcome {
        BoundOutcome::Applicable(b) => (Some(*b), None),
        BoundOutcome::NotApplicable(why) => (None, Some(why.clone())),
    };
    let v = json!({
        "ell": gc.ell(),
        "m": gc.m(),
        "n": gc.n(),
        "inner_d": inner.map(|p| p.2),
        "lambda2": l2.as_f64(),
        "lambda2_exact": l2.is_exact(),
        "bound": bound,
        "bound_float": bound.map(|b| b.as_f64()),
        "bound_applicable": bound.is_some(),
        "bound_note": note,
        "order_convention": gc.order_convention(),
    });
    let text = match (bound, note) {
        (Some(b), _) => format!(
            "lambda2 = {l2}\nD >= {b} ({:.6})\n",
            b.as_f64()
        ),
        (None, Some(why)) => format!("lambda2 = {l2}\nbound not applicable: {why}\n"),
        _ => unreachable!(),
    };
    Ok((v, text))
}

fn certificate_text(c: &SupportCertificate) -> String {
    let mut s = format!(
        "weight {} d {} a {} (supports {:?})\n",
        c.weight,
        c.d,
        c.supports.a,
        c.supports
            .supports
            .iter()
            .map(|t| t.members.iter().map(|v| v + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    );
    s.push_str(&format!(
        "sum x = {}, |x|^2 = {} (identity {}), x'Ax = {} (blocks agree {})\n",
        c.x_sum, c.x_norm_sq, c.x_norm_identity, c.quadratic_form, c.quadratic_forms_agree
    ));
    for b in &c.edge_bounds {
        s.push_str(&format!(
            "part {} [{:?}]: S-S {} >= {} {} | S-Sbar {} <= {} {} | Sbar-S {} <= {} {} | Sbar-Sbar {} >= {} {}\n",
            b.part,
            b.status,
            b.support_to_supports,
            b.support_to_supports_min,
            b.support_to_supports_ok,
            b.support_to_complements,
            b.support_to_complements_max,
            b.support_to_complements_ok,
            b.complement_to_supports,
            b.complement_to_supports_max,
            b.complement_to_supports_ok,
            b.complement_to_complements,
            b.complement_to_complements_min,
            b.complement_to_complements_ok
        ));
    }
    s.push_str(&format!(
        "x'Ax >= {} [{:?}] {} ; x'Ax <= {} {}\n",
        c.quadratic_lower.lower, c.quadratic_lower.status, c.quadratic_lower.holds, c.quadratic_upper.upper, c.quadratic_upper.holds
    ));
    let f = &c.final_bound;
    s.push_str(&format!(
        "a = {} >= {} {} ; wt >= da {} ; wt >= bound {}\nverdict: {}\n",
        f.a,
        f.a_lower.map_or("-".into(), |b| b.to_string()),
        f.a_holds,
        f.weight_ge_da,
        f.weight_ge_bound,
        if c.verdict() { "pass" } else { "FAIL" }
    ));
    s
}

fn pick_codeword(loaded: &Loaded, spec: &str) -> Result<EdgeAssignment, Error> {
    let gc = loaded.code();
    if let Some(rest) = spec.strip_prefix("witness") {
        let Loaded::Example(ex) = loaded else {
            return Err(Error::Usage("'witness' needs --example".into()));
        };
        let label = rest.strip_prefix(':').unwrap_or("");
        return ex
            .witness(label)
            .cloned()
            .ok_or_else(|| Error::Usage(format!("no witness matching '{label}'")));
    }
    let text = std::fs::read_to_string(spec)?;
    EdgeAssignment::parse_text(&text, gc.field(), gc.len())
}

fn execute(config: &RunConfig) -> Result<Outcome, Error> {
    let progress = |b: DistanceBracket| eprintln!("D bracket: [{}, {}]", b.lower, b.upper);
    let fmt = config.format;
    let ok = |output| Outcome { output, status: EXIT_OK };
    match &config.command {
        Command::Build {
            source,
            write_parity,
            write_generator,
        } => {
            let loaded = load(source)?;
            let gc = loaded.code();
            if let Some(p) = write_parity {
                std::fs::write(p, gc.global_parity().to_text())?;
            }
            if let Some(p) = write_generator {
                let code = gc
                    .as_linear_code()?
                    .ok_or_else(|| Error::Domain("the graph code is {0}".into()))?;
                std::fs::write(p, code.to_text())?;
            }
            params(&loaded, config, &progress)
        }
        Command::Params { source } => params(&load(source)?, config, &progress),
        Command::Bound { source } => {
            let loaded = load(source)?;
            let (v, text) = bound_json(loaded.code())?;
            Ok(ok(render(fmt, &v, || text)))
        }
        Command::Verify { source, assignment } => {
            let loaded = load(source)?;
            let gc = loaded.code();
            let text = std::fs::read_to_string(assignment)?;
            let c = EdgeAssignment::parse_text(&text, gc.field(), gc.len())?;
            let r = VerifyReport {
                len: gc.len(),
                weight: c.weight(),
                membership: gc.verify_membership(&c)?,
                order_convention: gc.order_convention(),
            };
            Ok(ok(render(fmt, &r, || {
                if r.membership.is_member {
                    format!("codeword of weight {}\n", r.weight)
                } else {
                    format!(
                        "not a codeword: local views fail at {:?}\n",
                        r.membership.failing_vertices
                    )
                }
            })))
        }
        Command::Example { name } => {
            let ex = example(name)?;
            let r = ex.report(&search_options(config, &progress))?;
            Ok(Outcome {
                status: report_status(&r),
                output: render(fmt, &r, || r.to_text()),
            })
        }
        Command::Certify { source, codeword } => {
            let loaded = load(source)?;
            let c = pick_codeword(&loaded, codeword)?;
            let cert = certify(loaded.code(), &c)?;
            Ok(Outcome {
                status: if cert.verdict() { EXIT_OK } else { EXIT_CLAIM },
                output: render(fmt, &cert, || certificate_text(&cert)),
            })
        }
        Command::Code { spec } => {
            let code = parse_code(spec)?;
            let (b, engine) = code.search_min_distance(&search_options(config, &progress))?;
            let v = json!({
                "name": code.name(),
                "q": code.field().order(),
                "n": code.len(),
                "k": code.dimension(),
                "d": b.value(),
                "d_bracket": [b.lower, b.upper],
                "engine": engine,
            });
            Ok(ok(render(fmt, &v, || {
                format!(
                    "{}: [{}, {}, {}] over GF({}) ({engine})\n",
                    code.name(),
                    code.len(),
                    code.dimension(),
                    b.value().map_or(format!("{}..{}", b.lower, b.upper), |d| d.to_string()),
                    code.field().order()
                )
            })))
        }
        Command::Graph { spec, order } => {
            let g = parse_graph(spec, *order)?;
            let validation = g.validate_balanced();
            let spectrum = g.spectrum()?;
            let l2 = g.lambda2()?;
            let v = json!({
                "ell": g.ell(),
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "m": g.m(),
                "n": g.n(),
                "balanced": validation.is_valid(),
                "violations": validation.violations,
                "spectrum": spectrum.values,
                "closed_form": spectrum.closed_form,
                "lambda2": l2.as_f64(),
                "lambda2_exact": l2.is_exact(),
            });
            let text = || {
                let mut s = format!(
                    "{} parts, {} vertices, {} edges\n",
                    g.ell(),
                    g.vertex_count(),
                    g.edge_count()
                );
                if validation.is_valid() {
                    s.push_str(&format!(
                        "balanced: m = {}, n = {}\n",
                        g.m().unwrap_or(0),
                        g.n().unwrap_or(0)
                    ));
                } else {
                    for viol in &validation.violations {
                        s.push_str(&format!("{viol}\n"));
                    }
                }
                s.push_str(&format!(
                    "lambda2 = {l2}{}\n",
                    if spectrum.closed_form { " (closed form)" } else { "" }
                ));
                s
            };
            Ok(ok(render(fmt, &v, text)))
        }
    }
}

fn params(
    loaded: &Loaded,
    config: &RunConfig,
    progress: &(dyn Fn(DistanceBracket) + Sync),
) -> Result<Outcome, Error> {
    let opts = search_options(config, progress);
    let r = match loaded {
        Loaded::Example(ex) => ex.report(&opts)?,
        Loaded::Built(gc) => gc.report(&opts)?,
    };
    Ok(Outcome {
        status: report_status(&r),
        output: render(config.format, &r, || r.to_text()),
    })
}

/// Runs a parsed configuration. Errors become exit statuses 2 or 3 with the
/// message as output.
pub fn run(config: &RunConfig) -> Outcome {
    let result = match config.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| execute(config)),
            Err(e) => Err(Error::Usage(format!("cannot start {w} workers: {e}"))),
        },
        None => execute(config),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            return Outcome {
                output: format!("graphcode: {e}\n"),
                status: exit_status(&e),
            }
        }
    };
    if let Some(path) = &config.report {
        if let Err(e) = std::fs::write(path, &outcome.output) {
            return Outcome {
                output: format!("graphcode: cannot write {}: {e}\n", path.display()),
                status: EXIT_USAGE,
            };
        }
    }
    outcome
}
