use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clique_blowup::report::{blowup_spectrum, indexes_by_route};
use clique_blowup::verify::default_corpus;
use clique_blowup::{
    blowup_counts, blowup_iterate, multiset_match, BlowupParams, Error, Family, Graph, GraphSpec, IndexOptions,
    IndexReport, Route, SpectrumSource, VerifyConfig, DEFAULT_CLUSTER_TOL, DEFAULT_EXACT_CAP, DEFAULT_MATCH_TOL,
    DEFAULT_MAX_VERTICES,
};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CAP: u8 = 3;

/// Relative tolerance between spanning-tree counts from different routes.
const TAU_ROUTE_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "clique-blowup", version, about = "Clique-blowup graphs: spectra, Kirchhoff index, Kemeny constant, spanning trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the edge list of a generated graph.
    Gen {
        /// complete, path, cycle, star (or petersen, without k)
        family: String,
        k: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the edge list of CL_r(G); N_r and E_r go to stderr.
    Blowup(RunArgs),
    /// Normalized Laplacian spectrum of CL_r(G).
    Spectra {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Relative elementwise tolerance for the theorem/numeric comparison.
        #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
        tol: f64,
    },
    /// Kf*, Kemeny's constant and spanning-tree count of CL_r(G).
    Indexes {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = RouteArg::All)]
        route: RouteArg,
        /// Spectrum source for the spectral route.
        #[arg(long, value_enum, default_value_t = Method::Theorem)]
        method: Method,
        /// Relative tolerance between routes when --route all.
        #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
        tol: f64,
    },
    /// Run every invariant and cross-route check over a corpus grid.
    Verify {
        /// Comma-separated generator specs, e.g. complete:3,cycle:4,petersen
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        r: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
        tol: f64,
        #[arg(long, env = "CLIQUE_BLOWUP_MAX_VERTICES", default_value_t = DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Perturb the closed-form Kf* to confirm the harness notices.
        #[arg(long, hide = true)]
        corrupt_closed_form: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Edge-list file ("-" for stdin).
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    /// Inline generator spec such as complete:3 or cycle:4.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, env = "CLIQUE_BLOWUP_MAX_VERTICES", default_value_t = DEFAULT_MAX_VERTICES)]
    max_vertices: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Theorem,
    Numeric,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Spectral,
    #[value(name = "closed_form", alias = "closed-form")]
    ClosedForm,
    Oracle,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

enum Failure {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen { family, k, output } => cmd_gen(&family, k, output),
        Command::Blowup(run) => cmd_blowup(&run),
        Command::Spectra { run, method, tol } => cmd_spectra(&run, method, tol),
        Command::Indexes { run, route, method, tol } => cmd_indexes(&run, route, method, tol),
        Command::Verify {
            corpus,
            n,
            r,
            tol,
            max_vertices,
            jobs,
            format,
            output,
            corrupt_closed_form,
        } => {
            let corpus = match corpus.as_deref().map(parse_corpus).transpose() {
                Ok(c) => c.unwrap_or_else(default_corpus),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_INVALID);
                }
            };
            let cfg = VerifyConfig {
                corpus,
                ns: n,
                rs: r,
                match_tol: tol,
                max_vertices,
                jobs,
                corrupt_closed_form,
                ..VerifyConfig::default()
            };
            cmd_verify(&cfg, format, output)
        }
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::SizeCapExceeded { .. } => EXIT_CAP,
                _ => EXIT_INVALID,
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn parse_corpus(s: &str) -> Result<Vec<GraphSpec>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

fn write_output(path: &Option<PathBuf>, text: &str) -> io::Result<()> {
    let mut text = text.to_string();
    if !text.is_empty() && !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn load_graph(run: &RunArgs) -> Result<Graph, Failure> {
    match (&run.input, &run.family) {
        (Some(path), None) => {
            let text = if path.as_os_str() == "-" {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            } else {
                fs::read_to_string(path)?
            };
            Ok(Graph::parse_edge_list(&text)?)
        }
        (None, Some(spec)) => Ok(spec.parse::<GraphSpec>()?.build()?),
        _ => Err(Error::InvalidParameter("exactly one of --input or --family is required".into()).into()),
    }
}

fn options(run: &RunArgs) -> IndexOptions {
    IndexOptions {
        cluster_tol: DEFAULT_CLUSTER_TOL,
        max_vertices: run.max_vertices,
        exact_cap: DEFAULT_EXACT_CAP,
    }
}

fn cmd_gen(family: &str, k: Option<usize>, output: Option<PathBuf>) -> CmdResult {
    let g = if family.eq_ignore_ascii_case("petersen") {
        Graph::petersen()
    } else {
        let k = k.ok_or_else(|| Error::InvalidParameter("missing size k".into()))?;
        Graph::generate(family.parse::<Family>()?, k)?
    };
    write_output(&output, &g.to_edge_list())?;
    Ok(0)
}

fn cmd_blowup(run: &RunArgs) -> CmdResult {
    let g = load_graph(run)?;
    let p = BlowupParams::new(run.n, run.r)?;
    let counts = blowup_counts(&g.vertex_count().into(), &g.edge_count().into(), &p)?;
    let h = blowup_iterate(&g, &p, run.max_vertices)?;
    eprintln!("N={} E={}", counts.vertices, counts.edges);
    write_output(&run.output, &h.to_edge_list())?;
    Ok(0)
}

fn cmd_spectra(run: &RunArgs, method: Method, tol: f64) -> CmdResult {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("--tol must be positive".into()).into());
    }
    let g = load_graph(run)?;
    let p = BlowupParams::new(run.n, run.r)?;
    let opts = options(run);
    let theorem = match method {
        Method::Theorem | Method::Both => Some(blowup_spectrum(&g, &p, SpectrumSource::Theorem, &opts)?),
        Method::Numeric => None,
    };
    let numeric = match method {
        Method::Numeric | Method::Both => Some(blowup_spectrum(&g, &p, SpectrumSource::Numeric, &opts)?),
        Method::Theorem => None,
    };
    let verdict = match (&theorem, &numeric) {
        (Some(t), Some(nu)) => Some(multiset_match(t, nu, tol)),
        _ => None,
    };

    let text = match run.format {
        Format::Json => {
            let mut parts = Vec::new();
            if let Some(t) = &theorem {
                parts.push(format!("\"theorem\":{}", t.to_json()));
            }
            if let Some(nu) = &numeric {
                parts.push(format!("\"numeric\":{}", nu.to_json()));
            }
            if let Some(v) = &verdict {
                parts.push(format!("\"match\":{}", serde_json::to_string(v).expect("serializable")));
            }
            format!("{{{}}}", parts.join(","))
        }
        Format::Table => {
            let mut lines = Vec::new();
            if let Some(t) = &theorem {
                lines.push(format!("theorem  ({} values): {}", t.order(), t.display_entries()));
            }
            if let Some(nu) = &numeric {
                lines.push(format!("numeric  ({} values): {}", nu.order(), nu.display_entries()));
            }
            if let Some(v) = &verdict {
                lines.push(format!("verdict: {}", v.describe()));
            }
            lines.join("\n")
        }
    };
    write_output(&run.output, &text)?;
    match verdict {
        Some(v) if !v.matched => {
            eprintln!("spectra disagree: {}", v.describe());
            Ok(EXIT_MISMATCH)
        }
        _ => Ok(0),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn report_table(r: &IndexReport) -> String {
    let exact = |o: Option<String>| o.map(|s| format!("  (= {s})")).unwrap_or_default();
    format!(
        "[{}]\n  kf_star  {}{}\n  kemeny   {}{}\n  tau      {:e}{}",
        r.route,
        r.kf_star,
        exact(r.kf_star_exact.as_ref().map(ToString::to_string)),
        r.kemeny,
        exact(r.kemeny_exact.as_ref().map(ToString::to_string)),
        r.tau_float,
        exact(r.tau_exact.as_ref().map(ToString::to_string)),
    )
}

fn cmd_indexes(run: &RunArgs, route: RouteArg, method: Method, tol: f64) -> CmdResult {
    let g = load_graph(run)?;
    let p = BlowupParams::new(run.n, run.r)?;
    let opts = options(run);
    let source = match method {
        Method::Numeric => SpectrumSource::Numeric,
        Method::Theorem | Method::Both => SpectrumSource::Theorem,
    };
    let routes: Vec<Route> = match route {
        RouteArg::Spectral => vec![Route::Spectral],
        RouteArg::ClosedForm => vec![Route::ClosedForm],
        RouteArg::Oracle => vec![Route::Oracle],
        RouteArg::All => Route::ALL.to_vec(),
    };
    let reports = routes
        .iter()
        .map(|&rt| indexes_by_route(&g, &p, rt, source, &opts))
        .collect::<Result<Vec<_>, _>>()?;

    // Deltas relative to the first report (spectral when --route all).
    let reference = &reports[0];
    let deltas: Vec<(Route, f64, f64, f64)> = reports[1..]
        .iter()
        .map(|r| {
            (
                r.route,
                rel(r.kf_star, reference.kf_star),
                rel(r.kemeny, reference.kemeny),
                (r.log_tau - reference.log_tau).abs(),
            )
        })
        .collect();
    let agree = deltas
        .iter()
        .all(|&(_, dk, de, dt)| dk <= tol && de <= tol && dt <= TAU_ROUTE_TOL);

    let text = match run.format {
        Format::Json if reports.len() == 1 => reports[0].to_json(),
        Format::Json => {
            let body: Vec<String> = reports.iter().map(IndexReport::to_json).collect();
            let delta_json: Vec<String> = deltas
                .iter()
                .map(|(rt, dk, de, dt)| {
                    format!(
                        "{{\"route\":\"{rt}\",\"kf_star_rel\":{},\"kemeny_rel\":{},\"tau_rel\":{}}}",
                        clique_blowup::json::format_f64(*dk),
                        clique_blowup::json::format_f64(*de),
                        clique_blowup::json::format_f64(dt.exp_m1().abs()),
                    )
                })
                .collect();
            format!(
                "{{\"reports\":[{}],\"deltas\":[{}],\"agree\":{agree}}}",
                body.join(","),
                delta_json.join(",")
            )
        }
        Format::Table => {
            let mut parts: Vec<String> = reports.iter().map(report_table).collect();
            for (rt, dk, de, dt) in &deltas {
                parts.push(format!(
                    "delta {rt} vs {}: kf_star {dk:.2e}, kemeny {de:.2e}, tau {:.2e}",
                    reference.route,
                    dt.exp_m1().abs()
                ));
            }
            parts.join("\n")
        }
    };
    write_output(&run.output, &text)?;
    if agree {
        Ok(0)
    } else {
        eprintln!("routes disagree beyond tolerance");
        Ok(EXIT_MISMATCH)
    }
}

fn cmd_verify(cfg: &VerifyConfig, format: Format, output: Option<PathBuf>) -> CmdResult {
    let report = clique_blowup::verify(cfg)?;
    let text = match format {
        Format::Json => serde_json::to_string(&report).expect("serializable"),
        Format::Table => report.matrix(),
    };
    write_output(&output, &text)?;
    if let Some((case, check)) = report.first_failure() {
        eprintln!(
            "first failure: {} n={} r={} check {}: {}",
            case.graph, case.n, case.r, check.name, check.detail
        );
        return Ok(EXIT_MISMATCH);
    }
    let run = report.cases.iter().filter(|c| c.skipped.is_none()).count();
    eprintln!("all checks passed on {run} cases ({} skipped)", report.cases.len() - run);
    Ok(0)
}
