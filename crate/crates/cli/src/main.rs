use std::fs;
use std::io::{self, IsTerminal, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use graph_entropy::bounds::{
    self, entropy_bracket, fractional_clique_cover_number, max_matching, shannon_entropy,
    transversal_number, BracketOptions, DEFAULT_SHANNON_CAP,
};
use graph_entropy::enumerate::DEFAULT_ENUMERATION_CAP;
use graph_entropy::format::{parse_graph, parse_graph_auto, render_arc_list, render_edge_list, render_graph6, GraphFormat};
use graph_entropy::guessing::{max_guessing, validate_code, DEFAULT_WORD_CAP};
use graph_entropy::lp;
use graph_entropy::structure::{certify_entropy_minimal_candidate, find_reducible_set, DEFAULT_REDUCIBLE_CAP};
use graph_entropy::survey::{survey_entropy_values, BracketCache, SurveyOptions};
use graph_entropy::verify::{run_suite, Suite};
use graph_entropy::{Error, Graph};

#[derive(Parser)]
#[command(name = "graph-entropy", version, about = "Certified entropy and guessing-number bounds for small graphs")]
struct Cli {
    /// Worker threads for surveys.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Add wall-clock timing to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphInput {
    /// Graph file, or `-` for stdin.
    #[arg(long, short)]
    graph: String,
    /// Input format; detected from the text when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Graph6,
    EdgeList,
    ArcList,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Wheel,
    Gfamily,
    Theorem2,
}

#[derive(Clone, Copy, ValueEnum)]
enum LpKind {
    Shannon,
    FractionalCover,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy bracket with every parameter behind it.
    Bounds {
        #[command(flatten)]
        input: GraphInput,
        /// Largest component handed to the Shannon LP.
        #[arg(long, default_value_t = DEFAULT_SHANNON_CAP)]
        shannon_cap: usize,
        /// Solve the Shannon LP even when the combinatorial bounds meet.
        #[arg(long)]
        always_shannon: bool,
    },
    /// Exact guessing number for one alphabet size, with an optimal code.
    Guess {
        #[command(flatten)]
        input: GraphInput,
        /// Alphabet size.
        #[arg(long, short)]
        q: u32,
        /// Largest number of words q^n to search.
        #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
        word_cap: u64,
    },
    /// Smallest set S with a matching saturating S from c(S).
    Reduce {
        #[command(flatten)]
        input: GraphInput,
        /// Largest graph searched for a reducible set.
        #[arg(long, default_value_t = DEFAULT_REDUCIBLE_CAP)]
        reducible_cap: usize,
    },
    /// Necessary conditions for entropy-minimality.
    MinimalCheck {
        #[command(flatten)]
        input: GraphInput,
        /// Largest graph searched for a reducible set.
        #[arg(long, default_value_t = DEFAULT_REDUCIBLE_CAP)]
        reducible_cap: usize,
    },
    /// Entropy values of all simple graphs up to n vertices.
    Survey {
        /// Largest vertex count to enumerate.
        #[arg(long, short, default_value_t = DEFAULT_ENUMERATION_CAP)]
        n: usize,
        /// Connected graphs only.
        #[arg(long)]
        connected: bool,
        /// Bracket cache directory (defaults to $GRAPH_ENTROPY_CACHE).
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Refuse to enumerate beyond this many vertices.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        max_n: usize,
        /// Leave the per-graph records out of the report.
        #[arg(long)]
        summary: bool,
    },
    /// Reproduce a named result; exits 1 when any check fails.
    Verify {
        /// Which result to reproduce.
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Vertex bound for the theorem2 survey.
        #[arg(long, short, default_value_t = DEFAULT_ENUMERATION_CAP)]
        n: usize,
        /// Bracket cache directory (defaults to $GRAPH_ENTROPY_CACHE).
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Refuse to enumerate beyond this many vertices.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        max_n: usize,
    },
    /// Print a linear program in LP text format.
    LpDump {
        #[command(flatten)]
        input: GraphInput,
        /// Which program to print.
        #[arg(long, value_enum)]
        which: LpKind,
        /// The closed-set form of the Shannon LP, which is what gets solved.
        #[arg(long)]
        closed: bool,
        /// Largest component handed to the Shannon LP.
        #[arg(long, default_value_t = DEFAULT_SHANNON_CAP)]
        shannon_cap: usize,
    },
}

enum Failure {
    /// Bad input or configuration: exit 2.
    Usage(String),
    /// A check or certificate did not hold: exit 1.
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Usage(format!(
                "{e} (see --shannon-cap, --word-cap, --reducible-cap or --max-n)"
            )),
            Error::Parse(_) => Failure::Usage(format!(
                "{e}; accepted inputs are graph6, `n; u-v,...` or `n; u->v,...` with 1-indexed vertices"
            )),
            Error::VertexOutOfRange { .. }
            | Error::TooManyVertices { .. }
            | Error::DirectedInput
            | Error::LoopedInput
            | Error::EmptySet
            | Error::Io(_) => Failure::Usage(e.to_string()),
            _ => Failure::Assertion(e.to_string()),
        }
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    Report { input: Option<Value>, result: Value, summary: String, passed: bool },
    Text(String),
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    version: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<Value>,
    result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Value>,
}

fn read_graph(input: &GraphInput) -> Result<(Graph, Value), Failure> {
    let text = if input.graph == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(&input.graph)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}; pass a file path or `-` for stdin", input.graph)))?
    };
    let g = match input.format {
        None => parse_graph_auto(&text)?,
        Some(FormatArg::Graph6) => parse_graph(&text, GraphFormat::Graph6)?,
        Some(FormatArg::EdgeList) => parse_graph(&text, GraphFormat::EdgeList)?,
        Some(FormatArg::ArcList) => parse_graph(&text, GraphFormat::ArcList)?,
    };
    let echo = describe(&g, &input.graph);
    Ok((g, echo))
}

fn describe(g: &Graph, source: &str) -> Value {
    let text = if g.is_directed() {
        render_arc_list(g)
    } else if g.is_simple() {
        render_graph6(g).unwrap_or_else(|_| render_edge_list(g))
    } else {
        render_edge_list(g)
    };
    json!({ "source": source, "n": g.n(), "directed": g.is_directed(), "graph": text })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn check(ok: bool, what: &str) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Assertion(format!("certificate check failed: {what}")))
    }
}

fn survey_options(jobs: Option<usize>, cache: &Option<PathBuf>, cap: usize) -> Result<SurveyOptions, Failure> {
    let cache = match cache {
        Some(dir) => BracketCache::at(dir)?,
        None => BracketCache::from_env()?,
    };
    Ok(SurveyOptions { cache, jobs, cap, ..SurveyOptions::new() })
}

fn cmd_bounds(input: &GraphInput, shannon_cap: usize, always_shannon: bool) -> Outcome {
    let (g, echo) = read_graph(input)?;
    let opts = BracketOptions { shannon_cap, always_shannon };
    let bracket = entropy_bracket(&g, &opts)?;

    let matching = max_matching(&g);
    check(matching.is_valid(&g), "maximum matching")?;
    let (cc, cover) = bounds::clique_cover_number(&g);
    check(cover.is_valid_cover(&g) && cover.len() == cc, "clique cover")?;
    let kf = fractional_clique_cover_number(&g);
    check(kf.family.is_valid_cover(&g) && kf.family.total() == kf.value, "fractional clique cover")?;
    if let Some(sol) = &kf.solution {
        let (program, _) = bounds::fractional_cover_lp(&g);
        check(lp::verify_certificates(&program, sol), "fractional cover LP duality")?;
    }
    let (tau, fvs) = transversal_number(&g);
    let (rest, _) = g.remove_vertices(fvs)?;
    check(fvs.len() == tau && rest.is_acyclic(), "feedback vertex set")?;
    let shannon = if g.n() <= shannon_cap {
        let s = shannon_entropy(&g, shannon_cap)?;
        check(bounds::is_shannon_feasible(&g, &s.h), "Shannon solution")?;
        Some(s)
    } else {
        None
    };

    let n = g.n();
    let summary = format!(
        "H in [{}, {}]{}; nu = {}, n - cc = {}, n - kappa_f = {}, tau = {}{}",
        bracket.lower,
        bracket.upper,
        if bracket.exact { " (exact)" } else { "" },
        matching.size,
        n - cc,
        &graph_entropy::Rational::from(n) - &kf.value,
        tau,
        shannon.as_ref().map(|s| format!(", theta = {}", s.theta)).unwrap_or_default(),
    );
    let result = json!({
        "bracket": to_value(&bracket),
        "parameters": {
            "matching": { "size": matching.size, "edges": matching.edges },
            "clique_cover": { "number": cc, "cliques": to_value(&cover.cliques) },
            "fractional_clique_cover": {
                "value": to_value(&kf.value),
                "lower_bound": to_value(&(&graph_entropy::Rational::from(n) - &kf.value)),
                "cliques": to_value(&kf.family.cliques),
                "weights": to_value(&kf.family.weights),
            },
            "transversal": { "number": tau, "vertices": to_value(&fvs) },
            "shannon": shannon.as_ref().map(|s| json!({
                "theta": to_value(&s.theta),
                "pivots": s.solution.as_ref().map(|x| x.pivots),
            })),
        },
    });
    Ok(Output::Report { input: Some(echo), result, summary, passed: true })
}

fn cmd_guess(input: &GraphInput, q: u32, word_cap: u64) -> Outcome {
    if q < 2 {
        return Err(Failure::Usage("--q must be at least 2".into()));
    }
    let (g, echo) = read_graph(input)?;
    let (value, code) = max_guessing(&g, q, word_cap)?;
    check(validate_code(&code)?, "fixed-point code")?;
    let summary = format!("gamma(G, {q}) = {} with {} words", value.guessing_number, value.code_size);
    let mut result = to_value(&value);
    result["code"] = to_value(&code.word_strings());
    Ok(Output::Report { input: Some(echo), result, summary, passed: true })
}

fn cmd_reduce(input: &GraphInput, cap: usize) -> Outcome {
    let (g, echo) = read_graph(input)?;
    let found = find_reducible_set(&g, cap)?;
    let (result, summary) = match &found {
        None => (json!({ "reducible": false }), "no reducible set".to_string()),
        Some(d) => {
            d.validate(&g)?;
            let remainder = render_graph6(&d.remainder)?;
            (
                json!({
                    "reducible": true,
                    "S": to_value(&d.s),
                    "c_S": to_value(&d.c),
                    "matching": d.matching,
                    "d_S": to_value(&d.d_s),
                    "remainder_graph6": remainder,
                    "remainder_map": d.remainder_map,
                }),
                format!("S = {:?}, G - d(S) = {remainder}", d.s.to_vec()),
            )
        }
    };
    Ok(Output::Report { input: Some(echo), result, summary, passed: true })
}

fn cmd_minimal_check(input: &GraphInput, cap: usize) -> Outcome {
    let (g, echo) = read_graph(input)?;
    let report = certify_entropy_minimal_candidate(&g, cap)?;
    if let Some(d) = &report.reducible {
        d.validate(&g)?;
    }
    if let Some(d) = &report.saturating_decomposition {
        d.validate(&g)?;
    }
    let summary = if report.candidate {
        "candidate: no reducible set and |c(M)| < |M|".to_string()
    } else {
        "not a candidate".to_string()
    };
    Ok(Output::Report { input: Some(echo), result: to_value(&report), summary, passed: true })
}

fn cmd_survey(jobs: Option<usize>, n: usize, connected: bool, cache: &Option<PathBuf>, max_n: usize, summary_only: bool) -> Outcome {
    let opts = survey_options(jobs, cache, max_n)?;
    let mut survey = survey_entropy_values(n, connected, &opts)?;
    if summary_only {
        survey.records.clear();
    }
    let values: Vec<String> = survey.values_up_to_four.iter().map(|v| v.to_string()).collect();
    let summary = format!(
        "{} graphs, values in [0, 4]: {{{}}}, {} open",
        survey.graphs,
        values.join(", "),
        survey.unresolved.len()
    );
    Ok(Output::Report { input: None, result: to_value(&survey), summary, passed: true })
}

fn cmd_verify(jobs: Option<usize>, suite: SuiteArg, n: usize, cache: &Option<PathBuf>, max_n: usize) -> Outcome {
    if n > max_n {
        return Err(Failure::Usage(format!("--n {n} exceeds the enumeration cap {max_n}; raise --max-n")));
    }
    let opts = survey_options(jobs, cache, n)?;
    let suite = match suite {
        SuiteArg::Wheel => Suite::Wheel,
        SuiteArg::Gfamily => Suite::Gfamily,
        SuiteArg::Theorem2 => Suite::Theorem2,
    };
    let report = run_suite(suite, &opts)?;
    let mut lines: Vec<String> = report
        .checks
        .iter()
        .map(|c| format!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.observed))
        .collect();
    lines.extend(report.notes.iter().map(|n| format!("note {n}")));
    Ok(Output::Report { input: None, result: to_value(&report), summary: lines.join("\n"), passed: report.passed })
}

fn cmd_lp_dump(input: &GraphInput, which: LpKind, closed: bool, cap: usize) -> Outcome {
    let (g, _) = read_graph(input)?;
    let program = match which {
        LpKind::FractionalCover => bounds::fractional_cover_lp(&g).0,
        LpKind::Shannon => {
            if g.n() > cap {
                return Err(Error::CapExceeded {
                    what: "vertex count for the Shannon bound",
                    value: g.n() as u64,
                    cap: cap as u64,
                }
                .into());
            }
            if closed {
                bounds::closed_shannon_lp(&g).lp
            } else {
                bounds::shannon_lp(&g)
            }
        }
    };
    Ok(Output::Text(program.to_lp_text()))
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Bounds { .. } => "bounds",
        Command::Guess { .. } => "guess",
        Command::Reduce { .. } => "reduce",
        Command::MinimalCheck { .. } => "minimal-check",
        Command::Survey { .. } => "survey",
        Command::Verify { .. } => "verify",
        Command::LpDump { .. } => "lp-dump",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Bounds { input, shannon_cap, always_shannon } => cmd_bounds(input, *shannon_cap, *always_shannon),
        Command::Guess { input, q, word_cap } => cmd_guess(input, *q, *word_cap),
        Command::Reduce { input, reducible_cap } => cmd_reduce(input, *reducible_cap),
        Command::MinimalCheck { input, reducible_cap } => cmd_minimal_check(input, *reducible_cap),
        Command::Survey { n, connected, cache, max_n, summary } => {
            cmd_survey(cli.jobs, *n, *connected, cache, *max_n, *summary)
        }
        Command::Verify { suite, n, cache, max_n } => cmd_verify(cli.jobs, *suite, *n, cache, *max_n),
        Command::LpDump { input, which, closed, shannon_cap } => cmd_lp_dump(input, *which, *closed, *shannon_cap),
    };
    let elapsed = start.elapsed().as_secs_f64();

    match outcome {
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Output::Text(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report { input, result, summary, passed }) => {
            let report = Report {
                command: name(&cli.command),
                version: env!("CARGO_PKG_VERSION"),
                input,
                result,
                timing: cli.timing.then(|| json!({ "seconds": elapsed })),
            };
            let mut out = io::stdout().lock();
            let _ = serde_json::to_writer_pretty(&mut out, &report);
            let _ = writeln!(out);
            if io::stderr().is_terminal() {
                eprintln!("{summary}");
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
