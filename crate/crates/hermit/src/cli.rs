//! Command-line front end: censuses, code construction, weight counts,
//! and the `verify` command that replays every closed form against the
//! brute-force oracle.
//!
//! Exit codes: 0 on success, 1 on usage or domain errors, 2 when a
//! mathematical cross-check fails. Output is JSON (or CSV) on stdout and
//! is byte-identical across runs and thread counts: maps are ordered,
//! nothing timestamped, and all parallel reductions are commutative.

use crate::census::{
    line_census, n_k_table, parabola_census_brute, parabola_census_formula, CensusHistogram,
    Mode, Universe,
};
use crate::codes::{build_parity_check, code_params, corner_edge_m, CodeSpec};
use crate::curve::{
    classify_parabola, enumerate_points, parabola_intersection_count, Parabola,
};
use crate::field::FieldCtx;
use crate::weights::{
    min_weight_count_corner, min_weight_count_edge, oracle_count, second_weight_configs,
    support_geometry_check, weight4_corner_d3, weight4_edge1_d3, weight4_edge2_d3,
    weight5_corner_d4, weight5_edge_d4, CodeKind, CountMethod, EdgeHorizontalCandidates,
    HorizontalCount, SupportFilter, WeightReport, DEFAULT_ORACLE_BUDGET,
};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;

/// Version tag for the canonical point ordering embedded in every output.
pub const POINT_ORDER: &str = "x-enc-then-y-enc/v1";

/// Environment variable overriding the default oracle budget.
pub const BUDGET_ENV: &str = "HERMIT_BUDGET";

#[derive(Debug)]
pub struct CliOutcome {
    pub exit_code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "hermit",
    about = "Hermitian curves over GF(q²): intersection censuses, codes, and exact small-weight codeword counts",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intersection-count censuses for parabolas and lines
    Census {
        #[command(subcommand)]
        target: CensusTarget,
    },
    /// Code parameters and parity-check matrices
    Code {
        #[command(subcommand)]
        what: CodeCommand,
    },
    /// Codeword counts by closed form or brute force
    Weights {
        #[command(subcommand)]
        how: WeightsCommand,
    },
    /// Cross-check every formula within budget against the oracle
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum CensusTarget {
    /// All q⁴(q²−1) parabolas
    Parabolas(CensusArgs),
    /// Vertical and non-vertical lines
    Lines(CensusArgs),
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Prime power q; the curve lives over GF(q²)
    #[arg(long, conflicts_with_all = ["p", "e"])]
    q: Option<u32>,
    /// Prime characteristic (use with --e)
    #[arg(long, requires = "e")]
    p: Option<u32>,
    /// Extension degree, q = p^e
    #[arg(long, requires = "p")]
    e: Option<u32>,
}

impl FieldArgs {
    fn ctx(&self) -> Result<FieldCtx> {
        match (self.q, self.p, self.e) {
            (Some(q), None, None) => FieldCtx::for_q(q),
            (None, Some(p), Some(e)) => FieldCtx::new(p, e),
            _ => Err(Error::InvalidParameter(
                "give either --q or both --p and --e".into(),
            )),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    Brute,
    Formula,
    Both,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ConfigArg {
    All,
    Vertical,
    Horizontal,
    Nonvertical,
}

impl ConfigArg {
    fn filter(self) -> SupportFilter {
        match self {
            ConfigArg::All => SupportFilter::All,
            ConfigArg::Vertical => SupportFilter::VerticalLine,
            ConfigArg::Horizontal => SupportFilter::HorizontalLine,
            ConfigArg::Nonvertical => SupportFilter::NonVerticalLine,
        }
    }
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CodeSelector {
    /// Evaluation bound m
    #[arg(long, conflicts_with_all = ["d", "j"])]
    m: Option<u32>,
    /// Designed distance d (first phase, 2 ≤ d ≤ q)
    #[arg(long)]
    d: Option<u32>,
    /// Edge index j (0 = corner code)
    #[arg(long, default_value_t = 0, requires = "d")]
    j: u32,
}

impl CodeSelector {
    fn spec(&self) -> Result<CodeSpec> {
        match (self.m, self.d) {
            (Some(m), None) => Ok(CodeSpec::MForm { m }),
            (None, Some(d)) => Ok(CodeSpec::CornerEdge { d, j: self.j }),
            _ => Err(Error::InvalidParameter(
                "give either --m or --d (with optional --j)".into(),
            )),
        }
    }
}

#[derive(Subcommand, Debug)]
enum CodeCommand {
    /// Length, dimension, distance and basis of a code
    Params {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        select: CodeSelector,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The parity-check matrix, one row per basis monomial
    Matrix {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        select: CodeSelector,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum WeightsCommand {
    /// Closed-form codeword count
    Formula(WeightsArgs),
    /// Brute-force oracle count
    Brute(WeightsArgs),
}

#[derive(Args, Debug)]
struct WeightsArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Designed distance d
    #[arg(long)]
    d: u32,
    /// Edge index j (0 = corner code)
    #[arg(long, default_value_t = 0)]
    j: u32,
    /// Codeword weight w
    #[arg(long)]
    w: u32,
    /// Restrict supports to a line configuration
    #[arg(long, value_enum, default_value_t = ConfigArg::All)]
    config: ConfigArg,
    #[arg(long)]
    threads: Option<usize>,
    /// Cap on enumerated supports (default 8000000; HERMIT_BUDGET overrides)
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Largest weight to check (default: d+1 coverage, capped here)
    #[arg(long, default_value_t = 5)]
    max_w: u32,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Output envelopes
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FieldDescriptor {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
}

impl FieldDescriptor {
    fn of(ctx: &FieldCtx) -> FieldDescriptor {
        FieldDescriptor {
            p: ctx.p(),
            e: ctx.e(),
            q: ctx.q(),
            modulus: ctx.modulus().to_vec(),
        }
    }
}

#[derive(Serialize)]
struct CensusOutput {
    schema: &'static str,
    field: FieldDescriptor,
    point_order: &'static str,
    histograms: Vec<CensusHistogram>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matched: Option<bool>,
}

#[derive(Serialize)]
struct ParamsOutput {
    schema: &'static str,
    field: FieldDescriptor,
    point_order: &'static str,
    spec: CodeSpec,
    m: u32,
    phase: u8,
    n: u32,
    k: u32,
    d: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_lower_bound: Option<i64>,
    basis: Vec<(u32, u32)>,
}

#[derive(Serialize)]
struct MatrixOutput {
    schema: &'static str,
    field: FieldDescriptor,
    point_order: &'static str,
    spec: CodeSpec,
    basis: Vec<(u32, u32)>,
    rows: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct WeightsOutput {
    schema: &'static str,
    field: FieldDescriptor,
    point_order: &'static str,
    report: WeightReport,
    /// Both published candidates for the disputed edge-horizontal count;
    /// `report.count` carries the oracle-confirmed (scaled) one.
    #[serde(skip_serializing_if = "Option::is_none")]
    edge_horizontal_candidates: Option<EdgeHorizontalCandidates>,
}

#[derive(Serialize, Clone)]
struct Check {
    name: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    actual: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

impl Check {
    fn skipped(name: impl Into<String>, why: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: "skipped",
            expected: None,
            actual: None,
            note: Some(why.into()),
        }
    }

    fn compare(name: impl Into<String>, expected: u128, actual: u128) -> Check {
        Check {
            name: name.into(),
            status: if expected == actual { "pass" } else { "fail" },
            expected: Some(expected),
            actual: Some(actual),
            note: None,
        }
    }

    fn of(name: impl Into<String>, ok: bool, note: Option<String>) -> Check {
        Check {
            name: name.into(),
            status: if ok { "pass" } else { "fail" },
            expected: None,
            actual: None,
            note,
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    schema: &'static str,
    field: FieldDescriptor,
    point_order: &'static str,
    q: u32,
    max_w: u32,
    budget: u64,
    checks: Vec<Check>,
    /// Which edge-horizontal candidate the oracle confirmed, when tested.
    #[serde(skip_serializing_if = "Option::is_none")]
    edge_horizontal_winner: Option<&'static str>,
    ok: bool,
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Parses and runs a full command line (including argv[0]); never panics
/// on user input. The caller decides what to do with the streams.
pub fn run<I, T>(args: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let friendly = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            return CliOutcome {
                exit_code: if friendly { EXIT_OK } else { EXIT_USAGE },
                stdout: if friendly { e.to_string() } else { String::new() },
                stderr: if friendly { String::new() } else { e.to_string() },
            };
        }
    };
    match dispatch(cli) {
        Ok((exit_code, rendered, out_path)) => match out_path {
            None => CliOutcome {
                exit_code,
                stdout: rendered,
                stderr: String::new(),
            },
            Some(path) => match std::fs::write(&path, &rendered) {
                Ok(()) => CliOutcome {
                    exit_code,
                    stdout: String::new(),
                    stderr: String::new(),
                },
                Err(e) => CliOutcome {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: format!("error: cannot write {}: {e}\n", path.display()),
                },
            },
        },
        Err(e) => CliOutcome {
            exit_code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn resolve_budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

type Rendered = (u8, String, Option<PathBuf>);

fn dispatch(cli: Cli) -> Result<Rendered> {
    match cli.command {
        Command::Census { target } => match target {
            CensusTarget::Parabolas(args) => census_parabolas(args),
            CensusTarget::Lines(args) => census_lines(args),
        },
        Command::Code { what } => match what {
            CodeCommand::Params {
                field,
                select,
                format,
                out,
            } => code_params_cmd(field, select, format, out),
            CodeCommand::Matrix {
                field,
                select,
                format,
                out,
            } => code_matrix_cmd(field, select, format, out),
        },
        Command::Weights { how } => match how {
            WeightsCommand::Formula(args) => weights_formula_cmd(args),
            WeightsCommand::Brute(args) => weights_brute_cmd(args),
        },
        Command::Verify(args) => verify_cmd(args),
    }
}

// ---------------------------------------------------------------------------
// census
// ---------------------------------------------------------------------------

fn census_csv(histograms: &[CensusHistogram]) -> String {
    let mut s = String::from("universe,mode,k,count\n");
    for h in histograms {
        for (k, n) in &h.histogram {
            let u = match h.universe {
                Universe::Parabolas => "parabolas",
                Universe::NonVerticalLines => "non-vertical-lines",
                Universe::VerticalLines => "vertical-lines",
            };
            let m = match h.mode {
                Mode::Brute => "brute",
                Mode::Formula => "formula",
            };
            writeln!(s, "{u},{m},{k},{n}").unwrap();
        }
    }
    s
}

fn render_census(
    ctx: &FieldCtx,
    histograms: Vec<CensusHistogram>,
    matched: Option<bool>,
    format: FormatArg,
    out: Option<PathBuf>,
) -> Result<Rendered> {
    let exit = match matched {
        Some(false) => EXIT_MISMATCH,
        _ => EXIT_OK,
    };
    let output = CensusOutput {
        schema: "hermit-census/v1",
        field: FieldDescriptor::of(ctx),
        point_order: POINT_ORDER,
        histograms,
        matched,
    };
    let rendered = match format {
        FormatArg::Json => to_json(&output),
        FormatArg::Csv => census_csv(&output.histograms),
    };
    Ok((exit, rendered, out))
}

fn census_parabolas(args: CensusArgs) -> Result<Rendered> {
    let ctx = args.field.ctx()?;
    let (histograms, matched) = with_pool(args.threads, || -> Result<_> {
        Ok(match args.mode {
            ModeArg::Brute => (vec![parabola_census_brute(&ctx)?], None),
            ModeArg::Formula => (vec![parabola_census_formula(&ctx)], None),
            ModeArg::Both => {
                let brute = parabola_census_brute(&ctx)?;
                let formula = parabola_census_formula(&ctx);
                let matched = brute.histogram == formula.histogram;
                (vec![brute, formula], Some(matched))
            }
        })
    })??;
    render_census(&ctx, histograms, matched, args.format, args.out)
}

fn census_lines(args: CensusArgs) -> Result<Rendered> {
    let ctx = args.field.ctx()?;
    let (histograms, matched) = with_pool(args.threads, || -> Result<_> {
        let mut hs = Vec::new();
        let mut matched = None;
        for universe in [Universe::NonVerticalLines, Universe::VerticalLines] {
            match args.mode {
                ModeArg::Brute => hs.push(line_census(&ctx, universe, Mode::Brute)?),
                ModeArg::Formula => hs.push(line_census(&ctx, universe, Mode::Formula)?),
                ModeArg::Both => {
                    let b = line_census(&ctx, universe, Mode::Brute)?;
                    let f = line_census(&ctx, universe, Mode::Formula)?;
                    let m = b.histogram == f.histogram;
                    matched = Some(matched.unwrap_or(true) && m);
                    hs.push(b);
                    hs.push(f);
                }
            }
        }
        Ok((hs, matched))
    })??;
    render_census(&ctx, histograms, matched, args.format, args.out)
}

// ---------------------------------------------------------------------------
// code
// ---------------------------------------------------------------------------

fn resolved_m(ctx: &FieldCtx, spec: &CodeSpec) -> Result<u32> {
    match *spec {
        CodeSpec::MForm { m } => Ok(m),
        CodeSpec::CornerEdge { d, j } => corner_edge_m(ctx, d, j),
    }
}

fn code_params_cmd(
    field: FieldArgs,
    select: CodeSelector,
    format: FormatArg,
    out: Option<PathBuf>,
) -> Result<Rendered> {
    let ctx = field.ctx()?;
    let spec = select.spec()?;
    let params = code_params(&ctx, &spec)?;
    let basis = crate::codes::build_basis(&ctx, &spec)?;
    let output = ParamsOutput {
        schema: "hermit-code-params/v1",
        field: FieldDescriptor::of(&ctx),
        point_order: POINT_ORDER,
        spec,
        m: resolved_m(&ctx, &spec)?,
        phase: params.phase,
        n: ctx.q().pow(3),
        k: params.k,
        d: params.d,
        k_lower_bound: params.k_lower_bound,
        basis: basis.exponents.clone(),
    };
    let rendered = match format {
        FormatArg::Json => to_json(&output),
        FormatArg::Csv => {
            let mut s = String::from("m,phase,n,k,d\n");
            writeln!(
                s,
                "{},{},{},{},{}",
                output.m, output.phase, output.n, output.k, output.d
            )
            .unwrap();
            s
        }
    };
    Ok((EXIT_OK, rendered, out))
}

fn code_matrix_cmd(
    field: FieldArgs,
    select: CodeSelector,
    format: FormatArg,
    out: Option<PathBuf>,
) -> Result<Rendered> {
    let ctx = field.ctx()?;
    let spec = select.spec()?;
    let pc = build_parity_check(&ctx, &spec)?;
    let rows: Vec<Vec<u32>> = (0..pc.matrix.rows())
        .map(|r| pc.matrix.row(r).iter().map(|e| e.0).collect())
        .collect();
    let rendered = match format {
        FormatArg::Csv => {
            let mut s = String::new();
            for row in &rows {
                let line: Vec<String> = row.iter().map(u32::to_string).collect();
                writeln!(s, "{}", line.join(",")).unwrap();
            }
            s
        }
        FormatArg::Json => to_json(&MatrixOutput {
            schema: "hermit-parity-check/v1",
            field: FieldDescriptor::of(&ctx),
            point_order: POINT_ORDER,
            spec,
            basis: pc.basis.exponents.clone(),
            rows,
        }),
    };
    Ok((EXIT_OK, rendered, out))
}

// ---------------------------------------------------------------------------
// weights
// ---------------------------------------------------------------------------

fn formula_count(
    ctx: &FieldCtx,
    d: u32,
    j: u32,
    w: u32,
    config: ConfigArg,
) -> Result<(u128, Option<EdgeHorizontalCandidates>)> {
    let q = ctx.q();
    let kind = if j == 0 { CodeKind::Corner } else { CodeKind::Edge };
    if j > d.saturating_sub(1) {
        return Err(Error::SpecOutOfRange(format!("j={j} outside 0 ≤ j ≤ d−1")));
    }
    match (config, w) {
        (ConfigArg::All, w) if w == d => Ok((
            match kind {
                CodeKind::Corner => min_weight_count_corner(q, d)?,
                CodeKind::Edge => min_weight_count_edge(q, d)?,
            },
            None,
        )),
        (ConfigArg::All, w) if w == d + 1 && d == 3 => Ok((
            match j {
                0 => weight4_corner_d3(q)?,
                1 => weight4_edge1_d3(q, &n_k_table(ctx, Mode::Formula)?)?,
                _ => weight4_edge2_d3(q)?,
            },
            None,
        )),
        (ConfigArg::All, w) if w == d + 1 && d == 4 => Ok((
            match kind {
                CodeKind::Corner => weight5_corner_d4(q)?,
                CodeKind::Edge => weight5_edge_d4(q)?,
            },
            None,
        )),
        (ConfigArg::All, _) => Err(Error::SpecOutOfRange(format!(
            "no closed form for w={w} at d={d}; closed forms cover w = d, and w = d+1 for d = 3, 4"
        ))),
        (cfg, w) if w == d + 1 => {
            let configs = second_weight_configs(q, d, kind)?;
            match (cfg, configs.horizontal) {
                (ConfigArg::Vertical, _) => Ok((configs.vertical, None)),
                (ConfigArg::Nonvertical, _) => Ok((configs.non_vertical, None)),
                (ConfigArg::Horizontal, HorizontalCount::Corner(v)) => Ok((v, None)),
                (ConfigArg::Horizontal, HorizontalCount::Edge(c)) => Ok((c.scaled, Some(c))),
                _ => unreachable!(),
            }
        }
        _ => Err(Error::SpecOutOfRange(format!(
            "configuration formulas exist only at w = d+1 (got w={w}, d={d})"
        ))),
    }
}

fn weights_formula_cmd(args: WeightsArgs) -> Result<Rendered> {
    let ctx = args.field.ctx()?;
    let (count, candidates) = formula_count(&ctx, args.d, args.j, args.w, args.config)?;
    let report = WeightReport {
        q: ctx.q(),
        spec: CodeSpec::CornerEdge {
            d: args.d,
            j: args.j,
        },
        w: args.w,
        filter: args.config.filter(),
        method: CountMethod::Formula,
        count,
    };
    render_weights(&ctx, report, candidates, args.format, args.out)
}

fn weights_brute_cmd(args: WeightsArgs) -> Result<Rendered> {
    let ctx = args.field.ctx()?;
    let spec = CodeSpec::CornerEdge {
        d: args.d,
        j: args.j,
    };
    let budget = resolve_budget(args.budget);
    let report = with_pool(args.threads, || {
        oracle_count(&ctx, &spec, args.w, args.config.filter(), budget)
    })??;
    render_weights(&ctx, report, None, args.format, args.out)
}

fn render_weights(
    ctx: &FieldCtx,
    report: WeightReport,
    edge_horizontal_candidates: Option<EdgeHorizontalCandidates>,
    format: FormatArg,
    out: Option<PathBuf>,
) -> Result<Rendered> {
    let rendered = match format {
        FormatArg::Json => to_json(&WeightsOutput {
            schema: "hermit-weights/v1",
            field: FieldDescriptor::of(ctx),
            point_order: POINT_ORDER,
            report,
            edge_horizontal_candidates,
        }),
        FormatArg::Csv => format!(
            "q,d_j,w,filter,method,count\n{},{:?},{},{:?},{:?},{}\n",
            report.q, report.spec, report.w, report.filter, report.method, report.count
        ),
    };
    Ok((EXIT_OK, rendered, out))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn verify_cmd(args: VerifyArgs) -> Result<Rendered> {
    let ctx = args.field.ctx()?;
    let budget = resolve_budget(args.budget);
    let output = with_pool(args.threads, || run_verify(&ctx, args.max_w, budget))??;
    let exit = if output.ok { EXIT_OK } else { EXIT_MISMATCH };
    let rendered = match args.format {
        FormatArg::Json => to_json(&output),
        FormatArg::Csv => {
            let mut s = String::from("check,status,expected,actual,note\n");
            for c in &output.checks {
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    c.name,
                    c.status,
                    c.expected.map_or(String::new(), |v| v.to_string()),
                    c.actual.map_or(String::new(), |v| v.to_string()),
                    c.note.clone().unwrap_or_default()
                )
                .unwrap();
            }
            s
        }
    };
    Ok((exit, rendered, args.out))
}

/// The solution-count facts the whole construction rests on: fiber sizes
/// of the trace, the norm, and the (q−1)-power map.
fn field_solution_count_check(ctx: &FieldCtx) -> bool {
    let q = ctx.q();
    let q2 = ctx.q2();
    // trace fibers: every t in GF(q) hit exactly q times
    let mut trace_hits = vec![0u32; q2 as usize];
    let mut norm_hits = vec![0u32; q2 as usize];
    let mut power_hits = vec![0u32; q2 as usize];
    for x in ctx.elems() {
        trace_hits[ctx.trace(x).0 as usize] += 1;
        norm_hits[ctx.norm(x).0 as usize] += 1;
        if x.0 != 0 {
            power_hits[ctx.pow(x, q as u64 - 1).0 as usize] += 1;
        }
    }
    for t in ctx.elems() {
        let in_sub = ctx.in_subfield(t);
        if trace_hits[t.0 as usize] != if in_sub { q } else { 0 } {
            return false;
        }
        let expected_norm = if t.0 == 0 {
            1
        } else if in_sub {
            q + 1
        } else {
            0
        };
        if norm_hits[t.0 as usize] != expected_norm {
            return false;
        }
        // x^(q−1) = t solvable iff N(t) = 1, with q−1 solutions
        if t.0 != 0 {
            let expected = if ctx.norm(t).0 == 1 { q - 1 } else { 0 };
            if power_hits[t.0 as usize] != expected {
                return false;
            }
        }
    }
    true
}

fn classifier_check(ctx: &FieldCtx) -> Result<(u128, bool)> {
    let q2 = ctx.q2();
    let exhaustive = ctx.q() <= 5;
    let mut checked = 0u128;
    let mut a_enc = 1u32;
    while a_enc < q2 {
        for b_enc in 0..q2 {
            for c_enc in 0..q2 {
                if !exhaustive {
                    // deterministic sparse sample, ~10⁴ parabolas
                    let h = a_enc
                        .wrapping_mul(2654435761)
                        .wrapping_add(b_enc.wrapping_mul(40503))
                        .wrapping_add(c_enc.wrapping_mul(2246822519));
                    if h % ((q2 as u64 * q2 as u64 * q2 as u64 / 10_000) as u32 + 1) != 0 {
                        continue;
                    }
                }
                let par = Parabola::new(
                    crate::field::Elem(a_enc),
                    crate::field::Elem(b_enc),
                    crate::field::Elem(c_enc),
                )?;
                if classify_parabola(ctx, &par)? != parabola_intersection_count(ctx, &par) {
                    return Ok((checked, false));
                }
                checked += 1;
            }
        }
        a_enc += 1;
    }
    Ok((checked, true))
}

fn run_verify(ctx: &FieldCtx, max_w: u32, budget: u64) -> Result<VerifyOutput> {
    let q = ctx.q();
    let mut checks = Vec::new();

    checks.push(Check::of(
        "field-solution-counts",
        field_solution_count_check(ctx),
        None,
    ));
    checks.push(Check::compare(
        "curve-point-count",
        (q as u128).pow(3),
        enumerate_points(ctx).len() as u128,
    ));

    for universe in [Universe::NonVerticalLines, Universe::VerticalLines] {
        let b = line_census(ctx, universe, Mode::Brute)?;
        let f = line_census(ctx, universe, Mode::Formula)?;
        checks.push(Check::of(
            format!("line-census-{:?}", universe),
            b.histogram == f.histogram,
            None,
        ));
    }

    match parabola_census_brute(ctx) {
        Ok(b) => {
            let f = parabola_census_formula(ctx);
            checks.push(Check::of(
                "parabola-census",
                b.histogram == f.histogram && b.total == b.expected_total(),
                None,
            ));
            match n_k_table(ctx, Mode::Brute) {
                Ok(nb) => {
                    let nf = n_k_table(ctx, Mode::Formula)?;
                    checks.push(Check::of("n-k-table", nb == nf, None));
                }
                Err(e) => checks.push(Check::skipped("n-k-table", e.to_string())),
            }
        }
        Err(e) => {
            checks.push(Check::skipped("parabola-census", e.to_string()));
            checks.push(Check::skipped("n-k-table", "census skipped".to_string()));
        }
    }

    let (checked, ok) = classifier_check(ctx)?;
    checks.push(Check::of(
        "parabola-classifier",
        ok,
        Some(format!("{checked} parabolas")),
    ));

    let mut winner: Option<&'static str> = None;
    let mut winner_consistent = true;

    for d in 2..=q {
        for j in 0..=d - 1 {
            let spec = CodeSpec::CornerEdge { d, j };
            let name = format!("min-weight-d{d}-j{j}");
            if d > max_w {
                checks.push(Check::skipped(name, format!("w={d} above max_w={max_w}")));
                continue;
            }
            let formula = if j == 0 {
                min_weight_count_corner(q, d)?
            } else {
                min_weight_count_edge(q, d)?
            };
            match oracle_count(ctx, &spec, d, SupportFilter::All, budget) {
                Ok(r) => checks.push(Check::compare(name, formula, r.count)),
                Err(Error::BudgetExceeded(why)) => checks.push(Check::skipped(name, why)),
                Err(e) => return Err(e),
            }

            // minimum-weight support geometry
            let gname = format!("support-geometry-d{d}-j{j}-w{d}");
            if d <= max_w {
                match support_geometry_check(ctx, &spec, d, budget) {
                    Ok(r) => checks.push(Check::of(
                        gname,
                        r.pass,
                        Some(format!("{} supports", r.supports_with_words)),
                    )),
                    Err(Error::BudgetExceeded(why)) => checks.push(Check::skipped(gname, why)),
                    Err(e) => return Err(e),
                }
            }

            // second-weight checks where the closed forms exist
            let w = d + 1;
            if w > max_w || !(3..=4).contains(&d) || d >= q + 1 {
                continue;
            }
            let kind = if j == 0 { CodeKind::Corner } else { CodeKind::Edge };
            let configs = second_weight_configs(q, d, kind)?;

            let vname = format!("second-weight-vertical-d{d}-j{j}");
            match oracle_count(ctx, &spec, w, SupportFilter::VerticalLine, budget) {
                Ok(r) => checks.push(Check::compare(vname, configs.vertical, r.count)),
                Err(Error::BudgetExceeded(why)) => checks.push(Check::skipped(vname, why)),
                Err(e) => return Err(e),
            }

            let hname = format!("second-weight-horizontal-d{d}-j{j}");
            match oracle_count(ctx, &spec, w, SupportFilter::HorizontalLine, budget) {
                Ok(r) => match configs.horizontal {
                    HorizontalCount::Corner(v) => checks.push(Check::compare(hname, v, r.count)),
                    HorizontalCount::Edge(c) => {
                        let (status, this) = match (r.count == c.scaled, r.count == c.unscaled) {
                            (true, false) => (true, Some("scaled")),
                            (false, true) => (true, Some("unscaled")),
                            _ => (false, None),
                        };
                        if let Some(w) = this {
                            if *winner.get_or_insert(w) != w {
                                winner_consistent = false;
                            }
                        }
                        checks.push(Check::of(
                            hname,
                            status && this.is_some(),
                            Some(format!(
                                "oracle {} vs candidates {} / {}; winner: {}",
                                r.count,
                                c.unscaled,
                                c.scaled,
                                this.unwrap_or("none")
                            )),
                        ));
                    }
                },
                Err(Error::BudgetExceeded(why)) => checks.push(Check::skipped(hname, why)),
                Err(e) => return Err(e),
            }

            let nname = format!("second-weight-nonvertical-d{d}-j{j}");
            match oracle_count(ctx, &spec, w, SupportFilter::NonVerticalLine, budget) {
                Ok(r) => checks.push(Check::compare(nname, configs.non_vertical, r.count)),
                Err(Error::BudgetExceeded(why)) => checks.push(Check::skipped(nname, why)),
                Err(e) => return Err(e),
            }

            let tname = format!("second-weight-total-d{d}-j{j}");
            let total_formula = match (d, j) {
                (3, 0) => Some(weight4_corner_d3(q)?),
                (3, 1) => Some(weight4_edge1_d3(q, &n_k_table(ctx, Mode::Formula)?)?),
                (3, _) => Some(weight4_edge2_d3(q)?),
                (4, 0) => Some(weight5_corner_d4(q)?),
                (4, _) => Some(weight5_edge_d4(q)?),
                _ => None,
            };
            if let Some(expected) = total_formula {
                match oracle_count(ctx, &spec, w, SupportFilter::All, budget) {
                    Ok(r) => checks.push(Check::compare(tname, expected, r.count)),
                    Err(Error::BudgetExceeded(why)) => checks.push(Check::skipped(tname, why)),
                    Err(e) => return Err(e),
                }
            }

            // second-weight support geometry for edge codes at d ≥ 4
            if kind == CodeKind::Edge && d >= 4 {
                let gname = format!("support-geometry-d{d}-j{j}-w{w}");
                match support_geometry_check(ctx, &spec, w, budget) {
                    Ok(r) => checks.push(Check::of(
                        gname,
                        r.pass,
                        Some(format!("{} supports", r.supports_with_words)),
                    )),
                    Err(Error::BudgetExceeded(why)) => checks.push(Check::skipped(gname, why)),
                    Err(e) => return Err(e),
                }
            }
        }
    }

    if !winner_consistent {
        checks.push(Check::of(
            "edge-horizontal-adjudication",
            false,
            Some("inconsistent winners across instances".into()),
        ));
    }

    let ok = checks.iter().all(|c| c.status != "fail");
    Ok(VerifyOutput {
        schema: "hermit-verify/v1",
        field: FieldDescriptor::of(ctx),
        point_order: POINT_ORDER,
        q,
        max_w,
        budget,
        checks,
        edge_horizontal_winner: if winner_consistent { winner } else { None },
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_words(words: &[&str]) -> CliOutcome {
        run(std::iter::once("hermit").chain(words.iter().copied()))
    }

    #[test]
    fn census_both_modes_match() {
        let out = run_words(&["census", "parabolas", "--q", "3", "--mode", "both"]);
        assert_eq!(out.exit_code, EXIT_OK, "stderr: {}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["matched"], serde_json::Value::Bool(true));
        assert_eq!(v["histograms"][0]["total"], 648);
    }

    #[test]
    fn census_lines_q2() {
        let out = run_words(&["census", "lines", "--q", "2", "--mode", "brute"]);
        assert_eq!(out.exit_code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["histograms"][0]["histogram"]["1"], 8);
        assert_eq!(v["histograms"][0]["histogram"]["3"], 8);
    }

    #[test]
    fn census_rejects_huge_q() {
        let out = run_words(&["census", "parabolas", "--q", "1000000"]);
        assert_eq!(out.exit_code, EXIT_USAGE);
        assert!(out.stderr.contains("prime power") || out.stderr.contains("table limit"));
    }

    #[test]
    fn code_params_h13() {
        let out = run_words(&["code", "params", "--q", "3", "--d", "3", "--j", "1"]);
        assert_eq!(out.exit_code, EXIT_OK, "stderr: {}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["n"], 27);
        assert_eq!(v["k"], 23);
        assert_eq!(v["d"], 3);
        assert_eq!(v["m"], 6);
    }

    #[test]
    fn code_matrix_csv_shape() {
        let out = run_words(&["code", "matrix", "--q", "2", "--d", "2"]);
        assert_eq!(out.exit_code, EXIT_OK);
        let lines: Vec<&str> = out.stdout.trim().lines().collect();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0], "1,1,1,1,1,1,1,1");
    }

    #[test]
    fn weights_formula_q3() {
        let out = run_words(&[
            "weights", "formula", "--q", "3", "--d", "3", "--j", "0", "--w", "4",
        ]);
        assert_eq!(out.exit_code, EXIT_OK, "stderr: {}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["report"]["count"], 101088);
    }

    #[test]
    fn weights_brute_small() {
        let out = run_words(&[
            "weights", "brute", "--q", "2", "--d", "2", "--j", "1", "--w", "2",
        ]);
        assert_eq!(out.exit_code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["report"]["count"], 12);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_words(&["census", "parabolas"]).exit_code, EXIT_USAGE);
        assert_eq!(run_words(&["nonsense"]).exit_code, EXIT_USAGE);
        assert_eq!(
            run_words(&["weights", "formula", "--q", "3", "--d", "3", "--w", "9"]).exit_code,
            EXIT_USAGE
        );
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_words(&["--help"]).exit_code, EXIT_OK);
    }

    #[test]
    fn verify_q2_passes() {
        let out = run_words(&["verify", "--q", "2", "--max-w", "3"]);
        assert_eq!(out.exit_code, EXIT_OK, "stderr: {}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["ok"], serde_json::Value::Bool(true));
    }
}
