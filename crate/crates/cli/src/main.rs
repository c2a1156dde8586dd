mod format;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use seqnorm::conditions::{check, CheckOptions, ConditionId, ConditionReport};
use seqnorm::families::{FamilyKind, MatrixFamily};
use seqnorm::norm::{norm_estimate, NormOptions};
use seqnorm::spaces::{Exponent, SpaceSpec, WeightSeq};
use seqnorm::verify::{self, Report, VerifyOptions};
use seqnorm::{Estimate, Matrix, Space};

use format::{sig9, sig9_list};

/// `println!` that tolerates a closed pipe, as in `seqnorm verify | head`.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() != std::io::ErrorKind::BrokenPipe {
                panic!("failed writing to stdout: {e}");
            }
        }
    }};
}

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "seqnorm", version, about = "Operator norms of non-negative matrices on sequence spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a truncation of a matrix family as matrix JSON.
    Gen(GenArgs),
    /// Check named conditions on a matrix; exit 1 if any fails.
    Check(CheckArgs),
    /// Estimate the operator norm from E to F.
    Norm(NormArgs),
    /// Run registered claims; exit 1 if any fails.
    Verify(VerifyArgs),
    /// Run claims (or load a saved JSON report) and emit it as markdown, JSON or CSV.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Hilbert,
    Cesaro,
    Wm,
    Nm,
    Gamma,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long)]
    rows: usize,
    /// Defaults to `--rows`.
    #[arg(long)]
    cols: Option<usize>,
    /// Order of the Cesàro or Gamma family.
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated weights for `wm` and `nm`.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    /// Emit the transposed family.
    #[arg(long)]
    transpose: bool,
    /// Output path; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    matrix: PathBuf,
    /// Condition ids (c12, c13, c31, c41, c41star, c44, c410, c410star, c411, c412) or `all`.
    #[arg(long = "cond", value_delimiter = ',', required = true)]
    conds: Vec<String>,
    /// Row cap for rearrangement enumeration.
    #[arg(long)]
    cap: Option<usize>,
    /// Row cap for subset enumeration.
    #[arg(long)]
    subset_cap: Option<usize>,
    /// Check only the leading rows.
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    slack: f64,
    /// Relative slack; use about 1e-12 for matrices with rounded entries.
    #[arg(long, default_value_t = 0.0)]
    relative: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct NormArgs {
    matrix: PathBuf,
    /// Domain space: lp:<p>, lpw:<p>:<weights-file>, lorentz:<p>:<weights-file>.
    #[arg(long = "E", alias = "e", value_name = "SPACE")]
    domain: String,
    /// Target space, same grammar as --E.
    #[arg(long = "F", alias = "f", value_name = "SPACE")]
    target: String,
    /// Restrict to non-negative decreasing vectors.
    #[arg(long, conflicts_with = "both")]
    restricted: bool,
    /// Report unrestricted, restricted and their gap.
    #[arg(long)]
    both: bool,
    #[arg(long, default_value_t = NormOptions::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = NormOptions::default().max_iter)]
    max_iter: usize,
    #[arg(long, default_value_t = NormOptions::default().starts)]
    starts: usize,
    #[arg(long, default_value_t = NormOptions::default().seed)]
    seed: u64,
    /// Skip closed-form paths and always iterate.
    #[arg(long)]
    force_iteration: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClaimSelection {
    /// Run every claim (the default when no filter is given).
    #[arg(long, conflicts_with = "filter")]
    all: bool,
    /// Run claims whose id contains this substring.
    #[arg(long)]
    filter: Option<String>,
    /// Include exploratory claims; their failures do not affect the exit code.
    #[arg(long)]
    exploratory: bool,
    #[arg(long, default_value_t = VerifyOptions::default().samples)]
    samples: usize,
    #[arg(long, default_value_t = VerifyOptions::default().seed)]
    seed: u64,
}

impl ClaimSelection {
    fn run(&self) -> Report {
        let opts = VerifyOptions {
            samples: self.samples,
            seed: self.seed,
            exploratory: self.exploratory,
        };
        Report::new(verify::run_matching(self.filter.as_deref(), &opts))
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    select: ClaimSelection,
    /// List claims without running them.
    #[arg(long)]
    list: bool,
    #[arg(long)]
    json: bool,
    /// Also write the markdown report here.
    #[arg(long)]
    markdown_out: Option<PathBuf>,
    /// Also write the JSON report here.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Markdown,
    Json,
    Csv,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    select: ClaimSelection,
    #[arg(long, value_enum, default_value_t = ReportFormat::Markdown)]
    format: ReportFormat,
    /// Re-emit a saved JSON report instead of running claims.
    #[arg(long, conflicts_with_all = ["all", "filter", "exploratory"])]
    input: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Failure modes that end the process; `Usage` covers bad arguments and
/// unreadable or malformed inputs.
enum Failure {
    Usage(String),
}

impl From<seqnorm::Error> for Failure {
    fn from(e: seqnorm::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(Failure::Usage(msg)) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Norm(args) => cmd_norm(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Report(args) => cmd_report(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("SEQNORM_THREADS") else {
        return Ok(());
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return usage(format!("SEQNORM_THREADS must be a positive integer, got `{raw}`")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .or_else(|e| usage(format!("cannot configure thread pool: {e}")))
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).or_else(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).or_else(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            out!("{}", text.strip_suffix('\n').unwrap_or(text));
            Ok(())
        }
    }
}

fn read_matrix(path: &Path) -> CliResult<Matrix> {
    serde_json::from_str(&read_text(path)?).or_else(|e| usage(format!("{}: not a matrix file: {e}", path.display())))
}

/// Weights as a JSON array, or as plain numbers separated by commas or whitespace.
fn read_weights(path: &Path) -> CliResult<WeightSeq<f64>> {
    let text = read_text(path)?;
    let values: Vec<f64> = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(_) => text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .or_else(|_| usage(format!("{}: cannot parse weights", path.display())))?,
    };
    Ok(WeightSeq::new(values)?)
}

/// `lp:<p>`, `lpw:<p>:<weights-file>` or `lorentz:<p>:<weights-file>`; `p` may be `inf`.
fn parse_space(spec: &str) -> CliResult<Space> {
    let parts: Vec<&str> = spec.splitn(3, ':').collect();
    let finite = |p: &str| -> CliResult<f64> {
        match Exponent::<f64>::parse(p)? {
            Exponent::Finite(p) => Ok(p),
            Exponent::Infinite => Ok(f64::INFINITY),
        }
    };
    match parts.as_slice() {
        ["lp", p] => Ok(SpaceSpec::lp_exponent(Exponent::parse(p)?)),
        ["lpw", p, file] => Ok(SpaceSpec::weighted(finite(p)?, read_weights(Path::new(file))?)?),
        ["lorentz", p, file] => Ok(SpaceSpec::lorentz(finite(p)?, read_weights(Path::new(file))?)?),
        _ => usage(format!(
            "bad space `{spec}`; expected lp:<p>, lpw:<p>:<weights-file> or lorentz:<p>:<weights-file>"
        )),
    }
}

fn to_json<T: serde::Serialize + ?Sized>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value).or_else(|e| usage(format!("serialization failed: {e}")))
}

fn cmd_gen(args: &GenArgs) -> CliResult<u8> {
    let need_alpha = || args.alpha.ok_or_else(|| Failure::Usage("--alpha is required for this family".into()));
    let need_weights = || {
        args.weights
            .clone()
            .ok_or_else(|| Failure::Usage("--weights is required for this family".into()))
    };
    let kind = match args.family {
        FamilyName::Hilbert => FamilyKind::Hilbert,
        FamilyName::Cesaro => FamilyKind::Cesaro { alpha: need_alpha()? },
        FamilyName::Gamma => FamilyKind::Gamma { alpha: need_alpha()? },
        FamilyName::Wm => FamilyKind::WeightedMean { weights: need_weights()? },
        FamilyName::Nm => FamilyKind::Norlund { weights: need_weights()? },
    };
    let mut family = MatrixFamily::new(kind)?;
    if args.transpose {
        family = family.transposed();
    }
    if args.rows == 0 {
        return usage("--rows must be positive");
    }
    let a = family.truncate_rect(args.rows, args.cols.unwrap_or(args.rows))?;
    write_or_print(args.output.as_deref(), &to_json(&a)?)?;
    Ok(EXIT_OK)
}

fn parse_conditions(raw: &[String]) -> CliResult<Vec<ConditionId>> {
    if raw.iter().any(|s| s.eq_ignore_ascii_case("all")) {
        return Ok(ConditionId::ALL.to_vec());
    }
    raw.iter().map(|s| Ok(s.parse::<ConditionId>()?)).collect()
}

fn print_condition(r: &ConditionReport) -> CliResult<()> {
    let verdict = if r.holds { "holds" } else { "fails" };
    out!("{}: {verdict} (l_max {}, r_max {})", r.condition, r.l_max, r.r_max);
    if let Some(w) = &r.witness {
        let text = serde_json::to_string(w).or_else(|e| usage(format!("serialization failed: {e}")))?;
        out!("  witness: {text}");
    }
    Ok(())
}

fn cmd_check(args: &CheckArgs) -> CliResult<u8> {
    let a = read_matrix(&args.matrix)?;
    let ids = parse_conditions(&args.conds)?;
    let mut opts = CheckOptions {
        slack: args.slack,
        relative: args.relative,
        rows: args.rows,
        ..CheckOptions::default()
    };
    if let Some(cap) = args.cap {
        opts = opts.with_perm_cap(cap);
    }
    if let Some(cap) = args.subset_cap {
        opts.subset_cap = cap;
    }
    let reports = ids
        .iter()
        .map(|&id| check(id, &a, &opts))
        .collect::<seqnorm::Result<Vec<_>>>()?;
    if args.json {
        out!("{}", to_json(&reports)?);
    } else {
        for r in &reports {
            print_condition(r)?;
        }
    }
    Ok(if reports.iter().all(|r| r.holds) { EXIT_OK } else { EXIT_FAIL })
}

fn print_estimate(label: &str, e: &Estimate) {
    let converged = if e.converged { "" } else { " (not converged)" };
    out!(
        "{label}: {} via {:?}, {} iterations{converged}",
        sig9(e.value),
        e.method,
        e.iterations
    );
    out!("  maximizer: {}", sig9_list(&e.maximizer));
}

fn cmd_norm(args: &NormArgs) -> CliResult<u8> {
    let a = read_matrix(&args.matrix)?;
    let (e, f) = (parse_space(&args.domain)?, parse_space(&args.target)?);
    let opts = NormOptions {
        tol: args.tol,
        max_iter: args.max_iter,
        starts: args.starts,
        seed: args.seed,
        force_iteration: args.force_iteration,
        ..NormOptions::default()
    };
    if args.both {
        let full = norm_estimate(&a, &e, &f, false, &opts)?;
        let dec = norm_estimate(&a, &e, &f, true, &opts)?;
        let gap = full.value - dec.value;
        if args.json {
            out!("{}", to_json(&json!({ "unrestricted": full, "restricted": dec, "gap": gap }))?);
        } else {
            print_estimate("unrestricted", &full);
            print_estimate("restricted", &dec);
            out!("gap: {}", sig9(gap));
        }
    } else {
        let est = norm_estimate(&a, &e, &f, args.restricted, &opts)?;
        if args.json {
            out!("{}", to_json(&est)?);
        } else {
            print_estimate(if args.restricted { "restricted" } else { "unrestricted" }, &est);
        }
    }
    Ok(EXIT_OK)
}

fn verdict_code(report: &Report) -> u8 {
    if report.passed {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<u8> {
    if args.list {
        let claims: Vec<_> = verify::list_claims()
            .into_iter()
            .filter(|c| args.select.exploratory || !c.exploratory)
            .filter(|c| args.select.filter.as_deref().is_none_or(|f| c.id.contains(f)))
            .collect();
        if args.json {
            out!("{}", to_json(&claims)?);
        } else {
            for c in &claims {
                out!("{} [{:?}] {}", c.id, c.provenance, c.statement);
            }
        }
        return Ok(EXIT_OK);
    }
    let report = args.select.run();
    if report.total == 0 {
        return usage("no claims match the filter");
    }
    if let Some(path) = &args.markdown_out {
        write_or_print(Some(path), &verify::to_markdown(&report))?;
    }
    if let Some(path) = &args.json_out {
        write_or_print(Some(path), &verify::to_json(&report)?)?;
    }
    if args.json {
        out!("{}", verify::to_json(&report)?);
    } else {
        for r in &report.results {
            let observed = match r.observed {
                Some(verify::ClaimValue::Real(v)) => sig9(v),
                Some(v) => v.to_string(),
                None => "-".into(),
            };
            let expected = match r.expected {
                verify::ClaimValue::Real(v) => sig9(v),
                v => v.to_string(),
            };
            out!("{:?} {} expected {expected} observed {observed}", r.status, r.claim_id);
        }
        out!("{}", verify::summary_line(&report));
    }
    Ok(verdict_code(&report))
}

fn cmd_report(args: &ReportArgs) -> CliResult<u8> {
    let report: Report = match &args.input {
        Some(path) => serde_json::from_str(&read_text(path)?)
            .or_else(|e| usage(format!("{}: not a report file: {e}", path.display())))?,
        None => args.select.run(),
    };
    let text = match args.format {
        ReportFormat::Markdown => verify::to_markdown(&report),
        ReportFormat::Json => verify::to_json(&report)?,
        ReportFormat::Csv => verify::to_csv(&report)?,
    };
    write_or_print(args.output.as_deref(), &text)?;
    Ok(verdict_code(&report))
}
