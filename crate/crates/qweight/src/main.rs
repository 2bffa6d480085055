//! Command-line surface for the qweight library.
//!
//! Subcommands: swap-test, enumerators, distance, uniformity, measure,
//! monogamy, sample-plan, verify-tables. Site indices on the command line
//! are 1-based. Exit codes: 0 ok, 1 internal, 2 input, 3 resource cap,
//! 4 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qweight::analysis::{
    characterize_distribution, code_distance, fixed_partition_measure, k_uniformity,
    monogamy_check, sample_plan,
};
use qweight::enumerators::{enumerator_set_from_distribution, EnumeratorSet};
use qweight::error::Error;
use qweight::stabilizer::{named_code, StabilizerGroup};
use qweight::states::{is_named_state_spec, load_density_matrix, named_state};
use qweight::subset::SubsetMask;
use qweight::swap::{
    analytic_distribution, circuit_distribution, estimate, sample, SwapDistribution,
};
use qweight::tensor::{purity, Operator, SubsystemShape};
use qweight::verify;

#[derive(Parser)]
#[command(
    name = "qweight",
    version,
    about = "Quantum weight enumerators via the n-qubit parallelized SWAP test"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Equality tolerance for residual scans and validation
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// RNG seed for the sampling engine
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Shot count for the sampling engine
    #[arg(long, global = true)]
    shots: Option<u64>,

    /// Distribution engine
    #[arg(long, global = true, value_enum, default_value_t = EngineArg::Analytic)]
    engine: EngineArg,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Analytic,
    Circuit,
    Sample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Outcome distribution of the parallelized SWAP test of two states
    SwapTest {
        /// First state: ghz:n[:d], w:n, basis:<bits>, a code name, or a file
        #[arg(long)]
        a: String,
        /// Second state
        #[arg(long)]
        b: String,
    },
    /// All five enumerator families of a code or state
    Enumerators {
        #[arg(long, conflicts_with = "state")]
        code: Option<String>,
        #[arg(long)]
        state: Option<String>,
        /// Family to print: A, B, A', B', s, or all
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Code distance from the residual scan of K B'_j - A'_j
    Distance {
        #[arg(long)]
        code: String,
    },
    /// k-uniformity of a pure state
    Uniformity {
        #[arg(long)]
        state: String,
    },
    /// Fixed partition entanglement measure over a subset family
    Measure {
        #[arg(long)]
        state: String,
        /// Family such as "1,2;3", or singletons | pairs | all:<k> (1-based sites)
        #[arg(long)]
        subsets: String,
    },
    /// Signed concurrence sums (monogamy inequalities)
    Monogamy {
        #[arg(long)]
        state: String,
        /// Subset T such as "1,2"; all nonempty T when omitted
        #[arg(long)]
        t: Option<String>,
    },
    /// Shot budget for estimating a weight-j residual
    SamplePlan {
        /// Take n, K, d from a named code or file
        #[arg(long)]
        code: Option<String>,
        #[arg(long, required_unless_present = "code")]
        n: Option<usize>,
        /// Code dimension K
        #[arg(long, required_unless_present = "code")]
        k: Option<f64>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        epsilon: f64,
    },
    /// Recompute the reference tables and report per-item errors
    VerifyTables,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::SizeCap(_) => 3,
            Error::Numeric(_) | Error::Io(_) | Error::Json(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::SwapTest { a, b } => cmd_swap_test(cli, a, b),
        Command::Enumerators { code, state, which } => {
            cmd_enumerators(cli, code.as_deref(), state.as_deref(), which)
        }
        Command::Distance { code } => cmd_distance(cli, code),
        Command::Uniformity { state } => cmd_uniformity(cli, state),
        Command::Measure { state, subsets } => cmd_measure(cli, state, subsets),
        Command::Monogamy { state, t } => cmd_monogamy(cli, state, t.as_deref()),
        Command::SamplePlan {
            code,
            n,
            k,
            d,
            j,
            epsilon,
        } => cmd_sample_plan(cli, code.as_deref(), *n, *k, *d, *j, *epsilon),
        Command::VerifyTables => cmd_verify_tables(cli),
    }
}

/// A resolved input: density matrix, shape, and code dimension when known.
struct ResolvedState {
    rho: Operator,
    shape: SubsystemShape,
    code_dim: Option<f64>,
    origin: String,
}

/// Named states and named codes resolve before file paths; a spec that is
/// both a recognized name and an existing file is ambiguous.
fn resolve_state(spec: &str) -> Result<ResolvedState, Failure> {
    let file_exists = Path::new(spec).exists();
    if is_named_state_spec(spec) {
        if file_exists {
            return Err(Failure::input(format!(
                "{spec:?} is both a named state and an existing file; rename one"
            )));
        }
        let (rho, shape) = named_state(spec)?;
        return Ok(ResolvedState {
            rho,
            shape,
            code_dim: None,
            origin: format!("named state {spec}"),
        });
    }
    if let Some(group) = named_code(spec) {
        if file_exists {
            return Err(Failure::input(format!(
                "{spec:?} is both a named code and an existing file; rename one"
            )));
        }
        let code = group.code_projector()?;
        return Ok(ResolvedState {
            rho: code.rho,
            shape: code.shape,
            code_dim: Some(code.dim as f64),
            origin: format!("named code {spec}"),
        });
    }
    if file_exists {
        return load_state_file(Path::new(spec));
    }
    Err(Failure::input(format!(
        "cannot resolve {spec:?}: not a named state, named code, or file"
    )))
}

fn load_state_file(path: &Path) -> Result<ResolvedState, Failure> {
    let looks_like_json = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or(false);
    if looks_like_json {
        let (rho, shape) = load_density_matrix(path)?;
        return Ok(ResolvedState {
            rho,
            shape,
            code_dim: None,
            origin: format!("density matrix {}", path.display()),
        });
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::internal(e.to_string()))?;
    let group = StabilizerGroup::from_text(&text)?;
    let code = group.code_projector()?;
    Ok(ResolvedState {
        rho: code.rho,
        shape: code.shape,
        code_dim: Some(code.dim as f64),
        origin: format!("stabilizer file {}", path.display()),
    })
}

/// Code dimension of a resolved input: declared for codes, otherwise the
/// inverse purity (1 for pure states).
fn effective_code_dim(state: &ResolvedState) -> f64 {
    match state.code_dim {
        Some(k) => k,
        None => {
            let inv = 1.0 / purity(&state.rho);
            if (inv - inv.round()).abs() < 1e-6 {
                inv.round()
            } else {
                inv
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text.as_bytes()).map_err(|e| Failure::internal(e.to_string()))?
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn compute_distribution(
    cli: &Cli,
    a: &ResolvedState,
    b: &ResolvedState,
) -> Result<SwapDistribution, Failure> {
    if a.shape != b.shape {
        return Err(Failure::input(format!(
            "states have different shapes: {:?} vs {:?}",
            a.shape.local_dims(),
            b.shape.local_dims()
        )));
    }
    let dist = match cli.engine {
        EngineArg::Analytic => analytic_distribution(&a.rho, &b.rho, &a.shape)?,
        EngineArg::Circuit => circuit_distribution(&a.rho, &b.rho, &a.shape)?,
        EngineArg::Sample => {
            let shots = cli
                .shots
                .ok_or_else(|| Failure::input("engine=sample requires --shots >= 1"))?;
            let base = analytic_distribution(&a.rho, &b.rho, &a.shape)?;
            estimate(&sample(&base, shots, cli.seed)?)?
        }
    };
    Ok(dist)
}

fn cmd_swap_test(cli: &Cli, a: &str, b: &str) -> Result<u8, Failure> {
    let a = resolve_state(a)?;
    let b = resolve_state(b)?;
    let dist = compute_distribution(cli, &a, &b)?;
    let text = match cli.format {
        FormatArg::Json => dist.to_json()?,
        FormatArg::Table => distribution_table(&dist, &a.origin, &b.origin),
    };
    emit(cli, &text)?;
    Ok(0)
}

fn distribution_table(dist: &SwapDistribution, a: &str, b: &str) -> String {
    let n = dist.n();
    let character = match characterize_distribution(dist) {
        qweight::analysis::DistributionCharacter::ProductPair => "equal pure product states",
        qweight::analysis::DistributionCharacter::OrthogonalSupports => {
            "orthogonal reduced supports"
        }
        qweight::analysis::DistributionCharacter::Neither => "generic",
    };
    let mut out = format!(
        "SWAP test of {a} and {b}\nn = {n}, engine = {}, character: {character}\n",
        dist.method(),
    );
    if dist.is_weight_symmetric(1e-12) {
        out.push_str("weight  p(k)                     masks\n");
        for k in 0..=n {
            let mask = SubsetMask::from_sites(&(0..k).collect::<Vec<_>>(), n).unwrap();
            let count = (0..1usize << n).filter(|b| b.count_ones() as usize == k).count();
            out.push_str(&format!(
                "{k:>6}  {:<23.17}  {count}\n",
                dist.probability(mask)
            ));
        }
    } else {
        out.push_str("bitstring  p(z)\n");
        let mut zeros = 0usize;
        for mask in SubsetMask::all(n) {
            let p = dist.probability(mask);
            if p == 0.0 {
                zeros += 1;
                continue;
            }
            out.push_str(&format!("{mask}  {p:.17}\n"));
        }
        if zeros > 0 {
            out.push_str(&format!("({zeros} outcomes with probability 0 omitted)\n"));
        }
    }
    out
}

fn cmd_enumerators(
    cli: &Cli,
    code: Option<&str>,
    state: Option<&str>,
    which: &str,
) -> Result<u8, Failure> {
    let spec = code
        .or(state)
        .ok_or_else(|| Failure::input("one of --code or --state is required"))?;
    let resolved = resolve_state(spec)?;
    let code_dim = effective_code_dim(&resolved);
    let d = resolved
        .shape
        .uniform_dim()
        .ok_or_else(|| Failure::input("enumerators need a uniform local dimension"))?;
    let dist = match cli.engine {
        EngineArg::Sample => {
            let shots = cli
                .shots
                .ok_or_else(|| Failure::input("engine=sample requires --shots >= 1"))?;
            let base = analytic_distribution(&resolved.rho, &resolved.rho, &resolved.shape)?;
            estimate(&sample(&base, shots, cli.seed)?)?
        }
        EngineArg::Circuit => circuit_distribution(&resolved.rho, &resolved.rho, &resolved.shape)?,
        EngineArg::Analytic => analytic_distribution(&resolved.rho, &resolved.rho, &resolved.shape)?,
    };
    let set = enumerator_set_from_distribution(&dist, d, code_dim)?;
    let text = match cli.format {
        FormatArg::Json => set.to_json()?,
        FormatArg::Table => enumerator_table(&set, which)?,
    };
    emit(cli, &text)?;
    Ok(0)
}

fn family_rows<'a>(set: &'a EnumeratorSet, which: &str) -> Result<Vec<(&'static str, &'a [f64])>, Failure> {
    let all: Vec<(&'static str, &[f64])> = vec![
        ("A", &set.a),
        ("B", &set.b),
        ("A'", &set.a_prime),
        ("B'", &set.b_prime),
        ("s", &set.shadow),
    ];
    let key = which.to_ascii_lowercase().replace('_', "");
    let selected: Vec<_> = match key.as_str() {
        "all" => all,
        "a" => all[..1].to_vec(),
        "b" => all[1..2].to_vec(),
        "a'" | "aprime" => all[2..3].to_vec(),
        "b'" | "bprime" => all[3..4].to_vec(),
        "s" | "shadow" => all[4..5].to_vec(),
        _ => {
            return Err(Failure::input(format!(
                "unknown family {which:?}; expected A, B, A', B', s, or all"
            )))
        }
    };
    Ok(selected)
}

fn enumerator_table(set: &EnumeratorSet, which: &str) -> Result<String, Failure> {
    let mut out = format!("n = {}, d = {}, K = {}\n", set.n, set.d, set.code_dim);
    for (name, values) in family_rows(set, which)? {
        out.push_str(&format!("{name:>3}: "));
        let rendered: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
        out.push_str(&rendered.join(", "));
        out.push('\n');
    }
    Ok(out)
}

fn cmd_distance(cli: &Cli, code: &str) -> Result<u8, Failure> {
    let resolved = resolve_state(code)?;
    let code_dim = effective_code_dim(&resolved);
    let report = code_distance(&resolved.rho, code_dim, &resolved.shape, cli.tol)?;
    let text = match cli.format {
        FormatArg::Json => qweight::json::to_canonical_string(&report)?,
        FormatArg::Table => {
            let mut out = format!(
                "{}: ((n={}, K={}, delta={}))_{}, pure = {}\n",
                resolved.origin, report.n, report.code_dim, report.delta, report.d, report.pure
            );
            if report.degenerate {
                out.push_str("all residuals vanish through weight n (degenerate scan)\n");
            }
            out.push_str("j  residual\n");
            for (j, r) in report.residuals.iter().enumerate() {
                out.push_str(&format!("{j}  {r:+.3e}\n"));
            }
            out
        }
    };
    emit(cli, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct UniformityReport {
    n: usize,
    d: usize,
    k: usize,
    tolerance: f64,
}

fn cmd_uniformity(cli: &Cli, state: &str) -> Result<u8, Failure> {
    let resolved = resolve_state(state)?;
    let k = k_uniformity(&resolved.rho, &resolved.shape, cli.tol)?;
    let report = UniformityReport {
        n: resolved.shape.n(),
        d: resolved.shape.uniform_dim().unwrap_or(0),
        k,
        tolerance: cli.tol,
    };
    let text = match cli.format {
        FormatArg::Json => qweight::json::to_canonical_string(&report)?,
        FormatArg::Table => format!("{} is {k}-uniform (n = {})\n", resolved.origin, report.n),
    };
    emit(cli, &text)?;
    Ok(0)
}

/// Parse a subset family: explicit groups like `"1,2;3"` (1-based sites),
/// or `singletons`, `pairs`, `all:<k>`.
fn parse_subsets(text: &str, n: usize) -> Result<Vec<SubsetMask>, Failure> {
    let all_of_weight = |k: usize| -> Vec<SubsetMask> {
        SubsetMask::all(n).filter(|m| m.weight() == k).collect()
    };
    match text {
        "singletons" => return Ok(all_of_weight(1)),
        "pairs" => return Ok(all_of_weight(2)),
        _ => {}
    }
    if let Some(k) = text.strip_prefix("all:") {
        let k: usize = k
            .parse()
            .map_err(|_| Failure::input(format!("bad subset size in {text:?}")))?;
        if k > n {
            return Err(Failure::input(format!("subset size {k} exceeds n = {n}")));
        }
        return Ok(all_of_weight(k));
    }
    let mut out = Vec::new();
    for group in text.split(';') {
        let group = group.trim();
        if group.is_empty() {
            out.push(SubsetMask::empty(n));
            continue;
        }
        let mut sites = Vec::new();
        for token in group.split(',') {
            let site: usize = token
                .trim()
                .parse()
                .map_err(|_| Failure::input(format!("bad site index {token:?}")))?;
            if site == 0 || site > n {
                return Err(Failure::input(format!(
                    "site {site} out of range 1..={n}"
                )));
            }
            sites.push(site - 1);
        }
        out.push(SubsetMask::from_sites(&sites, n).map_err(Failure::from)?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct MeasureReport {
    n: usize,
    subsets: Vec<String>,
    measure: f64,
}

fn cmd_measure(cli: &Cli, state: &str, subsets: &str) -> Result<u8, Failure> {
    let resolved = resolve_state(state)?;
    let family = parse_subsets(subsets, resolved.shape.n())?;
    let value = fixed_partition_measure(&resolved.rho, &resolved.shape, &family)?;
    let report = MeasureReport {
        n: resolved.shape.n(),
        subsets: family.iter().map(|m| m.bitstring()).collect(),
        measure: value,
    };
    let text = match cli.format {
        FormatArg::Json => qweight::json::to_canonical_string(&report)?,
        FormatArg::Table => format!(
            "fixed partition measure of {} over {} subsets: {value:.17}\n",
            resolved.origin,
            family.len()
        ),
    };
    emit(cli, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct MonogamyRow {
    t: String,
    weight: usize,
    sum: f64,
}

fn cmd_monogamy(cli: &Cli, state: &str, t: Option<&str>) -> Result<u8, Failure> {
    let resolved = resolve_state(state)?;
    let n = resolved.shape.n();
    let targets: Vec<SubsetMask> = match t {
        Some(spec) => parse_subsets(spec, n)?,
        None => SubsetMask::all(n).filter(|m| !m.is_empty()).collect(),
    };
    let mut rows = Vec::new();
    for t in targets {
        let sum = monogamy_check(&resolved.rho, &resolved.shape, t)?;
        rows.push(MonogamyRow {
            t: t.bitstring(),
            weight: t.weight(),
            sum,
        });
    }
    let text = match cli.format {
        FormatArg::Json => qweight::json::to_canonical_string(&rows)?,
        FormatArg::Table => {
            let mut out = format!("signed concurrence sums for {}\nT  |T|  sum\n", resolved.origin);
            for row in &rows {
                out.push_str(&format!("{}  {}  {:+.6e}\n", row.t, row.weight, row.sum));
            }
            out
        }
    };
    emit(cli, &text)?;
    Ok(0)
}

fn cmd_sample_plan(
    cli: &Cli,
    code: Option<&str>,
    n: Option<usize>,
    k: Option<f64>,
    d: usize,
    j: usize,
    epsilon: f64,
) -> Result<u8, Failure> {
    let (n, k, d) = match code {
        Some(spec) => {
            let resolved = resolve_state(spec)?;
            let d = resolved
                .shape
                .uniform_dim()
                .ok_or_else(|| Failure::input("sample plan needs a uniform local dimension"))?;
            (resolved.shape.n(), effective_code_dim(&resolved), d)
        }
        None => (n.expect("clap enforces"), k.expect("clap enforces"), d),
    };
    let plan = sample_plan(n, k, d, j, epsilon)?;
    let text = match cli.format {
        FormatArg::Json => qweight::json::to_canonical_string(&plan)?,
        FormatArg::Table => format!(
            "n = {}, K = {}, d = {}, j = {}, epsilon = {}\nvariance bound {}\nrecommended shots: {}\n",
            plan.n, plan.code_dim, plan.d, plan.j, plan.epsilon, plan.variance_bound, plan.shots
        ),
    };
    emit(cli, &text)?;
    Ok(0)
}

fn cmd_verify_tables(cli: &Cli) -> Result<u8, Failure> {
    let results = verify::run_all()?;
    let mut text = String::new();
    let mut failures = 0usize;
    for check in &results {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        if !check.passed() {
            failures += 1;
        }
        text.push_str(&format!(
            "{status}  {:<40}  max err {:.3e} (tol {:.0e})\n",
            check.label, check.max_err, check.tol
        ));
    }
    text.push_str(&format!(
        "{} checks, {} failed\n",
        results.len(),
        failures
    ));
    emit(cli, &text)?;
    Ok(if failures == 0 { 0 } else { 4 })
}
