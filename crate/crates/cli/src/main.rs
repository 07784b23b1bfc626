use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use ucp_core::cyclo::{self, Algorithm, Kind};
use ucp_core::kron::{self, Classification, Rho};
use ucp_core::poly::{self, big_to_json, Style};
use ucp_core::scan::{self, SurveyOptions};
use ucp_core::verify::{self, Suite, SuiteReport};
use ucp_core::{Error, IntPoly, Result};

const SCHEMA: u32 = 1;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "ucp", version, about = "Unitary cyclotomic polynomials, Ramanujan sums and coefficient heights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a cyclotomic or unitary cyclotomic polynomial.
    Phi {
        n: u64,
        #[arg(long)]
        unitary: bool,
        #[arg(long, value_enum, requires = "unitary")]
        algorithm: Option<AlgorithmArg>,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate a cyclotomic or unitary cyclotomic polynomial at an integer.
    Eval {
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        at: BigInt,
        #[arg(long)]
        unitary: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Ramanujan sum c_n(k), or the unitary sum with --unitary.
    Ramanujan {
        n: u64,
        k: u64,
        #[arg(long)]
        unitary: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Inclusion-exclusion polynomial of a pairwise coprime set.
    Qpoly {
        /// Comma-separated entries, e.g. 3,4.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        rho: Vec<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Classify a polynomial: unitary cyclotomic, inclusion-exclusion, Kronecker or none.
    Identify {
        /// Expression such as "x^2 - x + 1" or ascending list "[1,-1,1]".
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[command(flatten)]
        out: Output,
    },
    /// Maximum height of unitary cyclotomic polynomials over smooth indices.
    ScanHeights(ScanArgs),
    /// Find n and j with a given coefficient of the unitary polynomial.
    Witness {
        #[arg(long, allow_hyphen_values = true)]
        value: BigInt,
        #[arg(long, default_value_t = 200)]
        nmax: u64,
        #[arg(long)]
        jmax: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Run invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 200)]
        nmax: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    primes: Vec<u64>,
    /// Exclusive bound on n.
    #[arg(long)]
    limit: u64,
    /// Only n divisible by every listed prime.
    #[arg(long)]
    require_all_primes: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "UCP_THREADS", default_value_t = 0)]
    threads: usize,
    /// Bytes per polynomial; accepts K, M and G suffixes.
    #[arg(long, value_parser = parse_bytes)]
    memory_budget: Option<u64>,
    /// Record file for resuming an interrupted scan.
    #[arg(long)]
    progress: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    MobiusProduct,
    CycloFactors,
    KernelReduction,
    QuotientTower,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::MobiusProduct => Algorithm::MobiusProduct,
            AlgorithmArg::CycloFactors => Algorithm::CycloFactors,
            AlgorithmArg::KernelReduction => Algorithm::KernelReduction,
            AlgorithmArg::QuotientTower => Algorithm::QuotientTower,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Identities,
    Trig,
    Dft,
    Series,
    Kron,
    Heights,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::All => Suite::ALL.to_vec(),
            SuiteArg::Identities => vec![Suite::Identities],
            SuiteArg::Trig => vec![Suite::Trig],
            SuiteArg::Dft => vec![Suite::Dft],
            SuiteArg::Series => vec![Suite::Series],
            SuiteArg::Kron => vec![Suite::Kron],
            SuiteArg::Heights => vec![Suite::Heights],
        }
    }
}

fn parse_bytes(s: &str) -> std::result::Result<u64, String> {
    let (digits, scale) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1u64 << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    digits
        .parse::<u64>()
        .ok()
        .and_then(|v| v.checked_mul(scale))
        .ok_or_else(|| format!("`{s}` is not a byte count"))
}

fn kind_of(unitary: bool) -> Kind {
    if unitary {
        Kind::Unitary
    } else {
        Kind::Classical
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Unitary => "unitary",
        Kind::Classical => "classical",
    }
}

fn emit(out: &mut impl Write, format: Format, json: &impl Serialize, text: impl FnOnce() -> String) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, json)?;
            writeln!(out)
        }
        Format::Text => writeln!(out, "{}", text()),
    }
}

#[derive(Serialize)]
struct PolyOut<'a> {
    schema: u32,
    n: u64,
    kind: &'static str,
    degree: usize,
    coeffs_ascending: Vec<serde_json::Number>,
    #[serde(skip)]
    poly: &'a IntPoly,
}

#[derive(Serialize)]
struct EvalOut {
    schema: u32,
    n: u64,
    kind: &'static str,
    at: serde_json::Number,
    value: serde_json::Number,
}

#[derive(Serialize)]
struct RamanujanOut {
    schema: u32,
    n: u64,
    k: u64,
    kind: &'static str,
    value: i128,
}

#[derive(Serialize)]
struct QpolyOut<'a> {
    schema: u32,
    rho: &'a Rho,
    n0: u64,
    degree: usize,
    coeffs_ascending: Vec<serde_json::Number>,
}

#[derive(Serialize)]
struct IdentifyOut<'a> {
    schema: u32,
    #[serde(flatten)]
    classification: &'a Classification,
}

#[derive(Serialize)]
struct HeightRow {
    n: u64,
    height: serde_json::Number,
}

#[derive(Serialize)]
struct SurveyOut {
    schema: u32,
    max_height: serde_json::Number,
    argmax_n: u64,
    count: usize,
    limit: u64,
    primes: Vec<u64>,
    require_all_primes: bool,
    table: Vec<HeightRow>,
}

#[derive(Serialize)]
struct WitnessOut {
    schema: u32,
    value: serde_json::Number,
    nmax: u64,
    jmax: Option<u64>,
    found: bool,
    n: Option<u64>,
    j: Option<u64>,
}

#[derive(Serialize)]
struct VerifyOut<'a> {
    schema: u32,
    passed: bool,
    suites: &'a [SuiteReport],
}

fn coeffs_json(p: &IntPoly) -> Vec<serde_json::Number> {
    p.coeffs().iter().map(big_to_json).collect()
}

/// Runs one command; the boolean reports whether verification passed.
fn run(cli: Cli, out: &mut impl Write) -> Result<bool> {
    let io_err = |e: io::Error| Error::Internal(format!("writing output: {e}"));
    match cli.command {
        Command::Phi { n, unitary, algorithm, out: o } => {
            let kind = kind_of(unitary);
            let p = match (kind, algorithm) {
                (Kind::Unitary, Some(a)) => cyclo::unitary_cyclotomic_with(n, a.into())?,
                (Kind::Unitary, None) => cyclo::unitary_cyclotomic(n)?,
                (Kind::Classical, _) => cyclo::cyclotomic(n)?,
            };
            let json = PolyOut {
                schema: SCHEMA,
                n,
                kind: kind_name(kind),
                degree: p.degree().unwrap_or(0),
                coeffs_ascending: coeffs_json(&p),
                poly: &p,
            };
            emit(out, o.format, &json, || poly::format(json.poly, Style::Expr)).map_err(io_err)?;
        }
        Command::Eval { n, at, unitary, out: o } => {
            let kind = kind_of(unitary);
            let p = match kind {
                Kind::Unitary => cyclo::unitary_cyclotomic(n)?,
                Kind::Classical => cyclo::cyclotomic(n)?,
            };
            let value = p.eval_int(&at);
            let json = EvalOut {
                schema: SCHEMA,
                n,
                kind: kind_name(kind),
                at: big_to_json(&at),
                value: big_to_json(&value),
            };
            emit(out, o.format, &json, || value.to_string()).map_err(io_err)?;
        }
        Command::Ramanujan { n, k, unitary, out: o } => {
            let value = if unitary {
                ucp_core::rama::unitary_ramanujan(n, k)?
            } else {
                ucp_core::rama::ramanujan(n, k)?
            };
            let json = RamanujanOut {
                schema: SCHEMA,
                n,
                k,
                kind: kind_name(kind_of(unitary)),
                value,
            };
            emit(out, o.format, &json, || value.to_string()).map_err(io_err)?;
        }
        Command::Qpoly { rho, out: o } => {
            let rho = Rho::new(rho)?;
            let p = kron::q_poly(&rho)?;
            let json = QpolyOut {
                schema: SCHEMA,
                rho: &rho,
                n0: rho.product(),
                degree: p.degree().unwrap_or(0),
                coeffs_ascending: coeffs_json(&p),
            };
            emit(out, o.format, &json, || poly::format(&p, Style::Expr)).map_err(io_err)?;
        }
        Command::Identify { poly: text, out: o } => {
            let p = poly::parse(&text)?;
            let c = kron::classify(&p)?;
            let json = IdentifyOut {
                schema: SCHEMA,
                classification: &c,
            };
            emit(out, o.format, &json, || identify_text(&c)).map_err(io_err)?;
        }
        Command::ScanHeights(args) => scan_heights(args, out)?,
        Command::Witness { value, nmax, jmax, out: o } => {
            let hit = scan::witness_search(&value, nmax, jmax)?;
            let json = WitnessOut {
                schema: SCHEMA,
                value: big_to_json(&value),
                nmax,
                jmax,
                found: hit.is_some(),
                n: hit.map(|h| h.0),
                j: hit.map(|h| h.1),
            };
            emit(out, o.format, &json, || match hit {
                Some((n, j)) => format!("n = {n}, j = {j}"),
                None => format!("none with n <= {nmax}"),
            })
            .map_err(io_err)?;
        }
        Command::Verify { suite, nmax, out: o } => {
            let reports = verify::run_suites(&suite.suites(), nmax)?;
            let passed = reports.iter().all(SuiteReport::passed);
            let json = VerifyOut {
                schema: SCHEMA,
                passed,
                suites: &reports,
            };
            emit(out, o.format, &json, || verify_text(&reports)).map_err(io_err)?;
            return Ok(passed);
        }
    }
    Ok(true)
}

fn identify_text(c: &Classification) -> String {
    let mut lines = vec![format!("tier: {}", c.tier.as_str())];
    if let Some(n) = c.n {
        lines.push(format!("n: {n}"));
    }
    if let Some(rho) = &c.rho {
        let entries: Vec<String> = rho.entries().iter().map(u64::to_string).collect();
        lines.push(format!("rho: {}", entries.join(",")));
    }
    if let Some(factors) = &c.cyclotomic_factors {
        let parts: Vec<String> = factors
            .iter()
            .map(|(m, e)| if *e == 1 { format!("Phi_{m}") } else { format!("Phi_{m}^{e}") })
            .collect();
        lines.push(format!("cyclotomic factors: {}", parts.join(" ")));
    }
    lines.join("\n")
}

fn verify_text(reports: &[SuiteReport]) -> String {
    let mut lines = Vec::new();
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        lines.push(format!("{status} {} ({} checks, {} failed)", r.suite, r.checks, r.failed));
        for f in &r.failures {
            lines.push(format!("  {f}"));
        }
    }
    lines.join("\n")
}

fn scan_heights(args: ScanArgs, out: &mut impl Write) -> Result<()> {
    let io_err = |e: io::Error| Error::Internal(format!("writing output: {e}"));
    let mut opts = SurveyOptions::new(args.primes.clone(), args.limit, args.require_all_primes);
    opts.threads = args.threads;
    if let Some(b) = args.memory_budget {
        opts.memory_budget = b;
    }
    opts.progress = args.progress;
    let s = scan::max_height_smooth(&opts)?;
    match args.out.format {
        Format::Text => {
            for (n, h) in &s.table {
                writeln!(out, "{n}\t{h}").map_err(io_err)?;
            }
            writeln!(
                out,
                "max height {} at n = {} over {} values below {}",
                s.max_height, s.argmax_n, s.count, s.limit
            )
            .map_err(io_err)?;
        }
        Format::Json => {
            let json = SurveyOut {
                schema: SCHEMA,
                max_height: big_to_json(&s.max_height),
                argmax_n: s.argmax_n,
                count: s.count,
                limit: s.limit,
                primes: args.primes,
                require_all_primes: args.require_all_primes,
                table: s
                    .table
                    .iter()
                    .map(|(n, h)| HeightRow {
                        n: *n,
                        height: big_to_json(h),
                    })
                    .collect(),
            };
            serde_json::to_writer(&mut *out, &json).map_err(|e| io_err(e.into()))?;
            writeln!(out).map_err(io_err)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e @ Error::Verification { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
