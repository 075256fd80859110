use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use invseq_core::automaton::{dfao_eval, inversion_dfao, morphism_g, morphism_rs};
use invseq_core::digits::{i_direct, r_direct, t_direct};
use invseq_core::emit::{to_json, write_csv};
use invseq_core::recurrence::{i_rec2, i_rec4, GammaSet};
use invseq_core::summatory::{g_sample, ratio_limit_table, s_fast, s_stream, GSample, SumStream, SummatoryPoint};
use invseq_core::verify::{
    exit_code_for, run_suites, Suite, VerificationOutcome, VerifyConfig, EXIT_PASS, EXIT_RESOURCE, EXIT_USAGE,
    EXIT_VERIFICATION_FAILURE,
};
use invseq_core::words::{is_claimed_square_period, scan_palindromes, scan_powers};
use invseq_core::{Error, Sign, MAX_INDEX};

/// Largest N for the linear-time `sum --method stream`.
const STREAM_LIMIT: u64 = 1 << 34;
/// Largest N for `sum --series`.
const SERIES_LIMIT: u64 = 1 << 24;

#[derive(Parser, Debug)]
#[command(
    name = "invseq",
    version,
    about = "The inversion sequence i_n = (-1)^inv2(n) and its summatory function"
)]
struct Cli {
    /// Worker threads for parallel sweeps (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a term of i, t or r.
    Eval {
        n: u64,
        #[arg(long, value_enum, default_value_t = Sequence::I)]
        sequence: Sequence,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        /// Evaluate with every method that supports the sequence and compare.
        #[arg(long)]
        all_methods: bool,
    },
    /// Summatory function S(N) = sum of i_n over 0 <= n <= N.
    Sum {
        n: u64,
        #[arg(long, value_enum, default_value_t = SumMethod::Fast)]
        method: SumMethod,
        /// Print S(0..=N) instead of a single value.
        #[arg(long)]
        series: bool,
        #[arg(long, value_enum, default_value_t = Emit::Plain)]
        emit: Emit,
    },
    /// Run verification suites; exit 0 only if all pass.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
        #[arg(long, default_value_t = 1 << 22)]
        nmax: u64,
        #[arg(long, default_value_t = 1 << 14)]
        prefix_len: usize,
        /// Sampling stride for sweeps beyond 2^24.
        #[arg(long, default_value_t = invseq_core::summatory::DEFAULT_STRIDE)]
        stride: u64,
        #[arg(long, value_enum, default_value_t = Emit::Plain)]
        emit: Emit,
        /// Overwrite one transfer-matrix entry, as R,ROW,COL,VALUE (mutation testing).
        #[arg(long, hide = true, value_parser = parse_gamma_fault)]
        corrupt_gamma: Option<(usize, usize, usize, i64)>,
    },
    /// Samples of G(x) = S(N)/sqrt(N), x = frac(log4 N), over one octave.
    SampleG {
        #[arg(long)]
        octave: u32,
        #[arg(long, default_value_t = 4096)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Extreme ratios S(n)/sqrt(n) over I_k for k = 1..=kmax.
    RatioTable {
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
    },
    /// Scan a prefix of i for repetitions or palindromes.
    Scan {
        #[arg(value_enum)]
        kind: ScanKind,
        #[arg(long, default_value_t = 2)]
        power: usize,
        #[arg(long, default_value_t = 1 << 14)]
        prefix_len: usize,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Sequence {
    I,
    T,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Dfao,
    Morphism,
    Rec2,
    Rec4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SumMethod {
    Fast,
    Stream,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Plain,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScanKind {
    Powers,
    Palindromes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Definitions,
    Fastsum,
    Parity,
    Floor,
    Identities,
    Extrema,
    Jkform,
    Bounds,
    Limits,
    Gsample,
    Words,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        let one = |s: Suite| vec![s];
        match self {
            SuiteArg::All => Suite::ALL.to_vec(),
            SuiteArg::Definitions => one(Suite::Definitions),
            SuiteArg::Fastsum => one(Suite::Fastsum),
            SuiteArg::Parity => one(Suite::Parity),
            SuiteArg::Floor => one(Suite::Floor),
            SuiteArg::Identities => one(Suite::Identities),
            SuiteArg::Extrema => one(Suite::Extrema),
            SuiteArg::Jkform => one(Suite::Jkform),
            SuiteArg::Bounds => one(Suite::Bounds),
            SuiteArg::Limits => one(Suite::Limits),
            SuiteArg::Gsample => one(Suite::Gsample),
            SuiteArg::Words => one(Suite::Words),
        }
    }
}

fn parse_gamma_fault(s: &str) -> Result<(usize, usize, usize, i64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [r, row, col, value] = parts.as_slice() else {
        return Err("expected R,ROW,COL,VALUE".into());
    };
    let idx = |x: &str| x.parse::<usize>().map_err(|e| e.to_string());
    Ok((
        idx(r)?,
        idx(row)?,
        idx(col)?,
        value.parse().map_err(|e: std::num::ParseIntError| e.to_string())?,
    ))
}

/// Failure that ends the command with a specific exit code.
struct Exit {
    code: i32,
    message: String,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Exit {
            code: exit_code_for(&e),
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Self {
        Exit {
            code: EXIT_RESOURCE,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Exit {
    fn from(e: csv::Error) -> Self {
        Exit {
            code: EXIT_RESOURCE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Exit {
    Exit {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn range(message: impl Into<String>) -> Exit {
    Exit {
        code: EXIT_RESOURCE,
        message: message.into(),
    }
}

fn check_n(n: u64) -> Result<u64, Exit> {
    if n > MAX_INDEX {
        Err(range(format!("{n} exceeds the supported maximum 2^62")))
    } else {
        Ok(n)
    }
}

fn evaluate(n: u64, sequence: Sequence, method: Method) -> Option<Sign> {
    use Method::*;
    use Sequence::*;
    Some(match (method, sequence) {
        (Direct, I) => i_direct(n),
        (Direct, T) => t_direct(n),
        (Direct, R) => r_direct(n),
        (Dfao, I) => dfao_eval(&inversion_dfao(), n).1,
        (Dfao, T) => dfao_eval(&inversion_dfao(), n).0,
        (Morphism, I) => morphism_g().coded_at(n).ok()?,
        (Morphism, R) => morphism_rs().coded_at(n).ok()?,
        (Rec2, I) => i_rec2(n),
        (Rec4, I) => i_rec4(n),
        _ => return None,
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Direct => "direct",
        Method::Dfao => "dfao",
        Method::Morphism => "morphism",
        Method::Rec2 => "rec2",
        Method::Rec4 => "rec4",
    }
}

fn cmd_eval(out: &mut impl Write, n: u64, sequence: Sequence, method: Method, all: bool) -> Result<i32, Exit> {
    let n = check_n(n)?;
    if !all {
        let value = evaluate(n, sequence, method).ok_or_else(|| {
            usage(format!(
                "method {} does not support sequence {sequence:?}",
                method_name(method)
            ))
        })?;
        writeln!(out, "{value}")?;
        return Ok(EXIT_PASS);
    }
    let methods = [
        Method::Direct,
        Method::Dfao,
        Method::Morphism,
        Method::Rec2,
        Method::Rec4,
    ];
    let values: Vec<(Method, Sign)> = methods
        .into_iter()
        .filter_map(|m| evaluate(n, sequence, m).map(|v| (m, v)))
        .collect();
    for (m, v) in &values {
        writeln!(out, "{:<9}{v}", method_name(*m))?;
    }
    let consistent = values.windows(2).all(|w| w[0].1 == w[1].1);
    writeln!(out, "{}", if consistent { "consistent" } else { "INCONSISTENT" })?;
    Ok(if consistent {
        EXIT_PASS
    } else {
        EXIT_VERIFICATION_FAILURE
    })
}

fn cmd_sum(out: &mut impl Write, n: u64, method: SumMethod, series: bool, emit: Emit) -> Result<i32, Exit> {
    let n = check_n(n)?;
    if series {
        if n > SERIES_LIMIT {
            return Err(range(format!("series output is limited to N <= {SERIES_LIMIT}")));
        }
        let points: Vec<SummatoryPoint> = s_stream(n).collect();
        match emit {
            Emit::Csv => write_csv(&mut *out, &points)?,
            Emit::Json => writeln!(out, "{}", to_json(&points))?,
            Emit::Plain => {
                for p in points {
                    writeln!(out, "{} {}", p.index, p.value)?;
                }
            }
        }
        return Ok(EXIT_PASS);
    }
    let value = match method {
        SumMethod::Fast => s_fast(n)?,
        SumMethod::Stream => {
            if n > STREAM_LIMIT {
                return Err(range(format!("streaming summation is limited to N <= {STREAM_LIMIT}")));
            }
            SumStream::new()
                .take_while(|p| p.index <= n)
                .last()
                .expect("at least S(0)")
                .value
        }
    };
    let point = SummatoryPoint { index: n, value };
    match emit {
        Emit::Plain => writeln!(out, "{value}")?,
        Emit::Csv => write_csv(&mut *out, &[point])?,
        Emit::Json => writeln!(out, "{}", to_json(&[point]))?,
    }
    Ok(EXIT_PASS)
}

fn print_outcomes(out: &mut impl Write, outcomes: &[VerificationOutcome]) -> io::Result<()> {
    writeln!(out, "{:<12} {:<6} {:>12} {:>10}", "suite", "status", "cases", "ms")?;
    for o in outcomes {
        writeln!(
            out,
            "{:<12} {:<6} {:>12} {:>10.1}",
            o.suite.name(),
            if o.passed() { "pass" } else { "FAIL" },
            o.cases_run,
            o.elapsed.as_secs_f64() * 1e3
        )?;
        for note in &o.notes {
            writeln!(out, "    {note}")?;
        }
        if !o.passed() {
            writeln!(out, "    {} failure(s); first {}:", o.failure_count, o.failures.len())?;
            for f in &o.failures {
                writeln!(out, "    {}: expected {}, got {}", f.input, f.expected, f.actual)?;
            }
        }
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.suite.name())
        .collect();
    if failed.is_empty() {
        writeln!(out, "all {} suite(s) passed", outcomes.len())
    } else {
        writeln!(out, "failed suites: {}", failed.join(", "))
    }
}

fn cmd_verify(out: &mut impl Write, suites: &[Suite], cfg: &VerifyConfig, emit: Emit) -> Result<i32, Exit> {
    let outcomes = run_suites(suites, cfg)?;
    match emit {
        Emit::Json => writeln!(out, "{}", to_json(&outcomes))?,
        Emit::Plain | Emit::Csv => print_outcomes(out, &outcomes)?,
    }
    for o in outcomes.iter().filter(|o| !o.passed()) {
        eprintln!("suite {} failed", o.suite.name());
    }
    Ok(if outcomes.iter().all(VerificationOutcome::passed) {
        EXIT_PASS
    } else {
        EXIT_VERIFICATION_FAILURE
    })
}

fn cmd_sample_g(
    out: &mut impl Write,
    octave: u32,
    count: usize,
    emit: Emit,
    output: Option<PathBuf>,
) -> Result<i32, Exit> {
    let mut samples: Vec<GSample> = g_sample(octave, count)?;
    samples.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut sink: Box<dyn Write> = match output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(&mut *out),
    };
    match emit {
        Emit::Json => writeln!(sink, "{}", to_json(&samples))?,
        Emit::Csv | Emit::Plain => write_csv(&mut sink, &samples)?,
    }
    sink.flush()?;
    let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
        (lo.min(s.y), hi.max(s.y))
    });
    eprintln!("{} samples, y in [{lo:.6}, {hi:.6}]", samples.len());
    Ok(EXIT_PASS)
}

fn cmd_ratio_table(out: &mut impl Write, kmax: u32, emit: Emit) -> Result<i32, Exit> {
    let rows = ratio_limit_table(kmax)?;
    match emit {
        Emit::Json => writeln!(out, "{}", to_json(&rows))?,
        Emit::Csv | Emit::Plain => write_csv(&mut *out, &rows)?,
    }
    Ok(EXIT_PASS)
}

fn cmd_scan(out: &mut impl Write, kind: ScanKind, power: usize, prefix_len: usize, emit: Emit) -> Result<i32, Exit> {
    let (json, ok, plain) = match kind {
        ScanKind::Powers => {
            let rep = scan_powers(power, prefix_len)?;
            let periods = rep.period_set();
            let ok = match power {
                2 => periods.iter().all(|&p| is_claimed_square_period(p)),
                3 => periods.iter().all(|&p| p == 3),
                4 => true,
                _ => periods.is_empty(),
            };
            (
                to_json(&rep),
                ok,
                format!("power {power}, prefix {prefix_len}: periods {periods:?}"),
            )
        }
        ScanKind::Palindromes => {
            let rep = scan_palindromes(prefix_len)?;
            let ok = prefix_len < 2 || rep.max_length >= 2;
            (
                to_json(&rep),
                ok,
                format!(
                    "prefix {prefix_len}: longest palindrome {} ({:?})",
                    rep.max_length, rep.witnesses
                ),
            )
        }
    };
    match emit {
        Emit::Plain => writeln!(out, "{plain}")?,
        Emit::Json | Emit::Csv => writeln!(out, "{json}")?,
    }
    Ok(if ok { EXIT_PASS } else { EXIT_VERIFICATION_FAILURE })
}

fn run(cli: Cli) -> Result<i32, Exit> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| range(e.to_string()))?;
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match cli.command {
        Command::Eval {
            n,
            sequence,
            method,
            all_methods,
        } => cmd_eval(&mut out, n, sequence, method, all_methods)?,
        Command::Sum {
            n,
            method,
            series,
            emit,
        } => cmd_sum(&mut out, n, method, series, emit)?,
        Command::Verify {
            suite,
            kmax,
            nmax,
            prefix_len,
            stride,
            emit,
            corrupt_gamma,
        } => {
            let mut gammas = GammaSet::default();
            if let Some((r, row, col, value)) = corrupt_gamma {
                gammas = gammas
                    .with_entry(r, row, col, value)
                    .map_err(|e| usage(e.to_string()))?;
                eprintln!("warning: Gamma_{r}[{row}][{col}] overwritten with {value}");
            }
            let cfg = VerifyConfig {
                kmax,
                nmax,
                prefix_len,
                stride,
                gammas,
                ..VerifyConfig::default()
            };
            cmd_verify(&mut out, &suite.suites(), &cfg, emit)?
        }
        Command::SampleG {
            octave,
            count,
            emit,
            output,
        } => cmd_sample_g(&mut out, octave, count, emit, output)?,
        Command::RatioTable { kmax, emit } => cmd_ratio_table(&mut out, kmax, emit)?,
        Command::Scan {
            kind,
            power,
            prefix_len,
            emit,
        } => cmd_scan(&mut out, kind, power, prefix_len, emit)?,
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    ExitCode::from(code as u8)
}
