mod sequence_file;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bangcf::analysis::{self, compare, emit_csv, emit_svg, ordering_check, AnalysisError};
use bangcf::cf_core::{convergents, convergents_from_terms, CfError, Family, GcfTerm};
use bangcf::derangement::{quadrature_relative_error, subfactorial_integral, subfactorial_rec1, DerangementError, Method};
use bangcf::format::decimal;
use bangcf::scan::{emit_hits_csv, run_scan, ScanError, ScanGrid};
use bangcf::{invert, InvertError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

#[derive(Parser)]
#[command(name = "bangcf", version, about = "Exact continued fractions, subfactorials and expansions of e")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print !n.
    Subfactorial {
        n: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Rec1)]
        method: MethodArg,
    },
    /// Print convergents p_n, q_n for n = 0..=N.
    Convergents(ConvergentsArgs),
    /// Recover partial numerators and denominators from convergent files.
    Invert { p_file: PathBuf, q_file: PathBuf },
    /// Error of several expansions of e, as CSV and SVG.
    ErrorTable {
        /// Comma-separated subset of power-ratio, euler, derangement-elegant.
        #[arg(long, value_delimiter = ',', default_values_t = analysis::FIG1_FAMILIES)]
        families: Vec<Family>,
        #[arg(long = "n")]
        n_max: usize,
        /// Starting precision of the reference constant.
        #[arg(long, default_value_t = analysis::START_DIGITS)]
        digits: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Search affine rules with coefficients in -L..=L for known constants.
    Scan {
        #[arg(long = "L")]
        bound: u32,
        #[arg(long, default_value_t = 200)]
        depth: usize,
        /// Agreement required, in decimal digits.
        #[arg(long, default_value_t = 20)]
        digits: u32,
        /// Hit list as CSV; without it hits are printed as text.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gauss-Laguerre estimate of !n.
    Quadrature {
        n: u32,
        #[arg(long)]
        nodes: usize,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["family", "terms_file"]))]
struct ConvergentsArgs {
    #[arg(long)]
    family: Option<Family>,
    /// Two sequence files holding a_1, a_2, ... and b_1, b_2, ...
    #[arg(long, num_args = 2, value_names = ["A_FILE", "B_FILE"], requires = "b0")]
    terms_file: Option<Vec<PathBuf>>,
    #[arg(long, allow_hyphen_values = true)]
    b0: Option<BigInt>,
    #[arg(long = "n")]
    n_max: usize,
    /// Also print the reduced value and a decimal rendering.
    #[arg(long)]
    values: bool,
    /// Decimal places for --values.
    #[arg(long, default_value_t = 20)]
    digits: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Rec1,
    Rec2,
    Sum,
    Nearest,
    All,
}

/// Failure with its exit status.
enum Failure {
    Usage(String),
    Degenerate(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Degenerate(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Degenerate(m) | Failure::Io(m) => m,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<CfError> for Failure {
    fn from(e: CfError) -> Self {
        match e {
            CfError::ZeroPartialNumerator(_) | CfError::DegenerateFamily(_) | CfError::UndefinedConvergent(_) => {
                Failure::Degenerate(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<DerangementError> for Failure {
    fn from(e: DerangementError) -> Self {
        match e {
            DerangementError::NonIntegralResult(_) | DerangementError::QuadratureFailed(_) => Failure::Degenerate(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Io(_) => Failure::Io(e.to_string()),
            AnalysisError::PrecisionExhausted { .. } => Failure::Degenerate(e.to_string()),
            AnalysisError::Terms(inner) => inner.into(),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_sequence(path: &Path) -> Result<Vec<BigInt>, Failure> {
    sequence_file::read(path).map_err(|e| match e {
        sequence_file::SequenceError::Io(_) => Failure::Io(format!("{}: {e}", path.display())),
        sequence_file::SequenceError::Parse { .. } => Failure::Usage(format!("{}: {e}", path.display())),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn subfactorial(out: &mut impl Write, n: u32, method: MethodArg) -> Result<(), Failure> {
    let single = match method {
        MethodArg::Rec1 => Some(Method::Rec1),
        MethodArg::Rec2 => Some(Method::Rec2),
        MethodArg::Sum => Some(Method::Sum),
        MethodArg::Nearest => Some(Method::Nearest),
        MethodArg::All => None,
    };
    if let Some(m) = single {
        writeln!(out, "{}", m.compute(n)?)?;
        return Ok(());
    }
    let mut values = Vec::with_capacity(Method::ALL.len());
    for m in Method::ALL {
        let v = m.compute(n)?;
        writeln!(out, "{} {v}", m.name())?;
        values.push(v);
    }
    if values.windows(2).all(|w| w[0] == w[1]) {
        writeln!(out, "AGREE")?;
        Ok(())
    } else {
        writeln!(out, "DISAGREE")?;
        Err(Failure::Degenerate(format!("methods disagree on !{n}")))
    }
}

fn convergents_cmd(out: &mut impl Write, args: ConvergentsArgs) -> Result<(), Failure> {
    let rows = match (args.family, args.terms_file) {
        (Some(fam), _) => convergents(&bangcf::GcfSpec::family(fam), args.n_max)?,
        (None, Some(files)) => {
            let a = read_sequence(&files[0])?;
            let b = read_sequence(&files[1])?;
            let available = a.len().min(b.len());
            if available < args.n_max {
                return Err(CfError::InsufficientTerms {
                    available,
                    requested: args.n_max,
                }
                .into());
            }
            let ts: Vec<GcfTerm> = a
                .into_iter()
                .zip(b)
                .take(args.n_max)
                .enumerate()
                .map(|(i, (a, b))| GcfTerm::new(i as u64 + 1, a, b))
                .collect();
            if let Some(t) = ts.iter().find(|t| t.a == BigInt::ZERO) {
                return Err(CfError::ZeroPartialNumerator(t.index).into());
            }
            convergents_from_terms(&args.b0.expect("required by clap"), &ts)
        }
        (None, None) => unreachable!("clap enforces a source"),
    };
    for c in rows {
        write!(out, "{} {} {}", c.index, c.p, c.q)?;
        if args.values {
            match c.value() {
                Ok(r) => write!(out, " {r} {}", decimal(&r, args.digits))?,
                Err(_) => write!(out, " undefined")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

fn invert_cmd(out: &mut impl Write, p_file: &Path, q_file: &Path) -> Result<(), Failure> {
    let p = read_sequence(p_file)?;
    let q = read_sequence(q_file)?;
    let res = invert(&p, &q).map_err(|e| match e {
        InvertError::DegenerateAt(_) => Failure::Degenerate(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    })?;
    writeln!(out, "b0 {}", res.b0)?;
    writeln!(out, "a1 {}", res.a1)?;
    writeln!(out, "b1 {}", res.b1)?;
    for (raw, t) in res.tail.iter().zip(res.integer_form().into_iter().skip(1)) {
        write!(out, "{} {} {}", t.index, t.a, t.b)?;
        if !raw.integral {
            write!(out, " nonintegral")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn error_table(
    out: &mut impl Write,
    families: &[Family],
    n_max: usize,
    digits: u32,
    csv: Option<&Path>,
    svg: Option<&Path>,
) -> Result<(), Failure> {
    if let Some(f) = families.iter().find(|f| !analysis::FIG1_FAMILIES.contains(f)) {
        return Err(Failure::Usage(format!("family {f} is not part of the error table")));
    }
    if n_max < 3 {
        return Err(Failure::Usage(format!("--n must be at least 3, got {n_max}")));
    }
    let mut fams = families.to_vec();
    fams.sort();
    fams.dedup();
    let table = compare(&fams, n_max, digits)?;
    if let Some(path) = csv {
        emit_csv(&table, create(path)?)?;
    }
    if let Some(path) = svg {
        emit_svg(&table, create(path)?)?;
    }
    writeln!(out, "rows: {}", table.records.len())?;
    writeln!(out, "{}", ordering_check(&table, 3))?;
    Ok(())
}

fn scan(out: &mut impl Write, grid: ScanGrid, path: Option<&Path>) -> Result<(), Failure> {
    grid.validate()?;
    writeln!(out, "cells: {}", grid.cell_count())?;
    let hits = run_scan(&grid)?;
    match path {
        Some(path) => emit_hits_csv(&hits, create(path)?)?,
        None => {
            for h in &hits {
                let r = &h.rule;
                writeln!(
                    out,
                    "{} {} {} {} {} {} {}",
                    r.b0,
                    r.alpha,
                    r.beta,
                    r.gamma,
                    r.delta,
                    h.constant,
                    bangcf::format::sig9(h.residual_log10)
                )?;
            }
        }
    }
    let stable = hits.iter().filter(|h| h.stability).count();
    if stable == hits.len() {
        writeln!(out, "hits: {} (stable)", hits.len())?;
    } else {
        writeln!(out, "hits: {} ({stable} stable)", hits.len())?;
    }
    Ok(())
}

fn quadrature(out: &mut impl Write, n: u32, nodes: usize) -> Result<(), Failure> {
    let estimate = subfactorial_integral(n, nodes)?;
    writeln!(out, "estimate {}", bangcf::format::significant(estimate, 15))?;
    writeln!(out, "exact {}", subfactorial_rec1(n))?;
    writeln!(out, "relative_error {:.3e}", quadrature_relative_error(n, estimate))?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Subfactorial { n, method } => subfactorial(&mut out, n, method),
        Command::Convergents(args) => convergents_cmd(&mut out, args),
        Command::Invert { p_file, q_file } => invert_cmd(&mut out, &p_file, &q_file),
        Command::ErrorTable {
            families,
            n_max,
            digits,
            csv,
            svg,
        } => error_table(&mut out, &families, n_max, digits, csv.as_deref(), svg.as_deref()),
        Command::Scan {
            bound,
            depth,
            digits,
            out: path,
        } => scan(
            &mut out,
            ScanGrid {
                bound,
                depth,
                match_digits: digits,
            },
            path.as_deref(),
        ),
        Command::Quadrature { n, nodes } => quadrature(&mut out, n, nodes),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
