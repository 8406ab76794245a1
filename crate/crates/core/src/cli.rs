//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! parameter errors (with a message on stderr).

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::canonical::{
    jordan_blocks_unipotent_mod_p, min_poly_exponent_mod_p, predicted_pascal_jordan_mod_p, smith_normal_form,
};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, MatrixFormat};
use crate::pascal::{
    bidiagonal_target, d_matrix, f_matrix, g_matrix, generalized_pascal, h_matrix, pascal, stirling_matrix, SeqSpec,
    StirlingKind,
};
use crate::verify::{
    combinatorial_sides, enumerate_colored_cycle_partitions, explore_open_question, identity_suite, verify_closed_form,
    verify_combinatorial, verify_convolution, verify_identity, verify_theorem2, CheckReport, Identity,
};

#[derive(Debug, Parser)]
#[command(
    name = "pascal-canon",
    version,
    about = "Pascal and Stirling matrices: constructions, Smith and Jordan forms, identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a matrix from one of the families
    Gen(GenArgs),
    /// Smith normal form of a family member
    Snf(SnfArgs),
    /// Jordan blocks of a unipotent family member mod p
    Jordan(JordanArgs),
    /// Run identity and closed-form checks
    Verify(VerifyArgs),
    /// Colored cycle counting: two sums against brute-force enumeration
    Oracle(OracleArgs),
    /// Compare SNF(Q_n(c)) with SNF of its diagonal for a Stirling column c
    Explore(ExploreArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Pascal,
    StirlingPartition,
    StirlingCycle,
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "H", alias = "h")]
    H,
    #[value(name = "D", alias = "d")]
    D,
    Bidiagonal,
    PascalMinusIPower,
    Generalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Csv,
    Text,
}

impl From<Format> for MatrixFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => MatrixFormat::Csv,
            Format::Text => MatrixFormat::Text,
        }
    }
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Shift / exponent for F, G, H, D and pascal-minus-i-power
    #[arg(long)]
    r: Option<usize>,
    /// Sequence for `generalized`: sets, stirling-partition:R, stirling-cycle:R, surjections:R, or 0,1,1,...
    #[arg(long)]
    seq: Option<String>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Debug, Args)]
struct SnfArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Also print U and V with U*A*V = diag, then re-check them
    #[arg(long)]
    certify: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Debug, Args)]
struct JordanArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "mod")]
    p: u64,
    #[arg(long, value_enum, default_value = "pascal")]
    family: Family,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    seq: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    All,
    Eigenvectors,
    ClosedForm,
    Convolution,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    identity: Check,
    /// Check a single dimension
    #[arg(long, conflicts_with = "n_max")]
    n: Option<usize>,
    /// Check every dimension 1..=N (default 12)
    #[arg(long)]
    n_max: Option<usize>,
    /// Restrict identities 3, 4 and closed-form to one r
    #[arg(long)]
    r: Option<usize>,
    /// First sequence for `convolution`
    #[arg(long)]
    seq: Option<String>,
    /// Second sequence for `convolution`
    #[arg(long)]
    seq2: Option<String>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExploreKind {
    StirlingCycle,
    StirlingPartition,
}

#[derive(Debug, Args)]
struct ExploreArgs {
    #[arg(long, value_enum, default_value = "stirling-cycle")]
    kind: ExploreKind,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    n_max: usize,
}

fn need_r(r: Option<usize>, family: &str) -> Result<usize> {
    r.ok_or_else(|| Error::OutOfRange(format!("--r is required for family {family}")))
}

fn build_family(family: Family, n: usize, r: Option<usize>, seq: Option<&str>) -> Result<IntMatrix> {
    match family {
        Family::Pascal => pascal(n),
        Family::StirlingPartition => stirling_matrix(StirlingKind::Partition, n),
        Family::StirlingCycle => stirling_matrix(StirlingKind::Cycle, n),
        Family::F => f_matrix(n, need_r(r, "F")?),
        Family::G => g_matrix(n, need_r(r, "G")?),
        Family::H => h_matrix(n, need_r(r, "H")?),
        Family::D => d_matrix(n, need_r(r, "D")?),
        Family::Bidiagonal => bidiagonal_target(n),
        Family::PascalMinusIPower => {
            let r = need_r(r, "pascal-minus-i-power")?;
            Ok(pascal(n)?.minus_identity().power(r as u32))
        }
        Family::Generalized => {
            let spec: SeqSpec =
                seq.ok_or_else(|| Error::OutOfRange("--seq is required for family generalized".into()))?.parse()?;
            generalized_pascal(&spec.materialize(n), n)
        }
    }
}

enum Outcome {
    Ok,
    Failed,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(CliError::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

enum CliError {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = std::result::Result<Outcome, CliError>;

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Gen(a) => run_gen(a, out),
        Command::Snf(a) => run_snf(a, out),
        Command::Jordan(a) => run_jordan(a, out),
        Command::Verify(a) => run_verify(a, out),
        Command::Oracle(a) => run_oracle(a, out),
        Command::Explore(a) => run_explore(a, out),
    }
}

fn run_gen(a: GenArgs, out: &mut dyn Write) -> CliResult {
    let f = &a.family;
    let m = build_family(f.family, f.n, f.r, f.seq.as_deref())?;
    out.write_all(MatrixFormat::from(a.format).render(&m).as_bytes())?;
    Ok(Outcome::Ok)
}

fn run_snf(a: SnfArgs, out: &mut dyn Write) -> CliResult {
    let f = &a.family;
    let m = build_family(f.family, f.n, f.r, f.seq.as_deref())?;
    let snf = smith_normal_form(&m, a.certify);
    out.write_all(snf.to_certificate(a.format.into()).as_bytes())?;
    if a.certify {
        let ok = snf.verify_certificate(&m);
        writeln!(out, "verified: {ok}")?;
        if !ok {
            return Ok(Outcome::Failed);
        }
    }
    Ok(Outcome::Ok)
}

fn run_jordan(a: JordanArgs, out: &mut dyn Write) -> CliResult {
    let m = build_family(a.family, a.n, a.r, a.seq.as_deref())?.reduce_mod(a.p)?;
    let spec = jordan_blocks_unipotent_mod_p(&m)?;
    writeln!(out, "blocks: {spec}")?;
    if a.family != Family::Pascal {
        return Ok(Outcome::Ok);
    }
    let predicted = predicted_pascal_jordan_mod_p(a.n, a.p)?;
    let exponent = min_poly_exponent_mod_p(a.n, a.p)?;
    let matches = predicted == spec && exponent == spec.largest_block();
    writeln!(out, "predicted: {predicted}")?;
    writeln!(out, "min-poly-exponent: {exponent}")?;
    writeln!(out, "matches: {matches}")?;
    Ok(if matches { Outcome::Ok } else { Outcome::Failed })
}

fn emit(reports: &[CheckReport], out: &mut dyn Write) -> CliResult {
    for r in reports {
        writeln!(out, "{r}")?;
    }
    Ok(if reports.iter().all(|r| r.passed) { Outcome::Ok } else { Outcome::Failed })
}

fn run_verify(a: VerifyArgs, out: &mut dyn Write) -> CliResult {
    let dims: Vec<usize> = match (a.n, a.n_max) {
        (Some(n), _) => vec![n],
        (None, Some(max)) => (1..=max).collect(),
        (None, None) => (1..=12).collect(),
    };
    let ids: Vec<Identity> = match a.identity {
        Check::One => vec![Identity::PascalBidiagonal],
        Check::Two => vec![Identity::CycleDiagonalization],
        Check::Three => vec![Identity::PowerConjugation],
        Check::Four => vec![Identity::BandedInverse],
        Check::All => Identity::ALL.to_vec(),
        Check::Eigenvectors => {
            let reports = dims.iter().map(|&n| verify_theorem2(n)).collect::<Result<Vec<_>>>()?;
            return emit(&reports, out);
        }
        Check::ClosedForm => {
            let mut reports = Vec::new();
            for &n in &dims {
                match a.r {
                    Some(r) => reports.push(verify_closed_form(n, r)?),
                    None => {
                        for r in 0..=n {
                            reports.push(verify_closed_form(n, r)?);
                        }
                    }
                }
            }
            return emit(&reports, out);
        }
        Check::Convolution => {
            let (Some(c), Some(d)) = (a.seq.as_deref(), a.seq2.as_deref()) else {
                return Err(Error::OutOfRange("convolution needs --seq and --seq2".into()).into());
            };
            let (c, d): (SeqSpec, SeqSpec) = (c.parse()?, d.parse()?);
            let reports = dims
                .iter()
                .map(|&n| verify_convolution(&c.materialize(n), &d.materialize(n), n))
                .collect::<Result<Vec<_>>>()?;
            return emit(&reports, out);
        }
    };

    let reports = match (a.n, a.r) {
        (None, None) => identity_suite(&ids, *dims.last().unwrap_or(&0))?,
        _ => {
            let mut reports = Vec::new();
            for &id in &ids {
                for &n in &dims {
                    if !id.uses_shift() {
                        reports.push(verify_identity(id, n, None)?);
                    } else if let Some(r) = a.r {
                        if r < n {
                            reports.push(verify_identity(id, n, Some(r))?);
                        }
                    } else {
                        for r in 1..n {
                            reports.push(verify_identity(id, n, Some(r))?);
                        }
                    }
                }
            }
            reports
        }
    };
    emit(&reports, out)
}

fn run_oracle(a: OracleArgs, out: &mut dyn Write) -> CliResult {
    let (left, right) = combinatorial_sides(a.n, a.m, a.r)?;
    let counted = enumerate_colored_cycle_partitions(a.n, a.m, a.r)?;
    writeln!(out, "left: {left}")?;
    writeln!(out, "right: {right}")?;
    writeln!(out, "enumerated: {counted}")?;
    emit(&[verify_combinatorial(a.n, a.m, a.r)?], out)
}

fn run_explore(a: ExploreArgs, out: &mut dyn Write) -> CliResult {
    let kind = match a.kind {
        ExploreKind::StirlingCycle => StirlingKind::Cycle,
        ExploreKind::StirlingPartition => StirlingKind::Partition,
    };
    let reports = explore_open_question(kind, a.r, a.n_max)?;
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let agree = reports.iter().filter(|r| r.passed).count();
    writeln!(out, "agreements: {agree}/{}", reports.len())?;
    // Findings are informational.
    Ok(Outcome::Ok)
}
