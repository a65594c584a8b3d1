//! `lpp`: construct permutation group polynomials, their companions and
//! Latin squares, and check the counting formulas against brute force.
//!
//! Exit status: 0 on success (or a positive verdict), 1 on a negative verdict
//! or oracle mismatch, 2 on usage errors, 3 when a guard or budget refuses
//! the work or no closed form applies.

mod formats;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lpp_core::enumerate::{count_report, EnumerateError, Family, DEFAULT_GUARD};
use lpp_core::ffield::FieldParams;
use lpp_core::groups::{KlenianParams, OrderedGroup, T31Params};
use lpp_core::lpp::{
    are_orthogonal, companion_h, companion_tuple, latin_defect, mate_search, tuple_to_square, LatinSquare, LppError,
    PermTuple, DEFAULT_MATE_BUDGET,
};
use lpp_core::poly::interpolate_bivariate;
use serde::Serialize;

use formats::{parse_grids, render_square, to_json_line, Format};

#[derive(Parser, Debug)]
#[command(name = "lpp", version, about = "Permutation group polynomials, companions and Latin squares over F_q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a group and write its Latin square
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the ordered group as JSON to this file
        #[arg(long)]
        group_out: Option<PathBuf>,
    },
    /// Write the square together with an orthogonal companion square
    Companion {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Search for an orthogonal mate when no closed form applies
        #[arg(long)]
        mate_search: bool,
        /// Step budget for the mate search
        #[arg(long, default_value_t = DEFAULT_MATE_BUDGET)]
        budget: u64,
    },
    /// Recover the bivariate polynomial of a square
    Interpolate {
        #[arg(long)]
        square: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
    },
    /// Closed-form count of polynomials for a family, as a JSON report
    Count {
        #[command(flatten)]
        family: FamilyArgs,
        /// Confirm the count by scanning the symmetric group
        #[arg(long)]
        verify_oracle: bool,
        /// Largest q for which the symmetric group may be scanned
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
    },
    /// Number of permutation group polynomials equivalent to the family's
    Equivalents {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
    },
    /// Check that a square is Latin, or that two squares are orthogonal
    Verify {
        #[arg(long)]
        square: PathBuf,
        #[arg(long)]
        square2: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    T31,
    Klenian,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    n: u32,
    /// Order exponent of the first generator (t31 only)
    #[arg(long)]
    delta: Option<u32>,
    /// Block exponent (klenian only)
    #[arg(long)]
    e: Option<u32>,
}

enum Failure {
    /// A well-formed request whose answer is "no".
    Negative(String),
    Usage(String),
    Refused(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Negative(m) => (1, m),
            Failure::Usage(m) => (2, m),
            Failure::Refused(m) => (3, m),
        };
        eprintln!("lpp: {msg}");
        ExitCode::from(code)
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn from_enumerate(e: EnumerateError) -> Failure {
    match e {
        EnumerateError::GuardExceeded { q, guard } => Failure::Refused(format!(
            "brute force over S_{q} is refused by the guard q <= {guard}; rerun with --guard {q} to allow it"
        )),
        EnumerateError::InternalInconsistency(m) => Failure::Negative(m),
        other => usage(other),
    }
}

impl FamilyArgs {
    fn resolve(&self) -> Result<Family, Failure> {
        match self.family {
            FamilyName::T31 => {
                if self.e.is_some() {
                    return Err(usage("--e applies to the klenian family; use --delta for t31"));
                }
                let delta = self.delta.ok_or_else(|| usage("the t31 family needs --delta 1 or --delta 2"))?;
                Ok(Family::T31(T31Params::new(self.p, self.n, delta).map_err(usage)?))
            }
            FamilyName::Klenian => {
                if self.delta.is_some() {
                    return Err(usage("--delta applies to the t31 family; use --e for klenian"));
                }
                let e = self.e.ok_or_else(|| usage("the klenian family needs --e"))?;
                Ok(Family::Klenian(KlenianParams::new(self.p, self.n, e).map_err(usage)?))
            }
        }
    }
}

fn emit(text: &str) -> Outcome {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(usage)
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn family_square(family: &Family) -> Result<(OrderedGroup, PermTuple), Failure> {
    let g = family.group().map_err(from_enumerate)?;
    let tuple = PermTuple::from_group(&g).map_err(usage)?;
    Ok((g, tuple))
}

fn construct(family: &Family, format: Format, group_out: Option<&PathBuf>) -> Outcome {
    let (g, tuple) = family_square(family)?;
    if let Some(path) = group_out {
        fs::write(path, to_json_line(&g)).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    emit(&render_square(&tuple_to_square(&tuple), format))
}

#[derive(Serialize)]
struct PairOut<'a> {
    q: usize,
    first: &'a LatinSquare,
    second: &'a LatinSquare,
    orthogonal: bool,
    method: &'a str,
}

fn render_pair(pair: &PairOut, format: Format) -> String {
    if format == Format::Json {
        return to_json_line(pair);
    }
    format!(
        "# first\n{}\n# second\n{}# orthogonal: {} (method: {})\n",
        render_square(pair.first, format),
        render_square(pair.second, format),
        pair.orthogonal,
        pair.method
    )
}

fn companion(family: &Family, format: Format, allow_search: bool, budget: u64) -> Outcome {
    let (_, tuple) = family_square(family)?;
    let first = tuple_to_square(&tuple);
    let closed = match family {
        Family::T31(params) => match companion_h(params) {
            Ok(h) => Ok(h),
            Err(LppError::UnsupportedCase(n)) => Err(format!(
                "no closed-form companion for p = 2, delta = 2 with n = {n}: the construction needs n >= 5"
            )),
            Err(e) => return Err(usage(e)),
        },
        Family::Klenian(_) => Err("no closed-form companion is implemented for the klenian family".to_string()),
    };
    let (second, method) = match closed {
        Ok(h) => {
            let comp = companion_tuple(&tuple, &h).map_err(|e| Failure::Negative(e.to_string()))?;
            (tuple_to_square(&comp), "closed-form")
        }
        Err(why) if !allow_search => {
            return Err(Failure::Refused(format!("{why}; rerun with --mate-search to search for an orthogonal mate")));
        }
        Err(why) => {
            eprintln!("lpp: {why}; falling back to mate search (budget {budget} steps)");
            match mate_search(&first, budget) {
                Ok(Some(mate)) => (mate, "mate-search"),
                Ok(None) => {
                    return Err(Failure::Negative(
                        "mate search exhausted the search space: this square has no orthogonal mate".into(),
                    ))
                }
                Err(LppError::BudgetExceeded(b)) => {
                    return Err(Failure::Refused(format!(
                        "mate search gave up after {b} steps; rerun with a larger --budget"
                    )))
                }
                Err(e) => return Err(usage(e)),
            }
        }
    };
    let orthogonal = are_orthogonal(&first, &second).map_err(usage)?;
    let pair = PairOut {
        q: first.q(),
        first: &first,
        second: &second,
        orthogonal,
        method,
    };
    emit(&render_pair(&pair, format))?;
    if orthogonal {
        Ok(())
    } else {
        Err(Failure::Negative("the produced squares are not orthogonal".into()))
    }
}

fn interpolate(square: &PathBuf, p: u32, n: u32) -> Outcome {
    let field = FieldParams::new(p, n).map_err(usage)?;
    let grids = parse_grids(&read_file(square)?).map_err(usage)?;
    let [grid] = grids.grids.as_slice() else {
        return Err(usage("interpolate takes a file with a single square"));
    };
    let poly = interpolate_bivariate(&field, grid).map_err(usage)?;
    emit(&to_json_line(&poly))
}

fn count(family: &Family, verify_oracle: bool, guard: usize) -> Outcome {
    let report = count_report(family, verify_oracle, guard).map_err(from_enumerate)?;
    emit(&to_json_line(&report))?;
    match report.matches {
        Some(false) => Err(Failure::Negative("closed form and oracle disagree".into())),
        _ => Ok(()),
    }
}

fn equivalents(family: &Family, format: Format, guard: usize) -> Outcome {
    let n = family.count_equivalents(guard).map_err(from_enumerate)?;
    let text = match format {
        Format::Json => to_json_line(&serde_json::json!({
            "family": family.name(),
            "params": family.params_json(),
            "equivalents": n.to_string(),
        })),
        Format::Text | Format::Csv => format!("{n}\n"),
    };
    emit(&text)
}

fn verify(square: &PathBuf, square2: Option<&PathBuf>) -> Outcome {
    let mut parsed = parse_grids(&read_file(square)?).map_err(usage)?;
    if let Some(path) = square2 {
        if parsed.grids.len() != 1 {
            return Err(usage("--square2 needs --square to hold a single square"));
        }
        let other = parse_grids(&read_file(path)?).map_err(usage)?;
        let [grid] = <[_; 1]>::try_from(other.grids).map_err(|_| usage("--square2 must hold a single square"))?;
        parsed.grids.push(grid);
    }
    let mut squares = Vec::new();
    for (k, grid) in parsed.grids.into_iter().enumerate() {
        if let Some(why) = latin_defect(&grid) {
            emit(&format!("latin: false (square {}: {why})\n", k + 1))?;
            return Err(Failure::Negative("not a Latin square".into()));
        }
        squares.push(LatinSquare::new(grid).expect("checked"));
    }
    emit("latin: true\n")?;
    if let [a, b] = squares.as_slice() {
        let orth = are_orthogonal(a, b).map_err(usage)?;
        emit(&format!("orthogonal: {orth}\n"))?;
        if parsed.claimed_orthogonal.is_some_and(|c| c != orth) {
            return Err(Failure::Negative("the file's orthogonality claim is wrong".into()));
        }
        if !orth {
            return Err(Failure::Negative("squares are not orthogonal".into()));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct {
            family,
            format,
            group_out,
        } => construct(&family.resolve()?, format, group_out.as_ref()),
        Command::Companion {
            family,
            format,
            mate_search,
            budget,
        } => companion(&family.resolve()?, format, mate_search, budget),
        Command::Interpolate { square, p, n } => interpolate(&square, p, n),
        Command::Count {
            family,
            verify_oracle,
            guard,
        } => count(&family.resolve()?, verify_oracle, guard),
        Command::Equivalents { family, format, guard } => equivalents(&family.resolve()?, format, guard),
        Command::Verify { square, square2 } => verify(&square, square2.as_ref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
