//! `tridots` command-line front end.
//!
//! Every command renders to a string so the binary stays a thin shell around
//! [`run`]. Exit codes: 0 success, 1 user error, 2 internal invariant violation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use tridots_core::certificate::{build_certificate, certificate_objective, verify_feasible};
use tridots_core::construction::{build_placement, validate_placement, Placement};
use tridots_core::exact_solver::{max_dots_with_cap, DEFAULT_SEARCH_CAP};
use tridots_core::lp_model::{build_dual, build_primal, cell_var_index, export_lp_text};
use tridots_core::simplex::{lp_value_with_cap, solve, DEFAULT_LP_CAP};
use tridots_core::{Error, LpStatus, Rational, TriangleSize};

pub mod render;

/// Environment variable overriding both size caps.
pub const CAP_ENV: &str = "TRIDOTS_SOLVER_CAP";

pub const EXIT_OK: u8 = 0;
pub const EXIT_USER: u8 = 1;
pub const EXIT_INTERNAL: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "tridots", version, about = "Non-attacking dots in triangular grids, with exact LP bounds")]
pub struct Cli {
    /// Largest n for the backtracking search (default 25, or $TRIDOTS_SOLVER_CAP).
    #[arg(long, global = true)]
    pub ilp_cap: Option<u32>,

    /// Largest n for the exact simplex (default 60, or $TRIDOTS_SOLVER_CAP).
    #[arg(long, global = true)]
    pub lp_cap: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// N(n), LP(n) and their gap for n = 3..=max.
    Table {
        #[arg(long = "max", default_value_t = 12)]
        n_max: i64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Ascii)]
        format: OutputFormat,
    },
    /// The explicit placement with ⌊(2n+1)/3⌋ dots.
    Construct {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Ascii)]
        format: OutputFormat,
    },
    /// Builds and checks the dual certificate, and compares it with the construction.
    Certify {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Ascii)]
        format: OutputFormat,
    },
    /// Solves the primal or dual LP exactly, or the integer problem by search.
    Solve {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, value_enum, default_value_t = OutputFormat::Ascii)]
        format: OutputFormat,
    },
    /// Writes the primal or dual LP in LP text format.
    Export {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_enum)]
        which: Which,
        /// Output file (default `triangle_{which}_{n}.lp`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Ascii,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Primal,
    Dual,
    Ilp,
}

impl Which {
    fn name(self) -> &'static str {
        match self {
            Which::Primal => "primal",
            Which::Dual => "dual",
            Which::Ilp => "ilp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn failure(code: u8, message: impl std::fmt::Display) -> Self {
        Self { stdout: String::new(), stderr: format!("tridots: {message}\n"), code }
    }
}

/// A command failure and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::CapExceeded { .. } => EXIT_USER,
            Error::PivotLimit(_) | Error::Internal(_) => EXIT_INTERNAL,
        };
        Self { code, message: e.to_string() }
    }
}

fn user_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USER, message: message.into() }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INTERNAL, message: message.into() }
}

type CmdResult = std::result::Result<String, Failure>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub ilp: u32,
    pub lp: u32,
}

impl Caps {
    /// Flags win over the environment, which wins over the defaults.
    pub fn resolve(cli: &Cli, env: Option<&str>) -> std::result::Result<Self, Failure> {
        let env_cap = match env {
            Some(v) => Some(
                v.trim()
                    .parse::<u32>()
                    .map_err(|_| user_error(format!("{CAP_ENV} must be a nonnegative integer, got {v:?}")))?,
            ),
            None => None,
        };
        Ok(Self {
            ilp: cli.ilp_cap.or(env_cap).unwrap_or(DEFAULT_SEARCH_CAP),
            lp: cli.lp_cap.or(env_cap).unwrap_or(DEFAULT_LP_CAP),
        })
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: EXIT_USER }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let env = std::env::var(CAP_ENV).ok();
    let caps = match Caps::resolve(&cli, env.as_deref()) {
        Ok(caps) => caps,
        Err(f) => return Outcome::failure(f.code, f.message),
    };
    match execute(&cli.command, caps) {
        Ok(outcome) => outcome,
        Err(f) => Outcome::failure(f.code, f.message),
    }
}

pub fn execute(command: &Command, caps: Caps) -> std::result::Result<Outcome, Failure> {
    match *command {
        Command::Table { n_max, format } => cmd_table(n_max, format, caps).map(Outcome::ok),
        Command::Construct { n, format } => cmd_construct(size(n)?, format).map(Outcome::ok),
        Command::Certify { n, format } => cmd_certify(size(n)?, format),
        Command::Solve { n, which, format } => cmd_solve(size(n)?, which, format, caps).map(Outcome::ok),
        Command::Export { n, which, ref out } => cmd_export(size(n)?, which, out.clone()).map(Outcome::ok),
    }
}

fn size(n: i64) -> std::result::Result<TriangleSize, Failure> {
    Ok(TriangleSize::new(n)?)
}

/// One line of the table: `n`, `N(n)`, `LP(n)` and the gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub n: u32,
    pub dots: usize,
    pub lp: Rational,
}

impl TableRow {
    pub fn gap(&self) -> Rational {
        &self.lp - &Rational::from(self.dots as i64)
    }
}

pub fn table_rows(n_max: i64, caps: Caps) -> std::result::Result<Vec<TableRow>, Failure> {
    if n_max < 3 {
        return Err(user_error(format!("--max must be at least 3, got {n_max}")));
    }
    (3..=n_max)
        .map(|n| {
            let s = size(n)?;
            let (dots, _) = max_dots_with_cap(s, caps.ilp)?;
            let lp = lp_value_with_cap(s, caps.lp)?;
            Ok(TableRow { n: s.get(), dots, lp })
        })
        .collect()
}

pub fn cmd_table(n_max: i64, format: OutputFormat, caps: Caps) -> CmdResult {
    let rows = table_rows(n_max, caps)?;
    let header = ["n", "N(n)", "LP(n)", "LP(n)-N(n)"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![r.n.to_string(), r.dots.to_string(), r.lp.to_mixed_string(), r.gap().to_mixed_string()]
        })
        .collect();
    Ok(match format {
        OutputFormat::Ascii => render::ascii_table(&header, &cells),
        OutputFormat::Csv => render::csv(&header, &cells),
        OutputFormat::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| json!({"n": r.n, "N": r.dots, "LP": r.lp.to_string(), "gap": r.gap().to_string()}))
                .collect();
            serde_json::to_string_pretty(&rows).expect("json") + "\n"
        }
    })
}

fn placement_text(p: &Placement, format: OutputFormat) -> String {
    match format {
        OutputFormat::Ascii => {
            render::triangle(p.size(), |c| if p.contains(c) { "o".into() } else { ".".into() })
        }
        OutputFormat::Json => p.to_json() + "\n",
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> =
                p.dots().iter().map(|c| vec![c.row.to_string(), c.pos.to_string()]).collect();
            render::csv(&["row", "pos"], &rows)
        }
    }
}

pub fn cmd_construct(size: TriangleSize, format: OutputFormat) -> CmdResult {
    let p = build_placement(size);
    let report = validate_placement(&p);
    if !report.is_ok() {
        return Err(internal(format!("construction for n = {size} is invalid: {report:?}")));
    }
    let mut out = placement_text(&p, format);
    if format == OutputFormat::Ascii {
        let _ = writeln!(out, "{} dots, valid", p.len());
    }
    Ok(out)
}

pub fn cmd_certify(size: TriangleSize, format: OutputFormat) -> std::result::Result<Outcome, Failure> {
    let cert = build_certificate(size);
    let report = verify_feasible(&cert);
    if !report.is_ok() {
        return Err(internal(format!(
            "certificate for n = {size} is infeasible: {} violated cells, {} negative weights",
            report.violated.len(),
            report.negative.len()
        )));
    }
    let objective = certificate_objective(&cert);
    let upper = objective.floor();
    let placement = build_placement(size);
    if !validate_placement(&placement).is_ok() {
        return Err(internal(format!("construction for n = {size} is invalid")));
    }
    let lower = placement.len();
    let proved = upper == lower.into();
    let verdict = if proved {
        format!("N({size}) = {lower} proved")
    } else {
        format!("N({size}) not pinned: {lower} <= N({size}) <= {upper}")
    };

    let cert_json = serde_json::to_string(&cert.to_json()).expect("json");
    let stdout = match format {
        OutputFormat::Json => {
            let value = json!({
                "certificate": serde_json::from_str::<serde_json::Value>(&cert_json).expect("json"),
                "upper_bound": upper.to_string().parse::<u64>().unwrap_or(u64::MAX),
                "lower_bound": lower,
                "proved": proved,
                "verdict": verdict,
            });
            serde_json::to_string(&value).expect("json") + "\n"
        }
        OutputFormat::Ascii | OutputFormat::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "certificate: {cert_json}");
            let _ = writeln!(out, "objective: {objective} ({})", objective.to_mixed_string());
            let _ = writeln!(out, "upper bound: N({size}) <= {upper} (dual certificate, {} tight cells)", report.tight);
            let _ = writeln!(out, "lower bound: N({size}) >= {lower} (construction)");
            let _ = writeln!(out, "{verdict}");
            out
        }
    };
    Ok(Outcome { stdout, stderr: String::new(), code: if proved { EXIT_OK } else { EXIT_INTERNAL } })
}

pub fn cmd_solve(size: TriangleSize, which: Which, format: OutputFormat, caps: Caps) -> CmdResult {
    if which == Which::Ilp {
        let (count, witness) = max_dots_with_cap(size, caps.ilp)?;
        return Ok(match format {
            OutputFormat::Json => {
                let dots: Vec<[u32; 2]> = witness.dots().iter().map(|c| [c.row, c.pos]).collect();
                let value = json!({"n": size.get(), "which": "ilp", "objective": count, "dots": dots});
                serde_json::to_string(&value).expect("json") + "\n"
            }
            OutputFormat::Csv => placement_text(&witness, format),
            OutputFormat::Ascii => {
                let mut out = format!("N({size}) = {count}\n");
                out.push_str(&placement_text(&witness, format));
                out
            }
        });
    }

    if size.get() > caps.lp {
        return Err(Error::CapExceeded { what: "exact simplex", n: size.get().into(), cap: caps.lp.into() }.into());
    }
    let problem = if which == Which::Primal { build_primal(size) } else { build_dual(size) };
    let solution = solve(&problem)?;
    if solution.status != LpStatus::Optimal {
        return Err(internal(format!("{} LP reported {:?}", which.name(), solution.status)));
    }
    Ok(match format {
        OutputFormat::Json => {
            let values: Vec<_> = problem
                .var_names
                .iter()
                .zip(&solution.values)
                .map(|(name, v)| json!([name, v.to_string()]))
                .collect();
            let value = json!({
                "n": size.get(),
                "which": which.name(),
                "status": "optimal",
                "objective": solution.objective.to_string(),
                "values": values,
            });
            serde_json::to_string(&value).expect("json") + "\n"
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = problem
                .var_names
                .iter()
                .zip(&solution.values)
                .map(|(name, v)| vec![name.clone(), v.to_string()])
                .collect();
            render::csv(&["variable", "value"], &rows)
        }
        OutputFormat::Ascii => {
            let mut out = format!(
                "{} LP({size}) optimum: {} ({})\n",
                which.name(),
                solution.objective,
                solution.objective.to_mixed_string()
            );
            match which {
                Which::Primal => {
                    out.push_str(&render::triangle(size, |c| solution.values[cell_var_index(c)].to_string()));
                }
                _ => {
                    let n = size.get() as usize;
                    for (k, prefix) in ["r", "c", "d"].into_iter().enumerate() {
                        let vals: Vec<String> =
                            solution.values[k * n..(k + 1) * n].iter().map(ToString::to_string).collect();
                        let _ = writeln!(out, "{prefix}: {}", vals.join(" "));
                    }
                }
            }
            out
        }
    })
}

pub fn cmd_export(size: TriangleSize, which: Which, out: Option<PathBuf>) -> CmdResult {
    let problem = match which {
        Which::Primal => build_primal(size),
        Which::Dual => build_dual(size),
        Which::Ilp => return Err(user_error("export supports --which primal or dual")),
    };
    let path = out.unwrap_or_else(|| PathBuf::from(format!("triangle_{}_{size}.lp", which.name())));
    std::fs::write(&path, export_lp_text(&problem))
        .map_err(|e| user_error(format!("cannot write {}: {e}", path.display())))?;
    Ok(format!(
        "wrote {} ({} variables, {} constraints)\n",
        path.display(),
        problem.num_vars(),
        problem.constraints.len()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps { ilp: DEFAULT_SEARCH_CAP, lp: DEFAULT_LP_CAP }
    }

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("tridots").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn cap_precedence() {
        let cli = parse(&["table"]);
        assert_eq!(Caps::resolve(&cli, None).unwrap(), caps());
        assert_eq!(Caps::resolve(&cli, Some("30")).unwrap(), Caps { ilp: 30, lp: 30 });
        let cli = parse(&["--lp-cap", "7", "table"]);
        assert_eq!(Caps::resolve(&cli, Some("30")).unwrap(), Caps { ilp: 30, lp: 7 });
        assert_eq!(Caps::resolve(&cli, Some("x")).unwrap_err().code, EXIT_USER);
    }

    #[test]
    fn single_row_table() {
        let csv = cmd_table(3, OutputFormat::Csv, caps()).unwrap();
        assert_eq!(csv, "n,N(n),LP(n),LP(n)-N(n)\n3,2,2 1/4,1/4\n");
    }

    #[test]
    fn table_rejects_small_max() {
        assert_eq!(cmd_table(2, OutputFormat::Csv, caps()).unwrap_err().code, EXIT_USER);
    }

    #[test]
    fn table_respects_caps() {
        let tight = Caps { ilp: 4, lp: 60 };
        let err = cmd_table(5, OutputFormat::Csv, tight).unwrap_err();
        assert_eq!(err.code, EXIT_USER);
        assert!(err.message.contains("capped"), "{}", err.message);
    }

    #[test]
    fn construct_seven_ascii() {
        let out = cmd_construct(TriangleSize::new(7).unwrap(), OutputFormat::Ascii).unwrap();
        let expected = "            .\n\
                        \x20         . .\n\
                        \x20       . . o\n\
                        \x20     . o . .\n\
                        \x20   o . . . .\n\
                        \x20 . . . . o .\n\
                        . . . o . . .\n\
                        5 dots, valid\n";
        assert_eq!(out, expected);
    }

    #[test]
    fn construct_one() {
        let out = cmd_construct(TriangleSize::new(1).unwrap(), OutputFormat::Json).unwrap();
        assert_eq!(out, "{\"n\":1,\"dots\":[[1,1]]}\n");
    }

    #[test]
    fn certify_seven() {
        let out = cmd_certify(TriangleSize::new(7).unwrap(), OutputFormat::Ascii).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.ends_with("N(7) = 5 proved\n"), "{}", out.stdout);
        assert!(out.stdout.contains("upper bound: N(7) <= 5"));
        assert!(out.stdout.contains("lower bound: N(7) >= 5"));
    }

    #[test]
    fn certify_json_fields() {
        let out = cmd_certify(TriangleSize::new(1).unwrap(), OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["verdict"], "N(1) = 1 proved");
        assert_eq!(v["certificate"]["objective"], "1");
        assert_eq!(v["certificate"]["feasible"], true);
        assert_eq!(v["lower_bound"], 1);
        assert_eq!(v["upper_bound"], 1);
    }

    #[test]
    fn solve_variants() {
        let six = TriangleSize::new(6).unwrap();
        let primal = cmd_solve(six, Which::Primal, OutputFormat::Json, caps()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&primal).unwrap();
        assert_eq!(v["objective"], "30/7");
        let dual = cmd_solve(six, Which::Dual, OutputFormat::Ascii, caps()).unwrap();
        assert!(dual.starts_with("dual LP(6) optimum: 30/7 (4 2/7)\n"), "{dual}");
        let ilp = cmd_solve(TriangleSize::new(1).unwrap(), Which::Ilp, OutputFormat::Ascii, caps()).unwrap();
        assert!(ilp.starts_with("N(1) = 1\n"));
    }

    #[test]
    fn solve_caps() {
        let big = TriangleSize::new(61).unwrap();
        assert_eq!(cmd_solve(big, Which::Primal, OutputFormat::Ascii, caps()).unwrap_err().code, EXIT_USER);
        let mid = TriangleSize::new(26).unwrap();
        assert_eq!(cmd_solve(mid, Which::Ilp, OutputFormat::Ascii, caps()).unwrap_err().code, EXIT_USER);
    }

    #[test]
    fn export_rejects_ilp() {
        let err = cmd_export(TriangleSize::new(3).unwrap(), Which::Ilp, None).unwrap_err();
        assert_eq!(err.code, EXIT_USER);
    }

    #[test]
    fn bad_arguments_are_user_errors() {
        assert_eq!(run(["tridots", "construct", "0"]).code, EXIT_USER);
        assert_eq!(run(["tridots", "construct", "-4"]).code, EXIT_USER);
        assert_eq!(run(["tridots", "frobnicate"]).code, EXIT_USER);
        assert_eq!(run(["tridots", "--help"]).code, EXIT_OK);
    }
}
