//! The `linrel` command line.
//!
//! [`run_command`] does all the work and returns the exit code and output
//! instead of printing, so it can be driven from tests. Exit codes: 0 on
//! success, 1 when a verification fails, 2 on usage or input errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factorization::{
    exact_left_check, exact_right_check, left_criterion, left_injective_criterion,
    left_relation_criterion, operator_part, operator_part_criterion, operators_left_sufficient,
    right_operator_criterion, right_operator_pointwise, right_relation_criterion,
    solve_left_operator, solve_left_operator_injective, solve_left_relation, solve_right_operator,
    solve_right_relation, verify_solution, Side,
};
use crate::field::FieldSpec;
use crate::format::{parse_relation, serialize_relation};
use crate::oracle::EnumerationBudget;
use crate::properties::{run_suite, shrink, Case, Suite};
use crate::random::{random_left_pair, random_right_pair, random_single};
use crate::relation::{contained_c12, LinearRelation};
use crate::report::{Check, DecisionReport};

#[derive(Parser, Debug)]
#[command(
    name = "linrel",
    version,
    about = "Exact linear relations and Douglas-type factorizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the dimensions of dom, ran, ker and mul.
    Analyze { relation: PathBuf },
    /// Decide a problem and print the criterion report. A trailing
    /// candidate file C is checked as a solution.
    Check {
        problem: ProblemArg,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Build a solution, or print the obstruction when there is none.
    Solve {
        problem: ProblemArg,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Where to write the solution (stdout when omitted).
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Run the property suites on seeded random instances.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    /// A ⊆ B
    Contains,
    /// relation C with A ⊆ BC
    RightRelation,
    /// operator C with A ⊆ BC
    RightOperator,
    /// relation C with A ⊆ CB
    LeftRelation,
    /// operator C with A ⊆ CB
    LeftOperator,
    /// injective operator C with A ⊆ CB
    LeftInjective,
    /// operator C ⊆ R with ran C = ran R
    OperatorPart,
    /// A = BB⁻¹A
    ExactRight,
    /// A = AB⁻¹B
    ExactLeft,
}

impl ProblemArg {
    fn inputs(self) -> usize {
        match self {
            ProblemArg::OperatorPart => 1,
            _ => 2,
        }
    }

    fn takes_candidate(self) -> bool {
        !matches!(
            self,
            ProblemArg::Contains | ProblemArg::ExactRight | ProblemArg::ExactLeft
        )
    }
}

#[derive(clap::Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// gf2, gf3, gf5, any gf<p>, or q; repeatable.
    #[arg(long = "field", value_parser = parse_field_arg, default_value = "gf2")]
    pub fields: Vec<FieldSpec>,
    #[arg(long, default_value_t = 3)]
    pub max_dim: usize,
    /// Also compare against exhaustive enumeration where the budget allows.
    #[arg(long)]
    pub oracle: bool,
}

fn parse_field_arg(s: &str) -> std::result::Result<FieldSpec, String> {
    if s == "q" {
        return Ok(FieldSpec::Rational);
    }
    let p = s
        .strip_prefix("gf")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| format!("expected gf<p> or q, found {s:?}"))?;
    FieldSpec::prime(p).map_err(|e| e.to_string())
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn ok(stdout: String) -> CommandOutput {
        CommandOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl Into<String>) -> CommandOutput {
        CommandOutput {
            code: 2,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandOutput::ok(text)
                }
                _ => CommandOutput::usage(text),
            };
        }
    };
    let result = match cli.command {
        Command::Analyze { relation } => analyze(&relation),
        Command::Check { problem, files } => check(problem, &files),
        Command::Solve {
            problem,
            files,
            output,
        } => solve(problem, &files, output.as_deref()),
        Command::Verify(args) => Ok(verify(&args)),
    };
    result.unwrap_or_else(|e| CommandOutput::usage(format!("error: {e}\n")))
}

fn load(path: &Path) -> Result<LinearRelation> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_relation(&text).map_err(|e| match e {
        Error::Parse {
            line,
            column,
            message,
        } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn analyze(path: &Path) -> Result<CommandOutput> {
    let r = load(path)?;
    let mut out = String::new();
    writeln!(
        out,
        "relation K^{} -> K^{} over {}",
        r.dom_dim(),
        r.cod_dim(),
        r.field()
    )
    .unwrap();
    writeln!(out, "dim graph {}", r.graph().dim()).unwrap();
    writeln!(out, "dim dom {}", r.dom().dim()).unwrap();
    writeln!(out, "dim ran {}", r.ran().dim()).unwrap();
    writeln!(out, "dim ker {}", r.ker().dim()).unwrap();
    writeln!(out, "dim mul {}", r.mul().dim()).unwrap();
    writeln!(out, "operator {}", r.is_operator()).unwrap();
    writeln!(out, "injective {}", r.is_injective()).unwrap();
    Ok(CommandOutput::ok(out))
}

fn load_inputs(
    problem: ProblemArg,
    files: &[PathBuf],
) -> Result<(Vec<LinearRelation>, Option<LinearRelation>)> {
    let n = problem.inputs();
    let max = n + usize::from(problem.takes_candidate());
    if files.len() < n || files.len() > max {
        let names = if n == 1 { "R" } else { "A B" };
        let cand = if problem.takes_candidate() {
            " [C]"
        } else {
            ""
        };
        return Err(Error::ShapeMismatch(format!(
            "{problem:?} expects {names}{cand}, got {} file(s)",
            files.len()
        )));
    }
    let rels = files[..n]
        .iter()
        .map(|p| load(p))
        .collect::<Result<Vec<_>>>()?;
    let cand = files.get(n).map(|p| load(p)).transpose()?;
    Ok((rels, cand))
}

fn criterion_reports(problem: ProblemArg, rels: &[LinearRelation]) -> Result<Vec<DecisionReport>> {
    let r = &rels[0];
    Ok(match problem {
        ProblemArg::Contains => vec![contained_c12(r, &rels[1])?],
        ProblemArg::RightRelation => vec![right_relation_criterion(r, &rels[1])?],
        ProblemArg::RightOperator => vec![
            right_operator_criterion(r, &rels[1])?,
            right_operator_pointwise(r, &rels[1])?,
        ],
        ProblemArg::LeftRelation => vec![left_relation_criterion(r, &rels[1])?],
        ProblemArg::LeftOperator => {
            let mut v = vec![left_criterion(r, &rels[1])?];
            if r.is_operator() {
                v.push(operators_left_sufficient(r, &rels[1])?);
            }
            v
        }
        ProblemArg::LeftInjective => vec![left_injective_criterion(r, &rels[1])?],
        ProblemArg::OperatorPart => vec![operator_part_criterion(r)?],
        ProblemArg::ExactRight => vec![exact_right_check(r, &rels[1])?],
        ProblemArg::ExactLeft => vec![exact_left_check(r, &rels[1])?],
    })
}

fn candidate_report(
    problem: ProblemArg,
    rels: &[LinearRelation],
    c: &LinearRelation,
) -> Result<DecisionReport> {
    let a = &rels[0];
    match problem {
        ProblemArg::RightRelation => verify_solution(Side::Right, a, &rels[1], c, false, false),
        ProblemArg::RightOperator => verify_solution(Side::Right, a, &rels[1], c, true, false),
        ProblemArg::LeftRelation => verify_solution(Side::Left, a, &rels[1], c, false, false),
        ProblemArg::LeftOperator => verify_solution(Side::Left, a, &rels[1], c, true, false),
        ProblemArg::LeftInjective => verify_solution(Side::Left, a, &rels[1], c, true, true),
        ProblemArg::OperatorPart => {
            if !a.same_shape(c) {
                return Err(Error::ShapeMismatch("C must have the shape of R".into()));
            }
            let mut rep = DecisionReport::new("validation");
            rep.check(Check::flag("C ⊆ R", c.is_subrelation_of(a)?, ""))
                .check(Check::flag(
                    "mul C = {0}",
                    c.is_operator(),
                    format!("dim mul C {}", c.mul().dim()),
                ))
                .check(Check::equality("ran C = ran R", c.ran(), a.ran()));
            Ok(rep)
        }
        ProblemArg::Contains | ProblemArg::ExactRight | ProblemArg::ExactLeft => {
            unreachable!("no candidate")
        }
    }
}

fn check(problem: ProblemArg, files: &[PathBuf]) -> Result<CommandOutput> {
    let (rels, cand) = load_inputs(problem, files)?;
    let mut out = String::new();
    for rep in criterion_reports(problem, &rels)? {
        write!(out, "{rep}").unwrap();
    }
    let mut code = 0;
    if let Some(c) = cand {
        let rep = candidate_report(problem, &rels, &c)?;
        writeln!(out, "candidate C:").unwrap();
        write!(out, "{rep}").unwrap();
        if !rep.verdict {
            code = 1;
        }
    }
    Ok(CommandOutput {
        code,
        stdout: out,
        stderr: String::new(),
    })
}

fn solve(problem: ProblemArg, files: &[PathBuf], output: Option<&Path>) -> Result<CommandOutput> {
    if !problem.takes_candidate() {
        return Err(Error::ShapeMismatch(format!(
            "{problem:?} is a yes/no question; use `check`"
        )));
    }
    let (rels, cand) = load_inputs(problem, files)?;
    if cand.is_some() {
        return Err(Error::ShapeMismatch(
            "`solve` takes no candidate file".into(),
        ));
    }
    let (a, b) = (&rels[0], rels.get(1));
    let solution = match problem {
        ProblemArg::RightRelation => solve_right_relation(a, b.unwrap())?,
        ProblemArg::RightOperator => solve_right_operator(a, b.unwrap())?.map(|s| s.relation),
        ProblemArg::LeftRelation => solve_left_relation(a, b.unwrap())?,
        ProblemArg::LeftOperator => solve_left_operator(a, b.unwrap())?.map(|s| s.relation),
        ProblemArg::LeftInjective => {
            solve_left_operator_injective(a, b.unwrap())?.map(|s| s.relation)
        }
        ProblemArg::OperatorPart => operator_part(a)?.map(|s| s.relation),
        ProblemArg::Contains | ProblemArg::ExactRight | ProblemArg::ExactLeft => unreachable!(),
    };
    let mut out = String::new();
    match solution {
        None => {
            writeln!(out, "no solution").unwrap();
            for rep in criterion_reports(problem, &rels)? {
                write!(out, "{rep}").unwrap();
            }
        }
        Some(c) => {
            let text = serialize_relation(&c);
            match output {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| Error::Parse {
                        line: 0,
                        column: 0,
                        message: format!("cannot write {}: {e}", path.display()),
                    })?;
                    writeln!(out, "solution written to {}", path.display()).unwrap();
                    write!(out, "{}", candidate_report(problem, &rels, &c)?).unwrap();
                }
                None => out.push_str(&text),
            }
        }
    }
    Ok(CommandOutput::ok(out))
}

/// One violated property, already shrunk.
struct Violation {
    field: FieldSpec,
    trial: u64,
    suite: Suite,
    label: String,
    case: Case,
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failed: u64,
    skipped: u64,
}

fn field_tag(f: FieldSpec) -> u64 {
    match f {
        FieldSpec::Prime(p) => u64::from(p),
        FieldSpec::Rational => 0,
    }
}

/// The three cases of one trial. Each (field, trial) pair has its own
/// ChaCha stream, so the instances do not depend on the trial count.
pub fn trial_cases(seed: u64, field: FieldSpec, trial: u64, max_dim: usize) -> [Case; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(field_tag(field) << 40 | trial);
    let (a, b) = random_right_pair(&mut rng, field, max_dim);
    let (c, d) = random_left_pair(&mut rng, field, max_dim);
    let r = random_single(&mut rng, field, max_dim);
    [
        Case::Right { a, b },
        Case::Left { a: c, b: d },
        Case::Single { r },
    ]
}

fn verify(args: &VerifyArgs) -> CommandOutput {
    let mut out = String::new();
    let field_names: Vec<String> = args.fields.iter().map(|f| f.to_string()).collect();
    writeln!(
        out,
        "verify seed {} trials {} fields {} max-dim {} oracle {}",
        args.seed,
        args.trials,
        field_names.join(","),
        args.max_dim,
        if args.oracle { "on" } else { "off" }
    )
    .unwrap();
    let suites: Vec<Suite> = Suite::ALL
        .into_iter()
        .filter(|&s| s != Suite::Oracle || args.oracle)
        .collect();
    let mut violations = Vec::new();
    for &field in &args.fields {
        let budget = if args.oracle {
            EnumerationBudget::new(field).ok()
        } else {
            None
        };
        let results: Vec<_> = (0..args.trials)
            .into_par_iter()
            .map(|trial| {
                let cases = trial_cases(args.seed, field, trial, args.max_dim);
                let mut per = Vec::new();
                for case in cases {
                    for &suite in &suites {
                        let res = run_suite(suite, &case, budget.as_ref());
                        per.push((suite, case.clone(), res));
                    }
                }
                (trial, per)
            })
            .collect();
        let mut tallies: BTreeMap<Suite, Tally> = BTreeMap::new();
        let mut verdicts: BTreeMap<String, (u64, u64)> = BTreeMap::new();
        for (trial, per) in results {
            for (suite, case, res) in per {
                let t = tallies.entry(suite).or_default();
                if res.skipped {
                    t.skipped += 1;
                    continue;
                }
                t.cases += 1;
                for (name, v) in &res.verdicts {
                    let e = verdicts.entry(name.clone()).or_default();
                    if *v {
                        e.0 += 1;
                    } else {
                        e.1 += 1;
                    }
                }
                if let Some(label) = res.failures.first() {
                    t.failed += 1;
                    violations.push(Violation {
                        field,
                        trial,
                        suite,
                        label: label.clone(),
                        case,
                    });
                }
            }
        }
        writeln!(out, "{field}:").unwrap();
        for (suite, t) in &tallies {
            write!(
                out,
                "  {:<11} {} cases, {} failed",
                suite.name(),
                t.cases,
                t.failed
            )
            .unwrap();
            if t.skipped > 0 {
                write!(out, ", {} over budget", t.skipped).unwrap();
            }
            out.push('\n');
        }
        for (name, (yes, no)) in &verdicts {
            writeln!(out, "  verdicts {name}: {yes} true, {no} false").unwrap();
        }
    }
    if violations.is_empty() {
        writeln!(out, "result: pass").unwrap();
        return CommandOutput::ok(out);
    }
    writeln!(out, "result: FAIL ({} violations)", violations.len()).unwrap();
    for v in violations.iter().take(5) {
        let budget = if v.suite == Suite::Oracle {
            EnumerationBudget::new(v.field).ok()
        } else {
            None
        };
        let small = shrink(&v.case, v.suite, &v.label, budget.as_ref());
        writeln!(
            out,
            "violation: {} trial {} {} suite {}: {}",
            v.field,
            v.trial,
            v.case.kind(),
            v.suite,
            v.label
        )
        .unwrap();
        for (name, r) in small.relations() {
            writeln!(out, "--- {name}.rel").unwrap();
            out.push_str(&serialize_relation(r));
        }
    }
    CommandOutput {
        code: 1,
        stdout: out,
        stderr: String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn run(args: &[&str]) -> CommandOutput {
        run_command(std::iter::once("linrel").chain(args.iter().copied()))
    }

    fn write(dir: &Path, name: &str, text: &str) -> String {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    #[test]
    fn analyze_projection_with_mul() {
        let dir = tempfile::tempdir().unwrap();
        let r = write(
            dir.path(),
            "R.rel",
            "field gf 2\ndims 2 2\ngen 1 0 1 0\ngen 0 1 0 0\ngen 0 0 0 1\n",
        );
        let out = run(&["analyze", &r]);
        assert_eq!(out.code, 0);
        assert!(
            out.stdout
                .contains("dim dom 2\ndim ran 2\ndim ker 1\ndim mul 1\n"),
            "{}",
            out.stdout
        );
        assert!(out.stdout.contains("operator false"));
    }

    #[test]
    fn check_names_the_obstruction() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "A.rel", "field gf 2\ndims 1 1\ngen 0 1\n");
        let b = write(dir.path(), "B.rel", "field gf 2\ndims 1 1\ngen 1 1\n");
        let out = run(&["check", "right-operator", &a, &b]);
        assert_eq!(out.code, 0);
        assert!(
            out.stdout.contains("criterion t5: verdict false"),
            "{}",
            out.stdout
        );
        assert!(
            out.stdout.contains("obstruction: mul A ⊆ mul B"),
            "{}",
            out.stdout
        );
    }

    #[test]
    fn solve_then_check() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(
            dir.path(),
            "A.rel",
            "field gf 2\ndims 2 2\ngen 1 0 1 0\ngen 0 1 0 1\n",
        );
        let b = write(
            dir.path(),
            "B.rel",
            "field gf 2\ndims 2 2\ngen 1 0 1 0\ngen 0 1 0 0\ngen 0 0 0 1\n",
        );
        let c = dir.path().join("C.rel");
        let out = run(&["solve", "left-operator", &a, &b, "-o", c.to_str().unwrap()]);
        assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
        assert!(out.stdout.contains("solution written"));
        let out = run(&["check", "left-operator", &a, &b, c.to_str().unwrap()]);
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert!(out
            .stdout
            .contains("candidate C:\ncriterion validation: verdict true"));
    }

    #[test]
    fn bad_candidate_exits_one() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "A.rel", "field gf 2\ndims 1 1\ngen 1 1\n");
        let b = write(dir.path(), "B.rel", "field gf 2\ndims 1 1\ngen 1 1\n");
        let c = write(dir.path(), "C.rel", "field gf 2\ndims 1 1\n");
        assert_eq!(run(&["check", "right-operator", &a, &b, &c]).code, 1);
    }

    #[test]
    fn no_solution_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let r = write(dir.path(), "R.rel", "field gf 2\ndims 1 1\ngen 0 1\n");
        let out = run(&["solve", "operator-part", &r]);
        assert_eq!(out.code, 0);
        assert!(
            out.stdout
                .starts_with("no solution\ncriterion c24: verdict false"),
            "{}",
            out.stdout
        );
    }

    #[test]
    fn usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "A.rel", "field gf 2\ndims 1 1\ngen 1 1\n");
        let bad = write(dir.path(), "bad.rel", "field gf 2\ndims 1 1\ngen 1\n");
        assert_eq!(run(&[]).code, 2);
        assert_eq!(run(&["frobnicate"]).code, 2);
        assert_eq!(run(&["check", "right-operator", &a]).code, 2);
        assert_eq!(run(&["solve", "contains", &a, &a]).code, 2);
        let out = run(&["analyze", &bad]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("line 3"), "{}", out.stderr);
        assert_eq!(run(&["analyze", "/nonexistent/R.rel"]).code, 2);
        assert_eq!(run(&["verify", "--field", "gf4"]).code, 2);
        assert_eq!(run(&["--help"]).code, 0);
    }

    #[test]
    fn verify_is_deterministic() {
        let args = [
            "verify",
            "--seed",
            "5",
            "--trials",
            "20",
            "--field",
            "gf3",
            "--max-dim",
            "2",
            "--oracle",
        ];
        let first = run(&args);
        assert_eq!(first.code, 0, "{}", first.stdout);
        assert_eq!(first, run(&args));
        assert!(first.stdout.ends_with("result: pass\n"));
    }
}
