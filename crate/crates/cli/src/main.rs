//! `ifwb`: command-line front-end for the IF logic workbench.
//!
//! Output is JSON unless `--pretty` is given. Exit code 2 means the input
//! could not be read or parsed; 1 means a precondition failed or a check
//! did not pass.

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ifwb_core::encodings::{
    builtin_sentence, encode_instance, Instance, Problem, BUILTIN_NAMES, DEFECTIVE_NAMES,
};
use ifwb_core::harness::{default_max_size, run_suite, Suite};
use ifwb_core::patterns::classify;
use ifwb_core::rewrite::{apply_rule, prenex, strong_regularize, RuleId, RuleParams, Side};
use ifwb_core::skolem::{budget_from_env, truth_by_skolem_with_budget};
use ifwb_core::syntax::{parse_formula, parse_tree, prefix_tree, Formula, Locator, PrefixTree};
use ifwb_core::teams::{neg_satisfies, satisfies, truth_value, Structure, Team, TruthValue};
use ifwb_core::Error;

#[derive(Parser)]
#[command(name = "ifwb", version, about = "IF logic workbench")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula; print its AST and regularity flags.
    Parse {
        #[arg(long)]
        formula: String,
    },
    /// Evaluate ⊨ and ⊨⁻ on a team.
    Eval {
        #[arg(long)]
        structure: String,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        team: String,
    },
    /// Truth value of a sentence.
    Truth {
        #[arg(long)]
        structure: String,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Engine::Teams)]
        engine: Engine,
    },
    /// Classify a formula's prefix tree, or a tree given directly.
    Classify {
        #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
        formula: Option<String>,
        #[arg(long)]
        tree: Option<String>,
    },
    /// Apply one rule, or a whole pipeline, to a tree.
    Rewrite {
        #[arg(long)]
        tree: String,
        #[arg(
            long,
            conflicts_with = "pipeline",
            requires = "at",
            required_unless_present = "pipeline"
        )]
        rule: Option<String>,
        #[arg(long)]
        at: Option<String>,
        /// New variable for rename.
        #[arg(long)]
        new_var: Option<String>,
        /// Which child quantifier an extraction moves (left|right).
        #[arg(long)]
        side: Option<String>,
        /// Include the step log for a single rule.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum)]
        pipeline: Option<Pipeline>,
    },
    /// Encode a problem instance as a structure.
    Encode {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        input: String,
        #[arg(long)]
        emit_sentence: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_size: Option<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Teams,
    Skolem,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pipeline {
    Prenex,
    StrongRegularize,
}

enum Failure {
    /// Unreadable or unparsable input.
    Input(String),
    /// Violated precondition or failed check.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Check(e.to_string())
        }
    }
}

type Out = Result<(Value, String), Failure>;

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))
}

/// A builtin name, a file, or inline text.
fn source(arg: &str) -> Result<String, Failure> {
    if Path::new(arg).is_file() {
        read(arg)
    } else {
        Ok(arg.to_string())
    }
}

fn load_formula(arg: &str) -> Result<Formula, Failure> {
    if BUILTIN_NAMES.contains(&arg) || DEFECTIVE_NAMES.contains(&arg) {
        return Ok(builtin_sentence(arg)?);
    }
    let text = source(arg)?;
    parse_formula(&text).map_err(|e| {
        if !Path::new(arg).exists() && !arg.contains(char::is_whitespace) && !arg.contains('(') {
            Failure::Input(format!(
                "`{arg}` is neither a file, a builtin sentence nor a formula"
            ))
        } else {
            e.into()
        }
    })
}

fn load_tree(arg: &str) -> Result<PrefixTree, Failure> {
    Ok(parse_tree(&source(arg)?)?)
}

fn load_structure(path: &str) -> Result<Structure, Failure> {
    Ok(Structure::from_json(&read(path)?)?)
}

fn tv(v: TruthValue) -> &'static str {
    match v {
        TruthValue::True => "True",
        TruthValue::False => "False",
        TruthValue::Undetermined => "Undetermined",
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("outputs serialize")
}

fn cmd_parse(formula: &str) -> Out {
    let f = load_formula(formula)?;
    let sets = f.var_sets();
    let reg = f.regularity();
    let tree = prefix_tree(&f);
    let pretty = format!(
        "{f}\nfree: {:?}\nbound: {:?}\nregular: {}\nstrongly regular: {}\nprefix tree: {tree}",
        sets.free, sets.bound, reg.regular, reg.strongly_regular
    );
    Ok((
        json!({
            "formula": f.to_string(),
            "ast": to_json(&f),
            "free": sets.free,
            "bound": sets.bound,
            "regularity": to_json(&reg),
            "negation_normal": f.is_negation_normal(),
            "prefix_tree": tree.to_string(),
        }),
        pretty,
    ))
}

fn cmd_eval(structure: &str, formula: &str, team: &str) -> Out {
    let m = load_structure(structure)?;
    let f = load_formula(formula)?;
    let x: Team =
        serde_json::from_str(&read(team)?).map_err(|e| Failure::Input(format!("team: {e}")))?;
    let pos = satisfies(&m, &x, &f)?;
    let neg = neg_satisfies(&m, &x, &f)?;
    Ok((
        json!({ "satisfies": pos, "neg_satisfies": neg }),
        format!("satisfies: {pos}\nneg_satisfies: {neg}"),
    ))
}

fn cmd_truth(structure: &str, formula: &str, engine: Engine) -> Out {
    let m = load_structure(structure)?;
    let f = load_formula(formula)?;
    let skolem =
        || -> Result<bool, Failure> { Ok(truth_by_skolem_with_budget(&m, &f, budget_from_env())?) };
    match engine {
        Engine::Teams => {
            let v = tv(truth_value(&m, &f)?);
            Ok((json!({ "engine": "teams", "value": v }), v.to_string()))
        }
        Engine::Skolem => {
            let v = if skolem()? { "True" } else { "False" };
            Ok((json!({ "engine": "skolem", "value": v }), v.to_string()))
        }
        Engine::Both => {
            let t = truth_value(&m, &f)?;
            let s = skolem()?;
            if s != (t == TruthValue::True) {
                return Err(Failure::Check(format!(
                    "engines disagree: teams {}, skolem {s}",
                    tv(t)
                )));
            }
            let sv = if s { "True" } else { "False" };
            Ok((
                json!({ "engine": "both", "teams": tv(t), "skolem": sv, "agree": true }),
                format!("{sv} (teams: {}, skolem: {sv}; engines agree)", tv(t)),
            ))
        }
    }
}

fn cmd_classify(formula: Option<&str>, tree: Option<&str>) -> Out {
    let t = match (formula, tree) {
        (Some(f), _) => prefix_tree(&load_formula(f)?),
        (None, Some(t)) => load_tree(t)?,
        (None, None) => return Err(Failure::Input("give --formula or --tree".into())),
    };
    let v = classify(&t)?;
    let mut pretty = format!("{t}\n{:?}", v.verdict);
    if let Some(p) = &v.problem {
        pretty.push_str(&format!(" ({p})"));
    }
    pretty.push_str(&format!(
        "\nfamily: {:?}, branch {}\n{}",
        v.family, v.branch, v.reason
    ));
    for d in &v.diagnostics {
        pretty.push_str(&format!("\n  {d}"));
    }
    Ok((to_json(&v), pretty))
}

#[allow(clippy::too_many_arguments)]
fn cmd_rewrite(
    tree: &str,
    rule: Option<&str>,
    at: Option<&str>,
    new_var: Option<String>,
    side: Option<&str>,
    trace: bool,
    pipeline: Option<Pipeline>,
) -> Out {
    let t = load_tree(tree)?;
    let (out, steps, show) = match (pipeline, rule) {
        (Some(p), _) => {
            let (out, steps) = match p {
                Pipeline::Prenex => prenex(&t)?,
                Pipeline::StrongRegularize => strong_regularize(&t)?,
            };
            (out, steps, true)
        }
        (None, Some(r)) => {
            let rule: RuleId = r.parse()?;
            let at = at.ok_or_else(|| Failure::Input("--rule needs --at".into()))?;
            let loc: Locator = at.parse()?;
            let params = RuleParams {
                new_var,
                side: side.map(str::parse::<Side>).transpose()?,
            };
            let a = apply_rule(&t, rule, &loc, &params)?;
            (a.tree, vec![a.step], trace)
        }
        (None, None) => return Err(Failure::Input("give --rule or --pipeline".into())),
    };
    let mut pretty = out.to_string();
    let mut j = json!({ "tree": out.to_string() });
    if show {
        for s in &steps {
            pretty.push_str(&format!(
                "\n  {} at {}: {} ⟶ {}",
                s.rule, s.locator, s.before, s.after
            ));
        }
        j["steps"] = to_json(&steps);
    }
    Ok((j, pretty))
}

fn cmd_encode(problem: &str, input: &str, emit_sentence: bool) -> Out {
    let p: Problem = problem.parse()?;
    let inst = Instance::parse(p, &read(input)?)?;
    let m = encode_instance(p, &inst)?;
    let mut pretty = format!("domain {}\n{}", m.domain, m.to_json());
    let j = if emit_sentence {
        let s = p.sentence();
        pretty.push_str(&format!("\n{}: {s}", p.sentence_name()));
        json!({ "structure": to_json(&m), "sentence_name": p.sentence_name(), "sentence": s.to_string() })
    } else {
        to_json(&m)
    };
    Ok((j, pretty))
}

fn cmd_verify(suite: &str, max_size: Option<u32>, seed: u64) -> Out {
    let s: Suite = suite.parse()?;
    let r = run_suite(s, max_size.unwrap_or_else(|| default_max_size(s)), seed)?;
    let mut pretty = String::new();
    for c in &r.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        pretty.push_str(&format!(
            "{mark} {}: {} ({} ms)\n",
            c.name, c.detail, c.elapsed_ms
        ));
    }
    pretty.push_str(if r.passed {
        "all checks passed"
    } else {
        "some checks failed"
    });
    let j = to_json(&r);
    if r.passed {
        Ok((j, pretty))
    } else {
        println!("{pretty}");
        Err(Failure::Check("verification failed".into()))
    }
}

fn run(cli: Cli) -> Out {
    match cli.command {
        Command::Parse { formula } => cmd_parse(&formula),
        Command::Eval {
            structure,
            formula,
            team,
        } => cmd_eval(&structure, &formula, &team),
        Command::Truth {
            structure,
            formula,
            engine,
        } => cmd_truth(&structure, &formula, engine),
        Command::Classify { formula, tree } => cmd_classify(formula.as_deref(), tree.as_deref()),
        Command::Rewrite {
            tree,
            rule,
            at,
            new_var,
            side,
            trace,
            pipeline,
        } => cmd_rewrite(
            &tree,
            rule.as_deref(),
            at.as_deref(),
            new_var,
            side.as_deref(),
            trace,
            pipeline,
        ),
        Command::Encode {
            problem,
            input,
            emit_sentence,
        } => cmd_encode(&problem, &input, emit_sentence),
        Command::Verify {
            suite,
            max_size,
            seed,
        } => cmd_verify(&suite, max_size, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    match run(cli) {
        Ok((j, text)) => {
            if pretty {
                println!("{text}");
            } else {
                println!("{j}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
