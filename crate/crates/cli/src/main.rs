//! `possib`: batch front end for compatibility checks, model listing,
//! learning, classification, reductions and palindrome structures.

mod task;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use possib::compat::{DeductionMode, Example, Sign};
use possib::learner::{classify, greedy_learn, weighted_model_probability, FailureReason, Learned};
use possib::logic::{parse_dnf, parse_theory, Formula, HerbrandBase, Signature};
use possib::reductions::{abl_task, check_reduction_equiv, rho_task, single_sat_search, small_theories};
use possib::rna::{build_rna_example, maximal_compatible_subsets, structure_possibilities, top_k_structures, PalindromeSet};
use possib::{Engine, Error, Limits, Setting};

use task::{load_task, read_validated, SpaceSpec, TaskFile};

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn context(self, what: &str) -> Self {
        CliError {
            message: format!("{what}: {}", self.message),
            ..self
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BaseTooLarge { .. } | Error::SpaceTooLarge { .. } => 3,
            Error::Degenerate(_) | Error::Unsatisfiable | Error::Inconsistent => 4,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(name = "possib", version, about = "Concept learning from incomplete examples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Deduction {
    LeastModel,
    Entailment,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReduceFrom {
    /// satisfiability to possibilities
    Sat,
    /// assumption-based to possibilities
    Abl,
    /// search for one satisfiability example with the same solutions
    Possibilities,
}

#[derive(Subcommand)]
enum Command {
    /// List the models of a theory in canonical order.
    Models {
        #[arg(long)]
        theory: PathBuf,
        /// Herbrand universe, comma separated.
        #[arg(long, value_delimiter = ',')]
        constants: Vec<String>,
        /// Extra predicates as name/arity, comma separated.
        #[arg(long, value_delimiter = ',')]
        predicates: Vec<String>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Check one hypothesis against one example.
    Check {
        #[arg(long)]
        setting: Setting,
        #[arg(long)]
        hypothesis: PathBuf,
        #[arg(long)]
        example: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        sign: Sign,
        /// Decide assumption-based examples through their assumption base.
        #[arg(long)]
        deduction: Option<Deduction>,
    },
    /// Learn a DNF+ hypothesis by greedy covering.
    Learn {
        #[arg(long)]
        task: PathBuf,
        #[arg(long)]
        emit_trace: bool,
        #[arg(long)]
        horn_shortcut: bool,
    },
    /// Classify an instance as positive, negative, uncertain or contradictory.
    Classify {
        #[arg(long)]
        setting: Setting,
        #[arg(long)]
        hypothesis: PathBuf,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Transform a task between settings and compare solution sets.
    Reduce {
        #[arg(long, value_enum)]
        from: ReduceFrom,
        #[arg(long)]
        task: PathBuf,
        /// Hypothesis space as kind:terms:literals:variables.
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        verify: bool,
        /// Write the transformed task here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Enumerate palindrome structures and test patterns against them.
    Rna {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        top_k: Option<usize>,
        /// One DNF+ pattern per line.
        #[arg(long)]
        patterns: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// A clausal theory when the text ends in `.` (or is empty), a DNF otherwise.
fn parse_hypothesis(path: &Path) -> Result<Formula, CliError> {
    let text = read(path)?;
    let code: String = text
        .lines()
        .map(|l| l.split('%').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let trimmed = code.trim();
    let f = if trimmed.is_empty() || trimmed.ends_with('.') {
        Formula::Cnf(parse_theory(&code)?)
    } else {
        Formula::Dnf(parse_dnf(&code)?)
    };
    Ok(f)
}

/// The single example of an example file, checked against `setting`.
fn single_example(path: &Path, setting: Setting) -> Result<Example, CliError> {
    let file = load_task(path)?;
    if file.setting()? != setting {
        return Err(CliError::input(format!(
            "{} holds a {} example, not {setting}",
            path.display(),
            file.setting
        )));
    }
    let mut examples = file.examples()?;
    if examples.len() != 1 {
        return Err(CliError::input(format!(
            "{} must hold exactly one example, found {}",
            path.display(),
            examples.len()
        )));
    }
    Ok(examples.remove(0).2)
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn cmd_models(
    engine: &Engine,
    theory: &Path,
    constants: &[String],
    predicates: &[String],
    limit: Option<usize>,
) -> Result<Output, CliError> {
    let t = parse_theory(&read(theory)?)?;
    let mut sig = Signature::of_atoms(t.atoms())?;
    for p in predicates {
        let (name, arity) = p
            .split_once('/')
            .and_then(|(n, a)| Some((n, a.parse::<usize>().ok()?)))
            .ok_or_else(|| CliError::input(format!("predicate `{p}` is not name/arity")))?;
        sig.declare(name, arity)?;
    }
    let hb = HerbrandBase::new(sig, constants.iter().cloned()).shared();
    let models = engine.models_of(&[(&t).into()], &hb, limit)?;
    let mut text = String::new();
    for m in models {
        writeln!(text, "{m}").unwrap();
    }
    Ok(Output::ok(text))
}

fn cmd_check(
    engine: &Engine,
    setting: Setting,
    hypothesis: &Path,
    example: &Path,
    sign: Sign,
    deduction: Option<Deduction>,
) -> Result<Output, CliError> {
    let h = parse_hypothesis(hypothesis)?;
    let e = single_example(example, setting)?;
    let verdict = match (&e, deduction) {
        (Example::Extended(x), Some(d)) => {
            let mode = match d {
                Deduction::LeastModel => DeductionMode::LeastModel,
                Deduction::Entailment => DeductionMode::Entailment,
            };
            engine.compat_a_subbase(&h, x, sign, mode)
        }
        _ => engine.compat(&h, &e, sign),
    };
    Ok(match verdict {
        Ok(true) => Output::ok("compatible\n".into()),
        Ok(false) => Output {
            text: "incompatible\n".into(),
            code: 1,
        },
        Err(Error::Degenerate(_)) => Output {
            text: "degenerate\n".into(),
            code: 4,
        },
        Err(e) => return Err(e.into()),
    })
}

fn cmd_learn(engine: &Engine, path: &Path, emit_trace: bool, horn_shortcut: bool) -> Result<Output, CliError> {
    let file = load_task(path)?;
    let task = file.learning_task()?;
    let mut config = file.learner_config();
    config.horn_shortcut |= horn_shortcut;
    let report = greedy_learn(engine, &task, &config)?;
    let mut text = String::new();
    if emit_trace {
        let state = if report.shortcut_engaged { "engaged" } else { "off" };
        writeln!(text, "shortcut: {state}").unwrap();
        for event in &report.trace {
            writeln!(text, "trace: {event}").unwrap();
        }
    }
    let code = match &report.outcome {
        Learned::Hypothesis(h) => {
            writeln!(text, "hypothesis: {h}").unwrap();
            0
        }
        Learned::Failure { partial, uncovered, reason } => {
            match reason {
                FailureReason::NoPositives => writeln!(text, "failure: no positive examples").unwrap(),
                FailureReason::Uncoverable => {
                    writeln!(text, "failure: uncovered {}", uncovered.join(", ")).unwrap();
                    writeln!(text, "partial: {partial}").unwrap();
                }
            }
            1
        }
    };
    Ok(Output { text, code })
}

fn cmd_classify(engine: &Engine, setting: Setting, hypothesis: &Path, instance: &Path) -> Result<Output, CliError> {
    let h = parse_hypothesis(hypothesis)?;
    let e = single_example(instance, setting)?;
    Ok(Output::ok(format!("{}\n", classify(engine, &h, &e, setting)?)))
}

fn cmd_reduce(
    engine: &Engine,
    from: ReduceFrom,
    path: &Path,
    space: Option<&str>,
    verify: bool,
    output: Option<&Path>,
) -> Result<Output, CliError> {
    let file = load_task(path)?;
    let task = file.learning_task()?;
    let space = match space {
        Some(s) => Some(SpaceSpec::parse(s)?.to_space(task.signature.clone())?),
        None => file.space().transpose()?,
    };
    let need_space = || space.clone().ok_or_else(|| CliError::input("a hypothesis space is required"));
    let mut text = String::new();
    let mut code = 0;
    if from == ReduceFrom::Possibilities {
        if task.setting != Setting::Possibilities {
            return Err(CliError::input(format!("expected a possibilities task, found {}", task.setting)));
        }
        let base = HerbrandBase::propositional(["a", "b"]).shared();
        if task.signature != *base.signature() {
            return Err(CliError::input("the single-example search is defined over 0-ary a, b"));
        }
        let report = single_sat_search(engine, &task, &small_theories(3), &base, &need_space()?)?;
        if !report.matches.is_empty() {
            code = 1;
        }
        writeln!(text, "{report}").unwrap();
        return Ok(Output { text, code });
    }
    let transform = |t: &possib::reductions::LearningTask| match from {
        ReduceFrom::Sat => rho_task(engine, t),
        _ => abl_task(engine, t),
    };
    let transformed = transform(&task)?;
    let mut json = serde_json::to_string_pretty(&TaskFile::from_task(&transformed)).expect("serializable");
    json.push('\n');
    match output {
        Some(p) => std::fs::write(p, &json).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?,
        None => text.push_str(&json),
    }
    if verify {
        let report = check_reduction_equiv(engine, &task, transform, &need_space()?)?;
        if !report.equal() {
            code = 1;
        }
        writeln!(text, "{report}").unwrap();
    }
    Ok(Output { text, code })
}

#[derive(serde::Deserialize)]
struct RnaInput {
    palindromes: Vec<String>,
    relations: Vec<(String, String, String)>,
    #[serde(default)]
    incompatible: Vec<(String, String)>,
    weights: Option<BTreeMap<String, f64>>,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_rna(engine: &Engine, input: &Path, top_k: Option<usize>, patterns: Option<&Path>) -> Result<Output, CliError> {
    let value = read_validated(input, "rna")?;
    let raw: RnaInput = serde_json::from_value(value).map_err(|e| CliError::input(format!("{}: {e}", input.display())))?;
    let relations = raw
        .relations
        .into_iter()
        .map(|(r, a, b)| Ok((r.parse()?, a, b)))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut ps = PalindromeSet::new(raw.palindromes, relations, raw.incompatible)?;
    if let Some(w) = raw.weights {
        let w = w
            .into_iter()
            .map(|(k, v)| Ok((k.parse::<usize>().map_err(|_| CliError::input(format!("weight key `{k}`")))?, v)))
            .collect::<Result<_, CliError>>()?;
        ps = ps.with_weights(w)?;
    }
    let mut text = String::new();
    let candidates = maximal_compatible_subsets(&ps);
    writeln!(text, "structures: {}", candidates.len()).unwrap();
    for (k, c) in candidates.iter().enumerate() {
        let helices: Vec<String> = c.helices.iter().map(|h| format!("hel({h})")).collect();
        let rels: Vec<String> = c.ground_relations.iter().map(|g| g.to_string()).collect();
        write!(text, "structure {k}: {{{}}} -> {{{}}}", helices.join(", "), rels.join(", ")).unwrap();
        if let Some(w) = ps.weights().and_then(|w| w.get(&k)) {
            write!(text, " weight {w}").unwrap();
        }
        text.push('\n');
    }
    if let Some(k) = top_k {
        let top = top_k_structures(&ps, k)?;
        let kept: Vec<String> = top.kept.iter().map(|(i, _, _)| i.to_string()).collect();
        writeln!(text, "top {k}: structures {}; retained mass {:.6}", kept.join(", "), top.retained_mass).unwrap();
    }
    if let Some(path) = patterns {
        let x = build_rna_example(&ps)?;
        let weighted = match ps.weights() {
            Some(_) => Some(structure_possibilities(&ps)?),
            None => None,
        };
        text.push_str("pattern\tcompatible+\tcompatible-");
        if weighted.is_some() {
            text.push_str("\tprobability");
        }
        text.push('\n');
        for line in read(path)?.lines() {
            let line = line.split('%').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let h = parse_dnf(line)?;
            let pos = engine.compat_a_subbase(&h, &x, Sign::Positive, DeductionMode::LeastModel)?;
            let neg = engine.compat_a_subbase(&h, &x, Sign::Negative, DeductionMode::LeastModel)?;
            write!(text, "{h}\t{}\t{}", yes_no(pos), yes_no(neg)).unwrap();
            if let Some(p) = &weighted {
                write!(text, "\t{:.6}", weighted_model_probability(engine, &h, p)?).unwrap();
            }
            text.push('\n');
        }
    }
    Ok(Output::ok(text))
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let engine = Engine::new(Limits::from_env());
    match cli.command {
        Command::Models {
            theory,
            constants,
            predicates,
            limit,
        } => cmd_models(&engine, &theory, &constants, &predicates, limit),
        Command::Check {
            setting,
            hypothesis,
            example,
            sign,
            deduction,
        } => cmd_check(&engine, setting, &hypothesis, &example, sign, deduction),
        Command::Learn {
            task,
            emit_trace,
            horn_shortcut,
        } => cmd_learn(&engine, &task, emit_trace, horn_shortcut),
        Command::Classify {
            setting,
            hypothesis,
            instance,
        } => cmd_classify(&engine, setting, &hypothesis, &instance),
        Command::Reduce {
            from,
            task,
            space,
            verify,
            output,
        } => cmd_reduce(&engine, from, &task, space.as_deref(), verify, output.as_deref()),
        Command::Rna { input, top_k, patterns } => cmd_rna(&engine, &input, top_k, patterns.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
