//! JSON task files: schema validation and conversion to library types.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use jsonschema::JSONSchema;
use possib::compat::{Example, Possibility, Sign};
use possib::logic::{parse_atom, parse_theory, serialize_theory, HerbrandBase, Interpretation, Signature};
use possib::reductions::{HypothesisSpace, LabeledExample, LearningTask, SpaceKind};
use possib::learner::LearnerConfig;
use possib::{ExtendedExample, Possibilities, Setting};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const TASK_SCHEMA: &str = include_str!("../schema/task.schema.json");
pub const RNA_SCHEMA: &str = include_str!("../schema/rna.schema.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskFile {
    pub setting: String,
    pub signature: BTreeMap<String, usize>,
    pub examples: Vec<ExampleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis_space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learner: Option<LearnerSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExampleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub base: BaseSpec,
    pub payload: Payload,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BaseSpec {
    #[serde(default)]
    pub constants: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra_predicates: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Payload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_atoms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub possibilities: Option<Vec<PossibilitySpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning_constants: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assumption_predicates: Option<BTreeMap<String, usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PossibilitySpec {
    pub theory: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceSpec {
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default = "two")]
    pub max_terms: usize,
    #[serde(default = "two")]
    pub max_literals: usize,
    #[serde(default = "one")]
    pub max_variables: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub max_cubes: Option<usize>,
    pub max_literals_per_cube: Option<usize>,
    pub max_variables: Option<usize>,
    pub horn_shortcut: Option<bool>,
    pub constants: Option<Vec<String>>,
}

fn default_kind() -> String {
    "dnf_plus".into()
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

fn schema(text: &'static str, cell: &'static OnceLock<JSONSchema>) -> &'static JSONSchema {
    cell.get_or_init(|| {
        let v: Value = serde_json::from_str(text).expect("bundled schema is JSON");
        JSONSchema::compile(&v).expect("bundled schema compiles")
    })
}

/// Reads `path` as JSON and checks it against a bundled schema.
pub fn read_validated(path: &Path, which: &'static str) -> Result<Value, CliError> {
    static TASK: OnceLock<JSONSchema> = OnceLock::new();
    static RNA: OnceLock<JSONSchema> = OnceLock::new();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let compiled = match which {
        "rna" => schema(RNA_SCHEMA, &RNA),
        _ => schema(TASK_SCHEMA, &TASK),
    };
    if let Err(errors) = compiled.validate(&value) {
        let msgs: Vec<String> = errors.map(|e| format!("{}: {e}", e.instance_path)).collect();
        return Err(CliError::input(format!("{}: schema violation\n  {}", path.display(), msgs.join("\n  "))));
    }
    Ok(value)
}

pub fn load_task(path: &Path) -> Result<TaskFile, CliError> {
    let value = read_validated(path, "task")?;
    serde_json::from_value(value).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn signature(map: &BTreeMap<String, usize>) -> Signature {
    map.iter().map(|(p, &a)| (p.clone(), a)).collect()
}

fn sign(label: &str) -> Result<Sign, CliError> {
    label.parse().map_err(CliError::from)
}

impl TaskFile {
    pub fn setting(&self) -> Result<Setting, CliError> {
        self.setting.parse().map_err(CliError::from)
    }

    pub fn signature(&self) -> Signature {
        signature(&self.signature)
    }

    /// Every example with its name and optional label.
    pub fn examples(&self) -> Result<Vec<(String, Option<Sign>, Example)>, CliError> {
        let setting = self.setting()?;
        let sig = self.signature();
        self.examples
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let name = e.name.clone().unwrap_or_else(|| format!("e{}", k + 1));
                let label = e.label.as_deref().map(sign).transpose()?;
                let example = build_example(setting, &sig, e).map_err(|err| err.context(&name))?;
                Ok((name, label, example))
            })
            .collect()
    }

    pub fn learning_task(&self) -> Result<LearningTask, CliError> {
        let examples = self
            .examples()?
            .into_iter()
            .map(|(name, label, example)| {
                let label = label.ok_or_else(|| CliError::input(format!("example {name} has no label")))?;
                Ok(LabeledExample::new(name, example, label))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(LearningTask::new(self.setting()?, self.signature(), examples)?)
    }

    pub fn space(&self) -> Option<Result<HypothesisSpace, CliError>> {
        self.hypothesis_space.as_ref().map(|s| s.to_space(self.signature()))
    }

    pub fn learner_config(&self) -> LearnerConfig {
        let d = LearnerConfig::default();
        let s = self.learner.clone().unwrap_or_default();
        LearnerConfig {
            max_cubes: s.max_cubes.unwrap_or(d.max_cubes),
            max_literals_per_cube: s.max_literals_per_cube.unwrap_or(d.max_literals_per_cube),
            max_variables: s.max_variables.unwrap_or(d.max_variables),
            horn_shortcut: s.horn_shortcut.unwrap_or(d.horn_shortcut),
            constants: s.constants.unwrap_or(d.constants),
            space_limit: d.space_limit,
        }
    }

    /// Task file for a library task; every base is written out explicitly.
    pub fn from_task(task: &LearningTask) -> TaskFile {
        let signature = task.signature.iter().map(|(p, a)| (p.to_string(), a)).collect();
        let examples = task
            .examples
            .iter()
            .map(|e| ExampleSpec {
                name: Some(e.name.clone()),
                label: Some(e.label.to_string()),
                base: BaseSpec::default(),
                payload: Payload::default(),
            }
            .with_example(&task.signature, &e.example))
            .collect();
        TaskFile {
            setting: task.setting.name().to_string(),
            signature,
            examples,
            hypothesis_space: None,
            learner: None,
        }
    }
}

impl SpaceSpec {
    pub fn to_space(&self, signature: Signature) -> Result<HypothesisSpace, CliError> {
        let kind: SpaceKind = self.kind.parse()?;
        let mut space = HypothesisSpace::new(signature, kind, self.max_terms, self.max_literals, self.max_variables);
        space.constants = self.constants.clone();
        Ok(space)
    }

    /// `kind:terms:literals:variables`, e.g. `cnf:2:2:0`.
    pub fn parse(spec: &str) -> Result<SpaceSpec, CliError> {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || CliError::input(format!("space `{spec}` is not kind:terms:literals:variables"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        Ok(SpaceSpec {
            kind: parts[0].to_string(),
            max_terms: num(parts[1])?,
            max_literals: num(parts[2])?,
            max_variables: num(parts[3])?,
            constants: Vec::new(),
        })
    }
}

fn base_of(sig: &Signature, constants: &[String]) -> Arc<HerbrandBase> {
    HerbrandBase::new(sig.clone(), constants.iter().cloned()).shared()
}

fn need<'a, T>(field: &'a Option<T>, what: &str, setting: Setting) -> Result<&'a T, CliError> {
    field
        .as_ref()
        .ok_or_else(|| CliError::input(format!("a {setting} payload needs `{what}`")))
}

fn build_example(setting: Setting, task_sig: &Signature, e: &ExampleSpec) -> Result<Example, CliError> {
    let sig = task_sig.union(&signature(&e.base.extra_predicates))?;
    let base = base_of(&sig, &e.base.constants);
    let p = &e.payload;
    let theory = |setting| -> Result<_, CliError> { Ok(parse_theory(need(&p.theory, "theory", setting)?)?) };
    Ok(match setting {
        Setting::Interpretations => {
            let mut indices = Vec::new();
            for text in need(&p.true_atoms, "true_atoms", setting)? {
                let atom = parse_atom(text)?;
                let k = base
                    .index_of_atom(&atom)
                    .ok_or_else(|| CliError::input(format!("atom {text} is not in the example base")))?;
                indices.push(k);
            }
            Example::Complete(Interpretation::from_indices(base, indices))
        }
        Setting::Generalized => Example::Generalized { theory: theory(setting)?, base },
        Setting::Uncertain => Example::PureUncertain { theory: theory(setting)?, base },
        Setting::Satisfiability => Example::Satisfiability { theory: theory(setting)?, base },
        Setting::Possibilities => {
            let items = need(&p.possibilities, "possibilities", setting)?
                .iter()
                .map(|item| {
                    let consts = item.constants.as_ref().unwrap_or(&e.base.constants);
                    let theory = parse_theory(&item.theory)?;
                    let b = base_of(&sig, consts);
                    Ok(match item.weight {
                        Some(w) => Possibility::weighted(theory, b, w),
                        None => Possibility::new(theory, b),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Example::Possibilities(Possibilities::new(items)?)
        }
        Setting::AssumptionBased => {
            let consts = p.learning_constants.as_ref().unwrap_or(&e.base.constants);
            let learning = base_of(task_sig, consts);
            let mut x = ExtendedExample::new(theory(setting)?, base, learning)?;
            if let Some(preds) = &p.assumption_predicates {
                let hb_a = base_of(&signature(preds), &e.base.constants);
                x = x.with_assumption_base(hb_a)?;
            }
            Example::Extended(x)
        }
    })
}

impl ExampleSpec {
    fn with_example(mut self, task_sig: &Signature, example: &Example) -> ExampleSpec {
        let describe = |base: &HerbrandBase| -> (Vec<String>, BTreeMap<String, usize>) {
            let extra = base
                .signature()
                .iter()
                .filter(|(p, _)| task_sig.arity(p).is_none())
                .map(|(p, a)| (p.to_string(), a))
                .collect();
            (base.universe().to_vec(), extra)
        };
        let set_base = |spec: &mut ExampleSpec, base: &HerbrandBase| {
            let (constants, extra_predicates) = describe(base);
            spec.base = BaseSpec { constants, extra_predicates };
        };
        match example {
            Example::Complete(i) => {
                set_base(&mut self, i.base());
                self.payload.true_atoms = Some(i.true_atoms().map(|a| a.to_string()).collect());
            }
            Example::Generalized { theory, base }
            | Example::PureUncertain { theory, base }
            | Example::Satisfiability { theory, base } => {
                set_base(&mut self, base);
                self.payload.theory = Some(serialize_theory(theory));
            }
            Example::Possibilities(p) => {
                let first = &p.items()[0].base;
                set_base(&mut self, first);
                let weights = p.weights();
                self.payload.possibilities = Some(
                    p.items()
                        .iter()
                        .enumerate()
                        .map(|(k, item)| PossibilitySpec {
                            theory: serialize_theory(&item.theory),
                            constants: (item.base.universe() != first.universe()).then(|| item.base.universe().to_vec()),
                            weight: weights.as_ref().map(|w| w[k]),
                        })
                        .collect(),
                );
            }
            Example::Extended(x) => {
                set_base(&mut self, &x.extended_base);
                self.payload.theory = Some(serialize_theory(&x.theory));
                if x.learning_base.universe() != x.extended_base.universe() {
                    self.payload.learning_constants = Some(x.learning_base.universe().to_vec());
                }
                if let Some(a) = &x.assumption_base {
                    self.payload.assumption_predicates =
                        Some(a.signature().iter().map(|(p, n)| (p.to_string(), n)).collect());
                }
            }
        }
        self
    }
}
