//! Analysis specifications: parsing, validation and construction of the
//! length system they describe.

use std::fmt;

use serde_json::{Map, Value};
use subadditive::oracle::FamilyDescription;
use subadditive::{
    AtomBase, BlockMonoid, ExplicitFamily, FiniteAbelianGroup, GeneratedFamily, LengthSystem, NatSet,
    NumericalMonoid, SystemConfig, WeightedAtomSystem,
};

/// A schema or semantic violation located by a JSON pointer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecError {
    pub pointer: String,
    pub message: String,
}

impl SpecError {
    fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        SpecError {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "{p}: {}", self.message)
    }
}

impl std::error::Error for SpecError {}

type Result<T> = std::result::Result<T, SpecError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Task {
    Profile,
    Delta,
    Elasticity,
    Structure,
    Period,
    Growth,
    OracleCheck,
}

impl Task {
    pub const ALL: [Task; 7] = [
        Task::Profile,
        Task::Delta,
        Task::Elasticity,
        Task::Structure,
        Task::Period,
        Task::Growth,
        Task::OracleCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Profile => "profile",
            Task::Delta => "delta",
            Task::Elasticity => "elasticity",
            Task::Structure => "structure",
            Task::Period => "period",
            Task::Growth => "growth",
            Task::OracleCheck => "oracle-check",
        }
    }

    pub fn parse(s: &str) -> Option<Task> {
        Task::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Tasks whose results are only meaningful for subadditive families.
    pub fn needs_subadditive(self) -> bool {
        matches!(self, Task::Structure | Task::Period | Task::Growth)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weights {
    /// One weight per atom: per generator for numerical monoids.
    PerAtom(Vec<u64>),
    /// One weight per support element; atoms weigh the sum over their terms.
    PerElement(Vec<u64>),
    /// Element weight = sum of the coordinates of the element.
    Modular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Numerical {
        generators: Vec<u64>,
        weights: Option<Weights>,
    },
    Block {
        group: Vec<u64>,
        support: Option<Vec<Vec<u64>>>,
        weights: Option<Weights>,
    },
    Sumset {
        generators: Vec<Vec<u64>>,
    },
    Explicit {
        sets: Vec<Vec<u64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisSpec {
    pub family: FamilySpec,
    pub tasks: Vec<Task>,
    pub k_horizon: u64,
    pub value_horizon: Option<u64>,
    pub window: Option<u64>,
    pub i_max: Option<u64>,
}

pub const DEFAULT_WINDOW: u64 = 5;

fn kind_of(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| SpecError::new(ptr, format!("expected an object, found {}", kind_of(v))))
}

fn check_keys(obj: &Map<String, Value>, ptr: &str, allowed: &[&str]) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(SpecError::new(
                format!("{ptr}/{}", escape(key)),
                format!("unknown key; expected one of {}", allowed.join(", ")),
            ));
        }
    }
    Ok(())
}

fn required<'a>(obj: &'a Map<String, Value>, ptr: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| SpecError::new(format!("{ptr}/{key}"), "missing required key"))
}

fn nat(v: &Value, ptr: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| SpecError::new(ptr, format!("expected a non-negative integer, found {}", kind_of(v))))
}

fn positive(v: &Value, ptr: &str) -> Result<u64> {
    match nat(v, ptr)? {
        0 => Err(SpecError::new(ptr, "must be positive")),
        x => Ok(x),
    }
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| SpecError::new(ptr, format!("expected an array, found {}", kind_of(v))))
}

fn nat_list(v: &Value, ptr: &str) -> Result<Vec<u64>> {
    array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, x)| nat(x, &format!("{ptr}/{i}")))
        .collect()
}

fn nat_lists(v: &Value, ptr: &str) -> Result<Vec<Vec<u64>>> {
    array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, x)| nat_list(x, &format!("{ptr}/{i}")))
        .collect()
}

fn optional<T>(obj: &Map<String, Value>, ptr: &str, key: &str, f: impl Fn(&Value, &str) -> Result<T>) -> Result<Option<T>> {
    obj.get(key).map(|v| f(v, &format!("{ptr}/{key}"))).transpose()
}

fn weights(v: &Value, ptr: &str) -> Result<Weights> {
    let obj = object(v, ptr)?;
    check_keys(obj, ptr, &["per_atom", "per_element", "modular"])?;
    if obj.len() != 1 {
        return Err(SpecError::new(ptr, "expected exactly one of per_atom, per_element, modular"));
    }
    let (key, val) = obj.iter().next().expect("one entry");
    let p = format!("{ptr}/{key}");
    match key.as_str() {
        "per_atom" => Ok(Weights::PerAtom(nat_list(val, &p)?)),
        "per_element" => Ok(Weights::PerElement(nat_list(val, &p)?)),
        _ => match val {
            Value::Bool(true) => Ok(Weights::Modular),
            _ => Err(SpecError::new(p, "expected true")),
        },
    }
}

fn family(v: &Value) -> Result<FamilySpec> {
    let ptr = "/family";
    let obj = object(v, ptr)?;
    let kind = required(obj, ptr, "kind")?;
    let kind = kind
        .as_str()
        .ok_or_else(|| SpecError::new("/family/kind", format!("expected a string, found {}", kind_of(kind))))?;
    match kind {
        "numerical" => {
            check_keys(obj, ptr, &["kind", "generators", "weights"])?;
            let generators = nat_list(required(obj, ptr, "generators")?, "/family/generators")?;
            let weights = optional(obj, ptr, "weights", weights)?;
            if let Some(Weights::PerElement(_) | Weights::Modular) = weights {
                return Err(SpecError::new(
                    "/family/weights",
                    "numerical families take per_atom weights only",
                ));
            }
            Ok(FamilySpec::Numerical { generators, weights })
        }
        "block" => {
            check_keys(obj, ptr, &["kind", "group", "support", "weights"])?;
            Ok(FamilySpec::Block {
                group: nat_list(required(obj, ptr, "group")?, "/family/group")?,
                support: optional(obj, ptr, "support", nat_lists)?,
                weights: optional(obj, ptr, "weights", weights)?,
            })
        }
        "sumset" => {
            check_keys(obj, ptr, &["kind", "generators"])?;
            Ok(FamilySpec::Sumset {
                generators: nat_lists(required(obj, ptr, "generators")?, "/family/generators")?,
            })
        }
        "explicit" => {
            check_keys(obj, ptr, &["kind", "sets"])?;
            Ok(FamilySpec::Explicit {
                sets: nat_lists(required(obj, ptr, "sets")?, "/family/sets")?,
            })
        }
        other => Err(SpecError::new(
            "/family/kind",
            format!("unknown kind {other:?}; expected numerical, block, sumset or explicit"),
        )),
    }
}

/// Parses and validates a JSON specification, including the semantic checks
/// performed while building its length system.
pub fn parse_spec(text: &str) -> Result<AnalysisSpec> {
    let root: Value = serde_json::from_str(text).map_err(|e| SpecError::new("", format!("malformed JSON: {e}")))?;
    let obj = object(&root, "")?;
    check_keys(obj, "", &["family", "tasks", "k_horizon", "value_horizon", "window", "i_max"])?;
    let family = family(required(obj, "", "family")?)?;
    let raw_tasks = array(required(obj, "", "tasks")?, "/tasks")?;
    if raw_tasks.is_empty() {
        return Err(SpecError::new("/tasks", "at least one task is required"));
    }
    let mut tasks = Vec::new();
    for (i, t) in raw_tasks.iter().enumerate() {
        let p = format!("/tasks/{i}");
        let name = t
            .as_str()
            .ok_or_else(|| SpecError::new(&p, format!("expected a string, found {}", kind_of(t))))?;
        let task = Task::parse(name).ok_or_else(|| {
            let names: Vec<&str> = Task::ALL.iter().map(|t| t.name()).collect();
            SpecError::new(&p, format!("unknown task {name:?}; expected one of {}", names.join(", ")))
        })?;
        if !tasks.contains(&task) {
            tasks.push(task);
        }
    }
    tasks.sort();
    let spec = AnalysisSpec {
        family,
        tasks,
        k_horizon: positive(required(obj, "", "k_horizon")?, "/k_horizon")?,
        value_horizon: optional(obj, "", "value_horizon", positive)?,
        window: optional(obj, "", "window", positive)?,
        i_max: optional(obj, "", "i_max", positive)?,
    };
    spec.validate()?;
    Ok(spec)
}

fn group_support(group: &[u64], support: &Option<Vec<Vec<u64>>>) -> Result<(FiniteAbelianGroup, Vec<Vec<u64>>)> {
    let g = FiniteAbelianGroup::new(group.to_vec()).map_err(|e| SpecError::new("/family/group", e.to_string()))?;
    let support = match support {
        Some(s) => s.clone(),
        None => (0..g.order()).filter(|&i| i != g.identity()).map(|i| g.coords(i)).collect(),
    };
    Ok((g, support))
}

impl AnalysisSpec {
    pub fn window(&self) -> u64 {
        self.window.unwrap_or(DEFAULT_WINDOW)
    }

    pub fn i_max(&self) -> usize {
        self.i_max.map_or(subadditive::invariants::DEFAULT_I_MAX, |i| i as usize)
    }

    pub fn has(&self, task: Task) -> bool {
        self.tasks.contains(&task)
    }

    /// Re-runs the semantic checks, e.g. after command-line overrides.
    pub fn validate(&self) -> Result<()> {
        if self.k_horizon == 0 {
            return Err(SpecError::new("/k_horizon", "must be positive"));
        }
        let sys = self.system()?;
        if self.tasks.iter().any(|t| t.needs_subadditive()) {
            sys.require_subadditive()
                .map_err(|e| SpecError::new("/family/sets", e.to_string()))?;
        }
        Ok(())
    }

    /// The length system at this spec's horizons.
    pub fn system(&self) -> Result<LengthSystem> {
        self.system_at(self.k_horizon)
    }

    pub fn system_at(&self, k_horizon: u64) -> Result<LengthSystem> {
        let mut config = SystemConfig::new(k_horizon);
        if let Some(v) = self.value_horizon {
            config.value_horizon = v;
        }
        let backend = match &self.family {
            FamilySpec::Numerical { generators, weights } => {
                let h = NumericalMonoid::new(generators.clone())
                    .map_err(|e| SpecError::new("/family/generators", e.to_string()))?;
                let sys = match weights {
                    None => WeightedAtomSystem::unit(AtomBase::Numerical(h)),
                    Some(Weights::PerAtom(w)) => WeightedAtomSystem::with_weights(AtomBase::Numerical(h), w.clone())
                        .map_err(|e| SpecError::new("/family/weights/per_atom", e.to_string()))?,
                    Some(_) => unreachable!("rejected while parsing"),
                };
                subadditive::Backend::Monoid(sys)
            }
            FamilySpec::Block { group, support, weights } => {
                let (g, support) = group_support(group, support)?;
                let b = BlockMonoid::new(g, &support).map_err(|e| SpecError::new("/family/support", e.to_string()))?;
                let sys = match weights {
                    None => WeightedAtomSystem::unit(AtomBase::Block(b)),
                    Some(Weights::PerAtom(w)) => WeightedAtomSystem::with_weights(AtomBase::Block(b), w.clone())
                        .map_err(|e| SpecError::new("/family/weights/per_atom", e.to_string()))?,
                    Some(Weights::PerElement(w)) => WeightedAtomSystem::from_element_weights(b, w)
                        .map_err(|e| SpecError::new("/family/weights/per_element", e.to_string()))?,
                    Some(Weights::Modular) => WeightedAtomSystem::modular(b),
                };
                subadditive::Backend::Monoid(sys)
            }
            FamilySpec::Sumset { generators } => {
                let gens = generators.iter().map(|g| g.iter().copied().collect::<NatSet>()).collect();
                let f = GeneratedFamily::new(gens).map_err(|e| SpecError::new("/family/generators", e.to_string()))?;
                subadditive::Backend::Generated(f)
            }
            FamilySpec::Explicit { sets } => {
                let members = sets.iter().map(|s| s.iter().copied().collect::<NatSet>()).collect();
                subadditive::Backend::Explicit(ExplicitFamily::new(members))
            }
        };
        Ok(LengthSystem::new(backend, config))
    }

    /// The raw description handed to the oracle, or `None` when the oracle
    /// cannot interpret the weights (per-atom weights on a block monoid).
    pub fn description(&self) -> Option<FamilyDescription> {
        Some(match &self.family {
            FamilySpec::Numerical { generators, weights } => FamilyDescription::Numerical {
                generators: generators.clone(),
                weights: match weights {
                    None => None,
                    Some(Weights::PerAtom(w)) => Some(w.clone()),
                    Some(_) => return None,
                },
            },
            FamilySpec::Block { group, support, weights } => {
                let (_, support) = group_support(group, support).ok()?;
                let element_weights = match weights {
                    None => None,
                    Some(Weights::PerElement(w)) => Some(w.clone()),
                    Some(Weights::Modular) => Some(support.iter().map(|c| c.iter().sum()).collect()),
                    Some(Weights::PerAtom(_)) => return None,
                };
                FamilyDescription::Block {
                    group: group.clone(),
                    support,
                    element_weights,
                }
            }
            FamilySpec::Sumset { generators } => FamilyDescription::Sumset {
                generators: generators.clone(),
            },
            FamilySpec::Explicit { sets } => FamilyDescription::Explicit { sets: sets.clone() },
        })
    }
}
