//! Scenario files: a sectioned text format declaring atoms, tendencies,
//! condition families, wishes, regularities, a world timeline and the
//! directives to run against them.
//!
//! ```text
//! scenario satiation
//!
//! [atoms]
//! water_at_hand still_parched room_in_stomach
//!
//! [families]
//! thirst: water_at_hand => drink
//!   at 2: still_parched
//!   at 4: room_in_stomach
//!
//! [effects]
//! drink: thirst +1
//!
//! [world]
//! t=0 water_at_hand=1
//!
//! [directives]
//! satiate thirst
//! pleasure thirst
//! ```
//!
//! See `docs/scenario-format.md` for every section and directive.

mod run;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::dynamics::{ConditionFamily, Effects};
use crate::logic::{is_identifier, parse_formula, Circumstance, Enumerator, Formula};
use crate::regularity::{parse_observation_lines, Observation, Regularity};
use crate::tendency::{ActionName, ActionTendency, TendencyKind};
use crate::trace::Trace;
use crate::wish::Wish;
use crate::world::World;

pub use run::{run_scenario, Artifact, RunConfig, RunOutput};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ScenarioError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError {
        line: Some(line),
        message: message.into(),
    })
}

/// A tendency, or a family instantiated at a level (its current one when
/// `level` is `None`).
#[derive(Debug, Clone, PartialEq)]
pub enum DesireRef {
    Tendency(String),
    Family { id: String, level: Option<f64> },
}

impl fmt::Display for DesireRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesireRef::Tendency(id) | DesireRef::Family { id, level: None } => f.write_str(id),
            DesireRef::Family {
                id,
                level: Some(level),
            } => write!(f, "{id}@{level}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DirectiveKind {
    Compare(DesireRef, DesireRef),
    Fires {
        desire: DesireRef,
        time: u64,
    },
    Satisfy {
        desire: DesireRef,
        time: u64,
    },
    /// Empty means every tendency and every family at its level.
    Laws(Vec<DesireRef>),
    Satiate {
        family: String,
        name: String,
    },
    Simulate {
        steps: u64,
        name: String,
    },
    Pleasure {
        trace: String,
    },
    Pain {
        time: u64,
    },
    Sublime {
        trace: String,
    },
    Wait {
        wish: String,
        name: String,
    },
    CompareWishes(String, String),
    Observe {
        regularity: String,
        log: String,
    },
    Holds {
        regularity: String,
        log: String,
        from: u64,
        to: u64,
    },
    CompareForces(String, String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Directive {
    pub line: usize,
    pub text: String,
    pub kind: DirectiveKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub atom_universe: Vec<String>,
    pub tendencies: Vec<ActionTendency>,
    pub families: Vec<ConditionFamily>,
    pub levels: BTreeMap<String, f64>,
    pub wishes: Vec<Wish>,
    pub regularities: BTreeMap<String, Regularity>,
    pub observations: BTreeMap<String, Vec<Observation>>,
    pub traces: BTreeMap<String, Trace>,
    pub world: World,
    pub effects: Effects,
    pub directives: Vec<Directive>,
}

pub fn load_scenario(path: &Path, enumerator: &Enumerator) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError {
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Scenario::parse(&text, enumerator)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Atoms,
    Tendencies,
    Families,
    Levels,
    Effects,
    World,
    Wishes,
    Regularities,
    Observations,
    Trace,
    Directives,
}

struct RawFamily {
    line: usize,
    id: String,
    base: Formula,
    quality: ActionName,
    pickiness: Vec<(f64, Formula)>,
}

#[derive(Default)]
struct Builder {
    name: Option<String>,
    atoms: Vec<String>,
    atom_set: BTreeSet<String>,
    tendencies: Vec<ActionTendency>,
    families: Vec<RawFamily>,
    levels: Vec<(usize, String, f64)>,
    effects: Vec<(usize, ActionName, String, f64)>,
    world: Vec<(usize, u64, Circumstance)>,
    wishes: Vec<(usize, Wish)>,
    regularities: BTreeMap<String, Regularity>,
    observations: BTreeMap<String, Vec<(usize, String)>>,
    traces: BTreeMap<String, Vec<(usize, String)>>,
    directives: Vec<(usize, String)>,
    ids: BTreeSet<String>,
}

fn parse_f(line: usize, text: &str) -> Result<Formula, ScenarioError> {
    parse_formula(text.trim()).or_else(|e| err(line, format!("in `{}`: {e}", text.trim())))
}

fn ident(line: usize, text: &str, what: &str) -> Result<String, ScenarioError> {
    let text = text.trim();
    if is_identifier(text) {
        Ok(text.to_owned())
    } else {
        err(line, format!("invalid {what} `{text}`"))
    }
}

fn action(line: usize, text: &str) -> Result<ActionName, ScenarioError> {
    ActionName::new(text.trim()).or_else(|e| err(line, e.to_string()))
}

fn number(line: usize, text: &str) -> Result<f64, ScenarioError> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => err(line, format!("expected a number, found `{}`", text.trim())),
    }
}

fn step_number(line: usize, text: &str) -> Result<u64, ScenarioError> {
    text.trim().parse::<u64>().or_else(|_| {
        err(
            line,
            format!("expected a step number, found `{}`", text.trim()),
        )
    })
}

/// `<head>: <formula> => <action>`
fn split_rule(line: usize, text: &str) -> Result<(String, String, String), ScenarioError> {
    let Some((head, rest)) = text.split_once(':') else {
        return err(line, "expected `<id>: <condition> => <action>`");
    };
    let Some((cond, act)) = rest.rsplit_once("=>") else {
        return err(line, "expected `=> <action>`");
    };
    Ok((
        head.trim().to_owned(),
        cond.trim().to_owned(),
        act.trim().to_owned(),
    ))
}

impl Builder {
    fn claim_id(&mut self, line: usize, id: &str) -> Result<(), ScenarioError> {
        if !self.ids.insert(id.to_owned()) {
            return err(line, format!("duplicate id `{id}`"));
        }
        Ok(())
    }

    fn check_atoms(&self, line: usize, f: &Formula) -> Result<(), ScenarioError> {
        if let Some(a) = f.atoms().into_iter().find(|a| !self.atom_set.contains(a)) {
            return err(line, format!("undeclared atom `{a}`"));
        }
        Ok(())
    }

    fn check_facts(&self, line: usize, c: &Circumstance) -> Result<(), ScenarioError> {
        if let Some(a) = c.universe().find(|a| !self.atom_set.contains(*a)) {
            return err(line, format!("undeclared atom `{a}`"));
        }
        Ok(())
    }

    fn atoms_line(&mut self, line: usize, text: &str) -> Result<(), ScenarioError> {
        for name in text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
        {
            let name = ident(line, name, "atom")?;
            if !self.atom_set.insert(name.clone()) {
                return err(line, format!("atom `{name}` declared twice"));
            }
            self.atoms.push(name);
        }
        Ok(())
    }

    fn tendency_line(&mut self, line: usize, text: &str) -> Result<(), ScenarioError> {
        let (head, cond, act) = split_rule(line, text)?;
        let (kind, id) = match head.split_once(char::is_whitespace) {
            Some(("force", id)) => (TendencyKind::Force, id.trim()),
            Some(("emotion", id)) => (TendencyKind::Emotion, id.trim()),
            Some((other, _)) => return err(line, format!("unknown tendency kind `{other}`")),
            None => (TendencyKind::Emotion, head.as_str()),
        };
        let id = ident(line, id, "tendency id")?;
        let condition = parse_f(line, &cond)?;
        self.check_atoms(line, &condition)?;
        let quality = action(line, &act)?;
        self.claim_id(line, &id)?;
        let t = ActionTendency::new(id, quality, condition, kind)
            .or_else(|e| err(line, e.to_string()))?;
        self.tendencies.push(t);
        Ok(())
    }

    fn family_line(&mut self, line: usize, text: &str) -> Result<(), ScenarioError> {
        if let Some(rest) = text.strip_prefix("at ") {
            let Some(family) = self.families.last_mut() else {
                return err(line, "`at` line before any family");
            };
            let Some((level, cond)) = rest.split_once(':') else {
                return err(line, "expected `at <level>: <condition>`");
            };
            let level = number(line, level)?;
            let cond = parse_f(line, cond)?;
            family.pickiness.push((level, cond));
            let cond = &self
                .families
                .last()
                .expect("family")
                .pickiness
                .last()
                .expect("entry")
                .1;
            return self.check_atoms(line, cond);
        }
        let (id, cond, act) = split_rule(line, text)?;
        let id = ident(line, &id, "family id")?;
        let base = parse_f(line, &cond)?;
        self.check_atoms(line, &base)?;
        let quality = action(line, &act)?;
        self.claim_id(line, &id)?;
        self.families.push(RawFamily {
            line,
            id,
            base,
            quality,
            pickiness: Vec::new(),
        });
        Ok(())
    }

    fn level_line(&mut self, line: usize, text: &str) -> Result<(), ScenarioError> {
        let Some((id, value)) = text.split_once('=') else {
            return err(line, "expected `<family> = <level>`");
        };
        let id = ident(line, id, "family id")?;
        let value = number(line, value)?;
        self.levels.push((line, id, value));
        Ok(())
    }

    fn effect_line(&mut self, line: usize, text: &str) -> Result<(), ScenarioError> {
        let Some((act, rest)) = text.split_once(':') else {
            return err(line, "expected `<action>: <family> <delta>, ...`");
        };
        let act = action(line, act)?;
        for part in rest.split(',') {
            let mut words = part.split_whitespace();
            let (Some(family), Some(delta), None) = (words.next(), words.next(), words.next())
            else {
                return err(
                    line,
                    format!("expected `<family> <delta>`, found `{}`", part.trim()),
                );
            };
            let family = ident(line, family, "family id")?;
            let delta = number(line, delta)?;
            self.effects.push((line, act.clone(), family, delta));
        }
        Ok(())
    }

    fn world_line(&mut self, line: usize, text: &str) -> Result<(), ScenarioError> {
        let mut words = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|w| !w.is_empty());
        let Some(time) = words.next().and_then(|w| w.strip_prefix("t=")) else {
            return err(line, "expected `t=<step> atom=0|1 ...`");
        };
        let time = step_number(line, time)?;
        let facts = crate::trace::parse_facts(&words.collect::<Vec<_>>().join(","))
            .or_else(|m| err(line, m))?;
        self.check_facts(line, &facts)?;
        if self.world.iter().any(|(_, t, _)| *t == time) {
            return err(line, format!("step {time} listed twice"));
        }
        self.world.push((line, time, facts));
        Ok(())
    }

    fn wish_line(
        &mut self,
        line: usize,
        text: &str,
        enumerator: &Enumerator,
    ) -> Result<(), ScenarioError> {
        let Some((id, rest)) = text.split_once(':') else {
            return err(
                line,
                "expected `<id>: goal=<formula>; stop=<formula>; action=<name>; period=<n>`",
            );
        };
        let id = ident(line, id, "wish id")?;
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for part in rest.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let Some((key, value)) = part.split_once('=') else {
                return err(line, format!("expected `key=value`, found `{part}`"));
            };
            let key = key.trim();
            if !["goal", "stop", "action", "period"].contains(&key) {
                return err(line, format!("unknown wish field `{key}`"));
            }
            if fields.insert(key, value.trim()).is_some() {
                return err(line, format!("wish field `{key}` given twice"));
            }
        }
        let Some(goal) = fields.get("goal") else {
            return err(line, "wish needs `goal=<formula>`");
        };
        let goal = parse_f(line, goal)?;
        self.check_atoms(line, &goal)?;
        let stop = fields.get("stop").map(|s| parse_f(line, s)).transpose()?;
        if let Some(s) = &stop {
            self.check_atoms(line, s)?;
        }
        let on_stop = action(
            line,
            fields.get("action").copied().unwrap_or("stop_checking"),
        )?;
        let period = match fields.get("period") {
            Some(p) => step_number(line, p)?,
            None => 1,
        };
        if self.wishes.iter().any(|(_, w)| w.id == id) {
            return err(line, format!("duplicate wish `{id}`"));
        }
        let wish = Wish::new(id, goal, stop, on_stop, period, enumerator)
            .or_else(|e| err(line, e.to_string()))?;
        self.wishes.push((line, wish));
        Ok(())
    }

    fn regularity_line(&mut self, line: usize, text: &str) -> Result<(), ScenarioError> {
        let (id, cond, outcome) = split_rule(line, text)?;
        let id = ident(line, &id, "regularity id")?;
        let trigger = parse_f(line, &cond)?;
        self.check_atoms(line, &trigger)?;
        let outcome = action(line, &outcome)?;
        if self.regularities.contains_key(&id) {
            return err(line, format!("duplicate regularity `{id}`"));
        }
        self.regularities
            .insert(id, Regularity::new(trigger, outcome));
        Ok(())
    }
}

fn desire_ref(line: usize, word: &str) -> Result<DesireRef, ScenarioError> {
    match word.split_once('@') {
        Some((id, level)) => Ok(DesireRef::Family {
            id: ident(line, id, "family id")?,
            level: Some(number(line, level)?),
        }),
        None => Ok(DesireRef::Tendency(ident(line, word, "id")?)),
    }
}

fn time_option(line: usize, words: &[&str]) -> Result<u64, ScenarioError> {
    match words {
        [] => Ok(0),
        [w] => match w.strip_prefix("t=") {
            Some(t) => step_number(line, t),
            None => err(line, format!("expected `t=<step>`, found `{w}`")),
        },
        _ => err(line, "too many arguments"),
    }
}

/// Splits an optional trailing `as <name>`.
fn named<'a>(
    line: usize,
    words: &'a [&'a str],
) -> Result<(&'a [&'a str], Option<String>), ScenarioError> {
    match words {
        [rest @ .., "as", name] => Ok((rest, Some(ident(line, name, "trace name")?))),
        _ => Ok((words, None)),
    }
}

fn parse_directive(line: usize, text: &str) -> Result<DirectiveKind, ScenarioError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let (verb, args) = words.split_first().expect("non-empty line");
    let id = |w: &str| ident(line, w, "id");
    let kind = match (*verb, args) {
        ("compare", [a, b]) => DirectiveKind::Compare(desire_ref(line, a)?, desire_ref(line, b)?),
        ("fires", [d, rest @ ..]) => DirectiveKind::Fires {
            desire: desire_ref(line, d)?,
            time: time_option(line, rest)?,
        },
        ("satisfy", [d, rest @ ..]) => DirectiveKind::Satisfy {
            desire: desire_ref(line, d)?,
            time: time_option(line, rest)?,
        },
        ("laws", refs) => DirectiveKind::Laws(
            refs.iter()
                .map(|r| desire_ref(line, r))
                .collect::<Result<_, _>>()?,
        ),
        ("satiate", args) => match named(line, args)? {
            ([family], name) => {
                let family = id(family)?;
                DirectiveKind::Satiate {
                    name: name.unwrap_or_else(|| family.clone()),
                    family,
                }
            }
            _ => return err(line, "expected `satiate <family> [as <name>]`"),
        },
        ("simulate", args) => match named(line, args)? {
            ([steps], name) => DirectiveKind::Simulate {
                steps: step_number(line, steps)?,
                name: name.unwrap_or_else(|| "agent".to_owned()),
            },
            _ => return err(line, "expected `simulate <steps> [as <name>]`"),
        },
        ("pleasure", [t]) => DirectiveKind::Pleasure { trace: id(t)? },
        ("pain", rest) => DirectiveKind::Pain {
            time: time_option(line, rest)?,
        },
        ("sublime", [t]) => DirectiveKind::Sublime { trace: id(t)? },
        ("wait", args) => match named(line, args)? {
            ([wish], name) => {
                let wish = id(wish)?;
                DirectiveKind::Wait {
                    name: name.unwrap_or_else(|| wish.clone()),
                    wish,
                }
            }
            _ => return err(line, "expected `wait <wish> [as <name>]`"),
        },
        ("compare_wishes", [a, b]) => DirectiveKind::CompareWishes(id(a)?, id(b)?),
        ("observe", [r, l]) => DirectiveKind::Observe {
            regularity: id(r)?,
            log: id(l)?,
        },
        ("holds", [r, l, from, to]) => DirectiveKind::Holds {
            regularity: id(r)?,
            log: id(l)?,
            from: step_number(line, from)?,
            to: step_number(line, to)?,
        },
        ("compare_forces", [a, b]) => DirectiveKind::CompareForces(id(a)?, id(b)?),
        (
            "compare" | "fires" | "satisfy" | "pleasure" | "sublime" | "compare_wishes" | "observe"
            | "holds" | "compare_forces",
            _,
        ) => return err(line, format!("wrong number of arguments for `{verb}`")),
        (other, _) => return err(line, format!("unknown directive `{other}`")),
    };
    Ok(kind)
}

impl Scenario {
    pub fn parse(text: &str, enumerator: &Enumerator) -> Result<Scenario, ScenarioError> {
        let mut b = Builder::default();
        let mut section: Option<(Section, Option<String>)> = None;
        let mut seen: BTreeSet<(Section, Option<String>)> = BTreeSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if let Some(header) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                if b.name.is_none() {
                    return err(line, "expected `scenario <name>` before any section");
                }
                let mut words = header.split_whitespace();
                let kind = match words.next() {
                    Some("atoms") => Section::Atoms,
                    Some("tendencies") => Section::Tendencies,
                    Some("families") => Section::Families,
                    Some("levels") => Section::Levels,
                    Some("effects") => Section::Effects,
                    Some("world") => Section::World,
                    Some("wishes") => Section::Wishes,
                    Some("regularities") => Section::Regularities,
                    Some("observations") => Section::Observations,
                    Some("trace") => Section::Trace,
                    Some("directives") => Section::Directives,
                    _ => return err(line, format!("unknown section `[{header}]`")),
                };
                let label = words
                    .next()
                    .map(|w| ident(line, w, "section name"))
                    .transpose()?;
                if words.next().is_some() {
                    return err(line, format!("malformed section header `[{header}]`"));
                }
                let needs_label = matches!(kind, Section::Observations | Section::Trace);
                if needs_label != label.is_some() {
                    return err(
                        line,
                        format!(
                            "section `[{header}]` takes {} name",
                            if needs_label { "a" } else { "no" }
                        ),
                    );
                }
                if !seen.insert((kind, label.clone())) {
                    return err(line, format!("section `[{header}]` appears twice"));
                }
                if let Some(label) = &label {
                    let store = if kind == Section::Trace {
                        &mut b.traces
                    } else {
                        &mut b.observations
                    };
                    store.insert(label.clone(), Vec::new());
                }
                section = Some((kind, label));
                continue;
            }
            let Some((kind, label)) = &section else {
                if let Some(name) = text.strip_prefix("scenario ") {
                    if b.name.is_some() {
                        return err(line, "scenario name given twice");
                    }
                    b.name = Some(name.trim().to_owned());
                    continue;
                }
                return err(line, "expected `scenario <name>` or a section header");
            };
            match kind {
                Section::Atoms => b.atoms_line(line, text)?,
                Section::Tendencies => b.tendency_line(line, text)?,
                Section::Families => b.family_line(line, text)?,
                Section::Levels => b.level_line(line, text)?,
                Section::Effects => b.effect_line(line, text)?,
                Section::World => b.world_line(line, text)?,
                Section::Wishes => b.wish_line(line, text, enumerator)?,
                Section::Regularities => b.regularity_line(line, text)?,
                Section::Observations => {
                    let label = label.clone().expect("labelled");
                    b.observations
                        .get_mut(&label)
                        .expect("opened")
                        .push((line, text.to_owned()));
                }
                Section::Trace => {
                    let label = label.clone().expect("labelled");
                    b.traces
                        .get_mut(&label)
                        .expect("opened")
                        .push((line, text.to_owned()));
                }
                Section::Directives => b.directives.push((line, text.to_owned())),
            }
        }
        b.finish(enumerator)
    }
}

impl Builder {
    fn finish(self, enumerator: &Enumerator) -> Result<Scenario, ScenarioError> {
        let Some(name) = self.name.clone() else {
            return Err(ScenarioError {
                line: None,
                message: "missing `scenario <name>` line".into(),
            });
        };

        let mut families = Vec::new();
        for raw in &self.families {
            let fam = ConditionFamily::new(
                raw.id.clone(),
                raw.quality.clone(),
                raw.base.clone(),
                raw.pickiness.clone(),
                enumerator,
            )
            .or_else(|e| err(raw.line, e.to_string()))?;
            families.push(fam);
        }
        let family_ids: BTreeSet<&str> = families.iter().map(|f| f.id.as_str()).collect();

        let mut levels: BTreeMap<String, f64> =
            families.iter().map(|f| (f.id.clone(), 0.0)).collect();
        let mut level_set = BTreeSet::new();
        for (line, id, value) in &self.levels {
            if !family_ids.contains(id.as_str()) {
                return err(*line, format!("unknown family `{id}`"));
            }
            if !level_set.insert(id) {
                return err(*line, format!("level of `{id}` given twice"));
            }
            if *value < 0.0 {
                return err(*line, format!("level of `{id}` must be non-negative"));
            }
            levels.insert(id.clone(), *value);
        }

        let mut effects = Effects::new();
        for (line, act, family, delta) in &self.effects {
            if !family_ids.contains(family.as_str()) {
                return err(*line, format!("unknown family `{family}`"));
            }
            effects.add(act.clone(), family.clone(), *delta);
        }

        let mut world = World::new();
        let mut timeline = self.world.clone();
        timeline.sort_by_key(|(_, t, _)| *t);
        let mut current = Circumstance::all_false(self.atoms.iter().map(String::as_str));
        world.insert(0, current.clone());
        for (_, t, facts) in timeline {
            for (atom, value) in facts.iter() {
                current.set(atom, value);
            }
            world.insert(t, current.clone());
        }

        let mut observations = BTreeMap::new();
        for (label, lines) in &self.observations {
            let obs = parse_observation_lines(lines.iter().map(|(l, t)| (*l, t.as_str())))
                .map_err(|e| match e {
                    crate::regularity::RegularityError::Parse { line, message } => ScenarioError {
                        line: Some(line),
                        message,
                    },
                    other => ScenarioError {
                        line: None,
                        message: other.to_string(),
                    },
                })?;
            for (o, (line, _)) in obs.iter().zip(lines) {
                self.check_facts(*line, &o.trigger_facts)?;
            }
            observations.insert(label.clone(), obs);
        }

        let mut traces = BTreeMap::new();
        for (label, lines) in &self.traces {
            let trace =
                Trace::parse_lines(lines.iter().map(|(l, t)| (*l, t.as_str()))).map_err(|e| {
                    ScenarioError {
                        line: Some(e.line),
                        message: e.message,
                    }
                })?;
            for (e, (line, _)) in trace
                .events
                .iter()
                .zip(lines.iter().filter(|(_, t)| !t.starts_with('#')))
            {
                if let Some(c) = e.condition() {
                    self.check_atoms(*line, c)?;
                }
            }
            traces.insert(label.clone(), trace);
        }

        let wishes: Vec<Wish> = self.wishes.iter().map(|(_, w)| w.clone()).collect();
        let wish_ids: BTreeSet<&str> = wishes.iter().map(|w| w.id.as_str()).collect();
        let tendency_ids: BTreeSet<&str> = self.tendencies.iter().map(|t| t.id.as_str()).collect();

        let mut known_traces: BTreeSet<String> = traces.keys().cloned().collect();
        let mut directives = Vec::new();
        for (line, text) in &self.directives {
            let line = *line;
            let kind = parse_directive(line, text)?;
            let check_ref = |r: &DesireRef| -> Result<(), ScenarioError> {
                match r {
                    DesireRef::Tendency(id)
                        if tendency_ids.contains(id.as_str())
                            || family_ids.contains(id.as_str()) =>
                    {
                        Ok(())
                    }
                    DesireRef::Family { id, .. } if family_ids.contains(id.as_str()) => Ok(()),
                    DesireRef::Family { id, .. } => err(line, format!("unknown family `{id}`")),
                    DesireRef::Tendency(id) => err(line, format!("unknown tendency `{id}`")),
                }
            };
            let check_in =
                |set: &BTreeSet<&str>, id: &str, what: &str| -> Result<(), ScenarioError> {
                    if set.contains(id) {
                        Ok(())
                    } else {
                        err(line, format!("unknown {what} `{id}`"))
                    }
                };
            let check_reg = |id: &str| {
                if self.regularities.contains_key(id) {
                    Ok(())
                } else {
                    err(line, format!("unknown regularity `{id}`"))
                }
            };
            let check_log = |id: &str| {
                if observations.contains_key(id) {
                    Ok(())
                } else {
                    err(line, format!("unknown observation log `{id}`"))
                }
            };
            match &kind {
                DirectiveKind::Compare(a, b) => {
                    check_ref(a)?;
                    check_ref(b)?;
                }
                DirectiveKind::Fires { desire, .. } | DirectiveKind::Satisfy { desire, .. } => {
                    check_ref(desire)?
                }
                DirectiveKind::Laws(refs) => {
                    for r in refs {
                        check_ref(r)?;
                    }
                }
                DirectiveKind::Satiate { family, name } => {
                    check_in(&family_ids, family, "family")?;
                    if !known_traces.insert(name.clone()) {
                        return err(line, format!("trace `{name}` already exists"));
                    }
                }
                DirectiveKind::Simulate { name, .. } => {
                    if !known_traces.insert(name.clone()) {
                        return err(line, format!("trace `{name}` already exists"));
                    }
                }
                DirectiveKind::Wait { wish, name } => {
                    check_in(&wish_ids, wish, "wish")?;
                    if !known_traces.insert(name.clone()) {
                        return err(line, format!("trace `{name}` already exists"));
                    }
                }
                DirectiveKind::Pleasure { trace } | DirectiveKind::Sublime { trace } => {
                    if !known_traces.contains(trace) {
                        return err(line, format!("unknown trace `{trace}`"));
                    }
                }
                DirectiveKind::Pain { .. } => {}
                DirectiveKind::CompareWishes(a, b) => {
                    check_in(&wish_ids, a, "wish")?;
                    check_in(&wish_ids, b, "wish")?;
                }
                DirectiveKind::Observe { regularity, log }
                | DirectiveKind::Holds {
                    regularity, log, ..
                } => {
                    check_reg(regularity)?;
                    check_log(log)?;
                }
                DirectiveKind::CompareForces(a, b) => {
                    check_reg(a)?;
                    check_reg(b)?;
                }
            }
            directives.push(Directive {
                line,
                text: text.clone(),
                kind,
            });
        }

        Ok(Scenario {
            name,
            atom_universe: self.atoms,
            tendencies: self.tendencies,
            families,
            levels,
            wishes,
            regularities: self.regularities,
            observations,
            traces,
            world,
            effects,
            directives,
        })
    }
}
