//! Discrete-time satiation dynamics.
//!
//! A [`ConditionFamily`] maps an internal level (fluid content, say) to a
//! condition: the base formula plus every "pickiness" conjunct whose threshold
//! the level has reached. Raising the level strengthens the condition, which
//! weakens the desire, until the circumstance no longer satisfies it.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::logic::{Circumstance, Enumerator, Formula, LogicError};
use crate::tendency::{ActionName, ActionTendency, TendencyKind};
use crate::trace::{Event, EventKind, Payload, Trace};
use crate::world::{UndefinedStep, World};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    World(#[from] UndefinedStep),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("family `{family}`: thresholds must be finite, non-negative and strictly increasing")]
    ThresholdOrder { family: String },
    #[error("family `{family}`: pickiness condition {index} is already entailed by the conditions below it")]
    NotStrengthening { family: String, index: usize },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("no level given for family `{0}`")]
    MissingLevel(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("level of `{family}` would become {level}; levels must be finite and non-negative")]
    InvalidLevel { family: String, level: f64 },
    #[error("satiation needs a positive delta, got {0}")]
    NonPositiveDelta(f64),
    #[error("max_steps must be positive")]
    ZeroSteps,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pickiness {
    pub threshold: f64,
    pub condition: Formula,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionFamily {
    pub id: String,
    pub quality: ActionName,
    pub base: Formula,
    pub pickiness: Vec<Pickiness>,
}

impl ConditionFamily {
    /// Validates that thresholds increase and that every pickiness conjunct
    /// genuinely narrows the condition below it.
    pub fn new(
        id: impl Into<String>,
        quality: ActionName,
        base: Formula,
        pickiness: Vec<(f64, Formula)>,
        enumerator: &Enumerator,
    ) -> Result<Self, DynamicsError> {
        let id = id.into();
        if !crate::logic::is_identifier(&id) {
            return Err(DynamicsError::InvalidIdentifier(id));
        }
        let mut prev: Option<f64> = None;
        for &(w, _) in &pickiness {
            if !w.is_finite() || w < 0.0 || prev.is_some_and(|p| w <= p) {
                return Err(DynamicsError::ThresholdOrder { family: id });
            }
            prev = Some(w);
        }
        let mut below = base.clone();
        for (index, (_, p)) in pickiness.iter().enumerate() {
            if enumerator.entails(&below, p)? {
                return Err(DynamicsError::NotStrengthening { family: id, index });
            }
            below = Formula::and(below, p.clone());
        }
        Ok(ConditionFamily {
            id,
            quality,
            base,
            pickiness: pickiness
                .into_iter()
                .map(|(threshold, condition)| Pickiness {
                    threshold,
                    condition,
                })
                .collect(),
        })
    }

    /// Pickiness conjuncts whose threshold is at or below `level`.
    pub fn in_force(&self, level: f64) -> impl Iterator<Item = &Formula> {
        self.pickiness
            .iter()
            .take_while(move |p| p.threshold <= level)
            .map(|p| &p.condition)
    }

    pub fn condition_at(&self, level: f64) -> Formula {
        Formula::conjunction(
            std::iter::once(self.base.clone()).chain(self.in_force(level).cloned()),
        )
    }

    pub fn instantiate(&self, level: f64) -> ActionTendency {
        ActionTendency {
            id: self.id.clone(),
            quality: self.quality.clone(),
            condition: self.condition_at(level),
            kind: TendencyKind::Emotion,
        }
    }
}

pub fn instantiate(f: &ConditionFamily, level: f64) -> ActionTendency {
    f.instantiate(level)
}

fn check_level(family: &str, level: f64) -> Result<(), DynamicsError> {
    if level.is_finite() && level >= 0.0 {
        Ok(())
    } else {
        Err(DynamicsError::InvalidLevel {
            family: family.to_owned(),
            level,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AgentState {
    pub levels: BTreeMap<String, f64>,
    pub families: Vec<ConditionFamily>,
    pub tendencies: Vec<ActionTendency>,
}

impl AgentState {
    pub fn new(
        families: Vec<ConditionFamily>,
        tendencies: Vec<ActionTendency>,
        levels: BTreeMap<String, f64>,
    ) -> Result<Self, DynamicsError> {
        let mut ids = BTreeSet::new();
        for id in families
            .iter()
            .map(|f| &f.id)
            .chain(tendencies.iter().map(|t| &t.id))
        {
            if !ids.insert(id.as_str()) {
                return Err(DynamicsError::DuplicateId(id.clone()));
            }
        }
        for f in &families {
            let level = *levels
                .get(&f.id)
                .ok_or_else(|| DynamicsError::MissingLevel(f.id.clone()))?;
            check_level(&f.id, level)?;
        }
        if let Some(stray) = levels
            .keys()
            .find(|k| !families.iter().any(|f| &f.id == *k))
        {
            return Err(DynamicsError::UnknownFamily(stray.clone()));
        }
        Ok(AgentState {
            levels,
            families,
            tendencies,
        })
    }

    pub fn level(&self, family: &str) -> Option<f64> {
        self.levels.get(family).copied()
    }

    /// Families instantiated at their current level plus plain tendencies,
    /// sorted by id.
    pub fn active_desires(&self) -> Vec<ActionTendency> {
        let mut out: Vec<ActionTendency> = self
            .families
            .iter()
            .map(|f| f.instantiate(self.levels[&f.id]))
            .chain(self.tendencies.iter().cloned())
            .collect();
        out.sort_by(|a, b| a.id.cmp(&b.id));
        out
    }
}

/// Level deltas applied to families whenever an action executes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Effects {
    by_action: BTreeMap<ActionName, BTreeMap<String, f64>>,
}

impl Effects {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, action: ActionName, family: impl Into<String>, delta: f64) {
        *self
            .by_action
            .entry(action)
            .or_default()
            .entry(family.into())
            .or_insert(0.0) += delta;
    }

    pub fn with(mut self, action: ActionName, family: impl Into<String>, delta: f64) -> Self {
        self.add(action, family, delta);
        self
    }

    pub fn for_action(&self, action: &ActionName) -> impl Iterator<Item = (&str, f64)> {
        self.by_action
            .get(action)
            .into_iter()
            .flat_map(|m| m.iter().map(|(k, v)| (k.as_str(), *v)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ActionName, &str, f64)> {
        self.by_action
            .iter()
            .flat_map(|(a, m)| m.iter().map(move |(f, d)| (a, f.as_str(), *d)))
    }
}

/// Advances the agent by one step under a frozen circumstance.
///
/// All desires are tested against the levels at the start of the step, in id
/// order. Firing desires execute their action once; the resulting level
/// deltas are summed per family and applied at the end of the step.
pub fn step(
    state: &AgentState,
    time: u64,
    c: &Circumstance,
    effects: &Effects,
) -> Result<(AgentState, Vec<Event>), DynamicsError> {
    let desires = state.active_desires();
    let mut tested = Vec::new();
    let mut firing = Vec::new();
    for d in &desires {
        let fires = d.fires(c)?;
        let atoms = d.condition.atoms();
        tested.push(Event::new(
            time,
            EventKind::Tested,
            &d.id,
            Payload::Test {
                condition: d.condition.clone(),
                facts: c.restrict(atoms.iter().map(String::as_str)),
            },
        ));
        if fires {
            firing.push(d);
        }
    }

    let mut events = tested;
    for d in &firing {
        events.push(Event::new(
            time,
            EventKind::Fired,
            &d.id,
            Payload::Desire {
                quality: d.quality.clone(),
                condition: d.condition.clone(),
            },
        ));
    }
    let mut deltas: BTreeMap<String, f64> = BTreeMap::new();
    for d in &firing {
        events.push(Event::new(
            time,
            EventKind::ActionExecuted,
            &d.id,
            Payload::Action {
                quality: d.quality.clone(),
            },
        ));
        for (family, delta) in effects.for_action(&d.quality) {
            if !state.levels.contains_key(family) {
                return Err(DynamicsError::UnknownFamily(family.to_owned()));
            }
            *deltas.entry(family.to_owned()).or_insert(0.0) += delta;
        }
    }

    let mut next = state.clone();
    for (family, delta) in deltas {
        let from = state.levels[&family];
        let to = from + delta;
        check_level(&family, to)?;
        next.levels.insert(family.clone(), to);
        events.push(Event::new(
            time,
            EventKind::LevelChanged,
            family,
            Payload::Level { from, to },
        ));
    }
    Ok((next, events))
}

/// Runs `steps` consecutive steps against a time-varying world.
pub fn simulate(
    state: &AgentState,
    world: &World,
    effects: &Effects,
    steps: u64,
) -> Result<Trace, DynamicsError> {
    let mut current = state.clone();
    let mut events = Vec::new();
    for t in 0..steps {
        let (next, evs) = step(&current, t, world.at(t)?, effects)?;
        current = next;
        events.extend(evs);
    }
    Ok(Trace {
        events,
        final_state: current,
        truncated: false,
    })
}

/// Repeats the family's action under a fixed circumstance until its
/// instantiated condition stops firing, or until `max_steps` steps have all
/// fired, in which case the trace is flagged truncated.
pub fn run_satiation(
    family: &ConditionFamily,
    c: &Circumstance,
    w0: f64,
    delta: f64,
    max_steps: u64,
) -> Result<Trace, DynamicsError> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(DynamicsError::NonPositiveDelta(delta));
    }
    if max_steps == 0 {
        return Err(DynamicsError::ZeroSteps);
    }
    let mut state = AgentState::new(
        vec![family.clone()],
        Vec::new(),
        BTreeMap::from([(family.id.clone(), w0)]),
    )?;
    let effects = Effects::new().with(family.quality.clone(), family.id.clone(), delta);
    let mut events = Vec::new();
    for t in 0..max_steps {
        let (next, evs) = step(&state, t, c, &effects)?;
        let fired = evs.iter().any(|e| e.kind == EventKind::Fired);
        state = next;
        events.extend(evs);
        if !fired {
            return Ok(Trace {
                events,
                final_state: state,
                truncated: false,
            });
        }
    }
    Ok(Trace {
        events,
        final_state: state,
        truncated: true,
    })
}

/// The distinct conditions tested for `subject`, in order of first appearance.
pub fn condition_chain(trace: &Trace, subject: &str) -> Vec<Formula> {
    let mut chain: Vec<Formula> = Vec::new();
    for e in &trace.events {
        if e.kind == EventKind::Tested && e.subject == subject {
            if let Some(c) = e.condition() {
                if chain.last() != Some(c) {
                    chain.push(c.clone());
                }
            }
        }
    }
    chain
}
