//! Action tendencies: a condition paired with the action that happens
//! whenever the condition holds.

use std::fmt;

use thiserror::Error;

use crate::logic::{is_identifier, Circumstance, Enumerator, Formula, LogicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TendencyError {
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// The action part of a tendency; it fixes the tendency's quality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionName(String);

impl ActionName {
    pub fn new(name: impl Into<String>) -> Result<Self, TendencyError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(ActionName(name))
        } else {
            Err(TendencyError::InvalidIdentifier(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ActionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Provenance label only. Forces and emotions share one schema and every
/// operation treats them identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TendencyKind {
    #[default]
    Emotion,
    Force,
}

impl fmt::Display for TendencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TendencyKind::Emotion => "emotion",
            TendencyKind::Force => "force",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionTendency {
    pub id: String,
    pub quality: ActionName,
    pub condition: Formula,
    pub kind: TendencyKind,
}

impl ActionTendency {
    /// Builds a tendency without the satisfiability check done by [`make_tendency`].
    pub fn new(
        id: impl Into<String>,
        quality: ActionName,
        condition: Formula,
        kind: TendencyKind,
    ) -> Result<Self, TendencyError> {
        let id = id.into();
        if !is_identifier(&id) {
            return Err(TendencyError::InvalidIdentifier(id));
        }
        Ok(ActionTendency {
            id,
            quality,
            condition,
            kind,
        })
    }

    pub fn fires(&self, c: &Circumstance) -> Result<bool, LogicError> {
        crate::logic::evaluate(&self.condition, c)
    }
}

impl fmt::Display for ActionTendency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} => {}", self.id, self.condition, self.quality)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TendencyWarning {
    /// The condition is unsatisfiable, so the tendency can never fire.
    NeverFires,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MadeTendency {
    pub tendency: ActionTendency,
    pub warning: Option<TendencyWarning>,
}

pub fn make_tendency(
    id: &str,
    quality: &str,
    condition: Formula,
    kind: TendencyKind,
    enumerator: &Enumerator,
) -> Result<MadeTendency, TendencyError> {
    let quality = ActionName::new(quality)?;
    let tendency = ActionTendency::new(id, quality, condition, kind)?;
    let warning = if enumerator.satisfiable(&tendency.condition)? {
        None
    } else {
        Some(TendencyWarning::NeverFires)
    };
    Ok(MadeTendency { tendency, warning })
}

pub fn fires(t: &ActionTendency, c: &Circumstance) -> Result<bool, LogicError> {
    t.fires(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn make(id: &str, quality: &str, cond: &str, kind: TendencyKind) -> MadeTendency {
        make_tendency(
            id,
            quality,
            parse_formula(cond).unwrap(),
            kind,
            &Enumerator::default(),
        )
        .unwrap()
    }

    #[test]
    fn thirst_fires_whenever_water_is_at_hand() {
        let m = make("thirst", "drink", "water_at_hand", TendencyKind::Emotion);
        assert_eq!(m.warning, None);
        let wet = Circumstance::new().with("water_at_hand", true);
        let dry = Circumstance::new().with("water_at_hand", false);
        assert!(fires(&m.tendency, &wet).unwrap());
        assert!(!fires(&m.tendency, &dry).unwrap());
    }

    #[test]
    fn contradiction_is_flagged() {
        let m = make("dead", "drink", "C1 & !C1", TendencyKind::Emotion);
        assert_eq!(m.warning, Some(TendencyWarning::NeverFires));
    }

    #[test]
    fn gravity_is_a_force() {
        let m = make("gravity", "falls", "!support", TendencyKind::Force);
        assert_eq!(m.tendency.kind, TendencyKind::Force);
        assert!(m
            .tendency
            .fires(&Circumstance::new().with("support", false))
            .unwrap());
    }

    #[test]
    fn invalid_identifiers() {
        let e = Enumerator::default();
        assert_eq!(
            make_tendency("9x", "eat", Formula::True, TendencyKind::Emotion, &e),
            Err(TendencyError::InvalidIdentifier("9x".into()))
        );
        assert_eq!(
            make_tendency("x", "eat now", Formula::True, TendencyKind::Emotion, &e),
            Err(TendencyError::InvalidIdentifier("eat now".into()))
        );
    }

    #[test]
    fn horse_runs_when_the_reins_are_cut() {
        let horse = make("horse", "run_forward", "reins_cut", TendencyKind::Force).tendency;
        assert!(horse
            .fires(&Circumstance::new().with("reins_cut", true))
            .unwrap());
    }

    #[test]
    fn hunger_waits_while_on_a_diet() {
        let hunger = make(
            "hunger",
            "eat",
            "food_at_hand & !on_diet",
            TendencyKind::Emotion,
        );
        let c = Circumstance::new()
            .with("food_at_hand", true)
            .with("on_diet", true);
        assert!(!hunger.tendency.fires(&c).unwrap());
    }

    #[test]
    fn firing_needs_every_condition_atom() {
        let hunger = make(
            "hunger",
            "eat",
            "food_at_hand & !on_diet",
            TendencyKind::Emotion,
        );
        let c = Circumstance::new().with("food_at_hand", true);
        assert_eq!(
            hunger.tendency.fires(&c),
            Err(LogicError::UnknownAtom("on_diet".into()))
        );
    }
}
