//! Wishing and waiting: a goal one cannot bring about, checked repeatedly
//! until a stop condition holds.
//!
//! Wish strength has two dimensions that are reported side by side and never
//! merged: how often the agent checks, and how hard the stop condition is to
//! satisfy. On the condition dimension the orientation is the reverse of
//! desire intensity: the wish whose stop condition is satisfied in fewer
//! circumstances keeps the agent waiting longer and is the stronger one.

use std::fmt;

use thiserror::Error;

use crate::intensity::{compare_conditions_with, IntensityRelation, Verdict};
use crate::logic::{is_identifier, Enumerator, Formula, LogicError};
use crate::tendency::ActionName;
use crate::trace::{Event, EventKind, Payload, Trace};
use crate::world::{UndefinedStep, World};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WishError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    World(#[from] UndefinedStep),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("check period must be at least 1")]
    ZeroPeriod,
    #[error("goal `{goal}` does not entail stop condition `{stop}`")]
    GoalCannotStop { goal: Formula, stop: Formula },
    #[error("max_steps must be positive")]
    ZeroSteps,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wish {
    pub id: String,
    pub goal: Formula,
    pub stop_condition: Formula,
    pub on_stop: ActionName,
    pub check_period: u64,
}

impl Wish {
    /// `stop_condition` defaults to the goal; when given, the goal must
    /// entail it so that reaching the goal always ends the wait.
    pub fn new(
        id: impl Into<String>,
        goal: Formula,
        stop_condition: Option<Formula>,
        on_stop: ActionName,
        check_period: u64,
        enumerator: &Enumerator,
    ) -> Result<Self, WishError> {
        let id = id.into();
        if !is_identifier(&id) {
            return Err(WishError::InvalidIdentifier(id));
        }
        if check_period == 0 {
            return Err(WishError::ZeroPeriod);
        }
        let stop_condition = stop_condition.unwrap_or_else(|| goal.clone());
        if !enumerator.entails(&goal, &stop_condition)? {
            return Err(WishError::GoalCannotStop {
                goal,
                stop: stop_condition,
            });
        }
        Ok(Wish {
            id,
            goal,
            stop_condition,
            on_stop,
            check_period,
        })
    }

    pub fn strength(&self) -> WishStrength {
        WishStrength {
            frequency: 1.0 / self.check_period as f64,
            condition: self.stop_condition.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WishStrength {
    /// Checks per step.
    pub frequency: f64,
    pub condition: Formula,
}

/// Checks at every multiple of the period; stops at the first check whose
/// circumstance satisfies the stop condition. Nothing is recorded between
/// checks.
pub fn simulate_wait(wish: &Wish, world: &World, max_steps: u64) -> Result<Trace, WishError> {
    if max_steps == 0 {
        return Err(WishError::ZeroSteps);
    }
    let mut events = Vec::new();
    let atoms = wish.stop_condition.atoms();
    for t in (0..max_steps).step_by(wish.check_period as usize) {
        let c = world.at(t)?;
        let stop = crate::logic::evaluate(&wish.stop_condition, c)?;
        events.push(Event::new(
            t,
            EventKind::Tested,
            &wish.id,
            Payload::Test {
                condition: wish.stop_condition.clone(),
                facts: c.restrict(atoms.iter().map(String::as_str)),
            },
        ));
        if stop {
            events.push(Event::new(
                t,
                EventKind::Fired,
                &wish.id,
                Payload::Desire {
                    quality: wish.on_stop.clone(),
                    condition: wish.stop_condition.clone(),
                },
            ));
            events.push(Event::new(
                t,
                EventKind::ActionExecuted,
                &wish.id,
                Payload::Action {
                    quality: wish.on_stop.clone(),
                },
            ));
            return Ok(Trace::from_events(events));
        }
    }
    let mut trace = Trace::from_events(events);
    trace.truncated = true;
    Ok(trace)
}

/// Step at which a wait trace stopped, if it did.
pub fn stop_step(trace: &Trace) -> Option<u64> {
    trace
        .events
        .iter()
        .find(|e| e.kind == EventKind::ActionExecuted)
        .map(|e| e.time)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WishComparison {
    pub first: WishStrength,
    pub second: WishStrength,
    /// Stronger means the first wish checks more often.
    pub frequency: Verdict,
    /// Stronger means the first wish's stop condition strictly entails the
    /// second's. The witness, when present, satisfies the second stop
    /// condition but not the first (for Incomparable: one such direction).
    pub condition: IntensityRelation,
}

impl WishComparison {
    pub fn render(&self, left: &str, right: &str) -> String {
        format!(
            "frequency: {left} {} {right}; condition: {}",
            self.frequency.symbol(),
            self.condition.render(left, right)
        )
    }
}

impl fmt::Display for WishComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("W1", "W2"))
    }
}

pub fn compare_wishes_with(
    enumerator: &Enumerator,
    w1: &Wish,
    w2: &Wish,
) -> Result<WishComparison, LogicError> {
    let frequency = match w1.check_period.cmp(&w2.check_period) {
        std::cmp::Ordering::Less => Verdict::Stronger,
        std::cmp::Ordering::Greater => Verdict::Weaker,
        std::cmp::Ordering::Equal => Verdict::Equal,
    };
    // Flipped arguments: the harder stop condition wins.
    let condition = compare_conditions_with(enumerator, &w2.stop_condition, &w1.stop_condition)?;
    Ok(WishComparison {
        first: w1.strength(),
        second: w2.strength(),
        frequency,
        condition,
    })
}

pub fn compare_wishes(w1: &Wish, w2: &Wish) -> Result<WishComparison, LogicError> {
    compare_wishes_with(&Enumerator::default(), w1, w2)
}
