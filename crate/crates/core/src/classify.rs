//! Classifiers over traces and agent states: pleasure, pain and the sublime.

use crate::dynamics::AgentState;
use crate::intensity::{compare_conditions_with, IntensityRelation};
use crate::logic::{evaluate, Circumstance, Enumerator, Formula, LogicError};
use crate::tendency::ActionName;
use crate::trace::{Event, EventKind, Trace};

/// An action executed while a desire for that same action is in force.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PleasureEvent {
    pub time: u64,
    pub source: String,
    pub quality: ActionName,
    pub intensity_condition: Formula,
}

fn is_desire(e: &Event) -> bool {
    matches!(e.kind, EventKind::Fired | EventKind::DesireActive)
}

/// One pleasure event per action that coincides, at the same step, with an
/// active desire of the same quality. Each desire pairs with at most one
/// action; a desire of the acting subject is preferred.
pub fn classify_pleasure(trace: &Trace) -> Vec<PleasureEvent> {
    let mut out = Vec::new();
    let events = &trace.events;
    let mut start = 0;
    while start < events.len() {
        let time = events[start].time;
        let end = start
            + events[start..]
                .iter()
                .take_while(|e| e.time == time)
                .count();
        let step = &events[start..end];
        let mut used = vec![false; step.len()];
        for action in step.iter().filter(|e| e.kind == EventKind::ActionExecuted) {
            let Some(quality) = action.quality() else {
                continue;
            };
            let candidates = || {
                step.iter()
                    .enumerate()
                    .filter(|(_, d)| is_desire(d) && d.quality() == Some(quality))
            };
            let pick = candidates()
                .find(|(i, d)| !used[*i] && d.subject == action.subject)
                .or_else(|| candidates().find(|(i, _)| !used[*i]));
            if let Some((i, desire)) = pick {
                used[i] = true;
                out.push(PleasureEvent {
                    time,
                    source: desire.subject.clone(),
                    quality: quality.clone(),
                    intensity_condition: desire.condition().cloned().unwrap_or(Formula::True),
                });
            }
        }
        start = end;
    }
    out
}

/// Orders two pleasures by the desires they satisfy: the stronger the
/// desire, the stronger the pleasure.
pub fn compare_pleasures(
    enumerator: &Enumerator,
    a: &PleasureEvent,
    b: &PleasureEvent,
) -> Result<IntensityRelation, LogicError> {
    compare_conditions_with(enumerator, &a.intensity_condition, &b.intensity_condition)
}

/// Ids of desires that persist without their action taking place under `c`.
///
/// A plain tendency is in pain when its condition is false. A family is in
/// pain when its instantiated condition is false although every pickiness
/// conjunct in force at its level still holds: the agent still wants, the
/// world does not allow. A family whose pickiness has taken over is sated,
/// not pained.
pub fn classify_pain(state: &AgentState, c: &Circumstance) -> Result<Vec<String>, LogicError> {
    let mut out = Vec::new();
    for family in &state.families {
        let level = state.levels[&family.id];
        if evaluate(&family.condition_at(level), c)? {
            continue;
        }
        let mut wanting = true;
        for p in family.in_force(level) {
            if !evaluate(p, c)? {
                wanting = false;
                break;
            }
        }
        if wanting {
            out.push(family.id.clone());
        }
    }
    for t in &state.tendencies {
        if !t.fires(c)? {
            out.push(t.id.clone());
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SublimeReport {
    /// Length of the longest run of consecutive complete cycles.
    pub cycles: usize,
    pub start: u64,
    pub end: u64,
}

/// Looks for repeated `exposed -> fired(flee) -> escaped` cycles. At the
/// scale of the whole run this is desiring to get away while getting away.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SublimeDetector {
    pub min_cycles: usize,
    pub flee: ActionName,
}

impl Default for SublimeDetector {
    fn default() -> Self {
        SublimeDetector {
            min_cycles: 2,
            flee: ActionName::new("flee").expect("valid action"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Idle,
    Exposed,
    Fleeing,
}

impl SublimeDetector {
    pub fn detect(&self, trace: &Trace) -> Option<SublimeReport> {
        let mut phase = Phase::Idle;
        let mut run = 0usize;
        let mut run_start = 0u64;
        let mut best: Option<SublimeReport> = None;
        for e in &trace.events {
            let wants_flee = is_desire(e) && e.quality() == Some(&self.flee);
            if e.kind != EventKind::Exposed && e.kind != EventKind::Escaped && !wants_flee {
                continue;
            }
            phase = match (phase, e.kind) {
                (Phase::Idle, EventKind::Exposed) => {
                    if run == 0 {
                        run_start = e.time;
                    }
                    Phase::Exposed
                }
                (Phase::Exposed, _) if wants_flee => Phase::Fleeing,
                (Phase::Fleeing, EventKind::Escaped) => {
                    run += 1;
                    if best.as_ref().is_none_or(|b| run > b.cycles) {
                        best = Some(SublimeReport {
                            cycles: run,
                            start: run_start,
                            end: e.time,
                        });
                    }
                    Phase::Idle
                }
                // An incomplete cycle breaks the run.
                (_, EventKind::Exposed) => {
                    run = 0;
                    run_start = e.time;
                    Phase::Exposed
                }
                _ => {
                    run = 0;
                    Phase::Idle
                }
            };
        }
        best.filter(|b| b.cycles >= self.min_cycles)
    }
}

pub fn detect_sublime(trace: &Trace) -> Option<SublimeReport> {
    SublimeDetector::default().detect(trace)
}
