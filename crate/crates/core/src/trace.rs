//! Time-stamped event traces and their line-oriented text form.
//!
//! One event per line: `t=<step> <kind> <subject> [<payload>]`.
//!
//! ```text
//! t=0 tested thirst cond{water_at_hand} facts{water_at_hand=1}
//! t=0 fired thirst action=drink cond{water_at_hand}
//! t=0 action_executed thirst action=drink
//! t=0 level_changed thirst level=0->1
//! ```
//!
//! Lines starting with `#` are comments; the writer uses them for the
//! truncation flag and final levels.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dynamics::AgentState;
use crate::logic::{is_identifier, parse_formula, Circumstance, Formula};
use crate::tendency::ActionName;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

/// Within one step events sort by this order, which keeps
/// tested < fired < action_executed < level_changed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    Exposed,
    Tested,
    DesireActive,
    Fired,
    ActionExecuted,
    Escaped,
    LevelChanged,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Exposed => "exposed",
            EventKind::Tested => "tested",
            EventKind::DesireActive => "desire_active",
            EventKind::Fired => "fired",
            EventKind::ActionExecuted => "action_executed",
            EventKind::Escaped => "escaped",
            EventKind::LevelChanged => "level_changed",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "exposed" => EventKind::Exposed,
            "tested" => EventKind::Tested,
            "desire_active" => EventKind::DesireActive,
            "fired" => EventKind::Fired,
            "action_executed" => EventKind::ActionExecuted,
            "escaped" => EventKind::Escaped,
            "level_changed" => EventKind::LevelChanged,
            other => return Err(format!("unknown event kind `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    None,
    /// Snapshot of the facts the condition depends on.
    Test {
        condition: Formula,
        facts: Circumstance,
    },
    /// A desire in force: carried by `fired` and `desire_active`.
    Desire {
        quality: ActionName,
        condition: Formula,
    },
    Action {
        quality: ActionName,
    },
    Level {
        from: f64,
        to: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub time: u64,
    pub kind: EventKind,
    pub subject: String,
    pub payload: Payload,
}

impl Event {
    pub fn new(time: u64, kind: EventKind, subject: impl Into<String>, payload: Payload) -> Self {
        Event {
            time,
            kind,
            subject: subject.into(),
            payload,
        }
    }

    pub fn quality(&self) -> Option<&ActionName> {
        match &self.payload {
            Payload::Desire { quality, .. } | Payload::Action { quality } => Some(quality),
            _ => None,
        }
    }

    pub fn condition(&self) -> Option<&Formula> {
        match &self.payload {
            Payload::Desire { condition, .. } | Payload::Test { condition, .. } => Some(condition),
            _ => None,
        }
    }
}

/// `a=1,b=0`, no spaces, lexicographic.
pub(crate) fn facts_text(c: &Circumstance) -> String {
    c.iter()
        .map(|(a, v)| format!("{a}={}", u8::from(v)))
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn parse_facts(text: &str) -> Result<Circumstance, String> {
    let mut out = Circumstance::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (atom, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected `atom=0|1`, found `{part}`"))?;
        let atom = atom.trim();
        if !is_identifier(atom) {
            return Err(format!("invalid atom `{atom}`"));
        }
        if out.contains(atom) {
            return Err(format!("atom `{atom}` assigned twice"));
        }
        let value = match value.trim() {
            "0" => false,
            "1" => true,
            v => return Err(format!("expected 0 or 1 for `{atom}`, found `{v}`")),
        };
        out.set(atom, value);
    }
    Ok(out)
}

/// Pulls `name{...}` out of `text`, returning the inner text and the rest.
pub(crate) fn take_braced<'a>(text: &'a str, name: &str) -> Result<(&'a str, &'a str), String> {
    let text = text.trim_start();
    let rest = text
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix('{'))
        .ok_or_else(|| format!("expected `{name}{{...}}`"))?;
    let end = rest
        .find('}')
        .ok_or_else(|| format!("unclosed `{name}{{`"))?;
    Ok((&rest[..end], &rest[end + 1..]))
}

fn fmt_level(v: f64) -> String {
    format!("{v}")
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} {} {}", self.time, self.kind, self.subject)?;
        match &self.payload {
            Payload::None => Ok(()),
            Payload::Test { condition, facts } => {
                write!(f, " cond{{{condition}}} facts{{{}}}", facts_text(facts))
            }
            Payload::Desire { quality, condition } => {
                write!(f, " action={quality} cond{{{condition}}}")
            }
            Payload::Action { quality } => write!(f, " action={quality}"),
            Payload::Level { from, to } => {
                write!(f, " level={}->{}", fmt_level(*from), fmt_level(*to))
            }
        }
    }
}

fn parse_action(text: &str) -> Result<(ActionName, &str), String> {
    let rest = text
        .trim_start()
        .strip_prefix("action=")
        .ok_or("expected `action=<name>`")?;
    let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    let quality = ActionName::new(&rest[..end]).map_err(|e| e.to_string())?;
    Ok((quality, &rest[end..]))
}

fn parse_condition(text: &str) -> Result<(Formula, &str), String> {
    let (inner, rest) = take_braced(text, "cond")?;
    let f = parse_formula(inner).map_err(|e| e.to_string())?;
    Ok((f, rest))
}

fn expect_end(rest: &str) -> Result<(), String> {
    if rest.trim().is_empty() {
        Ok(())
    } else {
        Err(format!("unexpected trailing text `{}`", rest.trim()))
    }
}

impl FromStr for Event {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let line = line.trim();
        let mut parts = line.splitn(4, char::is_whitespace);
        let time = parts
            .next()
            .and_then(|t| t.strip_prefix("t="))
            .ok_or("expected `t=<step>`")?
            .parse::<u64>()
            .map_err(|e| format!("bad step: {e}"))?;
        let kind: EventKind = parts.next().ok_or("missing event kind")?.parse()?;
        let subject = parts.next().ok_or("missing subject")?.to_owned();
        if !is_identifier(&subject) {
            return Err(format!("invalid subject `{subject}`"));
        }
        let rest = parts.next().unwrap_or("");
        let payload = match kind {
            EventKind::Exposed | EventKind::Escaped => {
                expect_end(rest)?;
                Payload::None
            }
            EventKind::Tested => {
                let (condition, rest) = parse_condition(rest)?;
                let (facts, rest) = take_braced(rest, "facts")?;
                expect_end(rest)?;
                Payload::Test {
                    condition,
                    facts: parse_facts(facts)?,
                }
            }
            EventKind::Fired | EventKind::DesireActive => {
                let (quality, rest) = parse_action(rest)?;
                let (condition, rest) = parse_condition(rest)?;
                expect_end(rest)?;
                Payload::Desire { quality, condition }
            }
            EventKind::ActionExecuted => {
                let (quality, rest) = parse_action(rest)?;
                expect_end(rest)?;
                Payload::Action { quality }
            }
            EventKind::LevelChanged => {
                let body = rest
                    .trim()
                    .strip_prefix("level=")
                    .ok_or("expected `level=<from>-><to>`")?;
                let (from, to) = body.split_once("->").ok_or("expected `<from>-><to>`")?;
                let num = |s: &str| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| format!("bad level `{s}`: {e}"))
                };
                Payload::Level {
                    from: num(from)?,
                    to: num(to)?,
                }
            }
        };
        Ok(Event {
            time,
            kind,
            subject,
            payload,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub events: Vec<Event>,
    pub final_state: AgentState,
    /// The run hit its step guard while still active.
    pub truncated: bool,
}

impl Trace {
    pub fn from_events(events: Vec<Event>) -> Self {
        Trace {
            events,
            ..Trace::default()
        }
    }

    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    /// Events are sorted by step, then by kind order.
    pub fn is_ordered(&self) -> bool {
        self.events
            .windows(2)
            .all(|w| (w[0].time, w[0].kind) <= (w[1].time, w[1].kind))
    }

    /// Every `action_executed` at step t is preceded at step t by a `fired`
    /// for the same subject.
    pub fn actions_follow_firings(&self) -> bool {
        self.events.iter().enumerate().all(|(i, e)| {
            e.kind != EventKind::ActionExecuted
                || self.events[..i].iter().any(|p| {
                    p.kind == EventKind::Fired && p.time == e.time && p.subject == e.subject
                })
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        for (id, level) in &self.final_state.levels {
            out.push_str(&format!("# level {id}={}\n", fmt_level(*level)));
        }
        if self.truncated {
            out.push_str("# truncated\n");
        }
        out
    }

    /// Parses event lines; comments and blank lines are skipped and the order
    /// of events is validated.
    pub fn parse(text: &str) -> Result<Trace, TraceParseError> {
        Self::parse_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }

    pub(crate) fn parse_lines<'a>(
        lines: impl IntoIterator<Item = (usize, &'a str)>,
    ) -> Result<Trace, TraceParseError> {
        let mut events: Vec<Event> = Vec::new();
        for (line, text) in lines {
            let text = text.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let event: Event = text
                .parse()
                .map_err(|message| TraceParseError { line, message })?;
            if let Some(prev) = events.last() {
                if (prev.time, prev.kind) > (event.time, event.kind) {
                    return Err(TraceParseError {
                        line,
                        message: format!(
                            "event out of order: t={} {} after t={} {}",
                            event.time, event.kind, prev.time, prev.kind
                        ),
                    });
                }
            }
            events.push(event);
        }
        Ok(Trace::from_events(events))
    }
}
