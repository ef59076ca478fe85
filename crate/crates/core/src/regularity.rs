//! "Whenever S then A" regularities tested against observation logs.
//!
//! Only occasions where the trigger holds bear on a regularity: they either
//! confirm it (outcome occurred) or refute it (outcome absent). Occasions
//! where the trigger is false are inert, and a regularity that has never been
//! tested is vacuously unrefuted.
//!
//! Observation log lines look like `t=3 trigger{support=0} outcome=falls:1`.

use std::fmt;

use thiserror::Error;

use crate::intensity::{compare_conditions_with, IntensityRelation};
use crate::logic::{evaluate, Circumstance, Enumerator, Formula, LogicError};
use crate::tendency::ActionName;
use crate::trace::{facts_text, parse_facts, take_braced};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegularityError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("interval [{from}, {to}] is empty")]
    EmptyInterval { from: u64, to: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub time: u64,
    pub trigger_facts: Circumstance,
    pub outcome_occurred: bool,
    pub outcome_name: ActionName,
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t={} trigger{{{}}} outcome={}:{}",
            self.time,
            facts_text(&self.trigger_facts),
            self.outcome_name,
            u8::from(self.outcome_occurred)
        )
    }
}

impl std::str::FromStr for Observation {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let line = line.trim();
        let (time, rest) = line
            .split_once(char::is_whitespace)
            .ok_or("expected `t=<step> trigger{...} outcome=<name>:<0|1>`")?;
        let time = time
            .strip_prefix("t=")
            .ok_or("expected `t=<step>`")?
            .parse::<u64>()
            .map_err(|e| format!("bad step: {e}"))?;
        let (facts, rest) = take_braced(rest, "trigger")?;
        let outcome = rest
            .trim()
            .strip_prefix("outcome=")
            .ok_or("expected `outcome=<name>:<0|1>`")?;
        let (name, flag) = outcome
            .rsplit_once(':')
            .ok_or("expected `outcome=<name>:<0|1>`")?;
        let outcome_occurred = match flag {
            "0" => false,
            "1" => true,
            other => return Err(format!("expected 0 or 1 after `{name}:`, found `{other}`")),
        };
        Ok(Observation {
            time,
            trigger_facts: parse_facts(facts)?,
            outcome_occurred,
            outcome_name: ActionName::new(name).map_err(|e| e.to_string())?,
        })
    }
}

/// Parses an observation log. Blank lines and `#` comments are skipped.
/// Two observations of the same outcome at the same step are rejected.
pub fn parse_observation_log(text: &str) -> Result<Vec<Observation>, RegularityError> {
    parse_observation_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

pub(crate) fn parse_observation_lines<'a>(
    lines: impl IntoIterator<Item = (usize, &'a str)>,
) -> Result<Vec<Observation>, RegularityError> {
    let mut out: Vec<Observation> = Vec::new();
    for (line, text) in lines {
        let text = text.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let obs: Observation = text
            .parse()
            .map_err(|message| RegularityError::Parse { line, message })?;
        if out
            .iter()
            .any(|o| o.time == obs.time && o.outcome_name == obs.outcome_name)
        {
            return Err(RegularityError::Parse {
                line,
                message: format!(
                    "second observation of `{}` at t={}",
                    obs.outcome_name, obs.time
                ),
            });
        }
        out.push(obs);
    }
    Ok(out)
}

pub fn render_observation_log(obs: &[Observation]) -> String {
    obs.iter().map(|o| format!("{o}\n")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Unrefuted,
    /// Step of the earliest counterexample seen.
    Refuted(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regularity {
    pub trigger: Formula,
    pub outcome: ActionName,
    pub support: u64,
    pub status: Status,
}

impl Regularity {
    pub fn new(trigger: Formula, outcome: ActionName) -> Self {
        Regularity {
            trigger,
            outcome,
            support: 0,
            status: Status::Unrefuted,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.status, Status::Refuted(_))
    }

    /// `unrefuted, support 5` or `refuted at t=3, support 2`.
    pub fn summary(&self) -> String {
        match self.status {
            Status::Unrefuted => format!("unrefuted, support {}", self.support),
            Status::Refuted(t) => format!("refuted at t={t}, support {}", self.support),
        }
    }
}

impl fmt::Display for Regularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "whenever {} then {}: {}",
            self.trigger,
            self.outcome,
            self.summary()
        )
    }
}

fn relevant<'a>(
    r: &'a Regularity,
    obs: &'a [Observation],
) -> impl Iterator<Item = &'a Observation> {
    obs.iter().filter(move |o| o.outcome_name == r.outcome)
}

/// Folds observations of `r.outcome` into `r`. Refutation is permanent and
/// records the earliest counterexample.
pub fn test_regularity(r: &Regularity, obs: &[Observation]) -> Result<Regularity, LogicError> {
    let mut ordered: Vec<&Observation> = relevant(r, obs).collect();
    ordered.sort_by_key(|o| o.time);
    let mut next = r.clone();
    for o in ordered {
        if !evaluate(&r.trigger, &o.trigger_facts)? {
            continue;
        }
        if o.outcome_occurred {
            next.support += 1;
        } else {
            next.status = match next.status {
                Status::Refuted(t) => Status::Refuted(t.min(o.time)),
                Status::Unrefuted => Status::Refuted(o.time),
            };
        }
    }
    Ok(next)
}

/// True when no observation inside `[from, to]` refutes `r`. Steps that were
/// not observed carry no truth value, so an unobserved interval holds.
pub fn holds_during(
    r: &Regularity,
    obs: &[Observation],
    from: u64,
    to: u64,
) -> Result<bool, RegularityError> {
    if from > to {
        return Err(RegularityError::EmptyInterval { from, to });
    }
    for o in relevant(r, obs).filter(|o| (from..=to).contains(&o.time)) {
        if evaluate(&r.trigger, &o.trigger_facts)? && !o.outcome_occurred {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Forces are tendencies too: compares trigger conditions exactly as
/// [`crate::intensity::compare`] compares tendency conditions.
pub fn compare_forces_with(
    enumerator: &Enumerator,
    r1: &Regularity,
    r2: &Regularity,
) -> Result<IntensityRelation, LogicError> {
    compare_conditions_with(enumerator, &r1.trigger, &r2.trigger)
}

pub fn compare_forces(r1: &Regularity, r2: &Regularity) -> Result<IntensityRelation, LogicError> {
    compare_forces_with(&Enumerator::default(), r1, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intensity::{compare, Verdict};
    use crate::logic::parse_formula;
    use crate::tendency::{ActionTendency, TendencyKind};
    use proptest::prelude::*;

    fn reg(trigger: &str, outcome: &str) -> Regularity {
        Regularity::new(
            parse_formula(trigger).unwrap(),
            ActionName::new(outcome).unwrap(),
        )
    }

    fn log(text: &str) -> Vec<Observation> {
        parse_observation_log(text).unwrap()
    }

    #[test]
    fn tray_falls_every_time() {
        let obs = log("t=0 trigger{support=0} outcome=falls:1\n\
             t=1 trigger{support=0} outcome=falls:1\n\
             t=2 trigger{support=0} outcome=falls:1\n\
             t=3 trigger{support=0} outcome=falls:1\n\
             t=4 trigger{support=0} outcome=falls:1\n");
        let r = test_regularity(&reg("!support", "falls"), &obs).unwrap();
        assert_eq!(r.status, Status::Unrefuted);
        assert_eq!(r.support, 5);
        assert_eq!(r.summary(), "unrefuted, support 5");
    }

    #[test]
    fn a_tray_that_stays_up_refutes() {
        let obs = log("t=0 trigger{support=0} outcome=falls:1\n\
             t=3 trigger{support=0} outcome=falls:0\n\
             t=4 trigger{support=0} outcome=falls:1\n");
        let r = test_regularity(&reg("!support", "falls"), &obs).unwrap();
        assert_eq!(r.status, Status::Refuted(3));
        assert_eq!(r.support, 2);
        assert_eq!(r.summary(), "refuted at t=3, support 2");
    }

    #[test]
    fn unobserved_moon_is_vacuously_there() {
        let r = test_regularity(&reg("look", "see"), &[]).unwrap();
        assert_eq!(r.status, Status::Unrefuted);
        assert_eq!(r.support, 0);
        assert!(holds_during(&r, &[], 0, 1000).unwrap());
    }

    #[test]
    fn trigger_false_rows_are_inert() {
        let obs = log("t=0 trigger{support=1} outcome=falls:0\n\
             t=1 trigger{support=1} outcome=falls:1\n");
        let r = test_regularity(&reg("!support", "falls"), &obs).unwrap();
        assert_eq!((r.support, r.status), (0, Status::Unrefuted));
    }

    #[test]
    fn other_outcomes_are_ignored() {
        let obs = log("t=0 trigger{look=1} outcome=hear:0\n");
        let r = test_regularity(&reg("look", "see"), &obs).unwrap();
        assert_eq!((r.support, r.status), (0, Status::Unrefuted));
    }

    #[test]
    fn refutation_is_permanent_and_earliest() {
        let first = log("t=7 trigger{look=1} outcome=see:0\n");
        let r = test_regularity(&reg("look", "see"), &first).unwrap();
        let later = log("t=2 trigger{look=1} outcome=see:0\n\
             t=9 trigger{look=1} outcome=see:1\n");
        let r = test_regularity(&r, &later).unwrap();
        assert_eq!(r.status, Status::Refuted(2));
        assert_eq!(r.support, 1);
    }

    #[test]
    fn missing_trigger_atom() {
        let obs = log("t=0 trigger{other=1} outcome=see:1\n");
        assert_eq!(
            test_regularity(&reg("look", "see"), &obs),
            Err(LogicError::UnknownAtom("look".into()))
        );
    }

    #[test]
    fn intervals() {
        let obs = log("t=1 trigger{look=1} outcome=see:1\n\
             t=5 trigger{look=1} outcome=see:0\n\
             t=8 trigger{look=1} outcome=see:1\n");
        let r = reg("look", "see");
        assert!(holds_during(&r, &obs, 0, 4).unwrap());
        assert!(!holds_during(&r, &obs, 0, 5).unwrap());
        assert!(holds_during(&r, &obs, 6, 8).unwrap());
        assert!(holds_during(&r, &obs, 20, 30).unwrap());
        assert_eq!(
            holds_during(&r, &obs, 3, 2),
            Err(RegularityError::EmptyInterval { from: 3, to: 2 })
        );
    }

    #[test]
    fn two_hands_force_is_stronger() {
        let one = reg("!C1", "fall");
        let two = reg("!(C1 & C2)", "fall");
        assert_eq!(
            compare_forces(&two, &one).unwrap().verdict,
            Verdict::Stronger
        );
        assert_eq!(compare_forces(&one, &one).unwrap().verdict, Verdict::Equal);
        assert_eq!(
            compare_forces(&one, &reg("!C2", "fall")).unwrap().verdict,
            Verdict::Incomparable
        );
    }

    #[test]
    fn log_parsing() {
        let obs = log("# tray\n\nt=3 trigger{C1=1,C2=0} outcome=falls:0\n");
        assert_eq!(obs.len(), 1);
        assert_eq!(obs[0].to_string(), "t=3 trigger{C1=1,C2=0} outcome=falls:0");
        assert_eq!(
            render_observation_log(&obs),
            "t=3 trigger{C1=1,C2=0} outcome=falls:0\n"
        );
        for bad in [
            "t=x trigger{a=1} outcome=f:1",
            "t=1 trig{a=1} outcome=f:1",
            "t=1 trigger{a=1} outcome=f:2",
            "t=1 trigger{a=1} outcome=f",
            "t=1 trigger{a=1,a=0} outcome=f:1",
        ] {
            assert!(parse_observation_log(bad).is_err(), "{bad}");
        }
        let dup = parse_observation_log("t=1 trigger{} outcome=f:1\nt=1 trigger{} outcome=f:0\n");
        assert!(matches!(dup, Err(RegularityError::Parse { line: 2, .. })));
    }

    fn arb_obs() -> impl Strategy<Value = Vec<Observation>> {
        proptest::collection::vec(
            (0u64..20, any::<bool>(), any::<bool>(), any::<bool>()),
            0..25,
        )
        .prop_map(|rows| {
            let mut seen = std::collections::BTreeSet::new();
            rows.into_iter()
                .filter(|(t, ..)| seen.insert(*t))
                .map(|(t, a, b, out)| Observation {
                    time: t,
                    trigger_facts: Circumstance::new().with("a", a).with("b", b),
                    outcome_occurred: out,
                    outcome_name: ActionName::new("m").unwrap(),
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn status_and_support_match_a_direct_count(obs in arb_obs(), rev: bool) {
            let r = reg("a & !b", "m");
            let mut input = obs.clone();
            if rev {
                input.reverse();
            }
            let tested = test_regularity(&r, &input).unwrap();
            let hits: Vec<&Observation> = obs.iter().filter(|o| {
                o.trigger_facts.get("a") == Some(true) && o.trigger_facts.get("b") == Some(false)
            }).collect();
            prop_assert_eq!(tested.support, hits.iter().filter(|o| o.outcome_occurred).count() as u64);
            let first_miss = hits.iter().filter(|o| !o.outcome_occurred).map(|o| o.time).min();
            prop_assert_eq!(tested.status, first_miss.map_or(Status::Unrefuted, Status::Refuted));
            let whole = holds_during(&r, &obs, 0, 20).unwrap();
            prop_assert_eq!(whole, first_miss.is_none());
        }

        #[test]
        fn refutation_is_monotone(a in arb_obs(), b in arb_obs()) {
            let r = test_regularity(&reg("a | b", "m"), &a).unwrap();
            let r2 = test_regularity(&r, &b).unwrap();
            if r.is_refuted() {
                prop_assert!(r2.is_refuted());
            }
        }

        #[test]
        fn force_comparison_is_tendency_comparison(x in 0usize..6, y in 0usize..6) {
            let triggers = ["!C1", "!(C1 & C2)", "!C2", "!C1 | !C2", "!C1 & !C2", "C1 -> C2"];
            let (r1, r2) = (reg(triggers[x], "fall"), reg(triggers[y], "fall"));
            let as_tendency = |r: &Regularity| ActionTendency::new(
                "f", r.outcome.clone(), r.trigger.clone(), TendencyKind::Force).unwrap();
            prop_assert_eq!(
                compare_forces(&r1, &r2).unwrap(),
                compare(&as_tendency(&r1), &as_tendency(&r2)).unwrap()
            );
        }
    }
}
