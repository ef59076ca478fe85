use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::classify::{classify_pain, compare_pleasures, SublimeDetector};
use crate::dynamics::{condition_chain, run_satiation, simulate, AgentState};
use crate::intensity::{compare_with, satisfy, verify_order_laws_with};
use crate::logic::{Enumerator, Formula};
use crate::regularity::{compare_forces_with, holds_during, test_regularity};
use crate::tendency::ActionTendency;
use crate::trace::Trace;
use crate::wish::{compare_wishes_with, simulate_wait, stop_step};

use super::{DesireRef, Directive, DirectiveKind, Scenario};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub enumerator: Enumerator,
    /// Guard for satiation runs and wish waits.
    pub max_steps: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            enumerator: Enumerator::default(),
            max_steps: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub report: String,
    /// `report.txt` first, then one `.trace` file per produced trace.
    pub artifacts: Vec<Artifact>,
    pub failures: usize,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        if self.failures == 0 {
            0
        } else {
            1
        }
    }

    pub fn write_to(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for a in &self.artifacts {
            std::fs::write(dir.join(&a.name), &a.contents)?;
        }
        Ok(())
    }
}

struct Runner<'a> {
    scenario: &'a Scenario,
    config: &'a RunConfig,
    traces: BTreeMap<String, Trace>,
    artifacts: Vec<Artifact>,
}

type Lines = Result<Vec<String>, String>;

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Runner<'_> {
    fn resolve(&self, r: &DesireRef) -> Result<ActionTendency, String> {
        let label = r.to_string();
        match r {
            DesireRef::Tendency(id) => {
                if let Some(t) = self.scenario.tendencies.iter().find(|t| &t.id == id) {
                    return Ok(t.clone());
                }
                self.family_at(id, None, label)
            }
            DesireRef::Family { id, level } => self.family_at(id, *level, label),
        }
    }

    fn family_at(
        &self,
        id: &str,
        level: Option<f64>,
        label: String,
    ) -> Result<ActionTendency, String> {
        let family = self
            .scenario
            .families
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| format!("unknown desire `{id}`"))?;
        let level = level.unwrap_or(self.scenario.levels[id]);
        let mut t = family.instantiate(level);
        t.id = label;
        Ok(t)
    }

    fn store(&mut self, name: &str, trace: Trace) {
        self.artifacts.push(Artifact {
            name: format!("{name}.trace"),
            contents: trace.to_text(),
        });
        self.traces.insert(name.to_owned(), trace);
    }

    fn trace(&self, name: &str) -> Result<&Trace, String> {
        self.traces
            .get(name)
            .or_else(|| self.scenario.traces.get(name))
            .ok_or_else(|| format!("trace `{name}` was not produced"))
    }

    fn initial_state(&self) -> Result<AgentState, String> {
        AgentState::new(
            self.scenario.families.clone(),
            self.scenario.tendencies.clone(),
            self.scenario.levels.clone(),
        )
        .map_err(|e| e.to_string())
    }

    fn run(&mut self, d: &Directive) -> Lines {
        let e = &self.config.enumerator;
        let s = self.scenario;
        let text = |err: &dyn std::fmt::Display| err.to_string();
        match &d.kind {
            DirectiveKind::Compare(a, b) => {
                let (ta, tb) = (self.resolve(a)?, self.resolve(b)?);
                let rel = compare_with(e, &ta, &tb).map_err(|x| text(&x))?;
                Ok(vec![rel.render(&ta.id, &tb.id)])
            }
            DirectiveKind::Fires { desire, time } => {
                let t = self.resolve(desire)?;
                let c = s.world.at(*time).map_err(|x| text(&x))?;
                let fires = t.fires(c).map_err(|x| text(&x))?;
                Ok(vec![format!(
                    "{} fires at t={time}: {} ({})",
                    t.id,
                    yes_no(fires),
                    t.condition
                )])
            }
            DirectiveKind::Satisfy { desire, time } => {
                let t = self.resolve(desire)?;
                let c = s.world.at(*time).map_err(|x| text(&x))?;
                Ok(vec![match satisfy(&t, c).map_err(|x| text(&x))? {
                    Some(a) => format!("{} at t={time}: {a}", t.id),
                    None => format!("{} at t={time}: no action", t.id),
                }])
            }
            DirectiveKind::Laws(refs) => {
                let ts = if refs.is_empty() {
                    let mut all: Vec<ActionTendency> = s.tendencies.clone();
                    for f in &s.families {
                        all.push(f.instantiate(s.levels[&f.id]));
                    }
                    all
                } else {
                    refs.iter()
                        .map(|r| self.resolve(r))
                        .collect::<Result<_, _>>()?
                };
                let report = verify_order_laws_with(e, &ts).map_err(|x| text(&x))?;
                let mut out = vec![
                    format!(
                        "{} desires, {} ordered pairs, {} violations",
                        report.size,
                        report.pairs_checked,
                        report.violation_count()
                    ),
                    format!(
                        "strict partial order: {}",
                        yes_no(report.is_strict_partial_order())
                    ),
                    format!("chain: {}", yes_no(report.is_chain())),
                ];
                out.extend(report.stronger.iter().map(|(a, b)| format!("{a} > {b}")));
                let all = report
                    .irreflexive_violations
                    .iter()
                    .chain(&report.antisymmetry_violations)
                    .chain(&report.transitivity_violations);
                out.extend(all.map(|v| format!("violation: {}", v.ids.join(", "))));
                Ok(out)
            }
            DirectiveKind::Satiate { family, name } => {
                let fam = s
                    .families
                    .iter()
                    .find(|f| &f.id == family)
                    .expect("validated");
                let delta: f64 = s
                    .effects
                    .for_action(&fam.quality)
                    .filter(|(f, _)| *f == family)
                    .map(|(_, d)| d)
                    .sum();
                if delta <= 0.0 {
                    return Err(format!(
                        "no positive effect of `{}` on `{family}`",
                        fam.quality
                    ));
                }
                let c = s.world.at(0).map_err(|x| text(&x))?;
                let w0 = s.levels[family];
                let trace = run_satiation(fam, c, w0, delta, self.config.max_steps)
                    .map_err(|x| text(&x))?;
                let end = trace.final_state.levels[family];
                let steps = trace.events.last().map_or(0, |ev| ev.time + 1);
                let mut out = vec![if trace.truncated {
                    format!("not satiated within {steps} steps, level {w0} -> {end}")
                } else {
                    format!("satiated at t={}, level {w0} -> {end}", steps - 1)
                }];
                let chain: Vec<String> = condition_chain(&trace, family)
                    .iter()
                    .map(Formula::to_string)
                    .collect();
                out.push(format!("conditions: {}", chain.join(" ; ")));
                out.push(format!("trace: {name}.trace"));
                self.store(name, trace);
                Ok(out)
            }
            DirectiveKind::Simulate { steps, name } => {
                if *steps == 0 {
                    return Err("simulate needs at least one step".into());
                }
                let state = self.initial_state()?;
                let trace = simulate(&state, &s.world, &s.effects, *steps).map_err(|x| text(&x))?;
                let mut out = vec![format!(
                    "{steps} steps, {} events, {} actions",
                    trace.events.len(),
                    trace.count(crate::trace::EventKind::ActionExecuted)
                )];
                out.extend(
                    trace
                        .final_state
                        .levels
                        .iter()
                        .map(|(id, v)| format!("level {id} = {v}")),
                );
                out.push(format!("trace: {name}.trace"));
                self.store(name, trace);
                Ok(out)
            }
            DirectiveKind::Pleasure { trace } => {
                let pleasures = crate::classify::classify_pleasure(self.trace(trace)?);
                let mut out = vec![format!("{} pleasure events", pleasures.len())];
                for p in &pleasures {
                    out.push(format!(
                        "t={} {} {} cond{{{}}}",
                        p.time, p.source, p.quality, p.intensity_condition
                    ));
                }
                for pair in pleasures.windows(2) {
                    let rel = compare_pleasures(e, &pair[0], &pair[1]).map_err(|x| text(&x))?;
                    out.push(rel.render(
                        &format!("t={}", pair[0].time),
                        &format!("t={}", pair[1].time),
                    ));
                }
                Ok(out)
            }
            DirectiveKind::Pain { time } => {
                let state = self.initial_state()?;
                let c = s.world.at(*time).map_err(|x| text(&x))?;
                let ids = classify_pain(&state, c).map_err(|x| text(&x))?;
                Ok(vec![if ids.is_empty() {
                    format!("in pain at t={time}: none")
                } else {
                    format!("in pain at t={time}: {}", ids.join(", "))
                }])
            }
            DirectiveKind::Sublime { trace } => {
                let report = SublimeDetector::default().detect(self.trace(trace)?);
                Ok(vec![match report {
                    Some(r) => format!("sublime: {} cycles, t={}..t={}", r.cycles, r.start, r.end),
                    None => "sublime: none".to_owned(),
                }])
            }
            DirectiveKind::Wait { wish, name } => {
                let w = s.wishes.iter().find(|w| &w.id == wish).expect("validated");
                let trace =
                    simulate_wait(w, &s.world, self.config.max_steps).map_err(|x| text(&x))?;
                let out = vec![
                    match stop_step(&trace) {
                        Some(t) => format!("stopped at t={t}: {}", w.on_stop),
                        None => format!("still waiting after {} steps", self.config.max_steps),
                    },
                    format!("trace: {name}.trace"),
                ];
                self.store(name, trace);
                Ok(out)
            }
            DirectiveKind::CompareWishes(a, b) => {
                let find = |id: &str| s.wishes.iter().find(|w| w.id == id).expect("validated");
                let cmp = compare_wishes_with(e, find(a), find(b)).map_err(|x| text(&x))?;
                Ok(vec![cmp.render(a, b)])
            }
            DirectiveKind::Observe { regularity, log } => {
                let r = test_regularity(&s.regularities[regularity], &s.observations[log])
                    .map_err(|x| text(&x))?;
                Ok(vec![format!("{regularity}: {r}")])
            }
            DirectiveKind::Holds {
                regularity,
                log,
                from,
                to,
            } => {
                let holds = holds_during(
                    &s.regularities[regularity],
                    &s.observations[log],
                    *from,
                    *to,
                )
                .map_err(|x| text(&x))?;
                Ok(vec![format!(
                    "{regularity} holds during [{from}, {to}]: {}",
                    yes_no(holds)
                )])
            }
            DirectiveKind::CompareForces(a, b) => {
                let rel = compare_forces_with(e, &s.regularities[a], &s.regularities[b])
                    .map_err(|x| text(&x))?;
                Ok(vec![rel.render(a, b)])
            }
        }
    }
}

/// Runs every directive in order. A failing directive is reported and
/// counted; the rest still run.
pub fn run_scenario(scenario: &Scenario, config: &RunConfig) -> RunOutput {
    let mut runner = Runner {
        scenario,
        config,
        traces: BTreeMap::new(),
        artifacts: Vec::new(),
    };
    let mut report = String::new();
    let mut failures = 0;
    writeln!(report, "scenario {}", scenario.name).unwrap();
    writeln!(
        report,
        "atoms {}, cap {}, max steps {}",
        scenario.atom_universe.len(),
        config.enumerator.cap(),
        config.max_steps
    )
    .unwrap();
    for (i, d) in scenario.directives.iter().enumerate() {
        writeln!(report, "\n[{}] {}", i + 1, d.text).unwrap();
        match runner.run(d) {
            Ok(lines) => {
                for l in lines {
                    writeln!(report, "  {l}").unwrap();
                }
            }
            Err(message) => {
                failures += 1;
                writeln!(report, "  error: {message}").unwrap();
            }
        }
    }
    writeln!(
        report,
        "\n{} directives, {} failed",
        scenario.directives.len(),
        failures
    )
    .unwrap();
    let mut artifacts = vec![Artifact {
        name: "report.txt".into(),
        contents: report.clone(),
    }];
    artifacts.extend(runner.artifacts);
    RunOutput {
        report,
        artifacts,
        failures,
    }
}
