//! Emotions as action tendencies.
//!
//! An emotion (a desire) is a pair `S => A`: whenever the circumstance `S`
//! holds, the action `A` happens. The action fixes the emotion's quality; the
//! condition fixes its intensity, through inclusion of the circumstances that
//! trigger it. On top of that core this crate provides satiation dynamics,
//! trace classifiers for pleasure, pain and the sublime, wishes with their
//! check loops, and regularities tested against observation logs.

pub mod catalog;
pub mod classify;
pub mod dynamics;
pub mod intensity;
pub mod logic;
pub mod regularity;
pub mod scenario;
pub mod tendency;
pub mod trace;
pub mod wish;
pub mod world;

pub use intensity::{compare, IntensityRelation, Verdict};
pub use logic::{parse_formula, Circumstance, Enumerator, Formula};
pub use tendency::{ActionName, ActionTendency, TendencyKind};
pub use trace::{Event, EventKind, Trace};
