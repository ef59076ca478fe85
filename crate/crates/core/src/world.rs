//! Time-indexed circumstances.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::logic::Circumstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the world is not defined at step {0}")]
pub struct UndefinedStep(pub u64);

/// Snapshots keyed by step; a step without its own snapshot sees the most
/// recent earlier one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct World {
    snapshots: BTreeMap<u64, Circumstance>,
}

impl World {
    pub fn new() -> Self {
        Self::default()
    }

    /// The same circumstance at every step.
    pub fn constant(c: Circumstance) -> Self {
        let mut w = World::new();
        w.insert(0, c);
        w
    }

    /// `seq[i]` holds at step i; steps past the end keep the last entry.
    pub fn from_sequence(seq: impl IntoIterator<Item = Circumstance>) -> Self {
        World {
            snapshots: seq
                .into_iter()
                .enumerate()
                .map(|(i, c)| (i as u64, c))
                .collect(),
        }
    }

    pub fn insert(&mut self, step: u64, c: Circumstance) {
        self.snapshots.insert(step, c);
    }

    pub fn at(&self, step: u64) -> Result<&Circumstance, UndefinedStep> {
        self.snapshots
            .range(..=step)
            .next_back()
            .map(|(_, c)| c)
            .ok_or(UndefinedStep(step))
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }
}
