use super::{Circumstance, Formula, LogicError};

pub const DEFAULT_CAP: usize = 20;
/// Largest cap accepted; 2^30 rows is already far beyond desk scale.
pub const MAX_CAP: usize = 30;

/// Truth-table decision procedure with a bound on the atom count.
///
/// Circumstances range over the union of the atoms of the formulas involved,
/// sorted lexicographically. Rows are visited in binary counting order with
/// the first atom as the most significant bit, so the first row is all-false
/// and any reported witness is the lexicographically smallest one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumerator {
    cap: usize,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator { cap: DEFAULT_CAP }
    }
}

/// Outcome of one joint pass over two formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    /// First circumstance satisfying the left formula but not the right.
    pub left_only: Option<Circumstance>,
    /// First circumstance satisfying the right formula but not the left.
    pub right_only: Option<Circumstance>,
}

impl Enumerator {
    pub fn new(cap: usize) -> Result<Self, LogicError> {
        if cap > MAX_CAP {
            return Err(LogicError::InvalidCap(cap));
        }
        Ok(Enumerator { cap })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn universe<'a>(&self, formulas: &[&'a Formula]) -> Result<Vec<&'a str>, LogicError> {
        let mut atoms = Vec::new();
        for f in formulas {
            f.for_each_atom(&mut |a| atoms.push(a));
        }
        atoms.sort_unstable();
        atoms.dedup();
        if atoms.len() > self.cap {
            return Err(LogicError::CapExceeded {
                atoms: atoms.len(),
                cap: self.cap,
            });
        }
        Ok(atoms)
    }

    fn row_value(atoms: &[&str], row: u64, name: &str) -> Option<bool> {
        let n = atoms.len();
        atoms
            .binary_search(&name)
            .ok()
            .map(|i| (row >> (n - 1 - i)) & 1 == 1)
    }

    fn row_circumstance(atoms: &[&str], row: u64) -> Circumstance {
        let n = atoms.len();
        atoms
            .iter()
            .enumerate()
            .map(|(i, a)| ((*a).to_owned(), (row >> (n - 1 - i)) & 1 == 1))
            .collect()
    }

    /// One pass over all circumstances of `left` and `right`, stopping as soon
    /// as both separating witnesses are known.
    pub fn separate(&self, left: &Formula, right: &Formula) -> Result<Separation, LogicError> {
        let atoms = self.universe(&[left, right])?;
        let mut left_only = None;
        let mut right_only = None;
        for row in 0..(1u64 << atoms.len()) {
            let lookup = |name: &str| Self::row_value(&atoms, row, name);
            let l = left.eval_with(&lookup)?;
            let r = right.eval_with(&lookup)?;
            if l && !r && left_only.is_none() {
                left_only = Some(row);
            }
            if r && !l && right_only.is_none() {
                right_only = Some(row);
            }
            if left_only.is_some() && right_only.is_some() {
                break;
            }
        }
        Ok(Separation {
            left_only: left_only.map(|r| Self::row_circumstance(&atoms, r)),
            right_only: right_only.map(|r| Self::row_circumstance(&atoms, r)),
        })
    }

    /// A circumstance satisfying `premise` and falsifying `conclusion`, if any.
    pub fn counterexample(
        &self,
        premise: &Formula,
        conclusion: &Formula,
    ) -> Result<Option<Circumstance>, LogicError> {
        let atoms = self.universe(&[premise, conclusion])?;
        for row in 0..(1u64 << atoms.len()) {
            let lookup = |name: &str| Self::row_value(&atoms, row, name);
            if premise.eval_with(&lookup)? && !conclusion.eval_with(&lookup)? {
                return Ok(Some(Self::row_circumstance(&atoms, row)));
            }
        }
        Ok(None)
    }

    pub fn entails(&self, premise: &Formula, conclusion: &Formula) -> Result<bool, LogicError> {
        Ok(self.counterexample(premise, conclusion)?.is_none())
    }

    pub fn equivalent(&self, f1: &Formula, f2: &Formula) -> Result<bool, LogicError> {
        let sep = self.separate(f1, f2)?;
        Ok(sep.left_only.is_none() && sep.right_only.is_none())
    }

    pub fn satisfiable(&self, f: &Formula) -> Result<bool, LogicError> {
        Ok(self.model(f)?.is_some())
    }

    /// First satisfying circumstance over `atoms(f)`.
    pub fn model(&self, f: &Formula) -> Result<Option<Circumstance>, LogicError> {
        self.counterexample(f, &Formula::False)
    }
}
