//! Propositional formulas over named atoms.
//!
//! Formulas describe circumstances: the condition part of an action tendency,
//! the goal of a wish, the trigger of a regularity. Evaluation is classical and
//! total over a [`Circumstance`]; entailment is decided by truth-table
//! enumeration (see [`Enumerator`]).

mod enumerate;
mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use enumerate::{Enumerator, DEFAULT_CAP, MAX_CAP};
pub use parser::{parse_formula, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("{atoms} atoms exceed the enumeration cap of {cap}")]
    CapExceeded { atoms: usize, cap: usize },
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("enumeration cap {0} is outside 0..={max}", max = MAX_CAP)]
    InvalidCap(usize),
}

/// True when `name` matches `[A-Za-z][A-Za-z0-9_]*` and is not a reserved word.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "true" && name != "false"
}

/// A propositional letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, LogicError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Atom(name))
        } else {
            Err(LogicError::InvalidIdentifier(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Builds an atom formula, validating the name.
    pub fn atom(name: &str) -> Result<Self, LogicError> {
        Atom::new(name).map(Formula::Atom)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    /// Left-nested conjunction of `parts`; `True` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Distinct atom names, in lexicographic order.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| {
            out.insert(a.to_owned());
        });
        out
    }

    pub(crate) fn for_each_atom<'a>(&'a self, visit: &mut impl FnMut(&'a str)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => visit(a.as_str()),
            Formula::Not(f) => f.for_each_atom(visit),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.for_each_atom(visit);
                r.for_each_atom(visit);
            }
        }
    }

    /// Height of the tree; constants and atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// Evaluates against an arbitrary atom lookup.
    pub fn eval_with<L>(&self, lookup: &L) -> Result<bool, LogicError>
    where
        L: Fn(&str) -> Option<bool>,
    {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => {
                lookup(a.as_str()).ok_or_else(|| LogicError::UnknownAtom(a.as_str().to_owned()))?
            }
            Formula::Not(f) => !f.eval_with(lookup)?,
            Formula::And(l, r) => l.eval_with(lookup)? && r.eval_with(lookup)?,
            Formula::Or(l, r) => l.eval_with(lookup)? || r.eval_with(lookup)?,
            Formula::Implies(l, r) => !l.eval_with(lookup)? || r.eval_with(lookup)?,
        })
    }

    // Binding strength used by the printer: higher binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) => 4,
            Formula::True | Formula::False | Formula::Atom(_) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => f.write_str(a.as_str()),
            Formula::Not(inner) => {
                f.write_str("!")?;
                inner.write_at(f, 4)
            }
            Formula::And(l, r) => {
                l.write_at(f, 3)?;
                f.write_str(" & ")?;
                r.write_at(f, 4)
            }
            Formula::Or(l, r) => {
                l.write_at(f, 2)?;
                f.write_str(" | ")?;
                r.write_at(f, 3)
            }
            // right-associative
            Formula::Implies(l, r) => {
                l.write_at(f, 2)?;
                f.write_str(" -> ")?;
                r.write_at(f, 1)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// A total truth assignment over a declared atom universe.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Circumstance {
    assignment: BTreeMap<String, bool>,
}

impl Circumstance {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every atom in `universe` set to false.
    pub fn all_false<'a>(universe: impl IntoIterator<Item = &'a str>) -> Self {
        Circumstance {
            assignment: universe
                .into_iter()
                .map(|a| (a.to_owned(), false))
                .collect(),
        }
    }

    pub fn with(mut self, atom: &str, value: bool) -> Self {
        self.set(atom, value);
        self
    }

    pub fn set(&mut self, atom: &str, value: bool) {
        self.assignment.insert(atom.to_owned(), value);
    }

    pub fn get(&self, atom: &str) -> Option<bool> {
        self.assignment.get(atom).copied()
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.assignment.contains_key(atom)
    }

    pub fn universe(&self) -> impl Iterator<Item = &str> {
        self.assignment.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.assignment.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// The sub-assignment over `atoms`; atoms outside the universe are skipped.
    pub fn restrict<'a>(&self, atoms: impl IntoIterator<Item = &'a str>) -> Circumstance {
        Circumstance {
            assignment: atoms
                .into_iter()
                .filter_map(|a| self.get(a).map(|v| (a.to_owned(), v)))
                .collect(),
        }
    }
}

impl FromIterator<(String, bool)> for Circumstance {
    fn from_iter<I: IntoIterator<Item = (String, bool)>>(iter: I) -> Self {
        Circumstance {
            assignment: iter.into_iter().collect(),
        }
    }
}

/// Renders as `a=1, b=0` in lexicographic atom order.
impl fmt::Display for Circumstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (atom, value)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{atom}={}", u8::from(value))?;
        }
        Ok(())
    }
}

pub fn evaluate(formula: &Formula, circumstance: &Circumstance) -> Result<bool, LogicError> {
    formula.eval_with(&|a| circumstance.get(a))
}

pub fn entails(premise: &Formula, conclusion: &Formula) -> Result<bool, LogicError> {
    Enumerator::default().entails(premise, conclusion)
}

pub fn equivalent(f1: &Formula, f2: &Formula) -> Result<bool, LogicError> {
    Enumerator::default().equivalent(f1, f2)
}

pub fn satisfiable(f: &Formula) -> Result<bool, LogicError> {
    Enumerator::default().satisfiable(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("C1"));
        assert!(is_identifier("on_diet"));
        assert!(!is_identifier("1C"));
        assert!(!is_identifier("_x"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("true"));
        assert!(!is_identifier("a-b"));
    }

    #[test]
    fn evaluate_constants_and_tables() {
        let any = Circumstance::new().with("x", true);
        assert!(evaluate(&Formula::True, &any).unwrap());
        let c = Circumstance::new().with("C1", true).with("C2", false);
        assert!(!evaluate(&f("C1 & C2"), &c).unwrap());
    }

    #[test]
    fn force_schema_truth_table() {
        // Hand-enumerated rows of !C -> M as (C, M, value).
        let rows = [
            (false, false, false),
            (false, true, true),
            (true, false, true),
            (true, true, true),
        ];
        let schema = f("!C -> M");
        for (c, m, expected) in rows {
            let circ = Circumstance::new().with("C", c).with("M", m);
            assert_eq!(evaluate(&schema, &circ).unwrap(), expected, "C={c} M={m}");
        }
    }

    #[test]
    fn evaluate_reports_missing_atom() {
        let c = Circumstance::new().with("C1", true);
        assert_eq!(
            evaluate(&f("C1 & C2"), &c),
            Err(LogicError::UnknownAtom("C2".into()))
        );
    }

    #[test]
    fn atoms_are_sorted_and_distinct() {
        let atoms: Vec<_> = f("b & a | b -> c").atoms().into_iter().collect();
        assert_eq!(atoms, ["a", "b", "c"]);
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        assert_eq!(f("C1 & C2 | C3").to_string(), "C1 & C2 | C3");
        assert_eq!(f("C1 & (C2 | C3)").to_string(), "C1 & (C2 | C3)");
        assert_eq!(f("(a -> b) -> c").to_string(), "(a -> b) -> c");
        assert_eq!(f("a -> b -> c").to_string(), "a -> b -> c");
        assert_eq!(f("!(a & b)").to_string(), "!(a & b)");
        assert_eq!(f("a & (b & c)").to_string(), "a & (b & c)");
    }

    #[test]
    fn circumstance_display() {
        let c = Circumstance::new().with("b", false).with("a", true);
        assert_eq!(c.to_string(), "a=1, b=0");
    }
}
