//! Intensity of action tendencies.
//!
//! `e1 > e2` when every circumstance that triggers `e2` also triggers `e1`
//! but not conversely, i.e. the satisfying set of `e2`'s condition is a strict
//! subset of `e1`'s. Qualities play no part, so tendencies with different
//! actions are still comparable. Logically equivalent conditions get their
//! own `Equal` verdict; everything else is `Incomparable`.

use std::fmt;

use crate::logic::{Circumstance, Enumerator, Formula, LogicError};
use crate::tendency::{ActionName, ActionTendency};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Stronger,
    Weaker,
    Equal,
    Incomparable,
}

impl Verdict {
    pub fn mirror(self) -> Verdict {
        match self {
            Verdict::Stronger => Verdict::Weaker,
            Verdict::Weaker => Verdict::Stronger,
            v => v,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Stronger => ">",
            Verdict::Weaker => "<",
            Verdict::Equal => "=",
            Verdict::Incomparable => "||",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntensityRelation {
    pub verdict: Verdict,
    /// Stronger: the left fires and the right does not. Weaker: the reverse.
    /// Incomparable: the left fires and the right does not; swapping the
    /// arguments yields the other direction.
    pub witness: Option<Circumstance>,
}

impl IntensityRelation {
    /// Fixed text form, e.g. `E1 > E2 (witness: C1=1, C2=0)`.
    pub fn render(&self, left: &str, right: &str) -> String {
        match (self.verdict, &self.witness) {
            (Verdict::Stronger | Verdict::Incomparable, Some(w)) => {
                format!("{left} {} {right} (witness: {w})", self.verdict.symbol())
            }
            _ => format!("{left} {} {right}", self.verdict.symbol()),
        }
    }
}

impl fmt::Display for IntensityRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("E1", "E2"))
    }
}

/// Compares two conditions as if they were condition parts of tendencies.
pub fn compare_conditions_with(
    enumerator: &Enumerator,
    c1: &Formula,
    c2: &Formula,
) -> Result<IntensityRelation, LogicError> {
    let sep = enumerator.separate(c1, c2)?;
    let relation = match (sep.left_only, sep.right_only) {
        (None, None) => IntensityRelation {
            verdict: Verdict::Equal,
            witness: None,
        },
        (Some(w), None) => IntensityRelation {
            verdict: Verdict::Stronger,
            witness: Some(w),
        },
        (None, Some(w)) => IntensityRelation {
            verdict: Verdict::Weaker,
            witness: Some(w),
        },
        (Some(w), Some(_)) => IntensityRelation {
            verdict: Verdict::Incomparable,
            witness: Some(w),
        },
    };
    Ok(relation)
}

pub fn compare_with(
    enumerator: &Enumerator,
    e1: &ActionTendency,
    e2: &ActionTendency,
) -> Result<IntensityRelation, LogicError> {
    compare_conditions_with(enumerator, &e1.condition, &e2.condition)
}

pub fn compare(e1: &ActionTendency, e2: &ActionTendency) -> Result<IntensityRelation, LogicError> {
    compare_with(&Enumerator::default(), e1, e2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub ids: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub witness: Option<Circumstance>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderReport {
    pub size: usize,
    pub pairs_checked: usize,
    pub irreflexive_violations: Vec<Violation>,
    pub antisymmetry_violations: Vec<Violation>,
    pub transitivity_violations: Vec<Violation>,
    /// Every `(a, b)` with `a > b`, in input order.
    pub stronger: Vec<(String, String)>,
}

impl OrderReport {
    pub fn is_strict_partial_order(&self) -> bool {
        self.irreflexive_violations.is_empty()
            && self.antisymmetry_violations.is_empty()
            && self.transitivity_violations.is_empty()
    }

    /// True when every two distinct members are strictly ordered.
    pub fn is_chain(&self) -> bool {
        self.stronger.len() == self.size * self.size.saturating_sub(1) / 2
            && self.is_strict_partial_order()
    }

    pub fn violation_count(&self) -> usize {
        self.irreflexive_violations.len()
            + self.antisymmetry_violations.len()
            + self.transitivity_violations.len()
    }
}

/// Checks irreflexivity, antisymmetry and transitivity of `>` over `ts`.
///
/// These laws follow from strict set inclusion, so any violation points at a
/// bug in the comparison itself.
pub fn verify_order_laws_with(
    enumerator: &Enumerator,
    ts: &[ActionTendency],
) -> Result<OrderReport, LogicError> {
    let n = ts.len();
    let mut matrix = Vec::with_capacity(n);
    for a in ts {
        let row = ts
            .iter()
            .map(|b| compare_with(enumerator, a, b))
            .collect::<Result<Vec<_>, _>>()?;
        matrix.push(row);
    }
    let mut report = OrderReport {
        size: n,
        pairs_checked: n * n,
        ..OrderReport::default()
    };
    let ids = |idx: &[usize]| idx.iter().map(|&i| ts[i].id.clone()).collect::<Vec<_>>();

    for i in 0..n {
        let own = &matrix[i][i];
        if own.verdict != Verdict::Equal {
            report.irreflexive_violations.push(Violation {
                ids: ids(&[i]),
                verdicts: vec![own.verdict],
                witness: own.witness.clone(),
            });
        }
        for j in 0..n {
            let (ij, ji) = (&matrix[i][j], &matrix[j][i]);
            if i != j && ij.verdict == Verdict::Stronger {
                report.stronger.push((ts[i].id.clone(), ts[j].id.clone()));
            }
            // Each unordered pair once; a Stronger must be mirrored by Weaker.
            if i < j && ji.verdict != ij.verdict.mirror() {
                report.antisymmetry_violations.push(Violation {
                    ids: ids(&[i, j]),
                    verdicts: vec![ij.verdict, ji.verdict],
                    witness: ij.witness.clone(),
                });
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            if matrix[a][b].verdict != Verdict::Stronger {
                continue;
            }
            for c in 0..n {
                if matrix[b][c].verdict == Verdict::Stronger
                    && matrix[a][c].verdict != Verdict::Stronger
                {
                    report.transitivity_violations.push(Violation {
                        ids: ids(&[a, b, c]),
                        verdicts: vec![
                            matrix[a][b].verdict,
                            matrix[b][c].verdict,
                            matrix[a][c].verdict,
                        ],
                        witness: matrix[a][c].witness.clone(),
                    });
                }
            }
        }
    }
    Ok(report)
}

pub fn verify_order_laws(ts: &[ActionTendency]) -> Result<OrderReport, LogicError> {
    verify_order_laws_with(&Enumerator::default(), ts)
}

/// Executing the action of a firing tendency; `None` when it does not fire.
pub fn satisfy(t: &ActionTendency, c: &Circumstance) -> Result<Option<ActionName>, LogicError> {
    Ok(t.fires(c)?.then(|| t.quality.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{evaluate, parse_formula};
    use crate::tendency::TendencyKind;
    use proptest::prelude::*;

    fn t(id: &str, cond: &str, quality: &str) -> ActionTendency {
        ActionTendency::new(
            id,
            ActionName::new(quality).unwrap(),
            parse_formula(cond).unwrap(),
            TendencyKind::Emotion,
        )
        .unwrap()
    }

    #[test]
    fn fewer_conjuncts_is_stronger() {
        let r = compare(&t("a", "C1", "eat"), &t("b", "C1 & C2", "eat")).unwrap();
        assert_eq!(r.verdict, Verdict::Stronger);
        assert_eq!(
            r.witness,
            Some(Circumstance::new().with("C1", true).with("C2", false))
        );
        assert_eq!(
            r.render("left", "right"),
            "left > right (witness: C1=1, C2=0)"
        );
    }

    #[test]
    fn disjunction_is_stronger() {
        let r = compare(&t("a", "C1 | C2", "eat"), &t("b", "C1", "eat")).unwrap();
        assert_eq!(r.verdict, Verdict::Stronger);
    }

    #[test]
    fn self_comparison_is_equal() {
        let e = t("e", "C1 & !C2", "eat");
        let r = compare(&e, &e).unwrap();
        assert_eq!(r.verdict, Verdict::Equal);
        assert_eq!(r.witness, None);
        assert_eq!(r.render("e", "e"), "e = e");
    }

    #[test]
    fn fear_and_thirst_over_distinct_atoms_are_incomparable() {
        // Rows over (D, W): D alone triggers fear only, W alone thirst only.
        let fear = t("fear", "D", "flee");
        let thirst = t("thirst", "W", "drink");
        let r = compare(&fear, &thirst).unwrap();
        assert_eq!(r.verdict, Verdict::Incomparable);
        assert_eq!(
            r.witness,
            Some(Circumstance::new().with("D", true).with("W", false))
        );
        assert_eq!(
            r.render("fear", "thirst"),
            "fear || thirst (witness: D=1, W=0)"
        );
        let back = compare(&thirst, &fear).unwrap();
        assert_eq!(
            back.witness,
            Some(Circumstance::new().with("D", false).with("W", true))
        );
    }

    #[test]
    fn weaker_renders_without_witness() {
        let r = compare(&t("a", "C1 & C2", "eat"), &t("b", "C1", "eat")).unwrap();
        assert_eq!(r.verdict, Verdict::Weaker);
        assert_eq!(r.render("a", "b"), "a < b");
    }

    #[test]
    fn degenerate_conditions() {
        let dead1 = t("d1", "x & !x", "eat");
        let dead2 = t("d2", "false", "drink");
        let live = t("l", "y", "eat");
        let top = t("top", "y | !y", "eat");
        assert_eq!(compare(&dead1, &live).unwrap().verdict, Verdict::Weaker);
        assert_eq!(compare(&dead1, &dead2).unwrap().verdict, Verdict::Equal);
        assert_eq!(compare(&top, &live).unwrap().verdict, Verdict::Stronger);
        assert_eq!(
            compare(&top, &t("t2", "true", "x")).unwrap().verdict,
            Verdict::Equal
        );
    }

    #[test]
    fn force_and_emotion_compare_alike() {
        let mut force = t("gravity", "!support", "falls");
        force.kind = TendencyKind::Force;
        let emotion = t("fear", "!support & cliff", "flee");
        assert_eq!(
            compare(&force, &emotion).unwrap().verdict,
            Verdict::Stronger
        );
    }

    #[test]
    fn equivalent_rewrite_compares_equal() {
        let a = t("a", "C1", "eat");
        let b = t("b", "C1 | (C1 & C2)", "drink");
        assert_eq!(compare(&a, &b).unwrap().verdict, Verdict::Equal);
    }

    #[test]
    fn hunger_chain_has_no_violations() {
        let ts = [
            t("h1", "C1", "eat"),
            t("h2", "C1 & C2", "eat"),
            t("h3", "C1 & C2 & C3", "eat"),
        ];
        let report = verify_order_laws(&ts).unwrap();
        assert!(report.is_strict_partial_order());
        assert!(report.is_chain());
        assert_eq!(report.pairs_checked, 9);
        assert_eq!(report.stronger.len(), 3);
    }

    #[test]
    fn empty_and_singleton_sets() {
        let empty = verify_order_laws(&[]).unwrap();
        assert_eq!(empty.pairs_checked, 0);
        assert!(empty.is_strict_partial_order());
        let one = verify_order_laws(&[t("e", "a | b", "x")]).unwrap();
        assert_eq!(one.pairs_checked, 1);
        assert_eq!(one.violation_count(), 0);
    }

    #[test]
    fn incomparable_pair_is_not_a_chain() {
        let report = verify_order_laws(&[t("a", "D", "flee"), t("b", "W", "drink")]).unwrap();
        assert!(report.is_strict_partial_order());
        assert!(!report.is_chain());
    }

    #[test]
    fn satisfaction_is_firing() {
        let thirst = t("thirst", "water_at_hand", "drink");
        let wet = Circumstance::new().with("water_at_hand", true);
        let dry = Circumstance::new().with("water_at_hand", false);
        assert_eq!(satisfy(&thirst, &wet).unwrap().unwrap().as_str(), "drink");
        assert_eq!(satisfy(&thirst, &dry).unwrap(), None);
        let dead = t("dead", "false", "drink");
        assert_eq!(satisfy(&dead, &wet).unwrap(), None);
    }

    #[test]
    fn cap_exceeded_is_reported() {
        let e = Enumerator::new(1).unwrap();
        assert!(matches!(
            compare_with(&e, &t("a", "p", "x"), &t("b", "q", "x")),
            Err(LogicError::CapExceeded { atoms: 2, cap: 1 })
        ));
    }

    fn arb_condition() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![Just("p"), Just("q"), Just("r"), Just("s")]
            .prop_map(|a| Formula::atom(a).unwrap());
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| Formula::implies(l, r)),
            ]
        })
    }

    fn wrap(id: &str, f: Formula) -> ActionTendency {
        ActionTendency::new(
            id,
            ActionName::new("act").unwrap(),
            f,
            TendencyKind::Emotion,
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn mirror_symmetry(a in arb_condition(), b in arb_condition()) {
            let (ea, eb) = (wrap("a", a), wrap("b", b));
            let ab = compare(&ea, &eb).unwrap().verdict;
            let ba = compare(&eb, &ea).unwrap().verdict;
            prop_assert_eq!(ab.mirror(), ba);
        }

        #[test]
        fn witnesses_demonstrate_the_separation(a in arb_condition(), b in arb_condition()) {
            let r = compare(&wrap("a", a.clone()), &wrap("b", b.clone())).unwrap();
            let sep = |w: &Circumstance| (evaluate(&a, w).unwrap(), evaluate(&b, w).unwrap());
            match r.verdict {
                Verdict::Stronger | Verdict::Incomparable => {
                    prop_assert_eq!(sep(r.witness.as_ref().unwrap()), (true, false));
                }
                Verdict::Weaker => {
                    prop_assert_eq!(sep(r.witness.as_ref().unwrap()), (false, true));
                }
                Verdict::Equal => prop_assert!(r.witness.is_none()),
            }
        }

        #[test]
        fn invariant_under_equivalent_rewrites(a in arb_condition(), b in arb_condition()) {
            // a is equivalent to !!a and to a | (a & b).
            let base = compare(&wrap("a", a.clone()), &wrap("b", b.clone())).unwrap().verdict;
            let double_neg = Formula::not(Formula::not(a.clone()));
            let absorbed = Formula::or(a.clone(), Formula::and(a, b.clone()));
            prop_assert_eq!(compare(&wrap("a", double_neg), &wrap("b", b.clone())).unwrap().verdict, base);
            prop_assert_eq!(compare(&wrap("a", absorbed), &wrap("b", b)).unwrap().verdict, base);
        }

        #[test]
        fn random_sets_obey_the_order_laws(fs in proptest::collection::vec(arb_condition(), 0..6)) {
            let ts: Vec<_> = fs.into_iter().enumerate().map(|(i, f)| wrap(&format!("e{i}"), f)).collect();
            prop_assert!(verify_order_laws(&ts).unwrap().is_strict_partial_order());
        }
    }
}
