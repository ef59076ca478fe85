//! The built-in dictionary of emotions, each read as a desire to do something.
//!
//! Base entries carry a template tendency over fixed placeholder atoms.
//! Pleasure and the feeling of beauty are forms of desire rather than desires
//! themselves: they have no condition and are recognised over traces by the
//! classifiers in [`crate::classify`].

use crate::logic::{parse_formula, Formula};
use crate::tendency::{ActionName, ActionTendency, TendencyKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryShape {
    Base(ActionTendency),
    Form { quality: Option<ActionName> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub shape: EntryShape,
    pub gloss: &'static str,
    /// The template condition only approximates the gloss.
    pub lossy: bool,
}

impl CatalogEntry {
    pub fn quality(&self) -> Option<&ActionName> {
        match &self.shape {
            EntryShape::Base(t) => Some(&t.quality),
            EntryShape::Form { quality } => quality.as_ref(),
        }
    }

    pub fn condition(&self) -> Option<&Formula> {
        match &self.shape {
            EntryShape::Base(t) => Some(&t.condition),
            EntryShape::Form { .. } => None,
        }
    }

    pub fn is_form(&self) -> bool {
        matches!(self.shape, EntryShape::Form { .. })
    }

    /// One tab-separated record: name, quality, condition, gloss. Forms use
    /// `-` for missing fields.
    pub fn export_line(&self) -> String {
        let quality = self.quality().map_or("-".to_owned(), ToString::to_string);
        let condition = match self.condition() {
            Some(c) => c.to_string(),
            None => "-".to_owned(),
        };
        format!("{}\t{}\t{}\t{}", self.name, quality, condition, self.gloss)
    }
}

// (name, quality, template condition, gloss, lossy)
const BASE: &[(&str, &str, &str, &str, bool)] = &[
    ("hunger", "eat", "food_at_hand", "feeling hungry: desiring to eat", false),
    ("thirst", "drink", "water_at_hand", "feeling thirst: desiring to drink", false),
    ("itch", "scratch", "itch_reachable", "feeling an itch: desiring to scratch", false),
    (
        "cold",
        "warm_oneself",
        "heat_source_at_hand",
        "feeling cold (hot): desiring to warm(cool) oneself",
        false,
    ),
    (
        "hot",
        "cool_oneself",
        "cool_source_at_hand",
        "feeling cold (hot): desiring to warm(cool) oneself",
        false,
    ),
    (
        "fear",
        "flee",
        "threat_present",
        "feeling of fear: desiring to flee, or escape, etc.",
        false,
    ),
    ("love", "be_with", "beloved_present", "feeling of love: desiring to be with", false),
    (
        "regret",
        "undo_deed",
        "deed_done",
        "regret: desiring to do what could have made oneself not do what was done by oneself",
        true,
    ),
    (
        "hate",
        "retaliate",
        "target_present",
        "hate: desiring to make someone feel pain, die, etc.; desiring to retaliate someone",
        false,
    ),
    (
        "pain",
        "end_fact",
        "fact_holds",
        "pain(in the general sense of unpleasant feeling): desiring, when P (a fact or a state of affairs) is true, to do something as a result of which P will not hold",
        false,
    ),
    (
        "excitement",
        "cheer",
        "goal_scored",
        "feeling of excitement (social emotion): desire to cheer",
        false,
    ),
];

pub fn standard_catalog() -> Vec<CatalogEntry> {
    let mut entries: Vec<CatalogEntry> = BASE
        .iter()
        .map(|&(name, quality, condition, gloss, lossy)| {
            let tendency = ActionTendency::new(
                name,
                ActionName::new(quality).expect("catalog quality"),
                parse_formula(condition).expect("catalog condition"),
                TendencyKind::Emotion,
            )
            .expect("catalog id");
            CatalogEntry {
                name,
                shape: EntryShape::Base(tendency),
                gloss,
                lossy,
            }
        })
        .collect();
    entries.push(CatalogEntry {
        name: "pleasure",
        shape: EntryShape::Form { quality: None },
        gloss: "pleasure: desiring to do what is being done",
        lossy: false,
    });
    entries.push(CatalogEntry {
        name: "beauty",
        shape: EntryShape::Form {
            quality: Some(ActionName::new("see").expect("catalog quality")),
        },
        gloss: "feeling of beauty : desiring to see the object while I am actually seeing it",
        lossy: false,
    });
    entries
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    standard_catalog().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::satisfiable;

    #[test]
    fn contains_the_whole_dictionary() {
        let names: Vec<_> = standard_catalog().iter().map(|e| e.name).collect();
        assert_eq!(
            names,
            [
                "hunger",
                "thirst",
                "itch",
                "cold",
                "hot",
                "fear",
                "love",
                "regret",
                "hate",
                "pain",
                "excitement",
                "pleasure",
                "beauty"
            ]
        );
    }

    #[test]
    fn fear_means_fleeing() {
        let fear = lookup("fear").unwrap();
        assert_eq!(fear.quality().unwrap().as_str(), "flee");
        assert!(fear.gloss.contains("desiring to flee, or escape"));
    }

    #[test]
    fn itch_means_scratching() {
        assert_eq!(
            lookup("itch").unwrap().quality().unwrap().as_str(),
            "scratch"
        );
    }

    #[test]
    fn beauty_and_pleasure_are_forms() {
        let beauty = lookup("beauty").unwrap();
        assert!(beauty.is_form());
        assert_eq!(beauty.condition(), None);
        assert!(lookup("pleasure").unwrap().is_form());
        assert_eq!(lookup("thirst").map(|e| e.is_form()), Some(false));
    }

    #[test]
    fn templates_reparse_and_are_satisfiable() {
        for entry in standard_catalog() {
            if let Some(cond) = entry.condition() {
                assert_eq!(&parse_formula(&cond.to_string()).unwrap(), cond);
                assert!(satisfiable(cond).unwrap(), "{}", entry.name);
            }
        }
    }

    #[test]
    fn regret_is_marked_lossy() {
        assert!(lookup("regret").unwrap().lossy);
    }

    #[test]
    fn export_record() {
        assert_eq!(
            lookup("thirst").unwrap().export_line(),
            "thirst\tdrink\twater_at_hand\tfeeling thirst: desiring to drink"
        );
        assert!(lookup("pleasure")
            .unwrap()
            .export_line()
            .starts_with("pleasure\t-\t-\t"));
    }

    #[test]
    fn unknown_entry() {
        assert!(lookup("ennui").is_none());
    }
}
