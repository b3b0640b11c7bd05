use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::{surface, token_text};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Effect {
    Consume,
    Acquire,
    Place,
    Transform,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ActionDef {
    pub verb: String,
    pub effect: Effect,
    #[serde(default = "one")]
    pub duration_ticks: u32,
    #[serde(default = "yes")]
    pub requires_target: bool,
    #[serde(default)]
    pub aliases: Vec<String>,
}

fn one() -> u32 {
    1
}

fn yes() -> bool {
    true
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegistryError {
    #[error("action registry is malformed: {0}")]
    Syntax(String),
    #[error("verb `{0}` is declared twice")]
    Duplicate(String),
    #[error("verb `{0}` needs a positive durationTicks")]
    ZeroDuration(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryDoc {
    #[serde(default)]
    action: Vec<ActionDef>,
}

/// Verbs an agent can carry out, keyed by canonical verb id ("pin-up").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionRegistry {
    defs: BTreeMap<String, ActionDef>,
}

const DEFAULT_ACTIONS: &str = r#"
[[action]]
verb = "eat"
effect = "consume"
durationTicks = 2

[[action]]
verb = "pickup"
effect = "acquire"
aliases = ["pick up", "take", "grab"]

[[action]]
verb = "carry"
effect = "acquire"

[[action]]
verb = "deliver"
effect = "place"

[[action]]
verb = "pin up"
effect = "place"
durationTicks = 2

[[action]]
verb = "put"
effect = "place"
aliases = ["drop"]

[[action]]
verb = "water"
effect = "transform"
durationTicks = 2

[[action]]
verb = "fill"
effect = "place"
durationTicks = 2

[[action]]
verb = "go"
effect = "none"
requiresTarget = false
aliases = ["move"]

[[action]]
verb = "stand"
effect = "none"
requiresTarget = false

[[action]]
verb = "walk"
effect = "none"
requiresTarget = false
"#;

impl Default for ActionRegistry {
    fn default() -> Self {
        Self::load(DEFAULT_ACTIONS).expect("built-in registry is valid")
    }
}

/// Canonical id for a verb as written ("Pin up" → "pin-up").
pub fn verb_id(verb: &str) -> String {
    token_text(&surface(verb))
}

impl ActionRegistry {
    /// Parses a registry document: a list of `[[action]]` tables.
    pub fn load(text: &str) -> Result<Self, RegistryError> {
        let doc: RegistryDoc = toml::from_str(text).map_err(|e| RegistryError::Syntax(e.to_string()))?;
        let mut defs = BTreeMap::new();
        let mut surfaces = std::collections::BTreeSet::new();
        for def in doc.action {
            let id = verb_id(&def.verb);
            if def.duration_ticks == 0 {
                return Err(RegistryError::ZeroDuration(def.verb));
            }
            for s in std::iter::once(&def.verb).chain(&def.aliases) {
                if !surfaces.insert(verb_id(s)) {
                    return Err(RegistryError::Duplicate(s.clone()));
                }
            }
            defs.insert(id, def);
        }
        Ok(Self { defs })
    }

    pub fn get(&self, verb: &str) -> Option<&ActionDef> {
        self.defs.get(verb)
    }

    pub fn verbs(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    /// `(surface form, canonical id)` pairs for building a lexicon.
    pub fn surface_forms(&self) -> Vec<(String, String)> {
        self.defs
            .iter()
            .flat_map(|(id, def)| {
                std::iter::once(&def.verb)
                    .chain(&def.aliases)
                    .map(move |s| (surface(s), id.clone()))
            })
            .collect()
    }
}
