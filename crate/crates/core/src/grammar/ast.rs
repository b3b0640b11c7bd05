use std::fmt;

use serde::{Deserialize, Serialize};

use crate::regions::{Degree, Modifiers, RegionKind};
use crate::relations::{ObjectRelation, PathKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Determiner {
    A,
    An,
    The,
    TheOnly,
    TheSame,
    Different,
    Both,
    Either,
}

impl Determiner {
    pub const ALL: [Determiner; 8] = [
        Determiner::A,
        Determiner::An,
        Determiner::The,
        Determiner::TheOnly,
        Determiner::TheSame,
        Determiner::Different,
        Determiner::Both,
        Determiner::Either,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Determiner::A => "a",
            Determiner::An => "an",
            Determiner::The => "the",
            Determiner::TheOnly => "the-only",
            Determiner::TheSame => "the-same",
            Determiner::Different => "different",
            Determiner::Both => "both",
            Determiner::Either => "either",
        }
    }

    pub fn from_token(t: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.token() == t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quantifier {
    All,
    ALotOf,
    Many,
    Several,
    AFew,
    ACouple,
    Any,
}

impl Quantifier {
    pub const ALL: [Quantifier; 7] = [
        Quantifier::All,
        Quantifier::ALotOf,
        Quantifier::Many,
        Quantifier::Several,
        Quantifier::AFew,
        Quantifier::ACouple,
        Quantifier::Any,
    ];

    /// Token form, also used as the key in quantifier config files.
    pub fn token(self) -> &'static str {
        match self {
            Quantifier::All => "all",
            Quantifier::ALotOf => "a-lot-of",
            Quantifier::Many => "many",
            Quantifier::Several => "several",
            Quantifier::AFew => "a-few",
            Quantifier::ACouple => "a-couple",
            Quantifier::Any => "any",
        }
    }

    pub fn from_token(t: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.token() == t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Selector {
    Determiner(Determiner),
    Quantifier(Quantifier),
    /// `your`, optionally followed by a quantifier.
    Your(Option<Quantifier>),
    /// No selector, as in "on billboard".
    Bare,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Property {
    /// Property the value belongs to, when the lexicon knows exactly one.
    pub name: Option<String>,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preposition {
    In,
    To,
    On,
    At,
    Into,
    Onto,
    For,
}

impl Preposition {
    pub const ALL: [Preposition; 7] = [
        Preposition::In,
        Preposition::To,
        Preposition::On,
        Preposition::At,
        Preposition::Into,
        Preposition::Onto,
        Preposition::For,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Preposition::In => "in",
            Preposition::To => "to",
            Preposition::On => "on",
            Preposition::At => "at",
            Preposition::Into => "into",
            Preposition::Onto => "onto",
            Preposition::For => "for",
        }
    }

    pub fn from_token(t: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.token() == t)
    }
}

/// `degree? modifier* REGION ("of" LOCID)?`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionRef {
    pub kind: RegionKind,
    pub degree: Option<Degree>,
    pub modifiers: Modifiers,
    pub location: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Head {
    /// Object type name.
    Object(String),
    Region(RegionRef),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpatialConstraint {
    Relation {
        relation: ObjectRelation,
        ground: ObjectSpec,
    },
    Region {
        preposition: Preposition,
        region: RegionRef,
    },
    Location {
        preposition: Preposition,
        location: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub selector: Selector,
    pub properties: Vec<Property>,
    pub head: Head,
    pub constraints: Vec<SpatialConstraint>,
}

impl ObjectSpec {
    pub fn object(selector: Selector, type_name: impl Into<String>) -> Self {
        Self {
            selector,
            properties: Vec::new(),
            head: Head::Object(type_name.into()),
            constraints: Vec::new(),
        }
    }

    pub fn region(&self) -> Option<&RegionRef> {
        match &self.head {
            Head::Region(r) => Some(r),
            Head::Object(_) => None,
        }
    }
}

/// What sits between the verb and the object phrase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Intro {
    Preposition(Preposition),
    Path(PathKind),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Destination {
    pub preposition: Preposition,
    pub spec: ObjectSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instruction {
    /// Canonical verb id from the action registry.
    pub verb: String,
    pub intro: Option<Intro>,
    pub spec: ObjectSpec,
    pub destination: Option<Destination>,
    pub raw_text: String,
}

impl Instruction {
    /// Structural equality, ignoring the source text.
    pub fn same_structure(&self, other: &Instruction) -> bool {
        self.verb == other.verb
            && self.intro == other.intro
            && self.spec == other.spec
            && self.destination == other.destination
    }

    pub fn path_kind(&self) -> Option<PathKind> {
        match self.intro {
            Some(Intro::Path(k)) => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw_text)
    }
}
