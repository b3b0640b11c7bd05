//! Word classes and the longest-match tokenizer.

use std::collections::{BTreeMap, BTreeSet};

use crate::world::WorldState;

/// A normalized token: lowercase words joined with `-` when a multiword
/// lexeme was merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// Number of input words the token spans.
    pub words: usize,
}

impl Token {
    pub fn new(text: impl Into<String>) -> Self {
        Self { text: text.into(), words: 1 }
    }
}

/// Multiword function lexemes and the token they become. "of" after a
/// quantifier is folded into the quantifier.
const FUNCTION_PHRASES: &[(&str, &str)] = &[
    ("a lot of", "a-lot-of"),
    ("a couple of", "a-couple"),
    ("a couple", "a-couple"),
    ("a few", "a-few"),
    ("in front of", "in-front-of"),
    ("to the left of", "to-the-left-of"),
    ("to the right of", "to-the-right-of"),
    ("close to", "close-to"),
    ("the only", "the-only"),
    ("the same", "the-same"),
    ("that are", "that-are"),
    ("that is", "that-are"),
    ("which are", "that-are"),
    ("which is", "that-are"),
];

pub const DETERMINERS: &[&str] = &["a", "an", "the", "the-only", "the-same", "different", "both", "either"];
pub const QUANTIFIERS: &[&str] = &["all", "a-lot-of", "many", "several", "a-few", "a-couple", "any"];
pub const OBJECT_RELATIONS: &[&str] = &[
    "in-front-of",
    "behind",
    "to-the-left-of",
    "to-the-right-of",
    "above",
    "under",
    "close-to",
    "near",
];
pub const PATH_RELATIONS: &[&str] = &["along", "around"];
pub const REGIONS: &[&str] = &["corner", "corners", "end", "ends", "middle", "side", "sides"];
pub const DEGREES: &[&str] = &["strict", "proximate", "near"];
pub const MODIFIERS: &[&str] = &["far", "near", "left", "right"];
/// Prepositions that introduce a region, location or destination phrase.
pub const PLACE_PREPOSITIONS: &[&str] = &["in", "to", "on", "at", "into", "onto", "for"];

/// Irregular plurals for type nouns.
const IRREGULAR_PLURALS: &[(&str, &str)] = &[
    ("mouse", "mice"),
    ("person", "people"),
    ("child", "children"),
    ("man", "men"),
    ("woman", "women"),
    ("foot", "feet"),
    ("tooth", "teeth"),
    ("shelf", "shelves"),
    ("knife", "knives"),
    ("leaf", "leaves"),
    ("box", "boxes"),
];

pub fn plural_of(word: &str) -> String {
    if let Some((_, p)) = IRREGULAR_PLURALS.iter().find(|(s, _)| *s == word) {
        return (*p).to_owned();
    }
    let consonant_y = word.len() > 1
        && word.ends_with('y')
        && !matches!(word.as_bytes()[word.len() - 2], b'a' | b'e' | b'i' | b'o' | b'u');
    if consonant_y {
        format!("{}ies", &word[..word.len() - 1])
    } else if ["s", "x", "z", "ch", "sh"].iter().any(|s| word.ends_with(s)) {
        format!("{word}es")
    } else {
        format!("{word}s")
    }
}

/// Surface form of an identifier: underscores and hyphens become spaces.
pub fn surface(id: &str) -> String {
    id.split(['_', '-', ' '])
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Token text for a surface phrase.
pub fn token_text(phrase: &str) -> String {
    phrase.split_whitespace().collect::<Vec<_>>().join("-")
}

/// Open word classes (verbs, nouns, adjectives, location names) gathered from
/// the world and the action registry, plus the closed function words.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    /// token text → canonical verb id
    verbs: BTreeMap<String, String>,
    /// canonical verb id → preferred token text
    verb_surface: BTreeMap<String, String>,
    /// token text → type name
    nouns: BTreeMap<String, String>,
    /// type name → singular token text
    noun_surface: BTreeMap<String, String>,
    /// token text → (property names carrying this value, value)
    adjectives: BTreeMap<String, (BTreeSet<String>, String)>,
    /// token text → location id
    locations: BTreeMap<String, String>,
    location_surface: BTreeMap<String, String>,
    /// multiword surface phrase → token text
    phrases: BTreeMap<String, String>,
    max_phrase_words: usize,
}

impl Lexicon {
    pub fn new() -> Self {
        let mut lex = Self::default();
        for (phrase, token) in FUNCTION_PHRASES {
            lex.add_phrase(phrase, token);
        }
        lex
    }

    /// Lexicon for a world, with verbs given as `(surface, canonical id)`.
    pub fn for_world<'a, I>(world: &WorldState, verbs: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut lex = Self::new();
        for (surface_form, canonical) in verbs {
            lex.add_verb(surface_form, canonical);
        }
        for name in world.types.names() {
            lex.add_type(name);
        }
        lex.add_type(crate::world::ROOT_TYPE);
        for obj in world.objects.values() {
            for (prop, value) in &obj.properties {
                lex.add_adjective(prop, value);
            }
        }
        for loc in &world.locations {
            lex.add_location(&loc.id);
        }
        lex
    }

    fn add_phrase(&mut self, phrase: &str, token: &str) {
        let words = phrase.split_whitespace().count();
        if words > 1 {
            self.phrases.insert(phrase.to_owned(), token.to_owned());
            self.max_phrase_words = self.max_phrase_words.max(words);
        }
    }

    pub fn add_verb(&mut self, surface_form: &str, canonical: &str) {
        let s = surface(surface_form);
        let tok = token_text(&s);
        self.add_phrase(&s, &tok);
        self.verbs.insert(tok.clone(), canonical.to_owned());
        self.verb_surface.entry(canonical.to_owned()).or_insert(tok);
    }

    pub fn add_type(&mut self, name: &str) {
        let s = surface(name);
        let mut words: Vec<&str> = s.split(' ').collect();
        let last = words.pop().unwrap_or_default();
        let mut plural_words: Vec<String> = words.iter().map(|w| (*w).to_owned()).collect();
        plural_words.push(plural_of(last));
        let plural = plural_words.join(" ");
        for form in [s.clone(), plural] {
            let tok = token_text(&form);
            self.add_phrase(&form, &tok);
            self.nouns.insert(tok, name.to_owned());
        }
        self.noun_surface.insert(name.to_owned(), token_text(&s));
    }

    pub fn add_adjective(&mut self, property: &str, value: &str) {
        let s = surface(value);
        let tok = token_text(&s);
        self.add_phrase(&s, &tok);
        let entry = self
            .adjectives
            .entry(tok)
            .or_insert_with(|| (BTreeSet::new(), value.to_owned()));
        entry.0.insert(property.to_owned());
    }

    pub fn add_location(&mut self, id: &str) {
        let s = surface(id);
        let tok = token_text(&s);
        self.add_phrase(&s, &tok);
        self.locations.insert(tok.clone(), id.to_owned());
        self.location_surface.insert(id.to_owned(), tok);
    }

    pub fn verb(&self, token: &str) -> Option<&str> {
        self.verbs.get(token).map(String::as_str)
    }

    pub fn verb_token(&self, canonical: &str) -> Option<&str> {
        self.verb_surface.get(canonical).map(String::as_str)
    }

    pub fn noun(&self, token: &str) -> Option<&str> {
        self.nouns.get(token).map(String::as_str)
    }

    pub fn noun_token(&self, type_name: &str) -> Option<&str> {
        self.noun_surface.get(type_name).map(String::as_str)
    }

    /// `(property name if unambiguous, value)` for an adjective token.
    pub fn adjective(&self, token: &str) -> Option<(Option<&str>, &str)> {
        self.adjectives.get(token).map(|(props, value)| {
            let name = (props.len() == 1).then(|| props.iter().next().map(String::as_str)).flatten();
            (name, value.as_str())
        })
    }

    pub fn adjective_token(&self, value: &str) -> String {
        token_text(&surface(value))
    }

    pub fn adjectives(&self) -> impl Iterator<Item = &str> {
        self.adjectives.keys().map(String::as_str)
    }

    pub fn location(&self, token: &str) -> Option<&str> {
        self.locations.get(token).map(String::as_str)
    }

    pub fn location_token(&self, id: &str) -> Option<&str> {
        self.location_surface.get(id).map(String::as_str)
    }

    pub fn verbs(&self) -> impl Iterator<Item = &str> {
        self.verb_surface.keys().map(String::as_str)
    }

    pub fn types(&self) -> impl Iterator<Item = &str> {
        self.noun_surface.keys().map(String::as_str)
    }

    pub fn location_ids(&self) -> impl Iterator<Item = &str> {
        self.location_surface.keys().map(String::as_str)
    }

    /// Multiword surface phrases known to the tokenizer.
    pub fn phrases(&self) -> impl Iterator<Item = (&str, &str)> {
        self.phrases.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Lowercases, strips punctuation and a leading list number such as
    /// `1)`, then merges multiword lexemes by longest match.
    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let words = normalize_words(text);
        let mut out = Vec::with_capacity(words.len());
        let mut i = 0;
        while i < words.len() {
            let longest = (2..=self.max_phrase_words.min(words.len() - i)).rev().find_map(|n| {
                let phrase = words[i..i + n].join(" ");
                self.phrases.get(&phrase).map(|tok| (n, tok.clone()))
            });
            match longest {
                Some((n, text)) => {
                    out.push(Token { text, words: n });
                    i += n;
                }
                None => {
                    out.push(Token::new(words[i].clone()));
                    i += 1;
                }
            }
        }
        out
    }
}

fn normalize_words(text: &str) -> Vec<String> {
    let mut words: Vec<String> = text
        .split_whitespace()
        .map(|w| {
            w.chars()
                .filter(|c| c.is_alphanumeric() || *c == '-' || *c == '_' || *c == ')')
                .flat_map(char::to_lowercase)
                .collect::<String>()
        })
        .filter(|w| !w.is_empty())
        .collect();
    if words.first().is_some_and(|w| is_list_number(w)) {
        words.remove(0);
    }
    words
        .into_iter()
        .map(|w| w.replace(')', ""))
        .filter(|w| !w.is_empty())
        .collect()
}

fn is_list_number(word: &str) -> bool {
    word.len() > 1 && word.ends_with(')') && word[..word.len() - 1].chars().all(|c| c.is_ascii_digit())
}
