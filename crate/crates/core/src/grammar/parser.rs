//! Recursive-descent parser for the controlled imperative grammar.
//!
//! Prepositional phrases attach sequentially: each one constrains the noun
//! phrase immediately before it, so "the mail above the table in the middle
//! of Hallway 1" puts the region on the table, not the mail.

use std::fmt;

use thiserror::Error;

use super::ast::*;
use super::lexicon::{Lexicon, Token, DEGREES, MODIFIERS, REGIONS};
use crate::regions::{Degree, Depth, Lateral, Modifiers, RegionKind};
use crate::relations::{ObjectRelation, PathKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnknownVerb(String),
    SelectorRepetition(String),
    MissingHead(Option<String>),
    ContradictoryModifiers(String),
    RegionNotAllowed,
    ExpectedLocation(Option<String>),
    ExpectedPhrase(Option<String>),
    TrailingTokens(String),
}

/// A syntax error at a token index.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub index: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let found = |t: &Option<String>| t.as_deref().map_or("end of input".to_owned(), |t| format!("`{t}`"));
        write!(f, "token {}: ", self.index)?;
        match &self.kind {
            ParseErrorKind::Empty => write!(f, "empty instruction; expected a verb"),
            ParseErrorKind::UnknownVerb(t) => write!(f, "unknown verb `{t}`; expected a verb"),
            ParseErrorKind::SelectorRepetition(t) => {
                write!(f, "selector repeated at `{t}`; expected a property or object noun")
            }
            ParseErrorKind::MissingHead(t) => write!(f, "found {}; expected an object noun or region", found(t)),
            ParseErrorKind::ContradictoryModifiers(t) => {
                write!(f, "modifier `{t}` contradicts or repeats an earlier one")
            }
            ParseErrorKind::RegionNotAllowed => write!(f, "a region cannot be the ground of an object relation"),
            ParseErrorKind::ExpectedLocation(t) => write!(f, "found {}; expected a location name", found(t)),
            ParseErrorKind::ExpectedPhrase(t) => {
                write!(f, "found {}; expected a prepositional phrase", found(t))
            }
            ParseErrorKind::TrailingTokens(t) => write!(f, "unexpected `{t}` after the end of the instruction"),
        }
    }
}

fn relation_of(token: &str) -> Option<ObjectRelation> {
    Some(match token {
        "in-front-of" => ObjectRelation::InFrontOf,
        "behind" => ObjectRelation::Behind,
        "to-the-left-of" => ObjectRelation::LeftOf,
        "to-the-right-of" => ObjectRelation::RightOf,
        "above" => ObjectRelation::Above,
        "under" => ObjectRelation::Under,
        "close-to" | "near" => ObjectRelation::CloseTo,
        _ => return None,
    })
}

fn path_of(token: &str) -> Option<PathKind> {
    match token {
        "along" => Some(PathKind::Along),
        "around" => Some(PathKind::Around),
        _ => None,
    }
}

fn is_selector(token: &str) -> bool {
    token == "your" || Determiner::from_token(token).is_some() || Quantifier::from_token(token).is_some()
}

struct Parser<'a> {
    lex: &'a Lexicon,
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.peek_at(self.pos)
    }

    fn peek_at(&self, i: usize) -> Option<&'a str> {
        self.tokens.get(i).map(|t| t.text.as_str())
    }

    fn owned(&self, i: usize) -> Option<String> {
        self.peek_at(i).map(str::to_owned)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { index: self.pos, kind }
    }

    /// If a region reference (`degree? modifier* REGION`) starts at `i`,
    /// returns the index of its region noun.
    fn region_ahead(&self, mut i: usize) -> Option<usize> {
        while let Some(t) = self.peek_at(i) {
            if REGIONS.contains(&t) {
                return Some(i);
            }
            if DEGREES.contains(&t) || MODIFIERS.contains(&t) {
                i += 1;
            } else {
                return None;
            }
        }
        None
    }

    /// Region or location phrase after a place preposition at `self.pos`.
    fn place_phrase_ahead(&self) -> bool {
        let mut i = self.pos + 1;
        if self.peek_at(i) == Some("the") {
            i += 1;
        }
        self.region_ahead(i).is_some() || self.peek_at(self.pos + 1).is_some_and(|t| self.lex.location(t).is_some())
    }

    fn instruction(&mut self, raw: &str) -> Result<Instruction, ParseError> {
        let Some(first) = self.peek() else {
            return Err(self.err(ParseErrorKind::Empty));
        };
        let verb = self
            .lex
            .verb(first)
            .ok_or_else(|| self.err(ParseErrorKind::UnknownVerb(first.to_owned())))?
            .to_owned();
        self.pos += 1;

        let intro = match self.peek() {
            Some(t) if path_of(t).is_some() => {
                self.pos += 1;
                path_of(t).map(Intro::Path)
            }
            Some(t) if Preposition::from_token(t).is_some() => {
                self.pos += 1;
                Preposition::from_token(t).map(Intro::Preposition)
            }
            _ => None,
        };
        let spec = self.object_spec(true)?;

        let destination = match self.peek().and_then(Preposition::from_token) {
            Some(preposition) => {
                self.pos += 1;
                let spec = self.object_spec(false)?;
                Some(Destination { preposition, spec })
            }
            None => None,
        };
        if let Some(t) = self.peek() {
            return Err(self.err(ParseErrorKind::TrailingTokens(t.to_owned())));
        }
        Ok(Instruction {
            verb,
            intro,
            spec,
            destination,
            raw_text: raw.trim().to_owned(),
        })
    }

    fn selector(&mut self) -> Result<Selector, ParseError> {
        let selector = match self.peek() {
            Some("your") => {
                self.pos += 1;
                match self.peek().and_then(Quantifier::from_token) {
                    Some(q) => {
                        self.pos += 1;
                        Selector::Your(Some(q))
                    }
                    None => Selector::Your(None),
                }
            }
            Some(t) => {
                if let Some(d) = Determiner::from_token(t) {
                    self.pos += 1;
                    Selector::Determiner(d)
                } else if let Some(q) = Quantifier::from_token(t) {
                    self.pos += 1;
                    Selector::Quantifier(q)
                } else {
                    Selector::Bare
                }
            }
            None => Selector::Bare,
        };
        if selector != Selector::Bare {
            if let Some(t) = self.peek().filter(|t| is_selector(t)) {
                return Err(self.err(ParseErrorKind::SelectorRepetition(t.to_owned())));
            }
        }
        Ok(selector)
    }

    fn object_spec(&mut self, allow_region: bool) -> Result<ObjectSpec, ParseError> {
        let selector = self.selector()?;
        if self.region_ahead(self.pos).is_some() {
            if !allow_region {
                return Err(self.err(ParseErrorKind::RegionNotAllowed));
            }
            let region = self.region_ref()?;
            return Ok(ObjectSpec {
                selector,
                properties: Vec::new(),
                head: Head::Region(region),
                constraints: Vec::new(),
            });
        }

        let mut properties = Vec::new();
        while let Some(t) = self.peek() {
            let Some((name, value)) = self.lex.adjective(t) else { break };
            let next = self.peek_at(self.pos + 1);
            let continues = next.is_some_and(|n| self.lex.adjective(n).is_some() || self.lex.noun(n).is_some());
            if !continues {
                break;
            }
            properties.push(Property {
                name: name.map(str::to_owned),
                value: value.to_owned(),
            });
            self.pos += 1;
        }
        let head = match self.peek().and_then(|t| self.lex.noun(t)) {
            Some(ty) => ty.to_owned(),
            None => return Err(self.err(ParseErrorKind::MissingHead(self.owned(self.pos)))),
        };
        self.pos += 1;

        let mut constraints = Vec::new();
        while let Some(t) = self.peek() {
            if t == "that-are" {
                let next = self.peek_at(self.pos + 1);
                let ok = next.is_some_and(|n| relation_of(n).is_some() || Preposition::from_token(n).is_some());
                if !ok {
                    self.pos += 1;
                    return Err(self.err(ParseErrorKind::ExpectedPhrase(next.map(str::to_owned))));
                }
                self.pos += 1;
                continue;
            }
            if let Some(relation) = relation_of(t) {
                self.pos += 1;
                let ground = self.object_spec(false)?;
                let shared = ground.selector;
                constraints.push(SpatialConstraint::Relation { relation, ground });
                while self.peek() == Some("and") {
                    self.pos += 1;
                    let mut ground = self.object_spec(false)?;
                    if ground.selector == Selector::Bare {
                        ground.selector = shared;
                    }
                    constraints.push(SpatialConstraint::Relation { relation, ground });
                }
                continue;
            }
            if let Some(preposition) = Preposition::from_token(t) {
                if !self.place_phrase_ahead() {
                    break;
                }
                self.pos += 1;
                if let Some(location) = self.peek().and_then(|t| self.lex.location(t)) {
                    self.pos += 1;
                    constraints.push(SpatialConstraint::Location {
                        preposition,
                        location: location.to_owned(),
                    });
                    continue;
                }
                if self.peek() == Some("the") {
                    self.pos += 1;
                }
                let region = self.region_ref()?;
                constraints.push(SpatialConstraint::Region { preposition, region });
                continue;
            }
            break;
        }
        Ok(ObjectSpec {
            selector,
            properties,
            head: Head::Object(head),
            constraints,
        })
    }

    fn region_ref(&mut self) -> Result<RegionRef, ParseError> {
        let noun_at = self
            .region_ahead(self.pos)
            .ok_or_else(|| self.err(ParseErrorKind::MissingHead(self.owned(self.pos))))?;
        let kind = self
            .peek_at(noun_at)
            .and_then(RegionKind::from_noun)
            .ok_or_else(|| self.err(ParseErrorKind::MissingHead(self.owned(noun_at))))?;
        let single_instance = kind.instances().len() == 1;

        let mut degree = None;
        let mut modifiers = Modifiers::NONE;
        let first = self.pos;
        while self.pos < noun_at {
            let t = self.peek().unwrap_or_default();
            let in_degree_slot = self.pos == first && degree.is_none();
            match t {
                "strict" if in_degree_slot => degree = Some(Degree::Strict),
                "proximate" if in_degree_slot => degree = Some(Degree::Proximate),
                // "near middle" grades the middle; before a corner, end or
                // side "near" picks the nearer instance.
                "near" if in_degree_slot && single_instance => degree = Some(Degree::Near),
                "near" | "far" => {
                    let depth = if t == "near" { Depth::Near } else { Depth::Far };
                    if modifiers.depth.is_some() {
                        return Err(self.err(ParseErrorKind::ContradictoryModifiers(t.to_owned())));
                    }
                    modifiers.depth = Some(depth);
                }
                "left" | "right" => {
                    let lateral = if t == "left" { Lateral::Left } else { Lateral::Right };
                    if modifiers.lateral.is_some() {
                        return Err(self.err(ParseErrorKind::ContradictoryModifiers(t.to_owned())));
                    }
                    modifiers.lateral = Some(lateral);
                }
                // a degree word out of position
                _ => return Err(self.err(ParseErrorKind::MissingHead(Some(t.to_owned())))),
            }
            self.pos += 1;
        }
        self.pos = noun_at + 1;

        let location = if self.peek() == Some("of") {
            self.pos += 1;
            match self.peek().and_then(|t| self.lex.location(t)) {
                Some(l) => {
                    self.pos += 1;
                    Some(l.to_owned())
                }
                None => return Err(self.err(ParseErrorKind::ExpectedLocation(self.owned(self.pos)))),
            }
        } else {
            None
        };
        Ok(RegionRef {
            kind,
            degree,
            modifiers,
            location,
        })
    }
}

/// Parses an already tokenized instruction.
pub fn parse_tokens(lex: &Lexicon, tokens: &[Token], raw: &str) -> Result<Instruction, ParseError> {
    Parser { lex, tokens, pos: 0 }.instruction(raw)
}

/// Tokenizes and parses one instruction.
pub fn parse_instruction(lex: &Lexicon, text: &str) -> Result<Instruction, ParseError> {
    let tokens = lex.tokenize(text);
    parse_tokens(lex, &tokens, text)
}
