//! Renders an [`Instruction`] back to text the parser accepts.

use super::ast::*;
use super::lexicon::Lexicon;
use crate::regions::{Depth, Lateral};
use crate::relations::PathKind;

fn words(token: &str) -> String {
    token.replace('-', " ")
}

/// Text for `instruction` that parses back to the same structure.
///
/// Consecutive constraints with the same object relation print as one
/// coordinated phrase ("near a monitor and a keyboard"), which is the only
/// way the parser produces them.
pub fn unparse(lex: &Lexicon, instruction: &Instruction) -> String {
    let mut out: Vec<String> = Vec::new();
    out.push(words(lex.verb_token(&instruction.verb).unwrap_or(&instruction.verb)));
    match instruction.intro {
        Some(Intro::Preposition(p)) => out.push(p.token().to_owned()),
        Some(Intro::Path(PathKind::Along)) => out.push("along".into()),
        Some(Intro::Path(PathKind::Around)) => out.push("around".into()),
        None => {}
    }
    spec(lex, &instruction.spec, &mut out);
    if let Some(dest) = &instruction.destination {
        out.push(dest.preposition.token().to_owned());
        spec(lex, &dest.spec, &mut out);
    }
    out.join(" ")
}

fn selector(sel: Selector, out: &mut Vec<String>) {
    match sel {
        Selector::Determiner(d) => out.push(words(d.token())),
        Selector::Quantifier(q) => out.push(words(q.token())),
        Selector::Your(q) => {
            out.push("your".into());
            if let Some(q) = q {
                out.push(words(q.token()));
            }
        }
        Selector::Bare => {}
    }
}

fn region(lex: &Lexicon, r: &RegionRef, out: &mut Vec<String>) {
    if let Some(d) = r.degree {
        out.push(d.word().to_owned());
    }
    match r.modifiers.depth {
        Some(Depth::Near) => out.push("near".into()),
        Some(Depth::Far) => out.push("far".into()),
        None => {}
    }
    match r.modifiers.lateral {
        Some(Lateral::Left) => out.push("left".into()),
        Some(Lateral::Right) => out.push("right".into()),
        None => {}
    }
    out.push(r.kind.noun().to_owned());
    if let Some(loc) = &r.location {
        out.push("of".into());
        out.push(words(lex.location_token(loc).unwrap_or(loc)));
    }
}

fn spec(lex: &Lexicon, s: &ObjectSpec, out: &mut Vec<String>) {
    selector(s.selector, out);
    match &s.head {
        Head::Region(r) => region(lex, r, out),
        Head::Object(ty) => {
            for p in &s.properties {
                out.push(words(&lex.adjective_token(&p.value)));
            }
            out.push(words(lex.noun_token(ty).unwrap_or(ty)));
        }
    }
    let mut prev_relation = None;
    for c in &s.constraints {
        match c {
            SpatialConstraint::Relation { relation, ground } => {
                if prev_relation == Some(*relation) {
                    out.push("and".into());
                } else {
                    out.push(relation.to_string());
                }
                spec(lex, ground, out);
                prev_relation = Some(*relation);
                continue;
            }
            SpatialConstraint::Region { preposition, region: r } => {
                out.push(preposition.token().to_owned());
                out.push("the".into());
                region(lex, r, out);
            }
            SpatialConstraint::Location { preposition, location } => {
                out.push(preposition.token().to_owned());
                out.push(words(lex.location_token(location).unwrap_or(location)));
            }
        }
        prev_relation = None;
    }
}

/// Short text for an object phrase, used in warning messages.
pub fn describe(s: &ObjectSpec) -> String {
    let mut out = Vec::new();
    spec(&Lexicon::new(), s, &mut out);
    out.join(" ")
}
