//! Controlled-English grammar: tokenizer, AST, parser and unparser.
//!
//! ```text
//! instruction := VERB (PATHREL | PREP)? objectspec (PREP objectspec)?
//! objectspec  := selector property* head pp*
//! selector    := DET | QUANT | "your" QUANT? | (nothing)
//! head        := OBJTYPE | regionref
//! regionref   := degree? modifier* REGION ("of" LOCID)?
//! pp          := ("that are")? OBJREL objectspec ("and" objectspec)*
//!              | PREP "the"? regionref
//!              | PREP LOCID
//! PREP        := "in" | "to" | "on" | "at" | "into" | "onto" | "for"
//! ```
//!
//! A trailing `PREP objectspec` names the destination of placing verbs
//! ("on billboard", "to the green container"). Heads may only be regions
//! directly after the verb.

mod ast;
mod lexicon;
mod parser;
mod print;

pub use ast::*;
pub use lexicon::{DETERMINERS, OBJECT_RELATIONS, PATH_RELATIONS, PLACE_PREPOSITIONS, QUANTIFIERS, DEGREES, MODIFIERS, REGIONS, plural_of, surface, token_text, Lexicon, Token};
pub use parser::{parse_instruction, parse_tokens, ParseError, ParseErrorKind};
pub use print::{describe, unparse};
