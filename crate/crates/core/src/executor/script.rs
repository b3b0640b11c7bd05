use thiserror::Error;

use super::sim::{SimError, Simulation};
use super::trace::Event;
use crate::grammar::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScriptError {
    #[error("{agent}, instruction {index} ({text:?}): {error}")]
    Parse {
        agent: String,
        /// 1-based position in the agent's script.
        index: usize,
        text: String,
        error: ParseError,
    },
    #[error(transparent)]
    Sim(#[from] SimError),
}

fn marker_len(s: &str) -> Option<usize> {
    let digits = s.bytes().take_while(u8::is_ascii_digit).count();
    (digits > 0 && s.as_bytes().get(digits) == Some(&b')')).then_some(digits + 1)
}

/// Splits script text into instructions.
///
/// Numbered markers such as `2)` start a new instruction wherever they
/// begin a word, so a whole script may sit on one line. Without markers each
/// non-blank line is an instruction. Lines starting with `#` are comments.
pub fn parse_script(text: &str) -> Vec<String> {
    let body: Vec<&str> = text.lines().filter(|l| !l.trim_start().starts_with('#')).collect();
    let joined = body.join("\n");
    let numbered = joined
        .split_whitespace()
        .any(|w| marker_len(w).is_some());
    if !numbered {
        return body.iter().map(|l| l.trim()).filter(|l| !l.is_empty()).map(str::to_owned).collect();
    }
    let mut out: Vec<String> = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for word in joined.split_whitespace() {
        if let Some(n) = marker_len(word) {
            if !current.is_empty() {
                out.push(current.join(" "));
                current.clear();
            }
            let rest = &word[n..];
            if !rest.is_empty() {
                current.push(rest);
            }
        } else {
            current.push(word);
        }
    }
    if !current.is_empty() {
        out.push(current.join(" "));
    }
    out
}

/// Parses every agent's instructions, then runs them to completion.
///
/// Nothing is simulated if any instruction fails to parse. Returns the
/// events logged during the run.
pub fn run_script(sim: &mut Simulation, scripts: &[(String, Vec<String>)], max_ticks: u64) -> Result<Vec<Event>, ScriptError> {
    let mut parsed = Vec::new();
    for (agent, lines) in scripts {
        if sim.world().agent(agent).is_none() {
            return Err(SimError::UnknownAgent(agent.clone()).into());
        }
        for (k, text) in lines.iter().enumerate() {
            let instruction = sim.parse(text).map_err(|error| ScriptError::Parse {
                agent: agent.clone(),
                index: k + 1,
                text: text.clone(),
                error,
            })?;
            parsed.push((agent.clone(), instruction));
        }
    }
    let first = sim.events().len();
    for (agent, instruction) in parsed {
        sim.submit(&agent, instruction)?;
    }
    sim.run_until_idle(max_ticks)?;
    Ok(sim.events()[first..].to_vec())
}
