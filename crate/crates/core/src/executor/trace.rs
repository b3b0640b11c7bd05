use std::fmt;

use serde::{Deserialize, Serialize};

use crate::resolver::Warning;
use crate::world::{GridCoord, Heading};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum EventKind {
    /// An instruction started; `plan` numbers accepted instructions.
    Instruction { plan: u64, text: String },
    /// What the instruction was grounded to.
    Resolved { targets: String, destination: Option<String> },
    Warning { warning: Warning },
    Act {
        verb: String,
        object: String,
        destination: Option<String>,
    },
    Done { plan: u64 },
    Failed { plan: u64, reason: String },
    Pose { cell: GridCoord, heading: Heading },
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Instruction { .. } => "instruction",
            EventKind::Resolved { .. } => "resolved",
            EventKind::Warning { .. } => "warning",
            EventKind::Act { .. } => "act",
            EventKind::Done { .. } => "done",
            EventKind::Failed { .. } => "failed",
            EventKind::Pose { .. } => "pose",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub tick: u64,
    pub agent: String,
    #[serde(flatten)]
    pub kind: EventKind,
}

fn opt(v: &Option<String>) -> &str {
    v.as_deref().unwrap_or("-")
}

/// One line per event: `tick=<n> agent=<id> kind=<kind>` followed by
/// kind-specific fields in a fixed order. Free text is quoted with escapes.
impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tick={} agent={} kind={}", self.tick, self.agent, self.kind.name())?;
        match &self.kind {
            EventKind::Instruction { plan, text } => write!(f, " plan={plan} text={text:?}"),
            EventKind::Resolved { targets, destination } => {
                write!(f, " targets={targets:?} destination={}", opt(destination))
            }
            EventKind::Warning { warning } => write!(
                f,
                " severity={} code={} message={:?}",
                warning.severity, warning.code, warning.message
            ),
            EventKind::Act {
                verb,
                object,
                destination,
            } => write!(f, " verb={verb} object={object} destination={}", opt(destination)),
            EventKind::Done { plan } => write!(f, " plan={plan}"),
            EventKind::Failed { plan, reason } => write!(f, " plan={plan} reason={reason:?}"),
            EventKind::Pose { cell, heading } => write!(f, " cell={cell} heading={heading}"),
        }
    }
}

/// Renders events one per line, newline terminated.
pub fn format_trace(events: &[Event]) -> String {
    events.iter().map(|e| format!("{e}\n")).collect()
}
