//! Plans and runs grounded instructions in a tick-based simulation.

mod path;
mod plan;
mod registry;
mod script;
mod sim;
mod trace;

pub use path::{find_path, find_path_with, Blocked};
pub use plan::{plan, ActionPlan, NavGoal, PlanError, Step};
pub use registry::{verb_id, ActionDef, ActionRegistry, Effect, RegistryError};
pub use script::{parse_script, run_script, ScriptError};
pub use sim::{apply_effect, close_cells, describe_targets, navigate_with_fallback, SimError, Simulation, DEFAULT_SEED, MAX_REPLANS, MAX_WAITS};
pub use trace::{format_trace, Event, EventKind};
