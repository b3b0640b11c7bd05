use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::registry::{ActionRegistry, Effect};
use crate::relations::PathKind;
use crate::resolver::{RegionGoal, Resolution, Targets};
use crate::world::GridCoord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum NavGoal {
    /// Any free cell close to the object.
    CloseTo { object: String },
    /// A region instance, trying Strict, then Proximate, then Near.
    Region { goal: RegionGoal },
    Waypoint { cell: GridCoord },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "camelCase")]
pub enum Step {
    Navigate { goal: NavGoal },
    Act {
        verb: String,
        object: String,
        destination: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionPlan {
    pub agent: String,
    pub verb: String,
    pub steps: Vec<Step>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("no action is defined for verb `{0}`")]
    UnknownVerb(String),
    #[error("`{0}` needs an object to act on")]
    NeedsObject(String),
    #[error("nothing to act on")]
    NoTargets,
}

/// Expands a resolution into navigate and act steps.
///
/// Each selected object gets a walk to it followed by the action; placing
/// verbs then walk on to the destination before acting. Paths only move
/// the agent.
pub fn plan(agent: &str, resolution: &Resolution, verb: &str, registry: &ActionRegistry) -> Result<ActionPlan, PlanError> {
    let def = registry.get(verb).ok_or_else(|| PlanError::UnknownVerb(verb.to_owned()))?;
    if resolution.targets.is_empty() {
        return Err(PlanError::NoTargets);
    }
    let mut steps = Vec::new();
    match &resolution.targets {
        Targets::Objects(ids) => {
            for id in ids {
                steps.push(Step::Navigate {
                    goal: NavGoal::CloseTo { object: id.clone() },
                });
                if let (Effect::Place, Some(dest)) = (def.effect, &resolution.destination) {
                    steps.push(Step::Navigate {
                        goal: NavGoal::CloseTo { object: dest.clone() },
                    });
                }
                if def.requires_target || def.effect != Effect::None {
                    steps.push(Step::Act {
                        verb: verb.to_owned(),
                        object: id.clone(),
                        destination: resolution.destination.clone(),
                    });
                }
            }
        }
        Targets::Region(goal) => {
            if def.requires_target {
                return Err(PlanError::NeedsObject(verb.to_owned()));
            }
            steps.push(Step::Navigate {
                goal: NavGoal::Region { goal: goal.clone() },
            });
        }
        Targets::Path(path) => {
            let mut cells = path.waypoints.clone();
            if path.kind == PathKind::Around {
                cells.push(path.waypoints[0]);
            }
            steps.extend(cells.into_iter().map(|cell| Step::Navigate {
                goal: NavGoal::Waypoint { cell },
            }));
        }
        Targets::Nothing => return Err(PlanError::NoTargets),
    }
    Ok(ActionPlan {
        agent: agent.to_owned(),
        verb: verb.to_owned(),
        steps,
    })
}
