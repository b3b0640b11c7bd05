//! Grounds parsed instructions in the world.
//!
//! Candidates are filtered by type subsumption, property equality and
//! spatial constraints, then narrowed by the phrase's quantifier or
//! determiner. Anything that does not fit the world exactly is reported as a
//! graded [`Warning`] rather than silently ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::{
    describe, Determiner, Head, Instruction, ObjectSpec, Quantifier, RegionRef, Selector, SpatialConstraint,
};
use crate::regions::{select_instance, Degree, Instance, RegionKind};
use crate::relations::{self, PathKind, PathSpec, RelationError};
use crate::world::{AgentState, GridCoord, Pose, WorldState};

/// Waypoints generated for an "around" instruction.
pub const AROUND_WAYPOINTS: usize = 4;
/// Waypoints generated for an "along" instruction.
pub const ALONG_WAYPOINTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Severity {
    Info,
    Warning,
    Strong,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WarningCode {
    QuantShortfall,
    AmbiguousThe,
    TheOnlyViolation,
    NoSameInHistory,
    NoDifferentLeft,
    BothCount,
    EitherCount,
    RelationInapplicable,
    EmptySelection,
    UnknownType,
    UnknownProperty,
    AmbiguousRegion,
    ModifiersIgnored,
    NoEntryPose,
    RegionUnresolved,
    PathUnavailable,
    DegreeFallback,
    NavigationFailed,
    ActionFailed,
    TargetLost,
}

impl WarningCode {
    pub fn as_str(self) -> &'static str {
        match self {
            WarningCode::QuantShortfall => "QUANT_SHORTFALL",
            WarningCode::AmbiguousThe => "AMBIGUOUS_THE",
            WarningCode::TheOnlyViolation => "THE_ONLY_VIOLATION",
            WarningCode::NoSameInHistory => "NO_SAME_IN_HISTORY",
            WarningCode::NoDifferentLeft => "NO_DIFFERENT_LEFT",
            WarningCode::BothCount => "BOTH_COUNT",
            WarningCode::EitherCount => "EITHER_COUNT",
            WarningCode::RelationInapplicable => "RELATION_INAPPLICABLE",
            WarningCode::EmptySelection => "EMPTY_SELECTION",
            WarningCode::UnknownType => "UNKNOWN_TYPE",
            WarningCode::UnknownProperty => "UNKNOWN_PROPERTY",
            WarningCode::AmbiguousRegion => "AMBIGUOUS_REGION",
            WarningCode::ModifiersIgnored => "MODIFIERS_IGNORED",
            WarningCode::NoEntryPose => "NO_ENTRY_POSE",
            WarningCode::RegionUnresolved => "REGION_UNRESOLVED",
            WarningCode::PathUnavailable => "PATH_UNAVAILABLE",
            WarningCode::DegreeFallback => "DEGREE_FALLBACK",
            WarningCode::NavigationFailed => "NAVIGATION_FAILED",
            WarningCode::ActionFailed => "ACTION_FAILED",
            WarningCode::TargetLost => "TARGET_LOST",
        }
    }
}

impl fmt::Display for WarningCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub severity: Severity,
    pub code: WarningCode,
    pub message: String,
}

impl Warning {
    pub fn new(severity: Severity, code: WarningCode, message: impl Into<String>) -> Self {
        Self {
            severity,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.severity, self.code, self.message)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantifierConfigError {
    #[error("quantifier config is malformed: {0}")]
    Syntax(String),
    #[error("unknown quantifier `{0}`")]
    Unknown(String),
    #[error("`all` always means every candidate and cannot be overridden")]
    AllFixed,
    #[error("quantifier `{0}` must map to a positive count")]
    NonPositive(String),
}

/// Counts requested by each quantifier. `all` has no entry: it always means
/// every candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantifierTable {
    values: BTreeMap<Quantifier, usize>,
}

impl Default for QuantifierTable {
    fn default() -> Self {
        Self {
            values: BTreeMap::from([
                (Quantifier::ALotOf, 10),
                (Quantifier::Many, 8),
                (Quantifier::Several, 6),
                (Quantifier::AFew, 4),
                (Quantifier::ACouple, 2),
                (Quantifier::Any, 1),
            ]),
        }
    }
}

impl QuantifierTable {
    /// Defaults overridden by a flat `key = integer` document, keys being
    /// quantifier tokens such as `a-few`.
    pub fn with_overrides(text: &str) -> Result<Self, QuantifierConfigError> {
        let raw: BTreeMap<String, i64> = toml::from_str(text).map_err(|e| QuantifierConfigError::Syntax(e.to_string()))?;
        let mut table = Self::default();
        for (key, value) in raw {
            let q = Quantifier::from_token(&key).ok_or_else(|| QuantifierConfigError::Unknown(key.clone()))?;
            if q == Quantifier::All {
                return Err(QuantifierConfigError::AllFixed);
            }
            let n = usize::try_from(value)
                .ok()
                .filter(|n| *n > 0)
                .ok_or(QuantifierConfigError::NonPositive(key))?;
            table.values.insert(q, n);
        }
        Ok(table)
    }

    /// Requested count for `q` given how many candidates exist.
    pub fn value(&self, q: Quantifier, available: usize) -> usize {
        match q {
            Quantifier::All => available,
            other => self.values.get(&other).copied().unwrap_or(1),
        }
    }
}

fn empty_selection(what: &str) -> Warning {
    Warning::new(Severity::Error, WarningCode::EmptySelection, format!("nothing matches {what}"))
}

/// Picks `quantifier_value(q)` candidates in order, acting on all of them
/// (with a shortfall warning) when there are too few.
pub fn select_with_quantifier(
    candidates: &[String],
    q: Quantifier,
    table: &QuantifierTable,
    what: &str,
) -> (Vec<String>, Vec<Warning>) {
    let n = table.value(q, candidates.len());
    let mut warnings = Vec::new();
    if candidates.len() >= n {
        let selected = candidates[..n].to_vec();
        if selected.is_empty() {
            warnings.push(empty_selection(what));
        }
        return (selected, warnings);
    }
    warnings.push(Warning::new(
        Severity::Warning,
        WarningCode::QuantShortfall,
        format!("requested {n} ({}) of {what} but only {} available", q.token().replace('-', " "), candidates.len()),
    ));
    if candidates.is_empty() {
        warnings.push(empty_selection(what));
    }
    (candidates.to_vec(), warnings)
}

/// What determiners may consult about the acting agent.
#[derive(Debug, Clone, Copy)]
pub struct DeterminerContext<'a> {
    pub agent: &'a AgentState,
    pub verb: &'a str,
}

impl DeterminerContext<'_> {
    /// Objects this agent used with this verb, most recent first.
    fn used(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.agent
            .history
            .iter()
            .rev()
            .filter(|r| r.verb == self.verb)
            .map(|r| r.object_id.as_str())
            .filter(|id| seen.insert(*id))
            .collect()
    }
}

/// The one candidate the agent is holding, if exactly one is held: "the
/// banana" while carrying a banana means that banana.
fn held_one(candidates: &[String], agent: &AgentState) -> Option<String> {
    let mut held = candidates.iter().filter(|c| agent.inventory.contains(c));
    match (held.next(), held.next()) {
        (Some(id), None) => Some(id.clone()),
        _ => None,
    }
}

pub fn select_with_determiner(
    candidates: &[String],
    d: Determiner,
    ctx: DeterminerContext<'_>,
    what: &str,
) -> (Vec<String>, Vec<Warning>) {
    let mut warnings = Vec::new();
    let first = |n: usize| candidates.iter().take(n).cloned().collect::<Vec<_>>();
    let selected = match d {
        Determiner::A | Determiner::An => first(1),
        Determiner::The if held_one(candidates, ctx.agent).is_some() => {
            held_one(candidates, ctx.agent).into_iter().collect()
        }
        Determiner::The | Determiner::TheOnly => {
            if candidates.len() > 1 {
                let (severity, code) = if d == Determiner::The {
                    (Severity::Warning, WarningCode::AmbiguousThe)
                } else {
                    (Severity::Strong, WarningCode::TheOnlyViolation)
                };
                warnings.push(Warning::new(
                    severity,
                    code,
                    format!("{} objects match {what}; using {}", candidates.len(), candidates[0]),
                ));
            }
            first(1)
        }
        Determiner::TheSame => {
            let used = ctx.used();
            match used.iter().find(|id| candidates.iter().any(|c| c == *id)) {
                Some(id) => vec![(*id).to_owned()],
                None => {
                    if !candidates.is_empty() {
                        warnings.push(Warning::new(
                            Severity::Warning,
                            WarningCode::NoSameInHistory,
                            format!("{} has not used {what} with `{}` before", ctx.agent.id, ctx.verb),
                        ));
                    }
                    first(1)
                }
            }
        }
        Determiner::Different => {
            let used: BTreeSet<&str> = ctx.used().into_iter().collect();
            let fresh: Vec<String> = candidates.iter().filter(|c| !used.contains(c.as_str())).cloned().collect();
            if fresh.is_empty() && !candidates.is_empty() {
                warnings.push(Warning::new(
                    Severity::Warning,
                    WarningCode::NoDifferentLeft,
                    format!("{} already used every {what} with `{}`", ctx.agent.id, ctx.verb),
                ));
            }
            fresh.into_iter().take(1).collect()
        }
        Determiner::Both => {
            if !candidates.is_empty() && candidates.len() != 2 {
                warnings.push(Warning::new(
                    Severity::Warning,
                    WarningCode::BothCount,
                    format!("`both` expects exactly two of {what}, found {}", candidates.len()),
                ));
            }
            first(2)
        }
        Determiner::Either => {
            if !candidates.is_empty() && candidates.len() != 2 {
                warnings.push(Warning::new(
                    Severity::Warning,
                    WarningCode::EitherCount,
                    format!("`either` expects exactly two of {what}, found {}", candidates.len()),
                ));
            }
            first(1)
        }
    };
    if selected.is_empty() {
        warnings.push(empty_selection(what));
    }
    (selected, warnings)
}

/// `your`: the agent's own belongings, optionally quantified.
pub fn select_your(
    world: &WorldState,
    candidates: &[String],
    q: Option<Quantifier>,
    agent: &AgentState,
    table: &QuantifierTable,
    what: &str,
) -> (Vec<String>, Vec<Warning>) {
    let owned: Vec<String> = candidates
        .iter()
        .filter(|id| world.object(id).and_then(|o| o.owner.as_deref()) == Some(agent.id.as_str()))
        .cloned()
        .collect();
    match q {
        Some(q) => select_with_quantifier(&owned, q, table, &format!("{}'s {what}", agent.id)),
        None => {
            let mut warnings = Vec::new();
            if owned.is_empty() {
                warnings.push(empty_selection(&format!("{}'s {what}", agent.id)));
            }
            (owned, warnings)
        }
    }
}

/// A navigation goal inside one region instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionGoal {
    pub location: String,
    pub kind: RegionKind,
    pub instance: Instance,
    /// The requested degree; `None` lets navigation fall back from Strict.
    pub degree: Option<Degree>,
    /// Cells of the requested degree, or of the first non-empty band.
    pub cells: Vec<GridCoord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "camelCase")]
pub enum Targets {
    Objects(Vec<String>),
    Region(RegionGoal),
    Path(PathSpec),
    Nothing,
}

impl Targets {
    pub fn is_empty(&self) -> bool {
        match self {
            Targets::Objects(o) => o.is_empty(),
            Targets::Region(r) => r.cells.is_empty(),
            Targets::Path(p) => p.waypoints.is_empty(),
            Targets::Nothing => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub targets: Targets,
    /// Object receiving placed items ("to the green container").
    pub destination: Option<String>,
    pub warnings: Vec<Warning>,
}

impl Resolution {
    pub fn is_error(&self) -> bool {
        self.warnings.iter().any(|w| w.severity == Severity::Error)
    }

    fn failed(mut warnings: Vec<Warning>, fallback: Warning) -> Self {
        if !warnings.iter().any(|w| w.severity == Severity::Error) {
            warnings.push(fallback);
        }
        Self {
            targets: Targets::Nothing,
            destination: None,
            warnings,
        }
    }
}

/// Read-only grounding against one world snapshot.
#[derive(Debug, Clone, Copy)]
pub struct Resolver<'w> {
    pub world: &'w WorldState,
    pub quantifiers: &'w QuantifierTable,
    /// Seed for randomly drawn path waypoints.
    pub seed: u64,
}

struct Scope<'a> {
    agent: &'a AgentState,
    verb: &'a str,
}

impl<'w> Resolver<'w> {
    pub fn new(world: &'w WorldState, quantifiers: &'w QuantifierTable) -> Self {
        Self {
            world,
            quantifiers,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn resolve(&self, agent_id: &str, instruction: &Instruction) -> Resolution {
        let Some(agent) = self.world.agent(agent_id) else {
            return Resolution::failed(
                Vec::new(),
                Warning::new(Severity::Error, WarningCode::EmptySelection, format!("unknown agent `{agent_id}`")),
            );
        };
        let scope = Scope {
            agent,
            verb: &instruction.verb,
        };
        let mut warnings = Vec::new();

        if let Head::Region(region) = &instruction.spec.head {
            return match self.region_goal(&scope, region, &mut warnings) {
                Some(goal) if !goal.cells.is_empty() => Resolution {
                    targets: Targets::Region(goal),
                    destination: None,
                    warnings,
                },
                _ => Resolution::failed(
                    warnings,
                    Warning::new(Severity::Error, WarningCode::EmptySelection, format!("no cells in {}", describe(&instruction.spec))),
                ),
            };
        }

        let selected = self.select(&scope, &instruction.spec, &mut warnings);
        if selected.is_empty() {
            return Resolution::failed(warnings, empty_selection(&describe(&instruction.spec)));
        }

        if let Some(kind) = instruction.path_kind() {
            let reference = &selected[0];
            let Some(obj) = self.world.object(reference) else {
                return Resolution::failed(warnings, empty_selection(reference));
            };
            let path = match kind {
                PathKind::Along => relations::along_path(self.world, obj, ALONG_WAYPOINTS, self.seed, Some(agent.pose.cell)),
                PathKind::Around => relations::around_path(self.world, obj, AROUND_WAYPOINTS, self.seed),
            };
            return match path {
                Ok(p) => Resolution {
                    targets: Targets::Path(p),
                    destination: None,
                    warnings,
                },
                Err(e) => Resolution::failed(
                    warnings,
                    Warning::new(Severity::Error, WarningCode::PathUnavailable, e.to_string()),
                ),
            };
        }

        let destination = match &instruction.destination {
            Some(dest) => {
                let chosen = self.select(&scope, &dest.spec, &mut warnings);
                match chosen.into_iter().next() {
                    Some(d) => Some(d),
                    None => return Resolution::failed(warnings, empty_selection(&describe(&dest.spec))),
                }
            }
            None => None,
        };
        Resolution {
            targets: Targets::Objects(selected),
            destination,
            warnings,
        }
    }

    /// Candidates for `spec` before selection, ascending by id.
    pub fn filter_candidates(&self, agent_id: &str, verb: &str, spec: &ObjectSpec) -> (Vec<String>, Vec<Warning>) {
        let mut warnings = Vec::new();
        let Some(agent) = self.world.agent(agent_id) else {
            return (Vec::new(), vec![Warning::new(Severity::Error, WarningCode::EmptySelection, format!("unknown agent `{agent_id}`"))]);
        };
        let scope = Scope { agent, verb };
        let c = self.candidates(&scope, spec, &mut warnings);
        (c, warnings)
    }

    fn select(&self, scope: &Scope<'_>, spec: &ObjectSpec, warnings: &mut Vec<Warning>) -> Vec<String> {
        let candidates = self.candidates(scope, spec, warnings);
        let what = describe(spec);
        let (selected, w) = match spec.selector {
            Selector::Quantifier(q) => select_with_quantifier(&candidates, q, self.quantifiers, &what),
            Selector::Determiner(d) => select_with_determiner(
                &candidates,
                d,
                DeterminerContext {
                    agent: scope.agent,
                    verb: scope.verb,
                },
                &what,
            ),
            Selector::Your(q) => select_your(self.world, &candidates, q, scope.agent, self.quantifiers, &what),
            Selector::Bare => select_with_determiner(
                &candidates,
                Determiner::A,
                DeterminerContext {
                    agent: scope.agent,
                    verb: scope.verb,
                },
                &what,
            ),
        };
        warnings.extend(w);
        selected
    }

    /// Grounds a constraint's reference phrase. Indefinite grounds ("near a
    /// monitor") are existential and keep every candidate.
    fn ground(&self, scope: &Scope<'_>, spec: &ObjectSpec, warnings: &mut Vec<Warning>) -> Vec<String> {
        let existential = matches!(
            spec.selector,
            Selector::Bare | Selector::Determiner(Determiner::A | Determiner::An) | Selector::Quantifier(Quantifier::Any)
        );
        let mut local = Vec::new();
        let grounds = if existential {
            let c = self.candidates(scope, spec, &mut local);
            if c.is_empty() {
                local.push(empty_selection(&describe(spec)));
            }
            c
        } else {
            self.select(scope, spec, &mut local)
        };
        // Only the top-level phrase decides whether the instruction fails.
        for mut w in local {
            if w.severity == Severity::Error {
                w.severity = Severity::Warning;
            }
            warnings.push(w);
        }
        grounds
    }

    fn candidates(&self, scope: &Scope<'_>, spec: &ObjectSpec, warnings: &mut Vec<Warning>) -> Vec<String> {
        let type_name = match &spec.head {
            Head::Object(t) => t.as_str(),
            Head::Region(_) => return Vec::new(),
        };
        let Ok(typed) = self.world.objects_matching_type(type_name) else {
            warnings.push(Warning::new(Severity::Warning, WarningCode::UnknownType, format!("unknown object type `{type_name}`")));
            return Vec::new();
        };
        for p in &spec.properties {
            if let Some(name) = &p.name {
                let known = self.world.objects.values().any(|o| o.properties.contains_key(name));
                if !known {
                    warnings.push(Warning::new(
                        Severity::Warning,
                        WarningCode::UnknownProperty,
                        format!("no object has a `{name}` property"),
                    ));
                }
            }
        }
        let mut current: Vec<String> = typed
            .into_iter()
            .filter_map(|id| self.world.object(id))
            .filter(|o| {
                spec.properties.iter().all(|p| match &p.name {
                    Some(name) => o.property(name) == Some(p.value.as_str()),
                    None => o.properties.values().any(|v| *v == p.value),
                })
            })
            .map(|o| o.id.clone())
            .collect();

        for constraint in &spec.constraints {
            current = match constraint {
                SpatialConstraint::Location { location, .. } => current
                    .into_iter()
                    .filter(|id| self.world.object(id).is_some_and(|o| &o.location == location))
                    .collect(),
                SpatialConstraint::Region { region, .. } => self.filter_by_region(scope, region, current, warnings),
                SpatialConstraint::Relation { relation, ground } => {
                    let grounds = self.ground(scope, ground, warnings);
                    let mut inapplicable = BTreeSet::new();
                    let kept = current
                        .into_iter()
                        .filter(|id| {
                            let Some(cand) = self.world.object(id) else { return false };
                            grounds.iter().filter_map(|g| self.world.object(g)).any(|g| {
                                match relations::holds(*relation, cand, g, self.world.close_radius) {
                                    Ok(b) => b,
                                    Err(RelationError::NoFront(obj)) => {
                                        inapplicable.insert(obj);
                                        false
                                    }
                                    Err(_) => false,
                                }
                            })
                        })
                        .collect();
                    for obj in inapplicable {
                        warnings.push(Warning::new(
                            Severity::Warning,
                            WarningCode::RelationInapplicable,
                            format!("`{relation}` needs a front, but {obj} has none"),
                        ));
                    }
                    kept
                }
            };
        }
        current
    }

    /// Frame for Left/Right/Near/Far in `location`: the recorded entry pose,
    /// or the agent's current pose if it never entered.
    fn frame(&self, scope: &Scope<'_>, location: &str, warnings: &mut Vec<Warning>) -> Pose {
        match scope.agent.entry_poses.get(location) {
            Some(p) => *p,
            None => {
                warnings.push(Warning::new(
                    Severity::Info,
                    WarningCode::NoEntryPose,
                    format!("{} has not entered {location}; using its current pose", scope.agent.id),
                ));
                scope.agent.pose
            }
        }
    }

    /// Admissible instances of a region reference in one location.
    fn instances(
        &self,
        scope: &Scope<'_>,
        region: &RegionRef,
        location: &str,
        warnings: &mut Vec<Warning>,
    ) -> Option<crate::regions::InstanceChoice> {
        let loc = self.world.location(location)?;
        let frame = if region.modifiers.is_empty() {
            scope.agent.entry_poses.get(location).copied().unwrap_or(scope.agent.pose)
        } else {
            self.frame(scope, location, warnings)
        };
        match select_instance(region.kind, region.modifiers, frame, loc) {
            Ok(choice) => {
                if choice.modifiers_ignored {
                    warnings.push(Warning::new(
                        Severity::Info,
                        WarningCode::ModifiersIgnored,
                        format!("{location} has a single {}; modifiers ignored", region.kind),
                    ));
                }
                Some(choice)
            }
            Err(e) => {
                warnings.push(Warning::new(Severity::Warning, WarningCode::RegionUnresolved, format!("{e} in {location}")));
                None
            }
        }
    }

    fn filter_by_region(
        &self,
        scope: &Scope<'_>,
        region: &RegionRef,
        current: Vec<String>,
        warnings: &mut Vec<Warning>,
    ) -> Vec<String> {
        let mut cells_by_location: BTreeMap<String, BTreeSet<GridCoord>> = BTreeMap::new();
        current
            .into_iter()
            .filter(|id| {
                let Some(obj) = self.world.object(id) else { return false };
                let location = region.location.clone().unwrap_or_else(|| obj.location.clone());
                let cells = cells_by_location.entry(location.clone()).or_insert_with(|| {
                    let Some(map) = self.world.region_map(&location) else {
                        return BTreeSet::new();
                    };
                    // Without modifiers every instance qualifies ("in the corner").
                    let instances = if region.modifiers.is_empty() {
                        region.kind.instances().to_vec()
                    } else {
                        self.instances(scope, region, &location, warnings)
                            .map(|c| c.admissible)
                            .unwrap_or_default()
                    };
                    instances
                        .into_iter()
                        .flat_map(|inst| map.cells(region.kind, inst, region.degree))
                        .collect()
                });
                obj.bbox.footprint_cells().any(|c| cells.contains(&c))
            })
            .collect()
    }

    fn region_goal(&self, scope: &Scope<'_>, region: &RegionRef, warnings: &mut Vec<Warning>) -> Option<RegionGoal> {
        let location = match &region.location {
            Some(l) => l.clone(),
            None => self.world.location_of_cell(scope.agent.pose.cell)?.id.clone(),
        };
        let map = self.world.region_map(&location)?;
        let choice = self.instances(scope, region, &location, warnings)?;
        if choice.is_underdetermined() {
            warnings.push(Warning::new(
                Severity::Info,
                WarningCode::AmbiguousRegion,
                format!("{} of {location} is ambiguous; choosing the nearest ({})", region.kind, choice.instance),
            ));
        }
        let bands = map.bands(region.kind, choice.instance)?;
        let cells = match region.degree {
            Some(d) => bands.get(d).to_vec(),
            None => Degree::ALL
                .into_iter()
                .map(|d| bands.get(d))
                .find(|c| !c.is_empty())
                .unwrap_or_default()
                .to_vec(),
        };
        Some(RegionGoal {
            location,
            kind: region.kind,
            instance: choice.instance,
            degree: region.degree,
            cells,
        })
    }
}
