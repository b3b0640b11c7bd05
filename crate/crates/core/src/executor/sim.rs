use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use super::path::{find_path, Blocked};
use super::plan::{plan, ActionPlan, NavGoal, Step};
use super::registry::{ActionRegistry, Effect};
use super::trace::{Event, EventKind};
use crate::grammar::{parse_instruction, Instruction, Lexicon, ParseError};
use crate::regions::Degree;
use crate::relations::close_to;
use crate::resolver::{QuantifierTable, RegionGoal, Resolution, Resolver, Severity, Targets, Warning, WarningCode};
use crate::world::{GridCoord, Heading, Pose, WorldState};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 1;

/// Ticks an agent waits behind another agent before looking for a new route.
/// Each later agent in declaration order waits one tick longer, so two
/// agents facing each other do not both step aside.
pub const MAX_WAITS: u32 = 3;

/// Detours one navigation step may take around other agents before the
/// plan fails.
pub const MAX_REPLANS: u32 = 8;

/// Floor height of carried objects.
const CARRY_HEIGHT: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("simulation still busy after {0} ticks")]
    Stalled(u64),
}

#[derive(Debug, Clone)]
struct Queued {
    plan_id: u64,
    instruction: Instruction,
    resolution: Option<Resolution>,
}

#[derive(Debug, Clone)]
struct Active {
    plan_id: u64,
    plan: ActionPlan,
    step: usize,
    route: Option<VecDeque<GridCoord>>,
    waits: u32,
    replans: u32,
    progress: u32,
    /// Objects that vanished before the agent reached them.
    lost: BTreeSet<String>,
}

#[derive(Debug, Clone, Default)]
struct Runtime {
    queue: VecDeque<Queued>,
    active: Option<Active>,
}

/// A world plus the agents' pending work, advanced one tick at a time.
///
/// Agents act in declaration order. Each tick an agent either starts its
/// next instruction, moves one cell, or spends one tick on an action.
#[derive(Debug, Clone)]
pub struct Simulation {
    world: WorldState,
    registry: ActionRegistry,
    quantifiers: QuantifierTable,
    lexicon: Lexicon,
    seed: u64,
    tick: u64,
    runtimes: Vec<Runtime>,
    events: Vec<Event>,
    next_plan: u64,
}

impl Simulation {
    pub fn new(world: WorldState) -> Self {
        Self::with_config(world, ActionRegistry::default(), QuantifierTable::default(), DEFAULT_SEED)
    }

    pub fn with_config(world: WorldState, registry: ActionRegistry, quantifiers: QuantifierTable, seed: u64) -> Self {
        let forms = registry.surface_forms();
        let lexicon = Lexicon::for_world(&world, forms.iter().map(|(s, v)| (s.as_str(), v.as_str())));
        let runtimes = vec![Runtime::default(); world.agents.len()];
        Self {
            world,
            registry,
            quantifiers,
            lexicon,
            seed,
            tick: 0,
            runtimes,
            events: Vec::new(),
            next_plan: 1,
        }
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn registry(&self) -> &ActionRegistry {
        &self.registry
    }

    pub fn quantifiers(&self) -> &QuantifierTable {
        &self.quantifiers
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Events logged at ticks after `since`.
    pub fn events_since(&self, since: u64) -> &[Event] {
        let start = self.events.partition_point(|e| e.tick <= since);
        &self.events[start..]
    }

    pub fn parse(&self, text: &str) -> Result<Instruction, ParseError> {
        parse_instruction(&self.lexicon, text)
    }

    /// Grounds `instruction` for `agent` against the current world, with the
    /// seed the next submitted plan would use.
    pub fn resolve(&self, agent: &str, instruction: &Instruction) -> Resolution {
        self.resolve_for_plan(agent, instruction, self.next_plan)
    }

    fn resolve_for_plan(&self, agent: &str, instruction: &Instruction, plan_id: u64) -> Resolution {
        Resolver::new(&self.world, &self.quantifiers)
            .with_seed(self.seed.wrapping_add(plan_id))
            .resolve(agent, instruction)
    }

    fn agent_index(&self, agent: &str) -> Result<usize, SimError> {
        self.world
            .agents
            .iter()
            .position(|a| a.id == agent)
            .ok_or_else(|| SimError::UnknownAgent(agent.to_owned()))
    }

    /// Queues an instruction; it is grounded when the agent starts it.
    pub fn submit(&mut self, agent: &str, instruction: Instruction) -> Result<u64, SimError> {
        self.enqueue(agent, instruction, None)
    }

    /// Queues an instruction already grounded by [`Simulation::resolve`].
    pub fn submit_resolved(&mut self, agent: &str, instruction: Instruction, resolution: Resolution) -> Result<u64, SimError> {
        self.enqueue(agent, instruction, Some(resolution))
    }

    fn enqueue(&mut self, agent: &str, instruction: Instruction, resolution: Option<Resolution>) -> Result<u64, SimError> {
        let i = self.agent_index(agent)?;
        let plan_id = self.next_plan;
        self.next_plan += 1;
        self.runtimes[i].queue.push_back(Queued {
            plan_id,
            instruction,
            resolution,
        });
        Ok(plan_id)
    }

    pub fn is_idle(&self) -> bool {
        self.runtimes.iter().all(|r| r.active.is_none() && r.queue.is_empty())
    }

    /// Advances one tick and returns the events it produced.
    pub fn step(&mut self) -> &[Event] {
        let first = self.events.len();
        for i in 0..self.runtimes.len() {
            self.advance(i);
        }
        for a in &self.world.agents {
            self.events.push(Event {
                tick: self.tick,
                agent: a.id.clone(),
                kind: EventKind::Pose {
                    cell: a.pose.cell,
                    heading: a.pose.heading,
                },
            });
        }
        self.tick += 1;
        &self.events[first..]
    }

    /// Steps until every agent is idle, giving up after `max_ticks`.
    pub fn run_until_idle(&mut self, max_ticks: u64) -> Result<(), SimError> {
        let start = self.tick;
        while !self.is_idle() {
            if self.tick - start >= max_ticks {
                return Err(SimError::Stalled(max_ticks));
            }
            self.step();
        }
        Ok(())
    }

    fn emit(&mut self, i: usize, kind: EventKind) {
        let agent = self.world.agents[i].id.clone();
        self.events.push(Event {
            tick: self.tick,
            agent,
            kind,
        });
    }

    fn warn(&mut self, i: usize, warning: Warning) {
        self.emit(i, EventKind::Warning { warning });
    }

    fn fail(&mut self, i: usize, plan: u64, reason: String) {
        self.runtimes[i].active = None;
        self.emit(i, EventKind::Failed { plan, reason });
    }

    fn start(&mut self, i: usize, queued: Queued) {
        let agent = self.world.agents[i].id.clone();
        let Queued {
            plan_id,
            instruction,
            resolution,
        } = queued;
        self.emit(
            i,
            EventKind::Instruction {
                plan: plan_id,
                text: instruction.raw_text.clone(),
            },
        );
        let resolution = resolution.unwrap_or_else(|| self.resolve_for_plan(&agent, &instruction, plan_id));
        self.emit(
            i,
            EventKind::Resolved {
                targets: describe_targets(&resolution.targets),
                destination: resolution.destination.clone(),
            },
        );
        for w in &resolution.warnings {
            self.warn(i, w.clone());
        }
        if let Some(err) = resolution.warnings.iter().find(|w| w.severity == Severity::Error) {
            let reason = err.message.clone();
            self.fail(i, plan_id, reason);
            return;
        }
        match plan(&agent, &resolution, &instruction.verb, &self.registry) {
            Ok(plan) => {
                self.runtimes[i].active = Some(Active {
                    plan_id,
                    plan,
                    step: 0,
                    route: None,
                    waits: 0,
                    replans: 0,
                    progress: 0,
                    lost: BTreeSet::new(),
                });
            }
            Err(e) => self.fail(i, plan_id, e.to_string()),
        }
    }

    fn advance(&mut self, i: usize) {
        let Some(active) = self.runtimes[i].active.as_ref() else {
            if let Some(q) = self.runtimes[i].queue.pop_front() {
                self.start(i, q);
            }
            return;
        };
        let agent = self.world.agents[i].id.clone();
        let plan_id = active.plan_id;
        loop {
            let active = self.runtimes[i].active.as_mut().expect("active plan");
            let Some(step) = active.plan.steps.get(active.step).cloned() else {
                self.runtimes[i].active = None;
                self.emit(i, EventKind::Done { plan: plan_id });
                return;
            };
            match step {
                Step::Navigate { goal } => {
                    if let NavGoal::CloseTo { object } = &goal {
                        if active.lost.contains(object) {
                            active.step += 1;
                            continue;
                        }
                    }
                    if active.route.is_none() {
                        match self.route(&agent, &goal) {
                            Ok((route, warnings)) => {
                                for w in warnings {
                                    self.warn(i, w);
                                }
                                self.runtimes[i].active.as_mut().expect("active plan").route = Some(route.into());
                            }
                            Err(RouteError::Lost(object, w)) => {
                                self.warn(i, w);
                                let active = self.runtimes[i].active.as_mut().expect("active plan");
                                active.lost.insert(object);
                                active.step += 1;
                                continue;
                            }
                            Err(RouteError::Skip(w)) => {
                                self.warn(i, w);
                                self.runtimes[i].active.as_mut().expect("active plan").step += 1;
                                continue;
                            }
                            Err(RouteError::Fatal(w)) => {
                                let reason = w.message.clone();
                                self.warn(i, w);
                                self.fail(i, plan_id, reason);
                                return;
                            }
                        }
                    }
                    let active = self.runtimes[i].active.as_mut().expect("active plan");
                    let Some(&next) = active.route.as_ref().and_then(|r| r.front()) else {
                        active.route = None;
                        active.step += 1;
                        continue;
                    };
                    if self.world.agents.iter().any(|a| a.id != agent && a.pose.cell == next) {
                        active.waits += 1;
                        if active.waits >= MAX_WAITS + i as u32 {
                            active.waits = 0;
                            active.route = None;
                            active.replans += 1;
                            if active.replans > MAX_REPLANS {
                                let w = Warning::new(
                                    Severity::Error,
                                    WarningCode::NavigationFailed,
                                    format!("{agent} is stuck behind other agents"),
                                );
                                let reason = w.message.clone();
                                self.warn(i, w);
                                self.fail(i, plan_id, reason);
                            }
                        }
                        return;
                    }
                    if !self.world.is_walkable(next) || self.world.blocked_by_objects().contains(&next) {
                        active.route = None;
                        continue;
                    }
                    active.waits = 0;
                    let route = active.route.as_mut().expect("route");
                    route.pop_front();
                    let arrived = route.is_empty();
                    if arrived {
                        active.route = None;
                        active.replans = 0;
                        active.step += 1;
                    }
                    self.move_agent(i, next);
                    if arrived && active_finished(&self.runtimes[i]) {
                        self.runtimes[i].active = None;
                        self.emit(i, EventKind::Done { plan: plan_id });
                    }
                    return;
                }
                Step::Act {
                    verb,
                    object,
                    destination,
                } => {
                    if active.lost.contains(&object) {
                        active.step += 1;
                        continue;
                    }
                    let duration = self.registry.get(&verb).map_or(1, |d| d.duration_ticks);
                    active.progress += 1;
                    if active.progress < duration {
                        return;
                    }
                    active.progress = 0;
                    active.step += 1;
                    match apply_effect(&mut self.world, &self.registry, &agent, &verb, &object, destination.as_deref(), self.tick) {
                        Ok(()) => self.emit(
                            i,
                            EventKind::Act {
                                verb,
                                object,
                                destination,
                            },
                        ),
                        Err(w) => self.warn(i, w),
                    }
                    if active_finished(&self.runtimes[i]) {
                        self.runtimes[i].active = None;
                        self.emit(i, EventKind::Done { plan: plan_id });
                    }
                    return;
                }
            }
        }
    }

    fn route(&self, agent: &str, goal: &NavGoal) -> Result<(Vec<GridCoord>, Vec<Warning>), RouteError> {
        let from = self.world.agent(agent).expect("agent exists").pose.cell;
        let blocked = Blocked::for_agent(&self.world, agent);
        match goal {
            NavGoal::CloseTo { object } => {
                let Some(obj) = self.world.object(object).filter(|o| !o.consumed) else {
                    return Err(RouteError::Lost(object.clone(), target_lost(object)));
                };
                if obj.carried_by.as_deref().is_some_and(|c| c != agent) {
                    return Err(RouteError::Lost(object.clone(), target_lost(object)));
                }
                if obj.carried_by.as_deref() == Some(agent) {
                    return Ok((Vec::new(), Vec::new()));
                }
                let goals = close_cells(&self.world, object);
                if goals.contains(&from) {
                    return Ok((Vec::new(), Vec::new()));
                }
                match find_path(&self.world, &blocked, from, &goals) {
                    Some(p) => Ok((p[1..].to_vec(), Vec::new())),
                    None => Err(RouteError::Fatal(Warning::new(
                        Severity::Error,
                        WarningCode::NavigationFailed,
                        format!("no free cell close to {object} is reachable"),
                    ))),
                }
            }
            NavGoal::Region { goal } => navigate_with_fallback(&self.world, agent, goal)
                .map(|(p, w)| (p[1..].to_vec(), w))
                .map_err(RouteError::Fatal),
            NavGoal::Waypoint { cell } => {
                if *cell == from {
                    return Ok((Vec::new(), Vec::new()));
                }
                match find_path(&self.world, &blocked, from, &[*cell]) {
                    Some(p) => Ok((p[1..].to_vec(), Vec::new())),
                    None => Err(RouteError::Skip(Warning::new(
                        Severity::Warning,
                        WarningCode::NavigationFailed,
                        format!("waypoint {cell} is unreachable; skipping it"),
                    ))),
                }
            }
        }
    }

    fn move_agent(&mut self, i: usize, to: GridCoord) {
        let from = self.world.agents[i].pose.cell;
        let heading = Heading::from_step(from, to).unwrap_or(self.world.agents[i].pose.heading);
        let old_loc = self.world.location_of_cell(from).map(|l| l.id.clone());
        let new_loc = self.world.location_of_cell(to).map(|l| l.id.clone());
        let agent = &mut self.world.agents[i];
        agent.pose = Pose { cell: to, heading };
        if let Some(loc) = &new_loc {
            if old_loc.as_ref() != Some(loc) {
                agent.entry_poses.insert(loc.clone(), agent.pose);
            }
        }
        let inventory = agent.inventory.clone();
        let (cx, cz) = to.center();
        for id in inventory {
            if let Some(obj) = self.world.object_mut(&id) {
                obj.bbox = obj.bbox.placed_at(cx, cz, CARRY_HEIGHT);
                if let Some(loc) = &new_loc {
                    obj.location = loc.clone();
                }
            }
        }
    }
}

fn active_finished(rt: &Runtime) -> bool {
    rt.active.as_ref().is_some_and(|a| a.step >= a.plan.steps.len())
}

enum RouteError {
    /// The object is gone; skip the steps that concern it.
    Lost(String, Warning),
    /// Skip this step and carry on.
    Skip(Warning),
    /// The plan cannot continue.
    Fatal(Warning),
}

fn target_lost(object: &str) -> Warning {
    Warning::new(
        Severity::Warning,
        WarningCode::TargetLost,
        format!("{object} is no longer available"),
    )
}

/// Compact form of grounded targets, as written in `resolved` trace lines.
pub fn describe_targets(targets: &Targets) -> String {
    match targets {
        Targets::Objects(ids) => ids.join(","),
        Targets::Region(g) => format!(
            "{}:{}:{}@{}",
            g.kind,
            g.instance,
            g.degree.map_or_else(|| "any".to_owned(), |d| d.to_string()),
            g.location
        ),
        Targets::Path(p) => format!(
            "{}:{}:{}",
            p.kind,
            p.reference,
            p.waypoints.iter().map(|c| format!("({c})")).collect::<String>()
        ),
        Targets::Nothing => "-".to_owned(),
    }
}

/// Walkable cells close to `object`, in row-major order.
pub fn close_cells(world: &WorldState, object: &str) -> Vec<GridCoord> {
    let Some(obj) = world.object(object) else {
        return Vec::new();
    };
    let r = world.close_radius;
    let (lo_x, lo_z) = ((obj.bbox.min[0] - r).floor() as i32, (obj.bbox.min[2] - r).floor() as i32);
    let (hi_x, hi_z) = ((obj.bbox.max[0] + r).ceil() as i32, (obj.bbox.max[2] + r).ceil() as i32);
    (lo_z..=hi_z)
        .flat_map(|z| (lo_x..=hi_x).map(move |x| GridCoord { x, z }))
        .filter(|c| world.is_walkable(*c) && close_to(obj, *c, r))
        .collect()
}

/// Route into a region instance, trying its Strict cells first, then
/// Proximate, then Near. The returned path starts at the agent's cell.
pub fn navigate_with_fallback(world: &WorldState, agent: &str, goal: &RegionGoal) -> Result<(Vec<GridCoord>, Vec<Warning>), Warning> {
    let failed = |why: &str| {
        Warning::new(
            Severity::Error,
            WarningCode::NavigationFailed,
            format!("{} {} of {}: {why}", goal.instance, goal.kind, goal.location),
        )
    };
    let from = world.agent(agent).ok_or_else(|| failed("unknown agent"))?.pose.cell;
    let map = world.region_map(&goal.location).ok_or_else(|| failed("unknown location"))?;
    let bands = map.bands(goal.kind, goal.instance).ok_or_else(|| failed("no such region"))?;
    let blocked = Blocked::for_agent(world, agent);
    let first = goal.degree.unwrap_or(Degree::Strict);
    for degree in Degree::ALL.into_iter().filter(|d| *d >= first) {
        let cells = bands.get(degree);
        let path = if cells.contains(&from) {
            Some(vec![from])
        } else {
            find_path(world, &blocked, from, cells)
        };
        if let Some(path) = path {
            let mut warnings = Vec::new();
            if degree != first {
                warnings.push(Warning::new(
                    Severity::Info,
                    WarningCode::DegreeFallback,
                    format!(
                        "{first} cells of the {} {} are unreachable; heading for a {degree} cell",
                        goal.instance, goal.kind
                    ),
                ));
            }
            return Ok((path, warnings));
        }
    }
    Err(failed("every cell is blocked or unreachable"))
}

/// Carries out one action on `object` and records the interaction.
pub fn apply_effect(
    world: &mut WorldState,
    registry: &ActionRegistry,
    agent: &str,
    verb: &str,
    object: &str,
    destination: Option<&str>,
    tick: u64,
) -> Result<(), Warning> {
    let fail = |msg: String| Warning::new(Severity::Warning, WarningCode::ActionFailed, msg);
    let def = registry.get(verb).ok_or_else(|| fail(format!("no action is defined for `{verb}`")))?;
    let pose = world.agent(agent).ok_or_else(|| fail(format!("unknown agent `{agent}`")))?.pose;
    let obj = world.object(object).filter(|o| !o.consumed).ok_or_else(|| target_lost(object))?;
    let holder = obj.carried_by.clone();
    if holder.as_deref().is_some_and(|h| h != agent) {
        return Err(fail(format!("{object} is carried by {}", holder.unwrap_or_default())));
    }
    let held = holder.is_some();
    if !held && !close_to(obj, pose.cell, world.close_radius) {
        return Err(fail(format!("{agent} is not close to {object}")));
    }
    match def.effect {
        Effect::Consume => {
            let obj = world.object_mut(object).expect("object");
            obj.consumed = true;
            obj.carried_by = None;
            if held {
                world.agent_mut(agent).expect("agent").inventory.retain(|o| o != object);
            }
        }
        Effect::Acquire => {
            if !held {
                let (cx, cz) = pose.cell.center();
                let obj = world.object_mut(object).expect("object");
                obj.carried_by = Some(agent.to_owned());
                obj.bbox = obj.bbox.placed_at(cx, cz, CARRY_HEIGHT);
                world.agent_mut(agent).expect("agent").inventory.push(object.to_owned());
            }
        }
        Effect::Place => {
            if !held {
                return Err(fail(format!("{agent} is not carrying {object}")));
            }
            let (x, z, floor, location) = match destination {
                Some(dest) => {
                    let d = world.object(dest).filter(|d| !d.consumed).ok_or_else(|| target_lost(dest))?;
                    if !close_to(d, pose.cell, world.close_radius) {
                        return Err(fail(format!("{agent} is not close to {dest}")));
                    }
                    let (x, z) = d.bbox.center_xz();
                    (x, z, d.bbox.max[1], d.location.clone())
                }
                None => {
                    let blocked = Blocked::for_agent(world, agent);
                    let cell = pose
                        .cell
                        .neighbors()
                        .into_iter()
                        .find(|c| world.is_walkable(*c) && !blocked.contains(*c))
                        .ok_or_else(|| fail(format!("no free cell next to {agent} to put {object}")))?;
                    let (x, z) = cell.center();
                    let loc = world.location_of_cell(cell).expect("walkable").id.clone();
                    (x, z, 0.0, loc)
                }
            };
            let obj = world.object_mut(object).expect("object");
            obj.bbox = obj.bbox.placed_at(x, z, floor);
            obj.carried_by = None;
            obj.location = location;
            world.agent_mut(agent).expect("agent").inventory.retain(|o| o != object);
        }
        Effect::Transform | Effect::None => {}
    }
    world
        .record_interaction(agent, verb, object, tick)
        .map_err(|e| fail(e.to_string()))
}
