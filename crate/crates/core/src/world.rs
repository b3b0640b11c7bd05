//! Static and dynamic state of the grid world.
//!
//! A world is a set of non-overlapping rectangular [`Location`]s, a rooted
//! [`TypeHierarchy`], typed [`WorldObject`]s and the [`AgentState`]s acting on
//! them. Worlds are loaded from a TOML document (see [`WorldDoc`]) and can be
//! written back out with [`WorldState::to_document`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::regions::{self, RegionMap};

/// Name of the implicit root of every type hierarchy.
pub const ROOT_TYPE: &str = "entity";

/// Radius used by the close-to relation when the world file does not set one.
pub const DEFAULT_CLOSE_RADIUS: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorldError {
    #[error("world document is malformed: {0}")]
    Syntax(String),
    #[error("duplicate {kind} id `{id}`")]
    Duplicate { kind: &'static str, id: String },
    #[error("type `{0}` is declared with an unknown parent `{1}`")]
    UnknownParent(String, String),
    #[error("type hierarchy has a cycle through `{0}`")]
    Cycle(String),
    #[error("`{ROOT_TYPE}` is the implicit root and cannot be redeclared")]
    RootRedeclared,
    #[error("location `{0}` has empty or inverted bounds")]
    InvalidBounds(String),
    #[error("location `{0}` has coordinates below zero")]
    NegativeBounds(String),
    #[error("location `{id}`: grid depth {value} for {axis} must satisfy 0 < G <= {border}/2")]
    InvalidGridDepth {
        id: String,
        axis: &'static str,
        value: u32,
        border: u32,
    },
    #[error("locations `{0}` and `{1}` overlap")]
    Overlap(String, String),
    #[error("object `{object}` has undeclared type `{type_name}`")]
    UnknownType { object: String, type_name: String },
    #[error("object `{object}` names undeclared location `{location}`")]
    UnknownLocation { object: String, location: String },
    #[error("object `{0}` has a degenerate bounding box")]
    InvalidBBox(String),
    #[error("object `{0}` has a zero-length front vector")]
    InvalidFront(String),
    #[error("object `{0}` lies outside its declared location")]
    ObjectOutside(String),
    #[error("object `{object}` is owned by unknown agent `{owner}`")]
    UnknownOwner { object: String, owner: String },
    #[error("agent `{0}` does not stand inside any location")]
    AgentOutside(String),
    #[error("agent `{0}` has an invalid heading `{1}`")]
    InvalidHeading(String, String),
    #[error("close-to radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown type `{0}`")]
    UnknownTypeName(String),
}

/// A cell index on the world grid. `x` runs along location width, `z` along
/// length; north is towards smaller `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridCoord {
    pub x: i32,
    pub z: i32,
}

impl GridCoord {
    pub const fn new(x: i32, z: i32) -> Self {
        Self { x, z }
    }

    /// Continuous centre of the cell.
    pub fn center(self) -> (f64, f64) {
        (f64::from(self.x) + 0.5, f64::from(self.z) + 0.5)
    }

    pub fn manhattan(self, other: GridCoord) -> u32 {
        self.x.abs_diff(other.x) + self.z.abs_diff(other.z)
    }

    pub fn neighbors(self) -> [GridCoord; 4] {
        [
            GridCoord::new(self.x, self.z - 1),
            GridCoord::new(self.x + 1, self.z),
            GridCoord::new(self.x, self.z + 1),
            GridCoord::new(self.x - 1, self.z),
        ]
    }
}

impl fmt::Display for GridCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.z)
    }
}

/// Compass heading of an agent. `N` faces towards decreasing `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Heading {
    N,
    E,
    S,
    W,
}

impl Heading {
    /// Unit step `(dx, dz)` in the heading direction.
    pub fn delta(self) -> (i32, i32) {
        match self {
            Heading::N => (0, -1),
            Heading::E => (1, 0),
            Heading::S => (0, 1),
            Heading::W => (-1, 0),
        }
    }

    pub fn from_step(from: GridCoord, to: GridCoord) -> Option<Heading> {
        match (to.x - from.x, to.z - from.z) {
            (0, -1) => Some(Heading::N),
            (1, 0) => Some(Heading::E),
            (0, 1) => Some(Heading::S),
            (-1, 0) => Some(Heading::W),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Option<Heading> {
        match s {
            "N" | "n" => Some(Heading::N),
            "E" | "e" => Some(Heading::E),
            "S" | "s" => Some(Heading::S),
            "W" | "w" => Some(Heading::W),
            _ => None,
        }
    }
}

impl fmt::Display for Heading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Heading::N => "N",
            Heading::E => "E",
            Heading::S => "S",
            Heading::W => "W",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pose {
    pub cell: GridCoord,
    pub heading: Heading,
}

/// A rectangular room or hallway. Cells `startX <= x < endX`,
/// `startZ <= z < endZ` belong to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub id: String,
    pub start_x: i32,
    pub end_x: i32,
    pub start_z: i32,
    pub end_z: i32,
    pub g_width_override: Option<u32>,
    pub g_length_override: Option<u32>,
}

impl Location {
    pub fn new(id: impl Into<String>, start_x: i32, end_x: i32, start_z: i32, end_z: i32) -> Self {
        Self {
            id: id.into(),
            start_x,
            end_x,
            start_z,
            end_z,
            g_width_override: None,
            g_length_override: None,
        }
    }

    /// Border extent along x (`B_width`).
    pub fn width(&self) -> u32 {
        self.end_x.abs_diff(self.start_x)
    }

    /// Border extent along z (`B_length`).
    pub fn length(&self) -> u32 {
        self.end_z.abs_diff(self.start_z)
    }

    pub fn contains(&self, cell: GridCoord) -> bool {
        (self.start_x..self.end_x).contains(&cell.x) && (self.start_z..self.end_z).contains(&cell.z)
    }

    pub fn contains_point(&self, x: f64, z: f64) -> bool {
        x >= f64::from(self.start_x)
            && x < f64::from(self.end_x)
            && z >= f64::from(self.start_z)
            && z < f64::from(self.end_z)
    }

    /// All cells in row-major `(z, x)` order.
    pub fn cells(&self) -> impl Iterator<Item = GridCoord> + '_ {
        (self.start_z..self.end_z)
            .flat_map(move |z| (self.start_x..self.end_x).map(move |x| GridCoord::new(x, z)))
    }

    pub fn cell_count(&self) -> usize {
        self.width() as usize * self.length() as usize
    }

    /// Effective grid depth along x: the override, or the default for the width.
    pub fn g_width(&self) -> u32 {
        self.g_width_override
            .unwrap_or_else(|| regions::default_grid_depth(self.width()).unwrap_or(1))
    }

    pub fn g_length(&self) -> u32 {
        self.g_length_override
            .unwrap_or_else(|| regions::default_grid_depth(self.length()).unwrap_or(1))
    }

    fn overlaps(&self, other: &Location) -> bool {
        self.start_x < other.end_x
            && other.start_x < self.end_x
            && self.start_z < other.end_z
            && other.start_z < self.end_z
    }
}

/// Parent links of the object-type tree, rooted at [`ROOT_TYPE`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeHierarchy {
    parents: BTreeMap<String, String>,
}

impl TypeHierarchy {
    /// Builds a hierarchy from `(name, parent)` pairs; a missing parent means
    /// the root.
    pub fn new<I, S>(types: I) -> Result<Self, WorldError>
    where
        I: IntoIterator<Item = (S, Option<S>)>,
        S: Into<String>,
    {
        let mut parents = BTreeMap::new();
        for (name, parent) in types {
            let name = name.into();
            if name == ROOT_TYPE {
                return Err(WorldError::RootRedeclared);
            }
            let parent = parent.map(Into::into).unwrap_or_else(|| ROOT_TYPE.to_owned());
            if parents.insert(name.clone(), parent).is_some() {
                return Err(WorldError::Duplicate { kind: "type", id: name });
            }
        }
        for (name, parent) in &parents {
            if parent != ROOT_TYPE && !parents.contains_key(parent) {
                return Err(WorldError::UnknownParent(name.clone(), parent.clone()));
            }
        }
        for name in parents.keys() {
            let mut seen = BTreeSet::new();
            let mut cur = name.as_str();
            while cur != ROOT_TYPE {
                if !seen.insert(cur) {
                    return Err(WorldError::Cycle(name.clone()));
                }
                cur = &parents[cur];
            }
        }
        Ok(Self { parents })
    }

    pub fn contains(&self, name: &str) -> bool {
        name == ROOT_TYPE || self.parents.contains_key(name)
    }

    pub fn parent(&self, name: &str) -> Option<&str> {
        self.parents.get(name).map(String::as_str)
    }

    /// Declared type names, excluding the root.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.parents.keys().map(String::as_str)
    }

    /// True if `ty` equals `ancestor` or descends from it.
    pub fn is_a(&self, ty: &str, ancestor: &str) -> bool {
        let mut cur = ty;
        loop {
            if cur == ancestor {
                return true;
            }
            match self.parents.get(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }
}

/// Axis-aligned bounding box in cell units; `y` is vertical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl BBox {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Self {
        Self { min, max }
    }

    pub fn is_valid(&self) -> bool {
        (0..3).all(|i| self.min[i].is_finite() && self.max[i].is_finite() && self.min[i] < self.max[i])
    }

    pub fn center(&self) -> [f64; 3] {
        [
            (self.min[0] + self.max[0]) / 2.0,
            (self.min[1] + self.max[1]) / 2.0,
            (self.min[2] + self.max[2]) / 2.0,
        ]
    }

    /// Centre projected on the x–z plane.
    pub fn center_xz(&self) -> (f64, f64) {
        let c = self.center();
        (c[0], c[2])
    }

    /// Distance from a planar point to the nearest point of the x–z footprint.
    pub fn distance_xz(&self, x: f64, z: f64) -> f64 {
        let dx = (self.min[0] - x).max(0.0).max(x - self.max[0]);
        let dz = (self.min[2] - z).max(0.0).max(z - self.max[2]);
        dx.hypot(dz)
    }

    /// Cells whose unit square overlaps the x–z footprint with positive area.
    pub fn footprint_cells(&self) -> impl Iterator<Item = GridCoord> {
        let x0 = self.min[0].floor() as i32;
        let x1 = self.max[0].ceil() as i32;
        let z0 = self.min[2].floor() as i32;
        let z1 = self.max[2].ceil() as i32;
        (z0..z1).flat_map(move |z| (x0..x1).map(move |x| GridCoord::new(x, z)))
    }

    pub fn covers_cell(&self, cell: GridCoord) -> bool {
        let (x, z) = (f64::from(cell.x), f64::from(cell.z));
        self.min[0] < x + 1.0 && self.max[0] > x && self.min[2] < z + 1.0 && self.max[2] > z
    }

    pub fn translated(&self, dx: f64, dy: f64, dz: f64) -> BBox {
        BBox {
            min: [self.min[0] + dx, self.min[1] + dy, self.min[2] + dz],
            max: [self.max[0] + dx, self.max[1] + dy, self.max[2] + dz],
        }
    }

    /// Same extents, re-centred on the planar point with its base at `floor`.
    pub fn placed_at(&self, x: f64, z: f64, floor: f64) -> BBox {
        let (cx, cz) = self.center_xz();
        self.translated(x - cx, floor - self.min[1], z - cz)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldObject {
    pub id: String,
    pub type_name: String,
    pub properties: BTreeMap<String, String>,
    pub bbox: BBox,
    /// Unit vector in the x–z plane.
    pub front: Option<(f64, f64)>,
    pub location: String,
    pub owner: Option<String>,
    pub carried_by: Option<String>,
    pub consumed: bool,
}

impl WorldObject {
    pub fn property(&self, name: &str) -> Option<&str> {
        self.properties.get(name).map(String::as_str)
    }

    /// Resting objects block the cells under their footprint.
    pub fn blocks(&self) -> bool {
        !self.consumed && self.carried_by.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InteractionRecord {
    pub agent_id: String,
    pub verb: String,
    pub object_id: String,
    pub tick: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AgentState {
    pub id: String,
    pub role: String,
    pub pose: Pose,
    pub entry_poses: BTreeMap<String, Pose>,
    pub inventory: Vec<String>,
    pub history: Vec<InteractionRecord>,
}

/// The complete simulated world.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub types: TypeHierarchy,
    pub locations: Vec<Location>,
    pub objects: BTreeMap<String, WorldObject>,
    /// Declaration order; this is also the tick order.
    pub agents: Vec<AgentState>,
    pub close_radius: f64,
    regions: BTreeMap<String, RegionMap>,
}

// ----- on-disk schema -----

/// Top-level layout of a world file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct WorldDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub close_radius: Option<f64>,
    #[serde(default)]
    pub types: Vec<TypeDoc>,
    #[serde(default)]
    pub locations: Vec<LocationDoc>,
    #[serde(default)]
    pub objects: Vec<ObjectDoc>,
    #[serde(default)]
    pub agents: Vec<AgentDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct LocationDoc {
    pub id: String,
    pub start_x: i32,
    pub end_x: i32,
    pub start_z: i32,
    pub end_z: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_width: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_length: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ObjectDoc {
    pub id: String,
    #[serde(rename = "type")]
    pub type_name: String,
    pub bbox_min: [f64; 3],
    pub bbox_max: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub front: Option<[f64; 2]>,
    pub location: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<String>,
    #[serde(default)]
    pub properties: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentDoc {
    pub id: String,
    pub role: String,
    pub cell: [i32; 2],
    pub heading: String,
}

impl WorldState {
    /// Parses and validates a world document.
    pub fn load(document: &str) -> Result<Self, WorldError> {
        let doc: WorldDoc = toml::from_str(document).map_err(|e| WorldError::Syntax(e.to_string()))?;
        Self::from_doc(doc)
    }

    pub fn from_doc(doc: WorldDoc) -> Result<Self, WorldError> {
        let close_radius = doc.close_radius.unwrap_or(DEFAULT_CLOSE_RADIUS);
        if !(close_radius.is_finite() && close_radius > 0.0) {
            return Err(WorldError::InvalidRadius(close_radius));
        }
        let types = TypeHierarchy::new(doc.types.into_iter().map(|t| (t.name, t.parent)))?;

        let mut locations: Vec<Location> = Vec::with_capacity(doc.locations.len());
        for l in doc.locations {
            let loc = Location {
                id: l.id,
                start_x: l.start_x,
                end_x: l.end_x,
                start_z: l.start_z,
                end_z: l.end_z,
                g_width_override: l.g_width,
                g_length_override: l.g_length,
            };
            validate_location(&loc)?;
            if let Some(other) = locations.iter().find(|o| o.id == loc.id) {
                return Err(WorldError::Duplicate { kind: "location", id: other.id.clone() });
            }
            if let Some(other) = locations.iter().find(|o| o.overlaps(&loc)) {
                return Err(WorldError::Overlap(other.id.clone(), loc.id.clone()));
            }
            locations.push(loc);
        }

        let mut agents: Vec<AgentState> = Vec::with_capacity(doc.agents.len());
        for a in doc.agents {
            if agents.iter().any(|o| o.id == a.id) {
                return Err(WorldError::Duplicate { kind: "agent", id: a.id });
            }
            let heading = Heading::parse(&a.heading)
                .ok_or_else(|| WorldError::InvalidHeading(a.id.clone(), a.heading.clone()))?;
            let cell = GridCoord::new(a.cell[0], a.cell[1]);
            let loc = locations
                .iter()
                .find(|l| l.contains(cell))
                .ok_or_else(|| WorldError::AgentOutside(a.id.clone()))?;
            let pose = Pose { cell, heading };
            agents.push(AgentState {
                id: a.id,
                role: a.role,
                pose,
                entry_poses: BTreeMap::from([(loc.id.clone(), pose)]),
                inventory: Vec::new(),
                history: Vec::new(),
            });
        }

        let mut objects = BTreeMap::new();
        for o in doc.objects {
            if !types.contains(&o.type_name) {
                return Err(WorldError::UnknownType { object: o.id, type_name: o.type_name });
            }
            let Some(loc) = locations.iter().find(|l| l.id == o.location) else {
                return Err(WorldError::UnknownLocation { object: o.id, location: o.location });
            };
            let bbox = BBox::new(o.bbox_min, o.bbox_max);
            if !bbox.is_valid() {
                return Err(WorldError::InvalidBBox(o.id));
            }
            let (cx, cz) = bbox.center_xz();
            if !loc.contains_point(cx, cz) {
                return Err(WorldError::ObjectOutside(o.id));
            }
            let front = match o.front {
                Some([fx, fz]) => {
                    let n = fx.hypot(fz);
                    if !(n.is_finite() && n > 0.0) {
                        return Err(WorldError::InvalidFront(o.id));
                    }
                    Some((fx / n, fz / n))
                }
                None => None,
            };
            if let Some(owner) = &o.owner {
                if !agents.iter().any(|a| &a.id == owner) {
                    return Err(WorldError::UnknownOwner { object: o.id, owner: owner.clone() });
                }
            }
            if objects.contains_key(&o.id) {
                return Err(WorldError::Duplicate { kind: "object", id: o.id });
            }
            objects.insert(
                o.id.clone(),
                WorldObject {
                    id: o.id,
                    type_name: o.type_name,
                    properties: o.properties,
                    bbox,
                    front,
                    location: o.location,
                    owner: o.owner,
                    carried_by: None,
                    consumed: false,
                },
            );
        }

        let regions = locations
            .iter()
            .map(|l| (l.id.clone(), RegionMap::compute(l)))
            .collect();
        Ok(Self {
            types,
            locations,
            objects,
            agents,
            close_radius,
            regions,
        })
    }

    /// Serializes the static part of the world (types, layout, initial object
    /// placement, agent poses) back to the world-file schema.
    pub fn to_doc(&self) -> WorldDoc {
        WorldDoc {
            close_radius: (self.close_radius != DEFAULT_CLOSE_RADIUS).then_some(self.close_radius),
            types: self
                .types
                .parents
                .iter()
                .map(|(name, parent)| TypeDoc {
                    name: name.clone(),
                    parent: (parent != ROOT_TYPE).then(|| parent.clone()),
                })
                .collect(),
            locations: self
                .locations
                .iter()
                .map(|l| LocationDoc {
                    id: l.id.clone(),
                    start_x: l.start_x,
                    end_x: l.end_x,
                    start_z: l.start_z,
                    end_z: l.end_z,
                    g_width: l.g_width_override,
                    g_length: l.g_length_override,
                })
                .collect(),
            objects: self
                .objects
                .values()
                .map(|o| ObjectDoc {
                    id: o.id.clone(),
                    type_name: o.type_name.clone(),
                    bbox_min: o.bbox.min,
                    bbox_max: o.bbox.max,
                    front: o.front.map(|(x, z)| [x, z]),
                    location: o.location.clone(),
                    owner: o.owner.clone(),
                    properties: o.properties.clone(),
                })
                .collect(),
            agents: self
                .agents
                .iter()
                .map(|a| AgentDoc {
                    id: a.id.clone(),
                    role: a.role.clone(),
                    cell: [a.pose.cell.x, a.pose.cell.z],
                    heading: a.pose.heading.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_document(&self) -> String {
        toml::to_string(&self.to_doc()).expect("world documents always serialize")
    }

    pub fn location(&self, id: &str) -> Option<&Location> {
        self.locations.iter().find(|l| l.id == id)
    }

    pub fn location_of_cell(&self, cell: GridCoord) -> Option<&Location> {
        self.locations.iter().find(|l| l.contains(cell))
    }

    pub fn is_walkable(&self, cell: GridCoord) -> bool {
        self.location_of_cell(cell).is_some()
    }

    pub fn region_map(&self, location: &str) -> Option<&RegionMap> {
        self.regions.get(location)
    }

    pub fn object(&self, id: &str) -> Option<&WorldObject> {
        self.objects.get(id)
    }

    pub fn object_mut(&mut self, id: &str) -> Option<&mut WorldObject> {
        self.objects.get_mut(id)
    }

    pub fn agent(&self, id: &str) -> Option<&AgentState> {
        self.agents.iter().find(|a| a.id == id)
    }

    pub fn agent_mut(&mut self, id: &str) -> Option<&mut AgentState> {
        self.agents.iter_mut().find(|a| a.id == id)
    }

    /// Location the agent currently stands in.
    pub fn agent_location(&self, id: &str) -> Option<&Location> {
        self.agent(id).and_then(|a| self.location_of_cell(a.pose.cell))
    }

    /// Non-consumed objects whose type is `type_name` or one of its
    /// descendants, in ascending id order.
    pub fn objects_matching_type(&self, type_name: &str) -> Result<Vec<&str>, WorldError> {
        if !self.types.contains(type_name) {
            return Err(WorldError::UnknownTypeName(type_name.to_owned()));
        }
        Ok(self
            .objects
            .values()
            .filter(|o| !o.consumed && self.types.is_a(&o.type_name, type_name))
            .map(|o| o.id.as_str())
            .collect())
    }

    pub fn record_interaction(
        &mut self,
        agent_id: &str,
        verb: &str,
        object_id: &str,
        tick: u64,
    ) -> Result<(), WorldError> {
        if !self.objects.contains_key(object_id) {
            return Err(WorldError::UnknownObject(object_id.to_owned()));
        }
        let agent = self
            .agent_mut(agent_id)
            .ok_or_else(|| WorldError::UnknownAgent(agent_id.to_owned()))?;
        agent.history.push(InteractionRecord {
            agent_id: agent_id.to_owned(),
            verb: verb.to_owned(),
            object_id: object_id.to_owned(),
            tick,
        });
        Ok(())
    }

    /// Cells covered by resting objects.
    pub fn blocked_by_objects(&self) -> BTreeSet<GridCoord> {
        self.objects
            .values()
            .filter(|o| o.blocks())
            .flat_map(|o| o.bbox.footprint_cells())
            .collect()
    }
}

fn validate_location(loc: &Location) -> Result<(), WorldError> {
    if loc.start_x < 0 || loc.start_z < 0 {
        return Err(WorldError::NegativeBounds(loc.id.clone()));
    }
    if loc.start_x >= loc.end_x || loc.start_z >= loc.end_z {
        return Err(WorldError::InvalidBounds(loc.id.clone()));
    }
    for (axis, value, border) in [
        ("width", loc.g_width_override, loc.width()),
        ("length", loc.g_length_override, loc.length()),
    ] {
        if let Some(g) = value {
            if g == 0 || 2 * g > border {
                return Err(WorldError::InvalidGridDepth {
                    id: loc.id.clone(),
                    axis,
                    value: g,
                    border,
                });
            }
        }
    }
    Ok(())
}
