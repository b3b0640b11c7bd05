//! Per-location spatial regions (Corner, End, Middle, Side) with fuzzy
//! degree bands, and instance selection from an agent's entry pose.
//!
//! Region sets are built from two grid depths: `G_width` cells in from an
//! x-wall and `G_length` cells in from a z-wall. With the default depth of
//! `ceil(B / 4)`, a 6×10 room gets `G_width = 2`, `G_length = 3`, and so each
//! of its four corners holds 6 cells.
//!
//! Geometry below works in *doubled* integer coordinates so that cell
//! centres (`2x + 1`) and wall lines (`2 * startX`) compare exactly.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::world::{GridCoord, Location, Pose};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("border extent must be positive, got {0}")]
    NonPositiveBorder(i64),
    #[error("grid depth {value} out of range for border {border}")]
    DepthOutOfRange { value: u32, border: u32 },
    #[error("cannot partition an empty cell set")]
    EmptyRegion,
    #[error("no {kind} instance satisfies the modifiers")]
    NoInstance { kind: RegionKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Corner,
    End,
    Middle,
    Side,
}

impl RegionKind {
    pub const ALL: [RegionKind; 4] = [RegionKind::Corner, RegionKind::End, RegionKind::Middle, RegionKind::Side];

    pub fn instances(self) -> &'static [Instance] {
        match self {
            RegionKind::Corner => &[Instance::NW, Instance::NE, Instance::SW, Instance::SE],
            RegionKind::End => &[Instance::N, Instance::S],
            RegionKind::Middle => &[Instance::C],
            RegionKind::Side => &[Instance::W, Instance::E],
        }
    }

    pub fn noun(self) -> &'static str {
        match self {
            RegionKind::Corner => "corner",
            RegionKind::End => "end",
            RegionKind::Middle => "middle",
            RegionKind::Side => "side",
        }
    }

    pub fn from_noun(word: &str) -> Option<Self> {
        match word {
            "corner" | "corners" => Some(RegionKind::Corner),
            "end" | "ends" => Some(RegionKind::End),
            "middle" => Some(RegionKind::Middle),
            "side" | "sides" => Some(RegionKind::Side),
            _ => None,
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.noun())
    }
}

/// Which occurrence of a region kind: corners by compass pair, ends by z-wall,
/// sides by x-wall, and the single centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Instance {
    NW,
    NE,
    SW,
    SE,
    N,
    S,
    W,
    E,
    C,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Fuzzy membership degree, ordered by preference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Degree {
    Strict,
    Proximate,
    Near,
}

impl Degree {
    pub const ALL: [Degree; 3] = [Degree::Strict, Degree::Proximate, Degree::Near];

    pub fn word(self) -> &'static str {
        match self {
            Degree::Strict => "strict",
            Degree::Proximate => "proximate",
            Degree::Near => "near",
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Lateral {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Depth {
    Near,
    Far,
}

/// Left/Right/Near/Far modifiers. Holding at most one of each pair makes
/// contradictory combinations unrepresentable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash, Serialize, Deserialize)]
pub struct Modifiers {
    pub lateral: Option<Lateral>,
    pub depth: Option<Depth>,
}

impl Modifiers {
    pub const NONE: Modifiers = Modifiers { lateral: None, depth: None };

    pub fn is_empty(&self) -> bool {
        self.lateral.is_none() && self.depth.is_none()
    }
}

/// `G = ceil(B / 4)`, which reproduces the piecewise table 1,2,3,4,… over
/// the intervals (0,4], (4,8], (8,12], (12,16], …
pub fn default_grid_depth(border: u32) -> Result<u32, RegionError> {
    if border == 0 {
        return Err(RegionError::NonPositiveBorder(0));
    }
    Ok(border.div_ceil(4))
}

fn check_depth(value: u32, border: u32) -> Result<(), RegionError> {
    // B = 1 cannot satisfy 0 < G <= B/2 in integers; G = 1 is accepted there.
    let ok = value > 0 && (2 * value <= border || (border == 1 && value == 1));
    if ok {
        Ok(())
    } else {
        Err(RegionError::DepthOutOfRange { value, border })
    }
}

fn check_depths(loc: &Location, gw: u32, gl: u32) -> Result<(), RegionError> {
    check_depth(gw, loc.width())?;
    check_depth(gl, loc.length())
}

fn rect(x0: i32, x1: i32, z0: i32, z1: i32) -> Vec<GridCoord> {
    (z0..z1)
        .flat_map(|z| (x0..x1).map(move |x| GridCoord::new(x, z)))
        .collect()
}

fn west_cols(loc: &Location, gw: u32) -> (i32, i32) {
    (loc.start_x, loc.start_x + gw as i32)
}
fn east_cols(loc: &Location, gw: u32) -> (i32, i32) {
    (loc.end_x - gw as i32, loc.end_x)
}
fn north_rows(loc: &Location, gl: u32) -> (i32, i32) {
    (loc.start_z, loc.start_z + gl as i32)
}
fn south_rows(loc: &Location, gl: u32) -> (i32, i32) {
    (loc.end_z - gl as i32, loc.end_z)
}

/// The `gw × gl` block at each corner, cells in `(z, x)` order.
pub fn corner_nodes(loc: &Location, gw: u32, gl: u32) -> Result<BTreeMap<Instance, Vec<GridCoord>>, RegionError> {
    check_depths(loc, gw, gl)?;
    let (w, e, n, s) = (west_cols(loc, gw), east_cols(loc, gw), north_rows(loc, gl), south_rows(loc, gl));
    Ok(BTreeMap::from([
        (Instance::NW, rect(w.0, w.1, n.0, n.1)),
        (Instance::NE, rect(e.0, e.1, n.0, n.1)),
        (Instance::SW, rect(w.0, w.1, s.0, s.1)),
        (Instance::SE, rect(e.0, e.1, s.0, s.1)),
    ]))
}

/// The `gl` rows along each z-wall, without the corner columns.
pub fn end_nodes(loc: &Location, gw: u32, gl: u32) -> Result<BTreeMap<Instance, Vec<GridCoord>>, RegionError> {
    check_depths(loc, gw, gl)?;
    let x0 = loc.start_x + gw as i32;
    let x1 = (loc.end_x - gw as i32).max(x0);
    let (n, s) = (north_rows(loc, gl), south_rows(loc, gl));
    Ok(BTreeMap::from([
        (Instance::N, rect(x0, x1, n.0, n.1)),
        (Instance::S, rect(x0, x1, s.0, s.1)),
    ]))
}

/// The `gw` columns along each x-wall, without the corner rows.
pub fn side_nodes(loc: &Location, gw: u32, gl: u32) -> Result<BTreeMap<Instance, Vec<GridCoord>>, RegionError> {
    check_depths(loc, gw, gl)?;
    let z0 = loc.start_z + gl as i32;
    let z1 = (loc.end_z - gl as i32).max(z0);
    let (w, e) = (west_cols(loc, gw), east_cols(loc, gw));
    Ok(BTreeMap::from([
        (Instance::W, rect(w.0, w.1, z0, z1)),
        (Instance::E, rect(e.0, e.1, z0, z1)),
    ]))
}

/// Central `2gw × 2gl` block (clipped to the room); odd remainders shift it
/// toward the start walls.
pub fn middle_nodes(loc: &Location, gw: u32, gl: u32) -> Result<Vec<GridCoord>, RegionError> {
    check_depths(loc, gw, gl)?;
    let mw = (2 * gw).min(loc.width());
    let ml = (2 * gl).min(loc.length());
    let x0 = loc.start_x + ((loc.width() - mw) / 2) as i32;
    let z0 = loc.start_z + ((loc.length() - ml) / 2) as i32;
    Ok(rect(x0, x0 + mw as i32, z0, z0 + ml as i32))
}

/// Anchor of a region instance in doubled coordinates: the corner vertex, the
/// midpoint of the wall for ends and sides, the room centre for the middle.
pub fn anchor2(loc: &Location, instance: Instance) -> (i64, i64) {
    let (sx, ex, sz, ez) = (
        2 * i64::from(loc.start_x),
        2 * i64::from(loc.end_x),
        2 * i64::from(loc.start_z),
        2 * i64::from(loc.end_z),
    );
    let (mx, mz) = ((sx + ex) / 2, (sz + ez) / 2);
    match instance {
        Instance::NW => (sx, sz),
        Instance::NE => (ex, sz),
        Instance::SW => (sx, ez),
        Instance::SE => (ex, ez),
        Instance::N => (mx, sz),
        Instance::S => (mx, ez),
        Instance::W => (sx, mz),
        Instance::E => (ex, mz),
        Instance::C => (mx, mz),
    }
}

/// Chebyshev distance from a cell centre to a doubled-coordinate anchor, in
/// doubled units.
pub fn chebyshev2(cell: GridCoord, anchor: (i64, i64)) -> i64 {
    let cx = 2 * i64::from(cell.x) + 1;
    let cz = 2 * i64::from(cell.z) + 1;
    (cx - anchor.0).abs().max((cz - anchor.1).abs())
}

/// One region instance split into its three degree bands.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DegreeBands {
    pub strict: Vec<GridCoord>,
    pub proximate: Vec<GridCoord>,
    pub near: Vec<GridCoord>,
}

impl DegreeBands {
    pub fn get(&self, degree: Degree) -> &[GridCoord] {
        match degree {
            Degree::Strict => &self.strict,
            Degree::Proximate => &self.proximate,
            Degree::Near => &self.near,
        }
    }

    pub fn all(&self) -> impl Iterator<Item = GridCoord> + '_ {
        self.strict.iter().chain(&self.proximate).chain(&self.near).copied()
    }

    pub fn degree_of(&self, cell: GridCoord) -> Option<Degree> {
        Degree::ALL.into_iter().find(|d| self.get(*d).contains(&cell))
    }

    pub fn len(&self) -> usize {
        self.strict.len() + self.proximate.len() + self.near.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Ranks cells by Chebyshev distance to `anchor` (ties by `(z, x)`) and cuts
/// the ranking into three contiguous bands of near-equal size, remainders
/// going to the nearer bands.
pub fn degree_partition(cells: &[GridCoord], anchor: (i64, i64)) -> Result<DegreeBands, RegionError> {
    if cells.is_empty() {
        return Err(RegionError::EmptyRegion);
    }
    let mut ranked = cells.to_vec();
    ranked.sort_by_key(|c| (chebyshev2(*c, anchor), c.z, c.x));
    ranked.dedup();
    let n = ranked.len();
    let base = n / 3;
    let rem = n % 3;
    let strict_len = base + usize::from(rem > 0);
    let prox_len = base + usize::from(rem > 1);
    let near = ranked.split_off(strict_len + prox_len);
    let proximate = ranked.split_off(strict_len);
    Ok(DegreeBands {
        strict: ranked,
        proximate,
        near,
    })
}

/// All region instances of one location with their degree bands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionMap {
    pub location_id: String,
    pub g_width: u32,
    pub g_length: u32,
    pub entries: BTreeMap<(RegionKind, Instance), DegreeBands>,
}

impl RegionMap {
    pub fn compute(loc: &Location) -> Self {
        let (gw, gl) = (loc.g_width(), loc.g_length());
        // Depths come from a validated location, so the builders cannot fail.
        let mut raw: Vec<((RegionKind, Instance), Vec<GridCoord>)> = Vec::new();
        for (inst, cells) in corner_nodes(loc, gw, gl).unwrap_or_default() {
            raw.push(((RegionKind::Corner, inst), cells));
        }
        for (inst, cells) in end_nodes(loc, gw, gl).unwrap_or_default() {
            raw.push(((RegionKind::End, inst), cells));
        }
        raw.push(((RegionKind::Middle, Instance::C), middle_nodes(loc, gw, gl).unwrap_or_default()));
        for (inst, cells) in side_nodes(loc, gw, gl).unwrap_or_default() {
            raw.push(((RegionKind::Side, inst), cells));
        }
        let entries = raw
            .into_iter()
            .map(|(key, cells)| {
                let bands = degree_partition(&cells, anchor2(loc, key.1)).unwrap_or_default();
                (key, bands)
            })
            .collect();
        Self {
            location_id: loc.id.clone(),
            g_width: gw,
            g_length: gl,
            entries,
        }
    }

    pub fn bands(&self, kind: RegionKind, instance: Instance) -> Option<&DegreeBands> {
        self.entries.get(&(kind, instance))
    }

    /// Cells of one instance, restricted to `degree` or the whole region.
    pub fn cells(&self, kind: RegionKind, instance: Instance, degree: Option<Degree>) -> Vec<GridCoord> {
        match self.bands(kind, instance) {
            Some(b) => match degree {
                Some(d) => b.get(d).to_vec(),
                None => b.all().collect(),
            },
            None => Vec::new(),
        }
    }
}

/// Outcome of choosing a region instance from modifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceChoice {
    pub instance: Instance,
    /// Instances still admissible after the modifiers, nearest first.
    pub admissible: Vec<Instance>,
    /// Modifiers were given for a single-instance kind and had no effect.
    pub modifiers_ignored: bool,
}

impl InstanceChoice {
    pub fn is_underdetermined(&self) -> bool {
        self.admissible.len() > 1
    }
}

fn dist2(a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - b.0).pow(2) + (a.1 - b.1).pow(2)
}

/// Picks a region instance by interpreting Left/Right/Near/Far in the frame
/// of `entry`: Left/Right by the sign of the cross product of the heading
/// with the vector to the instance anchor, Near/Far by Euclidean distance to
/// it. Whatever remains is returned nearest first; the first is the choice.
pub fn select_instance(
    kind: RegionKind,
    modifiers: Modifiers,
    entry: Pose,
    loc: &Location,
) -> Result<InstanceChoice, RegionError> {
    let instances = kind.instances();
    if instances.len() == 1 {
        return Ok(InstanceChoice {
            instance: instances[0],
            admissible: vec![instances[0]],
            modifiers_ignored: !modifiers.is_empty(),
        });
    }
    let origin = (2 * i64::from(entry.cell.x) + 1, 2 * i64::from(entry.cell.z) + 1);
    let (hx, hz) = entry.heading.delta();
    let mut admissible: Vec<(i64, Instance)> = instances
        .iter()
        .filter_map(|&inst| {
            let a = anchor2(loc, inst);
            let (vx, vz) = (a.0 - origin.0, a.1 - origin.1);
            // x grows east and z grows south, so a positive cross is to the right.
            let cross = i64::from(hx) * vz - i64::from(hz) * vx;
            let keep = match modifiers.lateral {
                Some(Lateral::Left) => cross < 0,
                Some(Lateral::Right) => cross > 0,
                None => true,
            };
            keep.then(|| (dist2(origin, a), inst))
        })
        .collect();
    admissible.sort();
    match modifiers.depth {
        Some(Depth::Near) => admissible.truncate(1),
        Some(Depth::Far) => {
            if let Some(far) = admissible.iter().copied().max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1))) {
                admissible = vec![far];
            }
        }
        None => {}
    }
    let admissible: Vec<Instance> = admissible.into_iter().map(|(_, i)| i).collect();
    match admissible.first() {
        Some(&instance) => Ok(InstanceChoice {
            instance,
            admissible,
            modifiers_ignored: false,
        }),
        None => Err(RegionError::NoInstance { kind }),
    }
}
