//! Spatial predicates between objects and cells, plus the Along/Around path
//! generators.
//!
//! Directional relations use the reference object's own prominent front:
//! around its bounding-box centre the plane is cut into four 90° sectors,
//! the front one spanning ±45° of the front vector. Every relation is also
//! required to satisfy close-to.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::world::{GridCoord, WorldObject, WorldState};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("`{0}` has no prominent front, so directional relations do not apply")]
    NoFront(String),
    #[error("too few free cells around `{object}` for a path ({available} available, {needed} needed)")]
    BandTooSmall {
        object: String,
        available: usize,
        needed: usize,
    },
    #[error("`{0}` is not enclosed by free cells on all four sides")]
    NotEncircled(String),
    #[error("path needs at least {0} waypoints")]
    TooFewWaypoints(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ObjectRelation {
    InFrontOf,
    Behind,
    LeftOf,
    RightOf,
    Above,
    Under,
    CloseTo,
}

impl ObjectRelation {
    pub const ALL: [ObjectRelation; 7] = [
        ObjectRelation::InFrontOf,
        ObjectRelation::Behind,
        ObjectRelation::LeftOf,
        ObjectRelation::RightOf,
        ObjectRelation::Above,
        ObjectRelation::Under,
        ObjectRelation::CloseTo,
    ];
}

impl fmt::Display for ObjectRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ObjectRelation::InFrontOf => "in front of",
            ObjectRelation::Behind => "behind",
            ObjectRelation::LeftOf => "to the left of",
            ObjectRelation::RightOf => "to the right of",
            ObjectRelation::Above => "above",
            ObjectRelation::Under => "under",
            ObjectRelation::CloseTo => "close to",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    Front,
    Back,
    Left,
    Right,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Along,
    Around,
}

impl fmt::Display for PathKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathKind::Along => "along",
            PathKind::Around => "around",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSpec {
    pub kind: PathKind,
    pub reference: String,
    pub waypoints: Vec<GridCoord>,
    pub seed: u64,
}

pub fn close_to_point(reference: &WorldObject, x: f64, z: f64, radius: f64) -> bool {
    reference.bbox.distance_xz(x, z) <= radius
}

/// Whether the centre of `cell` lies within `radius` of the reference's
/// footprint (boundary inclusive).
pub fn close_to(reference: &WorldObject, cell: GridCoord, radius: f64) -> bool {
    let (x, z) = cell.center();
    close_to_point(reference, x, z, radius)
}

/// Sector of a planar point relative to the reference's front. Points on a
/// sector boundary go to Front, then Left, then Right.
pub fn sector_of_point(reference: &WorldObject, x: f64, z: f64, radius: f64) -> Result<Sector, RelationError> {
    let (fx, fz) = reference.front.ok_or_else(|| RelationError::NoFront(reference.id.clone()))?;
    if !close_to_point(reference, x, z, radius) {
        return Ok(Sector::None);
    }
    let (cx, cz) = reference.bbox.center_xz();
    let (vx, vz) = (x - cx, z - cz);
    let along = vx * fx + vz * fz;
    // Positive when the point lies to the object's right (x east, z south).
    let across = fx * vz - fz * vx;
    let sector = if along >= across.abs() {
        Sector::Front
    } else if across < 0.0 && -across >= along.abs() {
        Sector::Left
    } else if across > 0.0 && across >= along.abs() {
        Sector::Right
    } else {
        Sector::Back
    };
    Ok(sector)
}

pub fn sector_of(reference: &WorldObject, cell: GridCoord, radius: f64) -> Result<Sector, RelationError> {
    let (x, z) = cell.center();
    sector_of_point(reference, x, z, radius)
}

/// `a` is above `b`: higher bounding-box centre, and planar centres within
/// the close-to radius of each other.
pub fn is_above(a: &WorldObject, b: &WorldObject, radius: f64) -> bool {
    if a.id == b.id || a.consumed || b.consumed {
        return false;
    }
    let (ca, cb) = (a.bbox.center(), b.bbox.center());
    let planar = (ca[0] - cb[0]).hypot(ca[2] - cb[2]);
    ca[1] > cb[1] && planar <= radius
}

pub fn is_under(a: &WorldObject, b: &WorldObject, radius: f64) -> bool {
    is_above(b, a, radius)
}

/// Evaluates `candidate <relation> ground`, placing the candidate at its
/// planar bounding-box centre.
pub fn holds(relation: ObjectRelation, candidate: &WorldObject, ground: &WorldObject, radius: f64) -> Result<bool, RelationError> {
    if candidate.id == ground.id {
        return Ok(false);
    }
    let (x, z) = candidate.bbox.center_xz();
    let want = match relation {
        ObjectRelation::Above => return Ok(is_above(candidate, ground, radius)),
        ObjectRelation::Under => return Ok(is_under(candidate, ground, radius)),
        ObjectRelation::CloseTo => return Ok(close_to_point(ground, x, z, radius)),
        ObjectRelation::InFrontOf => Sector::Front,
        ObjectRelation::Behind => Sector::Back,
        ObjectRelation::LeftOf => Sector::Left,
        ObjectRelation::RightOf => Sector::Right,
    };
    Ok(sector_of_point(ground, x, z, radius)? == want)
}

/// Free cells of the reference's location within the close-to band and
/// outside its footprint, in `(z, x)` order.
fn band(world: &WorldState, reference: &WorldObject) -> Vec<GridCoord> {
    let Some(loc) = world.location(&reference.location) else {
        return Vec::new();
    };
    let blocked = world.blocked_by_objects();
    loc.cells()
        .filter(|c| !reference.bbox.covers_cell(*c))
        .filter(|c| !blocked.contains(c))
        .filter(|c| close_to(reference, *c, world.close_radius))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Face {
    North,
    West,
    South,
    East,
}

/// Face of the bbox a point looks at, by the cones through the bbox
/// corners. Diagonals go to the north/south faces.
fn face_of(reference: &WorldObject, x: f64, z: f64) -> Face {
    let (cx, cz) = reference.bbox.center_xz();
    let hx = (reference.bbox.max[0] - reference.bbox.min[0]) / 2.0;
    let hz = (reference.bbox.max[2] - reference.bbox.min[2]) / 2.0;
    let (dx, dz) = (x - cx, z - cz);
    if dz.abs() * hx >= dx.abs() * hz {
        if dz < 0.0 {
            Face::North
        } else {
            Face::South
        }
    } else if dx < 0.0 {
        Face::West
    } else {
        Face::East
    }
}

fn long_axis_is_x(reference: &WorldObject) -> bool {
    let b = &reference.bbox;
    (b.max[0] - b.min[0]) >= (b.max[2] - b.min[2])
}

/// Waypoints along one lateral side of the reference, sorted along its long
/// axis. The side facing `toward` is preferred; without it the north (or
/// west) side is tried first.
pub fn along_path(
    world: &WorldState,
    reference: &WorldObject,
    count: usize,
    seed: u64,
    toward: Option<GridCoord>,
) -> Result<PathSpec, RelationError> {
    if count < 2 {
        return Err(RelationError::TooFewWaypoints(2));
    }
    let x_long = long_axis_is_x(reference);
    let (cx, cz) = reference.bbox.center_xz();
    let b = &reference.bbox;
    let cells = band(world, reference);
    let (low, high): (Vec<GridCoord>, Vec<GridCoord>) = if x_long {
        (
            cells.iter().copied().filter(|c| c.center().1 < b.min[2]).collect(),
            cells.iter().copied().filter(|c| c.center().1 > b.max[2]).collect(),
        )
    } else {
        (
            cells.iter().copied().filter(|c| c.center().0 < b.min[0]).collect(),
            cells.iter().copied().filter(|c| c.center().0 > b.max[0]).collect(),
        )
    };
    let prefer_high = toward.is_some_and(|t| {
        let (tx, tz) = t.center();
        if x_long {
            tz > cz
        } else {
            tx > cx
        }
    });
    let (first, second) = if prefer_high { (high, low) } else { (low, high) };
    let side = if first.len() >= 2 { first } else { second };
    if side.len() < 2 {
        return Err(RelationError::BandTooSmall {
            object: reference.id.clone(),
            available: side.len(),
            needed: 2,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut waypoints: Vec<GridCoord> = side.choose_multiple(&mut rng, count.min(side.len())).copied().collect();
    if x_long {
        waypoints.sort_by_key(|c| (c.x, c.z));
    } else {
        waypoints.sort_by_key(|c| (c.z, c.x));
    }
    Ok(PathSpec {
        kind: PathKind::Along,
        reference: reference.id.clone(),
        waypoints,
        seed,
    })
}

/// Angle of a cell around a centre, counterclockwise as seen on a map with
/// north up.
pub fn map_angle(cell: GridCoord, center: (f64, f64)) -> f64 {
    let (x, z) = cell.center();
    (-(z - center.1)).atan2(x - center.0)
}

/// A closed loop of waypoints encircling the reference: cells are drawn from
/// each of the four faces of the close-to band, then ordered
/// counterclockwise. The plan closes the loop by returning to the first one.
pub fn around_path(world: &WorldState, reference: &WorldObject, count: usize, seed: u64) -> Result<PathSpec, RelationError> {
    if count < 4 {
        return Err(RelationError::TooFewWaypoints(4));
    }
    let cells = band(world, reference);
    let faces = [Face::North, Face::West, Face::South, Face::East];
    let mut by_face: Vec<Vec<GridCoord>> = faces
        .iter()
        .map(|f| {
            cells
                .iter()
                .copied()
                .filter(|c| {
                    let (x, z) = c.center();
                    face_of(reference, x, z) == *f
                })
                .collect()
        })
        .collect();
    if by_face.iter().any(Vec::is_empty) {
        return Err(RelationError::NotEncircled(reference.id.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut waypoints = Vec::with_capacity(count);
    for (i, face_cells) in by_face.iter_mut().enumerate() {
        let quota = count / 4 + usize::from(i < count % 4);
        waypoints.extend(face_cells.choose_multiple(&mut rng, quota.min(face_cells.len())).copied());
    }
    let center = reference.bbox.center_xz();
    waypoints.sort_by(|a, b| {
        map_angle(*a, center)
            .partial_cmp(&map_angle(*b, center))
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(b))
    });
    Ok(PathSpec {
        kind: PathKind::Around,
        reference: reference.id.clone(),
        waypoints,
        seed,
    })
}

/// Winding number of the closed polygon through `points` about `center`.
pub fn winding_number(points: &[GridCoord], center: (f64, f64)) -> i32 {
    if points.len() < 3 {
        return 0;
    }
    let mut total = 0.0;
    for i in 0..points.len() {
        let a = map_angle(points[i], center);
        let b = map_angle(points[(i + 1) % points.len()], center);
        let mut d = b - a;
        while d > std::f64::consts::PI {
            d -= std::f64::consts::TAU;
        }
        while d <= -std::f64::consts::PI {
            d += std::f64::consts::TAU;
        }
        total += d;
    }
    (total / std::f64::consts::TAU).round() as i32
}
