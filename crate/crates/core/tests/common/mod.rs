#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;

use imperative::grammar::*;
use imperative::regions::{Degree, Depth, Instance, Lateral, Modifiers, RegionKind};
use imperative::relations::{ObjectRelation, PathKind};
use imperative::world::{GridCoord, Location, WorldState};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn world(name: &str) -> WorldState {
    WorldState::load(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Straight transcription of the corner loop: every grid node of the room is
/// tested against the bounds of each corner.
pub fn corner_oracle(loc: &Location, gw: i32, gl: i32) -> BTreeMap<Instance, BTreeSet<GridCoord>> {
    let mut out: BTreeMap<Instance, BTreeSet<GridCoord>> = BTreeMap::new();
    for z in loc.start_z..loc.end_z {
        for x in loc.start_x..loc.end_x {
            let north = loc.start_z <= z && z < loc.start_z + gl;
            let south = loc.end_z - gl <= z && z < loc.end_z;
            let west = loc.start_x <= x && x < loc.start_x + gw;
            let east = loc.end_x - gw <= x && x < loc.end_x;
            for (inst, inside) in [
                (Instance::NW, north && west),
                (Instance::NE, north && east),
                (Instance::SW, south && west),
                (Instance::SE, south && east),
            ] {
                if inside {
                    out.entry(inst).or_default().insert(GridCoord { x, z });
                }
            }
        }
    }
    out
}

/// Breadth-first distance to the nearest goal.
pub fn bfs_distance(walkable: impl Fn(GridCoord) -> bool, from: GridCoord, goals: &[GridCoord]) -> Option<usize> {
    let goals: BTreeSet<GridCoord> = goals.iter().copied().filter(|g| walkable(*g)).collect();
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([(from, 0usize)]);
    while let Some((c, d)) = queue.pop_front() {
        if goals.contains(&c) {
            return Some(d);
        }
        for n in [
            GridCoord { x: c.x + 1, z: c.z },
            GridCoord { x: c.x - 1, z: c.z },
            GridCoord { x: c.x, z: c.z + 1 },
            GridCoord { x: c.x, z: c.z - 1 },
        ] {
            if walkable(n) && seen.insert(n) {
                queue.push_back((n, d + 1));
            }
        }
    }
    None
}

/// A lexicon with the vocabulary used by the example sentences.
pub fn sample_lexicon() -> Lexicon {
    let mut lex = Lexicon::new();
    for (s, v) in [
        ("eat", "eat"),
        ("pickup", "pickup"),
        ("pick up", "pickup"),
        ("carry", "carry"),
        ("pin up", "pin-up"),
        ("deliver", "deliver"),
        ("go", "go"),
        ("stand", "stand"),
        ("walk", "walk"),
        ("water", "water"),
        ("fill", "fill"),
    ] {
        lex.add_verb(s, v);
    }
    for t in [
        "banana", "mouse", "monitor", "keyboard", "mail", "table", "poster", "billboard", "container", "plant",
        "copy_machine", "paper", "desk", "shelf",
    ] {
        lex.add_type(t);
    }
    for (p, v) in [
        ("color", "yellow"),
        ("color", "green"),
        ("color", "blue"),
        ("color", "cyan"),
        ("shape", "round"),
        ("shape", "square"),
        ("color", "gold"),
        ("material", "gold"),
        ("material", "wooden"),
    ] {
        lex.add_adjective(p, v);
    }
    for l in ["Laboratory 0", "Hallway 1", "Office 0", "Office 1"] {
        lex.add_location(l);
    }
    lex
}

/// Random instructions that the parser can produce, for round-trip fuzzing.
pub struct AstGen<'a> {
    lex: &'a Lexicon,
    rng: ChaCha8Rng,
}

impl<'a> AstGen<'a> {
    pub fn new(lex: &'a Lexicon, seed: u64) -> Self {
        Self {
            lex,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items.choose(&mut self.rng).expect("non-empty").clone()
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn instruction(&mut self) -> Instruction {
        let verbs: Vec<String> = self.lex.verbs().map(str::to_owned).collect();
        let verb = self.pick(&verbs);
        let intro = match self.rng.gen_range(0..4) {
            0 => None,
            1 => Some(Intro::Path(self.pick(&[PathKind::Along, PathKind::Around]))),
            _ => Some(Intro::Preposition(self.pick(&Preposition::ALL))),
        };
        let spec = if self.chance(0.3) {
            ObjectSpec {
                selector: self.selector(),
                properties: Vec::new(),
                head: Head::Region(self.region()),
                constraints: Vec::new(),
            }
        } else {
            self.object(3, true)
        };
        let destination = self.chance(0.3).then(|| Destination {
            preposition: self.pick(&Preposition::ALL),
            spec: self.object(2, true),
        });
        Instruction {
            verb,
            intro,
            spec,
            destination,
            raw_text: String::new(),
        }
    }

    fn selector(&mut self) -> Selector {
        match self.rng.gen_range(0..4) {
            0 => Selector::Bare,
            1 => Selector::Determiner(self.pick(&Determiner::ALL)),
            2 => Selector::Quantifier(self.pick(&Quantifier::ALL)),
            _ => Selector::Your(self.chance(0.5).then(|| self.pick(&Quantifier::ALL))),
        }
    }

    fn non_bare_selector(&mut self) -> Selector {
        loop {
            let s = self.selector();
            if s != Selector::Bare {
                return s;
            }
        }
    }

    fn region(&mut self) -> RegionRef {
        let kind = self.pick(&RegionKind::ALL);
        let multi = kind.instances().len() > 1;
        let mut degree = self.pick(&[None, Some(Degree::Strict), Some(Degree::Proximate), Some(Degree::Near)]);
        if multi && degree == Some(Degree::Near) {
            degree = None;
        }
        let mut modifiers = Modifiers {
            lateral: self.pick(&[None, Some(Lateral::Left), Some(Lateral::Right)]),
            depth: self.pick(&[None, Some(Depth::Near), Some(Depth::Far)]),
        };
        if !multi && degree.is_none() && modifiers.depth == Some(Depth::Near) {
            modifiers.depth = None;
        }
        let locations: Vec<String> = self.lex.location_ids().map(str::to_owned).collect();
        let location = self.chance(0.5).then(|| self.pick(&locations));
        RegionRef {
            kind,
            degree,
            modifiers,
            location,
        }
    }

    pub fn object(&mut self, depth: u32, allow_relations: bool) -> ObjectSpec {
        let types: Vec<String> = self.lex.types().map(str::to_owned).collect();
        let adjectives: Vec<String> = self.lex.adjectives().map(str::to_owned).collect();
        let selector = self.selector();
        let n_props = if adjectives.is_empty() { 0 } else { self.rng.gen_range(0..3) };
        let properties = (0..n_props)
            .map(|_| {
                let token = self.pick(&adjectives);
                let (name, value) = self.lex.adjective(&token).expect("adjective");
                Property {
                    name: name.map(str::to_owned),
                    value: value.to_owned(),
                }
            })
            .collect();
        let head = Head::Object(self.pick(&types));
        let mut constraints = Vec::new();
        for _ in 0..self.rng.gen_range(0..3) {
            if self.chance(0.5) {
                constraints.push(SpatialConstraint::Region {
                    preposition: self.pick(&Preposition::ALL),
                    region: self.region(),
                });
            } else {
                let locations: Vec<String> = self.lex.location_ids().map(str::to_owned).collect();
                constraints.push(SpatialConstraint::Location {
                    preposition: self.pick(&Preposition::ALL),
                    location: self.pick(&locations),
                });
            }
        }
        // One group of same-relation grounds, last: anything after a ground
        // would attach to the ground instead.
        if allow_relations && depth > 0 && self.chance(0.6) {
            let relation = self.pick(&ObjectRelation::ALL);
            let n = self.rng.gen_range(1..=3);
            for k in 0..n {
                let last = k + 1 == n;
                let mut ground = self.object(depth - 1, last);
                if k > 0 && ground.selector == Selector::Bare {
                    ground.selector = self.non_bare_selector();
                }
                constraints.push(SpatialConstraint::Relation { relation, ground });
            }
        }
        ObjectSpec {
            selector,
            properties,
            head,
            constraints,
        }
    }
}

/// Two adjacent rooms with up to `max_objects` random objects and two agents.
pub fn random_world(seed: u64, max_objects: usize) -> WorldState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w1, l1) = (rng.gen_range(2..12), rng.gen_range(2..12));
    let (w2, l2) = (rng.gen_range(2..12), rng.gen_range(2..12));
    let mut doc = String::from(
        "[[types]]\nname = \"fruit\"\n[[types]]\nname = \"banana\"\nparent = \"fruit\"\n\
         [[types]]\nname = \"apple\"\nparent = \"fruit\"\n[[types]]\nname = \"furniture\"\n\
         [[types]]\nname = \"table\"\nparent = \"furniture\"\n[[types]]\nname = \"desk\"\nparent = \"furniture\"\n",
    );
    doc += &format!("[[locations]]\nid = \"Room A\"\nstartX = 0\nendX = {w1}\nstartZ = 0\nendZ = {l1}\n");
    doc += &format!("[[locations]]\nid = \"Room B\"\nstartX = {w1}\nendX = {}\nstartZ = 0\nendZ = {l2}\n", w1 + w2);
    let rooms = [("Room A", 0, w1, l1), ("Room B", w1, w1 + w2, l2)];
    let n = rng.gen_range(0..=max_objects);
    for i in 0..n {
        let (room, x0, x1, l) = rooms[rng.gen_range(0..2)];
        let x = rng.gen_range(x0..x1) as f64 + rng.gen_range(0.0..0.5);
        let z = rng.gen_range(0..l) as f64 + rng.gen_range(0.0..0.5);
        let ty = ["banana", "apple", "table", "desk", "fruit"][rng.gen_range(0..5)];
        let floor = [0.0, 0.8][rng.gen_range(0..2)];
        let size = rng.gen_range(0.1..0.5);
        doc += &format!(
            "[[objects]]\nid = \"o{i:02}\"\ntype = \"{ty}\"\nlocation = \"{room}\"\nbboxMin = [{x}, {floor}, {z}]\nbboxMax = [{}, {}, {}]\n",
            x + size,
            floor + 0.2,
            z + size
        );
        let front = [None, Some("[0.0, -1.0]"), Some("[1.0, 0.0]"), Some("[0.0, 1.0]"), Some("[-1.0, 0.0]")][rng.gen_range(0..5)];
        if let Some(f) = front {
            doc += &format!("front = {f}\n");
        }
        if rng.gen_bool(0.3) {
            doc += &format!("owner = \"{}\"\n", ["ann", "ben"][rng.gen_range(0..2)]);
        }
        let color = ["red", "green", "yellow"][rng.gen_range(0..3)];
        let shape = ["round", "square"][rng.gen_range(0..2)];
        doc += &format!("properties = {{ color = \"{color}\", shape = \"{shape}\" }}\n");
    }
    doc += &format!("[[agents]]\nid = \"ann\"\nrole = \"r\"\ncell = [0, {}]\nheading = \"N\"\n", l1 - 1);
    doc += &format!("[[agents]]\nid = \"ben\"\nrole = \"r\"\ncell = [{}, 0]\nheading = \"W\"\n", w1 + w2 - 1);
    WorldState::load(&doc).unwrap_or_else(|e| panic!("{e}\n{doc}"))
}
