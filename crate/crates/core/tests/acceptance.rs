//! One line per acceptance criterion. Run with `--nocapture` to see them.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{bfs_distance, corner_oracle, fixture, sample_lexicon, world, AstGen};
use imperative::executor::*;
use imperative::grammar::{parse_instruction, unparse, Determiner, Quantifier};
use imperative::regions::*;
use imperative::relations::close_to_point;
use imperative::resolver::*;
use imperative::world::{BBox, GridCoord, Location, WorldState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn random_rooms(n: usize, seed: u64) -> Vec<Location> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (x, z) = (rng.gen_range(0..10), rng.gen_range(0..10));
            Location::new("room", x, x + rng.gen_range(1..=20), z, z + rng.gen_range(1..=20))
        })
        .collect()
}

fn grid_depth_table() -> Result<(), String> {
    for b in 1..=16u32 {
        let want = (b - 1) / 4 + 1;
        ensure!(default_grid_depth(b) == Ok(want), "B={b}: {:?}", default_grid_depth(b));
    }
    Ok(())
}

fn corner_count() -> Result<(), String> {
    let loc = Location::new("r", 0, 6, 0, 10);
    let corners = corner_nodes(&loc, loc.g_width(), loc.g_length()).map_err(|e| e.to_string())?;
    ensure!(corners.values().all(|c| c.len() == 6), "{corners:?}");
    ensure!(corners.values().map(Vec::len).sum::<usize>() == 24, "total");
    for loc in random_rooms(400, 11) {
        let (gw, gl) = (loc.g_width(), loc.g_length());
        let got = corner_nodes(&loc, gw, gl).map_err(|e| e.to_string())?;
        let want = corner_oracle(&loc, gw as i32, gl as i32);
        for (inst, cells) in got {
            ensure!(cells.iter().copied().collect::<BTreeSet<_>>() == want[&inst], "{loc:?} {inst}");
        }
    }
    Ok(())
}

fn degree_partition_props() -> Result<(), String> {
    for loc in random_rooms(200, 12) {
        let map = RegionMap::compute(&loc);
        for ((kind, inst), bands) in &map.entries {
            let anchor = anchor2(&loc, *inst);
            let (s, p, n) = (&bands.strict, &bands.proximate, &bands.near);
            let all: BTreeSet<GridCoord> = bands.all().collect();
            ensure!(all.len() == s.len() + p.len() + n.len(), "{kind:?} {inst} overlaps in {loc:?}");
            let d = |v: &[GridCoord]| v.iter().map(|c| chebyshev2(*c, anchor)).collect::<Vec<_>>();
            let ordered = |a: &[GridCoord], b: &[GridCoord]| match (d(a).into_iter().max(), d(b).into_iter().min()) {
                (Some(x), Some(y)) => x <= y,
                _ => true,
            };
            ensure!(ordered(s, p) && ordered(p, n), "{kind:?} {inst} not rank ordered in {loc:?}");
        }
        let (gw, gl) = (map.g_width, map.g_length);
        let mut raw: Vec<((RegionKind, Instance), Vec<GridCoord>)> = Vec::new();
        raw.extend(corner_nodes(&loc, gw, gl).unwrap().into_iter().map(|(i, v)| ((RegionKind::Corner, i), v)));
        raw.extend(end_nodes(&loc, gw, gl).unwrap().into_iter().map(|(i, v)| ((RegionKind::End, i), v)));
        raw.extend(side_nodes(&loc, gw, gl).unwrap().into_iter().map(|(i, v)| ((RegionKind::Side, i), v)));
        raw.push(((RegionKind::Middle, Instance::C), middle_nodes(&loc, gw, gl).unwrap()));
        for (key, cells) in raw {
            let bands: BTreeSet<GridCoord> = map.entries[&key].all().collect();
            ensure!(bands == cells.into_iter().collect(), "{key:?} not exhaustive in {loc:?}");
        }
    }
    Ok(())
}

fn quantifier_table() -> Result<(), String> {
    let t = QuantifierTable::default();
    let table = [
        (Quantifier::All, 37),
        (Quantifier::ALotOf, 10),
        (Quantifier::Many, 8),
        (Quantifier::Several, 6),
        (Quantifier::AFew, 4),
        (Quantifier::ACouple, 2),
        (Quantifier::Any, 1),
    ];
    for (q, n) in table {
        ensure!(t.value(q, 37) == n, "{q:?} -> {}", t.value(q, 37));
    }
    Ok(())
}

fn run(w: WorldState, agent: &str, text: &str) -> (Simulation, Vec<Event>) {
    let mut sim = Simulation::new(w);
    let events = run_script(&mut sim, &[(agent.to_owned(), vec![text.to_owned()])], 2_000).unwrap();
    (sim, events)
}

fn warning_codes(events: &[Event]) -> Vec<WarningCode> {
    events
        .iter()
        .filter_map(|e| match &e.kind {
            EventKind::Warning { warning } => Some(warning.code),
            _ => None,
        })
        .collect()
}

fn consumed(sim: &Simulation) -> Vec<String> {
    sim.world().objects.values().filter(|o| o.consumed).map(|o| o.id.clone()).collect()
}

fn couple_of_yellow_bananas() -> Result<(), String> {
    let (sim, events) = run(world("gui.world"), "alice", "Eat a couple of yellow bananas.");
    ensure!(consumed(&sim) == ["banana4", "banana5"], "consumed {:?}", consumed(&sim));
    ensure!(warning_codes(&events).is_empty(), "warnings {:?}", warning_codes(&events));
    let acts: Vec<String> = events
        .iter()
        .filter(|e| !matches!(e.kind, EventKind::Pose { .. }))
        .map(|e| e.to_string().split_once(" agent=").unwrap().1.to_owned())
        .collect();
    ensure!(
        acts == [
            "alice kind=instruction plan=1 text=\"Eat a couple of yellow bananas.\"",
            "alice kind=resolved targets=\"banana4,banana5\" destination=-",
            "alice kind=act verb=eat object=banana4 destination=-",
            "alice kind=act verb=eat object=banana5 destination=-",
            "alice kind=done plan=1",
        ],
        "{acts:#?}"
    );
    Ok(())
}

fn few_green_bananas() -> Result<(), String> {
    let (sim, events) = run(world("gui.world"), "alice", "Eat a few green bananas above the round table.");
    ensure!(consumed(&sim) == ["banana0", "banana1", "banana2"], "consumed {:?}", consumed(&sim));
    ensure!(warning_codes(&events) == [WarningCode::QuantShortfall], "{:?}", warning_codes(&events));
    let message = events.iter().find_map(|e| match &e.kind {
        EventKind::Warning { warning } => Some(warning.message.clone()),
        _ => None,
    });
    ensure!(message.as_deref().is_some_and(|m| m.contains("requested 4")), "{message:?}");
    ensure!(!sim.world().object("banana3").unwrap().consumed, "desk banana eaten");
    Ok(())
}

fn blue_mice_in_the_corner() -> Result<(), String> {
    let text = "Pickup all blue mice that are near a monitor and keyboard in the strict far right corner of Laboratory 0.";
    let w = world("gui.world");
    // Laboratory 0 spans x 8..14, z 0..10; bob faces north, so the far right
    // corner is the north-east one and its two cells nearest the vertex are
    // its strict band.
    let strict = [GridCoord::new(13, 0), GridCoord::new(12, 0)];
    let r = w.close_radius;
    let near = |m: &str, o: &str| {
        let (x, z) = w.object(m).unwrap().bbox.center_xz();
        close_to_point(w.object(o).unwrap(), x, z, r)
    };
    let keyboards: Vec<&str> = ["keyboard0", "keyboard1"]
        .into_iter()
        .filter(|k| w.object(k).unwrap().bbox.footprint_cells().any(|c| strict.contains(&c)))
        .collect();
    let want: Vec<&str> = ["mouse0", "mouse1", "mouse2", "mouse3", "mouse4"]
        .into_iter()
        .filter(|m| w.object(m).unwrap().property("color") == Some("blue"))
        .filter(|m| ["monitor0", "monitor1"].iter().any(|o| near(m, o)))
        .filter(|m| keyboards.iter().any(|k| near(m, k)))
        .collect();
    ensure!(want == ["mouse0", "mouse4"], "oracle {want:?}");
    let sim = Simulation::new(w.clone());
    let instruction = sim.parse(text).map_err(|e| e.to_string())?;
    let resolution = sim.resolve("bob", &instruction);
    ensure!(resolution.targets == Targets::Objects(want.iter().map(|s| s.to_string()).collect()), "{:?}", resolution.targets);
    let (sim, events) = run(w, "bob", text);
    ensure!(events.iter().any(|e| matches!(e.kind, EventKind::Done { plan: 1 })), "plan did not finish");
    ensure!(sim.world().agent("bob").unwrap().inventory == want, "inventory");
    Ok(())
}

fn campus_scripts() -> Vec<(String, Vec<String>)> {
    ["admin", "housekeeper", "student"]
        .iter()
        .map(|a| (a.to_string(), parse_script(&fixture(&format!("{a}.txt")))))
        .collect()
}

fn multi_agent_script() -> Result<(), String> {
    let mut traces = Vec::new();
    for _ in 0..2 {
        let mut sim = Simulation::new(world("campus.world"));
        let events = run_script(&mut sim, &campus_scripts(), 5_000).map_err(|e| e.to_string())?;
        let w = sim.world();
        let (poster, board) = (w.object("poster0").unwrap(), w.object("billboard0").unwrap());
        let (p, b) = (poster.bbox.center_xz(), board.bbox.center_xz());
        ensure!(poster.carried_by.is_none() && (p.0 - b.0).abs() < 1e-9 && (p.1 - b.1).abs() < 1e-9, "poster at {p:?}");
        let (mail, green) = (w.object("mail0").unwrap(), w.object("container1").unwrap());
        ensure!(green.property("color") == Some("green"), "container color");
        ensure!(mail.carried_by.is_none() && mail.bbox.center_xz() == green.bbox.center_xz(), "mail at {:?}", mail.bbox.center_xz());
        traces.push(format_trace(&events));
    }
    ensure!(traces[0] == traces[1], "trace differs between runs");
    ensure!(traces[0] == fixture("campus.trace"), "trace differs from the golden file");
    Ok(())
}

fn fallback() -> Result<(), String> {
    let base = world("gui.world");
    let sim = Simulation::new(base.clone());
    let Targets::Region(goal) = sim.resolve("bob", &sim.parse("Stand in the corner").unwrap()).targets else {
        return Err("not a region".into());
    };
    let bands = base.region_map(&goal.location).unwrap().bands(goal.kind, goal.instance).unwrap().clone();
    for (blocked, want) in [
        (bands.strict.clone(), Degree::Proximate),
        ([bands.strict.clone(), bands.proximate.clone()].concat(), Degree::Near),
    ] {
        let mut w = base.clone();
        for (k, c) in blocked.iter().enumerate() {
            let mut crate_obj = w.object("desk0").unwrap().clone();
            crate_obj.id = format!("crate{k}");
            crate_obj.location = goal.location.clone();
            let (x, z) = (f64::from(c.x), f64::from(c.z));
            crate_obj.bbox = BBox::new([x + 0.1, 0.0, z + 0.1], [x + 0.9, 0.5, z + 0.9]);
            w.objects.insert(crate_obj.id.clone(), crate_obj);
        }
        let (sim, events) = run(w, "bob", "Stand in the corner");
        let end = sim.world().agent("bob").unwrap().pose.cell;
        ensure!(bands.degree_of(end) == Some(want), "ended on {end} ({:?}), wanted {want}", bands.degree_of(end));
        let info = events.iter().any(|e| {
            matches!(&e.kind, EventKind::Warning { warning } if warning.code == WarningCode::DegreeFallback && warning.severity == Severity::Info)
        });
        ensure!(info, "no Info fallback warning");
    }
    Ok(())
}

fn determiners() -> Result<(), String> {
    let mut w = world("gui.world");
    let ids: Vec<String> = (0..3).map(|i| format!("banana{i}")).collect();
    let pick = |w: &WorldState, d: Determiner, n: usize| {
        let ctx = DeterminerContext {
            agent: w.agent("alice").unwrap(),
            verb: "eat",
        };
        select_with_determiner(&ids[..n], d, ctx, "banana")
    };
    let codes = |v: &[Warning]| v.iter().map(|w| (w.code, w.severity)).collect::<Vec<_>>();
    ensure!(pick(&w, Determiner::A, 3) == (ids[..1].to_vec(), vec![]), "a");
    ensure!(pick(&w, Determiner::An, 3) == (ids[..1].to_vec(), vec![]), "an");
    ensure!(codes(&pick(&w, Determiner::The, 2).1) == [(WarningCode::AmbiguousThe, Severity::Warning)], "the");
    ensure!(codes(&pick(&w, Determiner::TheOnly, 2).1) == [(WarningCode::TheOnlyViolation, Severity::Strong)], "the only");
    ensure!(codes(&pick(&w, Determiner::Both, 3).1) == [(WarningCode::BothCount, Severity::Warning)], "both");
    ensure!(pick(&w, Determiner::Both, 2) == (ids[..2].to_vec(), vec![]), "both of two");
    ensure!(codes(&pick(&w, Determiner::Either, 3).1) == [(WarningCode::EitherCount, Severity::Warning)], "either");
    ensure!(pick(&w, Determiner::Either, 2) == (ids[..1].to_vec(), vec![]), "either of two");
    w.record_interaction("alice", "eat", "banana1", 1).map_err(|e| e.to_string())?;
    ensure!(pick(&w, Determiner::TheSame, 3).0 == ["banana1"], "the same");
    ensure!(pick(&w, Determiner::Different, 3).0 == ["banana0"], "different");
    ensure!(pick(&w, Determiner::Different, 2).0 == ["banana0"], "different of two");
    for id in ["banana0", "banana2", "banana5"] {
        w.object_mut(id).unwrap().owner = Some("alice".into());
    }
    let sim = Simulation::new(w.clone());
    let r = sim.resolve("alice", &sim.parse("Eat your a couple of bananas").unwrap());
    ensure!(r.targets == Targets::Objects(vec!["banana0".into(), "banana2".into()]), "your: {:?}", r.targets);
    Ok(())
}

fn parser() -> Result<(), String> {
    let sim = Simulation::new(world("campus.world"));
    let gui = Simulation::new(world("gui.world"));
    let sentences = [
        (&gui, "Eat a couple of yellow bananas."),
        (&gui, "Eat a few green bananas above the round table."),
        (&gui, "Pickup all blue mice that are near a monitor and keyboard in the strict far right corner of Laboratory 0."),
        (&gui, "Stand in the corner"),
        (&gui, "Go to the far right corner"),
        (&gui, "Go to the left side"),
        (&sim, "Walk around the round yellow table."),
        (&sim, "Water the yellow plant in Hallway 1."),
        (&sim, "Pin up a poster"),
        (&sim, "Fill paper for the copy machine near a mouse."),
    ];
    for (s, text) in sentences {
        s.parse(text).map_err(|e| format!("{text}: {e}"))?;
    }
    for (_, lines) in campus_scripts() {
        for text in lines {
            sim.parse(&text).map_err(|e| format!("{text}: {e}"))?;
        }
    }
    let lex = sample_lexicon();
    for seed in 0..1000u64 {
        let ast = AstGen::new(&lex, seed).instruction();
        let text = unparse(&lex, &ast);
        let back = parse_instruction(&lex, &text).map_err(|e| format!("{text}: {e}"))?;
        ensure!(ast.same_structure(&back), "round trip changed {text}");
    }
    Ok(())
}

fn pathfinding() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let walls: BTreeSet<GridCoord> = (0..20)
            .flat_map(|z| (0..20).map(move |x| GridCoord::new(x, z)))
            .filter(|_| rng.gen_bool(0.3))
            .collect();
        let from = GridCoord::new(rng.gen_range(0..20), rng.gen_range(0..20));
        let goal = GridCoord::new(rng.gen_range(0..20), rng.gen_range(0..20));
        let walk = |c: GridCoord| c == from || ((0..20).contains(&c.x) && (0..20).contains(&c.z) && !walls.contains(&c));
        let got = find_path_with(walk, from, &[goal]).map(|p| p.len() - 1);
        let want = bfs_distance(walk, from, &[goal]);
        ensure!(got == want, "{from} -> {goal}: {got:?} vs {want:?}");
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check, Option<Duration>); 12] = [
        ("grid depth table", grid_depth_table, Some(Duration::from_millis(1))),
        ("corner count", corner_count, Some(Duration::from_secs(1))),
        ("degree partition", degree_partition_props, Some(Duration::from_secs(1))),
        ("quantifier table", quantifier_table, None),
        ("couple of yellow bananas", couple_of_yellow_bananas, None),
        ("few green bananas", few_green_bananas, None),
        ("blue mice in the far right corner", blue_mice_in_the_corner, None),
        ("multi-agent script", multi_agent_script, Some(Duration::from_secs(5))),
        ("degree fallback", fallback, None),
        ("determiner suite", determiners, None),
        ("parser", parser, None),
        ("pathfinding oracle", pathfinding, Some(Duration::from_secs(2))),
    ];
    let mut failed = Vec::new();
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(()), Some(l)) if took > l => Err(format!("took {took:?}, limit {l:?}")),
            (o, _) => o,
        };
        match &outcome {
            Ok(()) => println!("PASS {name} ({took:.1?})"),
            Err(why) => {
                println!("FAIL {name} ({took:.1?}): {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
