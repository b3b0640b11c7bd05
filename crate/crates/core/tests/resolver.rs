mod common;

use std::collections::BTreeSet;

use common::{random_world, world, AstGen};
use imperative::executor::ActionRegistry;
use imperative::grammar::*;
use imperative::regions::select_instance;
use imperative::relations::holds;
use imperative::resolver::*;
use imperative::world::{GridCoord, WorldState};
use proptest::prelude::*;

fn lexicon(w: &WorldState) -> Lexicon {
    let forms = ActionRegistry::default().surface_forms();
    Lexicon::for_world(w, forms.iter().map(|(s, v)| (s.as_str(), v.as_str())))
}

fn resolve(w: &WorldState, agent: &str, text: &str) -> Resolution {
    let table = QuantifierTable::default();
    let instruction = parse_instruction(&lexicon(w), text).unwrap_or_else(|e| panic!("{text}: {e}"));
    Resolver::new(w, &table).resolve(agent, &instruction)
}

fn objects(r: &Resolution) -> Vec<&str> {
    match &r.targets {
        Targets::Objects(ids) => ids.iter().map(String::as_str).collect(),
        other => panic!("{other:?}"),
    }
}

fn codes(r: &[Warning]) -> Vec<WarningCode> {
    r.iter().map(|w| w.code).collect()
}

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("banana{i}")).collect()
}

#[test]
fn couple_of_yellow_bananas_without_warnings() {
    let r = resolve(&world("gui.world"), "alice", "Eat a couple of yellow bananas.");
    assert_eq!(objects(&r), ["banana4", "banana5"]);
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
}

#[test]
fn few_green_bananas_above_the_round_table() {
    let r = resolve(&world("gui.world"), "alice", "Eat a few green bananas above the round table.");
    assert_eq!(objects(&r), ["banana0", "banana1", "banana2"]);
    assert_eq!(codes(&r.warnings), [WarningCode::QuantShortfall]);
    assert_eq!(r.warnings[0].severity, Severity::Warning);
    assert!(r.warnings[0].message.contains("requested 4"), "{}", r.warnings[0]);
    assert!(r.warnings[0].message.contains("only 3"), "{}", r.warnings[0]);
}

#[test]
fn blue_mice_near_a_monitor_and_a_cornered_keyboard() {
    let w = world("gui.world");
    let r = resolve(
        &w,
        "bob",
        "Pickup all blue mice that are near a monitor and keyboard in the strict far right corner of Laboratory 0.",
    );
    assert_eq!(objects(&r), ["mouse0", "mouse4"]);
    assert!(r.warnings.iter().all(|w| w.severity < Severity::Warning), "{:?}", r.warnings);
}

#[test]
fn script_poster_line() {
    let r = resolve(
        &world("campus.world"),
        "admin",
        "Pick up the only poster above the round yellow table in strict middle of Hallway 1.",
    );
    assert_eq!(objects(&r), ["poster0"]);
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    let r = resolve(
        &world("campus.world"),
        "admin",
        "Carry the only mail above the round cyan table in near middle of Hallway 1.",
    );
    assert_eq!(objects(&r), ["mail0"]);
}

#[test]
fn far_side_and_destination() {
    let r = resolve(&world("campus.world"), "admin", "Deliver the mail to the green container on the far side of Office 0.");
    assert_eq!(objects(&r), ["mail0"]);
    // admin stands at the west end of the hallway, so the east side is farther
    assert_eq!(r.destination.as_deref(), Some("container0"));
    assert!(codes(&r.warnings).contains(&WarningCode::AmbiguousThe));
    assert!(codes(&r.warnings).contains(&WarningCode::NoEntryPose));
}

#[test]
fn region_head_prefers_strict_cells() {
    let w = world("gui.world");
    let r = resolve(&w, "bob", "Stand in the corner");
    let Targets::Region(goal) = &r.targets else { panic!("{r:?}") };
    let map = w.region_map("Laboratory 0").unwrap();
    assert_eq!(goal.cells, map.bands(goal.kind, goal.instance).unwrap().strict);
    // bob stands at (11,9) facing north: the south corners tie
    assert!(codes(&r.warnings).contains(&WarningCode::AmbiguousRegion));
}

#[test]
fn unknown_property_and_missing_front() {
    let w = world("gui.world");
    let table = QuantifierTable::default();
    let mut spec = ObjectSpec::object(Selector::Determiner(Determiner::The), "banana");
    spec.properties.push(Property {
        name: Some("weight".into()),
        value: "heavy".into(),
    });
    let (c, warnings) = Resolver::new(&w, &table).filter_candidates("alice", "eat", &spec);
    assert!(c.is_empty());
    assert_eq!(codes(&warnings), [WarningCode::UnknownProperty]);

    let r = resolve(&w, "alice", "Eat a banana in front of the round table");
    assert!(r.is_error());
    assert!(codes(&r.warnings).contains(&WarningCode::RelationInapplicable));
    assert!(r.targets.is_empty());
}

#[test]
fn consumed_objects_drop_out() {
    let mut w = world("gui.world");
    w.object_mut("banana4").unwrap().consumed = true;
    let r = resolve(&w, "alice", "Eat a couple of yellow bananas.");
    assert_eq!(objects(&r), ["banana5", "banana6"]);
}

#[test]
fn resolution_is_deterministic() {
    let w = world("campus.world");
    for text in [
        "Walk around the round yellow table",
        "Walk along the billboard",
        "Go to the far left corner of Office 1",
        "Deliver the mail to the green container on the far side of Office 0.",
    ] {
        assert_eq!(resolve(&w, "housekeeper", text), resolve(&w, "housekeeper", text), "{text}");
    }
}

#[test]
fn quantifier_defaults_and_overrides() {
    let t = QuantifierTable::default();
    let expected = [
        (Quantifier::ALotOf, 10),
        (Quantifier::Many, 8),
        (Quantifier::Several, 6),
        (Quantifier::AFew, 4),
        (Quantifier::ACouple, 2),
        (Quantifier::Any, 1),
    ];
    for (q, n) in expected {
        assert_eq!(t.value(q, 100), n, "{q:?}");
    }
    assert_eq!(t.value(Quantifier::All, 7), 7);
    let t = QuantifierTable::with_overrides("a-few = 3\nmany = 12\n").unwrap();
    assert_eq!(t.value(Quantifier::AFew, 0), 3);
    assert_eq!(t.value(Quantifier::Many, 0), 12);
    assert_eq!(t.value(Quantifier::ACouple, 0), 2);
    assert_eq!(QuantifierTable::with_overrides("all = 3"), Err(QuantifierConfigError::AllFixed));
    assert!(matches!(QuantifierTable::with_overrides("dozens = 3"), Err(QuantifierConfigError::Unknown(_))));
    assert!(matches!(QuantifierTable::with_overrides("a-few = 0"), Err(QuantifierConfigError::NonPositive(_))));
}

mod determiners {
    use super::*;

    fn pick(w: &WorldState, verb: &str, d: Determiner, n: usize) -> (Vec<String>, Vec<Warning>) {
        let ctx = DeterminerContext {
            agent: w.agent("alice").unwrap(),
            verb,
        };
        select_with_determiner(&ids(n), d, ctx, "banana")
    }

    fn plain() -> WorldState {
        world("gui.world")
    }

    #[test]
    fn a_and_an() {
        let w = plain();
        for d in [Determiner::A, Determiner::An] {
            assert_eq!(pick(&w, "eat", d, 3), (ids(1), vec![]));
            let (s, warn) = pick(&w, "eat", d, 0);
            assert!(s.is_empty());
            assert_eq!(codes(&warn), [WarningCode::EmptySelection]);
            assert_eq!(warn[0].severity, Severity::Error);
        }
    }

    #[test]
    fn the_and_the_only() {
        let w = plain();
        assert_eq!(pick(&w, "eat", Determiner::The, 1), (ids(1), vec![]));
        let (s, warn) = pick(&w, "eat", Determiner::The, 3);
        assert_eq!(s, ids(1));
        assert_eq!(codes(&warn), [WarningCode::AmbiguousThe]);
        assert_eq!(warn[0].severity, Severity::Warning);
        let (s, warn) = pick(&w, "eat", Determiner::TheOnly, 3);
        assert_eq!(s, ids(1));
        assert_eq!(codes(&warn), [WarningCode::TheOnlyViolation]);
        assert_eq!(warn[0].severity, Severity::Strong);
        assert_eq!(pick(&w, "eat", Determiner::TheOnly, 1), (ids(1), vec![]));
        assert_eq!(codes(&pick(&w, "eat", Determiner::TheOnly, 0).1), [WarningCode::EmptySelection]);
    }

    #[test]
    fn the_same_uses_this_verbs_history() {
        let mut w = plain();
        let (s, warn) = pick(&w, "eat", Determiner::TheSame, 3);
        assert_eq!(s, ids(1));
        assert_eq!(codes(&warn), [WarningCode::NoSameInHistory]);

        w.record_interaction("alice", "eat", "banana1", 1).unwrap();
        w.record_interaction("alice", "eat", "banana2", 2).unwrap();
        w.record_interaction("alice", "pickup", "banana0", 3).unwrap();
        // most recent eat wins; the pickup does not count
        assert_eq!(pick(&w, "eat", Determiner::TheSame, 3), (vec!["banana2".to_owned()], vec![]));
        assert_eq!(pick(&w, "pickup", Determiner::TheSame, 3), (vec!["banana0".to_owned()], vec![]));
        // history outside the candidates falls back
        let (s, warn) = pick(&w, "eat", Determiner::TheSame, 1);
        assert_eq!(s, ids(1));
        assert_eq!(codes(&warn), [WarningCode::NoSameInHistory]);
    }

    #[test]
    fn different_skips_used_objects() {
        let mut w = plain();
        w.record_interaction("alice", "eat", "banana0", 1).unwrap();
        assert_eq!(pick(&w, "eat", Determiner::Different, 2), (vec!["banana1".to_owned()], vec![]));
        assert_eq!(pick(&w, "pickup", Determiner::Different, 2), (vec!["banana0".to_owned()], vec![]));
        let (s, warn) = pick(&w, "eat", Determiner::Different, 1);
        assert!(s.is_empty());
        assert_eq!(codes(&warn), [WarningCode::NoDifferentLeft, WarningCode::EmptySelection]);
        assert_eq!(warn[1].severity, Severity::Error);
    }

    #[test]
    fn both_and_either_counts() {
        let w = plain();
        let cases = [
            (Determiner::Both, 1, 1, true),
            (Determiner::Both, 2, 2, false),
            (Determiner::Both, 3, 2, true),
            (Determiner::Either, 1, 1, true),
            (Determiner::Either, 2, 1, false),
            (Determiner::Either, 3, 1, true),
        ];
        for (d, n, selected, warned) in cases {
            let (s, warn) = pick(&w, "eat", d, n);
            assert_eq!(s, ids(selected), "{d:?} {n}");
            let code = if d == Determiner::Both { WarningCode::BothCount } else { WarningCode::EitherCount };
            assert_eq!(codes(&warn), if warned { vec![code] } else { vec![] }, "{d:?} {n}");
            assert_eq!(codes(&pick(&w, "eat", d, 0).1), [WarningCode::EmptySelection]);
        }
    }

    #[test]
    fn your_returns_only_belongings() {
        let mut w = plain();
        for id in ["banana0", "banana2", "banana3"] {
            w.object_mut(id).unwrap().owner = Some("alice".into());
        }
        w.object_mut("banana1").unwrap().owner = Some("bob".into());
        let r = resolve(&w, "alice", "Eat your bananas");
        assert_eq!(objects(&r), ["banana0", "banana2", "banana3"]);
        let r = resolve(&w, "alice", "Eat your a couple of bananas");
        assert_eq!(objects(&r), ["banana0", "banana2"]);
        let r = resolve(&w, "alice", "Eat your many green bananas");
        assert_eq!(objects(&r), ["banana0", "banana2", "banana3"]);
        assert_eq!(codes(&r.warnings), [WarningCode::QuantShortfall]);
        let r = resolve(&w, "bob", "Eat your yellow bananas");
        assert!(r.is_error());
    }
}

/// Brute-force reading of a phrase: every object tested against every
/// clause, grounds chosen by their own selectors.
fn oracle(w: &WorldState, agent: &str, spec: &ObjectSpec, table: &QuantifierTable) -> Vec<String> {
    let Head::Object(ty) = &spec.head else { return Vec::new() };
    let a = w.agent(agent).unwrap();
    w.objects
        .values()
        .filter(|o| !o.consumed && w.types.contains(ty) && w.types.is_a(&o.type_name, ty))
        .filter(|o| {
            spec.properties.iter().all(|p| match &p.name {
                Some(n) => o.properties.get(n) == Some(&p.value),
                None => o.properties.values().any(|v| *v == p.value),
            })
        })
        .filter(|o| {
            spec.constraints.iter().all(|c| match c {
                SpatialConstraint::Location { location, .. } => &o.location == location,
                SpatialConstraint::Region { region, .. } => {
                    let loc_id = region.location.clone().unwrap_or_else(|| o.location.clone());
                    let (Some(loc), Some(map)) = (w.location(&loc_id), w.region_map(&loc_id)) else {
                        return false;
                    };
                    let instances = if region.modifiers.is_empty() {
                        region.kind.instances().to_vec()
                    } else {
                        let frame = a.entry_poses.get(&loc_id).copied().unwrap_or(a.pose);
                        select_instance(region.kind, region.modifiers, frame, loc)
                            .map(|c| c.admissible)
                            .unwrap_or_default()
                    };
                    let cells: BTreeSet<GridCoord> =
                        instances.iter().flat_map(|i| map.cells(region.kind, *i, region.degree)).collect();
                    o.bbox.footprint_cells().any(|c| cells.contains(&c))
                }
                SpatialConstraint::Relation { relation, ground } => {
                    let all = oracle(w, agent, ground, table);
                    let owned = |v: &Vec<String>| -> Vec<String> {
                        v.iter()
                            .filter(|id| w.object(id).unwrap().owner.as_deref() == Some(agent))
                            .cloned()
                            .collect()
                    };
                    let grounds: Vec<String> = match ground.selector {
                        Selector::Bare
                        | Selector::Determiner(Determiner::A | Determiner::An)
                        | Selector::Quantifier(Quantifier::Any) => all,
                        Selector::Determiner(Determiner::Both) => all.into_iter().take(2).collect(),
                        Selector::Determiner(_) => all.into_iter().take(1).collect(),
                        Selector::Quantifier(q) => {
                            let n = table.value(q, all.len());
                            all.into_iter().take(n).collect()
                        }
                        Selector::Your(None) => owned(&all),
                        Selector::Your(Some(q)) => {
                            let mine = owned(&all);
                            let n = table.value(q, mine.len());
                            mine.into_iter().take(n).collect()
                        }
                    };
                    grounds
                        .iter()
                        .any(|g| holds(*relation, o, w.object(g).unwrap(), w.close_radius).unwrap_or(false))
                }
            })
        })
        .map(|o| o.id.clone())
        .collect()
}

#[test]
fn oracle_agrees_on_the_blue_mice() {
    let w = world("gui.world");
    let lex = lexicon(&w);
    let i = parse_instruction(
        &lex,
        "Pickup all blue mice that are near a monitor and keyboard in the strict far right corner of Laboratory 0.",
    )
    .unwrap();
    assert_eq!(oracle(&w, "bob", &i.spec, &QuantifierTable::default()), ["mouse0", "mouse4"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn filter_matches_brute_force(world_seed in any::<u64>(), spec_seed in any::<u64>(), agent in prop::sample::select(vec!["ann", "ben"])) {
        let w = random_world(world_seed, 50);
        let lex = lexicon(&w);
        let spec = AstGen::new(&lex, spec_seed).object(3, true);
        let table = QuantifierTable::default();
        let (got, _) = Resolver::new(&w, &table).filter_candidates(agent, "eat", &spec);
        prop_assert_eq!(got, oracle(&w, agent, &spec, &table), "{:?}", spec);
    }

    #[test]
    fn quantifier_selection_bounds(n in 0usize..15, q in prop::sample::select(Quantifier::ALL.to_vec())) {
        let table = QuantifierTable::default();
        let (s, warn) = select_with_quantifier(&ids(n), q, &table, "banana");
        let want = table.value(q, n);
        prop_assert!(s.len() <= want);
        prop_assert_eq!(&s[..], &ids(n)[..s.len()]);
        prop_assert_eq!(codes(&warn).contains(&WarningCode::QuantShortfall), n < want);
        prop_assert_eq!(s.is_empty(), warn.iter().any(|w| w.severity == Severity::Error));
    }

    #[test]
    fn determiner_selection_bounds(n in 0usize..6, d in prop::sample::select(Determiner::ALL.to_vec())) {
        let w = world("gui.world");
        let ctx = DeterminerContext { agent: w.agent("alice").unwrap(), verb: "eat" };
        let (s, warn) = select_with_determiner(&ids(n), d, ctx, "banana");
        let cap = if d == Determiner::Both { 2 } else { 1 };
        prop_assert!(s.len() <= cap);
        prop_assert_eq!(codes(&warn).contains(&WarningCode::AmbiguousThe), d == Determiner::The && n > 1);
        prop_assert_eq!(s.is_empty(), warn.iter().any(|w| w.severity == Severity::Error));
    }

    #[test]
    fn your_selects_only_owned(world_seed in any::<u64>(), q in prop::option::of(prop::sample::select(Quantifier::ALL.to_vec()))) {
        let w = random_world(world_seed, 30);
        let table = QuantifierTable::default();
        let spec = ObjectSpec::object(Selector::Your(q), "entity");
        let instruction = Instruction {
            verb: "eat".into(),
            intro: None,
            spec,
            destination: None,
            raw_text: String::new(),
        };
        let r = Resolver::new(&w, &table).resolve("ann", &instruction);
        if let Targets::Objects(ids) = &r.targets {
            for id in ids {
                prop_assert_eq!(w.object(id).unwrap().owner.as_deref(), Some("ann"));
            }
        }
        prop_assert_eq!(r.targets.is_empty(), r.is_error());
    }
}
