mod common;

use std::fs;

use common::fixture;
use taskmapf::world::{adapt_dataset, parse_map, parse_scenario, shortest_distances, DatasetSpec, GridMap, Mode, ScenarioEntry, Vertex};

fn entries(n: usize) -> Vec<ScenarioEntry> {
    (0..n)
        .map(|i| ScenarioEntry {
            bucket: 0,
            map_name: "empty-8-8.map".into(),
            map_width: 8,
            map_height: 8,
            start: Vertex::new(i / 8, i % 8),
            goal: Vertex::new(7 - i / 8, 7 - i % 8),
            optimal_length: 0.0,
        })
        .collect()
}

#[test]
fn twenty_agents_and_five_tasks() {
    let map = GridMap::new(8, 8);
    let spec = DatasetSpec { n_agents: 20, n_tasks: 5, fanout: (1, 3), seed: 1, mode: Mode::Cts };
    let inst = adapt_dataset(&map, &entries(25), spec).unwrap();
    assert_eq!(inst.num_agents(), 20);
    assert_eq!(inst.tasks().len(), 5);
    assert!(inst.tasks().iter().all(|t| (1..=3).contains(&t.assignees.len())));
    assert_eq!(inst.tasks()[0].location, Vertex::new(2, 4));
}

#[test]
fn dataset_is_deterministic_and_mg_drops_goals() {
    let map = GridMap::new(8, 8);
    let spec = DatasetSpec { n_agents: 4, n_tasks: 6, fanout: (1, 3), seed: 7, mode: Mode::Mg };
    let a = adapt_dataset(&map, &entries(10), spec).unwrap();
    assert_eq!(a.to_json(), adapt_dataset(&map, &entries(10), spec).unwrap().to_json());
    assert!(a.agents().iter().all(|ag| ag.destination.is_none()));
    let single = DatasetSpec { n_agents: 1, n_tasks: 1, fanout: (1, 1), seed: 3, mode: Mode::Cts };
    assert_eq!(adapt_dataset(&map, &entries(2), single).unwrap().tasks()[0].assignees, vec![1]);
    assert!(adapt_dataset(&map, &entries(3), spec).is_err());
}

#[test]
fn fixture_distances() {
    let room = parse_map(&fs::read_to_string(fixture("room-11-11.map")).unwrap()).unwrap();
    let scen = parse_scenario(&fs::read_to_string(fixture("room-11-11.scen")).unwrap()).unwrap();
    let keys: Vec<Vertex> = scen.iter().flat_map(|e| [e.start, e.goal]).collect();
    let table = shortest_distances(&room, &keys).unwrap();
    for i in 0..keys.len() {
        assert_eq!(table.at(i, i), Some(0));
        for j in 0..keys.len() {
            assert_eq!(table.at(i, j), table.at(j, i));
            assert!(table.at(i, j).unwrap() as usize >= keys[i].manhattan(&keys[j]));
        }
    }
    // corner to corner needs a detour through the doors
    assert_eq!(table.distance(Vertex::new(0, 0), Vertex::new(10, 10)), Some(20));
    let empty = parse_map(&fs::read_to_string(fixture("empty-8-8.map")).unwrap()).unwrap();
    let e = shortest_distances(&empty, &[Vertex::new(0, 0), Vertex::new(7, 7)]).unwrap();
    assert_eq!(e.at(0, 1), Some(14));
}

#[test]
fn malformed_files_name_the_line() {
    let err = parse_map("type octile\nheight 2\nwidth 2\nmap\n..\n.x\n").unwrap_err();
    assert!(err.to_string().contains('6'), "{err}");
    assert!(parse_scenario("version 1\n0\tm.map\t8\t8\t0\t0\t1\n").is_err());
    assert!(parse_scenario("version 1\n").unwrap().is_empty());
}
