use std::collections::BTreeSet;

use legendrian_cost::front::ClassicalInvariants;
use legendrian_cost::cost::cost_simple;
use legendrian_cost::graph::*;
use legendrian_cost::knot_types::{builtin_descriptor, LegendrianClass, Simplicity};

fn cls(tb: i64, rot: i64) -> LegendrianClass {
    LegendrianClass { tb, rot }
}

fn unknot(floor: i64) -> CostGraph {
    build_cost_graph(&builtin_descriptor("unknot").unwrap(), floor).unwrap()
}

#[test]
fn unknot_graph_sizes() {
    let g = unknot(-3);
    assert_eq!((g.vertices().len(), g.edge_count()), (6, 6));
    assert_eq!(g.degree(cls(-1, 0)).unwrap(), 2);
    let g = unknot(-1);
    assert_eq!((g.vertices().len(), g.edge_count()), (1, 0));
}

#[test]
fn trefoil_graph() {
    let g = build_cost_graph(&builtin_descriptor("torus(2,3)").unwrap(), -1).unwrap();
    let v: BTreeSet<_> = g.vertices().iter().map(|c| (c.tb, c.rot)).collect();
    assert_eq!(v, BTreeSet::from([(1, 0), (0, 1), (0, -1), (-1, 0), (-1, 2), (-1, -2)]));
    assert_eq!(g.edge_count(), 6);
}

#[test]
fn edges_follow_the_rule() {
    let g = unknot(-6);
    for (a, b) in g.edges() {
        assert_ne!(a.tb, b.tb);
        let d = cost_simple(&ClassicalInvariants::from_pair(a.tb, a.rot), &ClassicalInvariants::from_pair(b.tb, b.rot));
        assert_eq!(d, 1);
    }
    for &c in g.vertices() {
        assert!(g.degree(c).unwrap() >= 1);
    }
}

#[test]
fn distances() {
    let g = unknot(-4);
    assert_eq!(graph_distance(&g, cls(-1, 0), cls(-3, 0)).unwrap(), Some(2));
    assert_eq!(graph_distance(&g, cls(-2, 1), cls(-2, 1)).unwrap(), Some(0));
    assert_eq!(graph_distance(&g, cls(-2, 1), cls(-2, -1)).unwrap(), Some(2));
    assert_eq!(graph_distance(&g, cls(-1, 0), cls(-9, 0)), Err(GraphError::NotAVertex(cls(-9, 0))));
}

#[test]
fn metric_checks() {
    for floor in [-1, -5] {
        let r = verify_metric(&unknot(floor));
        assert!(r.ok(), "{:?}", r.violations);
        assert_eq!(r.components, 1);
    }
    for name in ["unknot", "torus(2,3)", "torus(2,5)", "torus(3,4)", "left_trefoil"] {
        let d = builtin_descriptor(name).unwrap();
        let g = build_cost_graph(&d, d.max_tb() - 4).unwrap();
        let r = verify_metric(&g);
        assert!(r.ok(), "{name}: {:?}", r.violations);
    }
}

#[test]
fn multi_peak_graph_merges_peaks() {
    let d = builtin_descriptor("left_trefoil").unwrap();
    let g = build_cost_graph(&d, -7).unwrap();
    let v: Vec<_> = g.vertices().iter().map(|c| (c.tb, c.rot)).collect();
    assert_eq!(v, vec![(-6, -1), (-6, 1), (-7, -2), (-7, 0), (-7, 2)]);
    assert_eq!(g.degree(cls(-7, 0)).unwrap(), 2);
}

#[test]
fn refuses_non_simple() {
    let mut d = builtin_descriptor("unknot").unwrap();
    d.simple = Simplicity::Unknown;
    assert!(matches!(build_cost_graph(&d, -3), Err(GraphError::NotSimple(_))));
}

#[test]
fn export_formats() {
    let g = unknot(-1);
    let dot = g.to_dot();
    assert!(dot.contains("\"(-1,0)\""));
    assert_eq!(dot.matches("--").count(), 0);
    let g = unknot(-2);
    let dot = g.to_dot();
    assert_eq!((dot.matches(";\n").count(), dot.matches(" -- ").count()), (5, 2));
    let js = g.to_json();
    assert_eq!(js["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(js["edges"].as_array().unwrap().len(), 2);
    assert_eq!(js["vertices"][0], serde_json::json!([-1, 0]));
    let back = CostGraph::from_json(&js.to_string()).unwrap();
    assert_eq!(back, g);
    assert_eq!(unknot(-4).to_dot(), unknot(-4).to_dot());
}

#[test]
fn reingestion_checks_edges() {
    let mut js = unknot(-2).to_json();
    js["edges"].as_array_mut().unwrap().pop();
    assert!(matches!(CostGraph::from_json(&js.to_string()), Err(GraphError::Parse(_))));
    assert!(matches!(CostGraph::from_json("{"), Err(GraphError::Parse(_))));
}
