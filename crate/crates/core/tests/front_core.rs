mod common;

use common::gen::random_front;
use legendrian_cost::front::*;
use legendrian_cost::knot_types::{builtin_fronts, left_trefoil_front, right_trefoil_front, unknot_front};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn parse_serialize_round_trip() {
    for text in ["L1 R1", "L1 L3 X2 X2 X2 R1 R1", "L1 L1 X2 X2 X1 X1 R2 R1"] {
        let w = parse_front(text).unwrap();
        assert_eq!(serialize_front(&w), text);
        assert_eq!(parse_front(&serialize_front(&w)).unwrap(), w);
    }
    let w = parse_front("# unknot\nL1\n  R1  # closing\n").unwrap();
    assert_eq!(w.to_string(), "L1 R1");
}

#[test]
fn syntax_error_reports_token() {
    match parse_front("L1 X1\nR1 Y3") {
        Err(FrontError::Syntax { token_index, line, token }) => {
            assert_eq!((token_index, line, token.as_str()), (3, 2, "Y3"));
        }
        other => panic!("{other:?}"),
    }
    for bad in ["L0 R1", "l1 r1", "L R1", "L1R1"] {
        assert!(matches!(parse_front(bad), Err(FrontError::Syntax { .. })), "{bad}");
    }
}

#[test]
fn validation_errors() {
    let v = validate_front(&parse_events("L1 L1").unwrap());
    assert_eq!(v, vec![Violation::NotClosed { strands: 4 }]);
    assert_eq!(validate_front(&[]), vec![Violation::NoCusps]);
    let v = validate_front(&parse_events("L1 X2 R1").unwrap());
    assert!(matches!(v[0], Violation::PositionOutOfRange { index: 1, .. }));
    assert!(matches!(
        parse_front("L1 L1 R1 R1"),
        Err(FrontError::Invalid(v)) if v == vec![Violation::ComponentCount { components: 2 }]
    ));
}

#[test]
fn builtin_invariants() {
    let pairs: Vec<_> = [unknot_front(), right_trefoil_front(), left_trefoil_front()]
        .iter()
        .map(|f| classical_invariants(f).pair())
        .collect();
    assert_eq!(pairs, vec![(-1, 0), (1, 0), (-6, -1)]);
}

#[test]
fn invariants_json_keys() {
    let v: serde_json::Value = serde_json::from_str(&classical_invariants(&unknot_front()).to_json()).unwrap();
    for k in ["tb", "rot", "writhe", "up_cusps", "down_cusps"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    assert_eq!(v["tb"], -1);
}

#[test]
fn random_fronts_satisfy_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..500 {
        let w = random_front(&mut rng, 1 + i % 12, 8);
        let f = orient_front(&w);
        let c = classical_invariants(&f);
        let cusps = (c.up_cusps + c.down_cusps) as i64;
        assert_eq!(c.tb, c.writhe - cusps / 2);
        assert_eq!(2 * c.rot, c.down_cusps as i64 - c.up_cusps as i64);
        assert_eq!((c.tb + c.rot).rem_euclid(2), 1, "{w}");
        let r = classical_invariants(&reverse_orientation(&f));
        assert_eq!((r.tb, r.rot), (c.tb, -c.rot));
        assert_eq!(reverse_orientation(&reverse_orientation(&f)), f);
    }
}

#[test]
fn connected_sum_adds() {
    let fronts: Vec<OrientedFront> = builtin_fronts()
        .into_iter()
        .flat_map(|(_, f)| [reverse_orientation(&f), f])
        .collect();
    for f in &fronts {
        for g in &fronts {
            let (a, b) = (classical_invariants(f), classical_invariants(g));
            let s = classical_invariants(&connect_sum(f, g));
            assert_eq!((s.tb, s.rot), (a.tb + b.tb + 1, a.rot + b.rot));
        }
    }
}
