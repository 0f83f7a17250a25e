mod common;

use std::collections::BTreeSet;

use common::jones::{jones, poly};
use legendrian_cost::front::*;
use legendrian_cost::knot_types::*;
use legendrian_cost::moves::destabilizations;

#[test]
fn builtin_descriptor_examples() {
    let u = builtin_descriptor("unknot").unwrap();
    assert_eq!(u.peaks, BTreeSet::from([(-1, 0)]));
    assert!(u.is_simple() && u.unique_destabilization);
    assert_eq!(builtin_descriptor("torus(2,3)").unwrap().peaks, BTreeSet::from([(1, 0)]));
    assert_eq!(builtin_descriptor("torus(3, 2)").unwrap().name, "torus(2,3)");
    let l = builtin_descriptor("left_trefoil").unwrap();
    assert_eq!(l.peaks, BTreeSet::from([(-6, -1), (-6, 1)]));
    assert!(!l.unique_destabilization);
    assert!(matches!(builtin_descriptor("torus(2,4)"), Err(KnotError::BadTorus { .. })));
    assert!(matches!(builtin_descriptor("figure_eight"), Err(KnotError::UnknownName(_))));
}

#[test]
fn descriptor_json_round_trip_and_validation() {
    let l = builtin_descriptor("left_trefoil").unwrap();
    assert_eq!(KnotTypeDescriptor::from_json(&l.to_json()).unwrap(), l);
    let v: serde_json::Value = serde_json::from_str(&l.to_json()).unwrap();
    assert_eq!(v["simple"], true);
    let text = r#"{"name":"x","simple":"unknown","peaks":[[-1,0]],"unique_destabilization":true,"invertible":true}"#;
    assert_eq!(KnotTypeDescriptor::from_json(text).unwrap().simple, Simplicity::Unknown);
    for bad in [
        r#"{"name":"x","simple":true,"peaks":[],"unique_destabilization":false,"invertible":true}"#,
        r#"{"name":"x","simple":true,"peaks":[[-2,0]],"unique_destabilization":true,"invertible":true}"#,
        r#"{"name":"x","simple":true,"peaks":[[-1,0],[-1,2]],"unique_destabilization":true,"invertible":true}"#,
        r#"{"name":"x","simple":"maybe","peaks":[[-1,0]],"unique_destabilization":true,"invertible":true}"#,
    ] {
        assert!(matches!(KnotTypeDescriptor::from_json(bad), Err(KnotError::Invalid(_))), "{bad}");
    }
}

#[test]
fn sum_descriptor_examples() {
    let u = builtin_descriptor("unknot").unwrap();
    let uu = sum_descriptor(&u, &u);
    assert_eq!((uu.simple, uu.peaks.clone()), (Simplicity::Simple, BTreeSet::from([(-1, 0)])));
    let t = sum_descriptor(&builtin_descriptor("torus(2,3)").unwrap(), &builtin_descriptor("torus(2,5)").unwrap());
    assert_eq!((t.simple, t.peaks), (Simplicity::Simple, BTreeSet::from([(5, 0)])));
    let l = builtin_descriptor("left_trefoil").unwrap();
    let ll = sum_descriptor(&l, &l);
    assert_eq!(ll.simple, Simplicity::Unknown);
    assert!(ll.note.as_deref().unwrap().contains("candidate pair"));
    assert_eq!(ll.peaks, BTreeSet::from([(-11, -2), (-11, 0), (-11, 2)]));
    // two different types whose maximal-tb pairs share a rotation sum
    let two = |name: &str| KnotTypeDescriptor {
        name: name.into(),
        simple: Simplicity::Simple,
        peaks: BTreeSet::from([(-6, -1), (-6, 1)]),
        unique_destabilization: false,
        invertible: true,
        note: None,
    };
    assert_eq!(sum_descriptor(&two("a"), &two("b")).simple, Simplicity::NonSimple);
    // a self-sum with four consecutive maximal-tb rotation numbers
    let four = KnotTypeDescriptor {
        peaks: BTreeSet::from([(0, -3), (0, -1), (0, 1), (0, 3)]),
        ..two("c")
    };
    assert_eq!(sum_descriptor(&four, &four).simple, Simplicity::Unknown);
}

#[test]
fn sum_descriptor_matches_front_sums() {
    let fronts = builtin_fronts();
    for (a, f) in &fronts {
        for (b, g) in &fronts {
            let d = sum_descriptor(&builtin_descriptor(a).unwrap(), &builtin_descriptor(b).unwrap());
            let s = classical_invariants(&connect_sum(f, g));
            assert!(d.peaks.contains(&(s.tb, s.rot)), "{a}#{b}: {:?}", (s.tb, s.rot));
        }
    }
}

#[test]
fn classes_down_to_examples() {
    let u = builtin_descriptor("unknot").unwrap();
    let pairs = |d: &KnotTypeDescriptor, f| -> Vec<(i64, i64)> {
        classes_down_to(d, f).unwrap().iter().map(|c| (c.tb, c.rot)).collect()
    };
    assert_eq!(pairs(&u, -3), vec![(-1, 0), (-2, -1), (-2, 1), (-3, -2), (-3, 0), (-3, 2)]);
    assert_eq!(pairs(&u, -1), vec![(-1, 0)]);
    assert_eq!(pairs(&builtin_descriptor("torus(2,3)").unwrap(), 0), vec![(1, 0), (0, -1), (0, 1)]);
    for n in 1..10 {
        assert_eq!(classes_down_to(&u, -n).unwrap().len() as i64, n * (n + 1) / 2);
    }
    let mut ns = u.clone();
    ns.simple = Simplicity::NonSimple;
    assert!(matches!(classes_down_to(&ns, -3), Err(KnotError::NotSimple(_))));
}

#[test]
fn standard_front_examples() {
    assert_eq!(standard_front("unknot", -1, 0).unwrap().word().to_string(), "L1 R1");
    let s = standard_front("unknot", -2, 1).unwrap();
    assert_eq!(classical_invariants(&s).pair(), (-2, 1));
    assert!(matches!(standard_front("unknot", -2, 0), Err(KnotError::Unreachable { .. })));
    for (tb, rot) in [(-7, 0), (-8, 3), (-6, 1), (-6, -1)] {
        let f = standard_front("left_trefoil", tb, rot).unwrap();
        assert_eq!(classical_invariants(&f).pair(), (tb, rot));
    }
}

#[test]
fn builtin_fronts_have_the_right_knot_type() {
    // Jones polynomials of the unknot, right and left trefoil
    assert_eq!(jones(unknot_front().word()), poly(&[(0, 1)]));
    assert_eq!(jones(right_trefoil_front().word()), poly(&[(1, 1), (3, 1), (4, -1)]));
    assert_eq!(jones(left_trefoil_front().word()), poly(&[(-1, 1), (-3, 1), (-4, -1)]));
    // peak fronts do not destabilize
    for (_, f) in builtin_fronts() {
        assert!(destabilizations(&f).is_empty());
    }
}

#[test]
fn torus_fronts() {
    for (p, q) in [(2, 3), (2, 5), (3, 4), (3, 5), (2, 7)] {
        let f = torus_front(p, q).unwrap();
        let i = classical_invariants(&f);
        assert_eq!(i.pair(), (torus_peak_tb(p as i64, q as i64), 0), "T({p},{q})");
    }
    assert_eq!(jones(torus_front(2, 3).unwrap().word()), jones(right_trefoil_front().word()));
    assert!(torus_front(2, 4).is_err());
}

#[test]
fn twist_fronts_agree_within_a_family() {
    assert!(e_front(0, 2).is_err());
    let fig8 = poly(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]);
    for n in 2..7u32 {
        let first = e_front(1, n - 1).unwrap();
        let (inv, j) = (classical_invariants(&first).pair(), jones(first.word()));
        if n == 2 {
            assert_eq!(j, fig8);
        }
        for k in 2..n {
            let f = e_front(k, n - k).unwrap();
            assert_eq!(classical_invariants(&f).pair(), inv, "E({k},{})", n - k);
            assert_eq!(jones(f.word()), j, "E({k},{})", n - k);
        }
    }
    assert_eq!(classical_invariants(&e_front(2, 3).unwrap()).pair(), (1, 0));
}
