//! Jones polynomial by the Kauffman bracket state sum. Independent of the
//! library's invariant code apart from the segment skeleton.

use std::collections::BTreeMap;

use legendrian_cost::front::{classical_invariants, orient_front, EventKind, FrontWord};

pub type Laurent = BTreeMap<i32, i64>;

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Jones polynomial in t, as exponent -> coefficient.
pub fn jones(w: &FrontWord) -> Laurent {
    let ev = w.events();
    let sk = w.skeleton();
    let crossings: Vec<usize> = (0..ev.len())
        .filter(|&k| ev[k].kind == EventKind::Crossing)
        .collect();
    let c = crossings.len();
    let nseg = sk.segment_count();
    // bracket: A-exponent -> coefficient
    let mut bracket = Laurent::new();
    let d = Laurent::from([(2, -1), (-2, -1)]);
    let mut dpow = vec![Laurent::from([(0, 1)])];
    for _ in 0..nseg {
        let next = mul(dpow.last().unwrap(), &d);
        dpow.push(next);
    }
    for state in 0u64..(1u64 << c) {
        let mut p: Vec<usize> = (0..nseg).collect();
        let join = |a: u32, b: u32, p: &mut Vec<usize>| {
            let (ra, rb) = (find(p, a as usize), find(p, b as usize));
            if ra != rb {
                p[ra] = rb;
            }
        };
        let mut nb = 0;
        for k in 0..ev.len() {
            let ins = sk.inputs[k];
            let outs = sk.outputs[k];
            match ev[k].kind {
                EventKind::LeftCusp => join(outs[0], outs[1], &mut p),
                EventKind::RightCusp => join(ins[0], ins[1], &mut p),
                EventKind::Crossing => {
                    let idx = crossings.iter().position(|&x| x == k).unwrap();
                    if state >> idx & 1 == 0 {
                        join(ins[0], outs[0], &mut p);
                        join(ins[1], outs[1], &mut p);
                    } else {
                        nb += 1;
                        join(ins[0], ins[1], &mut p);
                        join(outs[0], outs[1], &mut p);
                    }
                }
            }
        }
        let loops = (0..nseg).filter(|&x| find(&mut p, x) == x).count();
        let na = c as i32 - nb;
        for (e, co) in &dpow[loops - 1] {
            *bracket.entry(e + na - nb).or_default() += co;
        }
    }
    bracket.retain(|_, c| *c != 0);
    let writhe = classical_invariants(&orient_front(w)).writhe as i32;
    // (-A^3)^(-w)
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    let norm = Laurent::from([(-3 * writhe, sign)]);
    let v = mul(&norm, &bracket);
    v.into_iter()
        .map(|(e, c)| {
            assert!(e % 4 == 0, "non-integral t exponent");
            (-e / 4, c)
        })
        .collect()
}

pub fn poly(terms: &[(i32, i64)]) -> Laurent {
    terms.iter().copied().filter(|t| t.1 != 0).collect()
}
