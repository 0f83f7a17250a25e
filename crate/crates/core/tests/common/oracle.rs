//! Brute-force commutation classes, independent of the library's swap rule.
//!
//! Two adjacent events may be exchanged (with any new positions) whenever
//! every event keeps the same port-to-port connections.

use std::collections::{BTreeSet, VecDeque};

use legendrian_cost::front::{Event, EventKind, Skeleton};

/// For each event identity, the (producer identity, port) feeding each input.
fn signature(ev: &[Event], ids: &[usize]) -> Option<Vec<(usize, [(usize, u8); 2])>> {
    let mut n = 0u32;
    for e in ev {
        if !e.fits(n) {
            return None;
        }
        n = e.apply_width(n);
    }
    let sk = Skeleton::build(ev);
    let mut sig = vec![(0, [(usize::MAX, 0u8); 2]); ev.len()];
    for k in 0..ev.len() {
        let mut row = [(usize::MAX, 0u8); 2];
        if ev[k].kind != EventKind::LeftCusp {
            for p in 0..2 {
                let (e, port) = sk.producer[sk.inputs[k][p] as usize];
                row[p] = (ids[e as usize], port);
            }
        }
        sig[ids[k]] = (ev[k].kind as usize, row);
    }
    Some(sig)
}

/// Every word reachable by exchanges of adjacent events; `None` if more than `cap`.
pub fn commutation_class(word: &[Event], cap: usize) -> Option<BTreeSet<Vec<Event>>> {
    let ids: Vec<usize> = (0..word.len()).collect();
    let base = signature(word, &ids).unwrap();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(word.to_vec());
    queue.push_back((word.to_vec(), ids));
    while let Some((w, ids)) = queue.pop_front() {
        for p in 0..w.len().saturating_sub(1) {
            let maxpos = 2 + w.len() as u32;
            for a in 1..=maxpos {
                for b in 1..=maxpos {
                    let mut v = w.clone();
                    let mut vi = ids.clone();
                    v.swap(p, p + 1);
                    vi.swap(p, p + 1);
                    v[p].position = a;
                    v[p + 1].position = b;
                    if seen.contains(&v) {
                        continue;
                    }
                    if signature(&v, &vi).as_ref() == Some(&base) {
                        seen.insert(v.clone());
                        if seen.len() > cap {
                            return None;
                        }
                        queue.push_back((v, vi));
                    }
                }
            }
        }
    }
    Some(seen)
}
