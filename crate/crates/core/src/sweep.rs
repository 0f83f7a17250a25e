//! Exact lexicographic normal form under planar commutation.
//!
//! A word is a left-to-right sweep of a fixed planar diagram. Crossings and
//! right cusps can be swept once their inputs are adjacent in the slice; a
//! left cusp can be born in any gap of the slice that lies in the same region
//! (right of the sweep line) as its tip. Regions are found by walking face
//! boundaries through the unswept part of the diagram.

use std::cell::RefCell;

use rustc_hash::FxHashSet;
use smallvec::{smallvec, SmallVec};

use crate::front::{Event, EventKind, Skeleton, NONE};

/// Side of a segment being walked. `Below` walks rightwards, `Above` walks
/// leftwards, so the region stays on one hand.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Below(u32),
    Above(u32),
}

pub(crate) struct Diagram {
    kind: Vec<EventKind>,
    sk: Skeleton,
    /// bitmask of left cusps, laid out like `State::swept`
    lefts: Vec<u64>,
}

thread_local! {
    static SCRATCH: RefCell<Faces> = RefCell::new(Faces::default());
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    swept: SmallVec<[u64; 1]>,
    slice: SmallVec<[u32; 14]>,
}

impl State {
    fn is_swept(&self, e: u32) -> bool {
        self.swept[e as usize / 64] >> (e % 64) & 1 == 1
    }

    fn mark(&mut self, e: u32) {
        self.swept[e as usize / 64] |= 1 << (e % 64);
    }
}

/// An angle passed by a boundary walk. `tip` and `wedge` name the left cusp
/// whose outer or inner angle this is, or `NONE`.
#[derive(Clone, Copy)]
struct Angle {
    switch: i32,
    large: i32,
    tip: u32,
    wedge: u32,
}

impl Angle {
    const fn new(switch: i32, large: i32) -> Angle {
        Angle {
            switch,
            large,
            tip: NONE,
            wedge: NONE,
        }
    }
}

const PLAIN: Angle = Angle::new(0, 0);
const SMALL: Angle = Angle::new(1, 0);
const LARGE: Angle = Angle::new(1, 1);

/// Reused buffers for face walks. Faces touching the slice are stored as
/// (start, end, outer) ranges of `angles`, slice corners included.
#[derive(Default)]
struct Faces {
    angles: Vec<Angle>,
    cycles: Vec<(usize, usize, bool)>,
    corner: Vec<(usize, usize)>,
    walk: Vec<Angle>,
    ends: Vec<(usize, usize, usize)>,
    pre: Vec<(i32, i32)>,
}

fn fits(switch: i32, large: i32, outer: bool) -> bool {
    switch % 2 == 0 && large == switch / 2 + if outer { 1 } else { -1 }
}

type Pick = (usize, u32, usize);

/// Keeps `pick` if `tok` ties the best token so far, or restarts with it if
/// smaller.
fn offer(best: &mut Option<Event>, picks: &mut Vec<Pick>, tok: Event, pick: Pick) {
    match *best {
        Some(b) if tok > b => return,
        Some(b) if tok == b => {}
        _ => {
            *best = Some(tok);
            picks.clear();
        }
    }
    picks.push(pick);
}

impl Diagram {
    pub fn new(ev: &[Event]) -> Diagram {
        let mut lefts = vec![0u64; ev.len().div_ceil(64).max(1)];
        for (i, e) in ev.iter().enumerate() {
            if e.kind == EventKind::LeftCusp {
                lefts[i / 64] |= 1 << (i % 64);
            }
        }
        Diagram {
            kind: ev.iter().map(|e| e.kind).collect(),
            sk: Skeleton::build(ev),
            lefts,
        }
    }

    /// One step of a boundary walk, recording the angle passed; `Err(s)`
    /// when the walk reaches slice segment `s` from above.
    fn step(&self, st: &State, side: Side, angles: &mut Vec<Angle>) -> Result<Side, u32> {
        let sk = &self.sk;
        let (angle, next) = match side {
            Side::Below(s) => {
                let (e, p) = sk.consumer[s as usize];
                let [i0, i1] = sk.inputs[e as usize];
                match (self.kind[e as usize], p) {
                    (EventKind::Crossing, 1) => (PLAIN, Side::Below(sk.outputs[e as usize][1])),
                    (EventKind::RightCusp, 1) => (LARGE, Side::Above(i0)),
                    _ => (SMALL, Side::Above(i1)),
                }
            }
            Side::Above(s) => {
                let (e, p) = sk.producer[s as usize];
                if st.is_swept(e) {
                    return Err(s);
                }
                let [o0, o1] = sk.outputs[e as usize];
                match (self.kind[e as usize], p) {
                    (EventKind::LeftCusp, 0) => (Angle { tip: e, ..LARGE }, Side::Below(o1)),
                    (EventKind::LeftCusp, _) => (Angle { wedge: e, ..SMALL }, Side::Below(o0)),
                    (EventKind::Crossing, 0) => (PLAIN, Side::Above(sk.inputs[e as usize][0])),
                    _ => (SMALL, Side::Below(o0)),
                }
            }
        };
        angles.push(angle);
        Ok(next)
    }

    /// Walks a closed boundary of the unswept diagram from `start`.
    fn closed_walk(&self, st: &State, start: Side, angles: &mut Vec<Angle>) {
        let mut cur = start;
        loop {
            cur = self.step(st, cur, angles).expect("walk stays off the slice");
            if cur == start {
                break;
            }
        }
    }

    /// Fills `fc` with the faces touching the slice: their angles back to
    /// back, and for each gap its face and the index of its corner there.
    /// The outer face holds the corner shared by the first and last gap.
    fn faces(&self, st: &State, fc: &mut Faces) {
        fc.angles.clear();
        fc.cycles.clear();
        fc.corner.clear();
        if st.slice.is_empty() {
            // the first event of any word has its tip on the outer face
            self.closed_walk(st, Side::Below(self.sk.outputs[0][1]), &mut fc.angles);
            fc.cycles.push((0, fc.angles.len(), true));
            fc.corner.push((0, 0));
            return;
        }
        let n = st.slice.len();
        // walk g leaves corner g (corner n being the outer one) and ends at a corner
        fc.walk.clear();
        fc.ends.clear();
        for g in 1..=n {
            let from = fc.walk.len();
            let mut cur = Side::Below(st.slice[g - 1]);
            let end = loop {
                match self.step(st, cur, &mut fc.walk) {
                    Ok(next) => cur = next,
                    Err(s) => break st.slice.iter().position(|&x| x == s).unwrap(),
                }
            };
            fc.ends.push((from, fc.walk.len(), if end == 0 { n } else { end }));
        }
        fc.corner.resize(n + 1, (usize::MAX, 0));
        for g0 in 1..=n {
            if fc.corner[g0].0 != usize::MAX {
                continue;
            }
            let id = fc.cycles.len();
            let from = fc.angles.len();
            let mut outer = false;
            let mut g = g0;
            while fc.corner[g].0 == usize::MAX {
                fc.corner[g] = (id, fc.angles.len() - from);
                outer |= g == n;
                fc.angles.push(if g == n { LARGE } else { SMALL });
                let (a, b, end) = fc.ends[g - 1];
                fc.angles.extend_from_slice(&fc.walk[a..b]);
                g = end;
            }
            fc.cycles.push((from, fc.angles.len(), outer));
        }
        fc.corner[0] = fc.corner[n];
    }

    /// Whether the rest of the diagram can still be swept from `st`: every
    /// face touching the slice has the large-angle count an upward drawing
    /// needs.
    fn completable(&self, st: &State) -> bool {
        if st.slice.is_empty() {
            return true;
        }
        SCRATCH.with_borrow_mut(|fc| {
            self.faces(st, fc);
            fc.cycles.iter().all(|&(a, b, outer)| {
                let (sw, lg) = fc.angles[a..b].iter().fold((0, 0), |s, x| (s.0 + x.switch, s.1 + x.large));
                fits(sw, lg, outer)
            })
        })
    }

    /// Whether some left cusp is still unswept.
    fn pending_left(&self, st: &State) -> bool {
        st.swept.iter().zip(&self.lefts).any(|(&s, &l)| s & l != l)
    }

    /// Births that keep the state completable, as (gap, cusp) pairs, lowest
    /// gap first.
    ///
    /// A birth at gap `h` cuts the face of the tip at the corner of `h` and
    /// at the tip; both halves must pass the angle count.
    fn births(&self, st: &State) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        if !self.pending_left(st) {
            return out;
        }
        let n = st.slice.len();
        let mut slow = Vec::new();
        SCRATCH.with_borrow_mut(|fc| {
            self.faces(st, fc);
            // prefix sums, per face, laid out like the angles with one extra
            // entry per face
            fc.pre.clear();
            for &(a, b, _) in &fc.cycles {
                let mut l = (0, 0);
                fc.pre.push(l);
                for x in &fc.angles[a..b] {
                    l = (l.0 + x.switch, l.1 + x.large);
                    fc.pre.push(l);
                }
            }
            for (h, &(f, ci)) in fc.corner.iter().enumerate() {
                let (a0, b0, outer) = fc.cycles[f];
                let cyc = &fc.angles[a0..b0];
                let m = cyc.len();
                let pre = &fc.pre[a0 + f..b0 + f + 1];
                let range = |a: usize, b: usize| {
                    // angles a..b, cyclically
                    if a <= b {
                        (pre[b].0 - pre[a].0, pre[b].1 - pre[a].1)
                    } else {
                        (pre[m].0 - pre[a].0 + pre[b].0, pre[m].1 - pre[a].1 + pre[b].1)
                    }
                };
                let cut = if n > 0 && h == n { (ci + 1) % m } else { ci };
                let outer_at = fc.corner[n].1;
                for (t, a) in cyc.iter().enumerate() {
                    if a.tip == NONE {
                        continue;
                    }
                    let e = a.tip;
                    if n == 0 || cyc.iter().any(|x| x.wedge == e) {
                        slow.push((h, e));
                        continue;
                    }
                    let (mut sw1, lg1) = range(cut, t);
                    let (mut sw2, lg2) = range((t + 1) % m, cut);
                    if h == n {
                        sw1 += 1;
                    } else {
                        sw2 += 1;
                    }
                    let (o1, o2) = if outer {
                        let o = outer_at;
                        let in1 = if cut <= t { o >= cut && o < t } else { o >= cut || o < t };
                        (in1, !in1)
                    } else {
                        (false, false)
                    };
                    if fits(sw1, lg1, o1) && fits(sw2, lg2, o2) {
                        out.push((h, e));
                    }
                }
            }
        });
        if !slow.is_empty() {
            for (h, e) in slow {
                if self.completable(&self.advance(st, e, h)) {
                    out.push((h, e));
                }
            }
            out.sort_unstable();
        }
        out
    }

    fn advance(&self, st: &State, e: u32, at: usize) -> State {
        let mut next = st.clone();
        next.mark(e);
        let outs = self.sk.outputs[e as usize];
        match self.kind[e as usize] {
            EventKind::LeftCusp => {
                next.slice.insert_many(at, outs);
            }
            EventKind::RightCusp => {
                next.slice.drain(at..at + 2);
            }
            EventKind::Crossing => {
                next.slice[at] = outs[0];
                next.slice[at + 1] = outs[1];
            }
        }
        next
    }

    fn start(&self) -> State {
        State {
            swept: smallvec![0; self.kind.len().div_ceil(64).max(1)],
            slice: SmallVec::new(),
        }
    }

    /// Slice index at which crossing or right cusp `e` can be swept now.
    fn ready(&self, st: &State, e: u32) -> Option<usize> {
        let [u, _] = self.sk.inputs[e as usize];
        let i = st.slice.iter().position(|&s| s == u)?;
        (st.slice.get(i + 1) == Some(&self.sk.inputs[e as usize][1])).then_some(i)
    }

    /// Every event that can be swept next, as (token, event, slice index).
    fn options(&self, st: &State) -> Vec<(Event, u32, usize)> {
        let mut out: Vec<(Event, u32, usize)> = self
            .births(st)
            .into_iter()
            .map(|(g, e)| (Event::left(g as u32 + 1), e, g))
            .collect();
        for i in 0..st.slice.len().saturating_sub(1) {
            let (e, p) = self.sk.consumer[st.slice[i] as usize];
            if p == 0 && e != NONE && self.sk.consumer[st.slice[i + 1] as usize] == (e, 1) {
                out.push((Event::new(self.kind[e as usize], i as u32 + 1), e, i));
            }
        }
        out
    }

    /// Lexicographically least word of the diagram, with the diagram index of
    /// each emitted event.
    pub fn least_word(&self) -> (Vec<Event>, Vec<u32>) {
        let total = self.kind.len();
        let mut cands: Vec<(Vec<u32>, State)> = vec![(Vec::with_capacity(total), self.start())];
        let mut word = Vec::with_capacity(total);
        while word.len() < total {
            let mut best: Option<Event> = None;
            let mut picks: Vec<Pick> = Vec::new();
            for (c, (_, st)) in cands.iter().enumerate() {
                let births = self.births(st);
                if !births.is_empty() {
                    for (g, e) in births {
                        offer(&mut best, &mut picks, Event::left(g as u32 + 1), (c, e, g));
                    }
                    continue;
                }
                if best.is_some_and(|b| b.kind == EventKind::LeftCusp) {
                    continue;
                }
                for i in 0..st.slice.len().saturating_sub(1) {
                    let (e, p) = self.sk.consumer[st.slice[i] as usize];
                    if p == 0 && e != NONE && self.sk.consumer[st.slice[i + 1] as usize] == (e, 1) {
                        offer(
                            &mut best,
                            &mut picks,
                            Event::new(self.kind[e as usize], i as u32 + 1),
                            (c, e, i),
                        );
                    }
                }
            }
            let best = best.expect("a valid diagram always has a sweepable event");
            word.push(best);
            let mut seen = FxHashSet::default();
            let mut next = Vec::with_capacity(picks.len());
            for (c, e, at) in picks {
                let st = self.advance(&cands[c].1, e, at);
                if seen.insert(st.clone()) {
                    let mut ids = cands[c].0.clone();
                    ids.push(e);
                    next.push((ids, st));
                }
            }
            cands = next;
        }
        let (ids, _) = cands.swap_remove(0);
        (word, ids)
    }

    /// Events that feed `seeds` through segments, including the seeds.
    fn ancestors(&self, seeds: &[u32]) -> Vec<bool> {
        let mut mark = vec![false; self.kind.len()];
        let mut stack = seeds.to_vec();
        while let Some(e) = stack.pop() {
            if std::mem::replace(&mut mark[e as usize], true) {
                continue;
            }
            for s in self.sk.inputs[e as usize] {
                if s != NONE {
                    stack.push(self.sk.producer[s as usize].0);
                }
            }
        }
        mark
    }

    /// Searches for a word of the diagram in which `place` succeeds right
    /// after some prefix. `place` sweeps a few events itself and reports them.
    /// Events in `avoid` are never swept by the prefix. Gives up after
    /// `budget` prefixes.
    fn realize<F>(&self, seeds: &[u32], avoid: &[u32], budget: usize, place: F) -> Option<Realized>
    where
        F: Fn(&State) -> Option<(State, Vec<(Event, u32)>)>,
    {
        let mut anc = self.ancestors(seeds);
        for &e in avoid {
            anc[e as usize] = false;
        }
        let mut seen: FxHashSet<State> = FxHashSet::default();
        let mut stack: Vec<(State, Vec<(Event, u32)>)> = vec![(self.start(), Vec::new())];
        while let Some((st, prefix)) = stack.pop() {
            if seen.len() >= budget || !seen.insert(st.clone()) {
                if seen.len() >= budget {
                    return None;
                }
                continue;
            }
            if let Some((mut cur, window)) = place(&st) {
                let start = prefix.len();
                let mut word: Vec<(Event, u32)> = prefix;
                word.extend(window);
                while word.len() < self.kind.len() {
                    let (tok, e, at) = self.options(&cur)[0];
                    cur = self.advance(&cur, e, at);
                    word.push((tok, e));
                }
                let (ev, ids) = word.into_iter().unzip();
                return Some(Realized { ev, ids, start });
            }
            let opts: Vec<_> = self
                .options(&st)
                .into_iter()
                .filter(|(_, e, _)| !avoid.contains(e))
                .collect();
            let mut push = |(tok, e, at): (Event, u32, usize)| {
                let mut p = prefix.clone();
                p.push((tok, e));
                stack.push((self.advance(&st, e, at), p));
            };
            // ancestors go first, crossings and right cusps without branching
            if let Some(&o) = opts
                .iter()
                .find(|(t, e, _)| anc[*e as usize] && t.kind != EventKind::LeftCusp)
            {
                push(o);
                continue;
            }
            let (mine, rest): (Vec<_>, Vec<_>) =
                opts.into_iter().partition(|(_, e, _)| anc[*e as usize]);
            if !mine.is_empty() {
                mine.into_iter().rev().for_each(&mut push);
            } else {
                rest.into_iter().rev().for_each(&mut push);
            }
        }
        None
    }

    /// A word in which the events `chain` are consecutive, in this order,
    /// and the window passes `check`.
    pub fn gather(&self, chain: &[u32], check: &dyn Fn(&[Event]) -> bool) -> Option<Realized> {
        let seeds: Vec<u32> = chain
            .iter()
            .flat_map(|&e| self.sk.inputs[e as usize])
            .filter(|&s| s != NONE)
            .map(|s| self.sk.producer[s as usize].0)
            .filter(|e| !chain.contains(e))
            .collect();
        self.realize(&seeds, chain, GATHER_BUDGET, |st| {
            let mut placed = Vec::with_capacity(chain.len());
            self.place_chain(st, chain, &mut placed, check)
        })
    }

    fn place_chain(
        &self,
        st: &State,
        chain: &[u32],
        placed: &mut Vec<(Event, u32)>,
        check: &dyn Fn(&[Event]) -> bool,
    ) -> Option<(State, Vec<(Event, u32)>)> {
        let Some((&e, rest)) = chain.split_first() else {
            let w: Vec<Event> = placed.iter().map(|p| p.0).collect();
            return check(&w).then(|| (st.clone(), placed.clone()));
        };
        let spots: Vec<(Event, usize)> = if self.kind[e as usize] == EventKind::LeftCusp {
            self.birth_gaps(st, e)
                .into_iter()
                .map(|g| (Event::left(g as u32 + 1), g))
                .collect()
        } else {
            self.ready(st, e)
                .map(|i| (Event::new(self.kind[e as usize], i as u32 + 1), i))
                .into_iter()
                .collect()
        };
        for (tok, at) in spots {
            placed.push((tok, e));
            if let Some(r) = self.place_chain(&self.advance(st, e, at), rest, placed, check) {
                return Some(r);
            }
            placed.pop();
        }
        None
    }

    /// Valid birth gaps of left cusp `e`.
    fn birth_gaps(&self, st: &State, e: u32) -> Vec<usize> {
        if st.is_swept(e) {
            return Vec::new();
        }
        self.births(st)
            .into_iter()
            .filter(|&(_, x)| x == e)
            .map(|(g, _)| g)
            .collect()
    }

    /// A word in which cusp `c` is swept directly next to segment `s`, which
    /// lies below the cusp's strands if `below`, above otherwise.
    pub fn gather_beside(&self, c: u32, s: u32, below: bool) -> Option<Realized> {
        let (ps, _) = self.sk.producer[s as usize];
        let (cs, _) = self.sk.consumer[s as usize];
        if ps == c || cs == c {
            return None;
        }
        let mut seeds = vec![ps];
        if self.kind[c as usize] == EventKind::RightCusp {
            for x in self.sk.inputs[c as usize] {
                seeds.push(self.sk.producer[x as usize].0);
            }
        }
        let placed_next_to = |st: &State, at: usize| {
            let width = if self.kind[c as usize] == EventKind::LeftCusp { 0 } else { 2 };
            if below {
                st.slice.get(at + width) == Some(&s)
            } else {
                at >= 1 && st.slice[at - 1] == s
            }
        };
        self.realize(&seeds, &[c, cs], GATHER_BUDGET, |st| {
            if !st.slice.contains(&s) {
                return None;
            }
            let spots: Vec<(Event, usize)> = if self.kind[c as usize] == EventKind::LeftCusp {
                self.birth_gaps(st, c)
                    .into_iter()
                    .map(|g| (Event::left(g as u32 + 1), g))
                    .collect()
            } else {
                self.ready(st, c)
                    .map(|i| (Event::right(i as u32 + 1), i))
                    .into_iter()
                    .collect()
            };
            spots
                .into_iter()
                .find(|&(_, at)| placed_next_to(st, at))
                .map(|(tok, at)| (self.advance(st, c, at), vec![(tok, c)]))
        })
    }

    /// Segments that a left cusp `c` can be born directly next to, as
    /// (segment, below). A chord from the tip to the segment must split the
    /// tip face into two faces that both still pass the angle count.
    pub fn beside_candidates(&self, c: u32) -> Vec<(u32, bool)> {
        let st = self.start();
        let [o0, o1] = self.sk.outputs[c as usize];
        let mut sides = Vec::new();
        let mut raw = Vec::new();
        let mut cur = Side::Below(o1);
        loop {
            sides.push(cur);
            cur = self.step(&st, cur, &mut raw).expect("walk stays off the slice");
            if cur == Side::Below(o1) {
                break;
            }
        }
        // the outer face is the one holding the tip of the first event
        let outer = raw.iter().any(|a| a.tip == 0);
        let angles: Vec<(i32, i32)> = raw.iter().map(|a| (a.switch, a.large)).collect();
        let m = angles.len();
        let mut pre = vec![(0, 0); m + 1];
        for i in 0..m {
            pre[i + 1] = (pre[i].0 + angles[i].0, pre[i].1 + angles[i].1);
        }
        let mut out = Vec::new();
        for (j, &side) in sides.iter().enumerate() {
            let (s, below) = match side {
                Side::Above(s) => (s, true),
                Side::Below(s) => (s, false),
            };
            if s == o0 || s == o1 {
                continue;
            }
            // arc one runs from the tip to the segment, arc two back to the tip
            let (mut sw1, lg1) = pre[j];
            let (mut sw2, lg2) = (pre[m - 1].0 - pre[j].0, pre[m - 1].1 - pre[j].1);
            if below {
                sw1 += 1;
            } else {
                sw2 += 1;
            }
            let ok = if outer {
                (fits(sw1, lg1, true) && fits(sw2, lg2, false))
                    || (fits(sw1, lg1, false) && fits(sw2, lg2, true))
            } else {
                fits(sw1, lg1, false) && fits(sw2, lg2, false)
            };
            if ok {
                out.push((s, below));
            }
        }
        out
    }

    /// Segment of this diagram that is `s` of the diagram of [`mirror`].
    pub fn from_mirror(&self, m: &Diagram, s: u32) -> u32 {
        let (e, p) = m.sk.consumer[s as usize];
        self.sk.outputs[self.kind.len() - 1 - e as usize][p as usize]
    }
}

/// The horizontal reflection of a word: reversed, with cusps exchanged.
pub(crate) fn mirror(ev: &[Event]) -> Vec<Event> {
    ev.iter()
        .rev()
        .map(|e| match e.kind {
            EventKind::LeftCusp => Event::right(e.position),
            EventKind::RightCusp => Event::left(e.position),
            EventKind::Crossing => *e,
        })
        .collect()
}

const GATHER_BUDGET: usize = 4096;

/// A word of the diagram with a marked window.
pub(crate) struct Realized {
    pub ev: Vec<Event>,
    /// Diagram index of each event.
    pub ids: Vec<u32>,
    pub start: usize,
}
