//! Planar commutation normal form and the Legendrian Reidemeister moves as
//! local rewrites of event words.
//!
//! Move results are always returned in canonical form. Orientations are
//! carried through rewrites by following one untouched event (the anchor)
//! and comparing the direction of its upper port before and after.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sweep::{mirror, Diagram, Realized};
use crate::front::{
    cusp_is_down, Direction, Event, EventKind, FrontError, FrontWord, OrientedFront, Skeleton,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveTag {
    LR1,
    LR2,
    LR3,
    Commute,
    StabilizePlus,
    StabilizeMinus,
    DestabilizePlus,
    DestabilizeMinus,
}

/// A move with its template variant and site.
///
/// Variants: LR1 0/1 insert a kink below/above a strand, 2/3 remove them.
/// LR2 0..=3 push a strand through a cusp (left cusp with the strand below,
/// left cusp with the strand above, right cusp below, right cusp above) and
/// 4..=7 undo those. LR3 0 rewrites `X(i) X(i+1) X(i)`, 1 the other triangle.
/// Stabilizations use 0 for the `L(i) R(i+1)` zigzag and 1 for `L(i+1) R(i)`.
///
/// `site` is a segment id of the source word for insertions (LR1 0/1,
/// stabilizations) and an event index of the source word otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MoveKind {
    #[serde(rename = "move")]
    pub tag: MoveTag,
    pub variant: u8,
    pub site: usize,
}

impl MoveKind {
    pub const fn new(tag: MoveTag, variant: u8, site: usize) -> Self {
        MoveKind { tag, variant, site }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn rot_delta(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One step of a trace: the move applied and the oriented result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveStep {
    #[serde(flatten)]
    pub kind: MoveKind,
    pub word: FrontWord,
    /// Orientation of `word` relative to its canonical orientation.
    #[serde(default)]
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveTrace {
    pub start: FrontWord,
    #[serde(default)]
    pub start_reversed: bool,
    pub steps: Vec<MoveStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {index} ({kind:?}) does not reproduce {word}")]
    Mismatch {
        index: usize,
        kind: MoveKind,
        word: String,
    },
    #[error("trace starts at {found} but {expected} was expected")]
    WrongStart { expected: String, found: String },
}

impl MoveTrace {
    pub fn new(start: &OrientedFront) -> MoveTrace {
        MoveTrace {
            start: start.word().clone(),
            start_reversed: start.is_reversed(),
            steps: Vec::new(),
        }
    }

    pub fn end(&self) -> OrientedFront {
        match self.steps.last() {
            Some(s) => OrientedFront::new(s.word.clone(), s.reversed),
            None => OrientedFront::new(self.start.clone(), self.start_reversed),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.steps).expect("trace serializes")
    }

    /// Checks every step against the moves module: the step's result must be
    /// among the results of applying its move kind to the previous word.
    /// The start is compared up to canonical form.
    pub fn replay(&self) -> Result<(), ReplayError> {
        let mut cur = canonical_state(self.start.events(), self.start_reversed);
        for (index, step) in self.steps.iter().enumerate() {
            let target = (step.word.events().to_vec(), step.reversed);
            let found = match step.kind.tag {
                MoveTag::Commute => {
                    let c = canonical_state(step.word.events(), step.reversed);
                    c == cur
                }
                MoveTag::StabilizePlus | MoveTag::StabilizeMinus => {
                    let sign = if step.kind.tag == MoveTag::StabilizePlus {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    };
                    stabilize_move(&cur.0, cur.1, sign, step.kind.site)
                        .map(|(k, s)| k == step.kind && s == target)
                        .unwrap_or(false)
                }
                MoveTag::DestabilizePlus | MoveTag::DestabilizeMinus => {
                    let sign = if step.kind.tag == MoveTag::DestabilizePlus {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    };
                    destab_states(&cur.0, cur.1)
                        .into_iter()
                        .any(|(s, k, w, r)| {
                            s == sign && k == step.kind && w == target.0 && r == target.1
                        })
                }
                _ => state_moves(&cur.0, cur.1, true)
                    .into_iter()
                    .any(|(k, w, r)| k == step.kind && w == target.0 && r == target.1),
            };
            if !found {
                return Err(ReplayError::Mismatch {
                    index,
                    kind: step.kind,
                    word: step.word.to_string(),
                });
            }
            cur = canonical_state(step.word.events(), step.reversed);
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Commutation

/// Events with stable identities, so that rewrites can follow individual
/// events through reorderings.
#[derive(Clone, Debug)]
pub(crate) struct Tracked {
    pub ev: Vec<Event>,
    pub id: Vec<u32>,
}

impl Tracked {
    pub fn new(ev: Vec<Event>) -> Tracked {
        let id = (0..ev.len() as u32).collect();
        Tracked { ev, id }
    }

    fn index_of(&self, id: u32) -> Option<usize> {
        self.id.iter().position(|&x| x == id)
    }
}

/// Lexicographically least word in the commutation class, with identities.
pub(crate) fn canonicalize(t: Tracked) -> Tracked {
    let (ev, idx) = Diagram::new(&t.ev).least_word();
    let id = idx.iter().map(|&k| t.id[k as usize]).collect();
    Tracked { ev, id }
}

pub fn canonical_form(word: &FrontWord) -> FrontWord {
    FrontWord::from_trusted(canonicalize(Tracked::new(word.events().to_vec())).ev)
}

/// Canonical form of an oriented front, carrying the orientation along.
pub fn canonical_oriented(f: &OrientedFront) -> OrientedFront {
    let (w, r) = canonical_state(f.word().events(), f.is_reversed());
    OrientedFront::new(FrontWord::from_trusted(w), r)
}

/// Direction of the upper port of event `k` in `ev` under the canonical
/// orientation flipped by `rev`.
fn port_direction(ev: &[Event], k: usize, rev: bool) -> Direction {
    let sk = Skeleton::build(ev);
    let dirs = sk.canonical_directions(ev);
    let d = dirs[sk.upper_port(ev, k) as usize];
    if rev {
        d.flip()
    } else {
        d
    }
}

/// Canonical form of a (word, reversed) pair.
pub(crate) fn canonical_state(ev: &[Event], rev: bool) -> (Vec<Event>, bool) {
    let c = canonicalize(Tracked::new(ev.to_vec()));
    let k = c.index_of(0).unwrap();
    let want = port_direction(ev, 0, rev);
    let got = port_direction(&c.ev, k, false);
    (c.ev, want != got)
}

/// Finishes a rewrite: canonicalizes `t` and fixes its orientation so that
/// the event `anchor` keeps the upper-port direction `dir`.
fn settle(t: Tracked, anchor: u32, dir: Direction) -> (Vec<Event>, bool) {
    let c = canonicalize(t);
    let k = c.index_of(anchor).expect("anchor survives the rewrite");
    let got = port_direction(&c.ev, k, false);
    (c.ev, got != dir)
}

// ---------------------------------------------------------------------------
// Gathering

/// Context shared by all pattern searches on one source word.
struct Source<'a> {
    t: &'a Tracked,
    sk: Skeleton,
    diagram: Diagram,
}

impl<'a> Source<'a> {
    fn new(t: &'a Tracked) -> Source<'a> {
        Source {
            t,
            sk: Skeleton::build(&t.ev),
            diagram: Diagram::new(&t.ev),
        }
    }

    fn tracked(&self, r: Realized) -> (Tracked, usize) {
        let id = r.ids.iter().map(|&k| self.t.id[k as usize]).collect();
        (Tracked { ev: r.ev, id }, r.start)
    }

    /// A representative in which the chain `p` is contiguous and its window
    /// passes `check`, with the window start.
    fn gather(&self, p: &[usize], check: &dyn Fn(&[Event]) -> bool) -> Option<(Tracked, usize)> {
        let chain: Vec<u32> = p.iter().map(|&x| x as u32).collect();
        self.diagram.gather(&chain, check).map(|r| self.tracked(r))
    }

    fn kind(&self, k: u32) -> EventKind {
        self.t.ev[k as usize].kind
    }

    fn consumer(&self, s: u32) -> (u32, u8) {
        self.sk.consumer[s as usize]
    }

    fn producer(&self, s: u32) -> (u32, u8) {
        self.sk.producer[s as usize]
    }
}

// ---------------------------------------------------------------------------
// Templates

fn kink(variant: u8, i: u32) -> [Event; 3] {
    match variant {
        0 => [Event::left(i + 1), Event::cross(i), Event::right(i + 1)],
        _ => [Event::left(i), Event::cross(i + 1), Event::right(i)],
    }
}

fn zigzag(variant: u8, i: u32) -> [Event; 2] {
    match variant {
        0 => [Event::left(i), Event::right(i + 1)],
        _ => [Event::left(i + 1), Event::right(i)],
    }
}

/// LR2 expanded forms for the cusp at gap/position `g`.
fn lr2_expanded(variant: u8, g: u32) -> [Event; 3] {
    match variant {
        0 => [Event::left(g + 1), Event::cross(g), Event::cross(g + 1)],
        1 => [Event::left(g - 1), Event::cross(g), Event::cross(g - 1)],
        2 => [Event::cross(g + 1), Event::cross(g), Event::right(g + 1)],
        _ => [Event::cross(g - 1), Event::cross(g), Event::right(g - 1)],
    }
}

fn lr2_collapsed(variant: u8, g: u32) -> Event {
    match variant {
        0 | 1 => Event::left(g),
        _ => Event::right(g),
    }
}

fn triangle(variant: u8, i: u32) -> [Event; 3] {
    match variant {
        0 => [Event::cross(i), Event::cross(i + 1), Event::cross(i)],
        _ => [Event::cross(i + 1), Event::cross(i), Event::cross(i + 1)],
    }
}

/// Replaces `len` events at `start` with `with`, giving the new events fresh ids.
fn splice(t: &Tracked, start: usize, len: usize, with: &[Event]) -> Tracked {
    let mut fresh = t.id.iter().copied().max().map_or(0, |m| m + 1);
    let mut ev = Vec::with_capacity(t.ev.len() + with.len() - len.min(t.ev.len()));
    let mut id = Vec::with_capacity(ev.capacity());
    ev.extend_from_slice(&t.ev[..start]);
    id.extend_from_slice(&t.id[..start]);
    for &e in with {
        ev.push(e);
        id.push(fresh);
        fresh += 1;
    }
    ev.extend_from_slice(&t.ev[start + len..]);
    id.extend_from_slice(&t.id[start + len..]);
    Tracked { ev, id }
}

/// Event id outside `[start, start + len)` of the representative `t`, and its
/// upper-port direction in the source word `src` (whose ids are indices).
fn pick_anchor(src: &[Event], rev: bool, t: &Tracked, start: usize, len: usize) -> (u32, Direction) {
    let k = if start > 0 { 0 } else { start + len };
    let id = t.id[k];
    (id, port_direction(src, id as usize, rev))
}

type Out = Vec<(MoveKind, Vec<Event>, bool)>;

/// A rewrite of a contiguous window in representative `r`.
fn rewrite(
    out: &mut Out,
    kind: MoveKind,
    src: &[Event],
    r: &Tracked,
    rev: bool,
    start: usize,
    len: usize,
    with: &[Event],
) {
    let (anchor, dir) = pick_anchor(src, rev, r, start, len);
    let t = splice(r, start, len, with);
    let (w, rv) = settle(t, anchor, dir);
    out.push((kind, w, rv));
}

/// Direction of segment `s` in the canonical word `ev` flipped by `rev`.
fn segment_directions(ev: &[Event], rev: bool) -> Vec<Direction> {
    let sk = Skeleton::build(ev);
    let mut d = sk.canonical_directions(ev);
    if rev {
        d.iter_mut().for_each(|x| *x = x.flip());
    }
    d
}

/// Position of segment `s` in the slice right after its producer.
fn segment_position(src: &Source, s: u32) -> u32 {
    let (e, port) = src.producer(s);
    src.t.ev[e as usize].position + port as u32
}

fn insertions(src: &Source, rev: bool, out: &mut Out) {
    for s in 0..src.sk.segment_count() as u32 {
        let (e, _) = src.producer(s);
        let pos = segment_position(src, s);
        for v in 0..2u8 {
            let t = kink(v, pos);
            let r = src.t;
            let at = e as usize + 1;
            let (anchor, dir) = (r.id[0], port_direction(&r.ev, 0, rev));
            let new = splice(r, at, 0, &t);
            let (w, rv) = settle(new, anchor, dir);
            out.push((MoveKind::new(MoveTag::LR1, v, s as usize), w, rv));
        }
    }
}

fn kink_removals(src: &Source, rev: bool, out: &mut Out) {
    for l in 0..src.t.ev.len() {
        if src.t.ev[l].kind != EventKind::LeftCusp {
            continue;
        }
        let [a, b] = src.sk.outputs[l];
        // variant 0: X(i) takes (s, a); R(i+1) takes (s', b)
        let (x, px) = src.consumer(a);
        if px == 1 && src.kind(x) == EventKind::Crossing {
            let s2 = src.sk.outputs[x as usize][1];
            let (r, pr) = src.consumer(s2);
            if pr == 0
                && src.kind(r) == EventKind::RightCusp
                && src.sk.inputs[r as usize][1] == b
            {
                try_contract(src, rev, &[l, x as usize, r as usize], out, |w| {
                    let i = w[1].position;
                    (w == kink(0, i)).then(|| (MoveKind::new(MoveTag::LR1, 2, l), vec![]))
                });
            }
        }
        // variant 1: X(i+1) takes (b, s); R(i) takes (a, s')
        let (x, px) = src.consumer(b);
        if px == 0 && src.kind(x) == EventKind::Crossing {
            let s2 = src.sk.outputs[x as usize][0];
            let (r, pr) = src.consumer(a);
            if pr == 0
                && src.kind(r) == EventKind::RightCusp
                && src.sk.inputs[r as usize][1] == s2
            {
                try_contract(src, rev, &[l, x as usize, r as usize], out, |w| {
                    let i = w[0].position;
                    (w == kink(1, i)).then(|| (MoveKind::new(MoveTag::LR1, 3, l), vec![]))
                });
            }
        }
    }
}

/// Gathers the chain `p`, matches the window with `check`, and applies the
/// replacement it returns.
fn try_contract<F>(src: &Source, rev: bool, p: &[usize], out: &mut Out, check: F)
where
    F: Fn(&[Event]) -> Option<(MoveKind, Vec<Event>)>,
{
    let mut p = p.to_vec();
    p.sort_unstable();
    let Some((r, start)) = src.gather(&p, &|w| check(w).is_some()) else {
        return;
    };
    let window = &r.ev[start..start + p.len()];
    if let Some((kind, with)) = check(window) {
        rewrite(out, kind, &src.t.ev, &r, rev, start, p.len(), &with);
    }
}

fn lr2_contractions(src: &Source, rev: bool, out: &mut Out) {
    let ev = &src.t.ev;
    for c in 0..ev.len() {
        match ev[c].kind {
            EventKind::LeftCusp => {
                let [a, b] = src.sk.outputs[c];
                // A: X(g) takes (s, a), X(g+1) takes (s', b)
                let (x1, p1) = src.consumer(a);
                if p1 == 1 && src.kind(x1) == EventKind::Crossing {
                    let s2 = src.sk.outputs[x1 as usize][1];
                    let (x2, p2) = src.consumer(s2);
                    if p2 == 0
                        && src.kind(x2) == EventKind::Crossing
                        && src.sk.inputs[x2 as usize][1] == b
                    {
                        try_contract(src, rev, &[c, x1 as usize, x2 as usize], out, |w| {
                            let g = w[1].position;
                            (w == lr2_expanded(0, g)).then(|| {
                                (MoveKind::new(MoveTag::LR2, 4, c), vec![lr2_collapsed(0, g)])
                            })
                        });
                    }
                }
                // B: X(g) takes (b, s), X(g-1) takes (a, s')
                let (x1, p1) = src.consumer(b);
                if p1 == 0 && src.kind(x1) == EventKind::Crossing {
                    let s2 = src.sk.outputs[x1 as usize][0];
                    let (x2, p2) = src.consumer(s2);
                    if p2 == 1
                        && src.kind(x2) == EventKind::Crossing
                        && src.sk.inputs[x2 as usize][0] == a
                    {
                        try_contract(src, rev, &[c, x1 as usize, x2 as usize], out, |w| {
                            let g = w[1].position;
                            (g >= 2 && w == lr2_expanded(1, g)).then(|| {
                                (MoveKind::new(MoveTag::LR2, 5, c), vec![lr2_collapsed(1, g)])
                            })
                        });
                    }
                }
            }
            EventKind::RightCusp => {
                let [u, v] = src.sk.inputs[c];
                let (pu, qu) = src.producer(u);
                let (pv, qv) = src.producer(v);
                if src.kind(pu) != EventKind::Crossing || src.kind(pv) != EventKind::Crossing {
                    continue;
                }
                // C: x1 = X(g+1) gives v' (port 1) and s' (port 0); x2 = X(g) takes s' at port 1, gives u' (port 1)
                if qu == 1 && qv == 1 {
                    let (x2, x1) = (pu, pv);
                    let s2 = src.sk.outputs[x1 as usize][0];
                    if src.consumer(s2) == (x2, 1) {
                        try_contract(src, rev, &[x1 as usize, x2 as usize, c], out, |w| {
                            let g = w[1].position;
                            (w == lr2_expanded(2, g)).then(|| {
                                (MoveKind::new(MoveTag::LR2, 6, c), vec![lr2_collapsed(2, g)])
                            })
                        });
                    }
                }
                // D: x1 = X(g-1) gives u' (port 0) and s' (port 1); x2 = X(g) takes s' at port 0, gives v' (port 0)
                if qu == 0 && qv == 0 {
                    let (x1, x2) = (pu, pv);
                    let s2 = src.sk.outputs[x1 as usize][1];
                    if src.consumer(s2) == (x2, 0) {
                        try_contract(src, rev, &[x1 as usize, x2 as usize, c], out, |w| {
                            let g = w[1].position;
                            (g >= 2 && w == lr2_expanded(3, g)).then(|| {
                                (MoveKind::new(MoveTag::LR2, 7, c), vec![lr2_collapsed(3, g)])
                            })
                        });
                    }
                }
            }
            EventKind::Crossing => {}
        }
    }
}

fn lr3_moves(src: &Source, rev: bool, out: &mut Out) {
    let ev = &src.t.ev;
    for x1 in 0..ev.len() {
        if ev[x1].kind != EventKind::Crossing {
            continue;
        }
        let [o0, o1] = src.sk.outputs[x1];
        // variant 0: x2 takes o1 at port 0; x3 takes o0 at port 0 and x2's out0 at port 1
        let (x2, p2) = src.consumer(o1);
        let (x3, p3) = src.consumer(o0);
        if p2 == 0
            && p3 == 0
            && src.kind(x2) == EventKind::Crossing
            && src.kind(x3) == EventKind::Crossing
            && src.sk.inputs[x3 as usize][1] == src.sk.outputs[x2 as usize][0]
        {
            try_contract(src, rev, &[x1, x2 as usize, x3 as usize], out, |w| {
                let i = w[0].position;
                (w == triangle(0, i))
                    .then(|| (MoveKind::new(MoveTag::LR3, 0, x1), triangle(1, i).to_vec()))
            });
        }
        // variant 1: x2 takes o0 at port 1; x3 takes x2's out1 at port 0 and o1 at port 1
        let (x2, p2) = src.consumer(o0);
        let (x3, p3) = src.consumer(o1);
        if p2 == 1
            && p3 == 1
            && src.kind(x2) == EventKind::Crossing
            && src.kind(x3) == EventKind::Crossing
            && src.sk.inputs[x3 as usize][0] == src.sk.outputs[x2 as usize][1]
        {
            try_contract(src, rev, &[x1, x2 as usize, x3 as usize], out, |w| {
                let i = w[1].position;
                (w == triangle(1, i))
                    .then(|| (MoveKind::new(MoveTag::LR3, 1, x1), triangle(0, i).to_vec()))
            });
        }
    }
}

fn lr2_expansions(src: &Source, rev: bool, out: &mut Out) {
    let ev = &src.t.ev;
    let mirrored = Diagram::new(&mirror(ev));
    for c in 0..ev.len() {
        let cands: Vec<(u32, bool)> = match ev[c].kind {
            EventKind::LeftCusp => src.diagram.beside_candidates(c as u32),
            EventKind::RightCusp => mirrored
                .beside_candidates((ev.len() - 1 - c) as u32)
                .into_iter()
                .map(|(s, b)| (src.diagram.from_mirror(&mirrored, s), b))
                .collect(),
            EventKind::Crossing => continue,
        };
        // the strand poked through lies below the cusp for variants 0 and 2
        let (v_below, v_above) = if ev[c].kind == EventKind::LeftCusp { (0, 1) } else { (2, 3) };
        for (s, below) in cands {
            let Some((r, p)) = src
                .diagram
                .gather_beside(c as u32, s, below)
                .map(|x| src.tracked(x))
            else {
                continue;
            };
            let v = if below { v_below } else { v_above };
            let g = r.ev[p].position;
            let kind = MoveKind::new(MoveTag::LR2, v, c);
            rewrite(out, kind, ev, &r, rev, p, 1, &lr2_expanded(v, g));
        }
    }
}

/// All LR-move results of a canonical (word, reversed) state, in canonical
/// form. With `keep_trivial` false, results equal to the source are dropped.
pub(crate) fn state_moves(ev: &[Event], rev: bool, keep_trivial: bool) -> Out {
    let t = Tracked::new(ev.to_vec());
    let src = Source::new(&t);
    let mut out = Vec::new();
    insertions(&src, rev, &mut out);
    kink_removals(&src, rev, &mut out);
    lr2_expansions(&src, rev, &mut out);
    lr2_contractions(&src, rev, &mut out);
    lr3_moves(&src, rev, &mut out);
    if !keep_trivial {
        out.retain(|(_, w, r)| !(w == ev && *r == rev));
    }
    let mut seen = HashSet::new();
    out.retain(|x| seen.insert(x.clone()));
    out
}

/// All LR1/LR2/LR3 results (forward and inverse) of `word`, in canonical form.
pub fn neighbors(word: &FrontWord) -> Vec<(MoveKind, FrontWord)> {
    let c = canonical_form(word);
    let mut seen = HashSet::new();
    state_moves(c.events(), false, false)
        .into_iter()
        .filter(|(k, w, _)| seen.insert((*k, w.clone())))
        .map(|(k, w, _)| (k, FrontWord::from_trusted(w)))
        .collect()
}

/// Oriented version of [`neighbors`].
pub fn oriented_neighbors(f: &OrientedFront) -> Vec<(MoveKind, OrientedFront)> {
    let (w, r) = canonical_state(f.word().events(), f.is_reversed());
    state_moves(&w, r, false)
        .into_iter()
        .map(|(k, w, r)| (k, OrientedFront::new(FrontWord::from_trusted(w), r)))
        .collect()
}

// ---------------------------------------------------------------------------
// Stabilization

/// Zigzag variant that realizes `sign` on a strand travelling in direction `d`.
fn zigzag_variant(sign: Sign, d: Direction) -> u8 {
    // On a rightward strand L(i) R(i+1) has two up cusps.
    match (sign, d) {
        (Sign::Minus, Direction::Rightward) | (Sign::Plus, Direction::Leftward) => 0,
        _ => 1,
    }
}

pub(crate) fn stabilize_state(
    ev: &[Event],
    rev: bool,
    sign: Sign,
    site: usize,
) -> Result<(Vec<Event>, bool), FrontError> {
    stabilize_move(ev, rev, sign, site).map(|(_, s)| s)
}

/// Stabilization of a state on segment `site`, with the move it makes.
pub(crate) fn stabilize_move(
    ev: &[Event],
    rev: bool,
    sign: Sign,
    site: usize,
) -> Result<(MoveKind, (Vec<Event>, bool)), FrontError> {
    let t = Tracked::new(ev.to_vec());
    let sk = Skeleton::build(ev);
    let segments = sk.segment_count();
    if site >= segments {
        return Err(FrontError::InvalidSite { site, segments });
    }
    let dirs = segment_directions(ev, rev);
    let v = zigzag_variant(sign, dirs[site]);
    let (e, port) = sk.producer[site];
    let pos = ev[e as usize].position + port as u32;
    let (anchor, dir) = (t.id[0], port_direction(ev, 0, rev));
    let new = splice(&t, e as usize + 1, 0, &zigzag(v, pos));
    let tag = match sign {
        Sign::Plus => MoveTag::StabilizePlus,
        Sign::Minus => MoveTag::StabilizeMinus,
    };
    Ok((MoveKind::new(tag, v, site), settle(new, anchor, dir)))
}

/// Inserts a zigzag on segment `site` of `f`. The result is in canonical form.
pub fn stabilize(f: &OrientedFront, sign: Sign, site: usize) -> Result<OrientedFront, FrontError> {
    let (w, r) = stabilize_state(f.word().events(), f.is_reversed(), sign, site)?;
    Ok(OrientedFront::new(FrontWord::from_trusted(w), r))
}

/// Every stabilization of a state at every segment, deduplicated.
pub(crate) fn all_stabilizations(ev: &[Event], rev: bool, sign: Sign) -> Vec<(MoveKind, (Vec<Event>, bool))> {
    let n = Skeleton::build(ev).segment_count();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in 0..n {
        let (k, st) = stabilize_move(ev, rev, sign, s).expect("site in range");
        if seen.insert(st.clone()) {
            out.push((k, st));
        }
    }
    out
}

pub(crate) fn destab_states(ev: &[Event], rev: bool) -> Vec<(Sign, MoveKind, Vec<Event>, bool)> {
    let t = Tracked::new(ev.to_vec());
    let src = Source::new(&t);
    let mut out: Out = Vec::new();
    let mut signs: Vec<Sign> = Vec::new();
    // directions of a representative, oriented to agree with the source at id 0
    let dirs_of = |r: &Tracked| -> (Skeleton, Vec<Direction>) {
        let sk = Skeleton::build(&r.ev);
        let mut d = sk.canonical_directions(&r.ev);
        let k = r.index_of(0).unwrap();
        if d[sk.upper_port(&r.ev, k) as usize] != port_direction(ev, 0, rev) {
            d.iter_mut().for_each(|x| *x = x.flip());
        }
        (sk, d)
    };
    for l in 0..ev.len() {
        if ev[l].kind != EventKind::LeftCusp {
            continue;
        }
        let [a, b] = src.sk.outputs[l];
        for (v, seg, port) in [(0u8, b, 0u8), (1u8, a, 1u8)] {
            let (r, pr) = src.consumer(seg);
            if pr != port || src.kind(r) != EventKind::RightCusp {
                continue;
            }
            let p = [l, r as usize];
            let is_zigzag = |w: &[Event]| {
                let i = if v == 0 { w[0].position } else { w[1].position };
                w == zigzag(v, i)
            };
            let Some((rep, start)) = src.gather(&p, &is_zigzag) else {
                continue;
            };
            // sign: both cusps down means positive
            let (sk, d) = dirs_of(&rep);
            let down = cusp_is_down(&rep.ev, &sk, &d, start);
            let sign = if down { Sign::Plus } else { Sign::Minus };
            let tag = match sign {
                Sign::Plus => MoveTag::DestabilizePlus,
                Sign::Minus => MoveTag::DestabilizeMinus,
            };
            rewrite(&mut out, MoveKind::new(tag, v, l), ev, &rep, rev, start, 2, &[]);
            signs.push(sign);
        }
    }
    let mut seen = HashSet::new();
    out.into_iter()
        .zip(signs)
        .filter(|((_, w, r), s)| seen.insert((*s, w.clone(), *r)))
        .map(|((k, w, r), s)| (s, k, w, r))
        .collect()
}

/// Every zigzag that can be removed from `f` after commutations, with its sign.
pub fn destabilizations(f: &OrientedFront) -> Vec<(Sign, OrientedFront)> {
    let (w, r) = canonical_state(f.word().events(), f.is_reversed());
    destab_states(&w, r)
        .into_iter()
        .map(|(s, _, w, r)| (s, OrientedFront::new(FrontWord::from_trusted(w), r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::front::{classical_invariants, parse_front};

    fn w(s: &str) -> FrontWord {
        parse_front(s).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_form(&w("L1 R1")).to_string(), "L1 R1");
        let t = w("L1 L3 X2 X2 X2 R1 R1");
        assert_eq!(canonical_form(&t).to_string(), "L1 L1 X2 X2 X2 R1 R1");
        // independent kinks in both orders
        let a = w("L1 L1 X2 R1 L3 X2 R3 R1");
        let b = w("L1 L3 X2 R3 L1 X2 R1 R1");
        let c = canonical_form(&a);
        assert_eq!(c, canonical_form(&b));
        assert_eq!(canonical_form(&c), c);
    }

    #[test]
    fn kink_round_trip() {
        let u = w("L1 R1");
        let nb = neighbors(&u);
        assert!(!nb.is_empty());
        for (_, v) in &nb {
            let back = neighbors(v);
            assert!(back.iter().any(|(_, x)| *x == u), "{v}");
        }
    }

    #[test]
    fn stabilization_signs() {
        let u = OrientedFront::new(w("L1 R1"), false);
        for site in 0..2 {
            let p = stabilize(&u, Sign::Plus, site).unwrap();
            let m = stabilize(&u, Sign::Minus, site).unwrap();
            assert_eq!(classical_invariants(&p).pair(), (-2, 1));
            assert_eq!(classical_invariants(&m).pair(), (-2, -1));
            let d = destabilizations(&p);
            assert!(d.iter().any(|(s, f)| *s == Sign::Plus && f.word().to_string() == "L1 R1"));
        }
    }
}
