//! Front projections as slice-event words.
//!
//! A front is scanned left to right. Between events the strands are numbered
//! 1..=n from top to bottom; an event acts on the slice immediately before it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Sentinel for an absent segment slot (left cusps have no inputs, right cusps no outputs).
pub(crate) const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EventKind {
    LeftCusp,
    RightCusp,
    Crossing,
}

impl EventKind {
    pub fn letter(self) -> char {
        match self {
            EventKind::LeftCusp => 'L',
            EventKind::RightCusp => 'R',
            EventKind::Crossing => 'X',
        }
    }

    /// Number of strands consumed from the slice before the event.
    pub fn arity_in(self) -> u32 {
        match self {
            EventKind::LeftCusp => 0,
            _ => 2,
        }
    }

    /// Number of strands produced into the slice after the event.
    pub fn arity_out(self) -> u32 {
        match self {
            EventKind::RightCusp => 0,
            _ => 2,
        }
    }
}

/// One generic event of a front. Ordering is by kind (L < R < X) then position,
/// which is the order used for canonical forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    pub kind: EventKind,
    /// 1-based strand position in the slice before the event.
    pub position: u32,
}

impl Event {
    pub const fn new(kind: EventKind, position: u32) -> Self {
        Event { kind, position }
    }
    pub const fn left(position: u32) -> Self {
        Event::new(EventKind::LeftCusp, position)
    }
    pub const fn right(position: u32) -> Self {
        Event::new(EventKind::RightCusp, position)
    }
    pub const fn cross(position: u32) -> Self {
        Event::new(EventKind::Crossing, position)
    }

    pub fn is_cusp(&self) -> bool {
        self.kind != EventKind::Crossing
    }

    /// Strand count after the event, given the count before it.
    pub fn apply_width(&self, n: u32) -> u32 {
        n + self.kind.arity_out() - self.kind.arity_in()
    }

    /// Whether the position precondition holds on a slice of `n` strands.
    pub fn fits(&self, n: u32) -> bool {
        let i = self.position;
        match self.kind {
            EventKind::LeftCusp => i >= 1 && i <= n + 1,
            _ => i >= 1 && i < n,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.position)
    }
}

impl FromStr for Event {
    type Err = ();
    fn from_str(tok: &str) -> Result<Self, ()> {
        let mut chars = tok.chars();
        let kind = match chars.next() {
            Some('L') => EventKind::LeftCusp,
            Some('R') => EventKind::RightCusp,
            Some('X') => EventKind::Crossing,
            _ => return Err(()),
        };
        let digits = chars.as_str();
        if digits.is_empty()
            || !digits.bytes().all(|b| b.is_ascii_digit())
            || digits.starts_with('0')
        {
            return Err(());
        }
        let position = digits.parse::<u32>().map_err(|_| ())?;
        Ok(Event::new(kind, position))
    }
}

/// A single problem found by [`validate_front`].
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum Violation {
    #[error("event {index} ({event}) is out of range for a slice of {strands} strands")]
    PositionOutOfRange {
        index: usize,
        #[serde(serialize_with = "ser_event")]
        event: Event,
        strands: u32,
    },
    #[error("word ends with {strands} open strands")]
    NotClosed { strands: u32 },
    #[error("word has no cusps")]
    NoCusps,
    #[error("diagram has {components} components, expected 1")]
    ComponentCount { components: usize },
}

fn ser_event<S: serde::Serializer>(e: &Event, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FrontError {
    #[error("syntax error at token {token_index} (line {line}): {token:?}")]
    Syntax {
        token_index: usize,
        line: usize,
        token: String,
    },
    #[error("invalid front: {}", display_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("segment {site} does not exist (front has {segments} segments)")]
    InvalidSite { site: usize, segments: usize },
}

fn display_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Checks the position bounds, closedness, and the one-component condition.
/// An empty result means the sequence is a valid front word.
pub fn validate_front(events: &[Event]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut n = 0u32;
    let mut positions_ok = true;
    for (index, e) in events.iter().enumerate() {
        if !e.fits(n) {
            out.push(Violation::PositionOutOfRange {
                index,
                event: *e,
                strands: n,
            });
            positions_ok = false;
            break;
        }
        n = e.apply_width(n);
    }
    if !positions_ok {
        return out;
    }
    if n != 0 {
        out.push(Violation::NotClosed { strands: n });
        return out;
    }
    if events.is_empty() {
        out.push(Violation::NoCusps);
        return out;
    }
    let sk = Skeleton::build(events);
    let components = sk.component_count();
    if components != 1 {
        out.push(Violation::ComponentCount { components });
    }
    out
}

/// Segment bookkeeping for a word whose positions are in range.
///
/// Segment ids are handed out in production order: each left cusp or crossing
/// creates its upper output, then its lower output.
#[derive(Clone, Debug)]
pub struct Skeleton {
    /// Per event: segment ids at the upper and lower input ports.
    pub inputs: Vec<[u32; 2]>,
    /// Per event: segment ids at the upper and lower output ports.
    pub outputs: Vec<[u32; 2]>,
    /// Per segment: producing event and its output port.
    pub producer: Vec<(u32, u8)>,
    /// Per segment: consuming event and its input port.
    pub consumer: Vec<(u32, u8)>,
    /// Per event: strand count of the slice just before it.
    widths: Vec<u32>,
}

impl Skeleton {
    /// Assumes every event fits its slice; the final slice may be nonempty
    /// (unconsumed segments then have consumer `NONE`).
    pub fn build(events: &[Event]) -> Skeleton {
        let mut slice: Vec<u32> = Vec::new();
        let mut inputs = Vec::with_capacity(events.len());
        let mut outputs = Vec::with_capacity(events.len());
        let mut producer = Vec::with_capacity(2 * events.len());
        let mut consumer = Vec::with_capacity(2 * events.len());
        let mut widths = Vec::with_capacity(events.len());
        for (k, e) in events.iter().enumerate() {
            widths.push(slice.len() as u32);
            let i = (e.position - 1) as usize;
            let mut ins = [NONE; 2];
            let mut outs = [NONE; 2];
            if e.kind != EventKind::LeftCusp {
                ins = [slice[i], slice[i + 1]];
                consumer[ins[0] as usize] = (k as u32, 0);
                consumer[ins[1] as usize] = (k as u32, 1);
            }
            if e.kind != EventKind::RightCusp {
                let a = producer.len() as u32;
                outs = [a, a + 1];
                producer.push((k as u32, 0));
                producer.push((k as u32, 1));
                consumer.push((NONE, 0));
                consumer.push((NONE, 0));
            }
            match e.kind {
                EventKind::LeftCusp => {
                    slice.insert(i, outs[1]);
                    slice.insert(i, outs[0]);
                }
                EventKind::RightCusp => {
                    slice.drain(i..i + 2);
                }
                EventKind::Crossing => {
                    slice[i] = outs[0];
                    slice[i + 1] = outs[1];
                }
            }
            inputs.push(ins);
            outputs.push(outs);
        }
        Skeleton {
            inputs,
            outputs,
            producer,
            consumer,
            widths,
        }
    }

    pub fn segment_count(&self) -> usize {
        self.producer.len()
    }

    /// Strand count of the slice before event `k`.
    pub fn width_before(&self, k: usize) -> u32 {
        self.widths[k]
    }

    /// Next segment and direction when travelling along `seg` in direction `dir`.
    fn step(&self, events: &[Event], seg: u32, dir: Direction) -> (u32, Direction) {
        match dir {
            Direction::Rightward => {
                let (c, p) = self.consumer[seg as usize];
                let c = c as usize;
                match events[c].kind {
                    EventKind::RightCusp => (self.inputs[c][1 - p as usize], Direction::Leftward),
                    _ => (self.outputs[c][1 - p as usize], Direction::Rightward),
                }
            }
            Direction::Leftward => {
                let (e, p) = self.producer[seg as usize];
                let e = e as usize;
                match events[e].kind {
                    EventKind::LeftCusp => (self.outputs[e][1 - p as usize], Direction::Rightward),
                    _ => (self.inputs[e][1 - p as usize], Direction::Leftward),
                }
            }
        }
    }

    fn component_count(&self) -> usize {
        // Closed words only: every segment has a consumer. Components are the
        // classes of segments under the cusp and crossing connections.
        let n = self.segment_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let union = |a: u32, b: u32, p: &mut Vec<usize>| {
            let (ra, rb) = (find(p, a as usize), find(p, b as usize));
            if ra != rb {
                p[ra] = rb;
            }
        };
        for k in 0..self.inputs.len() {
            let ins = self.inputs[k];
            let outs = self.outputs[k];
            if ins[0] == NONE {
                union(outs[0], outs[1], &mut parent);
            } else if outs[0] == NONE {
                union(ins[0], ins[1], &mut parent);
            } else {
                union(ins[0], outs[1], &mut parent);
                union(ins[1], outs[0], &mut parent);
            }
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// Directions of every segment for the canonical orientation (segment 0,
    /// the upper output of the first left cusp, is Rightward).
    pub fn canonical_directions(&self, events: &[Event]) -> Vec<Direction> {
        let n = self.segment_count();
        let mut dirs = vec![Direction::Rightward; n];
        let (mut seg, mut dir) = (0u32, Direction::Rightward);
        for _ in 0..n {
            dirs[seg as usize] = dir;
            let (s, d) = self.step(events, seg, dir);
            seg = s;
            dir = d;
        }
        dirs
    }

    /// The segment that lies on the "upper" port of event `k`: the upper
    /// output for left cusps and crossings, the upper input for right cusps.
    pub fn upper_port(&self, events: &[Event], k: usize) -> u32 {
        match events[k].kind {
            EventKind::RightCusp => self.inputs[k][0],
            _ => self.outputs[k][0],
        }
    }
}

/// A validated, closed, one-component front word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrontWord {
    events: Vec<Event>,
}

impl FrontWord {
    pub fn new(events: Vec<Event>) -> Result<FrontWord, FrontError> {
        let v = validate_front(&events);
        if v.is_empty() {
            Ok(FrontWord { events })
        } else {
            Err(FrontError::Invalid(v))
        }
    }

    /// Skips validation; callers guarantee validity (move templates, canonical forms).
    pub(crate) fn from_trusted(events: Vec<Event>) -> FrontWord {
        debug_assert!(validate_front(&events).is_empty(), "{:?}", events);
        FrontWord { events }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn skeleton(&self) -> Skeleton {
        Skeleton::build(&self.events)
    }

    pub fn segment_count(&self) -> usize {
        self.events
            .iter()
            .map(|e| e.kind.arity_out() as usize)
            .sum()
    }

    pub fn crossing_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::Crossing)
            .count()
    }

    pub fn cusp_count(&self) -> usize {
        self.len() - self.crossing_count()
    }

    /// Maximum strand count over all slices.
    pub fn width(&self) -> u32 {
        let mut n = 0;
        let mut m = 0;
        for e in &self.events {
            n = e.apply_width(n);
            m = m.max(n);
        }
        m
    }
}

impl fmt::Display for FrontWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.events.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", e)?;
        }
        Ok(())
    }
}

impl FromStr for FrontWord {
    type Err = FrontError;
    fn from_str(s: &str) -> Result<Self, FrontError> {
        parse_front(s)
    }
}

impl Serialize for FrontWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FrontWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_front(&s).map_err(serde::de::Error::custom)
    }
}

/// Tokenizes without validating the word.
pub fn parse_events(text: &str) -> Result<Vec<Event>, FrontError> {
    let mut events = Vec::new();
    let mut token_index = 0;
    for (lineno, line) in text.lines().enumerate() {
        let code = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        for tok in code.split_whitespace() {
            match tok.parse::<Event>() {
                Ok(e) => events.push(e),
                Err(()) => {
                    return Err(FrontError::Syntax {
                        token_index,
                        line: lineno + 1,
                        token: tok.to_string(),
                    })
                }
            }
            token_index += 1;
        }
    }
    Ok(events)
}

pub fn parse_front(text: &str) -> Result<FrontWord, FrontError> {
    FrontWord::new(parse_events(text)?)
}

pub fn serialize_front(word: &FrontWord) -> String {
    word.to_string()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Rightward,
    Leftward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Rightward => Direction::Leftward,
            Direction::Leftward => Direction::Rightward,
        }
    }
}

/// A front word with a traversal direction on every segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedFront {
    word: FrontWord,
    directions: Vec<Direction>,
}

impl OrientedFront {
    /// The canonical orientation if `reversed` is false, its reverse otherwise.
    pub fn new(word: FrontWord, reversed: bool) -> OrientedFront {
        let mut directions = word.skeleton().canonical_directions(word.events());
        if reversed {
            directions.iter_mut().for_each(|d| *d = d.flip());
        }
        OrientedFront { word, directions }
    }

    /// Accepts explicit directions if they are consistent with the traversal.
    pub fn with_directions(
        word: FrontWord,
        directions: Vec<Direction>,
    ) -> Option<OrientedFront> {
        if directions.len() != word.segment_count() || directions.is_empty() {
            return None;
        }
        let of = OrientedFront::new(word, directions[0] == Direction::Leftward);
        (of.directions == directions).then_some(of)
    }

    pub fn word(&self) -> &FrontWord {
        &self.word
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// True when this is the reverse of the canonical orientation.
    pub fn is_reversed(&self) -> bool {
        self.directions[0] == Direction::Leftward
    }

    pub fn into_word(self) -> FrontWord {
        self.word
    }
}

pub fn orient_front(word: &FrontWord) -> OrientedFront {
    OrientedFront::new(word.clone(), false)
}

pub fn reverse_orientation(f: &OrientedFront) -> OrientedFront {
    OrientedFront {
        word: f.word.clone(),
        directions: f.directions.iter().map(|d| d.flip()).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalInvariants {
    pub tb: i64,
    pub rot: i64,
    pub writhe: i64,
    pub up_cusps: u64,
    pub down_cusps: u64,
}

impl ClassicalInvariants {
    /// Invariant-level record with no diagram behind it; writhe and cusp
    /// counts are zero.
    pub fn from_pair(tb: i64, rot: i64) -> ClassicalInvariants {
        ClassicalInvariants {
            tb,
            rot,
            writhe: 0,
            up_cusps: 0,
            down_cusps: 0,
        }
    }

    pub fn pair(&self) -> (i64, i64) {
        (self.tb, self.rot)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

/// Sign of the crossing at event `k` (must be a crossing).
pub(crate) fn crossing_sign(sk: &Skeleton, dirs: &[Direction], k: usize) -> i64 {
    let [over, under] = sk.inputs[k];
    if dirs[over as usize] == dirs[under as usize] {
        1
    } else {
        -1
    }
}

/// Whether the cusp at event `k` is traversed from its upper to its lower segment.
pub(crate) fn cusp_is_down(events: &[Event], sk: &Skeleton, dirs: &[Direction], k: usize) -> bool {
    match events[k].kind {
        EventKind::RightCusp => dirs[sk.inputs[k][0] as usize] == Direction::Rightward,
        EventKind::LeftCusp => dirs[sk.outputs[k][0] as usize] == Direction::Leftward,
        EventKind::Crossing => panic!("not a cusp"),
    }
}

pub fn classical_invariants(f: &OrientedFront) -> ClassicalInvariants {
    let events = f.word.events();
    let sk = f.word.skeleton();
    let mut writhe = 0;
    let (mut up, mut down) = (0u64, 0u64);
    for (k, e) in events.iter().enumerate() {
        if e.kind == EventKind::Crossing {
            writhe += crossing_sign(&sk, &f.directions, k);
        } else if cusp_is_down(events, &sk, &f.directions, k) {
            down += 1;
        } else {
            up += 1;
        }
    }
    let cusps = (up + down) as i64;
    ClassicalInvariants {
        tb: writhe - cusps / 2,
        rot: (down as i64 - up as i64) / 2,
        writhe,
        up_cusps: up,
        down_cusps: down,
    }
}

/// Legendrian connected sum. The last right cusp of `f` is spliced to the
/// first left cusp of `g`; if the two cusps are traversed the same way, `g` is
/// first given an extra kink on its top strand so that its leftmost cusp has
/// the opposite type.
pub fn connect_sum(f: &OrientedFront, g: &OrientedFront) -> OrientedFront {
    let fe = f.word.events();
    let ge = g.word.events();
    let fsk = f.word.skeleton();
    let gsk = g.word.skeleton();
    let f_down = cusp_is_down(fe, &fsk, &f.directions, fe.len() - 1);
    let g_down = cusp_is_down(ge, &gsk, &g.directions, 0);
    let mut events: Vec<Event> = fe[..fe.len() - 1].to_vec();
    if f_down != g_down {
        events.extend_from_slice(&ge[1..]);
    } else {
        // "L1 L3 X2 R1 ..." is g with a kink on its top strand whose left
        // cusp has been commuted in front of the original one.
        events.extend_from_slice(&[Event::left(3), Event::cross(2), Event::right(1)]);
        events.extend_from_slice(&ge[1..]);
    }
    let word = FrontWord::new(events).expect("connected sum of knots is a knot");
    OrientedFront::new(word, f.is_reversed())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(s: &str) -> ClassicalInvariants {
        classical_invariants(&orient_front(&parse_front(s).unwrap()))
    }

    #[test]
    fn unknot_and_trefoil() {
        let u = inv("L1 R1");
        assert_eq!((u.tb, u.rot), (-1, 0));
        let t = inv("L1 L3 X2 X2 X2 R1 R1");
        assert_eq!((t.tb, t.rot, t.writhe), (1, 0, 3));
        let s = inv("L1 X1 R1");
        assert_eq!((s.tb, s.rot.abs()), (-2, 1));
    }

    #[test]
    fn link_rejected() {
        let e = parse_front("L1 L2 X2 X2 X2 R2 R1").unwrap_err();
        assert_eq!(
            e,
            FrontError::Invalid(vec![Violation::ComponentCount { components: 2 }])
        );
    }

    #[test]
    fn range_rejected() {
        let v = validate_front(&parse_events("L1 R2").unwrap());
        assert!(matches!(v[0], Violation::PositionOutOfRange { index: 1, strands: 2, .. }));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            parse_front("L1 Q2"),
            Err(FrontError::Syntax { token_index: 1, .. })
        ));
        assert!(parse_front("L01 R1").is_err());
        assert!(parse_front("L1 # comment\nR1").is_ok());
    }

    #[test]
    fn trefoil_segments_alternate_at_cusps() {
        let w = parse_front("L1 L3 X2 X2 X2 R1 R1").unwrap();
        let of = orient_front(&w);
        assert_eq!(of.directions().len(), 10);
        let sk = w.skeleton();
        for (k, e) in w.events().iter().enumerate() {
            let d = of.directions();
            match e.kind {
                EventKind::LeftCusp => {
                    assert_ne!(d[sk.outputs[k][0] as usize], d[sk.outputs[k][1] as usize])
                }
                EventKind::RightCusp => {
                    assert_ne!(d[sk.inputs[k][0] as usize], d[sk.inputs[k][1] as usize])
                }
                EventKind::Crossing => {
                    assert_eq!(d[sk.inputs[k][0] as usize], d[sk.outputs[k][1] as usize]);
                    assert_eq!(d[sk.inputs[k][1] as usize], d[sk.outputs[k][0] as usize]);
                }
            }
        }
    }

    #[test]
    fn sum_with_both_cusp_types() {
        let u = orient_front(&parse_front("L1 R1").unwrap());
        for g in [u.clone(), reverse_orientation(&u)] {
            let s = classical_invariants(&connect_sum(&u, &g));
            assert_eq!((s.tb, s.rot), (-1, 0));
        }
    }
}
