//! Bounded Legendrian isotopy search and the stabilization cost oracle.
//!
//! States are canonical (word, reversed) pairs. The search grows the move
//! closures of both ends breadth first, always expanding the smaller
//! frontier, until they meet or the budget runs out.

use std::fmt;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::cost::{cost_lower_bound, cost_parity_ok, CostKind, CostResult, Provenance, StabSplit};
use crate::front::{classical_invariants, Event, FrontWord, OrientedFront};
use crate::moves::{
    all_stabilizations, canonical_state, destab_states, stabilize_state, state_moves, MoveKind, MoveStep, MoveTag,
    MoveTrace, Sign,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Largest strand count allowed in any slice.
    pub max_width: u32,
    /// Longest word allowed.
    pub max_events: usize,
    /// Canonical forms the search may visit, both sides together.
    pub max_states: usize,
    /// Stabilizations `cost_search` may spend.
    pub max_cost: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_width: 8,
            max_events: 24,
            max_states: 1_000_000,
            max_cost: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("budget field {0} must be positive")]
    NotPositive(&'static str),
}

impl SearchBudget {
    pub fn validate(&self) -> Result<(), BudgetError> {
        if self.max_width == 0 {
            return Err(BudgetError::NotPositive("max_width"));
        }
        if self.max_events == 0 {
            return Err(BudgetError::NotPositive("max_events"));
        }
        if self.max_states == 0 {
            return Err(BudgetError::NotPositive("max_states"));
        }
        if self.max_cost == 0 {
            return Err(BudgetError::NotPositive("max_cost"));
        }
        Ok(())
    }

    fn admits(&self, ev: &[Event]) -> bool {
        ev.len() <= self.max_events && width(ev) <= self.max_width
    }
}

fn width(ev: &[Event]) -> u32 {
    let mut n = 0;
    let mut m = 0;
    for e in ev {
        n = e.apply_width(n);
        m = m.max(n);
    }
    m
}

/// What a search used.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Canonical forms visited on both sides.
    pub states: usize,
    /// States whose neighbours were computed.
    pub expanded: usize,
    /// Neighbours dropped for exceeding the width or length limit.
    pub pruned: usize,
    /// Breadth-first depth reached from each end.
    pub depth: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum DistinctReason {
    TbMismatch { a: i64, b: i64 },
    RotMismatch { a: i64, b: i64 },
    /// The closure of one end was enumerated completely within the limits.
    Closure { side: usize, states: usize },
}

impl fmt::Display for DistinctReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistinctReason::TbMismatch { a, b } => write!(f, "tb mismatch ({a} vs {b})"),
            DistinctReason::RotMismatch { a, b } => write!(f, "rot mismatch ({a} vs {b})"),
            DistinctReason::Closure { side, states } => {
                write!(f, "closure of side {side} has {states} states and misses the other")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Equivalent(MoveTrace),
    Distinct(DistinctReason),
    /// The budget ran out; the string says which limit.
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotopyVerdict {
    pub status: VerdictStatus,
    pub stats: SearchStats,
}

impl IsotopyVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self.status, VerdictStatus::Equivalent(_))
    }

    pub fn trace(&self) -> Option<&MoveTrace> {
        match &self.status {
            VerdictStatus::Equivalent(t) => Some(t),
            _ => None,
        }
    }

    pub fn status_name(&self) -> &'static str {
        match self.status {
            VerdictStatus::Equivalent(_) => "equivalent",
            VerdictStatus::Distinct(_) => "distinct",
            VerdictStatus::Unknown(_) => "unknown",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "status": self.status_name(),
            "stats": self.stats,
        });
        match &self.status {
            VerdictStatus::Equivalent(t) => {
                v["trace"] = t.to_json();
            }
            VerdictStatus::Distinct(r) => {
                v["reason"] = serde_json::to_value(r).expect("reason serializes");
                v["detail"] = json!(r.to_string());
            }
            VerdictStatus::Unknown(why) => {
                v["exhausted"] = json!(why);
            }
        }
        v
    }
}

type State = (Vec<Event>, bool);

/// Visited states of one side, with the move that first reached each.
/// Roots have no parent.
struct Side {
    states: Vec<State>,
    parent: Vec<(u32, Option<MoveKind>)>,
    index: FxHashMap<State, u32>,
    frontier: Vec<u32>,
    depth: usize,
    /// Whether some neighbour was ever pruned, so the closure is incomplete.
    cut: bool,
}

impl Side {
    fn new(roots: &[State]) -> Side {
        let mut side = Side {
            states: Vec::new(),
            parent: Vec::new(),
            index: FxHashMap::default(),
            frontier: Vec::new(),
            depth: 0,
            cut: false,
        };
        for r in roots {
            side.insert(r.clone(), (u32::MAX, None));
        }
        side
    }

    fn insert(&mut self, s: State, parent: (u32, Option<MoveKind>)) -> Option<u32> {
        if self.index.contains_key(&s) {
            return None;
        }
        let id = self.states.len() as u32;
        self.index.insert(s.clone(), id);
        self.states.push(s);
        self.parent.push(parent);
        self.frontier.push(id);
        Some(id)
    }

    /// States from a root to `i`, with the moves between them.
    fn path(&self, mut i: u32) -> Vec<(Option<MoveKind>, u32)> {
        let mut out = Vec::new();
        while i != u32::MAX {
            let (p, k) = self.parent[i as usize];
            out.push((k, i));
            i = p;
        }
        out.reverse();
        out
    }
}

fn to_front(s: &State) -> OrientedFront {
    OrientedFront::new(FrontWord::from_trusted(s.0.clone()), s.1)
}

fn state_of(f: &OrientedFront) -> State {
    canonical_state(f.word().events(), f.is_reversed())
}

/// Where two searches met: a path from a root of side 0 to one of side 1.
struct Meeting {
    root: [u32; 2],
    steps: Vec<MoveStep>,
}

enum Outcome {
    Met(Meeting),
    Distinct(DistinctReason),
    Unknown(String),
}

/// Bidirectional breadth-first search between two sets of roots.
fn search(roots: [&[State]; 2], budget: &SearchBudget, stats: &mut SearchStats) -> Outcome {
    let mut sides = [Side::new(roots[0]), Side::new(roots[1])];
    stats.states += sides[0].states.len() + sides[1].states.len();
    for (i, s) in sides[0].states.iter().enumerate() {
        if let Some(&j) = sides[1].index.get(s) {
            return Outcome::Met(Meeting {
                root: [i as u32, j],
                steps: Vec::new(),
            });
        }
    }
    loop {
        // expand the smaller frontier
        let s = if sides[1].frontier.len() < sides[0].frontier.len() { 1 } else { 0 };
        let front = std::mem::take(&mut sides[s].frontier);
        let expanded: Vec<_> = front
            .par_iter()
            .map(|&i| {
                let (w, r) = &sides[s].states[i as usize];
                (i, state_moves(w, *r, false))
            })
            .collect();
        stats.expanded += expanded.len();
        sides[s].depth += 1;
        stats.depth[s] = stats.depth[s].max(sides[s].depth);
        let mut meet = None;
        'merge: for (i, nbrs) in expanded {
            for (k, w, r) in nbrs {
                if !budget.admits(&w) {
                    stats.pruned += 1;
                    sides[s].cut = true;
                    continue;
                }
                let st = (w, r);
                let other = sides[1 - s].index.get(&st).copied();
                let Some(id) = sides[s].insert(st, (i, Some(k))) else {
                    continue;
                };
                stats.states += 1;
                if let Some(o) = other {
                    meet = Some(if s == 0 { (id, o) } else { (o, id) });
                    break 'merge;
                }
                if stats.states >= budget.max_states {
                    break 'merge;
                }
            }
        }
        if let Some((i0, i1)) = meet {
            return Outcome::Met(join(&sides, i0, i1));
        }
        if stats.states >= budget.max_states {
            return Outcome::Unknown(format!("max_states {} reached", budget.max_states));
        }
        if sides[s].frontier.is_empty() {
            return if sides[s].cut {
                Outcome::Unknown(format!("closure of side {s} left the width/length limits"))
            } else {
                Outcome::Distinct(DistinctReason::Closure {
                    side: s,
                    states: sides[s].states.len(),
                })
            };
        }
    }
}

/// Joins the two search trees at a meeting point.
fn join(sides: &[Side; 2], i0: u32, i1: u32) -> Meeting {
    let mut steps = Vec::new();
    let fwd = sides[0].path(i0);
    for &(k, i) in &fwd[1..] {
        let s = &sides[0].states[i as usize];
        steps.push(MoveStep {
            kind: k.expect("non-root states have a move"),
            word: FrontWord::from_trusted(s.0.clone()),
            reversed: s.1,
        });
    }
    // the goal side recorded moves towards the meet; walk them backwards
    let back = sides[1].path(i1);
    for w in back.windows(2).rev() {
        let (child, parent) = (&sides[1].states[w[1].1 as usize], &sides[1].states[w[0].1 as usize]);
        let kind = state_moves(&child.0, child.1, false)
            .into_iter()
            .find(|(_, x, r)| *x == parent.0 && *r == parent.1)
            .map(|(k, _, _)| k)
            .expect("moves are symmetric");
        steps.push(MoveStep {
            kind,
            word: FrontWord::from_trusted(parent.0.clone()),
            reversed: parent.1,
        });
    }
    Meeting {
        root: [fwd[0].1, back[0].1],
        steps,
    }
}

/// Decides Legendrian isotopy of two oriented fronts within `budget`.
///
/// Deterministic: the frontier is expanded in parallel but merged in order.
pub fn lr_equivalent(
    f: &OrientedFront,
    g: &OrientedFront,
    budget: &SearchBudget,
) -> Result<IsotopyVerdict, BudgetError> {
    budget.validate()?;
    let (a, b) = (classical_invariants(f), classical_invariants(g));
    let mut stats = SearchStats::default();
    let status = if a.tb != b.tb {
        VerdictStatus::Distinct(DistinctReason::TbMismatch { a: a.tb, b: b.tb })
    } else if a.rot != b.rot {
        VerdictStatus::Distinct(DistinctReason::RotMismatch { a: a.rot, b: b.rot })
    } else {
        match search([&[state_of(f)], &[state_of(g)]], budget, &mut stats) {
            Outcome::Met(m) => {
                let mut trace = MoveTrace::new(f);
                trace.steps = m.steps;
                VerdictStatus::Equivalent(trace)
            }
            Outcome::Distinct(r) => VerdictStatus::Distinct(r),
            Outcome::Unknown(why) => VerdictStatus::Unknown(why),
        }
    };
    Ok(IsotopyVerdict { status, stats })
}

/// Applies `p` positive then `n` negative stabilizations, always on segment 0.
pub fn stabilize_times(f: &OrientedFront, p: u64, n: u64) -> OrientedFront {
    let mut s = state_of(f);
    for k in 0..p + n {
        s = stabilize_state(&s.0, s.1, sign_at(k, p), 0).expect("segment 0 exists");
    }
    to_front(&s)
}

fn sign_at(k: u64, p: u64) -> Sign {
    if k < p {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Most variants kept per stabilization level.
const VARIANT_CAP: usize = 256;

/// The ways of stabilizing a front `p` times positively and then `n` times
/// negatively, over all sites, as a tree rooted at the front.
struct Variants {
    states: Vec<State>,
    parent: Vec<(u32, Option<MoveKind>)>,
    leaves: std::ops::Range<usize>,
}

impl Variants {
    fn new(root: State, p: u64, n: u64) -> Variants {
        let mut v = Variants {
            states: vec![root],
            parent: vec![(u32::MAX, None)],
            leaves: 0..1,
        };
        for k in 0..p + n {
            let start = v.states.len();
            let mut seen = FxHashSet::default();
            'level: for i in v.leaves.clone() {
                let (w, r) = &v.states[i];
                for (kind, st) in all_stabilizations(w, *r, sign_at(k, p)) {
                    if seen.insert(st.clone()) {
                        v.states.push(st);
                        v.parent.push((i as u32, Some(kind)));
                        if v.states.len() - start >= VARIANT_CAP {
                            break 'level;
                        }
                    }
                }
            }
            v.leaves = start..v.states.len();
        }
        v
    }

    fn leaves(&self) -> &[State] {
        &self.states[self.leaves.clone()]
    }

    /// Moves from the root to leaf `i`, each with its result.
    fn chain(&self, i: usize) -> Vec<(MoveKind, &State)> {
        let mut out = Vec::new();
        let mut j = self.leaves.start + i;
        while let (p, Some(k)) = self.parent[j] {
            out.push((k, &self.states[j]));
            j = p as usize;
        }
        out.reverse();
        out
    }
}

fn step(kind: MoveKind, s: &State) -> MoveStep {
    MoveStep {
        kind,
        word: FrontWord::from_trusted(s.0.clone()),
        reversed: s.1,
    }
}

/// The full trace `f -> S(f) -> ... -> S(g) -> g`. Destabilizations back to
/// `g` are found by the moves module; if one is not, the trace stops at the
/// stabilized `g`.
fn cost_trace(f: &OrientedFront, fv: &Variants, gv: &Variants, m: Meeting) -> MoveTrace {
    let mut trace = MoveTrace::new(f);
    for (k, s) in fv.chain(m.root[0] as usize) {
        trace.steps.push(step(k, s));
    }
    trace.steps.extend(m.steps);
    let back = gv.chain(m.root[1] as usize);
    for i in (0..back.len()).rev() {
        let cur = back[i].1;
        let prev = if i == 0 { &gv.states[0] } else { back[i - 1].1 };
        let sign = if back[i].0.tag == MoveTag::StabilizePlus {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let found = destab_states(&cur.0, cur.1)
            .into_iter()
            .find(|(sg, _, w, r)| *sg == sign && w == &prev.0 && *r == prev.1);
        match found {
            Some((_, k, _, _)) => trace.steps.push(step(k, prev)),
            None => break,
        }
    }
    trace
}

/// Sign splits `(p, n, q, m)` with `p + n + q + m = c` under which
/// `S+^p S-^n f` and `S+^q S-^m g` have equal invariants.
pub fn feasible_splits(dtb: i64, drot: i64, c: u64) -> Vec<StabSplit> {
    // tb: (p + n) - (q + m) = dtb, rot: (p - n) - (q - m) = -drot
    // where dtb = tb(f) - tb(g), drot = rot(f) - rot(g)
    let c = c as i64;
    let mut out = Vec::new();
    if (c + dtb) % 2 != 0 {
        return out;
    }
    let left = (c + dtb) / 2;
    let right = c - left;
    if left < 0 || right < 0 {
        return out;
    }
    // p - n - q + m = -drot with p + n = left, q + m = right
    for p in 0..=left {
        let n = left - p;
        // m - q = -drot - p + n, m + q = right
        let diff = -drot - p + n;
        if (right + diff) % 2 != 0 {
            continue;
        }
        let m = (right + diff) / 2;
        let q = right - m;
        if m >= 0 && q >= 0 {
            out.push(StabSplit {
                p: p as u64,
                n: n as u64,
                q: q as u64,
                m: m as u64,
            });
        }
    }
    out
}

/// Brute-force cost: the least `c` for which some feasible stabilization of
/// both fronts with `c` zigzags in total makes them isotopic.
///
/// Levels whose searches ran out of budget are listed in `unsettled`. A
/// success above an unsettled level gives only an interval.
pub fn cost_search(
    f: &OrientedFront,
    g: &OrientedFront,
    budget: &SearchBudget,
) -> Result<CostResult, BudgetError> {
    budget.validate()?;
    let (a, b) = (classical_invariants(f), classical_invariants(g));
    let lb = cost_lower_bound(&a, &b);
    let mut stats = SearchStats::default();
    let mut unsettled = Vec::new();
    for c in lb..=budget.max_cost {
        if !cost_parity_ok(&a, &b, c) {
            continue;
        }
        let mut exhausted = false;
        for split in feasible_splits(a.tb - b.tb, a.rot - b.rot, c) {
            let fv = Variants::new(state_of(f), split.p, split.n);
            let gv = Variants::new(state_of(g), split.q, split.m);
            match search([fv.leaves(), gv.leaves()], budget, &mut stats) {
                Outcome::Met(m) => {
                    let kind = match unsettled.first() {
                        Some(&lo) => CostKind::Interval { lo, hi: c },
                        None => CostKind::Exact(c),
                    };
                    return Ok(CostResult {
                        kind,
                        provenance: Provenance::Search,
                        split: Some(split),
                        trace: Some(cost_trace(f, &fv, &gv, m)),
                        stats: Some(stats),
                        unsettled,
                    });
                }
                Outcome::Unknown(_) => exhausted = true,
                Outcome::Distinct(_) => {}
            }
        }
        if exhausted {
            unsettled.push(c);
        }
    }
    Ok(CostResult {
        kind: CostKind::LowerBoundOnly(lb),
        provenance: Provenance::Search,
        split: None,
        trace: None,
        stats: Some(stats),
        unsettled,
    })
}
