//! Knot-type descriptors, their connected sums, and concrete fronts.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::front::{
    classical_invariants, orient_front, parse_front, reverse_orientation, Event, EventKind,
    FrontWord, OrientedFront,
};
use crate::isotopy::stabilize_times;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KnotError {
    #[error("unknown knot type {0:?}")]
    UnknownName(String),
    #[error("torus({p},{q}) needs coprime p, q >= 2")]
    BadTorus { p: i64, q: i64 },
    #[error("{0} is not known to be Legendrian simple")]
    NotSimple(String),
    #[error("class ({tb}, {rot}) is not reachable from any peak of {name}")]
    Unreachable { name: String, tb: i64, rot: i64 },
    #[error("no built-in front for {0}")]
    NoFront(String),
    #[error("invalid descriptor: {0}")]
    Invalid(String),
    #[error("parameters out of range: {0}")]
    Range(String),
}

/// Whether a knot type is Legendrian simple; sums can leave it open.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simplicity {
    Simple,
    NonSimple,
    Unknown,
}

impl Serialize for Simplicity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Simplicity::Simple => s.serialize_bool(true),
            Simplicity::NonSimple => s.serialize_bool(false),
            Simplicity::Unknown => s.serialize_str("unknown"),
        }
    }
}

impl<'de> Deserialize<'de> for Simplicity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Bool(true) => Ok(Simplicity::Simple),
            serde_json::Value::Bool(false) => Ok(Simplicity::NonSimple),
            serde_json::Value::String(s) if s == "unknown" => Ok(Simplicity::Unknown),
            other => Err(de::Error::custom(format!(
                "simple must be true, false or \"unknown\", got {other}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotTypeDescriptor {
    pub name: String,
    pub simple: Simplicity,
    /// (tb, rot) of the classes that do not destabilize.
    pub peaks: BTreeSet<(i64, i64)>,
    pub unique_destabilization: bool,
    pub invertible: bool,
    /// Free-form remark, set by [`sum_descriptor`] when no criterion decides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl KnotTypeDescriptor {
    pub fn validate(&self) -> Result<(), KnotError> {
        if self.peaks.is_empty() {
            return Err(KnotError::Invalid(format!("{}: no peaks", self.name)));
        }
        if let Some(&(tb, rot)) = self.peaks.iter().find(|(tb, rot)| (tb + rot) % 2 == 0) {
            return Err(KnotError::Invalid(format!(
                "{}: peak ({tb}, {rot}) has tb + rot even",
                self.name
            )));
        }
        if self.unique_destabilization && self.peaks.len() != 1 {
            return Err(KnotError::Invalid(format!(
                "{}: unique destabilization needs exactly one peak",
                self.name
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<KnotTypeDescriptor, KnotError> {
        let d: KnotTypeDescriptor =
            serde_json::from_str(text).map_err(|e| KnotError::Invalid(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }

    pub fn is_simple(&self) -> bool {
        self.simple == Simplicity::Simple
    }

    pub fn max_tb(&self) -> i64 {
        self.peaks.iter().map(|p| p.0).max().expect("peaks are nonempty")
    }

    /// Peaks of maximal tb.
    fn top(&self) -> Vec<(i64, i64)> {
        let t = self.max_tb();
        self.peaks.iter().copied().filter(|p| p.0 == t).collect()
    }

    /// Whether some peak stabilizes to (tb, rot).
    pub fn reaches(&self, tb: i64, rot: i64) -> bool {
        self.peak_above(tb, rot).is_some()
    }

    fn peak_above(&self, tb: i64, rot: i64) -> Option<(i64, i64)> {
        self.peaks
            .iter()
            .copied()
            .find(|&(t, r)| tb <= t && (rot - r).abs() <= t - tb && (t - tb - (rot - r)) % 2 == 0)
    }
}

impl fmt::Display for KnotTypeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn single_peak(name: String, peak: (i64, i64)) -> KnotTypeDescriptor {
    KnotTypeDescriptor {
        name,
        simple: Simplicity::Simple,
        peaks: BTreeSet::from([peak]),
        unique_destabilization: true,
        invertible: true,
        note: None,
    }
}

/// Peak tb of the positive torus knot `T(p,q)`. Not derived here; taken
/// from the literature and checked against the trefoil.
pub fn torus_peak_tb(p: i64, q: i64) -> i64 {
    p * q - p - q
}

/// Descriptor of `T(p,q)` with an explicit peak tb.
pub fn torus_descriptor(p: i64, q: i64, peak_tb: i64) -> Result<KnotTypeDescriptor, KnotError> {
    if p < 2 || q < 2 || gcd(p, q) != 1 {
        return Err(KnotError::BadTorus { p, q });
    }
    let (p, q) = (p.min(q), p.max(q));
    let d = single_peak(format!("torus({p},{q})"), (peak_tb, 0));
    d.validate()?;
    Ok(d)
}

/// Parses `torus(p,q)`.
fn torus_params(name: &str) -> Option<(i64, i64)> {
    let inner = name.strip_prefix("torus(")?.strip_suffix(')')?;
    let (p, q) = inner.split_once(',')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

/// Built-in descriptors: `unknot`, `torus(p,q)` (`right_trefoil` is
/// `torus(2,3)`) and `left_trefoil`.
pub fn builtin_descriptor(name: &str) -> Result<KnotTypeDescriptor, KnotError> {
    let name = name.trim();
    match name {
        "unknot" => Ok(single_peak("unknot".into(), (-1, 0))),
        "right_trefoil" => builtin_descriptor("torus(2,3)"),
        "left_trefoil" => Ok(KnotTypeDescriptor {
            name: "left_trefoil".into(),
            simple: Simplicity::Simple,
            peaks: BTreeSet::from([(-6, -1), (-6, 1)]),
            unique_destabilization: false,
            invertible: true,
            note: None,
        }),
        _ => match torus_params(name) {
            Some((p, q)) => torus_descriptor(p, q, torus_peak_tb(p, q)),
            None => Err(KnotError::UnknownName(name.into())),
        },
    }
}

/// Descriptor of the connected sum.
///
/// Two uniquely destabilizing types give a simple sum with one peak. Two
/// criteria flag a sum as non-simple: maximal-tb peak pairs of different
/// types with equal rotation sums, and for a self-sum four maximal-tb peaks
/// with consecutive rotation numbers. Otherwise simpleness is left unknown.
pub fn sum_descriptor(a: &KnotTypeDescriptor, b: &KnotTypeDescriptor) -> KnotTypeDescriptor {
    let peaks: BTreeSet<(i64, i64)> = a
        .peaks
        .iter()
        .flat_map(|x| b.peaks.iter().map(move |y| (x.0 + y.0 + 1, x.1 + y.1)))
        .collect();
    let name = format!("{}#{}", a.name, b.name);
    let invertible = a.invertible && b.invertible;
    if a.unique_destabilization && b.unique_destabilization {
        return KnotTypeDescriptor {
            name,
            simple: Simplicity::Simple,
            peaks,
            unique_destabilization: true,
            invertible,
            note: None,
        };
    }
    let (ta, tb) = (a.top(), b.top());
    let pairs: Vec<((i64, i64), (i64, i64))> =
        ta.iter().flat_map(|&x| tb.iter().map(move |&y| (x, y))).collect();
    let same = a.name == b.name;
    let mut simple = Simplicity::Unknown;
    let mut note = None;
    // two different pairs with the same rotation sum
    let collision = pairs.iter().enumerate().find_map(|(i, &u)| {
        pairs[i + 1..]
            .iter()
            .find(|&&v| u.0 .1 + u.1 .1 == v.0 .1 + v.1 .1)
            .map(|&v| (u, v))
    });
    if let Some((u, v)) = collision {
        let permuted = same && u.0 == v.1 && u.1 == v.0;
        if same && permuted {
            note = Some(format!(
                "candidate pair {:?}#{:?} and {:?}#{:?} has equal rotation sums but differs only by the order of the factors",
                u.0, u.1, v.0, v.1
            ));
        } else if !same {
            simple = Simplicity::NonSimple;
            note = Some(format!(
                "maximal-tb sums {:?}#{:?} and {:?}#{:?} share tb and rot",
                u.0, u.1, v.0, v.1
            ));
        }
    }
    if same && simple == Simplicity::Unknown {
        let rots: BTreeSet<i64> = ta.iter().map(|p| p.1).collect();
        if rots.iter().any(|r| (1..4).all(|i| rots.contains(&(r + i)))) {
            simple = Simplicity::NonSimple;
            note = Some("four maximal-tb peaks with consecutive rotation numbers".into());
        }
    }
    KnotTypeDescriptor {
        name,
        simple,
        peaks,
        unique_destabilization: false,
        invertible,
        note,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LegendrianClass {
    pub tb: i64,
    pub rot: i64,
}

impl fmt::Display for LegendrianClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.tb, self.rot)
    }
}

/// Every class of a simple type with tb at least `tb_floor`, highest tb
/// first.
pub fn classes_down_to(d: &KnotTypeDescriptor, tb_floor: i64) -> Result<Vec<LegendrianClass>, KnotError> {
    if !d.is_simple() {
        return Err(KnotError::NotSimple(d.name.clone()));
    }
    let mut set = BTreeSet::new();
    for &(t, r) in &d.peaks {
        for tb in tb_floor..=t {
            let k = t - tb;
            for rot in (r - k..=r + k).step_by(2) {
                set.insert((-tb, rot));
            }
        }
    }
    Ok(set.into_iter().map(|(t, rot)| LegendrianClass { tb: -t, rot }).collect())
}

fn word(ev: Vec<Event>) -> OrientedFront {
    orient_front(&FrontWord::new(ev).expect("built-in fronts are valid"))
}

pub fn unknot_front() -> OrientedFront {
    orient_front(&parse_front("L1 R1").expect("valid"))
}

pub fn right_trefoil_front() -> OrientedFront {
    orient_front(&parse_front("L1 L3 X2 X2 X2 R1 R1").expect("valid"))
}

/// A maximal-tb left trefoil with rot −1; its reverse has rot 1.
pub fn left_trefoil_front() -> OrientedFront {
    orient_front(&parse_front("L1 L1 X2 X2 X1 X1 R2 R1").expect("valid"))
}

/// The closure of the positive braid `(s1 ... s(p-1))^q` under `p` nested
/// arcs; a maximal-tb front of `T(p,q)`.
pub fn torus_front(p: u32, q: u32) -> Result<OrientedFront, KnotError> {
    if p < 2 || q < 2 || gcd(p as i64, q as i64) != 1 {
        return Err(KnotError::BadTorus {
            p: p as i64,
            q: q as i64,
        });
    }
    let mut ev: Vec<Event> = (1..=p).map(Event::left).collect();
    for _ in 0..q {
        ev.extend((p + 1..2 * p).map(|i| Event::new(EventKind::Crossing, i)));
    }
    ev.extend((1..=p).rev().map(|i| Event::new(EventKind::RightCusp, i)));
    Ok(word(ev))
}

/// `L(p+1)^(m-1) X(p) X(p+2) ... X(p+2m-2) R(p+1)^(m-1)`: a block of `m`
/// crossings between two strands at positions `p` and `p+1`.
fn twist_block(m: u32, p: u32, ev: &mut Vec<Event>) {
    for _ in 1..m {
        ev.push(Event::left(p + 1));
    }
    for j in 0..m {
        ev.push(Event::new(EventKind::Crossing, p + 2 * j));
    }
    for _ in 1..m {
        ev.push(Event::new(EventKind::RightCusp, p + 1));
    }
}

/// The twist knot front `E(k,l)`: a clasp with blocks of `k` and `l`
/// crossings on either side.
pub fn e_front(k: u32, l: u32) -> Result<OrientedFront, KnotError> {
    if k < 1 || l < 1 {
        return Err(KnotError::Range(format!("e_front needs k, l >= 1, got {k}, {l}")));
    }
    let mut ev = vec![Event::left(1), Event::left(3)];
    twist_block(k, 2, &mut ev);
    ev.extend([
        Event::left(3),
        Event::new(EventKind::Crossing, 2),
        Event::new(EventKind::Crossing, 2),
        Event::new(EventKind::RightCusp, 1),
    ]);
    twist_block(l, 2, &mut ev);
    ev.extend([
        Event::new(EventKind::RightCusp, 1),
        Event::new(EventKind::RightCusp, 1),
    ]);
    Ok(word(ev))
}

/// Parses `e(k,l)`.
fn e_params(name: &str) -> Option<(u32, u32)> {
    let inner = name.strip_prefix("e(")?.strip_suffix(')')?;
    let (k, l) = inner.split_once(',')?;
    Some((k.trim().parse().ok()?, l.trim().parse().ok()?))
}

/// Peak fronts of a named type, one per peak.
pub fn peak_fronts(name: &str) -> Result<Vec<OrientedFront>, KnotError> {
    let name = name.trim();
    let f = match name {
        "unknot" => unknot_front(),
        "right_trefoil" => right_trefoil_front(),
        "torus(2,3)" | "torus(3,2)" => right_trefoil_front(),
        "left_trefoil" => left_trefoil_front(),
        _ => {
            if let Some((p, q)) = torus_params(name) {
                if p < 2 || q < 2 {
                    return Err(KnotError::BadTorus { p, q });
                }
                torus_front(p.min(q) as u32, p.max(q) as u32)?
            } else if let Some((k, l)) = e_params(name) {
                e_front(k, l)?
            } else {
                return Err(KnotError::NoFront(name.into()));
            }
        }
    };
    let r = reverse_orientation(&f);
    if classical_invariants(&f).rot == 0 {
        Ok(vec![f])
    } else {
        Ok(vec![f, r])
    }
}

/// A front of class (tb, rot): a peak front stabilized down to it.
pub fn standard_front(name: &str, tb: i64, rot: i64) -> Result<OrientedFront, KnotError> {
    let unreachable = || KnotError::Unreachable {
        name: name.into(),
        tb,
        rot,
    };
    for f in peak_fronts(name)? {
        let inv = classical_invariants(&f);
        let (t, r) = (inv.tb, inv.rot);
        let k = t - tb;
        if k < 0 || (rot - r).abs() > k || (k + rot - r) % 2 != 0 {
            continue;
        }
        let p = (k + rot - r) / 2;
        let n = (k - rot + r) / 2;
        return Ok(stabilize_times(&f, p as u64, n as u64));
    }
    Err(unreachable())
}

/// The built-in fronts by name.
pub fn builtin_fronts() -> Vec<(&'static str, OrientedFront)> {
    vec![
        ("unknot", unknot_front()),
        ("right_trefoil", right_trefoil_front()),
        ("left_trefoil", left_trefoil_front()),
    ]
}
