//! Cost formulas, bounds and parity at the level of classical invariants.

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::front::ClassicalInvariants;
use crate::isotopy::SearchStats;
use crate::moves::MoveTrace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CostKind {
    Exact(u64),
    Interval { lo: u64, hi: u64 },
    /// A search that found nothing within budget; only the bound is known.
    LowerBoundOnly(u64),
}

impl CostKind {
    pub fn exact(self) -> Option<u64> {
        match self {
            CostKind::Exact(v) => Some(v),
            CostKind::Interval { lo, hi } if lo == hi => Some(lo),
            _ => None,
        }
    }

    /// (lo, hi), with `None` for an unknown upper end.
    pub fn bounds(self) -> (u64, Option<u64>) {
        match self {
            CostKind::Exact(v) => (v, Some(v)),
            CostKind::Interval { lo, hi } => (lo, Some(hi)),
            CostKind::LowerBoundOnly(v) => (v, None),
        }
    }
}

/// Which rule produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    LowerBound,
    SimpleFormula,
    TwistAdjacent,
    SumUpper,
    StabRelated,
    MaxTbSameOrder,
    MaxTbOppositeOrder,
    /// Chained adjacent twist-knot costs with the invariant bound.
    TwistChain,
    Search,
}

/// `S+^p S-^n` applied to the first front and `S+^q S-^m` to the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabSplit {
    pub p: u64,
    pub n: u64,
    pub q: u64,
    pub m: u64,
}

impl StabSplit {
    pub fn total(&self) -> u64 {
        self.p + self.n + self.q + self.m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostResult {
    pub kind: CostKind,
    pub provenance: Provenance,
    /// For search results, the stabilizations that worked.
    pub split: Option<StabSplit>,
    pub trace: Option<MoveTrace>,
    pub stats: Option<SearchStats>,
    /// Levels a search could not settle within budget.
    pub unsettled: Vec<u64>,
}

impl CostResult {
    pub fn formula(kind: CostKind, provenance: Provenance) -> CostResult {
        CostResult {
            kind,
            provenance,
            split: None,
            trace: None,
            stats: None,
            unsettled: Vec::new(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (kind, value) = match self.kind {
            CostKind::Exact(v) => ("Exact", json!(v)),
            CostKind::Interval { lo, hi } => ("Interval", json!([lo, hi])),
            CostKind::LowerBoundOnly(v) => ("LowerBoundOnly", json!(v)),
        };
        let mut v = json!({
            "kind": kind,
            "value": value,
            "provenance": self.provenance,
        });
        if let Some(s) = &self.split {
            v["split"] = json!(s);
        }
        if let Some(t) = &self.trace {
            v["trace"] = t.to_json();
        }
        if let Some(s) = &self.stats {
            v["stats"] = json!(s);
        }
        if !self.unsettled.is_empty() {
            v["unsettled"] = json!(self.unsettled);
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("parameters out of range: {0}")]
    Range(String),
}

pub fn cost_lower_bound(a: &ClassicalInvariants, b: &ClassicalInvariants) -> u64 {
    a.tb.abs_diff(b.tb).max(a.rot.abs_diff(b.rot))
}

/// Whether `c` has the parity every cost between `a` and `b` must have.
pub fn cost_parity_ok(a: &ClassicalInvariants, b: &ClassicalInvariants, c: u64) -> bool {
    c % 2 == a.tb.abs_diff(b.tb) % 2
}

/// Cost between two classes of one Legendrian simple knot type.
pub fn cost_simple(a: &ClassicalInvariants, b: &ClassicalInvariants) -> u64 {
    cost_lower_bound(a, b)
}

/// Cost between the twist knots `E(k,l)` and `E(k+1,l-1)`.
pub fn twist_adjacent_cost(k: u64, l: u64) -> Result<u64, CostError> {
    if k < 1 || l < 2 || k + l < 4 {
        return Err(CostError::Range(format!(
            "need k >= 1, l >= 2 and k + l >= 4, got k = {k}, l = {l}"
        )));
    }
    Ok(if k + 1 == l { 0 } else { 2 })
}

/// Bounds on the cost between `E(k,l)` and `E(k',l')` with `k + l = k' + l'`,
/// from chaining adjacent costs. Only adjacent pairs are known exactly.
pub fn twist_cost(k: u64, l: u64, k2: u64, l2: u64) -> Result<CostResult, CostError> {
    if k + l != k2 + l2 || k < 1 || l < 1 || k2 < 1 || l2 < 1 || k + l < 4 {
        return Err(CostError::Range(format!(
            "need equal sums of at least 4 and positive parameters, got ({k},{l}) and ({k2},{l2})"
        )));
    }
    let (lo_k, hi_k) = (k.min(k2), k.max(k2));
    if lo_k == hi_k {
        return Ok(CostResult::formula(CostKind::Exact(0), Provenance::TwistChain));
    }
    let sum = k + l;
    if hi_k - lo_k == 1 {
        let c = twist_adjacent_cost(lo_k, sum - lo_k)?;
        return Ok(CostResult::formula(CostKind::Exact(c), Provenance::TwistAdjacent));
    }
    let mut hi = 0;
    for j in lo_k..hi_k {
        hi += twist_adjacent_cost(j, sum - j)?;
    }
    // same invariants on the whole family, so the bound is parity only
    Ok(CostResult::formula(
        CostKind::Interval { lo: 0, hi },
        Provenance::TwistChain,
    ))
}

/// Upper bound for the cost between two connected sums `K1#K2` and `L1#L2`.
/// The cross terms are given when the factors have the same type.
pub fn cost_sum_upper(c11: u64, c22: u64, c12: Option<u64>, c21: Option<u64>) -> u64 {
    match (c12, c21) {
        (Some(x), Some(y)) => (c11 + c22).min(x + y),
        _ => c11 + c22,
    }
}

/// Cost between `S+^p S-^n (L1) # K2` and `L1 # S+^q S-^m (K2)` for factors
/// of different types.
pub fn cost_stab_related(p: i64, n: i64, q: i64, m: i64) -> Result<u64, CostError> {
    if p < 0 || n < 0 || q < 0 || m < 0 {
        return Err(CostError::Range(format!(
            "stabilization counts must be nonnegative, got ({p},{n},{q},{m})"
        )));
    }
    Ok(p.abs_diff(q) + n.abs_diff(m))
}

/// Cost between sums of max-tb representatives whose factor costs are
/// `2 r1` and `2 r2`. With the rotation numbers in the same order the costs
/// add; otherwise only an interval is known.
pub fn cost_maxtb_sum(r1: i64, r2: i64, same_rot_order: bool) -> Result<CostResult, CostError> {
    if r1 < 0 || r2 < 0 {
        return Err(CostError::Range(format!(
            "r1 and r2 must be nonnegative, got {r1}, {r2}"
        )));
    }
    let (r1, r2) = (r1 as u64, r2 as u64);
    Ok(if same_rot_order {
        CostResult::formula(CostKind::Exact(2 * r1 + 2 * r2), Provenance::MaxTbSameOrder)
    } else {
        CostResult::formula(
            CostKind::Interval {
                lo: 2 * r1.abs_diff(r2),
                hi: 2 * r1.max(r2),
            },
            Provenance::MaxTbOppositeOrder,
        )
    })
}
