//! Legendrian front calculus and the stabilization cost metric.

pub mod cli;
pub mod cost;
pub mod front;
pub mod graph;
pub mod isotopy;
pub mod knot_types;
pub mod moves;
mod sweep;

pub use front::{
    classical_invariants, connect_sum, orient_front, parse_front, reverse_orientation,
    serialize_front, validate_front, ClassicalInvariants, Direction, Event, EventKind,
    FrontError, FrontWord, OrientedFront, Violation,
};
pub use isotopy::{cost_search, lr_equivalent, IsotopyVerdict, SearchBudget, VerdictStatus};
pub use moves::{MoveKind, MoveTag, MoveTrace, Sign};
