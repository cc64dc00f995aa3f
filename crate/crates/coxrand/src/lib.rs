//! Random edge-labelled graphs and the Coxeter groups they define.
//!
//! A graph on n vertices whose pairs carry labels in {2, 3, ..} or
//! infinity presents a Coxeter group: vertices are generators, a pair
//! labelled m satisfies (st)^m = 1, and infinity means no relation.
//! This crate samples such graphs with one independent curve p_m(n)
//! per finite label, and decides or measures the group properties that
//! only depend on the labelled graph:
//!
//! - classification of components as finite, affine, or indefinite;
//! - the nerve (the complex of spherical subsets), its dimension and
//!   homology;
//! - hyperbolicity of the natural CAT(0) action, by excluding affine
//!   subsystems and commuting pairs of infinite subsystems;
//! - FC type, where every clique of finite labels is spherical;
//! - exact first and second moments of pattern counts under a
//!   schedule, against which Monte Carlo runs can be checked.

mod bits;
pub mod counting;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod homology;
pub mod label;
pub mod nerve;
pub mod pattern;
pub mod properties;
pub mod recognition;
mod rng;
pub mod schedule;

pub use error::{Budgets, CoxError, Result};
pub use graph::{LabelledGraph, SimpleGraph, MAX_DENSE_VERTICES};
pub use label::EdgeLabel;
pub use pattern::{PatternGraph, PatternLabel};
pub use rng::trial_seed;
pub use schedule::{EvaluatedSchedule, ProbabilitySchedule, ScheduleEntry};
