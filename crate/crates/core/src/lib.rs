//! Constructive approximation for the traveling tournament problem with
//! at most two consecutive home or away games, for `n = 4m + 2` teams.
pub mod generate;
pub mod instance;
pub mod metric_graph;
pub mod numbering;
pub mod oracle;
pub mod phase1;
pub mod phase2;
pub mod schedule;
pub mod solver;

pub use instance::{Instance, InstanceError, InstanceStats, Length};
pub use metric_graph::{HamiltonCycle, Matching, SpanningTree};
pub use numbering::Numbering;
pub use schedule::{Game, Schedule, Venue, Violation};
pub use solver::{solve, BoundsReport, Exact, SolveError, SolveOptions, Solution};
