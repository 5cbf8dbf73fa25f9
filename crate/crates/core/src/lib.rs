//! Connected allocations of indivisible items on a path.
//!
//! Items sit on a line and every agent receives a contiguous interval. The
//! crate covers fairness and welfare predicates, the egalitarian EQ1 solver
//! for goods and chores, a Pareto-improving variant for binary valuations, a
//! solver for binary prefix/suffix valuations, exhaustive oracles for small
//! instances, and the LNES gadget compilers used for hardness checks.

pub mod allocation;
pub mod egalitarian;
pub mod error;
pub mod extremal;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod postar;
pub mod reductions;

pub use allocation::{validate_allocation, AgentOrder, Allocation, Interval, StructureReport};
pub use egalitarian::{eq1_complete, eq1_complete_chores, optimal_theta, ThetaCertificate};
pub use error::{Error, NonBinary, Result};
pub use extremal::solve_extremal;
pub use metrics::{check, Alpha, CheckReport, Property};
pub use model::{realizable_utilities, Agent, AgentId, Instance, IntervalTable, Kind, RealizableUtilityList, Valuation};
pub use oracle::{EnumerationBudget, Requirement, Within};
pub use postar::po_star;
