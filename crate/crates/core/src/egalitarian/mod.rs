//! Egalitarian-optimal EQ1 allocations for a fixed agent order.
//!
//! The solver works in three phases over the realizable utility list `L`:
//!
//! 1. find the best egalitarian welfare `θ` reachable under σ, by testing
//!    uniform targets with a left-to-right minimal-bundle scan;
//! 2. find the leftmost agent that cannot be lifted to the successor of `θ`
//!    in `L` while everyone after it keeps `θ` (the unsafe agent);
//! 3. fix the agents before it at their minimal bundles worth the successor,
//!    serve the agents after it right to left with minimal bundles worth `θ`,
//!    and hand the unsafe agent whatever lies in between.
//!
//! Every agent other than the unsafe one ends with a minimal bundle, so
//! dropping its boundary good on the side the scan grew from leaves it at or
//! below `θ`. That is the EQ1 witness.

mod chores;

pub use chores::{eq1_complete_chores, eq1_complete_chores_mirror};

use crate::allocation::{AgentOrder, Allocation, Interval};
use crate::error::{Error, Result};
use crate::model::{realizable_utilities, AgentId, Instance, Kind};

/// Smallest `e >= start` with `value(agent, start, e) >= target`.
pub(crate) fn grow_right(inst: &Instance, agent: AgentId, start: usize, target: i64) -> Option<usize> {
    (start..=inst.m()).find(|&e| inst.value(agent, start, e) >= target)
}

/// Largest `s <= end` with `value(agent, s, end) >= target`.
pub(crate) fn grow_left(inst: &Instance, agent: AgentId, end: usize, target: i64) -> Option<usize> {
    (0..=end).rev().find(|&s| inst.value(agent, s, end) >= target)
}

/// Left-to-right minimal bundles from `start`; returns each agent's end.
pub(crate) fn scan_right(
    inst: &Instance,
    agents: &[AgentId],
    targets: &[i64],
    start: usize,
) -> Option<Vec<usize>> {
    let mut ends = Vec::with_capacity(agents.len());
    let mut frontier = start;
    for (&a, &t) in agents.iter().zip(targets) {
        frontier = grow_right(inst, a, frontier, t)?;
        ends.push(frontier);
    }
    Some(ends)
}

/// Right-to-left minimal bundles ending at `end`, serving `agents` from the
/// last one backwards; returns each agent's start, in the order given.
pub(crate) fn scan_left(
    inst: &Instance,
    agents: &[AgentId],
    targets: &[i64],
    end: usize,
) -> Option<Vec<usize>> {
    let mut starts = vec![0; agents.len()];
    let mut frontier = end;
    for k in (0..agents.len()).rev() {
        frontier = grow_left(inst, agents[k], frontier, targets[k])?;
        starts[k] = frontier;
    }
    Some(starts)
}

fn feasible_uniform(inst: &Instance, order: &AgentOrder, target: i64) -> bool {
    scan_right(inst, order.as_slice(), &vec![target; order.len()], 0).is_some()
}

/// Left-to-right scan giving σ position `k` its minimal bundle worth at least
/// `targets[k]`. `None` when some agent cannot be served.
pub fn greedy_feasible(inst: &Instance, order: &AgentOrder, targets: &[i64]) -> Option<Allocation> {
    let ends = scan_right(inst, order.as_slice(), targets, 0)?;
    Some(Allocation::from_ends(order, &ends))
}

/// How the realizable list is searched for `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThetaSearch {
    #[default]
    Linear,
    Binary,
}

/// Optimal welfare `θ`, its successor in `L`, and the σ position of the
/// leftmost unsafe agent (absent when `θ` is the largest value in `L`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaCertificate {
    pub theta: i64,
    pub next_value: Option<i64>,
    pub unsafe_index: Option<usize>,
}

pub fn optimal_theta(inst: &Instance, order: &AgentOrder) -> ThetaCertificate {
    optimal_theta_with(inst, order, ThetaSearch::Linear)
}

pub fn optimal_theta_with(inst: &Instance, order: &AgentOrder, search: ThetaSearch) -> ThetaCertificate {
    let list = realizable_utilities(inst);
    let values = list.values();
    let k = match search {
        ThetaSearch::Linear => {
            let mut k = 0;
            while k + 1 < values.len() && feasible_uniform(inst, order, values[k + 1]) {
                k += 1;
            }
            k
        }
        ThetaSearch::Binary => {
            // values[0] = 0 is always feasible
            let (mut lo, mut hi) = (0, values.len());
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if feasible_uniform(inst, order, values[mid]) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
    };
    let theta = values[k];
    let next_value = values.get(k + 1).copied();
    let unsafe_index = next_value.map(|next| find_unsafe(inst, order, theta, next));
    ThetaCertificate { theta, next_value, unsafe_index }
}

fn split_targets(n: usize, index: usize, theta: i64, next: i64) -> Vec<i64> {
    (0..n).map(|k| if k <= index { next } else { theta }).collect()
}

fn find_unsafe(inst: &Instance, order: &AgentOrder, theta: i64, next: i64) -> usize {
    let n = order.len();
    (0..n)
        .find(|&i| scan_right(inst, order.as_slice(), &split_targets(n, i, theta, next), 0).is_none())
        .expect("uniform successor target is infeasible, so some prefix fails")
}

/// The unsafe agent's σ position and the minimal bundles of its predecessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsafeSplit {
    pub index: usize,
    pub prefix: Vec<Interval>,
    pub frontier: usize,
}

pub fn leftmost_unsafe(inst: &Instance, order: &AgentOrder, cert: &ThetaCertificate) -> Option<UnsafeSplit> {
    let next = cert.next_value?;
    let index = cert
        .unsafe_index
        .unwrap_or_else(|| find_unsafe(inst, order, cert.theta, next));
    let agents = &order.as_slice()[..index];
    let ends = scan_right(inst, agents, &vec![next; index], 0).expect("predecessors are safe");
    let mut prefix = Vec::with_capacity(index);
    let mut start = 0;
    for &end in &ends {
        prefix.push(Interval::new(start, end).expect("successor target is positive"));
        start = end;
    }
    Some(UnsafeSplit { index, prefix, frontier: start })
}

/// Connected, complete, σ-consistent EQ1 allocation with optimal egalitarian
/// welfare among σ-consistent allocations.
pub fn eq1_complete(inst: &Instance, order: &AgentOrder) -> Result<Allocation> {
    inst.require_kind(Kind::Goods)?;
    check_order(inst, order)?;
    Ok(eq1_complete_unchecked(inst, order))
}

pub(crate) fn check_order(inst: &Instance, order: &AgentOrder) -> Result<()> {
    if order.len() != inst.n() {
        return Err(Error::InvalidOrder(format!(
            "ordering lists {} agents, instance has {}",
            order.len(),
            inst.n()
        )));
    }
    Ok(())
}

pub(crate) fn eq1_complete_unchecked(inst: &Instance, order: &AgentOrder) -> Allocation {
    let cert = optimal_theta(inst, order);
    let n = order.len();
    let Some(split) = leftmost_unsafe(inst, order, &cert) else {
        return theta_witness_completed(inst, order, cert.theta);
    };
    let tail = &order.as_slice()[split.index + 1..];
    let starts = scan_left(inst, tail, &vec![cert.theta; tail.len()], inst.m())
        .expect("successors of a safe prefix fit at theta");
    let mut ends: Vec<usize> = split.prefix.iter().map(Interval::end).collect();
    ends.extend(starts.iter().copied());
    ends.push(inst.m());
    debug_assert_eq!(ends.len(), n);
    debug_assert!(starts.first().is_none_or(|&s| s >= split.frontier));
    Allocation::from_ends(order, &ends)
}

/// Greedy witness at the largest realizable target, leftovers to the last agent.
fn theta_witness_completed(inst: &Instance, order: &AgentOrder, theta: i64) -> Allocation {
    let mut ends = scan_right(inst, order.as_slice(), &vec![theta; order.len()], 0)
        .expect("theta is feasible");
    *ends.last_mut().expect("n >= 1") = inst.m();
    Allocation::from_ends(order, &ends)
}
