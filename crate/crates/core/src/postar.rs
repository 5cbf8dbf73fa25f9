//! EQ1 allocations that no other σ-consistent complete EQ1 allocation
//! Pareto-dominates, for binary additive valuations.
//!
//! Starts from the egalitarian solver's `θ` and unsafe agent. From the unsafe
//! agent onward, each agent is tentatively lifted to `θ + 1` whenever its
//! successors can still reach `θ`; otherwise it settles for `θ`. The leftover
//! goods then go to the last agent, or, if that would lift it past `θ + 1`,
//! the tail is rebuilt right to left with the chosen targets and the unsafe
//! agent absorbs the remainder.

use crate::allocation::{AgentOrder, Allocation};
use crate::egalitarian::{
    check_order, eq1_complete_unchecked, grow_right, leftmost_unsafe, optimal_theta, scan_left, scan_right,
    UnsafeSplit,
};
use crate::error::Result;
use crate::model::{Instance, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    /// Targets `θ + 1`.
    Upper,
    /// Targets `θ`.
    Lower,
}

/// Labels for σ positions `start_index..n` and the tentative bundle ends
/// chosen while labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLabeling {
    pub start_index: usize,
    pub labels: Vec<Group>,
    pub tentative_ends: Vec<usize>,
}

impl GroupLabeling {
    pub fn label_of(&self, position: usize) -> Option<Group> {
        position
            .checked_sub(self.start_index)
            .and_then(|k| self.labels.get(k).copied())
    }

    fn targets(&self, theta: i64) -> Vec<i64> {
        self.labels
            .iter()
            .map(|g| match g {
                Group::Upper => theta + 1,
                Group::Lower => theta,
            })
            .collect()
    }
}

pub fn classify_groups(inst: &Instance, order: &AgentOrder, theta: i64, split: &UnsafeSplit) -> GroupLabeling {
    let agents = order.as_slice();
    let n = agents.len();
    let mut frontier = split.frontier;
    let mut labels = Vec::with_capacity(n - split.index);
    let mut tentative_ends = Vec::with_capacity(n - split.index);
    for j in split.index..n {
        let rest = &agents[j + 1..];
        let lifted = grow_right(inst, agents[j], frontier, theta + 1)
            .filter(|&e| scan_right(inst, rest, &vec![theta; rest.len()], e).is_some());
        let (label, end) = match lifted {
            Some(e) => (Group::Upper, e),
            None => (
                Group::Lower,
                grow_right(inst, agents[j], frontier, theta).expect("successors of a safe prefix reach theta"),
            ),
        };
        labels.push(label);
        tentative_ends.push(end);
        frontier = end;
    }
    GroupLabeling { start_index: split.index, labels, tentative_ends }
}

/// Connected, complete, σ-consistent EQ1 allocation with every utility in
/// `{θ, θ + 1}`, undominated among σ-consistent complete EQ1 allocations.
pub fn po_star(inst: &Instance, order: &AgentOrder) -> Result<Allocation> {
    inst.require_kind(Kind::Goods)?;
    inst.require_binary()?;
    check_order(inst, order)?;
    let cert = optimal_theta(inst, order);
    let Some(split) = leftmost_unsafe(inst, order, &cert) else {
        return Ok(eq1_complete_unchecked(inst, order));
    };
    let theta = cert.theta;
    let groups = classify_groups(inst, order, theta, &split);
    let m = inst.m();
    let mut ends: Vec<usize> = split.prefix.iter().map(|iv| iv.end()).collect();
    ends.extend(groups.tentative_ends.iter().copied());
    let n = ends.len();
    let last_start = if n >= 2 { ends[n - 2] } else { 0 };
    if inst.value(order.at(n - 1), last_start, m) <= theta + 1 {
        ends[n - 1] = m;
        return Ok(Allocation::from_ends(order, &ends));
    }
    let tail = &order.as_slice()[split.index + 1..];
    let targets = groups.targets(theta);
    let starts = scan_left(inst, tail, &targets[1..], m).expect("tentative tail fits, so the rebuilt tail fits");
    let mut ends: Vec<usize> = split.prefix.iter().map(|iv| iv.end()).collect();
    ends.extend(starts.iter().copied());
    ends.push(m);
    Ok(Allocation::from_ends(order, &ends))
}
