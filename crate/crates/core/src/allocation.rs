//! Intervals, agent orderings and connected allocations.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{AgentId, Instance};

/// A non-empty run of consecutive goods, stored half-open as `[start, end)`
/// with 0-based indices. Displayed 1-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    start: usize,
    end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Option<Self> {
        (start < end).then_some(Interval { start, end })
    }

    /// From 1-based inclusive endpoints `first..=last`.
    pub fn from_one_based(first: usize, last: usize) -> Option<Self> {
        (first >= 1 && first <= last).then_some(Interval { start: first - 1, end: last })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// 1-based index of the first good.
    pub fn first(&self) -> usize {
        self.start + 1
    }

    /// 1-based index of the last good.
    pub fn last(&self) -> usize {
        self.end
    }

    pub fn contains(&self, good: usize) -> bool {
        self.start <= good && good < self.end
    }

    pub fn goods(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.first(), self.last())
    }
}

/// A permutation of the agents: the left-to-right order σ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AgentOrder(Vec<AgentId>);

impl AgentOrder {
    pub fn new(order: Vec<AgentId>, n: usize) -> Result<Self> {
        if order.len() != n {
            return Err(Error::InvalidOrder(format!("{} entries for {n} agents", order.len())));
        }
        let mut seen = vec![false; n];
        for &a in &order {
            if a >= n || std::mem::replace(&mut seen[a], true) {
                return Err(Error::InvalidOrder(format!("agent #{} is out of range or repeated", a + 1)));
            }
        }
        Ok(AgentOrder(order))
    }

    pub fn identity(n: usize) -> Self {
        AgentOrder((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[AgentId] {
        &self.0
    }

    /// Agent at σ position `k`.
    pub fn at(&self, k: usize) -> AgentId {
        self.0[k]
    }

    pub fn position_of(&self, agent: AgentId) -> Option<usize> {
        self.0.iter().position(|&a| a == agent)
    }

    /// All `n!` orderings in lexicographic order.
    pub fn all(n: usize) -> Vec<AgentOrder> {
        let mut perm: Vec<AgentId> = (0..n).collect();
        let mut out = vec![AgentOrder(perm.clone())];
        while next_permutation(&mut perm) {
            out.push(AgentOrder(perm.clone()));
        }
        out
    }
}

pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// One bundle per agent (indexed by agent id) plus the order σ the
/// allocation claims to follow. Empty bundles keep their σ position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    order: AgentOrder,
    bundles: Vec<Option<Interval>>,
}

impl Allocation {
    pub fn new(order: AgentOrder, bundles: Vec<Option<Interval>>) -> Result<Self> {
        if order.len() != bundles.len() {
            return Err(Error::InvalidAllocation(format!(
                "{} bundles for an ordering of {} agents",
                bundles.len(),
                order.len()
            )));
        }
        Ok(Allocation { order, bundles })
    }

    /// Complete allocation where σ position `k` receives `[ends[k-1], ends[k])`
    /// (with `ends[-1] = 0`).
    pub fn from_ends(order: &AgentOrder, ends: &[usize]) -> Self {
        debug_assert_eq!(order.len(), ends.len());
        let mut bundles = vec![None; order.len()];
        let mut start = 0;
        for (k, &end) in ends.iter().enumerate() {
            bundles[order.at(k)] = Interval::new(start, end);
            start = end.max(start);
        }
        Allocation { order: order.clone(), bundles }
    }

    /// Allocation whose σ lists non-empty bundles left to right, then empty
    /// bundles by agent id.
    pub fn from_bundles(bundles: Vec<Option<Interval>>) -> Self {
        let mut order: Vec<AgentId> = (0..bundles.len()).collect();
        order.sort_by_key(|&a| match bundles[a] {
            Some(iv) => (0, iv.start(), a),
            None => (1, 0, a),
        });
        Allocation { order: AgentOrder(order), bundles }
    }

    pub fn order(&self) -> &AgentOrder {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: AgentId) -> Option<Interval> {
        self.bundles[agent]
    }

    pub fn bundles(&self) -> &[Option<Interval>] {
        &self.bundles
    }

    /// Bundles listed in σ order.
    pub fn in_order(&self) -> impl Iterator<Item = (AgentId, Option<Interval>)> + '_ {
        self.order.as_slice().iter().map(|&a| (a, self.bundles[a]))
    }

    /// Agent holding `good`, if any (first match when bundles overlap).
    pub fn owner_of(&self, good: usize) -> Option<AgentId> {
        self.bundles
            .iter()
            .position(|b| b.is_some_and(|iv| iv.contains(good)))
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, (_, b)) in self.in_order().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            match b {
                Some(iv) => write!(f, "{iv}")?,
                None => f.write_str("∅")?,
            }
        }
        f.write_str(")")
    }
}

/// Structural facts about an allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureReport {
    pub connected: bool,
    pub disjoint: bool,
    pub sigma_consistent: bool,
    pub complete: bool,
}

pub fn validate_allocation(inst: &Instance, alloc: &Allocation) -> Result<StructureReport> {
    if alloc.n() != inst.n() {
        return Err(Error::UnknownAgent(format!(
            "allocation covers {} agents, instance has {}",
            alloc.n(),
            inst.n()
        )));
    }
    let m = inst.m();
    let mut cover = vec![0u32; m];
    let mut connected = true;
    for iv in alloc.bundles.iter().flatten() {
        if iv.end() > m {
            connected = false;
            continue;
        }
        for g in iv.goods() {
            cover[g] += 1;
        }
    }
    let disjoint = cover.iter().all(|&c| c <= 1);
    let complete = connected && cover.iter().all(|&c| c == 1);
    let mut frontier = 0;
    let mut sigma_consistent = true;
    for (_, b) in alloc.in_order() {
        if let Some(iv) = b {
            if iv.start() < frontier {
                sigma_consistent = false;
            }
            frontier = frontier.max(iv.end());
        }
    }
    Ok(StructureReport { connected, disjoint, sigma_consistent, complete })
}
