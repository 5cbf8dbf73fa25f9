//! Exhaustive ground truth for small instances.
//!
//! Complete connected allocations of a path are compositions of `m` into `n`
//! ordered block sizes, one composition per agent order. They are enumerated
//! in lexicographic order (orders outermost). Questions with the order left
//! free and only lower bounds on utilities go through a subset search over
//! `(prefix length, set of agents used)` instead, which is exact and much
//! smaller than the full enumeration.

use std::fmt;
use std::str::FromStr;

use crate::allocation::{next_permutation, AgentOrder, Allocation, Interval};
use crate::error::{Error, Result};
use crate::metrics;
use crate::model::{AgentId, Instance, Kind};

pub const BUDGET_ENV: &str = "PATHFAIR_ORACLE_BUDGET";

/// Cap on the number of allocations (or search states) the oracle may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_states: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_states: 5_000_000 }
    }
}

impl EnumerationBudget {
    pub fn new(max_states: u64) -> Self {
        EnumerationBudget { max_states: max_states.max(1) }
    }

    /// Default budget, overridden by `PATHFAIR_ORACLE_BUDGET` when set.
    pub fn from_env() -> std::result::Result<Self, String> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse::<u64>()
                .ok()
                .filter(|&n| n > 0)
                .map(EnumerationBudget::new)
                .ok_or_else(|| format!("{BUDGET_ENV} must be a positive integer, got {v:?}")),
            Err(_) => Ok(EnumerationBudget::default()),
        }
    }

    fn admit(&self, required: u128) -> Result<()> {
        if required > self.max_states as u128 {
            Err(Error::BudgetExceeded { required, limit: self.max_states })
        } else {
            Ok(())
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of complete connected allocations: `C(m+n-1, n-1)` for a fixed
/// order, times `n!` when the order is free.
pub fn count_complete(m: usize, n: usize, order_fixed: bool) -> u128 {
    let per_order = binomial((m + n - 1) as u128, (n - 1) as u128);
    if order_fixed {
        per_order
    } else {
        (1..=n as u128).fold(per_order, |acc, k| acc.saturating_mul(k))
    }
}

/// Stream of complete connected allocations in lexicographic order.
#[derive(Debug, Clone)]
pub struct CompleteAllocations {
    m: usize,
    order: Vec<AgentId>,
    order_fixed: bool,
    cuts: Vec<usize>,
    done: bool,
}

impl CompleteAllocations {
    fn new(m: usize, order: Vec<AgentId>, order_fixed: bool) -> Self {
        let cuts = vec![0; order.len() - 1];
        CompleteAllocations { m, order, order_fixed, cuts, done: false }
    }

    fn advance(&mut self) {
        // next non-decreasing cut vector, else next order
        if let Some(i) = self.cuts.iter().rposition(|&c| c < self.m) {
            let v = self.cuts[i] + 1;
            for c in &mut self.cuts[i..] {
                *c = v;
            }
            return;
        }
        if !self.order_fixed && next_permutation(&mut self.order) {
            self.cuts.iter_mut().for_each(|c| *c = 0);
            return;
        }
        self.done = true;
    }
}

impl Iterator for CompleteAllocations {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        if self.done {
            return None;
        }
        let mut ends = self.cuts.clone();
        ends.push(self.m);
        let order = AgentOrder::new(self.order.clone(), self.order.len()).expect("permutation");
        let alloc = Allocation::from_ends(&order, &ends);
        self.advance();
        Some(alloc)
    }
}

pub fn enumerate_complete(
    inst: &Instance,
    sigma: Option<&AgentOrder>,
    budget: &EnumerationBudget,
) -> Result<CompleteAllocations> {
    let (n, m) = (inst.n(), inst.m());
    budget.admit(count_complete(m, n, sigma.is_some()))?;
    let order = match sigma {
        Some(s) => {
            check_order(inst, s)?;
            s.as_slice().to_vec()
        }
        None => (0..n).collect(),
    };
    Ok(CompleteAllocations::new(m, order, sigma.is_some()))
}

fn check_order(inst: &Instance, sigma: &AgentOrder) -> Result<()> {
    if sigma.len() != inst.n() {
        return Err(Error::InvalidOrder(format!(
            "ordering lists {} agents, instance has {}",
            sigma.len(),
            inst.n()
        )));
    }
    Ok(())
}

/// Best egalitarian welfare over σ-consistent complete allocations, with the
/// first allocation (in enumeration order) that attains it.
pub fn max_egalitarian(
    inst: &Instance,
    sigma: &AgentOrder,
    budget: &EnumerationBudget,
) -> Result<(i64, Allocation)> {
    let mut best: Option<(i64, Allocation)> = None;
    for alloc in enumerate_complete(inst, Some(sigma), budget)? {
        let w = metrics::egalitarian_welfare(inst, &alloc);
        if best.as_ref().is_none_or(|(b, _)| w > *b) {
            best = Some((w, alloc));
        }
    }
    Ok(best.expect("at least one composition"))
}

/// A condition an oracle witness must meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    Eq1,
    Ef1,
    Nw,
    Po,
    Complete,
    Eq1Chores,
    EgalAtLeast(i64),
    UtilAtLeast(i64),
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::Eq1 => f.write_str("eq1"),
            Requirement::Ef1 => f.write_str("ef1"),
            Requirement::Nw => f.write_str("nw"),
            Requirement::Po => f.write_str("po"),
            Requirement::Complete => f.write_str("complete"),
            Requirement::Eq1Chores => f.write_str("eq1-chores"),
            Requirement::EgalAtLeast(t) => write!(f, "egal>={t}"),
            Requirement::UtilAtLeast(t) => write!(f, "util>={t}"),
        }
    }
}

impl FromStr for Requirement {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        let threshold = |rest: &str| {
            rest.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad threshold in {s:?}"))
        };
        if let Some(rest) = s.strip_prefix("egal>=") {
            return threshold(rest).map(Requirement::EgalAtLeast);
        }
        if let Some(rest) = s.strip_prefix("util>=") {
            return threshold(rest).map(Requirement::UtilAtLeast);
        }
        Ok(match s.as_str() {
            "eq1" => Requirement::Eq1,
            "ef1" => Requirement::Ef1,
            "nw" => Requirement::Nw,
            "po" => Requirement::Po,
            "complete" => Requirement::Complete,
            "eq1-chores" => Requirement::Eq1Chores,
            other => return Err(format!("unknown requirement {other:?}")),
        })
    }
}

/// First allocation (in enumeration order) meeting every requirement.
///
/// Only complete allocations are candidates. A query asking for nothing but
/// non-wastefulness with the order free is answered by the pruned subset
/// search, whose witness need not be the first in enumeration order.
pub fn exists_satisfying(
    inst: &Instance,
    reqs: &[Requirement],
    sigma: Option<&AgentOrder>,
    budget: &EnumerationBudget,
) -> Result<Option<Allocation>> {
    if reqs.contains(&Requirement::Eq1Chores) {
        inst.require_kind(Kind::Chores)?;
    }
    if sigma.is_none()
        && reqs.contains(&Requirement::Nw)
        && reqs.iter().all(|r| matches!(r, Requirement::Nw | Requirement::Complete))
    {
        return exists_nonwasteful(inst, budget);
    }
    let mut ordered: Vec<Requirement> = reqs.to_vec();
    ordered.sort_by_key(|r| matches!(r, Requirement::Po));
    for alloc in enumerate_complete(inst, sigma, budget)? {
        let mut ok = true;
        for req in &ordered {
            ok = match *req {
                Requirement::Eq1 => metrics::is_eq1(inst, &alloc),
                Requirement::Ef1 => metrics::is_ef1(inst, &alloc),
                Requirement::Nw => metrics::is_nw(inst, &alloc),
                Requirement::Po => pareto_undominated(inst, &alloc, Within::All, budget)?,
                Requirement::Complete => true,
                Requirement::Eq1Chores => metrics::is_eq1_chores(inst, &alloc)?,
                Requirement::EgalAtLeast(t) => metrics::egalitarian_welfare(inst, &alloc) >= t,
                Requirement::UtilAtLeast(t) => metrics::utilitarian_welfare(inst, &alloc) >= t,
            };
            if !ok {
                break;
            }
        }
        if ok {
            return Ok(Some(alloc));
        }
    }
    Ok(None)
}

/// Comparison class for Pareto domination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Within {
    /// Complete connected allocations under every order.
    All,
    /// Complete EQ1 allocations consistent with the allocation's own order.
    SigmaEq1Complete,
}

/// `b` weakly improves on `a` for everyone and strictly for someone.
pub fn dominates(b: &[i64], a: &[i64]) -> bool {
    b.iter().zip(a).all(|(x, y)| x >= y) && b.iter().zip(a).any(|(x, y)| x > y)
}

pub fn find_dominating(
    inst: &Instance,
    alloc: &Allocation,
    within: Within,
    budget: &EnumerationBudget,
) -> Result<Option<Allocation>> {
    inst.require_kind(Kind::Goods)?;
    let base = metrics::utilities(inst, alloc);
    match within {
        Within::All => {
            for j in 0..inst.n() {
                let mut bounds = base.clone();
                bounds[j] += 1;
                if let Some(w) = exists_meeting_bounds(inst, &bounds, budget)? {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        }
        Within::SigmaEq1Complete => {
            for cand in enumerate_complete(inst, Some(alloc.order()), budget)? {
                if dominates(&metrics::utilities(inst, &cand), &base) && metrics::is_eq1(inst, &cand) {
                    return Ok(Some(cand));
                }
            }
            Ok(None)
        }
    }
}

pub fn pareto_undominated(
    inst: &Instance,
    alloc: &Allocation,
    within: Within,
    budget: &EnumerationBudget,
) -> Result<bool> {
    Ok(find_dominating(inst, alloc, within, budget)?.is_none())
}

/// Complete connected allocation (any order) giving each agent at least its
/// bound. Agents with a bound of at most zero may be left empty.
pub fn exists_meeting_bounds(
    inst: &Instance,
    bounds: &[i64],
    budget: &EnumerationBudget,
) -> Result<Option<Allocation>> {
    subset_search(inst, budget, |a, s, e| inst.value(a, s, e) >= bounds[a], |a| bounds[a] <= 0)
}

/// Connected allocation in which every good goes to an approver, any order.
pub fn exists_nonwasteful(inst: &Instance, budget: &EnumerationBudget) -> Result<Option<Allocation>> {
    subset_search(inst, budget, |a, s, e| (s..e).all(|g| inst.single(a, g) > 0), |_| true)
}

const UNSEEN: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

/// Reachability over `(position, used agents)`. `extend(a, s, e)` says whether
/// agent `a` may take `[s, e)`; `idle(a)` says whether `a` may end with
/// nothing.
fn subset_search(
    inst: &Instance,
    budget: &EnumerationBudget,
    extend: impl Fn(AgentId, usize, usize) -> bool,
    idle: impl Fn(AgentId) -> bool,
) -> Result<Option<Allocation>> {
    let (n, m) = (inst.n(), inst.m());
    if n >= 27 {
        return Err(Error::BudgetExceeded { required: u128::MAX, limit: budget.max_states });
    }
    let masks = 1usize << n;
    budget.admit(((m + 1) * masks) as u128)?;
    // parent[pos * masks + mask] = (previous position << 5) | agent
    let mut parent = vec![UNSEEN; (m + 1) * masks];
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
    parent[0] = ROOT;
    frontier[0].push(0);
    for pos in 0..m {
        let layer = std::mem::take(&mut frontier[pos]);
        for &mask in &layer {
            for a in (0..n).filter(|a| mask & (1 << a) == 0) {
                let next_mask = mask as usize | (1 << a);
                for e in (pos + 1..=m).filter(|&e| extend(a, pos, e)) {
                    let slot = e * masks + next_mask;
                    if parent[slot] == UNSEEN {
                        parent[slot] = ((pos as u32) << 5) | a as u32;
                        frontier[e].push(next_mask as u32);
                    }
                }
            }
        }
    }
    let done = frontier[m]
        .iter()
        .copied()
        .find(|&mask| (0..n).all(|a| mask & (1 << a) != 0 || idle(a)));
    let Some(mut mask) = done else {
        return Ok(None);
    };
    let mut bundles = vec![None; n];
    let mut placed = Vec::new();
    let mut pos = m;
    while parent[pos * masks + mask as usize] != ROOT {
        let p = parent[pos * masks + mask as usize];
        let (prev, a) = ((p >> 5) as usize, (p & 31) as usize);
        bundles[a] = Interval::new(prev, pos);
        placed.push(a);
        mask &= !(1 << a);
        pos = prev;
    }
    placed.reverse();
    placed.extend((0..n).filter(|a| bundles[*a].is_none()));
    let order = AgentOrder::new(placed, n).expect("every agent placed once");
    Ok(Some(Allocation::new(order, bundles).expect("sizes match")))
}
