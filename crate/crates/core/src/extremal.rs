//! Deciding whether a connected, non-wasteful EQ1 allocation exists when
//! every agent approves a prefix or a suffix of the path.
//!
//! Under non-wastefulness with binary values an agent's utility is its bundle
//! size, so EQ1 means sizes differ by at most one. For a split point `j` the
//! prefix agents share goods `1..=j` and the suffix agents share the rest.
//! On each side the sizes are forced (`⌊m'/n'⌋` or `⌈m'/n'⌉`) and agents with
//! shorter approved runs get the smaller blocks nearer the path end they
//! approve. Every split is tried.

use crate::allocation::{AgentOrder, Allocation, Interval};
use crate::error::{Error, Result};
use crate::metrics::{is_eq1, is_nw};
use crate::model::{AgentId, Instance, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    #[default]
    Left,
    Right,
}

/// Prefix agents with their approved run length `ℓ`, and suffix agents with
/// the 1-based first good `r` of their approved run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalProfile {
    pub left: Vec<(AgentId, usize)>,
    pub right: Vec<(AgentId, usize)>,
}

pub fn classify_extremal(inst: &Instance) -> Result<ExtremalProfile> {
    classify_extremal_with(inst, Side::Left)
}

/// As [`classify_extremal`], placing agents that approve the whole path on
/// `full_side`.
pub fn classify_extremal_with(inst: &Instance, full_side: Side) -> Result<ExtremalProfile> {
    inst.require_kind(Kind::Goods)?;
    inst.require_binary()?;
    let m = inst.m();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for a in 0..inst.n() {
        let approved: Vec<bool> = (0..m).map(|g| inst.single(a, g) == 1).collect();
        let count = approved.iter().filter(|&&x| x).count();
        let prefix = count > 0 && approved[..count].iter().all(|&x| x);
        let suffix = count > 0 && approved[m - count..].iter().all(|&x| x);
        match (prefix, suffix) {
            (true, true) if full_side == Side::Right => right.push((a, 1)),
            (true, _) => left.push((a, count)),
            (false, true) => right.push((a, m - count + 1)),
            (false, false) => return Err(Error::NotExtremal { agent: inst.name(a).to_string() }),
        }
    }
    left.sort_by_key(|&(a, l)| (l, a));
    right.sort_by_key(|&(a, r)| (r, a));
    Ok(ExtremalProfile { left, right })
}

/// A block `[start, end)` on a one-sided sub-path, counted from the end the
/// agents approve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub agent: AgentId,
    pub start: usize,
    pub end: usize,
}

/// Floor-sized then ceiling-sized blocks over `m_sub` goods, handed out in
/// the given order (ascending approved length). `None` if a block runs past
/// its agent's approved run.
pub fn solve_one_sided(m_sub: usize, agents: &[(AgentId, usize)]) -> Option<Vec<Block>> {
    let n_sub = agents.len();
    if n_sub == 0 {
        return (m_sub == 0).then(Vec::new);
    }
    let floor = m_sub / n_sub;
    let n_ceil = m_sub - n_sub * floor;
    let n_floor = n_sub - n_ceil;
    let mut blocks = Vec::with_capacity(n_sub);
    let mut start = 0;
    for (k, &(agent, approved)) in agents.iter().enumerate() {
        let end = start + if k < n_floor { floor } else { floor + 1 };
        if end > approved && end > start {
            return None;
        }
        blocks.push(Block { agent, start, end });
        start = end;
    }
    Some(blocks)
}

pub fn solve_extremal(inst: &Instance) -> Result<Option<Allocation>> {
    let profile = classify_extremal(inst)?;
    Ok(solve_profile(inst, &profile))
}

/// Runs the split search on a given classification.
pub fn solve_profile(inst: &Instance, profile: &ExtremalProfile) -> Option<Allocation> {
    let m = inst.m();
    for j in 0..=m {
        let left: Vec<(AgentId, usize)> = profile.left.iter().map(|&(a, l)| (a, l.min(j))).collect();
        // mirrored: the suffix from r has m - r + 1 goods, clipped to m - j
        let mut right: Vec<(AgentId, usize)> =
            profile.right.iter().map(|&(a, r)| (a, (m + 1 - r).min(m - j))).collect();
        right.sort_by_key(|&(a, len)| (len, a));
        let (Some(lb), Some(rb)) = (solve_one_sided(j, &left), solve_one_sided(m - j, &right)) else {
            continue;
        };
        let n = inst.n();
        let mut bundles = vec![None; n];
        let mut order = Vec::with_capacity(n);
        for b in &lb {
            bundles[b.agent] = Interval::new(b.start, b.end);
            order.push(b.agent);
        }
        for b in rb.iter().rev() {
            bundles[b.agent] = Interval::new(m - b.end, m - b.start);
            order.push(b.agent);
        }
        let order = AgentOrder::new(order, n).expect("each agent classified once");
        let alloc = Allocation::new(order, bundles).expect("sizes match");
        if is_eq1(inst, &alloc) {
            debug_assert!(is_nw(inst, &alloc));
            return Some(alloc);
        }
    }
    None
}
