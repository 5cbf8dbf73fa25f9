//! Chores: σ-consistent complete EQ1-chores allocations.
//!
//! Work with disutilities `d = -u >= 0`. An allocation is EQ1-chores exactly
//! when, for `μ` the smallest disutility in it, every bundle has `d >= μ` and
//! every non-empty bundle drops to at most `μ` after removing its heaviest
//! removable chore. For each candidate floor `μ` a dynamic program over cut
//! positions minimises the largest disutility under those constraints; the
//! best floor wins.
//!
//! Not every instance has an EQ1-chores allocation that also attains the
//! unconstrained max-min utility, so the optimum here is taken within the
//! EQ1-chores class.

use crate::allocation::{AgentOrder, Allocation};
use crate::error::Result;
use crate::model::{Instance, Kind, Valuation};

use super::{check_order, eq1_complete_unchecked};

struct Tables {
    stride: usize,
    // disutility and best single-removal residual per agent, [s * stride + e]
    dis: Vec<Vec<i64>>,
    residual: Vec<Vec<i64>>,
}

impl Tables {
    fn new(inst: &Instance) -> Self {
        let m = inst.m();
        let stride = m + 1;
        let mut dis = Vec::with_capacity(inst.n());
        let mut residual = Vec::with_capacity(inst.n());
        for a in 0..inst.n() {
            let mut d = vec![0i64; stride * stride];
            let mut r = vec![0i64; stride * stride];
            for s in 0..m {
                let mut heaviest = 0i64;
                for e in s + 1..=m {
                    let de = -inst.value(a, s, e);
                    d[s * stride + e] = de;
                    r[s * stride + e] = match &inst.agents()[a].valuation {
                        Valuation::Additive(vals) => {
                            heaviest = heaviest.max(-vals[e - 1]);
                            de - heaviest
                        }
                        Valuation::IntervalTable(_) => {
                            (-inst.value(a, s + 1, e)).min(-inst.value(a, s, e - 1))
                        }
                    };
                }
            }
            dis.push(d);
            residual.push(r);
        }
        Tables { stride, dis, residual }
    }
}

/// Smallest achievable largest disutility with floor `mu`, with the cut
/// positions that achieve it.
fn solve_floor(t: &Tables, order: &AgentOrder, m: usize, mu: i64) -> Option<(i64, Vec<usize>)> {
    let n = order.len();
    const NONE: i64 = i64::MAX;
    // best[k][c]: first k agents cover [0, c)
    let mut best = vec![vec![NONE; m + 1]; n + 1];
    let mut from = vec![vec![0usize; m + 1]; n + 1];
    best[0][0] = i64::MIN;
    for k in 0..n {
        let a = order.at(k);
        for s in 0..=m {
            let prev = best[k][s];
            if prev == NONE {
                continue;
            }
            for e in s..=m {
                let (d, r) = if s == e {
                    (0, i64::MIN)
                } else {
                    (t.dis[a][s * t.stride + e], t.residual[a][s * t.stride + e])
                };
                if d < mu || r > mu {
                    continue;
                }
                let cost = prev.max(d);
                if cost < best[k + 1][e] {
                    best[k + 1][e] = cost;
                    from[k + 1][e] = s;
                }
            }
        }
    }
    if best[n][m] == NONE {
        return None;
    }
    let mut ends = vec![0; n];
    let mut c = m;
    for k in (0..n).rev() {
        ends[k] = c;
        c = from[k + 1][c];
    }
    Some((best[n][m], ends))
}

/// Complete σ-consistent EQ1-chores allocation whose worst utility is the
/// best possible among σ-consistent complete EQ1-chores allocations.
pub fn eq1_complete_chores(inst: &Instance, order: &AgentOrder) -> Result<Allocation> {
    inst.require_kind(Kind::Chores)?;
    check_order(inst, order)?;
    let tables = Tables::new(inst);
    let mut floors: Vec<i64> = tables.dis.iter().flatten().copied().collect();
    floors.push(0);
    floors.sort_unstable();
    floors.dedup();
    let mut best: Option<(i64, Vec<usize>)> = None;
    for &mu in &floors {
        if best.as_ref().is_some_and(|(b, _)| mu >= *b) {
            break;
        }
        if let Some((cost, ends)) = solve_floor(&tables, order, inst.m(), mu) {
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, ends));
            }
        }
    }
    match best {
        Some((_, ends)) => Ok(Allocation::from_ends(order, &ends)),
        None => eq1_complete_chores_mirror(inst, order),
    }
}

/// The goods solver run on negated values. Always EQ1-chores, but it lifts
/// the smallest disutility rather than the worst utility, so it is not
/// optimal in general.
pub fn eq1_complete_chores_mirror(inst: &Instance, order: &AgentOrder) -> Result<Allocation> {
    inst.require_kind(Kind::Chores)?;
    check_order(inst, order)?;
    Ok(eq1_complete_unchecked(&negated(inst), order))
}

fn negated(inst: &Instance) -> Instance {
    use crate::model::{Agent, IntervalTable};
    let agents = inst
        .agents()
        .iter()
        .enumerate()
        .map(|(a, agent)| match &agent.valuation {
            Valuation::Additive(vals) => Agent::additive(agent.name.clone(), vals.iter().map(|v| -v).collect()),
            Valuation::IntervalTable(_) => Agent::table(
                agent.name.clone(),
                IntervalTable::from_fn(inst.m(), |iv| -inst.value(a, iv.start(), iv.end())),
            ),
        })
        .collect();
    Instance::new(inst.m(), Kind::Goods, agents).expect("negated chores are valid goods")
}
