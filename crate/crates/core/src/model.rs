//! Instances: a path of `m` goods, `n` agents and their valuations.
//!
//! Goods are indexed `0..m` internally. Bundle values are looked up through a
//! per-agent table over half-open ranges `[start, end)`, built once on
//! construction, so every solver sees additive and table valuations alike.

use std::collections::HashSet;
use std::fmt;

use crate::allocation::Interval;
use crate::error::{Error, NonBinary, Result};

pub type AgentId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Goods,
    Chores,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Goods => "goods",
            Kind::Chores => "chores",
        })
    }
}

/// Value of every contiguous interval of a path, stored as triangular rows.
///
/// Row `l` holds the values of `[l, l]`, `[l, l+1]`, ..., `[l, m-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalTable {
    rows: Vec<Vec<i64>>,
}

impl IntervalTable {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let m = rows.len();
        for (l, row) in rows.iter().enumerate() {
            if row.len() != m - l {
                return Err(Error::InvalidInstance(format!(
                    "table row {} has {} entries, expected {}",
                    l + 1,
                    row.len(),
                    m - l
                )));
            }
        }
        Ok(IntervalTable { rows })
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(Interval) -> i64) -> Self {
        let rows = (0..m)
            .map(|l| {
                (l + 1..=m)
                    .map(|e| f(Interval::new(l, e).expect("non-empty")))
                    .collect()
            })
            .collect();
        IntervalTable { rows }
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn get(&self, interval: Interval) -> i64 {
        self.rows[interval.start()][interval.end() - 1 - interval.start()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Additive(Vec<i64>),
    IntervalTable(IntervalTable),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent {
    pub name: String,
    pub valuation: Valuation,
}

impl Agent {
    pub fn additive(name: impl Into<String>, values: Vec<i64>) -> Self {
        Agent { name: name.into(), valuation: Valuation::Additive(values) }
    }

    pub fn table(name: impl Into<String>, table: IntervalTable) -> Self {
        Agent { name: name.into(), valuation: Valuation::IntervalTable(table) }
    }
}

/// A validated path instance. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Instance {
    m: usize,
    kind: Kind,
    agents: Vec<Agent>,
    // values[a][start * (m + 1) + end] for start <= end
    values: Vec<Vec<i64>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.kind == other.kind && self.agents == other.agents
    }
}

impl Eq for Instance {}

impl Instance {
    pub fn new(m: usize, kind: Kind, agents: Vec<Agent>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInstance("the path needs at least one good".into()));
        }
        if agents.is_empty() {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        }
        let mut seen = HashSet::new();
        for agent in &agents {
            if agent.name.is_empty() || agent.name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidInstance(format!(
                    "agent name {:?} must be non-empty without whitespace",
                    agent.name
                )));
            }
            if !seen.insert(agent.name.as_str()) {
                return Err(Error::InvalidInstance(format!("duplicate agent name {}", agent.name)));
            }
        }
        let values = agents
            .iter()
            .map(|agent| build_values(m, kind, agent))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance { m, kind, agents, values })
    }

    /// Additive instance with agents named `a1..an`.
    pub fn additive(kind: Kind, rows: &[Vec<i64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        let agents = rows
            .iter()
            .enumerate()
            .map(|(i, row)| Agent::additive(format!("a{}", i + 1), row.clone()))
            .collect();
        Instance::new(m, kind, agents)
    }

    pub fn goods(rows: &[Vec<i64>]) -> Result<Self> {
        Instance::additive(Kind::Goods, rows)
    }

    pub fn chores(rows: &[Vec<i64>]) -> Result<Self> {
        Instance::additive(Kind::Chores, rows)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn name(&self, agent: AgentId) -> &str {
        &self.agents[agent].name
    }

    pub fn agent_index(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|a| a.name == name)
    }

    /// Value of the half-open range `[start, end)`; zero when empty.
    #[inline]
    pub fn value(&self, agent: AgentId, start: usize, end: usize) -> i64 {
        debug_assert!(start <= end && end <= self.m);
        self.values[agent][start * (self.m + 1) + end]
    }

    #[inline]
    pub fn single(&self, agent: AgentId, good: usize) -> i64 {
        self.value(agent, good, good + 1)
    }

    /// Checked bundle lookup.
    pub fn bundle_value(&self, agent: AgentId, bundle: Option<Interval>) -> Result<i64> {
        if agent >= self.n() {
            return Err(Error::UnknownAgent(format!("#{}", agent + 1)));
        }
        match bundle {
            None => Ok(0),
            Some(iv) if iv.end() > self.m => Err(Error::InvalidInterval {
                first: iv.first(),
                last: iv.last(),
                m: self.m,
            }),
            Some(iv) => Ok(self.value(agent, iv.start(), iv.end())),
        }
    }

    pub fn is_additive(&self) -> bool {
        self.agents.iter().all(|a| matches!(a.valuation, Valuation::Additive(_)))
    }

    /// Additive with every value in `{0, 1}`.
    pub fn is_binary(&self) -> bool {
        self.require_binary().is_ok()
    }

    pub fn require_binary(&self) -> Result<()> {
        for agent in &self.agents {
            match &agent.valuation {
                Valuation::Additive(vals) => {
                    if let Some((g, &v)) = vals.iter().enumerate().find(|(_, &v)| v != 0 && v != 1) {
                        return Err(Error::NotBinary(NonBinary::Value {
                            agent: agent.name.clone(),
                            good: g + 1,
                            value: v,
                        }));
                    }
                }
                Valuation::IntervalTable(_) => {
                    return Err(Error::NotBinary(NonBinary::Table { agent: agent.name.clone() }))
                }
            }
        }
        Ok(())
    }

    pub fn require_kind(&self, expected: Kind) -> Result<()> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(Error::KindMismatch { expected, found: self.kind })
        }
    }

    /// Largest single-good value over all agents.
    pub fn u_max(&self) -> i64 {
        (0..self.n())
            .flat_map(|a| (0..self.m).map(move |g| (a, g)))
            .map(|(a, g)| self.single(a, g))
            .max()
            .unwrap_or(0)
    }

    /// The same valuations, every agent re-encoded as an interval table.
    pub fn to_interval_tables(&self) -> Instance {
        let agents = (0..self.n())
            .map(|a| {
                let table = IntervalTable::from_fn(self.m, |iv| self.value(a, iv.start(), iv.end()));
                Agent::table(self.agents[a].name.clone(), table)
            })
            .collect();
        Instance::new(self.m, self.kind, agents).expect("re-encoding preserves validity")
    }
}

fn build_values(m: usize, kind: Kind, agent: &Agent) -> Result<Vec<i64>> {
    let stride = m + 1;
    let mut out = vec![0i64; stride * stride];
    let bad = |msg: String| Error::InvalidInstance(format!("agent {}: {msg}", agent.name));
    match &agent.valuation {
        Valuation::Additive(vals) => {
            if vals.len() != m {
                return Err(bad(format!("{} values for {m} goods", vals.len())));
            }
            for (g, &v) in vals.iter().enumerate() {
                match kind {
                    Kind::Goods if v < 0 => return Err(bad(format!("good {} has negative value {v}", g + 1))),
                    Kind::Chores if v > 0 => return Err(bad(format!("chore {} has positive value {v}", g + 1))),
                    _ => {}
                }
            }
            for s in 0..m {
                let mut acc = 0i64;
                for e in s + 1..=m {
                    acc += vals[e - 1];
                    out[s * stride + e] = acc;
                }
            }
        }
        Valuation::IntervalTable(table) => {
            if table.m() != m {
                return Err(bad(format!("table covers {} goods, path has {m}", table.m())));
            }
            for s in 0..m {
                for e in s + 1..=m {
                    out[s * stride + e] = table.rows[s][e - 1 - s];
                }
            }
            for s in 0..m {
                for e in s + 1..=m {
                    let v = out[s * stride + e];
                    let inner = [out[(s + 1) * stride + e], out[s * stride + e - 1]];
                    let ok = match kind {
                        Kind::Goods => v >= 0 && inner.iter().all(|&w| w <= v),
                        Kind::Chores => v <= 0 && inner.iter().all(|&w| w >= v),
                    };
                    if !ok {
                        return Err(bad(format!(
                            "table is not monotone for {} at [{},{}]",
                            kind,
                            s + 1,
                            e
                        )));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Sorted distinct utilities any agent can get from any connected bundle,
/// together with the empty-bundle value 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizableUtilityList {
    values: Vec<i64>,
    u_max: i64,
}

impl RealizableUtilityList {
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn u_max(&self) -> i64 {
        self.u_max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, v: i64) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    /// Smallest listed value strictly above `v`.
    pub fn successor(&self, v: i64) -> Option<i64> {
        let idx = self.values.partition_point(|&x| x <= v);
        self.values.get(idx).copied()
    }
}

pub fn realizable_utilities(inst: &Instance) -> RealizableUtilityList {
    let mut values = vec![0i64];
    for a in 0..inst.n() {
        for s in 0..inst.m() {
            for e in s + 1..=inst.m() {
                values.push(inst.value(a, s, e));
            }
        }
    }
    values.sort_unstable();
    values.dedup();
    RealizableUtilityList { values, u_max: inst.u_max() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heavy_tail() -> Instance {
        Instance::goods(&vec![vec![1, 1, 1, 1, 1, 1, 12]; 3]).unwrap()
    }

    #[test]
    fn bundle_value_matches_sum() {
        let inst = heavy_tail();
        assert_eq!(inst.bundle_value(0, Interval::from_one_based(1, 3)).unwrap(), 3);
        assert_eq!(inst.bundle_value(2, None).unwrap(), 0);
        assert_eq!(inst.bundle_value(1, Interval::from_one_based(1, 7)).unwrap(), 18);
    }

    #[test]
    fn out_of_range_interval_is_rejected() {
        let inst = heavy_tail();
        let err = inst.bundle_value(0, Interval::from_one_based(6, 8)).unwrap_err();
        assert_eq!(err, Error::InvalidInterval { first: 6, last: 8, m: 7 });
        assert!(matches!(inst.bundle_value(5, None), Err(Error::UnknownAgent(_))));
    }

    #[test]
    fn realizable_list_of_heavy_tail() {
        let list = realizable_utilities(&heavy_tail());
        assert_eq!(list.values(), &[0, 1, 2, 3, 4, 5, 6, 12, 13, 14, 15, 16, 17, 18]);
        assert_eq!(list.u_max(), 12);
        assert_eq!(list.successor(6), Some(12));
        assert_eq!(list.successor(18), None);
    }

    #[test]
    fn all_zero_list() {
        let inst = Instance::goods(&[vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(realizable_utilities(&inst).values(), &[0]);
    }

    #[test]
    fn unsafe_agent_list() {
        let inst = Instance::goods(&[
            vec![1, 1, 1, 0, 0, 0, 0, 0],
            vec![0, 0, 1, 1, 1, 1, 1, 0],
            vec![0, 0, 0, 1, 0, 1, 0, 1],
        ])
        .unwrap();
        assert_eq!(realizable_utilities(&inst).values(), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(Instance::goods(&[vec![1, -1]]).is_err());
        assert!(Instance::chores(&[vec![1, 0]]).is_err());
        assert!(Instance::goods(&[vec![1, 2], vec![1]]).is_err());
        assert!(Instance::goods(&[]).is_err());
        let rows = vec![vec![1, 0], vec![1]];
        let table = IntervalTable::from_rows(rows).unwrap();
        let err = Instance::new(2, Kind::Goods, vec![Agent::table("a", table)]).unwrap_err();
        assert!(err.to_string().contains("monotone"));
    }

    #[test]
    fn table_encoding_agrees_with_additive() {
        let inst = Instance::goods(&[vec![3, 0, 2, 5], vec![1, 1, 0, 4]]).unwrap();
        let tab = inst.to_interval_tables();
        assert!(!tab.is_additive());
        for a in 0..2 {
            for s in 0..=4 {
                for e in s..=4 {
                    assert_eq!(inst.value(a, s, e), tab.value(a, s, e));
                }
            }
        }
    }

    #[test]
    fn binary_detection() {
        let inst = Instance::goods(&[vec![1, 0, 1]]).unwrap();
        assert!(inst.is_binary());
        let inst = Instance::goods(&[vec![1, 3, 1, 0], vec![0, 0, 0, 2]]).unwrap();
        assert!(matches!(inst.require_binary(), Err(Error::NotBinary(_))));
        assert!(!inst.to_interval_tables().is_binary());
    }
}
