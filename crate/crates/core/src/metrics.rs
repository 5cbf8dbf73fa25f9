//! Fairness and efficiency predicates, welfare figures and sparsity.
//!
//! Removal-based predicates (EQ1, EF1 and their relaxations) quantify over
//! single goods for additive valuations and over the two boundary goods for
//! interval tables, where only those removals are defined.

use std::fmt;
use std::str::FromStr;

use crate::allocation::{validate_allocation, Allocation, Interval};
use crate::error::{Error, Result};
use crate::model::{AgentId, Instance, Kind, Valuation};
use crate::oracle::{self, EnumerationBudget, Within};

pub fn utilities(inst: &Instance, alloc: &Allocation) -> Vec<i64> {
    (0..inst.n())
        .map(|a| match alloc.bundle(a) {
            Some(iv) => inst.value(a, iv.start(), iv.end()),
            None => 0,
        })
        .collect()
}

pub fn utilitarian_welfare(inst: &Instance, alloc: &Allocation) -> i64 {
    utilities(inst, alloc).iter().sum()
}

pub fn egalitarian_welfare(inst: &Instance, alloc: &Allocation) -> i64 {
    utilities(inst, alloc).into_iter().min().unwrap_or(0)
}

/// Lowest value `agent` can have for `bundle` after one removal.
pub(crate) fn min_residual(inst: &Instance, agent: AgentId, bundle: Interval) -> i64 {
    let (s, e) = (bundle.start(), bundle.end());
    match &inst.agents()[agent].valuation {
        Valuation::Additive(vals) => {
            inst.value(agent, s, e) - vals[s..e].iter().copied().max().unwrap_or(0)
        }
        Valuation::IntervalTable(_) => inst.value(agent, s + 1, e).min(inst.value(agent, s, e - 1)),
    }
}

/// Highest value `agent` can have for `bundle` after one removal.
pub(crate) fn max_residual(inst: &Instance, agent: AgentId, bundle: Interval) -> i64 {
    let (s, e) = (bundle.start(), bundle.end());
    match &inst.agents()[agent].valuation {
        Valuation::Additive(vals) => {
            inst.value(agent, s, e) - vals[s..e].iter().copied().min().unwrap_or(0)
        }
        Valuation::IntervalTable(_) => inst.value(agent, s + 1, e).max(inst.value(agent, s, e - 1)),
    }
}

pub fn is_eq(inst: &Instance, alloc: &Allocation) -> bool {
    let u = utilities(inst, alloc);
    u.windows(2).all(|w| w[0] == w[1])
}

pub fn is_eq1(inst: &Instance, alloc: &Allocation) -> bool {
    is_alpha_eq1(inst, alloc, Alpha::ONE)
}

pub fn is_alpha_eq1(inst: &Instance, alloc: &Allocation, alpha: Alpha) -> bool {
    let u = utilities(inst, alloc);
    let lowest = u.iter().copied().min().unwrap_or(0);
    (0..inst.n()).all(|k| match alloc.bundle(k) {
        None => true,
        Some(iv) => alpha.den * lowest >= alpha.num * min_residual(inst, k, iv),
    })
}

pub fn is_ef(inst: &Instance, alloc: &Allocation) -> bool {
    let u = utilities(inst, alloc);
    (0..inst.n()).all(|i| {
        (0..inst.n()).all(|k| match alloc.bundle(k) {
            None => true,
            Some(iv) => u[i] >= inst.value(i, iv.start(), iv.end()),
        })
    })
}

pub fn is_ef1(inst: &Instance, alloc: &Allocation) -> bool {
    is_alpha_ef1(inst, alloc, Alpha::ONE)
}

pub fn is_alpha_ef1(inst: &Instance, alloc: &Allocation, alpha: Alpha) -> bool {
    let u = utilities(inst, alloc);
    (0..inst.n()).all(|i| {
        (0..inst.n()).filter(|&k| k != i).all(|k| match alloc.bundle(k) {
            None => true,
            Some(iv) => alpha.den * u[i] >= alpha.num * min_residual(inst, i, iv),
        })
    })
}

/// Every pairwise utility gap is at most the largest single-good value.
pub fn is_umax_eq(inst: &Instance, alloc: &Allocation) -> bool {
    let u = utilities(inst, alloc);
    let (lo, hi) = (u.iter().min().unwrap(), u.iter().max().unwrap());
    hi - lo <= inst.u_max()
}

pub fn is_complete(inst: &Instance, alloc: &Allocation) -> bool {
    validate_allocation(inst, alloc).is_ok_and(|r| r.complete)
}

/// Complete, and every good goes to an agent that values it positively.
pub fn is_nw(inst: &Instance, alloc: &Allocation) -> bool {
    is_complete(inst, alloc)
        && (0..inst.n()).all(|a| match alloc.bundle(a) {
            None => true,
            Some(iv) => iv.goods().all(|g| inst.single(a, g) > 0),
        })
}

/// No complete connected allocation, under any order, Pareto-dominates.
pub fn is_po(inst: &Instance, alloc: &Allocation, budget: &EnumerationBudget) -> Result<bool> {
    oracle::pareto_undominated(inst, alloc, Within::All, budget)
}

/// EQ1 for chores: each non-empty bundle can drop one chore of its own so its
/// owner is no worse off than anyone else.
pub fn is_eq1_chores(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    inst.require_kind(Kind::Chores)?;
    let u = utilities(inst, alloc);
    Ok((0..inst.n()).all(|i| {
        let best_other = (0..inst.n()).filter(|&k| k != i).map(|k| u[k]).max();
        match (alloc.bundle(i), best_other) {
            (None, _) | (_, None) => true,
            (Some(iv), Some(other)) => max_residual(inst, i, iv) >= other,
        }
    }))
}

/// Smallest `(a, b)`: each agent approves at most `a` goods, each good is
/// approved by at most `b` agents.
pub fn sparsity(inst: &Instance) -> Result<(usize, usize)> {
    inst.require_binary()?;
    let a = (0..inst.n())
        .map(|i| (0..inst.m()).filter(|&g| inst.single(i, g) == 1).count())
        .max()
        .unwrap_or(0);
    let b = (0..inst.m())
        .map(|g| (0..inst.n()).filter(|&i| inst.single(i, g) == 1).count())
        .max()
        .unwrap_or(0);
    Ok((a, b))
}

/// A rational factor in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alpha {
    num: i64,
    den: i64,
}

impl Alpha {
    pub const ONE: Alpha = Alpha { num: 1, den: 1 };
    pub const ZERO: Alpha = Alpha { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 || num < 0 || num > den {
            return Err(Error::InvalidAlpha(format!("{num}/{den}")));
        }
        Ok(Alpha { num, den })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidAlpha(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Alpha::new(num, den)
    }
}

/// A named predicate that `check` can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Connected,
    Disjoint,
    SigmaConsistent,
    Complete,
    Eq,
    Eq1,
    Ef,
    Ef1,
    AlphaEq1(Alpha),
    AlphaEf1(Alpha),
    UmaxEq,
    Nw,
    Po,
    Eq1Chores,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Connected => f.write_str("connected"),
            Property::Disjoint => f.write_str("disjoint"),
            Property::SigmaConsistent => f.write_str("sigma-consistent"),
            Property::Complete => f.write_str("complete"),
            Property::Eq => f.write_str("eq"),
            Property::Eq1 => f.write_str("eq1"),
            Property::Ef => f.write_str("ef"),
            Property::Ef1 => f.write_str("ef1"),
            Property::AlphaEq1(a) => write!(f, "alpha-eq1={a}"),
            Property::AlphaEf1(a) => write!(f, "alpha-ef1={a}"),
            Property::UmaxEq => f.write_str("umax-eq"),
            Property::Nw => f.write_str("nw"),
            Property::Po => f.write_str("po"),
            Property::Eq1Chores => f.write_str("eq1-chores"),
        }
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        if let Some(rest) = s.strip_prefix("alpha-eq1=") {
            return rest.parse().map(Property::AlphaEq1).map_err(|e: Error| e.to_string());
        }
        if let Some(rest) = s.strip_prefix("alpha-ef1=") {
            return rest.parse().map(Property::AlphaEf1).map_err(|e: Error| e.to_string());
        }
        Ok(match s.as_str() {
            "connected" => Property::Connected,
            "disjoint" => Property::Disjoint,
            "sigma-consistent" => Property::SigmaConsistent,
            "complete" => Property::Complete,
            "eq" => Property::Eq,
            "eq1" => Property::Eq1,
            "ef" => Property::Ef,
            "ef1" => Property::Ef1,
            "umax-eq" => Property::UmaxEq,
            "nw" => Property::Nw,
            "po" => Property::Po,
            "eq1-chores" => Property::Eq1Chores,
            other => return Err(format!("unknown property {other:?}")),
        })
    }
}

/// Predicate results for one allocation, in request order, plus welfare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub results: Vec<(Property, bool)>,
    pub utility_profile: Vec<i64>,
    pub utilitarian_welfare: i64,
    pub egalitarian_welfare: i64,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|&(_, ok)| ok)
    }

    pub fn get(&self, prop: Property) -> Option<bool> {
        self.results.iter().find(|(p, _)| *p == prop).map(|&(_, ok)| ok)
    }
}

pub fn check(
    inst: &Instance,
    alloc: &Allocation,
    props: &[Property],
    budget: &EnumerationBudget,
) -> Result<CheckReport> {
    let structure = validate_allocation(inst, alloc)?;
    let mut results = Vec::with_capacity(props.len());
    for &prop in props {
        let ok = match prop {
            Property::Connected => structure.connected,
            Property::Disjoint => structure.disjoint,
            Property::SigmaConsistent => structure.sigma_consistent,
            Property::Complete => structure.complete,
            Property::Eq => is_eq(inst, alloc),
            Property::Eq1 => is_eq1(inst, alloc),
            Property::Ef => is_ef(inst, alloc),
            Property::Ef1 => is_ef1(inst, alloc),
            Property::AlphaEq1(a) => is_alpha_eq1(inst, alloc, a),
            Property::AlphaEf1(a) => is_alpha_ef1(inst, alloc, a),
            Property::UmaxEq => is_umax_eq(inst, alloc),
            Property::Nw => is_nw(inst, alloc),
            Property::Po => is_po(inst, alloc, budget)?,
            Property::Eq1Chores => is_eq1_chores(inst, alloc)?,
        };
        results.push((prop, ok));
    }
    let utility_profile = utilities(inst, alloc);
    Ok(CheckReport {
        results,
        utilitarian_welfare: utility_profile.iter().sum(),
        egalitarian_welfare: utility_profile.iter().copied().min().unwrap_or(0),
        utility_profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocation::AgentOrder;

    fn iv(a: usize, b: usize) -> Option<Interval> {
        Interval::from_one_based(a, b)
    }

    fn alloc(bundles: Vec<Option<Interval>>) -> Allocation {
        Allocation::new(AgentOrder::identity(bundles.len()), bundles).unwrap()
    }

    fn heavy_tail() -> Instance {
        Instance::goods(&vec![vec![1, 1, 1, 1, 1, 1, 12]; 3]).unwrap()
    }

    #[test]
    fn heavy_tail_eq1_and_umax() {
        let inst = heavy_tail();
        let lopsided = alloc(vec![None, iv(1, 6), iv(7, 7)]);
        assert!(!is_eq1(&inst, &lopsided));
        assert!(is_umax_eq(&inst, &lopsided));
        let balanced = alloc(vec![iv(1, 3), iv(4, 6), iv(7, 7)]);
        assert!(is_eq1(&inst, &balanced));
        assert_eq!(utilities(&inst, &balanced), vec![3, 3, 12]);
    }

    #[test]
    fn alpha_relaxation() {
        let inst = heavy_tail();
        let lopsided = alloc(vec![None, iv(1, 6), iv(7, 7)]);
        assert!(!is_alpha_eq1(&inst, &lopsided, Alpha::new(1, 5).unwrap()));
        assert!(is_alpha_eq1(&inst, &lopsided, Alpha::ZERO));
        assert!(Alpha::new(3, 2).is_err());
        assert!("-1/2".parse::<Alpha>().is_err());
        assert_eq!("2/3".parse::<Alpha>().unwrap(), Alpha::new(2, 3).unwrap());
    }

    #[test]
    fn equal_profile_is_eq() {
        let inst = Instance::goods(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert!(is_eq(&inst, &alloc(vec![iv(1, 1), iv(2, 2)])));
    }

    #[test]
    fn ef1_cases() {
        let inst = Instance::goods(&[vec![1, 1]]).unwrap();
        assert!(is_ef1(&inst, &alloc(vec![iv(1, 2)])));
        // agent 2 still values one good of agent 1's bundle after any removal
        let inst = Instance::goods(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(!is_ef1(&inst, &alloc(vec![iv(1, 2), None])));
        assert!(is_ef1(&inst, &alloc(vec![iv(1, 1), iv(2, 2)])));
    }

    #[test]
    fn wasteful_dominates_nonwasteful() {
        let inst = Instance::goods(&[vec![1, 10, 0], vec![10, 1, 1]]).unwrap();
        let a = alloc(vec![iv(1, 1), iv(2, 3)]);
        assert!(is_nw(&inst, &a));
        assert!(!is_po(&inst, &a, &EnumerationBudget::default()).unwrap());
        let b = alloc(vec![iv(2, 3), iv(1, 1)]);
        assert!(is_po(&inst, &b, &EnumerationBudget::default()).unwrap());
    }

    #[test]
    fn incomplete_is_not_nw() {
        let inst = Instance::goods(&[vec![1, 1, 1]]).unwrap();
        assert!(!is_nw(&inst, &alloc(vec![iv(1, 2)])));
    }

    #[test]
    fn po_of_three_block_instance() {
        let inst = Instance::goods(&[
            vec![1, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0],
            vec![0, 0, 1, 1, 1],
        ])
        .unwrap();
        let a = alloc(vec![iv(1, 1), iv(2, 2), iv(3, 5)]);
        assert!(is_po(&inst, &a, &EnumerationBudget::default()).unwrap());
        assert!(!is_eq1(&inst, &a));
    }

    #[test]
    fn chores_eq1() {
        let inst = Instance::chores(&[vec![-1, -1], vec![-1, -1]]).unwrap();
        assert!(is_eq1_chores(&inst, &alloc(vec![iv(1, 1), iv(2, 2)])).unwrap());
        assert!(!is_eq1_chores(&inst, &alloc(vec![iv(1, 2), None])).unwrap());
        let goods = heavy_tail();
        assert!(matches!(
            is_eq1_chores(&goods, &alloc(vec![iv(1, 7), None, None])),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn sparsity_counts() {
        let inst = Instance::goods(&[vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(sparsity(&inst).unwrap(), (0, 0));
        let inst = Instance::goods(&[vec![1, 1, 0], vec![1, 0, 0]]).unwrap();
        assert_eq!(sparsity(&inst).unwrap(), (2, 2));
        assert!(sparsity(&heavy_tail()).is_err());
    }

    #[test]
    fn property_names_round_trip() {
        for name in ["eq", "eq1", "ef", "ef1", "nw", "po", "complete", "umax-eq", "alpha-eq1=1/2", "alpha-ef1=2/3", "eq1-chores"] {
            let p: Property = name.parse().unwrap();
            assert_eq!(p.to_string(), name);
        }
        assert!("alpha-eq1=3/2".parse::<Property>().is_err());
        assert!("envy".parse::<Property>().is_err());
    }

    #[test]
    fn report_welfare() {
        let inst = heavy_tail();
        let a = alloc(vec![iv(1, 3), iv(4, 6), iv(7, 7)]);
        let r = check(&inst, &a, &[Property::Eq1, Property::Eq], &EnumerationBudget::default()).unwrap();
        assert_eq!(r.utilitarian_welfare, 18);
        assert_eq!(r.egalitarian_welfare, 3);
        assert_eq!(r.get(Property::Eq1), Some(true));
        assert!(!r.all_pass());
    }
}
