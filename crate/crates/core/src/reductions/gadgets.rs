//! Path instances built from LNES formulas, with the maps between satisfying
//! assignments and allocations.
//!
//! Every gadget puts one block per main variable at the left end of the path.
//! In the plain block the four core goods `U_i, V_i, U'_i, V'_i` sit side by
//! side. In the padded block each core good has its shadow's two private
//! goods next to it:
//! `U_i p_i^1 p_i^2 r_i^1 r_i^2 V_i U'_i q_i^1 q_i^2 s_i^1 s_i^2 V'_i`.
//! Auxiliary goods for each clause come next, split by separator goods where
//! the gadget needs them, followed by the dummy goods of each variable.

use std::fmt;

use crate::allocation::{Allocation, Interval};
use crate::error::{Error, Result};
use crate::metrics::{is_nw, utilities};
use crate::model::{Agent, AgentId, Instance, Kind};

use super::lnes::{check_assignment, LnesAssignment, LnesInstance, ShadowKind, ShadowVar, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    /// Connected non-wasteful allocation exists iff the formula is satisfiable.
    Nw,
    /// Connected EQ1 and Pareto-optimal allocation exists iff satisfiable.
    Eq1Po,
    /// Connected EF1 and Pareto-optimal allocation exists iff satisfiable.
    Ef1Po,
    /// The EF1 gadget with two auxiliary goods per clause side.
    Ef1PoDoubled,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 4] = [GadgetKind::Nw, GadgetKind::Eq1Po, GadgetKind::Ef1Po, GadgetKind::Ef1PoDoubled];

    fn padded(self) -> bool {
        self != GadgetKind::Nw
    }

    fn doubled_aux(self) -> bool {
        matches!(self, GadgetKind::Eq1Po | GadgetKind::Ef1PoDoubled)
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GadgetKind::Nw => "nw",
            GadgetKind::Eq1Po => "eq1-po",
            GadgetKind::Ef1Po => "ef1-po",
            GadgetKind::Ef1PoDoubled => "ef1-po-doubled",
        })
    }
}

impl std::str::FromStr for GadgetKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        GadgetKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| format!("unknown gadget {s:?} (expected nw, eq1-po, ef1-po or ef1-po-doubled)"))
    }
}

/// Position of a core good inside its variable's block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoreSlot {
    U,
    V,
    UPrime,
    VPrime,
}

impl CoreSlot {
    /// The core clause a shadow variable occurs in negatively.
    pub fn of(kind: ShadowKind) -> CoreSlot {
        match kind {
            ShadowKind::P => CoreSlot::U,
            ShadowKind::R => CoreSlot::V,
            ShadowKind::Q => CoreSlot::UPrime,
            ShadowKind::S => CoreSlot::VPrime,
        }
    }

    fn positive(self) -> bool {
        matches!(self, CoreSlot::U | CoreSlot::V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxSide {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GoodRole {
    Core { var: usize, slot: CoreSlot },
    /// Private good of a shadow agent, `copy` is 1 or 2.
    ShadowCopy { shadow: ShadowVar, copy: u8 },
    /// `copy` is 0 where a separator is a single good.
    Separator { index: usize, copy: u8 },
    /// `copy` is 0 where each side is a single good.
    Aux { clause: usize, side: AuxSide, copy: u8 },
    /// `D_i` is copy 0 and `D'_i` copy 1 in pairs; triplets count 1..=3.
    Dummy { var: usize, copy: u8 },
    Special { copy: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentRole {
    Main { var: usize, positive: bool },
    Shadow(ShadowVar),
    Separator(usize),
    Special,
}

impl AgentRole {
    pub fn name(&self) -> String {
        match self {
            AgentRole::Main { var, positive: true } => format!("x_{}", var + 1),
            AgentRole::Main { var, positive: false } => format!("not_x_{}", var + 1),
            AgentRole::Shadow(s) => s.to_string(),
            AgentRole::Separator(i) => format!("sep_{i}"),
            AgentRole::Special => "special".to_string(),
        }
    }
}

/// Role of every good and agent in a built instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetLayout {
    kind: GadgetKind,
    p: usize,
    goods: Vec<GoodRole>,
    labels: Vec<String>,
    agents: Vec<AgentRole>,
}

impl GadgetLayout {
    pub fn kind(&self) -> GadgetKind {
        self.kind
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.goods.len()
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn good_role(&self, good: usize) -> GoodRole {
        self.goods[good]
    }

    pub fn goods(&self) -> &[GoodRole] {
        &self.goods
    }

    /// Figure label such as `U'_2`, `C_1^L` or `D_3`.
    pub fn label(&self, good: usize) -> &str {
        &self.labels[good]
    }

    pub fn agent_role(&self, agent: AgentId) -> AgentRole {
        self.agents[agent]
    }

    pub fn agents(&self) -> &[AgentRole] {
        &self.agents
    }

    pub fn position(&self, role: GoodRole) -> Option<usize> {
        self.goods.iter().position(|&r| r == role)
    }

    pub fn agent(&self, role: AgentRole) -> Option<AgentId> {
        self.agents.iter().position(|&r| r == role)
    }
}

fn core_label(var: usize, slot: CoreSlot) -> String {
    let i = var + 1;
    match slot {
        CoreSlot::U => format!("U_{i}"),
        CoreSlot::V => format!("V_{i}"),
        CoreSlot::UPrime => format!("U'_{i}"),
        CoreSlot::VPrime => format!("V'_{i}"),
    }
}

fn good_label(kind: GadgetKind, role: GoodRole) -> String {
    match role {
        GoodRole::Core { var, slot } => core_label(var, slot),
        GoodRole::ShadowCopy { shadow, copy } => format!("{shadow}^{copy}"),
        GoodRole::Separator { index, copy } => match kind {
            GadgetKind::Nw => format!("S_{index}"),
            GadgetKind::Eq1Po => format!("S_{index}^{copy}"),
            GadgetKind::Ef1Po | GadgetKind::Ef1PoDoubled => format!("S_{copy}"),
        },
        GoodRole::Aux { clause, side, copy } => {
            let s = if side == AuxSide::Left { "L" } else { "R" };
            if copy == 0 {
                format!("C_{}^{s}", clause + 1)
            } else {
                format!("C_{}^{s}{copy}", clause + 1)
            }
        }
        GoodRole::Dummy { var, copy } => {
            if kind == GadgetKind::Ef1Po || kind == GadgetKind::Ef1PoDoubled {
                format!("D_{}^{copy}", var + 1)
            } else if copy == 0 {
                format!("D_{}", var + 1)
            } else {
                format!("D'_{}", var + 1)
            }
        }
        GoodRole::Special { copy } => format!("S_{copy}"),
    }
}

fn good_order(kind: GadgetKind, p: usize) -> Vec<GoodRole> {
    let mut goods = Vec::new();
    let copies = |shadow: ShadowVar| (1..=2).map(move |copy| GoodRole::ShadowCopy { shadow, copy });
    for var in 0..p {
        let sh = |kind| ShadowVar { kind, index: var };
        let core = |slot| GoodRole::Core { var, slot };
        if kind.padded() {
            goods.push(core(CoreSlot::U));
            goods.extend(copies(sh(ShadowKind::P)));
            goods.extend(copies(sh(ShadowKind::R)));
            goods.push(core(CoreSlot::V));
            goods.push(core(CoreSlot::UPrime));
            goods.extend(copies(sh(ShadowKind::Q)));
            goods.extend(copies(sh(ShadowKind::S)));
            goods.push(core(CoreSlot::VPrime));
        } else {
            goods.extend([CoreSlot::U, CoreSlot::V, CoreSlot::UPrime, CoreSlot::VPrime].map(core));
        }
    }
    let aux_copies: &[u8] = if kind.doubled_aux() { &[1, 2] } else { &[0] };
    let aux = |clause, side| aux_copies.iter().map(move |&copy| GoodRole::Aux { clause, side, copy });
    match kind {
        GadgetKind::Nw | GadgetKind::Eq1Po => {
            let sep_copies: &[u8] = if kind == GadgetKind::Nw { &[0] } else { &[1, 2] };
            let sep = |index| sep_copies.iter().map(move |&copy| GoodRole::Separator { index, copy });
            goods.extend(sep(0));
            for j in 0..p {
                goods.extend(aux(j, AuxSide::Left));
                goods.extend(sep(j + 1));
                goods.extend(aux(j, AuxSide::Right));
            }
            for var in 0..p {
                goods.extend((0..2).map(|copy| GoodRole::Dummy { var, copy }));
            }
            if kind == GadgetKind::Eq1Po {
                goods.extend((1..=3).map(|copy| GoodRole::Special { copy }));
            }
        }
        GadgetKind::Ef1Po | GadgetKind::Ef1PoDoubled => {
            goods.extend((1..=2).map(|copy| GoodRole::Separator { index: 0, copy }));
            for j in 0..p {
                goods.extend(aux(j, AuxSide::Left));
                goods.extend(aux(j, AuxSide::Right));
            }
            for var in 0..p {
                goods.extend((1..=3).map(|copy| GoodRole::Dummy { var, copy }));
            }
        }
    }
    goods
}

fn agent_order(kind: GadgetKind, p: usize) -> Vec<AgentRole> {
    let mut agents = Vec::new();
    for var in 0..p {
        agents.push(AgentRole::Main { var, positive: true });
        agents.push(AgentRole::Main { var, positive: false });
    }
    for index in 0..p {
        agents.extend(ShadowKind::ALL.map(|kind| AgentRole::Shadow(ShadowVar { kind, index })));
    }
    match kind {
        GadgetKind::Nw | GadgetKind::Eq1Po => agents.extend((0..=p).map(AgentRole::Separator)),
        GadgetKind::Ef1Po | GadgetKind::Ef1PoDoubled => agents.push(AgentRole::Separator(0)),
    }
    if kind == GadgetKind::Eq1Po {
        agents.push(AgentRole::Special);
    }
    agents
}

fn approves(kind: GadgetKind, lnes: &LnesInstance, agent: AgentRole, good: GoodRole) -> bool {
    match (agent, good) {
        (AgentRole::Main { var, positive }, GoodRole::Core { var: v, slot }) => var == v && slot.positive() == positive,
        (AgentRole::Main { var, .. }, GoodRole::Dummy { var: v, .. }) => var == v,
        (AgentRole::Shadow(y), GoodRole::Core { var, slot }) => {
            !kind.padded() && y.index == var && CoreSlot::of(y.kind) == slot
        }
        (AgentRole::Shadow(y), GoodRole::ShadowCopy { shadow, .. }) => y == shadow,
        (AgentRole::Shadow(y), GoodRole::Aux { clause, .. }) => lnes.clause_of(y) == clause,
        (AgentRole::Separator(i), GoodRole::Separator { index, .. }) => i == index,
        (AgentRole::Special, GoodRole::Special { .. }) => true,
        _ => false,
    }
}

pub fn build_gadget(kind: GadgetKind, lnes: &LnesInstance) -> (Instance, GadgetLayout) {
    let p = lnes.p();
    let goods = good_order(kind, p);
    let agents = agent_order(kind, p);
    let labels = goods.iter().map(|&g| good_label(kind, g)).collect();
    let inst_agents = agents
        .iter()
        .map(|&a| Agent::additive(a.name(), goods.iter().map(|&g| approves(kind, lnes, a, g) as i64).collect()))
        .collect();
    let inst = Instance::new(goods.len(), Kind::Goods, inst_agents).expect("gadget instances are well formed");
    (inst, GadgetLayout { kind, p, goods, labels, agents })
}

pub fn build_nw_instance(lnes: &LnesInstance) -> (Instance, GadgetLayout) {
    build_gadget(GadgetKind::Nw, lnes)
}

pub fn build_eq1_po_instance(lnes: &LnesInstance) -> (Instance, GadgetLayout) {
    build_gadget(GadgetKind::Eq1Po, lnes)
}

pub fn build_ef1_po_instance(lnes: &LnesInstance) -> (Instance, GadgetLayout) {
    build_gadget(GadgetKind::Ef1Po, lnes)
}

pub fn build_ef1_po_doubled_instance(lnes: &LnesInstance) -> (Instance, GadgetLayout) {
    build_gadget(GadgetKind::Ef1PoDoubled, lnes)
}

/// The allocation a satisfying assignment prescribes.
///
/// For each variable the agent whose literal is true (the lucky one) takes
/// its core goods, together with everything between them in a padded block;
/// the other main agent takes the dummies. Shadows that are false take their
/// core good (and their private goods when padded). In each auxiliary clause
/// the first true shadow takes the left goods and the second the right goods.
pub fn forward_map(lnes: &LnesInstance, layout: &GadgetLayout, tau: &LnesAssignment) -> Result<Allocation> {
    if lnes.p() != layout.p() {
        return Err(Error::MalformedLayout(format!(
            "layout is for p = {}, formula has p = {}",
            layout.p(),
            lnes.p()
        )));
    }
    if !check_assignment(lnes, tau) {
        return Err(Error::NotSatisfying);
    }
    let mut owner: Vec<Option<AgentRole>> = vec![None; layout.m()];
    let mut true_in_clause: Vec<Vec<ShadowVar>> = vec![Vec::new(); lnes.p()];
    for (j, clause) in lnes.aux_clauses().iter().enumerate() {
        true_in_clause[j] = clause.iter().copied().filter(|&s| tau.get(Var::Shadow(s))).collect();
    }
    for (g, &role) in layout.goods().iter().enumerate() {
        owner[g] = Some(match role {
            GoodRole::Separator { index, .. } => AgentRole::Separator(index),
            GoodRole::Special { .. } => AgentRole::Special,
            GoodRole::Dummy { var, .. } => AgentRole::Main { var, positive: !tau.get(Var::Main(var)) },
            GoodRole::Aux { clause, side, .. } => {
                let k = if side == AuxSide::Left { 0 } else { 1 };
                AgentRole::Shadow(true_in_clause[clause][k])
            }
            GoodRole::Core { var, slot } => {
                let x = tau.get(Var::Main(var));
                if slot.positive() == x {
                    AgentRole::Main { var, positive: x }
                } else {
                    let kind = ShadowKind::ALL.into_iter().find(|&k| CoreSlot::of(k) == slot).expect("four slots");
                    AgentRole::Shadow(ShadowVar { kind, index: var })
                }
            }
            GoodRole::ShadowCopy { shadow, .. } => {
                let x = tau.get(Var::Main(shadow.index));
                if tau.get(Var::Shadow(shadow)) {
                    // a true shadow sits on the lucky side; its private goods
                    // fall between the lucky agent's core goods
                    AgentRole::Main { var: shadow.index, positive: x }
                } else {
                    AgentRole::Shadow(shadow)
                }
            }
        });
    }
    let mut bundles: Vec<Option<Interval>> = vec![None; layout.n()];
    for (g, role) in owner.iter().enumerate() {
        let a = layout.agent(role.expect("every good has an owner")).expect("role present in layout");
        bundles[a] = match bundles[a] {
            None => Interval::new(g, g + 1),
            Some(iv) if iv.end() == g => Interval::new(iv.start(), g + 1),
            Some(_) => {
                return Err(Error::MalformedLayout(format!(
                    "bundle of {} is not contiguous at {}",
                    layout.agent_role(a).name(),
                    layout.label(g)
                )))
            }
        };
    }
    Ok(Allocation::from_bundles(bundles))
}

/// Reads an assignment off a connected non-wasteful allocation of a
/// non-wasteful gadget. `x_i` is false exactly when its positive agent holds
/// a dummy good; a shadow is true exactly when its agent holds an auxiliary
/// good.
pub fn reverse_map_nw(inst: &Instance, layout: &GadgetLayout, alloc: &Allocation) -> Result<LnesAssignment> {
    if layout.kind() != GadgetKind::Nw {
        return Err(Error::MalformedLayout(format!("expected an nw layout, got {}", layout.kind())));
    }
    if inst.m() != layout.m() || inst.n() != layout.n() || alloc.n() != layout.n() {
        return Err(Error::MalformedLayout(format!(
            "layout has {} goods and {} agents, instance has {} and {}, allocation has {} agents",
            layout.m(),
            layout.n(),
            inst.m(),
            inst.n(),
            alloc.n()
        )));
    }
    if !is_nw(inst, alloc) {
        return Err(Error::NotNonWasteful);
    }
    let holds = |role: AgentRole, pred: &dyn Fn(GoodRole) -> bool| {
        let a = layout.agent(role).expect("role present in layout");
        alloc.bundle(a).is_some_and(|iv| iv.goods().any(|g| pred(layout.good_role(g))))
    };
    let mut tau = LnesAssignment::all_false(layout.p());
    for var in 0..layout.p() {
        let unlucky_positive = holds(AgentRole::Main { var, positive: true }, &|g| matches!(g, GoodRole::Dummy { .. }));
        tau.set(Var::Main(var), !unlucky_positive);
        for kind in ShadowKind::ALL {
            let y = ShadowVar { kind, index: var };
            tau.set(Var::Shadow(y), holds(AgentRole::Shadow(y), &|g| matches!(g, GoodRole::Aux { .. })));
        }
    }
    Ok(tau)
}

/// The special agent has utility 3 and every other agent utility 2.
pub fn eq1_po_profile_holds(inst: &Instance, layout: &GadgetLayout, alloc: &Allocation) -> bool {
    layout.kind() == GadgetKind::Eq1Po
        && utilities(inst, alloc)
            .iter()
            .zip(layout.agents())
            .all(|(&u, &role)| u == if role == AgentRole::Special { 3 } else { 2 })
}

/// The separator agent has utility 2 and, for every variable, exactly one of
/// the two main agents holds all three dummies.
pub fn ef1_po_structure_holds(inst: &Instance, layout: &GadgetLayout, alloc: &Allocation) -> bool {
    if !matches!(layout.kind(), GadgetKind::Ef1Po | GadgetKind::Ef1PoDoubled) {
        return false;
    }
    let sep = layout.agent(AgentRole::Separator(0)).expect("separator present");
    if inst.bundle_value(sep, alloc.bundle(sep)).ok() != Some(2) {
        return false;
    }
    (0..layout.p()).all(|var| {
        let holds_triplet = |positive| {
            let a = layout.agent(AgentRole::Main { var, positive }).expect("main agent present");
            (1..=3).all(|copy| {
                let g = layout.position(GoodRole::Dummy { var, copy }).expect("dummy present");
                alloc.bundle(a).is_some_and(|iv| iv.contains(g))
            })
        };
        holds_triplet(true) != holds_triplet(false)
    })
}
