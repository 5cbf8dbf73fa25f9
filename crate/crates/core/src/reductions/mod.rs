//! LNES formulas and the path instances compiled from them.

mod gadgets;
mod lnes;

pub use gadgets::{
    build_ef1_po_doubled_instance, build_ef1_po_instance, build_eq1_po_instance, build_gadget, build_nw_instance,
    ef1_po_structure_holds, eq1_po_profile_holds, forward_map, reverse_map_nw, AgentRole, AuxSide, CoreSlot,
    GadgetKind, GadgetLayout, GoodRole,
};
pub use lnes::{
    check_assignment, find_satisfying, random_lnes, validate_lnes, LnesAssignment, LnesInstance, RawLiteral,
    RawLnes, ShadowKind, ShadowVar, Var,
};

use crate::error::Result;
use crate::model::{Agent, Instance, Kind};

/// Binary goods to chores by subtracting one from every value.
pub fn to_chores(inst: &Instance) -> Result<Instance> {
    inst.require_kind(Kind::Goods)?;
    inst.require_binary()?;
    let agents = (0..inst.n())
        .map(|a| Agent::additive(inst.name(a), (0..inst.m()).map(|g| inst.single(a, g) - 1).collect()))
        .collect();
    Instance::new(inst.m(), Kind::Chores, agents)
}
