use pathfair::fixtures;
use pathfair::metrics::{is_ef1, is_eq1, is_nw, is_po, utilities};
use pathfair::oracle::{exists_meeting_bounds, exists_nonwasteful};
use pathfair::reductions::{
    build_ef1_po_instance, build_eq1_po_instance, build_nw_instance, check_assignment, ef1_po_structure_holds,
    eq1_po_profile_holds, find_satisfying, forward_map, random_lnes, reverse_map_nw, to_chores, AgentRole,
    LnesAssignment, LnesInstance,
};
use pathfair::{EnumerationBudget, Error, Kind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

fn small_formulas() -> Vec<LnesInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut all = vec![fixtures::lnes_p1(), fixtures::lnes_p2_sat(), fixtures::lnes_p2_unsat()];
    all.extend((0..12).map(|_| random_lnes(2, &mut rng)));
    all
}

#[test]
fn nw_gadget_tracks_satisfiability() {
    for lnes in small_formulas() {
        let (inst, layout) = build_nw_instance(&lnes);
        let witness = exists_nonwasteful(&inst, &budget()).unwrap();
        assert_eq!(witness.is_some(), find_satisfying(&lnes).is_some(), "p = {}", lnes.p());
        if let Some(a) = witness {
            let tau = reverse_map_nw(&inst, &layout, &a).unwrap();
            assert!(check_assignment(&lnes, &tau));
        }
    }
}

#[test]
fn forward_maps_round_trip() {
    for lnes in small_formulas() {
        let (inst, layout) = build_nw_instance(&lnes);
        for bits in 0u32..1 << lnes.p() {
            let main: Vec<bool> = (0..lnes.p()).map(|i| bits >> i & 1 == 1).collect();
            let tau = LnesAssignment::from_main(&main);
            match forward_map(&lnes, &layout, &tau) {
                Ok(a) => {
                    assert!(is_nw(&inst, &a));
                    assert_eq!(reverse_map_nw(&inst, &layout, &a).unwrap(), tau);
                }
                Err(e) => {
                    assert_eq!(e, Error::NotSatisfying);
                    assert!(!check_assignment(&lnes, &tau));
                }
            }
        }
    }
}

#[test]
fn eq1_po_witness_has_fixed_profile() {
    let lnes = fixtures::lnes_p1();
    let (inst, layout) = build_eq1_po_instance(&lnes);
    let bounds: Vec<i64> = layout.agents().iter().map(|&r| if r == AgentRole::Special { 3 } else { 2 }).collect();
    let a = exists_meeting_bounds(&inst, &bounds, &budget()).unwrap().expect("a witness exists");
    assert!(is_eq1(&inst, &a) && is_po(&inst, &a, &budget()).unwrap());
    assert!(eq1_po_profile_holds(&inst, &layout, &a));
    // nobody can be pushed higher without breaking the fixed profile
    for k in 0..inst.n() {
        let mut higher = bounds.clone();
        higher[k] += 1;
        if let Some(b) = exists_meeting_bounds(&inst, &higher, &budget()).unwrap() {
            assert!(!is_eq1(&inst, &b));
        }
    }
}

#[test]
fn ef1_po_witness_has_triplet_structure() {
    let lnes = fixtures::lnes_p1();
    let (inst, layout) = build_ef1_po_instance(&lnes);
    let mut found = 0;
    for x in [true, false] {
        let tau = LnesAssignment::from_main(&[x]);
        let prescribed = forward_map(&lnes, &layout, &tau).unwrap();
        let bounds = utilities(&inst, &prescribed);
        let a = exists_meeting_bounds(&inst, &bounds, &budget()).unwrap().expect("the forward map meets its own profile");
        if is_ef1(&inst, &a) && is_po(&inst, &a, &budget()).unwrap() {
            found += 1;
            assert!(ef1_po_structure_holds(&inst, &layout, &a));
        }
    }
    assert!(found > 0);
}

#[test]
fn chores_transform_of_gadget() {
    let (inst, _) = build_nw_instance(&fixtures::lnes_p2_sat());
    let c = to_chores(&inst).unwrap();
    assert_eq!(c.kind(), Kind::Chores);
    assert!((0..c.n()).all(|a| (0..c.m()).all(|g| matches!(c.single(a, g), -1 | 0))));
}
