//! Small named instances with known answers. The same data ships as text
//! files under `fixtures/` at the repository root.

use crate::allocation::{AgentOrder, Allocation, Interval};
use crate::model::Instance;
use crate::reductions::{validate_lnes, LnesInstance, RawLiteral, RawLnes};

/// Three agents sharing `(1,1,1,1,1,1,12)`.
pub fn heavy_tail() -> Instance {
    Instance::goods(&vec![vec![1, 1, 1, 1, 1, 1, 12]; 3]).expect("valid")
}

/// `(∅, [1,6], [7,7])` on [`heavy_tail`]: equal up to the largest value but
/// not EQ1.
pub fn heavy_tail_lopsided() -> Allocation {
    Allocation::new(
        AgentOrder::identity(3),
        vec![None, Interval::from_one_based(1, 6), Interval::from_one_based(7, 7)],
    )
    .expect("valid")
}

/// Two agents where a non-wasteful allocation is dominated by a wasteful one.
pub fn wasteful_dominates() -> Instance {
    Instance::goods(&[vec![1, 10, 0], vec![10, 1, 1]]).expect("valid")
}

/// `([1,1], [2,3])` on [`wasteful_dominates`].
pub fn wasteful_dominates_nw() -> Allocation {
    Allocation::from_bundles(vec![Interval::from_one_based(1, 1), Interval::from_one_based(2, 3)])
}

/// Binary instance where the greedy scan at `θ + 1` fails from the second
/// agent on.
pub fn unsafe_demo() -> Instance {
    Instance::goods(&[
        vec![1, 1, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 1, 1, 1, 1, 1, 0],
        vec![0, 0, 0, 1, 0, 1, 0, 1],
    ])
    .expect("valid")
}

/// Binary instance where the plain egalitarian output is dominated within
/// its order.
pub fn postar_gap() -> Instance {
    Instance::goods(&[vec![1, 0, 0, 1, 0], vec![0, 1, 1, 0, 0], vec![0, 0, 0, 1, 1]]).expect("valid")
}

/// Under the identity order no complete allocation is both EQ1 and Pareto
/// optimal.
pub fn po_breaks_eq1() -> Instance {
    Instance::goods(&[vec![1, 0, 0, 0, 0], vec![0, 1, 0, 0, 0], vec![0, 0, 1, 1, 1]]).expect("valid")
}

pub fn nonbinary_postar() -> Instance {
    Instance::goods(&[vec![1, 3, 1, 0], vec![0, 0, 0, 2]]).expect("valid")
}

/// Chores instance whose best worst-off utility needs an allocation that is
/// not EQ1.
pub fn chores_gap() -> Instance {
    Instance::chores(&[vec![-1, -1, -1, -1], vec![0, 0, 0, -10]]).expect("valid")
}

fn lnes(p: usize, clauses: &[[&str; 4]]) -> LnesInstance {
    let aux = clauses
        .iter()
        .map(|c| c.iter().map(|v| RawLiteral { var: v.parse().expect("name"), positive: true }).collect())
        .collect();
    validate_lnes(&RawLnes { p, aux }).expect("valid")
}

pub fn lnes_p1() -> LnesInstance {
    LnesInstance::single()
}

/// Satisfied by `x_1 = x_2 = 1`.
pub fn lnes_p2_sat() -> LnesInstance {
    lnes(2, &[["p_1", "r_1", "q_2", "s_2"], ["q_1", "s_1", "p_2", "r_2"]])
}

pub fn lnes_p2_unsat() -> LnesInstance {
    lnes(2, &[["p_1", "r_1", "p_2", "q_2"], ["q_1", "s_1", "r_2", "s_2"]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{check_assignment, find_satisfying, LnesAssignment};

    #[test]
    fn lnes_fixtures() {
        assert!(find_satisfying(&lnes_p1()).is_some());
        assert!(check_assignment(&lnes_p2_sat(), &LnesAssignment::from_main(&[true, true])));
        assert!(find_satisfying(&lnes_p2_unsat()).is_none());
    }

    #[test]
    fn allocations_fit() {
        assert_eq!(heavy_tail_lopsided().to_string(), "(∅, [1,6], [7,7])");
        assert_eq!(wasteful_dominates_nw().to_string(), "([1,1], [2,3])");
    }
}
