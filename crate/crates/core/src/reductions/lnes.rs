//! Linear near-exact satisfiability (LNES) formulas.
//!
//! A formula with parameter `p` has main variables `x_1..x_p` and shadow
//! variables `p_i, r_i, q_i, s_i`. The core clauses are fixed by `p`:
//! `U_i = {¬p_i, x_i}`, `V_i = {¬r_i, x_i}`, `U'_i = {¬q_i, ¬x_i}` and
//! `V'_i = {¬s_i, ¬x_i}`. Only the `p` auxiliary clauses vary: each lists
//! four shadow variables, and every shadow variable sits in exactly one of
//! them. An assignment satisfies the formula when each core clause has
//! exactly one true literal and each auxiliary clause exactly two.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShadowKind {
    P,
    R,
    Q,
    S,
}

impl ShadowKind {
    pub const ALL: [ShadowKind; 4] = [ShadowKind::P, ShadowKind::R, ShadowKind::Q, ShadowKind::S];

    fn letter(self) -> char {
        match self {
            ShadowKind::P => 'p',
            ShadowKind::R => 'r',
            ShadowKind::Q => 'q',
            ShadowKind::S => 's',
        }
    }

    fn slot(self) -> usize {
        self as usize
    }

    /// True when the shadow shares its core clause with `x_i` rather than `¬x_i`.
    pub fn is_positive_side(self) -> bool {
        matches!(self, ShadowKind::P | ShadowKind::R)
    }
}

/// Shadow variable `kind_{index+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShadowVar {
    pub kind: ShadowKind,
    pub index: usize,
}

impl fmt::Display for ShadowVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind.letter(), self.index + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Main(usize),
    Shadow(ShadowVar),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Main(i) => write!(f, "x_{}", i + 1),
            Var::Shadow(s) => s.fmt(f),
        }
    }
}

impl FromStr for Var {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("bad variable name {s:?} (expected x_i, p_i, r_i, q_i or s_i)");
        let (letter, num) = s.split_once('_').ok_or_else(bad)?;
        let i: usize = num.parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        let kind = match letter {
            "x" => return Ok(Var::Main(i - 1)),
            "p" => ShadowKind::P,
            "r" => ShadowKind::R,
            "q" => ShadowKind::Q,
            "s" => ShadowKind::S,
            _ => return Err(bad()),
        };
        Ok(Var::Shadow(ShadowVar { kind, index: i - 1 }))
    }
}

/// One literal as written in an auxiliary clause before validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawLiteral {
    pub var: Var,
    pub positive: bool,
}

/// Auxiliary clauses as read, not yet checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLnes {
    pub p: usize,
    pub aux: Vec<Vec<RawLiteral>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LnesInstance {
    p: usize,
    aux: Vec<[ShadowVar; 4]>,
    // clause_of[index * 4 + kind]
    clause_of: Vec<usize>,
}

pub fn validate_lnes(raw: &RawLnes) -> Result<LnesInstance> {
    let p = raw.p;
    let violation = |msg: String| Err(Error::StructureViolation(msg));
    if p == 0 {
        return violation("p must be at least 1".into());
    }
    if raw.aux.len() != p {
        return violation(format!("expected {p} auxiliary clauses, found {}", raw.aux.len()));
    }
    let mut clause_of = vec![usize::MAX; 4 * p];
    let mut aux = Vec::with_capacity(p);
    for (j, clause) in raw.aux.iter().enumerate() {
        if clause.len() != 4 {
            return violation(format!(
                "auxiliary clause C_{} has {} literals, expected 4",
                j + 1,
                clause.len()
            ));
        }
        let mut vars = [ShadowVar { kind: ShadowKind::P, index: 0 }; 4];
        for (k, lit) in clause.iter().enumerate() {
            let shadow = match lit.var {
                Var::Main(_) => {
                    return violation(format!(
                        "main variable {} occurs in auxiliary clause C_{}; main variables only occur in core clauses",
                        lit.var,
                        j + 1
                    ))
                }
                Var::Shadow(s) => s,
            };
            if !lit.positive {
                return violation(format!("shadow variable {shadow} occurs negated in auxiliary clause C_{}", j + 1));
            }
            if shadow.index >= p {
                return violation(format!("shadow variable {shadow} is out of range for p = {p}"));
            }
            let slot = shadow.index * 4 + shadow.kind.slot();
            if clause_of[slot] != usize::MAX {
                return violation(format!("shadow variable {shadow} occurs in more than one auxiliary position"));
            }
            clause_of[slot] = j;
            vars[k] = shadow;
        }
        aux.push(vars);
    }
    Ok(LnesInstance { p, aux, clause_of })
}

impl LnesInstance {
    /// The only formula with `p = 1`: all four shadow variables in `C_1`.
    pub fn single() -> Self {
        let vars = ShadowKind::ALL.map(|kind| ShadowVar { kind, index: 0 });
        LnesInstance { p: 1, aux: vec![vars], clause_of: vec![0; 4] }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn aux_clauses(&self) -> &[[ShadowVar; 4]] {
        &self.aux
    }

    pub fn clause_of(&self, v: ShadowVar) -> usize {
        self.clause_of[v.index * 4 + v.kind.slot()]
    }

    pub fn to_raw(&self) -> RawLnes {
        RawLnes {
            p: self.p,
            aux: self
                .aux
                .iter()
                .map(|c| c.iter().map(|&s| RawLiteral { var: Var::Shadow(s), positive: true }).collect())
                .collect(),
        }
    }
}

/// Uniformly random shadow partition for a given `p`.
pub fn random_lnes<R: Rng + ?Sized>(p: usize, rng: &mut R) -> LnesInstance {
    let mut shadows: Vec<ShadowVar> = (0..p)
        .flat_map(|index| ShadowKind::ALL.map(|kind| ShadowVar { kind, index }))
        .collect();
    shadows.shuffle(rng);
    let raw = RawLnes {
        p,
        aux: shadows
            .chunks(4)
            .map(|c| c.iter().map(|&s| RawLiteral { var: Var::Shadow(s), positive: true }).collect())
            .collect(),
    };
    validate_lnes(&raw).expect("a partition into fours is well formed")
}

/// Truth values for every main and shadow variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LnesAssignment {
    main: Vec<bool>,
    shadow: Vec<[bool; 4]>,
}

impl LnesAssignment {
    pub fn all_false(p: usize) -> Self {
        LnesAssignment { main: vec![false; p], shadow: vec![[false; 4]; p] }
    }

    /// Main values with every shadow set the one way its core clauses allow.
    pub fn from_main(main: &[bool]) -> Self {
        let shadow = main.iter().map(|&x| [x, x, !x, !x]).collect();
        LnesAssignment { main: main.to_vec(), shadow }
    }

    pub fn p(&self) -> usize {
        self.main.len()
    }

    pub fn get(&self, v: Var) -> bool {
        match v {
            Var::Main(i) => self.main[i],
            Var::Shadow(s) => self.shadow[s.index][s.kind.slot()],
        }
    }

    pub fn set(&mut self, v: Var, value: bool) {
        match v {
            Var::Main(i) => self.main[i] = value,
            Var::Shadow(s) => self.shadow[s.index][s.kind.slot()] = value,
        }
    }

    pub fn main_values(&self) -> &[bool] {
        &self.main
    }

    /// Every variable set to true, mains first.
    pub fn true_vars(&self) -> Vec<Var> {
        let mains = (0..self.p()).filter(|&i| self.main[i]).map(Var::Main);
        let shadows = (0..self.p()).flat_map(|index| {
            ShadowKind::ALL
                .into_iter()
                .filter(move |k| self.shadow[index][k.slot()])
                .map(move |kind| Var::Shadow(ShadowVar { kind, index }))
        });
        mains.chain(shadows).collect()
    }

    pub fn count_true_shadows(&self) -> usize {
        self.shadow.iter().flatten().filter(|&&b| b).count()
    }
}

pub fn check_assignment(lnes: &LnesInstance, tau: &LnesAssignment) -> bool {
    if tau.p() != lnes.p {
        return false;
    }
    let core_ok = (0..lnes.p).all(|i| {
        let x = tau.main[i];
        ShadowKind::ALL.into_iter().all(|kind| {
            let y = tau.shadow[i][kind.slot()];
            let side = if kind.is_positive_side() { x } else { !x };
            (!y) as u8 + side as u8 == 1
        })
    });
    core_ok
        && lnes
            .aux
            .iter()
            .all(|c| c.iter().filter(|&&s| tau.get(Var::Shadow(s))).count() == 2)
}

/// Exhaustive search over main values (shadows are forced by the core
/// clauses). First hit in binary counting order, `x_1` least significant.
pub fn find_satisfying(lnes: &LnesInstance) -> Option<LnesAssignment> {
    assert!(lnes.p < 32, "exhaustive search is meant for small formulas");
    (0u64..1 << lnes.p).find_map(|bits| {
        let main: Vec<bool> = (0..lnes.p).map(|i| bits >> i & 1 == 1).collect();
        let tau = LnesAssignment::from_main(&main);
        check_assignment(lnes, &tau).then_some(tau)
    })
}
