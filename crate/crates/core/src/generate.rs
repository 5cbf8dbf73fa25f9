//! Seeded random instances.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Agent, Instance, IntervalTable, Kind};

const DEFAULT_MAX: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// Additive values drawn from `0..=k`.
    Uniform(i64),
    /// Additive 0/1 values, each 1 with the given probability.
    Binary(f64),
    /// Each agent approves a random non-empty prefix or suffix.
    BinaryExtremal,
    /// One uniform row over `0..=k` shared by every agent.
    Identical(i64),
    /// Monotone interval tables with increments drawn from `0..=k`.
    Monotone(i64),
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Uniform(k) => write!(f, "uniform:{k}"),
            Profile::Binary(d) => write!(f, "binary:{d}"),
            Profile::BinaryExtremal => f.write_str("binary-extremal"),
            Profile::Identical(k) => write!(f, "identical:{k}"),
            Profile::Monotone(k) => write!(f, "monotone:{k}"),
        }
    }
}

/// `uniform[:K]`, `binary[:DENSITY]`, `binary-extremal`, `identical[:K]` or
/// `monotone[:K]`; a space works in place of the colon.
impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut parts = s.split(|c: char| c == ':' || c.is_whitespace()).filter(|p| !p.is_empty());
        let name = parts.next().unwrap_or("");
        let arg = parts.next();
        if parts.next().is_some() {
            return Err(format!("too many parameters in profile {s:?}"));
        }
        let int = |default: i64| -> std::result::Result<i64, String> {
            let k = arg.map_or(Ok(default), |a| a.parse().map_err(|_| format!("bad bound {a:?}")))?;
            if k < 0 {
                return Err(format!("bound {k} is negative"));
            }
            Ok(k)
        };
        match name {
            "uniform" => Ok(Profile::Uniform(int(DEFAULT_MAX)?)),
            "identical" => Ok(Profile::Identical(int(DEFAULT_MAX)?)),
            "monotone" => Ok(Profile::Monotone(int(DEFAULT_MAX)?)),
            "binary" => {
                let d: f64 = arg.map_or(Ok(0.5), |a| a.parse().map_err(|_| format!("bad density {a:?}")))?;
                if !(0.0..=1.0).contains(&d) {
                    return Err(format!("density {d} is outside [0, 1]"));
                }
                Ok(Profile::Binary(d))
            }
            "binary-extremal" if arg.is_none() => Ok(Profile::BinaryExtremal),
            _ => Err(format!(
                "unknown profile {s:?} (expected uniform, binary, binary-extremal, identical or monotone)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub m: usize,
    pub n: usize,
    pub kind: Kind,
    pub profile: Profile,
    pub seed: u64,
}

/// Same config, same instance. Chores are the goods draw negated.
pub fn generate(cfg: &GenConfig) -> Result<Instance> {
    if cfg.m == 0 || cfg.n == 0 {
        return Err(Error::InvalidInstance("need at least one good and one agent".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sign = if cfg.kind == Kind::Chores { -1 } else { 1 };
    let m = cfg.m;
    let name = |a: usize| format!("a{}", a + 1);
    let additive = |rows: Vec<Vec<i64>>| -> Vec<Agent> {
        rows.into_iter()
            .enumerate()
            .map(|(a, row)| Agent::additive(name(a), row.into_iter().map(|v| sign * v).collect()))
            .collect()
    };
    let agents = match cfg.profile {
        Profile::Uniform(k) => additive(
            (0..cfg.n)
                .map(|_| (0..m).map(|_| rng.gen_range(0..=k)).collect())
                .collect(),
        ),
        Profile::Binary(d) => additive(
            (0..cfg.n)
                .map(|_| (0..m).map(|_| rng.gen_bool(d) as i64).collect())
                .collect(),
        ),
        Profile::BinaryExtremal => additive(
            (0..cfg.n)
                .map(|_| {
                    let len = rng.gen_range(1..=m);
                    let prefix = rng.gen_bool(0.5);
                    (0..m)
                        .map(|g| if prefix { g < len } else { g >= m - len } as i64)
                        .collect()
                })
                .collect(),
        ),
        Profile::Identical(k) => {
            let row: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=k)).collect();
            additive(vec![row; cfg.n])
        }
        Profile::Monotone(k) => (0..cfg.n)
            .map(|a| {
                // t[l][len - 1]: each interval extends the better of its two
                // maximal sub-intervals
                let mut t: Vec<Vec<i64>> = (0..m).map(|l| vec![0; m - l]).collect();
                for len in 1..=m {
                    for l in 0..=m - len {
                        let base = if len == 1 { 0 } else { t[l + 1][len - 2].max(t[l][len - 2]) };
                        t[l][len - 1] = base + rng.gen_range(0..=k);
                    }
                }
                let rows = t.into_iter().map(|row| row.into_iter().map(|v| sign * v).collect()).collect();
                Agent::table(name(a), IntervalTable::from_rows(rows).expect("triangular rows"))
            })
            .collect(),
    };
    Instance::new(m, cfg.kind, agents)
}
