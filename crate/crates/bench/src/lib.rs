//! Workloads shared by the benchmarks.

use pathfair::generate::{generate, GenConfig, Profile};
use pathfair::{Instance, Kind};

pub fn goods(m: usize, n: usize, profile: Profile, seed: u64) -> Instance {
    generate(&GenConfig { m, n, kind: Kind::Goods, profile, seed }).expect("valid sizes")
}

pub fn chores(m: usize, n: usize, seed: u64) -> Instance {
    generate(&GenConfig { m, n, kind: Kind::Chores, profile: Profile::Uniform(8), seed }).expect("valid sizes")
}
