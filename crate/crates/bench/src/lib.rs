//! Fixed inputs shared by the criterion benches.

use gridreach::{gen_random, GridGraph};

/// Random square grid used by the benches, the same for every run.
pub fn square(side: u32, density: f64) -> GridGraph {
    gen_random(side, side, density, u64::from(side) * 1_000_003)
        .expect("bench sides are at least 2")
}
