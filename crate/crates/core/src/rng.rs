use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// ChaCha8 generator for `seed`, on its own stream so that draws for one
/// entity never shift the draws of another.
pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream ids used by the generators and solvers.
pub(crate) mod streams {
    pub const GREEDY_RANDOM: u64 = 1;
    pub const ALNS: u64 = 2;
    /// Demand `d` of an AG instance uses `AG_DEMAND + d`.
    pub const AG_DEMAND: u64 = 1 << 32;
    pub const RW_WORLD: u64 = 20;
    /// Employee `p` of an RW instance uses `RW_EMPLOYEE + p`.
    pub const RW_EMPLOYEE: u64 = 2 << 32;
}
