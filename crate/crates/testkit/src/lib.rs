//! Test support: seeded random knowledge bases and measure sets, a brute-force
//! reference reasoner, and access to the shipped fixtures.

pub mod fixtures;
pub mod gen;
pub mod oracle;
pub mod suites;

pub use rand_chacha::ChaCha8Rng;

/// Deterministic RNG for a test case.
pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
