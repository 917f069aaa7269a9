//! Seeded randomness for sampling cells and positive matrices.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::Q;

pub type SeedRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeedRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A positive rational `p/q` with `p, q` uniform in `1..=100`.
pub fn positive_rational(rng: &mut SeedRng) -> Q {
    let p: i64 = rng.gen_range(1..=100);
    let q: i64 = rng.gen_range(1..=100);
    Q::new(BigInt::from(p), BigInt::from(q))
}

/// A rational strictly between 0 and 1.
pub fn unit_fraction(rng: &mut SeedRng) -> Q {
    let q: i64 = rng.gen_range(2..=100);
    let p: i64 = rng.gen_range(1..q);
    Q::new(BigInt::from(p), BigInt::from(q))
}
