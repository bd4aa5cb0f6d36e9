//! Seeded randomness shared by every stochastic component.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic random stream; identical seeds replay identical runs.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform index in `0..len`. Panics when `len == 0`.
    pub fn index(&mut self, len: usize) -> usize {
        self.inner.gen_range(0..len)
    }

    pub fn coin(&mut self) -> bool {
        self.inner.next_u32() & 1 == 1
    }

    pub fn unit(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// Poisson(1) sample by multiplying uniforms until the product drops below e^-1.
pub fn poisson_one(rng: &mut RandomSource) -> u32 {
    let limit = (-1.0f64).exp();
    let mut product = rng.unit();
    let mut count = 0;
    while product > limit {
        product *= rng.unit();
        count += 1;
    }
    count
}

/// SplitMix64 finaliser, used to derive well-spread child seeds.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one trial of one size point; stable across versions and thread counts.
pub fn derive_seed(base: u64, size: u64, trial: u64) -> u64 {
    mix64(mix64(mix64(base) ^ size) ^ trial.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}
