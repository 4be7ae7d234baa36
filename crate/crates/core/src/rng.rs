//! Seeded randomness shared by every stochastic component.
//!
//! Each run owns one [`RngState`], a PCG-XSH-RR generator with 64 bits of
//! state (`Pcg32`). Run seeds are split off a base seed with
//! [`derive_run_seed`], which is the SplitMix64 output function applied to
//! `base_seed + run_index * 0x9E3779B97F4A7C15` (wrapping). For a fixed base
//! seed the map is a bijection in `run_index` modulo 2^64.

use rand::{RngCore, SeedableRng};
use rand_pcg::Pcg32;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// PCG default increment; every run uses the same stream and differs only in state.
const PCG_STREAM: u64 = 0x0a02_bdbf_7bb3_c0a7;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_run_seed(base_seed: u64, run_index: u64) -> u64 {
    splitmix64(base_seed.wrapping_add(run_index.wrapping_mul(GOLDEN_GAMMA)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngState {
    seed: u64,
    inner: Pcg32,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: Pcg32::new(seed, PCG_STREAM),
        }
    }

    /// Generator for run `run_index` of an experiment seeded with `base_seed`.
    pub fn for_run(base_seed: u64, run_index: u64) -> Self {
        Self::new(derive_run_seed(base_seed, run_index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

impl SeedableRng for RngState {
    type Seed = [u8; 8];

    fn from_seed(seed: Self::Seed) -> Self {
        Self::new(u64::from_le_bytes(seed))
    }

    fn seed_from_u64(state: u64) -> Self {
        Self::new(state)
    }
}
