//! Counter-mode random streams.
//!
//! Every Monte Carlo trial gets its own ChaCha stream keyed by
//! (master seed, domain, sample size, trial index). Distinct keys give
//! independent streams, and a trial's draws never depend on which other
//! cells run, in what order, or on how work is scheduled across threads.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A deterministic random stream for one Monte Carlo trial.
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    /// Derive the stream keyed by the four coordinates. The 32-byte ChaCha
    /// key is exactly their little-endian concatenation, so distinct
    /// coordinate tuples can never collide.
    pub fn derive(master_seed: u64, domain: u64, n: u64, trial: u64) -> Self {
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&domain.to_le_bytes());
        key[16..24].copy_from_slice(&n.to_le_bytes());
        key[24..32].copy_from_slice(&trial.to_le_bytes());
        RandomStream {
            rng: ChaCha8Rng::from_seed(key),
        }
    }

    /// Uniform draw on the open interval (0, 1), using the top 52 bits of
    /// one u64. Every value (k + 0.5) / 2^52 is exactly representable, so
    /// the result can never round onto 0 or 1 and quantile transforms stay
    /// finite.
    pub fn next_open01(&mut self) -> f64 {
        ((self.rng.next_u64() >> 12) as f64 + 0.5) * (1.0 / 4503599627370496.0)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}
