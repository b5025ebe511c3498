//! Counter-based splittable random source.
//!
//! Every value is a pure function of `(key, counter)`: the `i`-th output of a
//! stream is `mix64(key + (i + 1) * GOLDEN_GAMMA)`, which is exactly the
//! SplitMix64 sequence started from state `key`. Streams are split by hashing
//! a child index into the key, so a campaign can address the randomness of
//! instance `i`, field `f` directly as `stream(seed, i, f)` without replaying
//! any other stream. The constants are the published SplitMix64 ones, which
//! makes the sequence easy to reproduce in other languages.

/// Weyl increment (2^64 / golden ratio).
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
pub const MIX_MUL_1: u64 = 0xBF58_476D_1CE4_E5B9;
pub const MIX_MUL_2: u64 = 0x94D0_49BB_1331_11EB;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_MUL_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_MUL_2);
    z ^ (z >> 31)
}

/// Key of the child stream `index` below `key`.
#[inline]
pub fn split_key(key: u64, index: u64) -> u64 {
    mix64(key ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Seed for field `field` of campaign instance `instance`.
pub fn derive_seed(seed: u64, instance: u64, field: u64) -> u64 {
    split_key(split_key(mix64(seed), instance), field)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { key: mix64(seed), counter: 0 }
    }

    /// Stream addressed by `(seed, instance, field)`.
    pub fn stream(seed: u64, instance: u64, field: u64) -> Self {
        Self { key: derive_seed(seed, instance, field), counter: 0 }
    }

    /// Independent child stream; does not advance `self`.
    pub fn split(&self, index: u64) -> Self {
        Self { key: split_key(self.key, index), counter: 0 }
    }

    /// Output at an arbitrary position, without touching the counter.
    #[inline]
    pub fn at(&self, position: u64) -> u64 {
        mix64(self.key.wrapping_add(position.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = self.at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        v
    }

    /// Uniform in [0, 1) with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Log-uniform in [lo, hi], both positive.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (lo.ln() + (hi.ln() - lo.ln()) * self.uniform()).exp()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi, "empty integer range");
        let span = (hi - lo) as u64 + 1;
        lo + ((self.next_u64() as u128 * span as u128) >> 64) as usize
    }

    /// Standard normal via Box-Muller (one value per pair of uniforms).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // SplitMix64 seeded with 0 (state advanced before mixing).
        let rng = CounterRng { key: 0, counter: 0 };
        assert_eq!(rng.at(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.at(1), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.at(2), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn streams_are_addressable() {
        let mut a = CounterRng::stream(7, 3, 1);
        let b = CounterRng::stream(7, 3, 1);
        let first: Vec<u64> = (0..5).map(|_| a.next_u64()).collect();
        let direct: Vec<u64> = (0..5).map(|i| b.at(i)).collect();
        assert_eq!(first, direct);
        assert_ne!(CounterRng::stream(7, 3, 2).at(0), b.at(0));
        assert_ne!(CounterRng::stream(7, 4, 1).at(0), b.at(0));
    }

    #[test]
    fn int_range_is_inclusive() {
        let mut rng = CounterRng::new(1);
        let mut seen = [false; 4];
        for _ in 0..200 {
            let v = rng.int_in(2, 5);
            assert!((2..=5).contains(&v));
            seen[v - 2] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn normal_moments_are_plausible() {
        let mut rng = CounterRng::new(42);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.normal()).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.03, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }
}
