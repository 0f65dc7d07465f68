//! Counter-based pseudo-random streams.
//!
//! The generator is fully specified so that independent implementations can
//! reproduce every stream bit for bit:
//!
//! * `mix(z)` is the SplitMix64 finalizer:
//!   `z ^= z >> 30; z *= 0xbf58476d1ce4e5b9; z ^= z >> 27; z *= 0x94d049bb133111eb; z ^= z >> 31`.
//! * A stream is a 64-bit key plus a counter starting at zero. Output `k`
//!   (counting from 1) is `mix(key + k * 0x9e3779b97f4a7c15)` with wrapping arithmetic.
//! * The root key of a seed is `mix(seed ^ 0x6a09e667f3bcc909)`.
//! * Substream `i` of a stream with key `K` has key `mix(K ^ mix(i + 0x9e3779b97f4a7c15))`.
//!   Trials and steps use nested substreams: `root(seed).substream(trial).substream(step)`.
//! * Uniform doubles are `(x >> 11) * 2^-53`; normals use Box-Muller on two
//!   uniforms `u1, u2` as `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`.

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const ROOT_SALT: u64 = 0x6a09_e667_f3bc_c909;

#[inline]
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamRng {
    key: u64,
    counter: u64,
}

impl StreamRng {
    pub fn new(seed: u64) -> Self {
        Self {
            key: mix(seed ^ ROOT_SALT),
            counter: 0,
        }
    }

    /// Independent child stream; does not advance `self`.
    pub fn substream(&self, index: u64) -> Self {
        Self {
            key: mix(self.key ^ mix(index.wrapping_add(GAMMA))),
            counter: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        // Lemire-style multiply-shift; the bias is below 2^-64 * n.
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Index drawn with probability proportional to `weights`.
    pub fn weighted_index(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        assert!(total > 0.0, "weights must have positive sum");
        let target = self.uniform() * total;
        let mut acc = 0.0;
        for (i, w) in weights.iter().enumerate() {
            acc += w;
            if target < acc {
                return i;
            }
        }
        weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
    }

    /// Number of successes in `n` Bernoulli(`p`) draws.
    pub fn binomial(&mut self, n: u64, p: f64) -> u64 {
        (0..n).filter(|_| self.bernoulli(p)).count() as u64
    }
}
