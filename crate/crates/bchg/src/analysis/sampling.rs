//! Seeded low-discrepancy sampling: Halton points with a random (Cranley–Patterson) shift.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 24] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

/// Points of `[0, 1)^dim`, reproducible from `(seed, stream)`.
#[derive(Debug, Clone)]
pub struct Sampler {
    shift: Vec<f64>,
}

impl Sampler {
    /// `stream` separates independent checks that share a seed.
    pub fn new(seed: u64, stream: u64, dim: usize) -> Self {
        assert!(dim <= PRIMES.len(), "at most {} dimensions", PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { shift: (0..dim).map(|_| rng.gen::<f64>()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    /// The `i`-th point; the index is offset by one to skip the origin of the Halton sequence.
    pub fn point(&self, i: usize) -> Vec<f64> {
        self.shift
            .iter()
            .zip(PRIMES)
            .map(|(s, b)| {
                let v = radical_inverse(i as u64 + 1, b) + s;
                v - v.floor()
            })
            .collect()
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

/// Maps `u ∈ [0, 1)` to `[lo, hi)`.
pub fn lerp(u: f64, lo: f64, hi: f64) -> f64 {
    lo + u * (hi - lo)
}

/// Consumes coordinates of a sample point in order.
pub struct Draw<'a> {
    u: &'a [f64],
    next: usize,
}

impl<'a> Draw<'a> {
    pub fn new(u: &'a [f64]) -> Self {
        Draw { u, next: 0 }
    }

    pub fn unit(&mut self) -> f64 {
        let v = self.u[self.next % self.u.len()];
        self.next += 1;
        v
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lerp(self.unit(), lo, hi)
    }

    pub fn vec(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.range(lo, hi)).collect()
    }

    pub fn pick(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }
}
