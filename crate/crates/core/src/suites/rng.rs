use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::primitives::Point;

/// Seeded generator shared by the suites; each suite derives its own stream
/// from the user seed and a fixed tag so suites stay independent.
pub(crate) struct SuiteRng(ChaCha8Rng);

impl SuiteRng {
    pub(crate) fn new(seed: u64, tag: u64) -> Self {
        SuiteRng(ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
    }

    pub(crate) fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.gen_range(lo..hi)
    }

    pub(crate) fn int(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.0.gen_range(lo..=hi_inclusive)
    }

    pub(crate) fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    pub(crate) fn coin(&mut self, p: f64) -> bool {
        self.0.gen::<f64>() < p
    }

    pub(crate) fn seed(&mut self) -> u64 {
        self.0.gen()
    }

    pub(crate) fn normal_point(&mut self, n: usize, scale: f64) -> Point {
        Point::new((0..n).map(|_| scale * self.normal()).collect()).expect("finite samples")
    }
}
