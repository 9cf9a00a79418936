#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zakfiber::fixtures::{free_action, s1, s2};
use zakfiber::{Action64, FiniteAbelianGroup, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[C64], c: C64) -> Vec<C64> {
    a.iter().map(|x| x * c).collect()
}

pub fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn weighted_norm_sqr(a: &Action64, psi: &[C64]) -> f64 {
    a.space().norm_sqr(psi)
}

/// `Z_2 x Z_3` acting freely on 18 points with scrambled labels and
/// non-uniform masses, so Jacobians are nontrivial.
pub fn s4() -> Action64 {
    let mut r = rng(0x5eed_0004);
    let group = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
    let mut labels: Vec<usize> = (0..18).collect();
    labels.shuffle(&mut r);
    let weights = (0..18).map(|_| r.gen_range(0.2..3.0)).collect();
    free_action(group, 3, &labels, weights).unwrap()
}

pub fn fixture_actions() -> Vec<(&'static str, Action64)> {
    vec![("S1", s1()), ("S2", s2()), ("S4", s4())]
}
