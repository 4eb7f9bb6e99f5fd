//! Seeded sampling shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use hypertet::{is_member, DihedralAngles};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `(lo, π/2]^6`.
pub fn uniform_angles(rng: &mut impl Rng, lo: f64) -> DihedralAngles {
    DihedralAngles::new(std::array::from_fn(|_| {
        FRAC_PI_2 - rng.random::<f64>() * (FRAC_PI_2 - lo)
    }))
}

/// Uniform member of the open region, by rejection from `(0.05, π/2]^6`.
pub fn random_member(rng: &mut impl Rng) -> DihedralAngles {
    loop {
        let a = uniform_angles(rng, 0.05);
        if is_member(&a) {
            return a;
        }
    }
}

pub fn witness() -> DihedralAngles {
    let c = 0.6f64.acos();
    DihedralAngles::new([FRAC_PI_2, FRAC_PI_2, c, FRAC_PI_2, c, c])
}
