//! Seeded generators for the two circuit ensembles, twirl sampling and the
//! anti-concentration estimator.
//!
//! All randomness comes from [`crate::rng::CounterRng`], so every generator is
//! a pure function of its configuration.

mod anticoncentration;
mod fig1a;
mod fig1b;
mod su4;

pub use anticoncentration::{anti_concentration_estimate, AcEnsemble, AntiConcentrationReport};
pub use fig1a::{build_fig1a, GeneratorConfig, Layout, WhiteBoxSet};
pub use fig1b::{build_fig1b, random_clifford_word, Fig1bConfig};
pub use su4::{random_su4, random_u3};

use crate::bits::Bits;
use crate::rng::mix;

/// `count` uniform twirl strings of `2m` bits.
///
/// String `i` takes its words from `mix(seed, i·w + j)`, so any prefix of the
/// list is independent of `count`.
pub fn sample_y(m: usize, count: usize, seed: u64) -> Vec<Bits> {
    let bits = 2 * m;
    let words = bits.div_ceil(64);
    (0..count)
        .map(|i| {
            let mut y = Bits::zeros(bits);
            for j in 0..words {
                let w = mix(seed, (i * words + j) as u64);
                for b in 0..64.min(bits - 64 * j) {
                    y.put(64 * j + b, (w >> b) & 1 == 1);
                }
            }
            y
        })
        .collect()
}
