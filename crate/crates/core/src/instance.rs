//! Seeded random problem instances.
//!
//! All randomness comes from `ChaCha20Rng::seed_from_u64(seed)`; entries are
//! drawn in a fixed order (`A` row-major, then `x⋆`, then the corruption
//! support, then its signs) so an instance is reproducible from its seed.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    #[default]
    StandardNormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub m: usize,
    pub n: usize,
    pub q: usize,
    pub seed: u64,
    /// Absolute value of every nonzero corruption entry.
    pub corruption_magnitude: f64,
    pub distribution: Distribution,
}

impl InstanceConfig {
    pub fn new(m: usize, n: usize, q: usize, seed: u64) -> Self {
        InstanceConfig {
            m,
            n,
            q,
            seed,
            corruption_magnitude: 10.0,
            distribution: Distribution::StandardNormal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::EmptyMatrix {
                rows: self.m,
                cols: self.n,
            });
        }
        if 2 * self.q >= self.m {
            return Err(Error::BudgetTooLarge {
                m: self.m,
                q: self.q,
            });
        }
        if !self.corruption_magnitude.is_finite() {
            return Err(Error::NonFiniteEntry { row: 0, col: 0 });
        }
        Ok(())
    }
}

/// `y = A x⋆ + e` with `||e||_0 = q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub a: DenseMatrix,
    pub x_star: Vec<f64>,
    pub e: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub(crate) fn normal_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn gen_instance(cfg: &InstanceConfig) -> Result<Instance> {
    cfg.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    let a = match cfg.distribution {
        Distribution::StandardNormal => {
            DenseMatrix::new(cfg.m, cfg.n, normal_vec(&mut rng, cfg.m * cfg.n))?
        }
    };
    let x_star = normal_vec(&mut rng, cfg.n);
    let mut support = index::sample(&mut rng, cfg.m, cfg.q).into_vec();
    support.sort_unstable();
    let mut e = vec![0.0; cfg.m];
    for i in support {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        e[i] = sign * cfg.corruption_magnitude;
    }
    let y = a
        .mul_vec(&x_star)
        .iter()
        .zip(&e)
        .map(|(ax, ei)| ax + ei)
        .collect();
    Ok(Instance { a, x_star, e, y })
}
