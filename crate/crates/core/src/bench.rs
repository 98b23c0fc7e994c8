//! Wall-clock timing of [`robust_projector`] over an `(m, n, q)` grid.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{gen_instance, InstanceConfig};
use crate::numerics::ToleranceConfig;
use crate::projector::{robust_projector_with, subset_count, ProblemSpec, ProjectorOptions};

/// One grid point. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub m: usize,
    pub n: usize,
    pub q: usize,
    pub subsets: u64,
    pub runs: usize,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub seed: u64,
}

/// `m ∈ {8, 16}`, `n ∈ {8, 16, 32}`, `q ∈ {1, 3, 7}`, dropping points with
/// `2q >= m`: 15 configurations. Seeds are `base_seed + index`.
pub fn default_grid(base_seed: u64) -> Vec<InstanceConfig> {
    let mut grid = Vec::new();
    for m in [8, 16] {
        for n in [8, 16, 32] {
            for q in [1, 3, 7] {
                if 2 * q < m {
                    let seed = base_seed + grid.len() as u64;
                    grid.push(InstanceConfig::new(m, n, q, seed));
                }
            }
        }
    }
    grid
}

/// Grid file: one `m n q [seed]` line per point; `#` comments allowed.
/// Missing seeds default to the line's index.
pub fn read_grid(path: impl AsRef<Path>) -> Result<Vec<InstanceConfig>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut grid = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                column: 1,
                message: format!("expected `m n q [seed]`, found {} fields", fields.len()),
            });
        }
        let mut nums = [0u64; 4];
        nums[3] = grid.len() as u64;
        for (k, f) in fields.iter().enumerate() {
            nums[k] = f.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                column: line.find(f).map_or(1, |c| c + 1),
                message: format!("invalid integer `{f}`"),
            })?;
        }
        let cfg = InstanceConfig::new(nums[0] as usize, nums[1] as usize, nums[2] as usize, nums[3]);
        cfg.validate()?;
        grid.push(cfg);
    }
    Ok(grid)
}

fn mean_std(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Times `runs` calls per grid point on the same seeded matrix, after one
/// untimed warm-up call. `std_ms` is the sample standard deviation.
pub fn bench(
    grid: &[InstanceConfig],
    runs: usize,
    opts: ProjectorOptions,
    tol: &ToleranceConfig,
) -> Result<Vec<BenchRecord>> {
    let runs = runs.max(1);
    let mut out = Vec::with_capacity(grid.len());
    for cfg in grid {
        let inst = gen_instance(cfg)?;
        let spec = ProblemSpec::new(inst.a, cfg.q)?;
        let subsets = subset_count(cfg.m, cfg.q)?;
        robust_projector_with(&spec, tol, opts)?;
        let mut samples = Vec::with_capacity(runs);
        for _ in 0..runs {
            let start = Instant::now();
            let p = robust_projector_with(&spec, tol, opts)?;
            samples.push(start.elapsed().as_secs_f64() * 1e3);
            debug_assert!(opts.early_exit || p.subsets_processed() == subsets);
        }
        let (mean_ms, std_ms) = mean_std(&samples);
        out.push(BenchRecord {
            m: cfg.m,
            n: cfg.n,
            q: cfg.q,
            subsets,
            runs,
            mean_ms,
            std_ms,
            seed: cfg.seed,
        });
    }
    Ok(out)
}

/// CSV with header `m,n,q,subsets,runs,mean_ms,std_ms,seed`.
pub fn write_csv<W: Write>(records: &[BenchRecord], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
