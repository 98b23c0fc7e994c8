use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use robproj::bench::{bench, default_grid, read_grid, write_csv};
use robproj::instance::{gen_instance, InstanceConfig};
use robproj::io::{
    read_matrix, read_vector, to_json, write_matrix, write_vector, CertifyReport, DecodeReport,
    ProjectorReport, FORMAT_VERSION,
};
use robproj::{
    l0_decode, robust_projector, robust_projector_with, robustness_violation, DecodeOptions,
    ProblemSpec, ProjectorOptions, RecoverySet, Result, ToleranceConfig,
};

#[derive(Parser)]
#[command(name = "robproj", version, about = "Robust projectors and l0-decoding under sparse corruption")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Relative singular-value cutoff (default: max(rows, cols) * eps).
    #[arg(long = "tol-rank-rel")]
    rank_rel: Option<f64>,
    #[arg(long = "tol-eig-zero", default_value_t = 1e-10)]
    eig_zero: f64,
    #[arg(long = "tol-supp-abs", default_value_t = 1e-9)]
    supp_abs: f64,
    #[arg(long = "tol-consist-rel", default_value_t = 1e-9)]
    consist_rel: f64,
    #[arg(long = "tol-membership-rel", default_value_t = 1e-8)]
    membership_rel: f64,
}

impl TolArgs {
    fn config(&self) -> Result<ToleranceConfig> {
        let tol = ToleranceConfig {
            rank_rel: self.rank_rel,
            eig_zero: self.eig_zero,
            supp_abs: self.supp_abs,
            consist_rel: self.consist_rel,
            membership_rel: self.membership_rel,
        };
        tol.validate()?;
        Ok(tol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the robust orthogonal projector U.
    Projector {
        #[arg(short = 'A', long = "matrix")]
        a: PathBuf,
        #[arg(short)]
        q: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Spread subsets over all cores.
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Find an l0-minimizer of ||y - Ax||_0.
    Decode {
        #[arg(short = 'A', long = "matrix")]
        a: PathBuf,
        #[arg(short = 'y', long = "measurements")]
        y: PathBuf,
        #[arg(short)]
        q: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Decode, then return the affine set x_hat + ker(U).
    Recover {
        #[arg(short = 'A', long = "matrix")]
        a: PathBuf,
        #[arg(short = 'y', long = "measurements")]
        y: PathBuf,
        #[arg(short)]
        q: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Check whether the linear map x -> Mx is robust for (A, q).
    Certify {
        #[arg(short = 'A', long = "matrix")]
        a: PathBuf,
        #[arg(short)]
        q: usize,
        #[arg(short = 'M', long = "map")]
        map: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Time the projector over a grid of random instances.
    Bench {
        /// `m n q [seed]` per line; defaults to the 15-point reference grid.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Base seed for the default grid.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Write a random instance (A, x_star, e, y) as text files.
    Gen {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10.0)]
        magnitude: f64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn emit(text: &str, dest: Option<&Path>) -> Result<()> {
    match dest {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}")?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Projector {
            a,
            q,
            json,
            parallel,
            tol,
        } => {
            let spec = ProblemSpec::new(read_matrix(a)?, q)?;
            let opts = ProjectorOptions {
                parallel,
                early_exit: false,
            };
            let p = robust_projector_with(&spec, &tol.config()?, opts)?;
            emit(&to_json(&ProjectorReport::from_projector(&p))?, json.as_deref())
        }
        Command::Decode { a, y, q, json, tol } => {
            let spec = ProblemSpec::new(read_matrix(a)?, q)?;
            let r = l0_decode(&spec, &read_vector(y)?, &tol.config()?)?;
            emit(&to_json(&DecodeReport::new(spec.m(), q, &r))?, json.as_deref())
        }
        Command::Recover { a, y, q, json, tol } => {
            let tol = tol.config()?;
            let spec = ProblemSpec::new(read_matrix(a)?, q)?;
            let decoded = robproj::l0_decode_with(&spec, &read_vector(y)?, &tol, DecodeOptions::default())?;
            let p = robust_projector(&spec, &tol)?;
            let set = RecoverySet::from_parts(decoded.x_hat, &p);
            emit(&to_json(&ProjectorReport::from_recovery(&p, &set))?, json.as_deref())
        }
        Command::Certify {
            a,
            q,
            map,
            json,
            tol,
        } => {
            let tol = tol.config()?;
            let spec = ProblemSpec::new(read_matrix(a)?, q)?;
            let map = read_matrix(map)?;
            let p = robust_projector(&spec, &tol)?;
            let violation = robustness_violation(&spec, &map, &p, &tol)?;
            let report = CertifyReport {
                format: FORMAT_VERSION,
                robust: violation.is_none(),
                witness_gain: violation.as_ref().map(|(_, g)| *g),
                witness: violation.map(|(v, _)| v),
            };
            emit(&to_json(&report)?, json.as_deref())
        }
        Command::Bench {
            grid,
            runs,
            csv,
            seed,
            parallel,
            tol,
        } => {
            let grid = match grid {
                Some(path) => read_grid(path)?,
                None => default_grid(seed),
            };
            let opts = ProjectorOptions {
                parallel,
                early_exit: false,
            };
            let records = bench(&grid, runs, opts, &tol.config()?)?;
            match csv {
                Some(path) => write_csv(&records, fs::File::create(path)?),
                None => write_csv(&records, io::stdout().lock()),
            }
        }
        Command::Gen {
            m,
            n,
            q,
            seed,
            magnitude,
            out_dir,
        } => {
            let cfg = InstanceConfig {
                corruption_magnitude: magnitude,
                ..InstanceConfig::new(m, n, q, seed)
            };
            let inst = gen_instance(&cfg)?;
            fs::create_dir_all(&out_dir)?;
            write_matrix(out_dir.join("A.txt"), &inst.a)?;
            write_vector(out_dir.join("x_star.txt"), &inst.x_star)?;
            write_vector(out_dir.join("e.txt"), &inst.e)?;
            write_vector(out_dir.join("y.txt"), &inst.y)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
