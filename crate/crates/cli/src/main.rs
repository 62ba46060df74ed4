use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use ttp2::generate::random_euclidean;
use ttp2::oracle::brute_force_optimal;
use ttp2::schedule::{total_distance, validate_all};
use ttp2::solver::{format_exact, GraphBounds};
use ttp2::{solve, Instance, Schedule, SolveError, SolveOptions};

#[derive(Parser)]
#[command(name = "ttp2", version, about = "Double round-robin schedules with at most two consecutive home or away games")]
struct Cli {
    /// Worker threads for the offset scan (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a schedule and print its bounds report.
    Solve {
        instance: PathBuf,
        /// Write the schedule here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Route six-team instances to the exhaustive search (slow).
        #[arg(long)]
        allow_n6_oracle: bool,
    },
    /// Check a schedule file against an instance.
    Validate {
        schedule: PathBuf,
        instance: PathBuf,
        /// Cap on consecutive home or away games.
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Print lower bounds and the analysis bound.
    Bounds { instance: PathBuf },
    /// Exhaustive optimum for four (or six) teams.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        allow_n6_oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve random Euclidean instances and summarize time and ratio.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [30, 34, 38, 42])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write a random Euclidean instance.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        side: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let inst = Instance::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some((i, j, k)) = inst.triangle_violation() {
        eprintln!(
            "warning: triangle inequality fails for teams {}, {}, {}; bounds are not guaranteed",
            i + 1,
            j + 1,
            k + 1
        );
    }
    Ok(inst)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Solve {
            instance,
            out,
            allow_n6_oracle,
        } => {
            let inst = read_instance(&instance)?;
            let sol = match solve(&inst, SolveOptions { allow_n6_oracle }) {
                Ok(s) => s,
                Err(SolveError::UnsupportedSize(n)) => {
                    eprintln!("error: unsupported size: n = {n}");
                    return Ok(ExitCode::from(2));
                }
                Err(e) => bail!(e),
            };
            let text = sol.schedule.to_text();
            match &out {
                Some(p) => emit(Some(p), &text)?,
                None => print!("schedule\n{text}"),
            }
            print!("{}", sol.report.render(&inst));
            if sol.report.certified() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("error: certification failed");
                Ok(ExitCode::from(1))
            }
        }
        Command::Validate { schedule, instance, k } => {
            let inst = read_instance(&instance)?;
            let text = fs::read_to_string(&schedule)
                .with_context(|| format!("reading {}", schedule.display()))?;
            let s = Schedule::parse(&text).with_context(|| format!("parsing {}", schedule.display()))?;
            if s.n() != inst.n() {
                bail!("schedule has {} teams, instance has {}", s.n(), inst.n());
            }
            let violations = validate_all(&s, k);
            for v in &violations {
                println!("{v}");
            }
            if violations.is_empty() {
                println!("ok total {}", inst.format_length(total_distance(&s, &inst)));
                Ok(ExitCode::SUCCESS)
            } else {
                println!("{} violations", violations.len());
                Ok(ExitCode::from(1))
            }
        }
        Command::Bounds { instance } => {
            let inst = read_instance(&instance)?;
            let gb = GraphBounds::compute(&inst);
            let len = |v| inst.format_length(v);
            println!("n {}", inst.n());
            println!("delta {}", len(gb.delta));
            println!("matching {}", len(gb.dm()));
            println!("tree {}", len(gb.dt()));
            println!("lb1 {}", len(gb.lb1()));
            println!("lb2 {}", len(gb.lb2()));
            println!("analysis_bound {}", format_exact(&inst, &gb.analysis_bound()));
            println!("guarantee {}", format_exact(&inst, &gb.guarantee()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            instance,
            allow_n6_oracle,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let r = brute_force_optimal(&inst, allow_n6_oracle)?;
            println!("nodes {}", r.nodes);
            match (r.value, r.schedule) {
                (Some(v), Some(s)) => {
                    println!("value {}", inst.format_length(v));
                    match &out {
                        Some(p) => emit(Some(p), &s.to_text())?,
                        None => print!("schedule\n{}", s.to_text()),
                    }
                }
                _ => println!("infeasible"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { sizes, count, seed } => {
            println!("n instances mean_ms max_ms max_ratio certified");
            let mut all_ok = true;
            for n in sizes {
                let mut times = Vec::new();
                let mut max_ratio = 0f64;
                let mut certified = 0;
                for k in 0..count {
                    let inst = random_euclidean(n, 1000, seed.wrapping_mul(1_000_003).wrapping_add(k));
                    let start = Instant::now();
                    let sol = match solve(&inst, SolveOptions::default()) {
                        Ok(s) => s,
                        Err(SolveError::UnsupportedSize(n)) => {
                            eprintln!("error: unsupported size: n = {n}");
                            return Ok(ExitCode::from(2));
                        }
                        Err(e) => bail!(e),
                    };
                    times.push(start.elapsed().as_secs_f64() * 1e3);
                    if let Some(r) = sol.report.ratio {
                        max_ratio = max_ratio.max(*r.numer() as f64 / *r.denom() as f64);
                    }
                    certified += usize::from(sol.report.certified());
                }
                all_ok &= certified as u64 == count;
                let mean = times.iter().sum::<f64>() / times.len().max(1) as f64;
                let max = times.iter().cloned().fold(0.0, f64::max);
                println!("{n} {count} {mean:.2} {max:.2} {max_ratio:.4} {certified}");
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Generate { n, seed, side, out } => {
            if n < 4 || n % 2 == 1 {
                bail!("team count must be even and at least 4, got {n}");
            }
            emit(out.as_deref(), &random_euclidean(n, side, seed).to_text())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
