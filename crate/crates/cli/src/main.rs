use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use foxlink::config::{Mode, SweepConfig};
use foxlink::{profiles, run_to_dir};

#[derive(Parser)]
#[command(
    name = "foxlink",
    version,
    about = "Performance sweeps for mixed multihop FSO/RF links"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "FOXLINK_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a sweep and write CSV (and SVG) files.
    Run {
        /// JSON sweep config.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Builtin figure preset (see `profiles list`).
        #[arg(long)]
        preset: Option<String>,
        /// Output directory; overrides the config.
        #[arg(long, env = "FOXLINK_OUT")]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Monte Carlo samples per grid point.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        no_plot: bool,
    },
    /// Check a config without evaluating it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Builtin profiles and presets.
    Profiles {
        #[command(subcommand)]
        cmd: ProfilesCmd,
    },
}

#[derive(Subcommand)]
enum ProfilesCmd {
    List,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("thread pool")?;
    }
    match cli.cmd {
        Cmd::Profiles {
            cmd: ProfilesCmd::List,
        } => {
            for (name, desc) in profiles::describe() {
                println!("{name:<14} {desc}");
            }
        }
        Cmd::Validate { config } => {
            let cfg = SweepConfig::load(&config)?;
            cfg.validate()?;
            println!("ok {} ({})", cfg.name, cfg.hash());
        }
        Cmd::Run {
            config,
            preset,
            out,
            seed,
            samples,
            mode,
            no_plot,
        } => {
            let mut cfgs = match (config, preset) {
                (Some(path), _) => vec![SweepConfig::load(&path)?],
                (None, Some(name)) => profiles::preset(&name)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            for cfg in &mut cfgs {
                if let Some(s) = seed {
                    cfg.mc.seed = s;
                }
                if let Some(n) = samples {
                    cfg.mc.n_samples = n;
                }
                if let Some(m) = mode {
                    cfg.mode = m;
                }
                if no_plot {
                    cfg.plot = false;
                }
                if let Some(dir) = &out {
                    cfg.output = dir.clone();
                }
                // Reject every run before writing anything.
                cfg.validate()?;
            }
            for cfg in &cfgs {
                let (res, paths) = run_to_dir(cfg, &cfg.output)?;
                for n in &res.notes {
                    eprintln!("{}: {n}", cfg.name);
                }
                for p in paths {
                    println!("{}", p.display());
                }
            }
        }
    }
    Ok(())
}
