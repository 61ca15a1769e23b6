//! `bvrsim`: run, replay and export simulated engagements.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use bvr_core::engine::export::export_trajectories;
use bvr_core::engine::policy::ExternalPolicy;
use bvr_core::engine::{
    replay, run_episode, run_episodes, EpisodeLog, EpisodeOutput, EpisodeSummary, PolicyKind, ReplayReport,
};
use bvr_core::{Env, ScenarioKind, SimConfig};
use clap::{Parser, Subcommand};

const EXIT_USAGE: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "bvrsim", version, about = "Beyond-visual-range air combat simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run episodes and write their logs plus a summary table.
    Run(RunArgs),
    /// Re-simulate a log and check it reproduces byte for byte.
    Replay { log: PathBuf },
    /// Write one plot-ready TSV file per unit from a log.
    Export {
        log: PathBuf,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Print a scenario's observation/action description as JSON.
    Spec {
        #[arg(long)]
        scenario: Option<ScenarioKind>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the default configuration as TOML.
    Defaults {
        #[arg(long, default_value = "evade1")]
        scenario: ScenarioKind,
    },
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// evade1, evade2 or dogfight; overrides the config file.
    #[arg(long)]
    scenario: Option<ScenarioKind>,
    /// straight, dive-turn, bt, random or external (JSON lines on stdin/stdout).
    #[arg(long)]
    policy: PolicyKind,
    /// Seed of the first episode; episode i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    episodes: u64,
    /// Output directory for logs and summary.tsv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Record every n-th tick (events and the terminal tick are always kept).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    log_stride: u64,
}

fn load_config(path: Option<&Path>, scenario: Option<ScenarioKind>) -> anyhow::Result<SimConfig> {
    let mut cfg = match path {
        Some(p) => SimConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
        None => SimConfig::for_kind(scenario.unwrap_or(ScenarioKind::Evade1)),
    };
    if let Some(kind) = scenario {
        cfg.scenario.kind = kind;
    }
    cfg.validate()?;
    Ok(cfg)
}

const SUMMARY_COLUMNS: &str =
    "episode\tseed\tscenario\tpolicy\tsteps\tduration_s\treward\toutcome\tmin_md_km\tmd_km\tshots_blue\tshots_red";

fn summary_row(index: u64, s: &EpisodeSummary) -> String {
    let md = s.miss_distances_km.iter().map(|m| format!("{m:.6}")).collect::<Vec<_>>().join(",");
    format!(
        "{index}\t{}\t{}\t{}\t{}\t{:.2}\t{:.6}\t{}\t{}\t{}\t{}\t{}",
        s.seed,
        s.scenario,
        s.policy,
        s.steps,
        s.duration,
        s.total_reward,
        s.outcome.map_or("none", |c| c.name()),
        s.min_miss_km().map_or_else(|| "-".to_owned(), |m| format!("{m:.6}")),
        if md.is_empty() { "-".to_owned() } else { md },
        s.shots.blue,
        s.shots.red,
    )
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let cfg = load_config(args.config.as_deref(), args.scenario)?;
    let seeds: Vec<u64> = (0..args.episodes).map(|i| args.seed.wrapping_add(i)).collect();
    let stride = Some(args.log_stride);
    let outputs: Vec<EpisodeOutput> = if args.policy == PolicyKind::External {
        let stdin = io::stdin();
        let mut policy = ExternalPolicy::new(stdin.lock(), io::stdout());
        seeds.iter().map(|&s| run_episode(&cfg, &mut policy, s, stride)).collect::<Result<_, _>>()?
    } else {
        run_episodes(&cfg, args.policy, &seeds, args.workers as usize, stride)?.into_iter().collect::<Result<_, _>>()?
    };

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut table = format!("{SUMMARY_COLUMNS}\n");
    let mut md_sum = 0.0;
    let mut md_count = 0;
    for (i, o) in outputs.iter().enumerate() {
        let log = o.log.as_ref().context("episode produced no log")?;
        let path = args.out.join(format!("episode_{i:04}.jsonl"));
        log.save(&path).with_context(|| format!("writing {}", path.display()))?;
        writeln!(table, "{}", summary_row(i as u64, &o.summary))?;
        if let Some(m) = o.summary.min_miss_km() {
            md_sum += m;
            md_count += 1;
        }
    }
    let path = args.out.join("summary.tsv");
    fs::write(&path, table).with_context(|| format!("writing {}", path.display()))?;
    let mean = if md_count > 0 { format!("{:.3} km", md_sum / md_count as f64) } else { "-".to_owned() };
    let total: f64 = outputs.iter().map(|o| o.summary.total_reward).sum();
    // Stdout belongs to the external policy channel.
    eprintln!(
        "{} episode(s) of {} with {}: mean reward {:.4}, mean min miss distance {mean}; wrote {}",
        outputs.len(),
        cfg.scenario.kind,
        args.policy,
        total / outputs.len() as f64,
        path.display()
    );
    Ok(())
}

fn cmd_replay(path: &Path) -> anyhow::Result<ExitCode> {
    let log = EpisodeLog::load(path).with_context(|| format!("reading {}", path.display()))?;
    if !log.digest_matches()? {
        eprintln!("warning: footer digest does not match log contents");
    }
    let report = replay(&log)?;
    println!("{}", serde_json::to_string(&report)?);
    Ok(match report {
        ReplayReport::Identical { .. } => ExitCode::SUCCESS,
        ReplayReport::Diverged { .. } => ExitCode::from(EXIT_DIVERGED),
    })
}

fn cmd_export(path: &Path, out: &Path) -> anyhow::Result<()> {
    let log = EpisodeLog::load(path).with_context(|| format!("reading {}", path.display()))?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for file in export_trajectories(&log, out)? {
        println!("{}", file.display());
    }
    Ok(())
}

fn cmd_spec(scenario: Option<ScenarioKind>, config: Option<&Path>) -> anyhow::Result<()> {
    let env = Env::new(load_config(config, scenario)?)?;
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &env.spec())?;
    writeln!(out)?;
    Ok(())
}

fn execute(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run(args) => cmd_run(args)?,
        Command::Replay { log } => return cmd_replay(&log),
        Command::Export { log, out } => cmd_export(&log, &out)?,
        Command::Spec { scenario, config } => cmd_spec(scenario, config.as_deref())?,
        Command::Defaults { scenario } => print!("{}", SimConfig::for_kind(scenario).to_toml()?),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
