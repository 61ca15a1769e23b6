use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::env::{Env, Transition};
use super::log::{EpisodeLog, Shots};
use super::policy::{Policy, PolicyKind};
use super::world::TerminalCause;
use crate::error::{Error, Result};
use crate::scenario::{Observation, PilotAction, ScenarioKind};

/// One row of a run's summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    pub seed: u64,
    pub scenario: ScenarioKind,
    pub policy: String,
    pub steps: u64,
    pub duration: f64,
    pub total_reward: f64,
    pub miss_distances_km: Vec<f64>,
    pub outcome: Option<TerminalCause>,
    pub shots: Shots,
}

impl EpisodeSummary {
    /// Smallest miss distance over all missiles fired at the agent, km.
    pub fn min_miss_km(&self) -> Option<f64> {
        self.miss_distances_km.iter().copied().reduce(f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct EpisodeOutput {
    pub summary: EpisodeSummary,
    pub log: Option<EpisodeLog>,
}

/// Runs one episode to the end. With `log_stride` set, the returned output
/// carries the full episode log.
pub fn run_episode(
    config: &SimConfig,
    policy: &mut dyn Policy,
    seed: u64,
    log_stride: Option<u64>,
) -> Result<EpisodeOutput> {
    let mut env = Env::new(config.clone())?;
    if let Some(stride) = log_stride {
        env.enable_log(stride, policy.name());
    }
    let mut obs = env.reset(seed);
    policy.reset(&env);
    let mut total = 0.0;
    let mut last = None;
    while !env.world().is_terminal() {
        let action = policy.act(&env, &obs)?;
        let t = env.step(&action)?;
        total += t.reward;
        obs = t.observation.clone();
        last = Some(t);
    }
    let info = last.map(|t| t.info);
    let w = env.world();
    let summary = EpisodeSummary {
        seed,
        scenario: w.kind,
        policy: policy.name().to_owned(),
        steps: env.steps(),
        duration: w.time,
        total_reward: total,
        miss_distances_km: w.threats_to(crate::unit::Side::Blue).map(|m| m.state.miss_distance / 1000.0).collect(),
        outcome: w.terminal,
        shots: info.map_or(env.shots(), |i| i.shots),
    };
    Ok(EpisodeOutput { summary, log: env.take_log() })
}

fn pool(workers: usize) -> Result<ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))
}

/// Runs one episode per seed on `workers` threads. Results come back in
/// seed order regardless of scheduling.
pub fn run_episodes(
    config: &SimConfig,
    policy: PolicyKind,
    seeds: &[u64],
    workers: usize,
    log_stride: Option<u64>,
) -> Result<Vec<Result<EpisodeOutput>>> {
    let pool = pool(workers)?;
    Ok(pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| {
                let mut p = policy.build(seed)?;
                run_episode(config, p.as_mut(), seed, log_stride)
            })
            .collect()
    }))
}

/// K independent worlds stepped together on a worker pool.
pub struct VecEnv {
    envs: Vec<Env>,
    pool: ThreadPool,
}

impl VecEnv {
    pub fn new(config: &SimConfig, count: usize, workers: usize) -> Result<Self> {
        let envs = (0..count).map(|_| Env::new(config.clone())).collect::<Result<Vec<_>>>()?;
        Ok(Self { envs, pool: pool(workers)? })
    }

    pub fn len(&self) -> usize {
        self.envs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.envs.is_empty()
    }

    pub fn envs(&self) -> &[Env] {
        &self.envs
    }

    pub fn reset(&mut self, seeds: &[u64]) -> Result<Vec<Observation>> {
        if seeds.len() != self.envs.len() {
            return Err(Error::InvalidConfig(format!("{} seeds for {} worlds", seeds.len(), self.envs.len())));
        }
        let envs = &mut self.envs;
        Ok(self.pool.install(|| envs.par_iter_mut().zip(seeds).map(|(e, &s)| e.reset(s)).collect()))
    }

    /// Steps every world with its own action; world `i` gets `actions[i]`.
    pub fn step(&mut self, actions: &[PilotAction]) -> Result<Vec<Result<Transition>>> {
        if actions.len() != self.envs.len() {
            return Err(Error::InvalidConfig(format!("{} actions for {} worlds", actions.len(), self.envs.len())));
        }
        let envs = &mut self.envs;
        Ok(self.pool.install(|| envs.par_iter_mut().zip(actions).map(|(e, a)| e.step(a)).collect()))
    }

    /// Runs every world to the end under its own copy of `policy`.
    pub fn run_to_end(&mut self, policy: PolicyKind, seeds: &[u64]) -> Result<Vec<Result<f64>>> {
        self.reset(seeds)?;
        let envs = &mut self.envs;
        Ok(self.pool.install(|| {
            envs.par_iter_mut()
                .zip(seeds)
                .map(|(env, &seed)| {
                    let mut p = policy.build(seed)?;
                    p.reset(env);
                    let mut obs = env.observation();
                    let mut total = 0.0;
                    while !env.world().is_terminal() {
                        let t = env.step(&p.act(env, &obs)?)?;
                        total += t.reward;
                        obs = t.observation;
                    }
                    Ok(total)
                })
                .collect()
        }))
    }
}
