use serde::Serialize;

use super::env::Env;
use super::log::{check_versions, EpisodeLog, LogLine};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ReplayReport {
    Identical {
        lines: usize,
    },
    /// First line (1-based) where the re-simulation disagrees with the log.
    Diverged {
        line: usize,
        tick: Option<u64>,
        expected: String,
        found: String,
    },
}

impl ReplayReport {
    pub fn is_identical(&self) -> bool {
        matches!(self, ReplayReport::Identical { .. })
    }
}

/// Re-simulates a log from its header and recorded actions and compares
/// every regenerated line, byte for byte, with the original.
pub fn replay(log: &EpisodeLog) -> Result<ReplayReport> {
    let header = log.header()?;
    check_versions(&header)?;
    let mut env = Env::new(header.config.clone())?;
    env.enable_log(header.log_stride, &header.policy);
    match header.initial.clone() {
        Some(ic) => {
            env.reset_from(header.seed, ic)?;
        }
        None => {
            env.reset(header.seed);
        }
    }
    for (i, line) in log.lines.iter().enumerate().skip(1) {
        let LogLine::Action(rec) = LogLine::parse(line)? else { continue };
        if let Err(e) = env.step(&rec.action) {
            return match e {
                Error::EpisodeFinished | Error::InvalidAction(_) => Ok(ReplayReport::Diverged {
                    line: i + 1,
                    tick: Some(env.world().tick),
                    expected: e.to_string(),
                    found: line.clone(),
                }),
                other => Err(other),
            };
        }
    }
    let regenerated = env.take_log().expect("logging was enabled");
    let n = regenerated.lines.len().max(log.lines.len());
    for i in 0..n {
        let want = regenerated.lines.get(i);
        let got = log.lines.get(i);
        if want != got {
            let tick = want.and_then(|l| match LogLine::parse(l) {
                Ok(LogLine::Tick(t)) => Some(t.tick),
                _ => None,
            });
            return Ok(ReplayReport::Diverged {
                line: i + 1,
                tick,
                expected: want.cloned().unwrap_or_else(|| "<end of log>".into()),
                found: got.cloned().unwrap_or_else(|| "<end of log>".into()),
            });
        }
    }
    Ok(ReplayReport::Identical { lines: n })
}
