//! Plot-ready per-unit time series from an episode log.
//!
//! One table per unit with the columns in [`COLUMNS`]. `range_m` is the
//! distance from an aircraft to its opponent (or, with no opponent, to the
//! nearest missile fired at it) and from a missile to its target.

use std::io::Write;
use std::path::{Path, PathBuf};

use super::log::{EpisodeLog, TickRecord};
use crate::atmosphere::Atmosphere;
use crate::error::{Error, Result};
use crate::unit::UnitId;
use crate::Vec3F64;

pub const COLUMNS: [&str; 6] = ["time_s", "altitude_m", "speed_mps", "mach", "heading_deg", "range_m"];

#[derive(Debug, Clone, PartialEq)]
pub struct UnitSeries {
    pub id: UnitId,
    /// `aircraft` or `missile`.
    pub kind: &'static str,
    pub rows: Vec<[f64; 6]>,
}

impl UnitSeries {
    pub fn file_name(&self) -> String {
        format!("{}_{}.tsv", self.kind, self.id.0)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = COLUMNS.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_tsv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{}", COLUMNS.join("\t"))?;
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(w, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

fn row(atm: &Atmosphere<f64>, time: f64, pos: &Vec3F64, vel: &Vec3F64, range: f64) -> [f64; 6] {
    let alt = -pos.z;
    let speed = vel.norm();
    let heading = vel.y.atan2(vel.x).to_degrees().rem_euclid(360.0);
    [time, alt, speed, atm.mach(speed, alt), heading, range]
}

fn series_for(id: UnitId, kind: &'static str, out: &mut Vec<UnitSeries>) -> usize {
    if let Some(i) = out.iter().position(|s| s.id == id) {
        return i;
    }
    out.push(UnitSeries { id, kind, rows: vec![] });
    out.len() - 1
}

fn add_tick(atm: &Atmosphere<f64>, t: &TickRecord, out: &mut Vec<UnitSeries>) {
    for a in &t.aircraft {
        let opponent = t.aircraft.iter().find(|o| o.side != a.side).map(|o| (o.position - a.position).norm());
        let nearest_threat =
            t.missiles.iter().filter(|m| m.target == a.id).map(|m| (m.position - a.position).norm()).reduce(f64::min);
        let range = opponent.or(nearest_threat).unwrap_or(f64::NAN);
        let i = series_for(a.id, "aircraft", out);
        out[i].rows.push(row(atm, t.time, &a.position, &a.velocity, range));
    }
    for m in &t.missiles {
        let range = t.aircraft.iter().find(|a| a.id == m.target).map_or(f64::NAN, |a| (a.position - m.position).norm());
        let i = series_for(m.id, "missile", out);
        // A terminated missile stops moving; keep only its final sample.
        if let (Some(last), true) = (out[i].rows.last(), m.outcome != crate::missile::Outcome::Active) {
            if last[1] == -m.position.z && last[2] == m.velocity.norm() {
                continue;
            }
        }
        out[i].rows.push(row(atm, t.time, &m.position, &m.velocity, range));
    }
}

/// Per-unit trajectories in order of first appearance.
pub fn trajectories(log: &EpisodeLog) -> Result<Vec<UnitSeries>> {
    let atm = Atmosphere::standard();
    let mut out = Vec::new();
    let mut any = false;
    for t in log.ticks() {
        add_tick(&atm, &t?, &mut out);
        any = true;
    }
    if !any {
        return Err(Error::NoTicks);
    }
    Ok(out)
}

/// Writes one TSV per unit into `dir`; returns the paths written.
pub fn export_trajectories(log: &EpisodeLog, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    trajectories(log)?
        .iter()
        .map(|s| {
            let path = dir.join(s.file_name());
            let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
            s.write_tsv(&mut f)?;
            f.flush()?;
            Ok(path)
        })
        .collect()
}
