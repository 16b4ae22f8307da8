//! Sweep orchestration: run the full (L, δ, seed) grid, one run directory
//! per cell, then write `manifest.json` and a deterministic `summary.csv`.
//!
//! Work is organized in three phases. First the steady families are
//! enumerated once per distinct L and δ-continued once per (L, δ); both
//! caches are shared read-only by every cell. Second the cells execute on
//! the worker pool ([`crate::par::par_map`]): each integrates one random
//! seed with the exponential stepper, checking the ω-limit classification
//! at a fixed time cadence so converged runs stop early (the stepper is a
//! one-step method, so stopping early does not change the computed states).
//! Third, after the join, the manifest and summary are written once.
//!
//! Failures are confined to their cell: a blow-up or continuation error is
//! recorded in the manifest (`status = "failed"`) and the sweep continues.
//! `summary.csv` excludes wall-clock columns so a rerun with the same
//! config and seeds is bit-identical; wall times live in `manifest.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::continuation::continue_to;
use crate::error::{Error, Result};
use crate::evolution::{
    classify_omega, classify_state, default_dt, e1_energy, free_energy, ClassifyTol, OmegaVerdict,
    Stepper, TrajectoryRecord, DEFAULT_C0,
};
use crate::init::{random_field, DEFAULT_INIT_RMS};
use crate::io::{self, fmt_full, RunMeta};
use crate::par::par_map;
use crate::phase_plane::{enumerate_families, Profile, DEFAULT_SCAN};
use crate::spectral::{Field, SpectralGrid};

/// Time between classification checks (and energy samples) along a cell
/// trajectory. Snapshots are kept at the same cadence, so run directories
/// record everything the verdict was computed from.
pub const CHECK_INTERVAL: f64 = 2.0;

/// δ distance covered per continuation step when building the per-(L, δ)
/// family cache.
pub const CONTINUATION_STEP: f64 = 0.0125;

/// One cell of the sweep grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CellSpec {
    pub l: f64,
    pub delta: f64,
    pub seed: u64,
}

/// Everything the manifest records about one cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellOutcome {
    pub l: f64,
    pub delta: f64,
    pub seed: u64,
    /// `"ok"` when the trajectory ran and was classified; `"failed"` when
    /// the cell aborted (blow-up, continuation failure, I/O trouble).
    pub status: String,
    /// Verdict name: `ConvergedToFamily`, `Undecided`, `NonStationary`,
    /// or empty for failed cells.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_id: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_velocity: Option<f64>,
    /// Time actually reached (early-stopped runs end before T).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    /// L within `tol::DEGENERATE_L` of a bifurcation length 2πk; the cell
    /// still runs, but nearby families make classification delicate.
    pub degenerate_l: bool,
    pub run_dir: String,
    pub wall_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Sweep result: the configuration echo plus one outcome per cell, in
/// grid order (L outermost, then δ, then seed).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepManifest {
    pub config: ExperimentConfig,
    pub cells: Vec<CellOutcome>,
}

impl SweepManifest {
    /// True if every cell ran and was classified onto a family.
    pub fn all_converged(&self) -> bool {
        self.cells
            .iter()
            .all(|c| c.status == "ok" && c.verdict == "ConvergedToFamily")
    }
}

/// Deterministic run-directory name for a cell.
pub fn cell_dir_name(cell: &CellSpec) -> String {
    format!("L{}_d{}_s{}", cell.l, cell.delta, cell.seed)
}

fn verdict_name(v: &OmegaVerdict) -> &'static str {
    match v {
        OmegaVerdict::ConvergedToFamily { .. } => "ConvergedToFamily",
        OmegaVerdict::Undecided => "Undecided",
        OmegaVerdict::NonStationary => "NonStationary",
    }
}

/// Families available at one (L, δ): the δ=0 enumeration continued in δ.
struct FamilySet {
    profiles: Vec<Profile>,
    degenerate_l: bool,
}

/// March one seed, checking classification every [`CHECK_INTERVAL`]; the
/// record holds energies and a snapshot at every check.
fn march_cell(
    u0: &Field,
    delta: f64,
    t_final: f64,
    dt: f64,
    families: &[Profile],
    tolerances: &ClassifyTol,
) -> Result<TrajectoryRecord> {
    let grid = u0.grid().clone();
    let mut stepper = Stepper::new(grid.clone(), delta, dt)?;
    let mut coeffs = u0.coeffs().to_vec();
    let n_steps = (t_final / dt).round().max(1.0) as u64;
    let check_steps = (CHECK_INTERVAL / dt).round().max(1.0) as u64;
    let mean0 = u0.mean();

    let mut rec = TrajectoryRecord {
        delta,
        times: Vec::new(),
        snapshots: Vec::new(),
        f_values: Vec::new(),
        e1_values: Vec::new(),
        velocity: Vec::new(),
        means: Vec::new(),
        mean_drift: 0.0,
    };
    let record = |rec: &mut TrajectoryRecord,
                      stepper: &mut Stepper,
                      coeffs: &[Complex64],
                      t: f64|
     -> Result<()> {
        let field = Field::from_coeffs(grid.clone(), coeffs.to_vec())?;
        let l2 = field.l2_norm();
        if !l2.is_finite() || l2 > 1e4 {
            return Err(Error::BlowUp { time: t });
        }
        rec.times.push(t);
        rec.f_values.push(free_energy(&field));
        rec.e1_values.push(e1_energy(&field, delta, DEFAULT_C0)?);
        rec.velocity.push(stepper.velocity_now(coeffs));
        let mean = field.mean();
        rec.means.push(mean);
        rec.mean_drift = rec.mean_drift.max((mean - mean0).abs());
        rec.snapshots.push(field);
        Ok(())
    };

    record(&mut rec, &mut stepper, &coeffs, 0.0)?;
    let mut step = 0u64;
    while step < n_steps {
        stepper.step(&mut coeffs);
        step += 1;
        if step % check_steps == 0 || step == n_steps {
            record(&mut rec, &mut stepper, &coeffs, step as f64 * dt)?;
            let last = rec.snapshots.last().unwrap();
            if rec.velocity.last().unwrap() < &tolerances.vel
                && classify_state(last, delta, families, tolerances)?.is_some()
            {
                break;
            }
        }
    }
    Ok(rec)
}

fn run_cell(
    cell: &CellSpec,
    config: &ExperimentConfig,
    families: &std::result::Result<Arc<FamilySet>, String>,
    out_root: &Path,
) -> CellOutcome {
    let t0 = Instant::now();
    let dir_name = cell_dir_name(cell);
    let run_dir = out_root.join(&dir_name);
    let mut outcome = CellOutcome {
        l: cell.l,
        delta: cell.delta,
        seed: cell.seed,
        status: "failed".into(),
        verdict: String::new(),
        family_id: None,
        distance: None,
        final_velocity: None,
        t_end: None,
        degenerate_l: false,
        run_dir: dir_name,
        wall_seconds: 0.0,
        error: None,
    };

    let fams = match families {
        Ok(f) => f,
        Err(msg) => {
            outcome.error = Some(msg.clone());
            outcome.wall_seconds = t0.elapsed().as_secs_f64();
            return outcome;
        }
    };
    outcome.degenerate_l = fams.degenerate_l;

    let attempt = || -> Result<(TrajectoryRecord, RunMeta)> {
        let grid = SpectralGrid::new(cell.l, config.n)?;
        let dt = config.dt.unwrap_or_else(|| default_dt(&grid));
        let u0 = random_field(grid.clone(), cell.seed, DEFAULT_INIT_RMS)?;
        let meta = RunMeta {
            l: cell.l,
            n: config.n,
            delta: cell.delta,
            dt,
            t_final: config.t_final,
            seed: cell.seed,
            tolerances: config.tolerances,
        };
        let rec = march_cell(
            &u0,
            cell.delta,
            config.t_final,
            dt,
            &fams.profiles,
            &config.tolerances,
        )?;
        Ok((rec, meta))
    };

    match attempt() {
        Ok((rec, meta)) => {
            let persist = io::write_run_dir(&run_dir, &meta, &rec)
                .and_then(|()| classify_omega(&rec, &fams.profiles, &config.tolerances));
            match persist {
                Ok(report) => {
                    outcome.status = "ok".into();
                    outcome.verdict = verdict_name(&report.verdict).into();
                    if let OmegaVerdict::ConvergedToFamily { family_id, distance, .. } =
                        report.verdict
                    {
                        outcome.family_id = Some(family_id);
                        outcome.distance = Some(distance);
                    }
                    outcome.final_velocity = Some(report.final_velocity);
                    outcome.t_end = Some(report.final_time);
                }
                Err(e) => outcome.error = Some(e.to_string()),
            }
        }
        Err(e) => outcome.error = Some(e.to_string()),
    }
    outcome.wall_seconds = t0.elapsed().as_secs_f64();
    outcome
}

/// Build the per-(L, δ) family caches. Enumeration runs once per distinct
/// L; continuation once per (L, δ). Errors are cached as strings so every
/// affected cell reports the same cause without re-running the failure.
fn family_caches(
    config: &ExperimentConfig,
) -> BTreeMap<(u64, u64), std::result::Result<Arc<FamilySet>, String>> {
    let mut base: BTreeMap<u64, std::result::Result<(Arc<Vec<Profile>>, bool), String>> =
        BTreeMap::new();
    for &l in &config.l {
        base.entry(l.to_bits()).or_insert_with(|| {
            enumerate_families(l, config.n, DEFAULT_SCAN)
                .map(|e| (Arc::new(e.families), e.degenerate_l))
                .map_err(|e| format!("family enumeration at L = {l} failed: {e}"))
        });
    }

    let mut out = BTreeMap::new();
    for &l in &config.l {
        for &delta in &config.delta {
            let key = (l.to_bits(), delta.to_bits());
            if out.contains_key(&key) {
                continue;
            }
            let value = match &base[&l.to_bits()] {
                Err(msg) => Err(msg.clone()),
                Ok((profiles, degenerate_l)) => {
                    let steps = ((delta.abs() / CONTINUATION_STEP).ceil() as usize).max(4);
                    let continued: Result<Vec<Profile>> = profiles
                        .iter()
                        .map(|p| Ok(continue_to(delta, p, steps)?.profile))
                        .collect();
                    match continued {
                        Ok(profiles) => {
                            Ok(Arc::new(FamilySet { profiles, degenerate_l: *degenerate_l }))
                        }
                        Err(e) => Err(format!(
                            "continuation to delta = {delta} at L = {l} failed: {e}"
                        )),
                    }
                }
            };
            out.insert(key, value);
        }
    }
    out
}

fn summary_csv(cells: &[CellOutcome]) -> String {
    let mut s = String::from(
        "L,delta,seed,status,verdict,family,distance,velocity,t_end,degenerate_L,run_dir\n",
    );
    let opt = |v: Option<f64>| v.map(fmt_full).unwrap_or_default();
    for c in cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            fmt_full(c.l),
            fmt_full(c.delta),
            c.seed,
            c.status,
            c.verdict,
            c.family_id.map(|f| f.to_string()).unwrap_or_default(),
            opt(c.distance),
            opt(c.final_velocity),
            opt(c.t_end),
            c.degenerate_l,
            c.run_dir,
        );
    }
    s
}

/// Execute the sweep described by `config`; returns the manifest after
/// writing `manifest.json` and `summary.csv` under `config.output_dir`.
pub fn sweep(config: &ExperimentConfig) -> Result<SweepManifest> {
    config.validate()?;
    config.ensure_output_dir()?;

    let mut cells = Vec::new();
    for &l in &config.l {
        for &delta in &config.delta {
            for &seed in &config.seeds {
                cells.push(CellSpec { l, delta, seed });
            }
        }
    }

    // Family enumeration is the expensive shared phase; skip it outright
    // for an empty grid.
    let outcomes = if cells.is_empty() {
        Vec::new()
    } else {
        let caches = family_caches(config);
        par_map(&cells, |cell| {
            let fams = &caches[&(cell.l.to_bits(), cell.delta.to_bits())];
            run_cell(cell, config, fams, &config.output_dir)
        })
    };

    let manifest = SweepManifest { config: config.clone(), cells: outcomes };
    let json = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(config.output_dir.join("manifest.json"), json)?;
    fs::write(config.output_dir.join("summary.csv"), summary_csv(&manifest.cells))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn tiny_config(dir: &Path) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.l = vec![10.0];
        cfg.delta = vec![0.0];
        cfg.n = 64;
        cfg.t_final = 40.0;
        cfg.seeds = vec![0];
        cfg.output_dir = dir.to_path_buf();
        cfg
    }

    #[test]
    fn empty_grid_yields_empty_manifest() {
        let dir = tempdir().unwrap();
        let mut cfg = tiny_config(dir.path());
        cfg.seeds = vec![];
        let manifest = sweep(&cfg).unwrap();
        assert!(manifest.cells.is_empty());
        assert!(manifest.all_converged());
        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(summary.lines().count(), 1);
        assert!(dir.path().join("manifest.json").exists());
    }

    #[test]
    fn single_cell_runs_and_repeats_bitwise() {
        // Small grid, short horizon: the seed-0 trajectory classifies
        // quickly at N = 64 and the rerun must reproduce summary.csv
        // byte for byte.
        let dir = tempdir().unwrap();
        let cfg = tiny_config(dir.path());
        let manifest = sweep(&cfg).unwrap();
        assert_eq!(manifest.cells.len(), 1);
        let cell = &manifest.cells[0];
        assert_eq!(cell.status, "ok", "cell failed: {:?}", cell.error);
        let summary1 = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert!(dir.path().join(&cell.run_dir).join("meta.json").exists());
        assert!(dir.path().join(&cell.run_dir).join("energies.csv").exists());

        let dir2 = tempdir().unwrap();
        let mut cfg2 = cfg.clone();
        cfg2.output_dir = dir2.path().to_path_buf();
        sweep(&cfg2).unwrap();
        let summary2 = fs::read_to_string(dir2.path().join("summary.csv")).unwrap();
        assert_eq!(summary1, summary2);
    }

    #[test]
    fn cell_failures_are_recorded_not_fatal() {
        // Blocking one cell's run directory with a plain file forces an
        // I/O failure in that cell; the sweep must record it and carry on
        // with the remaining cell.
        let dir = tempdir().unwrap();
        let mut cfg = tiny_config(dir.path());
        cfg.seeds = vec![0, 1];
        cfg.t_final = 10.0;
        let blocked = cell_dir_name(&CellSpec { l: 10.0, delta: 0.0, seed: 0 });
        fs::write(dir.path().join(&blocked), b"in the way").unwrap();

        let manifest = sweep(&cfg).unwrap();
        assert_eq!(manifest.cells.len(), 2);
        assert_eq!(manifest.cells[0].status, "failed");
        assert!(manifest.cells[0].error.is_some());
        assert_eq!(manifest.cells[1].status, "ok", "{:?}", manifest.cells[1].error);
        assert!(!manifest.all_converged());

        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(summary.lines().count(), 3);
        assert!(summary.lines().nth(1).unwrap().contains("failed"));
        assert!(dir.path().join("manifest.json").exists());
    }

    #[test]
    fn degenerate_length_is_flagged_but_runs() {
        let dir = tempdir().unwrap();
        let mut cfg = tiny_config(dir.path());
        cfg.l = vec![2.0 * std::f64::consts::PI];
        cfg.t_final = 20.0;
        let manifest = sweep(&cfg).unwrap();
        let cell = &manifest.cells[0];
        assert!(cell.degenerate_l);
        assert_eq!(cell.status, "ok", "cell failed: {:?}", cell.error);
    }
}
