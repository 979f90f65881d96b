//! Command implementations behind the `qsteer` binary: synthesize,
//! verify, table, and a randomized selftest. Each writes its artifacts
//! into an output directory and returns a JSON-serializable summary.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Job;
use crate::error::{Error, Result};
use crate::performance::{
    closed_form_jt, closed_form_jte, measured_jte, optimal_amplitude, render_table, table1,
    PerformanceReport,
};
use crate::scheduler::{c_constants, synthesize, Schedule, TransitionSpec};
use crate::simulator::{
    controls_to_csv, propagate_exact, propagate_numeric, state_distance, trajectory_to_csv,
    ControlField,
};
use crate::states::fidelity;

/// Numeric-path fidelity below this fails verification (CLI exit 3).
pub const VERIFY_FIDELITY_THRESHOLD: f64 = 1.0 - 1e-6;

#[derive(Debug, Serialize, Deserialize)]
pub struct SynthesisSummary {
    pub pulse_count: usize,
    pub t_f: f64,
    pub amplitude: f64,
    pub c1: f64,
    pub c2: f64,
    /// Minimum transition time at the amplitude bound; 0 when unbounded.
    pub j_t: f64,
    pub j_te: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub exact_fidelity: f64,
    pub numeric_fidelity: f64,
    /// State 2-norm distance (up to global phase) between the two
    /// propagators' final states.
    pub propagator_discrepancy: f64,
    pub measured_jte: f64,
    pub rk4_renormalizations: usize,
    pub pass: bool,
}

fn optimal_schedule(job: &Job) -> Result<(Schedule, f64)> {
    let amplitude = optimal_amplitude(job.family, &job.params);
    let spec = TransitionSpec::shared_amplitude(
        job.initial.clone(),
        job.target.clone(),
        job.family,
        amplitude,
    );
    Ok((synthesize(&spec)?, amplitude))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .map_err(|e| Error::InvalidInput(format!("output_dir: {e}")))?;
    }
    fs::write(path, contents).map_err(|e| Error::InvalidInput(format!("output_dir: {e}")))
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable summary");
    s.push('\n');
    s
}

/// Synthesize the optimal-amplitude schedule; writes `schedule.json` and
/// `controls.csv`.
pub fn cmd_synthesize(job: &Job, out_dir: &Path) -> Result<SynthesisSummary> {
    let (schedule, amplitude) = optimal_schedule(job)?;
    let (c1, c2) = c_constants(&job.initial, &job.target)?;
    let j_t = match job.params.bound {
        Some(l) => closed_form_jt(job.family, c1, c2, l)?,
        None => 0.0,
    };
    write(&out_dir.join("schedule.json"), &to_json_pretty(&schedule))?;
    write(
        &out_dir.join("controls.csv"),
        &controls_to_csv(&schedule, job.samples_per_pulse),
    )?;
    Ok(SynthesisSummary {
        pulse_count: schedule.pulses.len(),
        t_f: schedule.t_f,
        amplitude,
        c1,
        c2,
        j_t,
        j_te: closed_form_jte(job.family, c1, c2, &job.params),
    })
}

/// Verify a schedule with both propagators; writes `trajectory.csv` and
/// `report.json`.
pub fn verify_schedule(job: &Job, schedule: &Schedule, out_dir: &Path) -> Result<VerifyReport> {
    let initial = job.initial.to_amplitudes();
    let target = job.target.to_amplitudes();

    let exact_final = propagate_exact(schedule, &initial)?;
    let min_dt = schedule
        .pulses
        .iter()
        .map(|p| p.duration())
        .fold(f64::INFINITY, f64::min);
    let step = if schedule.pulses.is_empty() {
        1.0
    } else {
        min_dt / job.rk4_steps_per_pulse as f64
    };
    let traj = propagate_numeric(
        &ControlField::from_schedule(schedule),
        &initial,
        schedule.t_f,
        step,
        Some(&target),
    )?;

    let numeric_fidelity = fidelity(traj.final_state(), &target)?;
    let report = VerifyReport {
        exact_fidelity: fidelity(&exact_final, &target)?,
        numeric_fidelity,
        propagator_discrepancy: state_distance(&exact_final, traj.final_state()),
        measured_jte: measured_jte(schedule, job.params.lambda)?,
        rk4_renormalizations: traj.renormalizations,
        pass: numeric_fidelity >= VERIFY_FIDELITY_THRESHOLD,
    };
    write(&out_dir.join("trajectory.csv"), &trajectory_to_csv(&traj))?;
    write(&out_dir.join("report.json"), &to_json_pretty(&report))?;
    Ok(report)
}

/// Synthesize and verify in one step.
pub fn cmd_verify(job: &Job, out_dir: &Path) -> Result<VerifyReport> {
    let (schedule, _) = optimal_schedule(job)?;
    verify_schedule(job, &schedule, out_dir)
}

/// Emit the performance table for the job's transition; writes
/// `table1.json` and `table1.txt`.
pub fn cmd_table(job: &Job, out_dir: &Path) -> Result<Vec<PerformanceReport>> {
    let (c1, c2) = c_constants(&job.initial, &job.target)?;
    let reports = table1(c1, c2, &job.params, &job.orders)?;
    write(&out_dir.join("table1.json"), &to_json_pretty(&reports))?;
    write(&out_dir.join("table1.txt"), &render_table(&reports))?;
    Ok(reports)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SelftestReport {
    pub trials: usize,
    pub failures: usize,
    pub min_exact_fidelity: f64,
    pub max_pulse_count: usize,
}

/// Randomized round-trip check: synthesize random transitions across
/// dims and families and propagate them exactly.
pub fn cmd_selftest(seed: u64, trials: usize) -> Result<SelftestReport> {
    use crate::states::random_state;
    use crate::waveforms::WaveformFamily;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut min_fid = 1.0f64;
    let mut failures = 0usize;
    let mut max_pulses = 0usize;
    for trial in 0..trials {
        let dim = 2 + trial % 5;
        let family = match trial % 3 {
            0 => WaveformFamily::BangBang,
            1 => WaveformFamily::LocalSine,
            _ => WaveformFamily::LocalPoly(1 + (trial as u32 % 6)),
        };
        let init = random_state(&mut rng, dim).to_geometric();
        let tgt = random_state(&mut rng, dim).to_geometric();
        let spec = TransitionSpec::shared_amplitude(init.clone(), tgt.clone(), family, 1.0);
        let schedule = synthesize(&spec)?;
        max_pulses = max_pulses.max(schedule.pulses.len());
        let fin = propagate_exact(&schedule, &init.to_amplitudes())?;
        let fid = fidelity(&fin, &tgt.to_amplitudes())?;
        min_fid = min_fid.min(fid);
        if fid < 1.0 - 1e-8 || schedule.pulses.len() > 4 * dim - 5 {
            failures += 1;
        }
    }
    Ok(SelftestReport {
        trials,
        failures,
        min_exact_fidelity: min_fid,
        max_pulse_count: max_pulses,
    })
}
