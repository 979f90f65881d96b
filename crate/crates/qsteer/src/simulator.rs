//! Schedule verification by propagation, two independent ways.
//!
//! `propagate_exact` applies the closed-form pulse propagators in time
//! order. `propagate_numeric` integrates the Schrodinger equation
//!
//! ```text
//! i d/dt psi = sum_k [ u_{y,k}(t) y_{N,k} + u_{z,k}(t) z_{N,k} ] psi
//! ```
//!
//! with fixed-step RK4, never touching the closed forms, so the two
//! paths cross-check each other's sign conventions. The numeric path
//! also accepts fields that no schedule can express, such as two
//! channels driven simultaneously.

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{build, CMatrix, OperatorKind};
use crate::scheduler::Schedule;
use crate::states::{fidelity, PureState};
use crate::waveforms::{Channel, Pulse, WaveformFamily};

/// One scalar control term: a function of time on a finite support,
/// driving a single y/z channel.
pub struct FieldTerm {
    pub channel: Channel,
    pub index: usize,
    pub t0: f64,
    pub t1: f64,
    /// Interior instants where the term is continuous but not smooth
    /// (e.g. a triangle apex); integrators align their grids to these.
    pub kinks: Vec<f64>,
    func: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl FieldTerm {
    pub fn new(
        channel: Channel,
        index: usize,
        t0: f64,
        t1: f64,
        func: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            channel,
            index,
            t0,
            t1,
            kinks: Vec::new(),
            func: Box::new(func),
        }
    }

    pub fn with_kinks(mut self, kinks: Vec<f64>) -> Self {
        self.kinks = kinks;
        self
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        if t < self.t0 || t >= self.t1 {
            0.0
        } else {
            (self.func)(t)
        }
    }
}

/// Piecewise-continuous control field for an N-level system.
pub struct ControlField {
    pub dim: usize,
    pub terms: Vec<FieldTerm>,
}

impl ControlField {
    pub fn new(dim: usize, terms: Vec<FieldTerm>) -> Self {
        Self { dim, terms }
    }

    /// Field realizing a schedule: per-channel sum of its pulses.
    pub fn from_schedule(schedule: &Schedule) -> Self {
        let terms = schedule
            .pulses
            .iter()
            .cloned()
            .map(|p: Pulse| {
                // polynomial pulses have a non-smooth apex at midpoint
                let kinks = match p.family {
                    WaveformFamily::LocalPoly(_) => vec![0.5 * (p.t0 + p.t1)],
                    _ => Vec::new(),
                };
                FieldTerm::new(p.channel, p.index, p.t0, p.t1, move |t| p.evaluate(t))
                    .with_kinks(kinks)
            })
            .collect();
        Self {
            dim: schedule.dim,
            terms,
        }
    }

    /// Scalar value of channel (ch, k) at time t.
    pub fn channel_value(&self, ch: Channel, index: usize, t: f64) -> f64 {
        self.terms
            .iter()
            .filter(|term| term.channel == ch && term.index == index)
            .map(|term| term.evaluate(t))
            .sum()
    }

    /// Time boundaries where any term starts or ends, sorted and deduped.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|t| t.kinks.iter().copied().chain([t.t0, t.t1]))
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        pts
    }
}

/// The one-rotation qubit control pair, a fixed test vector:
/// u_y = u_z = sin(4 sqrt(2) t / pi) on [0, sqrt(2) pi^2 / 8).
/// Returns the field and its end time. Repeating the same sine for
/// `periods` extra half-periods regenerates the target periodically.
pub fn one_rotation_qubit_field(extra_periods: u32) -> (ControlField, f64) {
    let half = 2f64.sqrt() * std::f64::consts::PI.powi(2) / 8.0;
    let t_end = half + f64::from(extra_periods) * 2.0 * half;
    let omega = 4.0 * 2f64.sqrt() / std::f64::consts::PI;
    let f = move |t: f64| (omega * t).sin();
    let terms = vec![
        FieldTerm::new(Channel::Y, 0, 0.0, t_end, f),
        FieldTerm::new(Channel::Z, 0, 0.0, t_end, f),
    ];
    (ControlField::new(2, terms), t_end)
}

/// Sampled states along a numeric propagation.
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PureState>,
    /// Fidelity with the reference target at each instant; empty when no
    /// target was supplied.
    pub fidelities: Vec<f64>,
    /// Number of renormalizations applied when norm drift exceeded 1e-9.
    pub renormalizations: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> &PureState {
        self.states.last().expect("trajectory has at least the initial sample")
    }
}

/// Apply the closed-form propagator of each pulse in time order.
///
/// Fails with `UnsupportedSchedule` if pulse supports overlap; such
/// fields need `propagate_numeric`.
pub fn propagate_exact(schedule: &Schedule, initial: &PureState) -> Result<PureState> {
    if initial.dim() != schedule.dim {
        return Err(Error::DimensionMismatch {
            expected: schedule.dim,
            got: initial.dim(),
        });
    }
    let mut pulses: Vec<&Pulse> = schedule.pulses.iter().collect();
    pulses.sort_by(|a, b| a.t0.total_cmp(&b.t0));
    for pair in pulses.windows(2) {
        if pair[1].t0 < pair[0].t1 - 1e-12 {
            return Err(Error::UnsupportedSchedule(
                "overlapping pulses; use propagate_numeric".into(),
            ));
        }
    }
    let mut amps = Array1::from_vec(initial.amplitudes().to_vec());
    for pulse in pulses {
        let delta_f = f64::from(pulse.sign) * pulse.area();
        let u = match pulse.channel {
            Channel::Y => crate::operators::expm_y(delta_f, schedule.dim, pulse.index)?,
            Channel::Z => crate::operators::expm_z(delta_f, schedule.dim, pulse.index)?,
        };
        amps = u.dot(&amps);
    }
    PureState::new(amps.to_vec())
}

fn hamiltonian_cache(dim: usize) -> (Vec<CMatrix>, Vec<CMatrix>) {
    let ys = (0..dim - 1)
        .map(|k| build(OperatorKind::Y, dim, k).expect("valid index"))
        .collect();
    let zs = (0..dim - 1)
        .map(|k| build(OperatorKind::Z, dim, k).expect("valid index"))
        .collect();
    (ys, zs)
}

/// Fixed-step RK4 integration of the Schrodinger equation under `field`.
///
/// Steps are split at field breakpoints so discontinuous controls stay
/// aligned to the grid. One sample is recorded per step. Norm drift
/// beyond 1e-9 triggers a recorded renormalization.
pub fn propagate_numeric(
    field: &ControlField,
    initial: &PureState,
    t_end: f64,
    step: f64,
    target: Option<&PureState>,
) -> Result<Trajectory> {
    if initial.dim() != field.dim {
        return Err(Error::DimensionMismatch {
            expected: field.dim,
            got: initial.dim(),
        });
    }
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("step must be > 0, got {step}")));
    }
    let dim = field.dim;
    let (ys, zs) = hamiltonian_cache(dim);
    let minus_i = Complex64::new(0.0, -1.0);

    // -i H(t) psi
    let rhs = |t: f64, psi: &Array1<Complex64>| -> Result<Array1<Complex64>> {
        let mut out: Array1<Complex64> = Array1::zeros(dim);
        for k in 0..dim - 1 {
            let uy = field.channel_value(Channel::Y, k, t);
            let uz = field.channel_value(Channel::Z, k, t);
            if !uy.is_finite() || !uz.is_finite() {
                return Err(Error::Integration(format!(
                    "non-finite control value at t = {t}"
                )));
            }
            if uy != 0.0 {
                out = out + ys[k].dot(psi).mapv(|x| x * uy);
            }
            if uz != 0.0 {
                out = out + zs[k].dot(psi).mapv(|x| x * uz);
            }
        }
        Ok(out.mapv(|x| x * minus_i))
    };

    // segment the time axis at field breakpoints
    let mut cuts: Vec<f64> = field
        .breakpoints()
        .into_iter()
        .filter(|&t| t > 1e-15 && t < t_end - 1e-15)
        .collect();
    cuts.push(t_end);
    let mut segments = Vec::new();
    let mut prev = 0.0;
    for c in cuts {
        if c > prev + 1e-15 {
            segments.push((prev, c));
            prev = c;
        }
    }

    let mut psi = Array1::from_vec(initial.amplitudes().to_vec());
    let mut times = vec![0.0];
    let mut states = vec![initial.clone()];
    let mut renormalizations = 0usize;

    for (a, b) in segments {
        let nsteps = (((b - a) / step).ceil() as usize).max(1);
        let h = (b - a) / nsteps as f64;
        for s in 0..nsteps {
            let t = a + s as f64 * h;
            // the right endpoint of a segment belongs to the next segment
            // for discontinuous fields, so the k4 stage of the last step
            // must take the field's left limit at the boundary
            let t_right = if s + 1 == nsteps {
                b - (b - a) * 1e-12
            } else {
                t + h
            };
            let k1 = rhs(t, &psi)?;
            let k2 = rhs(t + 0.5 * h, &(psi.clone() + k1.mapv(|x| x * Complex64::new(0.5 * h, 0.0))))?;
            let k3 = rhs(t + 0.5 * h, &(psi.clone() + k2.mapv(|x| x * Complex64::new(0.5 * h, 0.0))))?;
            let k4 = rhs(t_right, &(psi.clone() + k3.mapv(|x| x * Complex64::new(h, 0.0))))?;
            let hh = Complex64::new(h / 6.0, 0.0);
            psi = psi + (k1 + k2.mapv(|x| x * 2.0) + k3.mapv(|x| x * 2.0) + k4).mapv(|x| x * hh);

            let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                psi.mapv_inplace(|x| x / norm);
                renormalizations += 1;
            }
            times.push(t + h);
            states.push(PureState::normalized(psi.to_vec())?);
        }
    }

    let fidelities = match target {
        Some(tgt) => states
            .iter()
            .map(|s| fidelity(s, tgt))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };

    Ok(Trajectory {
        times,
        states,
        fidelities,
        renormalizations,
    })
}

/// 2-norm distance between two states after aligning global phase on
/// the larger state's dominant amplitude.
pub fn state_distance(a: &PureState, b: &PureState) -> f64 {
    let idx = a
        .amplitudes()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let align = |c: Complex64| if c.norm() > 0.0 { c / c.norm() } else { Complex64::new(1.0, 0.0) };
    let pa = align(a.amplitudes()[idx]);
    let pb = align(b.amplitudes()[idx]);
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x / pa - y / pb).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Bloch-sphere coordinates of a qubit state:
/// x = 2 Re(c0* c1), y = 2 Im(c0* c1), z = |c0|^2 - |c1|^2.
pub fn bloch_coordinates(state: &PureState) -> Result<(f64, f64, f64)> {
    if state.dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "Bloch coordinates need a qubit, got dim {}",
            state.dim()
        )));
    }
    let c0 = state.amplitudes()[0];
    let c1 = state.amplitudes()[1];
    let cross = c0.conj() * c1;
    Ok((
        2.0 * cross.re,
        2.0 * cross.im,
        c0.norm_sqr() - c1.norm_sqr(),
    ))
}

/// CSV with columns t, re/im of each amplitude, fidelity (when present),
/// and Bloch coordinates for qubits.
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let dim = traj.states.first().map_or(0, |s| s.dim());
    let mut header = String::from("t");
    for n in 0..dim {
        header.push_str(&format!(",re_c{n},im_c{n}"));
    }
    if !traj.fidelities.is_empty() {
        header.push_str(",fidelity");
    }
    if dim == 2 {
        header.push_str(",bloch_x,bloch_y,bloch_z");
    }
    let mut out = header;
    out.push('\n');
    for (i, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        out.push_str(&format!("{t:.17e}"));
        for c in s.amplitudes() {
            out.push_str(&format!(",{:.17e},{:.17e}", c.re, c.im));
        }
        if !traj.fidelities.is_empty() {
            out.push_str(&format!(",{:.17e}", traj.fidelities[i]));
        }
        if dim == 2 {
            let (x, y, z) = bloch_coordinates(s).expect("dim checked");
            out.push_str(&format!(",{x:.17e},{y:.17e},{z:.17e}"));
        }
        out.push('\n');
    }
    out
}

/// CSV of sampled control traces: t, u_y_0, u_z_0, ..., u_y_{N-2},
/// u_z_{N-2}, with `samples_per_pulse` points per pulse interval.
pub fn controls_to_csv(schedule: &Schedule, samples_per_pulse: usize) -> String {
    let field = ControlField::from_schedule(schedule);
    let dim = schedule.dim;
    let mut out = String::from("t");
    for k in 0..dim - 1 {
        out.push_str(&format!(",u_y_{k},u_z_{k}"));
    }
    out.push('\n');
    let mut write_row = |t: f64| {
        out.push_str(&format!("{t:.17e}"));
        for k in 0..dim - 1 {
            out.push_str(&format!(
                ",{:.17e},{:.17e}",
                field.channel_value(Channel::Y, k, t),
                field.channel_value(Channel::Z, k, t)
            ));
        }
        out.push('\n');
    };
    if schedule.pulses.is_empty() {
        write_row(0.0);
    }
    for pulse in &schedule.pulses {
        let n = samples_per_pulse.max(2);
        for i in 0..n {
            let t = pulse.t0 + (i as f64 / (n - 1) as f64) * (pulse.t1 - pulse.t0);
            // keep the sample inside the half-open support
            let t = t.min(pulse.t1 - 1e-12 * pulse.duration());
            write_row(t);
        }
    }
    out
}
