//! Three-stage pulse schedule construction.
//!
//! A transition (Theta0; Phi0) -> (Thetas; Phis) is realized by at most
//! 4N-5 single-channel pulses:
//!
//! 1. N-1 Z-pulses driving each initial phase phi_j to 0 along the
//!    shorter arc;
//! 2. N-2 Y-pulses (m = N-1 down to 2) driving theta_m to 0, then one
//!    y_0 pulse moving theta_1 to its target, then N-2 Y-pulses
//!    (m = 2..N-1) raising theta_m to its target;
//! 3. N-1 Z-pulses installing each target phase along the shorter arc.
//!
//! Each pulse must accumulate area dF = delta/2 where delta is the
//! angular distance it traverses: a Z-pulse on channel k advances
//! phi_{k+1} by 2 dF, and a Y-pulse on channel k rotates the adjacent
//! real amplitude pair by dF. Pulse signs follow from the propagator
//! closed forms (positive Z-area advances the phase, positive Y-area
//! increases the polar angle) and are cross-checked against numerical
//! propagation in the test suite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::GeometricState;
use crate::waveforms::{Channel, Pulse, WaveformFamily};

use std::f64::consts::TAU;

/// Angular distances below this produce no pulse.
const DROP_TOL: f64 = 1e-14;

/// Pulse amplitudes for a synthesized schedule.
#[derive(Debug, Clone, PartialEq)]
pub enum Amplitudes {
    /// One amplitude shared by every pulse (the optimal schedules of the
    /// performance module are of this form).
    Shared(f64),
    /// One amplitude per emitted pulse, in schedule order.
    PerPulse(Vec<f64>),
}

/// A requested state transition plus the waveform family and amplitudes
/// to realize it with.
#[derive(Debug, Clone)]
pub struct TransitionSpec {
    pub initial: GeometricState,
    pub target: GeometricState,
    pub family: WaveformFamily,
    pub amplitudes: Amplitudes,
}

impl TransitionSpec {
    pub fn shared_amplitude(
        initial: GeometricState,
        target: GeometricState,
        family: WaveformFamily,
        amplitude: f64,
    ) -> Self {
        Self {
            initial,
            target,
            family,
            amplitudes: Amplitudes::Shared(amplitude),
        }
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }
}

/// Ordered non-overlapping pulse sequence realizing a transition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub dim: usize,
    pub family: WaveformFamily,
    pub pulses: Vec<Pulse>,
    /// t_0 = 0 and one boundary per pulse end; pulse j occupies
    /// [boundaries[j], boundaries[j+1]).
    pub boundaries: Vec<f64>,
    pub t_f: f64,
}

impl Schedule {
    pub fn empty(dim: usize, family: WaveformFamily) -> Self {
        Self {
            dim,
            family,
            pulses: Vec::new(),
            boundaries: vec![0.0],
            t_f: 0.0,
        }
    }

    /// Total schedule duration t_f.
    pub fn transition_time(&self) -> f64 {
        match (self.boundaries.first(), self.boundaries.last()) {
            (Some(first), Some(last)) => last - first,
            _ => 0.0,
        }
    }

    /// Sum of unsigned pulse areas; equals (C1+C2)/2 for a synthesized
    /// schedule.
    pub fn total_area(&self) -> f64 {
        self.pulses.iter().map(|p| p.area()).sum()
    }

    pub fn total_energy(&self) -> f64 {
        self.pulses.iter().map(|p| p.energy()).sum()
    }
}

// A pulse yet to be placed on the time axis.
struct Rotation {
    channel: Channel,
    index: usize,
    sign: i8,
    /// Angular distance traversed; pulse area is half of this.
    delta: f64,
}

/// Shorter-arc distance and direction for a phase move from `from` to
/// `to` (both in [0, 2*pi)). Positive sign advances the phase.
fn phase_step(from: f64, to: f64) -> (f64, i8) {
    let up = (to - from).rem_euclid(TAU); // advance distance
    let down = TAU - up; // retreat distance
    if up <= down {
        (up, 1)
    } else {
        (down, -1)
    }
}

fn rotations(initial: &GeometricState, target: &GeometricState) -> Vec<Rotation> {
    let n = initial.dim();
    let mut rots = Vec::with_capacity(4 * n - 5);

    // stage 1: zero the initial phases
    for j in 1..n {
        let (delta, sign) = phase_step(initial.phi()[j - 1], 0.0);
        rots.push(Rotation {
            channel: Channel::Z,
            index: j - 1,
            sign,
            delta,
        });
    }
    // stage 2a: fold theta_m down to 0, top level first
    for m in (2..n).rev() {
        rots.push(Rotation {
            channel: Channel::Y,
            index: m - 1,
            sign: -1,
            delta: initial.theta()[m - 1],
        });
    }
    // stage 2b: move theta_1 to its target
    let d1 = target.theta()[0] - initial.theta()[0];
    rots.push(Rotation {
        channel: Channel::Y,
        index: 0,
        sign: if d1 >= 0.0 { 1 } else { -1 },
        delta: d1.abs(),
    });
    // stage 2c: raise theta_m to its target, bottom level first
    for m in 2..n {
        rots.push(Rotation {
            channel: Channel::Y,
            index: m - 1,
            sign: 1,
            delta: target.theta()[m - 1],
        });
    }
    // stage 3: install the target phases
    for j in 1..n {
        let (delta, sign) = phase_step(0.0, target.phi()[j - 1]);
        rots.push(Rotation {
            channel: Channel::Z,
            index: j - 1,
            sign,
            delta,
        });
    }
    rots
}

/// Construct the pulse schedule for a transition.
///
/// Zero-distance rotations are dropped; the emitted pulse count is at
/// most 4N-5. With `Amplitudes::PerPulse` the vector length must equal
/// the emitted pulse count.
pub fn synthesize(spec: &TransitionSpec) -> Result<Schedule> {
    if spec.initial.dim() != spec.target.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.initial.dim(),
            got: spec.target.dim(),
        });
    }
    if let WaveformFamily::LocalPoly(0) = spec.family {
        return Err(Error::InvalidInput("polynomial order must be >= 1".into()));
    }
    match &spec.amplitudes {
        Amplitudes::Shared(a) if !(*a > 0.0) => {
            return Err(Error::InvalidInput(format!(
                "amplitude must be > 0, got {a}"
            )));
        }
        Amplitudes::PerPulse(v) if v.iter().any(|a| !(*a > 0.0)) => {
            return Err(Error::InvalidInput("amplitudes must all be > 0".into()));
        }
        _ => {}
    }

    let active: Vec<Rotation> = rotations(&spec.initial, &spec.target)
        .into_iter()
        .filter(|r| r.delta > DROP_TOL)
        .collect();

    let amplitude_of = |i: usize| -> Result<f64> {
        match &spec.amplitudes {
            Amplitudes::Shared(a) => Ok(*a),
            Amplitudes::PerPulse(v) => v.get(i).copied().ok_or_else(|| {
                Error::InvalidInput(format!(
                    "amplitudes has {} entries but the schedule needs {}",
                    v.len(),
                    active.len()
                ))
            }),
        }
    };
    if let Amplitudes::PerPulse(v) = &spec.amplitudes {
        if v.len() != active.len() {
            return Err(Error::InvalidInput(format!(
                "amplitudes has {} entries but the schedule needs {}",
                v.len(),
                active.len()
            )));
        }
    }

    let mut pulses = Vec::with_capacity(active.len());
    let mut boundaries = vec![0.0];
    let mut t = 0.0;
    for (i, rot) in active.iter().enumerate() {
        let a = amplitude_of(i)?;
        let dt = spec.family.duration_for_area(rot.delta / 2.0, a);
        let pulse = Pulse::new(rot.channel, rot.index, rot.sign, a, t, t + dt, spec.family)?;
        t += dt;
        boundaries.push(t);
        pulses.push(pulse);
    }

    Ok(Schedule {
        dim: spec.dim(),
        family: spec.family,
        pulses,
        boundaries,
        t_f: t,
    })
}

/// Total polar-angle distance C1 and phase distance C2 of a transition.
///
/// ```text
/// C1 = sum_{l=2}^{N-1} (theta_l^0 + theta_l^s) + |theta_1^0 - theta_1^s|
/// C2 = sum_{k=1}^{N-1} [min(2pi - phi_k^0, phi_k^0) + min(2pi - phi_k^s, phi_k^s)]
/// ```
///
/// C1 + C2 is twice the total pulse area of any synthesized schedule.
pub fn c_constants(initial: &GeometricState, target: &GeometricState) -> Result<(f64, f64)> {
    if initial.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: initial.dim(),
            got: target.dim(),
        });
    }
    let c1 = initial.theta()[1..]
        .iter()
        .zip(&target.theta()[1..])
        .map(|(a, b)| a + b)
        .sum::<f64>()
        + (initial.theta()[0] - target.theta()[0]).abs();
    let c2 = initial
        .phi()
        .iter()
        .chain(target.phi())
        .map(|&p| p.min(TAU - p))
        .sum::<f64>();
    Ok((c1, c2))
}

/// Expected transition time of a shared-amplitude schedule, from the
/// closed forms: t_f = factor * (C1 + C2) / (2 A) with factor 1 (BB),
/// pi/2 (LS), (n+1)/n (LN).
pub fn shared_amplitude_transition_time(
    family: WaveformFamily,
    c1: f64,
    c2: f64,
    amplitude: f64,
) -> f64 {
    family.duration_for_area((c1 + c2) / 2.0, amplitude)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{fidelity, random_state, PureState};
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn qubit_example_spec(family: WaveformFamily) -> TransitionSpec {
        TransitionSpec::shared_amplitude(
            GeometricState::new(vec![0.0], vec![0.0]).unwrap(),
            GeometricState::new(vec![FRAC_PI_2], vec![FRAC_PI_2]).unwrap(),
            family,
            1.0,
        )
    }

    #[test]
    fn identity_transition_is_empty() {
        // all angular distances vanish: no pulses at all
        let g = GeometricState::new(vec![0.7, 0.0], vec![0.0, 0.0]).unwrap();
        let spec =
            TransitionSpec::shared_amplitude(g.clone(), g, WaveformFamily::LocalSine, 1.0);
        let s = synthesize(&spec).unwrap();
        assert!(s.pulses.is_empty());
        assert_eq!(s.transition_time(), 0.0);
    }

    #[test]
    fn identity_with_phases_walks_the_constrained_trajectory() {
        // the three-stage trajectory unwinds and reinstalls nonzero
        // angles even when initial == target; the area identity still
        // holds and the state comes back
        let g = GeometricState::new(vec![0.7, 2.1], vec![1.0, 5.0]).unwrap();
        let spec =
            TransitionSpec::shared_amplitude(g.clone(), g.clone(), WaveformFamily::LocalSine, 1.0);
        let s = synthesize(&spec).unwrap();
        assert!(!s.pulses.is_empty());
        let (c1, c2) = c_constants(&g, &g).unwrap();
        assert_abs_diff_eq!(s.total_area(), (c1 + c2) / 2.0, epsilon = 1e-10);
        let fin = crate::simulator::propagate_exact(&s, &g.to_amplitudes()).unwrap();
        assert!(fidelity(&fin, &g.to_amplitudes()).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn qubit_worked_example_schedule() {
        let s = synthesize(&qubit_example_spec(WaveformFamily::LocalSine)).unwrap();
        assert_eq!(s.pulses.len(), 2);
        let y = &s.pulses[0];
        assert_eq!((y.channel, y.index, y.sign), (Channel::Y, 0, 1));
        assert_abs_diff_eq!(y.t0, 0.0);
        assert_abs_diff_eq!(y.t1, PI * PI / 8.0, epsilon = 1e-14);
        let z = &s.pulses[1];
        assert_eq!((z.channel, z.index), (Channel::Z, 0));
        assert_abs_diff_eq!(z.t0, PI * PI / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(z.t1, PI * PI / 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.transition_time(), PI * PI / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn c_constants_examples() {
        let init = GeometricState::new(vec![0.0], vec![0.0]).unwrap();
        let tgt = GeometricState::new(vec![FRAC_PI_2], vec![FRAC_PI_2]).unwrap();
        let (c1, c2) = c_constants(&init, &tgt).unwrap();
        assert_abs_diff_eq!(c1, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(c2, FRAC_PI_2, epsilon = 1e-15);

        let g = GeometricState::new(vec![0.3, 1.2], vec![0.0, 0.0]).unwrap();
        let (c1, c2) = c_constants(&g, &g).unwrap();
        assert_abs_diff_eq!(c1, 2.0 * 1.2, epsilon = 1e-15);
        assert_abs_diff_eq!(c2, 0.0, epsilon = 1e-15);
        let zero = GeometricState::new(vec![0.0, 0.0], vec![0.0, 0.0]).unwrap();
        let (c1, c2) = c_constants(&zero, &zero).unwrap();
        assert_eq!((c1, c2), (0.0, 0.0));

        let init = GeometricState::new(vec![FRAC_PI_2, FRAC_PI_2], vec![0.0, 0.0]).unwrap();
        let tgt = GeometricState::new(vec![0.0, 0.0], vec![0.0, 0.0]).unwrap();
        let (c1, c2) = c_constants(&init, &tgt).unwrap();
        assert_abs_diff_eq!(c1, PI, epsilon = 1e-15);
        assert_abs_diff_eq!(c2, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn area_identity_and_pulse_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let dim = rng.gen_range(2..=6);
            let init = random_state(&mut rng, dim).to_geometric();
            let tgt = random_state(&mut rng, dim).to_geometric();
            let spec = TransitionSpec::shared_amplitude(
                init.clone(),
                tgt.clone(),
                WaveformFamily::LocalSine,
                rng.gen_range(0.5..2.0),
            );
            let s = synthesize(&spec).unwrap();
            assert!(s.pulses.len() <= 4 * dim - 5);
            let (c1, c2) = c_constants(&init, &tgt).unwrap();
            assert_abs_diff_eq!(s.total_area(), (c1 + c2) / 2.0, epsilon = 1e-10);
            // consecutive disjoint supports
            for (j, p) in s.pulses.iter().enumerate() {
                assert_abs_diff_eq!(p.t0, s.boundaries[j], epsilon = 1e-12);
                assert_abs_diff_eq!(p.t1, s.boundaries[j + 1], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn doubling_amplitude_halves_duration() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let init = random_state(&mut rng, 4).to_geometric();
        let tgt = random_state(&mut rng, 4).to_geometric();
        for family in [
            WaveformFamily::BangBang,
            WaveformFamily::LocalSine,
            WaveformFamily::LocalPoly(3),
        ] {
            let s1 = synthesize(&TransitionSpec::shared_amplitude(
                init.clone(),
                tgt.clone(),
                family,
                1.0,
            ))
            .unwrap();
            let s2 = synthesize(&TransitionSpec::shared_amplitude(
                init.clone(),
                tgt.clone(),
                family,
                2.0,
            ))
            .unwrap();
            assert_abs_diff_eq!(
                s1.transition_time(),
                2.0 * s2.transition_time(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn shared_amplitude_time_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let init = random_state(&mut rng, 5).to_geometric();
        let tgt = random_state(&mut rng, 5).to_geometric();
        let (c1, c2) = c_constants(&init, &tgt).unwrap();
        let l = 1.7;
        let s = synthesize(&TransitionSpec::shared_amplitude(
            init,
            tgt,
            WaveformFamily::LocalSine,
            l,
        ))
        .unwrap();
        assert_abs_diff_eq!(
            s.transition_time(),
            (PI / 4.0) * (c1 + c2) / l,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            s.transition_time(),
            shared_amplitude_transition_time(WaveformFamily::LocalSine, c1, c2, l),
            epsilon = 1e-12
        );
    }

    #[test]
    fn family_equivalence_same_final_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..10 {
            let dim = rng.gen_range(2..=5);
            let init = random_state(&mut rng, dim).to_geometric();
            let tgt = random_state(&mut rng, dim).to_geometric();
            let initial: PureState = init.to_amplitudes();
            let mut finals = Vec::new();
            for family in [
                WaveformFamily::BangBang,
                WaveformFamily::LocalSine,
                WaveformFamily::LocalPoly(2),
            ] {
                let s = synthesize(&TransitionSpec::shared_amplitude(
                    init.clone(),
                    tgt.clone(),
                    family,
                    1.0,
                ))
                .unwrap();
                finals.push(crate::simulator::propagate_exact(&s, &initial).unwrap());
            }
            for pair in finals.windows(2) {
                assert!(fidelity(&pair[0], &pair[1]).unwrap() >= 1.0 - 1e-8);
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        let spec = TransitionSpec::shared_amplitude(
            GeometricState::new(vec![0.0], vec![0.0]).unwrap(),
            GeometricState::new(vec![1.0], vec![1.0]).unwrap(),
            WaveformFamily::LocalSine,
            -1.0,
        );
        assert!(synthesize(&spec).is_err());
        let spec = TransitionSpec::shared_amplitude(
            GeometricState::new(vec![0.0], vec![0.0]).unwrap(),
            GeometricState::new(vec![1.0, 1.0], vec![1.0, 1.0]).unwrap(),
            WaveformFamily::LocalSine,
            1.0,
        );
        assert!(matches!(
            synthesize(&spec),
            Err(Error::DimensionMismatch { .. })
        ));
        let dims_ok = GeometricState::new(vec![0.0], vec![0.0]).unwrap();
        let tgt = GeometricState::new(vec![1.0], vec![1.0]).unwrap();
        let spec = TransitionSpec {
            initial: dims_ok,
            target: tgt,
            family: WaveformFamily::LocalSine,
            amplitudes: Amplitudes::PerPulse(vec![1.0]),
        };
        // two pulses needed, one amplitude given
        assert!(synthesize(&spec).is_err());
    }
}
