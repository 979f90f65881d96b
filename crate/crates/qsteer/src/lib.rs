//! Pulse synthesis for state transitions in N-level quantum systems.
//!
//! An N-level pure state is parametrized by 2(N-1) angles. A transition
//! between two such states is realized by a sequence of at most 4N-5
//! single-channel pulses, each a local waveform (bang-bang, local sine, or
//! local n-order polynomial) driving one generalized-Pauli rotation.
//! Pulse amplitudes are optimized for a combined time-energy index, and
//! every schedule can be verified by two independent propagators: the
//! closed-form piecewise solution and a generic RK4 integrator.
//!
//! ```
//! use qsteer::states::{GeometricState, PureState, fidelity};
//! use qsteer::scheduler::{TransitionSpec, synthesize};
//! use qsteer::simulator::propagate_exact;
//! use qsteer::waveforms::WaveformFamily;
//! use std::f64::consts::PI;
//!
//! // |0> -> (|0> + i|1>)/sqrt(2) with local sine pulses of unit amplitude
//! let spec = TransitionSpec::shared_amplitude(
//!     GeometricState::new(vec![0.0], vec![0.0]).unwrap(),
//!     GeometricState::new(vec![PI / 2.0], vec![PI / 2.0]).unwrap(),
//!     WaveformFamily::LocalSine,
//!     1.0,
//! );
//! let schedule = synthesize(&spec).unwrap();
//! assert_eq!(schedule.pulses.len(), 2);
//!
//! let initial = PureState::basis(2, 0);
//! let target = spec.target.to_amplitudes();
//! let fin = propagate_exact(&schedule, &initial).unwrap();
//! assert!(fidelity(&fin, &target).unwrap() > 1.0 - 1e-12);
//! ```

// validation uses `!(x > 0.0)` on purpose: it rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod operators;
pub mod performance;
pub mod scheduler;
pub mod simulator;
pub mod states;
pub mod waveforms;

pub use error::{Error, Result};
