//! JSON job descriptions consumed by the CLI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::performance::PerformanceParams;
use crate::states::{GeometricState, PureState};
use crate::waveforms::WaveformFamily;

/// A state given either as complex amplitudes or as geometric angles
/// (radians). Both forms are accepted wherever a state is an input.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Amplitudes { amplitudes: Vec<[f64; 2]> },
    Angles { theta: Vec<f64>, phi: Vec<f64> },
}

impl StateSpec {
    pub fn to_geometric(&self, field: &str, dim: usize) -> Result<GeometricState> {
        let geo = match self {
            StateSpec::Amplitudes { amplitudes } => {
                let amps = amplitudes
                    .iter()
                    .map(|[re, im]| num_complex::Complex64::new(*re, *im))
                    .collect();
                PureState::normalized(amps)
                    .map_err(|e| Error::InvalidInput(format!("{field}: {e}")))?
                    .to_geometric()
            }
            StateSpec::Angles { theta, phi } => GeometricState::new(theta.clone(), phi.clone())
                .map_err(|e| Error::InvalidInput(format!("{field}: {e}")))?,
        };
        if geo.dim() != dim {
            return Err(Error::InvalidInput(format!(
                "{field}: state has dim {} but config says dim {dim}",
                geo.dim()
            )));
        }
        Ok(geo)
    }
}

/// Amplitude bound: a positive number or the string "unbounded".
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundSpec {
    Value(f64),
    Keyword(UnboundedKeyword),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum UnboundedKeyword {
    #[serde(rename = "unbounded")]
    Unbounded,
}

impl BoundSpec {
    pub fn as_option(&self) -> Result<Option<f64>> {
        match self {
            BoundSpec::Value(l) if *l > 0.0 => Ok(Some(*l)),
            BoundSpec::Value(l) => Err(Error::InvalidInput(format!(
                "bound: must be > 0 or \"unbounded\", got {l}"
            ))),
            BoundSpec::Keyword(_) => Ok(None),
        }
    }
}

fn default_rk4_steps() -> usize {
    2000
}
fn default_samples() -> usize {
    512
}
fn default_orders() -> Vec<u32> {
    vec![1, 2, 5, 10]
}

/// One synthesis/verification/table job. Angles are radians only.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub dim: usize,
    pub initial: StateSpec,
    pub target: StateSpec,
    /// "bb", "ls", or "ln".
    pub family: WaveformFamily,
    /// Polynomial order, required iff family is "ln".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    pub lambda: f64,
    pub bound: BoundSpec,
    #[serde(default = "default_rk4_steps")]
    pub rk4_steps_per_pulse: usize,
    #[serde(default = "default_samples")]
    pub samples_per_pulse: usize,
    /// LN orders for the `table` subcommand.
    #[serde(default = "default_orders")]
    pub orders: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

/// The validated, resolved form of a job.
#[derive(Debug)]
pub struct Job {
    pub dim: usize,
    pub initial: GeometricState,
    pub target: GeometricState,
    pub family: WaveformFamily,
    pub params: PerformanceParams,
    pub rk4_steps_per_pulse: usize,
    pub samples_per_pulse: usize,
    pub orders: Vec<u32>,
}

impl JobConfig {
    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<Job> {
        if self.dim < 2 {
            return Err(Error::InvalidInput(format!(
                "dim: must be >= 2, got {}",
                self.dim
            )));
        }
        let family = WaveformFamily::from_tag(self.family.tag(), self.order)
            .map_err(|e| Error::InvalidInput(format!("family/order: {e}")))?;
        if !(self.lambda > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lambda: must be > 0, got {}",
                self.lambda
            )));
        }
        let bound = self.bound.as_option()?;
        let params = PerformanceParams::new(self.lambda, bound)?;
        if self.rk4_steps_per_pulse == 0 {
            return Err(Error::InvalidInput(
                "rk4_steps_per_pulse: must be >= 1".into(),
            ));
        }
        if self.orders.contains(&0) {
            return Err(Error::InvalidInput("orders: must all be >= 1".into()));
        }
        Ok(Job {
            dim: self.dim,
            initial: self.initial.to_geometric("initial", self.dim)?,
            target: self.target.to_geometric("target", self.dim)?,
            family,
            params,
            rk4_steps_per_pulse: self.rk4_steps_per_pulse,
            samples_per_pulse: self.samples_per_pulse.max(2),
            orders: self.orders.clone(),
        })
    }
}
