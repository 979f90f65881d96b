//! Pure states of an N-level system and their geometric parametrization.
//!
//! A pure state is a unit vector of N complex amplitudes. Up to a global
//! phase it is equivalently described by 2(N-1) angles: N-1 polar angles
//! theta_j in [0, pi] and N-1 phases phi_j in [0, 2*pi). The amplitude
//! form is
//!
//! ```text
//! c_0     = cos(theta_1/2)
//! c_k     = e^{i phi_k} sin(theta_1/2) ... sin(theta_k/2) cos(theta_{k+1}/2)
//! c_{N-1} = e^{i phi_{N-1}} sin(theta_1/2) ... sin(theta_{N-1}/2)
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Magnitudes below this are treated as exactly zero during angle
/// extraction.
const ZERO_TOL: f64 = 1e-12;

/// Unit-norm complex amplitude vector of an N-level pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Build a state from amplitudes, requiring unit norm within 1e-9.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "state dimension must be >= 2, got {}",
                amplitudes.len()
            )));
        }
        let norm2: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if !norm2.is_finite() || (norm2.sqrt() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "amplitudes must have unit norm, got norm {}",
                norm2.sqrt()
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Build a state from an arbitrary nonzero vector by normalizing it.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "state dimension must be >= 2, got {}",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if !norm.is_finite() || norm < ZERO_TOL {
            return Err(Error::InvalidInput("cannot normalize a zero-norm vector".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// The computational basis state |n> in dimension `dim`.
    pub fn basis(dim: usize, n: usize) -> Self {
        assert!(dim >= 2 && n < dim);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Extract the geometric angles of this state.
    ///
    /// The global phase is removed by rotating the first amplitude of
    /// magnitude >= 1e-12 to the positive real axis. Angles whose
    /// defining prefactor vanishes are set to zero.
    pub fn to_geometric(&self) -> GeometricState {
        let n = self.dim();
        // global phase: first non-negligible amplitude made real positive
        let phase = self
            .amplitudes
            .iter()
            .find(|c| c.norm() >= ZERO_TOL)
            .map(|c| c / c.norm())
            .unwrap_or_else(|| Complex64::new(1.0, 0.0));
        let amps: Vec<Complex64> = self.amplitudes.iter().map(|c| c / phase).collect();

        // tail[k] = sqrt(sum_{j >= k} |c_j|^2); tail[0] = 1
        let mut tail = vec![0.0; n + 1];
        for k in (0..n).rev() {
            tail[k] = (tail[k + 1] * tail[k + 1] + amps[k].norm_sqr()).sqrt();
        }

        let mut theta = Vec::with_capacity(n - 1);
        let mut phi = Vec::with_capacity(n - 1);
        for k in 0..n - 1 {
            let head = amps[k].norm();
            let rest = tail[k + 1];
            let th = if head < ZERO_TOL && rest < ZERO_TOL {
                0.0
            } else {
                2.0 * rest.atan2(head)
            };
            theta.push(th);
            // phi_k belongs to amplitude c_{k+1}; undefined prefactors map to 0
            let c = amps[k + 1];
            let ph = if c.norm() < ZERO_TOL {
                0.0
            } else {
                c.arg().rem_euclid(std::f64::consts::TAU)
            };
            phi.push(ph);
        }
        GeometricState { theta, phi }
    }
}

/// Angle-vector description of a pure state: theta in [0, pi]^{N-1},
/// phi in [0, 2*pi)^{N-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricState {
    theta: Vec<f64>,
    phi: Vec<f64>,
}

impl GeometricState {
    pub fn new(theta: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidInput("theta must have length N-1 >= 1".into()));
        }
        if theta.len() != phi.len() {
            return Err(Error::DimensionMismatch {
                expected: theta.len(),
                got: phi.len(),
            });
        }
        for (j, &t) in theta.iter().enumerate() {
            if !(0.0..=std::f64::consts::PI).contains(&t) {
                return Err(Error::InvalidInput(format!(
                    "theta[{j}] = {t} outside [0, pi]"
                )));
            }
        }
        for (j, &p) in phi.iter().enumerate() {
            if !(0.0..std::f64::consts::TAU).contains(&p) {
                return Err(Error::InvalidInput(format!(
                    "phi[{j}] = {p} outside [0, 2*pi)"
                )));
            }
        }
        Ok(Self { theta, phi })
    }

    pub fn dim(&self) -> usize {
        self.theta.len() + 1
    }

    /// theta_j for j = 1..N-1 (zero-based slice index j-1).
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// phi_j for j = 1..N-1 (zero-based slice index j-1).
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Evaluate the amplitude form of the parametrization.
    pub fn to_amplitudes(&self) -> PureState {
        let n = self.dim();
        let mut amps = Vec::with_capacity(n);
        amps.push(Complex64::new((self.theta[0] / 2.0).cos(), 0.0));
        let mut sin_prod = 1.0;
        for k in 1..n {
            sin_prod *= (self.theta[k - 1] / 2.0).sin();
            let radial = if k < n - 1 {
                sin_prod * (self.theta[k] / 2.0).cos()
            } else {
                sin_prod
            };
            amps.push(Complex64::from_polar(radial, self.phi[k - 1]));
        }
        PureState { amplitudes: amps }
    }
}

/// Draw a Haar-random pure state: i.i.d. complex Gaussian amplitudes,
/// normalized.
pub fn random_state<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
        .collect();
    PureState::normalized(amps).expect("gaussian vector has nonzero norm")
}

// Box-Muller; avoids pulling in rand_distr for one distribution.
fn gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u1.ln()).sqrt() * u2.cos()
}

/// Squared overlap |<a|b>|^2 of two pure states.
///
/// Equals 1 exactly when the states agree up to a global phase.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let overlap: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(overlap.norm_sqr().min(1.0))
}
