//! Time and time-energy performance indices and their analytic optima.
//!
//! For a transition with angle distances C1 (polar) and C2 (phase), a
//! shared-amplitude schedule of any family costs
//! `J_te = (C1 + C2) w(x)` at amplitude x, where the per-radian cost is
//!
//! ```text
//! w_bb(x) = (1/2) (1/x + x/lambda)
//! w_ls(x) = (pi/4) (1/x + x/(2 lambda))
//! w_ln(x) = (n+1)/(2 n x) + n x / ((2n+1) lambda)
//! ```
//!
//! Each w is strictly convex on x > 0, so the bounded optimum is the
//! unconstrained stationary point clipped to the bound L. The minimum
//! transition time at amplitude bound L is a family-dependent multiple
//! of t_* = (C1 + C2)/L. As n grows the LN family approaches BB in both
//! indices, and as lambda grows J_te collapses to J_t.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheduler::Schedule;
use crate::waveforms::WaveformFamily;

/// Weight lambda and optional amplitude bound L for the time-energy
/// index. lambda carries power units (J/s); no unit system is enforced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceParams {
    pub lambda: f64,
    /// `None` means unbounded amplitudes.
    pub bound: Option<f64>,
}

impl PerformanceParams {
    pub fn new(lambda: f64, bound: Option<f64>) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lambda must be > 0, got {lambda}"
            )));
        }
        if let Some(l) = bound {
            if !(l > 0.0) {
                return Err(Error::InvalidInput(format!("bound must be > 0, got {l}")));
            }
        }
        Ok(Self { lambda, bound })
    }
}

/// Per-radian cost w(x) of running a family at amplitude x.
pub fn w_value(family: WaveformFamily, x: f64, lambda: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidInput(format!("x must be > 0, got {x}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidInput(format!(
            "lambda must be > 0, got {lambda}"
        )));
    }
    Ok(match family {
        WaveformFamily::BangBang => 0.5 * (1.0 / x + x / lambda),
        WaveformFamily::LocalSine => {
            std::f64::consts::FRAC_PI_4 * (1.0 / x + x / (2.0 * lambda))
        }
        WaveformFamily::LocalPoly(n) => {
            let n = n as f64;
            (n + 1.0) / (2.0 * n * x) + n * x / ((2.0 * n + 1.0) * lambda)
        }
    })
}

/// Amplitude minimizing w over (0, L] (or over all x > 0 when
/// unbounded): the unconstrained stationary point clipped to the bound.
pub fn optimal_amplitude(family: WaveformFamily, params: &PerformanceParams) -> f64 {
    let lambda = params.lambda;
    let stationary = match family {
        WaveformFamily::BangBang => lambda.sqrt(),
        WaveformFamily::LocalSine => (2.0 * lambda).sqrt(),
        WaveformFamily::LocalPoly(n) => {
            let n = n as f64;
            ((2.0 * n + 1.0) * (2.0 * n + 2.0) * lambda).sqrt() / (2.0 * n)
        }
    };
    match params.bound {
        Some(l) => l.min(stationary),
        None => stationary,
    }
}

/// Optimal time-energy index: `(C1 + C2) w(family, L*, lambda)`.
pub fn closed_form_jte(
    family: WaveformFamily,
    c1: f64,
    c2: f64,
    params: &PerformanceParams,
) -> f64 {
    if c1 + c2 == 0.0 {
        return 0.0;
    }
    let a = optimal_amplitude(family, params);
    (c1 + c2) * w_value(family, a, params.lambda).expect("optimal amplitude is positive")
}

/// Minimum transition time at the amplitude bound L:
/// BB t_*/2, LN(n) (n+1) t_*/(2n), LS pi t_*/4, with t_* = (C1+C2)/L.
pub fn closed_form_jt(family: WaveformFamily, c1: f64, c2: f64, bound: f64) -> Result<f64> {
    if !(bound > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bound must be > 0, got {bound}"
        )));
    }
    let t_star = (c1 + c2) / bound;
    Ok(match family {
        WaveformFamily::BangBang => 0.5 * t_star,
        WaveformFamily::LocalSine => std::f64::consts::FRAC_PI_4 * t_star,
        WaveformFamily::LocalPoly(n) => {
            let n = n as f64;
            (n + 1.0) / (2.0 * n) * t_star
        }
    })
}

/// Time-energy index measured on an actual schedule:
/// `t_f + lambda^{-1} * sum of pulse energies` (closed-form energies).
pub fn measured_jte(schedule: &Schedule, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidInput(format!(
            "lambda must be > 0, got {lambda}"
        )));
    }
    Ok(schedule.transition_time() + schedule.total_energy() / lambda)
}

/// One row of the performance table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerformanceReport {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    pub c1: f64,
    pub c2: f64,
    pub t_star: f64,
    pub optimal_amplitude: f64,
    pub j_t: f64,
    pub j_te: f64,
    pub j_te_unbounded: f64,
}

/// Performance rows for BB, each requested LN order, and LS.
///
/// `j_t` and `t_star` use the amplitude bound; when the params are
/// unbounded both are reported as 0 (the unbounded transition time
/// infimum).
pub fn table1(
    c1: f64,
    c2: f64,
    params: &PerformanceParams,
    orders: &[u32],
) -> Result<Vec<PerformanceReport>> {
    if c1 < 0.0 || c2 < 0.0 {
        return Err(Error::InvalidInput("C1 and C2 must be >= 0".into()));
    }
    let mut families = vec![WaveformFamily::BangBang];
    for &n in orders {
        if n == 0 {
            return Err(Error::InvalidInput("polynomial order must be >= 1".into()));
        }
        families.push(WaveformFamily::LocalPoly(n));
    }
    families.push(WaveformFamily::LocalSine);

    let unbounded = PerformanceParams {
        lambda: params.lambda,
        bound: None,
    };
    families
        .into_iter()
        .map(|family| {
            let (t_star, j_t) = match params.bound {
                Some(l) => ((c1 + c2) / l, closed_form_jt(family, c1, c2, l)?),
                None => (0.0, 0.0),
            };
            Ok(PerformanceReport {
                family: family.tag().to_string(),
                order: family.order(),
                c1,
                c2,
                t_star,
                optimal_amplitude: optimal_amplitude(family, params),
                j_t,
                j_te: closed_form_jte(family, c1, c2, params),
                j_te_unbounded: closed_form_jte(family, c1, c2, &unbounded),
            })
        })
        .collect()
}

/// Aligned-column text rendering of the performance rows.
pub fn render_table(reports: &[PerformanceReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<8} {:>18} {:>18} {:>18}\n",
        "case", "J_t", "J_te(bounded)", "J_te(unbounded)"
    ));
    for r in reports {
        let label = match r.order {
            Some(n) => format!("{}({})", r.family.to_uppercase(), n),
            None => r.family.to_uppercase(),
        };
        out.push_str(&format!(
            "{:<8} {:>18.12} {:>18.12} {:>18.12}\n",
            label, r.j_t, r.j_te, r.j_te_unbounded
        ));
    }
    out
}
