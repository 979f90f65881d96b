//! Local control waveforms: bang-bang, local sine, and local
//! n-order-polynomial, with closed-form area and energy integrals.
//!
//! All three families are supported on a single half-open interval
//! [t0, t1) and bounded by their amplitude A. The continuous families
//! vanish at both interval endpoints:
//!
//! ```text
//! f_ls(t) = A sin(pi (t - t0) / (t1 - t0))
//! f_ln(t) = A (1 - |(t1 + t0 - 2t)/(t1 - t0)|^n)
//! f_bb(t) = A
//! ```
//!
//! Closed-form integrals over the support:
//!
//! | family | area                 | energy                         |
//! |--------|----------------------|--------------------------------|
//! | LS     | 2 A dt / pi          | A^2 dt / 2                     |
//! | LN(n)  | A dt n/(n+1)         | A^2 dt 2n^2 / ((2n+1)(n+1))    |
//! | BB     | A dt                 | A^2 dt                         |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Waveform family, with polynomial order for the LN case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveformFamily {
    BangBang,
    LocalSine,
    /// Local n-order polynomial; `0` is rejected at construction sites.
    LocalPoly(u32),
}

impl WaveformFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            WaveformFamily::BangBang => "bb",
            WaveformFamily::LocalSine => "ls",
            WaveformFamily::LocalPoly(_) => "ln",
        }
    }

    pub fn order(&self) -> Option<u32> {
        match self {
            WaveformFamily::LocalPoly(n) => Some(*n),
            _ => None,
        }
    }

    pub fn from_tag(tag: &str, order: Option<u32>) -> Result<Self> {
        match (tag, order) {
            ("bb", None) => Ok(WaveformFamily::BangBang),
            ("ls", None) => Ok(WaveformFamily::LocalSine),
            ("ln", Some(n)) if n >= 1 => Ok(WaveformFamily::LocalPoly(n)),
            ("ln", _) => Err(Error::InvalidInput(
                "family \"ln\" requires order >= 1".into(),
            )),
            ("bb" | "ls", Some(_)) => Err(Error::InvalidInput(format!(
                "family \"{tag}\" does not take an order"
            ))),
            _ => Err(Error::InvalidInput(format!(
                "unknown waveform family \"{tag}\" (expected bb, ls, or ln)"
            ))),
        }
    }

    /// Pulse duration needed to accumulate area `delta_f` at amplitude `a`.
    pub fn duration_for_area(&self, delta_f: f64, a: f64) -> f64 {
        match self {
            WaveformFamily::BangBang => delta_f / a,
            WaveformFamily::LocalSine => delta_f * std::f64::consts::PI / (2.0 * a),
            WaveformFamily::LocalPoly(n) => {
                let n = *n as f64;
                delta_f * (n + 1.0) / (n * a)
            }
        }
    }
}

impl Serialize for WaveformFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for WaveformFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let tag = String::deserialize(d)?;
        // bare tag form; "ln" defaults to order 1 and is overridden by an
        // adjacent "order" field where one exists (see Pulse / JobConfig)
        match tag.as_str() {
            "bb" => Ok(WaveformFamily::BangBang),
            "ls" => Ok(WaveformFamily::LocalSine),
            "ln" => Ok(WaveformFamily::LocalPoly(1)),
            other => Err(serde::de::Error::custom(format!(
                "unknown waveform family \"{other}\""
            ))),
        }
    }
}

/// Which control channel a pulse drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Y,
    Z,
}

/// One local waveform on one control channel over one time interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Pulse {
    pub channel: Channel,
    /// Operator index k in [0, N-2].
    pub index: usize,
    /// +1 or -1; multiplies the (positive) waveform.
    pub sign: i8,
    /// Peak amplitude A > 0, in angular-frequency units.
    pub amplitude: f64,
    pub t0: f64,
    pub t1: f64,
    pub family: WaveformFamily,
}

impl Pulse {
    pub fn new(
        channel: Channel,
        index: usize,
        sign: i8,
        amplitude: f64,
        t0: f64,
        t1: f64,
        family: WaveformFamily,
    ) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidInput(format!("sign must be +-1, got {sign}")));
        }
        if !(amplitude > 0.0) {
            return Err(Error::InvalidInput(format!(
                "amplitude must be > 0, got {amplitude}"
            )));
        }
        if !(t0 < t1) {
            return Err(Error::InvalidInput(format!(
                "pulse interval must satisfy t0 < t1, got [{t0}, {t1})"
            )));
        }
        if let WaveformFamily::LocalPoly(0) = family {
            return Err(Error::InvalidInput("polynomial order must be >= 1".into()));
        }
        Ok(Self {
            channel,
            index,
            sign,
            amplitude,
            t0,
            t1,
            family,
        })
    }

    pub fn duration(&self) -> f64 {
        self.t1 - self.t0
    }

    /// Signed control value at time t; zero outside [t0, t1).
    pub fn evaluate(&self, t: f64) -> f64 {
        if t < self.t0 || t >= self.t1 {
            return 0.0;
        }
        let a = self.amplitude;
        let dt = self.duration();
        let sign = self.sign as f64;
        let shape = match self.family {
            WaveformFamily::BangBang => a,
            WaveformFamily::LocalSine => {
                a * (std::f64::consts::PI * (t - self.t0) / dt).sin()
            }
            WaveformFamily::LocalPoly(n) => {
                let mid = 0.5 * (self.t0 + self.t1);
                let bracket = if t < mid {
                    (self.t1 + self.t0 - 2.0 * t) / dt
                } else {
                    (2.0 * t - self.t1 - self.t0) / dt
                };
                a * (1.0 - bracket.powi(n as i32))
            }
        };
        sign * shape
    }

    /// Unsigned accumulated area (radians of dF) over the support.
    pub fn area(&self) -> f64 {
        let a = self.amplitude;
        let dt = self.duration();
        match self.family {
            WaveformFamily::BangBang => a * dt,
            WaveformFamily::LocalSine => 2.0 * a * dt / std::f64::consts::PI,
            WaveformFamily::LocalPoly(n) => {
                let n = n as f64;
                a * dt * n / (n + 1.0)
            }
        }
    }

    /// Energy integral of the squared control over the support.
    pub fn energy(&self) -> f64 {
        let a = self.amplitude;
        let dt = self.duration();
        match self.family {
            WaveformFamily::BangBang => a * a * dt,
            WaveformFamily::LocalSine => a * a * dt / 2.0,
            WaveformFamily::LocalPoly(n) => {
                let n = n as f64;
                a * a * dt * 2.0 * n * n / ((2.0 * n + 1.0) * (n + 1.0))
            }
        }
    }
}

// JSON form carries the family tag and the polynomial order side by side.
#[derive(Serialize, Deserialize)]
struct PulseRepr {
    channel: Channel,
    index: usize,
    sign: i8,
    amplitude: f64,
    t0: f64,
    t1: f64,
    family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<u32>,
}

impl Serialize for Pulse {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PulseRepr {
            channel: self.channel,
            index: self.index,
            sign: self.sign,
            amplitude: self.amplitude,
            t0: self.t0,
            t1: self.t1,
            family: self.family.tag().to_string(),
            order: self.family.order(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pulse {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PulseRepr::deserialize(d)?;
        let family =
            WaveformFamily::from_tag(&r.family, r.order).map_err(serde::de::Error::custom)?;
        Pulse::new(r.channel, r.index, r.sign, r.amplitude, r.t0, r.t1, family)
            .map_err(serde::de::Error::custom)
    }
}
