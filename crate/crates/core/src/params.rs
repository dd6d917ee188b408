use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on probability bounds, so that reverse parameters computed
/// in floating point are not rejected for rounding noise.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// The eight rates and probabilities defining a bullet model.
///
/// Tuple order is `(lambda0, lambdaV, lambdaH, tauV, tauH, pV, pH, p0)`:
/// ex-nihilo creation rate per unit area, split rates of vertical and
/// horizontal lines per unit length, turn rates per unit length, and the
/// outcome probabilities at a meeting (horizontal dies, vertical dies, both
/// die). The remainder `1 - pV - pH - p0` is the crossing probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParameter", into = "RawParameter")]
pub struct Parameter {
    pub lambda0: f64,
    pub lambda_v: f64,
    pub lambda_h: f64,
    pub tau_v: f64,
    pub tau_h: f64,
    pub p_v: f64,
    pub p_h: f64,
    pub p0: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawParameter {
    lambda0: f64,
    lambda_v: f64,
    lambda_h: f64,
    tau_v: f64,
    tau_h: f64,
    p_v: f64,
    p_h: f64,
    p0: f64,
}

impl TryFrom<RawParameter> for Parameter {
    type Error = Error;

    fn try_from(raw: RawParameter) -> Result<Self> {
        Parameter::from_tuple([raw.lambda0, raw.lambda_v, raw.lambda_h, raw.tau_v, raw.tau_h, raw.p_v, raw.p_h, raw.p0])
    }
}

impl From<Parameter> for RawParameter {
    fn from(p: Parameter) -> Self {
        RawParameter {
            lambda0: p.lambda0,
            lambda_v: p.lambda_v,
            lambda_h: p.lambda_h,
            tau_v: p.tau_v,
            tau_h: p.tau_h,
            p_v: p.p_v,
            p_h: p.p_h,
            p0: p.p0,
        }
    }
}

impl Parameter {
    pub const NAMES: [&'static str; 8] = ["lambda0", "lambdaV", "lambdaH", "tauV", "tauH", "pV", "pH", "p0"];

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda0: f64,
        lambda_v: f64,
        lambda_h: f64,
        tau_v: f64,
        tau_h: f64,
        p_v: f64,
        p_h: f64,
        p0: f64,
    ) -> Result<Self> {
        let p = Parameter { lambda0, lambda_v, lambda_h, tau_v, tau_h, p_v, p_h, p0 };
        p.validate()?;
        Ok(p)
    }

    pub fn from_tuple(t: [f64; 8]) -> Result<Self> {
        Self::new(t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7])
    }

    pub fn as_tuple(&self) -> [f64; 8] {
        [self.lambda0, self.lambda_v, self.lambda_h, self.tau_v, self.tau_h, self.p_v, self.p_h, self.p0]
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.as_tuple();
        for (name, value) in Self::NAMES.iter().zip(t) {
            if !value.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {value} is not finite")));
            }
        }
        for (name, value) in Self::NAMES[..5].iter().zip(&t[..5]) {
            if *value < 0.0 {
                return Err(Error::InvalidParameter(format!("rate {name} = {value} is negative")));
            }
        }
        for (name, value) in Self::NAMES[5..].iter().zip(&t[5..]) {
            if *value < -PROBABILITY_TOLERANCE || *value > 1.0 + PROBABILITY_TOLERANCE {
                return Err(Error::InvalidParameter(format!("probability {name} = {value} is outside [0, 1]")));
            }
        }
        let sum = self.p_v + self.p_h + self.p0;
        if sum > 1.0 + PROBABILITY_TOLERANCE {
            return Err(Error::InvalidParameter(format!("pV + pH + p0 = {sum} exceeds 1")));
        }
        Ok(())
    }

    /// Probability that both lines survive a meeting, clamped at zero.
    pub fn crossing_probability(&self) -> f64 {
        (1.0 - (self.p_v + self.p_h + self.p0)).max(0.0)
    }

    /// Total event rate along a vertical line.
    pub fn vertical_rate(&self) -> f64 {
        self.lambda_v + self.tau_v
    }

    /// Total event rate along a horizontal line.
    pub fn horizontal_rate(&self) -> f64 {
        self.lambda_h + self.tau_h
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &Parameter) -> f64 {
        self.as_tuple().iter().zip(other.as_tuple()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.as_tuple();
        write!(f, "({}, {}, {}, {}, {}, {}, {}, {})", t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7])
    }
}

/// Intensities of the two independent Poisson entry processes: `nu_h` on the
/// left edge (horizontal entries) and `nu_v` on the bottom edge (vertical
/// entries).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Intensities {
    pub nu_h: f64,
    pub nu_v: f64,
}

impl Intensities {
    pub fn new(nu_h: f64, nu_v: f64) -> Result<Self> {
        if !(nu_h.is_finite() && nu_v.is_finite()) || nu_h < 0.0 || nu_v < 0.0 {
            return Err(Error::InvalidLaw(format!(
                "intensities must be finite and non-negative, got ({nu_h}, {nu_v})"
            )));
        }
        Ok(Intensities { nu_h, nu_v })
    }

    /// Exchanges the roles of the two edges.
    pub fn swapped(self) -> Self {
        Intensities { nu_h: self.nu_v, nu_v: self.nu_h }
    }
}
