//! Named parameter sets with their usual entry laws.

use bulletlab_core::{InitialLaw, Intensities, Parameter};

use crate::error::{CliError, CliResult};

pub const DEFAULT_ALPHA: f64 = 0.75;

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub params: Parameter,
    pub default_law: InitialLaw,
}

pub const NAMES: [&str; 7] = ["cbmc", "loop-half", "loop", "hammersley", "bggs", "pv", "ph"];

fn tuple(name: &str, alpha: f64) -> Option<([f64; 8], f64)> {
    Some(match name {
        "cbmc" => ([0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0], 1.0),
        "loop-half" => ([0.0, 1.0, 1.0, 0.0, 0.0, 0.5, 0.5, 0.0], 2.0),
        "loop" => ([1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0], 1.0),
        "hammersley" => ([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0], 1.0),
        "bggs" => ([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0 - alpha, alpha], 1.0),
        "pv" => ([0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0], 1.0),
        "ph" => ([0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0], 1.0),
        _ => return None,
    })
}

/// Looks up a preset; `alpha` only affects `bggs`.
pub fn preset(name: &str, alpha: f64) -> CliResult<Preset> {
    let (t, nu) = tuple(name, alpha)
        .ok_or_else(|| CliError::Usage(format!("unknown preset '{name}' (known: {})", NAMES.join(", "))))?;
    if name == "bggs" && !(0.0..=1.0).contains(&alpha) {
        return Err(CliError::Usage(format!("alpha {alpha} must lie in [0, 1]")));
    }
    let name = NAMES.iter().find(|&&n| n == name).expect("listed");
    Ok(Preset { name, params: Parameter::from_tuple(t)?, default_law: InitialLaw::Ppp(Intensities::new(nu, nu)?) })
}

pub fn registry(alpha: f64) -> Vec<Preset> {
    NAMES.iter().map(|n| preset(n, alpha).expect("registry entries are valid")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bggs_alpha() {
        let p = preset("bggs", DEFAULT_ALPHA).unwrap().params;
        assert_eq!(p.as_tuple(), [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.25, 0.75]);
        assert_eq!(preset("bggs", 0.5).unwrap().params.p_h, 0.5);
        assert!(preset("bggs", 1.5).is_err());
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(preset("tasep", 0.75), Err(CliError::Usage(_))));
    }

    #[test]
    fn registry_is_complete() {
        assert_eq!(registry(DEFAULT_ALPHA).len(), 7);
    }
}
