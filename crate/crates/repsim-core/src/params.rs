//! Domain parameter types, config ingestion and unit conversion.
//!
//! All internal computation uses SI units (m, s, rad/s). Conversion to and
//! from the human-editable units of the config document (`km`, `us`,
//! `MHz/2pi`, `nm`, `um`) happens only here, at the ingestion boundary.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum nesting level accepted by default (16 elementary links).
pub const DEFAULT_MAX_NESTING: u32 = 4;

const TWO_PI_MHZ: f64 = 2.0 * std::f64::consts::PI * 1e6;

/// km -> m
#[inline]
pub fn km_to_m(x: f64) -> f64 {
    x * 1e3
}

/// us -> s
#[inline]
pub fn us_to_s(x: f64) -> f64 {
    x * 1e-6
}

/// Ordinary frequency in MHz (the `X_over_2pi_MHz` convention) -> angular
/// frequency in rad/s.
#[inline]
pub fn mhz_over_2pi_to_rad_s(x: f64) -> f64 {
    x * TWO_PI_MHZ
}

/// nm -> m
#[inline]
pub fn nm_to_m(x: f64) -> f64 {
    x * 1e-9
}

/// um -> m
#[inline]
pub fn um_to_m(x: f64) -> f64 {
    x * 1e-6
}

/// Fiber/protocol parameters of one elementary link, in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkParams {
    /// Elementary link distance (m).
    pub l0: f64,
    /// Fiber attenuation length (m).
    pub l_att: f64,
    /// Light velocity in fiber (m/s).
    pub c: f64,
    /// Local preparation time (s).
    pub t_p: f64,
    /// Ensemble photon-emission success probability.
    pub p: f64,
    /// Photon detection efficiency.
    pub eta_d: f64,
    /// Ionization read-out efficiency.
    pub eta_ion: f64,
    /// Nesting level n (total distance is `2^n * l0`).
    pub n_levels: u32,
}

impl LinkParams {
    /// Classical communication time for one attempt, `l0 / c`.
    pub fn t_com(&self) -> f64 {
        self.l0 / self.c
    }

    pub fn validate(&self, max_nesting: u32) -> Result<(), ConfigError> {
        check_positive("L0_km", self.l0)?;
        check_positive("L_att_km", self.l_att)?;
        check_positive("c_m_per_s", self.c)?;
        check_positive("t_p_us", self.t_p)?;
        check_probability("p", self.p)?;
        check_probability("eta_d", self.eta_d)?;
        check_probability("eta_ion", self.eta_ion)?;
        if self.n_levels > max_nesting {
            return Err(ConfigError::Validation {
                field: "n_levels".into(),
                constraint: format!("must be <= {max_nesting} ({} links)", 1u64 << max_nesting),
            });
        }
        Ok(())
    }
}

/// Physical error-model inputs, in SI units (angular frequencies in rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockadeParams {
    /// Blockade shift (rad/s).
    pub b: f64,
    /// Rydberg-state lifetime (s).
    pub tau: f64,
    /// Optical depth of the ensemble (dimensionless).
    pub d: f64,
    /// Stationary-qubit Rabi frequency (rad/s).
    pub omega_s: f64,
    /// Flying-qubit Rabi frequency (rad/s).
    pub omega_f: f64,
    /// Ionization read-out efficiency.
    pub eta_ion: f64,
}

impl BlockadeParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_positive("B_over_2pi_MHz", self.b)?;
        check_positive("tau_us", self.tau)?;
        if !self.d.is_finite() || self.d < 0.0 {
            return Err(ConfigError::Validation {
                field: "optical_depth".into(),
                constraint: "must be finite and >= 0".into(),
            });
        }
        check_positive("Omega_s_over_2pi_MHz", self.omega_s)?;
        check_positive("Omega_f_over_2pi_MHz", self.omega_f)?;
        check_probability("eta_ion", self.eta_ion)?;
        Ok(())
    }

    /// Non-fatal conditions under which the perturbative error formulas lose
    /// meaning.
    pub fn warnings(&self) -> Vec<Warning> {
        let mut w = Vec::new();
        if self.omega_s / self.b > 0.5 {
            w.push(Warning::RabiNearBlockade {
                which: "Omega_s",
                ratio: self.omega_s / self.b,
            });
        }
        if self.omega_f / self.b > 0.5 {
            w.push(Warning::RabiNearBlockade {
                which: "Omega_f",
                ratio: self.omega_f / self.b,
            });
        }
        w
    }
}

/// Parametric description of the atom geometry, as it appears in configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GeometrySpec {
    Lattice {
        nx: u32,
        ny: u32,
        nz: u32,
        spacing_um: f64,
    },
    Sphere {
        n_atoms: u32,
        diameter_um: f64,
    },
}

impl GeometrySpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        match *self {
            GeometrySpec::Lattice { nx, ny, nz, spacing_um } => {
                if nx == 0 || ny == 0 || nz == 0 {
                    return Err(ConfigError::Validation {
                        field: "geometry".into(),
                        constraint: "lattice dimensions must be >= 1".into(),
                    });
                }
                check_positive("geometry.spacing_um", spacing_um)?;
            }
            GeometrySpec::Sphere { n_atoms, diameter_um } => {
                if n_atoms == 0 {
                    return Err(ConfigError::Validation {
                        field: "geometry".into(),
                        constraint: "sphere must contain at least one atom".into(),
                    });
                }
                check_positive("geometry.diameter_um", diameter_um)?;
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match *self {
            GeometrySpec::Lattice { nx, ny, nz, spacing_um } => {
                format!("lattice {nx}x{ny}x{nz}, spacing {spacing_um} um")
            }
            GeometrySpec::Sphere { n_atoms, diameter_um } => {
                format!("sphere of {n_atoms} atoms, diameter {diameter_um} um")
            }
        }
    }
}

/// Non-fatal model warnings surfaced to the caller.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// `Omega / B` above 0.5: perturbative formulas lose meaning.
    RabiNearBlockade { which: &'static str, ratio: f64 },
    /// A double-excitation or loss probability above 0.1.
    LargeErrorTerm { term: &'static str, value: f64 },
    /// `m * t_p > t_com`: the multiplexing pipeline assumption is violated.
    MultiplexPipelining { m: u32, m_t_p: f64, t_com: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::RabiNearBlockade { which, ratio } => {
                write!(f, "{which}/B = {ratio:.3} > 0.5; perturbative error formulas lose meaning")
            }
            Warning::LargeErrorTerm { term, value } => {
                write!(f, "{term} = {value:.3e} > 0.1; outside the perturbative regime")
            }
            Warning::MultiplexPipelining { m, m_t_p, t_com } => {
                write!(
                    f,
                    "m*t_p = {m_t_p:.3e} s exceeds t_com = {t_com:.3e} s for m = {m}; \
                     attempts cannot all fit in one communication interval"
                )
            }
        }
    }
}

/// Errors produced while ingesting a scenario document.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown config key {key}")]
    UnknownKey { key: String },
    #[error("invalid value for `{field}`: {constraint}")]
    Validation { field: String, constraint: String },
}

fn check_positive(field: &str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::Validation {
            field: field.into(),
            constraint: "must be finite and > 0".into(),
        })
    }
}

fn check_probability(field: &str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ConfigError::Validation {
            field: field.into(),
            constraint: "must be a probability in [0, 1]".into(),
        })
    }
}

/// The config document exactly as written, in external units. Kept around so
/// that serialization round-trips bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(rename = "L0_km", default, skip_serializing_if = "Option::is_none")]
    l0_km: Option<f64>,
    #[serde(rename = "total_distance_km", default, skip_serializing_if = "Option::is_none")]
    total_distance_km: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_levels: Option<u32>,
    #[serde(rename = "L_att_km")]
    l_att_km: f64,
    c_m_per_s: f64,
    t_p_us: f64,
    p: f64,
    eta_d: f64,
    eta_ion: f64,
    #[serde(rename = "B_over_2pi_MHz")]
    b_over_2pi_mhz: f64,
    tau_us: f64,
    optical_depth: f64,
    #[serde(rename = "Omega_s_over_2pi_MHz")]
    omega_s_over_2pi_mhz: f64,
    #[serde(rename = "Omega_f_over_2pi_MHz")]
    omega_f_over_2pi_mhz: f64,
    geometry: GeometrySpec,
    lambda_nm: f64,
    multiplex_m: u32,
    rng_seed: u64,
    trials: u64,
}

/// A fully validated scenario, in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    raw: RawScenario,
    pub link: LinkParams,
    pub blockade: BlockadeParams,
    pub geometry: GeometrySpec,
    /// Emission wavelength (m).
    pub lambda: f64,
    /// End-to-end distribution distance (m), `2^n * l0`.
    pub total_distance: f64,
    pub multiplex_m: u32,
    pub rng_seed: u64,
    pub trials: u64,
}

/// `L0 = L / 2^n`; exact in floating point, so `L0 * 2^n == L`.
pub fn derive_link_geometry(total_distance: f64, n_levels: u32) -> f64 {
    total_distance / (1u64 << n_levels) as f64
}

impl ScenarioConfig {
    /// Parses and validates a scenario document.
    pub fn from_document(text: &str) -> Result<Self, ConfigError> {
        let raw: RawScenario = serde_json::from_str(text).map_err(classify_json_error)?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawScenario) -> Result<Self, ConfigError> {
        let n_levels = raw.n_levels.unwrap_or(0);
        let (l0, total_distance) = match (raw.l0_km, raw.total_distance_km) {
            (Some(l0_km), None) => {
                let l0 = km_to_m(l0_km);
                (l0, l0 * (1u64 << n_levels) as f64)
            }
            (None, Some(total_km)) => {
                if raw.n_levels.is_none() {
                    return Err(ConfigError::Validation {
                        field: "n_levels".into(),
                        constraint: "required when total_distance_km is given".into(),
                    });
                }
                let total = km_to_m(total_km);
                check_positive("total_distance_km", total)?;
                (derive_link_geometry(total, n_levels), total)
            }
            (Some(_), Some(_)) => {
                return Err(ConfigError::Validation {
                    field: "L0_km".into(),
                    constraint: "give either L0_km or total_distance_km, not both".into(),
                })
            }
            (None, None) => {
                return Err(ConfigError::Validation {
                    field: "L0_km".into(),
                    constraint: "either L0_km or total_distance_km is required".into(),
                })
            }
        };

        let link = LinkParams {
            l0,
            l_att: km_to_m(raw.l_att_km),
            c: raw.c_m_per_s,
            t_p: us_to_s(raw.t_p_us),
            p: raw.p,
            eta_d: raw.eta_d,
            eta_ion: raw.eta_ion,
            n_levels,
        };
        link.validate(DEFAULT_MAX_NESTING)?;

        let blockade = BlockadeParams {
            b: mhz_over_2pi_to_rad_s(raw.b_over_2pi_mhz),
            tau: us_to_s(raw.tau_us),
            d: raw.optical_depth,
            omega_s: mhz_over_2pi_to_rad_s(raw.omega_s_over_2pi_mhz),
            omega_f: mhz_over_2pi_to_rad_s(raw.omega_f_over_2pi_mhz),
            eta_ion: raw.eta_ion,
        };
        blockade.validate()?;

        raw.geometry.validate()?;
        let lambda = nm_to_m(raw.lambda_nm);
        check_positive("lambda_nm", lambda)?;

        if raw.multiplex_m == 0 {
            return Err(ConfigError::Validation {
                field: "multiplex_m".into(),
                constraint: "must be >= 1".into(),
            });
        }
        if raw.trials == 0 {
            return Err(ConfigError::Validation {
                field: "trials".into(),
                constraint: "must be >= 1".into(),
            });
        }

        Ok(ScenarioConfig {
            geometry: raw.geometry.clone(),
            lambda,
            total_distance,
            multiplex_m: raw.multiplex_m,
            rng_seed: raw.rng_seed,
            trials: raw.trials,
            link,
            blockade,
            raw,
        })
    }

    /// Serializes back to the external document form. Values are emitted
    /// exactly as they were parsed, so parse -> serialize -> parse yields
    /// identical SI values.
    pub fn to_document(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.raw).expect("raw config serializes");
        s.push('\n');
        s
    }

    /// Returns a copy with the master seed replaced (CLI `--seed` override).
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut out = self.clone();
        out.raw.rng_seed = seed;
        out.rng_seed = seed;
        out
    }

    /// Returns a copy with the trial count replaced (CLI `--trials` override).
    pub fn with_trials(&self, trials: u64) -> Self {
        let mut out = self.clone();
        out.raw.trials = trials;
        out.trials = trials;
        out
    }

    /// All non-fatal warnings for this scenario.
    pub fn warnings(&self) -> Vec<Warning> {
        let mut w = self.blockade.warnings();
        let m_t_p = self.multiplex_m as f64 * self.link.t_p;
        if self.multiplex_m > 1 && m_t_p > self.link.t_com() {
            w.push(Warning::MultiplexPipelining {
                m: self.multiplex_m,
                m_t_p,
                t_com: self.link.t_com(),
            });
        }
        w
    }
}

fn classify_json_error(err: serde_json::Error) -> ConfigError {
    let message = err.to_string();
    if err.is_syntax() || err.is_eof() {
        return ConfigError::Syntax {
            line: err.line(),
            column: err.column(),
            message,
        };
    }
    // serde reports unknown keys as data errors; surface them distinctly.
    if let Some(rest) = message.strip_prefix("unknown field ") {
        let key = rest.split(',').next().unwrap_or(rest).trim().to_string();
        return ConfigError::UnknownKey { key };
    }
    if let Some(rest) = message.strip_prefix("unknown variant ") {
        let key = rest.split(',').next().unwrap_or(rest).trim().to_string();
        return ConfigError::UnknownKey { key };
    }
    ConfigError::Validation {
        field: "<document>".into(),
        constraint: message,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(extra: &str) -> String {
        format!(
            r#"{{
                "L0_km": 44, {extra}
                "L_att_km": 22, "c_m_per_s": 2e8, "t_p_us": 20,
                "p": 0.9, "eta_d": 0.9, "eta_ion": 0.95,
                "B_over_2pi_MHz": 10, "tau_us": 500, "optical_depth": 10,
                "Omega_s_over_2pi_MHz": 0.209, "Omega_f_over_2pi_MHz": 0.415,
                "geometry": {{"kind": "lattice", "nx": 7, "ny": 7, "nz": 15, "spacing_um": 0.37}},
                "lambda_nm": 780, "multiplex_m": 1, "rng_seed": 7, "trials": 1000
            }}"#
        )
    }

    #[test]
    fn parses_and_converts_units() {
        let cfg = ScenarioConfig::from_document(&doc("")).unwrap();
        assert_eq!(cfg.link.l0, 4.4e4);
        assert_eq!(cfg.link.l_att, 2.2e4);
        assert_eq!(cfg.link.t_p, 20.0 * 1e-6);
        assert!((cfg.blockade.b - 62_831_853.071_795_86).abs() < 1e-3);
        assert_eq!(cfg.lambda, 780.0 * 1e-9);
        assert_eq!(cfg.link.n_levels, 0);
        assert_eq!(cfg.total_distance, 4.4e4);
    }

    #[test]
    fn total_distance_expands_to_l0() {
        let text = doc("").replace("\"L0_km\": 44,", "\"total_distance_km\": 1000, \"n_levels\": 4,");
        let cfg = ScenarioConfig::from_document(&text).unwrap();
        assert_eq!(cfg.link.l0, 62.5e3);
        assert_eq!(cfg.link.l0 * 16.0, cfg.total_distance);
    }

    #[test]
    fn derive_link_geometry_is_exact() {
        assert_eq!(derive_link_geometry(1000e3, 4), 62.5e3);
        assert_eq!(derive_link_geometry(600e3, 0), 600e3);
        assert_eq!(derive_link_geometry(512e3, 3), 64e3);
    }

    #[test]
    fn out_of_range_probability_names_field() {
        let text = doc("").replace("\"p\": 0.9", "\"p\": 1.3");
        match ScenarioConfig::from_document(&text) {
            Err(ConfigError::Validation { field, .. }) => assert_eq!(field, "p"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        let text = doc("\"bogus_key\": 1,");
        match ScenarioConfig::from_document(&text) {
            Err(ConfigError::UnknownKey { key }) => assert!(key.contains("bogus_key")),
            other => panic!("expected unknown-key error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        match ScenarioConfig::from_document("{ \"L0_km\": ") {
            Err(ConfigError::Syntax { line, .. }) => assert!(line >= 1),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn nesting_above_cap_rejected() {
        let text = doc("").replace("\"L0_km\": 44,", "\"total_distance_km\": 1000, \"n_levels\": 5,");
        assert!(matches!(
            ScenarioConfig::from_document(&text),
            Err(ConfigError::Validation { field, .. }) if field == "n_levels"
        ));
    }

    #[test]
    fn both_distance_keys_rejected() {
        let text = doc("\"total_distance_km\": 1000,");
        assert!(ScenarioConfig::from_document(&text).is_err());
    }

    #[test]
    fn roundtrip_preserves_si_values() {
        let cfg = ScenarioConfig::from_document(&doc("")).unwrap();
        let cfg2 = ScenarioConfig::from_document(&cfg.to_document()).unwrap();
        assert_eq!(cfg, cfg2);
    }

    #[test]
    fn rabi_warning_flagged() {
        let text = doc("").replace("\"Omega_s_over_2pi_MHz\": 0.209", "\"Omega_s_over_2pi_MHz\": 6");
        let cfg = ScenarioConfig::from_document(&text).unwrap();
        assert!(cfg
            .warnings()
            .iter()
            .any(|w| matches!(w, Warning::RabiNearBlockade { which: "Omega_s", .. })));
    }

    #[test]
    fn sphere_geometry_parses() {
        let text = doc("").replace(
            "{\"kind\": \"lattice\", \"nx\": 7, \"ny\": 7, \"nz\": 15, \"spacing_um\": 0.37}",
            "{\"kind\": \"sphere\", \"n_atoms\": 200, \"diameter_um\": 6}",
        );
        let cfg = ScenarioConfig::from_document(&text).unwrap();
        assert_eq!(
            cfg.geometry,
            GeometrySpec::Sphere { n_atoms: 200, diameter_um: 6.0 }
        );
    }
}
