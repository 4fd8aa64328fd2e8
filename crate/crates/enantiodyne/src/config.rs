//! Run configuration: file parsing, validation and materialization.
//!
//! Configs are flat sectioned key–value text, chosen for diffability:
//!
//! ```text
//! # weak-drive transit
//! [cavity]
//! mirror_radius = 40 mm
//! mode_index    = 0
//! target_frequency = 5.78109 GHz
//!
//! [drive]
//! lambda  = 0.01
//! delta_m = 822.7 Hz
//!
//! [sample]
//! n_m = 1000
//! v   = 1 m/s
//! ```
//!
//! Physical values accept unit suffixes (`Hz`/`kHz`/`MHz`/`GHz`, `m`/`mm`/
//! `um`/`nm`, `m/s`, `s`/`ms`, `D`); frequencies are cyclic in the file and
//! converted to angular rates on ingestion.  A `.json` file with the same
//! section/key structure is accepted as an alternative encoding (leaf
//! values may be numbers in the canonical external units or strings with
//! unit suffixes).  Unknown sections or keys are errors — no silent typos.
//! A missing `[molecule]` section falls back to the 1,2-propanediol preset
//! with a logged notice.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use crate::cavity::{CavityDesign, CavityGeometry, MirrorReference};
use crate::constants::{angular, DEBYE};
use crate::detection::{HomodyneConfig, DEFAULT_M_Y, DEFAULT_N_LO};
use crate::dynamics::{DissipationParams, DriveConfig, Model, SampleConfig, Scenario};
use crate::error::{Error, Result};
use crate::integrator::IntegratorOptions;
use crate::molecule::{Chirality, MoleculeSpec};

/// Default mirror curvature radius (m).
const DEFAULT_MIRROR_RADIUS: f64 = 40e-3;
/// Default target mode frequency (Hz, cyclic): the |2⟩↔|3⟩ transition.
const DEFAULT_TARGET_HZ: f64 = 5.78109e9;
/// Default trapped-run horizon (s).
const DEFAULT_T_END: f64 = 10.0;

/// A fully validated, materialized run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub molecule: MoleculeSpec,
    pub design: CavityDesign,
    pub drive: DriveConfig,
    pub sample: SampleConfig,
    pub dissipation: DissipationParams,
    pub homodyne: HomodyneConfig,
    pub options: IntegratorOptions,
    pub model: Model,
    pub seed: u64,
    /// Integration horizon for trapped runs (s); moving transits always use
    /// [0, 8τ].
    pub t_end: f64,
    /// FNV-1a hash of the raw key–value content, for output provenance.
    pub config_hash: u64,
    /// Human-readable notes accumulated while loading (fallbacks, derived
    /// defaults); callers should surface these.
    pub notices: Vec<String>,
}

impl RunConfig {
    /// Load from a path; `.json` selects the JSON encoding.
    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let json = path.extension().and_then(|e| e.to_str()) == Some("json");
        Self::from_str(&text, json)
    }

    /// Parse from text in either encoding.
    pub fn from_str(text: &str, json: bool) -> Result<Self> {
        let raw = if json { parse_json(text)? } else { parse_sections(text)? };
        materialize(raw)
    }

    /// Dissipation rates derived from the molecule and sample geometry:
    /// the working-transition free-space decay rate and the dipole–dipole
    /// bound at the sample extent.  Returns the rates and a notice line.
    pub fn derive_dissipation(&self) -> (DissipationParams, String) {
        derive_dissipation(&self.molecule, &self.sample)
    }

    /// The scenario this config describes.
    pub fn scenario(&self) -> Scenario {
        Scenario {
            drive: self.drive,
            sample: self.sample,
            dissipation: self.dissipation,
            g0: self.design.g0,
            w0: self.design.w0,
            kappa: self.design.kappa,
            options: self.options,
        }
    }

    /// The output grid implied by the sample: τ/1000 spacing over [0, 8τ]
    /// for transits, 10⁴ uniform samples over [0, t_end] for trapped runs.
    pub fn grid(&self) -> Vec<f64> {
        let scenario = self.scenario();
        if self.sample.trapped {
            scenario.trapped_grid(self.t_end)
        } else {
            scenario.transit_grid()
        }
    }
}

/// One raw value with its source line (0 for JSON input).
#[derive(Debug, Clone)]
struct RawValue {
    text: String,
    line: usize,
}

type Section = BTreeMap<String, RawValue>;
type Sections = BTreeMap<String, (Section, usize)>;

fn parse_sections(text: &str) -> Result<Sections> {
    let mut sections: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or(Error::ConfigParse {
                line: line_no,
                message: "unterminated section header".into(),
            })?;
            let name = name.trim().to_ascii_lowercase();
            if sections.contains_key(&name) {
                return Err(Error::ConfigParse {
                    line: line_no,
                    message: format!("duplicate section [{name}]"),
                });
            }
            sections.insert(name.clone(), (Section::new(), line_no));
            current = Some(name);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(Error::ConfigParse {
            line: line_no,
            message: "expected `key = value` or `[section]`".into(),
        })?;
        let section = current.as_ref().ok_or(Error::ConfigParse {
            line: line_no,
            message: "key before any [section] header".into(),
        })?;
        let key = key.trim().to_ascii_lowercase();
        let value = RawValue {
            text: value.trim().to_string(),
            line: line_no,
        };
        let entry = sections.get_mut(section).expect("section exists");
        if entry.0.insert(key.clone(), value).is_some() {
            return Err(Error::ConfigParse {
                line: line_no,
                message: format!("duplicate key `{key}` in [{section}]"),
            });
        }
    }
    Ok(sections)
}

fn parse_json(text: &str) -> Result<Sections> {
    let root: serde_json::Value = serde_json::from_str(text)?;
    let obj = root.as_object().ok_or_else(|| Error::ConfigValidation(
        "JSON config root must be an object of sections".into(),
    ))?;
    let mut sections = Sections::new();
    for (name, body) in obj {
        let body = body.as_object().ok_or_else(|| {
            Error::ConfigValidation(format!("JSON section `{name}` must be an object"))
        })?;
        let mut section = Section::new();
        for (key, value) in body {
            let text = match value {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Bool(b) => b.to_string(),
                other => {
                    return Err(Error::ConfigValidation(format!(
                        "JSON value `{name}.{key}` must be a number, string or bool, got {other}"
                    )))
                }
            };
            section.insert(key.to_ascii_lowercase(), RawValue { text, line: 0 });
        }
        sections.insert(name.to_ascii_lowercase(), (section, 0));
    }
    Ok(sections)
}

/// Dimension of a config value, deciding which unit suffixes apply and the
/// canonical internal unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Cyclic frequency in the file (Hz...GHz) → angular rad/s internally.
    Frequency,
    /// Angular rate: plain numbers are rad/s; an explicit Hz-family suffix
    /// converts from cyclic.
    Rate,
    /// Length → m.
    Length,
    /// Speed → m/s.
    Speed,
    /// Time → s.
    Time,
    /// Dipole moment: plain numbers are Debye → C·m.
    Dipole,
    /// Dimensionless.
    Plain,
}

/// Split `"5.78109 GHz"` / `"822.7Hz"` / `"3.42e4"` into numeric text and
/// unit token, keeping scientific-notation exponents with the number.
fn split_unit(text: &str) -> (&str, &str) {
    let bytes = text.as_bytes();
    let mut i = 0;
    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        i += 1;
    }
    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
        i += 1;
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    (text[..i].trim(), text[i..].trim())
}

fn parse_quantity(value: &RawValue, kind: Kind) -> Result<f64> {
    let (number, unit) = split_unit(&value.text);
    let base: f64 = number.parse().map_err(|_| Error::ConfigParse {
        line: value.line,
        message: format!("`{}` is not a number", value.text),
    })?;
    let bad_unit = || Error::ConfigParse {
        line: value.line,
        message: format!("unit `{unit}` does not apply here"),
    };
    let hz_factor = |unit: &str| match unit {
        "Hz" => Some(1.0),
        "kHz" => Some(1e3),
        "MHz" => Some(1e6),
        "GHz" => Some(1e9),
        _ => None,
    };
    match kind {
        Kind::Frequency => {
            let factor = if unit.is_empty() { 1.0 } else { hz_factor(unit).ok_or_else(bad_unit)? };
            Ok(angular(base * factor))
        }
        Kind::Rate => {
            if unit.is_empty() {
                Ok(base)
            } else {
                Ok(angular(base * hz_factor(unit).ok_or_else(bad_unit)?))
            }
        }
        Kind::Length => {
            let factor = match unit {
                "" | "m" => 1.0,
                "mm" => 1e-3,
                "um" | "µm" => 1e-6,
                "nm" => 1e-9,
                _ => return Err(bad_unit()),
            };
            Ok(base * factor)
        }
        Kind::Speed => match unit {
            "" | "m/s" => Ok(base),
            _ => Err(bad_unit()),
        },
        Kind::Time => match unit {
            "" | "s" => Ok(base),
            "ms" => Ok(base * 1e-3),
            _ => Err(bad_unit()),
        },
        Kind::Dipole => match unit {
            "" | "D" => Ok(base * DEBYE),
            _ => Err(bad_unit()),
        },
        Kind::Plain => {
            if unit.is_empty() {
                Ok(base)
            } else {
                Err(bad_unit())
            }
        }
    }
}

/// Typed view over one section that tracks which keys were consumed so
/// leftovers can be reported as unknown.
struct SectionReader {
    name: String,
    entries: Section,
}

impl SectionReader {
    fn take(&mut self, key: &str) -> Option<RawValue> {
        self.entries.remove(key)
    }

    fn quantity(&mut self, key: &str, kind: Kind) -> Result<Option<f64>> {
        self.take(key).map(|v| parse_quantity(&v, kind)).transpose()
    }

    fn integer(&mut self, key: &str) -> Result<Option<u64>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v.text.parse::<u64>().map(Some).map_err(|_| Error::ConfigParse {
                line: v.line,
                message: format!("`{}` is not a non-negative integer", v.text),
            }),
        }
    }

    fn boolean(&mut self, key: &str) -> Result<Option<bool>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => match v.text.to_ascii_lowercase().as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(Error::ConfigParse {
                    line: v.line,
                    message: format!("`{}` is not `true` or `false`", v.text),
                }),
            },
        }
    }

    fn word(&mut self, key: &str) -> Option<RawValue> {
        self.take(key)
    }

    fn finish(self) -> Result<()> {
        if let Some((key, value)) = self.entries.into_iter().next() {
            return Err(Error::ConfigParse {
                line: value.line,
                message: format!("unknown key `{key}` in [{}]", self.name),
            });
        }
        Ok(())
    }
}

fn reader(sections: &mut Sections, name: &str) -> SectionReader {
    SectionReader {
        name: name.to_string(),
        entries: sections.remove(name).map(|(s, _)| s).unwrap_or_default(),
    }
}

fn fnv1a(bytes: &[u8], mut hash: u64) -> u64 {
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x100_0000_01b3);
    }
    hash
}

fn hash_sections(sections: &Sections) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325;
    for (name, (section, _)) in sections {
        hash = fnv1a(name.as_bytes(), hash);
        for (key, value) in section {
            hash = fnv1a(key.as_bytes(), hash);
            hash = fnv1a(value.text.as_bytes(), hash);
        }
    }
    hash
}

fn require(section: &str, key: &str, value: Option<f64>) -> Result<f64> {
    value.ok_or_else(|| Error::ConfigValidation(format!("[{section}] requires `{key}`")))
}

fn derive_dissipation(molecule: &MoleculeSpec, sample: &SampleConfig) -> (DissipationParams, String) {
    let gamma = molecule.decay_rate_32();
    let k_m = molecule.omega_32() / crate::constants::SPEED_OF_LIGHT;
    let bounds = crate::analytics::dipole_bound(gamma, sample.n_m, sample.l_sample, k_m);
    let notice = format!(
        "derived gamma = {:.4e} rad/s and V_max = {:.4e} rad/s from the molecule and sample geometry",
        gamma, bounds.v_max
    );
    (
        DissipationParams {
            gamma,
            v_max: bounds.v_max,
        },
        notice,
    )
}

fn materialize(mut sections: Sections) -> Result<RunConfig> {
    let config_hash = hash_sections(&sections);
    let mut notices = Vec::new();

    // [molecule]
    let molecule = if sections.contains_key("molecule") {
        let mut sec = reader(&mut sections, "molecule");
        let chirality = match sec.word("chirality") {
            None => Chirality::Left,
            Some(v) => v.text.parse::<Chirality>().map_err(|e| Error::ConfigParse {
                line: v.line,
                message: e.to_string(),
            })?,
        };
        let mut spec = MoleculeSpec::propanediol(chirality);
        if let Some(a) = sec.quantity("a", Kind::Frequency)? {
            spec.a = a;
        }
        if let Some(b) = sec.quantity("b", Kind::Frequency)? {
            spec.b = b;
        }
        if let Some(c) = sec.quantity("c", Kind::Frequency)? {
            spec.c = c;
        }
        if let Some(mu) = sec.quantity("mu_a", Kind::Dipole)? {
            spec.mu_a = mu;
        }
        if let Some(mu) = sec.quantity("mu_b", Kind::Dipole)? {
            spec.mu_b = mu;
        }
        if let Some(mu) = sec.quantity("mu_c", Kind::Dipole)? {
            spec.mu_c = mu;
        }
        sec.finish()?;
        spec
    } else {
        notices.push("no [molecule] section: using the 1,2-propanediol preset".to_string());
        MoleculeSpec::propanediol(Chirality::Left)
    };
    molecule.validate()?;

    // [cavity]
    let mut sec = reader(&mut sections, "cavity");
    let r_m = sec.quantity("mirror_radius", Kind::Length)?.unwrap_or(DEFAULT_MIRROR_RADIUS);
    let q = sec.integer("mode_index")?.unwrap_or(0) as u32;
    let target = sec.quantity("target_frequency", Kind::Frequency)?;
    let spacing = sec.quantity("spacing", Kind::Length)?;
    sec.finish()?;
    let design = match (spacing, target) {
        (Some(_), Some(_)) => {
            return Err(Error::ConfigValidation(
                "[cavity] takes either `spacing` or `target_frequency`, not both".into(),
            ))
        }
        (Some(d), None) => CavityDesign::from_geometry(
            CavityGeometry { r_m, d, q },
            &MirrorReference::default(),
            molecule.mu_b,
        )?,
        (None, explicit_target) => {
            let f_hz = explicit_target.map(crate::constants::cyclic).unwrap_or(DEFAULT_TARGET_HZ);
            CavityDesign::solve(r_m, q, f_hz, &MirrorReference::default(), molecule.mu_b)?
        }
    };

    // [drive]
    let mut sec = reader(&mut sections, "drive");
    let lambda = require("drive", "lambda", sec.quantity("lambda", Kind::Plain)?)?;
    let delta_m = require("drive", "delta_m", sec.quantity("delta_m", Kind::Frequency)?)?;
    let delta_c = sec.quantity("delta_c", Kind::Frequency)?.unwrap_or(0.0);
    let explicit_eta = sec.quantity("eta", Kind::Rate)?;
    sec.finish()?;
    if lambda < 0.0 {
        return Err(Error::ConfigValidation("[drive] lambda must be ≥ 0".into()));
    }
    let drive = DriveConfig::from_lambda(lambda, delta_m, delta_c, design.kappa, design.g0);
    if let Some(eta) = explicit_eta {
        let rel = (eta - drive.eta).abs() / drive.eta.abs().max(f64::MIN_POSITIVE);
        if rel > 1e-9 {
            return Err(Error::ConfigValidation(format!(
                "[drive] explicit eta = {eta} rad/s disagrees with eta(lambda) = {} rad/s \
                 (relative difference {rel:.3e} > 1e-9)",
                drive.eta
            )));
        }
    }

    // [sample]
    let mut sec = reader(&mut sections, "sample");
    let n_m = require("sample", "n_m", sec.quantity("n_m", Kind::Plain)?)?;
    let v = sec.quantity("v", Kind::Speed)?.unwrap_or(1.0);
    let ybar0_m = sec.quantity("ybar0", Kind::Length)?;
    let ybar0_waists = sec.quantity("ybar0_waists", Kind::Plain)?;
    let trapped = sec.boolean("trapped")?.unwrap_or(false);
    let sigma_z0 = sec.quantity("sigma_z0", Kind::Plain)?.unwrap_or(1.0);
    let l_sample = sec.quantity("l_sample", Kind::Length)?.unwrap_or(0.1 * design.w0);
    sec.finish()?;
    let ybar0 = match (ybar0_m, ybar0_waists) {
        (Some(_), Some(_)) => {
            return Err(Error::ConfigValidation(
                "[sample] takes either `ybar0` or `ybar0_waists`, not both".into(),
            ))
        }
        (Some(m), None) => m,
        (None, Some(w)) => w * design.w0,
        (None, None) => {
            if trapped {
                0.0
            } else {
                -4.0 * design.w0
            }
        }
    };
    let sample = SampleConfig {
        n_m,
        v,
        ybar0,
        trapped,
        sigma_z0,
        l_sample,
    };
    sample.validate()?;

    // [run] (needed before [dissipation] for the model choice)
    let mut sec = reader(&mut sections, "run");
    let seed = sec.integer("seed")?.unwrap_or(0);
    let model = match sec.word("model") {
        None => Model::First,
        Some(v) => v.text.parse::<Model>().map_err(|e| Error::ConfigParse {
            line: v.line,
            message: e.to_string(),
        })?,
    };
    let t_end = sec.quantity("t_end", Kind::Time)?.unwrap_or(DEFAULT_T_END);
    sec.finish()?;

    // [dissipation]
    let dissipation = if sections.contains_key("dissipation") {
        let mut sec = reader(&mut sections, "dissipation");
        let gamma = sec.quantity("gamma", Kind::Frequency)?.unwrap_or(0.0);
        let v_max = sec.quantity("v_max", Kind::Frequency)?.unwrap_or(0.0);
        sec.finish()?;
        if gamma < 0.0 || v_max < 0.0 {
            return Err(Error::ConfigValidation(
                "[dissipation] rates must be ≥ 0".into(),
            ));
        }
        DissipationParams { gamma, v_max }
    } else if model == Model::Dissipative {
        let (derived, notice) = derive_dissipation(&molecule, &sample);
        notices.push(format!("no [dissipation] section: {notice}"));
        derived
    } else {
        DissipationParams::default()
    };

    // [detection]
    let mut sec = reader(&mut sections, "detection");
    let phi_lo = sec.quantity("phi_lo", Kind::Plain)?.unwrap_or(-FRAC_PI_2);
    let n_lo = sec.quantity("n_lo", Kind::Plain)?.unwrap_or(DEFAULT_N_LO);
    let m_y = sec.quantity("m_y", Kind::Plain)?.unwrap_or(DEFAULT_M_Y);
    let t0 = sec.quantity("t0", Kind::Time)?;
    let tf = sec.quantity("tf", Kind::Time)?;
    sec.finish()?;
    let homodyne = match (t0, tf) {
        (Some(t0), Some(tf)) => HomodyneConfig {
            phi_lo,
            n_lo,
            t0,
            tf,
            m_y,
        },
        (None, None) => {
            if trapped {
                HomodyneConfig {
                    phi_lo,
                    n_lo,
                    t0: 0.0,
                    tf: t_end,
                    m_y,
                }
            } else {
                HomodyneConfig {
                    phi_lo,
                    n_lo,
                    ..HomodyneConfig::for_transit(sample.ybar0, sample.v, design.w0, m_y)
                }
            }
        }
        _ => {
            return Err(Error::ConfigValidation(
                "[detection] needs both `t0` and `tf`, or neither".into(),
            ))
        }
    };
    homodyne.validate()?;
    if !homodyne.is_gaussian_valid() {
        notices.push(format!(
            "detection window collects only {:.1} local-oscillator photons; \
             the Gaussian shot model is dubious below {}",
            homodyne.gaussian_count(),
            crate::detection::GAUSSIAN_COUNT_FLOOR
        ));
    }

    // [integrator]
    let mut sec = reader(&mut sections, "integrator");
    let rtol = sec.quantity("rtol", Kind::Plain)?.unwrap_or(1e-8);
    let atol = sec.quantity("atol", Kind::Plain)?.unwrap_or(1e-10);
    let max_step = sec.quantity("max_step", Kind::Time)?.unwrap_or(f64::INFINITY);
    sec.finish()?;
    if rtol <= 0.0 || atol <= 0.0 || max_step <= 0.0 {
        return Err(Error::ConfigValidation(
            "[integrator] tolerances and max_step must be positive".into(),
        ));
    }
    let options = IntegratorOptions {
        rtol,
        atol,
        max_step,
        initial_step: None,
    };

    if let Some((name, (_, line))) = sections.into_iter().next() {
        return Err(Error::ConfigParse {
            line,
            message: format!("unknown section [{name}]"),
        });
    }

    Ok(RunConfig {
        molecule,
        design,
        drive,
        sample,
        dissipation,
        homodyne,
        options,
        model,
        seed,
        t_end,
        config_hash,
        notices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[drive]
lambda = 0.01
delta_m = 822.7 Hz

[sample]
n_m = 1000
";

    #[test]
    fn minimal_config_fills_defaults() {
        let config = RunConfig::from_str(MINIMAL, false).unwrap();
        assert!(config.notices.iter().any(|n| n.contains("propanediol")));
        assert_eq!(config.design.geometry.q, 0);
        assert!((config.design.w0 - 11.59407e-3).abs() < 1e-7);
        assert!((config.drive.delta_m - angular(822.7)).abs() < 1e-9);
        assert!((config.sample.ybar0 + 4.0 * config.design.w0).abs() < 1e-12);
        assert!((config.sample.l_sample - 0.1 * config.design.w0).abs() < 1e-12);
        assert_eq!(config.model, Model::First);
        assert_eq!(config.seed, 0);
        // Default transit window [3.3τ, 4.7τ].
        let tau = config.design.w0 / config.sample.v;
        assert!((config.homodyne.t0 - 3.3 * tau).abs() < 1e-12);
        assert!((config.homodyne.tf - 4.7 * tau).abs() < 1e-12);
        // λ = 0.01 at the q=0 design: η = κ√(λ·N_cr).
        let n_cr = crate::analytics::critical_photon_number(config.drive.delta_m, config.design.g0);
        assert!((config.drive.eta - config.design.kappa * (0.01 * n_cr).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn unit_suffixes_parse() {
        let text = "\
[cavity]
mirror_radius = 40 mm
target_frequency = 5.78109 GHz

[drive]
lambda = 0.01
delta_m = 0.8227 kHz

[sample]
n_m = 1000
v = 1 m/s
ybar0 = -46.37628 mm

[run]
t_end = 10 s
";
        let config = RunConfig::from_str(text, false).unwrap();
        assert!((config.drive.delta_m - angular(822.7)).abs() < 1e-9);
        assert!((config.sample.ybar0 + 46.37628e-3).abs() < 1e-12);
        assert_eq!(config.t_end, 10.0);
    }

    #[test]
    fn unknown_keys_and_sections_error() {
        let text = format!("{MINIMAL}\nwrong_key = 1\n");
        let err = RunConfig::from_str(&text, false).unwrap_err();
        assert!(err.to_string().contains("wrong_key"), "{err}");

        let text = format!("{MINIMAL}\n[mystery]\nx = 1\n");
        let err = RunConfig::from_str(&text, false).unwrap_err();
        assert!(err.to_string().contains("mystery"), "{err}");

        let err = RunConfig::from_str("[drive]\nlambda == 0.01\n", false).unwrap_err();
        assert!(matches!(err, Error::ConfigParse { .. }));
    }

    #[test]
    fn missing_required_keys_error() {
        let err = RunConfig::from_str("[drive]\nlambda = 0.01\n", false).unwrap_err();
        assert!(err.to_string().contains("delta_m"), "{err}");
        let err =
            RunConfig::from_str("[drive]\nlambda = 0.01\ndelta_m = 822.7\n", false).unwrap_err();
        assert!(err.to_string().contains("n_m"), "{err}");
    }

    #[test]
    fn eta_cross_validation() {
        let config = RunConfig::from_str(MINIMAL, false).unwrap();
        let eta = config.drive.eta;
        let good = format!(
            "[drive]\nlambda = 0.01\ndelta_m = 822.7 Hz\neta = {eta:.15e}\n\n[sample]\nn_m = 1000\n"
        );
        assert!(RunConfig::from_str(&good, false).is_ok());
        let bad = format!(
            "[drive]\nlambda = 0.01\ndelta_m = 822.7 Hz\neta = {:.15e}\n\n[sample]\nn_m = 1000\n",
            eta * 1.001
        );
        let err = RunConfig::from_str(&bad, false).unwrap_err();
        assert!(err.to_string().contains("disagrees"), "{err}");
    }

    #[test]
    fn json_encoding_is_equivalent() {
        let ini = RunConfig::from_str(MINIMAL, false).unwrap();
        let json = r#"{
            "drive": {"lambda": 0.01, "delta_m": "822.7 Hz"},
            "sample": {"n_m": 1000}
        }"#;
        let parsed = RunConfig::from_str(json, true).unwrap();
        assert_eq!(parsed.drive.eta, ini.drive.eta);
        assert_eq!(parsed.sample.n_m, ini.sample.n_m);
        assert_eq!(parsed.homodyne.t0, ini.homodyne.t0);
    }

    #[test]
    fn config_hash_tracks_content() {
        let a = RunConfig::from_str(MINIMAL, false).unwrap();
        let b = RunConfig::from_str(MINIMAL, false).unwrap();
        assert_eq!(a.config_hash, b.config_hash);
        let changed = MINIMAL.replace("n_m = 1000", "n_m = 2000");
        let c = RunConfig::from_str(&changed, false).unwrap();
        assert_ne!(a.config_hash, c.config_hash);
        // Comments and blank lines do not affect the hash.
        let commented = format!("# heading\n\n{MINIMAL}");
        let d = RunConfig::from_str(&commented, false).unwrap();
        assert_eq!(a.config_hash, d.config_hash);
    }

    #[test]
    fn trapped_defaults() {
        let text = "\
[drive]
lambda = 0.01
delta_m = 822.7 Hz

[sample]
n_m = 1
trapped = true
";
        let config = RunConfig::from_str(text, false).unwrap();
        assert_eq!(config.sample.ybar0, 0.0);
        assert_eq!(config.homodyne.t0, 0.0);
        assert_eq!(config.homodyne.tf, config.t_end);
        assert_eq!(config.grid().len(), 10_001);
    }

    #[test]
    fn dissipative_model_derives_rates() {
        let text = "\
[drive]
lambda = 0.01
delta_m = 882.7 Hz

[sample]
n_m = 3000

[run]
model = dissipative
";
        let config = RunConfig::from_str(text, false).unwrap();
        assert!(config.dissipation.gamma > 0.0);
        assert!(config.dissipation.v_max > 0.0);
        assert!(config.notices.iter().any(|n| n.contains("V_max")));
        // Explicit section wins.
        let explicit = format!("{text}\n[dissipation]\ngamma = 0 Hz\nv_max = 0 Hz\n");
        let config = RunConfig::from_str(&explicit, false).unwrap();
        assert_eq!(config.dissipation.gamma, 0.0);
    }

    #[test]
    fn contradictory_geometry_is_rejected() {
        let text = "\
[cavity]
spacing = 3.460971 mm
target_frequency = 5.78109 GHz

[drive]
lambda = 0.01
delta_m = 822.7 Hz

[sample]
n_m = 1000
";
        assert!(RunConfig::from_str(text, false).is_err());
    }
}
