//! TOML run configuration.
//!
//! ```toml
//! space = "cone-torus"          # or: model = "path/to/model.json"
//! weights = ["0", "1/2", "-1"]
//! perversities = ["mbar", "mlow", "3/2"]
//! degrees = [0, 3]
//!
//! [fibre]                       # discrete fibre for the spectral predicates
//! kind = "torus"
//! sizes = [16, 16]
//! lengths = [6.283185307179586, 6.283185307179586]
//!
//! [radial]
//! x0 = 1e-4
//! per_decade = 400
//! c = 0.75
//!
//! [suites]
//! cochain = true
//! radial = true
//! ```

use std::path::{Path, PathBuf};

use edgehodge_core::fibredec::{build_fibre, DiscreteFibre, FibreKind};
use edgehodge_core::radial::LogGrid;
use edgehodge_core::stratified::{builtin, middle_perversities, EdgeSpaceModel, Perversity};
use edgehodge_core::{parse_rational, Q};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formats::{read_json, ModelFile};
use crate::suites::Suite;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<PathBuf>,
    #[serde(default)]
    pub weights: Vec<String>,
    #[serde(default)]
    pub perversities: Vec<String>,
    /// Inclusive `[lo, hi]`; defaults to `0..=n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibre: Option<FibreConfig>,
    #[serde(default)]
    pub radial: RadialConfig,
    #[serde(default)]
    pub suites: SuiteToggles,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibreConfig {
    pub kind: String,
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub lengths: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadialConfig {
    pub x0: f64,
    pub per_decade: usize,
    pub c: f64,
}

impl Default for RadialConfig {
    fn default() -> Self {
        RadialConfig { x0: LogGrid::DEFAULT_X0, per_decade: LogGrid::DEFAULT_PER_DECADE, c: 0.75 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteToggles {
    pub cochain: bool,
    pub stratified: bool,
    pub weights: bool,
    pub spectral: bool,
    pub fibredec: bool,
    pub radial: bool,
    pub cli: bool,
}

impl SuiteToggles {
    pub fn all() -> Self {
        SuiteToggles { cochain: true, stratified: true, weights: true, spectral: true, fibredec: true, radial: true, cli: true }
    }

    pub fn enabled(&self) -> Vec<Suite> {
        let flags = [self.cochain, self.stratified, self.weights, self.spectral, self.fibredec, self.radial, self.cli];
        Suite::ALL.iter().zip(flags).filter(|(_, on)| *on).map(|(s, _)| *s).collect()
    }
}

impl RunConfig {
    pub fn for_space(name: &str) -> Self {
        RunConfig {
            space: Some(name.to_string()),
            model: None,
            weights: Vec::new(),
            perversities: Vec::new(),
            degrees: None,
            fibre: None,
            radial: RadialConfig::default(),
            suites: SuiteToggles::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, Error> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        // model paths are relative to the config file
        if let (Some(m), Some(dir)) = (&cfg.model, path.parent()) {
            if m.is_relative() {
                cfg.model = Some(dir.join(m));
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.space.is_some() == self.model.is_some() {
            return Err(Error::Config("give exactly one of `space` or `model`".into()));
        }
        self.parsed_weights()?;
        if let Some(fc) = &self.fibre {
            fc.kind()?;
            if let Some(&n) = fc.sizes.iter().find(|&&n| n < 3) {
                return Err(Error::Config(format!("fibre grid size {n} is below 3")));
            }
        }
        if let Some([lo, hi]) = self.degrees {
            if lo > hi {
                return Err(Error::Config(format!("degree range [{lo}, {hi}] is empty")));
            }
        }
        self.grid()?;
        if !(self.radial.c > 0.5 && self.radial.c < 1.0) {
            return Err(Error::Config(format!("radial.c must lie in (1/2, 1), got {}", self.radial.c)));
        }
        Ok(())
    }

    pub fn parsed_weights(&self) -> Result<Vec<Q>, Error> {
        self.weights.iter().map(|w| parse_weight(w)).collect()
    }

    pub fn grid(&self) -> Result<LogGrid, Error> {
        Ok(LogGrid::new(self.radial.x0, self.radial.per_decade)?)
    }

    pub fn load_space(&self) -> Result<EdgeSpaceModel, Error> {
        match (&self.space, &self.model) {
            (Some(name), None) => Ok(builtin(name)?),
            (None, Some(path)) => read_json::<ModelFile>(path)?.to_model(),
            _ => Err(Error::Config("give exactly one of `space` or `model`".into())),
        }
    }

    pub fn degree_range(&self, n: usize) -> std::ops::RangeInclusive<usize> {
        match self.degrees {
            Some([lo, hi]) => lo..=hi.min(n),
            None => 0..=n,
        }
    }
}

impl FibreConfig {
    pub fn kind(&self) -> Result<FibreKind, Error> {
        match self.kind.as_str() {
            "circle" => Ok(FibreKind::Circle),
            "torus" => Ok(FibreKind::Torus),
            "product" => Ok(FibreKind::Product),
            other => Err(Error::Config(format!("unknown fibre kind `{other}`"))),
        }
    }

    /// Missing lengths default to `2π` per factor.
    pub fn build(&self) -> Result<DiscreteFibre, Error> {
        let lengths = if self.lengths.is_empty() { vec![2.0 * std::f64::consts::PI; self.sizes.len()] } else { self.lengths.clone() };
        Ok(build_fibre(self.kind()?, &self.sizes, &lengths)?)
    }
}

pub fn parse_weight(s: &str) -> Result<Q, Error> {
    parse_rational(s).ok_or_else(|| Error::Config(format!("`{s}` is not a rational number")))
}

/// `mbar`, `mlow` (upper and lower middle), or a rational value.
pub fn parse_perversity(s: &str, f: usize) -> Result<Perversity, Error> {
    let (lower, upper) = middle_perversities(f);
    match s {
        "mbar" => Ok(upper),
        "mlow" => Ok(lower),
        _ => Ok(Perversity::new(parse_rational(s).ok_or_else(|| Error::Config(format!("`{s}` is not a perversity")))?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = RunConfig::from_toml(
            r#"
            space = "cone-torus"
            weights = ["0", "1/2", "-1.5"]
            perversities = ["mbar"]
            degrees = [1, 2]
            [fibre]
            kind = "torus"
            sizes = [8, 8]
            [radial]
            c = 0.6
            [suites]
            radial = true
            "#,
        )
        .unwrap();
        assert_eq!(cfg.parsed_weights().unwrap()[2], Q::new((-3).into(), 2.into()));
        assert_eq!(cfg.radial.x0, 1e-4);
        assert_eq!(cfg.suites.enabled(), [Suite::Radial]);
        assert_eq!(cfg.fibre.unwrap().build().unwrap().dims(), [64, 128, 64]);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "weights = [\"0\"]",
            "space = \"cone-torus\"\nmodel = \"x.json\"",
            "space = \"cone-torus\"\nweights = [\"zero\"]",
            "space = \"cone-torus\"\n[fibre]\nkind = \"circle\"\nsizes = [2]",
            "space = \"cone-torus\"\n[fibre]\nkind = \"klein\"\nsizes = [4]",
            "space = \"cone-torus\"\n[radial]\nx0 = 0.5",
            "space = \"cone-torus\"\ncolour = 1",
        ] {
            assert!(matches!(RunConfig::from_toml(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn perversity_names() {
        assert_eq!(parse_perversity("mbar", 2).unwrap(), Perversity::from_int(0));
        assert_eq!(parse_perversity("mlow", 2).unwrap(), Perversity::from_int(1));
        assert_eq!(parse_perversity("3/2", 2).unwrap(), Perversity::new(Q::new(3.into(), 2.into())));
    }
}
