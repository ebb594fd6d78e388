//! Run configuration: a TOML file, then command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcatalog::{EtaSign, HFunctionSpec};
use crate::zerofinder::Rect;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    /// [re0, re1, im0, im1] for the rectangle search
    #[serde(default = "default_rect")]
    pub rect: [f64; 4],
    /// [t0, t1] for the critical-line scans
    #[serde(default = "default_t")]
    pub t: [f64; 2],
    /// box in Re s > 1/2 for the zero-free hypothesis check
    #[serde(default = "default_check_box")]
    pub check_box: [f64; 4],
}

fn default_check_box() -> [f64; 4] {
    [0.5, 2.0, -30.0, 30.0]
}

fn default_rect() -> [f64; 4] {
    [0.1, 0.9, 0.0, 30.0]
}

fn default_t() -> [f64; 2] {
    [0.1, 30.0]
}

impl Default for Window {
    fn default() -> Self {
        Window { rect: default_rect(), t: default_t(), check_box: default_check_box() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    #[serde(rename = "T")]
    pub t_max: f64,
    #[serde(rename = "N")]
    pub per_panel: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { t_max: 400.0, per_panel: 24 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitySection {
    /// points w; when empty, `count` random points are drawn from the seed
    #[serde(default)]
    pub w: Vec<Complex64>,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_schedule")]
    pub schedule: Vec<f64>,
}

fn default_count() -> usize {
    20
}

fn default_schedule() -> Vec<f64> {
    vec![50.0, 100.0, 200.0, 400.0]
}

impl Default for IdentitySection {
    fn default() -> Self {
        IdentitySection { w: vec![], count: default_count(), schedule: default_schedule() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    /// (T, N) pairs, doubling
    #[serde(default = "default_spectrum_schedule")]
    pub schedule: Vec<(f64, usize)>,
    /// matching threshold per schedule step (the last one repeats)
    #[serde(default = "default_match_tol")]
    pub match_tol: Vec<f64>,
    /// small model used for the dense cross-check in `compare`
    #[serde(default = "default_small")]
    pub dense_model: (f64, usize),
}

fn default_spectrum_schedule() -> Vec<(f64, usize)> {
    vec![(60.0, 16), (120.0, 32)]
}

fn default_match_tol() -> Vec<f64> {
    vec![1e-3, 1e-4]
}

fn default_small() -> (f64, usize) {
    (6.0, 4)
}

impl Default for SpectrumSection {
    fn default() -> Self {
        SpectrumSection {
            schedule: default_spectrum_schedule(),
            match_tol: default_match_tol(),
            dense_model: default_small(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spec: HFunctionSpec,
    pub eta: EtaSign,
    #[serde(default)]
    pub window: Window,
    #[serde(default)]
    pub quadrature: Quadrature,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub identity: IdentitySection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Command-line values that replace config entries when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub t_max: Option<f64>,
    pub per_panel: Option<usize>,
    pub eta: Option<EtaSign>,
    pub window: Option<Vec<f64>>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        // re-run the constructor checks on the deserialized spec
        let spec =
            HFunctionSpec::new(raw.spec.variant.clone(), raw.spec.declared_sigmas.clone(), raw.spec.label.clone())
                .map_err(|e| Error::Config(e.to_string()))?;
        let cfg = RunConfig { spec, ..raw };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self> {
        if let Some(p) = &o.out {
            self.output_dir = p.clone();
        }
        if let Some(t) = o.t_max {
            self.quadrature.t_max = t;
        }
        if let Some(n) = o.per_panel {
            self.quadrature.per_panel = n;
        }
        if let Some(e) = o.eta {
            self.eta = e;
        }
        if let Some(w) = &o.window {
            match w.len() {
                2 => self.window.t = [w[0], w[1]],
                4 => self.window.rect = [w[0], w[1], w[2], w[3]],
                n => {
                    return Err(Error::Config(format!(
                        "--window takes 2 (t0,t1) or 4 (re0,re1,im0,im1) numbers, got {n}"
                    )))
                }
            }
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::Config(format!("tolerance {k} must be positive, got {v}")));
        }
        for r in [self.window.rect, self.window.check_box] {
            if !(r[0] < r[1] && r[2] < r[3]) {
                return Err(Error::Config(format!("degenerate rectangle {r:?}")));
            }
        }
        if !(self.window.t[0] < self.window.t[1]) {
            return Err(Error::Config(format!("degenerate t window {:?}", self.window.t)));
        }
        if !(self.quadrature.t_max > 0.0) || self.quadrature.per_panel == 0 {
            return Err(Error::Config("quadrature needs T > 0 and N > 0".into()));
        }
        if self.spectrum.match_tol.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::Config("match_tol entries must be positive".into()));
        }
        if self.identity.schedule.is_empty() || self.spectrum.schedule.is_empty() || self.spectrum.match_tol.is_empty()
        {
            return Err(Error::Config("empty schedule".into()));
        }
        Ok(())
    }

    pub fn rect(&self) -> Result<Rect> {
        to_rect(self.window.rect)
    }

    pub fn check_box(&self) -> Result<Rect> {
        to_rect(self.window.check_box)
    }

    pub fn tol(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

fn to_rect([a, b, c, d]: [f64; 4]) -> Result<Rect> {
    Rect::new(a, b, c, d).map_err(|e| Error::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = RunConfig::parse(
            r#"
eta = "minus"
[spec]
label = "r075"
declared_sigmas = [0.75]
[spec.variant]
kind = "rational"
zeros = [[0.75, 0.0]]
poles = []
scale = 1.0
"#,
        )
        .unwrap();
        assert_eq!(c.eta, EtaSign::Minus);
        assert_eq!(c.quadrature.t_max, 400.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("eta = \"plus\"").is_err());
        let bad = "eta = \"plus\"\n[spec]\nlabel = \"x\"\ndeclared_sigmas = []\n[spec.variant]\nkind = \"riemann_xi_2s\"\n[tolerances]\nzero = 0.0\n";
        assert!(matches!(RunConfig::parse(bad), Err(Error::Config(_))));
    }
}
