//! Scenario configuration: a single JSON document holding one scenario or a list.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use anyhow::{bail, Context};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use stokes::formal_model::Parameters;
use stokes::laplace_engine::{wrap_angle, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Stokes,
    Verify,
    ProductSum,
    Gevrey,
    Residual,
}

impl Task {
    pub fn needs_samples(self) -> bool {
        matches!(self, Task::ProductSum | Task::Gevrey | Task::Residual)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tol_quad")]
    pub tol_quad: f64,
    #[serde(default = "default_tol_verify")]
    pub tol_verify: f64,
    #[serde(default = "default_int_tol")]
    pub int_tol: f64,
}

fn default_tol_quad() -> f64 {
    1e-12
}

fn default_tol_verify() -> f64 {
    1e-6
}

fn default_int_tol() -> f64 {
    stokes::special_fn::DEFAULT_INT_TOL
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol_quad: default_tol_quad(), tol_verify: default_tol_verify(), int_tol: default_int_tol() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub alpha: [C; 3],
    pub beta: [C; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub params: ParamsConfig,
    /// Evaluation directions; each sample is otherwise evaluated along its own argument.
    #[serde(default)]
    pub rays: Option<Vec<f64>>,
    #[serde(default)]
    pub x_samples: Vec<C>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_tasks")]
    pub tasks: BTreeSet<Task>,
}

fn default_tasks() -> BTreeSet<Task> {
    [Task::Stokes].into_iter().collect()
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ConfigFile {
    Many { scenarios: Vec<Scenario> },
    One(Scenario),
}

/// Command-line overrides applied to every scenario.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub tol_quad: Option<f64>,
    pub int_tol: Option<f64>,
}

impl Scenario {
    pub fn parameters(&self) -> Parameters {
        Parameters::new(self.params.alpha, self.params.beta).with_int_tol(self.tolerances.int_tol)
    }

    pub fn quad_config(&self) -> QuadConfig {
        QuadConfig::default().with_tol(self.tolerances.tol_quad)
    }

    /// `(direction, sample)` pairs evaluated by the sample-based tasks.
    pub fn evaluation_points(&self) -> Vec<(f64, C)> {
        match &self.rays {
            Some(rays) => rays.iter().flat_map(|&t| self.x_samples.iter().map(move |&x| (t, x))).collect(),
            None => self.x_samples.iter().map(|&x| (x.arg(), x)).collect(),
        }
    }

    fn validate(&self) -> anyhow::Result<()> {
        let t = self.tolerances;
        for (label, v) in [("tol_quad", t.tol_quad), ("tol_verify", t.tol_verify), ("int_tol", t.int_tol)] {
            if !(v.is_finite() && v > 0.0) {
                bail!("scenario {}: tolerance {label} must be positive, got {v}", self.name);
            }
        }
        if self.params.alpha.iter().chain(&self.params.beta).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            bail!("scenario {}: parameters must be finite", self.name);
        }
        if self.tasks.is_empty() {
            bail!("scenario {}: no tasks requested", self.name);
        }
        if self.x_samples.is_empty() && self.tasks.iter().any(|t| t.needs_samples()) {
            bail!("scenario {}: x_samples must be non-empty for product-sum, gevrey and residual", self.name);
        }
        if self.x_samples.iter().any(|x| !(x.norm() > 0.0 && x.norm().is_finite())) {
            bail!("scenario {}: x_samples must be finite and nonzero", self.name);
        }
        if let Some(rays) = &self.rays {
            if rays.is_empty() || rays.iter().any(|r| !r.is_finite()) {
                bail!("scenario {}: rays must be a non-empty list of finite angles", self.name);
            }
        }
        let cone = FRAC_PI_2 - self.quad_config().delta_cone;
        for (theta, x) in self.evaluation_points() {
            if wrap_angle(x.arg() - theta).abs() >= cone {
                bail!("scenario {}: x = {x} lies outside the convergence cone of direction {theta}", self.name);
            }
        }
        Ok(())
    }
}

/// Parse, apply overrides and validate every scenario.
pub fn load(path: &Path, overrides: Overrides) -> anyhow::Result<Vec<Scenario>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed: ConfigFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let mut scenarios = match parsed {
        ConfigFile::Many { scenarios } => scenarios,
        ConfigFile::One(s) => vec![s],
    };
    if scenarios.is_empty() {
        bail!("{} contains no scenarios", path.display());
    }
    let mut names = BTreeSet::new();
    for s in &mut scenarios {
        if let Some(v) = overrides.tol_quad {
            s.tolerances.tol_quad = v;
        }
        if let Some(v) = overrides.int_tol {
            s.tolerances.int_tol = v;
        }
        if !names.insert(s.name.clone()) {
            bail!("duplicate scenario name {}", s.name);
        }
        s.validate()?;
    }
    Ok(scenarios)
}
