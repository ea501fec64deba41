//! Plain-text run configuration: `key = value` lines grouped in
//! `[target]`, `[flow]`, `[integrator]` and `[output]` sections.
//! `#` starts a comment. Unknown sections and keys are errors.

use super::{cfl_bound, IntegratorConfig, Scheme, DEFAULT_STABILITY_FACTOR};
use crate::curve::DiscreteCurve;
use crate::error::{FlowError, Result};
use crate::flow::FlowParams;
use crate::manifold::{TargetKind, TargetManifold};
use crate::spectral::{GridSpec, DEFAULT_DEALIAS};
use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    GreatCircle { winding: u32 },
    Latitude { theta: f64 },
    /// `normalize((cos x, sin x, amplitude · cos(mode x)))`.
    Perturbed { amplitude: f64, mode: u32 },
    /// [`DiscreteCurve::random_smooth`] with the given seed.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetConfig {
    pub kind: TargetKind,
    pub curvature_scale: f64,
    pub initial: InitialData,
}

impl TargetConfig {
    pub fn manifold(&self) -> Result<TargetManifold> {
        TargetManifold::from_kind(self.kind)?.with_curvature_scale(self.curvature_scale)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub target: TargetConfig,
    pub flow: FlowParams,
    pub integrator: IntegratorConfig,
    pub points: usize,
    pub dealias: f64,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let flow = FlowParams { a: 1.0, b: 0.0, c: 0.0, lambda: 1.0, epsilon: 0.1 };
        let points = 64;
        let dt = 0.5 * cfl_bound(points, &flow, DEFAULT_STABILITY_FACTOR);
        RunConfig {
            target: TargetConfig {
                kind: TargetKind::Sphere2,
                curvature_scale: 1.0,
                initial: InitialData::GreatCircle { winding: 1 },
            },
            flow,
            integrator: IntegratorConfig::new(Scheme::ExplicitRk4, dt, 100.0 * dt).with_record_every(10),
            points,
            dealias: DEFAULT_DEALIAS,
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FlowError::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.points, self.dealias).map_err(|e| FlowError::Config(e.to_string()))
    }

    pub fn initial_curve(&self) -> Result<DiscreteCurve> {
        let target = self.target.manifold().map_err(|e| FlowError::Config(e.to_string()))?;
        let grid = self.grid()?;
        Ok(match self.target.initial {
            InitialData::GreatCircle { winding } => DiscreteCurve::great_circle(target, grid, winding),
            InitialData::Latitude { theta } => DiscreteCurve::latitude(target, grid, theta),
            InitialData::Perturbed { amplitude, mode } => {
                DiscreteCurve::perturbed_great_circle(target, grid, amplitude, mode)
            }
            InitialData::Random { seed } => DiscreteCurve::random_smooth(target, grid, seed),
        })
    }

    /// Replaces the seed of random initial data.
    pub fn set_seed(&mut self, seed: u64) {
        if let InitialData::Random { seed: s } = &mut self.target.initial {
            *s = seed;
        }
    }
}

/// Parses `sphere2`, `cp<n>` or `gr<n>,<k>`.
pub fn parse_target_kind(s: &str) -> Result<TargetKind> {
    let s = s.trim().to_ascii_lowercase();
    let num = |v: &str| -> Result<usize> {
        v.trim().parse().map_err(|_| FlowError::Config(format!("bad target dimension '{v}' in '{s}'")))
    };
    if s == "sphere2" || s == "s2" {
        Ok(TargetKind::Sphere2)
    } else if let Some(n) = s.strip_prefix("cp") {
        Ok(TargetKind::ComplexProjective(num(n)?))
    } else if let Some(rest) = s.strip_prefix("gr") {
        let (n, k) = rest
            .split_once(',')
            .ok_or_else(|| FlowError::Config(format!("grassmannian target must look like gr<n>,<k>, got '{s}'")))?;
        Ok(TargetKind::GrassmannianCompact { n: num(n)?, k: num(k)? })
    } else {
        Err(FlowError::Config(format!("unknown target '{s}' (expected sphere2, cp<n> or gr<n>,<k>)")))
    }
}

#[derive(Default)]
struct Raw {
    kind: Option<String>,
    n: Option<usize>,
    k: Option<usize>,
    initial: Option<String>,
    winding: Option<u32>,
    latitude: Option<f64>,
    amplitude: Option<f64>,
    mode: Option<u32>,
    seed: Option<u64>,
    dt: Option<f64>,
}

impl FromStr for RunConfig {
    type Err = FlowError;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut raw = Raw::default();
        let mut section = String::new();
        let mut seen = HashSet::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                if !["target", "flow", "integrator", "output"].contains(&name) {
                    return Err(FlowError::Config(format!("line {lineno}: unknown section [{name}]")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| FlowError::Config(format!("line {lineno}: expected 'key = value'")))?;
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            if section.is_empty() {
                return Err(FlowError::Config(format!("line {lineno}: key '{key}' outside any section")));
            }
            if !seen.insert(format!("{section}.{key}")) {
                return Err(FlowError::Config(format!("line {lineno}: duplicate key {section}.{key}")));
            }
            let bad = || FlowError::Config(format!("line {lineno}: bad value '{value}' for {section}.{key}"));
            macro_rules! num {
                () => {
                    value.parse().map_err(|_| bad())?
                };
            }
            match (section.as_str(), key) {
                ("target", "kind") => raw.kind = Some(value.to_string()),
                ("target", "n") => raw.n = Some(num!()),
                ("target", "k") => raw.k = Some(num!()),
                ("target", "curvature_scale") => cfg.target.curvature_scale = num!(),
                ("target", "initial") => raw.initial = Some(value.to_ascii_lowercase()),
                ("target", "winding") => raw.winding = Some(num!()),
                ("target", "latitude") => raw.latitude = Some(num!()),
                ("target", "amplitude") => raw.amplitude = Some(num!()),
                ("target", "mode") => raw.mode = Some(num!()),
                ("target", "seed") => raw.seed = Some(num!()),
                ("flow", "a") => cfg.flow.a = num!(),
                ("flow", "b") => cfg.flow.b = num!(),
                ("flow", "c") => cfg.flow.c = num!(),
                ("flow", "lambda") => cfg.flow.lambda = num!(),
                ("flow", "epsilon") => cfg.flow.epsilon = num!(),
                ("integrator", "scheme") => cfg.integrator.scheme = value.parse()?,
                ("integrator", "points") => cfg.points = num!(),
                ("integrator", "dealias") => cfg.dealias = num!(),
                ("integrator", "dt") => raw.dt = Some(num!()),
                ("integrator", "t_end") => cfg.integrator.t_end = num!(),
                ("integrator", "record_every") => cfg.integrator.record_every = num!(),
                ("integrator", "k_diag") => cfg.integrator.k_diag = num!(),
                ("integrator", "stability_factor") => cfg.integrator.stability_factor = num!(),
                ("output", "csv") => cfg.output.csv = Some(PathBuf::from(value)),
                ("output", "checkpoint") => cfg.output.checkpoint = Some(PathBuf::from(value)),
                _ => return Err(FlowError::Config(format!("line {lineno}: unknown key '{key}' in [{section}]"))),
            }
        }

        cfg.target.kind = match raw.kind.as_deref().map(str::to_ascii_lowercase).as_deref() {
            None | Some("sphere2") => TargetKind::Sphere2,
            Some("cp") | Some("complex_projective") => TargetKind::ComplexProjective(raw.n.unwrap_or(2)),
            Some("gr") | Some("grassmannian") => {
                TargetKind::GrassmannianCompact { n: raw.n.unwrap_or(4), k: raw.k.unwrap_or(2) }
            }
            Some(other) => parse_target_kind(other)?,
        };
        cfg.target.initial = match raw.initial.as_deref() {
            None | Some("great_circle") => InitialData::GreatCircle { winding: raw.winding.unwrap_or(1) },
            Some("latitude") => InitialData::Latitude { theta: raw.latitude.unwrap_or(0.4) },
            Some("perturbed") => {
                InitialData::Perturbed { amplitude: raw.amplitude.unwrap_or(0.1), mode: raw.mode.unwrap_or(3) }
            }
            Some("random") => InitialData::Random { seed: raw.seed.unwrap_or(0) },
            Some(other) => {
                return Err(FlowError::Config(format!(
                    "unknown initial data '{other}' (expected great_circle, latitude, perturbed or random)"
                )))
            }
        };
        cfg.flow.validate().map_err(|e| FlowError::Config(e.to_string()))?;
        cfg.grid()?;
        cfg.target.manifold().map_err(|e| FlowError::Config(e.to_string()))?;
        cfg.integrator.dt = match raw.dt {
            Some(dt) => dt,
            None => 0.5 * cfl_bound(cfg.points, &cfg.flow, cfg.integrator.stability_factor),
        };
        cfg.integrator.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = "
# comment
[target]
kind = cp
n = 2
initial = perturbed
amplitude = 0.2
mode = 2

[flow]
a = 1.5
b = 0.5  # trailing
c = -1
lambda = 0
epsilon = 0.25

[integrator]
scheme = imex-bdf2
points = 32
dt = 1e-4
t_end = 1e-2
record_every = 5
k_diag = 5

[output]
csv = out.csv
";
        let cfg: RunConfig = text.parse().unwrap();
        assert_eq!(cfg.target.kind, TargetKind::ComplexProjective(2));
        assert_eq!(cfg.target.initial, InitialData::Perturbed { amplitude: 0.2, mode: 2 });
        assert_eq!(cfg.flow, FlowParams { a: 1.5, b: 0.5, c: -1.0, lambda: 0.0, epsilon: 0.25 });
        assert_eq!(cfg.integrator.scheme, Scheme::ImexBdf2);
        assert_eq!((cfg.points, cfg.integrator.record_every, cfg.integrator.k_diag), (32, 5, 5));
        assert_eq!(cfg.output.csv, Some(PathBuf::from("out.csv")));
        assert!(cfg.initial_curve().unwrap().max_constraint_violation() < 1e-12);
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(matches!("[flow]\nalpha = 1".parse::<RunConfig>(), Err(FlowError::Config(_))));
        assert!(matches!("[solver]\na = 1".parse::<RunConfig>(), Err(FlowError::Config(_))));
        assert!(matches!("a = 1".parse::<RunConfig>(), Err(FlowError::Config(_))));
        assert!(matches!("[flow]\na = one".parse::<RunConfig>(), Err(FlowError::Config(_))));
        assert!(matches!("[flow]\na = 1\na = 2".parse::<RunConfig>(), Err(FlowError::Config(_))));
        assert!(matches!("[integrator]\npoints = 15".parse::<RunConfig>(), Err(FlowError::Config(_))));
        assert!(matches!("[target]\ninitial = spiral".parse::<RunConfig>(), Err(FlowError::Config(_))));
    }

    #[test]
    fn default_dt_is_half_the_explicit_bound() {
        let cfg: RunConfig = "[flow]\na = 2\nepsilon = 0".parse().unwrap();
        assert_eq!(cfg.integrator.dt, 0.5 * cfl_bound(64, &cfg.flow, DEFAULT_STABILITY_FACTOR));
    }

    #[test]
    fn target_strings() {
        assert_eq!(parse_target_kind("sphere2").unwrap(), TargetKind::Sphere2);
        assert_eq!(parse_target_kind("CP3").unwrap(), TargetKind::ComplexProjective(3));
        assert_eq!(parse_target_kind("gr4,2").unwrap(), TargetKind::GrassmannianCompact { n: 4, k: 2 });
        assert!(parse_target_kind("gr4").is_err());
        assert!(parse_target_kind("torus").is_err());
    }
}
