//! Experiment configuration. The JSON layout is documented in
//! `docs/config-schema.json` at the repository root.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ensembles::{AtomMode, CoeffNoise, EnsembleKind, RadialLaw, RealLaw};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Simulate,
    Theory,
    Compare,
    Real,
    PdeCheck,
    Fractional,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        serde_json::from_value(Value::String(s.to_string())).ok()
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::Theory => "theory",
            Mode::Compare => "compare",
            Mode::Real => "real",
            Mode::PdeCheck => "pde-check",
            Mode::Fractional => "fractional",
        }
    }
}

/// Independent-coefficient family `Σ ξ_k f_{k,n} z^k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CoefficientLaw {
    pub family: EnsembleKind,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub noise: CoeffNoise,
}

fn one() -> f64 {
    1.0
}

impl CoefficientLaw {
    /// Radial law of the roots as the degree grows, when it has finite mass.
    pub fn limit_law(&self) -> Option<RadialLaw> {
        match self.family {
            EnsembleKind::Kac => Some(RadialLaw::CircleMixture { radii: vec![1.0], weights: vec![1.0] }),
            EnsembleKind::Weyl => Some(RadialLaw::PowerRadial { alpha: self.alpha }),
            EnsembleKind::ExponentialQn => Some(RadialLaw::PowerRadial { alpha: 1.0 }),
            EnsembleKind::Elliptic => Some(RadialLaw::EllipticRadial { alpha: self.alpha }),
            EnsembleKind::Hyperbolic => None,
        }
    }
}

/// Initial data: i.i.d. roots with a radial law, real roots, or a
/// coefficient ensemble. Dispatch is on the `kind` field; coefficient
/// ensembles use `"kind": "coefficients"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Value", into = "Value")]
pub enum Law {
    Radial(RadialLaw),
    Real(RealLaw),
    Coefficients(CoefficientLaw),
}

const RADIAL_KINDS: [&str; 6] =
    ["circleMixture", "powerRadial", "intervalUniform", "ellipticRadial", "hyperbolicRadial", "intervalMixture"];
const REAL_KINDS: [&str; 2] = ["atoms", "arcsine"];

impl TryFrom<Value> for Law {
    type Error = String;

    fn try_from(v: Value) -> Result<Self, String> {
        let kind = v.get("kind").and_then(Value::as_str).ok_or("law needs a string field \"kind\"")?.to_string();
        if kind == "coefficients" {
            let mut v = v;
            v.as_object_mut().map(|o| o.remove("kind"));
            serde_json::from_value(v).map(Law::Coefficients).map_err(|e| format!("coefficients law: {e}"))
        } else if RADIAL_KINDS.contains(&kind.as_str()) {
            serde_json::from_value(v).map(Law::Radial).map_err(|e| format!("{kind} law: {e}"))
        } else if REAL_KINDS.contains(&kind.as_str()) {
            serde_json::from_value(v).map(Law::Real).map_err(|e| format!("{kind} law: {e}"))
        } else {
            Err(format!("unknown law kind {kind:?}"))
        }
    }
}

impl From<Law> for Value {
    fn from(l: Law) -> Value {
        match l {
            Law::Radial(r) => serde_json::to_value(r).expect("law serializes"),
            Law::Real(r) => serde_json::to_value(r).expect("law serializes"),
            Law::Coefficients(c) => {
                let mut v = serde_json::to_value(c).expect("law serializes");
                v.as_object_mut().unwrap().insert("kind".into(), Value::String("coefficients".into()));
                v
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Tolerances {
    /// Root-finder correction tolerance; degree-based default when absent.
    #[serde(default)]
    pub root: Option<f64>,
    #[serde(default = "max_iter")]
    pub max_iter: usize,
    /// Bound on the PDE residual in `pde-check`.
    #[serde(default = "pde_tol")]
    pub pde: f64,
}

fn max_iter() -> usize {
    200
}

fn pde_tol() -> f64 {
    1e-6
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { root: None, max_iter: max_iter(), pde: pde_tol() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub law: Option<Law>,
    /// Degree of the initial polynomial (complex) or degree per unit mass
    /// (real). Mode default when absent.
    #[serde(default)]
    pub n: Option<usize>,
    /// Times; the derivative order is `⌊t n⌋`.
    #[serde(default)]
    pub t: Vec<f64>,
    /// Real derivative orders for `fractional`.
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "bins")]
    pub bins: usize,
    /// Grid points per theory curve.
    #[serde(default = "theory_points")]
    pub theory_points: usize,
    #[serde(default)]
    pub atom_mode: AtomMode,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "out")]
    pub out: PathBuf,
}

fn bins() -> usize {
    50
}

fn theory_points() -> usize {
    400
}

fn out() -> PathBuf {
    PathBuf::from("out")
}

pub const DEFAULT_N_COMPLEX: usize = 2000;
pub const DEFAULT_N_REAL: usize = 10000;

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields default")
    }
}

/// Command-line values that replace config fields.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub n: Option<usize>,
    pub t: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub bins: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parses a config, or the `config` member of an emitted manifest.
    pub fn from_json(s: &str) -> Result<Self, Error> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        let v = match v.get("config") {
            Some(inner) if v.get("artifacts").is_some() => inner.clone(),
            _ => v,
        };
        serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub fn apply(&mut self, o: Overrides) {
        if o.mode.is_some() {
            self.mode = o.mode;
        }
        if o.n.is_some() {
            self.n = o.n;
        }
        if let Some(t) = o.t {
            self.t = t;
        }
        if let Some(a) = o.alpha {
            self.alpha = a;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(b) = o.bins {
            self.bins = b;
        }
        if let Some(p) = o.out {
            self.out = p;
        }
    }

    /// Fills mode defaults and checks every field; the result is what the
    /// manifest records.
    pub fn resolve(mut self) -> Result<Self, Error> {
        let bad = |m: String| Err(Error::Config(m));
        let Some(mode) = self.mode else {
            return bad("no mode given".into());
        };
        let law = self.law.clone();
        if law.is_none() && mode != Mode::PdeCheck {
            return bad(format!("mode {} needs a law", mode.name()));
        }
        if self.n.is_none() {
            self.n = Some(if matches!(law, Some(Law::Real(_))) { DEFAULT_N_REAL } else { DEFAULT_N_COMPLEX });
        }
        if self.n == Some(0) {
            return bad("n must be at least 1".into());
        }
        if self.bins == 0 || self.theory_points < 2 {
            return bad("bins must be positive and theoryPoints at least 2".into());
        }
        let mass = match &law {
            Some(Law::Radial(r)) => {
                r.validate().map_err(|e| Error::Config(e.to_string()))?;
                r.total_mass()
            }
            Some(Law::Real(r)) => {
                r.validate().map_err(|e| Error::Config(e.to_string()))?;
                r.total_mass()
            }
            Some(Law::Coefficients(c)) => {
                if !(c.alpha > 0.0 && c.alpha.is_finite()) {
                    return bad("coefficient alpha must be positive".into());
                }
                1.0
            }
            None => 1.0,
        };
        match (mode, &law) {
            (Mode::Real, Some(Law::Real(_))) => {}
            (Mode::Real, _) => return bad("mode real needs an atoms or arcsine law".into()),
            (Mode::Simulate | Mode::Theory, _) => {}
            (Mode::Compare, Some(Law::Real(_))) => {}
            (Mode::Compare, Some(Law::Coefficients(c))) if c.limit_law().is_none() => {
                return bad("this coefficient family has no finite-mass limit law to compare with".into())
            }
            (Mode::Compare, Some(Law::Radial(r))) if r.total_mass().is_infinite() => {
                return bad("cannot sample roots from an infinite-mass law".into())
            }
            (Mode::Fractional, Some(Law::Real(_))) => return bad("fractional mode needs a complex law".into()),
            _ => {}
        }
        if mode == Mode::Fractional {
            if self.alpha.is_empty() {
                return bad("fractional mode needs a nonempty alpha list".into());
            }
            let n = self.n.unwrap() as f64;
            if let Some(a) = self.alpha.iter().find(|a| !(**a >= 0.0 && **a <= n)) {
                return bad(format!("derivative order {a} outside [0, n]"));
            }
        } else if mode != Mode::PdeCheck {
            if self.t.is_empty() {
                return bad("t list is empty".into());
            }
            if let Some(t) = self.t.iter().find(|t| !(**t >= 0.0 && **t < mass)) {
                return bad(format!("t = {t} outside [0, {mass})"));
            }
            if matches!(law, Some(Law::Radial(_)) | Some(Law::Coefficients(_))) && mode != Mode::Theory {
                let n = self.n.unwrap();
                if self.t.iter().any(|&t| order(t, n) >= n) {
                    return bad("some t leaves no roots at this n".into());
                }
            }
        }
        if let Some(tol) = self.tolerances.root {
            if !(tol > 0.0) {
                return bad("root tolerance must be positive".into());
            }
        }
        if !(self.tolerances.pde > 0.0) || self.tolerances.max_iter == 0 {
            return bad("pde tolerance and maxIter must be positive".into());
        }
        Ok(self)
    }

    pub fn mode(&self) -> Mode {
        self.mode.expect("resolved config has a mode")
    }

    pub fn degree(&self) -> usize {
        self.n.expect("resolved config has n")
    }
}

/// Derivative order `⌊t n⌋`, guarded against `t n` landing a hair below an
/// integer through rounding of `t`.
pub fn order(t: f64, n: usize) -> usize {
    let x = t * n as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r as usize
    } else {
        x.floor() as usize
    }
}
