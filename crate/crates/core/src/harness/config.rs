//! Experiment configuration.
//!
//! Two file formats are accepted. JSON maps directly onto
//! [`ExperimentConfig`]. The flat text format has one `key = value` per line,
//! `#` starts a comment, and keys are the JSON field names:
//!
//! ```text
//! n = 6
//! coupling = 0.5
//! field = 1.0
//! boundary = open
//! method = acq          # ite | qite | acq | dbqite
//! domain = 2
//! dtau = 0.1
//! policy = grid_line_search
//! max_steps = 200
//! initial_state = all_zero   # all_zero | all_plus | random | explicit
//! seed = 7
//! ```
//!
//! `initial_state = random` draws a Haar-random state from `seed`. An
//! explicit state adds a line of `re,im` pairs, one per basis state:
//! `amplitudes = 0.6,0 0,0 0,0 0.8,0`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::acq::StepPolicy;
use crate::error::{Error, Result};
use crate::hamiltonian::{build_tfim, Boundary, SpinChainModel, SPECTRUM_BUDGET};
use crate::qite::MAX_DOMAIN;
use crate::statespace::{normalize, StateVector};
use num_complex::Complex64 as C64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exact imaginary-time evolution.
    Ite,
    Qite,
    #[default]
    Acq,
    /// Closed-form double-bracket steps `exp(s[ρ, H])`.
    Dbqite,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ite => "ite",
            Method::Qite => "qite",
            Method::Acq => "acq",
            Method::Dbqite => "dbqite",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ite" => Ok(Method::Ite),
            "qite" => Ok(Method::Qite),
            "acq" => Ok(Method::Acq),
            "dbqite" => Ok(Method::Dbqite),
            other => Err(Error::Config(format!("unknown method {other:?}; expected ite, qite, acq or dbqite"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    #[default]
    AllZero,
    AllPlus,
    /// Haar-random, drawn from the config seed.
    Random,
    /// Amplitudes as `[re, im]` pairs; normalized on use.
    Explicit(Vec<[f64; 2]>),
}

impl FromStr for InitialState {
    type Err = Error;

    /// Named states only; explicit amplitudes come from a config file.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all_zero" => Ok(InitialState::AllZero),
            "all_plus" => Ok(InitialState::AllPlus),
            "random" => Ok(InitialState::Random),
            other => Err(Error::Config(format!("unknown initial state {other:?}; expected all_zero, all_plus or random"))),
        }
    }
}

impl InitialState {
    pub fn prepare(&self, n: usize, seed: u64) -> Result<StateVector> {
        match self {
            InitialState::AllZero => StateVector::all_zero(n),
            InitialState::AllPlus => StateVector::all_plus(n),
            InitialState::Random => StateVector::random(n, &mut ChaCha8Rng::seed_from_u64(seed)),
            InitialState::Explicit(amps) => {
                if amps.len() != 1 << n {
                    return Err(Error::Config(format!(
                        "explicit initial state has {} amplitudes, a {n}-qubit register needs {}",
                        amps.len(),
                        1usize << n
                    )));
                }
                let v = StateVector::from_vec(amps.iter().map(|a| C64::new(a[0], a[1])).collect())?;
                normalize(&v).map_err(|_| Error::Config("explicit initial state is the zero vector".into()))
            }
        }
    }

    fn name(&self) -> &'static str {
        match self {
            InitialState::AllZero => "all_zero",
            InitialState::AllPlus => "all_plus",
            InitialState::Random => "random",
            InitialState::Explicit(_) => "explicit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub coupling: f64,
    pub field: f64,
    pub boundary: Boundary,
    pub method: Method,
    /// Generator window size `D`, clipped to `n`.
    pub domain: usize,
    pub dtau: f64,
    pub policy: StepPolicy,
    pub max_steps: usize,
    /// Golden-section refinement of the ACQ line search.
    pub refine: bool,
    pub initial_state: InitialState,
    pub seed: u64,
    /// Directory for CSV output; nothing is written when absent.
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 4,
            coupling: 0.5,
            field: 1.0,
            boundary: Boundary::Open,
            method: Method::Acq,
            domain: 2,
            dtau: 0.1,
            policy: StepPolicy::GridLineSearch,
            max_steps: 200,
            refine: false,
            initial_state: InitialState::AllZero,
            seed: 0,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Parse the flat `key = value` format.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut map = Map::new();
        let mut amplitudes: Option<Value> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "amplitudes" {
                amplitudes = Some(parse_amplitudes(value).map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?);
                continue;
            }
            map.insert(key.to_string(), scalar(value));
        }
        if let Some(amps) = amplitudes {
            match map.get("initial_state").and_then(Value::as_str) {
                Some("explicit") => {
                    let mut tagged = Map::new();
                    tagged.insert("explicit".into(), amps);
                    map.insert("initial_state".into(), Value::Object(tagged));
                }
                _ => return Err(Error::Config("amplitudes given without initial_state = explicit".into())),
            }
        } else if map.get("initial_state").and_then(Value::as_str) == Some("explicit") {
            return Err(Error::Config("initial_state = explicit needs an amplitudes line".into()));
        }
        serde_json::from_value(Value::Object(map)).map_err(|e| Error::Config(e.to_string()))
    }

    /// Load a file; `.json` selects JSON, anything else the flat format.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_key_values(&text)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n == 0 || self.n > SPECTRUM_BUDGET {
            return fail(format!("n = {} must lie in 1..={SPECTRUM_BUDGET}", self.n));
        }
        if !(self.dtau.is_finite() && self.dtau > 0.0) {
            return fail(format!("dtau = {} must be a positive number", self.dtau));
        }
        if !self.coupling.is_finite() || !self.field.is_finite() {
            return fail("coupling and field must be finite".into());
        }
        if self.boundary == Boundary::Periodic && self.n < 3 {
            return fail("periodic boundary needs n >= 3".into());
        }
        if matches!(self.method, Method::Qite | Method::Acq) {
            let needed = if self.n > 1 && self.coupling != 0.0 { 2 } else { 1 };
            if self.domain < needed {
                return fail(format!("domain = {} is too small; coupled chains need domain >= 2", self.domain));
            }
            if self.domain.min(self.n) > MAX_DOMAIN {
                return fail(format!("domain = {} exceeds the solver limit {MAX_DOMAIN}", self.domain));
            }
        }
        Ok(())
    }

    pub fn model(&self) -> Result<SpinChainModel> {
        build_tfim(self.n, self.coupling, self.field, self.boundary)
    }

    pub fn effective_domain(&self) -> usize {
        self.domain.min(self.n)
    }

    /// One-line summary used as the CSV header comment.
    pub fn summary(&self) -> String {
        format!(
            "method={} n={} coupling={} field={} boundary={} domain={} dtau={} policy={} max_steps={} refine={} initial_state={} seed={}",
            self.method.name(),
            self.n,
            self.coupling,
            self.field,
            serde_json::to_value(self.boundary).unwrap().as_str().unwrap(),
            self.effective_domain(),
            self.dtau,
            serde_json::to_value(self.policy).unwrap().as_str().unwrap(),
            self.max_steps,
            self.refine,
            self.initial_state.name(),
            self.seed,
        )
    }
}

fn scalar(value: &str) -> Value {
    if let Ok(v) = value.parse::<u64>() {
        return Value::from(v);
    }
    if let Ok(v) = value.parse::<f64>() {
        return Value::from(v);
    }
    match value {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => Value::String(value.to_string()),
    }
}

fn parse_amplitudes(value: &str) -> std::result::Result<Value, String> {
    let pairs = value
        .split_whitespace()
        .map(|pair| {
            let (re, im) = pair.split_once(',').ok_or_else(|| format!("amplitude {pair:?} is not re,im"))?;
            let re: f64 = re.parse().map_err(|_| format!("bad real part in {pair:?}"))?;
            let im: f64 = im.parse().map_err(|_| format!("bad imaginary part in {pair:?}"))?;
            Ok(Value::from(vec![re, im]))
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    Ok(Value::Array(pairs))
}
