//! Suite configuration: defaults, `key=value` files, validation.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use super::HarnessError;
use crate::scalars::Window;

/// Default seed when neither the command line nor `DQRR_SEED` sets one.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Complexes,
    Weyl,
    Koszul,
    Brodzki,
    Fundamental,
    Liecw,
    Fedosov,
    All,
}

impl SuiteName {
    pub const EACH: [SuiteName; 7] = [
        SuiteName::Complexes,
        SuiteName::Weyl,
        SuiteName::Koszul,
        SuiteName::Brodzki,
        SuiteName::Fundamental,
        SuiteName::Liecw,
        SuiteName::Fedosov,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Complexes => "complexes",
            SuiteName::Weyl => "weyl",
            SuiteName::Koszul => "koszul",
            SuiteName::Brodzki => "brodzki",
            SuiteName::Fundamental => "fundamental",
            SuiteName::Liecw => "liecw",
            SuiteName::Fedosov => "fedosov",
            SuiteName::All => "all",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        std::iter::once(SuiteName::All)
            .chain(SuiteName::EACH)
            .find(|n| n.as_str() == s)
            .ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(HarnessError::Config(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub suite: SuiteName,
    /// Number of canonical pairs for the Weyl-algebra checks.
    pub d: usize,
    /// Polynomial-degree truncation of the Weyl algebra.
    pub cap: usize,
    /// Truncation order `M` of the fundamental class.
    pub order: u32,
    /// Coefficient window.
    pub window: Window,
    /// Random samples per identity.
    pub trials: usize,
    pub seed: u64,
    pub format: Format,
    /// Golden file for the fundamental-class table.
    #[serde(skip)]
    pub golden: Option<PathBuf>,
    /// Record wall-clock time per suite (makes reports nondeterministic).
    pub timing: bool,
}

/// Window for order `order` and `d` pairs: `t` from `-(2M+d+4)` upward.
pub fn derived_window(order: u32, d: usize) -> Window {
    let r = 2 * order as i32 + d as i32 + 4;
    Window { t_min: -r, t_max: r, u_min: -r, u_max: r }
}

/// Seed from `DQRR_SEED`, else [`DEFAULT_SEED`].
pub fn env_seed() -> Result<u64, HarnessError> {
    match std::env::var("DQRR_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| HarnessError::Config(format!("DQRR_SEED=`{s}` is not an integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

impl SuiteConfig {
    /// Defaults for a suite with the given seed.
    pub fn with_seed(suite: SuiteName, seed: u64) -> Self {
        let (d, order) = (1, 4);
        SuiteConfig {
            suite,
            d,
            cap: 4,
            order,
            window: derived_window(order, d),
            trials: 100,
            seed,
            format: Format::Json,
            golden: None,
            timing: false,
        }
    }

    /// Defaults with the seed taken from the environment.
    pub fn defaults(suite: SuiteName) -> Result<Self, HarnessError> {
        Ok(Self::with_seed(suite, env_seed()?))
    }

    /// Apply one `key=value` setting. Changing `d` or `order` re-derives the
    /// window; explicit window keys override it afterwards.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let bad = || HarnessError::Config(format!("invalid value `{value}` for `{key}`"));
        let int = |v: &str| v.parse::<i64>().map_err(|_| bad());
        match key {
            "suite" => self.suite = value.parse()?,
            "d" => {
                self.d = value.parse().map_err(|_| bad())?;
                self.window = derived_window(self.order, self.d);
            }
            "cap" => self.cap = value.parse().map_err(|_| bad())?,
            "order" | "M" => {
                self.order = value.parse().map_err(|_| bad())?;
                self.window = derived_window(self.order, self.d);
            }
            "trials" => self.trials = value.parse().map_err(|_| bad())?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            "format" => self.format = value.parse()?,
            "golden" => self.golden = Some(PathBuf::from(value)),
            "timing" => self.timing = value.parse().map_err(|_| bad())?,
            "t_min" => self.window.t_min = int(value)? as i32,
            "t_max" => self.window.t_max = int(value)? as i32,
            "u_min" => self.window.u_min = int(value)? as i32,
            "u_max" => self.window.u_max = int(value)? as i32,
            _ => return Err(HarnessError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Apply a plain `key=value` file; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<(), HarnessError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key=value", n + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let w = self.window;
        let need = -(self.order as i32) - self.d as i32;
        if w.t_min > w.t_max || w.u_min > w.u_max {
            return Err(HarnessError::Config("empty window".into()));
        }
        if w.t_min > need {
            return Err(HarnessError::Config(format!("t_min = {} must be at most -M-d = {need}", w.t_min)));
        }
        if w.u_min > need {
            return Err(HarnessError::Config(format!("u_min = {} must be at most -M-d = {need}", w.u_min)));
        }
        if self.d == 0 || self.d > 2 {
            return Err(HarnessError::Config(format!("d = {} outside 1..=2", self.d)));
        }
        if self.cap < 2 {
            return Err(HarnessError::Config(format!("cap = {} below 2", self.cap)));
        }
        if self.order == 0 || self.order > 8 {
            return Err(HarnessError::Config(format!("order = {} outside 1..=8", self.order)));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be positive".into()));
        }
        Ok(())
    }
}
