//! Resource caps and run settings. Precedence: command-line flag, then
//! `CHRONOSYNTH_CAP_*` environment variable, then the built-in default.

use chronosynth_core::continuous_synth::Caps;
use chronosynth_core::state_monoid::DEFAULT_SIGNATURE_CAP;

pub const ENV_SIGNATURES: &str = "CHRONOSYNTH_CAP_SIGNATURES";
pub const ENV_STRATEGIES: &str = "CHRONOSYNTH_CAP_STRATEGIES";
pub const ENV_ROUNDS: &str = "CHRONOSYNTH_CAP_ROUNDS";
pub const ENV_HORIZON: &str = "CHRONOSYNTH_CAP_HORIZON";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub signatures: usize,
    pub strategies: u64,
    /// Steps per simulated play.
    pub rounds: usize,
    /// Rounds of the scripted example play.
    pub horizon: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { signatures: DEFAULT_SIGNATURE_CAP, strategies: 1_000_000, rounds: 200, horizon: 20, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{name} must be a positive integer, got `{value}`")]
    NotPositive { name: String, value: String },
}

/// Overrides from the command line; `None` falls through to the environment.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub signatures: Option<u64>,
    pub strategies: Option<u64>,
    pub rounds: Option<u64>,
    pub horizon: Option<u64>,
    pub seed: Option<u64>,
}

fn pick(name: &str, flag: Option<u64>, env: &dyn Fn(&str) -> Option<String>, default: u64) -> Result<u64, ConfigError> {
    let bad = |value: String| ConfigError::NotPositive { name: name.to_string(), value };
    let v = match (flag, env(name)) {
        (Some(v), _) => v,
        (None, Some(text)) => text.trim().parse::<u64>().map_err(|_| bad(text.clone()))?,
        (None, None) => default,
    };
    if v == 0 {
        return Err(bad(v.to_string()));
    }
    Ok(v)
}

impl Config {
    pub fn resolve(o: &Overrides, env: &dyn Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let d = Config::default();
        Ok(Config {
            signatures: pick(ENV_SIGNATURES, o.signatures, env, d.signatures as u64)? as usize,
            strategies: pick(ENV_STRATEGIES, o.strategies, env, d.strategies)?,
            rounds: pick(ENV_ROUNDS, o.rounds, env, d.rounds as u64)? as usize,
            horizon: pick(ENV_HORIZON, o.horizon, env, d.horizon as u64)? as usize,
            seed: o.seed.unwrap_or(d.seed),
        })
    }

    pub fn from_env(o: &Overrides) -> Result<Self, ConfigError> {
        Self::resolve(o, &|k| std::env::var(k).ok())
    }

    pub fn caps(&self) -> Caps {
        Caps { signatures: self.signatures, strategies: self.strategies }
    }
}
