use core::fmt;

use crate::math::*;
use crate::{Error, Result};

/// Parameters shared by all experiments. Fields an experiment does not use
/// are ignored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub m: usize,
    pub n: usize,
    /// Noise standard deviation.
    pub sigma: f64,
    pub x_norm: f64,
    pub eps: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            m: 20,
            n: 5,
            sigma: 0.1,
            x_norm: 1.0,
            eps: 0.9,
            eps1: 0.2,
            eps2: 1.0,
            trials: 100_000,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub(crate) fn check_common(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1"));
        }
        if self.m == 0 {
            return Err(Error::InvalidConfig("m must be at least 1"));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::InvalidConfig("sigma must be finite and nonnegative"));
        }
        if !(self.x_norm >= 0.0) || !self.x_norm.is_finite() {
            return Err(Error::InvalidConfig("x_norm must be finite and nonnegative"));
        }
        Ok(())
    }

    pub(crate) fn check_positive_sigma(&self) -> Result<()> {
        if self.sigma > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidConfig("sigma must be positive"))
        }
    }

    pub(crate) fn check_complement(&self) -> Result<()> {
        if self.n < self.m {
            Ok(())
        } else {
            Err(Error::InvalidConfig("n must be smaller than m"))
        }
    }

    pub(crate) fn check_eps_pair(&self) -> Result<()> {
        if !(self.eps1 >= 0.0) || !(self.eps2 > 0.0) {
            return Err(Error::InvalidConfig("eps1 must be nonnegative and eps2 positive"));
        }
        Ok(())
    }
}

/// Empirical event frequency against a theoretical probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialSummary {
    pub events: u64,
    pub trials: u64,
    pub empirical_prob: f64,
    pub theory_prob: f64,
    /// `√(p(1−p)/trials)` at the theoretical `p`, floored at `1/trials`.
    pub stderr: f64,
    pub z_score: f64,
}

impl TrialSummary {
    pub fn new(events: u64, trials: u64, theory_prob: f64) -> Self {
        let t = trials as f64;
        let empirical_prob = events as f64 / t;
        let p = theory_prob.clamp(0.0, 1.0);
        let stderr = sqrt(p * (1.0 - p) / t).max(1.0 / t);
        TrialSummary {
            events,
            trials,
            empirical_prob,
            theory_prob,
            stderr,
            z_score: (empirical_prob - theory_prob) / stderr,
        }
    }

    /// The same counts judged against another theoretical value.
    pub fn against(&self, theory_prob: f64) -> Self {
        Self::new(self.events, self.trials, theory_prob)
    }
}

impl fmt::Display for TrialSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "empirical {:.6} ({}/{}) theory {:.6} stderr {:.3e} z {:+.3}",
            self.empirical_prob, self.events, self.trials, self.theory_prob, self.stderr, self.z_score
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        let s = TrialSummary::new(500, 1000, 0.5);
        assert_eq!(s.empirical_prob, 0.5);
        assert_eq!(s.z_score, 0.0);
        assert!((s.stderr - (0.25f64 / 1000.0).sqrt()).abs() < 1e-15);

        let s = TrialSummary::new(1000, 1000, 1.0);
        assert_eq!(s.stderr, 1e-3);
        assert_eq!(s.z_score, 0.0);
        let s = TrialSummary::new(990, 1000, 1.0);
        assert!((s.z_score + 10.0).abs() < 1e-9);
        assert!((s.against(0.99).z_score).abs() < 1e-9);
    }

    #[test]
    fn config_checks() {
        let mut c = ExperimentConfig::default();
        assert!(c.check_common().is_ok());
        c.trials = 0;
        assert!(c.check_common().is_err());
        c.trials = 1;
        c.n = c.m;
        assert!(c.check_complement().is_err());
        c.sigma = 0.0;
        assert!(c.check_positive_sigma().is_err());
    }
}
