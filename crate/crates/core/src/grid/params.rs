use serde::{Deserialize, Serialize};

use super::{DomainKind, GridError};

/// Model coefficients of
/// `i u_t + (1/2) Lap u = V u + lambda |u|^{2 sigma1} u - i a |u|^{2 sigma2} u - i b u / (|u|^2 + delta)^{alpha/2}`.
///
/// `b = 0` is accepted as the Hamiltonian/undamped limit used by sanity and
/// control runs; every other constraint follows the model assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub alpha: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "default_k_energy")]
    pub k_energy: f64,
}

fn default_k_energy() -> f64 {
    0.1
}

impl Default for Params {
    fn default() -> Self {
        Self {
            lambda: 0.0,
            a: 0.0,
            b: 1.0,
            sigma1: 1.0,
            sigma2: 1.0,
            alpha: 1.0,
            delta: 0.0,
            k_energy: default_k_energy(),
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<(), GridError> {
        let bad = |msg: String| Err(GridError::Params(msg));
        let all = [
            self.lambda,
            self.a,
            self.b,
            self.sigma1,
            self.sigma2,
            self.alpha,
            self.delta,
            self.k_energy,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return bad("non-finite coefficient".into());
        }
        if self.a < 0.0 {
            return bad(format!("a = {} must be >= 0", self.a));
        }
        if self.b < 0.0 {
            return bad(format!("b = {} must be >= 0", self.b));
        }
        if self.sigma1 <= 0.0 || self.sigma2 <= 0.0 {
            return bad(format!(
                "sigma1 = {}, sigma2 = {} must be > 0",
                self.sigma1, self.sigma2
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha = {} outside [0, 1]", self.alpha));
        }
        if self.delta < 0.0 {
            return bad(format!("delta = {} must be >= 0", self.delta));
        }
        if self.k_energy <= 0.0 {
            return bad(format!("k = {} must be > 0", self.k_energy));
        }
        Ok(())
    }

    /// Validation plus the restriction `alpha <= 1/2` on the confined plane.
    pub fn validate_for(&self, kind: DomainKind) -> Result<(), GridError> {
        self.validate()?;
        if kind == DomainKind::ConfinedR2 && self.alpha > 0.5 {
            return Err(GridError::Params(format!(
                "alpha = {} must be <= 1/2 on the confined plane",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Whether `k` lies in the window `0 < k < 2a / (sigma2 (sigma2 + 1))`
    /// that bounds the augmented energy in the focusing case.
    pub fn ek_admissible(&self) -> bool {
        if self.lambda >= 0.0 {
            return self.k_energy > 0.0;
        }
        self.a > 0.0
            && self.sigma2 > self.sigma1
            && self.k_energy > 0.0
            && self.k_energy < 2.0 * self.a / (self.sigma2 * (self.sigma2 + 1.0))
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), GridError> {
        let slot = match name {
            "lambda" => &mut self.lambda,
            "a" => &mut self.a,
            "b" => &mut self.b,
            "sigma1" => &mut self.sigma1,
            "sigma2" => &mut self.sigma2,
            "alpha" => &mut self.alpha,
            "delta" => &mut self.delta,
            "k_energy" | "k" => &mut self.k_energy,
            other => return Err(GridError::Params(format!("unknown parameter `{other}`"))),
        };
        *slot = value;
        Ok(())
    }
}
