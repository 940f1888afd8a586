use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::scalar::Real;

/// Spontaneous-emission rate used when a run does not specify one
/// (2π × 5.7 × 10⁶, the Rb D₂ natural linewidth).
pub const DEFAULT_GAMMA_SP: f64 = 2.0 * std::f64::consts::PI * 5.7e6;

/// Names accepted by [`ModelParams::with_param`] and [`ModelParams::get`].
pub const PARAM_NAMES: [&str; 8] = [
    "omega_r",
    "omega",
    "j",
    "delta_rf",
    "delta_opt",
    "gamma_sp",
    "gamma_g",
    "q",
];

/// Physical parameters of one model instance, all rates in one angular unit.
///
/// `omega` (reduced Rabi frequency) and `omega_r` (optical Rabi frequency)
/// are tied by `omega = omega_r² / gamma_sp`; the constructors and
/// [`with_param`](Self::with_param) keep the pair consistent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams<T> {
    pub omega_r: T,
    pub omega: T,
    pub j: T,
    pub delta_rf: T,
    pub delta_opt: T,
    pub gamma_sp: T,
    pub gamma_g: T,
    pub q: T,
}

impl<T: Real> ModelParams<T> {
    /// Parameters given through the reduced Rabi frequency; `omega_r` is derived.
    pub fn from_reduced(omega: T, j: T, delta_rf: T, gamma_sp: T) -> Self {
        Self {
            omega_r: (omega * gamma_sp).sqrt(),
            omega,
            j,
            delta_rf,
            delta_opt: T::zero(),
            gamma_sp,
            gamma_g: T::zero(),
            q: T::zero(),
        }
    }

    /// Parameters given through the optical Rabi frequency; `omega` is derived.
    pub fn from_optical(omega_r: T, j: T, delta_rf: T, gamma_sp: T) -> Self {
        Self {
            omega_r,
            omega: omega_r * omega_r / gamma_sp,
            j,
            delta_rf,
            delta_opt: T::zero(),
            gamma_sp,
            gamma_g: T::zero(),
            q: T::zero(),
        }
    }

    /// Reduced-frequency parameters with the default spontaneous rate.
    pub fn tuned(omega: T, j: T) -> Self {
        Self::from_reduced(omega, j, T::zero(), T::of(DEFAULT_GAMMA_SP))
    }

    pub fn with_q(mut self, q: T) -> Self {
        self.q = q;
        self
    }

    pub fn with_gamma_g(mut self, gamma_g: T) -> Self {
        self.gamma_g = gamma_g;
        self
    }

    pub fn with_delta_opt(mut self, delta_opt: T) -> Self {
        self.delta_opt = delta_opt;
        self
    }

    pub fn with_delta_rf(mut self, delta_rf: T) -> Self {
        self.delta_rf = delta_rf;
        self
    }

    pub fn get(&self, name: &str) -> Result<T, ModelError> {
        Ok(match name {
            "omega_r" => self.omega_r,
            "omega" => self.omega,
            "j" => self.j,
            "delta_rf" => self.delta_rf,
            "delta_opt" => self.delta_opt,
            "gamma_sp" => self.gamma_sp,
            "gamma_g" => self.gamma_g,
            "q" => self.q,
            _ => return Err(ModelError::UnknownParam(name.to_string())),
        })
    }

    /// Copy with one named parameter replaced. Changing `omega` or `omega_r`
    /// re-derives the other; changing `gamma_sp` keeps `omega` fixed.
    pub fn with_param(&self, name: &str, value: T) -> Result<Self, ModelError> {
        let mut p = *self;
        match name {
            "omega_r" => {
                p.omega_r = value;
                p.omega = value * value / p.gamma_sp;
            }
            "omega" => {
                p.omega = value;
                p.omega_r = (value * p.gamma_sp).sqrt();
            }
            "gamma_sp" => {
                p.gamma_sp = value;
                p.omega_r = (p.omega * value).sqrt();
            }
            "j" => p.j = value,
            "delta_rf" => p.delta_rf = value,
            "delta_opt" => p.delta_opt = value,
            "gamma_g" => p.gamma_g = value,
            "q" => p.q = value,
            _ => return Err(ModelError::UnknownParam(name.to_string())),
        }
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let fields = [
            ("omega_r", self.omega_r),
            ("omega", self.omega),
            ("j", self.j),
            ("delta_rf", self.delta_rf),
            ("delta_opt", self.delta_opt),
            ("gamma_sp", self.gamma_sp),
            ("gamma_g", self.gamma_g),
            ("q", self.q),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(invalid(name, v, "must be finite"));
            }
        }
        if self.gamma_sp <= T::zero() {
            return Err(invalid("gamma_sp", self.gamma_sp, "must be positive"));
        }
        if self.gamma_g < T::zero() {
            return Err(invalid("gamma_g", self.gamma_g, "must be non-negative"));
        }
        if self.j < T::zero() {
            return Err(invalid("j", self.j, "must be non-negative"));
        }
        if self.omega < T::zero() {
            return Err(invalid("omega", self.omega, "must be non-negative"));
        }
        if self.q < T::zero() || self.q > T::one() {
            return Err(invalid("q", self.q, "must lie in [0, 1]"));
        }
        let lhs = self.omega * self.gamma_sp;
        let rhs = self.omega_r * self.omega_r;
        if (lhs - rhs).abs() > T::of(1e-10) * lhs.abs().max(rhs.abs()) {
            return Err(invalid(
                "omega",
                self.omega,
                "must equal omega_r^2 / gamma_sp",
            ));
        }
        Ok(())
    }

    pub fn cast<U: Real>(&self) -> ModelParams<U> {
        let c = |x: T| U::of(x.to_f64());
        ModelParams {
            omega_r: c(self.omega_r),
            omega: c(self.omega),
            j: c(self.j),
            delta_rf: c(self.delta_rf),
            delta_opt: c(self.delta_opt),
            gamma_sp: c(self.gamma_sp),
            gamma_g: c(self.gamma_g),
            q: c(self.q),
        }
    }
}

fn invalid<T: Real>(name: &'static str, value: T, reason: &'static str) -> ModelError {
    ModelError::InvalidParam {
        name,
        value: value.to_f64(),
        reason,
    }
}
