//! Process-wide numerical tolerances.
//!
//! The record is read once, on first use. `HOMDIP_TOLERANCE` overrides the
//! validity tolerance (Hermiticity, trace and positivity checks).

use std::sync::OnceLock;

pub const TOLERANCE_ENV: &str = "HOMDIP_TOLERANCE";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Slack for Hermiticity, unit trace and eigenvalue positivity.
    pub validity: f64,
    /// Slack on the squared norm of a pure state.
    pub normalization: f64,
    /// Margin subtracted from the right-hand side before a strict verdict.
    pub verdict_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            validity: 1e-10,
            normalization: 1e-12,
            verdict_margin: 1e-12,
        }
    }
}

static GLOBAL: OnceLock<Tolerances> = OnceLock::new();

impl Tolerances {
    /// Defaults with the environment override applied. Unparseable or
    /// non-positive values are ignored.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Ok(raw) = std::env::var(TOLERANCE_ENV) {
            if let Ok(v) = raw.trim().parse::<f64>() {
                if v.is_finite() && v > 0.0 {
                    tol.validity = v;
                }
            }
        }
        tol
    }

    pub fn global() -> &'static Tolerances {
        GLOBAL.get_or_init(Self::from_env)
    }

    /// Installs `tol` as the global record. Fails (returning the record that
    /// is already in force) if anything has read the tolerances before.
    pub fn install(tol: Tolerances) -> Result<(), Tolerances> {
        GLOBAL.set(tol).map_err(|_| *Self::global())
    }
}
