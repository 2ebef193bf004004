//! Process-wide numeric tolerances.

use std::sync::OnceLock;

/// Tolerances applied when validating Hermiticity, positivity and trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy {
    pub hermitian_tol: f64,
    pub psd_tol: f64,
    pub trace_tol: f64,
}

impl NumericPolicy {
    pub const DEFAULT: NumericPolicy = NumericPolicy {
        hermitian_tol: 1e-10,
        psd_tol: 1e-9,
        trace_tol: 1e-10,
    };

    /// The active policy. Falls back to [`NumericPolicy::DEFAULT`] until
    /// [`NumericPolicy::install`] is called.
    pub fn global() -> &'static NumericPolicy {
        GLOBAL.get_or_init(|| NumericPolicy::DEFAULT)
    }

    /// Installs a policy for the whole process. Returns `false` if a policy
    /// was already fixed (either installed or read).
    pub fn install(policy: NumericPolicy) -> bool {
        GLOBAL.set(policy).is_ok()
    }
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::DEFAULT
    }
}

static GLOBAL: OnceLock<NumericPolicy> = OnceLock::new();
