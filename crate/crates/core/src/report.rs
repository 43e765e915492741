//! Shared shape for invariant-check results.

use serde::Serialize;

/// Outcome of one named invariant over a batch of samples.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    /// Worst residual seen (for float checks) or the violation count
    /// (for exact checks).
    pub worst: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl InvariantCheck {
    /// Float-valued check: passes when the worst residual is within `tol`.
    pub fn residual(name: impl Into<String>, worst: f64, tol: f64) -> Self {
        Self { name: name.into(), worst, tol, pass: worst <= tol, detail: None }
    }

    /// Exact check: `violations` counts failing samples.
    pub fn exact(name: impl Into<String>, violations: usize) -> Self {
        Self {
            name: name.into(),
            worst: violations as f64,
            tol: 0.0,
            pass: violations == 0,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// True when every check in the batch passed.
pub fn all_pass(checks: &[InvariantCheck]) -> bool {
    checks.iter().all(|c| c.pass)
}
