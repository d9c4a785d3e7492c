//! Pass/fail check lines shared by the CLI reproduction targets.

use std::fmt::Write as _;

/// One named numeric check.
#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub detail: String,
    pub pass: bool,
}

impl Check {
    /// |value - target| <= tolerance.
    pub fn close(label: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        let pass = (value - target).abs() <= tolerance;
        Self {
            label: label.into(),
            detail: format!("value={value:.6} target={target:.6} tol={tolerance:.1e}"),
            pass,
        }
    }

    /// value >= threshold.
    pub fn at_least(label: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            label: label.into(),
            detail: format!("value={value:.6} threshold={threshold:.6}"),
            pass: value >= threshold,
        }
    }

    /// An arbitrary predicate with a preformatted detail string.
    pub fn from_bool(label: impl Into<String>, detail: impl Into<String>, pass: bool) -> Self {
        Self {
            label: label.into(),
            detail: detail.into(),
            pass,
        }
    }
}

/// One line per check: `PASS/FAIL label: detail`.
pub fn render(checks: &[Check]) -> String {
    let mut out = String::new();
    for check in checks {
        let verdict = if check.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict} {}: {}", check.label, check.detail).expect("string write");
    }
    out
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
