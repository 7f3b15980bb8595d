use serde::Serialize;

/// Outcome of one named check, rendered as a row of the JSON analysis report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub claim: String,
    pub pass: bool,
    pub residual_or_oscillation: f64,
    pub window: Option<usize>,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    /// Passes iff `residual <= tol`.
    pub fn bound(claim: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            claim: claim.into(),
            pass: residual <= tol,
            residual_or_oscillation: residual,
            window: None,
            tol,
            note: None,
        }
    }

    /// Passes iff `value > threshold`; the threshold is stored as `tol`.
    pub fn exceeds(claim: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            pass: value > threshold,
            ..Self::bound(claim, value, threshold)
        }
        .with_note("needs value > tol")
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// One line: `PASS claim residual=... tol=...`.
    pub fn line(&self) -> String {
        format!(
            "{} {} residual={:.3e} tol={:.3e}{}{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.claim,
            self.residual_or_oscillation,
            self.tol,
            self.window.map(|w| format!(" window={w}")).unwrap_or_default(),
            self.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default(),
        )
    }
}
