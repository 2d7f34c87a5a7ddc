use gtoc12_core::{ValidationReport, Violation};
use serde::Serialize;

/// What both `gtoc12 validate --json` and `POST /validate` return.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateResponse {
    pub valid: bool,
    /// J, kg-equivalent.
    pub score: f64,
    pub ship_count: usize,
    pub max_ships_allowed: u32,
    pub violations: Vec<Violation>,
    /// One-line summary for humans and log readers.
    pub message: String,
}

impl ValidateResponse {
    pub fn from_report(report: &ValidationReport) -> Self {
        ValidateResponse {
            valid: report.valid,
            score: report.score.total_j,
            ship_count: report.score.ship_count,
            max_ships_allowed: report.score.max_ships_allowed,
            violations: report.violations.clone(),
            message: summary(report),
        }
    }
}

fn describe(v: &Violation) -> String {
    let mut where_ = String::new();
    if let Some(ship) = v.ship_id {
        where_.push_str(&format!(" ship {ship}"));
    }
    if let Some(line) = v.line {
        where_.push_str(&format!(" line {line}"));
    }
    format!("[{}]{}: {}", v.kind.as_str(), where_, v.message)
}

pub fn summary(report: &ValidationReport) -> String {
    if report.valid {
        return format!("VALID J={:.6}", report.score.total_j);
    }
    let n = report.violations.len();
    let first = report.violations.first().map(describe).unwrap_or_default();
    format!(
        "INVALID: {n} violation{}; first {first}",
        if n == 1 { "" } else { "s" }
    )
}

/// Multi-line text report for the terminal.
pub fn render_text(report: &ValidationReport) -> String {
    let mut out = String::new();
    for v in &report.violations {
        out.push_str(&describe(v));
        out.push('\n');
    }
    let s = &report.score;
    out.push_str(&format!(
        "ships {} (allowed {}), unloaded {:.6} kg per ship\n",
        s.ship_count,
        s.max_ships_allowed,
        s.average_mass + 0.0
    ));
    out.push_str(&summary(report));
    out.push('\n');
    out
}
