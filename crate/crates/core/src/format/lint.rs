use std::fmt;

use serde::Serialize;

use super::BURN_EVENT_ID;
use crate::catalog::Epoch;

/// Fewer significant digits than this in a position or velocity component
/// draws a precision warning.
const MIN_DIGITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LintKind {
    Spacing,
    LowPrecision,
    OutsideWindow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LintWarning {
    pub line: usize,
    pub kind: LintKind,
    pub message: String,
}

impl fmt::Display for LintWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

fn significant_digits(token: &str) -> usize {
    let mantissa = token
        .trim_start_matches(['+', '-'])
        .split(['e', 'E'])
        .next()
        .unwrap_or("");
    mantissa
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|&c| c == '0')
        .count()
}

/// Non-fatal hygiene checks. Never fails; lines the parser would reject
/// are skipped where a check cannot interpret them.
pub fn lint_solution(text: &str) -> Vec<LintWarning> {
    let mut warnings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        if raw.contains('\t') || raw.contains("  ") || raw.starts_with(' ') || raw.ends_with(' ') {
            warnings.push(LintWarning {
                line,
                kind: LintKind::Spacing,
                message: "numbers should be separated by single spaces".into(),
            });
        }
        let tokens: Vec<&str> = raw.split_ascii_whitespace().collect();
        let Some(event) = tokens.get(1).and_then(|t| t.parse::<i64>().ok()) else {
            continue;
        };
        if let Some(t) = tokens.get(2).and_then(|t| t.parse::<f64>().ok()) {
            if !Epoch::from_mjd(t).in_mission_window() {
                warnings.push(LintWarning {
                    line,
                    kind: LintKind::OutsideWindow,
                    message: format!("epoch {t} MJD is outside the mission window"),
                });
            }
        }
        if event != i64::from(BURN_EVENT_ID) && tokens.len() >= 9 {
            let coarse = tokens[3..9]
                .iter()
                .filter(|t| t.parse::<f64>().is_ok_and(|v| v != 0.0))
                .map(|t| significant_digits(t))
                .min();
            if let Some(digits) = coarse.filter(|&d| d < MIN_DIGITS) {
                warnings.push(LintWarning {
                    line,
                    kind: LintKind::LowPrecision,
                    message: format!(
                        "state written with {digits} significant digits; at least {MIN_DIGITS} recommended"
                    ),
                });
            }
        }
    }
    warnings
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_digits() {
        assert_eq!(significant_digits("1.234560e+08"), 7);
        assert_eq!(significant_digits("-0.000123"), 3);
        assert_eq!(significant_digits("149597870.7"), 10);
        assert_eq!(significant_digits("6.43280000000000e4"), 15);
    }

    #[test]
    fn low_precision_positions() {
        let text = "1 0 64400 1.23456e8 2.0e7 1.0e3 -4.1 29.0 0.001 2000\n";
        let w = lint_solution(text);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].kind, LintKind::LowPrecision);
    }

    #[test]
    fn early_epoch_and_spacing() {
        let text = "1 0  64000 1.23456789012e8 2.00000000001e7 1.00000000001e3 -4.10000000001 29.0000000001 1.00000000001e-3 2000\n";
        let kinds: Vec<LintKind> = lint_solution(text).iter().map(|w| w.kind).collect();
        assert_eq!(kinds, vec![LintKind::Spacing, LintKind::OutsideWindow]);
    }

    #[test]
    fn burn_lines_are_not_precision_checked() {
        assert!(lint_solution("1 -1 64401 0 0 0\n1 -1 64401 0.1 0.2 0\n").is_empty());
    }
}
