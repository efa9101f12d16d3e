//! Law verdicts and replayable JSON reports.

use serde::{Deserialize, Serialize};

/// How a law's verdict participates in the overall suite outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictMode {
    /// Failures fail the suite.
    Scored,
    /// Failures are recorded as findings but never fail the suite; used for
    /// properties that are genuinely open for the model in question.
    ReportOnly,
    /// The law's premises cannot be stated in this model (for example the
    /// canonical morphism is not invertible); never a failure.
    NotApplicable,
}

/// Evidence attached to one failed (or reported) trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialWitness {
    /// Trial index within the run.
    pub trial: u32,
    /// The derived per-trial seed, sufficient to regenerate the instance.
    pub seed: u64,
    /// Rendering of the generated morphisms.
    pub instance: String,
    /// Rendering of the two sides of the equation that disagreed.
    pub lhs: String,
    pub rhs: String,
}

/// Aggregated outcome of checking one law against one model.
///
/// Serialized shape (stable, replay-comparable byte for byte):
/// `{"model": .., "law": .., "trials": .., "failures": .., "discarded": ..,
///   "seed": .., "witnesses": [..]}` with an optional `"depth"` for models
/// whose equality is depth-truncated and an optional `"mode"` marker for
/// report-only / not-applicable rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub model: String,
    pub law: String,
    pub trials: u32,
    pub failures: u32,
    /// Instances rejected before scoring (premise-false, generation dead
    /// ends); never counted as trials.
    pub discarded: u32,
    pub seed: u64,
    pub witnesses: Vec<TrialWitness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "is_scored", default = "default_mode")]
    pub mode: VerdictMode,
}

fn is_scored(mode: &VerdictMode) -> bool {
    *mode == VerdictMode::Scored
}

fn default_mode() -> VerdictMode {
    VerdictMode::Scored
}

impl LawReport {
    /// A law that cannot be stated for the model.
    pub fn not_applicable(model: &str, law: &str, seed: u64) -> Self {
        LawReport {
            model: model.to_string(),
            law: law.to_string(),
            trials: 0,
            failures: 0,
            discarded: 0,
            seed,
            witnesses: Vec::new(),
            depth: None,
            mode: VerdictMode::NotApplicable,
        }
    }

    /// Whether this report should fail a build: scored failures only.
    pub fn is_suite_failure(&self) -> bool {
        self.mode == VerdictMode::Scored && self.failures > 0
    }

    /// Premise acceptance below 5%: the verdict rests on too few live trials
    /// to mean much.  Flagged in the text rendering, never a failure.
    pub fn under_tested(&self) -> bool {
        if self.mode == VerdictMode::NotApplicable || self.trials == 0 {
            return false;
        }
        let live = self.trials.saturating_sub(self.discarded) as u64;
        live * 20 < self.trials as u64
    }

    /// Render one human-readable summary line.
    pub fn text_line(&self) -> String {
        let status = match self.mode {
            VerdictMode::NotApplicable => "not-applicable".to_string(),
            VerdictMode::ReportOnly if self.failures > 0 => {
                format!("report-only: {} finding(s) in {} trials", self.failures, self.trials)
            }
            VerdictMode::ReportOnly => format!("report-only: ok ({} trials)", self.trials),
            VerdictMode::Scored if self.failures > 0 => {
                format!("FAIL ({}/{} trials)", self.failures, self.trials)
            }
            VerdictMode::Scored => format!("ok ({} trials)", self.trials),
        };
        let depth = self
            .depth
            .map(|k| format!(" depth={k}"))
            .unwrap_or_default();
        let flag = if self.under_tested() {
            format!(
                " [under-tested: {} live of {} trials]",
                self.trials - self.discarded,
                self.trials
            )
        } else {
            String::new()
        };
        format!(
            "{:<9} {:<14}{} {} (discarded {}, seed {}){}",
            self.model, self.law, depth, status, self.discarded, self.seed, flag
        )
    }
}

/// Serialize a batch of reports as stable, pretty-printed JSON.
pub fn reports_to_json(reports: &[LawReport]) -> String {
    serde_json::to_string_pretty(reports).expect("law reports always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> LawReport {
        LawReport {
            model: "cpolift".into(),
            law: "fix".into(),
            trials: 3,
            failures: 1,
            discarded: 2,
            seed: 99,
            witnesses: vec![TrialWitness {
                trial: 1,
                seed: 1234,
                instance: "f = [..]".into(),
                lhs: "[0]".into(),
                rhs: "[1]".into(),
            }],
            depth: None,
            mode: VerdictMode::Scored,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let js = serde_json::to_string(&r).unwrap();
        let back: LawReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn serialization_is_deterministic() {
        assert_eq!(
            reports_to_json(&[sample()]),
            reports_to_json(&[sample()])
        );
    }

    #[test]
    fn scored_mode_is_omitted_from_json() {
        let js = serde_json::to_string(&sample()).unwrap();
        assert!(!js.contains("\"mode\""));
        let na = LawReport::not_applicable("cpolift", "d1", 7);
        let js = serde_json::to_string(&na).unwrap();
        assert!(js.contains("\"mode\""));
        assert!(js.contains("not-applicable"));
    }

    #[test]
    fn under_tested_flags_low_premise_acceptance() {
        let mut r = sample();
        r.trials = 100;
        r.discarded = 96;
        r.failures = 0;
        assert!(r.under_tested());
        assert!(r.text_line().contains("under-tested"));
        r.discarded = 80;
        assert!(!r.under_tested());
        let na = LawReport::not_applicable("citm", "d1", 0);
        assert!(!na.under_tested());
    }

    #[test]
    fn witnesses_present_only_with_failures() {
        let r = sample();
        assert!(r.failures as usize >= r.witnesses.len().min(1));
        assert!(r.is_suite_failure());
        let mut ok = sample();
        ok.failures = 0;
        ok.witnesses.clear();
        assert!(!ok.is_suite_failure());
    }
}
