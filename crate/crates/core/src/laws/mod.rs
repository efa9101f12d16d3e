//! The equational law harness.
//!
//! Every law is a *per-trial* check written once against
//! [`GuardedCategory`]: draw a random instance of the law's shape, build both
//! sides as explicit composites, and compare them with the model's morphism
//! equality.  [`run_law`] wraps such a check into a [`LawReport`] with
//! deterministic per-trial seeding, so a `(configuration, seed)` pair replays
//! byte-identically.
//!
//! Submodules group the laws the way the CLI exposes them:
//!
//! * [`conway`] — fixpoint identity, parameter naturality, rolling
//!   (composition), double dagger, uniformity.
//! * [`trace`] — vanishing (both forms), superposing, yanking, tightening,
//!   sliding, trace uniformity.
//! * [`dinat`] — dinaturality and its two guarded refinements.
//! * [`bekic`] — the pairing identity and the double-dagger replay through it.
//! * [`point`] — deriving the point from the dagger.
//! * [`derived`] — interdefinability of dagger and trace, fixpoint property
//!   of the trace, uniformity transfer.
//! * [`group_addition`] — a standalone counting argument for delay-free "daggers" on
//!   groups.
//! * [`search`] — targeted counterexample search with perturbed operators.
//! * [`suite`] — law/model registry and the suite runner.

pub mod bekic;
pub mod group_addition;
pub mod conway;
pub mod derived;
pub mod dinat;
pub mod point;
pub mod search;
pub mod suite;
pub mod trace;

use rand_chacha::ChaCha8Rng;

use crate::cat::{CatError, CatResult, GuardedCategory, ObjRole};
use crate::seeding::{mix, trial_rng};
use crate::verdict::{LawReport, TrialWitness, VerdictMode};

/// What a single trial of a law concluded.
#[derive(Debug, Clone)]
pub enum TrialOutcome {
    Pass,
    Fail {
        instance: String,
        lhs: String,
        rhs: String,
    },
    /// The drawn instance did not meet the law's premise (or generation gave
    /// up); the trial counts as discarded, not as evidence.
    Discard,
}

/// Stable 64-bit FNV-1a hash, used to derive per-law seeding tags.
pub fn fnv64(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Trial counts and seeding for one law run.
#[derive(Debug, Clone, Copy)]
pub struct RunParams {
    pub trials: u32,
    pub seed: u64,
    pub max_witnesses: usize,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            trials: 200,
            seed: 0,
            max_witnesses: 3,
        }
    }
}

/// Drive one law for `params.trials` trials and collect the report.
///
/// Each trial gets its own rng derived from `(seed, model/law tag, trial)`,
/// so runs are replayable and trials are independent of each other and of
/// execution order.  Generation shortfalls (`GenerationBudget`, `EmptyHom`)
/// count as discarded trials; any other error is a harness bug and panics.
pub fn run_law<F>(
    model: &str,
    law: &str,
    params: &RunParams,
    mode: VerdictMode,
    mut trial: F,
) -> LawReport
where
    F: FnMut(u32, &mut ChaCha8Rng) -> CatResult<TrialOutcome>,
{
    if mode == VerdictMode::NotApplicable {
        return LawReport::not_applicable(model, law, params.seed);
    }
    let tag = fnv64(&format!("{model}/{law}"));
    let mut failures = 0u32;
    let mut discarded = 0u32;
    let mut witnesses = Vec::new();
    for t in 0..params.trials {
        let mut rng = trial_rng(params.seed, tag, t as u64);
        match trial(t, &mut rng) {
            Ok(TrialOutcome::Pass) => {}
            Ok(TrialOutcome::Discard) => discarded += 1,
            Ok(TrialOutcome::Fail { instance, lhs, rhs }) => {
                failures += 1;
                if witnesses.len() < params.max_witnesses {
                    witnesses.push(TrialWitness {
                        trial: t,
                        seed: mix(&[params.seed, tag, t as u64]),
                        instance,
                        lhs,
                        rhs,
                    });
                }
            }
            Err(CatError::GenerationBudget(_)) | Err(CatError::EmptyHom { .. }) => {
                discarded += 1;
            }
            Err(e) => panic!("harness bug while checking {model}/{law}, trial {t}: {e}"),
        }
    }
    LawReport {
        model: model.to_string(),
        law: law.to_string(),
        trials: params.trials,
        failures,
        discarded,
        seed: params.seed,
        witnesses,
        depth: None,
        mode,
    }
}

/// Compare two composites and package the verdict.
pub(crate) fn verdict<M: GuardedCategory + ?Sized>(
    m: &M,
    lhs: &M::Mor,
    rhs: &M::Mor,
    instance: impl FnOnce() -> String,
) -> TrialOutcome {
    if m.mor_equal(lhs, rhs) {
        TrialOutcome::Pass
    } else {
        TrialOutcome::Fail {
            instance: instance(),
            lhs: m.describe_mor(lhs),
            rhs: m.describe_mor(rhs),
        }
    }
}

/// A random instance of the dagger shape `f : ▶X × Y → X`.
pub(crate) struct DaggerShape<M: GuardedCategory> {
    pub x: M::Obj,
    pub y: M::Obj,
    pub f: M::Mor,
}

pub(crate) fn gen_dagger_shape<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<DaggerShape<M>> {
    let x = m.random_obj(ObjRole::State, rng);
    let y = m.random_obj(ObjRole::Param, rng);
    let dom = m.product(&m.delay_obj(&x), &y);
    let f = m.random_mor(&dom, &x, rng)?;
    Ok(DaggerShape { x, y, f })
}

/// A random instance of the trace shape `f : ▶X × A → X × B`.
pub(crate) struct TraceShape<M: GuardedCategory> {
    pub x: M::Obj,
    pub a: M::Obj,
    pub b: M::Obj,
    pub f: M::Mor,
}

pub(crate) fn gen_trace_shape<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<TraceShape<M>> {
    let x = m.random_obj(ObjRole::State, rng);
    let a = m.random_obj(ObjRole::Param, rng);
    let b = m.random_obj(ObjRole::Param, rng);
    let dom = m.product(&m.delay_obj(&x), &a);
    let cod = m.product(&x, &b);
    let f = m.random_mor(&dom, &cod, rng)?;
    Ok(TraceShape { x, a, b, f })
}

/// Render a labelled instance description for witnesses.
pub(crate) fn describe_instance<M: GuardedCategory + ?Sized>(
    m: &M,
    objs: &[(&str, &M::Obj)],
    mors: &[(&str, &M::Mor)],
) -> String {
    let mut parts: Vec<String> = objs
        .iter()
        .map(|(n, o)| format!("{n}={}", m.describe_obj(o)))
        .collect();
    parts.extend(mors.iter().map(|(n, f)| format!("{n}={}", m.describe_mor(f))));
    parts.join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv64_is_stable_and_separating() {
        assert_eq!(fnv64(""), 0xcbf2_9ce4_8422_2325);
        assert_ne!(fnv64("cpolift/fix"), fnv64("cpolift/p"));
        assert_ne!(fnv64("cpolift/fix"), fnv64("presheaf/fix"));
    }

    #[test]
    fn run_law_counts_and_truncates_witnesses() {
        let params = RunParams {
            trials: 10,
            seed: 7,
            max_witnesses: 2,
        };
        let report = run_law("m", "l", &params, VerdictMode::Scored, |t, _rng| {
            Ok(if t % 2 == 0 {
                TrialOutcome::Fail {
                    instance: format!("i{t}"),
                    lhs: "a".into(),
                    rhs: "b".into(),
                }
            } else if t == 1 {
                TrialOutcome::Discard
            } else {
                TrialOutcome::Pass
            })
        });
        assert_eq!(report.failures, 5);
        assert_eq!(report.discarded, 1);
        assert_eq!(report.witnesses.len(), 2);
        assert!(report.is_suite_failure());
    }

    #[test]
    fn not_applicable_short_circuits() {
        let params = RunParams::default();
        let report = run_law("m", "l", &params, VerdictMode::NotApplicable, |_, _| {
            panic!("must not be called")
        });
        assert_eq!(report.trials, 0);
        assert!(!report.is_suite_failure());
    }

    #[test]
    fn per_trial_seeds_replay() {
        use rand::RngCore;
        let params = RunParams {
            trials: 4,
            seed: 99,
            max_witnesses: 3,
        };
        let mut draws_a = Vec::new();
        let _ = run_law("m", "l", &params, VerdictMode::Scored, |_, rng| {
            draws_a.push(rng.next_u64());
            Ok(TrialOutcome::Pass)
        });
        let mut draws_b = Vec::new();
        let _ = run_law("m", "l", &params, VerdictMode::Scored, |_, rng| {
            draws_b.push(rng.next_u64());
            Ok(TrialOutcome::Pass)
        });
        assert_eq!(draws_a, draws_b);
        assert_eq!(draws_a.len(), 4);
        assert_ne!(draws_a[0], draws_a[1]);
    }
}
