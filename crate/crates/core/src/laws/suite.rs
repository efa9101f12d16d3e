//! Law registry, model registry, applicability policy, and the suite runner.
//!
//! A law's *verdict mode* on a model is decided here, from the model's
//! capability flags alone:
//!
//! * `d1`/`d2` need `can⁻¹`, so they are **not-applicable** wherever the
//!   delay fails to preserve products (standard lift, the term model).
//! * plain `d` is **scored** where the dagger is unique or the delay is
//!   product-preserving and well-pointed, and **report-only** on the standard
//!   lift (failures are findings, not suite failures).
//! * everything else is scored everywhere.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cat::{CatResult, GuardedCategory};
use crate::citm::{CitmModel, CitmSizes};
use crate::cms::{CmsModel, CmsSizes};
use crate::cpolift::{DelayMode, LiftModel, LiftSizes};
use crate::laws::{bekic, conway, derived, dinat, point, trace, run_law, RunParams, TrialOutcome};
use crate::poset::default_posets_up_to;
use crate::presheaf::{PresheafModel, PresheafSizes};
use crate::seeding::rng_from;
use crate::verdict::{LawReport, VerdictMode};

/// Every law the harness knows, in canonical (reporting) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawTag {
    Fix,
    P,
    C,
    Dd,
    U,
    V1,
    V2,
    S,
    Y,
    Lt,
    Rt,
    Sl,
    Tu,
    D,
    D1,
    D2,
    Bekic,
    BekicDd,
    Point,
    Fptr,
    Htr,
    UnifTransfer,
    RtDagger,
    RtTrace,
}

impl LawTag {
    pub const ALL: [LawTag; 24] = [
        LawTag::Fix,
        LawTag::P,
        LawTag::C,
        LawTag::Dd,
        LawTag::U,
        LawTag::V1,
        LawTag::V2,
        LawTag::S,
        LawTag::Y,
        LawTag::Lt,
        LawTag::Rt,
        LawTag::Sl,
        LawTag::Tu,
        LawTag::D,
        LawTag::D1,
        LawTag::D2,
        LawTag::Bekic,
        LawTag::BekicDd,
        LawTag::Point,
        LawTag::Fptr,
        LawTag::Htr,
        LawTag::UnifTransfer,
        LawTag::RtDagger,
        LawTag::RtTrace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawTag::Fix => "fix",
            LawTag::P => "p",
            LawTag::C => "c",
            LawTag::Dd => "dd",
            LawTag::U => "u",
            LawTag::V1 => "v1",
            LawTag::V2 => "v2",
            LawTag::S => "s",
            LawTag::Y => "y",
            LawTag::Lt => "lt",
            LawTag::Rt => "rt",
            LawTag::Sl => "sl",
            LawTag::Tu => "tu",
            LawTag::D => "d",
            LawTag::D1 => "d1",
            LawTag::D2 => "d2",
            LawTag::Bekic => "bekic",
            LawTag::BekicDd => "bekic-dd",
            LawTag::Point => "point",
            LawTag::Fptr => "fptr",
            LawTag::Htr => "htr",
            LawTag::UnifTransfer => "unif-transfer",
            LawTag::RtDagger => "rt-dagger",
            LawTag::RtTrace => "rt-trace",
        }
    }
}

/// Law groups accepted by the `--laws` selector.
pub fn group_members(name: &str) -> Option<Vec<LawTag>> {
    use LawTag::*;
    Some(match name {
        "conway" => vec![Fix, P, C, Dd, U],
        "trace" => vec![V1, V2, S, Y, Lt, Rt, Sl, Tu],
        "dinat" => vec![D, D1, D2],
        "derived" => vec![Bekic, BekicDd, Point, Fptr, Htr, UnifTransfer, RtDagger, RtTrace],
        "all" => LawTag::ALL.to_vec(),
        _ => return None,
    })
}

/// Parse a comma-separated list of law names and group names.
pub fn parse_laws(selector: &str) -> Result<Vec<LawTag>, String> {
    let mut picked = Vec::new();
    let mut push = |tag: LawTag| {
        if !picked.contains(&tag) {
            picked.push(tag);
        }
    };
    for token in selector.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        if let Some(group) = group_members(token) {
            group.into_iter().for_each(&mut push);
        } else if let Some(&tag) = LawTag::ALL.iter().find(|t| t.name() == token) {
            push(tag);
        } else {
            return Err(format!("unknown law or group `{token}`"));
        }
    }
    if picked.is_empty() {
        return Err("empty law selection".to_string());
    }
    // restore canonical order
    let mut out: Vec<LawTag> = LawTag::ALL
        .iter()
        .copied()
        .filter(|t| picked.contains(t))
        .collect();
    out.sort_by_key(|t| LawTag::ALL.iter().position(|u| u == t));
    Ok(out)
}

/// The four concrete models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Presheaf,
    CpoLift,
    Citm,
    Cms,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Presheaf,
        ModelKind::CpoLift,
        ModelKind::Citm,
        ModelKind::Cms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Presheaf => "presheaf",
            ModelKind::CpoLift => "cpolift",
            ModelKind::Citm => "citm",
            ModelKind::Cms => "cms",
        }
    }
}

/// Parse the `--model` selector (`all` or a comma-separated subset).
pub fn parse_models(selector: &str) -> Result<Vec<ModelKind>, String> {
    let mut out = Vec::new();
    for token in selector.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        if token == "all" {
            for k in ModelKind::ALL {
                if !out.contains(&k) {
                    out.push(k);
                }
            }
            continue;
        }
        let kind = ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == token)
            .ok_or_else(|| format!("unknown model `{token}`"))?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    if out.is_empty() {
        return Err("empty model selection".to_string());
    }
    Ok(out)
}

/// Size profile selected by `--sizes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SizeProfile {
    Small,
    #[default]
    Medium,
    Large,
}

impl SizeProfile {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "small" => Ok(SizeProfile::Small),
            "default" | "medium" => Ok(SizeProfile::Medium),
            "large" => Ok(SizeProfile::Large),
            _ => Err(format!("unknown size profile `{s}`")),
        }
    }

    pub fn lift(self) -> LiftSizes {
        match self {
            SizeProfile::Small => LiftSizes {
                max_state: 2,
                max_param: 2,
            },
            SizeProfile::Medium => LiftSizes::default(),
            SizeProfile::Large => LiftSizes {
                max_state: 4,
                max_param: 3,
            },
        }
    }

    pub fn presheaf(self) -> PresheafSizes {
        match self {
            SizeProfile::Small => PresheafSizes {
                max_world: 2,
                max_stage: 2,
            },
            SizeProfile::Medium => PresheafSizes {
                max_world: 3,
                max_stage: 2,
            },
            SizeProfile::Large => PresheafSizes {
                max_world: 4,
                max_stage: 3,
            },
        }
    }

    pub fn cms(self) -> CmsSizes {
        match self {
            SizeProfile::Small => CmsSizes {
                max_points: 2,
                max_exp: 2,
            },
            SizeProfile::Medium => CmsSizes {
                max_points: 3,
                max_exp: 3,
            },
            SizeProfile::Large => CmsSizes {
                max_points: 4,
                max_exp: 4,
            },
        }
    }

    pub fn citm(self) -> CitmSizes {
        match self {
            SizeProfile::Small => CitmSizes {
                max_obj: 3,
                max_ops: 2,
                max_arity: 2,
                max_height: 2,
            },
            SizeProfile::Medium => CitmSizes::default(),
            SizeProfile::Large => CitmSizes {
                max_obj: 5,
                max_ops: 3,
                max_arity: 3,
                max_height: 3,
            },
        }
    }
}

/// Everything a suite run needs besides the law/model selection.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub trials: u32,
    pub seed: u64,
    /// Truncation depth for term-model equality (`pass@depth`).
    pub depth: u32,
    pub sizes: SizeProfile,
    pub max_witnesses: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 200,
            seed: 0,
            depth: 8,
            sizes: SizeProfile::Medium,
            max_witnesses: 3,
        }
    }
}

impl SuiteConfig {
    fn params(&self) -> RunParams {
        RunParams {
            trials: self.trials,
            seed: self.seed,
            max_witnesses: self.max_witnesses,
        }
    }
}

/// Applicability of a law on a model, from capability flags only.
pub fn law_mode<M: GuardedCategory>(m: &M, law: LawTag) -> VerdictMode {
    let one = m.terminal();
    let can_inv = m.can_inverse(&one, &one).is_some();
    match law {
        LawTag::D1 => {
            if can_inv {
                VerdictMode::Scored
            } else {
                VerdictMode::NotApplicable
            }
        }
        LawTag::D2 => {
            if !can_inv {
                VerdictMode::NotApplicable
            } else if m.unique_dagger() {
                VerdictMode::Scored
            } else {
                // least-fixpoint operators with invertible can: open territory,
                // observe without scoring
                VerdictMode::ReportOnly
            }
        }
        LawTag::D => {
            if m.unique_dagger() || (m.preserves_products() && m.well_pointed()) {
                VerdictMode::Scored
            } else {
                VerdictMode::ReportOnly
            }
        }
        _ => VerdictMode::Scored,
    }
}

/// One trial of `law` on `m`.
pub fn law_trial<M: GuardedCategory>(
    m: &M,
    law: LawTag,
    rng: &mut ChaCha8Rng,
) -> CatResult<TrialOutcome> {
    match law {
        LawTag::Fix => conway::fix(m, rng),
        LawTag::P => conway::naturality(m, rng),
        LawTag::C => conway::rolling(m, rng),
        LawTag::Dd => conway::double_dagger(m, rng),
        LawTag::U => conway::uniformity(m, rng),
        LawTag::V1 => trace::vanishing_i(m, rng),
        LawTag::V2 => trace::vanishing_ii(m, rng),
        LawTag::S => trace::superposing(m, rng),
        LawTag::Y => trace::yanking(m, rng),
        LawTag::Lt => trace::tighten_left(m, rng),
        LawTag::Rt => trace::tighten_right(m, rng),
        LawTag::Sl => trace::sliding(m, rng),
        LawTag::Tu => trace::trace_uniformity(m, rng),
        LawTag::D => dinat::dinaturality(m, rng),
        LawTag::D1 => dinat::dinaturality_one(m, rng),
        LawTag::D2 => dinat::dinaturality_two(m, rng),
        LawTag::Bekic => bekic::bekic(m, rng),
        LawTag::BekicDd => bekic::bekic_double_dagger(m, rng),
        LawTag::Point => point::derive_point(m, rng),
        LawTag::Fptr => derived::fixpoint_property(m, rng),
        LawTag::Htr => derived::state_enlargement(m, rng),
        LawTag::UnifTransfer => derived::uniformity_transfer(m, rng),
        LawTag::RtDagger => derived::round_trip_dagger(m, rng),
        LawTag::RtTrace => derived::round_trip_trace(m, rng),
    }
}

fn run_generic<M, F>(cfg: &SuiteConfig, law: LawTag, mut mk: F) -> LawReport
where
    M: GuardedCategory,
    F: FnMut(&mut ChaCha8Rng) -> M,
{
    let probe = mk(&mut rng_from(0));
    let mode = law_mode(&probe, law);
    let label = probe.name();
    run_law(label, law.name(), &cfg.params(), mode, |_t, rng| {
        let m = mk(rng);
        law_trial(&m, law, rng)
    })
}

/// Run one law on one model.
pub fn run_model_law(kind: ModelKind, law: LawTag, cfg: &SuiteConfig) -> LawReport {
    match kind {
        ModelKind::CpoLift => {
            let m = LiftModel::new(DelayMode::Standard, cfg.sizes.lift());
            run_generic(cfg, law, move |_| m.clone())
        }
        ModelKind::Presheaf => {
            let sizes = cfg.sizes.presheaf();
            let worlds = default_posets_up_to(sizes.max_world);
            run_generic(cfg, law, move |rng| {
                let w = worlds[rng.gen_range(0..worlds.len())].clone();
                PresheafModel::new(w, sizes)
            })
        }
        ModelKind::Cms => {
            let m = CmsModel::new(cfg.sizes.cms());
            run_generic(cfg, law, move |_| m.clone())
        }
        ModelKind::Citm => {
            let sizes = cfg.sizes.citm();
            let depth = cfg.depth;
            let mut report = run_generic(cfg, law, move |rng| {
                CitmModel::with_random_signature(depth, &sizes, rng)
            });
            report.depth = Some(depth);
            report
        }
    }
}

/// Run the selected laws on the selected models, in deterministic order.
pub fn run_suite(models: &[ModelKind], laws: &[LawTag], cfg: &SuiteConfig) -> Vec<LawReport> {
    let mut out = Vec::with_capacity(models.len() * laws.len());
    for &kind in models {
        for &law in laws {
            out.push(run_model_law(kind, law, cfg));
        }
    }
    out
}

/// Number of scored failures across a suite result.
pub fn scored_failures(reports: &[LawReport]) -> u32 {
    reports
        .iter()
        .filter(|r| r.is_suite_failure())
        .map(|r| r.failures)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors_parse_names_and_groups() {
        assert_eq!(parse_laws("conway").unwrap().len(), 5);
        assert_eq!(
            parse_laws("fix,y").unwrap(),
            vec![LawTag::Fix, LawTag::Y]
        );
        // duplicates collapse, canonical order restored
        assert_eq!(
            parse_laws("y,fix,conway").unwrap()[..2],
            [LawTag::Fix, LawTag::P]
        );
        assert!(parse_laws("nope").is_err());
        assert!(parse_laws("").is_err());
        assert_eq!(parse_laws("all").unwrap().len(), LawTag::ALL.len());
    }

    #[test]
    fn model_selector_accepts_all() {
        assert_eq!(parse_models("all").unwrap(), ModelKind::ALL.to_vec());
        assert_eq!(
            parse_models("cms,presheaf").unwrap(),
            vec![ModelKind::Cms, ModelKind::Presheaf]
        );
        assert!(parse_models("octonions").is_err());
    }

    #[test]
    fn lift_dinaturality_policy() {
        let m = LiftModel::standard();
        assert_eq!(law_mode(&m, LawTag::D), VerdictMode::ReportOnly);
        assert_eq!(law_mode(&m, LawTag::D1), VerdictMode::NotApplicable);
        assert_eq!(law_mode(&m, LawTag::D2), VerdictMode::NotApplicable);
        assert_eq!(law_mode(&m, LawTag::Fix), VerdictMode::Scored);
        let id_mode = LiftModel::identity_delay();
        assert_eq!(law_mode(&id_mode, LawTag::D), VerdictMode::Scored);
        assert_eq!(law_mode(&id_mode, LawTag::D1), VerdictMode::Scored);
        assert_eq!(law_mode(&id_mode, LawTag::D2), VerdictMode::ReportOnly);
    }

    #[test]
    fn conway_suite_is_clean_on_the_lift_model() {
        let cfg = SuiteConfig {
            trials: 60,
            seed: 11,
            ..SuiteConfig::default()
        };
        for law in parse_laws("conway").unwrap() {
            let r = run_model_law(ModelKind::CpoLift, law, &cfg);
            assert_eq!(r.failures, 0, "law {} failed: {:?}", r.law, r.witnesses);
            assert!(r.discarded < r.trials, "law {} all-discarded", r.law);
        }
    }

    #[test]
    fn reports_replay_byte_identically() {
        let cfg = SuiteConfig {
            trials: 25,
            seed: 123,
            ..SuiteConfig::default()
        };
        let a = run_suite(&[ModelKind::CpoLift], &[LawTag::Fix, LawTag::Y], &cfg);
        let b = run_suite(&[ModelKind::CpoLift], &[LawTag::Fix, LawTag::Y], &cfg);
        assert_eq!(
            crate::verdict::reports_to_json(&a),
            crate::verdict::reports_to_json(&b)
        );
    }
}
