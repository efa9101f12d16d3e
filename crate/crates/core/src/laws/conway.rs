//! The Conway group: fixpoint identity, parameter naturality, rolling,
//! double dagger, and uniformity.

use rand_chacha::ChaCha8Rng;

use crate::cat::{fixpoint_rhs, times, CatResult, GuardedCategory, ObjRole};

use super::{describe_instance, gen_dagger_shape, verdict, TrialOutcome};

/// `fix`: the dagger actually solves its square,
/// `f† = f ∘ (p_X × Y) ∘ ⟨f†, id⟩`.
pub fn fix<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let s = gen_dagger_shape(m, rng)?;
    let d = m.dagger(&s.x, &s.y, &s.f)?;
    let rhs = fixpoint_rhs(m, &s.x, &s.y, &s.f, &d)?;
    Ok(verdict(m, &d, &rhs, || {
        describe_instance(m, &[("X", &s.x), ("Y", &s.y)], &[("f", &s.f)])
    }))
}

/// `p`: naturality in the parameter,
/// `f† ∘ h = (f ∘ (▶X × h))†` for `h : Y' → Y`.
pub fn naturality<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let s = gen_dagger_shape(m, rng)?;
    let y_prime = m.random_obj(ObjRole::Param, rng);
    let h = m.random_mor(&y_prime, &s.y, rng)?;
    let d = m.dagger(&s.x, &s.y, &s.f)?;
    let lhs = m.compose(&h, &d)?;
    let dx = m.delay_obj(&s.x);
    let reparam = times(m, &m.id(&dx), &h)?; // ▶X×Y' → ▶X×Y
    let rhs = m.dagger(&s.x, &y_prime, &m.compose(&reparam, &s.f)?)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(
            m,
            &[("X", &s.x), ("Y", &s.y), ("Y'", &y_prime)],
            &[("f", &s.f), ("h", &h)],
        )
    }))
}

/// `c`: rolling / composition.  For `f : ▶X × Y → Z` and `g : Z → X`,
/// `(g ∘ f)† = g ∘ (f ∘ (▶g × Y))†`.
pub fn rolling<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let x = m.random_obj(ObjRole::State, rng);
    let z = m.random_obj(ObjRole::State, rng);
    let y = m.random_obj(ObjRole::Param, rng);
    let dx = m.delay_obj(&x);
    let f = m.random_mor(&m.product(&dx, &y), &z, rng)?;
    let g = m.random_mor(&z, &x, rng)?;
    let lhs = m.dagger(&x, &y, &m.compose(&f, &g)?)?;
    let roll = times(m, &m.delay_mor(&g), &m.id(&y))?; // ▶Z×Y → ▶X×Y
    let rolled = m.dagger(&z, &y, &m.compose(&roll, &f)?)?;
    let rhs = m.compose(&rolled, &g)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("X", &x), ("Z", &z), ("Y", &y)], &[("f", &f), ("g", &g)])
    }))
}

/// `dd`: double dagger.  For `f : ▶X × (▶X × Y) → X`,
/// `(f†)† = (f ∘ ⟨π_ℓ, id⟩)†`.
pub fn double_dagger<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let x = m.random_obj(ObjRole::State, rng);
    let y = m.random_obj(ObjRole::Param, rng);
    let dx = m.delay_obj(&x);
    let dxy = m.product(&dx, &y);
    let f = m.random_mor(&m.product(&dx, &dxy), &x, rng)?;
    let inner = m.dagger(&x, &dxy, &f)?; // ▶X×Y → X
    let lhs = m.dagger(&x, &y, &inner)?;
    let contract = m.pair(&m.proj_left(&dx, &y), &m.id(&dxy))?; // ▶X×Y → ▶X×(▶X×Y)
    let rhs = m.dagger(&x, &y, &m.compose(&contract, &f)?)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("X", &x), ("Y", &y)], &[("f", &f)])
    }))
}

/// `u`: uniformity.  For a premise-valid triple
/// `h ∘ f = g ∘ (▶h × Y)` the conclusion is `h ∘ f† = g†`.
pub fn uniformity<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let Some(inst) = m.uniformity_dagger_instance(rng) else {
        return Ok(TrialOutcome::Discard);
    };
    // Re-verify the premise before scoring; a generator bug must surface as a
    // discarded trial, never as a spurious law failure.
    let lhs_premise = m.compose(&inst.f, &inst.h)?;
    let dh = m.delay_mor(&inst.h);
    let step = times(m, &dh, &m.id(&inst.y))?;
    let rhs_premise = m.compose(&step, &inst.g)?;
    if !m.mor_equal(&lhs_premise, &rhs_premise) {
        return Ok(TrialOutcome::Discard);
    }
    let df = m.dagger(&inst.x, &inst.y, &inst.f)?;
    let lhs = m.compose(&df, &inst.h)?;
    let rhs = m.dagger(&inst.x_prime, &inst.y, &inst.g)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(
            m,
            &[("X", &inst.x), ("X'", &inst.x_prime), ("Y", &inst.y)],
            &[("f", &inst.f), ("g", &inst.g), ("h", &inst.h)],
        )
    }))
}
