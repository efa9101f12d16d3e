//! Dinaturality and its guarded refinements.
//!
//! Plain dinaturality (`d`) swaps the two halves of a composed loop body
//! where both halves are delayed.  The refinements `d1`/`d2` move exactly one
//! delay through a genuinely two-stage loop; expressing their composition
//! order requires `can⁻¹ : ▶Y × ▶A → ▶(Y × A)`, so they only make sense in
//! models whose delay preserves products.

use rand_chacha::ChaCha8Rng;

use crate::cat::{assoc_left, times, CatError, CatResult, GuardedCategory, ObjRole};

use super::{describe_instance, verdict, TrialOutcome};

/// `l ▷ k` for unguarded `k : W × A → U` and guarded `l : ▶U × A → V`:
/// delay all of `k`, then run `l`.
///
/// ```text
/// ▶W×A → ▶W×(▶A×A) → (▶W×▶A)×A → ▶(W×A)×A → ▶U×A → V
/// ```
pub fn guarded_after<M: GuardedCategory>(
    m: &M,
    w: &M::Obj,
    a: &M::Obj,
    k: &M::Mor,
    l: &M::Mor,
) -> CatResult<M::Mor> {
    let dw = m.delay_obj(w);
    let da = m.delay_obj(a);
    let ci = m
        .can_inverse(w, a)
        .ok_or(CatError::UnsupportedOracle("can⁻¹ unavailable in this model"))?;
    let feed = times(m, &m.id(&dw), &m.pair(&m.point(a), &m.id(a))?)?; // ▶W×A → ▶W×(▶A×A)
    let regroup = assoc_left(m, &dw, &da, a)?; // → (▶W×▶A)×A
    let merge = times(m, &ci, &m.id(a))?; // → ▶(W×A)×A
    let push = times(m, &m.delay_mor(k), &m.id(a))?; // → ▶U×A
    let mut acc = m.compose(&feed, &regroup)?;
    acc = m.compose(&acc, &merge)?;
    acc = m.compose(&acc, &push)?;
    m.compose(&acc, l)
}

/// `d`: dinaturality with both halves delayed.  For `f : ▶X × A → Y` and
/// `g : ▶Y × A → X`:
/// `(g ∘ ⟨p_Y ∘ f, π_r⟩)† = g ∘ ⟨p_Y ∘ h†, id⟩` where `h = f ∘ ⟨p_X ∘ g, π_r⟩`.
pub fn dinaturality<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let x = m.random_obj(ObjRole::State, rng);
    let y = m.random_obj(ObjRole::State, rng);
    let a = m.random_obj(ObjRole::Param, rng);
    let (dx, dy) = (m.delay_obj(&x), m.delay_obj(&y));
    let f = m.random_mor(&m.product(&dx, &a), &y, rng)?;
    let g = m.random_mor(&m.product(&dy, &a), &x, rng)?;
    let loop_x = m.pair(
        &m.compose(&f, &m.point(&y))?,
        &m.proj_right(&dx, &a),
    )?; // ▶X×A → ▶Y×A
    let lhs = m.dagger(&x, &a, &m.compose(&loop_x, &g)?)?;
    let loop_y = m.pair(
        &m.compose(&g, &m.point(&x))?,
        &m.proj_right(&dy, &a),
    )?; // ▶Y×A → ▶X×A
    let h = m.compose(&loop_y, &f)?; // ▶Y×A → Y
    let hd = m.dagger(&y, &a, &h)?; // A → Y
    let close = m.pair(&m.compose(&hd, &m.point(&y))?, &m.id(&a))?; // A → ▶Y×A
    let rhs = m.compose(&close, &g)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("X", &x), ("Y", &y), ("A", &a)], &[("f", &f), ("g", &g)])
    }))
}

/// `d1`: the guarded half runs first.  For guarded `f : ▶X × A → Y` and
/// unguarded `g : Y × A → X`:
/// `(g ∘ ⟨f, π_r⟩)† = g ∘ ⟨(f ▷ g)†, id⟩`.
pub fn dinaturality_one<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<TrialOutcome> {
    let x = m.random_obj(ObjRole::State, rng);
    let y = m.random_obj(ObjRole::State, rng);
    let a = m.random_obj(ObjRole::Param, rng);
    let dx = m.delay_obj(&x);
    let f = m.random_mor(&m.product(&dx, &a), &y, rng)?;
    let g = m.random_mor(&m.product(&y, &a), &x, rng)?;
    let graph = m.pair(&f, &m.proj_right(&dx, &a))?; // ▶X×A → Y×A
    let lhs = m.dagger(&x, &a, &m.compose(&graph, &g)?)?;
    let swapped = guarded_after(m, &y, &a, &g, &f)?; // ▶Y×A → Y
    let sd = m.dagger(&y, &a, &swapped)?; // A → Y
    let rhs = m.compose(&m.pair(&sd, &m.id(&a))?, &g)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("X", &x), ("Y", &y), ("A", &a)], &[("f", &f), ("g", &g)])
    }))
}

/// `d2`: the unguarded half runs first.  For unguarded `f : X × A → Y` and
/// guarded `g : ▶Y × A → X`:
/// `(g ▷ f)† = g ∘ ⟨p_Y ∘ h†, id⟩` where `h = f ∘ ⟨g, π_r⟩`.
pub fn dinaturality_two<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<TrialOutcome> {
    let x = m.random_obj(ObjRole::State, rng);
    let y = m.random_obj(ObjRole::State, rng);
    let a = m.random_obj(ObjRole::Param, rng);
    let dy = m.delay_obj(&y);
    let f = m.random_mor(&m.product(&x, &a), &y, rng)?;
    let g = m.random_mor(&m.product(&dy, &a), &x, rng)?;
    let swapped = guarded_after(m, &x, &a, &f, &g)?; // ▶X×A → X
    let lhs = m.dagger(&x, &a, &swapped)?;
    let graph = m.pair(&g, &m.proj_right(&dy, &a))?; // ▶Y×A → X×A
    let h = m.compose(&graph, &f)?; // ▶Y×A → Y
    let hd = m.dagger(&y, &a, &h)?;
    let close = m.pair(&m.compose(&hd, &m.point(&y))?, &m.id(&a))?; // A → ▶Y×A
    let rhs = m.compose(&close, &g)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("X", &x), ("Y", &y), ("A", &a)], &[("f", &f), ("g", &g)])
    }))
}
