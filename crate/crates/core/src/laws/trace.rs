//! The guarded trace axioms, checked against the dagger-derived trace.
//!
//! For `f : ▶X × A → X × B` the trace is `Tr^X_{A,B}(f) : A → B`.  Product
//! nesting is to the right throughout, so vanishing-II and the `X × Y` trace
//! insert explicit reassociations.

use rand_chacha::ChaCha8Rng;

use crate::cat::{
    assoc_left, assoc_right, canonical, times, CatResult, GuardedCategory, ObjRole,
};

use super::{describe_instance, gen_trace_shape, verdict, TrialOutcome};

/// `v1`: vanishing over the terminal state.  For `f : ▶1 × A → 1 × B`,
/// `Tr^1(f) = π_r ∘ f ∘ ⟨p_1 ∘ !_A, id⟩`.
pub fn vanishing_i<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let one = m.terminal();
    let a = m.random_obj(ObjRole::Param, rng);
    let b = m.random_obj(ObjRole::Param, rng);
    let dom = m.product(&m.delay_obj(&one), &a);
    let cod = m.product(&one, &b);
    let f = m.random_mor(&dom, &cod, rng)?;
    let lhs = m.trace(&one, &a, &b, &f)?;
    let feed = m.pair(&m.compose(&m.bang(&a), &m.point(&one))?, &m.id(&a))?; // A → ▶1×A
    let rhs = m.compose(&m.compose(&feed, &f)?, &m.proj_right(&one, &b))?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("A", &a), ("B", &b)], &[("f", &f)])
    }))
}

/// `v2`: vanishing-II.  Tracing out `X` and then `Y` agrees with tracing out
/// `X × Y` at once (through `can` and the reassociations).
pub fn vanishing_ii<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let x = m.random_obj(ObjRole::State, rng);
    let y = m.random_obj(ObjRole::State, rng);
    let a = m.random_obj(ObjRole::Param, rng);
    let b = m.random_obj(ObjRole::Param, rng);
    let (dx, dy) = (m.delay_obj(&x), m.delay_obj(&y));
    let dom = m.product(&dx, &m.product(&dy, &a)); // ▶X×(▶Y×A)
    let cod = m.product(&x, &m.product(&y, &b)); // X×(Y×B)
    let f = m.random_mor(&dom, &cod, rng)?;
    // one state at a time
    let inner = m.trace(&x, &m.product(&dy, &a), &m.product(&y, &b), &f)?; // ▶Y×A → Y×B
    let lhs = m.trace(&y, &a, &b, &inner)?;
    // both states at once
    let xy = m.product(&x, &y);
    let spread = m.compose(
        &times(m, &canonical(m, &x, &y)?, &m.id(&a))?, // ▶(X×Y)×A → (▶X×▶Y)×A
        &assoc_right(m, &dx, &dy, &a)?,                // → ▶X×(▶Y×A)
    )?;
    let regroup = assoc_left(m, &x, &y, &b)?; // X×(Y×B) → (X×Y)×B
    let joint = m.compose(&m.compose(&spread, &f)?, &regroup)?;
    let rhs = m.trace(&xy, &a, &b, &joint)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(
            m,
            &[("X", &x), ("Y", &y), ("A", &a), ("B", &b)],
            &[("f", &f)],
        )
    }))
}

/// `s`: superposing.  Carrying a passive context `C` through the trace:
/// for `g(u,(c,a)) = (x',(c,b'))` with `(x',b') = f(u,a)`,
/// `Tr^X(g) = id_C × Tr^X(f)`.
pub fn superposing<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let t = gen_trace_shape(m, rng)?;
    let c = m.random_obj(ObjRole::Param, rng);
    let dx = m.delay_obj(&t.x);
    let ca = m.product(&c, &t.a);
    let u = m.proj_left(&dx, &ca);
    let tail = m.proj_right(&dx, &ca);
    let c_part = m.compose(&tail, &m.proj_left(&c, &t.a))?;
    let a_part = m.compose(&tail, &m.proj_right(&c, &t.a))?;
    let fa = m.compose(&m.pair(&u, &a_part)?, &t.f)?; // dom → X×B
    let g = m.pair(
        &m.compose(&fa, &m.proj_left(&t.x, &t.b))?,
        &m.pair(&c_part, &m.compose(&fa, &m.proj_right(&t.x, &t.b))?)?,
    )?; // dom → X×(C×B)
    let lhs = m.trace(&t.x, &ca, &m.product(&c, &t.b), &g)?;
    let rhs = times(m, &m.id(&c), &m.trace(&t.x, &t.a, &t.b, &t.f)?)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(
            m,
            &[("X", &t.x), ("A", &t.a), ("B", &t.b), ("C", &c)],
            &[("f", &t.f)],
        )
    }))
}

/// `y`: yanking.  Tracing the symmetry `▶X × X → X × ▶X` yields the point:
/// `Tr^X(⟨π_r, π_ℓ⟩) = p_X`.
pub fn yanking<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let x = m.random_obj(ObjRole::State, rng);
    let dx = m.delay_obj(&x);
    let c = m.pair(&m.proj_right(&dx, &x), &m.proj_left(&dx, &x))?; // ▶X×X → X×▶X
    let lhs = m.trace(&x, &x, &dx, &c)?;
    let rhs = m.point(&x);
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("X", &x)], &[])
    }))
}

/// `lt`: left tightening.  `Tr^X(f ∘ (▶X × g)) = Tr^X(f) ∘ g` for
/// `g : A' → A`.
pub fn tighten_left<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let t = gen_trace_shape(m, rng)?;
    let a_prime = m.random_obj(ObjRole::Param, rng);
    let g = m.random_mor(&a_prime, &t.a, rng)?;
    let dx = m.delay_obj(&t.x);
    let pre = times(m, &m.id(&dx), &g)?; // ▶X×A' → ▶X×A
    let lhs = m.trace(&t.x, &a_prime, &t.b, &m.compose(&pre, &t.f)?)?;
    let rhs = m.compose(&g, &m.trace(&t.x, &t.a, &t.b, &t.f)?)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(
            m,
            &[("X", &t.x), ("A", &t.a), ("A'", &a_prime), ("B", &t.b)],
            &[("f", &t.f), ("g", &g)],
        )
    }))
}

/// `rt`: right tightening.  `Tr^X((X × g) ∘ f) = g ∘ Tr^X(f)` for
/// `g : B → B'`.
pub fn tighten_right<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let t = gen_trace_shape(m, rng)?;
    let b_prime = m.random_obj(ObjRole::Param, rng);
    let g = m.random_mor(&t.b, &b_prime, rng)?;
    let post = times(m, &m.id(&t.x), &g)?; // X×B → X×B'
    let lhs = m.trace(&t.x, &t.a, &b_prime, &m.compose(&t.f, &post)?)?;
    let rhs = m.compose(&m.trace(&t.x, &t.a, &t.b, &t.f)?, &g)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(
            m,
            &[("X", &t.x), ("A", &t.a), ("B", &t.b), ("B'", &b_prime)],
            &[("f", &t.f), ("g", &g)],
        )
    }))
}

/// `sl`: sliding.  For `f : ▶X × A → X' × B` and `g : X' → X`,
/// `Tr^X((g × B) ∘ f) = Tr^{X'}(f ∘ (▶g × A))`.
pub fn sliding<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let x = m.random_obj(ObjRole::State, rng);
    let x_prime = m.random_obj(ObjRole::State, rng);
    let a = m.random_obj(ObjRole::Param, rng);
    let b = m.random_obj(ObjRole::Param, rng);
    let dx = m.delay_obj(&x);
    let f = m.random_mor(&m.product(&dx, &a), &m.product(&x_prime, &b), rng)?;
    let g = m.random_mor(&x_prime, &x, rng)?;
    let close = times(m, &g, &m.id(&b))?; // X'×B → X×B
    let lhs = m.trace(&x, &a, &b, &m.compose(&f, &close)?)?;
    let open = times(m, &m.delay_mor(&g), &m.id(&a))?; // ▶X'×A → ▶X×A
    let rhs = m.trace(&x_prime, &a, &b, &m.compose(&open, &f)?)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(
            m,
            &[("X", &x), ("X'", &x_prime), ("A", &a), ("B", &b)],
            &[("f", &f), ("g", &g)],
        )
    }))
}

/// `tu`: trace uniformity.  For a premise-valid square
/// `(h × B) ∘ f = f' ∘ (▶h × A)` the traces agree: `Tr(f) = Tr(f')`.
pub fn trace_uniformity<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<TrialOutcome> {
    let Some(inst) = m.uniformity_trace_instance(rng) else {
        return Ok(TrialOutcome::Discard);
    };
    let close = times(m, &inst.h, &m.id(&inst.b))?; // X×B → X'×B
    let lhs_premise = m.compose(&inst.f, &close)?;
    let open = times(m, &m.delay_mor(&inst.h), &m.id(&inst.a))?; // ▶X×A → ▶X'×A
    let rhs_premise = m.compose(&open, &inst.f_prime)?;
    if !m.mor_equal(&lhs_premise, &rhs_premise) {
        return Ok(TrialOutcome::Discard);
    }
    let lhs = m.trace(&inst.x, &inst.a, &inst.b, &inst.f)?;
    let rhs = m.trace(&inst.x_prime, &inst.a, &inst.b, &inst.f_prime)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(
            m,
            &[
                ("X", &inst.x),
                ("X'", &inst.x_prime),
                ("A", &inst.a),
                ("B", &inst.b),
            ],
            &[("f", &inst.f), ("f'", &inst.f_prime), ("h", &inst.h)],
        )
    }))
}
