//! Interdefinability of dagger and trace, and consequences.
//!
//! The dagger induces the trace (feed the state solution back in); the trace
//! recovers the dagger (trace the doubled body `⟨f, f⟩`).  The laws here
//! check both round trips, the fixpoint property of the trace, the
//! state-enlargement formula, and the transfer of uniformity across the
//! correspondence.

use rand_chacha::ChaCha8Rng;

use crate::cat::{dagger_from_trace, diagonal, times, CatResult, GuardedCategory};

use super::{describe_instance, gen_dagger_shape, gen_trace_shape, verdict, TrialOutcome};

/// `rt-dagger`: recovering the dagger from the derived trace gives the
/// dagger back: `Tr^X_{Y,X}(⟨f, f⟩) = f†`.
pub fn round_trip_dagger<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<TrialOutcome> {
    let s = gen_dagger_shape(m, rng)?;
    let lhs = dagger_from_trace(m, &s.x, &s.y, &s.f, |m, x, a, b, f| m.trace(x, a, b, f))?;
    let rhs = m.dagger(&s.x, &s.y, &s.f)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("X", &s.x), ("Y", &s.y)], &[("f", &s.f)])
    }))
}

/// `rt-trace`: rebuilding the trace from the trace-derived dagger gives the
/// trace back: with `d = Tr^X_{A,X}(⟨π_ℓ∘f, π_ℓ∘f⟩)`,
/// `π_r ∘ f ∘ (p_X × A) ∘ ⟨d, id⟩ = Tr^X(f)`.
pub fn round_trip_trace<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<TrialOutcome> {
    let t = gen_trace_shape(m, rng)?;
    let body = m.compose(&t.f, &m.proj_left(&t.x, &t.b))?; // ▶X×A → X
    let d = dagger_from_trace(m, &t.x, &t.a, &body, |m, x, a, b, f| m.trace(x, a, b, f))?;
    let feed = m.pair(&m.compose(&d, &m.point(&t.x))?, &m.id(&t.a))?; // A → ▶X×A
    let lhs = m.compose(&m.compose(&feed, &t.f)?, &m.proj_right(&t.x, &t.b))?;
    let rhs = m.trace(&t.x, &t.a, &t.b, &t.f)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("X", &t.x), ("A", &t.a), ("B", &t.b)], &[("f", &t.f)])
    }))
}

/// `fptr`: fixpoint property of the trace.  Form `h = Tr^X_{A,X}(Δ ∘ π_ℓ ∘ f)`
/// — the state solution recovered *from the trace alone* — then:
///
/// 1. `Tr(f) = π_r ∘ f ∘ (p_X × A) ∘ ⟨h, id⟩`, and
/// 2. the pair `⟨h, Tr(f)⟩ : A → X × B` solves the full feedback system.
pub fn fixpoint_property<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<TrialOutcome> {
    let t = gen_trace_shape(m, rng)?;
    let body = m.compose(&t.f, &m.proj_left(&t.x, &t.b))?; // ▶X×A → X
    let doubled = m.compose(&body, &diagonal(m, &t.x)?)?; // ▶X×A → X×X
    let h = m.trace(&t.x, &t.a, &t.x, &doubled)?; // A → X
    let feed = m.pair(&m.compose(&h, &m.point(&t.x))?, &m.id(&t.a))?; // A → ▶X×A
    let unfolded = m.compose(&feed, &t.f)?; // A → X×B
    let tr = m.trace(&t.x, &t.a, &t.b, &t.f)?; // A → B
    let lhs = m.compose(&unfolded, &m.proj_right(&t.x, &t.b))?;
    let first = verdict(m, &lhs, &tr, || {
        describe_instance(m, &[("X", &t.x), ("A", &t.a), ("B", &t.b)], &[("f", &t.f)])
    });
    if let TrialOutcome::Fail { .. } = first {
        return Ok(first);
    }
    let s = m.pair(&h, &tr)?; // A → X×B
    Ok(verdict(m, &unfolded, &s, || {
        format!(
            "solution property; {}",
            describe_instance(m, &[("X", &t.x), ("A", &t.a), ("B", &t.b)], &[("f", &t.f)])
        )
    }))
}

/// `htr`: state enlargement.  Solving over the output object directly,
/// `Tr^X(f) = π_r ∘ (f ∘ (▶π_ℓ × A))†` with the dagger taken at `X × B`.
pub fn state_enlargement<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<TrialOutcome> {
    let t = gen_trace_shape(m, rng)?;
    let xb = m.product(&t.x, &t.b);
    let open = times(m, &m.delay_mor(&m.proj_left(&t.x, &t.b)), &m.id(&t.a))?; // ▶(X×B)×A → ▶X×A
    let big = m.compose(&open, &t.f)?; // ▶(X×B)×A → X×B
    let solved = m.dagger(&xb, &t.a, &big)?; // A → X×B
    let lhs = m.compose(&solved, &m.proj_right(&t.x, &t.b))?;
    let rhs = m.trace(&t.x, &t.a, &t.b, &t.f)?;
    Ok(verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("X", &t.x), ("A", &t.a), ("B", &t.b)], &[("f", &t.f)])
    }))
}

/// `unif-transfer`: uniformity crosses the dagger/trace correspondence in
/// both directions.  A dagger-uniformity premise forces equal traces of
/// `⟨f, h∘f⟩` and `⟨g, g⟩`; a trace-uniformity premise forces
/// `h ∘ (π_ℓ∘f)† = (π_ℓ∘f')†`.
pub fn uniformity_transfer<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<TrialOutcome> {
    let mut checked = false;

    if let Some(inst) = m.uniformity_dagger_instance(rng) {
        let lhs_premise = m.compose(&inst.f, &inst.h)?;
        let step = times(m, &m.delay_mor(&inst.h), &m.id(&inst.y))?;
        let rhs_premise = m.compose(&step, &inst.g)?;
        if m.mor_equal(&lhs_premise, &rhs_premise) {
            checked = true;
            let hf = m.compose(&inst.f, &inst.h)?; // ▶X×Y → X'
            let big_f = m.pair(&inst.f, &hf)?; // ▶X×Y → X×X'
            let big_g = m.pair(&inst.g, &inst.g)?; // ▶X'×Y → X'×X'
            let lhs = m.trace(&inst.x, &inst.y, &inst.x_prime, &big_f)?;
            let rhs = m.trace(&inst.x_prime, &inst.y, &inst.x_prime, &big_g)?;
            let out = verdict(m, &lhs, &rhs, || {
                format!(
                    "dagger→trace; {}",
                    describe_instance(
                        m,
                        &[("X", &inst.x), ("X'", &inst.x_prime), ("Y", &inst.y)],
                        &[("f", &inst.f), ("g", &inst.g), ("h", &inst.h)],
                    )
                )
            });
            if let TrialOutcome::Fail { .. } = out {
                return Ok(out);
            }
        }
    }

    if let Some(inst) = m.uniformity_trace_instance(rng) {
        let close = times(m, &inst.h, &m.id(&inst.b))?;
        let lhs_premise = m.compose(&inst.f, &close)?;
        let open = times(m, &m.delay_mor(&inst.h), &m.id(&inst.a))?;
        let rhs_premise = m.compose(&open, &inst.f_prime)?;
        if m.mor_equal(&lhs_premise, &rhs_premise) {
            checked = true;
            let gx = m.compose(&inst.f, &m.proj_left(&inst.x, &inst.b))?;
            let gxp = m.compose(&inst.f_prime, &m.proj_left(&inst.x_prime, &inst.b))?;
            let lhs = m.compose(&m.dagger(&inst.x, &inst.a, &gx)?, &inst.h)?;
            let rhs = m.dagger(&inst.x_prime, &inst.a, &gxp)?;
            let out = verdict(m, &lhs, &rhs, || {
                format!(
                    "trace→dagger; {}",
                    describe_instance(
                        m,
                        &[("X", &inst.x), ("X'", &inst.x_prime), ("A", &inst.a), ("B", &inst.b)],
                        &[("f", &inst.f), ("f'", &inst.f_prime), ("h", &inst.h)],
                    )
                )
            });
            if let TrialOutcome::Fail { .. } = out {
                return Ok(out);
            }
        }
    }

    Ok(if checked {
        TrialOutcome::Pass
    } else {
        TrialOutcome::Discard
    })
}
