//! Deriving the point of the delay from the dagger.
//!
//! For the state object `Z = ▶X × X` the body
//! `f_X = ▶π_r × X : ▶Z × X → Z` has a *forced* solution: the second
//! coordinate must echo the parameter and the first must delay it.  The
//! first projection of `f_X†` therefore recovers `p_X : X → ▶X` in any
//! model, which the trial checks, along with naturality of the point on a
//! sampled morphism.

use rand_chacha::ChaCha8Rng;

use crate::cat::{times, CatResult, GuardedCategory, ObjRole};

use super::{describe_instance, verdict, TrialOutcome};

/// `point`: `π_ℓ ∘ (▶π_r × X)† = p_X`, plus the naturality square
/// `▶h ∘ p_X = p_{X'} ∘ h` for a sampled `h`.
pub fn derive_point<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let x = m.random_obj(ObjRole::State, rng);
    let dx = m.delay_obj(&x);
    let z = m.product(&dx, &x);
    let body = times(m, &m.delay_mor(&m.proj_right(&dx, &x)), &m.id(&x))?; // ▶Z×X → Z
    let solved = m.dagger(&z, &x, &body)?; // X → ▶X×X
    let lhs = m.compose(&solved, &m.proj_left(&dx, &x))?; // X → ▶X
    let rhs = m.point(&x);
    let first = verdict(m, &lhs, &rhs, || {
        describe_instance(m, &[("X", &x)], &[])
    });
    if let TrialOutcome::Fail { .. } = first {
        return Ok(first);
    }
    // naturality on a sampled h : X → X'
    let x_prime = m.random_obj(ObjRole::State, rng);
    let h = match m.random_mor(&x, &x_prime, rng) {
        Ok(h) => h,
        Err(_) => return Ok(TrialOutcome::Pass), // empty hom: the main claim already passed
    };
    let nat_l = m.compose(&m.point(&x), &m.delay_mor(&h))?;
    let nat_r = m.compose(&h, &m.point(&x_prime))?;
    Ok(verdict(m, &nat_l, &nat_r, || {
        format!(
            "naturality; {}",
            describe_instance(m, &[("X", &x), ("X'", &x_prime)], &[("h", &h)])
        )
    }))
}
