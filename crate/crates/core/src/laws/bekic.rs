//! The pairing (Bekič) identity: a mutual fixpoint taken jointly agrees with
//! solving one coordinate at a time, plus a four-way replay deriving the
//! double-dagger identity from it.

use rand_chacha::ChaCha8Rng;

use crate::cat::{assoc_right, canonical, times, CatResult, GuardedCategory, ObjRole};

use super::{describe_instance, verdict, TrialOutcome};

struct PairedSystem<M: GuardedCategory> {
    x: M::Obj,
    y: M::Obj,
    a: M::Obj,
    f: M::Mor,
    g: M::Mor,
}

/// Joint loop body `▶(X×Y) × A → X × Y` built from the coordinate bodies.
fn joint<M: GuardedCategory>(m: &M, s: &PairedSystem<M>) -> CatResult<M::Mor> {
    let (dx, dy) = (m.delay_obj(&s.x), m.delay_obj(&s.y));
    let spread = m.compose(
        &times(m, &canonical(m, &s.x, &s.y)?, &m.id(&s.a))?, // ▶(X×Y)×A → (▶X×▶Y)×A
        &assoc_right(m, &dx, &dy, &s.a)?,                    // → ▶X×(▶Y×A)
    )?;
    m.compose(&spread, &m.pair(&s.f, &s.g)?)
}

fn gen_system<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<PairedSystem<M>> {
    let x = m.random_obj(ObjRole::State, rng);
    let y = m.random_obj(ObjRole::State, rng);
    let a = m.random_obj(ObjRole::Param, rng);
    let (dx, dy) = (m.delay_obj(&x), m.delay_obj(&y));
    let dom = m.product(&dx, &m.product(&dy, &a));
    let f = m.random_mor(&dom, &x, rng)?;
    let g = m.random_mor(&dom, &y, rng)?;
    Ok(PairedSystem { x, y, a, f, g })
}

/// `bekic`: for `f, g : ▶X × (▶Y × A) → X, Y`,
///
/// ```text
/// ⟨f, g⟩‡  =  ⟨e_L†, e_R†⟩      (daggers over X×Y vs. coordinatewise)
/// e_R = g ∘ ⟨p_X ∘ f†, id⟩,    e_L = f ∘ (▶X × ⟨p_Y ∘ e_R†, id⟩)
/// ```
///
/// together with the elimination identity `e_L† = f† ∘ ⟨p_Y ∘ e_R†, id⟩`.
pub fn bekic<M: GuardedCategory>(m: &M, rng: &mut ChaCha8Rng) -> CatResult<TrialOutcome> {
    let s = gen_system(m, rng)?;
    let (dx, dy) = (m.delay_obj(&s.x), m.delay_obj(&s.y));
    let dya = m.product(&dy, &s.a);
    let xy = m.product(&s.x, &s.y);

    let lhs = m.dagger(&xy, &s.a, &joint(m, &s)?)?; // A → X×Y

    // solve X away inside g
    let fd = m.dagger(&s.x, &dya, &s.f)?; // ▶Y×A → X
    let feed_x = m.pair(&m.compose(&fd, &m.point(&s.x))?, &m.id(&dya))?; // ▶Y×A → ▶X×(▶Y×A)
    let e_r = m.compose(&feed_x, &s.g)?; // ▶Y×A → Y
    let e_rd = m.dagger(&s.y, &s.a, &e_r)?; // A → Y

    // close the Y input of f with e_R†
    let close_y = m.pair(&m.compose(&e_rd, &m.point(&s.y))?, &m.id(&s.a))?; // A → ▶Y×A
    let e_l = m.compose(&times(m, &m.id(&dx), &close_y)?, &s.f)?; // ▶X×A → X
    let e_ld = m.dagger(&s.x, &s.a, &e_l)?; // A → X

    let rhs = m.pair(&e_ld, &e_rd)?;
    let main = verdict(m, &lhs, &rhs, || {
        describe_instance(
            m,
            &[("X", &s.x), ("Y", &s.y), ("A", &s.a)],
            &[("f", &s.f), ("g", &s.g)],
        )
    });
    if let TrialOutcome::Fail { .. } = main {
        return Ok(main);
    }
    // elimination identity
    let elim = m.compose(&close_y, &fd)?; // A → X
    Ok(verdict(m, &e_ld, &elim, || {
        format!(
            "elimination identity; {}",
            describe_instance(
                m,
                &[("X", &s.x), ("Y", &s.y), ("A", &s.a)],
                &[("f", &s.f), ("g", &s.g)],
            )
        )
    }))
}

/// `bekic-dd`: replay the derivation of the double-dagger identity through
/// the pairing identity.  For `f : ▶X × (▶X × A) → X` the four composites
///
/// ```text
/// e1 = (f†)†                    e2 = (f ∘ ⟨p_X ∘ f†, id⟩)†
/// e3 = π_r ∘ ⟨f, f⟩‡            e4 = (f ∘ ⟨π_ℓ, id⟩)†
/// ```
///
/// must agree pairwise.
pub fn bekic_double_dagger<M: GuardedCategory>(
    m: &M,
    rng: &mut ChaCha8Rng,
) -> CatResult<TrialOutcome> {
    let x = m.random_obj(ObjRole::State, rng);
    let a = m.random_obj(ObjRole::Param, rng);
    let dx = m.delay_obj(&x);
    let dxa = m.product(&dx, &a);
    let f = m.random_mor(&m.product(&dx, &dxa), &x, rng)?;

    let inner = m.dagger(&x, &dxa, &f)?; // ▶X×A → X
    let e1 = m.dagger(&x, &a, &inner)?;

    let feed = m.pair(&m.compose(&inner, &m.point(&x))?, &m.id(&dxa))?; // ▶X×A → ▶X×(▶X×A)
    let e2 = m.dagger(&x, &a, &m.compose(&feed, &f)?)?;

    let sys = PairedSystem {
        x: x.clone(),
        y: x.clone(),
        a: a.clone(),
        f: f.clone(),
        g: f.clone(),
    };
    let xx = m.product(&x, &x);
    let paired = m.dagger(&xx, &a, &joint(m, &sys)?)?; // A → X×X
    let e3 = m.compose(&paired, &m.proj_right(&x, &x))?;

    let contract = m.pair(&m.proj_left(&dx, &a), &m.id(&dxa))?; // ▶X×A → ▶X×(▶X×A)
    let e4 = m.dagger(&x, &a, &m.compose(&contract, &f)?)?;

    let inst = || describe_instance(m, &[("X", &x), ("A", &a)], &[("f", &f)]);
    for (label, l, r) in [("e1=e2", &e1, &e2), ("e2=e3", &e2, &e3), ("e3=e4", &e3, &e4)] {
        if let out @ TrialOutcome::Fail { .. } = verdict(m, l, r, || {
            format!("step {label}; {}", inst())
        }) {
            return Ok(out);
        }
    }
    Ok(TrialOutcome::Pass)
}
