//! Model-independent vocabulary: the [`GuardedCategory`] trait and the
//! generic constructions the law harness builds from it.
//!
//! A model is a cartesian category with a pointed endofunctor `▶` (the
//! *delay*) and a guarded dagger: an operator taking `f : ▶X × Y → X` to a
//! morphism `f† : Y → X` satisfying the guarded fixpoint identity
//!
//! ```text
//! f†  =  f ∘ (p_X × id_Y) ∘ ⟨f†, id_Y⟩ .
//! ```
//!
//! Everything the harness needs — projections, pairing, the canonical
//! morphism `▶(A×B) → ▶A × ▶B`, the derived trace, brute-force solution
//! enumeration — is expressed against this trait, so each law is written once
//! and runs on every model.
//!
//! Products associate to the right throughout: `A × B × C` always means
//! `A × (B × C)`, and daggers and traces always strip the leftmost factor.

use std::fmt::Debug;

use rand_chacha::ChaCha8Rng;

/// Errors raised by categorical operations and instance generation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum CatError {
    /// A composite was requested for morphisms whose boundaries do not meet.
    #[error("shape mismatch in {op}: expected {expected}, found {found}")]
    ShapeMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },
    /// The requested hom-set has no members (for example maps into an empty
    /// poset from a nonempty one).
    #[error("no morphism exists from {from} to {to}")]
    EmptyHom { from: String, to: String },
    /// Exhaustive enumeration is not available (infinite or oversized hom-set).
    #[error("exhaustive enumeration unavailable: {0}")]
    UnsupportedOracle(&'static str),
    /// A randomized generator ran out of retries.
    #[error("generation budget exhausted while sampling {0}")]
    GenerationBudget(&'static str),
    /// A fixpoint iteration failed to stabilize within its proven bound;
    /// indicates a structural bug (e.g. a non-monotone table slipped through).
    #[error("iteration cap exceeded in {0}")]
    IterationCap(&'static str),
    /// A table violates the structure its boundary requires
    /// (monotonicity, naturality, nonexpansiveness, well-formed tagging).
    #[error("structure violation: {0}")]
    Structure(String),
    /// An equation system names a recursion variable whose right-hand side is
    /// that bare variable (or another bare recursion variable).
    #[error("equation for `{variable}` is unguarded")]
    Unguarded { variable: String },
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Shorthand used by every fallible categorical operation.
pub type CatResult<T> = Result<T, CatError>;

pub(crate) fn shape_err(op: &'static str, expected: impl Debug, found: impl Debug) -> CatError {
    CatError::ShapeMismatch {
        op,
        expected: format!("{expected:?}"),
        found: format!("{found:?}"),
    }
}

/// Which role an object plays when an instance generator asks for one.
///
/// `State` objects carry the fixpoint (the `X` in `f : ▶X × Y → X`) and may
/// be a little larger; `Param` objects are parameter/output objects and are
/// biased towards small and degenerate shapes (terminal objects, empty
/// carriers) so that edge cases are exercised continuously.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjRole {
    State,
    Param,
}

/// A cartesian category with a pointed delay endofunctor and a guarded
/// dagger.  See the module documentation for the orientation conventions.
///
/// `compose(f, g)` is *diagrammatic*: it yields `g ∘ f`, defined when
/// `cod(f) = dom(g)`.
pub trait GuardedCategory {
    type Obj: Clone + PartialEq + Debug;
    type Mor: Clone + Debug;

    fn name(&self) -> &'static str;

    // ---- cartesian structure ----
    fn terminal(&self) -> Self::Obj;
    fn product(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn id(&self, a: &Self::Obj) -> Self::Mor;
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> CatResult<Self::Mor>;
    fn pair(&self, f: &Self::Mor, g: &Self::Mor) -> CatResult<Self::Mor>;
    fn proj_left(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
    fn proj_right(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
    fn bang(&self, a: &Self::Obj) -> Self::Mor;
    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;

    // ---- delay ----
    fn delay_obj(&self, a: &Self::Obj) -> Self::Obj;
    fn delay_mor(&self, f: &Self::Mor) -> Self::Mor;
    /// The point `p_A : A → ▶A` of the delay.
    fn point(&self, a: &Self::Obj) -> Self::Mor;

    // ---- dagger ----
    /// Guarded dagger: for `f : ▶X × Y → X` produce `f† : Y → X`.
    fn dagger(&self, x: &Self::Obj, y: &Self::Obj, f: &Self::Mor) -> CatResult<Self::Mor>;
    /// Whether the guarded fixpoint identity pins `f†` down uniquely.
    fn unique_dagger(&self) -> bool;

    // ---- capability flags ----
    /// Whether `can : ▶(A×B) → ▶A × ▶B` is invertible in this model.
    fn preserves_products(&self) -> bool;
    /// Inverse of the canonical morphism, when it exists.
    fn can_inverse(&self, a: &Self::Obj, b: &Self::Obj) -> Option<Self::Mor>;
    /// Whether `p_{▶A} = ▶p_A` holds (checked, not assumed, per model).
    fn well_pointed(&self) -> bool;

    // ---- equality, enumeration, generation ----
    /// Semantic (extensional) equality of parallel morphisms.  Models with
    /// infinite carriers compare on a deterministic family of test elements
    /// to a fixed depth.
    fn mor_equal(&self, f: &Self::Mor, g: &Self::Mor) -> bool;
    /// Exhaustive hom-set enumeration in a deterministic order, if feasible.
    fn hom_enumerate(&self, a: &Self::Obj, b: &Self::Obj) -> Option<Vec<Self::Mor>>;
    /// Whether a morphism is invertible; `None` when undecidable here.
    fn is_bijective(&self, f: &Self::Mor) -> Option<bool>;
    fn random_obj(&self, role: ObjRole, rng: &mut ChaCha8Rng) -> Self::Obj;
    fn random_mor(
        &self,
        a: &Self::Obj,
        b: &Self::Obj,
        rng: &mut ChaCha8Rng,
    ) -> CatResult<Self::Mor>;
    /// Short human-readable rendering used in failure witnesses.
    fn describe_mor(&self, f: &Self::Mor) -> String;
    fn describe_obj(&self, a: &Self::Obj) -> String {
        format!("{a:?}")
    }

    // ---- uniformity instance generation ----
    /// One attempt at a premise-valid uniformity triple for the dagger shape:
    /// `h : X → X'` together with `f : ▶X × Y → X`, `g : ▶X' × Y → X'`
    /// satisfying `h ∘ f = g ∘ (▶h × Y)`.  `None` means the attempt was
    /// discarded (no preimage, ill-defined transport, structure violation).
    fn uniformity_dagger_instance(&self, rng: &mut ChaCha8Rng)
        -> Option<UniformityDagger<Self>>;
    /// One attempt at a premise-valid uniformity square for the trace shape:
    /// `f : ▶X × A → X × B`, `f' : ▶X' × A → X' × B`, `h : X → X'` with
    /// `(h × B) ∘ f = f' ∘ (▶h × A)`.
    fn uniformity_trace_instance(&self, rng: &mut ChaCha8Rng) -> Option<UniformityTrace<Self>>;

    // ---- derived structure ----
    /// Guarded trace `Tr^X_{A,B} : C(▶X × A, X × B) → C(A, B)`, derived from
    /// the dagger:  `Tr(f) = π_r ∘ f ∘ (p_X × A) ∘ ⟨(π_ℓ ∘ f)†, id_A⟩`.
    fn trace(
        &self,
        x: &Self::Obj,
        a: &Self::Obj,
        b: &Self::Obj,
        f: &Self::Mor,
    ) -> CatResult<Self::Mor> {
        trace_from_dagger(self, x, a, b, f)
    }
}

/// A premise-valid instance of the uniformity rule for daggers.
#[derive(Debug, Clone)]
pub struct UniformityDagger<M: GuardedCategory + ?Sized> {
    pub x: M::Obj,
    pub x_prime: M::Obj,
    pub y: M::Obj,
    pub f: M::Mor,
    pub g: M::Mor,
    pub h: M::Mor,
}

/// A premise-valid instance of the uniformity rule for traces.
#[derive(Debug, Clone)]
pub struct UniformityTrace<M: GuardedCategory + ?Sized> {
    pub x: M::Obj,
    pub x_prime: M::Obj,
    pub a: M::Obj,
    pub b: M::Obj,
    pub f: M::Mor,
    pub f_prime: M::Mor,
    pub h: M::Mor,
}

// ---------------------------------------------------------------------------
// Generic constructions
// ---------------------------------------------------------------------------

/// `f × g : A × C → B × D` as `⟨f ∘ π_ℓ, g ∘ π_r⟩`.
pub fn times<M: GuardedCategory + ?Sized>(m: &M, f: &M::Mor, g: &M::Mor) -> CatResult<M::Mor> {
    let dom = m.product(&m.dom(f), &m.dom(g));
    let (a, c) = (m.dom(f), m.dom(g));
    let pl = m.proj_left(&a, &c);
    let pr = m.proj_right(&a, &c);
    debug_assert_eq!(m.dom(&pl), dom);
    m.pair(&m.compose(&pl, f)?, &m.compose(&pr, g)?)
}

/// Diagonal `Δ_A = ⟨id, id⟩ : A → A × A`.
pub fn diagonal<M: GuardedCategory + ?Sized>(m: &M, a: &M::Obj) -> CatResult<M::Mor> {
    let ia = m.id(a);
    m.pair(&ia, &ia)
}

/// Symmetry `A × B → B × A`.
pub fn swap<M: GuardedCategory + ?Sized>(m: &M, a: &M::Obj, b: &M::Obj) -> CatResult<M::Mor> {
    m.pair(&m.proj_right(a, b), &m.proj_left(a, b))
}

/// Reassociation `(A × B) × C → A × (B × C)`.
pub fn assoc_right<M: GuardedCategory + ?Sized>(
    m: &M,
    a: &M::Obj,
    b: &M::Obj,
    c: &M::Obj,
) -> CatResult<M::Mor> {
    let ab = m.product(a, b);
    let pl = m.proj_left(&ab, c); // (A×B)×C → A×B
    let pr = m.proj_right(&ab, c); // (A×B)×C → C
    let first = m.compose(&pl, &m.proj_left(a, b))?;
    let second = m.compose(&pl, &m.proj_right(a, b))?;
    m.pair(&first, &m.pair(&second, &pr)?)
}

/// Reassociation `A × (B × C) → (A × B) × C`.
pub fn assoc_left<M: GuardedCategory + ?Sized>(
    m: &M,
    a: &M::Obj,
    b: &M::Obj,
    c: &M::Obj,
) -> CatResult<M::Mor> {
    let bc = m.product(b, c);
    let pl = m.proj_left(a, &bc); // A×(B×C) → A
    let pr = m.proj_right(a, &bc); // A×(B×C) → B×C
    let mid = m.compose(&pr, &m.proj_left(b, c))?;
    let last = m.compose(&pr, &m.proj_right(b, c))?;
    m.pair(&m.pair(&pl, &mid)?, &last)
}

/// The canonical morphism `can = ⟨▶π_ℓ, ▶π_r⟩ : ▶(A × B) → ▶A × ▶B`.
pub fn canonical<M: GuardedCategory + ?Sized>(
    m: &M,
    a: &M::Obj,
    b: &M::Obj,
) -> CatResult<M::Mor> {
    let dl = m.delay_mor(&m.proj_left(a, b));
    let dr = m.delay_mor(&m.proj_right(a, b));
    m.pair(&dl, &dr)
}

/// Certifies whether `can : ▶(A×B) → ▶A × ▶B` is invertible at this
/// particular pair of objects — by deciding bijectivity when the model can,
/// otherwise by verifying a claimed inverse on both sides.  Returns `false`
/// when neither certificate is available, so a `true` is always backed by
/// evidence.
pub fn canonical_is_iso<M: GuardedCategory + ?Sized>(
    m: &M,
    a: &M::Obj,
    b: &M::Obj,
) -> CatResult<bool> {
    let can = canonical(m, a, b)?;
    if let Some(decided) = m.is_bijective(&can) {
        return Ok(decided);
    }
    let Some(inv) = m.can_inverse(a, b) else {
        return Ok(false);
    };
    let fwd = m.compose(&can, &inv)?;
    let bwd = m.compose(&inv, &can)?;
    Ok(m.mor_equal(&fwd, &m.id(&m.dom(&can))) && m.mor_equal(&bwd, &m.id(&m.dom(&inv))))
}

/// `f ∘ (p_X × Y) ∘ ⟨s, id_Y⟩ : Y → X`, the right-hand side of the guarded
/// fixpoint identity for a candidate solution `s : Y → X`.
pub fn fixpoint_rhs<M: GuardedCategory + ?Sized>(
    m: &M,
    x: &M::Obj,
    y: &M::Obj,
    f: &M::Mor,
    s: &M::Mor,
) -> CatResult<M::Mor> {
    let px = m.point(x);
    let step = times(m, &px, &m.id(y))?; // X×Y → ▶X×Y
    let graph = m.pair(s, &m.id(y))?; // Y → X×Y
    m.compose(&m.compose(&graph, &step)?, f)
}

/// Does `s : Y → X` satisfy the guarded fixpoint identity for `f`?
pub fn check_guarded_square<M: GuardedCategory + ?Sized>(
    m: &M,
    x: &M::Obj,
    y: &M::Obj,
    f: &M::Mor,
    s: &M::Mor,
) -> CatResult<bool> {
    Ok(m.mor_equal(s, &fixpoint_rhs(m, x, y, f, s)?))
}

/// Brute-force oracle: every `s ∈ hom(Y, X)` satisfying the fixpoint
/// identity, in hom enumeration order.  Independent of `dagger`.
pub fn enumerate_solutions<M: GuardedCategory + ?Sized>(
    m: &M,
    x: &M::Obj,
    y: &M::Obj,
    f: &M::Mor,
) -> CatResult<Vec<M::Mor>> {
    let all = m
        .hom_enumerate(y, x)
        .ok_or(CatError::UnsupportedOracle("hom-set not enumerable"))?;
    let mut out = Vec::new();
    for s in all {
        if check_guarded_square(m, x, y, f, &s)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Derive a trace from the dagger:
/// `Tr^X_{A,B}(f) = π_r ∘ f ∘ (p_X × A) ∘ ⟨(π_ℓ ∘ f)†, id_A⟩`.
pub fn trace_from_dagger<M: GuardedCategory + ?Sized>(
    m: &M,
    x: &M::Obj,
    a: &M::Obj,
    b: &M::Obj,
    f: &M::Mor,
) -> CatResult<M::Mor> {
    let expect_dom = m.product(&m.delay_obj(x), a);
    let expect_cod = m.product(x, b);
    if m.dom(f) != expect_dom || m.cod(f) != expect_cod {
        return Err(shape_err("trace", (&expect_dom, &expect_cod), (m.dom(f), m.cod(f))));
    }
    let body = m.compose(f, &m.proj_left(x, b))?; // ▶X×A → X
    let d = m.dagger(x, a, &body)?; // A → X
    let px = m.point(x);
    let step = times(m, &px, &m.id(a))?; // X×A → ▶X×A
    let graph = m.pair(&d, &m.id(a))?; // A → X×A
    let into = m.compose(&m.compose(&graph, &step)?, f)?; // A → X×B
    m.compose(&into, &m.proj_right(x, b))
}

/// Recover a dagger from a trace operator: `f‡ = Tr^X_{Y,X}(⟨f, f⟩)` for
/// `f : ▶X × Y → X`.  `tr` supplies the trace so that round-trip checks can
/// pass in either a native or a derived operator without collapsing the two.
pub fn dagger_from_trace<M, T>(
    m: &M,
    x: &M::Obj,
    y: &M::Obj,
    f: &M::Mor,
    tr: T,
) -> CatResult<M::Mor>
where
    M: GuardedCategory + ?Sized,
    T: Fn(&M, &M::Obj, &M::Obj, &M::Obj, &M::Mor) -> CatResult<M::Mor>,
{
    let paired = m.pair(f, f)?; // ▶X×Y → X×X
    tr(m, x, y, x, &paired)
}

#[cfg(test)]
mod tests {
    // The generic constructions are exercised through every model's test
    // suite; dedicated composition/projection algebra tests live with the
    // simplest concrete model (`cpolift`), which doubles as the reference
    // implementation for table-backed categories.
}
