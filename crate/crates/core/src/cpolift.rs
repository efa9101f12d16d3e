//! Finite posets as cpos, with lifting `X ↦ X_⊥` as the delay endofunctor.
//!
//! Every finite poset is a cpo, every monotone map between finite posets is
//! continuous, and the lift adds one fresh bottom below everything.  The
//! dagger of `f : X_⊥ × Y → X` is the least fixpoint of
//!
//! ```text
//! Φ_f(m) = p_X ∘ f ∘ ⟨m, id_Y⟩ : (Y → X_⊥) → (Y → X_⊥)
//! ```
//!
//! computed by Kleene iteration from the constant-bottom map; iteration
//! stabilizes after at most `|X_⊥| · |Y|` steps because the iterates form an
//! ascending chain in a finite poset.  Daggers here are *not* unique — the
//! two-chain example in the tests has a second, non-least solution — which is
//! exactly what makes this model the interesting counterpoint to the others.
//!
//! The same carrier category supports two degenerate delay configurations
//! used by the law harness and the counterexample search:
//!
//! * [`DelayMode::Identity`] — `▶ = Id` on pointed posets, the classical
//!   least-fixpoint setting.  `can` is invertible, daggers are not unique.
//! * [`DelayMode::Constant`] — `▶X = 1`, whose guarded fixpoint operator is
//!   forced (unique) because the delayed input carries no information.
//!
//! Lifting does **not** preserve products: `(X × Y)_⊥` and `X_⊥ × Y_⊥`
//! already differ in size for `X = Y = 1`, so the canonical morphism cannot
//! be bijective.  The tests pin this down.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cat::{
    shape_err, times, CatError, CatResult, GuardedCategory, ObjRole, UniformityDagger,
    UniformityTrace,
};
use crate::poset::Poset;

/// Elements of lift-model carriers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PoElem {
    Unit,
    Atom(String),
    /// `Up(None)` is the adjoined bottom of a lift; `Up(Some(x))` is the
    /// embedded copy of `x`.
    Up(Option<Box<PoElem>>),
    Pair(Box<PoElem>, Box<PoElem>),
}

impl std::fmt::Display for PoElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PoElem::Unit => write!(f, "•"),
            PoElem::Atom(s) => write!(f, "{s}"),
            PoElem::Up(None) => write!(f, "⊥"),
            PoElem::Up(Some(x)) => write!(f, "up({x})"),
            PoElem::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// An object: a finite poset over [`PoElem`].
#[derive(Debug, Clone, PartialEq)]
pub struct LiftObj {
    pub(crate) poset: Poset<PoElem>,
}

impl LiftObj {
    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn poset(&self) -> &Poset<PoElem> {
        &self.poset
    }

    /// Discrete or explicitly ordered poset over named atoms.
    pub fn from_atoms(names: &[&str], pairs: &[(usize, usize)]) -> CatResult<Self> {
        let elems = names
            .iter()
            .map(|n| PoElem::Atom((*n).to_string()))
            .collect();
        Ok(LiftObj {
            poset: Poset::new(elems, pairs)?,
        })
    }
}

/// A monotone map, stored as an index table over `dom`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftMor {
    pub(crate) dom: LiftObj,
    pub(crate) cod: LiftObj,
    pub(crate) table: Vec<usize>,
}

impl LiftMor {
    /// Validating constructor: checks arity and monotonicity.
    pub fn new(dom: LiftObj, cod: LiftObj, table: Vec<usize>) -> CatResult<Self> {
        if table.len() != dom.len() {
            return Err(shape_err("LiftMor::new", dom.len(), table.len()));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= cod.len()) {
            return Err(CatError::Structure(format!(
                "table value {bad} out of range for codomain of size {}",
                cod.len()
            )));
        }
        for i in 0..dom.len() {
            for j in 0..dom.len() {
                if dom.poset.leq(i, j) && !cod.poset.leq(table[i], table[j]) {
                    return Err(CatError::Structure(format!(
                        "map is not monotone: {} ≤ {} but {} ≰ {}",
                        dom.poset.elem(i),
                        dom.poset.elem(j),
                        cod.poset.elem(table[i]),
                        cod.poset.elem(table[j])
                    )));
                }
            }
        }
        Ok(LiftMor { dom, cod, table })
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

/// Delay configuration of the carrier category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayMode {
    /// `▶X = X_⊥` with the embedding as point (the standard model).
    Standard,
    /// `▶ = Id` on pointed posets; the classical least-fixpoint operator.
    Identity,
    /// `▶X = 1`; the induced guarded fixpoint operator is forced.
    Constant,
}

/// Size bounds for random generation.
#[derive(Debug, Clone, Copy)]
pub struct LiftSizes {
    pub max_state: usize,
    pub max_param: usize,
}

impl Default for LiftSizes {
    fn default() -> Self {
        LiftSizes {
            max_state: 3,
            max_param: 2,
        }
    }
}

/// The lift model.  Immutable after construction.
#[derive(Debug, Clone)]
pub struct LiftModel {
    mode: DelayMode,
    sizes: LiftSizes,
}

impl Default for LiftModel {
    fn default() -> Self {
        LiftModel::new(DelayMode::Standard, LiftSizes::default())
    }
}

impl LiftModel {
    pub fn new(mode: DelayMode, sizes: LiftSizes) -> Self {
        LiftModel { mode, sizes }
    }

    pub fn standard() -> Self {
        Self::default()
    }

    pub fn identity_delay() -> Self {
        LiftModel::new(DelayMode::Identity, LiftSizes::default())
    }

    pub fn constant_delay() -> Self {
        LiftModel::new(DelayMode::Constant, LiftSizes::default())
    }

    pub fn mode(&self) -> DelayMode {
        self.mode
    }

    fn random_poset(&self, max: usize, allow_empty: bool, rng: &mut ChaCha8Rng) -> LiftObj {
        let n = if allow_empty && self.mode != DelayMode::Identity && rng.gen_bool(0.08) {
            0
        } else {
            rng.gen_range(1..=max.max(1))
        };
        let elems: Vec<PoElem> = (0..n).map(|i| PoElem::Atom(format!("e{i}"))).collect();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(0.35) {
                    pairs.push((i, j));
                }
            }
        }
        let mut poset = Poset::new(elems, &pairs).expect("forward edges never break antisymmetry");
        if self.mode == DelayMode::Identity {
            // Identity delay needs least fixpoints, hence pointed carriers.
            let mut elems: Vec<PoElem> = vec![PoElem::Atom("b".to_string())];
            elems.extend(poset.elems().iter().cloned());
            let mut all_pairs: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
            for i in 0..n {
                for j in 0..n {
                    if poset.lt(i, j) {
                        all_pairs.push((i + 1, j + 1));
                    }
                }
            }
            poset = Poset::new(elems, &all_pairs).expect("adjoining a bottom is safe");
        }
        LiftObj { poset }
    }

    /// Sample a monotone map by assigning values in a linear extension of the
    /// domain, restarting on dead ends.
    fn sample_monotone(
        &self,
        a: &LiftObj,
        b: &LiftObj,
        rng: &mut ChaCha8Rng,
    ) -> CatResult<LiftMor> {
        if a.is_empty() {
            return LiftMor::new(a.clone(), b.clone(), Vec::new());
        }
        if b.is_empty() {
            return Err(CatError::EmptyHom {
                from: format!("{a:?}"),
                to: "empty poset".to_string(),
            });
        }
        let order = a.poset.topo_order();
        'restart: for _ in 0..100 {
            let mut table = vec![usize::MAX; a.len()];
            for &i in &order {
                let choices: Vec<usize> = (0..b.len())
                    .filter(|&v| {
                        (0..a.len()).all(|u| {
                            table[u] == usize::MAX
                                || !a.poset.leq(u, i)
                                || b.poset.leq(table[u], v)
                        })
                    })
                    .collect();
                match choices.as_slice() {
                    [] => continue 'restart,
                    cs => table[i] = cs[rng.gen_range(0..cs.len())],
                }
            }
            return LiftMor::new(a.clone(), b.clone(), table);
        }
        Err(CatError::GenerationBudget("monotone map"))
    }

    /// Common core of the dagger: iterate `m ↦ step(m)` from `init` until it
    /// stabilizes, with the Kleene bound as a safety cap.
    fn kleene(
        &self,
        y_len: usize,
        init: usize,
        cap: usize,
        step: impl Fn(&[usize], usize) -> usize,
    ) -> CatResult<Vec<usize>> {
        let mut s = vec![init; y_len];
        for _ in 0..=cap {
            let next: Vec<usize> = (0..y_len).map(|yi| step(&s, yi)).collect();
            if next == s {
                return Ok(s);
            }
            s = next;
        }
        Err(CatError::IterationCap("cpolift dagger"))
    }

    /// Double-dagger comparison on explicit data, table-exact:
    /// for `f : ▶X × (▶X × Y) → X` checks `f†† = (f ∘ ⟨π_ℓ, id⟩)†`.
    pub fn check_double_dagger(
        &self,
        x: &LiftObj,
        y: &LiftObj,
        f: &LiftMor,
    ) -> CatResult<bool> {
        let dx = self.delay_obj(x);
        let dxy = self.product(&dx, y);
        let inner = self.dagger(x, &dxy, f)?; // ▶X×Y → X
        let lhs = self.dagger(x, y, &inner)?;
        let reshape = self.pair(&self.proj_left(&dx, y), &self.id(&dxy))?; // ▶X×Y → ▶X×(▶X×Y)
        let rhs = self.dagger(x, y, &self.compose(&reshape, f)?)?;
        Ok(self.mor_equal(&lhs, &rhs))
    }

    /// With identity delay the Kleene iterations for `f` and `g` only line up
    /// when `h` maps the bottom of `X` to the bottom of `X'`; standard
    /// lifting strictifies `▶h` automatically, so anything goes there.
    fn strict_enough(&self, h: &LiftMor) -> bool {
        if self.mode != DelayMode::Identity {
            return true;
        }
        match (h.dom.poset.bottom(), h.cod.poset.bottom()) {
            (Some(b), Some(b2)) => h.table[b] == b2,
            _ => false,
        }
    }

    fn transport_along(
        &self,
        dh: &LiftMor, // ▶X → ▶X'
        extend: &LiftObj,
        f_cod_map: impl Fn(usize) -> usize,
        f: &LiftMor,
        cod_prime: &LiftObj,
    ) -> Option<Vec<usize>> {
        // For each (u', e) in ▶X' × E choose any preimage u of u' under dh
        // and transport f's value; reject if no preimage exists or the
        // choices disagree.
        let dxp = self.cod(dh);
        let e_len = extend.len();
        let mut table = Vec::with_capacity(dxp.len() * e_len);
        for up in 0..dxp.len() {
            let preimages: Vec<usize> = (0..dh.table.len())
                .filter(|&u| dh.table[u] == up)
                .collect();
            if preimages.is_empty() {
                return None;
            }
            for e in 0..e_len {
                let vals: Vec<usize> = preimages
                    .iter()
                    .map(|&u| f_cod_map(f.table[u * e_len + e]))
                    .collect();
                if vals.windows(2).any(|w| w[0] != w[1]) {
                    return None;
                }
                if vals[0] >= cod_prime.len() {
                    return None;
                }
                table.push(vals[0]);
            }
        }
        Some(table)
    }
}

impl GuardedCategory for LiftModel {
    type Obj = LiftObj;
    type Mor = LiftMor;

    fn name(&self) -> &'static str {
        match self.mode {
            DelayMode::Standard => "cpolift",
            DelayMode::Identity => "cpolift-id",
            DelayMode::Constant => "cpolift-const",
        }
    }

    fn terminal(&self) -> LiftObj {
        LiftObj {
            poset: Poset::new(vec![PoElem::Unit], &[]).unwrap(),
        }
    }

    fn product(&self, a: &LiftObj, b: &LiftObj) -> LiftObj {
        LiftObj {
            poset: a.poset.product_with(&b.poset, |x, y| {
                PoElem::Pair(Box::new(x.clone()), Box::new(y.clone()))
            }),
        }
    }

    fn id(&self, a: &LiftObj) -> LiftMor {
        LiftMor {
            dom: a.clone(),
            cod: a.clone(),
            table: (0..a.len()).collect(),
        }
    }

    fn compose(&self, f: &LiftMor, g: &LiftMor) -> CatResult<LiftMor> {
        if f.cod != g.dom {
            return Err(shape_err("compose", &f.cod, &g.dom));
        }
        Ok(LiftMor {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            table: f.table.iter().map(|&i| g.table[i]).collect(),
        })
    }

    fn pair(&self, f: &LiftMor, g: &LiftMor) -> CatResult<LiftMor> {
        if f.dom != g.dom {
            return Err(shape_err("pair", &f.dom, &g.dom));
        }
        let cod = self.product(&f.cod, &g.cod);
        let m = g.cod.len();
        let table = f
            .table
            .iter()
            .zip(&g.table)
            .map(|(&i, &j)| i * m + j)
            .collect();
        Ok(LiftMor {
            dom: f.dom.clone(),
            cod,
            table,
        })
    }

    fn proj_left(&self, a: &LiftObj, b: &LiftObj) -> LiftMor {
        let dom = self.product(a, b);
        let table = (0..a.len()).flat_map(|i| vec![i; b.len()]).collect();
        LiftMor {
            dom,
            cod: a.clone(),
            table,
        }
    }

    fn proj_right(&self, a: &LiftObj, b: &LiftObj) -> LiftMor {
        let dom = self.product(a, b);
        let table = (0..a.len()).flat_map(|_| 0..b.len()).collect();
        LiftMor {
            dom,
            cod: b.clone(),
            table,
        }
    }

    fn bang(&self, a: &LiftObj) -> LiftMor {
        LiftMor {
            dom: a.clone(),
            cod: self.terminal(),
            table: vec![0; a.len()],
        }
    }

    fn dom(&self, f: &LiftMor) -> LiftObj {
        f.dom.clone()
    }

    fn cod(&self, f: &LiftMor) -> LiftObj {
        f.cod.clone()
    }

    fn delay_obj(&self, a: &LiftObj) -> LiftObj {
        match self.mode {
            DelayMode::Identity => a.clone(),
            DelayMode::Constant => self.terminal(),
            DelayMode::Standard => {
                let n = a.len();
                let mut elems = Vec::with_capacity(n + 1);
                elems.push(PoElem::Up(None));
                elems.extend(
                    a.poset
                        .elems()
                        .iter()
                        .map(|e| PoElem::Up(Some(Box::new(e.clone())))),
                );
                let mut pairs: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
                for i in 0..n {
                    for j in 0..n {
                        if a.poset.lt(i, j) {
                            pairs.push((i + 1, j + 1));
                        }
                    }
                }
                LiftObj {
                    poset: Poset::new(elems, &pairs).expect("lift of a poset is a poset"),
                }
            }
        }
    }

    fn delay_mor(&self, f: &LiftMor) -> LiftMor {
        match self.mode {
            DelayMode::Identity => f.clone(),
            DelayMode::Constant => self.id(&self.terminal()),
            DelayMode::Standard => {
                let mut table = Vec::with_capacity(f.table.len() + 1);
                table.push(0);
                table.extend(f.table.iter().map(|&i| i + 1));
                LiftMor {
                    dom: self.delay_obj(&f.dom),
                    cod: self.delay_obj(&f.cod),
                    table,
                }
            }
        }
    }

    fn point(&self, a: &LiftObj) -> LiftMor {
        match self.mode {
            DelayMode::Identity => self.id(a),
            DelayMode::Constant => self.bang(a),
            DelayMode::Standard => LiftMor {
                dom: a.clone(),
                cod: self.delay_obj(a),
                table: (0..a.len()).map(|i| i + 1).collect(),
            },
        }
    }

    fn dagger(&self, x: &LiftObj, y: &LiftObj, f: &LiftMor) -> CatResult<LiftMor> {
        let dx = self.delay_obj(x);
        let dom = self.product(&dx, y);
        if f.dom != dom || f.cod != *x {
            return Err(shape_err("dagger", (&dom, x), (&f.dom, &f.cod)));
        }
        let y_len = y.len();
        let cap = dx.len() * y_len + 1;
        let table = match self.mode {
            DelayMode::Standard => {
                // Iterate Φ_f(m) = p_X ∘ f ∘ ⟨m, id⟩ from the constant-⊥ map;
                // indices live in X_⊥ where ⊥ is index 0 and x_i is i+1.
                let s = self.kleene(y_len, 0, cap, |s, yi| f.table[s[yi] * y_len + yi] + 1)?;
                (0..y_len).map(|yi| f.table[s[yi] * y_len + yi]).collect()
            }
            DelayMode::Identity => {
                let bot = x.poset.bottom().ok_or_else(|| {
                    CatError::Structure(
                        "identity-delay dagger needs a least element in X".to_string(),
                    )
                })?;
                let s = self.kleene(y_len, bot, cap, |s, yi| f.table[s[yi] * y_len + yi])?;
                (0..y_len).map(|yi| f.table[s[yi] * y_len + yi]).collect()
            }
            DelayMode::Constant => (0..y_len).map(|yi| f.table[yi]).collect(),
        };
        LiftMor::new(y.clone(), x.clone(), table)
    }

    fn unique_dagger(&self) -> bool {
        self.mode == DelayMode::Constant
    }

    fn preserves_products(&self) -> bool {
        self.mode != DelayMode::Standard
    }

    fn can_inverse(&self, a: &LiftObj, b: &LiftObj) -> Option<LiftMor> {
        match self.mode {
            DelayMode::Standard => None,
            // can : ▶(A×B) = A×B → ▶A×▶B = A×B is the identity table.
            DelayMode::Identity => Some(self.id(&self.product(a, b))),
            // can : 1 → 1×1 is invertible with inverse the unique map back.
            DelayMode::Constant => {
                let one_sq = self.product(&self.terminal(), &self.terminal());
                Some(LiftMor {
                    dom: one_sq,
                    cod: self.terminal(),
                    table: vec![0],
                })
            }
        }
    }

    fn well_pointed(&self) -> bool {
        // Standard lifting is not well-pointed: p_{X_⊥}(⊥) embeds the old
        // bottom while (p_X)_⊥ sends ⊥ to the new one.
        self.mode != DelayMode::Standard
    }

    fn mor_equal(&self, f: &LiftMor, g: &LiftMor) -> bool {
        f.dom == g.dom && f.cod == g.cod && f.table == g.table
    }

    fn hom_enumerate(&self, a: &LiftObj, b: &LiftObj) -> Option<Vec<LiftMor>> {
        const MAP_BUDGET: usize = 100_000;
        const STEP_BUDGET: usize = 2_000_000;
        if a.is_empty() {
            return Some(vec![LiftMor {
                dom: a.clone(),
                cod: b.clone(),
                table: Vec::new(),
            }]);
        }
        if b.is_empty() {
            return Some(Vec::new());
        }
        let order = a.poset.topo_order();
        let mut out = Vec::new();
        let mut table = vec![usize::MAX; a.len()];
        let mut steps = 0usize;
        fn rec(
            model: &LiftModel,
            a: &LiftObj,
            b: &LiftObj,
            order: &[usize],
            pos: usize,
            table: &mut Vec<usize>,
            out: &mut Vec<LiftMor>,
            steps: &mut usize,
        ) -> bool {
            if out.len() > MAP_BUDGET || *steps > STEP_BUDGET {
                return false;
            }
            if pos == order.len() {
                out.push(LiftMor {
                    dom: a.clone(),
                    cod: b.clone(),
                    table: table.clone(),
                });
                return true;
            }
            let i = order[pos];
            for v in 0..b.len() {
                *steps += 1;
                let ok = (0..a.len()).all(|u| {
                    table[u] == usize::MAX || !a.poset.leq(u, i) || b.poset.leq(table[u], v)
                });
                if ok {
                    table[i] = v;
                    if !rec(model, a, b, order, pos + 1, table, out, steps) {
                        return false;
                    }
                    table[i] = usize::MAX;
                }
            }
            true
        }
        if rec(self, a, b, &order, 0, &mut table, &mut out, &mut steps) {
            Some(out)
        } else {
            None
        }
    }

    fn is_bijective(&self, f: &LiftMor) -> Option<bool> {
        if f.dom.len() != f.cod.len() {
            return Some(false);
        }
        let mut seen = vec![false; f.cod.len()];
        for &v in &f.table {
            if seen[v] {
                return Some(false);
            }
            seen[v] = true;
        }
        Some(true)
    }

    fn random_obj(&self, role: ObjRole, rng: &mut ChaCha8Rng) -> LiftObj {
        match role {
            ObjRole::State => self.random_poset(self.sizes.max_state, true, rng),
            ObjRole::Param => {
                if rng.gen_bool(0.15) {
                    self.terminal()
                } else {
                    self.random_poset(self.sizes.max_param, true, rng)
                }
            }
        }
    }

    fn random_mor(&self, a: &LiftObj, b: &LiftObj, rng: &mut ChaCha8Rng) -> CatResult<LiftMor> {
        self.sample_monotone(a, b, rng)
    }

    fn describe_mor(&self, f: &LiftMor) -> String {
        let entries: Vec<String> = f
            .table
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{}↦{}", f.dom.poset.elem(i), f.cod.poset.elem(v)))
            .collect();
        format!("[{}]", entries.join(", "))
    }

    fn uniformity_dagger_instance(
        &self,
        rng: &mut ChaCha8Rng,
    ) -> Option<UniformityDagger<Self>> {
        let x = self.random_poset(self.sizes.max_state, false, rng);
        let mut x_prime = self.random_poset(self.sizes.max_state, false, rng);
        for _ in 0..4 {
            if x_prime.len() <= x.len() {
                break;
            }
            x_prime = self.random_poset(self.sizes.max_state, false, rng);
        }
        if x_prime.len() > x.len() {
            return None;
        }
        let y = self.random_obj(ObjRole::Param, rng);
        let h = self.sample_monotone(&x, &x_prime, rng).ok()?;
        // surjectivity, so that ▶h has preimages everywhere
        let mut hit = vec![false; x_prime.len()];
        for &v in &h.table {
            hit[v] = true;
        }
        if hit.iter().any(|&b| !b) {
            return None;
        }
        if !self.strict_enough(&h) {
            return None;
        }
        let dx = self.delay_obj(&x);
        let f = self
            .sample_monotone(&self.product(&dx, &y), &x, rng)
            .ok()?;
        let dh = self.delay_mor(&h);
        let table = self.transport_along(&dh, &y, |v| h.table[v], &f, &x_prime)?;
        let dom_g = self.product(&self.delay_obj(&x_prime), &y);
        let g = LiftMor::new(dom_g, x_prime.clone(), table).ok()?;
        // Defensive premise check: h ∘ f = g ∘ (▶h × Y).
        let lhs = self.compose(&f, &h).ok()?;
        let step = times(self, &dh, &self.id(&y)).ok()?;
        let rhs = self.compose(&step, &g).ok()?;
        if !self.mor_equal(&lhs, &rhs) {
            return None;
        }
        Some(UniformityDagger {
            x,
            x_prime,
            y,
            f,
            g,
            h,
        })
    }

    fn uniformity_trace_instance(&self, rng: &mut ChaCha8Rng) -> Option<UniformityTrace<Self>> {
        let x = self.random_poset(self.sizes.max_state, false, rng);
        let mut x_prime = self.random_poset(self.sizes.max_state, false, rng);
        for _ in 0..4 {
            if x_prime.len() <= x.len() {
                break;
            }
            x_prime = self.random_poset(self.sizes.max_state, false, rng);
        }
        if x_prime.len() > x.len() {
            return None;
        }
        let a = self.random_obj(ObjRole::Param, rng);
        let b = self.random_obj(ObjRole::Param, rng);
        if b.is_empty() {
            return None;
        }
        let h = self.sample_monotone(&x, &x_prime, rng).ok()?;
        let mut hit = vec![false; x_prime.len()];
        for &v in &h.table {
            hit[v] = true;
        }
        if hit.iter().any(|&b| !b) {
            return None;
        }
        if !self.strict_enough(&h) {
            return None;
        }
        let dx = self.delay_obj(&x);
        let f = self
            .sample_monotone(&self.product(&dx, &a), &self.product(&x, &b), rng)
            .ok()?;
        let dh = self.delay_mor(&h);
        // transport f's X×B values through h × B
        let b_len = b.len();
        let table = self.transport_along(
            &dh,
            &a,
            |v| {
                let (xi, bi) = (v / b_len, v % b_len);
                h.table[xi] * b_len + bi
            },
            &f,
            &self.product(&x_prime, &b),
        )?;
        let dom_fp = self.product(&self.delay_obj(&x_prime), &a);
        let f_prime = LiftMor::new(dom_fp, self.product(&x_prime, &b), table).ok()?;
        let lhs = self.compose(&f, &times(self, &h, &self.id(&b)).ok()?).ok()?;
        let rhs = self
            .compose(&times(self, &dh, &self.id(&a)).ok()?, &f_prime)
            .ok()?;
        if !self.mor_equal(&lhs, &rhs) {
            return None;
        }
        Some(UniformityTrace {
            x,
            x_prime,
            a,
            b,
            f,
            f_prime,
            h,
        })
    }
}
