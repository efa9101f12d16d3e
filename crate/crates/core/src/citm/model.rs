//! The symbolic tree-monad model.
//!
//! Objects describe finite carriers glued from finite sets, binary
//! coproducts, and a delay layer; a morphism `U → V` is evaluated
//! contravariantly, as a function from elements of `V` to Σ-trees over
//! elements of `U` — the opposite-Kleisli reading of the term monad.  The
//! product of two objects is their disjoint union on the element side,
//! and the elements of `▶X` are the *operation-rooted* trees over elements
//! of `X`, so every morphism out of `▶X × Y` is guarded by construction:
//! each recursive reference sits at least one operation deep.  That makes
//! the dagger total: it unfolds the body, grafting recursive calls into the
//! delayed chunks, and every unfolding buys at least one more level of the
//! result, so evaluation to a fixed depth terminates.
//!
//! All evaluation is budgeted by a depth `fuel`: results are only trusted —
//! and only compared — up to that depth, with `□` marking the horizon.  The
//! budget is positional: content sitting `d` levels below the result root is
//! computed with `fuel − d` levels of budget, so an evaluation materialises
//! exactly the depth-`fuel` ball it is trusted for and nothing more.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cat::{
    shape_err, times, CatError, CatResult, GuardedCategory, ObjRole, UniformityDagger,
    UniformityTrace,
};
use crate::laws::fnv64;
use crate::seeding::{mix, rng_from};

use super::tree::{IdealMonadStructure, Signature, SigmaTree};

/// Size bounds for random generation.
#[derive(Debug, Clone, Copy)]
pub struct CitmSizes {
    /// Largest finite carrier drawn for objects.
    pub max_obj: usize,
    /// Most operation symbols in a random signature.
    pub max_ops: usize,
    /// Largest operation arity in a random signature.
    pub max_arity: usize,
    /// Tallest tree a random morphism or element reaches per delay layer.
    pub max_height: usize,
}

impl Default for CitmSizes {
    fn default() -> Self {
        CitmSizes {
            max_obj: 4,
            max_ops: 3,
            max_arity: 2,
            max_height: 3,
        }
    }
}

/// An object: a finite carrier description.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CitmObj {
    /// A finite set `{0, …, n−1}`; `Fin(0)` is the terminal object here.
    Fin(usize),
    /// The product of the two sides (their element sets are juxtaposed).
    Sum(Box<CitmObj>, Box<CitmObj>),
    /// The delay: elements are operation-rooted trees over the inner object.
    Delay(Box<CitmObj>),
}

/// An element of an object's carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Fin(usize),
    Inl(Box<Elem>),
    Inr(Box<Elem>),
    Del(Box<SigmaTree<Elem>>),
}

/// A morphism as a symbolic expression, evaluated on demand.
#[derive(Debug, Clone, PartialEq)]
pub enum CitmMor {
    Id(CitmObj),
    /// Diagrammatic composite: first the left, then the right.
    Comp(Box<CitmMor>, Box<CitmMor>),
    Pair(Box<CitmMor>, Box<CitmMor>),
    ProjL(CitmObj, CitmObj),
    ProjR(CitmObj, CitmObj),
    Bang(CitmObj),
    DelayMor(Box<CitmMor>),
    Point(CitmObj),
    Dagger {
        x: CitmObj,
        y: CitmObj,
        tag: u64,
        f: Box<CitmMor>,
    },
    /// A finite table: one tree over the domain per element of a `Fin` codomain.
    Base {
        dom: CitmObj,
        cod: CitmObj,
        table: Vec<SigmaTree<Elem>>,
    },
    /// A deterministic pseudo-random function of the evaluated element.
    Random {
        dom: CitmObj,
        cod: CitmObj,
        salt: u64,
        height: usize,
    },
}

impl CitmMor {
    fn dom_obj(&self) -> CitmObj {
        match self {
            CitmMor::Id(a) | CitmMor::Bang(a) | CitmMor::Point(a) => a.clone(),
            CitmMor::Comp(f, _) => f.dom_obj(),
            CitmMor::Pair(f, _) => f.dom_obj(),
            CitmMor::ProjL(a, b) | CitmMor::ProjR(a, b) => {
                CitmObj::Sum(Box::new(a.clone()), Box::new(b.clone()))
            }
            CitmMor::DelayMor(f) => CitmObj::Delay(Box::new(f.dom_obj())),
            CitmMor::Dagger { y, .. } => y.clone(),
            CitmMor::Base { dom, .. } | CitmMor::Random { dom, .. } => dom.clone(),
        }
    }

    fn cod_obj(&self) -> CitmObj {
        match self {
            CitmMor::Id(a) => a.clone(),
            CitmMor::Comp(_, g) => g.cod_obj(),
            CitmMor::Pair(f, g) => CitmObj::Sum(Box::new(f.cod_obj()), Box::new(g.cod_obj())),
            CitmMor::ProjL(a, _) => a.clone(),
            CitmMor::ProjR(_, b) => b.clone(),
            CitmMor::Bang(_) => CitmObj::Fin(0),
            CitmMor::DelayMor(f) => CitmObj::Delay(Box::new(f.cod_obj())),
            CitmMor::Point(a) => CitmObj::Delay(Box::new(a.clone())),
            CitmMor::Dagger { x, .. } => x.clone(),
            CitmMor::Base { cod, .. } | CitmMor::Random { cod, .. } => cod.clone(),
        }
    }
}

/// Per-evaluation memo for dagger unfoldings.
#[derive(Default)]
struct EvalCtx {
    memo: HashMap<(u64, u32, Elem), SigmaTree<Elem>>,
}

/// Deterministic structural hash of an element, used to give hash-seeded
/// random morphisms a stable value at each input without going through a
/// rendered string.
fn elem_fingerprint(e: &Elem) -> u64 {
    match e {
        Elem::Fin(i) => mix(&[0xf17, *i as u64]),
        Elem::Inl(x) => mix(&[0x1e57, elem_fingerprint(x)]),
        Elem::Inr(x) => mix(&[0x2157, elem_fingerprint(x)]),
        Elem::Del(t) => mix(&[0xde1a7, tree_fingerprint(t)]),
    }
}

fn tree_fingerprint(t: &SigmaTree<Elem>) -> u64 {
    match t {
        SigmaTree::Cut => 0x9e3779b97f4a7c15,
        SigmaTree::Leaf(e) => mix(&[0x1eaf, elem_fingerprint(e)]),
        SigmaTree::Op(op, args) => {
            let mut h = mix(&[0x0b5, *op as u64]);
            for a in args {
                h = mix(&[h, tree_fingerprint(a)]);
            }
            h
        }
    }
}

/// The model: a signature, an evaluation depth, and generation bounds.
#[derive(Debug, Clone)]
pub struct CitmModel {
    sig: Signature,
    depth: u32,
    sizes: CitmSizes,
}

impl CitmModel {
    pub fn new(sig: Signature, depth: u32, sizes: CitmSizes) -> Self {
        CitmModel { sig, depth, sizes }
    }

    /// A model over a random signature (always guard-capable).
    pub fn with_random_signature(depth: u32, sizes: &CitmSizes, rng: &mut ChaCha8Rng) -> Self {
        let sig = Signature::random(sizes.max_ops, sizes.max_arity, rng);
        CitmModel {
            sig,
            depth,
            sizes: *sizes,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    fn ims(&self) -> IdealMonadStructure<'_> {
        IdealMonadStructure::new(&self.sig)
    }

    /// Whether the carrier has any element at all.
    pub fn el_nonempty(&self, a: &CitmObj) -> bool {
        match a {
            CitmObj::Fin(n) => *n > 0,
            CitmObj::Sum(l, r) => self.el_nonempty(l) || self.el_nonempty(r),
            CitmObj::Delay(x) => {
                self.sig.constant().is_some()
                    || (self.sig.guard_op().is_some() && self.el_nonempty(x))
            }
        }
    }

    /// All elements, when there are few enough to list.
    fn el_enumerate(&self, a: &CitmObj) -> Option<Vec<Elem>> {
        const CAP: usize = 16;
        match a {
            CitmObj::Fin(n) => (*n <= CAP).then(|| (0..*n).map(Elem::Fin).collect()),
            CitmObj::Sum(l, r) => {
                let vl = self.el_enumerate(l)?;
                let vr = self.el_enumerate(r)?;
                (vl.len() + vr.len() <= CAP).then(|| {
                    vl.into_iter()
                        .map(|e| Elem::Inl(Box::new(e)))
                        .chain(vr.into_iter().map(|e| Elem::Inr(Box::new(e))))
                        .collect()
                })
            }
            CitmObj::Delay(_) if !self.el_nonempty(a) => Some(Vec::new()),
            CitmObj::Delay(_) if self.sig.guard_op().is_none() => Some(
                (0..self.sig.len())
                    .map(|c| Elem::Del(Box::new(SigmaTree::Op(c, vec![]))))
                    .collect(),
            ),
            CitmObj::Delay(_) => None,
        }
    }

    /// One random element, respecting the per-layer height budget.
    pub fn random_elem(&self, a: &CitmObj, rng: &mut ChaCha8Rng) -> Option<Elem> {
        match a {
            CitmObj::Fin(0) => None,
            CitmObj::Fin(n) => Some(Elem::Fin(rng.gen_range(0..*n))),
            CitmObj::Sum(l, r) => {
                let (nl, nr) = (self.el_nonempty(l), self.el_nonempty(r));
                let left = match (nl, nr) {
                    (true, true) => rng.gen_bool(0.5),
                    (true, false) => true,
                    (false, true) => false,
                    (false, false) => return None,
                };
                if left {
                    self.random_elem(l, rng).map(|e| Elem::Inl(Box::new(e)))
                } else {
                    self.random_elem(r, rng).map(|e| Elem::Inr(Box::new(e)))
                }
            }
            CitmObj::Delay(x) => {
                let leaves = |rng: &mut ChaCha8Rng| self.random_elem(x, rng);
                self.ims()
                    .random_ideal(&leaves, self.sizes.max_height, rng)
                    .map(|t| Elem::Del(Box::new(t)))
            }
        }
    }

    /// Whether `e` inhabits `a` (used to validate hand-built tables).
    pub fn el_contains(&self, a: &CitmObj, e: &Elem) -> bool {
        match (a, e) {
            (CitmObj::Fin(n), Elem::Fin(i)) => i < n,
            (CitmObj::Sum(l, _), Elem::Inl(x)) => self.el_contains(l, x),
            (CitmObj::Sum(_, r), Elem::Inr(x)) => self.el_contains(r, x),
            (CitmObj::Delay(x), Elem::Del(t)) => {
                t.is_op_rooted() && self.ims().well_formed(t) && self.tree_leaves_in(x, t)
            }
            _ => false,
        }
    }

    fn tree_leaves_in(&self, a: &CitmObj, t: &SigmaTree<Elem>) -> bool {
        match t {
            SigmaTree::Cut => true,
            SigmaTree::Leaf(e) => self.el_contains(a, e),
            SigmaTree::Op(_, args) => args.iter().all(|s| self.tree_leaves_in(a, s)),
        }
    }

    /// Validating constructor for finite tables.
    pub fn base_mor(
        &self,
        dom: &CitmObj,
        cod: &CitmObj,
        table: Vec<SigmaTree<Elem>>,
    ) -> CatResult<CitmMor> {
        let CitmObj::Fin(n) = cod else {
            return Err(CatError::Structure(
                "tables need a finite codomain".to_string(),
            ));
        };
        if table.len() != *n {
            return Err(shape_err("base_mor", n, table.len()));
        }
        for t in &table {
            if !self.ims().well_formed(t) || !self.tree_leaves_in(dom, t) {
                return Err(CatError::Structure(
                    "table entry escapes the domain carrier".to_string(),
                ));
            }
        }
        Ok(CitmMor::Base {
            dom: dom.clone(),
            cod: cod.clone(),
            table,
        })
    }

    /// Public evaluation at the model depth: apply `m : U → V` to an element
    /// of `V`, producing a Σ-tree over elements of `U`, trusted to `depth`.
    pub fn apply(&self, m: &CitmMor, e: &Elem) -> SigmaTree<Elem> {
        self.apply_at(m, e, self.depth)
    }

    /// Evaluation at an explicit depth budget.
    pub fn apply_at(&self, m: &CitmMor, e: &Elem, fuel: u32) -> SigmaTree<Elem> {
        let mut ctx = EvalCtx::default();
        self.eval(m, e, fuel, &mut ctx)
    }

    /// Graft `f`'s value onto every leaf of an intermediate tree.  `depth`
    /// is the node's distance from the result root: a leaf that far down
    /// only deserves `fuel − depth` levels of content, and nodes at or past
    /// the budget are cut outright, so intermediates never outgrow the
    /// depth-`fuel` ball.
    fn graft(
        &self,
        f: &CitmMor,
        t: &SigmaTree<Elem>,
        fuel: u32,
        depth: u32,
        ctx: &mut EvalCtx,
    ) -> SigmaTree<Elem> {
        if depth >= fuel {
            return SigmaTree::Cut;
        }
        match t {
            SigmaTree::Cut => SigmaTree::Cut,
            SigmaTree::Leaf(v) => self.eval(f, v, fuel - depth, ctx),
            SigmaTree::Op(op, args) => SigmaTree::Op(
                *op,
                args.iter()
                    .map(|a| self.graft(f, a, fuel, depth + 1, ctx))
                    .collect(),
            ),
        }
    }

    fn eval(&self, m: &CitmMor, e: &Elem, fuel: u32, ctx: &mut EvalCtx) -> SigmaTree<Elem> {
        if fuel == 0 {
            return SigmaTree::Cut;
        }
        match m {
            CitmMor::Id(_) => SigmaTree::Leaf(e.clone()),
            CitmMor::Comp(f, g) => {
                let mid = self.eval(g, e, fuel, ctx);
                self.graft(f, &mid, fuel, 0, ctx)
            }
            CitmMor::Pair(f, g) => match e {
                Elem::Inl(a) => self.eval(f, a, fuel, ctx),
                Elem::Inr(b) => self.eval(g, b, fuel, ctx),
                _ => panic!("pair evaluated off its codomain"),
            },
            CitmMor::ProjL(..) => SigmaTree::Leaf(Elem::Inl(Box::new(e.clone()))),
            CitmMor::ProjR(..) => SigmaTree::Leaf(Elem::Inr(Box::new(e.clone()))),
            CitmMor::Bang(_) => panic!("the terminal object has no elements to evaluate"),
            CitmMor::DelayMor(f) => {
                let Elem::Del(t) = e else {
                    panic!("delay evaluated off its codomain")
                };
                let grafted = self.graft(f, t, fuel, 0, ctx);
                SigmaTree::Leaf(Elem::Del(Box::new(grafted)))
            }
            CitmMor::Point(_) => {
                let Elem::Del(t) = e else {
                    panic!("point evaluated off its codomain")
                };
                t.truncate(fuel)
            }
            CitmMor::Dagger { tag, f, .. } => self.eval_dagger(f, *tag, e, fuel, ctx),
            CitmMor::Base { table, .. } => {
                let Elem::Fin(i) = e else {
                    panic!("table evaluated off its codomain")
                };
                table[*i].truncate(fuel)
            }
            CitmMor::Random {
                dom, salt, height, ..
            } => {
                let mut rng = rng_from(mix(&[*salt, elem_fingerprint(e)]));
                let leaves = |rng: &mut ChaCha8Rng| self.random_elem(dom, rng);
                self.ims()
                    .random_tree(&leaves, *height, &mut rng)
                    .expect("random morphism over an uninhabitable domain")
                    .truncate(fuel)
            }
        }
    }

    /// Unfold a dagger at element `x` with `fuel` levels of budget.  The
    /// recursive occurrences all sit inside operation-rooted chunks, so
    /// every splice lands strictly deeper than its caller and the budget
    /// genuinely shrinks; memoisation keeps repeated elements cheap.
    fn eval_dagger(
        &self,
        f: &CitmMor,
        tag: u64,
        x: &Elem,
        fuel: u32,
        ctx: &mut EvalCtx,
    ) -> SigmaTree<Elem> {
        if fuel == 0 {
            return SigmaTree::Cut;
        }
        let key = (tag, fuel, x.clone());
        if let Some(t) = ctx.memo.get(&key) {
            return t.clone();
        }
        let body = self.eval(f, x, fuel, ctx);
        let out = self.expand_body(f, tag, &body, fuel, 0, ctx);
        ctx.memo.insert(key, out.clone());
        out
    }

    /// Rewrite the body's leaves: parameters stay, delayed chunks open up
    /// and their payload leaves re-enter the dagger with whatever budget is
    /// left at their depth.  `depth` is the node's distance from the result
    /// root; anything at or past the budget is cut.
    fn expand_body(
        &self,
        f: &CitmMor,
        tag: u64,
        body: &SigmaTree<Elem>,
        fuel: u32,
        depth: u32,
        ctx: &mut EvalCtx,
    ) -> SigmaTree<Elem> {
        if depth >= fuel {
            return SigmaTree::Cut;
        }
        match body {
            SigmaTree::Cut => SigmaTree::Cut,
            SigmaTree::Op(op, args) => SigmaTree::Op(
                *op,
                args.iter()
                    .map(|a| self.expand_body(f, tag, a, fuel, depth + 1, ctx))
                    .collect(),
            ),
            SigmaTree::Leaf(Elem::Inr(y)) => SigmaTree::Leaf((**y).clone()),
            SigmaTree::Leaf(Elem::Inl(dx)) => {
                let Elem::Del(t) = &**dx else {
                    panic!("delayed chunk is not a tree")
                };
                self.expand_payload(f, tag, t, fuel, depth, ctx)
            }
            SigmaTree::Leaf(_) => panic!("dagger body leaf is not a sum element"),
        }
    }

    fn expand_payload(
        &self,
        f: &CitmMor,
        tag: u64,
        t: &SigmaTree<Elem>,
        fuel: u32,
        depth: u32,
        ctx: &mut EvalCtx,
    ) -> SigmaTree<Elem> {
        if depth >= fuel {
            return SigmaTree::Cut;
        }
        match t {
            SigmaTree::Cut => SigmaTree::Cut,
            // `depth.max(1)`: payloads are operation-rooted, so a recursive
            // leaf always sits at depth ≥ 1; the floor keeps the budget
            // strictly shrinking even on malformed input.
            SigmaTree::Leaf(x2) => self.eval_dagger(f, tag, x2, fuel - depth.max(1), ctx),
            SigmaTree::Op(op, args) => SigmaTree::Op(
                *op,
                args.iter()
                    .map(|a| self.expand_payload(f, tag, a, fuel, depth + 1, ctx))
                    .collect(),
            ),
        }
    }

    /// Deterministic probe elements for extensional comparison: exhaustive
    /// when the carrier is small, otherwise a seeded sample.
    fn test_elements(&self, a: &CitmObj) -> Vec<Elem> {
        if let Some(all) = self.el_enumerate(a) {
            return all;
        }
        let mut rng = rng_from(mix(&[fnv64(&format!("{a:?}")), 0x7e57]));
        let mut out: Vec<Elem> = Vec::new();
        for _ in 0..24 {
            if out.len() >= 8 {
                break;
            }
            if let Some(e) = self.random_elem(a, &mut rng) {
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        out
    }
}

impl Default for CitmModel {
    fn default() -> Self {
        let sig = Signature::new(vec![("*".to_string(), 2), ("c".to_string(), 0)])
            .expect("static signature");
        CitmModel::new(sig, 8, CitmSizes::default())
    }
}

impl GuardedCategory for CitmModel {
    type Obj = CitmObj;
    type Mor = CitmMor;

    fn name(&self) -> &'static str {
        "citm"
    }

    fn terminal(&self) -> CitmObj {
        CitmObj::Fin(0)
    }

    fn product(&self, a: &CitmObj, b: &CitmObj) -> CitmObj {
        CitmObj::Sum(Box::new(a.clone()), Box::new(b.clone()))
    }

    fn id(&self, a: &CitmObj) -> CitmMor {
        CitmMor::Id(a.clone())
    }

    fn compose(&self, f: &CitmMor, g: &CitmMor) -> CatResult<CitmMor> {
        if f.cod_obj() != g.dom_obj() {
            return Err(shape_err("compose", g.dom_obj(), f.cod_obj()));
        }
        Ok(CitmMor::Comp(Box::new(f.clone()), Box::new(g.clone())))
    }

    fn pair(&self, f: &CitmMor, g: &CitmMor) -> CatResult<CitmMor> {
        if f.dom_obj() != g.dom_obj() {
            return Err(shape_err("pair", f.dom_obj(), g.dom_obj()));
        }
        Ok(CitmMor::Pair(Box::new(f.clone()), Box::new(g.clone())))
    }

    fn proj_left(&self, a: &CitmObj, b: &CitmObj) -> CitmMor {
        CitmMor::ProjL(a.clone(), b.clone())
    }

    fn proj_right(&self, a: &CitmObj, b: &CitmObj) -> CitmMor {
        CitmMor::ProjR(a.clone(), b.clone())
    }

    fn bang(&self, a: &CitmObj) -> CitmMor {
        CitmMor::Bang(a.clone())
    }

    fn dom(&self, f: &CitmMor) -> CitmObj {
        f.dom_obj()
    }

    fn cod(&self, f: &CitmMor) -> CitmObj {
        f.cod_obj()
    }

    fn delay_obj(&self, a: &CitmObj) -> CitmObj {
        CitmObj::Delay(Box::new(a.clone()))
    }

    fn delay_mor(&self, f: &CitmMor) -> CitmMor {
        CitmMor::DelayMor(Box::new(f.clone()))
    }

    fn point(&self, a: &CitmObj) -> CitmMor {
        CitmMor::Point(a.clone())
    }

    fn dagger(&self, x: &CitmObj, y: &CitmObj, f: &CitmMor) -> CatResult<CitmMor> {
        let expect = self.product(&self.delay_obj(x), y);
        if f.dom_obj() != expect || f.cod_obj() != *x {
            return Err(shape_err(
                "dagger",
                (&expect, x),
                (f.dom_obj(), f.cod_obj()),
            ));
        }
        Ok(CitmMor::Dagger {
            x: x.clone(),
            y: y.clone(),
            tag: fnv64(&format!("{f:?}")),
            f: Box::new(f.clone()),
        })
    }

    fn unique_dagger(&self) -> bool {
        true
    }

    fn preserves_products(&self) -> bool {
        false
    }

    fn can_inverse(&self, _a: &CitmObj, _b: &CitmObj) -> Option<CitmMor> {
        // ▶(A×B) mixes both element kinds inside one chunk; the canonical
        // comparison map is not invertible here
        None
    }

    fn well_pointed(&self) -> bool {
        false
    }

    fn mor_equal(&self, f: &CitmMor, g: &CitmMor) -> bool {
        if f.dom_obj() != g.dom_obj() || f.cod_obj() != g.cod_obj() {
            return false;
        }
        let k = self.depth;
        self.test_elements(&f.cod_obj()).iter().all(|e| {
            self.apply_at(f, e, k).truncate(k) == self.apply_at(g, e, k).truncate(k)
        })
    }

    fn hom_enumerate(&self, _a: &CitmObj, _b: &CitmObj) -> Option<Vec<CitmMor>> {
        None
    }

    fn is_bijective(&self, _f: &CitmMor) -> Option<bool> {
        None
    }

    fn random_obj(&self, role: ObjRole, rng: &mut ChaCha8Rng) -> CitmObj {
        match role {
            ObjRole::State => {
                if self.sizes.max_obj >= 2 && rng.gen_bool(0.15) {
                    let a = rng.gen_range(1..self.sizes.max_obj);
                    let b = rng.gen_range(1..=(self.sizes.max_obj - a).max(1));
                    CitmObj::Sum(Box::new(CitmObj::Fin(a)), Box::new(CitmObj::Fin(b)))
                } else {
                    CitmObj::Fin(rng.gen_range(1..=self.sizes.max_obj))
                }
            }
            ObjRole::Param => {
                if rng.gen_bool(0.3) {
                    CitmObj::Fin(1)
                } else {
                    CitmObj::Fin(rng.gen_range(1..=self.sizes.max_obj))
                }
            }
        }
    }

    fn random_mor(&self, a: &CitmObj, b: &CitmObj, rng: &mut ChaCha8Rng) -> CatResult<CitmMor> {
        if self.el_nonempty(b) && !self.el_nonempty(a) && self.sig.constant().is_none() {
            return Err(CatError::EmptyHom {
                from: self.describe_obj(a),
                to: self.describe_obj(b),
            });
        }
        Ok(CitmMor::Random {
            dom: a.clone(),
            cod: b.clone(),
            salt: rng.gen(),
            height: rng.gen_range(1..=self.sizes.max_height.max(1)),
        })
    }

    fn describe_mor(&self, f: &CitmMor) -> String {
        fn go(m: &CitmMor) -> String {
            match m {
                CitmMor::Id(_) => "id".to_string(),
                CitmMor::Comp(f, g) => format!("({};{})", go(f), go(g)),
                CitmMor::Pair(f, g) => format!("⟨{},{}⟩", go(f), go(g)),
                CitmMor::ProjL(..) => "πl".to_string(),
                CitmMor::ProjR(..) => "πr".to_string(),
                CitmMor::Bang(_) => "!".to_string(),
                CitmMor::DelayMor(f) => format!("▶{}", go(f)),
                CitmMor::Point(_) => "p".to_string(),
                CitmMor::Dagger { f, .. } => format!("({})†", go(f)),
                CitmMor::Base { table, .. } => format!("table[{}]", table.len()),
                CitmMor::Random { salt, .. } => format!("rnd#{:04x}", salt & 0xffff),
            }
        }
        let s = go(f);
        if s.len() > 160 {
            format!("{}…", &s[..s.char_indices().take(159).last().map_or(0, |(i, c)| i + c.len_utf8())])
        } else {
            s
        }
    }

    fn describe_obj(&self, a: &CitmObj) -> String {
        match a {
            CitmObj::Fin(n) => n.to_string(),
            CitmObj::Sum(l, r) => format!("({}×{})", self.describe_obj(l), self.describe_obj(r)),
            CitmObj::Delay(x) => format!("▶{}", self.describe_obj(x)),
        }
    }

    fn uniformity_dagger_instance(&self, rng: &mut ChaCha8Rng) -> Option<UniformityDagger<Self>> {
        let n = rng.gen_range(1..=self.sizes.max_obj);
        let np = rng.gen_range(1..=n);
        let x = CitmObj::Fin(n);
        let x_prime = CitmObj::Fin(np);
        // a random injection x' ↪ x and a section of it
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..np {
            let j = rng.gen_range(i..n);
            pool.swap(i, j);
        }
        let u = &pool[..np];
        let h_table = (0..np)
            .map(|i| SigmaTree::Leaf(Elem::Fin(u[i])))
            .collect();
        let h = self.base_mor(&x, &x_prime, h_table).ok()?;
        let j_table = (0..n)
            .map(|m| SigmaTree::Leaf(Elem::Fin(u.iter().position(|&v| v == m).unwrap_or(0))))
            .collect();
        let j = self.base_mor(&x_prime, &x, j_table).ok()?;
        let y = self.random_obj(ObjRole::Param, rng);
        let gdom = self.product(&self.delay_obj(&x_prime), &y);
        let g = self.random_mor(&gdom, &x_prime, rng).ok()?;
        // f := (▶h × id); g; j — then f;h = (▶h × id);g because j;h = id
        let side = times(self, &self.delay_mor(&h), &self.id(&y)).ok()?;
        let f = self
            .compose(&self.compose(&side, &g).ok()?, &j)
            .ok()?;
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
        let n = rng.gen_range(1..=self.sizes.max_obj);
        let np = rng.gen_range(1..=n);
        let x = CitmObj::Fin(n);
        let x_prime = CitmObj::Fin(np);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..np {
            let j = rng.gen_range(i..n);
            pool.swap(i, j);
        }
        let u = &pool[..np];
        let h_table = (0..np)
            .map(|i| SigmaTree::Leaf(Elem::Fin(u[i])))
            .collect();
        let h = self.base_mor(&x, &x_prime, h_table).ok()?;
        let j_table = (0..n)
            .map(|m| SigmaTree::Leaf(Elem::Fin(u.iter().position(|&v| v == m).unwrap_or(0))))
            .collect();
        let j = self.base_mor(&x_prime, &x, j_table).ok()?;
        let a = self.random_obj(ObjRole::Param, rng);
        let b = self.random_obj(ObjRole::Param, rng);
        let fp_dom = self.product(&self.delay_obj(&x_prime), &a);
        let fp_cod = self.product(&x_prime, &b);
        let f_prime = self.random_mor(&fp_dom, &fp_cod, rng).ok()?;
        let left = times(self, &self.delay_mor(&h), &self.id(&a)).ok()?;
        let right = times(self, &j, &self.id(&b)).ok()?;
        let f = self
            .compose(&self.compose(&left, &f_prime).ok()?, &right)
            .ok()?;
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{canonical, check_guarded_square};

    fn unary_model() -> CitmModel {
        let sig = Signature::new(vec![("s".to_string(), 1)]).unwrap();
        CitmModel::new(sig, 6, CitmSizes::default())
    }

    fn chain(n: usize, tail: SigmaTree<Elem>) -> SigmaTree<Elem> {
        (0..n).fold(tail, |t, _| SigmaTree::Op(0, vec![t]))
    }

    #[test]
    fn dagger_unfolds_a_unary_loop_to_depth() {
        // x = s(x) over a one-point state: the solution is the s-chain
        let m = unary_model();
        let x = CitmObj::Fin(1);
        let y = CitmObj::Fin(1);
        let dom = m.product(&m.delay_obj(&x), &y);
        let body = SigmaTree::Leaf(Elem::Inl(Box::new(Elem::Del(Box::new(SigmaTree::Op(
            0,
            vec![SigmaTree::Leaf(Elem::Fin(0))],
        ))))));
        let f = m.base_mor(&dom, &x, vec![body]).unwrap();
        let s = m.dagger(&x, &y, &f).unwrap();
        let t = m.apply(&s, &Elem::Fin(0));
        assert_eq!(t, chain(6, SigmaTree::Cut));
    }

    #[test]
    fn dagger_satisfies_the_square_on_random_bodies() {
        let mut rng = rng_from(23);
        for trial in 0..30 {
            let m = CitmModel::with_random_signature(6, &CitmSizes::default(), &mut rng);
            let x = m.random_obj(ObjRole::State, &mut rng);
            let y = m.random_obj(ObjRole::Param, &mut rng);
            let dom = m.product(&m.delay_obj(&x), &y);
            let f = m.random_mor(&dom, &x, &mut rng).unwrap();
            let s = m.dagger(&x, &y, &f).unwrap();
            assert!(
                check_guarded_square(&m, &x, &y, &f, &s).unwrap(),
                "square failed on trial {trial}"
            );
        }
    }

    #[test]
    fn delay_is_a_functor_and_point_is_natural() {
        let mut rng = rng_from(41);
        for _ in 0..25 {
            let m = CitmModel::with_random_signature(5, &CitmSizes::default(), &mut rng);
            let a = m.random_obj(ObjRole::State, &mut rng);
            let b = m.random_obj(ObjRole::State, &mut rng);
            let c = m.random_obj(ObjRole::Param, &mut rng);
            let f = m.random_mor(&a, &b, &mut rng).unwrap();
            let g = m.random_mor(&b, &c, &mut rng).unwrap();
            // identity and composition
            assert!(m.mor_equal(&m.delay_mor(&m.id(&a)), &m.id(&m.delay_obj(&a))));
            let fg = m.compose(&f, &g).unwrap();
            let dfg = m.compose(&m.delay_mor(&f), &m.delay_mor(&g)).unwrap();
            assert!(m.mor_equal(&m.delay_mor(&fg), &dfg));
            // naturality of the point
            let lhs = m.compose(&f, &m.point(&b)).unwrap();
            let rhs = m.compose(&m.point(&a), &m.delay_mor(&f)).unwrap();
            assert!(m.mor_equal(&lhs, &rhs));
        }
    }

    #[test]
    fn equality_sees_shallow_but_not_deep_differences() {
        let m = unary_model(); // depth 6
        let x = CitmObj::Fin(1);
        let one = CitmObj::Fin(1);
        let deep = |n: usize| {
            m.base_mor(&x, &one, vec![chain(n, SigmaTree::Leaf(Elem::Fin(0)))])
                .unwrap()
        };
        // difference at depth 4 < 6: visible
        assert!(!m.mor_equal(&deep(4), &deep(9)));
        // both beyond depth 6: indistinguishable at this budget
        assert!(m.mor_equal(&deep(7), &deep(9)));
    }

    #[test]
    fn projections_and_pairing_compute() {
        let m = CitmModel::default();
        let a = CitmObj::Fin(2);
        let b = CitmObj::Fin(3);
        let pl = m.proj_left(&a, &b);
        let t = m.apply(&pl, &Elem::Fin(1));
        assert_eq!(t, SigmaTree::Leaf(Elem::Inl(Box::new(Elem::Fin(1)))));
        // ⟨πl, πr⟩ = id on the product, extensionally
        let pr = m.proj_right(&a, &b);
        let both = m.pair(&pl, &pr).unwrap();
        let prod = m.product(&a, &b);
        assert!(m.mor_equal(&both, &m.id(&prod)));
    }

    #[test]
    fn can_is_not_invertible_but_still_evaluates() {
        let m = CitmModel::default();
        let a = CitmObj::Fin(1);
        let b = CitmObj::Fin(1);
        assert!(m.can_inverse(&a, &b).is_none());
        let can = canonical(&m, &a, &b).unwrap();
        let e = m
            .random_elem(&m.delay_obj(&a), &mut rng_from(7))
            .unwrap();
        let t = m.apply(&can, &Elem::Inl(Box::new(e)));
        assert!(matches!(t, SigmaTree::Leaf(Elem::Del(_))));
    }

    #[test]
    fn uniformity_premise_is_exact() {
        let mut rng = rng_from(91);
        let mut good = 0;
        for _ in 0..40 {
            let m = CitmModel::with_random_signature(5, &CitmSizes::default(), &mut rng);
            let Some(u) = m.uniformity_dagger_instance(&mut rng) else {
                continue;
            };
            let side = times(&m, &m.delay_mor(&u.h), &m.id(&u.y)).unwrap();
            let lhs = m.compose(&u.f, &u.h).unwrap();
            let rhs = m.compose(&side, &u.g).unwrap();
            assert!(m.mor_equal(&lhs, &rhs));
            good += 1;
        }
        assert!(good >= 30);
    }

    #[test]
    fn random_morphisms_are_replayable() {
        let m = CitmModel::default();
        let a = CitmObj::Fin(3);
        let b = CitmObj::Fin(2);
        let f1 = m.random_mor(&a, &b, &mut rng_from(5)).unwrap();
        let f2 = m.random_mor(&a, &b, &mut rng_from(5)).unwrap();
        assert_eq!(f1, f2);
        let e = Elem::Fin(1);
        assert_eq!(m.apply(&f1, &e), m.apply(&f2, &e));
    }

    #[test]
    fn element_validation_guards_tables() {
        let m = unary_model();
        let x = CitmObj::Fin(2);
        // leaf out of range
        let bad = m.base_mor(&x, &CitmObj::Fin(1), vec![SigmaTree::Leaf(Elem::Fin(5))]);
        assert!(bad.is_err());
        // wrong table length
        let bad = m.base_mor(&x, &CitmObj::Fin(2), vec![SigmaTree::Cut]);
        assert!(bad.is_err());
        // non-Fin codomain
        let bad = m.base_mor(&x, &m.delay_obj(&x), vec![]);
        assert!(bad.is_err());
    }
}
