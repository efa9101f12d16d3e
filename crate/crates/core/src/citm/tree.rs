//! Finite Σ-trees with a truncation marker.
//!
//! `SigmaTree<L>` is the free-monad carrier over a finite signature: leaves
//! draw from an arbitrary set `L`, inner nodes are operation symbols applied
//! at their declared arity, and `Cut` (printed `□`) marks a point below which
//! a tree has been cut off.  Truncation at depth `k` and substitution at the
//! leaves are the two moves everything else in this module family is built
//! from: solving a system is repeated substitution, and two trees count as
//! depth-`k` equal when their truncations agree node for node.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cat::{CatError, CatResult};

/// One operation symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpDecl {
    pub name: String,
    pub arity: usize,
}

/// A finite, validated signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<OpDecl>,
}

/// Characters that would collide with the term syntax.
pub(crate) fn valid_ident(s: &str) -> bool {
    !s.is_empty() && !s.contains(['(', ')', ',', ';', ':', '=', '□']) && !s.chars().any(char::is_whitespace)
}

impl Signature {
    /// Validating constructor: nonempty, unique, syntax-safe names.
    pub fn new(ops: Vec<(String, usize)>) -> CatResult<Self> {
        if ops.is_empty() {
            return Err(CatError::Parse("signature has no operations".to_string()));
        }
        for (i, (name, _)) in ops.iter().enumerate() {
            if !valid_ident(name) {
                return Err(CatError::Parse(format!("bad operation name `{name}`")));
            }
            if ops[..i].iter().any(|(n, _)| n == name) {
                return Err(CatError::Parse(format!("duplicate operation `{name}`")));
            }
        }
        Ok(Signature {
            ops: ops
                .into_iter()
                .map(|(name, arity)| OpDecl { name, arity })
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].arity
    }

    pub fn op_name(&self, op: usize) -> &str {
        &self.ops[op].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    /// Index of some constant (arity-0) symbol, if the signature has one.
    pub fn constant(&self) -> Option<usize> {
        self.ops.iter().position(|o| o.arity == 0)
    }

    /// Index of some positive-arity symbol, if the signature has one.
    pub fn guard_op(&self) -> Option<usize> {
        self.ops.iter().position(|o| o.arity > 0)
    }

    /// A random signature with at least one positive-arity operation and —
    /// whenever it has room for two symbols — at least one constant.
    pub fn random(max_ops: usize, max_arity: usize, rng: &mut ChaCha8Rng) -> Signature {
        const POSITIVE: [&str; 5] = ["*", "f", "g", "+", "h"];
        const CONSTANT: [&str; 4] = ["c", "d", "e", "k"];
        let n = rng.gen_range(1..=max_ops.max(1));
        let mut ops = Vec::with_capacity(n);
        let mut np = 0;
        let mut nc = 0;
        for i in 0..n {
            // slot 0 is always a guard-capable symbol; slot 1 a constant
            let arity = if i == 0 {
                rng.gen_range(1..=max_arity.max(1))
            } else if i == 1 {
                0
            } else {
                rng.gen_range(0..=max_arity.max(1))
            };
            let name = if arity == 0 {
                let s = CONSTANT[nc % CONSTANT.len()].to_string();
                nc += 1;
                s
            } else {
                let s = POSITIVE[np % POSITIVE.len()].to_string();
                np += 1;
                s
            };
            ops.push((name, arity));
        }
        Signature::new(ops).expect("pool names are valid and distinct")
    }
}

/// A Σ-tree over leaves of type `L`, possibly cut off below some nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SigmaTree<L> {
    Leaf(L),
    Op(usize, Vec<SigmaTree<L>>),
    /// Truncation marker: the tree continues here but we no longer care how.
    Cut,
}

impl<L> SigmaTree<L> {
    /// Height: leaves and cuts are 0, an operation node adds one level.
    pub fn height(&self) -> usize {
        match self {
            SigmaTree::Leaf(_) | SigmaTree::Cut => 0,
            SigmaTree::Op(_, args) => 1 + args.iter().map(SigmaTree::height).max().unwrap_or(0),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            SigmaTree::Leaf(_) | SigmaTree::Cut => 1,
            SigmaTree::Op(_, args) => 1 + args.iter().map(SigmaTree::node_count).sum::<usize>(),
        }
    }

    pub fn is_op_rooted(&self) -> bool {
        matches!(self, SigmaTree::Op(..))
    }

    /// Replace every node at depth `k` (and everything below it) by `Cut`.
    pub fn truncate(&self, k: u32) -> SigmaTree<L>
    where
        L: Clone,
    {
        if k == 0 {
            return SigmaTree::Cut;
        }
        match self {
            SigmaTree::Leaf(l) => SigmaTree::Leaf(l.clone()),
            SigmaTree::Cut => SigmaTree::Cut,
            SigmaTree::Op(op, args) => {
                SigmaTree::Op(*op, args.iter().map(|t| t.truncate(k - 1)).collect())
            }
        }
    }

    /// Monadic bind: graft a tree onto every leaf.
    pub fn bind<M>(&self, f: &impl Fn(&L) -> SigmaTree<M>) -> SigmaTree<M> {
        match self {
            SigmaTree::Leaf(l) => f(l),
            SigmaTree::Cut => SigmaTree::Cut,
            SigmaTree::Op(op, args) => {
                SigmaTree::Op(*op, args.iter().map(|t| t.bind(f)).collect())
            }
        }
    }

    /// Render with the display convention for depth-`k` approximations:
    /// `Cut` prints `□`, and any operation node at depth `k−1` or deeper
    /// collapses to `□` as well (its children could not be trusted);
    /// leaves print at every depth.
    pub fn render(&self, sig: &Signature, k: u32, leaf: &impl Fn(&L) -> String) -> String {
        fn go<L>(
            t: &SigmaTree<L>,
            d: u32,
            sig: &Signature,
            k: u32,
            leaf: &impl Fn(&L) -> String,
        ) -> String {
            match t {
                SigmaTree::Cut => "□".to_string(),
                SigmaTree::Leaf(l) => leaf(l),
                SigmaTree::Op(op, args) if args.is_empty() => sig.op_name(*op).to_string(),
                SigmaTree::Op(_, _) if d + 1 >= k => "□".to_string(),
                SigmaTree::Op(op, args) => {
                    let inner: Vec<String> =
                        args.iter().map(|a| go(a, d + 1, sig, k, leaf)).collect();
                    format!("{}({})", sig.op_name(*op), inner.join(","))
                }
            }
        }
        go(self, 0, sig, k, leaf)
    }
}

/// The (ideal) monad structure carried by Σ-trees: unit, bind, and the
/// embedding of operation-rooted trees.  Solving recursive systems and
/// evaluating the symbolic model both route through this.
#[derive(Debug, Clone, Copy)]
pub struct IdealMonadStructure<'s> {
    pub sig: &'s Signature,
}

impl<'s> IdealMonadStructure<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        IdealMonadStructure { sig }
    }

    /// Monad unit: a leaf.
    pub fn unit<L>(&self, l: L) -> SigmaTree<L> {
        SigmaTree::Leaf(l)
    }

    /// Build an operation node, enforcing the declared arity.
    pub fn op<L>(&self, op: usize, args: Vec<SigmaTree<L>>) -> CatResult<SigmaTree<L>> {
        if op >= self.sig.len() {
            return Err(CatError::Structure(format!("unknown operation #{op}")));
        }
        if args.len() != self.sig.arity(op) {
            return Err(CatError::Structure(format!(
                "`{}` expects {} arguments, got {}",
                self.sig.op_name(op),
                self.sig.arity(op),
                args.len()
            )));
        }
        Ok(SigmaTree::Op(op, args))
    }

    /// Kleisli extension, delegating to the carrier.
    pub fn bind<L, M>(
        &self,
        t: &SigmaTree<L>,
        f: &impl Fn(&L) -> SigmaTree<M>,
    ) -> SigmaTree<M> {
        t.bind(f)
    }

    /// Membership in the ideal: operation-rooted trees.
    pub fn is_ideal<L>(&self, t: &SigmaTree<L>) -> bool {
        t.is_op_rooted()
    }

    /// Arity-correctness of a whole tree against the signature.
    pub fn well_formed<L>(&self, t: &SigmaTree<L>) -> bool {
        match t {
            SigmaTree::Leaf(_) | SigmaTree::Cut => true,
            SigmaTree::Op(op, args) => {
                *op < self.sig.len()
                    && args.len() == self.sig.arity(*op)
                    && args.iter().all(|a| self.well_formed(a))
            }
        }
    }

    /// A random well-formed tree over the given leaf pool, at most `h` levels
    /// tall.  `None` when no tree exists (no leaves and no constants).
    pub fn random_tree<L: Clone>(
        &self,
        leaves: &impl Fn(&mut ChaCha8Rng) -> Option<L>,
        h: usize,
        rng: &mut ChaCha8Rng,
    ) -> Option<SigmaTree<L>> {
        let leaf_now = |rng: &mut ChaCha8Rng| leaves(rng).map(SigmaTree::Leaf);
        if h == 0 {
            return leaf_now(rng).or_else(|| self.sig.constant().map(|c| SigmaTree::Op(c, vec![])));
        }
        if rng.gen_bool(0.4) {
            if let Some(t) = leaf_now(rng) {
                return Some(t);
            }
        }
        let op = rng.gen_range(0..self.sig.len());
        let args: Option<Vec<_>> = (0..self.sig.arity(op))
            .map(|_| self.random_tree(leaves, h - 1, rng))
            .collect();
        match args {
            Some(args) => Some(SigmaTree::Op(op, args)),
            None => leaf_now(rng).or_else(|| self.sig.constant().map(|c| SigmaTree::Op(c, vec![]))),
        }
    }

    /// A random *operation-rooted* tree (a member of the ideal).
    pub fn random_ideal<L: Clone>(
        &self,
        leaves: &impl Fn(&mut ChaCha8Rng) -> Option<L>,
        h: usize,
        rng: &mut ChaCha8Rng,
    ) -> Option<SigmaTree<L>> {
        let op = rng.gen_range(0..self.sig.len());
        let op = if self.sig.arity(op) > 0 || self.sig.constant().is_some() {
            op
        } else {
            self.sig.guard_op()?
        };
        let args: Option<Vec<_>> = (0..self.sig.arity(op))
            .map(|_| self.random_tree(leaves, h.saturating_sub(1), rng))
            .collect();
        args.map(|args| SigmaTree::Op(op, args))
            .or_else(|| self.sig.constant().map(|c| SigmaTree::Op(c, vec![])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::rng_from;

    fn sig() -> Signature {
        Signature::new(vec![("*".to_string(), 2), ("c".to_string(), 0)]).unwrap()
    }

    #[test]
    fn signature_rejects_bad_names() {
        assert!(Signature::new(vec![("a b".to_string(), 1)]).is_err());
        assert!(Signature::new(vec![("f(".to_string(), 1)]).is_err());
        assert!(Signature::new(vec![]).is_err());
        assert!(Signature::new(vec![("f".to_string(), 1), ("f".to_string(), 0)]).is_err());
    }

    #[test]
    fn truncation_cuts_exactly_at_depth() {
        let s = sig();
        let m = IdealMonadStructure::new(&s);
        // *(*(c, x), c)
        let t = m
            .op(
                0,
                vec![
                    m.op(0, vec![m.op(1, vec![]).unwrap(), m.unit("x")]).unwrap(),
                    m.op(1, vec![]).unwrap(),
                ],
            )
            .unwrap();
        assert_eq!(t.truncate(0), SigmaTree::Cut);
        let t1 = t.truncate(1);
        assert_eq!(t1, SigmaTree::Op(0, vec![SigmaTree::Cut, SigmaTree::Cut]));
        let t2 = t.truncate(2);
        assert_eq!(t2.height(), 2);
        assert_eq!(t.truncate(9), t);
    }

    #[test]
    fn monad_laws_hold_exactly() {
        let s = sig();
        let m = IdealMonadStructure::new(&s);
        let mut rng = rng_from(3);
        let leaves = |rng: &mut ChaCha8Rng| Some(rng.gen_range(0u8..3));
        for _ in 0..50 {
            let t: SigmaTree<u8> = m.random_tree(&leaves, 3, &mut rng).unwrap();
            // right unit
            assert_eq!(t.bind(&|l| SigmaTree::Leaf(*l)), t);
            // left unit
            let f = |l: &u8| -> SigmaTree<u8> {
                if *l == 0 {
                    SigmaTree::Op(1, vec![])
                } else {
                    SigmaTree::Op(0, vec![SigmaTree::Leaf(*l), SigmaTree::Cut])
                }
            };
            let x = rng.gen_range(0u8..3);
            assert_eq!(m.unit(x).bind(&f), f(&x));
            // associativity
            let g = |l: &u8| -> SigmaTree<u8> { SigmaTree::Leaf(l.wrapping_mul(2)) };
            assert_eq!(t.bind(&f).bind(&g), t.bind(&|l| f(l).bind(&g)));
        }
    }

    #[test]
    fn render_collapses_deep_operations() {
        let s = sig();
        let m = IdealMonadStructure::new(&s);
        // chain *(*(*(y, c), c), c)
        let mut t = m.unit("y");
        for _ in 0..3 {
            t = m.op(0, vec![t, m.op(1, vec![]).unwrap()]).unwrap();
        }
        let txt = t.render(&s, 3, &|l| l.to_string());
        assert_eq!(txt, "*(*(□,c),c)");
        let full = t.render(&s, 9, &|l| l.to_string());
        assert_eq!(full, "*(*(*(y,c),c),c)");
    }

    #[test]
    fn random_signatures_always_allow_guards() {
        let mut rng = rng_from(9);
        for _ in 0..40 {
            let s = Signature::random(3, 2, &mut rng);
            assert!(s.guard_op().is_some());
            assert!(s.len() < 2 || s.constant().is_some());
        }
    }
}
