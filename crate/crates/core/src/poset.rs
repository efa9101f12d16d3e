//! Finite posets: validation, topological order, random generation, and the
//! JSON literal format shared by the presheaf base and poset fixtures.
//!
//! JSON shape: `{"elems": ["w0", ...], "leq": [["w0", "w1"], ...]}` where a
//! pair `[a, b]` asserts `a ≤ b`.  Reflexive pairs may be omitted; the loader
//! closes the relation transitively and then validates antisymmetry.

use serde::Deserialize;

use crate::cat::{CatError, CatResult};

/// A finite poset over element labels of type `T`.  The relation matrix is
/// reflexive, antisymmetric and transitive (enforced at construction).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poset<T> {
    elems: Vec<T>,
    /// Row-major `n × n` adjacency: `leq[i * n + j]` iff `elems[i] ≤ elems[j]`.
    leq: Vec<bool>,
}

impl<T: Clone + PartialEq + std::fmt::Debug> Poset<T> {
    /// Build from elements and a relation given as index pairs `(i, j)`
    /// meaning `elems[i] ≤ elems[j]`.  The reflexive-transitive closure is
    /// taken; antisymmetry violations are an error.
    pub fn new(elems: Vec<T>, pairs: &[(usize, usize)]) -> CatResult<Self> {
        let n = elems.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(CatError::Parse(format!(
                    "leq pair ({i}, {j}) out of range for {n} elements"
                )));
            }
            leq[i * n + j] = true;
        }
        // Floyd-Warshall style transitive closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(CatError::Structure(format!(
                        "antisymmetry violated between {:?} and {:?}",
                        elems[i], elems[j]
                    )));
                }
            }
        }
        Ok(Poset { elems, leq })
    }

    /// The discrete poset on the given elements.
    pub fn discrete(elems: Vec<T>) -> Self {
        Poset::new(elems, &[]).expect("discrete posets are always valid")
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[T] {
        &self.elems
    }

    pub fn elem(&self, i: usize) -> &T {
        &self.elems[i]
    }

    pub fn index_of(&self, t: &T) -> Option<usize> {
        self.elems.iter().position(|e| e == t)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.elems.len() + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// Indices strictly below `j`, ascending.
    pub fn strictly_below(&self, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.lt(i, j)).collect()
    }

    /// Indices of minimal elements.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.strictly_below(j).is_empty())
            .collect()
    }

    /// The least element, if the poset has one.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|j| self.leq(b, j)))
    }

    /// A topological (linear extension) order: every element appears after
    /// everything strictly below it.
    pub fn topo_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| ((0..n).filter(|&j| self.lt(j, i)).count(), i));
        order
    }

    /// Map labels, preserving the relation.
    pub fn map<U: Clone + PartialEq + std::fmt::Debug>(&self, f: impl Fn(&T) -> U) -> Poset<U> {
        Poset {
            elems: self.elems.iter().map(f).collect(),
            leq: self.leq.clone(),
        }
    }

    /// Componentwise-ordered product poset with pair labels built by `mk`.
    pub fn product_with<U, V>(
        &self,
        other: &Poset<U>,
        mk: impl Fn(&T, &U) -> V,
    ) -> Poset<V>
    where
        U: Clone + PartialEq + std::fmt::Debug,
        V: Clone + PartialEq + std::fmt::Debug,
    {
        let (n, m) = (self.len(), other.len());
        let mut elems = Vec::with_capacity(n * m);
        for a in &self.elems {
            for b in other.elems() {
                elems.push(mk(a, b));
            }
        }
        let total = n * m;
        let mut leq = vec![false; total * total];
        for i1 in 0..n {
            for j1 in 0..m {
                for i2 in 0..n {
                    for j2 in 0..m {
                        if self.leq(i1, i2) && other.leq(j1, j2) {
                            leq[(i1 * m + j1) * total + (i2 * m + j2)] = true;
                        }
                    }
                }
            }
        }
        Poset { elems, leq }
    }
}

#[derive(Deserialize)]
struct PosetJson {
    elems: Vec<String>,
    leq: Vec<(String, String)>,
}

/// Load a string-labelled poset from the JSON literal format.
pub fn poset_from_json(value: &serde_json::Value) -> CatResult<Poset<String>> {
    let parsed: PosetJson = serde_json::from_value(value.clone())
        .map_err(|e| CatError::Parse(format!("poset literal: {e}")))?;
    let mut pairs = Vec::new();
    for (a, b) in &parsed.leq {
        let find = |name: &String| {
            parsed
                .elems
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| CatError::Parse(format!("leq references unknown element `{name}`")))
        };
        pairs.push((find(a)?, find(b)?));
    }
    Poset::new(parsed.elems, &pairs)
}

/// The default poset family used by generators: chains of length 1–4, the
/// two-element antichain, the "vee" `0 < a, b`, and the diamond
/// `0 < a, b < 1`.
pub fn default_posets() -> Vec<Poset<String>> {
    let chain = |n: usize| {
        let elems: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::new(elems, &pairs).unwrap()
    };
    let antichain = Poset::discrete(vec!["w0".to_string(), "w1".to_string()]);
    let vee = Poset::new(
        vec!["w0".into(), "a".into(), "b".into()],
        &[(0, 1), (0, 2)],
    )
    .unwrap();
    let diamond = Poset::new(
        vec!["w0".into(), "a".into(), "b".into(), "w1".into()],
        &[(0, 1), (0, 2), (1, 3), (2, 3)],
    )
    .unwrap();
    vec![chain(1), chain(2), chain(3), chain(4), antichain, vee, diamond]
}

/// Posets with at most `max` elements from the default family.
pub fn default_posets_up_to(max: usize) -> Vec<Poset<String>> {
    default_posets().into_iter().filter(|p| p.len() <= max).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closure_and_validation() {
        // 0 < 1 < 2 given only by covers; closure must add 0 < 2.
        let p = Poset::new(vec!["a", "b", "c"], &[(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert!(p.leq(1, 1));
        assert!(!p.leq(2, 0));
        assert_eq!(p.strictly_below(2), vec![0, 1]);
        assert_eq!(p.minimal(), vec![0]);
    }

    #[test]
    fn antisymmetry_rejected() {
        let err = Poset::new(vec!["a", "b"], &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, CatError::Structure(_)));
    }

    #[test]
    fn diamond_has_bottom_and_topo_order() {
        let d = &default_posets()[6];
        assert_eq!(d.len(), 4);
        assert_eq!(d.bottom(), Some(0));
        let order = d.topo_order();
        // bottom first, top last
        assert_eq!(order[0], 0);
        assert_eq!(order[3], 3);
    }

    #[test]
    fn json_loading() {
        let v: serde_json::Value = serde_json::from_str(
            r#"{"elems": ["w0", "w1"], "leq": [["w0", "w1"]]}"#,
        )
        .unwrap();
        let p = poset_from_json(&v).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.leq(0, 1));
        assert!(!p.leq(1, 0));

        let bad: serde_json::Value =
            serde_json::from_str(r#"{"elems": ["w0"], "leq": [["w0", "zz"]]}"#).unwrap();
        assert!(poset_from_json(&bad).is_err());
    }

    #[test]
    fn product_orders_componentwise() {
        let c2 = Poset::new(vec![0usize, 1], &[(0, 1)]).unwrap();
        let prod = c2.product_with(&c2, |a, b| (*a, *b));
        let i = |a: usize, b: usize| prod.index_of(&(a, b)).unwrap();
        assert!(prod.leq(i(0, 0), i(1, 1)));
        assert!(!prod.leq(i(0, 1), i(1, 0)));
    }

    proptest! {
        #[test]
        fn random_relations_close_to_valid_posets(n in 1usize..6, edges in proptest::collection::vec((0usize..6, 0usize..6), 0..8)) {
            // Keep only forward edges to avoid antisymmetry violations; the
            // closure must then always validate.
            let pairs: Vec<(usize, usize)> = edges
                .into_iter()
                .filter(|&(i, j)| i < j && j < n)
                .collect();
            let elems: Vec<usize> = (0..n).collect();
            let p = Poset::new(elems, &pairs).unwrap();
            // transitivity spot check
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if p.leq(i, j) && p.leq(j, k) {
                            prop_assert!(p.leq(i, k));
                        }
                    }
                }
            }
            // topo order respects the relation
            let order = p.topo_order();
            for (pos_a, &a) in order.iter().enumerate() {
                for &b in &order[pos_a + 1..] {
                    prop_assert!(!p.lt(b, a));
                }
            }
        }
    }
}
