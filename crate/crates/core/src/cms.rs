//! Finite 1-bounded complete ultrametric spaces with nonexpansive maps.
//!
//! Distances are powers of two, stored as integer exponents: `d(i,j) =
//! 2^{-exp(i,j)}`, with an infinite exponent on the diagonal.  The delay
//! keeps the carrier and deepens every distance by one (`d/2`), so a guarded
//! body `f : ▶X × Y → X` induces a contractive self-map on the (finite,
//! nonempty, complete) space of maps `Y → X`; its Banach fixpoint is the
//! dagger, reached after at most `max-exponent + 2` iterations because each
//! round forces one more exponent of agreement.
//!
//! Random spaces are dendrograms: clusters split in two per exponent level,
//! which is exactly the shape of prefix metrics on strings over a binary
//! alphabet, truncated at the maximal exponent.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cat::{
    shape_err, CatError, CatResult, GuardedCategory, ObjRole, UniformityDagger, UniformityTrace,
};

/// Diagonal sentinel: distance zero.
pub const EXP_INF: u32 = u32::MAX;

/// Size bounds for random generation.
#[derive(Debug, Clone, Copy)]
pub struct CmsSizes {
    /// Largest carrier drawn for state objects.
    pub max_points: usize,
    /// Deepest finite distance exponent (`d ≥ 2^{-max_exp}` off-diagonal).
    pub max_exp: u32,
}

impl Default for CmsSizes {
    fn default() -> Self {
        CmsSizes {
            max_points: 3,
            max_exp: 3,
        }
    }
}

/// A finite ultrametric space: labels plus a symmetric exponent matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CmsObj {
    pub(crate) labels: Vec<String>,
    /// Row-major `n×n`; `EXP_INF` exactly on the diagonal.
    pub(crate) exp: Vec<u32>,
}

impl CmsObj {
    /// Validating constructor: symmetry, diagonal, ultrametric inequality.
    pub fn new(labels: Vec<String>, exp: Vec<u32>) -> CatResult<Self> {
        let n = labels.len();
        if exp.len() != n * n {
            return Err(shape_err("CmsObj::new", n * n, exp.len()));
        }
        for i in 0..n {
            if exp[i * n + i] != EXP_INF {
                return Err(CatError::Structure(format!(
                    "diagonal entry {i} must be infinite"
                )));
            }
            for j in 0..n {
                if exp[i * n + j] != exp[j * n + i] {
                    return Err(CatError::Structure(format!(
                        "exponent matrix not symmetric at ({i},{j})"
                    )));
                }
                if i != j && exp[i * n + j] == EXP_INF {
                    return Err(CatError::Structure(format!(
                        "distinct points {i},{j} at distance zero"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let e = |a: usize, b: usize| exp[a * n + b];
                    if e(i, k) < e(i, j).min(e(j, k)) {
                        return Err(CatError::Structure(format!(
                            "ultrametric inequality fails on ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(CmsObj { labels, exp })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub(crate) fn e(&self, i: usize, j: usize) -> u32 {
        self.exp[i * self.len() + j]
    }

    fn max_finite_exp(&self) -> u32 {
        self.exp.iter().copied().filter(|&e| e != EXP_INF).max().unwrap_or(0)
    }
}

/// A nonexpansive map as an index table.
#[derive(Debug, Clone, PartialEq)]
pub struct CmsMor {
    pub(crate) dom: CmsObj,
    pub(crate) cod: CmsObj,
    pub(crate) table: Vec<usize>,
}

impl CmsMor {
    /// Validating constructor: arity, range, nonexpansiveness.
    pub fn new(dom: CmsObj, cod: CmsObj, table: Vec<usize>) -> CatResult<Self> {
        if table.len() != dom.len() {
            return Err(shape_err("CmsMor::new", dom.len(), table.len()));
        }
        if table.iter().any(|&j| j >= cod.len()) {
            return Err(CatError::Structure("map escapes the target".to_string()));
        }
        for i in 0..dom.len() {
            for j in 0..i {
                if cod.e(table[i], table[j]) < dom.e(i, j) {
                    return Err(CatError::Structure(format!(
                        "map is expansive on the pair ({j},{i})"
                    )));
                }
            }
        }
        Ok(CmsMor { dom, cod, table })
    }
}

/// The metric model.
#[derive(Debug, Clone)]
pub struct CmsModel {
    sizes: CmsSizes,
}

impl CmsModel {
    pub fn new(sizes: CmsSizes) -> Self {
        CmsModel { sizes }
    }

    /// Recursive dendrogram: distances between the two halves get the current
    /// exponent, each half refines one level deeper.
    fn dendrogram(&self, idx: &[usize], e: u32, exp: &mut [u32], n: usize, rng: &mut ChaCha8Rng) {
        if idx.len() <= 1 {
            return;
        }
        if e >= self.sizes.max_exp {
            for (a, &i) in idx.iter().enumerate() {
                for &j in idx.iter().take(a) {
                    exp[i * n + j] = e;
                    exp[j * n + i] = e;
                }
            }
            return;
        }
        // split into two nonempty halves (binary branching)
        let cut = rng.gen_range(1..idx.len());
        let (left, right) = idx.split_at(cut);
        for &i in left {
            for &j in right {
                exp[i * n + j] = e;
                exp[j * n + i] = e;
            }
        }
        self.dendrogram(left, e + 1, exp, n, rng);
        self.dendrogram(right, e + 1, exp, n, rng);
    }

    fn random_space(&self, n: usize, rng: &mut ChaCha8Rng) -> CmsObj {
        let labels = (0..n).map(|i| format!("m{i}")).collect::<Vec<_>>();
        let mut exp = vec![EXP_INF; n * n];
        let idx: Vec<usize> = (0..n).collect();
        self.dendrogram(&idx, 0, &mut exp, n, rng);
        CmsObj::new(labels, exp).expect("dendrograms are ultrametric")
    }

    /// Backtracking-free rejection sampler for nonexpansive maps with an
    /// extra per-point candidate filter.
    fn sample_nonexpansive<F>(
        &self,
        a: &CmsObj,
        b: &CmsObj,
        rng: &mut ChaCha8Rng,
        filter: F,
    ) -> CatResult<CmsMor>
    where
        F: Fn(usize, usize) -> bool,
    {
        if !a.is_empty() && b.is_empty() {
            return Err(CatError::EmptyHom {
                from: self.describe_obj(a),
                to: self.describe_obj(b),
            });
        }
        'restart: for _ in 0..100 {
            let mut table: Vec<usize> = Vec::with_capacity(a.len());
            for i in 0..a.len() {
                let cands: Vec<usize> = (0..b.len())
                    .filter(|&j| {
                        (0..i).all(|i2| b.e(j, table[i2]) >= a.e(i, i2)) && filter(i, j)
                    })
                    .collect();
                if cands.is_empty() {
                    continue 'restart;
                }
                table.push(cands[rng.gen_range(0..cands.len())]);
            }
            return CmsMor::new(a.clone(), b.clone(), table);
        }
        Err(CatError::GenerationBudget("nonexpansive-map sampling"))
    }
}

impl Default for CmsModel {
    fn default() -> Self {
        CmsModel::new(CmsSizes::default())
    }
}

impl GuardedCategory for CmsModel {
    type Obj = CmsObj;
    type Mor = CmsMor;

    fn name(&self) -> &'static str {
        "cms"
    }

    fn terminal(&self) -> CmsObj {
        CmsObj {
            labels: vec!["•".to_string()],
            exp: vec![EXP_INF],
        }
    }

    fn product(&self, a: &CmsObj, b: &CmsObj) -> CmsObj {
        let n = a.len() * b.len();
        let mut labels = Vec::with_capacity(n);
        for la in &a.labels {
            for lb in &b.labels {
                labels.push(format!("({la},{lb})"));
            }
        }
        let mut exp = vec![EXP_INF; n * n];
        for i1 in 0..a.len() {
            for j1 in 0..b.len() {
                for i2 in 0..a.len() {
                    for j2 in 0..b.len() {
                        let p = i1 * b.len() + j1;
                        let q = i2 * b.len() + j2;
                        exp[p * n + q] = a.e(i1, i2).min(b.e(j1, j2));
                    }
                }
            }
        }
        CmsObj { labels, exp }
    }

    fn id(&self, a: &CmsObj) -> CmsMor {
        CmsMor {
            dom: a.clone(),
            cod: a.clone(),
            table: (0..a.len()).collect(),
        }
    }

    fn compose(&self, f: &CmsMor, g: &CmsMor) -> CatResult<CmsMor> {
        if f.cod != g.dom {
            return Err(shape_err("compose", &g.dom.labels, &f.cod.labels));
        }
        Ok(CmsMor {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            table: f.table.iter().map(|&i| g.table[i]).collect(),
        })
    }

    fn pair(&self, f: &CmsMor, g: &CmsMor) -> CatResult<CmsMor> {
        if f.dom != g.dom {
            return Err(shape_err("pair", &f.dom.labels, &g.dom.labels));
        }
        let cod = self.product(&f.cod, &g.cod);
        let table = (0..f.dom.len())
            .map(|i| f.table[i] * g.cod.len() + g.table[i])
            .collect();
        Ok(CmsMor {
            dom: f.dom.clone(),
            cod,
            table,
        })
    }

    fn proj_left(&self, a: &CmsObj, b: &CmsObj) -> CmsMor {
        let dom = self.product(a, b);
        let table = (0..dom.len()).map(|i| i / b.len().max(1)).collect();
        CmsMor {
            dom,
            cod: a.clone(),
            table,
        }
    }

    fn proj_right(&self, a: &CmsObj, b: &CmsObj) -> CmsMor {
        let dom = self.product(a, b);
        let table = (0..dom.len()).map(|i| i % b.len().max(1)).collect();
        CmsMor {
            dom,
            cod: b.clone(),
            table,
        }
    }

    fn bang(&self, a: &CmsObj) -> CmsMor {
        CmsMor {
            dom: a.clone(),
            cod: self.terminal(),
            table: vec![0; a.len()],
        }
    }

    fn dom(&self, f: &CmsMor) -> CmsObj {
        f.dom.clone()
    }

    fn cod(&self, f: &CmsMor) -> CmsObj {
        f.cod.clone()
    }

    fn delay_obj(&self, a: &CmsObj) -> CmsObj {
        let exp = a
            .exp
            .iter()
            .map(|&e| if e == EXP_INF { EXP_INF } else { e + 1 })
            .collect();
        CmsObj {
            labels: a.labels.clone(),
            exp,
        }
    }

    fn delay_mor(&self, f: &CmsMor) -> CmsMor {
        CmsMor {
            dom: self.delay_obj(&f.dom),
            cod: self.delay_obj(&f.cod),
            table: f.table.clone(),
        }
    }

    fn point(&self, a: &CmsObj) -> CmsMor {
        CmsMor {
            dom: a.clone(),
            cod: self.delay_obj(a),
            table: (0..a.len()).collect(),
        }
    }

    fn dagger(&self, x: &CmsObj, y: &CmsObj, f: &CmsMor) -> CatResult<CmsMor> {
        let expect_dom = self.product(&self.delay_obj(x), y);
        if f.dom != expect_dom || f.cod != *x {
            return Err(shape_err(
                "dagger",
                ("▶X×Y", "X"),
                (&f.dom.labels, &f.cod.labels),
            ));
        }
        if y.is_empty() {
            return CmsMor::new(y.clone(), x.clone(), Vec::new());
        }
        if x.is_empty() {
            return Err(CatError::EmptyHom {
                from: self.describe_obj(y),
                to: self.describe_obj(x),
            });
        }
        // Banach iteration from a constant map; the delayed coordinate makes
        // the step contractive, so max_finite_exp + 2 rounds reach the fixpoint
        let mut s = vec![0usize; y.len()];
        let cap = x.max_finite_exp() + 2;
        for _ in 0..=cap {
            let next: Vec<usize> = (0..y.len())
                .map(|yi| f.table[s[yi] * y.len() + yi])
                .collect();
            if next == s {
                return CmsMor::new(y.clone(), x.clone(), s);
            }
            s = next;
        }
        Err(CatError::IterationCap("cms dagger"))
    }

    fn unique_dagger(&self) -> bool {
        true
    }

    fn preserves_products(&self) -> bool {
        true
    }

    fn can_inverse(&self, a: &CmsObj, b: &CmsObj) -> Option<CmsMor> {
        // ▶(A×B) and ▶A×▶B share the carrier and the exponents commute with
        // min, so the inverse is the identity table
        let dom = self.product(&self.delay_obj(a), &self.delay_obj(b));
        let cod = self.delay_obj(&self.product(a, b));
        Some(CmsMor {
            dom,
            cod,
            table: (0..a.len() * b.len()).collect(),
        })
    }

    fn well_pointed(&self) -> bool {
        true
    }

    fn mor_equal(&self, f: &CmsMor, g: &CmsMor) -> bool {
        f == g
    }

    fn hom_enumerate(&self, a: &CmsObj, b: &CmsObj) -> Option<Vec<CmsMor>> {
        let mut out = Vec::new();
        let mut table = Vec::new();
        if self.hom_rec(a, b, &mut table, &mut out) {
            Some(out)
        } else {
            None
        }
    }

    fn is_bijective(&self, f: &CmsMor) -> Option<bool> {
        let mut seen = vec![false; f.cod.len()];
        f.table.iter().for_each(|&j| seen[j] = true);
        Some(f.dom.len() == f.cod.len() && seen.iter().all(|&s| s))
    }

    fn random_obj(&self, role: ObjRole, rng: &mut ChaCha8Rng) -> CmsObj {
        let n = match role {
            ObjRole::State => rng.gen_range(1..=self.sizes.max_points),
            ObjRole::Param => {
                if rng.gen_bool(0.3) {
                    1
                } else {
                    rng.gen_range(1..=self.sizes.max_points)
                }
            }
        };
        self.random_space(n, rng)
    }

    fn random_mor(&self, a: &CmsObj, b: &CmsObj, rng: &mut ChaCha8Rng) -> CatResult<CmsMor> {
        self.sample_nonexpansive(a, b, rng, |_, _| true)
    }

    fn describe_mor(&self, f: &CmsMor) -> String {
        let images: Vec<&str> = f.table.iter().map(|&j| f.cod.labels[j].as_str()).collect();
        format!("[{}]", images.join(","))
    }

    fn describe_obj(&self, a: &CmsObj) -> String {
        let mut pairs = Vec::new();
        for i in 0..a.len() {
            for j in 0..i {
                pairs.push(format!("e({},{})={}", a.labels[j], a.labels[i], a.e(i, j)));
            }
        }
        format!("{{{}}} {}", a.labels.join(","), pairs.join(" "))
    }

    fn uniformity_dagger_instance(&self, rng: &mut ChaCha8Rng) -> Option<UniformityDagger<Self>> {
        let x_prime = self.random_obj(ObjRole::State, rng);
        let k = self.random_obj(ObjRole::Param, rng);
        let x = self.product(&x_prime, &k);
        let h = self.proj_left(&x_prime, &k);
        let y = self.random_obj(ObjRole::Param, rng);
        let gdom = self.product(&self.delay_obj(&x_prime), &y);
        let g = self.random_mor(&gdom, &x_prime, rng).ok()?;
        let ksz = k.len();
        let f_dom = self.product(&self.delay_obj(&x), &y);
        // ▶h has the same table as h, so transport is index arithmetic
        let f = self
            .sample_nonexpansive(&f_dom, &x, rng, |idx, cand| {
                let yi = idx % y.len();
                let dxi = idx / y.len();
                let want = g.table[(dxi / ksz) * y.len() + yi];
                cand / ksz == want
            })
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
        let x_prime = self.random_obj(ObjRole::State, rng);
        let k = self.random_obj(ObjRole::Param, rng);
        let x = self.product(&x_prime, &k);
        let h = self.proj_left(&x_prime, &k);
        let a = self.random_obj(ObjRole::Param, rng);
        let b = self.random_obj(ObjRole::Param, rng);
        let fp_dom = self.product(&self.delay_obj(&x_prime), &a);
        let fp_cod = self.product(&x_prime, &b);
        let f_prime = self.random_mor(&fp_dom, &fp_cod, rng).ok()?;
        let ksz = k.len();
        let f_dom = self.product(&self.delay_obj(&x), &a);
        let f_cod = self.product(&x, &b);
        let f = self
            .sample_nonexpansive(&f_dom, &f_cod, rng, |idx, cand| {
                let ai = idx % a.len();
                let dxi = idx / a.len();
                let want = f_prime.table[(dxi / ksz) * a.len() + ai];
                let (want_xp, want_b) = (want / b.len(), want % b.len());
                let (xi, bi) = (cand / b.len(), cand % b.len());
                xi / ksz == want_xp && bi == want_b
            })
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

impl CmsModel {
    fn hom_rec(
        &self,
        a: &CmsObj,
        b: &CmsObj,
        table: &mut Vec<usize>,
        out: &mut Vec<CmsMor>,
    ) -> bool {
        const MAP_BUDGET: usize = 100_000;
        if out.len() > MAP_BUDGET {
            return false;
        }
        if table.len() == a.len() {
            out.push(CmsMor {
                dom: a.clone(),
                cod: b.clone(),
                table: table.clone(),
            });
            return true;
        }
        let i = table.len();
        for j in 0..b.len() {
            if (0..i).all(|i2| b.e(j, table[i2]) >= a.e(i, i2)) {
                table.push(j);
                let fine = self.hom_rec(a, b, table, out);
                table.pop();
                if !fine {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{canonical, canonical_is_iso, check_guarded_square, enumerate_solutions};
    use crate::seeding::rng_from;

    fn binary_strings_len2() -> CmsObj {
        // 00,01,10,11 with the common-prefix exponent metric
        let labels = ["00", "01", "10", "11"].map(String::from).to_vec();
        let mut exp = vec![EXP_INF; 16];
        let lcp = |a: &str, b: &str| {
            a.chars()
                .zip(b.chars())
                .take_while(|(x, y)| x == y)
                .count() as u32
        };
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    exp[i * 4 + j] = lcp(&labels[i], &labels[j]);
                }
            }
        }
        CmsObj::new(labels, exp).unwrap()
    }

    #[test]
    fn prefix_metric_is_a_valid_space() {
        let s = binary_strings_len2();
        assert_eq!(s.e(0, 1), 1); // 00 vs 01 share "0"
        assert_eq!(s.e(0, 3), 0); // 00 vs 11 share nothing
        assert_eq!(s.max_finite_exp(), 1);
    }

    #[test]
    fn constructor_rejects_non_ultrametrics() {
        // triangle with exponents 0,2,2 is fine; 2,0,0 at the wrong slot isn't
        let labels = ["a", "b", "c"].map(String::from).to_vec();
        let mut exp = vec![EXP_INF; 9];
        let set = |i: usize, j: usize, e: u32, exp: &mut Vec<u32>| {
            exp[i * 3 + j] = e;
            exp[j * 3 + i] = e;
        };
        set(0, 1, 2, &mut exp);
        set(1, 2, 2, &mut exp);
        set(0, 2, 0, &mut exp); // e(a,c) < min(e(a,b), e(b,c)): violation
        assert!(CmsObj::new(labels, exp).is_err());
    }

    #[test]
    fn morphism_constructor_rejects_expansive_maps() {
        let s = binary_strings_len2();
        // send far-apart 00,11 to nearby 00,01: fine (nonexpansive can shrink
        // distance exponents are ≥): e(00,01)=1 ≥ e(00,11)=0 ✓
        CmsMor::new(s.clone(), s.clone(), vec![0, 0, 1, 1]).unwrap();
        // send nearby 00,01 (exp 1) to far 00,11 (exp 0): expansive
        assert!(CmsMor::new(s.clone(), s, vec![0, 3, 0, 0]).is_err());
    }

    #[test]
    fn banach_dagger_solves_and_is_unique() {
        let m = CmsModel::default();
        let mut rng = rng_from(31);
        let mut checked = 0;
        for _ in 0..60 {
            let x = m.random_obj(ObjRole::State, &mut rng);
            let y = m.random_obj(ObjRole::Param, &mut rng);
            let dom = m.product(&m.delay_obj(&x), &y);
            let Ok(f) = m.random_mor(&dom, &x, &mut rng) else {
                continue;
            };
            let s = m.dagger(&x, &y, &f).unwrap();
            assert!(check_guarded_square(&m, &x, &y, &f, &s).unwrap());
            let all = enumerate_solutions(&m, &x, &y, &f).unwrap();
            assert_eq!(all.len(), 1, "Banach fixpoint must be unique");
            assert!(m.mor_equal(&all[0], &s));
            checked += 1;
        }
        assert!(checked >= 40);
    }

    #[test]
    fn contraction_on_the_prefix_space() {
        // tail-append body on length-2 binary strings: f(⟨s⟩, y) = y₀·s₀
        // (shift right, new head from the parameter)
        let m = CmsModel::default();
        let x = binary_strings_len2();
        let y = CmsObj::new(
            ["p0", "p1"].map(String::from).to_vec(),
            vec![EXP_INF, 0, 0, EXP_INF],
        )
        .unwrap();
        let dom = m.product(&m.delay_obj(&x), &y);
        // index = s*2 + p; head(s) = s/2; f = p·head(s)
        let table: Vec<usize> = (0..8).map(|i| (i % 2) * 2 + (i / 2) / 2).collect();
        let f = CmsMor::new(dom, x.clone(), table).unwrap();
        let s = m.dagger(&x, &y, &f).unwrap();
        // fixpoint: constant stream on the parameter bit: p ↦ pp
        assert_eq!(s.table, vec![0, 3]);
    }

    #[test]
    fn delay_and_point_are_coherent() {
        let m = CmsModel::default();
        let mut rng = rng_from(5);
        for _ in 0..20 {
            let a = m.random_obj(ObjRole::State, &mut rng);
            let b = m.random_obj(ObjRole::State, &mut rng);
            let Ok(f) = m.random_mor(&a, &b, &mut rng) else {
                continue;
            };
            // functoriality and point naturality
            let lhs = m.compose(&f, &m.point(&b)).unwrap();
            let rhs = m.compose(&m.point(&a), &m.delay_mor(&f)).unwrap();
            assert!(m.mor_equal(&lhs, &rhs));
        }
        // ▶ strictly deepens a nontrivial space
        let x = binary_strings_len2();
        let dx = m.delay_obj(&x);
        assert_eq!(dx.e(0, 3), 1);
        assert_eq!(dx.e(0, 1), 2);
    }

    #[test]
    fn can_inverse_inverts_the_canonical_map() {
        let m = CmsModel::default();
        let mut rng = rng_from(13);
        for _ in 0..15 {
            let a = m.random_obj(ObjRole::State, &mut rng);
            let b = m.random_obj(ObjRole::Param, &mut rng);
            let can = canonical(&m, &a, &b).unwrap();
            let inv = m.can_inverse(&a, &b).unwrap();
            assert!(m.mor_equal(&m.compose(&can, &inv).unwrap(), &m.id(&m.dom(&can))));
            assert!(m.mor_equal(&m.compose(&inv, &can).unwrap(), &m.id(&m.dom(&inv))));
            assert!(canonical_is_iso(&m, &a, &b).unwrap());
        }
    }

    #[test]
    fn uniformity_instances_satisfy_their_premise() {
        let m = CmsModel::default();
        let mut rng = rng_from(17);
        let mut good = 0;
        for _ in 0..80 {
            let Some(u) = m.uniformity_dagger_instance(&mut rng) else {
                continue;
            };
            let dh = m.delay_mor(&u.h);
            let side = crate::cat::times(&m, &dh, &m.id(&u.y)).unwrap();
            let lhs = m.compose(&u.f, &u.h).unwrap();
            let rhs = m.compose(&side, &u.g).unwrap();
            assert!(m.mor_equal(&lhs, &rhs));
            good += 1;
        }
        assert!(good >= 40, "only {good} valid instances");
    }

    #[test]
    fn hom_enumeration_contains_exactly_the_nonexpansive_maps() {
        let m = CmsModel::default();
        let x = binary_strings_len2();
        let one = m.terminal();
        assert_eq!(m.hom_enumerate(&x, &one).unwrap().len(), 1);
        let all = m.hom_enumerate(&x, &x).unwrap();
        for f in &all {
            CmsMor::new(f.dom.clone(), f.cod.clone(), f.table.clone()).unwrap();
        }
        // brute-force count for cross-checking: 4^4 tables filtered
        let mut brute = 0;
        for code in 0..256 {
            let table: Vec<usize> = (0..4).map(|i| (code >> (2 * i)) & 3).collect();
            if CmsMor::new(x.clone(), x.clone(), table).is_ok() {
                brute += 1;
            }
        }
        assert_eq!(all.len(), brute);
    }

    #[test]
    fn random_generation_is_replayable() {
        let m = CmsModel::default();
        let mut r1 = rng_from(77);
        let mut r2 = rng_from(77);
        for _ in 0..10 {
            let a = m.random_obj(ObjRole::State, &mut r1);
            let b = m.random_obj(ObjRole::State, &mut r2);
            assert_eq!(a, b);
            CmsObj::new(a.labels.clone(), a.exp.clone()).unwrap();
        }
    }
}
