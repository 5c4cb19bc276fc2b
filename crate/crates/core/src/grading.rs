//! Transitive functions `u: ρ → G` (equivalently good `G`-gradings of the
//! structural matrix algebra) and the decision procedures for their
//! triviality.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::FiniteGroup;
use crate::poset::{Preorder, QuotientPoset};
use crate::snf::{hom_triviality, smith_normal_form, IntMatrix};
use crate::BudgetExceeded;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelingError {
    #[error("labeling is missing the related pair ({0},{1})")]
    MissingPair(usize, usize),
    #[error("labeling assigns a value to the unrelated pair ({0},{1})")]
    UnrelatedPair(usize, usize),
    #[error("value {value} at ({i},{j}) is not a group element")]
    NotAnElement { i: usize, j: usize, value: usize },
    #[error("cocycle condition fails at ({0},{1},{2})")]
    Cocycle(usize, usize, usize),
    #[error("arrow labeling has {got} values for {expected} arrows")]
    ArrowCount { got: usize, expected: usize },
    #[error("arrow labeling is not path-consistent between classes {0} and {1}")]
    PathInconsistent(usize, usize),
}

/// A validated transitive function on `ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitiveLabeling {
    n: usize,
    values: Vec<usize>,
}

impl TransitiveLabeling {
    /// The trivial function `u(i,j) = g_i g_j⁻¹`.
    pub fn from_weights(p: &Preorder, g: &FiniteGroup, weights: &[usize]) -> Self {
        let n = p.n();
        let mut values = vec![NONE; n * n];
        for (i, j) in p.pairs() {
            values[i * n + j] = g.div(weights[i], weights[j]);
        }
        TransitiveLabeling { n, values }
    }

    pub fn constant_identity(p: &Preorder) -> Self {
        let n = p.n();
        let mut values = vec![NONE; n * n];
        for (i, j) in p.pairs() {
            values[i * n + j] = 0;
        }
        TransitiveLabeling { n, values }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        let v = self.values[i * self.n + j];
        debug_assert!(v != NONE, "({i},{j}) is not a related pair");
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(i, j, u(i,j))` for every related pair, row-major.
    pub fn entries(&self) -> Vec<(usize, usize, usize)> {
        (0..self.n * self.n)
            .filter(|&k| self.values[k] != NONE)
            .map(|k| (k / self.n, k % self.n, self.values[k]))
            .collect()
    }

    pub fn as_map(&self) -> BTreeMap<(usize, usize), usize> {
        self.entries().into_iter().map(|(i, j, v)| ((i, j), v)).collect()
    }
}

/// Validates a raw labeling of the related pairs.
pub fn check_transitive(
    p: &Preorder,
    g: &FiniteGroup,
    raw: &BTreeMap<(usize, usize), usize>,
) -> Result<TransitiveLabeling, LabelingError> {
    let n = p.n();
    let mut values = vec![NONE; n * n];
    for (&(i, j), &value) in raw {
        if i >= n || j >= n || !p.related(i, j) {
            return Err(LabelingError::UnrelatedPair(i, j));
        }
        if value >= g.order() {
            return Err(LabelingError::NotAnElement { i, j, value });
        }
        values[i * n + j] = value;
    }
    for (i, j) in p.pairs() {
        if values[i * n + j] == NONE {
            return Err(LabelingError::MissingPair(i, j));
        }
    }
    let u = TransitiveLabeling { n, values };
    if let Some((i, j, r)) = cocycle_violation(p, g, &u) {
        return Err(LabelingError::Cocycle(i, j, r));
    }
    Ok(u)
}

fn cocycle_violation(p: &Preorder, g: &FiniteGroup, u: &TransitiveLabeling) -> Option<(usize, usize, usize)> {
    let n = p.n();
    for i in 0..n {
        for j in 0..n {
            if !p.related(i, j) {
                continue;
            }
            for r in 0..n {
                if p.related(j, r) && g.mul(u.get(i, j), u.get(j, r)) != u.get(i, r) {
                    return Some((i, j, r));
                }
            }
        }
    }
    None
}

/// Vertex weights `g_1, …, g_n` with `u(i,j) = g_i g_j⁻¹`.
pub type VertexWeights = Vec<usize>;

/// Decides whether `u` is trivial and returns weights when it is.
///
/// Weights are propagated along a BFS forest of the symmetrised relation
/// graph, each root getting the identity, and then checked on every pair.
pub fn triviality_witness(p: &Preorder, g: &FiniteGroup, u: &TransitiveLabeling) -> Option<VertexWeights> {
    let n = p.n();
    let mut w = vec![NONE; n];
    for root in 0..n {
        if w[root] != NONE {
            continue;
        }
        w[root] = g.identity();
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if w[y] != NONE {
                    continue;
                }
                if p.related(y, x) {
                    // u(y,x) = g_y g_x⁻¹
                    w[y] = g.mul(u.get(y, x), w[x]);
                } else if p.related(x, y) {
                    w[y] = g.mul(g.inv(u.get(x, y)), w[x]);
                } else {
                    continue;
                }
                queue.push_back(y);
            }
        }
    }
    p.pairs()
        .into_iter()
        .all(|(i, j)| u.get(i, j) == g.div(w[i], w[j]))
        .then_some(w)
}

/// Group values on the Hasse arrows of `Γ`, indexed like [`QuotientPoset::hasse`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowLabeling {
    values: Vec<usize>,
}

impl ArrowLabeling {
    pub fn new(q: &QuotientPoset, values: Vec<usize>) -> Result<Self, LabelingError> {
        if values.len() != q.hasse().len() {
            return Err(LabelingError::ArrowCount {
                got: values.len(),
                expected: q.hasse().len(),
            });
        }
        Ok(ArrowLabeling { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `v(a) = u(rep s(a), rep t(a))`.
    pub fn from_transitive(q: &QuotientPoset, u: &TransitiveLabeling) -> Self {
        let values = q
            .hasse()
            .iter()
            .map(|&(s, t)| u.get(q.class(s)[0], q.class(t)[0]))
            .collect();
        ArrowLabeling { values }
    }

    /// The poset-level function `w(α, β)` obtained from path products, or the
    /// first pair of classes with two paths of different product.
    pub fn path_products(&self, q: &QuotientPoset, g: &FiniteGroup) -> Result<Vec<usize>, LabelingError> {
        let c = q.len();
        let mut order: Vec<usize> = (0..c).collect();
        order.sort_by_key(|&a| q.height(a));
        let mut w = vec![NONE; c * c];
        for alpha in 0..c {
            w[alpha * c + alpha] = g.identity();
            for &beta in &order {
                for (k, &(s, t)) in q.hasse().iter().enumerate() {
                    if t != beta || w[alpha * c + s] == NONE {
                        continue;
                    }
                    let cand = g.mul(w[alpha * c + s], self.values[k]);
                    let slot = &mut w[alpha * c + beta];
                    if *slot == NONE {
                        *slot = cand;
                    } else if *slot != cand {
                        return Err(LabelingError::PathInconsistent(alpha, beta));
                    }
                }
            }
        }
        Ok(w)
    }

    pub fn is_path_consistent(&self, q: &QuotientPoset, g: &FiniteGroup) -> bool {
        self.path_products(q, g).is_ok()
    }

    /// Lifts a path-consistent arrow labeling to a transitive function on `ρ`
    /// that is constant on classes.
    pub fn lift(&self, p: &Preorder, q: &QuotientPoset, g: &FiniteGroup) -> Result<TransitiveLabeling, LabelingError> {
        let w = self.path_products(q, g)?;
        let n = p.n();
        let c = q.len();
        let mut values = vec![NONE; n * n];
        for (i, j) in p.pairs() {
            values[i * n + j] = w[q.class_of(i) * c + q.class_of(j)];
        }
        Ok(TransitiveLabeling { n, values })
    }
}

/// A spanning forest of the undirected Hasse graph `Γᵘ`, grown by BFS from
/// the least class of each component.
#[derive(Debug, Clone)]
pub struct HasseForest {
    /// `(parent, arrow)` per class; `None` for roots.
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    tree_arrow: Vec<bool>,
}

/// A closed walk in the doubled quiver `Γ̃`: arrows with their orientation
/// (`true` = along the arrow).
pub type Cycle = Vec<(usize, bool)>;

impl HasseForest {
    pub fn new(q: &QuotientPoset) -> Self {
        let c = q.len();
        let arrows = q.hasse();
        let mut parent = vec![None; c];
        let mut depth = vec![0; c];
        let mut seen = vec![false; c];
        let mut tree_arrow = vec![false; arrows.len()];
        for root in 0..c {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for (k, &(s, t)) in arrows.iter().enumerate() {
                    let y = if s == x {
                        t
                    } else if t == x {
                        s
                    } else {
                        continue;
                    };
                    if seen[y] {
                        continue;
                    }
                    seen[y] = true;
                    parent[y] = Some((x, k));
                    depth[y] = depth[x] + 1;
                    tree_arrow[k] = true;
                    queue.push_back(y);
                }
            }
        }
        HasseForest {
            parent,
            depth,
            tree_arrow,
        }
    }

    pub fn is_tree_arrow(&self, k: usize) -> bool {
        self.tree_arrow[k]
    }

    pub fn non_tree_arrows(&self) -> Vec<usize> {
        (0..self.tree_arrow.len()).filter(|&k| !self.tree_arrow[k]).collect()
    }

    /// Walk through the forest from `a` to `b` (same component).
    pub fn path(&self, q: &QuotientPoset, a: usize, b: usize) -> Cycle {
        let arrows = q.hasse();
        let step = |from: usize, k: usize| (k, arrows[k].0 == from);
        let (mut x, mut y) = (a, b);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[x] > self.depth[y] {
            let (px, k) = self.parent[x].expect("non-root");
            up.push(step(x, k));
            x = px;
        }
        while self.depth[y] > self.depth[x] {
            let (py, k) = self.parent[y].expect("non-root");
            down.push(step(py, k));
            y = py;
        }
        while x != y {
            let (px, kx) = self.parent[x].expect("same component");
            let (py, ky) = self.parent[y].expect("same component");
            up.push(step(x, kx));
            down.push(step(py, ky));
            x = px;
            y = py;
        }
        down.reverse();
        up.extend(down);
        up
    }

    /// One fundamental cycle per non-tree arrow, starting with that arrow.
    pub fn fundamental_cycles(&self, q: &QuotientPoset) -> Vec<(usize, Cycle)> {
        self.non_tree_arrows()
            .into_iter()
            .map(|k| {
                let (s, t) = q.hasse()[k];
                let mut cycle = vec![(k, true)];
                cycle.extend(self.path(q, t, s));
                (k, cycle)
            })
            .collect()
    }
}

/// Product `ṽ(z₁)…ṽ(z_m)` along a walk in `Γ̃`.
pub fn walk_product(g: &FiniteGroup, v: &ArrowLabeling, walk: &[(usize, bool)]) -> usize {
    g.product_of(walk.iter().map(|&(k, fwd)| {
        let x = v.values[k];
        if fwd {
            x
        } else {
            g.inv(x)
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTest {
    /// Whether `v(a) = f(s(a)) f(t(a))⁻¹` for some `f: Γ₀ → G`.
    pub holds: bool,
    pub failing_cycle: Option<Cycle>,
    /// The potential `f`, when it exists.
    pub potential: Option<Vec<usize>>,
}

/// Tests the fundamental cycles of `Γᵘ` for trivial `ṽ`-product.
///
/// Each fundamental cycle is walked from the source of its non-tree arrow,
/// so a trivial product is exactly the condition that the forest potential
/// also fits that arrow; the answer is therefore exact for non-abelian `G`.
pub fn cycle_test(q: &QuotientPoset, g: &FiniteGroup, v: &ArrowLabeling) -> Result<CycleTest, LabelingError> {
    v.path_products(q, g)?;
    let forest = HasseForest::new(q);
    for (_, cycle) in forest.fundamental_cycles(q) {
        if walk_product(g, v, &cycle) != g.identity() {
            return Ok(CycleTest {
                holds: false,
                failing_cycle: Some(cycle),
                potential: None,
            });
        }
    }
    let potential = forest_potential(q, g, v, &forest);
    debug_assert!(potential.is_some(), "cycle test and forest propagation disagree");
    Ok(CycleTest {
        holds: true,
        failing_cycle: None,
        potential,
    })
}

/// Propagates `f` along the forest and checks every arrow.
pub fn forest_potential(q: &QuotientPoset, g: &FiniteGroup, v: &ArrowLabeling, forest: &HasseForest) -> Option<Vec<usize>> {
    let c = q.len();
    let arrows = q.hasse();
    let mut f = vec![NONE; c];
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by_key(|&x| forest.depth[x]);
    for x in order {
        f[x] = match forest.parent[x] {
            None => g.identity(),
            Some((px, k)) => {
                if arrows[k].0 == px {
                    // v(a) = f(px) f(x)⁻¹
                    g.mul(g.inv(v.values[k]), f[px])
                } else {
                    g.mul(v.values[k], f[px])
                }
            }
        };
    }
    arrows
        .iter()
        .enumerate()
        .all(|(k, &(s, t))| v.values[k] == g.div(f[s], f[t]))
        .then_some(f)
}

fn arrow_is_trivial(q: &QuotientPoset, g: &FiniteGroup, v: &ArrowLabeling, forest: &HasseForest) -> bool {
    forest_potential(q, g, v, forest).is_some()
}

/// Outcome of the exhaustive fixed-group decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTriviality {
    pub labelings_scanned: u64,
    /// Path-consistent arrow labelings.
    pub consistent: u64,
    /// Consistent labelings that come from vertex weights.
    pub trivial: u64,
    /// Lexicographically least non-trivial labeling, lifted to `ρ`.
    pub counterexample: Option<(ArrowLabeling, TransitiveLabeling)>,
}

impl GroupTriviality {
    pub fn all_trivial(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Number of labelings `|G|^k`, saturating.
pub(crate) fn search_space(order: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, _| acc.saturating_mul(order as u128))
}

pub(crate) fn decode(mut index: u64, order: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % order as u64) as usize;
        index /= order as u64;
    }
    out
}

/// Decides whether every transitive function `ρ → G` is trivial by
/// enumerating all arrow labelings of the Hasse quiver.
pub fn all_trivial_for_group(p: &Preorder, g: &FiniteGroup, budget: u64) -> Result<GroupTriviality, BudgetExceeded> {
    let q = QuotientPoset::new(p);
    let arrows = q.hasse().len();
    let space = search_space(g.order(), arrows);
    if space > budget as u128 {
        return Err(BudgetExceeded { required: space, budget });
    }
    let space = space as u64;
    let forest = HasseForest::new(&q);
    let (consistent, trivial, first_bad) = (0..space)
        .into_par_iter()
        .map(|idx| {
            let v = ArrowLabeling {
                values: decode(idx, g.order(), arrows),
            };
            if !v.is_path_consistent(&q, g) {
                (0u64, 0u64, None)
            } else if arrow_is_trivial(&q, g, &v, &forest) {
                (1, 1, None)
            } else {
                (1, 0, Some(idx))
            }
        })
        .reduce(
            || (0, 0, None),
            |a, b| {
                let first = match (a.2, b.2) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                (a.0 + b.0, a.1 + b.1, first)
            },
        );
    let counterexample = first_bad.map(|idx| {
        let v = ArrowLabeling {
            values: decode(idx, g.order(), arrows),
        };
        let u = v.lift(p, &q, g).expect("consistent labeling lifts");
        (v, u)
    });
    Ok(GroupTriviality {
        labelings_scanned: space,
        consistent,
        trivial,
        counterexample,
    })
}

/// The free parameters of a transitive function: one value per non-least
/// member of each class (paired with the least member) and one per Hasse
/// arrow (between least members).
fn generator_pairs(q: &QuotientPoset) -> Vec<(usize, usize)> {
    let mut gens = Vec::new();
    for class in q.classes() {
        for &i in &class[1..] {
            gens.push((i, class[0]));
        }
    }
    for &(s, t) in q.hasse() {
        gens.push((q.class(s)[0], q.class(t)[0]));
    }
    gens
}

/// Every transitive function `ρ → G`, in lexicographic order of their
/// generator values.
pub fn enumerate_transitive(p: &Preorder, g: &FiniteGroup, budget: u64) -> Result<Vec<TransitiveLabeling>, BudgetExceeded> {
    let q = QuotientPoset::new(p);
    let gens = generator_pairs(&q);
    let space = search_space(g.order(), gens.len());
    if space > budget as u128 {
        return Err(BudgetExceeded { required: space, budget });
    }
    let within = gens.len() - q.hasse().len();
    let out: Vec<TransitiveLabeling> = (0..space as u64)
        .into_par_iter()
        .filter_map(|idx| {
            let vals = decode(idx, g.order(), gens.len());
            let n = p.n();
            // u(i, rep) for every element
            let mut to_rep = vec![g.identity(); n];
            for (k, &(i, _)) in gens[..within].iter().enumerate() {
                to_rep[i] = vals[k];
            }
            let arrows = ArrowLabeling {
                values: vals[within..].to_vec(),
            };
            let w = arrows.path_products(&q, g).ok()?;
            let c = q.len();
            let mut values = vec![NONE; n * n];
            for (i, j) in p.pairs() {
                let (a, b) = (q.class_of(i), q.class_of(j));
                values[i * n + j] = g.product_of([to_rep[i], w[a * c + b], g.inv(to_rep[j])]);
            }
            let u = TransitiveLabeling { n, values };
            cocycle_violation(p, g, &u).is_none().then_some(u)
        })
        .collect();
    Ok(out)
}

/// Abelianized comparison of the parallel-path subgroup `A(Γ)` with the
/// cycle subgroup `B(Γ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianTriviality {
    /// `B_ab / A_ab` is trivial, i.e. all transitive functions into abelian
    /// groups are trivial.
    pub all_abelian_trivial: bool,
    /// Rank of the cycle space of `Γᵘ`.
    pub cycle_rank: usize,
    /// Free rank of `B_ab / A_ab`.
    pub free_rank: usize,
    /// Torsion invariant factors of `B_ab / A_ab`.
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
    /// Verdict for a supplied group: `Some(false)` when a non-trivial
    /// function exists, `Some(true)` when all are trivial (abelian groups
    /// only), `None` when the abelianized data cannot decide.
    pub group_verdict: Option<bool>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|d| d.to_string()))
}

/// Generators of the abelianized `A(Γ)` as integer vectors on arrows.
///
/// For a source `α` and a fixed path `p₀(β)` to each `β ≥ α`, every arrow
/// `a: x → β` with `x ≥ α` contributes `p₀(x) + a − p₀(β)`; these span all
/// differences of parallel paths.
pub fn parallel_path_relations(q: &QuotientPoset) -> Vec<Vec<i64>> {
    let c = q.len();
    let arrows = q.hasse();
    let e = arrows.len();
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by_key(|&a| q.height(a));
    let mut rels = Vec::new();
    for alpha in 0..c {
        let mut base: Vec<Option<Vec<i64>>> = vec![None; c];
        base[alpha] = Some(vec![0; e]);
        for &beta in &order {
            for (k, &(s, t)) in arrows.iter().enumerate() {
                if t != beta {
                    continue;
                }
                let Some(ps) = base[s].clone() else { continue };
                let mut cand = ps;
                cand[k] += 1;
                match &base[beta] {
                    None => base[beta] = Some(cand),
                    Some(p0) => {
                        let diff: Vec<i64> = cand.iter().zip(p0).map(|(x, y)| x - y).collect();
                        if diff.iter().any(|&x| x != 0) {
                            rels.push(diff);
                        }
                    }
                }
            }
        }
    }
    rels
}

/// Computes `B_ab / A_ab` by Smith normal form.
pub fn all_trivial_abelian(p: &Preorder, group: Option<&FiniteGroup>) -> AbelianTriviality {
    let q = QuotientPoset::new(p);
    let forest = HasseForest::new(&q);
    let non_tree = forest.non_tree_arrows();
    let beta = non_tree.len();
    let rows: Vec<Vec<i64>> = parallel_path_relations(&q)
        .into_iter()
        .map(|z| non_tree.iter().map(|&k| z[k]).collect())
        .collect();
    let m = IntMatrix::from_rows(beta, &rows);
    let snf = smith_normal_form(&m);
    let torsion = snf.torsion();
    let free_rank = beta - snf.rank;
    let all_abelian_trivial = free_rank == 0 && torsion.is_empty();
    let group_verdict = group.and_then(|g| {
        let none_nontrivial = hom_triviality(&torsion, free_rank, g);
        if !none_nontrivial {
            Some(false)
        } else if g.is_abelian() {
            Some(true)
        } else {
            None
        }
    });
    AbelianTriviality {
        all_abelian_trivial,
        cycle_rank: beta,
        free_rank,
        torsion,
        group_verdict,
    }
}
