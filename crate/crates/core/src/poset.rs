//! Finite preorders and their quotient posets.
//!
//! Ground elements are `0..n` throughout the library; the text formats and
//! reports use `1..=n`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("ground set must be non-empty")]
    EmptyGroundSet,
    #[error("index {index} out of range for ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("relation is not transitive: ({0},{1}) and ({1},{2}) but not ({0},{2})")]
    NotTransitive(usize, usize, usize),
}

/// A reflexive and transitive relation on `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Preorder {
    n: usize,
    rel: Vec<bool>,
}

/// Result of closing a set of generating pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub preorder: Preorder,
    /// Whether the generating pairs (plus the diagonal) were already transitive.
    pub was_closed: bool,
}

impl Preorder {
    /// Smallest preorder containing `pairs`.
    pub fn closure(n: usize, pairs: &[(usize, usize)]) -> Result<Closure, PosetError> {
        if n == 0 {
            return Err(PosetError::EmptyGroundSet);
        }
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for &(i, j) in pairs {
            for index in [i, j] {
                if index >= n {
                    return Err(PosetError::IndexOutOfRange { index, n });
                }
            }
            rel[i * n + j] = true;
        }
        let before = rel.clone();
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if !rel[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if rel[k * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
        let was_closed = before == rel;
        Ok(Closure {
            preorder: Preorder { n, rel },
            was_closed,
        })
    }

    /// Wraps a full relation table, rejecting it if it is not a preorder.
    pub fn from_table(n: usize, rel: Vec<bool>) -> Result<Self, PosetError> {
        if n == 0 {
            return Err(PosetError::EmptyGroundSet);
        }
        assert_eq!(rel.len(), n * n, "relation table must be n*n");
        for i in 0..n {
            if !rel[i * n + i] {
                return Err(PosetError::NotReflexive(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !rel[i * n + j] {
                    continue;
                }
                for r in 0..n {
                    if rel[j * n + r] && !rel[i * n + r] {
                        return Err(PosetError::NotTransitive(i, j, r));
                    }
                }
            }
        }
        Ok(Preorder { n, rel })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn related(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.n + j]
    }

    /// All pairs `(i, j)` with `i ρ j`, in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.related(i, j))
            .collect()
    }

    /// Number of related pairs, i.e. the dimension of the structural matrix algebra.
    pub fn len(&self) -> usize {
        self.rel.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Partition into `~`-classes, each sorted, ordered by least element.
    pub fn equivalence_classes(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let class: Vec<usize> = (i..n)
                .filter(|&j| self.related(i, j) && self.related(j, i))
                .collect();
            for &j in &class {
                seen[j] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// The relation restricted to the ground elements in `subset`, relabelled
    /// `0..subset.len()` in the given order.
    pub fn restrict(&self, subset: &[usize]) -> Preorder {
        let m = subset.len();
        let mut rel = vec![false; m * m];
        for (a, &i) in subset.iter().enumerate() {
            for (b, &j) in subset.iter().enumerate() {
                rel[a * m + b] = self.related(i, j);
            }
        }
        Preorder { n: m, rel }
    }
}

/// The poset `C` of `~`-classes together with its Hasse quiver, connected
/// components and height levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientPoset {
    n: usize,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    leq: Vec<bool>,
    hasse: Vec<(usize, usize)>,
    comp_of: Vec<usize>,
    num_components: usize,
    height_of: Vec<usize>,
}

impl QuotientPoset {
    pub fn new(p: &Preorder) -> Self {
        let classes = p.equivalence_classes();
        let c = classes.len();
        let mut class_of = vec![0; p.n()];
        for (a, class) in classes.iter().enumerate() {
            for &i in class {
                class_of[i] = a;
            }
        }
        let mut leq = vec![false; c * c];
        for a in 0..c {
            for b in 0..c {
                leq[a * c + b] = p.related(classes[a][0], classes[b][0]);
            }
        }
        let lt = |a: usize, b: usize| a != b && leq[a * c + b];
        let mut hasse = Vec::new();
        for a in 0..c {
            for b in 0..c {
                if lt(a, b) && !(0..c).any(|m| lt(a, m) && lt(m, b)) {
                    hasse.push((a, b));
                }
            }
        }

        let (comp_of, num_components) = undirected_components(c, &hasse);

        // minimal-element peeling
        let mut height_of = vec![usize::MAX; c];
        let mut remaining = c;
        let mut level = 0;
        while remaining > 0 {
            let layer: Vec<usize> = (0..c)
                .filter(|&b| height_of[b] == usize::MAX)
                .filter(|&b| !(0..c).any(|a| height_of[a] == usize::MAX && lt(a, b)))
                .collect();
            for &b in &layer {
                height_of[b] = level;
            }
            remaining -= layer.len();
            level += 1;
        }

        QuotientPoset {
            n: p.n(),
            classes,
            class_of,
            leq,
            hasse,
            comp_of,
            num_components,
            height_of,
        }
    }

    /// Size of the underlying ground set.
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, alpha: usize) -> &[usize] {
        &self.classes[alpha]
    }

    /// The class `î` containing ground element `i`.
    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.classes.len() + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Hasse arrows `(α, β)`, sorted lexicographically.
    pub fn hasse(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn component_of(&self, alpha: usize) -> usize {
        self.comp_of[alpha]
    }

    /// Component of the class of ground element `i`.
    pub fn component_of_element(&self, i: usize) -> usize {
        self.comp_of[self.class_of[i]]
    }

    pub fn num_components(&self) -> usize {
        self.num_components
    }

    /// Classes in component `t`, ascending.
    pub fn component(&self, t: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.comp_of[a] == t).collect()
    }

    pub fn height(&self, alpha: usize) -> usize {
        self.height_of[alpha]
    }

    pub fn heights(&self) -> &[usize] {
        &self.height_of
    }

    pub fn multiplicity(&self, alpha: usize) -> usize {
        self.classes[alpha].len()
    }

    /// Classes at height `h`, i.e. the level `L_h(C)`.
    pub fn level(&self, h: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.height_of[a] == h).collect()
    }

    pub fn max_height(&self) -> usize {
        self.height_of.iter().copied().max().unwrap_or(0)
    }

    /// A class is isolated when it is comparable to no other class.
    pub fn is_isolated(&self, alpha: usize) -> bool {
        !(0..self.len()).any(|b| b != alpha && self.comparable(alpha, b))
    }

    /// Whether a directed Hasse path runs from `a` to `b`.
    pub fn hasse_path_exists(&self, a: usize, b: usize) -> bool {
        let c = self.len();
        let mut seen = vec![false; c];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            for &(s, t) in &self.hasse {
                if s == x && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        false
    }
}

/// Connected components of the undirected graph on `0..vertices`; component
/// ids are assigned in order of least vertex.
pub(crate) fn undirected_components(vertices: usize, edges: &[(usize, usize)]) -> (Vec<usize>, usize) {
    let mut adj = vec![Vec::new(); vertices];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut comp = vec![usize::MAX; vertices];
    let mut count = 0;
    for start in 0..vertices {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if comp[y] == usize::MAX {
                    comp[y] = count;
                    queue.push_back(y);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}
