//! The lattice `A(C)` of antichains of a finite poset and the automorphisms
//! of the poset that act on it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::QuotientPoset;

/// Default cap on the number of classes handled by [`AntichainLattice`].
pub const DEFAULT_CLASS_CAP: usize = 20;
const HARD_CLASS_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("poset has {classes} classes, above the antichain cap of {cap}")]
    TooManyClasses { classes: usize, cap: usize },
    #[error("{0} is not an antichain")]
    NotAntichain(Antichain),
    #[error("map is not a bijection on antichains (at {0})")]
    NotBijective(Antichain),
    #[error("map does not preserve and reflect order: {0} vs {1}")]
    NotOrderAutomorphism(Antichain, Antichain),
}

/// A set of pairwise incomparable classes, stored as a bitset over the
/// canonical class order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Antichain(pub u64);

impl Antichain {
    pub const EMPTY: Antichain = Antichain(0);

    pub fn from_members(members: &[usize]) -> Self {
        Antichain(members.iter().fold(0, |acc, &a| acc | (1u64 << a)))
    }

    pub fn singleton(alpha: usize) -> Self {
        Antichain(1u64 << alpha)
    }

    pub fn contains(self, alpha: usize) -> bool {
        self.0 >> alpha & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn members(self) -> Vec<usize> {
        (0..64).filter(|&a| self.contains(a)).collect()
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().iter().map(|a| (a + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// An order automorphism of the class poset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PosetAutomorphism {
    map: Vec<usize>,
    multiplicity_preserving: bool,
}

impl PosetAutomorphism {
    pub fn identity(classes: usize) -> Self {
        PosetAutomorphism {
            map: (0..classes).collect(),
            multiplicity_preserving: true,
        }
    }

    /// Validates `map` against the poset.
    pub fn new(q: &QuotientPoset, map: Vec<usize>) -> Option<Self> {
        let c = q.len();
        if map.len() != c {
            return None;
        }
        let mut seen = vec![false; c];
        for &x in &map {
            if x >= c || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        for a in 0..c {
            for b in 0..c {
                if q.leq(a, b) != q.leq(map[a], map[b]) {
                    return None;
                }
            }
        }
        let multiplicity_preserving = (0..c).all(|a| q.multiplicity(a) == q.multiplicity(map[a]));
        Some(PosetAutomorphism {
            map,
            multiplicity_preserving,
        })
    }

    pub fn apply(&self, alpha: usize) -> usize {
        self.map[alpha]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Whether `m_α = m_{g(α)}` for every class, i.e. membership in `Aut₀(C)`.
    pub fn is_multiplicity_preserving(&self) -> bool {
        self.multiplicity_preserving
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(a, &b)| a == b)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PosetAutomorphism) -> PosetAutomorphism {
        PosetAutomorphism {
            map: other.map.iter().map(|&a| self.map[a]).collect(),
            multiplicity_preserving: self.multiplicity_preserving && other.multiplicity_preserving,
        }
    }

    pub fn inverse(&self) -> PosetAutomorphism {
        let mut map = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            map[b] = a;
        }
        PosetAutomorphism {
            map,
            multiplicity_preserving: self.multiplicity_preserving,
        }
    }

    /// `f_g(D) = {g(α) | α ∈ D}`.
    pub fn apply_antichain(&self, d: Antichain) -> Antichain {
        Antichain(
            d.members()
                .into_iter()
                .fold(0, |acc, a| acc | (1u64 << self.map[a])),
        )
    }

    /// The permutation `τ` of connected components with `g(C^t) = C^{τ(t)}`.
    pub fn component_permutation(&self, q: &QuotientPoset) -> Vec<usize> {
        let mut tau = vec![usize::MAX; q.num_components()];
        for a in 0..q.len() {
            tau[q.component_of(a)] = q.component_of(self.map[a]);
        }
        tau
    }
}

/// All order automorphisms of `q`, optionally restricted to `Aut₀(C)`,
/// sorted lexicographically by their class map.
pub fn poset_automorphisms(q: &QuotientPoset, multiplicity_preserving: bool) -> Vec<PosetAutomorphism> {
    let c = q.len();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; c];
    let mut used = vec![false; c];
    extend_automorphism(q, multiplicity_preserving, 0, &mut map, &mut used, &mut out);
    out
}

fn extend_automorphism(
    q: &QuotientPoset,
    mult: bool,
    a: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<PosetAutomorphism>,
) {
    let c = q.len();
    if a == c {
        out.push(PosetAutomorphism::new(q, map.clone()).expect("constructed consistently"));
        return;
    }
    for b in 0..c {
        if used[b] || q.height(a) != q.height(b) {
            continue;
        }
        if mult && q.multiplicity(a) != q.multiplicity(b) {
            continue;
        }
        let consistent = (0..a).all(|x| q.leq(x, a) == q.leq(map[x], b) && q.leq(a, x) == q.leq(b, map[x]));
        if !consistent {
            continue;
        }
        map[a] = b;
        used[b] = true;
        extend_automorphism(q, mult, a + 1, map, used, out);
        used[b] = false;
    }
    map[a] = usize::MAX;
}

/// Antichains of a poset with the meet and join induced from the submodule
/// lattice of a flag.
#[derive(Debug, Clone)]
pub struct AntichainLattice {
    poset: QuotientPoset,
    down: Vec<u64>,
    elements: Vec<Antichain>,
}

impl AntichainLattice {
    pub fn new(q: &QuotientPoset) -> Result<Self, LatticeError> {
        Self::with_cap(q, DEFAULT_CLASS_CAP)
    }

    pub fn with_cap(q: &QuotientPoset, cap: usize) -> Result<Self, LatticeError> {
        let c = q.len();
        let cap = cap.min(HARD_CLASS_CAP);
        if c > cap {
            return Err(LatticeError::TooManyClasses { classes: c, cap });
        }
        let down = (0..c)
            .map(|a| (0..c).filter(|&b| q.leq(b, a)).fold(0u64, |m, b| m | 1 << b))
            .collect();
        let mut elements = Vec::new();
        collect_antichains(q, 0, 0, &mut elements);
        elements.sort_by_key(|d| (d.len(), d.members()));
        Ok(AntichainLattice {
            poset: q.clone(),
            down,
            elements,
        })
    }

    pub fn poset(&self) -> &QuotientPoset {
        &self.poset
    }

    /// Every antichain, `∅` first, then by size and lexicographically.
    pub fn antichains(&self) -> &[Antichain] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_antichain(&self, d: Antichain) -> bool {
        let members = d.members();
        if members.last().is_some_and(|&a| a >= self.poset.len()) {
            return false;
        }
        members
            .iter()
            .all(|&a| members.iter().all(|&b| a == b || !self.poset.comparable(a, b)))
    }

    fn check(&self, d: Antichain) -> Result<(), LatticeError> {
        if self.is_antichain(d) {
            Ok(())
        } else {
            Err(LatticeError::NotAntichain(d))
        }
    }

    /// The down-set `{α | α ≤ β for some β ∈ S}` of an arbitrary class set.
    pub fn lower_set(&self, s: Antichain) -> u64 {
        s.members().into_iter().fold(0, |m, a| m | self.down[a])
    }

    /// Maximal elements of an arbitrary class set.
    pub fn maximal(&self, s: u64) -> Antichain {
        let set = Antichain(s);
        let keep = set
            .members()
            .into_iter()
            .filter(|&a| !set.members().into_iter().any(|b| self.poset.lt(a, b)));
        Antichain(keep.fold(0, |m, a| m | 1 << a))
    }

    /// `D ≤ E` iff every member of `D` lies below some member of `E`.
    pub fn leq(&self, d: Antichain, e: Antichain) -> Result<bool, LatticeError> {
        self.check(d)?;
        self.check(e)?;
        Ok(self.leq_unchecked(d, e))
    }

    fn leq_unchecked(&self, d: Antichain, e: Antichain) -> bool {
        let lower_e = self.lower_set(e);
        d.0 & !lower_e == 0
    }

    pub fn meet(&self, d: Antichain, e: Antichain) -> Result<Antichain, LatticeError> {
        self.check(d)?;
        self.check(e)?;
        Ok(self.maximal(self.lower_set(d) & self.lower_set(e)))
    }

    pub fn join(&self, d: Antichain, e: Antichain) -> Result<Antichain, LatticeError> {
        self.check(d)?;
        self.check(e)?;
        Ok(self.maximal(d.0 | e.0))
    }

    /// Recovers the poset automorphism `g` with `f = f_g` from a lattice
    /// automorphism `f`, peeling the poset level by level.
    pub fn decompose(&self, f: &BTreeMap<Antichain, Antichain>) -> Result<PosetAutomorphism, LatticeError> {
        self.validate_automorphism(f)?;
        let q = &self.poset;
        let c = q.len();
        let mut g = vec![usize::MAX; c];
        let mut peeled = 0u64;
        for h in 0..=q.max_height() {
            // minimal non-empty antichains outside P(L_0 ∪ .. ∪ L_{h-1})
            let rest: Vec<Antichain> = self
                .elements
                .iter()
                .copied()
                .filter(|d| !d.is_empty() && d.0 & !peeled != 0)
                .collect();
            let minimal: BTreeSet<Antichain> = rest
                .iter()
                .copied()
                .filter(|&d| !rest.iter().any(|&e| e != d && self.leq_unchecked(e, d)))
                .collect();
            debug_assert!(minimal
                .iter()
                .all(|d| d.len() == 1 && q.height(d.members()[0]) == h));
            for &d in &minimal {
                let image = f[&d];
                if !minimal.contains(&image) {
                    return Err(LatticeError::NotOrderAutomorphism(d, image));
                }
                g[d.members()[0]] = image.members()[0];
            }
            for a in q.level(h) {
                peeled |= 1 << a;
            }
        }
        let g = PosetAutomorphism::new(q, g).expect("peeling of a lattice automorphism yields a poset automorphism");
        for &d in &self.elements {
            if g.apply_antichain(d) != f[&d] {
                return Err(LatticeError::NotOrderAutomorphism(d, f[&d]));
            }
        }
        Ok(g)
    }

    /// Checks that `f` is a bijection on `A(C)` preserving and reflecting `≤`.
    pub fn validate_automorphism(&self, f: &BTreeMap<Antichain, Antichain>) -> Result<(), LatticeError> {
        let mut hit = BTreeSet::new();
        for &d in &self.elements {
            let Some(&image) = f.get(&d) else {
                return Err(LatticeError::NotBijective(d));
            };
            if !self.is_antichain(image) || !hit.insert(image) {
                return Err(LatticeError::NotBijective(image));
            }
        }
        if f.len() != self.elements.len() {
            let extra = f.keys().find(|d| !self.is_antichain(**d)).copied().unwrap_or_default();
            return Err(LatticeError::NotBijective(extra));
        }
        for &d in &self.elements {
            for &e in &self.elements {
                if self.leq_unchecked(d, e) != self.leq_unchecked(f[&d], f[&e]) {
                    return Err(LatticeError::NotOrderAutomorphism(d, e));
                }
            }
        }
        Ok(())
    }

    /// The map `f_g` as a table.
    pub fn induced_map(&self, g: &PosetAutomorphism) -> BTreeMap<Antichain, Antichain> {
        self.elements.iter().map(|&d| (d, g.apply_antichain(d))).collect()
    }
}

impl Default for Antichain {
    fn default() -> Self {
        Antichain::EMPTY
    }
}

fn collect_antichains(q: &QuotientPoset, next: usize, current: u64, out: &mut Vec<Antichain>) {
    out.push(Antichain(current));
    for a in next..q.len() {
        let ok = Antichain(current).members().into_iter().all(|b| !q.comparable(a, b));
        if ok {
            collect_antichains(q, a + 1, current | 1 << a, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn lattice(p: crate::poset::Preorder) -> AntichainLattice {
        AntichainLattice::new(&QuotientPoset::new(&p)).unwrap()
    }

    fn ac(members: &[usize]) -> Antichain {
        Antichain::from_members(members)
    }

    // subset filter over all 2^c class sets
    fn brute_antichain_count(q: &QuotientPoset) -> usize {
        let c = q.len();
        (0u64..1 << c)
            .filter(|&s| {
                let m = Antichain(s).members();
                m.iter().all(|&a| m.iter().all(|&b| a == b || !q.comparable(a, b)))
            })
            .count()
    }

    #[test]
    fn enumeration_counts() {
        let vee = lattice(fixtures::vee());
        assert_eq!(
            vee.antichains(),
            &[ac(&[]), ac(&[0]), ac(&[1]), ac(&[2]), ac(&[0, 1])]
        );
        let ex = lattice(fixtures::ex56());
        assert_eq!(ex.len(), 7);
        assert!(ex.antichains().contains(&ac(&[0, 1])));
        assert!(ex.antichains().contains(&ac(&[2, 3])));
        assert_eq!(lattice(fixtures::full2()).len(), 2);
        for (_, p) in fixtures::all() {
            let l = lattice(p);
            assert_eq!(l.len(), brute_antichain_count(l.poset()));
        }
    }

    #[test]
    fn order_examples() {
        let l = lattice(fixtures::vee());
        assert!(l.leq(ac(&[0]), ac(&[2])).unwrap());
        assert!(l.leq(ac(&[0, 1]), ac(&[2])).unwrap());
        assert!(!l.leq(ac(&[2]), ac(&[0, 1])).unwrap());
        for &d in l.antichains() {
            assert!(l.leq(Antichain::EMPTY, d).unwrap());
        }
        assert_eq!(l.leq(ac(&[0, 2]), ac(&[2])), Err(LatticeError::NotAntichain(ac(&[0, 2]))));
    }

    #[test]
    fn meet_and_join_examples() {
        let l = lattice(fixtures::vee());
        assert_eq!(l.meet(ac(&[0]), ac(&[1])).unwrap(), Antichain::EMPTY);
        assert_eq!(l.meet(ac(&[2]), ac(&[0, 1])).unwrap(), ac(&[0, 1]));
        assert_eq!(l.join(ac(&[0]), ac(&[1])).unwrap(), ac(&[0, 1]));
        assert_eq!(l.join(ac(&[0]), ac(&[2])).unwrap(), ac(&[2]));
        for &d in l.antichains() {
            assert_eq!(l.meet(d, d).unwrap(), d);
            assert_eq!(l.join(d, Antichain::EMPTY).unwrap(), d);
        }
    }

    #[test]
    fn automorphism_counts() {
        let ex = QuotientPoset::new(&fixtures::ex56());
        let auts = poset_automorphisms(&ex, false);
        assert_eq!(auts.len(), 4);
        assert_eq!(auts[1].map(), &[0, 1, 3, 2]);
        let cls = QuotientPoset::new(&fixtures::cls3());
        assert_eq!(poset_automorphisms(&cls, true).len(), 1);
        let vee = QuotientPoset::new(&fixtures::vee());
        assert_eq!(poset_automorphisms(&vee, true).len(), 2);
    }

    #[test]
    fn aut0_filters_multiplicities() {
        // two incomparable classes of sizes 2 and 1
        let p = crate::poset::Preorder::closure(3, &[(0, 1), (1, 0)]).unwrap().preorder;
        let q = QuotientPoset::new(&p);
        assert_eq!(poset_automorphisms(&q, false).len(), 2);
        assert_eq!(poset_automorphisms(&q, true).len(), 1);
    }

    #[test]
    fn decompose_identity_and_swap() {
        let l = lattice(fixtures::ex56());
        let id = PosetAutomorphism::identity(4);
        assert!(l.decompose(&l.induced_map(&id)).unwrap().is_identity());
        let swap = PosetAutomorphism::new(l.poset(), vec![1, 0, 2, 3]).unwrap();
        assert_eq!(l.decompose(&l.induced_map(&swap)).unwrap(), swap);
    }

    #[test]
    fn decompose_rejects_non_monotone() {
        let l = lattice(fixtures::vee());
        // swap {1} and {3}: a bijection that breaks {1} ≤ {3} vs {3} ≤ {1}
        let mut f = l.induced_map(&PosetAutomorphism::identity(3));
        f.insert(ac(&[0]), ac(&[2]));
        f.insert(ac(&[2]), ac(&[0]));
        match l.decompose(&f) {
            Err(LatticeError::NotOrderAutomorphism(_, _)) => {}
            other => panic!("expected order failure, got {other:?}"),
        }
        let mut g = l.induced_map(&PosetAutomorphism::identity(3));
        g.insert(ac(&[0]), ac(&[1]));
        assert!(matches!(l.decompose(&g), Err(LatticeError::NotBijective(_))));
    }

    #[test]
    fn cap_is_enforced() {
        let q = QuotientPoset::new(&fixtures::ex56());
        assert_eq!(
            AntichainLattice::with_cap(&q, 3).unwrap_err(),
            LatticeError::TooManyClasses { classes: 4, cap: 3 }
        );
    }
}
